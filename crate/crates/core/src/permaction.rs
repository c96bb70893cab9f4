//! Transitive permutation actions: coset enumeration, orbit actions,
//! Schreier vectors, suborbits, regular suborbits and the Saxl graph
//! common-neighbour check.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::hash::Hash;

use hashbrown::{HashMap, HashSet};

/// Default bound on the number of points in a constructed action.
pub const DEFAULT_CAP: usize = 50_000;

const ROOT: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PermError {
    #[error("domain exceeds the cap of {0} points")]
    CapExceeded(usize),
    #[error("generator {0} is not a permutation of the domain")]
    NotPermutation(usize),
    #[error("action is not transitive: point 0 reaches {reached} of {n} points")]
    NotTransitive { reached: usize, n: usize },
    #[error("coset count {n} times |M| = {m} does not equal |G| = {g}")]
    OrderMismatch { n: u64, m: u64, g: u64 },
    #[error("stabilizer generator {0} moves the base point")]
    MovesBasePoint(usize),
    #[error("transversal entry for point {0} does not reach it")]
    BadTransversal(usize),
    #[error("group element maps a coset outside the enumerated domain")]
    NotClosed,
}

/// Minimal group interface used by coset enumeration.
pub trait Group {
    type Elem: Clone;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
}

/// A permutation as the array of images of 0..n.
pub type Perm = Vec<u32>;

pub fn perm_identity(n: usize) -> Perm {
    (0..n as u32).collect()
}

/// Image of `i` under `a` then `b`.
pub fn perm_compose(a: &Perm, b: &Perm) -> Perm {
    a.iter().map(|&x| b[x as usize]).collect()
}

pub fn perm_inverse(a: &Perm) -> Perm {
    let mut out = vec![0u32; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x as usize] = i as u32;
    }
    out
}

pub fn is_permutation(a: &Perm, n: usize) -> bool {
    if a.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &x in a {
        let x = x as usize;
        if x >= n || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// Fixed-width bitset over 0..n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bitset {
    words: Vec<u64>,
    n: usize,
}

impl Bitset {
    pub fn new(n: usize) -> Self {
        Bitset { words: vec![0; n.div_ceil(64)], n }
    }

    pub fn from_indices(n: usize, idx: impl IntoIterator<Item = u32>) -> Self {
        let mut b = Self::new(n);
        for i in idx {
            b.insert(i as usize);
        }
        b
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn intersects(&self, other: &Bitset) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + t)
            })
        })
    }
}

/// A transitive action on 0..n with a Schreier vector rooted at point 0.
#[derive(Clone, Debug)]
pub struct PermAction<L> {
    n: usize,
    gens: Vec<Perm>,
    inv_gens: Vec<Perm>,
    parent: Vec<u32>,
    via: Vec<u32>,
    labels: Vec<L>,
}

impl<L> PermAction<L> {
    /// Validates the generators and builds the Schreier vector from point 0.
    pub fn new(gens: Vec<Perm>, labels: Vec<L>) -> Result<Self, PermError> {
        let n = labels.len();
        for (i, g) in gens.iter().enumerate() {
            if !is_permutation(g, n) {
                return Err(PermError::NotPermutation(i));
            }
        }
        let inv_gens = gens.iter().map(perm_inverse).collect();
        let mut parent = vec![ROOT; n];
        let mut via = vec![ROOT; n];
        let mut seen = vec![false; n];
        let mut reached = 0;
        if n > 0 {
            seen[0] = true;
            reached = 1;
            let mut queue = VecDeque::from([0u32]);
            while let Some(x) = queue.pop_front() {
                for (s, g) in gens.iter().enumerate() {
                    let y = g[x as usize];
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        parent[y as usize] = x;
                        via[y as usize] = s as u32;
                        reached += 1;
                        queue.push_back(y);
                    }
                }
            }
        }
        if reached != n {
            return Err(PermError::NotTransitive { reached, n });
        }
        Ok(PermAction { n, gens, inv_gens, parent, via, labels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gens(&self) -> &[Perm] {
        &self.gens
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    /// Generator indices of a word carrying point 0 to `i`, applied left to right.
    pub fn transversal_word(&self, i: usize) -> Vec<u32> {
        let mut w = Vec::new();
        let mut x = i;
        while self.via[x] != ROOT {
            w.push(self.via[x]);
            x = self.parent[x] as usize;
        }
        w.reverse();
        w
    }

    #[inline]
    pub fn apply_word(&self, word: &[u32], mut x: u32) -> u32 {
        for &s in word {
            x = self.gens[s as usize][x as usize];
        }
        x
    }

    #[inline]
    pub fn apply_word_inverse(&self, word: &[u32], mut x: u32) -> u32 {
        for &s in word.iter().rev() {
            x = self.inv_gens[s as usize][x as usize];
        }
        x
    }

    /// Confirms every transversal word carries point 0 to its point.
    pub fn check_transversal(&self) -> Result<(), PermError> {
        for i in 0..self.n {
            if self.apply_word(&self.transversal_word(i), 0) != i as u32 {
                return Err(PermError::BadTransversal(i));
            }
        }
        Ok(())
    }

    /// The permutation induced by the transversal word to `i`.
    pub fn transversal_perm(&self, i: usize) -> Perm {
        let w = self.transversal_word(i);
        (0..self.n as u32).map(|x| self.apply_word(&w, x)).collect()
    }
}

/// Decides which enumerated coset a group element falls in.
pub trait CosetIdentifier<E> {
    fn locate(&self, c: &E) -> Option<u32>;
    fn insert(&mut self, rep: &E, idx: u32);
}

/// Identifies Mr₁ = Mr₂ by testing r₁·r₂⁻¹ ∈ M against every stored representative.
pub struct PairwiseIdentifier<G: Group, F> {
    group: G,
    member: F,
    inv_reps: Vec<G::Elem>,
}

impl<G: Group, F: Fn(&G::Elem) -> bool> PairwiseIdentifier<G, F> {
    pub fn new(group: G, member: F) -> Self {
        PairwiseIdentifier { group, member, inv_reps: Vec::new() }
    }
}

impl<G: Group, F: Fn(&G::Elem) -> bool> CosetIdentifier<G::Elem> for PairwiseIdentifier<G, F> {
    fn locate(&self, c: &G::Elem) -> Option<u32> {
        self.inv_reps
            .iter()
            .position(|ri| (self.member)(&self.group.mul(c, ri)))
            .map(|i| i as u32)
    }

    fn insert(&mut self, rep: &G::Elem, _idx: u32) {
        self.inv_reps.push(self.group.inv(rep));
    }
}

/// Labels the coset Mc by the least key over {m·c : m ∈ M}.
pub struct KeyedIdentifier<G: Group, K, F> {
    group: G,
    members: Vec<G::Elem>,
    key: F,
    index: HashMap<K, u32>,
}

impl<G: Group, K: Hash + Eq + Ord, F: Fn(&G::Elem) -> K> KeyedIdentifier<G, K, F> {
    pub fn new(group: G, members: Vec<G::Elem>, key: F) -> Self {
        KeyedIdentifier { group, members, key, index: HashMap::new() }
    }

    fn label(&self, c: &G::Elem) -> K {
        self.members
            .iter()
            .map(|m| (self.key)(&self.group.mul(m, c)))
            .min()
            .expect("M contains the identity")
    }
}

impl<G: Group, K: Hash + Eq + Ord, F: Fn(&G::Elem) -> K> CosetIdentifier<G::Elem>
    for KeyedIdentifier<G, K, F>
{
    fn locate(&self, c: &G::Elem) -> Option<u32> {
        self.index.get(&self.label(c)).copied()
    }

    fn insert(&mut self, rep: &G::Elem, idx: u32) {
        let k = self.label(rep);
        self.index.insert(k, idx);
    }
}

/// Breadth-first enumeration of the right cosets of M in G = ⟨gens⟩,
/// starting from the trivial coset. Labels are coset representatives.
pub fn build_coset_action<G: Group, I: CosetIdentifier<G::Elem>>(
    group: &G,
    gens: &[G::Elem],
    ident: &mut I,
    group_order: Option<u64>,
    m_order: u64,
    cap: usize,
) -> Result<PermAction<G::Elem>, PermError> {
    let mut reps = vec![group.identity()];
    ident.insert(&reps[0], 0);
    let mut images: Vec<Vec<u32>> = vec![Vec::new(); gens.len()];
    let mut next = 0;
    while next < reps.len() {
        for (s, g) in gens.iter().enumerate() {
            let c = group.mul(&reps[next], g);
            let j = match ident.locate(&c) {
                Some(j) => j,
                None => {
                    if reps.len() >= cap {
                        return Err(PermError::CapExceeded(cap));
                    }
                    let j = reps.len() as u32;
                    ident.insert(&c, j);
                    reps.push(c);
                    j
                }
            };
            images[s].push(j);
        }
        next += 1;
    }
    if let Some(g) = group_order {
        let n = reps.len() as u64;
        if n * m_order != g {
            return Err(PermError::OrderMismatch { n, m: m_order, g });
        }
    }
    PermAction::new(images, reps)
}

/// The permutation of a coset action induced by right multiplication by `g`.
pub fn coset_perm<G: Group, I: CosetIdentifier<G::Elem>>(
    group: &G,
    action: &PermAction<G::Elem>,
    ident: &I,
    g: &G::Elem,
) -> Result<Perm, PermError> {
    action
        .labels()
        .iter()
        .map(|r| ident.locate(&group.mul(r, g)).ok_or(PermError::NotClosed))
        .collect()
}

/// The orbit of `start` under `ngens` maps, as a transitive action labelled by points.
pub fn orbit_action<P: Clone + Hash + Eq>(
    start: P,
    ngens: usize,
    act: impl Fn(&P, usize) -> P,
    cap: usize,
) -> Result<PermAction<P>, PermError> {
    let mut points = vec![start.clone()];
    let mut index: HashMap<P, u32> = HashMap::new();
    index.insert(start, 0);
    let mut images: Vec<Vec<u32>> = vec![Vec::new(); ngens];
    let mut next = 0;
    while next < points.len() {
        for (s, img) in images.iter_mut().enumerate() {
            let y = act(&points[next], s);
            let j = match index.get(&y) {
                Some(&j) => j,
                None => {
                    if points.len() >= cap {
                        return Err(PermError::CapExceeded(cap));
                    }
                    let j = points.len() as u32;
                    index.insert(y.clone(), j);
                    points.push(y);
                    j
                }
            };
            img.push(j);
        }
        next += 1;
    }
    PermAction::new(images, points)
}

/// Orbits of ⟨perms⟩ on 0..n, each sorted, ordered by least point.
pub fn orbits(n: usize, perms: &[Perm]) -> Vec<Vec<u32>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orb = vec![start as u32];
        let mut i = 0;
        while i < orb.len() {
            let x = orb[i] as usize;
            for p in perms {
                let y = p[x] as usize;
                if !seen[y] {
                    seen[y] = true;
                    orb.push(y as u32);
                }
            }
            i += 1;
        }
        orb.sort_unstable();
        out.push(orb);
    }
    out
}

fn check_stabilizer<L>(act: &PermAction<L>, stab: &[Perm]) -> Result<(), PermError> {
    for (i, s) in stab.iter().enumerate() {
        if !is_permutation(s, act.n()) {
            return Err(PermError::NotPermutation(i));
        }
        if s[0] != 0 {
            return Err(PermError::MovesBasePoint(i));
        }
    }
    Ok(())
}

/// The orbits of the point stabilizer G_0, given by generators.
pub fn suborbits<L>(act: &PermAction<L>, stab: &[Perm]) -> Result<Vec<Vec<u32>>, PermError> {
    check_stabilizer(act, stab)?;
    Ok(orbits(act.n(), stab))
}

/// Suborbits of length exactly |M|, i.e. those on which G_0 acts regularly.
pub fn regular_suborbits<L>(
    act: &PermAction<L>,
    stab: &[Perm],
    m_order: u64,
) -> Result<Vec<Vec<u32>>, PermError> {
    Ok(suborbits(act, stab)?
        .into_iter()
        .filter(|o| o.len() as u64 == m_order)
        .collect())
}

/// Outcome of the common-neighbour check on the Saxl graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaxlReport {
    pub n: usize,
    pub base_size_two: bool,
    pub suborbit_lengths: Vec<usize>,
    pub regular_suborbit_sizes: Vec<usize>,
    pub gamma_size: usize,
    /// `None` when the base size is not two and the check does not apply.
    pub conjecture_holds: Option<bool>,
    pub witness_failures: Vec<u32>,
}

/// Γ(0) with the data needed to test each β independently.
pub struct SaxlContext<'a, L> {
    act: &'a PermAction<L>,
    gamma: Vec<u32>,
    gamma_bits: Bitset,
    suborbit_lengths: Vec<usize>,
    regular_sizes: Vec<usize>,
}

impl<'a, L> SaxlContext<'a, L> {
    pub fn new(act: &'a PermAction<L>, stab: &[Perm], m_order: u64) -> Result<Self, PermError> {
        let subs = suborbits(act, stab)?;
        let mut suborbit_lengths: Vec<usize> = subs.iter().map(|o| o.len()).collect();
        suborbit_lengths.sort_unstable();
        let regular: Vec<&Vec<u32>> =
            subs.iter().filter(|o| o.len() as u64 == m_order).collect();
        let mut gamma: Vec<u32> = regular.iter().flat_map(|o| o.iter().copied()).collect();
        gamma.sort_unstable();
        let gamma_bits = Bitset::from_indices(act.n(), gamma.iter().copied());
        Ok(SaxlContext {
            act,
            regular_sizes: regular.iter().map(|o| o.len()).collect(),
            gamma,
            gamma_bits,
            suborbit_lengths,
        })
    }

    pub fn gamma(&self) -> &[u32] {
        &self.gamma
    }

    pub fn gamma_bits(&self) -> &Bitset {
        &self.gamma_bits
    }

    pub fn base_size_two(&self) -> bool {
        !self.gamma.is_empty()
    }

    /// Whether Γ(0) ∩ Γ(β) ≠ ∅, with Γ(β) = Γ(0)^{g_β} for the transversal element g_β.
    pub fn has_common_neighbour(&self, beta: usize) -> bool {
        let w = self.act.transversal_word(beta);
        self.gamma
            .iter()
            .any(|&g| self.gamma_bits.contains(self.act.apply_word(&w, g) as usize))
    }

    /// Whether β ∈ Γ(α) for α = x, via translation back to the base point.
    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        let w = self.act.transversal_word(x);
        self.gamma_bits.contains(self.act.apply_word_inverse(&w, y as u32) as usize)
    }

    /// Full neighbourhood Γ(β) as a bitset.
    pub fn neighbourhood(&self, beta: usize) -> Bitset {
        let w = self.act.transversal_word(beta);
        Bitset::from_indices(self.act.n(), self.gamma.iter().map(|&g| self.act.apply_word(&w, g)))
    }

    /// Assembles the report from the list of β failing the check.
    pub fn report(&self, mut failures: Vec<u32>) -> SaxlReport {
        failures.sort_unstable();
        let base_two = self.base_size_two();
        SaxlReport {
            n: self.act.n(),
            base_size_two: base_two,
            suborbit_lengths: self.suborbit_lengths.clone(),
            regular_suborbit_sizes: self.regular_sizes.clone(),
            gamma_size: self.gamma.len(),
            conjecture_holds: base_two.then_some(failures.is_empty()),
            witness_failures: failures,
        }
    }
}

/// Serial common-neighbour check over every β.
pub fn saxl_check<L>(act: &PermAction<L>, stab: &[Perm], m_order: u64) -> Result<SaxlReport, PermError> {
    let ctx = SaxlContext::new(act, stab, m_order)?;
    if !ctx.base_size_two() {
        return Ok(ctx.report(Vec::new()));
    }
    let failures = (0..act.n())
        .filter(|&b| !ctx.has_common_neighbour(b))
        .map(|b| b as u32)
        .collect();
    Ok(ctx.report(failures))
}

/// All elements of ⟨gens⟩ as permutations; fails past `cap` elements.
pub fn perm_closure(n: usize, gens: &[Perm], cap: usize) -> Result<Vec<Perm>, PermError> {
    let id = perm_identity(n);
    let mut seen: HashSet<Perm> = HashSet::new();
    seen.insert(id.clone());
    let mut elems = vec![id];
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let y = perm_compose(&elems[i], g);
            if !seen.contains(&y) {
                if elems.len() >= cap {
                    return Err(PermError::CapExceeded(cap));
                }
                seen.insert(y.clone());
                elems.push(y);
            }
        }
        i += 1;
    }
    Ok(elems)
}

/// Points β for which some non-identity element of G_0 fixes β.
pub fn shared_stabilizer_points(n: usize, stab_elems: &[Perm]) -> Bitset {
    let mut covered = Bitset::new(n);
    for s in stab_elems {
        if s.iter().enumerate().all(|(i, &x)| i as u32 == x) {
            continue;
        }
        for (i, &x) in s.iter().enumerate() {
            if i as u32 == x {
                covered.insert(i);
            }
        }
    }
    covered
}

/// Pairs (α, β), α ≠ β, whose stabilizers meet only in the identity, for one α.
pub fn trivial_intersections_at<L>(act: &PermAction<L>, covered: &Bitset, alpha: usize) -> Vec<u32> {
    let w = act.transversal_word(alpha);
    (0..act.n() as u32)
        .filter(|&b| b as usize != alpha)
        .filter(|&b| !covered.contains(act.apply_word_inverse(&w, b) as usize))
        .collect()
}

/// Whether G_α ∩ G_β ≠ 1 for every pair of distinct points. Each pair is
/// moved to (0, β′) by the transversal element of α, and β′ is tested
/// against the points fixed by some non-identity element of G_0.
pub fn stabilizer_pairwise_intersect<L>(
    act: &PermAction<L>,
    stab: &[Perm],
    cap: usize,
) -> Result<bool, PermError> {
    check_stabilizer(act, stab)?;
    let elems = perm_closure(act.n(), stab, cap)?;
    let covered = shared_stabilizer_points(act.n(), &elems);
    Ok((0..act.n()).all(|a| trivial_intersections_at(act, &covered, a).is_empty()))
}

/// Number of points fixed by every permutation in `perms`.
pub fn fixed_point_count(n: usize, perms: &[Perm]) -> usize {
    (0..n)
        .filter(|&i| perms.iter().all(|p| p[i] as usize == i))
        .count()
}
