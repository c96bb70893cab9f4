//! Concrete actions of T = PSU(3,q): explicit point-stabilizer subgroups,
//! the coset actions on [T:M], and the action on non-isotropic points.

use alloc::boxed::Box;
use alloc::vec::Vec;

use hashbrown::{HashMap, HashSet};

use crate::ff::FieldElem;
use crate::permaction::{
    build_coset_action, coset_perm, orbit_action, CosetIdentifier, Group, KeyedIdentifier,
    PairwiseIdentifier, Perm, PermAction, PermError,
};
use crate::unitary::{gcd, psu_order, HermForm, Mat3, ProjElem, SubgroupCase, Unitary, UnitaryError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PsuError {
    #[error(transparent)]
    Unitary(#[from] UnitaryError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("the {0} case needs q odd")]
    NeedsOddQ(SubgroupCase),
    #[error("{case} subgroup: enumerated {found} elements, expected {expected}")]
    SubgroupOrder { case: SubgroupCase, found: u64, expected: u64 },
    #[error("group closure exceeds {0} elements")]
    ClosureCap(usize),
}

/// Projective unitary elements for one Gram matrix, as a [`Group`].
#[derive(Clone, Copy)]
pub struct ProjGroup<'a> {
    pub u: &'a Unitary,
    pub form: HermForm,
}

impl Group for ProjGroup<'_> {
    type Elem = ProjElem;

    fn identity(&self) -> ProjElem {
        self.u.proj_identity(self.form)
    }

    fn mul(&self, a: &ProjElem, b: &ProjElem) -> ProjElem {
        self.u.proj_mul(a, b)
    }

    fn inv(&self, a: &ProjElem) -> ProjElem {
        self.u.proj_inv(a)
    }
}

/// All elements of ⟨gens⟩, breadth first from the identity.
pub fn closure(u: &Unitary, gens: &[ProjElem], cap: usize) -> Result<Vec<ProjElem>, PsuError> {
    let form = gens.first().map_or(HermForm::Identity, |g| g.form());
    let id = u.proj_identity(form);
    let mut seen = HashSet::new();
    seen.insert(id);
    let mut out = alloc::vec![id];
    let mut i = 0;
    while i < out.len() {
        for g in gens {
            let y = u.proj_mul(&out[i], g);
            if seen.insert(y) {
                if out.len() >= cap {
                    return Err(PsuError::ClosureCap(cap));
                }
                out.push(y);
            }
        }
        i += 1;
    }
    Ok(out)
}

/// c = ((q+1)/(q′+1), 3).
pub fn subfield_c(q: u64, q_sub: u64) -> u64 {
    gcd((q + 1) / (q_sub + 1), 3)
}

/// Order of the designated subgroup M₀ of T.
pub fn subgroup_order(u: &Unitary, case: SubgroupCase) -> u64 {
    let q = u.q() as u64;
    let d = u.d() as u64;
    match case {
        SubgroupCase::So => q * (q * q - 1),
        SubgroupCase::Sl => q * (q * q - 1) * (q + 1) / d,
        SubgroupCase::Subfield { q_sub } => {
            psu_order(q_sub as u64) * subfield_c(q, q_sub as u64)
        }
    }
}

fn herm(u: &Unitary, a: &[FieldElem], b: &[FieldElem]) -> FieldElem {
    let f = u.field();
    a.iter()
        .zip(b)
        .fold(FieldElem::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, f.bar(y))))
}

fn vectors(len: usize, allowed: &[FieldElem]) -> Vec<Vec<FieldElem>> {
    let mut out: Vec<Vec<FieldElem>> = alloc::vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                allowed.iter().map(move |&a| {
                    let mut w = v.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out
}

fn cross(u: &Unitary, a: &[FieldElem], b: &[FieldElem]) -> [FieldElem; 3] {
    let f = u.field();
    let m = |x, y| f.mul(x, y);
    [
        f.sub(m(a[1], b[2]), m(a[2], b[1])),
        f.sub(m(a[2], b[0]), m(a[0], b[2])),
        f.sub(m(a[0], b[1]), m(a[1], b[0])),
    ]
}

/// Every element of M₀ for the identity form, sorted.
pub fn subgroup_elements(u: &Unitary, case: SubgroupCase) -> Result<Vec<ProjElem>, PsuError> {
    let f = u.field();
    let form = HermForm::Identity;
    let one = FieldElem::ONE;
    let mut set: HashSet<ProjElem> = HashSet::new();
    match case {
        SubgroupCase::So => {
            if u.p() == 2 {
                return Err(PsuError::NeedsOddQ(case));
            }
            let fq: Vec<FieldElem> = f.elements().filter(|&a| f.in_subfield(a, u.m())).collect();
            let dot = |a: &[FieldElem], b: &[FieldElem]| {
                a.iter().zip(b).fold(FieldElem::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
            };
            let units: Vec<Vec<FieldElem>> =
                vectors(3, &fq).into_iter().filter(|v| dot(v, v) == one).collect();
            for r1 in &units {
                for r2 in &units {
                    if dot(r1, r2).is_zero() {
                        let r3 = cross(u, r1, r2);
                        let mat = [r1[0], r1[1], r1[2], r2[0], r2[1], r2[2], r3[0], r3[1], r3[2]];
                        set.insert(u.proj_from_mat(&mat, form));
                    }
                }
            }
        }
        SubgroupCase::Sl => {
            let all: Vec<FieldElem> = f.elements().collect();
            let units: Vec<Vec<FieldElem>> =
                vectors(2, &all).into_iter().filter(|v| herm(u, v, v) == one).collect();
            for r1 in &units {
                let w = [f.neg(f.bar(r1[1])), f.bar(r1[0])];
                for &lam in u.center() {
                    let r2 = [f.mul(lam, w[0]), f.mul(lam, w[1])];
                    let det2 = f.sub(f.mul(r1[0], r2[1]), f.mul(r1[1], r2[0]));
                    let a = f.inv(det2).expect("unitary block is invertible");
                    let z = FieldElem::ZERO;
                    let mat = [a, z, z, z, r1[0], r1[1], z, r2[0], r2[1]];
                    set.insert(u.proj_from_mat(&mat, form));
                }
            }
        }
        SubgroupCase::Subfield { q_sub } => {
            let e = u.subfield_exponent(q_sub)?;
            let m_sub = u.m() / e;
            let sub: Vec<FieldElem> =
                f.elements().filter(|&a| f.in_subfield(a, 2 * m_sub)).collect();
            let norm_one: Vec<FieldElem> =
                sub.iter().copied().filter(|&a| f.mul(a, f.bar(a)) == one).collect();
            let units: Vec<Vec<FieldElem>> =
                vectors(3, &sub).into_iter().filter(|v| herm(u, v, v) == one).collect();
            for r1 in &units {
                for r2 in &units {
                    if !herm(u, r1, r2).is_zero() {
                        continue;
                    }
                    let c = cross(u, r1, r2).map(|x| f.bar(x));
                    for &lam in &norm_one {
                        let r3 = c.map(|x| f.mul(lam, x));
                        let mat = [r1[0], r1[1], r1[2], r2[0], r2[1], r2[2], r3[0], r3[1], r3[2]];
                        let x = u.proj_from_mat(&mat, form);
                        if u.in_psu(&x) {
                            set.insert(x);
                        }
                    }
                }
            }
        }
    }
    let mut out: Vec<ProjElem> = set.into_iter().collect();
    out.sort_unstable();
    let expected = subgroup_order(u, case);
    if out.len() as u64 != expected {
        return Err(PsuError::SubgroupOrder { case, found: out.len() as u64, expected });
    }
    Ok(out)
}

/// Greedy generating set: scan `elems` in order, keeping each element not yet
/// in the subgroup generated so far.
pub fn greedy_generators(u: &Unitary, elems: &[ProjElem]) -> Result<Vec<ProjElem>, PsuError> {
    let mut gens: Vec<ProjElem> = Vec::new();
    let mut span: HashSet<ProjElem> = HashSet::new();
    if let Some(first) = elems.first() {
        span.insert(u.proj_identity(first.form()));
    }
    for x in elems {
        if span.len() == elems.len() {
            break;
        }
        if !span.contains(x) {
            gens.push(*x);
            span = closure(u, &gens, elems.len())?.into_iter().collect();
        }
    }
    Ok(gens)
}

/// How cosets of M are told apart during enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CosetMethod {
    /// r₁·r₂⁻¹ ∈ M tested against every known representative.
    Pairwise,
    /// The least element of M·r serves as a hashable label.
    Keyed,
}

type MemberFn<'a> = Box<dyn Fn(&ProjElem) -> bool + 'a>;

pub enum PsuIdentifier<'a> {
    Pairwise(PairwiseIdentifier<ProjGroup<'a>, MemberFn<'a>>),
    Keyed(KeyedIdentifier<ProjGroup<'a>, ProjElem, fn(&ProjElem) -> ProjElem>),
}

impl CosetIdentifier<ProjElem> for PsuIdentifier<'_> {
    fn locate(&self, c: &ProjElem) -> Option<u32> {
        match self {
            PsuIdentifier::Pairwise(i) => i.locate(c),
            PsuIdentifier::Keyed(i) => i.locate(c),
        }
    }

    fn insert(&mut self, rep: &ProjElem, idx: u32) {
        match self {
            PsuIdentifier::Pairwise(i) => i.insert(rep, idx),
            PsuIdentifier::Keyed(i) => i.insert(rep, idx),
        }
    }
}

fn same(x: &ProjElem) -> ProjElem {
    *x
}

/// T acting on the right cosets of an explicit M₀.
pub struct CosetSetup<'a> {
    pub group: ProjGroup<'a>,
    pub case: SubgroupCase,
    pub m_elems: Vec<ProjElem>,
    pub m_gens: Vec<ProjElem>,
    pub t_gens: Vec<ProjElem>,
    pub action: PermAction<ProjElem>,
    pub ident: PsuIdentifier<'a>,
    /// Generators of M₀ as permutations; they fix the trivial coset.
    pub stab: Vec<Perm>,
}

impl<'a> CosetSetup<'a> {
    pub fn new(
        u: &'a Unitary,
        case: SubgroupCase,
        method: CosetMethod,
        cap: usize,
    ) -> Result<Self, PsuError> {
        let group = ProjGroup { u, form: HermForm::Identity };
        let m_elems = subgroup_elements(u, case)?;
        let m_gens = greedy_generators(u, &m_elems)?;
        let t_gens = u.t_generators(HermForm::Identity);
        let mut ident = match method {
            CosetMethod::Pairwise => {
                let member: MemberFn<'a> =
                    Box::new(move |x| u.subgroup_membership(case, x).expect("case validated"));
                PsuIdentifier::Pairwise(PairwiseIdentifier::new(group, member))
            }
            CosetMethod::Keyed => PsuIdentifier::Keyed(KeyedIdentifier::new(
                group,
                m_elems.clone(),
                same as fn(&ProjElem) -> ProjElem,
            )),
        };
        let action = build_coset_action(
            &group,
            &t_gens,
            &mut ident,
            Some(u.t_order()),
            m_elems.len() as u64,
            cap,
        )?;
        let stab = m_gens
            .iter()
            .map(|g| coset_perm(&group, &action, &ident, g))
            .collect::<Result<_, _>>()?;
        Ok(CosetSetup { group, case, m_elems, m_gens, t_gens, action, ident, stab })
    }

    /// Permutation of the cosets induced by right multiplication.
    pub fn perm_of(&self, g: &ProjElem) -> Result<Perm, PsuError> {
        Ok(coset_perm(&self.group, &self.action, &self.ident, g)?)
    }
}

/// A projective point ⟨v⟩ normalized so its first nonzero coordinate is 1.
pub type Point = [FieldElem; 3];

pub fn normalize_point(u: &Unitary, v: &[FieldElem; 3]) -> Point {
    let f = u.field();
    let lead = v.iter().find(|x| !x.is_zero()).copied().unwrap_or(FieldElem::ONE);
    let inv = f.inv(lead).expect("nonzero");
    v.map(|x| f.mul(x, inv))
}

/// Row vector times matrix, normalized.
pub fn point_image(u: &Unitary, v: &Point, g: &Mat3) -> Point {
    let f = u.field();
    let mut w = [FieldElem::ZERO; 3];
    for (j, slot) in w.iter_mut().enumerate() {
        for i in 0..3 {
            *slot = f.add(*slot, f.mul(v[i], g[3 * i + j]));
        }
    }
    normalize_point(u, &w)
}

/// T on the non-isotropic points of the identity form, based at ⟨(1,0,0)⟩.
pub struct PointSetup {
    pub m_elems: Vec<ProjElem>,
    pub m_gens: Vec<ProjElem>,
    pub t_gens: Vec<ProjElem>,
    pub action: PermAction<Point>,
    pub index: HashMap<Point, u32>,
    pub stab: Vec<Perm>,
}

impl PointSetup {
    pub fn new(u: &Unitary, cap: usize) -> Result<Self, PsuError> {
        let t_gens = u.t_generators(HermForm::Identity);
        let start = [FieldElem::ONE, FieldElem::ZERO, FieldElem::ZERO];
        let action = orbit_action(start, t_gens.len(), |v, s| point_image(u, v, t_gens[s].mat()), cap)?;
        let index: HashMap<Point, u32> =
            action.labels().iter().enumerate().map(|(i, p)| (*p, i as u32)).collect();
        let m_elems = subgroup_elements(u, SubgroupCase::Sl)?;
        let m_gens = greedy_generators(u, &m_elems)?;
        let mut setup = PointSetup { m_elems, m_gens, t_gens, action, index, stab: Vec::new() };
        setup.stab = setup
            .m_gens
            .iter()
            .map(|g| setup.perm_of(u, g))
            .collect::<Result<_, _>>()?;
        Ok(setup)
    }

    pub fn perm_of(&self, u: &Unitary, g: &ProjElem) -> Result<Perm, PsuError> {
        self.action
            .labels()
            .iter()
            .map(|v| {
                self.index
                    .get(&point_image(u, v, g.mat()))
                    .copied()
                    .ok_or(PsuError::Perm(PermError::NotClosed))
            })
            .collect()
    }

    /// Whether a point is non-isotropic for the identity form.
    pub fn is_nonisotropic(u: &Unitary, v: &Point) -> bool {
        !herm(u, v, v).is_zero()
    }
}
