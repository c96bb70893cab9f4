//! Exhaustive enumeration of a projective unitary group and its conjugacy
//! classes, for fields small enough that a matrix packs into 64 bits.

use alloc::vec::Vec;

use hashbrown::HashSet;

use crate::unitary::{HermForm, ProjElem, Unitary, UnitaryError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CensusError {
    #[error(transparent)]
    Unitary(#[from] UnitaryError),
    #[error("group has more than {0} elements")]
    Cap(usize),
}

/// One conjugacy class.
#[derive(Clone, Debug)]
pub struct ClassInfo {
    pub rep: ProjElem,
    pub size: u64,
    pub centralizer: u64,
    pub order: u64,
}

/// All elements of ⟨gens⟩ with their conjugacy classes.
pub struct Census {
    form: HermForm,
    keys: Vec<u64>,
    class_of: Vec<u32>,
    classes: Vec<ClassInfo>,
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let up = parent[parent[x as usize] as usize];
        parent[x as usize] = up;
        x = up;
    }
    x
}

impl Census {
    pub fn new(u: &Unitary, gens: &[ProjElem], cap: usize) -> Result<Self, CensusError> {
        u.check_key_width()?;
        let form = gens.first().map_or(HermForm::Identity, |g| g.form());
        let id = u.proj_identity(form);
        let mut seen: HashSet<u64> = HashSet::new();
        seen.insert(u.key(&id));
        let mut elems = alloc::vec![u.key(&id)];
        let mut i = 0;
        while i < elems.len() {
            let x = u.from_key(elems[i], form);
            for g in gens {
                let k = u.key(&u.proj_mul(&x, g));
                if seen.insert(k) {
                    if elems.len() >= cap {
                        return Err(CensusError::Cap(cap));
                    }
                    elems.push(k);
                }
            }
            i += 1;
        }
        drop(seen);
        elems.sort_unstable();
        let keys = elems;
        let n = keys.len();
        let pos = |k: u64| keys.binary_search(&k).expect("closed under conjugation") as u32;

        let invs: Vec<ProjElem> = gens.iter().map(|g| u.proj_inv(g)).collect();
        let mut parent: Vec<u32> = (0..n as u32).collect();
        for (idx, &k) in keys.iter().enumerate() {
            let x = u.from_key(k, form);
            for (g, gi) in gens.iter().zip(&invs) {
                let y = u.proj_mul(&u.proj_mul(gi, &x), g);
                let j = pos(u.key(&y));
                let (a, b) = (find(&mut parent, idx as u32), find(&mut parent, j));
                if a != b {
                    parent[a.max(b) as usize] = a.min(b);
                }
            }
        }

        // Class ids in order of their least element; the least element is the rep.
        let mut class_of = alloc::vec![u32::MAX; n];
        let mut sizes: Vec<u64> = Vec::new();
        let mut reps: Vec<u64> = Vec::new();
        let mut root_id: hashbrown::HashMap<u32, u32> = hashbrown::HashMap::new();
        for idx in 0..n {
            let r = find(&mut parent, idx as u32);
            let next = root_id.len() as u32;
            let c = *root_id.entry(r).or_insert(next);
            if c as usize == sizes.len() {
                sizes.push(0);
                reps.push(keys[idx]);
            }
            sizes[c as usize] += 1;
            class_of[idx] = c;
        }
        let order = n as u64;
        let classes = reps
            .iter()
            .zip(&sizes)
            .map(|(&k, &size)| {
                let rep = u.from_key(k, form);
                ClassInfo { rep, size, centralizer: order / size, order: u.proj_order(&rep) }
            })
            .collect();
        Ok(Census { form, keys, class_of, classes })
    }

    pub fn order(&self) -> u64 {
        self.keys.len() as u64
    }

    pub fn form(&self) -> HermForm {
        self.form
    }

    pub fn classes(&self) -> &[ClassInfo] {
        &self.classes
    }

    pub fn contains(&self, u: &Unitary, x: &ProjElem) -> bool {
        self.keys.binary_search(&u.key(x)).is_ok()
    }

    /// Class index of `x`, which must be given in the census form.
    pub fn class_index(&self, u: &Unitary, x: &ProjElem) -> Option<usize> {
        let x = if x.form() == self.form { *x } else { u.in_form(x, self.form) };
        self.keys
            .binary_search(&u.key(&x))
            .ok()
            .map(|i| self.class_of[i] as usize)
    }

    /// Elements in a class, decoded.
    pub fn class_members(&self, u: &Unitary, c: usize) -> Vec<ProjElem> {
        self.keys
            .iter()
            .zip(&self.class_of)
            .filter(|(_, &cc)| cc as usize == c)
            .map(|(&k, _)| u.from_key(k, self.form))
            .collect()
    }

    /// |C(x)| for an element of the group.
    pub fn centralizer_order(&self, u: &Unitary, x: &ProjElem) -> Option<u64> {
        self.class_index(u, x).map(|c| self.classes[c].centralizer)
    }

    /// |N(⟨x⟩)| = |C(x)| · #{1 ≤ i < |x| : x^i conjugate to x}, for x of prime order.
    pub fn cyclic_normalizer_order(&self, u: &Unitary, x: &ProjElem) -> Option<u64> {
        let c = self.class_index(u, x)?;
        let r = self.classes[c].order;
        let fused = (1..r)
            .filter(|&i| self.class_index(u, &u.proj_pow(x, i)) == Some(c))
            .count() as u64;
        Some(self.classes[c].centralizer * fused)
    }
}
