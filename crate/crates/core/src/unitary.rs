//! 3×3 unitary groups over F_{q²}: the Hermitian forms, the standard
//! elements q(a,b), h(k), τ, projective classes modulo the centre, the outer
//! automorphisms, and membership oracles for the point-stabilizer subgroups.

use alloc::vec::Vec;
use core::fmt;

use crate::ff::{FieldCtx, FieldElem, FieldError, Tower};

/// Row-major 3×3 matrix.
pub type Mat3 = [FieldElem; 9];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UnitaryError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("q(a,b) requires b + b̄ + a·ā = 0")]
    NotInSylow,
    #[error("h(k) requires k ≠ 0")]
    ZeroTorus,
    #[error("matrix is singular")]
    Singular,
    #[error("field automorphism exponent {i} out of range 0..{limit}")]
    AutoExponent { i: u32, limit: u32 },
    #[error("subfield F_{q_sub}² is not a valid subfield for q = {q}")]
    BadSubfield { q_sub: u32, q: u32 },
    #[error("unknown subgroup case `{0}`")]
    UnknownCase(alloc::string::String),
    #[error("field of order {0} is too large for packed element keys")]
    KeyTooWide(u32),
}

/// The two Gram matrices in use: ]1,1,1[ and [1,1,1].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HermForm {
    Antidiag,
    Identity,
}

impl HermForm {
    pub fn gram(self) -> Mat3 {
        let (z, o) = (FieldElem::ZERO, FieldElem::ONE);
        match self {
            HermForm::Antidiag => [z, z, o, z, o, z, o, z, z],
            HermForm::Identity => [o, z, z, z, o, z, z, z, o],
        }
    }
}

/// A matrix together with the form it is meant to preserve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupElem {
    pub mat: Mat3,
    pub form: HermForm,
}

/// Canonical representative of a coset modulo the scalar centre.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjElem {
    mat: Mat3,
    form: HermForm,
}

impl ProjElem {
    pub fn mat(&self) -> &Mat3 {
        &self.mat
    }

    pub fn form(&self) -> HermForm {
        self.form
    }

    pub fn lift(&self) -> GroupElem {
        GroupElem { mat: self.mat, form: self.form }
    }
}

/// An element x·φ^i of PGU(3,q) ⋊ ⟨φ⟩, φ the entrywise p-th power map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AutoElem {
    pub proj: ProjElem,
    pub field_power: u32,
}

/// Designated point-stabilizer subgroups of T.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubgroupCase {
    /// SO(3,q): real orthogonal matrices w.r.t. the identity form.
    So,
    /// SL(2,q)⋊Z_{(q+1)/d}: stabilizer of the non-isotropic point ⟨(1,0,0)⟩.
    Sl,
    /// PSU(3,q′)·Z_c: matrices over F_{q′²}, q = q′^e with e odd.
    Subfield { q_sub: u32 },
}

impl fmt::Display for SubgroupCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupCase::So => f.write_str("so"),
            SubgroupCase::Sl => f.write_str("sl"),
            SubgroupCase::Subfield { q_sub } => write!(f, "subfield:{q_sub}"),
        }
    }
}

impl core::str::FromStr for SubgroupCase {
    type Err = UnitaryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "so" => Ok(SubgroupCase::So),
            "sl" => Ok(SubgroupCase::Sl),
            _ => s
                .strip_prefix("subfield:")
                .and_then(|t| t.parse().ok())
                .map(|q_sub| SubgroupCase::Subfield { q_sub })
                .ok_or_else(|| UnitaryError::UnknownCase(s.into())),
        }
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// |PSU(3,q)| = q³(q³+1)(q²−1)/(3,q+1).
pub fn psu_order(q: u64) -> u64 {
    q.pow(3) * (q.pow(3) + 1) * (q * q - 1) / gcd(3, q + 1)
}

/// |PGU(3,q)| = q³(q³+1)(q²−1).
pub fn pgu_order(q: u64) -> u64 {
    q.pow(3) * (q.pow(3) + 1) * (q * q - 1)
}

/// Arithmetic context for GU(3,q), SU(3,q) and their projective images.
#[derive(Clone, Debug)]
pub struct Unitary {
    tower: Tower,
    q: u32,
    d: u32,
    center: Vec<FieldElem>,
    coset_min: Vec<FieldElem>,
    to_id: Mat3,
    to_id_inv: Mat3,
}

impl Unitary {
    pub fn new(p: u64, m: u32) -> Result<Self, UnitaryError> {
        Self::from_tower(Tower::new(p, m)?)
    }

    pub fn with_modulus_index(p: u64, m: u32, index: usize) -> Result<Self, UnitaryError> {
        Self::from_tower(Tower::with_modulus_index(p, m, index)?)
    }

    pub fn from_tower(tower: Tower) -> Result<Self, UnitaryError> {
        let q = tower.q();
        let d = gcd(3, q as u64 + 1) as u32;
        let f = &tower.ext;
        let center = f.roots_of_unity(q as u64 + 1);

        // Each coset of μ_{q+1} in F_{q²}^* is {g^(c + j(q−1))}; keep its lex-least member.
        let coset_min = (0..q as u64 - 1)
            .map(|c| {
                (0..=q as u64)
                    .map(|j| f.exp(c + j * (q as u64 - 1)))
                    .min_by_key(|&x| f.lex_rank(x))
                    .expect("nonempty coset")
            })
            .collect();

        let mut u = Unitary {
            tower,
            q,
            d,
            center,
            coset_min,
            to_id: [FieldElem::ZERO; 9],
            to_id_inv: [FieldElem::ZERO; 9],
        };
        let p = u.orthonormalizer();
        u.to_id_inv = u.mat_inv(&p).ok_or(UnitaryError::Singular)?;
        u.to_id = p;
        Ok(u)
    }

    // Rows (1,0,λ)/ν₁, (0,1,0), (1,0,−λ̄)/ν₃ form an orthonormal basis for ]1,1,1[.
    fn orthonormalizer(&self) -> Mat3 {
        let f = self.field();
        let by_lex = |pred: &dyn Fn(FieldElem) -> bool| {
            f.elements()
                .filter(|&x| pred(x))
                .min_by_key(|&x| f.lex_rank(x))
                .expect("element exists")
        };
        let lambda = by_lex(&|x| !f.add(x, f.bar(x)).is_zero());
        let t = f.add(lambda, f.bar(lambda));
        let nu1 = by_lex(&|x| f.mul(x, f.bar(x)) == t);
        let nu3 = by_lex(&|x| f.mul(x, f.bar(x)) == f.neg(t));
        let i1 = f.inv(nu1).expect("nonzero");
        let i3 = f.inv(nu3).expect("nonzero");
        let z = FieldElem::ZERO;
        [
            i1,
            z,
            f.mul(lambda, i1),
            z,
            FieldElem::ONE,
            z,
            i3,
            z,
            f.mul(f.neg(f.bar(lambda)), i3),
        ]
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    /// The field F_{q²} holding all matrix entries.
    #[inline]
    pub fn field(&self) -> &FieldCtx {
        &self.tower.ext
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn p(&self) -> u32 {
        self.tower.p()
    }

    pub fn m(&self) -> u32 {
        self.tower.m()
    }

    /// d = (3, q+1).
    pub fn d(&self) -> u32 {
        self.d
    }

    /// The central scalars μ with μ^{q+1} = 1.
    pub fn center(&self) -> &[FieldElem] {
        &self.center
    }

    pub fn t_order(&self) -> u64 {
        psu_order(self.q as u64)
    }

    /// Change of basis P with P·J·P̄ᵀ = I for the antidiagonal J.
    pub fn orthonormal_basis(&self) -> &Mat3 {
        &self.to_id
    }

    // --- raw matrix arithmetic -------------------------------------------

    pub fn identity_mat(&self) -> Mat3 {
        HermForm::Identity.gram()
    }

    #[inline]
    pub fn mat_mul(&self, a: &Mat3, b: &Mat3) -> Mat3 {
        let f = self.field();
        let mut out = [FieldElem::ZERO; 9];
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = f.mul(a[3 * i], b[j]);
                acc = f.add(acc, f.mul(a[3 * i + 1], b[3 + j]));
                acc = f.add(acc, f.mul(a[3 * i + 2], b[6 + j]));
                out[3 * i + j] = acc;
            }
        }
        out
    }

    pub fn det(&self, a: &Mat3) -> FieldElem {
        let f = self.field();
        let m = |x, y| f.mul(x, y);
        let t0 = f.sub(m(a[4], a[8]), m(a[5], a[7]));
        let t1 = f.sub(m(a[3], a[8]), m(a[5], a[6]));
        let t2 = f.sub(m(a[3], a[7]), m(a[4], a[6]));
        f.add(f.sub(m(a[0], t0), m(a[1], t1)), m(a[2], t2))
    }

    pub fn mat_inv(&self, a: &Mat3) -> Option<Mat3> {
        let f = self.field();
        let di = f.inv(self.det(a))?;
        let m = |x, y| f.mul(x, y);
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| {
            f.sub(m(a[3 * r0 + c0], a[3 * r1 + c1]), m(a[3 * r0 + c1], a[3 * r1 + c0]))
        };
        // adjugate: adj[i][j] = (−1)^{i+j} minor[j][i]
        let adj = [
            cof(1, 2, 1, 2),
            f.neg(cof(0, 2, 1, 2)),
            cof(0, 1, 1, 2),
            f.neg(cof(1, 2, 0, 2)),
            cof(0, 2, 0, 2),
            f.neg(cof(0, 1, 0, 2)),
            cof(1, 2, 0, 1),
            f.neg(cof(0, 2, 0, 1)),
            cof(0, 1, 0, 1),
        ];
        Some(adj.map(|x| f.mul(x, di)))
    }

    /// Entrywise conjugate transpose ḡᵀ.
    pub fn conj_transpose(&self, a: &Mat3) -> Mat3 {
        let f = self.field();
        let mut out = [FieldElem::ZERO; 9];
        for i in 0..3 {
            for j in 0..3 {
                out[3 * j + i] = f.bar(a[3 * i + j]);
            }
        }
        out
    }

    pub fn scale(&self, mu: FieldElem, a: &Mat3) -> Mat3 {
        a.map(|x| self.field().mul(mu, x))
    }

    pub fn diag(&self, a: FieldElem, b: FieldElem, c: FieldElem) -> Mat3 {
        let z = FieldElem::ZERO;
        [a, z, z, z, b, z, z, z, c]
    }

    /// Rank of a 3×3 matrix by elimination.
    pub fn rank(&self, a: &Mat3) -> usize {
        let f = self.field();
        let mut m = *a;
        let mut rank = 0;
        for col in 0..3 {
            let Some(piv) = (rank..3).find(|&r| !m[3 * r + col].is_zero()) else {
                continue;
            };
            for c in 0..3 {
                m.swap(3 * rank + c, 3 * piv + c);
            }
            let inv = f.inv(m[3 * rank + col]).expect("pivot");
            for r in 0..3 {
                if r != rank && !m[3 * r + col].is_zero() {
                    let factor = f.mul(m[3 * r + col], inv);
                    for c in 0..3 {
                        let t = f.mul(factor, m[3 * rank + c]);
                        m[3 * r + c] = f.sub(m[3 * r + c], t);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    // --- the standard elements -------------------------------------------

    /// q(a,b) = [[1,a,b],[0,1,−ā],[0,0,1]] for the antidiagonal form.
    pub fn q_elem(&self, a: FieldElem, b: FieldElem) -> Result<GroupElem, UnitaryError> {
        let f = self.field();
        let c = f.add(f.add(b, f.bar(b)), f.mul(a, f.bar(a)));
        if !c.is_zero() {
            return Err(UnitaryError::NotInSylow);
        }
        let (z, o) = (FieldElem::ZERO, FieldElem::ONE);
        Ok(GroupElem { mat: [o, a, b, z, o, f.neg(f.bar(a)), z, z, o], form: HermForm::Antidiag })
    }

    /// h(k) = diag(k^{−q}, k^{q−1}, k) for the antidiagonal form.
    pub fn h_elem(&self, k: FieldElem) -> Result<GroupElem, UnitaryError> {
        if k.is_zero() {
            return Err(UnitaryError::ZeroTorus);
        }
        let f = self.field();
        let q = self.q as i64;
        Ok(GroupElem {
            mat: self.diag(f.pow(k, -q), f.pow(k, q - 1), k),
            form: HermForm::Antidiag,
        })
    }

    pub fn tau(&self) -> GroupElem {
        let (z, o) = (FieldElem::ZERO, FieldElem::ONE);
        let m1 = self.field().neg(o);
        GroupElem { mat: [z, z, o, z, m1, z, o, z, z], form: HermForm::Antidiag }
    }

    /// All valid (a,b) pairs of the Sylow subgroup Q, in code order.
    pub fn sylow_pairs(&self) -> Vec<(FieldElem, FieldElem)> {
        let f = self.field();
        let mut out = Vec::new();
        for a in f.elements() {
            let na = f.mul(a, f.bar(a));
            for b in f.elements() {
                if f.add(f.add(b, f.bar(b)), na).is_zero() {
                    out.push((a, b));
                }
            }
        }
        out
    }

    // --- membership predicates -------------------------------------------

    pub fn is_unitary(&self, mat: &Mat3, form: HermForm) -> Result<bool, UnitaryError> {
        if self.det(mat).is_zero() {
            return Err(UnitaryError::Singular);
        }
        let g = form.gram();
        let lhs = self.mat_mul(&self.mat_mul(mat, &g), &self.conj_transpose(mat));
        Ok(lhs == g)
    }

    pub fn is_special(&self, mat: &Mat3) -> Result<bool, UnitaryError> {
        let d = self.det(mat);
        if d.is_zero() {
            return Err(UnitaryError::Singular);
        }
        Ok(d == FieldElem::ONE)
    }

    // --- projective classes ----------------------------------------------

    #[inline]
    pub fn canonical(&self, mat: &Mat3) -> Mat3 {
        let f = self.field();
        let Some(&v) = mat.iter().find(|x| !x.is_zero()) else {
            return *mat;
        };
        let l = f.log(v).expect("nonzero") as usize % (self.q as usize - 1);
        let mu = f.div(self.coset_min[l], v).expect("nonzero");
        if mu == FieldElem::ONE {
            *mat
        } else {
            self.scale(mu, mat)
        }
    }

    pub fn projectivize(&self, g: &GroupElem) -> ProjElem {
        ProjElem { mat: self.canonical(&g.mat), form: g.form }
    }

    pub fn proj_identity(&self, form: HermForm) -> ProjElem {
        ProjElem { mat: self.canonical(&self.identity_mat()), form }
    }

    #[inline]
    pub fn proj_mul(&self, a: &ProjElem, b: &ProjElem) -> ProjElem {
        debug_assert_eq!(a.form, b.form);
        ProjElem { mat: self.canonical(&self.mat_mul(&a.mat, &b.mat)), form: a.form }
    }

    pub fn proj_inv(&self, a: &ProjElem) -> ProjElem {
        let inv = self.mat_inv(&a.mat).expect("group elements are invertible");
        ProjElem { mat: self.canonical(&inv), form: a.form }
    }

    pub fn proj_pow(&self, a: &ProjElem, mut e: u64) -> ProjElem {
        let mut acc = self.proj_identity(a.form);
        let mut b = *a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.proj_mul(&acc, &b);
            }
            b = self.proj_mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    pub fn is_proj_identity(&self, a: &ProjElem) -> bool {
        a.mat == self.proj_identity(a.form).mat
    }

    /// Order of a projective element.
    pub fn proj_order(&self, a: &ProjElem) -> u64 {
        let mut x = *a;
        let mut n = 1;
        while !self.is_proj_identity(&x) {
            x = self.proj_mul(&x, a);
            n += 1;
        }
        n
    }

    /// Whether a projective unitary element lies in PSU, i.e. some central
    /// multiple has determinant 1.
    pub fn in_psu(&self, a: &ProjElem) -> bool {
        let f = self.field();
        let det = self.det(&a.mat);
        self.center.iter().any(|&mu| f.mul(f.pow(mu, 3), det) == FieldElem::ONE)
    }

    /// Rewrites an element for the identity Gram matrix: g ↦ P·g·P⁻¹.
    pub fn to_identity_form(&self, a: &GroupElem) -> GroupElem {
        match a.form {
            HermForm::Identity => *a,
            HermForm::Antidiag => GroupElem {
                mat: self.mat_mul(&self.mat_mul(&self.to_id, &a.mat), &self.to_id_inv),
                form: HermForm::Identity,
            },
        }
    }

    pub fn to_antidiag_form(&self, a: &GroupElem) -> GroupElem {
        match a.form {
            HermForm::Antidiag => *a,
            HermForm::Identity => GroupElem {
                mat: self.mat_mul(&self.mat_mul(&self.to_id_inv, &a.mat), &self.to_id),
                form: HermForm::Antidiag,
            },
        }
    }

    pub fn in_form(&self, a: &ProjElem, form: HermForm) -> ProjElem {
        let g = match form {
            HermForm::Identity => self.to_identity_form(&a.lift()),
            HermForm::Antidiag => self.to_antidiag_form(&a.lift()),
        };
        self.projectivize(&g)
    }

    /// Generators q̂(1,b₀), ĥ(k₀), τ̂, q̂(k₀,b₁) of T, with k₀ the least
    /// primitive element of F_{q²} and b₀, b₁ the least valid partners.
    /// The last one is only needed at q = 2, where ĥ(k₀) is trivial.
    pub fn t_generators(&self, form: HermForm) -> Vec<ProjElem> {
        let f = self.field();
        let one = FieldElem::ONE;
        let partner = |a: FieldElem| {
            let na = f.mul(a, f.bar(a));
            f.elements()
                .filter(|&b| f.add(f.add(b, f.bar(b)), na).is_zero())
                .min_by_key(|&b| f.lex_rank(b))
                .expect("trace is surjective")
        };
        let k0 = f.find_of_order(f.order() as u64 - 1).expect("primitive element");
        [
            self.q_elem(one, partner(one)).expect("valid"),
            self.h_elem(k0).expect("nonzero"),
            self.tau(),
            self.q_elem(k0, partner(k0)).expect("valid"),
        ]
            .iter()
            .map(|g| {
                let g = match form {
                    HermForm::Antidiag => *g,
                    HermForm::Identity => self.to_identity_form(g),
                };
                self.projectivize(&g)
            })
            .collect()
    }

    // --- automorphisms ---------------------------------------------------

    /// Entrywise Frobenius x ↦ x^{p^i}, re-canonicalized.
    pub fn apply_field_auto(&self, x: &ProjElem, i: u32) -> Result<ProjElem, UnitaryError> {
        let limit = 2 * self.m();
        if i >= limit {
            return Err(UnitaryError::AutoExponent { i, limit });
        }
        let f = self.field();
        Ok(ProjElem { mat: self.canonical(&x.mat.map(|a| f.frobenius(a, i))), form: x.form })
    }

    /// δ = [μ,1,1] for the identity form, μ the least generator of μ_{q+1}.
    pub fn delta(&self) -> AutoElem {
        let f = self.field();
        let mu = f.find_of_order(self.q as u64 + 1).expect("q+1 divides q²−1");
        let mat = self.diag(mu, FieldElem::ONE, FieldElem::ONE);
        AutoElem {
            proj: self.projectivize(&GroupElem { mat, form: HermForm::Identity }),
            field_power: 0,
        }
    }

    /// (x, i)·(y, j) = (x·φ^i(y), i + j) in PGU(3,q) ⋊ ⟨φ⟩.
    pub fn auto_mul(&self, a: &AutoElem, b: &AutoElem) -> AutoElem {
        let limit = 2 * self.m();
        let twisted = self.apply_field_auto(&b.proj, a.field_power).expect("in range");
        AutoElem {
            proj: self.proj_mul(&a.proj, &twisted),
            field_power: (a.field_power + b.field_power) % limit,
        }
    }

    pub fn auto_order(&self, a: &AutoElem) -> u64 {
        let id = self.proj_identity(a.proj.form);
        let mut x = *a;
        let mut n = 1;
        while !(x.field_power == 0 && x.proj == id) {
            x = self.auto_mul(&x, a);
            n += 1;
        }
        n
    }

    // --- subgroup oracles --------------------------------------------------

    /// Exponent e with q = q′^e, when q′ is a proper subfield order with e odd.
    pub fn subfield_exponent(&self, q_sub: u32) -> Result<u32, UnitaryError> {
        let bad = UnitaryError::BadSubfield { q_sub, q: self.q };
        let p = self.p();
        let mut y = q_sub;
        let mut m_sub = 0;
        while y > 1 && y % p == 0 {
            y /= p;
            m_sub += 1;
        }
        if y != 1 || m_sub == 0 || self.m() % m_sub != 0 {
            return Err(bad);
        }
        let e = self.m() / m_sub;
        if e < 3 || e % 2 == 0 {
            return Err(bad);
        }
        Ok(e)
    }

    /// Membership of a T-element (identity form) in the designated subgroup.
    pub fn subgroup_membership(
        &self,
        case: SubgroupCase,
        x: &ProjElem,
    ) -> Result<bool, UnitaryError> {
        let g = if x.form == HermForm::Identity {
            x.mat
        } else {
            self.to_identity_form(&x.lift()).mat
        };
        let f = self.field();
        let m = self.m();
        Ok(match case {
            SubgroupCase::So => self.center.iter().any(|&mu| {
                let h = self.scale(mu, &g);
                h.iter().all(|&a| f.in_subfield(a, m))
                    && self.det(&h) == FieldElem::ONE
                    && self.mat_mul(&h, &transpose(&h)) == self.identity_mat()
            }),
            SubgroupCase::Sl => [g[1], g[2], g[3], g[6]].iter().all(|a| a.is_zero()),
            SubgroupCase::Subfield { q_sub } => {
                let m_sub = m / self.subfield_exponent(q_sub)?;
                self.center.iter().any(|&mu| {
                    self.scale(mu, &g).iter().all(|&a| f.in_subfield(a, 2 * m_sub))
                })
            }
        })
    }

    /// Packs a canonical matrix into 64 bits; requires q² ≤ 128.
    #[inline]
    pub fn key(&self, a: &ProjElem) -> u64 {
        pack(&a.mat, self.key_bits())
    }

    pub fn key_bits(&self) -> u32 {
        32 - (self.field().order() - 1).leading_zeros()
    }

    pub fn check_key_width(&self) -> Result<(), UnitaryError> {
        if 9 * self.key_bits() > 64 {
            Err(UnitaryError::KeyTooWide(self.field().order()))
        } else {
            Ok(())
        }
    }

    pub fn from_key(&self, key: u64, form: HermForm) -> ProjElem {
        let bits = self.key_bits();
        let mask = (1u64 << bits) - 1;
        let mut mat = [FieldElem::ZERO; 9];
        for (i, slot) in mat.iter_mut().enumerate() {
            *slot = FieldElem(((key >> (bits * i as u32)) & mask) as u32);
        }
        ProjElem { mat, form }
    }

    /// Builds a projective element from a raw matrix (no checks beyond canonicalization).
    pub fn proj_from_mat(&self, mat: &Mat3, form: HermForm) -> ProjElem {
        ProjElem { mat: self.canonical(mat), form }
    }
}

#[inline]
fn pack(m: &Mat3, bits: u32) -> u64 {
    let mut k = 0u64;
    for (i, a) in m.iter().enumerate() {
        k |= (a.0 as u64) << (bits * i as u32);
    }
    k
}

pub fn transpose(a: &Mat3) -> Mat3 {
    [a[0], a[3], a[6], a[1], a[4], a[7], a[2], a[5], a[8]]
}
