//! Table-driven arithmetic in the tower F_p ⊆ F_q ⊆ F_{q²}.
//!
//! Elements are stored as their coefficient vector packed into a `u32`
//! (base-p digits, least significant digit = constant coefficient). Both
//! fields of a tower are built directly over F_p; the embedding of F_q into
//! F_{q²} is computed from a root of the F_q modulus.

use alloc::vec;
use alloc::vec::Vec;

/// Largest field order accepted by [`FieldCtx::new`].
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// Fields up to this order get a full addition table.
const ADD_TABLE_LIMIT: u32 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field order {p}^{k} exceeds the size bound {MAX_FIELD_ORDER}")]
    TooLarge { p: u64, k: u32 },
    #[error("no irreducible polynomial of degree {0} with the requested index")]
    NoIrreducible(u32),
    #[error("zero has no multiplicative order")]
    ZeroOrder,
    #[error("{n} does not divide the multiplicative group order {group}")]
    OrderNotDivisor { n: u64, group: u64 },
    #[error("field has no quadratic subfield declared")]
    NoSubfield,
}

/// A field element, packed as base-p digits of its coefficient vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

// Dense polynomials over F_p, lowest coefficient first, used only while
// choosing a modulus and a primitive element.
mod poly {
    use alloc::vec::Vec;

    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        super::pow_mod(a, p - 2, p)
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let c = r[r.len() - 1] * lead_inv % p;
            for (i, &mi) in m.iter().enumerate() {
                let t = c * mi % p;
                r[shift + i] = (r[shift + i] + p - t) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = alloc::vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        rem(&prod, m, p)
    }

    pub fn pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = alloc::vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            e >>= 1;
        }
        rem(&acc, m, p)
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out = alloc::vec![0u64; n];
        for (i, o) in out.iter_mut().enumerate() {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            *o = (x + p - y) % p;
        }
        trim(&mut out);
        out
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Irreducibility of a monic `f` of degree `k` over F_p.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    let x = [0u64, 1];
    let mut xp = poly::rem(&x, f, p);
    for _ in 1..k {
        xp = poly::pow_mod(&xp, p, f, p);
        let g = poly::gcd(f, &poly::sub(&xp, &x, p), p);
        if g.len() != 1 {
            return false;
        }
    }
    xp = poly::pow_mod(&xp, p, f, p);
    poly::sub(&xp, &poly::rem(&x, f, p), p).is_empty()
}

/// The `index`-th monic irreducible polynomial of degree `k` over F_p,
/// counting from zero in lexicographic order of (c_0, …, c_{k−1}) with
/// c_0 most significant. Returned lowest coefficient first, leading 1 included.
pub fn irreducible_poly(p: u64, k: u32, index: usize) -> Option<Vec<u64>> {
    let k = k as usize;
    let total = p.checked_pow(k as u32)?;
    let mut seen = 0usize;
    for rank in 0..total {
        // rank's base-p digits, most significant first, give c_0, c_1, ...
        let mut f = vec![0u64; k + 1];
        let mut r = rank;
        for i in (0..k).rev() {
            f[i] = r % p;
            r /= p;
        }
        f[k] = 1;
        if k == 1 || (f[0] != 0 && is_irreducible(&f, p)) {
            if seen == index {
                return Some(f);
            }
            seen += 1;
        }
    }
    None
}

/// An immutable finite field F_{p^k} with log/antilog tables.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    p: u32,
    k: u32,
    order: u32,
    modulus: Vec<u64>,
    /// exp[i] = g^i for 0 ≤ i < 2(order−1); doubled to skip a reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    lex: Vec<u32>,
    add: Option<Vec<u32>>,
    pow_p: Vec<u32>,
    sub_degree: Option<u32>,
}

impl FieldCtx {
    /// F_{p^k} with the smallest irreducible modulus.
    pub fn new(p: u64, k: u32) -> Result<Self, FieldError> {
        Self::with_modulus_index(p, k, 0)
    }

    /// F_{p^k} with the `index`-th irreducible modulus in lexicographic order.
    pub fn with_modulus_index(p: u64, k: u32, index: usize) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let order = match p.checked_pow(k) {
            Some(o) if o <= MAX_FIELD_ORDER => o as u32,
            _ => return Err(FieldError::TooLarge { p, k }),
        };
        let modulus = irreducible_poly(p, k, index).ok_or(FieldError::NoIrreducible(k))?;
        let p32 = p as u32;

        let digits = |mut c: u32| -> Vec<u64> {
            let mut v = Vec::with_capacity(k as usize);
            for _ in 0..k {
                v.push((c % p32) as u64);
                c /= p32;
            }
            poly::trim(&mut v);
            v
        };
        let pack = |v: &[u64]| -> u32 {
            let mut c = 0u32;
            for &d in v.iter().rev() {
                c = c * p32 + d as u32;
            }
            c
        };

        let mut lex = vec![0u32; order as usize];
        for (c, slot) in lex.iter_mut().enumerate() {
            let mut r = 0u32;
            let mut x = c as u32;
            for _ in 0..k {
                r = r * p32 + x % p32;
                x /= p32;
            }
            *slot = r;
        }
        let mut by_lex = vec![0u32; order as usize];
        for (c, &r) in lex.iter().enumerate() {
            by_lex[r as usize] = c as u32;
        }

        // Primitive element: least nonzero element in lex order whose
        // multiplicative order is order−1.
        let group = (order - 1) as u64;
        let primes = prime_divisors(group);
        let mut gen = None;
        for &c in by_lex.iter().skip(1) {
            let v = digits(c);
            let ok = primes.iter().all(|&l| {
                let w = poly::pow_mod(&v, group / l, &modulus, p);
                w != [1]
            });
            if ok {
                gen = Some(v);
                break;
            }
        }
        let g = gen.expect("finite field has a primitive element");

        let n1 = (order - 1) as usize;
        let mut exp = vec![0u32; 2 * n1.max(1)];
        let mut log = vec![0u32; order as usize];
        let mut cur = vec![1u64];
        for i in 0..n1.max(1) {
            let c = pack(&cur);
            exp[i] = c;
            log[c as usize] = i as u32;
            cur = poly::mul_mod(&cur, &g, &modulus, p);
        }
        for i in 0..n1 {
            exp[n1 + i] = exp[i];
        }

        let mut neg = vec![0u32; order as usize];
        for (c, slot) in neg.iter_mut().enumerate() {
            let mut x = c as u32;
            let mut out = 0u32;
            let mut place = 1u32;
            for _ in 0..k {
                let dgt = x % p32;
                out += ((p32 - dgt) % p32) * place;
                place *= p32;
                x /= p32;
            }
            *slot = out;
        }

        let mut ctx = FieldCtx {
            p: p32,
            k,
            order,
            modulus,
            exp,
            log,
            neg,
            lex,
            add: None,
            pow_p: Vec::new(),
            sub_degree: None,
        };
        if order <= ADD_TABLE_LIMIT && p32 != 2 {
            let mut tab = vec![0u32; (order * order) as usize];
            for a in 0..order {
                for b in 0..order {
                    tab[(a * order + b) as usize] = ctx.add_digits(a, b);
                }
            }
            ctx.add = Some(tab);
        }
        let mut pp = Vec::with_capacity(k as usize);
        let mut e = 1u64;
        for _ in 0..k {
            pp.push((e % group.max(1)) as u32);
            e = e * p % group.max(1);
        }
        ctx.pow_p = pp;
        Ok(ctx)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Modulus coefficients, constant term first, leading 1 included.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Degree of the subfield fixed by [`FieldCtx::conj`], when declared.
    pub fn subfield_degree(&self) -> Option<u32> {
        self.sub_degree
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let p = self.p;
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        while a > 0 || b > 0 {
            let s = (a % p + b % p) % p;
            out += s * place;
            place *= p;
            a /= p;
            b /= p;
        }
        out
    }

    #[inline]
    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    #[inline]
    pub fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    /// The image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.p as i64) as u32)
    }

    /// Element from its coefficient vector (constant term first).
    pub fn from_coeffs(&self, c: &[u32]) -> FieldElem {
        let mut code = 0u32;
        for &d in c.iter().take(self.k as usize).rev() {
            code = code * self.p + d % self.p;
        }
        FieldElem(code)
    }

    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        let mut x = a.0;
        (0..self.k)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    /// Iterator over all elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.order).map(FieldElem)
    }

    /// Rank of `a` in lexicographic order of (c_0, …, c_{k−1}).
    #[inline]
    pub fn lex_rank(&self, a: FieldElem) -> u32 {
        self.lex[a.0 as usize]
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        match &self.add {
            Some(t) => FieldElem(t[(a.0 * self.order + b.0) as usize]),
            None => FieldElem(self.add_digits(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        FieldElem(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.0 == 0 {
            return None;
        }
        let n1 = self.order - 1;
        let l = self.log[a.0 as usize];
        Some(FieldElem(self.exp[((n1 - l) % n1.max(1)) as usize]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Option<FieldElem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// `a^e` for a signed exponent; zero to a negative power is zero.
    pub fn pow(&self, a: FieldElem, e: i64) -> FieldElem {
        if a.0 == 0 {
            return if e == 0 { FieldElem::ONE } else { FieldElem::ZERO };
        }
        let n1 = (self.order - 1) as i128;
        let l = self.log[a.0 as usize] as i128;
        let idx = (l * e as i128).rem_euclid(n1);
        FieldElem(self.exp[idx as usize])
    }

    /// Discrete logarithm with respect to the table generator.
    pub fn log(&self, a: FieldElem) -> Option<u32> {
        if a.0 == 0 {
            None
        } else {
            Some(self.log[a.0 as usize])
        }
    }

    /// `g^i` for the table generator g.
    pub fn exp(&self, i: u64) -> FieldElem {
        let n1 = (self.order - 1) as u64;
        FieldElem(self.exp[(i % n1.max(1)) as usize])
    }

    /// The generator of the multiplicative group used for the tables.
    pub fn generator(&self) -> FieldElem {
        self.exp(1)
    }

    /// `a^(p^i)`.
    pub fn frobenius(&self, a: FieldElem, i: u32) -> FieldElem {
        if a.0 == 0 {
            return a;
        }
        let n1 = (self.order - 1) as u64;
        let e = self.pow_p[(i % self.k) as usize] as u64;
        let l = self.log[a.0 as usize] as u64;
        FieldElem(self.exp[(l * e % n1.max(1)) as usize])
    }

    /// `a^q` where F_q is the declared subfield of index 2.
    #[inline]
    pub fn conj(&self, a: FieldElem) -> Result<FieldElem, FieldError> {
        let m = self.sub_degree.ok_or(FieldError::NoSubfield)?;
        Ok(self.frobenius(a, m))
    }

    /// Conjugation for contexts known to carry a subfield; panics otherwise.
    #[inline]
    pub fn bar(&self, a: FieldElem) -> FieldElem {
        self.frobenius(a, self.sub_degree.expect("quadratic extension context"))
    }

    pub fn norm(&self, a: FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.mul(a, self.conj(a)?))
    }

    pub fn trace(&self, a: FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.add(a, self.conj(a)?))
    }

    /// Whether `a` lies in the subfield F_{p^deg}.
    pub fn in_subfield(&self, a: FieldElem, deg: u32) -> bool {
        if a.0 == 0 {
            return true;
        }
        let g = gcd(deg as u64, self.k as u64).max(1) as u32;
        let sub = (self.p as u64).pow(g) - 1;
        let n1 = (self.order - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        // a lies in F_{p^g}^* iff its log is a multiple of (p^k−1)/(p^g−1)
        l % (n1 / sub) == 0
    }

    pub fn elem_order(&self, a: FieldElem) -> Result<u64, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::ZeroOrder);
        }
        let n1 = (self.order - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        Ok(n1 / gcd(l, n1))
    }

    /// Least element in lexicographic order having multiplicative order `n`.
    pub fn find_of_order(&self, n: u64) -> Result<FieldElem, FieldError> {
        let group = (self.order - 1) as u64;
        if n == 0 || group % n != 0 {
            return Err(FieldError::OrderNotDivisor { n, group });
        }
        let mut best: Option<FieldElem> = None;
        for c in 1..self.order {
            let a = FieldElem(c);
            if self.elem_order(a)? == n
                && best.map_or(true, |b| self.lex_rank(a) < self.lex_rank(b))
            {
                best = Some(a);
            }
        }
        Ok(best.expect("cyclic group has elements of every divisor order"))
    }

    /// Elements of multiplicative order dividing `n` (the μ_n subgroup), in log order.
    pub fn roots_of_unity(&self, n: u64) -> Vec<FieldElem> {
        let n1 = (self.order - 1) as u64;
        let n = gcd(n, n1);
        let step = n1 / n;
        (0..n).map(|i| self.exp(i * step)).collect()
    }
}

/// F_q, F_{q²} and the embedding of the former in the latter.
#[derive(Clone, Debug)]
pub struct Tower {
    pub base: FieldCtx,
    pub ext: FieldCtx,
    embed: Vec<FieldElem>,
}

impl Tower {
    /// Builds F_{p^m} ⊂ F_{p^{2m}}, each with its smallest irreducible modulus.
    pub fn new(p: u64, m: u32) -> Result<Self, FieldError> {
        Self::with_modulus_index(p, m, 0)
    }

    /// As [`Tower::new`], choosing the `index`-th irreducible modulus for both fields.
    pub fn with_modulus_index(p: u64, m: u32, index: usize) -> Result<Self, FieldError> {
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        match p.checked_pow(2 * m) {
            Some(o) if o <= MAX_FIELD_ORDER => {}
            _ => return Err(FieldError::TooLarge { p, k: 2 * m }),
        }
        let base = FieldCtx::with_modulus_index(p, m, index)?;
        let mut ext = FieldCtx::with_modulus_index(p, 2 * m, index)?;
        ext.sub_degree = Some(m);

        // A root of the base modulus inside the extension, least in lex order.
        let fm = base.modulus();
        let eval = |x: FieldElem| {
            let mut acc = FieldElem::ZERO;
            for &c in fm.iter().rev() {
                acc = ext.add(ext.mul(acc, x), ext.from_int(c as i64));
            }
            acc
        };
        let mut root = None;
        for c in 0..ext.order() {
            let x = FieldElem(c);
            if eval(x).is_zero() && root.map_or(true, |r| ext.lex_rank(x) < ext.lex_rank(r)) {
                root = Some(x);
            }
        }
        let beta = root.ok_or(FieldError::NoIrreducible(m))?;
        let mut powers = Vec::with_capacity(m as usize);
        let mut cur = FieldElem::ONE;
        for _ in 0..m {
            powers.push(cur);
            cur = ext.mul(cur, beta);
        }
        let embed = base
            .elements()
            .map(|a| {
                base.coeffs(a)
                    .iter()
                    .zip(&powers)
                    .fold(FieldElem::ZERO, |acc, (&c, &bp)| {
                        ext.add(acc, ext.mul(ext.from_int(c as i64), bp))
                    })
            })
            .collect();
        Ok(Tower { base, ext, embed })
    }

    pub fn p(&self) -> u32 {
        self.base.p()
    }

    pub fn m(&self) -> u32 {
        self.base.degree()
    }

    /// q = p^m.
    pub fn q(&self) -> u32 {
        self.base.order()
    }

    #[inline]
    pub fn embed(&self, a: FieldElem) -> FieldElem {
        self.embed[a.0 as usize]
    }

    /// Inverse of the embedding, for elements fixed by conjugation.
    pub fn restrict(&self, a: FieldElem) -> Option<FieldElem> {
        self.embed.iter().position(|&x| x == a).map(|i| FieldElem(i as u32))
    }
}
