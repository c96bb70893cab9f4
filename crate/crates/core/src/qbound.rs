//! Exact-rational fixed point counts and the probabilistic common-neighbour
//! criterion Q̌(G) < 1/2 for the subfield and small-socle stabilizers.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::ff::{is_prime, prime_divisors};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoundError {
    #[error("normalizer lists differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("empty normalizer list")]
    Empty,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("fixed point count {fix} outside 0..={omega}")]
    FixOutOfRange { fix: String, omega: String },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("e = {0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("subfield order {0} is too small")]
    SubfieldTooSmall(u64),
    #[error("c = {found}, expected {expected}")]
    WrongC { found: u64, expected: u64 },
    #[error("outside the bound regime: {0}")]
    Regime(String),
    #[error("q = {q} violates the congruence condition for {setting}")]
    Congruence { q: u64, setting: &'static str },
    #[error("parameters too large: {0}")]
    TooLarge(String),
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn rat(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

fn ratio(n: &BigUint, d: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(n.clone()), BigInt::from(d.clone()))
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// |PGU(3,x)| = x³(x³+1)(x²−1).
pub fn pgu_order_big(x: &BigUint) -> BigUint {
    x.pow(3) * (x.pow(3) + 1u32) * (x * x - 1u32)
}

/// Σ nG_i / nH_i over the H-classes of G-conjugates of K in H.
pub fn manning_fix(n_g: &[BigUint], n_h: &[BigUint]) -> Result<BigRational, BoundError> {
    if n_g.len() != n_h.len() {
        return Err(BoundError::LengthMismatch(n_g.len(), n_h.len()));
    }
    if n_g.is_empty() {
        return Err(BoundError::Empty);
    }
    let mut total = BigRational::zero();
    for (g, h) in n_g.iter().zip(n_h) {
        if h.is_zero() {
            return Err(BoundError::ZeroDenominator);
        }
        total += ratio(g, h);
    }
    Ok(total)
}

/// (|M|/|Ω|)·(r−1)·fix/nM.
pub fn q_term(
    m_order: &BigUint,
    omega: &BigRational,
    r: u64,
    fix: &BigRational,
    n_m: &BigUint,
) -> Result<BigRational, BoundError> {
    if m_order.is_zero() {
        return Err(BoundError::NonPositive("|M|"));
    }
    if *omega <= BigRational::zero() {
        return Err(BoundError::NonPositive("|Ω|"));
    }
    if r < 2 {
        return Err(BoundError::NonPositive("r − 1"));
    }
    if *fix < BigRational::zero() {
        return Err(BoundError::NonPositive("fix"));
    }
    if n_m.is_zero() {
        return Err(BoundError::NonPositive("|N_M|"));
    }
    Ok(rat(m_order) / omega * BigRational::from_integer(BigInt::from(r - 1)) * fix / rat(n_m))
}

/// fix/|Ω|.
pub fn fpr(fix: &BigUint, omega: &BigUint) -> Result<BigRational, BoundError> {
    if omega.is_zero() {
        return Err(BoundError::NonPositive("|Ω|"));
    }
    if fix > omega {
        return Err(BoundError::FixOutOfRange { fix: fix.to_string(), omega: omega.to_string() });
    }
    Ok(ratio(fix, omega))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Setting {
    C1,
    C3,
    Psl27,
    Psl29,
}

impl Setting {
    pub fn name(self) -> &'static str {
        match self {
            Setting::C1 => "c1",
            Setting::C3 => "c3",
            Setting::Psl27 => "psl27",
            Setting::Psl29 => "psl29",
        }
    }
}

impl core::str::FromStr for Setting {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "c1" => Ok(Setting::C1),
            "c3" => Ok(Setting::C3),
            "psl27" => Ok(Setting::Psl27),
            "psl29" => Ok(Setting::Psl29),
            _ => Err(format!("unknown setting {s:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Params {
    Subfield { p: u64, m_sub: u32, e: u32 },
    Prime { q: u64 },
}

/// Whether a term uses exact normalizer orders or an upper bound for them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermKind {
    Exact,
    Bound,
}

impl TermKind {
    pub fn name(self) -> &'static str {
        match self {
            TermKind::Exact => "exact",
            TermKind::Bound => "bound",
        }
    }
}

/// One representative subgroup class (or `classes` classes with identical data).
#[derive(Clone, Debug)]
pub struct QTerm {
    pub label: String,
    pub r: u64,
    pub classes: u64,
    pub fix: BigRational,
    pub n_m: BigRational,
    /// Q for a single class.
    pub value: BigRational,
    pub kind: TermKind,
    /// Q from exact normalizer orders, when those are known.
    pub exact: Option<BigRational>,
    /// Q with the simplified closed-form Fix bound, when one is displayed.
    pub closed_form: Option<BigRational>,
}

impl QTerm {
    pub fn contribution(&self) -> BigRational {
        &self.value * BigRational::from_integer(BigInt::from(self.classes))
    }
}

/// A strict budget on one class value or on the sum of a group of terms.
#[derive(Clone, Debug)]
pub struct BudgetCheck {
    pub label: String,
    pub terms: Vec<usize>,
    pub per_class: bool,
    pub amount: BigRational,
    pub budget: BigRational,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct QLedger {
    pub setting: Setting,
    pub params: Params,
    pub m_order: BigUint,
    pub omega: BigRational,
    pub terms: Vec<QTerm>,
    pub budgets: Vec<BudgetCheck>,
    pub total: BigRational,
    /// Total with every displayed closed-form bound substituted, when all terms have one.
    pub closed_total: Option<BigRational>,
    pub verdict: bool,
}

impl QLedger {
    pub fn half() -> BigRational {
        frac(1, 2)
    }

    pub fn budgets_pass(&self) -> bool {
        self.budgets.iter().all(|b| b.pass)
    }

    /// Verdict and every budget.
    pub fn passes(&self) -> bool {
        self.verdict && self.budgets_pass()
    }

    /// Every term with a known exact value is bounded above by its ledger value.
    pub fn exact_audit(&self) -> bool {
        self.terms.iter().all(|t| t.exact.as_ref().map_or(true, |x| *x <= t.value))
    }

    /// Every displayed closed form is at least the ledger value.
    pub fn closed_form_audit(&self) -> bool {
        self.terms.iter().all(|t| t.closed_form.as_ref().map_or(true, |x| *x >= t.value))
    }

    pub fn term(&self, label: &str) -> Option<&QTerm> {
        self.terms.iter().find(|t| t.label == label)
    }
}

struct Builder {
    m_order: BigUint,
    omega: BigRational,
    scale: BigRational,
    terms: Vec<QTerm>,
    budgets: Vec<BudgetCheck>,
}

impl Builder {
    fn new(m_order: BigUint, g_order: &BigUint) -> Self {
        let omega = ratio(g_order, &m_order);
        let scale = rat(&m_order) / &omega;
        Builder { m_order, omega, scale, terms: Vec::new(), budgets: Vec::new() }
    }

    fn q(&self, r: u64, fix: &BigRational, n_m: &BigRational) -> BigRational {
        &self.scale * BigRational::from_integer(BigInt::from(r - 1)) * fix / n_m
    }

    #[allow(clippy::too_many_arguments)]
    fn term(
        &mut self,
        label: String,
        r: u64,
        classes: u64,
        fix: BigRational,
        n_m: BigRational,
        kind: TermKind,
        exact: Option<(BigRational, BigRational)>,
    ) -> usize {
        let value = self.q(r, &fix, &n_m);
        let exact = match kind {
            TermKind::Exact => Some(value.clone()),
            TermKind::Bound => exact.map(|(f, n)| self.q(r, &f, &n)),
        };
        self.terms.push(QTerm { label, r, classes, fix, n_m, value, kind, exact, closed_form: None });
        self.terms.len() - 1
    }

    fn budget(&mut self, label: String, terms: &[usize], per_class: bool, budget: BigRational) {
        let amount = if per_class {
            self.terms[terms[0]].value.clone()
        } else {
            terms.iter().map(|&i| self.terms[i].contribution()).sum()
        };
        let pass = amount < budget;
        self.budgets.push(BudgetCheck { label, terms: terms.to_vec(), per_class, amount, budget, pass });
    }

    fn finish(self, setting: Setting, params: Params) -> QLedger {
        let total: BigRational = self.terms.iter().map(QTerm::contribution).sum();
        let closed_total = if self.terms.iter().all(|t| t.closed_form.is_some()) {
            Some(
                self.terms
                    .iter()
                    .map(|t| {
                        t.closed_form.clone().expect("checked")
                            * BigRational::from_integer(BigInt::from(t.classes))
                    })
                    .sum(),
            )
        } else {
            None
        };
        let verdict = total < QLedger::half();
        QLedger {
            setting,
            params,
            m_order: self.m_order,
            omega: self.omega,
            terms: self.terms,
            budgets: self.budgets,
            total,
            closed_total,
            verdict,
        }
    }
}

fn checked_pow(p: u64, k: u32) -> Result<u64, BoundError> {
    p.checked_pow(k)
        .filter(|&x| x < 1 << 32)
        .ok_or_else(|| BoundError::TooLarge(format!("{p}^{k}")))
}

fn odd_prime_divisors(n: u64) -> Vec<u64> {
    prime_divisors(n).into_iter().filter(|&r| r != 2).collect()
}

/// c = ((q+1)/(q'+1), 3).
pub fn subfield_c(q_sub: u64, e: u32) -> u64 {
    let q = big(q_sub).pow(e);
    let quo = (q + 1u32) / big(q_sub + 1);
    if (quo % 3u32).is_zero() {
        3
    } else {
        1
    }
}

fn check_subfield_params(p: u64, m_sub: u32, e: u32) -> Result<u64, BoundError> {
    if !is_prime(p) {
        return Err(BoundError::NotPrime(p));
    }
    if e < 3 || !is_prime(e as u64) {
        return Err(BoundError::NotOddPrime(e as u64));
    }
    if m_sub == 0 {
        return Err(BoundError::SubfieldTooSmall(1));
    }
    let qs = checked_pow(p, m_sub)?;
    if qs == 2 {
        return Err(BoundError::SubfieldTooSmall(2));
    }
    Ok(qs)
}

/// Ledger for the subfield stabilizer PGU(3,q'):⟨f⟩ in PΓU(3,q) with c = 1.
pub fn qcheck_c1(p: u64, m_sub: u32, e: u32) -> Result<QLedger, BoundError> {
    let qs_u = check_subfield_params(p, m_sub, e)?;
    let c = subfield_c(qs_u, e);
    if c != 1 {
        return Err(BoundError::WrongC { found: c, expected: 1 });
    }
    if !((e >= 5 && qs_u >= 3) || (e == 3 && qs_u >= 4)) {
        return Err(BoundError::Regime(format!("e = {e}, q' = {qs_u}")));
    }
    let small = e == 3 && qs_u == 4;
    let special = e == 3 && matches!((p, m_sub), (2, 2) | (2, 4) | (3, 2));
    let m = m_sub as u64 * e as u64;
    let two_m = big(2 * m);
    let qs = big(qs_u);
    let q = qs.pow(e);
    let one = BigUint::one();
    let (q2, qs2) = (&q * &q, &qs * &qs);
    let (q_m, q_p) = (&q - &one, &q + &one);
    let (qs_m, qs_p) = (&qs - &one, &qs + &one);
    let q_cyc = &q2 - &q + &one;
    let qs_cyc = &qs2 - &qs + &one;
    let pm1 = big(p - 1);

    let m_order = &two_m * pgu_order_big(&qs);
    let g_order = &two_m * pgu_order_big(&q);
    let mut b = Builder::new(m_order.clone(), &g_order);
    let budget = |x: i64, y: i64| frac(x, y);
    let per = |n: &BigUint| ratio(&one, &(n * 26u32));
    let mo = rat(&m_order);

    if p != 2 {
        let ng = &q * (&q2 - &one) * &q_p;
        let nm1 = &qs * (&qs2 - &one) * &qs_p;
        let i = b.term("z2".into(), 2, 1, ratio(&ng, &nm1), rat(&(&two_m * &nm1)), TermKind::Exact, None);
        b.budget("z2".into(), &[i], true, budget(1, 26));
    }

    let ng0 = q.pow(3) * &q_p * &pm1;
    let nm0 = qs.pow(3) * &qs_p * &pm1;
    let i = if small {
        b.term("z0".into(), p, 1, ratio(&ng0, &nm0), rat(&(&two_m * &nm0)), TermKind::Exact, None)
    } else {
        b.term(
            "z0".into(),
            p,
            1,
            ratio(&(&two_m * &ng0), &nm0),
            rat(&nm0),
            TermKind::Bound,
            Some((ratio(&ng0, &nm0), rat(&(&two_m * &nm0)))),
        )
    };
    b.budget("z0".into(), &[i], true, if small { budget(1, 260) } else { budget(1, 26) });

    // In characteristic 2 this class has order 4; the term is kept as an over-count.
    let ngl = &q2 * &pm1;
    let nml = &qs2 * &pm1;
    let exact_l = (p != 2).then(|| (ratio(&ngl, &nml), rat(&(&two_m * &nml))));
    let i = b.term(
        "z0'".into(),
        p,
        1,
        ratio(&(&two_m * &ngl), &nml),
        rat(&nml),
        TermKind::Bound,
        exact_l,
    );
    b.budget("z0'".into(), &[i], true, if small { budget(17, 520) } else { budget(1, 26) });

    if (qs_u + 1) % 3 == 0 {
        let six_m = big(6 * m);
        // s = 2 in G and s' = 1 in M maximize the term.
        let ng = &six_m * 2u32 * &q_p * &q_p;
        let nm = &six_m * &qs_p * &qs_p;
        let i = b.term("zA".into(), 3, 1, ratio(&ng, &nm), rat(&nm), TermKind::Bound, None);
        b.budget("zA".into(), &[i], true, budget(1, 26));
        let ng = &two_m * &q * &q_p * &q_p * &q_m;
        let nm = &two_m * &qs * &qs_p * &qs_p * &qs_m;
        let i = b.term("zB".into(), 3, 1, ratio(&ng, &nm), rat(&nm), TermKind::Exact, None);
        b.budget("zB".into(), &[i], true, budget(1, 26));
        let ng = &six_m * &q_cyc;
        let nm = &six_m * &qs_cyc;
        let i = b.term("delta'".into(), 3, 1, ratio(&ng, &nm), rat(&nm), TermKind::Exact, None);
        b.budget("delta'".into(), &[i], true, budget(1, 26));
    }

    for t in odd_prime_divisors(qs_u - 1) {
        let ng = big(2) * (&q2 - &one) * &two_m;
        let nm = big(2) * (&qs2 - &one) * &two_m;
        let label = format!("z_{{q'-1}}[r={t}]");
        let i = b.term(label.clone(), t, 1, ratio(&ng, &nm), rat(&nm), TermKind::Exact, None);
        b.budget(label, &[i], true, if small { budget(1, 1300) } else { per(&qs_m) });
    }

    for s in prime_divisors(qs_u + 1).into_iter().filter(|&s| s >= 5) {
        let ng = big(6) * &q_p * &q_p * &two_m;
        let nm = &qs_p * &qs_p * &two_m;
        let exact = (ratio(&(&q_p * &q_p), &(&qs_p * &qs_p)), rat(&nm));
        let label = format!("z^A_{{q'+1}}[r={s}]");
        let i = b.term(label.clone(), s, (s - 3) / 2, ratio(&ng, &nm), rat(&nm), TermKind::Bound, Some(exact));
        let bud = if small { budget(3, 104) } else { ratio(&one, &(&qs_p * &qs_p * 13u32)) };
        b.budget(label, &[i], true, bud);
        let ng = &q * &q_m * &q_p * &q_p * &two_m;
        let nm = &qs * &qs_m * &qs_p * &qs_p * &two_m;
        let label = format!("z^B_{{q'+1}}[r={s}]");
        let i = b.term(label.clone(), s, 1, ratio(&ng, &nm), rat(&nm), TermKind::Exact, None);
        b.budget(label, &[i], true, if small { budget(7, 650) } else { per(&qs_p) });
    }

    let qs_cyc_u = qs_cyc.to_u64().expect("q' < 2^32");
    for u in prime_divisors(qs_cyc_u).into_iter().filter(|&u| u != 3) {
        let base = ratio(&q_cyc, &qs_cyc);
        let fix = if e == 3 { base.clone() } else { &base * rat(&two_m) };
        let exact = (base, rat(&(&two_m * &qs_cyc * 3u32)));
        let label = format!("z_{{q'^2-q'+1}}[r={u}]");
        let i = b.term(label.clone(), u, 1, fix, rat(&(&qs_cyc * 3u32)), TermKind::Bound, Some(exact));
        let bud = if small {
            budget(1, 52)
        } else if special {
            budget(1, 26)
        } else {
            per(&qs_cyc)
        };
        b.budget(label, &[i], true, bud);
    }

    // Field automorphisms of prime order r ∉ {2, e}.
    for r in prime_divisors(m).into_iter().filter(|&r| r != 2 && r != e as u64) {
        let x = big(p).pow((m / r) as u32);
        let y = big(p).pow((m_sub as u64 / r) as u32);
        let fix = ratio(&pgu_order_big(&x), &pgu_order_big(&y));
        let nm = pgu_order_big(&y) * &two_m;
        let label = format!("f^{{2m/r}}[r={r}]");
        let i = b.term(label.clone(), r, 1, fix, rat(&nm), TermKind::Exact, None);
        b.budget(label, &[i], true, ratio(&one, &big(26 * m_sub as u64)));
    }

    let fix = ratio(&(&q * (&q2 - &one)), &(&qs * (&qs2 - &one)));
    let nm = &two_m * &qs * (&qs2 - &one);
    let i = b.term("f^m".into(), 2, 1, fix, rat(&nm), TermKind::Exact, None);
    b.budget("f^m".into(), &[i], true, if small { budget(1, 520) } else { budget(1, 26) });

    // Order e: f' = f^{2m/e} times an element of order e (or 1) of M1.
    let e64 = e as u64;
    let eb = big(e64);
    let one_r = BigRational::one();
    if e64 == p {
        let fix = &mo / rat(&(&eb * qs.pow(3) * &qs_p)) + &mo / rat(&(&eb * &qs2)) + &one_r;
        let a = b.term("f'".into(), e64, 1, fix.clone(), mo.clone(), TermKind::Bound, None);
        let bb = b.term("z0 f'".into(), e64, 1, fix.clone(), rat(&(&eb * qs.pow(3) * &qs_p)), TermKind::Bound, None);
        let c = b.term("z0' f'".into(), e64, 1, fix, rat(&(&eb * &qs2)), TermKind::Bound, None);
        b.budget("order e, e = p".into(), &[a, bb, c], false, budget(1, 26));
    } else if (qs_u + 1) % e64 == 0 {
        let na = &qs_p * &qs_p * &eb;
        let nb = &qs * &qs_p * &qs_p * &qs_m * &eb;
        let ca = (e64 - 1) * (e64 - 3) / 2;
        let fix = &mo * BigRational::from_integer(BigInt::from(ca)) / rat(&na)
            + &mo * BigRational::from_integer(BigInt::from(e64 - 1)) / rat(&nb)
            + &one_r;
        let a = b.term("f'".into(), e64, 1, fix.clone(), mo.clone(), TermKind::Bound, None);
        let x = b.term("z^A f'".into(), e64, ca, fix.clone(), rat(&na), TermKind::Bound, None);
        let y = b.term("z^B f'".into(), e64, e64 - 1, fix, rat(&nb), TermKind::Bound, None);
        b.budget("order e, e | q'+1".into(), &[a, x, y], false, budget(1, 26));
    } else if (qs_u - 1) % e64 == 0 {
        let n1 = big(2) * &eb * (&qs2 - &one);
        let fix = &mo * BigRational::from_integer(BigInt::from(e64 - 1)) / rat(&n1) + &one_r;
        let a = b.term("f'".into(), e64, 1, fix.clone(), mo.clone(), TermKind::Bound, None);
        let x = b.term("z_{q'-1}^i f'".into(), e64, e64 - 1, fix, rat(&n1), TermKind::Bound, None);
        b.budget("order e, e | q'-1".into(), &[a, x], false, if small { budget(2, 13) } else { budget(1, 26) });
    } else if qs_cyc_u % e64 == 0 {
        let n1 = &qs_cyc * &eb;
        let fix = &mo * BigRational::from_integer(BigInt::from(e64 - 1)) / rat(&n1) + &one_r;
        let a = b.term("f'".into(), e64, 1, fix.clone(), mo.clone(), TermKind::Bound, None);
        let x = b.term("z_{q'^2-q'+1}^i f'".into(), e64, e64 - 1, fix, rat(&n1), TermKind::Bound, None);
        b.budget("order e, e | q'^2-q'+1".into(), &[a, x], false, budget(1, 26));
    } else {
        let a = b.term("f'".into(), e64, 1, one_r, mo.clone(), TermKind::Exact, None);
        b.budget("order e, e coprime to |M1|".into(), &[a], false, budget(1, 26));
    }

    Ok(b.finish(Setting::C1, Params::Subfield { p, m_sub, e }))
}

/// Ledger for the subfield stabilizer PGU(3,q'):⟨f⟩ in PΣU(3,q) with c = 3 (so e = 3).
pub fn qcheck_c3(p: u64, m_sub: u32) -> Result<QLedger, BoundError> {
    let e = 3u32;
    let qs_u = check_subfield_params(p, m_sub, e)?;
    if qs_u < 5 {
        return Err(BoundError::SubfieldTooSmall(qs_u));
    }
    if (qs_u + 1) % 3 != 0 {
        return Err(BoundError::WrongC { found: subfield_c(qs_u, e), expected: 3 });
    }
    let m = 3 * m_sub as u64;
    let two_m = big(2 * m);
    let qs = big(qs_u);
    let q = qs.pow(3);
    let one = BigUint::one();
    let (q2, qs2) = (&q * &q, &qs * &qs);
    let q_p = &q + &one;
    let (qs_m, qs_p) = (&qs - &one, &qs + &one);
    let q_cyc = &q2 - &q + &one;
    let qs_cyc = &qs2 - &qs + &one;
    let pm1 = big(p - 1);
    let three = big(3);
    let eb = big(3);

    let m_order = &two_m * pgu_order_big(&qs);
    let g_order = &two_m * pgu_order_big(&q) / 3u32;
    let mut b = Builder::new(m_order.clone(), &g_order);
    let per = |n: &BigUint| ratio(&one, &(n * 26u32));
    let mo = rat(&m_order);

    if p != 2 {
        let ng = &two_m * &q * (&q2 - &one) * &q_p;
        let nm = &two_m * &qs * (&qs2 - &one) * &qs_p;
        let i = b.term("z2".into(), 2, 1, ratio(&ng, &(&nm * 3u32)), rat(&nm), TermKind::Exact, None);
        b.budget("z2".into(), &[i], true, frac(1, 26));
    }

    let ng = &two_m * q.pow(3) * &q_p * &pm1;
    let nm = &eb * qs.pow(3) * &qs_p * &pm1;
    let nm_exact = &two_m * qs.pow(3) * &qs_p * &pm1;
    let exact = (ratio(&ng, &(&nm_exact * 3u32)), rat(&nm_exact));
    let i = b.term("z0".into(), p, 1, ratio(&ng, &(&nm * 3u32)), rat(&nm), TermKind::Bound, Some(exact));
    b.budget("z0".into(), &[i], true, frac(1, 26));

    let ng = &two_m * &q2 * &pm1;
    let nm = &eb * &qs2 * &pm1;
    let i = b.term("z0'".into(), p, 1, ratio(&ng, &nm), rat(&nm), TermKind::Bound, None);
    b.budget("z0'".into(), &[i], true, frac(1, 26));

    {
        let six_m = big(6 * m);
        let ng = &two_m * 2u32 * &q_p * &q_p;
        let nm = &six_m * &qs_p * &qs_p;
        let a = b.term("zA".into(), 3, 1, ratio(&ng, &nm), rat(&nm), TermKind::Bound, None);
        let ng = &two_m * &q * &q_p * (&q2 - &one) / 3u32;
        let nm_b = &two_m * &qs * &qs_p * (&qs2 - &one);
        let nm_d = &six_m * &qs_cyc;
        let fix = manning_fix(&[ng.clone(), ng], &[nm_b.clone(), nm_d.clone()])?;
        let bb = b.term("zB".into(), 3, 1, fix.clone(), rat(&nm_b), TermKind::Exact, None);
        let d = b.term("delta'".into(), 3, 1, fix, rat(&nm_d), TermKind::Exact, None);
        b.budget("zA + zB + delta'".into(), &[a, bb, d], false, frac(3, 26));
    }

    for t in odd_prime_divisors(qs_u - 1) {
        let ng = big(4 * m) * (&q2 - &one);
        let nm = big(4 * m) * (&qs2 - &one);
        let label = format!("z_{{q'-1}}[r={t}]");
        let i = b.term(label.clone(), t, 1, ratio(&ng, &(&nm * 3u32)), rat(&nm), TermKind::Exact, None);
        b.budget(label, &[i], true, per(&qs_m));
    }

    for s in prime_divisors(qs_u + 1).into_iter().filter(|&s| s >= 5) {
        let ng = &q_p * &q_p * &two_m * 6u32;
        let nm = &qs_p * &qs_p * &two_m;
        let label = format!("z^A_{{q'+1}}[r={s}]");
        let i = b.term(label.clone(), s, (s - 3) / 2, ratio(&ng, &(&nm * 3u32)), rat(&nm), TermKind::Bound, None);
        b.budget(label, &[i], true, ratio(&one, &(&qs_p * &qs_p * 13u32)));
        let ng = &q * (&q2 - &one) * &q_p * &two_m;
        let nm = &qs * (&qs2 - &one) * &qs_p * &two_m;
        let label = format!("z^B_{{q'+1}}[r={s}]");
        let i = b.term(label.clone(), s, 1, ratio(&ng, &(&nm * 3u32)), rat(&nm), TermKind::Exact, None);
        b.budget(label, &[i], true, per(&qs_p));
    }

    let qs_cyc_u = qs_cyc.to_u64().expect("q' < 2^32");
    for u in prime_divisors(qs_cyc_u).into_iter().filter(|&u| u != 3) {
        let ng = &two_m * &q_cyc;
        let nm = big(6 * m) * &qs_cyc;
        let label = format!("z_{{q'^2-q'+1}}[r={u}]");
        let i = b.term(label.clone(), u, 1, ratio(&ng, &nm), rat(&nm), TermKind::Exact, None);
        b.budget(label, &[i], true, per(&qs_cyc));
    }

    for r in prime_divisors(m).into_iter().filter(|&r| r != 2 && r != 3) {
        let x = big(p).pow((m / r) as u32);
        let y = big(p).pow((m_sub as u64 / r) as u32);
        let ng = &two_m * pgu_order_big(&x);
        let nm = &two_m * pgu_order_big(&y);
        let label = format!("f^{{2m/r}}[r={r}]");
        let i = b.term(label.clone(), r, 1, ratio(&ng, &(&nm * 3u32)), rat(&nm), TermKind::Exact, None);
        b.budget(label, &[i], true, ratio(&one, &big(26 * m_sub as u64)));
    }

    let fix = rat(&(&qs2 * (qs2.pow(2) + &qs2 + &one)));
    let nm = &two_m * &qs * (&qs2 - &one);
    let i = b.term("f^m".into(), 2, 1, fix, rat(&nm), TermKind::Exact, None);
    b.budget("f^m".into(), &[i], true, frac(1, 26));

    {
        let na = big(9) * &qs_p * &qs_p;
        let nb = &three * &qs * &qs_p * (&qs2 - &one);
        let nd = big(9) * &qs_cyc;
        let fix = BigRational::one() + &mo / rat(&na) + &mo / rat(&nb) + &mo / rat(&nd);
        let a = b.term("f'".into(), 3, 1, fix.clone(), mo.clone(), TermKind::Exact, None);
        let x = b.term("zA f'".into(), 3, 1, fix.clone(), rat(&na), TermKind::Exact, None);
        let y = b.term("zB f'".into(), 3, 1, fix.clone(), rat(&nb), TermKind::Exact, None);
        let z = b.term("delta' f'".into(), 3, 1, fix, rat(&nd), TermKind::Exact, None);
        b.budget("order 3 outside M1".into(), &[a, x, y, z], false, frac(1, 26));
    }

    Ok(b.finish(Setting::C3, Params::Subfield { p, m_sub, e }))
}

fn psl_common(q: u64) -> (BigUint, BigUint, u64) {
    let qb = big(q);
    let d = crate::unitary::gcd(3, q + 1);
    let t = qb.pow(3) * (qb.pow(3) + 1u32) * (&qb * &qb - 1u32) / d;
    (qb, t, d)
}

fn psl_ledger(
    q: u64,
    setting: Setting,
    m_order: u64,
    outer_div: u64,
    rows: [(u64, u64, i64, i64); 2],
) -> QLedger {
    let (qb, t, d) = psl_common(q);
    let one = BigUint::one();
    let g_order = &t * 2u32;
    let mut b = Builder::new(big(m_order), &g_order);
    let db = big(d);
    let inner = &qb * (&qb * &qb - &one) * (&qb + &one);
    // x1: inner involution, centralizer D16 in M.
    let fix1 = ratio(&inner, &(&db * 8u32));
    let i = b.term("x1".into(), 2, 1, fix1, rat(&big(16)), TermKind::Exact, None);
    b.terms[i].closed_form = Some(b.terms[i].value.clone());
    // x2: outer involution with centralizer PGO(3,q) in G.
    let fix2 = ratio(&(&qb * (&qb * &qb - &one)), &big(outer_div));
    let n2 = big(2 * outer_div);
    let i = b.term("x2".into(), 2, 1, fix2, rat(&n2), TermKind::Exact, None);
    b.terms[i].closed_form = Some(b.terms[i].value.clone());
    for (k, (r, n_m, cn, cd)) in rows.into_iter().enumerate() {
        let fix = ratio(&(&inner * 2u32), &(&db * n_m));
        let i = b.term(format!("x{}", k + 3), r, 1, fix, rat(&big(n_m)), TermKind::Bound, None);
        let closed_fix = BigRational::from_integer(BigInt::from(qb.pow(4))) * frac(cn, cd)
            / rat(&db);
        b.terms[i].closed_form = Some(b.q(r, &closed_fix, &rat(&big(n_m))));
    }
    b.finish(setting, Params::Prime { q })
}

/// Ledger for M = PGL(2,7) in PΣU(3,q).
pub fn qcheck_psl27(q: u64) -> Result<QLedger, BoundError> {
    if !is_prime(q) {
        return Err(BoundError::NotPrime(q));
    }
    if !matches!(q % 7, 3 | 5 | 6) || q < 13 {
        return Err(BoundError::Congruence { q, setting: "psl27" });
    }
    Ok(psl_ledger(q, Setting::Psl27, 336, 6, [(3, 12, 7, 39), (7, 42, 2, 39)]))
}

/// Ledger for M = PGL(2,9) in PΣU(3,q).
pub fn qcheck_psl29(q: u64) -> Result<QLedger, BoundError> {
    if !is_prime(q) {
        return Err(BoundError::NotPrime(q));
    }
    if !matches!(q % 15, 11 | 14) {
        return Err(BoundError::Congruence { q, setting: "psl29" });
    }
    Ok(psl_ledger(q, Setting::Psl29, 720, 10, [(3, 18, 4, 33), (5, 20, 6, 55)]))
}

/// Q̌ for PGL(2,9) with Fix of the order-3 and order-5 classes taken from the
/// normalizers of their actual eigenvalue types instead of the largest normalizer.
///
/// Order 3 acts with eigenvalues {1, ω, ω²}; order 5 with {1, ζ, ζ⁻¹}, which is
/// a split torus element when 5 | q−1 and a three-distinct-eigenvalue element of
/// the nonsplit torus when 5 | q+1.
pub fn psl29_refined_total(q: u64) -> Result<BigRational, BoundError> {
    let led = qcheck_psl29(q)?;
    let (qb, t, d) = psl_common(q);
    let one = BigUint::one();
    let q_p = &qb + &one;
    let db = big(d);
    let b = Builder::new(led.m_order.clone(), &(&t * 2u32));
    // Split torus normalizer 2(q²−1)/d, or the nonsplit one 2(q+1)²/d.
    let split = big(2) * (&qb * &qb - &one) / &db;
    let nonsplit = big(2) * &q_p * &q_p / &db;
    let nt3 = if (q + 1) % 3 == 0 { &nonsplit * &db } else { split.clone() };
    let nt5 = if (q - 1) % 5 == 0 { split } else { nonsplit };
    let mut total: BigRational = led.terms[..2].iter().map(QTerm::contribution).sum();
    let n3 = rat(&big(18));
    total += b.q(3, &(rat(&(nt3 * 2u32)) / &n3), &n3);
    let n5 = rat(&big(20));
    total += b.q(5, &(rat(&(nt5 * 2u32)) / &n5), &n5);
    Ok(total)
}

/// (p, m', e) with q = p^{m'e} ≤ q_max inside the c = 1 regime.
pub fn default_grid_c1(q_max: u64) -> Vec<(u64, u32, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p * p <= q_max {
        if is_prime(p) {
            let mut m_sub = 1u32;
            while let Some(qs) = p.checked_pow(m_sub).filter(|&x| x.saturating_mul(x).saturating_mul(x) <= q_max) {
                let mut e = 3u32;
                while qs.checked_pow(e).is_some_and(|q| q <= q_max) {
                    if is_prime(e as u64) {
                        let regime = (e >= 5 && qs >= 3) || (e == 3 && qs >= 4);
                        if regime && subfield_c(qs, e) == 1 {
                            out.push((p, m_sub, e));
                        }
                    }
                    e += 2;
                }
                m_sub += 1;
            }
        }
        p += 1;
    }
    out.sort_unstable();
    out
}

/// (p, m') with q' ≥ 5, 3 | q'+1 and q'³ ≤ q_max.
pub fn default_grid_c3(q_max: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p * p <= q_max {
        if is_prime(p) {
            let mut m_sub = 1u32;
            while let Some(qs) = p.checked_pow(m_sub).filter(|&x| x.saturating_mul(x).saturating_mul(x) <= q_max) {
                if qs >= 5 && (qs + 1) % 3 == 0 {
                    out.push((p, m_sub));
                }
                m_sub += 1;
            }
        }
        p += 1;
    }
    out.sort_unstable();
    out
}

pub fn psl27_primes(q_max: u64) -> Vec<u64> {
    (13..=q_max).filter(|&q| is_prime(q) && matches!(q % 7, 3 | 5 | 6)).collect()
}

pub fn psl29_primes(q_max: u64) -> Vec<u64> {
    (2..=q_max).filter(|&q| is_prime(q) && matches!(q % 15, 11 | 14)).collect()
}

/// Value of each term present at every point, in the order of `ledgers`.
pub fn decay_profile(ledgers: &[QLedger]) -> Vec<(String, Vec<BigRational>)> {
    let Some(first) = ledgers.first() else {
        return Vec::new();
    };
    first
        .terms
        .iter()
        .filter(|t| ledgers.iter().all(|l| l.term(&t.label).is_some()))
        .map(|t| {
            let vals = ledgers.iter().map(|l| l.term(&t.label).expect("filtered").value.clone()).collect();
            (t.label.clone(), vals)
        })
        .collect()
}

/// Strictly decreasing from index `from` onward.
pub fn decreasing_from(values: &[BigRational], from: usize) -> bool {
    values.iter().skip(from).collect::<Vec<_>>().windows(2).all(|w| w[1] < w[0])
}
