//! One line per acceptance criterion. Criteria whose exact ledgers do not
//! close are reported as FAIL; the run only errors when a result departs
//! from the recorded outcome.

use std::collections::{BTreeSet, HashSet};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::Value;

use saxl_cli::config::{RunConfig, Task, DEFAULT_DOMAIN_CAP, DEFAULT_GROUP_CAP};
use saxl_cli::report::{Report, Status};
use saxl_core::census::Census;
use saxl_core::classdata::class_equation_total;
use saxl_core::ff::is_prime;
use saxl_core::permaction::fixed_point_count;
use saxl_core::psu::{CosetMethod, CosetSetup};
use saxl_core::qbound::{
    default_grid_c1, default_grid_c3, manning_fix, psl27_primes, psl29_primes, psl29_refined_total, qcheck_c3,
    qcheck_psl27, qcheck_psl29, QLedger, Setting,
};
use saxl_core::unitary::{HermForm, ProjElem, SubgroupCase, Unitary};

const GRID_MAX: u64 = 1_000_000_000;
const PSL_MAX: u64 = 10_000;

struct Outcome {
    pass: bool,
    /// Whether the result matches what is recorded for this criterion.
    as_recorded: bool,
    detail: String,
}

impl Outcome {
    fn plain(pass: bool, detail: String) -> Self {
        Outcome { pass, as_recorded: pass, detail }
    }
}

fn run(task: Task, jobs: usize, modulus_index: usize) -> Report {
    let cap = match task {
        Task::CrosscheckClasses { .. } => DEFAULT_GROUP_CAP,
        _ => DEFAULT_DOMAIN_CAP,
    };
    let cfg = RunConfig { task, cap, jobs, modulus_index, out: None };
    saxl_cli::run(&cfg).expect("valid configuration")
}

fn check<'a>(r: &'a Report, name: &str) -> &'a Value {
    &r.checks.iter().find(|c| c.name == name).expect("check present").payload
}

fn all_pass(r: &Report) -> bool {
    !r.checks.is_empty() && r.checks.iter().all(|c| c.status == Status::Pass)
}

fn canonical(r: &mut Report) -> String {
    r.wall_time_ms = 0;
    r.to_json()
}

fn so_direct(r: &Report) -> Outcome {
    let u = Unitary::new(5, 1).unwrap();
    let n = check(r, "action")["n"].as_u64();
    let b2 = check(r, "base-size")["base_size_two"].as_bool();
    let holds = check(r, "common-neighbour")["conjecture_holds"].as_bool();
    let pass = u.t_order() == 126_000 && n == Some(1050) && b2 == Some(true) && holds == Some(true) && all_pass(r);
    Outcome::plain(pass, format!("|T| = {}, n = {n:?}, b = 2: {b2:?}, common neighbour: {holds:?}", u.t_order()))
}

fn sl_no_regular() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (p, deg) in [(5u64, 525u64), (7, 2107)] {
        let r = run(Task::VerifyDirect { p, m: 1, case: SubgroupCase::Sl }, 8, 0);
        let n = check(&r, "action")["n"].as_u64();
        let regular = check(&r, "base-size")["regular_suborbits"].as_u64();
        pass &= n == Some(deg) && regular == Some(0) && all_pass(&r);
        parts.push(format!("q = {p}: n = {n:?}, regular suborbits = {regular:?}"));
    }
    Outcome::plain(pass, parts.join("; "))
}

fn class_data() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (p, m) in [(2u64, 2u32), (5, 1), (7, 1)] {
        let r = run(Task::CrosscheckClasses { p, m }, 8, 0);
        let q = p.pow(m);
        let closes = class_equation_total(q, true).unwrap() == BigUint::from(Unitary::new(p, m).unwrap().t_order());
        pass &= all_pass(&r) && closes;
        parts.push(format!("q = {q}: {}/{} checks", r.summary.pass, r.checks.len()));
    }
    Outcome::plain(pass, parts.join("; "))
}

type Sub = BTreeSet<ProjElem>;

fn cyclic(u: &Unitary, x: &ProjElem) -> Sub {
    (0..u.proj_order(x)).map(|k| u.proj_pow(x, k)).collect()
}

fn conj(u: &Unitary, g: &ProjElem, s: &Sub) -> Sub {
    let gi = u.proj_inv(g);
    s.iter().map(|x| u.proj_mul(&u.proj_mul(&gi, x), g)).collect()
}

fn manning_vs_bruteforce() -> Outcome {
    let u = Unitary::new(5, 1).unwrap();
    let t = Census::new(&u, &u.t_generators(HermForm::Identity), 1 << 24).unwrap();
    let s = CosetSetup::new(&u, SubgroupCase::So, CosetMethod::Keyed, 1 << 20).unwrap();
    let n = s.action.n();

    let mut subs: Vec<(ProjElem, Sub)> = Vec::new();
    let mut seen: HashSet<Sub> = HashSet::new();
    for y in s.m_elems.iter().filter(|y| is_prime(u.proj_order(y))) {
        let c = cyclic(&u, y);
        if seen.insert(c.clone()) {
            subs.push((*y, c));
        }
    }
    let mut reps: Vec<(ProjElem, Sub, u64)> = Vec::new();
    let mut covered: HashSet<Sub> = HashSet::new();
    for (y, sy) in &subs {
        if covered.contains(sy) {
            continue;
        }
        let mut n_m = 0;
        for g in &s.m_elems {
            let c = conj(&u, g, sy);
            if c == *sy {
                n_m += 1;
            }
            covered.insert(c);
        }
        reps.push((*y, sy.clone(), n_m));
    }
    let fusion = |sub: &Sub| -> BTreeSet<usize> { sub.iter().filter_map(|x| t.class_index(&u, x)).collect() };

    let mut pass = true;
    let mut parts = Vec::new();
    for (x, sx, _) in &reps {
        let cx = fusion(sx);
        let (mut n_g, mut n_h) = (Vec::new(), Vec::new());
        for (y, sy, n_m) in &reps {
            if u.proj_order(y) == u.proj_order(x) && fusion(sy) == cx {
                n_g.push(BigUint::from(t.cyclic_normalizer_order(&u, y).unwrap()));
                n_h.push(BigUint::from(*n_m));
            }
        }
        let fix = manning_fix(&n_g, &n_h).unwrap();
        let brute = fixed_point_count(n, &[s.perm_of(x).unwrap()]);
        pass &= fix == BigRational::from_integer(brute.into());
        parts.push(format!("order {}: {fix} vs {brute}", u.proj_order(x)));
    }
    pass &= reps.len() == 4 && n == 1050;
    Outcome::plain(pass, parts.join(", "))
}

fn c1_grid() -> Outcome {
    let r = run(Task::CertifyBounds { setting: Setting::C1, grid_max: GRID_MAX }, 8, 0);
    let has_64 = r.checks.iter().any(|c| c.name == "c1 p=2 m'=2 e=3");
    let pass = all_pass(&r) && has_64 && r.checks.len() == default_grid_c1(GRID_MAX).len();
    Outcome::plain(pass, format!("{}/{} grid points, q = 64 included: {has_64}", r.summary.pass, r.checks.len()))
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn c3_grid() -> Outcome {
    const TRIPLE: &str = "zA + zB + delta'";
    let ledgers: Vec<QLedger> = default_grid_c3(GRID_MAX).into_iter().map(|(p, m)| qcheck_c3(p, m).unwrap()).collect();
    let pass = !ledgers.is_empty() && ledgers.iter().all(QLedger::passes);
    let failing = ledgers.iter().filter(|l| !l.passes()).count();
    let max_total = ledgers.iter().map(|l| &l.total).max().unwrap();
    let worst_triple = ledgers
        .iter()
        .flat_map(|l| l.budgets.iter().filter(|b| b.label == TRIPLE).map(|b| to_f64(&(&b.amount / &b.budget))))
        .fold(0.0, f64::max);
    // Recorded: the triple budget is exceeded everywhere; every other budget and every total holds.
    let signature = ledgers.iter().all(|l| {
        let bad: Vec<&str> = l.budgets.iter().filter(|b| !b.pass).map(|b| b.label.as_str()).collect();
        bad == [TRIPLE] && l.verdict && l.total < QLedger::half()
    });
    Outcome {
        pass,
        as_recorded: !pass && signature,
        detail: format!(
            "{failing}/{} points fail the {TRIPLE} budget (worst amount/budget {worst_triple:.3}); max total {:.4} < 1/2",
            ledgers.len(),
            to_f64(max_total)
        ),
    }
}

fn psl_grids() -> Outcome {
    let p27: Vec<QLedger> = psl27_primes(PSL_MAX).into_iter().map(|q| qcheck_psl27(q).unwrap()).collect();
    let p29: Vec<(u64, QLedger)> = psl29_primes(PSL_MAX).into_iter().map(|q| (q, qcheck_psl29(q).unwrap())).collect();
    let fix13 = qcheck_psl27(13).unwrap().term("x1").map(|t| t.fix.clone());
    let spot = fix13 == Some(BigRational::from_integer(3822.into()));
    let p27_ok = p27.iter().all(QLedger::passes);
    let p29_fail: Vec<u64> = p29.iter().filter(|(_, l)| !l.passes()).map(|(q, _)| *q).collect();
    let pass = p27_ok && p29_fail.is_empty() && spot;
    let total11 = p29.iter().find(|(q, _)| *q == 11).map(|(_, l)| to_f64(&l.total));
    let refined11 = psl29_refined_total(11).unwrap();
    // Recorded: only q = 11 fails for the 15-divisibility family, and the
    // refined count there is below 1/2.
    let signature = p27_ok && p29_fail == [11] && spot && refined11 < QLedger::half();
    Outcome {
        pass,
        as_recorded: !pass && signature,
        detail: format!(
            "7-family {}/{} pass; 15-family failures at q = {p29_fail:?} (total {:.4}, refined {:.4}); Fix(x1) at q = 13 = {}",
            p27.iter().filter(|l| l.passes()).count(),
            p27.len(),
            total11.unwrap_or(f64::NAN),
            to_f64(&refined11),
            fix13.map_or("missing".into(), |f| f.to_string())
        ),
    }
}

fn determinism(so_8_jobs: &mut Report) -> Outcome {
    let so = Task::VerifyDirect { p: 5, m: 1, case: SubgroupCase::So };
    let c1 = Task::CertifyBounds { setting: Setting::C1, grid_max: 10_000_000 };
    let mut jobs_same = canonical(&mut run(so.clone(), 1, 0)) == canonical(so_8_jobs);
    jobs_same &= canonical(&mut run(c1.clone(), 1, 0)) == canonical(&mut run(c1, 3, 0));

    let integers = |r: &Report| serde_json::to_string(&r.checks).unwrap();
    let mut modulus_same = integers(&run(so.clone(), 8, 1)) == integers(so_8_jobs);
    let cc = Task::CrosscheckClasses { p: 5, m: 1 };
    modulus_same &= integers(&run(cc.clone(), 8, 0)) == integers(&run(cc, 8, 1));
    Outcome::plain(jobs_same && modulus_same, format!("across worker counts: {jobs_same}; across moduli: {modulus_same}"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut so_report = run(Task::VerifyDirect { p: 5, m: 1, case: SubgroupCase::So }, 8, 0);
    let so_secs = start.elapsed().as_secs_f64();

    let results: Vec<(&str, Outcome)> = vec![
        ("direct check at q = 5, SO stabilizer", so_direct(&so_report)),
        ("no regular suborbit on non-isotropic points, q = 5, 7", sl_no_regular()),
        ("class data against brute force, q = 4, 5, 7", class_data()),
        ("fixed points by class fusion vs brute force, q = 5", manning_vs_bruteforce()),
        ("bound certification, c = 1 grid", c1_grid()),
        ("bound certification, c = 3 grid", c3_grid()),
        ("prime-field ledgers up to 10^4", psl_grids()),
        ("determinism", determinism(&mut so_report)),
    ];

    let mut unexpected = 0;
    for (i, (title, o)) in results.iter().enumerate() {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let note = if o.as_recorded { "" } else { " [UNEXPECTED]" };
        println!("criterion {} {tag}{note}: {title}: {}", i + 1, o.detail);
        unexpected += usize::from(!o.as_recorded);
    }
    println!("direct q = 5 run: {so_secs:.1}s with 8 workers; total {:.1}s", start.elapsed().as_secs_f64());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria departed from the recorded outcome");
        ExitCode::FAILURE
    }
}
