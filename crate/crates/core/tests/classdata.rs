use num_bigint::BigUint;
use num_traits::{One, Zero};
use saxl_core::census::Census;
use saxl_core::classdata::{
    all_prime_order_classes, class_equation_total, classify, crosscheck_against_bruteforce, element_class_inventory,
    pgu_order3_trichotomy, prime_order_classes, t_order, ClassLabel, Family,
};
use saxl_core::unitary::{psu_order, HermForm, Unitary};

const CAP: usize = 50_000_000;

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn row(q: u64, r: u64, label: ClassLabel) -> saxl_core::classdata::ClassRecord {
    prime_order_classes(q, r).unwrap().into_iter().find(|x| x.label == label).unwrap()
}

#[test]
fn involution_row_at_q5() {
    let rows = prime_order_classes(5, 2).unwrap();
    assert_eq!(rows.len(), 1);
    let z = &rows[0];
    assert_eq!(z.c_t, big(240));
    assert_eq!(z.n_t, big(240));
    assert_eq!(z.c_r, big(720));
    assert_eq!(z.n_r, big(720));
}

#[test]
fn unipotent_rows_at_q5() {
    let z0 = row(5, 5, ClassLabel::Z0);
    assert_eq!(z0.c_t, big(250));
    let zl = row(5, 5, ClassLabel::ZPrime);
    assert_eq!(zl.c_t, big(25));
    assert_eq!(zl.n_t, big(100));
    assert_eq!(zl.t_classes, 3);
    assert_eq!(zl.r_classes, 1);
    // q = 4: d = 1, one regular unipotent class in the inventory.
    let inv = element_class_inventory(4).unwrap();
    let reg = inv.iter().find(|r| r.family == Family::CRegular).unwrap();
    assert_eq!(reg.count, big(1));
}

#[test]
fn order_three_at_q7_is_split_torus() {
    let rows = prime_order_classes(7, 3).unwrap();
    assert!(rows.iter().all(|r| r.label != ClassLabel::Z3A && r.label != ClassLabel::Z3B));
    let z = rows.iter().find(|r| r.label == ClassLabel::ZqMinus1).unwrap();
    assert_eq!(z.c_t, big(48));
}

#[test]
fn trichotomy_values() {
    let c = |q| pgu_order3_trichotomy(q).unwrap().map(|x| x.c_r);
    assert_eq!(c(5), [big(108), big(720), big(63)]);
    assert_eq!(c(8), [big(243), big(4536), big(171)]);
    assert!(pgu_order3_trichotomy(7).is_err());
}

#[test]
fn inventory_values_at_q5() {
    let inv = element_class_inventory(5).unwrap();
    let get = |f| inv.iter().find(|r| r.family == f).unwrap();
    assert_eq!(get(Family::C4).count, big(1));
    assert_eq!(get(Family::C4).centralizer, big(240));
    assert_eq!(get(Family::C6Prime).count, big(1));
    assert_eq!(get(Family::C6Prime).centralizer, big(36));
    assert_eq!(class_equation_total(5, true).unwrap(), big(126_000));
}

#[test]
fn class_equation_closes() {
    for q in [3u64, 4, 5, 7, 8, 9, 11, 13, 16, 17, 23, 25, 27, 29, 32, 49, 64, 81, 125] {
        assert_eq!(class_equation_total(q, true).unwrap(), t_order(q), "q = {q}");
        assert_eq!(t_order(q), big(psu_order(q)));
        assert!(class_equation_total(q, false).unwrap() < t_order(q));
    }
}

#[test]
fn divisibility_chain() {
    let qs = [3u64, 4, 5, 7, 8, 9, 11, 16, 17, 25, 27, 32, 49, 64, 81, 121, 125, 128, 243, 256, 997, 1024, 2187, 4096,
        59_049, 65_536, 262_144, 531_441, 923_521, 999_983];
    for q in qs {
        let t = t_order(q);
        let r_order = &t * BigUint::from(saxl_core::unitary::gcd(3, q + 1));
        for rec in all_prime_order_classes(q).unwrap() {
            for &s in &rec.s_choices {
                let nt = rec.n_t_with(s);
                let nr = rec.n_r_with(s);
                assert!(!rec.c_t.is_zero());
                assert!((&nt % &rec.c_t).is_zero(), "q = {q} {:?}", rec.label);
                assert!((&t % &nt).is_zero(), "q = {q} {:?}", rec.label);
                assert!((&nr % &rec.c_r).is_zero(), "q = {q} {:?}", rec.label);
                assert!((&rec.c_r % &rec.c_t).is_zero(), "q = {q} {:?}", rec.label);
                assert!((&nr % &nt).is_zero(), "q = {q} {:?}", rec.label);
                assert!((&r_order % &nr).is_zero(), "q = {q} {:?}", rec.label);
            }
        }
    }
}

#[test]
fn primes_not_dividing_the_order_have_no_rows() {
    for (q, r) in [(5u64, 11u64), (7, 5), (4, 11), (8, 5), (9, 11)] {
        assert!(!(t_order(q) % big(r)).is_zero());
        assert!(prime_order_classes(q, r).unwrap().is_empty(), "q = {q}, r = {r}");
    }
    assert!(prime_order_classes(5, 4).is_err());
}

fn crosscheck(p: u64, m: u32) {
    let u = Unitary::new(p, m).unwrap();
    let gens = u.t_generators(HermForm::Identity);
    let t = Census::new(&u, &gens, CAP).unwrap();
    assert_eq!(t.order(), u.t_order());
    let r = (u.d() == 3).then(|| {
        let mut rg = gens.clone();
        rg.push(u.delta().proj);
        Census::new(&u, &rg, CAP).unwrap()
    });
    let items = crosscheck_against_bruteforce(&u, &t, r.as_ref()).unwrap();
    let bad: Vec<_> = items.iter().filter(|i| !i.pass).collect();
    assert!(bad.is_empty(), "q = {}: {bad:?}", u.q());
    assert!(items.len() > 20);

    // Independent: class sizes sum to |T| and each size is |T|/|C|.
    let total: u64 = t.classes().iter().map(|c| c.size).sum();
    assert_eq!(total, t.order());
    assert!(t.classes().iter().all(|c| c.size * c.centralizer == t.order()));
    let families = element_class_inventory(u.q() as u64).unwrap();
    let formula: BigUint = families.iter().map(|r| r.count.clone()).sum::<BigUint>() + BigUint::one();
    assert_eq!(formula, big(t.classes().len() as u64));
    assert!(t.classes().iter().all(|c| classify(&u, &c.rep) != Family::Unclassified));

    if let Some(r) = &r {
        assert_eq!(r.order(), 3 * t.order());
        // Outer order-3 centralizers match the trichotomy.
        let want: Vec<BigUint> = pgu_order3_trichotomy(u.q() as u64).unwrap().into_iter().map(|x| x.c_r).collect();
        for c in r.classes().iter().filter(|c| c.order == 3) {
            assert!(want.contains(&big(c.centralizer)), "centralizer {}", c.centralizer);
        }
        // Prime-order elements of R of order r ≠ 3 already lie in T.
        for c in r.classes() {
            if c.order != 3 && saxl_core::ff::is_prime(c.order) {
                let x = u.in_form(&c.rep, t.form());
                assert!(t.contains(&u, &x), "order {}", c.order);
            }
        }
    }
}

#[test]
fn crosscheck_q3() {
    crosscheck(3, 1);
}

#[test]
fn crosscheck_q4() {
    crosscheck(2, 2);
}

#[test]
fn crosscheck_q5() {
    crosscheck(5, 1);
}

#[test]
fn involution_centralizer_by_census() {
    let u = Unitary::new(5, 1).unwrap();
    let t = Census::new(&u, &u.t_generators(HermForm::Identity), CAP).unwrap();
    let f = u.field();
    let m1 = f.neg(f.one());
    let inv = u.projectivize(&saxl_core::unitary::GroupElem { mat: u.diag(f.one(), m1, m1), form: HermForm::Identity });
    assert_eq!(t.centralizer_order(&u, &inv), Some(240));
    let w = f.find_of_order(3).unwrap();
    let za = u.projectivize(&saxl_core::unitary::GroupElem { mat: u.diag(f.one(), w, f.mul(w, w)), form: HermForm::Identity });
    assert_eq!(t.centralizer_order(&u, &za), Some(36));
}
