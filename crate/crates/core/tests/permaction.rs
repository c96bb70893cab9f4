use proptest::prelude::*;
use saxl_core::permaction::{
    fixed_point_count, is_permutation, orbits, perm_closure, perm_compose, perm_identity, perm_inverse,
    regular_suborbits, saxl_check, stabilizer_pairwise_intersect, suborbits, Bitset, Perm, PermAction,
    PermError, SaxlContext,
};
use saxl_core::psu::{CosetMethod, CosetSetup, PointSetup};
use saxl_core::unitary::{SubgroupCase, Unitary};

const CAP: usize = 200_000;

/// Saxl adjacency by brute force: α ~ β iff only the identity fixes both.
fn adjacency_oracle(group: &[Perm], alpha: usize, beta: usize) -> bool {
    alpha != beta
        && group
            .iter()
            .filter(|g| g[alpha] as usize == alpha && g[beta] as usize == beta)
            .count()
            == 1
}

fn point_stabilizer_gens(group: &[Perm]) -> Vec<Perm> {
    group.iter().filter(|g| g[0] == 0).cloned().collect()
}

fn action_of(gens: Vec<Perm>) -> PermAction<u32> {
    let n = gens[0].len();
    PermAction::new(gens, (0..n as u32).collect()).unwrap()
}

fn dihedral(n: u32) -> Vec<Perm> {
    vec![(0..n).map(|i| (i + 1) % n).collect(), (0..n).map(|i| (n - i) % n).collect()]
}

fn symmetric(n: u32) -> Vec<Perm> {
    let mut swap: Perm = (0..n).collect();
    swap.swap(0, 1);
    vec![(0..n).map(|i| (i + 1) % n).collect(), swap]
}

#[test]
fn saxl_graph_matches_fixed_point_oracle_on_small_groups() {
    for gens in [dihedral(5), dihedral(6), dihedral(7), symmetric(4), symmetric(5)] {
        let act = action_of(gens.clone());
        let n = act.n();
        let group = perm_closure(n, &gens, CAP).unwrap();
        let stab = point_stabilizer_gens(&group);
        let m_order = stab.len() as u64;
        assert_eq!(group.len() as u64, n as u64 * m_order);
        let ctx = SaxlContext::new(&act, &stab, m_order).unwrap();
        for a in 0..n {
            for b in 0..n {
                assert_eq!(ctx.adjacent(a, b), adjacency_oracle(&group, a, b), "n = {n}, {a} ~ {b}");
            }
        }
        let report = saxl_check(&act, &stab, m_order).unwrap();
        let oracle_b2 = (1..n).any(|b| adjacency_oracle(&group, 0, b));
        assert_eq!(report.base_size_two, oracle_b2);
        if oracle_b2 {
            let holds = (0..n).all(|b| (0..n).any(|g| adjacency_oracle(&group, 0, g) && adjacency_oracle(&group, b, g)));
            assert_eq!(report.conjecture_holds, Some(holds));
        } else {
            assert_eq!(report.conjecture_holds, None);
        }
        assert_eq!(stabilizer_pairwise_intersect(&act, &stab, CAP).unwrap(), !oracle_b2);
    }
}

#[test]
fn dihedral_pentagon_values() {
    let act = action_of(dihedral(5));
    let group = perm_closure(5, act.gens(), CAP).unwrap();
    assert_eq!(group.len(), 10);
    let stab = point_stabilizer_gens(&group);
    let mut lens: Vec<usize> = suborbits(&act, &stab).unwrap().iter().map(Vec::len).collect();
    lens.sort();
    assert_eq!(lens, vec![1, 2, 2]);
    assert_eq!(regular_suborbits(&act, &stab, 2).unwrap().len(), 2);
    let report = saxl_check(&act, &stab, 2).unwrap();
    assert_eq!(report.gamma_size, 4);
    assert_eq!(report.conjecture_holds, Some(true));
}

#[test]
fn stabilizer_must_fix_base_point() {
    let act = action_of(dihedral(5));
    let rot = act.gens()[0].clone();
    assert_eq!(suborbits(&act, &[rot]).unwrap_err(), PermError::MovesBasePoint(0));
    assert!(matches!(PermAction::new(vec![vec![0, 0, 1]], vec![0u32, 1, 2]), Err(PermError::NotPermutation(0))));
    assert!(matches!(
        PermAction::new(vec![vec![1, 0, 2]], vec![0u32, 1, 2]),
        Err(PermError::NotTransitive { reached: 2, n: 3 })
    ));
    assert_eq!(perm_closure(5, &symmetric(5), 100).unwrap_err(), PermError::CapExceeded(100));
}

#[test]
fn so_action_at_q5() {
    let u = Unitary::new(5, 1).unwrap();
    let s = CosetSetup::new(&u, SubgroupCase::So, CosetMethod::Keyed, CAP).unwrap();
    let act = &s.action;
    assert_eq!(act.n(), 1050);
    act.check_transversal().unwrap();
    let m = s.m_elems.len() as u64;
    assert_eq!(m, 120);
    // Orbit-stabilizer: every suborbit length divides |M| and they partition the domain.
    let subs = suborbits(act, &s.stab).unwrap();
    assert_eq!(subs.iter().map(Vec::len).sum::<usize>(), 1050);
    assert!(subs.iter().all(|o| m % o.len() as u64 == 0));
    assert_eq!(subs.iter().filter(|o| o.len() == 1).count(), 1);

    let m_perms = perm_closure(act.n(), &s.stab, CAP).unwrap();
    assert_eq!(m_perms.len() as u64, m);
    for o in &subs {
        let b = o[0] as usize;
        let stab_b = m_perms.iter().filter(|g| g[b] as usize == b).count();
        assert_eq!(stab_b * o.len(), m as usize);
    }

    let ctx = SaxlContext::new(act, &s.stab, m).unwrap();
    assert!(ctx.base_size_two());
    for b in (0..act.n()).step_by(37) {
        let nb = ctx.neighbourhood(b);
        for g in (0..act.n()).step_by(11) {
            assert_eq!(ctx.adjacent(b, g), ctx.adjacent(g, b));
            assert_eq!(nb.contains(g), ctx.adjacent(b, g));
        }
        assert_eq!(nb.count(), ctx.gamma().len());
    }
    let report = saxl_check(act, &s.stab, m).unwrap();
    assert_eq!(report.conjecture_holds, Some(true));
    assert!(!stabilizer_pairwise_intersect(act, &s.stab, CAP).unwrap());

    for g in &s.t_gens {
        let p = s.perm_of(g).unwrap();
        assert!(is_permutation(&p, act.n()));
    }
}

#[test]
fn keyed_and_pairwise_agree() {
    let u = Unitary::new(5, 1).unwrap();
    let keyed = CosetSetup::new(&u, SubgroupCase::So, CosetMethod::Keyed, CAP).unwrap();
    let pairwise = CosetSetup::new(&u, SubgroupCase::So, CosetMethod::Pairwise, CAP).unwrap();
    assert_eq!(keyed.action.n(), pairwise.action.n());
    assert_eq!(keyed.action.gens(), pairwise.action.gens());
    assert_eq!(keyed.stab, pairwise.stab);
    for (a, b) in keyed.action.labels().iter().zip(pairwise.action.labels()) {
        let q = u.proj_mul(a, &u.proj_inv(b));
        assert!(u.subgroup_membership(SubgroupCase::So, &q).unwrap());
    }
}

#[test]
fn sl_action_has_no_regular_suborbit() {
    for (p, n, m) in [(5u64, 525usize, 240u64), (7, 2107, 2688)] {
        let u = Unitary::new(p, 1).unwrap();
        let s = PointSetup::new(&u, CAP).unwrap();
        assert_eq!(s.action.n(), n);
        assert_eq!(s.m_elems.len() as u64, m);
        assert!(s.action.labels().iter().all(|v| PointSetup::is_nonisotropic(&u, v)));
        assert!(regular_suborbits(&s.action, &s.stab, m).unwrap().is_empty());
        assert!(stabilizer_pairwise_intersect(&s.action, &s.stab, CAP).unwrap());
        let report = saxl_check(&s.action, &s.stab, m).unwrap();
        assert!(!report.base_size_two);
        assert_eq!(report.conjecture_holds, None);
    }
}

#[test]
fn fixed_points_and_orbits() {
    let gens = symmetric(4);
    let all = perm_closure(4, &gens, CAP).unwrap();
    assert_eq!(all.len(), 24);
    assert_eq!(fixed_point_count(4, &[perm_identity(4)]), 4);
    let total: usize = all.iter().map(|g| fixed_point_count(4, std::slice::from_ref(g))).sum();
    // Burnside: one orbit.
    assert_eq!(total, 24);
    assert_eq!(orbits(4, &[vec![1, 0, 2, 3]]), vec![vec![0, 1], vec![2], vec![3]]);
}

fn perm_strategy(n: usize) -> impl Strategy<Value = Perm> {
    Just((0..n as u32).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #[test]
    fn perm_group_laws(a in perm_strategy(12), b in perm_strategy(12), c in perm_strategy(12)) {
        let id = perm_identity(12);
        prop_assert_eq!(perm_compose(&a, &perm_inverse(&a)), id.clone());
        prop_assert_eq!(perm_compose(&perm_inverse(&a), &a), id.clone());
        prop_assert_eq!(perm_compose(&perm_compose(&a, &b), &c), perm_compose(&a, &perm_compose(&b, &c)));
        prop_assert_eq!(perm_inverse(&perm_compose(&a, &b)), perm_compose(&perm_inverse(&b), &perm_inverse(&a)));
        prop_assert!(is_permutation(&perm_compose(&a, &b), 12));
    }

    #[test]
    fn transversal_reaches_every_point(a in perm_strategy(9), b in perm_strategy(9)) {
        let cycle: Perm = (0..9u32).map(|i| (i + 1) % 9).collect();
        let act = PermAction::new(vec![a, b, cycle], (0..9u32).collect()).unwrap();
        prop_assert!(act.check_transversal().is_ok());
        for i in 0..9 {
            let t = act.transversal_perm(i);
            prop_assert_eq!(t[0] as usize, i);
            let w = act.transversal_word(i);
            prop_assert_eq!(act.apply_word_inverse(&w, i as u32), 0);
        }
    }

    #[test]
    fn bitset_matches_vec(idx in prop::collection::vec(0u32..200, 0..60)) {
        let b = Bitset::from_indices(200, idx.iter().copied());
        let mut sorted = idx.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(b.count(), sorted.len());
        prop_assert_eq!(b.iter().map(|x| x as u32).collect::<Vec<_>>(), sorted);
    }
}
