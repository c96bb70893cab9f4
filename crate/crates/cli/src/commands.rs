use rayon::prelude::*;
use serde_json::{json, Value};

use saxl_core::census::{Census, CensusError};
use saxl_core::classdata::crosscheck_against_bruteforce;
use saxl_core::permaction::{
    perm_closure, shared_stabilizer_points, PermAction, PermError, SaxlContext,
};
use saxl_core::psu::{subgroup_order, CosetMethod, CosetSetup, PointSetup, PsuError};
use saxl_core::qbound::{
    default_grid_c1, default_grid_c3, psl27_primes, psl29_primes, psl29_refined_total, qcheck_c1,
    qcheck_c3, qcheck_psl27, qcheck_psl29, BoundError, Params, QLedger, Setting,
};
use saxl_core::unitary::{HermForm, SubgroupCase, Unitary, UnitaryError};

use crate::report::{rational, Check, Status};

/// A configuration problem found only once work starts (exit code 2).
#[derive(Debug)]
pub struct ConfigError(pub String);

fn unitary(p: u64, m: u32, modulus_index: usize) -> Result<Unitary, ConfigError> {
    Unitary::with_modulus_index(p, m, modulus_index).map_err(|e| ConfigError(e.to_string()))
}

fn skipped(name: &str, reason: String, extra: Value) -> Vec<Check> {
    vec![Check::new(name, Status::Skipped, json!({ "reason": reason, "detail": extra }))]
}

fn out_of_scale_psu(e: &PsuError) -> bool {
    matches!(
        e,
        PsuError::ClosureCap(_)
            | PsuError::Perm(PermError::CapExceeded(_))
            | PsuError::Unitary(UnitaryError::KeyTooWide(_))
    )
}

struct Built<L> {
    action: PermAction<L>,
    stab: Vec<saxl_core::permaction::Perm>,
    m_elems: usize,
}

fn saxl_checks<L: Sync>(built: &Built<L>, n_expected: u64, m_order: u64, cap: usize) -> Vec<Check> {
    let act = &built.action;
    let n = act.n();
    let mut checks = Vec::new();
    checks.push(Check::new(
        "action",
        Status::from_bool(
            n as u64 == n_expected && built.m_elems as u64 == m_order && act.check_transversal().is_ok(),
        ),
        json!({ "n": n, "expected_n": n_expected, "m_order": m_order, "m_enumerated": built.m_elems }),
    ));

    let ctx = match SaxlContext::new(act, &built.stab, m_order) {
        Ok(c) => c,
        Err(e) => {
            checks.push(Check::new("base-size", Status::Fail, json!({ "error": e.to_string() })));
            return checks;
        }
    };
    // Second route: a point has trivial stabilizer in G_0 iff no non-identity element fixes it.
    let route2 = match perm_closure(n, &built.stab, cap.max(m_order as usize + 1)) {
        Ok(elems) => {
            let covered = shared_stabilizer_points(n, &elems);
            Some((elems.len(), (0..n).any(|b| !covered.contains(b))))
        }
        Err(_) => None,
    };
    let mut profile: Vec<(usize, usize)> = Vec::new();
    let lengths = saxl_core::permaction::suborbits(act, &built.stab).map(|s| {
        let mut l: Vec<usize> = s.iter().map(Vec::len).collect();
        l.sort_unstable();
        l
    });
    if let Ok(lengths) = &lengths {
        for &l in lengths {
            match profile.last_mut() {
                Some((len, c)) if *len == l => *c += 1,
                _ => profile.push((l, 1)),
            }
        }
    }
    let base_two = ctx.base_size_two();
    let agree = route2.is_some_and(|(order, b2)| order as u64 == m_order && b2 == base_two);
    checks.push(Check::new(
        "base-size",
        Status::from_bool(agree),
        json!({
            "base_size_two": base_two,
            "suborbit_profile": profile.iter().map(|(l, c)| json!([l, c])).collect::<Vec<_>>(),
            "regular_suborbits": profile.iter().find(|(l, _)| *l as u64 == m_order).map_or(0, |x| x.1),
            "gamma_size": ctx.gamma().len(),
            "fixed_point_route_base_size_two": route2.map(|x| x.1),
        }),
    ));

    if base_two {
        let mut failures: Vec<u32> = (0..n)
            .into_par_iter()
            .filter(|&b| !ctx.has_common_neighbour(b))
            .map(|b| b as u32)
            .collect();
        failures.sort_unstable();
        checks.push(Check::new(
            "common-neighbour",
            Status::from_bool(failures.is_empty()),
            json!({
                "applicable": true,
                "conjecture_holds": failures.is_empty(),
                "failures": failures.len(),
                "first_failures": failures.iter().take(10).collect::<Vec<_>>(),
            }),
        ));
    } else {
        checks.push(Check::new(
            "common-neighbour",
            Status::Pass,
            json!({ "applicable": false, "conjecture_holds": Value::Null, "failures": 0, "first_failures": [] }),
        ));
    }
    checks
}

pub fn verify_direct(
    p: u64,
    m: u32,
    case: SubgroupCase,
    cap: usize,
    modulus_index: usize,
) -> Result<Vec<Check>, ConfigError> {
    let u = unitary(p, m, modulus_index)?;
    if let SubgroupCase::Subfield { q_sub } = case {
        u.subfield_exponent(q_sub).map_err(|e| ConfigError(e.to_string()))?;
    }
    let m_order = subgroup_order(&u, case);
    let n_expected = u.t_order() / m_order;
    let scale = json!({ "expected_n": n_expected, "cap": cap });
    if n_expected > cap as u64 {
        return Ok(skipped("verify-direct", "domain exceeds cap".into(), scale));
    }
    let on_err = |e: PsuError| {
        if out_of_scale_psu(&e) {
            skipped("verify-direct", e.to_string(), scale.clone())
        } else {
            vec![Check::new("action", Status::Fail, json!({ "error": e.to_string() }))]
        }
    };
    Ok(match case {
        SubgroupCase::Sl => match PointSetup::new(&u, cap) {
            Ok(s) => {
                let m_elems = s.m_elems.len();
                saxl_checks(&Built { action: s.action, stab: s.stab, m_elems }, n_expected, m_order, cap)
            }
            Err(e) => on_err(e),
        },
        _ => match CosetSetup::new(&u, case, CosetMethod::Keyed, cap) {
            Ok(s) => {
                let m_elems = s.m_elems.len();
                saxl_checks(&Built { action: s.action, stab: s.stab, m_elems }, n_expected, m_order, cap)
            }
            Err(e) => on_err(e),
        },
    })
}

pub fn crosscheck_classes(p: u64, m: u32, cap: usize, modulus_index: usize) -> Result<Vec<Check>, ConfigError> {
    let u = unitary(p, m, modulus_index)?;
    let t_order = u.t_order();
    let r_order = t_order * u.d() as u64;
    if t_order > cap as u64 {
        return Ok(skipped("crosscheck-classes", "group exceeds cap".into(), json!({ "order": t_order, "cap": cap })));
    }
    let gens = u.t_generators(HermForm::Identity);
    let census_err = |e: CensusError| match e {
        CensusError::Cap(_) | CensusError::Unitary(UnitaryError::KeyTooWide(_)) => None,
        other => Some(other.to_string()),
    };
    let t = match Census::new(&u, &gens, cap) {
        Ok(t) => t,
        Err(e) => {
            return Ok(match census_err(e.clone()) {
                None => skipped("crosscheck-classes", e.to_string(), json!({ "order": t_order, "cap": cap })),
                Some(msg) => vec![Check::new("census", Status::Fail, json!({ "error": msg }))],
            })
        }
    };
    let mut checks = Vec::new();
    let r = if u.d() == 3 {
        if r_order > cap as u64 {
            checks.push(Check::new(
                "R census",
                Status::Skipped,
                json!({ "reason": "group exceeds cap", "detail": { "order": r_order, "cap": cap } }),
            ));
            None
        } else {
            let mut rg = gens.clone();
            rg.push(u.delta().proj);
            match Census::new(&u, &rg, cap) {
                Ok(rc) => Some(rc),
                Err(e) => {
                    checks.push(Check::new("R census", Status::Skipped, json!({ "reason": e.to_string() })));
                    None
                }
            }
        }
    } else {
        None
    };
    match crosscheck_against_bruteforce(&u, &t, r.as_ref()) {
        Ok(items) => checks.extend(items.into_iter().map(|it| {
            Check::new(it.name, Status::from_bool(it.pass), json!({ "expected": it.expected, "computed": it.computed }))
        })),
        Err(e) => checks.push(Check::new("class data", Status::Fail, json!({ "error": e.to_string() }))),
    }
    Ok(checks)
}

fn ledger_payload(l: &QLedger) -> Value {
    let params = match l.params {
        Params::Subfield { p, m_sub, e } => json!({ "p": p, "m_sub": m_sub, "e": e }),
        Params::Prime { q } => json!({ "q": q }),
    };
    let terms: Vec<Value> = l
        .terms
        .iter()
        .map(|t| {
            json!({
                "label": t.label,
                "r": t.r,
                "classes": t.classes,
                "kind": t.kind.name(),
                "fix": rational(&t.fix),
                "n_m": rational(&t.n_m),
                "value": rational(&t.value),
                "exact": t.exact.as_ref().map(rational),
                "closed_form": t.closed_form.as_ref().map(rational),
            })
        })
        .collect();
    let budgets: Vec<Value> = l
        .budgets
        .iter()
        .map(|b| {
            json!({
                "label": b.label,
                "terms": b.terms.iter().map(|&i| l.terms[i].label.as_str()).collect::<Vec<_>>(),
                "per_class": b.per_class,
                "amount": rational(&b.amount),
                "budget": rational(&b.budget),
                "pass": b.pass,
            })
        })
        .collect();
    json!({
        "setting": l.setting.name(),
        "params": params,
        "m_order": l.m_order.to_string(),
        "omega": rational(&l.omega),
        "total": rational(&l.total),
        "verdict": l.verdict,
        "budgets_pass": l.budgets_pass(),
        "exact_audit": l.exact_audit(),
        "closed_form_audit": l.closed_form_audit(),
        "closed_total": l.closed_total.as_ref().map(rational),
        "terms": terms,
        "budgets": budgets,
    })
}

fn point_check(name: String, ledger: Result<QLedger, BoundError>, extra: Option<(&str, Value)>) -> Check {
    match ledger {
        Ok(l) => {
            let ok = l.passes() && l.exact_audit() && l.closed_form_audit();
            let mut payload = ledger_payload(&l);
            if let (Some((k, v)), Value::Object(map)) = (extra, &mut payload) {
                map.insert(k.into(), v);
            }
            Check::new(name, Status::from_bool(ok), payload)
        }
        Err(e) => Check::new(name, Status::Fail, json!({ "precondition": e.to_string() })),
    }
}

pub fn certify_bounds(setting: Setting, grid_max: u64) -> Vec<Check> {
    match setting {
        Setting::C1 => default_grid_c1(grid_max)
            .into_par_iter()
            .map(|(p, m_sub, e)| point_check(format!("c1 p={p} m'={m_sub} e={e}"), qcheck_c1(p, m_sub, e), None))
            .collect(),
        Setting::C3 => default_grid_c3(grid_max)
            .into_par_iter()
            .map(|(p, m_sub)| point_check(format!("c3 p={p} m'={m_sub}"), qcheck_c3(p, m_sub), None))
            .collect(),
        Setting::Psl27 => psl27_primes(grid_max)
            .into_par_iter()
            .map(|q| point_check(format!("psl27 q={q}"), qcheck_psl27(q), None))
            .collect(),
        Setting::Psl29 => psl29_primes(grid_max)
            .into_par_iter()
            .map(|q| {
                let refined = psl29_refined_total(q).ok().map(|r| Value::String(rational(&r)));
                point_check(
                    format!("psl29 q={q}"),
                    qcheck_psl29(q),
                    Some(("refined_total", refined.unwrap_or(Value::Null))),
                )
            })
            .collect(),
    }
}
