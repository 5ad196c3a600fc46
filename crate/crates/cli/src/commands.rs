use std::fmt::Write as _;

use matroid_hodge::chow::ChowRing;
use matroid_hodge::concavity::{certify_independent_sets, certify_matroid, chromatic, ConcavityReport};
use matroid_hodge::fan::build_fan;
use matroid_hodge::flips::{ring_with_degree, ChainOrder, FlipChain};
use matroid_hodge::hodge::certify;
use matroid_hodge::linalg::{determinant, Q};
use matroid_hodge::matroid::catalog;
use matroid_hodge::subset::MAX_GROUND;
use matroid_hodge::Error;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::input::{self, Loaded};
use crate::output::{CliError, Outcome};
use crate::Order;

type Res = Result<Outcome, CliError>;

fn outcome(command: &'static str, subject: Option<&str>, pass: bool, payload: Value, text: String) -> Outcome {
    Outcome { command, subject: subject.map(str::to_string), pass, payload, text }
}

pub fn catalog_list() -> Outcome {
    let mut text = String::new();
    let entries: Vec<Value> = catalog::NAMES
        .iter()
        .map(|&name| {
            let m = catalog::get(name).expect("catalog name");
            let description = catalog::describe(name).expect("catalog name");
            writeln!(text, "{name:<10} n={:<2} rank={}  {description}", m.size(), m.rank()).unwrap();
            json!({ "name": name, "n": m.size(), "rank": m.rank(), "description": description })
        })
        .collect();
    outcome("catalog list", None, true, json!({ "matroids": entries }), text)
}

pub fn matroid_info(input: &Loaded) -> Res {
    let m = &input.matroid;
    let flats: Vec<usize> = m.lattice().flats_by_rank().iter().map(Vec::len).collect();
    let independent = m.independent_counts();
    let bases = independent[m.rank()];
    let mut text = String::new();
    writeln!(text, "matroid {}", input.name).unwrap();
    writeln!(text, "ground set size  {}", m.size()).unwrap();
    writeln!(text, "rank             {}", m.rank()).unwrap();
    writeln!(text, "simple           {}", m.is_simple()).unwrap();
    writeln!(text, "flats by rank    {flats:?}").unwrap();
    writeln!(text, "independent sets {independent:?}").unwrap();
    writeln!(text, "bases            {bases}").unwrap();
    let payload = json!({
        "n": m.size(),
        "rank": m.rank(),
        "simple": m.is_simple(),
        "flats_by_rank": flats,
        "independent_counts": independent,
        "bases": bases,
        "validation": "exhaustive",
    });
    Ok(outcome("matroid info", Some(&input.name), true, payload, text))
}

pub fn charpoly(input: &Loaded) -> Res {
    let m = &input.matroid;
    let by_subsets = m.char_poly_subset_sum();
    let by_mobius = m.char_poly_mobius();
    let agree = by_subsets == by_mobius;
    let reduced = m.reduced_char_poly()?;
    let mu = m.mu_sequence()?;
    let mut text = String::new();
    writeln!(text, "chi(λ)     = {by_subsets}").unwrap();
    writeln!(text, "via Möbius = {by_mobius}").unwrap();
    writeln!(text, "reduced    = {reduced}").unwrap();
    writeln!(text, "mu         = {mu:?}").unwrap();
    writeln!(text, "w          = {:?}", m.whitney_numbers()).unwrap();
    let payload = json!({
        "coefficients": by_subsets.coefficients(),
        "mobius_coefficients": by_mobius.coefficients(),
        "routes_agree": agree,
        "reduced_coefficients": reduced.coefficients(),
        "mu": mu,
        "whitney": m.whitney_numbers(),
    });
    Ok(outcome("charpoly", Some(&input.name), agree, payload, text))
}

/// `Ok(None)` on success, `Ok(Some(message))` on a violated property.
fn property(check: matroid_hodge::Result<()>) -> Result<Option<String>, CliError> {
    match check {
        Ok(()) => Ok(None),
        Err(Error::FanPropertyViolation(msg)) => Ok(Some(msg)),
        Err(e) => Err(e.into()),
    }
}

pub fn fan_check(input: &Loaded, filter: &str, reduced: bool, dump: bool) -> Res {
    let m = &input.matroid;
    let mut text = String::new();
    let mut pass = true;
    let mut fans = Vec::new();
    for (label, p) in input::filters(m, filter)? {
        let fan = build_fan(m, &p, reduced)?;
        let fan_property = property(fan.check_fan_property())?;
        let unimodular = property(fan.check_unimodular())?;
        let pure = fan.is_pure();
        // only reduced fans are pure of dimension r
        let ok = fan_property.is_none() && unimodular.is_none() && (pure || !reduced);
        pass &= ok;
        let cones: Vec<usize> = (0..=fan.dim()).map(|k| fan.count_of_dim(k)).collect();
        writeln!(
            text,
            "{label}: {} rays, cones by dimension {cones:?}, fan property {}, unimodular {}, pure {pure}",
            fan.num_rays(),
            fan_property.is_none(),
            unimodular.is_none(),
        )
        .unwrap();
        for msg in fan_property.iter().chain(&unimodular) {
            writeln!(text, "  {msg}").unwrap();
        }
        let mut entry = json!({
            "filter": label,
            "flats_in_filter": p.len(),
            "reduced": reduced,
            "rays": fan.num_rays(),
            "cones_by_dim": cones,
            "fan_property": fan_property.is_none(),
            "unimodular": unimodular.is_none(),
            "pure": pure,
            "violations": fan_property.iter().chain(&unimodular).collect::<Vec<_>>(),
        });
        if dump {
            entry["dump"] = serde_json::to_value(fan.dump()).expect("serializable");
        }
        fans.push(entry);
    }
    Ok(outcome("fan check", Some(&input.name), pass, json!({ "fans": fans }), text))
}

pub fn chow_dims(input: &Loaded, filter: &str, basis: bool) -> Res {
    let m = &input.matroid;
    let mut text = String::new();
    let mut pass = true;
    let mut rings = Vec::new();
    for (label, p) in input::filters(m, filter)? {
        let ring = ChowRing::new(build_fan(m, &p, true)?);
        let h = ring.hilbert_function();
        let palindromic = h.iter().eq(h.iter().rev());
        pass &= palindromic;
        writeln!(text, "{label}: hilbert function {h:?}").unwrap();
        let mut entry = json!({ "filter": label, "hilbert": h, "palindromic": palindromic });
        if basis {
            let monomials: Vec<Vec<String>> = (0..=ring.top()).map(|q| ring.describe_basis(q)).collect();
            for (q, row) in monomials.iter().enumerate() {
                writeln!(text, "  A^{q}: {}", row.join(" ")).unwrap();
            }
            entry["basis"] = json!(monomials);
        }
        rings.push(entry);
    }
    Ok(outcome("chow dims", Some(&input.name), pass, json!({ "rings": rings }), text))
}

pub fn chow_pd(input: &Loaded, filter: &str) -> Res {
    let m = &input.matroid;
    let mut text = String::new();
    let mut pass = true;
    let mut rings = Vec::new();
    for (label, p) in input::filters(m, filter)? {
        let ring = ring_with_degree(m, &p)?;
        let r = ring.top();
        let mut levels = Vec::new();
        writeln!(text, "{label}: hilbert function {:?}", ring.hilbert_function()).unwrap();
        for q in 0..=r {
            let (dq, dr) = (ring.dim(q), ring.dim(r - q));
            let det = if dq == dr { determinant(&ring.pairing_matrix(q)?) } else { Q::zero() };
            let integral = if dq == dr { ring.integral_pairing_determinant(q)? } else { Q::zero() };
            let torsion_free = ring.is_torsion_free(q);
            let unimodular = integral.abs().is_one();
            let ok = dq == dr && !det.is_zero() && unimodular && torsion_free;
            pass &= ok;
            writeln!(
                text,
                "  q={q}: dim {dq} vs {dr}, det over Q {det}, det over Z {integral}, torsion free {torsion_free}"
            )
            .unwrap();
            levels.push(json!({
                "q": q,
                "dim": dq,
                "dual_dim": dr,
                "determinant": det.to_string(),
                "integral_determinant": integral.to_string(),
                "torsion_free": torsion_free,
                "nondegenerate": !det.is_zero(),
                "unimodular": unimodular,
            }));
        }
        rings.push(json!({ "filter": label, "levels": levels }));
    }
    Ok(outcome("chow pd", Some(&input.name), pass, json!({ "rings": rings }), text))
}

pub fn flip_verify(input: &Loaded, order: Order) -> Res {
    let m = &input.matroid;
    let order = match order {
        Order::HighRankFirst => ChainOrder::HighRankFirst,
        Order::HighRankLast => ChainOrder::HighRankLast,
    };
    let chain = FlipChain::new(m, order)?;
    let steps = chain.report();
    let pass = steps.iter().all(|s| s.holds);
    let mut text = String::new();
    for (j, s) in steps.iter().enumerate() {
        let summary: Vec<String> = s
            .degrees
            .iter()
            .map(|d| format!("{}={}+{:?}", d.dim_plus, d.dim_minus, d.gysin))
            .collect();
        writeln!(
            text,
            "step {j}: center {} (rank {}) {} [{}]",
            s.center,
            s.center_rank,
            if s.holds { "ok" } else { "FAILS" },
            summary.join(" ")
        )
        .unwrap();
    }
    let payload = json!({ "order": order, "steps": steps });
    Ok(outcome("flip verify", Some(&input.name), pass, payload, text))
}

pub fn hodge_certify(input: &Loaded, filter: &str, ell: &str, nef_only: bool, seed: u64) -> Res {
    let m = &input.matroid;
    let (class, description) = input::ell(m, ell, seed)?;
    let mut text = String::new();
    let mut pass = true;
    let mut reports = Vec::new();
    for (label, p) in input::filters(m, filter)? {
        let ring = ring_with_degree(m, &p)?;
        let report = certify(&ring, &class, &input.name, &description, nef_only)?;
        pass &= report.hl() && report.hr();
        writeln!(text, "{label} ({description}, ample {}):", report.ample).unwrap();
        for l in &report.levels {
            writeln!(
                text,
                "  q={}: dim {}, signature {:?} expected {:?}, hl {}, hr {}, primitive {} positive {}",
                l.q, l.dim, l.signature, l.expected_signature, l.hl, l.hr, l.primitive_dim, l.primitive_positive
            )
            .unwrap();
        }
        let mut value = serde_json::to_value(&report).expect("serializable");
        value["filter_label"] = json!(label);
        value["hl_all"] = json!(report.hl());
        value["hr_all"] = json!(report.hr());
        reports.push(value);
    }
    Ok(outcome("hodge certify", Some(&input.name), pass, json!({ "reports": reports }), text))
}

fn render(report: &ConcavityReport, text: &mut String) {
    for s in &report.sequences {
        writeln!(
            text,
            "{:<10} {:?} log-concave {} unimodal {}",
            s.name, s.values, s.log_concave, s.unimodal
        )
        .unwrap();
    }
}

pub fn logconcave(input: &Loaded) -> Res {
    let m = &input.matroid;
    let mut text = String::new();
    let matroid = certify_matroid(&input.name, m)?;
    render(&matroid, &mut text);
    let mut pass = matroid.holds();
    let mut payload = json!({ "matroid": matroid });
    if m.size() < MAX_GROUND {
        let f = certify_independent_sets(&input.name, m)?;
        render(&f, &mut text);
        pass &= f.holds();
        payload["independent_sets"] = json!(f);
    } else {
        writeln!(text, "f          skipped: the free dual extension needs {} elements", m.size() + 1).unwrap();
        payload["independent_sets"] = Value::Null;
    }
    if let Some(g) = &input.graph {
        let (poly, report) = chromatic(&input.name, g)?;
        writeln!(text, "chromatic polynomial {poly}").unwrap();
        render(&report, &mut text);
        pass &= report.holds();
        payload["chromatic"] = json!({ "coefficients": poly.coefficients(), "report": report });
    }
    Ok(outcome("logconcave", Some(&input.name), pass, payload, text))
}
