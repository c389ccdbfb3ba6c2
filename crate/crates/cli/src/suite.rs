//! Built-in verification suite: every check runs on fixed models with exact comparisons.

use std::collections::BTreeMap;

use hochgrav::algebra::{check_frobenius_pairing, FrobeniusPairing, GradedAlgebra};
use hochgrav::calculus::{check_bv, CalculusModel};
use hochgrav::gravity::{compare_across_iso, induced_iso, verify_gravity_axioms, GravityAlgebra, JacobiSigns};
use hochgrav::hochschild::{bar_cohomology_dim, chain_slice, eta_coboundary_defects, FrobeniusHochschild};
use hochgrav::koszul::{small_hochschild_models, QuadraticPresentation};
use hochgrav::linalg::{q, HomologyPresentation};
use hochgrav::mixed::{MixedComplexSlice, MixedHomology};
use hochgrav::poisson::{
    frobenius_poisson_check, is_divergence_free, koszul_poisson_identification, unimodular_log_canonical,
    unimodularity_check, BaseKind, PoissonCalculus, QuadraticBivector,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::output::{to_json, CliError, Outcome, Status};

type Criterion = fn() -> Result<(bool, Value), CliError>;

const CRITERIA: [(u32, &str, Criterion); 9] = [
    (1, "mixed complex axioms", complex_axioms),
    (2, "HKR dimensions", hkr),
    (3, "Koszul model dimensions", koszul_models),
    (4, "Frobenius pairings", frobenius),
    (5, "BV identities", bv),
    (6, "long exact sequence", long_exact_sequence),
    (7, "gravity axioms", gravity_axioms),
    (8, "gravity isomorphism", gravity_iso),
    (9, "unimodularity equivalence", unimodularity),
];

fn derived_pi() -> QuadraticBivector {
    unimodular_log_canonical(3).remove(0)
}

fn bivector(n: usize, terms: &[([usize; 4], i64)]) -> Result<QuadraticBivector, CliError> {
    Ok(QuadraticBivector::from_coefficients(BaseKind::Polynomial, n, terms.iter().map(|&(k, c)| (k, q(c))))?)
}

fn model(pi: &QuadraticBivector, w: u32) -> Result<PoissonCalculus, CliError> {
    Ok(PoissonCalculus::new(pi.base(), pi.to_polyvector(), w)?)
}

fn exterior_two(w: u32) -> Result<FrobeniusHochschild, CliError> {
    let a = GradedAlgebra::exterior(2);
    let p = FrobeniusPairing::exterior_top(&a);
    Ok(FrobeniusHochschild::new(a, p, w)?)
}

/// Bivectors whose slices are tested: the derived unimodular one, zero, and two non-unimodular planar ones.
fn tested_bivectors() -> Result<Vec<QuadraticBivector>, CliError> {
    let mut out = Vec::new();
    for p in [
        derived_pi(),
        QuadraticBivector::zero(BaseKind::Polynomial, 2),
        bivector(2, &[([0, 1, 0, 1], 1)])?,
        bivector(2, &[([0, 0, 0, 1], 1)])?,
    ] {
        out.push(p.dual());
        out.push(p);
    }
    Ok(out)
}

fn test_algebras() -> Vec<(&'static str, GradedAlgebra)> {
    vec![
        ("exterior(1)", GradedAlgebra::exterior(1)),
        ("exterior(2)", GradedAlgebra::exterior(2)),
        ("polynomial(2)", GradedAlgebra::truncated_polynomial(2, 4)),
    ]
}

fn complex_axioms() -> Result<(bool, Value), CliError> {
    let mut ok = true;
    let mut rows = Vec::new();
    for (name, alg) in test_algebras() {
        for w in 0..=4 {
            let r = chain_slice(&alg, w)?.mixed.axiom_report()?;
            ok &= r.passed();
            rows.push(json!({ "complex": "hochschild", "algebra": name, "weight": w, "checked": r.identities_checked, "failures": r.failures.len() }));
        }
    }
    for pi in tested_bivectors()? {
        let m = model(&pi, 3)?;
        for w in m.weights() {
            let Some(s) = m.slice(w) else { continue };
            let r = s.axiom_report()?;
            ok &= r.passed();
            rows.push(json!({ "complex": "poisson", "algebra": s.label(), "weight": w, "checked": r.identities_checked, "failures": r.failures.len() }));
        }
        let (mut checked, mut failures) = (0, 0);
        for (t, s) in m.pieces() {
            if let Ok(sq) = m.coboundary_matrix((t + 1, s)).mul(&m.coboundary_matrix((t, s))) {
                checked += 1;
                failures += usize::from(!sq.is_zero());
            }
        }
        ok &= failures == 0;
        rows.push(json!({ "complex": "coboundary", "algebra": pi.display(), "checked": checked, "failures": failures }));
    }
    Ok((ok, json!(rows)))
}

fn hh_dim(slice: &MixedComplexSlice, d: i32) -> Result<usize, CliError> {
    Ok(HomologyPresentation::new(&slice.b(d + 1), &slice.b(d))?.dim())
}

/// Monomials `x^α dx_B` in two variables with `|B| = p`, `|α| + p = w`.
fn plane_forms(p: u32, w: u32) -> usize {
    match p {
        0 | 2 if p <= w => (w - p + 1) as usize,
        1 if p <= w => 2 * w as usize,
        _ => 0,
    }
}

fn hkr() -> Result<(bool, Value), CliError> {
    let alg = GradedAlgebra::truncated_polynomial(2, 4);
    let mut ok = true;
    let mut table = BTreeMap::new();
    for w in 0..=4u32 {
        let slice = chain_slice(&alg, w)?.mixed;
        let mut dims = BTreeMap::new();
        for p in 0..=4u32 {
            let d = hh_dim(&slice, p as i32)?;
            ok &= d == plane_forms(p, w);
            dims.insert(p.to_string(), d);
        }
        table.insert(w.to_string(), dims);
    }
    Ok((ok, json!({ "algebra": "polynomial(2)", "hh_dims": table })))
}

fn nonzero(m: BTreeMap<i32, usize>) -> BTreeMap<i32, usize> {
    m.into_iter().filter(|(_, v)| *v > 0).collect()
}

fn koszul_models() -> Result<(bool, Value), CliError> {
    let mut ok = true;
    let mut chains = Vec::new();
    for (name, pres) in [("polynomial(2)", QuadraticPresentation::polynomial(2)), ("exterior(2)", QuadraticPresentation::exterior(2))] {
        let m = small_hochschild_models(&pres, 4)?;
        for w in 0..=4 {
            let small = nonzero(m.homology_dims(w)?);
            let slice = chain_slice(m.data.source.algebra(), w)?.mixed;
            let bar = nonzero(slice.dims().keys().map(|&d| Ok((d, hh_dim(&slice, d)?))).collect::<Result<_, CliError>>()?);
            ok &= small == bar;
            chains.push(json!({ "algebra": name, "weight": w, "small": small, "bar": bar }));
        }
    }
    let m = small_hochschild_models(&QuadraticPresentation::polynomial(2), 5)?;
    let ext = GradedAlgebra::exterior(2);
    let mut cochains = Vec::new();
    for i in 0..=3i32 {
        for w in 0..=4i64 {
            let a = m.cohomology_dims(w - i as i64)?.get(&i).copied().unwrap_or(0);
            let b = bar_cohomology_dim(&ext, i, i as i64 - w, w as usize)?;
            ok &= a == b;
            cochains.push(json!({ "i": i, "weight": w, "polynomial": a, "exterior": b }));
        }
    }
    Ok((ok, json!({ "chains": chains, "cochains": cochains })))
}

fn frobenius() -> Result<(bool, Value), CliError> {
    let mut ok = true;
    let mut rows = Vec::new();
    for n in 1..=3 {
        let alg = GradedAlgebra::exterior(n);
        let p = FrobeniusPairing::exterior_top(&alg);
        let r = check_frobenius_pairing(&alg, &p);
        let defects = eta_coboundary_defects(&alg, &p)?;
        ok &= r.passed() && defects.is_empty();
        rows.push(json!({
            "n": n,
            "nondegenerate": r.nondegenerate,
            "triples_checked": r.triples_checked,
            "cyclic_violations": r.cyclic_violations.len(),
            "eta_coboundary_defects": defects.len(),
        }));
    }
    Ok((ok, json!(rows)))
}

fn bv() -> Result<(bool, Value), CliError> {
    let pi = derived_pi();
    let mut ok = is_divergence_free(&pi.base(), &pi.to_polyvector());
    let mut reports = Vec::new();
    let f = exterior_two(3)?;
    let r = check_bv(&f, &q(1), usize::MAX)?;
    ok &= r.passed() && r.seven_term_checked > 0;
    reports.push(to_json(&r));
    let d = pi.dual();
    for m in [model(&pi, 4)?, model(&d, 4)?] {
        let r = check_bv(&m, &q(-1), usize::MAX)?;
        ok &= r.passed() && r.seven_term_checked > 0 && r.bracket_checked > 0;
        reports.push(to_json(&r));
    }
    Ok((ok, json!({ "derived_bivector": pi.display(), "dual_bivector": d.display(), "reports": reports })))
}

fn all_slices() -> Result<Vec<MixedComplexSlice>, CliError> {
    let mut out = Vec::new();
    for (_, alg) in test_algebras() {
        for w in 0..=3 {
            out.push(chain_slice(&alg, w)?.mixed);
        }
    }
    for pi in tested_bivectors()? {
        let m = model(&pi, 3)?;
        out.extend(m.weights().into_iter().filter_map(|w| m.slice(w).cloned()));
    }
    let f = exterior_two(3)?;
    out.extend(f.weights().into_iter().filter_map(|w| f.mixed(w).map(|m| m.slice().clone())));
    Ok(out)
}

fn long_exact_sequence() -> Result<(bool, Value), CliError> {
    let mut ok = true;
    let mut rows = Vec::new();
    for s in all_slices()? {
        let mh = MixedHomology::with_default_truncation(s.clone())?;
        let les = mh.long_exact_sequence_report()?;
        let st = mh.stabilization_report()?;
        ok &= les.passed() && st.unstable_degrees.is_empty();
        rows.push(json!({
            "label": s.label(),
            "weight": s.weight(),
            "degrees_checked": les.degrees_checked,
            "les_failures": les.beta_pi_failures.len() + les.pi_beta_failures.len() + les.exactness_failures.len(),
            "truncation": st.truncation,
            "unstable_degrees": st.unstable_degrees,
        }));
    }
    Ok((ok, json!(rows)))
}

fn gravity_axioms() -> Result<(bool, Value), CliError> {
    let pi = derived_pi();
    let models: Vec<Box<dyn CalculusModel>> = vec![Box::new(exterior_two(3)?), Box::new(model(&pi, 4)?), Box::new(model(&pi.dual(), 4)?)];
    let mut ok = true;
    let mut reports = Vec::new();
    for m in &models {
        let g = GravityAlgebra::new(m.as_ref())?;
        let r = verify_gravity_axioms(&g, 4, 5, JacobiSigns::SignedUnshuffle)?;
        ok &= r.passed() && r.skew_checked > 0 && r.jacobi_checked.get("n=3,m=0").is_some_and(|&c| c > 0);
        reports.push(to_json(&r));
    }
    Ok((ok, json!(reports)))
}

fn gravity_iso() -> Result<(bool, Value), CliError> {
    let mut ok = true;
    let mut rows = Vec::new();
    for pi in [derived_pi(), QuadraticBivector::zero(BaseKind::Polynomial, 2)] {
        let d = pi.dual();
        let (p, dm) = (model(&pi, 4)?, model(&d, 4)?);
        let id = koszul_poisson_identification(&p, &dm)?;
        let iso = induced_iso(&p, &dm, |w, e| id.psi(w, e).cloned())?;
        let (g1, g2) = (GravityAlgebra::new(&p)?, GravityAlgebra::new(&dm)?);
        let cmp = compare_across_iso(&g1, &g2, &iso, 4)?;
        let flipped: BTreeMap<_, _> = iso.iter().map(|(k, m)| (*k, m.scale(&q(-1)))).collect();
        let control = compare_across_iso(&g1, &g2, &flipped, 4)?;
        ok &= id.report().passed() && cmp.matches() && cmp.checked > 0 && control.mismatch_count > 0;
        rows.push(json!({
            "bivector": pi.display(),
            "dual": d.display(),
            "identification_failures": id.report().failures.len(),
            "checked": cmp.checked,
            "mismatches": cmp.mismatch_count,
            "control_mismatches": control.mismatch_count,
        }));
    }
    Ok((ok, json!(rows)))
}

fn unimodularity() -> Result<(bool, Value), CliError> {
    let cases = [
        derived_pi(),
        bivector(2, &[([0, 1, 0, 1], 1)])?,
        bivector(2, &[([0, 0, 0, 1], 1)])?,
        QuadraticBivector::zero(BaseKind::Polynomial, 2),
    ];
    let mut ok = true;
    let mut rows = Vec::new();
    for pi in cases {
        let (p, d) = (model(&pi, 4)?, model(&pi.dual(), 4)?);
        let primal = unimodularity_check(&pi.base(), &pi.to_polyvector(), &p.volume(), 4)?;
        let dual = pi.dual();
        let frob = frobenius_poisson_check(&dual.base(), &dual.to_polyvector(), &d.volume(), 4)?;
        ok &= primal.consistent() && frob.consistent() && primal.unimodular() == frob.unimodular();
        rows.push(json!({
            "bivector": pi.display(),
            "primal": primal.unimodular(),
            "frobenius_dual": frob.unimodular(),
            "divergence_free": primal.divergence_free,
        }));
    }
    Ok((ok, json!(rows)))
}

pub fn run() -> Result<Outcome, CliError> {
    let results: Vec<Result<(bool, Value), CliError>> = CRITERIA.par_iter().map(|(_, _, f)| f()).collect();
    let mut o = Outcome::new("suite");
    let mut entries = Vec::new();
    for ((id, title, _), r) in CRITERIA.iter().zip(results) {
        let (passed, data) = r?;
        o.verdict(Status::of(passed));
        o.note(format!("{id}. {title}: {}", if passed { "pass" } else { "FAIL" }));
        entries.push(json!({ "id": id, "title": title, "passed": passed, "data": data }));
    }
    o.note("10. determinism: compare the artifacts of two runs");
    o.set("criteria", Value::Array(entries));
    Ok(o)
}
