use std::collections::BTreeMap;

use hochgrav::algebra::{check_frobenius_pairing, FrobeniusPairing, GradedAlgebra};
use hochgrav::calculus::{check_bv, CalculusModel};
use hochgrav::gravity::{compare_across_iso, gravity_table, induced_iso, verify_gravity_axioms, GravityAlgebra, JacobiSigns};
use hochgrav::hochschild::{bar_cohomology_dim, chain_slice, eta_coboundary_defects, FrobeniusHochschild};
use hochgrav::koszul::{is_koszul, koszul_dual_algebra, small_hochschild_models, QuadraticAlgebra};
use hochgrav::linalg::{q, HomologyPresentation};
use hochgrav::mixed::{default_truncation, MixedComplexSlice, MixedHomology};
use hochgrav::poisson::{
    frobenius_poisson_check, koszul_poisson_identification, unimodularity_check, BaseKind, PoissonCalculus,
    QuadraticBivector, UnimodularityVerdict,
};
use serde_json::{json, Map, Value};

use crate::job::{AlgebraSpec, JobSpec, Task};
use crate::output::{to_json, CliError, Outcome, Status};

pub fn run_task(task: Task, job: &JobSpec) -> Result<Outcome, CliError> {
    match task {
        Task::Hh => hh(job),
        Task::HcMinus => hc_minus(job),
        Task::Poisson => poisson(job),
        Task::Gravity => gravity(job),
        Task::Koszul => koszul(job),
        Task::Check => check(job),
    }
}

fn semantic(msg: impl Into<String>) -> CliError {
    CliError::Parse(vec![msg.into()])
}

pub fn algebra_of(spec: &AlgebraSpec, wmax: u32) -> Result<GradedAlgebra, CliError> {
    Ok(match spec {
        AlgebraSpec::Exterior(n) => GradedAlgebra::exterior(*n),
        AlgebraSpec::Polynomial(n) => GradedAlgebra::truncated_polynomial(*n, wmax),
        AlgebraSpec::Quadratic(p) => QuadraticAlgebra::new(p.clone(), wmax)?.algebra().clone(),
        AlgebraSpec::Table(a) => a.clone(),
    })
}

fn bivector(job: &JobSpec) -> Result<Option<QuadraticBivector>, CliError> {
    let Some(terms) = &job.poisson else { return Ok(None) };
    let (side, n) = match job.algebra {
        AlgebraSpec::Polynomial(n) => (BaseKind::Polynomial, n),
        AlgebraSpec::Exterior(n) => (BaseKind::Exterior, n),
        _ => return Err(semantic("a [poisson] block needs kind polynomial or exterior")),
    };
    Ok(Some(QuadraticBivector::from_coefficients(side, n, terms.iter().cloned())?))
}

fn poisson_model(pi: &QuadraticBivector, wmax: u32) -> Result<PoissonCalculus, CliError> {
    Ok(PoissonCalculus::new(pi.base(), pi.to_polyvector(), wmax)?)
}

fn frobenius_model(job: &JobSpec) -> Result<Option<FrobeniusHochschild>, CliError> {
    if !job.top_pairing {
        return Ok(None);
    }
    let alg = algebra_of(&job.algebra, job.window.wmax)?;
    let p = FrobeniusPairing::exterior_top(&alg);
    Ok(Some(FrobeniusHochschild::new(alg, p, job.window.wmax)?))
}

type DimTables = (Map<String, Value>, Map<String, Value>);

fn hh_dims(slice: &MixedComplexSlice, pmax: u32) -> Result<DimTables, CliError> {
    let (mut chains, mut hh) = (Map::new(), Map::new());
    for (&d, &n) in slice.dims() {
        if d > pmax as i32 {
            continue;
        }
        chains.insert(d.to_string(), json!(n));
        hh.insert(d.to_string(), json!(HomologyPresentation::new(&slice.b(d + 1), &slice.b(d))?.dim()));
    }
    Ok((chains, hh))
}

fn hh(job: &JobSpec) -> Result<Outcome, CliError> {
    let alg = algebra_of(&job.algebra, job.window.wmax)?;
    let mut o = Outcome::new("hh");
    let mut weights = Map::new();
    for w in 0..=job.window.wmax {
        let slice = chain_slice(&alg, w)?.mixed;
        let (chains, hh) = hh_dims(&slice, job.window.pmax)?;
        let ax = slice.axiom_report()?;
        o.verdict(Status::of(ax.passed()));
        o.note(format!("w={w}: HH {}", Value::Object(hh.clone())));
        weights.insert(w.to_string(), json!({ "chains": chains, "hh": hh, "axioms": to_json(&ax) }));
    }
    o.set("weights", Value::Object(weights));
    Ok(o)
}

/// Negative cyclic data of one slice; window insufficiency is reported with the
/// smallest truncation that stabilizes.
fn mixed_block(slice: &MixedComplexSlice, utrunc: Option<u32>, o: &mut Outcome) -> Result<Value, CliError> {
    let fallback = default_truncation(slice);
    let n = utrunc.unwrap_or(fallback);
    let mh = MixedHomology::new(slice.clone(), n)?;
    let hh: Map<String, Value> = mh.degrees().map(|d| (d.to_string(), json!(mh.hh_dim(d)))).collect();
    let nc: Map<String, Value> = mh.nc_degrees().map(|d| (d.to_string(), json!(mh.nc_dim(d)))).collect();
    let axioms = slice.axiom_report()?;
    let les = mh.long_exact_sequence_report()?;
    let st = mh.stabilization_report()?;
    o.verdict(Status::of(axioms.passed() && les.passed()));
    let mut sufficient = Value::Null;
    if !st.unstable_degrees.is_empty() {
        o.verdict(Status::Window);
        for k in n + 1..=fallback.max(n + 1) + 1 {
            if MixedHomology::new(slice.clone(), k)?.stabilization_report()?.unstable_degrees.is_empty() {
                sufficient = json!(k);
                break;
            }
        }
        o.note(format!(
            "{} (w={}): truncation {n} unstable in degrees {:?}; sufficient truncation {sufficient}",
            slice.label(),
            slice.weight(),
            st.unstable_degrees
        ));
    }
    Ok(json!({
        "label": slice.label(),
        "weight": slice.weight(),
        "truncation": n,
        "hh": hh,
        "hc_minus": nc,
        "axioms": to_json(&axioms),
        "long_exact_sequence": to_json(&les),
        "stabilization": to_json(&st),
        "sufficient_truncation": sufficient,
    }))
}

fn hc_minus(job: &JobSpec) -> Result<Outcome, CliError> {
    let alg = algebra_of(&job.algebra, job.window.wmax)?;
    let mut o = Outcome::new("hc-minus");
    let mut blocks = Vec::new();
    for w in 0..=job.window.wmax {
        blocks.push(mixed_block(&chain_slice(&alg, w)?.mixed, job.window.utrunc, &mut o)?);
    }
    o.set("hochschild", Value::Array(blocks));
    if let Some(pi) = bivector(job)? {
        let m = poisson_model(&pi, job.window.wmax)?;
        let mut blocks = Vec::new();
        for w in m.weights() {
            if let Some(s) = m.slice(w) {
                blocks.push(mixed_block(s, job.window.utrunc, &mut o)?);
            }
        }
        o.set("poisson", Value::Array(blocks));
    }
    let n = o.body["hochschild"].as_array().map_or(0, Vec::len);
    o.note(format!("{n} Hochschild weight slices"));
    Ok(o)
}

fn verdict_of(pi: &QuadraticBivector, wmax: u32) -> Result<UnimodularityVerdict, CliError> {
    let base = pi.base();
    let m = poisson_model(pi, wmax)?;
    Ok(match base.kind() {
        BaseKind::Polynomial => unimodularity_check(&base, &pi.to_polyvector(), &m.volume(), wmax)?,
        BaseKind::Exterior => frobenius_poisson_check(&base, &pi.to_polyvector(), &m.volume(), wmax)?,
    })
}

fn poisson(job: &JobSpec) -> Result<Outcome, CliError> {
    let pi = bivector(job)?.ok_or_else(|| semantic("task poisson needs a [poisson] block"))?;
    let base = pi.base();
    let mut o = Outcome::new("poisson");
    o.set("bivector", json!(pi.display()));
    let jacobi = base.schouten(&pi.to_polyvector(), &pi.to_polyvector()).is_zero();
    o.set("is_poisson", json!(jacobi));
    if !jacobi {
        o.verdict(Status::Fail);
        o.note(format!("{} fails the Jacobi identity", pi.display()));
        return Ok(o);
    }
    let wmax = job.window.wmax;
    let m = poisson_model(&pi, wmax)?;
    let dims: Map<String, Value> = m.pieces().into_iter().map(|k| (format!("{},{}", k.0, k.1), json!(m.cohomology_dim(k)))).collect();
    o.set("cohomology_dims", Value::Object(dims));
    let mut slices = Vec::new();
    for w in m.weights() {
        if let Some(s) = m.slice(w) {
            let ax = s.axiom_report()?;
            o.verdict(Status::of(ax.passed()));
            slices.push(to_json(&ax));
        }
    }
    o.set("slice_axioms", Value::Array(slices));
    let v = verdict_of(&pi, wmax)?;
    let dual = pi.dual();
    let dv = verdict_of(&dual, wmax)?;
    o.verdict(Status::of(v.consistent() && dv.consistent() && v.unimodular() == dv.unimodular()));
    o.note(format!("{}: unimodular = {}", pi.display(), v.unimodular()));
    o.note(format!("dual {}: unimodular = {}", dual.display(), dv.unimodular()));
    o.set("unimodularity", to_json(&v));
    o.set("dual", json!({ "bivector": dual.display(), "unimodularity": to_json(&dv) }));
    if v.unimodular() {
        let bv = check_bv(&m, &q(-1), usize::MAX)?;
        o.verdict(Status::of(bv.passed()));
        o.note(format!("BV checks: {} failures", bv.failure_count));
        o.set("bv", to_json(&bv));
    } else {
        o.set("bv", Value::Null);
        o.note("BV checks skipped: not unimodular");
    }
    Ok(o)
}

fn gravity_model(job: &JobSpec) -> Result<Box<dyn CalculusModel>, CliError> {
    if let Some(pi) = bivector(job)? {
        return Ok(Box::new(poisson_model(&pi, job.window.wmax)?));
    }
    match frobenius_model(job)? {
        Some(f) => Ok(Box::new(f)),
        None => Err(semantic("task gravity needs a [poisson] block or `pairing = top`")),
    }
}

fn gravity_block(m: &dyn CalculusModel, job: &JobSpec, o: &mut Outcome, with_table: bool) -> Result<Value, CliError> {
    let g = GravityAlgebra::new(m)?;
    let report = verify_gravity_axioms(&g, job.window.nmax, job.window.arity_check, JacobiSigns::SignedUnshuffle)?;
    o.verdict(Status::of(report.passed()));
    let checked: usize = report.jacobi_checked.values().sum();
    o.note(format!(
        "{}: {} classes, skew {} checked, Jacobi {} checked, {} failures",
        m.label(),
        report.classes,
        report.skew_checked,
        checked,
        report.failure_count
    ));
    let mut v = json!({ "label": m.label(), "axioms": to_json(&report) });
    if job.window.arity_check >= 3 && checked == 0 {
        o.verdict(Status::Window);
        let sufficient = sufficient_weight(job)?;
        o.note(format!("no Jacobi tuple fits in weight window {}; sufficient wmax: {}", job.window.wmax, sufficient.map_or("none".to_string(), |w| w.to_string())));
        v["sufficient_wmax"] = json!(sufficient);
    }
    if with_table {
        v["table"] = to_json(&gravity_table(&g, job.window.nmax)?);
    }
    Ok(v)
}

/// Smallest larger weight window in which some ternary Jacobi tuple can be evaluated.
fn sufficient_weight(job: &JobSpec) -> Result<Option<u32>, CliError> {
    for w in job.window.wmax + 1..=job.window.wmax + 3 {
        let mut wider = job.clone();
        wider.window.wmax = w;
        let m = gravity_model(&wider)?;
        let g = GravityAlgebra::new(m.as_ref())?;
        let r = verify_gravity_axioms(&g, 3, 3, JacobiSigns::SignedUnshuffle)?;
        if r.jacobi_checked.values().sum::<usize>() > 0 {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn gravity(job: &JobSpec) -> Result<Outcome, CliError> {
    let m = gravity_model(job)?;
    let mut o = Outcome::new("gravity");
    let v = gravity_block(m.as_ref(), job, &mut o, true)?;
    o.set("gravity", v);
    Ok(o)
}

fn nonzero(m: BTreeMap<i32, usize>) -> BTreeMap<i32, usize> {
    m.into_iter().filter(|(_, v)| *v > 0).collect()
}

fn koszul(job: &JobSpec) -> Result<Outcome, CliError> {
    let pres = job
        .algebra
        .presentation()
        .ok_or_else(|| semantic("task koszul needs a quadratic algebra"))?;
    let wmax = job.window.wmax;
    let mut o = Outcome::new("koszul");
    let data = koszul_dual_algebra(&pres, wmax + 1)?;
    let verdict = is_koszul(&data)?;
    o.note(format!("Koszul up to weight {} (cutoff {})", verdict.koszul_up_to(), verdict.cutoff));
    o.set("koszul", to_json(&verdict));
    if verdict.first_failure().is_some() {
        return Ok(o);
    }
    let models = small_hochschild_models(&pres, wmax + 1)?;
    let alg = data.source.algebra();
    let mut chains = Vec::new();
    for w in 0..=wmax {
        let small = nonzero(models.homology_dims(w)?);
        let slice = chain_slice(alg, w)?.mixed;
        let bar: BTreeMap<i32, usize> = nonzero(
            slice
                .dims()
                .keys()
                .map(|&d| Ok((d, HomologyPresentation::new(&slice.b(d + 1), &slice.b(d))?.dim())))
                .collect::<Result<_, CliError>>()?,
        );
        o.verdict(Status::of(small == bar));
        chains.push(json!({ "weight": w, "small": small, "bar": bar, "match": small == bar }));
    }
    o.set("chain_dims", Value::Array(chains));
    if data.dual.is_finite() {
        let mut rows = Vec::new();
        for i in 0..=3i32 {
            for w in 0..=wmax as i64 {
                let a = models.cohomology_dims(w - i as i64)?.get(&i).copied().unwrap_or(0);
                let b = bar_cohomology_dim(data.dual.algebra(), i, i as i64 - w, w as usize)?;
                o.verdict(Status::of(a == b));
                rows.push(json!({ "i": i, "weight": w, "algebra": a, "dual": b, "match": a == b }));
            }
        }
        o.set("cohomology_dims", Value::Array(rows));
    }
    let matched = o.status == Status::Pass;
    o.note(format!("small-model and bar dimensions agree: {matched}"));
    if let Some(pi) = bivector(job)? {
        if pi.side() == BaseKind::Polynomial {
            let v = iso_block(&pi, job, &mut o)?;
            o.set("gravity_iso", v);
        }
    }
    Ok(o)
}

fn iso_block(pi: &QuadraticBivector, job: &JobSpec, o: &mut Outcome) -> Result<Value, CliError> {
    let wmax = job.window.wmax;
    let dual = pi.dual();
    let (p, d) = (poisson_model(pi, wmax)?, poisson_model(&dual, wmax)?);
    let id = koszul_poisson_identification(&p, &d)?;
    o.verdict(Status::of(id.report().passed()));
    let iso = induced_iso(&p, &d, |w, e| id.psi(w, e).cloned())?;
    let (g1, g2) = (GravityAlgebra::new(&p)?, GravityAlgebra::new(&d)?);
    let cmp = compare_across_iso(&g1, &g2, &iso, job.window.nmax)?;
    let flipped: BTreeMap<_, _> = iso.iter().map(|(k, m)| (*k, m.scale(&q(-1)))).collect();
    let control = compare_across_iso(&g1, &g2, &flipped, job.window.nmax)?;
    o.verdict(Status::of(cmp.matches() && control.mismatch_count > 0));
    o.note(format!(
        "gravity iso: {} tuples, {} mismatches; sign-flipped control: {} mismatches",
        cmp.checked, cmp.mismatch_count, control.mismatch_count
    ));
    Ok(json!({
        "dual_bivector": dual.display(),
        "identification": to_json(id.report()),
        "comparison": to_json(&cmp),
        "negative_control": to_json(&control),
    }))
}

fn check(job: &JobSpec) -> Result<Outcome, CliError> {
    let wmax = job.window.wmax;
    let mut o = Outcome::new("check");
    let alg = algebra_of(&job.algebra, wmax)?;
    let mut blocks = Vec::new();
    for w in 0..=wmax {
        blocks.push(mixed_block(&chain_slice(&alg, w)?.mixed, None, &mut o)?);
    }
    o.set("hochschild", Value::Array(blocks));
    if job.top_pairing {
        let p = FrobeniusPairing::exterior_top(&alg);
        let fr = check_frobenius_pairing(&alg, &p);
        let defects = eta_coboundary_defects(&alg, &p)?;
        o.verdict(Status::of(fr.passed() && defects.is_empty()));
        o.note(format!("pairing: nondegenerate {}, {} cyclic violations", fr.nondegenerate, fr.cyclic_violations.len()));
        let f = FrobeniusHochschild::new(alg.clone(), p, wmax)?;
        let bv = check_bv(&f, &q(1), usize::MAX)?;
        o.verdict(Status::of(bv.passed()));
        o.note(format!("BV on {}: {} failures", f.label(), bv.failure_count));
        let gr = gravity_block(&f, job, &mut o, false)?;
        o.set(
            "frobenius",
            json!({ "pairing": to_json(&fr), "eta_coboundary_defects": defects, "bv": to_json(&bv), "gravity": gr }),
        );
    }
    if let Some(pi) = bivector(job)? {
        let m = poisson_model(&pi, wmax)?;
        let mut blocks = Vec::new();
        for w in m.weights() {
            if let Some(s) = m.slice(w) {
                blocks.push(mixed_block(s, None, &mut o)?);
            }
        }
        let v = verdict_of(&pi, wmax)?;
        o.verdict(Status::of(v.consistent()));
        let mut entry = json!({ "slices": blocks, "unimodularity": to_json(&v) });
        if v.unimodular() {
            let bv = check_bv(&m, &q(-1), usize::MAX)?;
            o.verdict(Status::of(bv.passed()));
            o.note(format!("BV on {}: {} failures", m.label(), bv.failure_count));
            entry["bv"] = to_json(&bv);
            entry["gravity"] = gravity_block(&m, job, &mut o, false)?;
        }
        o.set("poisson", entry);
    }
    Ok(o)
}
