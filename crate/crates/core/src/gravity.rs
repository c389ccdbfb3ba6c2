//! Gravity brackets on negative cyclic homology,
//! `{x1..xn} = (-1)^{Σ (n-i)|x_i|} β(π_*(x1) • ... • π_*(xn))`,
//! where `•` is the product transported from the calculus through `PD`.
//!
//! Degrees `|x|` are the cohomological degrees of the calculus (so `•` has degree 0);
//! a class in mixed degree `d` of weight `w` has degree `t` with `(t, s) = piece_at(w, d)`.

use std::collections::BTreeMap;

use num::Zero;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::sign;
use crate::calculus::{CalculusError, CalculusModel, PieceKey};
use crate::linalg::{add_scaled, is_zero_vec, unit_vec, LinAlgError, Matrix, Q};
use crate::mixed::{induced_negative_cyclic_map, MixedError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GravityError {
    #[error("product leaves the computed window at {0}")]
    Window(String),
    #[error("isomorphism is not invertible on block {0:?}")]
    NotInvertible(HcKey),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Mixed(#[from] MixedError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// `(weight, mixed degree)` of a block of `HC^-`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct HcKey {
    pub weight: i64,
    pub degree: i32,
}

/// A homogeneous element of `HC^-` in the coordinates of its block.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HcElement {
    pub key: HcKey,
    pub coords: Vec<Q>,
}

impl HcElement {
    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.coords)
    }

    pub fn scale(&self, s: &Q) -> HcElement {
        HcElement { key: self.key, coords: self.coords.iter().map(|c| c * s).collect() }
    }
}

/// A cochain in the piece named by its key.
pub type Cochain = (PieceKey, Vec<Q>);

/// A basis element of the gravity table: a block and a vector in it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableClass {
    pub key: HcKey,
    /// Gravity degree.
    pub degree: i32,
    /// Coordinates in the block.
    pub coords: Vec<String>,
    /// `π_*` of this class is nonzero.
    pub live: bool,
}

/// Brackets on `HC^-` of the mixed complexes of a calculus.
pub struct GravityAlgebra<'a, M: CalculusModel + ?Sized> {
    model: &'a M,
    /// Basis of each block: first a complement of `ker π_*`, then a basis of `ker π_*`.
    basis: Vec<(HcElement, bool)>,
    /// `PD^{-1} π_*` of each live basis element, at cochain level.
    cochains: BTreeMap<usize, Cochain>,
}

impl<'a, M: CalculusModel + ?Sized> GravityAlgebra<'a, M> {
    pub fn new(model: &'a M) -> Result<Self, GravityError> {
        let mut basis = Vec::new();
        for w in model.weights() {
            let mh = model.mixed(w).expect("listed weight");
            for d in mh.nc_degrees() {
                let n = mh.nc_dim(d);
                if n == 0 {
                    continue;
                }
                let key = HcKey { weight: w, degree: d };
                let pi = mh.pi_star_matrix(d)?;
                // Complement of the kernel: unit vectors at pivot columns of π_*.
                for c in pi.independent_columns() {
                    basis.push((HcElement { key, coords: unit_vec(n, c) }, true));
                }
                for v in pi.kernel_basis() {
                    basis.push((HcElement { key, coords: v }, false));
                }
            }
        }
        let mut me = GravityAlgebra { model, basis, cochains: BTreeMap::new() };
        for i in 0..me.basis.len() {
            if me.basis[i].1 {
                let c = me.cochain_of(&me.basis[i].0.clone())?;
                me.cochains.insert(i, c);
            }
        }
        Ok(me)
    }

    pub fn model(&self) -> &M {
        self.model
    }

    pub fn basis(&self) -> Vec<HcElement> {
        self.basis.iter().map(|(e, _)| e.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Indices of basis elements with nonzero `π_*`.
    pub fn live(&self) -> Vec<usize> {
        (0..self.basis.len()).filter(|&i| self.basis[i].1).collect()
    }

    pub fn element(&self, i: usize) -> &HcElement {
        &self.basis[i].0
    }

    /// Gravity degree of a block.
    pub fn degree(&self, key: HcKey) -> i32 {
        self.model.degree(self.model.piece_at(key.weight, key.degree))
    }

    pub fn block_dim(&self, key: HcKey) -> usize {
        self.model.mixed(key.weight).map_or(0, |m| m.nc_dim(key.degree))
    }

    pub fn table_classes(&self) -> Vec<TableClass> {
        self.basis
            .iter()
            .map(|(e, live)| TableClass {
                key: e.key,
                degree: self.degree(e.key),
                coords: e.coords.iter().map(|c| c.to_string()).collect(),
                live: *live,
            })
            .collect()
    }

    fn cochain_of(&self, x: &HcElement) -> Result<Cochain, GravityError> {
        let mh = self.model.mixed(x.key.weight).ok_or_else(|| GravityError::Window(format!("{:?}", x.key)))?;
        let hh = mh.pi_star(x.key.degree, &x.coords)?;
        let k = self.model.piece_at(x.key.weight, x.key.degree);
        let h = mh
            .hh(x.key.degree)
            .ok_or_else(|| GravityError::Window(format!("HH at {:?}", x.key)))?;
        let chain = h.lift(&hh);
        Ok((k, self.model.pd_inverse(x.key.weight, x.key.degree, &chain)?))
    }

    /// Block of the bracket of elements in the given blocks.
    pub fn target(&self, keys: &[HcKey]) -> HcKey {
        let mut t = 0;
        let mut s = 0;
        for k in keys {
            let p = self.model.piece_at(k.weight, k.degree);
            t += p.0;
            s += p.1;
        }
        let (w, d) = self.model.dual_location((t, s));
        HcKey { weight: w, degree: d + 1 }
    }

    fn sign_prefix(&self, keys: &[HcKey]) -> Q {
        let n = keys.len() as i32;
        let e: i32 = keys.iter().enumerate().map(|(i, k)| (n - 1 - i as i32) * self.degree(*k)).sum();
        sign(e.rem_euclid(2) == 1)
    }

    /// The block exists in the computed window.
    pub fn in_window(&self, key: HcKey) -> bool {
        self.model.mixed(key.weight).is_some_and(|m| m.nc(key.degree).is_some())
    }

    fn zero_at(&self, key: HcKey) -> HcElement {
        HcElement { key, coords: vec![Q::zero(); self.block_dim(key)] }
    }

    /// `β(c1 • ... • cn)` for cochains, or `None` if a nonzero product leaves the window.
    fn beta_of_product(&self, parts: &[&Cochain], target: HcKey) -> Result<Option<HcElement>, GravityError> {
        let mut acc = parts[0].clone();
        for p in &parts[1..] {
            if is_zero_vec(&acc.1) || is_zero_vec(&p.1) {
                return Ok(Some(self.zero_at(target)));
            }
            match self.model.cup(acc.0, &acc.1, p.0, &p.1)? {
                Some(next) => acc = next,
                None => return Ok(None),
            }
        }
        if is_zero_vec(&acc.1) {
            return Ok(Some(self.zero_at(target)));
        }
        let (w, d) = self.model.dual_location(acc.0);
        let Some(mh) = self.model.mixed(w) else { return Ok(None) };
        let chain = self.model.pd(acc.0, &acc.1)?;
        let Some(h) = mh.hh(d) else { return Ok(None) };
        let class = h.reduce(&chain)?;
        if mh.nc(d + 1).is_none() {
            return Ok(None);
        }
        let out = mh.beta(d, &class)?;
        Ok(Some(HcElement { key: HcKey { weight: w, degree: d + 1 }, coords: out }))
    }

    /// `PD^{-1} π_*(x)` at cochain level, `None` when `π_*(x) = 0`.
    pub fn prepare(&self, x: &HcElement) -> Result<Option<Cochain>, GravityError> {
        if x.is_zero() {
            return Ok(None);
        }
        let c = self.cochain_of(x)?;
        Ok(if is_zero_vec(&c.1) { None } else { Some(c) })
    }

    /// The bracket of elements in blocks `keys` given by prepared cochains.
    pub fn bracket_prepared(&self, keys: &[HcKey], parts: &[Option<&Cochain>]) -> Result<Option<HcElement>, GravityError> {
        let target = self.target(keys);
        if !self.in_window(target) {
            return Ok(None);
        }
        let Some(parts) = parts.iter().copied().collect::<Option<Vec<&Cochain>>>() else {
            return Ok(Some(self.zero_at(target)));
        };
        let s = self.sign_prefix(keys);
        Ok(self.beta_of_product(&parts, target)?.map(|e| e.scale(&s)))
    }

    /// `{x1, ..., xn}` for arbitrary homogeneous elements; `Ok(None)` when the product leaves the window.
    pub fn bracket(&self, xs: &[HcElement]) -> Result<Option<HcElement>, GravityError> {
        let keys: Vec<HcKey> = xs.iter().map(|x| x.key).collect();
        if !self.in_window(self.target(&keys)) {
            return Ok(None);
        }
        let parts = xs.iter().map(|x| self.prepare(x)).collect::<Result<Vec<_>, _>>()?;
        let refs: Vec<Option<&Cochain>> = parts.iter().map(Option::as_ref).collect();
        self.bracket_prepared(&keys, &refs)
    }

    /// `{x_{i1}, ..., x_{in}}` on basis indices, using cached cochains.
    pub fn bracket_basis(&self, idx: &[usize]) -> Result<Option<HcElement>, GravityError> {
        let keys: Vec<HcKey> = idx.iter().map(|&i| self.basis[i].0.key).collect();
        let refs: Vec<Option<&Cochain>> = idx.iter().map(|i| self.cochains.get(i)).collect();
        self.bracket_prepared(&keys, &refs)
    }
}

/// Shifted degree `|x| + 1` used in the skew-symmetry and Jacobi signs.
fn shifted(g: &GravityAlgebra<'_, impl CalculusModel + ?Sized>, k: HcKey) -> i32 {
    g.degree(k) + 1
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GravityReport {
    pub label: String,
    pub signs: Option<JacobiSigns>,
    pub classes: usize,
    pub live_classes: usize,
    pub skew_checked: usize,
    pub skew_failures: Vec<String>,
    pub jacobi_checked: BTreeMap<String, usize>,
    pub jacobi_failures: Vec<String>,
    pub binary_jacobi_checked: usize,
    pub binary_jacobi_failures: usize,
    pub kernel_checked: usize,
    pub kernel_failures: usize,
    pub skipped_out_of_window: usize,
    pub nonzero_brackets: BTreeMap<usize, usize>,
    /// Some bracket of arity at least 3 is nonzero.
    pub higher_nontrivial: bool,
    pub failure_count: usize,
}

impl GravityReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

const MAX_EXAMPLES: usize = 8;

fn note(list: &mut Vec<String>, count: &mut usize, what: impl FnOnce() -> String) {
    *count += 1;
    if list.len() < MAX_EXAMPLES {
        list.push(what());
    }
}

/// Adds `s * x` into an accumulator for the block of `x`.
fn accumulate(acc: &mut Option<HcElement>, s: &Q, x: &HcElement) -> Result<(), String> {
    match acc {
        None => *acc = Some(x.scale(s)),
        Some(a) => {
            if a.key != x.key {
                if x.is_zero() {
                    return Ok(());
                }
                if a.is_zero() {
                    *acc = Some(x.scale(s));
                    return Ok(());
                }
                return Err(format!("inhomogeneous sum {:?} + {:?}", a.key, x.key));
            }
            add_scaled(&mut a.coords, s, &x.coords);
        }
    }
    Ok(())
}

/// Tuples checked, tuples skipped, failure messages, whether the bracket was nonzero.
type TupleRun = (usize, usize, Vec<String>, bool);

fn tuples(base: &[usize], len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                base.iter().map(move |&i| {
                    let mut v = t.clone();
                    v.push(i);
                    v
                })
            })
            .collect();
    }
    out
}

/// Sign conventions for the generalized Jacobi identity
/// `Σ_{i<j} ± {{x_i, x_j}, x_1..x̂_i..x̂_j..x_n, y..} = ± {{x_1..x_n}, y..}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum JacobiSigns {
    /// Koszul sign `ε_ij` in shifted degrees `|x| + 1` only, with `+` on the right.
    KoszulOnly,
    /// `ε_ij` times the sign `(-1)^{i+j+1}` of the unshuffle bringing `x_i, x_j` to the front,
    /// with `(-1)^n` on the right.
    SignedUnshuffle,
}

impl JacobiSigns {
    fn unshuffle(self, i: usize, j: usize) -> i32 {
        match self {
            JacobiSigns::KoszulOnly => 0,
            JacobiSigns::SignedUnshuffle => (i + j + 1) as i32,
        }
    }

    fn rhs(self, n: usize) -> Q {
        match self {
            JacobiSigns::KoszulOnly => Q::from_integer(1.into()),
            JacobiSigns::SignedUnshuffle => sign(n % 2 == 1),
        }
    }
}

/// A bracket with its prepared cochain, or `None` outside the window.
type Prepared = Option<(HcElement, Option<Cochain>)>;

struct JacobiContext<'g, 'a, M: CalculusModel + ?Sized> {
    g: &'g GravityAlgebra<'a, M>,
    signs: JacobiSigns,
    pairs: BTreeMap<(usize, usize), Prepared>,
}

#[derive(Default)]
struct Tally {
    checked: usize,
    skipped: usize,
    failures: Vec<String>,
    failure_count: usize,
}

impl<M: CalculusModel + ?Sized + Sync> JacobiContext<'_, '_, M> {
    fn prepared(&self, b: Option<HcElement>) -> Result<Prepared, GravityError> {
        Ok(match b {
            Some(b) => {
                let c = self.g.prepare(&b)?;
                Some((b, c))
            }
            None => None,
        })
    }

    /// All instances with `x = xs` and `y` ranging over live `m`-tuples.
    fn run(&self, xs: &[usize], ys_all: &[Vec<usize>]) -> Result<Tally, GravityError> {
        let g = self.g;
        let n = xs.len();
        let mut tally = Tally::default();
        let xkeys: Vec<HcKey> = xs.iter().map(|&i| g.element(i).key).collect();
        let top = g.target(&xkeys);
        if !g.in_window(top) {
            tally.skipped = ys_all.len();
            return Ok(tally);
        }
        let sh: Vec<i32> = xkeys.iter().map(|&k| shifted(g, k)).collect();
        let mut terms = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let Some(Some(pair)) = self.pairs.get(&(xs[i], xs[j])) else {
                    tally.skipped = ys_all.len();
                    return Ok(tally);
                };
                let before_i: i32 = sh[..i].iter().sum();
                let before_j: i32 = sh[..j].iter().sum();
                let eps = sh[i] * before_i + sh[j] * before_j - sh[i] * sh[j] + self.signs.unshuffle(i, j);
                let rest: Vec<usize> = (0..n).filter(|&k| k != i && k != j).map(|k| xs[k]).collect();
                terms.push((sign(eps.rem_euclid(2) == 1), pair, rest));
            }
        }
        let whole = if ys_all.first().is_some_and(|y| !y.is_empty()) {
            let b = g.bracket_basis(xs)?;
            match self.prepared(b)? {
                Some(p) => Some(p),
                None => {
                    tally.skipped = ys_all.len();
                    return Ok(tally);
                }
            }
        } else {
            None
        };
        'instances: for ys in ys_all {
            if let Some((b, _)) = &whole {
                let mut keys = vec![b.key];
                keys.extend(ys.iter().map(|&i| g.element(i).key));
                if !g.in_window(g.target(&keys)) {
                    tally.skipped += 1;
                    continue;
                }
            }
            let mut lhs: Option<HcElement> = None;
            for (s, (inner, cochain), rest) in &terms {
                let term = if rest.is_empty() && ys.is_empty() {
                    inner.clone()
                } else {
                    let mut keys = vec![inner.key];
                    let mut parts = vec![cochain.as_ref()];
                    for &k in rest.iter().chain(ys) {
                        keys.push(g.element(k).key);
                        parts.push(g.cochains.get(&k));
                    }
                    match g.bracket_prepared(&keys, &parts)? {
                        Some(t) => t,
                        None => {
                            tally.skipped += 1;
                            continue 'instances;
                        }
                    }
                };
                accumulate(&mut lhs, s, &term).map_err(GravityError::Window)?;
            }
            let lhs = lhs.expect("n >= 2");
            let ok = match &whole {
                None => lhs.is_zero(),
                Some((b, cochain)) => {
                    let mut keys = vec![b.key];
                    let mut parts = vec![cochain.as_ref()];
                    for &k in ys {
                        keys.push(g.element(k).key);
                        parts.push(g.cochains.get(&k));
                    }
                    let Some(rhs) = g.bracket_prepared(&keys, &parts)? else {
                        tally.skipped += 1;
                        continue;
                    };
                    let mut diff = Some(lhs);
                    accumulate(&mut diff, &-self.signs.rhs(n), &rhs).map_err(GravityError::Window)?;
                    diff.is_none_or(|d| d.is_zero())
                }
            };
            tally.checked += 1;
            if !ok {
                note(&mut tally.failures, &mut tally.failure_count, || format!("x = {xs:?}, y = {ys:?}"));
            }
        }
        Ok(tally)
    }
}

/// Checks skew-symmetry for arities `2..=n_max` and the generalized Jacobi identity
/// for all `n >= 2`, `m >= 0` with `n + m <= check_max`, on live basis tuples.
/// Brackets with a factor in `ker π_*` vanish by construction; that is checked separately.
pub fn verify_gravity_axioms<M: CalculusModel + ?Sized + Sync>(
    g: &GravityAlgebra<'_, M>,
    n_max: usize,
    check_max: usize,
    signs: JacobiSigns,
) -> Result<GravityReport, GravityError> {
    let live = g.live();
    let mut rep = GravityReport {
        label: g.model().label(),
        signs: Some(signs),
        classes: g.len(),
        live_classes: live.len(),
        ..Default::default()
    };
    for i in 0..g.len() {
        if live.contains(&i) {
            continue;
        }
        for &j in &live {
            rep.kernel_checked += 1;
            match g.bracket(&[g.element(i).clone(), g.element(j).clone()])? {
                Some(x) if !x.is_zero() => rep.kernel_failures += 1,
                _ => {}
            }
        }
    }
    rep.failure_count += rep.kernel_failures;
    for n in 2..=n_max {
        let all = tuples(&live, n);
        let results: Vec<Result<TupleRun, GravityError>> = all
            .par_iter()
            .map(|t| {
                let Some(b) = g.bracket_basis(t)? else { return Ok((0, 1, Vec::new(), false)) };
                let nonzero = !b.is_zero();
                let mut fails = Vec::new();
                let mut checked = 0;
                for p in 0..n - 1 {
                    let mut u = t.clone();
                    u.swap(p, p + 1);
                    let Some(c) = g.bracket_basis(&u)? else { continue };
                    let e = shifted(g, g.element(t[p]).key) * shifted(g, g.element(t[p + 1]).key);
                    let mut sum = Some(b.clone());
                    accumulate(&mut sum, &sign(e.rem_euclid(2) == 1), &c).map_err(GravityError::Window)?;
                    checked += 1;
                    if !sum.is_none_or(|s| s.is_zero()) {
                        fails.push(format!("{t:?} at {p}"));
                    }
                }
                Ok((checked, 0, fails, nonzero))
            })
            .collect();
        for r in results {
            let (checked, skipped, fails, nonzero) = r?;
            rep.skew_checked += checked;
            rep.skipped_out_of_window += skipped;
            for f in fails {
                note(&mut rep.skew_failures, &mut rep.failure_count, || f);
            }
            if nonzero {
                *rep.nonzero_brackets.entry(n).or_default() += 1;
                if n >= 3 {
                    rep.higher_nontrivial = true;
                }
            }
        }
    }
    let pair_list = tuples(&live, 2);
    let prepared: Vec<Result<Prepared, GravityError>> = pair_list
        .par_iter()
        .map(|t| {
            Ok(match g.bracket_basis(t)? {
                Some(b) => {
                    let c = g.prepare(&b)?;
                    Some((b, c))
                }
                None => None,
            })
        })
        .collect();
    let mut pairs = BTreeMap::new();
    for (t, p) in pair_list.iter().zip(prepared) {
        pairs.insert((t[0], t[1]), p?);
    }
    let ctx = JacobiContext { g, signs, pairs };
    for total in 3..=check_max {
        for n in 2..=total {
            let m = total - n;
            if n == 2 && m == 0 {
                continue;
            }
            let ys_all = tuples(&live, m);
            let results: Vec<Result<Tally, GravityError>> =
                tuples(&live, n).par_iter().map(|xs| ctx.run(xs, &ys_all)).collect();
            let key = format!("n={n},m={m}");
            for r in results {
                let t = r?;
                *rep.jacobi_checked.entry(key.clone()).or_default() += t.checked;
                rep.skipped_out_of_window += t.skipped;
                if n == 3 && m == 0 {
                    rep.binary_jacobi_checked += t.checked;
                    rep.binary_jacobi_failures += t.failure_count;
                }
                rep.failure_count += t.failure_count;
                for f in t.failures {
                    if rep.jacobi_failures.len() < MAX_EXAMPLES {
                        rep.jacobi_failures.push(f);
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// Full bracket tables for arities `2..=n_max` on live basis tuples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GravityTable {
    pub label: String,
    pub classes: Vec<TableClass>,
    /// `(arity, tuple) -> (target block, coordinates)`; zero entries are omitted.
    pub entries: BTreeMap<usize, BTreeMap<String, (HcKey, Vec<String>)>>,
    pub skipped_out_of_window: usize,
}

pub fn gravity_table<M: CalculusModel + ?Sized>(g: &GravityAlgebra<'_, M>, n_max: usize) -> Result<GravityTable, GravityError> {
    let live = g.live();
    let mut entries = BTreeMap::new();
    let mut skipped = 0;
    for n in 2..=n_max {
        let all = tuples(&live, n);
        let results: Vec<Result<Option<HcElement>, GravityError>> = all.par_iter().map(|t| g.bracket_basis(t)).collect();
        let mut table = BTreeMap::new();
        for (t, r) in all.iter().zip(results) {
            match r? {
                Some(b) if !b.is_zero() => {
                    let name = t.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
                    table.insert(name, (b.key, b.coords.iter().map(|c| c.to_string()).collect()));
                }
                Some(_) => {}
                None => skipped += 1,
            }
        }
        entries.insert(n, table);
    }
    Ok(GravityTable { label: g.model().label(), classes: g.table_classes(), entries, skipped_out_of_window: skipped })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub checked: usize,
    pub mismatches: Vec<String>,
    pub mismatch_count: usize,
    pub skipped_out_of_window: usize,
}

impl ComparisonReport {
    pub fn matches(&self) -> bool {
        self.mismatch_count == 0
    }
}

/// Checks `iso({x1..xn}) = {iso x1, ..., iso xn}` for all live tuples of arity `2..=n_max`,
/// where `iso` is given blockwise on `HC^-` coordinates and preserves blocks.
pub fn compare_across_iso<M1, M2>(
    g1: &GravityAlgebra<'_, M1>,
    g2: &GravityAlgebra<'_, M2>,
    iso: &BTreeMap<HcKey, Matrix>,
    n_max: usize,
) -> Result<ComparisonReport, GravityError>
where
    M1: CalculusModel + ?Sized,
    M2: CalculusModel + ?Sized,
{
    for (k, m) in iso {
        if m.rows() != m.cols() || m.inverse().is_none() {
            return Err(GravityError::NotInvertible(*k));
        }
    }
    let apply = |x: &HcElement| -> Result<HcElement, GravityError> {
        if x.is_zero() {
            return Ok(g2.zero_at(x.key));
        }
        let m = iso.get(&x.key).ok_or_else(|| GravityError::Window(format!("iso at {:?}", x.key)))?;
        Ok(HcElement { key: x.key, coords: m.mul_vec(&x.coords)? })
    };
    let live = g1.live();
    let mut rep = ComparisonReport::default();
    for n in 2..=n_max {
        let all = tuples(&live, n);
        let results: Vec<Result<Option<bool>, GravityError>> = all
            .par_iter()
            .map(|t| {
                let Some(b) = g1.bracket_basis(t)? else { return Ok(None) };
                let lhs = apply(&b)?;
                let images = t.iter().map(|&i| apply(g1.element(i))).collect::<Result<Vec<_>, _>>()?;
                let Some(rhs) = g2.bracket(&images)? else { return Ok(None) };
                let mut diff = Some(lhs);
                accumulate(&mut diff, &Q::from_integer((-1).into()), &rhs).map_err(GravityError::Window)?;
                Ok(Some(diff.is_none_or(|d| d.is_zero())))
            })
            .collect();
        for (t, r) in all.iter().zip(results) {
            match r? {
                Some(true) => rep.checked += 1,
                Some(false) => {
                    rep.checked += 1;
                    note(&mut rep.mismatches, &mut rep.mismatch_count, || format!("{t:?}"));
                }
                None => rep.skipped_out_of_window += 1,
            }
        }
    }
    Ok(rep)
}

/// Blockwise map on `HC^-` induced by maps of mixed complexes `blocks(w, d)` preserving weight and degree.
pub fn induced_iso<M1, M2, F>(src: &M1, dst: &M2, mut blocks: F) -> Result<BTreeMap<HcKey, Matrix>, GravityError>
where
    M1: CalculusModel + ?Sized,
    M2: CalculusModel + ?Sized,
    F: FnMut(i64, i32) -> Option<Matrix>,
{
    let mut out = BTreeMap::new();
    for w in src.weights() {
        let (Some(a), Some(b)) = (src.mixed(w), dst.mixed(w)) else { continue };
        for d in a.nc_degrees() {
            if a.nc_dim(d) == 0 && b.nc_dim(d) == 0 {
                continue;
            }
            let m = induced_negative_cyclic_map(a, b, d, |e| blocks(w, e))?;
            out.insert(HcKey { weight: w, degree: d }, m);
        }
    }
    Ok(out)
}
