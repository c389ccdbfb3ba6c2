//! BV structures transported through a chain-level duality onto a mixed complex.
//!
//! A [`CalculusModel`] supplies a cohomology theory with cup product and bracket
//! (Hochschild cochains, polyvector fields), a family of mixed complexes (chains,
//! forms, or their duals) and a chain-level isomorphism `PD` between them. The
//! operator `Delta = PD^{-1} B PD` and all identity checks are computed here.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::sign;
use crate::linalg::{is_zero_vec, unit_vec, HomologyPresentation, LinAlgError, Q};
use crate::mixed::{MixedError, MixedHomology};

/// `(t, s)`: cohomological degree and weight shift of a cohomology piece.
pub type PieceKey = (i32, i64);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CalculusError {
    #[error("result leaves the computed window: {0}")]
    OutOfWindow(String),
    #[error("duality is not an isomorphism: {0}")]
    NotIsomorphism(String),
    #[error("model error: {0}")]
    Model(String),
    #[error(transparent)]
    Mixed(#[from] MixedError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

pub trait CalculusModel: Sync {
    fn label(&self) -> String;
    /// Pieces whose cohomology is available.
    fn pieces(&self) -> Vec<PieceKey>;
    fn cohomology(&self, k: PieceKey) -> Option<&HomologyPresentation>;
    /// Degree used in Koszul signs.
    fn degree(&self, k: PieceKey) -> i32 {
        k.0
    }
    /// Chain-level product; `Ok(None)` when the target piece is outside the window.
    fn cup(&self, a: PieceKey, x: &[Q], b: PieceKey, y: &[Q]) -> Result<Option<(PieceKey, Vec<Q>)>, CalculusError>;
    /// Chain-level bracket of degree `-1`.
    fn bracket(&self, a: PieceKey, x: &[Q], b: PieceKey, y: &[Q]) -> Result<Option<(PieceKey, Vec<Q>)>, CalculusError>;
    /// `(weight, degree)` of the mixed complex piece that `k` maps to.
    fn dual_location(&self, k: PieceKey) -> (i64, i32);
    /// Inverse of [`CalculusModel::dual_location`].
    fn piece_at(&self, w: i64, d: i32) -> PieceKey;
    fn pd(&self, k: PieceKey, x: &[Q]) -> Result<Vec<Q>, CalculusError>;
    fn pd_inverse(&self, w: i64, d: i32, x: &[Q]) -> Result<Vec<Q>, CalculusError>;
    fn mixed(&self, w: i64) -> Option<&MixedHomology>;
    fn weights(&self) -> Vec<i64>;
}

/// A cohomology class in the basis of its piece.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Class {
    pub piece: PieceKey,
    pub coords: Vec<Q>,
}

impl Class {
    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.coords)
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(t={}, s={}) [", self.piece.0, self.piece.1)?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

fn presentation<M: CalculusModel + ?Sized>(m: &M, k: PieceKey) -> Result<&HomologyPresentation, CalculusError> {
    m.cohomology(k)
        .ok_or_else(|| CalculusError::OutOfWindow(format!("piece {k:?}")))
}

/// Basis classes of every piece in the window.
pub fn basis_classes<M: CalculusModel + ?Sized>(m: &M) -> Vec<Class> {
    let mut out = Vec::new();
    for k in m.pieces() {
        if let Some(h) = m.cohomology(k) {
            for i in 0..h.dim() {
                out.push(Class { piece: k, coords: unit_vec(h.dim(), i) });
            }
        }
    }
    out
}

fn reduce_into<M: CalculusModel + ?Sized>(m: &M, k: PieceKey, v: &[Q]) -> Result<Option<Class>, CalculusError> {
    match m.cohomology(k) {
        Some(h) => Ok(Some(Class { piece: k, coords: h.reduce(v)? })),
        None if is_zero_vec(v) => Ok(None),
        None => Err(CalculusError::OutOfWindow(format!("piece {k:?}"))),
    }
}

/// Cup product of classes; `None` outside the window.
pub fn cup_classes<M: CalculusModel + ?Sized>(m: &M, a: &Class, b: &Class) -> Result<Option<Class>, CalculusError> {
    let x = presentation(m, a.piece)?.lift(&a.coords);
    let y = presentation(m, b.piece)?.lift(&b.coords);
    match m.cup(a.piece, &x, b.piece, &y)? {
        Some((k, v)) => reduce_or_none(m, k, &v),
        None => Ok(None),
    }
}

pub fn bracket_classes<M: CalculusModel + ?Sized>(m: &M, a: &Class, b: &Class) -> Result<Option<Class>, CalculusError> {
    let x = presentation(m, a.piece)?.lift(&a.coords);
    let y = presentation(m, b.piece)?.lift(&b.coords);
    match m.bracket(a.piece, &x, b.piece, &y)? {
        Some((k, v)) => reduce_or_none(m, k, &v),
        None => Ok(None),
    }
}

fn reduce_or_none<M: CalculusModel + ?Sized>(m: &M, k: PieceKey, v: &[Q]) -> Result<Option<Class>, CalculusError> {
    match m.cohomology(k) {
        Some(h) => Ok(Some(Class { piece: k, coords: h.reduce(v)? })),
        None => Ok(None),
    }
}

/// `Delta = PD^{-1} B PD` on a cocycle.
pub fn delta_cochain<M: CalculusModel + ?Sized>(m: &M, k: PieceKey, x: &[Q]) -> Result<(PieceKey, Vec<Q>), CalculusError> {
    let (w, d) = m.dual_location(k);
    let mixed = m
        .mixed(w)
        .ok_or_else(|| CalculusError::OutOfWindow(format!("weight {w}")))?;
    let px = m.pd(k, x)?;
    let bx = mixed.slice().big_b(d).mul_vec(&px)?;
    let target = m.piece_at(w, d + 1);
    if is_zero_vec(&bx) {
        let dim = mixed.slice().dim(d + 1);
        return Ok((target, vec![Q::zero(); dim]));
    }
    Ok((target, m.pd_inverse(w, d + 1, &bx)?))
}

pub fn delta_class<M: CalculusModel + ?Sized>(m: &M, a: &Class) -> Result<Option<Class>, CalculusError> {
    let x = presentation(m, a.piece)?.lift(&a.coords);
    let (k, v) = delta_cochain(m, a.piece, &x)?;
    reduce_into(m, k, &v)
}

fn combine(terms: &[(Q, Option<Class>)]) -> Result<Option<Class>, CalculusError> {
    let mut acc: Option<Class> = None;
    for (s, t) in terms {
        let Some(t) = t else { continue };
        match &mut acc {
            None => {
                acc = Some(Class { piece: t.piece, coords: t.coords.iter().map(|c| c * s).collect() });
            }
            Some(a) => {
                if a.piece != t.piece {
                    return Err(CalculusError::Model(format!("inhomogeneous sum {:?} + {:?}", a.piece, t.piece)));
                }
                crate::linalg::add_scaled(&mut a.coords, s, &t.coords);
            }
        }
    }
    Ok(acc)
}

/// Bracket derived from `Delta`:
/// `[a,b] = (-1)^{|a|+1} (Delta(ab) - Delta(a) b - (-1)^{|a|} a Delta(b))`.
pub fn derived_bracket<M: CalculusModel + ?Sized>(m: &M, a: &Class, b: &Class) -> Result<Option<Class>, CalculusError> {
    let da = m.degree(a.piece);
    let Some(ab) = cup_classes(m, a, b)? else { return Ok(None) };
    let d_ab = delta_class(m, &ab)?;
    let d_a_b = match delta_class(m, a)? {
        Some(x) => cup_classes(m, &x, b)?,
        None => None,
    };
    let a_d_b = match delta_class(m, b)? {
        Some(y) => cup_classes(m, a, &y)?,
        None => None,
    };
    let s = sign((da + 1).rem_euclid(2) == 1);
    let res = combine(&[
        (s.clone(), d_ab),
        (-s.clone(), d_a_b),
        (-(s * sign(da.rem_euclid(2) == 1)), a_d_b),
    ])?;
    Ok(res)
}

/// Outcome of the BV axiom checks over a window.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BvReport {
    pub label: String,
    pub classes: usize,
    pub delta_square_checked: usize,
    pub delta_square_failures: Vec<String>,
    pub commutativity_checked: usize,
    pub commutativity_failures: Vec<String>,
    pub seven_term_checked: usize,
    pub seven_term_failures: Vec<String>,
    pub bracket_checked: usize,
    pub bracket_failures: Vec<String>,
    pub skipped_out_of_window: usize,
    /// Total failures; the lists above keep only the first few examples.
    pub failure_count: usize,
}

const MAX_EXAMPLES: usize = 8;

fn record(list: &mut Vec<String>, count: &mut usize, what: impl FnOnce() -> String) {
    *count += 1;
    if list.len() < MAX_EXAMPLES {
        list.push(what());
    }
}

impl BvReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

fn same(a: &Option<Class>, b: &Option<Class>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x == y,
        (Some(x), None) | (None, Some(x)) => x.is_zero(),
        (None, None) => true,
    }
}

fn cup3<M: CalculusModel + ?Sized>(m: &M, a: &Class, b: &Class, c: &Class) -> Result<Option<Class>, CalculusError> {
    match cup_classes(m, a, b)? {
        Some(ab) => cup_classes(m, &ab, c),
        None => Ok(None),
    }
}

fn delta_opt<M: CalculusModel + ?Sized>(m: &M, a: Option<Class>) -> Result<Option<Class>, CalculusError> {
    match a {
        Some(a) => delta_class(m, &a),
        None => Ok(None),
    }
}

fn cup_opt<M: CalculusModel + ?Sized>(m: &M, a: &Option<Class>, b: &Option<Class>) -> Result<Option<Class>, CalculusError> {
    match (a, b) {
        (Some(a), Some(b)) => cup_classes(m, a, b),
        _ => Ok(None),
    }
}

/// Right-hand side minus left-hand side of the seven-term identity
/// `Delta(abc) = Delta(ab)c + (-1)^{|a|} a Delta(bc) + (-1)^{(|a|-1)|b|} b Delta(ac)
///   - Delta(a)bc - (-1)^{|a|} a Delta(b) c - (-1)^{|a|+|b|} ab Delta(c)`.
pub fn seven_term_defect<M: CalculusModel + ?Sized>(m: &M, a: &Class, b: &Class, c: &Class) -> Result<Option<Class>, CalculusError> {
    let (da, db) = (m.degree(a.piece), m.degree(b.piece));
    let sa = sign(da.rem_euclid(2) == 1);
    let sab = sign((da + db).rem_euclid(2) == 1);
    let sba = sign(((da - 1) * db).rem_euclid(2) == 1);
    let (oa, ob, oc) = (Some(a.clone()), Some(b.clone()), Some(c.clone()));
    let lhs = delta_opt(m, cup3(m, a, b, c)?)?;
    let t1 = cup_opt(m, &delta_opt(m, cup_classes(m, a, b)?)?, &oc)?;
    let t2 = cup_opt(m, &oa, &delta_opt(m, cup_classes(m, b, c)?)?)?;
    let t3 = cup_opt(m, &ob, &delta_opt(m, cup_classes(m, a, c)?)?)?;
    let t4 = match delta_class(m, a)? {
        Some(x) => cup3(m, &x, b, c)?,
        None => None,
    };
    let t5 = match delta_class(m, b)? {
        Some(y) => cup3(m, a, &y, c)?,
        None => None,
    };
    let t6 = cup_opt(m, &cup_classes(m, a, b)?, &delta_class(m, c)?)?;
    let one = Q::from_integer(1.into());
    combine(&[
        (-one.clone(), lhs),
        (one.clone(), t1),
        (sa.clone(), t2),
        (sba, t3),
        (-one, t4),
        (-sa, t5),
        (-sab, t6),
    ])
}

fn class_or_zero(c: &Option<Class>) -> bool {
    c.as_ref().is_none_or(Class::is_zero)
}

/// Checks `Delta^2 = 0`, graded commutativity, the seven-term identity on all
/// triples with `max_triples` as a cap, and that the derived bracket equals
/// `sign` times the native one.
pub fn check_bv<M: CalculusModel + ?Sized>(m: &M, bracket_sign: &Q, max_triples: usize) -> Result<BvReport, CalculusError> {
    let classes = basis_classes(m);
    let mut rep = BvReport { label: m.label(), classes: classes.len(), ..Default::default() };
    for a in &classes {
        let dd = delta_opt(m, delta_class(m, a)?)?;
        rep.delta_square_checked += 1;
        if !class_or_zero(&dd) {
            record(&mut rep.delta_square_failures, &mut rep.failure_count, || format!("{a}"));
        }
    }
    for a in &classes {
        for b in &classes {
            let ab = cup_classes(m, a, b)?;
            let ba = cup_classes(m, b, a)?;
            if ab.is_none() {
                rep.skipped_out_of_window += 1;
                continue;
            }
            let s = sign((m.degree(a.piece) * m.degree(b.piece)).rem_euclid(2) == 1);
            let ba_signed = ba.map(|c| Class { piece: c.piece, coords: c.coords.iter().map(|x| x * &s).collect() });
            rep.commutativity_checked += 1;
            if !same(&ab, &ba_signed) {
                record(&mut rep.commutativity_failures, &mut rep.failure_count, || format!("{a} * {b}"));
            }
            let derived = derived_bracket(m, a, b)?;
            let native = bracket_classes(m, a, b)?
                .map(|c| Class { piece: c.piece, coords: c.coords.iter().map(|x| x * bracket_sign).collect() });
            rep.bracket_checked += 1;
            if !same(&derived, &native) {
                record(&mut rep.bracket_failures, &mut rep.failure_count, || format!("[{a}, {b}]"));
            }
        }
    }
    let mut count = 0;
    'outer: for a in &classes {
        for b in &classes {
            for c in &classes {
                if count >= max_triples {
                    break 'outer;
                }
                let in_window = cup3(m, a, b, c)?.is_some()
                    && cup_classes(m, b, c)?.is_some()
                    && cup_classes(m, a, c)?.is_some();
                if !in_window {
                    rep.skipped_out_of_window += 1;
                    continue;
                }
                count += 1;
                let defect = seven_term_defect(m, a, b, c)?;
                rep.seven_term_checked += 1;
                if !class_or_zero(&defect) {
                    record(&mut rep.seven_term_failures, &mut rep.failure_count, || format!("{a}, {b}, {c}"));
                }
            }
        }
    }
    Ok(rep)
}

/// Products of basis classes as a table `(i, j) -> coords`, for reporting.
pub fn product_table<M: CalculusModel + ?Sized>(m: &M) -> Result<BTreeMap<(usize, usize), Class>, CalculusError> {
    let classes = basis_classes(m);
    let mut out = BTreeMap::new();
    for (i, a) in classes.iter().enumerate() {
        for (j, b) in classes.iter().enumerate() {
            if let Some(c) = cup_classes(m, a, b)? {
                out.insert((i, j), c);
            }
        }
    }
    Ok(out)
}
