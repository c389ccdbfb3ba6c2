//! Unimodularity of `k[x1..xn]` against a volume form and of `Λ(ξ1..ξn)` against
//! a volume functional.
//!
//! On `k[x]` the diagram reads `∂(ι_P η) = (-1)^{t+1} ι_{δP} η` for `P` of degree `t`;
//! on `Λ(ξ)` it reads `η^!(ι_{δP} ω) = η^!(ι_P ∂ω)`.

use num::Zero;
use serde::Serialize;

use super::{divergence, form_piece, piece_basis, BaseKind, Mono, PoissonBase, PoissonError, SuperPoly};
use crate::algebra::sign;
use crate::linalg::{IndexedBasis, Matrix, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnimodularityVerdict {
    pub side: BaseKind,
    /// The duality square commutes on every basis polyvector in the window.
    pub diagram_commutes: bool,
    /// `∂η = 0`, respectively `η^! ∘ ∂^! = 0`.
    pub volume_is_cycle: bool,
    /// Zero divergence, computed on the polynomial side only.
    pub divergence_free: Option<bool>,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl UnimodularityVerdict {
    pub fn unimodular(&self) -> bool {
        self.diagram_commutes && self.volume_is_cycle
    }

    /// All available criteria agree.
    pub fn consistent(&self) -> bool {
        self.diagram_commutes == self.volume_is_cycle && self.divergence_free.is_none_or(|d| d == self.volume_is_cycle)
    }
}

const MAX_FAILURES: usize = 8;

/// Piece keys `(t, s)` whose forms have weight at most `max_weight`.
fn window(base: &PoissonBase, max_weight: u32) -> Vec<(i32, i64)> {
    let n = base.n() as i64;
    let mut out = Vec::new();
    for w in 0..=max_weight as i64 {
        for t in 0..=n as i32 {
            let s = match base.kind() {
                BaseKind::Polynomial => w - n,
                BaseKind::Exterior => n - w,
            };
            out.push((t, s));
        }
    }
    out
}

fn check_volume<F>(base: &PoissonBase, max_weight: u32, mut pairing: F) -> Result<(), PoissonError>
where
    F: FnMut(&IndexedBasis<Mono>, (i32, i64)) -> Option<Matrix>,
{
    for k in window(base, max_weight) {
        let basis = piece_basis(base, k.0, k.1);
        if basis.is_empty() {
            continue;
        }
        if let Some(m) = pairing(&basis, k) {
            if m.rows() != m.cols() || m.inverse().is_none() {
                return Err(PoissonError::NotVolume(format!("piece {k:?}")));
            }
        }
    }
    Ok(())
}

/// Checks the volume-form diagram for `π` on `k[x1..xn]`, and compares with `∂η = 0`
/// and with the divergence of `π`.
pub fn unimodularity_check(
    base: &PoissonBase,
    pi: &SuperPoly,
    eta: &SuperPoly,
    max_weight: u32,
) -> Result<UnimodularityVerdict, PoissonError> {
    if base.kind() != BaseKind::Polynomial {
        return Err(PoissonError::Malformed("unimodularity_check expects a polynomial base".into()));
    }
    let n = base.n() as u32;
    if eta.is_zero() || eta.keys().any(|m| base.form_degree(m) != n || base.coordinate_degree(m) != 0) {
        return Err(PoissonError::NotVolume(base.display_form(eta)));
    }
    check_volume(base, max_weight, |basis, k| {
        let w = k.1 + n as i64;
        let forms = form_piece(base, w, n as i64 - k.0 as i64);
        Some(basis.matrix_of(&forms, |m| base.contract(&SuperPoly::basis(m.clone()), eta)))
    })?;
    let mut failures = Vec::new();
    let mut checked = 0;
    for k in window(base, max_weight) {
        let s = sign((k.0 + 1) % 2 == 1);
        for m in piece_basis(base, k.0, k.1).keys() {
            let p = SuperPoly::basis(m.clone());
            let lhs = base.poisson_boundary(pi, &base.contract(&p, eta));
            let rhs = base.contract(&base.poisson_coboundary(pi, &p), eta).scale(&s);
            checked += 1;
            if lhs != rhs && failures.len() < MAX_FAILURES {
                failures.push(base.display_vector(&p));
            }
        }
    }
    Ok(UnimodularityVerdict {
        side: BaseKind::Polynomial,
        diagram_commutes: failures.is_empty(),
        volume_is_cycle: base.poisson_boundary(pi, eta).is_zero(),
        divergence_free: Some(divergence(base, pi).iter().all(SuperPoly::is_zero)),
        checked,
        failures,
    })
}

/// Value of the functional `Σ c_m (coefficient of m)` on a form.
fn apply(functional: &SuperPoly, w: &SuperPoly) -> Q {
    let mut acc = Q::zero();
    for (m, c) in functional.iter() {
        acc += c * w.coeff(m);
    }
    acc
}

/// Checks the Frobenius volume diagram for `π^!` on `Λ(ξ1..ξn)`, with `η^!` given as a
/// functional on forms (a combination of form monomials read as their dual basis), and
/// compares with the cycle criterion `η^! ∘ ∂^! = 0`.
pub fn frobenius_poisson_check(
    base: &PoissonBase,
    pi: &SuperPoly,
    eta: &SuperPoly,
    max_weight: u32,
) -> Result<UnimodularityVerdict, PoissonError> {
    if base.kind() != BaseKind::Exterior {
        return Err(PoissonError::Malformed("frobenius_poisson_check expects an exterior base".into()));
    }
    let n = base.n() as u32;
    if eta.is_zero() || eta.keys().any(|m| base.form_degree(m) != 0 || base.coordinate_degree(m) != n) {
        return Err(PoissonError::NotVolume(base.display_form(eta)));
    }
    check_volume(base, max_weight, |basis, k| {
        let w = n as i64 - k.1;
        let forms = form_piece(base, w, k.0 as i64 - k.1);
        let mut m = Matrix::zeros(forms.len(), basis.len());
        for (j, p) in basis.keys().iter().enumerate() {
            for (i, f) in forms.keys().iter().enumerate() {
                let v = apply(eta, &base.contract(&SuperPoly::basis(p.clone()), &SuperPoly::basis(f.clone())));
                if !v.is_zero() {
                    m.set(i, j, v);
                }
            }
        }
        Some(m)
    })?;
    let mut failures = Vec::new();
    let mut checked = 0;
    for k in window(base, max_weight) {
        let w = n as i64 - k.1;
        let forms = form_piece(base, w, k.0 as i64 - k.1 + 1);
        for m in piece_basis(base, k.0, k.1).keys() {
            let p = SuperPoly::basis(m.clone());
            let dp = base.poisson_coboundary(pi, &p);
            checked += 1;
            let bad = forms.keys().iter().any(|f| {
                let f = SuperPoly::basis(f.clone());
                apply(eta, &base.contract(&dp, &f)) != apply(eta, &base.contract(&p, &base.poisson_boundary(pi, &f)))
            });
            if bad && failures.len() < MAX_FAILURES {
                failures.push(base.display_vector(&p));
            }
        }
    }
    // `∂^!` preserves weight and lowers the number of differentials, so only one piece can reach `η^!`.
    let cycle = form_piece(base, n as i64, 1)
        .keys()
        .iter()
        .all(|f| apply(eta, &base.poisson_boundary(pi, &SuperPoly::basis(f.clone()))).is_zero());
    Ok(UnimodularityVerdict {
        side: BaseKind::Exterior,
        diagram_commutes: failures.is_empty(),
        volume_is_cycle: cycle,
        divergence_free: None,
        checked,
        failures,
    })
}
