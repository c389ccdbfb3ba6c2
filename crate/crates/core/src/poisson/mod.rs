//! Poisson (co)homology of `k[x1..xn]` and of `Λ(ξ1..ξn)`.
//!
//! Kähler forms `Ω(A) = Λ(x, dx)` and polyvector fields `𝔛(A) = Λ(x, ∂_x)` are free
//! graded-commutative algebras, with `|dx| = |∂_x| = |x| + 1` in parity. Contraction
//! lets `x` act by multiplication and `∂_{x_a}` by `∂/∂(dx_a)`, composed so that
//! `ι_{∂1∧∂2}(dx1∧dx2) = 1`. The Schouten bracket is the canonical odd bracket
//! pairing `x_a` with `∂_{x_a}`.

mod identification;
mod model;
mod quadratic;
mod superpoly;
mod unimodular;

pub use identification::{
    koszul_poisson_identification, literal_form_image, phi_polyvector, IdentificationReport,
    KoszulPoissonIdentification,
};
pub use model::{form_piece, piece_basis, PoissonCalculus};
pub use quadratic::{
    divergence, dual_bivector, is_divergence_free, unimodular_log_canonical, QuadKey, QuadraticBivector,
};
pub use superpoly::{monomials, Mono, SuperAlgebra, SuperPoly};
pub use unimodular::{frobenius_poisson_check, unimodularity_check, UnimodularityVerdict};

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{LinAlgError, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PoissonError {
    #[error("bivector fails the Jacobi identity: [π, π] = {0}")]
    NotPoisson(String),
    #[error("not a volume form: contraction is singular at {0}")]
    NotVolume(String),
    #[error("outside the computed window: {0}")]
    OutOfWindow(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BaseKind {
    /// `k[x1..xn]`, coordinates even of degree 0.
    Polynomial,
    /// `Λ(ξ1..ξn)`, coordinates odd of degree -1.
    Exterior,
}

/// Coordinates of the base algebra together with the form and polyvector algebras.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoissonBase {
    n: usize,
    kind: BaseKind,
    forms: SuperAlgebra,
    vectors: SuperAlgebra,
}

impl PoissonBase {
    pub fn new(kind: BaseKind, n: usize) -> Self {
        let (coord, odd) = match kind {
            BaseKind::Polynomial => ("x", false),
            BaseKind::Exterior => ("xi", true),
        };
        let names = |prefix: &str| -> Vec<String> { (1..=n).map(|i| format!("{prefix}{coord}{i}")).collect() };
        let mut form_names = names("");
        form_names.extend(names("d"));
        let mut vec_names = names("");
        vec_names.extend((1..=n).map(|i| format!("D{coord}{i}")));
        let mut parity = vec![odd; n];
        parity.extend(vec![!odd; n]);
        PoissonBase {
            n,
            kind,
            forms: SuperAlgebra::new(form_names, parity.clone()),
            vectors: SuperAlgebra::new(vec_names, parity),
        }
    }

    pub fn polynomial(n: usize) -> Self {
        Self::new(BaseKind::Polynomial, n)
    }

    pub fn exterior(n: usize) -> Self {
        Self::new(BaseKind::Exterior, n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> BaseKind {
        self.kind
    }

    pub fn forms(&self) -> &SuperAlgebra {
        &self.forms
    }

    pub fn vectors(&self) -> &SuperAlgebra {
        &self.vectors
    }

    fn coords(&self) -> Vec<usize> {
        (0..self.n).collect()
    }

    fn tangents(&self) -> Vec<usize> {
        (self.n..2 * self.n).collect()
    }

    /// Coordinate `x_a` as a form.
    pub fn coordinate(&self, a: usize) -> SuperPoly {
        self.forms.generator(a)
    }

    /// `dx_a`.
    pub fn differential(&self, a: usize) -> SuperPoly {
        self.forms.generator(self.n + a)
    }

    /// Coordinate `x_a` as a polyvector of degree 0.
    pub fn function(&self, a: usize) -> SuperPoly {
        self.vectors.generator(a)
    }

    /// `∂/∂x_a`.
    pub fn partial(&self, a: usize) -> SuperPoly {
        self.vectors.generator(self.n + a)
    }

    /// Number of `dx` factors.
    pub fn form_degree(&self, m: &Mono) -> u32 {
        m[self.n..].iter().sum()
    }

    /// Number of `∂` factors.
    pub fn vector_degree(&self, m: &Mono) -> u32 {
        m[self.n..].iter().sum()
    }

    /// Number of coordinate factors.
    pub fn coordinate_degree(&self, m: &Mono) -> u32 {
        m[..self.n].iter().sum()
    }

    /// Forms with `k` differentials and total weight `w` (each `x` and `dx` of weight 1).
    pub fn form_basis(&self, w: u32, k: u32) -> Vec<Mono> {
        if k > w {
            return Vec::new();
        }
        let mut out = Vec::new();
        for tail in monomials(&self.forms, &self.tangents(), k) {
            for head in monomials(&self.forms, &self.coords(), w - k) {
                out.push(head.iter().zip(&tail).map(|(a, b)| a + b).collect());
            }
        }
        out
    }

    /// Polyvectors with `m` coordinate factors and `p` derivations.
    pub fn vector_basis(&self, m: u32, p: u32) -> Vec<Mono> {
        let mut out = Vec::new();
        for tail in monomials(&self.vectors, &self.tangents(), p) {
            for head in monomials(&self.vectors, &self.coords(), m) {
                out.push(head.iter().zip(&tail).map(|(a, b)| a + b).collect());
            }
        }
        out
    }

    pub fn wedge(&self, p: &SuperPoly, q: &SuperPoly) -> SuperPoly {
        self.vectors.mul(p, q)
    }

    pub fn form_product(&self, a: &SuperPoly, b: &SuperPoly) -> SuperPoly {
        self.forms.mul(a, b)
    }

    /// De Rham differential `d = Σ dx_a ∂/∂x_a`.
    pub fn de_rham(&self, w: &SuperPoly) -> SuperPoly {
        let mut out = SuperPoly::zero();
        for a in 0..self.n {
            let der = self.forms.left_derivative(a, w);
            if !der.is_zero() {
                out.add_scaled(&Q::from_integer(1.into()), &self.forms.mul(&self.differential(a), &der));
            }
        }
        out
    }

    /// `ι_P ω`, with `ι_{PQ} = ι_Q ∘ ι_P`.
    pub fn contract(&self, p: &SuperPoly, w: &SuperPoly) -> SuperPoly {
        let mut out = SuperPoly::zero();
        for (m, c) in p.iter() {
            let mut cur = w.clone();
            for (g, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    cur = if g < self.n {
                        self.forms.mul(&self.coordinate(g), &cur)
                    } else {
                        self.forms.left_derivative(g, &cur)
                    };
                }
            }
            out.add_scaled(c, &cur);
        }
        out
    }

    /// Evaluates a polyvector of degree `k` on `k` functions: `P(f1..fk) = ι_P(df1 ∧ ... ∧ dfk)`.
    pub fn evaluate(&self, p: &SuperPoly, fs: &[SuperPoly]) -> SuperPoly {
        let mut w = self.forms.one();
        for f in fs {
            w = self.forms.mul(&w, &self.de_rham(f));
        }
        self.contract(p, &w)
    }

    /// Schouten bracket `Σ_a (P ∂←/∂(∂_a))(∂→/∂x_a Q) - (P ∂←/∂x_a)(∂→/∂(∂_a) Q)`.
    pub fn schouten(&self, p: &SuperPoly, q: &SuperPoly) -> SuperPoly {
        let v = &self.vectors;
        let one = Q::from_integer(1.into());
        let mut out = SuperPoly::zero();
        for a in 0..self.n {
            let t = self.n + a;
            out.add_scaled(&one, &v.mul(&v.right_derivative(t, p), &v.left_derivative(a, q)));
            out.add_scaled(&-one.clone(), &v.mul(&v.right_derivative(a, p), &v.left_derivative(t, q)));
        }
        out
    }

    /// Poisson bracket of two functions.
    pub fn bracket(&self, pi: &SuperPoly, f: &SuperPoly, g: &SuperPoly) -> SuperPoly {
        self.evaluate(pi, &[f.clone(), g.clone()])
    }

    /// Poisson boundary on forms, `∂ = ι_π d - d ι_π`.
    pub fn poisson_boundary(&self, pi: &SuperPoly, w: &SuperPoly) -> SuperPoly {
        let mut out = self.contract(pi, &self.de_rham(w));
        out.add_scaled(&-Q::from_integer(1.into()), &self.de_rham(&self.contract(pi, w)));
        out
    }

    /// Poisson coboundary on polyvectors, `δ = [π, -]`.
    pub fn poisson_coboundary(&self, pi: &SuperPoly, p: &SuperPoly) -> SuperPoly {
        self.schouten(pi, p)
    }

    /// Converts a function (form of degree 0) into the matching degree-0 polyvector.
    pub fn function_to_vector(&self, f: &SuperPoly) -> SuperPoly {
        f.clone()
    }

    pub fn display_form(&self, w: &SuperPoly) -> String {
        self.forms.display(w)
    }

    pub fn display_vector(&self, p: &SuperPoly) -> String {
        self.vectors.display(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    #[test]
    fn contraction_examples() {
        let b = PoissonBase::polynomial(2);
        let f = b.forms();
        let dx12 = f.mul(&b.differential(0), &b.differential(1));
        assert_eq!(b.contract(&b.partial(0), &dx12), b.differential(1));
        let d12 = b.wedge(&b.partial(0), &b.partial(1));
        assert_eq!(b.contract(&d12, &dx12), f.one());
    }

    #[test]
    fn schouten_example() {
        let b = PoissonBase::polynomial(1);
        let x_d = b.wedge(&b.function(0), &b.partial(0));
        assert_eq!(b.schouten(&b.partial(0), &x_d), b.partial(0));
    }

    #[test]
    fn de_rham_examples() {
        let b = PoissonBase::polynomial(2);
        assert_eq!(b.de_rham(&b.coordinate(0)), b.differential(0));
        let xdx = b.form_product(&b.coordinate(0), &b.differential(0));
        assert!(b.de_rham(&xdx).is_zero());
        assert_eq!(b.form_basis(2, 1).len(), 4);
        let _ = q(0);
    }
}
