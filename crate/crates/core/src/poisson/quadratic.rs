use std::collections::BTreeMap;

use super::{BaseKind, Mono, PoissonBase, PoissonError, SuperPoly};
use crate::linalg::{IndexedBasis, Matrix, Q};

/// Key `(a1, a2, b1, b2)`: the term `coord_{a1} coord_{a2} ∂_{b1} ∧ ∂_{b2}`, indices sorted within each pair.
pub type QuadKey = [usize; 4];

/// Quadratic bivector `Σ c x_{a1} x_{a2} ∂_{b1} ∧ ∂_{b2}` in normal form.
///
/// On `k[x]` the coordinate pair is symmetric and the derivation pair antisymmetric;
/// on `Λ(ξ)` the roles are exchanged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticBivector {
    n: usize,
    side: BaseKind,
    terms: BTreeMap<QuadKey, Q>,
}

impl QuadraticBivector {
    /// Sums arbitrary (unnormalized) coefficients `c_{a1a2}^{b1b2}`.
    pub fn from_coefficients(
        side: BaseKind,
        n: usize,
        coeffs: impl IntoIterator<Item = (QuadKey, Q)>,
    ) -> Result<Self, PoissonError> {
        let base = PoissonBase::new(side, n);
        let mut pi = SuperPoly::zero();
        for (k, c) in coeffs {
            if k.iter().any(|&i| i >= n) {
                return Err(PoissonError::Malformed(format!("index out of range in {k:?}")));
            }
            let v = base.vectors();
            let term = v.mul(
                &v.mul(&base.function(k[0]), &base.function(k[1])),
                &v.mul(&base.partial(k[2]), &base.partial(k[3])),
            );
            pi.add_scaled(&c, &term);
        }
        Self::from_polyvector(&base, &pi)
    }

    /// Reads off the coefficients of a polyvector with two coordinates and two derivations per term.
    pub fn from_polyvector(base: &PoissonBase, pi: &SuperPoly) -> Result<Self, PoissonError> {
        let n = base.n();
        let mut terms = BTreeMap::new();
        for (m, c) in pi.iter() {
            if base.coordinate_degree(m) != 2 || base.vector_degree(m) != 2 {
                return Err(PoissonError::Malformed(format!("not quadratic: {}", base.display_vector(pi))));
            }
            let expand = |r: std::ops::Range<usize>| -> Vec<usize> {
                r.clone().flat_map(|g| std::iter::repeat_n(g % n, m[g] as usize)).collect()
            };
            let (a, b) = (expand(0..n), expand(n..2 * n));
            terms.insert([a[0], a[1], b[0], b[1]], c.clone());
        }
        Ok(QuadraticBivector { n, side: base.kind(), terms })
    }

    pub fn zero(side: BaseKind, n: usize) -> Self {
        QuadraticBivector { n, side, terms: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn side(&self) -> BaseKind {
        self.side
    }

    pub fn terms(&self) -> &BTreeMap<QuadKey, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn base(&self) -> PoissonBase {
        PoissonBase::new(self.side, self.n)
    }

    pub fn to_polyvector(&self) -> SuperPoly {
        let base = self.base();
        let mut pi = SuperPoly::zero();
        for (k, c) in &self.terms {
            let mut m = vec![0; 2 * self.n];
            m[k[0]] += 1;
            m[k[1]] += 1;
            m[self.n + k[2]] += 1;
            m[self.n + k[3]] += 1;
            pi.add_term(m, c.clone());
        }
        debug_assert!(Self::from_polyvector(&base, &pi).is_ok());
        pi
    }

    /// `π^! = Σ c ξ_{b1} ξ_{b2} ∂_{ξ_{a1}} ∧ ∂_{ξ_{a2}}` and back.
    pub fn dual(&self) -> QuadraticBivector {
        let side = match self.side {
            BaseKind::Polynomial => BaseKind::Exterior,
            BaseKind::Exterior => BaseKind::Polynomial,
        };
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| ([k[2], k[3], k[0], k[1]], c.clone()))
            .collect();
        QuadraticBivector { n: self.n, side, terms }
    }

    pub fn display(&self) -> String {
        self.base().display_vector(&self.to_polyvector())
    }
}

/// Applies [`QuadraticBivector::dual`].
pub fn dual_bivector(c: &QuadraticBivector) -> QuadraticBivector {
    c.dual()
}

/// Divergence `div_j = Σ_i ∂_i π(x_i, x_j)` of a bivector on `k[x]`, as a list of functions.
pub fn divergence(base: &PoissonBase, pi: &SuperPoly) -> Vec<SuperPoly> {
    let n = base.n();
    (0..n)
        .map(|j| {
            let mut acc = SuperPoly::zero();
            for i in 0..n {
                let pij = base.evaluate(pi, &[base.coordinate(i), base.coordinate(j)]);
                acc.add_scaled(&Q::from_integer(1.into()), &base.forms().left_derivative(i, &pij));
            }
            acc
        })
        .collect()
}

pub fn is_divergence_free(base: &PoissonBase, pi: &SuperPoly) -> bool {
    divergence(base, pi).iter().all(SuperPoly::is_zero)
}

/// Log-canonical bivectors `Σ_{i<j} λ_ij x_i x_j ∂_i ∧ ∂_j` with zero divergence,
/// as a kernel basis of the linear map `λ ↦ div`.
pub fn unimodular_log_canonical(n: usize) -> Vec<QuadraticBivector> {
    let base = PoissonBase::polynomial(n);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let family: Vec<QuadraticBivector> = pairs
        .iter()
        .map(|&(i, j)| {
            QuadraticBivector::from_coefficients(BaseKind::Polynomial, n, [([i, j, i, j], Q::from_integer(1.into()))])
                .expect("indices in range")
        })
        .collect();
    let images: Vec<Vec<SuperPoly>> = family.iter().map(|p| divergence(&base, &p.to_polyvector())).collect();
    let mut monos: Vec<(usize, Mono)> = Vec::new();
    for img in &images {
        for (j, f) in img.iter().enumerate() {
            for m in f.keys() {
                if !monos.contains(&(j, m.clone())) {
                    monos.push((j, m.clone()));
                }
            }
        }
    }
    monos.sort();
    let rows = IndexedBasis::new(monos);
    let mut mat = Matrix::zeros(rows.len(), family.len());
    for (c, img) in images.iter().enumerate() {
        for (j, f) in img.iter().enumerate() {
            for (m, x) in f.iter() {
                mat.set(rows.position(&(j, m.clone())).expect("collected above"), c, x.clone());
            }
        }
    }
    mat.kernel_basis()
        .into_iter()
        .map(|v| {
            let coeffs = pairs.iter().zip(&v).map(|(&(i, j), c)| ([i, j, i, j], c.clone()));
            QuadraticBivector::from_coefficients(BaseKind::Polynomial, n, coeffs).expect("indices in range")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    #[test]
    fn dual_of_log_canonical() {
        let p = QuadraticBivector::from_coefficients(BaseKind::Polynomial, 2, [([0, 1, 0, 1], q(1))]).unwrap();
        let d = p.dual();
        assert_eq!(d.side(), BaseKind::Exterior);
        assert_eq!(d.terms().get(&[0, 1, 0, 1]), Some(&q(1)));
        assert_eq!(d.dual(), p);
    }

    #[test]
    fn normalization_folds_orderings() {
        let raw = [([1, 0, 0, 1], q(1)), ([0, 1, 1, 0], q(1))];
        let p = QuadraticBivector::from_coefficients(BaseKind::Polynomial, 2, raw).unwrap();
        assert!(p.is_zero());
        let e = QuadraticBivector::from_coefficients(BaseKind::Exterior, 2, [([1, 0, 0, 0], q(1))]).unwrap();
        assert_eq!(e.terms().get(&[0, 1, 0, 0]), Some(&q(-1)));
    }

    #[test]
    fn three_variable_unimodular_family() {
        let ker = unimodular_log_canonical(3);
        assert_eq!(ker.len(), 1);
        let base = PoissonBase::polynomial(3);
        assert!(is_divergence_free(&base, &ker[0].to_polyvector()));
        assert!(unimodular_log_canonical(2).is_empty());
    }
}
