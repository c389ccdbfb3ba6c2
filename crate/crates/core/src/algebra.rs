//! Finite presentations of connected weight-graded algebras.
//!
//! An algebra is a table of basis elements, each with a homological degree and
//! a weight, together with structure constants. Polynomial algebras are
//! truncated at a weight cutoff; products that would exceed it are reported as
//! [`AlgebraError::OutOfWindow`] and never silently dropped.

use std::fmt;

use num::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{LinComb, Matrix, Q};

pub type Element = LinComb<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("product leaves the weight window: needs weight {needed}, cutoff is {cutoff}")]
    OutOfWindow { needed: u32, cutoff: u32 },
    #[error("associativity fails on basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("unit law fails for basis element {0}")]
    UnitLaw(usize),
    #[error("structure constant c[{0}][{1}] -> {2} breaks degree/weight additivity")]
    NotGraded(usize, usize, usize),
    #[error("weight-0 part is not spanned by the unit")]
    NotConnected,
    #[error("graded commutativity fails on pair ({0}, {1})")]
    NotCommutative(usize, usize),
    #[error("malformed table: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisElement {
    pub label: String,
    pub degree: i32,
    pub weight: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Product {
    Terms(Element),
    OutOfWindow(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Commutativity {
    None,
    GradedCommutative,
}

#[derive(Clone, PartialEq, Eq)]
pub struct GradedAlgebra {
    basis: Vec<BasisElement>,
    unit: usize,
    table: Vec<Vec<Product>>,
    commutativity: Commutativity,
    weight_cutoff: Option<u32>,
}

impl fmt::Debug for GradedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<&str> = self.basis.iter().map(|b| b.label.as_str()).collect();
        f.debug_struct("GradedAlgebra")
            .field("basis", &labels)
            .field("weight_cutoff", &self.weight_cutoff)
            .finish()
    }
}

pub fn sign(odd: bool) -> Q {
    if odd {
        -Q::one()
    } else {
        Q::one()
    }
}

/// Sign of the permutation sorting `seq` (entries distinct), or `None` on repeats.
pub fn sort_sign(seq: &mut [usize]) -> Option<bool> {
    let mut odd = false;
    for i in 0..seq.len() {
        for j in 0..seq.len() - 1 - i {
            if seq[j] == seq[j + 1] {
                return None;
            }
            if seq[j] > seq[j + 1] {
                seq.swap(j, j + 1);
                odd = !odd;
            }
        }
    }
    if seq.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(odd)
}

impl GradedAlgebra {
    /// Validates and builds an algebra from an explicit table.
    pub fn new(
        basis: Vec<BasisElement>,
        unit: usize,
        table: Vec<Vec<Product>>,
        commutativity: Commutativity,
        weight_cutoff: Option<u32>,
    ) -> Result<Self, AlgebraError> {
        let n = basis.len();
        if unit >= n || table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(AlgebraError::Malformed(format!("table must be {n}x{n} with a valid unit")));
        }
        let alg = GradedAlgebra {
            basis,
            unit,
            table,
            commutativity,
            weight_cutoff,
        };
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                if let Product::Terms(t) = &self.table[i][j] {
                    for (&k, _) in t.iter() {
                        if k >= n {
                            return Err(AlgebraError::Malformed(format!("index {k} out of range")));
                        }
                        let (bi, bj, bk) = (&self.basis[i], &self.basis[j], &self.basis[k]);
                        if bi.degree + bj.degree != bk.degree || bi.weight + bj.weight != bk.weight {
                            return Err(AlgebraError::NotGraded(i, j, k));
                        }
                    }
                }
            }
        }
        let u = Element::basis(self.unit);
        if self.basis[self.unit].weight != 0 || self.basis[self.unit].degree != 0 {
            return Err(AlgebraError::UnitLaw(self.unit));
        }
        for i in 0..n {
            let e = Element::basis(i);
            if self.multiply(&u, &e).ok() != Some(e.clone()) || self.multiply(&e, &u).ok() != Some(e.clone()) {
                return Err(AlgebraError::UnitLaw(i));
            }
            if i != self.unit && self.basis[i].weight == 0 {
                return Err(AlgebraError::NotConnected);
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (ei, ej, ek) = (Element::basis(i), Element::basis(j), Element::basis(k));
                    let left = self.multiply(&ei, &ej).and_then(|p| self.multiply(&p, &ek));
                    let right = self.multiply(&ej, &ek).and_then(|p| self.multiply(&ei, &p));
                    if let (Ok(l), Ok(r)) = (left, right) {
                        if l != r {
                            return Err(AlgebraError::NotAssociative(i, j, k));
                        }
                    }
                }
            }
        }
        if self.commutativity == Commutativity::GradedCommutative {
            for i in 0..n {
                for j in 0..n {
                    let (ei, ej) = (Element::basis(i), Element::basis(j));
                    if let (Ok(a), Ok(b)) = (self.multiply(&ei, &ej), self.multiply(&ej, &ei)) {
                        let s = sign(self.basis[i].degree * self.basis[j].degree % 2 != 0);
                        if a != b.scale(&s) {
                            return Err(AlgebraError::NotCommutative(i, j));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Exterior algebra on `n` generators of degree -1 and weight 1.
    ///
    /// Basis: subsets of generators as increasing index lists, ordered by size
    /// then lexicographically.
    pub fn exterior(n: usize) -> Self {
        assert!(n >= 1);
        let mut subsets: Vec<Vec<usize>> = (0u32..(1 << n))
            .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
            .collect();
        subsets.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        let index_of = |s: &[usize]| subsets.iter().position(|t| t.as_slice() == s).unwrap();
        let basis: Vec<BasisElement> = subsets
            .iter()
            .map(|s| BasisElement {
                label: exterior_label(s),
                degree: -(s.len() as i32),
                weight: s.len() as u32,
            })
            .collect();
        let table = subsets
            .iter()
            .map(|a| {
                subsets
                    .iter()
                    .map(|b| {
                        let mut cat: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
                        match sort_sign(&mut cat) {
                            None => Product::Terms(Element::zero()),
                            Some(odd) => Product::Terms(Element::single(index_of(&cat), sign(odd))),
                        }
                    })
                    .collect()
            })
            .collect();
        GradedAlgebra::new(basis, 0, table, Commutativity::GradedCommutative, None)
            .expect("exterior algebra is valid")
    }

    /// Polynomial algebra on `n` degree-0 generators truncated at total degree `cutoff`.
    ///
    /// Basis: exponent vectors ordered by total degree, then descending
    /// lexicographically (so `x1` precedes `x2`).
    pub fn truncated_polynomial(n: usize, cutoff: u32) -> Self {
        assert!(n >= 1 && cutoff >= 1);
        let monos = monomials_up_to(n, cutoff);
        let index_of = |e: &[u32]| monos.iter().position(|m| m.as_slice() == e);
        let basis = monos
            .iter()
            .map(|e| BasisElement {
                label: monomial_label(e, "x"),
                degree: 0,
                weight: e.iter().sum(),
            })
            .collect();
        let table = monos
            .iter()
            .map(|a| {
                monos
                    .iter()
                    .map(|b| {
                        let c: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        match index_of(&c) {
                            Some(k) => Product::Terms(Element::basis(k)),
                            None => Product::OutOfWindow(c.iter().sum()),
                        }
                    })
                    .collect()
            })
            .collect();
        GradedAlgebra::new(basis, 0, table, Commutativity::GradedCommutative, Some(cutoff))
            .expect("polynomial algebra is valid")
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.basis[i].degree
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.basis[i].weight
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i].label
    }

    pub fn weight_cutoff(&self) -> Option<u32> {
        self.weight_cutoff
    }

    pub fn commutativity(&self) -> Commutativity {
        self.commutativity
    }

    pub fn max_weight(&self) -> u32 {
        self.basis.iter().map(|b| b.weight).max().unwrap_or(0)
    }

    /// Basis indices of the augmentation ideal (everything except the unit).
    pub fn augmentation(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim()).filter(move |&i| i != self.unit)
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.label == label)
    }

    pub fn product_of_basis(&self, i: usize, j: usize) -> Result<&Element, AlgebraError> {
        match &self.table[i][j] {
            Product::Terms(t) => Ok(t),
            Product::OutOfWindow(w) => Err(AlgebraError::OutOfWindow {
                needed: *w,
                cutoff: self.weight_cutoff.unwrap_or(0),
            }),
        }
    }

    /// Bilinear extension of the structure constants.
    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        let mut out = Element::zero();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                out.add_scaled(&(x * y), self.product_of_basis(*i, *j)?);
            }
        }
        Ok(out)
    }

    pub fn is_homogeneous_degree(&self, a: &Element) -> Option<i32> {
        let mut deg = None;
        for (i, _) in a.iter() {
            let d = self.degree(*i);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        deg
    }
}

fn exterior_label(s: &[usize]) -> String {
    if s.is_empty() {
        "1".to_string()
    } else {
        s.iter().map(|i| format!("xi{}", i + 1)).collect::<Vec<_>>().join("*")
    }
}

/// Label for an exponent vector, e.g. `x1^2*x3`.
pub fn monomial_label(e: &[u32], var: &str) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| if k == 1 { format!("{var}{}", i + 1) } else { format!("{var}{}^{k}", i + 1) })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// Exponent vectors of total degree exactly `d` in `n` variables, descending lex.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n - 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=d).rev() {
            prefix.push(k);
            rec(n, d - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

pub fn monomials_up_to(n: usize, cutoff: u32) -> Vec<Vec<u32>> {
    (0..=cutoff).flat_map(|d| monomials_of_degree(n, d)).collect()
}

/// A bilinear form on an algebra, nonzero only on pairs whose degrees sum to `degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusPairing {
    pub matrix: Matrix,
    pub degree: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct FrobeniusReport {
    pub nondegenerate: bool,
    pub triples_checked: usize,
    pub cyclic_violations: Vec<(usize, usize, usize)>,
}

impl FrobeniusReport {
    pub fn passed(&self) -> bool {
        self.nondegenerate && self.cyclic_violations.is_empty()
    }
}

impl FrobeniusPairing {
    pub fn pair(&self, a: &Element, b: &Element) -> Q {
        let mut s = Q::zero();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                let p = self.matrix.get(*i, *j);
                if !p.is_zero() {
                    s += x * y * p;
                }
            }
        }
        s
    }

    /// `<a, b>` = coefficient of the top monomial in `a * b`.
    pub fn exterior_top(alg: &GradedAlgebra) -> Self {
        let n = alg.dim();
        let top = (0..n).max_by_key(|&i| alg.weight(i)).unwrap();
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if let Ok(p) = alg.product_of_basis(i, j) {
                    m.set(i, j, p.coeff(&top));
                }
            }
        }
        FrobeniusPairing {
            matrix: m,
            degree: alg.degree(top),
        }
    }
}

/// Checks nondegeneracy and cyclic invariance
/// `<ab, c> = (-1)^{|c|(|a|+|b|)} <ca, b>` on every basis triple.
pub fn check_frobenius_pairing(alg: &GradedAlgebra, p: &FrobeniusPairing) -> FrobeniusReport {
    let n = alg.dim();
    assert_eq!(p.matrix.rows(), n);
    assert_eq!(p.matrix.cols(), n);
    let nondegenerate = p.matrix.inverse().is_some();
    let mut report = FrobeniusReport {
        nondegenerate,
        ..Default::default()
    };
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                report.triples_checked += 1;
                let (ea, eb, ec) = (Element::basis(a), Element::basis(b), Element::basis(c));
                let (Ok(ab), Ok(ca)) = (alg.multiply(&ea, &eb), alg.multiply(&ec, &ea)) else {
                    continue;
                };
                let s = sign((alg.degree(c) * (alg.degree(a) + alg.degree(b))).rem_euclid(2) == 1);
                if p.pair(&ab, &ec) != s * p.pair(&ca, &eb) {
                    report.cyclic_violations.push((a, b, c));
                }
            }
        }
    }
    report
}
