use std::fmt;

use num::{One};

use crate::linalg::{LinComb, Q};

/// Exponent vector in generator order; odd generators have exponent 0 or 1.
pub type Mono = Vec<u32>;
pub type SuperPoly = LinComb<Mono>;

/// Free graded-commutative algebra on generators of given parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperAlgebra {
    names: Vec<String>,
    odd: Vec<bool>,
}

impl SuperAlgebra {
    pub fn new(names: Vec<String>, odd: Vec<bool>) -> Self {
        assert_eq!(names.len(), odd.len());
        SuperAlgebra { names, odd }
    }

    pub fn len(&self) -> usize {
        self.odd.len()
    }

    pub fn is_empty(&self) -> bool {
        self.odd.is_empty()
    }

    pub fn is_odd(&self, g: usize) -> bool {
        self.odd[g]
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn one(&self) -> SuperPoly {
        SuperPoly::basis(vec![0; self.len()])
    }

    pub fn generator(&self, g: usize) -> SuperPoly {
        let mut m = vec![0; self.len()];
        m[g] = 1;
        SuperPoly::basis(m)
    }

    /// Parity of a monomial.
    pub fn parity(&self, m: &Mono) -> bool {
        m.iter().zip(&self.odd).filter(|(e, o)| **o && **e > 0).count() % 2 == 1
    }

    /// Product of monomials with the Koszul sign of sorting; `None` if an odd generator repeats.
    pub fn mul_mono(&self, a: &Mono, b: &Mono) -> Option<(bool, Mono)> {
        let mut flips = 0usize;
        let mut out = a.clone();
        for g in 0..self.len() {
            if b[g] == 0 {
                continue;
            }
            if self.odd[g] {
                if a[g] > 0 {
                    return None;
                }
                flips += (g + 1..self.len()).filter(|&h| self.odd[h] && a[h] > 0).count();
            }
            out[g] += b[g];
        }
        Some((flips % 2 == 1, out))
    }

    pub fn mul(&self, a: &SuperPoly, b: &SuperPoly) -> SuperPoly {
        let mut out = SuperPoly::zero();
        for (ma, ca) in a.iter() {
            for (mb, cb) in b.iter() {
                if let Some((neg, m)) = self.mul_mono(ma, mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// `∂/∂g` acting from the left.
    pub fn left_derivative(&self, g: usize, p: &SuperPoly) -> SuperPoly {
        self.derivative(g, p, true)
    }

    /// `∂/∂g` acting from the right.
    pub fn right_derivative(&self, g: usize, p: &SuperPoly) -> SuperPoly {
        self.derivative(g, p, false)
    }

    fn derivative(&self, g: usize, p: &SuperPoly, left: bool) -> SuperPoly {
        let mut out = SuperPoly::zero();
        for (m, c) in p.iter() {
            if m[g] == 0 {
                continue;
            }
            let mut r = m.clone();
            r[g] -= 1;
            let coeff = if self.odd[g] {
                let range: Vec<usize> = if left { (0..g).collect() } else { (g + 1..self.len()).collect() };
                let passes = range.into_iter().filter(|&h| self.odd[h] && m[h] > 0).count();
                if passes % 2 == 1 {
                    -c.clone()
                } else {
                    c.clone()
                }
            } else {
                c * Q::from_integer(m[g].into())
            };
            out.add_term(r, coeff);
        }
        out
    }

    pub fn display(&self, p: &SuperPoly) -> String {
        Display(self, p).to_string()
    }
}

struct Display<'a>(&'a SuperAlgebra, &'a SuperPoly);

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.1.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let factors: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(g, e)| {
                    if *e == 1 {
                        self.0.names[g].clone()
                    } else {
                        format!("{}^{e}", self.0.names[g])
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "({c})*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// All monomials with `Σ e_g = total` over the generators in `gens`, odd exponents at most 1.
pub fn monomials(alg: &SuperAlgebra, gens: &[usize], total: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    fn rec(alg: &SuperAlgebra, gens: &[usize], i: usize, rest: u32, cur: &mut Mono, out: &mut Vec<Mono>) {
        if i == gens.len() {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let g = gens[i];
        let max = if alg.odd[g] { rest.min(1) } else { rest };
        for e in (0..=max).rev() {
            cur[g] = e;
            rec(alg, gens, i + 1, rest - e, cur, out);
        }
        cur[g] = 0;
    }
    rec(alg, gens, 0, total, &mut vec![0; alg.len()], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn mixed() -> SuperAlgebra {
        SuperAlgebra::new(
            vec!["x".into(), "a".into(), "b".into()],
            vec![false, true, true],
        )
    }

    #[test]
    fn odd_generators_anticommute() {
        let s = mixed();
        let (a, b) = (s.generator(1), s.generator(2));
        let mut sum = s.mul(&a, &b);
        sum.add_scaled(&q(1), &s.mul(&b, &a));
        assert!(sum.is_zero());
        assert!(s.mul(&a, &a).is_zero());
    }

    #[test]
    fn derivatives_differ_by_parity() {
        let s = mixed();
        let ab = s.mul(&s.generator(1), &s.generator(2));
        assert_eq!(s.left_derivative(2, &ab), s.generator(1).scale(&q(-1)));
        assert_eq!(s.right_derivative(2, &ab), s.generator(1));
        let x2 = s.mul(&s.generator(0), &s.generator(0));
        assert_eq!(s.left_derivative(0, &x2), s.generator(0).scale(&q(2)));
    }

    #[test]
    fn monomial_counts() {
        let s = mixed();
        assert_eq!(monomials(&s, &[0, 1, 2], 2).len(), 4);
        assert_eq!(monomials(&s, &[1, 2], 2).len(), 1);
    }
}
