//! Reduced Hochschild cochains as sparse tables on basis tensors.
//!
//! A cochain is stored in suspended form `F : (sA_bar)^{(x)q} -> sA` with
//! `|sa| = |a| + 1`, so that composition, bracket, cup and the coboundary all
//! follow from the Koszul rule. For ungraded algebras the tables coincide with
//! the usual unsuspended cochains.

use std::collections::BTreeMap;

use num::{One, Zero};

use super::{Chain, ChainKey, HochError};
use crate::algebra::{sign, Element, GradedAlgebra};
use crate::linalg::{IndexedBasis, LinComb, Q};

/// `(inputs, output)`: the cochain sending the basis tensor `inputs` to `output`.
pub type CochainKey = (Vec<usize>, usize);
pub type Cochain = LinComb<CochainKey>;

fn sdeg(alg: &GradedAlgebra, i: usize) -> i32 {
    alg.degree(i) + 1
}

/// Degree of the suspended map.
pub fn suspended_degree(alg: &GradedAlgebra, key: &CochainKey) -> i32 {
    sdeg(alg, key.1) - key.0.iter().map(|&i| sdeg(alg, i)).sum::<i32>()
}

/// Cohomological degree `1 - |F|`; equals the arity for ungraded algebras.
pub fn cochain_degree(alg: &GradedAlgebra, key: &CochainKey) -> i32 {
    1 - suspended_degree(alg, key)
}

/// Output weight minus input weight.
pub fn weight_shift(alg: &GradedAlgebra, key: &CochainKey) -> i64 {
    alg.weight(key.1) as i64 - key.0.iter().map(|&i| alg.weight(i) as i64).sum::<i64>()
}

/// Degree of a homogeneous cochain, `None` for zero or inhomogeneous input.
pub fn homogeneous_degree(alg: &GradedAlgebra, f: &Cochain) -> Option<i32> {
    let mut it = f.keys().map(|k| suspended_degree(alg, k));
    let d = it.next()?;
    it.all(|e| e == d).then_some(d)
}

fn require_finite(alg: &GradedAlgebra) -> Result<(), HochError> {
    match alg.weight_cutoff() {
        Some(c) => Err(HochError::WindowTooSmall { needed: c + 1, cutoff: c }),
        None => Ok(()),
    }
}

/// Basis of cochains of arity `q` and weight shift `s` (finite-dimensional algebras only).
pub fn cochain_basis(alg: &GradedAlgebra, q: usize, s: i64) -> Result<IndexedBasis<CochainKey>, HochError> {
    require_finite(alg)?;
    let bar: Vec<usize> = alg.augmentation().collect();
    let mut keys = Vec::new();
    let mut inputs = vec![Vec::new()];
    for _ in 0..q {
        inputs = inputs
            .into_iter()
            .flat_map(|v: Vec<usize>| {
                bar.iter().map(move |&a| {
                    let mut w = v.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    for inp in inputs {
        let win: i64 = inp.iter().map(|&i| alg.weight(i) as i64).sum();
        for out in 0..alg.dim() {
            if alg.weight(out) as i64 - win == s {
                keys.push((inp.clone(), out));
            }
        }
    }
    Ok(IndexedBasis::new(keys))
}

fn product(alg: &GradedAlgebra, x: usize, y: usize) -> Result<&Element, HochError> {
    alg.product_of_basis(x, y).map_err(HochError::from_algebra)
}

/// Brace composition `F o G`: `G` is inserted into each input slot of `F`,
/// its output projected away from the unit.
pub fn compose(alg: &GradedAlgebra, f: &Cochain, g: &Cochain) -> Cochain {
    let mut out = Cochain::zero();
    for ((gin, gout), gc) in g.iter() {
        if *gout == alg.unit() {
            continue;
        }
        let gdeg = suspended_degree(alg, &(gin.clone(), *gout));
        for ((fin, fout), fc) in f.iter() {
            let mut before = 0;
            for (i, &x) in fin.iter().enumerate() {
                if x == *gout {
                    let mut inp = fin[..i].to_vec();
                    inp.extend_from_slice(gin);
                    inp.extend_from_slice(&fin[i + 1..]);
                    out.add_term((inp, *fout), sign((gdeg * before).rem_euclid(2) == 1) * fc * gc);
                }
                before += sdeg(alg, x);
            }
        }
    }
    out
}

/// Gerstenhaber bracket `[F, G] = F o G - (-1)^{|F||G|} G o F` on homogeneous cochains.
pub fn gerstenhaber_bracket(alg: &GradedAlgebra, f: &Cochain, g: &Cochain) -> Cochain {
    let (Some(df), Some(dg)) = (homogeneous_degree(alg, f), homogeneous_degree(alg, g)) else {
        return Cochain::zero();
    };
    let s = sign((df * dg).rem_euclid(2) == 1);
    compose(alg, f, g) - compose(alg, g, f).scale(&s)
}

/// The multiplication `m(sa, sb) = (-1)^{|a|} s(ab)` on the augmentation ideal.
pub fn multiplication_cochain(alg: &GradedAlgebra) -> Result<Cochain, HochError> {
    let mut m = Cochain::zero();
    for a in alg.augmentation() {
        for b in alg.augmentation() {
            let s = sign(alg.degree(a).rem_euclid(2) == 1);
            for (&k, c) in product(alg, a, b)?.iter() {
                m.add_term((vec![a, b], k), &s * c);
            }
        }
    }
    Ok(m)
}

/// `m(F, G)` with its brace sign; units allowed in both slots.
fn outer_product(alg: &GradedAlgebra, f: &Cochain, g: &Cochain) -> Result<Cochain, HochError> {
    let mut out = Cochain::zero();
    for ((fin, fout), fc) in f.iter() {
        let before: i32 = fin.iter().map(|&i| sdeg(alg, i)).sum();
        for ((gin, gout), gc) in g.iter() {
            let gdeg = suspended_degree(alg, &(gin.clone(), *gout));
            let s = sign((gdeg * before + alg.degree(*fout)).rem_euclid(2) == 1);
            let mut inp = fin.clone();
            inp.extend_from_slice(gin);
            for (&k, c) in product(alg, *fout, *gout)?.iter() {
                out.add_term((inp.clone(), k), &s * fc * gc * c);
            }
        }
    }
    Ok(out)
}

fn identity_cochain(alg: &GradedAlgebra) -> Cochain {
    alg.augmentation().map(|a| ((vec![a], a), Q::one())).collect()
}

/// Hochschild coboundary `[m, F]`, with the outer multiplication allowed to see units.
pub fn coboundary(alg: &GradedAlgebra, f: &Cochain) -> Result<Cochain, HochError> {
    let Some(df) = homogeneous_degree(alg, f) else {
        if f.is_zero() {
            return Ok(Cochain::zero());
        }
        let mut acc = Cochain::zero();
        for (k, c) in f.iter() {
            acc.add_scaled(c, &coboundary(alg, &Cochain::basis(k.clone()))?);
        }
        return Ok(acc);
    };
    let id = identity_cochain(alg);
    // m o F = m(F, id) + (-1)^{|F||x_1|} m(id, F)
    let mut m_f = outer_product(alg, f, &id)?;
    m_f += &outer_product(alg, &id, f)?;
    let m = multiplication_cochain(alg)?;
    let f_m = compose(alg, f, &m);
    Ok(m_f - f_m.scale(&sign(df.rem_euclid(2) == 1)))
}

/// Cup product `F u G = (-1)^{|F|+1} m(F, G)`.
pub fn cup(alg: &GradedAlgebra, f: &Cochain, g: &Cochain) -> Result<Cochain, HochError> {
    let mut acc = Cochain::zero();
    for (k, c) in f.iter() {
        let s = sign((suspended_degree(alg, k) + 1).rem_euclid(2) == 1);
        acc.add_scaled(&(s * c), &outer_product(alg, &Cochain::basis(k.clone()), g)?);
    }
    Ok(acc)
}

/// Cap product `iota_F(a_0, x_1..x_m) = (-1)^e (a_0 f(x_1..x_n), x_{n+1}..x_m)`, zero
/// when `n > m`, with `e = (|F|+n+1)|a_0| + sum_k (n-k)|x_k| + (m-n)(|x_1|+...+|x_n|+|f|)`
/// summed over `k <= n`, `f` the output basis element.
///
/// With this sign `b iota_F - (-1)^t iota_F b = iota_{dF}` and
/// `iota_F iota_G = (-1)^{t_F t_G} iota_{G u F}` hold on the nose.
pub fn cap(alg: &GradedAlgebra, f: &Cochain, c: &Chain) -> Result<Chain, HochError> {
    let mut out = Chain::zero();
    for (ck, cc) in c.iter() {
        let m = ck.len() - 1;
        for ((fin, fout), fc) in f.iter() {
            let n = fin.len();
            if n > m || ck[1..=n] != fin[..] {
                continue;
            }
            let xs: Vec<i32> = fin.iter().map(|&i| alg.degree(i)).collect();
            let shuffle: i32 = xs.iter().enumerate().map(|(k, d)| (n - 1 - k) as i32 * d).sum();
            let fdeg = suspended_degree(alg, &(fin.clone(), *fout));
            let e = (fdeg + n as i32 + 1) * alg.degree(ck[0])
                + shuffle
                + (m - n) as i32 * (xs.iter().sum::<i32>() + alg.degree(*fout));
            let s = sign(e.rem_euclid(2) == 1);
            for (&k, p) in product(alg, ck[0], *fout)?.iter() {
                let mut key: ChainKey = vec![k];
                key.extend_from_slice(&ck[n + 1..]);
                out.add_term(key, &s * cc * fc * p);
            }
        }
    }
    Ok(out)
}

/// Lie derivative `L_F = B iota_F - (-1)^{t} iota_F B` with `t` the cohomological degree.
pub fn lie_derivative(alg: &GradedAlgebra, f: &Cochain, c: &Chain) -> Result<Chain, HochError> {
    let mut acc = Chain::zero();
    for (k, fc) in f.iter() {
        let fk = Cochain::basis(k.clone());
        let t = cochain_degree(alg, k);
        let first = super::connes_b(alg, &cap(alg, &fk, c)?);
        let second = cap(alg, &fk, &super::connes_b(alg, c))?;
        acc.add_scaled(fc, &(first - second.scale(&sign(t.rem_euclid(2) == 1))));
    }
    Ok(acc)
}

/// A linear functional on chains, i.e. a cochain with values in the dual algebra.
pub type DualCochain = LinComb<ChainKey>;

/// Evaluates a functional on a chain.
pub fn pair(phi: &DualCochain, c: &Chain) -> Q {
    let mut s = Q::zero();
    for (k, v) in c.iter() {
        let p = phi.coeff(k);
        if !p.is_zero() {
            s += v * p;
        }
    }
    s
}

/// `B^*(g) = g o B`.
pub fn b_star(alg: &GradedAlgebra, g: &DualCochain, chains: &[ChainKey]) -> DualCochain {
    chains
        .iter()
        .map(|k| (k.clone(), pair(g, &super::connes_b_basis(alg, k))))
        .collect()
}

/// `cap^*(F, g) = g o iota_F`, evaluated on the listed chains.
pub fn cap_star(alg: &GradedAlgebra, f: &Cochain, g: &DualCochain, chains: &[ChainKey]) -> Result<DualCochain, HochError> {
    let mut out = DualCochain::zero();
    for k in chains {
        out.add_term(k.clone(), pair(g, &cap(alg, f, &Chain::basis(k.clone()))?));
    }
    Ok(out)
}

/// Groups a cochain by input tuple.
pub fn table(f: &Cochain) -> BTreeMap<Vec<usize>, Element> {
    let mut t: BTreeMap<Vec<usize>, Element> = BTreeMap::new();
    for ((inp, out), c) in f.iter() {
        t.entry(inp.clone()).or_default().add_term(*out, c.clone());
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    #[test]
    fn cup_example_polynomial() {
        let a = GradedAlgebra::truncated_polynomial(1, 2);
        let x = a.index_of_label("x1").unwrap();
        let x2 = a.index_of_label("x1^2").unwrap();
        let f = Cochain::basis((vec![x], x));
        let fg = cup(&a, &f, &f).unwrap();
        assert_eq!(fg, Cochain::single((vec![x, x], x2), q(-1)));
    }

    #[test]
    fn multiplication_is_a_maurer_cartan_element() {
        for a in [GradedAlgebra::exterior(1), GradedAlgebra::exterior(2), GradedAlgebra::exterior(3)] {
            let m = multiplication_cochain(&a).unwrap();
            assert!(gerstenhaber_bracket(&a, &m, &m).is_zero());
        }
    }

    #[test]
    fn coboundary_squares_to_zero() {
        let a = GradedAlgebra::exterior(2);
        for qa in 0..=2 {
            for s in -4..=2 {
                for k in cochain_basis(&a, qa, s).unwrap().keys() {
                    let d = coboundary(&a, &Cochain::basis(k.clone())).unwrap();
                    assert!(coboundary(&a, &d).unwrap().is_zero(), "{k:?}");
                }
            }
        }
    }

    #[test]
    fn unit_cochain_acts_trivially() {
        let a = GradedAlgebra::exterior(2);
        let unit = Cochain::basis((vec![], a.unit()));
        let c = Chain::basis(vec![3, 1, 2]);
        assert_eq!(cap(&a, &unit, &c).unwrap(), c);
        let f = Cochain::basis((vec![1], 2));
        assert_eq!(cup(&a, &f, &unit).unwrap(), f);
        assert_eq!(cup(&a, &unit, &f).unwrap(), f);
    }

    #[test]
    fn cap_examples() {
        let a = GradedAlgebra::truncated_polynomial(1, 2);
        let x = a.index_of_label("x1").unwrap();
        let f = Cochain::basis((vec![x], x));
        assert_eq!(cap(&a, &f, &Chain::basis(vec![0, x])).unwrap(), Chain::basis(vec![x]));
        let g = Cochain::basis((vec![x, x], x));
        assert!(cap(&a, &g, &Chain::basis(vec![0, x])).unwrap().is_zero());
    }
}
