use std::collections::BTreeMap;

use num::One;

use super::HochError;
use crate::algebra::{sign, Element, GradedAlgebra};
use crate::linalg::{IndexedBasis, LinComb, Q};
use crate::mixed::MixedComplexSlice;

/// `(a_0, a_1, ..., a_p)` as basis indices; `a_1..a_p` lie in the augmentation ideal.
pub type ChainKey = Vec<usize>;
pub type Chain = LinComb<ChainKey>;

pub fn chain_degree(alg: &GradedAlgebra, key: &[usize]) -> i32 {
    (key.len() as i32 - 1) + key.iter().map(|&i| alg.degree(i)).sum::<i32>()
}

pub fn chain_weight(alg: &GradedAlgebra, key: &[usize]) -> u32 {
    key.iter().map(|&i| alg.weight(i)).sum()
}

fn check_window(alg: &GradedAlgebra, w: u32) -> Result<(), HochError> {
    match alg.weight_cutoff() {
        Some(c) if w > c => Err(HochError::WindowTooSmall { needed: w, cutoff: c }),
        _ => Ok(()),
    }
}

/// All reduced chains of weight `w`, grouped by total degree `p + sum |a_i|`.
pub fn chain_basis(alg: &GradedAlgebra, w: u32) -> Result<BTreeMap<i32, IndexedBasis<ChainKey>>, HochError> {
    check_window(alg, w)?;
    let bar: Vec<usize> = alg.augmentation().collect();
    let mut out: BTreeMap<i32, Vec<ChainKey>> = BTreeMap::new();
    fn extend(
        alg: &GradedAlgebra,
        bar: &[usize],
        rest: u32,
        key: &mut ChainKey,
        out: &mut BTreeMap<i32, Vec<ChainKey>>,
    ) {
        if rest == 0 {
            out.entry(chain_degree(alg, key)).or_default().push(key.clone());
        }
        for &a in bar {
            let wa = alg.weight(a);
            if wa <= rest {
                key.push(a);
                extend(alg, bar, rest - wa, key, out);
                key.pop();
            }
        }
    }
    for a0 in 0..alg.dim() {
        if alg.weight(a0) <= w {
            extend(alg, &bar, w - alg.weight(a0), &mut vec![a0], &mut out);
        }
    }
    Ok(out
        .into_iter()
        .map(|(d, mut keys)| {
            keys.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
            (d, IndexedBasis::new(keys))
        })
        .collect())
}

fn push_product(
    alg: &GradedAlgebra,
    out: &mut Chain,
    coeff: &Q,
    x: usize,
    y: usize,
    build: impl Fn(usize) -> ChainKey,
) -> Result<(), HochError> {
    let prod: &Element = alg.product_of_basis(x, y).map_err(HochError::from_algebra)?;
    for (&k, c) in prod.iter() {
        out.add_term(build(k), coeff * c);
    }
    Ok(())
}

/// Hochschild boundary with the graded sign on the wrap-around face:
/// `b = sum_{i<p} (-1)^i d_i + (-1)^{p + |a_p|(|a_0|+...+|a_{p-1}|)} d_p`.
pub fn boundary_b_basis(alg: &GradedAlgebra, key: &[usize]) -> Result<Chain, HochError> {
    let p = key.len() - 1;
    let mut out = Chain::zero();
    for i in 0..p {
        let c = sign(i % 2 == 1);
        push_product(alg, &mut out, &c, key[i], key[i + 1], |k| {
            let mut v = key[..i].to_vec();
            v.push(k);
            v.extend_from_slice(&key[i + 2..]);
            v
        })?;
    }
    if p >= 1 {
        let before: i32 = key[..p].iter().map(|&i| alg.degree(i)).sum();
        let c = sign((p as i32 + alg.degree(key[p]) * before).rem_euclid(2) == 1);
        push_product(alg, &mut out, &c, key[p], key[0], |k| {
            let mut v = vec![k];
            v.extend_from_slice(&key[1..p]);
            v
        })?;
    }
    Ok(out)
}

/// Cyclic operator `t(a_0..a_n) = (-1)^{n + |a_n|(|a_0|+...+|a_{n-1}|)} (a_n, a_0, ..., a_{n-1})`.
pub fn cyclic_t(alg: &GradedAlgebra, key: &[usize]) -> (Q, ChainKey) {
    let n = key.len() - 1;
    let before: i32 = key[..n].iter().map(|&i| alg.degree(i)).sum();
    let s = sign((n as i32 + alg.degree(key[n]) * before).rem_euclid(2) == 1);
    let mut v = vec![key[n]];
    v.extend_from_slice(&key[..n]);
    (s, v)
}

/// Connes' operator on reduced chains: `B(a_0..a_n) = sum_j (1, t^j(a_0..a_n))`.
pub fn connes_b_basis(alg: &GradedAlgebra, key: &[usize]) -> Chain {
    let mut out = Chain::zero();
    if key[0] == alg.unit() {
        return out;
    }
    let mut s = Q::one();
    let mut cur = key.to_vec();
    for _ in 0..key.len() {
        let mut v = vec![alg.unit()];
        v.extend_from_slice(&cur);
        out.add_term(v, s.clone());
        let (t, next) = cyclic_t(alg, &cur);
        s *= t;
        cur = next;
    }
    out
}

pub fn boundary_b(alg: &GradedAlgebra, c: &Chain) -> Result<Chain, HochError> {
    c.try_map_linear(|k| boundary_b_basis(alg, k))
}

pub fn connes_b(alg: &GradedAlgebra, c: &Chain) -> Chain {
    c.map_linear(|k| connes_b_basis(alg, k))
}

/// Reduced Hochschild chains of weight `w` as a validated mixed complex.
#[derive(Clone, Debug)]
pub struct ChainSlice {
    pub weight: u32,
    pub bases: BTreeMap<i32, IndexedBasis<ChainKey>>,
    pub mixed: MixedComplexSlice,
}

impl ChainSlice {
    pub fn basis(&self, d: i32) -> Option<&IndexedBasis<ChainKey>> {
        self.bases.get(&d)
    }
}

pub fn chain_slice(alg: &GradedAlgebra, w: u32) -> Result<ChainSlice, HochError> {
    let bases = chain_basis(alg, w)?;
    let empty = IndexedBasis::default();
    let get = |d: i32| bases.get(&d).unwrap_or(&empty);
    let mut b = BTreeMap::new();
    let mut big_b = BTreeMap::new();
    for (&d, basis) in &bases {
        let mut err = None;
        let m = basis.matrix_of(get(d - 1), |k| {
            boundary_b_basis(alg, k).unwrap_or_else(|e| {
                err = Some(e);
                Chain::zero()
            })
        });
        if let Some(e) = err {
            return Err(e);
        }
        b.insert(d, m);
        big_b.insert(d, basis.matrix_of(get(d + 1), |k| connes_b_basis(alg, k)));
    }
    let dims = bases.iter().map(|(&d, bs)| (d, bs.len())).collect();
    let mixed = MixedComplexSlice::new(format!("hochschild chains, weight {w}"), w as i64, dims, b, big_b)?;
    Ok(ChainSlice { weight: w, bases, mixed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn idx(a: &GradedAlgebra, l: &str) -> usize {
        a.index_of_label(l).unwrap()
    }

    #[test]
    fn boundary_of_zero_chain_vanishes() {
        let a = GradedAlgebra::truncated_polynomial(1, 3);
        assert!(boundary_b_basis(&a, &[2]).unwrap().is_zero());
    }

    #[test]
    fn boundary_example_polynomial() {
        let a = GradedAlgebra::truncated_polynomial(1, 3);
        let (one, x, x2) = (0, idx(&a, "x1"), idx(&a, "x1^2"));
        let got = boundary_b_basis(&a, &[one, x, x]).unwrap();
        let mut want = Chain::zero();
        want.add_term(vec![x, x], q(2));
        want.add_term(vec![one, x2], q(-1));
        assert_eq!(got, want);
    }

    #[test]
    fn connes_examples() {
        let a = GradedAlgebra::truncated_polynomial(1, 3);
        let x = idx(&a, "x1");
        assert!(connes_b_basis(&a, &[0]).is_zero());
        assert_eq!(connes_b_basis(&a, &[x]), Chain::basis(vec![0, x]));
        assert!(connes_b_basis(&a, &[x, x]).is_zero());
    }

    #[test]
    fn mixed_axioms_small_algebras() {
        for a in [GradedAlgebra::exterior(1), GradedAlgebra::exterior(2)] {
            for w in 0..=4 {
                chain_slice(&a, w).unwrap();
            }
        }
        let p = GradedAlgebra::truncated_polynomial(2, 4);
        for w in 0..=4 {
            chain_slice(&p, w).unwrap();
        }
    }

    #[test]
    fn window_is_enforced() {
        let p = GradedAlgebra::truncated_polynomial(1, 2);
        assert_eq!(chain_slice(&p, 3).unwrap_err(), HochError::WindowTooSmall { needed: 3, cutoff: 2 });
    }
}
