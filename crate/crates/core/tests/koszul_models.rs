use std::collections::BTreeMap;

use hochgrav::hochschild::{bar_cohomology_dim, chain_slice};
use hochgrav::koszul::{is_koszul, koszul_dual_algebra, small_hochschild_models, KoszulError, QuadraticPresentation, SmallModels};
use hochgrav::linalg::{q, HomologyPresentation, Q};
use hochgrav::algebra::GradedAlgebra;
use num::Zero;

fn bar_homology_dims(alg: &GradedAlgebra, w: u32) -> BTreeMap<i32, usize> {
    let cs = chain_slice(alg, w).unwrap();
    cs.mixed
        .dims()
        .keys()
        .map(|&d| {
            let h = HomologyPresentation::new(&cs.mixed.b(d + 1), &cs.mixed.b(d)).unwrap();
            (d, h.dim())
        })
        .filter(|(_, h)| *h > 0)
        .collect()
}

fn nonzero(m: BTreeMap<i32, usize>) -> BTreeMap<i32, usize> {
    m.into_iter().filter(|(_, v)| *v > 0).collect()
}

/// `x1 x2 = c x2 x1`.
fn quantum_plane(c: i64) -> QuadraticPresentation {
    let mut r = vec![Q::zero(); 4];
    r[1] = q(1);
    r[2] = q(-c);
    QuadraticPresentation::new(vec!["x1".into(), "x2".into()], vec![0, 0], vec![r]).unwrap()
}

fn check_chains(m: &SmallModels, wmax: u32) {
    for w in 0..=wmax {
        let small = nonzero(m.homology_dims(w).unwrap());
        let bar = bar_homology_dims(m.data.source.algebra(), w);
        assert_eq!(small, bar, "weight {w}");
    }
}

#[test]
fn chains_agree_polynomial_and_exterior() {
    check_chains(&small_hochschild_models(&QuadraticPresentation::polynomial(2), 4).unwrap(), 4);
    check_chains(&small_hochschild_models(&QuadraticPresentation::exterior(2), 4).unwrap(), 4);
}

#[test]
fn chains_agree_quantum_plane_and_its_dual() {
    let p = quantum_plane(2);
    check_chains(&small_hochschild_models(&p, 4).unwrap(), 4);
    check_chains(&small_hochschild_models(&p.dual(), 4).unwrap(), 4);
}

fn check_cochains(pres: &QuadraticPresentation, cutoff: u32) {
    let m = small_hochschild_models(pres, cutoff).unwrap();
    let alg = m.data.source.algebra();
    assert!(m.data.source.is_finite());
    for s in -(cutoff as i64)..=2 {
        for (t, dim) in m.cohomology_dims(s).unwrap() {
            let q = (t as i64 - s).max(0) as usize;
            assert_eq!(dim, bar_cohomology_dim(alg, t, s, q).unwrap(), "t={t} s={s}");
        }
    }
}

#[test]
fn cochains_agree_exterior() {
    check_cochains(&QuadraticPresentation::exterior(2), 4);
}

#[test]
fn cochains_agree_quantum_exterior() {
    check_cochains(&quantum_plane(2).dual(), 4);
}

#[test]
fn dual_data_sizes() {
    let d = koszul_dual_algebra(&quantum_plane(3), 3).unwrap();
    assert_eq!(d.source.dim(3), Some(4));
    assert_eq!(d.dual.dim(2), Some(1));
}

fn hilbert_product(pres: &QuadraticPresentation, wmax: usize) -> Vec<i64> {
    let d = koszul_dual_algebra(pres, wmax as u32).unwrap();
    (0..=wmax)
        .map(|w| {
            (0..=w)
                .map(|j| {
                    let s = if j % 2 == 0 { 1 } else { -1 };
                    s * (d.source.dim(w - j).unwrap() * d.dual.dim(j).unwrap()) as i64
                })
                .sum()
        })
        .collect()
}

#[test]
fn koszul_verdicts_match_hilbert_series() {
    for p in [QuadraticPresentation::polynomial(3), QuadraticPresentation::exterior(3), quantum_plane(5)] {
        let v = is_koszul(&koszul_dual_algebra(&p, 4).unwrap()).unwrap();
        assert_eq!(v.koszul_up_to(), 4);
        assert_eq!(hilbert_product(&p, 4), vec![1, 0, 0, 0, 0]);
    }
    let bad = QuadraticPresentation::non_koszul_example();
    let v = is_koszul(&koszul_dual_algebra(&bad, 4).unwrap()).unwrap();
    assert_eq!(v.first_failure(), Some(4));
    assert_eq!(v.koszul_up_to(), 3);
    assert_ne!(hilbert_product(&bad, 4)[4], 0);
    assert!(matches!(small_hochschild_models(&bad, 4), Err(KoszulError::NotKoszul(4))));
}

#[test]
fn one_variable_matches_exterior_on_one_generator() {
    let m = small_hochschild_models(&QuadraticPresentation::polynomial(1), 5).unwrap();
    assert_eq!(nonzero(m.homology_dims(0).unwrap()), BTreeMap::from([(0, 1)]));
    for w in 1..=5 {
        assert_eq!(nonzero(m.homology_dims(w).unwrap()), BTreeMap::from([(0, 1), (1, 1)]));
    }
    let ext = GradedAlgebra::exterior(1);
    for i in 0..=3i32 {
        for w in 0..=4i64 {
            let poly = m.cohomology_dims(w - i as i64).unwrap().get(&i).copied().unwrap_or(0);
            let dual = bar_cohomology_dim(&ext, i, i as i64 - w, w as usize).unwrap();
            assert_eq!(poly, dual, "i={i} w={w}");
        }
    }
}

/// `HH^i` of `A` in output weight `w` against `HH^i` of `A^!` in arity `w`.
#[test]
fn cohomology_of_a_and_its_dual_agree() {
    let m = small_hochschild_models(&QuadraticPresentation::polynomial(2), 5).unwrap();
    let ext = GradedAlgebra::exterior(2);
    let mut nonzero_pieces = 0;
    for i in 0..=3i32 {
        for w in 0..=4i64 {
            let poly = m.cohomology_dims(w - i as i64).unwrap();
            let poly = poly.get(&i).copied().unwrap_or(0);
            let dual = bar_cohomology_dim(&ext, i, i as i64 - w, w as usize).unwrap();
            assert_eq!(poly, dual, "i={i} w={w}");
            let polyvectors = [1, 2, 1, 0][i as usize] * (w as usize + 1);
            assert_eq!(poly, polyvectors);
            nonzero_pieces += (poly > 0) as usize;
        }
    }
    assert_eq!(nonzero_pieces, 15);
}
