use hochgrav::algebra::{check_frobenius_pairing, FrobeniusPairing, GradedAlgebra};
use hochgrav::calculus::CalculusModel;
use hochgrav::hochschild::*;
use hochgrav::linalg::HomologyPresentation;
use hochgrav::mixed::{MixedComplexSlice, MixedHomology};
use hochgrav::poisson::{unimodular_log_canonical, BaseKind, PoissonCalculus, QuadraticBivector};

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Monomials `x^α dx_B` in `n` variables with `|B| = p` and `|α| + p = w`.
fn kahler_count(n: u64, p: u64, w: u64) -> u64 {
    if p > w {
        return 0;
    }
    binomial(n, p) * binomial(w - p + n - 1, n - 1)
}

fn test_algebras() -> Vec<(GradedAlgebra, u32)> {
    vec![
        (GradedAlgebra::exterior(1), 4),
        (GradedAlgebra::exterior(2), 4),
        (GradedAlgebra::truncated_polynomial(2, 4), 4),
    ]
}

#[test]
fn mixed_identities_on_every_basis_chain() {
    for (alg, wmax) in test_algebras() {
        for w in 0..=wmax {
            let slice = chain_slice(&alg, w).unwrap();
            for basis in slice.bases.values() {
                for k in basis.keys() {
                    let c = Chain::basis(k.clone());
                    assert!(boundary_b(&alg, &boundary_b(&alg, &c).unwrap()).unwrap().is_zero(), "b^2 on {k:?}");
                    assert!(connes_b(&alg, &connes_b(&alg, &c)).is_zero(), "B^2 on {k:?}");
                    let anti = boundary_b(&alg, &connes_b(&alg, &c)).unwrap() + connes_b(&alg, &boundary_b(&alg, &c).unwrap());
                    assert!(anti.is_zero(), "bB + Bb on {k:?}");
                }
            }
            assert!(slice.mixed.axiom_report().unwrap().passed());
        }
    }
}

fn hochschild_dims(slice: &MixedComplexSlice) -> Vec<(i32, usize)> {
    slice
        .dims()
        .keys()
        .map(|&d| (d, HomologyPresentation::new(&slice.b(d + 1), &slice.b(d)).unwrap().dim()))
        .collect()
}

#[test]
fn hkr_dimensions_for_two_variables() {
    let alg = GradedAlgebra::truncated_polynomial(2, 4);
    for w in 0..=4u32 {
        let slice = chain_slice(&alg, w).unwrap();
        let dims = hochschild_dims(&slice.mixed);
        for p in 0..=4i32 {
            let got = dims.iter().find(|(d, _)| *d == p).map_or(0, |x| x.1) as u64;
            assert_eq!(got, kahler_count(2, p as u64, w as u64), "HH_{p} at weight {w}");
        }
    }
}

#[test]
fn hkr_dimensions_for_one_variable() {
    let alg = GradedAlgebra::truncated_polynomial(1, 5);
    for w in 0..=5u32 {
        let dims = hochschild_dims(&chain_slice(&alg, w).unwrap().mixed);
        let total: usize = dims.iter().map(|x| x.1).sum();
        assert_eq!(total as u64, kahler_count(1, 0, w as u64) + kahler_count(1, 1, w as u64));
    }
}

#[test]
fn exterior_pairings_are_symmetric_frobenius() {
    for n in 1..=3 {
        let alg = GradedAlgebra::exterior(n);
        let p = FrobeniusPairing::exterior_top(&alg);
        let r = check_frobenius_pairing(&alg, &p);
        assert!(r.passed(), "n = {n}: {r:?}");
        assert_eq!(r.triples_checked, alg.dim().pow(3));
        assert!(eta_coboundary_defects(&alg, &p).unwrap().is_empty());
    }
}

fn all_slices() -> Vec<MixedComplexSlice> {
    let mut out = Vec::new();
    for (alg, wmax) in test_algebras() {
        for w in 0..=wmax.min(3) {
            out.push(chain_slice(&alg, w).unwrap().mixed);
        }
    }
    let pi = unimodular_log_canonical(3).remove(0);
    for b in [pi.clone(), pi.dual(), QuadraticBivector::zero(BaseKind::Polynomial, 2)] {
        let m = PoissonCalculus::new(b.base(), b.to_polyvector(), 3).unwrap();
        for w in m.weights() {
            out.push(m.slice(w).unwrap().clone());
        }
    }
    let a = GradedAlgebra::exterior(2);
    let p = FrobeniusPairing::exterior_top(&a);
    let f = FrobeniusHochschild::new(a, p, 3).unwrap();
    for w in f.weights() {
        out.push(f.mixed(w).unwrap().slice().clone());
    }
    out
}

#[test]
fn long_exact_sequence_on_every_slice() {
    for s in all_slices() {
        let mh = MixedHomology::with_default_truncation(s.clone()).unwrap();
        let les = mh.long_exact_sequence_report().unwrap();
        assert!(les.passed(), "{les:?}");
        let st = mh.stabilization_report().unwrap();
        assert!(st.unstable_degrees.is_empty(), "{}: {st:?}", s.label());
    }
}
