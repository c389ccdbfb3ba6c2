use std::sync::OnceLock;

use hochgrav::algebra::{FrobeniusPairing, GradedAlgebra};
use hochgrav::calculus::CalculusModel;
use hochgrav::gravity::{GravityAlgebra, HcElement};
use hochgrav::hochschild::FrobeniusHochschild;
use hochgrav::linalg::{add_scaled, is_zero_vec, q, Matrix, Q};
use hochgrav::poisson::*;
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-3i64..=3, rows * cols).prop_map(move |v| {
        let dense: Vec<Vec<Q>> = v.chunks(cols).map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        Matrix::from_dense(&dense)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity_and_kernel(m in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| matrix(r, c))) {
        let ker = m.kernel_basis();
        prop_assert_eq!(m.rank() + ker.len(), m.cols());
        for v in &ker {
            prop_assert!(is_zero_vec(&m.mul_vec(v).unwrap()));
        }
    }

    #[test]
    fn inverse_is_two_sided(m in (1usize..5).prop_flat_map(|n| matrix(n, n))) {
        match m.inverse() {
            Some(inv) => {
                prop_assert_eq!(inv.mul(&m).unwrap(), Matrix::identity(m.rows()));
                prop_assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(m.rows()));
            }
            None => prop_assert!(m.rank() < m.rows()),
        }
    }
}

fn quadratic(n: usize) -> impl Strategy<Value = QuadraticBivector> {
    let keys: Vec<[usize; 4]> = (0..n)
        .flat_map(|a1| (a1..n).flat_map(move |a2| (0..n).flat_map(move |b1| (b1 + 1..n).map(move |b2| [a1, a2, b1, b2]))))
        .collect();
    prop::collection::vec(-2i64..=2, keys.len()).prop_map(move |cs| {
        QuadraticBivector::from_coefficients(BaseKind::Polynomial, n, keys.iter().zip(cs).map(|(k, c)| (*k, q(c)))).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Every bivector in two variables is Poisson; its slices are mixed and both sides agree on unimodularity.
    #[test]
    fn planar_quadratic_bivectors(pi in quadratic(2)) {
        let base = pi.base();
        let m = PoissonCalculus::new(base.clone(), pi.to_polyvector(), 3).unwrap();
        for w in m.weights() {
            prop_assert!(m.slice(w).unwrap().axiom_report().unwrap().passed());
        }
        let eta = SuperPoly::basis(vec![0, 0, 1, 1]);
        let v = unimodularity_check(&base, &pi.to_polyvector(), &eta, 3).unwrap();
        prop_assert!(v.consistent());
        prop_assert_eq!(v.unimodular(), pi.is_zero());
        let d = pi.dual();
        let dual_eta = SuperPoly::basis(vec![1, 1, 0, 0]);
        let dv = frobenius_poisson_check(&d.base(), &d.to_polyvector(), &dual_eta, 3).unwrap();
        prop_assert_eq!(dv.unimodular(), v.unimodular());
        prop_assert_eq!(dual_bivector(&d), pi);
    }

    /// The coboundary of a Poisson bivector squares to zero, and `π` is a cocycle.
    #[test]
    fn coboundary_squares_to_zero(pi in quadratic(2), t in 0i32..=2, s in -2i64..=1) {
        let m = PoissonCalculus::new(pi.base(), pi.to_polyvector(), 3).unwrap();
        if let (Some(_), Some(_)) = (m.piece_basis((t, s)), m.piece_basis((t + 2, s))) {
            let d1 = m.coboundary_matrix((t + 1, s));
            let d0 = m.coboundary_matrix((t, s));
            prop_assert!(d1.mul(&d0).unwrap().is_zero());
        }
    }
}

fn exterior_model() -> &'static FrobeniusHochschild {
    static M: OnceLock<FrobeniusHochschild> = OnceLock::new();
    M.get_or_init(|| {
        let a = GradedAlgebra::exterior(2);
        let p = FrobeniusPairing::exterior_top(&a);
        FrobeniusHochschild::new(a, p, 3).unwrap()
    })
}

fn random_element(g: &GravityAlgebra<'_, FrobeniusHochschild>, pick: usize, coeffs: &[i64]) -> HcElement {
    let basis = g.basis();
    let key = basis[pick % basis.len()].key;
    let dim = g.block_dim(key);
    HcElement { key, coords: (0..dim).map(|i| q(coeffs[i % coeffs.len()])).collect() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Graded skew-symmetry and bilinearity of the binary bracket on arbitrary block elements.
    #[test]
    fn binary_bracket_skew_and_bilinear(
        i in 0usize..64, j in 0usize..64,
        a in prop::collection::vec(-3i64..=3, 1..4),
        b in prop::collection::vec(-3i64..=3, 1..4),
        c in prop::collection::vec(-3i64..=3, 1..4),
    ) {
        let m = exterior_model();
        let g = GravityAlgebra::new(m).unwrap();
        let x = random_element(&g, i, &a);
        let y = random_element(&g, j, &b);
        let x2 = random_element(&g, i, &c);
        let (Some(xy), Some(yx)) = (g.bracket(&[x.clone(), y.clone()]).unwrap(), g.bracket(&[y.clone(), x.clone()]).unwrap()) else {
            return Ok(());
        };
        let e = (g.degree(x.key) + 1) * (g.degree(y.key) + 1);
        let mut sum = xy.coords.clone();
        add_scaled(&mut sum, &if e % 2 == 0 { q(1) } else { q(-1) }, &yx.coords);
        prop_assert!(is_zero_vec(&sum));
        let mut xs = x.coords.clone();
        add_scaled(&mut xs, &q(1), &x2.coords);
        let (Some(lhs), Some(r2)) = (g.bracket(&[HcElement { key: x.key, coords: xs }, y.clone()]).unwrap(), g.bracket(&[x2, y]).unwrap()) else {
            return Ok(());
        };
        let mut rhs = xy.coords.clone();
        add_scaled(&mut rhs, &q(1), &r2.coords);
        prop_assert_eq!(lhs.coords, rhs);
    }
}
