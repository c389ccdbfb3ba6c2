use hochgrav::calculus::{basis_classes, check_bv, delta_class, CalculusModel};
use hochgrav::linalg::q;
use hochgrav::poisson::*;

fn three_variable_pi() -> QuadraticBivector {
    let mut ker = unimodular_log_canonical(3);
    assert_eq!(ker.len(), 1);
    ker.remove(0)
}

fn bivector(n: usize, terms: &[([usize; 4], i64)]) -> QuadraticBivector {
    QuadraticBivector::from_coefficients(BaseKind::Polynomial, n, terms.iter().map(|&(k, c)| (k, q(c)))).unwrap()
}

fn models(p: &QuadraticBivector, w: u32) -> (PoissonCalculus, PoissonCalculus) {
    let d = p.dual();
    (
        PoissonCalculus::new(p.base(), p.to_polyvector(), w).unwrap(),
        PoissonCalculus::new(d.base(), d.to_polyvector(), w).unwrap(),
    )
}

fn volume(base: &PoissonBase) -> SuperPoly {
    let n = base.n();
    let mut m = vec![0; 2 * n];
    match base.kind() {
        BaseKind::Polynomial => m[n..].fill(1),
        BaseKind::Exterior => m[..n].fill(1),
    }
    SuperPoly::basis(m)
}

#[test]
fn derived_unimodular_bivector() {
    let p = three_variable_pi();
    let scaled = bivector(3, &[([0, 1, 0, 1], 1), ([0, 2, 0, 2], -1), ([1, 2, 1, 2], 1)]);
    let ratio = p.terms()[&[0, 1, 0, 1]].clone();
    assert_eq!(
        p.to_polyvector(),
        scaled.to_polyvector().scale(&ratio),
        "kernel is spanned by x1x2∂1∂2 - x1x3∂1∂3 + x2x3∂2∂3"
    );
    let base = p.base();
    assert!(base.schouten(&p.to_polyvector(), &p.to_polyvector()).is_zero());
}

#[test]
fn no_nonzero_unimodular_quadratic_bivector_in_two_variables() {
    let base = PoissonBase::polynomial(2);
    for (a, b) in [(0, 0), (0, 1), (1, 1)] {
        let p = bivector(2, &[([a, b, 0, 1], 1)]);
        assert!(!is_divergence_free(&base, &p.to_polyvector()));
    }
    // divergence is injective on x^α ∂1∧∂2 with |α| = 2: each monomial has a distinct leading derivative
    let sum = bivector(2, &[([0, 0, 0, 1], 1), ([0, 1, 0, 1], 1), ([1, 1, 0, 1], 1)]);
    assert!(!is_divergence_free(&base, &sum.to_polyvector()));
    assert!(unimodular_log_canonical(2).is_empty());
}

#[test]
fn bv_suite_on_both_sides() {
    let (a, d) = models(&three_variable_pi(), 4);
    for m in [&a as &dyn CalculusModel, &d] {
        let rep = check_bv(m, &q(-1), usize::MAX).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.seven_term_checked > 300, "{}", rep.seven_term_checked);
        let nontrivial = basis_classes(m)
            .iter()
            .filter(|c| delta_class(m, c).unwrap().is_some_and(|x| !x.is_zero()))
            .count();
        assert!(nontrivial > 0, "{}", m.label());
    }
}

#[test]
fn duality_is_a_chain_map() {
    let (a, d) = models(&three_variable_pi(), 4);
    for m in [&a, &d] {
        for k in m.pieces() {
            let Some(next) = m.pd_matrix((k.0 + 1, k.1)) else { continue };
            let (w, e) = m.dual_location(k);
            let lhs = next.mul(&m.coboundary_matrix(k)).unwrap();
            let rhs = m.slice(w).unwrap().b(e).mul(m.pd_matrix(k).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "{} {k:?}", m.label());
            assert_eq!(m.cohomology_dim(k), m.mixed(w).unwrap().hh_dim(e));
        }
    }
}

#[test]
fn cohomology_dimensions_agree_across_duality() {
    let (a, d) = models(&three_variable_pi(), 4);
    let mut total = 0;
    for k in a.pieces() {
        assert_eq!(a.cohomology_dim(k), d.cohomology_dim((k.0, -k.1)), "{k:?}");
        total += a.cohomology_dim(k);
    }
    assert!(total > 0);
}

#[test]
fn identification_is_natural_and_literal() {
    let (a, d) = models(&three_variable_pi(), 4);
    let id = koszul_poisson_identification(&a, &d).unwrap();
    let rep = id.report();
    assert!(rep.passed(), "{:?}", rep.failures);
    assert!(rep.coboundary_checked > 0 && rep.boundary_checked > 0 && rep.de_rham_checked > 0);
    // x1 as a 0-form goes to the functional dual to dξ1, and the volume to the volume
    assert_eq!(id.psi(1, 0).unwrap().get(0, 0), q(1));
    assert_eq!(id.psi(3, 3).unwrap().to_dense(), vec![vec![q(1)]]);
    // on polyvectors x1 ↦ ∂/∂ξ1
    let base = a.base();
    let x1 = base.function(0);
    assert_eq!(phi_polyvector(3, &x1), d.base().partial(0));
    assert_eq!(phi_polyvector(3, &base.partial(0)), d.base().function(0).scale(&q(-1)));
}

#[test]
fn phi_is_a_gerstenhaber_isomorphism() {
    let p = three_variable_pi();
    let (a, e) = (p.base(), p.dual().base());
    let gens: Vec<SuperPoly> = (0..3).flat_map(|i| [a.function(i), a.partial(i)]).collect();
    let mut samples = gens.clone();
    for x in &gens {
        for y in &gens {
            samples.push(a.wedge(x, y));
        }
    }
    for x in &samples {
        for y in &samples {
            assert_eq!(phi_polyvector(3, &a.wedge(x, y)), e.wedge(&phi_polyvector(3, x), &phi_polyvector(3, y)));
            assert_eq!(phi_polyvector(3, &a.schouten(x, y)), e.schouten(&phi_polyvector(3, x), &phi_polyvector(3, y)));
        }
    }
}

#[test]
fn unimodularity_equivalence() {
    let cases = [
        (three_variable_pi(), true),
        (bivector(2, &[([0, 1, 0, 1], 1)]), false),
        (bivector(2, &[([0, 0, 0, 1], 1)]), false),
        (QuadraticBivector::zero(BaseKind::Polynomial, 2), true),
    ];
    for (p, expected) in cases {
        let base = p.base();
        let primal = unimodularity_check(&base, &p.to_polyvector(), &volume(&base), 4).unwrap();
        let dual = p.dual();
        let dbase = dual.base();
        let frob = frobenius_poisson_check(&dbase, &dual.to_polyvector(), &volume(&dbase), 4).unwrap();
        assert!(primal.consistent() && frob.consistent(), "{primal:?} {frob:?}");
        assert_eq!(primal.unimodular(), expected, "{}", p.display());
        assert_eq!(frob.unimodular(), expected, "{}", dual.display());
        assert_eq!(primal.divergence_free, Some(expected));
    }
}

#[test]
fn volume_must_be_nondegenerate() {
    let base = PoissonBase::polynomial(2);
    let pi = bivector(2, &[([0, 1, 0, 1], 1)]).to_polyvector();
    let bad = base.form_product(&base.coordinate(0), &volume(&base));
    assert!(matches!(unimodularity_check(&base, &pi, &bad, 3), Err(PoissonError::NotVolume(_))));
    let ext = PoissonBase::exterior(2);
    let half = SuperPoly::basis(vec![1, 0, 0, 0]);
    assert!(matches!(frobenius_poisson_check(&ext, &SuperPoly::zero(), &half, 3), Err(PoissonError::NotVolume(_))));
}

#[test]
fn slices_are_mixed_for_tested_bivectors() {
    for p in [
        bivector(2, &[([0, 1, 0, 1], 1)]),
        bivector(2, &[([0, 0, 0, 1], 1)]),
        bivector(2, &[([0, 0, 0, 1], 2), ([0, 1, 0, 1], -3), ([1, 1, 0, 1], 5)]),
        QuadraticBivector::zero(BaseKind::Polynomial, 2),
    ] {
        // construction checks b² = 0, B² = 0 and bB + Bb = 0 on every slice
        let (a, d) = models(&p, 4);
        assert_eq!(a.weights(), (0..=4).collect::<Vec<_>>());
        assert_eq!(d.weights(), (0..=4).collect::<Vec<_>>());
    }
}

#[test]
fn zero_bracket_homology_is_all_forms() {
    let p = QuadraticBivector::zero(BaseKind::Polynomial, 2);
    let (a, _) = models(&p, 4);
    for w in 0..=4i64 {
        let m = a.mixed(w).unwrap();
        for d in 0..=2 {
            assert_eq!(m.hh_dim(d), form_piece(a.base(), w, d as i64).len());
        }
    }
}

#[test]
fn non_poisson_bivector_is_refused() {
    let base = PoissonBase::polynomial(3);
    let v = base.vectors();
    let mut pi = v.mul(&v.mul(&base.function(0), &base.function(1)), &v.mul(&base.partial(1), &base.partial(2)));
    pi.add_scaled(&q(1), &v.mul(&v.mul(&base.function(2), &base.function(2)), &v.mul(&base.partial(0), &base.partial(1))));
    assert!(!base.schouten(&pi, &pi).is_zero());
    assert!(matches!(PoissonCalculus::new(base, pi, 3), Err(PoissonError::NotPoisson(_))));
}

#[test]
fn dual_bivector_examples() {
    let p = bivector(2, &[([0, 1, 0, 1], 1)]);
    let d = dual_bivector(&p);
    let e = d.base();
    let v = e.vectors();
    let expected = v.mul(&v.mul(&e.function(0), &e.function(1)), &v.mul(&e.partial(0), &e.partial(1)));
    assert_eq!(d.to_polyvector(), expected);
    assert_eq!(dual_bivector(&d), p);
    assert!(dual_bivector(&QuadraticBivector::zero(BaseKind::Polynomial, 2)).is_zero());
}
