use std::collections::BTreeMap;

use hochgrav::algebra::{FrobeniusPairing, GradedAlgebra};
use hochgrav::calculus::CalculusModel;
use hochgrav::gravity::*;
use hochgrav::hochschild::FrobeniusHochschild;
use hochgrav::linalg::{q, solve_in_span, Q};
use hochgrav::poisson::*;
use num::Zero;

fn exterior_two(w: u32) -> FrobeniusHochschild {
    let a = GradedAlgebra::exterior(2);
    let p = FrobeniusPairing::exterior_top(&a);
    FrobeniusHochschild::new(a, p, w).unwrap()
}

fn unimodular_pair(w: u32) -> (PoissonCalculus, PoissonCalculus) {
    let pi = unimodular_log_canonical(3).remove(0);
    let d = pi.dual();
    (
        PoissonCalculus::new(pi.base(), pi.to_polyvector(), w).unwrap(),
        PoissonCalculus::new(d.base(), d.to_polyvector(), w).unwrap(),
    )
}

fn zero_pair(n: usize, w: u32) -> (PoissonCalculus, PoissonCalculus) {
    let z = QuadraticBivector::zero(BaseKind::Polynomial, n);
    let d = z.dual();
    (
        PoissonCalculus::new(z.base(), z.to_polyvector(), w).unwrap(),
        PoissonCalculus::new(d.base(), d.to_polyvector(), w).unwrap(),
    )
}

fn assert_axioms<M: CalculusModel + Sync>(m: &M) -> GravityReport {
    let g = GravityAlgebra::new(m).unwrap();
    let r = verify_gravity_axioms(&g, 4, 5, JacobiSigns::SignedUnshuffle).unwrap();
    assert!(r.passed(), "{r:#?}");
    assert!(r.skew_checked > 0 && r.binary_jacobi_checked > 0);
    for key in ["n=3,m=0", "n=3,m=1", "n=4,m=0", "n=2,m=3", "n=5,m=0"] {
        assert!(r.jacobi_checked.get(key).copied().unwrap_or(0) > 0, "{key} never exercised");
    }
    r
}

#[test]
fn exterior_frobenius_gravity_axioms() {
    let r = assert_axioms(&exterior_two(3));
    assert!(r.higher_nontrivial);
}

#[test]
fn unimodular_poisson_gravity_axioms_on_both_sides() {
    let (p, d) = unimodular_pair(4);
    let a = assert_axioms(&p);
    let b = assert_axioms(&d);
    assert!(a.higher_nontrivial && b.higher_nontrivial);
    assert_eq!(a.nonzero_brackets, b.nonzero_brackets);
}

#[test]
fn koszul_signs_alone_break_jacobi() {
    let m = exterior_two(2);
    let g = GravityAlgebra::new(&m).unwrap();
    let r = verify_gravity_axioms(&g, 3, 3, JacobiSigns::KoszulOnly).unwrap();
    assert!(r.skew_failures.is_empty());
    assert!(r.binary_jacobi_failures > 0);
    let (p, _) = unimodular_pair(3);
    let g = GravityAlgebra::new(&p).unwrap();
    let r = verify_gravity_axioms(&g, 3, 3, JacobiSigns::KoszulOnly).unwrap();
    assert!(r.binary_jacobi_failures > 0);
}

#[test]
fn identification_intertwines_brackets() {
    for (p, d) in [unimodular_pair(4), zero_pair(2, 4)] {
        let id = koszul_poisson_identification(&p, &d).unwrap();
        assert!(id.report().passed());
        let iso = induced_iso(&p, &d, |w, e| id.psi(w, e).cloned()).unwrap();
        let (g1, g2) = (GravityAlgebra::new(&p).unwrap(), GravityAlgebra::new(&d).unwrap());
        let r = compare_across_iso(&g1, &g2, &iso, 4).unwrap();
        assert!(r.matches() && r.checked > 0, "{r:?}");
        let flipped: BTreeMap<_, _> = iso.iter().map(|(k, m)| (*k, m.scale(&q(-1)))).collect();
        let r = compare_across_iso(&g1, &g2, &flipped, 4).unwrap();
        assert!(r.mismatch_count > 0);
        let ident: BTreeMap<_, _> = iso.iter().map(|(k, m)| (*k, hochgrav::linalg::Matrix::identity(m.rows()))).collect();
        assert!(compare_across_iso(&g1, &g1, &ident, 3).unwrap().matches());
    }
}

#[test]
fn singular_iso_is_refused() {
    let (p, d) = zero_pair(2, 2);
    let id = koszul_poisson_identification(&p, &d).unwrap();
    let mut iso = induced_iso(&p, &d, |w, e| id.psi(w, e).cloned()).unwrap();
    let k = *iso.keys().next().unwrap();
    let m = iso[&k].scale(&Q::zero());
    iso.insert(k, m);
    let (g1, g2) = (GravityAlgebra::new(&p).unwrap(), GravityAlgebra::new(&d).unwrap());
    assert!(matches!(compare_across_iso(&g1, &g2, &iso, 2), Err(GravityError::NotInvertible(_))));
}

/// The `HC^-` class in degree `d` of weight `w` whose `π_*` is the class of the given form.
fn class_of_form(m: &PoissonCalculus, w: i64, d: i32, form: &SuperPoly) -> HcElement {
    let mh = m.mixed(w).unwrap();
    let basis = form_piece(m.base(), w, d as i64);
    let target = mh.hh(d).unwrap().reduce(&basis.coords(form).unwrap()).unwrap();
    let pi = mh.pi_star_matrix(d).unwrap();
    let cols: Vec<Vec<Q>> = (0..pi.cols()).map(|j| pi.column(j)).collect();
    let coords = solve_in_span(&cols, &target).unwrap().expect("form class lies in the image of π_*");
    HcElement { key: HcKey { weight: w, degree: d }, coords }
}

fn form(coeff: i64, x: u32, dx: u32) -> SuperPoly {
    SuperPoly::single(vec![x, dx], q(coeff))
}

/// On `k[x]` with `π = 0`, `PD^{-1}(1) = -∂`, `PD^{-1}(f dx) = f`, and `β` is `d`, so
/// `{1, x^{q-1} dx} = -(q-1) x^{q-2} dx`, `{x^{q-1} dx, 1} = (q-1) x^{q-2} dx`, and
/// brackets of two 1-forms vanish.
#[test]
fn zero_bivector_on_a_line_matches_hand_expansion() {
    let z = QuadraticBivector::zero(BaseKind::Polynomial, 1);
    let m = PoissonCalculus::new(z.base(), z.to_polyvector(), 4).unwrap();
    let g = GravityAlgebra::new(&m).unwrap();
    let one = class_of_form(&m, 0, 0, &form(1, 0, 0));
    for qd in 2..=4u32 {
        let x = class_of_form(&m, qd as i64, 1, &form(1, qd - 1, 1));
        let expected = class_of_form(&m, qd as i64 - 1, 1, &form(qd as i64 - 1, qd - 2, 1));
        let left = g.bracket(&[one.clone(), x.clone()]).unwrap().unwrap();
        let right = g.bracket(&[x.clone(), one.clone()]).unwrap().unwrap();
        assert_eq!(right, expected);
        assert_eq!(left, expected.scale(&q(-1)));
        for p in 1..=(5 - qd) {
            let y = class_of_form(&m, p as i64, 1, &form(1, p - 1, 1));
            if let Some(b) = g.bracket(&[x.clone(), y]).unwrap() {
                assert!(b.is_zero());
            }
        }
    }
    assert!(g.bracket(&[one.clone(), one]).unwrap().is_none_or(|b| b.is_zero()));
}

#[test]
fn brackets_with_a_kernel_factor_vanish() {
    let m = exterior_two(3);
    let g = GravityAlgebra::new(&m).unwrap();
    let live = g.live();
    for (i, e) in g.basis().iter().enumerate() {
        if live.contains(&i) {
            continue;
        }
        assert!(g.prepare(e).unwrap().is_none());
        for &j in &live {
            if let Some(b) = g.bracket(&[e.clone(), g.element(j).clone()]).unwrap() {
                assert!(b.is_zero());
            }
        }
    }
}

#[test]
fn odd_shifted_self_brackets_vanish() {
    let (p, _) = unimodular_pair(4);
    let g = GravityAlgebra::new(&p).unwrap();
    for i in g.live() {
        let k = g.element(i).key;
        if g.degree(k) % 2 == 0 {
            if let Some(b) = g.bracket_basis(&[i, i]).unwrap() {
                assert!(b.is_zero(), "{k:?}");
            }
        }
    }
}

#[test]
fn binary_bracket_projects_to_connes_operator_on_products() {
    let m = exterior_two(3);
    let g = GravityAlgebra::new(&m).unwrap();
    let mut seen = 0;
    for &a in &g.live() {
        for &b in &g.live() {
            let Some(br) = g.bracket_basis(&[a, b]).unwrap() else { continue };
            let (x, y) = (g.element(a), g.element(b));
            let hh = |e: &HcElement| {
                let mh = m.mixed(e.key.weight).unwrap();
                let v = mh.pi_star(e.key.degree, &e.coords).unwrap();
                let k = m.piece_at(e.key.weight, e.key.degree);
                (k, m.pd_inverse(e.key.weight, e.key.degree, &mh.hh(e.key.degree).unwrap().lift(&v)).unwrap())
            };
            let ((ka, ca), (kb, cb)) = (hh(x), hh(y));
            let Some((k, prod)) = m.cup(ka, &ca, kb, &cb).unwrap() else { continue };
            let (w, d) = m.dual_location(k);
            let mh = m.mixed(w).unwrap();
            let class = mh.hh(d).unwrap().reduce(&m.pd(k, &prod).unwrap()).unwrap();
            let mut expected = mh.big_b_on_hh(d, &class).unwrap();
            if g.degree(x.key) % 2 != 0 {
                expected.iter_mut().for_each(|c| *c = -c.clone());
            }
            assert_eq!(mh.pi_star(d + 1, &br.coords).unwrap(), expected);
            seen += 1;
        }
    }
    assert!(seen > 0);
}

#[test]
fn tables_are_reproducible() {
    let m = exterior_two(2);
    let g = GravityAlgebra::new(&m).unwrap();
    let a = gravity_table(&g, 3).unwrap();
    let b = gravity_table(&GravityAlgebra::new(&exterior_two(2)).unwrap(), 3).unwrap();
    assert_eq!(a, b);
    assert!(!a.entries[&2].is_empty());
}
