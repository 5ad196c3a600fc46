use num_traits::{One, Zero};
use proptest::prelude::*;

use super::*;
use crate::fan::pl::{default_submodular, submodular_to_class};
use crate::fan::{OrderFilter, RayLabel};
use crate::flips::ring_with_degree;
use crate::linalg::{identity, q};
use crate::matroid::{catalog, Matroid};
use crate::subset::Subset;

fn default_class(ring: &ChowRing) -> ChowElement {
    let m = ring.matroid();
    ring.linear(&submodular_to_class(m, default_submodular(m.size())).unwrap())
}

#[test]
fn lefschetz_matrices() {
    let b3 = ChowRing::of_matroid(&Matroid::boolean(3).unwrap()).unwrap();
    let ell = default_class(&b3);
    assert_eq!(lefschetz_matrix(&b3, &ell, 1), identity(4));
    let l0 = lefschetz_matrix(&b3, &ell, 0);
    assert_eq!(l0.len(), 1);
    assert!(b3.degree(&b3.power(&ell, 2)).unwrap().is_positive());
    let fano = ChowRing::of_matroid(&catalog::fano()).unwrap();
    let l0 = lefschetz_matrix(&fano, &default_class(&fano), 0);
    assert!(!l0[0][0].is_zero());
}

#[test]
fn boolean_three_signature() {
    let b3 = ChowRing::of_matroid(&Matroid::boolean(3).unwrap()).unwrap();
    let ell = default_class(&b3);
    let form = hodge_riemann_form(&b3, &ell, 1).unwrap();
    assert_eq!(form.signature, (3, 1, 0));
    assert_eq!(expected_signature(&[1, 4, 1], 1), (3, 1, 0));
    let q0 = hodge_riemann_form(&b3, &ell, 0).unwrap();
    assert!(q0.gram[0][0].is_positive());
    // ℓ = 0 in degree 0 of a rank-3 ring gives the zero form
    let zero = hodge_riemann_form(&b3, &ChowElement::zero(1), 0).unwrap();
    assert_eq!(zero.signature, (0, 0, 1));
    assert!(zero.gram[0][0].is_zero());
}

#[test]
fn default_class_satisfies_hl_and_hr_on_the_catalog() {
    for name in ["u23", "u24", "u34", "boolean3", "boolean4", "k4", "fano", "nonfano", "vamos"] {
        let m = catalog::get(name).unwrap();
        let ring = ChowRing::of_matroid(&m).unwrap();
        let ell = submodular_to_class(&m, default_submodular(m.size())).unwrap();
        let report = certify(&ring, &ell, name, "default", false).unwrap();
        assert!(report.ample);
        let h = ring.hilbert_function();
        for level in &report.levels {
            assert!(level.hl && level.hr && level.primitive_positive, "{name} {level:?}");
            let prev = if level.q == 0 { 0 } else { h[level.q - 1] };
            assert_eq!(level.primitive_dim, h[level.q] - prev);
        }
    }
}

#[test]
fn intermediate_filter_hr() {
    let m = catalog::fano();
    let filter = OrderFilter::rank_at_least(&m, 2);
    let ring = ring_with_degree(&m, &filter).unwrap();
    let ell = submodular_to_class(&m, default_submodular(7)).unwrap();
    let report = certify(&ring, &ell, "fano", "default", false).unwrap();
    assert!(report.hl() && report.hr());
}

#[test]
fn non_ample_class_is_rejected_unless_nef_only() {
    let m = catalog::get("u34").unwrap();
    let ring = ChowRing::of_matroid(&m).unwrap();
    // α is nef but not ample
    let mut alpha = PlFunction::new();
    for f in m.lattice().proper_flats() {
        if f.contains(0) {
            alpha.set(RayLabel::Flat(f), Q::one());
        }
    }
    assert!(matches!(certify(&ring, &alpha, "u34", "alpha", false), Err(Error::NotAmple(_))));
    let report = certify(&ring, &alpha, "u34", "alpha", true).unwrap();
    assert!(!report.ample);
    let mut bad = PlFunction::new();
    bad.set(RayLabel::Flat(Subset::singleton(0)), -Q::one());
    assert!(certify(&ring, &bad, "u34", "bad", true).is_err());
}

#[test]
fn verdicts_do_not_depend_on_the_ample_class() {
    for name in ["u34", "fano", "boolean4"] {
        let m = catalog::get(name).unwrap();
        let n = m.size();
        let ring = ChowRing::of_matroid(&m).unwrap();
        let a = submodular_to_class(&m, default_submodular(n)).unwrap();
        let b = submodular_to_class(&m, |s: Subset| q((1i64 << n) - (1i64 << (n - s.len())))).unwrap();
        let ra = certify(&ring, &a, name, "a", false).unwrap();
        let rb = certify(&ring, &b, name, "b", false).unwrap();
        assert_ne!(ring.linear(&a), ring.linear(&b));
        for (x, y) in ra.levels.iter().zip(&rb.levels) {
            assert_eq!((x.hl, x.hr, x.signature), (y.hl, y.hr, y.signature));
        }
    }
}

#[test]
fn lefschetz_decomposition_is_orthogonal() {
    let ring = ChowRing::of_matroid(&Matroid::boolean(4).unwrap()).unwrap();
    let ell = default_class(&ring);
    let form = hodge_riemann_form(&ring, &ell, 1).unwrap();
    assert!(form.is_symmetric());
    let dim = ring.dim(1);
    let ell_row = ring.coordinates(&ell);
    for p in primitive_basis(&ring, &ell, 1) {
        let value: Q = (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))).map(|(i, j)| &p[i] * &form.gram[i][j] * &ell_row[j]).sum();
        assert!(value.is_zero());
    }
}

#[test]
fn product_oracle() {
    assert_eq!(product_matrix(1, 1, 0), vec![vec![q(2)]]);
    assert_eq!(product_matrix(2, 2, 1), vec![vec![q(1), q(2)], vec![q(2), q(1)]]);
    assert!(determinant(&product_matrix(2, 2, 1)).is_negative());
    for r2 in 0..=6 {
        for r1 in 0..=r2 {
            for qq in 0..=r1 {
                assert!(product_hr_oracle(r1, r2, qq), "{r1} {r2} {qq}");
            }
        }
    }
}

#[test]
fn nef_inequality() {
    let fano = ChowRing::of_matroid(&catalog::fano()).unwrap();
    let (a, b) = (fano.alpha(0), fano.beta(0));
    assert!(nef_degree_inequality(&fano, &a, &b).unwrap());
    assert_eq!(fano.degree(&fano.product(&[a.clone(), a.clone()])).unwrap(), q(1));
    assert_eq!(fano.degree(&fano.product(&[b.clone(), b.clone()])).unwrap(), q(8));
    let u34 = ChowRing::of_matroid(&catalog::get("u34").unwrap()).unwrap();
    let (a, b) = (u34.alpha(0), u34.beta(0));
    assert!(nef_degree_inequality(&u34, &a, &b).unwrap());
    assert_eq!(u34.degree(&u34.product(&[b.clone(), b.clone()])).unwrap(), q(3));
    let ell = default_class(&u34);
    assert!(nef_degree_inequality(&u34, &ell, &ell).unwrap());
    let u23 = ChowRing::of_matroid(&catalog::get("u23").unwrap()).unwrap();
    assert!(matches!(
        nef_degree_inequality(&u23, &u23.alpha(0), &u23.alpha(0)),
        Err(Error::RankTooSmall { .. })
    ));
}

fn symmetric(n: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(-3i64..4, n * n).prop_map(move |v| {
        (0..n).map(|i| (0..n).map(|j| q(v[i.min(j) * n + i.max(j)])).collect()).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn congruence_signature_matches_descartes(a in (1usize..6).prop_flat_map(symmetric)) {
        prop_assert_eq!(symmetric_signature(&a), signature_by_descartes(&a));
    }
}
