mod common;

use common::*;
use proptest::prelude::*;
use sasaki7_core::clifford::CliffordRep;

fn q() -> impl Strategy<Value = Q> {
    (NUMERATORS, DENOMINATORS)
}

fn qs(n: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec(q(), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn exterior_algebra_axioms(
        degrees in (0usize..=3, 0usize..=3, 0usize..=2),
        a in qs(FORM_COEFFS), b in qs(FORM_COEFFS), c in qs(FORM_COEFFS), v in qs(7),
    ) {
        prop_assert_eq!(exterior_axioms(degrees, &a, &b, &c, &v), Ok(()));
    }

    #[test]
    fn hodge_star_is_an_involution(k in 0usize..=7, a in qs(FORM_COEFFS), t in (1i64..=6, 1i64..=6)) {
        prop_assert_eq!(hodge_involution(k, &a, t), Ok(()));
    }

    #[test]
    fn clifford_generators_anticommute(u in qs(7), v in qs(7), psi in qs(8)) {
        prop_assert_eq!(clifford_anticommutation(&CliffordRep::build(), &u, &v, &psi), Ok(()));
    }

    #[test]
    fn spin_lift_is_a_homomorphism(a in qs(21), b in qs(21)) {
        prop_assert_eq!(spin_lift_homomorphism(&CliffordRep::build(), &a, &b), Ok(()));
    }

    #[test]
    fn invariant_d_squares_to_zero(degrees in (0usize..=5, 0usize..=2), a in qs(FORM_COEFFS), b in qs(FORM_COEFFS)) {
        prop_assert_eq!(d_squared(&sphere(), degrees, &a, &b), Ok(()));
    }

    #[test]
    fn sp2_satisfies_jacobi(x in qs(10), y in qs(10), z in qs(10)) {
        prop_assert_eq!(jacobi(&sphere(), &x, &y, &z), Ok(()));
    }
}

#[test]
fn invariant_form_dimensions() {
    let space = sphere();
    let dims: Vec<usize> = (0..=7).map(|k| invariant_forms(&space, k).len()).collect();
    // Λ*(R³) ⊗ Λ*(H)^Sp(1), where the Sp(1)-invariants of Λ*(H) have dims 1, 0, 3, 0, 1
    assert_eq!(dims, vec![1, 3, 6, 10, 10, 6, 3, 1]);
}
