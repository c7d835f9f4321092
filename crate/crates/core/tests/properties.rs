//! Property tests for the invariants that hold across whole parameter
//! families, with shrinkable random inputs.

use proptest::prelude::*;

use conformon::elliptic::{complete_k, jacobi_sn_cn_dn};
use conformon::quantum::{exact_energy, potential_minimum, schrodinger_residual};
use conformon::rod::{
    check_sigma_inequality, torsion_from_twist, CaseId, CurvatureProfile, RodMaterial,
    SolutionCase,
};
use conformon::Modulus;

fn lattice_strategy() -> impl Strategy<Value = CurvatureProfile> {
    (0.0..=1.0f64, -1.5..1.5f64, 0.05..3.0f64, -2.0..2.0f64).prop_map(|(kappa, tau0, gap, v)| {
        CurvatureProfile::conformon_lattice(
            Modulus::new(kappa).unwrap(),
            tau0 * tau0 + gap,
            tau0,
            v,
        )
        .unwrap()
    })
}

proptest! {
    #[test]
    fn fundamental_identities_hold(s in -25.0..25.0f64, kappa in 0.0..=1.0f64) {
        let (sn, cn, dn) = jacobi_sn_cn_dn(s, Modulus::new(kappa).unwrap());
        prop_assert!((sn * sn + cn * cn - 1.0).abs() < 1e-12);
        prop_assert!((dn * dn + kappa * kappa * sn * sn - 1.0).abs() < 1e-12);
        prop_assert!((0.0..=1.0 + 1e-15).contains(&dn));
    }

    #[test]
    fn dn_is_periodic(s in -20.0..20.0f64, kappa in 0.0..0.999f64) {
        let modulus = Modulus::new(kappa).unwrap();
        let period = 2.0 * complete_k(modulus).unwrap();
        let a = jacobi_sn_cn_dn(s, modulus).2;
        let b = jacobi_sn_cn_dn(s + period, modulus).2;
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn curvature_solves_its_equation(profile in lattice_strategy(), s in -12.0..12.0f64) {
        prop_assert!(profile.ode_residual(s).abs() < 1e-9);
        prop_assert!(schrodinger_residual(&profile, s).abs() < 1e-9);
    }

    #[test]
    fn energy_sits_between_zero_and_potential_floor(profile in lattice_strategy()) {
        let e = exact_energy(&profile);
        let vmin = potential_minimum(&profile);
        prop_assert!(e < 0.0);
        prop_assert!(e >= vmin - 1e-12);
    }

    #[test]
    fn torsion_ratio_inequality_for_case_i(
        a in 0.01..=1.0f64,
        sigma in -0.99..0.5f64,
        k3_0 in prop::sample::select(vec![-2.5, -0.7, 0.3, 1.9]),
    ) {
        let mat = RodMaterial::new(a, sigma, k3_0).unwrap();
        let case = SolutionCase::new(CaseId::I, 0).unwrap();
        prop_assume!(torsion_from_twist(&mat, case).is_ok());
        let tau0 = torsion_from_twist(&mat, case).unwrap();
        prop_assert!(check_sigma_inequality(&mat, tau0).unwrap());
    }
}
