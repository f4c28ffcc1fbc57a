//! Property-based invariants over randomly drawn family members and data.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use proptest::prelude::*;

use twomode::fock::{FockState, MomentTable};
use twomode::states::{self, band_structure, schmidt_profile, StateSpec};
use twomode::survey::io;

fn xi_strategy() -> impl Strategy<Value = C64> {
    (0.0..0.7f64, 0.0..TAU).prop_map(|(modulus, arg)| C64::from_polar(modulus, arg))
}

fn r_strategy() -> impl Strategy<Value = C64> {
    (0.2..3.0f64, 0.0..TAU).prop_map(|(modulus, arg)| C64::from_polar(modulus, arg))
}

fn tmsn_strategy() -> impl Strategy<Value = StateSpec> {
    (0..=3u32, 0..=3u32, xi_strategy()).prop_map(|(photons_a, photons_b, xi)| StateSpec::Tmsn {
        photons_a,
        photons_b,
        xi,
    })
}

fn bsn_strategy() -> impl Strategy<Value = StateSpec> {
    (0..=4u32, 0..=4u32, r_strategy()).prop_map(|(photons_a, photons_b, r)| StateSpec::Bsn {
        photons_a,
        photons_b,
        r,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tmsn_support_on_diagonal_band(spec in tmsn_strategy()) {
        let state = states::build(&spec, 0).unwrap();
        let StateSpec::Tmsn { photons_a, photons_b, .. } = spec else { unreachable!() };
        let offset = photons_a as i64 - photons_b as i64;
        prop_assert_eq!(band_structure(&state).diagonal_offset, Some(offset));
        prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bsn_support_and_schmidt_rank_bound(spec in bsn_strategy()) {
        let state = states::build(&spec, 0).unwrap();
        let StateSpec::Bsn { photons_a, photons_b, .. } = spec else { unreachable!() };
        let total = (photons_a + photons_b) as usize;
        prop_assert_eq!(band_structure(&state).antidiagonal_total, Some(total));
        prop_assert_eq!(state.tail_bound(), 0.0);
        let profile = schmidt_profile(&state);
        prop_assert!(profile.rank <= total + 1, "rank {} > {}", profile.rank, total + 1);
        let sum_sq: f64 = profile.coefficients.iter().map(|x| x * x).sum();
        prop_assert!((sum_sq - 1.0).abs() < 1e-10);
    }

    #[test]
    fn moment_tables_conjugation_symmetric(spec in bsn_strategy()) {
        let state = states::build(&spec, 4).unwrap();
        let table = MomentTable::of_state(&state, 4);
        prop_assert!(table.conjugation_deviation() < 1e-10);
    }

    #[test]
    fn identity_moment_is_unity(spec in prop_oneof![tmsn_strategy(), bsn_strategy()]) {
        let state = states::build(&spec, 0).unwrap();
        let identity = state.moment(twomode::LadderMonomial::IDENTITY).unwrap();
        prop_assert!((identity.re - 1.0).abs() <= state.tail_bound() + 1e-12);
        prop_assert!(identity.im.abs() < 1e-15);
    }

    #[test]
    fn covariance_is_physical(spec in prop_oneof![tmsn_strategy(), bsn_strategy()]) {
        let state = states::build(&spec, 2).unwrap();
        let cov = state.covariance_matrix();
        prop_assert!(cov.asymmetry() == 0.0);
        // closed-formula route: √ε roundoff at the pure-state degeneracy
        let (nu_min, _) = cov.symplectic_eigenvalues();
        prop_assert!(nu_min >= 1.0 - 1e-7, "symplectic eigenvalue {nu_min}");
        // Hermitian route is well-conditioned and holds the tight tolerance
        prop_assert!(cov.is_physical(1e-9));
    }

    #[test]
    fn state_files_round_trip(spec in prop_oneof![tmsn_strategy(), bsn_strategy()]) {
        let state = states::build(&spec, 0).unwrap();
        let text = io::write_state(&state);
        let back = io::read_state(&text).unwrap();
        prop_assert_eq!(&state, &back);
        prop_assert_eq!(text, io::write_state(&back));
    }

    #[test]
    fn moment_files_round_trip(spec in bsn_strategy()) {
        let state = states::build(&spec, 2).unwrap();
        let table = MomentTable::of_state(&state, 2);
        let text = io::write_moments(&table);
        let back = io::read_moments(&text, 1e-9).unwrap();
        prop_assert_eq!(&table, &back);
        prop_assert_eq!(text, io::write_moments(&back));
    }

    #[test]
    fn float_columns_round_trip_exactly(
        res in prop::collection::vec(-1.0e3..1.0e3f64, 1..6),
        ims in prop::collection::vec(-1.0e-3..1.0e-3f64, 1..6),
    ) {
        // arbitrary amplitudes (not drawn from any family) survive the
        // shortest-exponent float formatting bit-for-bit
        let entries: Vec<(usize, usize, C64)> = res
            .iter()
            .zip(&ims)
            .enumerate()
            .map(|(i, (&re, &im))| (i, i, C64::new(re, im)))
            .collect();
        let state = FockState::from_amplitudes(8, &entries, 0.0).unwrap();
        let back = io::read_state(&io::write_state(&state)).unwrap();
        prop_assert_eq!(state, back);
    }
}
