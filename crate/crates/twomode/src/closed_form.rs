//! Closed-form expressions for the two state families, transcribed verbatim
//! from their published forms.
//!
//! This module is the analytic oracle the lattice numerics are validated
//! against: covariance blocks, Simon's D, the detectability conditions, and
//! the operator expectations entering the higher-order witnesses. Every
//! formula is implemented symbol-for-symbol as printed, **including two whose
//! printed forms disagree with the lattice computation**:
//!
//! * [`bsn_hz_moments`]'s number-product moment ⟨a†a b†b⟩ reproduces the
//!   lattice value only at ∣r∣ = 1 or nm = 1; the measured gap is reported by
//!   the cross-checks in [`crate::witness`], not patched here.
//! * [`bsn_jx`] has the opposite sign from the lattice value of ⟨J_x⟩ (the
//!   magnitude, which is all the witness conditions use, agrees).
//!
//! Keeping the transcription verbatim and surfacing the deltas makes the
//! disagreements themselves reproducible.

use nalgebra::Matrix2;

use crate::fock::CovarianceMatrix;
use crate::states::{SpecError, StateSpec};
use crate::C64;

fn check_xi(xi: C64) -> Result<(), SpecError> {
    let modulus = xi.norm();
    if !modulus.is_finite() || modulus >= 1.0 {
        return Err(SpecError::XiOutOfDomain { modulus });
    }
    Ok(())
}

fn check_r(r: C64) -> Result<(), SpecError> {
    let modulus = r.norm();
    if !modulus.is_finite() || modulus <= 0.0 {
        return Err(SpecError::ROutOfDomain { modulus });
    }
    Ok(())
}

/// Covariance matrix of ∣M,N;ξ⟩:
/// A = [1+2M+(1+2N)∣ξ∣²]/(1−∣ξ∣²)·I, B with M↔N, and
/// C = 2∣ξ∣(1+M+N)/(1−∣ξ∣²)·[[cosθ, sinθ], [sinθ, −cosθ]] for ξ = ∣ξ∣e^{iθ}.
pub fn tmsn_covariance(m: u32, n: u32, xi: C64) -> Result<CovarianceMatrix, SpecError> {
    check_xi(xi)?;
    let (m, n) = (m as f64, n as f64);
    let q = xi.norm_sqr();
    let denom = 1.0 - q;
    let theta = xi.arg();
    let a = (1.0 + 2.0 * m + (1.0 + 2.0 * n) * q) / denom;
    let b = (1.0 + 2.0 * n + (1.0 + 2.0 * m) * q) / denom;
    let c = 2.0 * xi.norm() * (1.0 + m + n) / denom;
    let c_block = Matrix2::new(theta.cos(), theta.sin(), theta.sin(), -theta.cos()) * c;
    Ok(CovarianceMatrix::from_blocks(
        Matrix2::identity() * a,
        Matrix2::identity() * b,
        c_block,
    ))
}

/// Simon's D for ∣M,N;ξ⟩:
/// (4/(1−∣ξ∣²))² · [(1+N)(1+M)∣ξ∣² − NM] · [MN∣ξ∣² − (1+N)(1+M)].
///
/// The second bracket is negative throughout the domain, so D < 0 exactly
/// when the first bracket is positive.
pub fn tmsn_simon_d(m: u32, n: u32, xi: C64) -> Result<f64, SpecError> {
    check_xi(xi)?;
    let (m, n) = (m as f64, n as f64);
    let q = xi.norm_sqr();
    let pref = (4.0 / (1.0 - q)).powi(2);
    Ok(pref * ((1.0 + n) * (1.0 + m) * q - n * m) * (m * n * q - (1.0 + n) * (1.0 + m)))
}

/// Detectability condition for ∣M,N;ξ⟩ from second moments:
/// (M − t)(N − t) < s with t = ∣ξ∣²/(1−∣ξ∣²) and s = ∣ξ∣²/(1−∣ξ∣²)².
/// Equivalent to [`tmsn_simon_d`] < 0.
pub fn tmsn_detectable(m: u32, n: u32, xi: C64) -> Result<bool, SpecError> {
    Ok(tmsn_detect_margin(m, n, xi)? < 0.0)
}

/// Signed margin (M − t)(N − t) − s of the detectability condition;
/// negative means detectable.
pub fn tmsn_detect_margin(m: u32, n: u32, xi: C64) -> Result<f64, SpecError> {
    check_xi(xi)?;
    let (m, n) = (m as f64, n as f64);
    let q = xi.norm_sqr();
    let t = q / (1.0 - q);
    let s = q / (1.0 - q).powi(2);
    Ok((m - t) * (n - t) - s)
}

/// Covariance matrix of ∣n,m;r⟩:
/// A = [1+∣r∣²+2(n+∣r∣²m)]/(1+∣r∣²)·I, B with n↔m, and
/// C = 2∣r∣(m−n)/(1+∣r∣²)·[[cosφ, −sinφ], [sinφ, cosφ]] for r = ∣r∣e^{iφ}.
pub fn bsn_covariance(n: u32, m: u32, r: C64) -> Result<CovarianceMatrix, SpecError> {
    check_r(r)?;
    let (n, m) = (n as f64, m as f64);
    let q = r.norm_sqr();
    let denom = 1.0 + q;
    let phi = r.arg();
    let a = (denom + 2.0 * (n + q * m)) / denom;
    let b = (denom + 2.0 * (q * n + m)) / denom;
    let c = 2.0 * r.norm() * (m - n) / denom;
    let c_block = Matrix2::new(phi.cos(), -phi.sin(), phi.sin(), phi.cos()) * c;
    Ok(CovarianceMatrix::from_blocks(
        Matrix2::identity() * a,
        Matrix2::identity() * b,
        c_block,
    ))
}

/// Simon's D for ∣n,m;r⟩:
/// 16/(1+∣r∣²)² · [m(1+n) + (1+m)n∣r∣²] · [(1+m)n + m(1+n)∣r∣²].
///
/// Both brackets are non-negative, so D ≥ 0 for the whole family: second
/// moments never witness this entanglement.
pub fn bsn_simon_d(n: u32, m: u32, r: C64) -> Result<f64, SpecError> {
    check_r(r)?;
    let (n, m) = (n as f64, m as f64);
    let q = r.norm_sqr();
    let pref = 16.0 / (1.0 + q).powi(2);
    Ok(pref * (m * (1.0 + n) + (1.0 + m) * n * q) * ((1.0 + m) * n + m * (1.0 + n) * q))
}

/// Printed closed forms of the two moments entering the Hillery–Zubairy
/// condition for ∣n,m;r⟩:
///
/// ```text
/// ⟨a†a b†b⟩ = [(1−∣r∣²)² + ∣r∣²(m(m−1) + n(n−1))] / (1+∣r∣²)²
/// ⟨a b†⟩    = r(m−n)/(1+∣r∣²)
/// ```
///
/// Transcribed as printed. The number-product line does not reproduce the
/// lattice moment away from ∣r∣ = 1, nm = 1 (it is nonzero on the vacuum,
/// for instance); the exchange moment agrees everywhere tested.
pub fn bsn_hz_moments(n: u32, m: u32, r: C64) -> Result<(f64, C64), SpecError> {
    check_r(r)?;
    let (nf, mf) = (n as f64, m as f64);
    let q = r.norm_sqr();
    let number_product =
        ((1.0 - q).powi(2) + q * (mf * (mf - 1.0) + nf * (nf - 1.0))) / (1.0 + q).powi(2);
    let exchange = r * (mf - nf) / (1.0 + q);
    Ok((number_product, exchange))
}

/// Detectability condition for ∣n,m;r⟩ under the Hillery–Zubairy witness:
/// (m − w)(n − w) < w² with w = ∣r∣²/(1+∣r∣⁴).
///
/// On non-negative integers it holds exactly on the axes minus the origin,
/// (n,m) ∈ {(k,0), (0,k)} with k ≥ 1.
pub fn bsn_hz_detectable(n: u32, m: u32, r: C64) -> Result<bool, SpecError> {
    Ok(bsn_hz_margin(n, m, r)? < 0.0)
}

/// Signed margin (m − w)(n − w) − w²; negative means detectable.
pub fn bsn_hz_margin(n: u32, m: u32, r: C64) -> Result<f64, SpecError> {
    check_r(r)?;
    let (n, m) = (n as f64, m as f64);
    let q = r.norm_sqr();
    let w = q / (1.0 + q * q);
    Ok((m - w) * (n - w) - w * w)
}

/// ⟨K_x⟩ for ∣M,N;ξ⟩: (ξ + ξ*)(M + N + 1)/(2(1−∣ξ∣²)).
///
/// Vanishes for purely imaginary ξ; a phase rotation maps the general case
/// onto Re ξ ≠ 0, for which it is nonzero.
pub fn tmsn_kx(m: u32, n: u32, xi: C64) -> Result<f64, SpecError> {
    check_xi(xi)?;
    Ok(2.0 * xi.re / (2.0 * (1.0 - xi.norm_sqr())) * (m as f64 + n as f64 + 1.0))
}

/// Printed ⟨J_x⟩ for ∣n,m;r⟩: (r + r*)(n − m)/(2(1+∣r∣²)).
///
/// Transcribed as printed; the lattice computation gives the opposite sign
/// (consistent with ⟨a b†⟩ = r(m−n)/(1+∣r∣²) and J_x = Re⟨a b†⟩ for real r).
/// The witness conditions only consume ∣⟨J_x⟩∣², which agrees.
pub fn bsn_jx(n: u32, m: u32, r: C64) -> Result<f64, SpecError> {
    check_r(r)?;
    Ok(2.0 * r.re / (2.0 * (1.0 + r.norm_sqr())) * (n as f64 - m as f64))
}

/// ⟨L̃_x⟩ for ∣n,m;r⟩:
/// (r² + (r*)²)(m(m−1) + n(n−1) − 4nm)/(2(1+∣r∣²)²).
///
/// The integer factor vanishes exactly on the "blind pairs" enumerated in
/// [`crate::survey`], which the fourth-order witness therefore misses.
pub fn bsn_lx(n: u32, m: u32, r: C64) -> Result<f64, SpecError> {
    check_r(r)?;
    let (nf, mf) = (n as f64, m as f64);
    let two_re_r_sq = 2.0 * (r * r).re;
    Ok(
        two_re_r_sq * (mf * (mf - 1.0) + nf * (nf - 1.0) - 4.0 * nf * mf)
            / (2.0 * (1.0 + r.norm_sqr()).powi(2)),
    )
}

/// Family-specific bundle of the analytic quantities above.
#[derive(Clone, Debug)]
pub struct AnalyticMoments {
    pub spec: StateSpec,
    pub covariance: CovarianceMatrix,
    pub simon_d: f64,
    pub family: FamilyMoments,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FamilyMoments {
    Tmsn {
        detectable: bool,
        kx: f64,
    },
    Bsn {
        hz_detectable: bool,
        hz_number_product: f64,
        hz_exchange: C64,
        jx: f64,
        lx: f64,
    },
}

impl AnalyticMoments {
    pub fn for_spec(spec: &StateSpec) -> Result<Self, SpecError> {
        match *spec {
            StateSpec::Tmsn {
                photons_a: m,
                photons_b: n,
                xi,
            } => Ok(Self {
                spec: *spec,
                covariance: tmsn_covariance(m, n, xi)?,
                simon_d: tmsn_simon_d(m, n, xi)?,
                family: FamilyMoments::Tmsn {
                    detectable: tmsn_detectable(m, n, xi)?,
                    kx: tmsn_kx(m, n, xi)?,
                },
            }),
            StateSpec::Bsn {
                photons_a: n,
                photons_b: m,
                r,
            } => {
                let (hz_number_product, hz_exchange) = bsn_hz_moments(n, m, r)?;
                Ok(Self {
                    spec: *spec,
                    covariance: bsn_covariance(n, m, r)?,
                    simon_d: bsn_simon_d(n, m, r)?,
                    family: FamilyMoments::Bsn {
                        hz_detectable: bsn_hz_detectable(n, m, r)?,
                        hz_number_product,
                        hz_exchange,
                        jx: bsn_jx(n, m, r)?,
                        lx: bsn_lx(n, m, r)?,
                    },
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn tmsn_vacuum_covariance_blocks() {
        let cov = tmsn_covariance(0, 0, c(0.5, 0.0)).unwrap();
        let a = cov.block_a();
        let cb = cov.block_c();
        assert_abs_diff_eq!(a[(0, 0)], 5.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(a[(0, 1)], 0.0, epsilon = 0.0);
        assert_abs_diff_eq!(cb[(0, 0)], 4.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(cb[(1, 1)], -4.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(cb[(0, 1)], 0.0, epsilon = 0.0);
    }

    #[test]
    fn tmsn_unsqueezed_covariance_is_number_state() {
        let cov = tmsn_covariance(1, 0, c(0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(cov.block_a()[(0, 0)], 3.0, epsilon = 0.0);
        assert_abs_diff_eq!(cov.block_b()[(0, 0)], 1.0, epsilon = 0.0);
        assert_abs_diff_eq!(cov.block_c().norm(), 0.0, epsilon = 0.0);
    }

    #[test]
    fn tmsn_simon_d_pinned_values() {
        // vacuum at ξ = 0.7: D = (4/0.51)²·0.49·(−1)
        let expect = -(4.0f64 / 0.51).powi(2) * 0.49;
        assert_abs_diff_eq!(
            tmsn_simon_d(0, 0, c(0.7, 0.0)).unwrap(),
            expect,
            epsilon = 1e-9
        );
        // no squeezing: separable boundary
        assert_abs_diff_eq!(tmsn_simon_d(0, 0, c(0.0, 0.0)).unwrap(), 0.0, epsilon = 0.0);
        // (2,2) at ξ = 0.7: first bracket 9·0.49 − 4 = 0.41 > 0 forces D < 0
        assert!(tmsn_simon_d(2, 2, c(0.7, 0.0)).unwrap() < 0.0);
    }

    #[test]
    fn tmsn_detectability_threshold_cells() {
        let xi = c(0.7, 0.0);
        // t ≈ 0.9608, s ≈ 1.8839: (2 − t)² ≈ 1.080 < s, (3 − t)² ≈ 4.158 > s
        assert!(tmsn_detectable(2, 2, xi).unwrap());
        assert!(!tmsn_detectable(3, 3, xi).unwrap());
        for n in 0..=10 {
            assert!(tmsn_detectable(0, n, xi).unwrap());
        }
    }

    #[test]
    fn tmsn_detectable_iff_simon_d_negative() {
        // Cells can sit exactly on the boundary — e.g. (9,9) at ξ = 0.9,
        // where 10²·0.81 = 81 makes both quantities exact zeros — and there
        // the two formulas may round to opposite sides. Ties within rounding
        // noise are checked to be ties on both sides instead.
        for &q in &[0.3, 0.5, 0.7, 0.9] {
            let xi = c(q, 0.0);
            for m in 0..=10 {
                for n in 0..=10 {
                    let d = tmsn_simon_d(m, n, xi).unwrap();
                    let margin = tmsn_detect_margin(m, n, xi).unwrap();
                    let det = tmsn_detectable(m, n, xi).unwrap();
                    if margin.abs() < 1e-9 {
                        assert!(d.abs() < 1e-5, "boundary cell ({m},{n}), xi={q}: D = {d}");
                    } else {
                        assert_eq!(det, d < 0.0, "disagreement at ({m},{n}), xi={q}");
                    }
                }
            }
        }
    }

    #[test]
    fn bsn_covariance_pinned_values() {
        // n = m makes the cross block vanish
        let cov = bsn_covariance(2, 2, c(0.8, 0.3)).unwrap();
        assert_abs_diff_eq!(cov.block_c().norm(), 0.0, epsilon = 0.0);

        let cov = bsn_covariance(1, 0, c(1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(cov.block_a()[(0, 0)], 2.0, epsilon = 0.0);
        assert_abs_diff_eq!(cov.block_b()[(0, 0)], 2.0, epsilon = 0.0);
        assert_abs_diff_eq!(cov.block_c()[(0, 0)], -1.0, epsilon = 0.0);
        assert_abs_diff_eq!(cov.block_c()[(1, 1)], -1.0, epsilon = 0.0);
    }

    #[test]
    fn bsn_simon_d_pinned_and_nonnegative() {
        assert_abs_diff_eq!(
            bsn_simon_d(1, 0, c(1.0, 0.0)).unwrap(),
            4.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(bsn_simon_d(0, 0, c(0.5, 0.0)).unwrap(), 0.0, epsilon = 0.0);
        for n in 0..=20 {
            for m in 0..=20 {
                assert!(bsn_simon_d(n, m, c(0.37, 1.2)).unwrap() >= 0.0);
            }
        }
    }

    #[test]
    fn bsn_hz_moment_examples() {
        let (_, exchange) = bsn_hz_moments(1, 0, c(1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(exchange.re, -0.5, epsilon = 0.0);
        assert_abs_diff_eq!(exchange.im, 0.0, epsilon = 0.0);
        let (_, exchange) = bsn_hz_moments(0, 0, c(0.7, 0.0)).unwrap();
        assert_abs_diff_eq!(exchange.norm(), 0.0, epsilon = 0.0);
    }

    #[test]
    fn hz_detectable_exactly_on_axes() {
        for &rr in &[0.5, 1.0, 2.0, 0.1] {
            let r = c(rr, 0.0);
            for n in 0..=10 {
                for m in 0..=10 {
                    let expect = (n == 0) != (m == 0); // one axis, not the origin
                    assert_eq!(
                        bsn_hz_detectable(n, m, r).unwrap(),
                        expect,
                        "cell ({n},{m}) at r={rr}"
                    );
                }
            }
        }
    }

    #[test]
    fn kx_jx_lx_pinned_values() {
        assert_abs_diff_eq!(
            tmsn_kx(0, 0, c(0.5, 0.0)).unwrap(),
            2.0 / 3.0,
            epsilon = 1e-15
        );
        // purely imaginary ξ: the real-part factor kills it
        assert_abs_diff_eq!(tmsn_kx(2, 1, c(0.0, 0.6)).unwrap(), 0.0, epsilon = 0.0);
        // printed form at (1,0,1): (r+r*)(n−m)/(2(1+|r|²)) = 1/2
        assert_abs_diff_eq!(bsn_jx(1, 0, c(1.0, 0.0)).unwrap(), 0.5, epsilon = 0.0);
        assert_abs_diff_eq!(bsn_jx(2, 2, c(1.0, 0.0)).unwrap(), 0.0, epsilon = 0.0);
        // n = m = 1, r = 1: (2/8)·(0 + 0 − 4) = −1
        assert_abs_diff_eq!(bsn_lx(1, 1, c(1.0, 0.0)).unwrap(), -1.0, epsilon = 0.0);
        // (1,0) is a blind pair: the integer factor vanishes
        assert_abs_diff_eq!(bsn_lx(1, 0, c(0.37, 0.11)).unwrap(), 0.0, epsilon = 0.0);
    }

    #[test]
    fn lx_magnitude_matches_equal_photon_form() {
        // at n = m the printed magnitude is |r²+(r*)²| n(n+1)/(1+|r|²)²
        for n in 1..=4u32 {
            for &(re, im) in &[(1.0, 0.0), (0.8, 0.6), (2.0, -1.0)] {
                let r = c(re, im);
                let lx = bsn_lx(n, n, r).unwrap();
                let expect = (2.0 * (r * r).re).abs() * (n as f64) * (n as f64 + 1.0)
                    / (1.0 + r.norm_sqr()).powi(2);
                assert_abs_diff_eq!(lx.abs(), expect, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn domain_errors_propagate() {
        assert!(tmsn_covariance(0, 0, c(1.1, 0.0)).is_err());
        assert!(tmsn_simon_d(0, 0, c(0.0, 1.0)).is_err());
        assert!(bsn_covariance(1, 0, c(0.0, 0.0)).is_err());
        assert!(bsn_simon_d(1, 0, c(f64::INFINITY, 0.0)).is_err());
    }
}
