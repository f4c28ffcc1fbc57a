//! Construction of the two photonic state families.
//!
//! Both families start from a product of number states on modes A and B and
//! apply a two-mode Gaussian unitary:
//!
//! * **TMS number state** ∣M,N;ξ⟩: with the squeezed vacuum
//!   ∣ψ_ξ⟩ = √(1−∣ξ∣²) Σ ξⁿ∣n,n⟩ and the nonlocal modes
//!   Â_ξ = (a − ξb†)/√(1−∣ξ∣²), B̂_ξ = (b − ξa†)/√(1−∣ξ∣²), the state is
//!   (Â_ξ†)^M (B̂_ξ†)^N ∣ψ_ξ⟩ / √(M!N!). Its support lies exactly on the
//!   diagonal band n_a − n_b = M − N.
//! * **BS number state** ∣n,m;r⟩: with the beamsplitter output modes
//!   c_r = (a − rb)/√(1+∣r∣²), d_r = (r*a + b)/√(1+∣r∣²), the state is
//!   (c_r†)ⁿ (d_r†)^m ∣0,0⟩ / √(n!m!). Its support lies exactly on the
//!   anti-diagonal n_a + n_b = n + m, so it fits in a finite lattice with
//!   zero tail.
//!
//! The squeezed-vacuum construction is numeric term-by-term rather than a
//! matrix exponential of the squeezer: each creation-operator application is
//! exact arithmetic on the band, so the only truncation error is the
//! vacuum's geometric tail, which is recorded in `tail_bound`.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::fock::{FockState, Mode};
use crate::C64;

/// Target for the squeezed vacuum's geometric tail when cutoffs are chosen
/// automatically. Small enough that 1e−9 comparisons on moments up to eighth
/// order hold mechanically.
pub const TMS_VACUUM_TAIL_TARGET: f64 = 1e-14;

/// Hard ceiling for automatically chosen cutoffs (lattice memory guard).
pub const MAX_AUTO_CUTOFF: usize = 1024;

/// Singular values below this threshold do not count toward the Schmidt rank;
/// separates exact band-structure zeros from rounding noise.
pub const SCHMIDT_RANK_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum SpecError {
    #[error("squeezing parameter must satisfy |xi| < 1, got |xi| = {modulus}")]
    XiOutOfDomain { modulus: f64 },
    #[error("beamsplitter parameter must satisfy 0 < |r| < inf, got |r| = {modulus}")]
    ROutOfDomain { modulus: f64 },
    #[error("cutoff {got} too small: the state needs at least {needed}")]
    CutoffTooSmall { needed: usize, got: usize },
    #[error(
        "automatic cutoff {needed} exceeds the ceiling {max}; pass an explicit cutoff \
         or move |xi| away from 1"
    )]
    AutoCutoffOverflow { needed: usize, max: usize },
    #[error("operation requires at least one photon (n + m >= 1)")]
    NoPhotons,
}

/// Parameter record selecting one member of either family.
///
/// `photons_a`/`photons_b` are the photon numbers of the input product state
/// on modes A and B (M, N for the squeezer family; n, m for the beamsplitter
/// family).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StateSpec {
    Tmsn {
        photons_a: u32,
        photons_b: u32,
        xi: C64,
    },
    Bsn {
        photons_a: u32,
        photons_b: u32,
        r: C64,
    },
}

impl StateSpec {
    pub fn validate(&self) -> Result<(), SpecError> {
        match *self {
            StateSpec::Tmsn { xi, .. } => validate_xi(xi),
            StateSpec::Bsn { r, .. } => validate_r(r),
        }
    }

    /// Short deterministic label, used in summaries and file headers.
    pub fn label(&self) -> String {
        match *self {
            StateSpec::Tmsn {
                photons_a,
                photons_b,
                xi,
            } => {
                format!(
                    "tmsn M={photons_a} N={photons_b} xi=({:e}, {:e})",
                    xi.re, xi.im
                )
            }
            StateSpec::Bsn {
                photons_a,
                photons_b,
                r,
            } => {
                format!("bsn n={photons_a} m={photons_b} r=({:e}, {:e})", r.re, r.im)
            }
        }
    }
}

fn validate_xi(xi: C64) -> Result<(), SpecError> {
    let modulus = xi.norm();
    if !modulus.is_finite() || modulus >= 1.0 {
        return Err(SpecError::XiOutOfDomain { modulus });
    }
    Ok(())
}

fn validate_r(r: C64) -> Result<(), SpecError> {
    let modulus = r.norm();
    if !modulus.is_finite() || modulus <= 0.0 {
        return Err(SpecError::ROutOfDomain { modulus });
    }
    Ok(())
}

/// Smallest cutoff putting the squeezed vacuum's geometric tail below
/// [`TMS_VACUUM_TAIL_TARGET`].
fn vacuum_cutoff(xi: C64) -> usize {
    let q = xi.norm_sqr();
    if q == 0.0 {
        return 0;
    }
    // tail after cutoff c is exactly q^(c+1)
    let mut c = 0usize;
    let mut tail = q;
    while tail >= TMS_VACUUM_TAIL_TARGET && c < MAX_AUTO_CUTOFF + 1 {
        c += 1;
        tail *= q;
    }
    c
}

/// Build a member of either family at an automatically chosen cutoff with
/// headroom for moments up to `moment_order`.
///
/// Beamsplitted states have finite support, so `n + m + moment_order`
/// suffices. For squeezed number states the creation operators multiply the
/// vacuum's geometric envelope by a polynomial in the band index, so the
/// cutoff is grown adaptively until the measured mass on the outermost band
/// shell puts the estimated continuation tail below
/// [`TMS_VACUUM_TAIL_TARGET`].
pub fn build(spec: &StateSpec, moment_order: u32) -> Result<FockState, SpecError> {
    spec.validate()?;
    match *spec {
        StateSpec::Bsn {
            photons_a,
            photons_b,
            r,
        } => {
            let cutoff = (photons_a + photons_b + moment_order) as usize;
            if cutoff > MAX_AUTO_CUTOFF {
                return Err(SpecError::AutoCutoffOverflow {
                    needed: cutoff,
                    max: MAX_AUTO_CUTOFF,
                });
            }
            build_bsn(photons_a, photons_b, r, cutoff)
        }
        StateSpec::Tmsn {
            photons_a,
            photons_b,
            xi,
        } => {
            let quanta = photons_a + photons_b;
            let mut cutoff = vacuum_cutoff(xi) + (quanta + moment_order) as usize;
            loop {
                let mut state = build_tmsn(photons_a, photons_b, xi, cutoff)?;
                let est = tmsn_tail_estimate(&state, xi, quanta);
                if est < TMS_VACUUM_TAIL_TARGET {
                    state.set_tail_bound(state.tail_bound().max(est));
                    return Ok(state);
                }
                if cutoff >= MAX_AUTO_CUTOFF {
                    return Err(SpecError::AutoCutoffOverflow {
                        needed: cutoff + 1,
                        max: MAX_AUTO_CUTOFF,
                    });
                }
                cutoff = (cutoff + (cutoff / 4).max(8)).min(MAX_AUTO_CUTOFF);
            }
        }
    }
}

/// Estimated mass of the ideal state beyond the lattice, from the mass on
/// the outermost shell continued geometrically. The shell-to-shell mass
/// ratio is bounded by ∣ξ∣²·((c+1)/c)^(2K) — geometric decay times the
/// polynomial envelope of K = M + N creation operators — and a safety factor
/// of 4 absorbs the slack.
fn tmsn_tail_estimate(state: &FockState, xi: C64, quanta: u32) -> f64 {
    let c = state.cutoff();
    if c == 0 {
        return state.tail_bound();
    }
    let mut shell = 0.0f64;
    for i in 0..=c {
        shell += state.amp(c, i).norm_sqr();
        if i < c {
            shell += state.amp(i, c).norm_sqr();
        }
    }
    let q = xi.norm_sqr();
    let rho = (q * ((c as f64 + 1.0) / c as f64).powi(2 * quanta as i32)).min(0.95);
    shell * rho / (1.0 - rho) * 4.0
}

/// Build a member of either family at an explicit cutoff.
pub fn build_at(spec: &StateSpec, cutoff: usize) -> Result<FockState, SpecError> {
    match *spec {
        StateSpec::Tmsn {
            photons_a,
            photons_b,
            xi,
        } => build_tmsn(photons_a, photons_b, xi, cutoff),
        StateSpec::Bsn {
            photons_a,
            photons_b,
            r,
        } => build_bsn(photons_a, photons_b, r, cutoff),
    }
}

/// Two-mode squeezed vacuum √(1−∣ξ∣²) Σ ξⁿ∣n,n⟩ on the given lattice.
///
/// Amplitudes are written verbatim (no renormalization); `tail_bound` is the
/// exact geometric tail ∣ξ∣^(2(cutoff+1)).
pub fn build_tms_vacuum(xi: C64, cutoff: usize) -> Result<FockState, SpecError> {
    validate_xi(xi)?;
    let scale = (1.0 - xi.norm_sqr()).sqrt();
    let mut entries = Vec::with_capacity(cutoff + 1);
    let mut power = C64::new(1.0, 0.0);
    for n in 0..=cutoff {
        entries.push((n, n, scale * power));
        power *= xi;
    }
    let tail = xi.norm_sqr().powi(cutoff as i32 + 1);
    let state =
        FockState::from_amplitudes(cutoff, &entries, tail).expect("diagonal entries are in range");
    Ok(state)
}

/// TMS number state ∣M,N;ξ⟩ by repeated nonlocal creation-operator
/// application to the squeezed vacuum, then normalization.
pub fn build_tmsn(
    photons_a: u32,
    photons_b: u32,
    xi: C64,
    cutoff: usize,
) -> Result<FockState, SpecError> {
    let mut state = build_tms_vacuum(xi, cutoff)?;
    let s = (1.0 - xi.norm_sqr()).sqrt();
    let inv = C64::new(1.0 / s, 0.0);
    let neg_conj = -xi.conj() / s;
    for _ in 0..photons_a {
        // Â_ξ† = (a† − ξ* b)/√(1−|ξ|²)
        state = FockState::linear_combo(
            inv,
            &state.create(Mode::A),
            neg_conj,
            &state.annihilate(Mode::B),
        );
    }
    for _ in 0..photons_b {
        // B̂_ξ† = (b† − ξ* a)/√(1−|ξ|²)
        state = FockState::linear_combo(
            inv,
            &state.create(Mode::B),
            neg_conj,
            &state.annihilate(Mode::A),
        );
    }
    state.normalize();
    Ok(state)
}

/// BS number state ∣n,m;r⟩ = (c_r†)ⁿ (d_r†)^m ∣0,0⟩ / √(n!m!), normalized.
///
/// The lattice must hold the full anti-diagonal, so `cutoff ≥ n + m`; the
/// state then has zero tail.
pub fn build_bsn(
    photons_a: u32,
    photons_b: u32,
    r: C64,
    cutoff: usize,
) -> Result<FockState, SpecError> {
    validate_r(r)?;
    let needed = (photons_a + photons_b) as usize;
    if cutoff < needed {
        return Err(SpecError::CutoffTooSmall {
            needed,
            got: cutoff,
        });
    }
    let s = (1.0 + r.norm_sqr()).sqrt();
    let inv = C64::new(1.0 / s, 0.0);
    let mut state = FockState::vacuum(cutoff);
    for _ in 0..photons_a {
        // c_r† = (a† − r* b†)/√(1+|r|²)
        state = FockState::linear_combo(
            inv,
            &state.create(Mode::A),
            -r.conj() / s,
            &state.create(Mode::B),
        );
    }
    for _ in 0..photons_b {
        // d_r† = (r a† + b†)/√(1+|r|²)
        state = FockState::linear_combo(r / s, &state.create(Mode::A), inv, &state.create(Mode::B));
    }
    state.normalize();
    Ok(state)
}

/// Schmidt data of a two-mode pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtProfile {
    /// Singular values of the amplitude table, descending.
    pub coefficients: Vec<f64>,
    /// Count of coefficients above [`SCHMIDT_RANK_THRESHOLD`].
    pub rank: usize,
    /// Dominant (n_a, n_b) lattice cell of each Schmidt vector pair.
    pub basis_labels: Vec<(usize, usize)>,
}

/// Singular-value decomposition of the amplitude table.
///
/// For both supported families the amplitude table is banded with at most one
/// entry per row and column, so the Schmidt vectors are single lattice cells
/// and the labels are exact; for general states they name the dominant cell.
pub fn schmidt_profile(state: &FockState) -> SchmidtProfile {
    let dim = state.cutoff() + 1;
    let mat = DMatrix::from_fn(dim, dim, |i, j| state.amp(i, j));
    let svd = mat.clone().svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested");
    // The factorization's raw singular values carry ~1e−9 relative error,
    // which would leak past the rank threshold; σ_j = ‖Ψ v_j‖ on the computed
    // right vector is second-order accurate in the vector error, and the
    // image vector doubles as the row label.
    let mut refined: Vec<(f64, (usize, usize))> = Vec::with_capacity(dim);
    for j in 0..dim {
        let v_j = DVector::from_fn(dim, |k, _| v_t[(j, k)].conj());
        let image = &mat * &v_j;
        let sigma = image.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let row = (0..dim)
            .max_by(|&x, &y| {
                image[x]
                    .norm()
                    .partial_cmp(&image[y].norm())
                    .expect("finite")
            })
            .unwrap_or(0);
        let col = (0..dim)
            .max_by(|&x, &y| v_j[x].norm().partial_cmp(&v_j[y].norm()).expect("finite"))
            .unwrap_or(0);
        refined.push((sigma, (row, col)));
    }
    refined.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("singular values are finite"));
    let coefficients: Vec<f64> = refined.iter().map(|(s, _)| *s).collect();
    let basis_labels: Vec<(usize, usize)> = refined.iter().map(|(_, l)| *l).collect();
    let rank = coefficients
        .iter()
        .filter(|&&c| c > SCHMIDT_RANK_THRESHOLD)
        .count();
    SchmidtProfile {
        coefficients,
        rank,
        basis_labels,
    }
}

/// Overlaps ⟨n+m, 0∣n,m;r⟩ and ⟨0, n+m∣n,m;r⟩ — the edge cells of the
/// Schmidt band, both nonzero for every beamsplitted number state with at
/// least one photon.
pub fn verify_edge_coefficients(
    photons_a: u32,
    photons_b: u32,
    r: C64,
) -> Result<(C64, C64), SpecError> {
    let total = (photons_a + photons_b) as usize;
    if total == 0 {
        return Err(SpecError::NoPhotons);
    }
    let state = build_bsn(photons_a, photons_b, r, total)?;
    Ok((state.amp(total, 0), state.amp(0, total)))
}

/// Band structure of a state's support: which exact band (if any) carries
/// every nonzero amplitude.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BandStructure {
    /// Some(offset) if all support satisfies n_a − n_b = offset.
    pub diagonal_offset: Option<i64>,
    /// Some(total) if all support satisfies n_a + n_b = total.
    pub antidiagonal_total: Option<usize>,
}

pub fn band_structure(state: &FockState) -> BandStructure {
    let mut diag: Option<Option<i64>> = None;
    let mut anti: Option<Option<usize>> = None;
    for (na, nb, _) in state.nonzero_amps() {
        let d = na as i64 - nb as i64;
        let t = na + nb;
        diag = match diag {
            None => Some(Some(d)),
            Some(Some(prev)) if prev == d => Some(Some(d)),
            _ => Some(None),
        };
        anti = match anti {
            None => Some(Some(t)),
            Some(Some(prev)) if prev == t => Some(Some(t)),
            _ => Some(None),
        };
    }
    BandStructure {
        diagonal_offset: diag.flatten(),
        antidiagonal_total: anti.flatten(),
    }
}
