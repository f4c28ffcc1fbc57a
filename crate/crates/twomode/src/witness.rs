//! Separability criteria evaluated on moment tables.
//!
//! Four criteria are implemented, all phrased as "separable states satisfy
//! LHS ≥ RHS", with a [`WitnessReport`] carrying both sides, the margin
//! LHS − RHS, and the verdict (entangled exactly when the margin is below
//! −[`Tolerances::witness`]):
//!
//! * **Simon** — D = det γ + 1 − det A − det B + 2 det C ≥ 0 on the
//!   covariance matrix; necessary and sufficient for Gaussian states,
//!   necessary in general.
//! * **Hillery–Zubairy** — ⟨a†a b†b⟩ ≥ ∣⟨a b†⟩∣².
//! * **su(2)/su(1,1) pair** — partial transposition of the uncertainty
//!   relations ⟨Δ²K_y⟩⟨Δ²K_z⟩ ≥ ¼∣⟨K_x⟩∣² and ⟨Δ²J_y⟩⟨Δ²J_z⟩ ≥ ¼∣⟨J_x⟩∣²
//!   turns them into the separable conditions
//!   [⟨Δ²J_y⟩ + ¼]⟨Δ²K_z⟩ ≥ ¼∣⟨J_x⟩∣² (condition A) and
//!   [⟨Δ²K_y⟩ − ¼]⟨Δ²J_z⟩ ≥ ¼∣⟨K_x⟩∣² (condition B).
//! * **fourth-order** — the same construction one rung up the ladder:
//!   [⟨Δ²L̃_y⟩ + ⟨N₂₂⟩]⟨Δ²N₊⟩ ≥ ¼∣⟨L̃_x⟩∣², with
//!   L̃ built from (a†b)², N₊ = ¼(N_a+N_b), N₂₂ = (2a†a+1)(2b†b+1).
//!
//! All operators are stored as explicit normally-ordered monomial
//! combinations and variances are expanded symbolically before table lookup,
//! so one evaluation path serves lattice states, closed-form tables, and
//! externally measured data alike. The partial transposition is built into
//! the displayed conditions; evaluation only ever reads moments of the state
//! itself.

use std::fmt;

use thiserror::Error;

use crate::closed_form::{AnalyticMoments, FamilyMoments};
use crate::fock::{
    CovarianceMatrix, FockError, LadderMonomial, LadderPolynomial, MomentTable, EXTENDED_MAX_ORDER,
};
use crate::states::{self, SpecError, StateSpec};
use crate::{Tolerances, C64};

#[derive(Debug, Error, PartialEq)]
pub enum WitnessError {
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Spec(#[from] SpecError),
}

/// Which separability condition a report refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CriterionId {
    Simon,
    HilleryZubairy,
    SunA,
    SunB,
    SunFourth,
}

impl CriterionId {
    pub const ALL: [CriterionId; 5] = [
        CriterionId::Simon,
        CriterionId::HilleryZubairy,
        CriterionId::SunA,
        CriterionId::SunB,
        CriterionId::SunFourth,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            CriterionId::Simon => "simon",
            CriterionId::HilleryZubairy => "hz",
            CriterionId::SunA => "sun-a",
            CriterionId::SunB => "sun-b",
            CriterionId::SunFourth => "sun-fourth",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.label() == s)
    }
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The inequality holds: nothing can be concluded.
    SeparableConsistent,
    /// The inequality is violated beyond tolerance: the state is entangled.
    Entangled,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::SeparableConsistent => "separable-consistent",
            Verdict::Entangled => "entangled",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s {
            "separable-consistent" => Some(Verdict::SeparableConsistent),
            "entangled" => Some(Verdict::Entangled),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Comparison of a lattice value against its closed-form counterpart,
/// attached to reports where the family has one.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossCheck {
    pub quantity: String,
    /// Closed-form (printed) value.
    pub reference: C64,
    /// Lattice value.
    pub numeric: C64,
    pub delta: f64,
    pub within_tolerance: bool,
}

impl CrossCheck {
    fn new(quantity: &str, reference: C64, numeric: C64, tol: f64) -> Self {
        let delta = (reference - numeric).norm();
        Self {
            quantity: quantity.to_string(),
            reference,
            numeric,
            delta,
            within_tolerance: delta <= tol,
        }
    }
}

/// Outcome of one criterion on one input.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessReport {
    pub criterion: CriterionId,
    pub lhs: f64,
    pub rhs: f64,
    /// lhs − rhs; entangled exactly when below −tolerance.
    pub margin: f64,
    pub verdict: Verdict,
    /// FNV-1a hash of the consumed inputs (table entries or γ entries).
    pub inputs_hash: u64,
    pub cross_checks: Vec<CrossCheck>,
}

impl WitnessReport {
    fn new(criterion: CriterionId, lhs: f64, rhs: f64, inputs_hash: u64, tol: &Tolerances) -> Self {
        let margin = lhs - rhs;
        let verdict = if margin < -tol.witness {
            Verdict::Entangled
        } else {
            Verdict::SeparableConsistent
        };
        Self {
            criterion,
            lhs,
            rhs,
            margin,
            verdict,
            inputs_hash,
            cross_checks: Vec::new(),
        }
    }
}

// ---------------------------------------------------------------------------
// operator definitions
// ---------------------------------------------------------------------------

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn mono(k: u32, l: u32, p: u32, q: u32) -> LadderMonomial {
    LadderMonomial::new(k, l, p, q)
}

/// J_x = ½(a†b + ab†).
pub fn j_x() -> LadderPolynomial {
    LadderPolynomial::from_terms([
        (mono(1, 0, 0, 1), c(0.5, 0.0)),
        (mono(0, 1, 1, 0), c(0.5, 0.0)),
    ])
}

/// J_y = (a†b − ab†)/2i.
pub fn j_y() -> LadderPolynomial {
    LadderPolynomial::from_terms([
        (mono(1, 0, 0, 1), c(0.0, -0.5)),
        (mono(0, 1, 1, 0), c(0.0, 0.5)),
    ])
}

/// J_z = ½(N_a − N_b); its spectrum on ∣n_a, n_b⟩ is (n_a − n_b)/2.
pub fn j_z() -> LadderPolynomial {
    LadderPolynomial::from_terms([
        (mono(1, 1, 0, 0), c(0.5, 0.0)),
        (mono(0, 0, 1, 1), c(-0.5, 0.0)),
    ])
}

/// K_x = ½(a†b† + ab).
pub fn k_x() -> LadderPolynomial {
    LadderPolynomial::from_terms([
        (mono(1, 0, 1, 0), c(0.5, 0.0)),
        (mono(0, 1, 0, 1), c(0.5, 0.0)),
    ])
}

/// K_y = (a†b† − ab)/2i.
pub fn k_y() -> LadderPolynomial {
    LadderPolynomial::from_terms([
        (mono(1, 0, 1, 0), c(0.0, -0.5)),
        (mono(0, 1, 0, 1), c(0.0, 0.5)),
    ])
}

/// K_z = ½(N_a + N_b + 1); its spectrum on ∣n_a, n_b⟩ is (n_a + n_b + 1)/2.
pub fn k_z() -> LadderPolynomial {
    LadderPolynomial::from_terms([
        (mono(1, 1, 0, 0), c(0.5, 0.0)),
        (mono(0, 0, 1, 1), c(0.5, 0.0)),
        (LadderMonomial::IDENTITY, c(0.5, 0.0)),
    ])
}

/// H_x = ½[(a†b†)² + (ab)²].
pub fn h_x() -> LadderPolynomial {
    LadderPolynomial::from_terms([
        (mono(2, 0, 2, 0), c(0.5, 0.0)),
        (mono(0, 2, 0, 2), c(0.5, 0.0)),
    ])
}

/// H_y = [(a†b†)² − (ab)²]/2i.
pub fn h_y() -> LadderPolynomial {
    LadderPolynomial::from_terms([
        (mono(2, 0, 2, 0), c(0.0, -0.5)),
        (mono(0, 2, 0, 2), c(0.0, 0.5)),
    ])
}

/// N₊ = ¼(N_a + N_b).
pub fn n_plus() -> LadderPolynomial {
    LadderPolynomial::from_terms([
        (mono(1, 1, 0, 0), c(0.25, 0.0)),
        (mono(0, 0, 1, 1), c(0.25, 0.0)),
    ])
}

/// L̃_x = ½[(a†b)² + (ab†)²].
pub fn l_x_tilde() -> LadderPolynomial {
    LadderPolynomial::from_terms([
        (mono(2, 0, 0, 2), c(0.5, 0.0)),
        (mono(0, 2, 2, 0), c(0.5, 0.0)),
    ])
}

/// L̃_y = [(a†b)² − (ab†)²]/2i.
pub fn l_y_tilde() -> LadderPolynomial {
    LadderPolynomial::from_terms([
        (mono(2, 0, 0, 2), c(0.0, -0.5)),
        (mono(0, 2, 2, 0), c(0.0, 0.5)),
    ])
}

/// N₂₂ = ¼[a², a†²]⊗[b², b†²] = (2a†a + 1)(2b†b + 1) ≥ 1.
pub fn n_22() -> LadderPolynomial {
    LadderPolynomial::from_terms([
        (mono(1, 1, 1, 1), c(4.0, 0.0)),
        (mono(1, 1, 0, 0), c(2.0, 0.0)),
        (mono(0, 0, 1, 1), c(2.0, 0.0)),
        (LadderMonomial::IDENTITY, c(1.0, 0.0)),
    ])
}

/// Variance ⟨O²⟩ − ⟨O⟩² of a Hermitian operator, by symbolic expansion of O²
/// and table lookup.
pub fn variance(op: &LadderPolynomial, table: &MomentTable) -> Result<f64, FockError> {
    let mean = table.expectation(op)?.re;
    let second = table.expectation(&op.square())?.re;
    Ok(second - mean * mean)
}

// ---------------------------------------------------------------------------
// criteria
// ---------------------------------------------------------------------------

/// Simon's condition D ≥ 0 on a covariance matrix.
pub fn simon_criterion(
    cov: &CovarianceMatrix,
    tol: &Tolerances,
) -> Result<WitnessReport, WitnessError> {
    cov.check_symmetric(tol.numeric)?;
    let d = cov.simon_d();
    Ok(WitnessReport::new(
        CriterionId::Simon,
        d,
        0.0,
        hash_gamma(cov),
        tol,
    ))
}

/// Hillery–Zubairy condition ⟨a†a b†b⟩ ≥ ∣⟨a b†⟩∣².
pub fn hz_criterion(table: &MomentTable, tol: &Tolerances) -> Result<WitnessReport, WitnessError> {
    let lhs = table.get(mono(1, 1, 1, 1))?.re;
    let rhs = table.get(mono(0, 1, 1, 0))?.norm_sqr();
    Ok(WitnessReport::new(
        CriterionId::HilleryZubairy,
        lhs,
        rhs,
        hash_table(table),
        tol,
    ))
}

/// Condition A: [⟨Δ²J_y⟩ + ¼]⟨Δ²K_z⟩ ≥ ¼∣⟨J_x⟩∣².
pub fn sun_condition_a(
    table: &MomentTable,
    tol: &Tolerances,
) -> Result<WitnessReport, WitnessError> {
    let lhs = (variance(&j_y(), table)? + 0.25) * variance(&k_z(), table)?;
    let rhs = 0.25 * table.expectation(&j_x())?.norm_sqr();
    Ok(WitnessReport::new(
        CriterionId::SunA,
        lhs,
        rhs,
        hash_table(table),
        tol,
    ))
}

/// Condition B: [⟨Δ²K_y⟩ − ¼]⟨Δ²J_z⟩ ≥ ¼∣⟨K_x⟩∣².
pub fn sun_condition_b(
    table: &MomentTable,
    tol: &Tolerances,
) -> Result<WitnessReport, WitnessError> {
    let lhs = (variance(&k_y(), table)? - 0.25) * variance(&j_z(), table)?;
    let rhs = 0.25 * table.expectation(&k_x())?.norm_sqr();
    Ok(WitnessReport::new(
        CriterionId::SunB,
        lhs,
        rhs,
        hash_table(table),
        tol,
    ))
}

/// Fourth-order condition: [⟨Δ²L̃_y⟩ + ⟨N₂₂⟩]⟨Δ²N₊⟩ ≥ ¼∣⟨L̃_x⟩∣².
///
/// Needs the table closed up to eighth order (L̃_y² expands that far).
pub fn sun_condition_fourth(
    table: &MomentTable,
    tol: &Tolerances,
) -> Result<WitnessReport, WitnessError> {
    let lhs = (variance(&l_y_tilde(), table)? + table.expectation(&n_22())?.re)
        * variance(&n_plus(), table)?;
    let rhs = 0.25 * table.expectation(&l_x_tilde())?.norm_sqr();
    Ok(WitnessReport::new(
        CriterionId::SunFourth,
        lhs,
        rhs,
        hash_table(table),
        tol,
    ))
}

/// Margin of the untransposed su(2) uncertainty relation
/// ⟨Δ²J_y⟩⟨Δ²J_z⟩ − ¼∣⟨J_x⟩∣²; non-negative for every physical state.
pub fn su2_uncertainty_margin(table: &MomentTable) -> Result<f64, FockError> {
    Ok(variance(&j_y(), table)? * variance(&j_z(), table)?
        - 0.25 * table.expectation(&j_x())?.norm_sqr())
}

/// Margin of the untransposed su(1,1) uncertainty relation
/// ⟨Δ²K_y⟩⟨Δ²K_z⟩ − ¼∣⟨K_x⟩∣²; non-negative for every physical state.
pub fn su11_uncertainty_margin(table: &MomentTable) -> Result<f64, FockError> {
    Ok(variance(&k_y(), table)? * variance(&k_z(), table)?
        - 0.25 * table.expectation(&k_x())?.norm_sqr())
}

// ---------------------------------------------------------------------------
// full report
// ---------------------------------------------------------------------------

/// Run every criterion on a freshly built family member, in the fixed order
/// simon, hz, sun-a, sun-b, sun-fourth, attaching closed-form cross-check
/// deltas where the family has them.
pub fn full_report(spec: &StateSpec, tol: &Tolerances) -> Result<Vec<WitnessReport>, WitnessError> {
    let state = states::build(spec, EXTENDED_MAX_ORDER)?;
    let table = MomentTable::of_state(&state, EXTENDED_MAX_ORDER);
    full_report_on_table(spec, &table, tol)
}

/// As [`full_report`], on a caller-supplied table (must be closed up to
/// eighth order).
pub fn full_report_on_table(
    spec: &StateSpec,
    table: &MomentTable,
    tol: &Tolerances,
) -> Result<Vec<WitnessReport>, WitnessError> {
    let analytic = AnalyticMoments::for_spec(spec)?;
    let cov = CovarianceMatrix::from_moment_table(table)?;

    let mut simon = simon_criterion(&cov, tol)?;
    let cov_delta = (cov.matrix() - analytic.covariance.matrix())
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()));
    simon.cross_checks.push(CrossCheck::new(
        "simon-d",
        c(analytic.simon_d, 0.0),
        c(cov.simon_d(), 0.0),
        simon_d_tolerance(analytic.simon_d, tol),
    ));
    simon.cross_checks.push(CrossCheck::new(
        "covariance-max-entry",
        c(0.0, 0.0),
        c(cov_delta, 0.0),
        tol.numeric * 10.0,
    ));

    let mut hz = hz_criterion(table, tol)?;
    let mut sun_a = sun_condition_a(table, tol)?;
    let mut sun_b = sun_condition_b(table, tol)?;
    let mut fourth = sun_condition_fourth(table, tol)?;

    match analytic.family {
        FamilyMoments::Tmsn { kx, .. } => {
            let kx_num = table.expectation(&k_x())?;
            sun_b.cross_checks.push(CrossCheck::new(
                "kx",
                c(kx, 0.0),
                kx_num,
                tol.numeric * 10.0,
            ));
        }
        FamilyMoments::Bsn {
            hz_number_product,
            hz_exchange,
            jx,
            lx,
            ..
        } => {
            let np_num = table.get(mono(1, 1, 1, 1))?;
            let ex_num = table.get(mono(0, 1, 1, 0))?;
            hz.cross_checks.push(CrossCheck::new(
                "number-product",
                c(hz_number_product, 0.0),
                np_num,
                tol.numeric * 10.0,
            ));
            hz.cross_checks.push(CrossCheck::new(
                "exchange",
                hz_exchange,
                ex_num,
                tol.numeric * 10.0,
            ));
            let jx_num = table.expectation(&j_x())?;
            sun_a.cross_checks.push(CrossCheck::new(
                "jx",
                c(jx, 0.0),
                jx_num,
                tol.numeric * 10.0,
            ));
            let lx_num = table.expectation(&l_x_tilde())?;
            fourth.cross_checks.push(CrossCheck::new(
                "lx",
                c(lx, 0.0),
                lx_num,
                tol.numeric * 10.0,
            ));
        }
    }

    Ok(vec![simon, hz, sun_a, sun_b, fourth])
}

/// Absolute tolerance for the Simon-D cross-check: 1e−6 relative, floored at
/// the numeric tolerance for near-zero D.
fn simon_d_tolerance(reference: f64, tol: &Tolerances) -> f64 {
    (reference.abs() * 1e-6).max(tol.numeric * 100.0)
}

// ---------------------------------------------------------------------------
// input hashing
// ---------------------------------------------------------------------------

const FNV_OFFSET: u64 = 0xcbf29ce484222325;
const FNV_PRIME: u64 = 0x100000001b3;

pub(crate) fn fnv1a(bytes: impl IntoIterator<Item = u8>, seed: u64) -> u64 {
    let mut h = seed;
    for b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

fn hash_table(table: &MomentTable) -> u64 {
    let mut h = FNV_OFFSET;
    for (m, v) in table.entries() {
        let parts = [
            m.raise_a as u64,
            m.lower_a as u64,
            m.raise_b as u64,
            m.lower_b as u64,
            v.re.to_bits(),
            v.im.to_bits(),
        ];
        for p in parts {
            h = fnv1a(p.to_le_bytes(), h);
        }
    }
    h
}

fn hash_gamma(cov: &CovarianceMatrix) -> u64 {
    let mut h = FNV_OFFSET;
    for x in cov.matrix().iter() {
        h = fnv1a(x.to_bits().to_le_bytes(), h);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockState;
    use crate::states::{build_bsn, build_tmsn};
    use approx::assert_abs_diff_eq;

    fn table_of(state: &FockState, order: u32) -> MomentTable {
        MomentTable::of_state(state, order)
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn operator_commutators_close() {
        let i = c(0.0, 1.0);
        // [J_y, J_z] = iJ_x
        let jy_jz = &(&j_y() * &j_z()) - &(&j_z() * &j_y());
        assert_eq!(jy_jz, j_x().scaled(i));
        // [K_y, K_z] = iK_x
        let ky_kz = &(&k_y() * &k_z()) - &(&k_z() * &k_y());
        assert_eq!(ky_kz, k_x().scaled(i));
        // [H_y, N₊] = iH_x
        let hy_np = &(&h_y() * &n_plus()) - &(&n_plus() * &h_y());
        assert_eq!(hy_np, h_x().scaled(i));
    }

    #[test]
    fn n22_is_quarter_of_commutator_product() {
        let a2 = LadderPolynomial::monomial(mono(0, 2, 0, 0), c(1.0, 0.0));
        let adag2 = LadderPolynomial::monomial(mono(2, 0, 0, 0), c(1.0, 0.0));
        let b2 = LadderPolynomial::monomial(mono(0, 0, 0, 2), c(1.0, 0.0));
        let bdag2 = LadderPolynomial::monomial(mono(0, 0, 2, 0), c(1.0, 0.0));
        let comm_a = &(&a2 * &adag2) - &(&adag2 * &a2);
        let comm_b = &(&b2 * &bdag2) - &(&bdag2 * &b2);
        let product = (&comm_a * &comm_b).scaled(c(0.25, 0.0));
        assert_eq!(product, n_22());
    }

    #[test]
    fn jz_kz_spectra_on_basis_states() {
        // √n ladder weights round, so the integer spectra hold to ~1 ulp
        let s = FockState::basis(4, 2, 1).unwrap();
        let t = table_of(&s, 4);
        assert_abs_diff_eq!(t.expectation(&j_z()).unwrap().re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(t.expectation(&k_z()).unwrap().re, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(t.expectation(&n_22()).unwrap().re, 15.0, epsilon = 1e-12);
    }

    #[test]
    fn vacuum_is_separable_consistent_everywhere() {
        let v = FockState::vacuum(8);
        let t = table_of(&v, 8);
        let cov = v.covariance_matrix();
        let reports = [
            simon_criterion(&cov, &tol()).unwrap(),
            hz_criterion(&t, &tol()).unwrap(),
            sun_condition_a(&t, &tol()).unwrap(),
            sun_condition_b(&t, &tol()).unwrap(),
            sun_condition_fourth(&t, &tol()).unwrap(),
        ];
        for r in &reports {
            assert_eq!(
                r.verdict,
                Verdict::SeparableConsistent,
                "criterion {}",
                r.criterion
            );
            assert_abs_diff_eq!(r.margin, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn product_states_never_flagged() {
        for (na, nb) in [(1, 0), (2, 3), (0, 4)] {
            let s = FockState::basis(12, na, nb).unwrap();
            let t = table_of(&s, 8);
            let cov = s.covariance_matrix();
            assert_eq!(
                simon_criterion(&cov, &tol()).unwrap().verdict,
                Verdict::SeparableConsistent
            );
            assert_eq!(
                hz_criterion(&t, &tol()).unwrap().verdict,
                Verdict::SeparableConsistent
            );
            assert_eq!(
                sun_condition_a(&t, &tol()).unwrap().verdict,
                Verdict::SeparableConsistent
            );
            assert_eq!(
                sun_condition_b(&t, &tol()).unwrap().verdict,
                Verdict::SeparableConsistent
            );
            assert_eq!(
                sun_condition_fourth(&t, &tol()).unwrap().verdict,
                Verdict::SeparableConsistent
            );
        }
    }

    #[test]
    fn single_photon_bsn_verdict_split() {
        // (∣1,0⟩ − ∣0,1⟩)/√2: hz and condition A fire, fourth-order is blind
        let s = build_bsn(1, 0, c(1.0, 0.0), 9).unwrap();
        let t = table_of(&s, 8);

        let hz = hz_criterion(&t, &tol()).unwrap();
        assert_abs_diff_eq!(hz.lhs, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(hz.rhs, 0.25, epsilon = 1e-12);
        assert_eq!(hz.verdict, Verdict::Entangled);

        let a = sun_condition_a(&t, &tol()).unwrap();
        // Δ²K_z = 0 exactly (total-photon eigenstate); ¼|⟨J_x⟩|² = 1/16
        assert_abs_diff_eq!(a.lhs, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(a.rhs, 1.0 / 16.0, epsilon = 1e-12);
        assert_eq!(a.verdict, Verdict::Entangled);

        let fourth = sun_condition_fourth(&t, &tol()).unwrap();
        assert_abs_diff_eq!(fourth.rhs, 0.0, epsilon = 1e-12);
        assert_eq!(fourth.verdict, Verdict::SeparableConsistent);
    }

    #[test]
    fn equal_photon_bsn_needs_fourth_order() {
        // (∣2,0⟩ − ∣0,2⟩)/√2: only the fourth-order condition fires
        let s = build_bsn(1, 1, c(1.0, 0.0), 10).unwrap();
        let t = table_of(&s, 8);

        assert_eq!(
            hz_criterion(&t, &tol()).unwrap().verdict,
            Verdict::SeparableConsistent
        );
        assert_eq!(
            sun_condition_a(&t, &tol()).unwrap().verdict,
            Verdict::SeparableConsistent
        );

        let fourth = sun_condition_fourth(&t, &tol()).unwrap();
        assert_abs_diff_eq!(fourth.lhs, 0.0, epsilon = 1e-10);
        // ∣⟨L̃_x⟩∣ = 1 → rhs = ¼
        assert_abs_diff_eq!(fourth.rhs, 0.25, epsilon = 1e-12);
        assert_eq!(fourth.verdict, Verdict::Entangled);
    }

    #[test]
    fn squeezed_vacuum_flagged_by_simon_and_condition_b() {
        let s = build_tmsn(0, 0, c(0.7, 0.0), 55).unwrap();
        let cov = s.covariance_matrix();
        let simon = simon_criterion(&cov, &tol()).unwrap();
        assert_eq!(simon.verdict, Verdict::Entangled);
        // D = −(4/0.51)²·0.49
        assert_abs_diff_eq!(simon.lhs, -(4.0f64 / 0.51).powi(2) * 0.49, epsilon = 1e-6);

        let t = table_of(&s, 4);
        let b = sun_condition_b(&t, &tol()).unwrap();
        assert_eq!(b.verdict, Verdict::Entangled);
        assert_abs_diff_eq!(b.lhs, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn deep_tmsn_invisible_to_simon_but_not_condition_b() {
        let spec = StateSpec::Tmsn {
            photons_a: 3,
            photons_b: 3,
            xi: c(0.7, 0.0),
        };
        let s = states::build(&spec, 4).unwrap();
        let cov = s.covariance_matrix();
        let simon = simon_criterion(&cov, &tol()).unwrap();
        assert_eq!(simon.verdict, Verdict::SeparableConsistent);
        assert!(simon.lhs > 0.0);

        let t = table_of(&s, 4);
        let b = sun_condition_b(&t, &tol()).unwrap();
        assert_eq!(b.verdict, Verdict::Entangled);
        // ⟨K_x⟩ = 1.4·7/(2·0.51)
        let kx = t.expectation(&k_x()).unwrap().re;
        assert_abs_diff_eq!(kx, 1.4 * 7.0 / (2.0 * 0.51), epsilon = 1e-8);
    }

    #[test]
    fn untransposed_uncertainty_relations_hold() {
        let states = [
            build_tmsn(1, 2, c(0.5, 0.3), 50).unwrap(),
            build_bsn(2, 1, c(0.8, -0.4), 11).unwrap(),
            FockState::basis(8, 3, 1).unwrap(),
        ];
        for s in &states {
            let t = table_of(s, 4);
            assert!(su2_uncertainty_margin(&t).unwrap() > -1e-10);
            assert!(su11_uncertainty_margin(&t).unwrap() > -1e-10);
        }
    }

    #[test]
    fn fourth_order_needs_extended_table() {
        let s = build_bsn(1, 1, c(1.0, 0.0), 6).unwrap();
        let t4 = table_of(&s, 4);
        let err = sun_condition_fourth(&t4, &tol()).unwrap_err();
        assert!(matches!(
            err,
            WitnessError::Fock(FockError::MissingMoment(_))
        ));
    }

    #[test]
    fn hz_needs_order_four_closure() {
        let s = build_bsn(1, 0, c(1.0, 0.0), 4).unwrap();
        let t2 = table_of(&s, 2);
        let err = hz_criterion(&t2, &tol()).unwrap_err();
        assert!(matches!(
            err,
            WitnessError::Fock(FockError::MissingMoment(_))
        ));
    }

    #[test]
    fn simon_rejects_asymmetric_gamma() {
        let mut g = *FockState::vacuum(2).covariance_matrix().matrix();
        g[(0, 1)] = 0.25;
        let cov = CovarianceMatrix::from_matrix(g);
        let err = simon_criterion(&cov, &tol()).unwrap_err();
        assert!(matches!(
            err,
            WitnessError::Fock(FockError::AsymmetricCovariance { .. })
        ));
    }

    #[test]
    fn full_report_order_and_cross_checks() {
        let spec = StateSpec::Bsn {
            photons_a: 2,
            photons_b: 2,
            r: c(1.0, 0.0),
        };
        let reports = full_report(&spec, &tol()).unwrap();
        let ids: Vec<CriterionId> = reports.iter().map(|r| r.criterion).collect();
        assert_eq!(ids, CriterionId::ALL.to_vec());
        // only the fourth-order condition detects n = m = 2 at r = 1
        assert_eq!(reports[0].verdict, Verdict::SeparableConsistent);
        assert_eq!(reports[1].verdict, Verdict::SeparableConsistent);
        assert_eq!(reports[2].verdict, Verdict::SeparableConsistent);
        assert_eq!(reports[4].verdict, Verdict::Entangled);
        // ⟨L̃_x⟩ = (2/8)(2 + 2 − 16) = −3
        let lx = reports[4]
            .cross_checks
            .iter()
            .find(|cc| cc.quantity == "lx")
            .unwrap();
        assert_abs_diff_eq!(lx.reference.re, -3.0, epsilon = 1e-12);
        assert!(lx.within_tolerance);
        assert_abs_diff_eq!(reports[4].rhs, 2.25, epsilon = 1e-9);
    }

    #[test]
    fn full_report_surfaces_printed_formula_gaps() {
        // away from |r| = 1 and nm = 1 the printed number-product moment
        // disagrees with the lattice; the delta is surfaced, not hidden
        let spec = StateSpec::Bsn {
            photons_a: 2,
            photons_b: 1,
            r: c(0.5, 0.0),
        };
        let reports = full_report(&spec, &tol()).unwrap();
        let hz = &reports[1];
        let np = hz
            .cross_checks
            .iter()
            .find(|cc| cc.quantity == "number-product")
            .unwrap();
        assert!(!np.within_tolerance, "expected a visible closed-form gap");
        // jx printed form has the opposite sign from the lattice value
        let jx = reports[2]
            .cross_checks
            .iter()
            .find(|cc| cc.quantity == "jx")
            .unwrap();
        assert!(!jx.within_tolerance);
        assert_abs_diff_eq!(jx.reference.re, -jx.numeric.re, epsilon = 1e-10);
    }

    #[test]
    fn hash_distinguishes_inputs() {
        let s1 = build_bsn(1, 0, c(1.0, 0.0), 6).unwrap();
        let s2 = build_bsn(0, 1, c(1.0, 0.0), 6).unwrap();
        let h1 = hash_table(&table_of(&s1, 2));
        let h2 = hash_table(&table_of(&s2, 2));
        assert_ne!(h1, h2);
    }
}
