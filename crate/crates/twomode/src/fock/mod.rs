//! Truncated two-mode Fock-space representation and moment evaluation.
//!
//! A [`FockState`] stores complex amplitudes on the photon-number lattice
//! [0, cutoff]² for modes A and B, together with `tail_bound`, a running
//! upper bound on the probability mass that has been lost past the cutoff.
//! Ladder operators act by index shifts with the usual √n weights; anything
//! pushed past the cutoff is added to the tail bound instead of raising an
//! error, so that repeated creation-operator application (the construction
//! route for the squeezed number states) stays straight-line code.
//!
//! Moments ⟨a†ᵏ aˡ b†ᵖ b^q⟩ are evaluated by applying the lowering strings to
//! two copies of the state and taking an inner product — lowering operators
//! map the lattice into itself, so the result is exact for the stored
//! amplitudes, with no operator matrices materialized.

mod covariance;
mod monomial;
mod table;

pub use covariance::CovarianceMatrix;
pub use monomial::{LadderMonomial, LadderPolynomial};
pub use table::{MomentSource, MomentTable};

use thiserror::Error;

use crate::C64;

/// Default cap on moment order; the second-order witness conditions close
/// within it.
pub const DEFAULT_MAX_ORDER: u32 = 4;

/// Raised cap needed by the fourth-order witness, whose squared operators
/// expand into eighth-order monomials.
pub const EXTENDED_MAX_ORDER: u32 = 8;

#[derive(Debug, Error, PartialEq)]
pub enum FockError {
    #[error("monomial order {order} exceeds the maximum {max} for this evaluation")]
    OrderOverflow { order: u32, max: u32 },
    #[error("cannot shrink cutoff from {from} to {to}")]
    CutoffShrink { from: usize, to: usize },
    #[error("amplitude index ({na}, {nb}) outside lattice [0, {cutoff}]²")]
    IndexOutOfRange { na: usize, nb: usize, cutoff: usize },
    #[error("moment table has no entry for {0}")]
    MissingMoment(LadderMonomial),
    #[error("moment table violates conjugation symmetry at {mono}: |v − conj(v')| = {dev:.3e}")]
    ConjugationAsymmetry { mono: LadderMonomial, dev: f64 },
    #[error("covariance matrix asymmetric: max |γ − γᵗ| = {max_dev:.3e}")]
    AsymmetricCovariance { max_dev: f64 },
    #[error("{0} is not finite")]
    NonFiniteValue(String),
}

/// One of the two bosonic modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    A,
    B,
}

/// State on the truncated two-mode photon-number lattice.
///
/// Amplitudes are stored dense and row-major, index `na·(cutoff+1) + nb`.
/// Both supported state families are band-sparse, but dense storage keeps
/// the ladder-operator code uniform.
#[derive(Clone, Debug, PartialEq)]
pub struct FockState {
    amps: Vec<C64>,
    cutoff: usize,
    tail_bound: f64,
}

impl FockState {
    /// Zero vector on the given lattice.
    pub fn zero(cutoff: usize) -> Self {
        let dim = cutoff + 1;
        Self {
            amps: vec![C64::new(0.0, 0.0); dim * dim],
            cutoff,
            tail_bound: 0.0,
        }
    }

    /// Two-mode vacuum ∣0,0⟩.
    pub fn vacuum(cutoff: usize) -> Self {
        Self::basis(cutoff, 0, 0).expect("(0,0) always fits")
    }

    /// Basis state ∣na, nb⟩.
    pub fn basis(cutoff: usize, na: usize, nb: usize) -> Result<Self, FockError> {
        if na > cutoff || nb > cutoff {
            return Err(FockError::IndexOutOfRange { na, nb, cutoff });
        }
        let mut s = Self::zero(cutoff);
        let idx = s.index(na, nb);
        s.amps[idx] = C64::new(1.0, 0.0);
        Ok(s)
    }

    /// Build from explicit nonzero entries; unlisted cells are zero.
    pub fn from_amplitudes(
        cutoff: usize,
        entries: &[(usize, usize, C64)],
        tail_bound: f64,
    ) -> Result<Self, FockError> {
        if !tail_bound.is_finite() || tail_bound < 0.0 {
            return Err(FockError::NonFiniteValue(format!(
                "tail_bound {tail_bound}"
            )));
        }
        let mut s = Self::zero(cutoff);
        s.tail_bound = tail_bound;
        for &(na, nb, amp) in entries {
            if na > cutoff || nb > cutoff {
                return Err(FockError::IndexOutOfRange { na, nb, cutoff });
            }
            if !amp.re.is_finite() || !amp.im.is_finite() {
                return Err(FockError::NonFiniteValue(format!(
                    "amplitude at ({na}, {nb})"
                )));
            }
            let idx = s.index(na, nb);
            s.amps[idx] = amp;
        }
        Ok(s)
    }

    #[inline]
    fn index(&self, na: usize, nb: usize) -> usize {
        na * (self.cutoff + 1) + nb
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub(crate) fn set_tail_bound(&mut self, tail_bound: f64) {
        self.tail_bound = tail_bound;
    }

    /// Amplitude ⟨na, nb∣ψ⟩; zero outside the lattice.
    pub fn amp(&self, na: usize, nb: usize) -> C64 {
        if na > self.cutoff || nb > self.cutoff {
            C64::new(0.0, 0.0)
        } else {
            self.amps[self.index(na, nb)]
        }
    }

    /// Iterate nonzero amplitudes in lexicographic (na, nb) order.
    pub fn nonzero_amps(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        let dim = self.cutoff + 1;
        self.amps
            .iter()
            .enumerate()
            .filter_map(move |(i, &a)| (a != C64::new(0.0, 0.0)).then_some((i / dim, i % dim, a)))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Whether every amplitude is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.amps.iter().all(|a| *a == C64::new(0.0, 0.0))
    }

    /// Enlarge the lattice, preserving amplitudes and tail bound.
    /// Shrinking is refused: it would discard amplitudes silently.
    pub fn grow(&self, new_cutoff: usize) -> Result<Self, FockError> {
        if new_cutoff < self.cutoff {
            return Err(FockError::CutoffShrink {
                from: self.cutoff,
                to: new_cutoff,
            });
        }
        let mut out = Self::zero(new_cutoff);
        out.tail_bound = self.tail_bound;
        for (na, nb, a) in self.nonzero_amps() {
            let idx = out.index(na, nb);
            out.amps[idx] = a;
        }
        Ok(out)
    }

    /// Apply a creation operator: a†∣n⟩ = √(n+1)∣n+1⟩ on the chosen mode.
    ///
    /// Returns an unnormalized state. Amplitude pushed past the cutoff is
    /// dropped and its squared magnitude added to `tail_bound`.
    pub fn create(&self, mode: Mode) -> Self {
        let mut out = Self::zero(self.cutoff);
        out.tail_bound = self.tail_bound;
        let c = self.cutoff;
        for (na, nb, a) in self.nonzero_amps() {
            let (src, dst_na, dst_nb) = match mode {
                Mode::A => (na, na + 1, nb),
                Mode::B => (nb, na, nb + 1),
            };
            let w = ((src + 1) as f64).sqrt();
            if dst_na > c || dst_nb > c {
                out.tail_bound += (a * w).norm_sqr();
            } else {
                let idx = out.index(dst_na, dst_nb);
                out.amps[idx] += a * w;
            }
        }
        out
    }

    /// Apply an annihilation operator: a∣n⟩ = √n∣n−1⟩ on the chosen mode.
    ///
    /// Lowering maps the lattice into itself, so no leakage can occur.
    pub fn annihilate(&self, mode: Mode) -> Self {
        let mut out = Self::zero(self.cutoff);
        out.tail_bound = self.tail_bound;
        for (na, nb, a) in self.nonzero_amps() {
            let (src, dst_na, dst_nb) = match mode {
                Mode::A if na > 0 => (na, na - 1, nb),
                Mode::B if nb > 0 => (nb, na, nb - 1),
                _ => continue,
            };
            let w = (src as f64).sqrt();
            let idx = out.index(dst_na, dst_nb);
            out.amps[idx] += a * w;
        }
        out
    }

    /// x·self + y·other, elementwise on equal lattices (the smaller operand
    /// is zero-padded). Tail bounds combine at amplitude level:
    /// (|x|√tx + |y|√ty)² bounds the lost mass of the combination.
    pub fn linear_combo(x: C64, a: &FockState, y: C64, b: &FockState) -> Self {
        let cutoff = a.cutoff.max(b.cutoff);
        let mut out = Self::zero(cutoff);
        for (na, nb, amp) in a.nonzero_amps() {
            let idx = out.index(na, nb);
            out.amps[idx] += x * amp;
        }
        for (na, nb, amp) in b.nonzero_amps() {
            let idx = out.index(na, nb);
            out.amps[idx] += y * amp;
        }
        let lost = x.norm() * a.tail_bound.sqrt() + y.norm() * b.tail_bound.sqrt();
        out.tail_bound = lost * lost;
        out
    }

    /// ⟨self∣other⟩ = Σ conj(self)·other; the smaller lattice is zero-padded.
    pub fn inner(&self, other: &FockState) -> C64 {
        if self.cutoff <= other.cutoff {
            self.nonzero_amps()
                .map(|(na, nb, a)| a.conj() * other.amp(na, nb))
                .sum()
        } else {
            other
                .nonzero_amps()
                .map(|(na, nb, b)| self.amp(na, nb).conj() * b)
                .sum()
        }
    }

    /// Normalize in place and fix the global phase so the first nonzero
    /// amplitude in lexicographic (na, nb) order is real positive.
    ///
    /// No-op on the zero vector.
    pub fn normalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 {
            return;
        }
        let anchor = self
            .nonzero_amps()
            .find(|(_, _, a)| a.norm() > 1e-12 * n)
            .map(|(_, _, a)| a)
            .unwrap_or(C64::new(1.0, 0.0));
        let phase = anchor / anchor.norm();
        let scale = phase.conj() / n;
        for a in self.amps.iter_mut() {
            *a *= scale;
        }
    }

    /// ⟨ψ∣ a†ᵏ aˡ b†ᵖ b^q ∣ψ⟩ with the order capped at [`DEFAULT_MAX_ORDER`].
    pub fn moment(&self, mono: LadderMonomial) -> Result<C64, FockError> {
        self.moment_max(mono, DEFAULT_MAX_ORDER)
    }

    /// Moment with an explicit order cap (≤ [`EXTENDED_MAX_ORDER`] in any
    /// pipeline this crate ships).
    ///
    /// Written as ⟨aᵏ bᵖ ψ ∣ aˡ b^q ψ⟩, which uses lowering operators only and
    /// is exact on the stored lattice.
    pub fn moment_max(&self, mono: LadderMonomial, max_order: u32) -> Result<C64, FockError> {
        if mono.order() > max_order {
            return Err(FockError::OrderOverflow {
                order: mono.order(),
                max: max_order,
            });
        }
        let mut bra = self.clone();
        for _ in 0..mono.raise_a {
            bra = bra.annihilate(Mode::A);
        }
        for _ in 0..mono.raise_b {
            bra = bra.annihilate(Mode::B);
        }
        let mut ket = self.clone();
        for _ in 0..mono.lower_a {
            ket = ket.annihilate(Mode::A);
        }
        for _ in 0..mono.lower_b {
            ket = ket.annihilate(Mode::B);
        }
        Ok(bra.inner(&ket))
    }

    /// Expectation value of a normally-ordered polynomial, order-capped at
    /// [`EXTENDED_MAX_ORDER`].
    pub fn expectation(&self, op: &LadderPolynomial) -> Result<C64, FockError> {
        let mut acc = C64::new(0.0, 0.0);
        for (mono, coeff) in op.terms() {
            acc += coeff * self.moment_max(*mono, EXTENDED_MAX_ORDER)?;
        }
        Ok(acc)
    }

    /// Quadrature covariance matrix from first and second ladder moments.
    pub fn covariance_matrix(&self) -> CovarianceMatrix {
        let table = MomentTable::of_state(self, 2);
        CovarianceMatrix::from_moment_table(&table)
            .expect("order-2 numeric table is closed by construction")
    }
}
