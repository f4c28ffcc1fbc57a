//! Tables of normally-ordered moments, closed under a declared order cap.
//!
//! Witness conditions evaluate against a [`MomentTable`] rather than a state,
//! so the same code path serves numerically constructed states, closed-form
//! entries, and externally measured data loaded from a file.

use std::collections::BTreeMap;

use super::{FockError, FockState, LadderMonomial, LadderPolynomial};
use crate::C64;

/// Provenance of the table's values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentSource {
    /// Evaluated on a lattice state in this process.
    Numeric,
    /// Filled from analytic expressions.
    ClosedForm,
    /// Loaded from outside (e.g. measured data).
    External,
}

impl MomentSource {
    pub fn label(&self) -> &'static str {
        match self {
            MomentSource::Numeric => "numeric",
            MomentSource::ClosedForm => "closed-form",
            MomentSource::External => "external",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s {
            "numeric" => Some(MomentSource::Numeric),
            "closed-form" => Some(MomentSource::ClosedForm),
            "external" => Some(MomentSource::External),
            _ => None,
        }
    }
}

/// Map from ladder monomials to expectation values.
///
/// Every table satisfies conjugation symmetry,
/// value(k,l,p,q) = conj(value(l,k,q,p)): numeric tables inherit it from the
/// inner product, and external tables are completed (and checked) against it
/// on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentTable {
    entries: BTreeMap<LadderMonomial, C64>,
    source: MomentSource,
    max_order: u32,
}

impl MomentTable {
    /// Evaluate every monomial of order ≤ `max_order` on a state.
    pub fn of_state(state: &FockState, max_order: u32) -> Self {
        let mut entries = BTreeMap::new();
        for mono in LadderMonomial::all_up_to_order(max_order) {
            let v = state
                .moment_max(mono, max_order)
                .expect("enumerated monomials respect the cap");
            entries.insert(mono, v);
        }
        Self {
            entries,
            source: MomentSource::Numeric,
            max_order,
        }
    }

    /// Build from explicit entries, completing missing conjugate partners by
    /// symmetry and rejecting pairs that are present but inconsistent.
    ///
    /// Measured data often stores one of each conjugate pair; completion
    /// makes such tables usable directly.
    pub fn from_entries<I>(entries: I, source: MomentSource, tol: f64) -> Result<Self, FockError>
    where
        I: IntoIterator<Item = (LadderMonomial, C64)>,
    {
        let mut map: BTreeMap<LadderMonomial, C64> = BTreeMap::new();
        for (m, v) in entries {
            map.insert(m, v);
        }
        let known: Vec<(LadderMonomial, C64)> = map.iter().map(|(m, v)| (*m, *v)).collect();
        for (m, v) in known {
            let partner = m.adjoint();
            match map.get(&partner) {
                None => {
                    map.insert(partner, v.conj());
                }
                Some(w) => {
                    let dev = (v - w.conj()).norm();
                    if dev > tol {
                        return Err(FockError::ConjugationAsymmetry { mono: m, dev });
                    }
                }
            }
        }
        let max_order = map.keys().map(LadderMonomial::order).max().unwrap_or(0);
        Ok(Self {
            entries: map,
            source,
            max_order,
        })
    }

    pub fn source(&self) -> MomentSource {
        self.source
    }

    /// Largest monomial order stored.
    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&LadderMonomial, &C64)> {
        self.entries.iter()
    }

    pub fn get(&self, mono: LadderMonomial) -> Result<C64, FockError> {
        self.entries
            .get(&mono)
            .copied()
            .ok_or(FockError::MissingMoment(mono))
    }

    /// Moment of the partially transposed state: looks up the monomial with
    /// the mode-B exponents swapped, ⟨a†ᵏ aˡ b†ᵖ b^q⟩_PT = ⟨a†ᵏ aˡ b†^q bᵖ⟩.
    pub fn partial_transpose(&self, mono: LadderMonomial) -> Result<C64, FockError> {
        self.get(mono.partial_transpose())
    }

    /// Expectation of a polynomial by table lookup.
    pub fn expectation(&self, op: &LadderPolynomial) -> Result<C64, FockError> {
        let mut acc = C64::new(0.0, 0.0);
        for (mono, coeff) in op.terms() {
            acc += coeff * self.get(*mono)?;
        }
        Ok(acc)
    }

    /// Largest conjugation-symmetry deviation across stored pairs.
    pub fn conjugation_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for (m, v) in self.entries.iter() {
            if let Some(w) = self.entries.get(&m.adjoint()) {
                worst = worst.max((v - w.conj()).norm());
            }
        }
        worst
    }
}
