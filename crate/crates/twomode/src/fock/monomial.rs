//! Normally-ordered ladder monomials and their polynomial algebra.
//!
//! A [`LadderMonomial`] is a†ᵏ aˡ b†ᵖ b^q with non-negative integer exponents;
//! a [`LadderPolynomial`] is a finite complex combination of monomials.
//! Products are reduced back to normal order with the two-mode analogue of
//!
//! ```text
//! aˡ a†ᵏ = Σᵢ C(l,i) C(k,i) i!  a†^(k−i) a^(l−i)
//! ```
//!
//! which is all the operator algebra the witness conditions need: operator
//! squares and variances expand into moment-table lookups.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::C64;

/// Normally-ordered two-mode ladder monomial a†ᵏ aˡ b†ᵖ b^q.
///
/// The component order is (raise A, lower A, raise B, lower B).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LadderMonomial {
    /// Exponent of a† (raises mode A).
    pub raise_a: u32,
    /// Exponent of a (lowers mode A).
    pub lower_a: u32,
    /// Exponent of b† (raises mode B).
    pub raise_b: u32,
    /// Exponent of b (lowers mode B).
    pub lower_b: u32,
}

impl LadderMonomial {
    pub const IDENTITY: Self = Self {
        raise_a: 0,
        lower_a: 0,
        raise_b: 0,
        lower_b: 0,
    };

    pub const fn new(raise_a: u32, lower_a: u32, raise_b: u32, lower_b: u32) -> Self {
        Self {
            raise_a,
            lower_a,
            raise_b,
            lower_b,
        }
    }

    /// Total operator order k + l + p + q.
    pub fn order(&self) -> u32 {
        self.raise_a + self.lower_a + self.raise_b + self.lower_b
    }

    /// Monomial of the adjoint operator: (a†ᵏ aˡ b†ᵖ b^q)† ↦ a†ˡ aᵏ b†^q bᵖ.
    pub fn adjoint(&self) -> Self {
        Self::new(self.lower_a, self.raise_a, self.lower_b, self.raise_b)
    }

    /// Index of the moment obtained by partially transposing mode B:
    /// ⟨a†ᵏ aˡ b†ᵖ b^q⟩ on ρᵀᴮ equals ⟨a†ᵏ aˡ b†^q bᵖ⟩ on ρ.
    pub fn partial_transpose(&self) -> Self {
        Self::new(self.raise_a, self.lower_a, self.lower_b, self.raise_b)
    }

    /// All monomials of order ≤ `max_order`, in lexicographic order.
    pub fn all_up_to_order(max_order: u32) -> Vec<Self> {
        let mut out = Vec::new();
        for k in 0..=max_order {
            for l in 0..=max_order.saturating_sub(k) {
                for p in 0..=max_order.saturating_sub(k + l) {
                    for q in 0..=max_order.saturating_sub(k + l + p) {
                        out.push(Self::new(k, l, p, q));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for LadderMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn factor(f: &mut fmt::Formatter<'_>, sym: &str, exp: u32, lead: &mut bool) -> fmt::Result {
            if exp == 0 {
                return Ok(());
            }
            if !*lead {
                write!(f, " ")?;
            }
            *lead = false;
            if exp == 1 {
                write!(f, "{sym}")
            } else {
                write!(f, "{sym}^{exp}")
            }
        }
        if self.order() == 0 {
            return write!(f, "1");
        }
        let mut lead = true;
        factor(f, "a†", self.raise_a, &mut lead)?;
        factor(f, "a", self.lower_a, &mut lead)?;
        factor(f, "b†", self.raise_b, &mut lead)?;
        factor(f, "b", self.lower_b, &mut lead)
    }
}

/// Finite complex combination of normally-ordered monomials.
///
/// Terms with coefficient magnitude below `COEFF_EPS` are dropped on
/// insertion so that exact cancellations (e.g. in commutators) leave no
/// residue terms behind.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct LadderPolynomial {
    terms: BTreeMap<LadderMonomial, C64>,
}

const COEFF_EPS: f64 = 0.0; // exact-zero pruning only; rounding is the caller's concern

impl LadderPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::monomial(LadderMonomial::IDENTITY, C64::new(1.0, 0.0))
    }

    pub fn monomial(mono: LadderMonomial, coeff: C64) -> Self {
        let mut p = Self::default();
        p.add_term(mono, coeff);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (LadderMonomial, C64)>>(terms: I) -> Self {
        let mut p = Self::default();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, mono: LadderMonomial, coeff: C64) {
        let entry = self.terms.entry(mono).or_insert_with(|| C64::new(0.0, 0.0));
        *entry += coeff;
        if entry.norm_sqr() <= COEFF_EPS {
            self.terms.remove(&mono);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LadderMonomial, &C64)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest monomial order appearing with a nonzero coefficient.
    pub fn max_order(&self) -> u32 {
        self.terms
            .keys()
            .map(LadderMonomial::order)
            .max()
            .unwrap_or(0)
    }

    /// Adjoint operator: conjugate coefficients, adjoint monomials.
    pub fn adjoint(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.adjoint(), c.conj())))
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (*m, c * s)))
    }

    /// Operator square, reduced to normal order.
    pub fn square(&self) -> Self {
        self * self
    }
}

/// Normal-order the product of two monomials.
///
/// Per mode, commuting aˡ¹ past a†ᵏ² produces the usual contraction sum; the
/// two modes contract independently.
fn monomial_product(x: &LadderMonomial, y: &LadderMonomial) -> Vec<(LadderMonomial, f64)> {
    let mut out = Vec::new();
    let i_max = x.lower_a.min(y.raise_a);
    let j_max = x.lower_b.min(y.raise_b);
    for i in 0..=i_max {
        let ca = contraction_coeff(x.lower_a, y.raise_a, i);
        for j in 0..=j_max {
            let cb = contraction_coeff(x.lower_b, y.raise_b, j);
            let mono = LadderMonomial::new(
                x.raise_a + y.raise_a - i,
                x.lower_a + y.lower_a - i,
                x.raise_b + y.raise_b - j,
                x.lower_b + y.lower_b - j,
            );
            out.push((mono, ca * cb));
        }
    }
    out
}

/// C(l,i)·C(k,i)·i! — the number of ways to contract i lowering operators
/// against i raising operators, exact in f64 for the orders supported here.
fn contraction_coeff(l: u32, k: u32, i: u32) -> f64 {
    binomial(l, i) * binomial(k, i) * factorial(i)
}

pub(crate) fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

pub(crate) fn factorial(n: u32) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

impl Add for &LadderPolynomial {
    type Output = LadderPolynomial;
    fn add(self, rhs: Self) -> LadderPolynomial {
        let mut out = self.clone();
        for (m, c) in rhs.terms.iter() {
            out.add_term(*m, *c);
        }
        out
    }
}

impl Sub for &LadderPolynomial {
    type Output = LadderPolynomial;
    fn sub(self, rhs: Self) -> LadderPolynomial {
        let mut out = self.clone();
        for (m, c) in rhs.terms.iter() {
            out.add_term(*m, -*c);
        }
        out
    }
}

impl Neg for &LadderPolynomial {
    type Output = LadderPolynomial;
    fn neg(self) -> LadderPolynomial {
        self.scaled(C64::new(-1.0, 0.0))
    }
}

impl Mul for &LadderPolynomial {
    type Output = LadderPolynomial;
    fn mul(self, rhs: Self) -> LadderPolynomial {
        let mut out = LadderPolynomial::zero();
        for (mx, cx) in self.terms.iter() {
            for (my, cy) in rhs.terms.iter() {
                let coeff = cx * cy;
                for (mono, weight) in monomial_product(mx, my) {
                    out.add_term(mono, coeff * weight);
                }
            }
        }
        out
    }
}

impl Mul<C64> for &LadderPolynomial {
    type Output = LadderPolynomial;
    fn mul(self, rhs: C64) -> LadderPolynomial {
        self.scaled(rhs)
    }
}

impl fmt::Display for LadderPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) {m}")?;
        }
        Ok(())
    }
}
