//! Spectral trigonometric polynomials and their derivative ladders.
//!
//! A spectral function has the form
//!
//! ```text
//! g(k) = cos(S0 k - π γ0) - Σ_j a_j cos(S_j k - π γ_j)
//! ```
//!
//! with `S0 > 0` and `0 <= S_j < S0`. Phases are stored in units of π so that
//! the quarter-period shifts produced by differentiation stay exact.

use crate::error::{Error, Result};

/// Default safety cap on the length of a derivative ladder.
pub const DEFAULT_MAX_ORDER: usize = 64;

/// One subleading cosine term `a cos(S k - π γ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub action: f64,
    pub phase: f64,
    pub amplitude: f64,
}

impl Term {
    pub fn new(action: f64, phase: f64, amplitude: f64) -> Self {
        Term {
            action,
            phase,
            amplitude,
        }
    }
}

/// A normalized spectral function: unit leading cosine plus subleading terms.
///
/// Instances are only produced by [`normalize`] (or by operations that
/// preserve normalization), so every instance satisfies `S0 > 0`,
/// `0 <= S_j < S0`, no duplicate `(S_j, γ_j mod 2)` pairs and no zero
/// amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigSpectralFunction {
    s0: f64,
    gamma0: f64,
    terms: Vec<Term>,
}

/// Reduce a phase (in units of π) into `[0, 2)`, mapping `-0.0` to `0.0`.
fn reduce_phase(gamma: f64) -> f64 {
    let r = gamma.rem_euclid(2.0);
    // rem_euclid can round up to exactly 2.0 for tiny negative inputs
    if r >= 2.0 {
        0.0
    } else {
        r + 0.0
    }
}

/// Build a normalized spectral function from a leading `(S0, γ0)` pair and a
/// list of raw, possibly signed and duplicated, terms.
///
/// Negative actions are folded with `cos(-x) = cos(x)`; terms sharing an
/// action and a phase (mod 2) are merged; a term whose action equals `S0`
/// is folded into the leading coefficient, after which the whole function
/// is rescaled so the leading coefficient is one. Zero amplitudes are
/// dropped. Phases are reduced into `[0, 2)`.
pub fn normalize(leading: (f64, f64), raw: &[Term]) -> Result<TrigSpectralFunction> {
    let (s0, gamma0) = leading;
    if !(s0.is_finite() && s0 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "leading action must be positive and finite, got {s0}"
        )));
    }
    if !gamma0.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "leading phase must be finite, got {gamma0}"
        )));
    }
    let gamma0 = reduce_phase(gamma0);

    let mut leading_coeff = 1.0;
    let mut merged: Vec<Term> = Vec::with_capacity(raw.len());
    for t in raw {
        if !(t.action.is_finite() && t.phase.is_finite() && t.amplitude.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite term ({}, {}, {})",
                t.action, t.phase, t.amplitude
            )));
        }
        if t.action.abs() > s0 {
            return Err(Error::InvalidParameter(format!(
                "term action |{}| exceeds leading action {s0}",
                t.action
            )));
        }
        let (action, phase) = if t.action < 0.0 {
            (-t.action, reduce_phase(-t.phase))
        } else {
            (t.action + 0.0, reduce_phase(t.phase))
        };

        if action == s0 {
            // cos(x - πγ) = ±cos(x - πγ0) only when γ ≡ γ0 (mod 1)
            let shift = reduce_phase(phase - gamma0);
            if shift == 0.0 {
                leading_coeff -= t.amplitude;
            } else if shift == 1.0 {
                leading_coeff += t.amplitude;
            } else {
                return Err(Error::UnfoldableTopAction { action, phase });
            }
            continue;
        }

        match merged
            .iter_mut()
            .find(|m| m.action == action && m.phase == phase)
        {
            Some(m) => m.amplitude += t.amplitude,
            None => merged.push(Term::new(action, phase, t.amplitude)),
        }
    }

    if leading_coeff == 0.0 {
        return Err(Error::DegenerateLeadingTerm);
    }
    let terms = merged
        .into_iter()
        .filter(|t| t.amplitude != 0.0)
        .map(|t| {
            if leading_coeff == 1.0 {
                t
            } else {
                Term::new(t.action, t.phase, t.amplitude / leading_coeff)
            }
        })
        .collect();

    Ok(TrigSpectralFunction { s0, gamma0, terms })
}

impl TrigSpectralFunction {
    /// A bare leading cosine `cos(S0 k - π γ0)` with no subleading terms.
    pub fn pure(s0: f64, gamma0: f64) -> Result<Self> {
        normalize((s0, gamma0), &[])
    }

    pub fn s0(&self) -> f64 {
        self.s0
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Number of subleading terms `N`.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `cos(S0 k - π γ0) - Σ a_j cos(S_j k - π γ_j)`, summed naively.
    pub fn evaluate(&self, k: f64) -> f64 {
        let pi = std::f64::consts::PI;
        let lead = (self.s0 * k - pi * self.gamma0).cos();
        self.terms.iter().fold(lead, |acc, t| {
            acc - t.amplitude * (t.action * k - pi * t.phase).cos()
        })
    }

    /// `Σ_j |a_j|`; the function is regular when this is strictly below one.
    pub fn regularity_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.amplitude.abs()).sum()
    }

    pub fn is_regular(&self) -> bool {
        self.regularity_sum() < 1.0
    }

    /// Amplitude envelope `1 + Σ|a_j|`, the scale used for "is this zero" tests.
    pub fn envelope(&self) -> f64 {
        1.0 + self.regularity_sum()
    }

    /// The `m`-th derivative divided by `S0^m`.
    ///
    /// Every phase moves by `-m/2` and every amplitude picks up
    /// `(S_j / S0)^m`. Terms with `S_j = 0` vanish for `m >= 1`.
    pub fn derivative_level(&self, m: usize) -> TrigSpectralFunction {
        if m == 0 {
            return self.clone();
        }
        let shift = m as f64 / 2.0;
        let exp = i32::try_from(m).unwrap_or(i32::MAX);
        let terms = self
            .terms
            .iter()
            .filter(|t| t.action > 0.0)
            .map(|t| {
                Term::new(
                    t.action,
                    reduce_phase(t.phase - shift),
                    t.amplitude * (t.action / self.s0).powi(exp),
                )
            })
            .filter(|t| t.amplitude != 0.0)
            .collect();
        TrigSpectralFunction {
            s0: self.s0,
            gamma0: reduce_phase(self.gamma0 - shift),
            terms,
        }
    }

    /// Raw `(S0, γ0)` and term list, suitable for re-normalization.
    pub fn to_raw(&self) -> ((f64, f64), Vec<Term>) {
        ((self.s0, self.gamma0), self.terms.clone())
    }
}

/// The chain `g^(0), …, g^(M)` ending at the first regular level.
#[derive(Debug, Clone)]
pub struct DerivativeLadder {
    levels: Vec<TrigSpectralFunction>,
}

impl DerivativeLadder {
    /// Order `M` of the ladder: the smallest regular level.
    pub fn order(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, m: usize) -> Option<&TrigSpectralFunction> {
        self.levels.get(m)
    }

    pub fn levels(&self) -> &[TrigSpectralFunction] {
        &self.levels
    }

    /// The regular top level `g^(M)`.
    pub fn top(&self) -> &TrigSpectralFunction {
        self.levels.last().expect("ladder has at least one level")
    }

    pub fn base(&self) -> &TrigSpectralFunction {
        &self.levels[0]
    }

    /// `Σ|a_j^(m)|` for `m = 0..=M`.
    pub fn regularity_sums(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.regularity_sum()).collect()
    }
}

/// Differentiate until the regularity condition holds.
///
/// Sums exactly equal to one count as irregular.
pub fn build_ladder(f: &TrigSpectralFunction, max_order: usize) -> Result<DerivativeLadder> {
    let mut levels = vec![f.clone()];
    let mut m = 0;
    while !levels[m].is_regular() {
        if m == max_order {
            return Err(Error::OrderCapExceeded {
                cap: max_order,
                sum: levels[m].regularity_sum(),
            });
        }
        m += 1;
        levels.push(f.derivative_level(m));
    }
    Ok(DerivativeLadder { levels })
}
