//! Spectral functions of the two dressed example graphs: the three-bond star
//! with Dirichlet dead ends and a Kirchhoff center, and the four-vertex chain.

use crate::error::{Error, Result};
use crate::trigcore::{normalize, Term, TrigSpectralFunction};

/// Three-bond star graph carrying scaling potentials `V_l(E) = λ_l E`.
///
/// Stored in reduced form: `β_l = sqrt(1 - λ_l)` and bond actions
/// `α_l = β_l L_l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarGraphSpec {
    alpha: [f64; 3],
    beta: [f64; 3],
}

impl StarGraphSpec {
    /// From bond lengths `L_l > 0` and scaling constants `0 <= λ_l < 1`.
    pub fn from_lengths(lengths: [f64; 3], lambda: [f64; 3]) -> Result<Self> {
        for (l, (&len, &lam)) in lengths.iter().zip(&lambda).enumerate() {
            if !(len.is_finite() && len > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "bond length L{} must be positive, got {len}",
                    l + 1
                )));
            }
            if !(lam.is_finite() && (0.0..1.0).contains(&lam)) {
                return Err(Error::InvalidParameter(format!(
                    "scaling constant lambda{} must lie in [0, 1), got {lam}",
                    l + 1
                )));
            }
        }
        let beta = lambda.map(|lam| (1.0 - lam).sqrt());
        let alpha = [0, 1, 2].map(|l| beta[l] * lengths[l]);
        Ok(StarGraphSpec { alpha, beta })
    }

    /// From reduced bond actions `α_l > 0` and `β_l` in `(0, 1]`.
    pub fn from_actions(alpha: [f64; 3], beta: [f64; 3]) -> Result<Self> {
        for l in 0..3 {
            if !(alpha[l].is_finite() && alpha[l] > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "bond action alpha{} must be positive, got {}",
                    l + 1,
                    alpha[l]
                )));
            }
            if !(beta[l].is_finite() && beta[l] > 0.0 && beta[l] <= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "beta{} must lie in (0, 1], got {}",
                    l + 1,
                    beta[l]
                )));
            }
        }
        Ok(StarGraphSpec { alpha, beta })
    }

    pub fn alpha(&self) -> [f64; 3] {
        self.alpha
    }

    pub fn beta(&self) -> [f64; 3] {
        self.beta
    }
}

/// Raw actions `(S0, S1, S2, S3)`; `S3` (or any `S_j`) may be negative.
pub fn star_actions(spec: &StarGraphSpec) -> [f64; 4] {
    let [a1, a2, a3] = spec.alpha;
    [a1 + a2 + a3, -a1 + a2 + a3, a1 - a2 + a3, a1 + a2 - a3]
}

/// Amplitudes `(a1, a2, a3)`; they always sum to one.
pub fn star_amplitudes(spec: &StarGraphSpec) -> [f64; 3] {
    let [b1, b2, b3] = spec.beta;
    let total = b1 + b2 + b3;
    [
        (-b1 + b2 + b3) / total,
        (b1 - b2 + b3) / total,
        (b1 + b2 - b3) / total,
    ]
}

pub fn build_star(spec: &StarGraphSpec) -> Result<TrigSpectralFunction> {
    let [s0, s1, s2, s3] = star_actions(spec);
    let [a1, a2, a3] = star_amplitudes(spec);
    normalize(
        (s0, 0.0),
        &[
            Term::new(s1, 0.0, a1),
            Term::new(s2, 0.0, a2),
            Term::new(s3, 0.0, a3),
        ],
    )
}

/// Four-vertex chain graph given by its action combinations and the
/// scaling constants entering the vertex reflection coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainGraphSpec {
    actions: [f64; 4],
    beta: [f64; 3],
}

impl ChainGraphSpec {
    pub fn new(actions: [f64; 4], beta: [f64; 3]) -> Result<Self> {
        if !(actions[0].is_finite() && actions[0] > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "chain action S0 must be positive, got {}",
                actions[0]
            )));
        }
        for (j, s) in actions.iter().enumerate().skip(1) {
            if !(s.is_finite() && s.abs() <= actions[0]) {
                return Err(Error::InvalidParameter(format!(
                    "chain action S{j} = {s} must satisfy |S{j}| <= S0"
                )));
            }
        }
        for (l, b) in beta.iter().enumerate() {
            if !(b.is_finite() && *b > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "beta{} must be positive, got {b}",
                    l + 1
                )));
            }
        }
        Ok(ChainGraphSpec { actions, beta })
    }

    /// Chain whose actions are the star combinations of bond actions `α`.
    pub fn from_bond_actions(alpha: [f64; 3], beta: [f64; 3]) -> Result<Self> {
        let [a1, a2, a3] = alpha;
        Self::new(
            [a1 + a2 + a3, -a1 + a2 + a3, a1 - a2 + a3, a1 + a2 - a3],
            beta,
        )
    }

    pub fn actions(&self) -> [f64; 4] {
        self.actions
    }

    pub fn beta(&self) -> [f64; 3] {
        self.beta
    }

    /// Reflection coefficients `(r2, r3)` at the two inner vertices.
    pub fn reflections(&self) -> (f64, f64) {
        let [b1, b2, b3] = self.beta;
        ((b1 - b2) / (b1 + b2), (b2 - b3) / (b2 + b3))
    }
}

/// `sin(S0 k) + r2 sin(S1 k) + r2 r3 sin(S2 k) - r3 sin(S3 k)` in cosine form.
pub fn build_chain(spec: &ChainGraphSpec) -> Result<TrigSpectralFunction> {
    let [s0, s1, s2, s3] = spec.actions;
    let (r2, r3) = spec.reflections();
    normalize(
        (s0, 0.5),
        &[
            Term::new(s1, 0.5, -r2),
            Term::new(s2, 0.5, -r2 * r3),
            Term::new(s3, 0.5, r3),
        ],
    )
}
