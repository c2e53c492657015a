//! Convergence-aware summation of one-sided series.

use crate::error::{PqError, Result};

/// Truncation policy for [`sum_series`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_terms: usize,
    /// Successive small terms required before declaring convergence.
    pub consecutive_small: usize,
    /// Partial sums beyond this magnitude are treated as divergent.
    pub divergence_bound: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-300,
            max_terms: 100_000,
            consecutive_small: 3,
            divergence_bound: 1e12,
        }
    }
}

impl SeriesConfig {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_tol > 0.0
            && self.abs_tol > 0.0
            && self.max_terms > 0
            && self.consecutive_small >= 1
            && self.divergence_bound > 0.0;
        if ok {
            Ok(())
        } else {
            Err(PqError::InvalidArgument(format!(
                "invalid series config {self:?}"
            )))
        }
    }

    /// Width of the window used by the non-decay probe.
    fn probe_window(&self) -> usize {
        self.consecutive_small * 10
    }
}

/// Outcome of a summation. Only `Converged` carries a trustworthy value; the
/// other statuses report the partial sum reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Converged,
    MaxTermsExceeded,
    DivergenceDetected,
}

impl Status {
    /// The more severe of two statuses.
    pub fn worst(self, other: Status) -> Status {
        self.max(other)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Converged => "Converged",
            Status::MaxTermsExceeded => "MaxTermsExceeded",
            Status::DivergenceDetected => "DivergenceDetected",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    pub status: Status,
    pub tail_estimate: f64,
}

impl SeriesResult {
    /// An exact value that needed no summation.
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            terms_used: 0,
            status: Status::Converged,
            tail_estimate: 0.0,
        }
    }

    pub fn is_converged(&self) -> bool {
        self.status == Status::Converged
    }

    /// `self + sign·other`, keeping the worst status and adding the tails.
    pub fn combine(self, sign: f64, other: SeriesResult) -> Self {
        Self {
            value: self.value + sign * other.value,
            terms_used: self.terms_used + other.terms_used,
            status: self.status.worst(other.status),
            tail_estimate: self.tail_estimate + other.tail_estimate,
        }
    }

    pub fn negate(self) -> Self {
        Self {
            value: -self.value,
            ..self
        }
    }
}

/// Sums `term(0) + term(1) + …` until the tail is negligible, the terms stop
/// decaying, the partial sum blows past `divergence_bound`, or `max_terms`
/// is reached.
///
/// Convergence is declared after `consecutive_small` successive terms with
/// `|t| ≤ abs_tol + rel_tol·(1 + |partial|)`. The non-decay probe splits the
/// last `10·consecutive_small` terms into an older and a newer half and flags
/// divergence when the newer half's largest term is no smaller than the older
/// half's; it is a heuristic and never a proof.
pub fn sum_series<F>(mut term: F, config: &SeriesConfig) -> Result<SeriesResult>
where
    F: FnMut(usize) -> Result<f64>,
{
    config.validate()?;
    let window = config.probe_window();
    let mut recent: Vec<f64> = Vec::with_capacity(window);
    let mut partial = 0.0;
    let mut small_run = 0usize;

    let finish = |value: f64, terms_used: usize, status: Status, tail: f64| SeriesResult {
        value,
        terms_used,
        status,
        tail_estimate: tail,
    };

    for j in 0..config.max_terms {
        let t = term(j)?;
        if !t.is_finite() {
            return Err(PqError::NonFiniteTerm { index: j as i64 });
        }
        partial += t;
        let magnitude = t.abs();

        if recent.len() == window {
            recent.remove(0);
        }
        recent.push(magnitude);

        if partial.abs() > config.divergence_bound {
            return Ok(finish(
                partial,
                j + 1,
                Status::DivergenceDetected,
                f64::INFINITY,
            ));
        }

        let threshold = config.abs_tol + config.rel_tol * (1.0 + partial.abs());
        if magnitude <= threshold {
            small_run += 1;
            if small_run >= config.consecutive_small {
                let tail = recent[recent.len() - config.consecutive_small..]
                    .iter()
                    .fold(0.0_f64, |m, &v| m.max(v));
                if tail <= config.abs_tol + config.rel_tol * (1.0 + partial.abs()) {
                    return Ok(finish(partial, j + 1, Status::Converged, tail));
                }
            }
            continue;
        }
        small_run = 0;

        if recent.len() == window {
            let (older, newer) = recent.split_at(window / 2);
            let max = |s: &[f64]| s.iter().fold(0.0_f64, |m, &v| m.max(v));
            let newer_max = max(newer);
            if newer_max >= max(older) {
                return Ok(finish(
                    partial,
                    j + 1,
                    Status::DivergenceDetected,
                    newer_max,
                ));
            }
        }
    }

    let tail = recent.last().copied().unwrap_or(0.0);
    Ok(finish(
        partial,
        config.max_terms,
        Status::MaxTermsExceeded,
        tail,
    ))
}
