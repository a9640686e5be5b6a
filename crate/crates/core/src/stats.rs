//! Inference over outcome tallies: frequency estimates, clock-phase
//! estimation by inverting the protocol's closed-form law, Pearson
//! goodness-of-fit, likelihood-ratio model selection, and sample-size
//! planning for discriminating two candidate collapse surfaces.

pub mod special;

use thiserror::Error;

use crate::qstate::JointProbs;
use crate::rng;
use crate::scalar::Real;
use special::{gamma_q, normal_quantile};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("counts are empty: inference needs at least one trial")]
    EmptyCounts,
    #[error("confidence level must lie in (0, 1)")]
    InvalidConfidence,
    #[error("expected count {expected:.3} below 5 in a nonzero cell: chi-square unreliable")]
    UnderSampledCell { expected: f64 },
    #[error("hypotheses are identical: nothing to discriminate")]
    IdenticalHypotheses,
    #[error("probabilities must lie strictly inside (0, 1) and differ")]
    DegenerateProportions,
    #[error("significance/power levels must lie in (0, 1)")]
    InvalidLevel,
}

/// Tally of the four `(C, B)` outcome pairs over a batch of trials.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct JointCounts {
    pub n_pp: u64,
    pub n_pm: u64,
    pub n_mp: u64,
    pub n_mm: u64,
}

impl JointCounts {
    pub fn new(n_pp: u64, n_pm: u64, n_mp: u64, n_mm: u64) -> Self {
        Self {
            n_pp,
            n_pm,
            n_mp,
            n_mm,
        }
    }

    pub fn total(&self) -> u64 {
        self.n_pp + self.n_pm + self.n_mp + self.n_mm
    }

    pub fn as_array(&self) -> [u64; 4] {
        [self.n_pp, self.n_pm, self.n_mp, self.n_mm]
    }

    /// Trials where both outcomes agreed.
    pub fn n_same(&self) -> u64 {
        self.n_pp + self.n_mm
    }
}

/// Cell frequencies of a tally.
pub fn empirical<T: Real>(counts: &JointCounts) -> Result<JointProbs<T>, StatsError> {
    let total = counts.total();
    if total == 0 {
        return Err(StatsError::EmptyCounts);
    }
    let n = T::of(total as f64);
    let f = |c: u64| T::of(c as f64) / n;
    Ok(
        JointProbs::new(f(counts.n_pp), f(counts.n_pm), f(counts.n_mp), f(counts.n_mm))
            .expect("frequencies form a distribution"),
    )
}

/// Estimated clock phase with its confidence interval, folded into
/// `[0, π/2]`, the maximal interval on which `sin²` is injective. The
/// underlying `ω·t_a` is identifiable only up to the folding symmetries
/// (period π, reflection about π/2); see [`phase_preimages`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseEstimate<T> {
    pub theta_hat: T,
    pub ci_low: T,
    pub ci_high: T,
    pub n: u64,
}

/// Wilson score interval for a binomial proportion; behaves at the 0 and 1
/// boundaries, which the protocol reaches at phases 0 and π/2.
fn wilson_interval<T: Real>(successes: u64, total: u64, z: T) -> (T, T) {
    let n = T::of(total as f64);
    let p_hat = T::of(successes as f64) / n;
    let z2 = z * z;
    let denom = T::one() + z2 / n;
    let center = (p_hat + z2 / (T::of(2.0) * n)) / denom;
    let half = z * (p_hat * (T::one() - p_hat) / n + z2 / (T::of(4.0) * n * n)).sqrt() / denom;
    ((center - half).max(T::zero()), (center + half).min(T::one()))
}

/// Maximum-likelihood phase estimate from the same-outcome fraction:
/// `P(same) = sin²(ω t_a)` inverts to `θ̂ = arcsin √f_same`. The confidence
/// interval is a Wilson score interval for `f_same` pushed through the same
/// monotone map.
pub fn mle_phase<T: Real>(
    counts: &JointCounts,
    confidence: T,
) -> Result<PhaseEstimate<T>, StatsError> {
    let total = counts.total();
    if total == 0 {
        return Err(StatsError::EmptyCounts);
    }
    if !(confidence > T::zero() && confidence < T::one()) {
        return Err(StatsError::InvalidConfidence);
    }
    let f_same = T::of(counts.n_same() as f64) / T::of(total as f64);
    let fold = |p: T| p.max(T::zero()).min(T::one()).sqrt().asin();
    let z = normal_quantile((T::one() + confidence) / T::of(2.0));
    let (lo, hi) = wilson_interval(counts.n_same(), total, z);
    Ok(PhaseEstimate {
        theta_hat: fold(f_same),
        ci_low: fold(lo),
        ci_high: fold(hi),
        n: total,
    })
}

/// All times `t` in `[window.0, window.1]` whose phase `ω·t` folds to
/// `theta`: the solutions of `sin²(ωt) = sin²(theta)`, namely
/// `(kπ ± theta)/ω` for integer `k`. Sorted, deduplicated.
pub fn phase_preimages<T: Real>(theta: T, omega: T, window: (T, T)) -> Vec<T> {
    let (lo, hi) = window;
    if !omega.is_finite() || omega <= T::zero() || hi < lo {
        return Vec::new();
    }
    let pi = T::PI();
    let mut out: Vec<T> = Vec::new();
    let k_lo = ((lo * omega - theta) / pi).floor().to_f64().unwrap_or(0.0) as i64 - 1;
    let k_hi = ((hi * omega + theta) / pi).ceil().to_f64().unwrap_or(0.0) as i64 + 1;
    for k in k_lo..=k_hi {
        let base = pi * T::of(k as f64);
        for candidate in [(base + theta) / omega, (base - theta) / omega] {
            if candidate >= lo && candidate <= hi {
                out.push(candidate);
            }
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite preimages"));
    out.dedup_by(|a, b| (*a - *b).abs() <= T::ALGEBRA_TOL);
    out
}

/// Pearson goodness-of-fit result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoodnessOfFit<T> {
    pub stat: T,
    pub dof: u32,
    pub p_value: T,
}

/// Pearson chi-square test of a tally against an expected distribution.
///
/// Cells with zero expected probability are excluded from the statistic and
/// the degrees of freedom, but any observed count in such a cell is an
/// impossible event under the hypothesis: the test returns `p_value = 0`
/// (with an infinite statistic). Every included cell must have expected
/// count at least 5, the usual validity floor for the chi-square
/// approximation.
pub fn chi_square_gof<T: Real>(
    counts: &JointCounts,
    expected: &JointProbs<T>,
) -> Result<GoodnessOfFit<T>, StatsError> {
    let total = counts.total();
    if total == 0 {
        return Err(StatsError::EmptyCounts);
    }
    let n = T::of(total as f64);
    let obs = counts.as_array();
    let probs = expected.as_array();

    let nonzero_cells = probs.iter().filter(|&&p| p > T::zero()).count() as u32;
    let dof = nonzero_cells.saturating_sub(1);

    for (o, p) in obs.iter().zip(probs.iter()) {
        if *p == T::zero() && *o > 0 {
            return Ok(GoodnessOfFit {
                stat: T::infinity(),
                dof,
                p_value: T::zero(),
            });
        }
    }

    let mut stat = T::zero();
    for (o, p) in obs.iter().zip(probs.iter()) {
        if *p == T::zero() {
            continue;
        }
        let expected_count = n * *p;
        if expected_count < T::of(5.0) {
            return Err(StatsError::UnderSampledCell {
                expected: expected_count.to_f64().unwrap_or(f64::NAN),
            });
        }
        let diff = T::of(*o as f64) - expected_count;
        stat += diff * diff / expected_count;
    }

    let p_value = if dof == 0 {
        T::one()
    } else {
        gamma_q(T::of(dof as f64) / T::of(2.0), stat / T::of(2.0))
    };
    Ok(GoodnessOfFit { stat, dof, p_value })
}

/// Multinomial log-likelihood `Σ n_cell · ln(p_cell)` over nonzero-count
/// cells; negative infinity if any observed cell has zero probability.
pub fn log_likelihood<T: Real>(counts: &JointCounts, probs: &JointProbs<T>) -> T {
    let mut ll = T::zero();
    for (o, p) in counts.as_array().iter().zip(probs.as_array().iter()) {
        if *o == 0 {
            continue;
        }
        if *p == T::zero() {
            return T::neg_infinity();
        }
        ll += T::of(*o as f64) * p.ln();
    }
    ll
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    H0,
    H1,
}

impl std::fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Hypothesis::H0 => "h0",
            Hypothesis::H1 => "h1",
        })
    }
}

/// Outcome of a likelihood-ratio comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LrDecision<T> {
    pub chosen: Hypothesis,
    /// `log L(h1) − log L(h0)`; zero when the data are impossible under
    /// both hypotheses.
    pub log_lr: T,
}

/// Likelihood-ratio decision between two fully specified hypotheses:
/// chooses `h1` iff the log-likelihood ratio is strictly positive; ties
/// retain the null.
pub fn likelihood_ratio_decision<T: Real>(
    counts: &JointCounts,
    h0: &JointProbs<T>,
    h1: &JointProbs<T>,
) -> Result<LrDecision<T>, StatsError> {
    if h0.as_array() == h1.as_array() {
        return Err(StatsError::IdenticalHypotheses);
    }
    let ll0 = log_likelihood(counts, h0);
    let ll1 = log_likelihood(counts, h1);
    let log_lr = if ll0 == T::neg_infinity() && ll1 == T::neg_infinity() {
        T::zero()
    } else {
        ll1 - ll0
    };
    let chosen = if log_lr > T::zero() {
        Hypothesis::H1
    } else {
        Hypothesis::H0
    };
    Ok(LrDecision { chosen, log_lr })
}

/// One-sided two-proportion sample size: the number of trials needed to
/// distinguish success probability `p1` from `p0` at significance `alpha`
/// with the given `power`,
///
/// ```text
/// n = ⌈ ( (z_{1−α}·√(p0(1−p0)) + z_{power}·√(p1(1−p1))) / |p1 − p0| )² ⌉
/// ```
///
/// No intermediate rounding: the expression is evaluated in floating point
/// and a single ceiling is taken at the end (minimum 1).
pub fn required_samples<T: Real>(p0: T, p1: T, alpha: T, power: T) -> Result<u64, StatsError> {
    let open_unit = |x: T| x > T::zero() && x < T::one();
    if !open_unit(p0) || !open_unit(p1) || p0 == p1 {
        return Err(StatsError::DegenerateProportions);
    }
    if !open_unit(alpha) || !open_unit(power) {
        return Err(StatsError::InvalidLevel);
    }
    let z_alpha = normal_quantile(T::one() - alpha);
    let z_power = normal_quantile(power);
    let sd0 = (p0 * (T::one() - p0)).sqrt();
    let sd1 = (p1 * (T::one() - p1)).sqrt();
    let ratio = (z_alpha * sd0 + z_power * sd1) / (p1 - p0).abs();
    let n = (ratio * ratio).ceil().to_f64().unwrap_or(f64::NAN);
    if !n.is_finite() {
        return Err(StatsError::DegenerateProportions);
    }
    Ok((n as u64).max(1))
}

/// Sample a tally of `n_trials` categorical draws from `probs`, keyed by
/// `seed` through the counter-based stream (draw `t` uses stream `t`).
pub fn sample_counts<T: Real>(probs: &JointProbs<T>, n_trials: u64, seed: u64) -> JointCounts {
    let p = probs.as_array();
    let c1 = p[0];
    let c2 = c1 + p[1];
    let c3 = c2 + p[2];
    let mut counts = JointCounts::default();
    for trial in 0..n_trials {
        let u = T::of(rng::uniform(seed, trial, 0));
        if u < c1 {
            counts.n_pp += 1;
        } else if u < c2 {
            counts.n_pm += 1;
        } else if u < c3 {
            counts.n_mp += 1;
        } else {
            counts.n_mm += 1;
        }
    }
    counts
}

/// Seeded Monte Carlo estimate of how often the likelihood-ratio decision
/// picks `truth` when the data really come from it: returns the number of
/// correct selections out of `repetitions`, each drawing `n_trials`
/// outcomes from the true distribution with an independently derived seed.
pub fn monte_carlo_power<T: Real>(
    h0: &JointProbs<T>,
    h1: &JointProbs<T>,
    truth: Hypothesis,
    n_trials: u64,
    repetitions: u64,
    seed: u64,
) -> Result<u64, StatsError> {
    let true_probs = match truth {
        Hypothesis::H0 => h0,
        Hypothesis::H1 => h1,
    };
    let mut correct = 0;
    for rep in 0..repetitions {
        let counts = sample_counts(true_probs, n_trials, rng::derive(seed, rep));
        let decision = likelihood_ratio_decision(&counts, h0, h1)?;
        if decision.chosen == truth {
            correct += 1;
        }
    }
    Ok(correct)
}
