//! The proxy-qubit clock-synchronization protocol, end to end.
//!
//! Register convention throughout: three qubits ordered `(C, A, B)`, that
//! is, the proxy, Alice's clock qubit, and Bob's degenerate qubit, indexed
//! 0, 1, 2, amplitudes big-endian over that order.
//!
//! The run of one experiment: the clock pair `(A, B)` starts in the
//! singlet, the proxy starts in `|+⟩`, `A` accrues phase at rate `ω`, the
//! proxy interaction imprints `A`'s `±` information onto `C` at time `t_u`,
//! and Bob measures `C` then `B` in the `±` basis at `t1` and `t2`. The
//! joint outcome distribution is
//!
//! ```text
//! P(+,+) = P(−,−) = ½ sin²(ω·t_a),    P(+,−) = P(−,+) = ½ cos²(ω·t_a)
//! ```
//!
//! where `t_a`, the clock phase that got frozen into the correlations, is
//! what the reduction models disagree about:
//!
//! - [`ReductionModel::StandardQm`]: unitary evolution plus the Born rule
//!   on the full state; the correlations carry the interaction time `t_u`
//!   no matter when or how anyone measures.
//! - [`ReductionModel::HypersurfaceCollapse`]: the measurement of `C`
//!   disentangles the system along a flat spacelike surface through Bob's
//!   measurement event, so `t_a` is that surface's intercept with Alice's
//!   worldline.
//! - [`ReductionModel::DirectMeasurement`]: Alice measures her own qubit at
//!   a stated time, which plays the role of `t_a` directly.
//!
//! Either way only the correlations move; each party's marginal stays
//! exactly 50/50, so nothing here signals.

use thiserror::Error;

pub use crate::qstate::JointProbs;

use crate::qstate::{Basis, QstateError, StateVector};
use crate::rng;
use crate::scalar::Real;
use crate::spacetime::{FlatHypersurface, SpacetimeError, SpacetimeEvent, StaticWorldline};
use crate::stats::JointCounts;

/// Proxy qubit register index.
pub const QUBIT_C: usize = 0;
/// Clock qubit register index.
pub const QUBIT_A: usize = 1;
/// Bob's qubit register index.
pub const QUBIT_B: usize = 2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProtocolError {
    #[error("non-finite configuration value")]
    NonFinite,
    #[error("omega must be positive")]
    NonPositiveOmega,
    #[error("Alice and Bob must sit at distinct positions (a != b)")]
    CoincidentObservers,
    #[error("times must satisfy 0 <= t_u <= t1 <= t2")]
    TimeOrdering,
    #[error("n_trials must be at least 1")]
    NoTrials,
    #[error("trial index {index} out of range for {n_trials} trials")]
    TrialOutOfRange { index: u64, n_trials: u64 },
    #[error("collapse hypersurface must be anchored at Bob's measurement event (b, t1)")]
    AnchorMismatch,
    #[error(
        "hypersurface intercepts Alice's worldline at {intercept} before the proxy \
         interaction at {t_u}: no proxy correlation exists yet at disentanglement"
    )]
    CollapseBeforeInteraction { intercept: f64, t_u: f64 },
    #[error("state time {t} outside [0, t1 = {t1}]")]
    TimeOutOfRange { t: f64, t1: f64 },
    #[error(transparent)]
    State(#[from] QstateError),
    #[error(transparent)]
    Geometry(#[from] SpacetimeError),
}

/// How the measurement of the proxy is deemed to reduce the entangled state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReductionModel<T> {
    /// Textbook baseline: no collapse geometry at all; correlations carry
    /// the proxy interaction time.
    StandardQm,
    /// Reduction along a flat spacelike surface through Bob's measurement
    /// event; the surface's intercept with Alice's worldline sets the
    /// clock phase.
    HypersurfaceCollapse(FlatHypersurface<T>),
    /// Alice measures her clock qubit herself at the given time.
    DirectMeasurement(T),
}

/// Full description of one experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolConfig<T> {
    /// Clock angular frequency (rad/s).
    pub omega: T,
    /// Alice's position (light-seconds).
    pub a: T,
    /// Bob's position (light-seconds).
    pub b: T,
    /// Proxy interaction time (s).
    pub t_u: T,
    /// Bob's proxy-measurement time (s).
    pub t1: T,
    /// Bob's B-measurement time (s); carried for audit output only, since B is
    /// degenerate, so no distribution depends on it.
    pub t2: T,
    pub model: ReductionModel<T>,
    pub n_trials: u64,
    pub seed: u64,
}

impl<T: Real> ProtocolConfig<T> {
    /// Check every structural invariant; the violated one is named in the
    /// error.
    pub fn validate(&self) -> Result<(), ProtocolError> {
        let times = [self.omega, self.a, self.b, self.t_u, self.t1, self.t2];
        if times.iter().any(|x| !x.is_finite()) {
            return Err(ProtocolError::NonFinite);
        }
        if self.omega <= T::zero() {
            return Err(ProtocolError::NonPositiveOmega);
        }
        if self.a == self.b {
            return Err(ProtocolError::CoincidentObservers);
        }
        if !(T::zero() <= self.t_u && self.t_u <= self.t1 && self.t1 <= self.t2) {
            return Err(ProtocolError::TimeOrdering);
        }
        if self.n_trials == 0 {
            return Err(ProtocolError::NoTrials);
        }
        match self.model {
            ReductionModel::StandardQm => {}
            ReductionModel::HypersurfaceCollapse(surface) => {
                let anchor = surface.anchor();
                if anchor.x != self.b || anchor.t != self.t1 {
                    return Err(ProtocolError::AnchorMismatch);
                }
            }
            ReductionModel::DirectMeasurement(t_a) => {
                if !t_a.is_finite() {
                    return Err(ProtocolError::NonFinite);
                }
            }
        }
        Ok(())
    }

    /// Alice's worldline.
    pub fn alice(&self) -> StaticWorldline<T> {
        StaticWorldline { x: self.a }
    }

    /// Bob's proxy-measurement event `(b, t1)`.
    pub fn bob_measurement_event(&self) -> SpacetimeEvent<T> {
        SpacetimeEvent {
            x: self.b,
            t: self.t1,
        }
    }
}

/// One simulated run of the protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord<T> {
    pub index: u64,
    pub c_outcome: Sign,
    pub b_outcome: Sign,
    /// Effective collapse time used to sample this trial.
    pub t_collapse: T,
}

/// A `±` measurement outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i8(v: i8) -> Option<Self> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// The closed-form joint distribution for clock phase `ω·t_a`:
/// `P(same sign) = sin²(ω t_a)` split evenly between `(+,+)` and `(−,−)`,
/// `P(opposite) = cos²(ω t_a)` split evenly between the off-diagonal cells.
///
/// Panics if the inputs are not finite.
pub fn analytic_joint<T: Real>(omega: T, t_a: T) -> JointProbs<T> {
    let theta = omega * t_a;
    assert!(theta.is_finite(), "analytic_joint requires finite inputs");
    let half = T::of(0.5);
    let s2 = theta.sin() * theta.sin();
    let c2 = theta.cos() * theta.cos();
    JointProbs::new(half * s2, half * c2, half * c2, half * s2)
        .expect("sin² + cos² probabilities are normalized")
}

/// The clock phase time each reduction model assigns to the trial
/// correlations.
///
/// For `HypersurfaceCollapse` the surface must be anchored at Bob's
/// measurement event, and its intercept with Alice's worldline must not
/// precede the proxy interaction: before `t_u` the proxy is uncorrelated
/// with the clock and there is nothing to disentangle.
pub fn effective_collapse_time<T: Real>(config: &ProtocolConfig<T>) -> Result<T, ProtocolError> {
    config.validate()?;
    match config.model {
        ReductionModel::StandardQm => Ok(config.t_u),
        ReductionModel::HypersurfaceCollapse(surface) => {
            let intercept = surface.intercept_time(config.alice());
            if intercept < config.t_u {
                return Err(ProtocolError::CollapseBeforeInteraction {
                    intercept: intercept.to_f64().unwrap_or(f64::NAN),
                    t_u: config.t_u.to_f64().unwrap_or(f64::NAN),
                });
            }
            Ok(intercept)
        }
        ReductionModel::DirectMeasurement(t_a) => Ok(t_a),
    }
}

/// First-principles state of the `(C, A, B)` register at laboratory time
/// `t ∈ [0, t1]`: proxy in `|+⟩`, clock pair in the singlet, `A` evolved to
/// `min(t, t_u)`, the proxy interaction applied once `t` reaches `t_u`, and
/// `A` evolved on to `t`.
pub fn build_state<T: Real>(
    config: &ProtocolConfig<T>,
    t: T,
) -> Result<StateVector<T>, ProtocolError> {
    config.validate()?;
    if !(t >= T::zero() && t <= config.t1) {
        return Err(ProtocolError::TimeOutOfRange {
            t: t.to_f64().unwrap_or(f64::NAN),
            t1: config.t1.to_f64().unwrap_or(f64::NAN),
        });
    }
    let mut state = StateVector::plus().tensor(&StateVector::singlet())?;
    let first_leg = t.min(config.t_u);
    state = state.apply_single(QUBIT_A, &crate::qstate::clock_evolution(config.omega, first_leg)?)?;
    if t >= config.t_u {
        state = state.proxy_interaction()?;
        state = state.apply_single(
            QUBIT_A,
            &crate::qstate::clock_evolution(config.omega, t - config.t_u)?,
        )?;
    }
    Ok(state)
}

/// Standard-quantum-mechanics prediction for the `(C, B)` outcome pair:
/// the exact Born distribution of the fully evolved three-qubit state at
/// `t1`, with `A` traced out. Ignores the configured reduction model.
///
/// Equals [`analytic_joint`]`(omega, t_u)` to working precision: `A`'s
/// evolution after the interaction is unitary on a qubit that is traced
/// out, so neither `t1` nor any collapse geometry can move this
/// distribution.
pub fn oracle_joint<T: Real>(config: &ProtocolConfig<T>) -> Result<JointProbs<T>, ProtocolError> {
    let state = build_state(config, config.t1)?;
    Ok(state.joint_distribution(QUBIT_C, QUBIT_B, Basis::PlusMinus)?)
}

/// The distribution the configured reduction model predicts, and the one
/// the simulator samples from: `analytic_joint` at the model's effective
/// collapse time.
pub fn model_joint<T: Real>(config: &ProtocolConfig<T>) -> Result<JointProbs<T>, ProtocolError> {
    let t_a = effective_collapse_time(config)?;
    Ok(analytic_joint(config.omega, t_a))
}

/// Conditional probability of `B = +` given the proxy outcome, under the
/// model distribution for phase `theta = ω·t_a`. Both `C` marginals are
/// exactly one half, so sampling `C` fair and `B` from this conditional
/// reproduces the joint distribution.
fn prob_b_plus_given<T: Real>(c: Sign, theta: T) -> T {
    let s = theta.sin();
    let c_ = theta.cos();
    match c {
        Sign::Plus => s * s,
        Sign::Minus => c_ * c_,
    }
}

/// Simulate one trial. The two uniform draws come from the counter-based
/// stream keyed by `(seed, trial_index, draw)`, so the record is a pure
/// function of the configuration: the same on every run and any thread
/// count.
pub fn run_trial<T: Real>(
    config: &ProtocolConfig<T>,
    trial_index: u64,
) -> Result<TrialRecord<T>, ProtocolError> {
    if trial_index >= config.n_trials {
        return Err(ProtocolError::TrialOutOfRange {
            index: trial_index,
            n_trials: config.n_trials,
        });
    }
    let t_a = effective_collapse_time(config)?;
    Ok(sample_trial(config, trial_index, t_a))
}

fn sample_trial<T: Real>(config: &ProtocolConfig<T>, trial_index: u64, t_a: T) -> TrialRecord<T> {
    let theta = config.omega * t_a;
    let u_c = rng::uniform(config.seed, trial_index, 0);
    let u_b = rng::uniform(config.seed, trial_index, 1);
    let c = if u_c < 0.5 { Sign::Plus } else { Sign::Minus };
    let b = if T::of(u_b) < prob_b_plus_given(c, theta) {
        Sign::Plus
    } else {
        Sign::Minus
    };
    TrialRecord {
        index: trial_index,
        c_outcome: c,
        b_outcome: b,
        t_collapse: t_a,
    }
}

/// Tally the four outcome pairs of a batch of records.
pub fn tally<T>(records: &[TrialRecord<T>]) -> JointCounts {
    let mut counts = JointCounts::default();
    for r in records {
        match (r.c_outcome, r.b_outcome) {
            (Sign::Plus, Sign::Plus) => counts.n_pp += 1,
            (Sign::Plus, Sign::Minus) => counts.n_pm += 1,
            (Sign::Minus, Sign::Plus) => counts.n_mp += 1,
            (Sign::Minus, Sign::Minus) => counts.n_mm += 1,
        }
    }
    counts
}

/// Run all configured trials sequentially.
pub fn run_trials<T: Real>(
    config: &ProtocolConfig<T>,
) -> Result<(Vec<TrialRecord<T>>, JointCounts), ProtocolError> {
    run_trials_with_threads(config, 1)
}

/// Run all configured trials on up to `threads` worker threads.
///
/// Records are keyed by trial index, so the returned list and tally are
/// bit-identical to the sequential run regardless of `threads`.
pub fn run_trials_with_threads<T: Real>(
    config: &ProtocolConfig<T>,
    threads: usize,
) -> Result<(Vec<TrialRecord<T>>, JointCounts), ProtocolError> {
    let t_a = effective_collapse_time(config)?;
    let n = config.n_trials;
    let records = if threads <= 1 || n < 2 {
        (0..n).map(|i| sample_trial(config, i, t_a)).collect()
    } else {
        let workers = threads.min(n as usize);
        let chunk = n.div_ceil(workers as u64);
        let mut records = Vec::with_capacity(n as usize);
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers as u64)
                .map(|w| {
                    let lo = w * chunk;
                    let hi = ((w + 1) * chunk).min(n);
                    scope.spawn(move || {
                        (lo..hi)
                            .map(|i| sample_trial(config, i, t_a))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for handle in handles {
                records.extend(handle.join().expect("trial worker panicked"));
            }
        });
        records
    };
    let counts = tally(&records);
    Ok((records, counts))
}
