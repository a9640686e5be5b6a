//! The five subcommands. Each returns the line-oriented `key: value`
//! summary it prints on success.

use std::path::PathBuf;
use std::time::Instant;

use proxyclock_core::protocol::{
    self, effective_collapse_time, model_joint, run_trials_with_threads, ReductionModel,
};
use proxyclock_core::spacetime::{self, FlatHypersurface, SpacetimeEvent, StaticWorldline};
use proxyclock_core::stats::{
    self, chi_square_gof, mle_phase, monte_carlo_power, phase_preimages, required_samples,
    Hypothesis,
};
use proxyclock_core::{rng, JointProbs64, ProtocolConfig64};

use crate::config::{format_config, parse_config};
use crate::csv;
use crate::{CliError, Flags};

fn push_line(out: &mut String, key: &str, value: impl std::fmt::Display) {
    out.push_str(key);
    out.push_str(": ");
    out.push_str(&value.to_string());
    out.push('\n');
}

fn push_config_echo(out: &mut String, config: &ProtocolConfig64) {
    for line in format_config(config).lines() {
        let (key, value) = line.split_once('=').expect("canonical config line");
        push_line(out, &format!("config.{key}"), value);
    }
}

fn push_probs(out: &mut String, prefix: &str, probs: &JointProbs64) {
    push_line(out, &format!("{prefix}.p_pp"), probs.p_pp);
    push_line(out, &format!("{prefix}.p_pm"), probs.p_pm);
    push_line(out, &format!("{prefix}.p_mp"), probs.p_mp);
    push_line(out, &format!("{prefix}.p_mm"), probs.p_mm);
}

/// Everything a run reports: the echoed configuration, the analytic table,
/// the tally and its frequencies with a goodness-of-fit check (absent for
/// analytic-only runs), the effective collapse time, and the wall-clock
/// duration. Rendered as line-oriented `key: value` text.
pub struct RunSummary {
    pub command: &'static str,
    pub config: ProtocolConfig64,
    pub collapse_time: f64,
    pub analytic: JointProbs64,
    pub sampled: Option<SampledSummary>,
    pub duration_s: f64,
}

pub struct SampledSummary {
    pub threads: usize,
    pub counts: stats::JointCounts,
    pub empirical: JointProbs64,
    pub goodness: Result<stats::GoodnessOfFit<f64>, stats::StatsError>,
    pub csv_path: PathBuf,
}

impl RunSummary {
    pub fn render(&self) -> String {
        let mut out = String::new();
        push_line(&mut out, "command", self.command);
        push_config_echo(&mut out, &self.config);
        if let Some(sampled) = &self.sampled {
            push_line(&mut out, "threads", sampled.threads);
        }
        push_line(&mut out, "collapse_time", self.collapse_time);
        push_probs(&mut out, "model", &self.analytic);
        if let Some(sampled) = &self.sampled {
            push_line(&mut out, "counts.n_pp", sampled.counts.n_pp);
            push_line(&mut out, "counts.n_pm", sampled.counts.n_pm);
            push_line(&mut out, "counts.n_mp", sampled.counts.n_mp);
            push_line(&mut out, "counts.n_mm", sampled.counts.n_mm);
            push_line(&mut out, "counts.total", sampled.counts.total());
            push_probs(&mut out, "empirical", &sampled.empirical);
            match &sampled.goodness {
                Ok(gof) => {
                    push_line(&mut out, "chi_square.stat", gof.stat);
                    push_line(&mut out, "chi_square.dof", gof.dof);
                    push_line(&mut out, "chi_square.p_value", gof.p_value);
                }
                Err(e) => push_line(&mut out, "chi_square.skipped", e),
            }
            push_line(&mut out, "csv", sampled.csv_path.display());
        }
        push_line(&mut out, "duration_s", format!("{:.6}", self.duration_s));
        out
    }
}

fn load_config(flags: &Flags) -> Result<ProtocolConfig64, CliError> {
    let path = PathBuf::from(flags.require("config")?);
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut config = parse_config(&text)?;
    if let Some(seed) = flags.get_u64("seed")? {
        config.seed = seed;
    }
    if let Some(trials) = flags.get_u64("trials")? {
        config.n_trials = trials;
    }
    config
        .validate()
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(config)
}

fn protocol_err(e: protocol::ProtocolError) -> CliError {
    CliError::Config(e.to_string())
}

/// Analytic prediction only: the model's joint table and the effective
/// collapse time. No sampling.
pub fn cmd_predict(flags: &Flags) -> Result<String, CliError> {
    flags.check_known(&["config", "seed", "trials"])?;
    let started = Instant::now();
    let config = load_config(flags)?;
    let collapse_time = effective_collapse_time(&config).map_err(protocol_err)?;
    let analytic = model_joint(&config).map_err(protocol_err)?;
    Ok(RunSummary {
        command: "predict",
        config,
        collapse_time,
        analytic,
        sampled: None,
        duration_s: started.elapsed().as_secs_f64(),
    }
    .render())
}

/// Run the configured trials, write one CSV row per trial, and print the
/// summary with a chi-square test of the tally against the model table.
pub fn cmd_simulate(flags: &Flags) -> Result<String, CliError> {
    flags.check_known(&["config", "out", "seed", "trials", "threads"])?;
    let started = Instant::now();
    let config = load_config(flags)?;
    let csv_path = PathBuf::from(flags.require("out")?);
    let threads = match flags.get_u64("threads")? {
        None => 1,
        Some(0) => return Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => n as usize,
    };

    let collapse_time = effective_collapse_time(&config).map_err(protocol_err)?;
    let analytic = model_joint(&config).map_err(protocol_err)?;
    let (records, counts) = run_trials_with_threads(&config, threads).map_err(protocol_err)?;
    csv::write_trials(&csv_path, &records)?;

    let empirical: JointProbs64 =
        stats::empirical(&counts).expect("counts nonempty by n_trials >= 1");
    let goodness = chi_square_gof(&counts, &analytic);
    Ok(RunSummary {
        command: "simulate",
        config,
        collapse_time,
        analytic,
        sampled: Some(SampledSummary {
            threads,
            counts,
            empirical,
            goodness,
            csv_path,
        }),
        duration_s: started.elapsed().as_secs_f64(),
    }
    .render())
}

/// Infer the folded clock phase from a simulate-format CSV, with its
/// confidence interval and every collapse time in the window that maps to
/// the same folded phase.
pub fn cmd_estimate(flags: &Flags) -> Result<String, CliError> {
    flags.check_known(&["csv", "omega", "confidence", "window"])?;
    let started = Instant::now();
    let path = PathBuf::from(flags.require("csv")?);
    let omega = flags.require_f64("omega")?;
    if !omega.is_finite() || omega <= 0.0 {
        return Err(CliError::Usage("--omega must be positive".into()));
    }
    let confidence = flags.get_f64("confidence")?.unwrap_or(0.95);
    let window = match flags.get("window") {
        None => (0.0, std::f64::consts::PI / omega),
        Some(raw) => {
            let (lo, hi) = raw
                .split_once(',')
                .ok_or_else(|| CliError::Usage("--window expects LOW,HIGH".into()))?;
            let lo: f64 = lo
                .trim()
                .parse()
                .map_err(|_| CliError::Usage("--window low bound is not a number".into()))?;
            let hi: f64 = hi
                .trim()
                .parse()
                .map_err(|_| CliError::Usage("--window high bound is not a number".into()))?;
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(CliError::Usage("--window requires finite LOW <= HIGH".into()));
            }
            (lo, hi)
        }
    };

    let counts = csv::read_counts(&path)?;
    let estimate = mle_phase(&counts, confidence).map_err(|e| CliError::Config(e.to_string()))?;
    let degenerate = counts.n_same() == 0 || counts.n_same() == counts.total();
    let candidates = phase_preimages(estimate.theta_hat, omega, window);

    let mut out = String::new();
    push_line(&mut out, "command", "estimate");
    push_line(&mut out, "csv", path.display());
    push_line(&mut out, "omega", omega);
    push_line(&mut out, "confidence", confidence);
    push_line(&mut out, "n", estimate.n);
    push_line(&mut out, "counts.n_same", counts.n_same());
    push_line(&mut out, "f_same", counts.n_same() as f64 / counts.total() as f64);
    push_line(&mut out, "theta_hat", estimate.theta_hat);
    push_line(&mut out, "ci_low", estimate.ci_low);
    push_line(&mut out, "ci_high", estimate.ci_high);
    push_line(&mut out, "ci_degenerate", degenerate);
    push_line(&mut out, "window.low", window.0);
    push_line(&mut out, "window.high", window.1);
    push_line(&mut out, "candidates", candidates.len());
    for (i, t) in candidates.iter().enumerate() {
        push_line(&mut out, &format!("candidate.{i}"), t);
    }
    push_line(&mut out, "duration_s", format!("{:.6}", started.elapsed().as_secs_f64()));
    Ok(out)
}

/// Compare two collapse-surface hypotheses on the configured geometry:
/// intercepts, joint tables, the sample size needed to tell them apart, and
/// a seeded Monte Carlo check of the achieved discrimination rate.
pub fn cmd_distinguish(flags: &Flags) -> Result<String, CliError> {
    flags.check_known(&["config", "v0", "v1", "alpha", "power", "seed", "trials"])?;
    let started = Instant::now();
    let config = load_config(flags)?;
    let v0 = flags.require_f64("v0")?;
    let v1 = flags.require_f64("v1")?;
    if v0 == v1 {
        return Err(CliError::Config(
            "v0 and v1 coincide: the hypotheses are indistinguishable".into(),
        ));
    }
    let alpha = flags.get_f64("alpha")?.unwrap_or(0.05);
    let power = flags.get_f64("power")?.unwrap_or(0.90);

    let anchor = config.bob_measurement_event();
    let with_velocity = |v: f64| -> Result<ProtocolConfig64, CliError> {
        let surface =
            FlatHypersurface::new(anchor, v).map_err(|e| CliError::Config(e.to_string()))?;
        let mut c = config;
        c.model = ReductionModel::HypersurfaceCollapse(surface);
        Ok(c)
    };
    let config0 = with_velocity(v0)?;
    let config1 = with_velocity(v1)?;
    let t0 = effective_collapse_time(&config0).map_err(protocol_err)?;
    let t1 = effective_collapse_time(&config1).map_err(protocol_err)?;
    let h0 = model_joint(&config0).map_err(protocol_err)?;
    let h1 = model_joint(&config1).map_err(protocol_err)?;

    let n = required_samples(h0.p_same(), h1.p_same(), alpha, power)
        .map_err(|e| CliError::Config(e.to_string()))?;

    const REPETITIONS: u64 = 100;
    let correct_h1 = monte_carlo_power(&h0, &h1, Hypothesis::H1, n, REPETITIONS, rng::derive(config.seed, 1))
        .map_err(|e| CliError::Config(e.to_string()))?;
    let correct_h0 = monte_carlo_power(&h0, &h1, Hypothesis::H0, n, REPETITIONS, rng::derive(config.seed, 2))
        .map_err(|e| CliError::Config(e.to_string()))?;

    let mut out = String::new();
    push_line(&mut out, "command", "distinguish");
    push_config_echo(&mut out, &config);
    push_line(&mut out, "v0", v0);
    push_line(&mut out, "v1", v1);
    push_line(&mut out, "alpha", alpha);
    push_line(&mut out, "power", power);
    push_line(&mut out, "intercept.h0", t0);
    push_line(&mut out, "intercept.h1", t1);
    push_probs(&mut out, "h0", &h0);
    push_probs(&mut out, "h1", &h1);
    push_line(&mut out, "h0.p_same", h0.p_same());
    push_line(&mut out, "h1.p_same", h1.p_same());
    push_line(&mut out, "required_samples", n);
    push_line(&mut out, "repetitions", REPETITIONS);
    push_line(&mut out, "correct.h1_true", correct_h1);
    push_line(&mut out, "correct.h0_true", correct_h0);
    push_line(&mut out, "power.empirical", correct_h1 as f64 / REPETITIONS as f64);
    push_line(&mut out, "duration_s", format!("{:.6}", started.elapsed().as_secs_f64()));
    Ok(out)
}

/// Pure geometry: where a candidate surface crosses Alice's worldline, the
/// lightcone bounds on such crossings, and the causal character of the
/// crossing relative to Bob's measurement event.
pub fn cmd_geometry(flags: &Flags) -> Result<String, CliError> {
    flags.check_known(&["a", "b", "t1", "v"])?;
    let a = flags.require_f64("a")?;
    let b = flags.require_f64("b")?;
    let t1 = flags.require_f64("t1")?;
    let v = flags.require_f64("v")?;
    if a == b {
        return Err(CliError::Config(
            "Alice and Bob must sit at distinct positions (a != b)".into(),
        ));
    }

    let anchor = SpacetimeEvent::new(b, t1).map_err(|e| CliError::Config(e.to_string()))?;
    let surface = FlatHypersurface::new(anchor, v).map_err(|e| CliError::Config(e.to_string()))?;
    let alice = StaticWorldline::new(a).map_err(|e| CliError::Config(e.to_string()))?;
    let t_a = surface.intercept_time(alice);
    let (lo, hi) =
        spacetime::intercept_bounds(anchor, alice).map_err(|e| CliError::Config(e.to_string()))?;
    let crossing = SpacetimeEvent::new(a, t_a).map_err(|e| CliError::Config(e.to_string()))?;
    let (s2, class) = spacetime::interval(crossing, anchor);

    let mut out = String::new();
    push_line(&mut out, "command", "geometry");
    push_line(&mut out, "a", a);
    push_line(&mut out, "b", b);
    push_line(&mut out, "t1", t1);
    push_line(&mut out, "v", v);
    push_line(&mut out, "intercept", t_a);
    push_line(&mut out, "bounds.low", lo);
    push_line(&mut out, "bounds.high", hi);
    push_line(&mut out, "interval.s2", s2);
    push_line(&mut out, "interval.class", class);
    Ok(out)
}
