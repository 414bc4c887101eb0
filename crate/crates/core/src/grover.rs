//! Grover search on a dense amplitude vector, with an optional minimum
//! amplitude: components falling below the cutoff are dropped and the rest is
//! renormalized after every full iteration. Sweeping the register size at a
//! fixed cutoff locates the scale where the two evolutions part ways.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::state::{ComplexAmp, StateVector, DEFAULT_TOL};

/// Largest register `run_gsa` accepts (dense vector of 2^n amplitudes).
pub const GSA_QUBIT_LIMIT: usize = 20;

/// How many Grover iterations to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IterationCount {
    /// `⌊π / (4·arcsin(2^{−n/2}))⌋`, at least 1.
    Optimal,
    Fixed(usize),
}

/// Which observation counts as success.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuccessRule {
    /// `|β|² ≥ threshold` (threshold defaults to 1/2).
    Probability,
    /// `|β| − max_offtarget ≥ 2^{−n/2}`: the coarse amplitude-jump reading,
    /// usable for small registers only.
    AmplitudeJump,
}

/// Multiplicative per-amplitude noise `(1 + amplitude·u)`, `u ~ U(−1, 1)`,
/// applied after each iteration and followed by renormalization. Models
/// imperfect equality of the off-target amplitudes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JitterConfig {
    pub amplitude: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroverConfig {
    pub n: usize,
    pub target: usize,
    pub iterations: IterationCount,
    /// Truncation threshold; 0 disables truncation entirely.
    pub eps_min: f64,
    pub success_threshold: f64,
    pub success_rule: SuccessRule,
    pub jitter: Option<JitterConfig>,
}

impl GroverConfig {
    pub fn new(n: usize, target: usize) -> Self {
        Self {
            n,
            target,
            iterations: IterationCount::Optimal,
            eps_min: 0.0,
            success_threshold: 0.5,
            success_rule: SuccessRule::Probability,
            jitter: None,
        }
    }

    pub fn with_eps_min(mut self, eps_min: f64) -> Self {
        self.eps_min = eps_min;
        self
    }

    pub fn with_iterations(mut self, iterations: IterationCount) -> Self {
        self.iterations = iterations;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n < 1 || self.n > GSA_QUBIT_LIMIT {
            return Err(Error::Invalid {
                what: "grover config",
                why: format!("n must be in 1..={GSA_QUBIT_LIMIT}, got {}", self.n),
            });
        }
        if self.target >= 1 << self.n {
            return Err(Error::Invalid {
                what: "grover config",
                why: format!("target {} out of range for n = {}", self.target, self.n),
            });
        }
        if self.eps_min < 0.0 || !self.eps_min.is_finite() {
            return Err(Error::Invalid {
                what: "grover config",
                why: format!("eps_min must be finite and >= 0, got {}", self.eps_min),
            });
        }
        Ok(())
    }

    fn budget(&self) -> usize {
        match self.iterations {
            IterationCount::Optimal => optimal_iterations(self.n),
            IterationCount::Fixed(k) => k,
        }
    }
}

/// `⌊π / (4·arcsin(2^{−n/2}))⌋`, floored at 1.
pub fn optimal_iterations(n: usize) -> usize {
    let t0 = (2f64.powf(-(n as f64) / 2.0)).asin();
    ((std::f64::consts::PI / (4.0 * t0)).floor() as usize).max(1)
}

/// The rotation-parameterized search state: amplitude `sin t` on the target
/// and `cos t / √(N−1)` elsewhere.
pub fn build_gsa_state(n: usize, target: usize, t: f64) -> StateVector {
    let dim = 1usize << n;
    assert!(target < dim, "target out of range");
    let off = t.cos() / ((dim - 1) as f64).sqrt();
    let mut amps = vec![ComplexAmp::new(off, 0.0); dim];
    amps[target] = ComplexAmp::new(t.sin(), 0.0);
    StateVector::new(n, amps).expect("finite amplitudes")
}

/// One Grover iteration: oracle phase flip on the target, then inversion
/// about the mean. Advances the rotation angle by `2·arcsin(2^{−n/2})` on
/// states of the two-amplitude form.
pub fn gsa_step(psi: &StateVector, target: usize) -> Result<StateVector> {
    psi.require_normalized(DEFAULT_TOL)?;
    if target >= psi.dim() {
        return Err(Error::Invalid {
            what: "target",
            why: format!("{target} out of range for dim {}", psi.dim()),
        });
    }
    let mut amps = psi.amps().to_vec();
    amps[target] = -amps[target];
    let mean: ComplexAmp = amps.iter().sum::<ComplexAmp>() / amps.len() as f64;
    for a in &mut amps {
        *a = 2.0 * mean - *a;
    }
    StateVector::new(psi.n_qubits(), amps)
}

/// Zeroes every amplitude with modulus strictly below `eps_min` and rescales
/// the remainder to unit norm. Amplitudes exactly at the cutoff survive.
/// Returns the surviving state and the number of dropped components; dropping
/// everything is reported as an error, never silently renormalized.
pub fn truncate_renormalize(psi: &StateVector, eps_min: f64) -> Result<(StateVector, usize)> {
    if eps_min < 0.0 {
        return Err(Error::Invalid {
            what: "eps_min",
            why: format!("must be >= 0, got {eps_min}"),
        });
    }
    if eps_min == 0.0 {
        return Ok((psi.clone(), 0));
    }
    let mut amps = psi.amps().to_vec();
    let mut dropped = 0usize;
    for a in &mut amps {
        if a.norm() < eps_min {
            if *a != ComplexAmp::ZERO {
                dropped += 1;
            }
            *a = ComplexAmp::ZERO;
        }
    }
    let survivor = StateVector::new(psi.n_qubits(), amps)?;
    if survivor.norm() <= 0.0 {
        return Err(Error::AllAmplitudesDropped { eps_min });
    }
    Ok((survivor.normalized()?, dropped))
}

/// Snapshot taken after each full iteration (and its truncation, if any).
#[derive(Clone, Debug, PartialEq)]
pub struct IterationRecord {
    pub iter: usize,
    /// Target amplitude β.
    pub beta: Complex64,
    /// Representative off-target amplitude α (smallest non-target index).
    pub alpha: Complex64,
    /// Largest off-target modulus.
    pub alpha_modulus: f64,
    pub support_size: usize,
    pub dropped: usize,
    pub renormalized: bool,
    pub success: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub n: usize,
    pub target: usize,
    pub eps_min: f64,
    pub iterations: Vec<IterationRecord>,
    /// First iteration meeting the success rule, if any.
    pub success_iteration: Option<usize>,
    pub final_success_probability: f64,
    /// Iteration at which every amplitude fell below the cutoff, if that
    /// happened; the run stops there.
    pub all_dropped_at: Option<usize>,
    pub renormalization_events: usize,
}

/// Runs the configured search from the uniform state, truncating after each
/// iteration when `eps_min > 0`. Identical configs produce bitwise-identical
/// records.
pub fn run_gsa(cfg: &GroverConfig) -> Result<RunRecord> {
    cfg.validate()?;
    let budget = cfg.budget();
    let mut psi = StateVector::uniform(cfg.n);
    let mut jitter_rng = cfg.jitter.map(|j| ChaCha8Rng::seed_from_u64(j.seed));
    let mut record = RunRecord {
        n: cfg.n,
        target: cfg.target,
        eps_min: cfg.eps_min,
        iterations: Vec::with_capacity(budget),
        success_iteration: None,
        final_success_probability: 0.0,
        all_dropped_at: None,
        renormalization_events: 0,
    };
    for iter in 1..=budget {
        psi = gsa_step(&psi, cfg.target)?;
        if let (Some(rng), Some(j)) = (jitter_rng.as_mut(), cfg.jitter.as_ref()) {
            let amps: Vec<ComplexAmp> = psi
                .amps()
                .iter()
                .map(|a| a * (1.0 + j.amplitude * rng.random_range(-1.0..1.0)))
                .collect();
            psi = StateVector::new(cfg.n, amps)?.normalized()?;
        }
        let mut dropped = 0usize;
        if cfg.eps_min > 0.0 {
            match truncate_renormalize(&psi, cfg.eps_min) {
                Ok((survivor, d)) => {
                    dropped = d;
                    if d > 0 {
                        record.renormalization_events += 1;
                    }
                    psi = survivor;
                }
                Err(Error::AllAmplitudesDropped { .. }) => {
                    record.all_dropped_at = Some(iter);
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        let beta = psi.amp(cfg.target);
        let first_off = if cfg.target == 0 { 1 } else { 0 };
        let alpha = psi.amp(first_off);
        let alpha_modulus = psi
            .amps()
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != cfg.target)
            .map(|(_, a)| a.norm())
            .fold(0.0, f64::max);
        let success = match cfg.success_rule {
            SuccessRule::Probability => beta.norm_sqr() >= cfg.success_threshold,
            SuccessRule::AmplitudeJump => {
                beta.norm() - alpha_modulus >= 2f64.powf(-(cfg.n as f64) / 2.0)
            }
        };
        if success && record.success_iteration.is_none() {
            record.success_iteration = Some(iter);
        }
        record.final_success_probability = beta.norm_sqr();
        record.iterations.push(IterationRecord {
            iter,
            beta,
            alpha,
            alpha_modulus,
            support_size: psi.support(0.0).len(),
            dropped,
            renormalized: dropped > 0,
            success,
        });
    }
    Ok(record)
}

/// One register size of the Q sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct QEstimateRow {
    pub n: usize,
    /// `2^{−n/2}`, the uniform initial amplitude.
    pub uniform_amplitude: f64,
    /// `2^{−n/2} < eps_min` (strict; amplitudes exactly at the cutoff live).
    pub predicted_breakdown: bool,
    pub untruncated_success_iter: Option<usize>,
    pub truncated_success_iter: Option<usize>,
    pub all_dropped: bool,
    /// Truncated run succeeded earlier than the untruncated one, or failed.
    pub deviated: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QEstimate {
    pub eps_min: f64,
    pub rows: Vec<QEstimateRow>,
    /// Smallest n in range whose uniform amplitude falls strictly below the
    /// cutoff: the predicted breakdown scale, reported as Q̂.
    pub q_hat: Option<usize>,
}

/// Sweeps register sizes at a fixed cutoff, comparing truncated against
/// untruncated evolution, and reports the predicted breakdown scale.
pub fn estimate_q(
    n_range: std::ops::RangeInclusive<usize>,
    eps_min: f64,
    success_threshold: f64,
) -> Result<QEstimate> {
    if eps_min < 0.0 {
        return Err(Error::Invalid {
            what: "eps_min",
            why: format!("must be >= 0, got {eps_min}"),
        });
    }
    let sizes: Vec<usize> = n_range.collect();
    let rows: Vec<QEstimateRow> = sizes
        .par_iter()
        .map(|&n| -> Result<QEstimateRow> {
            let mut base = GroverConfig::new(n, 0);
            base.success_threshold = success_threshold;
            let untruncated = run_gsa(&base)?;
            let truncated = run_gsa(&base.clone().with_eps_min(eps_min))?;
            let uniform_amplitude = 2f64.powf(-(n as f64) / 2.0);
            let all_dropped = truncated.all_dropped_at.is_some();
            let deviated = all_dropped
                || truncated.success_iteration != untruncated.success_iteration;
            Ok(QEstimateRow {
                n,
                uniform_amplitude,
                predicted_breakdown: uniform_amplitude < eps_min,
                untruncated_success_iter: untruncated.success_iteration,
                truncated_success_iter: truncated.success_iteration,
                all_dropped,
                deviated,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let q_hat = rows.iter().find(|r| r.predicted_breakdown).map(|r| r.n);
    Ok(QEstimate {
        eps_min,
        rows,
        q_hat,
    })
}
