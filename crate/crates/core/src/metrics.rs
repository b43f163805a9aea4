//! Spectral efficiency, gains against CC and per-group statistics.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::engine::{Mode, RunResult};
use crate::error::{Result, SimError};

/// Bandwidth of one PRB, Hz.
pub const PRB_HZ: f64 = 180e3;

/// bits / (seconds * n_prb * 180 kHz), in bits/s/Hz.
pub fn spectral_efficiency(bits: f64, cellular_time: f64, n_prb: u32) -> Result<f64> {
    if bits == 0.0 {
        return Ok(0.0);
    }
    let bandwidth = n_prb as f64 * PRB_HZ;
    if !(cellular_time > 0.0) || !(bandwidth > 0.0) {
        return Err(SimError::Accounting(format!(
            "{bits} bits over {cellular_time} s and {bandwidth} Hz"
        )));
    }
    Ok(bits / (cellular_time * bandwidth))
}

/// `metric / baseline`.
pub fn gain_factor(metric: f64, baseline: f64) -> Result<f64> {
    if !(baseline > 0.0) {
        return Err(SimError::Stats(format!("baseline {baseline} is not positive")));
    }
    Ok(metric / baseline)
}

/// `1 - time / baseline`, as a fraction.
pub fn time_reduction(time: f64, baseline: f64) -> Result<f64> {
    Ok(1.0 - gain_factor(time, baseline)?)
}

/// Two-sided 95% Student-t quantile for `df` degrees of freedom.
pub fn t_quantile_975(df: f64) -> Result<f64> {
    let t = StudentsT::new(0.0, 1.0, df).map_err(|e| SimError::Stats(e.to_string()))?;
    Ok(t.inverse_cdf(0.975))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub median: f64,
    /// 95% confidence half-width of the mean.
    pub ci95: f64,
}

impl Summary {
    /// Half-width relative to the mean, in percent.
    pub fn ci95_pct(&self) -> f64 {
        if self.mean == 0.0 {
            0.0
        } else {
            100.0 * self.ci95 / self.mean.abs()
        }
    }
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Mean, median and Student-t half-width; needs at least two values.
pub fn summarize(values: &[f64]) -> Result<Summary> {
    let n = values.len();
    if n < 2 {
        return Err(SimError::Stats(format!("need at least 2 samples, got {n}")));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let ci95 = if var == 0.0 {
        0.0
    } else {
        t_quantile_975((n - 1) as f64)? * var.sqrt() / (n as f64).sqrt()
    };
    Ok(Summary {
        mean,
        median: median(values),
        ci95,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateResult {
    pub scenario: String,
    pub mode: Mode,
    pub n_seeds: usize,
    pub completed: usize,
    pub total_time: Summary,
    pub cellular_time: Summary,
    pub d2d_time: Summary,
    pub mean_itbs: Summary,
    pub spectral_efficiency: Summary,
    /// Median spectral efficiency over the CC median, same scenario.
    pub efficiency_factor: Option<f64>,
    /// `1 - median cellular time / CC median cellular time`.
    pub cellular_time_reduction: Option<f64>,
}

/// Groups runs by scenario and mode (in first-seen order) and summarizes
/// each group. Gains are ratios of medians against the CC group of the
/// same scenario.
pub fn aggregate(results: &[RunResult]) -> Result<Vec<AggregateResult>> {
    let mut keys: Vec<(String, Mode)> = Vec::new();
    for r in results {
        let key = (r.scenario.clone(), r.mode);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    let mut out = Vec::with_capacity(keys.len());
    for (scenario, mode) in &keys {
        let group: Vec<&RunResult> = results
            .iter()
            .filter(|r| &r.scenario == scenario && r.mode == *mode)
            .collect();
        let col = |f: fn(&RunResult) -> f64| -> Vec<f64> { group.iter().map(|r| f(r)).collect() };
        out.push(AggregateResult {
            scenario: scenario.clone(),
            mode: *mode,
            n_seeds: group.len(),
            completed: group.iter().filter(|r| r.completed).count(),
            total_time: summarize(&col(|r| r.total_time))?,
            cellular_time: summarize(&col(|r| r.cellular_time))?,
            d2d_time: summarize(&col(|r| r.d2d_time))?,
            mean_itbs: summarize(&col(|r| r.mean_itbs))?,
            spectral_efficiency: summarize(&col(|r| r.spectral_efficiency))?,
            efficiency_factor: None,
            cellular_time_reduction: None,
        });
    }
    let baselines: Vec<(String, Summary, Summary)> = out
        .iter()
        .filter(|a| a.mode == Mode::Cc)
        .map(|a| (a.scenario.clone(), a.spectral_efficiency, a.cellular_time))
        .collect();
    for a in &mut out {
        if let Some((_, eff, time)) = baselines.iter().find(|b| b.0 == a.scenario) {
            a.efficiency_factor = gain_factor(a.spectral_efficiency.median, eff.median).ok();
            a.cellular_time_reduction = time_reduction(a.cellular_time.median, time.median).ok();
        }
    }
    Ok(out)
}
