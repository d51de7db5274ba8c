//! Bayesian upper limits on the collapse rate from a counting experiment.
//!
//! The observed count z_c is Poisson with mean Λ_c = Λ_b + Λ_s, where
//! Λ_b = z_b + 1 and Λ_s = z_s + 1 = a·λ/r_C² + 1. With a uniform prior on
//! [0, ∞) the posterior of Λ_c is Λ_c^{z_c} e^{−Λ_c} / Γ(z_c + 1), whose
//! cumulative is P(z_c + 1, Λ_c). The credible bound Λ̄_c solves
//! P(z_c + 1, Λ̄_c) = credibility, and then
//!
//! ```text
//! λ_max = (Λ̄_c − z_b − 2) · r_C² / a.
//! ```
//!
//! Λ̄_c does not depend on r_C, so an exclusion curve needs one quantile solve.

use crate::domain::EnergyWindow;
use crate::exec::{map_indices, Execution};
use crate::specfun::{gamma_quantile, ln_gamma, reg_lower_gamma};
use crate::{Error, Result};

/// Observed and background counts in an energy window, with the signal
/// constant `a` (s·m²) mapping λ/r_C² to expected signal counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountingExperiment {
    z_c: u64,
    z_b: u64,
    a: f64,
    window: EnergyWindow,
}

impl CountingExperiment {
    pub fn new(z_c: u64, z_b: u64, a: f64, window: EnergyWindow) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::domain(format!(
                "signal constant a must be positive, got {a}"
            )));
        }
        Ok(CountingExperiment {
            z_c,
            z_b,
            a,
            window,
        })
    }

    /// The germanium run: 576 counts observed against 506 simulated
    /// background counts in 1000–3800 keV, a = 2.0986 s·m².
    pub fn germanium_run() -> Self {
        CountingExperiment {
            z_c: 576,
            z_b: 506,
            a: 2.0986,
            window: EnergyWindow::default(),
        }
    }

    pub fn z_c(&self) -> u64 {
        self.z_c
    }

    pub fn z_b(&self) -> u64 {
        self.z_b
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn window(&self) -> EnergyWindow {
        self.window
    }

    /// Expected background Λ_b = z_b + 1.
    pub fn lambda_b(&self) -> f64 {
        self.z_b as f64 + 1.0
    }

    /// Λ̄_c must exceed this for the signal term to be positive.
    pub fn quota_threshold(&self) -> f64 {
        self.lambda_b() + 1.0
    }

    fn shape(&self) -> f64 {
        self.z_c as f64 + 1.0
    }

    pub fn with_a(&self, a: f64) -> Result<Self> {
        Self::new(self.z_c, self.z_b, a, self.window)
    }
}

fn check_credibility(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "credibility must lie in (0, 1), got {p}"
        )))
    }
}

fn check_expected(lambda_c: f64) -> Result<()> {
    if lambda_c >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "expected counts must be >= 0, got {lambda_c}"
        )))
    }
}

/// Posterior density of Λ_c, evaluated in log space.
pub fn posterior_pdf(exp: &CountingExperiment, lambda_c: f64) -> Result<f64> {
    check_expected(lambda_c)?;
    if lambda_c == 0.0 {
        return Ok(if exp.z_c == 0 { 1.0 } else { 0.0 });
    }
    if lambda_c.is_infinite() {
        return Ok(0.0);
    }
    let z = exp.z_c as f64;
    Ok((z * lambda_c.ln() - lambda_c - ln_gamma(z + 1.0)?).exp())
}

/// Posterior probability that Λ_c ≤ `lambda_c`.
pub fn posterior_cdf(exp: &CountingExperiment, lambda_c: f64) -> Result<f64> {
    check_expected(lambda_c)?;
    reg_lower_gamma(exp.shape(), lambda_c)
}

/// The credible bound Λ̄_c on the expected total count.
pub fn count_quantile(exp: &CountingExperiment, credibility: f64) -> Result<f64> {
    check_credibility(credibility)?;
    gamma_quantile(exp.shape(), credibility)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperLimit {
    /// Upper limit on λ (s⁻¹); `None` when the signal quota is not positive.
    pub lambda_max: Option<f64>,
    pub r_c: f64,
    pub credibility: f64,
    /// Credible bound on the expected number of counts.
    pub lambda_bar_c: f64,
    /// Λ̄_c − Λ_b − 1, the expected signal counts allowed at the bound.
    pub signal_quota: f64,
}

impl UpperLimit {
    pub fn is_positive(&self) -> bool {
        self.lambda_max.is_some()
    }
}

fn limit_from_quantile(
    exp: &CountingExperiment,
    lambda_bar_c: f64,
    r_c: f64,
    credibility: f64,
) -> UpperLimit {
    let signal_quota = lambda_bar_c - exp.quota_threshold();
    UpperLimit {
        lambda_max: (signal_quota > 0.0).then(|| signal_quota * r_c * r_c / exp.a),
        r_c,
        credibility,
        lambda_bar_c,
        signal_quota,
    }
}

fn check_r_c(r_c: f64) -> Result<()> {
    if r_c > 0.0 && r_c.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("r_c must be positive, got {r_c}")))
    }
}

/// Upper limit on λ at correlation length `r_c` (m).
pub fn upper_limit_lambda(
    exp: &CountingExperiment,
    r_c: f64,
    credibility: f64,
) -> Result<UpperLimit> {
    check_r_c(r_c)?;
    let lambda_bar_c = count_quantile(exp, credibility)?;
    Ok(limit_from_quantile(exp, lambda_bar_c, r_c, credibility))
}

/// `n` log-uniformly spaced values from `lo` to `hi`, endpoints exact.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (llo, lhi) = (lo.ln(), hi.ln());
    let step = (lhi - llo) / (n - 1) as f64;
    (0..n)
        .map(|i| match i {
            0 => lo,
            _ if i + 1 == n => hi,
            _ => (llo + step * i as f64).exp(),
        })
        .collect()
}

/// Sampled boundary of the excluded region in the (r_C, λ) plane.
#[derive(Debug, Clone, PartialEq)]
pub struct ExclusionCurve {
    /// (r_C in m, λ_max in s⁻¹), r_C increasing.
    pub points: Vec<(f64, f64)>,
    pub credibility: f64,
    pub lambda_bar_c: f64,
}

impl ExclusionCurve {
    /// Least-squares slope of ln λ_max against ln r_C.
    pub fn loglog_slope(&self) -> f64 {
        let n = self.points.len() as f64;
        let (xs, ys): (Vec<f64>, Vec<f64>) =
            self.points.iter().map(|&(r, l)| (r.ln(), l.ln())).unzip();
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for (x, y) in xs.iter().zip(&ys) {
            sxy += (x - mx) * (y - my);
            sxx += (x - mx) * (x - mx);
        }
        sxy / sxx
    }

    /// λ_max at `r_c` by log-log interpolation; `None` outside the sampled range.
    pub fn lambda_at(&self, r_c: f64) -> Option<f64> {
        let first = self.points.first()?;
        let last = self.points.last()?;
        if r_c < first.0 || r_c > last.0 {
            return None;
        }
        let k = self.points.partition_point(|&(r, _)| r < r_c);
        if self.points[k].0 == r_c {
            return Some(self.points[k].1);
        }
        let (r0, l0) = self.points[k - 1];
        let (r1, l1) = self.points[k];
        let t = (r_c / r0).ln() / (r1 / r0).ln();
        Some((l0.ln() + t * (l1 / l0).ln()).exp())
    }
}

/// Exclusion curve on a log-uniform r_C grid.
pub fn exclusion_curve(
    exp: &CountingExperiment,
    r_c_min: f64,
    r_c_max: f64,
    n_points: usize,
    credibility: f64,
) -> Result<ExclusionCurve> {
    exclusion_curve_with(
        exp,
        r_c_min,
        r_c_max,
        n_points,
        credibility,
        Execution::default(),
    )
}

pub fn exclusion_curve_with(
    exp: &CountingExperiment,
    r_c_min: f64,
    r_c_max: f64,
    n_points: usize,
    credibility: f64,
    exec: Execution,
) -> Result<ExclusionCurve> {
    check_r_c(r_c_min)?;
    check_r_c(r_c_max)?;
    if !(r_c_min < r_c_max) {
        return Err(Error::domain(format!(
            "exclusion grid needs r_c_min < r_c_max, got [{r_c_min}, {r_c_max}]"
        )));
    }
    if n_points < 2 {
        return Err(Error::domain(format!(
            "exclusion grid needs at least 2 points, got {n_points}"
        )));
    }
    let lambda_bar_c = count_quantile(exp, credibility)?;
    if lambda_bar_c <= exp.quota_threshold() {
        return Err(Error::NoPositiveLimit {
            lambda_bar_c,
            threshold: exp.quota_threshold(),
        });
    }
    let grid = log_grid(r_c_min, r_c_max, n_points);
    let points = map_indices(exec, n_points, |i| {
        let limit = limit_from_quantile(exp, lambda_bar_c, grid[i], credibility);
        (grid[i], limit.lambda_max.expect("quota checked positive"))
    });
    Ok(ExclusionCurve {
        points,
        credibility,
        lambda_bar_c,
    })
}
