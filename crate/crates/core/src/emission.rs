//! Radiation emitted by point charges kicked around by the collapse noise.
//!
//! The general rate is a double sum over particle pairs,
//!
//! ```text
//! dΓ/dω = ħλ / (6π² ε₀ c³ m₀² ω) · Σ_ij q_i q_j / (m_i m_j) · f_ij · sin(b_ij)/b_ij,
//! b_ij  = (ω/c) |r̄_i − r̄_j|,
//! ```
//!
//! where f_ij is the noise correlation of the two accelerations. For point
//! masses f_ij has a closed form that carries the Gaussian separation factor,
//! so one formula covers the coherent limit (all pairs close compared with both
//! the photon wavelength and r_C, amplification (Σq)²) and the incoherent limit
//! (pairs far apart on either scale, amplification Σq²).
//!
//! Rates are returned per keV and per second.

use std::f64::consts::PI;
use std::fmt;

use crate::domain::{
    check_energy, kev_to_joule, norm, omega_from_energy, sub, wavelength_from_energy, NoiseParams,
    ParticleSystem, Vec3, Warning, C, EPS0, E_CHARGE, HBAR, KEV_IN_J,
};
use crate::exec::{sum_indices, Execution};
use crate::{Error, Result};

/// Ratio that stands in for "much smaller than" when classifying regimes.
pub const REGIME_THRESHOLD: f64 = 0.01;

const SINC_SERIES_BELOW: f64 = 1e-4;
const KERNEL_SERIES_BELOW: f64 = 1.0;

/// Differential emission rate dΓ/dE.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RateDensity(f64);

impl RateDensity {
    pub fn from_per_kev(value: f64) -> Self {
        RateDensity(value)
    }

    /// Photons per keV per second.
    pub fn per_kev(self) -> f64 {
        self.0
    }

    /// Photons per joule per second.
    pub fn per_joule(self) -> f64 {
        self.0 / KEV_IN_J
    }
}

impl fmt::Display for RateDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e} keV^-1 s^-1", self.0)
    }
}

/// sin(b)/b, with the removable singularity at 0 handled by its Taylor series.
pub fn coherence_factor(b: f64) -> f64 {
    let b = b.abs();
    if b < SINC_SERIES_BELOW {
        let b2 = b * b;
        1.0 - b2 / 6.0 * (1.0 - b2 / 20.0)
    } else {
        b.sin() / b
    }
}

/// Noise correlation f_ij of two point masses, summed over axes and along z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseCorrelation {
    /// Σ_k f_ij^k (kg²/m²).
    pub total: f64,
    /// f_ij^z (kg²/m²).
    pub z: f64,
}

/// f_ij for point masses m_i, m_j whose mean positions differ by `d = r̄_i − r̄_j`.
///
/// Per axis, f^k = m_i m_j · e^{−D²/4r_C²} / (2 r_C²) · (1 − D_k² / (2 r_C²)).
/// At D = 0 this is 3 m_i m_j / (2 r_C²) in total; for D ≫ r_C it is
/// exponentially suppressed.
pub fn f_ij_point(d: &Vec3, m_i: f64, m_j: f64, r_c: f64) -> NoiseCorrelation {
    let r2 = r_c * r_c;
    let d2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    let base = m_i * m_j * (-d2 / (4.0 * r2)).exp() / (2.0 * r2);
    NoiseCorrelation {
        total: base * (3.0 - d2 / (2.0 * r2)),
        z: base * (1.0 - d[2] * d[2] / (2.0 * r2)),
    }
}

/// Component of the point-mass correlation tensor along the unit vector `n`.
pub fn f_ij_point_along(d: &Vec3, m_i: f64, m_j: f64, r_c: f64, n: &Vec3) -> f64 {
    let r2 = r_c * r_c;
    let d2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    let dn = d[0] * n[0] + d[1] * n[1] + d[2] * n[2];
    m_i * m_j * (-d2 / (4.0 * r2)).exp() / (2.0 * r2) * (1.0 - dn * dn / (2.0 * r2))
}

/// The two angular kernels of the far-field power integral:
/// ((b²−1) sin b + b cos b)/b³ and ((b²−3) sin b + 3b cos b)/b³.
pub fn angular_kernels(b: f64) -> (f64, f64) {
    let b = b.abs();
    if b < KERNEL_SERIES_BELOW {
        kernel_series(b * b)
    } else {
        let (s, c) = b.sin_cos();
        let b3 = b * b * b;
        (
            ((b * b - 1.0) * s + b * c) / b3,
            ((b * b - 3.0) * s + 3.0 * b * c) / b3,
        )
    }
}

/// Taylor series of both kernels in b², ten terms; exact to rounding for b < 1.
fn kernel_series(b2: f64) -> (f64, f64) {
    let (mut g1, mut g2) = (0.0, 0.0);
    let mut power = 1.0;
    // 1/(2k−1)!, starting at k = 1
    let mut inv_odd = 1.0;
    let mut sign = 1.0;
    for k in 1..=10 {
        let two_k = 2.0 * k as f64;
        let inv_even = inv_odd / two_k;
        let inv_next = inv_even / (two_k + 1.0);
        g1 += sign * power * (inv_odd - inv_even + inv_next);
        g2 += sign * power * (inv_odd - 3.0 * inv_even + 3.0 * inv_next);
        power *= b2;
        inv_odd = inv_next;
        sign = -sign;
    }
    (g1, g2)
}

/// Noise average of the angular integral J_ij(ω, −ω), without the δ(ω+ν).
///
/// `f_total` is the trace of the acceleration-correlation tensor and
/// `f_parallel` its component along r̄_i − r̄_j (the direction of the phase
/// vector at ν = −ω). When `f_parallel = f_total / 3` the result reduces to
/// 8π²ħ²λ/(m₀² m_i m_j) · f_total · (2/3) · sin(b)/b.
#[allow(clippy::too_many_arguments)]
pub fn j_ij_expectation(
    omega: f64,
    r_i: &Vec3,
    r_j: &Vec3,
    f_total: f64,
    f_parallel: f64,
    noise: &NoiseParams,
    m_i: f64,
    m_j: f64,
) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::domain(format!(
            "angular frequency must be positive, got {omega}"
        )));
    }
    let b = omega / C * norm(&sub(r_i, r_j));
    let (g1, g2) = angular_kernels(b);
    let pre = 8.0 * PI * PI * HBAR * HBAR * noise.lambda / (noise.m0 * noise.m0 * m_i * m_j);
    Ok(pre * (f_total * g1 - f_parallel * g2))
}

/// dΓ/dE for a single elementary charge on a point mass, per keV:
/// ħλe² / (4π² ε₀ m₀² r_C² c³ E).
fn unit_rate(noise: &NoiseParams, e_kev: f64) -> f64 {
    let e_j = kev_to_joule(e_kev);
    HBAR * noise.lambda * E_CHARGE * E_CHARGE
        / (4.0 * PI * PI * EPS0 * noise.m0 * noise.m0 * noise.r_c * noise.r_c * C * C * C * e_j)
        * KEV_IN_J
}

/// Rate of the full pair sum for an arbitrary particle system.
pub fn rate_general(
    system: &ParticleSystem,
    noise: &NoiseParams,
    e_kev: f64,
) -> Result<RateDensity> {
    rate_general_with(system, noise, e_kev, Execution::default())
}

/// [`rate_general`] with an explicit execution policy; the outer particle
/// loop is the parallel one.
pub fn rate_general_with(
    system: &ParticleSystem,
    noise: &NoiseParams,
    e_kev: f64,
    exec: Execution,
) -> Result<RateDensity> {
    check_energy(e_kev)?;
    let omega = omega_from_energy(e_kev);
    let k = omega / C;
    let ps = system.particles();

    let pair_sum = sum_indices(exec, ps.len(), |i| {
        let pi = &ps[i];
        let wi = pi.charge_e / pi.mass;
        let self_term = wi * wi * f_ij_point(&[0.0; 3], pi.mass, pi.mass, noise.r_c).total;
        let cross: f64 = ps[i + 1..]
            .iter()
            .map(|pj| {
                let d = sub(&pi.position, &pj.position);
                let f = f_ij_point(&d, pi.mass, pj.mass, noise.r_c).total;
                wi * (pj.charge_e / pj.mass) * f * coherence_factor(k * norm(&d))
            })
            .sum();
        self_term + 2.0 * cross
    });

    // (1/ħ) dΓ/dω with ω = E/ħ, then per keV.
    let e_j = kev_to_joule(e_kev);
    let pre = HBAR * noise.lambda * E_CHARGE * E_CHARGE
        / (6.0 * PI * PI * EPS0 * C * C * C * noise.m0 * noise.m0 * e_j);
    Ok(RateDensity(pre * pair_sum * KEV_IN_J))
}

/// Incoherent limit: amplification Σ q_i² (charges in units of e).
pub fn rate_incoherent(charges_e: &[f64], noise: &NoiseParams, e_kev: f64) -> Result<RateDensity> {
    check_energy(e_kev)?;
    let a: f64 = charges_e.iter().map(|q| q * q).sum();
    Ok(RateDensity(a * unit_rate(noise, e_kev)))
}

/// Coherent limit: amplification (Σ q_i)² (charges in units of e).
pub fn rate_coherent(charges_e: &[f64], noise: &NoiseParams, e_kev: f64) -> Result<RateDensity> {
    check_energy(e_kev)?;
    let q: f64 = charges_e.iter().sum();
    Ok(RateDensity(q * q * unit_rate(noise, e_kev)))
}

/// Amplification of one neutral atom: N_A² from the coherent nucleus plus N_A
/// from independently emitting electrons when they are included.
pub fn atomic_amplification(atomic_number: u32, include_electrons: bool) -> f64 {
    let n = f64::from(atomic_number);
    if include_electrons {
        n * n + n
    } else {
        n * n
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomicRate {
    pub rate: RateDensity,
    pub amplification: f64,
    pub warnings: Vec<Warning>,
}

/// Emission of `n_atoms` atoms of atomic number `atomic_number`.
///
/// Energies outside 10–1e5 keV, and the electron term above 100 keV, are
/// computed but flagged.
pub fn rate_atomic(
    n_atoms: f64,
    atomic_number: u32,
    noise: &NoiseParams,
    e_kev: f64,
    include_electrons: bool,
) -> Result<AtomicRate> {
    check_energy(e_kev)?;
    if atomic_number == 0 {
        return Err(Error::domain("atomic number must be at least 1"));
    }
    if !(n_atoms >= 0.0) || !n_atoms.is_finite() {
        return Err(Error::domain(format!(
            "number of atoms must be >= 0, got {n_atoms}"
        )));
    }
    let mut warnings = Vec::new();
    if !(10.0..=1e5).contains(&e_kev) {
        warnings.push(Warning::EnergyOutsideValidity { energy_kev: e_kev });
    }
    if include_electrons && e_kev > 100.0 {
        warnings.push(Warning::RelativisticElectrons { energy_kev: e_kev });
    }
    let amplification = atomic_amplification(atomic_number, include_electrons);
    Ok(AtomicRate {
        rate: RateDensity(n_atoms * amplification * unit_rate(noise, e_kev)),
        amplification,
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeKind {
    Coherent,
    Incoherent,
    Mixed,
}

impl fmt::Display for RegimeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RegimeKind::Coherent => "Coherent",
            RegimeKind::Incoherent => "Incoherent",
            RegimeKind::Mixed => "Mixed",
        };
        f.write_str(s)
    }
}

/// Regime classification together with the length scales it was based on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmissionRegime {
    pub kind: RegimeKind,
    /// Smallest and largest pair separation (m); `None` for one particle.
    pub separations: Option<(f64, f64)>,
    /// Photon wavelength 2πc/ω (m).
    pub wavelength: f64,
    /// Reduced wavelength c/ω (m); separations are compared against this.
    pub reduced_wavelength: f64,
    pub r_c: f64,
}

/// Classifies emission as coherent, incoherent or mixed.
///
/// Coherent when every separation is below θ·min(c/ω, r_C); incoherent when
/// every separation exceeds min(c/ω, r_C)/θ; mixed otherwise, θ being
/// [`REGIME_THRESHOLD`]. Comparing against c/ω is the same as comparing the
/// phase b_ij against θ and 1/θ. Advisory only: [`rate_general`] does not use it.
pub fn classify_regime(
    system: &ParticleSystem,
    noise: &NoiseParams,
    e_kev: f64,
) -> Result<EmissionRegime> {
    let wavelength = wavelength_from_energy(e_kev)?;
    let reduced = wavelength / (2.0 * PI);
    let separations = system.separation_range();
    let scale = reduced.min(noise.r_c);
    let kind = match separations {
        None => RegimeKind::Coherent,
        Some((_, max)) if max < REGIME_THRESHOLD * scale => RegimeKind::Coherent,
        Some((min, _)) if min > scale / REGIME_THRESHOLD => RegimeKind::Incoherent,
        Some(_) => RegimeKind::Mixed,
    };
    Ok(EmissionRegime {
        kind,
        separations,
        wavelength,
        reduced_wavelength: reduced,
        r_c: noise.r_c,
    })
}
