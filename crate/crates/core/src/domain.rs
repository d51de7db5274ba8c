//! Physical constants, unit conventions and the value types shared across the crate.
//!
//! Public interfaces take photon energies in keV; everything inside the physics
//! routines is SI. Charges are stored as multiples of the elementary charge.

use std::f64::consts::PI;
use std::fmt;

use crate::{Error, Result};

/// Reduced Planck constant (J·s), CODATA 2018.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum (m/s).
pub const C: f64 = 299_792_458.0;
/// Vacuum permittivity (F/m), CODATA 2018.
pub const EPS0: f64 = 8.854_187_812_8e-12;
/// Elementary charge (C).
pub const E_CHARGE: f64 = 1.602_176_634e-19;
/// Atomic mass unit (kg), CODATA 2018.
pub const AMU: f64 = 1.660_539_066_60e-27;
/// Proton mass (kg), CODATA 2018. Used as the reference nucleon mass m₀.
pub const PROTON_MASS: f64 = 1.672_621_923_69e-27;
/// One keV in joules.
pub const KEV_IN_J: f64 = 1.602_176_634e-16;

/// The constant set used by every computation in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysConstants {
    pub hbar: f64,
    pub c: f64,
    pub eps0: f64,
    pub e_charge: f64,
    pub amu: f64,
}

impl PhysConstants {
    pub const CODATA_2018: PhysConstants = PhysConstants {
        hbar: HBAR,
        c: C,
        eps0: EPS0,
        e_charge: E_CHARGE,
        amu: AMU,
    };
}

impl Default for PhysConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

pub fn kev_to_joule(e_kev: f64) -> f64 {
    e_kev * KEV_IN_J
}

pub fn joule_to_kev(e_j: f64) -> f64 {
    e_j / KEV_IN_J
}

/// Angular frequency ω = E/ħ of a photon of energy `e_kev`.
pub fn omega_from_energy(e_kev: f64) -> f64 {
    kev_to_joule(e_kev) / HBAR
}

/// Photon wavelength λ_k = 2πħc/E in metres.
pub fn wavelength_from_energy(e_kev: f64) -> Result<f64> {
    if !(e_kev > 0.0) || !e_kev.is_finite() {
        return Err(Error::domain(format!(
            "photon energy must be positive and finite, got {e_kev} keV"
        )));
    }
    Ok(2.0 * PI * HBAR * C / kev_to_joule(e_kev))
}

pub(crate) fn check_energy(e_kev: f64) -> Result<()> {
    if e_kev > 0.0 && e_kev.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "photon energy must be positive and finite, got {e_kev} keV"
        )))
    }
}

/// Parameters of the collapse noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    /// Collapse strength λ (s⁻¹).
    pub lambda: f64,
    /// Correlation length r_C (m).
    pub r_c: f64,
    /// Reference mass m₀ (kg).
    pub m0: f64,
}

impl NoiseParams {
    /// Noise parameters with the proton mass as reference mass.
    pub fn new(lambda: f64, r_c: f64) -> Result<Self> {
        Self::with_reference_mass(lambda, r_c, PROTON_MASS)
    }

    pub fn with_reference_mass(lambda: f64, r_c: f64, m0: f64) -> Result<Self> {
        for (name, v) in [("lambda", lambda), ("r_c", r_c), ("m0", m0)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(NoiseParams { lambda, r_c, m0 })
    }

    /// λ/r_C², the only combination the counting analysis is sensitive to.
    pub fn ratio(&self) -> f64 {
        self.lambda / (self.r_c * self.r_c)
    }
}

pub type Vec3 = [f64; 3];

pub(crate) fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn norm(a: &Vec3) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

/// A point charge at its mean position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Particle {
    /// Charge in units of the elementary charge.
    pub charge_e: f64,
    /// Mass in kg.
    pub mass: f64,
    /// Mean position in metres.
    pub position: Vec3,
}

impl Particle {
    pub fn new(charge_e: f64, mass: f64, position: Vec3) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::domain(format!(
                "particle mass must be positive, got {mass}"
            )));
        }
        if !charge_e.is_finite() || position.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("particle charge and position must be finite"));
        }
        Ok(Particle {
            charge_e,
            mass,
            position,
        })
    }

    pub fn proton(position: Vec3) -> Self {
        Particle {
            charge_e: 1.0,
            mass: PROTON_MASS,
            position,
        }
    }

    /// Charge in coulombs.
    pub fn charge(&self) -> f64 {
        self.charge_e * E_CHARGE
    }
}

/// A non-empty, ordered collection of point charges.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleSystem {
    particles: Vec<Particle>,
}

impl ParticleSystem {
    pub fn new(particles: Vec<Particle>) -> Result<Self> {
        if particles.is_empty() {
            return Err(Error::invalid(
                "particle system must contain at least one particle",
            ));
        }
        Ok(ParticleSystem { particles })
    }

    pub fn particles(&self) -> &[Particle] {
        &self.particles
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn charges_e(&self) -> Vec<f64> {
        self.particles.iter().map(|p| p.charge_e).collect()
    }

    /// Smallest and largest distance between distinct particles, `None` for a
    /// single particle.
    pub fn separation_range(&self) -> Option<(f64, f64)> {
        let n = self.particles.len();
        if n < 2 {
            return None;
        }
        let mut lo = f64::INFINITY;
        let mut hi = 0.0_f64;
        for i in 0..n {
            for j in (i + 1)..n {
                let d = norm(&sub(
                    &self.particles[i].position,
                    &self.particles[j].position,
                ));
                lo = lo.min(d);
                hi = hi.max(d);
            }
        }
        Some((lo, hi))
    }
}

/// Closed energy interval in keV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyWindow {
    e_min: f64,
    e_max: f64,
}

impl EnergyWindow {
    pub fn new(e_min: f64, e_max: f64) -> Result<Self> {
        if !(e_min > 0.0) || !(e_max > e_min) || !e_max.is_finite() {
            return Err(Error::domain(format!(
                "energy window needs 0 < e_min < e_max, got ({e_min}, {e_max}) keV"
            )));
        }
        Ok(EnergyWindow { e_min, e_max })
    }

    pub fn e_min(&self) -> f64 {
        self.e_min
    }

    pub fn e_max(&self) -> f64 {
        self.e_max
    }

    pub fn width(&self) -> f64 {
        self.e_max - self.e_min
    }

    pub fn contains(&self, e_kev: f64) -> bool {
        e_kev >= self.e_min && e_kev <= self.e_max
    }
}

impl Default for EnergyWindow {
    /// The 1000–3800 keV analysis window of the germanium measurement.
    fn default() -> Self {
        EnergyWindow {
            e_min: 1000.0,
            e_max: 3800.0,
        }
    }
}

impl fmt::Display for EnergyWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] keV", self.e_min, self.e_max)
    }
}

/// A non-fatal condition attached to a computed value.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// An efficiency polynomial evaluated below zero and was clamped.
    EfficiencyClamped {
        material: String,
        energy_kev: f64,
        raw: f64,
    },
    /// Photon energy outside the 10–1e5 keV range where the atomic rate holds.
    EnergyOutsideValidity { energy_kev: f64 },
    /// Electron term requested above 100 keV, where electrons are relativistic.
    RelativisticElectrons { energy_kev: f64 },
    /// A detector with no materials yields no signal.
    EmptyInventory,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::EfficiencyClamped {
                material,
                energy_kev,
                raw,
            } => write!(
                f,
                "efficiency of '{material}' is negative ({raw:e}) at {energy_kev} keV; clamped to 0"
            ),
            Warning::EnergyOutsideValidity { energy_kev } => write!(
                f,
                "E = {energy_kev} keV is outside 10-1e5 keV where nuclei emit coherently and electrons independently"
            ),
            Warning::RelativisticElectrons { energy_kev } => write!(
                f,
                "electron contribution at E = {energy_kev} keV > 100 keV: electrons are relativistic, non-relativistic rate does not apply"
            ),
            Warning::EmptyInventory => write!(f, "inventory has no materials; signal constant is 0"),
        }
    }
}
