//! Folding the atomic emission rate through detector efficiencies.
//!
//! Each material i of the set-up contributes
//!
//! ```text
//! dz_s/dE = N_pi² · α_i · β · (λ/r_C²) · ε_i(E) / E,     α_i = m_i n_i T,
//! β       = ħ e² / (4π² ε₀ c³ m₀²),
//! ```
//!
//! counts per unit energy, with ε_i a polynomial in E (keV). E and dE carry
//! the same unit, so ∫ ε(E)/E dE is a pure number and the signal constant
//! a = Σ_i N_pi² α_i β ∫ ε_i(E)/E dE is in s·m²: z_s = a·λ/r_C².
//! Only the coherent proton term is kept; in the MeV window the electrons are
//! relativistic.

use std::cell::RefCell;
use std::f64::consts::PI;

use crate::domain::{EnergyWindow, PhysConstants, Warning, PROTON_MASS};
use crate::exec::{map_indices, Execution};
use crate::specfun::{integrate, QuadratureSpec};
use crate::{Error, Result};

/// Name under which the built-in efficiency fits are registered.
pub const BUILTIN_DATASET: &str = "paper-table-1";

/// ε(E) = Σ_j ξ_j E^j with E in keV.
#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyPoly {
    coeffs: Vec<f64>,
}

/// An efficiency value; `raw` is the polynomial before clamping at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Efficiency {
    pub value: f64,
    pub raw: f64,
    pub clamped: bool,
}

impl EfficiencyPoly {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid(
                "efficiency polynomial needs at least one coefficient",
            ));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("efficiency coefficients must be finite"));
        }
        Ok(EfficiencyPoly { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The polynomial itself, no clamping (Horner).
    pub fn raw(&self, e_kev: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * e_kev + c)
    }

    /// Efficiency at `e_kev`, clamped to be non-negative.
    pub fn evaluate(&self, e_kev: f64) -> Efficiency {
        let raw = self.raw(e_kev);
        if raw < 0.0 {
            Efficiency {
                value: 0.0,
                raw,
                clamped: true,
            }
        } else {
            Efficiency {
                value: raw,
                raw,
                clamped: false,
            }
        }
    }
}

/// One entry of the built-in efficiency dataset. Uncertainties are the fit
/// errors of each coefficient and are carried as metadata only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuiltinEfficiency {
    pub name: &'static str,
    pub coeffs: &'static [f64],
    pub uncertainties: &'static [f64],
}

impl BuiltinEfficiency {
    pub fn poly(&self) -> EfficiencyPoly {
        EfficiencyPoly {
            coeffs: self.coeffs.to_vec(),
        }
    }
}

/// Polynomial fits to the simulated detection efficiency of the five
/// components of the HPGe set-up, valid over 1000–3800 keV.
pub const HPGE_EFFICIENCIES: [BuiltinEfficiency; 5] = [
    BuiltinEfficiency {
        name: "Ge crystal",
        coeffs: &[4.82e-1, -4.42e-4, 2.10e-7, -4.87e-11, 4.32e-15],
        uncertainties: &[0.03e-1, 0.03e-4, 0.01e-7, 0.03e-11, 0.07e-15],
    },
    BuiltinEfficiency {
        name: "Inner Cu",
        coeffs: &[3.77e-2, -2.48e-5, 1.03e-8, -2.24e-12, 1.93e-16],
        uncertainties: &[0.04e-2, 0.03e-5, 0.01e-8, 0.04e-12, 0.08e-16],
    },
    BuiltinEfficiency {
        name: "Cu block + plate",
        coeffs: &[2.6e-3, 2.9e-7, -3.1e-10, 5.7e-14, -3.1e-18],
        uncertainties: &[0.1e-3, 1.4e-7, 0.5e-10, 1.6e-14, 3.3e-18],
    },
    BuiltinEfficiency {
        name: "Cu shield",
        coeffs: &[-1.01e-5, 7.8e-8, -2.07e-11, 1.61e-15],
        uncertainties: &[0.07e-5, 0.1e-8, 0.06e-11, 0.09e-15],
    },
    BuiltinEfficiency {
        name: "Pb shield",
        coeffs: &[
            -5.76e-4, 3.812e-6, -2.728e-9, 9.036e-13, -1.477e-16, 9.60e-21,
        ],
        uncertainties: &[0.03e-4, 0.003e-6, 0.001e-9, 0.004e-13, 0.001e-16, 0.02e-21],
    },
];

/// Looks up a built-in dataset by name.
pub fn builtin_dataset(name: &str) -> Option<&'static [BuiltinEfficiency]> {
    (name == BUILTIN_DATASET).then_some(&HPGE_EFFICIENCIES[..])
}

/// Looks up a built-in material by name, ignoring ASCII case.
pub fn builtin_efficiency(material: &str) -> Option<&'static BuiltinEfficiency> {
    HPGE_EFFICIENCIES
        .iter()
        .find(|b| b.name.eq_ignore_ascii_case(material.trim()))
}

pub fn builtin_material_names() -> Vec<&'static str> {
    HPGE_EFFICIENCIES.iter().map(|b| b.name).collect()
}

/// One material of the detector set-up.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialComponent {
    pub name: String,
    /// Protons per atom.
    pub n_protons: u32,
    /// Atoms per kilogram.
    pub atoms_per_kg: f64,
    pub mass_kg: f64,
    pub live_time_s: f64,
    pub efficiency: EfficiencyPoly,
}

impl MaterialComponent {
    pub fn new(
        name: impl Into<String>,
        n_protons: u32,
        atoms_per_kg: f64,
        mass_kg: f64,
        live_time_s: f64,
        efficiency: EfficiencyPoly,
    ) -> Result<Self> {
        let name = name.into();
        if n_protons == 0 {
            return Err(Error::invalid(format!(
                "{name}: n_protons must be positive"
            )));
        }
        for (field, v) in [
            ("atoms_per_kg", atoms_per_kg),
            ("mass_kg", mass_kg),
            ("live_time_s", live_time_s),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(format!(
                    "{name}: {field} must be positive, got {v}"
                )));
            }
        }
        Ok(MaterialComponent {
            name,
            n_protons,
            atoms_per_kg,
            mass_kg,
            live_time_s,
            efficiency,
        })
    }

    /// α = m·n·T: atoms times seconds of exposure.
    pub fn alpha(&self) -> f64 {
        self.mass_kg * self.atoms_per_kg * self.live_time_s
    }

    fn weight(&self) -> f64 {
        let n = f64::from(self.n_protons);
        n * n * self.alpha()
    }
}

/// β = ħe²/(4π²ε₀c³m₀²).
pub fn beta_constant(k: &PhysConstants, m0: f64) -> f64 {
    k.hbar * k.e_charge * k.e_charge / (4.0 * PI * PI * k.eps0 * k.c * k.c * k.c * m0 * m0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignalModel {
    materials: Vec<MaterialComponent>,
    window: EnergyWindow,
    beta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaterialContribution {
    pub name: String,
    pub a: f64,
}

/// The signal constant `a` (s·m²) with its per-material breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalConstant {
    pub total: f64,
    pub per_material: Vec<MaterialContribution>,
    pub warnings: Vec<Warning>,
}

/// A normalised spectrum sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalShape {
    pub energies_kev: Vec<f64>,
    /// Probability density per keV; trapezoid integral is 1.
    pub density: Vec<f64>,
    pub warnings: Vec<Warning>,
}

impl SignalModel {
    /// A model with CODATA constants and the proton mass as m₀.
    pub fn new(materials: Vec<MaterialComponent>, window: EnergyWindow) -> Self {
        SignalModel {
            materials,
            window,
            beta: beta_constant(&PhysConstants::CODATA_2018, PROTON_MASS),
        }
    }

    pub fn materials(&self) -> &[MaterialComponent] {
        &self.materials
    }

    pub fn window(&self) -> EnergyWindow {
        self.window
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    fn check_in_window(&self, e_kev: f64) -> Result<()> {
        if self.window.contains(e_kev) {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "E = {e_kev} keV is outside the window {}",
                self.window
            )))
        }
    }

    /// Expected counts per keV at `e_kev` for a given λ/r_C² (s⁻¹ m⁻²).
    pub fn density(&self, noise_ratio: f64, e_kev: f64) -> Result<f64> {
        self.check_in_window(e_kev)?;
        if !(noise_ratio >= 0.0) {
            return Err(Error::domain(format!(
                "lambda/r_c^2 must be >= 0, got {noise_ratio}"
            )));
        }
        Ok(self.density_unchecked(noise_ratio, e_kev, &mut |_, _| {}))
    }

    fn density_unchecked(
        &self,
        noise_ratio: f64,
        e_kev: f64,
        on_clamp: &mut dyn FnMut(&MaterialComponent, Efficiency),
    ) -> f64 {
        let folded: f64 = self
            .materials
            .iter()
            .map(|m| {
                let eff = m.efficiency.evaluate(e_kev);
                if eff.clamped {
                    on_clamp(m, eff);
                }
                m.weight() * eff.value
            })
            .sum();
        folded * self.beta * noise_ratio / e_kev
    }

    /// a = Σ_i N_pi² α_i β ∫ ε_i(E)/E dE over the window.
    pub fn signal_constant(&self) -> Result<SignalConstant> {
        let spec = QuadratureSpec::default();
        let clamps = RefCell::new(ClampLog::default());
        let mut per_material = Vec::with_capacity(self.materials.len());
        for m in &self.materials {
            let integral = integrate(
                |e| {
                    let eff = m.efficiency.evaluate(e);
                    if eff.clamped {
                        clamps.borrow_mut().record(m, e, eff.raw);
                    }
                    eff.value / e
                },
                self.window.e_min(),
                self.window.e_max(),
                &spec,
            )?;
            per_material.push(MaterialContribution {
                name: m.name.clone(),
                a: m.weight() * self.beta * integral,
            });
        }
        let mut warnings = clamps.into_inner().warnings;
        if self.materials.is_empty() {
            warnings.push(Warning::EmptyInventory);
        }
        Ok(SignalConstant {
            total: per_material.iter().fold(0.0, |s, c| s + c.a),
            per_material,
            warnings,
        })
    }

    /// The spectrum shape on `n_points` equally spaced energies spanning the
    /// window, normalised to unit trapezoid area.
    pub fn shape(&self, n_points: usize) -> Result<SignalShape> {
        self.shape_with(n_points, Execution::default())
    }

    pub fn shape_with(&self, n_points: usize, exec: Execution) -> Result<SignalShape> {
        if n_points < 2 {
            return Err(Error::domain(format!(
                "shape needs at least 2 points, got {n_points}"
            )));
        }
        let (lo, hi) = (self.window.e_min(), self.window.e_max());
        let step = (hi - lo) / (n_points - 1) as f64;
        let energies: Vec<f64> = (0..n_points)
            .map(|i| {
                if i + 1 == n_points {
                    hi
                } else {
                    lo + step * i as f64
                }
            })
            .collect();
        let density = map_indices(exec, n_points, |i| {
            self.density_unchecked(1.0, energies[i], &mut |_, _| {})
        });

        let area: f64 = energies
            .windows(2)
            .zip(density.windows(2))
            .map(|(e, d)| 0.5 * (e[1] - e[0]) * (d[0] + d[1]))
            .sum();
        if !(area > 0.0) || !area.is_finite() {
            return Err(Error::Normalization(format!(
                "signal density integrates to {area:e} over {}",
                self.window
            )));
        }

        let mut clamps = ClampLog::default();
        for &e in &energies {
            self.density_unchecked(1.0, e, &mut |m, eff| clamps.record(m, e, eff.raw));
        }
        Ok(SignalShape {
            energies_kev: energies,
            density: density.into_iter().map(|d| d / area).collect(),
            warnings: clamps.warnings,
        })
    }
}

/// Keeps the first clamp seen per material.
#[derive(Default)]
struct ClampLog {
    warnings: Vec<Warning>,
}

impl ClampLog {
    fn record(&mut self, m: &MaterialComponent, e_kev: f64, raw: f64) {
        let seen = self.warnings.iter().any(
            |w| matches!(w, Warning::EfficiencyClamped { material, .. } if *material == m.name),
        );
        if !seen {
            self.warnings.push(Warning::EfficiencyClamped {
                material: m.name.clone(),
                energy_kev: e_kev,
                raw,
            });
        }
    }
}
