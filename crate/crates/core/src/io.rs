//! JSON inputs and CSV outputs.

use std::fmt::Write as _;

use serde::Deserialize;

use crate::domain::{EnergyWindow, Particle, ParticleSystem};
use crate::inference::ExclusionCurve;
use crate::signal::{
    builtin_efficiency, builtin_material_names, EfficiencyPoly, MaterialComponent, SignalShape,
};
use crate::{Error, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParticleRecord {
    charge_e: f64,
    mass_kg: f64,
    position_m: [f64; 3],
}

/// Parses a JSON array of `{charge_e, mass_kg, position_m}` objects.
pub fn parse_particle_system(json: &str) -> Result<ParticleSystem> {
    let records: Vec<ParticleRecord> =
        serde_json::from_str(json).map_err(|e| Error::invalid(format!("particle system: {e}")))?;
    let particles = records
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            Particle::new(r.charge_e, r.mass_kg, r.position_m)
                .map_err(|e| Error::invalid(format!("particle {i}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    ParticleSystem::new(particles)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialRecord {
    name: String,
    n_protons: u32,
    atoms_per_kg: f64,
    mass_kg: f64,
    live_time_s: f64,
    #[serde(default)]
    efficiency_coeffs: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InventoryRecord {
    window_kev: [f64; 2],
    materials: Vec<MaterialRecord>,
}

/// A detector inventory: the energy window and its materials.
#[derive(Debug, Clone, PartialEq)]
pub struct Inventory {
    pub window: EnergyWindow,
    pub materials: Vec<MaterialComponent>,
}

/// Parses an inventory JSON document.
///
/// A material without `efficiency_coeffs` takes the built-in polynomial of
/// the same name.
pub fn parse_inventory(json: &str) -> Result<Inventory> {
    let record: InventoryRecord =
        serde_json::from_str(json).map_err(|e| Error::invalid(format!("inventory: {e}")))?;
    let [lo, hi] = record.window_kev;
    let window = EnergyWindow::new(lo, hi)?;
    let materials = record
        .materials
        .into_iter()
        .map(|m| {
            let efficiency = match m.efficiency_coeffs {
                Some(c) => EfficiencyPoly::new(c)
                    .map_err(|e| Error::invalid(format!("{}: efficiency_coeffs: {e}", m.name)))?,
                None => builtin_efficiency(&m.name)
                    .ok_or_else(|| {
                        Error::invalid(format!(
                            "{}: missing field `efficiency_coeffs` and no built-in material of that name (known: {})",
                            m.name,
                            builtin_material_names().join(", ")
                        ))
                    })?
                    .poly(),
            };
            MaterialComponent::new(m.name, m.n_protons, m.atoms_per_kg, m.mass_kg, m.live_time_s, efficiency)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Inventory { window, materials })
}

fn csv<'a>(header: &str, rows: impl Iterator<Item = (f64, f64)> + 'a) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for (x, y) in rows {
        writeln!(out, "{x:.16e},{y:.16e}").expect("writing to a String");
    }
    out
}

/// CSV with header `r_c_m,lambda_max_per_s`.
pub fn exclusion_csv(curve: &ExclusionCurve) -> String {
    csv("r_c_m,lambda_max_per_s", curve.points.iter().copied())
}

/// CSV with header `energy_kev,density_per_kev`.
pub fn shape_csv(shape: &SignalShape) -> String {
    csv(
        "energy_kev,density_per_kev",
        shape
            .energies_kev
            .iter()
            .copied()
            .zip(shape.density.iter().copied()),
    )
}
