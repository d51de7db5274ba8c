use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use cslrad::domain::{EnergyWindow, NoiseParams, Warning};
use cslrad::emission::{classify_regime, rate_atomic, rate_general};
use cslrad::inference::{exclusion_curve, upper_limit_lambda, CountingExperiment};
use cslrad::io::{exclusion_csv, parse_inventory, parse_particle_system, shape_csv, Inventory};
use cslrad::signal::{builtin_efficiency, builtin_material_names, SignalModel};

use crate::args::{Command, CountingArgs, InventoryArgs};

pub const EXIT_NO_POSITIVE_LIMIT: u8 = 2;

/// Everything a command produced; nothing is written until it succeeds.
pub struct Outcome {
    pub text: String,
    pub warnings: Vec<Warning>,
    pub exit_code: u8,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            warnings: Vec::new(),
            exit_code: 0,
        }
    }

    fn warn(mut self, warnings: Vec<Warning>) -> Self {
        self.warnings = warnings;
        self
    }
}

pub fn run(command: &Command) -> Result<Outcome> {
    match command {
        Command::Limit { counts, rc } => limit(counts, *rc),
        Command::Exclusion {
            counts,
            rc_min,
            rc_max,
            points,
        } => exclusion(counts, *rc_min, *rc_max, *points),
        Command::Signal { inventory } => signal(inventory),
        Command::Shape { inventory, points } => shape(inventory, *points),
        Command::Rate {
            system,
            atoms,
            na,
            electrons,
            energy,
            lambda,
            rc,
        } => {
            let noise = NoiseParams::new(*lambda, *rc)?;
            match (system, atoms, na) {
                (Some(path), _, _) => rate_system(path, &noise, *energy),
                (None, Some(n), Some(z)) => rate_atoms(*n, *z, *electrons, &noise, *energy),
                _ => bail!("rate needs either --system or both --atoms and --na"),
            }
        }
        Command::Efficiency { material, energy } => efficiency(material, *energy),
        Command::Regime { system, energy, rc } => regime(system, *energy, *rc),
    }
}

fn experiment(counts: &CountingArgs) -> Result<CountingExperiment> {
    Ok(CountingExperiment::new(
        counts.zc,
        counts.zb,
        counts.a,
        EnergyWindow::default(),
    )?)
}

fn limit(counts: &CountingArgs, rc: f64) -> Result<Outcome> {
    let exp = experiment(counts)?;
    let limit = upper_limit_lambda(&exp, rc, counts.credibility)?;
    let mut out = String::new();
    writeln!(
        out,
        "z_c = {}  z_b = {}  a = {:.3e} s m^2",
        exp.z_c(),
        exp.z_b(),
        exp.a()
    )?;
    writeln!(
        out,
        "r_C = {:.3e} m  credibility = {}",
        rc, counts.credibility
    )?;
    writeln!(out, "Lambda_bar_c = {:.3e}", limit.lambda_bar_c)?;
    writeln!(out, "signal quota = {:.3e}", limit.signal_quota)?;
    let exit_code = match limit.lambda_max {
        Some(l) => {
            writeln!(out, "lambda_max = {l:.3e} s^-1")?;
            0
        }
        None => {
            writeln!(
                out,
                "lambda_max = none (no positive limit: Lambda_bar_c <= z_b + 2)"
            )?;
            EXIT_NO_POSITIVE_LIMIT
        }
    };
    Ok(Outcome {
        text: out,
        warnings: Vec::new(),
        exit_code,
    })
}

fn exclusion(counts: &CountingArgs, rc_min: f64, rc_max: f64, points: usize) -> Result<Outcome> {
    let exp = experiment(counts)?;
    let curve = exclusion_curve(&exp, rc_min, rc_max, points, counts.credibility)?;
    Ok(Outcome::ok(exclusion_csv(&curve)))
}

fn load_inventory(args: &InventoryArgs) -> Result<Inventory> {
    let json = read(&args.inventory)?;
    let mut inv =
        parse_inventory(&json).with_context(|| format!("reading {}", args.inventory.display()))?;
    if args.emin.is_some() || args.emax.is_some() {
        inv.window = EnergyWindow::new(
            args.emin.unwrap_or(inv.window.e_min()),
            args.emax.unwrap_or(inv.window.e_max()),
        )?;
    }
    Ok(inv)
}

fn signal(args: &InventoryArgs) -> Result<Outcome> {
    let inv = load_inventory(args)?;
    let model = SignalModel::new(inv.materials, inv.window);
    let a = model.signal_constant()?;
    let mut out = String::new();
    writeln!(out, "window = {}", model.window())?;
    for c in &a.per_material {
        writeln!(out, "{}: a = {:.3e} s m^2", c.name, c.a)?;
    }
    writeln!(out, "total: a = {:.3e} s m^2", a.total)?;
    writeln!(out, "z_s = a * lambda / r_C^2")?;
    Ok(Outcome::ok(out).warn(a.warnings))
}

fn shape(args: &InventoryArgs, points: usize) -> Result<Outcome> {
    let inv = load_inventory(args)?;
    let model = SignalModel::new(inv.materials, inv.window);
    let shape = model.shape(points)?;
    let csv = shape_csv(&shape);
    Ok(Outcome::ok(csv).warn(shape.warnings))
}

fn rate_system(path: &Path, noise: &NoiseParams, energy: f64) -> Result<Outcome> {
    let system = parse_particle_system(&read(path)?)
        .with_context(|| format!("reading {}", path.display()))?;
    let rate = rate_general(&system, noise, energy)?;
    let mut out = String::new();
    writeln!(out, "particles = {}", system.len())?;
    writeln!(
        out,
        "E = {energy:.3e} keV  lambda = {:.3e} s^-1  r_C = {:.3e} m",
        noise.lambda, noise.r_c
    )?;
    writeln!(out, "dGamma/dE = {:.3e} keV^-1 s^-1", rate.per_kev())?;
    Ok(Outcome::ok(out))
}

fn rate_atoms(
    n_atoms: f64,
    na: u32,
    electrons: bool,
    noise: &NoiseParams,
    energy: f64,
) -> Result<Outcome> {
    let r = rate_atomic(n_atoms, na, noise, energy, electrons)?;
    let mut out = String::new();
    writeln!(
        out,
        "atoms = {n_atoms:.3e}  N_A = {na}  electrons = {electrons}"
    )?;
    writeln!(out, "amplification = {}", r.amplification)?;
    writeln!(
        out,
        "E = {energy:.3e} keV  lambda = {:.3e} s^-1  r_C = {:.3e} m",
        noise.lambda, noise.r_c
    )?;
    writeln!(out, "dGamma/dE = {:.3e} keV^-1 s^-1", r.rate.per_kev())?;
    Ok(Outcome::ok(out).warn(r.warnings))
}

fn efficiency(material: &str, energy: f64) -> Result<Outcome> {
    let Some(builtin) = builtin_efficiency(material) else {
        bail!(
            "unknown material {material:?}; valid names: {}",
            builtin_material_names().join(", ")
        );
    };
    if !energy.is_finite() {
        bail!("energy must be finite, got {energy}");
    }
    let eff = builtin.poly().evaluate(energy);
    let mut warnings = Vec::new();
    if !EnergyWindow::default().contains(energy) {
        warnings.push(Warning::EnergyOutsideValidity { energy_kev: energy });
    }
    if eff.clamped {
        warnings.push(Warning::EfficiencyClamped {
            material: builtin.name.to_string(),
            energy_kev: energy,
            raw: eff.raw,
        });
    }
    let out = format!(
        "{} at {energy:.3e} keV: efficiency = {:.3e}\n",
        builtin.name, eff.value
    );
    Ok(Outcome::ok(out).warn(warnings))
}

fn regime(path: &Path, energy: f64, rc: f64) -> Result<Outcome> {
    let system = parse_particle_system(&read(path)?)
        .with_context(|| format!("reading {}", path.display()))?;
    let noise = NoiseParams::new(1.0, rc)?;
    let r = classify_regime(&system, &noise, energy)?;
    let mut out = String::new();
    writeln!(out, "regime = {}", r.kind)?;
    match r.separations {
        Some((min, max)) => writeln!(out, "separations = {min:.3e} .. {max:.3e} m")?,
        None => writeln!(out, "separations = none (single particle)")?,
    }
    writeln!(
        out,
        "wavelength = {:.3e} m  (reduced {:.3e} m)",
        r.wavelength, r.reduced_wavelength
    )?;
    writeln!(out, "r_C = {:.3e} m", r.r_c)?;
    Ok(Outcome::ok(out))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}
