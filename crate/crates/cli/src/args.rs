use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Collapse-noise radiation: emission rates, detector folding and upper limits.
#[derive(Debug, Parser)]
#[command(name = "cslrad", version)]
pub struct Cli {
    /// Write the result here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Upper limit on λ at one correlation length.
    Limit {
        #[command(flatten)]
        counts: CountingArgs,
        /// Correlation length r_C in m.
        #[arg(long, default_value_t = 1e-7)]
        rc: f64,
    },
    /// Exclusion curve λ_max(r_C) as CSV.
    Exclusion {
        #[command(flatten)]
        counts: CountingArgs,
        #[arg(long, default_value_t = 1e-9)]
        rc_min: f64,
        #[arg(long, default_value_t = 1e-3)]
        rc_max: f64,
        /// Number of log-spaced grid points (at least 2).
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Signal constant a for a detector inventory.
    Signal {
        #[command(flatten)]
        inventory: InventoryArgs,
    },
    /// Normalised signal spectrum as CSV.
    Shape {
        #[command(flatten)]
        inventory: InventoryArgs,
        #[arg(long, default_value_t = 281)]
        points: usize,
    },
    /// Emission rate dΓ/dE for a particle system or a number of atoms.
    Rate {
        /// Particle-system JSON file.
        #[arg(long, value_name = "PATH", conflicts_with_all = ["atoms", "na", "electrons"], required_unless_present = "atoms")]
        system: Option<PathBuf>,
        /// Number of atoms.
        #[arg(long, requires = "na")]
        atoms: Option<f64>,
        /// Atomic number N_A.
        #[arg(long, requires = "atoms")]
        na: Option<u32>,
        /// Add the incoherent electron term N_A.
        #[arg(long, requires = "atoms")]
        electrons: bool,
        /// Photon energy in keV.
        #[arg(long)]
        energy: f64,
        /// Collapse rate λ in s⁻¹.
        #[arg(long, default_value_t = 1e-16)]
        lambda: f64,
        /// Correlation length r_C in m.
        #[arg(long, default_value_t = 1e-7)]
        rc: f64,
    },
    /// Detection efficiency of a built-in material.
    Efficiency {
        #[arg(long)]
        material: String,
        /// Energy in keV.
        #[arg(long)]
        energy: f64,
    },
    /// Coherent, incoherent or mixed emission for a particle system.
    Regime {
        #[arg(long, value_name = "PATH")]
        system: PathBuf,
        #[arg(long)]
        energy: f64,
        #[arg(long, default_value_t = 1e-7)]
        rc: f64,
    },
}

#[derive(Debug, Args)]
pub struct CountingArgs {
    /// Observed counts.
    #[arg(long, default_value_t = 576)]
    pub zc: u64,
    /// Expected background counts.
    #[arg(long, default_value_t = 506)]
    pub zb: u64,
    /// Signal constant a in s·m².
    #[arg(long = "a", default_value_t = 2.0986)]
    pub a: f64,
    #[arg(long, default_value_t = 0.95)]
    pub credibility: f64,
}

#[derive(Debug, Args)]
pub struct InventoryArgs {
    /// Inventory JSON file.
    #[arg(long, value_name = "PATH")]
    pub inventory: PathBuf,
    /// Override the lower window edge (keV).
    #[arg(long)]
    pub emin: Option<f64>,
    /// Override the upper window edge (keV).
    #[arg(long)]
    pub emax: Option<f64>,
}
