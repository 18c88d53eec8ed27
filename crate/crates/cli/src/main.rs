#![allow(clippy::needless_range_loop)]

mod commands;
mod manifest;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "asympl", version, about = "Hamiltonian vector fields on almost symplectic manifolds")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args, Clone, Debug)]
pub struct Flags {
    /// Manifest file (INI).
    pub manifest: PathBuf,
    /// Form name(s), comma separated where a command takes two.
    #[arg(long, value_delimiter = ',')]
    pub form: Vec<String>,
    /// Vector field name(s).
    #[arg(long, value_delimiter = ',')]
    pub field: Vec<String>,
    /// Function name(s).
    #[arg(long, value_delimiter = ',')]
    pub function: Vec<String>,
    /// Function names for brackets and momentum components.
    #[arg(long, value_delimiter = ',')]
    pub functions: Vec<String>,
    /// Map name(s).
    #[arg(long, value_delimiter = ',')]
    pub map: Vec<String>,
    /// Point as comma-separated rationals (coordinates, then parameters).
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Connection for the tangent-bundle commands.
    #[arg(long)]
    pub connection: Option<String>,
    /// Metric for the tangent-bundle commands.
    #[arg(long)]
    pub metric: Option<String>,
    /// Emit a JSON report.
    #[arg(long)]
    pub json: bool,
    /// Seed for sample points, overriding the manifest.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// σ and ψ with dω = σ∧ω + ψ.
    Lepage(Flags),
    /// Symplectic, locally conformal symplectic or general.
    Classify(Flags),
    /// Locally Hamiltonian test for a field (optionally with its function).
    CheckField(Flags),
    /// Hamiltonian field of a function and its verdict.
    Ham(Flags),
    /// Poisson bracket of two Hamiltonian functions.
    Bracket(Flags),
    /// Fields X with i(X)dω = 0.
    Kernel(Flags),
    /// Pointwise kernel of i(·)dω.
    Cone(Flags),
    /// Dirac frame at a point from generating fields.
    Dirac(Flags),
    /// Momentum map check.
    Momentum(Flags),
    /// Pullback of ω to a level set.
    Restrict(Flags),
    /// Reduced form check q*ϖ = ι*ω.
    Reduce(Flags),
    /// Vertical and complete lifts, and transport of a Hamiltonian pair.
    Lift(Flags),
    /// Horizontal frame and curvature of a connection.
    Curvature(Flags),
    /// Vertical Hamiltonian field.
    Vham(Flags),
    /// Horizontal Hamiltonian field and its flags.
    Hham(Flags),
    /// Diagonal-field criteria on G×G.
    Lie(Flags),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, flags) = match &cli.cmd {
        Cmd::Lepage(f) => ("lepage", f),
        Cmd::Classify(f) => ("classify", f),
        Cmd::CheckField(f) => ("check-field", f),
        Cmd::Ham(f) => ("ham", f),
        Cmd::Bracket(f) => ("bracket", f),
        Cmd::Kernel(f) => ("kernel", f),
        Cmd::Cone(f) => ("cone", f),
        Cmd::Dirac(f) => ("dirac", f),
        Cmd::Momentum(f) => ("momentum", f),
        Cmd::Restrict(f) => ("restrict", f),
        Cmd::Reduce(f) => ("reduce", f),
        Cmd::Lift(f) => ("lift", f),
        Cmd::Curvature(f) => ("curvature", f),
        Cmd::Vham(f) => ("vham", f),
        Cmd::Hham(f) => ("hham", f),
        Cmd::Lie(f) => ("lie", f),
    };
    let start = Instant::now();
    match commands::run(name, flags) {
        Ok(report) => {
            let ms = start.elapsed().as_secs_f64() * 1e3;
            if flags.json {
                println!("{}", serde_json::to_string_pretty(&report.to_json(ms)).expect("serializable"));
            } else {
                print!("{}", report.to_text(ms));
            }
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            if flags.json {
                let v = serde_json::json!({"subcommand": name, "error": format!("{e:#}")});
                println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            }
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
