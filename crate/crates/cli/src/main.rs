mod commands;
mod input;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use commands::{Out, RingArgs};
use input::{CliError, CliResult};
use lgdefect::{Error, FieldSpec};

#[derive(Parser)]
#[command(name = "lgdefect", version, about = "Exact computations with Landau-Ginzburg defects")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Coefficient field for polynomial arguments: QQ or QQ(zeta_n).
    #[arg(long, global = true, env = "LGDEFECT_FIELD", default_value = "QQ")]
    field: String,
    /// Multiplier for the truncation bound used by fusion.
    #[arg(long, global = true, env = "LGDEFECT_SAFETY", default_value = "2")]
    safety: String,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct RingOpts {
    /// Variables, comma separated; inferred from the input when absent.
    #[arg(long, value_delimiter = ',')]
    vars: Vec<String>,
    /// Rational degrees of the variables, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    degrees: Vec<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Monomial basis and dimension of the Jacobi ring of W.
    Jacobi {
        #[command(flatten)]
        ring: RingOpts,
        /// Potential, or @file.
        potential: String,
    },
    /// Powers of the variables expressed in the generators of an ideal.
    Lift {
        #[command(flatten)]
        ring: RingOpts,
        /// Take the single argument as a potential and lift in its Jacobian ideal.
        #[arg(long)]
        jacobian: bool,
        #[arg(required = true)]
        generators: Vec<String>,
    },
    /// Dimensions of H^0 and H^1 of Hom(X, Y).
    Homdim { x: String, y: String },
    /// Decide whether a morphism X -> Y is null-homotopic; prints a witness.
    Nullhtpy {
        x: String,
        y: String,
        /// JSON file with the matrix rows.
        #[arg(long)]
        matrix: String,
        #[arg(long, default_value = "even")]
        parity: String,
    },
    /// Left or right quantum dimension of a defect.
    Qdim {
        defect: String,
        #[arg(long, default_value = "right")]
        side: String,
        /// Optional decoration, as a matrix JSON file.
        #[arg(long)]
        phi: Option<String>,
    },
    /// Bulk or boundary residue pairing.
    Pairing {
        #[command(subcommand)]
        kind: PairingKind,
    },
    /// Gram matrix of the bulk or boundary pairing.
    Gram {
        #[command(subcommand)]
        kind: GramKind,
    },
    /// Central charge from the variable degrees.
    Ccharge {
        #[command(flatten)]
        ring: RingOpts,
        /// Optional potential, checked to have degree 2.
        potential: Option<String>,
    },
    /// Fuse Y ⊗ X over the intermediate variables; prints the result as factorisation JSON.
    Fuse {
        y: String,
        x: String,
        #[arg(long, value_delimiter = ',', required = true)]
        over: Vec<String>,
    },
    /// Orbifold algebras, equivariant factorisations and the A-D algebra.
    Orbifold {
        #[command(subcommand)]
        cmd: OrbifoldCmd,
    },
    /// Recompute the worked examples and compare with the published values.
    Report {
        #[arg(long, default_value_t = 2)]
        d_min: u32,
        #[arg(long, default_value_t = 6)]
        d_max: u32,
    },
}

#[derive(Subcommand)]
enum PairingKind {
    /// Res[φ1 φ2 / ∂W].
    Bulk {
        #[command(flatten)]
        ring: RingOpts,
        potential: String,
        phi1: String,
        phi2: String,
    },
    /// Kapustin-Li pairing of two endomorphism matrices of X.
    Boundary { x: String, psi1: String, psi2: String },
}

#[derive(Subcommand)]
enum GramKind {
    Bulk {
        #[command(flatten)]
        ring: RingOpts,
        potential: String,
    },
    Boundary {
        x: String,
        #[arg(long, default_value = "even")]
        parity: String,
    },
}

#[derive(clap::Args)]
struct AgOpts {
    #[command(flatten)]
    ring: RingOpts,
    /// Group action JSON file.
    #[arg(long)]
    action: String,
    potential: String,
}

#[derive(Subcommand)]
enum OrbifoldCmd {
    /// Build A_G and print its sectors and carrier.
    AgBuild(AgOpts),
    /// Check the Frobenius algebra axioms of A_G.
    AgCheck(AgOpts),
    /// Whether A_G is symmetric.
    AgSymmetric(AgOpts),
    /// Validate an equivariant structure and its A_G-module.
    EquivCheck {
        x: String,
        #[arg(long)]
        action: String,
        /// Equivariant structure JSON file.
        #[arg(long)]
        structure: String,
    },
    /// A_d = X† ⊗ X for the A-D defect, as factorisation JSON.
    AdBuild {
        #[arg(long)]
        d: u32,
    },
}

fn ring_args<'a>(field: FieldSpec, r: &'a RingOpts) -> RingArgs<'a> {
    RingArgs {
        field,
        vars: &r.vars,
        degrees: &r.degrees,
    }
}

/// Runs the command; the flag is false when a check ran but failed.
fn run(cli: &Cli) -> CliResult<(Out, bool)> {
    let field = FieldSpec::parse(&cli.field)?;
    let safety: u32 = match cli.safety.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => return Err(Error::Invalid(format!("safety factor must be a positive integer, got {}", cli.safety)).into()),
    };
    let ok = |o: Out| Ok((o, true));
    match &cli.cmd {
        Cmd::Jacobi { ring, potential } => ok(commands::jacobi(&ring_args(field, ring), potential)?),
        Cmd::Lift { ring, jacobian, generators } => ok(commands::lift(&ring_args(field, ring), generators, *jacobian)?),
        Cmd::Homdim { x, y } => ok(commands::homdim(x, y)?),
        Cmd::Nullhtpy { x, y, matrix, parity } => ok(commands::nullhtpy(x, y, matrix, parity)?),
        Cmd::Qdim { defect, side, phi } => ok(commands::qdim(defect, side, phi.as_deref())?),
        Cmd::Pairing { kind } => match kind {
            PairingKind::Bulk { ring, potential, phi1, phi2 } => {
                ok(commands::pairing_bulk(&ring_args(field, ring), potential, phi1, phi2)?)
            }
            PairingKind::Boundary { x, psi1, psi2 } => ok(commands::pairing_boundary(x, psi1, psi2)?),
        },
        Cmd::Gram { kind } => match kind {
            GramKind::Bulk { ring, potential } => ok(commands::gram_bulk(&ring_args(field, ring), potential)?),
            GramKind::Boundary { x, parity } => ok(commands::gram_boundary(x, parity)?),
        },
        Cmd::Ccharge { ring, potential } => ok(commands::ccharge(&ring_args(field, ring), potential.as_deref())?),
        Cmd::Fuse { y, x, over } => ok(commands::fuse_cmd(y, x, over, safety)?),
        Cmd::Orbifold { cmd } => match cmd {
            OrbifoldCmd::AgBuild(a) => ok(commands::ag_build(&ring_args(field, &a.ring), &a.potential, &a.action)?),
            OrbifoldCmd::AgCheck(a) => commands::ag_check(&ring_args(field, &a.ring), &a.potential, &a.action),
            OrbifoldCmd::AgSymmetric(a) => {
                ok(commands::ag_symmetric(&ring_args(field, &a.ring), &a.potential, &a.action)?)
            }
            OrbifoldCmd::EquivCheck { x, action, structure } => ok(commands::equiv_check(x, action, structure)?),
            OrbifoldCmd::AdBuild { d } => ok(commands::ad_build(*d, safety)?),
        },
        Cmd::Report { d_min, d_max } => {
            let claims = report::claims(*d_min, *d_max, safety)?;
            let all = claims.iter().all(|c| c.matches());
            Ok((
                Out {
                    text: report::render(&claims),
                    json: json!({ "claims": report::to_json(&claims), "all_match": all }),
                },
                all,
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, passed)) => {
            let body = if cli.json {
                serde_json::to_string_pretty(&out.json).expect("json serialises")
            } else {
                out.text
            };
            // a closed pipe is not an error of the computation
            let _ = writeln!(std::io::stdout(), "{body}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError { origin, error }) => {
            let origin = origin.map(|o| format!("{o}: ")).unwrap_or_default();
            if cli.json {
                let v = json!({ "error": { "code": error.code(), "message": format!("{origin}{error}") } });
                eprintln!("{}", serde_json::to_string_pretty(&v).expect("json serialises"));
            } else {
                eprintln!("error[{}]: {origin}{error}", error.code());
            }
            ExitCode::from(1)
        }
    }
}
