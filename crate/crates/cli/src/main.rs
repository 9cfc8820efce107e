//! Command-line front end: parse germs in the tuple notation, print
//! invariants, resolve plane germs, classify, and verify the catalogue and
//! its adjacency witnesses.
//!
//! Exit codes: 0 ok, 1 usage, 2 parse error, 3 verification failure,
//! 4 stabilization failure.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use multigerm::atlas::{Atlas, Params};
use multigerm::classify::Classifier;
use multigerm::germ::{GermError, MultiGerm, Stabilize};
use multigerm::notation::{parse_germ, print_germ};
use multigerm::plane::{ade_recognize, resolution_tree, PlaneError};
use multigerm::rat::parse_q;

const EXIT_USAGE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_STABILIZE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "multigerm",
    about = "invariants, resolution and classification of parametrised curve singularities",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Initial jet truncation for the stabilization protocol.
    #[arg(long, global = true, default_value_t = 64)]
    truncation: usize,
    /// Modulus for the lambda families (a rational other than 0 and 1).
    #[arg(long, global = true, default_value = "2")]
    lambda: String,
    /// Sample value of the deformation parameter for family checks.
    #[arg(long, global = true, default_value = "1")]
    sample_s: String,
    /// Output style: human text or line-oriented key=value records.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report to a file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// Print the invariant signature of a germ.
    Invariants { input: String },
    /// Classify a germ as simple (with its label) or not.
    Classify { input: String },
    /// Embedded resolution of a plane germ: tree, sequences, modality.
    Resolve { input: String },
    /// Verify every catalogue entry carrying defining equations.
    VerifyAtlas,
    /// Verify every adjacency witness family.
    VerifyAdjacency,
    /// Emit the adjacency graph in DOT format.
    AdjacencyDot,
    /// List the catalogue entries.
    AtlasList,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(EXIT_USAGE);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let stabilize = Stabilize {
        n_init: cli.truncation.clamp(4, 256),
        n_max: 256.max(cli.truncation),
    };
    let Some(lambda) = parse_q(&cli.lambda) else {
        eprintln!("error: --lambda must be a rational number");
        return ExitCode::from(EXIT_USAGE);
    };
    let Some(sample) = parse_q(&cli.sample_s) else {
        eprintln!("error: --sample-s must be a rational number");
        return ExitCode::from(EXIT_USAGE);
    };
    let params = Params { lambda, ..Params::default() };
    // catalogue-wide commands always certify under the library protocol;
    // the truncation flag governs computations on the input germ
    let atlas = match cli.command {
        Command::Invariants { .. } | Command::Classify { .. } | Command::Resolve { .. } => {
            Atlas::with_params(stabilize)
        }
        _ => Atlas::new(),
    };

    let (report, code) = run(&cli, atlas, &params, &stabilize, &sample);
    match &cli.output {
        None => print!("{report}"),
        Some(path) => {
            let written = std::fs::File::create(path)
                .and_then(|mut f| f.write_all(report.as_bytes()));
            if let Err(e) = written {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE);
            }
        }
    }
    ExitCode::from(code)
}

fn run(
    cli: &Cli,
    atlas: Atlas,
    params: &Params,
    stabilize: &Stabilize,
    sample: &multigerm::rat::Q,
) -> (String, u8) {
    match &cli.command {
        Command::Invariants { input } => {
            let germ = match load_germ(input, &atlas, params) {
                Ok(g) => g,
                Err(out) => return out,
            };
            match germ.signature(stabilize) {
                Ok(sig) => {
                    let body = match cli.format {
                        Format::Records => format!("{}\n", sig.render().replace('\n', " ")),
                        Format::Text => {
                            format!("germ={}\n{}\n", print_germ(&germ), sig.render())
                        }
                    };
                    (body, 0)
                }
                Err(e) => germ_error(e),
            }
        }
        Command::Classify { input } => {
            let germ = match load_germ(input, &atlas, params) {
                Ok(g) => g,
                Err(out) => return out,
            };
            // catalogue signatures always use the library protocol; the
            // truncation flag only governs direct invariant computations
            let classifier = match Classifier::new(Atlas::new()) {
                Ok(c) => c,
                Err(e) => return germ_error(e),
            };
            match classifier.recognize(&germ) {
                Ok(verdict) => {
                    let mut out = String::new();
                    if cli.format == Format::Text {
                        out.push_str(&format!("germ={}\n", print_germ(&germ)));
                    }
                    out.push_str(&verdict.render());
                    out.push('\n');
                    (out, 0)
                }
                Err(e) => germ_error(e),
            }
        }
        Command::Resolve { input } => {
            let germ = match load_germ(input, &atlas, params) {
                Ok(g) => g,
                Err(out) => return out,
            };
            match resolution_tree(&germ, stabilize) {
                Ok(tree) => {
                    let mut out = String::new();
                    out.push_str(&tree.render());
                    for b in 0..tree.branch_count {
                        let seq: Vec<String> = tree
                            .multiplicity_sequence(b)
                            .iter()
                            .map(|m| m.to_string())
                            .collect();
                        out.push_str(&format!("sequence{}=({})\n", b + 1, seq.join(",")));
                    }
                    out.push_str(&format!("satellites={}\n", tree.satellite_count()));
                    out.push_str(&format!("modality={}\n", tree.modality()));
                    out.push_str(&format!("simple={}\n", tree.simple()));
                    let label = ade_recognize(&tree)
                        .map(|l| l.to_string())
                        .unwrap_or_else(|| "none".into());
                    out.push_str(&format!("label={label}\n"));
                    (out, 0)
                }
                Err(PlaneError::NotPlane(n)) => (
                    format!("error: resolve needs a plane germ, got dimension {n}\n"),
                    EXIT_USAGE,
                ),
                Err(PlaneError::Germ(e)) => germ_error(e),
                Err(e) => (format!("error: {e}\n"), EXIT_STABILIZE),
            }
        }
        Command::VerifyAtlas => {
            let mut out = String::new();
            let mut ok = true;
            for label in atlas.all_labels() {
                let report = atlas.verify_entry(&label);
                ok &= report.ok;
                out.push_str(&format!(
                    "{} {}: {}\n",
                    if report.ok { "PASS" } else { "FAIL" },
                    report.label,
                    report.details.join("; ")
                ));
            }
            (out, if ok { 0 } else { EXIT_VERIFY })
        }
        Command::VerifyAdjacency => {
            let mut out = String::new();
            let mut ok = true;
            let one = multigerm::rat::qi(1);
            let mut edges = atlas.adjacency_edges();
            if *sample != one {
                for edge in edges.iter_mut() {
                    if let Some(w) = edge.witness.take() {
                        edge.witness = Some(w.with_sample(sample.clone()));
                    }
                }
            }
            for edge in &edges {
                let report = atlas.verify_edge(edge);
                ok &= report.ok;
                out.push_str(&format!(
                    "{} {} -> {} [{}]: {}\n",
                    if report.ok { "PASS" } else { "FAIL" },
                    report.source,
                    report.target,
                    report.kind.as_str(),
                    report.details.join("; ")
                ));
                if cli.format == Format::Records {
                    if let Some(f) = &edge.witness {
                        out.push_str(&f.render());
                    }
                }
            }
            (out, if ok { 0 } else { EXIT_VERIFY })
        }
        Command::AdjacencyDot => (atlas.adjacency_dot(), 0),
        Command::AtlasList => (atlas.render_list(), 0),
    }
}

/// Read the germ from a literal argument, an atlas label, or a file path.
fn load_germ(input: &str, atlas: &Atlas, params: &Params) -> Result<MultiGerm, (String, u8)> {
    let text = match std::fs::metadata(input) {
        Ok(meta) if meta.is_file() => std::fs::read_to_string(input)
            .map(|c| c.trim().to_string())
            .map_err(|e| (format!("error: cannot read {input}: {e}\n"), EXIT_USAGE))?,
        _ => input.to_string(),
    };
    if text.starts_with('(') {
        parse_germ(&text).map_err(|e| (format!("error: {e}\n"), EXIT_PARSE))
    } else {
        atlas
            .instantiate(&text, params)
            .map_err(|e| (format!("error: {e}\n"), EXIT_PARSE))
    }
}

fn germ_error(e: GermError) -> (String, u8) {
    let code = match e {
        GermError::Stabilization { .. } | GermError::Truncation { .. } => EXIT_STABILIZE,
        _ => EXIT_VERIFY,
    };
    (format!("error: {e}\n"), code)
}
