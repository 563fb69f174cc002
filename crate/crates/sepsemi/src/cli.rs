//! Command line interface.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use sepsemi_core::curve::validate_smoothness;
use sepsemi_core::hyper::{
    default_divisor_xs, default_spread, hyper_complex_orientation, model_hyperelliptic, realize_alternating,
    realize_projection,
};
use sepsemi_core::morphism::DegreeVector;
use sepsemi_core::quadric::QuadricKind;
use sepsemi_core::realize::{realize_target, Model};
use sepsemi_core::topology::{complex_orientation, d_orientation, trace_real_locus, PlaneSection};

use crate::error::{exit, CliError, Result};
use crate::formats::{read_json, to_json, ClassifiedJson, CurveJson, LocusJson, QuadricJson, TopologySummary};
use crate::report::{build_model, check_table_row, run_verify_hyper, run_verify_table, Params, HYPER_DELTA};
use crate::svg::{chart_figure, hyper_figure, SectionStyle};

#[derive(Debug, Parser)]
#[command(name = "sepsemi", version, about = "Separating morphisms and semigroups of real curves")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Corrector tolerance of the tracer.
    #[arg(long, global = true, default_value_t = 1e-11)]
    pub tol: f64,
    /// Tracing step.
    #[arg(long, global = true, default_value_t = 0.01)]
    pub step: f64,
    /// Sampled fibers per certificate.
    #[arg(long, global = true, default_value_t = 200)]
    pub samples: usize,
    /// Enumeration bound for semigroup comparisons.
    #[arg(long, global = true, default_value_t = 8)]
    pub bound: u32,
    /// Model perturbation (δ for hyperelliptic models).
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    #[arg(long, global = true, env = "SEPSEMI_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Write the output here instead of standard output.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    /// Record wall-clock time in reports.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct Row {
    /// ellipsoid, cone or hyperboloid.
    #[arg(long, value_parser = parse_kind)]
    pub kind: QuadricKind,
    /// Number of real components.
    #[arg(long)]
    pub r: usize,
    /// Number of ovals.
    #[arg(long)]
    pub l: usize,
}

/// A row that may be omitted in favor of another input.
#[derive(Debug, Clone, Args)]
pub struct OptRow {
    /// ellipsoid, cone or hyperboloid.
    #[arg(long, value_parser = parse_kind, requires_all = ["r", "l"])]
    pub kind: Option<QuadricKind>,
    /// Number of real components.
    #[arg(long, requires = "kind")]
    pub r: Option<usize>,
    /// Number of ovals.
    #[arg(long, requires = "kind")]
    pub l: Option<usize>,
}

impl OptRow {
    pub fn row(&self) -> Option<Row> {
        Some(Row { kind: self.kind?, r: self.r?, l: self.l? })
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a real quadric given as a JSON file or 16 comma-separated entries.
    Classify {
        #[arg(long, conflicts_with = "matrix")]
        input: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        matrix: Option<Vec<f64>>,
    },
    /// Build and validate the model curve of a row.
    Model {
        #[command(flatten)]
        row: Row,
    },
    /// Trace the real locus of a model row or a curve file.
    Analyze {
        #[arg(long, conflicts_with = "kind")]
        curve: Option<PathBuf>,
        #[command(flatten)]
        row: OptRow,
        /// Keep every n-th sample in the output.
        #[arg(long, default_value_t = 10)]
        stride: usize,
    },
    /// Certify a separating morphism with the given degree vector.
    Realize {
        #[command(flatten)]
        row: Row,
        #[arg(long, value_delimiter = ',', required = true)]
        target: Vec<u32>,
    },
    /// Run the full verification of a row.
    VerifyTable {
        #[command(flatten)]
        row: Row,
    },
    /// Hyperelliptic curves.
    Hyper {
        #[command(subcommand)]
        command: HyperCommand,
    },
    /// Draw a model row or a hyperelliptic curve as SVG.
    Plot {
        #[command(flatten)]
        row: OptRow,
        /// Genus of a hyperelliptic model, instead of a row.
        #[arg(long, conflicts_with = "kind")]
        genus: Option<u32>,
        /// A D-section: plane coefficients (normalized coordinates), or the
        /// abscissa of a double fiber for hyperelliptic curves.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        section: Option<Vec<f64>>,
        /// Auxiliary sections, drawn dashed; repeatable.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        aux: Vec<f64>,
        /// Orient by the complex orientation of a realized degree vector.
        #[arg(long, value_delimiter = ',')]
        target: Option<Vec<u32>>,
    },
}

#[derive(Debug, Subcommand)]
pub enum HyperCommand {
    /// The model curve y² = F(x) of a genus.
    Model {
        #[arg(long)]
        genus: u32,
    },
    /// The hyperelliptic projection and the alternating pencil.
    Realize {
        #[arg(long)]
        genus: u32,
        /// Abscissae of the alternating divisor (g + 1 values).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        xs: Option<Vec<f64>>,
    },
    /// Run the full verification of a genus.
    Verify {
        #[arg(long)]
        genus: u32,
    },
}

fn parse_kind(s: &str) -> std::result::Result<QuadricKind, String> {
    QuadricKind::parse(s).ok_or_else(|| format!("unknown quadric kind {s:?}"))
}

impl Global {
    pub fn params(&self) -> Params {
        Params {
            seed: self.seed,
            tol: self.tol,
            step: self.step,
            samples: self.samples,
            epsilon: self.epsilon,
            ..Params::default()
        }
    }
}

/// The text to emit and the exit code.
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

impl Outcome {
    fn json<T: Serialize>(v: &T) -> Result<Self> {
        Ok(Outcome { text: to_json(v)?, code: exit::PASS })
    }
}

fn row_model(row: &Row, params: &Params) -> Result<Model> {
    check_table_row(row.kind, row.r, row.l)?;
    Ok(build_model(row.kind, row.r, row.l, params)?)
}

fn plane(v: &[f64]) -> Result<[f64; 4]> {
    v.try_into().map_err(|_| CliError::Input(format!("a plane needs 4 coefficients, got {}", v.len())))
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let params = cli.global.params();
    let bound = cli.global.bound;
    let start = Instant::now();
    match &cli.command {
        Command::Classify { input, matrix } => {
            let q = match (input, matrix) {
                (Some(p), _) => read_json::<QuadricJson>(p)?,
                (None, Some(m)) => {
                    if m.len() != 16 {
                        return Err(CliError::Input(format!("a 4×4 matrix needs 16 entries, got {}", m.len())));
                    }
                    let mut a = [[0.0; 4]; 4];
                    for (i, x) in m.iter().enumerate() {
                        a[i / 4][i % 4] = *x;
                    }
                    QuadricJson { matrix: a }
                }
                (None, None) => return Err(CliError::Input("give --input or --matrix".into())),
            };
            Outcome::json(&ClassifiedJson::from(&q.classify()?))
        }
        Command::Model { row } => {
            let m = row_model(row, &params)?;
            let smooth = validate_smoothness(&m.curve, 64, 1e-9)?;
            #[derive(Serialize)]
            struct ModelOut {
                curve: CurveJson,
                smoothness: sepsemi_core::curve::SmoothnessCertificate,
                topology: TopologySummary,
            }
            Outcome::json(&ModelOut {
                curve: CurveJson::from(&m.curve),
                smoothness: smooth,
                topology: TopologySummary::from(&m.locus),
            })
        }
        Command::Analyze { curve, row, stride } => {
            let locus = match (curve, row.row()) {
                (Some(p), _) => {
                    let c = read_json::<CurveJson>(p)?.to_curve()?;
                    validate_smoothness(&c, 64, 1e-9)?;
                    trace_real_locus(&c, &params.trace())?
                }
                (None, Some(row)) => row_model(&row, &params)?.locus,
                (None, None) => return Err(CliError::Input("give --curve or a row".into())),
            };
            Outcome::json(&LocusJson::new(&locus, *stride))
        }
        Command::Realize { row, target } => {
            let m = row_model(row, &params)?;
            Outcome::json(&realize_target(&m, &DegreeVector(target.clone()), &params.realize())?)
        }
        Command::VerifyTable { row } => {
            let mut rep = run_verify_table(row.kind, row.r, row.l, bound, &params)?;
            if cli.global.timing {
                rep.runtime_ms = Some(start.elapsed().as_millis() as u64);
            }
            Ok(Outcome { text: to_json(&rep)?, code: rep.exit_code() })
        }
        Command::Hyper { command } => {
            let delta = params.epsilon.unwrap_or(HYPER_DELTA);
            match command {
                HyperCommand::Model { genus } => {
                    Outcome::json(&model_hyperelliptic(*genus, &default_spread(*genus), delta)?)
                }
                HyperCommand::Realize { genus, xs } => {
                    let h = model_hyperelliptic(*genus, &default_spread(*genus), delta)?;
                    let xs = xs.clone().unwrap_or_else(|| default_divisor_xs(*genus));
                    let cert = params.certify();
                    Outcome::json(&[realize_projection(&h, &cert)?, realize_alternating(&h, &xs, &cert)?])
                }
                HyperCommand::Verify { genus } => {
                    let mut rep = run_verify_hyper(*genus, bound, &params)?;
                    if cli.global.timing {
                        rep.runtime_ms = Some(start.elapsed().as_millis() as u64);
                    }
                    Ok(Outcome { text: to_json(&rep)?, code: rep.exit_code() })
                }
            }
        }
        Command::Plot { row, genus, section, aux, target } => match (row.row(), genus) {
            (_, Some(g)) => {
                let h = model_hyperelliptic(*g, &default_spread(*g), params.epsilon.unwrap_or(HYPER_DELTA))?;
                let r = realize_projection(&h, &params.certify())?;
                let o = hyper_complex_orientation(&h, &r.map, &r.certificate)?;
                let spread = default_spread(*g);
                let lo = spread.first().copied().unwrap_or(0.0) - 1.5;
                let hi = spread.last().copied().unwrap_or(0.0) + 1.5;
                let text = hyper_figure(&h, (lo, hi), section.as_deref().unwrap_or(&[]), aux, Some(&o));
                Ok(Outcome { text, code: exit::PASS })
            }
            (Some(row), None) => {
                let m = row_model(&row, &params)?;
                let d = section.as_deref().map(plane).transpose()?;
                let d = d.map(|a| PlaneSection::new(&m.curve.quadric, &a, 720)).transpose()?;
                if aux.len() % 4 != 0 {
                    return Err(CliError::Input("auxiliary sections need 4 coefficients each".into()));
                }
                let mut auxs = Vec::new();
                for a in aux.chunks(4) {
                    auxs.push(PlaneSection::new(&m.curve.quadric, &plane(a)?, 720)?);
                }
                let orientation = match (target, &d) {
                    (Some(t), _) => {
                        let x = realize_target(&m, &DegreeVector(t.clone()), &params.realize())?;
                        Some(complex_orientation(&m.curve, &x.pencil, &m.locus, &x.certificate)?)
                    }
                    (None, Some(d)) => {
                        let loops: Vec<Vec<[f64; 4]>> = m.locus.loops.iter().map(|lp| lp.samples.clone()).collect();
                        let col = d.coloring(&loops, m.kind(), params.resolution)?;
                        Some(d_orientation(&m.locus, d, &col)?)
                    }
                    (None, None) => None,
                };
                let mut styles: Vec<SectionStyle<'_>> =
                    d.iter().map(|section| SectionStyle { section, auxiliary: false }).collect();
                styles.extend(auxs.iter().map(|section| SectionStyle { section, auxiliary: true }));
                Ok(Outcome { text: chart_figure(&m.locus, &styles, orientation.as_ref()), code: exit::PASS })
            }
            (None, None) => Err(CliError::Input("give a row or --genus".into())),
        },
    }
}

/// Parses arguments, runs the command and writes the output; returns the
/// process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::INPUT } else { exit::PASS };
        }
    };
    let start = Instant::now();
    let out = run(&cli).and_then(|o| {
        match &cli.global.out {
            Some(p) => std::fs::write(p, &o.text)?,
            None => {
                let mut stdout = std::io::stdout().lock();
                match writeln!(stdout, "{}", o.text.trim_end()) {
                    Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                    r => r?,
                }
            }
        }
        Ok(o.code)
    });
    if cli.global.timing {
        eprintln!("elapsed {:.3} s", start.elapsed().as_secs_f64());
    }
    match out {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
