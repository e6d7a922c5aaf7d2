//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on input errors, 2 when a verification fails
//! or the two Chern class computations disagree.

use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::blowup::{BlowupContext, BlowupElement, SignConvention};
use crate::io::output::{render_report, FORMAT_VERSION};
use crate::io::{catalog, parse_model, Format, ResultDocument};
use crate::model::EmbeddingModel;
use crate::Int;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Via {
    Closed,
    Thom,
    #[default]
    Both,
}

impl FromStr for Via {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "closed" => Ok(Via::Closed),
            "thom" => Ok(Via::Thom),
            "both" => Ok(Via::Both),
            other => Err(format!("unknown path `{other}` (expected closed, thom or both)")),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "blowup-chern", version, about = "Cohomology rings and Chern classes of blow-ups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the total Chern class of the blow-up.
    Chern(ModelArgs),
    /// Print graded bases and torsion of the blow-up's cohomology.
    Ring(ModelArgs),
    /// Print all Chern numbers of the blow-up.
    Numbers(ModelArgs),
    /// Run the Euler, restriction, path and rank oracles.
    Verify(ModelArgs),
    /// List the built-in models.
    CatalogList,
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// A model file or a catalog name.
    model: String,
    #[arg(long, default_value = "calibrated")]
    convention: SignConvention,
    #[arg(long, default_value = "text")]
    format: Format,
    #[arg(long, default_value = "both")]
    via: Via,
}

enum Failure {
    Input(String),
    Verification(String),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    1
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Verification(msg)) => {
            let _ = writeln!(err, "verification failed: {msg}");
            2
        }
    }
}

fn load_model(source: &str) -> Result<EmbeddingModel, Failure> {
    let path = Path::new(source);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        let model = parse_model(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("model");
        return Ok(model.with_name(stem));
    }
    catalog::load(source).map_err(|e| Failure::Input(e.to_string()))
}

fn context(args: &ModelArgs) -> Result<BlowupContext, Failure> {
    let model = load_model(&args.model)?;
    BlowupContext::new(model, args.convention).map_err(|e| Failure::Input(e.to_string()))
}

fn compute(ctx: &BlowupContext, via: Via) -> Result<BlowupElement, Failure> {
    let internal = |e: crate::BlowupError| Failure::Input(e.to_string());
    match via {
        Via::Closed => ctx.total_chern().map_err(internal),
        Via::Thom => ctx.total_chern_via_thom().map_err(internal),
        Via::Both => {
            let closed = ctx.total_chern().map_err(internal)?;
            let thom = ctx.total_chern_via_thom().map_err(|e| Failure::Verification(e.to_string()))?;
            match ctx.first_difference(&closed, &thom) {
                None => Ok(closed),
                Some(w) => Err(Failure::Verification(format!(
                    "closed formula and Thom-space chain differ in weight {w}:\n  closed: {}\n  thom:   {}",
                    ctx.display(&closed.component(w)),
                    ctx.display(&thom.component(w))
                ))),
            }
        }
    }
}

#[derive(Serialize)]
struct RingWeight {
    weight: u32,
    rank: usize,
    basis: Vec<String>,
    torsion: Vec<Int>,
}

#[derive(Serialize)]
struct RingDocument {
    format_version: u32,
    model: String,
    convention: SignConvention,
    weights: Vec<RingWeight>,
}

fn ring_document(ctx: &BlowupContext) -> RingDocument {
    let m = ctx.m_ring();
    let x = ctx.x_ring();
    let weights = (0..=ctx.dimension())
        .map(|j| {
            let mut basis: Vec<String> = m.graded_basis(j).basis.iter().map(|b| m.display_monomial(b)).collect();
            for r in 1..ctx.k().min(j + 1) {
                for b in x.graded_basis(j - r).basis {
                    let om = if r == 1 { "w".to_string() } else { format!("w^{r}") };
                    basis.push(if b.is_one() { om } else { format!("{}*{om}", x.display_monomial(&b)) });
                }
            }
            RingWeight { weight: j, rank: basis.len(), basis, torsion: ctx.torsion(j) }
        })
        .collect();
    RingDocument {
        format_version: FORMAT_VERSION,
        model: ctx.model().name().to_string(),
        convention: ctx.convention(),
        weights,
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::CatalogList => {
            for name in catalog::names() {
                writeln!(out, "{name}")?;
            }
        }
        Command::Chern(args) => {
            let ctx = context(&args)?;
            let total = compute(&ctx, args.via)?;
            let numbers = match ctx.model().ambient().pairing() {
                Some(_) => Some(ctx.chern_numbers(&total).map_err(|e| Failure::Input(e.to_string()))?),
                None => None,
            };
            let doc = ResultDocument::new(&ctx, &total, numbers.as_ref(), None);
            write!(out, "{}", doc.render(args.format))?;
        }
        Command::Numbers(args) => {
            let ctx = context(&args)?;
            if ctx.model().ambient().pairing().is_none() {
                return Err(Failure::Input("Chern numbers need a pairing on M".into()));
            }
            let total = compute(&ctx, args.via)?;
            let numbers = ctx.chern_numbers(&total).map_err(|e| Failure::Input(e.to_string()))?;
            let doc = ResultDocument::new(&ctx, &total, Some(&numbers), None);
            match args.format {
                Format::Json => write!(out, "{}", doc.render(Format::Json))?,
                Format::Text => {
                    for (label, v) in doc.chern_numbers.iter().flatten() {
                        writeln!(out, "{label} = {v}")?;
                    }
                }
            }
        }
        Command::Ring(args) => {
            let ctx = context(&args)?;
            let doc = ring_document(&ctx);
            match args.format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializes"))?,
                Format::Text => {
                    for w in &doc.weights {
                        let torsion = if w.torsion.is_empty() {
                            "none".to_string()
                        } else {
                            w.torsion.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" ⊕ ")
                        };
                        writeln!(
                            out,
                            "weight {}: rank {} basis [{}] torsion {torsion}",
                            w.weight,
                            w.rank,
                            w.basis.join(", ")
                        )?;
                    }
                }
            }
        }
        Command::Verify(args) => {
            let ctx = context(&args)?;
            let report = ctx.verify_report().map_err(|e| Failure::Input(e.to_string()))?;
            match args.format {
                Format::Json => {
                    let total = ctx.total_chern().map_err(|e| Failure::Input(e.to_string()))?;
                    let doc = ResultDocument::new(&ctx, &total, None, Some(report.clone()));
                    write!(out, "{}", doc.render(Format::Json))?;
                }
                Format::Text => write!(out, "{}", render_report(&report))?,
            }
            if !report.passed() {
                let failed: Vec<&str> =
                    report.checks().iter().filter(|(_, c)| c.status == crate::blowup::CheckStatus::Fail).map(|(n, _)| *n).collect();
                return Err(Failure::Verification(failed.join(", ")));
            }
        }
    }
    Ok(())
}
