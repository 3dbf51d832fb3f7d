use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use descent_atlas::config::{parse_pairs, DescentChoice, ExperimentConfig, Format, Mode};
use descent_atlas::exec::Parallel;
use descent_atlas::parse;
use descent_atlas::report::{to_csv, to_json, CertReport};
use descent_atlas::run::{self, instance_from_config, make_basis, RunError, RunOptions};
use descent_core::certify;
use descent_core::descent;

#[derive(Parser)]
#[command(name = "atlas", version, about = "Exact point counts, descent forms and bound checks over finite-field towers")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand)]
enum Cmd {
    /// Count y^q - y = f(x) over k_r and check the curve bounds.
    CountAs,
    /// Count y^q - y = f(x_1..x_n) over k_r^n and check the hypersurface bounds.
    CountAsHyper,
    /// Count y^((q-1)/e) = f(x) over k_r and check the Kummer bounds.
    CountKummer,
    /// Print the descended polynomial (--kind s, t or s-multivar).
    Descend,
    /// Print hypothesis certificates for --poly.
    Certify,
    /// Random instances over the grid --fields x --exts x --degrees.
    Sweep,
    /// Brute-force the closed-form counts over --qs x --rs x --ds.
    Counterexamples,
}

/// Every flag mirrors a config-file key of the same name.
#[derive(Args)]
struct Flags {
    /// Flat key=value file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Base field: q, p^n, or p;n;c0,c1,..,1 for an explicit modulus.
    #[arg(long, global = true)]
    field: Option<String>,
    #[arg(long, global = true)]
    ext: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    poly: Option<String>,
    #[arg(long, global = true)]
    e: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    #[arg(long, global = true)]
    samples: Option<String>,
    #[arg(long, global = true)]
    budget: Option<String>,
    #[arg(long, global = true)]
    workers: Option<String>,
    #[arg(long, global = true)]
    out: Option<String>,
    /// json or csv.
    #[arg(long, global = true)]
    format: Option<String>,
    #[arg(long, global = true)]
    timings: bool,
    /// power, random or random:<seed>.
    #[arg(long, global = true)]
    basis: Option<String>,
    #[arg(long, global = true)]
    nvars: Option<String>,
    #[arg(long = "max-ext", global = true)]
    max_ext: Option<String>,
    #[arg(long, global = true)]
    fields: Option<String>,
    #[arg(long, global = true)]
    exts: Option<String>,
    #[arg(long, global = true)]
    degrees: Option<String>,
    #[arg(long, global = true)]
    es: Option<String>,
    /// Comma list of as-curve, as-hyper, kummer.
    #[arg(long, global = true)]
    modes: Option<String>,
    #[arg(long = "require-hypotheses", global = true)]
    require_hypotheses: bool,
    #[arg(long, global = true)]
    qs: Option<String>,
    #[arg(long, global = true)]
    rs: Option<String>,
    #[arg(long, global = true)]
    ds: Option<String>,
    #[arg(long, global = true)]
    kind: Option<String>,
}

impl Flags {
    fn layer(&self) -> BTreeMap<String, String> {
        let opts = [
            ("field", &self.field),
            ("ext", &self.ext),
            ("poly", &self.poly),
            ("e", &self.e),
            ("seed", &self.seed),
            ("samples", &self.samples),
            ("budget", &self.budget),
            ("workers", &self.workers),
            ("out", &self.out),
            ("format", &self.format),
            ("basis", &self.basis),
            ("nvars", &self.nvars),
            ("max-ext", &self.max_ext),
            ("fields", &self.fields),
            ("exts", &self.exts),
            ("degrees", &self.degrees),
            ("es", &self.es),
            ("modes", &self.modes),
            ("qs", &self.qs),
            ("rs", &self.rs),
            ("ds", &self.ds),
            ("kind", &self.kind),
        ];
        let mut m: BTreeMap<String, String> = opts
            .into_iter()
            .filter_map(|(k, v)| v.clone().map(|v| (k.to_string(), v)))
            .collect();
        for (k, set) in [("timings", self.timings), ("require-hypotheses", self.require_hypotheses)] {
            if set {
                m.insert(k.to_string(), "true".into());
            }
        }
        m
    }
}

fn load(flags: &Flags) -> anyhow::Result<ExperimentConfig> {
    let file = match &flags.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_pairs(&text)?
        }
        None => BTreeMap::new(),
    };
    Ok(ExperimentConfig::from_layers([&file, &flags.layer()])?)
}

fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Returns whether a violation was found.
fn dispatch(cmd: &Cmd, c: &ExperimentConfig) -> anyhow::Result<bool> {
    let pool = Parallel::new(c.workers)?;
    let opts = RunOptions::from(c);
    let single = |mode: Mode| -> anyhow::Result<bool> {
        let inst = instance_from_config(c, mode)?;
        let rep = run::run_single(&inst, mode, &opts, &pool)?;
        let text = match c.format {
            Format::Json => to_json(&rep),
            Format::Csv => to_csv([&rep]),
        };
        emit(c.out.as_deref(), &text)?;
        Ok(rep.violation())
    };
    match cmd {
        Cmd::CountAs => single(Mode::AsCurve),
        Cmd::CountAsHyper => single(Mode::AsHyper),
        Cmd::CountKummer => single(Mode::Kummer),
        Cmd::Descend => {
            let tower = parse::parse_tower(c.require_field()?, c.ext)?;
            let basis = make_basis(&tower, c.basis);
            let text = c.require_poly()?;
            let form = match c.kind {
                DescentChoice::S => descent::as_descent(&parse::parse_uni(&tower, text)?, &basis)?,
                DescentChoice::T => descent::kummer_descent(&parse::parse_uni(&tower, text)?, &basis)?,
                DescentChoice::SMultivar => {
                    let n = c.nvars.unwrap_or(parse::parse_terms(&tower, text)?.nvars().max(1));
                    descent::as_descent_multivar(&parse::parse_multi(&tower, text, n)?, &basis)?
                }
            };
            emit(c.out.as_deref(), &form.to_text())?;
            Ok(false)
        }
        Cmd::Certify => {
            let tower = parse::parse_tower(c.require_field()?, c.ext)?;
            let text = c.require_poly()?;
            let multi = parse::parse_terms(&tower, text)?;
            let n = c.nvars.unwrap_or(multi.nvars().max(1));
            let certs = if n > 1 {
                let f = parse::parse_multi(&tower, text, n)?;
                vec![
                    certify::is_deligne(&f, c.max_ext, c.budget)?,
                    certify::split_form_nonsingular_multivar(&f, &tower, c.max_ext, c.budget)?,
                ]
            } else {
                let f = parse::parse_uni(&tower, text)?;
                vec![
                    certify::check_degree_prime_to_p(&f)?,
                    certify::split_form_nonsingular(&f, &tower, c.budget)?,
                    certify::kummer_hypotheses(&f, c.e.unwrap_or(1), tower.q() as u64)?,
                ]
            };
            let reports: Vec<CertReport> = certs.iter().map(CertReport::from).collect();
            emit(c.out.as_deref(), &to_json(&reports))?;
            Ok(false)
        }
        Cmd::Sweep => {
            let rep = run::run_sweep(c, &pool)?;
            let csv = to_csv(&rep.instances);
            match &c.out {
                Some(path) => {
                    emit(Some(&path.with_extension("json")), &to_json(&rep))?;
                    emit(Some(&path.with_extension("csv")), &csv)?;
                }
                None => match c.format {
                    Format::Json => emit(None, &to_json(&rep))?,
                    Format::Csv => emit(None, &csv)?,
                },
            }
            for e in &rep.errors {
                eprintln!("error: {e}");
            }
            Ok(rep.violation())
        }
        Cmd::Counterexamples => {
            let rep = run::run_counterexamples(&c.qs, &c.rs, &c.ds, c.budget, &pool)?;
            emit(c.out.as_deref(), &to_json(&rep))?;
            Ok(rep.violation())
        }
    }
}

fn exit_code(err: anyhow::Error) -> u8 {
    let err = match err.downcast::<RunError>() {
        Ok(e) => return e.exit_code(),
        Err(err) => err,
    };
    let err = match err.downcast::<descent_core::Error>() {
        Ok(e) => return RunError::from(e).exit_code(),
        Err(err) => err,
    };
    match err.downcast::<parse::ParseError>() {
        Ok(e) => RunError::from(e).exit_code(),
        Err(_) => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = load(&cli.flags).and_then(|c| dispatch(&cli.cmd, &c));
    match outcome {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("violation detected");
            ExitCode::from(1)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(err))
        }
    }
}
