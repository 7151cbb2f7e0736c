//! Command-line front end.
//!
//! Exit status: `0` success, `1` usage or input error, `2` an infinite
//! condition constant or a failed verification.

mod config;
mod space;

pub use config::{parse_list, RunConfig};
pub use space::{build_space, tree_parents};

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::conditions::{
    b1_norm, blocked_constant, bp_chain_constant, bp_ratio_profile, default_r_grid,
    gencon_constant, grid_constant, p_eps_search, power_weight_bp_constant,
    product_rectangle_constant, ConditionReport, GridMode, QuadratureParams, WeightSpec,
};
use crate::error::{Error, Result};
use crate::pomspace::{build_chain, dump_space, validate_axioms, BlockedVariant, PomSpace, Shape};
use crate::verify::{
    check_theorem_2_2, check_theorem_3_2, check_theorem_3_4, lemma_sweep, tree_geodesic_constants,
    EquivalenceReport, Evidence, GeodesicReport,
};

const SCHEMA_VERSION: u32 = 1;
const LEMMA_MAX_LEN: usize = 50;
const PEPS_TOLERANCE: f64 = 1e-3;

#[derive(Parser, Debug)]
#[command(
    name = "hardy-cone",
    version,
    about = "Weighted Hardy inequalities on partially ordered measure spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Condition constants for the space and weight, one report per exponent.
    Check(Flags),
    /// Run an oracle suite: lemma, t22, t32, t34, b1, peps.
    Verify(Flags),
    /// Emit a CSV table.
    ///
    /// Kinds and columns:
    ///   ratio-vs-r     r,ratio             (first --p)
    ///   constant-vs-p  p,constant,closed_form
    ///   eps-vs-beta    beta,eps_empirical,eps_proof,reference   (pow:<beta>, first --p)
    #[command(verbatim_doc_comment)]
    Table(Flags),
    /// Print the space in the canonical text format.
    DumpSpace(Flags),
    /// Check the axioms of the space.
    Validate(Flags),
}

#[derive(Clone, Debug)]
struct FloatList(Vec<f64>);

fn float_list(s: &str) -> std::result::Result<FloatList, String> {
    parse_list(s).map(FloatList)
}

#[derive(clap::Args, Debug)]
struct Flags {
    /// Flat TOML file with the same keys; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// chain:N, grid:NxM, tree:binary:D, tree:path:N, tree:random:N, blocked:BxC, file:PATH
    #[arg(long)]
    space: Option<String>,
    /// const:C, pow:BETA, table:PATH, prod:(SPEC,SPEC)
    #[arg(long, allow_hyphen_values = true)]
    weight: Option<String>,
    /// Comma-separated exponents.
    #[arg(long, value_parser = float_list, allow_hyphen_values = true)]
    p: Option<FloatList>,
    #[arg(long)]
    ideal_cap: Option<usize>,
    /// Candidate functions per norm estimate.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    cells: Option<usize>,
    #[arg(long)]
    truncate: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    suite: Option<String>,
    /// vertical | full
    #[arg(long)]
    mode: Option<String>,
    /// prec1 | prec2 | prec3
    #[arg(long)]
    variant: Option<String>,
    /// ratio-vs-r | constant-vs-p | eps-vs-beta
    #[arg(long)]
    kind: Option<String>,
    /// Comma-separated power-weight exponents for eps-vs-beta.
    #[arg(long, value_parser = float_list, allow_hyphen_values = true)]
    beta: Option<FloatList>,
    /// Comma-separated exponents for the lemma suite.
    #[arg(long, value_parser = float_list, allow_hyphen_values = true)]
    alphas: Option<FloatList>,
    /// Random chains per exponent for the lemma suite.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    workers: Option<usize>,
}

impl Flags {
    fn resolve(self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field {
                    c.$field = v;
                }
            )*};
        }
        set!(space, weight, ideal_cap, samples, cells, truncate, seed, mode, variant, trials);
        if let Some(FloatList(v)) = self.p {
            c.p = v;
        }
        if let Some(FloatList(v)) = self.beta {
            c.beta = v;
        }
        if let Some(FloatList(v)) = self.alphas {
            c.alphas = v;
        }
        c.suite = self.suite.or(c.suite);
        c.kind = self.kind.or(c.kind);
        c.out = self.out.or(c.out);
        c.workers = self.workers.or(c.workers);
        Ok(c)
    }
}

/// Report body and exit status of one command.
struct Outcome {
    body: String,
    status: i32,
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    config: RunConfig,
    passed: bool,
    result: T,
}

fn document<T: Serialize>(command: &str, cfg: &RunConfig, passed: bool, result: T) -> String {
    // the worker count must not change the bytes of a report
    let config = RunConfig {
        workers: None,
        ..cfg.clone()
    };
    let doc = Document {
        schema_version: SCHEMA_VERSION,
        command,
        config,
        passed,
        result,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

fn status(passed: bool) -> i32 {
    if passed {
        0
    } else {
        2
    }
}

struct Inputs {
    weight: WeightSpec,
    variant: BlockedVariant,
    params: QuadratureParams,
}

fn inputs(cfg: &RunConfig) -> Result<Inputs> {
    Ok(Inputs {
        weight: cfg.weight.parse()?,
        variant: BlockedVariant::parse(&cfg.variant)?,
        params: QuadratureParams {
            truncate: cfg.truncate,
            cells: cfg.cells,
        },
    })
}

fn space_of(cfg: &RunConfig, inp: &Inputs) -> Result<PomSpace> {
    build_space(&cfg.space, &inp.weight, inp.variant, cfg.seed)
}

/// The two factors of a grid weight; a one-dimensional weight acts on both
/// axes.
fn product_factors(weight: &WeightSpec) -> Result<(WeightSpec, WeightSpec)> {
    match weight.factors() {
        Some([a, b]) => Ok((a.clone(), b.clone())),
        Some(_) => Err(Error::Usage(
            "product weight needs exactly two factors".into(),
        )),
        None => Ok((weight.clone(), weight.clone())),
    }
}

#[derive(Serialize)]
struct CheckEntry {
    p: f64,
    discrete: ConditionReport,
    continuous: Option<ConditionReport>,
    geodesics: Option<GeodesicReport>,
}

const BLOCK_LEVELS: [f64; 9] = [0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0];

fn cmd_check(cfg: &RunConfig) -> Result<Outcome> {
    let inp = inputs(cfg)?;
    let mode = GridMode::parse(&cfg.mode)?;
    let space = space_of(cfg, &inp)?;
    let mut entries = Vec::with_capacity(cfg.p.len());
    for &p in &cfg.p {
        let mut entry = CheckEntry {
            p,
            discrete: gencon_constant(&space, p, cfg.ideal_cap)?,
            continuous: None,
            geodesics: None,
        };
        match space.shape() {
            Shape::Chain => {
                entry.continuous = Some(bp_chain_constant(&inp.weight, p, None, &inp.params)?);
            }
            Shape::Grid { .. } => {
                entry.discrete = grid_constant(&space, p, mode, cfg.ideal_cap)?;
                let (u1, u2) = product_factors(&inp.weight)?;
                entry.continuous =
                    Some(product_rectangle_constant(&u1, &u2, p, None, &inp.params)?);
            }
            Shape::Blocked {
                n_blocks, variant, ..
            } => {
                let cells = (cfg.cells / n_blocks).clamp(16, 2000);
                entry.continuous = Some(blocked_constant(
                    &inp.weight,
                    p,
                    *variant,
                    *n_blocks,
                    &BLOCK_LEVELS,
                    cells,
                )?);
            }
            Shape::Tree => {
                entry.geodesics = Some(tree_geodesic_constants(&space, p, cfg.ideal_cap)?);
            }
            Shape::Custom => {}
        }
        entries.push(entry);
    }
    let finite = entries.iter().all(|e| {
        e.discrete.is_finite() && e.continuous.as_ref().is_none_or(ConditionReport::is_finite)
    });
    Ok(Outcome {
        body: document("check", cfg, finite, &entries),
        status: status(finite),
    })
}

fn b1_suite(cfg: &RunConfig, inp: &Inputs) -> Result<EquivalenceReport> {
    let space = space_of(cfg, inp)?;
    let (nx, ny, _) = space.require_grid()?;
    let (u1, u2) = product_factors(&inp.weight)?;
    let grid = b1_norm(&space, cfg.ideal_cap);
    let c1 = b1_norm(&build_chain(nx, &u1)?, cfg.ideal_cap);
    let c2 = b1_norm(&build_chain(ny, &u2)?, cfg.ideal_cap);
    let product = c1.constant * c2.constant;
    let mut rep = EquivalenceReport::new(format!("b1 {nx}x{ny}"));
    rep.push(
        "product_le_grid",
        crate::util::le_rel(product, grid.constant, 1e-12),
        product,
        grid.constant,
        match &grid.witness {
            crate::conditions::Witness::Ideal { members } => Evidence::Ideal {
                members: members.clone(),
            },
            _ => Evidence::None,
        },
    );
    rep.push(
        "relative_gap",
        true,
        grid.constant / product - 1.0,
        0.0,
        Evidence::Parameters {
            values: vec![grid.constant, c1.constant, c2.constant],
        },
    );
    Ok(rep)
}

fn cmd_verify(cfg: &RunConfig) -> Result<Outcome> {
    let suite = cfg
        .suite
        .as_deref()
        .ok_or_else(|| Error::Usage("verify needs --suite".into()))?;
    let inp = inputs(cfg)?;
    let mut reports = Vec::new();
    match suite {
        "lemma" => reports.push(lemma_sweep(
            &cfg.alphas,
            cfg.trials,
            LEMMA_MAX_LEN,
            cfg.seed,
        )),
        "t22" => {
            let space = space_of(cfg, &inp)?;
            for &p in &cfg.p {
                reports.push(check_theorem_2_2(&space, p, cfg.samples, cfg.seed)?);
            }
        }
        "t32" => {
            let space = space_of(cfg, &inp)?;
            for &p in &cfg.p {
                reports.push(check_theorem_3_2(&space, p, cfg.samples, cfg.seed)?);
            }
        }
        "t34" => {
            let (u1, u2) = product_factors(&inp.weight)?;
            let n = match space_of(cfg, &inp)?.grid_dims() {
                Some((nx, _, _)) => nx,
                None => 3,
            };
            for &p in &cfg.p {
                reports.push(check_theorem_3_4(&u1, &u2, p, n, &inp.params, cfg.samples)?);
            }
        }
        "b1" => reports.push(b1_suite(cfg, &inp)?),
        "peps" => {
            let mut rep = EquivalenceReport::new("p_eps");
            for &p in &cfg.p {
                let r = p_eps_search(&inp.weight, p, &inp.params, PEPS_TOLERANCE)?;
                rep.push(
                    format!("p={p} eps_proof_within_empirical"),
                    r.eps_proof > 0.0 && r.eps_proof <= r.eps_empirical,
                    r.eps_proof,
                    r.eps_empirical,
                    Evidence::Parameters {
                        values: vec![r.condition_constant, r.iteration_constant, r.sigma],
                    },
                );
            }
            reports.push(rep);
        }
        other => {
            return Err(Error::Usage(format!(
                "unknown suite `{other}` (lemma, t22, t32, t34, b1, peps)"
            )))
        }
    }
    let passed = reports.iter().all(EquivalenceReport::all_passed);
    Ok(Outcome {
        body: document("verify", cfg, passed, &reports),
        status: status(passed),
    })
}

fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        "inf".into()
    }
}

fn cmd_table(cfg: &RunConfig) -> Result<Outcome> {
    let kind = cfg
        .kind
        .as_deref()
        .ok_or_else(|| Error::Usage("table needs --kind".into()))?;
    let inp = inputs(cfg)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut row = |fields: &[String]| w.write_record(fields).expect("in-memory csv");
    match kind {
        "ratio-vs-r" => {
            row(&["r".into(), "ratio".into()]);
            if let Some(&p) = cfg.p.first() {
                let grid = default_r_grid(&inp.params);
                match bp_ratio_profile(&inp.weight, p, &grid, &inp.params)? {
                    Ok(profile) => profile.iter().for_each(|&(r, v)| row(&[num(r), num(v)])),
                    Err(_) => grid
                        .iter()
                        .for_each(|&r| row(&[num(r), num(f64::INFINITY)])),
                }
            }
        }
        "constant-vs-p" => {
            row(&["p".into(), "constant".into(), "closed_form".into()]);
            let beta = match inp.weight {
                WeightSpec::Power(b) => Some(b),
                WeightSpec::Constant(c) if c > 0.0 => Some(0.0),
                _ => None,
            };
            for &p in &cfg.p {
                let c = bp_chain_constant(&inp.weight, p, None, &inp.params)?;
                let closed = beta.map_or(String::new(), |b| num(power_weight_bp_constant(b, p)));
                row(&[num(p), num(c.constant), closed]);
            }
        }
        "eps-vs-beta" => {
            row(&[
                "beta".into(),
                "eps_empirical".into(),
                "eps_proof".into(),
                "reference".into(),
            ]);
            if let Some(&p) = cfg.p.first() {
                for &b in &cfg.beta {
                    let reference = p - 1.0 - b;
                    let reference = if reference > 0.0 {
                        num(reference)
                    } else {
                        String::new()
                    };
                    match p_eps_search(&WeightSpec::Power(b), p, &inp.params, PEPS_TOLERANCE) {
                        Ok(r) => row(&[num(b), num(r.eps_empirical), num(r.eps_proof), reference]),
                        Err(Error::InfiniteConstant(_)) => {
                            row(&[num(b), String::new(), String::new(), reference])
                        }
                        Err(e) => return Err(e),
                    }
                }
            }
        }
        other => {
            return Err(Error::Usage(format!(
                "unknown table kind `{other}` (ratio-vs-r, constant-vs-p, eps-vs-beta)"
            )))
        }
    }
    let body = String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8");
    Ok(Outcome { body, status: 0 })
}

fn cmd_dump(cfg: &RunConfig) -> Result<Outcome> {
    let inp = inputs(cfg)?;
    Ok(Outcome {
        body: dump_space(&space_of(cfg, &inp)?),
        status: 0,
    })
}

fn cmd_validate(cfg: &RunConfig) -> Result<Outcome> {
    let inp = inputs(cfg)?;
    let report = validate_axioms(&space_of(cfg, &inp)?);
    let passed = report.all_passed();
    Ok(Outcome {
        body: document("validate", cfg, passed, &report),
        status: status(passed),
    })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InfiniteConstant(_) => 2,
        _ => 1,
    }
}

type Handler = fn(&RunConfig) -> Result<Outcome>;

/// Run with explicit output streams; returns the exit status.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    1
                }
            };
        }
    };
    let (name, flags, handler): (&str, Flags, Handler) = match cli.command {
        Command::Check(f) => ("check", f, cmd_check),
        Command::Verify(f) => ("verify", f, cmd_verify),
        Command::Table(f) => ("table", f, cmd_table),
        Command::DumpSpace(f) => ("dump-space", f, cmd_dump),
        Command::Validate(f) => ("validate", f, cmd_validate),
    };
    let result = flags.resolve().and_then(|cfg| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers.unwrap_or(0))
            .build()
            .map_err(|e| Error::Usage(format!("worker pool: {e}")))?;
        let outcome = pool.install(|| handler(&cfg))?;
        match &cfg.out {
            Some(path) => std::fs::write(path, &outcome.body).map_err(|e| Error::io(path, e))?,
            None => {
                let _ = stdout.write_all(outcome.body.as_bytes());
            }
        }
        Ok(outcome.status)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "hardy-cone {name}: {e}");
            exit_code(&e)
        }
    }
}

/// Run against the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}
