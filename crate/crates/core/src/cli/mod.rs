//! Command-line front end. The `kolmax` binary only forwards to [`run`].
//!
//! Exit codes: 0 success, 1 a verification or reproduction check failed,
//! 2 invalid input, 3 nonconvergence under `--strict`.

pub mod config;
pub mod report;
pub mod reproduce;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::bounds::{applicable_bounds, as_measure, bound_archimax, bound_different_margins, bound_tv, BoundReport, MarginTerms};
use crate::distances::{kolmogorov_exact, wasserstein1_sup, KolmogorovResult, SearchOptions};
use crate::error::{Error, Result};
use crate::models::husler_reiss::psi_hr;
use crate::montecarlo::{default_cdf_grid, ks_frechet, sample_model, verify_bounds, verify_cdf, SamplerConfig};
use crate::mvn::default_tol;
use crate::psi::psi_model;
use crate::spectral::{canonical_representer, parse_lp, reproject, tv_distance, NormSpec};

use config::{load, Loaded};
use report::{render_rows, Format, Row};

#[derive(Debug, Parser)]
#[command(name = "kolmax", version, about = "Kolmogorov distances and bounds for max-stable distributions")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Grid points per free axis of the section search.
    #[arg(long, global = true)]
    grid: Option<usize>,
    #[arg(long, global = true, default_value_t = 50.0)]
    umax: f64,
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 10_000)]
    samples: usize,
    /// table, csv or json-like
    #[arg(long, global = true, default_value = "table")]
    format: Format,
    /// Reject unknown config fields and fail on nonconvergence.
    #[arg(long, global = true)]
    strict: bool,
    /// Reference norms for the TV bound, e.g. `1,2,inf`.
    #[arg(long, global = true, value_delimiter = ',')]
    norms: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Operations on a single model.
    Model {
        #[command(subcommand)]
        action: ModelCommand,
    },
    /// Kolmogorov distance and representer distances for a pair.
    Distance {
        config: PathBuf,
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        wasserstein: bool,
        #[arg(long)]
        tv: bool,
    },
    /// Upper bounds for a pair, sorted by value.
    Bound {
        config: PathBuf,
        /// Every applicable bound (the default when no name is given).
        #[arg(long)]
        all: bool,
        #[arg(long = "name")]
        names: Vec<String>,
    },
    /// Exact distance, bounds and sampling checks.
    Verify { config: PathBuf },
    /// Recompute the worked examples.
    ReproduceExamples {
        /// Emit the logistic distance curve as CSV instead.
        #[arg(long)]
        curve: bool,
    },
}

#[derive(Debug, Subcommand)]
enum ModelCommand {
    /// `V(x)`, `F(x)` and `Psi(x)` at a point.
    Eval {
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        point: Vec<f64>,
    },
}

struct Outcome {
    text: String,
    nonconverged: bool,
    failed: bool,
}

struct Ctx {
    format: Format,
    strict: bool,
    search: SearchOptions,
    sampler: SamplerConfig,
    norms: Vec<NormSpec>,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Nonconvergence(_) => 3,
        _ => 2,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let norms = match cli.norms.iter().map(|s| parse_lp(s)).collect::<Result<Vec<_>>>() {
        Ok(n) => n,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let ctx = Ctx {
        format: cli.format,
        strict: cli.strict,
        search: SearchOptions { grid: cli.grid, u_max: cli.umax, seed: cli.seed, ..SearchOptions::default() },
        sampler: SamplerConfig { seed: cli.seed, n_samples: cli.samples, ..SamplerConfig::default() },
        norms,
    };
    if !(ctx.search.u_max > 1.0) || ctx.search.grid.is_some_and(|g| g < 2) {
        let _ = writeln!(err, "error: --umax must exceed 1 and --grid must be at least 2");
        return 2;
    }
    let result = match &cli.command {
        Command::Model { action: ModelCommand::Eval { config, point } } => {
            open(config, &ctx, err).and_then(|l| model_eval(&l, point, &ctx))
        }
        Command::Distance { config, exact, wasserstein, tv } => {
            open(config, &ctx, err).and_then(|l| distance(&l, *exact, *wasserstein, *tv, &ctx))
        }
        Command::Bound { config, all, names } => {
            open(config, &ctx, err).and_then(|l| bound(&l, *all || names.is_empty(), names, &ctx))
        }
        Command::Verify { config } => open(config, &ctx, err).and_then(|l| verify(&l, &ctx)),
        Command::ReproduceExamples { curve } => reproduce_examples(*curve, &ctx),
    };
    match result {
        Ok(o) => {
            let _ = out.write_all(o.text.as_bytes());
            if o.nonconverged && ctx.strict {
                let _ = writeln!(err, "error: numeric result did not converge");
                3
            } else if o.nonconverged {
                let _ = writeln!(err, "warning: numeric result did not converge");
                0
            } else if o.failed {
                1
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Entry point for the binary.
pub fn main_from_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn open(path: &PathBuf, ctx: &Ctx, err: &mut dyn Write) -> Result<Loaded> {
    let l = load(path)?;
    if !l.unknown.is_empty() {
        let list = l.unknown.join(", ");
        if ctx.strict {
            return Err(Error::InvalidInput(format!("unknown fields: {list}")));
        }
        let _ = writeln!(err, "warning: ignoring unknown fields: {list}");
    }
    Ok(l)
}

fn done(rows: &[Row], ctx: &Ctx, nonconverged: bool, failed: bool) -> Result<Outcome> {
    Ok(Outcome { text: render_rows(rows, ctx.format), nonconverged, failed })
}

fn model_eval(l: &Loaded, point: &[f64], ctx: &Ctx) -> Result<Outcome> {
    let m = l.single()?;
    let method = m.family().tag();
    let finite = point.iter().all(|x| x.is_finite());
    let (v, err, psi) = match m.lambda() {
        // one pass of the Gaussian integrals gives both V and Psi
        Some(lambda) if finite && point.len() == m.dim() && point.iter().all(|x| *x > 0.0) => {
            let (mut v, mut err, mut psi) = (0.0, 0.0, Vec::with_capacity(m.dim()));
            for (i, x) in point.iter().enumerate() {
                let (p, e) = psi_hr(lambda, point, i, m.mvn_options());
                v += p / x;
                err += e / x;
                psi.push(p);
            }
            (v, err, Some(psi))
        }
        _ => {
            let (v, err) = m.exponent_detail(point)?;
            let psi = if finite { Some(psi_model(&m, point)?.values) } else { None };
            (v, err, psi)
        }
    };
    let mut rows = vec![Row::new(&l.id, "V", v, method), Row::new(&l.id, "F", (-v).exp(), method)];
    rows[0].constants.insert("integration_error".into(), err);
    for (i, p) in psi.iter().flatten().enumerate() {
        rows.push(Row::new(&l.id, format!("psi_{i}"), *p, method));
    }
    let tol = m.mvn_options().tol.unwrap_or_else(|| default_tol(m.dim()));
    done(&rows, ctx, err > tol, false)
}

fn dk_row(id: &str, r: &KolmogorovResult) -> Row {
    let mut row = Row::new(id, "d_K", r.value, "section_search");
    row.certified_lower = Some(r.certified_lower);
    row.constants.insert("witness_r".into(), r.witness_r);
    for (i, u) in r.witness_u.iter().enumerate() {
        row.constants.insert(format!("witness_u{i}"), *u);
    }
    row.constants.insert("evaluations".into(), r.diagnostics.evaluations as f64);
    row.constants.insert("grid_per_axis".into(), r.diagnostics.grid_per_axis as f64);
    row.constants.insert("heuristic".into(), f64::from(u8::from(r.diagnostics.heuristic)));
    row
}

fn distance(l: &Loaded, exact: bool, wasserstein: bool, tv: bool, ctx: &Ctx) -> Result<Outcome> {
    let pair = l.pair()?;
    let exact = exact || !(wasserstein || tv);
    let mut rows = Vec::new();
    let mut nonconverged = false;
    if exact {
        let r = kolmogorov_exact(&pair.m1, &pair.m2, &ctx.search)?;
        nonconverged |= !r.diagnostics.converged;
        rows.push(dk_row(&l.id, &r));
    }
    if wasserstein || tv {
        let (Some(h1), Some(h2)) = (as_measure(&pair.m1), as_measure(&pair.m2)) else {
            return Err(Error::Unsupported("representer distances need finite angular measures".into()));
        };
        if wasserstein {
            let (w, plan) =
                wasserstein1_sup(&canonical_representer(&h1)?, &canonical_representer(&h2)?, true)?;
            let mut row = Row::new(&l.id, "w1_sup", w, "transport_simplex");
            row.constants.insert("pivots".into(), plan.iterations as f64);
            rows.push(row);
        }
        if tv {
            let norms = if ctx.norms.is_empty() { vec![h1.norm().clone()] } else { ctx.norms.clone() };
            for n in &norms {
                let v = tv_distance(&reproject(&h1, n)?, &reproject(&h2, n)?)?;
                rows.push(Row::new(&l.id, format!("tv[{}]", n.label()), v, "atom_matching"));
            }
        }
    }
    done(&rows, ctx, nonconverged, false)
}

fn all_bounds(l: &Loaded, ctx: &Ctx, dk: &KolmogorovResult) -> Result<Vec<BoundReport>> {
    let pair = l.pair()?;
    let mut out = applicable_bounds(&pair.m1, &pair.m2, &ctx.norms, &ctx.search)?;
    if !pair.representers.is_empty() {
        if let (Some(h1), Some(h2)) = (as_measure(&pair.m1), as_measure(&pair.m2)) {
            let w = crate::bounds::bound_wasserstein_measures(&h1, &h2, &pair.representers)?;
            out.retain(|b| b.name != "wasserstein");
            out.push(w);
        }
    }
    if let Some((a, b)) = &pair.margins {
        out.push(bound_different_margins(dk.value, a, b, MarginTerms::Analytic)?);
        let mut exact = bound_different_margins(dk.value, a, b, MarginTerms::Exact)?;
        exact.name = "different_margins_exact".into();
        out.push(exact);
    }
    if let Some(g) = &pair.generator {
        out.push(bound_archimax(g, dk.value)?);
    }
    if !ctx.norms.is_empty() {
        if let (Some(h1), Some(h2)) = (as_measure(&pair.m1), as_measure(&pair.m2)) {
            if h1.alpha() == h2.alpha() {
                out.retain(|b| b.name != "tv");
                out.push(bound_tv(&h1, &h2, &ctx.norms)?);
            }
        }
    }
    out.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(out)
}

fn bound_row(id: &str, b: &BoundReport) -> Row {
    let mut row = Row::new(id, format!("bound:{}", b.name), b.value, b.notes.join("; "));
    row.constants = b.constants.clone();
    if let Some(s) = b.slack {
        row.constants.insert("slack".into(), s);
    }
    row
}

fn bound(l: &Loaded, all: bool, names: &[String], ctx: &Ctx) -> Result<Outcome> {
    let pair = l.pair()?;
    let dk = kolmogorov_exact(&pair.m1, &pair.m2, &ctx.search)?;
    let mut rows = vec![dk_row(&l.id, &dk)];
    let bounds = all_bounds(l, ctx, &dk)?;
    for name in names {
        if !bounds.iter().any(|b| &b.name == name) {
            return Err(Error::Unsupported(format!("bound `{name}` does not apply to this pair")));
        }
    }
    for b in bounds.into_iter().filter(|b| all || names.contains(&b.name)) {
        rows.push(bound_row(&l.id, &b.against(dk.certified_lower)));
    }
    done(&rows, ctx, !dk.diagnostics.converged, false)
}

fn verify(l: &Loaded, ctx: &Ctx) -> Result<Outcome> {
    let pair = l.pair()?;
    let r = verify_bounds(&pair.m1, &pair.m2, &ctx.norms, &ctx.search, Some(&ctx.sampler))?;
    let mut failed = r.violations > 0 || r.mc_consistent == Some(false);
    let mut rows = vec![dk_row(&l.id, &r.exact)];
    for b in &r.bounds {
        rows.push(bound_row(&l.id, b));
    }
    if let Some(mc) = &r.monte_carlo {
        let mut row = Row::new(&l.id, "d_K_empirical", mc.value, "two_sample_ecdf");
        row.constants.insert("band".into(), mc.band);
        row.seed = Some(ctx.sampler.seed);
        rows.push(row);
    }
    for (k, m) in [&pair.m1, &pair.m2].into_iter().enumerate() {
        let cfg = SamplerConfig { seed: ctx.sampler.seed.wrapping_add(k as u64), ..ctx.sampler };
        let Ok(s) = sample_model(m, &cfg) else { continue };
        for j in 0..m.dim() {
            let ks = ks_frechet(&s.column(j), m.alpha(), 0.01)?;
            failed |= !ks.pass;
            let mut row = Row::new(&l.id, format!("ks_p_value[model{}.x{j}]", k + 1), ks.p_value, "ks_frechet");
            row.constants.insert("statistic".into(), ks.statistic);
            row.seed = Some(cfg.seed);
            rows.push(row);
        }
        let c = verify_cdf(m, &s, &default_cdf_grid(m.dim()))?;
        failed |= !c.pass;
        let mut row = Row::new(&l.id, format!("cdf_discrepancy[model{}]", k + 1), c.discrepancy, "dkw");
        row.constants.insert("dkw_threshold".into(), c.dkw_threshold);
        row.constants.insert("allowance".into(), c.allowance);
        row.seed = Some(cfg.seed);
        rows.push(row);
    }
    done(&rows, ctx, !r.exact.diagnostics.converged, failed)
}

fn reproduce_examples(curve: bool, ctx: &Ctx) -> Result<Outcome> {
    if curve {
        let pts = reproduce::logistic_curve(2, 20, &ctx.search)?;
        return Ok(Outcome { text: reproduce::render_curve(&pts), nonconverged: false, failed: false });
    }
    let rows = reproduce::reproduce(&ctx.search)?;
    let failed = rows.iter().any(|r| !r.pass);
    Ok(Outcome { text: reproduce::render(&rows, ctx.format), nonconverged: false, failed })
}
