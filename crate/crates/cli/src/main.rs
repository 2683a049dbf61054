//! `dgsp` command line.
//!
//! Every subcommand prints one JSON document on stdout; logs go to stderr.
//! Exit codes: 0 success, 1 usage or input error, 2 numerical failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dgsp::filters::{awgn, energy_shift, relative_error, wiener_apply, wiener_design};
use dgsp::gft::{angle_histogram, angle_histogram_csv, basis_csv, build_fourier, spectrum_csv};
use dgsp::graph::{parse_edge_list, parse_matrix_market, write_edge_list, write_matrix_market};
use dgsp::jordan::{JordanError, PipelineReport};
use dgsp::numla::{eig_general, numerical_rank, singular_values, subspace_angles};
use dgsp::oracle::{self, adjacency_rational, laplacian_rational, rational, RationalMatrix};
use dgsp::randgraphs::{generate, Model, ModelParams};
use dgsp::{DegreeConvention, Digraph, Matrix64, ShiftMode, Tolerances};
use num_complex::Complex64;
use serde_json::{json, Value};

/// Seed used when `--seed` is not given.
const DEFAULT_SEED: u64 = 0;

#[derive(Parser)]
#[command(name = "dgsp", version, about = "Make directed graphs diagonalizable by adding edges")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Adjacency,
    LaplacianIn,
    LaplacianOut,
}

impl From<ModeArg> for ShiftMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Adjacency => ShiftMode::Adjacency,
            ModeArg::LaplacianIn => ShiftMode::Laplacian(DegreeConvention::InDegree),
            ModeArg::LaplacianOut => ShiftMode::Laplacian(DegreeConvention::OutDegree),
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum FormatArg {
    Edges,
    Mtx,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum PreArg {
    DestroyZeros,
    None,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Er,
    Ws,
    Ba,
    Ke,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleQuery {
    Charpoly,
    Coates,
    Minpoly,
    Diagonalizable,
    Jordan,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, value_enum, default_value = "adjacency")]
    mode: ModeArg,
    #[arg(long, default_value_t = 1e-6)]
    eps_r: f64,
    #[arg(long, default_value_t = 1.0)]
    eps_d: f64,
    #[arg(long, default_value_t = 1e-3)]
    eps_z: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Defaults to n².
    #[arg(long)]
    max_iter: Option<usize>,
    /// Format of written graph files.
    #[arg(long, value_enum, default_value = "edges")]
    format: FormatArg,
}

impl Common {
    fn tol(&self) -> anyhow::Result<Tolerances> {
        Ok(Tolerances::new(self.eps_r, self.eps_d, self.eps_z)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a weakly connected random digraph.
    Gen {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.02)]
        p: f64,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long, default_value_t = 0.001)]
        beta: f64,
        #[arg(long, default_value_t = 10)]
        seed_size: usize,
        #[arg(long, default_value_t = 10)]
        avg_deg: usize,
        #[arg(long, default_value_t = 0.1)]
        mu: f64,
        #[arg(long, default_value_t = 100)]
        max_retries: usize,
        #[command(flatten)]
        common: Common,
        out: PathBuf,
    },
    /// Remove (near-)zero adjacency eigenvalues.
    DestroyZeros {
        #[command(flatten)]
        common: Common,
        input: PathBuf,
        out: PathBuf,
    },
    /// Add edges until the shift is diagonalizable.
    Diagonalize {
        #[command(flatten)]
        common: Common,
        /// Zero-eigenvalue pre-phase; only used in adjacency mode.
        #[arg(long, value_enum, default_value = "destroy-zeros")]
        pre: PreArg,
        input: PathBuf,
        out: PathBuf,
    },
    /// Eigenvector conditioning of a graph's shift.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Bin width of the angle histogram in degrees.
        #[arg(long, default_value_t = 1.0)]
        bin_width: f64,
        input: PathBuf,
        /// Directory for angles.csv.
        out: Option<PathBuf>,
    },
    /// Fourier basis, spectrum of a signal, basis dump.
    Gft {
        #[command(flatten)]
        common: Common,
        /// One value per line; all ones if omitted.
        #[arg(long)]
        signal: Option<PathBuf>,
        input: PathBuf,
        out: PathBuf,
    },
    /// Wiener denoising error against filter order.
    Wiener {
        #[command(flatten)]
        common: Common,
        /// Clean signal, one value per line; defaults to the real part of
        /// the three smoothest basis vectors.
        #[arg(long)]
        signal: Option<PathBuf>,
        #[arg(long, default_value_t = 10.0)]
        sigma: f64,
        #[arg(long, default_value_t = 1)]
        min_order: usize,
        #[arg(long, default_value_t = 10)]
        max_order: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        input: PathBuf,
        out: PathBuf,
    },
    /// Exact rational checks for small graphs.
    Oracle {
        #[arg(value_enum)]
        query: OracleQuery,
        input: PathBuf,
        #[arg(long, value_enum, default_value = "adjacency")]
        mode: ModeArg,
        /// Integer eigenvalue for `jordan`.
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        lambda: i64,
    },
}

/// Failure carrying an exit code and an optional partial result.
struct Failure {
    code: u8,
    error: anyhow::Error,
    partial: Option<Value>,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let error = e.into();
        let code = if is_numerical(&error) { 2 } else { 1 };
        Failure { code, error, partial: None }
    }
}

fn is_numerical(e: &anyhow::Error) -> bool {
    e.downcast_ref::<dgsp::numla::NumlaError>().is_some()
        || e.downcast_ref::<dgsp::gft::GftError>().is_some()
        || e.downcast_ref::<dgsp::filters::FilterError>().is_some()
        || matches!(e.downcast_ref::<JordanError>(), Some(j) if !matches!(j, JordanError::Graph(_)))
}

type CmdResult = Result<Value, Failure>;

fn read_graph(path: &Path) -> anyhow::Result<Digraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let g = if path.extension().is_some_and(|e| e == "mtx") {
        parse_matrix_market(&text)
    } else {
        parse_edge_list(&text)
    };
    g.with_context(|| format!("parsing {}", path.display()))
}

fn write_graph(dir: &Path, g: &Digraph, format: FormatArg) -> anyhow::Result<PathBuf> {
    let (name, text) = match format {
        FormatArg::Edges => ("graph.edges", write_edge_list(g)),
        FormatArg::Mtx => ("graph.mtx", write_matrix_market(g)),
    };
    write_file(dir, name, &text)
}

fn write_file(dir: &Path, name: &str, text: &str) -> anyhow::Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let p = dir.join(name);
    fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?;
    Ok(p)
}

fn read_signal(path: &Path, n: usize) -> anyhow::Result<Vec<f64>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let s = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.parse::<f64>().with_context(|| format!("bad signal value {l:?}")))
        .collect::<anyhow::Result<Vec<f64>>>()?;
    if s.len() != n {
        bail!("signal has {} values, graph has {n} vertices", s.len());
    }
    Ok(s)
}

fn shift(g: &Digraph, mode: ModeArg) -> anyhow::Result<Matrix64> {
    Ok(ShiftMode::from(mode).matrix(g)?)
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn cmd_gen(model: Model, n: usize, max_retries: usize, common: &Common, out: &Path) -> CmdResult {
    let params = ModelParams { model, n, seed: common.seed, max_retries };
    let g = generate(&params)?;
    let graph = write_graph(out, &g, common.format)?;
    let sidecar = write_file(out, "params.json", &pretty(&serde_json::to_value(params)?))?;
    Ok(json!({
        "params": params,
        "n": g.n(),
        "edges": g.edge_count(),
        "files": [path_str(&graph), path_str(&sidecar)],
    }))
}

/// report.json holds the canonical report; wall times only go to stdout.
fn finish_repair(g: &Digraph, h: &Digraph, report: Value, runtime_ms: Value, common: &Common, out: &Path) -> CmdResult {
    let graph = write_graph(out, h, common.format)?;
    let rep = write_file(out, "report.json", &pretty(&report))?;
    Ok(json!({
        "n": g.n(),
        "edges_before": g.edge_count(),
        "edges_after": h.edge_count(),
        "report": report,
        "timing": { "runtime_ms": runtime_ms },
        "files": [path_str(&graph), path_str(&rep)],
    }))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Writes the partial graph and report of a run that hit `max_iter`.
fn partial_failure(e: JordanError, common: &Common, out: &Path) -> Failure {
    if let JordanError::MaxIterExceeded { graph, report } = &e {
        let report = report.canonical_json();
        let written = write_graph(out, graph, common.format).and_then(|_| write_file(out, "report.json", &pretty(&report)));
        if let Err(w) = written {
            log::error!("could not write partial result: {w:#}");
        }
        return Failure { code: 2, error: e.into(), partial: Some(json!({ "partial_report": report })) };
    }
    Failure::from(e)
}

fn cmd_destroy_zeros(common: &Common, input: &Path, out: &Path) -> CmdResult {
    if !matches!(common.mode, ModeArg::Adjacency) {
        return Err(anyhow::anyhow!("destroy-zeros works on the adjacency shift only").into());
    }
    let g = read_graph(input)?;
    let (h, r) = dgsp::destroy_zero_eigenvalues::<f64>(&g, &common.tol()?, common.max_iter, common.seed)
        .map_err(|e| partial_failure(e, common, out))?;
    finish_repair(&g, &h, r.canonical_json(), json!(r.runtime_ms), common, out)
}

fn cmd_diagonalize(common: &Common, pre: PreArg, input: &Path, out: &Path) -> CmdResult {
    let g = read_graph(input)?;
    let (h, r): (Digraph, PipelineReport) = dgsp::diagonalize::<f64>(
        &g,
        common.mode.into(),
        &common.tol()?,
        common.max_iter,
        common.seed,
        pre == PreArg::DestroyZeros,
    )
    .map_err(|e| partial_failure(e, common, out))?;
    let timing = json!({
        "destroy_zeros": r.zeros.as_ref().map(|z| z.runtime_ms),
        "destroy_blocks": r.blocks.runtime_ms,
    });
    finish_repair(&g, &h, r.canonical_json(), timing, common, out)
}

fn min_offdiag(d: &Matrix64) -> f64 {
    let n = d.nrows();
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| d[(i, j)]).fold(90.0, f64::min)
}

fn cmd_analyze(common: &Common, bin_width: f64, input: &Path, out: Option<&Path>) -> CmdResult {
    if !(bin_width > 0.0 && bin_width <= 90.0) {
        return Err(anyhow::anyhow!("bin width must lie in (0, 90]").into());
    }
    let g = read_graph(input)?;
    let tol = common.tol()?;
    let m = shift(&g, common.mode)?;
    let ep = eig_general(&m)?;
    let s = singular_values(&ep.vectors);
    let (smax, smin) = (s.first().copied().unwrap_or(0.0), s.last().copied().unwrap_or(0.0));
    let angles = subspace_angles(&ep.vectors)?;
    let rank = numerical_rank(&ep.vectors, tol.eps_r);
    let smallest = ep.values.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    let mut v = json!({
        "n": g.n(),
        "edges": g.edge_count(),
        "sigma_min": smin,
        "sigma_max": smax,
        "kappa": smax / smin,
        "min_angle_deg": min_offdiag(&angles),
        "numerical_rank": rank,
        "full_rank": rank == g.n(),
        "min_abs_eigenvalue": smallest,
    });
    if let Some(dir) = out {
        let p = write_file(dir, "angles.csv", &angle_histogram_csv(&angle_histogram(&angles, bin_width)))?;
        v["files"] = json!([path_str(&p)]);
    }
    Ok(v)
}

fn lift(s: &[f64]) -> Vec<Complex64> {
    s.iter().map(|x| Complex64::new(*x, 0.0)).collect()
}

fn cmd_gft(common: &Common, signal: Option<&Path>, input: &Path, out: &Path) -> CmdResult {
    let g = read_graph(input)?;
    let fb = build_fourier(&shift(&g, common.mode)?, &common.tol()?)?;
    let s = match signal {
        Some(p) => read_signal(p, g.n())?,
        None => vec![1.0; g.n()],
    };
    let s_hat = fb.transform(&lift(&s))?;
    let spec = write_file(out, "spectrum.csv", &spectrum_csv(&fb, &s_hat))?;
    let basis = write_file(out, "basis.csv", &basis_csv(&fb.v))?;
    Ok(json!({
        "n": fb.n(),
        "lambda_max_abs": fb.lambda_max_abs,
        "tv_unnormalized": fb.tv_unnormalized,
        "kappa": fb.condition_number(),
        "files": [path_str(&spec), path_str(&basis)],
    }))
}

#[allow(clippy::too_many_arguments)]
fn cmd_wiener(
    common: &Common,
    signal: Option<&Path>,
    sigma: f64,
    orders: (usize, usize),
    trials: usize,
    input: &Path,
    out: &Path,
) -> CmdResult {
    if orders.0 == 0 || orders.0 > orders.1 || trials == 0 {
        return Err(anyhow::anyhow!("need 1 <= min-order <= max-order and trials >= 1").into());
    }
    let g = read_graph(input)?;
    let fb = build_fourier(&shift(&g, common.mode)?, &common.tol()?)?;
    let n = fb.n();
    let x = match signal {
        Some(p) => read_signal(p, n)?,
        None => (0..n).map(|i| (0..3.min(n)).map(|k| fb.v[(i, k)].re).sum()).collect(),
    };
    let ae = energy_shift(&fb);
    let xc = lift(&x);
    let mut errs = vec![Vec::with_capacity(trials); orders.1 - orders.0 + 1];
    let mut snrs = Vec::with_capacity(trials);
    for t in 0..trials {
        let y = awgn(&x, sigma, common.seed.wrapping_add(t as u64))?;
        let noise: Vec<f64> = y.iter().zip(&x).map(|(a, b)| a - b).collect();
        snrs.push(dgsp::filters::snr(&x, &noise));
        let yc = lift(&y);
        for (slot, order) in errs.iter_mut().zip(orders.0..=orders.1) {
            let d = wiener_design(&xc, &yc, &ae, order)?;
            slot.push(relative_error(&wiener_apply(&d, &ae, &yc)?, &xc));
        }
    }
    let stats = |v: &[f64]| {
        let m = v.iter().sum::<f64>() / v.len() as f64;
        let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / v.len() as f64;
        (m, var.sqrt())
    };
    let mut csv = String::from("order,mean_relative_error,std\n");
    let mut rows = Vec::new();
    for (e, order) in errs.iter().zip(orders.0..=orders.1) {
        let (m, s) = stats(e);
        csv.push_str(&format!("{order},{m},{s}\n"));
        rows.push(json!({ "order": order, "mean_relative_error": m, "std": s }));
    }
    let (snr_mean, snr_std) = stats(&snrs);
    let p = write_file(out, "wiener.csv", &csv)?;
    Ok(json!({
        "n": n,
        "sigma": sigma,
        "trials": trials,
        "snr_db_mean": snr_mean,
        "snr_db_std": snr_std,
        "orders": rows,
        "files": [path_str(&p)],
    }))
}

fn exact_shift(g: &Digraph, mode: ModeArg) -> anyhow::Result<RationalMatrix> {
    Ok(match ShiftMode::from(mode) {
        ShiftMode::Adjacency => adjacency_rational(g),
        ShiftMode::Laplacian(conv) => laplacian_rational(g, conv)?,
    })
}

fn cmd_oracle(query: OracleQuery, input: &Path, mode: ModeArg, lambda: i64) -> CmdResult {
    let g = read_graph(input)?;
    let m = exact_shift(&g, mode)?;
    let v = match query {
        OracleQuery::Charpoly => {
            let p = oracle::char_poly_exact(&m)?;
            json!({ "charpoly": p.to_json(), "text": p.to_string() })
        }
        OracleQuery::Coates => {
            if !matches!(mode, ModeArg::Adjacency) {
                return Err(anyhow::anyhow!("the cycle-cover expansion is for the adjacency shift").into());
            }
            let p = oracle::char_poly_coates(&g)?;
            json!({ "charpoly": p.to_json(), "text": p.to_string() })
        }
        OracleQuery::Minpoly => {
            let p = oracle::minimal_polynomial(&m)?;
            json!({ "minpoly": p.to_json(), "text": p.to_string() })
        }
        OracleQuery::Diagonalizable => json!({ "diagonalizable": oracle::is_diagonalizable_exact(&m)? }),
        OracleQuery::Jordan => {
            let sizes = oracle::jordan_structure_at(&m, &rational(lambda))?;
            json!({ "lambda": lambda, "blocks": sizes })
        }
    };
    Ok(v)
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Gen { model, n, p, k, beta, seed_size, avg_deg, mu, max_retries, common, out } => {
            let model = match model {
                ModelArg::Er => Model::ErdosRenyi { p },
                ModelArg::Ws => Model::WattsStrogatz { k, beta },
                ModelArg::Ba => Model::BarabasiAlbert { seed_size, avg_deg },
                ModelArg::Ke => Model::KlemmEguiluz { seed_size, mu },
            };
            cmd_gen(model, n, max_retries, &common, &out)
        }
        Command::DestroyZeros { common, input, out } => cmd_destroy_zeros(&common, &input, &out),
        Command::Diagonalize { common, pre, input, out } => cmd_diagonalize(&common, pre, &input, &out),
        Command::Analyze { common, bin_width, input, out } => cmd_analyze(&common, bin_width, &input, out.as_deref()),
        Command::Gft { common, signal, input, out } => cmd_gft(&common, signal.as_deref(), &input, &out),
        Command::Wiener { common, signal, sigma, min_order, max_order, trials, input, out } => {
            cmd_wiener(&common, signal.as_deref(), sigma, (min_order, max_order), trials, &input, &out)
        }
        Command::Oracle { query, input, mode, lambda } => cmd_oracle(query, &input, mode, lambda),
    }
}

/// Writes the summary to stdout, ignoring a closed pipe.
fn emit(v: &Value) {
    let _ = std::io::stdout().write_all(pretty(v).as_bytes());
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(v) => {
            emit(&v);
            ExitCode::SUCCESS
        }
        Err(f) => {
            let mut v = json!({ "error": format!("{:#}", f.error), "exit_code": f.code });
            if let Some(p) = f.partial {
                v["partial"] = p;
            }
            emit(&v);
            log::error!("{:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
