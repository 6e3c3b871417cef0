//! Alpha sweeps over interpolation and collocation problems, and kernel sampling tables.
//!
//! A run is described by a flat TOML file whose keys mirror [`ExperimentConfig`].
//! Sweep rows are computed in parallel and emitted in alpha order.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::collocate::{operator_orders, solve_collocation, CollocationProblem, RadialOperator};
use crate::error::{Error, Result};
use crate::interpolate::{rmse, Interpolant, TailKind, TailSpec};
use crate::kernels::{self, build_kernel, cpd_order_over_alpha, validate_restrictions, Family, FracMode, KernelSpec};
use crate::monomial::MonomialSum;
use crate::nodes::{make_node_set, Domain, Layout, NodeOptions, NodeSet};
use crate::precond::{condition_number, PrecondConfig};
use crate::problems::Problem;
use crate::specfun::FracKind;

/// Side of the held-out grid for interpolation sweeps.
pub const INTERP_HELDOUT_GRID: usize = 32;
/// Number of samples in a kernel table.
pub const KERNEL_TABLE_ROWS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Interpolate,
    Collocate,
    KernelTable,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interpolate" => Ok(Mode::Interpolate),
            "collocate" => Ok(Mode::Collocate),
            "kernel-table" | "kernel_table" => Ok(Mode::KernelTable),
            other => Err(Error::Config(format!("unknown mode `{other}`"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Interpolate => "interpolate",
            Mode::Collocate => "collocate",
            Mode::KernelTable => "kernel-table",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("unknown format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub family: Family,
    #[serde(rename = "N")]
    pub n: f64,
    /// Explicit alpha values; takes precedence over the range keys.
    pub alpha: Option<Vec<f64>>,
    pub alpha_start: Option<f64>,
    pub alpha_stop: Option<f64>,
    pub alpha_step: Option<f64>,
    pub frac_mode: FracMode,
    pub frac_kind: FracKind,
    /// Operator parameter of the collocation problems.
    pub beta: f64,
    pub c0: Option<f64>,
    /// Kernel scale; defaults to the largest domain bound.
    pub b: Option<f64>,
    pub tail: Option<TailKind>,
    /// Tail order; defaults to the CPD order over the mode's alpha range.
    pub m: Option<u32>,
    /// Bounds `[a, b]` of the square domain.
    pub domain: [f64; 2],
    pub ni: usize,
    /// Boundary node count, a multiple of 4.
    pub nb: usize,
    pub seed_skip: u64,
    pub inset: f64,
    /// Offset of the optional ring of nodes just inside the boundary, as a fraction of the side.
    pub ring: Option<f64>,
    pub precondition: Option<bool>,
    #[serde(rename = "M")]
    pub m_target: f64,
    pub n_max: u32,
    pub problem: Option<Problem>,
    pub out: Option<PathBuf>,
    pub format: Format,
    /// Best row's solution sampled on a grid.
    pub grid_out: Option<PathBuf>,
    /// Best row's weights.
    pub weights_out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            family: Family::FalseTps,
            n: 3.22,
            alpha: None,
            alpha_start: None,
            alpha_stop: None,
            alpha_step: None,
            frac_mode: FracMode::None,
            frac_kind: FracKind::Caputo,
            beta: 0.0,
            c0: None,
            b: None,
            tail: None,
            m: None,
            domain: [0.0, 1.0],
            ni: 100,
            nb: 40,
            seed_skip: 0,
            inset: 0.0,
            ring: None,
            precondition: None,
            m_target: 10.0,
            n_max: 64,
            problem: None,
            out: None,
            format: Format::Csv,
            grid_out: None,
            weights_out: None,
        }
    }
}

/// Values given on the command line that replace config keys.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub n: Option<f64>,
    pub alpha: Option<Vec<f64>>,
    pub beta: Option<f64>,
    pub family: Option<Family>,
    pub tail: Option<TailKind>,
    pub domain: Option<[f64; 2]>,
    pub ni: Option<usize>,
    pub nb: Option<usize>,
    pub m_target: Option<f64>,
    pub seed_skip: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

fn round_alpha(v: f64) -> f64 {
    (v * 1e12).round() / 1e12
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        macro_rules! set {
            ($field:ident, $src:ident) => {
                if let Some(v) = &o.$src {
                    self.$field = v.clone().into();
                }
            };
        }
        set!(n, n);
        if let Some(a) = &o.alpha {
            self.alpha = Some(a.clone());
        }
        set!(beta, beta);
        set!(family, family);
        if o.tail.is_some() {
            self.tail = o.tail;
        }
        set!(domain, domain);
        set!(ni, ni);
        set!(nb, nb);
        set!(m_target, m_target);
        set!(seed_skip, seed_skip);
        if o.out.is_some() {
            self.out = o.out.clone();
        }
        set!(format, format);
    }

    /// Alpha values of the sweep, in order.
    pub fn alphas(&self) -> Result<Vec<f64>> {
        if let Some(list) = &self.alpha {
            return Ok(list.clone());
        }
        match (self.alpha_start, self.alpha_stop, self.alpha_step) {
            (None, None, None) => Ok(vec![0.0]),
            (Some(start), Some(stop), Some(step)) => {
                if !(step > 0.0) || !step.is_finite() {
                    return Err(Error::Config(format!("alpha_step must be positive, got {step}")));
                }
                let count = ((stop - start) / step + 1e-9).floor();
                if count < 0.0 {
                    return Ok(Vec::new());
                }
                Ok((0..=count as usize)
                    .map(|i| round_alpha(start + i as f64 * step))
                    .collect())
            }
            _ => Err(Error::Config(
                "alpha_start, alpha_stop and alpha_step go together".into(),
            )),
        }
    }

    pub fn domain(&self) -> Result<Domain> {
        Domain::cube(self.domain[0], self.domain[1], 2).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn boundary_per_side(&self) -> Result<usize> {
        if self.nb == 0 {
            return Ok(0);
        }
        if !self.nb.is_multiple_of(4) {
            return Err(Error::Config(format!("nb must be a multiple of 4, got {}", self.nb)));
        }
        Ok(self.nb / 4 + 1)
    }

    pub fn precond_config(&self) -> PrecondConfig {
        PrecondConfig {
            target: self.m_target,
            n_max: self.n_max,
        }
    }

    pub fn kernel_spec(&self, alpha: f64) -> KernelSpec {
        let mut spec = KernelSpec::new(
            self.family,
            self.n,
            self.b.unwrap_or(self.domain[1].abs().max(self.domain[0].abs())),
        )
        .with_alpha(self.frac_mode, alpha)
        .with_kind(self.frac_kind);
        if let Some(c0) = self.c0 {
            spec = spec.with_c0(c0);
        }
        spec
    }

    /// Tail order for the sweep: the configured `m` or the CPD order over the mode's alpha range.
    pub fn tail_order(&self) -> u32 {
        self.m.unwrap_or_else(|| {
            let (lo, hi) = self.frac_mode.alpha_range();
            cpd_order_over_alpha(&self.kernel_spec(0.0), lo, hi)
        })
    }

    fn use_precondition(&self, mode: Mode) -> bool {
        self.precondition.unwrap_or(mode == Mode::Collocate)
    }

    fn problem_for(&self, mode: Mode) -> Problem {
        self.problem.unwrap_or(match mode {
            Mode::Collocate => Problem::Sin8Colloc,
            _ => Problem::Sin8Interp,
        })
    }

    /// Checks everything that does not depend on alpha. Integer `N` is a restriction error.
    pub fn validate(&self, mode: Mode) -> Result<()> {
        if !(self.n > 0.0) || !self.n.is_finite() {
            return Err(Error::Config(format!("N must be positive, got {}", self.n)));
        }
        if kernels::is_integer(self.n) {
            return Err(Error::Restriction(format!("N = {} is an integer", self.n)));
        }
        if let Some(b) = self.b {
            if !(b > 0.0) {
                return Err(Error::Config(format!("b must be positive, got {b}")));
            }
        }
        self.alphas()?;
        self.precond_config().validate()?;
        if mode == Mode::KernelTable {
            return Ok(());
        }
        self.domain()?;
        self.boundary_per_side()?;
        if self.ni == 0 {
            return Err(Error::Config("ni must be positive".into()));
        }
        if !(0.0..0.5).contains(&self.inset) {
            return Err(Error::Config(format!("inset must lie in [0, 0.5), got {}", self.inset)));
        }
        if let Some(r) = self.ring {
            if !(r > 0.0 && r < 0.5) {
                return Err(Error::Config(format!("ring must lie in (0, 0.5), got {r}")));
            }
        }
        if mode == Mode::Collocate {
            if self.nb == 0 {
                return Err(Error::Config("collocation needs boundary nodes".into()));
            }
            if self.tail == Some(TailKind::Multivariate) {
                return Err(Error::Config("collocation uses the radial tail".into()));
            }
            if self.frac_kind == FracKind::RiemannLiouville && self.domain()?.contains_origin() {
                return Err(Error::Config(
                    "the Riemann-Liouville operator needs a domain excluding the origin".into(),
                ));
            }
        }
        Ok(())
    }

    /// First 16 hex digits of the SHA-256 of the config's JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    fn node_set(&self) -> Result<NodeSet> {
        let options = NodeOptions {
            skip: self.seed_skip,
            inset_margin: self.inset,
            boundary_ring: self.ring,
        };
        make_node_set(
            &self.domain()?,
            self.ni,
            self.boundary_per_side()?,
            Layout::HaltonInteriorCartesianBoundary,
            &options,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub rmse: Option<f64>,
    /// `cond(G_M)` when preconditioned, `cond(G)` otherwise.
    pub cond: Option<f64>,
    pub status: String,
    pub cond_g: Option<f64>,
    pub rmse_nodes: Option<f64>,
    pub rmse_heldout: Option<f64>,
    pub shift_n: Option<u32>,
    pub config_hash: String,
}

impl SweepRow {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedRow {
    pub alpha: f64,
    pub reason: String,
}

/// Solved expansion of one row, kept for the grid and weight exports.
#[derive(Debug, Clone, PartialEq)]
pub struct RowSolution {
    pub alpha: f64,
    pub interpolant: Interpolant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub mode: Mode,
    pub config_hash: String,
    pub rows: Vec<SweepRow>,
    pub skipped: Vec<SkippedRow>,
    /// Solution of the successful row with the lowest `rmse`.
    pub best: Option<RowSolution>,
}

impl SweepTable {
    pub fn all_failed(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| !r.is_ok())
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        if self.rows.is_empty() {
            w.write_record([
                "alpha",
                "rmse",
                "cond",
                "status",
                "cond_g",
                "rmse_nodes",
                "rmse_heldout",
                "shift_n",
                "config_hash",
            ])?;
        }
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut writer: W) -> Result<()> {
        #[derive(Serialize)]
        struct Doc<'a> {
            mode: Mode,
            config_hash: &'a str,
            rows: &'a [SweepRow],
            skipped: &'a [SkippedRow],
        }
        let doc = Doc {
            mode: self.mode,
            config_hash: &self.config_hash,
            rows: &self.rows,
            skipped: &self.skipped,
        };
        serde_json::to_writer_pretty(&mut writer, &doc).map_err(|e| Error::Io(e.to_string()))?;
        writeln!(writer)?;
        Ok(())
    }

    pub fn write<W: Write>(&self, format: Format, writer: W) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(writer),
            Format::Json => self.write_json(writer),
        }
    }
}

enum RowOutcome {
    Done(SweepRow, Option<Box<RowSolution>>),
    Skipped(SkippedRow),
}

fn failed_row(alpha: f64, hash: &str, e: &Error) -> SweepRow {
    SweepRow {
        alpha,
        rmse: None,
        cond: None,
        status: format!("error: {e}"),
        cond_g: None,
        rmse_nodes: None,
        rmse_heldout: None,
        shift_n: None,
        config_hash: hash.to_string(),
    }
}

fn collect(mode: Mode, hash: String, outcomes: Vec<RowOutcome>) -> SweepTable {
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    let mut best: Option<(f64, RowSolution)> = None;
    for outcome in outcomes {
        match outcome {
            RowOutcome::Done(row, solution) => {
                if let (Some(sol), Some(r)) = (solution, row.rmse) {
                    if best.as_ref().is_none_or(|(b, _)| r < *b) {
                        best = Some((r, *sol));
                    }
                }
                rows.push(row);
            }
            RowOutcome::Skipped(s) => {
                log::info!("alpha = {} skipped: {}", s.alpha, s.reason);
                skipped.push(s);
            }
        }
    }
    SweepTable {
        mode,
        config_hash: hash,
        rows,
        skipped,
        best: best.map(|(_, s)| s),
    }
}

fn interpolation_row(
    config: &ExperimentConfig,
    nodes: &NodeSet,
    values: &[f64],
    heldout: &[Vec<f64>],
    alpha: f64,
    hash: &str,
) -> Result<(SweepRow, RowSolution)> {
    let spec = config.kernel_spec(alpha);
    spec.validate()?;
    let kernel = build_kernel(&spec)?;
    let tail = TailSpec {
        kind: config.tail.unwrap_or(TailKind::Multivariate),
        m: config.tail_order(),
        d: 2,
        o: 0.0,
    };
    let pre = config
        .use_precondition(Mode::Interpolate)
        .then(|| config.precond_config());
    let points = nodes.points();
    let (interpolant, solution) = Interpolant::fit(&points, values, &kernel, &tail, pre.as_ref())?;
    let fitted: Vec<f64> = points.iter().map(|x| interpolant.evaluate(x)).collect();
    let rmse_nodes = rmse(values, &fitted)?;
    let problem = config.problem_for(Mode::Interpolate).solution();
    let truth: Vec<f64> = heldout.iter().map(|x| problem(x)).collect();
    let approx: Vec<f64> = heldout.iter().map(|x| interpolant.evaluate(x)).collect();
    let rmse_heldout = rmse(&truth, &approx)?;
    let (cond_g, cond, shift_n) = match solution.precond {
        Some(p) => (p.cond_before, p.cond_after, Some(p.n)),
        None => {
            let system = crate::interpolate::assemble_interpolation(&points, &kernel, &tail, values)?;
            let c = condition_number(&system.matrix()).unwrap_or(f64::INFINITY);
            (c, c, None)
        }
    };
    let row = SweepRow {
        alpha,
        rmse: Some(rmse_nodes),
        cond: Some(cond),
        status: "ok".into(),
        cond_g: Some(cond_g),
        rmse_nodes: Some(rmse_nodes),
        rmse_heldout: Some(rmse_heldout),
        shift_n,
        config_hash: hash.to_string(),
    };
    Ok((row, RowSolution { alpha, interpolant }))
}

/// One row per alpha; `rmse` is measured at the interpolation nodes.
pub fn run_interpolation_sweep(config: &ExperimentConfig) -> Result<SweepTable> {
    config.validate(Mode::Interpolate)?;
    let hash = config.hash();
    let alphas = config.alphas()?;
    let nodes = config.node_set()?;
    let target = config.problem_for(Mode::Interpolate).solution();
    let values: Vec<f64> = nodes.iter().map(|x| target(x)).collect();
    let heldout = config.domain()?.grid(INTERP_HELDOUT_GRID);
    let outcomes = alphas
        .par_iter()
        .map(
            |&alpha| match interpolation_row(config, &nodes, &values, &heldout, alpha, &hash) {
                Ok((row, sol)) => RowOutcome::Done(row, Some(Box::new(sol))),
                Err(e) => RowOutcome::Done(failed_row(alpha, &hash, &e), None),
            },
        )
        .collect();
    Ok(collect(Mode::Interpolate, hash, outcomes))
}

fn collocation_row(config: &ExperimentConfig, problem: &CollocationProblem, alpha: f64, hash: &str) -> RowOutcome {
    let spec = config.kernel_spec(alpha);
    let (q, o) = operator_orders(&problem.operator, problem.boundary);
    if let Err(e) = spec.validate().and_then(|_| validate_restrictions(&spec, q)) {
        return RowOutcome::Skipped(SkippedRow {
            alpha,
            reason: e.to_string(),
        });
    }
    let tail = TailSpec::radial(config.tail_order(), 2, o);
    let pre = config
        .use_precondition(Mode::Collocate)
        .then(|| config.precond_config());
    let result = build_kernel(&spec).and_then(|kernel| solve_collocation(problem, &kernel, &tail, pre.as_ref()));
    match result {
        Ok((sol, report)) => {
            let cond = report.precond.map(|p| p.cond_after).unwrap_or(report.cond_before);
            let mut status = String::from("ok");
            if report.dropped_constant {
                status.push_str(" (tail constant dropped)");
            }
            let row = SweepRow {
                alpha,
                rmse: Some(report.rmse_heldout),
                cond: Some(cond),
                status,
                cond_g: Some(report.cond_before),
                rmse_nodes: Some(report.rmse_interior),
                rmse_heldout: Some(report.rmse_heldout),
                shift_n: report.precond.map(|p| p.n),
                config_hash: hash.to_string(),
            };
            RowOutcome::Done(
                row,
                Some(Box::new(RowSolution {
                    alpha,
                    interpolant: sol.interpolant,
                })),
            )
        }
        Err(e) => RowOutcome::Done(failed_row(alpha, hash, &e), None),
    }
}

/// Rows for admissible alpha only; `rmse` is the operator residual on the held-out grid.
pub fn run_collocation_sweep(config: &ExperimentConfig) -> Result<SweepTable> {
    config.validate(Mode::Collocate)?;
    let hash = config.hash();
    let alphas = config.alphas()?;
    let which = config.problem_for(Mode::Collocate);
    let problem = CollocationProblem::new(
        config.domain()?,
        config.node_set()?,
        RadialOperator::new(config.beta, config.frac_kind),
        Arc::new(which.source()),
        Arc::new(which.solution()),
    )?;
    let outcomes = alphas
        .par_iter()
        .map(|&alpha| collocation_row(config, &problem, alpha, &hash))
        .collect();
    Ok(collect(Mode::Collocate, hash, outcomes))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSample {
    pub r: f64,
    pub tps: f64,
    pub phi: f64,
}

/// `(r, r^N log r, phi(r))` at `r = i/256`, `i = 1..=256`, for the first alpha of the config.
pub fn kernel_table(config: &ExperimentConfig) -> Result<Vec<KernelSample>> {
    config.validate(Mode::KernelTable)?;
    let alpha = config.alphas()?.first().copied().unwrap_or(0.0);
    let mut spec = config.kernel_spec(alpha);
    if config.b.is_none() {
        spec.b = 1.0;
    }
    let kernel = build_kernel(&spec)?;
    Ok(sample_kernel(&kernel, config.n))
}

pub fn sample_kernel(kernel: &MonomialSum, n: f64) -> Vec<KernelSample> {
    (1..=KERNEL_TABLE_ROWS)
        .map(|i| {
            let r = i as f64 / KERNEL_TABLE_ROWS as f64;
            KernelSample {
                r,
                tps: kernels::tps(n, r),
                phi: kernel.evaluate(r),
            }
        })
        .collect()
}

pub fn write_kernel_table<W: Write>(samples: &[KernelSample], format: Format, mut writer: W) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(writer);
            for s in samples {
                w.serialize(s)?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut writer, samples).map_err(|e| Error::Io(e.to_string()))?;
            writeln!(writer)?;
        }
    }
    Ok(())
}

/// Samples the solution on a `k x k` grid: `x1, x2, approx, exact`.
pub fn write_solution_grid<W: Write>(
    solution: &RowSolution,
    domain: &Domain,
    exact: fn(&[f64]) -> f64,
    k: usize,
    writer: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["alpha", "x1", "x2", "approx", "exact"])?;
    for x in domain.grid(k) {
        let row = [solution.alpha, x[0], x[1], solution.interpolant.evaluate(&x), exact(&x)];
        w.write_record(row.iter().map(|v| format!("{v:?}")))?;
    }
    w.flush()?;
    Ok(())
}

/// Kernel weights per center, then tail coefficients: `kind, index, x1, x2, weight`.
pub fn write_weights<W: Write>(solution: &RowSolution, writer: W) -> Result<()> {
    let s = &solution.interpolant;
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["kind", "index", "x1", "x2", "weight"])?;
    for (i, (c, l)) in s.centers.iter().zip(&s.lambda).enumerate() {
        w.write_record([
            "center".to_string(),
            i.to_string(),
            format!("{:?}", c[0]),
            format!("{:?}", c[1]),
            format!("{l:?}"),
        ])?;
    }
    for (i, b) in s.beta.iter().enumerate() {
        w.write_record([
            "tail".to_string(),
            i.to_string(),
            String::new(),
            String::new(),
            format!("{b:?}"),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Outcome of a command-line run.
#[derive(Debug, Clone, PartialEq)]
pub enum RunOutput {
    Sweep(SweepTable),
    KernelTable(Vec<KernelSample>),
}

impl RunOutput {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunOutput::Sweep(t) if t.all_failed() => 3,
            _ => 0,
        }
    }
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

/// Runs one mode and writes every requested output.
pub fn run(mode: Mode, config: &ExperimentConfig) -> Result<RunOutput> {
    let output = match mode {
        Mode::Interpolate => RunOutput::Sweep(run_interpolation_sweep(config)?),
        Mode::Collocate => RunOutput::Sweep(run_collocation_sweep(config)?),
        Mode::KernelTable => RunOutput::KernelTable(kernel_table(config)?),
    };
    let writer = open_output(&config.out)?;
    match &output {
        RunOutput::KernelTable(samples) => write_kernel_table(samples, config.format, writer)?,
        RunOutput::Sweep(table) => {
            table.write(config.format, writer)?;
            if let Some(best) = &table.best {
                if let Some(path) = &config.grid_out {
                    let exact = config.problem_for(mode).solution();
                    write_solution_grid(
                        best,
                        &config.domain()?,
                        exact,
                        INTERP_HELDOUT_GRID,
                        std::fs::File::create(path)?,
                    )?;
                }
                if let Some(path) = &config.weights_out {
                    write_weights(best, std::fs::File::create(path)?)?;
                }
            }
        }
    }
    Ok(output)
}
