//! Named experiments over a configured domain.
//!
//! Every runner writes its table into the output directory and returns a
//! list of verdicts; `run_all` chains them and writes `verdicts.txt`.

use std::f64::consts::{PI, TAU};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cover::{
    assemble_lifted, build_cover, build_theta, deck_block, lift_l, real_lift, real_representatives, DeckParity,
    KOperator,
};
use crate::eigensolver::{lowest_eigenpairs_with, multiplicity_estimate, EigenResult, SolverOptions, DEFAULT_SEED};
use crate::error::{Error, Result};
use crate::gauge::{aharonov_potential, FluxVector, LinkField};
use crate::geometry::{build_grid, DomainSpec, GridDomain};
use crate::graph::Graph;
use crate::nodal::{circle_nodal_points, degenerate_pair_check, extract_nodal_set, topology_report, SlitReport};
use crate::operator::{
    assemble_circle, assemble_circle_with_potential, assemble_magnetic, assemble_slit, circle_field, circle_spacing,
    BoundaryCondition, HamiltonianMatrix, PotentialField, SlitPath,
};
use crate::sparse::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Pass,
    Fail,
    /// Preconditions of the experiment do not hold for this configuration.
    Skip,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub claim: String,
    pub outcome: Outcome,
    pub detail: String,
}

impl Verdict {
    fn new(claim: &str, passed: bool, detail: String) -> Self {
        let outcome = if passed { Outcome::Pass } else { Outcome::Fail };
        Self { claim: claim.to_string(), outcome, detail }
    }

    fn skip(claim: &str, detail: impl Into<String>) -> Self {
        Self { claim: claim.to_string(), outcome: Outcome::Skip, detail: detail.into() }
    }

    pub fn passed(&self) -> bool {
        self.outcome != Outcome::Fail
    }

    pub fn line(&self) -> String {
        let tag = match self.outcome {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Skip => "SKIP",
        };
        format!("{tag} [{}] {}", self.claim, self.detail)
    }
}

// ---------------------------------------------------------------------------
// configuration

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialSpec {
    #[default]
    Zero,
    /// `−depth · exp(−|x|²/width²)`, centrally symmetric.
    RadialWell { depth: f64, width: f64 },
    /// `height · exp(−|x − center|²/width²)`.
    Bump { center: [f64; 2], height: f64, width: f64 },
    /// Whitespace-separated `x y value` rows; each vertex takes the nearest sample.
    Table { path: PathBuf },
}

impl PotentialSpec {
    pub fn evaluate(&self, grid: &GridDomain, base_dir: &Path) -> Result<PotentialField> {
        Ok(match self {
            PotentialSpec::Zero => PotentialField::zero(grid.vertex_count()),
            PotentialSpec::RadialWell { depth, width } => {
                PotentialField::from_fn(grid, |[x, y]| -depth * (-(x * x + y * y) / (width * width)).exp())
            }
            PotentialSpec::Bump { center, height, width } => PotentialField::from_fn(grid, |p| bump(p, *center, *height, *width)),
            PotentialSpec::Table { path } => {
                let samples = read_table(&base_dir.join(path))?;
                PotentialField::from_fn(grid, |p| {
                    samples
                        .iter()
                        .min_by(|a, b| dist2(p, [a[0], a[1]]).total_cmp(&dist2(p, [b[0], b[1]])))
                        .map_or(0.0, |s| s[2])
                })
            }
        })
    }
}

fn bump(p: [f64; 2], center: [f64; 2], height: f64, width: f64) -> f64 {
    height * (-dist2(p, center) / (width * width)).exp()
}

fn dist2(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

fn read_table(path: &Path) -> Result<Vec<[f64; 3]>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("potential table {}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let vals: Vec<f64> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Config(format!("{}:{}: {e}", path.display(), no + 1)))?;
        if vals.len() != 3 {
            return Err(Error::Config(format!("{}:{}: expected `x y value`", path.display(), no + 1)));
        }
        rows.push([vals[0], vals[1], vals[2]]);
    }
    if rows.is_empty() {
        return Err(Error::Config(format!("potential table {} has no rows", path.display())));
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSpec {
    pub m: usize,
    pub tol: f64,
    pub seed: u64,
    /// Relative width of an eigenvalue cluster counted as one eigenspace.
    pub cluster_tol: f64,
}

impl Default for SolverSpec {
    fn default() -> Self {
        Self { m: 3, tol: 1e-10, seed: DEFAULT_SEED, cluster_tol: crate::eigensolver::CLUSTER_TOL_EXACT }
    }
}

impl SolverSpec {
    pub fn options(&self) -> SolverOptions {
        SolverOptions { tol: self.tol, seed: self.seed, ..SolverOptions::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    /// Flux direction: sample `t` puts `t · direction` through the holes.
    /// Defaults to all ones.
    pub direction: Option<Vec<f64>>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self { start: 0.0, stop: 1.0, step: 0.025, direction: None }
    }
}

impl SweepSpec {
    pub fn samples(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.start + i as f64 * self.step).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CircleSpec {
    pub n: usize,
    pub alphas: Vec<f64>,
    /// Amplitude of the `cos φ` perturbation at `α = 1/2`.
    pub epsilon: f64,
    /// Circle size for the cover comparison.
    pub cover_n: usize,
}

impl Default for CircleSpec {
    fn default() -> Self {
        Self { n: 256, alphas: vec![0.0, 0.1, 0.25, 0.4, 0.5], epsilon: 0.01, cover_n: 64 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SlitFamily {
    /// Rays at `count` equally spaced angles from `center` (default: the hole's reference point).
    Radial { count: usize, center: Option<[f64; 2]> },
    /// Shortest lattice paths from `count` outer boundary vertices, equally
    /// spaced in angle around the hole, to the hole.
    Shortest { count: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SlitSpec {
    pub family: SlitFamily,
    /// Repeat at half the spacing for the two-grid check.
    pub refine: bool,
}

impl Default for SlitSpec {
    fn default() -> Self {
        Self { family: SlitFamily::Radial { count: 32, center: None }, refine: true }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MultiplicitySpec {
    /// Bump added to break the symmetry.
    pub bump_center: [f64; 2],
    pub bump_height: f64,
    pub bump_width: f64,
}

impl Default for MultiplicitySpec {
    fn default() -> Self {
        Self { bump_center: [0.6, 0.0], bump_height: 5.0, bump_width: 0.15 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub domain: DomainSpec,
    #[serde(default)]
    pub potential: PotentialSpec,
    /// Half-integer fluxes for the cover and nodal runs; default ½ per hole.
    #[serde(default)]
    pub half_flux: Option<Vec<f64>>,
    #[serde(default)]
    pub sweep: SweepSpec,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub circle: CircleSpec,
    #[serde(default)]
    pub slit: SlitSpec,
    #[serde(default)]
    pub multiplicity: MultiplicitySpec,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Directory relative paths are resolved against; the config file's directory.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut cfg: Self = toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.domain.holes.len();
        if !(self.sweep.step > 0.0) || !(self.sweep.stop >= self.sweep.start) {
            return Err(Error::Config("sweep needs step > 0 and stop >= start".into()));
        }
        if let Some(d) = &self.sweep.direction {
            if d.len() != k {
                return Err(Error::Config(format!("sweep direction has {} entries for {k} holes", d.len())));
            }
        }
        if let Some(f) = &self.half_flux {
            if f.len() != k {
                return Err(Error::Config(format!("half_flux has {} entries for {k} holes", f.len())));
            }
            if f.iter().any(|x| ((2.0 * x).round() - 2.0 * x).abs() > 1e-9 || (x.round() - x).abs() < 1e-9) {
                return Err(Error::Config("half_flux entries must lie in 1/2 + Z".into()));
            }
        }
        if self.solver.m == 0 || !(self.solver.tol > 0.0) || !(self.solver.cluster_tol > 0.0) {
            return Err(Error::Config("solver needs m >= 1, tol > 0 and cluster_tol > 0".into()));
        }
        if self.circle.n < 64 {
            return Err(Error::Config(format!("circle n must be at least 64, got {}", self.circle.n)));
        }
        if let PotentialSpec::Table { path } = &self.potential {
            let full = self.base_dir.join(path);
            if !full.is_file() {
                return Err(Error::Config(format!("potential table {} does not exist", full.display())));
            }
        }
        Ok(())
    }

    pub fn hole_count(&self) -> usize {
        self.domain.holes.len()
    }

    pub fn direction(&self) -> Vec<f64> {
        self.sweep.direction.clone().unwrap_or_else(|| vec![1.0; self.hole_count()])
    }

    pub fn half_flux(&self) -> Vec<f64> {
        self.half_flux.clone().unwrap_or_else(|| vec![0.5; self.hole_count()])
    }
}

// ---------------------------------------------------------------------------
// shared helpers

struct Problem {
    grid: GridDomain,
    potential: PotentialField,
}

impl Problem {
    fn new(cfg: &ExperimentConfig, spec: &DomainSpec) -> Result<Self> {
        let grid = build_grid(spec)?;
        let potential = cfg.potential.evaluate(&grid, &cfg.base_dir)?;
        Ok(Self { grid, potential })
    }

    fn field(&self, flux: &[f64]) -> Result<LinkField> {
        aharonov_potential(&self.grid, &FluxVector(flux.to_vec()))
    }

    fn magnetic(&self, flux: &[f64]) -> Result<(LinkField, HamiltonianMatrix)> {
        let field = self.field(flux)?;
        let h = assemble_magnetic(&self.grid, &field, &self.potential, BoundaryCondition::Neumann)?;
        Ok((field, h))
    }
}

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs().max(b.abs()))
}

fn norm(u: &[Complex64]) -> f64 {
    u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn is_integer_vector(v: &[f64]) -> bool {
    v.iter().all(|x| (x - x.round()).abs() < 1e-12)
}

// ---------------------------------------------------------------------------
// flux sweep

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub t: f64,
    pub flux: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    pub multiplicity: usize,
    pub residual: f64,
    /// `λ₁` with one extra flux quantum through every hole.
    pub shifted_lambda1: f64,
    pub error: Option<String>,
}

impl SweepRow {
    pub fn lambda1(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::NAN)
    }
}

fn sweep_row(problem: &Problem, cfg: &ExperimentConfig, t: f64, direction: &[f64]) -> SweepRow {
    let flux: Vec<f64> = direction.iter().map(|d| t * d).collect();
    let solve = |flux: &[f64]| -> Result<EigenResult> {
        let (_, h) = problem.magnetic(flux)?;
        lowest_eigenpairs_with(&h, cfg.solver.m, &cfg.solver.options())
    };
    let shifted: Vec<f64> = flux.iter().map(|x| x + 1.0).collect();
    match solve(&flux).and_then(|r| Ok((r, solve(&shifted)?))) {
        Ok((r, s)) => SweepRow {
            t,
            multiplicity: multiplicity_estimate(&r.eigenvalues, cfg.solver.cluster_tol),
            residual: r.max_residual(),
            shifted_lambda1: s.eigenvalues[0],
            eigenvalues: r.eigenvalues,
            flux,
            error: None,
        },
        Err(e) => SweepRow {
            t,
            flux,
            eigenvalues: Vec::new(),
            multiplicity: 0,
            residual: f64::NAN,
            shifted_lambda1: f64::NAN,
            error: Some(e.to_string()),
        },
    }
}

pub fn run_flux_sweep(cfg: &ExperimentConfig, out: &Path) -> Result<(Vec<SweepRow>, Vec<Verdict>)> {
    ensure_dir(out)?;
    let problem = Problem::new(cfg, &cfg.domain)?;
    let direction = cfg.direction();
    let samples = cfg.sweep.samples();
    let rows: Vec<SweepRow> = samples.par_iter().map(|&t| sweep_row(&problem, cfg, t, &direction)).collect();

    let k = cfg.hole_count();
    let m = cfg.solver.m;
    let mut w = csv_writer(&out.join("sweep.csv"))?;
    let mut header: Vec<String> = (1..=k).map(|i| format!("phi_{i}")).collect();
    header.extend((1..=m).map(|i| format!("lambda_{i}")));
    header.extend(["multiplicity", "residual", "lambda_1_plus_one_quantum", "error"].map(String::from));
    w.write_record(&header).map_err(csv_err)?;
    for row in &rows {
        let mut rec: Vec<String> = row.flux.iter().map(|x| format!("{x:.6}")).collect();
        rec.extend((0..m).map(|i| row.eigenvalues.get(i).map_or(String::new(), |l| format!("{l:.15e}"))));
        rec.push(row.multiplicity.to_string());
        rec.push(format!("{:.3e}", row.residual));
        rec.push(format!("{:.15e}", row.shifted_lambda1));
        rec.push(row.error.clone().unwrap_or_default());
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;

    let mut verdicts = Vec::new();
    let failed: Vec<&SweepRow> = rows.iter().filter(|r| r.error.is_some()).collect();
    verdicts.push(Verdict::new(
        "sweep solves",
        failed.is_empty(),
        match failed.first() {
            None => format!("{} samples solved", rows.len()),
            Some(r) => format!("{} failed, first at t={}: {}", failed.len(), r.t, r.error.as_deref().unwrap_or("")),
        },
    ));
    let ok: Vec<&SweepRow> = rows.iter().filter(|r| r.error.is_none()).collect();

    let periodic = ok.iter().map(|r| rel_diff(r.lambda1(), r.shifted_lambda1)).fold(0.0, f64::max);
    verdicts.push(Verdict::new(
        "flux periodicity: spectrum depends on circulations mod 1",
        periodic <= 1e-10,
        format!("max |λ1(Φ) − λ1(Φ+1)|/(1+λ1) = {periodic:.2e}"),
    ));

    if is_integer_vector(&direction) {
        let mut worst = 0.0f64;
        let mut pairs = 0;
        for a in &ok {
            if let Some(b) = ok.iter().find(|b| (a.t + b.t - 1.0).abs() < 1e-9) {
                worst = worst.max(rel_diff(a.lambda1(), b.lambda1()));
                pairs += 1;
            }
        }
        verdicts.push(Verdict::new(
            "conjugation symmetry about half flux",
            pairs > 0 && worst <= 1e-10,
            format!("{pairs} mirrored samples, max rel difference {worst:.2e}"),
        ));
    } else {
        verdicts.push(Verdict::skip("conjugation symmetry about half flux", "non-integer direction"));
    }

    let zero = match ok.iter().find(|r| is_integer_vector(&r.flux)) {
        Some(r) if r.flux.iter().all(|x| x.abs() < 1e-12) => Some(r.lambda1()),
        _ => {
            let (_, h) = problem.magnetic(&vec![0.0; k])?;
            Some(lowest_eigenpairs_with(&h, 1, &cfg.solver.options())?.eigenvalues[0])
        }
    };
    if let Some(l0) = zero {
        let margins: Vec<(f64, f64)> =
            ok.iter().filter(|r| !is_integer_vector(&r.flux)).map(|r| (r.t, r.lambda1() - l0)).collect();
        let min = margins.iter().map(|m| m.1).fold(f64::INFINITY, f64::min);
        let quarter = margins.iter().find(|m| (m.0 - 0.25).abs() < 1e-9).map(|m| m.1);
        let passed = min > 0.0 && quarter.is_none_or(|q| q >= 1e-6);
        verdicts.push(Verdict::new(
            "strict diamagnetic inequality λ1(Φ) > λ1(0)",
            passed,
            format!(
                "λ1(0) = {l0:.6e}, min margin {min:.3e}{}",
                quarter.map_or(String::new(), |q| format!(", margin at t=0.25 {q:.3e}"))
            ),
        ));
    }

    if k == 1 {
        let in_period: Vec<&&SweepRow> = ok.iter().filter(|r| r.t >= -1e-12 && r.t <= 1.0 + 1e-12).collect();
        let argmax = in_period.iter().max_by(|a, b| a.lambda1().total_cmp(&b.lambda1()));
        let at = |t: f64| in_period.iter().find(|r| (r.t - t).abs() < 1e-9).map(|r| r.lambda1());
        match argmax {
            Some(best) => {
                let step_gap = at(0.5).zip(at(0.45)).map(|(a, b)| a - b);
                let passed = (best.t - 0.5).abs() < 1e-9 && step_gap.is_none_or(|g| g > 0.0);
                verdicts.push(Verdict::new(
                    "one hole: λ1 is maximal exactly at half flux",
                    passed,
                    format!(
                        "argmax at t={:.4}{}",
                        best.t,
                        step_gap.map_or(String::new(), |g| format!(", λ1(0.5) − λ1(0.45) = {g:.3e}"))
                    ),
                ));
            }
            None => verdicts.push(Verdict::skip("one hole: λ1 is maximal exactly at half flux", "no samples in [0,1]")),
        }
    }
    Ok((rows, verdicts))
}

// ---------------------------------------------------------------------------
// circle

#[derive(Clone, Debug, PartialEq)]
pub struct CircleRow {
    pub alpha: f64,
    pub eigenvalues: Vec<f64>,
    pub exact: f64,
    pub rel_error: f64,
}

/// `min_k (k − α)²`.
pub fn circle_exact_ground(alpha: f64) -> f64 {
    let r = alpha - alpha.round();
    r * r
}

pub fn run_circle_check(cfg: &ExperimentConfig, out: &Path) -> Result<(Vec<CircleRow>, Vec<Verdict>)> {
    ensure_dir(out)?;
    let started = Instant::now();
    let n = cfg.circle.n;
    let opts = cfg.solver.options();
    let mut rows = Vec::new();
    for &alpha in &cfg.circle.alphas {
        let h = assemble_circle(n, alpha)?;
        let r = lowest_eigenpairs_with(&h, 3, &opts)?;
        let exact = circle_exact_ground(alpha);
        let rel_error = if exact == 0.0 { r.eigenvalues[0].abs() } else { (r.eigenvalues[0] - exact).abs() / exact };
        rows.push(CircleRow { alpha, eigenvalues: r.eigenvalues, exact, rel_error });
    }
    let mut w = csv_writer(&out.join("circle.csv"))?;
    w.write_record(["alpha", "lambda_1", "lambda_2", "lambda_3", "exact", "rel_error"]).map_err(csv_err)?;
    for r in &rows {
        w.write_record([
            format!("{}", r.alpha),
            format!("{:.15e}", r.eigenvalues[0]),
            format!("{:.15e}", r.eigenvalues[1]),
            format!("{:.15e}", r.eigenvalues[2]),
            format!("{:.15e}", r.exact),
            format!("{:.3e}", r.rel_error),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;

    let mut verdicts = Vec::new();
    let h2 = circle_spacing(n).powi(2);
    let worst = rows.iter().map(|r| r.rel_error).fold(0.0, f64::max);
    let fitted = rows.iter().filter(|r| r.exact > 0.0).map(|r| r.rel_error / h2).fold(0.0, f64::max);
    verdicts.push(Verdict::new(
        "circle ground energy min_k (k − α)²",
        worst <= 5e-4,
        format!("n={n}, max relative error {worst:.3e}, fitted C = {fitted:.4} in C·(2π/n)²"),
    ));

    let mut degeneracy_ok = true;
    let mut notes = Vec::new();
    for r in &rows {
        let half = ((r.alpha - r.alpha.floor()) - 0.5).abs() < 1e-12;
        let gap12 = r.eigenvalues[1] - r.eigenvalues[0];
        let gap13 = r.eigenvalues[2] - r.eigenvalues[0];
        if half {
            degeneracy_ok &= gap12 <= 1e-10 && gap13 >= 0.5;
            notes.push(format!("α={}: λ2−λ1={gap12:.1e}, λ3−λ1={gap13:.3}", r.alpha));
        } else {
            degeneracy_ok &= multiplicity_estimate(&r.eigenvalues, cfg.solver.cluster_tol) == 1;
        }
    }
    verdicts.push(Verdict::new(
        "circle ground state is doubly degenerate exactly at half-integer α",
        degeneracy_ok,
        notes.join("; "),
    ));

    let eps = cfg.circle.epsilon;
    let pot: Vec<f64> = (0..n).map(|j| eps * (j as f64 * circle_spacing(n)).cos()).collect();
    let hp = assemble_circle_with_potential(n, 0.5, &pot)?;
    let rp = lowest_eigenpairs_with(&hp, 2, &opts)?;
    let split = rp.eigenvalues[1] - rp.eigenvalues[0];
    verdicts.push(Verdict::new(
        "ε cos φ perturbation splits the half-flux degeneracy",
        split >= 1e-4,
        format!("ε={eps}: λ2−λ1 = {split:.3e}"),
    ));

    // Nodal points of the two K-fixed ground states at α = 1/2.
    let field = circle_field(n, 0.5);
    let graph = Graph::cycle(n);
    let h = assemble_circle(n, 0.5)?;
    let r = lowest_eigenpairs_with(&h, 3, &opts)?;
    let cover = build_cover(&graph, &field)?;
    let theta = build_theta(&cover, &field)?;
    let reps = real_representatives(&r.eigenvectors[..2], &KOperator::new(&graph, &field)?)?;
    let mut points = Vec::new();
    for u in &reps {
        points.push(circle_nodal_points(&real_lift(u, &theta).0, &cover)?);
    }
    let single = points.iter().all(|p| p.len() == 1);
    let apart = single && {
        let d = (points[0][0] - points[1][0]).rem_euclid(TAU);
        (d - PI).abs() <= 2.0 * circle_spacing(n)
    };
    verdicts.push(Verdict::new(
        "circle half-flux ground states vanish at one point each, half a turn apart",
        single && apart,
        format!("nodal angles {points:.4?}"),
    ));

    let elapsed = started.elapsed().as_secs_f64();
    verdicts.push(Verdict::new("circle check runtime under 5 s", elapsed < 5.0, format!("{elapsed:.2} s")));
    Ok((rows, verdicts))
}

// ---------------------------------------------------------------------------
// slit infimum

#[derive(Clone, Debug, PartialEq)]
pub struct SlitRow {
    pub spacing: f64,
    pub index: usize,
    pub angle: f64,
    pub lambda_slit: f64,
    pub lambda_half: f64,
}

impl SlitRow {
    pub fn rel_gap(&self) -> f64 {
        (self.lambda_slit - self.lambda_half) / self.lambda_half
    }
}

fn slit_family(grid: &GridDomain, family: &SlitFamily) -> Vec<(f64, SlitPath)> {
    let hole = grid.hole_refs()[0];
    match family {
        SlitFamily::Radial { count, center } => {
            let c = center.unwrap_or(hole);
            (0..*count)
                .filter_map(|i| {
                    let angle = i as f64 * TAU / *count as f64;
                    SlitPath::radial(grid, c, angle).ok().map(|s| (angle, s))
                })
                .collect()
        }
        SlitFamily::Shortest { count } => {
            let outer = grid.boundary_vertices(0);
            (0..*count)
                .filter_map(|i| {
                    let angle = i as f64 * TAU / *count as f64;
                    let start = outer.iter().copied().min_by(|&a, &b| {
                        let da = angular_distance(grid.position(a), hole, angle);
                        let db = angular_distance(grid.position(b), hole, angle);
                        da.total_cmp(&db)
                    })?;
                    SlitPath::shortest(grid, start, 1).ok().map(|s| (angle, s))
                })
                .collect()
        }
    }
}

fn angular_distance(p: [f64; 2], c: [f64; 2], angle: f64) -> f64 {
    let a = (p[1] - c[1]).atan2(p[0] - c[0]);
    let d = (a - angle).rem_euclid(TAU);
    d.min(TAU - d)
}

fn slit_rows(cfg: &ExperimentConfig, spacing: f64) -> Result<Vec<SlitRow>> {
    let problem = Problem::new(cfg, &cfg.domain.with_spacing(spacing))?;
    let (_, h) = problem.magnetic(&cfg.half_flux())?;
    let lambda_half = lowest_eigenpairs_with(&h, 2, &cfg.solver.options())?.eigenvalues[0];
    let family = slit_family(&problem.grid, &cfg.slit.family);
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let zero = LinkField::zero(problem.grid.graph());
    family
        .par_iter()
        .enumerate()
        .map(|(index, (angle, slit))| {
            let hs = assemble_slit(&problem.grid, &zero, &problem.potential, slit)?;
            let lambda_slit = lowest_eigenpairs_with(&hs, 1, &cfg.solver.options())?.eigenvalues[0];
            Ok(SlitRow { spacing, index, angle: *angle, lambda_slit, lambda_half })
        })
        .collect()
}

/// Gaps below this relative size are at the level of solver noise.
pub const SLIT_GAP_NOISE: f64 = 1e-9;

pub fn run_slit_infimum(cfg: &ExperimentConfig, out: &Path, refine: bool) -> Result<(Vec<SlitRow>, Vec<Verdict>)> {
    ensure_dir(out)?;
    if cfg.hole_count() != 1 {
        return Ok((Vec::new(), vec![Verdict::skip("slit infimum", "needs exactly one hole")]));
    }
    let h = cfg.domain.spacing;
    let mut rows = slit_rows(cfg, h)?;
    let coarse_min = rows.iter().map(SlitRow::rel_gap).fold(f64::INFINITY, f64::min);
    let fine = if refine || cfg.slit.refine { Some(slit_rows(cfg, h / 2.0)?) } else { None };
    let fine_min = fine.as_ref().map(|f| f.iter().map(SlitRow::rel_gap).fold(f64::INFINITY, f64::min));
    let worst_below = rows
        .iter()
        .chain(fine.iter().flatten())
        .map(SlitRow::rel_gap)
        .fold(f64::INFINITY, f64::min);
    if let Some(f) = fine {
        rows.extend(f);
    }

    let mut w = csv_writer(&out.join("slit.csv"))?;
    w.write_record(["spacing", "index", "angle", "lambda_slit", "lambda_half", "rel_gap"]).map_err(csv_err)?;
    for r in &rows {
        w.write_record([
            format!("{}", r.spacing),
            r.index.to_string(),
            format!("{:.6}", r.angle),
            format!("{:.15e}", r.lambda_slit),
            format!("{:.15e}", r.lambda_half),
            format!("{:.3e}", r.rel_gap()),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;

    let count = rows.iter().filter(|r| r.spacing == h).count();
    let mut verdicts = vec![
        Verdict::new(
            "slit infimum: min over slits of λ1(slit) approaches λ1(½)",
            coarse_min.abs() <= 2e-2,
            format!("{count} slits at h={h}: relative gap of the minimum {coarse_min:.3e}"),
        ),
        Verdict::new(
            "every slit energy is bounded below by λ1(½)",
            worst_below >= -2e-2,
            format!("smallest relative gap over all slits {worst_below:.3e}"),
        ),
    ];
    if let Some(fm) = fine_min {
        let (g0, g1) = (coarse_min.max(0.0), fm.max(0.0));
        let passed = g1 <= 0.5 * g0 || g1 <= SLIT_GAP_NOISE;
        let mean = |spacing: f64| {
            let gaps: Vec<f64> = rows.iter().filter(|r| r.spacing == spacing).map(SlitRow::rel_gap).collect();
            gaps.iter().sum::<f64>() / gaps.len() as f64
        };
        verdicts.push(Verdict::new(
            "slit gap shrinks under grid refinement",
            passed,
            format!(
                "minimum gap {g0:.3e} at h={h}, {g1:.3e} at h={}; family-mean gap {:.3e} -> {:.3e}",
                h / 2.0,
                mean(h),
                mean(h / 2.0)
            ),
        ));
    }
    Ok((rows, verdicts))
}

// ---------------------------------------------------------------------------
// multiplicity

fn is_centrally_symmetric(grid: &GridDomain, potential: &PotentialField) -> bool {
    (0..grid.vertex_count()).all(|v| {
        let [i, j] = grid.lattice_coords(v);
        grid.vertex_at(-i, -j).is_some_and(|w| (potential.0[v] - potential.0[w]).abs() <= 1e-12 * (1.0 + potential.0[v].abs()))
    })
}

/// Ground multiplicity and K-fixed ground representatives at the configured half flux.
struct GroundState {
    field: LinkField,
    result: EigenResult,
    multiplicity: usize,
    reps: Vec<Vec<Complex64>>,
}

fn ground_state(problem: &Problem, cfg: &ExperimentConfig) -> Result<GroundState> {
    let k = problem.grid.hole_count();
    let (field, h) = problem.magnetic(&cfg.half_flux())?;
    let m = cfg.solver.m.max(k + 2);
    let result = lowest_eigenpairs_with(&h, m, &cfg.solver.options())?;
    let multiplicity = multiplicity_estimate(&result.eigenvalues, cfg.solver.cluster_tol);
    let kop = KOperator::new(problem.grid.graph(), &field)?;
    let reps = real_representatives(&result.eigenvectors[..multiplicity], &kop)?;
    Ok(GroundState { field, result, multiplicity, reps })
}

fn slit_report_for(problem: &Problem, field: &LinkField, u: &[Complex64]) -> Result<SlitReport> {
    let cover = build_cover(problem.grid.graph(), field)?;
    let theta = build_theta(&cover, field)?;
    let nodal = extract_nodal_set(&real_lift(u, &theta).0, &cover, &problem.grid)?;
    Ok(topology_report(&nodal, &problem.grid, &cover))
}

pub fn run_multiplicity_experiment(cfg: &ExperimentConfig, out: &Path) -> Result<Vec<Verdict>> {
    ensure_dir(out)?;
    if cfg.hole_count() != 1 {
        return Ok(vec![Verdict::skip("half-flux multiplicity", "needs exactly one hole")]);
    }
    let mut verdicts = Vec::new();
    let problem = Problem::new(cfg, &cfg.domain)?;
    let base = ground_state(&problem, cfg)?;
    let eig = &base.result.eigenvalues;
    let mut lines = vec![format!("case,lambda_1,lambda_2,lambda_3,multiplicity")];
    lines.push(format!("base,{:.15e},{:.15e},{:.15e},{}", eig[0], eig[1], eig[2], base.multiplicity));
    if is_centrally_symmetric(&problem.grid, &problem.potential) {
        let width = eig[base.multiplicity - 1] - eig[0];
        let next = eig[base.multiplicity] - eig[base.multiplicity - 1];
        verdicts.push(Verdict::new(
            "symmetric domain: half-flux ground state has multiplicity two",
            base.multiplicity == 2 && next >= 10.0 * width,
            format!("m={}, cluster width {width:.2e}, λ3−λ2 = {next:.3e}", base.multiplicity),
        ));
    } else {
        verdicts.push(Verdict::skip(
            "symmetric domain: half-flux ground state has multiplicity two",
            "domain or potential not centrally symmetric",
        ));
    }
    verdicts.push(Verdict::new(
        "one hole: multiplicity at most two",
        base.multiplicity <= 2,
        format!("m={}", base.multiplicity),
    ));

    let spec = &cfg.multiplicity;
    let mut bumped = Problem::new(cfg, &cfg.domain)?;
    for v in 0..bumped.grid.vertex_count() {
        bumped.potential.0[v] += bump(bumped.grid.position(v), spec.bump_center, spec.bump_height, spec.bump_width);
    }
    let pert = ground_state(&bumped, cfg)?;
    let pe = &pert.result.eigenvalues;
    lines.push(format!("bump,{:.15e},{:.15e},{:.15e},{}", pe[0], pe[1], pe[2], pert.multiplicity));
    fs::write(out.join("multiplicity.csv"), lines.join("\n") + "\n")?;
    verdicts.push(Verdict::new(
        "bump potential leaves a simple ground state",
        pert.multiplicity == 1,
        format!("m={}, λ2−λ1 = {:.3e}", pert.multiplicity, pe[1] - pe[0]),
    ));
    let report = slit_report_for(&bumped, &pert.field, &pert.reps[0])?;
    verdicts.push(Verdict::new(
        "simple ground state still slits the domain",
        report.passes() && report.cover_domain_count == 2,
        report.to_json_line(),
    ));
    Ok(verdicts)
}

// ---------------------------------------------------------------------------
// cover equivalence

#[derive(Clone, Debug, PartialEq)]
pub struct CoverRow {
    pub case: String,
    pub index: usize,
    pub reference: f64,
    pub lifted: f64,
}

fn intertwining_residual(lifted: &HamiltonianMatrix, lambda: f64, lu: &[Complex64]) -> f64 {
    let hl = lifted.apply(lu);
    hl.iter().zip(lu).map(|(a, b)| (a - b * lambda).norm_sqr()).sum::<f64>().sqrt()
}

/// Compares magnetic and antisymmetric spectra, the symmetric part with the
/// zero-flux spectrum, and checks the lift intertwines eigenvectors.
#[allow(clippy::too_many_arguments)]
fn compare_cover(
    case: &str,
    graph: &Graph,
    spacing: f64,
    field: &LinkField,
    magnetic: &HamiltonianMatrix,
    zero_flux: &HamiltonianMatrix,
    potential: &PotentialField,
    opts: &SolverOptions,
    rows: &mut Vec<CoverRow>,
) -> Result<(f64, f64, f64, f64)> {
    let cover = build_cover(graph, field)?;
    let theta = build_theta(&cover, field)?;
    let lifted = assemble_lifted(&cover, spacing, potential)?;
    let mag = lowest_eigenpairs_with(magnetic, 3, opts)?;
    let anti = lowest_eigenpairs_with(&deck_block(&lifted, DeckParity::Antisymmetric), 3, opts)?;
    let zero = lowest_eigenpairs_with(zero_flux, 3, opts)?;
    let sym = lowest_eigenpairs_with(&deck_block(&lifted, DeckParity::Symmetric), 3, opts)?;
    let mut anti_err = 0.0f64;
    let mut sym_err = 0.0f64;
    for i in 0..3 {
        anti_err = anti_err.max(rel_diff(mag.eigenvalues[i], anti.eigenvalues[i]));
        sym_err = sym_err.max(rel_diff(zero.eigenvalues[i], sym.eigenvalues[i]));
        rows.push(CoverRow {
            case: format!("{case} antisymmetric"),
            index: i + 1,
            reference: mag.eigenvalues[i],
            lifted: anti.eigenvalues[i],
        });
        rows.push(CoverRow {
            case: format!("{case} symmetric"),
            index: i + 1,
            reference: zero.eigenvalues[i],
            lifted: sym.eigenvalues[i],
        });
    }
    let mut resid = 0.0f64;
    for (lambda, u) in mag.eigenvalues.iter().zip(&mag.eigenvectors) {
        resid = resid.max(intertwining_residual(&lifted, *lambda, &lift_l(u, &theta)));
    }
    Ok((anti_err, sym_err, resid, 10.0 * mag.residual_tolerance))
}

/// `K² = Id` and `KH = HK` on seeded random vectors.
pub fn k_algebra_errors(
    graph: &Graph,
    field: &LinkField,
    h: &HamiltonianMatrix,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let k = KOperator::new(graph, field)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hnorm = h.norm_estimate();
    let (mut square, mut commute) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let u: Vec<Complex64> = (0..h.dim()).map(|_| Complex64::sample(&mut rng)).collect();
        let nu = norm(&u);
        let kku = k.apply(&k.apply(&u));
        square = square.max(norm(&kku.iter().zip(&u).map(|(a, b)| a - b).collect::<Vec<_>>()) / nu);
        let khu = k.apply(&h.apply(&u));
        let hku = h.apply(&k.apply(&u));
        let diff: Vec<Complex64> = khu.iter().zip(&hku).map(|(a, b)| a - b).collect();
        commute = commute.max(norm(&diff) / (hnorm * nu));
    }
    Ok((square, commute))
}

pub fn run_cover_equivalence(cfg: &ExperimentConfig, out: &Path) -> Result<(Vec<CoverRow>, Vec<Verdict>)> {
    ensure_dir(out)?;
    let opts = cfg.solver.options();
    let mut rows = Vec::new();
    let mut verdicts = Vec::new();

    let n = cfg.circle.cover_n;
    let graph = Graph::cycle(n);
    let field = circle_field(n, 0.5);
    let zero_pot = PotentialField::zero(n);
    let (a, s, r, tol) = compare_cover(
        "circle",
        &graph,
        circle_spacing(n),
        &field,
        &assemble_circle(n, 0.5)?,
        &assemble_circle(n, 0.0)?,
        &zero_pot,
        &opts,
        &mut rows,
    )?;
    verdicts.push(Verdict::new(
        "circle: antisymmetric cover spectrum equals the half-flux spectrum",
        a <= 1e-8 && s <= 1e-8,
        format!("n={n}: antisymmetric rel diff {a:.2e}, symmetric vs zero flux {s:.2e}"),
    ));
    verdicts.push(Verdict::new(
        "circle: lift maps eigenvectors to cover eigenvectors",
        r <= tol,
        format!("max intertwining residual {r:.2e} (limit {tol:.2e})"),
    ));

    let problem = Problem::new(cfg, &cfg.domain)?;
    let flux = cfg.half_flux();
    let (field, magnetic) = problem.magnetic(&flux)?;
    let (_, zero_flux) = problem.magnetic(&vec![0.0; cfg.hole_count()])?;
    let (a, s, r, tol) = compare_cover(
        "domain",
        problem.grid.graph(),
        problem.grid.spacing(),
        &field,
        &magnetic,
        &zero_flux,
        &problem.potential,
        &opts,
        &mut rows,
    )?;
    verdicts.push(Verdict::new(
        "domain: antisymmetric cover spectrum equals the half-flux spectrum",
        a <= 1e-8 && s <= 1e-8,
        format!("antisymmetric rel diff {a:.2e}, symmetric vs zero flux {s:.2e}"),
    ));
    verdicts.push(Verdict::new(
        "domain: lift maps eigenvectors to cover eigenvectors",
        r <= tol,
        format!("max intertwining residual {r:.2e} (limit {tol:.2e})"),
    ));

    // Integer flux: two disjoint copies of the base.
    let zero_field = LinkField::zero(problem.grid.graph());
    let trivial = build_cover(problem.grid.graph(), &zero_field)?;
    let lifted = assemble_lifted(&trivial, problem.grid.spacing(), &problem.potential)?;
    let base = lowest_eigenpairs_with(&zero_flux, 3, &opts)?;
    let doubled = lowest_eigenpairs_with(&lifted, 6, &opts)?;
    let err = (0..6).map(|i| rel_diff(base.eigenvalues[i / 2], doubled.eigenvalues[i])).fold(0.0, f64::max);
    verdicts.push(Verdict::new(
        "integer flux: cover is two copies of the base",
        trivial.is_trivial() && err <= 1e-8,
        format!("disconnected={}, max rel diff {err:.2e}", trivial.is_trivial()),
    ));

    let (square, commute) = k_algebra_errors(problem.grid.graph(), &field, &magnetic, 20, cfg.solver.seed)?;
    verdicts.push(Verdict::new(
        "antilinear symmetry K: K² = Id and KH = HK",
        square <= 1e-12 && commute <= 1e-10,
        format!("max ‖K²u−u‖/‖u‖ = {square:.2e}, max ‖(KH−HK)u‖/(‖H‖‖u‖) = {commute:.2e} over 20 vectors"),
    ));

    let mut w = csv_writer(&out.join("cover.csv"))?;
    w.write_record(["case", "index", "reference", "lifted", "rel_diff"]).map_err(csv_err)?;
    for r in &rows {
        w.write_record([
            r.case.clone(),
            r.index.to_string(),
            format!("{:.15e}", r.reference),
            format!("{:.15e}", r.lifted),
            format!("{:.3e}", rel_diff(r.reference, r.lifted)),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok((rows, verdicts))
}

// ---------------------------------------------------------------------------
// nodal topology

pub fn run_nodal(cfg: &ExperimentConfig, out: &Path) -> Result<(Vec<SlitReport>, Vec<Verdict>)> {
    ensure_dir(out)?;
    let problem = Problem::new(cfg, &cfg.domain)?;
    let k = problem.grid.hole_count();
    let ground = ground_state(&problem, cfg)?;
    let cover = build_cover(problem.grid.graph(), &ground.field)?;
    let theta = build_theta(&cover, &ground.field)?;
    let kop = KOperator::new(problem.grid.graph(), &ground.field)?;

    let mut verdicts = Vec::new();
    let mut reports = Vec::new();
    let mut json = String::new();
    let mut all_pass = true;
    let mut equivalence = true;
    let mut exclusion = true;
    let mut worst_fixed = 0.0f64;
    let mut worst_spread = 0.0f64;
    for (i, u) in ground.reps.iter().enumerate() {
        let ku = kop.apply(u);
        worst_fixed = worst_fixed.max(norm(&ku.iter().zip(u).map(|(a, b)| a - b).collect::<Vec<_>>()));
        let (f, spread) = real_lift(u, &theta);
        worst_spread = worst_spread.max(spread);
        let nodal = extract_nodal_set(&f, &cover, &problem.grid)?;
        let report = topology_report(&nodal, &problem.grid, &cover);
        all_pass &= report.passes();
        equivalence &= report.passes() == (report.cover_domain_count == 2);
        for drop in 0..nodal.polylines.len() {
            let sub = topology_report(&nodal.without_polyline(drop, &problem.grid), &problem.grid, &cover);
            exclusion &= !sub.parity_ok;
            equivalence &= sub.passes() == (sub.cover_domain_count == 2);
        }
        json.push_str(&report.to_json_line());
        json.push('\n');
        nodal.write_svg(&problem.grid, fs::File::create(out.join(format!("nodal_{i}.svg")))?)?;
        nodal.write_polylines(fs::File::create(out.join(format!("nodal_{i}.txt")))?)?;
        reports.push(report);
    }
    fs::write(out.join("nodal_reports.jsonl"), json)?;

    verdicts.push(Verdict::new(
        "ground representatives are K-fixed with real lifts",
        worst_fixed <= 1e-8 && worst_spread <= 1e-8,
        format!("max ‖Ku−u‖ = {worst_fixed:.2e}, max imaginary spread of the lift {worst_spread:.2e}"),
    ));
    verdicts.push(Verdict::new(
        "half-flux ground states slit the domain",
        all_pass,
        reports.iter().map(|r| format!("n={} cover domains={}", r.n_lines, r.cover_domain_count)).collect::<Vec<_>>().join("; "),
    ));
    verdicts.push(Verdict::new(
        "slitting holds iff the cover minus the nodal set has two components",
        equivalence,
        "checked on every representative and every sub-collection".into(),
    ));
    verdicts.push(Verdict::new(
        "no proper sub-collection of nodal lines slits",
        exclusion,
        "removing any line breaks the parity condition".into(),
    ));
    verdicts.push(Verdict::new(
        "ground multiplicity at most k + 1",
        ground.multiplicity <= k + 1,
        format!("m={} with k={k}", ground.multiplicity),
    ));
    if ground.multiplicity == 2 {
        let check = degenerate_pair_check(&ground.reps[0], &ground.reps[1], 2, &problem.grid, &cover, &theta)?;
        verdicts.push(Verdict::new(
            "independent ground states have disjoint nodal sets",
            check.passes(),
            format!("disjoint={}, min |u1 + i u2|/max = {:.3e}", check.disjoint, check.min_ratio),
        ));
    }
    Ok((reports, verdicts))
}

// ---------------------------------------------------------------------------

pub fn write_verdicts(out: &Path, verdicts: &[Verdict]) -> Result<()> {
    ensure_dir(out)?;
    let text: String = verdicts.iter().map(|v| v.line() + "\n").collect();
    fs::write(out.join("verdicts.txt"), text)?;
    Ok(())
}

pub fn run_all(cfg: &ExperimentConfig, out: &Path, refine: bool) -> Result<Vec<Verdict>> {
    let mut verdicts = run_flux_sweep(cfg, out)?.1;
    verdicts.extend(run_circle_check(cfg, out)?.1);
    verdicts.extend(run_slit_infimum(cfg, out, refine)?.1);
    verdicts.extend(run_multiplicity_experiment(cfg, out)?);
    verdicts.extend(run_cover_equivalence(cfg, out)?.1);
    verdicts.extend(run_nodal(cfg, out)?.1);
    Ok(verdicts)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"
name = "small"
[domain]
spacing = 0.1
outer = { shape = "disk", center = [0.0, 0.0], radius = 1.0 }
holes = [{ shape = "disk", center = [0.0, 0.0], radius = 0.3 }]
[sweep]
step = 0.25
"#;

    #[test]
    fn parses_minimal_config() {
        let cfg = ExperimentConfig::from_toml(SMALL).unwrap();
        assert_eq!(cfg.sweep.samples(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(cfg.solver, SolverSpec::default());
        assert_eq!(cfg.half_flux(), vec![0.5]);
    }

    #[test]
    fn rejects_bad_step_and_flux() {
        let bad = SMALL.replace("step = 0.25", "step = 0.0");
        assert!(matches!(ExperimentConfig::from_toml(&bad), Err(Error::Config(_))));
        let bad = format!("half_flux = [1.0]\n{SMALL}");
        assert!(matches!(ExperimentConfig::from_toml(&bad), Err(Error::Config(_))));
        let bad = SMALL.replace("[sweep]", "[sweep]\nbogus = 1");
        assert!(matches!(ExperimentConfig::from_toml(&bad), Err(Error::Config(_))));
    }

    #[test]
    fn missing_table_is_config_error() {
        let text = format!("{SMALL}\n[potential]\nkind = \"table\"\npath = \"nope.txt\"\n");
        assert!(matches!(ExperimentConfig::from_toml(&text), Err(Error::Config(_))));
    }

    #[test]
    fn exact_circle_ground() {
        assert_eq!(circle_exact_ground(0.25), 0.0625);
        assert_eq!(circle_exact_ground(0.5), 0.25);
        assert!((circle_exact_ground(0.9) - 0.01).abs() < 1e-15);
    }

    #[test]
    fn small_sweep_verdicts_pass() {
        let cfg = ExperimentConfig::from_toml(SMALL).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let (rows, verdicts) = run_flux_sweep(&cfg, dir.path()).unwrap();
        assert_eq!(rows.len(), 5);
        assert!(verdicts.iter().all(Verdict::passed), "{verdicts:?}");
        assert!(dir.path().join("sweep.csv").is_file());
    }
}
