//! Sweep plans and their runners.
//!
//! Each plan is a serde type, so it can be read from TOML and embedded
//! verbatim in the header of its output. Points run on the rayon pool and
//! are collected in input order, which keeps the output independent of the
//! number of threads.

use heatchain_core::entanglement::entanglement_cell;
use heatchain_core::{
    classical_current_analytic, extract_observables, fit_power_law, steady_state, ChainSpec, EntanglementSearch,
    Error as ModelError, PowerLawFit, RegionCell, RegionMap, SolverMethod, SolverOptions,
};
use log::{info, warn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{BathConfig, ChainConfig, UniformChain};
use crate::error::{config_error, AppError, Result};
use crate::output::Table;

/// Largest quantum chain the sweeps run without a warning.
pub const QUANTUM_SITE_SOFT_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodName {
    Auto,
    Dense,
    Sparse,
}

/// Numerical settings of the steady-state solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub method: MethodName,
    pub residual_tolerance: f64,
    pub rank_tolerance: f64,
    pub max_iterations: usize,
    pub restart: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let d = SolverOptions::default();
        Self {
            method: MethodName::Auto,
            residual_tolerance: d.residual_tolerance,
            rank_tolerance: d.rank_tolerance,
            max_iterations: d.max_iterations,
            restart: d.restart,
        }
    }
}

impl SolverConfig {
    pub fn options(&self) -> SolverOptions {
        SolverOptions {
            method: match self.method {
                MethodName::Auto => SolverMethod::Auto,
                MethodName::Dense => SolverMethod::DenseNullspace,
                MethodName::Sparse => SolverMethod::SparseIterative,
            },
            residual_tolerance: self.residual_tolerance,
            rank_tolerance: self.rank_tolerance,
            max_iterations: self.max_iterations,
            restart: self.restart,
        }
    }
}

/// Heat current drawn from the left bath in the steady state of `spec`.
pub fn quantum_current(spec: &ChainSpec, solver: &SolverConfig) -> heatchain_core::Result<f64> {
    let rho = steady_state(spec, &solver.options())?;
    Ok(extract_observables(&rho, spec)?.heat_current)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Quantum,
    Classical,
}

/// One point of a size, temperature or dephasing sweep. Failed points keep
/// their row with an empty current and the error in `status`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurrentRow {
    pub model: Model,
    pub n_sites: usize,
    /// Empty for the classical model.
    pub dephasing: Option<f64>,
    /// Empty when the left bath is given by occupation.
    pub t_left: Option<f64>,
    pub current: Option<f64>,
    pub status: String,
}

#[derive(Debug, Clone, Copy)]
struct Point {
    model: Model,
    n_sites: usize,
    dephasing: Option<f64>,
    t_left: Option<f64>,
}

fn run_points(chain: &UniformChain, hop_rate: Option<f64>, solver: &SolverConfig, points: &[Point]) -> Vec<CurrentRow> {
    points
        .par_iter()
        .map(|p| {
            let chain = match p.t_left {
                Some(t) => chain.with_left_temperature(t),
                None => chain.clone(),
            };
            let current = match p.model {
                Model::Quantum => chain
                    .spec(p.n_sites, p.dephasing.unwrap_or(0.0))
                    .and_then(|spec| Ok(quantum_current(&spec, solver)?)),
                Model::Classical => hop_rate
                    .ok_or_else(|| config_error("classical points need hop_rate"))
                    .and_then(|v| chain.classical(p.n_sites, v))
                    .map(|spec| classical_current_analytic(&spec)),
            };
            if let Err(e) = &current {
                warn!("{:?} N={} failed: {e}", p.model, p.n_sites);
            }
            CurrentRow {
                model: p.model,
                n_sites: p.n_sites,
                dephasing: p.dephasing,
                t_left: p.t_left.or(chain.left.temperature),
                status: current.as_ref().map_or_else(|e| e.to_string(), |_| "ok".to_owned()),
                current: current.ok(),
            }
        })
        .collect()
}

fn require_nonempty<T>(values: &[T], what: &str) -> Result<()> {
    if values.is_empty() {
        Err(config_error(format!("{what} must not be empty")))
    } else {
        Ok(())
    }
}

fn check_quantum_sizes(sizes: &[usize]) -> Result<()> {
    if sizes.contains(&0) {
        return Err(config_error("chain sizes must be at least 1"));
    }
    if let Some(&n) = sizes.iter().find(|&&n| n > QUANTUM_SITE_SOFT_CAP) {
        warn!("quantum chain with {n} sites: expect a long, memory-hungry solve");
    }
    Ok(())
}

fn classical_points(sizes: &[usize], hop_rate: Option<f64>, t_left: Option<f64>) -> Result<Vec<Point>> {
    if !sizes.is_empty() && hop_rate.is_none() {
        return Err(config_error("classical sizes given without hop_rate"));
    }
    if sizes.iter().any(|&n| n < 2) {
        return Err(config_error("classical chains need at least 2 sites"));
    }
    Ok(sizes
        .iter()
        .map(|&n| Point {
            model: Model::Classical,
            n_sites: n,
            dephasing: None,
            t_left,
        })
        .collect())
}

/// Current against chain length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SizeSweepPlan {
    pub chain: UniformChain,
    pub quantum_sizes: Vec<usize>,
    /// One quantum series per value.
    pub dephasing: Vec<f64>,
    #[serde(default)]
    pub classical_sizes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hop_rate: Option<f64>,
    #[serde(default)]
    pub solver: SolverConfig,
}

impl SizeSweepPlan {
    pub fn run(&self) -> Result<Vec<CurrentRow>> {
        if self.quantum_sizes.is_empty() && self.classical_sizes.is_empty() {
            return Err(config_error("size sweep has no sizes"));
        }
        if !self.quantum_sizes.is_empty() {
            require_nonempty(&self.dephasing, "dephasing list")?;
        }
        check_quantum_sizes(&self.quantum_sizes)?;
        let mut points = Vec::new();
        for &g in &self.dephasing {
            for &n in &self.quantum_sizes {
                points.push(Point {
                    model: Model::Quantum,
                    n_sites: n,
                    dephasing: Some(g),
                    t_left: None,
                });
            }
        }
        points.extend(classical_points(&self.classical_sizes, self.hop_rate, None)?);
        Ok(run_points(&self.chain, self.hop_rate, &self.solver, &points))
    }
}

/// Current against the left bath temperature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemperaturePlan {
    /// The left bath temperature is replaced point by point.
    pub chain: UniformChain,
    pub temperatures: Vec<f64>,
    #[serde(default)]
    pub quantum_sizes: Vec<usize>,
    #[serde(default)]
    pub dephasing: Vec<f64>,
    #[serde(default)]
    pub classical_sizes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hop_rate: Option<f64>,
    #[serde(default)]
    pub solver: SolverConfig,
}

impl TemperaturePlan {
    pub fn run(&self) -> Result<Vec<CurrentRow>> {
        require_nonempty(&self.temperatures, "temperature list")?;
        if self.quantum_sizes.is_empty() && self.classical_sizes.is_empty() {
            return Err(config_error("temperature sweep has no sizes"));
        }
        if !self.quantum_sizes.is_empty() {
            require_nonempty(&self.dephasing, "dephasing list")?;
        }
        check_quantum_sizes(&self.quantum_sizes)?;
        let mut points = Vec::new();
        for &n in &self.quantum_sizes {
            for &g in &self.dephasing {
                for &t in &self.temperatures {
                    points.push(Point {
                        model: Model::Quantum,
                        n_sites: n,
                        dephasing: Some(g),
                        t_left: Some(t),
                    });
                }
            }
        }
        for &n in &self.classical_sizes {
            for &t in &self.temperatures {
                points.extend(classical_points(&[n], self.hop_rate, Some(t))?);
            }
        }
        Ok(run_points(&self.chain, self.hop_rate, &self.solver, &points))
    }
}

/// Power-law fit of one series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRow {
    pub dephasing: f64,
    pub n_min: usize,
    pub n_max: usize,
    pub n_points: usize,
    pub alpha: Option<f64>,
    pub prefactor: Option<f64>,
    pub regression_coefficient: Option<f64>,
    pub status: String,
}

/// Size sweeps of the quantum chain at several dephasing rates, each fitted
/// to a power law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DephasingPlan {
    pub chain: UniformChain,
    pub sizes: Vec<usize>,
    pub dephasing: Vec<f64>,
    #[serde(default)]
    pub solver: SolverConfig,
}

impl DephasingPlan {
    pub fn run(&self) -> Result<(Vec<CurrentRow>, Vec<FitRow>)> {
        require_nonempty(&self.sizes, "size list")?;
        let rows = SizeSweepPlan {
            chain: self.chain.clone(),
            quantum_sizes: self.sizes.clone(),
            dephasing: self.dephasing.clone(),
            classical_sizes: Vec::new(),
            hop_rate: None,
            solver: self.solver.clone(),
        }
        .run()?;
        let fits = self
            .dephasing
            .iter()
            .map(|&g| {
                let pts: Vec<(f64, f64)> = rows
                    .iter()
                    .filter(|r| r.dephasing == Some(g))
                    .filter_map(|r| r.current.map(|j| (r.n_sites as f64, j)))
                    .collect();
                fit_row(g, &pts)
            })
            .collect();
        Ok((rows, fits))
    }
}

fn fit_row(dephasing: f64, pts: &[(f64, f64)]) -> FitRow {
    let sizes = pts.iter().map(|p| p.0 as usize);
    let fit = fit_power_law(pts);
    FitRow {
        dephasing,
        n_min: sizes.clone().min().unwrap_or(0),
        n_max: sizes.max().unwrap_or(0),
        n_points: pts.len(),
        alpha: fit.as_ref().ok().map(|f| f.alpha),
        prefactor: fit.as_ref().ok().map(|f| f.prefactor),
        regression_coefficient: fit.as_ref().ok().map(|f| f.regression_coefficient),
        status: fit.map_or_else(|e| e.to_string(), |_| "ok".to_owned()),
    }
}

/// Ensemble of random chains, each solved with and without dephasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisorderPlan {
    pub n_sites: usize,
    pub samples: usize,
    pub seed: u64,
    pub dephasing: f64,
    /// Temperatures convert to occupations at the energy of the terminal site.
    pub left: BathConfig,
    pub right: BathConfig,
    pub energy_range: [f64; 2],
    pub coupling_range: [f64; 2],
    /// Redraws allowed per sample before the run is abandoned.
    #[serde(default = "default_max_redraws")]
    pub max_redraws: usize,
    #[serde(default)]
    pub solver: SolverConfig,
}

fn default_max_redraws() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisorderRow {
    pub sample: usize,
    pub redraws: usize,
    /// `;`-separated draws.
    pub site_energies: String,
    pub couplings: String,
    pub current_coherent: f64,
    pub current_dephased: f64,
    pub reduced: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisorderSummary {
    pub samples: usize,
    pub dephasing: f64,
    pub reduced_count: usize,
    pub fraction_reduced: f64,
    /// Mean coherent current over the ensemble.
    pub mean_current: f64,
    /// Mean coherent current over samples that dephasing helps.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_current_helped: Option<f64>,
    /// Helped samples carry a below-average coherent current (true when
    /// there are none).
    pub conditional_holds: bool,
    pub total_redraws: usize,
}

fn joined(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(";")
}

fn uniform_draws(rng: &mut ChaCha8Rng, count: usize, [lo, hi]: [f64; 2]) -> Vec<f64> {
    (0..count).map(|_| rng.random_range(lo..=hi)).collect()
}

impl DisorderPlan {
    fn validate(&self) -> Result<()> {
        if self.n_sites < 2 {
            return Err(config_error("disorder needs at least 2 sites"));
        }
        if self.samples == 0 {
            return Err(config_error("disorder needs at least one sample"));
        }
        for (name, [lo, hi]) in [
            ("energy_range", self.energy_range),
            ("coupling_range", self.coupling_range),
        ] {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(config_error(format!("{name} must be a finite [low, high] pair")));
            }
        }
        Ok(())
    }

    /// Sample `index` draws from its own stream of the seeded generator, so
    /// samples are independent of scheduling.
    pub fn sample(&self, index: usize) -> Result<DisorderRow> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        let mut redraws = 0;
        loop {
            let energies = uniform_draws(&mut rng, self.n_sites, self.energy_range);
            let couplings = uniform_draws(&mut rng, self.n_sites - 1, self.coupling_range);
            match self.solve_pair(&energies, &couplings) {
                Ok((coherent, dephased)) => {
                    return Ok(DisorderRow {
                        sample: index,
                        redraws,
                        site_energies: joined(&energies),
                        couplings: joined(&couplings),
                        current_coherent: coherent,
                        current_dephased: dephased,
                        reduced: dephased.abs() < coherent.abs(),
                    });
                }
                Err(AppError::Model(e @ (ModelError::DegenerateNullspace { .. } | ModelError::InvalidSpec(_)))) => {
                    redraws += 1;
                    info!("sample {index}: redraw {redraws} ({e})");
                    if redraws > self.max_redraws {
                        return Err(config_error(format!(
                            "sample {index}: no valid chain after {redraws} draws"
                        )));
                    }
                }
                Err(e) => return Err(e),
            }
        }
    }

    fn solve_pair(&self, energies: &[f64], couplings: &[f64]) -> Result<(f64, f64)> {
        let config = ChainConfig {
            n_sites: None,
            omega: None,
            site_energies: Some(energies.to_vec()),
            g: None,
            couplings: Some(couplings.to_vec()),
            dephasing: 0.0,
            left: self.left.clone(),
            right: self.right.clone(),
        };
        let coherent = config.to_spec()?;
        let dephased = coherent.with_dephasing(self.dephasing)?;
        Ok((
            quantum_current(&coherent, &self.solver)?,
            quantum_current(&dephased, &self.solver)?,
        ))
    }

    pub fn run(&self) -> Result<(Vec<DisorderRow>, DisorderSummary)> {
        self.validate()?;
        let rows = (0..self.samples)
            .into_par_iter()
            .map(|i| self.sample(i))
            .collect::<Result<Vec<_>>>()?;
        let summary = summarize(self.dephasing, &rows);
        if summary.total_redraws > 0 {
            info!("{} redraws over {} samples", summary.total_redraws, rows.len());
        }
        Ok((rows, summary))
    }
}

pub fn summarize(dephasing: f64, rows: &[DisorderRow]) -> DisorderSummary {
    let mean = |it: &mut dyn Iterator<Item = f64>| {
        let (sum, count) = it.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
        (count > 0).then(|| sum / count as f64)
    };
    let reduced_count = rows.iter().filter(|r| r.reduced).count();
    let mean_current = mean(&mut rows.iter().map(|r| r.current_coherent)).unwrap_or(f64::NAN);
    let mean_current_helped = mean(&mut rows.iter().filter(|r| !r.reduced).map(|r| r.current_coherent));
    DisorderSummary {
        samples: rows.len(),
        dephasing,
        reduced_count,
        fraction_reduced: reduced_count as f64 / rows.len() as f64,
        mean_current,
        mean_current_helped,
        conditional_holds: mean_current_helped.is_none_or(|m| m < mean_current),
        total_redraws: rows.iter().map(|r| r.redraws).sum(),
    }
}

/// Search settings mirrored from [`EntanglementSearch`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    pub g_range: [f64; 2],
    pub gamma_range: [f64; 2],
    pub grid_points: usize,
    pub refine: bool,
    pub threshold: f64,
    pub omega: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        let d = EntanglementSearch::default();
        Self {
            g_range: [d.g_range.0, d.g_range.1],
            gamma_range: [d.gamma_range.0, d.gamma_range.1],
            grid_points: d.grid_points,
            refine: d.refine,
            threshold: d.threshold,
            omega: d.omega,
        }
    }
}

impl SearchConfig {
    pub fn search(&self) -> EntanglementSearch {
        EntanglementSearch {
            g_range: (self.g_range[0], self.g_range[1]),
            gamma_range: (self.gamma_range[0], self.gamma_range[1]),
            grid_points: self.grid_points,
            refine: self.refine,
            threshold: self.threshold,
            omega: self.omega,
        }
    }
}

/// Two-site scan over bath populations `(s₁, s_N)` with equal effective rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionPlan {
    /// Grid of populations in `[0, 1/2)`, used on both axes.
    pub s_values: Vec<f64>,
    #[serde(default)]
    pub search: SearchConfig,
}

impl RegionPlan {
    /// `0, step, 2·step, …` below 1/2.
    pub fn grid(step: f64) -> Result<Vec<f64>> {
        if !(step > 0.0 && step < 0.5) {
            return Err(config_error("grid step must lie in (0, 0.5)"));
        }
        let count = (0.5 / step - 1e-9).ceil() as usize;
        Ok((0..count).map(|k| k as f64 * step).collect())
    }

    pub fn run(&self) -> Result<RegionMap> {
        require_nonempty(&self.s_values, "s grid")?;
        let search = self.search.search();
        let pairs: Vec<(f64, f64)> = self
            .s_values
            .iter()
            .flat_map(|&a| self.s_values.iter().map(move |&b| (a, b)))
            .collect();
        let cells = pairs
            .par_iter()
            .map(|&(a, b)| entanglement_cell(a, b, &search))
            .collect::<heatchain_core::Result<Vec<RegionCell>>>()?;
        Ok(RegionMap::from_cells(self.s_values.clone(), cells)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionRow {
    pub s_left: f64,
    pub s_right: f64,
    pub entangled: bool,
    pub max_negativity: f64,
    pub best_g: f64,
    pub best_gamma: f64,
}

pub fn region_rows(map: &RegionMap) -> Vec<RegionRow> {
    map.cells()
        .iter()
        .map(|c| RegionRow {
            s_left: c.s_left,
            s_right: c.s_right,
            entangled: c.entangled,
            max_negativity: c.max_negativity,
            best_g: c.best_g,
            best_gamma: c.best_gamma,
        })
        .collect()
}

/// Where the entangled cells of a region map sit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegionShape {
    pub entangled_cells: usize,
    /// No entangled cell has `s₁ = s_N`.
    pub diagonal_empty: bool,
    /// With the colder population fixed, raising the hotter one keeps a cell
    /// entangled.
    pub closed_towards_hotter: bool,
    /// The map is unchanged by swapping the two baths.
    pub symmetric: bool,
}

impl RegionShape {
    pub fn of(map: &RegionMap) -> Self {
        let m = map.s_values().len();
        let ent = |i: usize, j: usize| map.cell(i, j).entangled;
        let mut shape = Self {
            entangled_cells: map.entangled_count(),
            diagonal_empty: true,
            closed_towards_hotter: true,
            symmetric: true,
        };
        for i in 0..m {
            for j in 0..m {
                if ent(i, j) != ent(j, i) {
                    shape.symmetric = false;
                }
                if !ent(i, j) {
                    continue;
                }
                if i == j {
                    shape.diagonal_empty = false;
                }
                let (cold, hot) = (i.min(j), i.max(j));
                let oriented = |h: usize| if i <= j { ent(cold, h) } else { ent(h, cold) };
                if !(hot..m).all(oriented) {
                    shape.closed_towards_hotter = false;
                }
            }
        }
        shape
    }
}

/// Row filter `column=value`; numeric values compare as numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Filter {
    pub column: String,
    pub value: String,
}

impl std::str::FromStr for Filter {
    type Err = AppError;

    fn from_str(s: &str) -> Result<Self> {
        let (column, value) = s
            .split_once('=')
            .ok_or_else(|| config_error(format!("filter `{s}` is not of the form column=value")))?;
        Ok(Self {
            column: column.trim().to_owned(),
            value: value.trim().to_owned(),
        })
    }
}

fn cell_matches(cell: &str, wanted: &str) -> bool {
    match (cell.parse::<f64>(), wanted.parse::<f64>()) {
        (Ok(a), Ok(b)) => a == b,
        _ => cell == wanted,
    }
}

/// Power-law fit of column `y` against column `x` over the rows passing every
/// filter. Rows with an empty `y` are skipped.
pub fn fit_table(table: &Table, x: &str, y: &str, filters: &[Filter]) -> Result<PowerLawFit> {
    let (xi, yi) = (table.column_index(x)?, table.column_index(y)?);
    let filters = filters
        .iter()
        .map(|f| Ok((table.column_index(&f.column)?, f.value.as_str())))
        .collect::<Result<Vec<_>>>()?;
    let parse = |s: &str, col: &str| {
        s.parse::<f64>()
            .map_err(|_| config_error(format!("non-numeric value `{s}` in column `{col}`")))
    };
    let mut pts = Vec::new();
    for row in &table.rows {
        if !filters.iter().all(|&(c, v)| cell_matches(&row[c], v)) || row[yi].is_empty() {
            continue;
        }
        pts.push((parse(&row[xi], x)?, parse(&row[yi], y)?));
    }
    Ok(fit_power_law(&pts)?)
}
