use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use heatchain::config::{BathConfig, ChainConfig, UniformChain};
use heatchain::experiments::{
    region_rows, DephasingPlan, DisorderPlan, Filter, MethodName, RegionPlan, RegionShape, SearchConfig, SizeSweepPlan,
    SolverConfig, TemperaturePlan,
};
use heatchain::output::{dense_triplets, write_csv, write_header, write_triplets, Header, Table};
use heatchain::plot::{plot_script, PlotKind};
use heatchain::{AppError, Result};
use heatchain_core::{assemble_liouvillian, extract_observables, solve_steady_state_with_info};
use log::info;
use serde::{Deserialize, Serialize};

/// Steady-state heat transport through boundary-driven two-level chains.
///
/// Physical parameters come from flags or from the TOML file given with
/// `--config`; flags win. Every physical parameter must be supplied.
#[derive(Parser, Debug)]
#[command(name = "heatchain", version)]
struct Cli {
    /// TOML file with a `[chain]` table, a `[solver]` table and one table per subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one chain and print its currents, populations and coherences.
    Solve(SolveArgs),
    /// Current against chain length.
    SizeSweep(SizeArgs),
    /// Current against left bath temperature.
    TempSweep(TempArgs),
    /// Size sweeps at several dephasing rates with power-law fits.
    DephasingSweep(DephasingArgs),
    /// Random chains solved with and without dephasing.
    Disorder(DisorderArgs),
    /// Two-site entanglement over the plane of bath populations.
    EntangleRegion(RegionArgs),
    /// Fit J = c·N^(α−1) to two columns of a CSV file.
    Fit(FitArgs),
    /// Write a matplotlib script for a sweep CSV.
    PlotScript(PlotArgs),
}

/// Overlays command-line values on values read from the config file.
trait Overlay {
    fn overlay(self, file: Self) -> Self;
}

macro_rules! overlay {
    ($ty:ty { $($field:ident),* $(,)? }) => {
        impl Overlay for $ty {
            fn overlay(self, file: Self) -> Self {
                Self { $($field: self.$field.or(file.$field)),* }
            }
        }
    };
}

#[derive(Args, Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields)]
struct ChainArgs {
    /// Number of sites of a uniform chain.
    #[arg(long)]
    n_sites: Option<usize>,
    /// Site energy of a uniform chain.
    #[arg(long)]
    omega: Option<f64>,
    /// Coupling of a uniform chain.
    #[arg(long)]
    g: Option<f64>,
    /// Comma-separated site energies (instead of --omega).
    #[arg(long, value_delimiter = ',')]
    site_energies: Option<Vec<f64>>,
    /// Comma-separated couplings (instead of --g).
    #[arg(long, value_delimiter = ',')]
    couplings: Option<Vec<f64>>,
    #[command(flatten)]
    #[serde(flatten)]
    baths: BathArgs,
}

impl Overlay for ChainArgs {
    fn overlay(self, file: Self) -> Self {
        Self {
            n_sites: self.n_sites.or(file.n_sites),
            omega: self.omega.or(file.omega),
            g: self.g.or(file.g),
            site_energies: self.site_energies.or(file.site_energies),
            couplings: self.couplings.or(file.couplings),
            baths: self.baths.overlay(file.baths),
        }
    }
}

#[derive(Args, Deserialize, Debug, Default, Clone)]
struct BathArgs {
    /// Left bath interaction rate Γ₁.
    #[arg(long)]
    rate_left: Option<f64>,
    /// Left bath temperature.
    #[arg(long)]
    t_left: Option<f64>,
    /// Left bath occupation (instead of --t-left).
    #[arg(long)]
    n_left: Option<f64>,
    #[arg(long)]
    rate_right: Option<f64>,
    #[arg(long)]
    t_right: Option<f64>,
    #[arg(long)]
    n_right: Option<f64>,
}

overlay!(BathArgs {
    rate_left,
    t_left,
    n_left,
    rate_right,
    t_right,
    n_right
});

fn missing(what: &str) -> AppError {
    AppError::Config(format!(
        "missing parameter: {what} (give it as a flag or in the config file)"
    ))
}

fn bath(rate: Option<f64>, t: Option<f64>, n: Option<f64>, side: &str) -> Result<BathConfig> {
    Ok(BathConfig {
        rate: rate.ok_or_else(|| missing(&format!("--rate-{side}")))?,
        temperature: t,
        occupation: n,
    })
}

impl BathArgs {
    fn baths(&self) -> Result<(BathConfig, BathConfig)> {
        Ok((
            bath(self.rate_left, self.t_left, self.n_left, "left")?,
            bath(self.rate_right, self.t_right, self.n_right, "right")?,
        ))
    }
}

impl ChainArgs {
    fn chain(&self, dephasing: f64) -> Result<ChainConfig> {
        let (left, right) = self.baths.baths()?;
        Ok(ChainConfig {
            n_sites: self.n_sites,
            omega: self.omega,
            site_energies: self.site_energies.clone(),
            g: self.g,
            couplings: self.couplings.clone(),
            dephasing,
            left,
            right,
        })
    }

    fn uniform(&self) -> Result<UniformChain> {
        if self.site_energies.is_some() || self.couplings.is_some() || self.n_sites.is_some() {
            return Err(AppError::Config(
                "sweeps take a uniform chain: give --omega and --g, sizes come from the sweep".into(),
            ));
        }
        let (left, right) = self.baths.baths()?;
        Ok(UniformChain {
            omega: self.omega.ok_or_else(|| missing("--omega"))?,
            g: self.g.ok_or_else(|| missing("--g"))?,
            left,
            right,
        })
    }
}

#[derive(Args, Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields)]
struct SolverArgs {
    /// auto, dense or sparse.
    #[arg(long, value_parser = parse_method)]
    method: Option<MethodName>,
    #[arg(long)]
    residual_tolerance: Option<f64>,
    #[arg(long)]
    max_iterations: Option<usize>,
}

overlay!(SolverArgs {
    method,
    residual_tolerance,
    max_iterations
});

fn parse_method(s: &str) -> std::result::Result<MethodName, String> {
    match s {
        "auto" => Ok(MethodName::Auto),
        "dense" => Ok(MethodName::Dense),
        "sparse" => Ok(MethodName::Sparse),
        _ => Err(format!("unknown method `{s}`")),
    }
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        let d = SolverConfig::default();
        SolverConfig {
            method: self.method.unwrap_or(d.method),
            residual_tolerance: self.residual_tolerance.unwrap_or(d.residual_tolerance),
            max_iterations: self.max_iterations.unwrap_or(d.max_iterations),
            ..d
        }
    }
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Directory for CSV files.
    #[arg(long, default_value = ".")]
    output_dir: PathBuf,
    /// Also write a matplotlib script next to each CSV.
    #[arg(long)]
    plot: bool,
}

#[derive(Args, Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields)]
struct SolveFields {
    #[arg(long)]
    dephasing: Option<f64>,
}

overlay!(SolveFields { dephasing });

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    chain: ChainArgs,
    #[command(flatten)]
    fields: SolveFields,
    #[command(flatten)]
    solver: SolverArgs,
    /// Write the density matrix as `row col re im` triplets.
    #[arg(long)]
    dump_state: Option<PathBuf>,
    /// Write the Liouvillian as `row col re im` triplets.
    #[arg(long)]
    dump_liouvillian: Option<PathBuf>,
}

#[derive(Args, Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields)]
struct SizeFields {
    /// Comma-separated quantum chain sizes.
    #[arg(long, value_delimiter = ',')]
    quantum_sizes: Option<Vec<usize>>,
    /// Comma-separated dephasing rates, one quantum series each [default: 0,0.5,5].
    #[arg(long, value_delimiter = ',')]
    dephasing: Option<Vec<f64>>,
    /// Comma-separated classical chain sizes.
    #[arg(long, value_delimiter = ',')]
    classical_sizes: Option<Vec<usize>>,
    /// Classical hopping rate V.
    #[arg(long)]
    hop_rate: Option<f64>,
}

overlay!(SizeFields {
    quantum_sizes,
    dephasing,
    classical_sizes,
    hop_rate
});

#[derive(Args, Debug)]
struct SizeArgs {
    #[command(flatten)]
    chain: ChainArgs,
    #[command(flatten)]
    fields: SizeFields,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields)]
struct TempFields {
    /// Comma-separated left bath temperatures.
    #[arg(long, value_delimiter = ',')]
    temperatures: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    quantum_sizes: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    dephasing: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    classical_sizes: Option<Vec<usize>>,
    #[arg(long)]
    hop_rate: Option<f64>,
}

overlay!(TempFields {
    temperatures,
    quantum_sizes,
    dephasing,
    classical_sizes,
    hop_rate
});

#[derive(Args, Debug)]
struct TempArgs {
    #[command(flatten)]
    chain: ChainArgs,
    #[command(flatten)]
    fields: TempFields,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields)]
struct DephasingFields {
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    dephasing: Option<Vec<f64>>,
}

overlay!(DephasingFields { sizes, dephasing });

#[derive(Args, Debug)]
struct DephasingArgs {
    #[command(flatten)]
    chain: ChainArgs,
    #[command(flatten)]
    fields: DephasingFields,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields)]
struct DisorderFields {
    /// Chain length [default: 5].
    #[arg(long)]
    n_sites: Option<usize>,
    /// Ensemble size [default: 1000].
    #[arg(long)]
    samples: Option<usize>,
    /// Seed of the ChaCha8 generator [default: 1].
    #[arg(long)]
    seed: Option<u64>,
    /// Dephasing rate of the dephased solves [default: 1].
    #[arg(long)]
    dephasing: Option<f64>,
    /// Site energies are drawn from this closed interval [default: 0,1].
    #[arg(long, value_delimiter = ',', num_args = 2)]
    energy_range: Option<Vec<f64>>,
    /// Couplings are drawn from this closed interval [default: 0,1].
    #[arg(long, value_delimiter = ',', num_args = 2)]
    coupling_range: Option<Vec<f64>>,
}

overlay!(DisorderFields {
    n_sites,
    samples,
    seed,
    dephasing,
    energy_range,
    coupling_range
});

#[derive(Args, Debug)]
struct DisorderArgs {
    #[command(flatten)]
    baths: BathArgs,
    #[command(flatten)]
    fields: DisorderFields,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields)]
struct RegionFields {
    /// Spacing of the population grid [default: 0.05].
    #[arg(long)]
    s_step: Option<f64>,
    #[arg(long, value_delimiter = ',', num_args = 2)]
    g_range: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', num_args = 2)]
    gamma_range: Option<Vec<f64>>,
    /// Logarithmic grid points per search axis.
    #[arg(long)]
    grid_points: Option<usize>,
    /// Site energy of both sites.
    #[arg(long)]
    omega: Option<f64>,
}

overlay!(RegionFields {
    s_step,
    g_range,
    gamma_range,
    grid_points,
    omega
});

#[derive(Args, Debug)]
struct RegionArgs {
    #[command(flatten)]
    fields: RegionFields,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct FitArgs {
    /// CSV written by a sweep.
    input: PathBuf,
    #[arg(long, default_value = "n_sites")]
    x: String,
    #[arg(long, default_value = "current")]
    y: String,
    /// Keep rows with `column=value`; repeatable.
    #[arg(long = "filter")]
    filters: Vec<String>,
}

#[derive(Args, Debug)]
struct PlotArgs {
    /// CSV written by a sweep.
    input: PathBuf,
    /// size, temperature or region.
    #[arg(long)]
    kind: String,
    /// Script path [default: input with a .py extension].
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct ConfigFile {
    #[serde(default)]
    chain: ChainArgs,
    #[serde(default)]
    solver: SolverArgs,
    #[serde(default)]
    solve: SolveFields,
    #[serde(default)]
    size_sweep: SizeFields,
    #[serde(default)]
    temp_sweep: TempFields,
    #[serde(default)]
    dephasing_sweep: DephasingFields,
    #[serde(default)]
    disorder: DisorderFields,
    #[serde(default)]
    entangle_region: RegionFields,
}

fn load_config(path: Option<&Path>) -> Result<ConfigFile> {
    match path {
        Some(p) => Ok(toml::from_str(&fs::read_to_string(p)?)?),
        None => Ok(ConfigFile::default()),
    }
}

fn pair(values: Option<Vec<f64>>, default: [f64; 2], name: &str) -> Result<[f64; 2]> {
    match values.as_deref() {
        None => Ok(default),
        Some(&[a, b]) => Ok([a, b]),
        Some(_) => Err(AppError::Config(format!("{name} takes two values"))),
    }
}

fn save_csv<P: Serialize, R: Serialize>(
    output: &OutputArgs,
    name: &str,
    header: &Header<'_, P>,
    rows: &[R],
    plot: Option<PlotKind>,
) -> Result<()> {
    fs::create_dir_all(&output.output_dir)?;
    let path = output.output_dir.join(format!("{name}.csv"));
    write_csv(fs::File::create(&path)?, header, rows)?;
    info!("wrote {}", path.display());
    if let (true, Some(kind)) = (output.plot, plot) {
        write_plot(&path, kind, None)?;
    }
    Ok(())
}

fn write_plot(csv: &Path, kind: PlotKind, script: Option<PathBuf>) -> Result<()> {
    let script = script.unwrap_or_else(|| csv.with_extension("py"));
    let png = csv.with_extension("png");
    fs::write(
        &script,
        plot_script(kind, &csv.to_string_lossy(), &png.to_string_lossy()),
    )?;
    info!("wrote {}", script.display());
    Ok(())
}

fn solve(args: SolveArgs, file: ConfigFile) -> Result<()> {
    let chain = args.chain.overlay(file.chain);
    let fields = args.fields.overlay(file.solve);
    let solver = args.solver.overlay(file.solver).config();
    let spec = chain
        .chain(fields.dephasing.ok_or_else(|| missing("--dephasing"))?)?
        .to_spec()?;
    let l = assemble_liouvillian(&spec);
    let (rho, info) = solve_steady_state_with_info(&l, &solver.options())?;
    let report = extract_observables(&rho, &spec)?;
    println!("sites              {}", spec.n_sites());
    println!(
        "solver             {:?} (residual {:.3e})",
        info.method, info.relative_residual
    );
    println!("current_left       {}", report.current_left);
    println!("current_right      {}", report.current_right);
    println!("current_dephasing  {}", report.current_dephasing);
    let pops: Vec<String> = report.populations.iter().map(f64::to_string).collect();
    println!("populations        {}", pops.join(" "));
    let coh: Vec<String> = report
        .bond_coherences
        .iter()
        .map(|c| format!("{}{:+}i", c.re, c.im))
        .collect();
    println!("bond_coherences    {}", coh.join(" "));
    if let Some(path) = args.dump_state {
        let mut f = fs::File::create(&path)?;
        write_triplets(&mut f, rho.dimension(), rho.dimension(), dense_triplets(rho.matrix()))?;
    }
    if let Some(path) = args.dump_liouvillian {
        let mut f = fs::File::create(&path)?;
        write_triplets(&mut f, l.dimension(), l.dimension(), l.matrix().triplets())?;
    }
    Ok(())
}

fn size_sweep(args: SizeArgs, file: ConfigFile) -> Result<()> {
    let fields = args.fields.overlay(file.size_sweep);
    let dephasing = fields.dephasing.unwrap_or_else(|| {
        info!("no dephasing list given, using 0, 0.5, 5");
        vec![0.0, 0.5, 5.0]
    });
    let plan = SizeSweepPlan {
        chain: args.chain.overlay(file.chain).uniform()?,
        quantum_sizes: fields.quantum_sizes.unwrap_or_default(),
        dephasing,
        classical_sizes: fields.classical_sizes.unwrap_or_default(),
        hop_rate: fields.hop_rate,
        solver: args.solver.overlay(file.solver).config(),
    };
    let rows = plan.run()?;
    let header = Header {
        title: "size-sweep",
        seed: None,
        plan: &plan,
    };
    save_csv(&args.output, "size_sweep", &header, &rows, Some(PlotKind::Size))
}

fn temp_sweep(args: TempArgs, file: ConfigFile) -> Result<()> {
    let fields = args.fields.overlay(file.temp_sweep);
    let plan = TemperaturePlan {
        chain: args.chain.overlay(file.chain).uniform()?,
        temperatures: fields.temperatures.ok_or_else(|| missing("--temperatures"))?,
        quantum_sizes: fields.quantum_sizes.unwrap_or_default(),
        dephasing: fields.dephasing.unwrap_or_default(),
        classical_sizes: fields.classical_sizes.unwrap_or_default(),
        hop_rate: fields.hop_rate,
        solver: args.solver.overlay(file.solver).config(),
    };
    let rows = plan.run()?;
    let header = Header {
        title: "temp-sweep",
        seed: None,
        plan: &plan,
    };
    save_csv(
        &args.output,
        "temperature_sweep",
        &header,
        &rows,
        Some(PlotKind::Temperature),
    )
}

fn dephasing_sweep(args: DephasingArgs, file: ConfigFile) -> Result<()> {
    let fields = args.fields.overlay(file.dephasing_sweep);
    let plan = DephasingPlan {
        chain: args.chain.overlay(file.chain).uniform()?,
        sizes: fields.sizes.ok_or_else(|| missing("--sizes"))?,
        dephasing: fields.dephasing.ok_or_else(|| missing("--dephasing"))?,
        solver: args.solver.overlay(file.solver).config(),
    };
    let (rows, fits) = plan.run()?;
    for f in &fits {
        match (f.alpha, f.regression_coefficient) {
            (Some(a), Some(r)) => println!(
                "γ = {}: α = {a:.6}, R = {r:.10} (N = {}..{})",
                f.dephasing, f.n_min, f.n_max
            ),
            _ => println!("γ = {}: {}", f.dephasing, f.status),
        }
    }
    let header = Header {
        title: "dephasing-sweep",
        seed: None,
        plan: &plan,
    };
    save_csv(&args.output, "dephasing_sweep", &header, &rows, Some(PlotKind::Size))?;
    let header = Header {
        title: "dephasing-fits",
        seed: None,
        plan: &plan,
    };
    save_csv(&args.output, "dephasing_fits", &header, &fits, None)
}

fn disorder(args: DisorderArgs, file: ConfigFile) -> Result<()> {
    let fields = args.fields.overlay(file.disorder);
    let (left, right) = args.baths.overlay(file.chain.baths).baths()?;
    let plan = DisorderPlan {
        n_sites: fields.n_sites.unwrap_or(5),
        samples: fields.samples.unwrap_or(1000),
        seed: fields.seed.unwrap_or(1),
        dephasing: fields.dephasing.unwrap_or(1.0),
        left,
        right,
        energy_range: pair(fields.energy_range, [0.0, 1.0], "energy-range")?,
        coupling_range: pair(fields.coupling_range, [0.0, 1.0], "coupling-range")?,
        max_redraws: 100,
        solver: args.solver.overlay(file.solver).config(),
    };
    let (rows, summary) = plan.run()?;
    let header = Header {
        title: "disorder",
        seed: Some(plan.seed),
        plan: &plan,
    };
    save_csv(&args.output, "disorder", &header, &rows, None)?;
    let path = args.output.output_dir.join("disorder_summary.toml");
    let mut text = Vec::new();
    write_header(
        &mut text,
        &Header {
            title: "disorder-summary",
            seed: Some(plan.seed),
            plan: &plan,
        },
    )?;
    text.extend_from_slice(toml::to_string(&summary)?.as_bytes());
    fs::write(&path, text)?;
    print!("{}", toml::to_string(&summary)?);
    Ok(())
}

fn entangle_region(args: RegionArgs, file: ConfigFile) -> Result<()> {
    let fields = args.fields.overlay(file.entangle_region);
    let d = SearchConfig::default();
    let plan = RegionPlan {
        s_values: RegionPlan::grid(fields.s_step.unwrap_or(0.05))?,
        search: SearchConfig {
            g_range: pair(fields.g_range, d.g_range, "g-range")?,
            gamma_range: pair(fields.gamma_range, d.gamma_range, "gamma-range")?,
            grid_points: fields.grid_points.unwrap_or(d.grid_points),
            omega: fields.omega.unwrap_or(d.omega),
            ..d
        },
    };
    let map = plan.run()?;
    let shape = RegionShape::of(&map);
    println!(
        "{} of {} cells entangled; diagonal empty: {}; symmetric: {}",
        shape.entangled_cells,
        map.cells().len(),
        shape.diagonal_empty,
        shape.symmetric
    );
    let header = Header {
        title: "entangle-region",
        seed: None,
        plan: &plan,
    };
    save_csv(
        &args.output,
        "entanglement_region",
        &header,
        &region_rows(&map),
        Some(PlotKind::Region),
    )
}

fn fit(args: FitArgs) -> Result<()> {
    let table = Table::read(BufReader::new(fs::File::open(&args.input)?))?;
    let filters = args
        .filters
        .iter()
        .map(|f| f.parse())
        .collect::<Result<Vec<Filter>>>()?;
    let fit = heatchain::experiments::fit_table(&table, &args.x, &args.y, &filters)?;
    println!("alpha                  {}", fit.alpha);
    println!("prefactor              {}", fit.prefactor);
    println!("regression_coefficient {}", fit.regression_coefficient);
    println!("points                 {}", fit.n_points);
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let file = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Solve(a) => solve(a, file),
        Command::SizeSweep(a) => size_sweep(a, file),
        Command::TempSweep(a) => temp_sweep(a, file),
        Command::DephasingSweep(a) => dephasing_sweep(a, file),
        Command::Disorder(a) => disorder(a, file),
        Command::EntangleRegion(a) => entangle_region(a, file),
        Command::Fit(a) => fit(a),
        Command::PlotScript(a) => write_plot(&a.input, a.kind.parse()?, a.output),
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn flags_win_over_the_config_file() {
        let file: ConfigFile = toml::from_str("[chain]\nomega = 2.0\ng = 0.5\nrate_left = 1.0\n").unwrap();
        let flags = ChainArgs {
            omega: Some(3.0),
            ..ChainArgs::default()
        };
        let merged = flags.overlay(file.chain);
        assert_eq!(
            (merged.omega, merged.g, merged.baths.rate_left),
            (Some(3.0), Some(0.5), Some(1.0))
        );
        assert!(toml::from_str::<ConfigFile>("[chain]\nomgea = 1.0\n").is_err());
    }
}
