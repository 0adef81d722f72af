//! Command-line front end: simulated data, catalog ingestion, circle and
//! curve fitting, stationarity checks, Monte Carlo benchmarks, and report
//! export. Every subcommand echoes its fully-resolved configuration as JSON
//! on stdout so a run can be reproduced from its own output.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use spcurve::circlefit::{self, CircleFitConfig, GradientMode};
use spcurve::dataio::{self, CatalogFormat, Dataset, GenSpec, NoiseKind, ParseMode, RunReport, Shape};
use spcurve::eval::{self, LossKind, Method, MonteCarloConfig, PerturbSpec};
use spcurve::geom::UnitVec3;
use spcurve::pcurve::{self, Curve, CurveFitConfig};
use spcurve::Error;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "spcurve",
    about = "Principal curves on the unit sphere",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a principal curve to a point catalog.
    Fit(FitArgs),
    /// Generate a simulated dataset.
    Simulate(SimulateArgs),
    /// Run the seeded Monte Carlo benchmark.
    Montecarlo(MonteCarloArgs),
    /// Fit only the least-squares circle.
    Circle(CircleArgs),
    /// Numerical stationarity check of a saved fit.
    Stationarity(StationarityArgs),
    /// Convert a saved fit report to another format.
    Export(ExportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    UsgsCsv,
    LonlatCsv,
    XyzCsv,
}

impl From<FormatArg> for CatalogFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::UsgsCsv => CatalogFormat::UsgsCsv,
            FormatArg::LonlatCsv => CatalogFormat::LonlatCsv,
            FormatArg::XyzCsv => CatalogFormat::XyzCsv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Extrinsic,
    Intrinsic,
    Median,
    Hauberg,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Extrinsic => Method::Extrinsic,
            MethodArg::Intrinsic => Method::Intrinsic,
            MethodArg::Median => Method::Median,
            MethodArg::Hauberg => Method::Hauberg,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum InitArg {
    /// Exact least-squares circle by gradient descent.
    PrincipalCircle,
    /// Tangent-plane circle (the baseline's own initializer).
    TangentCircle,
    /// Tangent-plane PGA great circle.
    Pga,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Circle,
    Wave,
}

impl From<ShapeArg> for Shape {
    fn from(s: ShapeArg) -> Self {
        match s {
            ShapeArg::Circle => Shape::Circle,
            ShapeArg::Wave => Shape::Wave,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum NoiseArg {
    Gaussian,
    Cauchy,
}

impl From<NoiseArg> for NoiseKind {
    fn from(n: NoiseArg) -> Self {
        match n {
            NoiseArg::Gaussian => NoiseKind::Gaussian,
            NoiseArg::Cauchy => NoiseKind::Cauchy,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LossArg {
    Cosine,
    Squared,
    Absolute,
}

impl From<LossArg> for LossKind {
    fn from(l: LossArg) -> Self {
        match l {
            LossArg::Cosine => LossKind::Cosine,
            LossArg::Squared => LossKind::Squared,
            LossArg::Absolute => LossKind::Absolute,
        }
    }
}

#[derive(Args)]
struct InputArgs {
    /// Input point file.
    #[arg(long)]
    input: PathBuf,
    /// Input layout.
    #[arg(long, value_enum)]
    format: FormatArg,
    /// Keep only rows with magnitude >= this value (usgs-csv only).
    #[arg(long, default_value_t = 0.0)]
    min_mag: f64,
    /// Skip unparseable rows instead of aborting.
    #[arg(long)]
    lenient: bool,
}

impl InputArgs {
    fn load(&self) -> Result<Dataset, Error> {
        let mode = if self.lenient {
            ParseMode::Lenient
        } else {
            ParseMode::Strict
        };
        let load = dataio::load_catalog(&self.input, self.format.into(), self.min_mag, mode)?;
        for issue in &load.skipped {
            eprintln!("skipped line {}: {}", issue.line, issue.message);
        }
        if load.dataset.is_empty() {
            return Err(Error::DegenerateInput(format!(
                "no points loaded from {}",
                self.input.display()
            )));
        }
        Ok(load.dataset)
    }
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Expectation flavor; `hauberg` is the nearest-vertex baseline.
    #[arg(long, value_enum, default_value = "extrinsic")]
    method: MethodArg,
    /// Number of initial curve vertices.
    #[arg(long = "T", default_value_t = 100)]
    t_vertices: usize,
    /// Kernel bandwidth as a fraction of curve length.
    #[arg(long, default_value_t = 0.05)]
    q: f64,
    /// Minimum relative decrease of the reconstruction error to continue.
    #[arg(long, default_value_t = 1e-4)]
    threshold: f64,
    #[arg(long, default_value_t = 50)]
    max_iter: usize,
    /// Fit an open curve instead of a closed one.
    #[arg(long)]
    open: bool,
    /// Initial curve. Defaults to the principal circle; the hauberg method
    /// defaults to the tangent circle its original formulation prescribes.
    #[arg(long, value_enum)]
    init: Option<InitArg>,
    /// Worker threads (results are identical for any value).
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Also write a GeoJSON rendering of the result.
    #[arg(long)]
    geojson: bool,
    /// Output stem: writes <out>.curve.csv and <out>.report.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_enum, default_value = "circle")]
    shape: ShapeArg,
    /// Wave amplitude in radians.
    #[arg(long, default_value_t = 1.0 / 3.0)]
    alpha: f64,
    /// Wave frequency (full periods around the sphere).
    #[arg(long, default_value_t = 4)]
    freq: u32,
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Noise scale on the polar angle.
    #[arg(long, default_value_t = 0.07)]
    sigma: f64,
    #[arg(long, value_enum, default_value = "gaussian")]
    noise: NoiseArg,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output stem: writes <out>.xyz.csv and <out>.truth.xyz.csv.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MonteCarloArgs {
    #[arg(long, value_enum, default_value = "circle")]
    shape: ShapeArg,
    #[arg(long, default_value_t = 1.0 / 3.0)]
    alpha: f64,
    #[arg(long, default_value_t = 4)]
    freq: u32,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 0.07)]
    sigma: f64,
    #[arg(long, value_enum, default_value = "gaussian")]
    noise: NoiseArg,
    #[arg(long = "T", default_value_t = 100)]
    t_vertices: usize,
    #[arg(long, default_value_t = 0.05)]
    q: f64,
    /// Comma-separated subset of extrinsic,intrinsic,median,hauberg.
    #[arg(long, default_value = "extrinsic,intrinsic,hauberg")]
    methods: String,
    #[arg(long, default_value_t = 50)]
    runs: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads (results are identical for any value).
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Output stem: writes <out>.report.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CircleArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Which circle to fit.
    #[arg(long, value_enum, default_value = "principal-circle")]
    kind: InitArg,
    /// Initial gradient step size of the descent.
    #[arg(long, default_value_t = 0.01)]
    step_beta: f64,
    /// Minimum absolute loss decrease to continue.
    #[arg(long, default_value_t = 1e-6)]
    threshold: f64,
    #[arg(long, default_value_t = 5000)]
    max_iter: usize,
    /// Use the analytic gradient instead of finite differences.
    #[arg(long)]
    analytic: bool,
    /// Also sample this many vertices into <out>.curve.csv.
    #[arg(long = "T")]
    t_vertices: Option<usize>,
    /// Output stem: writes <out>.circle.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct StationarityArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Saved fit report (<stem>.report.json from `fit`).
    #[arg(long)]
    fit: PathBuf,
    #[arg(long, value_enum, default_value = "cosine")]
    loss: LossArg,
    /// Central finite-difference half-step in the perturbation scale.
    #[arg(long, default_value_t = 1e-3)]
    eps_fd: f64,
    /// Number of random smooth perturbation directions.
    #[arg(long, default_value_t = 20)]
    directions: usize,
    /// Largest vertexwise displacement of a perturbation target, radians.
    #[arg(long, default_value_t = 0.1)]
    max_disp: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output stem: writes <out>.stationarity.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ExportArgs {
    /// Saved fit report (<stem>.report.json from `fit`).
    #[arg(long)]
    fit: PathBuf,
    /// Output format: csv, geojson, or json.
    #[arg(long)]
    format: String,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version on stdout with success status.
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    let result = match cli.command {
        Command::Fit(args) => run_fit(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Montecarlo(args) => run_montecarlo(args),
        Command::Circle(args) => run_circle(args),
        Command::Stationarity(args) => run_stationarity(args),
        Command::Export(args) => run_export(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. }
        | Error::Parse { .. }
        | Error::MissingColumn { .. }
        | Error::InvalidCoordinate(_) => 2,
        Error::AmbiguousGeodesic
        | Error::OutOfInjectivityRadius { .. }
        | Error::DegenerateMean
        | Error::DegenerateInput(_)
        | Error::DegenerateCurve => 3,
    }
}

fn with_threads<T>(threads: usize, work: impl FnOnce() -> T + Send) -> T
where
    T: Send,
{
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool")
        .install(work)
}

fn add_ext(stem: &Path, ext: &str) -> PathBuf {
    let mut name = stem.as_os_str().to_owned();
    name.push(ext);
    PathBuf::from(name)
}

fn build_init(data: &[UnitVec3], init: InitArg, t_vertices: usize) -> Result<Curve, Error> {
    let circle = match init {
        InitArg::PrincipalCircle => {
            circlefit::fit_principal_circle(data, &CircleFitConfig::default())?
        }
        InitArg::TangentCircle => circlefit::fit_tangent_circle(data)?,
        InitArg::Pga => circlefit::fit_pga_great_circle(data)?,
    };
    pcurve::sample_circle_vertices(&circle, t_vertices)
}

fn init_name(init: InitArg) -> &'static str {
    match init {
        InitArg::PrincipalCircle => "principal-circle",
        InitArg::TangentCircle => "tangent-circle",
        InitArg::Pga => "pga",
    }
}

fn run_fit(args: FitArgs) -> Result<(), Error> {
    let dataset = args.input.load()?;
    let method: Method = args.method.into();
    let init_kind = args.init.unwrap_or(if method.uses_nearest_vertex() {
        InitArg::TangentCircle
    } else {
        InitArg::PrincipalCircle
    });

    let config = json!({
        "command": "fit",
        "input": args.input.input.display().to_string(),
        "format": format!("{:?}", CatalogFormat::from(args.input.format)),
        "min_mag": args.input.min_mag,
        "lenient": args.input.lenient,
        "method": method.name(),
        "T": args.t_vertices,
        "q": args.q,
        "threshold": args.threshold,
        "max_iter": args.max_iter,
        "closed": !args.open,
        "init": init_name(init_kind),
        "threads": args.threads,
        "n_points": dataset.len(),
        "provenance": dataset.provenance,
    });
    println!("{}", serde_json::to_string_pretty(&config).unwrap());

    let data = dataset.points().to_vec();
    let report = with_threads(args.threads, || -> Result<_, Error> {
        let init = build_init(&data, init_kind, args.t_vertices)?;
        let init = if args.open {
            pcurve::reparameterize_unit_speed(init.vertices(), false)?
        } else {
            init
        };
        let cfg = CurveFitConfig {
            t_vertices: args.t_vertices,
            q: args.q,
            mean_kind: method.mean_kind(),
            threshold: args.threshold,
            max_iter: args.max_iter,
            closed: !args.open,
            hauberg_projection: method.uses_nearest_vertex(),
            ..Default::default()
        };
        pcurve::fit(&data, &init, &cfg)
    })?;

    if let Some(reason) = &report.aborted {
        eprintln!("fit aborted early: {reason}");
    }
    let run = RunReport::from_fit(&report, config, data.len());
    dataio::export_curve_csv(&report.final_curve, &add_ext(&args.out, ".curve.csv"))?;
    dataio::export_report(&run, &add_ext(&args.out, ".report.json"))?;
    if args.geojson {
        dataio::export_geojson(
            &report.final_curve,
            &report.projections,
            &add_ext(&args.out, ".geojson"),
        )?;
    }
    println!(
        "reconstruction_error={} distinct_projections={}/{} iterations={} converged={}",
        run.metrics.reconstruction_error,
        run.metrics.distinct_projections,
        data.len(),
        run.iterations,
        run.converged
    );
    Ok(())
}

fn run_simulate(args: SimulateArgs) -> Result<(), Error> {
    let spec = GenSpec {
        shape: args.shape.into(),
        alpha: args.alpha,
        freq: args.freq,
        n: args.n,
        noise_sigma: args.sigma,
        noise_kind: args.noise.into(),
        seed: args.seed,
    };
    let config = json!({
        "command": "simulate",
        "shape": spec.shape,
        "alpha": spec.alpha,
        "freq": spec.freq,
        "n": spec.n,
        "sigma": spec.noise_sigma,
        "noise": spec.noise_kind,
        "seed": spec.seed,
    });
    println!("{}", serde_json::to_string_pretty(&config).unwrap());

    let dataset = dataio::generate(&spec)?;
    dataio::export_dataset_xyz(&dataset, &add_ext(&args.out, ".xyz.csv"))?;
    let truth = Dataset::new(
        dataio::true_samples(&spec),
        None,
        format!("noiseless samples for seed {}", spec.seed),
    );
    dataio::export_dataset_xyz(&truth, &add_ext(&args.out, ".truth.xyz.csv"))?;
    println!("wrote {} points ({})", dataset.len(), dataset.provenance);
    Ok(())
}

fn run_montecarlo(args: MonteCarloArgs) -> Result<(), Error> {
    let methods = Method::parse_list(&args.methods)?;
    let cfg = MonteCarloConfig {
        shape: args.shape.into(),
        alpha: args.alpha,
        freq: args.freq,
        n: args.n,
        noise_sigma: args.sigma,
        noise_kind: args.noise.into(),
        t_vertices: args.t_vertices,
        q: args.q,
        methods,
        runs: args.runs,
        seed: args.seed,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({
            "command": "montecarlo",
            "threads": args.threads,
            "config": &cfg,
        }))
        .unwrap()
    );
    let report = with_threads(args.threads, || eval::run_monte_carlo(&cfg))?;
    for m in &report.methods {
        println!(
            "{}: error {:.4} ({:.4}), distinct {:.2} ({:.2}), runs {}, converged {}",
            m.method.name(),
            m.error_mean,
            m.error_sd,
            m.distinct_mean,
            m.distinct_sd,
            m.runs_ok,
            m.converged_runs
        );
    }
    if report.failed_runs > 0 {
        eprintln!("{} runs failed and were excluded", report.failed_runs);
    }
    let path = add_ext(&args.out, ".report.json");
    let file = std::fs::File::create(&path).map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })?;
    serde_json::to_writer_pretty(std::io::BufWriter::new(file), &report).map_err(|e| {
        Error::Io {
            path,
            source: std::io::Error::other(e),
        }
    })?;
    Ok(())
}

fn run_circle(args: CircleArgs) -> Result<(), Error> {
    let dataset = args.input.load()?;
    let data = dataset.points();
    let config = json!({
        "command": "circle",
        "input": args.input.input.display().to_string(),
        "kind": init_name(args.kind),
        "step_beta": args.step_beta,
        "threshold": args.threshold,
        "max_iter": args.max_iter,
        "analytic": args.analytic,
        "n_points": data.len(),
    });
    println!("{}", serde_json::to_string_pretty(&config).unwrap());

    let circle = match args.kind {
        InitArg::PrincipalCircle => {
            let cfg = CircleFitConfig {
                step_beta: args.step_beta,
                threshold: args.threshold,
                max_iter: args.max_iter,
                gradient_mode: if args.analytic {
                    GradientMode::Analytic
                } else {
                    GradientMode::FiniteDifference
                },
            };
            circlefit::fit_principal_circle(data, &cfg)?
        }
        InitArg::TangentCircle => circlefit::fit_tangent_circle(data)?,
        InitArg::Pga => circlefit::fit_pga_great_circle(data)?,
    };
    let loss = circlefit::circle_loss(data, &circle);
    let out = json!({
        "config": config,
        "center": circle.center,
        "radius": circle.radius,
        "loss": loss,
    });
    let path = add_ext(&args.out, ".circle.json");
    std::fs::write(&path, serde_json::to_string_pretty(&out).unwrap()).map_err(|source| {
        Error::Io {
            path: path.clone(),
            source,
        }
    })?;
    if let Some(t) = args.t_vertices {
        let curve = pcurve::sample_circle_vertices(&circle, t)?;
        dataio::export_curve_csv(&curve, &add_ext(&args.out, ".curve.csv"))?;
    }
    println!("center=({}, {}, {}) radius={} loss={}",
        circle.center.x, circle.center.y, circle.center.z, circle.radius, loss);
    Ok(())
}

fn run_stationarity(args: StationarityArgs) -> Result<(), Error> {
    let dataset = args.input.load()?;
    let saved = dataio::load_report(&args.fit)?;
    let curve = saved.curve()?;
    let loss: LossKind = args.loss.into();
    let config = json!({
        "command": "stationarity",
        "input": args.input.input.display().to_string(),
        "fit": args.fit.display().to_string(),
        "loss": loss,
        "eps_fd": args.eps_fd,
        "directions": args.directions,
        "max_disp": args.max_disp,
        "seed": args.seed,
    });
    println!("{}", serde_json::to_string_pretty(&config).unwrap());

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut gradients = Vec::with_capacity(args.directions);
    for _ in 0..args.directions {
        let target = eval::random_smooth_target(&curve, args.max_disp, &mut rng)?;
        let g = eval::stationarity_gradient(
            dataset.points(),
            &curve,
            &PerturbSpec::new(target, 1.0)?,
            loss,
            args.eps_fd,
        )?;
        gradients.push(g);
    }
    let max_abs = gradients.iter().fold(0.0f64, |a, g| a.max(g.abs()));
    let n = dataset.len() as f64;
    let mean_sq = eval::reconstruction_error(dataset.points(), &curve, eval::ProjectionRule::Continuous)? / n;
    let mean_abs: f64 = dataset
        .points()
        .iter()
        .map(|p| pcurve::project_to_curve(p, &curve).map(|pr| pr.distance))
        .collect::<Result<Vec<_>, _>>()?
        .iter()
        .sum::<f64>()
        / n;
    let scale = match loss {
        LossKind::Absolute => mean_abs,
        _ => mean_sq,
    };
    let out = json!({
        "config": config,
        "gradients": gradients,
        "max_abs_gradient": max_abs,
        "per_point_loss_scale": scale,
        "ratio_to_scale": max_abs / scale,
    });
    let path = add_ext(&args.out, ".stationarity.json");
    std::fs::write(&path, serde_json::to_string_pretty(&out).unwrap()).map_err(|source| {
        Error::Io {
            path: path.clone(),
            source,
        }
    })?;
    println!("max |gradient| = {max_abs:.6e} over {} directions (scale {scale:.6e})", args.directions);
    Ok(())
}

fn run_export(args: ExportArgs) -> Result<(), Error> {
    let saved = dataio::load_report(&args.fit)?;
    let curve = saved.curve()?;
    match args.format.as_str() {
        "csv" => dataio::export_curve_csv(&curve, &args.out),
        "geojson" => dataio::export_geojson(&curve, &saved.projections, &args.out),
        "json" => dataio::export_report(&saved, &args.out),
        other => Err(Error::DegenerateInput(format!(
            "unknown export format `{other}` (expected csv, geojson, or json)"
        ))),
    }
}
