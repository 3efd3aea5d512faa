use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;

use tgbs::bench::{self, BenchSettings};
use tgbs::classify::{self, Binning, FeaturizeConfig};
use tgbs::dataset::{filter_by_size, parse_tudataset};
use tgbs::embedding::{self, EmbeddedProblem};
use tgbs::graph::{self, Graph};
use tgbs::sampler::{sample_graph, SampleBatch};
use tgbs::solvers::{self, CampaignConfig, GraphModel, Problem, SeedStrategy};
use tgbs::{Error, Result};

/// Environment variable: directory that relative output paths are written to.
const OUTPUT_DIR_ENV: &str = "TGBS_OUTPUT_DIR";

#[derive(Parser)]
#[command(name = "tgbs", version, about = "Threshold-based Gaussian boson sampling and seeded graph search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random graph as an edge list.
    Generate(GenerateArgs),
    /// Program a graph into the sampler and write the problem as JSON.
    Embed(EmbedArgs),
    /// Draw threshold-detection samples from an embedded problem.
    Sample(SampleArgs),
    /// Run a seed-and-search campaign and write one CSV row per search.
    Solve(SolveArgs),
    /// Featurize a TUDataset and write feature and Gram matrix files.
    Featurize(FeaturizeArgs),
    /// Parse a TUDataset and print a summary.
    ParseDataset(DatasetArgs),
    /// Time decomposition and sampling on random graphs.
    DecomposeBench(BenchArgs),
    /// Compare sampled seed densities with a random baseline.
    SeedDensity(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Planted,
    Er,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum, default_value = "planted")]
    model: ModelArg,
    #[arg(long)]
    nodes: usize,
    /// Edge probability for `er`; defaults to ln(n)/n.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 0.75)]
    p_dense: f64,
    #[arg(long, default_value_t = 0.1)]
    p_sparse: f64,
    #[arg(long, default_value_t = 0.1)]
    dense_fraction: f64,
    /// Attach uniform [0, 1) node weights.
    #[arg(long)]
    weights: bool,
    #[arg(long)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EmbedArgs {
    /// Edge-list file.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = embedding::DEFAULT_MEAN_PHOTON)]
    mean_photon: f64,
    #[arg(long, default_value_t = embedding::DEFAULT_THRESHOLD)]
    gamma: f64,
    /// Use the weight-aware encoding (needs node weights).
    #[arg(long)]
    weighted: bool,
    #[arg(long, default_value_t = embedding::DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    /// Embedded problem JSON.
    #[arg(long)]
    problem: PathBuf,
    #[arg(long, default_value_t = 20)]
    realizations: usize,
    #[arg(long)]
    seed: u64,
    /// Sample file; a `.json` sidecar is written next to it.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    /// TOML campaign file; flags below override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    problem: Option<String>,
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    strategies: Option<Vec<String>>,
    #[arg(long)]
    restarts: Option<usize>,
    /// Total mean photon number; overrides the per-mode setting.
    #[arg(long)]
    mean_photon: Option<f64>,
    #[arg(long)]
    mean_photon_per_mode: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    cycles: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DatasetArgs {
    /// Directory holding the NAME_*.txt files.
    #[arg(long)]
    dir: PathBuf,
    #[arg(long)]
    name: String,
    #[arg(long)]
    min_nodes: Option<usize>,
    #[arg(long)]
    max_nodes: Option<usize>,
}

#[derive(Args)]
struct FeaturizeArgs {
    #[command(flatten)]
    dataset: DatasetArgs,
    /// TOML featurization file; flags below override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    binning: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    mean_photon: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Keep detector frequencies in node order.
    #[arg(long)]
    unsorted: bool,
    /// Use running sums of the histograms.
    #[arg(long)]
    cumulative: bool,
    /// RBF bandwidth; defaults to sqrt(D · Var(features)).
    #[arg(long)]
    bandwidth: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Features CSV.
    #[arg(short, long)]
    output: PathBuf,
    /// Gram matrix CSV (plus `.json` sidecar).
    #[arg(long)]
    gram: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [16, 32, 64, 128, 256, 512, 1024])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    instances: usize,
    #[arg(long, default_value_t = 20)]
    realizations: usize,
    /// Total mean photon number; overrides --mean-photon-per-mode.
    #[arg(long)]
    mean_photon: Option<f64>,
    #[arg(long, default_value_t = embedding::DEFAULT_PHOTONS_PER_MODE)]
    mean_photon_per_mode: f64,
    #[arg(long, default_value_t = embedding::DEFAULT_THRESHOLD)]
    gamma: f64,
    #[arg(long)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn resolve(path: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// Writes to the resolved `path`, or to stdout without one.
fn with_output(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let p = resolve(p);
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|e| Error::Io { path: parent.into(), source: e })?;
            }
            let file = std::fs::File::create(&p).map_err(|e| Error::Io { path: p.clone(), source: e })?;
            let mut w = std::io::BufWriter::new(file);
            f(&mut w)?;
            w.flush().map_err(|e| Error::Io { path: p.clone(), source: e })?;
            info!("wrote {}", p.display());
            Ok(())
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)
        }
    }
}

fn write_bytes(w: &mut dyn Write, bytes: &[u8]) -> Result<()> {
    w.write_all(bytes).map_err(|e| Error::Io { path: "<output>".into(), source: e })
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.into(), source: e })
}

fn generate(args: GenerateArgs) -> Result<()> {
    let g = match args.model {
        ModelArg::Planted => {
            let (g, planted) =
                graph::planted_graph(args.nodes, args.p_dense, args.p_sparse, args.dense_fraction, args.seed)?;
            info!("planted block: {planted}");
            g
        }
        ModelArg::Er => {
            let p = args.p.unwrap_or_else(|| bench::connectivity_probability(args.nodes));
            graph::erdos_renyi(args.nodes, p, args.seed)?
        }
    };
    let g = if args.weights {
        graph::assign_uniform_weights(&g, tgbs::rng::derive_seed(args.seed, &[1]))
    } else {
        g
    };
    with_output(args.output.as_deref(), |w| write_bytes(w, graph::to_edge_list(&g).as_bytes()))
}

fn embed(args: EmbedArgs) -> Result<()> {
    let g: Graph = graph::read_edge_list(&args.graph)?;
    let problem = if args.weighted {
        embedding::embed_weighted(&g, args.alpha, args.mean_photon, args.gamma)?
    } else {
        embedding::embed_graph(&g, args.mean_photon, args.gamma)?
    };
    info!(
        "{} modes, scale {:.6e}, decomposition {:.3} s",
        problem.modes(),
        problem.scale(),
        problem.decompose_seconds()
    );
    with_output(args.output.as_deref(), |w| write_bytes(w, problem.to_json().as_bytes()))
}

fn sample(args: SampleArgs) -> Result<()> {
    let problem = EmbeddedProblem::read_json(&args.problem)?;
    let batch: SampleBatch = sample_graph(&problem, args.realizations, args.seed)?;
    let params = serde_json::json!({
        "problem": args.problem,
        "realizations": args.realizations,
        "seed": args.seed,
        "mean_photon": problem.mean_photon_target(),
        "thresholds": problem.thresholds(),
    });
    let out = resolve(&args.output);
    batch.write_with_sidecar(&out, params)?;
    info!("mean clicks {:.3}; wrote {}", batch.mean_click_count(), out.display());
    Ok(())
}

fn campaign_config(args: &SolveArgs) -> Result<CampaignConfig> {
    let mut config = match &args.config {
        Some(path) => CampaignConfig::from_toml(&read_text(path)?)?,
        None => {
            let problem = args.problem.as_deref().unwrap_or("densest-k").parse()?;
            let sizes = args.sizes.clone().unwrap_or_else(|| vec![16, 32, 64]);
            let seed = args
                .seed
                .ok_or_else(|| Error::InvalidParameter("--seed is required without --config".into()))?;
            CampaignConfig::new(problem, sizes, seed)
        }
    };
    if let Some(p) = &args.problem {
        config.problem = p.parse::<Problem>()?;
    }
    if let Some(s) = &args.sizes {
        config.sizes = s.clone();
    }
    if let Some(s) = &args.strategies {
        config.strategies = s.iter().map(|s| s.parse::<SeedStrategy>()).collect::<Result<_>>()?;
    }
    macro_rules! set {
        ($($field:ident),*) => { $( if let Some(v) = args.$field { config.$field = v; } )* };
    }
    set!(instances, restarts, mean_photon_per_mode, gamma, alpha, cycles, seed);
    if args.mean_photon.is_some() {
        config.mean_photon = args.mean_photon;
    }
    if args.k.is_some() {
        config.k = args.k;
    }
    if let Some(m) = args.model {
        config.graph = match m {
            ModelArg::Planted => GraphModel::Planted,
            ModelArg::Er => GraphModel::ErdosRenyi,
        };
    }
    config.validate()?;
    Ok(config)
}

fn solve(args: SolveArgs) -> Result<()> {
    let config = campaign_config(&args)?;
    let records = solvers::run_campaign(&config)?;
    info!("{} search runs", records.len());
    with_output(args.output.as_deref(), |w| solvers::write_campaign_csv(w, &config, &records))
}

fn load_dataset(args: &DatasetArgs) -> Result<tgbs::dataset::LabeledDataset> {
    let d = parse_tudataset(&args.dir, &args.name)?;
    match (args.min_nodes, args.max_nodes) {
        (None, None) => Ok(d),
        (min, max) => filter_by_size(&d, min.unwrap_or(0), max.unwrap_or(usize::MAX)),
    }
}

fn parse_dataset(args: DatasetArgs) -> Result<()> {
    let d = load_dataset(&args)?;
    let sizes: Vec<usize> = d.graphs.iter().map(Graph::node_count).collect();
    let mut per_class = vec![0usize; d.class_count()];
    for &l in &d.labels {
        per_class[l] += 1;
    }
    println!("dataset: {}", d.name);
    println!("graphs: {}", d.len());
    println!("nodes: min {} max {}", sizes.iter().min().unwrap_or(&0), sizes.iter().max().unwrap_or(&0));
    for (c, (raw, n)) in d.raw_labels.iter().zip(&per_class).enumerate() {
        println!("class {c} (label {raw}): {n}");
    }
    if d.self_loops_dropped > 0 {
        println!("self-loops dropped: {}", d.self_loops_dropped);
    }
    Ok(())
}

fn featurize_config(args: &FeaturizeArgs) -> Result<FeaturizeConfig> {
    let mut config = match &args.config {
        Some(path) => toml::from_str::<FeaturizeConfig>(&read_text(path)?)
            .map_err(|e| Error::Format(format!("featurize config: {e}")))?,
        None => {
            let seed = args
                .seed
                .ok_or_else(|| Error::InvalidParameter("--seed is required without --config".into()))?;
            FeaturizeConfig::new(Binning::Count, seed)
        }
    };
    if let Some(b) = &args.binning {
        config.binning = b.parse()?;
    }
    if let Some(n) = args.samples {
        config.n_samples = n;
    }
    if let Some(x) = args.mean_photon {
        config.mean_photon = x;
    }
    if let Some(x) = args.gamma {
        config.gamma = x;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    config.sort_descending &= !args.unsorted;
    config.cumulative |= args.cumulative;
    Ok(config)
}

fn featurize(args: FeaturizeArgs) -> Result<()> {
    let config = featurize_config(&args)?;
    let d = load_dataset(&args.dataset)?;
    let fd = classify::featurize_dataset(&d, &config)?;
    for (i, reason) in &fd.skipped {
        log::warn!("graph {i} skipped: {reason}");
    }
    info!("{} graphs featurized, {} skipped", fd.features.len(), fd.skipped.len());
    with_output(Some(&args.output), |w| classify::write_features_csv(w, &fd, &config))?;
    if let Some(gram) = &args.gram {
        let bandwidth = match args.bandwidth {
            Some(b) => b,
            None => classify::default_bandwidth(&fd.features)?,
        };
        let kernel = classify::rbf_gram(&fd.features, bandwidth)?;
        let path = resolve(gram);
        classify::write_gram(&path, &kernel, &fd, &config)?;
        info!("wrote {}", path.display());
    }
    Ok(())
}

fn bench_settings(args: &BenchArgs) -> BenchSettings {
    let mut s = BenchSettings::new(args.sizes.clone(), args.instances, args.seed);
    s.realizations = args.realizations;
    s.mean_photon = args.mean_photon;
    s.mean_photon_per_mode = args.mean_photon_per_mode;
    s.gamma = args.gamma;
    s
}

fn decompose_bench(args: BenchArgs) -> Result<()> {
    let settings = bench_settings(&args);
    let rows = bench::decompose_bench(&settings)?;
    with_output(args.output.as_deref(), |w| {
        bench::write_report_csv(w, bench::DECOMPOSE_BENCH_SCHEMA, &settings, &rows)
    })
}

fn seed_density(args: BenchArgs) -> Result<()> {
    let settings = bench_settings(&args);
    let rows = bench::seed_density(&settings)?;
    with_output(args.output.as_deref(), |w| {
        bench::write_report_csv(w, bench::SEED_DENSITY_SCHEMA, &settings, &rows)
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Embed(a) => embed(a),
        Command::Sample(a) => sample(a),
        Command::Solve(a) => solve(a),
        Command::Featurize(a) => featurize(a),
        Command::ParseDataset(a) => parse_dataset(a),
        Command::DecomposeBench(a) => decompose_bench(a),
        Command::SeedDensity(a) => seed_density(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
