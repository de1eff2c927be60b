use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hyperwalk::analysis::{self, AnalysisOptions, Oracle};
use hyperwalk::config::ExperimentConfig;
use hyperwalk::format::{self, EstimateSummary};
use hyperwalk::{exit, simulate, verify, CliError};
use hyperwalk_core::exact_times;
use hyperwalk_core::montecarlo::{Estimate, Estimator, Semantics, StartRule, WalkConfig, Walker};
use hyperwalk_core::{generate, is_connected, project, GenerationParams};

#[derive(Parser)]
#[command(
    name = "hyperwalk",
    version,
    about = "Random walks on random d-uniform hypergraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a hypergraph from H(n, p) and write it as JSON.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Resample until the hypergraph is connected.
        #[arg(long)]
        connected: bool,
        #[arg(long, default_value_t = 100)]
        max_resamples: u32,
        /// Output file (default: stdout, or a file in HYPERWALK_OUT_DIR).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact spectral analysis of a hypergraph file.
    Analyze {
        file: PathBuf,
        /// Cross-check the spectral hitting times against a linear-solve route.
        #[arg(long, value_enum, default_value_t = OracleArg::None)]
        oracle: OracleArg,
        /// Write the JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also export weights, eigenvectors, hitting and commute matrices as CSV.
        #[arg(long)]
        csv_dir: Option<PathBuf>,
    },
    /// Monte Carlo estimate of a hitting, commute or cover time.
    Simulate {
        file: PathBuf,
        #[arg(long, value_enum)]
        estimator: EstimatorArg,
        /// Start vertex (1-based); for cover, omit to draw from the stationary law.
        #[arg(long)]
        from: Option<usize>,
        /// Target vertex (1-based) for hitting and commute.
        #[arg(long)]
        to: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 100_000_000)]
        max_steps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = SemanticsArg::TwoStage)]
        semantics: SemanticsArg,
        /// Directory for `samples.csv` and `estimate.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the verification battery described by a config file.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Collapse every statistical band to this slack.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Report directory (default: config output_dir, then HYPERWALK_OUT_DIR, then `.`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleArg {
    None,
    PerTarget,
    Fundamental,
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimatorArg {
    Hitting,
    Commute,
    Cover,
}

#[derive(Clone, Copy, ValueEnum)]
enum SemanticsArg {
    TwoStage,
    WeightedGraph,
}

const OUT_DIR_ENV: &str = "HYPERWALK_OUT_DIR";

fn env_out_dir() -> Option<PathBuf> {
    std::env::var_os(OUT_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

fn write_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(p, text)?;
        }
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn read_hypergraph(path: &Path) -> Result<hyperwalk_core::Hypergraph, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::BadFile(format!("{}: {e}", path.display())))?;
    format::hypergraph_from_json(&text)
}

fn vertex(arg: Option<usize>, name: &str, n: usize) -> Result<usize, CliError> {
    let v =
        arg.ok_or_else(|| CliError::Usage(format!("--{name} is required for this estimator")))?;
    if v == 0 || v > n {
        return Err(CliError::Usage(format!("--{name} {v} is outside 1..={n}")));
    }
    Ok(v - 1)
}

fn cmd_generate(params: GenerationParams, out: Option<PathBuf>) -> Result<(), CliError> {
    params
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let h = generate(&params).map_err(CliError::Generation)?;
    let out = out.or_else(|| {
        env_out_dir().map(|d| {
            d.join(format!(
                "hypergraph_n{}_d{}_seed{}.json",
                params.n, params.d, params.seed
            ))
        })
    });
    write_text(out.as_deref(), &format::hypergraph_to_json(&h))?;
    eprintln!(
        "hyperedges: {}, connected: {}{}",
        h.edge_count(),
        is_connected(&h),
        out.map(|p| format!(", written to {}", p.display()))
            .unwrap_or_default()
    );
    Ok(())
}

fn cmd_analyze(
    file: &Path,
    oracle: OracleArg,
    out: Option<PathBuf>,
    csv_dir: Option<PathBuf>,
) -> Result<(), CliError> {
    let h = read_hypergraph(file)?;
    let oracle = match oracle {
        OracleArg::None => Oracle::None,
        OracleArg::PerTarget => Oracle::PerTarget,
        OracleArg::Fundamental => Oracle::Fundamental,
    };
    let a = analysis::analyze(
        &h,
        &AnalysisOptions {
            oracle,
            ..Default::default()
        },
    )?;
    let mut text = serde_json::to_string_pretty(&a.report()).expect("report serializes");
    text.push('\n');
    write_text(out.as_deref(), &text)?;

    if let Some(dir) = csv_dir {
        fs::create_dir_all(&dir)?;
        let file = |name: &str| -> io::Result<io::BufWriter<fs::File>> {
            Ok(io::BufWriter::new(fs::File::create(dir.join(name))?))
        };
        format::write_weights_csv(&a.multigraph, file("weights.csv")?)?;
        format::write_eigenvectors_csv(&a.spectrum, file("eigenvectors.csv")?)?;
        format::write_matrix_csv(&a.times.hitting, file("hitting.csv")?)?;
        format::write_matrix_csv(&a.times.commute, file("commute.csv")?)?;
        format::write_matrix_csv(&exact_times::green_matrix(&a.spectrum), file("green.csv")?)?;
    }

    if !a.passed() {
        return Err(CliError::Deterministic(a.failed_checks().join(", ")));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    file: &Path,
    estimator: EstimatorArg,
    from: Option<usize>,
    to: Option<usize>,
    trials: u64,
    max_steps: u64,
    seed: u64,
    semantics: SemanticsArg,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let h = read_hypergraph(file)?;
    if !is_connected(&h) {
        return Err(CliError::BadInstance(
            hyperwalk_core::Error::InvalidHypergraph("hypergraph is not connected".into()),
        ));
    }
    let mg = project(&h);
    let walker = Walker::new(&h, &mg).map_err(CliError::BadInstance)?;
    let n = h.n();
    let mut cfg = WalkConfig::new(seed, trials);
    cfg.max_steps = max_steps;
    cfg.semantics = match semantics {
        SemanticsArg::TwoStage => Semantics::TwoStage,
        SemanticsArg::WeightedGraph => Semantics::WeightedGraph,
    };
    let est = match estimator {
        EstimatorArg::Hitting => Estimator::Hitting {
            from: vertex(from, "from", n)?,
            to: vertex(to, "to", n)?,
        },
        EstimatorArg::Commute => Estimator::Commute {
            a: vertex(from, "from", n)?,
            b: vertex(to, "to", n)?,
        },
        EstimatorArg::Cover => {
            cfg.start_rule = match from {
                Some(_) => StartRule::Fixed(vertex(from, "from", n)?),
                None => StartRule::Stationary,
            };
            Estimator::Cover
        }
    };
    walker
        .check(&est, &cfg)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let samples =
        simulate::samples(&walker, &est, &cfg).map_err(|e| CliError::Usage(e.to_string()))?;
    let estimate = Estimate::from_samples(&samples)
        .map_err(|e| CliError::Statistical(format!("{e}; raise --max-steps")))?;

    let mut text = serde_json::to_string_pretty(&EstimateSummary::from(&estimate))
        .expect("summary serializes");
    text.push('\n');
    if let Some(dir) = out {
        fs::create_dir_all(&dir)?;
        format::write_samples_csv(
            &samples,
            io::BufWriter::new(fs::File::create(dir.join("samples.csv"))?),
        )?;
        fs::write(dir.join("estimate.json"), &text)?;
    }
    io::stdout().lock().write_all(text.as_bytes())?;

    if simulate::truncation_dominated(&estimate) {
        return Err(CliError::Statistical(format!(
            "{} of {} trials reached --max-steps {}; the mean is biased low",
            estimate.truncated, estimate.trials_used, max_steps
        )));
    }
    if estimate.biased() {
        eprintln!(
            "warning: {} of {} trials truncated at {} steps; the mean is biased low",
            estimate.truncated, estimate.trials_used, max_steps
        );
    }
    Ok(())
}

fn cmd_verify(config: &Path, tolerance: Option<f64>, out: Option<PathBuf>) -> Result<(), CliError> {
    let text = fs::read_to_string(config)
        .map_err(|e| CliError::Usage(format!("{}: {e}", config.display())))?;
    let mut cfg = ExperimentConfig::from_json(&text)?;
    if tolerance.is_some() {
        cfg.tolerance = tolerance;
    }
    let dir = out
        .or_else(|| cfg.output_dir.clone())
        .or_else(env_out_dir)
        .unwrap_or_else(|| PathBuf::from("."));
    let report = verify::run(&cfg)?;
    fs::create_dir_all(&dir)?;
    fs::write(dir.join("report.json"), report.to_json())?;
    verify::write_plot_csvs(&report, &dir)?;

    for g in &report.verdicts {
        for c in g.claims.iter().filter(|c| c.evaluated) {
            eprintln!(
                "n={} d={} {:<22} {}/{} {}",
                g.n,
                g.d,
                c.claim,
                c.passing,
                c.measured,
                if c.passed { "pass" } else { "FAIL" }
            );
        }
    }
    eprintln!("report written to {}", dir.join("report.json").display());

    let s = &report.summary;
    match s.exit_code {
        exit::OK => Ok(()),
        exit::GENERATION => Err(CliError::Generation(
            hyperwalk_core::Error::ConnectivityNotAchieved {
                attempts: cfg.max_resamples,
            },
        )),
        exit::BAD_INSTANCE => Err(CliError::BadFile(format!(
            "{} instance(s) could not be analyzed",
            s.bad_instances
        ))),
        exit::DETERMINISTIC => Err(CliError::Deterministic("see report.json".into())),
        _ => Err(CliError::Statistical(
            "one or more bands not met; see report.json".into(),
        )),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate {
            n,
            d,
            p,
            seed,
            connected,
            max_resamples,
            out,
        } => {
            let mut params = GenerationParams::new(n, d, p, seed);
            if connected {
                params = params.connected(max_resamples);
            }
            cmd_generate(params, out)
        }
        Command::Analyze {
            file,
            oracle,
            out,
            csv_dir,
        } => cmd_analyze(&file, oracle, out, csv_dir),
        Command::Simulate {
            file,
            estimator,
            from,
            to,
            trials,
            max_steps,
            seed,
            semantics,
            out,
        } => cmd_simulate(
            &file, estimator, from, to, trials, max_steps, seed, semantics, out,
        ),
        Command::Verify {
            config,
            tolerance,
            out,
        } => cmd_verify(&config, tolerance, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
