use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use ssd_core::models::{
    ising_circle, ising_gibbs_graph, kary_cube, lattice_walk, CubeSpec, Graph, IsingSpec,
    LatticeSpec, Model,
};
use ssd_core::{
    absorption_survival, build_dual, build_link, chebyshev_bound, check_g_monotone_direction,
    check_mobius_monotone, coupon_collector_bound, default_horizon, separation_curve, simulate_sst,
    spectrum_from_triangular, spectrum_numeric, time_reversal, verify_intertwining,
    verify_sharpness, ChainSpec, Direction, DualChain, Error as CoreError, MonotonicityReport,
    SimulationConfig, StepBound,
};

use crate::chainfile::{load_chain_file, load_dual, ChainFile, Meta};
use crate::{
    CliError, Command, DirectionArg, DualSource, ModelArgs, ModelCommand, ModelType,
    EXIT_MONOTONICITY, EXIT_RESIDUAL,
};

type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn execute(command: Command) -> Result<()> {
    match command {
        Command::Model(ModelCommand::Gen { model, output }) => model_gen(&model, output.as_deref()),
        Command::Check {
            chain,
            direction,
            tol,
        } => check(&chain, direction, tol),
        Command::Dual { chain, output } => dual(&chain, output.as_deref()),
        Command::Verify {
            chain,
            dual,
            horizon,
            tol,
        } => verify(&chain, &dual, horizon, tol),
        Command::Eigen {
            chain,
            dual,
            output,
        } => eigen(&chain, dual.as_deref(), output.as_deref()),
        Command::Separation {
            chain,
            dual,
            horizon,
            output,
        } => separation(&chain, dual.as_deref(), horizon, output.as_deref()),
        Command::Absorb {
            source,
            horizon,
            output,
        } => absorb(&source, horizon, output.as_deref()),
        Command::Bounds { model, c, chain } => bounds(&model, c, chain.as_deref()),
        Command::Simulate {
            source,
            samples,
            seed,
            horizon,
            output,
        } => simulate(&source, samples, seed, horizon, output.as_deref()),
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn emit_json<T: Serialize>(output: Option<&Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    emit(output, &text)
}

fn require<T>(value: Option<T>, flag: &str, model: &str) -> Result<T> {
    value.ok_or_else(|| CliError::Usage(format!("--{flag} is required for {model}")))
}

fn read_edges(path: &Path) -> Result<Vec<(usize, usize)>> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |message: String| CliError::Parse {
            path: path.display().to_string(),
            line: i + 1,
            column: 1,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = fields[..] else {
            return Err(parse_err(format!("expected `a b`, found {line:?}")));
        };
        let a = a.parse().map_err(|e| parse_err(format!("{a:?}: {e}")))?;
        let b = b.parse().map_err(|e| parse_err(format!("{b:?}: {e}")))?;
        edges.push((a, b));
    }
    Ok(edges)
}

fn build_model(args: &ModelArgs) -> Result<Model> {
    let model = match args.model_type {
        ModelType::IsingCircle => {
            ising_circle(require(args.big_n, "N", "ising-circle")?, args.beta)?
        }
        ModelType::IsingGraph => {
            let n = require(args.big_n, "N", "ising-graph")?;
            let path = require(args.edges.as_deref(), "edges", "ising-graph")?;
            let graph = Graph::new(n, &read_edges(path)?)?;
            ising_gibbs_graph(&IsingSpec::new(graph, args.beta)?)?
        }
        ModelType::Lattice => {
            let spec = LatticeSpec::new(
                require(args.big_n, "N", "lattice")?,
                require(args.lambda1, "lambda1", "lattice")?,
                require(args.lambda2, "lambda2", "lattice")?,
                require(args.mu1, "mu1", "lattice")?,
                require(args.mu2, "mu2", "lattice")?,
            )?;
            lattice_walk(&spec)?
        }
        ModelType::Cube => {
            let spec = CubeSpec::new(require(args.n, "n", "cube")?, require(args.k, "k", "cube")?)?;
            kary_cube(&spec)?
        }
    };
    for w in &model.warnings {
        eprintln!("warning: {w}");
    }
    Ok(model)
}

fn model_gen(args: &ModelArgs, output: Option<&Path>) -> Result<()> {
    let model = build_model(args)?;
    emit(output, &ChainFile::from_model(&model).to_json())
}

/// Loads a chain and fills in `pi` when the file has none.
fn load_with_pi(path: &Path) -> Result<(ChainFile, ChainSpec)> {
    let (file, chain) = load_chain_file(path)?;
    Ok((file, chain.with_stationary()?))
}

fn direction(arg: DirectionArg) -> Direction {
    match arg {
        DirectionArg::Down => Direction::Down,
        DirectionArg::Up => Direction::Up,
    }
}

#[derive(Serialize)]
struct CheckEntry {
    passed: bool,
    min_entry: f64,
    witness: (String, String),
}

impl CheckEntry {
    fn new(r: &MonotonicityReport, c: &ChainSpec, function: bool) -> Self {
        let (row, col) = r.witness;
        let row = if function {
            "g".to_string()
        } else {
            c.poset.label(row).to_string()
        };
        CheckEntry {
            passed: r.passed,
            min_entry: r.min_entry,
            witness: (row, c.poset.label(col).to_string()),
        }
    }
}

#[derive(Serialize)]
struct CheckReport {
    direction: Direction,
    tol: f64,
    kernel: CheckEntry,
    initial: Option<CheckEntry>,
    passed: bool,
}

fn check(path: &Path, dir: DirectionArg, tol: f64) -> Result<()> {
    let (_, raw) = load_chain_file(path)?;
    let dir = direction(dir);
    // Duality needs the reversed kernel; without a stationary law check P itself.
    let (kernel, initial) = match raw.clone().with_stationary() {
        Ok(c) => {
            let c = &c;
            let reversed = time_reversal(c)?;
            let kernel = check_mobius_monotone(&reversed, &c.poset, dir, tol)?;
            let initial = check_g_monotone_direction(c, dir, tol)?;
            (
                CheckEntry::new(&kernel, c, false),
                Some(CheckEntry::new(&initial, c, true)),
            )
        }
        Err(_) => {
            eprintln!("warning: no stationary law, checking P instead of its reversal");
            let kernel = check_mobius_monotone(&raw.p, &raw.poset, dir, tol)?;
            (CheckEntry::new(&kernel, &raw, false), None)
        }
    };
    let passed = kernel.passed && initial.as_ref().is_none_or(|i| i.passed);
    let report = CheckReport {
        direction: dir,
        tol,
        kernel,
        initial,
        passed,
    };
    emit_json(None, &report)?;
    if passed {
        return Ok(());
    }
    let failing = if report.kernel.passed {
        report.initial.as_ref().expect("initial check ran")
    } else {
        &report.kernel
    };
    Err(CliError::Failed {
        code: EXIT_MONOTONICITY,
        message: format!(
            "not Möbius monotone: entry {} at ({}, {})",
            failing.min_entry, failing.witness.0, failing.witness.1
        ),
    })
}

fn dual_meta(file: &ChainFile) -> Meta {
    Meta {
        model: file.meta.model.as_ref().map(|m| format!("{m}-dual")),
        params: file.meta.params.clone(),
    }
}

fn dual(path: &Path, output: Option<&Path>) -> Result<()> {
    let (file, chain) = load_with_pi(path)?;
    let d = build_dual(&chain)?;
    emit(
        output,
        &ChainFile::from_dual(&d, dual_meta(&file)).to_json(),
    )
}

#[derive(Serialize)]
struct VerifyReport {
    horizon: usize,
    tol: f64,
    intertwining_initial: f64,
    intertwining_kernel: f64,
    sharpness: f64,
    passed: bool,
}

fn verify(chain: &Path, dual: &Path, horizon: usize, tol: f64) -> Result<()> {
    let (_, c) = load_with_pi(chain)?;
    let d = load_dual(dual)?;
    let link = build_link(&c.poset, c.pi()?)?;
    let r = verify_intertwining(&c, &d, &link)?;
    let sharpness = verify_sharpness(&c, &d, horizon)?;
    let passed = r.max() <= tol && sharpness <= tol;
    emit_json(
        None,
        &VerifyReport {
            horizon,
            tol,
            intertwining_initial: r.initial,
            intertwining_kernel: r.kernel,
            sharpness,
            passed,
        },
    )?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Failed {
            code: EXIT_RESIDUAL,
            message: format!(
                "residual above {tol}: initial {}, kernel {}, sharpness {sharpness}",
                r.initial, r.kernel
            ),
        })
    }
}

/// The dual from `--dual`, or built from the chain; `None` when the chain
/// has no dual.
fn optional_dual(c: &ChainSpec, dual: Option<&Path>) -> Result<Option<DualChain>> {
    if let Some(path) = dual {
        return load_dual(path).map(Some);
    }
    match build_dual(c) {
        Ok(d) => Ok(Some(d)),
        Err(CoreError::MonotonicityViolated { .. } | CoreError::NoUniqueMax { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn eigen(chain: &Path, dual: Option<&Path>, output: Option<&Path>) -> Result<()> {
    let (_, c) = load_with_pi(chain)?;
    let triangular = match optional_dual(&c, dual)? {
        Some(d) => match spectrum_from_triangular(&d) {
            Ok(s) => Some(s),
            Err(CoreError::NotTriangular { .. }) => None,
            Err(e) => return Err(e.into()),
        },
        None => None,
    };
    let report = match triangular {
        Some(s) => s,
        None => spectrum_numeric(&c)?,
    };
    emit_json(output, &report)
}

#[derive(Serialize)]
struct CurveRow {
    n: usize,
    separation: f64,
    tv: f64,
    survival: Option<f64>,
}

fn separation(
    chain: &Path,
    dual: Option<&Path>,
    horizon: usize,
    output: Option<&Path>,
) -> Result<()> {
    let (_, c) = load_with_pi(chain)?;
    let curve = separation_curve(&c, horizon)?;
    let survival = match optional_dual(&c, dual)? {
        Some(d) => Some(absorption_survival(&d, horizon)?.survival),
        None => {
            eprintln!("warning: chain has no dual, survival column left empty");
            None
        }
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    for n in 0..=horizon {
        w.serialize(CurveRow {
            n,
            separation: curve.separation[n],
            tv: curve.tv[n],
            survival: survival.as_ref().map(|s| s[n]),
        })
        .expect("in-memory csv");
    }
    let bytes = w.into_inner().expect("in-memory csv");
    emit(output, &String::from_utf8(bytes).expect("csv is utf-8"))
}

fn resolve_dual(source: &DualSource) -> Result<DualChain> {
    match (&source.dual, &source.chain) {
        (Some(path), _) => load_dual(path),
        (None, Some(path)) => {
            let (_, c) = load_with_pi(path)?;
            Ok(build_dual(&c)?)
        }
        (None, None) => Err(CliError::Usage(
            "one of --dual or --chain is required".into(),
        )),
    }
}

#[derive(Serialize)]
struct AbsorbReport {
    horizon: usize,
    mean: f64,
    variance: f64,
    survival: Vec<f64>,
}

fn absorb(source: &DualSource, horizon: Option<usize>, output: Option<&Path>) -> Result<()> {
    let d = resolve_dual(source)?;
    let horizon = match horizon {
        Some(h) => h,
        None => default_horizon(absorption_survival(&d, 0)?.mean),
    };
    let law = absorption_survival(&d, horizon)?;
    emit_json(
        output,
        &AbsorbReport {
            horizon,
            mean: law.mean,
            variance: law.variance,
            survival: law.survival,
        },
    )
}

#[derive(Serialize)]
struct BoundReport {
    kind: &'static str,
    steps: usize,
    bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    separation: Option<f64>,
}

fn bounds(args: &ModelArgs, c: f64, chain: Option<&Path>) -> Result<()> {
    let (kind, bound): (&'static str, StepBound) = match args.model_type {
        ModelType::IsingCircle | ModelType::IsingGraph => (
            "coupon-collector",
            coupon_collector_bound(require(args.big_n, "N", "the coupon-collector bound")?, c)?,
        ),
        ModelType::Cube => (
            "chebyshev",
            chebyshev_bound(
                require(args.n, "n", "the Chebyshev bound")?,
                require(args.k, "k", "the Chebyshev bound")?,
                c,
            )?,
        ),
        ModelType::Lattice => {
            return Err(CliError::Usage(
                "no closed-form bound for the lattice walk".into(),
            ))
        }
    };
    let separation = match chain {
        Some(path) => {
            let (_, chain) = load_with_pi(path)?;
            Some(separation_curve(&chain, bound.steps)?.separation[bound.steps])
        }
        None => None,
    };
    emit_json(
        None,
        &BoundReport {
            kind,
            steps: bound.steps,
            bound: bound.bound,
            separation,
        },
    )
}

#[derive(Serialize)]
struct SimulateReport {
    samples: usize,
    seed: u64,
    horizon: usize,
    mean: f64,
    variance: f64,
    survival: Vec<f64>,
}

fn simulate(
    source: &DualSource,
    samples: usize,
    seed: u64,
    horizon: Option<usize>,
    output: Option<&Path>,
) -> Result<()> {
    let d = resolve_dual(source)?;
    let horizon = match horizon {
        Some(h) => h,
        None => default_horizon(absorption_survival(&d, 0)?.mean),
    };
    let law = simulate_sst(
        &d,
        SimulationConfig {
            samples,
            seed,
            horizon,
        },
    )?;
    emit_json(
        output,
        &SimulateReport {
            samples,
            seed,
            horizon,
            mean: law.mean,
            variance: law.variance,
            survival: law.survival,
        },
    )
}
