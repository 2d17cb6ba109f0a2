//! Command implementations. Each writes its primary report either to the
//! requested file or to `out`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use copent_core::correlation::{SAMPLES_PER_COORDINATE, SPARSE_BIN_COUNT};
use copent_core::knn::MIN_DISTANCE;
use copent_core::oracles::{grid_convergence, GridConvergence};
use copent_core::{
    assemble_budget, compute_rdf, copula_entropy, entropy_decomposition_check, extractable_work,
    gaussian_ce, gaussian_entropy, momentum_entropy, run_canonical, sample_gaussian, BoxSpec,
    CorrelationMatrix, DecompositionReport, EntropyBudget, PairVariant, PotentialSpec,
    SampleMatrix, Trajectory, UnitsSpec, WorkQuery,
};
use serde::Serialize;

use crate::cli::{
    BudgetArgs, Command, EstimateArgs, Format, MarginalArg, OracleCommand, PotentialArg,
    SampleGaussianArgs, SimulateArgs, WorkArgs,
};
use crate::config::{resolve_seed, SimConfig};
use crate::error::{CliError, Result};
use crate::io::{self, TrajectoryMetadata, SCHEMA_VERSION, TRAJECTORY_METADATA_KIND};

/// Runs one parsed command. `env_seed` is the raw value of `COPENT_SEED`.
pub fn run(command: Command, env_seed: Option<&str>, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Ce(args) => cmd_ce(&args, env_seed, out),
        Command::Decompose(args) => cmd_decompose(&args, env_seed, out),
        Command::Simulate(args) => cmd_simulate(&args, env_seed, out),
        Command::Budget(args) => cmd_budget(&args, out),
        Command::Oracle { which } => cmd_oracle(which, out),
        Command::SampleGaussian(args) => cmd_sample_gaussian(&args, env_seed, out),
        Command::Work(args) => cmd_work(&args, out),
    }
}

fn emit(bytes: &[u8], output: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match output {
        Some(path) => io::write_bytes(path, bytes),
        None => out
            .write_all(bytes)
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn emit_json<T: Serialize>(value: &T, output: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    emit(&io::to_json_bytes(value)?, output, out)
}

fn csv_table(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)
        .map_err(|e| CliError::Input(e.to_string()))?;
    for row in rows {
        w.write_record(row)
            .map_err(|e| CliError::Input(e.to_string()))?;
    }
    w.into_inner().map_err(|e| CliError::Input(e.to_string()))
}

#[derive(Debug, Serialize)]
struct EstimateConfig {
    input: String,
    k: usize,
    tie_policy: copent_core::TiePolicy,
    estimator: &'static str,
    format: &'static str,
}

fn estimate_config(args: &EstimateArgs, env_seed: Option<&str>) -> Result<EstimateConfig> {
    let seed = resolve_seed(args.seed, env_seed)?.unwrap_or(0);
    Ok(EstimateConfig {
        input: args.input.display().to_string(),
        k: args.k,
        tie_policy: args.tie_policy.policy(seed),
        estimator: "clipped_chebyshev_knn",
        format: match args.format {
            Format::Json => "json",
            Format::Csv => "csv",
        },
    })
}

fn load_input(args: &EstimateArgs) -> Result<SampleMatrix> {
    let samples = io::read_sample_csv(&args.input)?;
    if samples.d() < 2 {
        return Err(CliError::Parameter(format!(
            "{} has {} column; copula entropy needs at least 2",
            args.input.display(),
            samples.d()
        )));
    }
    if args.k == 0 || args.k >= samples.n() {
        return Err(CliError::Parameter(format!(
            "k = {} needs 1 <= k < n = {}",
            args.k,
            samples.n()
        )));
    }
    Ok(samples)
}

#[derive(Debug, Serialize)]
struct CeReport {
    schema_version: u32,
    kind: &'static str,
    copula_entropy_nats: f64,
    copula_entropy_bits: f64,
    mutual_information_nats: f64,
    n: usize,
    d: usize,
    columns: Vec<String>,
    floored_distances: usize,
    config: EstimateConfig,
}

pub fn cmd_ce(args: &EstimateArgs, env_seed: Option<&str>, out: &mut dyn Write) -> Result<()> {
    let config = estimate_config(args, env_seed)?;
    let samples = load_input(args)?;
    let est = copula_entropy(&samples, args.k, config.tie_policy)?;
    let report = CeReport {
        schema_version: SCHEMA_VERSION,
        kind: "copula_entropy",
        copula_entropy_nats: est.value,
        copula_entropy_bits: est.bits(),
        mutual_information_nats: -est.value,
        n: est.n,
        d: est.d,
        columns: samples
            .column_names()
            .map(<[String]>::to_vec)
            .unwrap_or_default(),
        floored_distances: est.floored,
        config,
    };
    match args.format {
        Format::Json => emit_json(&report, args.output.as_deref(), out),
        Format::Csv => {
            let row = vec![
                report.copula_entropy_nats.to_string(),
                report.copula_entropy_bits.to_string(),
                report.mutual_information_nats.to_string(),
                report.n.to_string(),
                report.d.to_string(),
                args.k.to_string(),
                report.floored_distances.to_string(),
            ];
            let header = [
                "copula_entropy_nats",
                "copula_entropy_bits",
                "mutual_information_nats",
                "n",
                "d",
                "k",
                "floored_distances",
            ];
            emit(&csv_table(&header, &[row])?, args.output.as_deref(), out)
        }
    }
}

#[derive(Debug, Serialize)]
struct DecomposeReport {
    schema_version: u32,
    kind: &'static str,
    columns: Vec<String>,
    #[serde(flatten)]
    report: DecompositionReport,
    config: EstimateConfig,
}

pub fn cmd_decompose(
    args: &EstimateArgs,
    env_seed: Option<&str>,
    out: &mut dyn Write,
) -> Result<()> {
    let config = estimate_config(args, env_seed)?;
    let samples = load_input(args)?;
    let report = entropy_decomposition_check(&samples, args.k, config.tie_policy)?;
    let columns: Vec<String> = samples
        .column_names()
        .map(<[String]>::to_vec)
        .unwrap_or_default();
    match args.format {
        Format::Json => emit_json(
            &DecomposeReport {
                schema_version: SCHEMA_VERSION,
                kind: "entropy_decomposition",
                columns,
                report,
                config,
            },
            args.output.as_deref(),
            out,
        ),
        Format::Csv => {
            let mut rows = vec![vec![
                "joint_entropy".to_string(),
                report.joint_entropy.to_string(),
            ]];
            for (name, h) in columns.iter().zip(&report.marginal_entropies) {
                rows.push(vec![format!("marginal_entropy:{name}"), h.to_string()]);
            }
            rows.push(vec![
                "copula_entropy".into(),
                report.copula_entropy.to_string(),
            ]);
            rows.push(vec!["residual".into(), report.residual.to_string()]);
            emit(
                &csv_table(&["quantity", "value"], &rows)?,
                args.output.as_deref(),
                out,
            )
        }
    }
}

#[derive(Debug, Serialize)]
struct SimulateSummary {
    schema_version: u32,
    kind: &'static str,
    trajectory: String,
    metadata: String,
    n_samples: usize,
    acceptance_rate: f64,
    warnings: Vec<String>,
}

pub fn cmd_simulate(
    args: &SimulateArgs,
    env_seed: Option<&str>,
    out: &mut dyn Write,
) -> Result<()> {
    let seed = resolve_seed(args.seed, env_seed)?;
    let mut config = SimConfig::load(&args.config, seed)?;
    if let Some(prefix) = &args.output_prefix {
        config.output_prefix = prefix.clone();
    }
    let trajectory = run_canonical(
        &config.params,
        &config.potential,
        &config.sim_box,
        &config.units,
    )?;
    let csv_bytes = io::trajectory_csv_bytes(&trajectory)?;
    let csv_path = format!("{}.csv", config.output_prefix);
    let json_path = format!("{}.json", config.output_prefix);
    let file_name = Path::new(&csv_path)
        .file_name()
        .map(|f| f.to_string_lossy().into_owned())
        .unwrap_or_else(|| csv_path.clone());
    let meta = TrajectoryMetadata {
        schema_version: SCHEMA_VERSION,
        kind: TRAJECTORY_METADATA_KIND.into(),
        params: config.params,
        potential: config.potential,
        sim_box: config.sim_box,
        units: config.units,
        seed: config.params.seed,
        acceptance_rate: trajectory.acceptance_rate,
        n_samples: trajectory.n_samples(),
        max_energy_drift: trajectory.max_energy_drift,
        overlap_events: trajectory.overlap_events,
        warnings: trajectory.warnings.clone(),
        trajectory_file: file_name,
        trajectory_sha256: io::sha256_hex(&csv_bytes),
        config: config.resolved(),
    };
    io::write_bytes(Path::new(&csv_path), &csv_bytes)?;
    io::write_bytes(Path::new(&json_path), &io::to_json_bytes(&meta)?)?;
    emit_json(
        &SimulateSummary {
            schema_version: SCHEMA_VERSION,
            kind: "simulation",
            trajectory: csv_path,
            metadata: json_path,
            n_samples: trajectory.n_samples(),
            acceptance_rate: trajectory.acceptance_rate,
            warnings: trajectory.warnings,
        },
        None,
        out,
    )
}

/// Loads a trajectory and checks it against its metadata sidecar.
pub fn load_trajectory(csv_path: &Path, meta: &TrajectoryMetadata) -> Result<Trajectory> {
    let bytes = io::read_bytes(csv_path)?;
    let digest = io::sha256_hex(&bytes);
    if digest != meta.trajectory_sha256 {
        return Err(CliError::Consistency(format!(
            "{} has sha256 {digest}, metadata expects {}",
            csv_path.display(),
            meta.trajectory_sha256
        )));
    }
    let coords = io::parse_trajectory_csv(&bytes, meta.params.particles, meta.sim_box.dimension)?;
    let trajectory = Trajectory::from_parts(
        coords,
        meta.params,
        meta.potential,
        meta.sim_box,
        meta.acceptance_rate,
    )?;
    if trajectory.n_samples() != meta.n_samples {
        return Err(CliError::Consistency(format!(
            "trajectory holds {} configurations, metadata records {}",
            trajectory.n_samples(),
            meta.n_samples
        )));
    }
    Ok(trajectory)
}

#[derive(Debug, Serialize)]
struct Tolerances {
    min_knn_distance: f64,
    max_floored_fraction: f64,
    sparse_bin_count: u64,
    samples_per_coordinate: usize,
}

#[derive(Debug, Serialize)]
struct Provenance {
    seed: u64,
    params: copent_core::SimParams,
    potential: PotentialSpec,
    #[serde(rename = "box")]
    sim_box: BoxSpec,
    units: UnitsSpec,
    acceptance_rate: f64,
    trajectory_sha256: String,
    tolerances: Tolerances,
}

#[derive(Debug, Serialize)]
struct RdfSummary {
    bins: usize,
    r_max: f64,
    rho: f64,
    n_samples: usize,
}

#[derive(Debug, Serialize)]
struct BudgetConfig {
    trajectory: String,
    metadata: String,
    variant: PairVariant,
    k: usize,
    bins: usize,
    r_max: f64,
}

#[derive(Debug, Serialize)]
struct BudgetReport {
    schema_version: u32,
    kind: &'static str,
    variant: PairVariant,
    s_g_selected: f64,
    total_selected: f64,
    higher_order_estimate: f64,
    budget: EntropyBudget,
    rdf: RdfSummary,
    provenance: Provenance,
    config: BudgetConfig,
}

pub fn cmd_budget(args: &BudgetArgs, out: &mut dyn Write) -> Result<()> {
    let meta = io::read_metadata(&args.metadata)?;
    let trajectory = load_trajectory(&args.trajectory, &meta)?;
    let r_max = args.r_max.unwrap_or(0.5 * meta.sim_box.side_length);
    let rdf = compute_rdf(&trajectory, args.bins, r_max)?;
    let budget = assemble_budget(&trajectory, &rdf, meta.params.beta, &meta.units, args.k)?;
    if let Some(path) = &args.rdf_output {
        io::write_bytes(path, &io::rdf_csv_bytes(&rdf)?)?;
    }
    let variant = PairVariant::from(args.variant);
    let (s_g_selected, total_selected) = match variant {
        PairVariant::Green => (budget.s_g_pair_green, budget.total_green_form),
        PairVariant::Paper => (budget.s_g_pair_paper, budget.total_paper_form),
    };
    let report = BudgetReport {
        schema_version: SCHEMA_VERSION,
        kind: "entropy_budget",
        variant,
        s_g_selected,
        total_selected,
        higher_order_estimate: budget.higher_order_estimate(),
        rdf: RdfSummary {
            bins: rdf.n_bins(),
            r_max,
            rho: rdf.rho,
            n_samples: rdf.n_samples,
        },
        provenance: Provenance {
            seed: meta.seed,
            params: meta.params,
            potential: meta.potential,
            sim_box: meta.sim_box,
            units: meta.units,
            acceptance_rate: meta.acceptance_rate,
            trajectory_sha256: meta.trajectory_sha256.clone(),
            tolerances: Tolerances {
                min_knn_distance: MIN_DISTANCE,
                max_floored_fraction: copent_core::copula::MAX_FLOORED_FRACTION,
                sparse_bin_count: SPARSE_BIN_COUNT,
                samples_per_coordinate: SAMPLES_PER_COORDINATE,
            },
        },
        config: BudgetConfig {
            trajectory: args.trajectory.display().to_string(),
            metadata: args.metadata.display().to_string(),
            variant,
            k: args.k,
            bins: args.bins,
            r_max,
        },
        budget,
    };
    emit_json(&report, args.output.as_deref(), out)
}

#[derive(Debug, Serialize)]
struct OracleReport<T: Serialize> {
    schema_version: u32,
    kind: &'static str,
    oracle: &'static str,
    params: BTreeMap<&'static str, String>,
    #[serde(flatten)]
    result: T,
}

#[derive(Debug, Serialize)]
struct Value {
    value: f64,
}

pub fn cmd_oracle(which: OracleCommand, out: &mut dyn Write) -> Result<()> {
    let mut params = BTreeMap::new();
    match which {
        OracleCommand::GaussianCe { rho, dim } => {
            let r = CorrelationMatrix::equicorrelated(dim, rho)?;
            params.insert("rho", rho.to_string());
            params.insert("dim", dim.to_string());
            emit_oracle(
                "gaussian_ce",
                params,
                Value {
                    value: gaussian_ce(&r),
                },
                out,
            )
        }
        OracleCommand::GaussianEntropy { dim, variance, rho } => {
            if !(variance > 0.0) {
                return Err(CliError::Parameter(format!(
                    "variance must be positive, got {variance}"
                )));
            }
            let r = CorrelationMatrix::equicorrelated(dim, rho)?;
            let cov: Vec<f64> = r.entries().iter().map(|v| v * variance).collect();
            params.insert("dim", dim.to_string());
            params.insert("variance", variance.to_string());
            params.insert("rho", rho.to_string());
            emit_oracle(
                "gaussian_entropy",
                params,
                Value {
                    value: gaussian_entropy(&cov, dim)?,
                },
                out,
            )
        }
        OracleCommand::GridCe {
            potential,
            eps,
            sigma,
            r_cut,
            beta,
            m,
            particles,
            length,
        } => {
            let spec = match potential {
                PotentialArg::Ideal => PotentialSpec::Ideal,
                PotentialArg::Cosine => PotentialSpec::CosineWell { epsilon: eps },
                PotentialArg::LennardJones => PotentialSpec::LennardJones {
                    epsilon: eps,
                    sigma,
                    r_cut,
                    shifted: true,
                },
            };
            let sim_box = BoxSpec::new(1, length)?;
            let conv: GridConvergence = grid_convergence(&spec, beta, &sim_box, particles, m)?;
            params.insert("potential", format!("{potential:?}").to_lowercase());
            params.insert("eps", eps.to_string());
            params.insert("beta", beta.to_string());
            params.insert("m", m.to_string());
            params.insert("particles", particles.to_string());
            params.insert("length", length.to_string());
            emit_oracle("grid_correlation_entropy", params, conv, out)
        }
        OracleCommand::MomentumEntropy {
            beta,
            dimension,
            mass,
        } => {
            let units = UnitsSpec {
                mass,
                ..UnitsSpec::default()
            };
            params.insert("beta", beta.to_string());
            params.insert("dimension", dimension.to_string());
            params.insert("mass", mass.to_string());
            emit_oracle(
                "momentum_entropy",
                params,
                Value {
                    value: momentum_entropy(beta, &units, dimension)?,
                },
                out,
            )
        }
    }
}

fn emit_oracle<T: Serialize>(
    oracle: &'static str,
    params: BTreeMap<&'static str, String>,
    result: T,
    out: &mut dyn Write,
) -> Result<()> {
    emit_json(
        &OracleReport {
            schema_version: SCHEMA_VERSION,
            kind: "oracle",
            oracle,
            params,
            result,
        },
        None,
        out,
    )
}

/// Standard normal CDF.
fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

pub fn cmd_sample_gaussian(
    args: &SampleGaussianArgs,
    env_seed: Option<&str>,
    out: &mut dyn Write,
) -> Result<()> {
    let seed = resolve_seed(args.seed, env_seed)?.unwrap_or(42);
    let r = CorrelationMatrix::equicorrelated(args.dim, args.rho)?;
    let mut samples = sample_gaussian(&r, args.n, seed)?;
    if args.marginal == MarginalArg::Uniform {
        for j in 0..samples.d() {
            samples = samples.map_column(j, normal_cdf)?;
        }
    }
    let names = (0..args.dim).map(|j| format!("x{j}")).collect();
    let samples = samples.with_column_names(names)?;
    io::write_bytes(&args.output, &io::sample_csv_bytes(&samples)?)?;
    let mut params = BTreeMap::new();
    params.insert("rho", args.rho.to_string());
    params.insert("dim", args.dim.to_string());
    params.insert("n", args.n.to_string());
    params.insert("seed", seed.to_string());
    params.insert("marginal", format!("{:?}", args.marginal).to_lowercase());
    params.insert("output", args.output.display().to_string());
    emit_oracle(
        "sample_gaussian",
        params,
        Value {
            value: gaussian_ce(&r),
        },
        out,
    )
}

#[derive(Debug, Serialize)]
struct WorkReport {
    schema_version: u32,
    kind: &'static str,
    query: WorkQuery,
    work: f64,
}

pub fn cmd_work(args: &WorkArgs, out: &mut dyn Write) -> Result<()> {
    let query = WorkQuery::new(args.energy, args.temperature, args.delta_s)?;
    emit_json(
        &WorkReport {
            schema_version: SCHEMA_VERSION,
            kind: "work",
            query,
            work: extractable_work(&query),
        },
        None,
        out,
    )
}
