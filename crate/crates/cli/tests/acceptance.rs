//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use copent::config::SimConfig;
use copent::io::read_sample_csv;
use copent_core::correlation::shell_measure;
use copent_core::oracles::{gaussian_ce, grid_convergence, sample_gaussian, CorrelationMatrix};
use copent_core::{
    assemble_budget, compute_rdf, configurational_ce, copula_entropy, entropy_decomposition_check,
    extractable_work, pair_entropy, run_canonical, sample_momenta, PairVariant, RdfEstimate,
    SampleMatrix, TiePolicy, Trajectory, WorkQuery, DEFAULT_K,
};

const K: usize = DEFAULT_K;
const SEEDS: u64 = 10;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn repo_path(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(rel)
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn simulate(config: &str) -> Trajectory {
    let cfg = SimConfig::load(&repo_path(config), None).unwrap();
    run_canonical(&cfg.params, &cfg.potential, &cfg.sim_box, &cfg.units).unwrap()
}

fn cosine_oracle(particles: usize, grid_m: usize) -> (f64, f64) {
    let cfg = SimConfig::load(
        &repo_path(&format!("configs/cosine_n{particles}.conf")),
        None,
    )
    .unwrap();
    let conv = grid_convergence(
        &cfg.potential,
        cfg.params.beta,
        &cfg.sim_box,
        particles,
        grid_m,
    )
    .unwrap();
    (conv.value, conv.delta)
}

fn gaussian_accuracy() -> Outcome {
    let r = CorrelationMatrix::equicorrelated(2, 0.5).unwrap();
    let truth = gaussian_ce(&r);
    let mut errors = Vec::new();
    let mut slowest = Duration::ZERO;
    for seed in 0..SEEDS {
        let start = Instant::now();
        let m = sample_gaussian(&r, 10_000, seed).unwrap();
        let ce = copula_entropy(&m, K, TiePolicy::Average).unwrap().value;
        slowest = slowest.max(start.elapsed());
        errors.push((ce - truth).abs());
    }
    let med = median(errors);
    let oracle_ok = (truth - -0.14384).abs() < 5e-6;
    outcome(
        med <= 0.03 && slowest.as_secs_f64() <= 10.0 && oracle_ok,
        format!(
            "oracle {truth:.5}, median |error| {med:.4} (<= 0.03), slowest seed {:.2} s (<= 10 s)",
            slowest.as_secs_f64()
        ),
    )
}

fn decomposition_identity() -> Outcome {
    let r = CorrelationMatrix::equicorrelated(3, 0.5).unwrap();
    let truth = gaussian_ce(&r);
    let (mut residuals, mut errors) = (Vec::new(), Vec::new());
    for seed in 0..SEEDS {
        let m = sample_gaussian(&r, 10_000, seed).unwrap();
        let rep = entropy_decomposition_check(&m, K, TiePolicy::Average).unwrap();
        residuals.push(rep.residual.abs());
        errors.push((rep.copula_entropy - truth).abs());
    }
    let (res, err) = (median(residuals), median(errors));
    outcome(
        res <= 0.1 && err <= 0.05 && (truth - -0.34657).abs() < 5e-6,
        format!("median |residual| {res:.4} (<= 0.1), median |CE - {truth:.5}| {err:.4} (<= 0.05)"),
    )
}

fn monotone_invariance() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for name in ["gauss_rho05.csv", "independent_normals.csv"] {
        let m = read_sample_csv(&fixture(name)).unwrap();
        let base = copula_entropy(&m, K, TiePolicy::Average).unwrap().value;
        let mut exp = m.clone();
        let mut cube = m.clone();
        for j in 0..m.d() {
            exp = exp.map_column(j, f64::exp).unwrap();
            cube = cube.map_column(j, |v| v * v * v).unwrap();
        }
        let e = copula_entropy(&exp, K, TiePolicy::Average).unwrap().value;
        let c = copula_entropy(&cube, K, TiePolicy::Average).unwrap().value;
        let same = base.to_bits() == e.to_bits() && base.to_bits() == c.to_bits();
        pass &= same;
        details.push(format!(
            "{name}: {}",
            if same { "bit-identical" } else { "differs" }
        ));
    }
    outcome(pass, details.join(", "))
}

fn non_positivity() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    for i in 0..20 {
        let rho = 0.3 + 0.65 * i as f64 / 19.0;
        let d = 2 + i % 2;
        let r = CorrelationMatrix::equicorrelated(d, rho).unwrap();
        let m = sample_gaussian(&r, 10_000, 1000 + i as u64).unwrap();
        worst = worst.max(copula_entropy(&m, K, TiePolicy::Average).unwrap().value);
    }
    outcome(
        worst <= 0.02,
        format!("largest CE over 20 datasets {worst:.4} (<= 0.02)"),
    )
}

fn rdf_worst_z(rdf: &RdfEstimate) -> f64 {
    (0..rdf.n_bins())
        .filter(|&b| rdf.pair_counts[b] >= 100)
        .map(|b| (rdf.g_values[b] - 1.0).abs() / rdf.std_errors[b])
        .fold(0.0, f64::max)
}

fn ideal_gas_null() -> Outcome {
    let start = Instant::now();
    let traj = simulate("configs/ideal_n5.conf");
    let ce = configurational_ce(&traj, K, TiePolicy::Average)
        .unwrap()
        .value;
    let rdf = compute_rdf(&traj, 32, 0.5 * traj.sim_box.side_length).unwrap();
    let z = rdf_worst_z(&rdf);
    let secs = start.elapsed().as_secs_f64();
    outcome(
        traj.n_samples() == 10_000 && ce.abs() <= 0.1 && z <= 3.0 && traj.acceptance_rate == 1.0 && secs <= 30.0,
        format!(
            "s = {}, |CE| {:.4} (<= 0.1), worst |g - 1|/SE {z:.2} (<= 3), acceptance {}, {secs:.2} s (<= 30 s)",
            traj.n_samples(),
            ce.abs(),
            traj.acceptance_rate
        ),
    )
}

fn two_particle_oracle() -> Outcome {
    let start = Instant::now();
    let (oracle, delta) = cosine_oracle(2, 512);
    let traj = simulate("configs/cosine_n2.conf");
    let rdf = compute_rdf(&traj, 64, 0.5 * traj.sim_box.side_length).unwrap();
    let budget = assemble_budget(&traj, &rdf, traj.params.beta, &Default::default(), K).unwrap();
    let ce_err = (budget.s_g_direct_ce - oracle).abs();
    let green_err = (budget.s_g_pair_green - oracle).abs();
    let secs = start.elapsed().as_secs_f64();
    outcome(
        traj.n_samples() == 50_000 && ce_err <= 0.05 && green_err <= 0.05 && delta < 1e-4 && secs <= 60.0,
        format!(
            "oracle {oracle:.5} (delta {delta:.1e}), direct CE {:.4} (err {ce_err:.4}), green pair {:.4} (err {green_err:.4}), {secs:.2} s (<= 60 s)",
            budget.s_g_direct_ce, budget.s_g_pair_green
        ),
    )
}

fn third_order_visibility() -> Outcome {
    let (oracle, delta) = cosine_oracle(3, 128);
    let traj = simulate("configs/cosine_n3.conf");
    let rdf = compute_rdf(&traj, 64, 0.5 * traj.sim_box.side_length).unwrap();
    let budget = assemble_budget(&traj, &rdf, traj.params.beta, &Default::default(), K).unwrap();
    let err = (budget.s_g_direct_ce - oracle).abs();
    let gap = oracle - budget.s_g_pair_green;
    outcome(
        err <= 0.08,
        format!(
            "oracle {oracle:.5} (delta {delta:.1e}), direct CE {:.4} (err {err:.4} <= 0.08), pair truncation {:.4}, higher-order gap {gap:+.4}",
            budget.s_g_direct_ce, budget.s_g_pair_green
        ),
    )
}

fn variant_algebra() -> Outcome {
    let mut worst = 0.0f64;
    let mut rdfs = Vec::new();
    for cfg in [
        "configs/cosine_n2.conf",
        "configs/cosine_n3.conf",
        "configs/ideal_n5.conf",
    ] {
        let traj = simulate(cfg);
        rdfs.push(compute_rdf(&traj, 64, 0.5 * traj.sim_box.side_length).unwrap());
    }
    let g: Vec<f64> = (0..50)
        .map(|b| 1.0 + 0.5 * ((b as f64) * 0.3).sin())
        .collect();
    rdfs.push(RdfEstimate::from_profile(g, 3.0, 0.8, 3).unwrap());
    for rdf in &rdfs {
        let gap = pair_entropy(rdf, PairVariant::Paper) - pair_entropy(rdf, PairVariant::Green);
        let integral: f64 = (0..rdf.n_bins())
            .map(|b| {
                let lo = b as f64 * rdf.bin_width;
                shell_measure(rdf.dimension, lo, lo + rdf.bin_width) * (rdf.g_values[b] - 1.0)
            })
            .sum();
        worst = worst.max((gap - -0.5 * rdf.rho * integral).abs());
    }
    outcome(
        worst <= 1e-9,
        format!(
            "largest deviation over {} profiles {worst:.2e} (<= 1e-9)",
            rdfs.len()
        ),
    )
}

fn momentum_factorisation() -> Outcome {
    let n = 100_000;
    let mut cfg = SimConfig::load(&repo_path("configs/cosine_n2.conf"), None).unwrap();
    cfg.params.sweeps = cfg.params.burn_in + n * cfg.params.thinning;
    let traj = run_canonical(&cfg.params, &cfg.potential, &cfg.sim_box, &cfg.units).unwrap();
    let p = sample_momenta(2, 3, cfg.params.beta, &cfg.units, n, 17).unwrap();
    let among = copula_entropy(
        &SampleMatrix::new(n, 6, p.clone()).unwrap(),
        K,
        TiePolicy::Average,
    )
    .unwrap()
    .value;

    // both positions next to one momentum component per particle; the
    // position block alone is the baseline, so the momenta must add nothing
    let q = traj.coordinates();
    let joint: Vec<f64> = (0..n)
        .flat_map(|i| [q[2 * i], q[2 * i + 1], p[6 * i], p[6 * i + 3]])
        .collect();
    let mixed = copula_entropy(
        &SampleMatrix::new(n, 4, joint).unwrap(),
        K,
        TiePolicy::Average,
    )
    .unwrap()
    .value;
    let q_ce = copula_entropy(
        &SampleMatrix::new(n, 2, q.to_vec()).unwrap(),
        K,
        TiePolicy::Average,
    )
    .unwrap()
    .value;
    let pq: Vec<f64> = (0..n).flat_map(|i| [q[2 * i], p[6 * i]]).collect();
    let single = copula_entropy(&SampleMatrix::new(n, 2, pq).unwrap(), K, TiePolicy::Average)
        .unwrap()
        .value;
    let cross = mixed - q_ce;
    outcome(
        traj.n_samples() == n && among.abs() <= 0.05 && single.abs() <= 0.05 && cross.abs() <= 0.05,
        format!(
            "among 6 momentum components {among:+.4}, position-momentum pair {single:+.4}, \
             momenta added to positions {cross:+.4} (all |.| <= 0.05, {n} draws)"
        ),
    )
}

fn work_arithmetic() -> Outcome {
    let w = extractable_work(&WorkQuery::new(10.0, 2.0, 1.0).unwrap());
    let zero: Vec<bool> = [(0.0, 1.0), (3.25, 7.0), (-12.5, 0.3), (1e6, 1e-3)]
        .iter()
        .map(|&(e, t)| extractable_work(&WorkQuery::new(e, t, 0.0).unwrap()) == e)
        .collect();
    outcome(
        w == 8.0 && zero.iter().all(|&z| z),
        format!(
            "extractable_work(10, 2, 1) = {w}, W = E at delta_s = 0 for {}/4 cases",
            zero.iter().filter(|&&z| z).count()
        ),
    )
}

fn run_cli(dir: &Path, args: &[&str]) -> bool {
    Command::new(env!("CARGO_BIN_EXE_copent"))
        .args(args)
        .current_dir(dir)
        .env_remove("COPENT_SEED")
        .stdout(std::process::Stdio::null())
        .status()
        .map(|s| s.success())
        .unwrap_or(false)
}

fn cli_reproducibility() -> Outcome {
    let cfg = repo_path("configs/cosine_n2.conf");
    let cfg = cfg.to_str().unwrap();
    let fixture = fixture("gauss_rho05.csv");
    let fixture = fixture.to_str().unwrap();
    let commands: [&[&str]; 5] = [
        &["simulate", "--config", cfg],
        &[
            "budget",
            "--trajectory",
            "cosine_n2.csv",
            "--metadata",
            "cosine_n2.json",
            "--output",
            "budget.json",
            "--rdf-output",
            "rdf.csv",
        ],
        &["ce", "--input", fixture, "--output", "ce.json"],
        &[
            "decompose",
            "--input",
            fixture,
            "--tie-policy",
            "jitter",
            "--seed",
            "4",
            "--output",
            "decompose.json",
        ],
        &[
            "sample-gaussian",
            "--rho",
            "0.4",
            "--dim",
            "3",
            "--n",
            "2000",
            "--seed",
            "8",
            "--output",
            "sample.csv",
        ],
    ];
    let files = [
        "cosine_n2.csv",
        "cosine_n2.json",
        "budget.json",
        "rdf.csv",
        "ce.json",
        "decompose.json",
        "sample.csv",
    ];
    let snapshot = |dir: &Path| -> Option<Vec<Vec<u8>>> {
        commands.iter().all(|args| run_cli(dir, args)).then(|| {
            files
                .iter()
                .map(|f| std::fs::read(dir.join(f)).unwrap())
                .collect()
        })
    };
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    match (
        snapshot(first.path()),
        snapshot(second.path()),
        snapshot(first.path()),
    ) {
        (Some(a), Some(b), Some(c)) => {
            let same = files
                .iter()
                .enumerate()
                .filter(|&(i, _)| a[i] == b[i] && a[i] == c[i])
                .count();
            outcome(
                same == files.len(),
                format!(
                    "{same}/{} output files byte-identical across three runs",
                    files.len()
                ),
            )
        }
        _ => outcome(false, "a CLI command failed".to_string()),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("gaussian copula entropy accuracy", gaussian_accuracy),
        ("entropy decomposition identity", decomposition_identity),
        ("exact monotone invariance", monotone_invariance),
        ("non-positivity suite", non_positivity),
        ("ideal-gas null", ideal_gas_null),
        ("two-particle oracle equivalence", two_particle_oracle),
        ("third-order visibility", third_order_visibility),
        ("pair-entropy variant algebra", variant_algebra),
        ("momentum factorisation", momentum_factorisation),
        ("work arithmetic", work_arithmetic),
        ("CLI reproducibility", cli_reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = check();
        failed += usize::from(!result.pass);
        println!(
            "{} {:>2} {name}: {}",
            if result.pass { "PASS" } else { "FAIL" },
            i + 1,
            result.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
