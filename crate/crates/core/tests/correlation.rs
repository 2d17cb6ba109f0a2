mod common;

use copent_core::correlation::shell_measure;
use copent_core::oracles::{grid_boltzmann, grid_correlation_entropy};
use copent_core::{
    assemble_budget, compute_rdf, configurational_ce, extractable_work, momentum_entropy,
    pair_entropy, run_canonical, BoxSpec, PairVariant, PotentialSpec, RdfEstimate, SimParams,
    TiePolicy, Trajectory, UnitsSpec, WorkQuery,
};

fn simulate(
    particles: usize,
    dim: usize,
    side: f64,
    pot: PotentialSpec,
    samples: usize,
    thinning: usize,
    seed: u64,
) -> Trajectory {
    let params = SimParams {
        particles,
        beta: 1.0,
        sweeps: 1000 + thinning * samples,
        burn_in: 1000,
        thinning,
        max_displacement: side / 2.0,
        seed,
    };
    run_canonical(
        &params,
        &pot,
        &BoxSpec::new(dim, side).unwrap(),
        &UnitsSpec::default(),
    )
    .unwrap()
}

/// Shell-weighted average of exp(−β u) over one bin, by midpoint quadrature.
fn bin_boltzmann(pot: &PotentialSpec, side: f64, dim: usize, lo: f64, hi: f64) -> f64 {
    let steps = 400;
    let h = (hi - lo) / steps as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..steps {
        let r = lo + (i as f64 + 0.5) * h;
        let w = shell_measure(dim, r - h / 2.0, r + h / 2.0);
        num += w * (-pot.pair_energy(r, side)).exp();
        den += w;
    }
    num / den
}

#[test]
fn ideal_gas_rdf_is_flat_within_three_standard_errors() {
    let traj = simulate(16, 2, 4.0, PotentialSpec::Ideal, 5000, 1, 1);
    let rdf = compute_rdf(&traj, 32, 2.0).unwrap();
    let mut worst = 0.0f64;
    for b in 0..rdf.n_bins() {
        if rdf.pair_counts[b] >= 100 {
            worst = worst.max((rdf.g_values[b] - 1.0).abs() / rdf.std_errors[b]);
        }
    }
    println!("worst |g - 1| / SE = {worst:.3}");
    assert!(worst <= 3.0, "{worst}");
}

#[test]
fn two_particle_rdf_follows_the_boltzmann_factor() {
    let pot = PotentialSpec::CosineWell { epsilon: 1.0 };
    let traj = simulate(2, 1, 1.0, pot, 2_000_000, 2, 2);
    let rdf = compute_rdf(&traj, 16, 0.5).unwrap();
    let oracle: Vec<f64> = (0..16)
        .map(|b| bin_boltzmann(&pot, 1.0, 1, b as f64 / 32.0, (b + 1) as f64 / 32.0))
        .collect();
    let mean_g = rdf.g_values.iter().sum::<f64>() / 16.0;
    let mean_o = oracle.iter().sum::<f64>() / 16.0;
    let sup = rdf
        .g_values
        .iter()
        .zip(&oracle)
        .map(|(g, o)| (g / mean_g - o / mean_o).abs())
        .fold(0.0, f64::max);
    println!("sup-norm after normalisation: {sup:.4}");
    assert!(sup <= 0.02, "{sup}");
}

#[test]
fn dilute_lennard_jones_rdf_approaches_the_boltzmann_factor() {
    let pot = PotentialSpec::lennard_jones_default();
    let side = (64.0f64 / 0.05).sqrt();
    let params = SimParams {
        particles: 64,
        beta: 1.0,
        sweeps: 42_000,
        burn_in: 2000,
        thinning: 1,
        max_displacement: 1.5,
        seed: 42,
    };
    let traj = run_canonical(
        &params,
        &pot,
        &BoxSpec::new(2, side).unwrap(),
        &UnitsSpec::default(),
    )
    .unwrap();
    let rdf = compute_rdf(&traj, 80, 4.0).unwrap();
    let mut worst = (0.0f64, 0.0);
    for b in 0..rdf.n_bins() {
        let (lo, hi) = (b as f64 * rdf.bin_width, (b + 1) as f64 * rdf.bin_width);
        if lo < 0.8 {
            continue;
        }
        let gap = (rdf.g_values[b] - bin_boltzmann(&pot, side, 2, lo, hi)).abs();
        if gap > worst.0 {
            worst = (gap, rdf.bin_centers[b]);
        }
    }
    println!("worst |g - exp(-u)| = {:.4} at r = {:.3}", worst.0, worst.1);
    assert!(worst.0 <= 0.1, "{worst:?}");
}

#[test]
fn two_particle_budget_matches_the_grid_oracle() {
    let pot = PotentialSpec::CosineWell { epsilon: 1.0 };
    let oracle = grid_correlation_entropy(
        &grid_boltzmann(&pot, 1.0, &BoxSpec::new(1, 1.0).unwrap(), 2, 512).unwrap(),
    );
    assert!((oracle - common::two_particle_cosine_ce(1.0)).abs() < 1e-8);
    let params = SimParams {
        particles: 2,
        beta: 1.0,
        sweeps: 501_000,
        burn_in: 1000,
        thinning: 10,
        max_displacement: 0.5,
        seed: 42,
    };
    let traj = run_canonical(
        &params,
        &pot,
        &BoxSpec::new(1, 1.0).unwrap(),
        &UnitsSpec::default(),
    )
    .unwrap();
    let rdf = compute_rdf(&traj, 64, 0.5).unwrap();
    let budget = assemble_budget(&traj, &rdf, 1.0, &UnitsSpec::default(), 3).unwrap();
    assert!((budget.s_g_direct_ce - oracle).abs() <= 0.05, "{budget:?}");
    assert!((budget.s_g_pair_green - oracle).abs() <= 0.05, "{budget:?}");
    assert!(
        (budget.total_green_form - 2.0 * budget.s1_per_particle - budget.s_g_pair_green).abs()
            < 1e-12
    );
    assert!((budget.variant_gap - rdf.normalisation_gap()).abs() < 1e-9);
}

#[test]
fn ideal_budget_is_all_momentum() {
    let traj = simulate(5, 1, 1.0, PotentialSpec::Ideal, 10_000, 1, 3);
    assert_eq!(traj.acceptance_rate, 1.0);
    let rdf = compute_rdf(&traj, 32, 0.5).unwrap();
    let units = UnitsSpec::default();
    let budget = assemble_budget(&traj, &rdf, 1.0, &units, 3).unwrap();
    assert!(budget.s_g_direct_ce.abs() <= 0.1, "{budget:?}");
    assert!(budget.s_g_pair_green.abs() <= 0.05, "{budget:?}");
    let s1 = momentum_entropy(1.0, &units, 1).unwrap();
    assert!((budget.total_direct_form - 5.0 * s1 - budget.s_g_direct_ce).abs() < 1e-12);
}

#[test]
fn budget_spread_across_seeds_is_small() {
    let pot = PotentialSpec::CosineWell { epsilon: 1.0 };
    let values: Vec<f64> = (0..5)
        .map(|seed| {
            let traj = simulate(2, 1, 1.0, pot, 20_000, 10, 50 + seed);
            configurational_ce(&traj, 3, TiePolicy::Average)
                .unwrap()
                .value
        })
        .collect();
    let spread = values.iter().cloned().fold(f64::MIN, f64::max)
        - values.iter().cloned().fold(f64::MAX, f64::min);
    println!("direct CE over 5 seeds: {values:?}");
    assert!(spread <= 0.05, "{values:?}");
}

#[test]
fn short_trajectories_are_refused_for_direct_ce() {
    let traj = simulate(5, 1, 1.0, PotentialSpec::Ideal, 100, 1, 4);
    assert!(configurational_ce(&traj, 3, TiePolicy::Average).is_err());
}

#[test]
fn step_profile_pair_entropy_by_quadrature() {
    // g = 0 below r = 0.5, 1 above, in 3D with rho = 1 and r_max = 2
    let n = 200;
    let g: Vec<f64> = (0..n)
        .map(|b| {
            if (b as f64 + 0.5) * 2.0 / (n as f64) < 0.5 {
                0.0
            } else {
                1.0
            }
        })
        .collect();
    let rdf = RdfEstimate::from_profile(g, 2.0, 1.0, 3).unwrap();
    let excluded = 4.0 / 3.0 * std::f64::consts::PI * 0.125;
    assert!((pair_entropy(&rdf, PairVariant::Green) + 0.5 * excluded).abs() < 1e-12);
    assert_eq!(pair_entropy(&rdf, PairVariant::Paper), 0.0);
}

#[test]
fn work_from_a_coupling_change() {
    let pot = PotentialSpec::CosineWell { epsilon: 1.0 };
    let free = configurational_ce(
        &simulate(2, 1, 1.0, PotentialSpec::Ideal, 20_000, 10, 9),
        3,
        TiePolicy::Average,
    )
    .unwrap()
    .value;
    let coupled = configurational_ce(
        &simulate(2, 1, 1.0, pot, 20_000, 10, 9),
        3,
        TiePolicy::Average,
    )
    .unwrap()
    .value;
    let q = WorkQuery::from_ce_change(1.0, 1.0, free, coupled, 1.0).unwrap();
    let w = extractable_work(&q);
    assert_eq!(w, 1.0 - (coupled - free));
    assert!(
        w > 1.1,
        "coupling lowers the entropy, so more work is extractable: {w}"
    );
    assert_eq!(
        extractable_work(&WorkQuery::new(10.0, 2.0, 1.0).unwrap()),
        8.0
    );
    assert!(WorkQuery::new(1.0, 0.0, 0.0).is_err());
}
