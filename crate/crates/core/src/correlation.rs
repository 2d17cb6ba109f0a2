//! From trajectories to the correlation-entropy decomposition: radial
//! distribution function, two-body entropy, momentum entropy, direct
//! configurational copula entropy, the assembled budget and the work
//! relation W = E − T·ΔS.

use alloc::string::String;
use alloc::vec::Vec;

use crate::copula::copula_entropy;
use crate::ensemble::{Trajectory, UnitsSpec};
use crate::error::{param_err, Error, Result};
use crate::knn::EntropyEstimate;
use crate::sample::{SampleMatrix, TiePolicy};

/// Default histogram resolution for [`compute_rdf`].
pub const DEFAULT_RDF_BINS: usize = 64;
/// Bins with fewer pair counts than this are flagged as sparse.
pub const SPARSE_BIN_COUNT: u64 = 10;
/// Minimum recorded configurations per flattened coordinate for
/// [`configurational_ce`].
pub const SAMPLES_PER_COORDINATE: usize = 100;

/// Histogram estimate of g(r) over `(0, r_max]`, normalised by ideal-gas
/// shell counts with the pair density `N(N−1)/V²`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RdfEstimate {
    pub bin_centers: Vec<f64>,
    pub g_values: Vec<f64>,
    pub pair_counts: Vec<u64>,
    /// Poisson standard error of each g value.
    pub std_errors: Vec<f64>,
    pub bin_width: f64,
    pub r_max: f64,
    /// Number density N/V.
    pub rho: f64,
    pub n_particles: usize,
    pub n_samples: usize,
    pub dimension: usize,
}

/// Measure of the shell `r_lo < |r| ≤ r_hi` in `dimension` dimensions.
pub fn shell_measure(dimension: usize, r_lo: f64, r_hi: f64) -> f64 {
    use core::f64::consts::PI;
    match dimension {
        1 => 2.0 * (r_hi - r_lo),
        2 => PI * (r_hi * r_hi - r_lo * r_lo),
        _ => 4.0 / 3.0 * PI * (r_hi * r_hi * r_hi - r_lo * r_lo * r_lo),
    }
}

impl RdfEstimate {
    /// Builds an estimate from a tabulated profile, e.g. an analytic g(r).
    /// Pair counts and errors are left empty.
    pub fn from_profile(
        g_values: Vec<f64>,
        r_max: f64,
        rho: f64,
        dimension: usize,
    ) -> Result<Self> {
        if g_values.is_empty() || g_values.iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
            return Err(param_err!("g values must be finite and non-negative"));
        }
        if !(1..=3).contains(&dimension) || !(r_max > 0.0) || !(rho > 0.0) {
            return Err(param_err!("invalid profile geometry"));
        }
        let n_bins = g_values.len();
        let bin_width = r_max / n_bins as f64;
        Ok(Self {
            bin_centers: (0..n_bins).map(|b| (b as f64 + 0.5) * bin_width).collect(),
            pair_counts: Vec::new(),
            std_errors: Vec::new(),
            g_values,
            bin_width,
            r_max,
            rho,
            n_particles: 0,
            n_samples: 0,
            dimension,
        })
    }

    pub fn n_bins(&self) -> usize {
        self.g_values.len()
    }

    pub fn shell(&self, bin: usize) -> f64 {
        let lo = bin as f64 * self.bin_width;
        shell_measure(self.dimension, lo, lo + self.bin_width)
    }

    /// Bins whose pair count is below [`SPARSE_BIN_COUNT`].
    pub fn sparse_bins(&self) -> Vec<usize> {
        self.pair_counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c < SPARSE_BIN_COUNT)
            .map(|(b, _)| b)
            .collect()
    }

    /// −½·ρ·Σ shell·(g − 1): the amount by which the literal two-body form
    /// differs from the compensated one.
    pub fn normalisation_gap(&self) -> f64 {
        -0.5 * self.rho
            * (0..self.n_bins())
                .map(|b| self.shell(b) * (self.g_values[b] - 1.0))
                .sum::<f64>()
    }
}

/// Pair histogram over all recorded configurations with the minimum-image
/// convention.
pub fn compute_rdf(trajectory: &Trajectory, n_bins: usize, r_max: f64) -> Result<RdfEstimate> {
    let sim_box = trajectory.sim_box;
    let (n, dim, samples) = (
        trajectory.particles(),
        trajectory.dimension(),
        trajectory.n_samples(),
    );
    if n < 2 {
        return Err(param_err!("g(r) needs at least two particles"));
    }
    if n_bins < 8 {
        return Err(param_err!("need at least 8 bins, got {n_bins}"));
    }
    if !(r_max > 0.0 && r_max <= 0.5 * sim_box.side_length * (1.0 + 1e-12)) {
        return Err(param_err!("r_max must lie in (0, L/2], got {r_max}"));
    }
    if samples < 10 {
        return Err(Error::Statistics(alloc::format!(
            "{samples} configurations, need at least 10"
        )));
    }

    let bin_width = r_max / n_bins as f64;
    let mut counts = alloc::vec![0u64; n_bins];
    for s in 0..samples {
        let cfg = trajectory.configuration(s);
        for i in 0..n {
            let a = &cfg[i * dim..(i + 1) * dim];
            for j in (i + 1)..n {
                let r = sim_box.distance(a, &cfg[j * dim..(j + 1) * dim]);
                if r <= r_max {
                    let b = ((r / bin_width) as usize).min(n_bins - 1);
                    counts[b] += 1;
                }
            }
        }
    }

    let volume = sim_box.volume();
    let pairs = (n * (n - 1)) as f64 / 2.0;
    let mut g_values = Vec::with_capacity(n_bins);
    let mut std_errors = Vec::with_capacity(n_bins);
    for (b, &c) in counts.iter().enumerate() {
        let lo = b as f64 * bin_width;
        let ideal = samples as f64 * pairs * shell_measure(dim, lo, lo + bin_width) / volume;
        let g = c as f64 / ideal;
        g_values.push(g);
        std_errors.push(if c > 0 {
            g / libm::sqrt(c as f64)
        } else {
            1.0 / ideal
        });
    }
    Ok(RdfEstimate {
        bin_centers: (0..n_bins).map(|b| (b as f64 + 0.5) * bin_width).collect(),
        g_values,
        pair_counts: counts,
        std_errors,
        bin_width,
        r_max,
        rho: n as f64 / volume,
        n_particles: n,
        n_samples: samples,
        dimension: dim,
    })
}

/// Which two-body entropy integrand to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PairVariant {
    /// −½ρ∫ g ln g dV, without the normalisation term.
    Paper,
    /// −½ρ∫ [g ln g − g + 1] dV, the usual two-body excess entropy.
    #[default]
    Green,
}

#[inline]
fn g_ln_g(g: f64) -> f64 {
    if g > 0.0 {
        g * libm::log(g)
    } else {
        0.0
    }
}

/// Two-body correlation entropy per particle, in units of k_B.
///
/// Every bin enters the integral, including empty ones (g = 0 inside a
/// repulsive core contributes through −g + 1 in the green variant). The
/// region beyond `r_max` is taken as uncorrelated.
pub fn pair_entropy(rdf: &RdfEstimate, variant: PairVariant) -> f64 {
    let integral: f64 = (0..rdf.n_bins())
        .map(|b| {
            let g = rdf.g_values[b];
            let f = match variant {
                PairVariant::Paper => g_ln_g(g),
                PairVariant::Green => g_ln_g(g) - g + 1.0,
            };
            rdf.shell(b) * f
        })
        .sum();
    -0.5 * rdf.rho * integral
}

/// Total pair-truncated correlation entropy of `N` particles from the
/// per-particle two-body value: `N(N−1)/2` pairs, i.e. `(N−1)·s₂` for g
/// normalised with `N(N−1)/V²`.
pub fn pair_truncated_total(per_particle: f64, particles: usize) -> f64 {
    particles.saturating_sub(1) as f64 * per_particle
}

/// Entropy per particle of Maxwell–Boltzmann momenta,
/// `(dim/2)·(1 + ln(2π·m/β)) − dim·ln h`.
pub fn momentum_entropy(beta: f64, units: &UnitsSpec, dimension: usize) -> Result<f64> {
    units.validate()?;
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(param_err!("beta must be positive, got {beta}"));
    }
    let d = dimension as f64;
    let per_dof = 0.5 * (1.0 + libm::log(2.0 * core::f64::consts::PI * units.mass / beta));
    Ok(d * per_dof - d * libm::log(units.h))
}

/// Copula entropy of the flattened `(N·dimension)`-dimensional positions.
///
/// On a periodic box every coordinate marginal is uniform, so this is the
/// full configurational correlation entropy S^g/k_B.
pub fn configurational_ce(
    trajectory: &Trajectory,
    k: usize,
    tie_policy: TiePolicy,
) -> Result<EntropyEstimate> {
    let width = trajectory.particles() * trajectory.dimension();
    let needed = SAMPLES_PER_COORDINATE * width;
    if trajectory.n_samples() < needed {
        return Err(Error::Statistics(alloc::format!(
            "{} configurations for {width} coordinates, need at least {needed}",
            trajectory.n_samples()
        )));
    }
    let samples = SampleMatrix::new(
        trajectory.n_samples(),
        width,
        trajectory.coordinates().to_vec(),
    )?;
    copula_entropy(&samples, k, tie_policy)
}

/// The assembled decomposition S = N·s₁ + S^g, with S^g from the pair
/// truncation (both integrands) and from the direct copula estimate.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EntropyBudget {
    pub particles: usize,
    pub s1_per_particle: f64,
    pub s2_paper_per_particle: f64,
    pub s2_green_per_particle: f64,
    pub s_g_pair_paper: f64,
    pub s_g_pair_green: f64,
    pub s_g_direct_ce: f64,
    pub total_paper_form: f64,
    pub total_green_form: f64,
    pub total_direct_form: f64,
    /// s_g_pair_paper − s_g_pair_green.
    pub variant_gap: f64,
    /// ln N!, excluded from every total.
    pub dropped_ln_n_factorial: f64,
    pub sparse_bins: Vec<usize>,
    pub offsets_note: String,
}

impl EntropyBudget {
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        particles: usize,
        s1_per_particle: f64,
        s2_paper_per_particle: f64,
        s2_green_per_particle: f64,
        s_g_direct_ce: f64,
        h: f64,
        dimension: usize,
        sparse_bins: Vec<usize>,
    ) -> Self {
        let s_g_pair_paper = pair_truncated_total(s2_paper_per_particle, particles);
        let s_g_pair_green = pair_truncated_total(s2_green_per_particle, particles);
        let ideal = particles as f64 * s1_per_particle;
        let ln_fact: f64 = (2..=particles).map(|i| libm::log(i as f64)).sum();
        let offsets_note = alloc::format!(
            "totals are N*s1 + S_g in units of k_B; the additive constant -ln(N!) = {:.6} is \
             dropped and h = {h} enters only through -{dimension}*ln(h) per particle in s1; \
             both cancel in differences between runs with equal N and h",
            -ln_fact
        );
        Self {
            particles,
            s1_per_particle,
            s2_paper_per_particle,
            s2_green_per_particle,
            s_g_pair_paper,
            s_g_pair_green,
            s_g_direct_ce,
            total_paper_form: ideal + s_g_pair_paper,
            total_green_form: ideal + s_g_pair_green,
            total_direct_form: ideal + s_g_direct_ce,
            variant_gap: s_g_pair_paper - s_g_pair_green,
            dropped_ln_n_factorial: ln_fact,
            sparse_bins,
            offsets_note,
        }
    }

    /// Direct copula estimate minus the green pair truncation: what the
    /// higher-order terms of the correlation series contribute.
    pub fn higher_order_estimate(&self) -> f64 {
        self.s_g_direct_ce - self.s_g_pair_green
    }
}

/// Builds the budget for one run. A sweep with every move rejected records
/// the same configuration twice, so ties in the direct estimate are broken
/// with the jitter policy seeded from the run seed.
pub fn assemble_budget(
    trajectory: &Trajectory,
    rdf: &RdfEstimate,
    beta: f64,
    units: &UnitsSpec,
    k: usize,
) -> Result<EntropyBudget> {
    if rdf.n_particles != trajectory.particles() || rdf.dimension != trajectory.dimension() {
        return Err(param_err!("g(r) and trajectory describe different systems"));
    }
    let s1 = momentum_entropy(beta, units, trajectory.dimension())?;
    let ce = configurational_ce(
        trajectory,
        k,
        TiePolicy::Jitter {
            seed: trajectory.params.seed,
        },
    )?;
    Ok(EntropyBudget::from_parts(
        trajectory.particles(),
        s1,
        pair_entropy(rdf, PairVariant::Paper),
        pair_entropy(rdf, PairVariant::Green),
        ce.value,
        units.h,
        trajectory.dimension(),
        rdf.sparse_bins(),
    ))
}

/// Inputs of W = E − T·ΔS.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WorkQuery {
    pub energy: f64,
    pub temperature: f64,
    pub delta_s: f64,
}

impl WorkQuery {
    pub fn new(energy: f64, temperature: f64, delta_s: f64) -> Result<Self> {
        if !(temperature > 0.0) {
            return Err(param_err!(
                "temperature must be positive, got {temperature}"
            ));
        }
        Ok(Self {
            energy,
            temperature,
            delta_s,
        })
    }

    /// ΔS = k_B·(CE_after − CE_before).
    pub fn from_ce_change(
        energy: f64,
        temperature: f64,
        ce_before: f64,
        ce_after: f64,
        k_b: f64,
    ) -> Result<Self> {
        Self::new(energy, temperature, k_b * (ce_after - ce_before))
    }
}

pub fn extractable_work(q: &WorkQuery) -> f64 {
    q.energy - q.temperature * q.delta_s
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn uniform_profile_has_no_entropy() {
        let rdf = RdfEstimate::from_profile(vec![1.0; 32], 0.5, 2.0, 1).unwrap();
        assert_eq!(pair_entropy(&rdf, PairVariant::Paper), 0.0);
        assert_eq!(pair_entropy(&rdf, PairVariant::Green), 0.0);
    }

    #[test]
    fn hard_exclusion_step() {
        // g = 0 below a = 0.5, 1 above; 1D, rho = 0.5
        let bins = 1000;
        let r_max = 2.0;
        let g: Vec<f64> = (0..bins)
            .map(|b| {
                if (b as f64 + 0.5) * r_max / (bins as f64) < 0.5 {
                    0.0
                } else {
                    1.0
                }
            })
            .collect();
        let rdf = RdfEstimate::from_profile(g, r_max, 0.5, 1).unwrap();
        assert_eq!(pair_entropy(&rdf, PairVariant::Paper), 0.0);
        assert!((pair_entropy(&rdf, PairVariant::Green) + 0.25).abs() < 1e-12);
    }

    #[test]
    fn variant_difference_is_normalisation_gap() {
        let g: Vec<f64> = (0..64)
            .map(|b| 1.0 + 0.3 * libm::sin(b as f64 * 0.2))
            .collect();
        let rdf = RdfEstimate::from_profile(g, 3.0, 0.7, 3).unwrap();
        let diff = pair_entropy(&rdf, PairVariant::Paper) - pair_entropy(&rdf, PairVariant::Green);
        assert!((diff - rdf.normalisation_gap()).abs() < 1e-9);
    }

    #[test]
    fn momentum_entropy_values() {
        let u = UnitsSpec::default();
        assert!((momentum_entropy(1.0, &u, 3).unwrap() - 4.256_815_599_614_018).abs() < 1e-9);
        assert!((momentum_entropy(1.0, &u, 1).unwrap() - 1.418_938_533_204_672_7).abs() < 1e-12);
        let drop = momentum_entropy(1.0, &u, 1).unwrap() - momentum_entropy(4.0, &u, 1).unwrap();
        assert!((drop - 0.5 * libm::log(4.0)).abs() < 1e-12);
        let h2 = UnitsSpec { h: 2.0, ..u };
        let shift = momentum_entropy(1.0, &u, 2).unwrap() - momentum_entropy(1.0, &h2, 2).unwrap();
        assert!((shift - 2.0 * libm::log(2.0)).abs() < 1e-12);
        assert!(momentum_entropy(0.0, &u, 1).is_err());
    }

    #[test]
    fn budget_totals_are_sums_of_parts() {
        let b = EntropyBudget::from_parts(3, 1.4, -0.1, -0.12, -0.3, 1.0, 1, vec![]);
        assert_eq!(b.total_green_form, 3.0 * 1.4 + b.s_g_pair_green);
        assert_eq!(b.total_paper_form, 3.0 * 1.4 + b.s_g_pair_paper);
        assert_eq!(b.total_direct_form, 3.0 * 1.4 + b.s_g_direct_ce);
        assert_eq!(b.s_g_pair_green, 2.0 * -0.12);
        assert!((b.dropped_ln_n_factorial - libm::log(6.0)).abs() < 1e-12);
    }

    #[test]
    fn work_arithmetic() {
        assert_eq!(
            extractable_work(&WorkQuery::new(10.0, 2.0, 1.0).unwrap()),
            8.0
        );
        assert_eq!(
            extractable_work(&WorkQuery::new(3.5, 7.0, 0.0).unwrap()),
            3.5
        );
        assert!(WorkQuery::new(1.0, 0.0, 1.0).is_err());
        let q = WorkQuery::from_ce_change(1.0, 1.0, 0.0, -0.2, 1.0).unwrap();
        assert!(q.delta_s < 0.0);
        assert!(extractable_work(&q) > 1.0);
    }
}
