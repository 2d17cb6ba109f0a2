//! Seeded Metropolis sampling of the canonical position distribution for
//! small periodic particle systems, and analytic Maxwell–Boltzmann momenta.
//!
//! Random numbers come from ChaCha8 (`rand_chacha`) seeded with
//! `seed_from_u64`, which is platform independent.

use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{param_err, Result};

/// Pair separations below this are raised to it before evaluating the
/// potential.
pub const MIN_PAIR_DISTANCE: f64 = 1e-9;

/// How often (in sweeps) the running energy is checked against a full
/// recomputation.
pub const ENERGY_CHECK_INTERVAL: usize = 1000;

/// Periodic cubic box.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoxSpec {
    pub dimension: usize,
    pub side_length: f64,
}

impl BoxSpec {
    pub fn new(dimension: usize, side_length: f64) -> Result<Self> {
        let b = Self {
            dimension,
            side_length,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.dimension) {
            return Err(param_err!(
                "box dimension must be 1, 2 or 3, got {}",
                self.dimension
            ));
        }
        if !(self.side_length > 0.0 && self.side_length.is_finite()) {
            return Err(param_err!(
                "box side length must be positive, got {}",
                self.side_length
            ));
        }
        Ok(())
    }

    pub fn volume(&self) -> f64 {
        libm::pow(self.side_length, self.dimension as f64)
    }

    /// Maps a coordinate into `[0, L)`.
    #[inline]
    pub fn wrap(&self, x: f64) -> f64 {
        let l = self.side_length;
        let r = libm::fmod(x, l);
        let w = if r < 0.0 { r + l } else { r };
        if w >= l {
            0.0
        } else {
            w
        }
    }

    /// Minimum-image separation between two wrapped points.
    #[inline]
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        let l = self.side_length;
        let mut r2 = 0.0;
        for (x, y) in a.iter().zip(b) {
            let mut dx = (x - y).abs();
            if dx > 0.5 * l {
                dx = l - dx;
            }
            r2 += dx * dx;
        }
        libm::sqrt(r2)
    }
}

/// Pairwise-additive interaction.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum PotentialSpec {
    Ideal,
    /// u(r) = −ε·cos(2πr/L)
    CosineWell {
        epsilon: f64,
    },
    /// 4ε[(σ/r)¹² − (σ/r)⁶] for r < r_cut, zero beyond; optionally shifted so
    /// that u(r_cut) = 0.
    LennardJones {
        epsilon: f64,
        sigma: f64,
        r_cut: f64,
        shifted: bool,
    },
}

impl PotentialSpec {
    /// Truncated and shifted Lennard-Jones with ε = σ = 1, r_cut = 2.5.
    pub fn lennard_jones_default() -> Self {
        PotentialSpec::LennardJones {
            epsilon: 1.0,
            sigma: 1.0,
            r_cut: 2.5,
            shifted: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            PotentialSpec::Ideal => Ok(()),
            PotentialSpec::CosineWell { epsilon } if epsilon.is_finite() => Ok(()),
            PotentialSpec::CosineWell { epsilon } => {
                Err(param_err!("cosine well epsilon {epsilon} not finite"))
            }
            PotentialSpec::LennardJones {
                epsilon,
                sigma,
                r_cut,
                ..
            } => {
                if !epsilon.is_finite() || !(sigma > 0.0) || !(r_cut > 0.0) || !r_cut.is_finite() {
                    Err(param_err!("invalid Lennard-Jones parameters eps={epsilon} sigma={sigma} r_cut={r_cut}"))
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn is_ideal(&self) -> bool {
        matches!(self, PotentialSpec::Ideal)
    }

    /// Pair energy at separation `r` in a box of side `side_length`.
    /// `r` is floored at [`MIN_PAIR_DISTANCE`].
    pub fn pair_energy(&self, r: f64, side_length: f64) -> f64 {
        let r = r.max(MIN_PAIR_DISTANCE);
        match *self {
            PotentialSpec::Ideal => 0.0,
            PotentialSpec::CosineWell { epsilon } => {
                -epsilon * libm::cos(2.0 * core::f64::consts::PI * r / side_length)
            }
            PotentialSpec::LennardJones {
                epsilon,
                sigma,
                r_cut,
                shifted,
            } => {
                if r >= r_cut {
                    return 0.0;
                }
                let lj = |r: f64| {
                    let s6 = libm::pow(sigma / r, 6.0);
                    4.0 * epsilon * (s6 * s6 - s6)
                };
                if shifted {
                    lj(r) - lj(r_cut)
                } else {
                    lj(r)
                }
            }
        }
    }
}

/// Physical constants in reduced units. `k_B` and `h` are 1 unless a caller
/// deliberately changes them; entropies are always reported in units of `k_B`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UnitsSpec {
    pub k_b: f64,
    pub h: f64,
    pub mass: f64,
}

impl Default for UnitsSpec {
    fn default() -> Self {
        Self {
            k_b: 1.0,
            h: 1.0,
            mass: 1.0,
        }
    }
}

impl UnitsSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("k_B", self.k_b), ("h", self.h), ("mass", self.mass)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(param_err!("{name} must be positive, got {v}"));
            }
        }
        Ok(())
    }
}

/// Metropolis run settings. One sweep is `particles` single-particle trial
/// moves; a configuration is recorded every `thinning` sweeps after
/// `burn_in`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimParams {
    pub particles: usize,
    pub beta: f64,
    pub sweeps: usize,
    pub burn_in: usize,
    pub thinning: usize,
    pub max_displacement: f64,
    pub seed: u64,
}

impl SimParams {
    pub fn validate(&self) -> Result<()> {
        if self.particles < 1 {
            return Err(param_err!("need at least one particle"));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(param_err!("beta must be positive, got {}", self.beta));
        }
        if self.burn_in >= self.sweeps {
            return Err(param_err!(
                "burn_in ({}) must be below sweeps ({})",
                self.burn_in,
                self.sweeps
            ));
        }
        if self.thinning < 1 {
            return Err(param_err!("thinning must be at least 1"));
        }
        if !(self.max_displacement > 0.0 && self.max_displacement.is_finite()) {
            return Err(param_err!(
                "max_displacement must be positive, got {}",
                self.max_displacement
            ));
        }
        Ok(())
    }

    /// Number of recorded configurations, `(sweeps − burn_in) / thinning`
    /// with integer division.
    pub fn recorded_samples(&self) -> usize {
        (self.sweeps - self.burn_in) / self.thinning
    }
}

/// Recorded configurations of one Markov chain, `samples × particles ×
/// dimension`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    configurations: Vec<f64>,
    n_samples: usize,
    pub params: SimParams,
    pub potential: PotentialSpec,
    pub sim_box: BoxSpec,
    pub acceptance_rate: f64,
    /// Largest gap seen between the running energy and a full recomputation.
    pub max_energy_drift: f64,
    /// Trial moves that brought a pair closer than [`MIN_PAIR_DISTANCE`].
    pub overlap_events: usize,
    pub warnings: Vec<String>,
}

impl Trajectory {
    /// Rebuilds a trajectory from stored configurations, e.g. after reading
    /// it back from disk. Coordinates must already lie in `[0, L)`.
    pub fn from_parts(
        configurations: Vec<f64>,
        params: SimParams,
        potential: PotentialSpec,
        sim_box: BoxSpec,
        acceptance_rate: f64,
    ) -> Result<Self> {
        sim_box.validate()?;
        let stride = params.particles * sim_box.dimension;
        if stride == 0 || !configurations.len().is_multiple_of(stride) {
            return Err(param_err!(
                "{} coordinates do not form configurations of {} particles in {}D",
                configurations.len(),
                params.particles,
                sim_box.dimension
            ));
        }
        if let Some(x) = configurations
            .iter()
            .find(|&&x| !(x >= 0.0 && x < sim_box.side_length))
        {
            return Err(param_err!(
                "coordinate {x} outside [0, {})",
                sim_box.side_length
            ));
        }
        if !(0.0..=1.0).contains(&acceptance_rate) {
            return Err(param_err!(
                "acceptance rate {acceptance_rate} outside [0, 1]"
            ));
        }
        Ok(Self {
            n_samples: configurations.len() / stride,
            configurations,
            params,
            potential,
            sim_box,
            acceptance_rate,
            max_energy_drift: 0.0,
            overlap_events: 0,
            warnings: Vec::new(),
        })
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn particles(&self) -> usize {
        self.params.particles
    }

    pub fn dimension(&self) -> usize {
        self.sim_box.dimension
    }

    /// All coordinates, `samples × particles × dimension`.
    pub fn coordinates(&self) -> &[f64] {
        &self.configurations
    }

    /// Configuration `s` as `particles × dimension` coordinates.
    pub fn configuration(&self, s: usize) -> &[f64] {
        let stride = self.particles() * self.dimension();
        &self.configurations[s * stride..(s + 1) * stride]
    }
}

/// Total potential energy: sum over unordered pairs of minimum-image pair
/// energies.
pub fn total_potential(config: &[f64], potential: &PotentialSpec, sim_box: &BoxSpec) -> f64 {
    total_potential_with_overlaps(config, potential, sim_box).0
}

/// Like [`total_potential`], also counting pairs closer than
/// [`MIN_PAIR_DISTANCE`].
pub fn total_potential_with_overlaps(
    config: &[f64],
    potential: &PotentialSpec,
    sim_box: &BoxSpec,
) -> (f64, usize) {
    let dim = sim_box.dimension;
    let n = config.len() / dim;
    let mut energy = 0.0;
    let mut overlaps = 0;
    if potential.is_ideal() {
        return (0.0, 0);
    }
    for i in 0..n {
        let a = &config[i * dim..(i + 1) * dim];
        for j in (i + 1)..n {
            let r = sim_box.distance(a, &config[j * dim..(j + 1) * dim]);
            if r < MIN_PAIR_DISTANCE {
                overlaps += 1;
            }
            energy += potential.pair_energy(r, sim_box.side_length);
        }
    }
    (energy, overlaps)
}

/// Energy of particle `i` at position `pos` with every other particle.
fn particle_energy(
    config: &[f64],
    i: usize,
    pos: &[f64],
    potential: &PotentialSpec,
    sim_box: &BoxSpec,
) -> (f64, bool) {
    let dim = sim_box.dimension;
    let n = config.len() / dim;
    let mut e = 0.0;
    let mut overlap = false;
    for j in (0..n).filter(|&j| j != i) {
        let r = sim_box.distance(pos, &config[j * dim..(j + 1) * dim]);
        overlap |= r < MIN_PAIR_DISTANCE;
        e += potential.pair_energy(r, sim_box.side_length);
    }
    (e, overlap)
}

/// Simple-cubic starting lattice filling the box.
fn initial_lattice(particles: usize, sim_box: &BoxSpec) -> Vec<f64> {
    let dim = sim_box.dimension;
    let mut per_side = 1usize;
    while per_side.pow(dim as u32) < particles {
        per_side += 1;
    }
    let spacing = sim_box.side_length / per_side as f64;
    let mut config = Vec::with_capacity(particles * dim);
    for p in 0..particles {
        let mut idx = p;
        for _ in 0..dim {
            config.push(sim_box.wrap((idx % per_side) as f64 * spacing + 0.5 * spacing));
            idx /= per_side;
        }
    }
    config
}

/// Runs a single-particle random-walk Metropolis chain targeting
/// `exp(−β V(q))` on the periodic box.
///
/// Each trial move picks a particle uniformly, displaces every coordinate by
/// an independent uniform draw in `[−max_displacement, max_displacement)` and
/// accepts with probability `min(1, exp(−β ΔV))`. With
/// `max_displacement = L/2` the proposal is uniform over the box.
pub fn run_canonical(
    params: &SimParams,
    potential: &PotentialSpec,
    sim_box: &BoxSpec,
    units: &UnitsSpec,
) -> Result<Trajectory> {
    params.validate()?;
    potential.validate()?;
    sim_box.validate()?;
    units.validate()?;

    let dim = sim_box.dimension;
    let n = params.particles;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut config = initial_lattice(n, sim_box);
    let (mut energy, _) = total_potential_with_overlaps(&config, potential, sim_box);

    let mut recorded = Vec::with_capacity(params.recorded_samples() * n * dim);
    let mut accepted = 0u64;
    let mut accepted_burn_in = 0u64;
    let mut overlap_events = 0;
    let mut max_drift = 0.0f64;
    let mut trial = alloc::vec![0.0; dim];
    let delta = params.max_displacement;

    for sweep in 1..=params.sweeps {
        for _ in 0..n {
            let i = rng.random_range(0..n);
            let old = &config[i * dim..(i + 1) * dim];
            for (t, &x) in trial.iter_mut().zip(old) {
                let step: f64 = rng.random::<f64>() * 2.0 * delta - delta;
                *t = sim_box.wrap(x + step);
            }
            let accept = if potential.is_ideal() {
                true
            } else {
                let (e_old, _) = particle_energy(&config, i, old, potential, sim_box);
                let (e_new, overlap) = particle_energy(&config, i, &trial, potential, sim_box);
                overlap_events += usize::from(overlap);
                let dv = e_new - e_old;
                let ok = dv <= 0.0 || rng.random::<f64>() < libm::exp(-params.beta * dv);
                if ok {
                    energy += dv;
                }
                ok
            };
            if accept {
                config[i * dim..(i + 1) * dim].copy_from_slice(&trial);
                accepted += 1;
                if sweep <= params.burn_in {
                    accepted_burn_in += 1;
                }
            }
        }
        if sweep % ENERGY_CHECK_INTERVAL == 0 {
            let full = total_potential(&config, potential, sim_box);
            max_drift = max_drift.max((full - energy).abs());
            energy = full;
        }
        if sweep > params.burn_in && (sweep - params.burn_in).is_multiple_of(params.thinning) {
            recorded.extend_from_slice(&config);
        }
    }

    let mut warnings = Vec::new();
    if params.burn_in > 0 && accepted_burn_in == 0 {
        warnings.push(alloc::format!(
            "no trial move accepted during {} burn-in sweeps; the chain is not mixing",
            params.burn_in
        ));
    }
    if max_drift > 1e-8 {
        warnings.push(alloc::format!(
            "running energy drifted by {max_drift:e} from full recomputation"
        ));
    }
    if overlap_events > 0 {
        warnings.push(alloc::format!(
            "{overlap_events} trial moves hit the pair-distance floor"
        ));
    }

    let total_moves = (params.sweeps * n) as f64;
    Ok(Trajectory {
        n_samples: recorded.len() / (n * dim),
        configurations: recorded,
        params: *params,
        potential: *potential,
        sim_box: *sim_box,
        acceptance_rate: accepted as f64 / total_moves,
        max_energy_drift: max_drift,
        overlap_events,
        warnings,
    })
}

/// Maxwell–Boltzmann momenta: `samples × particles × dimension` independent
/// Gaussian components with variance `m/β`.
pub fn sample_momenta(
    particles: usize,
    dimension: usize,
    beta: f64,
    units: &UnitsSpec,
    samples: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    units.validate()?;
    if particles < 1 || !(1..=3).contains(&dimension) {
        return Err(param_err!("need particles >= 1 and dimension in 1..=3"));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(param_err!("beta must be positive, got {beta}"));
    }
    let normal = Normal::new(0.0, libm::sqrt(units.mass / beta))
        .map_err(|e| param_err!("momentum distribution: {e}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(normal
        .sample_iter(&mut rng)
        .take(samples * particles * dimension)
        .collect())
}
