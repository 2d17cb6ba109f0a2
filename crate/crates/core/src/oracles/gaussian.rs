use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{param_err, Error, Result};
use crate::sample::SampleMatrix;

/// Lower-triangular Cholesky factor of a symmetric positive-definite `d × d`
/// row-major matrix.
pub fn cholesky(a: &[f64], d: usize) -> Result<Vec<f64>> {
    if a.len() != d * d || d == 0 {
        return Err(Error::Matrix(alloc::format!(
            "expected {d}x{d} entries, got {}",
            a.len()
        )));
    }
    let mut l = alloc::vec![0.0; d * d];
    for i in 0..d {
        for j in 0..=i {
            let mut s = a[i * d + j];
            for p in 0..j {
                s -= l[i * d + p] * l[j * d + p];
            }
            if i == j {
                if !(s > 0.0) || !s.is_finite() {
                    return Err(Error::Matrix("matrix is not positive definite".into()));
                }
                l[i * d + i] = libm::sqrt(s);
            } else {
                l[i * d + j] = s / l[j * d + j];
            }
        }
    }
    Ok(l)
}

fn ln_det_from_cholesky(l: &[f64], d: usize) -> f64 {
    2.0 * (0..d).map(|i| libm::log(l[i * d + i])).sum::<f64>()
}

fn check_symmetric(a: &[f64], d: usize) -> Result<()> {
    for i in 0..d {
        for j in 0..i {
            let (x, y) = (a[i * d + j], a[j * d + i]);
            if (x - y).abs() > 1e-12 * (1.0 + x.abs().max(y.abs())) {
                return Err(Error::Matrix(alloc::format!("not symmetric at ({i}, {j})")));
            }
        }
    }
    Ok(())
}

/// Symmetric, unit-diagonal, positive-definite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    d: usize,
    entries: Vec<f64>,
    chol: Vec<f64>,
}

impl CorrelationMatrix {
    pub fn new(d: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != d * d || d == 0 {
            return Err(Error::Matrix(alloc::format!(
                "expected {d}x{d} entries, got {}",
                entries.len()
            )));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::Matrix("non-finite entry".into()));
        }
        check_symmetric(&entries, d)?;
        if let Some(i) = (0..d).find(|&i| (entries[i * d + i] - 1.0).abs() > 1e-12) {
            return Err(Error::Matrix(alloc::format!("diagonal entry {i} is not 1")));
        }
        let chol = cholesky(&entries, d)?;
        Ok(Self { d, entries, chol })
    }

    pub fn identity(d: usize) -> Result<Self> {
        Self::equicorrelated(d, 0.0)
    }

    /// All off-diagonal entries equal to `rho`.
    pub fn equicorrelated(d: usize, rho: f64) -> Result<Self> {
        let entries = (0..d * d)
            .map(|p| if p / d == p % d { 1.0 } else { rho })
            .collect();
        Self::new(d, entries)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn ln_det(&self) -> f64 {
        ln_det_from_cholesky(&self.chol, self.d)
    }
}

/// ½·ln((2πe)^d · det Σ) for a symmetric positive-definite covariance.
pub fn gaussian_entropy(covariance: &[f64], d: usize) -> Result<f64> {
    check_symmetric(covariance, d.max(1))?;
    let l = cholesky(covariance, d)?;
    let ln_2pie = libm::log(2.0 * core::f64::consts::PI * core::f64::consts::E);
    Ok(0.5 * (d as f64 * ln_2pie + ln_det_from_cholesky(&l, d)))
}

/// Copula entropy of a Gaussian copula, ½·ln det R. Always ≤ 0.
pub fn gaussian_ce(r: &CorrelationMatrix) -> f64 {
    if r.entries
        .iter()
        .enumerate()
        .all(|(p, &v)| p / r.d == p % r.d || v == 0.0)
    {
        return 0.0;
    }
    0.5 * r.ln_det()
}

/// `n` draws from N(0, R), deterministic given `seed`.
pub fn sample_gaussian(r: &CorrelationMatrix, n: usize, seed: u64) -> Result<SampleMatrix> {
    if n < 2 {
        return Err(param_err!("need n >= 2, got {n}"));
    }
    let d = r.d;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = alloc::vec![0.0; d];
    let mut values = Vec::with_capacity(n * d);
    for _ in 0..n {
        for zi in z.iter_mut() {
            *zi = StandardNormal.sample(&mut rng);
        }
        for i in 0..d {
            values.push((0..=i).map(|p| r.chol[i * d + p] * z[p]).sum());
        }
    }
    SampleMatrix::new(n, d, values)
}
