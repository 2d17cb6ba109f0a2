//! Copula entropy: the Shannon entropy of the rank-transformed sample.

use alloc::vec::Vec;

use crate::error::{param_err, Error, Result};
use crate::knn::{knn_entropy, knn_entropy_bounded, EntropyEstimate, Metric};
use crate::sample::{rank_transform, SampleMatrix, TiePolicy};

/// Largest fraction of floored neighbour distances tolerated in rank space.
pub const MAX_FLOORED_FRACTION: f64 = 0.01;

/// How the entropy of the pseudo-observations is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CopulaEstimator {
    /// Chebyshev Kozachenko–Leonenko with neighbour cubes clipped to the
    /// unit hypercube.
    #[default]
    Clipped,
    /// Plain Kozachenko–Leonenko with the given metric. Biased upwards by
    /// points near the faces of the cube, increasingly so with dimension.
    Plain(Metric),
}

/// Copula entropy estimate with the default (clipped Chebyshev) estimator.
///
/// The estimate depends on the data only through its column ranks, so it is
/// bit-identical under any strictly increasing per-column transformation.
pub fn copula_entropy(
    samples: &SampleMatrix,
    k: usize,
    tie_policy: TiePolicy,
) -> Result<EntropyEstimate> {
    copula_entropy_with(samples, k, tie_policy, CopulaEstimator::Clipped)
}

pub fn copula_entropy_with(
    samples: &SampleMatrix,
    k: usize,
    tie_policy: TiePolicy,
    estimator: CopulaEstimator,
) -> Result<EntropyEstimate> {
    if samples.d() < 2 {
        return Err(param_err!(
            "copula entropy needs at least 2 columns, got {}",
            samples.d()
        ));
    }
    let u = rank_transform(samples, tie_policy);
    let est = match estimator {
        CopulaEstimator::Clipped => knn_entropy_bounded(u.values(), u.d(), k, 0.0, 1.0)?,
        CopulaEstimator::Plain(metric) => knn_entropy(u.values(), u.d(), k, metric)?,
    };
    if est.floored as f64 > MAX_FLOORED_FRACTION * est.n as f64 {
        return Err(Error::Degenerate(alloc::format!(
            "{} of {} points have coincident rank vectors; ties or exact functional \
             dependence leave the copula without a density, retry with the jitter tie policy",
            est.floored,
            est.n
        )));
    }
    Ok(est)
}

/// Multivariate mutual information, `−copula_entropy`.
pub fn mutual_information(
    samples: &SampleMatrix,
    k: usize,
    tie_policy: TiePolicy,
) -> Result<EntropyEstimate> {
    copula_entropy(samples, k, tie_policy).map(EntropyEstimate::negated)
}

/// Joint entropy, per-column marginal entropies and copula entropy estimated
/// independently, with the residual of joint = Σ marginals + copula.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecompositionReport {
    pub joint_entropy: f64,
    pub marginal_entropies: Vec<f64>,
    pub copula_entropy: f64,
    pub residual: f64,
    pub k: usize,
    pub n: usize,
}

impl DecompositionReport {
    pub fn new(
        joint_entropy: f64,
        marginal_entropies: Vec<f64>,
        copula_entropy: f64,
        k: usize,
        n: usize,
    ) -> Self {
        let residual = joint_entropy - marginal_entropies.iter().sum::<f64>() - copula_entropy;
        Self {
            joint_entropy,
            marginal_entropies,
            copula_entropy,
            residual,
            k,
            n,
        }
    }
}

pub fn entropy_decomposition_check(
    samples: &SampleMatrix,
    k: usize,
    tie_policy: TiePolicy,
) -> Result<DecompositionReport> {
    let ce = copula_entropy(samples, k, tie_policy)?;
    let joint = knn_entropy(samples.values(), samples.d(), k, Metric::Chebyshev)?;
    let marginals = (0..samples.d())
        .map(|j| knn_entropy(&samples.column(j), 1, k, Metric::Chebyshev).map(|e| e.value))
        .collect::<Result<Vec<_>>>()?;
    Ok(DecompositionReport::new(
        joint.value,
        marginals,
        ce.value,
        k,
        samples.n(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{sample_gaussian, CorrelationMatrix};
    use alloc::vec;

    #[test]
    fn single_column_is_rejected() {
        let m = SampleMatrix::from_columns(&[[1.0, 2.0, 3.0, 4.0, 5.0]]).unwrap();
        assert!(matches!(
            copula_entropy(&m, 3, TiePolicy::Average),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn mi_is_negated_ce() {
        let r = CorrelationMatrix::equicorrelated(2, 0.5).unwrap();
        let m = sample_gaussian(&r, 2000, 3).unwrap();
        let ce = copula_entropy(&m, 3, TiePolicy::Average).unwrap();
        let mi = mutual_information(&m, 3, TiePolicy::Average).unwrap();
        assert_eq!(ce.value, -mi.value);
    }

    #[test]
    fn heavy_ties_are_degenerate_without_jitter() {
        // 5 distinct values repeated: every rank vector has many copies
        let x: Vec<f64> = (0..500).map(|i| (i % 5) as f64).collect();
        let m = SampleMatrix::from_columns(&[x.clone(), x]).unwrap();
        let err = copula_entropy(&m, 3, TiePolicy::Average).unwrap_err();
        assert!(matches!(err, Error::Degenerate(ref msg) if msg.contains("jitter")));
        assert!(copula_entropy(&m, 3, TiePolicy::Jitter { seed: 1 }).is_ok());
    }

    #[test]
    fn residual_is_exact_from_stored_parts() {
        let rep = DecompositionReport::new(2.5, vec![1.0, 1.25], 0.125, 3, 10);
        assert_eq!(rep.residual, 2.5 - (1.0 + 1.25) - 0.125);
    }
}
