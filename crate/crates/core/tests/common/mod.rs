//! Test-only reference computations, independent of the library's
//! estimators.
#![allow(dead_code)]

/// Modified Bessel function of the first kind by its power series, x ≥ 0.
pub fn bessel_i(order: u32, x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = half.powi(order as i32) / (1..=order).map(f64::from).product::<f64>();
    let mut sum = term;
    for m in 1..200u32 {
        term *= half * half / (f64::from(m) * f64::from(m + order));
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    sum
}

/// Exact copula entropy of two particles on a periodic line with
/// u(r) = −ε cos(2πr/L): the separation follows a von Mises law with
/// concentration κ = βε, so CE = −(κ·I₁(κ)/I₀(κ) − ln I₀(κ)), even in κ.
pub fn two_particle_cosine_ce(kappa: f64) -> f64 {
    let kappa = kappa.abs();
    let i0 = bessel_i(0, kappa);
    let i1 = bessel_i(1, kappa);
    -(kappa * i1 / i0 - i0.ln())
}

/// −∫ φ ln φ for the standard normal by composite Simpson quadrature.
pub fn normal_entropy_quadrature() -> f64 {
    let (a, b, n) = (-12.0f64, 12.0f64, 24_000usize);
    let h = (b - a) / n as f64;
    let f = |x: f64| {
        let phi = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        if phi > 0.0 {
            -phi * phi.ln()
        } else {
            0.0
        }
    };
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn uniform_points(n: usize, d: usize, seed: u64) -> Vec<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n * d).map(|_| rng.random::<f64>()).collect()
}

pub fn normal_points(n: usize, seed: u64) -> Vec<f64> {
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    StandardNormal.sample_iter(&mut rng).take(n).collect()
}
