//! Special functions needed by the estimators.

/// Digamma function ψ(x) for x > 0.
///
/// Shifts the argument above 10 with the recurrence ψ(x) = ψ(x+1) − 1/x and
/// then applies the asymptotic series.
pub fn digamma(x: f64) -> f64 {
    debug_assert!(x > 0.0, "digamma is only used on positive arguments");
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // Bernoulli-number tail: 1/12, 1/120, 1/252, 1/240, 1/132
    let tail = inv2
        * (1.0 / 12.0
            - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 / 132.0))));
    acc + libm::log(x) - 0.5 * inv - tail
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Log-volume of the unit ball of the L∞ norm in `d` dimensions: d·ln 2.
pub fn ln_unit_ball_chebyshev(d: usize) -> f64 {
    d as f64 * core::f64::consts::LN_2
}

/// Log-volume of the Euclidean unit ball: (d/2)·ln π − ln Γ(1 + d/2).
pub fn ln_unit_ball_euclidean(d: usize) -> f64 {
    let half = d as f64 / 2.0;
    half * libm::log(core::f64::consts::PI) - ln_gamma(1.0 + half)
}
