//! Central finite differences with one Richardson step.

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

// Centered k-th difference on nodes x + (k/2 - j) h, j = 0..=k; error O(h²).
fn central(f: &dyn Fn(f64) -> f64, x: f64, k: usize, h: f64) -> f64 {
    let half = k as f64 / 2.0;
    let sum: f64 = (0..=k)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(k, j) * f(x + (half - j as f64) * h)
        })
        .sum();
    sum / h.powi(k as i32)
}

/// Step used for the `k`-th derivative at `x`: `eps^{1/(k+4)} · max(1, |x|)`,
/// balancing rounding against the `O(h⁴)` error left after extrapolation.
pub fn step(x: f64, k: usize) -> f64 {
    f64::EPSILON.powf(1.0 / (k as f64 + 4.0)) * x.abs().max(1.0)
}

/// `D^k f(x)` by central differences, Richardson-extrapolated over `h` and `h/2`.
pub fn derivative(f: &dyn Fn(f64) -> f64, x: f64, k: usize) -> f64 {
    if k == 0 {
        return f(x);
    }
    let h = step(x, k);
    let coarse = central(f, x, k, h);
    let fine = central(f, x, k, h / 2.0);
    (4.0 * fine - coarse) / 3.0
}
