//! Scalar functions with derivative evaluators.

/// A real function of one variable that can report its derivatives.
///
/// `derivative(x, 0)` is the value itself.
pub trait SmoothFn: Send + Sync {
    fn derivative(&self, x: f64, k: usize) -> f64;

    fn value(&self, x: f64) -> f64 {
        self.derivative(x, 0)
    }

    /// `[f'(x), ..., f^{(k)}(x)]`.
    fn derivatives(&self, x: f64, k: usize) -> Vec<f64> {
        (1..=k).map(|j| self.derivative(x, j)).collect()
    }
}

impl<F> SmoothFn for F
where
    F: Fn(f64, usize) -> f64 + Send + Sync,
{
    fn derivative(&self, x: f64, k: usize) -> f64 {
        self(x, k)
    }
}

/// `x ↦ a + b x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine {
    pub intercept: f64,
    pub slope: f64,
}

impl SmoothFn for Affine {
    fn derivative(&self, x: f64, k: usize) -> f64 {
        match k {
            0 => self.intercept + self.slope * x,
            1 => self.slope,
            _ => 0.0,
        }
    }
}

/// `x ↦ scale · log(x)` on `x > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledLog {
    pub scale: f64,
}

impl SmoothFn for ScaledLog {
    fn derivative(&self, x: f64, k: usize) -> f64 {
        if k == 0 {
            return self.scale * x.ln();
        }
        // D^k log x = (-1)^{k-1} (k-1)! / x^k
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let fact: f64 = (1..k).map(|j| j as f64).product();
        self.scale * sign * fact / x.powi(k as i32)
    }
}

/// `x ↦ scale · exp(rate · x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledExp {
    pub scale: f64,
    pub rate: f64,
}

impl SmoothFn for ScaledExp {
    fn derivative(&self, x: f64, k: usize) -> f64 {
        self.scale * self.rate.powi(k as i32) * (self.rate * x).exp()
    }
}
