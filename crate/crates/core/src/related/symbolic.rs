//! Related sequences as exact polynomials in the normalized coefficients `δ̂_k = -δ_k/δ_1`.

use crate::error::{Error, Result};
use crate::series::MultiPoly;

use super::{upflat_recursion, zigzag_recursion};

/// Largest order accepted by the symbolic solvers.
pub const MAX_SYMBOLIC_ORDER: usize = 8;

fn indeterminates(p: usize) -> Result<Vec<MultiPoly>> {
    if p == 0 {
        return Err(Error::OutOfRange("expansion order must be at least 1".into()));
    }
    if p > MAX_SYMBOLIC_ORDER {
        return Err(Error::Resource { requested: p, max: MAX_SYMBOLIC_ORDER });
    }
    Ok((0..=p).map(|k| MultiPoly::var(p + 1, k)).collect())
}

/// `α_0..α_p` for the up-flat profile; `α_0` is the zero polynomial.
pub fn upflat_symbolic(p: usize) -> Result<Vec<MultiPoly>> {
    let d = indeterminates(p)?;
    Ok(upflat_recursion(&d, p))
}

/// `α_0..α_p` for the zig-zag profile.
pub fn zigzag_symbolic(p: usize) -> Result<Vec<MultiPoly>> {
    let d = indeterminates(p)?;
    Ok(zigzag_recursion(&d, p))
}
