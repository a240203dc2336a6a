use num_complex::Complex64;

use super::path::Polyline;
use super::poly::PolynomialMap;
use crate::error::{Error, Result};

/// Step control for path lifting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftOptions {
    /// Largest step taken along the base path.
    pub step: f64,
    /// Steps shorter than this abort with a branch-ambiguity error.
    pub min_step: f64,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions {
            step: 0.02,
            min_step: 1e-13,
        }
    }
}

/// Tolerance on `f(start) = γ(0)` and on the chain relations.
pub const ENDPOINT_TOLERANCE: f64 = 1e-9;

/// Unique lift of `gamma` under `f` starting at `start`.
pub fn lift_path(
    f: &PolynomialMap,
    gamma: &Polyline,
    start: Complex64,
    opts: &LiftOptions,
) -> Result<Polyline> {
    let (_, path) = lift_chain_inner(f, gamma, &[start], opts, true)?;
    Ok(Polyline::new(path))
}

/// Lifts `gamma` through `starts.len()` iterations of `f` at once:
/// `starts[k]` is the start of the lift under `f^(k+1)`, so that
/// `f(starts[0]) = γ(0)` and `f(starts[k]) = starts[k-1]`. Returns the end
/// of the deepest lift.
pub fn lift_chain(
    f: &PolynomialMap,
    gamma: &Polyline,
    starts: &[Complex64],
    opts: &LiftOptions,
) -> Result<Complex64> {
    Ok(lift_chain_inner(f, gamma, starts, opts, false)?.0)
}

/// Like [`lift_chain`] but returns the whole deepest lifted path.
pub fn lift_chain_path(
    f: &PolynomialMap,
    gamma: &Polyline,
    starts: &[Complex64],
    opts: &LiftOptions,
) -> Result<Polyline> {
    Ok(Polyline::new(lift_chain_inner(f, gamma, starts, opts, true)?.1))
}

fn lift_chain_inner(
    f: &PolynomialMap,
    gamma: &Polyline,
    starts: &[Complex64],
    opts: &LiftOptions,
    record: bool,
) -> Result<(Complex64, Vec<Complex64>)> {
    if starts.is_empty() {
        return Ok((gamma.end(), gamma.points().to_vec()));
    }
    let mut target = gamma.start();
    for (k, &z) in starts.iter().enumerate() {
        if (f.eval(z) - target).norm() > ENDPOINT_TOLERANCE * (1.0 + target.norm()) {
            return Err(Error::Geometry(format!(
                "start point at lift level {} does not map to the previous level",
                k + 1
            )));
        }
        target = z;
    }
    let mut chain = starts.to_vec();
    let mut recorded = vec![*chain.last().expect("non-empty")];
    let mut next = chain.clone();
    for w in gamma.points().windows(2) {
        let (a, b) = (w[0], w[1]);
        let len = (b - a).norm();
        if len == 0.0 {
            continue;
        }
        let max_h = (opts.step / len).min(1.0);
        let mut h = max_h;
        let mut s = 0.0;
        while s < 1.0 {
            let s1 = (s + h).min(1.0);
            let base = a + (b - a) * s1;
            if advance(f, &chain, base, &mut next) {
                std::mem::swap(&mut chain, &mut next);
                if record {
                    recorded.push(*chain.last().expect("non-empty"));
                }
                s = s1;
                h = (h * 2.0).min(max_h);
            } else {
                h *= 0.5;
                if h * len < opts.min_step {
                    return Err(Error::BranchAmbiguity(format!(
                        "preimages too close to separate near {base} (step below {:e})",
                        opts.min_step
                    )));
                }
            }
        }
    }
    Ok((*chain.last().expect("non-empty"), recorded))
}

/// Moves every level of the chain to follow the base point `base`. Fails if
/// any level moves more than a third of the distance to the other preimages.
fn advance(f: &PolynomialMap, chain: &[Complex64], base: Complex64, out: &mut [Complex64]) -> bool {
    let mut target = base;
    for (k, &z) in chain.iter().enumerate() {
        let Some((next, sep)) = f.continue_root(z, target) else {
            return false;
        };
        if (next - z).norm() * 3.0 > sep {
            return false;
        }
        out[k] = next;
        target = next;
    }
    true
}
