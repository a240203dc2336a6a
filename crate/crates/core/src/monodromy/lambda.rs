use num_complex::Complex64;

use super::geometry::Geometry;
use super::lift::{lift_chain, LiftOptions};
use super::path::Polyline;
use super::poly::PolynomialMap;
use crate::error::{Error, Result};
use crate::group::{from_lex_index, lex_index, Letter};
use crate::par;

/// Absolute tolerance for endpoint equations.
pub const EPS_MATCH: f64 = 1e-9;
/// Nodes on one level must be further apart than this.
pub const MIN_SEPARATION: f64 = 10.0 * EPS_MATCH;
/// Nearest candidate must be this many times closer than the runner-up.
pub const RATIO_TEST: f64 = 10.0;

/// The points `Λ(v)` for all words `|v| ≤ depth`; `levels[n]` is indexed by
/// the lexicographic index of `v`.
#[derive(Debug, Clone)]
pub struct PreimageTree {
    degree: usize,
    levels: Vec<Vec<Complex64>>,
}

impl PreimageTree {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn basepoint(&self) -> Complex64 {
        self.levels[0][0]
    }

    pub fn level(&self, n: usize) -> &[Complex64] {
        &self.levels[n]
    }

    pub fn point(&self, v: &[Letter]) -> Complex64 {
        self.levels[v.len()][lex_index(v, self.degree)]
    }

    /// `Λ(v_1), Λ(v_1 v_2), …, Λ(v)`: start points for lifting a path based
    /// at the basepoint through `|v|` levels to end near `Λ(v)`'s level.
    pub fn chain(&self, v: &[Letter]) -> Vec<Complex64> {
        (1..=v.len()).map(|k| self.point(&v[..k])).collect()
    }
}

/// The solution of `f(z) = target` nearest to `z`, subject to the ratio test.
pub(crate) fn snap(f: &PolynomialMap, z: Complex64, target: Complex64) -> Result<Complex64> {
    let mut roots = f.preimages(target);
    roots.sort_by(|a, b| (a - z).norm().total_cmp(&(b - z).norm()));
    let best = (roots[0] - z).norm();
    let second = (roots[1] - z).norm();
    if best * RATIO_TEST > second {
        return Err(Error::AmbiguousMatch(format!(
            "lift endpoint {z} is {best:e} from the nearest preimage and {second:e} from the next"
        )));
    }
    Ok(roots[0])
}

/// Smallest distance between two points of `points`.
pub(crate) fn min_separation(points: &[Complex64]) -> f64 {
    let mut sorted: Vec<Complex64> = points.to_vec();
    sorted.sort_by(|a, b| a.re.total_cmp(&b.re));
    let mut best = f64::INFINITY;
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            if sorted[j].re - sorted[i].re >= best {
                break;
            }
            best = best.min((sorted[j] - sorted[i]).norm());
        }
    }
    best
}

/// Fills `Λ` level by level: `Λ(xv)` is the end of the lift of `ℓ_x`
/// through `|v|` levels along `Λ(v_1), …, Λ(v)`, snapped to the exact
/// preimage of `Λ(x v_1 … v_{|v|-1})`.
pub fn build_lambda(
    f: &PolynomialMap,
    geometry: &Geometry,
    depth: usize,
    opts: &LiftOptions,
) -> Result<PreimageTree> {
    let d = f.degree();
    if geometry.connecting.len() != d {
        return Err(Error::Geometry(format!(
            "{} connecting paths for a map of degree {d}",
            geometry.connecting.len()
        )));
    }
    let mut tree = PreimageTree {
        degree: d,
        levels: vec![vec![geometry.basepoint]],
    };
    for n in 1..=depth {
        let size = d
            .checked_pow(n as u32)
            .filter(|&s| s <= 1 << 26)
            .ok_or(Error::Budget {
                what: "preimage tree level",
                limit: 1 << 26,
            })?;
        let level = par::try_map_range(size, |i| {
            let w = from_lex_index(i, d, n);
            let (x, v) = (w[0], &w[1..]);
            let path: &Polyline = &geometry.connecting[x];
            let end = lift_chain(f, path, &tree.chain(v), opts)?;
            snap(f, end, tree.point(&w[..n - 1]))
        })?;
        let sep = min_separation(&level);
        if sep <= MIN_SEPARATION {
            return Err(Error::Separation { level: n, distance: sep });
        }
        tree.levels.push(level);
    }
    Ok(tree)
}
