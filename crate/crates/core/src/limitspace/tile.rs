use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::group::{format_word, from_lex_index, Letter};
use crate::par;
use crate::virtual_endo::Lattice;

/// Points with word provenance; row `i` comes from the word with
/// lexicographic index `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub dim: usize,
    pub degree: usize,
    pub depth: usize,
    pub points: Vec<Vec<f64>>,
}

impl PointCloud {
    pub fn word(&self, i: usize) -> Vec<Letter> {
        from_lex_index(i, self.degree, self.depth)
    }

    /// CSV with header `x1,…,xn,word`.
    pub fn to_csv(&self) -> String {
        let mut s = (1..=self.dim).map(|k| format!("x{k}")).collect::<Vec<_>>().join(",");
        s.push_str(",word\n");
        for (i, p) in self.points.iter().enumerate() {
            let coords: Vec<String> = p.iter().map(|x| (x + 0.0).to_string()).collect();
            writeln!(s, "{},{}", coords.join(","), format_word(&self.word(i))).expect("write to string");
        }
        s
    }
}

fn inverse_matrix(l: &Lattice) -> Vec<Vec<f64>> {
    let m = l.matrix();
    let det = m.det() as f64;
    m.adjugate()
        .iter()
        .map(|row| row.iter().map(|&a| a as f64 / det).collect())
        .collect()
}

fn apply_shifted(inv: &[Vec<f64>], p: &[f64], r: &[i64]) -> Vec<f64> {
    inv.iter()
        .map(|row| row.iter().zip(p.iter().zip(r)).map(|(a, (x, d))| a * (x + *d as f64)).sum())
        .collect()
}

/// Partial sums `Σ_{k=1..N} A⁻ᵏ r_{x_k}` for every word `x₁ … x_N`,
/// built as `S(x₁ x₂ … x_N) = A⁻¹(S(x₂ … x_N) + r_{x₁})`.
pub fn tile_cloud(l: &Lattice, depth: usize) -> Result<PointCloud> {
    if !l.is_expanding() {
        return Err(Error::NonExpanding(format!("eigenvalue moduli {:?}", l.eigenvalue_moduli())));
    }
    let inv = inverse_matrix(l);
    let d = l.digits().len();
    let mut points = vec![vec![0.0; l.dim()]];
    for n in 1..=depth {
        let block = points.len();
        points = par::map_range(d * block, |i| apply_shifted(&inv, &points[i % block], &l.digits()[i / block]));
        debug_assert_eq!(points.len(), d.pow(n as u32));
    }
    Ok(PointCloud {
        dim: l.dim(),
        degree: d,
        depth,
        points,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TileCheck {
    /// Largest deviation from `A⁻¹(S(x₂ … x_N) + r_{x₁})`.
    pub ifs_error: f64,
    /// One-sided Hausdorff distance from the depth-`N` cloud to the
    /// depth-`(N−1)` cloud.
    pub increment: f64,
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Checks the self-affine identity on a depth-`N` cloud and measures how far
/// it moved from depth `N − 1`.
pub fn tile_ifs_check(cloud: &PointCloud, l: &Lattice) -> Result<TileCheck> {
    if cloud.depth == 0 {
        return Err(Error::Geometry("tile check needs depth at least 1".into()));
    }
    let prev = tile_cloud(l, cloud.depth - 1)?;
    let inv = inverse_matrix(l);
    let block = prev.points.len();
    let ifs_error = par::max_range(cloud.points.len(), |i| {
        let expected = apply_shifted(&inv, &prev.points[i % block], &l.digits()[i / block]);
        dist(&expected, &cloud.points[i])
    });
    let increment = par::max_range(cloud.points.len(), |i| {
        prev.points
            .iter()
            .map(|q| dist(q, &cloud.points[i]))
            .fold(f64::INFINITY, f64::min)
    });
    Ok(TileCheck { ifs_error, increment })
}
