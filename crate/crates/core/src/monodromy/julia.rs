use std::fmt::Write as _;

use num_complex::Complex64;

use super::lambda::PreimageTree;
use crate::error::{Error, Result};

/// The `dⁿ` points `Λ(v)`, `|v| = n`, in lexicographic order of `v`: an
/// order-`n` approximation of the Julia set.
pub fn julia_cloud(tree: &PreimageTree, n: usize) -> Result<Vec<Complex64>> {
    if n > tree.depth() {
        return Err(Error::Geometry(format!(
            "preimage tree has depth {}, cloud of depth {n} requested",
            tree.depth()
        )));
    }
    Ok(tree.level(n).to_vec())
}

/// CSV with header `re,im`.
pub fn cloud_csv(points: &[Complex64]) -> String {
    let mut s = String::from("re,im\n");
    for z in points {
        writeln!(s, "{},{}", z.re + 0.0, z.im + 0.0).expect("write to string");
    }
    s
}

/// Largest distance from a point of `a` to the set `b`.
pub fn directed_hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    crate::par::max_range(a.len(), |i| {
        b.iter().map(|q| (a[i] - q).norm()).fold(f64::INFINITY, f64::min)
    })
}

pub fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    directed_hausdorff(a, b).max(directed_hausdorff(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_format() {
        let csv = cloud_csv(&[Complex64::new(1.0, -0.5)]);
        assert_eq!(csv, "re,im\n1,-0.5\n");
    }

    #[test]
    fn hausdorff_distance() {
        let a = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        let b = [Complex64::new(0.0, 0.0)];
        assert_eq!(directed_hausdorff(&b, &a), 0.0);
        assert_eq!(hausdorff(&a, &b), 1.0);
    }
}
