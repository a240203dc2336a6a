//! Affine maps `z ↦ (−1)ᵏz + ω` of a lattice `Γ ⊂ ℂ`, with the virtual
//! endomorphism `(k, ω) ↦ (k, α⁻¹ω)` defined on `ω ∈ αΓ`.
//!
//! Lattice vectors are stored as integer coordinates in the basis of `Γ`;
//! multiplication by `α` is the integer matrix `M` on coordinates.

use num_complex::Complex64;

use super::intmat::{solve_integral, IntMatrix};
use super::{validate_transversal, ConcreteGroup};
use crate::error::{Error, Result};

/// `(k, ω)` with `k ∈ {0, 1}`.
pub type LattesElem = (u8, [i64; 2]);

#[derive(Debug, Clone)]
pub struct Lattes {
    basis: [Complex64; 2],
    alpha: Complex64,
    m: IntMatrix,
    det: i128,
    adj: Vec<Vec<i128>>,
    transversal: Vec<LattesElem>,
}

/// Parses a complex number written `"re,im"`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let (re, im) = text
        .split_once(',')
        .ok_or_else(|| Error::InvalidPreset(format!("expected `re,im`, got `{text}`")))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| Error::InvalidPreset(format!("bad number `{}`", t.trim())))
    };
    Ok(Complex64::new(parse(re)?, parse(im)?))
}

impl Lattes {
    pub fn new(basis: [Complex64; 2], alpha: Complex64) -> Result<Self> {
        let [w1, w2] = basis;
        let area = w1.re * w2.im - w1.im * w2.re;
        if area.abs() < 1e-12 {
            return Err(Error::InvalidPreset("lattice basis is degenerate".into()));
        }
        if (alpha.norm() - 1.0).abs() < 1e-12 {
            return Err(Error::InvalidPreset("|alpha| must differ from 1".into()));
        }
        // Coordinates of α·ω_j in the basis, rounded and checked.
        let coords = |z: Complex64| -> Result<[i64; 2]> {
            let u = (z.re * w2.im - z.im * w2.re) / area;
            let v = (w1.re * z.im - w1.im * z.re) / area;
            let (ui, vi) = (u.round(), v.round());
            let back = w1 * ui + w2 * vi;
            if (back - z).norm() > 1e-9 * (1.0 + z.norm()) {
                return Err(Error::InvalidPreset(format!(
                    "alpha does not map the lattice into itself ({z} is not a lattice point)"
                )));
            }
            Ok([ui as i64, vi as i64])
        };
        let c1 = coords(alpha * w1)?;
        let c2 = coords(alpha * w2)?;
        let m = IntMatrix::from_rows(vec![vec![c1[0], c2[0]], vec![c1[1], c2[1]]])?;
        let det = m.det();
        if det.abs() < 2 {
            return Err(Error::InvalidPreset(format!("index |alpha|^2 = {} must exceed 1", det.abs())));
        }
        let adj = m.adjugate();
        let d = det.unsigned_abs() as i64;
        let mut reps: Vec<[i64; 2]> = Vec::new();
        'outer: for v in 0..d {
            for u in 0..d {
                let cand = [u, v];
                let distinct = reps.iter().all(|r| {
                    solve_integral(&adj, det, &[cand[0] - r[0], cand[1] - r[1]]).is_none()
                });
                if distinct {
                    reps.push(cand);
                    if reps.len() as i64 == d {
                        break 'outer;
                    }
                }
            }
        }
        let transversal = reps.into_iter().map(|w| (0u8, w)).collect();
        let l = Lattes {
            basis,
            alpha,
            m,
            det,
            adj,
            transversal,
        };
        validate_transversal(&l, Some(d as usize))?;
        Ok(l)
    }

    /// Gaussian integers with `α = 1 + i`: a degree-2 Lattès example.
    pub fn preset_degree2() -> Self {
        Self::new(
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)],
            Complex64::new(1.0, 1.0),
        )
        .expect("valid preset")
    }

    pub fn basis(&self) -> [Complex64; 2] {
        self.basis
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    /// Integer matrix of multiplication by `α` on lattice coordinates.
    pub fn alpha_matrix(&self) -> &IntMatrix {
        &self.m
    }

    /// `z ↦ −z` and the two basis translations.
    pub fn default_generators(&self) -> Vec<LattesElem> {
        vec![(1, [0, 0]), (0, [1, 0]), (0, [0, 1])]
    }

    /// Evaluates the affine map at `z`.
    pub fn apply(&self, g: &LattesElem, z: Complex64) -> Complex64 {
        let w = self.basis[0] * g.1[0] as f64 + self.basis[1] * g.1[1] as f64;
        if g.0 == 1 {
            -z + w
        } else {
            z + w
        }
    }
}

impl ConcreteGroup for Lattes {
    type Elem = LattesElem;

    fn identity(&self) -> LattesElem {
        (0, [0, 0])
    }

    /// Composition with the left factor applied first.
    fn multiply(&self, a: &LattesElem, b: &LattesElem) -> LattesElem {
        let s = if b.0 == 1 { -1 } else { 1 };
        ((a.0 + b.0) % 2, [s * a.1[0] + b.1[0], s * a.1[1] + b.1[1]])
    }

    fn invert(&self, a: &LattesElem) -> LattesElem {
        let s = if a.0 == 1 { 1 } else { -1 };
        (a.0, [s * a.1[0], s * a.1[1]])
    }

    fn dom_contains(&self, a: &LattesElem) -> bool {
        solve_integral(&self.adj, self.det, &a.1).is_some()
    }

    fn phi_apply(&self, a: &LattesElem) -> Option<LattesElem> {
        solve_integral(&self.adj, self.det, &a.1).map(|w| (a.0, [w[0], w[1]]))
    }

    fn transversal(&self) -> &[LattesElem] {
        &self.transversal
    }

    fn format_elem(&self, a: &LattesElem) -> String {
        format!("({},{},{})", a.0, a.1[0], a.1[1])
    }
}
