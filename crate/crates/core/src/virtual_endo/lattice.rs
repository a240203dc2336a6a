//! `ℤⁿ` with the virtual endomorphism `v ↦ A⁻¹v` on `A·ℤⁿ`.

use std::collections::HashMap;

use nalgebra::DMatrix;

use super::intmat::{solve_integral, IntMatrix};
use super::{validate_transversal, ConcreteGroup};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Lattice {
    a: IntMatrix,
    det: i128,
    adj: Vec<Vec<i128>>,
    digits: Vec<Vec<i64>>,
    /// Digit index by coset key, see [`Lattice::coset_key`].
    cosets: HashMap<Vec<i128>, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Faithfulness {
    Faithful,
    /// A non-zero vector lying in `AᵏZⁿ` for every `k`.
    Unfaithful { witness: Vec<i64> },
    Unknown,
}

/// Largest power `k` of `A` searched for an invariant integer line.
const FAITHFUL_MAX_POWER: u32 = 6;

impl Lattice {
    pub fn new(a: IntMatrix, digits: Vec<Vec<i64>>) -> Result<Self> {
        let det = a.det();
        if det.abs() < 2 {
            return Err(Error::InvalidPreset(format!("|det A| must exceed 1, got {}", det.abs())));
        }
        if let Some(d) = digits.iter().find(|d| d.len() != a.dim()) {
            return Err(Error::InvalidPreset(format!(
                "digit {d:?} has the wrong dimension (expected {})",
                a.dim()
            )));
        }
        let adj = a.adjugate();
        let mut lattice = Lattice {
            a,
            det,
            adj,
            digits,
            cosets: HashMap::new(),
        };
        validate_transversal(&lattice, Some(det.unsigned_abs() as usize))?;
        lattice.cosets = (0..lattice.digits.len())
            .map(|i| (lattice.coset_key(&lattice.digits[i]), i))
            .collect();
        Ok(lattice)
    }

    /// `adj(A)·v mod |det A|`, which is constant exactly on cosets of `AZⁿ`.
    fn coset_key(&self, v: &[i64]) -> Vec<i128> {
        let m = self.det.abs();
        self.adj
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, &x)| a * x as i128).sum::<i128>().rem_euclid(m))
            .collect()
    }

    /// The twin-dragon style preset `A = [[-1,1],[-1,-1]]`, digits `(0,0), (1,0)`.
    pub fn dragon() -> Self {
        Self::new(
            IntMatrix::parse("-1,1;-1,-1").expect("valid matrix"),
            vec![vec![0, 0], vec![1, 0]],
        )
        .expect("valid preset")
    }

    /// `A = [2]` with digits `0, 1`: the binary odometer.
    pub fn binary() -> Self {
        Self::new(IntMatrix::parse("2").expect("valid matrix"), vec![vec![0], vec![1]])
            .expect("valid preset")
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn digits(&self) -> &[Vec<i64>] {
        &self.digits
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// Moduli of the eigenvalues of `A`.
    pub fn eigenvalue_moduli(&self) -> Vec<f64> {
        let n = self.dim();
        let m = DMatrix::from_fn(n, n, |i, j| self.a.get(i, j) as f64);
        m.complex_eigenvalues().iter().map(|z| z.norm()).collect()
    }

    pub fn is_expanding(&self) -> bool {
        self.eigenvalue_moduli().iter().all(|&r| r > 1.0 + 1e-9)
    }

    /// An expanding matrix gives a faithful action. Otherwise an integer
    /// vector `w ≠ 0` with `Aᵏw = ±w` for some `k ≤ 6` lies in every `AᵐZⁿ`
    /// and witnesses a kernel; failing both, the answer is unknown.
    pub fn faithfulness(&self) -> Faithfulness {
        if self.is_expanding() {
            return Faithfulness::Faithful;
        }
        let n = self.dim();
        let mut power = IntMatrix::identity(n);
        for _ in 1..=FAITHFUL_MAX_POWER {
            power = power.mul(&self.a);
            for sign in [1, -1] {
                let rows = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| power.get(i, j) - if i == j { sign } else { 0 })
                            .collect()
                    })
                    .collect();
                let shifted = IntMatrix::from_rows(rows).expect("square");
                if let Some(witness) = shifted.integer_kernel_vector() {
                    return Faithfulness::Unfaithful { witness };
                }
            }
        }
        Faithfulness::Unknown
    }
}

/// Parses digits written as `"(0,0);(1,0)"` or `"0;1"`.
pub fn parse_digits(text: &str) -> Result<Vec<Vec<i64>>> {
    text.split(';')
        .map(|d| {
            d.trim()
                .trim_start_matches('(')
                .trim_end_matches(')')
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::InvalidPreset(format!("bad digit entry `{}`", t.trim())))
                })
                .collect()
        })
        .collect()
}

impl ConcreteGroup for Lattice {
    type Elem = Vec<i64>;

    fn identity(&self) -> Vec<i64> {
        vec![0; self.dim()]
    }

    fn multiply(&self, a: &Vec<i64>, b: &Vec<i64>) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn invert(&self, a: &Vec<i64>) -> Vec<i64> {
        a.iter().map(|x| -x).collect()
    }

    fn dom_contains(&self, a: &Vec<i64>) -> bool {
        solve_integral(&self.adj, self.det, a).is_some()
    }

    fn phi_apply(&self, a: &Vec<i64>) -> Option<Vec<i64>> {
        solve_integral(&self.adj, self.det, a)
    }

    fn transversal(&self) -> &[Vec<i64>] {
        &self.digits
    }

    fn coset_index(&self, a: &Vec<i64>) -> Option<usize> {
        self.cosets.get(&self.coset_key(a)).copied()
    }

    fn format_elem(&self, a: &Vec<i64>) -> String {
        let parts: Vec<String> = a.iter().map(i64::to_string).collect();
        format!("({})", parts.join(","))
    }
}
