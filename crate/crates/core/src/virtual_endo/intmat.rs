//! Small dense integer matrices with exact arithmetic.

use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidPreset("matrix must be square and non-empty".into()));
        }
        Ok(IntMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        IntMatrix { n, data }
    }

    /// Parses `"a,b;c,d"` (rows separated by `;`).
    pub fn parse(text: &str) -> Result<Self> {
        let rows = text
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|t| {
                        t.trim().parse::<i64>().map_err(|_| {
                            Error::InvalidPreset(format!("bad matrix entry `{}`", t.trim()))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n).map(<[i64]>::to_vec).collect()
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.n;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum();
            }
        }
        IntMatrix { n, data }
    }

    fn minor(&self, row: usize, col: usize) -> IntMatrix {
        let n = self.n - 1;
        let data = (0..self.n)
            .filter(|&i| i != row)
            .flat_map(|i| (0..self.n).filter(move |&j| j != col).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        IntMatrix { n, data }
    }

    /// Exact determinant (fraction-free elimination).
    pub fn det(&self) -> i128 {
        let n = self.n;
        let mut m: Vec<i128> = self.data.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if m[k * n + k] == 0 {
                let Some(p) = (k + 1..n).find(|&i| m[i * n + k] != 0) else {
                    return 0;
                };
                for j in 0..n {
                    m.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i * n + j] = (m[i * n + j] * m[k * n + k] - m[i * n + k] * m[k * n + j]) / prev;
                }
            }
            prev = m[k * n + k];
        }
        sign * m[n * n - 1]
    }

    /// Adjugate, so that `adj · A = det(A) · I`.
    pub fn adjugate(&self) -> Vec<Vec<i128>> {
        let n = self.n;
        if n == 1 {
            return vec![vec![1]];
        }
        let mut adj = vec![vec![0i128; n]; n];
        for i in 0..n {
            for j in 0..n {
                let c = self.minor(i, j).det();
                adj[j][i] = if (i + j) % 2 == 0 { c } else { -c };
            }
        }
        adj
    }

    /// Rational kernel basis vector scaled to a primitive integer vector, if
    /// the kernel is non-trivial.
    pub fn integer_kernel_vector(&self) -> Option<Vec<i64>> {
        let n = self.n;
        let mut m: Vec<Vec<Ratio<i128>>> = (0..n)
            .map(|i| (0..n).map(|j| Ratio::from_integer(self.get(i, j) as i128)).collect())
            .collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..n {
            let Some(p) = (row..n).find(|&i| m[i][col] != Ratio::from_integer(0)) else {
                continue;
            };
            m.swap(row, p);
            let lead = m[row][col];
            for j in 0..n {
                m[row][j] /= lead;
            }
            for i in 0..n {
                if i != row && m[i][col] != Ratio::from_integer(0) {
                    let f = m[i][col];
                    for j in 0..n {
                        let t = m[row][j] * f;
                        m[i][j] -= t;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        let free = (0..n).find(|c| !pivots.contains(c))?;
        let mut v = vec![Ratio::from_integer(0i128); n];
        v[free] = Ratio::from_integer(1);
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][free];
        }
        let lcm = v.iter().fold(1i128, |acc, x| num_integer_lcm(acc, *x.denom()));
        let ints: Vec<i128> = v.iter().map(|x| (x * lcm).to_integer()).collect();
        let g = ints.iter().fold(0i128, |acc, &x| gcd(acc, x.abs()));
        let sign = if ints.iter().find(|&&x| x != 0).copied().unwrap_or(1) < 0 {
            -1
        } else {
            1
        };
        Some(ints.iter().map(|&x| (sign * x / g) as i64).collect())
    }
}

pub(crate) fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn num_integer_lcm(a: i128, b: i128) -> i128 {
    a / gcd(a, b) * b
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

/// Solves `A w = v` exactly using the adjugate; `None` if `w` is not integral.
pub(crate) fn solve_integral(adj: &[Vec<i128>], det: i128, v: &[i64]) -> Option<Vec<i64>> {
    adj.iter()
        .map(|row| {
            let s: i128 = row.iter().zip(v).map(|(a, &b)| a * b as i128).sum();
            (s % det == 0).then(|| (s / det) as i64)
        })
        .collect()
}
