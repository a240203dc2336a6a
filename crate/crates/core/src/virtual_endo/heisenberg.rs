//! Integer Heisenberg group with `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+b·a')`
//! and the virtual endomorphism `(a,b,c) ↦ (a/p, b/q, c/pq)`.

use super::{validate_transversal, ConcreteGroup};
use crate::error::{Error, Result};

pub type HeisenbergElem = [i64; 3];

#[derive(Debug, Clone)]
pub struct Heisenberg {
    p: i64,
    q: i64,
    transversal: Vec<HeisenbergElem>,
}

impl Heisenberg {
    /// The transversal `{(a,b,c) : a < p, b < q, c < pq}`, with letter index
    /// `(a·q + b)·pq + c`.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p < 2 || q < 2 {
            return Err(Error::InvalidPreset(format!("need p, q >= 2, got p={p}, q={q}")));
        }
        let mut transversal = Vec::with_capacity((p * p * q * q) as usize);
        for a in 0..p {
            for b in 0..q {
                for c in 0..p * q {
                    transversal.push([a, b, c]);
                }
            }
        }
        let h = Heisenberg { p, q, transversal };
        validate_transversal(&h, Some((p * p * q * q) as usize))?;
        Ok(h)
    }

    pub fn params(&self) -> (i64, i64) {
        (self.p, self.q)
    }

    pub fn default_generators(&self) -> Vec<HeisenbergElem> {
        vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    }
}

impl ConcreteGroup for Heisenberg {
    type Elem = HeisenbergElem;

    fn identity(&self) -> HeisenbergElem {
        [0, 0, 0]
    }

    fn multiply(&self, x: &HeisenbergElem, y: &HeisenbergElem) -> HeisenbergElem {
        [x[0] + y[0], x[1] + y[1], x[2] + y[2] + x[1] * y[0]]
    }

    fn invert(&self, x: &HeisenbergElem) -> HeisenbergElem {
        [-x[0], -x[1], x[0] * x[1] - x[2]]
    }

    fn dom_contains(&self, x: &HeisenbergElem) -> bool {
        x[0] % self.p == 0 && x[1] % self.q == 0 && x[2] % (self.p * self.q) == 0
    }

    fn phi_apply(&self, x: &HeisenbergElem) -> Option<HeisenbergElem> {
        self.dom_contains(x)
            .then(|| [x[0] / self.p, x[1] / self.q, x[2] / (self.p * self.q)])
    }

    fn transversal(&self) -> &[HeisenbergElem] {
        &self.transversal
    }

    fn coset_index(&self, x: &HeisenbergElem) -> Option<usize> {
        // x·(a,b,c)⁻¹ = (x₀−a, x₁−b, x₂ + ab − c − x₁a)
        let pq = self.p * self.q;
        let a = x[0].rem_euclid(self.p);
        let b = x[1].rem_euclid(self.q);
        let c = (x[2] + a * b - x[1] * a).rem_euclid(pq);
        Some(((a * self.q + b) * pq + c) as usize)
    }

    fn format_elem(&self, x: &HeisenbergElem) -> String {
        format!("({},{},{})", x[0], x[1], x[2])
    }
}
