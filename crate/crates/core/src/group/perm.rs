use std::fmt;

use crate::error::{Error, Result};

/// A permutation of the alphabet `0..d`, stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(d: usize) -> Self {
        Permutation {
            images: (0..d).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &y in &images {
            if y >= d {
                return Err(Error::InvalidPermutation(format!(
                    "image {y} out of range 0..{d}"
                )));
            }
            if seen[y] {
                return Err(Error::InvalidPermutation(format!(
                    "image {y} appears twice"
                )));
            }
            seen[y] = true;
        }
        Ok(Permutation { images })
    }

    /// Parses cycle notation such as `(0 1)(2 3)` or `()` over `0..d`.
    pub fn parse_cycles(text: &str, d: usize) -> Result<Self> {
        let mut images: Vec<usize> = (0..d).collect();
        let mut moved = vec![false; d];
        let mut rest = text.trim();
        if rest.is_empty() {
            return Err(Error::InvalidPermutation("empty cycle notation".into()));
        }
        while !rest.is_empty() {
            let Some(body) = rest.strip_prefix('(') else {
                return Err(Error::InvalidPermutation(format!("expected `(` in `{text}`")));
            };
            let close = body
                .find(')')
                .ok_or_else(|| Error::InvalidPermutation(format!("unclosed cycle in `{text}`")))?;
            let cycle: Vec<usize> = body[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| Error::InvalidPermutation(format!("bad letter `{s}`")))
                })
                .collect::<Result<_>>()?;
            for &x in &cycle {
                if x >= d {
                    return Err(Error::LetterOutOfRange { letter: x, size: d });
                }
                if moved[x] {
                    return Err(Error::InvalidPermutation(format!(
                        "letter {x} appears in more than one cycle"
                    )));
                }
                moved[x] = true;
            }
            for (i, &x) in cycle.iter().enumerate() {
                images[x] = cycle[(i + 1) % cycle.len()];
            }
            rest = body[close + 1..].trim_start();
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &y)| i == y)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        Permutation { images: inv }
    }

    /// `self` followed by `other` (right action: `x^(st) = (x^s)^t`).
    pub fn then(&self, other: &Permutation) -> Self {
        Permutation {
            images: self.images.iter().map(|&y| other.images[y]).collect(),
        }
    }

    /// All permutations of `0..d` in lexicographic order of image arrays.
    pub fn all(d: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..d).collect();
        loop {
            out.push(Permutation {
                images: current.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (0..d.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1])
            else {
                break;
            };
            let j = (i + 1..d).rev().find(|&j| current[j] > current[i]).unwrap();
            current.swap(i, j);
            current[i + 1..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation with trivial cycles omitted; `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.images.len()];
        let mut wrote = false;
        for start in 0..self.images.len() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            let body: Vec<String> = cycle.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", body.join(" "))?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}
