//! Wreath-recursion presentations of self-similar groups.
//!
//! Every generator `g` carries a permutation of the alphabet (its action on
//! the first level) and one restriction word per letter. Conventions:
//!
//! * right action, `(xv)^g = x^g v^{g|x}`; in a product `gh` the factor `g`
//!   acts first, so `(gh)|x = g|x · h|(x^g)`;
//! * the restriction tuple entry at index `x` is the restriction at the
//!   *input* letter `x`.
//!
//! File format (UTF-8, `#` starts a comment):
//!
//! ```text
//! alphabet = 2
//! gens = a b
//! a : perm = (0 1) ; 0 -> b ; 1 -> 1
//! b : perm = ()    ; 0 -> a ; 1 -> 1
//! ```

use std::collections::HashMap;
use std::fmt;

use super::perm::Permutation;
use super::word::Letter;
use crate::error::{Error, Result};

/// A generator or its inverse, packed as `2 * index + inverse`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym(u32);

impl Sym {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Sym((generator as u32) << 1 | inverse as u32)
    }

    #[inline]
    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Sym(self.0 ^ 1)
    }

    #[inline]
    pub(crate) fn code(self) -> usize {
        self.0 as usize
    }
}

/// Appends `s` to a freely reduced word, cancelling against the last symbol.
#[inline]
pub fn push_reduced(word: &mut Vec<Sym>, s: Sym) {
    if word.last() == Some(&s.inverse()) {
        word.pop();
    } else {
        word.push(s);
    }
}

pub fn free_reduce(word: &[Sym]) -> Vec<Sym> {
    let mut out = Vec::with_capacity(word.len());
    for &s in word {
        push_reduced(&mut out, s);
    }
    out
}

pub fn invert_word(word: &[Sym]) -> Vec<Sym> {
    word.iter().rev().map(|s| s.inverse()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    degree: usize,
    names: Vec<String>,
    perms: Vec<Permutation>,
    restrictions: Vec<Vec<Vec<Sym>>>,
    // Indexed by Sym::code: data for generators and their inverses.
    sym_perm: Vec<Vec<Letter>>,
    sym_restr: Vec<Vec<Vec<Sym>>>,
}

impl Presentation {
    /// Builds and validates a presentation. `restrictions[g][x]` is the
    /// restriction of generator `g` at letter `x`, as a word in the generators.
    pub fn new(
        degree: usize,
        names: Vec<String>,
        perms: Vec<Permutation>,
        restrictions: Vec<Vec<Vec<Sym>>>,
    ) -> Result<Self> {
        if degree < 2 {
            return Err(Error::AlphabetMismatch(format!(
                "alphabet size must be at least 2, got {degree}"
            )));
        }
        let m = names.len();
        if perms.len() != m || restrictions.len() != m {
            return Err(Error::Syntax {
                line: 0,
                message: "generator data length mismatch".into(),
            });
        }
        for (i, name) in names.iter().enumerate() {
            if !is_identifier(name) {
                return Err(Error::Syntax {
                    line: 0,
                    message: format!("invalid generator name `{name}`"),
                });
            }
            if names[..i].contains(name) {
                return Err(Error::Syntax {
                    line: 0,
                    message: format!("generator `{name}` declared twice"),
                });
            }
        }
        for (g, p) in perms.iter().enumerate() {
            if p.degree() != degree {
                return Err(Error::InvalidPermutation(format!(
                    "permutation of `{}` has degree {} but alphabet is {degree}",
                    names[g],
                    p.degree()
                )));
            }
            if restrictions[g].len() != degree {
                return Err(Error::Syntax {
                    line: 0,
                    message: format!("generator `{}` needs {degree} restrictions", names[g]),
                });
            }
            for w in &restrictions[g] {
                if let Some(s) = w.iter().find(|s| s.generator() >= m) {
                    return Err(Error::UndeclaredGenerator {
                        line: 0,
                        name: format!("#{}", s.generator()),
                    });
                }
            }
        }
        let restrictions: Vec<Vec<Vec<Sym>>> = restrictions
            .into_iter()
            .map(|rs| rs.into_iter().map(|w| free_reduce(&w)).collect())
            .collect();

        let mut sym_perm = Vec::with_capacity(2 * m);
        let mut sym_restr = Vec::with_capacity(2 * m);
        for g in 0..m {
            sym_perm.push(perms[g].images().to_vec());
            sym_restr.push(restrictions[g].clone());
            // (g^-1)|x = (g|(x^{g^-1}))^-1
            let inv = perms[g].inverse();
            sym_perm.push(inv.images().to_vec());
            sym_restr.push(
                (0..degree)
                    .map(|x| invert_word(&restrictions[g][inv.apply(x)]))
                    .collect(),
            );
        }
        Ok(Presentation {
            degree,
            names,
            perms,
            restrictions,
            sym_perm,
            sym_restr,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn num_generators(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn perm(&self, g: usize) -> &Permutation {
        &self.perms[g]
    }

    pub fn restriction(&self, g: usize, x: Letter) -> &[Sym] {
        &self.restrictions[g][x]
    }

    /// Image of letter `x` under one symbol.
    #[inline]
    pub fn sym_apply(&self, s: Sym, x: Letter) -> Letter {
        self.sym_perm[s.code()][x]
    }

    /// Restriction of one symbol at letter `x`.
    #[inline]
    pub fn sym_restriction(&self, s: Sym, x: Letter) -> &[Sym] {
        &self.sym_restr[s.code()][x]
    }

    /// `(x^w, w|x)` for a word `w`, threading the letter through its factors.
    pub fn act_letter(&self, word: &[Sym], x: Letter) -> (Letter, Vec<Sym>) {
        let mut letter = x;
        let mut restriction = Vec::with_capacity(word.len());
        for &s in word {
            for &r in self.sym_restriction(s, letter) {
                push_reduced(&mut restriction, r);
            }
            letter = self.sym_apply(s, letter);
        }
        (letter, restriction)
    }

    /// Only the image letter, without building the restriction.
    #[inline]
    pub fn image_letter(&self, word: &[Sym], x: Letter) -> Letter {
        word.iter().fold(x, |letter, &s| self.sym_apply(s, letter))
    }

    /// Image of the tree vertex `v` under `w`.
    pub fn act_word(&self, word: &[Sym], v: &[Letter]) -> Vec<Letter> {
        let mut state = word.to_vec();
        let mut out = Vec::with_capacity(v.len());
        for &x in v {
            let (y, next) = self.act_letter(&state, x);
            out.push(y);
            state = next;
        }
        out
    }

    /// `w|v`, freely reduced.
    pub fn restrict(&self, word: &[Sym], v: &[Letter]) -> Vec<Sym> {
        let mut state = free_reduce(word);
        for &x in v {
            state = self.act_letter(&state, x).1;
        }
        state
    }

    /// Parses a word such as `a b^-1 c^2 1`. Exponents may be any nonzero
    /// integer; `1` is the identity.
    pub fn parse_element(&self, text: &str) -> Result<Vec<Sym>> {
        parse_group_word(text, &self.names, 0)
    }

    pub fn format_element(&self, word: &[Sym]) -> String {
        format_group_word(word, &self.names)
    }

    /// Parses the presentation file format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut degree: Option<(usize, usize)> = None;
        let mut names: Option<(usize, Vec<String>)> = None;
        let mut defs: Vec<(usize, String, String)> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |message: String| Error::Syntax {
                line: line_no,
                message,
            };
            if let Some((key, value)) = line.split_once('=').filter(|(k, _)| {
                let k = k.trim();
                k == "alphabet" || k == "gens"
            }) {
                match key.trim() {
                    "alphabet" => {
                        if degree.is_some() {
                            return Err(syntax("alphabet declared twice".into()));
                        }
                        let d: usize = value
                            .trim()
                            .parse()
                            .map_err(|_| syntax(format!("bad alphabet size `{}`", value.trim())))?;
                        if d < 2 {
                            return Err(syntax(format!("alphabet size must be >= 2, got {d}")));
                        }
                        degree = Some((line_no, d));
                    }
                    _ => {
                        if names.is_some() {
                            return Err(syntax("gens declared twice".into()));
                        }
                        let list: Vec<String> =
                            value.split_whitespace().map(str::to_string).collect();
                        if list.is_empty() {
                            return Err(syntax("empty generator list".into()));
                        }
                        for (i, n) in list.iter().enumerate() {
                            if !is_identifier(n) {
                                return Err(syntax(format!("invalid generator name `{n}`")));
                            }
                            if list[..i].contains(n) {
                                return Err(syntax(format!("generator `{n}` declared twice")));
                            }
                        }
                        names = Some((line_no, list));
                    }
                }
                continue;
            }
            let (name, body) = line
                .split_once(':')
                .ok_or_else(|| syntax(format!("expected `name : perm = ...`, got `{line}`")))?;
            defs.push((line_no, name.trim().to_string(), body.trim().to_string()));
        }

        let (_, d) = degree.ok_or(Error::Syntax {
            line: 0,
            message: "missing `alphabet = d` line".into(),
        })?;
        let (gens_line, names) = names.ok_or(Error::Syntax {
            line: 0,
            message: "missing `gens = ...` line".into(),
        })?;
        let m = names.len();
        let index: HashMap<&str, usize> =
            names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();

        let mut perms: Vec<Option<Permutation>> = vec![None; m];
        let mut restrictions: Vec<Vec<Option<Vec<Sym>>>> = vec![vec![None; d]; m];
        for (line_no, name, body) in &defs {
            let line_no = *line_no;
            let syntax = |message: String| Error::Syntax {
                line: line_no,
                message,
            };
            let g = *index.get(name.as_str()).ok_or_else(|| Error::UndeclaredGenerator {
                line: line_no,
                name: name.clone(),
            })?;
            if perms[g].is_some() {
                return Err(syntax(format!("generator `{name}` defined twice")));
            }
            let mut parts = body.split(';');
            let perm_part = parts.next().unwrap_or("").trim();
            let perm_text = perm_part
                .strip_prefix("perm")
                .map(str::trim_start)
                .and_then(|s| s.strip_prefix('='))
                .ok_or_else(|| syntax(format!("expected `perm = (...)`, got `{perm_part}`")))?;
            let perm = Permutation::parse_cycles(perm_text, d).map_err(|e| match e {
                Error::LetterOutOfRange { letter, size } => syntax(format!(
                    "letter {letter} out of range for alphabet of size {size}"
                )),
                other => syntax(other.to_string()),
            })?;
            perms[g] = Some(perm);
            for part in parts {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                let (letter, word) = part
                    .split_once("->")
                    .ok_or_else(|| syntax(format!("expected `x -> word`, got `{part}`")))?;
                let x: usize = letter
                    .trim()
                    .parse()
                    .map_err(|_| syntax(format!("bad letter `{}`", letter.trim())))?;
                if x >= d {
                    return Err(syntax(format!(
                        "letter {x} out of range for alphabet of size {d}"
                    )));
                }
                if restrictions[g][x].is_some() {
                    return Err(syntax(format!("restriction of `{name}` at {x} given twice")));
                }
                restrictions[g][x] = Some(parse_group_word(word, &names, line_no)?);
            }
        }

        let mut final_perms = Vec::with_capacity(m);
        let mut final_restr = Vec::with_capacity(m);
        for g in 0..m {
            let perm = perms[g].take().ok_or_else(|| Error::Syntax {
                line: gens_line,
                message: format!("generator `{}` has no definition", names[g]),
            })?;
            let rs = restrictions[g]
                .iter_mut()
                .enumerate()
                .map(|(x, r)| {
                    r.take().ok_or_else(|| Error::Syntax {
                        line: gens_line,
                        message: format!("generator `{}` has no restriction at letter {x}", names[g]),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            final_perms.push(perm);
            final_restr.push(rs);
        }
        Presentation::new(d, names, final_perms, final_restr)
    }

    /// Conjugates the action by the letter relabeling `pi`:
    /// the new action is `v ↦ pi((pi⁻¹ v)^g)` letterwise.
    pub fn relabel(&self, pi: &Permutation) -> Result<Self> {
        if pi.degree() != self.degree {
            return Err(Error::AlphabetMismatch("relabeling degree differs".into()));
        }
        let inv = pi.inverse();
        let perms = self
            .perms
            .iter()
            .map(|p| {
                Permutation::from_images(
                    (0..self.degree)
                        .map(|x| pi.apply(p.apply(inv.apply(x))))
                        .collect(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let restrictions = self
            .restrictions
            .iter()
            .map(|rs| (0..self.degree).map(|x| rs[inv.apply(x)].clone()).collect())
            .collect();
        Presentation::new(self.degree, self.names.clone(), perms, restrictions)
    }

    /// Same recursion with generators renamed.
    pub fn with_names(&self, names: Vec<String>) -> Result<Self> {
        Presentation::new(
            self.degree,
            names,
            self.perms.clone(),
            self.restrictions.clone(),
        )
    }
}

impl fmt::Display for Presentation {
    /// Serializes in the file format accepted by [`Presentation::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alphabet = {}", self.degree)?;
        writeln!(f, "gens = {}", self.names.join(" "))?;
        for (g, name) in self.names.iter().enumerate() {
            write!(f, "{name} : perm = {}", self.perms[g])?;
            for x in 0..self.degree {
                write!(
                    f,
                    " ; {x} -> {}",
                    format_group_word(&self.restrictions[g][x], &self.names)
                )?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

pub(crate) fn parse_group_word(text: &str, names: &[String], line: usize) -> Result<Vec<Sym>> {
    let mut out = Vec::new();
    for token in text.split_whitespace() {
        if token == "1" {
            continue;
        }
        let (name, exponent) = match token.split_once('^') {
            Some((n, e)) => {
                let e: i64 = e.parse().map_err(|_| Error::Syntax {
                    line,
                    message: format!("bad exponent in `{token}`"),
                })?;
                (n, e)
            }
            None => (token, 1),
        };
        let g = names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UndeclaredGenerator {
                line,
                name: name.to_string(),
            })?;
        if exponent == 0 {
            continue;
        }
        let s = Sym::new(g, exponent < 0);
        for _ in 0..exponent.unsigned_abs() {
            push_reduced(&mut out, s);
        }
    }
    Ok(out)
}

pub(crate) fn format_group_word(word: &[Sym], names: &[String]) -> String {
    if word.is_empty() {
        return "1".to_string();
    }
    word.iter()
        .map(|s| {
            if s.is_inverse() {
                format!("{}^-1", names[s.generator()])
            } else {
                names[s.generator()].clone()
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}
