//! Words over the alphabet `0..d`, i.e. vertices of the tree `X*`.
//!
//! The leftmost letter is the level-1 letter: the parent of a word is
//! obtained by dropping its last letter. Level arrays are indexed by the
//! lexicographic index with the leftmost letter most significant.

use crate::error::{Error, Result};

pub type Letter = usize;

/// Lexicographic index of `word` in `X^|word|`.
pub fn lex_index(word: &[Letter], d: usize) -> usize {
    word.iter().fold(0, |acc, &x| acc * d + x)
}

/// Inverse of [`lex_index`] for words of length `len`.
pub fn from_lex_index(mut index: usize, d: usize, len: usize) -> Vec<Letter> {
    let mut word = vec![0; len];
    for slot in word.iter_mut().rev() {
        *slot = index % d;
        index /= d;
    }
    word
}

/// `d^n`, or a budget error when it would exceed `limit`.
pub fn level_size(d: usize, n: usize, limit: usize) -> Result<usize> {
    let mut size: usize = 1;
    for _ in 0..n {
        size = size
            .checked_mul(d)
            .filter(|&s| s <= limit)
            .ok_or(Error::Budget {
                what: "level size",
                limit,
            })?;
    }
    Ok(size)
}

pub fn check_letters(word: &[Letter], d: usize) -> Result<()> {
    match word.iter().find(|&&x| x >= d) {
        Some(&letter) => Err(Error::LetterOutOfRange { letter, size: d }),
        None => Ok(()),
    }
}

/// Parses a word: letters separated by whitespace or commas, or a compact
/// digit string such as `0110`. The empty string is the empty word.
pub fn parse_word(text: &str, d: usize) -> Result<Vec<Letter>> {
    let text = text.trim();
    let letters: Vec<Letter> = if text.contains(|c: char| c.is_whitespace() || c == ',') {
        text.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<usize>().map_err(|_| Error::Syntax {
                    line: 0,
                    message: format!("bad letter `{s}`"),
                })
            })
            .collect::<Result<_>>()?
    } else {
        text.chars()
            .map(|c| {
                c.to_digit(10).map(|v| v as usize).ok_or_else(|| Error::Syntax {
                    line: 0,
                    message: format!("bad letter `{c}`"),
                })
            })
            .collect::<Result<_>>()?
    };
    check_letters(&letters, d)?;
    Ok(letters)
}

/// Formats a word compactly when every letter is a single digit, otherwise
/// space-separated.
pub fn format_word(word: &[Letter]) -> String {
    if word.iter().all(|&x| x < 10) {
        word.iter().map(|x| x.to_string()).collect()
    } else {
        word.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// All words of length `n` in lexicographic order.
pub fn all_words(d: usize, n: usize) -> Vec<Vec<Letter>> {
    let count = d.pow(n as u32);
    (0..count).map(|i| from_lex_index(i, d, n)).collect()
}
