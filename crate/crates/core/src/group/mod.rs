//! Exact self-similar group arithmetic on the rooted tree `X*`.

pub mod automaton;
pub mod element;
pub mod perm;
pub mod presentation;
pub mod word;

pub use automaton::MooreAutomaton;
pub use element::{
    is_identity, level_permutation, GroupWord, DEFAULT_LEVEL_BUDGET, DEFAULT_STATE_BUDGET,
};
pub use perm::Permutation;
pub use presentation::{free_reduce, invert_word, Presentation, Sym};
pub use word::{all_words, format_word, from_lex_index, lex_index, parse_word, Letter};
