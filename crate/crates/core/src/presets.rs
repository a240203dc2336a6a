//! Built-in presentations, shipped as embedded presentation files.

use crate::error::{Error, Result};
use crate::group::Presentation;

const FILES: &[(&str, &str, &str)] = &[
    (
        "adding-machine",
        "binary odometer tau = (1, tau)(0 1)",
        include_str!("../presets/adding-machine.grp"),
    ),
    ("z2", "monodromy of z^2", include_str!("../presets/z2.grp")),
    ("z2m1", "monodromy of z^2 - 1", include_str!("../presets/z2m1.grp")),
    ("z2m2", "monodromy of z^2 - 2", include_str!("../presets/z2m2.grp")),
    (
        "dragon",
        "lattice A = [[-1,1],[-1,-1]], digits (0,0),(1,0)",
        include_str!("../presets/dragon.grp"),
    ),
    (
        "heisenberg22",
        "Heisenberg group, p = q = 2 (16 letters)",
        include_str!("../presets/heisenberg22.grp"),
    ),
    (
        "lattes2",
        "affine maps of Z[i] with alpha = 1+i",
        include_str!("../presets/lattes2.grp"),
    ),
];

/// `(name, description)` of every preset.
pub fn list() -> Vec<(&'static str, &'static str)> {
    FILES.iter().map(|(n, d, _)| (*n, *d)).collect()
}

/// Source text of a preset presentation file.
pub fn source(name: &str) -> Result<&'static str> {
    FILES
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|(_, _, text)| *text)
        .ok_or_else(|| Error::InvalidPreset(format!("unknown preset `{name}`")))
}

pub fn presentation(name: &str) -> Result<Presentation> {
    Presentation::parse(source(name)?)
}
