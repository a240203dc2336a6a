use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "selfsim", version, about = "Self-similar groups, nuclei, iterated monodromy groups and limit spaces")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,

    /// Print the input and output file formats and exit.
    #[arg(long)]
    pub formats: bool,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Args)]
pub struct Global {
    /// State budget for each equality test (bisimulation pairs).
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub budget_states: usize,

    /// Tree depth or level, where the command takes one.
    #[arg(long, global = true)]
    pub depth: Option<usize>,

    /// Largest step along a base path when lifting.
    #[arg(long, global = true, default_value_t = 0.02)]
    pub step: f64,

    /// Seed for randomized estimates.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

/// A presentation: a shipped preset or a presentation file.
#[derive(Debug, Args)]
pub struct GroupSource {
    /// Shipped preset (see `presets list`).
    #[arg(long, conflicts_with = "file")]
    pub preset: Option<String>,

    /// Presentation file.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Csv,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Above,
    Below,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VendPreset {
    Lattice,
    Heisenberg,
    Lattes,
}

/// A virtual-endomorphism preset and its parameters.
#[derive(Debug, Args)]
pub struct VendSource {
    #[arg(long, value_enum, default_value_t = VendPreset::Lattice)]
    pub preset: VendPreset,

    /// Integer matrix `A` as rows, e.g. "-1,1;-1,-1" (lattice).
    #[arg(long, default_value = "-1,1;-1,-1")]
    pub matrix: String,

    /// Coset representatives, e.g. "(0,0);(1,0)" (lattice).
    #[arg(long, default_value = "(0,0);(1,0)")]
    pub digits: String,

    /// Heisenberg parameter p.
    #[arg(long, default_value_t = 2)]
    pub p: i64,

    /// Heisenberg parameter q.
    #[arg(long, default_value_t = 2)]
    pub q: i64,

    /// Lattès lattice basis as two complex numbers "re,im;re,im".
    #[arg(long, default_value = "1,0;0,1")]
    pub basis: String,

    /// Lattès multiplier as "re,im".
    #[arg(long, default_value = "1,1", allow_hyphen_values = true)]
    pub alpha: String,
}

/// The polynomial and the geometry of its loops and connecting paths.
#[derive(Debug, Args)]
pub struct MapSource {
    /// Parameter of z² + c as "re,im".
    #[arg(long, allow_hyphen_values = true, conflicts_with = "coeffs")]
    pub c: Option<String>,

    /// Coefficients in ascending degree, "re,im;re,im;…".
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: Option<String>,

    /// Basepoint as "re,im" [default: derived from the postcritical set].
    #[arg(long, allow_hyphen_values = true)]
    pub basepoint: Option<String>,

    /// Side on which straight paths pass postcritical points.
    #[arg(long, value_enum, default_value_t = Side::Above)]
    pub detour: Side,

    /// Loop radius [default: 0.1 · smallest gap between marked points].
    #[arg(long)]
    pub loop_radius: Option<f64>,

    /// Postcritical set "re,im;re,im;…" when the orbits are not found numerically.
    #[arg(long, allow_hyphen_values = true)]
    pub postcritical: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Image of a word of letters under a group element.
    Act {
        #[command(flatten)]
        group: GroupSource,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Letters, e.g. "0110" or "0 1 1 0".
        #[arg(long, default_value = "")]
        letters: String,
    },
    /// Restriction of a group element at a word of letters.
    Restrict {
        #[command(flatten)]
        group: GroupSource,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, default_value = "")]
        letters: String,
    },
    /// Decides whether an element is the identity, or equals another.
    Eq {
        #[command(flatten)]
        group: GroupSource,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, allow_hyphen_values = true)]
        other: Option<String>,
    },
    /// Permutation of level `--depth` (default 1), as lexicographic indices.
    LevelPerm {
        #[command(flatten)]
        group: GroupSource,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Computes the nucleus, if the action is contracting within budgets.
    Nucleus {
        #[command(flatten)]
        group: GroupSource,
        #[arg(long, default_value_t = 5000)]
        max_set_size: usize,
        #[arg(long, default_value_t = 50)]
        max_rounds: usize,
    },
    /// Estimates the contraction coefficient from random words.
    Rho {
        #[command(flatten)]
        group: GroupSource,
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
    /// Moore diagram of the nucleus in DOT.
    Moore {
        #[command(flatten)]
        group: GroupSource,
    },
    /// Image of letters under an element of a virtual-endomorphism preset.
    VendAct {
        #[command(flatten)]
        source: VendSource,
        /// Element: "x,y" (lattice), "a,b,c" (heisenberg), "k:x,y" (lattes).
        #[arg(long, allow_hyphen_values = true)]
        elem: String,
        #[arg(long, default_value = "")]
        letters: String,
    },
    /// Presentation generated by the preset's default generators.
    VendClosure {
        #[command(flatten)]
        source: VendSource,
    },
    /// Faithfulness of a lattice action.
    VendFaithful {
        #[command(flatten)]
        source: VendSource,
    },
    /// How long an element stays in the iterated domain of the virtual
    /// endomorphism. Leaving it shows the element is not in the kernel of the
    /// action; staying is only a necessary condition, as conjugates are not
    /// examined.
    VendKernel {
        #[command(flatten)]
        source: VendSource,
        #[arg(long, allow_hyphen_values = true)]
        elem: String,
    },
    /// Builds the preimage tree and prints the geometry as JSON.
    ImgLambda {
        #[command(flatten)]
        map: MapSource,
    },
    /// Numeric level permutations of the generator loops.
    ImgPerms {
        #[command(flatten)]
        map: MapSource,
    },
    /// Compares a wreath recursion with the numeric action.
    ImgVerify {
        #[command(flatten)]
        map: MapSource,
        /// Presentation file or preset name.
        #[arg(long)]
        recursion: String,
    },
    /// Infers a wreath recursion from the numeric action.
    ImgInfer {
        #[command(flatten)]
        map: MapSource,
        /// Longest generator word tried for a restriction.
        #[arg(long, default_value_t = 3)]
        max_len: usize,
    },
    /// Level-`--depth` preimage cloud approximating the Julia set, as CSV.
    ImgJulia {
        #[command(flatten)]
        map: MapSource,
    },
    /// Schreier graph of level `--depth`.
    Schreier {
        #[command(flatten)]
        group: GroupSource,
        #[arg(long, value_enum, default_value_t = GraphFormat::Csv)]
        format: GraphFormat,
    },
    /// Asymptotic equivalence of two eventually periodic sequences.
    Equiv {
        #[command(flatten)]
        group: GroupSource,
        /// "<preperiod>:<period>", rightmost preperiod letter first; give twice.
        #[arg(long = "seq", num_args = 1, required = true)]
        seqs: Vec<String>,
    },
    /// Digit-tile point cloud of depth `--depth` as CSV.
    Tile {
        #[arg(long, default_value = "-1,1;-1,-1", allow_hyphen_values = true)]
        matrix: String,
        #[arg(long, default_value = "(0,0);(1,0)")]
        digits: String,
    },
    /// Self-affinity check of the depth-`--depth` tile cloud.
    TileCheck {
        #[arg(long, default_value = "-1,1;-1,-1", allow_hyphen_values = true)]
        matrix: String,
        #[arg(long, default_value = "(0,0);(1,0)")]
        digits: String,
    },
    /// Shipped presentations.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum PresetAction {
    /// Names and descriptions.
    List,
    /// Source text of one preset.
    Show { name: String },
}
