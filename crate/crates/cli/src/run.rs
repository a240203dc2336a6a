use std::fmt::Write as _;
use std::fs;
use std::sync::Arc;

use num_complex::Complex64;
use selfsim::group::{format_word, parse_word, DEFAULT_LEVEL_BUDGET};
use selfsim::limitspace::{asymptotic_equivalent, schreier_graph, tile_cloud, tile_ifs_check, SequenceSpec};
use selfsim::monodromy::{
    build_lambda, cloud_csv, default_geometry, infer_recursion, julia_cloud, monodromy_permutations, verify_recursion,
    DetourSide, Geometry, GeometryOptions, LiftOptions, PolynomialMap, PreimageTree, VerifyReport,
};
use selfsim::nucleus::estimate_contraction_coefficient;
use selfsim::virtual_endo::{
    self, closure_presentation, kernel_intersection_depth, parse_complex, parse_digits, ConcreteGroup, Faithfulness,
    Heisenberg, IntMatrix, KernelDepth, Lattes, Lattice,
};
use selfsim::{compute_nucleus, presets, ContractionStatus, GroupWord, NucleusBudgets, Presentation};
use thiserror::Error;

use crate::args::{Cli, Command, Global, GraphFormat, GroupSource, MapSource, PresetAction, Side, VendPreset, VendSource};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] selfsim::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
    /// A check ran to completion and its answer was negative.
    #[error("{0}")]
    Negative(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_budget() => 2,
            CliError::Usage(_) => crate::EXIT_USAGE,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

const FORMATS: &str = "\
presentation  alphabet = <d> / gens = <names> / <gen> : perm = <cycles> ; <x> -> <word> ; …   (# comments)
group word    generator names separated by spaces, inverses as a^-1, powers as a^3, identity 1
letters       digits \"0110\" or separated \"0 1 1 0\"; the leftmost letter is on level 1
sequence      <preperiod>:<period>, rightmost preperiod letter is x1 (10:1 is …11110)
complex       re,im
matrix        rows separated by ';', entries by ',' (\"-1,1;-1,-1\")
digits        (x,y);(x,y);…
level-perm    images of words of the level in lexicographic order, space separated
julia cloud   CSV re,im in lexicographic order of words
tile cloud    CSV x1,…,xn,word in lexicographic order of words
schreier      CSV src,dst,gen (lexicographic word indices), or DOT with merged edges
moore         DOT, edges labelled input|output
geometry      JSON with basepoint, postcritical, radius, loops, connecting paths
";

fn emit(global: &Global, text: &str) -> Result<()> {
    match &global.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn line(text: impl std::fmt::Display) -> String {
    format!("{text}\n")
}

fn presentation(src: &GroupSource) -> Result<Arc<Presentation>> {
    let pres = match (&src.preset, &src.file) {
        (Some(name), None) => presets::presentation(name)?,
        (None, Some(path)) => Presentation::parse(&fs::read_to_string(path)?)?,
        _ => return Err(CliError::Usage("give exactly one of --preset or --file".into())),
    };
    Ok(Arc::new(pres))
}

fn budgets(global: &Global) -> NucleusBudgets {
    NucleusBudgets {
        word_problem_states: global.budget_states,
        ..NucleusBudgets::default()
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let global = cli.global;
    if cli.formats {
        return emit(&global, FORMATS);
    }
    let Some(command) = cli.command else {
        return Err(CliError::Usage("no command given; see --help".into()));
    };
    match command {
        Command::Act { group, word, letters } => {
            let p = presentation(&group)?;
            let g = GroupWord::parse(p.clone(), &word)?;
            let v = parse_word(&letters, p.degree())?;
            emit(&global, &line(format_word(&g.act_word(&v)?)))
        }
        Command::Restrict { group, word, letters } => {
            let p = presentation(&group)?;
            let g = GroupWord::parse(p.clone(), &word)?;
            let v = parse_word(&letters, p.degree())?;
            emit(&global, &line(g.restrict(&v)?))
        }
        Command::Eq { group, word, other } => {
            let p = presentation(&group)?;
            let g = GroupWord::parse(p.clone(), &word)?;
            let text = match other {
                None if g.is_identity(global.budget_states)? => "identity",
                None => "not identity",
                Some(h) if g.equal(&GroupWord::parse(p, &h)?, global.budget_states)? => "equal",
                Some(_) => "not equal",
            };
            emit(&global, &line(text))
        }
        Command::LevelPerm { group, word } => {
            let p = presentation(&group)?;
            let g = GroupWord::parse(p, &word)?;
            let perm = g.permutation_on_level(global.depth.unwrap_or(1))?;
            emit(&global, &line(join(&perm)))
        }
        Command::Nucleus {
            group,
            max_set_size,
            max_rounds,
        } => {
            let b = NucleusBudgets {
                max_set_size,
                max_rounds,
                ..budgets(&global)
            };
            let report = compute_nucleus(presentation(&group)?, b)?;
            let mut out = String::new();
            match &report.status {
                ContractionStatus::Contracting(n) => {
                    writeln!(out, "# contracting: {} elements after {} rounds", n.len(), report.rounds).ok();
                    if let Some(d) = report.stabilization_depth {
                        writeln!(out, "# stabilization depth {d}").ok();
                    }
                    if let Some(rho) = report.rho_estimate {
                        writeln!(out, "# rho estimate {rho:.4}").ok();
                    }
                    for g in n.elements() {
                        writeln!(out, "{g}").ok();
                    }
                    emit(&global, &out)
                }
                ContractionStatus::BudgetExceeded { partial, reason } => {
                    eprintln!("# stopped with {} elements: {reason}", partial.len());
                    Err(selfsim::Error::Budget {
                        what: "nucleus",
                        limit: max_set_size,
                    }
                    .into())
                }
            }
        }
        Command::Rho { group, samples } => {
            let p = presentation(&group)?;
            let rho = estimate_contraction_coefficient(&p, samples, global.depth.unwrap_or(4), global.seed);
            emit(&global, &line(format!("{rho:.6}")))
        }
        Command::Moore { group } => {
            let report = compute_nucleus(presentation(&group)?, budgets(&global))?;
            let n = report.nucleus().ok_or(selfsim::Error::Budget {
                what: "nucleus",
                limit: NucleusBudgets::default().max_set_size,
            })?;
            emit(&global, &n.moore_diagram().to_dot("nucleus"))
        }
        Command::VendAct { source, elem, letters } => {
            let out = with_vend(&source, VendOp::Act { elem, letters })?;
            emit(&global, &out)
        }
        Command::VendClosure { source } => {
            let out = with_vend(&source, VendOp::Closure { budget: global.budget_states })?;
            emit(&global, &out)
        }
        Command::VendFaithful { source } => {
            if source.preset != VendPreset::Lattice {
                return Err(CliError::Usage("faithfulness is decided for lattice presets only".into()));
            }
            let text = match lattice(&source)?.faithfulness() {
                Faithfulness::Faithful => "faithful".to_string(),
                Faithfulness::Unfaithful { witness } => format!("unfaithful (witness {})", join(&witness)),
                Faithfulness::Unknown => "unknown".to_string(),
            };
            emit(&global, &line(text))
        }
        Command::VendKernel { source, elem } => {
            let n_max = global.depth.unwrap_or(32);
            let out = with_vend(&source, VendOp::Kernel { elem, n_max })?;
            emit(&global, &out)
        }
        Command::ImgLambda { map } => {
            let (_, geometry, tree) = build(&map, &global, 8)?;
            eprintln!("# {} levels, {} nodes on the last", tree.depth(), tree.level(tree.depth()).len());
            emit(&global, &line(geometry.to_json()))
        }
        Command::ImgPerms { map } => {
            let (f, geometry, tree) = build(&map, &global, 4)?;
            let action = monodromy_permutations(&f, &geometry, &tree, tree.depth(), &lift(&global))?;
            let mut out = String::new();
            for (g, name) in action.names().iter().enumerate() {
                for n in 1..=action.depth() {
                    writeln!(out, "{name} {n}: {}", join(action.permutation(g, n))).ok();
                }
            }
            emit(&global, &out)
        }
        Command::ImgVerify { map, recursion } => {
            let p = match presets::presentation(&recursion) {
                Ok(p) => p,
                Err(_) => Presentation::parse(&fs::read_to_string(&recursion)?)?,
            };
            let (f, geometry, tree) = build(&map, &global, 8)?;
            let action = monodromy_permutations(&f, &geometry, &tree, tree.depth(), &lift(&global))?;
            let report = verify_recursion(&p, &action, tree.depth())?;
            emit(&global, &line(&report))?;
            match report {
                VerifyReport::Match { .. } => Ok(()),
                VerifyReport::Mismatch { .. } => Err(CliError::Negative("recursion does not match".into())),
            }
        }
        Command::ImgInfer { map, max_len } => {
            let (f, geometry, tree) = build(&map, &global, 8)?;
            let p = infer_recursion(&f, &geometry, &tree, max_len, tree.depth(), &lift(&global))?;
            emit(&global, &p.to_string())
        }
        Command::ImgJulia { map } => {
            let (_, _, tree) = build(&map, &global, 10)?;
            emit(&global, &cloud_csv(&julia_cloud(&tree, tree.depth())?))
        }
        Command::Schreier { group, format } => {
            let p = presentation(&group)?;
            let g = schreier_graph(&p, global.depth.unwrap_or(4), DEFAULT_LEVEL_BUDGET)?;
            emit(
                &global,
                &match format {
                    GraphFormat::Csv => g.to_csv(),
                    GraphFormat::Dot => g.to_dot(),
                },
            )
        }
        Command::Equiv { group, seqs } => {
            let [s1, s2] = seqs.as_slice() else {
                return Err(CliError::Usage("give --seq exactly twice".into()));
            };
            let report = compute_nucleus(presentation(&group)?, budgets(&global))?;
            let n = report.nucleus().ok_or(selfsim::Error::Budget {
                what: "nucleus",
                limit: NucleusBudgets::default().max_set_size,
            })?;
            let d = n.presentation().degree();
            let same = asymptotic_equivalent(n, &SequenceSpec::parse(s1, d)?, &SequenceSpec::parse(s2, d)?)?;
            emit(&global, &line(if same { "equivalent" } else { "not equivalent" }))
        }
        Command::Tile { matrix, digits } => {
            let l = Lattice::new(IntMatrix::parse(&matrix)?, parse_digits(&digits)?)?;
            emit(&global, &tile_cloud(&l, global.depth.unwrap_or(10))?.to_csv())
        }
        Command::TileCheck { matrix, digits } => {
            let l = Lattice::new(IntMatrix::parse(&matrix)?, parse_digits(&digits)?)?;
            let cloud = tile_cloud(&l, global.depth.unwrap_or(10).max(1))?;
            let check = tile_ifs_check(&cloud, &l)?;
            emit(
                &global,
                &format!("ifs_error {:e}\nincrement {:e}\n", check.ifs_error, check.increment),
            )
        }
        Command::Presets { action } => match action {
            PresetAction::List => {
                let mut out = String::new();
                for (name, description) in presets::list() {
                    writeln!(out, "{name:<16}{description}").ok();
                }
                emit(&global, &out)
            }
            PresetAction::Show { name } => emit(&global, presets::source(&name)?),
        },
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn lift(global: &Global) -> LiftOptions {
    LiftOptions {
        step: global.step,
        ..LiftOptions::default()
    }
}

fn complex_list(text: &str) -> Result<Vec<Complex64>> {
    Ok(text.split(';').map(parse_complex).collect::<selfsim::Result<_>>()?)
}

fn build(map: &MapSource, global: &Global, default_depth: usize) -> Result<(PolynomialMap, Geometry, PreimageTree)> {
    let f = match (&map.c, &map.coeffs) {
        (Some(c), None) => PolynomialMap::quadratic(parse_complex(c)?),
        (None, Some(coeffs)) => PolynomialMap::new(complex_list(coeffs)?)?,
        _ => return Err(CliError::Usage("give exactly one of --c or --coeffs".into())),
    };
    let opts = GeometryOptions {
        basepoint: map.basepoint.as_deref().map(parse_complex).transpose()?,
        detour: Some(match map.detour {
            Side::Above => DetourSide::Above,
            Side::Below => DetourSide::Below,
        }),
        loop_radius: map.loop_radius,
        postcritical: map.postcritical.as_deref().map(complex_list).transpose()?,
    };
    let geometry = default_geometry(&f, &opts)?;
    let tree = build_lambda(&f, &geometry, global.depth.unwrap_or(default_depth), &lift(global))?;
    Ok((f, geometry, tree))
}

fn lattice(source: &VendSource) -> Result<Lattice> {
    Ok(Lattice::new(IntMatrix::parse(&source.matrix)?, parse_digits(&source.digits)?)?)
}

fn numbers(text: &str) -> Result<Vec<i64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad integer `{}`", t.trim())))
        })
        .collect()
}

/// CLI access to a virtual-endomorphism preset.
trait VendCli: ConcreteGroup {
    fn parse_elem(&self, text: &str) -> Result<Self::Elem>;
    fn generators(&self) -> Vec<Self::Elem>;
}

impl VendCli for Lattice {
    fn parse_elem(&self, text: &str) -> Result<Vec<i64>> {
        let v = numbers(text)?;
        if v.len() != self.dim() {
            return Err(CliError::Usage(format!("expected {} coordinates", self.dim())));
        }
        Ok(v)
    }

    fn generators(&self) -> Vec<Vec<i64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| i64::from(i == j)).collect())
            .collect()
    }
}

impl VendCli for Heisenberg {
    fn parse_elem(&self, text: &str) -> Result<[i64; 3]> {
        numbers(text)?
            .try_into()
            .map_err(|_| CliError::Usage("expected a,b,c".into()))
    }

    fn generators(&self) -> Vec<[i64; 3]> {
        self.default_generators()
    }
}

impl VendCli for Lattes {
    fn parse_elem(&self, text: &str) -> Result<(u8, [i64; 2])> {
        let (k, w) = text
            .split_once(':')
            .ok_or_else(|| CliError::Usage("expected k:x,y".into()))?;
        let k: u8 = k.trim().parse().ok().filter(|&k| k < 2).ok_or_else(|| CliError::Usage("k must be 0 or 1".into()))?;
        let w: [i64; 2] = numbers(w)?
            .try_into()
            .map_err(|_| CliError::Usage("expected k:x,y".into()))?;
        Ok((k, w))
    }

    fn generators(&self) -> Vec<(u8, [i64; 2])> {
        self.default_generators()
    }
}

/// Runs `op` on the group selected by `source`.
fn with_vend(source: &VendSource, op: VendOp) -> Result<String> {
    match source.preset {
        VendPreset::Lattice => op.call(&lattice(source)?),
        VendPreset::Heisenberg => op.call(&Heisenberg::new(source.p, source.q)?),
        VendPreset::Lattes => {
            let basis: [Complex64; 2] = complex_list(&source.basis)?
                .try_into()
                .map_err(|_| CliError::Usage("--basis needs two complex numbers".into()))?;
            op.call(&Lattes::new(basis, parse_complex(&source.alpha)?)?)
        }
    }
}

enum VendOp {
    Act { elem: String, letters: String },
    Closure { budget: usize },
    Kernel { elem: String, n_max: usize },
}

impl VendOp {
    fn call<G: VendCli>(self, g: &G) -> Result<String> {
        match self {
            VendOp::Act { elem, letters } => {
                let e = g.parse_elem(&elem)?;
                let v = parse_word(&letters, g.degree())?;
                Ok(line(format_word(&virtual_endo::act_word(g, &e, &v)?)))
            }
            VendOp::Closure { budget } => {
                let (pres, elems) = closure_presentation(g, &g.generators(), budget)?;
                let mut out = String::new();
                for (k, e) in elems.iter().enumerate() {
                    writeln!(out, "# s{k} = {}", g.format_elem(e)).ok();
                }
                write!(out, "{pres}").ok();
                Ok(out)
            }
            VendOp::Kernel { elem, n_max } => {
                let e = g.parse_elem(&elem)?;
                Ok(line(match kernel_intersection_depth(g, &e, n_max) {
                    KernelDepth::Leaves(n) => format!("leaves the domain at n = {n}: not in the kernel"),
                    KernelDepth::Survives => {
                        format!("in the domain of phi^{n_max}; conjugates not examined, kernel membership undecided")
                    }
                }))
            }
        }
    }
}
