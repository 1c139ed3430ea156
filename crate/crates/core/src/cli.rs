//! Command-line front end. Every command prints to stdout; analysis errors
//! print `{"error": kind, "message": ...}` to stderr with exit code 2.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::cocycles::{check_cocycle_conditions, check_equivariant_cocycle, cohomologous_search};
use crate::complexes::{
    build_tile_complex, conway_lagarias_abelianized, radius_complex, tile_cohomology, tile_homology, TileComplex,
};
use crate::defects::{d_pole_search, defect_report, persistence_experiment, tilt_estimate};
use crate::error::{Error, Result};
use crate::groups::{ext_group, FgAbelianGroup, GroupElement};
use crate::project::{fixture_names, resolve_fixture, ProjectFile};
use crate::symbolic::{defect_field, Constraint, SearchBudget};

#[derive(Parser, Debug)]
#[command(name = "defectlab", version, about = "Defects, cocycles and tile complexes of subshifts of finite type")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Where the shift and its data come from.
#[derive(Args, Debug, Clone)]
pub struct Source {
    /// Project file (JSON).
    pub project: Option<PathBuf>,
    /// Bundled project or configuration instead of a file.
    #[arg(long, conflicts_with = "project")]
    pub fixture: Option<String>,
    /// Configuration name within the project.
    #[arg(long)]
    pub config: Option<String>,
    /// Cocycle name within the project.
    #[arg(long)]
    pub cocycle: Option<String>,
    /// Range of the unflawed region (defaults to the project's analysis radius).
    #[arg(long)]
    pub radius: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List or emit bundled fixtures.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
    /// Defect field, classification, residues and tilt of one configuration.
    Analyze {
        #[command(flatten)]
        src: Source,
        /// Print the ASCII defect map after the JSON report.
        #[arg(long)]
        map: bool,
    },
    /// Residue around each hole of the unflawed region.
    Residue {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        json: bool,
    },
    /// Gap and tilt across a domain boundary.
    Tilt {
        #[command(flatten)]
        src: Source,
        /// Comma-separated box half-widths.
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<usize>>,
    },
    /// Shell values of an equivariant cochain around each defect.
    Poles {
        #[command(flatten)]
        src: Source,
        /// Cochain name within the project.
        #[arg(long)]
        cochain: Option<String>,
    },
    /// Run an automaton and track residues, pullbacks and the field drop.
    Evolve {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        ca: String,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Tile homology, invariant cohomology or the Conway-Lagarias group.
    Homology {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_enum, default_value = "tile")]
        kind: HomologyKind,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        /// Coefficients, e.g. `Z`, `Z/2`, `Z^2+Z/4`.
        #[arg(long, default_value = "Z")]
        coeff: String,
        /// Print cell counts and boundary matrices instead.
        #[arg(long)]
        export: bool,
    },
    /// Verify the cocycle conditions of every cocycle and cochain in a project.
    CheckCocycle {
        #[command(flatten)]
        src: Source,
    },
    /// Search for a transfer function between two cocycles.
    Cohomologous {
        #[command(flatten)]
        src: Source,
        /// Name of the first cocycle.
        #[arg(long)]
        first: String,
        /// Name of the second cocycle.
        #[arg(long)]
        second: String,
        #[arg(long, default_value_t = 1)]
        max_radius: usize,
        /// Candidate transfer values for infinite groups: integers in `-k..=k`.
        #[arg(long)]
        int_range: Option<i64>,
    },
    /// `Ext(H, G)` of two finitely generated abelian groups.
    Ext { h: String, g: String },
}

#[derive(Subcommand, Debug)]
pub enum FixtureAction {
    List,
    Emit {
        name: String,
        /// Write to a file instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomologyKind {
    Tile,
    Invariant,
    ConwayLagarias,
}

/// What a command produced: text for stdout and an exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

impl Output {
    fn ok(s: impl Into<String>) -> Self {
        Output { stdout: s.into(), code: 0 }
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

/// Project and selected configuration name.
fn load(src: &Source) -> Result<(ProjectFile, Option<String>)> {
    match (&src.project, &src.fixture) {
        (Some(path), _) => Ok((ProjectFile::load(path)?, src.config.clone())),
        (None, Some(name)) => {
            let (p, cfg) = resolve_fixture(name)?;
            Ok((p, src.config.clone().or(cfg)))
        }
        (None, None) => Err(Error::Invalid("give a project file or --fixture".into())),
    }
}

fn tile_complex_of(p: &ProjectFile, radius: Option<usize>) -> Result<TileComplex> {
    match (&p.sft.constraint, radius) {
        (Constraint::Wang { tiles }, None | Some(0)) => Ok(build_tile_complex(tiles)),
        (_, r) => Ok(radius_complex(&p.sft, r.unwrap_or(p.sft.radius), SearchBudget::default())?.complex),
    }
}

/// Execute a parsed command.
pub fn run(cli: Cli) -> Result<Output> {
    match cli.command {
        Command::Fixtures { action: FixtureAction::List } => Ok(Output::ok(fixture_names().join("\n") + "\n")),
        Command::Fixtures { action: FixtureAction::Emit { name, out } } => {
            let (mut p, cfg) = resolve_fixture(&name)?;
            if let Some(c) = cfg {
                p.configurations.retain(|x| x.name == c);
            }
            match out {
                Some(path) => {
                    p.save(&path)?;
                    Ok(Output::ok(format!("wrote {}\n", path.display())))
                }
                None => Ok(Output::ok(p.to_json() + "\n")),
            }
        }
        Command::Analyze { src, map } => {
            let (p, cfg) = load(&src)?;
            let named = p.pick_configuration(cfg.as_deref())?;
            let rule = p.pick_cocycle(src.cocycle.as_deref())?;
            let r = src.radius.unwrap_or(p.analysis.radius);
            let report = defect_report(&named.configuration, &p.sft, rule, r, &p.analysis.tilt)?;
            let mut s = pretty(&report) + "\n";
            if map {
                s += &defect_field(&named.configuration, &p.sft)?.render();
            }
            Ok(Output::ok(s))
        }
        Command::Residue { src, json } => {
            let (p, cfg) = load(&src)?;
            let named = p.pick_configuration(cfg.as_deref())?;
            let rule = p.pick_cocycle(src.cocycle.as_deref())?;
            let r = src.radius.unwrap_or(p.analysis.radius);
            let rep = crate::defects::residue_report(&named.configuration, &p.sft, rule, r)?;
            if json {
                return Ok(Output::ok(pretty(&rep) + "\n"));
            }
            Ok(Output::ok(rep.residues.iter().map(|h| format!("{}\n", h.residue)).collect::<String>()))
        }
        Command::Tilt { src, schedule } => {
            let (p, cfg) = load(&src)?;
            let named = p.pick_configuration(cfg.as_deref())?;
            let rule = p.pick_cocycle(src.cocycle.as_deref())?;
            let mut opts = p.analysis.tilt.clone();
            if let Some(s) = schedule {
                opts.schedule = s;
            }
            let r = src.radius.unwrap_or(p.analysis.radius);
            Ok(Output::ok(pretty(&tilt_estimate(&named.configuration, &p.sft, rule, r, &opts)?) + "\n"))
        }
        Command::Poles { src, cochain } => {
            let (p, cfg) = load(&src)?;
            let named = p.pick_configuration(cfg.as_deref())?;
            let eq = match cochain {
                Some(n) => p.equivariant_cochain(&n)?,
                None => p.equivariant.first().ok_or_else(|| Error::UnknownName("project has no cochains".into()))?,
            };
            let r = src.radius.unwrap_or(p.analysis.radius);
            Ok(Output::ok(pretty(&d_pole_search(&named.configuration, &p.sft, eq, r)?) + "\n"))
        }
        Command::Evolve { src, ca, steps } => {
            let (p, cfg) = load(&src)?;
            let named = p.pick_configuration(cfg.as_deref())?;
            let rule = p.pick_cocycle(src.cocycle.as_deref())?;
            let r = src.radius.unwrap_or(p.analysis.radius);
            let rep = persistence_experiment(&named.configuration, &p.sft, rule, p.ca(&ca)?, steps.unwrap_or(p.analysis.steps), r)?;
            Ok(Output::ok(pretty(&rep) + "\n"))
        }
        Command::Homology { src, kind, degree, coeff, export } => {
            let (p, _) = load(&src)?;
            let g = FgAbelianGroup::parse(&coeff)?;
            let tc = tile_complex_of(&p, src.radius)?;
            if export {
                return Ok(Output::ok(pretty(&tc.export()) + "\n"));
            }
            let group = match kind {
                HomologyKind::Tile => tile_homology(&tc, degree, &g)?,
                HomologyKind::Invariant => tile_cohomology(&tc, degree, &g)?,
                HomologyKind::ConwayLagarias => {
                    let Constraint::Wang { tiles } = &p.sft.constraint else {
                        return Err(Error::Invalid("the Conway-Lagarias group needs a Wang tile set".into()));
                    };
                    conway_lagarias_abelianized(tiles)?.group
                }
            };
            Ok(Output::ok(format!("{group}\n")))
        }
        Command::CheckCocycle { src } => {
            let (p, _) = load(&src)?;
            let budget = SearchBudget::default();
            let mut lines = vec![];
            let mut ok = true;
            let selected: Vec<_> = match &src.cocycle {
                Some(n) => vec![p.cocycle(n)?],
                None => p.cocycles.iter().collect(),
            };
            for c in selected {
                let rep = check_cocycle_conditions(c, &p.sft, budget)?;
                ok &= rep.ok;
                lines.push(json!({"name": c.name, "report": rep}));
            }
            if src.cocycle.is_none() {
                for e in &p.equivariant {
                    let rep = check_equivariant_cocycle(e, &p.sft, budget)?;
                    ok &= rep.ok;
                    lines.push(json!({"name": e.name, "report": rep}));
                }
            }
            if ok {
                Ok(Output::ok("ok\n"))
            } else {
                Ok(Output { stdout: format!("fail\n{}\n", pretty(&lines)), code: 1 })
            }
        }
        Command::Cohomologous { src, first, second, max_radius, int_range } => {
            let (p, _) = load(&src)?;
            let cands: Option<Vec<GroupElement>> = int_range.map(|k| (-k..=k).map(GroupElement::int).collect());
            let out = cohomologous_search(
                p.cocycle(&first)?,
                p.cocycle(&second)?,
                &p.sft,
                max_radius,
                cands.as_deref(),
                SearchBudget::default(),
            )?;
            Ok(Output::ok(pretty(&out) + "\n"))
        }
        Command::Ext { h, g } => {
            let (h, g) = (FgAbelianGroup::parse(&h)?, FgAbelianGroup::parse(&g)?);
            Ok(Output::ok(format!("{}\n", ext_group(&h, &g))))
        }
    }
}

/// JSON body printed on stderr for a failed command.
pub fn error_json(e: &Error) -> String {
    json!({"error": e.kind(), "message": e.to_string()}).to_string()
}

/// Parse arguments (program name first) and run; usage errors come back as
/// `Error::Invalid` with clap's message.
pub fn run_args<I, T>(args: I) -> Result<Output>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::Invalid(e.to_string()))?;
    run(cli)
}

/// Parse arguments, run, print, and return the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            out.code
        }
        Err(e) => {
            eprintln!("{}", error_json(&e));
            2
        }
    }
}

/// Cap the global thread pool from `DEFECTLAB_THREADS`.
pub fn init_threads() {
    if let Some(n) = std::env::var("DEFECTLAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<Output> {
        run(Cli::try_parse_from(std::iter::once("defectlab").chain(args.iter().copied())).unwrap())
    }

    #[test]
    fn ext_command() {
        assert_eq!(run_args(&["ext", "Z/4", "Z/6"]).unwrap().stdout, "Z/2\n");
    }

    #[test]
    fn unknown_fixture_is_an_error() {
        let e = run_args(&["residue", "--fixture", "nope"]).unwrap_err();
        assert!(error_json(&e).contains("unknown-name"));
    }
}
