//! Command dispatch for the `pregeom` binary.
//!
//! Commands:
//!
//! ```text
//! pregeom verify <matroid>
//! pregeom classify <matroid>
//! pregeom geometrize <matroid> [-o <out>]
//! pregeom plane <matroid> --mode projective|affine [--concur <l1> <l2> <l3>]
//! pregeom group-check <group> <matroid> --prop <name> [--A <indices>] [--kmax <n>]
//! ```
//!
//! Exit codes: 0 all checks pass, 1 some check fails, 2 only vacuous
//! outcomes, 3 input or capacity error. Reports go to stdout and follow
//! the grammars in `pregeometry::report`; errors go to stderr as a
//! single `ERROR <detail>` line.

use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use pregeometry::classify::{classify, geometrize, Geometrized};
use pregeometry::error::{GroupError, MatroidError};
use pregeometry::format::{parse_group_file, parse_matroid_file, MatroidFile};
use pregeometry::harness::{
    check_clcom_commutativity, check_configuration, check_finite_homogeneity,
    check_generic_product, check_invariant_subgroups, GroupPregeometry, PropVerdict,
    DEFAULT_KMAX, MAX_KMAX,
};
use pregeometry::plane::{Plane, PlaneMode};
use pregeometry::report;
use pregeometry::set::ElementSet;
use pregeometry::{verify_axioms, Matroid};

#[derive(Parser)]
#[command(name = "pregeom", version, about = "finite pregeometry engine", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the four closure axioms of a matroid file.
    Verify { matroid: PathBuf },
    /// Classify a validated matroid: trivial / modular / locally modular
    /// / projective. Verdicts refer to the matroid exactly as given; run
    /// geometrize first for statements about its associated geometry.
    Classify { matroid: PathBuf },
    /// Quotient a validated matroid to its canonical geometry.
    Geometrize {
        matroid: PathBuf,
        /// Write the geometry as an explicit matroid file.
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Expose a rank-3 geometry as an incidence plane.
    Plane {
        matroid: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Three lines as comma-separated point labels, e.g. 1,2,3.
        #[arg(long, num_args = 3)]
        concur: Option<Vec<String>>,
    },
    /// Run the group-pregeometry proposition harness.
    GroupCheck {
        group: PathBuf,
        matroid: PathBuf,
        #[arg(long, value_enum)]
        prop: PropArg,
        /// The finite base set A as comma-separated indices (default ∅).
        #[arg(long = "A")]
        a: Option<String>,
        /// Bound on |A| for quantified checks (default 2, max 3).
        #[arg(long)]
        kmax: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Projective,
    Affine,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PropArg {
    All,
    Homogeneity,
    GenericProduct,
    InvariantSubgroups,
    Configuration,
    Clcom,
}

/// Exit codes by outcome class.
const EXIT_PASS: i32 = 0;
const EXIT_FAIL: i32 = 1;
const EXIT_VACUOUS: i32 = 2;
const EXIT_ERROR: i32 = 3;

struct CliError(String);

impl<E: Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{rendered}");
                EXIT_PASS
            } else {
                let _ = write!(err, "{rendered}");
                EXIT_ERROR
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(CliError(msg)) => {
            let _ = writeln!(err, "ERROR {msg}");
            EXIT_ERROR
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Verify { matroid } => cmd_verify(&matroid, out),
        Command::Classify { matroid } => cmd_classify(&matroid, out),
        Command::Geometrize { matroid, out: dest } => cmd_geometrize(&matroid, dest.as_deref(), out),
        Command::Plane { matroid, mode, concur } => cmd_plane(&matroid, mode, concur, out),
        Command::GroupCheck { group, matroid, prop, a, kmax } => {
            cmd_group_check(&group, &matroid, prop, a, kmax, out)
        }
    }
}

fn load_matroid(path: &Path) -> Result<Matroid, CliError> {
    let table = parse_matroid_file(path)?;
    Matroid::validate(table).map_err(|e| match e {
        MatroidError::NotAPregeometry(report) => {
            let detail = report::axiom_lines(&report)
                .into_iter()
                .filter(|l| l.contains("FAIL"))
                .collect::<Vec<_>>()
                .join("; ");
            CliError(format!("not a pregeometry: {detail}"))
        }
        other => CliError(other.to_string()),
    })
}

fn cmd_verify(path: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let table = parse_matroid_file(path)?;
    let axiom_report = verify_axioms(&table)?;
    for line in report::axiom_lines(&axiom_report) {
        writeln!(out, "{line}")?;
    }
    Ok(if axiom_report.all_pass() { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_classify(path: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let matroid = load_matroid(path)?;
    let class_report = classify(&matroid)?;
    for line in report::classify_lines(matroid.rank_total(), &class_report) {
        writeln!(out, "{line}")?;
    }
    Ok(EXIT_PASS)
}

fn cmd_geometrize(
    path: &Path,
    dest: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let matroid = load_matroid(path)?;
    match geometrize(&matroid)? {
        Geometrized::AllLoops { .. } => {
            if dest.is_some() {
                return Err(CliError(
                    "matroid has rank 0; the empty geometry has no file form".to_string(),
                ));
            }
            writeln!(out, "{}", report::geometry_empty_line())?;
        }
        Geometrized::Geometry(g) => {
            writeln!(
                out,
                "{}",
                report::geometry_line(g.point_count(), g.base().rank_total())
            )?;
            if let Some(dest) = dest {
                let file = MatroidFile::explicit_from_matroid(g.base())?;
                std::fs::write(dest, file.serialize())
                    .map_err(|e| CliError(format!("cannot write {}: {e}", dest.display())))?;
            }
        }
    }
    Ok(EXIT_PASS)
}

fn parse_index_set(text: &str) -> Result<ElementSet, CliError> {
    let mut set = ElementSet::empty();
    for tok in text.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let idx: usize = tok
            .parse()
            .map_err(|_| CliError(format!("'{tok}' is not an element index")))?;
        set.insert(idx);
    }
    Ok(set)
}

fn cmd_plane(
    path: &Path,
    mode: ModeArg,
    concur: Option<Vec<String>>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let matroid = load_matroid(path)?;
    let geometry = match geometrize(&matroid)? {
        Geometrized::Geometry(g) => g,
        Geometrized::AllLoops { .. } => {
            return Err(CliError("matroid has rank 0, expected rank 3".to_string()))
        }
    };
    let mode = match mode {
        ModeArg::Projective => PlaneMode::Projective,
        ModeArg::Affine => PlaneMode::Affine,
    };
    let plane = Plane::from_geometry(&geometry, mode)?;
    writeln!(out, "{}", report::plane_line(&plane))?;
    if let Some(specs) = concur {
        let lines: Vec<ElementSet> = specs
            .iter()
            .map(|s| parse_index_set(s))
            .collect::<Result<_, _>>()?;
        let result = plane.concurrency(&lines[0], &lines[1], &lines[2])?;
        writeln!(out, "{}", report::concurrency_line(&result))?;
    }
    Ok(EXIT_PASS)
}

/// Tracks printed verdict tokens for the exit code.
#[derive(Default)]
struct Outcomes {
    any_fail: bool,
    any_vacuous: bool,
}

impl Outcomes {
    fn fail(&mut self) {
        self.any_fail = true;
    }

    fn vacuous(&mut self) {
        self.any_vacuous = true;
    }

    fn exit_code(&self) -> i32 {
        if self.any_fail {
            EXIT_FAIL
        } else if self.any_vacuous {
            EXIT_VACUOUS
        } else {
            EXIT_PASS
        }
    }
}

fn cmd_group_check(
    group_path: &Path,
    matroid_path: &Path,
    prop: PropArg,
    a: Option<String>,
    kmax: Option<usize>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let group = parse_group_file(group_path)?;
    let matroid = load_matroid(matroid_path)?;
    let base = match a {
        Some(text) => parse_index_set(&text)?,
        None => ElementSet::empty(),
    };
    matroid.ground().check(&base).map_err(|e| CliError(e.to_string()))?;
    let kmax = kmax.unwrap_or(DEFAULT_KMAX);
    if kmax > MAX_KMAX {
        return Err(GroupError::KmaxTooLarge(kmax).into());
    }

    let gp = match GroupPregeometry::new(group, matroid) {
        Ok(gp) => gp,
        Err(GroupError::Incompatible { auto, flat }) => {
            writeln!(out, "{}", report::compat_fail_line(&auto, &flat))?;
            return Ok(EXIT_FAIL);
        }
        Err(other) => return Err(other.into()),
    };
    writeln!(out, "{}", report::compat_pass_line(gp.compatibility()))?;

    let mut outcomes = Outcomes::default();

    // homogeneity status, when it can be established for NOTE downgrades
    let mut homogeneity_failed: Option<bool> = None;
    let mut note_if_unfounded =
        |out: &mut dyn Write, prop_name: &str, homogeneity_failed: &mut Option<bool>, gp: &GroupPregeometry| -> Result<(), CliError> {
            if homogeneity_failed.is_none() {
                *homogeneity_failed = check_finite_homogeneity(gp, kmax)
                    .ok()
                    .map(|o| !o.passed());
            }
            if *homogeneity_failed == Some(true) {
                writeln!(out, "{}", report::not_a_refutation_note(prop_name))?;
            }
            Ok(())
        };

    if matches!(prop, PropArg::All | PropArg::Homogeneity) {
        let outcome = check_finite_homogeneity(&gp, kmax)?;
        homogeneity_failed = Some(!outcome.passed());
        writeln!(out, "{}", report::homogeneity_line(&outcome))?;
        if !outcome.passed() {
            outcomes.fail();
        }
    }

    if matches!(prop, PropArg::All | PropArg::GenericProduct) {
        let outcome = check_generic_product(&gp, kmax)?;
        writeln!(out, "{}", report::generic_product_line(&outcome))?;
        if !outcome.passed() {
            outcomes.fail();
            note_if_unfounded(out, "generic-product", &mut homogeneity_failed, &gp)?;
        }
    }

    if matches!(prop, PropArg::All | PropArg::InvariantSubgroups) {
        let outcome = check_invariant_subgroups(&gp, kmax)?;
        writeln!(out, "{}", report::invariant_subgroups_line(&outcome))?;
        if !outcome.passed() {
            outcomes.fail();
            note_if_unfounded(out, "invariant-subgroups", &mut homogeneity_failed, &gp)?;
        }
    }

    if matches!(prop, PropArg::All | PropArg::Configuration) {
        // under --prop all a failed homogeneity makes the configuration
        // claim vacuous; requested directly, the scan runs as asked
        if prop == PropArg::All && homogeneity_failed == Some(true) {
            writeln!(out, "{}", report::configuration_vacuous_line())?;
            outcomes.vacuous();
        } else {
            let scan = check_configuration(&gp, &base)?;
            writeln!(out, "{}", report::config_line(&scan.summary))?;
            writeln!(out, "{}", report::configuration_verdict_line(&scan.summary))?;
            if scan.summary.failed > 0 {
                outcomes.fail();
                note_if_unfounded(out, "configuration", &mut homogeneity_failed, &gp)?;
            }
        }
    }

    if matches!(prop, PropArg::All | PropArg::Clcom) {
        let clcom = check_clcom_commutativity(&gp, &base)?;
        writeln!(out, "{}", report::clcom_line(&clcom))?;
        match clcom.verdict {
            PropVerdict::Pass => {}
            PropVerdict::Fail => outcomes.fail(),
            PropVerdict::Vacuous => outcomes.vacuous(),
        }
    }

    Ok(outcomes.exit_code())
}
