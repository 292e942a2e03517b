//! Deterministic report line rendering.
//!
//! One grammar per checker, one line per verdict:
//!
//! ```text
//! MODE exhaustive | MODE sampled subsets=<n>
//! AXIOM <name> PASS|FAIL [witness=...]
//! DIM rank=<r> geometric=<r-1>
//! CLASSIFY <flag>=<true|false> [witness=<set>,<set>]
//! GEOMETRY points=<n> rank=<r> geometric=<r-1> | GEOMETRY empty points=0
//! PLANE mode=<m> points=<n> lines=<n> nondegenerate=<bool>
//! CONCURRENT point=<p> | NOT-CONCURRENT d1=<p> d2=<p> d3=<p>
//! COMPAT PASS automorphisms=<n> | COMPAT PASS structural
//!   | COMPAT FAIL witness=f=<map>,F=<set>
//! PROP <name> PASS|FAIL|VACUOUS [kmax=<k>] [witness=...] [notes]
//! CONFIG total=<n> concurrent=<n> degenerate=<n> failed=<n>
//! NOTE <name> not-a-refutation (finite homogeneity fails)
//! ```
//!
//! Sets print ascending inside braces; witness tuples print in the same
//! component order they are quantified in.

use crate::axioms::{AxiomReport, VerificationMode, Verdict};
use crate::classify::{ClassificationReport, FlagVerdict};
use crate::harness::{
    ClcomHypothesis, ClcomReport, CompatibilityVerdict, ConfigurationSummary, PropOutcome,
    PropVerdict,
};
use crate::plane::{ConcurrencyResult, Plane};

pub const HOMOGENEITY_NOTE: &str = "(finite analogue; infinite-dimension clause unchecked)";

pub fn mode_line(mode: &VerificationMode) -> String {
    match mode {
        VerificationMode::Exhaustive => "MODE exhaustive".to_string(),
        VerificationMode::Sampled { subsets } => format!("MODE sampled subsets={subsets}"),
    }
}

pub fn axiom_lines(report: &AxiomReport) -> Vec<String> {
    let mut out = vec![mode_line(&report.mode)];
    out.push(match &report.reflexivity {
        Verdict::Pass => "AXIOM reflexivity PASS".to_string(),
        Verdict::Fail(a) => format!("AXIOM reflexivity FAIL witness=A={a}"),
    });
    out.push(match &report.transitivity {
        Verdict::Pass => "AXIOM transitivity PASS".to_string(),
        Verdict::Fail(a) => format!("AXIOM transitivity FAIL witness=A={a}"),
    });
    out.push(format!(
        "AXIOM finite-character PASS ({})",
        crate::axioms::FINITE_CHARACTER_NOTE
    ));
    out.push(match &report.exchange {
        Verdict::Pass => "AXIOM exchange PASS".to_string(),
        Verdict::Fail(w) => format!(
            "AXIOM exchange FAIL witness=A={},a={},b={}",
            w.base, w.a, w.b
        ),
    });
    out
}

pub fn dim_line(rank: usize) -> String {
    format!("DIM rank={rank} geometric={}", rank as i64 - 1)
}

fn classify_flag(flag: &str, verdict: &FlagVerdict) -> String {
    match &verdict.witness {
        None => format!("CLASSIFY {flag}={}", verdict.holds),
        Some(pair) => format!("CLASSIFY {flag}={} witness={},{}", verdict.holds, pair.a, pair.b),
    }
}

pub fn classify_lines(rank: usize, report: &ClassificationReport) -> Vec<String> {
    vec![
        dim_line(rank),
        classify_flag("trivial", &report.trivial),
        classify_flag("modular", &report.modular),
        classify_flag("locally_modular", &report.locally_modular),
        format!("CLASSIFY projective={}", report.projective()),
        format!("CLASSIFY is_geometry={}", report.is_geometry),
    ]
}

pub fn geometry_line(points: usize, rank: usize) -> String {
    format!("GEOMETRY points={points} rank={rank} geometric={}", rank as i64 - 1)
}

pub fn geometry_empty_line() -> String {
    "GEOMETRY empty points=0".to_string()
}

pub fn plane_line(plane: &Plane) -> String {
    format!(
        "PLANE mode={} points={} lines={} nondegenerate={}",
        plane.mode().as_str(),
        plane.point_count(),
        plane.line_count(),
        plane.nondegenerate()
    )
}

pub fn concurrency_line(result: &ConcurrencyResult) -> String {
    if result.concurrent {
        format!("CONCURRENT point={}", result.common_point.expect("concurrent"))
    } else {
        let (d1, d2, d3) = result.pairwise_meets.expect("non-concurrent");
        format!("NOT-CONCURRENT d1={d1} d2={d2} d3={d3}")
    }
}

pub fn compat_pass_line(verdict: &CompatibilityVerdict) -> String {
    match verdict {
        CompatibilityVerdict::Exhaustive { automorphisms } => {
            format!("COMPAT PASS automorphisms={automorphisms}")
        }
        CompatibilityVerdict::Structural => "COMPAT PASS structural".to_string(),
    }
}

pub fn compat_fail_line(auto: &[usize], flat: &crate::set::ElementSet) -> String {
    let map: Vec<String> = auto.iter().map(|v| v.to_string()).collect();
    format!("COMPAT FAIL witness=f=({}),F={flat}", map.join(","))
}

pub fn homogeneity_line(outcome: &PropOutcome<crate::harness::HomogeneityWitness>) -> String {
    match &outcome.witness {
        None => format!("PROP homogeneity PASS kmax={} {HOMOGENEITY_NOTE}", outcome.kmax),
        Some(w) => format!(
            "PROP homogeneity FAIL kmax={} witness=A={},b={},c={} {HOMOGENEITY_NOTE}",
            outcome.kmax, w.base, w.b, w.c
        ),
    }
}

pub fn generic_product_line(outcome: &PropOutcome<crate::harness::GenericProductWitness>) -> String {
    match &outcome.witness {
        None => format!("PROP generic-product PASS kmax={}", outcome.kmax),
        Some(w) => format!(
            "PROP generic-product FAIL kmax={} witness=A={},a={},b={}",
            outcome.kmax, w.base, w.a, w.b
        ),
    }
}

pub fn invariant_subgroups_line(
    outcome: &PropOutcome<crate::harness::InvariantSubgroupWitness>,
) -> String {
    match &outcome.witness {
        None => format!("PROP invariant-subgroups PASS kmax={}", outcome.kmax),
        Some(w) => format!(
            "PROP invariant-subgroups FAIL kmax={} witness=A={},H={}",
            outcome.kmax, w.base, w.subgroup
        ),
    }
}

pub fn config_line(summary: &ConfigurationSummary) -> String {
    format!(
        "CONFIG total={} concurrent={} degenerate={} failed={}",
        summary.total, summary.concurrent, summary.degenerate, summary.failed
    )
}

pub fn configuration_verdict_line(summary: &ConfigurationSummary) -> String {
    if summary.failed == 0 {
        "PROP configuration PASS".to_string()
    } else {
        "PROP configuration FAIL".to_string()
    }
}

pub fn configuration_vacuous_line() -> String {
    "PROP configuration VACUOUS (finite homogeneity fails)".to_string()
}

pub fn clcom_line(report: &ClcomReport) -> String {
    let verdict = match report.verdict {
        PropVerdict::Pass => "PASS",
        PropVerdict::Fail => "FAIL",
        PropVerdict::Vacuous => "VACUOUS",
    };
    let hypothesis = match &report.hypothesis {
        ClcomHypothesis::NotEvaluated => {
            "hypothesis=not-evaluated (finite homogeneity fails)".to_string()
        }
        ClcomHypothesis::NoGenericPair => "hypothesis=no-generic-pair".to_string(),
        ClcomHypothesis::Unmet => "hypothesis=unmet".to_string(),
        ClcomHypothesis::Met { a, b, commuting_pair } => {
            format!("hypothesis=met a={a} b={b} commuting-pair={commuting_pair}")
        }
    };
    let conclusion = match report.conclusion {
        None => "conclusion=untested".to_string(),
        Some(true) => "conclusion=commutative".to_string(),
        Some(false) => "conclusion=noncommutative".to_string(),
    };
    format!(
        "PROP clcom {verdict} kmax={} {hypothesis} {conclusion}",
        report.homogeneity_kmax
    )
}

pub fn not_a_refutation_note(prop: &str) -> String {
    format!("NOTE {prop} not-a-refutation (finite homogeneity fails)")
}
