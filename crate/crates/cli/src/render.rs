//! Human-readable tables.

use std::fmt::Write;

use qframes::frames::ForcedStep;
use qframes::ContradictionCertificate;

use crate::report::{ContextReport, Report};

/// Largest denominator tried when recognizing exact fractions.
pub const MAX_DENOMINATOR: u32 = 16;
const FRACTION_TOL: f64 = 1e-12;

/// `p/q` in lowest terms if `x` is within 1e-12 of one with `q ≤ 16`.
pub fn exact_fraction(x: f64) -> Option<String> {
    if !x.is_finite() {
        return None;
    }
    (1..=MAX_DENOMINATOR).find_map(|q| {
        let p = (x * f64::from(q)).round();
        if (x - p / f64::from(q)).abs() > FRACTION_TOL {
            return None;
        }
        Some(if q == 1 {
            format!("{p}")
        } else {
            format!("{p}/{q}")
        })
    })
}

/// `"1/12 (0.083333)"`, or just the decimal when no small fraction fits.
pub fn probability(x: f64) -> String {
    match exact_fraction(x) {
        Some(f) => format!("{f} ({x:.6})"),
        None => format!("{x:.6}"),
    }
}

fn distribution_table(out: &mut String, ctx: &ContextReport) {
    let width = ctx
        .distribution
        .iter()
        .map(|e| e.outcome.len())
        .max()
        .unwrap_or(0)
        .max(7)
        + 4;
    let _ = writeln!(out, "context {} ({})", ctx.id, ctx.observables.join(","));
    let _ = writeln!(out, "{:>width$}  probability", "outcome");
    for e in &ctx.distribution {
        let _ = writeln!(out, "{:>width$}  {}", e.outcome, probability(e.probability));
    }
}

fn support_table(out: &mut String, contexts: &[ContextReport], tol: Option<f64>) {
    match tol {
        Some(t) => {
            let _ = writeln!(out, "possible outcomes (probability > {t:e})");
        }
        None => {
            let _ = writeln!(out, "possible outcomes");
        }
    }
    for ctx in contexts {
        if let Some(s) = &ctx.support {
            let _ = writeln!(out, "  {:<4}{}", ctx.id, s.join("  "));
        }
    }
}

fn step_line(i: usize, s: &ForcedStep) -> String {
    let excluded: Vec<String> = s.excluded.iter().map(|t| format!("({t})")).collect();
    let verb = if excluded.len() == 1 { "has" } else { "have" };
    format!(
        "  {}. in {}, {} {verb} zero probability, so {}={}",
        i + 1,
        s.context,
        excluded.join(", "),
        s.observable,
        s.value
    )
}

pub fn certificate(out: &mut String, cert: &ContradictionCertificate) {
    let _ = writeln!(out, "no single-world assignment extends {}", premise(cert));
    match &cert.violated {
        Some(v) => {
            for (i, s) in cert.steps.iter().enumerate() {
                let _ = writeln!(out, "{}", step_line(i, s));
            }
            let _ = writeln!(
                out,
                "  but in {}, ({}) has zero probability: contradiction",
                v.context, v.outcome
            );
        }
        None => {
            let _ = writeln!(
                out,
                "  no forced values; all {} candidate assignments were checked and rejected",
                cert.assignments_checked
            );
        }
    }
}

fn premise(cert: &ContradictionCertificate) -> String {
    if cert.premise.is_empty() {
        "the empty premise".to_string()
    } else {
        cert.premise.to_string()
    }
}

pub fn fr(report: &Report) -> String {
    let mut out = String::new();
    let mode = report.mode.as_deref().unwrap_or("?");
    let who = if mode == "collapse" {
        "Alice and Bob"
    } else {
        "Wigner and Friend only"
    };
    let _ = writeln!(
        out,
        "scenario {} in {mode} mode ({who} as ultimate observers)",
        report.scenario
    );
    if let Some(b) = &report.alice_bob_outcome {
        let _ = writeln!(
            out,
            "Alice and Bob registered ({b}); the state is conditioned on it"
        );
    }
    if let Some(seed) = report.seed {
        let _ = writeln!(out, "seed {seed}");
    }
    out.push('\n');
    if let Some(xy) = report.contexts.first() {
        distribution_table(&mut out, xy);
    }
    if let Some(p) = report.probabilities.get("p_ok_ok") {
        let _ = writeln!(out, "\np(ok,ok) = {}", probability(*p));
    }
    if report.contexts.iter().any(|c| c.support.is_some()) {
        out.push('\n');
        support_table(&mut out, &report.contexts, report.tolerance);
    }
    if let Some(cert) = &report.certificate {
        out.push('\n');
        certificate(&mut out, cert);
    }
    out
}

pub fn certify(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario {}\n", report.scenario);
    for ctx in &report.contexts {
        distribution_table(&mut out, ctx);
        out.push('\n');
    }
    support_table(&mut out, &report.contexts, report.tolerance);
    out.push('\n');
    match (&report.assignments, &report.certificate) {
        (Some(list), _) if !list.is_empty() => {
            let _ = writeln!(out, "consistent: {} single-world assignment(s)", list.len());
            for a in list {
                if a.is_empty() {
                    let _ = writeln!(out, "  (no observables)");
                } else {
                    let _ = writeln!(out, "  {a}");
                }
            }
        }
        (_, Some(cert)) => certificate(&mut out, cert),
        _ => {
            let _ = writeln!(out, "no assignments");
        }
    }
    out
}

pub fn chsh(report: &Report) -> String {
    let mut out = String::new();
    let Some(c) = &report.chsh else {
        return out;
    };
    let _ = writeln!(
        out,
        "state {} ({} restarts, seed {})",
        c.state,
        c.restarts,
        report.seed.unwrap_or(0)
    );
    let [a, ap, b, bp] = c.setting;
    let _ = writeln!(
        out,
        "best setting  a={a:.9}  a'={ap:.9}  b={b:.9}  b'={bp:.9}"
    );
    let _ = writeln!(out, "best value    {:.10}", c.value);
    let _ = writeln!(out, "classical     {}", c.classical_bound);
    let _ = writeln!(out, "tsirelson     {:.10} (2*sqrt(2))", c.tsirelson_bound);
    out
}

pub fn sample(report: &Report) -> String {
    let mut out = String::new();
    let Some(s) = &report.samples else {
        return out;
    };
    if s.n == 1 {
        let _ = writeln!(out, "{}: {}", s.context, s.first);
        return out;
    }
    let width = s
        .rows
        .iter()
        .map(|r| r.outcome.len())
        .max()
        .unwrap_or(0)
        .max(7)
        + 2;
    let _ = writeln!(
        out,
        "scenario {} context {} n={} seed {}",
        report.scenario,
        s.context,
        s.n,
        report.seed.unwrap_or(0)
    );
    let _ = writeln!(
        out,
        "  {:<width$}{:>8}  {:>10}  born",
        "outcome", "count", "frequency"
    );
    for r in &s.rows {
        let _ = writeln!(
            out,
            "  {:<width$}{:>8}  {:>10.6}  {}",
            r.outcome,
            r.count,
            r.frequency,
            probability(r.born)
        );
    }
    out
}
