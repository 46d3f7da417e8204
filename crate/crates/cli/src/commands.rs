//! Subcommand implementations. Nothing here prints or exits.

use std::ffi::OsString;

use clap::Parser;
use qframes::frames::{build_support_table, global_assignments, hardy_certificate};
use qframes::measurement::{born, sample};
use qframes::scenarios::{
    bell_phi_plus, classical_chsh_bound, fr_collapse_branch, fr_observables, fr_state,
    fr_support_table, maximize_chsh, product_zero_zero, singlet, tsirelson_bound,
};
use qframes::{FrMode, Outcome, RandomSeed, ValueAssignment};

use crate::args::{Cli, Command, Format, GlobalArgs, Mode, Source, StateName};
use crate::render;
use crate::report::{ChshReport, ContextReport, Report, SampleReport, SampleRow};
use crate::scenario_file::{self, Scenario};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONSISTENT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandResult {
    fn ok(code: i32, stdout: String) -> Self {
        Self {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(message: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_from<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            if code == 0 {
                CommandResult::ok(0, text)
            } else {
                CommandResult {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}

pub fn run(cli: &Cli) -> CommandResult {
    let g = &cli.global;
    let outcome = match &cli.command {
        Command::Fr { mode } => fr(g, *mode).map(|r| (EXIT_OK, r)),
        Command::Certify { source, fix } => certify(g, source, fix),
        Command::Chsh { state, restarts } => chsh(g, *state, *restarts).map(|r| (EXIT_OK, r)),
        Command::Sample { source, context, n } => {
            sample_context(g, source, context, *n).map(|r| (EXIT_OK, r))
        }
    };
    match outcome {
        Ok((code, report)) => CommandResult::ok(code, format(g.format, &report)),
        Err(message) => CommandResult::usage(message),
    }
}

fn format(format: Format, report: &Report) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Table => match report.command.as_str() {
            "fr" => render::fr(report),
            "certify" => render::certify(report),
            "chsh" => render::chsh(report),
            _ => render::sample(report),
        },
    }
}

fn load(source: &Source) -> Result<Scenario, String> {
    let parsed = match (&source.path, &source.builtin) {
        (Some(path), _) => scenario_file::load_path(path),
        (None, Some(name)) => {
            let text = scenario_file::builtin(name).ok_or(format!("unknown built-in {name}"))?;
            scenario_file::parse(text).and_then(|f| f.validate())
        }
        (None, None) => return Err("no scenario given".into()),
    };
    parsed.map_err(|e| e.to_string())
}

pub fn fr(g: &GlobalArgs, mode: Mode) -> Result<Report, String> {
    let err = |e: qframes::Error| e.to_string();
    let mut report = Report::new("fr", "frauchiger-renner");
    report.seed = Some(g.seed);
    report.tolerance = Some(g.tol);
    let obs = fr_observables::<f64>();
    let xy_ids = ["X".to_string(), "Y".to_string()];
    match mode {
        Mode::Unitary => {
            report.mode = Some(FrMode::Unitary.to_string());
            let dist = born(
                &qframes::measurement::join(&obs.x, &obs.y).map_err(err)?,
                &fr_state(),
            )
            .map_err(err)?;
            report
                .probabilities
                .insert("p_ok_ok".into(), dist.probability(&ok_ok()));
            let table = fr_support_table(g.tol).map_err(err)?;
            report.contexts = table.rows().iter().map(ContextReport::from_row).collect();
            let premise = ValueAssignment::from_pairs([("X", "ok"), ("Y", "ok")]);
            report.certificate = hardy_certificate(&table, &premise).map_err(err)?;
        }
        Mode::Collapse => {
            report.mode = Some(FrMode::Collapse.to_string());
            let ab = qframes::measurement::join(&obs.a, &obs.b).map_err(err)?;
            let branch = sample(&ab, &fr_state(), 1, RandomSeed(g.seed))
                .map_err(err)?
                .pop()
                .ok_or("no draw")?;
            let fr = fr_collapse_branch::<f64>(&branch).map_err(err)?;
            report.alice_bob_outcome = Some(branch.to_string());
            report.probabilities.insert("p_ok_ok".into(), fr.p_ok_ok);
            report.contexts = vec![ContextReport::from_distribution(
                "XY",
                &xy_ids,
                &fr.super_distribution,
            )];
        }
    }
    Ok(report)
}

fn ok_ok() -> Outcome {
    Outcome::new(["ok", "ok"])
}

pub fn certify(
    g: &GlobalArgs,
    source: &Source,
    fix: &[(String, String)],
) -> Result<(i32, Report), String> {
    let scenario = load(source)?;
    let mut constraints = scenario.constraints.clone();
    for (o, l) in fix {
        constraints.insert(o.clone(), l.clone());
    }
    let table = build_support_table(&scenario.state, &scenario.contexts, g.tol)
        .map_err(|e| e.to_string())?;
    let found = global_assignments(&table, &constraints).map_err(|e| e.to_string())?;
    let mut report = Report::new("certify", &scenario.id);
    report.tolerance = Some(g.tol);
    report.contexts = table.rows().iter().map(ContextReport::from_row).collect();
    report.consistent = Some(!found.is_empty());
    let code = if found.is_empty() {
        report.certificate = hardy_certificate(&table, &constraints).map_err(|e| e.to_string())?;
        EXIT_INCONSISTENT
    } else {
        EXIT_OK
    };
    report.assignments = Some(found);
    Ok((code, report))
}

pub fn chsh(g: &GlobalArgs, state: StateName, restarts: usize) -> Result<Report, String> {
    let psi = match state {
        StateName::Singlet => singlet(),
        StateName::Product00 => product_zero_zero(),
        StateName::Fr => fr_state(),
        StateName::PhiPlus => bell_phi_plus(),
    };
    let (setting, value) =
        maximize_chsh::<f64>(&psi, restarts, RandomSeed(g.seed)).map_err(|e| e.to_string())?;
    let mut report = Report::new("chsh", state.as_str());
    report.seed = Some(g.seed);
    report.chsh = Some(ChshReport {
        state: state.as_str().to_string(),
        restarts,
        setting: setting.angles(),
        value,
        classical_bound: classical_chsh_bound(),
        tsirelson_bound: tsirelson_bound(),
    });
    Ok(report)
}

pub fn sample_context(
    g: &GlobalArgs,
    source: &Source,
    context: &str,
    n: usize,
) -> Result<Report, String> {
    let scenario = load(source)?;
    let Some(ctx) = scenario.context(context) else {
        let known: Vec<&str> = scenario.contexts.iter().map(|c| c.id()).collect();
        return Err(format!(
            "unknown context {context} (have {})",
            known.join(", ")
        ));
    };
    let err = |e: qframes::Error| e.to_string();
    let pvm = ctx.joint();
    let draws = sample(pvm, &scenario.state, n, RandomSeed(g.seed)).map_err(err)?;
    let exact = born(pvm, &scenario.state).map_err(err)?;
    let rows = exact
        .iter()
        .map(|(o, p)| {
            let count = draws.iter().filter(|d| *d == o).count();
            SampleRow {
                outcome: o.to_string(),
                count,
                frequency: count as f64 / n as f64,
                born: p,
            }
        })
        .collect();
    let mut report = Report::new("sample", &scenario.id);
    report.seed = Some(g.seed);
    report.samples = Some(SampleReport {
        context: context.to_string(),
        n,
        rows,
        first: draws[0].to_string(),
    });
    Ok(report)
}
