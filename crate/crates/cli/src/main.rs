//! Command line front end: load algebra, extension, module, and short
//! exact sequence descriptions (from JSON files or the built-in catalog),
//! run the validators and decision procedures, and print text or JSON
//! reports.
//!
//! Exit codes: 0 a decision completed (whatever the verdict), 2 format
//! error, 3 validation failure, 4 the requested window is insufficient.

use clap::{Args, Parser, Subcommand, ValueEnum};
use dgsep::algebra::{cycles, homology, DgAlgebra};
use dgsep::construct::{tensor_over_source, DgExtension};
use dgsep::demos::{self, Demo};
use dgsep::error::Error;
use dgsep::graded::Window;
use dgsep::json;
use dgsep::modules::{
    cycles_module, find_dg_splitting, find_module_isomorphism, induce_from_cycles, lift_splitting,
    random_graded_module, restrict_ses, validate_ses, DgModule, ShortExactSequence, SplitOutcome,
};
use dgsep::report::{Infeasibility, ValidationReport, Verdict};
use dgsep::separability::{
    check_main_theorem, classify_gr_division, find_casimir, is_dg_division, CasimirOutcome,
};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "dgsep",
    about = "Exact decision procedures for differential graded algebras",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an algebra, extension, module, or short exact sequence
    Validate(Common),
    /// Homology dimensions of an algebra over a degree window
    Homology(Common),
    /// The cycle subalgebra with its inclusion
    Cycles(Common),
    /// Classify a graded algebra: division or not, and of which shape
    #[command(name = "grdiv-classify")]
    GrdivClassify(Common),
    /// Decide whether a dg-algebra is dg-division via its cycles
    #[command(name = "dgdiv-check")]
    DgdivCheck(Common),
    /// Build and validate the tensor bimodule of an extension
    Tensor(Common),
    /// Decide dg-separability of an extension
    Separable(Common),
    /// Compare the predicted and computed separability verdicts
    #[command(name = "main-theorem")]
    MainTheorem(Common),
    /// Decide whether a short exact sequence splits
    #[command(name = "ses-split")]
    SesSplit(SesSplitArgs),
    /// Transfer a source-base splitting through a Casimir element
    #[command(name = "lift-split")]
    LiftSplit(Common),
    /// Round-trip random graded modules through induction and cycles
    #[command(name = "equivalence-check")]
    EquivalenceCheck(Common),
    /// List the built-in examples, or print one as a JSON document
    Demo(DemoArgs),
}

#[derive(Args)]
struct Common {
    /// JSON description file
    #[arg(value_name = "FILE")]
    file: Option<PathBuf>,
    /// Name of a built-in example (several words allowed)
    #[arg(long, value_name = "NAME", num_args = 1..)]
    demo: Option<Vec<String>>,
    /// Degree window, two integers
    #[arg(long, value_names = ["LO", "HI"], num_args = 2, allow_hyphen_values = true)]
    window: Option<Vec<i64>>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Seed for randomized searches
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SesSplitArgs {
    #[command(flatten)]
    common: Common,
    /// Which base ring the splitting must be linear over
    #[arg(long, value_enum, default_value_t = SplitBase::Target)]
    base: SplitBase,
}

#[derive(Args)]
struct DemoArgs {
    /// Example name; omit to list the catalog
    #[arg(value_name = "NAME", num_args = 0..)]
    name: Vec<String>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum SplitBase {
    Target,
    Source,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Format(_) => 2,
        Error::WindowTooSmall(_) | Error::ClosureEscape { .. } => 4,
        _ => 3,
    }
}

type RunResult = Result<u8, Error>;

fn run(command: Command) -> RunResult {
    match command {
        Command::Validate(c) => cmd_validate(&c),
        Command::Homology(c) => cmd_homology(&c),
        Command::Cycles(c) => cmd_cycles(&c),
        Command::GrdivClassify(c) => cmd_grdiv_classify(&c),
        Command::DgdivCheck(c) => cmd_dgdiv_check(&c),
        Command::Tensor(c) => cmd_tensor(&c),
        Command::Separable(c) => cmd_separable(&c),
        Command::MainTheorem(c) => cmd_main_theorem(&c),
        Command::SesSplit(a) => cmd_ses_split(&a),
        Command::LiftSplit(c) => cmd_lift_split(&c),
        Command::EquivalenceCheck(c) => cmd_equivalence_check(&c),
        Command::Demo(a) => cmd_demo(&a),
    }
}

/// What a description file or catalog name resolved to.
enum Input {
    Algebra(DgAlgebra),
    Extension(DgExtension),
    Module(DgModule),
    Ses {
        ses: ShortExactSequence,
        ext: Option<DgExtension>,
    },
}

fn load(common: &Common) -> Result<Input, Error> {
    match (&common.file, &common.demo) {
        (Some(_), Some(_)) => Err(Error::Format(
            "give either a description file or --demo, not both".into(),
        )),
        (None, None) => Err(Error::Format(
            "an input is required: a description file or --demo NAME".into(),
        )),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Format(format!("cannot read {}: {}", path.display(), e)))?;
            let value: Value = serde_json::from_str(&text)
                .map_err(|e| Error::Format(format!("{} is not JSON: {}", path.display(), e)))?;
            classify_document(&value)
        }
        (None, Some(words)) => {
            let name = words.join(" ");
            Ok(match demos::demo(&name)? {
                Demo::Algebra(a) => Input::Algebra(*a),
                Demo::Extension(e) => Input::Extension(*e),
                Demo::Ses { ext, ses } => Input::Ses {
                    ses: *ses,
                    ext: Some(*ext),
                },
            })
        }
    }
}

fn classify_document(v: &Value) -> Result<Input, Error> {
    if v.get("ses").is_some() || v.get("extension").is_some() {
        let ses = json::ses_from_value(
            v.get("ses")
                .ok_or_else(|| Error::Format("a combined document needs a 'ses' object".into()))?,
        )?;
        let ext = v
            .get("extension")
            .map(json::extension_from_value)
            .transpose()?;
        return Ok(Input::Ses { ses, ext });
    }
    if v.get("sub").is_some() {
        return Ok(Input::Ses {
            ses: json::ses_from_value(v)?,
            ext: None,
        });
    }
    if v.get("source").is_some() || v.get("target").is_some() || v.get("map").is_some() {
        return Ok(Input::Extension(json::extension_from_value(v)?));
    }
    if v.get("action").is_some() {
        return Ok(Input::Module(json::module_from_value(v)?));
    }
    if let Some(inner) = v.get("algebra") {
        // reports such as the cycles output wrap the algebra they describe
        return Ok(Input::Algebra(json::algebra_from_value(inner)?));
    }
    Ok(Input::Algebra(json::algebra_from_value(v)?))
}

impl Input {
    /// The algebra a structural command works on.
    fn algebra(&self) -> &DgAlgebra {
        match self {
            Input::Algebra(a) => a,
            Input::Extension(e) => &e.target,
            Input::Module(m) => &m.over,
            Input::Ses { ext: Some(e), .. } => &e.target,
            Input::Ses { ses, ext: None } => &ses.mid.over,
        }
    }

    fn extension(&self) -> Result<&DgExtension, Error> {
        match self {
            Input::Extension(e) => Ok(e),
            Input::Ses { ext: Some(e), .. } => Ok(e),
            _ => Err(Error::Format(
                "this command needs an extension description".into(),
            )),
        }
    }
}

fn window_arg(common: &Common) -> Result<Option<Window>, Error> {
    match &common.window {
        None => Ok(None),
        Some(bounds) => {
            let (lo, hi) = (bounds[0], bounds[1]);
            if lo > hi {
                return Err(Error::Format(format!(
                    "window bounds are out of order: {} > {}",
                    lo, hi
                )));
            }
            Ok(Some(Window::new(lo, hi)))
        }
    }
}

/// Print a line, exiting quietly if the consumer of a pipe went away.
fn print_line(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{}", text).is_err() {
        std::process::exit(0);
    }
}

fn emit(common_format: OutputFormat, value: Value, text: String) {
    match common_format {
        OutputFormat::Text => print_line(text.trim_end()),
        OutputFormat::Json => print_line(&serde_json::to_string_pretty(&value).unwrap()),
    }
}

fn report_value(report: &ValidationReport) -> Value {
    serde_json::to_value(report).unwrap()
}

fn infeasibility_value(inf: &Infeasibility) -> Value {
    json!({
        "unknowns": inf.unknowns,
        "equations": inf.equations,
        "rank": inf.rank,
        "augmented_rank": inf.augmented_rank,
        "witness_rows": inf.witness_rows.iter()
            .map(|(name, c)| json!([name, json::scalar_to_value(c)]))
            .collect::<Vec<_>>(),
    })
}

fn verdict_value(v: Verdict) -> Value {
    serde_json::to_value(v).unwrap()
}

/// Shared preamble: structural commands refuse unvalidated inputs.
fn ensure_valid_algebra(dg: &DgAlgebra) -> Result<(), Error> {
    let report = dg.validate();
    if !report.passed() {
        return Err(Error::Validation(format!(
            "the algebra does not validate: {}",
            report.first_failure().map(|c| c.name.as_str()).unwrap_or("")
        )));
    }
    Ok(())
}

fn ensure_valid_extension(ext: &DgExtension) -> Result<(), Error> {
    let report = ext.validate();
    if !report.passed() {
        return Err(Error::Validation(format!(
            "the extension does not validate: {}",
            report.first_failure().map(|c| c.name.as_str()).unwrap_or("")
        )));
    }
    Ok(())
}

fn ensure_valid_ses(ses: &ShortExactSequence) -> Result<(), Error> {
    let report = validate_ses(ses);
    if !report.passed() {
        return Err(Error::Validation(format!(
            "the short exact sequence does not validate: {}",
            report.first_failure().map(|c| c.name.as_str()).unwrap_or("")
        )));
    }
    Ok(())
}

fn cmd_validate(common: &Common) -> RunResult {
    let input = load(common)?;
    let (kind, report) = match &input {
        Input::Algebra(a) => ("algebra", a.validate()),
        Input::Extension(e) => ("extension", e.validate()),
        Input::Module(m) => ("module", m.validate()),
        Input::Ses { ses, ext } => {
            let mut report = ValidationReport::default();
            if let Some(e) = ext {
                report.merge(e.validate());
            }
            report.merge(validate_ses(ses));
            ("ses", report)
        }
    };
    let passed = report.passed();
    emit(
        common.format,
        json!({"command": "validate", "kind": kind, "passed": passed, "report": report_value(&report)}),
        format!("{}result: {}", report, if passed { "ok" } else { "FAIL" }),
    );
    Ok(if passed { 0 } else { 3 })
}

fn cmd_homology(common: &Common) -> RunResult {
    let input = load(common)?;
    let dg = input.algebra();
    ensure_valid_algebra(dg)?;
    let window = window_arg(common)?.unwrap_or_else(|| dg.default_window());
    let table = homology(dg, window);
    let mut text = String::new();
    for (n, dim) in &table.dims {
        text.push_str(&format!("H^{}: {}\n", n, dim));
    }
    text.push_str(&format!(
        "window: [{}, {}]\nacyclic on window: {}",
        table.window.lo, table.window.hi, table.acyclic_on_window
    ));
    emit(
        common.format,
        json!({
            "command": "homology",
            "window": [table.window.lo, table.window.hi],
            "dims": table.dims.iter().map(|(n, d)| json!([n, d])).collect::<Vec<_>>(),
            "acyclic_on_window": table.acyclic_on_window,
        }),
        text,
    );
    Ok(0)
}

fn cmd_cycles(common: &Common) -> RunResult {
    let input = load(common)?;
    let dg = input.algebra();
    ensure_valid_algebra(dg)?;
    let window = window_arg(common)?.unwrap_or_else(|| dg.default_window());
    let cyc = cycles(dg, window)?;
    let mut text = format!("cycle algebra on [{}, {}]:\n", window.lo, window.hi);
    for (i, label) in cyc.algebra.basis.labels.iter().enumerate() {
        text.push_str(&format!(
            "  {} (degree {}) = {}\n",
            label,
            cyc.algebra.basis.degrees[i],
            cyc.inclusion[i].render(dg.basis())
        ));
    }
    if let Some(p) = cyc.algebra.basis.period {
        text.push_str(&format!("periodicity unit degree: {}\n", p));
    }
    let zero_diff = DgAlgebra::zero_differential(cyc.algebra.clone());
    emit(
        common.format,
        json!({
            "command": "cycles",
            "window": [window.lo, window.hi],
            "algebra": json::algebra_to_value(&zero_diff),
            "inclusion": cyc.inclusion.iter().map(json::vector_to_value).collect::<Vec<_>>(),
        }),
        text,
    );
    Ok(0)
}

fn default_classification_window(dg: &DgAlgebra) -> Window {
    match dg.basis().period {
        Some(p) => Window::new(0, 2 * p.abs() - 1),
        None => dg.basis().support_window().union(Window::new(0, 0)),
    }
}

fn cmd_grdiv_classify(common: &Common) -> RunResult {
    let input = load(common)?;
    let dg = input.algebra();
    ensure_valid_algebra(dg)?;
    let window = window_arg(common)?.unwrap_or_else(|| default_classification_window(dg));
    let report = classify_gr_division(&dg.pres, window)?;
    let mut text = format!("class: {}\n", report.class);
    if let Some(g) = report.support_generator {
        text.push_str(&format!("support generator: {}\n", g));
    }
    text.push_str(&format!("degree-0 dimension: {}\n", report.degree_zero_dim));
    if !report.detail.is_empty() {
        text.push_str(&format!("detail: {}\n", report.detail));
    }
    emit(
        common.format,
        json!({
            "command": "grdiv-classify",
            "window": [window.lo, window.hi],
            "class": report.class.to_string(),
            "support_generator": report.support_generator,
            "degree_zero_dim": report.degree_zero_dim,
            "detail": report.detail,
        }),
        text,
    );
    Ok(0)
}

fn cmd_dgdiv_check(common: &Common) -> RunResult {
    let input = load(common)?;
    let dg = input.algebra();
    ensure_valid_algebra(dg)?;
    let report = is_dg_division(dg)?;
    let text = format!(
        "dg-division: {}\ncycle class: {}\nacyclic on window: {}\nzero differential: {}",
        report.is_division,
        report.cycles.class,
        report.acyclic_on_window,
        report.zero_differential
    );
    emit(
        common.format,
        json!({
            "command": "dgdiv-check",
            "is_division": report.is_division,
            "cycle_class": report.cycles.class.to_string(),
            "support_generator": report.cycles.support_generator,
            "acyclic_on_window": report.acyclic_on_window,
            "zero_differential": report.zero_differential,
        }),
        text,
    );
    Ok(0)
}

fn cmd_tensor(common: &Common) -> RunResult {
    let input = load(common)?;
    let ext = input.extension()?;
    ensure_valid_extension(ext)?;
    let tensor = tensor_over_source(ext)?;
    let report = tensor.validate()?;
    if !report.passed() {
        return Err(Error::Validation(format!(
            "tensor bimodule failed verification: {}",
            report.first_failure().map(|c| c.name.as_str()).unwrap_or("")
        )));
    }
    let window = match tensor.basis.period {
        Some(p) => Window::new(0, p.abs() - 1),
        None => tensor.basis.support_window(),
    };
    let mut text = format!("tensor bimodule on {} labels\n", tensor.basis.len());
    for n in window.iter() {
        let slots = tensor.basis.component(n);
        if slots.is_empty() {
            continue;
        }
        let names: Vec<String> = slots.iter().map(|s| tensor.basis.slot_name(*s)).collect();
        text.push_str(&format!("degree {}: {}\n", n, names.join(", ")));
    }
    text.push_str("validation: ok");
    emit(
        common.format,
        json!({
            "command": "tensor",
            "labels": tensor.basis.labels,
            "degrees": tensor.basis.degrees,
            "period": tensor.basis.period,
            "differential": tensor.diff.iter().map(json::vector_to_value).collect::<Vec<_>>(),
            "report": report_value(&report),
        }),
        text,
    );
    Ok(0)
}

fn cmd_separable(common: &Common) -> RunResult {
    let input = load(common)?;
    let ext = input.extension()?;
    ensure_valid_extension(ext)?;
    let tensor = tensor_over_source(ext)?;
    match find_casimir(ext)? {
        CasimirOutcome::Separable(cert) => {
            let text = format!(
                "verdict: {}\nomega = {}\nsolved {} equations in {} unknowns (rank {}, solution space dimension {})",
                Verdict::Separable,
                cert.omega.render(&tensor.basis),
                cert.equations,
                cert.unknowns,
                cert.rank,
                cert.solution_space_dim
            );
            emit(
                common.format,
                json!({
                    "command": "separable",
                    "verdict": verdict_value(Verdict::Separable),
                    "omega": json::vector_to_value(&cert.omega),
                    "unknowns": cert.unknowns,
                    "equations": cert.equations,
                    "rank": cert.rank,
                    "solution_space_dim": cert.solution_space_dim,
                }),
                text,
            );
        }
        CasimirOutcome::NotSeparable(inf) => {
            let text = format!(
                "verdict: {}\n{}\n{}",
                Verdict::NotSeparable,
                inf.summary(),
                inf.witness_summary(ext.field())
            );
            emit(
                common.format,
                json!({
                    "command": "separable",
                    "verdict": verdict_value(Verdict::NotSeparable),
                    "infeasibility": infeasibility_value(&inf),
                }),
                text,
            );
        }
    }
    Ok(0)
}

fn cmd_main_theorem(common: &Common) -> RunResult {
    let input = load(common)?;
    let ext = input.extension()?;
    ensure_valid_extension(ext)?;
    let report = check_main_theorem(ext)?;
    let mut text = format!(
        "characteristic: {}\nbranch: {}\npredicted: {}\ncomputed: {}\nmismatch: {}",
        report.characteristic, report.branch, report.predicted, report.computed, report.mismatch
    );
    for note in &report.notes {
        text.push_str(&format!("\nnote: {}", note));
    }
    emit(
        common.format,
        json!({
            "command": "main-theorem",
            "characteristic": report.characteristic,
            "branch": report.branch,
            "predicted": verdict_value(report.predicted),
            "computed": verdict_value(report.computed),
            "mismatch": report.mismatch,
            "notes": report.notes,
        }),
        text,
    );
    Ok(0)
}

fn split_payload(
    command: &str,
    base: &str,
    outcome: &SplitOutcome,
    mid_basis: &dgsep::graded::GradedBasis,
    quot_labels: &[String],
) -> (Value, String) {
    match outcome {
        SplitOutcome::Split(sigma) => {
            let mut text = format!("verdict: {}\nbase: {}", Verdict::Split, base);
            for (t, v) in sigma.iter().enumerate() {
                text.push_str(&format!(
                    "\nsigma({}) = {}",
                    quot_labels[t],
                    v.render(mid_basis)
                ));
            }
            (
                json!({
                    "command": command,
                    "base": base,
                    "verdict": verdict_value(Verdict::Split),
                    "sigma": sigma.iter().map(json::vector_to_value).collect::<Vec<_>>(),
                }),
                text,
            )
        }
        SplitOutcome::NotSplit(inf) => (
            json!({
                "command": command,
                "base": base,
                "verdict": verdict_value(Verdict::NotSplit),
                "infeasibility": infeasibility_value(inf),
            }),
            format!(
                "verdict: {}\nbase: {}\n{}",
                Verdict::NotSplit,
                base,
                inf.summary()
            ),
        ),
    }
}

fn cmd_ses_split(args: &SesSplitArgs) -> RunResult {
    let common = &args.common;
    let input = load(common)?;
    let (ses, ext) = match &input {
        Input::Ses { ses, ext } => (ses, ext.as_ref()),
        _ => {
            return Err(Error::Format(
                "ses-split needs a short exact sequence description".into(),
            ))
        }
    };
    ensure_valid_ses(ses)?;
    match args.base {
        SplitBase::Target => {
            let outcome = find_dg_splitting(ses)?;
            let (value, text) = split_payload(
                "ses-split",
                "target",
                &outcome,
                &ses.mid.basis,
                &ses.quot.basis.labels,
            );
            emit(common.format, value, text);
        }
        SplitBase::Source => {
            let ext = ext.ok_or_else(|| {
                Error::Format(
                    "splitting over the source needs an extension alongside the sequence".into(),
                )
            })?;
            ensure_valid_extension(ext)?;
            let rses = restrict_ses(ext, ses)?;
            ensure_valid_ses(&rses.ses)?;
            let outcome = find_dg_splitting(&rses.ses)?;
            let (value, text) = split_payload(
                "ses-split",
                "source",
                &outcome,
                &rses.ses.mid.basis,
                &rses.ses.quot.basis.labels,
            );
            emit(common.format, value, text);
        }
    }
    Ok(0)
}

fn cmd_lift_split(common: &Common) -> RunResult {
    let input = load(common)?;
    let (ses, ext) = match &input {
        Input::Ses { ses, ext } => (ses, ext.as_ref()),
        _ => {
            return Err(Error::Format(
                "lift-split needs a short exact sequence description".into(),
            ))
        }
    };
    let ext = ext.ok_or_else(|| {
        Error::Format("lift-split needs an extension alongside the sequence".into())
    })?;
    ensure_valid_extension(ext)?;
    ensure_valid_ses(ses)?;

    let cert = match find_casimir(ext)? {
        CasimirOutcome::Separable(cert) => cert,
        CasimirOutcome::NotSeparable(inf) => {
            emit(
                common.format,
                json!({
                    "command": "lift-split",
                    "verdict": verdict_value(Verdict::NotSeparable),
                    "infeasibility": infeasibility_value(&inf),
                }),
                format!(
                    "verdict: {}\nthe extension is not separable, so no transfer is available\n{}",
                    Verdict::NotSeparable,
                    inf.summary()
                ),
            );
            return Ok(0);
        }
    };

    let rses = restrict_ses(ext, ses)?;
    ensure_valid_ses(&rses.ses)?;
    let rho = match find_dg_splitting(&rses.ses)? {
        SplitOutcome::Split(rho) => rho,
        SplitOutcome::NotSplit(inf) => {
            emit(
                common.format,
                json!({
                    "command": "lift-split",
                    "verdict": verdict_value(Verdict::NotSplit),
                    "base": "source",
                    "infeasibility": infeasibility_value(&inf),
                }),
                format!(
                    "verdict: {}\nno splitting over the source, nothing to lift\n{}",
                    Verdict::NotSplit,
                    inf.summary()
                ),
            );
            return Ok(0);
        }
    };

    let tau = lift_splitting(ext, ses, &rses, &rho, &cert.omega)?;
    let mut text = format!(
        "verdict: {}\nlifted through omega; the section verifies over the target",
        Verdict::Split
    );
    for (t, v) in tau.iter().enumerate() {
        text.push_str(&format!(
            "\ntau({}) = {}",
            ses.quot.basis.labels[t],
            v.render(&ses.mid.basis)
        ));
    }
    emit(
        common.format,
        json!({
            "command": "lift-split",
            "verdict": verdict_value(Verdict::Split),
            "omega": json::vector_to_value(&cert.omega),
            "rho": rho.iter().map(json::vector_to_value).collect::<Vec<_>>(),
            "tau": tau.iter().map(json::vector_to_value).collect::<Vec<_>>(),
        }),
        text,
    );
    Ok(0)
}

fn cmd_equivalence_check(common: &Common) -> RunResult {
    let input = load(common)?;
    let dg = input.algebra();
    ensure_valid_algebra(dg)?;
    let cyc = cycles(dg, dg.default_window())?;
    let base = DgAlgebra::zero_differential(cyc.algebra.clone());
    let rounds = 5u64;
    let mut lines = Vec::new();
    let mut results = Vec::new();
    for i in 0..rounds {
        let seed = common.seed.wrapping_add(i);
        let n = random_graded_module(&base, seed, 3, (-2, 2))?;
        let induced = induce_from_cycles(dg, &cyc, &n)?;
        let report = induced.validate();
        if !report.passed() {
            return Err(Error::Validation(format!(
                "induced module failed validation at seed {}: {}",
                seed,
                report.first_failure().map(|c| c.name.as_str()).unwrap_or("")
            )));
        }
        let back = cycles_module(&induced, &cyc)?;
        let iso = find_module_isomorphism(&n, &back.module, seed)?;
        let ok = iso.is_some();
        lines.push(format!(
            "seed {}: {} generators, isomorphism {}",
            seed,
            n.basis.len(),
            if ok { "verified" } else { "NOT FOUND" }
        ));
        results.push(json!({"seed": seed, "generators": n.basis.len(), "verified": ok}));
        if !ok {
            emit(
                common.format,
                json!({"command": "equivalence-check", "rounds": results, "passed": false}),
                lines.join("\n"),
            );
            return Err(Error::Validation(
                "round trip through induction and cycles lost the module".into(),
            ));
        }
    }
    lines.push(format!("all {} round trips verified", rounds));
    emit(
        common.format,
        json!({"command": "equivalence-check", "rounds": results, "passed": true}),
        lines.join("\n"),
    );
    Ok(0)
}

fn cmd_demo(args: &DemoArgs) -> RunResult {
    if args.name.is_empty() {
        let entries = demos::demo_entries();
        match args.format {
            OutputFormat::Text => {
                for e in &entries {
                    print_line(&format!("{:<36} [{}] {}", e.name, e.kind, e.summary));
                }
            }
            OutputFormat::Json => {
                let list: Vec<Value> = entries
                    .iter()
                    .map(|e| json!({"name": e.name, "kind": e.kind, "summary": e.summary}))
                    .collect();
                print_line(&serde_json::to_string_pretty(&list).unwrap());
            }
        }
        return Ok(0);
    }
    let name = args.name.join(" ");
    let value = match demos::demo(&name)? {
        Demo::Algebra(a) => json::algebra_to_value(&a),
        Demo::Extension(e) => json::extension_to_value(&e),
        Demo::Ses { ext, ses } => json!({
            "extension": json::extension_to_value(&ext),
            "ses": json::ses_to_value(&ses),
        }),
    };
    print_line(&serde_json::to_string_pretty(&value).unwrap());
    Ok(0)
}
