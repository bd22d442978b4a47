//! Command-line front end: certified bounds, closed formulas, the example
//! family, and the self-test suites, with exact machine-readable output.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 positivity violated,
//! 4 internal consistency failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use simplex_bound::bounds::{
    closed_form_full, closed_form_interior, closed_form_simplified, example_family,
    family_minimum_upper_bound, family_witness_point, CertifyOptions, ClosedFormParams,
};
use simplex_bound::charpoly::interior_pipeline;
use simplex_bound::selftest::{run_selftest, SelfTestScale};
use simplex_bound::{
    certified_lower_bound, grid_min, parse_poly, BoundReport, ContributionKind, Error, GridSpec,
    MultiPoly, Rational, DEFAULT_DIM_CAP,
};

const SCHEMA_VERSION: &str = "1.0";

const EXIT_USAGE: u8 = 2;
const EXIT_POSITIVITY: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(
    name = "simplex-bound",
    version,
    about = "Certified rational lower bounds for integer polynomials positive on the standard simplex"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certified global lower bound for a polynomial positive on the simplex
    Bound {
        /// Polynomial text, e.g. "2*X1^2 - 2*X1 + 1"
        poly: Option<String>,
        /// Read the polynomial from a UTF-8 file instead
        #[arg(long)]
        file: Option<PathBuf>,
        /// Fix the variable count (defaults to the largest index mentioned)
        #[arg(long)]
        nvars: Option<usize>,
        /// Cross-check against the exact grid oracle with this denominator
        #[arg(long, value_name = "N")]
        verify: Option<u64>,
        /// Cap on the quotient dimension d^k
        #[arg(long, default_value_t = DEFAULT_DIM_CAP, value_name = "CAP")]
        max_dim: u64,
        /// Interior bound only, skipping the face recursion (study mode)
        #[arg(long)]
        no_face_recursion: bool,
        /// Machine-readable JSON output
        #[arg(long)]
        json: bool,
    },
    /// Closed-form bound in (k, d, tau) only
    Formula {
        k: usize,
        d: usize,
        tau: u32,
        /// One of: full, simplified, interior
        variant: String,
        #[arg(long)]
        json: bool,
    },
    /// The doubly exponential example family and its minimum's upper bound
    Example {
        k: usize,
        d: usize,
        tau: u32,
        #[arg(long)]
        json: bool,
    },
    /// Run the invariant suites
    Selftest {
        /// One of: quick, full
        scale: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Serialize)]
struct RationalJson {
    num: String,
    den: String,
}

impl From<&Rational> for RationalJson {
    fn from(r: &Rational) -> Self {
        RationalJson { num: r.numer().to_string(), den: r.denom().to_string() }
    }
}

fn opt_rational(r: &Option<Rational>) -> Option<RationalJson> {
    r.as_ref().map(RationalJson::from)
}

#[derive(Serialize)]
struct OutputRecord<I: Serialize, R: Serialize> {
    schema_version: &'static str,
    command: &'static str,
    inputs: I,
    results: R,
    diagnostics: Vec<String>,
}

fn emit<I: Serialize, R: Serialize>(record: &OutputRecord<I, R>) {
    let text = serde_json::to_string_pretty(record).expect("serializable record");
    println!("{text}");
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::SyntaxError { .. }
        | Error::NonIntegerCoefficient { .. }
        | Error::ParityViolation { .. }
        | Error::SizeOverflow { .. } => EXIT_USAGE,
        Error::PositivityViolated(_) => EXIT_POSITIVITY,
        _ => EXIT_INTERNAL,
    }
}

fn fail(err: &Error) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(exit_code_for(err))
}

fn usage_error(message: &str) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_USAGE)
}

// --- bound -------------------------------------------------------------

#[derive(Serialize)]
struct BoundInputs {
    polynomial: String,
    nvars: Option<usize>,
    verify: Option<u64>,
    max_dim: u64,
    no_face_recursion: bool,
}

#[derive(Serialize)]
struct InstanceJson {
    polynomial: String,
    k: usize,
    d: usize,
    tau: u32,
}

#[derive(Serialize)]
struct FaceJson {
    zeroed: Vec<usize>,
    hyperplane_applied: Vec<usize>,
    dimension: usize,
}

#[derive(Serialize)]
struct ContributionJson {
    face: FaceJson,
    kind: &'static str,
    value: Option<RationalJson>,
}

#[derive(Serialize)]
struct GridJson {
    denominator: u64,
    value: RationalJson,
    argmin: Vec<RationalJson>,
    bound_is_sound: bool,
}

#[derive(Serialize)]
struct BoundResults {
    instance: InstanceJson,
    global_bound: RationalJson,
    contributions: Vec<ContributionJson>,
    closed_form_full: Option<RationalJson>,
    closed_form_simplified: Option<RationalJson>,
    grid: Option<GridJson>,
}

fn load_poly(
    poly: Option<String>,
    file: Option<PathBuf>,
    nvars: Option<usize>,
) -> Result<(MultiPoly, String), ExitCode> {
    let text = match (poly, file) {
        (Some(t), None) => t,
        (None, Some(path)) => match std::fs::read_to_string(&path) {
            Ok(t) => t.trim().to_string(),
            Err(e) => return Err(usage_error(&format!("cannot read {}: {e}", path.display()))),
        },
        (Some(_), Some(_)) => {
            return Err(usage_error("give the polynomial either inline or via --file, not both"))
        }
        (None, None) => return Err(usage_error("missing polynomial (inline or --file)")),
    };
    match parse_poly(&text, nvars) {
        Ok(p) => Ok((p, text)),
        Err(e) => Err(fail(&e)),
    }
}

fn kind_name(kind: ContributionKind) -> &'static str {
    match kind {
        ContributionKind::Interior => "interior",
        ContributionKind::VertexConstant => "vertex-constant",
    }
}

fn run_bound(
    poly: Option<String>,
    file: Option<PathBuf>,
    nvars: Option<usize>,
    verify: Option<u64>,
    max_dim: u64,
    no_face_recursion: bool,
    json: bool,
) -> ExitCode {
    let (parsed, text) = match load_poly(poly, file, nvars) {
        Ok(p) => p,
        Err(code) => return code,
    };
    if no_face_recursion {
        return run_interior_only(&parsed, &text, nvars, max_dim, json);
    }

    let options = CertifyOptions { max_dim, face_recursion: true };
    let report = match certified_lower_bound(&parsed, &options) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };

    let mut diagnostics = report.diagnostics.clone();
    let grid = match run_grid(&parsed, verify, &report, &mut diagnostics) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let sound = grid.as_ref().is_none_or(|g| g.bound_is_sound);

    if json {
        emit(&OutputRecord {
            schema_version: SCHEMA_VERSION,
            command: "bound",
            inputs: BoundInputs {
                polynomial: text,
                nvars,
                verify,
                max_dim,
                no_face_recursion: false,
            },
            results: bound_results(&report, grid),
            diagnostics,
        });
    } else {
        println!("polynomial: {}", report.instance.poly);
        println!(
            "instance: k={} d={} tau={}",
            report.instance.k, report.instance.d, report.instance.tau
        );
        println!("global_bound: {}", report.global_bound);
        match (&report.closed_form_full, &report.closed_form_simplified) {
            (Some(full), Some(simpl)) => {
                println!("closed_form_full: {full}");
                println!("closed_form_simplified: {simpl}");
            }
            _ => println!("closed_form_full: n/a (degenerate instance)"),
        }
        println!("contributions:");
        for c in &report.contributions {
            let value = match &c.value {
                Some(v) => v.to_string(),
                None => "none".to_string(),
            };
            println!(
                "  {} dim={} zeroed={:?} hyperplane={:?} -> {}",
                kind_name(c.kind),
                c.face.dimension,
                c.face.zeroed,
                c.face.hyperplane_applied,
                value
            );
        }
        if let Some(g) = &grid {
            let argmin: Vec<String> = g.argmin.iter().map(|r| format!("{}/{}", r.num, r.den)).collect();
            println!(
                "grid(N={}): {}/{} at [{}]; soundness: {}",
                g.denominator,
                g.value.num,
                g.value.den,
                argmin.join(", "),
                if g.bound_is_sound { "ok" } else { "VIOLATED" }
            );
        }
        for d in &diagnostics {
            println!("diagnostic: {d}");
        }
    }

    if !sound {
        eprintln!("error: certified bound exceeds the grid oracle value");
        return ExitCode::from(EXIT_INTERNAL);
    }
    ExitCode::SUCCESS
}

fn run_grid(
    poly: &MultiPoly,
    verify: Option<u64>,
    report: &BoundReport,
    diagnostics: &mut Vec<String>,
) -> Result<Option<GridJson>, ExitCode> {
    let Some(n) = verify else { return Ok(None) };
    if n == 0 {
        return Err(usage_error("--verify needs a positive denominator"));
    }
    let (value, argmin) = match grid_min(poly, &GridSpec::new(poly.nvars(), n)) {
        Ok(v) => v,
        Err(e) => return Err(fail(&e)),
    };
    if value <= Rational::from_integer(0.into()) {
        let err = Error::PositivityViolated(format!(
            "grid sample at denominator {n} has non-positive value {value}"
        ));
        return Err(fail(&err));
    }
    let sound = report.global_bound <= value;
    if !sound {
        diagnostics.push(format!(
            "grid oracle value {value} at denominator {n} lies below the certified bound"
        ));
    }
    Ok(Some(GridJson {
        denominator: n,
        value: RationalJson::from(&value),
        argmin: argmin.iter().map(RationalJson::from).collect(),
        bound_is_sound: sound,
    }))
}

fn bound_results(report: &BoundReport, grid: Option<GridJson>) -> BoundResults {
    BoundResults {
        instance: InstanceJson {
            polynomial: report.instance.poly.to_string(),
            k: report.instance.k,
            d: report.instance.d,
            tau: report.instance.tau,
        },
        global_bound: RationalJson::from(&report.global_bound),
        contributions: report
            .contributions
            .iter()
            .map(|c| ContributionJson {
                face: FaceJson {
                    zeroed: c.face.zeroed.clone(),
                    hyperplane_applied: c.face.hyperplane_applied.clone(),
                    dimension: c.face.dimension,
                },
                kind: kind_name(c.kind),
                value: opt_rational(&c.value),
            })
            .collect(),
        closed_form_full: opt_rational(&report.closed_form_full),
        closed_form_simplified: opt_rational(&report.closed_form_simplified),
        grid,
    }
}

#[derive(Serialize)]
struct InteriorResults {
    instance: InstanceJson,
    interior_bound: Option<RationalJson>,
    cauchy_bound: Option<RationalJson>,
    l0: usize,
    h1: usize,
    s0_coefficients: Vec<String>,
}

fn run_interior_only(
    poly: &MultiPoly,
    text: &str,
    nvars: Option<usize>,
    max_dim: u64,
    json: bool,
) -> ExitCode {
    if poly.total_degree() < 2 {
        return usage_error("--no-face-recursion needs a polynomial of total degree >= 2");
    }
    let data = match interior_pipeline(poly, max_dim) {
        Ok(d) => d,
        Err(e) => return fail(&e),
    };
    if json {
        emit(&OutputRecord {
            schema_version: SCHEMA_VERSION,
            command: "bound",
            inputs: BoundInputs {
                polynomial: text.to_string(),
                nvars,
                verify: None,
                max_dim,
                no_face_recursion: true,
            },
            results: InteriorResults {
                instance: InstanceJson {
                    polynomial: data.instance.poly.to_string(),
                    k: data.instance.k,
                    d: data.instance.d,
                    tau: data.instance.tau,
                },
                interior_bound: opt_rational(&data.bound),
                cauchy_bound: opt_rational(&data.cauchy),
                l0: data.charpoly.l0,
                h1: data.charpoly.h1,
                s0_coefficients: data.charpoly.s0.iter().map(|c| c.to_string()).collect(),
            },
            diagnostics: Vec::new(),
        });
    } else {
        println!("polynomial: {}", data.instance.poly);
        println!(
            "instance: k={} d={} tau={}",
            data.instance.k, data.instance.d, data.instance.tau
        );
        match &data.bound {
            Some(b) => println!("interior_bound: {b}"),
            None => println!("interior_bound: none (no interior constraint)"),
        }
        match &data.cauchy {
            Some(c) => println!("cauchy_bound: {c}"),
            None => println!("cauchy_bound: none"),
        }
        println!("l0: {}", data.charpoly.l0);
        println!("h1: {}", data.charpoly.h1);
        let s0: Vec<String> = data.charpoly.s0.iter().map(|c| c.to_string()).collect();
        println!("s0_coefficients: [{}]", s0.join(", "));
    }
    ExitCode::SUCCESS
}

// --- formula -----------------------------------------------------------

#[derive(Serialize)]
struct FormulaInputs {
    k: usize,
    d: usize,
    tau: u32,
    variant: String,
}

#[derive(Serialize)]
struct FormulaResults {
    value: RationalJson,
}

fn run_formula(k: usize, d: usize, tau: u32, variant: &str, json: bool) -> ExitCode {
    if k == 0 || d == 0 || tau == 0 {
        return usage_error("formula needs k, d, tau >= 1");
    }
    let params = ClosedFormParams::new(k, d, tau);
    let value = match variant {
        "full" => closed_form_full(&params),
        "simplified" => closed_form_simplified(&params),
        "interior" => closed_form_interior(&params),
        other => return usage_error(&format!("unknown variant '{other}'")),
    };
    if json {
        emit(&OutputRecord {
            schema_version: SCHEMA_VERSION,
            command: "formula",
            inputs: FormulaInputs { k, d, tau, variant: variant.to_string() },
            results: FormulaResults { value: RationalJson::from(&value) },
            diagnostics: Vec::new(),
        });
    } else {
        println!("formula({k}, {d}, {tau}, {variant}) = {value}");
    }
    ExitCode::SUCCESS
}

// --- example -----------------------------------------------------------

#[derive(Serialize)]
struct ExampleInputs {
    k: usize,
    d: usize,
    tau: u32,
}

#[derive(Serialize)]
struct ExampleResults {
    polynomial: String,
    minimum_upper_bound: RationalJson,
    witness_point: Vec<RationalJson>,
}

fn run_example(k: usize, d: usize, tau: u32, json: bool) -> ExitCode {
    if k == 0 {
        return usage_error("example needs k >= 1");
    }
    let poly = match example_family(k, d, tau) {
        Ok(p) => p,
        Err(e) => return fail(&e),
    };
    let upper = family_minimum_upper_bound(k, d, tau);
    let witness = family_witness_point(k, d, tau);
    if json {
        emit(&OutputRecord {
            schema_version: SCHEMA_VERSION,
            command: "example",
            inputs: ExampleInputs { k, d, tau },
            results: ExampleResults {
                polynomial: poly.to_string(),
                minimum_upper_bound: RationalJson::from(&upper),
                witness_point: witness.iter().map(RationalJson::from).collect(),
            },
            diagnostics: Vec::new(),
        });
    } else {
        println!("polynomial: {poly}");
        println!("minimum_upper_bound: {upper}");
        let w: Vec<String> = witness.iter().map(|r| r.to_string()).collect();
        println!("witness_point: [{}]", w.join(", "));
    }
    ExitCode::SUCCESS
}

// --- selftest ----------------------------------------------------------

#[derive(Serialize)]
struct SelftestInputs {
    scale: String,
}

#[derive(Serialize)]
struct SuiteJson {
    name: String,
    checked: usize,
    failed: usize,
    failures: Vec<String>,
}

#[derive(Serialize)]
struct SelftestResults {
    suites: Vec<SuiteJson>,
    all_passed: bool,
}

fn run_selftest_cmd(scale: &str, json: bool) -> ExitCode {
    let parsed = match scale {
        "quick" => SelfTestScale::Quick,
        "full" => SelfTestScale::Full,
        other => return usage_error(&format!("unknown scale '{other}' (use quick or full)")),
    };
    let outcomes = run_selftest(parsed);
    let all_passed = outcomes.iter().all(|o| o.passed());
    if json {
        emit(&OutputRecord {
            schema_version: SCHEMA_VERSION,
            command: "selftest",
            inputs: SelftestInputs { scale: scale.to_string() },
            results: SelftestResults {
                suites: outcomes
                    .iter()
                    .map(|o| SuiteJson {
                        name: o.name.clone(),
                        checked: o.checked,
                        failed: o.failures.len(),
                        failures: o.failures.clone(),
                    })
                    .collect(),
                all_passed,
            },
            diagnostics: Vec::new(),
        });
    } else {
        for o in &outcomes {
            let status = if o.passed() { "pass" } else { "FAIL" };
            println!("{status} {} ({} checks, {} failures)", o.name, o.checked, o.failures.len());
            for f in &o.failures {
                println!("  failure: {f}");
            }
        }
        println!("{}", if all_passed { "all suites passed" } else { "some suites FAILED" });
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_INTERNAL)
    }
}

fn main() -> ExitCode {
    // Die quietly when the consumer closes the pipe (e.g. `... | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match cli.command {
        Command::Bound { poly, file, nvars, verify, max_dim, no_face_recursion, json } => {
            run_bound(poly, file, nvars, verify, max_dim, no_face_recursion, json)
        }
        Command::Formula { k, d, tau, variant, json } => run_formula(k, d, tau, &variant, json),
        Command::Example { k, d, tau, json } => run_example(k, d, tau, json),
        Command::Selftest { scale, json } => run_selftest_cmd(&scale, json),
    }
}
