//! `lorentz3`: reports, classification, catalog browsing and grid
//! verification for left-invariant Lorentzian metrics on 3D unimodular
//! Lie groups.

use clap::{Args, Parser, Subcommand};
use lorentz3::catalog::{
    classify_metric_with, verify_all, FamilyInfo, VerifyReport, WitnessStatus,
};
use lorentz3::report::{parse_params, parse_rows, MetricFile, MetricInput, OrientationChoice};
use lorentz3::{
    build_report, Error, FamilyId, FamilyParams, GroupId, MetricForm, SymForm3, DEFAULT_TOL,
};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_VERIFY: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_METRIC: u8 = 3;
const EXIT_ALGEBRA: u8 = 4;

#[derive(Parser)]
#[command(
    name = "lorentz3",
    version,
    about = "Left-invariant Lorentzian metrics on 3D unimodular Lie groups"
)]
struct Cli {
    /// Relative tolerance for all numerical decisions.
    #[arg(long, global = true, env = "LORENTZ3_TOL", default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline for one metric, as JSON.
    Report {
        #[command(flatten)]
        input: InputArgs,
        /// Append the wall-clock time to the document.
        #[arg(long)]
        timing: bool,
    },
    /// Identify the catalog family and parameters of a metric.
    Classify {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        json: bool,
    },
    /// Check the catalog families on parameter grids.
    Verify {
        #[arg(long, conflicts_with = "family")]
        all: bool,
        /// Family to verify; may be repeated.
        #[arg(long)]
        family: Vec<String>,
        /// Grid points per parameter axis.
        #[arg(long, default_value_t = 5)]
        grid: usize,
        #[arg(long)]
        json: bool,
        /// Also fail when an unflagged witness map fails.
        #[arg(long)]
        strict_witnesses: bool,
    },
    /// List the families or show one.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
        #[arg(long, global = true)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Show { family: String },
}

#[derive(Args)]
struct InputArgs {
    /// Model group: nil, su2, sl2, sol, e2.
    #[arg(long, requires = "metric", conflicts_with_all = ["family", "input"])]
    group: Option<String>,
    /// Metric matrix in the model basis, rows separated by ';'.
    #[arg(long, allow_hyphen_values = true)]
    metric: Option<String>,
    /// Catalog family, e.g. n1, sol03, sl2azz+.
    #[arg(long, conflicts_with = "input")]
    family: Option<String>,
    /// Family parameters, comma separated.
    #[arg(long, requires = "family", allow_hyphen_values = true)]
    params: Option<String>,
    /// JSON file with "metric" and either "group" or "brackets".
    #[arg(long)]
    input: Option<PathBuf>,
    /// Orientation used for the Milnor operator: +, - or auto.
    #[arg(long, default_value = "auto", allow_hyphen_values = true)]
    orientation: String,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::Arity { .. } | Error::Domain { .. } => EXIT_PARSE,
            Error::NotLorentzian(_) | Error::NonFinite | Error::Singular => EXIT_METRIC,
            Error::InvalidAlgebra(_)
            | Error::UnknownGroup(_)
            | Error::NearBoundary { .. }
            | Error::NotSelfAdjoint(_) => EXIT_ALGEBRA,
            Error::DegenerateFrame(_) | Error::Classification(_) => EXIT_VERIFY,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn parse_failure(message: String) -> Failure {
    Failure {
        code: EXIT_PARSE,
        message,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(parse_failure(format!(
            "tolerance must be positive, got {}",
            cli.tol
        )));
    }
    match cli.command {
        Command::Report { input, timing } => {
            let orientation: OrientationChoice = input.orientation.parse()?;
            let doc = build_report(&resolve(&input)?, cli.tol, orientation, timing)?;
            println!("{}", doc.to_json());
            for w in &doc.warnings {
                eprintln!("warning: {w}");
            }
            Ok(0)
        }
        Command::Classify { input, json } => classify(&input, cli.tol, json),
        Command::Verify {
            all,
            family,
            grid,
            json,
            strict_witnesses,
        } => verify(all, &family, grid, cli.tol, json, strict_witnesses),
        Command::Catalog { action, json } => catalog(action, json),
    }
}

fn resolve(a: &InputArgs) -> Result<MetricInput, Failure> {
    if let Some(path) = &a.input {
        let text = std::fs::read_to_string(path)
            .map_err(|e| parse_failure(format!("{}: {e}", path.display())))?;
        let file: MetricFile = serde_json::from_str(&text)
            .map_err(|e| parse_failure(format!("{}: {e}", path.display())))?;
        return Ok(MetricInput::from_file(&file)?);
    }
    if let Some(f) = &a.family {
        let id: FamilyId = f.parse()?;
        let values = match &a.params {
            Some(p) => parse_params(p)?,
            None => Vec::new(),
        };
        return Ok(MetricInput::family(FamilyParams::new(id, &values)?)?);
    }
    match (&a.group, &a.metric) {
        (Some(g), Some(m)) => {
            let group: GroupId = g.parse()?;
            Ok(MetricInput::model(group, parse_rows(m)?))
        }
        _ => Err(parse_failure(
            "give --group with --metric, --family [--params], or --input".into(),
        )),
    }
}

fn classify(a: &InputArgs, tol: f64, json: bool) -> Result<u8, Failure> {
    let orientation: OrientationChoice = a.orientation.parse()?;
    let input = resolve(a)?;
    let g = MetricForm::with_tol(
        SymForm3::from_lower(&lorentz3::linalg::from_rows(&input.rows)),
        tol,
    )?;
    let c = classify_metric_with(&input.algebra, &g, tol, orientation.restriction())?;
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&c).expect("finite classification")
        );
    } else {
        println!("{} {}", c.family.name(), c.params.display());
    }
    for w in &c.warnings {
        eprintln!("warning: {w}");
    }
    Ok(0)
}

fn verify(
    all: bool,
    names: &[String],
    grid: usize,
    tol: f64,
    json: bool,
    strict: bool,
) -> Result<u8, Failure> {
    if grid < 2 {
        return Err(parse_failure(format!(
            "--grid must be at least 2, got {grid}"
        )));
    }
    if !all && names.is_empty() {
        return Err(parse_failure("give --all or at least one --family".into()));
    }
    let families = names
        .iter()
        .map(|n| n.parse::<FamilyId>())
        .collect::<Result<Vec<_>, _>>()?;
    let report = verify_all(&families, grid, tol);
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("finite summary")
        );
    } else {
        print_verify(&report);
    }
    let ok = report.pass() && (!strict || report.witnesses_pass());
    Ok(if ok { 0 } else { EXIT_VERIFY })
}

fn print_verify(r: &VerifyReport) {
    println!(
        "grid {} per axis, tol {:e}, {} evaluations",
        r.grid, r.tol, r.evaluations
    );
    println!(
        "{:<10} {:>8} {:>8}  {:<6} worst (deviation/limit)",
        "family", "samples", "passed", "status"
    );
    for s in &r.families {
        let (item, worst) = s.worst.iter().fold(("-", 0.0_f64), |acc, (k, v)| {
            if *v > acc.1 {
                (k.as_str(), *v)
            } else {
                acc
            }
        });
        println!(
            "{:<10} {:>8} {:>8}  {:<6} {:.2e} ({item})",
            s.family.name(),
            s.samples,
            s.passed,
            if s.pass() { "PASS" } else { "FAIL" },
            worst
        );
        if r.families.len() < FamilyId::ALL.len() {
            println!("    checks: {}", s.checks.join(", "));
            println!("    ricci operator types: {}", s.ricci_types.join(", "));
        }
        for f in &s.failures {
            println!("    failure: {f}");
        }
        for n in &s.notes {
            println!("    ambiguous: {n}");
        }
    }
    println!();
    println!("witness maps:");
    for s in &r.families {
        for w in &s.witness_cases {
            let status = match w.status {
                WitnessStatus::Pass => "pass",
                WitnessStatus::Fail => "FAIL",
                WitnessStatus::Flagged => "flagged",
            };
            println!(
                "  {:<10} {:<8} {:<55} worst {:.2e} over {} samples",
                s.family.name(),
                status,
                w.case,
                w.worst_deviation,
                w.samples
            );
            if let Some(n) = &w.note {
                println!("             {n}");
            }
        }
    }
    println!();
    println!(
        "catalog checks: {}; witness maps: {}",
        if r.pass() { "PASS" } else { "FAIL" },
        if r.witnesses_pass() {
            "all pass"
        } else {
            "some unflagged maps fail"
        }
    );
}

fn catalog(action: CatalogAction, json: bool) -> Result<u8, Failure> {
    match action {
        CatalogAction::List => {
            let infos: Vec<&FamilyInfo> = FamilyId::ALL.iter().map(|f| f.info()).collect();
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&infos).expect("static data")
                );
            } else {
                for i in infos {
                    println!(
                        "{:<10} {:<7} {} {:<20} {}",
                        i.name,
                        i.group.name(),
                        i.params.len(),
                        i.symbols.join(","),
                        i.domain
                    );
                }
            }
        }
        CatalogAction::Show { family } => {
            let id: FamilyId = family.parse()?;
            let i = id.info();
            if json {
                println!("{}", serde_json::to_string_pretty(i).expect("static data"));
            } else {
                println!("family:   {}", i.name);
                println!("group:    {}", i.group.name());
                println!(
                    "params:   {}",
                    if i.symbols.is_empty() {
                        "none".to_string()
                    } else {
                        i.symbols.join(", ")
                    }
                );
                println!(
                    "domain:   {}",
                    if i.domain.is_empty() { "-" } else { i.domain }
                );
                println!("operator: {}", i.operator_type);
                if id.arity() == 0 {
                    let doc = build_report(
                        &MetricInput::family(FamilyParams::new(id, &[])?)?,
                        DEFAULT_TOL,
                        OrientationChoice::Auto,
                        false,
                    )?;
                    println!("flat:     {}", doc.properties.flat);
                }
            }
        }
    }
    Ok(0)
}
