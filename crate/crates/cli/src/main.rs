//! `bicubic`: positive-real checks, five-element and Bott-Duffin synthesis,
//! netlist verification and quarter-car controller design.
//!
//! Exit codes: 0 success, 1 not positive-real, 2 malformed input, 3 not
//! realizable (or no feasible design), 4 internal verification failure.

mod input;
mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use bicubic_core::network::sampled_mismatch;
use bicubic_core::suspension::{
    improvement_percent, optimize_controller, ride_comfort, sweep_ks, Case, OptimizeOptions, OptimizeResult,
    PlantParams,
};
use bicubic_core::{
    bott_duffin_traced, classify_boundary, derived_quantities, impedance_of, positive_real_check_within, realize_boundary,
    synthesize_five, Error, Netlist, NetlistJson, RationalFunction, Realization, Tolerances,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use input::{read_netlist, ImpedanceArgs};
use output::{num, nums};

#[derive(Debug, Parser)]
#[command(name = "bicubic", version, about = "Bicubic impedance synthesis and suspension design")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Margin for realizability equalities and inequalities.
    #[arg(long, global = true)]
    tol_cond: Option<f64>,
    /// Relative mismatch allowed when checking a netlist against its target.
    #[arg(long, global = true)]
    tol_verify: Option<f64>,
    /// Snap near-realizable impedances onto a configuration by least squares.
    #[arg(long, global = true)]
    project: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 32)]
    restarts: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Static suspension stiffness in N/m; a comma separated grid for `sweep`.
    #[arg(long, global = true, value_delimiter = ',')]
    ks: Vec<f64>,
    #[arg(long, global = true, value_enum, ignore_case = true)]
    case: Option<CaseArg>,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CaseArg {
    A,
    B,
    Both,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Positive-real certificate for a bicubic impedance.
    Check(ImpedanceArgs),
    /// Every five-element realization (or a boundary-case network).
    Synth(ImpedanceArgs),
    /// Compare a netlist's impedance with a target.
    Verify {
        netlist: PathBuf,
        #[command(flatten)]
        target: ImpedanceArgs,
    },
    /// General realization by the Bott-Duffin procedure.
    Bottduffin(ImpedanceArgs),
    /// Ride comfort J1 for the given impedance used as controller.
    SuspensionEval(ImpedanceArgs),
    /// Optimize the controller; an impedance argument is used as warm start.
    SuspensionOpt(ImpedanceArgs),
    /// Optimize over a grid of static stiffnesses.
    Sweep,
}

/// A report that could not be produced, with the exit code to use.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn malformed(message: String) -> Self {
        Failure { code: 2, message }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::NotPositiveReal(_) => 1,
            Error::NotInterior | Error::Unhandled(_) | Error::UnsupportedMultiplicity => 3,
            Error::Unstable(_) | Error::Infeasible(_) | Error::ImproperController => 3,
            Error::VerificationFailed { .. } | Error::Singular(_) | Error::MinimumSearch(_) => 4,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// A finished report and its exit code.
struct Report {
    code: u8,
    json: Value,
    table: String,
    note: Option<String>,
}

impl Report {
    fn ok(json: Value, table: String) -> Self {
        Report {
            code: 0,
            json,
            table,
            note: None,
        }
    }
}

fn tolerances(cli: &Cli) -> Tolerances {
    let mut t = Tolerances::default().with_projection(cli.project);
    if let Some(c) = cli.tol_cond {
        t = t.with_cond(c);
    }
    if let Some(v) = cli.tol_verify {
        t = t.with_verify(v);
    }
    t
}

fn rational_json(r: &RationalFunction) -> Value {
    let desc = |p: &bicubic_core::Polynomial| {
        let n = p.degree().unwrap_or(0);
        (0..=n).rev().map(|k| p.coeff(k)).collect::<Vec<f64>>()
    };
    json!({"num": nums(&desc(r.num())), "den": nums(&desc(r.den()))})
}

fn netlist_json(n: &Netlist) -> Value {
    serde_json::to_value(NetlistJson::from(n)).expect("netlist serializes")
}

fn netlist_table(n: &Netlist) -> String {
    let j = NetlistJson::from(n);
    j.elements
        .iter()
        .map(|e| format!("  {:<4} {:<8} {:>20}  {} - {}\n", e.label, format!("{:?}", e.kind).to_lowercase(), output::sci(e.value), e.nodes[0], e.nodes[1]))
        .collect()
}

fn pairs(v: &[(String, f64)]) -> Value {
    Value::Object(v.iter().map(|(k, x)| (k.clone(), num(*x))).collect::<Map<String, Value>>())
}

fn check(args: &ImpedanceArgs, tol: &Tolerances) -> Result<Report, Failure> {
    let z = args.coeffs()?.bicubic()?;
    let cert = positive_real_check_within(&z, tol.cond)?;
    let boundary = classify_boundary(&z, tol.cond);
    let json = json!({
        "is_pr": cert.is_pr,
        "branch": cert.branch,
        "gate_slack": num(cert.gate_slack),
        "margins": pairs(&cert.margins),
        "boundary": boundary.kinds,
        "derived": serde_json::to_value(derived_quantities(&z)).expect("serializes"),
    });
    let mut table = format!(
        "positive-real: {}\nbranch: {}\n",
        cert.is_pr,
        cert.branch.map_or("none".into(), |b| format!("{b:?}").to_lowercase())
    );
    for (k, v) in &cert.margins {
        table += &format!("  {k:<6} {}\n", output::sci(*v));
    }
    table += &format!("boundary: {}\n", if boundary.is_interior() { "interior".into() } else { format!("{:?}", boundary.kinds) });
    Ok(Report {
        code: if cert.is_pr { 0 } else { 1 },
        json,
        table,
        note: None,
    })
}

fn realization_json(r: &Realization) -> Value {
    json!({
        "config": r.config,
        "transform": r.transform.name(),
        "condition": r.condition,
        "slacks": Value::Object(r.slacks.iter().map(|(k, v)| (k.clone(), num(*v))).collect()),
        "aux": Value::Object(r.aux.iter().map(|(k, v)| (k.clone(), num(*v))).collect()),
        "mismatch": num(r.mismatch),
        "projected": r.projected,
        "notes": r.notes,
        "netlist": netlist_json(&r.netlist),
    })
}

fn synth(args: &ImpedanceArgs, tol: &Tolerances) -> Result<Report, Failure> {
    let z = args.coeffs()?.bicubic()?;
    let cert = positive_real_check_within(&z, tol.cond)?;
    if !cert.is_pr {
        return Err(Error::NotPositiveReal(format!("gate slack {:.3e}", cert.gate_slack)).into());
    }
    let cls = classify_boundary(&z, tol.cond);
    if !cls.is_interior() {
        let r = realize_boundary(&z, &cls, tol)?;
        let json = json!({
            "boundary": cls.kinds,
            "route": r.route,
            "mismatch": num(r.mismatch),
            "decomposition": r.decomposition.as_ref().map(|d| json!({
                "k1": num(d.k1),
                "omega1": num(d.omega1),
                "remainder": rational_json(&d.remainder),
            })),
            "netlist": netlist_json(&r.netlist),
        });
        let table = format!("boundary realization ({})\n{}", r.route, netlist_table(&r.netlist));
        return Ok(Report::ok(json, table));
    }
    let found = synthesize_five(&z, tol)?;
    if found.is_empty() {
        return Ok(Report {
            code: 3,
            json: json!({"realizations": []}),
            table: "no five-element realization\n".into(),
            note: Some("no five-element realization exists; `bicubic bottduffin` gives a general network".into()),
        });
    }
    let json = json!({"realizations": found.iter().map(realization_json).collect::<Vec<_>>()});
    let mut table = String::new();
    for r in &found {
        table += &format!(
            "{} via {} ({}), mismatch {}{}\n",
            r.config,
            r.transform.name(),
            r.condition,
            output::sci(r.mismatch),
            if r.projected { ", projected" } else { "" }
        );
        table += &netlist_table(&r.netlist);
    }
    Ok(Report::ok(json, table))
}

fn verify(netlist: &PathBuf, target: &ImpedanceArgs, tol: &Tolerances) -> Result<Report, Failure> {
    let n = read_netlist(netlist)?;
    let want = target.coeffs()?.rational()?;
    let got = impedance_of(&n)?;
    let coefficient = got.mismatch(&want);
    // Wide-spread networks lose digits in symbolic form; sampling is the fallback oracle.
    let sampled = sampled_mismatch(&n, &want)?;
    let ok = coefficient <= tol.verify || sampled <= tol.verify;
    let json = json!({
        "match": ok,
        "coefficient_mismatch": num(coefficient),
        "sampled_mismatch": num(sampled),
        "tol_verify": num(tol.verify),
        "impedance": rational_json(&got),
    });
    let table = format!(
        "match: {ok}\ncoefficient mismatch: {}\nsampled mismatch: {}\n",
        output::sci(coefficient),
        output::sci(sampled)
    );
    Ok(Report {
        code: if ok { 0 } else { 4 },
        json,
        table,
        note: None,
    })
}

fn bottduffin(args: &ImpedanceArgs, tol: &Tolerances) -> Result<Report, Failure> {
    let c = args.coeffs()?;
    let z = c.rational()?;
    if c.is_bicubic() && !positive_real_check_within(&c.bicubic()?, tol.cond)?.is_pr {
        return Err(Error::NotPositiveReal("positive-real test failed".into()).into());
    }
    let (n, trace) = bott_duffin_traced(&z, tol.verify)?;
    let steps: Vec<Value> = trace
        .steps
        .iter()
        .map(|s| {
            json!({
                "kind": s.kind,
                "extracted": s.extracted.iter().map(|(k, v)| json!({"kind": k, "value": num(*v)})).collect::<Vec<_>>(),
                "remainders": s.remainders.iter().map(rational_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    let json = json!({
        "elements": n.elements.len(),
        "netlist": netlist_json(&n),
        "steps": steps,
    });
    let table = format!("Bott-Duffin network, {} elements\n{}", n.elements.len(), netlist_table(&n));
    Ok(Report::ok(json, table))
}

fn plant(cli: &Cli) -> Result<PlantParams, Failure> {
    match cli.ks.as_slice() {
        [] => Ok(PlantParams::standard(25e3)),
        [ks] => Ok(PlantParams::standard(*ks)),
        _ => Err(Failure::malformed("give a single --ks for this command".into())),
    }
}

fn suspension_eval(cli: &Cli, args: &ImpedanceArgs) -> Result<Report, Failure> {
    let p = plant(cli)?;
    let z = args.coeffs()?.rational()?;
    let r = ride_comfort(&z, &p)?;
    let json = json!({
        "ks": num(p.ks),
        "j1": num(r.j1),
        "h1": num(r.h1),
        "lyapunov_residual": num(r.residual),
        "spectral_abscissa": num(r.spectral_abscissa),
        "states": r.p.nrows(),
    });
    let table = format!("ks {}\nJ1 {}\nH1 {}\n", output::sci(p.ks), output::sci(r.j1), output::sci(r.h1));
    Ok(Report::ok(json, table))
}

fn single_case(cli: &Cli) -> Result<Case, Failure> {
    match cli.case {
        Some(CaseArg::A) => Ok(Case::A),
        Some(CaseArg::B) => Ok(Case::B),
        _ => Err(Failure::malformed("give --case A or --case B".into())),
    }
}

fn options(cli: &Cli) -> OptimizeOptions {
    OptimizeOptions {
        restarts: cli.restarts,
        seed: cli.seed,
        ..Default::default()
    }
}

fn opt_json(r: &OptimizeResult, p: &PlantParams) -> Value {
    json!({
        "case": r.case.to_string(),
        "ks": num(p.ks),
        "j1": num(r.j1),
        "h1": num(r.h1),
        "a": nums(&r.a_desc()),
        "d": nums(&r.d_desc()),
        "config": r.config,
        "netlist": r.netlist.as_ref().map(netlist_json),
        "trace": nums(&r.trace),
        "evaluations": r.evaluations,
    })
}

fn suspension_opt(cli: &Cli, args: &ImpedanceArgs) -> Result<Report, Failure> {
    let case = single_case(cli)?;
    let p = plant(cli)?;
    let mut opts = options(cli);
    if args.is_given() {
        opts.warm_start = Some(args.coeffs()?.rational()?);
    }
    let r = optimize_controller(case, &p, &opts)?;
    let mut table = format!(
        "case {case}, ks {}\nJ1 {}\na {:?}\nd {:?}\n",
        output::sci(p.ks),
        output::sci(r.j1),
        r.a_desc(),
        r.d_desc()
    );
    if let Some(n) = &r.netlist {
        table += &format!("network {}\n{}", r.config.map(|c| c.to_string()).unwrap_or_default(), netlist_table(n));
    }
    Ok(Report::ok(opt_json(&r, &p), table))
}

fn sweep(cli: &Cli) -> Result<Report, Failure> {
    let grid: Vec<f64> = if cli.ks.is_empty() {
        (1..=12).map(|i| i as f64 * 10e3).collect()
    } else {
        cli.ks.clone()
    };
    let p = PlantParams::standard(grid[0]);
    let opts = options(cli);
    let cases: Vec<Case> = match cli.case {
        Some(CaseArg::A) => vec![Case::A],
        Some(CaseArg::B) => vec![Case::B],
        Some(CaseArg::Both) | None => vec![Case::A, Case::B],
    };
    let tables: Vec<(Case, Vec<_>)> = cases.iter().map(|c| (*c, sweep_ks(*c, &p, &grid, &opts))).collect();
    let j1 = |c: Case, i: usize| tables.iter().find(|t| t.0 == c).and_then(|t| t.1[i].j1);
    let mut rows = Vec::new();
    let mut csv = String::from("ks");
    for c in &cases {
        csv += &format!(",j1_{c}");
    }
    if cases.len() == 2 {
        csv += ",improvement_percent";
    }
    csv.push('\n');
    for (i, ks) in grid.iter().enumerate() {
        let mut row = Map::new();
        row.insert("ks".into(), num(*ks));
        csv += &output::sci(*ks);
        for (c, t) in &tables {
            row.insert(format!("j1_{c}"), t[i].j1.map_or(Value::Null, num));
            if let Some(e) = &t[i].error {
                row.insert(format!("error_{c}"), Value::String(e.clone()));
            }
            csv += &format!(",{}", t[i].j1.map_or(String::new(), output::sci));
        }
        if cases.len() == 2 {
            let imp = j1(Case::A, i).zip(j1(Case::B, i)).map(|(a, b)| improvement_percent(a, b));
            row.insert("improvement_percent".into(), imp.map_or(Value::Null, num));
            csv += &format!(",{}", imp.map_or(String::new(), output::sci));
        }
        csv.push('\n');
        rows.push(Value::Object(row));
    }
    Ok(Report::ok(json!({"rows": rows}), csv))
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let tol = tolerances(cli);
    match &cli.command {
        Command::Check(a) => check(a, &tol),
        Command::Synth(a) => synth(a, &tol),
        Command::Verify { netlist, target } => verify(netlist, target, &tol),
        Command::Bottduffin(a) => bottduffin(a, &tol),
        Command::SuspensionEval(a) => suspension_eval(cli, a),
        Command::SuspensionOpt(a) => suspension_opt(cli, a),
        Command::Sweep => sweep(cli),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(r) => {
            let text = match cli.format {
                Format::Json => output::to_string(&r.json),
                Format::Table => r.table,
            };
            let written = match &cli.output {
                Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if let Some(n) = r.note {
                eprintln!("{n}");
            }
            ExitCode::from(r.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
