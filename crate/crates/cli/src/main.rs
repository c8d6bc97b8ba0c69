mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use liftcalc::lifting::{classify, distance_to, gl2_oracle_vy, phi, v_abar, v_x, v_y, v_z, DepthClass, DistanceTarget};
use liftcalc::value::rational_string;
use liftcalc::verify::{canonical_name, default_orders, run_identity, VerifyConfig, IDENTITIES};
use liftcalc::{Error, ExtCase, FieldParams, OrderSpec, QuatElem, Valuation, ValueExt};

use report::*;

#[derive(Parser)]
#[command(name = "liftcalc", version, about = "Exact lifting depths over quasi-canonical liftings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// v_x, v_y, v_z, v_ā, classification and distance for one γ.
    Compute(ComputeArgs),
    /// Run identity suites; exits 4 if any identity fails.
    Verify(VerifyArgs),
    /// v_x across a range of levels for a list of γ.
    Table(TableArgs),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    q: u32,
    /// Working precision in π-digits.
    #[arg(long, default_value_t = 12)]
    precision: i32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Ext {
    Unramified,
    Ramified,
}

impl From<Ext> for ExtCase {
    fn from(e: Ext) -> Self {
        match e {
            Ext::Unramified => ExtCase::Unramified,
            Ext::Ramified => ExtCase::Ramified,
        }
    }
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    ext: Ext,
    #[arg(long, default_value_t = 0)]
    level: u32,
    /// `a=<series>;b=<series>`, series as `shift:c0+d0*j,c1+d1*j,...`.
    #[arg(long)]
    gamma: String,
    /// Also run the GL₂ oracle for v_y at this level.
    #[arg(long)]
    gl2_level: Option<u32>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Identity name or alias; all identities when omitted.
    #[arg(long)]
    identity: Option<String>,
    /// Restrict the sweep to one extension case.
    #[arg(long, value_enum)]
    ext: Option<Ext>,
    /// Restrict the sweep to one level (needs --ext).
    #[arg(long, requires = "ext")]
    level: Option<u32>,
    #[arg(long, default_value_t = 2)]
    gl2_level: u32,
    /// Samples per configuration.
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    ext: Ext,
    /// Inclusive range `a..b`.
    #[arg(long, default_value = "0..3")]
    levels: String,
    /// Repeat for several γ; none gives an empty table.
    #[arg(long)]
    gamma: Vec<String>,
}

/// A run that stops with a specific exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => 3,
            Error::RouteDisagreement(_) => 4,
            Error::InsufficientPrecision(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

const EXIT_PRECISION: u8 = 2;
const EXIT_FAILURES: u8 = 4;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("liftcalc: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Compute(a) => {
            let r = compute(&a)?;
            let code = if r.any_insufficient() { EXIT_PRECISION } else { 0 };
            emit(&a.common, &r, || r.to_csv())?;
            Ok(code)
        }
        Command::Verify(a) => {
            let r = verify(&a)?;
            let code = if r.failures() > 0 { EXIT_FAILURES } else { 0 };
            emit(&a.common, &r, || r.to_csv())?;
            Ok(code)
        }
        Command::Table(a) => {
            let r = table(&a)?;
            let code = if r.any_insufficient() { EXIT_PRECISION } else { 0 };
            emit(&a.common, &r, || r.to_csv())?;
            Ok(code)
        }
    }
}

fn emit<T: serde::Serialize>(c: &Common, r: &T, csv: impl FnOnce() -> csv::Result<String>) -> Result<(), Failure> {
    let text = match c.format {
        Format::Json => serde_json::to_string_pretty(r).map_err(|e| Failure::parse(e.to_string()))? + "\n",
        Format::Csv => csv().map_err(|e| Failure::parse(e.to_string()))?,
    };
    match &c.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::parse(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Render a computed value; errors that only concern this one quantity are
/// folded into the report, the rest abort the run.
fn cell(r: liftcalc::Result<ValueExt>, what: &str, notes: &mut Vec<String>) -> Result<String, Failure> {
    match r {
        Ok(v) => Ok(v.to_report_string()),
        Err(Error::InsufficientPrecision(m)) => {
            notes.push(format!("{what}: {m}"));
            Ok(INSUFFICIENT.to_string())
        }
        Err(Error::Unsupported(m)) => {
            notes.push(format!("{what}: {m}"));
            Ok("Unsupported".to_string())
        }
        Err(e) => Err(e.into()),
    }
}

fn compute(a: &ComputeArgs) -> Result<ComputeReport, Failure> {
    let p = FieldParams::new(a.common.q, a.common.precision)?;
    let ord = OrderSpec::new(a.ext.into(), a.level);
    let g = QuatElem::parse(p, &a.gamma)?;
    if g.v_d().exact() != Some(0) {
        return Err(Failure::parse(format!("gamma must be a unit of O_D, got v_D = {}", g.v_d())));
    }
    let mut notes = Vec::new();

    let dist = distance_to(&g, DistanceTarget::UnitsOF)?;
    let (classification, phi_dprime) = match classify(&g, &ord) {
        Ok(d) => {
            let class = match d.class {
                DepthClass::Shallow => "shallow",
                DepthClass::Deep => "deep",
            };
            (class.to_string(), cell(phi(&d.gamma_dprime), "phi", &mut notes)?)
        }
        Err(Error::InsufficientPrecision(m)) => {
            notes.push(format!("classification: {m}"));
            (INSUFFICIENT.to_string(), INSUFFICIENT.to_string())
        }
        Err(e) => return Err(e.into()),
    };

    let vx = cell(v_x(&g, &ord), "v_x", &mut notes)?;
    let vy = cell(v_y(&g, &ord), "v_y", &mut notes)?;
    let vz = cell(v_z(&g, &ord), "v_z", &mut notes)?;
    let vabar = match ord.case {
        ExtCase::Ramified => Some(cell(v_abar(&g, &ord), "v_abar", &mut notes)?),
        ExtCase::Unramified => None,
    };
    let gl2 = match a.gl2_level {
        Some(n) => {
            let o = gl2_oracle_vy(&g, &ord, n)?;
            if !o.certified {
                notes.push(format!("gl2 oracle: divergence not certified at level {n}"));
            }
            Some(Gl2Summary {
                level: n,
                v_y: o.value.to_report_string(),
                certified: o.certified,
                flat_classes: o.flat_classes,
                refined_classes: o.refined_classes,
            })
        }
        None => None,
    };

    Ok(ComputeReport {
        schema: SCHEMA,
        command: "compute",
        q: p.q(),
        ext: ord.case.name(),
        level: ord.level,
        precision: p.precision(),
        gamma: g.to_literal(),
        mu: ord.mu(p).to_literal(),
        index: rational_string(&num::BigRational::from_integer(ord.index(p.q()).into())),
        classification,
        distance: rational_string(&dist.distance),
        distance_exact: matches!(dist.exponent, Valuation::Exact(_)),
        phi_gamma_dprime: phi_dprime,
        v_x: vx,
        v_y: vy,
        v_z: vz,
        v_abar: vabar,
        gl2_oracle: gl2,
        notes,
    })
}

fn verify(a: &VerifyArgs) -> Result<VerifyReport, Failure> {
    let names: Vec<&str> = match &a.identity {
        Some(n) if n == "all" => IDENTITIES.iter().map(|(n, _)| *n).collect(),
        Some(n) => vec![canonical_name(n).ok_or_else(|| {
            let known: Vec<_> = IDENTITIES.iter().map(|(n, a)| format!("{n} ({a})")).collect();
            Failure::parse(format!("unknown identity `{n}`; known: {}", known.join(", ")))
        })?],
        None => IDENTITIES.iter().map(|(n, _)| *n).collect(),
    };
    let orders = match (a.ext, a.level) {
        (Some(e), Some(s)) => vec![OrderSpec::new(e.into(), s)],
        (Some(e), None) => (0..=3).map(|s| OrderSpec::new(e.into(), s)).collect(),
        (None, _) => default_orders(3),
    };
    let cfg = VerifyConfig {
        q: a.common.q,
        precision: a.common.precision,
        samples: a.samples,
        seed: a.seed,
        orders,
        gl2_levels: vec![a.gl2_level],
    };
    FieldParams::new(cfg.q, cfg.precision)?;
    let mut rows = Vec::new();
    for n in names {
        let r = run_identity(n, &cfg)?;
        rows.push(IdentityRow {
            name: r.name,
            samples: r.samples,
            failures: r.failures,
            skipped: r.skipped,
            max_discrepancy: rational_string(&r.max_discrepancy),
            notes: r.notes,
        });
    }
    Ok(VerifyReport {
        schema: SCHEMA,
        command: "verify",
        q: cfg.q,
        precision: cfg.precision,
        samples: cfg.samples,
        seed: cfg.seed,
        gl2_levels: cfg.gl2_levels.clone(),
        orders: cfg.orders.iter().map(|o| o.to_string()).collect(),
        identities: rows,
    })
}

fn parse_levels(s: &str) -> Result<Vec<u32>, Failure> {
    let bad = || Failure::parse(format!("--levels expects `a..b` (inclusive), got `{s}`"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

fn table(a: &TableArgs) -> Result<TableReport, Failure> {
    let p = FieldParams::new(a.common.q, a.common.precision)?;
    let levels = parse_levels(&a.levels)?;
    let case: ExtCase = a.ext.into();
    let gammas = a
        .gamma
        .iter()
        .map(|lit| QuatElem::parse(p, lit))
        .collect::<liftcalc::Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    for g in &gammas {
        if g.v_d().exact() != Some(0) {
            return Err(Failure::parse(format!("gamma {g} is not a unit of O_D")));
        }
        let mut row = TableRow {
            gamma: g.to_literal(),
            v_x: Vec::new(),
            classification: Vec::new(),
        };
        let mut notes = Vec::new();
        for &s in &levels {
            let ord = OrderSpec::new(case, s);
            row.v_x.push(cell(v_x(g, &ord), "v_x", &mut notes)?);
            row.classification.push(match classify(g, &ord) {
                Ok(d) if d.class == DepthClass::Shallow => "shallow".to_string(),
                Ok(_) => "deep".to_string(),
                Err(_) => INSUFFICIENT.to_string(),
            });
        }
        rows.push(row);
    }
    Ok(TableReport {
        schema: SCHEMA,
        command: "table",
        q: p.q(),
        ext: case.name(),
        precision: p.precision(),
        levels,
        rows,
    })
}
