use tailbound::monotonicity::DEFAULT_GRID_SIZE;
use tailbound::normal::{two_sided_tail, upper_tail};
use tailbound::oracle::{verify_instance, VerificationReport, MIN_SAMPLES};
use tailbound::selfcheck::{run_selfcheck, SelfCheckReport};
use tailbound::{BoundKind, Bounds, Constants, Error, Result};

use crate::args::{EvalArgs, Format, GridSpec, McArgs, OutputArgs, SelfcheckArgs, TableArgs, VerifyArgs};
use crate::instance::{InstanceFile, Oracle};
use crate::output::{json_text, Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Violation,
}

/// Report text plus what the exit status should say about it.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub status: Status,
    /// Short summary for stderr.
    pub summary: Option<String>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, status: Status::Ok, summary: None }
    }
}

fn render(table: &Table, output: &OutputArgs) -> String {
    match output.format() {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    }
}

fn canonical(kinds: &[BoundKind], default: &[BoundKind]) -> Vec<BoundKind> {
    let mut kinds = if kinds.is_empty() { default.to_vec() } else { kinds.to_vec() };
    kinds.sort();
    kinds.dedup();
    kinds
}

pub fn eval(args: &EvalArgs) -> Result<Outcome> {
    let bounds = Bounds::default();
    let kinds = canonical(&args.bounds, &BoundKind::ALL);
    let mut table = Table::new(std::iter::once("x").chain(kinds.iter().map(|k| k.name())));
    for x in args.points.points() {
        if !x.is_finite() {
            return Err(Error::Usage(format!("evaluation point {x} is not finite")));
        }
        let mut row = vec![Cell::Num(x)];
        for &k in &kinds {
            let v = if args.strict || x > 0.0 { bounds.eval_strict(k, x)? } else { bounds.eval(k, x) };
            row.push(Cell::Num(v));
        }
        table.push(row);
    }
    Ok(Outcome::ok(render(&table, &args.output)))
}

pub fn crossings(output: &OutputArgs) -> Result<Outcome> {
    let bounds = Bounds::default();
    let z = bounds.solve_crossings()?;
    let res = z.residuals(&bounds);
    let mut table = Table::new(["name", "value", "residual"]);
    for (name, v, r) in [("z_v", z.z_v, res[0]), ("z_w", z.z_w, res[1]), ("z_wtilde", z.z_wtilde, res[2])] {
        table.push(vec![Cell::Text(name.into()), Cell::Num(v), Cell::Num(r)]);
    }
    Ok(Outcome::ok(render(&table, output)))
}

fn report_table(report: &VerificationReport) -> Table {
    let mut table = Table::new(
        ["x", "tail", "margin"]
            .into_iter()
            .chain(report.kinds.iter().map(|k| k.name()))
            .chain(["violation"]),
    );
    for r in &report.rows {
        let mut row = vec![Cell::Num(r.x), Cell::Num(r.tail), Cell::Num(r.margin)];
        row.extend(r.bounds.iter().map(|&b| Cell::Num(b)));
        row.push(Cell::Flag(r.violation));
        table.push(row);
    }
    table
}

fn report_outcome(report: &VerificationReport, output: &OutputArgs, label: &str) -> Outcome {
    let text = match output.format() {
        Format::Csv => report.to_csv(),
        Format::Json => report_table(report).to_json(),
    };
    let count = report.violation_count();
    let summary = format!(
        "{label}: {count} violation(s) in {} rows, min slack {:e}",
        report.rows.len(),
        report.min_slack()
    );
    Outcome {
        text,
        status: if count > 0 { Status::Violation } else { Status::Ok },
        summary: Some(summary),
    }
}

fn recheck(path: &std::path::Path, output: &OutputArgs) -> Result<Outcome> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut report = VerificationReport::from_csv(&text)
        .map_err(|e| Error::Usage(format!("{}: {e}", path.display())))?;
    report.redetect();
    Ok(report_outcome(&report, output, "recheck"))
}

fn verify(args: &VerifyArgs, oracle: Oracle, samples: usize, seed: u64) -> Result<Outcome> {
    if let Some(path) = &args.report {
        return recheck(path, &args.output);
    }
    let path = args.instance.as_ref().ok_or_else(|| Error::Usage("--instance is required".into()))?;
    let instance = InstanceFile::load(path)?;
    if instance.oracle() != oracle {
        let cmd = match instance.oracle() {
            Oracle::Exact => "verify-exact",
            Oracle::MonteCarlo => "verify-mc",
        };
        return Err(Error::Usage(format!("`{}` instances are checked with {cmd}", instance.type_name())));
    }
    let label = instance.type_name();
    let source = instance.into_source(args.strict, samples, seed)?;
    let default = if source.two_sided() { &BoundKind::TWO_SIDED[..] } else { &BoundKind::ONE_SIDED[..] };
    let kinds = canonical(&args.bounds, default);
    let grid = args.grid.unwrap_or_default().points();
    let report = verify_instance(source.as_ref(), &kinds, &grid)?;
    Ok(report_outcome(&report, &args.output, label))
}

pub fn verify_exact(args: &VerifyArgs) -> Result<Outcome> {
    verify(args, Oracle::Exact, 0, 0)
}

pub fn verify_mc(args: &McArgs) -> Result<Outcome> {
    if args.samples < MIN_SAMPLES {
        return Err(Error::Usage(format!("--samples must be at least {MIN_SAMPLES}, got {}", args.samples)));
    }
    verify(&args.verify, Oracle::MonteCarlo, args.samples, args.seed)
}

fn selfcheck_text(report: &SelfCheckReport) -> String {
    let mut out: String = report.checks.iter().map(|c| format!("{c}\n")).collect();
    let passed = report.checks.iter().filter(|c| c.pass).count();
    out.push_str(&format!("selfcheck: {passed}/{} checks passed\n", report.checks.len()));
    out
}

pub fn selfcheck(args: &SelfcheckArgs) -> Result<Outcome> {
    let base = Constants::default();
    let constants = match args.perturb_lambda {
        Some(d) if d.is_finite() => Constants::with_lambda(base.lambda + d),
        Some(d) => return Err(Error::Usage(format!("lambda perturbation {d} is not finite"))),
        None => base,
    };
    let grid_size = if args.grid_size == 0 { DEFAULT_GRID_SIZE } else { args.grid_size };
    let report = run_selfcheck(constants, grid_size)?;
    let text = match args.output.format {
        None => selfcheck_text(&report),
        Some(Format::Csv) => {
            let mut table = Table::new(["name", "pass", "value", "detail"]);
            for c in &report.checks {
                table.push(vec![
                    Cell::Text(c.name.clone()),
                    Cell::Flag(c.pass),
                    Cell::Num(c.value.unwrap_or(f64::NAN)),
                    Cell::Text(c.detail.clone()),
                ]);
            }
            table.to_csv()
        }
        Some(Format::Json) => json_text(&serde_json::json!({
            "pass": report.passed(),
            "checks": report.checks,
        })),
    };
    Ok(Outcome {
        text,
        status: if report.passed() { Status::Ok } else { Status::Violation },
        summary: None,
    })
}

pub fn table(args: &TableArgs) -> Result<Outcome> {
    let bounds = Bounds::default();
    let grid: GridSpec = args.grid.unwrap_or_default();
    let mut table = Table::new(
        ["x", "upper_tail", "two_sided_tail"]
            .into_iter()
            .chain(BoundKind::ALL.iter().map(|k| k.name())),
    );
    for x in grid.points() {
        let mut row = vec![Cell::Num(x), Cell::Num(upper_tail(x)?), Cell::Num(two_sided_tail(x)?)];
        for k in BoundKind::ALL {
            row.push(Cell::Num(bounds.eval_strict(k, x)?));
        }
        table.push(row);
    }
    Ok(Outcome::ok(render(&table, &args.output)))
}
