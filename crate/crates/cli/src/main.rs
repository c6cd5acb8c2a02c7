mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hilbrep_core::goettsche::{
    euler_product_form, goettsche_series, k3_trace_series, macdonald_series, K3Action,
};
use hilbrep_core::jacobian::{family_euler_rep, jac_euler_rep, solve_orbit_counts, vanishing_certificate};
use hilbrep_core::qseries::{symplectic_eta_row, EtaQuotient};
use hilbrep_core::rhsolver::{enumerate_branch_data, SearchConstraints};
use hilbrep_core::{builtin, schema, verify_table, CharacterTable, ClassFunction, Error};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use output::{character_json, graded_json, Report};

#[derive(Parser)]
#[command(name = "hilbrep", version, about = "Exact equivariant generating functions")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,

    /// Truncation order of power series.
    #[arg(long, global = true, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
    order: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check or print a character table (registry name or JSON file).
    Table {
        #[command(subcommand)]
        action: TableAction,
    },
    /// Decompose the permutation character on the cosets of a cyclic subgroup.
    Induce { group: String, class: String },
    /// Symmetric powers of a variety from its graded cohomology.
    Macdonald { cohomology: PathBuf },
    /// Hilbert schemes of points on a surface.
    Goettsche {
        cohomology: PathBuf,
        #[command(flatten)]
        view: GoettscheView,
    },
    /// Trace series of a K3 automorphism on the Euler characters of its Hilbert schemes.
    K3Trace {
        #[command(flatten)]
        action: K3Args,
    },
    /// Expand an eta quotient such as `1^8,2^8`.
    Eta { spec: String },
    /// Compare the symplectic trace series with the eta-quotient table.
    EtaVerify {
        #[arg(long, required = true)]
        all_table_rows: bool,
    },
    /// Euler character of the compactified Jacobian of a nodal curve.
    Jacobian { curve: PathBuf },
    /// Euler character of the relative compactified Jacobian of a stratified family.
    Family { strata: PathBuf },
    /// Non-negative integer counts expressing a target character in a basis.
    OrbitSolve { target: PathBuf, basis: PathBuf },
    /// Branch data of covers of the projective line with a rational quotient.
    RhSearch {
        group: String,
        #[arg(long, default_value_t = 4)]
        max_branch: usize,
        /// Also list rejected candidates of non-negative dimension.
        #[arg(long)]
        show_rejected: bool,
        /// Do not require some element with a rational quotient.
        #[arg(long)]
        any_quotient: bool,
    },
}

#[derive(Subcommand)]
enum TableAction {
    Verify { group: String },
    Show { group: String },
}

#[derive(Args)]
#[group(multiple = false)]
struct GoettscheView {
    /// Poincare polynomials of each coefficient.
    #[arg(long)]
    poincare: bool,
    /// Euler characters of each coefficient.
    #[arg(long)]
    euler: bool,
    /// Trace series at a conjugacy class.
    #[arg(long, value_name = "CLASS")]
    trace: Option<String>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct K3Args {
    /// Order of a symplectic automorphism (1..=8).
    #[arg(long, value_name = "N")]
    symplectic: Option<u32>,
    /// Non-symplectic action of prime order, e.g. `p=3,rankT=14`.
    #[arg(long, value_name = "p=P,rankT=R")]
    nonsymplectic: Option<String>,
}

/// Exit statuses beyond clap's usage error (2).
enum Failure {
    Schema(String),
    Precondition(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Schema(_) | Error::Parse(_) => Failure::Schema(e.to_string()),
            Error::Verification(_) => Failure::Verification(e.to_string()),
            _ => Failure::Precondition(e.to_string()),
        }
    }
}

type Run = Result<Report, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Schema(format!("{}: {e}", path.display())))
}

fn load_table(name: &str) -> Result<Arc<CharacterTable>, Failure> {
    let path = Path::new(name);
    if path.is_file() {
        Ok(Arc::new(CharacterTable::from_json(&read(path)?)?))
    } else {
        Ok(builtin(name)?)
    }
}

fn cyclic(n: u32) -> Result<Arc<CharacterTable>, Failure> {
    Ok(if n == 1 { builtin("TRIVIAL")? } else { builtin(&format!("Z{n}"))? })
}

fn table_cmd(action: &TableAction) -> Run {
    match action {
        TableAction::Verify { group } => {
            let t = load_table(group)?;
            let diags = verify_table(&t);
            let mut r = Report::new(json!({
                "group": t.name(),
                "ok": diags.is_empty(),
                "diagnostics": diags.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            }));
            if diags.is_empty() {
                r.line(format!("{}: all checks passed", t.name()));
                Ok(r)
            } else {
                let text: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
                Err(Failure::Verification(format!("{}: {}", t.name(), text.join("; "))))
            }
        }
        TableAction::Show { group } => {
            let t = load_table(group)?;
            let v: Value = serde_json::from_str(&t.to_json()).expect("table JSON");
            let mut r = Report::new(v);
            r.text(t.to_string());
            Ok(r)
        }
    }
}

fn induce_cmd(group: &str, class: &str) -> Run {
    let t = load_table(group)?;
    let c = t.class_index(class)?;
    let ind = ClassFunction::induce_from_cyclic(&t, c);
    let mut r = Report::new(json!({
        "group": t.name(),
        "class": class,
        "character": character_json(&ind),
    }));
    r.line(format!("I_{} = {}", t.class(c).label, ind.describe()));
    Ok(r)
}

fn macdonald_cmd(path: &Path, order: usize) -> Run {
    let x = schema::load_cohomology(&read(path)?)?;
    let s = macdonald_series(&x, order)?;
    let mut r = Report::new(json!({
        "coefficients": s.coeffs().iter().map(graded_json).collect::<Vec<_>>(),
    }));
    for (n, g) in s.coeffs().iter().enumerate() {
        r.line(format!("t^{n}: {g}"));
    }
    Ok(r)
}

fn goettsche_cmd(path: &Path, view: &GoettscheView, order: usize) -> Run {
    let s = schema::load_cohomology(&read(path)?)?;
    if let Some(label) = &view.trace {
        let c = s.table().class_index(label)?;
        let series = goettsche_series(&s, order)?.trace_at(c)?;
        let mut r = Report::new(json!({"class": label, "series": series.to_json()}));
        r.line(series.to_string());
        return Ok(r);
    }
    if view.poincare {
        let p = goettsche_series(&s, order)?.poincare_at()?;
        let mut r = Report::new(json!({"poincare": p.to_json()}));
        for n in 0..=order {
            r.line(format!("t^{n}: {}", p.format_row(n)));
        }
        return Ok(r);
    }
    if view.euler {
        let e = euler_product_form(&s, order)?;
        let mut r = Report::new(json!({
            "euler": e.iter().map(character_json).collect::<Vec<_>>(),
        }));
        for (n, f) in e.iter().enumerate() {
            r.line(format!("t^{n}: {}", f.describe()));
        }
        return Ok(r);
    }
    let series = goettsche_series(&s, order)?;
    let mut r = Report::new(json!({
        "coefficients": series.coeffs().iter().map(graded_json).collect::<Vec<_>>(),
    }));
    for (n, g) in series.coeffs().iter().enumerate() {
        r.line(format!("t^{n}: {g}"));
    }
    Ok(r)
}

fn parse_nonsymplectic(spec: &str) -> Result<(u32, u32), Failure> {
    let bad = || Failure::Precondition(format!("expected `p=<prime>,rankT=<rank>`, got `{spec}`"));
    let mut p = None;
    let mut rank = None;
    for item in spec.split(',') {
        let (k, v) = item.split_once('=').ok_or_else(bad)?;
        let v: u32 = v.trim().parse().map_err(|_| bad())?;
        match k.trim() {
            "p" => p = Some(v),
            "rankT" => rank = Some(v),
            _ => return Err(bad()),
        }
    }
    Ok((p.ok_or_else(bad)?, rank.ok_or_else(bad)?))
}

fn k3_trace_cmd(args: &K3Args, order: usize) -> Run {
    let (table, action, label) = match (&args.symplectic, &args.nonsymplectic) {
        (Some(n), None) => {
            if !(1..=8).contains(n) {
                return Err(Error::OrderOutOfRange(*n).into());
            }
            (cyclic(*n)?, K3Action::Symplectic, format!("symplectic order {n}"))
        }
        (None, Some(spec)) => {
            let (p, rank_t) = parse_nonsymplectic(spec)?;
            (cyclic(p)?, K3Action::NonSymplectic { p, rank_t }, format!("non-symplectic p={p} rankT={rank_t}"))
        }
        _ => unreachable!("clap enforces exactly one action"),
    };
    let g = if table.class_count() > 1 { 1 } else { 0 };
    let s = k3_trace_series(&table, action, g, order)?;
    let mut r = Report::new(json!({"action": label, "series": s.to_json()}));
    r.line(s.to_string());
    Ok(r)
}

fn eta_cmd(spec: &str, order: usize) -> Run {
    let q: EtaQuotient = spec.parse()?;
    let s = q.expand(order);
    let mut r = Report::new(json!({
        "quotient": q.to_string(),
        "weight": q.weight().to_string(),
        "series": s.to_json(),
    }));
    r.line(s.to_string());
    Ok(r)
}

fn eta_verify_cmd(order: usize) -> Run {
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    let mut matches = 0;
    for n in 1..=8u32 {
        let q = symplectic_eta_row(n)?;
        let table = cyclic(n)?;
        let lhs = k3_trace_series(&table, K3Action::Symplectic, usize::from(n > 1), order)?;
        let rhs = q.trace_form(order);
        let w = q.weight();
        let weight_ok = w.is_integer() && w.to_u32() == Some(24u32.div_ceil(n + 1));
        let (ok, detail) = match lhs.compare(&rhs, order) {
            Ok(()) if weight_ok => (true, "equal".to_string()),
            Ok(()) => (false, format!("weight {} is not ceil(24/{})", q.weight(), n + 1)),
            Err(m) => (false, format!("t^{}: {} vs {}", m.index, m.left, m.right)),
        };
        matches += usize::from(ok);
        lines.push(format!("N={n} {q} weight={} {detail}", q.weight()));
        rows.push(json!({"n": n, "quotient": q.to_string(), "weight": q.weight().to_string(), "equal": ok, "detail": detail}));
    }
    lines.push(format!("{matches}/8 rows equal"));
    if matches != 8 {
        return Err(Failure::Verification(lines.join("\n")));
    }
    let mut r = Report::new(json!({"order": order, "rows": rows, "equal": matches}));
    for l in lines {
        r.line(l);
    }
    Ok(r)
}

fn jacobian_cmd(path: &Path) -> Run {
    let curve = schema::load_curve(&read(path)?)?;
    let e = jac_euler_rep(&curve)?;
    let cert = vanishing_certificate(&curve)?;
    let mut r = Report::new(json!({
        "group": curve.table().name(),
        "arithmeticGenus": curve.arithmetic_genus(),
        "geometricGenus": curve.geometric_genus(),
        "character": character_json(&e),
        "vanishingCertificate": cert,
    }));
    r.line(format!("e(J) = {}", e.describe()));
    r.line(format!("values = {}", output::values_plain(&e)));
    r.line(format!("vanishing certificate: {cert}"));
    Ok(r)
}

fn family_cmd(path: &Path) -> Run {
    let family = schema::load_strata(&read(path)?)?;
    let mut r = Report::new(Value::Null);
    let mut parts = Vec::new();
    for s in &family.strata {
        let c = s.contribution(&family.table)?;
        r.line(format!("{}: {}", s.label, c.describe()));
        parts.push(json!({"label": s.label, "character": character_json(&c)}));
    }
    let total = family_euler_rep(&family.table, &family.strata)?;
    r.line(format!("total = {}", total.describe()));
    r.line(format!("values = {}", output::values_plain(&total)));
    r.set_json(json!({"group": family.table.name(), "strata": parts, "total": character_json(&total)}));
    Ok(r)
}

fn orbit_solve_cmd(target: &Path, basis: &Path) -> Run {
    let t = schema::load_target(&read(target)?)?;
    let b = schema::load_basis(&read(basis)?)?;
    let n = solve_orbit_counts(&t, &b)?;
    let text: Vec<String> = n.iter().map(|x| x.to_string()).collect();
    let mut r = Report::new(json!({"counts": text}));
    r.line(format!("n = ({})", text.join(", ")));
    Ok(r)
}

fn rh_search_cmd(group: &str, max_branch: usize, show_rejected: bool, any_quotient: bool) -> Run {
    let t = load_table(group)?;
    let constraints = SearchConstraints {
        require_rational_quotient: !any_quotient,
        ..SearchConstraints::default()
    };
    let report = enumerate_branch_data(&t, max_branch, constraints)?;
    let label = |c: usize| t.class(c).label.clone();
    let solutions: Vec<Value> = report
        .solutions
        .iter()
        .map(|s| {
            json!({
                "branch": s.branch.classes().iter().map(|&c| label(c)).collect::<Vec<_>>(),
                "h1": character_json(&s.h1),
                "genus": s.genus.to_string(),
                "rationalQuotientClasses": s.rational_classes.iter().map(|&c| label(c)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let rejected: Vec<_> = report
        .rejected
        .iter()
        .filter(|x| !x.h1.degree().to_integer().is_some_and(|d| d < 0.into()))
        .collect();
    let mut r = Report::new(json!({
        "group": t.name(),
        "maxBranch": max_branch,
        "solutions": solutions,
        "rejected": if show_rejected {
            rejected.iter().map(|x| json!({
                "branch": x.branch.classes().iter().map(|&c| label(c)).collect::<Vec<_>>(),
                "h1": x.h1.describe(),
                "reason": x.reason.to_string(),
            })).collect::<Vec<_>>()
        } else {
            Vec::new()
        },
    }));
    for s in &report.solutions {
        r.line(s.to_string());
    }
    if show_rejected {
        for x in rejected {
            r.line(x.to_string());
        }
    }
    Ok(r)
}

fn run(cli: &Cli) -> Run {
    let order = cli.order as usize;
    match &cli.command {
        Command::Table { action } => table_cmd(action),
        Command::Induce { group, class } => induce_cmd(group, class),
        Command::Macdonald { cohomology } => macdonald_cmd(cohomology, order),
        Command::Goettsche { cohomology, view } => goettsche_cmd(cohomology, view, order),
        Command::K3Trace { action } => k3_trace_cmd(action, order),
        Command::Eta { spec } => eta_cmd(spec, order),
        Command::EtaVerify { .. } => eta_verify_cmd(order),
        Command::Jacobian { curve } => jacobian_cmd(curve),
        Command::Family { strata } => family_cmd(strata),
        Command::OrbitSolve { target, basis } => orbit_solve_cmd(target, basis),
        Command::RhSearch {
            group,
            max_branch,
            show_rejected,
            any_quotient,
        } => rh_search_cmd(group, *max_branch, *show_rejected, *any_quotient),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            report.print(cli.format == Format::Json);
            ExitCode::SUCCESS
        }
        Err(f) => {
            let (code, msg) = match f {
                Failure::Schema(m) => (3, m),
                Failure::Precondition(m) => (4, m),
                Failure::Verification(m) => (5, m),
            };
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
