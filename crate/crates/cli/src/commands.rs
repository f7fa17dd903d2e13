use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::Write as _;

use cm_forms::classification::{
    block_structures, factorization_report, irrep_dims_upto, rep_existence_filter, simple_algebra_scan, weyl_dim,
    ScanHit,
};
use cm_forms::groups::non_annihilating;
use cm_forms::invariants::{invariant_basis, invariant_dim_count};
use cm_forms::io::{load_surface, parse_gaussian, parse_poly, save_surface, SurfaceDocument};
use cm_forms::normal_form::{check_normal_form, emit_form, nf_constraints, FormCoefficients, FormIndex};
use cm_forms::{Error, GaussianRational, Polynomial, Rational, Surface};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::{Cli, Command, SurfaceArgs};

pub const SCHEMA: &str = "cm-forms/1";

/// What a command produced: a status, a JSON payload and a text rendering.
struct Outcome {
    ok: bool,
    payload: Value,
    text: String,
    /// Written to `--out` instead of the rendering when present.
    artifact: Option<Surface>,
}

impl Outcome {
    fn new(ok: bool, payload: Value, text: String) -> Self {
        Outcome { ok, payload, text, artifact: None }
    }
}

enum Failure {
    /// Bad input: exit code 2.
    Usage(String),
    /// Refused or failed computation: exit code 1.
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => {
                Failure::Domain(format!("{e} (raise CM_FORMS_DEGREE_CAP to allow larger systems)"))
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Invariants(_) => "invariants",
        Command::InvarianceCheck(_) => "invariance-check",
        Command::NfCheck(_) => "nf-check",
        Command::NfConstraints(_) => "nf-constraints",
        Command::EmitForm(_) => "emit-form",
        Command::ClassifyScan(_) => "classify-scan",
        Command::Blocks(_) => "blocks",
        Command::FactorLemma(_) => "factor-lemma",
        Command::WeylDim(_) => "weyl-dim",
        Command::IrrepDims(_) => "irrep-dims",
    }
}

fn envelope(command: &str, ok: bool, payload: Value) -> String {
    let status = if ok { "ok" } else { "fail" };
    let v = json!({ "schema": SCHEMA, "command": command, "status": status, "payload": payload });
    serde_json::to_string_pretty(&v).expect("json value serializes")
}

/// Runs the parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> u8 {
    let name = command_name(&cli.command);
    let (code, rendered, artifact) = match execute(&cli.command) {
        Ok(out) => {
            let rendered = if cli.json { envelope(name, out.ok, out.payload) } else { out.text };
            (u8::from(!out.ok), rendered, out.artifact)
        }
        Err(failure) => {
            let (code, msg) = match failure {
                Failure::Usage(m) => (2, m),
                Failure::Domain(m) => (1, m),
            };
            eprintln!("error: {msg}");
            if !cli.json {
                return code;
            }
            (code, envelope(name, false, json!({ "error": msg })), None)
        }
    };
    match (&cli.out, artifact) {
        (Some(path), Some(surface)) => {
            if let Err(e) = save_surface(path, &surface) {
                eprintln!("error: {e}");
                return 2;
            }
            print_stdout(&rendered);
        }
        (Some(path), None) => {
            if let Err(e) = std::fs::write(path, format!("{rendered}\n")) {
                eprintln!("error: {}: {e}", path.display());
                return 2;
            }
        }
        (None, _) => print_stdout(&rendered),
    }
    code
}

/// Prints a line, treating a closed pipe (e.g. `| head`) as a normal exit.
fn print_stdout(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}").and_then(|_| out.flush());
}

fn execute(command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::Invariants(a) => {
            let (k, l) = (a.bidegree[0], a.bidegree[1]);
            let space = invariant_basis::<Rational>(&a.group, k, l)?;
            let count = invariant_dim_count(&a.group, k, l);
            let basis: Vec<String> = space.basis.iter().map(Polynomial::to_text).collect();
            let agrees = count == space.dim();
            let mut text = format!("invariants of {} in bidegree ({k},{l}): dimension {}\n", a.group, space.dim());
            for (i, b) in basis.iter().enumerate() {
                let _ = writeln!(text, "  {}. {b}", i + 1);
            }
            if !agrees {
                let _ = writeln!(text, "counting formula gives {count}");
            }
            let payload = json!({
                "group": a.group.to_string(),
                "bidegree": [k, l],
                "dimension": space.dim(),
                "counting_formula": count,
                "basis": basis,
            });
            Ok(Outcome::new(agrees, payload, text.trim_end().to_string()))
        }
        Command::InvarianceCheck(a) => {
            let poly: Polynomial = match (&a.poly, &a.input) {
                (Some(text), _) => parse_poly(text, a.group.n())?,
                (None, Some(path)) => load_surface::<Rational>(path)?.body,
                (None, None) => return Err(Failure::Usage("give --poly or --in".into())),
            };
            let failing = non_annihilating(&poly, &a.group)?;
            let invariant = failing.is_empty();
            let text = if invariant {
                format!("{poly} is invariant under {}", a.group)
            } else {
                format!("{poly} is not invariant under {}: generators {failing:?} act nontrivially", a.group)
            };
            let payload = json!({
                "group": a.group.to_string(),
                "poly": poly.to_text(),
                "invariant": invariant,
                "failing_generators": failing,
            });
            Ok(Outcome::new(invariant, payload, text))
        }
        Command::NfCheck(a) => {
            let surface = surface_from_args(a)?;
            let report = check_normal_form(&surface)?;
            let mut text = String::new();
            let mut checks = Vec::new();
            for c in &report.checks {
                let mark = if c.passed { "ok" } else { "FAIL" };
                let _ = writeln!(text, "{mark:>4}  {} at u^{}: residual {}", c.identity, c.u_degree, c.residual);
                checks.push(json!({
                    "identity": c.identity.to_string(),
                    "u_degree": c.u_degree,
                    "residual": c.residual.to_text(),
                    "passed": c.passed,
                }));
            }
            for issue in &report.structural {
                let _ = writeln!(text, "FAIL  {issue}");
            }
            let _ = write!(text, "{}", if report.passed { "normal form identities hold" } else { "not in normal form" });
            let payload = json!({
                "n": surface.n,
                "max_weight": surface.max_weight,
                "passed": report.passed,
                "structural": report.structural,
                "checks": checks,
            });
            Ok(Outcome::new(report.passed, payload, text))
        }
        Command::NfConstraints(a) => {
            let surface = surface_from_args(a)?;
            let system = nf_constraints(&surface);
            let unknowns: BTreeSet<String> =
                surface.body.terms().flat_map(|(_, c)| c.unknowns().map(str::to_string)).collect();
            let summary = system.summary_with_unknowns(&unknowns);
            let mut text = String::new();
            let mut equations = Vec::new();
            for eq in &system.equations {
                let lhs = eq.constraint.lhs.to_string();
                let _ = writeln!(text, "{lhs} = 0    [{}, u^{}, {}]", eq.identity, eq.u_degree, eq.constraint.monomial);
                equations.push(json!({
                    "identity": eq.identity.to_string(),
                    "u_degree": eq.u_degree,
                    "monomial": eq.constraint.monomial.to_string(),
                    "lhs": lhs,
                }));
            }
            let _ = write!(
                text,
                "{} equations, {} unknowns, rank {}, {}",
                system.len(),
                summary.unknowns,
                summary.rank,
                match summary.solution_dimension {
                    Some(d) => format!("solution space of dimension {d}"),
                    None => "inconsistent".to_string(),
                }
            );
            let payload = json!({
                "equations": equations,
                "unknowns": unknowns,
                "rank": summary.rank,
                "consistent": summary.consistent,
                "solution_dimension": summary.solution_dimension,
            });
            Ok(Outcome::new(true, payload, text))
        }
        Command::EmitForm(a) => {
            let Some(id) = a.form else { return Err(Failure::Usage("emit-form needs --form".into())) };
            let form = emit_form(id, a.n, a.max_weight, a.u_cap, &coefficients(&a.coeff)?)?;
            let surface = form.surface.clone();
            let terms: Vec<Value> = form
                .terms
                .iter()
                .map(|t| json!({ "slot": t.index.unknown_name(), "coefficient": t.coefficient.to_string() }))
                .collect();
            let mut text = format!("form {id}, n = {}, weight ≤ {}, u-degree ≤ {}\n", surface.n, a.max_weight, a.u_cap);
            let _ = writeln!(text, "{} slots", form.terms.len());
            let _ = write!(text, "body: {}", surface.body);
            let payload = json!({
                "form": id.to_string(),
                "n": surface.n,
                "max_weight": a.max_weight,
                "u_cap": a.u_cap,
                "terms": terms,
                "has_qualifying_term": form.has_qualifying_term(),
                "body": surface.body.to_text(),
                "document": serde_json::to_value(SurfaceDocument::from_surface(&surface)).expect("document serializes"),
            });
            Ok(Outcome { ok: true, payload, text, artifact: Some(surface) })
        }
        Command::ClassifyScan(a) => {
            let hits = simple_algebra_scan(a.dim_formula, a.n_max);
            let kept = rep_existence_filter(&hits);
            let render = |hs: &[ScanHit]| -> Vec<Value> {
                hs.iter()
                    .map(|h| {
                        json!({
                            "algebra": h.row.to_string(),
                            "n": h.n,
                            "algebra_dim": h.row.algebra_dim,
                            "min_faithful_dim": h.row.min_faithful_dim,
                        })
                    })
                    .collect()
            };
            let list = |hs: &[ScanHit]| hs.iter().map(|h| format!("({}, n={})", h.row, h.n)).collect::<Vec<_>>().join(", ");
            let text = format!(
                "dimension formula {}, n ≤ {}\narithmetic hits ({}): {}\nwith an irreducible n-dimensional representation ({}): {}",
                a.dim_formula,
                a.n_max,
                hits.len(),
                list(&hits),
                kept.len(),
                list(&kept)
            );
            let payload = json!({
                "dim_formula": a.dim_formula.to_string(),
                "n_max": a.n_max,
                "hits": render(&hits),
                "after_rep_filter": render(&kept),
            });
            Ok(Outcome::new(true, payload, text))
        }
        Command::Blocks(a) => {
            let parts = block_structures(a.n, a.dim);
            let text = parts.iter().map(|p| format!("{p:?}")).collect::<Vec<_>>().join("\n");
            let payload = json!({ "n": a.n, "dim": a.dim, "partitions": parts });
            Ok(Outcome::new(true, payload, text))
        }
        Command::FactorLemma(a) => {
            let report = factorization_report(a.n_max);
            let text = format!(
                "{} factorizations up to n = {} checked; bound {}; tight at {:?}",
                report.factorizations_checked,
                a.n_max,
                if report.holds() { "holds" } else { "violated" },
                report.tight
            );
            let mut payload = serde_json::to_value(&report).expect("report serializes");
            payload["holds"] = json!(report.holds());
            Ok(Outcome::new(report.holds(), payload, text))
        }
        Command::WeylDim(a) => {
            let d = weyl_dim(&a.root_system, &a.weight.0)?;
            let dim = d.to_u64().map_or_else(|| json!(d.to_string()), |v| json!(v));
            let payload = json!({ "root_system": a.root_system.name(), "weight": a.weight.0, "dimension": dim });
            Ok(Outcome::new(true, payload, d.to_string()))
        }
        Command::IrrepDims(a) => {
            let dims = irrep_dims_upto(&a.root_system, a.bound);
            let text = dims.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
            let payload = json!({ "root_system": a.root_system.name(), "bound": a.bound, "dims": dims });
            Ok(Outcome::new(true, payload, text))
        }
    }
}

fn surface_from_args(a: &SurfaceArgs) -> Result<Surface, Failure> {
    if let Some(path) = &a.input {
        return Ok(load_surface(path)?);
    }
    if let Some(text) = &a.poly {
        let n = a.n.ok_or_else(|| Failure::Usage("--poly needs --n".into()))?;
        let body = parse_poly(text, n)?;
        return Ok(Surface::new(n, a.max_weight, body)?);
    }
    if let Some(id) = a.form {
        let form = emit_form(id, a.n, a.max_weight, a.u_cap, &coefficients(&a.coeff)?)?;
        return Ok(form.surface);
    }
    Err(Failure::Usage("give one of --in, --poly or --form".into()))
}

/// Parses `--coeff` values of the form `p,q,r[@uT]=VALUE`.
fn coefficients(specs: &[String]) -> Result<FormCoefficients<Rational>, Failure> {
    if specs.is_empty() {
        return Ok(FormCoefficients::Fresh);
    }
    let mut map = BTreeMap::new();
    for spec in specs {
        let bad = || Failure::Usage(format!("cannot parse coefficient {spec:?}; expected e.g. 1,1,0=1 or 2,3,0@u1=(1/2+1i)"));
        let (slot, value) = spec.split_once('=').ok_or_else(bad)?;
        let (idx, u) = match slot.split_once("@u") {
            Some((idx, u)) => (idx, u.trim().parse::<u32>().map_err(|_| bad())?),
            None => (slot, 0),
        };
        let idx: Vec<u32> = idx.split(',').map(|t| t.trim().parse::<u32>()).collect::<Result<_, _>>().map_err(|_| bad())?;
        let value: GaussianRational = parse_gaussian(value.trim())?;
        map.insert(FormIndex::new(idx, u), value);
    }
    Ok(FormCoefficients::Assigned(map))
}
