use std::fmt::Write;

use num_bigint::BigUint;
use serde_json::{json, Value};

use hcon::coding::{decode_formula, decode_term, encode_formula, encode_term, growth_report, omega};
use hcon::formulas::{parse_term, FunSym, Term};
use hcon::search::{
    check_universal, extract_model, find_evaluation, herbrand_refute, theory_constraints, SearchOptions, SearchOutcome,
    StopReason,
};
use hcon::skolem::{
    admissible_symbols, hull_level, hull_step, preset, theory_threshold, HullMode, Provenance, TermSet, Theory,
};

use crate::input::{self, CliError, TheorySource};
use crate::report::{stats_json, stats_text, Report, Show, Status};

/// Search flags shared by the deciding commands.
#[derive(Debug, Clone)]
pub struct Search {
    pub options: SearchOptions,
    /// Largest core domain re-verified exhaustively.
    pub verify_max: usize,
}

fn header(th: &Theory) -> String {
    let n = th.axioms().len();
    format!("theory: {} ({n} axiom{})\n", th.name, if n == 1 { "" } else { "s" })
}

pub fn skolemize(src: &TheorySource) -> Result<Report, CliError> {
    let th = src.load()?;
    let show = Show(th.registry());
    let mut text = header(&th);
    let mut axioms = Vec::new();
    for (k, a) in th.axioms().iter().enumerate() {
        let sk = &a.skolemized;
        let _ = writeln!(text, "\naxiom {}: {}", k + 1, show.formula(&a.source));
        let _ = writeln!(text, "  rnnf: {}", show.formula(&sk.rnnf));
        let _ = writeln!(text, "  S:    {}", show.formula(&sk.s_form));
        let _ = writeln!(text, "  Sk:   {}", show.formula(&sk.open));
        let _ = writeln!(text, "  free: {}", sk.free_vars.join(" "));
        axioms.push(json!({
            "source": show.formula(&a.source),
            "rnnf": show.formula(&sk.rnnf),
            "s_form": show.formula(&sk.s_form),
            "open": show.formula(&sk.open),
            "free_vars": sk.free_vars,
        }));
    }
    text += "\nsymbols:\n";
    for line in th.registry().listing() {
        let _ = writeln!(text, "  {line}");
    }
    Ok(Report {
        command: "skolemize",
        status: Status::Ok,
        text,
        fields: json!({ "theory": th.name, "axioms": axioms, "symbols": show.symbols() }),
    })
}

/// Shared rendering of a search outcome. `witness_status` and
/// `inconsistent_status` say what each outcome means for the command.
fn outcome(
    th: &Theory,
    out: &SearchOutcome,
    search: &Search,
    witness_status: Status,
    inconsistent_status: Status,
) -> (Status, String, Value) {
    let show = Show(th.registry());
    let mut text = String::new();
    let (status, detail) = match out {
        SearchOutcome::Witness { evaluation, .. } => {
            let _ = writeln!(text, "evaluation: {}", show.evaluation(evaluation));
            text += "classes:\n";
            for (k, b) in evaluation.blocks().into_iter().enumerate() {
                let members: Vec<String> = b.iter().map(|&i| show.term(evaluation.domain().get(i))).collect();
                let _ = writeln!(text, "  {k}: {}", members.join(", "));
            }
            (witness_status, json!({ "evaluation": show.evaluation_json(evaluation) }))
        }
        SearchOutcome::Inconsistent { certificate, .. } => {
            let (t, v) = show.certificate(certificate, certificate.verify(search.verify_max));
            text += &t;
            (inconsistent_status, json!({ "certificate": v }))
        }
        SearchOutcome::BudgetExhausted { .. } => {
            text += "node budget exhausted\n";
            (Status::Budget, json!({}))
        }
    };
    text += &stats_text(out.stats());
    let mut fields = detail;
    fields["stats"] = stats_json(out.stats());
    (status, text, fields)
}

pub fn solve(src: &TheorySource, terms: &std::path::Path, search: &Search) -> Result<Report, CliError> {
    let mut th = src.load()?;
    let dom = input::term_file(&mut th, terms)?;
    let constraints = theory_constraints(&th, &dom).len();
    let out = find_evaluation(&th, &dom, &search.options)?;
    let (status, body, mut fields) = outcome(&th, &out, search, Status::Witness, Status::Inconsistent);
    let mut text = header(&th);
    let _ = writeln!(text, "terms: {}\navailable instances: {constraints}\nresult: {}", dom.len(), status.name());
    text += &body;
    fields["theory"] = json!(th.name);
    fields["terms"] = json!(Show(th.registry()).terms(&dom));
    fields["instances"] = json!(constraints);
    Ok(Report { command: "solve", status, text, fields })
}

pub fn check_universal_cmd(
    src: &TheorySource,
    psi: &str,
    term: &str,
    terms: &std::path::Path,
    search: &Search,
) -> Result<Report, CliError> {
    let mut th = src.load()?;
    let psi = input::formula(psi, "--psi")?;
    let t = input::ground_term(&mut th, term, "--term")?;
    let dom = input::term_file(&mut th, terms)?;
    let out = check_universal(&th, &psi, &t, &dom, &search.options)?;
    // A witness here is a countermodel to the goal.
    let (status, body, mut fields) = outcome(&th, &out, search, Status::False, Status::True);
    let show = Show(th.registry());
    let goal = psi.substitute_free(&|_| Some(t.clone()));
    let mut text = header(&th);
    let _ = writeln!(text, "terms: {}\ngoal: {}\nresult: {}", dom.len(), show.formula(&goal), status.name());
    text += &body;
    fields["theory"] = json!(th.name);
    fields["goal"] = json!(show.formula(&goal));
    fields["terms"] = json!(show.terms(&dom));
    Ok(Report { command: "check-universal", status, text, fields })
}

fn sym_name(f: FunSym, show: &Show) -> String {
    match f {
        FunSym::Zero => "0".into(),
        FunSym::Succ => "S".into(),
        FunSym::Add => "+".into(),
        FunSym::Mul => "*".into(),
        FunSym::Skolem(id) => show.0.name_of(id).unwrap_or_else(|| id.to_string()),
    }
}

pub fn model(src: &TheorySource, terms: &std::path::Path, search: &Search) -> Result<Report, CliError> {
    let mut th = src.load()?;
    let dom = input::term_file(&mut th, terms)?;
    let out = find_evaluation(&th, &dom, &search.options)?;
    let SearchOutcome::Witness { evaluation, .. } = &out else {
        let (status, body, mut fields) = outcome(&th, &out, search, Status::Witness, Status::Inconsistent);
        fields["theory"] = json!(th.name);
        return Ok(Report { command: "model", status, text: header(&th) + "result: no model\n" + &body, fields });
    };
    let show = Show(th.registry());
    let m = extract_model(evaluation);
    let mut text = header(&th);
    let _ = writeln!(text, "elements: {}", m.size());
    let mut universe = Vec::new();
    for (k, block) in m.universe.iter().enumerate() {
        let names: Vec<String> = block.iter().map(|t| show.term(t)).collect();
        let _ = writeln!(text, "  e{k} = {{{}}}", names.join(", "));
        universe.push(names);
    }
    let order: Vec<String> = (0..m.size()).map(|k| format!("e{k}")).collect();
    let _ = writeln!(text, "order: {}", order.join(" < "));
    text += "tables:\n";
    let mut tables = serde_json::Map::new();
    for (f, table) in &m.functions {
        let name = sym_name(*f, &show);
        let entries: Vec<String> = table
            .iter()
            .map(|(args, v)| match args.len() {
                0 => format!("e{v}"),
                1 => format!("e{} -> e{v}", args[0]),
                _ => {
                    let a: Vec<String> = args.iter().map(|a| format!("e{a}")).collect();
                    format!("({}) -> e{v}", a.join(", "))
                }
            })
            .collect();
        let _ = writeln!(text, "  {name}: {}", entries.join(", "));
        let rows: Vec<Value> = table.iter().map(|(args, v)| json!({ "args": args, "value": v })).collect();
        tables.insert(name, Value::Array(rows));
    }
    let constraints = theory_constraints(&th, &dom);
    let true_count = constraints.iter().filter(|c| m.satisfies(&c.formula) == Some(true)).count();
    let _ = writeln!(text, "available instances true in the model: {true_count} of {}", constraints.len());
    text += &stats_text(out.stats());
    let fields = json!({
        "theory": th.name,
        "evaluation": show.evaluation_json(evaluation),
        "universe": universe,
        "tables": tables,
        "instances": constraints.len(),
        "instances_true": true_count,
        "stats": stats_json(out.stats()),
    });
    Ok(Report { command: "model", status: Status::Witness, text, fields })
}

pub fn refute(
    src: &TheorySource,
    base: &str,
    max_level: usize,
    max_terms: usize,
    search: &Search,
) -> Result<Report, CliError> {
    let mut th = src.load()?;
    let base = input::term_list(&mut th, base, "--base")?;
    let r = herbrand_refute(&th, &base, max_level, max_terms, &search.options)?;
    let show = Show(th.registry());
    let mut text = header(&th);
    let sizes: Vec<String> = r.sizes.iter().enumerate().map(|(k, n)| format!("{k}:{n}")).collect();
    let _ = writeln!(text, "level sizes: {}", sizes.join(" "));
    let (status, reason) = match r.reason {
        StopReason::Refuted => (Status::Inconsistent, "refuted"),
        StopReason::MaxLevel => (Status::Witness, "max-level"),
        StopReason::TermLimit => (Status::Budget, "term-limit"),
        StopReason::NodeBudget => (Status::Budget, "node-budget"),
    };
    let summary = match r.reason {
        StopReason::Refuted => format!("refuted at level {}", r.level),
        StopReason::MaxLevel => format!("no refutation up to level {}", r.level),
        StopReason::TermLimit => format!("stopped after level {}: next level exceeds {max_terms} terms", r.level),
        StopReason::NodeBudget => format!("node budget exhausted at level {}", r.level),
    };
    let _ = writeln!(text, "result: {summary}");
    let mut fields = json!({
        "theory": th.name,
        "base": show.terms(&base),
        "level": r.level,
        "reason": reason,
        "sizes": r.sizes,
        "stats": stats_json(r.outcome.stats()),
    });
    if let SearchOutcome::Inconsistent { certificate, .. } = &r.outcome {
        let (t, v) = show.certificate(certificate, certificate.verify(search.verify_max));
        text += &t;
        fields["certificate"] = v;
    }
    if let Some(w) = &r.last_witness {
        let _ = writeln!(text, "last witness: {}", show.evaluation(w));
        fields["last_witness"] = show.evaluation_json(w);
    }
    text += &stats_text(r.outcome.stats());
    Ok(Report { command: "refute", status, text, fields })
}

pub struct HullArgs<'a> {
    pub base: &'a str,
    pub level: usize,
    pub threshold: Option<&'a str>,
    pub full: bool,
    pub find: Option<&'a str>,
    pub max_terms: usize,
}

pub fn hull(src: &TheorySource, args: &HullArgs) -> Result<Report, CliError> {
    let mut th = src.load()?;
    let base = input::term_list(&mut th, args.base, "--base")?;
    let target = args.find.map(|s| input::ground_term(&mut th, s, "--find")).transpose()?;
    let j = match args.threshold {
        Some(s) => s.parse::<BigUint>().map_err(|e| CliError::Usage(format!("--threshold: {e}")))?,
        None => theory_threshold(&th),
    };
    let mode = if args.full { HullMode::Full } else { HullMode::for_theory(&th) };
    let symbols = admissible_symbols(th.registry(), &j, &mode);
    let show = Show(th.registry());
    let mut text = header(&th);
    let names: Vec<String> = symbols.iter().map(|(id, a)| format!("{id}/{a}")).collect();
    let _ = writeln!(text, "threshold: {j}\nskolem symbols: {}", names.join(" "));
    let mut lam = base.clone().with_provenance(Provenance::Hull { level: 0 });
    let mut sizes = vec![lam.len()];
    let mut status = Status::Ok;
    for _ in 0..args.level {
        let next: TermSet = hull_step(&lam, &j, th.registry(), &mode);
        if next.len() > args.max_terms {
            status = Status::Budget;
            break;
        }
        lam = next;
        sizes.push(lam.len());
    }
    let reached = sizes.len() - 1;
    let shown: Vec<String> = sizes.iter().enumerate().map(|(k, n)| format!("{k}:{n}")).collect();
    let _ = writeln!(text, "level sizes: {}", shown.join(" "));
    if status == Status::Budget {
        let _ = writeln!(text, "stopped: level {} would exceed {} terms", reached + 1, args.max_terms);
    }
    let _ = writeln!(text, "terms at level {reached}:");
    for t in lam.iter() {
        let _ = writeln!(text, "  {}", show.term(t));
    }
    let mut fields = json!({
        "theory": th.name,
        "threshold": j.to_string(),
        "symbols": names,
        "sizes": sizes,
        "level": reached,
        "terms": show.terms(&lam),
    });
    if let Some(t) = &target {
        let found = hull_level(&base, args.level, &symbols, t);
        match found {
            Some(k) => {
                let _ = writeln!(text, "{} first appears at level {k}", show.term(t));
            }
            None => {
                let _ = writeln!(text, "{} is not within level {}", show.term(t), args.level);
            }
        }
        fields["find"] = json!({ "term": show.term(t), "level": found });
    }
    Ok(Report { command: "hull", status, text, fields })
}

pub fn q_chain(src: Option<&TheorySource>, n: usize, csv: bool) -> Result<Report, CliError> {
    let th = match src {
        Some(s) => s.load()?,
        None => preset("OMEGA0")?,
    };
    let squaring = input::formula("exists y <= x*x (y = x*x)", "squaring formula")?;
    let q = th
        .registry()
        .lookup(&squaring)
        .ok_or_else(|| CliError::Usage(format!("theory {} has no Skolem symbol for squaring", th.name)))?;
    let report = growth_report(n, q);
    let text = if csv { report.to_csv() } else { report.to_table() };
    let rows: Vec<Value> =
        report.rows.iter().map(|r| json!({ "i": r.i, "value_bits": r.value_bits, "code_bits": r.code_bits })).collect();
    Ok(Report {
        command: "code",
        status: Status::Ok,
        text,
        fields: json!({ "kind": "q-chain", "symbol": q.to_string(), "rows": rows, "fitted_c": report.c }),
    })
}

pub fn omega_cmd(n: u32, x: &str, budget_bits: u64) -> Result<Report, CliError> {
    let x: BigUint = x.parse().map_err(|e| CliError::Usage(format!("--x: {e}")))?;
    let v = omega(n, &x, budget_bits)?;
    let text = format!("omega_{n}({x}) = {v}\nbits: {}\n", v.bits());
    Ok(Report {
        command: "code",
        status: Status::Ok,
        text,
        fields: json!({ "kind": "omega", "n": n, "x": x.to_string(), "value": v.to_string(), "bits": v.bits() }),
    })
}

pub fn code_term(text: &str) -> Result<Report, CliError> {
    let t: Term = parse_term(text).map_err(|source| CliError::Parse { origin: "term".into(), source })?;
    let c = encode_term(&t);
    let back = decode_term(&c)?;
    let shown = t.to_string();
    let out = format!("term: {shown}\ncode: {}\nbits: {}\nround trip: {}\n", c.value(), c.bits(), back == t);
    Ok(Report {
        command: "code",
        status: Status::Ok,
        text: out,
        fields: json!({ "kind": "term", "input": shown, "code": c.value().to_string(), "bits": c.bits() }),
    })
}

pub fn code_formula(text: &str) -> Result<Report, CliError> {
    let f = input::formula(text, "formula")?;
    let c = encode_formula(&f);
    let back = decode_formula(&c)?;
    let out = format!("formula: {f}\ncode: {}\nbits: {}\nround trip: {}\n", c.value(), c.bits(), back == f);
    Ok(Report {
        command: "code",
        status: Status::Ok,
        text: out,
        fields: json!({ "kind": "formula", "input": f.to_string(), "code": c.value().to_string(), "bits": c.bits() }),
    })
}
