//! One function per subcommand, each producing a text and a JSON report.

use std::fmt::Display;

use mall_goi::algebra::{ReductionMode, Semiring};
use mall_goi::equations::{check_solution, proof_system, solve, SolveError};
use mall_goi::exec::{qexec, qexec_paired, sigma, ExecOptions, ExecReport, Nilpotency};
use mall_goi::mall::{check_proof, ensure_eigenweights, parse_proof, print_proof, CheckedProof, ParseError, Sequent};
use mall_goi::matrix::{interpret_checked, labels, measure_checked, render_entries, to_json, Grid, Matrix};
use mall_goi::nets::{check_net, translate_checked, LinkingSet, NetCaps, NetError};
use mall_goi::rewrite::{
    normalize, verify_invariance_autonomous, verify_invariance_external, CommuteMode, Mismatch, RedexOrder,
    ReductionTrace, Strategy,
};
use serde_json::{json, Value};

use crate::{Commute, Format, Invariance, Mode, Opts, Outcome, Redex};

struct Report {
    passed: bool,
    text: String,
    json: Value,
}

impl Report {
    fn pass(text: String, json: Value) -> Self {
        Report { passed: true, text, json }
    }
}

type CmdResult = Result<Report, String>;

pub fn run(cmd: &str, label: &str, src: &str, o: &Opts) -> Outcome {
    let r = match cmd {
        "check" => check(src),
        "net" => net(src, o),
        "interpret" => interpret(src),
        "measure" => measure(src),
        "exec" => exec(src, o),
        "nilp" => nilp(src, o),
        "normalize" => normalize_cmd(src, o),
        "invariance" => invariance(src, o),
        "eq" => eq(src),
        "solve" => solve_cmd(src),
        _ => Err(format!("unknown command {cmd}")),
    };
    match r {
        Err(e) => Outcome::usage(format!("{label}: {e}")),
        Ok(rep) => {
            let code = if rep.passed { 0 } else { 1 };
            let out = match o.format {
                Format::Text => rep.text,
                Format::Json => {
                    let doc = json!({
                        "tool": format!("goi {}", env!("CARGO_PKG_VERSION")),
                        "command": cmd,
                        "input": label,
                        "settings": settings(o),
                        "status": if rep.passed { "pass" } else { "fail" },
                        "report": rep.json,
                    });
                    format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable"))
                }
            };
            Outcome { code, out }
        }
    }
}

fn settings(o: &Opts) -> Value {
    json!({
        "mode": format!("{:?}", o.mode).to_lowercase(),
        "bound": o.bound,
        "paired": o.paired,
        "commute": format!("{:?}", o.commute).to_lowercase(),
        "redex": format!("{:?}", o.redex).to_lowercase(),
        "step_bound": o.step_bound,
        "cap_switchings": o.cap_switchings,
        "cap_linkings": o.cap_linkings,
        "rendering": "canonical",
    })
}

fn load(src: &str) -> Result<CheckedProof, String> {
    let p = parse_proof(src).map_err(|e| e.to_string())?;
    let p = ensure_eigenweights(&p).map_err(|e| e.to_string())?;
    check_proof(&p).map_err(|e| e.to_string())
}

fn strategy(o: &Opts) -> Strategy {
    Strategy {
        redex: match o.redex {
            Redex::Leftmost => RedexOrder::Leftmost,
            Redex::Rightmost => RedexOrder::Rightmost,
        },
        commute: match o.commute {
            Commute::Duplicating => CommuteMode::Duplicating,
            Commute::Superposed => CommuteMode::Superposed,
        },
    }
}

fn check(src: &str) -> CmdResult {
    match parse_proof(src) {
        Err(e @ ParseError::Rule { .. }) => {
            Ok(Report { passed: false, text: format!("rule error: {e}\n"), json: json!({ "error": e.to_string() }) })
        }
        Err(e) => Err(e.to_string()),
        Ok(p) => {
            let p = ensure_eigenweights(&p).map_err(|e| e.to_string())?;
            let c = check_proof(&p).map_err(|e| e.to_string())?;
            let s = c.sequent.to_string();
            let json = json!({
                "sequent": s,
                "rules": p.size(),
                "cuts": p.count_cuts(),
                "withs": p.count_with(),
                "proof": print_proof(&p),
            });
            Ok(Report::pass(format!("{s}\n"), json))
        }
    }
}

fn net(src: &str, o: &Opts) -> CmdResult {
    let set = if src.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(src).map_err(|e| e.to_string())?;
        LinkingSet::from_json(&v).map_err(|e| e.to_string())?
    } else {
        translate_checked(&load(src)?)
    };
    let caps = NetCaps { switchings: o.cap_switchings, linkings: o.cap_linkings, ..NetCaps::default() };
    let report = check_net(&set, &caps).map_err(|e| match e {
        NetError::SizeCapExceeded { .. } => format!("{e} (raise --cap-switchings or --cap-linkings)"),
        e => e.to_string(),
    })?;
    let mut text = format!("{}\nlinkings: {}\n", set.sequent, set.len());
    for (name, v) in report.verdicts() {
        match v.witness() {
            None => text.push_str(&format!("{name} pass\n")),
            Some(w) => text.push_str(&format!("{name} fail: {w}\n")),
        }
    }
    let json = json!({ "sequent": set.sequent.to_string(), "net": set.to_json(), "criteria": report });
    Ok(Report { passed: report.passed(), text, json })
}

fn matrix_report<T: Semiring + Display>(m: &Matrix<T>, s: &Sequent) -> Report {
    Report::pass(format!("{s}\n{}", render_entries(m, s)), json!({ "sequent": s.to_string(), "matrix": to_json(m, s) }))
}

fn interpret(src: &str) -> CmdResult {
    let c = load(src)?;
    let u = interpret_checked(&c).map_err(|e| e.to_string())?;
    Ok(matrix_report(&u, &c.sequent))
}

fn measure(src: &str) -> CmdResult {
    let c = load(src)?;
    let m = measure_checked(&c).map_err(|e| e.to_string())?;
    Ok(matrix_report(&m, &c.sequent))
}

fn mode_of(m: Mode) -> ReductionMode {
    match m {
        Mode::Raw => ReductionMode::raw(),
        Mode::Cplus => ReductionMode::cplus(),
        Mode::Cplustimes | Mode::Paired => ReductionMode::cplustimes(),
    }
}

fn nilpotency_text(n: Nilpotency) -> String {
    match n {
        Nilpotency::Index(i) => format!("n = {i}"),
        Nilpotency::Divergent { bound } => format!("divergent: no zero power within {bound}"),
    }
}

fn render_grid<T: Semiring + Display>(g: &Grid<T>, s: &Sequent) -> String {
    let occs: Vec<_> = g.entries().flat_map(|(r, c, _)| [r, c]).collect();
    let lab = labels(s, &occs);
    g.entries().map(|(r, c, v)| format!("  {} | {} | {v}\n", lab[&r], lab[&c])).collect()
}

fn exec_report<T: Semiring + Display>(r: &ExecReport<T>, s: &Sequent, mode: &str) -> Report {
    let mut text = format!("{s}\nmode: {mode}\n{}\n", nilpotency_text(r.nilpotency));
    for (k, g) in r.trace.iter().enumerate() {
        text.push_str(&format!("power {k}:\n{}", render_grid(g, s)));
    }
    text.push_str(&render_entries(&r.matrix, s));
    let trace: Vec<Value> = r
        .trace
        .iter()
        .map(|g| g.entries().map(|(r, c, v)| json!({ "row": r, "col": c, "value": v.to_string() })).collect())
        .collect();
    let json = json!({
        "sequent": s.to_string(),
        "mode": mode,
        "nilpotency": r.nilpotency,
        "matrix": to_json(&r.matrix, s),
        "trace": trace,
    });
    Report { passed: r.nilpotency.index().is_some(), text, json }
}

fn exec(src: &str, o: &Opts) -> CmdResult {
    let c = load(src)?;
    let u = interpret_checked(&c).map_err(|e| e.to_string())?;
    let opts = ExecOptions { bound: o.bound, trace: o.trace };
    let s = sigma(&u.index);
    if o.mode == Mode::Paired || o.paired {
        let m = measure_checked(&c).map_err(|e| e.to_string())?;
        let r = qexec_paired(&s, &u, &m, opts).map_err(|e| e.to_string())?;
        Ok(exec_report(&r, &c.sequent, "paired"))
    } else {
        let mode = mode_of(o.mode);
        let r = qexec(&s, &u, &mode, opts).map_err(|e| e.to_string())?;
        Ok(exec_report(&r, &c.sequent, &mode.to_string()))
    }
}

fn nilp(src: &str, o: &Opts) -> CmdResult {
    let c = load(src)?;
    let u = interpret_checked(&c).map_err(|e| e.to_string())?;
    let s = sigma(&u.index);
    let opts = ExecOptions::bound(o.bound);
    let (n, mode) = if o.mode == Mode::Paired || o.paired {
        let m = measure_checked(&c).map_err(|e| e.to_string())?;
        (qexec_paired(&s, &u, &m, opts).map_err(|e| e.to_string())?.nilpotency, "paired".to_string())
    } else {
        let mode = mode_of(o.mode);
        (qexec(&s, &u, &mode, opts).map_err(|e| e.to_string())?.nilpotency, mode.to_string())
    };
    let json = json!({ "mode": mode, "nilpotency": n });
    Ok(Report { passed: n.index().is_some(), text: format!("{}\n", nilpotency_text(n)), json })
}

fn trace_of(src: &str, o: &Opts) -> Result<ReductionTrace, String> {
    let c = load(src)?;
    normalize(&c.proof, strategy(o), o.step_bound).map_err(|e| e.to_string())
}

fn normalize_cmd(src: &str, o: &Opts) -> CmdResult {
    let t = trace_of(src, o)?;
    let mut text = String::new();
    if o.trace {
        for (k, (p, st)) in t.steps.iter().enumerate() {
            let at: Vec<String> = st.path.iter().map(|i| i.to_string()).collect();
            text.push_str(&format!(
                "{}. {} at root{} on {} {}\n   {}\n",
                k + 1,
                st.kind.name(),
                at.iter().map(|i| format!(".{i}")).collect::<String>(),
                st.cut,
                st.hom,
                print_proof(&p.proof)
            ));
        }
    }
    text.push_str(&format!(
        "steps: {}\ncomposite: {}\nnormal form: {}\n",
        t.steps.len(),
        t.composite,
        print_proof(t.normal_form())
    ));
    Ok(Report::pass(text, t.to_json()))
}

fn mismatch_text(m: &Option<Mismatch>) -> String {
    match m {
        None => "ok".into(),
        Some(m) => format!("mismatch at ({}, {}): got {}, want {}", m.row, m.col, m.got, m.want),
    }
}

fn invariance(src: &str, o: &Opts) -> CmdResult {
    let t = trace_of(src, o)?;
    let mut text = String::new();
    let mut json = serde_json::Map::new();
    let mut passed = true;
    if matches!(o.check, Invariance::External | Invariance::Both) {
        let r = verify_invariance_external(&t, o.bound).map_err(|e| e.to_string())?;
        text.push_str("external:\n");
        for s in &r.steps {
            text.push_str(&format!("  step {} {}: {}\n", s.index, s.kind.name(), mismatch_text(&s.mismatch)));
        }
        text.push_str(&format!("  end-to-end: {}\n", mismatch_text(&r.end_to_end)));
        passed &= r.passed();
        json.insert("external".into(), serde_json::to_value(&r).expect("serializable"));
    }
    if matches!(o.check, Invariance::Autonomous | Invariance::Both) {
        let r = verify_invariance_autonomous(&t, o.bound).map_err(|e| e.to_string())?;
        text.push_str("autonomous:\n");
        for s in &r.steps {
            let status = match &s.unsolved {
                Some(e) => format!("unsolved: {e}"),
                None => mismatch_text(&s.mismatch),
            };
            text.push_str(&format!("  step {} {}: {status}\n", s.index, s.kind.name()));
        }
        text.push_str(&format!("  end-to-end: {}\n", mismatch_text(&r.end_to_end)));
        passed &= r.passed();
        json.insert("autonomous".into(), serde_json::to_value(&r).expect("serializable"));
    }
    Ok(Report { passed, text, json: Value::Object(json) })
}

fn strings<T: Display>(xs: impl IntoIterator<Item = T>) -> Vec<String> {
    xs.into_iter().map(|x| x.to_string()).collect()
}

fn eq(src: &str) -> CmdResult {
    let c = load(src)?;
    let sys = proof_system(&c).map_err(|e| e.to_string())?;
    let json = json!({
        "equations": strings(&sys.equations),
        "delta_literals": strings(&sys.delta_literals),
        "gamma_literals": strings(&sys.gamma_literals),
    });
    Ok(Report::pass(sys.render(), json))
}

fn solve_cmd(src: &str) -> CmdResult {
    let c = load(src)?;
    let sys = proof_system(&c).map_err(|e| e.to_string())?;
    let s = match solve(&c.proof) {
        Ok(s) => s,
        Err(SolveError::Unsolved(e)) => {
            return Ok(Report { passed: false, text: format!("unsolved: {e}\n"), json: json!({ "unsolved": e }) })
        }
        Err(e) => return Err(e.to_string()),
    };
    let lits = sys.delta_literals.iter().chain(&sys.gamma_literals);
    let map: Vec<(String, String)> = lits.map(|l| (l.to_string(), s.hom.image(*l).to_string())).collect();
    let mut text: String = map.iter().map(|(l, p)| format!("{l} ↦ {p}\n")).collect();
    if !s.free.is_empty() {
        text.push_str(&format!("free: {}\n", strings(&s.free).join(", ")));
    }
    let verdict = check_solution(&sys, &s.hom);
    if let Err(e) = &verdict {
        text.push_str(&format!("check failed on {e}\n"));
    }
    let json = json!({
        "hom": map.iter().cloned().collect::<std::collections::BTreeMap<_, _>>(),
        "free": strings(&s.free),
        "check": verdict.as_ref().map_or_else(|e| e.to_string(), |_| "ok".to_string()),
    });
    Ok(Report { passed: verdict.is_ok(), text, json })
}
