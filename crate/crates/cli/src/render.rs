//! Plain-text rendering of reports. Each listed prime appears on exactly one line.

use std::fmt::Write;

use isosieve::factor::factor;
use isosieve::strategy::{
    EliminationOutcome, IntermediateRecord, Mode, Reason, SieveReport, Status, Step,
};
use num_bigint::BigInt;

use crate::document::{RqResult, TimedStep};

fn reason_name(r: Option<Reason>) -> String {
    match r {
        Some(r) => serde_json::to_value(r)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default(),
        None => "-".to_string(),
    }
}

fn outcome_line(o: &EliminationOutcome) -> String {
    // the evidence item matching the verdict, else the last one
    let ev = o
        .evidence
        .iter()
        .find(|e| Some(e.criterion) == o.reason)
        .or(o.evidence.last());
    let detail = match ev {
        Some(e) => match e.aux_prime {
            Some(q) => format!("{} (q = {q})", e.note),
            None => e.note.clone(),
        },
        None => String::new(),
    };
    format!("  {:<7} {:<26} {}", o.p, reason_name(o.reason), detail)
}

fn short_int(x: &BigInt) -> String {
    let s = x.to_string();
    if s.len() <= 60 {
        s
    } else {
        format!("<{} digits>", s.trim_start_matches('-').len())
    }
}

fn chain_line(r: &IntermediateRecord) -> String {
    let poss = if r.possibilities.len() == 1 {
        let p = r.possibilities[0];
        format!("n_q = {}, r = {}", p.n_q, p.r)
    } else {
        format!("{} (n_q, r) possibilities", r.possibilities.len())
    };
    let gcd = r
        .running_gcd_factored
        .clone()
        .unwrap_or_else(|| short_int(&r.running_gcd));
    let surv = match &r.survivors {
        Some(s) if s.is_empty() => "survivors: none".to_string(),
        Some(s) => format!(
            "survivors: {}",
            s.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
        ),
        None => "survivors: not yet finite".to_string(),
    };
    format!("  q = {:<3} {:<28} gcd = {gcd}; {surv}", r.q, poss)
}

pub fn report(rep: &SieveReport, timing: Option<&[TimedStep]>) -> String {
    let mut out = String::new();
    match &rep.mode {
        Mode::FixedField { d } => {
            let _ = writeln!(out, "Q(sqrt({d}))");
        }
        Mode::Family { exponent, inert } => {
            let _ = write!(
                out,
                "real quadratic fields with class-group exponent {exponent}"
            );
            if !inert.is_empty() {
                let list: Vec<String> = inert.iter().map(u64::to_string).collect();
                let _ = write!(out, ", {} inert", list.join(" and "));
            }
            let _ = writeln!(out);
        }
    }
    if let Some(f) = &rep.field {
        let group = if f.class_structure.is_empty() {
            "trivial".to_string()
        } else {
            f.class_structure
                .iter()
                .map(|n| format!("Z/{n}"))
                .collect::<Vec<_>>()
                .join(" x ")
        };
        let _ = writeln!(out, "  discriminant      {}", f.disc);
        let _ = writeln!(out, "  integral basis    {}", f.integral_basis);
        let _ = writeln!(
            out,
            "  class group       {group} (h = {}, exponent {})",
            f.class_number, f.class_exponent
        );
        if let Some(u) = &f.fundamental_unit {
            let norm = f
                .fundamental_unit_norm
                .map_or(String::new(), |n| format!(" (norm {n})"));
            let _ = writeln!(out, "  fundamental unit  {u}{norm}");
        }
        let ram: Vec<String> = f.ramified_primes.iter().map(u64::to_string).collect();
        let _ = writeln!(out, "  ramified primes   {}", ram.join(", "));
    }

    for step in [Step::Constant, Step::NonConstant] {
        let recs: Vec<&IntermediateRecord> = rep
            .intermediates
            .iter()
            .filter(|r| r.step == step)
            .collect();
        if recs.is_empty() {
            continue;
        }
        let title = match step {
            Step::Constant => "constant signature (0,0): gcd of R_q",
            _ => "non-constant signature (12,0): gcd of R_q*M_q",
        };
        let _ = writeln!(out, "\n{title}");
        for r in recs {
            let _ = writeln!(out, "{}", chain_line(r));
        }
    }

    for (status, title) in [
        (Status::Survives, "Survives"),
        (Status::Unresolved, "Unresolved"),
        (Status::Eliminated, "Eliminated"),
    ] {
        let _ = writeln!(out, "\n{title}");
        let rows: Vec<&EliminationOutcome> =
            rep.outcomes.iter().filter(|o| o.status == status).collect();
        if rows.is_empty() {
            let _ = writeln!(out, "  (none)");
        }
        for o in rows {
            let _ = writeln!(out, "{}", outcome_line(o));
        }
    }
    if !rep.unresolved_classes.is_empty() {
        let _ = writeln!(out, "\nUnresolved classes");
        for c in &rep.unresolved_classes {
            let _ = writeln!(out, "  - {c}");
        }
    }
    let _ = writeln!(out, "\nPrimes not listed");
    for n in &rep.notes {
        let _ = writeln!(out, "  - {n}");
    }
    if let Some(steps) = timing {
        let _ = writeln!(out, "\nTiming");
        for s in steps {
            let _ = writeln!(out, "  {:<14} {:.1} ms", s.name, s.millis);
        }
    }
    out
}

pub fn factored(x: &BigInt) -> String {
    factor(x, 1 << 20).to_string()
}

pub fn rq(res: &RqResult) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Q(sqrt({})), q = {} ({}, n_q = {}, r = {}, alpha = {}), signature {}",
        res.d, res.q, res.splitting, res.n_q, res.r, res.alpha, res.signature
    );
    let r = res
        .r_q_factored
        .clone()
        .unwrap_or_else(|| res.r_q.to_string());
    let m = res
        .m_q_factored
        .clone()
        .unwrap_or_else(|| res.m_q.to_string());
    let _ = writeln!(out, "R_{} = {r}", res.q);
    let _ = writeln!(out, "M_{} = {m}", res.q);
    out
}
