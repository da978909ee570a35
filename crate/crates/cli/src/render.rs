use std::fmt::Write;

use hypercert_core::blowup::BlowupStatus;
use hypercert_core::census::CensusReport;
use hypercert_core::codim::{CodimReport, IndexedBound, Relation};
use hypercert_core::membership::LedgerStatus;
use hypercert_core::regularity::Condition;
use hypercert_core::{MembershipReport, MembershipVerdict, PointKind, PointRecord};

fn coords(c: &[String]) -> String {
    format!("({})", c.join(":"))
}

fn kind(k: PointKind) -> String {
    match k {
        PointKind::Nonsingular => "nonsingular".into(),
        PointKind::QuadraticRank(a) => format!("quadratic singularity of rank {a}"),
        PointKind::HigherMultiplicity(m) => format!("singular point of multiplicity {m}"),
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "holds"
    } else {
        "FAILS"
    }
}

pub fn point(r: &PointRecord) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "point {}: {}", coords(&r.point), kind(r.kind));
    if let Some(g) = &r.condition_g {
        let _ = writeln!(s, "  (G) {}", verdict(g.verdict));
        let _ = writeln!(s, "    diagonal coefficients: {}", g.coefficients.join(", "));
        let _ = writeln!(s, "    kernel cubic: {}", g.restricted_cubic);
        let _ = writeln!(s, "    dim Sing(kernel cubic): {}", g.cubic_sing_dim);
        let _ = writeln!(s, "    h: {}", g.h);
    }
    if let Some(v) = r.regularity.as_ref().filter(|v| v.condition == Condition::VacuousM5) {
        let _ = writeln!(s, "  regularity {}: no sequence condition at nonsingular points for M = 5", verdict(v.pass));
    } else if let Some(v) = &r.regularity {
        let _ = writeln!(
            s,
            "  {:?} {}: q{:?} cut out dimension {} (expected {})",
            v.condition,
            verdict(v.pass),
            v.sequence_checked,
            v.actual_dim,
            v.expected_dim
        );
    }
    if let Some(b) = &r.blowup {
        let count = |st: BlowupStatus| b.verdicts.iter().filter(|v| v.status == st).count();
        let _ = writeln!(
            s,
            "  blow-up: {} kernel points examined, {} on Q: rank {} at {}, rank {} at {}, rank {} at {}",
            b.points_examined,
            b.verdicts.len(),
            b.rank + 2,
            count(BlowupStatus::RankAplus2),
            b.rank + 1,
            count(BlowupStatus::RankAplus1),
            b.rank,
            count(BlowupStatus::RankA),
        );
        let _ = writeln!(s, "    formula and direct computation agree: {}", b.formula_direct_agree);
    }
    s
}

pub fn membership(r: &MembershipReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "M = {}, field {} [{}]", r.m, r.field, r.label);
    match (r.singular_locus_dim, r.singular_locus_dim_exact) {
        (Some(d), true) => {
            let _ = writeln!(s, "dim Sing F = {d}");
        }
        (Some(d), false) => {
            let _ = writeln!(s, "dim Sing F <= {d}");
        }
        (None, _) => {
            let _ = writeln!(s, "dim Sing F unknown");
        }
    }
    for p in &r.points {
        s.push_str(&point(p));
    }
    let _ = writeln!(s, "ledger:");
    for e in &r.ledger {
        let status = match e.status {
            LedgerStatus::Done => "done",
            LedgerStatus::NotChecked => "not checked",
            LedgerStatus::BudgetExceeded => "budget exceeded",
        };
        let _ = writeln!(s, "  {}: {status}; {}", e.item, e.detail);
    }
    for w in &r.violations {
        let at = w.point.as_ref().map(|p| format!(" at {}", coords(p))).unwrap_or_default();
        let _ = writeln!(s, "violation: {}{at}: {}", w.condition, w.detail);
    }
    let _ = writeln!(s, "global computations complete: {}", r.global_complete);
    let _ = match &r.verdict {
        MembershipVerdict::ConditionsVerified => writeln!(s, "verdict: conditions verified at the checked points"),
        MembershipVerdict::ConditionViolated { witness } => writeln!(s, "verdict: condition {} violated", witness.condition),
        MembershipVerdict::Inconclusive { reason } => writeln!(s, "verdict: inconclusive ({reason})"),
    };
    s
}

fn bounds(b: &[IndexedBound]) -> String {
    b.iter().map(|x| format!("{}:{}", x.index, x.value)).collect::<Vec<_>>().join(" ")
}

pub fn codim(r: &CodimReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "M = {}", r.m);
    let _ = writeln!(s, "gamma = {}", r.gamma);
    let _ = writeln!(s, "dim P = {}", r.dim_p);
    let _ = writeln!(s, "B_G = {}{}", r.b_g.value, if r.b_g.asserted { " (asserted)" } else { "" });
    if let Some(b1) = &r.b1 {
        let _ = writeln!(s, "B_1 by a: {}  min {}", bounds(&b1.per_index), b1.min);
    }
    if let Some(b2) = &r.b2 {
        let _ = writeln!(s, "B_2 = {b2}");
    }
    let _ = writeln!(s, "B_3 by a: {}  (a = M: {})", bounds(&r.b3.per_a), r.b3.a_equals_m);
    let _ = writeln!(s, "B_3 by b: {}", bounds(&r.b3.per_b));
    let h = &r.h_analysis;
    let _ = writeln!(s, "h(t): {}", bounds(&h.values));
    let _ = writeln!(s, "h(3) = {}, h(M-2) = {}, h(M-1) = {}", h.h3, h.h_m_minus_2, h.h_m_minus_1);
    let _ = writeln!(
        s,
        "min-h over candidates = {} at t = {}; exhaustive min = {} at t in {:?}",
        h.candidate_min,
        h.minimizer.argument(r.m),
        h.true_min,
        h.true_argmin
    );
    let _ = writeln!(s, "t* in [M-2, M-1]: {}", h.t_star_bracketed);
    let _ = writeln!(s, "inequalities:");
    for c in &r.theorem03.checks {
        let rel = match (c.relation, c.equality) {
            (_, true) => "=",
            (Relation::Greater, _) => ">",
            (Relation::GreaterOrEqual, _) => ">=",
        };
        let _ = writeln!(
            s,
            "  {}: {} {rel} {} {}{}",
            c.name,
            c.lhs,
            c.rhs,
            verdict(c.holds),
            if c.asserted { " (asserted)" } else { "" }
        );
    }
    let _ = writeln!(s, "codim(P \\ F) >= gamma: {}", verdict(r.theorem03.verdict));
    s
}

pub fn census(r: &CensusReport) -> String {
    let c = &r.config;
    let mut s = String::new();
    let checks: Vec<String> = c.checks.iter().map(|k| k.to_string()).collect();
    let _ = writeln!(
        s,
        "census M = {}, p = {}, {} samples, seed {}, checks [{}] [{}]",
        c.m,
        c.p,
        c.samples,
        c.seed,
        checks.join(","),
        r.label
    );
    let _ = writeln!(s, "points of P^M: {}; mean points on F: {}", r.point_space_size, r.mean_points_on_f);
    let _ = writeln!(s, "singular points found: {}", r.singular_points_total);
    for (k, n) in &r.kind_counts {
        let _ = writeln!(s, "  {k}: {n}");
    }
    for t in &r.conditions {
        let h = t.heuristic.as_ref().map(|h| format!(", heuristic {h}")).unwrap_or_default();
        let _ = writeln!(s, "{}: {}/{} failed (frequency {}{h})", t.name, t.failures, t.tested, t.frequency);
    }
    let cal = &r.calibration;
    let _ = writeln!(
        s,
        "calibration: observed {} in band [{:.5}, {:.5}] (expectation between {} and {}): {}",
        cal.observed, cal.band[0], cal.band[1], cal.lower, cal.upper, cal.within_band
    );
    s
}
