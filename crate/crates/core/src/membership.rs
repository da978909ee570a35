//! Membership in the good family: the global singular-locus bound, every
//! checked point classified and tested against (G) and (R1)/(R2)/(R3), and
//! for quintics the plane and singular-line exclusions over `F_p`.

use serde::{Deserialize, Serialize};

use crate::blowup::{blow_up_rank3_point, BlowupStatus, Rank3Blowup};
use crate::enumerate::{check_no_planes_m5, check_no_singular_line_in_3space_m5, singular_points, DEFAULT_ENUM_BUDGET};
use crate::error::{Error, Result};
use crate::expansion::{expand_at, ProjectivePoint};
use crate::field::{Field, PrimeField};
use crate::groebner::Budget;
use crate::input::{parse_point, Hypersurface};
use crate::poly::Polynomial;
use crate::records::{elem_strings, PointRecord};
use crate::regularity::{check_regularity, Condition};
use crate::singularity::{
    condition_g_from_expansion, kind_of_expansion, singular_locus_dimension, singular_locus_dimension_bound, PointKind,
    PointReport,
};

/// Prime used to bound the singular locus of a form over `Q`.
pub const BOUND_PRIME: u64 = 32003;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub condition: String,
    pub point: Option<Vec<String>>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum MembershipVerdict {
    /// Every condition holds at the checked points; see `global_complete`.
    ConditionsVerified,
    ConditionViolated { witness: Witness },
    Inconclusive { reason: String },
}

impl MembershipVerdict {
    pub fn exit_code(&self) -> i32 {
        match self {
            MembershipVerdict::ConditionsVerified => 0,
            MembershipVerdict::ConditionViolated { .. } => 1,
            MembershipVerdict::Inconclusive { .. } => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LedgerStatus {
    Done,
    NotChecked,
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub item: String,
    pub status: LedgerStatus,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub m: usize,
    pub field: String,
    /// Finite-field verdicts are evidence about a reduction, not a certificate.
    pub label: String,
    /// Projective dimension of `Sing F`, or an upper bound for it.
    pub singular_locus_dim: Option<i64>,
    pub singular_locus_dim_exact: bool,
    /// Lower bound when the dimension is only bounded.
    pub sing_codim_in_f: Option<i64>,
    pub points: Vec<PointRecord>,
    pub violations: Vec<Witness>,
    pub ledger: Vec<LedgerEntry>,
    /// Singular-locus dimension, singular-point search and the quintic
    /// plane/line checks all ran to completion.
    pub global_complete: bool,
    pub verdict: MembershipVerdict,
}

#[derive(Clone, Debug)]
pub struct MembershipOptions {
    /// Points to check, as `a0:a1:…:aM`.
    pub points: Vec<String>,
    /// Enumerate every rational singular point (finite fields only).
    pub all_fp_points: bool,
    /// Run the plane and singular-line checks for `M = 5` (finite fields only).
    pub m5_checks: bool,
    pub groebner_budget: Budget,
    pub enum_budget: u64,
}

impl Default for MembershipOptions {
    fn default() -> Self {
        MembershipOptions {
            points: Vec::new(),
            all_fp_points: false,
            m5_checks: false,
            groebner_budget: Budget::default(),
            enum_budget: DEFAULT_ENUM_BUDGET,
        }
    }
}

/// A point with every applicable check run.
#[derive(Clone, Debug)]
pub struct PointAnalysis<F: Field> {
    pub report: PointReport<F>,
    pub blowup: Option<Rank3Blowup<F>>,
    pub violations: Vec<Witness>,
    pub inconclusive: Vec<String>,
}

impl<F: Field> PointAnalysis<F> {
    pub fn record(&self) -> PointRecord {
        PointRecord::from_report(&self.report, self.blowup.as_ref())
    }
}

fn witness<F: Field>(condition: &str, o: &ProjectivePoint<F>, detail: String) -> Witness {
    Witness { condition: condition.into(), point: Some(elem_strings(o.field(), o.coords())), detail }
}

fn condition_name(c: Condition) -> &'static str {
    match c {
        Condition::R1 => "(R1)",
        Condition::R2 => "(R2)",
        Condition::R3 => "(R3)",
        Condition::VacuousM5 => "regularity",
    }
}

/// Classifies `o` and runs (G), the applicable regularity condition, and
/// over a finite field the blow-up of a rank-3 point. Budget overruns are
/// collected in `inconclusive`; other errors are returned.
pub fn analyze_point<F: Field>(f: &Polynomial<F>, o: &ProjectivePoint<F>, budget: Budget) -> Result<PointAnalysis<F>> {
    let exp = expand_at(f, o)?;
    let kind = kind_of_expansion(&exp)?;
    let mut violations = Vec::new();
    let mut inconclusive = Vec::new();
    let mut condition_g = None;
    let mut regularity = None;
    let mut blowup = None;
    let budgeted = |label: &str, e: Error, inconclusive: &mut Vec<String>| -> Result<()> {
        if e.is_budget() {
            inconclusive.push(format!("{label} at {o}: {e}"));
            Ok(())
        } else {
            Err(e)
        }
    };
    match kind {
        PointKind::QuadraticRank(a) if a <= 2 => {
            violations.push(witness("quadratic rank >= 3", o, format!("quadratic singularity of rank {a}")))
        }
        PointKind::HigherMultiplicity(m) => {
            violations.push(witness("quadratic rank >= 3", o, format!("singular point of multiplicity {m}")))
        }
        _ => {}
    }
    if kind == PointKind::QuadraticRank(3) {
        match condition_g_from_expansion(&exp, budget) {
            Ok(g) => {
                if !g.verdict {
                    let detail = if g.restricted_cubic.is_zero() {
                        "the kernel cubic vanishes identically".to_string()
                    } else if g.cubic_sing_dim > 0 {
                        format!("the kernel cubic has a singular locus of dimension {}", g.cubic_sing_dim)
                    } else {
                        format!("h = {} vanishes at a singular point of the kernel cubic", g.h)
                    };
                    violations.push(witness("(G)", o, detail));
                }
                condition_g = Some(g);
            }
            Err(e) => budgeted("(G)", e, &mut inconclusive)?,
        }
        if f.field().elements().is_some() {
            match blow_up_rank3_point(f, o, None, budget) {
                Ok(b) => blowup = Some(b),
                Err(e) => budgeted("blow-up", e, &mut inconclusive)?,
            }
        }
    }
    let regular_kind = matches!(kind, PointKind::Nonsingular) || matches!(kind, PointKind::QuadraticRank(a) if a >= 3);
    if regular_kind {
        match check_regularity(&exp, budget) {
            Ok(v) => {
                if !v.pass {
                    violations.push(witness(
                        condition_name(v.condition),
                        o,
                        format!(
                            "common zeros of q{:?} have dimension {} instead of {}",
                            v.sequence_checked, v.actual_dim, v.expected_dim
                        ),
                    ));
                }
                regularity = Some(v);
            }
            Err(e) => budgeted("regularity", e, &mut inconclusive)?,
        }
    }
    Ok(PointAnalysis {
        report: PointReport { point: o.clone(), kind, condition_g, regularity },
        blowup,
        violations,
        inconclusive,
    })
}

struct Collected {
    points: Vec<PointRecord>,
    violations: Vec<Witness>,
    ledger: Vec<LedgerEntry>,
    inconclusive: Vec<String>,
    singular_locus_dim: Option<i64>,
    singular_locus_dim_exact: bool,
    global_complete: bool,
}

fn entry(item: &str, status: LedgerStatus, detail: impl Into<String>) -> LedgerEntry {
    LedgerEntry { item: item.into(), status, detail: detail.into() }
}

/// Dimension of the singular locus, or an upper bound for it.
struct SingularBound {
    dim: i64,
    exact: bool,
    method: String,
}

fn run<F: Field>(
    f: &Polynomial<F>,
    opts: &MembershipOptions,
    global: &dyn Fn(i64) -> Result<SingularBound>,
    enumerate: Option<&dyn Fn() -> Result<Vec<ProjectivePoint<F>>>>,
) -> Result<Collected> {
    let m = f.nvars() - 1;
    let budget = opts.groebner_budget;
    let mut ledger = Vec::new();
    let mut violations = Vec::new();
    let mut inconclusive = Vec::new();
    let mut global_complete = true;

    let required = if m == 5 { 4 } else { 5 };
    let mut exact = false;
    let singular_locus_dim = match global(required) {
        Ok(bound) => {
            let d = bound.dim;
            exact = bound.exact;
            let codim = (m as i64 - 1) - d;
            let relation = if exact { "=" } else { "<=" };
            ledger.push(entry("singular locus dimension", LedgerStatus::Done, format!("dim Sing F {relation} {d} ({})", bound.method)));
            if d >= 0 && codim < required {
                let w = Witness {
                    condition: format!("codim(Sing F in F) >= {required}"),
                    point: None,
                    detail: format!("dim Sing F = {d}, codimension {codim}"),
                };
                if exact {
                    violations.push(w);
                } else {
                    inconclusive.push(format!("only dim Sing F <= {d} is known"));
                }
            }
            Some(d)
        }
        Err(e) if e.is_budget() => {
            ledger.push(entry("singular locus dimension", LedgerStatus::BudgetExceeded, e.to_string()));
            inconclusive.push(format!("singular locus dimension: {e}"));
            global_complete = false;
            None
        }
        Err(e) => return Err(e),
    };

    let mut points: Vec<ProjectivePoint<F>> = Vec::new();
    for text in &opts.points {
        let o = parse_point(f.field(), m + 1, text)?;
        if !points.contains(&o) {
            points.push(o);
        }
    }
    if !opts.points.is_empty() {
        ledger.push(entry("supplied points", LedgerStatus::Done, format!("{} point(s) checked", points.len())));
    }
    match (opts.all_fp_points, enumerate) {
        (true, Some(enumerate)) => match enumerate() {
            Ok(found) => {
                ledger.push(entry(
                    "rational singular points",
                    LedgerStatus::Done,
                    format!("{} found by enumeration; points over extension fields are not visible", found.len()),
                ));
                for o in found {
                    if !points.contains(&o) {
                        points.push(o);
                    }
                }
            }
            Err(e) if e.is_budget() => {
                ledger.push(entry("rational singular points", LedgerStatus::BudgetExceeded, e.to_string()));
                inconclusive.push(format!("singular point enumeration: {e}"));
                global_complete = false;
            }
            Err(e) => return Err(e),
        },
        (true, None) => {
            ledger.push(entry("rational singular points", LedgerStatus::NotChecked, "enumeration needs a finite field; only supplied points are checked"));
            global_complete &= singular_locus_dim == Some(-1);
        }
        (false, _) => {
            ledger.push(entry("rational singular points", LedgerStatus::NotChecked, "not requested; only supplied points are checked"));
            global_complete &= singular_locus_dim == Some(-1);
        }
    }
    if m >= 6 {
        ledger.push(entry("(R1) at nonsingular points", LedgerStatus::NotChecked, "checked only at supplied nonsingular points"));
    }

    use rayon::prelude::*;
    let analyses: Vec<Result<PointAnalysis<F>>> = points.par_iter().map(|o| analyze_point(f, o, budget)).collect();
    let mut records = Vec::new();
    let mut singular_seen = false;
    for a in analyses {
        let a = a?;
        if let Some(b) = &a.blowup {
            if !b.formula_direct_agree {
                return Err(Error::Precondition(format!("blow-up verdict paths disagree at {}", a.report.point)));
            }
            if b.verdicts.iter().any(|v| v.status == BlowupStatus::RankA) && b.condition_g.verdict {
                return Err(Error::Precondition(format!("rank-3 point after blow-up although (G) holds at {}", a.report.point)));
            }
        }
        violations.extend(a.violations.iter().cloned());
        inconclusive.extend(a.inconclusive.iter().cloned());
        singular_seen |= a.report.kind != PointKind::Nonsingular;
        records.push(a.record());
    }
    exact |= singular_seen && singular_locus_dim == Some(0);
    Ok(Collected { points: records, violations, ledger, inconclusive, singular_locus_dim, singular_locus_dim_exact: exact, global_complete })
}

fn m5_checks(f: &Polynomial<PrimeField>, opts: &MembershipOptions, c: &mut Collected) {
    let mut step = |item: &str, outcome: Result<Option<Witness>>| match outcome {
        Ok(None) => c.ledger.push(entry(item, LedgerStatus::Done, "none found over F_p")),
        Ok(Some(w)) => {
            c.ledger.push(entry(item, LedgerStatus::Done, "found over F_p"));
            c.violations.push(w);
        }
        Err(e) => {
            c.ledger.push(entry(item, LedgerStatus::BudgetExceeded, e.to_string()));
            c.inconclusive.push(format!("{item}: {e}"));
            c.global_complete = false;
        }
    };
    step(
        "no planes on F",
        check_no_planes_m5(f, opts.enum_budget).map(|r| {
            r.planes.first().map(|pl| Witness {
                condition: "no planes on F".into(),
                point: None,
                detail: format!("plane spanned by {pl:?}"),
            })
        }),
    );
    step(
        "no singular line in a 3-space section",
        check_no_singular_line_in_3space_m5(f, opts.enum_budget).map(|r| {
            r.witnesses.first().map(|w| Witness {
                condition: "no singular line in a 3-space section".into(),
                point: None,
                detail: format!("line {:?} inside the tangent kernel {:?}", w.line, w.tangent_kernel),
            })
        }),
    );
}

fn assemble(h: &Hypersurface, c: Collected) -> MembershipReport {
    let m = h.m();
    let evidence = matches!(h, Hypersurface::Prime(_));
    let verdict = if let Some(w) = c.violations.first() {
        MembershipVerdict::ConditionViolated { witness: w.clone() }
    } else if !c.inconclusive.is_empty() {
        MembershipVerdict::Inconclusive { reason: c.inconclusive.join("; ") }
    } else {
        MembershipVerdict::ConditionsVerified
    };
    MembershipReport {
        m,
        field: h.field().to_string(),
        label: if evidence { "EVIDENCE".into() } else { "EXACT AT CHECKED POINTS".into() },
        singular_locus_dim: c.singular_locus_dim,
        singular_locus_dim_exact: c.singular_locus_dim_exact,
        sing_codim_in_f: c.singular_locus_dim.map(|d| if d < 0 { m as i64 } else { m as i64 - 1 - d }),
        points: c.points,
        violations: c.violations,
        ledger: c.ledger,
        global_complete: c.global_complete,
        verdict,
    }
}

pub fn check_membership(h: &Hypersurface, opts: &MembershipOptions) -> Result<MembershipReport> {
    if h.m() < 5 {
        return Err(Error::InvalidArgument(format!("membership needs M >= 5, got M = {}", h.m())));
    }
    match h {
        Hypersurface::Rational(f) => {
            let budget = opts.groebner_budget;
            let global = |required: i64| -> Result<SingularBound> {
                let m = f.nvars() as i64 - 1;
                let p = PrimeField::new(BOUND_PRIME).expect("prime");
                match singular_locus_dimension_bound(f, &p, budget) {
                    Ok(d) if d < 0 || m - 1 - d >= required => Ok(SingularBound {
                        dim: d,
                        exact: d < 0,
                        method: format!("reduction modulo {BOUND_PRIME}"),
                    }),
                    Ok(_) => Ok(SingularBound {
                        dim: singular_locus_dimension(f, budget)?.projective_dim.expect("homogeneous"),
                        exact: true,
                        method: "Groebner basis over Q".into(),
                    }),
                    Err(e) => Err(e),
                }
            };
            let mut c = run(f, opts, &global, None)?;
            if h.m() == 5 {
                let detail = "plane and line checks run over F_p only";
                c.ledger.push(entry("no planes on F", LedgerStatus::NotChecked, detail));
                c.ledger.push(entry("no singular line in a 3-space section", LedgerStatus::NotChecked, detail));
                c.global_complete = false;
            }
            Ok(assemble(h, c))
        }
        Hypersurface::Prime(f) => {
            let global = |_: i64| -> Result<SingularBound> {
                Ok(SingularBound {
                    dim: singular_locus_dimension(f, opts.groebner_budget)?.projective_dim.expect("homogeneous"),
                    exact: true,
                    method: "Groebner basis over F_p".into(),
                })
            };
            let enumerate = || singular_points(f, opts.enum_budget);
            let mut c = run(f, opts, &global, Some(&enumerate))?;
            if h.m() == 5 {
                if opts.m5_checks {
                    m5_checks(f, opts, &mut c);
                } else {
                    let detail = "not requested";
                    c.ledger.push(entry("no planes on F", LedgerStatus::NotChecked, detail));
                    c.ledger.push(entry("no singular line in a 3-space section", LedgerStatus::NotChecked, detail));
                    c.global_complete = false;
                }
            }
            Ok(assemble(h, c))
        }
    }
}
