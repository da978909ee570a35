//! Random forms over `F_p`: singular points, their classification, condition
//! failures and a comparison with the codimension heuristic. Results are
//! finite-field evidence only.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codim::binom;
use crate::enumerate::{
    check_no_planes_m5, check_no_singular_line_in_3space_m5, projective_count, FpEvaluator, ProjectivePoints,
    DEFAULT_ENUM_BUDGET, LINE_MAX_P, PLANE_MAX_P,
};
use crate::error::{Error, Result};
use crate::expansion::{expand_at, ProjectivePoint};
use crate::field::{is_prime, Field, PrimeField};
use crate::groebner::Budget;
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::regularity::check_r1;
use crate::singularity::{condition_g_from_expansion, kind_of_expansion, PointKind};

pub const EVIDENCE: &str = "EVIDENCE";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    /// Condition (G) at rank-3 singular points.
    G,
    /// (R2)/(R3) at singular points of rank at least 3.
    R,
    /// (R1) at one random nonsingular point per form (M >= 6).
    R1,
    /// No `F_p`-plane on the quintic (M = 5, p <= 7).
    Planes,
    /// No singular line in a 3-space section (M = 5, p <= 5).
    Lines,
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "g" => Ok(Check::G),
            "r" => Ok(Check::R),
            "r1" => Ok(Check::R1),
            "planes" => Ok(Check::Planes),
            "lines" => Ok(Check::Lines),
            other => Err(Error::InvalidArgument(format!("unknown census check {other:?}"))),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Check::G => "g",
            Check::R => "r",
            Check::R1 => "r1",
            Check::Planes => "planes",
            Check::Lines => "lines",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusConfig {
    pub m: usize,
    pub p: u64,
    pub samples: usize,
    pub seed: u64,
    pub checks: BTreeSet<Check>,
    pub groebner_budget: u64,
    pub enum_budget: u64,
}

impl CensusConfig {
    pub fn new(m: usize, p: u64, samples: usize, seed: u64) -> Self {
        CensusConfig {
            m,
            p,
            samples,
            seed,
            checks: [Check::G, Check::R].into_iter().collect(),
            groebner_budget: Budget::default().steps,
            enum_budget: DEFAULT_ENUM_BUDGET,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidArgument("census needs at least one sample".into()));
        }
        if self.m < 2 {
            return Err(Error::InvalidArgument("census needs M >= 2".into()));
        }
        if self.p == 2 || !is_prime(self.p) {
            return Err(Error::InvalidArgument(format!("p = {} is not an odd prime", self.p)));
        }
        if self.p < self.m as u64 {
            return Err(Error::InvalidArgument(format!("census needs p >= M, got p = {} and M = {}", self.p, self.m)));
        }
        if self.checks.contains(&Check::Planes) && (self.m != 5 || self.p > PLANE_MAX_P) {
            return Err(Error::InvalidArgument("the plane check needs M = 5 and p <= 7".into()));
        }
        if self.checks.contains(&Check::Lines) && (self.m != 5 || self.p > LINE_MAX_P) {
            return Err(Error::InvalidArgument("the line check needs M = 5 and p <= 5".into()));
        }
        if projective_count(self.p, self.m + 1) > self.enum_budget {
            return Err(Error::BudgetExceeded { what: "point enumeration", budget: self.enum_budget });
        }
        Ok(())
    }
}

mod ratio_str {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

mod opt_ratio_str {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(r) => s.serialize_some(&r.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        Option::<String>::deserialize(d)?.map(|s| s.parse().map_err(serde::de::Error::custom)).transpose()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularPointRecord {
    pub coords: Vec<u64>,
    pub kind: PointKind,
    pub condition_g: Option<bool>,
    pub regularity: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: usize,
    pub points_on_f: u64,
    pub singular_points: Vec<SingularPointRecord>,
    /// The sampled nonsingular point and its (R1) verdict.
    pub r1: Option<(Vec<u64>, bool)>,
    pub no_planes: Option<bool>,
    pub no_singular_lines: Option<bool>,
    /// Checks abandoned on a budget.
    pub inconclusive: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionTally {
    pub name: String,
    /// Samples on which the condition was decided.
    pub tested: usize,
    pub failures: usize,
    #[serde(with = "ratio_str")]
    pub frequency: BigRational,
    /// Conditions imposed at one point, when a heuristic applies.
    pub codim_per_point: Option<u64>,
    /// `min(1, #P^M(F_p) · p^(-codim))`.
    #[serde(with = "opt_ratio_str")]
    pub heuristic: Option<BigRational>,
}

/// Exact expectation band for the fraction of forms singular somewhere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    /// Union bound `N p^(-(M+1))`.
    #[serde(with = "ratio_str")]
    pub upper: BigRational,
    /// Bonferroni bound `N p^(-(M+1)) - C(N, 2) p^(-2(M+1))`, clamped at 0.
    #[serde(with = "ratio_str")]
    pub lower: BigRational,
    /// Largest binomial standard deviation over `[lower, upper]`.
    pub sigma: f64,
    pub band: [f64; 2],
    #[serde(with = "ratio_str")]
    pub observed: BigRational,
    pub within_band: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub label: String,
    pub config: CensusConfig,
    /// `#P^M(F_p)`.
    pub point_space_size: u64,
    pub total_points_on_f: u64,
    #[serde(with = "ratio_str")]
    pub mean_points_on_f: BigRational,
    pub singular_points_total: usize,
    /// Classification of all singular points found.
    pub kind_counts: BTreeMap<String, usize>,
    pub conditions: Vec<ConditionTally>,
    pub calibration: Calibration,
    /// Singular points whose expansion has `q1 ≢ 0`; always 0.
    pub classification_mismatches: usize,
    /// Forms failing `Σ x_i ∂f/∂x_i = M f`, checked only for `p > M`; always 0.
    /// It rules out points off `F` where every partial vanishes. For `p = M`
    /// such points exist, and singular means `f` and every partial vanish.
    pub euler_mismatches: usize,
    pub samples: Vec<SampleRecord>,
}

impl CensusReport {
    pub fn condition(&self, name: &str) -> Option<&ConditionTally> {
        self.conditions.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Degree-`d` monomials in `n` variables.
pub fn monomials_of_degree(n: usize, d: u16) -> Vec<Monomial> {
    fn walk(i: usize, left: u16, e: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if i + 1 == e.len() {
            e[i] = left;
            out.push(Monomial::new(e));
            return;
        }
        for x in (0..=left).rev() {
            e[i] = x;
            walk(i + 1, left - x, e, out);
        }
        e[i] = 0;
    }
    let mut out = Vec::new();
    walk(0, d, &mut vec![0; n], &mut out);
    out
}

/// Uniform coefficients on every degree-`M` monomial in `M + 1` variables.
pub fn random_form<R: Rng>(k: &PrimeField, m: usize, rng: &mut R) -> Polynomial<PrimeField> {
    let p = k.modulus();
    let terms: Vec<(Monomial, u64)> =
        monomials_of_degree(m + 1, m as u16).into_iter().map(|mono| (mono, rng.random_range(0..p))).collect();
    Polynomial::from_terms(k, m + 1, terms)
}

/// The RNG of sample `index`: one ChaCha stream per sample.
pub fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn kind_label(kind: PointKind) -> String {
    match kind {
        PointKind::Nonsingular => "nonsingular".into(),
        PointKind::QuadraticRank(a) => format!("rank {a}"),
        PointKind::HigherMultiplicity(m) => format!("multiplicity {m}"),
    }
}

struct SampleOutcome {
    record: SampleRecord,
    classification_mismatches: usize,
    euler_mismatches: usize,
}

fn run_sample(config: &CensusConfig, index: usize) -> SampleOutcome {
    let k = PrimeField::new(config.p).expect("validated");
    let mut rng = sample_rng(config.seed, index);
    let f = random_form(&k, config.m, &mut rng);
    let budget = Budget::new(config.groebner_budget);
    let on_surface = FpEvaluator::new(std::slice::from_ref(&f));
    let grad = FpEvaluator::new(&f.gradient());
    let mut table = Vec::new();
    let mut points_on_f = 0u64;
    let mut on_f = Vec::new();
    let mut singular = Vec::new();
    for x in ProjectivePoints::new(config.p, config.m + 1) {
        if !on_surface.all_vanish_with(&x, &mut table) {
            continue;
        }
        points_on_f += 1;
        if grad.all_vanish_with(&x, &mut table) {
            singular.push(x);
        } else if config.checks.contains(&Check::R1) {
            on_f.push(x);
        }
    }
    // Off the hypersurface the partials cannot all vanish when p > M:
    // Σ x_i ∂f/∂x_i = M f holds identically.
    let euler_mismatches = if config.p > config.m as u64 && !euler_identity_holds(&f) { 1 } else { 0 };
    let mut inconclusive = Vec::new();
    let mut classification_mismatches = 0;
    let mut singular_points = Vec::new();
    for x in singular {
        let o = ProjectivePoint::new(&k, x.clone()).expect("nonzero");
        let exp = expand_at(&f, &o).expect("point on F");
        if !exp.q(1).is_zero() {
            classification_mismatches += 1;
        }
        let kind = kind_of_expansion(&exp).expect("odd characteristic");
        let condition_g = if config.checks.contains(&Check::G) && kind == PointKind::QuadraticRank(3) {
            match condition_g_from_expansion(&exp, budget) {
                Ok(r) => Some(r.verdict),
                Err(e) => {
                    inconclusive.push(format!("g at {x:?}: {e}"));
                    None
                }
            }
        } else {
            None
        };
        let regularity = match kind {
            PointKind::QuadraticRank(a) if a >= 3 && config.checks.contains(&Check::R) => {
                match crate::regularity::check_regularity(&exp, budget) {
                    Ok(v) => Some(v.pass),
                    Err(e) => {
                        inconclusive.push(format!("r at {x:?}: {e}"));
                        None
                    }
                }
            }
            _ => None,
        };
        singular_points.push(SingularPointRecord { coords: x, kind, condition_g, regularity });
    }
    let r1 = if config.checks.contains(&Check::R1) && config.m >= 6 && !on_f.is_empty() {
        let x = on_f[rng.random_range(0..on_f.len())].clone();
        let o = ProjectivePoint::new(&k, x.clone()).expect("nonzero");
        match expand_at(&f, &o).and_then(|exp| check_r1(&exp, budget)) {
            Ok(v) => Some((x, v.pass)),
            Err(e) => {
                inconclusive.push(format!("r1 at {x:?}: {e}"));
                None
            }
        }
    } else {
        None
    };
    let no_planes = config.checks.contains(&Check::Planes).then(|| check_no_planes_m5(&f, config.enum_budget)).and_then(|r| {
        r.map(|c| c.verdict).map_err(|e| inconclusive.push(format!("planes: {e}"))).ok()
    });
    let no_singular_lines = config
        .checks
        .contains(&Check::Lines)
        .then(|| check_no_singular_line_in_3space_m5(&f, config.enum_budget))
        .and_then(|r| r.map(|c| c.verdict).map_err(|e| inconclusive.push(format!("lines: {e}"))).ok());
    SampleOutcome {
        record: SampleRecord { index, points_on_f, singular_points, r1, no_planes, no_singular_lines, inconclusive },
        classification_mismatches,
        euler_mismatches,
    }
}

fn euler_identity_holds(f: &Polynomial<PrimeField>) -> bool {
    let k = f.field();
    let n = f.nvars();
    let mut lhs = Polynomial::zero(k, n);
    for (i, d) in f.gradient().iter().enumerate() {
        lhs = &lhs + &(&Polynomial::var(k, n, i) * d);
    }
    let degree = f.degree().max(0);
    lhs == f.scale(&k.from_i64(degree))
}

fn ratio(n: usize, d: usize) -> BigRational {
    if d == 0 {
        return BigRational::zero();
    }
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pow_ratio(p: u64, e: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(p).pow(e as u32))
}

fn heuristic(n_points: u64, p: u64, codim: u64) -> BigRational {
    let h = BigRational::from_integer(BigInt::from(n_points)) / pow_ratio(p, codim);
    h.min(BigRational::one())
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// The band for the singular-somewhere fraction. At a fixed point, `f` and
/// its partials impose exactly `M + 1` independent linear conditions on the
/// coefficients (at `e_0`: the coefficients of `x_0^M` and `x_0^(M-1) x_i`),
/// also when `p = M`; at two distinct points they impose `2(M + 1)`.
pub fn calibration_band(m: usize, p: u64, samples: usize) -> (BigRational, BigRational, f64, [f64; 2]) {
    let n = projective_count(p, m + 1);
    let c = (m + 1) as u64;
    let upper = BigRational::from_integer(BigInt::from(n)) / pow_ratio(p, c);
    let pairs = BigRational::from_integer(binom(n as i64, 2)) / pow_ratio(p, 2 * c);
    let lower = (&upper - pairs).max(BigRational::zero());
    let (lo, hi) = (to_f64(&lower), to_f64(&upper).min(1.0));
    let worst = if hi <= 0.5 {
        hi
    } else if lo >= 0.5 {
        lo
    } else {
        0.5
    };
    let sigma = (worst * (1.0 - worst) / samples as f64).sqrt();
    (lower, upper, sigma, [(lo - 4.0 * sigma).max(0.0), (hi + 4.0 * sigma).min(1.0)])
}

pub fn run_census(config: &CensusConfig) -> Result<CensusReport> {
    config.validate()?;
    let outcomes: Vec<SampleOutcome> = (0..config.samples).into_par_iter().map(|i| run_sample(config, i)).collect();
    let m = config.m;
    let p = config.p;
    let n_points = projective_count(p, m + 1);
    let samples = config.samples;
    let records: Vec<SampleRecord> = outcomes.iter().map(|o| o.record.clone()).collect();

    let mut kind_counts = BTreeMap::new();
    for r in &records {
        for s in &r.singular_points {
            *kind_counts.entry(kind_label(s.kind)).or_insert(0) += 1;
        }
    }
    let count = |pred: &dyn Fn(&SampleRecord) -> bool| records.iter().filter(|r| pred(r)).count();
    let tally = |name: &str, tested: usize, failures: usize, codim: Option<u64>| ConditionTally {
        name: name.into(),
        tested,
        failures,
        frequency: ratio(failures, tested),
        codim_per_point: codim,
        heuristic: codim.map(|c| heuristic(n_points, p, c)),
    };
    let m64 = m as u64;
    let degenerate_codim = m64 + 1 + binom(m as i64 - 1, 2).to_u64().unwrap_or(0);
    let rank3_codim = m64 + 1 + binom(m as i64 - 2, 2).to_u64().unwrap_or(0);
    let mut conditions = vec![
        tally("singular", samples, count(&|r| !r.singular_points.is_empty()), Some(m64 + 1)),
        tally(
            "rank<=2 or multiplicity>=3",
            samples,
            count(&|r| {
                r.singular_points.iter().any(|s| match s.kind {
                    PointKind::QuadraticRank(a) => a <= 2,
                    PointKind::HigherMultiplicity(_) => true,
                    PointKind::Nonsingular => false,
                })
            }),
            Some(degenerate_codim),
        ),
        tally(
            "rank 3 point",
            samples,
            count(&|r| r.singular_points.iter().any(|s| s.kind == PointKind::QuadraticRank(3))),
            Some(rank3_codim),
        ),
    ];
    let decided = |r: &SampleRecord, field: fn(&SingularPointRecord) -> Option<bool>, prefix: &str| {
        !r.inconclusive.iter().any(|s| s.starts_with(prefix)) && r.singular_points.iter().any(|s| field(s).is_some())
    };
    if config.checks.contains(&Check::G) {
        let tested = count(&|r| decided(r, |s| s.condition_g, "g "));
        let failures = count(&|r| decided(r, |s| s.condition_g, "g ") && r.singular_points.iter().any(|s| s.condition_g == Some(false)));
        conditions.push(tally("G", tested, failures, None));
    }
    if config.checks.contains(&Check::R) {
        let tested = count(&|r| decided(r, |s| s.regularity, "r "));
        let failures = count(&|r| decided(r, |s| s.regularity, "r ") && r.singular_points.iter().any(|s| s.regularity == Some(false)));
        conditions.push(tally("R2/R3", tested, failures, None));
    }
    if config.checks.contains(&Check::R1) {
        let tested = count(&|r| r.r1.is_some());
        let failures = count(&|r| matches!(r.r1, Some((_, false))));
        conditions.push(tally("R1", tested, failures, None));
    }
    if config.checks.contains(&Check::Planes) {
        let tested = count(&|r| r.no_planes.is_some());
        conditions.push(tally("planes", tested, count(&|r| r.no_planes == Some(false)), None));
    }
    if config.checks.contains(&Check::Lines) {
        let tested = count(&|r| r.no_singular_lines.is_some());
        conditions.push(tally("singular lines", tested, count(&|r| r.no_singular_lines == Some(false)), None));
    }

    let (lower, upper, sigma, band) = calibration_band(m, p, samples);
    let observed = conditions[0].frequency.clone();
    let obs = to_f64(&observed);
    let calibration = Calibration { upper, lower, sigma, band, observed, within_band: band[0] <= obs && obs <= band[1] };
    let total_points_on_f: u64 = records.iter().map(|r| r.points_on_f).sum();
    Ok(CensusReport {
        label: EVIDENCE.into(),
        config: config.clone(),
        point_space_size: n_points,
        total_points_on_f,
        mean_points_on_f: BigRational::new(BigInt::from(total_points_on_f), BigInt::from(samples)),
        singular_points_total: records.iter().map(|r| r.singular_points.len()).sum(),
        kind_counts,
        conditions,
        calibration,
        classification_mismatches: outcomes.iter().map(|o| o.classification_mismatches).sum(),
        euler_mismatches: outcomes.iter().map(|o| o.euler_mismatches).sum(),
        samples: records,
    })
}
