//! Closed-form codimension counts for the complement of the good family:
//! `γ(M)`, the bounds for `B_G`, `B_1`, `B_2`, `B_3`, the cubic `h(t)`, and
//! the inequality ledger behind the main codimension theorem.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod bigint_str {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `binom(n, k)`, zero outside `0 <= k <= n`.
pub fn binom(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn require(m: usize, min: usize, what: &str) -> Result<()> {
    if m < min {
        return Err(Error::InvalidArgument(format!("{what} needs M >= {min}, got M = {m}")));
    }
    Ok(())
}

pub fn gamma(m: usize) -> Result<BigInt> {
    require(m, 5, "gamma")?;
    Ok(match m {
        5 => BigInt::from(6),
        6 => BigInt::from(9),
        7 => BigInt::from(15),
        _ => binom(m as i64 - 1, 2) + 1,
    })
}

/// Number of degree-`M` monomials in `M + 1` variables.
pub fn dim_p(m: usize) -> BigInt {
    binom(2 * m as i64, m as i64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexedBound {
    pub index: usize,
    #[serde(with = "bigint_str")]
    pub value: BigInt,
}

fn indexed(index: usize, value: BigInt) -> IndexedBound {
    IndexedBound { index, value }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerIndexBounds {
    pub per_index: Vec<IndexedBound>,
    #[serde(with = "bigint_str")]
    pub min: BigInt,
}

fn with_min(per_index: Vec<IndexedBound>) -> PerIndexBounds {
    let min = per_index.iter().map(|b| b.value.clone()).min().expect("nonempty range");
    PerIndexBounds { per_index, min }
}

/// `binom(M + 4, a)` for `a = 6..M`.
pub fn bound_b1(m: usize) -> Result<PerIndexBounds> {
    require(m, 6, "B1")?;
    Ok(with_min((6..=m).map(|a| indexed(a, binom(m as i64 + 4, a as i64))).collect()))
}

/// `binom(M + 5, 5) + M`.
pub fn bound_b2(m: usize) -> Result<BigInt> {
    require(m, 7, "B2")?;
    Ok(binom(m as i64 + 5, 5) + m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct B3Bounds {
    /// `binom(M - 5, 2) + binom(M + 1, a) + M` for `a = 3..M-1`.
    pub per_a: Vec<IndexedBound>,
    /// The same expression at `a = M`, too weak on its own.
    #[serde(with = "bigint_str")]
    pub a_equals_m: BigInt,
    /// `B_{3,M,b}` for `b = 1..M-1`.
    pub per_b: Vec<IndexedBound>,
}

pub fn bound_b3(m: usize) -> Result<B3Bounds> {
    require(m, 5, "B3")?;
    let mi = m as i64;
    let rank_le6 = binom(mi - 5, 2);
    let per_a_value = |a: i64| &rank_le6 + binom(mi + 1, a) + m;
    let per_a = (3..m).map(|a| indexed(a, per_a_value(a as i64))).collect();
    let mut per_b = vec![
        indexed(1, &rank_le6 + binom(mi, 2) + m + 2),
        indexed(2, &rank_le6 + BigInt::from(mi * mi) + 1),
    ];
    for b in 3..m {
        per_b.push(indexed(b, &rank_le6 + m + h_value(m, b as i64)));
    }
    Ok(B3Bounds { per_a, a_equals_m: per_a_value(mi), per_b })
}

/// Conditions imposed on a plane conic lying on all `q_i`: `M^2 - M + 1`.
pub fn conic_condition_count(m: usize) -> BigInt {
    BigInt::from(m * m - m + 1)
}

/// `h(t) = (t^3 + (1 - 2M) t^2 + (M^2 + M) t + 2) / 2`, always an integer.
fn h_value(m: usize, t: i64) -> BigInt {
    let m = BigInt::from(m);
    let t = BigInt::from(t);
    let twice: BigInt = &t * &t * &t + (BigInt::one() - &m * 2) * &t * &t + (&m * &m + &m) * &t + 2;
    debug_assert!((&twice % 2u32).is_zero());
    twice / 2
}

pub fn h_poly(m: usize, t: usize) -> Result<BigInt> {
    require(m, 5, "h")?;
    if !(3..m).contains(&t) {
        return Err(Error::InvalidArgument(format!("t = {t} outside [3, {}]", m - 1)));
    }
    Ok(h_value(m, t as i64))
}

/// `2 h'(t) = 3 t^2 + 2 (1 - 2M) t + M^2 + M`.
pub fn h_derivative_twice(m: usize, t: i64) -> BigInt {
    let m = m as i64;
    BigInt::from(3 * t * t + 2 * (1 - 2 * m) * t + m * m + m)
}

/// Whether the larger critical point `t*` of `h` lies in `[M - 2, M - 1]`.
pub fn t_star_bracketed(m: usize) -> bool {
    let m = m as i64;
    !h_derivative_twice(m as usize, m - 2).is_positive() && !h_derivative_twice(m as usize, m - 1).is_negative()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HCandidate {
    H3,
    HMMinus2,
    HMMinus1,
}

impl HCandidate {
    pub fn argument(self, m: usize) -> usize {
        match self {
            HCandidate::H3 => 3,
            HCandidate::HMMinus2 => m - 2,
            HCandidate::HMMinus1 => m - 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HAnalysis {
    pub values: Vec<IndexedBound>,
    #[serde(with = "bigint_str")]
    pub h3: BigInt,
    #[serde(with = "bigint_str")]
    pub h_m_minus_2: BigInt,
    #[serde(with = "bigint_str")]
    pub h_m_minus_1: BigInt,
    /// `h` is increasing on `[3, M - 1]` (no real critical points for `M` in {5, 6}).
    pub monotone: bool,
    /// Smallest of the three candidates (first one on ties).
    pub minimizer: HCandidate,
    #[serde(with = "bigint_str")]
    pub candidate_min: BigInt,
    /// Exhaustive minimum over all integers in `[3, M - 1]`.
    #[serde(with = "bigint_str")]
    pub true_min: BigInt,
    pub true_argmin: Vec<usize>,
    pub t_star_bracketed: bool,
}

pub fn h_analysis(m: usize) -> Result<HAnalysis> {
    require(m, 5, "h analysis")?;
    let values: Vec<IndexedBound> = (3..m).map(|t| indexed(t, h_value(m, t as i64))).collect();
    let h3 = h_value(m, 3);
    let h_m_minus_2 = h_value(m, m as i64 - 2);
    let h_m_minus_1 = h_value(m, m as i64 - 1);
    let mi = m as i64;
    // Discriminant of 2h'(t) divided by 4: (2M - 1)^2 - 3(M^2 + M).
    let monotone = (2 * mi - 1).pow(2) - 3 * (mi * mi + mi) < 0;
    let candidates = [
        (HCandidate::H3, &h3),
        (HCandidate::HMMinus2, &h_m_minus_2),
        (HCandidate::HMMinus1, &h_m_minus_1),
    ];
    let (minimizer, candidate_min) = if monotone {
        (HCandidate::H3, h3.clone())
    } else {
        let (c, v) = candidates.iter().fold(candidates[0], |best, cur| if cur.1 < best.1 { *cur } else { best });
        (c, v.clone())
    };
    let true_min = values.iter().map(|v| v.value.clone()).min().expect("M >= 5");
    let true_argmin = values.iter().filter(|v| v.value == true_min).map(|v| v.index).collect();
    Ok(HAnalysis {
        values,
        h3,
        h_m_minus_2,
        h_m_minus_1,
        monotone,
        minimizer,
        candidate_min,
        true_min,
        true_argmin,
        t_star_bracketed: m >= 7 && t_star_bracketed(m),
    })
}

/// Conditions for a curve spanning a `b`-space to lie on all `q_i`, minus the
/// dimension of the Grassmannian of such spaces.
pub fn h_cross_derivation(m: usize, b: usize) -> BigInt {
    let (m, b) = (m as i64, b as i64);
    // b (M + (M - b + 2)(M - b - 1)/2) + (M - b) - (b + 1)(M - 1 - b)
    let twice = 2 * b * m + b * (m - b + 2) * (m - b - 1);
    debug_assert_eq!(twice % 2, 0);
    BigInt::from(twice / 2 + (m - b) - (b + 1) * (m - 1 - b))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BgBound {
    #[serde(with = "bigint_str")]
    pub value: BigInt,
    /// For `M < 8` the value is the asserted target `γ(M) + M - 1`, not a derived count.
    pub asserted: bool,
}

/// `M + binom(M - 2, 2) + 3(M - 6) + 1` for `M >= 8`.
pub fn bound_bg(m: usize) -> Result<BgBound> {
    require(m, 5, "B_G")?;
    if m < 8 {
        return Ok(BgBound { value: gamma(m)? + m - 1, asserted: true });
    }
    let mi = m as i64;
    Ok(BgBound { value: BigInt::from(mi) + binom(mi - 2, 2) + 3 * (mi - 6) + 1, asserted: false })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Greater,
    GreaterOrEqual,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub name: String,
    #[serde(with = "bigint_str")]
    pub lhs: BigInt,
    pub relation: Relation,
    #[serde(with = "bigint_str")]
    pub rhs: BigInt,
    pub holds: bool,
    pub equality: bool,
    /// Taken from the text rather than derived here.
    pub asserted: bool,
}

fn check(name: impl Into<String>, lhs: BigInt, relation: Relation, rhs: BigInt, asserted: bool) -> InequalityCheck {
    let holds = match relation {
        Relation::Greater => lhs > rhs,
        Relation::GreaterOrEqual => lhs >= rhs,
    };
    let equality = lhs == rhs;
    InequalityCheck { name: name.into(), lhs, relation, rhs, holds, equality, asserted }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem03Ledger {
    pub m: usize,
    pub checks: Vec<InequalityCheck>,
    pub verdict: bool,
}

pub fn verify_theorem_03(m: usize) -> Result<Theorem03Ledger> {
    let g = gamma(m)?;
    let mi = m as i64;
    let target: BigInt = &g + m - 1;
    let ge = Relation::GreaterOrEqual;
    let mut checks = vec![
        check("positive-dimensional Sing: M(M-2) > gamma", BigInt::from(mi * (mi - 2)), Relation::Greater, g.clone(), false),
        check("rank <= 2 or multiplicity >= 3: binom(M-1,2)+1 >= gamma", binom(mi - 1, 2) + 1, ge, g.clone(), false),
    ];
    let bg = bound_bg(m)?;
    checks.push(check("B_G >= gamma+M-1", bg.value, ge, target.clone(), bg.asserted));
    if m >= 6 {
        checks.push(check("B_1 (min) >= gamma+M-1", bound_b1(m)?.min, ge, target.clone(), false));
    }
    if m >= 7 {
        checks.push(check("B_2 >= gamma+M-1", bound_b2(m)?, ge, target.clone(), false));
    }
    let b3 = bound_b3(m)?;
    for b in &b3.per_a {
        checks.push(check(format!("B_3,{} >= gamma+M-1", b.index), b.value.clone(), ge, target.clone(), false));
    }
    for b in &b3.per_b {
        checks.push(check(format!("B_3,M,{} >= gamma+M-1", b.index), b.value.clone(), ge, target.clone(), false));
    }
    if m == 5 {
        // Quintics containing a plane or a 3-space section singular along a line.
        checks.push(check("planes/singular lines: codim > gamma(5)", g.clone() + 1, Relation::Greater, g.clone(), true));
    }
    let verdict = checks.iter().all(|c| c.holds);
    Ok(Theorem03Ledger { m, checks, verdict })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodimReport {
    pub m: usize,
    #[serde(with = "bigint_str")]
    pub gamma: BigInt,
    #[serde(with = "bigint_str")]
    pub dim_p: BigInt,
    pub b_g: BgBound,
    pub b1: Option<PerIndexBounds>,
    #[serde(with = "opt_bigint_str")]
    pub b2: Option<BigInt>,
    pub b3: B3Bounds,
    pub h_analysis: HAnalysis,
    pub theorem03: Theorem03Ledger,
}

mod opt_bigint_str {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_some(&v.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Option::<String>::deserialize(d)?.map(|s| s.parse().map_err(serde::de::Error::custom)).transpose()
    }
}

pub fn codim_report(m: usize) -> Result<CodimReport> {
    Ok(CodimReport {
        m,
        gamma: gamma(m)?,
        dim_p: dim_p(m),
        b_g: bound_bg(m)?,
        b1: if m >= 6 { Some(bound_b1(m)?) } else { None },
        b2: if m >= 7 { Some(bound_b2(m)?) } else { None },
        b3: bound_b3(m)?,
        h_analysis: h_analysis(m)?,
        theorem03: verify_theorem_03(m)?,
    })
}

/// Largest critical point of `h`, for display.
pub fn t_star(m: usize) -> Option<f64> {
    let m = m as f64;
    let disc = (2.0 * m - 1.0).powi(2) - 3.0 * (m * m + m);
    (disc >= 0.0).then(|| ((2.0 * m - 1.0) + disc.sqrt()) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn gamma_table() {
        let got: Vec<BigInt> = (5..=10).map(|m| gamma(m).unwrap()).collect();
        assert_eq!(got, [6, 9, 15, 22, 29, 37].map(b));
        assert!(gamma(4).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(10, 4), b(210));
        assert_eq!(binom(0, 2), b(0));
        assert_eq!(binom(1, 2), b(0));
        assert_eq!(binom(60, 30).to_string(), "118264581564861424");
        assert_eq!(dim_p(5), b(252));
    }

    #[test]
    fn b1_b2_examples() {
        let b1 = bound_b1(6).unwrap();
        assert_eq!(b1.per_index, vec![indexed(6, b(210))]);
        assert_eq!(b1.min, b(210));
        assert_eq!(bound_b1(8).unwrap().min, b(495));
        for m in 6..=30 {
            assert!(bound_b1(m).unwrap().min >= gamma(m).unwrap() + m - 1);
            assert_eq!(bound_b1(m).unwrap().min, binom(m as i64 + 4, 4));
        }
        assert_eq!(bound_b2(7).unwrap(), b(799));
        assert_eq!(bound_b2(8).unwrap(), b(1295));
        assert!(bound_b2(6).is_err());
        assert!(bound_b1(5).is_err());
    }

    #[test]
    fn h_examples() {
        assert_eq!(h_poly(7, 5).unwrap(), b(41));
        assert_eq!(h_poly(8, 3).unwrap(), b(55));
        assert_eq!(h_poly(7, 6).unwrap(), b(43));
        assert!(h_poly(7, 7).is_err());
        assert!(h_poly(7, 2).is_err());
        for m in 7..=30usize {
            let mi = m as i64;
            assert_eq!(h_poly(m, m - 2).unwrap(), b(mi * (mi - 1) - 1));
            assert_eq!(h_poly(m, m - 1).unwrap(), b(mi * (mi - 1) + 1));
            assert_eq!(b(2) * h_poly(m, 3).unwrap(), b(3 * mi * (mi - 5) + 38));
        }
    }

    #[test]
    fn h_cross_derivation_matches() {
        for m in 7..=20 {
            for t in 3..m {
                assert_eq!(h_poly(m, t).unwrap(), h_cross_derivation(m, t), "M={m} b={t}");
            }
        }
    }

    #[test]
    fn h_minimum_analysis() {
        for m in [5, 6] {
            let a = h_analysis(m).unwrap();
            assert!(a.monotone);
            assert_eq!(a.minimizer, HCandidate::H3);
            assert_eq!(a.true_argmin, vec![3]);
        }
        // At M = 7 the smallest candidate is h(3) = 40, below h(M-2) = 41.
        let a = h_analysis(7).unwrap();
        assert_eq!((a.h3.clone(), a.h_m_minus_2.clone(), a.h_m_minus_1.clone()), (b(40), b(41), b(43)));
        assert_eq!(a.minimizer, HCandidate::H3);
        assert_eq!(a.true_min, b(40));
        assert!(!a.t_star_bracketed);
        assert_eq!(h_analysis(8).unwrap().true_min, b(55));
        for m in 5..=40 {
            let a = h_analysis(m).unwrap();
            assert_eq!(a.candidate_min, a.true_min, "M={m}");
        }
    }

    #[test]
    fn t_star_bracket_from_eight() {
        for m in 8..=50 {
            assert!(t_star_bracketed(m), "M={m}");
            let t = t_star(m).unwrap();
            assert!((m as f64 - 2.0..=m as f64 - 1.0).contains(&t));
        }
        assert!(!t_star_bracketed(7));
        assert!((t_star(7).unwrap() - 14.0 / 3.0).abs() < 1e-12);
        assert!(t_star(6).is_none());
    }

    #[test]
    fn b3_examples() {
        let b3 = bound_b3(7).unwrap();
        assert_eq!(b3.per_a.len(), 4);
        assert_eq!(b3.per_a[0], indexed(3, b(1 + 56 + 7)));
        assert_eq!(b3.per_b[0], indexed(1, b(1 + 21 + 7 + 2)));
        assert_eq!(b3.per_b[1], indexed(2, b(1 + 49 + 1)));
        assert_eq!(b3.per_b[4], indexed(5, b(1 + 7 + 41)));
        assert_eq!(bound_b3(5).unwrap().per_b[2], indexed(3, b(5 + 19)));
        assert_eq!(conic_condition_count(7), b(43));
    }

    #[test]
    fn bg_inequality() {
        for m in 8..=50i64 {
            assert_eq!(binom(m - 2, 2) - binom(m - 1, 2), b(-(m - 2)));
            assert!(binom(m - 2, 2) + 3 * m - 17 >= binom(m - 1, 2));
        }
        assert_eq!(binom(6, 2) + 24 - 17, b(22));
        assert!(bound_bg(7).unwrap().asserted);
        assert_eq!(bound_bg(8).unwrap().value, b(8 + 15 + 6 + 1));
    }

    #[test]
    fn theorem_03_ledger() {
        for m in 5..=30 {
            let l = verify_theorem_03(m).unwrap();
            assert!(l.verdict, "M={m}: {:?}", l.checks.iter().find(|c| !c.holds));
        }
        let l = verify_theorem_03(8).unwrap();
        let rank = &l.checks[1];
        assert_eq!(rank.lhs, b(22));
        assert!(rank.equality);
        let l5 = verify_theorem_03(5).unwrap();
        assert_eq!(l5.checks[0].lhs, b(15));
    }

    #[test]
    fn report_round_trips() {
        let r = codim_report(7).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<CodimReport>(&json).unwrap(), r);
        assert!(codim_report(4).is_err());
    }

    proptest! {
        #[test]
        fn h_is_integral_and_positive(m in 5usize..200, t in 3usize..199) {
            prop_assume!(t < m);
            let v = h_poly(m, t).unwrap();
            prop_assert!(v.is_positive());
        }
    }
}
