//! The regularity conditions (R1), (R2), (R3) at a point, and the local
//! base-locus bound for hypertangent systems that they imply.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{restrict_to_tangent, TaylorExpansion};
use crate::field::Field;
use crate::groebner::{ideal_dimension, Budget};
use crate::poly::Polynomial;
use crate::singularity::{kind_of_expansion, PointKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    R1,
    R2,
    R3,
    /// Nonsingular point of a quintic: no sequence condition applies.
    VacuousM5,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityVerdict {
    pub condition: Condition,
    /// Degrees of the graded pieces in the sequence.
    pub sequence_checked: Vec<usize>,
    pub expected_dim: i64,
    pub actual_dim: i64,
    pub pass: bool,
}

/// `(M - 1) - (M - 5)`: pieces `q6..qM` on the tangent hyperplane.
pub fn expected_dim_r1(m: usize) -> i64 {
    (m as i64 - 1) - (m as i64 - 5)
}

/// `M - (M - 5)`: `q2, q7..qM` in `M` variables.
pub fn expected_dim_r2(m: usize) -> i64 {
    m as i64 - (m as i64 - 5)
}

/// `M - (M - 1)`: `q2..qM` in `M` variables.
pub fn expected_dim_r3(m: usize) -> i64 {
    m as i64 - (m as i64 - 1)
}

fn verdict<F: Field>(
    condition: Condition,
    nvars: usize,
    degrees: Vec<usize>,
    gens: Vec<Polynomial<F>>,
    expected_dim: i64,
    budget: Budget,
) -> Result<RegularityVerdict> {
    let gens: Vec<_> = gens.into_iter().filter(|g| !g.is_zero()).collect();
    let actual_dim = ideal_dimension(nvars, &gens, true, budget)?.affine_dim;
    Ok(RegularityVerdict { condition, sequence_checked: degrees, expected_dim, actual_dim, pass: actual_dim == expected_dim })
}

pub fn check_r1<F: Field>(exp: &TaylorExpansion<F>, budget: Budget) -> Result<RegularityVerdict> {
    let m = exp.degree();
    if exp.is_singular() {
        return Err(Error::SingularPoint);
    }
    if m < 6 {
        return Err(Error::Precondition(format!("(R1) needs M >= 6, got M = {m}")));
    }
    let degrees: Vec<usize> = (6..=m).collect();
    let t = restrict_to_tangent(exp, &degrees)?;
    let gens = degrees.iter().map(|d| t.get(*d).unwrap().clone()).collect();
    verdict(Condition::R1, exp.nvars() - 1, degrees, gens, expected_dim_r1(m), budget)
}

pub fn check_r2<F: Field>(exp: &TaylorExpansion<F>, budget: Budget) -> Result<RegularityVerdict> {
    let m = exp.degree();
    match kind_of_expansion(exp)? {
        PointKind::QuadraticRank(a) if a >= 7 => {}
        other => return Err(Error::Precondition(format!("(R2) needs a quadratic point of rank >= 7, found {other:?}"))),
    }
    let degrees: Vec<usize> = std::iter::once(2).chain(7..=m).collect();
    let gens = degrees.iter().map(|&d| exp.q(d).clone()).collect();
    verdict(Condition::R2, exp.nvars(), degrees, gens, expected_dim_r2(m), budget)
}

pub fn check_r3<F: Field>(exp: &TaylorExpansion<F>, budget: Budget) -> Result<RegularityVerdict> {
    let m = exp.degree();
    match kind_of_expansion(exp)? {
        PointKind::QuadraticRank(a) if (3..=6).contains(&a) => {}
        other => return Err(Error::Precondition(format!("(R3) needs a quadratic point of rank 3..6, found {other:?}"))),
    }
    let degrees: Vec<usize> = (2..=m).collect();
    let gens = degrees.iter().map(|&d| exp.q(d).clone()).collect();
    verdict(Condition::R3, exp.nvars(), degrees, gens, expected_dim_r3(m), budget)
}

/// The condition that applies at the point, checked.
pub fn check_regularity<F: Field>(exp: &TaylorExpansion<F>, budget: Budget) -> Result<RegularityVerdict> {
    let m = exp.degree();
    match kind_of_expansion(exp)? {
        PointKind::Nonsingular if m == 5 => Ok(RegularityVerdict {
            condition: Condition::VacuousM5,
            sequence_checked: vec![],
            expected_dim: 0,
            actual_dim: 0,
            pass: true,
        }),
        PointKind::Nonsingular => check_r1(exp, budget),
        PointKind::QuadraticRank(a) if a >= 7 => check_r2(exp, budget),
        PointKind::QuadraticRank(a) if a >= 3 => check_r3(exp, budget),
        other => Err(Error::Precondition(format!("no regularity condition applies to {other:?}"))),
    }
}

/// Local bound on the base locus of the `j`-th hypertangent system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypertangentBound {
    pub j: usize,
    pub condition: Condition,
    /// Dimension of the cone `V(q1, …, q_{j+1})`, an upper bound for the local dimension at `o`.
    pub cone_dim: i64,
    /// `(M - 1) - cone_dim`, a lower bound for `codim_o(Bs Λ_j ⊂ F)`.
    pub codim_lower_bound: i64,
    pub required: i64,
    pub holds: bool,
}

/// Near `o`, `Bs Λ_j ∩ F = V(q1, …, qj, q_{j+1} + … + q_M)` since the left
/// segments generate the same ideal as the pieces; its tangent cone lies in
/// `V(q1, …, q_{j+1})`.
pub fn hypertangent_base_dim<F: Field>(exp: &TaylorExpansion<F>, j: usize, budget: Budget) -> Result<HypertangentBound> {
    let m = exp.degree();
    let condition = match kind_of_expansion(exp)? {
        PointKind::Nonsingular if m >= 6 => Condition::R1,
        PointKind::QuadraticRank(a) if a >= 7 => Condition::R2,
        PointKind::QuadraticRank(a) if a >= 3 => Condition::R3,
        other => return Err(Error::Precondition(format!("no hypertangent bound for {other:?} at M = {m}"))),
    };
    let (lo, required) = match condition {
        Condition::R1 => (5, j as i64 - 4),
        Condition::R2 => (6, j as i64 - 5),
        _ => (2, j as i64 - 1),
    };
    if j < lo || j >= m {
        return Err(Error::InvalidArgument(format!("j = {j} outside {lo}..{}", m - 1)));
    }
    let gens: Vec<_> = (1..=j + 1).map(|i| exp.q(i).clone()).filter(|g| !g.is_zero()).collect();
    let cone_dim = ideal_dimension(exp.nvars(), &gens, true, budget)?.affine_dim;
    let codim_lower_bound = (m as i64 - 1) - cone_dim;
    let holds = codim_lower_bound >= required;
    Ok(HypertangentBound { j, condition, cone_dim, codim_lower_bound, required, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::{expand_at, ProjectivePoint};
    use crate::field::{PrimeField, Rationals};
    use crate::linalg::Matrix;

    fn q(text: &str, n: usize) -> Polynomial<Rationals> {
        Polynomial::parse(&Rationals, n, text).unwrap()
    }

    fn origin<F: Field>(k: &F, n: usize) -> ProjectivePoint<F> {
        let mut c = vec![0; n];
        c[0] = 1;
        ProjectivePoint::from_i64(k, &c).unwrap()
    }

    #[test]
    fn expected_dims_symbolic() {
        for m in 5..=30 {
            assert_eq!(expected_dim_r1(m), 4);
            assert_eq!(expected_dim_r2(m), 5);
            assert_eq!(expected_dim_r3(m), 1);
        }
    }

    // x0^3 (x1^2+x2^2+x3^2) + x0^2 (x4^3 + x5^3 + x1 x4 x5) + x0 (x1^4 + x4^4 + x2 x5^3) + x1^5 + … + x5^5
    fn rank3_m5() -> Polynomial<Rationals> {
        q(
            "x0^3*x1^2 + x0^3*x2^2 + x0^3*x3^2 + x0^2*x4^3 + x0^2*x5^3 + x0^2*x1*x4*x5 + x0*x1^4 + x0*x4^4 + x0*x2*x5^3 \
             + x1^5 + x2^5 + x3^5 + x4^5 + x5^5",
            6,
        )
    }

    #[test]
    fn r3_committed_instance() {
        let exp = expand_at(&rank3_m5(), &origin(&Rationals, 6)).unwrap();
        let v = check_regularity(&exp, Budget::default()).unwrap();
        assert_eq!(v.condition, Condition::R3);
        assert_eq!(v.sequence_checked, vec![2, 3, 4, 5]);
        assert_eq!(v.actual_dim, 1);
        assert!(v.pass);
    }

    #[test]
    fn r3_fails_when_cubic_contains_quadric() {
        // q3 = q2 * z4, q4 = q2 * z5^2: V(q2..q5) = V(q2, q5) has dimension 3.
        let f = q(
            "x0^3*x1^2 + x0^3*x2^2 + x0^3*x3^2 + x0^2*x4*x1^2 + x0^2*x4*x2^2 + x0^2*x4*x3^2 \
             + x0*x5^2*x1^2 + x0*x5^2*x2^2 + x0*x5^2*x3^2 + x1^5 + x2^5 + x3^5 + x4^5 + x5^5",
            6,
        );
        let exp = expand_at(&f, &origin(&Rationals, 6)).unwrap();
        let v = check_r3(&exp, Budget::default()).unwrap();
        assert_eq!(v.actual_dim, 3);
        assert!(!v.pass);
    }

    #[test]
    fn r3_rejects_nonsingular_point() {
        let f = q("x0^5 + x1^5 + x2^5 + x3^5 + x4^5 + x5^5", 6);
        let o = ProjectivePoint::from_i64(&Rationals, &[1, -1, 0, 0, 0, 0]).unwrap();
        let exp = expand_at(&f, &o).unwrap();
        assert!(matches!(check_r3(&exp, Budget::default()), Err(Error::Precondition(_))));
        assert_eq!(check_regularity(&exp, Budget::default()).unwrap().condition, Condition::VacuousM5);
    }

    #[test]
    fn r1_single_form() {
        let f = q("x0^6 - x1^6 + x2^6 + x3^6 + x4^6 + x5^6 + x6^6", 7);
        let o = ProjectivePoint::from_i64(&Rationals, &[1, -1, 0, 0, 0, 0, 0]).unwrap();
        let exp = expand_at(&f, &o).unwrap();
        let v = check_regularity(&exp, Budget::default()).unwrap();
        assert_eq!(v.condition, Condition::R1);
        assert_eq!(v.sequence_checked, vec![6]);
        assert_eq!(v.actual_dim, 4);
        assert!(v.pass);

        // q6 vanishing on the tangent hyperplane z1 = 0.
        let f = q("x0^5*x1 + x1^6 + x1*x2^5", 7);
        let o = origin(&Rationals, 7);
        let exp = expand_at(&f, &o).unwrap();
        let v = check_r1(&exp, Budget::default()).unwrap();
        assert_eq!(v.actual_dim, 5);
        assert!(!v.pass);
    }

    #[test]
    fn r2_examples() {
        let k = PrimeField::new(7).unwrap();
        let quad = "x1^2 + x2^2 + x3^2 + x4^2 + x5^2 + x6^2 + x7^2";
        let q2: Polynomial<PrimeField> = Polynomial::parse(&k, 8, quad).unwrap();
        let x0 = Polynomial::var(&k, 8, 0);
        let q7 = Polynomial::parse(&k, 8, "x1^7 + 2*x2^7 + 3*x3^7 + x4^7 + x5^7 + 5*x6^7 + x7^7 + x1*x2^3*x5^3").unwrap();
        let f = &(&x0.pow(5) * &q2) + &q7;
        let exp = expand_at(&f, &origin(&k, 8)).unwrap();
        let v = check_regularity(&exp, Budget::default()).unwrap();
        assert_eq!(v.condition, Condition::R2);
        assert_eq!(v.actual_dim, 5);
        assert!(v.pass);

        let bad = &(&x0.pow(5) * &q2) + &(&q2 * &Polynomial::parse(&k, 8, "x1^5 + x3^5").unwrap());
        let exp = expand_at(&bad, &origin(&k, 8)).unwrap();
        let v = check_r2(&exp, Budget::default()).unwrap();
        assert_eq!(v.actual_dim, 6);
        assert!(!v.pass);

        let exp = expand_at(&rank3_m5(), &origin(&Rationals, 6)).unwrap();
        assert!(check_r2(&exp, Budget::default()).is_err());
    }

    #[test]
    fn hypertangent_bounds_m5() {
        let exp = expand_at(&rank3_m5(), &origin(&Rationals, 6)).unwrap();
        let b = hypertangent_base_dim(&exp, 2, Budget::default()).unwrap();
        assert_eq!(b.codim_lower_bound, 1);
        assert!(b.holds);
        let b = hypertangent_base_dim(&exp, 4, Budget::default()).unwrap();
        assert_eq!(b.codim_lower_bound, 3);
        assert!(b.holds);
        assert!(hypertangent_base_dim(&exp, 5, Budget::default()).is_err());
        assert!(hypertangent_base_dim(&exp, 1, Budget::default()).is_err());
    }

    #[test]
    fn verdict_invariant_under_chart_change() {
        let exp = expand_at(&rank3_m5(), &origin(&Rationals, 6)).unwrap();
        let a = Matrix::from_rows(
            &Rationals,
            [[1, 0, 0, 2, 0], [0, 1, 0, 0, -1], [1, 0, 1, 0, 0], [0, 0, 0, 1, 3], [0, 1, 0, 0, 1]]
                .iter()
                .map(|r| r.iter().map(|&v| Rationals.from_i64(v)).collect())
                .collect(),
        )
        .unwrap();
        let zero = vec![Rationals.zero(); 5];
        let gens: Vec<_> = exp.pieces()[1..].iter().map(|p| p.linear_substitute(&a, &zero).unwrap()).collect();
        let d = ideal_dimension(5, &gens, true, Budget::default()).unwrap();
        assert_eq!(d.affine_dim, check_r3(&exp, Budget::default()).unwrap().actual_dim);
    }
}
