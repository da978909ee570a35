//! Point classification (nonsingular / quadratic of rank `a` / multiplicity
//! at least 3), congruence diagonalization of `q2` over the base field, and
//! condition (G) at rank-3 points.

use crate::error::{Error, Result};
use crate::expansion::{expand_at, ProjectivePoint, TaylorExpansion};
use crate::field::{Field, PrimeField, Rationals};
use crate::groebner::{ideal_dimension, Budget, IdealDimension};
use crate::linalg::Matrix;
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::regularity::RegularityVerdict;

/// A quadratic form with a base-field change of variables `z = P y` that
/// turns it into `c_1 y_1^2 + … + c_r y_r^2`.
#[derive(Clone, Debug)]
pub struct QuadraticForm<F: Field> {
    /// Symmetric Gram matrix `A` with `q(z) = zᵀ A z`.
    pub matrix: Matrix<F>,
    pub rank: usize,
    /// Invertible `P`, columns `r..` span the kernel of `A`.
    pub change: Matrix<F>,
    /// The nonzero diagonal entries `c_1..c_r`.
    pub coefficients: Vec<F::Elem>,
}

impl<F: Field> QuadraticForm<F> {
    /// `Pᵀ A P`.
    pub fn diagonal(&self) -> Matrix<F> {
        self.change.transpose().mul(&self.matrix).and_then(|m| m.mul(&self.change)).expect("square")
    }
}

pub fn gram_matrix<F: Field>(q2: &Polynomial<F>) -> Result<Matrix<F>> {
    let k = q2.field();
    if k.characteristic() == 2 {
        return Err(Error::Characteristic2);
    }
    if !q2.is_zero() && (q2.degree() != 2 || !q2.is_homogeneous()) {
        return Err(Error::NotHomogeneous);
    }
    let n = q2.nvars();
    let half = k.inv(&k.from_i64(2)).expect("odd characteristic");
    let mut a = Matrix::zeros(k, n, n);
    for (m, c) in q2.terms() {
        let vars: Vec<usize> = (0..n).filter(|&i| m.exponent(i) > 0).collect();
        match vars.as_slice() {
            [i] => a[(*i, *i)] = c.clone(),
            [i, j] => {
                let h = k.mul(c, &half);
                a[(*i, *j)] = h.clone();
                a[(*j, *i)] = h;
            }
            _ => unreachable!("degree-2 monomial"),
        }
    }
    Ok(a)
}

/// Symmetric Gaussian elimination, never leaving the base field.
pub fn diagonalize<F: Field>(q2: &Polynomial<F>) -> Result<QuadraticForm<F>> {
    let matrix = gram_matrix(q2)?;
    let k = q2.field();
    let n = matrix.rows();
    let mut a = matrix.clone();
    let mut p = Matrix::identity(k, n);

    // Simultaneous column operation on P and congruence on A: A <- Eᵀ A E.
    fn add_multiple<F: Field>(a: &mut Matrix<F>, p: &mut Matrix<F>, target: usize, source: usize, factor: &F::Elem) {
        let k = a.field().clone();
        let n = a.rows();
        for i in 0..n {
            let t = k.mul(factor, &a[(i, source)]);
            a[(i, target)] = k.add(&a[(i, target)], &t);
        }
        for j in 0..n {
            let t = k.mul(factor, &a[(source, j)]);
            a[(target, j)] = k.add(&a[(target, j)], &t);
        }
        for i in 0..n {
            let t = k.mul(factor, &p[(i, source)]);
            p[(i, target)] = k.add(&p[(i, target)], &t);
        }
    }

    let mut rank = 0;
    for step in 0..n {
        if let Some(i) = (step..n).find(|&i| !k.is_zero(&a[(i, i)])) {
            a.swap_rows(step, i);
            a.swap_cols(step, i);
            p.swap_cols(step, i);
        } else {
            let off = (step..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !k.is_zero(&a[(i, j)]));
            let Some((i, j)) = off else { break };
            // e_i <- e_i + e_j makes the diagonal entry 2 a_ij.
            add_multiple(&mut a, &mut p, i, j, &k.one());
            a.swap_rows(step, i);
            a.swap_cols(step, i);
            p.swap_cols(step, i);
        }
        let pivot_inv = k.inv(&a[(step, step)]).expect("nonzero pivot");
        for j in step + 1..n {
            if k.is_zero(&a[(step, j)]) {
                continue;
            }
            let factor = k.neg(&k.mul(&a[(step, j)], &pivot_inv));
            add_multiple(&mut a, &mut p, j, step, &factor);
        }
        rank += 1;
    }
    let coefficients = (0..rank).map(|i| a[(i, i)].clone()).collect();
    Ok(QuadraticForm { matrix, rank, change: p, coefficients })
}

/// The graded pieces rewritten in diagonalizing coordinates `y`, where
/// `q2 = c_1 y_1^2 + … + c_r y_r^2` and `y_{r+1}..y_M` span `Sing E_F`.
#[derive(Clone, Debug)]
pub struct DiagonalFrame<F: Field> {
    pub form: QuadraticForm<F>,
    /// `pieces[i - 1]` is `q_i(P y)`.
    pub pieces: Vec<Polynomial<F>>,
}

impl<F: Field> DiagonalFrame<F> {
    pub fn rank(&self) -> usize {
        self.form.rank
    }

    pub fn nvars(&self) -> usize {
        self.pieces[0].nvars()
    }

    pub fn piece(&self, i: usize) -> Polynomial<F> {
        match self.pieces.get(i - 1) {
            Some(p) => p.clone(),
            None => Polynomial::zero(self.pieces[0].field(), self.nvars()),
        }
    }
}

pub fn diagonal_frame<F: Field>(exp: &TaylorExpansion<F>) -> Result<DiagonalFrame<F>> {
    let form = diagonalize(exp.q(2))?;
    let k = exp.field();
    let zero = vec![k.zero(); exp.nvars()];
    let pieces = exp
        .pieces()
        .iter()
        .map(|q| q.linear_substitute(&form.change, &zero))
        .collect::<Result<Vec<_>>>()?;
    Ok(DiagonalFrame { form, pieces })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum PointKind {
    Nonsingular,
    QuadraticRank(usize),
    /// Multiplicity (lowest nonvanishing degree) at least 3.
    HigherMultiplicity(usize),
}

#[derive(Clone, Debug)]
pub struct PointReport<F: Field> {
    pub point: ProjectivePoint<F>,
    pub kind: PointKind,
    pub condition_g: Option<ConditionGReport<F>>,
    pub regularity: Option<RegularityVerdict>,
}

pub fn kind_of_expansion<F: Field>(exp: &TaylorExpansion<F>) -> Result<PointKind> {
    if !exp.q(1).is_zero() {
        return Ok(PointKind::Nonsingular);
    }
    if exp.degree() >= 2 && !exp.q(2).is_zero() {
        return Ok(PointKind::QuadraticRank(diagonalize(exp.q(2))?.rank));
    }
    let mult = (3..=exp.degree()).find(|&i| !exp.q(i).is_zero()).unwrap_or(exp.degree() + 1);
    Ok(PointKind::HigherMultiplicity(mult))
}

pub fn classify_point<F: Field>(f: &Polynomial<F>, o: &ProjectivePoint<F>) -> Result<PointReport<F>> {
    let exp = expand_at(f, o)?;
    Ok(PointReport { point: o.clone(), kind: kind_of_expansion(&exp)?, condition_g: None, regularity: None })
}

/// Condition (G) data at a quadratic point of rank 3.
#[derive(Clone, Debug)]
pub struct ConditionGReport<F: Field> {
    pub coefficients: Vec<F::Elem>,
    /// Columns of the change of variables spanning `Sing E_F` (in the `z` coordinates).
    pub kernel_basis: Vec<Vec<F::Elem>>,
    /// `q3` restricted to the kernel, in the `M - 3` kernel coordinates.
    pub restricted_cubic: Polynomial<F>,
    pub cubic_singular_locus: IdealDimension<F>,
    /// Projective dimension of the singular locus of the restricted cubic.
    pub cubic_sing_dim: i64,
    /// `4 q4|K - Σ (1/c_i) (∂q3/∂y_i|K)^2`.
    pub h: Polynomial<F>,
    /// Common zeros of `h` and the singular locus, when that locus is finite and nonempty.
    pub h_on_singular_points: Option<IdealDimension<F>>,
    pub verdict: bool,
}

pub fn check_condition_g<F: Field>(f: &Polynomial<F>, o: &ProjectivePoint<F>, budget: Budget) -> Result<ConditionGReport<F>> {
    let exp = expand_at(f, o)?;
    condition_g_from_expansion(&exp, budget)
}

/// Restriction of `p` to the coordinate subspace `y_0 = … = y_{r-1} = 0`.
pub(crate) fn restrict_to_kernel<F: Field>(p: &Polynomial<F>, rank: usize) -> Polynomial<F> {
    let keep: Vec<usize> = (rank..p.nvars()).collect();
    p.restrict_to_coordinates(&keep)
}

/// `4 g4|K - Σ_{i<a} (1/c_i) (∂g3/∂y_i|K)^2` on the kernel coordinates.
pub(crate) fn h_form<F: Field>(g3: &Polynomial<F>, g4: &Polynomial<F>, coefficients: &[F::Elem]) -> Result<Polynomial<F>> {
    let k = g3.field();
    let a = coefficients.len();
    let mut h = restrict_to_kernel(g4, a).scale(&k.from_i64(4));
    for (i, c) in coefficients.iter().enumerate() {
        let d = restrict_to_kernel(&g3.partial_derivative(i)?, a);
        let w = k.inv(c).ok_or_else(|| Error::Precondition("zero diagonal coefficient".into()))?;
        h = &h - &(&d * &d).scale(&w);
    }
    Ok(h)
}

/// Generators of the singular locus of the projective hypersurface `{c = 0}`.
pub(crate) fn singular_ideal<F: Field>(c: &Polynomial<F>) -> Vec<Polynomial<F>> {
    let mut gens = vec![c.clone()];
    gens.extend(c.gradient());
    gens.retain(|g| !g.is_zero());
    gens
}

pub fn condition_g_from_expansion<F: Field>(exp: &TaylorExpansion<F>, budget: Budget) -> Result<ConditionGReport<F>> {
    match kind_of_expansion(exp)? {
        PointKind::QuadraticRank(3) => {}
        other => return Err(Error::Precondition(format!("condition (G) needs a rank-3 quadratic point, found {other:?}"))),
    }
    let frame = diagonal_frame(exp)?;
    let kdim = frame.nvars() - 3;
    let g3 = frame.piece(3);
    let g4 = frame.piece(4);
    let restricted_cubic = restrict_to_kernel(&g3, 3);
    let h = h_form(&g3, &g4, &frame.form.coefficients)?;
    let sing_gens = singular_ideal(&restricted_cubic);
    let cubic_singular_locus = ideal_dimension(kdim, &sing_gens, true, budget)?;
    let cubic_sing_dim = cubic_singular_locus.projective_dim.expect("homogeneous");
    let h_on_singular_points = if cubic_sing_dim == 0 {
        let mut gens = sing_gens.clone();
        gens.push(h.clone());
        gens.retain(|g| !g.is_zero());
        Some(ideal_dimension(kdim, &gens, true, budget)?)
    } else {
        None
    };
    let verdict = !restricted_cubic.is_zero()
        && cubic_sing_dim <= 0
        && h_on_singular_points.as_ref().is_none_or(|d| d.projective_dim == Some(-1));
    let kernel_basis = (3..frame.nvars()).map(|j| frame.form.change.column(j)).collect();
    Ok(ConditionGReport {
        coefficients: frame.form.coefficients.clone(),
        kernel_basis,
        restricted_cubic,
        cubic_singular_locus,
        cubic_sing_dim,
        h,
        h_on_singular_points,
        verdict,
    })
}

/// Projective dimension of `Sing F = V(f, ∂f/∂x_0, …, ∂f/∂x_M)`.
pub fn singular_locus_dimension<F: Field>(f: &Polynomial<F>, budget: Budget) -> Result<IdealDimension<F>> {
    if !f.is_homogeneous() || f.is_zero() {
        return Err(Error::NotHomogeneous);
    }
    ideal_dimension(f.nvars(), &singular_ideal(f), true, budget)
}

/// Primitive integral multiple of `f`, reduced modulo `p`.
pub fn reduce_mod_p(f: &Polynomial<Rationals>, p: &PrimeField) -> Result<Polynomial<PrimeField>> {
    use num_integer::Integer;
    use num_traits::{One, Zero};
    let mut lcm = num_bigint::BigInt::one();
    let mut gcd = num_bigint::BigInt::zero();
    for (_, c) in f.terms() {
        lcm = lcm.lcm(c.denom());
        gcd = gcd.gcd(c.numer());
    }
    let one = num_bigint::BigInt::one();
    f.map_coefficients(p, |c| {
        let scaled = c * num_rational::BigRational::from_integer(lcm.clone());
        p.from_fraction(&(scaled.to_integer() / &gcd), &one)
    })
}

/// Upper bound for the projective dimension of the singular locus of `{f = 0}`
/// over the algebraic closure of `Q`: the dimension of the singular locus of
/// the reduction modulo `p`. The singular scheme is proper over `Z`, so fibre
/// dimension can only jump up at the special fibre.
pub fn singular_locus_dimension_bound(f: &Polynomial<Rationals>, p: &PrimeField, budget: Budget) -> Result<i64> {
    if !f.is_homogeneous() || f.is_zero() {
        return Err(Error::NotHomogeneous);
    }
    let reduced = reduce_mod_p(f, p)?;
    Ok(singular_locus_dimension(&reduced, budget)?.projective_dim.expect("homogeneous"))
}

/// Rank of the Hessian of the affine polynomial at a point of the chart.
pub fn hessian_rank_at<F: Field>(g: &Polynomial<F>, z: &[F::Elem]) -> Result<usize> {
    let k = g.field();
    let n = g.nvars();
    let mut h = Matrix::zeros(k, n, n);
    let grad = g.gradient();
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] = grad[i].partial_derivative(j)?.evaluate(z)?;
        }
    }
    Ok(h.rank())
}

pub(crate) fn diagonal_quadric<F: Field>(field: &F, nvars: usize, coefficients: &[F::Elem]) -> Polynomial<F> {
    Polynomial::from_terms(
        field,
        nvars,
        coefficients.iter().enumerate().map(|(i, c)| {
            let mut e = vec![0u16; nvars];
            e[i] = 2;
            (Monomial::new(&e), c.clone())
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn q(text: &str, n: usize) -> Polynomial<Rationals> {
        Polynomial::parse(&Rationals, n, text).unwrap()
    }

    fn check_congruence<F: Field>(q2: &Polynomial<F>) -> QuadraticForm<F> {
        let form = diagonalize(q2).unwrap();
        let d = form.diagonal();
        let k = q2.field();
        let n = q2.nvars();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    assert!(k.is_zero(&d[(i, j)]));
                }
            }
            assert_eq!(!k.is_zero(&d[(i, i)]), i < form.rank);
        }
        let zero = vec![k.zero(); n];
        let transformed = q2.linear_substitute(&form.change, &zero).unwrap();
        assert_eq!(transformed, diagonal_quadric(k, n, &form.coefficients));
        form
    }

    #[test]
    fn diagonalize_examples() {
        let f = check_congruence(&q("x0^2 + x1^2 + x2^2", 4));
        assert_eq!(f.rank, 3);
        assert_eq!(f.coefficients, vec![Rationals.one(); 3]);
        let f = check_congruence(&q("x0*x1", 2));
        assert_eq!(f.rank, 2);
        let f = check_congruence(&Polynomial::zero(&Rationals, 3));
        assert_eq!(f.rank, 0);
        check_congruence(&q("x0*x1 + x1*x2 + x0*x2 - 3*x3^2 + x3*x4", 5));
        let k = PrimeField::new(3).unwrap();
        check_congruence(&Polynomial::parse(&k, 3, "x0*x1 + x1*x2 + 2*x2^2").unwrap());
        assert!(matches!(diagonalize(&q("x0^3", 2)), Err(Error::NotHomogeneous)));
    }

    fn rank3_quintic() -> Polynomial<Rationals> {
        q("x0^3*x1^2 + x0^3*x2^2 + x0^3*x3^2 + x0^2*x4^3 + x0^2*x5^3 + x1^5 + x2^5 + x3^5 + x4^5 + x5^5", 6)
    }

    #[test]
    fn classify_examples() {
        let fermat = q("x0^5 + x1^5 + x2^5 + x3^5 + x4^5 + x5^5", 6);
        let o = ProjectivePoint::from_i64(&Rationals, &[1, -1, 0, 0, 0, 0]).unwrap();
        assert_eq!(classify_point(&fermat, &o).unwrap().kind, PointKind::Nonsingular);
        let origin = ProjectivePoint::from_i64(&Rationals, &[1, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(classify_point(&rank3_quintic(), &origin).unwrap().kind, PointKind::QuadraticRank(3));
        let cusp = q("x0^2*x1^3 + x2^5 + x3^5 + x4^5 + x5^5", 6);
        assert_eq!(classify_point(&cusp, &origin).unwrap().kind, PointKind::HigherMultiplicity(3));
        assert!(matches!(classify_point(&fermat, &origin), Err(Error::NotOnHypersurface(_))));
    }

    #[test]
    fn condition_g_smooth_kernel_cubic() {
        // M = 6, kernel cubic y4^3 + y5^3 + y6^3 is smooth in P^2.
        let f = q(
            "x0^4*x1^2 + x0^4*x2^2 + x0^4*x3^2 + x0^3*x4^3 + x0^3*x5^3 + x0^3*x6^3 + x1^6 + x2^6 + x3^6 + x4^6 + x5^6 + x6^6",
            7,
        );
        let o = ProjectivePoint::from_i64(&Rationals, &[1, 0, 0, 0, 0, 0, 0]).unwrap();
        let g = check_condition_g(&f, &o, Budget::default()).unwrap();
        assert_eq!(g.cubic_sing_dim, -1);
        assert!(g.verdict);
    }

    #[test]
    fn condition_g_vanishing_kernel_cubic() {
        // M = 6, q3 = y1 y4^2 vanishes on the kernel; h = -y4^4.
        let f = q(
            "x0^4*x1^2 + x0^4*x2^2 + x0^4*x3^2 + x0^3*x1*x4^2 + x1^6 + x2^6 + x3^6 + x4^6 + x5^6 + x6^6",
            7,
        );
        let o = ProjectivePoint::from_i64(&Rationals, &[1, 0, 0, 0, 0, 0, 0]).unwrap();
        let g = check_condition_g(&f, &o, Budget::default()).unwrap();
        assert!(g.restricted_cubic.is_zero());
        assert_eq!(g.h, q("-x0^4", 3));
        assert_eq!(g.cubic_sing_dim, 2);
        assert!(!g.verdict);

        // Adding q4 = y4^4 + y5^4 + y6^4 gives h = 3 y4^4 + 4 y5^4 + 4 y6^4; still fails.
        let f = q(
            "x0^4*x1^2 + x0^4*x2^2 + x0^4*x3^2 + x0^3*x1*x4^2 + x0^2*x4^4 + x0^2*x5^4 + x0^2*x6^4 + x1^6 + x2^6 + x3^6 + x4^6 + x5^6 + x6^6",
            7,
        );
        let g = check_condition_g(&f, &o, Budget::default()).unwrap();
        assert_eq!(g.h, q("3*x0^4 + 4*x1^4 + 4*x2^4", 3));
        assert!(!g.verdict);
    }

    #[test]
    fn condition_g_requires_rank_three() {
        let fermat = q("x0^5 + x1^5 + x2^5 + x3^5 + x4^5 + x5^5", 6);
        let o = ProjectivePoint::from_i64(&Rationals, &[1, -1, 0, 0, 0, 0]).unwrap();
        assert!(matches!(check_condition_g(&fermat, &o, Budget::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn singular_locus_examples() {
        let fermat = q("x0^5 + x1^5 + x2^5 + x3^5 + x4^5 + x5^5", 6);
        assert_eq!(singular_locus_dimension(&fermat, Budget::default()).unwrap().projective_dim, Some(-1));
        // x0 * (Fermat quartic): singular along {x0 = g = 0}, a surface in P^4... of dim M-2 = 2.
        let reducible = q("x0^5 + x0*x1^4 + x0*x2^4 + x0*x3^4 + x0*x4^4", 5);
        assert_eq!(singular_locus_dimension(&reducible, Budget::default()).unwrap().projective_dim, Some(2));
    }

    #[test]
    fn modular_bound() {
        let k = PrimeField::new(7).unwrap();
        let f = q("1/2*x0^3 + 3/4*x1^3 - 7/6*x2^3", 3);
        assert_eq!(reduce_mod_p(&f, &k).unwrap(), Polynomial::parse(&k, 3, "6*x0^3 + 9*x1^3").unwrap());
        let big = PrimeField::new(32003).unwrap();
        let fermat = q("x0^5 + x1^5 + x2^5 + x3^5 + x4^5", 5);
        assert_eq!(singular_locus_dimension_bound(&fermat, &big, Budget::default()).unwrap(), -1);
        let reducible = q("x0^5 + x0*x1^4 + x0*x2^4 + x0*x3^4 + x0*x4^4", 5);
        assert_eq!(singular_locus_dimension_bound(&reducible, &big, Budget::default()).unwrap(), 2);
        // Bad reduction only raises the dimension.
        let five = PrimeField::new(5).unwrap();
        assert_eq!(singular_locus_dimension_bound(&fermat, &five, Budget::default()).unwrap(), 3);
    }
}
