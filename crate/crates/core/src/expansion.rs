//! Affine Taylor expansion `f = q1 + q2 + … + qd` of a form at a point of
//! its hypersurface, and restriction of the graded pieces to the tangent
//! hyperplane `{q1 = 0}`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::poly::Polynomial;

/// A point of projective space, scaled so its first nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjectivePoint<F: Field> {
    field: F,
    coords: Vec<F::Elem>,
}

impl<F: Field> ProjectivePoint<F> {
    pub fn new(field: &F, coords: Vec<F::Elem>) -> Result<Self> {
        let Some(lead) = coords.iter().find(|c| !field.is_zero(c)) else {
            return Err(Error::InvalidArgument("projective point with all coordinates zero".into()));
        };
        let inv = field.inv(lead).expect("nonzero");
        let coords = coords.iter().map(|c| field.mul(c, &inv)).collect();
        Ok(ProjectivePoint { field: field.clone(), coords })
    }

    pub fn from_i64(field: &F, coords: &[i64]) -> Result<Self> {
        Self::new(field, coords.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn coords(&self) -> &[F::Elem] {
        &self.coords
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Index of the first nonzero coordinate (which equals 1).
    pub fn lead_index(&self) -> usize {
        self.coords.iter().position(|c| !self.field.is_zero(c)).expect("nonzero point")
    }
}

impl<F: Field> fmt::Display for ProjectivePoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            self.field.fmt_elem(c, f)?;
        }
        write!(f, ")")
    }
}

impl<F: Field> fmt::Debug for ProjectivePoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Graded pieces of `f` in the affine chart `x_chart = 1`, centred at a point.
#[derive(Clone, Debug)]
pub struct TaylorExpansion<F: Field> {
    pub point: ProjectivePoint<F>,
    pub chart_index: usize,
    /// Affine coordinates of the centre (the projective coordinates without the chart one).
    pub center: Vec<F::Elem>,
    /// `pieces[i - 1]` is `q_i`, homogeneous of degree `i` in the affine variables.
    pieces: Vec<Polynomial<F>>,
}

impl<F: Field> TaylorExpansion<F> {
    /// `q_i` for `1 <= i <= degree`.
    pub fn q(&self, i: usize) -> &Polynomial<F> {
        &self.pieces[i - 1]
    }

    pub fn pieces(&self) -> &[Polynomial<F>] {
        &self.pieces
    }

    pub fn degree(&self) -> usize {
        self.pieces.len()
    }

    /// Number of affine variables `z_1..z_M`.
    pub fn nvars(&self) -> usize {
        self.pieces[0].nvars()
    }

    pub fn field(&self) -> &F {
        self.pieces[0].field()
    }

    pub fn is_singular(&self) -> bool {
        self.q(1).is_zero()
    }

    /// `q_1 + … + q_d`.
    pub fn reassemble(&self) -> Polynomial<F> {
        self.pieces.iter().fold(Polynomial::zero(self.field(), self.nvars()), |acc, q| &acc + q)
    }

    /// `q_lo + … + q_hi`; the left segment `f_[1,i]` is `segment(1, i)`.
    pub fn segment(&self, lo: usize, hi: usize) -> Polynomial<F> {
        (lo..=hi.min(self.degree())).fold(Polynomial::zero(self.field(), self.nvars()), |acc, i| &acc + self.q(i))
    }
}

fn check_form<F: Field>(f: &Polynomial<F>) -> Result<usize> {
    if f.is_zero() || !f.is_homogeneous() || f.degree() < 1 {
        return Err(Error::NotHomogeneous);
    }
    Ok(f.degree() as usize)
}

/// Expansion in the chart of the first nonzero coordinate of `o`.
pub fn expand_at<F: Field>(f: &Polynomial<F>, o: &ProjectivePoint<F>) -> Result<TaylorExpansion<F>> {
    expand_at_chart(f, o, o.lead_index())
}

/// Expansion in the chart `x_chart = 1`; `o` must have a nonzero `chart` coordinate.
pub fn expand_at_chart<F: Field>(
    f: &Polynomial<F>,
    o: &ProjectivePoint<F>,
    chart: usize,
) -> Result<TaylorExpansion<F>> {
    let degree = check_form(f)?;
    let k = f.field();
    let n = f.nvars();
    if o.coords().len() != n {
        return Err(Error::LengthMismatch { expected: n, got: o.coords().len() });
    }
    if chart >= n || k.is_zero(&o.coords()[chart]) {
        return Err(Error::InvalidArgument(format!("point {o} does not lie in chart x{chart} = 1")));
    }
    if !k.is_zero(&f.evaluate(o.coords())?) {
        return Err(Error::NotOnHypersurface(o.to_string()));
    }
    let scale = k.inv(&o.coords()[chart]).expect("nonzero");
    let m = n - 1;
    let mut center = Vec::with_capacity(m);
    let images: Vec<Polynomial<F>> = (0..n)
        .map(|j| {
            if j == chart {
                return Polynomial::one(k, m);
            }
            let idx = if j < chart { j } else { j - 1 };
            let c = k.mul(&o.coords()[j], &scale);
            center.push(c.clone());
            &Polynomial::var(k, m, idx) + &Polynomial::constant(k, m, c)
        })
        .collect();
    let g = f.substitute(&images)?;
    debug_assert!(g.homogeneous_component(0).is_zero());
    let pieces = (1..=degree).map(|i| g.homogeneous_component(i as u32)).collect();
    Ok(TaylorExpansion { point: o.clone(), chart_index: chart, center, pieces })
}

/// The graded pieces restricted to `T_oF = {q1 = 0}`, parametrised by `M - 1` variables.
#[derive(Clone, Debug)]
pub struct TangentRestriction<F: Field> {
    /// The eliminated affine variable.
    pub pivot: usize,
    /// `M × (M-1)` matrix `S` with `z = S w` on the hyperplane.
    pub substitution: Matrix<F>,
    pub restricted: BTreeMap<usize, Polynomial<F>>,
}

impl<F: Field> TangentRestriction<F> {
    pub fn get(&self, degree: usize) -> Option<&Polynomial<F>> {
        self.restricted.get(&degree)
    }
}

pub fn restrict_to_tangent<F: Field>(exp: &TaylorExpansion<F>, degrees: &[usize]) -> Result<TangentRestriction<F>> {
    let q1 = exp.q(1);
    if q1.is_zero() {
        return Err(Error::SingularPoint);
    }
    let k = exp.field();
    let m = exp.nvars();
    let coeffs: Vec<F::Elem> = (0..m)
        .map(|i| q1.coefficient(&crate::monomial::Monomial::var(m, i)))
        .collect();
    let pivot = coeffs.iter().position(|c| !k.is_zero(c)).expect("q1 nonzero");
    let neg_inv = k.neg(&k.inv(&coeffs[pivot]).expect("nonzero"));
    let mut s = Matrix::zeros(k, m, m - 1);
    for i in 0..m {
        if i == pivot {
            for (p, j) in (0..m).filter(|&j| j != pivot).enumerate() {
                s[(i, p)] = k.mul(&coeffs[j], &neg_inv);
            }
        } else {
            let p = if i < pivot { i } else { i - 1 };
            s[(i, p)] = k.one();
        }
    }
    let images: Vec<Polynomial<F>> = (0..m)
        .map(|i| {
            let terms = (0..m - 1).map(|p| (crate::monomial::Monomial::var(m - 1, p), s[(i, p)].clone()));
            Polynomial::from_terms(k, m - 1, terms)
        })
        .collect();
    let mut restricted = BTreeMap::new();
    for &d in degrees {
        if d == 0 || d > exp.degree() {
            return Err(Error::InvalidArgument(format!("no graded piece of degree {d}")));
        }
        restricted.insert(d, exp.q(d).substitute(&images)?);
    }
    Ok(TangentRestriction { pivot, substitution: s, restricted })
}
