//! Sparse multivariate polynomials with exact coefficients.
//!
//! Terms are kept sorted by decreasing degrevlex order with no zero
//! coefficients, so structural equality is polynomial equality.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};


use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::monomial::Monomial;

#[derive(Clone, PartialEq)]
pub struct Polynomial<F: Field> {
    field: F,
    nvars: usize,
    terms: Vec<(Monomial, F::Elem)>,
}

impl<F: Field> Polynomial<F> {
    pub fn zero(field: &F, nvars: usize) -> Self {
        Polynomial { field: field.clone(), nvars, terms: Vec::new() }
    }

    pub fn constant(field: &F, nvars: usize, c: F::Elem) -> Self {
        Self::term(field, c, Monomial::one(nvars))
    }

    pub fn one(field: &F, nvars: usize) -> Self {
        Self::constant(field, nvars, field.one())
    }

    pub fn var(field: &F, nvars: usize, index: usize) -> Self {
        Self::term(field, field.one(), Monomial::var(nvars, index))
    }

    pub fn term(field: &F, c: F::Elem, m: Monomial) -> Self {
        let nvars = m.nvars();
        let terms = if field.is_zero(&c) { Vec::new() } else { vec![(m, c)] };
        Polynomial { field: field.clone(), nvars, terms }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms<I>(field: &F, nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, F::Elem)>,
    {
        let mut acc: HashMap<Monomial, F::Elem> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            match acc.get_mut(&m) {
                Some(v) => *v = field.add(v, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(field, nvars, acc)
    }

    fn from_map(field: &F, nvars: usize, acc: HashMap<Monomial, F::Elem>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Polynomial { field: field.clone(), nvars, terms }
    }

    /// Terms already sorted by strictly decreasing monomial with nonzero coefficients.
    pub(crate) fn from_sorted_terms(field: &F, nvars: usize, terms: Vec<(Monomial, F::Elem)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !field.is_zero(c)));
        Polynomial { field: field.clone(), nvars, terms }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in decreasing degrevlex order.
    pub fn terms(&self) -> &[(Monomial, F::Elem)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        // Degrevlex sorts by degree first, so the leading term has top degree.
        self.terms.first().map_or(-1, |(m, _)| m.degree() as i64)
    }

    pub fn leading_term(&self) -> Option<&(Monomial, F::Elem)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn coefficient(&self, m: &Monomial) -> F::Elem {
        self.terms
            .binary_search_by(|(t, _)| m.cmp(t))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| self.field.zero())
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => self.terms.iter().all(|(t, _)| t.degree() == m.degree()),
        }
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars || self.field != other.field {
            return Err(Error::RingMismatch(format!(
                "{} vars over {} vs {} vars over {}",
                self.nvars,
                self.field.kind(),
                other.nvars,
                other.field.kind()
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(self.product(other))
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let k = &self.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                std::cmp::Ordering::Less
            } else if j == b.len() {
                std::cmp::Ordering::Greater
            } else {
                a[i].0.cmp(&b[j].0)
            };
            match ord {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate { k.neg(&b[j].1) } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { k.sub(&a[i].1, &b[j].1) } else { k.add(&a[i].1, &b[j].1) };
                    if !k.is_zero(&c) {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial { field: self.field.clone(), nvars: self.nvars, terms: out }
    }

    fn product(&self, other: &Self) -> Self {
        let k = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(k, self.nvars);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_term(c, m);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_term(c, m);
        }
        let mut acc: HashMap<Monomial, F::Elem> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = k.mul(ca, cb);
                let m = ma.mul(mb);
                match acc.get_mut(&m) {
                    Some(v) => *v = k.add(v, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Self::from_map(k, self.nvars, acc)
    }

    /// `c * m * self`. Monomial multiplication preserves the term order.
    pub fn mul_term(&self, c: &F::Elem, m: &Monomial) -> Self {
        let k = &self.field;
        if k.is_zero(c) {
            return Self::zero(k, self.nvars);
        }
        let terms = self.terms.iter().map(|(t, a)| (t.mul(m), k.mul(a, c))).collect();
        Polynomial { field: k.clone(), nvars: self.nvars, terms }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        self.mul_term(c, &Monomial::one(self.nvars))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field, self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.product(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.product(&base);
            }
        }
        acc
    }

    /// Scales so that the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = self.field.inv(c).expect("leading coefficient is nonzero");
                self.scale(&inv)
            }
        }
    }

    pub fn evaluate(&self, point: &[F::Elem]) -> Result<F::Elem> {
        if point.len() != self.nvars {
            return Err(Error::LengthMismatch { expected: self.nvars, got: point.len() });
        }
        let k = &self.field;
        let mut acc = k.zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    v = k.mul(&v, &k.pow(x, e as u64));
                }
            }
            acc = k.add(&acc, &v);
        }
        Ok(acc)
    }

    pub fn partial_derivative(&self, var: usize) -> Result<Self> {
        if var >= self.nvars {
            return Err(Error::IndexOutOfRange { index: var, nvars: self.nvars });
        }
        let k = &self.field;
        let terms = self.terms.iter().filter(|(m, _)| m.exponent(var) > 0).filter_map(|(m, c)| {
            let e = m.exponent(var);
            let c = k.mul(c, &k.from_i64(e as i64));
            if k.is_zero(&c) {
                return None;
            }
            let mut exps = m.exponents().to_vec();
            exps[var] -= 1;
            Some((Monomial::new(&exps), c))
        });
        // Differentiation in one variable can reorder terms, so re-sort.
        Ok(Self::from_terms(k, self.nvars, terms))
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars).map(|i| self.partial_derivative(i).expect("index in range")).collect()
    }

    pub fn homogeneous_component(&self, degree: u32) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() == degree).cloned().collect();
        Polynomial { field: self.field.clone(), nvars: self.nvars, terms }
    }

    /// Composition `self(images[0], …, images[n-1])`; all images share one target ring.
    pub fn substitute(&self, images: &[Self]) -> Result<Self> {
        if images.len() != self.nvars {
            return Err(Error::LengthMismatch { expected: self.nvars, got: images.len() });
        }
        let k = &self.field;
        let Some(first) = images.first() else {
            // Constant polynomial in zero variables.
            return Err(Error::InvalidArgument("substitution into a ring without variables".into()));
        };
        let target = first.nvars;
        for img in images {
            first.check_ring(img)?;
        }
        let mut powers: Vec<Vec<Self>> = images.iter().map(|g| vec![Self::one(k, target), g.clone()]).collect();
        let mut acc: HashMap<Monomial, F::Elem> = HashMap::new();
        for (m, c) in &self.terms {
            let mut prod = Self::constant(k, target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().product(&images[i]);
                    powers[i].push(next);
                }
                prod = prod.product(&powers[i][e]);
                if prod.is_zero() {
                    break;
                }
            }
            for (tm, tc) in prod.terms {
                match acc.get_mut(&tm) {
                    Some(v) => *v = k.add(v, &tc),
                    None => {
                        acc.insert(tm, tc);
                    }
                }
            }
        }
        Ok(Self::from_map(k, target, acc))
    }

    /// `self(A z + t)` for an invertible square `A`.
    pub fn linear_substitute(&self, a: &Matrix<F>, t: &[F::Elem]) -> Result<Self> {
        let n = self.nvars;
        if a.rows() != n || a.cols() != n {
            return Err(Error::LengthMismatch { expected: n, got: a.rows().max(a.cols()) });
        }
        if t.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: t.len() });
        }
        if a.rank() < n {
            return Err(Error::SingularMatrix);
        }
        self.substitute(&affine_images(a, t))
    }

    /// Drops variables by setting them to zero and renumbering the rest.
    /// `keep` lists the surviving variable indices in their new order.
    pub fn restrict_to_coordinates(&self, keep: &[usize]) -> Self {
        let k = &self.field;
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponents();
            let kept: u32 = keep.iter().map(|&i| e[i] as u32).sum();
            if kept != m.degree() {
                return None;
            }
            let exps: Vec<u16> = keep.iter().map(|&i| e[i]).collect();
            Some((Monomial::new(&exps), c.clone()))
        });
        Self::from_terms(k, keep.len(), terms)
    }

    /// Same polynomial with the coefficient field mapped elementwise.
    pub fn map_coefficients<G: Field>(&self, target: &G, f: impl Fn(&F::Elem) -> Option<G::Elem>) -> Result<Polynomial<G>> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let c = f(c).ok_or_else(|| Error::InvalidArgument("coefficient has no image".into()))?;
            terms.push((m.clone(), c));
        }
        Ok(Polynomial::from_terms(target, self.nvars, terms))
    }

    pub fn parse(field: &F, nvars: usize, text: &str) -> Result<Self> {
        crate::parse::parse_polynomial(field, nvars, text)
    }

    pub fn from_integer_terms(field: &F, nvars: usize, terms: &[(i64, &[u16])]) -> Self {
        Self::from_terms(
            field,
            nvars,
            terms.iter().map(|(c, e)| (Monomial::new(e), field.from_i64(*c))),
        )
    }
}

/// Images `x_i = Σ_j A_ij z_j + t_i` as polynomials in the `z` variables.
pub fn affine_images<F: Field>(a: &Matrix<F>, t: &[F::Elem]) -> Vec<Polynomial<F>> {
    let k = a.field();
    let n = a.cols();
    (0..a.rows())
        .map(|i| {
            let mut terms: Vec<(Monomial, F::Elem)> =
                (0..n).map(|j| (Monomial::var(n, j), a[(i, j)].clone())).collect();
            terms.push((Monomial::one(n), t[i].clone()));
            Polynomial::from_terms(k, n, terms)
        })
        .collect()
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let k = &self.field;
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = k.is_negative(c);
            let abs = if neg { k.neg(c) } else { c.clone() };
            match (idx == 0, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            let mut first = true;
            if m.is_one() || !k.is_one(&abs) {
                k.fmt_elem(&abs, f)?;
                first = false;
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                if e == 1 {
                    write!(f, "x{i}")?;
                } else {
                    write!(f, "x{i}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{} vars over {}]({})", self.nvars, self.field.kind(), self)
    }
}

impl<F: Field> Add for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: Self) -> Polynomial<F> {
        self.checked_add(rhs).expect("ring mismatch in +")
    }
}

impl<F: Field> Sub for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: Self) -> Polynomial<F> {
        self.checked_sub(rhs).expect("ring mismatch in -")
    }
}

impl<F: Field> Mul for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: Self) -> Polynomial<F> {
        self.checked_mul(rhs).expect("ring mismatch in *")
    }
}

impl<F: Field> Neg for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        self.scale(&self.field.neg(&self.field.one()))
    }
}
