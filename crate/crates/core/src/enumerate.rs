//! Exhaustive work over prime fields: projective point enumeration, rational
//! and singular points of a hypersurface, and the plane / singular-line
//! searches for quintic fourfolds. Every verdict here is finite-field
//! evidence, never a certificate over the rationals.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::expansion::ProjectivePoint;
use crate::field::{Field, PrimeField};
use crate::linalg::Matrix;
use crate::poly::Polynomial;

/// Default cap on the number of projective points visited.
pub const DEFAULT_ENUM_BUDGET: u64 = 50_000_000;

/// `#P^{n-1}(F_p) = (p^n - 1) / (p - 1)`, saturating.
pub fn projective_count(p: u64, n: usize) -> u64 {
    let mut total: u64 = 0;
    let mut power: u64 = 1;
    for _ in 0..n {
        total = total.saturating_add(power);
        power = power.saturating_mul(p);
    }
    total
}

/// Canonical representatives of `P^{n-1}(F_p)` (first nonzero coordinate 1),
/// grouped by the position of that coordinate and lexicographic after it.
pub struct ProjectivePoints {
    p: u64,
    current: Vec<u64>,
    lead: usize,
    done: bool,
}

impl ProjectivePoints {
    pub fn new(p: u64, n: usize) -> Self {
        let mut current = vec![0; n];
        if n > 0 {
            current[0] = 1;
        }
        ProjectivePoints { p, current, lead: 0, done: n == 0 }
    }
}

impl Iterator for ProjectivePoints {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let n = self.current.len();
        // Odometer on the coordinates after the leading one.
        let mut i = n;
        loop {
            if i == self.lead + 1 {
                self.current[self.lead] = 0;
                self.lead += 1;
                if self.lead == n {
                    self.done = true;
                } else {
                    for c in &mut self.current[self.lead..] {
                        *c = 0;
                    }
                    self.current[self.lead] = 1;
                }
                break;
            }
            i -= 1;
            self.current[i] += 1;
            if self.current[i] < self.p {
                break;
            }
            self.current[i] = 0;
        }
        Some(out)
    }
}

/// All points of `P^{n-1}` over a finite field, within `budget`.
pub fn projective_points<F: Field>(field: &F, n: usize, budget: u64) -> Result<Vec<Vec<F::Elem>>> {
    let Some(elements) = field.elements() else {
        return Err(Error::InvalidArgument("point enumeration needs a finite field".into()));
    };
    let p = elements.len() as u64;
    if projective_count(p, n) > budget {
        return Err(Error::BudgetExceeded { what: "point enumeration", budget });
    }
    Ok(ProjectivePoints::new(p, n).map(|c| c.iter().map(|&i| elements[i as usize].clone()).collect()).collect())
}

/// Scale so that the first nonzero coordinate is 1; `None` for the zero vector.
pub fn normalize(p: u64, v: &mut [u64]) -> Option<()> {
    let k = PrimeField::new(p).ok()?;
    let lead = v.iter().position(|&c| c != 0)?;
    let inv = k.inv(&v[lead]).expect("nonzero");
    for c in v.iter_mut() {
        *c = k.mul(c, &inv);
    }
    Some(())
}

/// Polynomials over `F_p` compiled for repeated evaluation.
#[derive(Clone, Debug)]
pub struct FpEvaluator {
    p: u64,
    nvars: usize,
    width: usize,
    /// Per polynomial: `(coefficient, range into factors)` per term.
    terms: Vec<Vec<(u64, u32, u32)>>,
    /// Indices into the power table.
    factors: Vec<u32>,
}

impl FpEvaluator {
    pub fn new(polys: &[Polynomial<PrimeField>]) -> Self {
        let p = polys[0].field().modulus();
        let nvars = polys[0].nvars();
        let max_exp = polys
            .iter()
            .flat_map(|f| f.terms().iter().flat_map(|(m, _)| m.exponents().iter().copied()))
            .max()
            .unwrap_or(0) as usize;
        let width = max_exp + 1;
        let mut factors = Vec::new();
        let terms = polys
            .iter()
            .map(|f| {
                f.terms()
                    .iter()
                    .map(|(m, c)| {
                        let start = factors.len() as u32;
                        for (i, &e) in m.exponents().iter().enumerate() {
                            if e != 0 {
                                factors.push((i * width + e as usize) as u32);
                            }
                        }
                        (*c, start, factors.len() as u32)
                    })
                    .collect()
            })
            .collect();
        FpEvaluator { p, nvars, width, terms, factors }
    }

    fn powers(&self, point: &[u64], table: &mut Vec<u64>) {
        let w = self.width;
        table.clear();
        table.resize(self.nvars * w, 1);
        for (i, &x) in point.iter().enumerate() {
            for e in 1..w {
                table[i * w + e] = table[i * w + e - 1] * x % self.p;
            }
        }
    }

    fn eval_one(&self, idx: usize, table: &[u64]) -> u64 {
        let mut acc = 0u64;
        for &(c, start, end) in &self.terms[idx] {
            let mut t = c;
            for &f in &self.factors[start as usize..end as usize] {
                t = t * table[f as usize] % self.p;
            }
            acc += t;
            if acc >= self.p {
                acc -= self.p;
            }
        }
        acc
    }

    pub fn eval(&self, idx: usize, point: &[u64]) -> u64 {
        let mut table = Vec::new();
        self.powers(point, &mut table);
        self.eval_one(idx, &table)
    }

    /// Values of all compiled polynomials at the point.
    pub fn eval_all(&self, point: &[u64]) -> Vec<u64> {
        let mut table = Vec::new();
        self.powers(point, &mut table);
        (0..self.terms.len()).map(|i| self.eval_one(i, &table)).collect()
    }

    /// Whether every compiled polynomial vanishes at the point, stopping early.
    pub fn all_vanish(&self, point: &[u64]) -> bool {
        let mut table = Vec::new();
        self.powers(point, &mut table);
        (0..self.terms.len()).all(|i| self.eval_one(i, &table) == 0)
    }

    /// Like [`Self::all_vanish`], reusing a caller-owned power table.
    pub fn all_vanish_with(&self, point: &[u64], table: &mut Vec<u64>) -> bool {
        self.powers(point, table);
        (0..self.terms.len()).all(|i| self.eval_one(i, table) == 0)
    }
}

fn check_points_budget(p: u64, n: usize, budget: u64) -> Result<()> {
    if projective_count(p, n) > budget {
        return Err(Error::BudgetExceeded { what: "point enumeration", budget });
    }
    Ok(())
}

fn to_points(k: &PrimeField, raw: Vec<Vec<u64>>) -> Vec<ProjectivePoint<PrimeField>> {
    raw.into_iter().map(|c| ProjectivePoint::new(k, c).expect("nonzero")).collect()
}

/// Rational points of `{f = 0}` in canonical order.
pub fn enumerate_points(f: &Polynomial<PrimeField>, budget: u64) -> Result<Vec<ProjectivePoint<PrimeField>>> {
    Ok(to_points(f.field(), enumerate_raw(std::slice::from_ref(f), budget)?))
}

/// Rational points where `f` and all its partial derivatives vanish.
pub fn singular_points(f: &Polynomial<PrimeField>, budget: u64) -> Result<Vec<ProjectivePoint<PrimeField>>> {
    Ok(to_points(f.field(), singular_raw(f, budget)?))
}

pub(crate) fn singular_raw(f: &Polynomial<PrimeField>, budget: u64) -> Result<Vec<Vec<u64>>> {
    let mut gens = f.gradient();
    gens.push(f.clone());
    enumerate_raw(&gens, budget)
}

/// Common rational zeros of homogeneous forms in the same ring.
pub(crate) fn enumerate_raw(gens: &[Polynomial<PrimeField>], budget: u64) -> Result<Vec<Vec<u64>>> {
    let f = &gens[0];
    let p = f.field().modulus();
    let n = f.nvars();
    check_points_budget(p, n, budget)?;
    let ev = FpEvaluator::new(gens);
    let mut table = Vec::new();
    Ok(ProjectivePoints::new(p, n).filter(|x| ev.all_vanish_with(x, &mut table)).collect())
}

fn require_quintic(f: &Polynomial<PrimeField>) -> Result<()> {
    if f.nvars() != 6 || f.degree() != 5 || !f.is_homogeneous() {
        return Err(Error::InvalidArgument("plane and line checks need a quintic form in 6 variables (M = 5)".into()));
    }
    Ok(())
}

/// Reduced row echelon form of a spanning set, as a hashable key.
fn span_key(k: &PrimeField, rows: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let m = Matrix::from_rows(k, rows.to_vec()).expect("rectangular");
    let (r, pivots) = m.rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// `f` restricted to the span of `basis`, as a form in `basis.len()` variables.
fn restrict_to_span(f: &Polynomial<PrimeField>, basis: &[Vec<u64>]) -> Polynomial<PrimeField> {
    let k = f.field();
    let d = basis.len();
    let images: Vec<Polynomial<PrimeField>> = (0..f.nvars())
        .map(|i| {
            let terms = (0..d).map(|j| (crate::monomial::Monomial::var(d, j), basis[j][i]));
            Polynomial::from_terms(k, d, terms)
        })
        .collect();
    f.substitute(&images).expect("matching lengths")
}

/// Dense membership table for a set of projective points.
struct PointSet {
    p: u64,
    inv: Vec<u64>,
    bits: Vec<bool>,
}

impl PointSet {
    fn new(p: u64, n: usize, points: &[Vec<u64>], budget: u64) -> Result<Self> {
        let size = p.checked_pow(n as u32).filter(|&s| s <= budget.min(1 << 28));
        let Some(size) = size else {
            return Err(Error::BudgetExceeded { what: "point table", budget });
        };
        let k = PrimeField::new(p)?;
        let inv = (0..p).map(|x| if x == 0 { 0 } else { k.inv(&x).expect("nonzero") }).collect();
        let mut set = PointSet { p, inv, bits: vec![false; size as usize] };
        for x in points {
            let code = set.encode(x.iter().copied()).expect("nonzero");
            set.bits[code] = true;
        }
        Ok(set)
    }

    /// Base-`p` code of the normalized vector; `None` for zero.
    fn encode(&self, v: impl Iterator<Item = u64> + Clone) -> Option<usize> {
        let lead = v.clone().find(|&c| c != 0)?;
        let scale = self.inv[lead as usize];
        let mut code = 0u64;
        for c in v {
            code = code * self.p + c * scale % self.p;
        }
        Some(code as usize)
    }

    /// Whether `s a + t b + u c` is zero or lies in the set.
    fn contains_combo(&self, a: &[u64], s: u64, b: &[u64], t: u64, c: &[u64], u: u64) -> bool {
        let p = self.p;
        let v = (0..a.len()).map(move |i| (s * a[i] + t * b[i] + u * c[i]) % p);
        self.encode(v).is_none_or(|code| self.bits[code])
    }
}

/// Lines defined over `F_p` that lie on `{f = 0}`, as reduced 2-row bases.
pub fn lines_on(f: &Polynomial<PrimeField>, budget: u64) -> Result<Vec<[Vec<u64>; 2]>> {
    let k = *f.field();
    let p = k.modulus();
    let points = enumerate_raw(std::slice::from_ref(f), budget)?;
    let pairs = (points.len() as u64).saturating_mul(points.len() as u64) / 2;
    if pairs > budget {
        return Err(Error::BudgetExceeded { what: "line search", budget });
    }
    let on = PointSet::new(p, f.nvars(), &points, budget)?;
    let mut seen = BTreeSet::new();
    let mut lines = Vec::new();
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            let all_on = (1..p).all(|t| on.contains_combo(a, 1, b, t, b, 0));
            if !all_on {
                continue;
            }
            let key = span_key(&k, &[a.clone(), b.clone()]);
            if seen.insert(key.clone()) && restrict_to_span(f, &key).is_zero() {
                lines.push([key[0].clone(), key[1].clone()]);
            }
        }
    }
    Ok(lines)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneCheck {
    /// Planes over `F_p` on the hypersurface, as reduced 3-row bases.
    pub planes: Vec<[Vec<u64>; 3]>,
    pub lines_examined: usize,
    /// True iff no plane was found.
    pub verdict: bool,
}

/// Largest characteristic accepted by [`check_no_planes_m5`].
pub const PLANE_MAX_P: u64 = 7;
/// Largest characteristic accepted by [`check_no_singular_line_in_3space_m5`].
pub const LINE_MAX_P: u64 = 5;

/// Every plane on `F` contains an `F_p`-line through two of its points, so
/// planes are found as spans of a line on `F` and one more point of `F`.
pub fn check_no_planes_m5(f: &Polynomial<PrimeField>, budget: u64) -> Result<PlaneCheck> {
    require_quintic(f)?;
    let k = *f.field();
    let p = k.modulus();
    if p > PLANE_MAX_P {
        return Err(Error::BudgetExceeded { what: "plane enumeration (p <= 7)", budget: PLANE_MAX_P });
    }
    let points = enumerate_raw(std::slice::from_ref(f), budget)?;
    let on = PointSet::new(p, f.nvars(), &points, budget)?;
    let lines = lines_on(f, budget)?;
    let mut seen = BTreeSet::new();
    let mut planes = Vec::new();
    for [a, b] in &lines {
        let line_key = vec![a.clone(), b.clone()];
        for c in &points {
            let all_on = (0..p).all(|s| (0..p).all(|t| on.contains_combo(a, s, b, t, c, 1)));
            if !all_on {
                continue;
            }
            if span_key(&k, &[a.clone(), b.clone(), c.clone()]).len() < 3 {
                continue;
            }
            let key = span_key(&k, &[line_key[0].clone(), line_key[1].clone(), c.clone()]);
            if seen.insert(key.clone()) && restrict_to_span(f, &key).is_zero() {
                planes.push([key[0].clone(), key[1].clone(), key[2].clone()]);
            }
        }
    }
    let verdict = planes.is_empty();
    Ok(PlaneCheck { planes, lines_examined: lines.len(), verdict })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularLineWitness {
    pub line: [Vec<u64>; 2],
    /// Basis of the subspace of directions annihilated by `∇f` along the line;
    /// any 4-dimensional subspace of it containing the line is a bad 3-space.
    pub tangent_kernel: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularLineCheck {
    pub witnesses: Vec<SingularLineWitness>,
    pub lines_examined: usize,
    /// True iff no 3-space section is singular along a line.
    pub verdict: bool,
}

/// A line `L ⊂ F` lies in the singular locus of `F ∩ Π` for a 3-space
/// `Π ⊃ L` iff `Π ⊂ W = {v : ∇f(x)·v = 0 for all x ∈ L}`, so such `Π`
/// exists iff `dim W >= 4`.
pub fn check_no_singular_line_in_3space_m5(f: &Polynomial<PrimeField>, budget: u64) -> Result<SingularLineCheck> {
    require_quintic(f)?;
    let k = *f.field();
    if k.modulus() > LINE_MAX_P {
        return Err(Error::BudgetExceeded { what: "singular-line enumeration (p <= 5)", budget: LINE_MAX_P });
    }
    let lines = lines_on(f, budget)?;
    let grad = f.gradient();
    let mut witnesses = Vec::new();
    for line in &lines {
        let restricted: Vec<Polynomial<PrimeField>> = grad.iter().map(|g| restrict_to_span(g, line)).collect();
        // Rows: monomials s^(4-e) t^e; columns: the partial derivatives.
        let deg = 4u16;
        let rows: Vec<Vec<u64>> = (0..=deg)
            .map(|e| {
                let m = crate::monomial::Monomial::new(&[deg - e, e]);
                restricted.iter().map(|r| r.coefficient(&m)).collect()
            })
            .collect();
        let m = Matrix::from_rows(&k, rows).expect("rectangular");
        let kernel = m.kernel();
        if kernel.len() >= 4 {
            witnesses.push(SingularLineWitness { line: line.clone(), tangent_kernel: kernel });
        }
    }
    let verdict = witnesses.is_empty();
    Ok(SingularLineCheck { witnesses, lines_examined: lines.len(), verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn fp(p: u64, text: &str) -> Polynomial<PrimeField> {
        Polynomial::parse(&PrimeField::new(p).unwrap(), 6, text).unwrap()
    }

    #[test]
    fn point_iterator_counts() {
        for (p, n) in [(3, 1), (3, 3), (5, 4), (7, 2)] {
            let pts: Vec<_> = ProjectivePoints::new(p, n).collect();
            assert_eq!(pts.len() as u64, projective_count(p, n));
            let distinct: HashSet<_> = pts.iter().cloned().collect();
            assert_eq!(distinct.len(), pts.len());
            for v in &pts {
                assert_eq!(v.iter().find(|&&c| c != 0), Some(&1));
            }
        }
    }

    #[test]
    fn hyperplane_count() {
        let pts = enumerate_points(&fp(3, "x0"), DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(pts.len(), 121);
        assert!(matches!(enumerate_points(&fp(3, "x0"), 100), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn evaluator_matches_polynomial() {
        let f = fp(7, "3*x0^5 + x1*x2^4 - 2*x3*x4*x5^3 + x5^5");
        let ev = FpEvaluator::new(std::slice::from_ref(&f));
        for x in ProjectivePoints::new(7, 6).step_by(97) {
            assert_eq!(ev.eval(0, &x), f.evaluate(&x).unwrap());
        }
    }

    #[test]
    fn fermat_has_no_singular_points() {
        let f = fp(11, "x0^5 + x1^5 + x2^5 + x3^5 + x4^5 + x5^5");
        let pts = singular_points(&f, DEFAULT_ENUM_BUDGET).unwrap();
        assert!(pts.is_empty());
    }

    #[test]
    fn degenerate_quintic_contains_planes() {
        let f = fp(3, "x0*x1*x2*x3*x4");
        let c = check_no_planes_m5(&f, DEFAULT_ENUM_BUDGET).unwrap();
        assert!(!c.verdict);
        let target = vec![vec![0, 0, 0, 1, 0, 0], vec![0, 0, 0, 0, 1, 0], vec![0, 0, 0, 0, 0, 1]];
        assert!(c.planes.iter().any(|pl| pl.to_vec() == target));
    }

    /// All 3-dimensional subspaces of `F_p^6` in reduced echelon form.
    fn grassmannian(p: u64, k: usize, n: usize) -> Vec<Vec<Vec<u64>>> {
        let mut out = Vec::new();
        let pivots_sets: Vec<Vec<usize>> = (0..1u32 << n)
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
            .collect();
        for pivots in pivots_sets {
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|r| ((pivots[r] + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
                .collect();
            let total = p.pow(free.len() as u32);
            for mut code in 0..total {
                let mut rows = vec![vec![0u64; n]; k];
                for (r, &c) in pivots.iter().enumerate() {
                    rows[r][c] = 1;
                }
                for &(r, c) in &free {
                    rows[r][c] = code % p;
                    code /= p;
                }
                out.push(rows);
            }
        }
        out
    }

    fn brute_force_planes(f: &Polynomial<PrimeField>) -> BTreeSet<Vec<Vec<u64>>> {
        grassmannian(f.field().modulus(), 3, 6).into_iter().filter(|b| restrict_to_span(f, b).is_zero()).collect()
    }

    #[test]
    fn plane_search_matches_grassmannian_scan() {
        assert_eq!(grassmannian(3, 3, 6).len(), 33880);
        for text in [
            "x0^5 + x1^5 + x2^5 + x3^5 + x4^5 + x5^5",
            "x0*x1*x2*x3*x4",
            "x0^4*x1 + x2^4*x3 + x4^4*x5 + x1^2*x3^2*x5",
            "x0*x1^3*x2 + x2^5 + x3^2*x4^3 + 2*x5^5 + x0^5",
        ] {
            let f = fp(3, text);
            let fast: BTreeSet<Vec<Vec<u64>>> =
                check_no_planes_m5(&f, DEFAULT_ENUM_BUDGET).unwrap().planes.into_iter().map(|p| p.to_vec()).collect();
            assert_eq!(fast, brute_force_planes(&f), "{text}");
        }
    }

    #[test]
    fn fermat_planes_over_f3() {
        // x^5 = -1 has the unique solution -1 over F_3, so the 15 pairings give planes.
        let f = fp(3, "x0^5 + x1^5 + x2^5 + x3^5 + x4^5 + x5^5");
        let c = check_no_planes_m5(&f, DEFAULT_ENUM_BUDGET).unwrap();
        assert!(!c.verdict);
        assert!(c.planes.len() >= 15);
    }

    #[test]
    fn plane_check_limits() {
        let f = fp(11, "x0^5 + x1^5 + x2^5 + x3^5 + x4^5 + x5^5");
        assert!(matches!(check_no_planes_m5(&f, DEFAULT_ENUM_BUDGET), Err(Error::BudgetExceeded { .. })));
        let g = Polynomial::parse(&PrimeField::new(3).unwrap(), 5, "x0^4 + x1^4").unwrap();
        assert!(matches!(check_no_planes_m5(&g, DEFAULT_ENUM_BUDGET), Err(Error::InvalidArgument(_))));
        assert!(matches!(check_no_singular_line_in_3space_m5(&g, DEFAULT_ENUM_BUDGET), Err(Error::InvalidArgument(_))));
    }

    fn engineered_singular_line() -> Polynomial<PrimeField> {
        // Singular along {x2 = x3 = 0} inside the 3-space {x4 = x5 = 0}.
        fp(
            3,
            "x2^2*x0^3 + x2^2*x1^2*x3 + x2*x3*x0*x1^2 + x3^2*x1^3 + x3^2*x0*x2*x1 \
             + x4*x0^4 + x4*x1^3*x2 + x5*x1^4 + x5*x0^2*x3^2 + x4^5 + x5^5",
        )
    }

    /// Every 3-space and every line in it, checked symbolically.
    fn brute_force_singular_lines(f: &Polynomial<PrimeField>) -> bool {
        let p = f.field().modulus();
        for pi in grassmannian(p, 4, 6) {
            let g = restrict_to_span(f, &pi);
            let mut gens = g.gradient();
            gens.push(g.clone());
            let ev = FpEvaluator::new(&gens);
            for line in grassmannian(p, 2, 4) {
                let pts_ok = (0..=p).all(|t| {
                    let x: Vec<u64> = if t == p {
                        line[1].clone()
                    } else {
                        (0..4).map(|i| (line[0][i] + t * line[1][i]) % p).collect()
                    };
                    ev.all_vanish(&x)
                });
                if pts_ok && gens.iter().all(|h| restrict_to_span(h, &line).is_zero()) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn singular_line_engineered_and_oracle() {
        let f = engineered_singular_line();
        let c = check_no_singular_line_in_3space_m5(&f, DEFAULT_ENUM_BUDGET).unwrap();
        assert!(!c.verdict);
        let target = [vec![1, 0, 0, 0, 0, 0], vec![0, 1, 0, 0, 0, 0]];
        assert!(c.witnesses.iter().any(|w| w.line == target));
        assert!(!brute_force_singular_lines(&f));
    }

    #[test]
    fn singular_line_generic_sample() {
        let f = fp(3, "x0^5 + x1^5 + 2*x2^5 + x3^5 + x4^5 + x5^5 + x0*x1*x2*x3*x4 + x1^2*x3^2*x5 + x0^3*x4*x5");
        let c = check_no_singular_line_in_3space_m5(&f, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(c.verdict, brute_force_singular_lines(&f));
    }
}
