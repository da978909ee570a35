//! Buchberger's algorithm in degrevlex and dimension of the zero set.
//!
//! The dimension of `V(I)` over the algebraic closure is read off the
//! leading-term ideal: it is the size of the largest set of variables that
//! contains the support of no leading monomial.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::Monomial;
use crate::poly::Polynomial;

/// Limit on the number of term cancellations performed by one computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub steps: u64,
}

impl Budget {
    pub const fn new(steps: u64) -> Self {
        Budget { steps }
    }

    pub const UNLIMITED: Budget = Budget { steps: u64::MAX };
}

impl Default for Budget {
    fn default() -> Self {
        Budget { steps: 50_000_000 }
    }
}

struct Meter {
    used: u64,
    budget: Budget,
}

impl Meter {
    fn charge(&mut self, n: u64) -> Result<()> {
        self.used = self.used.saturating_add(n);
        if self.used > self.budget.steps {
            return Err(Error::BudgetExceeded { what: "Groebner step", budget: self.budget.steps });
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Number of monomials of degree `d` in `k` variables, saturating.
fn count(d: u32, k: usize) -> u64 {
    if k == 0 {
        return u64::from(d == 0);
    }
    // binom(d + k - 1, k - 1)
    let mut c: u128 = 1;
    for i in 1..k as u128 {
        c = c * (d as u128 + i) / i;
        if c > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    c as u64
}

/// Position of a monomial of degree `d` among all monomials of that degree,
/// listed in decreasing degrevlex order.
struct DegreeIndex {
    nvars: usize,
    degree: u32,
    /// `table[k][e] = count(e, k)`.
    table: Vec<Vec<u64>>,
}

impl DegreeIndex {
    const MAX_SIZE: u64 = 1 << 22;

    fn new(nvars: usize, degree: u32) -> Option<Self> {
        if nvars == 0 || count(degree, nvars) > Self::MAX_SIZE {
            return None;
        }
        let table = (0..=nvars).map(|k| (0..=degree).map(|e| count(e, k)).collect()).collect();
        Some(DegreeIndex { nvars, degree, table })
    }

    fn size(&self) -> usize {
        self.table[self.nvars][self.degree as usize] as usize
    }

    fn rank(&self, exps: impl DoubleEndedIterator<Item = u16>) -> usize {
        let mut d = self.degree as usize;
        let mut k = self.nvars;
        let mut idx = 0;
        for e in exps.rev() {
            if k == 1 {
                break;
            }
            let e = e as usize;
            idx += self.table[k][d] - self.table[k][d - e];
            d -= e;
            k -= 1;
        }
        idx as usize
    }

    fn unrank(&self, mut idx: u64) -> Monomial {
        let mut exps = vec![0u16; self.nvars];
        let mut d = self.degree as usize;
        for k in (1..=self.nvars).rev() {
            if k == 1 {
                exps[0] = d as u16;
                break;
            }
            let mut e = 0;
            while e < d && idx >= self.table[k][d] - self.table[k][d - e - 1] {
                e += 1;
            }
            idx -= self.table[k][d] - self.table[k][d - e];
            exps[k - 1] = e as u16;
            d -= e;
        }
        Monomial::new(&exps)
    }
}

struct Divisors<'a, F: Field> {
    items: Vec<(u64, &'a Monomial, &'a Polynomial<F>)>,
}

impl<'a, F: Field> Divisors<'a, F> {
    fn new(basis: &'a [Polynomial<F>], active: &[bool]) -> Self {
        let items = basis
            .iter()
            .zip(active)
            .filter(|(_, &a)| a)
            .filter_map(|(g, _)| g.leading_monomial().map(|lm| (lm.support_mask(), lm, g)))
            .collect();
        Divisors { items }
    }

    fn find(&self, m: &Monomial) -> Option<(&'a Monomial, &'a Polynomial<F>)> {
        let mask = m.support_mask();
        self.items.iter().find(|(lm_mask, lm, _)| lm_mask & !mask == 0 && lm.divides(m)).map(|(_, lm, g)| (*lm, *g))
    }
}

/// Reduction of `p` modulo the monic polynomials `basis[k]` with `active[k]`;
/// with `full` unset only the leading term is reduced.
fn reduce<F: Field>(
    p: &Polynomial<F>,
    basis: &[Polynomial<F>],
    active: &[bool],
    full: bool,
    meter: &mut Meter,
) -> Result<Polynomial<F>> {
    let divisors = Divisors::new(basis, active);
    if !p.is_zero() && p.is_homogeneous() {
        if let Some(index) = DegreeIndex::new(p.nvars(), p.degree() as u32) {
            return reduce_dense(p, &divisors, &index, full, meter);
        }
    }
    let k = p.field();
    let mut work: BTreeMap<Monomial, F::Elem> = p.terms().iter().cloned().collect();
    let mut rem: Vec<(Monomial, F::Elem)> = Vec::new();
    while let Some((m, c)) = work.pop_last() {
        match divisors.find(&m) {
            None => {
                rem.push((m, c));
                if !full {
                    rem.extend(std::mem::take(&mut work).into_iter().rev());
                }
            }
            Some((lm, g)) => {
                let q = lm.div_into(&m).expect("divides");
                meter.charge(g.num_terms() as u64)?;
                for (t, a) in &g.terms()[1..] {
                    let prod = k.mul(&c, a);
                    let mono = t.mul(&q);
                    match work.get_mut(&mono) {
                        Some(v) => {
                            *v = k.sub(v, &prod);
                            if k.is_zero(v) {
                                work.remove(&mono);
                            }
                        }
                        None => {
                            work.insert(mono, k.neg(&prod));
                        }
                    }
                }
            }
        }
    }
    Ok(Polynomial::from_sorted_terms(k, p.nvars(), rem))
}

/// [`reduce`] for a homogeneous `p`, on a dense coefficient vector.
fn reduce_dense<F: Field>(
    p: &Polynomial<F>,
    divisors: &Divisors<'_, F>,
    index: &DegreeIndex,
    full: bool,
    meter: &mut Meter,
) -> Result<Polynomial<F>> {
    let k = p.field();
    let mut dense = vec![k.zero(); index.size()];
    let mut first = usize::MAX;
    for (m, c) in p.terms() {
        let i = index.rank(m.exponents().iter().copied());
        first = first.min(i);
        dense[i] = c.clone();
    }
    let mut rem = Vec::new();
    let mut reducing = true;
    for i in first..dense.len() {
        if k.is_zero(&dense[i]) {
            continue;
        }
        let c = std::mem::replace(&mut dense[i], k.zero());
        let m = index.unrank(i as u64);
        let divisor = if reducing { divisors.find(&m) } else { None };
        match divisor {
            None => {
                rem.push((m, c));
                reducing = full;
            }
            Some((lm, g)) => {
                let q = lm.div_into(&m).expect("divides");
                meter.charge(g.num_terms() as u64)?;
                for (t, a) in &g.terms()[1..] {
                    let j = index.rank(t.exponents().iter().zip(q.exponents()).map(|(x, y)| x + y));
                    dense[j] = k.sub(&dense[j], &k.mul(&c, a));
                }
            }
        }
    }
    Ok(Polynomial::from_sorted_terms(k, p.nvars(), rem))
}

fn s_polynomial<F: Field>(f: &Polynomial<F>, g: &Polynomial<F>, lcm: &Monomial) -> Polynomial<F> {
    // Both inputs are monic.
    let k = f.field();
    let one = k.one();
    let a = f.leading_monomial().unwrap().div_into(lcm).unwrap();
    let b = g.leading_monomial().unwrap().div_into(lcm).unwrap();
    &f.mul_term(&one, &a) - &g.mul_term(&one, &b)
}

/// Gebauer–Möller installation of the new basis element `polys[h]`.
fn update<F: Field>(polys: &[Polynomial<F>], active: &mut [bool], pairs: &mut Vec<Pair>, h: usize) {
    let lm_h = polys[h].leading_monomial().unwrap().clone();
    let mut candidates: Vec<Pair> = (0..h)
        .filter(|&g| active[g])
        .map(|g| Pair { i: g, j: h, lcm: polys[g].leading_monomial().unwrap().lcm(&lm_h) })
        .collect();

    // Chain criterion among the new pairs (h, g).
    let mut kept: Vec<Pair> = Vec::new();
    while let Some(p) = candidates.pop() {
        let lm_g = polys[p.i].leading_monomial().unwrap();
        let coprime = lm_g.is_coprime(&lm_h);
        let dominated = candidates.iter().chain(kept.iter()).any(|q| q.lcm.divides(&p.lcm));
        if coprime || !dominated {
            kept.push(p);
        }
    }
    // Product criterion.
    kept.retain(|p| !polys[p.i].leading_monomial().unwrap().is_coprime(&lm_h));

    // Old pairs made redundant by h.
    pairs.retain(|p| {
        !(lm_h.divides(&p.lcm)
            && polys[p.i].leading_monomial().unwrap().lcm(&lm_h) != p.lcm
            && polys[p.j].leading_monomial().unwrap().lcm(&lm_h) != p.lcm)
    });
    pairs.extend(kept);

    for g in 0..h {
        if active[g] && lm_h.divides(polys[g].leading_monomial().unwrap()) {
            active[g] = false;
        }
    }
    active[h] = true;
}

/// Reduced Gröbner basis in degrevlex, monic, sorted by increasing leading monomial.
pub fn groebner_basis<F: Field>(gens: &[Polynomial<F>], budget: Budget) -> Result<Vec<Polynomial<F>>> {
    let Some(first) = gens.iter().find(|g| !g.is_zero()) else {
        return Ok(Vec::new());
    };
    for g in gens {
        if g.nvars() != first.nvars() || g.field() != first.field() {
            return Err(Error::RingMismatch("generators of one ideal".into()));
        }
    }
    let mut meter = Meter { used: 0, budget };
    let mut polys: Vec<Polynomial<F>> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    for g in gens.iter().filter(|g| !g.is_zero()) {
        let r = reduce(g, &polys, &active, true, &mut meter)?;
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(vec![Polynomial::one(r.field(), r.nvars())]);
        }
        polys.push(r.monic());
        active.push(false);
        let h = polys.len() - 1;
        update(&polys, &mut active, &mut pairs, h);
    }

    while !pairs.is_empty() {
        let (idx, _) = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.lcm.degree().cmp(&b.lcm.degree()).then(a.i.cmp(&b.i)).then(a.j.cmp(&b.j)))
            .expect("nonempty");
        let pair = pairs.swap_remove(idx);
        meter.charge(1)?;
        let s = s_polynomial(&polys[pair.i], &polys[pair.j], &pair.lcm);
        let r = reduce(&s, &polys, &active, true, &mut meter)?;
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(vec![Polynomial::one(r.field(), r.nvars())]);
        }
        polys.push(r.monic());
        active.push(false);
        let h = polys.len() - 1;
        update(&polys, &mut active, &mut pairs, h);
    }

    // Minimal basis: drop elements whose leading monomial is divisible by another's.
    let mut minimal: Vec<Polynomial<F>> = Vec::new();
    let mut leaders: Vec<usize> = (0..polys.len()).filter(|&i| active[i]).collect();
    leaders.sort_by(|&a, &b| polys[a].leading_monomial().cmp(&polys[b].leading_monomial()));
    for i in leaders {
        let lm = polys[i].leading_monomial().unwrap();
        if !minimal.iter().any(|g| g.leading_monomial().unwrap().divides(lm)) {
            minimal.push(polys[i].clone());
        }
    }
    // Interreduce tails.
    let all_active = vec![true; minimal.len()];
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let mut others = all_active.clone();
        others[i] = false;
        let (lm, lc) = minimal[i].leading_term().unwrap().clone();
        let tail = Polynomial::from_sorted_terms(minimal[i].field(), minimal[i].nvars(), minimal[i].terms()[1..].to_vec());
        let tail = reduce(&tail, &minimal, &others, true, &mut meter)?;
        let head = Polynomial::term(minimal[i].field(), lc, lm);
        reduced.push(&head + &tail);
    }
    Ok(reduced)
}

/// Remainder of `p` on division by a Gröbner basis.
pub fn normal_form<F: Field>(p: &Polynomial<F>, basis: &[Polynomial<F>]) -> Result<Polynomial<F>> {
    let monic: Vec<Polynomial<F>> = basis.iter().filter(|g| !g.is_zero()).map(Polynomial::monic).collect();
    let active = vec![true; monic.len()];
    reduce(p, &monic, &active, true, &mut Meter { used: 0, budget: Budget::UNLIMITED })
}

#[derive(Clone, Debug)]
pub struct IdealDimension<F: Field> {
    pub nvars: usize,
    pub generators: Vec<Polynomial<F>>,
    pub groebner_basis: Vec<Polynomial<F>>,
    /// Dimension of the affine zero set; `-1` when it is empty (1 lies in the ideal).
    pub affine_dim: i64,
    /// For homogeneous ideals, the dimension of the projective zero set (`-1` if empty).
    pub projective_dim: Option<i64>,
}

impl<F: Field> IdealDimension<F> {
    pub fn is_empty_variety(&self) -> bool {
        self.affine_dim < 0
    }
}

/// Size of a smallest set of variables meeting the support of every mask.
fn min_hitting_set(masks: &[u64], bound: usize) -> usize {
    fn search(masks: &[u64], chosen: u64, size: usize, best: &mut usize) {
        if size >= *best {
            return;
        }
        let Some(&unhit) = masks.iter().find(|&&m| m & chosen == 0) else {
            *best = size;
            return;
        };
        let mut bits = unhit;
        while bits != 0 {
            let b = bits & bits.wrapping_neg();
            search(masks, chosen | b, size + 1, best);
            bits &= bits - 1;
        }
    }
    let mut best = bound + 1;
    search(masks, 0, 0, &mut best);
    best
}

/// Dimension of the zero set of a monomial ideal given by its generators.
pub fn monomial_ideal_dimension(nvars: usize, leading: &[Monomial]) -> i64 {
    if leading.iter().any(Monomial::is_one) {
        return -1;
    }
    assert!(nvars <= 64, "dimension computation supports at most 64 variables");
    let masks: Vec<u64> = leading.iter().map(Monomial::support_mask).collect();
    (nvars - min_hitting_set(&masks, nvars)) as i64
}

pub fn ideal_dimension<F: Field>(
    nvars: usize,
    gens: &[Polynomial<F>],
    homogeneous: bool,
    budget: Budget,
) -> Result<IdealDimension<F>> {
    if let Some(g) = gens.iter().find(|g| g.nvars() != nvars) {
        return Err(Error::LengthMismatch { expected: nvars, got: g.nvars() });
    }
    if homogeneous && gens.iter().any(|g| !g.is_homogeneous()) {
        return Err(Error::NotHomogeneous);
    }
    let basis = groebner_basis(gens, budget)?;
    let leading: Vec<Monomial> = basis.iter().map(|g| g.leading_monomial().unwrap().clone()).collect();
    let affine_dim = monomial_ideal_dimension(nvars, &leading);
    let projective_dim = homogeneous.then(|| if affine_dim <= 0 { -1 } else { affine_dim - 1 });
    Ok(IdealDimension { nvars, generators: gens.to_vec(), groebner_basis: basis, affine_dim, projective_dim })
}

/// Whether the `k` generators cut out a set of the expected dimension `nvars - k`.
pub fn is_regular_sequence<F: Field>(
    nvars: usize,
    gens: &[Polynomial<F>],
    homogeneous: bool,
    budget: Budget,
) -> Result<(bool, IdealDimension<F>)> {
    if gens.len() > nvars {
        return Err(Error::InvalidArgument(format!(
            "{} generators exceed the ambient dimension {nvars}",
            gens.len()
        )));
    }
    let dim = ideal_dimension(nvars, gens, homogeneous, budget)?;
    Ok((dim.affine_dim == (nvars - gens.len()) as i64, dim))
}
