//! The blow-up of a quadratic point in local coordinates.
//!
//! A [`LocalModel`] is `g = g2 + g3 + g4 + …` in variables `u_0..u_{N-1}`
//! with `g2 = c_0 u_0^2 + … + c_{a-1} u_{a-1}^2`; the kernel coordinates
//! `u_a..u_{N-1}` span the vertex of the exceptional quadric. At a kernel
//! point `p` the blown-up variety is examined twice: by the closed-form rule
//! built on `C = g3|K` and `h`, and by substituting the chart directly.
//!
//! Only `g2`, `g3` and `g4` influence the quadratic part at exceptional
//! points; higher pieces are carried but ignored.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::enumerate::ProjectivePoints;
use crate::error::{Error, Result};
use crate::expansion::{expand_at, ProjectivePoint};
use crate::field::{Field, PrimeField};
use crate::groebner::{ideal_dimension, Budget, IdealDimension};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::singularity::{
    check_condition_g, diagonal_frame, diagonal_quadric, gram_matrix, h_form, kind_of_expansion, restrict_to_kernel,
    singular_ideal, ConditionGReport, DiagonalFrame, PointKind,
};

#[derive(Clone, Debug)]
pub struct LocalModel<F: Field> {
    /// `pieces[i]` is homogeneous of degree `i + 2`.
    pieces: Vec<Polynomial<F>>,
    rank: usize,
    coefficients: Vec<F::Elem>,
}

impl<F: Field> LocalModel<F> {
    /// Validates that `g2` is diagonal with nonzero coefficients exactly on
    /// the first `a >= 3` variables and that each piece has its degree.
    pub fn new(pieces: Vec<Polynomial<F>>) -> Result<Self> {
        let g2 = pieces.first().ok_or_else(|| Error::InvalidArgument("a local model needs g2".into()))?;
        let k = g2.field().clone();
        let n = g2.nvars();
        for (i, g) in pieces.iter().enumerate() {
            if g.nvars() != n {
                return Err(Error::LengthMismatch { expected: n, got: g.nvars() });
            }
            if !g.is_zero() && (!g.is_homogeneous() || g.degree() != i as i64 + 2) {
                return Err(Error::InvalidArgument(format!("piece g{} is not homogeneous of degree {}", i + 2, i + 2)));
            }
        }
        let mut diag = vec![k.zero(); n];
        for (m, c) in g2.terms() {
            match (0..n).find(|&i| m.exponent(i) == 2) {
                Some(i) => diag[i] = c.clone(),
                None => return Err(Error::InvalidArgument("g2 must be diagonal".into())),
            }
        }
        let rank = diag.iter().take_while(|c| !k.is_zero(c)).count();
        if diag[rank..].iter().any(|c| !k.is_zero(c)) {
            return Err(Error::InvalidArgument("g2 must involve exactly the leading variables".into()));
        }
        if rank < 3 {
            return Err(Error::Precondition(format!("blow-up analysis needs rank a >= 3, found {rank}")));
        }
        diag.truncate(rank);
        Ok(LocalModel { pieces, rank, coefficients: diag })
    }

    /// The model of a quadratic point in its diagonalizing frame.
    pub fn from_frame(frame: &DiagonalFrame<F>) -> Result<Self> {
        Self::new(frame.pieces[1..].to_vec())
    }

    pub fn field(&self) -> &F {
        self.pieces[0].field()
    }

    pub fn nvars(&self) -> usize {
        self.pieces[0].nvars()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn kernel_dim(&self) -> usize {
        self.nvars() - self.rank
    }

    pub fn coefficients(&self) -> &[F::Elem] {
        &self.coefficients
    }

    /// `g_d`, zero beyond the stored pieces.
    pub fn piece(&self, d: usize) -> Polynomial<F> {
        match d.checked_sub(2).and_then(|i| self.pieces.get(i)) {
            Some(g) => g.clone(),
            None => Polynomial::zero(self.field(), self.nvars()),
        }
    }

    /// `C = g3` on the kernel, in the kernel coordinates.
    pub fn restricted_cubic(&self) -> Polynomial<F> {
        restrict_to_kernel(&self.piece(3), self.rank)
    }

    /// `h = 4 g4|K - Σ (1/c_i) (∂g3/∂u_i|K)^2`.
    pub fn h(&self) -> Polynomial<F> {
        h_form(&self.piece(3), &self.piece(4), &self.coefficients).expect("nonzero coefficients")
    }

    /// Embeds kernel coordinates as a point of the ambient space.
    pub fn kernel_point(&self, kernel_coords: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if kernel_coords.len() != self.kernel_dim() {
            return Err(Error::LengthMismatch { expected: self.kernel_dim(), got: kernel_coords.len() });
        }
        let mut p = vec![self.field().zero(); self.rank];
        p.extend_from_slice(kernel_coords);
        Ok(p)
    }

    /// Normalizes so the first nonzero kernel coordinate is 1.
    fn check_kernel_point(&self, p: &[F::Elem]) -> Result<(usize, Vec<F::Elem>)> {
        let k = self.field();
        if p.len() != self.nvars() {
            return Err(Error::LengthMismatch { expected: self.nvars(), got: p.len() });
        }
        if p[..self.rank].iter().any(|c| !k.is_zero(c)) {
            return Err(Error::InvalidArgument("point is not in the kernel subspace".into()));
        }
        let lead = p
            .iter()
            .position(|c| !k.is_zero(c))
            .ok_or_else(|| Error::InvalidArgument("the zero vector is not a projective point".into()))?;
        let inv = k.inv(&p[lead]).expect("nonzero");
        Ok((lead, p.iter().map(|c| k.mul(c, &inv)).collect()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlowupStatus {
    /// The blown-up variety is nonsingular at the point.
    NotOnQ,
    RankAplus2,
    RankAplus1,
    RankA,
}

impl BlowupStatus {
    /// Rank of the quadratic singularity, `None` at nonsingular points.
    pub fn rank(self, a: usize) -> Option<usize> {
        match self {
            BlowupStatus::NotOnQ => None,
            BlowupStatus::RankAplus2 => Some(a + 2),
            BlowupStatus::RankAplus1 => Some(a + 1),
            BlowupStatus::RankA => Some(a),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlowupPointVerdict<F: Field> {
    /// Ambient coordinates, first nonzero entry 1.
    pub point: Vec<F::Elem>,
    pub status: BlowupStatus,
}

/// Closed-form rule: `C(p) ≠ 0`, then `∇C(p) ≠ 0`, then `h(p) ≠ 0`.
pub fn rank_after_blowup_formula<F: Field>(model: &LocalModel<F>, p: &[F::Elem]) -> Result<BlowupPointVerdict<F>> {
    let (_, point) = model.check_kernel_point(p)?;
    let k = model.field();
    let z = &point[model.rank..];
    let c = model.restricted_cubic();
    let status = if !k.is_zero(&c.evaluate(z)?) {
        BlowupStatus::NotOnQ
    } else if c.gradient().iter().map(|d| d.evaluate(z)).collect::<Result<Vec<_>>>()?.iter().any(|v| !k.is_zero(v)) {
        BlowupStatus::RankAplus2
    } else if !k.is_zero(&model.h().evaluate(z)?) {
        BlowupStatus::RankAplus1
    } else {
        BlowupStatus::RankA
    };
    Ok(BlowupPointVerdict { point, status })
}

/// Substitutes the chart `u_k = w_k`, `u_i = w_i w_k` centred at `p`
/// (kernel coordinates shifted by `p_i`), divides by `w_k^2` and reads the
/// verdict off the linear and quadratic parts of the local equation.
pub fn rank_after_blowup_direct<F: Field>(model: &LocalModel<F>, p: &[F::Elem]) -> Result<BlowupPointVerdict<F>> {
    let (chart, point) = model.check_kernel_point(p)?;
    let k = model.field();
    let n = model.nvars();
    let wk = Polynomial::var(k, n, chart);
    let images: Vec<Polynomial<F>> = (0..n)
        .map(|i| {
            if i == chart {
                wk.clone()
            } else {
                let shifted = &Polynomial::var(k, n, i) + &Polynomial::constant(k, n, point[i].clone());
                &shifted * &wk
            }
        })
        .collect();
    let mut local = Polynomial::zero(k, n);
    for d in 2..=4 {
        let g = model.piece(d).substitute(&images)?;
        local = &local + &g;
    }
    // Every term carries w_k^2 at least.
    let terms = local.terms().iter().map(|(m, c)| {
        let mut e = m.exponents().to_vec();
        debug_assert!(e[chart] >= 2);
        e[chart] -= 2;
        (Monomial::new(&e), c.clone())
    });
    let local = Polynomial::from_terms(k, n, terms);
    let status = if !local.homogeneous_component(1).is_zero() {
        BlowupStatus::NotOnQ
    } else {
        let a = model.rank;
        match gram_matrix(&local.homogeneous_component(2))?.rank() {
            r if r == a + 2 => BlowupStatus::RankAplus2,
            r if r == a + 1 => BlowupStatus::RankAplus1,
            r if r == a => BlowupStatus::RankA,
            r => return Err(Error::Precondition(format!("quadratic part of rank {r} outside a..a+2"))),
        }
    };
    Ok(BlowupPointVerdict { point, status })
}

/// `Q = E_Y ∩ Sing X⁺ = {C = 0}` inside the kernel `P^{N-a-1}`.
#[derive(Clone, Debug)]
pub struct ExceptionalLocus<F: Field> {
    pub restricted_cubic: Polynomial<F>,
    /// `C ≡ 0`: Q is the whole kernel.
    pub whole_kernel: bool,
    /// Projective dimension of Q.
    pub dim: i64,
    /// Common zeros of `C` and its partials.
    pub singular_locus: IdealDimension<F>,
}

pub fn exceptional_sing_locus<F: Field>(model: &LocalModel<F>, budget: Budget) -> Result<ExceptionalLocus<F>> {
    let c = model.restricted_cubic();
    let kdim = model.kernel_dim();
    let whole_kernel = c.is_zero();
    let dim = kdim as i64 - if whole_kernel { 1 } else { 2 };
    let singular_locus = ideal_dimension(kdim, &singular_ideal(&c), true, budget)?;
    Ok(ExceptionalLocus { restricted_cubic: c, whole_kernel, dim, singular_locus })
}

/// The exceptional quadric `{g2 = 0} ⊂ P^{N-1}` and its vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalQuadric {
    pub dim: i64,
    pub sing_dim: i64,
    /// Codimension of the vertex in `P^{N-1}`; equals the rank.
    pub sing_codim: i64,
}

pub fn exceptional_quadric<F: Field>(model: &LocalModel<F>, budget: Budget) -> Result<ExceptionalQuadric> {
    let n = model.nvars() as i64;
    let g2 = model.piece(2);
    let sing = ideal_dimension(model.nvars(), &singular_ideal(&g2), true, budget)?;
    let sing_dim = sing.projective_dim.expect("homogeneous");
    Ok(ExceptionalQuadric { dim: n - 2, sing_dim, sing_codim: n - 1 - sing_dim })
}

/// All rational kernel points over a finite field, in ambient coordinates.
pub fn kernel_points(model: &LocalModel<PrimeField>) -> Vec<Vec<u64>> {
    let p = model.field().modulus();
    ProjectivePoints::new(p, model.kernel_dim()).map(|z| model.kernel_point(&z).expect("length")).collect()
}

#[derive(Clone, Debug)]
pub struct Rank3Blowup<F: Field> {
    pub model: LocalModel<F>,
    pub condition_g: ConditionGReport<F>,
    pub locus: ExceptionalLocus<F>,
    /// Verdicts at the examined points lying on Q.
    pub verdicts: Vec<BlowupPointVerdict<F>>,
    pub points_examined: usize,
    pub rank_a_points: usize,
    /// Both verdict paths agreed at every examined point.
    pub formula_direct_agree: bool,
    /// Projective dimension of `V(C, ∇C, h)`, the locus of rank-3 points on E.
    pub rank_a_locus_dim: i64,
    /// Rank-3 points of the blow-up are finite in number.
    pub rank_a_isolated: bool,
    /// (G) holds implies no rank-3 point was found.
    pub consistent_with_g: bool,
}

/// Blows up a rank-3 point and classifies rational points of Q. Kernel
/// points are in the diagonal frame of the point; over a finite field they
/// are enumerated when `points` is `None`, over the rationals they must be
/// supplied.
pub fn blow_up_rank3_point<F: Field>(
    f: &Polynomial<F>,
    o: &ProjectivePoint<F>,
    points: Option<&[Vec<F::Elem>]>,
    budget: Budget,
) -> Result<Rank3Blowup<F>> {
    let exp = expand_at(f, o)?;
    let kind = kind_of_expansion(&exp)?;
    if kind != PointKind::QuadraticRank(3) {
        return Err(Error::Precondition(format!("blow-up of a rank-3 point requested at a {kind:?} point")));
    }
    let frame = diagonal_frame(&exp)?;
    let model = LocalModel::from_frame(&frame)?;
    let condition_g = check_condition_g(f, o, budget)?;
    let locus = exceptional_sing_locus(&model, budget)?;
    let kernel: Vec<Vec<F::Elem>> = match points {
        Some(pts) => pts.to_vec(),
        None => {
            let elements = model.field().elements().ok_or_else(|| {
                Error::InvalidArgument("kernel points must be supplied over an infinite field".into())
            })?;
            ProjectivePoints::new(elements.len() as u64, model.kernel_dim())
                .map(|z| z.iter().map(|&i| elements[i as usize].clone()).collect())
                .collect()
        }
    };
    let mut verdicts = Vec::new();
    let mut agree = true;
    for z in &kernel {
        let p = model.kernel_point(z)?;
        let direct = rank_after_blowup_direct(&model, &p)?;
        let formula = rank_after_blowup_formula(&model, &p)?;
        agree &= direct.status == formula.status;
        if direct.status != BlowupStatus::NotOnQ {
            verdicts.push(direct);
        }
    }
    let rank_a_points = verdicts.iter().filter(|v| v.status == BlowupStatus::RankA).count();
    let mut gens = singular_ideal(&locus.restricted_cubic);
    gens.push(model.h());
    gens.retain(|g| !g.is_zero());
    let rank_a_locus_dim = ideal_dimension(model.kernel_dim(), &gens, true, budget)?.projective_dim.expect("homogeneous");
    Ok(Rank3Blowup {
        consistent_with_g: !condition_g.verdict || rank_a_points == 0,
        rank_a_isolated: rank_a_locus_dim <= 0,
        model,
        condition_g,
        locus,
        points_examined: kernel.len(),
        verdicts,
        rank_a_points,
        formula_direct_agree: agree,
        rank_a_locus_dim,
    })
}

/// Singular locus of `X⁺` near `E`: components inside `E` lie in Q, the
/// others are strict transforms of components of `Sing X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlownUpCodim {
    pub ambient_codim: i64,
    pub q_dim: i64,
    /// `(N - 1) - dim Q`, the codimension of Q in `X⁺`.
    pub exceptional_codim: i64,
    pub codim: i64,
    pub holds: bool,
}

pub fn blown_up_singular_codim<F: Field>(model: &LocalModel<F>, ambient_codim: i64, budget: Budget) -> Result<BlownUpCodim> {
    let locus = exceptional_sing_locus(model, budget)?;
    let exceptional_codim = model.nvars() as i64 - 1 - locus.dim;
    let codim = ambient_codim.min(exceptional_codim);
    Ok(BlownUpCodim { ambient_codim, q_dim: locus.dim, exceptional_codim, codim, holds: ambient_codim < 4 || codim >= 4 })
}

/// Rank-4 points: if `C ≢ 0` then Q has codimension 4 in `E_X`; if `C ≡ 0`
/// and `h ≢ 0` the general point of Q has rank 5.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rank4Check {
    pub cubic_nonzero: bool,
    pub h_nonzero: bool,
    pub hypothesis: bool,
    /// `(N - 2) - dim Q`.
    pub q_codim_in_exceptional: i64,
    /// Projective dimension of `V(C, ∇C, h)` in the kernel.
    pub rank_a_locus_dim: i64,
    pub conclusion: bool,
}

pub fn rank4_singular_codim<F: Field>(model: &LocalModel<F>, budget: Budget) -> Result<Rank4Check> {
    if model.rank != 4 {
        return Err(Error::Precondition(format!("rank-4 check at a rank-{} model", model.rank)));
    }
    let locus = exceptional_sing_locus(model, budget)?;
    let h = model.h();
    let cubic_nonzero = !locus.whole_kernel;
    let h_nonzero = !h.is_zero();
    let mut gens = singular_ideal(&locus.restricted_cubic);
    gens.push(h);
    gens.retain(|g| !g.is_zero());
    let kdim = model.kernel_dim() as i64;
    let rank_a_locus_dim = ideal_dimension(model.kernel_dim(), &gens, true, budget)?.projective_dim.expect("homogeneous");
    let q_codim_in_exceptional = model.nvars() as i64 - 2 - locus.dim;
    let conclusion = if cubic_nonzero { q_codim_in_exceptional >= 4 } else { rank_a_locus_dim < kdim - 1 };
    Ok(Rank4Check {
        cubic_nonzero,
        h_nonzero,
        hypothesis: cubic_nonzero || h_nonzero,
        q_codim_in_exceptional,
        rank_a_locus_dim,
        conclusion,
    })
}

/// How the cubic and quartic of a random model relate to the kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Dense,
    CubicVanishesOnKernel,
    CubicIsCubeOfLinear,
    Sparse,
}

fn random_form<R: Rng>(k: &PrimeField, n: usize, degree: u16, density: f64, kernel_from: Option<usize>, rng: &mut R) -> Polynomial<PrimeField> {
    let p = k.modulus();
    let mut terms = Vec::new();
    let mut exps = vec![0u16; n];
    fn walk<R: Rng>(
        i: usize,
        left: u16,
        exps: &mut Vec<u16>,
        out: &mut Vec<(Monomial, u64)>,
        p: u64,
        density: f64,
        kernel_from: Option<usize>,
        rng: &mut R,
    ) {
        let n = exps.len();
        if i == n - 1 {
            exps[i] = left;
            let kernel_only = kernel_from.is_some_and(|a| exps[..a].iter().all(|&e| e == 0));
            if !kernel_only && rng.random_bool(density) {
                out.push((Monomial::new(exps), rng.random_range(1..p)));
            }
            return;
        }
        for e in 0..=left {
            exps[i] = e;
            walk(i + 1, left - e, exps, out, p, density, kernel_from, rng);
        }
        exps[i] = 0;
    }
    walk(0, degree, &mut exps, &mut terms, p, density, kernel_from, rng);
    Polynomial::from_terms(k, n, terms)
}

/// A random model over `F_p` with `g2` of rank `a` in `n` variables. The
/// cubic is sometimes chosen to vanish on the kernel or to restrict to a
/// cube, so that every verdict class occurs.
pub fn random_local_model<R: Rng>(k: &PrimeField, a: usize, n: usize, rng: &mut R) -> LocalModel<PrimeField> {
    assert!(3 <= a && a < n);
    let p = k.modulus();
    let coefficients: Vec<u64> = (0..a).map(|_| rng.random_range(1..p)).collect();
    let g2 = diagonal_quadric(k, n, &coefficients);
    let shape = match rng.random_range(0..4) {
        0 => Shape::Dense,
        1 => Shape::CubicVanishesOnKernel,
        2 => Shape::CubicIsCubeOfLinear,
        _ => Shape::Sparse,
    };
    let (g3, g4) = match shape {
        Shape::Dense => (random_form(k, n, 3, 0.6, None, rng), random_form(k, n, 4, 0.5, None, rng)),
        Shape::CubicVanishesOnKernel => {
            let g4 = if rng.random_bool(0.3) { Polynomial::zero(k, n) } else { random_form(k, n, 4, 0.3, None, rng) };
            (random_form(k, n, 3, 0.3, Some(a), rng), g4)
        }
        Shape::CubicIsCubeOfLinear => {
            let linear = Polynomial::from_terms(k, n, (a..n).map(|i| (Monomial::var(n, i), rng.random_range(0..p))));
            let cube = &(&linear * &linear) * &linear;
            (&cube + &random_form(k, n, 3, 0.3, Some(a), rng), random_form(k, n, 4, 0.3, None, rng))
        }
        Shape::Sparse => (random_form(k, n, 3, 0.15, None, rng), random_form(k, n, 4, 0.1, None, rng)),
    };
    LocalModel::new(vec![g2, g3, g4]).expect("valid by construction")
}
