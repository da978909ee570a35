//! Shared workloads for the benchmarks.

use hypercert_core::blowup::{random_local_model, LocalModel};
use hypercert_core::census::{random_form, sample_rng};
use hypercert_core::{expand_at, Field, Polynomial, PrimeField, ProjectivePoint};

/// Quintic with a single rank-3 point at `(1:0:0:0:0:0)`.
pub const RANK3_QUINTIC: &str = "x0^3*x1^2 + x0^3*x2^2 + x0^3*x3^2 + x0^2*x4^3 + x0^2*x5^3 \
    + x0*x1^4 + x0*x2^4 + x0*x3^4 + x0*x4^4 + x0*x5^4 + x1^5 + x2^5 + x3^5 + x4^5 + x5^5";

pub const FERMAT_QUINTIC: &str = "x0^5 + x1^5 + x2^5 + x3^5 + x4^5 + x5^5";

pub fn quintic<F: Field>(field: &F, text: &str) -> Polynomial<F> {
    Polynomial::parse(field, 6, text).expect("valid quintic")
}

pub fn origin<F: Field>(field: &F) -> ProjectivePoint<F> {
    ProjectivePoint::from_i64(field, &[1, 0, 0, 0, 0, 0]).expect("nonzero")
}

/// `f` and its partial derivatives.
pub fn singular_ideal<F: Field>(f: &Polynomial<F>) -> Vec<Polynomial<F>> {
    let mut gens = vec![f.clone()];
    gens.extend(f.gradient());
    gens
}

/// A random degree-`m` form over `F_p` and one of its nonsingular points.
pub fn random_form_with_point(p: u64, m: usize, seed: u64) -> (Polynomial<PrimeField>, ProjectivePoint<PrimeField>) {
    let k = PrimeField::new(p).expect("prime");
    let mut rng = sample_rng(seed, 0);
    loop {
        let f = random_form(&k, m, &mut rng);
        let points = hypercert_core::enumerate::enumerate_points(&f, u64::MAX).expect("unbounded");
        let nonsingular = points.into_iter().find(|o| !expand_at(&f, o).expect("on F").q(1).is_zero());
        if let Some(o) = nonsingular {
            return (f, o);
        }
    }
}

pub fn local_models(p: u64, a: usize, n: usize, count: usize, seed: u64) -> Vec<LocalModel<PrimeField>> {
    let k = PrimeField::new(p).expect("prime");
    (0..count).map(|i| random_local_model(&k, a, n, &mut sample_rng(seed, i))).collect()
}
