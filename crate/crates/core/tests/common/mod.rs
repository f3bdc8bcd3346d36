#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thauma_core::{CMatrix, HermitianOperator};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box–Muller
    let u: f64 = rng.random::<f64>().max(1e-300);
    let v: f64 = rng.random();
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}

fn ginibre(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| Complex64::new(gaussian(rng), gaussian(rng)))
}

/// Random density matrix of the given rank (induced Ginibre measure).
pub fn random_state(rng: &mut ChaCha8Rng, dim: usize, rank: usize) -> HermitianOperator {
    let g = ginibre(rng, dim, rank);
    let h = HermitianOperator::hermitian_part(&(&g * g.adjoint()));
    let t = h.trace();
    h.scale(1.0 / t)
}

pub fn random_pure(rng: &mut ChaCha8Rng, dim: usize) -> HermitianOperator {
    random_state(rng, dim, 1)
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> HermitianOperator {
    let g = ginibre(rng, dim, dim);
    HermitianOperator::hermitian_part(&g)
}

pub fn named(name: &str) -> HermitianOperator {
    thauma_core::named_state(name).unwrap().density()
}

pub fn log2_5_3() -> f64 {
    (5.0f64 / 3.0).log2()
}

pub fn log2_3_2() -> f64 {
    1.5f64.log2()
}

pub fn log2_3_minus_sqrt3() -> f64 {
    (3.0 - 3f64.sqrt()).log2()
}

pub fn log2_t() -> f64 {
    (1.0 + 2.0 * (std::f64::consts::PI / 18.0).sin()).log2()
}
