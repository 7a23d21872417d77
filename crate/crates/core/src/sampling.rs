//! Seeded random test vectors.
//!
//! All randomized checks draw from [`ChaCha8Rng`] so a `(seed, label)` pair
//! reproduces a run exactly on every platform.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::vector::{CoeffVector, IndexSet};

/// Half-width of the index window used for vectors over `ℤ \ {0}`.
pub const SYMMETRIC_WINDOW: i64 = 32;

/// Largest support drawn for vectors over `ℤ \ {0}`.
pub const SYMMETRIC_MAX_SUPPORT: usize = 8;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stable sub-seed for a named stream (FNV-1a over the master seed and label).
pub fn derive_seed(master: u64, label: &str) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    master
        .to_le_bytes()
        .iter()
        .chain(label.as_bytes())
        .fold(OFFSET, |h, &b| (h ^ b as u64).wrapping_mul(PRIME))
}

/// Standard complex Gaussian: real and imaginary parts `N(0, 1/2)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix of independent standard complex Gaussians.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Uniformly random index of `set`; symmetric sets draw from `±1..=±window`.
pub fn random_index<R: Rng + ?Sized>(rng: &mut R, set: IndexSet, window: i64) -> i64 {
    match set {
        IndexSet::Finite(n) => rng.random_range(1..=n as i64),
        IndexSet::SymmetricIntegers => {
            let k = rng.random_range(1..=window);
            if rng.random_bool(0.5) {
                k
            } else {
                -k
            }
        }
    }
}

/// Nonempty random vector with a random support.
pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, set: IndexSet) -> CoeffVector {
    let support: Vec<i64> = match set {
        IndexSet::Finite(n) => {
            let k = rng.random_range(1..=n);
            sample(rng, n, k)
                .into_iter()
                .map(|p| p as i64 + 1)
                .collect()
        }
        IndexSet::SymmetricIntegers => {
            let k = rng.random_range(1..=SYMMETRIC_MAX_SUPPORT);
            let width = 2 * SYMMETRIC_WINDOW as usize;
            sample(rng, width, k)
                .into_iter()
                .map(|p| {
                    let p = p as i64;
                    if p < SYMMETRIC_WINDOW {
                        p + 1
                    } else {
                        SYMMETRIC_WINDOW - 1 - p
                    }
                })
                .collect()
        }
    };
    gaussian_on(rng, set, &support)
}

/// Random vector supported inside `support` plus up to `extra` further
/// indices; the window for new symmetric indices extends eight past the
/// largest given index.
pub fn random_vector_near<R: Rng + ?Sized>(
    rng: &mut R,
    set: IndexSet,
    support: &[i64],
    extra: usize,
) -> CoeffVector {
    let mut indices: Vec<i64> = support.to_vec();
    let window = support.iter().map(|i| i.abs()).max().unwrap_or(0) + 8;
    let count = rng.random_range(0..=extra);
    for _ in 0..count {
        let i = random_index(rng, set, window);
        if !indices.contains(&i) {
            indices.push(i);
        }
    }
    let v = gaussian_on(rng, set, &indices);
    if v.is_empty() {
        // Gaussian draws are never exactly zero in practice; keep the
        // contract nonempty regardless.
        CoeffVector::basis(set, indices[0]).expect("index drawn from set")
    } else {
        v
    }
}

fn gaussian_on<R: Rng + ?Sized>(rng: &mut R, set: IndexSet, support: &[i64]) -> CoeffVector {
    CoeffVector::from_entries(set, support.iter().map(|&i| (i, complex_gaussian(rng))))
        .expect("indices drawn from the index set are unique")
}
