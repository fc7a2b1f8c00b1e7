//! Seeded randomness shared by the audits and the multi-start optimizers.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Independent stream for trial `index` under `seed`. Each trial draws from
/// its own stream, so a report depends only on the seed and never on how
/// trials were spread across threads.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn gaussian_vec<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.sample(StandardNormal)).collect()
}

/// Uniform point on the unit sphere in `dim` dimensions.
pub fn unit_vector<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v = gaussian_vec(rng, dim);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Uniform point in the ball of the given radius.
pub fn in_ball<R: Rng>(rng: &mut R, dim: usize, radius: f64) -> Vec<f64> {
    let u: f64 = rng.random();
    let r = radius * u.powf(1.0 / dim as f64);
    unit_vector(rng, dim).into_iter().map(|x| x * r).collect()
}

/// Haar-distributed `rows x cols` matrix with orthonormal columns
/// (QR of a Gaussian matrix with the sign of R's diagonal fixed).
pub fn random_stiefel<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<f64> {
    assert!(cols <= rows);
    let g = DMatrix::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..cols {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Haar-distributed orthogonal `dim x dim` matrix.
pub fn random_orthogonal<R: Rng>(rng: &mut R, dim: usize) -> DMatrix<f64> {
    random_stiefel(rng, dim, dim)
}
