//! Seeded sampling on balls and spheres for the dimensions without an exact
//! planar path.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{CentroidEstimate, ConvexBody, GeomConfig, GeomError, Point};

fn gaussian_direction(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// `count` uniform points on `S^{dim-1}`.
pub fn sphere_points(dim: usize, count: usize, seed: u64) -> impl Iterator<Item = Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(move |_| gaussian_direction(&mut rng, dim))
}

/// `count` uniform points in the closed unit ball of `R^dim`.
pub fn ball_points(dim: usize, count: usize, seed: u64) -> impl Iterator<Item = Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(move |_| {
        let dir = gaussian_direction(&mut rng, dim);
        let r = rng.random::<f64>().powf(1.0 / dim as f64);
        dir.into_iter().map(|x| x * r).collect()
    })
}

/// Mean of the budgeted ball samples that land in `body`, with the standard
/// error of each coordinate.
pub fn monte_carlo_centroid(body: &ConvexBody, cfg: &GeomConfig) -> Result<CentroidEstimate, GeomError> {
    let dim = body.dim();
    let mut sum = vec![0.0; dim];
    let mut sum_sq = vec![0.0; dim];
    let mut hits = 0usize;
    for p in ball_points(dim, cfg.samples, cfg.seed) {
        if body.slack(&p) >= 0.0 {
            hits += 1;
            for (i, x) in p.iter().enumerate() {
                sum[i] += x;
                sum_sq[i] += x * x;
            }
        }
    }
    if hits < 2 {
        return Err(GeomError::EmptyBody);
    }
    let n = hits as f64;
    let mean: Vec<f64> = sum.iter().map(|s| s / n).collect();
    let std_error = sum_sq
        .iter()
        .zip(&mean)
        .map(|(sq, m)| ((sq / n - m * m).max(0.0) * n / (n - 1.0) / n).sqrt())
        .collect();
    Ok(CentroidEstimate {
        point: Point::new(mean)?,
        std_error,
    })
}
