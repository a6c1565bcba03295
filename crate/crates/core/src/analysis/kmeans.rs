//! Lloyd's k-means with k-means++ seeding and seeded restarts.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KMeansParams {
    pub k: usize,
    pub seed: u64,
    pub max_iter: usize,
    pub n_restarts: usize,
}

impl KMeansParams {
    pub fn new(k: usize, seed: u64) -> Self {
        KMeansParams {
            k,
            seed,
            max_iter: 300,
            n_restarts: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansFit {
    pub centroids: Vec<Vec<f64>>,
    pub assignments: Vec<usize>,
    /// Sum of squared distances to the assigned centroids.
    pub inertia: f64,
    pub iterations: usize,
    /// Inertia after the seeding assignment and after every Lloyd step.
    pub inertia_history: Vec<f64>,
    /// Restart that produced this fit.
    pub restart: usize,
}

pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(p: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, centroid) in centroids.iter().enumerate() {
        let d = squared_distance(p, centroid);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn seed_plus_plus(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut centroids = Vec::with_capacity(k);
    centroids.push(points[rng.gen_range(0..points.len())].clone());
    let mut d2: Vec<f64> = points.iter().map(|p| squared_distance(p, &centroids[0])).collect();
    while centroids.len() < k {
        let next = match WeightedIndex::new(&d2) {
            Ok(w) => w.sample(rng),
            // every point coincides with a centroid already
            Err(_) => rng.gen_range(0..points.len()),
        };
        centroids.push(points[next].clone());
        let c = centroids.last().unwrap();
        for (p, d) in points.iter().zip(d2.iter_mut()) {
            *d = d.min(squared_distance(p, c));
        }
    }
    centroids
}

fn lloyd(points: &[Vec<f64>], k: usize, max_iter: usize, rng: &mut ChaCha8Rng, restart: usize) -> KMeansFit {
    let dim = points[0].len();
    let mut centroids = seed_plus_plus(points, k, rng);
    let mut assignments = Vec::with_capacity(points.len());
    let mut inertia = 0.0;
    for p in points {
        let (c, d) = nearest(p, &centroids);
        assignments.push(c);
        inertia += d;
    }
    let mut history = vec![inertia];
    let mut iterations = 0;

    for _ in 0..max_iter {
        iterations += 1;

        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &c) in points.iter().zip(&assignments) {
            counts[c] += 1;
            for (s, x) in sums[c].iter_mut().zip(p) {
                *s += x;
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                centroids[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }
        // an empty cluster takes the point farthest from its centroid
        for c in 0..k {
            if counts[c] > 0 {
                continue;
            }
            let donor = (0..points.len())
                .filter(|&i| counts[assignments[i]] > 1)
                .max_by(|&i, &j| {
                    let di = squared_distance(&points[i], &centroids[assignments[i]]);
                    let dj = squared_distance(&points[j], &centroids[assignments[j]]);
                    di.total_cmp(&dj).then(j.cmp(&i))
                });
            if let Some(i) = donor {
                counts[assignments[i]] -= 1;
                assignments[i] = c;
                counts[c] = 1;
                centroids[c] = points[i].clone();
            }
        }

        let mut changed = false;
        let mut next_inertia = 0.0;
        for (p, a) in points.iter().zip(assignments.iter_mut()) {
            let current = squared_distance(p, &centroids[*a]);
            let (c, d) = nearest(p, &centroids);
            if d < current {
                *a = c;
                changed = true;
                next_inertia += d;
            } else {
                next_inertia += current;
            }
        }
        debug_assert!(
            next_inertia <= inertia * (1.0 + 1e-12) + 1e-12,
            "inertia increased: {inertia} -> {next_inertia}"
        );
        inertia = next_inertia;
        history.push(inertia);
        if !changed {
            break;
        }
    }

    KMeansFit {
        centroids,
        assignments,
        inertia,
        iterations,
        inertia_history: history,
        restart,
    }
}

/// Best of `n_restarts` seeded Lloyd runs by inertia; ties go to the lowest
/// restart index. Restarts run in parallel and the result depends only on
/// the parameters.
pub fn kmeans(points: &[Vec<f64>], params: &KMeansParams) -> Result<KMeansFit> {
    let KMeansParams {
        k,
        seed,
        max_iter,
        n_restarts,
    } = *params;
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if points.len() < k {
        return Err(Error::invalid(format!("k = {k} exceeds the number of points ({})", points.len())));
    }
    let dim = points[0].len();
    if dim == 0 || points.iter().any(|p| p.len() != dim) {
        return Err(Error::invalid("points must be non-empty vectors of equal length"));
    }
    if points.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::invalid("points contain non-finite values"));
    }
    let fits: Vec<KMeansFit> = (0..n_restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            lloyd(points, k, max_iter, &mut rng, r)
        })
        .collect();
    let mut best: Option<KMeansFit> = None;
    for fit in fits {
        if best.as_ref().is_none_or(|b| fit.inertia < b.inertia) {
            best = Some(fit);
        }
    }
    Ok(best.expect("at least one restart"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::Normal;

    #[test]
    fn k_equals_point_count() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 5.0]];
        let fit = kmeans(&pts, &KMeansParams::new(3, 1)).unwrap();
        assert_eq!(fit.inertia, 0.0);
        let mut cs = fit.centroids.clone();
        cs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut expected = pts.clone();
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(cs, expected);
    }

    #[test]
    fn two_blobs_recover_means() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let noise = Normal::new(0.0, 0.1).unwrap();
        let mut pts = Vec::new();
        for center in [[0.0, 0.0], [10.0, 10.0]] {
            for _ in 0..50 {
                pts.push(vec![center[0] + noise.sample(&mut rng), center[1] + noise.sample(&mut rng)]);
            }
        }
        let fit = kmeans(&pts, &KMeansParams::new(2, 9)).unwrap();
        for blob in [&pts[..50], &pts[50..]] {
            let m: Vec<f64> = (0..2).map(|d| blob.iter().map(|p| p[d]).sum::<f64>() / 50.0).collect();
            let best = fit.centroids.iter().map(|c| squared_distance(c, &m).sqrt()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-9, "{best}");
        }
    }

    #[test]
    fn inertia_never_increases() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pts: Vec<Vec<f64>> = (0..300).map(|_| (0..5).map(|_| rng.gen::<f64>()).collect()).collect();
        for seed in 0..5 {
            let fit = kmeans(&pts, &KMeansParams::new(6, seed)).unwrap();
            for w in fit.inertia_history.windows(2) {
                assert!(w[1] <= w[0], "{w:?}");
            }
        }
    }

    #[test]
    fn reproducible() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pts: Vec<Vec<f64>> = (0..100).map(|_| (0..3).map(|_| rng.gen::<f64>()).collect()).collect();
        let a = kmeans(&pts, &KMeansParams::new(4, 42)).unwrap();
        let b = kmeans(&pts, &KMeansParams::new(4, 42)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn duplicate_points_do_not_leave_empty_clusters() {
        let pts = vec![vec![1.0]; 5].into_iter().chain([vec![2.0]]).collect::<Vec<_>>();
        let fit = kmeans(&pts, &KMeansParams::new(3, 0)).unwrap();
        assert_eq!(fit.centroids.len(), 3);
        assert_eq!(fit.inertia, 0.0);
    }

    #[test]
    fn errors() {
        assert!(kmeans(&[vec![1.0]], &KMeansParams::new(2, 0)).is_err());
        assert!(kmeans(&[vec![1.0], vec![1.0, 2.0]], &KMeansParams::new(1, 0)).is_err());
        assert!(kmeans(&[vec![1.0]], &KMeansParams::new(0, 0)).is_err());
    }
}
