use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{PathBundle, Result, ScenGenError};

/// Number of representative scenarios kept after clustering.
pub const DEFAULT_K: usize = 5;
pub const MAX_SWAP_ITERATIONS: usize = 100;

/// Dense symmetric distance matrix.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_points(points: &[Vec<f64>]) -> Self {
        let n = points.len();
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .map(|j| {
                        points[i]
                            .iter()
                            .zip(&points[j])
                            .map(|(a, b)| (a - b) * (a - b))
                            .sum::<f64>()
                            .sqrt()
                    })
                    .collect()
            })
            .collect();
        DistanceMatrix {
            n,
            d: rows.concat(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }
}

fn standardize(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let (mut n, mut sum) = (0usize, 0.0);
    for v in values.clone() {
        n += 1;
        sum += v;
    }
    let mean = sum / n as f64;
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
    let std = var.sqrt();
    (mean, if std > 0.0 { std } else { 1.0 })
}

/// Feature vector per path: demand then price, each standardized by its
/// pooled mean and deviation over all paths and periods.
pub fn joint_features(demand: &PathBundle, price: &PathBundle) -> Vec<Vec<f64>> {
    assert_eq!(demand.n_paths(), price.n_paths());
    let (md, sd) = standardize(demand.paths().iter().flatten().copied());
    let (mp, sp) = standardize(price.paths().iter().flatten().copied());
    demand
        .paths()
        .iter()
        .zip(price.paths())
        .map(|(d, p)| {
            d.iter()
                .map(|v| (v - md) / sd)
                .chain(p.iter().map(|v| (v - mp) / sp))
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    /// Member indices, ascending.
    pub medoids: Vec<usize>,
    /// Cluster size over number of points, aligned with `medoids`.
    pub probabilities: Vec<f64>,
    /// Position in `medoids` of each point's cluster.
    pub labels: Vec<usize>,
    /// Sum of distances to the assigned medoid.
    pub cost: f64,
}

fn assign(dist: &DistanceMatrix, medoids: &[usize]) -> (Vec<usize>, f64) {
    let mut labels = Vec::with_capacity(dist.len());
    let mut cost = 0.0;
    for j in 0..dist.len() {
        let mut best = 0;
        for (m, &idx) in medoids.iter().enumerate() {
            let cur = dist.get(j, medoids[best]);
            let d = dist.get(j, idx);
            if d < cur || (d == cur && idx < medoids[best]) {
                best = m;
            }
        }
        cost += dist.get(j, medoids[best]);
        labels.push(best);
    }
    (labels, cost)
}

/// Total distance of every point to its nearest medoid.
pub fn clustering_cost(dist: &DistanceMatrix, medoids: &[usize]) -> f64 {
    assign(dist, medoids).1
}

/// PAM: greedy farthest-point start from a seeded first medoid, then best
/// single swaps until none improves or the iteration cap is hit.
pub fn k_medoids(dist: &DistanceMatrix, k: usize, seed: u64) -> Result<Clustering> {
    let n = dist.len();
    if k == 0 || k > n {
        return Err(ScenGenError::TooFewPaths { k, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut medoids = vec![rng.random_range(0..n)];
    let mut nearest: Vec<f64> = (0..n).map(|j| dist.get(j, medoids[0])).collect();
    while medoids.len() < k {
        let mut pick = None;
        let mut far = f64::NEG_INFINITY;
        for j in 0..n {
            if !medoids.contains(&j) && nearest[j] > far {
                far = nearest[j];
                pick = Some(j);
            }
        }
        let pick = pick.expect("k <= n leaves a candidate");
        medoids.push(pick);
        for j in 0..n {
            nearest[j] = nearest[j].min(dist.get(j, pick));
        }
    }

    for _ in 0..MAX_SWAP_ITERATIONS {
        // nearest and second-nearest medoid distances per point
        let near: Vec<(usize, f64, f64)> = (0..n)
            .map(|j| {
                let (mut b, mut d1, mut d2) = (0, f64::INFINITY, f64::INFINITY);
                for (m, &idx) in medoids.iter().enumerate() {
                    let d = dist.get(j, idx);
                    if d < d1 {
                        d2 = d1;
                        d1 = d;
                        b = m;
                    } else if d < d2 {
                        d2 = d;
                    }
                }
                (b, d1, d2)
            })
            .collect();
        let is_medoid: Vec<bool> = (0..n).map(|j| medoids.contains(&j)).collect();
        let best = (0..n)
            .into_par_iter()
            .filter(|&o| !is_medoid[o])
            .map(|o| {
                let mut best = (f64::INFINITY, usize::MAX);
                for m in 0..k {
                    let mut delta = 0.0;
                    for (j, &(b, d1, d2)) in near.iter().enumerate() {
                        let dj = dist.get(j, o);
                        let new = if b == m { dj.min(d2) } else { dj.min(d1) };
                        delta += new - d1;
                    }
                    if delta < best.0 {
                        best = (delta, m);
                    }
                }
                (best.0, best.1, o)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold((0.0, usize::MAX, usize::MAX), |acc, cand| {
                if cand.0 < acc.0 {
                    cand
                } else {
                    acc
                }
            });
        let (delta, m, o) = best;
        let scale: f64 = near.iter().map(|x| x.1).sum::<f64>().max(1.0);
        if m == usize::MAX || delta >= -1e-12 * scale {
            break;
        }
        medoids[m] = o;
    }

    medoids.sort_unstable();
    let (labels, cost) = assign(dist, &medoids);
    let mut sizes = vec![0usize; k];
    for &l in &labels {
        sizes[l] += 1;
    }
    let mut probabilities: Vec<f64> = sizes.iter().map(|&s| s as f64 / n as f64).collect();
    crate::domain::normalize_exact(&mut probabilities);
    Ok(Clustering {
        probabilities,
        medoids,
        labels,
        cost,
    })
}
