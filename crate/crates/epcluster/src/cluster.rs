//! Seeded, deterministic k-means over fidelity feature vectors.
//!
//! Lloyd's algorithm with k-means++ initialization. All randomness comes
//! from the crate's [`SplitMix64`](crate::rng::SplitMix64) generator seeded
//! by the caller, so identical inputs and seed produce a bit-identical
//! model. Empty clusters are repaired by re-seeding them with the point
//! farthest from its assigned centroid, keeping `k` fixed.

use thiserror::Error;

use crate::fidelity::FeatureSpace;
use crate::real::Real;
use crate::rng::SplitMix64;

#[derive(Debug, Error)]
pub enum ClusterError {
    #[error("k = {k} must be between 1 and the number of states ({n})")]
    BadK { k: usize, n: usize },
    #[error("feature set is empty")]
    EmptyFeatures,
    #[error("feature length {got} does not match model dimension {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("silhouette score requires k ≥ 2, got {0}")]
    SilhouetteNeedsTwo(usize),
    #[error("silhouette score is undefined when every cluster is a singleton")]
    SingletonClusters,
    #[error("cluster {0} is empty")]
    EmptyCluster(usize),
}

/// Convergence and restart policy for [`kmeans`].
#[derive(Debug, Clone, Copy)]
pub struct KmeansParams<T> {
    pub max_iter: usize,
    /// Converged when no assignment changes and the largest centroid shift
    /// (2-norm) is at most `tol`.
    pub tol: T,
    /// Independent k-means++ restarts; the lowest-inertia run wins, ties
    /// resolved toward the earliest restart.
    pub restarts: usize,
}

impl<T: Real> Default for KmeansParams<T> {
    fn default() -> Self {
        Self {
            max_iter: 300,
            tol: T::from_f64(1e-9).max(T::epsilon()),
            restarts: 10,
        }
    }
}

/// Fitted k-means model.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterModel<T> {
    pub k: usize,
    pub centroids: Vec<Vec<T>>,
    /// Cluster index (0..k) of each input point, in input order.
    pub assignments: Vec<usize>,
    /// Sum of squared distances from points to their assigned centroids.
    pub inertia: T,
    pub seed: u64,
    pub iterations_run: usize,
    /// Post-assignment inertia of every Lloyd iteration of the winning
    /// restart; non-increasing by construction.
    pub inertia_trace: Vec<T>,
}

impl<T: Real> ClusterModel<T> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "k": self.k,
            "centroids": self.centroids.iter()
                .map(|c| c.iter().map(|x| x.to_f64()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "assignments": self.assignments,
            "inertia": self.inertia.to_f64(),
            "seed": self.seed,
            "iterations_run": self.iterations_run,
        })
    }
}

fn dist_sq<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y) * (x - y))
        .fold(T::zero(), |acc, d| acc + d)
}

/// Fit `k` clusters to the feature vectors.
pub fn kmeans<T: Real>(
    features: &FeatureSpace<T>,
    k: usize,
    seed: u64,
    params: KmeansParams<T>,
) -> Result<ClusterModel<T>, ClusterError> {
    let points = &features.features;
    let n = points.len();
    if n == 0 {
        return Err(ClusterError::EmptyFeatures);
    }
    if k == 0 || k > n {
        return Err(ClusterError::BadK { k, n });
    }

    let mut rng = SplitMix64::new(seed);
    let mut best: Option<LloydRun<T>> = None;
    for _ in 0..params.restarts.max(1) {
        let init = kmeanspp_init(points, k, &mut rng);
        let run = lloyd(points, init, &params);
        let better = match &best {
            None => true,
            Some(b) => run.inertia < b.inertia,
        };
        if better {
            best = Some(run);
        }
    }
    let run = best.expect("at least one restart");
    Ok(ClusterModel {
        k,
        centroids: run.centroids,
        assignments: run.assignments,
        inertia: run.inertia,
        seed,
        iterations_run: run.iterations,
        inertia_trace: run.trace,
    })
}

/// k-means++ seeding: first centroid uniform, subsequent ones drawn with
/// probability proportional to squared distance from the chosen set.
fn kmeanspp_init<T: Real>(points: &[Vec<T>], k: usize, rng: &mut SplitMix64) -> Vec<Vec<T>> {
    let n = points.len();
    let mut centroids: Vec<Vec<T>> = Vec::with_capacity(k);
    centroids.push(points[rng.below(n)].clone());
    let mut d2: Vec<T> = points
        .iter()
        .map(|p| dist_sq(p, &centroids[0]))
        .collect();
    while centroids.len() < k {
        let total: T = d2.iter().copied().sum();
        let idx = if total > T::zero() {
            let target = T::from_f64(rng.next_f64()) * total;
            let mut cum = T::zero();
            let mut chosen = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                cum += w;
                if cum > target {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            // all points coincide with a centroid already
            rng.below(n)
        };
        centroids.push(points[idx].clone());
        for (i, p) in points.iter().enumerate() {
            d2[i] = d2[i].min(dist_sq(p, centroids.last().unwrap()));
        }
    }
    centroids
}

struct LloydRun<T> {
    centroids: Vec<Vec<T>>,
    assignments: Vec<usize>,
    inertia: T,
    iterations: usize,
    trace: Vec<T>,
}

fn nearest<T: Real>(point: &[T], centroids: &[Vec<T>]) -> (usize, T) {
    let mut best = 0;
    let mut best_d = dist_sq(point, &centroids[0]);
    for (j, c) in centroids.iter().enumerate().skip(1) {
        let d = dist_sq(point, c);
        if d < best_d {
            best_d = d;
            best = j;
        }
    }
    (best, best_d)
}

fn assign_all<T: Real>(points: &[Vec<T>], centroids: &[Vec<T>]) -> (Vec<usize>, T) {
    let mut assignments = Vec::with_capacity(points.len());
    let mut inertia = T::zero();
    for p in points {
        let (j, d) = nearest(p, centroids);
        assignments.push(j);
        inertia += d;
    }
    (assignments, inertia)
}

/// Re-seed every empty cluster with the point farthest from its assigned
/// centroid. Points already promoted in this pass are skipped.
fn repair_empty<T: Real>(
    points: &[Vec<T>],
    centroids: &mut [Vec<T>],
    assignments: &mut [usize],
) {
    let k = centroids.len();
    let mut counts = vec![0usize; k];
    for &a in assignments.iter() {
        counts[a] += 1;
    }
    let mut promoted: Vec<usize> = Vec::new();
    for e in 0..k {
        if counts[e] > 0 {
            continue;
        }
        let mut far = usize::MAX;
        let mut far_d = T::neg_infinity();
        for (i, p) in points.iter().enumerate() {
            if promoted.contains(&i) || counts[assignments[i]] <= 1 {
                continue;
            }
            let d = dist_sq(p, &centroids[assignments[i]]);
            if d > far_d {
                far_d = d;
                far = i;
            }
        }
        if far == usize::MAX {
            continue;
        }
        counts[assignments[far]] -= 1;
        centroids[e] = points[far].clone();
        assignments[far] = e;
        counts[e] = 1;
        promoted.push(far);
    }
}

fn lloyd<T: Real>(points: &[Vec<T>], init: Vec<Vec<T>>, params: &KmeansParams<T>) -> LloydRun<T> {
    let k = init.len();
    let width = points[0].len();
    let mut centroids = init;
    let (mut assignments, inertia) = assign_all(points, &centroids);
    let mut trace = vec![inertia];
    repair_empty(points, &mut centroids, &mut assignments);
    let mut iterations = 1;

    while iterations < params.max_iter {
        // update step: centroids move to the means of their members
        let mut sums = vec![vec![T::zero(); width]; k];
        let mut counts = vec![0usize; k];
        for (p, &a) in points.iter().zip(assignments.iter()) {
            counts[a] += 1;
            for (s, &x) in sums[a].iter_mut().zip(p) {
                *s += x;
            }
        }
        let mut movement = T::zero();
        for j in 0..k {
            if counts[j] == 0 {
                continue;
            }
            let inv = T::one() / T::from_f64(counts[j] as f64);
            let new: Vec<T> = sums[j].iter().map(|&s| s * inv).collect();
            movement = movement.max(dist_sq(&new, &centroids[j]).sqrt());
            centroids[j] = new;
        }

        let (new_assignments, inertia) = assign_all(points, &centroids);
        iterations += 1;
        trace.push(inertia);
        let unchanged = new_assignments == assignments;
        assignments = new_assignments;
        repair_empty(points, &mut centroids, &mut assignments);
        if unchanged && movement <= params.tol {
            break;
        }
    }

    let (final_assignments, final_inertia) = assign_all(points, &centroids);
    LloydRun {
        centroids,
        assignments: final_assignments,
        inertia: final_inertia,
        iterations,
        trace,
    }
}

/// Index of the nearest centroid, ties broken toward the lower index.
pub fn classify<T: Real>(model: &ClusterModel<T>, feature: &[T]) -> Result<usize, ClusterError> {
    let expected = model.centroids[0].len();
    if feature.len() != expected {
        return Err(ClusterError::DimensionMismatch {
            got: feature.len(),
            expected,
        });
    }
    Ok(nearest(feature, &model.centroids).0)
}

/// Mean silhouette coefficient of a fitted model over its training
/// features, in [-1, 1]. Singleton clusters contribute 0 for their point.
pub fn silhouette_score<T: Real>(
    features: &FeatureSpace<T>,
    model: &ClusterModel<T>,
) -> Result<T, ClusterError> {
    let points = &features.features;
    let k = model.k;
    if k < 2 {
        return Err(ClusterError::SilhouetteNeedsTwo(k));
    }
    let mut counts = vec![0usize; k];
    for &a in &model.assignments {
        counts[a] += 1;
    }
    if let Some(j) = counts.iter().position(|&c| c == 0) {
        return Err(ClusterError::EmptyCluster(j));
    }
    if counts.iter().all(|&c| c == 1) {
        return Err(ClusterError::SingletonClusters);
    }

    let n = points.len();
    let mut total = T::zero();
    for i in 0..n {
        let own = model.assignments[i];
        if counts[own] == 1 {
            continue; // contributes 0
        }
        let mut sums = vec![T::zero(); k];
        for j in 0..n {
            if j == i {
                continue;
            }
            sums[model.assignments[j]] += dist_sq(&points[i], &points[j]).sqrt();
        }
        let a = sums[own] / T::from_f64((counts[own] - 1) as f64);
        let mut b = T::infinity();
        for c in 0..k {
            if c == own {
                continue;
            }
            b = b.min(sums[c] / T::from_f64(counts[c] as f64));
        }
        let denom = a.max(b);
        if denom > T::zero() {
            total += (b - a) / denom;
        }
    }
    Ok(total / T::from_f64(n as f64))
}
