//! Deterministic synthetic instances: Gaussian blobs for coordinate mode and
//! shortest-path closures of random graphs for explicit-matrix mode.

use crate::dataset::{Dataset, Point};
use crate::rng::substream;
use rand::Rng;
use rand_distr::{Distribution, Normal};

#[derive(Debug, Clone)]
pub struct BlobConfig {
    pub n: usize,
    pub m: usize,
    pub dims: usize,
    pub clusters: usize,
    pub spread: f64,
    pub seed: u64,
}

/// Gaussian blobs. Cluster centers are drawn uniformly from a cube scaled to
/// keep blobs roughly separated; groups are assigned round-robin so every
/// group is populated.
pub fn blobs(cfg: &BlobConfig) -> Dataset {
    assert!(cfg.n >= 1 && cfg.m >= 1 && cfg.dims >= 1 && cfg.clusters >= 1);
    let mut rng = substream(cfg.seed, "synth-blobs", 0);
    let side = 10.0 * cfg.spread * cfg.clusters as f64;
    let centers: Vec<Vec<f64>> = (0..cfg.clusters)
        .map(|_| (0..cfg.dims).map(|_| rng.random_range(0.0..side)).collect())
        .collect();
    let noise = Normal::new(0.0, cfg.spread).unwrap();
    let points = (0..cfg.n)
        .map(|i| {
            let c = &centers[rng.random_range(0..cfg.clusters)];
            let coords = c.iter().map(|&x| x + noise.sample(&mut rng)).collect();
            Point {
                id: format!("p{}", i + 1),
                group: i % cfg.m,
                coords: Some(coords),
            }
        })
        .collect();
    Dataset::euclidean(points, cfg.m).expect("generated blobs are well-formed")
}

#[derive(Debug, Clone)]
pub struct MetricConfig {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
}

/// Random metric: complete-graph edge weights from U[1, 3], then the
/// Floyd-Warshall closure, which forces the triangle inequality.
pub fn random_metric(cfg: &MetricConfig) -> Dataset {
    assert!(cfg.n >= 1 && cfg.m >= 1);
    let mut rng = substream(cfg.seed, "synth-metric", 0);
    let n = cfg.n;
    let mut d = vec![0.0f64; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let w = rng.random_range(1.0..3.0);
            d[i * n + j] = w;
            d[j * n + i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i * n + k] + d[k * n + j];
                if via < d[i * n + j] {
                    d[i * n + j] = via;
                }
            }
        }
    }
    let points = (0..n)
        .map(|i| Point {
            id: format!("p{}", i + 1),
            group: i % cfg.m,
            coords: None,
        })
        .collect();
    Dataset::from_matrix(points, d, cfg.m).expect("closure is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{validate, FairnessSpec};

    #[test]
    fn blobs_are_deterministic() {
        let cfg = BlobConfig { n: 12, m: 3, dims: 2, clusters: 3, spread: 0.5, seed: 9 };
        let a = blobs(&cfg);
        let b = blobs(&cfg);
        for i in 0..a.n() {
            assert_eq!(a.point(i).coords, b.point(i).coords);
        }
    }

    #[test]
    fn random_metric_passes_validation() {
        let ds = random_metric(&MetricConfig { n: 15, m: 3, seed: 4 });
        let spec = FairnessSpec::new(vec![1, 1, 1]).unwrap();
        let report = validate(&ds, &spec);
        assert!(report.is_clean(), "{:?}", report.violations);
        assert!(report.triangle_checked);
    }
}
