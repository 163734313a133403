use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{mix_seed, ArmaxModel};

/// Number of Monte Carlo paths drawn per forecast.
pub const DEFAULT_PATHS: usize = 2500;

/// Equally likely simulated trajectories of one quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct PathBundle {
    paths: Vec<Vec<f64>>,
    seed: u64,
}

impl PathBundle {
    pub fn from_paths(paths: Vec<Vec<f64>>, seed: u64) -> Self {
        assert!(!paths.is_empty(), "a bundle needs at least one path");
        let len = paths[0].len();
        assert!(
            paths.iter().all(|p| p.len() == len),
            "paths differ in length"
        );
        PathBundle { paths, seed }
    }

    pub fn paths(&self) -> &[Vec<f64>] {
        &self.paths
    }

    pub fn n_paths(&self) -> usize {
        self.paths.len()
    }

    pub fn horizon(&self) -> usize {
        self.paths[0].len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn clip_at_zero(mut self) -> Self {
        for p in &mut self.paths {
            for v in p.iter_mut() {
                *v = v.max(0.0);
            }
        }
        self
    }

    pub fn mean(&self) -> Vec<f64> {
        let n = self.n_paths() as f64;
        (0..self.horizon())
            .map(|t| self.paths.iter().map(|p| p[t]).sum::<f64>() / n)
            .collect()
    }
}

/// Path `i` draws from its own generator seeded by `(seed, i)`, so the
/// bundle does not depend on thread scheduling.
pub fn simulate_paths(model: &ArmaxModel, horizon: usize, n_paths: usize, seed: u64) -> PathBundle {
    assert!(horizon >= 1 && n_paths >= 1);
    let paths = (0..n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, i as u64));
            model.sample_path(horizon, &mut rng)
        })
        .collect();
    PathBundle { paths, seed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scengen::{fit_armax, ArmaxOrders};

    fn model(sigma: f64) -> ArmaxModel {
        ArmaxModel {
            ar_coeffs: vec![0.3],
            ma_coeffs: vec![0.2],
            fourier_coeffs: vec![(1.0, -0.5)],
            intercept: 5.0,
            residual_std: sigma,
            fit_window: 700,
            std_errors: vec![0.0; 4],
            tail_values: vec![0.7],
            tail_residuals: vec![0.1],
        }
    }

    #[test]
    fn zero_noise_matches_forecast() {
        let m = model(0.0);
        let b = simulate_paths(&m, 48, 20, 1);
        let f = m.point_forecast(48);
        assert!(b.paths().iter().all(|p| p == &f));
    }

    #[test]
    fn default_path_count() {
        let m = fit_armax(&[3.0; 700], ArmaxOrders::default()).unwrap();
        assert_eq!(simulate_paths(&m, 2, DEFAULT_PATHS, 0).n_paths(), 2500);
    }

    #[test]
    fn seeded_runs_are_identical() {
        let m = model(1.0);
        assert_eq!(simulate_paths(&m, 30, 50, 9), simulate_paths(&m, 30, 50, 9));
        assert_ne!(
            simulate_paths(&m, 30, 50, 9),
            simulate_paths(&m, 30, 50, 10)
        );
    }

    #[test]
    fn sample_mean_tracks_forecast() {
        let m = model(2.0);
        let n = 4000;
        let b = simulate_paths(&m, 24, n, 5);
        let f = m.point_forecast(24);
        let tol = 4.0 * m.residual_std / (n as f64).sqrt();
        for (mu, fc) in b.mean().iter().zip(&f) {
            assert!((mu - fc).abs() <= tol, "{mu} vs {fc}");
        }
    }

    #[test]
    fn clipping() {
        let b = PathBundle::from_paths(vec![vec![-1.0, 2.0]], 0).clip_at_zero();
        assert_eq!(b.paths()[0], vec![0.0, 2.0]);
    }
}
