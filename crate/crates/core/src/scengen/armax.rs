use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use super::{Result, ScenGenError};
use crate::domain::HOURS_PER_WEEK;

/// Seasonal period of the Fourier terms, in hours.
pub const SEASON: usize = HOURS_PER_WEEK;
/// Shortest history accepted by [`fit_armax`].
pub const MIN_HISTORY: usize = 4 * SEASON;
/// Roots of the AR polynomial must lie strictly outside this radius.
pub const ROOT_MARGIN: f64 = 1.001;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArmaxOrders {
    pub ar: usize,
    pub ma: usize,
    pub harmonics: usize,
}

impl Default for ArmaxOrders {
    fn default() -> Self {
        ArmaxOrders {
            ar: 2,
            ma: 1,
            harmonics: 3,
        }
    }
}

/// `y_t = c + z_t` with
/// `z_t = Σ φ_i z_{t-i} + Σ θ_j e_{t-j} + Σ (a_k cos + b_k sin)(2πk t/168) + e_t`.
///
/// `t` counts hours from the first fitted sample; simulations continue that
/// clock from the end of the history.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmaxModel {
    pub ar_coeffs: Vec<f64>,
    pub ma_coeffs: Vec<f64>,
    /// `(a_k, b_k)` for k = 1..=harmonics.
    pub fourier_coeffs: Vec<(f64, f64)>,
    pub intercept: f64,
    pub residual_std: f64,
    pub fit_window: usize,
    /// Standard errors in the order AR, MA, then `a_1, b_1, a_2, ...`.
    pub std_errors: Vec<f64>,
    /// Last `ar` centered observations, oldest first.
    pub(crate) tail_values: Vec<f64>,
    /// Last `ma` residuals, oldest first.
    pub(crate) tail_residuals: Vec<f64>,
}

fn fourier_row(t: usize, harmonics: usize, out: &mut Vec<f64>) {
    for k in 1..=harmonics {
        let w = 2.0 * PI * k as f64 * (t % SEASON) as f64 / SEASON as f64;
        out.push(w.cos());
        out.push(w.sin());
    }
}

struct Fit {
    coeffs: Vec<f64>,
    residuals: Vec<f64>,
    std_errors: Vec<f64>,
    sigma: f64,
}

fn least_squares(rows: Vec<Vec<f64>>, target: Vec<f64>) -> Fit {
    let n = rows.len();
    let k = rows.first().map_or(0, Vec::len);
    if k == 0 {
        let ssr: f64 = target.iter().map(|v| v * v).sum();
        return Fit {
            coeffs: Vec::new(),
            sigma: (ssr / n.max(1) as f64).sqrt(),
            residuals: target,
            std_errors: Vec::new(),
        };
    }
    let x = DMatrix::from_fn(n, k, |i, j| rows[i][j]);
    let y = DVector::from_vec(target);
    let svd = x.clone().svd(true, true);
    let scale = svd.singular_values.max().max(1.0);
    let beta = svd
        .solve(&y, 1e-10 * scale)
        .expect("SVD computed with both factors");
    let resid = &y - &x * &beta;
    let dof = n.saturating_sub(k).max(1);
    let ssr = resid.norm_squared();
    let sigma2 = ssr / dof as f64;
    let xtx = x.transpose() * &x;
    let inv = xtx
        .pseudo_inverse(1e-10 * scale * scale)
        .unwrap_or_else(|_| DMatrix::zeros(k, k));
    Fit {
        coeffs: beta.iter().copied().collect(),
        residuals: resid.iter().copied().collect(),
        std_errors: (0..k)
            .map(|i| (sigma2 * inv[(i, i)].max(0.0)).sqrt())
            .collect(),
        sigma: sigma2.sqrt(),
    }
}

/// Largest modulus of the companion matrix eigenvalues, i.e. the inverse
/// of the smallest AR polynomial root modulus.
fn max_inverse_root(ar: &[f64]) -> f64 {
    let p = ar.len();
    if p == 0 {
        return 0.0;
    }
    let mut c = DMatrix::<f64>::zeros(p, p);
    for (j, &phi) in ar.iter().enumerate() {
        c[(0, j)] = phi;
    }
    for i in 1..p {
        c[(i, i - 1)] = 1.0;
    }
    c.complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Hannan–Rissanen style conditional least squares on the centered series.
///
/// A long autoregression (with the Fourier terms) supplies residual
/// estimates; the final regression uses `ar` lags, `ma` lagged residuals and
/// the Fourier terms.
pub fn fit_armax(history: &[f64], orders: ArmaxOrders) -> Result<ArmaxModel> {
    let n = history.len();
    if n < MIN_HISTORY {
        return Err(ScenGenError::InsufficientData {
            needed: MIN_HISTORY,
            got: n,
        });
    }
    if history.iter().any(|v| !v.is_finite()) {
        return Err(ScenGenError::InsufficientData { needed: n, got: 0 });
    }
    let (p, q, h) = (orders.ar, orders.ma, orders.harmonics);
    let mean = history.iter().sum::<f64>() / n as f64;
    let z: Vec<f64> = history.iter().map(|v| v - mean).collect();

    let long = if q > 0 { (2 * (p + q)).max(8) } else { 0 };
    let mut e_hat = vec![0.0; n];
    if q > 0 {
        let mut rows = Vec::with_capacity(n - long);
        let mut target = Vec::with_capacity(n - long);
        for t in long..n {
            let mut row: Vec<f64> = (1..=long).map(|i| z[t - i]).collect();
            fourier_row(t, h, &mut row);
            rows.push(row);
            target.push(z[t]);
        }
        let stage1 = least_squares(rows, target);
        e_hat[long..].copy_from_slice(&stage1.residuals);
    }

    let start = (long + q).max(p);
    let mut rows = Vec::with_capacity(n - start);
    let mut target = Vec::with_capacity(n - start);
    for t in start..n {
        let mut row: Vec<f64> = Vec::with_capacity(p + q + 2 * h);
        row.extend((1..=p).map(|i| z[t - i]));
        row.extend((1..=q).map(|j| e_hat[t - j]));
        fourier_row(t, h, &mut row);
        rows.push(row);
        target.push(z[t]);
    }
    let fit = least_squares(rows, target);

    let ar_coeffs = fit.coeffs[..p].to_vec();
    let ma_coeffs = fit.coeffs[p..p + q].to_vec();
    let fourier_coeffs = fit.coeffs[p + q..]
        .chunks(2)
        .map(|c| (c[0], c[1]))
        .collect();

    let radius = max_inverse_root(&ar_coeffs);
    if radius >= 1.0 / ROOT_MARGIN {
        return Err(ScenGenError::NonStationary {
            min_root: if radius > 0.0 {
                1.0 / radius
            } else {
                f64::INFINITY
            },
        });
    }

    let resid = &fit.residuals;
    Ok(ArmaxModel {
        ar_coeffs,
        ma_coeffs,
        fourier_coeffs,
        intercept: mean,
        residual_std: fit.sigma,
        fit_window: n,
        std_errors: fit.std_errors,
        tail_values: z[n - p..].to_vec(),
        tail_residuals: resid[resid.len() - q.min(resid.len())..].to_vec(),
    })
}

impl ArmaxModel {
    fn seasonal(&self, t: usize) -> f64 {
        let phase = (t % SEASON) as f64 / SEASON as f64;
        self.fourier_coeffs
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| {
                let w = 2.0 * PI * (i + 1) as f64 * phase;
                a * w.cos() + b * w.sin()
            })
            .sum()
    }

    fn run(&self, horizon: usize, mut shock: impl FnMut() -> f64) -> Vec<f64> {
        let p = self.ar_coeffs.len();
        let q = self.ma_coeffs.len();
        let mut z = self.tail_values.clone();
        let mut e = self.tail_residuals.clone();
        // pad if the fit window was shorter than the orders
        while z.len() < p {
            z.insert(0, 0.0);
        }
        while e.len() < q {
            e.insert(0, 0.0);
        }
        let mut out = Vec::with_capacity(horizon);
        for step in 0..horizon {
            let t = self.fit_window + step;
            let mut v = self.seasonal(t);
            for i in 0..p {
                v += self.ar_coeffs[i] * z[z.len() - 1 - i];
            }
            for j in 0..q {
                v += self.ma_coeffs[j] * e[e.len() - 1 - j];
            }
            let eps = shock();
            v += eps;
            if p > 0 {
                z.remove(0);
                z.push(v);
            }
            if q > 0 {
                e.remove(0);
                e.push(eps);
            }
            out.push(v + self.intercept);
        }
        out
    }

    /// Conditional mean path (all future innovations zero).
    pub fn point_forecast(&self, horizon: usize) -> Vec<f64> {
        self.run(horizon, || 0.0)
    }

    /// One path with Gaussian innovations of `residual_std`.
    pub fn sample_path<R: Rng + ?Sized>(&self, horizon: usize, rng: &mut R) -> Vec<f64> {
        let sigma = self.residual_std;
        self.run(horizon, || {
            let g: f64 = rng.sample(StandardNormal);
            sigma * g
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| rng.sample::<f64, _>(StandardNormal))
            .collect()
    }

    #[test]
    fn white_noise_gives_insignificant_coefficients() {
        let y = noise(3000, 7);
        let m = fit_armax(&y, ArmaxOrders::default()).unwrap();
        let coeffs: Vec<f64> = m
            .ar_coeffs
            .iter()
            .chain(&m.ma_coeffs)
            .copied()
            .chain(m.fourier_coeffs.iter().flat_map(|&(a, b)| [a, b]))
            .collect();
        assert_eq!(coeffs.len(), m.std_errors.len());
        for (c, se) in coeffs.iter().zip(&m.std_errors) {
            assert!(c.abs() <= 3.0 * se, "{c} vs se {se}");
        }
        assert!((m.residual_std - 1.0).abs() < 0.05);
    }

    #[test]
    fn recovers_ar1() {
        let e = noise(5000, 11);
        let mut y = vec![0.0; 5000];
        for t in 1..5000 {
            y[t] = 0.8 * y[t - 1] + e[t];
        }
        let m = fit_armax(
            &y,
            ArmaxOrders {
                ar: 1,
                ma: 0,
                harmonics: 0,
            },
        )
        .unwrap();
        assert!((0.7..=0.9).contains(&m.ar_coeffs[0]), "{:?}", m.ar_coeffs);
    }

    #[test]
    fn constant_series() {
        let m = fit_armax(&[42.0; 1000], ArmaxOrders::default()).unwrap();
        assert!((m.intercept - 42.0).abs() < 1e-12);
        assert!(m.residual_std < 1e-9);
        assert!(m.point_forecast(10).iter().all(|v| (v - 42.0).abs() < 1e-9));
    }

    #[test]
    fn short_history_rejected() {
        assert!(matches!(
            fit_armax(&[1.0; 100], ArmaxOrders::default()),
            Err(ScenGenError::InsufficientData { .. })
        ));
    }

    #[test]
    fn explosive_series_rejected() {
        let e = noise(1000, 3);
        let mut y = vec![1.0; 1000];
        for t in 1..1000 {
            y[t] = 1.01 * y[t - 1] + 0.01 * e[t];
        }
        let r = fit_armax(
            &y,
            ArmaxOrders {
                ar: 1,
                ma: 0,
                harmonics: 0,
            },
        );
        assert!(
            matches!(r, Err(ScenGenError::NonStationary { .. })),
            "{r:?}"
        );
    }

    #[test]
    fn seasonal_shape_is_recovered() {
        let y: Vec<f64> = (0..1680)
            .map(|t| 10.0 + 3.0 * (2.0 * PI * (t % 168) as f64 / 168.0).cos())
            .collect();
        let m = fit_armax(
            &y,
            ArmaxOrders {
                ar: 0,
                ma: 0,
                harmonics: 1,
            },
        )
        .unwrap();
        let f = m.point_forecast(168);
        for (t, v) in f.iter().enumerate() {
            assert!((v - y[t]).abs() < 1e-8);
        }
    }

    #[test]
    fn companion_radius() {
        assert!((max_inverse_root(&[0.5]) - 0.5).abs() < 1e-12);
        // (1 - 0.5L)(1 - 0.4L) = 1 - 0.9L + 0.2L²
        assert!((max_inverse_root(&[0.9, -0.2]) - 0.5).abs() < 1e-9);
    }
}
