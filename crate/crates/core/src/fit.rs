//! Least-squares fits of densities to histograms.
//!
//! The right-skewed spectral distributions are fit with a log-normal density
//! displaced along the x axis,
//!
//! ```text
//! f(x) = 1 / ((x + β) σ √(2π)) · exp(−(ln(x + β) − μ)² / (2σ²)),   x + β > 0
//! ```
//!
//! and zero for x + β ≤ 0. The curve is evaluated at bin centers and the
//! squared residuals against the bin densities are minimized with
//! Nelder–Mead.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::Histogram;

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

/// Shifted log-normal density at `x`.
pub fn shifted_lognormal_pdf(x: f64, sigma: f64, mu: f64, beta: f64) -> f64 {
    let y = x + beta;
    if y <= 0.0 || sigma <= 0.0 {
        return 0.0;
    }
    let z = (y.ln() - mu) / sigma;
    (-0.5 * z * z).exp() / (y * sigma * SQRT_2PI)
}

/// Normal density with the given mean and standard deviation.
pub fn gaussian_pdf(x: f64, mean: f64, std: f64) -> f64 {
    if std <= 0.0 {
        return 0.0;
    }
    let z = (x - mean) / std;
    (-0.5 * z * z).exp() / (std * SQRT_2PI)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogNormalFit {
    pub sigma: f64,
    pub mu: f64,
    pub beta: f64,
    pub sse: f64,
}

impl LogNormalFit {
    /// Mean of the unshifted log-normal, exp(μ + σ²/2). A fit of standardized
    /// data should have this close to β.
    pub fn lognormal_mean(&self) -> f64 {
        (self.mu + 0.5 * self.sigma * self.sigma).exp()
    }

    /// Variance of the log-normal, (exp(σ²) − 1) exp(2μ + σ²); close to 1
    /// for standardized data.
    pub fn lognormal_variance(&self) -> f64 {
        let s2 = self.sigma * self.sigma;
        s2.exp_m1() * (2.0 * self.mu + s2).exp()
    }

    /// exp(μ + σ²/2) within 5% of β.
    pub fn is_mean_consistent(&self) -> bool {
        (self.lognormal_mean() - self.beta).abs() <= 0.05 * self.beta.abs()
    }

    /// Log-normal variance within 15% of one.
    pub fn is_variance_consistent(&self) -> bool {
        (self.lognormal_variance() - 1.0).abs() <= 0.15
    }

    pub fn is_moment_consistent(&self) -> bool {
        self.is_mean_consistent() && self.is_variance_consistent()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalFit {
    pub mean: f64,
    pub std: f64,
    pub sse: f64,
}

/// Settings for [`nelder_mead`].
#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub max_iterations: usize,
    /// Stop once the spread of simplex values falls below this.
    pub f_tol: f64,
    /// ...and the simplex diameter falls below this.
    pub x_tol: f64,
    /// Initial step along each coordinate, relative to the coordinate
    /// (absolute when the coordinate is zero).
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_iterations: 20_000,
            f_tol: 1e-16,
            x_tol: 1e-10,
            initial_step: 0.05,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Nelder–Mead simplex minimization with standard coefficients
/// (reflection 1, expansion 2, contraction ½, shrink ½).
pub fn nelder_mead<F>(f: F, start: &[f64], opts: NelderMeadOptions) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let dim = start.len();
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut simplex: Vec<Vec<f64>> = vec![start.to_vec()];
    for i in 0..dim {
        let mut p = start.to_vec();
        p[i] += if p[i] != 0.0 { opts.initial_step * p[i] } else { opts.initial_step };
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| eval(p)).collect();

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iterations {
        iterations += 1;
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[dim] - values[0];
        let diameter = simplex[1..]
            .iter()
            .map(|p| p.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if spread.abs() <= opts.f_tol && diameter <= opts.x_tol {
            converged = true;
            break;
        }

        let centroid: Vec<f64> = (0..dim)
            .map(|k| simplex[..dim].iter().map(|p| p[k]).sum::<f64>() / dim as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[dim])
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };

        let reflected = along(-1.0);
        let fr = eval(&reflected);
        if fr < values[0] {
            let expanded = along(-2.0);
            let fe = eval(&expanded);
            if fe < fr {
                simplex[dim] = expanded;
                values[dim] = fe;
            } else {
                simplex[dim] = reflected;
                values[dim] = fr;
            }
            continue;
        }
        if fr < values[dim - 1] {
            simplex[dim] = reflected;
            values[dim] = fr;
            continue;
        }
        let (contracted, fc) = if fr < values[dim] {
            let c = along(-0.5);
            let v = eval(&c);
            (c, v)
        } else {
            let c = along(0.5);
            let v = eval(&c);
            (c, v)
        };
        if fc < values[dim].min(fr) {
            simplex[dim] = contracted;
            values[dim] = fc;
            continue;
        }
        let best = simplex[0].clone();
        for i in 1..=dim {
            simplex[i] = simplex[i].iter().zip(&best).map(|(p, b)| b + 0.5 * (p - b)).collect();
            values[i] = eval(&simplex[i]);
        }
    }
    let best = (0..=dim).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
    Minimum {
        x: simplex[best].clone(),
        value: values[best],
        iterations,
        converged,
    }
}

/// Runs Nelder–Mead, then restarts from the result until the minimum stops
/// improving. Restarting rebuilds a fresh simplex, which gets the method out
/// of collapsed simplices.
fn minimize_with_restarts<F>(f: F, start: &[f64], opts: NelderMeadOptions) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let mut best = nelder_mead(&f, start, opts);
    let mut total = best.iterations;
    for _ in 0..8 {
        let next = nelder_mead(&f, &best.x, opts);
        total += next.iterations;
        let improved = next.value < best.value * (1.0 - 1e-12) || (best.value > 0.0 && next.value == 0.0);
        let done = next.converged && !improved;
        if next.value <= best.value {
            best = next;
        }
        if done {
            best.converged = true;
            break;
        }
    }
    best.iterations = total;
    best
}

/// Moment-matched starting point for standardized data: with σ fixed, solve
/// (e^{σ²} − 1) e^{2μ + σ²} = 1 for μ and set β = e^{μ + σ²/2}.
pub fn moment_matched_start(sigma: f64) -> (f64, f64) {
    let s2 = sigma * sigma;
    let mu = 0.5 * (-s2.exp_m1().ln() - s2);
    let beta = (mu + 0.5 * s2).exp();
    (mu, beta)
}

/// Initial σ of the fit.
pub const INITIAL_SIGMA: f64 = 0.3;

fn lognormal_sse(centers: &[f64], density: &[f64], p: &[f64]) -> f64 {
    let (sigma, mu, beta) = (p[0], p[1], p[2]);
    if !(sigma > 0.0) {
        return f64::INFINITY;
    }
    centers
        .iter()
        .zip(density)
        .map(|(&x, &d)| (shifted_lognormal_pdf(x, sigma, mu, beta) - d).powi(2))
        .sum()
}

/// Least-squares fit of the shifted log-normal density to a histogram.
pub fn fit_shifted_lognormal(h: &Histogram) -> Result<LogNormalFit> {
    let centers = h.centers();
    let (mu0, beta0) = moment_matched_start(INITIAL_SIGMA);
    let m = minimize_with_restarts(
        |p| lognormal_sse(&centers, &h.density, p),
        &[INITIAL_SIGMA, mu0, beta0],
        NelderMeadOptions::default(),
    );
    let fit = LogNormalFit {
        sigma: m.x[0],
        mu: m.x[1],
        beta: m.x[2],
        sse: m.value,
    };
    if !m.converged || !fit.sse.is_finite() {
        return Err(Error::FitNotConverged {
            iterations: m.iterations,
            sigma: fit.sigma,
            mu: fit.mu,
            beta: fit.beta,
            sse: fit.sse,
        });
    }
    Ok(fit)
}

/// Least-squares fit of a normal density (free mean and deviation) to a
/// histogram, starting from the standard normal.
pub fn fit_normal(h: &Histogram) -> Result<NormalFit> {
    let centers = h.centers();
    let sse = |p: &[f64]| -> f64 {
        if !(p[1] > 0.0) {
            return f64::INFINITY;
        }
        centers
            .iter()
            .zip(&h.density)
            .map(|(&x, &d)| (gaussian_pdf(x, p[0], p[1]) - d).powi(2))
            .sum()
    };
    let m = minimize_with_restarts(sse, &[0.0, 1.0], NelderMeadOptions::default());
    if !m.converged {
        return Err(Error::Parameter(format!(
            "normal fit did not converge after {} iterations",
            m.iterations
        )));
    }
    Ok(NormalFit {
        mean: m.x[0],
        std: m.x[1],
        sse: m.value,
    })
}
