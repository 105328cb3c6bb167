use super::qsums::{EulerianValues, QTable};
use crate::error::{domain, Error, Result};
use crate::model::{ModelParams, Regime};
use crate::specfun::LnFactorials;

/// Coefficients `theta_n` of the `alpha = lambda` series
/// `p(0,t) = sum_n d theta_n (-lambda t)^n / n!`.
///
/// For `n >= 2`
/// `theta_n = sum_{i=1}^{n-2} (d-1)^i sum_{j=1}^{n-i-1} C(i+1,j) Q_{j,j+n-i-1}
///            + A_n(mu/lambda) + (d-1)^{n-1}`,
/// and `theta_1 = 1`. Values are stored as `theta_n rho^n / n!` with the
/// natural scale `rho` of [`QTable`], so that series terms read
/// `theta_scaled(n) * (-lambda t / rho)^n`.
#[derive(Debug, Clone)]
pub struct ThetaCoefficients {
    d: u32,
    ratio: f64,
    scale: f64,
    lnfact: LnFactorials,
    theta: Vec<f64>,
    double_sum: Vec<f64>,
    eulerian: Vec<f64>,
}

/// Builds `theta_1..theta_{n_max}` for an `alpha = lambda` model.
pub fn theta_coefficients(params: &ModelParams, n_max: usize) -> Result<ThetaCoefficients> {
    if params.regime() != Regime::AlphaEqLambda {
        return Err(domain("theta_coefficients", "requires alpha = lambda != mu"));
    }
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let ratio = params.mu / params.lambda;
    let d = params.d;
    let m_max = (2 * n_max).saturating_sub(4).max(n_max).max(2);
    let values = EulerianValues::new(ratio, m_max)?;
    let q = QTable::from_values(&values, n_max.saturating_sub(2), m_max)?;
    let scale = values.scale();
    let ln_rho = scale.ln();
    let lnfact = LnFactorials::new(m_max + 2);
    let dm1 = d as f64 - 1.0;
    let ln_dm1 = dm1.ln();

    let mut theta = vec![0.0; n_max + 1];
    let mut double_sum = vec![0.0; n_max + 1];
    let mut eulerian = vec![0.0; n_max + 1];
    theta[1] = scale;
    for n in 1..=n_max {
        eulerian[n] = values.scaled(n);
    }
    for n in 2..=n_max {
        let mut tail = 0.0;
        if d > 1 {
            for i in 1..=n - 2 {
                for j in 1..=(n - i - 1).min(i + 1) {
                    let m = j + n - i - 1;
                    let lc = i as f64 * ln_dm1 + lnfact.ln_binomial(i + 1, j) + lnfact.get(n - i - 1 - j)
                        - lnfact.get(n)
                        + (i as f64 + 1.0 - j as f64) * ln_rho;
                    tail += lc.exp() * q.scaled(j, m);
                }
            }
        }
        double_sum[n] = tail;
        let power = if d > 1 {
            ((n as f64 - 1.0) * ln_dm1 + n as f64 * ln_rho - lnfact.get(n)).exp()
        } else {
            0.0
        };
        theta[n] = tail + eulerian[n] + power;
    }
    Ok(ThetaCoefficients {
        d,
        ratio,
        scale,
        lnfact,
        theta,
        double_sum,
        eulerian,
    })
}

impl ThetaCoefficients {
    pub fn d(&self) -> u32 {
        self.d
    }

    /// `mu / lambda`.
    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    /// Natural scale `rho`; the series converge for `lambda t < rho`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn n_max(&self) -> usize {
        self.theta.len() - 1
    }

    /// `theta_n rho^n / n!`.
    pub fn scaled(&self, n: usize) -> f64 {
        self.theta[n]
    }

    /// The double-sum part of `theta_n`, scaled like [`Self::scaled`].
    pub fn double_sum_scaled(&self, n: usize) -> f64 {
        self.double_sum[n]
    }

    /// `A_n(mu/lambda) rho^n / n!`.
    pub fn eulerian_scaled(&self, n: usize) -> f64 {
        self.eulerian[n]
    }

    /// `theta_n` itself (may overflow for large `n`).
    pub fn get(&self, n: usize) -> f64 {
        self.theta[n] * (self.lnfact.get(n) - n as f64 * self.scale.ln()).exp()
    }

    pub(crate) fn check_params(&self, params: &ModelParams, op: &'static str) -> Result<()> {
        if params.d != self.d || (params.mu / params.lambda - self.ratio).abs() > 1e-15 * self.ratio {
            return Err(domain(op, "coefficients were built for different parameters"));
        }
        Ok(())
    }
}
