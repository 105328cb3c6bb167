use num_bigint::BigUint;

use super::exact::{dyadic, ln_ratio};
use crate::error::{Error, Result};
use crate::specfun::{EulerianRows, LnFactorials};

/// Natural scale `rho(r) = ln r / (r - 1)` (1 at `r = 1`).
///
/// `A_n(r) / n!` grows like `rho^{-n}`, so quantities are stored multiplied
/// by powers of `rho` to stay inside double range.
pub(crate) fn natural_scale(r: f64) -> f64 {
    if r == 1.0 {
        1.0
    } else {
        (r - 1.0).ln_1p() / (r - 1.0)
    }
}

/// `ln(A_s(r) / s!)` for `s = 0..=s_max`, from exact Eulerian rows evaluated
/// at the dyadic rational equal to `r`.
#[derive(Debug, Clone)]
pub struct EulerianValues {
    ratio: f64,
    scale: f64,
    ln_over_fact: Vec<f64>,
}

impl EulerianValues {
    pub fn new(ratio: f64, s_max: usize) -> Result<Self> {
        if !(ratio > 0.0 && ratio.is_finite()) {
            return Err(Error::InvalidParameter(format!("ratio must be positive, got {ratio}")));
        }
        let (p, e) = dyadic(ratio);
        let mut fact = BigUint::from(1u32);
        let mut out = Vec::with_capacity(s_max + 1);
        for (s, row) in EulerianRows::new().take(s_max + 1).enumerate() {
            if s > 0 {
                fact *= s as u64;
            }
            let deg = row.len() - 1;
            let mut acc = row[deg].clone();
            for k in (0..deg).rev() {
                acc = acc * &p + (&row[k] << (e * (deg - k)));
            }
            out.push(ln_ratio(&acc, &(&fact << (e * deg))));
        }
        Ok(EulerianValues {
            ratio,
            scale: natural_scale(ratio),
            ln_over_fact: out,
        })
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn s_max(&self) -> usize {
        self.ln_over_fact.len() - 1
    }

    /// `ln(A_s(r) / s!)`.
    pub fn ln_over_factorial(&self, s: usize) -> f64 {
        self.ln_over_fact[s]
    }

    /// `A_s(r) rho^s / s!`.
    pub fn scaled(&self, s: usize) -> f64 {
        (self.ln_over_fact[s] + s as f64 * self.scale.ln()).exp()
    }
}

/// Composition sums `Q_{j,m} = sum over compositions (s_1..s_j) of m with
/// parts >= 2 of prod A_{s_i}(r)`.
///
/// Entries are stored as `Q_{j,m} rho^m / (m-2j)!`, which stays of moderate
/// size over the whole table.
#[derive(Debug, Clone)]
pub struct QTable {
    ratio: f64,
    scale: f64,
    m_max: usize,
    lnfact: LnFactorials,
    scaled: Vec<Vec<f64>>,
}

/// Builds `Q_{j,m}` for `j <= j_max`, `m <= m_max` at `r = ratio`.
pub fn q_table(ratio: f64, j_max: usize, m_max: usize) -> Result<QTable> {
    let values = EulerianValues::new(ratio, m_max.max(2))?;
    QTable::from_values(&values, j_max, m_max)
}

impl QTable {
    pub fn from_values(values: &EulerianValues, j_max: usize, m_max: usize) -> Result<Self> {
        if values.s_max() < m_max {
            return Err(Error::InvalidParameter(format!(
                "Eulerian values reach s = {} but m_max = {m_max}",
                values.s_max()
            )));
        }
        let lnfact = LnFactorials::new(m_max.max(2));
        let ln_rho = values.scale().ln();
        // A_s rho^s / (s-2)!
        let mut a = vec![0.0; m_max + 1];
        for (s, v) in a.iter_mut().enumerate().skip(2) {
            *v = (values.ln_over_factorial(s) + lnfact.get(s) - lnfact.get(s - 2) + s as f64 * ln_rho).exp();
        }
        let inv_binom: Vec<Vec<f64>> = (0..=m_max)
            .map(|big| (0..=big).map(|k| (-lnfact.ln_binomial(big, k)).exp()).collect())
            .collect();
        let mut scaled = vec![vec![0.0; m_max + 1]; j_max + 1];
        scaled[0][0] = 1.0;
        for j in 1..=j_max {
            for m in 2 * j..=m_max {
                let big = m - 2 * j;
                let prev = &scaled[j - 1];
                let mut acc = 0.0;
                for s in 0..=big {
                    acc += prev[m - s - 2] * a[s + 2] * inv_binom[big][s];
                }
                scaled[j][m] = acc;
            }
        }
        Ok(QTable {
            ratio: values.ratio(),
            scale: values.scale(),
            m_max,
            lnfact,
            scaled,
        })
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn j_max(&self) -> usize {
        self.scaled.len() - 1
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    /// `Q_{j,m} rho^m / (m-2j)!`, zero when `m < 2j`.
    pub fn scaled(&self, j: usize, m: usize) -> f64 {
        if m < 2 * j {
            0.0
        } else {
            self.scaled[j][m]
        }
    }

    /// `Q_{j,m}` itself (may overflow to infinity for large `m`).
    pub fn get(&self, j: usize, m: usize) -> f64 {
        if m < 2 * j {
            return 0.0;
        }
        self.scaled[j][m] * (self.lnfact.get(m - 2 * j) - m as f64 * self.scale.ln()).exp()
    }
}
