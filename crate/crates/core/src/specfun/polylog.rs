use super::series::{SeriesControl, SeriesSum};
use crate::error::{domain, Error, Result};

/// Polylogarithm `Li_k(z) = sum_{j>=1} z^j / j^k`.
///
/// `k = 0` and `k = 1` use the closed forms `z/(1-z)` and `-ln(1-z)`, valid
/// for every `z < 1`; higher orders require `|z| < 1`.
pub fn polylog(k: u32, z: f64, ctl: SeriesControl) -> Result<f64> {
    const OP: &str = "polylog";
    if !z.is_finite() {
        return Err(domain(OP, "non-finite argument"));
    }
    match k {
        0 if z < 1.0 => return Ok(z / (1.0 - z)),
        1 if z < 1.0 => return Ok(-(-z).ln_1p()),
        0 | 1 => return Err(domain(OP, format!("z = {z} >= 1"))),
        _ => {}
    }
    if z.abs() >= 1.0 {
        return Err(domain(OP, format!("|z| = {} >= 1", z.abs())));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let mut s = SeriesSum::new(ctl);
    let mut zp = z;
    let mut j = 1u64;
    loop {
        let term = zp / (j as f64).powi(k as i32);
        // Terms decay at least geometrically, so the neglected tail is
        // bounded by `|term| |z| / (1 - |z|)`.
        if s.add(term) && term.abs() * z.abs() / (1.0 - z.abs()) <= ctl.rel_tol() * s.value().abs() {
            return Ok(s.value());
        }
        if s.exhausted() {
            return Err(Error::NonConvergence {
                op: OP,
                terms: s.terms(),
            });
        }
        zp *= z;
        j += 1;
    }
}
