use super::quadrature::integrate;
use crate::error::{domain, Result};

/// Generalized exponential integral `E(nu, z) = int_1^inf e^{-z t} t^{-nu} dt`.
///
/// Evaluated as `int_0^1 e^{-z/u} u^{nu-2} du`, which has a bounded integrand
/// for `z > 0`.
pub fn gen_exp_integral(nu: f64, z: f64) -> Result<f64> {
    if !(z > 0.0 && z.is_finite() && nu.is_finite()) {
        return Err(domain(
            "gen_exp_integral",
            format!("need z > 0, got z = {z}, nu = {nu}"),
        ));
    }
    let f = |u: f64| {
        if u <= 0.0 {
            0.0
        } else {
            (-z / u + (nu - 2.0) * u.ln()).exp()
        }
    };
    Ok(integrate(f, 0.0, 1.0, 1e-300, 1e-14, 4000)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Composite Simpson on the original half-line integral.
    fn simpson_oracle(nu: f64, z: f64) -> f64 {
        let upper = 1.0 + 60.0 / z;
        let n = 400_000;
        let h = (upper - 1.0) / n as f64;
        let f = |t: f64| (-z * t).exp() * t.powf(-nu);
        let mut s = f(1.0) + f(upper);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(1.0 + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn second_order_at_one() {
        let v = gen_exp_integral(2.0, 1.0).unwrap();
        assert_relative_eq!(v, simpson_oracle(2.0, 1.0), max_relative = 1e-10);
        assert_relative_eq!(v, 0.148_495_506_775_922_05, max_relative = 1e-12);
    }

    #[test]
    fn first_order_matches_e1() {
        // E1(1) = 0.21938393439552027...
        assert_relative_eq!(
            gen_exp_integral(1.0, 1.0).unwrap(),
            0.219_383_934_395_520_27,
            max_relative = 1e-12
        );
    }

    #[test]
    fn recurrence() {
        for &nu in &[2.0, 3.0, 1.5] {
            for &z in &[0.1, 1.0, 5.0] {
                let lhs = gen_exp_integral(nu, z).unwrap();
                let rhs = ((-z).exp() - z * gen_exp_integral(nu - 1.0, z).unwrap()) / (nu - 1.0);
                assert_relative_eq!(lhs, rhs, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn rejects_nonpositive_z() {
        assert!(gen_exp_integral(2.0, 0.0).is_err());
    }
}
