use super::law::Estimate;
use super::renewal::pk_renewal;
use crate::combinatorics::ThetaCoefficients;
use crate::error::{domain, Error, Result};
use crate::model::{ModelParams, Regime};
use crate::specfun::{exp_remainder_ratios, hyp2f1_terminating, polylog, SeriesControl, SeriesSum};

/// Convergence limit in `t` of the `alpha = lambda` series,
/// `ln(mu/lambda) / (mu - lambda)`.
pub fn series_radius(params: &ModelParams) -> f64 {
    (params.mu / params.lambda).ln() / (params.mu - params.lambda)
}

fn check(params: &ModelParams, t: f64, theta: &ThetaCoefficients, op: &'static str) -> Result<f64> {
    if params.regime() != Regime::AlphaEqLambda {
        return Err(domain(op, "requires alpha = lambda != mu"));
    }
    theta.check_params(params, op)?;
    let x = params.lambda * t;
    if !(x >= 0.0 && x < theta.scale()) {
        return Err(domain(op, format!("t = {t} outside [0, {})", series_radius(params))));
    }
    Ok(x)
}

/// `sum_{n>=start} (-x/rho)^n c(n)` up to the table length.
fn run_series(
    ctl: SeriesControl,
    op: &'static str,
    start: usize,
    theta: &ThetaCoefficients,
    x: f64,
    mut coeff: impl FnMut(usize) -> f64,
) -> Result<Estimate> {
    let q = -x / theta.scale();
    let n_max = theta.n_max();
    if n_max < start {
        return Ok(Estimate::exact(0.0));
    }
    let ctl = ctl.with_max_terms(ctl.max_terms().min(n_max + 1 - start));
    let mut s = SeriesSum::new(ctl);
    let mut pw = q.powi(start as i32);
    let mut n = start;
    loop {
        if s.add(pw * coeff(n)) {
            let o = s.outcome();
            let r = q.abs();
            return Ok(Estimate {
                value: o.value,
                trunc_order: n,
                tail_bound: o.tail * r / (1.0 - r),
            });
        }
        if s.exhausted() {
            return Err(Error::NonConvergence { op, terms: s.terms() });
        }
        pw *= q;
        n += 1;
    }
}

/// `p(0,t)` for `alpha = lambda != mu` and `t` below [`series_radius`]:
/// `1 - d [1 - (mu-lambda)/(mu - lambda e^{-(mu-lambda)t})
///         - (e^{-x(d-1)} - 1 + x(d-1))/(d-1) - sum_{n>=3} (-x)^n/n! theta'_n]`
/// with `x = lambda t` and `theta'_n` the double-sum part of `theta_n`.
pub fn series_p0_alpha_eq_lambda(
    params: &ModelParams,
    t: f64,
    theta: &ThetaCoefficients,
    ctl: SeriesControl,
) -> Result<Estimate> {
    const OP: &str = "series_p0_alpha_eq_lambda";
    let x = check(params, t, theta, OP)?;
    let (l, m) = (params.lambda, params.mu);
    let d = params.d as f64;
    let b1 = 1.0 - (m - l) / (m - l * (-(m - l) * t).exp());
    let b2 = if params.d == 1 {
        0.0
    } else {
        ((-x * (d - 1.0)).exp_m1() + x * (d - 1.0)) / (d - 1.0)
    };
    let tail = if params.d == 1 {
        Estimate::exact(0.0)
    } else {
        run_series(ctl, OP, 3, theta, x, |n| theta.double_sum_scaled(n))?
    };
    Ok(Estimate {
        value: 1.0 - d * (b1 - b2 - tail.value),
        trunc_order: tail.trunc_order,
        tail_bound: d * tail.tail_bound,
    })
}

/// `sum_i f_i phi_n(u_i)` for `n = 0..=n_max`, and the same sums with each
/// `f_i` replaced by `|f_i|` plus its own rounding error.
fn inner_sums_abs(factors: &[Factor], n_max: usize) -> (Vec<f64>, Vec<f64>) {
    let mut acc = vec![0.0; n_max + 1];
    let mut abs = vec![0.0; n_max + 1];
    for &(f, u, err) in factors {
        let phi = exp_remainder_ratios(n_max, u);
        for n in 0..=n_max {
            acc[n] += f * phi[n];
            abs[n] += (f.abs() + err / (8.0 * f64::EPSILON)) * phi[n].abs();
        }
    }
    (acc, abs)
}

#[cfg(test)]
fn inner_sums(factors: &[Factor], n_max: usize) -> Vec<f64> {
    inner_sums_abs(factors, n_max).0
}

/// Rounding error of `pre * sum_{n>=1} (-x/rho)^n theta_n inner_n`, from the
/// magnitudes of everything summed.
fn rounding_bound(theta: &ThetaCoefficients, x: f64, abs: &[f64], upto: usize) -> f64 {
    let q = x / theta.scale();
    let mut pw = 1.0;
    let mut s = 0.0;
    for n in 1..=upto.min(theta.n_max()) {
        pw *= q;
        s += pw * theta.scaled(n).abs() * abs[n];
    }
    8.0 * f64::EPSILON * s
}

/// Relative accuracy below which the closed series hands over to [`pk_renewal`].
const SERIES_REL_ACCURACY: f64 = 1e-9;

fn trustworthy(value: f64, rounding: f64) -> bool {
    rounding <= SERIES_REL_ACCURACY * value.abs() && (0.0..=1.0).contains(&value)
}

/// `P(k,t)` for `alpha = lambda != mu`, `t` below [`series_radius`].
///
/// Written out directly, the `n`-series separates into pieces that
/// diverge individually; they are summed here term by term, which gives
/// for `mu > lambda`, with `tau = (mu-lambda)t` and
/// `F_l = 2F1(-l, k+1; 1; 1 - lambda/mu)`,
/// `P = d(mu-lambda) lambda^k (1-e^{-tau})^k / (mu - lambda e^{-tau})^{k+1}
///      - (lambda^k/mu^{k+1}) d(d-1)(lambda-mu) sum_{n>=1} (-x)^n theta_n/n! sum_{l>=0} F_l phi_n(l tau)`,
/// and the analogous expression over `s >= 1` for `mu < lambda`.
///
/// All rays share the origin, so `k = 0` returns `p(0,t)`.
///
/// For large `k` the `l`-sums cancel to far below their terms; once the
/// rounding error would exceed a relative 1e-9, or the `n`-series outruns
/// the coefficient table, the value comes instead from [`pk_renewal`] fed
/// with the series `p(0,.)`.
pub fn pk_alpha_eq_lambda(
    params: &ModelParams,
    k: usize,
    t: f64,
    theta: &ThetaCoefficients,
    ctl: SeriesControl,
) -> Result<Estimate> {
    const OP: &str = "pk_alpha_eq_lambda";
    if k == 0 {
        return series_p0_alpha_eq_lambda(params, t, theta, ctl);
    }
    let x = check(params, t, theta, OP)?;
    if x == 0.0 {
        return Ok(Estimate::exact(0.0));
    }
    let (l, m) = (params.lambda, params.mu);
    let d = params.d as f64;
    let kf = k as f64;
    let n_max = theta.n_max();
    if m > l {
        let tau = (m - l) * t;
        let e = (-tau).exp();
        let lead = d * (m - l) * (l * (1.0 - e) / (m - l * e)).powf(kf) / (m - l * e);
        if params.d == 1 {
            return Ok(Estimate::exact(lead));
        }
        let factors = factors_from(0, k, 1.0 - l / m, tau)?;
        let (inner, abs) = inner_sums_abs(&factors, n_max);
        let Ok(s) = run_series(ctl, OP, 1, theta, x, |n| theta.scaled(n) * inner[n]) else {
            return renewal_fallback(params, k, t, theta, ctl);
        };
        let pre = (l / m).powf(kf) / m * d * (d - 1.0) * (l - m);
        let value = lead - pre * s.value;
        if !trustworthy(value, pre.abs() * rounding_bound(theta, x, &abs, s.trunc_order)) {
            return renewal_fallback(params, k, t, theta, ctl);
        }
        Ok(Estimate {
            value,
            trunc_order: s.trunc_order,
            tail_bound: pre.abs() * s.tail_bound,
        })
    } else {
        let sigma = l - m;
        let e = (-sigma * t).exp();
        let lead = d * sigma * e * (l * (1.0 - e) / (l - m * e)).powf(kf) / (l - m * e);
        if params.d == 1 {
            return Ok(Estimate::exact(lead));
        }
        let factors = factors_from(1, k, 1.0 - m / l, sigma * t)?;
        let (inner, abs) = inner_sums_abs(&factors, n_max);
        let Ok(s) = run_series(ctl, OP, 1, theta, x, |n| theta.scaled(n) * inner[n]) else {
            return renewal_fallback(params, k, t, theta, ctl);
        };
        let pre = d * (d - 1.0) * sigma / l;
        let value = lead + pre * s.value;
        if !trustworthy(value, pre * rounding_bound(theta, x, &abs, s.trunc_order)) {
            return renewal_fallback(params, k, t, theta, ctl);
        }
        Ok(Estimate {
            value,
            trunc_order: s.trunc_order,
            tail_bound: pre * s.tail_bound,
        })
    }
}

fn renewal_fallback(
    params: &ModelParams,
    k: usize,
    t: f64,
    theta: &ThetaCoefficients,
    ctl: SeriesControl,
) -> Result<Estimate> {
    pk_renewal(params, k, t, |y| {
        series_p0_alpha_eq_lambda(params, y, theta, ctl).map(|e| e.value)
    })
}

/// A hypergeometric factor, its argument in `phi_n` and its rounding error.
type Factor = (f64, f64, f64);

/// `(2F1(first - i, k+1; 1; arg), i * step, err)` for `i = first, first+1, ...`:
/// with `first = 0` this is `F_l` at `l tau`, with `first = 1` it is
/// `2F1(1-s, k+1; 1; arg)` at `s sigma t`.
///
fn factors_from(first: usize, k: usize, arg: f64, step: f64) -> Result<Vec<Factor>> {
    let mut out = Vec::new();
    let mut scale = 0.0f64;
    let mut run = 0;
    for i in first..first + 20_000 {
        let (f, err) = hyp2f1_terminating(first as f64 - i as f64, (k + 1) as f64, 1.0, arg).expect("terminating");
        scale = scale.max(f.abs());
        out.push((f, i as f64 * step, err));
        run = if f.abs() <= 1e-17 * scale { run + 1 } else { 0 };
        if run >= 3 && i > k + 2 {
            return Ok(out);
        }
    }
    Err(Error::NonConvergence {
        op: "pk_alpha_eq_lambda",
        terms: 20_000,
    })
}

/// Branch data `(w, tau, lead, q)` of `g_k`; see [`g_k_eval`].
fn g_branch(params: &ModelParams, z: f64, t: f64, op: &'static str) -> Result<(f64, f64, f64, f64)> {
    let (l, m) = (params.lambda, params.mu);
    if !(0.0..1.0).contains(&z) {
        return Err(domain(op, format!("z = {z} outside [0, 1)")));
    }
    if m > l {
        Ok((l * (1.0 - z) / (m - l * z), (m - l) * t, l * (1.0 - z), l - m))
    } else if m < l {
        if z >= m / l {
            return Err(domain(op, format!("z = {z} >= mu/lambda = {}", m / l)));
        }
        Ok(((m - l * z) / (l * (1.0 - z)), (l - m) * t, m - l * z, m - l))
    } else {
        Err(domain(op, "requires mu != lambda"))
    }
}

/// The function `g_k(z)` of the `alpha = lambda` generating function, in its
/// polylogarithmic form: for `mu > lambda`, with `w = lambda(1-z)/(mu - lambda z)`,
/// `g_k = [lambda(1-z)(lambda-mu)^{k-1} t^k + k!(Li_k(w e^{-(mu-lambda)t}) - Li_k(w))
///        - sum_{r=1}^{k-1} k!/r! ((lambda-mu)t)^r Li_{k-r}(w)] / (lambda-mu)^{k+1}`,
/// and symmetrically for `mu < lambda` (requires `z < mu/lambda`).
///
/// The bracket cancels heavily as `k` grows; [`g_k_stable`] is the
/// cancellation-free equivalent.
pub fn g_k_eval(params: &ModelParams, k: usize, z: f64, t: f64, ctl: SeriesControl) -> Result<f64> {
    const OP: &str = "g_k_eval";
    if k == 0 {
        return Err(domain(OP, "k must be at least 1"));
    }
    let (w, tau, lead, q) = g_branch(params, z, t, OP)?;
    let kk = k as i32;
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    let mut br = lead * q.powi(kk - 1) * t.powi(kk)
        + fact * (polylog(k as u32, w * (-tau).exp(), ctl)? - polylog(k as u32, w, ctl)?);
    let mut rf = 1.0;
    for r in 1..k {
        rf *= r as f64;
        br -= fact / rf * (q * t).powi(r as i32) * polylog((k - r) as u32, w, ctl)?;
    }
    Ok(br / q.powi(kk + 1))
}

/// `g_k(z) = t^{k+1}/(k+1) sum_{j>=1} j w^j phi_{k+1}(j tau)`, the same
/// function as [`g_k_eval`] with all terms positive.
pub fn g_k_stable(params: &ModelParams, k: usize, z: f64, t: f64, ctl: SeriesControl) -> Result<f64> {
    const OP: &str = "g_k_stable";
    let (w, tau, _, _) = g_branch(params, z, t, OP)?;
    let s = SeriesSum::run(ctl, OP, 1, |j| {
        let jf = j as f64;
        jf * w.powi(j as i32) * crate::specfun::exp_remainder_ratio(k + 1, jf * tau)
    })?;
    Ok(t.powi(k as i32 + 1) / (k as f64 + 1.0) * s.value)
}

/// Generating function for `alpha = lambda != mu`:
/// `F = 1 - d + d(mu-lambda)/(mu - lambda z - lambda(1-z) e^{-(mu-lambda)t})
///      - d(d-1)(mu-lambda)^2/(mu - lambda z) sum_{n>=1} (-lambda)^n theta_n g_n(z) / n!`.
pub fn generating_alpha_eq_lambda(
    params: &ModelParams,
    z: f64,
    t: f64,
    theta: &ThetaCoefficients,
    ctl: SeriesControl,
) -> Result<Estimate> {
    const OP: &str = "generating_alpha_eq_lambda";
    let x = check(params, t, theta, OP)?;
    let (l, m) = (params.lambda, params.mu);
    let d = params.d as f64;
    let base = 1.0 - d + d * (m - l) / (m - l * z - l * (1.0 - z) * (-(m - l) * t).exp());
    if params.d == 1 || x == 0.0 {
        if !(0.0..1.0).contains(&z) && z != 1.0 {
            return Err(domain(OP, format!("z = {z} outside [0, 1]")));
        }
        return Ok(Estimate::exact(base));
    }
    let (w, tau, _, _) = g_branch(params, z, t, OP)?;
    let n_max = theta.n_max();
    // G_n = sum_j j w^j phi_{n+1}(j tau) / (n+1)
    let mut g = vec![0.0; n_max + 1];
    let mut wj = 1.0;
    let mut scale = 0.0f64;
    for j in 1..100_000usize {
        wj *= w;
        let c = j as f64 * wj;
        if c == 0.0 {
            break;
        }
        let phi = exp_remainder_ratios(n_max + 1, j as f64 * tau);
        for n in 1..=n_max {
            g[n] += c * phi[n + 1];
        }
        scale = scale.max(c);
        if c < 1e-18 * scale && j > 3 {
            break;
        }
    }
    for (n, v) in g.iter_mut().enumerate() {
        *v /= n as f64 + 1.0;
    }
    let s = run_series(ctl, OP, 1, theta, x, |n| theta.scaled(n) * g[n])?;
    let pre = d * (d - 1.0) * (m - l).powi(2) / (m - l * z) * t;
    Ok(Estimate {
        value: base - pre * s.value,
        trunc_order: s.trunc_order,
        tail_bound: pre * s.tail_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::theta_coefficients;
    use approx::assert_relative_eq;

    fn setup(l: f64, m: f64, d: u32, n: usize) -> (ModelParams, ThetaCoefficients) {
        let p = ModelParams::new(l, l, m, d).unwrap();
        let th = theta_coefficients(&p, n).unwrap();
        (p, th)
    }

    #[test]
    fn reference_values() {
        // Independent ODE solves of the truncated level chain.
        let ctl = SeriesControl::default();
        let (p, th) = setup(0.1, 0.5, 2, 400);
        assert!((series_p0_alpha_eq_lambda(&p, 1.0, &th, ctl).unwrap().value - 0.854_365_975_968_389).abs() < 1e-10);
        assert!((series_p0_alpha_eq_lambda(&p, 3.6, &th, ctl).unwrap().value - 0.715_555_272_309_474_5).abs() < 1e-9);
        assert!((pk_alpha_eq_lambda(&p, 1, 1.0, &th, ctl).unwrap().value - 0.134_409_071_306_19).abs() < 1e-10);
        assert!((pk_alpha_eq_lambda(&p, 2, 1.0, &th, ctl).unwrap().value - 0.010_364_444_144_43).abs() < 1e-10);
        let (p, th) = setup(0.5, 0.1, 2, 400);
        assert!((series_p0_alpha_eq_lambda(&p, 1.0, &th, ctl).unwrap().value - 0.386_087_182_061_587_1).abs() < 1e-10);
        assert!((pk_alpha_eq_lambda(&p, 1, 1.0, &th, ctl).unwrap().value - 0.366_189_839_598_208_17).abs() < 1e-10);
        assert!((pk_alpha_eq_lambda(&p, 2, 1.0, &th, ctl).unwrap().value - 0.150_319_817_670_059).abs() < 1e-10);
        let (p, th) = setup(0.5, 0.1, 4, 400);
        assert!((series_p0_alpha_eq_lambda(&p, 3.6212, &th, ctl).unwrap().value - 0.007_270_037_867_174).abs() < 1e-9);
    }

    #[test]
    fn regrouping_matches_split_terms() {
        // For each n >= 2 the two separate l-sums combine into the regrouped term.
        for &(l, m) in &[(0.1, 0.5), (0.5, 0.1)] {
            let (_, th) = setup(l, m, 3, 8);
            let t = 0.7;
            let k = 2;
            let below = m > l;
            let (first, arg, step) = if below {
                (0, 1.0 - l / m, (m - l) * t)
            } else {
                (1, 1.0 - m / l, (l - m) * t)
            };
            let factors = factors_from(first, k, arg, step).unwrap();
            let inner = inner_sums(&factors, 8);
            let dd = 3.0 * 2.0;
            let q = if below { l - m } else { m - l };
            for n in 2..=6 {
                let theta = th.get(n);
                let nf: f64 = (1..=n).map(|i| i as f64).product();
                let mut t4 = 0.0;
                let mut t5 = 0.0;
                for (i, &(f, u, _)) in factors.iter().enumerate() {
                    let idx = (i + first) as f64;
                    if idx == 0.0 {
                        continue;
                    }
                    let mut r_sum = 0.0;
                    let mut rf = 1.0;
                    for r in 1..n {
                        rf *= r as f64;
                        r_sum += (q * t).powi(r as i32) / rf / idx.powi((n - r) as i32);
                    }
                    t4 += r_sum * f;
                    t5 += (1.0 - (-u).exp()) / idx.powi(n as i32) * f;
                }
                let common = dd * (-l).powi(n as i32) / q.powi(n as i32 - 1) * theta;
                let mut split = common * (t4 + t5);
                let x = l * t;
                let regrouped = if below {
                    split += -dd * (l - m) * (-x).powi(n as i32) / nf * theta;
                    -dd * (l - m) * (-x).powi(n as i32) / nf * theta * inner[n]
                } else {
                    split /= l;
                    dd * ((l - m) / l) * (-x).powi(n as i32) / nf * theta * inner[n]
                };
                assert_relative_eq!(split, regrouped, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn g_forms_agree() {
        let ctl = SeriesControl::default();
        for &(l, m, z) in &[(0.1, 0.5, 0.0), (0.1, 0.5, 0.6), (0.5, 0.1, 0.1), (0.5, 0.1, 0.0)] {
            let p = ModelParams::new(l, l, m, 2).unwrap();
            for k in 1..=5 {
                let t = 1.3;
                let a = g_k_eval(&p, k, z, t, ctl).unwrap();
                let b = g_k_stable(&p, k, z, t, ctl).unwrap();
                assert_relative_eq!(a, b, max_relative = 1e-7);
            }
        }
    }

    #[test]
    fn g_branches_meet_at_equal_rates() {
        let ctl = SeriesControl::default();
        let l = 0.5;
        let up = ModelParams::new(l, l, l * (1.0 + 1e-4), 2).unwrap();
        let dn = ModelParams::new(l, l, l * (1.0 - 1e-4), 2).unwrap();
        let (a, b) = (
            g_k_eval(&up, 1, 0.0, 0.5, ctl).unwrap(),
            g_k_eval(&dn, 1, 0.0, 0.5, ctl).unwrap(),
        );
        assert!((a - b).abs() <= 1e-2 * a.abs());
    }

    #[test]
    fn g_small_time_quadrature() {
        // n = 1 case of the stable form: g_1 = t^2/2 sum_j j w^j phi_2(j tau);
        // compare with direct numerical integration of the definition
        // phi_2(u) = 2 int_0^1 e^{-u s}(1-s) ds.
        let ctl = SeriesControl::default();
        let p = ModelParams::new(0.1, 0.1, 0.5, 2).unwrap();
        let t = 0.2;
        let w: f64 = 0.1 / 0.5;
        let tau = 0.4 * t;
        let mut direct = 0.0;
        for j in 1..200 {
            let u = j as f64 * tau;
            let q = crate::specfun::quadrature::integrate(
                |s| 2.0 * (-u * s).exp() * (1.0 - s),
                0.0,
                1.0,
                1e-15,
                1e-14,
                100,
            )
            .unwrap();
            direct += j as f64 * w.powi(j) * q.value;
        }
        direct *= t * t / 2.0;
        assert!((g_k_eval(&p, 1, 0.0, t, ctl).unwrap() - direct).abs() < 1e-6);
    }

    #[test]
    fn radius_and_regime_checks() {
        let ctl = SeriesControl::default();
        let (p, th) = setup(0.1, 0.5, 2, 50);
        assert!(matches!(
            series_p0_alpha_eq_lambda(&p, 4.1, &th, ctl),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            series_p0_alpha_eq_lambda(&p, 3.9, &th, ctl),
            Err(Error::NonConvergence { .. })
        ));
        let other = ModelParams::new(0.1, 0.1, 0.5, 3).unwrap();
        assert!(series_p0_alpha_eq_lambda(&other, 1.0, &th, ctl).is_err());
    }
}
