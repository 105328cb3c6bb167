use num_bigint::BigUint;
use starbdi::asymptotics::{limit_law, limit_moments};
use starbdi::combinatorics::{t_bruteforce_row, t_closed_form, t_table_recursive};
use starbdi::diffusion::{convergence_probe, transient_density, DiffusionParams};
use starbdi::model::{empirical_marginals, ModelParams, Regime};
use starbdi::transient::{
    build_cycle_distribution, p0_theorem25, pk_alpha_eq_lambda, pk_equal_rates, pk_renewal_history,
    series_p0_alpha_eq_lambda, series_p0_equal_rates, series_radius, solve_volterra_p0, Estimate, Method,
};
use starbdi::{theta_coefficients, ComponentWeights, SeriesControl};

use crate::args::*;
use crate::output::{num, Sink};
use crate::CliError;

fn model(m: &ModelArgs) -> Result<ModelParams, CliError> {
    ModelParams::new(m.alpha, m.lambda, m.mu, m.d).map_err(|e| CliError::Usage(e.to_string()))
}

/// Terms needed for a series in powers of `q < 1` to fall below 1e-17.
pub(crate) fn series_terms(q: f64) -> usize {
    ((39.0 / -q.ln()).ceil() as usize + 60).min(2500)
}

/// Whether the closed series covers `[0, t_stop]`, and the ratio of the
/// last time to the radius.
fn series_coverage(p: &ModelParams, t_stop: f64) -> Option<f64> {
    let q = match p.regime() {
        Regime::EqualRates => p.lambda * t_stop,
        Regime::AlphaEqLambda => t_stop / series_radius(p),
        _ => return None,
    };
    (q < 1.0).then_some(q)
}

struct Curves {
    method: Method,
    times: Vec<f64>,
    /// `rows[k][i]`, `k = 0` for the origin.
    rows: Vec<Vec<Estimate>>,
}

fn series_curves(p: &ModelParams, times: &[f64], k_max: usize, q: f64, ctl: SeriesControl) -> Result<Curves, CliError> {
    let n = series_terms(q);
    let mut rows = vec![Vec::with_capacity(times.len()); k_max + 1];
    match p.regime() {
        Regime::EqualRates => {
            let w = ComponentWeights::new(p.d, n)?;
            for &t in times {
                rows[0].push(series_p0_equal_rates(p, t, &w, ctl)?);
                for (k, row) in rows.iter_mut().enumerate().skip(1) {
                    row.push(pk_equal_rates(p, k, t, &w, ctl)?);
                }
            }
        }
        _ => {
            let th = theta_coefficients(p, n)?;
            for &t in times {
                rows[0].push(series_p0_alpha_eq_lambda(p, t, &th, ctl)?);
                for (k, row) in rows.iter_mut().enumerate().skip(1) {
                    row.push(pk_alpha_eq_lambda(p, k, t, &th, ctl)?);
                }
            }
        }
    }
    Ok(Curves {
        method: Method::Series,
        times: times.to_vec(),
        rows,
    })
}

fn transient_curves(a: &TransientArgs) -> Result<Curves, CliError> {
    let p = model(&a.model)?;
    let ctl = SeriesControl::new(a.rel_tol, a.max_terms, 3).map_err(|e| CliError::Usage(e.to_string()))?;
    let times = a.t.values();
    if a.t.start < 0.0 {
        return Err(CliError::Usage("times must be nonnegative".into()));
    }
    let t_stop = a.t.stop;
    let method = match a.method {
        MethodArg::Auto if series_coverage(&p, t_stop).is_some() => MethodArg::Series,
        MethodArg::Auto => MethodArg::Volterra,
        m => m,
    };
    match method {
        MethodArg::Series => {
            let Some(q) = series_coverage(&p, t_stop) else {
                let why = match p.regime() {
                    Regime::EqualRates => {
                        format!("needs lambda t < 1, got lambda t = {}", p.lambda * t_stop)
                    }
                    Regime::AlphaEqLambda => {
                        format!("needs t < {}, got {t_stop}", series_radius(&p))
                    }
                    _ => "applies only to alpha = lambda = mu or alpha = lambda != mu".to_string(),
                };
                return Err(CliError::Usage(format!("series method {why}")));
            };
            series_curves(&p, &times, a.k_max, q, ctl)
        }
        MethodArg::Volterra => {
            let law = solve_volterra_p0(&p, t_stop, a.steps)?;
            let mut rows = vec![times
                .iter()
                .map(|&t| Estimate {
                    value: law.p0_at(t).expect("grid inside solver range"),
                    trunc_order: a.steps,
                    tail_bound: 0.0,
                })
                .collect::<Vec<_>>()];
            for k in 1..=a.k_max {
                rows.push(
                    times
                        .iter()
                        .map(|&t| pk_renewal_history(&p, k, t, &law))
                        .collect::<Result<_, _>>()?,
                );
            }
            Ok(Curves {
                method: Method::Volterra,
                times,
                rows,
            })
        }
        MethodArg::Theorem25 => {
            let cyc = build_cycle_distribution(&p, t_stop, a.steps, 400)?;
            let row = times
                .iter()
                .map(|&t| p0_theorem25(&cyc, t, ctl))
                .collect::<Result<_, _>>()?;
            Ok(Curves {
                method: Method::Theorem25,
                times,
                rows: vec![row],
            })
        }
        MethodArg::Mc => {
            let ms = empirical_marginals(&p, &times, a.paths, a.seed, a.k_max.max(1))?;
            let mut rows = vec![Vec::with_capacity(times.len()); a.k_max + 1];
            for m in &ms {
                for (k, row) in rows.iter_mut().enumerate() {
                    let v = m.probability(k);
                    row.push(Estimate {
                        value: v,
                        trunc_order: a.paths as usize,
                        tail_bound: m.stderr(v),
                    });
                }
            }
            Ok(Curves {
                method: Method::MonteCarlo,
                times,
                rows,
            })
        }
        MethodArg::Auto => unreachable!("resolved above"),
    }
}

pub fn transient(a: &TransientArgs) -> Result<(), CliError> {
    let c = transient_curves(a)?;
    let mut out = Sink::open(a.out.as_deref())?;
    out.row(["method", "t", "k", "value", "trunc_order", "tail_bound"])?;
    for (k, row) in c.rows.iter().enumerate() {
        let label = if k == 0 { "-1".to_string() } else { k.to_string() };
        for (t, e) in c.times.iter().zip(row) {
            out.row([
                c.method.name().to_string(),
                num(*t),
                label.clone(),
                num(e.value),
                e.trunc_order.to_string(),
                num(e.tail_bound),
            ])?;
        }
    }
    Ok(out.finish()?)
}

pub fn simulate(a: &SimulateArgs) -> Result<(), CliError> {
    let p = model(&a.model)?;
    if a.t.start < 0.0 {
        return Err(CliError::Usage("times must be nonnegative".into()));
    }
    let ms = empirical_marginals(&p, &a.t.values(), a.paths, a.seed, a.k_max.max(1))?;
    let mut out = Sink::open(a.out.as_deref())?;
    out.row(["t", "level", "probability", "stderr"])?;
    for m in &ms {
        out.row([num(m.t), "-1".into(), num(m.p0_hat), num(m.stderr(m.p0_hat))])?;
        for (k, &v) in m.pk_hat.iter().enumerate() {
            out.row([num(m.t), (k + 1).to_string(), num(v), num(m.stderr(v))])?;
        }
        if m.overflow > 0.0 {
            eprintln!("t = {}: mass {} above level {} not tabulated", m.t, m.overflow, a.k_max);
        }
    }
    Ok(out.finish()?)
}

pub fn asymptotic(a: &AsymptoticArgs) -> Result<(), CliError> {
    let p = model(&a.model)?;
    let law = limit_law(&p, a.k_max);
    let mut out = Sink::open(a.out.as_deref())?;
    out.row(["k", "limit_probability", "nb_pi"])?;
    out.row(["0".into(), num(law.p0_limit), num(law.nb_pi[0])])?;
    for k in 1..=a.k_max {
        out.row([k.to_string(), num(law.pk_limit[k - 1]), num(law.nb_pi[k])])?;
    }
    let mut out = out.blank()?;
    out.row(["theta_d", "mean", "variance"])?;
    match limit_moments(&p, Some(p.d)) {
        Ok(m) => out.row([num(m.theta_d), num(m.mean), num(m.variance)])?,
        Err(e) => {
            eprintln!("no stationary law: {e}");
            out.row([num(law.theta_d), num(f64::NAN), num(f64::NAN)])?
        }
    }
    Ok(out.finish()?)
}

pub fn diffusion(a: &DiffusionArgs) -> Result<(), CliError> {
    let dp = DiffusionParams::new(a.gamma, a.mu, a.beta, a.epsilon).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut out = Sink::open(a.out.as_deref())?;
    if a.probe {
        out.row(["epsilon", "t", "ks_distance", "n_paths", "seed"])?;
        for t in a.t.values() {
            let r = convergence_probe(&dp, a.d, t, a.paths, a.seed)?;
            out.row([
                num(r.epsilon),
                num(r.t),
                num(r.ks_distance),
                r.n_paths.to_string(),
                r.seed.to_string(),
            ])?;
        }
    } else {
        out.row(["x", "t", "h_density"])?;
        for t in a.t.values() {
            let g = transient_density(&dp, t)?;
            for x in a.x.values() {
                out.row([num(x), num(t), num(g.pdf(x))])?;
            }
        }
    }
    Ok(out.finish()?)
}

/// Largest `n` checked by enumerating all `n!` permutations.
const ENUMERATION_MAX: usize = 9;

pub fn combinatorics(a: &CombinatoricsArgs) -> Result<(), CliError> {
    if a.nmax == 0 {
        return Err(CliError::Usage("--nmax must be at least 1".into()));
    }
    let table = t_table_recursive(a.nmax)?;
    let mut out = Sink::open(a.out.as_deref())?;
    out.row(["n", "k", "t_nk"])?;
    for n in 1..=a.nmax {
        for k in 1..=n {
            out.row([n.to_string(), k.to_string(), table.get(n, k).to_string()])?;
        }
    }
    out.finish()?;
    if a.check {
        let mut bad = Vec::new();
        for n in 1..=a.nmax {
            let brute = if n <= ENUMERATION_MAX { Some(t_bruteforce_row(n)?) } else { None };
            for k in 1..=n {
                let r = table.get(n, k);
                if n >= 2 && t_closed_form(n, k)? != r {
                    bad.push(format!("closed form differs at ({n},{k})"));
                }
                if let Some(b) = &brute {
                    if BigUint::from(b[k - 1]) != r {
                        bad.push(format!("enumeration differs at ({n},{k})"));
                    }
                }
            }
        }
        if !bad.is_empty() {
            return Err(CliError::Failed(bad.join("; ")));
        }
        eprintln!(
            "recursion and closed form agree for n <= {}, enumeration for n <= {}",
            a.nmax,
            a.nmax.min(ENUMERATION_MAX)
        );
    }
    Ok(())
}
