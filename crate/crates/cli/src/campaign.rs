//! Acceptance campaign: eight criteria, each a list of numeric checks
//! against a threshold plus a runtime budget.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use starbdi::asymptotics::{limit_law, limit_moments};
use starbdi::combinatorics::{t_bruteforce_row, t_closed_form, t_table_recursive};
use starbdi::diffusion::{
    boundary_flux, convergence_probe, fokker_planck_residual, psi, stationary_density, DiffusionParams,
};
use starbdi::model::{empirical_marginals, ModelParams};
use starbdi::transient::{
    build_cycle_distribution, eval_f, linear_bdi_p0, linear_bdi_pmf, p0_theorem25, pk_alpha_eq_lambda, pk_equal_rates,
    polylog_identity_check, series_p0_alpha_eq_lambda, series_p0_equal_rates, solve_volterra_p0, GfInputs,
};
use starbdi::{theta_coefficients, ComponentWeights, Error, SeriesControl};

use crate::commands::series_terms;

/// Base seed of every Monte Carlo run in the campaign; fixed once.
pub const SEED: u64 = 0x5eed_2026;

/// KS threshold for the scaled chain at `epsilon = 0.01`, from a pilot run
/// (`gamma = mu' = 1`, `beta = -0.5`, `d = 3`, `t = 1`, 10^4 paths) that gave
/// 0.0179 against a sampling band of 0.0136.
pub const KS_THRESHOLD: f64 = 0.03;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Full,
    /// 10x fewer Monte Carlo paths where the criterion allows it.
    Quick,
}

impl Scale {
    fn paths(self, full: u64) -> u64 {
        match self {
            Scale::Full => full,
            Scale::Quick => full / 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `value <= threshold`; NaN fails.
    fn le(name: impl Into<String>, value: f64, threshold: f64) -> Check {
        Check {
            name: name.into(),
            value,
            threshold,
            passed: value <= threshold,
        }
    }

    fn error(name: impl Into<String>, e: &Error) -> Check {
        Check {
            name: format!("{}: {e}", name.into()),
            value: f64::NAN,
            threshold: 0.0,
            passed: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        self.elapsed <= self.budget && self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "criterion {} [{}]: {status} ({} checks, {:.1} s of {} s)",
            self.id,
            self.title,
            self.checks.len(),
            self.elapsed.as_secs_f64(),
            self.budget.as_secs()
        )?;
        for c in self.checks.iter().filter(|c| !c.passed) {
            write!(f, "\n    failed {}: {:.3e} > {:.3e}", c.name, c.value, c.threshold)?;
        }
        Ok(())
    }
}

pub const CRITERIA: [u8; 8] = [1, 2, 3, 4, 5, 6, 7, 8];

/// Checks of one criterion at the given scale.
type Body = fn(Scale) -> Vec<Check>;

pub fn run_criterion(id: u8, scale: Scale) -> CriterionReport {
    let (title, budget, body): (&'static str, u64, Body) = match id {
        1 => ("combinatorics exactness", 10, combinatorics),
        2 => ("polylog identity", 5, polylog_identity),
        3 => ("equal-rates transient", 180, equal_rates),
        4 => ("alpha = lambda transient", 300, alpha_eq_lambda),
        5 => ("cycle representation", 120, cycles),
        6 => ("asymptotics", 120, asymptotics),
        7 => ("diffusion limit", 180, diffusion),
        8 => ("normalization and consistency", 60, consistency),
        _ => panic!("criteria are numbered 1 to 8, got {id}"),
    };
    let start = Instant::now();
    let checks = body(scale);
    CriterionReport {
        id,
        title,
        checks,
        elapsed: start.elapsed(),
        budget: Duration::from_secs(budget),
    }
}

/// Runs `f`, turning an error into a failed check named `name`.
fn guard(out: &mut Vec<Check>, name: &str, f: impl FnOnce(&mut Vec<Check>) -> Result<(), Error>) {
    if let Err(e) = f(out) {
        out.push(Check::error(name, &e));
    }
}

fn max_abs(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, |m, v| {
        if v.is_nan() || m.is_nan() {
            f64::NAN
        } else {
            m.max(v.abs())
        }
    })
}

/// Largest z-score of empirical against analytic probabilities.
fn z_score(p: f64, p_hat: f64, n: u64) -> f64 {
    let se = (p * (1.0 - p) / n as f64).sqrt();
    if se == 0.0 {
        if p == p_hat {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (p - p_hat).abs() / se
    }
}

fn combinatorics(_: Scale) -> Vec<Check> {
    let mut out = Vec::new();
    guard(&mut out, "t(n,k) routes", |out| {
        let table = t_table_recursive(8)?;
        let mut mismatches = 0usize;
        let mut row_sums = 0usize;
        let mut fact = BigUint::from(1u32);
        for n in 1..=8usize {
            fact *= n;
            let brute = t_bruteforce_row(n)?;
            for k in 1..=n {
                let r = table.get(n, k);
                if BigUint::from(brute[k - 1]) != r || (n >= 2 && t_closed_form(n, k)? != r) {
                    mismatches += 1;
                }
            }
            if table.row_sum(n) != fact || BigUint::from(brute.iter().sum::<u64>()) != fact {
                row_sums += 1;
            }
        }
        out.push(Check::le(
            "cells where the three routes differ, n <= 8",
            mismatches as f64,
            0.0,
        ));
        out.push(Check::le("rows not summing to n!", row_sums as f64, 0.0));
        Ok(())
    });
    out
}

fn polylog_identity(_: Scale) -> Vec<Check> {
    let ctl = SeriesControl::default();
    let mut out = Vec::new();
    for k in 0..=5u32 {
        let name = format!("max residual, k = {k}, x in 0.1..0.9");
        guard(&mut out, &name, |out| {
            let r = (1..=9)
                .map(|i| polylog_identity_check(k, i as f64 / 10.0, ctl).map(|c| c.residual))
                .collect::<Result<Vec<_>, _>>()?;
            out.push(Check::le(name.clone(), max_abs(r), 1e-8));
            Ok(())
        });
    }
    out
}

fn equal_rates(scale: Scale) -> Vec<Check> {
    let ctl = SeriesControl::default();
    let rays = [1u32, 2, 3, 4, 10];
    let n_paths = scale.paths(1_000_000);
    let mc_times = [0.5, 1.0, 1.5];
    let order_times: Vec<f64> = (1..=18).map(|i| 0.1 * i as f64).collect();
    let mut out = Vec::new();
    let mut p0_curves = Vec::new();
    let mut p1_curves = Vec::new();
    for (i, &d) in rays.iter().enumerate() {
        guard(&mut out, &format!("d = {d}"), |out| {
            let p = ModelParams::new(0.5, 0.5, 0.5, d)?;
            let w = ComponentWeights::new(d, series_terms(0.9))?;
            let vol = solve_volterra_p0(&p, 1.8, 1 << 14)?;
            let mut dev = 0.0f64;
            for (t, e) in vol.times.iter().zip(&vol.p0).step_by(16) {
                dev = dev.max((series_p0_equal_rates(&p, *t, &w, ctl)?.value - e.value).abs());
            }
            out.push(Check::le(
                format!("d = {d}: max |series - Volterra| p(0,t), t in [0, 1.8]"),
                dev,
                1e-6,
            ));
            let ms = empirical_marginals(&p, &mc_times, n_paths, SEED + 300 + i as u64, 2)?;
            let mut z = 0.0f64;
            for m in &ms {
                z = z.max(z_score(
                    pk_equal_rates(&p, 1, m.t, &w, ctl)?.value,
                    m.probability(1),
                    n_paths,
                ));
            }
            out.push(Check::le(
                format!("d = {d}: max z-score of P(1,t) against {n_paths} paths"),
                z,
                3.0,
            ));
            p0_curves.push(
                order_times
                    .iter()
                    .map(|&t| series_p0_equal_rates(&p, t, &w, ctl).map(|e| e.value))
                    .collect::<Result<Vec<_>, _>>()?,
            );
            p1_curves.push(
                order_times
                    .iter()
                    .map(|&t| pk_equal_rates(&p, 1, t, &w, ctl).map(|e| e.value))
                    .collect::<Result<Vec<_>, _>>()?,
            );
            Ok(())
        });
    }
    if p0_curves.len() == rays.len() {
        for j in 1..rays.len() {
            let mut violations = 0usize;
            for i in 0..order_times.len() {
                violations += (p0_curves[j][i] >= p0_curves[j - 1][i]) as usize;
                violations += (p1_curves[j][i] <= p1_curves[j - 1][i]) as usize;
            }
            let name = format!(
                "d = {} to {}: ordering violations at t = 0.1, 0.2, .., 1.8",
                rays[j - 1],
                rays[j]
            );
            out.push(Check::le(name, violations as f64, 0.0));
        }
    }
    out
}

fn alpha_eq_lambda(scale: Scale) -> Vec<Check> {
    let ctl = SeriesControl::default();
    let n_paths = scale.paths(1_000_000);
    let mut out = Vec::new();
    for (r, &(l, m, t_max)) in [(0.1, 0.5, 3.6), (0.5, 0.1, 0.9 * 5f64.ln() / 0.4)].iter().enumerate() {
        for d in 1..=4u32 {
            let tag = format!("lambda = {l}, mu = {m}, d = {d}");
            guard(&mut out, &tag, |out| {
                let p = ModelParams::new(l, l, m, d)?;
                let th = theta_coefficients(&p, series_terms(0.9))?;
                let vol = solve_volterra_p0(&p, t_max, 1 << 14)?;
                let mut dev = 0.0f64;
                for (t, e) in vol.times.iter().zip(&vol.p0).step_by(16) {
                    dev = dev.max((series_p0_alpha_eq_lambda(&p, *t, &th, ctl)?.value - e.value).abs());
                }
                out.push(Check::le(
                    format!("{tag}: max |series - Volterra| p(0,t), t in [0, {t_max:.4}]"),
                    dev,
                    1e-6,
                ));
                let times = [t_max / 3.0, 2.0 * t_max / 3.0, t_max];
                let seed = SEED + 400 + 10 * r as u64 + d as u64;
                let ms = empirical_marginals(&p, &times, n_paths, seed, 3)?;
                let mut z = 0.0f64;
                for mg in &ms {
                    for k in 0..=2 {
                        z = z.max(z_score(
                            pk_alpha_eq_lambda(&p, k, mg.t, &th, ctl)?.value,
                            mg.probability(k),
                            n_paths,
                        ));
                    }
                }
                out.push(Check::le(
                    format!("{tag}: max z-score of P(k,t), k <= 2, against {n_paths} paths"),
                    z,
                    3.0,
                ));
                Ok(())
            });
        }
    }
    out
}

fn cycles(_: Scale) -> Vec<Check> {
    let ctl = SeriesControl::default();
    let configs = [
        ("lambda > mu", 0.3, 0.5, 0.2, 5.0),
        ("lambda = mu", 0.4, 0.5, 0.5, 5.0),
        ("lambda < mu", 0.3, 0.2, 0.6, 5.0),
        ("lambda > mu, alpha = lambda", 0.5, 0.5, 0.1, 3.6),
        ("lambda = mu = alpha", 0.5, 0.5, 0.5, 1.8),
        ("lambda < mu, alpha = lambda", 0.1, 0.1, 0.5, 3.6),
    ];
    let mut out = Vec::new();
    for &(name, a, l, m, t_max) in &configs {
        for d in 1..=3u32 {
            let tag = format!("{name} (alpha = {a}, lambda = {l}, mu = {m}), d = {d}");
            guard(&mut out, &tag, |out| {
                let p = ModelParams::new(a, l, m, d)?;
                let vol = solve_volterra_p0(&p, t_max, 4096)?;
                let cyc = build_cycle_distribution(&p, t_max, 4096, 400)?;
                let mut dev = 0.0f64;
                for i in 0..=50 {
                    let t = t_max * i as f64 / 50.0;
                    dev = dev.max((p0_theorem25(&cyc, t, ctl)?.value - vol.p0_at(t).expect("inside grid")).abs());
                }
                out.push(Check::le(
                    format!("{tag}: max |cycles - Volterra|, t in [0, {t_max}]"),
                    dev,
                    2e-4,
                ));
                Ok(())
            });
        }
    }
    out
}

fn asymptotics(_: Scale) -> Vec<Check> {
    let n_paths = 100_000;
    let mut out = Vec::new();
    guard(&mut out, "limit law", |out| {
        let p = ModelParams::new(0.1, 0.1, 0.5, 3)?;
        let law = limit_law(&p, 2000);
        let m = empirical_marginals(&p, &[200.0], n_paths, SEED + 600, 10)?.remove(0);
        let mut z = z_score(law.p0_limit, m.p0_hat, n_paths);
        for k in 1..=10 {
            z = z.max(z_score(law.pk_limit[k - 1], m.probability(k), n_paths));
        }
        out.push(Check::le(
            format!("max z-score, k <= 10, t = 200, {n_paths} paths"),
            z,
            3.0,
        ));
        let mom = limit_moments(&p, Some(3))?;
        let (mut s1, mut s2) = (0.0, 0.0);
        for (k, &v) in law.pk_limit.iter().enumerate() {
            let k = (k + 1) as f64;
            s1 += k * v;
            s2 += k * k * v;
        }
        let var = s2 - s1 * s1;
        out.push(Check::le(
            "relative error of E[N] against the pmf",
            ((mom.mean - s1) / s1).abs(),
            1e-6,
        ));
        out.push(Check::le(
            "relative error of Var[N] against the pmf",
            ((mom.variance - var) / var).abs(),
            1e-6,
        ));
        Ok(())
    });
    out
}

fn diffusion(_: Scale) -> Vec<Check> {
    let mut out = Vec::new();
    guard(&mut out, "diffusion", |out| {
        for &beta in &[-0.5, 0.3] {
            let dp = DiffusionParams::new(1.0, 1.0, beta, 0.01)?;
            let mut worst = 0.0f64;
            for i in 0..20 {
                for j in 0..20 {
                    let x = 0.1 + 4.9 * i as f64 / 19.0;
                    let t = 0.1 + 4.9 * j as f64 / 19.0;
                    worst = worst.max(fokker_planck_residual(&dp, x, t, 1e-4));
                }
            }
            out.push(Check::le(
                format!("beta = {beta}: Fokker-Planck residual on the 20x20 grid"),
                worst,
                1e-4,
            ));
            out.push(Check::le(
                format!("beta = {beta}: flux at x = 1e-6, t = 1"),
                boundary_flux(&dp, 1e-6, 1.0)?.abs(),
                1e-5,
            ));
        }
        let dp = DiffusionParams::new(1.0, 1.0, -0.5, 0.01)?;
        let r = convergence_probe(&dp, 3, 1.0, 10_000, SEED + 700)?;
        out.push(Check::le(
            "KS distance at epsilon = 0.01, t = 1, 10^4 paths",
            r.ks_distance,
            KS_THRESHOLD,
        ));
        let s = stationary_density(&dp)?;
        let late = psi(&dp, 200.0)?;
        out.push(Check::le(
            "|stationary rate - transient rate at t = 200| / rate",
            (s.rate - late).abs() / s.rate,
            1e-8,
        ));
        Ok(())
    });
    out
}

fn consistency(_: Scale) -> Vec<Check> {
    let ctl = SeriesControl::default();
    let mut out = Vec::new();
    guard(&mut out, "generating function", |out| {
        let er = ModelParams::new(0.5, 0.5, 0.5, 3)?;
        let w = ComponentWeights::new(3, series_terms(0.9))?;
        let sub = ModelParams::new(0.1, 0.1, 0.5, 3)?;
        let th_sub = theta_coefficients(&sub, series_terms(0.9))?;
        let sup = ModelParams::new(0.5, 0.5, 0.1, 3)?;
        let th_sup = theta_coefficients(&sup, series_terms(0.9))?;
        let sup_vol = solve_volterra_p0(&sup, 3.0, 8192)?;
        let gen = ModelParams::new(0.3, 0.2, 0.6, 3)?;
        let gen_vol = solve_volterra_p0(&gen, 3.0, 8192)?;
        let cases: [(&str, ModelParams, GfInputs, f64); 4] = [
            (
                "equal rates",
                er,
                GfInputs {
                    weights: Some(&w),
                    ..Default::default()
                },
                1.5,
            ),
            (
                "alpha = lambda < mu",
                sub,
                GfInputs {
                    theta: Some(&th_sub),
                    ..Default::default()
                },
                3.0,
            ),
            (
                "alpha = lambda > mu",
                sup,
                GfInputs {
                    theta: Some(&th_sup),
                    p0_history: Some(&sup_vol),
                    ..Default::default()
                },
                3.0,
            ),
            (
                "generic, quadrature",
                gen,
                GfInputs {
                    p0_history: Some(&gen_vol),
                    ..Default::default()
                },
                3.0,
            ),
        ];
        for (name, p, inputs, t) in cases {
            let at0 =
                max_abs([0.0, 0.5, 0.9].map(|z| eval_f(&p, z, 0.0, &inputs, ctl).map_or(f64::NAN, |v| v.value - 1.0)));
            out.push(Check::le(format!("{name}: |F(z,0) - 1|"), at0, 1e-12));
            let p0 = match name {
                "equal rates" => series_p0_equal_rates(&p, t, &w, ctl)?.value,
                "alpha = lambda < mu" => series_p0_alpha_eq_lambda(&p, t, &th_sub, ctl)?.value,
                "alpha = lambda > mu" => series_p0_alpha_eq_lambda(&p, t, &th_sup, ctl)?.value,
                _ => gen_vol.p0_at(t).expect("inside grid"),
            };
            let tol = if name.starts_with("generic") { 1e-6 } else { 1e-10 };
            out.push(Check::le(
                format!("{name}: |F(0,t) - p(0,t)|"),
                (eval_f(&p, 0.0, t, &inputs, ctl)?.value - p0).abs(),
                tol,
            ));
            out.push(Check::le(
                format!("{name}: |F(1-,t) - 1|"),
                (eval_f(&p, 1.0 - 1e-9, t, &inputs, ctl)?.value - 1.0).abs(),
                1e-6,
            ));
        }
        let mut s = series_p0_equal_rates(&er, 1.5, &w, ctl)?.value;
        for k in 1..=200 {
            s += pk_equal_rates(&er, k, 1.5, &w, ctl)?.value;
        }
        out.push(Check::le(
            "equal rates: |p(0) + sum_{k<=200} P(k) - 1| at t = 1.5",
            (s - 1.0).abs(),
            1e-4,
        ));
        for (name, p, th) in [
            ("alpha = lambda < mu", sub, &th_sub),
            ("alpha = lambda > mu", sup, &th_sup),
        ] {
            let mut s = series_p0_alpha_eq_lambda(&p, 3.0, th, ctl)?.value;
            for k in 1..=200 {
                s += pk_alpha_eq_lambda(&p, k, 3.0, th, ctl)?.value;
            }
            out.push(Check::le(
                format!("{name}: |p(0) + sum_(k<=200) P(k) - 1| at t = 3"),
                (s - 1.0).abs(),
                1e-4,
            ));
        }
        Ok(())
    });
    guard(&mut out, "single ray", |out| {
        let er = ModelParams::new(0.5, 0.5, 0.5, 1)?;
        let w = ComponentWeights::new(1, series_terms(0.9))?;
        let mut dev = 0.0f64;
        for &t in &[0.4, 1.0, 1.7] {
            dev = dev.max((series_p0_equal_rates(&er, t, &w, ctl)?.value - linear_bdi_p0(&er, t)).abs());
            for k in 1..=5 {
                dev = dev.max((pk_equal_rates(&er, k, t, &w, ctl)?.value - linear_bdi_pmf(&er, k, t)).abs());
            }
        }
        for &(l, m) in &[(0.1, 0.5), (0.5, 0.1)] {
            let p = ModelParams::new(l, l, m, 1)?;
            let th = theta_coefficients(&p, series_terms(0.9))?;
            for &t in &[0.5, 2.0, 3.5] {
                for k in 0..=5 {
                    dev = dev.max((pk_alpha_eq_lambda(&p, k, t, &th, ctl)?.value - linear_bdi_pmf(&p, k, t)).abs());
                }
            }
        }
        out.push(Check::le("d = 1: max |series - negative binomial law|", dev, 1e-10));
        let gen = ModelParams::new(0.3, 0.2, 0.6, 1)?;
        let vol = solve_volterra_p0(&gen, 5.0, 500)?;
        let dev = max_abs(
            vol.times
                .iter()
                .zip(&vol.p0)
                .map(|(&t, e)| e.value - linear_bdi_p0(&gen, t)),
        );
        out.push(Check::le("d = 1: max |Volterra - classical p(0,t)|", dev, 1e-12));
        Ok(())
    });
    out
}
