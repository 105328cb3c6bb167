#![allow(dead_code)]

/// Law of the aggregated level `N(t)` from the forward equations of the
/// chain truncated at `k_cap`, integrated by classical RK4.
/// Level 0 is the origin (up rate `d alpha`); level `k` moves up at
/// `alpha + lambda k` and down at `mu k`.
pub fn level_law(alpha: f64, lambda: f64, mu: f64, d: u32, t: f64, k_cap: usize) -> Vec<f64> {
    let up: Vec<f64> = (0..=k_cap)
        .map(|k| match k {
            0 => d as f64 * alpha,
            k if k == k_cap => 0.0,
            k => alpha + lambda * k as f64,
        })
        .collect();
    let down: Vec<f64> = (0..=k_cap).map(|k| mu * k as f64).collect();
    let rhs = |p: &[f64], out: &mut [f64]| {
        for k in 0..=k_cap {
            let mut v = -(up[k] + down[k]) * p[k];
            if k > 0 {
                v += up[k - 1] * p[k - 1];
            }
            if k < k_cap {
                v += down[k + 1] * p[k + 1];
            }
            out[k] = v;
        }
    };
    let rate = up.iter().zip(&down).map(|(u, d)| u + d).fold(0.0, f64::max);
    let steps = ((t * rate.max(1.0) / 0.05).ceil() as usize).max(2000);
    let h = t / steps as f64;
    let n = k_cap + 1;
    let mut p = vec![0.0; n];
    p[0] = 1.0;
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
        (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for _ in 0..steps {
        rhs(&p, &mut k1);
        for i in 0..n {
            tmp[i] = p[i] + 0.5 * h * k1[i];
        }
        rhs(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = p[i] + 0.5 * h * k2[i];
        }
        rhs(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = p[i] + h * k3[i];
        }
        rhs(&tmp, &mut k4);
        for i in 0..n {
            p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    p
}
