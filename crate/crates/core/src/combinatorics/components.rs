use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::exact::ratio_f64;
use crate::error::{domain, Error, Result};

fn factorials(n: usize) -> Vec<BigUint> {
    let mut f = vec![BigUint::one()];
    for k in 1..=n {
        let next = &f[k - 1] * k as u64;
        f.push(next);
    }
    f
}

/// `t(n,1)` for `n = 0..=n_max` (index 0 holds 0), from
/// `t(n,1) = n! - sum_{j<n} (n-j)! t(j,1)`.
pub fn indecomposable_counts(n_max: usize) -> Vec<BigUint> {
    let fact = factorials(n_max);
    let mut t = vec![BigUint::zero(); n_max + 1];
    for n in 1..=n_max {
        let mut s = BigUint::zero();
        for j in 1..n {
            s += &fact[n - j] * &t[j];
        }
        t[n] = &fact[n] - s;
    }
    t
}

/// Exact table of `t(n,k)` for `1 <= k <= n <= n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct PermutationComponentTable {
    rows: Vec<Vec<BigUint>>,
}

/// Builds the table from the indecomposable counts and the convolution
/// `t(n,k) = sum_j t(j,1) t(n-j,k-1)`.
pub fn t_table_recursive(n_max: usize) -> Result<PermutationComponentTable> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let t1 = indecomposable_counts(n_max);
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut row = Vec::with_capacity(n);
        row.push(t1[n].clone());
        for k in 2..=n {
            let mut s = BigUint::zero();
            for j in 1..=n - k + 1 {
                s += &t1[j] * &rows[n - j - 1][k - 2];
            }
            row.push(s);
        }
        rows.push(row);
    }
    Ok(PermutationComponentTable { rows })
}

impl PermutationComponentTable {
    pub fn n_max(&self) -> usize {
        self.rows.len()
    }

    /// `t(n,k)`, zero when `k` is 0 or exceeds `n`. Panics if `n > n_max`.
    pub fn get(&self, n: usize, k: usize) -> BigUint {
        assert!(n >= 1 && n <= self.n_max(), "n = {n} outside table");
        if k == 0 || k > n {
            BigUint::zero()
        } else {
            self.rows[n - 1][k - 1].clone()
        }
    }

    pub fn row(&self, n: usize) -> &[BigUint] {
        &self.rows[n - 1]
    }

    pub fn row_sum(&self, n: usize) -> BigUint {
        self.row(n).iter().sum()
    }

    /// `sum_k t(n,k) d^k`.
    pub fn weighted_row_sum(&self, n: usize, d: u32) -> BigUint {
        let d = BigUint::from(d);
        self.row(n).iter().rev().fold(BigUint::zero(), |acc, t| (acc + t) * &d)
    }
}

/// Reciprocal multinomial sums over compositions with parts `>= 2`:
/// `r[j][m] = sum prod(s_i!) / m!`.
fn inverse_multinomial_sums(m_max: usize, j_max: usize) -> Vec<Vec<BigRational>> {
    let fact: Vec<BigInt> = factorials(m_max).into_iter().map(BigInt::from).collect();
    let mut r = vec![vec![BigRational::zero(); m_max + 1]; j_max + 1];
    r[0][0] = BigRational::one();
    for j in 1..=j_max {
        for m in 2 * j..=m_max {
            let mut acc = BigRational::zero();
            for s in 2..=m - 2 * (j - 1) {
                if r[j - 1][m - s].is_zero() {
                    continue;
                }
                let w = BigRational::new(&fact[m - s] * &fact[s], fact[m].clone());
                acc += &r[j - 1][m - s] * w;
            }
            r[j][m] = acc;
        }
    }
    r
}

fn binom(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * (n - i) / (i + 1);
    }
    c
}

fn sign(e: usize) -> BigInt {
    if e % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// `t(n,k)` from the alternating inverse-multinomial closed form, in exact
/// rationals; returns [`Error::Integrality`] if the result is not a
/// nonnegative integer.
pub fn t_closed_form(n: usize, k: usize) -> Result<BigUint> {
    if n == 0 || k == 0 || k > n {
        return Err(domain(
            "t_closed_form",
            format!("need 1 <= k <= n, got n = {n}, k = {k}"),
        ));
    }
    if k == n {
        return Ok(BigUint::one());
    }
    let m_max = 2 * n;
    let r = inverse_multinomial_sums(m_max, n);
    let fact: Vec<BigInt> = factorials(m_max).into_iter().map(BigInt::from).collect();
    let q = |j: usize, m: usize| &r[j][m] * BigRational::from_integer(fact[m].clone());
    let mut s;
    if k == 1 {
        s = BigRational::from_integer(&fact[n] + sign(n - 1));
        for kk in 1..n - 1 {
            for j in 1..n - kk {
                let m = n - kk - 1 + j;
                s += q(j, m) * BigRational::from_integer(sign(kk) * binom(kk + 1, j));
            }
        }
    } else {
        s = BigRational::from_integer(binom(n - 1, k - 1) * sign(n - k));
        for rr in k - 1..n - 1 {
            for j in 1..n - rr {
                let m = n - rr - 1 + j;
                let c = binom(rr, k - 1) * sign(rr + 1 - k) * binom(rr + 1, j);
                s += q(j, m) * BigRational::from_integer(c);
            }
        }
    }
    if !s.is_integer() || s.is_negative() {
        return Err(Error::Integrality {
            n,
            k,
            value: s.to_string(),
        });
    }
    Ok(s.to_integer().to_biguint().expect("checked nonnegative"))
}

/// Number of components of a permutation of `1..n` (one-based values).
pub fn component_count(perm: &[usize]) -> usize {
    let mut max = 0;
    let mut count = 0;
    for (i, &v) in perm.iter().enumerate() {
        max = max.max(v);
        if max == i + 1 {
            count += 1;
        }
    }
    count
}

/// Counts `t(n,1..=n)` by enumerating all permutations; `n <= 9`.
pub fn t_bruteforce_row(n: usize) -> Result<Vec<u64>> {
    if n == 0 || n > 9 {
        return Err(domain(
            "t_bruteforce",
            format!("enumeration limited to 1 <= n <= 9, got {n}"),
        ));
    }
    let mut counts = vec![0u64; n];
    for p in (1..=n).permutations(n) {
        counts[component_count(&p) - 1] += 1;
    }
    Ok(counts)
}

/// `t(n,k)` by enumeration; `n <= 9`.
pub fn t_bruteforce(n: usize, k: usize) -> Result<u64> {
    let row = t_bruteforce_row(n)?;
    Ok(if k == 0 || k > n { 0 } else { row[k - 1] })
}

/// Weights `w_n = sum_k t(n,k) d^k / n!` of the equal-rates series.
///
/// The full triangle costs `O(n^3)` big-integer operations; the weights only
/// need the generating-function identity `c = d t1 + d t1 * c`, which is
/// `O(n^2)`. [`ComponentWeights::from_table`] uses the triangle directly.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentWeights {
    d: u32,
    weights: Vec<f64>,
}

impl ComponentWeights {
    pub fn new(d: u32, n_max: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("d must be positive".into()));
        }
        let t1 = indecomposable_counts(n_max);
        let fact = factorials(n_max);
        let dd = BigUint::from(d);
        let mut c = vec![BigUint::zero(); n_max + 1];
        let mut weights = vec![1.0; n_max + 1];
        for n in 1..=n_max {
            let mut s = t1[n].clone();
            for j in 1..n {
                s += &t1[j] * &c[n - j];
            }
            c[n] = s * &dd;
            weights[n] = ratio_f64(&c[n], &fact[n]);
        }
        Ok(ComponentWeights { d, weights })
    }

    pub fn from_table(table: &PermutationComponentTable, d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("d must be positive".into()));
        }
        let fact = factorials(table.n_max());
        let mut weights = vec![1.0; table.n_max() + 1];
        for n in 1..=table.n_max() {
            weights[n] = ratio_f64(&table.weighted_row_sum(n, d), &fact[n]);
        }
        Ok(ComponentWeights { d, weights })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n_max(&self) -> usize {
        self.weights.len() - 1
    }

    /// `w_n`; `w_0 = 1`.
    pub fn get(&self, n: usize) -> f64 {
        self.weights[n]
    }
}
