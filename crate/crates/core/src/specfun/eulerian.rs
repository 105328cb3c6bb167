use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Polynomial with exact integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<BigInt>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficient_sum(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Exact evaluation at a rational point.
    pub fn eval_exact(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Horner evaluation in floating point.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::INFINITY))
    }
}

/// Rows of the Eulerian triangle, `A(n, k)` for `k = 0..n-1`.
///
/// Row 0 is `[1]` so that `A_0 = A_1 = 1`; afterwards
/// `A(n,k) = (k+1) A(n-1,k) + (n-k) A(n-1,k-1)`.
#[derive(Debug, Clone, Default)]
pub struct EulerianRows {
    n: usize,
    row: Vec<BigUint>,
}

impl EulerianRows {
    pub fn new() -> Self {
        EulerianRows { n: 0, row: Vec::new() }
    }
}

impl Iterator for EulerianRows {
    type Item = Vec<BigUint>;

    fn next(&mut self) -> Option<Self::Item> {
        let n = self.n;
        self.row = if n <= 1 {
            vec![BigUint::from(1u32)]
        } else {
            let prev = &self.row;
            (0..n)
                .map(|k| {
                    let mut v = BigUint::zero();
                    if k < prev.len() {
                        v += &prev[k] * (k as u64 + 1);
                    }
                    if k >= 1 {
                        v += &prev[k - 1] * (n - k) as u64;
                    }
                    v
                })
                .collect()
        };
        self.n += 1;
        Some(self.row.clone())
    }
}

/// Eulerian polynomial `A_n(t) = sum_k A(n,k) t^k` with exact coefficients.
pub fn eulerian_polynomial(n: usize) -> Polynomial {
    let row = EulerianRows::new().nth(n).expect("infinite iterator");
    Polynomial::new(row.into_iter().map(BigInt::from).collect())
}
