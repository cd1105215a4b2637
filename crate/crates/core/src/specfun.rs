//! Special functions and log-domain term builders shared by every module.
//!
//! All factorial ratios appearing in the coherent-state series are assembled
//! in the log domain and exponentiated only after numerator and denominator
//! have been paired; `(n+3)!` at `n = 200` overflows doubles otherwise.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest index stored in the shared log-factorial table.
pub const LOG_FACTORIAL_TABLE_SIZE: usize = 1024;

/// Degree cap for the raw Hermite recurrence (overflow guard).
pub const HERMITE_MAX_DEGREE: usize = 400;

/// Table of `ln(n!)` for `n = 0..=N_table`, built once by cumulative sums.
#[derive(Debug, Clone)]
pub struct LogFactorialTable {
    values: Vec<f64>,
}

impl LogFactorialTable {
    pub fn new(n_table: usize) -> Self {
        let mut values = Vec::with_capacity(n_table + 1);
        values.push(0.0);
        for n in 1..=n_table {
            let prev = values[n - 1];
            values.push(prev + (n as f64).ln());
        }
        LogFactorialTable { values }
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> Result<f64> {
        self.values.get(n).copied().ok_or(Error::Range {
            what: "log_factorial",
            value: n,
            max: self.max_index(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

fn shared_table() -> &'static LogFactorialTable {
    static TABLE: OnceLock<LogFactorialTable> = OnceLock::new();
    TABLE.get_or_init(|| LogFactorialTable::new(LOG_FACTORIAL_TABLE_SIZE))
}

/// `ln(n!)` from the shared table.
pub fn log_factorial(n: usize) -> Result<f64> {
    shared_table().get(n)
}

/// Physicists' Hermite polynomial `H_n(x)` by the three-term recurrence
/// `H_0 = 1`, `H_1 = 2x`, `H_n = 2x H_{n-1} - 2(n-1) H_{n-2}`.
pub fn hermite(n: usize, x: f64) -> Result<f64> {
    if n > HERMITE_MAX_DEGREE {
        return Err(Error::Range {
            what: "hermite degree",
            value: n,
            max: HERMITE_MAX_DEGREE,
        });
    }
    if n == 0 {
        return Ok(1.0);
    }
    let mut hm2 = 1.0;
    let mut hm1 = 2.0 * x;
    for k in 2..=n {
        let h = 2.0 * x * hm1 - 2.0 * (k as f64 - 1.0) * hm2;
        hm2 = hm1;
        hm1 = h;
    }
    Ok(hm1)
}

/// Associated Laguerre polynomial `L^k_n(x)` by the standard recurrence.
///
/// The order `k` may be a negative integer as long as `n + k >= 0`; that is
/// the only branch the displacement-element formulas produce.
pub fn assoc_laguerre(n: usize, k: i64, x: f64) -> Result<f64> {
    if n as i64 + k < 0 {
        return Err(Error::Domain(format!(
            "assoc_laguerre requires n + k >= 0, got n = {n}, k = {k}"
        )));
    }
    let kf = k as f64;
    if n == 0 {
        return Ok(1.0);
    }
    let mut lm2 = 1.0;
    let mut lm1 = 1.0 + kf - x;
    for j in 2..=n {
        let jf = j as f64;
        let l = ((2.0 * jf - 1.0 + kf - x) * lm1 - (jf - 1.0 + kf) * lm2) / jf;
        lm2 = lm1;
        lm1 = l;
    }
    Ok(lm1)
}

/// Log magnitude of the n-th probability-series term of the nonlinear
/// coherent state: `2n*log_r - ln n! - ln (n+2)! - ln (n+3)!`.
///
/// `log_r = ln|alpha|`; the `alpha = 0` case is handled by the caller as the
/// n = 0-only state.
pub fn log_term_nlcs(n: usize, log_r: f64) -> Result<f64> {
    if !log_r.is_finite() {
        return Err(Error::Domain(format!(
            "log_term_nlcs requires finite log_r, got {log_r}"
        )));
    }
    Ok(2.0 * n as f64 * log_r - log_factorial(n)? - log_factorial(n + 2)? - log_factorial(n + 3)?)
}

/// Normalized Hermite sequence `u_n(x) = H_n(x) e^{-x^2/2} / (pi^{1/4} sqrt(2^n n!))`
/// for `n = 0..len-1`, computed with the overflow-free recurrence
/// `u_n = x sqrt(2/n) u_{n-1} - sqrt((n-1)/n) u_{n-2}`.
///
/// These are the real factors of the quadrature-eigenvector coefficients and
/// stay O(1) for every degree, unlike the raw `H_n`.
pub fn hermite_normalized_seq(x: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return out;
    }
    let u0 = (-0.5 * x * x).exp() / std::f64::consts::PI.powf(0.25);
    out.push(u0);
    if len == 1 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * x * u0);
    for n in 2..len {
        let nf = n as f64;
        let u = x * (2.0 / nf).sqrt() * out[n - 1] - ((nf - 1.0) / nf).sqrt() * out[n - 2];
        out.push(u);
    }
    out
}
