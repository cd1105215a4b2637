//! Position-space eigenfunctions of the generalized isotonic oscillator, the
//! polynomial factors entering them, the superpotential, and the differential
//! form of the deformed ladder operators.
//!
//! Levels `n = 1, 2` are rejected at the API: their absence is spectral, not
//! numerical. All derivatives are analytic (Hermite derivative identity plus
//! product/quotient rules on the envelope); the ladder operators contain
//! first derivatives and finite-difference noise would mask genuine failures
//! at the 1e-6 level.

use crate::error::{Error, Result};
use crate::specfun::hermite;

/// Check that a level index belongs to the spectrum `{0, 3, 4, 5, ...}`.
fn check_level(n: usize) -> Result<()> {
    if n == 1 || n == 2 {
        return Err(Error::Domain(format!(
            "level {n} is absent from the spectrum (allowed: 0, 3, 4, 5, ...)"
        )));
    }
    Ok(())
}

/// Polynomial factor of the eigenfunctions:
/// `P_0 = 1`; `P_n = H_n + 4n H_{n-2} + 4n(n-3) H_{n-4}` for `n >= 3`,
/// with `H_k = 0` for `k < 0`.
pub fn poly_p(n: usize, x: f64) -> Result<f64> {
    check_level(n)?;
    if n == 0 {
        return Ok(1.0);
    }
    let mut value = hermite(n, x)? + 4.0 * n as f64 * hermite(n - 2, x)?;
    if n >= 4 {
        value += 4.0 * (n as f64) * (n as f64 - 3.0) * hermite(n - 4, x)?;
    }
    Ok(value)
}

/// First derivative of the polynomial factor, via `H_k' = 2k H_{k-1}`.
fn poly_p_d1(n: usize, x: f64) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    let mut value = 2.0 * nf * hermite(n - 1, x)?;
    if n >= 3 {
        value += 4.0 * nf * 2.0 * (nf - 2.0) * hermite(n - 3, x)?;
    }
    if n >= 5 {
        value += 4.0 * nf * (nf - 3.0) * 2.0 * (nf - 4.0) * hermite(n - 5, x)?;
    }
    Ok(value)
}

/// Second derivative of the polynomial factor.
fn poly_p_d2(n: usize, x: f64) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    let mut value = 0.0;
    if n >= 2 {
        value += 4.0 * nf * (nf - 1.0) * hermite(n - 2, x)?;
    }
    if n >= 4 {
        value += 4.0 * nf * 4.0 * (nf - 2.0) * (nf - 3.0) * hermite(n - 4, x)?;
    }
    if n >= 6 {
        value += 4.0 * nf * (nf - 3.0) * 4.0 * (nf - 4.0) * (nf - 5.0) * hermite(n - 6, x)?;
    }
    Ok(value)
}

/// Normalization constant `N_n = [(n-1)(n-2) / (2^n n! sqrt(pi))]^{1/2}`.
pub fn normalization(n: usize) -> Result<f64> {
    check_level(n)?;
    let nf = n as f64;
    let log_fact: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
    let log_den = nf * 2f64.ln() + log_fact + 0.5 * std::f64::consts::PI.ln();
    Ok(((nf - 1.0) * (nf - 2.0)).sqrt() * (-0.5 * log_den).exp())
}

/// Eigenfunction `psi_n(x) = N_n P_n(x) e^{-x^2/2} / (1 + 2x^2)`.
pub fn psi(n: usize, x: f64) -> Result<f64> {
    let env = (-0.5 * x * x).exp() / (1.0 + 2.0 * x * x);
    Ok(normalization(n)? * poly_p(n, x)? * env)
}

/// `(psi_n, psi_n', psi_n'')` at `x`, all analytic.
///
/// With `E = e^{-x^2/2}/(1+2x^2)` one has `E' = -phi E` and
/// `E'' = (phi^2 - phi') E`, where `phi` is the superpotential, so
/// `psi' = N (P' - phi P) E` and `psi'' = N (P'' - 2 phi P' + (phi^2 - phi') P) E`.
pub fn psi_derivatives(n: usize, x: f64) -> Result<(f64, f64, f64)> {
    let norm = normalization(n)?;
    let env = (-0.5 * x * x).exp() / (1.0 + 2.0 * x * x);
    let p = poly_p(n, x)?;
    let dp = poly_p_d1(n, x)?;
    let ddp = poly_p_d2(n, x)?;
    let ph = superpotential(x);
    let dph = superpotential_d1(x);
    let value = norm * p * env;
    let d1 = norm * (dp - ph * p) * env;
    let d2 = norm * (ddp - 2.0 * ph * dp + (ph * ph - dph) * p) * env;
    Ok((value, d1, d2))
}

/// Superpotential `phi(x) = x + 4x/(1 + 2x^2) = -psi_0'/psi_0`.
pub fn superpotential(x: f64) -> f64 {
    x + 4.0 * x / (1.0 + 2.0 * x * x)
}

fn superpotential_d1(x: f64) -> f64 {
    let u = 1.0 + 2.0 * x * x;
    1.0 - 4.0 * (2.0 * x * x - 1.0) / (u * u)
}

/// Potential of the Schroedinger equation, `V(x) = (x^2 + 8(2x^2-1)/(2x^2+1)^2)/2`.
pub fn potential(x: f64) -> f64 {
    let u = 2.0 * x * x + 1.0;
    0.5 * (x * x + 8.0 * (2.0 * x * x - 1.0) / (u * u))
}

/// Energy of level `n` (ground-state energy not subtracted): `E_n = n - 3/2`.
pub fn energy(n: usize) -> f64 {
    n as f64 - 1.5
}

/// An eigenfunction sampled on a sorted grid, with analytic derivatives.
#[derive(Debug, Clone)]
pub struct EigenFunction {
    pub n: usize,
    pub grid_x: Vec<f64>,
    pub values: Vec<f64>,
    pub derivative_values: Vec<f64>,
}

impl EigenFunction {
    pub fn build(n: usize, grid: &[f64]) -> Result<Self> {
        check_level(n)?;
        let mut values = Vec::with_capacity(grid.len());
        let mut derivative_values = Vec::with_capacity(grid.len());
        for &x in grid {
            let (v, d1, _) = psi_derivatives(n, x)?;
            values.push(v);
            derivative_values.push(d1);
        }
        Ok(EigenFunction {
            n,
            grid_x: grid.to_vec(),
            values,
            derivative_values,
        })
    }
}

/// Partner operator `A = (d/dx + phi)/sqrt(2)` applied pointwise.
pub fn apply_partner_a(f: &EigenFunction) -> Vec<f64> {
    f.grid_x
        .iter()
        .zip(f.values.iter().zip(f.derivative_values.iter()))
        .map(|(&x, (&v, &d))| (d + superpotential(x) * v) / std::f64::consts::SQRT_2)
        .collect()
}

/// Partner operator `A^dag = (-d/dx + phi)/sqrt(2)` applied pointwise.
pub fn apply_partner_a_dag(f: &EigenFunction) -> Vec<f64> {
    f.grid_x
        .iter()
        .zip(f.values.iter().zip(f.derivative_values.iter()))
        .map(|(&x, (&v, &d))| (-d + superpotential(x) * v) / std::f64::consts::SQRT_2)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderDirection {
    Lower,
    Raise,
}

/// The deformed ladder operators in differential form, applied to `psi_n` on
/// a grid. `N_0` acting on the eigenfunction input contributes the factor `n`.
///
/// Lowering: `sqrt(2) N_- = [2(2x^2-1)/(1+2x^2)^2 - 1][d/dx + phi] + [d/dx + x] N_0`;
/// raising:  `sqrt(2) N_+ = -2(2x^2-1)/(1+2x^2)^2 [d/dx + phi] + [-d/dx + x] N_0`.
pub fn apply_differential_ladder(
    n: usize,
    direction: LadderDirection,
    grid: &[f64],
) -> Result<Vec<f64>> {
    check_level(n)?;
    let nf = n as f64;
    let mut out = Vec::with_capacity(grid.len());
    for &x in grid {
        let (v, d1, _) = psi_derivatives(n, x)?;
        let u = 1.0 + 2.0 * x * x;
        let bump = 2.0 * (2.0 * x * x - 1.0) / (u * u);
        let acting = d1 + superpotential(x) * v;
        let value = match direction {
            LadderDirection::Lower => (bump - 1.0) * acting + nf * (d1 + x * v),
            LadderDirection::Raise => -bump * acting + nf * (-d1 + x * v),
        };
        out.push(value / std::f64::consts::SQRT_2);
    }
    Ok(out)
}

/// Gauss-Legendre nodes and weights on `[a, b]`, by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n_nodes: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n_nodes >= 2);
    let mut nodes = vec![0.0; n_nodes];
    let mut weights = vec![0.0; n_nodes];
    let nf = n_nodes as f64;
    for i in 0..n_nodes.div_ceil(2) {
        // Chebyshev-like initial guess for the i-th root
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n(x) and P_n'(x)
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n_nodes {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n_nodes - 1 - i] = x;
        weights[i] = w;
        weights[n_nodes - 1 - i] = w;
    }
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    for i in 0..n_nodes {
        nodes[i] = mid + half * nodes[i];
        weights[i] *= half;
    }
    (nodes, weights)
}

/// Default quadrature rule for eigenfunction integrals: Gauss-Legendre on
/// `[-12, 12]` with 800 nodes. The integrands are smooth with Gaussian decay,
/// so this is deliberate overkill.
pub fn default_quadrature() -> (Vec<f64>, Vec<f64>) {
    gauss_legendre(800, -12.0, 12.0)
}
