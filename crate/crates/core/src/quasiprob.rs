//! Quadrature distribution, displacement-operator matrix elements, the
//! s-parameterized quasi-probability family (Glauber-Sudarshan P at s = 1,
//! Wigner at s = 0, Husimi at s = -1), Wigner-negativity scans and the
//! singular P-function coefficients.
//!
//! The double sums are assembled per term in the log domain: amplitudes,
//! factorial ratios and the `(s±1)` powers are folded into one exponent so
//! no intermediate product can overflow, with only the Laguerre recurrence
//! evaluated in the linear domain.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fockspace::{OperatorMatrix, TruncatedBasis};
use crate::specfun::{hermite_normalized_seq, log_factorial};
use crate::states::{StateKind, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    Wigner,
    Husimi,
    Quadrature,
    SGeneral,
}

impl GridKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            GridKind::Wigner => "wigner",
            GridKind::Husimi => "husimi",
            GridKind::Quadrature => "quadrature",
            GridKind::SGeneral => "sgeneral",
        }
    }
}

/// Rectangular grid of real values over `(x, p)` or `(x, phi)`.
#[derive(Debug, Clone)]
pub struct PhaseGrid {
    pub kind: GridKind,
    /// Ordering parameter for the quasi-probability kinds; NaN for
    /// quadrature grids, where it has no meaning.
    pub s: f64,
    /// `(x_min, x_max, y_min, y_max)`
    pub window: (f64, f64, f64, f64),
    /// `(nx, ny)` grid points, axis values inclusive of both window edges.
    pub resolution: (usize, usize),
    /// Row-major values, `values[ix * ny + iy]`.
    pub values: Vec<f64>,
}

impl PhaseGrid {
    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[ix * self.resolution.1 + iy]
    }

    pub fn axis_x(&self) -> Vec<f64> {
        axis(self.window.0, self.window.1, self.resolution.0)
    }

    pub fn axis_y(&self) -> Vec<f64> {
        axis(self.window.2, self.window.3, self.resolution.1)
    }

    /// Riemann-sum integral over the window.
    pub fn integral(&self) -> f64 {
        let dx = (self.window.1 - self.window.0) / (self.resolution.0 - 1) as f64;
        let dy = (self.window.3 - self.window.2) / (self.resolution.1 - 1) as f64;
        self.values.iter().sum::<f64>() * dx * dy
    }

    /// Minimum value and its grid indices.
    pub fn min(&self) -> (f64, usize, usize) {
        let mut best = (f64::INFINITY, 0, 0);
        for ix in 0..self.resolution.0 {
            for iy in 0..self.resolution.1 {
                let v = self.value(ix, iy);
                if v < best.0 {
                    best = (v, ix, iy);
                }
            }
        }
        best
    }
}

pub fn axis(min: f64, max: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2);
    let step = (max - min) / (count - 1) as f64;
    (0..count).map(|i| min + step * i as f64).collect()
}

/// Coefficients of the quadrature eigenstate `|x, phi>` in the shifted
/// basis: `<ñ|x,phi> = e^{-x^2/2} pi^{-1/4} H_n(x) e^{i n phi} / sqrt(2^n n!)`.
///
/// This is a generalized eigenvector of the rotated quadrature, not a
/// normalizable state.
pub fn quadrature_eigenvector(x: f64, phi: f64, basis: &TruncatedBasis) -> Vec<Complex64> {
    let reals = hermite_normalized_seq(x, basis.dim());
    let rot = Complex64::from_polar(1.0, phi);
    let mut phase = Complex64::new(1.0, 0.0);
    reals
        .into_iter()
        .map(|u| {
            let c = u * phase;
            phase *= rot;
            c
        })
        .collect()
}

/// Quadrature distribution `P(x, phi) = |<x,phi|state>|^2` over a grid.
///
/// Computed as the squared modulus of the single overlap sum; the printed
/// double-sum form is algebraically identical and kept as a test oracle
/// (this route is O(n) per grid point instead of O(n^2) and rounds better).
pub fn quadrature_distribution(state: &StateVector, x_grid: &[f64], phi_grid: &[f64]) -> PhaseGrid {
    let dim = state.basis().dim();
    let support = state.support_limit(1e-18);
    let mut values = vec![0.0; x_grid.len() * phi_grid.len()];
    for (ix, &x) in x_grid.iter().enumerate() {
        let u = hermite_normalized_seq(x, dim);
        for (iphi, &phi) in phi_grid.iter().enumerate() {
            // <x,phi|state> = sum_n conj(coef_n) c_n with coef_n carrying e^{i n phi}
            let rot = Complex64::from_polar(1.0, -phi);
            let mut phase = Complex64::new(1.0, 0.0);
            let mut acc = Complex64::new(0.0, 0.0);
            for (un, cn) in u.iter().zip(state.amplitudes()).take(support + 1) {
                acc += un * phase * cn;
                phase *= rot;
            }
            values[ix * phi_grid.len() + iphi] = acc.norm_sqr();
        }
    }
    PhaseGrid {
        kind: GridKind::Quadrature,
        s: f64::NAN,
        window: (
            x_grid[0],
            *x_grid.last().unwrap(),
            phi_grid[0],
            *phi_grid.last().unwrap(),
        ),
        resolution: (x_grid.len(), phi_grid.len()),
        values,
    }
}

fn laguerre_seq(max_n: usize, k: i64, x: f64) -> Vec<f64> {
    let kf = k as f64;
    let mut out = Vec::with_capacity(max_n + 1);
    out.push(1.0);
    if max_n == 0 {
        return out;
    }
    out.push(1.0 + kf - x);
    for j in 2..=max_n {
        let jf = j as f64;
        let l = ((2.0 * jf - 1.0 + kf - x) * out[j - 1] - (jf - 1.0 + kf) * out[j - 2]) / jf;
        out.push(l);
    }
    out
}

/// Matrix element of the unitary displacement operator in the shifted basis,
/// `<m̃|D(lambda)|ñ>`.
///
/// For `m >= n` this is `e^{-|l|^2/2} sqrt(n!/m!) l^{m-n} L_n^{m-n}(|l|^2)`;
/// the printed formula is valid only on that branch (the Laguerre order goes
/// negative otherwise), and `m < n` follows from the conjugation identity
/// `<m|D(l)|n> = conj(<n|D(-l)|m>)`.
pub fn displacement_element(m: usize, n: usize, lambda: Complex64) -> Complex64 {
    let r2 = lambda.norm_sqr();
    let (lo, hi, phase_base) = if m >= n {
        (n, m, lambda)
    } else {
        (m, n, -lambda.conj())
    };
    let d = hi - lo;
    let lf_lo = log_factorial(lo).expect("index within table");
    let lf_hi = log_factorial(hi).expect("index within table");
    let mut log_mag = -0.5 * r2 + 0.5 * (lf_lo - lf_hi);
    if d > 0 {
        if r2 == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        log_mag += d as f64 * phase_base.norm().ln();
    }
    let laguerre = laguerre_seq(lo, d as i64, r2)[lo];
    Complex64::from_polar(log_mag.exp(), d as f64 * phase_base.arg()) * laguerre
}

/// The full displacement matrix on a truncated basis.
pub fn displacement_matrix(basis: &TruncatedBasis, lambda: Complex64) -> OperatorMatrix {
    let dim = basis.dim();
    let mut out = OperatorMatrix::zeros(basis, format!("D({:+.3}{:+.3}i)", lambda.re, lambda.im));
    for m in 0..dim {
        for n in 0..dim {
            out.set(m, n, displacement_element(m, n, lambda));
        }
    }
    out
}

/// `F(z, s)`: the s-parameterized quasi-probability function of a pure
/// state, by the branch-normalized double sum over the density-matrix
/// coefficients `B_{n,m} = c_n conj(c_m)`.
///
/// `s = 1` is the singular P-function regime and is delegated to
/// [`p_function_coefficients`]. At `s = -1` the printed sum is an
/// indeterminate limit (`(s+1)^n` vanishes while the Laguerre argument
/// diverges); the term-wise limit `(s+1)^n L_n^{m-n}(4|z|^2/(1-s^2)) ->
/// (-2|z|^2)^n / n!` is evaluated instead, which keeps every `n` in the sum.
/// The imaginary part of the accumulated sum is asserted below 1e-9 (the
/// n<->m term pairs are conjugate) and the real part returned.
pub fn s_function(state: &StateVector, z: Complex64, s: f64) -> Result<f64> {
    if s >= 1.0 {
        return Err(Error::Domain(format!(
            "s = {s} is outside the evaluable range; s = 1 is the singular \
             P-function regime, see p_function_coefficients"
        )));
    }
    let support = state.support_limit(1e-18);
    let lf: Vec<f64> = (0..=support).map(log_factorial).collect::<Result<_>>()?;
    let amps = state.amplitudes();
    let r2 = z.norm_sqr();
    let husimi_limit = (s + 1.0).abs() < 1e-12;

    let prefactor = 2.0 * (2.0 * r2 / (s - 1.0)).exp() / (std::f64::consts::PI * (1.0 - s));
    let log_2z = if r2 > 0.0 { (2.0 * z.norm()).ln() } else { 0.0 };
    let arg_neg_z = (-z).arg();
    let (log_sp, log_sm) = if husimi_limit {
        (0.0, 0.0)
    } else {
        ((s + 1.0).abs().ln(), (s - 1.0).abs().ln())
    };
    let t = if husimi_limit {
        0.0
    } else {
        4.0 * r2 / (1.0 - s * s)
    };

    let mut acc = Complex64::new(0.0, 0.0);
    for d in 0..=support {
        if d > 0 && r2 == 0.0 {
            break;
        }
        let lag = laguerre_seq(support - d, d as i64, t);
        for j in 0..=(support - d) {
            let cn = amps[j];
            let cm = amps[j + d];
            if cn.norm_sqr() == 0.0 || cm.norm_sqr() == 0.0 {
                continue;
            }
            let (radial, sign, poly) = if husimi_limit {
                // term-wise s -> -1 limit
                if j > 0 && r2 == 0.0 {
                    continue;
                }
                let radial = if j > 0 {
                    j as f64 * (2.0 * r2).ln() - lf[j]
                } else {
                    0.0
                };
                let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
                (radial - (j + d) as f64 * 2f64.ln(), sign, 1.0)
            } else {
                let radial = j as f64 * log_sp - (j + d) as f64 * log_sm;
                let mut sign = if (j + d) % 2 == 0 { 1.0 } else { -1.0 };
                if s < -1.0 && j % 2 == 1 {
                    sign = -sign;
                }
                (radial, sign, lag[j])
            };
            let log_mag = cn.norm().ln()
                + cm.norm().ln()
                + d as f64 * log_2z
                + 0.5 * (lf[j] - lf[j + d])
                + radial;
            let magnitude = sign * log_mag.exp() * poly;
            let phase_up = cn.arg() - cm.arg() + d as f64 * arg_neg_z;
            acc += Complex64::from_polar(1.0, phase_up) * magnitude;
            if d > 0 {
                let phase_lo = cm.arg() - cn.arg() - d as f64 * arg_neg_z;
                acc += Complex64::from_polar(1.0, phase_lo) * magnitude;
            }
        }
    }
    let value = prefactor * acc;
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::NonFinite("s_function double sum"));
    }
    if value.im.abs() >= 1e-9 {
        return Err(Error::NonFinite(
            "s_function imaginary part exceeds 1e-9; n<->m term pairs are not conjugate",
        ));
    }
    Ok(value.re)
}

/// Window centered on the quadrature means `(sqrt2 Re<K_->, sqrt2 Im<K_->)`
/// with half-width `6 max(1, sqrt<K_0>)`.
pub fn default_window(state: &StateVector) -> (f64, f64, f64, f64) {
    let amps = state.amplitudes();
    let mut k_minus = Complex64::new(0.0, 0.0);
    let mut k_zero = 0.0;
    for n in 1..amps.len() {
        k_minus += amps[n - 1].conj() * amps[n] * (n as f64).sqrt();
    }
    for (n, c) in amps.iter().enumerate() {
        k_zero += n as f64 * c.norm_sqr();
    }
    let cx = std::f64::consts::SQRT_2 * k_minus.re;
    let cy = std::f64::consts::SQRT_2 * k_minus.im;
    let hw = 6.0 * k_zero.sqrt().max(1.0);
    (cx - hw, cx + hw, cy - hw, cy + hw)
}

/// Evaluate `F(z, s)` over a rectangular `(x, p)` window with `z = x + i p`.
pub fn phase_grid(
    state: &StateVector,
    kind: GridKind,
    s: f64,
    window: (f64, f64, f64, f64),
    resolution: (usize, usize),
) -> Result<PhaseGrid> {
    let xs = axis(window.0, window.1, resolution.0);
    let ps = axis(window.2, window.3, resolution.1);
    let mut values = vec![0.0; resolution.0 * resolution.1];
    for (ix, &x) in xs.iter().enumerate() {
        for (ip, &p) in ps.iter().enumerate() {
            values[ix * resolution.1 + ip] = s_function(state, Complex64::new(x, p), s)?;
        }
    }
    Ok(PhaseGrid {
        kind,
        s,
        window,
        resolution,
        values,
    })
}

/// Wigner function over the window (`s = 0`).
pub fn wigner_grid(
    state: &StateVector,
    window: (f64, f64, f64, f64),
    resolution: (usize, usize),
) -> Result<PhaseGrid> {
    phase_grid(state, GridKind::Wigner, 0.0, window, resolution)
}

/// Husimi function over the window (`s = -1`).
pub fn husimi_grid(
    state: &StateVector,
    window: (f64, f64, f64, f64),
    resolution: (usize, usize),
) -> Result<PhaseGrid> {
    phase_grid(state, GridKind::Husimi, -1.0, window, resolution)
}

/// Outcome of a Wigner-negativity scan.
#[derive(Debug, Clone, Copy)]
pub struct NegativityReport {
    pub min_value: f64,
    pub min_location: Complex64,
    /// Fraction of grid cells below -1e-9.
    pub negative_fraction: f64,
}

pub fn wigner_negativity_scan(
    state: &StateVector,
    window: (f64, f64, f64, f64),
    resolution: (usize, usize),
) -> Result<NegativityReport> {
    let grid = wigner_grid(state, window, resolution)?;
    let (min_value, ix, iy) = grid.min();
    let xs = grid.axis_x();
    let ps = grid.axis_y();
    let negative = grid.values.iter().filter(|&&v| v < -1e-9).count();
    Ok(NegativityReport {
        min_value,
        min_location: Complex64::new(xs[ix], ps[iy]),
        negative_fraction: negative as f64 / grid.values.len() as f64,
    })
}

/// Coefficients `{B_{n,n} (-1)^n}` of the singular P-function expansion
/// `P(z) = (1/pi) sum B_{n,n} (-1)^n e^{|z|^2} d^n/d(|z|^2)^n delta(|z|^2)`.
///
/// These are distributional coefficients and are reported as numbers, never
/// rendered on a grid. Only nonlinear coherent states carry this expansion.
#[derive(Debug, Clone)]
pub struct SingularP {
    /// Signed coefficients, index = derivative order of the delta function.
    pub coefficients: Vec<f64>,
    /// Highest order whose coefficient is at least `1e-16 * B_{0,0}`.
    pub max_order: usize,
}

pub fn p_function_coefficients(state: &StateVector) -> Result<SingularP> {
    if state.kind() != StateKind::Nonlinear {
        return Err(Error::UnsupportedState {
            label: state.label().to_string(),
            reason: "the singular P-function expansion is derived for nonlinear coherent states"
                .to_string(),
        });
    }
    // B_{n,n} = |c_n|^2 = P(n)
    let p = state.probabilities();
    let threshold = 1e-16 * p[0];
    let max_order = p
        .iter()
        .enumerate()
        .rev()
        .find(|(_, &w)| w >= threshold)
        .map(|(n, _)| n)
        .unwrap_or(0);
    let coefficients = (0..=max_order)
        .map(|n| if n % 2 == 0 { p[n] } else { -p[n] })
        .collect();
    Ok(SingularP {
        coefficients,
        max_order,
    })
}

/// What the printed closed forms claim the Husimi function is, next to what
/// the evaluable limit gives; the two disagree for superposition states and
/// the overlap oracle arbitrates.
#[derive(Debug, Clone, Copy)]
pub struct HusimiDiagnostic {
    /// `F(z, -1)` by the term-wise limit of the double sum.
    pub f_limit: f64,
    /// The n = 0-only reading of the printed sum at s = -1 (complex, and not
    /// a probability density for superposition states).
    pub naive_n0_only: Complex64,
    /// The printed Gaussian claim `N_alpha^2 / pi * e^{-|z|^2}`.
    pub printed_gaussian: Option<f64>,
}

pub fn husimi_diagnostic(state: &StateVector, z: Complex64) -> Result<HusimiDiagnostic> {
    let f_limit = s_function(state, z, -1.0)?;
    let amps = state.amplitudes();
    let support = state.support_limit(1e-18);
    let mut naive = Complex64::new(0.0, 0.0);
    for m in 0..=support {
        let lf = log_factorial(m)?;
        let zm = if m == 0 {
            Complex64::new(1.0, 0.0)
        } else if z.norm_sqr() == 0.0 {
            continue;
        } else {
            Complex64::from_polar(
                (m as f64 * z.norm().ln() - 0.5 * lf).exp(),
                m as f64 * z.arg(),
            )
        };
        naive += amps[0] * amps[m].conj() * zm;
    }
    naive *= (-z.norm_sqr()).exp() / std::f64::consts::PI;
    let printed_gaussian = if state.kind() == StateKind::Nonlinear {
        // N_alpha enters the printed claim; recover it from c_0 = N_alpha/sqrt(12)
        let n_alpha_sq = amps[0].norm_sqr() * 12.0;
        Some(n_alpha_sq / std::f64::consts::PI * (-z.norm_sqr()).exp())
    } else {
        None
    };
    Ok(HusimiDiagnostic {
        f_limit,
        naive_n0_only: naive,
        printed_gaussian,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigenbasis::gauss_legendre;
    use crate::states::{canonical_build, nlcs_build};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn basis(n_max: usize) -> TruncatedBasis {
        TruncatedBasis::new(n_max).unwrap()
    }

    // ---- oracles -------------------------------------------------------

    // Husimi from the overlap with the shifted coherent ket,
    // <z|ñ> = e^{-|z|^2/2} conj(z)^n / sqrt(n!)
    fn husimi_overlap(state: &StateVector, z: Complex64) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new((-0.5 * z.norm_sqr()).exp(), 0.0);
        for (n, c) in state.amplitudes().iter().enumerate() {
            acc += term.conj() * c;
            term = term * z / ((n + 1) as f64).sqrt();
        }
        acc.norm_sqr() / std::f64::consts::PI
    }

    // Wigner from the displaced-parity sum
    fn wigner_parity(state: &StateVector, z: Complex64) -> f64 {
        let dim = state.basis().dim();
        let mut acc = 0.0;
        for k in 0..dim {
            let mut amp = Complex64::new(0.0, 0.0);
            for (n, c) in state.amplitudes().iter().enumerate() {
                if c.norm_sqr() > 0.0 {
                    amp += displacement_element(k, n, -z) * c;
                }
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * amp.norm_sqr();
        }
        2.0 / std::f64::consts::PI * acc
    }

    // matrix exponential by scaling and squaring with a Taylor series
    fn matexp(a: &OperatorMatrix) -> OperatorMatrix {
        let dim = a.dim();
        let norm: f64 = (0..dim)
            .map(|i| (0..dim).map(|j| a.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max);
        let squarings = norm.log2().ceil().max(0.0) as u32 + 1;
        let scale = 2f64.powi(-(squarings as i32));
        let mut scaled = OperatorMatrix::zeros(a.basis(), "scaled");
        for i in 0..dim {
            for j in 0..dim {
                scaled.set(i, j, a.get(i, j) * scale);
            }
        }
        let mut result = OperatorMatrix::identity(a.basis());
        let mut term = OperatorMatrix::identity(a.basis());
        for k in 1..=24 {
            term = term.matmul(&scaled).unwrap();
            let inv = 1.0 / k as f64;
            for i in 0..dim {
                for j in 0..dim {
                    term.set(i, j, term.get(i, j) * inv);
                }
            }
            result = result.add(&term).unwrap();
        }
        for _ in 0..squarings {
            result = result.matmul(&result).unwrap();
        }
        result
    }

    // ---- quadrature eigenvectors and distribution -----------------------

    #[test]
    fn quadrature_eigenvector_values() {
        let b = basis(32);
        let coeffs = quadrature_eigenvector(0.0, 0.0, &b);
        // H_1(0) = 0
        assert_abs_diff_eq!(coeffs[1].norm(), 0.0, epsilon = 1e-15);
        // pi^{-1/4}
        assert_relative_eq!(coeffs[0].re, 0.7511255444649425, max_relative = 1e-13);
        // phase carried per level is e^{i n phi}
        let rotated = quadrature_eigenvector(0.7, 0.4, &b);
        let flat = quadrature_eigenvector(0.7, 0.0, &b);
        for n in 0..10 {
            let expect = flat[n] * Complex64::from_polar(1.0, 0.4 * n as f64);
            assert_abs_diff_eq!(rotated[n].re, expect.re, epsilon = 1e-14);
            assert_abs_diff_eq!(rotated[n].im, expect.im, epsilon = 1e-14);
        }
    }

    #[test]
    fn quadrature_distribution_of_canonical_is_displaced_gaussian() {
        let b = basis(120);
        let zeta = 2.0f64;
        let state = canonical_build(Complex64::new(zeta, 0.0), &b).unwrap();
        let xs = axis(-4.0, 8.0, 121);
        let grid = quadrature_distribution(&state, &xs, &[0.0]);
        for (ix, &x) in xs.iter().enumerate() {
            let mean = std::f64::consts::SQRT_2 * zeta;
            let expect = (-(x - mean).powi(2)).exp() / std::f64::consts::PI.sqrt();
            assert_abs_diff_eq!(grid.value(ix, 0), expect, epsilon = 1e-8);
        }
    }

    #[test]
    fn quadrature_distribution_normalizes_per_phi() {
        let b = basis(64);
        let state = nlcs_build(Complex64::from_polar(5.0, 0.5), &b).unwrap();
        let (xs, ws) = gauss_legendre(400, -12.0, 12.0);
        let phis = [0.0, 0.5, 1.3, 2.9];
        let grid = quadrature_distribution(&state, &xs, &phis);
        for (iphi, _) in phis.iter().enumerate() {
            let total: f64 = xs
                .iter()
                .enumerate()
                .map(|(ix, _)| ws[ix] * grid.value(ix, iphi))
                .sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn quadrature_distribution_matches_double_sum_oracle() {
        let b = basis(64);
        let r = 2.0;
        let theta = 0.5;
        let state = nlcs_build(Complex64::from_polar(r, theta), &b).unwrap();
        // printed double sum with cos[(n-m)(theta-phi)]
        let fact = |m: usize| (1..=m).map(|k| k as f64).product::<f64>();
        let n_alpha_sq = state.amplitudes()[0].norm_sqr() * 12.0;
        let oracle = |x: f64, phi: f64| {
            let mut sum = 0.0;
            for n in 0..30usize {
                for m in 0..30usize {
                    let hn = crate::specfun::hermite(n, x).unwrap();
                    let hm = crate::specfun::hermite(m, x).unwrap();
                    let den = fact(n)
                        * fact(m)
                        * (2f64.powi((n + m) as i32)
                            * fact(n + 2)
                            * fact(m + 2)
                            * fact(n + 3)
                            * fact(m + 3))
                        .sqrt();
                    sum += r.powi((n + m) as i32)
                        * ((n as f64 - m as f64) * (theta - phi)).cos()
                        * hn
                        * hm
                        / den;
                }
            }
            n_alpha_sq * (-x * x).exp() / std::f64::consts::PI.sqrt() * sum
        };
        for &x in &[0.0, 0.8, -1.3, 2.4] {
            for &phi in &[0.0, 0.7, 2.1] {
                let grid = quadrature_distribution(&state, &[x], &[phi]);
                assert_abs_diff_eq!(grid.value(0, 0), oracle(x, phi), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn quadrature_marginal_mean_of_canonical() {
        // first moment of P(x, 0) recovers sqrt(2) Re zeta
        let b = basis(120);
        let zeta = Complex64::new(1.3, 0.0);
        let state = canonical_build(zeta, &b).unwrap();
        let (xs, ws) = gauss_legendre(400, -12.0, 12.0);
        let grid = quadrature_distribution(&state, &xs, &[0.0]);
        let moment: f64 = xs
            .iter()
            .enumerate()
            .map(|(ix, &x)| ws[ix] * x * grid.value(ix, 0))
            .sum();
        assert_abs_diff_eq!(moment, std::f64::consts::SQRT_2 * zeta.re, epsilon = 1e-6);
    }

    #[test]
    fn quadrature_distribution_symmetric_about_theta() {
        let b = basis(64);
        let theta = 0.5;
        let state = nlcs_build(Complex64::from_polar(5.0, theta), &b).unwrap();
        let xs = axis(-4.0, 4.0, 41);
        for delta in [0.2, 0.9, 1.7] {
            let above = quadrature_distribution(&state, &xs, &[theta + delta]);
            let below = quadrature_distribution(&state, &xs, &[theta - delta]);
            for ix in 0..xs.len() {
                assert_abs_diff_eq!(above.value(ix, 0), below.value(ix, 0), epsilon = 1e-9);
            }
        }
    }

    // ---- displacement elements ------------------------------------------

    #[test]
    fn displacement_reference_values() {
        let lam = Complex64::new(0.4, -0.9);
        // D(0) = I
        assert_abs_diff_eq!(
            displacement_element(5, 5, Complex64::new(0.0, 0.0)).re,
            1.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            displacement_element(6, 5, Complex64::new(0.0, 0.0)).norm(),
            0.0,
            epsilon = 1e-15
        );
        // <1|D|0> = e^{-|l|^2/2} l
        let expect = (-0.5 * lam.norm_sqr()).exp() * lam;
        let got = displacement_element(1, 0, lam);
        assert_abs_diff_eq!(got.re, expect.re, epsilon = 1e-14);
        assert_abs_diff_eq!(got.im, expect.im, epsilon = 1e-14);
    }

    #[test]
    fn displacement_matrix_unitary_and_group_property() {
        let b = basis(120);
        let lam = Complex64::new(1.2, 2.3);
        let d = displacement_matrix(&b, lam);
        // column norms = 1 well inside the truncation
        for col in 0..40 {
            let norm: f64 = (0..b.dim()).map(|row| d.get(row, col).norm_sqr()).sum();
            assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-8);
        }
        // D(l) D(-l) = I on interior columns
        let dm = displacement_matrix(&b, -lam);
        let prod = d.matmul(&dm).unwrap();
        for col in 0..40 {
            for row in 0..40 {
                let expect = if row == col { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(prod.get(row, col).re, expect, epsilon = 1e-8);
                assert_abs_diff_eq!(prod.get(row, col).im, 0.0, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn displacement_agrees_with_matrix_exponential() {
        let b = basis(48);
        let k = crate::fockspace::KLadders::build(&b);
        let lam = Complex64::new(0.3, 0.2);
        let mut gen = OperatorMatrix::zeros(&b, "lK+ - l*K-");
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                gen.set(
                    i,
                    j,
                    lam * k.plus.get(i, j) - lam.conj() * k.minus.get(i, j),
                );
            }
        }
        let viaexp = matexp(&gen);
        for m in 0..20 {
            for n in 0..20 {
                let closed = displacement_element(m, n, lam);
                let e = viaexp.get(m, n);
                assert_abs_diff_eq!(closed.re, e.re, epsilon = 1e-9);
                assert_abs_diff_eq!(closed.im, e.im, epsilon = 1e-9);
            }
        }
    }

    // ---- s-parameterized function ---------------------------------------

    #[test]
    fn wigner_of_shifted_vacuum() {
        let b = basis(32);
        let state = nlcs_build(Complex64::new(0.0, 0.0), &b).unwrap();
        for z in [
            Complex64::new(0.0, 0.0),
            Complex64::new(0.7, -0.4),
            Complex64::new(-1.5, 1.1),
        ] {
            let expect = 2.0 / std::f64::consts::PI * (-2.0 * z.norm_sqr()).exp();
            assert_abs_diff_eq!(s_function(&state, z, 0.0).unwrap(), expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn wigner_of_canonical_matches_closed_form() {
        let b = basis(120);
        let zeta = Complex64::new(2.0, 0.0);
        let state = canonical_build(zeta, &b).unwrap();
        for &(x, p) in &[(2.0, 0.0), (1.0, 0.5), (3.2, -0.8), (0.0, 0.0), (4.5, 2.0)] {
            let z = Complex64::new(x, p);
            let expect = 2.0 / std::f64::consts::PI * (-2.0 * (z - zeta).norm_sqr()).exp();
            assert_abs_diff_eq!(s_function(&state, z, 0.0).unwrap(), expect, epsilon = 1e-8);
        }
    }

    #[test]
    fn wigner_matches_displaced_parity_oracle() {
        // the parity sum needs levels up to ~(|z| + spread)^2, so the basis
        // must comfortably exceed the squared window radius for the oracle
        // itself to be trustworthy over the whole probe grid
        let b = basis(200);
        let state = nlcs_build(Complex64::new(2.0, 1.0), &b).unwrap();
        let window = default_window(&state);
        let xs = axis(window.0, window.1, 21);
        let ps = axis(window.2, window.3, 21);
        for &x in &xs {
            for &p in &ps {
                let z = Complex64::new(x, p);
                let direct = s_function(&state, z, 0.0).unwrap();
                let oracle = wigner_parity(&state, z);
                assert_abs_diff_eq!(direct, oracle, epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn husimi_matches_overlap_oracle() {
        let b = basis(80);
        for alpha in [Complex64::new(1.0, 0.0), Complex64::new(2.0, 1.0)] {
            let state = nlcs_build(alpha, &b).unwrap();
            for &(x, p) in &[(0.0, 0.0), (0.8, 0.3), (-1.1, 1.6), (2.0, -2.0)] {
                let z = Complex64::new(x, p);
                let direct = s_function(&state, z, -1.0).unwrap();
                let oracle = husimi_overlap(&state, z);
                assert_abs_diff_eq!(direct, oracle, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn s_function_rejects_p_regime() {
        let b = basis(32);
        let state = nlcs_build(Complex64::new(1.0, 0.0), &b).unwrap();
        assert!(matches!(
            s_function(&state, Complex64::new(0.3, 0.1), 1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn intermediate_s_interpolates_smoothly() {
        // F(z, s) stays finite and real between Husimi and Wigner, and in
        // the over-smoothed s < -1 regime
        let b = basis(64);
        let state = nlcs_build(Complex64::new(1.5, -0.5), &b).unwrap();
        let z = Complex64::new(0.4, 0.2);
        for s in [-2.0, -0.99, -0.5, -0.2, 0.0, 0.3, 0.6] {
            let v = s_function(&state, z, s).unwrap();
            assert!(v.is_finite());
        }
    }

    #[test]
    fn s_family_of_first_excited_level() {
        // closed form for the first excited shifted level:
        // F(z,s) = 2/(pi(1-s)) e^{-2|z|^2/(1-s)} [(s+1)/(s-1) + 4|z|^2/(1-s)^2],
        // which reduces to the familiar Wigner (s = 0) and Husimi (s = -1)
        // expressions for a one-quantum Fock state
        let b = basis(32);
        let state = StateVector::fock(&b, 1).unwrap();
        for &(x, p) in &[(0.0, 0.0), (0.6, -0.4), (1.3, 0.9)] {
            let z = Complex64::new(x, p);
            let r2 = z.norm_sqr();
            for s in [-1.0, -0.5, 0.0, 0.4] {
                let expect = 2.0 / (std::f64::consts::PI * (1.0 - s))
                    * (-2.0 * r2 / (1.0 - s)).exp()
                    * ((s + 1.0) / (s - 1.0) + 4.0 * r2 / (1.0 - s).powi(2));
                let got = s_function(&state, z, s).unwrap();
                assert_abs_diff_eq!(got, expect, epsilon = 1e-12);
            }
        }
        // the two endpoint limits in their familiar shapes
        let z = Complex64::new(0.7, -0.2);
        let r2 = z.norm_sqr();
        assert_abs_diff_eq!(
            s_function(&state, z, 0.0).unwrap(),
            2.0 / std::f64::consts::PI * (-2.0 * r2).exp() * (4.0 * r2 - 1.0),
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            s_function(&state, z, -1.0).unwrap(),
            r2 * (-r2).exp() / std::f64::consts::PI,
            epsilon = 1e-13
        );
    }

    #[test]
    fn wigner_grid_integral_and_negativity() {
        let b = basis(80);
        let state = nlcs_build(Complex64::new(1.0, 0.0), &b).unwrap();
        let window = default_window(&state);
        let grid = wigner_grid(&state, window, (101, 101)).unwrap();
        let total = grid.integral();
        assert!(total > 0.98 && total < 1.001, "integral = {total}");
        let report = wigner_negativity_scan(&state, window, (101, 101)).unwrap();
        assert!(report.min_value < 0.0, "expected negativity");

        // deeper negativity at a larger amplitude registers in the
        // negative-cell fraction as well
        let state = nlcs_build(Complex64::new(2.0, 1.0), &b).unwrap();
        let window = default_window(&state);
        let report = wigner_negativity_scan(&state, window, (101, 101)).unwrap();
        assert!(report.min_value < -1e-6, "min = {}", report.min_value);
        assert!(report.negative_fraction > 0.0);
    }

    #[test]
    fn canonical_wigner_is_nonnegative() {
        let b = basis(100);
        let state = canonical_build(Complex64::new(2.0, 0.0), &b).unwrap();
        let window = default_window(&state);
        let report = wigner_negativity_scan(&state, window, (61, 61)).unwrap();
        assert!(report.min_value >= -1e-9);
        assert_eq!(report.negative_fraction, 0.0);
    }

    #[test]
    fn husimi_nonnegative_and_normalized() {
        let b = basis(64);
        let state = nlcs_build(Complex64::new(2.0, 1.0), &b).unwrap();
        let grid = husimi_grid(&state, default_window(&state), (81, 81)).unwrap();
        assert!(grid.values.iter().all(|&v| v >= -1e-12));
        let total = grid.integral();
        assert!(total > 0.98 && total < 1.001, "integral = {total}");
    }

    // ---- singular P-function --------------------------------------------

    #[test]
    fn p_function_coefficient_structure() {
        let b = basis(64);
        // alpha = 0: a single delta-function coefficient
        let s0 = nlcs_build(Complex64::new(0.0, 0.0), &b).unwrap();
        let rep = p_function_coefficients(&s0).unwrap();
        assert_eq!(rep.max_order, 0);
        assert_eq!(rep.coefficients.len(), 1);
        assert_abs_diff_eq!(rep.coefficients[0], 1.0, epsilon = 1e-15);

        // alpha = 1: B_{1,1}/B_{0,0} = 12/144 = 1/12, alternating signs
        let s1 = nlcs_build(Complex64::new(1.0, 0.0), &b).unwrap();
        let rep = p_function_coefficients(&s1).unwrap();
        assert_relative_eq!(
            -rep.coefficients[1] / rep.coefficients[0],
            1.0 / 12.0,
            max_relative = 1e-12
        );
        assert!(rep.coefficients.iter().step_by(2).all(|&c| c >= 0.0));
        assert!(rep
            .coefficients
            .iter()
            .skip(1)
            .step_by(2)
            .all(|&c| c <= 0.0));

        // singular order grows with |alpha|
        let mut last = 0;
        for r in [0.5, 1.0, 2.0, 4.0, 8.0] {
            let s = nlcs_build(Complex64::new(r, 0.0), &b).unwrap();
            let rep = p_function_coefficients(&s).unwrap();
            assert!(rep.max_order >= last, "order not monotone at r = {r}");
            last = rep.max_order;
        }

        // canonical states are rejected
        let c = canonical_build(Complex64::new(1.0, 0.0), &b).unwrap();
        assert!(matches!(
            p_function_coefficients(&c),
            Err(Error::UnsupportedState { .. })
        ));
    }

    #[test]
    fn husimi_diagnostic_flags_printed_claim() {
        let b = basis(64);
        let state = nlcs_build(Complex64::new(2.0, 0.0), &b).unwrap();
        let z = Complex64::new(1.0, 0.5);
        let diag = husimi_diagnostic(&state, z).unwrap();
        // the evaluable limit equals the overlap oracle...
        assert_abs_diff_eq!(diag.f_limit, husimi_overlap(&state, z), epsilon = 1e-10);
        // ...and deviates from both printed readings for a superposition
        let gauss = diag.printed_gaussian.unwrap();
        assert!((diag.f_limit - gauss).abs() > 1e-3);
        assert!((diag.f_limit - diag.naive_n0_only.re).abs() > 1e-4);
    }

    proptest::proptest! {
        #[test]
        fn displacement_conjugation_symmetry(
            m in 0usize..24,
            n in 0usize..24,
            re in -2.0f64..2.0,
            im in -2.0f64..2.0,
        ) {
            // <m|D(l)|n> = conj(<n|D(-l)|m>) across both branches
            let lam = Complex64::new(re, im);
            let direct = displacement_element(m, n, lam);
            let swapped = displacement_element(n, m, -lam).conj();
            proptest::prop_assert!((direct - swapped).norm() < 1e-12);
        }
    }
}
