//! Independent oracle computations shared by the integration suites. These
//! stay deliberately naive (direct series summation, explicit double sums)
//! so they can arbitrate the matrix-algebra implementation paths.

use num_complex::Complex64;

use isonlcs::quasiprob::displacement_element;
use isonlcs::states::StateVector;

pub fn fact(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Normalization series of the nonlinear coherent state,
/// `S(r) = sum r^{2n} / (n!(n+2)!(n+3)!)`.
pub fn nlcs_norm_series(r: f64, terms: usize) -> f64 {
    (0..terms)
        .map(|n| r.powi(2 * n as i32) / (fact(n) * fact(n + 2) * fact(n + 3)))
        .sum()
}

/// Moments of the nonlinear coherent state from the printed series:
/// `m_j = N^2 sum_{n>=j} r^{2n} / ((n-j)!(n+2)!(n+3)!)`.
pub fn nlcs_series_m(r: f64, j: usize, terms: usize) -> f64 {
    let norm = nlcs_norm_series(r, terms);
    (j..terms)
        .map(|n| r.powi(2 * n as i32) / (fact(n - j) * fact(n + 2) * fact(n + 3)))
        .sum::<f64>()
        / norm
}

/// `mu_j = sum P(n) n^j` in its definitional form.
pub fn nlcs_series_mu(r: f64, j: usize, terms: usize) -> f64 {
    let norm = nlcs_norm_series(r, terms);
    (0..terms)
        .map(|n| {
            (n as f64).powi(j as i32) * r.powi(2 * n as i32) / (fact(n) * fact(n + 2) * fact(n + 3))
        })
        .sum::<f64>()
        / norm
}

/// Occupation series of the canonical state: `<K_0>` and `<K_0^2>` as the
/// explicit sums `sum_{n>=1} |z|^{2n} (n^{0,1}) / (n-1)!` times the Poisson
/// normalization.
pub fn canonical_series_k0(r: f64, terms: usize) -> (f64, f64) {
    let norm = (-r * r).exp();
    let k0 = (1..terms)
        .map(|n| r.powi(2 * n as i32) / fact(n - 1))
        .sum::<f64>()
        * norm;
    let k0sq = (1..terms)
        .map(|n| n as f64 * r.powi(2 * n as i32) / fact(n - 1))
        .sum::<f64>()
        * norm;
    (k0, k0sq)
}

/// Husimi by the coherent-overlap definition,
/// `(1/pi) |<z|psi>|^2` with `<z|ñ> = e^{-|z|^2/2} conj(z)^n / sqrt(n!)`.
pub fn husimi_overlap(state: &StateVector, z: Complex64) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new((-0.5 * z.norm_sqr()).exp(), 0.0);
    for (n, c) in state.amplitudes().iter().enumerate() {
        acc += term.conj() * c;
        term = term * z / ((n + 1) as f64).sqrt();
    }
    acc.norm_sqr() / std::f64::consts::PI
}

/// Wigner by the displaced-parity sum,
/// `(2/pi) sum_k (-1)^k |<k̃|D(-z)|psi>|^2`.
pub fn wigner_parity(state: &StateVector, z: Complex64) -> f64 {
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

/// The printed double-sum form of the quadrature distribution of a nonlinear
/// coherent state `alpha = r e^{i theta}`.
pub fn quadrature_double_sum(r: f64, theta: f64, n_alpha_sq: f64, x: f64, phi: f64) -> f64 {
    let terms = 40usize;
    let mut sum = 0.0;
    for n in 0..terms {
        for m in 0..terms {
            let hn = isonlcs::specfun::hermite(n, x).unwrap();
            let hm = isonlcs::specfun::hermite(m, x).unwrap();
            let den = fact(n)
                * fact(m)
                * (2f64.powi((n + m) as i32)
                    * fact(n + 2)
                    * fact(m + 2)
                    * fact(n + 3)
                    * fact(m + 3))
                .sqrt();
            sum += r.powi((n + m) as i32) * ((n as f64 - m as f64) * (theta - phi)).cos() * hn * hm
                / den;
        }
    }
    n_alpha_sq * (-x * x).exp() / std::f64::consts::PI.sqrt() * sum
}
