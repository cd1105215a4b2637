//! Non-classicality diagnostics: the A3 parameter, Mandel Q and g2(0),
//! quadrature squeezing (I1/I2) and amplitude-squared squeezing (I3/I4),
//! together with the variance routes they must stay consistent with.
//!
//! All witnesses are evaluated through powers of the Case (iii) ladder
//! matrices; the explicit series forms live in the test suites as the
//! independent oracle path.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fockspace::{KLadders, OperatorMatrix, TruncatedBasis};
use crate::states::{nlcs_build, StateVector};

/// Quadratic form `<psi|Op|psi>`. For Hermitian operators the imaginary part
/// is pure roundoff.
pub fn expectation(state: &StateVector, op: &OperatorMatrix) -> Result<Complex64> {
    if state.basis() != op.basis() {
        return Err(Error::BasisMismatch);
    }
    let applied = op.apply(state.amplitudes());
    Ok(state
        .amplitudes()
        .iter()
        .zip(applied.iter())
        .map(|(c, v)| c.conj() * v)
        .sum())
}

/// The moment ladders `m_j = <K_+^j K_-^j>` and `mu_j = <K_0^j>`, `j = 1..4`.
#[derive(Debug, Clone)]
pub struct MomentSet {
    pub m: [f64; 4],
    pub mu: [f64; 4],
    pub state_label: String,
}

/// All operator products the witnesses need, built once per basis so that
/// parameter sweeps pay only for expectation values, not for repeated
/// O(dim^3) matrix products.
#[derive(Debug, Clone)]
pub struct WitnessOperators {
    ladders: KLadders,
    /// `K_+^j K_-^j` for `j = 1..4`.
    ordered: [OperatorMatrix; 4],
    /// `K_0^j` for `j = 1..4`.
    number_pow: [OperatorMatrix; 4],
    minus2: OperatorMatrix,
    minus4: OperatorMatrix,
    plus2_minus2: OperatorMatrix,
    minus2_plus2: OperatorMatrix,
}

impl WitnessOperators {
    pub fn build(basis: &TruncatedBasis) -> Self {
        let ladders = KLadders::build(basis);
        let minus2 = ladders.minus.matmul(&ladders.minus).expect("same basis");
        let minus3 = minus2.matmul(&ladders.minus).expect("same basis");
        let minus4 = minus2.matmul(&minus2).expect("same basis");
        let ordered = [
            ladders.zero.clone(),
            minus2.dagger().matmul(&minus2).expect("same basis"),
            minus3.dagger().matmul(&minus3).expect("same basis"),
            minus4.dagger().matmul(&minus4).expect("same basis"),
        ];
        let zero2 = ladders.zero.matmul(&ladders.zero).expect("same basis");
        let zero3 = zero2.matmul(&ladders.zero).expect("same basis");
        let zero4 = zero2.matmul(&zero2).expect("same basis");
        let number_pow = [ladders.zero.clone(), zero2, zero3, zero4];
        let plus2 = minus2.dagger();
        let plus2_minus2 = plus2.matmul(&minus2).expect("same basis");
        let minus2_plus2 = minus2.matmul(&plus2).expect("same basis");
        WitnessOperators {
            ladders,
            ordered,
            number_pow,
            minus2,
            minus4,
            plus2_minus2,
            minus2_plus2,
        }
    }

    pub fn basis(&self) -> &TruncatedBasis {
        self.ladders.basis()
    }

    pub fn ladders(&self) -> &KLadders {
        &self.ladders
    }
}

/// Moments of the state via matrix products of the Case (iii) ladders.
///
/// `mu_j` follows the definitional form `<(K_+ K_-)^j> = <K_0^j>`, which is
/// also what the series oracle in the tests evaluates.
pub fn moment_set(state: &StateVector, ops: &WitnessOperators) -> Result<MomentSet> {
    if state.basis() != ops.basis() {
        return Err(Error::BasisMismatch);
    }
    let support = state.support_limit(1e-16);
    if support + 8 > state.basis().n_max() {
        return Err(Error::Truncation {
            tail_mass: state.tail_mass(),
            limit: 1e-12,
            suggested_n_max: support + 16,
        });
    }
    let mut m = [0.0; 4];
    let mut mu = [0.0; 4];
    for j in 0..4 {
        m[j] = expectation(state, &ops.ordered[j])?.re;
        mu[j] = expectation(state, &ops.number_pow[j])?.re;
    }
    Ok(MomentSet {
        m,
        mu,
        state_label: state.label().to_string(),
    })
}

/// A3 together with the two determinants it is formed from.
#[derive(Debug, Clone, Copy)]
pub struct A3Report {
    pub a3: f64,
    pub det_m: f64,
    pub det_mu: f64,
}

fn det3(a: &[[f64; 3]; 3]) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

/// `A3 = det m3 / (det mu3 - det m3)` from the moment matrices
/// `m3 = [[1, m1, m2], [m1, m2, m3], [m2, m3, m4]]` and the `mu` analogue.
///
/// Coherent and vacuum states give 0, Fock states -1 (via `det mu3 = 0`,
/// not through the error path); a vanishing denominator is reported as a
/// degenerate result carrying both determinants.
pub fn a3_parameter(ms: &MomentSet) -> Result<A3Report> {
    let m = ms.m;
    let mu = ms.mu;
    let det_m = det3(&[[1.0, m[0], m[1]], [m[0], m[1], m[2]], [m[1], m[2], m[3]]]);
    let det_mu = det3(&[
        [1.0, mu[0], mu[1]],
        [mu[0], mu[1], mu[2]],
        [mu[1], mu[2], mu[3]],
    ]);
    let denom = det_mu - det_m;
    if denom == 0.0 {
        return Err(Error::DegenerateWitness { det_m, det_mu });
    }
    Ok(A3Report {
        a3: det_m / denom,
        det_m,
        det_mu,
    })
}

/// Mandel parameter and zero-delay second-order correlation,
/// `Q = <K0^2>/<K0> - <K0> - 1` and `g2 = (<K0^2> - <K0>)/<K0>^2`.
pub fn mandel_g2(state: &StateVector, ops: &WitnessOperators) -> Result<(f64, f64)> {
    let k0 = expectation(state, &ops.number_pow[0])?.re;
    if k0 <= 0.0 {
        return Err(Error::UndefinedWitness(format!(
            "mean occupation {k0:.3e} is not positive; Q and g2(0) are undefined"
        )));
    }
    let k0sq = expectation(state, &ops.number_pow[1])?.re;
    let q = k0sq / k0 - k0 - 1.0;
    let g2 = (k0sq - k0) / (k0 * k0);
    Ok((q, g2))
}

/// Squeezing witnesses and the variances they are consistency-checked
/// against, for one state.
#[derive(Debug, Clone, Copy)]
pub struct SqueezeReport {
    pub r: f64,
    pub theta: f64,
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
    pub var_x: f64,
    pub var_p: f64,
    pub var_big_x: f64,
    pub var_big_p: f64,
}

/// All first- to fourth-order ladder expectations one report needs.
struct LadderMoments {
    k_minus: Complex64,
    k_minus2: Complex64,
    k_minus4: Complex64,
    k_plus_minus: f64,
    k_plus2_minus2: f64,
    k_minus2_plus2: f64,
}

fn ladder_moments(state: &StateVector, ops: &WitnessOperators) -> Result<LadderMoments> {
    let k_minus = expectation(state, &ops.ladders.minus)?;
    let k_minus2 = expectation(state, &ops.minus2)?;
    let k_minus4 = expectation(state, &ops.minus4)?;
    let k_plus_minus = expectation(state, &ops.number_pow[0])?.re;
    let k_plus2_minus2 = expectation(state, &ops.plus2_minus2)?.re;
    let k_minus2_plus2 = expectation(state, &ops.minus2_plus2)?.re;
    Ok(LadderMoments {
        k_minus,
        k_minus2,
        k_minus4,
        k_plus_minus,
        k_plus2_minus2,
        k_minus2_plus2,
    })
}

/// Squeezing witnesses for one state.
///
/// `I1/I2` are the quadrature conditions (negative means variance below 1/2
/// in `x` or `p`); `I3/I4` are the amplitude-squared conditions of the
/// Hillery type. The variances are computed through the Hermitian-operator
/// route (`x = (K_+ + K_-)/sqrt2` etc.) as an internal cross-check:
/// `I1 = 2 var(x) - 1` must hold identically.
pub fn squeeze_report(state: &StateVector, ops: &WitnessOperators) -> Result<SqueezeReport> {
    let lm = ladder_moments(state, ops)?;
    let k_plus = lm.k_minus.conj();
    let k_plus2 = lm.k_minus2.conj();
    let k_plus4 = lm.k_minus4.conj();

    // I1/I2 straight from the expectation combinations
    let i1 = (lm.k_minus2 + k_plus2 - lm.k_minus * lm.k_minus - k_plus * k_plus).re
        - 2.0 * (lm.k_minus * k_plus).re
        + 2.0 * lm.k_plus_minus;
    let i2 = (-lm.k_minus2 - k_plus2 + lm.k_minus * lm.k_minus + k_plus * k_plus).re
        - 2.0 * (lm.k_minus * k_plus).re
        + 2.0 * lm.k_plus_minus;

    let i3 = 0.25
        * ((lm.k_minus4 + k_plus4 - lm.k_minus2 * lm.k_minus2 - k_plus2 * k_plus2).re
            - 2.0 * (lm.k_minus2 * k_plus2).re
            + lm.k_plus2_minus2
            + lm.k_minus2_plus2)
        - lm.k_plus_minus
        - 0.5;
    let i4 = 0.25
        * ((-lm.k_minus4 - k_plus4 + lm.k_minus2 * lm.k_minus2 + k_plus2 * k_plus2).re
            - 2.0 * (lm.k_minus2 * k_plus2).re
            + lm.k_plus2_minus2
            + lm.k_minus2_plus2)
        - lm.k_plus_minus
        - 0.5;

    // variance route: <x^2> - <x>^2 with x = (K_+ + K_-)/sqrt2, and the
    // squared-amplitude analogues
    let mean_x_sq = 0.5 * (lm.k_minus + k_plus).re.powi(2);
    let mean_p_sq = 0.5 * ((lm.k_minus - k_plus) * Complex64::i()).re.powi(2);
    let x2 = 0.5 * (2.0 * lm.k_minus2.re + 2.0 * lm.k_plus_minus + 1.0);
    let p2 = 0.5 * (-2.0 * lm.k_minus2.re + 2.0 * lm.k_plus_minus + 1.0);
    let var_x = x2 - mean_x_sq;
    let var_p = p2 - mean_p_sq;

    let mean_big_x_sq = 0.5 * (lm.k_minus2 + k_plus2).re.powi(2);
    let mean_big_p_sq = 0.5 * ((lm.k_minus2 - k_plus2) * Complex64::i()).re.powi(2);
    let big_x2 = 0.5 * (2.0 * lm.k_minus4.re + lm.k_plus2_minus2 + lm.k_minus2_plus2);
    let big_p2 = 0.5 * (-2.0 * lm.k_minus4.re + lm.k_plus2_minus2 + lm.k_minus2_plus2);
    let var_big_x = big_x2 - mean_big_x_sq;
    let var_big_p = big_p2 - mean_big_p_sq;

    let alpha = state.parameter();
    Ok(SqueezeReport {
        r: alpha.norm(),
        theta: alpha.arg(),
        i1,
        i2,
        i3,
        i4,
        var_x,
        var_p,
        var_big_x,
        var_big_p,
    })
}

/// Squeeze reports for nonlinear coherent states `alpha = r e^{i theta}`
/// across a theta grid at fixed r.
pub fn squeeze_sweep(
    basis: &TruncatedBasis,
    ops: &WitnessOperators,
    r: f64,
    theta_grid: &[f64],
) -> Result<Vec<SqueezeReport>> {
    theta_grid
        .iter()
        .map(|&theta| {
            let state = nlcs_build(Complex64::from_polar(r, theta), basis)?;
            let mut report = squeeze_report(&state, ops)?;
            report.theta = theta;
            Ok(report)
        })
        .collect()
}

/// One row of the photon-statistics sweep.
#[derive(Debug, Clone, Copy)]
pub struct StatsRow {
    pub r: f64,
    pub a3: f64,
    pub q: f64,
    pub g2: f64,
    pub mean_k0: f64,
}

/// Photon statistics of one state.
pub fn stats_row(state: &StateVector, ops: &WitnessOperators) -> Result<StatsRow> {
    let ms = moment_set(state, ops)?;
    let a3 = a3_parameter(&ms)?;
    let (q, g2) = mandel_g2(state, ops)?;
    let mean_k0 = expectation(state, &ops.number_pow[0])?.re;
    Ok(StatsRow {
        r: state.parameter().norm(),
        a3: a3.a3,
        q,
        g2,
        mean_k0,
    })
}

/// `A3`, `Q`, `g2` and mean occupation for nonlinear coherent states across
/// an `r` grid at fixed phase.
pub fn stats_sweep(
    basis: &TruncatedBasis,
    ops: &WitnessOperators,
    r_grid: &[f64],
    theta: f64,
) -> Result<Vec<StatsRow>> {
    r_grid
        .iter()
        .map(|&r| {
            let state = nlcs_build(Complex64::from_polar(r, theta), basis)?;
            stats_row(&state, ops)
        })
        .collect()
}

/// Default theta grid: 720 points over `[0, 2 pi)`.
pub fn default_theta_grid() -> Vec<f64> {
    (0..720)
        .map(|k| k as f64 * std::f64::consts::TAU / 720.0)
        .collect()
}

/// Default r grid: 100 points over `(0, 10]`.
pub fn default_r_grid() -> Vec<f64> {
    (1..=100).map(|k| k as f64 * 0.1).collect()
}
