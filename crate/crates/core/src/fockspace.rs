//! Deformed and rescaled ladder operators as dense matrices on the truncated
//! shifted basis, plus residual checks for every algebraic identity they are
//! supposed to satisfy.
//!
//! Physical levels are `n = 3, 4, 5, ...` (the isolated `|0>` is tracked only
//! as a flag); the shifted index is `ñ = n - 3`. Annihilators are strictly
//! super-diagonal in the column-index convention, creators strictly
//! sub-diagonal.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Shift between the shifted index and the physical level: `|ñ> = |ñ+3>`.
pub const BASIS_OFFSET: usize = 3;

/// Number of levels excluded at the truncation edge when evaluating algebra
/// residuals; sized for the K^4 powers used by the moment witnesses.
pub const INTERIOR_MARGIN: usize = 4;

/// The shifted Fock basis `|ñ> = |n+3>`, `ñ = 0..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedBasis {
    n_max: usize,
    includes_isolated_ground: bool,
}

impl TruncatedBasis {
    /// A basis without the isolated `|0>` flag set. `n_max >= 8` is required
    /// so that fourth powers of the ladder operators have room to act.
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 8 {
            return Err(Error::Domain(format!(
                "TruncatedBasis requires n_max >= 8, got {n_max}"
            )));
        }
        Ok(TruncatedBasis {
            n_max,
            includes_isolated_ground: false,
        })
    }

    /// Same basis, tracking that the isolated ground state `|0>` belongs to
    /// the full Hilbert space. It never appears as a matrix row.
    pub fn with_isolated_ground(n_max: usize) -> Result<Self> {
        let mut b = Self::new(n_max)?;
        b.includes_isolated_ground = true;
        Ok(b)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Matrix dimension, `n_max + 1`.
    pub fn dim(&self) -> usize {
        self.n_max + 1
    }

    pub fn offset(&self) -> usize {
        BASIS_OFFSET
    }

    pub fn includes_isolated_ground(&self) -> bool {
        self.includes_isolated_ground
    }

    /// Physical level of a shifted index.
    pub fn physical_level(&self, shifted: usize) -> usize {
        shifted + BASIS_OFFSET
    }

    /// Shifted indices `ñ < interior_limit()` are unaffected by the
    /// truncation edge.
    pub fn interior_limit(&self) -> usize {
        self.n_max - INTERIOR_MARGIN
    }
}

/// Dense complex matrix acting on a [`TruncatedBasis`]; carries the basis it
/// was built for. Entry `(i, j)` is `<ĩ|Op|j̃>` in the shifted basis.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    dim: usize,
    entries: Vec<Complex64>,
    basis: TruncatedBasis,
    label: String,
}

impl OperatorMatrix {
    pub fn zeros(basis: &TruncatedBasis, label: impl Into<String>) -> Self {
        let dim = basis.dim();
        OperatorMatrix {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
            basis: basis.clone(),
            label: label.into(),
        }
    }

    pub fn identity(basis: &TruncatedBasis) -> Self {
        let mut m = Self::zeros(basis, "I");
        for i in 0..m.dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Diagonal matrix from a function of the shifted index.
    pub fn diagonal(
        basis: &TruncatedBasis,
        label: impl Into<String>,
        f: impl Fn(usize) -> f64,
    ) -> Self {
        let mut m = Self::zeros(basis, label);
        for i in 0..m.dim {
            m.set(i, i, Complex64::new(f(i), 0.0));
        }
        m
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &TruncatedBasis {
        &self.basis
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(&self.basis, format!("{}^dag", self.label));
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(i, j, self.get(j, i).conj());
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.basis != rhs.basis {
            return Err(Error::BasisMismatch);
        }
        let n = self.dim;
        let mut out = Self::zeros(&self.basis, format!("{}*{}", self.label, rhs.label));
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        if self.basis != rhs.basis {
            return Err(Error::BasisMismatch);
        }
        let mut out = self.clone();
        out.label = format!("{}-{}", self.label, rhs.label);
        for (a, b) in out.entries.iter_mut().zip(rhs.entries.iter()) {
            *a -= *b;
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.basis != rhs.basis {
            return Err(Error::BasisMismatch);
        }
        let mut out = self.clone();
        out.label = format!("{}+{}", self.label, rhs.label);
        for (a, b) in out.entries.iter_mut().zip(rhs.entries.iter()) {
            *a += *b;
        }
        Ok(out)
    }

    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        let ab = self.matmul(rhs)?;
        let ba = rhs.matmul(self)?;
        let mut out = ab.sub(&ba)?;
        out.label = format!("[{},{}]", self.label, rhs.label);
        Ok(out)
    }

    /// `self^k` by repeated multiplication (`k = 0` gives the identity).
    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::identity(&self.basis);
        for _ in 0..k {
            out = out.matmul(self).expect("same basis");
        }
        out.label = format!("{}^{}", self.label, k);
        out
    }

    /// Apply to a coefficient vector.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "vector length must match matrix dim");
        (0..self.dim)
            .map(|i| {
                v.iter()
                    .enumerate()
                    .map(|(j, value)| self.get(i, j) * value)
                    .sum()
            })
            .collect()
    }

    /// Largest entry magnitude over the columns `0..col_limit`.
    pub fn max_abs_in_columns(&self, col_limit: usize) -> f64 {
        let mut max = 0.0f64;
        for i in 0..self.dim {
            for j in 0..col_limit.min(self.dim) {
                max = max.max(self.get(i, j).norm());
            }
        }
        max
    }
}

/// Value of the deformation function together with the degenerate-input
/// marker for the unphysical level `n = 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationF {
    pub value: f64,
    pub degenerate: bool,
}

/// `f(n) = sqrt((n-1)(n-3))`, the level-dependent deformation factor.
///
/// `f` vanishes at `n = 1` and `n = 3`; at the unphysical level `n = 2` the
/// radicand is negative and the function is defined as 0 with the degenerate
/// flag set, purely so the API is total.
pub fn deformation_f(n: i64) -> Result<DeformationF> {
    if n < 0 {
        return Err(Error::Domain(format!(
            "deformation_f requires n >= 0, got {n}"
        )));
    }
    if n == 2 {
        return Ok(DeformationF {
            value: 0.0,
            degenerate: true,
        });
    }
    let radicand = ((n - 1) * (n - 3)) as f64;
    Ok(DeformationF {
        value: radicand.sqrt(),
        degenerate: false,
    })
}

fn f_at(physical: usize) -> f64 {
    deformation_f(physical as i64)
        .expect("physical level is non-negative")
        .value
}

/// `(N_minus, N_plus, N_zero)`: the deformed ladder pair
/// `N_-|n> = sqrt(n) f(n) |n-1>`, `N_+|n> = sqrt(n+1) f(n+1) |n+1>` and the
/// physical number operator `N_0|n> = n|n>`, in the shifted basis.
pub fn build_deformed_ladders(
    basis: &TruncatedBasis,
) -> (OperatorMatrix, OperatorMatrix, OperatorMatrix) {
    let dim = basis.dim();
    let mut minus = OperatorMatrix::zeros(basis, "N_minus");
    let mut plus = OperatorMatrix::zeros(basis, "N_plus");
    for j in 1..dim {
        let n = basis.physical_level(j) as f64;
        let c = Complex64::new(n.sqrt() * f_at(basis.physical_level(j)), 0.0);
        minus.set(j - 1, j, c);
        plus.set(j, j - 1, c);
    }
    let zero = OperatorMatrix::diagonal(basis, "N_zero", |j| basis.physical_level(j) as f64);
    (minus, plus, zero)
}

/// `(a, a_dag)`: the undeformed pair obtained by dividing out the deformation,
/// `a = f(N_0+1)^{-1} N_-`, `a_dag = f(N_0)^{-1} N_+`. On the sub-space these
/// act as `a|n> = sqrt(n)|n-1>` for `n >= 4`, `a|3> = 0`,
/// `a_dag|n> = sqrt(n+1)|n+1>`.
pub fn build_undeformed_ladders(basis: &TruncatedBasis) -> (OperatorMatrix, OperatorMatrix) {
    let dim = basis.dim();
    let mut a = OperatorMatrix::zeros(basis, "a");
    let mut adag = OperatorMatrix::zeros(basis, "a_dag");
    for j in 1..dim {
        let n = basis.physical_level(j) as f64;
        let c = Complex64::new(n.sqrt(), 0.0);
        a.set(j - 1, j, c);
        adag.set(j, j - 1, c);
    }
    (a, adag)
}

/// Diagonal of the rescaling operator `F = (N_0 - 2)/(N_- N_+)` at physical
/// level `n >= 3` (the parameter delta = -2 is fixed by the Heisenberg
/// relations on `|3>`).
pub fn rescale_f(physical: usize) -> f64 {
    let n = physical as f64;
    (n - 2.0) / ((n + 1.0) * n * (n - 2.0))
}

/// Which pair of ladder operators is rescaled to reach the Heisenberg
/// algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RescaleCase {
    /// Rescale the raising side: `(N_-, calN_+, N_1 = calN_+ N_-)`.
    I,
    /// Rescale the lowering side: `(calN_-, N_+, N_2 = N_+ calN_-)`.
    II,
    /// Rescale both with `G = sqrt(F)`: `(K_-, K_+, K_0 = K_+ K_-)`.
    III,
}

/// Rescaled ladder triple for the selected case. The third element is the
/// associated number operator.
pub fn build_rescaled_ladders(
    basis: &TruncatedBasis,
    case: RescaleCase,
) -> (OperatorMatrix, OperatorMatrix, OperatorMatrix) {
    let (n_minus, n_plus, _) = build_deformed_ladders(basis);
    let f_diag = OperatorMatrix::diagonal(basis, "F", |j| rescale_f(basis.physical_level(j)));
    match case {
        RescaleCase::I => {
            // calN_+ = N_+ F acts as F(n) sqrt(n+1) f(n+1) |n+1>
            let mut cal_plus = n_plus.matmul(&f_diag).expect("same basis");
            cal_plus = relabel(cal_plus, "calN_plus");
            let number = relabel(cal_plus.matmul(&n_minus).expect("same basis"), "N_1");
            (n_minus, cal_plus, number)
        }
        RescaleCase::II => {
            let mut cal_minus = f_diag.matmul(&n_minus).expect("same basis");
            cal_minus = relabel(cal_minus, "calN_minus");
            let number = relabel(n_plus.matmul(&cal_minus).expect("same basis"), "N_2");
            (cal_minus, n_plus, number)
        }
        RescaleCase::III => {
            let g_diag =
                OperatorMatrix::diagonal(basis, "G", |j| rescale_f(basis.physical_level(j)).sqrt());
            let k_minus = relabel(g_diag.matmul(&n_minus).expect("same basis"), "K_minus");
            let k_plus = relabel(n_plus.matmul(&g_diag).expect("same basis"), "K_plus");
            let k_zero = relabel(k_plus.matmul(&k_minus).expect("same basis"), "K_zero");
            (k_minus, k_plus, k_zero)
        }
    }
}

fn relabel(mut m: OperatorMatrix, label: &str) -> OperatorMatrix {
    m.label = label.to_string();
    m
}

/// The Case (iii) triple, which realizes the harmonic-oscillator algebra on
/// the shifted basis: `K_-|ñ> = sqrt(ñ)|ñ-1>`, `K_+|ñ> = sqrt(ñ+1)|ñ+1>`,
/// `K_0|ñ> = ñ|ñ>`.
#[derive(Debug, Clone)]
pub struct KLadders {
    pub minus: OperatorMatrix,
    pub plus: OperatorMatrix,
    pub zero: OperatorMatrix,
}

impl KLadders {
    pub fn build(basis: &TruncatedBasis) -> Self {
        let (minus, plus, zero) = build_rescaled_ladders(basis, RescaleCase::III);
        KLadders { minus, plus, zero }
    }

    pub fn basis(&self) -> &TruncatedBasis {
        self.minus.basis()
    }
}

/// `h(n) = (5/2) n (n+1) - n (n+1) (n + 1/2)`, the polynomial entering the
/// Casimir combinations `N_- N_+ + h(N_0)` and `N_+ N_- + h(N_0 - 1)`.
pub fn casimir_h(n: i64) -> f64 {
    let n = n as f64;
    2.5 * n * (n + 1.0) - n * (n + 1.0) * (n + 0.5)
}

/// Selector for [`algebra_residual`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraIdentity {
    /// `[N_+, N_-] - (5 N_0 - 3 N_0^2)`
    Quad,
    /// `N_- N_+ + h(N_0)` (the Casimir, identically zero here)
    CasimirLeft,
    /// `N_+ N_- + h(N_0 - 1)`
    CasimirRight,
    /// `[N_-, calN_+] - I`
    HeisI,
    /// `[calN_-, N_+] - I`
    HeisII,
    /// `[K_-, K_+] - I`
    HeisIII,
    /// max of `[K_0, K_+] - K_+` and `[K_0, K_-] + K_-`
    NumIII,
}

impl AlgebraIdentity {
    pub const ALL: [AlgebraIdentity; 7] = [
        AlgebraIdentity::Quad,
        AlgebraIdentity::CasimirLeft,
        AlgebraIdentity::CasimirRight,
        AlgebraIdentity::HeisI,
        AlgebraIdentity::HeisII,
        AlgebraIdentity::HeisIII,
        AlgebraIdentity::NumIII,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            AlgebraIdentity::Quad => "QUAD",
            AlgebraIdentity::CasimirLeft => "CASIMIR_LEFT",
            AlgebraIdentity::CasimirRight => "CASIMIR_RIGHT",
            AlgebraIdentity::HeisI => "HEIS_I",
            AlgebraIdentity::HeisII => "HEIS_II",
            AlgebraIdentity::HeisIII => "HEIS_III",
            AlgebraIdentity::NumIII => "NUM_III",
        }
    }
}

/// Max-absolute-entry residual of the selected identity, restricted to
/// interior columns (`ñ < n_max - 4`); commutators of truncated ladder
/// matrices fail structurally in the last columns.
pub fn algebra_residual(basis: &TruncatedBasis, which: AlgebraIdentity) -> f64 {
    let col_limit = basis.interior_limit();
    let residual = match which {
        AlgebraIdentity::Quad => {
            let (minus, plus, _) = build_deformed_ladders(basis);
            let comm = plus.commutator(&minus).expect("same basis");
            let rhs = OperatorMatrix::diagonal(basis, "5N0-3N0^2", |j| {
                let n = basis.physical_level(j) as f64;
                5.0 * n - 3.0 * n * n
            });
            comm.sub(&rhs).expect("same basis")
        }
        AlgebraIdentity::CasimirLeft => {
            let (minus, plus, _) = build_deformed_ladders(basis);
            let prod = minus.matmul(&plus).expect("same basis");
            let h = OperatorMatrix::diagonal(basis, "h(N0)", |j| {
                casimir_h(basis.physical_level(j) as i64)
            });
            prod.add(&h).expect("same basis")
        }
        AlgebraIdentity::CasimirRight => {
            let (minus, plus, _) = build_deformed_ladders(basis);
            let prod = plus.matmul(&minus).expect("same basis");
            let h = OperatorMatrix::diagonal(basis, "h(N0-1)", |j| {
                casimir_h(basis.physical_level(j) as i64 - 1)
            });
            prod.add(&h).expect("same basis")
        }
        AlgebraIdentity::HeisI => {
            let (minus, cal_plus, _) = build_rescaled_ladders(basis, RescaleCase::I);
            let comm = minus.commutator(&cal_plus).expect("same basis");
            comm.sub(&OperatorMatrix::identity(basis))
                .expect("same basis")
        }
        AlgebraIdentity::HeisII => {
            let (cal_minus, plus, _) = build_rescaled_ladders(basis, RescaleCase::II);
            let comm = cal_minus.commutator(&plus).expect("same basis");
            comm.sub(&OperatorMatrix::identity(basis))
                .expect("same basis")
        }
        AlgebraIdentity::HeisIII => {
            let k = KLadders::build(basis);
            let comm = k.minus.commutator(&k.plus).expect("same basis");
            comm.sub(&OperatorMatrix::identity(basis))
                .expect("same basis")
        }
        AlgebraIdentity::NumIII => {
            let k = KLadders::build(basis);
            let raise = k
                .zero
                .commutator(&k.plus)
                .and_then(|c| c.sub(&k.plus))
                .expect("same basis");
            let lower = k
                .zero
                .commutator(&k.minus)
                .and_then(|c| c.add(&k.minus))
                .expect("same basis");
            let r = raise.max_abs_in_columns(col_limit);
            let l = lower.max_abs_in_columns(col_limit);
            return r.max(l);
        }
    };
    residual.max_abs_in_columns(col_limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn basis() -> TruncatedBasis {
        TruncatedBasis::new(40).unwrap()
    }

    #[test]
    fn basis_invariants() {
        assert!(TruncatedBasis::new(7).is_err());
        let b = TruncatedBasis::new(8).unwrap();
        assert_eq!(b.dim(), 9);
        assert_eq!(b.offset(), 3);
        assert!(!b.includes_isolated_ground());
        assert!(TruncatedBasis::with_isolated_ground(10)
            .unwrap()
            .includes_isolated_ground());
    }

    #[test]
    fn deformation_zeros_and_values() {
        assert_eq!(deformation_f(3).unwrap().value, 0.0);
        assert_eq!(deformation_f(1).unwrap().value, 0.0);
        assert_relative_eq!(
            deformation_f(4).unwrap().value,
            3f64.sqrt(),
            max_relative = 1e-15
        );
        let d = deformation_f(2).unwrap();
        assert_eq!(d.value, 0.0);
        assert!(d.degenerate);
        assert!(deformation_f(-1).is_err());
    }

    #[test]
    fn deformed_ladder_entries() {
        let b = basis();
        let (minus, plus, zero) = build_deformed_ladders(&b);
        // |4> -> |3>: sqrt(4) f(4) = 2 sqrt(3); shifted indices 1 -> 0
        assert_relative_eq!(minus.get(0, 1).re, 2.0 * 3f64.sqrt(), max_relative = 1e-15);
        // |3> is annihilated: column 0 is empty
        assert_eq!(minus.max_abs_in_columns(1), 0.0);
        // diagonal of N_0 at |5> (shifted 2) is 5
        assert_eq!(zero.get(2, 2).re, 5.0);
        // N_+ is the conjugate transpose of N_-
        let diff = plus.sub(&minus.dagger()).unwrap();
        assert_eq!(diff.max_abs_in_columns(b.dim()), 0.0);
    }

    #[test]
    fn undeformed_ladder_entries() {
        let b = basis();
        let (a, adag) = build_undeformed_ladders(&b);
        // a_dag |3> = sqrt(4) |4>
        assert_eq!(adag.get(1, 0).re, 2.0);
        // a |3> = 0
        assert_eq!(a.max_abs_in_columns(1), 0.0);
        // a |5> = sqrt(5) |4>
        assert_relative_eq!(a.get(1, 2).re, 5f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn rescaled_ladder_entries() {
        let b = basis();
        let (k_minus, k_plus, k_zero) = build_rescaled_ladders(&b, RescaleCase::III);
        // K_- |4> = sqrt(4-3) |3>, K_+ |3> = sqrt(3-2) |4>
        assert_relative_eq!(k_minus.get(0, 1).re, 1.0, max_relative = 1e-12);
        assert_relative_eq!(k_plus.get(1, 0).re, 1.0, max_relative = 1e-12);
        // K_0 spectrum on interior levels is the shifted index
        for j in 0..b.interior_limit() {
            assert_abs_diff_eq!(k_zero.get(j, j).re, j as f64, epsilon = 1e-12);
        }
        // K_+ = K_-^dag
        let diff = k_plus.sub(&k_minus.dagger()).unwrap();
        assert!(diff.max_abs_in_columns(b.dim()) < 1e-12);

        // Case (i): calN_+ maps |3> -> |4> with F(3) sqrt(4) f(4) = sqrt(3)/6
        let (_, cal_plus, n1) = build_rescaled_ladders(&b, RescaleCase::I);
        assert_relative_eq!(
            cal_plus.get(1, 0).re,
            3f64.sqrt() / 6.0,
            max_relative = 1e-14
        );
        // N_1 is the shifted number operator
        assert_abs_diff_eq!(n1.get(0, 0).re, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(n1.get(5, 5).re, 5.0, epsilon = 1e-12);
    }

    #[test]
    fn casimir_h_values() {
        assert_eq!(casimir_h(0), 0.0);
        assert_eq!(casimir_h(3), -12.0);
        assert_eq!(casimir_h(4), -40.0);
    }

    #[test]
    fn quad_identity_on_first_column() {
        // [N_+, N_-]|3> = (5*3 - 3*9)|3> = -12 |3>
        let b = basis();
        let (minus, plus, _) = build_deformed_ladders(&b);
        let comm = plus.commutator(&minus).unwrap();
        assert_abs_diff_eq!(comm.get(0, 0).re, -12.0, epsilon = 1e-10);
    }

    #[test]
    fn all_residuals_small() {
        let b = basis();
        for which in AlgebraIdentity::ALL {
            let r = algebra_residual(&b, which);
            assert!(r < 1e-10, "{}: residual {r}", which.name());
        }
        assert!(algebra_residual(&b, AlgebraIdentity::HeisIII) < 1e-12);
    }

    #[test]
    fn f_diagonal_identity() {
        // F(n) * (N_- N_+ diagonal at n) = n - 2 on interior levels
        let b = basis();
        let (minus, plus, _) = build_deformed_ladders(&b);
        let prod = minus.matmul(&plus).unwrap();
        for j in 0..b.interior_limit() {
            let n = b.physical_level(j);
            let lhs = rescale_f(n) * prod.get(j, j).re;
            assert_abs_diff_eq!(lhs, n as f64 - 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn casimir_orderings_agree_and_vanish() {
        let b = basis();
        let (minus, plus, _) = build_deformed_ladders(&b);
        let left = minus
            .matmul(&plus)
            .unwrap()
            .add(&OperatorMatrix::diagonal(&b, "h", |j| {
                casimir_h(b.physical_level(j) as i64)
            }));
        let right = plus
            .matmul(&minus)
            .unwrap()
            .add(&OperatorMatrix::diagonal(&b, "h", |j| {
                casimir_h(b.physical_level(j) as i64 - 1)
            }));
        let (left, right) = (left.unwrap(), right.unwrap());
        let lim = b.interior_limit();
        assert!(left.sub(&right).unwrap().max_abs_in_columns(lim) < 1e-10);
        assert!(left.max_abs_in_columns(lim) < 1e-10);
    }

    #[test]
    fn mismatched_bases_rejected() {
        let a = OperatorMatrix::identity(&TruncatedBasis::new(10).unwrap());
        let b = OperatorMatrix::identity(&TruncatedBasis::new(12).unwrap());
        assert!(matches!(a.matmul(&b), Err(Error::BasisMismatch)));
    }
}
