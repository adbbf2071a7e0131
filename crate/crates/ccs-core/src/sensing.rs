//! Linear observation frontend and l0-oracle recovery.
//!
//! The collector observes `theta = B_A * alpha_A`: K linear combinations of
//! the latent amplitudes on the sensed columns. Amplitudes are zero on idle
//! channels and bounded away from zero on busy ones, so the busy pattern is
//! the support of `alpha_A`. When every K columns of the sensing matrix are
//! linearly independent, supports up to `ceil(K/2) - 1` busy entries are
//! uniquely identifiable; beyond that the frontend reports an erasure.
//!
//! Recovery here is an exhaustive minimum-cardinality search, not a
//! practical sparse solver: it is the ground truth the erasure abstraction
//! idealizes, and the simulation harness uses it to cross-validate the
//! abstract support-level rule.

use rand::Rng;

use crate::belief::SenseOutcome;
use crate::channel::StateVector;
use crate::error::{Error, Result};
use crate::policy::Action;
use crate::support::threshold_gamma;

use itertools::Itertools;

/// Real K x N sensing matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SensingMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl SensingMatrix {
    /// Builds from explicit rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::InvalidConfig(
                "sensing matrix needs at least one row".into(),
            ));
        }
        let c = rows[0].len();
        if c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidConfig(
                "sensing matrix rows must be equal, non-empty".into(),
            ));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.entry(r, c)).collect()
    }
}

/// Vandermonde sensing matrix on the nodes 1..=N: `B[r][c] = (c+1)^r` for
/// rows `r = 0..K`. Distinct positive nodes make every K x K column
/// submatrix nonsingular.
pub fn build_vandermonde(k: usize, n: usize) -> SensingMatrix {
    assert!(k >= 1 && k <= n, "need 1 <= K <= N");
    let mut data = Vec::with_capacity(k * n);
    for r in 0..k {
        for c in 0..n {
            data.push(((c + 1) as f64).powi(r as i32));
        }
    }
    SensingMatrix {
        rows: k,
        cols: n,
        data,
    }
}

/// Determinant by LU with partial pivoting; `a` is row-major k x k.
fn det_lu(a: &mut [f64], k: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..k {
        let mut piv = col;
        for row in col + 1..k {
            if a[row * k + col].abs() > a[piv * k + col].abs() {
                piv = row;
            }
        }
        if a[piv * k + col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            for j in 0..k {
                a.swap(col * k + j, piv * k + j);
            }
            det = -det;
        }
        let p = a[col * k + col];
        det *= p;
        for row in col + 1..k {
            let f = a[row * k + col] / p;
            for j in col..k {
                a[row * k + j] -= f * a[col * k + j];
            }
        }
    }
    det
}

/// Checks that every K-column submatrix is nonsingular, with a
/// scale-relative tolerance (`|det| > 1e-9 * product of column norms`).
///
/// The check enumerates all C(N, K) subsets, so it is refused above
/// N = 12; `k` must equal the matrix row count for the submatrices to be
/// square.
pub fn verify_spark(matrix: &SensingMatrix, k: usize) -> Result<bool> {
    if k != matrix.rows() {
        return Err(Error::InvalidConfig(format!(
            "spark check needs K = row count (K = {k}, rows = {})",
            matrix.rows()
        )));
    }
    let n = matrix.cols();
    if n > 12 {
        return Err(Error::TooLarge(format!(
            "spark verification enumerates C(N, K) subsets; refused for N = {n} > 12"
        )));
    }
    if n < k {
        return Err(Error::InvalidConfig(format!(
            "matrix has fewer columns ({n}) than K = {k}"
        )));
    }
    let norms: Vec<f64> = (0..n)
        .map(|c| matrix.column(c).iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    for subset in (0..n).combinations(k) {
        let mut sub = Vec::with_capacity(k * k);
        for r in 0..k {
            for &c in &subset {
                sub.push(matrix.entry(r, c));
            }
        }
        let det = det_lu(&mut sub, k);
        let scale: f64 = subset.iter().map(|&c| norms[c]).product();
        if det.abs() <= 1e-9 * scale {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Latent amplitudes: zero on idle channels, magnitude above the activation
/// floor on busy ones.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentVector {
    values: Vec<f64>,
    floor: f64,
}

impl LatentVector {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }
}

/// Draws amplitudes for the given state: idle channels get exactly zero,
/// busy channels a uniform magnitude in `[2 * floor, 4 * floor)` with a
/// random sign. The amplitude law beyond the floor is unconstrained by the
/// model; this choice keeps magnitudes well clear of the detection floor.
pub fn sample_latent<R: Rng + ?Sized>(
    state: &StateVector,
    alpha_floor: f64,
    rng: &mut R,
) -> Result<LatentVector> {
    if !alpha_floor.is_finite() || alpha_floor <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "activation floor must be positive (got {alpha_floor})"
        )));
    }
    let values = (0..state.n())
        .map(|i| {
            if state.is_busy(i) {
                let mag = rng.random_range(2.0 * alpha_floor..4.0 * alpha_floor);
                if rng.random::<bool>() {
                    mag
                } else {
                    -mag
                }
            } else {
                0.0
            }
        })
        .collect();
    Ok(LatentVector {
        values,
        floor: alpha_floor,
    })
}

/// Noiseless observation `theta = B_A * alpha_A` of the sensed columns.
pub fn observe(matrix: &SensingMatrix, action: &Action, alpha: &LatentVector) -> Vec<f64> {
    assert_eq!(
        matrix.cols(),
        alpha.values.len(),
        "matrix/latent width mismatch"
    );
    assert!(
        action.indices().last().is_none_or(|&i| i < matrix.cols()),
        "action index out of matrix range"
    );
    (0..matrix.rows())
        .map(|r| {
            action
                .indices()
                .iter()
                .map(|&c| matrix.entry(r, c) * alpha.values[c])
                .sum()
        })
        .collect()
}

/// Norm of the component of `theta` orthogonal to the span of `cols` —
/// the least-squares residual — via modified Gram-Schmidt.
fn residual_norm(cols: &[Vec<f64>], theta: &[f64]) -> f64 {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(cols.len());
    for col in cols {
        let mut v = col.clone();
        for q in &basis {
            let dot: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= dot * qi;
            }
        }
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-300 {
            for x in &mut v {
                *x /= norm;
            }
            basis.push(v);
        }
    }
    let mut r = theta.to_vec();
    for q in &basis {
        let dot: f64 = q.iter().zip(&r).map(|(a, b)| a * b).sum();
        for (ri, qi) in r.iter_mut().zip(q) {
            *ri -= dot * qi;
        }
    }
    r.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Minimum-cardinality exact-fit recovery of the busy pattern within the
/// sensed set.
///
/// Supports are enumerated by increasing size up to the recovery threshold;
/// a support fits when its least-squares residual is below
/// `1e-8 * (1 + ||theta||)`. Exactly one fit at the minimal size yields
/// `Recovered`; none within the threshold yields `Erasure`; multiple fits
/// mean the matrix violates K-column independence and are an error.
pub fn l0_recover(
    theta: &[f64],
    matrix: &SensingMatrix,
    action: &Action,
    k: usize,
) -> Result<SenseOutcome> {
    if theta.len() != matrix.rows() {
        return Err(Error::InvalidConfig(format!(
            "observation has {} entries for a {}-row matrix",
            theta.len(),
            matrix.rows()
        )));
    }
    action.check_bounds(matrix.cols())?;
    let m = action.len();
    if m > 12 {
        return Err(Error::TooLarge(format!(
            "support search enumerates subsets of the action; refused for |A| = {m} > 12"
        )));
    }
    let gamma = threshold_gamma(m, k);
    let theta_norm: f64 = theta.iter().map(|x| x * x).sum::<f64>().sqrt();
    let tol = 1e-8 * (1.0 + theta_norm);
    let action_cols: Vec<Vec<f64>> = action.indices().iter().map(|&c| matrix.column(c)).collect();

    for size in 0..=gamma.min(m) {
        let mut fits: Vec<Vec<usize>> = Vec::new();
        for support in (0..m).combinations(size) {
            let cols: Vec<Vec<f64>> = support
                .iter()
                .map(|&pos| action_cols[pos].clone())
                .collect();
            if residual_norm(&cols, theta) < tol {
                fits.push(support);
            }
        }
        match fits.len() {
            0 => continue,
            1 => {
                let mut bits = vec![false; m];
                for &pos in &fits[0] {
                    bits[pos] = true;
                }
                return Ok(SenseOutcome::Recovered(bits));
            }
            _ => return Err(Error::AmbiguousRecovery),
        }
    }
    Ok(SenseOutcome::Erasure)
}

/// Default activation floor used by the simulation harness.
pub const DEFAULT_ALPHA_FLOOR: f64 = 1.0;
