//! Operational matrices for the Chebyshev wavelet basis: the derivative
//! matrix `D`, the monomial change of basis `P`, the piecewise-monomial
//! variable-order matrix `T` and the wavelet variable-order matrix `Q`.

use std::fmt;
use std::sync::Arc;

use crate::basis::{beta, shifted_chebyshev_monomial_coeffs, BasisVector, WaveletBasis};
use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, LuFactorization};
use crate::scalars::{binomial, factorial, gamma};

type OrderFn = dyn Fn(f64, f64) -> f64 + Send + Sync;

/// A variable order `ϑ(x, t)` together with its integer bracket `q - 1 < ϑ <= q`.
#[derive(Clone)]
pub struct OrderFunction {
    q: u32,
    value: Arc<OrderFn>,
}

impl OrderFunction {
    pub fn new<F>(q: u32, value: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        if q == 0 {
            return Err(Error::InvalidConfig("order bracket q must be positive".into()));
        }
        Ok(Self {
            q,
            value: Arc::new(value),
        })
    }

    /// Constant order; the bracket is `ceil(order)`.
    pub fn constant(order: f64) -> Result<Self> {
        if !(order > 0.0 && order.is_finite()) {
            return Err(Error::InvalidConfig(format!("order must be positive, got {order}")));
        }
        Self::new(order.ceil() as u32, move |_, _| order)
    }

    pub fn bracket(&self) -> u32 {
        self.q
    }

    pub fn value(&self, x: f64, t: f64) -> f64 {
        (self.value)(x, t)
    }

    /// `ϑ(x, t)`, checked against the bracket.
    pub fn checked_value(&self, x: f64, t: f64) -> Result<f64> {
        let v = self.value(x, t);
        let q = self.q as f64;
        if v > q - 1.0 && v <= q {
            Ok(v)
        } else {
            Err(Error::OrderBracket {
                order: v,
                q: self.q,
                x,
                t,
            })
        }
    }
}

impl fmt::Debug for OrderFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrderFunction")
            .field("q", &self.q)
            .finish_non_exhaustive()
    }
}

fn sigma(j: usize) -> f64 {
    if j == 0 {
        2.0
    } else {
        1.0
    }
}

/// The `M x M` block `F` of `D` (zero-based indices).
fn derivative_block(basis: &WaveletBasis) -> DenseMatrix {
    let m = basis.per_interval();
    let scale = 2f64.powi(basis.level() as i32 + 2);
    let mut f = DenseMatrix::zeros(m, m);
    // One-based (i, j) with i >= 2, j < i, i + j odd; zero-based parity is the same.
    for i in 1..m {
        for j in 0..i {
            if (i + j) % 2 == 1 {
                f[(i, j)] = scale * i as f64 * (sigma(i) / sigma(j)).sqrt();
            }
        }
    }
    f
}

/// Derivative operational matrix: `dΨ/dt = D Ψ(t)`.
pub fn derivative_matrix(basis: &WaveletBasis) -> DenseMatrix {
    DenseMatrix::block_diagonal(&derivative_block(basis), basis.subintervals())
}

/// `D^r`, the operational matrix of the r-th derivative.
pub fn derivative_matrix_power(basis: &WaveletBasis, r: u32) -> Result<DenseMatrix> {
    if r == 0 {
        return Err(Error::InvalidConfig("derivative power must be at least 1".into()));
    }
    let block = derivative_block(basis).pow(r)?;
    Ok(DenseMatrix::block_diagonal(&block, basis.subintervals()))
}

/// Lower-triangular `L` with `s^l = Σ_j L[l][j] T*_j(s)`.
fn monomial_to_chebyshev(m: usize) -> DenseMatrix {
    // c[j][i] = coefficient of s^i in T*_j, lower triangular.
    let mut c = DenseMatrix::zeros(m, m);
    for j in 0..m {
        for (i, v) in shifted_chebyshev_monomial_coeffs(j).into_iter().enumerate() {
            c[(j, i)] = v;
        }
    }
    // Invert by forward substitution: L c = I.
    let mut inv = DenseMatrix::zeros(m, m);
    for col in 0..m {
        for row in col..m {
            let mut s = if row == col { 1.0 } else { 0.0 };
            for l in col..row {
                s -= c[(row, l)] * inv[(l, col)];
            }
            inv[(row, col)] = s / c[(row, row)];
        }
    }
    inv
}

/// Block of `P` for subinterval `n`.
fn change_block(basis: &WaveletBasis, n: usize, to_cheb: &DenseMatrix) -> DenseMatrix {
    let m = basis.per_interval();
    let scale = basis.subintervals() as f64;
    let amp = scale.sqrt();
    let mut block = DenseMatrix::zeros(m, m);
    // t^p = scale^{-p} Σ_l C(p, l) n^{p-l} s^l, s = scale t - n.
    for p in 0..m {
        let lead = scale.powi(-(p as i32));
        for l in 0..=p {
            let coef = lead * binomial(p as u32, l as u32) * (n as f64).powi((p - l) as i32);
            if coef == 0.0 {
                continue;
            }
            for j in 0..=l {
                block[(p, j)] += coef * to_cheb[(l, j)] / (beta(j) * amp);
            }
        }
    }
    block
}

/// `P` with `Φ(t) = P Ψ(t)`, built by exact basis conversion.
pub fn monomial_change_matrix(basis: &WaveletBasis) -> DenseMatrix {
    let to_cheb = monomial_to_chebyshev(basis.per_interval());
    let blocks: Vec<_> = (0..basis.subintervals())
        .map(|n| change_block(basis, n, &to_cheb))
        .collect();
    DenseMatrix::block_diagonal_from(&blocks)
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0) {
        return Err(Error::Singularity(format!(
            "variable-order matrices need t > 0, got t = {t}"
        )));
    }
    if t > 1.0 {
        return Err(Error::Domain {
            what: "t",
            value: t,
            domain: "(0, 1]",
        });
    }
    Ok(())
}

/// Diagonal of `G` without the `t^{-ϑ}` factor.
fn monomial_diagonal(m: usize, q: u32, order: f64) -> Result<Vec<f64>> {
    (0..m)
        .map(|p| {
            if (p as u32) < q {
                Ok(0.0)
            } else {
                Ok(factorial(p as u32) / gamma(p as f64 - order + 1.0)?)
            }
        })
        .collect()
}

/// `T_t^{ϑ(x,t)}`: variable-order Caputo matrix for `Φ(t)`.
pub fn vo_monomial_matrix(basis: &WaveletBasis, order: &OrderFunction, x: f64, t: f64) -> Result<DenseMatrix> {
    check_time(t)?;
    let v = order.checked_value(x, t)?;
    let diag = monomial_diagonal(basis.per_interval(), order.bracket(), v)?;
    let factor = t.powf(-v);
    let mut g = DenseMatrix::zeros(diag.len(), diag.len());
    for (i, d) in diag.iter().enumerate() {
        g[(i, i)] = factor * d;
    }
    Ok(DenseMatrix::block_diagonal(&g, basis.subintervals()))
}

/// `Q_t^{ϑ(x,t)} = P^{-1} T P`, built once from scratch. Use [`OperationalMatrices`]
/// when evaluating at many points.
pub fn vo_wavelet_matrix(basis: &WaveletBasis, order: &OrderFunction, x: f64, t: f64) -> Result<DenseMatrix> {
    OperationalMatrices::new(*basis)?.vo_wavelet_matrix(order, x, t)
}

/// Estimate of the infinity-norm condition number of a square matrix.
pub fn condition_number_inf(a: &DenseMatrix) -> Result<f64> {
    match LuFactorization::new(a, 0.0) {
        Ok(lu) => lu.condition_estimate_inf(),
        Err(Error::SingularSystem { .. }) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

/// Per-basis operational matrices with the factorization of `P` cached.
///
/// Every matrix here is block diagonal, so the cache keeps one factored
/// `M x M` block of `P` per subinterval.
#[derive(Debug, Clone)]
pub struct OperationalMatrices {
    basis: WaveletBasis,
    derivative: DenseMatrix,
    second_derivative: DenseMatrix,
    change: DenseMatrix,
    change_blocks: Vec<DenseMatrix>,
    change_inverse_blocks: Vec<DenseMatrix>,
}

impl OperationalMatrices {
    pub fn new(basis: WaveletBasis) -> Result<Self> {
        let to_cheb = monomial_to_chebyshev(basis.per_interval());
        let change_blocks: Vec<_> = (0..basis.subintervals())
            .map(|n| change_block(&basis, n, &to_cheb))
            .collect();
        let change_inverse_blocks = change_blocks
            .iter()
            .map(|b| {
                LuFactorization::new(b, 0.0)
                    .and_then(|lu| lu.inverse())
                    .map_err(|e| Error::Internal(format!("change-of-basis block not invertible: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            basis,
            derivative: derivative_matrix(&basis),
            second_derivative: derivative_matrix_power(&basis, 2)?,
            change: DenseMatrix::block_diagonal_from(&change_blocks),
            change_blocks,
            change_inverse_blocks,
        })
    }

    pub fn basis(&self) -> &WaveletBasis {
        &self.basis
    }

    pub fn derivative(&self) -> &DenseMatrix {
        &self.derivative
    }

    pub fn second_derivative(&self) -> &DenseMatrix {
        &self.second_derivative
    }

    pub fn change_of_basis(&self) -> &DenseMatrix {
        &self.change
    }

    /// Condition estimate of `P`.
    pub fn change_of_basis_condition(&self) -> Result<f64> {
        condition_number_inf(&self.change)
    }

    /// Block `n` of `Q` without the `t^{-ϑ}` factor, and the factor itself.
    fn q_block(&self, n: usize, diag: &[f64]) -> Result<DenseMatrix> {
        let mut tp = self.change_blocks[n].clone();
        for (i, d) in diag.iter().enumerate() {
            for v in tp.row_mut(i) {
                *v *= d;
            }
        }
        self.change_inverse_blocks[n].matmul(&tp)
    }

    fn order_parts(&self, order: &OrderFunction, x: f64, t: f64) -> Result<(Vec<f64>, f64)> {
        check_time(t)?;
        let v = order.checked_value(x, t)?;
        let diag = monomial_diagonal(self.basis.per_interval(), order.bracket(), v)?;
        Ok((diag, t.powf(-v)))
    }

    pub fn vo_wavelet_matrix(&self, order: &OrderFunction, x: f64, t: f64) -> Result<DenseMatrix> {
        let (diag, factor) = self.order_parts(order, x, t)?;
        let blocks = (0..self.basis.subintervals())
            .map(|n| self.q_block(n, &diag))
            .collect::<Result<Vec<_>>>()?;
        Ok(DenseMatrix::block_diagonal_from(&blocks).scale(factor))
    }

    /// `Q_t^{ϑ(x,t)} Ψ(t)`, touching only the block that supports `Ψ(t)`.
    pub fn vo_derivative_of_psi(&self, order: &OrderFunction, x: f64, t: f64) -> Result<BasisVector> {
        let (diag, factor) = self.order_parts(order, x, t)?;
        let n = self.basis.subinterval_of(t)?;
        let psi = crate::basis::psi_vector(&self.basis, t)?;
        let m = self.basis.per_interval();
        let start = self.basis.flat_index(n, 0);
        let block = self.q_block(n, &diag)?;
        let local = block.matvec(&psi[start..start + m])?;
        let mut out = vec![0.0; self.basis.size()];
        for (o, v) in out[start..start + m].iter_mut().zip(local) {
            *o = factor * v;
        }
        Ok(out.into())
    }
}
