//! Collocation system assembly and solution.
//!
//! Unknowns are the entries of `U` in `u(x,t) = Ψ(x)^T U Ψ(t)`, ordered
//! row-major: `u_ab` sits in column `a * m̂ + b` (zero-based). Rows are the PDE
//! residuals at `(x_i, t_j)` for `i = 2..m̂-1`, `j = 2..m̂` in lexicographic
//! order, then the initial condition at every `x_i`, then the left and right
//! boundary conditions at `t_2..t_m̂`. Node indices are one-based into the
//! ascending zeros of `T*_m̂`.

use crate::basis::{chebyshev_zeros, check_unit, psi_vector, BasisVector, WaveletBasis};
use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, LuFactorization};
use crate::model::ProblemSpec;
use crate::opmat::OperationalMatrices;
use crate::scalars::ToleranceConfig;

/// Grid size of the interior residual diagnostic.
pub const RESIDUAL_GRID: usize = 20;

/// Which condition produced a row. Indices are one-based collocation node numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowTag {
    Pde { i: usize, j: usize },
    Initial { i: usize },
    BoundaryLeft { i: usize },
    BoundaryRight { i: usize },
}

#[derive(Debug, Clone)]
pub struct CollocationSystem {
    pub matrix: DenseMatrix,
    pub rhs: Vec<f64>,
    pub row_tags: Vec<RowTag>,
}

impl CollocationSystem {
    /// Counts of (PDE, initial, left, right) rows.
    pub fn row_counts(&self) -> (usize, usize, usize, usize) {
        self.row_tags.iter().fold((0, 0, 0, 0), |mut c, tag| {
            match tag {
                RowTag::Pde { .. } => c.0 += 1,
                RowTag::Initial { .. } => c.1 += 1,
                RowTag::BoundaryLeft { .. } => c.2 += 1,
                RowTag::BoundaryRight { .. } => c.3 += 1,
            }
            c
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    /// Infinity-norm condition estimate of the collocation matrix.
    pub condition_estimate: f64,
    /// Largest |F(x,t)| over the interior residual grid.
    pub max_interior_residual: f64,
}

/// Approximate solution `u(x,t) = Ψ(x)^T U Ψ(t)`.
#[derive(Debug, Clone)]
pub struct Solution {
    basis: WaveletBasis,
    coefficients: DenseMatrix,
    derivative: DenseMatrix,
    second_derivative: DenseMatrix,
    pub diagnostics: Diagnostics,
}

/// One row of an error table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRow {
    pub x: f64,
    pub t: f64,
    pub u_approx: f64,
    pub u_exact: f64,
    pub abs_err: f64,
}

fn outer_row(left: &[f64], right: &[f64], scale: f64, out: &mut [f64]) {
    let n = right.len();
    for (a, la) in left.iter().enumerate() {
        if *la == 0.0 {
            continue;
        }
        let f = scale * la;
        for (o, rb) in out[a * n..(a + 1) * n].iter_mut().zip(right) {
            *o += f * rb;
        }
    }
}

/// Per-point quantities the PDE row needs.
struct PointData {
    psi: BasisVector,
    d_psi: Vec<f64>,
    d2_psi: Vec<f64>,
}

fn point_data(ops: &OperationalMatrices, s: f64) -> Result<PointData> {
    let psi = psi_vector(ops.basis(), s)?;
    Ok(PointData {
        d_psi: ops.derivative().matvec(&psi)?,
        d2_psi: ops.second_derivative().matvec(&psi)?,
        psi,
    })
}

/// Coefficients of the residual `F(x,t)` in the unknowns, written into `row`.
fn pde_row(
    spec: &ProblemSpec,
    ops: &OperationalMatrices,
    x: f64,
    px: &PointData,
    t: f64,
    pt: &PointData,
    row: &mut [f64],
) -> Result<()> {
    let q_psi = ops.vo_derivative_of_psi(&spec.order, x, t)?;
    // Time part: ψ_a(x) * (α1 DΨ(t) + α2 QΨ(t))_b.
    let time: Vec<f64> = pt
        .d_psi
        .iter()
        .zip(q_psi.iter())
        .map(|(d, q)| spec.alpha1 * d + spec.alpha2 * q)
        .collect();
    outer_row(&px.psi, &time, 1.0, row);
    // Space part: (μ1 DΨ(x) - μ2 D²Ψ(x))_a * ψ_b(t).
    let space: Vec<f64> = px
        .d_psi
        .iter()
        .zip(&px.d2_psi)
        .map(|(d, d2)| spec.mu1 * d - spec.mu2 * d2)
        .collect();
    outer_row(&space, &pt.psi, 1.0, row);
    Ok(())
}

/// Builds the `m̂² x m̂²` collocation system.
pub fn assemble(spec: &ProblemSpec, basis: &WaveletBasis) -> Result<CollocationSystem> {
    let ops = OperationalMatrices::new(*basis)?;
    assemble_with(spec, &ops)
}

pub fn assemble_with(spec: &ProblemSpec, ops: &OperationalMatrices) -> Result<CollocationSystem> {
    let size = ops.basis().size();
    let n = size * size;
    let nodes = chebyshev_zeros(size);
    let data = nodes.iter().map(|&s| point_data(ops, s)).collect::<Result<Vec<_>>>()?;

    let mut matrix = DenseMatrix::zeros(n, n);
    let mut rhs = Vec::with_capacity(n);
    let mut row_tags = Vec::with_capacity(n);
    let mut r = 0;

    // One-based i in 2..=m̂-1, j in 2..=m̂.
    for i in 2..size {
        for j in 2..=size {
            let (x, t) = (nodes[i - 1], nodes[j - 1]);
            pde_row(spec, ops, x, &data[i - 1], t, &data[j - 1], matrix.row_mut(r))?;
            rhs.push(spec.source.value(x, t));
            row_tags.push(RowTag::Pde { i, j });
            r += 1;
        }
    }

    let psi0 = psi_vector(ops.basis(), 0.0)?;
    let psi1 = psi_vector(ops.basis(), 1.0)?;
    for i in 1..=size {
        outer_row(&data[i - 1].psi, &psi0, 1.0, matrix.row_mut(r));
        rhs.push((spec.initial)(nodes[i - 1]));
        row_tags.push(RowTag::Initial { i });
        r += 1;
    }
    for i in 2..=size {
        outer_row(&psi0, &data[i - 1].psi, 1.0, matrix.row_mut(r));
        rhs.push((spec.boundary_left)(nodes[i - 1]));
        row_tags.push(RowTag::BoundaryLeft { i });
        r += 1;
    }
    for i in 2..=size {
        outer_row(&psi1, &data[i - 1].psi, 1.0, matrix.row_mut(r));
        rhs.push((spec.boundary_right)(nodes[i - 1]));
        row_tags.push(RowTag::BoundaryRight { i });
        r += 1;
    }
    debug_assert_eq!(r, n);

    if !matrix.is_finite() || rhs.iter().any(|v| !v.is_finite()) {
        return Err(Error::Internal("collocation system has non-finite entries".into()));
    }
    Ok(CollocationSystem { matrix, rhs, row_tags })
}

/// Solves with the default tolerances.
pub fn solve(spec: &ProblemSpec, basis: &WaveletBasis) -> Result<Solution> {
    solve_with(spec, basis, &ToleranceConfig::default())
}

pub fn solve_with(spec: &ProblemSpec, basis: &WaveletBasis, tol: &ToleranceConfig) -> Result<Solution> {
    tol.validate()?;
    spec.validate()?;
    let ops = OperationalMatrices::new(*basis)?;
    let system = assemble_with(spec, &ops)?;
    let mut sol = solve_system(&system, &ops, tol)?;
    sol.diagnostics.max_interior_residual = max_interior_residual(&sol, spec, &ops)?;
    Ok(sol)
}

/// Solves an assembled system; the residual diagnostic is left at zero.
pub fn solve_system(system: &CollocationSystem, ops: &OperationalMatrices, tol: &ToleranceConfig) -> Result<Solution> {
    let basis = *ops.basis();
    let size = basis.size();
    let lu = LuFactorization::new(&system.matrix, tol.pivot_rel_tol)?;
    let mut x = lu.solve(&system.rhs)?;
    refine(&system.matrix, &system.rhs, &lu, &mut x)?;
    let condition_estimate = lu.condition_estimate_inf()?;
    Ok(Solution {
        basis,
        coefficients: DenseMatrix::from_row_major(size, size, x)?,
        derivative: ops.derivative().clone(),
        second_derivative: ops.second_derivative().clone(),
        diagnostics: Diagnostics {
            condition_estimate,
            max_interior_residual: 0.0,
        },
    })
}

/// A few rounds of iterative refinement; stops once the residual stops shrinking.
fn refine(a: &DenseMatrix, b: &[f64], lu: &LuFactorization, x: &mut [f64]) -> Result<()> {
    let residual = |x: &[f64]| -> Result<Vec<f64>> { Ok(a.matvec(x)?.iter().zip(b).map(|(ax, bi)| bi - ax).collect()) };
    let norm = |r: &[f64]| r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut r = residual(x)?;
    for _ in 0..3 {
        let dx = lu.solve(&r)?;
        let trial: Vec<f64> = x.iter().zip(&dx).map(|(xi, di)| xi + di).collect();
        let r_new = residual(&trial)?;
        if norm(&r_new) >= norm(&r) {
            break;
        }
        x.copy_from_slice(&trial);
        r = r_new;
    }
    Ok(())
}

fn max_interior_residual(sol: &Solution, spec: &ProblemSpec, ops: &OperationalMatrices) -> Result<f64> {
    let pts: Vec<f64> = (1..=RESIDUAL_GRID)
        .map(|i| i as f64 / (RESIDUAL_GRID + 1) as f64)
        .collect();
    let mut worst: f64 = 0.0;
    for &x in &pts {
        for &t in &pts {
            worst = worst.max(residual(sol, spec, ops, x, t)?.abs());
        }
    }
    Ok(worst)
}

/// `F(x,t)` for a computed solution.
pub fn residual(sol: &Solution, spec: &ProblemSpec, ops: &OperationalMatrices, x: f64, t: f64) -> Result<f64> {
    let size = sol.basis.size();
    let mut row = vec![0.0; size * size];
    pde_row(spec, ops, x, &point_data(ops, x)?, t, &point_data(ops, t)?, &mut row)?;
    let lhs: f64 = row.iter().zip(sol.coefficients.as_slice()).map(|(a, u)| a * u).sum();
    Ok(lhs - spec.source.value(x, t))
}

impl Solution {
    /// Builds a solution from a coefficient matrix, e.g. for evaluation only.
    pub fn from_coefficients(basis: WaveletBasis, coefficients: DenseMatrix) -> Result<Self> {
        let size = basis.size();
        if coefficients.rows() != size || coefficients.cols() != size {
            return Err(Error::Dimension(format!("coefficient matrix must be {size}x{size}")));
        }
        let ops = OperationalMatrices::new(basis)?;
        Ok(Self {
            basis,
            coefficients,
            derivative: ops.derivative().clone(),
            second_derivative: ops.second_derivative().clone(),
            diagnostics: Diagnostics {
                condition_estimate: f64::NAN,
                max_interior_residual: f64::NAN,
            },
        })
    }

    pub fn basis(&self) -> &WaveletBasis {
        &self.basis
    }

    /// The coefficient matrix `U`.
    pub fn coefficients(&self) -> &DenseMatrix {
        &self.coefficients
    }

    fn bilinear(&self, left: &[f64], right: &[f64]) -> Result<f64> {
        let ur = self.coefficients.matvec(right)?;
        Ok(left.iter().zip(&ur).map(|(a, b)| a * b).sum())
    }

    fn check(x: f64, t: f64) -> Result<()> {
        check_unit(x, "x")?;
        check_unit(t, "t")
    }

    /// `u(x, t)`.
    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        Self::check(x, t)?;
        self.bilinear(&psi_vector(&self.basis, x)?, &psi_vector(&self.basis, t)?)
    }

    pub fn eval_dx(&self, x: f64, t: f64) -> Result<f64> {
        Self::check(x, t)?;
        let dx = self.derivative.matvec(&psi_vector(&self.basis, x)?)?;
        self.bilinear(&dx, &psi_vector(&self.basis, t)?)
    }

    pub fn eval_dxx(&self, x: f64, t: f64) -> Result<f64> {
        Self::check(x, t)?;
        let dxx = self.second_derivative.matvec(&psi_vector(&self.basis, x)?)?;
        self.bilinear(&dxx, &psi_vector(&self.basis, t)?)
    }

    pub fn eval_dt(&self, x: f64, t: f64) -> Result<f64> {
        Self::check(x, t)?;
        let dt = self.derivative.matvec(&psi_vector(&self.basis, t)?)?;
        self.bilinear(&psi_vector(&self.basis, x)?, &dt)
    }
}

/// Shorthand for [`Solution::eval`].
pub fn eval_solution(sol: &Solution, x: f64, t: f64) -> Result<f64> {
    sol.eval(x, t)
}

/// Absolute errors on the product grid `xs x ts`, x-major.
pub fn error_report(sol: &Solution, spec: &ProblemSpec, xs: &[f64], ts: &[f64]) -> Result<Vec<ErrorRow>> {
    let exact = spec
        .exact
        .as_ref()
        .ok_or_else(|| Error::Precondition("problem has no exact solution".into()))?;
    let mut rows = Vec::with_capacity(xs.len() * ts.len());
    for &x in xs {
        for &t in ts {
            let u_approx = sol.eval(x, t)?;
            let u_exact = exact.value(x, t);
            rows.push(ErrorRow {
                x,
                t,
                u_approx,
                u_exact,
                abs_err: (u_approx - u_exact).abs(),
            });
        }
    }
    Ok(rows)
}
