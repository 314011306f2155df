//! Gauss-Jacobi quadrature by the Golub-Welsch eigenvalue method.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::scalars::gamma;

/// Nodes and weights for `∫_{-1}^{1} (1-x)^a (1+x)^b f(x) dx`.
#[derive(Debug, Clone)]
pub struct GaussJacobi {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussJacobi {
    pub fn new(n: usize, a: f64, b: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidConfig("quadrature needs at least one node".into()));
        }
        if !(a > -1.0 && b > -1.0) {
            return Err(Error::Domain {
                what: "Jacobi exponent",
                value: a.min(b),
                domain: "(-1, inf)",
            });
        }
        let ab = a + b;
        let mut jac = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            let kf = k as f64;
            let diag = if k == 0 {
                (b - a) / (ab + 2.0)
            } else {
                (b * b - a * a) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
            };
            jac[(k, k)] = diag;
            if k + 1 < n {
                let j = kf + 1.0;
                let s = 2.0 * j + ab;
                let num = 4.0 * j * (j + a) * (j + b) * (j + ab);
                let den = s * s * (s + 1.0) * (s - 1.0);
                let off = (num / den).sqrt();
                jac[(k, k + 1)] = off;
                jac[(k + 1, k)] = off;
            }
        }
        let mu0 = 2f64.powf(ab + 1.0) * gamma(a + 1.0)? * gamma(b + 1.0)? / gamma(ab + 2.0)?;
        let eig = SymmetricEigen::new(jac);
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| (eig.eigenvalues[i], mu0 * eig.eigenvectors[(0, i)].powi(2)))
            .collect();
        pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
        Ok(Self {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        })
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(*x)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn legendre_case_integrates_polynomials() {
        let q = GaussJacobi::new(5, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(q.integrate(|_| 1.0), 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(q.integrate(|x| x.powi(8)), 2.0 / 9.0, epsilon = 1e-14);
    }

    #[test]
    fn singular_weight_moments() {
        // ∫ (1-x)^a dx = 2^{a+1}/(a+1); ∫ (1-x)^a (1+x) dx = 2^{a+2}/((a+1)(a+2)).
        for a in [-0.95, -0.5, -0.2, 0.3] {
            let q = GaussJacobi::new(16, a, 0.0).unwrap();
            assert_abs_diff_eq!(q.integrate(|_| 1.0), 2f64.powf(a + 1.0) / (a + 1.0), epsilon = 1e-12);
            assert_abs_diff_eq!(
                q.integrate(|x| 1.0 + x),
                2f64.powf(a + 2.0) / ((a + 1.0) * (a + 2.0)),
                epsilon = 1e-12
            );
            assert!(q.nodes.windows(2).all(|w| w[0] < w[1]));
            assert!(q.weights.iter().all(|w| *w > 0.0));
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(GaussJacobi::new(0, 0.0, 0.0).is_err());
        assert!(GaussJacobi::new(4, -1.0, 0.0).is_err());
    }
}
