//! Shifted Chebyshev polynomials, Chebyshev wavelets and the companion
//! piecewise-monomial family on [0, 1].

use std::f64::consts::PI;
use std::ops::Deref;

use crate::error::{Error, Result};

/// Largest supported dilation level.
pub const MAX_LEVEL: u32 = 20;

/// Discretization `(k, M)`: `2^k` dyadic subintervals with `M` functions each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WaveletBasis {
    k: u32,
    m: usize,
}

impl WaveletBasis {
    pub fn new(k: u32, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidConfig("M must be at least 1".into()));
        }
        if k > MAX_LEVEL {
            return Err(Error::InvalidConfig(format!("k = {k} exceeds {MAX_LEVEL}")));
        }
        Ok(Self { k, m })
    }

    /// Dilation level `k`.
    pub fn level(&self) -> u32 {
        self.k
    }

    /// Polynomials per subinterval, `M`.
    pub fn per_interval(&self) -> usize {
        self.m
    }

    pub fn subintervals(&self) -> usize {
        1 << self.k
    }

    /// Total number of basis functions `2^k * M`.
    pub fn size(&self) -> usize {
        self.subintervals() * self.m
    }

    /// Zero-based flat index of `(n, m)`. The one-based index is `M n + m + 1`.
    pub fn flat_index(&self, n: usize, m: usize) -> usize {
        debug_assert!(n < self.subintervals() && m < self.m);
        self.m * n + m
    }

    /// Inverse of [`flat_index`](Self::flat_index).
    pub fn split_index(&self, i: usize) -> (usize, usize) {
        (i / self.m, i % self.m)
    }

    /// Subinterval containing `t`: `[n/2^k, (n+1)/2^k)`, with the last one closed.
    pub fn subinterval_of(&self, t: f64) -> Result<usize> {
        check_unit(t, "t")?;
        let scaled = t * self.subintervals() as f64;
        Ok((scaled.floor() as usize).min(self.subintervals() - 1))
    }

    fn scale(&self) -> f64 {
        self.subintervals() as f64
    }
}

pub(crate) fn check_unit(t: f64, what: &'static str) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value: t,
            domain: "[0, 1]",
        })
    }
}

/// Values of `Ψ(t)` or `Φ(t)` at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisVector(Vec<f64>);

impl BasisVector {
    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for BasisVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for BasisVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// Normalization constant `β_m`.
pub fn beta(m: usize) -> f64 {
    if m == 0 {
        (2.0 / PI).sqrt()
    } else {
        2.0 / PI.sqrt()
    }
}

/// `T*_m(t)` by the three-term recurrence.
pub fn shifted_chebyshev(m: usize, t: f64) -> Result<f64> {
    check_unit(t, "t")?;
    Ok(shifted_chebyshev_unchecked(m, t))
}

/// `T*_0..T*_{count-1}` at `s`, no domain check.
fn shifted_chebyshev_all(count: usize, s: f64, out: &mut [f64]) {
    let y = 2.0 * s - 1.0;
    if count > 0 {
        out[0] = 1.0;
    }
    if count > 1 {
        out[1] = y;
    }
    for m in 2..count {
        out[m] = 2.0 * y * out[m - 1] - out[m - 2];
    }
}

pub(crate) fn shifted_chebyshev_unchecked(m: usize, s: f64) -> f64 {
    let y = 2.0 * s - 1.0;
    match m {
        0 => 1.0,
        1 => y,
        _ => {
            let (mut prev, mut cur) = (1.0, y);
            for _ in 1..m {
                let next = 2.0 * y * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// Monomial coefficients `c_0..c_m` of `T*_m` from the explicit factorial sum.
pub fn shifted_chebyshev_monomial_coeffs(m: usize) -> Vec<f64> {
    if m == 0 {
        return vec![1.0];
    }
    // m (m+i-1)! / ((m-i)! (2i)!) 4^i, built up from the i = 0 term (= 1) by
    // exact integer ratios; every partial term is an integer.
    let mut out = Vec::with_capacity(m + 1);
    let mut mag: i128 = 1;
    let mi = m as i128;
    for i in 0..=m {
        if i > 0 {
            let ii = i as i128;
            mag = mag * 4 * (mi + ii - 1) * (mi - ii + 1) / ((2 * ii - 1) * 2 * ii);
        }
        let sign = if (m - i).is_multiple_of(2) { 1.0 } else { -1.0 };
        out.push(sign * mag as f64);
    }
    out
}

/// `Ψ(t)`: Chebyshev wavelets `β_m 2^{k/2} T*_m(2^k t - n)`.
pub fn psi_vector(basis: &WaveletBasis, t: f64) -> Result<BasisVector> {
    let n = basis.subinterval_of(t)?;
    let mut out = vec![0.0; basis.size()];
    let s = basis.scale() * t - n as f64;
    let start = basis.flat_index(n, 0);
    let block = &mut out[start..start + basis.m];
    shifted_chebyshev_all(basis.m, s, block);
    let amp = basis.scale().sqrt();
    for (m, v) in block.iter_mut().enumerate() {
        *v *= beta(m) * amp;
    }
    Ok(BasisVector(out))
}

/// `Φ(t)`: piecewise monomials `t^m` on the subinterval containing `t`.
pub fn phi_vector(basis: &WaveletBasis, t: f64) -> Result<BasisVector> {
    let n = basis.subinterval_of(t)?;
    let mut out = vec![0.0; basis.size()];
    let start = basis.flat_index(n, 0);
    let mut p = 1.0;
    for v in &mut out[start..start + basis.m] {
        *v = p;
        p *= t;
    }
    Ok(BasisVector(out))
}

/// Chebyshev weight `w_n(t)` of subinterval `n`; zero outside the subinterval.
pub fn chebyshev_weight(basis: &WaveletBasis, n: usize, t: f64) -> Result<f64> {
    if n >= basis.subintervals() {
        return Err(Error::Precondition(format!(
            "subinterval {n} out of range for k = {}",
            basis.k
        )));
    }
    let lo = n as f64 / basis.scale();
    let hi = (n + 1) as f64 / basis.scale();
    if t == lo || t == hi {
        return Err(Error::Singularity(format!(
            "Chebyshev weight is singular at the subinterval endpoint t = {t}"
        )));
    }
    if t < lo || t > hi {
        return Ok(0.0);
    }
    let s = 2.0 * basis.scale() * t - 2.0 * n as f64 - 1.0;
    Ok(1.0 / (1.0 - s * s).sqrt())
}

/// Roots of `T*_count` on (0, 1), ascending.
pub fn chebyshev_zeros(count: usize) -> Vec<f64> {
    let n = count as f64;
    (1..=count)
        .map(|j| 0.5 + 0.5 * (((2 * (count - j) + 1) as f64) * PI / (2.0 * n)).cos())
        .collect()
}
