//! Non-standard Gegenbauer polynomials `G_n^(γ)` and Jacobi polynomials
//! `P_n^(α,β)`.
//!
//! The Gegenbauer family uses the normalization `G_0 = 1`,
//! `G_n = C_n^(γ) / (2γ)` for `n ≥ 1`, which stays finite at `γ = 0`
//! (`G_n^(0) = T_n / n`). With it, `G_n^(1/2) = P_n` (Legendre) and
//! `G_n^(1) = U_n / 2`.

use std::fmt;
use std::str::FromStr;

use faer::Mat;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::field::Scalar;

/// Gegenbauer index `γ`, restricted to `γ > -1/2` where the weight
/// `(1 - x²)^(γ - 1/2)` is integrable.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct GegenbauerIndex(f64);

impl GegenbauerIndex {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma.is_finite() && gamma > -0.5 {
            Ok(Self(gamma))
        } else {
            Err(Error::InvalidGegenbauerIndex(gamma))
        }
    }

    pub const CHEBYSHEV: Self = Self(0.0);
    pub const LEGENDRE: Self = Self(0.5);

    pub fn gamma(self) -> f64 {
        self.0
    }

    /// `γ + 1`: the index reached by one differentiation, and the index of
    /// the Galerkin method equivalent to a Tau method at `γ`.
    pub fn raised(self) -> Self {
        Self(self.0 + 1.0)
    }

    /// The Jacobi pair `α = β = γ - 1/2`.
    pub fn as_jacobi(self) -> JacobiIndex {
        JacobiIndex {
            alpha: self.0 - 0.5,
            beta: self.0 - 0.5,
        }
    }
}

impl TryFrom<f64> for GegenbauerIndex {
    type Error = Error;
    fn try_from(gamma: f64) -> Result<Self> {
        Self::new(gamma)
    }
}

impl From<GegenbauerIndex> for f64 {
    fn from(idx: GegenbauerIndex) -> f64 {
        idx.0
    }
}

/// Jacobi indices `(α, β)`, both `> -1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JacobiIndex {
    alpha: f64,
    beta: f64,
}

impl JacobiIndex {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if alpha.is_finite() && beta.is_finite() && alpha > -1.0 && beta > -1.0 {
            Ok(Self { alpha, beta })
        } else {
            Err(Error::InvalidJacobiIndex(alpha, beta))
        }
    }

    pub fn alpha(self) -> f64 {
        self.alpha
    }

    pub fn beta(self) -> f64 {
        self.beta
    }

    /// `(β, α)`; `P_n^(α,β)(-x) = (-1)^n P_n^(β,α)(x)`.
    pub fn swapped(self) -> Self {
        Self {
            alpha: self.beta,
            beta: self.alpha,
        }
    }

    /// `(α + 1, β + 1)`.
    pub fn raised(self) -> Self {
        Self {
            alpha: self.alpha + 1.0,
            beta: self.beta + 1.0,
        }
    }
}

/// Even (`n = 2m`) or odd (`n = 2m + 1`) mode family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Parity offset `ip ∈ {0, 1}`.
    pub fn offset(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    /// Polynomial degree of the `l`-th mode of this family.
    pub fn degree(self, l: usize) -> usize {
        2 * l + self.offset()
    }

    pub fn flipped(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn of_degree(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

impl FromStr for Parity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(Error::UnknownTag {
                kind: "parity",
                value: other.to_string(),
            }),
        }
    }
}

/// `G_n^(γ)(x)` by the forward three-term recurrence
/// `(n+1) G_{n+1} = 2(n+γ) x G_n - (n-1+2γ) G_{n-1}` seeded with
/// `G_0 = 1`, `G_1 = x`, `G_2 = (γ+1)x² - 1/2`.
pub fn gegenbauer_eval(n: usize, idx: GegenbauerIndex, x: f64) -> Result<f64> {
    let v = gegenbauer_eval_with(n, &idx.gamma(), &x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite("gegenbauer_eval"))
    }
}

/// Backend-generic form of [`gegenbauer_eval`]; with `BigRational` this is the
/// exact oracle path (intended for `n ≤ 40`).
pub fn gegenbauer_eval_with<T: Scalar>(n: usize, gamma: &T, x: &T) -> T {
    let one = T::one();
    let two = T::from_int(2);
    let g0 = one.clone();
    if n == 0 {
        return g0;
    }
    let g1 = x.clone();
    if n == 1 {
        return g1;
    }
    let mut prev = g1;
    let mut cur = (gamma.clone() + one) * x.clone() * x.clone() - T::one() / two.clone();
    for k in 2..n {
        let kk = T::from_int(k as i64);
        let next = (two.clone() * (kk.clone() + gamma.clone()) * x.clone() * cur.clone()
            - (kk.clone() - T::one() + two.clone() * gamma.clone()) * prev)
            / (kk + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// `G_n^(γ)(1) = (2γ+1)(2γ+2)⋯(2γ+n-1) / n!` as an explicit product.
pub fn gegenbauer_at_one(n: usize, idx: GegenbauerIndex) -> f64 {
    gegenbauer_at_one_with(n, &idx.gamma())
}

pub fn gegenbauer_at_one_with<T: Scalar>(n: usize, gamma: &T) -> T {
    let two_gamma = T::from_int(2) * gamma.clone();
    let mut acc = T::one();
    for j in 1..n {
        acc = acc * (two_gamma.clone() + T::from_int(j as i64)) / T::from_int(j as i64 + 1);
    }
    acc
}

/// `D^k G_n^(γ)(1)`. Zero when `k > n`.
///
/// From `D G_{n+1}^(γ) = 2(γ+1) G_n^(γ+1)` (and `D G_1 = G_0`):
/// `D^k G_n(1) = 2^(k-1) (γ+1)_(k-1) (2γ+2k)_(n-k) / (n-k)!` for `k ≥ 1`.
pub fn gegenbauer_deriv_at_one(n: usize, idx: GegenbauerIndex, k: usize) -> f64 {
    gegenbauer_deriv_at_one_with(n, &idx.gamma(), k)
}

pub fn gegenbauer_deriv_at_one_with<T: Scalar>(n: usize, gamma: &T, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    if k == 0 {
        return gegenbauer_at_one_with(n, gamma);
    }
    let two = T::from_int(2);
    let mut acc = T::one();
    for i in 1..k {
        acc = acc * two.clone() * (gamma.clone() + T::from_int(i as i64));
    }
    let base = two.clone() * gamma.clone() + T::from_int(2 * k as i64);
    for i in 0..(n - k) {
        acc = acc * (base.clone() + T::from_int(i as i64)) / T::from_int(i as i64 + 1);
    }
    acc
}

/// `ln h_n^γ`, the log of the squared weighted norm of `G_n^(γ)`.
pub fn gegenbauer_log_norm(n: usize, idx: GegenbauerIndex) -> f64 {
    let g = idx.gamma();
    if n == 0 {
        // h_0 = ∫ (1-x²)^(γ-1/2) dx = √π Γ(γ+1/2) / Γ(γ+1)
        return 0.5 * std::f64::consts::PI.ln() + ln_gamma(g + 0.5) - ln_gamma(g + 1.0);
    }
    let nf = n as f64;
    // γ Γ(γ) = Γ(γ+1) keeps γ = 0 regular.
    std::f64::consts::PI.ln() - (1.0 + 2.0 * g) * std::f64::consts::LN_2 + ln_gamma(nf + 2.0 * g)
        - (nf + g).ln()
        - ln_gamma(nf + 1.0)
        - 2.0 * ln_gamma(g + 1.0)
}

/// `h_n^γ = ∫ (1-x²)^(γ-1/2) (G_n^(γ))² dx`.
pub fn gegenbauer_norm(n: usize, idx: GegenbauerIndex) -> Result<f64> {
    let h = gegenbauer_log_norm(n, idx).exp();
    if h.is_finite() && h > 0.0 {
        Ok(h)
    } else {
        Err(Error::NonFinite("gegenbauer_norm"))
    }
}

/// `P_n^(α,β)(x)` by the standard three-term recurrence
/// `a1 P_{n+1} = (a2 + a3 x) P_n - a4 P_{n-1}`.
pub fn jacobi_eval(n: usize, idx: JacobiIndex, x: f64) -> f64 {
    let (a, b) = (idx.alpha(), idx.beta());
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 0.5 * ((a + b + 2.0) * x + (a - b));
    for k in 1..n {
        let k = k as f64;
        let s = 2.0 * k + a + b;
        let a1 = 2.0 * (k + 1.0) * (k + a + b + 1.0) * s;
        let a2 = (s + 1.0) * (a * a - b * b);
        let a3 = s * (s + 1.0) * (s + 2.0);
        let a4 = 2.0 * (k + a) * (k + b) * (s + 2.0);
        let next = ((a2 + a3 * x) * cur - a4 * prev) / a1;
        prev = cur;
        cur = next;
    }
    cur
}

/// `D^k P_n^(α,β)(1) = 2^(-k) ∏_{j=1..k} (n+α+β+j) · binom(n+α, n-k)`.
/// Returns 0 for `k > n` so fixed-length derivative sums need no guards.
pub fn jacobi_deriv_at_one(n: usize, idx: JacobiIndex, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let (a, b) = (idx.alpha(), idx.beta());
    let nf = n as f64;
    let mut acc = 1.0;
    for j in 1..=k {
        acc *= 0.5 * (nf + a + b + j as f64);
    }
    // binom(m + a', m) with m = n - k, a' = α + k
    let shifted = a + k as f64;
    for i in 1..=(n - k) {
        acc *= (shifted + i as f64) / i as f64;
    }
    acc
}

/// First-derivative connection matrix over degrees `0..size`:
/// `D G_j = Σ_k D[k, j] G_k`, from `2(k+γ) G_k = D[G_{k+1} - G_{k-1}]`,
/// `2(1+γ) G_1 = D G_2` and `G_0 = D G_1`.
pub fn gegenbauer_derivative_matrix(size: usize, idx: GegenbauerIndex) -> Mat<f64> {
    let g = idx.gamma();
    let mut d = Mat::<f64>::zeros(size, size);
    for j in 1..size {
        let mut k = j as isize - 1;
        while k >= 0 {
            d[(k as usize, j)] = if k == 0 { 1.0 } else { 2.0 * (k as f64 + g) };
            k -= 2;
        }
    }
    d
}

/// `D²` restricted to one parity family: entry `(k, l)` is the coefficient of
/// `G_{n(k)}` in `D² G_{n(l)}` with `n(l) = 2l + ip`. Strictly upper
/// triangular.
pub fn second_derivative_matrix(m: usize, idx: GegenbauerIndex, parity: Parity) -> Mat<f64> {
    if m == 0 {
        return Mat::zeros(0, 0);
    }
    let size = parity.degree(m - 1) + 1;
    let d = gegenbauer_derivative_matrix(size, idx);
    let d2 = &d * &d;
    Mat::from_fn(m, m, |k, l| d2[(parity.degree(k), parity.degree(l))])
}

/// Multiplication by `x` over degrees `0..size`, as a `(size + 1) × size`
/// matrix: `x G_j = Σ_k X[k, j] G_k`.
pub fn x_multiplication_matrix(size: usize, idx: GegenbauerIndex) -> Mat<f64> {
    let g = idx.gamma();
    let mut x = Mat::<f64>::zeros(size + 1, size);
    for j in 0..size {
        match j {
            0 => x[(1, 0)] = 1.0,
            // G_2 = (γ+1)x² - 1/2  ⇒  x G_1 = (G_2 + G_0/2)/(γ+1)
            1 => {
                x[(2, 1)] = 1.0 / (g + 1.0);
                x[(0, 1)] = 0.5 / (g + 1.0);
            }
            _ => {
                let n = j as f64;
                let den = 2.0 * (n + g);
                x[(j + 1, j)] = (n + 1.0) / den;
                x[(j - 1, j)] = (n - 1.0 + 2.0 * g) / den;
            }
        }
    }
    x
}
