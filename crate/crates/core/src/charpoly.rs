//! Characteristic polynomials in `μ = 1/λ`.
//!
//! For the parity-separated Gegenbauer Tau method the even and odd
//! characteristic polynomials are
//!
//! ```text
//! p_m(μ) = Σ_k μ^k D^{2k} G_{2m}(1),    q_m(μ) = Σ_k μ^k D^{2k} G_{2m+1}(1)
//! ```
//!
//! and both families obey a three-term recurrence plus a constant `K_n`:
//!
//! ```text
//! μ y_m = y_{m+1} / (4(γ+n+1)(γ+n)) - y_m / (2(γ+n+1)(γ+n-1))
//!       + y_{m-1} / (4(γ+n)(γ+n-1)) - K_n,          n = 2m + ip
//! ```
//!
//! with the `n = 0, 1, 2` rows specialised. The Jacobi (non-symmetric)
//! characteristic polynomial is assembled from the `Ω_n^(α,β)` sums instead.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::orthopoly::{
    gegenbauer_at_one_with, gegenbauer_deriv_at_one_with, jacobi_deriv_at_one, GegenbauerIndex,
    JacobiIndex, Parity,
};
use crate::poly::MuPolynomial;

fn int<T: Scalar>(v: usize) -> T {
    T::from_int(v as i64)
}

/// `K_n^(γ)`: special forms for `n ≤ 2`, closed form for `n ≥ 3`.
pub fn k_constant(n: usize, idx: GegenbauerIndex) -> f64 {
    k_constant_with(n, &idx.gamma())
}

pub fn k_constant_with<T: Scalar>(n: usize, gamma: &T) -> T {
    let g = gamma.clone();
    let two_g = int::<T>(2) * g.clone();
    match n {
        // G_2(1) / (2(γ+1))
        0 => (two_g.clone() + T::one()) / (int::<T>(4) * (g + T::one())),
        // G_3(1) / (4(γ+1)(γ+2))
        1 => (two_g + T::one()) / (int::<T>(12) * (g + int(2))),
        2 => {
            (int::<T>(2) * g.clone() * g.clone() + g.clone() - int(7)) * (two_g + T::one())
                / (int::<T>(48) * (g.clone() + T::one()) * (g + int(2)))
        }
        _ => {
            let nn = n * n;
            let den = int::<T>(n * (nn - 1) * (nn - 4));
            let mut binom = T::one();
            for i in 1..=(n - 3) {
                binom = binom * (two_g.clone() + int(i)) / int(i);
            }
            (two_g.clone() - T::one()) * (two_g - int(3)) / den * binom
        }
    }
}

/// The `K_n` values for `n = 0..=n_max` at one index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KSequence {
    pub gamma: GegenbauerIndex,
    pub values: Vec<f64>,
}

impl KSequence {
    pub fn closed_form(idx: GegenbauerIndex, n_max: usize) -> Self {
        Self {
            gamma: idx,
            values: (0..=n_max).map(|n| k_constant(n, idx)).collect(),
        }
    }

    /// `K_{n+2} = (2γ+n-1)(2γ+n-2) / ((n+4)(n+3)) K_n`, seeded with
    /// `K_3 = (2γ-1)(2γ-3)/120` and `K_4 = (4γ²-1)(2γ-3)/720`.
    pub fn by_recurrence(idx: GegenbauerIndex, n_max: usize) -> Self {
        let g = idx.gamma();
        let mut values = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let v = match n {
                0..=2 => k_constant(n, idx),
                3 => (2.0 * g - 1.0) * (2.0 * g - 3.0) / 120.0,
                4 => (4.0 * g * g - 1.0) * (2.0 * g - 3.0) / 720.0,
                _ => {
                    let p = (n - 2) as f64;
                    values[n - 2] * (2.0 * g + p - 1.0) * (2.0 * g + p - 2.0)
                        / ((p + 4.0) * (p + 3.0))
                }
            };
            values.push(v);
        }
        Self { gamma: idx, values }
    }

    pub fn get(&self, n: usize) -> Option<f64> {
        self.values.get(n).copied()
    }
}

/// Band coefficients of the recurrence at degree `n`:
/// `(up, mid, down)` multiplying `y_{m+1}`, `y_m`, `y_{m-1}`.
pub(crate) fn recurrence_bands<T: Scalar>(n: usize, gamma: &T) -> (T, T, T) {
    let gn = gamma.clone() + int(n);
    let up = if n == 0 {
        T::one() / (int::<T>(2) * (gamma.clone() + T::one()))
    } else {
        T::one() / (int::<T>(4) * (gn.clone() + T::one()) * gn.clone())
    };
    // mid and down only enter from n = 2 and n = 3; at γ = 0 the formulas
    // would divide by zero below that
    let mid = if n >= 2 {
        -(T::one() / (int::<T>(2) * (gn.clone() + T::one()) * (gn.clone() - T::one())))
    } else {
        T::zero()
    };
    let down = if n >= 3 {
        T::one() / (int::<T>(4) * gn.clone() * (gn - T::one()))
    } else {
        T::zero()
    };
    (up, mid, down)
}

/// `p_0 … p_{m_max}` (even) or `q_0 … q_{m_max}` (odd) from the
/// three-term-plus-constant recurrence alone.
pub fn charpoly_sequence(
    m_max: usize,
    idx: GegenbauerIndex,
    parity: Parity,
) -> Vec<MuPolynomial<f64>> {
    charpoly_sequence_with(m_max, &idx.gamma(), parity)
}

/// Backend-generic [`charpoly_sequence`]; with `BigRational` (and a rational
/// `γ`) every coefficient is exact.
pub fn charpoly_sequence_with<T: Scalar>(
    m_max: usize,
    gamma: &T,
    parity: Parity,
) -> Vec<MuPolynomial<T>> {
    let mut seq = Vec::with_capacity(m_max + 1);
    seq.push(MuPolynomial::constant(T::one()));
    for m in 0..m_max {
        let n = parity.degree(m);
        let (up, mid, down) = recurrence_bands(n, gamma);
        let mut rhs = seq[m].shift(1);
        if n >= 2 {
            rhs = rhs.add(&seq[m].scale(&(-mid)));
        }
        if n >= 3 {
            rhs = rhs.add(&seq[m - 1].scale(&(-down)));
        }
        rhs = rhs.add(&MuPolynomial::constant(k_constant_with(n, gamma)));
        seq.push(rhs.scale(&(T::one() / up)));
    }
    seq
}

/// `Σ_{k=0}^{⌊n/2⌋} μ^k D^{2k} G_n^(γ)(1)`, term by term.
pub fn charpoly_direct(n: usize, idx: GegenbauerIndex) -> MuPolynomial<f64> {
    charpoly_direct_with(n, &idx.gamma())
}

pub fn charpoly_direct_with<T: Scalar>(n: usize, gamma: &T) -> MuPolynomial<T> {
    MuPolynomial::new(
        (0..=n / 2)
            .map(|k| gegenbauer_deriv_at_one_with(n, gamma, 2 * k))
            .collect(),
    )
}

/// `G_n(1)` shortcut kept next to the polynomials that use it.
pub fn charpoly_constant_term<T: Scalar>(n: usize, gamma: &T) -> T {
    gegenbauer_at_one_with(n, gamma)
}

/// `Ω_n^(α,β)(μ) = Σ_k μ^k D^{2k} P_n^(α,β)(1)`.
pub fn omega_poly(n: usize, idx: JacobiIndex) -> MuPolynomial<f64> {
    MuPolynomial::new(
        (0..=n / 2)
            .map(|k| jacobi_deriv_at_one(n, idx, 2 * k))
            .collect(),
    )
}

/// Jacobi Tau characteristic polynomial
/// `B_n = Ω_n^(α,β) Ω_{n-1}^(β,α) + Ω_n^(β,α) Ω_{n-1}^(α,β)`, degree `n - 1`.
pub fn jacobi_char_poly(n: usize, idx: JacobiIndex) -> Result<MuPolynomial<f64>> {
    if n < 2 {
        return Err(Error::TooSmall {
            what: "degree n",
            got: n,
            min: 2,
        });
    }
    let sw = idx.swapped();
    let a = omega_poly(n, idx).mul(&omega_poly(n - 1, sw));
    let b = omega_poly(n, sw).mul(&omega_poly(n - 1, idx));
    Ok(a.add(&b))
}

/// Characteristic polynomial for `u(-1) = 0`, `Du(1) = 0`:
/// `k_{n-1} Ω_n^(β,α) Ω_{n-2}^(α+1,β+1) + k_n Ω_{n-1}^(β,α) Ω_{n-1}^(α+1,β+1)`
/// with `k_n = (n + α + β + 1) / 2`.
pub fn mixed_char_poly(n: usize, idx: JacobiIndex) -> Result<MuPolynomial<f64>> {
    if n < 2 {
        return Err(Error::TooSmall {
            what: "degree n",
            got: n,
            min: 2,
        });
    }
    let k = |j: usize| 0.5 * (j as f64 + idx.alpha() + idx.beta() + 1.0);
    let sw = idx.swapped();
    let up = idx.raised();
    let a = omega_poly(n, sw)
        .mul(&omega_poly(n - 2, up))
        .scale(&k(n - 1));
    let b = omega_poly(n - 1, sw)
        .mul(&omega_poly(n - 1, up))
        .scale(&k(n));
    Ok(a.add(&b))
}
