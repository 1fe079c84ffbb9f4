//! Exact evaluation at dyadic points `μ = a / 2^k`, in plain integers.
//!
//! Rational Horner with `BigRational` normalizes through a gcd at every step
//! and is far too slow for the degree-20 checks; clearing denominators once
//! keeps everything in `BigInt` multiplies and shifts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::MuPolynomial;

/// `p = num / den` with integer `num`.
#[derive(Clone, Debug)]
pub(crate) struct IntPoly {
    pub num: Vec<BigInt>,
    pub den: BigInt,
}

impl IntPoly {
    pub fn new(p: &MuPolynomial<BigRational>) -> Self {
        let den = p
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = p
            .coeffs()
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self { num, den }
    }

    pub fn degree(&self) -> usize {
        self.num.len().saturating_sub(1)
    }

    /// `Σ num_i a^i 2^{k(d-i)}` with `d` the degree, i.e.
    /// `den · 2^{kd} · p(a / 2^k)`.
    pub fn scaled(&self, a: &BigInt, k: usize) -> BigInt {
        horner(&self.num, a, k)
    }

    /// `Σ i num_i a^{i-1} 2^{k(d-i)}`, i.e. `den · 2^{k(d-1)} · p'(a / 2^k)`.
    pub fn scaled_derivative(&self, a: &BigInt, k: usize) -> BigInt {
        let d: Vec<BigInt> = self
            .num
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        horner(&d, a, k)
    }

    /// Newton on `p` in fixed point: `a ← a - P(a)/P'(a)`.
    pub fn newton(&self, a: &BigInt, k: usize, steps: usize) -> BigInt {
        let mut a = a.clone();
        for _ in 0..steps {
            let d = self.scaled_derivative(&a, k);
            if d.is_zero() {
                break;
            }
            a -= self.scaled(&a, k) / d;
        }
        a
    }

    /// `|p(μ) / (μ p'(μ))|` at `μ = a / 2^k`.
    pub fn relative_newton_step(&self, a: &BigInt, k: usize) -> f64 {
        let d = self.scaled_derivative(a, k);
        if d.is_zero() || a.is_zero() {
            return f64::INFINITY;
        }
        // p/p' = P / (P' 2^k), μ = a / 2^k
        ratio_to_f64(&self.scaled(a, k).abs(), &(d * a).abs())
    }
}

fn horner(c: &[BigInt], a: &BigInt, k: usize) -> BigInt {
    let mut acc = BigInt::zero();
    for (step, ci) in c.iter().rev().enumerate() {
        acc = acc * a + (ci << (k * step));
    }
    acc
}

/// `a ≈ x · 2^k`, rounded.
pub(crate) fn to_fixed(x: f64, k: usize) -> Option<BigInt> {
    let r = BigRational::from_float(x)? * BigRational::from_integer(BigInt::one() << k);
    Some(r.round().to_integer())
}

/// `num / den` for nonnegative integers of any size.
pub(crate) fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if den.is_zero() {
        return f64::INFINITY;
    }
    if num.is_zero() {
        return 0.0;
    }
    // keep 64 significant bits of each, then fix up the exponent
    let shift = |v: &BigInt| v.bits().saturating_sub(64) as i32;
    let (sn, sd) = (shift(num), shift(den));
    let n = (num >> sn as usize).to_f64().unwrap_or(f64::INFINITY);
    let d = (den >> sd as usize).to_f64().unwrap_or(f64::INFINITY);
    n / d * 2f64.powi(sn - sd)
}
