//! Dense real polynomials in ascending powers, used both for characteristic
//! polynomials in `μ = 1/λ` and for the Hurwitz polynomials in `z`.

use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{dense_eigs, sort_by_real_then_imag};

/// Coefficients of `μ⁰, μ¹, …, μᵈ`; trailing zeros are trimmed so the last
/// stored coefficient is nonzero. The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Serialize",
    deserialize = "T: Deserialize<'de> + Scalar"
))]
#[serde(from = "Vec<T>", into = "Vec<T>")]
pub struct MuPolynomial<T: Scalar = f64> {
    coeffs: Vec<T>,
}

/// A real polynomial in `z`; same representation.
pub type RealPolynomial = MuPolynomial<f64>;

impl<T: Scalar> From<Vec<T>> for MuPolynomial<T> {
    fn from(coeffs: Vec<T>) -> Self {
        Self::new(coeffs)
    }
}

impl<T: Scalar> From<MuPolynomial<T>> for Vec<T> {
    fn from(p: MuPolynomial<T>) -> Vec<T> {
        p.coeffs
    }
}

impl<T: Scalar> MuPolynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c μᵏ`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; 0 for constants and for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                let b = other.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                a + b
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    /// `μᵏ · self`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![T::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs)
    }

    /// `p(μ) ↦ p(z²)`.
    pub fn compose_square(&self) -> Self {
        let mut coeffs = vec![T::zero(); 2 * self.coeffs.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[2 * i] = c.clone();
        }
        Self::new(coeffs)
    }

    pub fn to_f64(&self) -> MuPolynomial<f64> {
        MuPolynomial::new(self.coeffs.iter().map(Scalar::to_f64).collect())
    }
}

/// All complex roots of `p`, from the eigenvalues of the balanced companion
/// matrix, sorted by real part then imaginary part. Constants have no roots.
pub fn poly_roots(p: &MuPolynomial<f64>) -> Result<Vec<Complex64>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.coeffs().iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite("polynomial coefficients"));
    }
    let c = p.coeffs();
    let d = p.degree();
    // Zero roots come off exactly.
    let zeros = c.iter().take_while(|v| **v == 0.0).count();
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let reduced = &c[zeros..];
    let rd = d - zeros;
    if rd > 0 {
        let lead = reduced[rd];
        let comp = Mat::from_fn(rd, rd, |i, j| {
            if i == 0 {
                -reduced[rd - 1 - j] / lead
            } else if j + 1 == i {
                1.0
            } else {
                0.0
            }
        });
        roots.extend(dense_eigs(&comp)?.into_iter().map(|z| polish(reduced, z)));
    }
    sort_by_real_then_imag(&mut roots);
    Ok(roots)
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

// A few Newton steps on the original coefficients. Steps that are large or
// do not reduce |p| are refused, so a root never hops to a neighbour.
fn polish(c: &[f64], mut z: Complex64) -> Complex64 {
    let (mut p, mut dp) = horner(c, z);
    for _ in 0..8 {
        if p.norm() == 0.0 || dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        if step.norm().is_nan() || step.norm() > 1e-3 * z.norm().max(f64::MIN_POSITIVE) {
            break;
        }
        let next = z - step;
        let (np, ndp) = horner(c, next);
        if np.norm() >= p.norm() {
            break;
        }
        z = next;
        p = np;
        dp = ndp;
    }
    z
}

/// Product `c ∏ (μ - r_i)` for real roots `r_i`.
pub fn from_real_roots(lead: f64, roots: &[f64]) -> MuPolynomial<f64> {
    roots.iter().fold(MuPolynomial::constant(lead), |acc, r| {
        acc.mul(&MuPolynomial::new(vec![-r, 1.0]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ratio;
    use num_rational::BigRational;
    use proptest::prelude::*;

    #[test]
    fn trims_trailing_zeros() {
        let p = MuPolynomial::new(vec![1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), 1);
        assert_eq!(p.coeffs().len(), 2);
        assert!(MuPolynomial::<f64>::new(vec![0.0, 0.0]).is_zero());
    }

    #[test]
    fn linear_and_quadratic_roots() {
        let r = poly_roots(&MuPolynomial::new(vec![0.5, 2.0])).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].re + 0.25).abs() < 1e-15 && r[0].im == 0.0);
        let r = poly_roots(&MuPolynomial::new(vec![1.0, 0.0, 1.0])).unwrap();
        assert!((r[0] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((r[1] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(
            poly_roots(&MuPolynomial::zero()),
            Err(Error::ZeroPolynomial)
        );
        assert!(poly_roots(&MuPolynomial::constant(3.0)).unwrap().is_empty());
    }

    #[test]
    fn multiplicity_preserved() {
        let p = from_real_roots(1.0, &[-1.0, -1.0, 0.0, -3.0]);
        let r = poly_roots(&p).unwrap();
        assert_eq!(r.len(), 4);
        assert!((r[0].re + 3.0).abs() < 1e-12);
        assert!((r[1].re + 1.0).abs() < 1e-7 && (r[2].re + 1.0).abs() < 1e-7);
        assert_eq!(r[3], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn exact_arithmetic() {
        let p = MuPolynomial::new(vec![ratio(1, 2), ratio(2, 1)]);
        let q = MuPolynomial::new(vec![ratio(-1, 2), ratio(1, 3)]);
        let prod = p.mul(&q);
        assert_eq!(prod.coeffs(), &[ratio(-1, 4), ratio(-5, 6), ratio(2, 3)]);
        let root: BigRational = ratio(-1, 4);
        assert_eq!(p.eval(&root), ratio(0, 1));
    }

    #[test]
    fn json_is_a_coefficient_array() {
        let p = MuPolynomial::new(vec![0.5, 2.0]);
        assert_eq!(serde_json::to_string(&p).unwrap(), "[0.5,2.0]");
        let back: MuPolynomial = serde_json::from_str("[1.0, 0.0, 0.0]").unwrap();
        assert_eq!(back.degree(), 0);
    }

    proptest! {
        #[test]
        fn roots_recover_constructed_real_roots(mut rs in prop::collection::vec(-10.0f64..-0.1, 1..7)) {
            rs.sort_by(f64::total_cmp);
            rs.dedup_by(|a, b| (*a - *b).abs() < 0.3);
            let p = from_real_roots(2.0, &rs);
            let got = poly_roots(&p).unwrap();
            prop_assert_eq!(got.len(), rs.len());
            for (g, r) in got.iter().zip(&rs) {
                prop_assert!((g.re - r).abs() < 1e-8 * r.abs().max(1.0));
                prop_assert!(g.im.abs() < 1e-8);
            }
        }

        #[test]
        fn product_evaluates_pointwise(a in prop::collection::vec(-3.0f64..3.0, 1..6),
                                       b in prop::collection::vec(-3.0f64..3.0, 1..6),
                                       x in -2.0f64..2.0) {
            let (p, q) = (MuPolynomial::new(a), MuPolynomial::new(b));
            let lhs = p.mul(&q).eval(&x);
            let rhs = p.eval(&x) * q.eval(&x);
            prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + rhs.abs()));
        }
    }
}
