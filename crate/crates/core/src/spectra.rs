//! Eigenvalues of the Tau operators and the continuous reference spectrum.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{dense_eig_vectors, solve_diagonal, solve_general, solve_tridiagonal};
use crate::orthopoly::{GegenbauerIndex, Parity};
use crate::tau_operator::{build_gi2, build_gi2_any, GeneralizedPencil, Structure, TauMatrix};

pub use crate::linalg::dense_eigs;

/// Default `|Im λ| ≤ tol · |λ|` threshold for calling an eigenvalue real.
pub const DEFAULT_TOL_REAL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
    /// `u(-1) = 0`, `Du(1) = 0`; characteristic polynomial only.
    Mixed,
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryCondition::Dirichlet => "dirichlet",
            BoundaryCondition::Neumann => "neumann",
            BoundaryCondition::Mixed => "mixed",
        })
    }
}

impl FromStr for BoundaryCondition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dirichlet" => Ok(BoundaryCondition::Dirichlet),
            "neumann" => Ok(BoundaryCondition::Neumann),
            "mixed" => Ok(BoundaryCondition::Mixed),
            other => Err(Error::UnknownTag {
                kind: "boundary condition",
                value: other.to_string(),
            }),
        }
    }
}

/// Eigenvalues `λ` sorted by ascending `|λ|`, with `μ = 1/λ` alongside.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    pub mu_values: Vec<Complex64>,
    pub source: String,
    pub tol_real: f64,
    pub real: Vec<bool>,
    pub negative: Vec<bool>,
}

fn by_modulus(a: &Complex64, b: &Complex64) -> Ordering {
    let c = |x: f64, y: f64| x.partial_cmp(&y).unwrap_or_else(|| x.total_cmp(&y));
    c(a.norm(), b.norm())
        .then(c(a.re, b.re))
        .then(c(a.im, b.im))
}

impl Spectrum {
    pub fn from_lambdas(
        mut eigenvalues: Vec<Complex64>,
        source: impl Into<String>,
        tol_real: f64,
    ) -> Self {
        eigenvalues.sort_by(by_modulus);
        let mu_values = eigenvalues.iter().map(|l| l.inv()).collect();
        Self::assemble(eigenvalues, mu_values, source.into(), tol_real)
    }

    /// From eigenvalues `μ` of an integration matrix; `λ = 1/μ`.
    pub fn from_mus(mus: &[Complex64], source: impl Into<String>, tol_real: f64) -> Self {
        let mut pairs: Vec<(Complex64, Complex64)> = mus.iter().map(|mu| (mu.inv(), *mu)).collect();
        pairs.sort_by(|a, b| by_modulus(&a.0, &b.0));
        let (eigenvalues, mu_values) = pairs.into_iter().unzip();
        Self::assemble(eigenvalues, mu_values, source.into(), tol_real)
    }

    fn assemble(
        eigenvalues: Vec<Complex64>,
        mu_values: Vec<Complex64>,
        source: String,
        tol_real: f64,
    ) -> Self {
        let real = eigenvalues
            .iter()
            .map(|l| l.im.abs() <= tol_real * l.norm())
            .collect();
        let negative = eigenvalues.iter().map(|l| l.re < 0.0).collect();
        Self {
            eigenvalues,
            mu_values,
            source,
            tol_real,
            real,
            negative,
        }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max_modulus(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|l| l.norm())
            .fold(0.0, f64::max)
    }

    /// Number of eigenvalues failing the reality test (conjugate pairs count
    /// twice).
    pub fn non_real_count(&self) -> usize {
        self.real.iter().filter(|r| !**r).count()
    }

    /// Real parts of the eigenvalues, ascending.
    pub fn sorted_real_parts(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.eigenvalues.iter().map(|l| l.re).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Smallest `|λ_i - λ_j| / max(|λ_i|, |λ_j|)` over neighbours in the
    /// real-part ordering; `inf` for fewer than two eigenvalues.
    pub fn min_relative_gap(&self) -> f64 {
        let mut v = self.eigenvalues.clone();
        crate::linalg::sort_by_real_then_imag(&mut v);
        v.windows(2)
            .map(|w| (w[1] - w[0]).norm() / w[0].norm().max(w[1].norm()))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Spectrum of the `m`-mode Tau approximation.
///
/// Neumann reduces to Dirichlet for `Du` at index `γ + 1`: the even family
/// becomes the odd Dirichlet family with one mode fewer plus `λ = 0`, and
/// the odd family becomes the even Dirichlet family.
pub fn tau_spectrum(
    m: usize,
    idx: GegenbauerIndex,
    parity: Parity,
    bc: BoundaryCondition,
) -> Result<Spectrum> {
    tau_spectrum_with_tol(m, idx, parity, bc, DEFAULT_TOL_REAL)
}

pub fn tau_spectrum_with_tol(
    m: usize,
    idx: GegenbauerIndex,
    parity: Parity,
    bc: BoundaryCondition,
    tol_real: f64,
) -> Result<Spectrum> {
    if m < 2 {
        return Err(Error::TooSmall {
            what: "mode count m",
            got: m,
            min: 2,
        });
    }
    match bc {
        BoundaryCondition::Dirichlet => {
            let mat = build_gi2(m, idx, parity)?;
            let mus = dense_eigs(&mat.square())?;
            Ok(Spectrum::from_mus(&mus, "tau-dirichlet", tol_real))
        }
        BoundaryCondition::Neumann => {
            let up = idx.raised();
            let mut lambdas: Vec<Complex64> = match parity {
                Parity::Even => {
                    let mat = build_gi2_any(m - 1, up, Parity::Odd)?;
                    dense_eigs(&mat.square())?
                        .iter()
                        .map(|mu| mu.inv())
                        .collect()
                }
                Parity::Odd => {
                    let mat = build_gi2(m, up, Parity::Even)?;
                    dense_eigs(&mat.square())?
                        .iter()
                        .map(|mu| mu.inv())
                        .collect()
                }
            };
            if parity == Parity::Even {
                lambdas.push(Complex64::new(0.0, 0.0));
            }
            Ok(Spectrum::from_lambdas(lambdas, "tau-neumann", tol_real))
        }
        BoundaryCondition::Mixed => Err(Error::UnknownTag {
            kind: "boundary condition for the Gegenbauer matrix",
            value: bc.to_string(),
        }),
    }
}

/// `λ` of `A a = λ B a`, reducing with a solve that matches `B`'s structure.
pub fn pencil_spectrum(pencil: &GeneralizedPencil) -> Result<Spectrum> {
    let tag = pencil.variant.tag();
    let x = match pencil.b_structure {
        Structure::Identity => pencil.a.clone(),
        Structure::Diagonal => solve_diagonal(&pencil.b, &pencil.a, tag)?,
        Structure::Tridiagonal => solve_tridiagonal(&pencil.b, &pencil.a, tag)?,
        _ => solve_general(&pencil.b, &pencil.a, tag)?,
    };
    let lambdas = dense_eigs(&x)?;
    Ok(Spectrum::from_lambdas(
        lambdas,
        format!("pencil-{tag}"),
        DEFAULT_TOL_REAL,
    ))
}

/// First `k_max` eigenvalues of `D²u = λu`, `u(±1) = 0`, for one parity:
/// `-(2k-1)²π²/4` (even, `cos`) or `-k²π²` (odd, `sin`).
pub fn exact_spectrum(k_max: usize, parity: Parity) -> Vec<f64> {
    (1..=k_max)
        .map(|k| {
            let k = k as f64;
            match parity {
                Parity::Even => -(2.0 * k - 1.0).powi(2) * PI * PI / 4.0,
                Parity::Odd => -k * k * PI * PI,
            }
        })
        .collect()
}

/// First `k_max` eigenvalues with `Du(±1) = 0`: `0, -π², -4π², …` (even)
/// or `-(2k-1)²π²/4` (odd).
pub fn exact_neumann_spectrum(k_max: usize, parity: Parity) -> Vec<f64> {
    match parity {
        Parity::Even => (0..k_max).map(|k| -((k * k) as f64) * PI * PI).collect(),
        Parity::Odd => exact_spectrum(k_max, Parity::Even),
    }
}

/// One eigenvalue with its right eigenvector `c` (coefficients of `D²u`) and
/// the reconstructed `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub lambda: Complex64,
    pub c_coeffs: Vec<Complex64>,
    pub u_coeffs: Vec<Complex64>,
}

fn integrate_complex(c: &[Complex64], mat: &TauMatrix) -> Result<Vec<Complex64>> {
    let re: Vec<f64> = c.iter().map(|z| z.re).collect();
    let im: Vec<f64> = c.iter().map(|z| z.im).collect();
    let ur = crate::tau_operator::apply_double_integration(&re, mat)?;
    let ui = crate::tau_operator::apply_double_integration(&im, mat)?;
    Ok(ur
        .into_iter()
        .zip(ui)
        .map(|(a, b)| Complex64::new(a, b))
        .collect())
}

/// The `j`-th eigenpair (same ascending-`|λ|` order as [`tau_spectrum`]),
/// scaled so that the largest `u` coefficient is exactly 1.
pub fn eigenfunction(
    j: usize,
    m: usize,
    idx: GegenbauerIndex,
    parity: Parity,
) -> Result<EigenPair> {
    let mat = build_gi2(m, idx, parity)?;
    let (mus, vecs) = dense_eig_vectors(&mat.square())?;
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| by_modulus(&mus[a].inv(), &mus[b].inv()));
    let col = *order.get(j).ok_or(Error::OutOfRange { index: j, len: m })?;
    let c: Vec<Complex64> = (0..m).map(|i| vecs[(i, col)]).collect();
    let u = integrate_complex(&c, &mat)?;
    let pivot = u
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .filter(|p| p.norm() > 0.0)
        .ok_or(Error::NonFinite("eigenvector"))?;
    Ok(EigenPair {
        lambda: mus[col].inv(),
        c_coeffs: c.iter().map(|z| z / pivot).collect(),
        u_coeffs: u.iter().map(|z| z / pivot).collect(),
    })
}

/// Sample `Σ u_l G_{n(l)}(x)` (real part) at the given abscissae.
pub fn evaluate_expansion(
    coeffs: &[Complex64],
    idx: GegenbauerIndex,
    parity: Parity,
    xs: &[f64],
) -> Result<Vec<f64>> {
    xs.iter()
        .map(|&x| {
            coeffs.iter().enumerate().try_fold(0.0, |acc, (l, c)| {
                Ok(acc + c.re * crate::orthopoly::gegenbauer_eval(parity.degree(l), idx, x)?)
            })
        })
        .collect()
}

/// Dense square matrix helper for callers that already hold a [`TauMatrix`].
pub fn integration_eigs(mat: &TauMatrix) -> Result<Vec<Complex64>> {
    dense_eigs(&mat.square())
}
