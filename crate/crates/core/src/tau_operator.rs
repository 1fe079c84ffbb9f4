//! Operator matrices for `D²u = λu`, `u(±1) = 0`.
//!
//! The integration matrix `M` has columns encoding `μ p_j` (or `μ q_j`) in
//! terms of the characteristic polynomial sequence; read the other way, it
//! maps the Gegenbauer coefficients of `D²u` to those of `u`. It is
//! tridiagonal plus one dense top row holding the `-K_n` constants.
//!
//! The differentiation pencils expand `u` itself and are kept here as the
//! badly conditioned baseline.

use std::fmt;
use std::str::FromStr;

use faer::Mat;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::orthopoly::{
    gegenbauer_at_one, gegenbauer_norm, second_derivative_matrix, x_multiplication_matrix,
    GegenbauerIndex, Parity,
};

/// Banded-plus-row storage of the integration matrix.
///
/// `diag_sub[j] = M[j+1][j]` for `j < m` (the last one is the trailing row of
/// the rectangular view), `diag_main[j] = M[j][j]`, `diag_super[j] =
/// M[j][j+1]`. Row 0 is stored densely in `first_row` and takes precedence
/// over the bands there.
#[derive(Clone, Debug, PartialEq)]
pub struct TauMatrix {
    pub m: usize,
    pub gamma: GegenbauerIndex,
    pub parity: Parity,
    pub first_row: Vec<f64>,
    pub diag_sub: Vec<f64>,
    pub diag_main: Vec<f64>,
    pub diag_super: Vec<f64>,
}

/// Entries of the integration matrix in the order of operations of the
/// reference routine, for any scalar backend. Returns
/// `(first_row, diag_sub, diag_main, diag_super)`.
#[allow(clippy::type_complexity)]
pub fn gi2_bands_with<T: Scalar>(
    m: usize,
    g: &T,
    parity: Parity,
) -> (Vec<T>, Vec<T>, Vec<T>, Vec<T>) {
    let ip = parity.offset();
    let c = |v: i64| T::from_int(v);
    let one = T::one();
    let two = c(2);
    let four = c(4);

    // interior columns j = 1..m-1, n = 2j + ip
    let mut dm = Vec::with_capacity(m);
    let mut d0 = Vec::with_capacity(m);
    let mut dp = Vec::with_capacity(m);
    for j in 1..m {
        let n = c((2 * j + ip) as i64);
        let gn = g.clone() + n;
        dm.push(one.clone() / (four.clone() * (gn.clone() + one.clone()) * gn.clone()));
        d0.push(
            -(one.clone()
                / (two.clone() * (gn.clone() + one.clone()) * (gn.clone() - one.clone()))),
        );
        dp.push(one.clone() / (four.clone() * gn.clone() * (gn - one.clone())));
    }

    let two_g = two.clone() * g.clone();
    let k3 = (two_g.clone() - one.clone()) * (c(3) - two_g.clone()) / c(120);
    let mut kn = Vec::with_capacity(m.saturating_sub(2));
    if m > 2 {
        kn.push(match parity {
            Parity::Even => {
                (four.clone() * (g.clone() * g.clone()) - one.clone()) * (c(3) - two_g.clone())
                    / c(720)
            }
            Parity::Odd => {
                k3.clone() * (two_g.clone() + two.clone()) * (two_g.clone() + one.clone()) / c(42)
            }
        });
        for mm in 2..=(m - 2) {
            let n = c((2 * mm + ip) as i64);
            let prev = kn[mm - 2].clone();
            kn.push(
                prev * (two_g.clone() + n.clone() - one.clone())
                    * (two_g.clone() + n.clone() - two.clone())
                    / ((n.clone() + four.clone()) * (n + c(3))),
            );
        }
    }

    let (m00, m01, m10) = match parity {
        Parity::Even => (
            -((two_g.clone() + one.clone()) / (four.clone() * g.clone() + four.clone())),
            (c(7) - g.clone() - two.clone() * (g.clone() * g.clone()))
                * (one.clone() + two_g.clone())
                / (c(48) * (two.clone() + g.clone()) * (one.clone() + g.clone())),
            one.clone() / (two_g.clone() + two.clone()),
        ),
        Parity::Odd => (
            -((two_g.clone() + one.clone()) / (c(12) * g.clone() + c(24))),
            one.clone() / (four.clone() * (g.clone() + c(3)) * (g.clone() + two.clone())) + k3,
            one.clone() / (four.clone() * (g.clone() + one.clone()) * (g.clone() + two.clone())),
        ),
    };

    let mut first_row = vec![m00.clone()];
    if m > 1 {
        first_row.push(m01.clone());
    }
    first_row.extend(kn);

    let mut diag_sub = vec![m10];
    diag_sub.extend(dm);
    let mut diag_main = vec![m00];
    diag_main.extend(d0);
    let mut diag_super = Vec::with_capacity(m.saturating_sub(1));
    if m > 1 {
        diag_super.push(m01);
        diag_super.extend(dp.into_iter().skip(1));
    }
    (first_row, diag_sub, diag_main, diag_super)
}

/// Dense `(m+1) × m` integration matrix for any scalar backend.
pub fn gi2_dense_with<T: Scalar>(m: usize, g: &T, parity: Parity) -> Vec<Vec<T>> {
    let (first_row, sub, main, sup) = gi2_bands_with(m, g, parity);
    let mut out = vec![vec![T::zero(); m]; m + 1];
    for j in 0..m {
        out[j + 1][j] = sub[j].clone();
        out[j][j] = main[j].clone();
        if j + 1 < m {
            out[j][j + 1] = sup[j].clone();
        }
    }
    out[0] = first_row;
    out
}

/// The integration matrix with `m` modes (`m ≥ 2`).
pub fn build_gi2(m: usize, idx: GegenbauerIndex, parity: Parity) -> Result<TauMatrix> {
    if m < 2 {
        return Err(Error::TooSmall {
            what: "mode count m",
            got: m,
            min: 2,
        });
    }
    build_gi2_any(m, idx, parity)
}

/// Same as [`build_gi2`] but also allows `m = 1` (a single column, used by
/// the Neumann reduction).
pub(crate) fn build_gi2_any(m: usize, idx: GegenbauerIndex, parity: Parity) -> Result<TauMatrix> {
    if m == 0 {
        return Err(Error::TooSmall {
            what: "mode count m",
            got: 0,
            min: 1,
        });
    }
    let (first_row, diag_sub, diag_main, diag_super) = gi2_bands_with(m, &idx.gamma(), parity);
    let t = TauMatrix {
        m,
        gamma: idx,
        parity,
        first_row,
        diag_sub,
        diag_main,
        diag_super,
    };
    if !t.all_finite() {
        return Err(Error::NonFinite("integration matrix"));
    }
    Ok(t)
}

impl TauMatrix {
    fn all_finite(&self) -> bool {
        self.first_row
            .iter()
            .chain(&self.diag_sub)
            .chain(&self.diag_main)
            .chain(&self.diag_super)
            .all(|v| v.is_finite())
    }

    /// Entry `(i, j)` of the rectangular view.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == 0 {
            return self.first_row[j];
        }
        if i == j + 1 {
            self.diag_sub[j]
        } else if i == j {
            self.diag_main[j]
        } else if i + 1 == j {
            self.diag_super[i]
        } else {
            0.0
        }
    }

    /// The `(m+1) × m` matrix.
    pub fn rect(&self) -> Mat<f64> {
        Mat::from_fn(self.m + 1, self.m, |i, j| self.get(i, j))
    }

    /// The `m × m` matrix whose eigenvalues are the roots `μ` of `p_m`/`q_m`.
    pub fn square(&self) -> Mat<f64> {
        Mat::from_fn(self.m, self.m, |i, j| self.get(i, j))
    }

    /// Nonzero entries of the rectangular view as `(i, j, value)`, row-major.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..=self.m {
            let cols = if i == 0 {
                0..self.m
            } else {
                (i - 1)..(i + 2).min(self.m)
            };
            for j in cols {
                let v = self.get(i, j);
                if v != 0.0 {
                    out.push((i, j, v));
                }
            }
        }
        out
    }
}

/// Gegenbauer coefficients (length `m + 1`) of the double antiderivative of
/// `f = Σ f_l G_{n(l)}` that vanishes at `x = ±1`.
pub fn apply_double_integration(f: &[f64], mat: &TauMatrix) -> Result<Vec<f64>> {
    let m = mat.m;
    if f.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            got: f.len(),
        });
    }
    let mut g = vec![0.0; m + 1];
    g[0] = mat.first_row.iter().zip(f).map(|(a, b)| a * b).sum();
    for i in 1..=m {
        let mut acc = mat.diag_sub[i - 1] * f[i - 1];
        if i < m {
            acc += mat.diag_main[i] * f[i];
        }
        if i + 1 < m {
            acc += mat.diag_super[i] * f[i + 1];
        }
        g[i] = acc;
    }
    Ok(g)
}

/// Formulation tag of a generalized pencil.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PencilVariant {
    /// Expand `u`, eliminate the top coefficient with the boundary condition.
    DiffElimLast,
    /// Expand `u`, eliminate the constant coefficient.
    DiffElimFirst,
    /// Expand `u = (1 - x²) Σ b_l G_{2l}`.
    GalerkinBasis,
    /// `γ = 3/2` basis `(1 - x²) G_{2l}^(3/2)` tested against `G_{2k}^(3/2)`.
    IerleyLegendre,
    /// `(I, M)` with `M` the square integration matrix.
    Integration,
}

impl PencilVariant {
    pub const ALL: [PencilVariant; 5] = [
        PencilVariant::DiffElimLast,
        PencilVariant::DiffElimFirst,
        PencilVariant::GalerkinBasis,
        PencilVariant::IerleyLegendre,
        PencilVariant::Integration,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            PencilVariant::DiffElimLast => "diff-elim-last",
            PencilVariant::DiffElimFirst => "diff-elim-first",
            PencilVariant::GalerkinBasis => "galerkin-basis",
            PencilVariant::IerleyLegendre => "ierley-legendre",
            PencilVariant::Integration => "integration",
        }
    }
}

impl fmt::Display for PencilVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for PencilVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PencilVariant::ALL
            .into_iter()
            .find(|v| v.tag() == s)
            .ok_or_else(|| Error::UnknownTag {
                kind: "variant",
                value: s.to_string(),
            })
    }
}

/// Sparsity pattern of a pencil factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Structure {
    Full,
    Identity,
    Diagonal,
    Tridiagonal,
    UpperTriangular,
    /// Dense first row plus the subdiagonal.
    FirstRowSubdiagonal,
}

impl Structure {
    fn allows(self, i: usize, j: usize) -> bool {
        match self {
            Structure::Full => true,
            Structure::Identity | Structure::Diagonal => i == j,
            Structure::Tridiagonal => i.abs_diff(j) <= 1,
            Structure::UpperTriangular => i <= j,
            Structure::FirstRowSubdiagonal => i == 0 || i == j + 1,
        }
    }

    /// True when every entry outside the pattern is exactly zero (and, for
    /// `Identity`, the diagonal is one).
    pub fn holds(self, a: &Mat<f64>) -> bool {
        for j in 0..a.ncols() {
            for i in 0..a.nrows() {
                let v = a[(i, j)];
                if !self.allows(i, j) && v != 0.0 {
                    return false;
                }
                if self == Structure::Identity && i == j && v != 1.0 {
                    return false;
                }
            }
        }
        true
    }
}

/// `A a = λ B a`.
#[derive(Clone, Debug)]
pub struct GeneralizedPencil {
    pub a: Mat<f64>,
    pub b: Mat<f64>,
    pub variant: PencilVariant,
    pub a_structure: Structure,
    pub b_structure: Structure,
}

/// Coefficients of `(1 - x²) G_{2l}` in even Gegenbauer modes: an
/// `(m+1) × m` matrix with entries on rows `l-1, l, l+1`.
fn one_minus_x2_even(m: usize, idx: GegenbauerIndex) -> Mat<f64> {
    let size = 2 * m + 1;
    let x = x_multiplication_matrix(size, idx);
    let xs = x.as_ref().subrows(0, size);
    let x_sq = xs * xs;
    Mat::from_fn(m + 1, m, |k, l| {
        let delta = if k == l { 1.0 } else { 0.0 };
        delta - x_sq[(2 * k, 2 * l)]
    })
}

/// The even-mode `(A, B)` pencil of the requested formulation.
pub fn build_diff_pencil(
    m: usize,
    idx: GegenbauerIndex,
    variant: PencilVariant,
) -> Result<GeneralizedPencil> {
    if m < 2 {
        return Err(Error::TooSmall {
            what: "mode count m",
            got: m,
            min: 2,
        });
    }
    let h = (0..=m)
        .map(|k| gegenbauer_norm(2 * k, idx))
        .collect::<Result<Vec<f64>>>()?;
    let pencil = match variant {
        PencilVariant::Integration => {
            let mat = build_gi2(m, idx, Parity::Even)?;
            GeneralizedPencil {
                a: Mat::identity(m, m),
                b: mat.square(),
                variant,
                a_structure: Structure::Identity,
                b_structure: Structure::Full,
            }
        }
        PencilVariant::DiffElimLast | PencilVariant::DiffElimFirst => {
            let d2 = second_derivative_matrix(m + 1, idx, Parity::Even);
            let g1: Vec<f64> = (0..=m).map(|l| gegenbauer_at_one(2 * l, idx)).collect();
            if variant == PencilVariant::DiffElimLast {
                // a_m = -Σ_{l<m} g_l a_l / g_m
                let a = Mat::from_fn(m, m, |k, l| {
                    h[k] * (d2[(k, l)] - d2[(k, m)] * g1[l] / g1[m])
                });
                let b = Mat::from_fn(m, m, |k, l| if k == l { h[k] } else { 0.0 });
                GeneralizedPencil {
                    a,
                    b,
                    variant,
                    a_structure: Structure::Full,
                    b_structure: Structure::Diagonal,
                }
            } else {
                // a_0 = -Σ_{l≥1} g_l a_l / g_0; D² G_0 = 0 so A loses nothing
                let a = Mat::from_fn(m, m, |k, l| h[k] * d2[(k, l + 1)]);
                let b = Mat::from_fn(m, m, |k, l| {
                    let mut v = if k == l + 1 { h[k] } else { 0.0 };
                    if k == 0 {
                        v -= h[0] * g1[l + 1] / g1[0];
                    }
                    v
                });
                GeneralizedPencil {
                    a,
                    b,
                    variant,
                    a_structure: Structure::UpperTriangular,
                    b_structure: Structure::FirstRowSubdiagonal,
                }
            }
        }
        PencilVariant::GalerkinBasis => {
            let d2 = second_derivative_matrix(m + 1, idx, Parity::Even);
            let c = one_minus_x2_even(m, idx);
            let mut a = Mat::<f64>::zeros(m, m);
            for k in 0..m {
                for l in 0..m {
                    // column l of C has rows l-1..=l+1
                    let lo = l.saturating_sub(1);
                    let hi = (l + 1).min(m);
                    let s: f64 = (lo..=hi).map(|r| d2[(k, r)] * c[(r, l)]).sum();
                    a[(k, l)] = h[k] * s;
                }
            }
            let b = Mat::from_fn(m, m, |k, l| h[k] * c[(k, l)]);
            GeneralizedPencil {
                a,
                b,
                variant,
                a_structure: Structure::UpperTriangular,
                b_structure: Structure::Tridiagonal,
            }
        }
        PencilVariant::IerleyLegendre => {
            if idx.gamma() != 1.5 {
                return Err(Error::VariantIndexMismatch {
                    variant: "ierley-legendre",
                    required: 1.5,
                    got: idx.gamma(),
                });
            }
            // D²((1 - x²) G_n^(3/2)) = -(n+1)(n+2) G_n^(3/2)
            let c = one_minus_x2_even(m, idx);
            let a = Mat::from_fn(m, m, |k, l| {
                if k == l {
                    let n = (2 * k) as f64;
                    -(n + 1.0) * (n + 2.0) * h[k]
                } else {
                    0.0
                }
            });
            let b = Mat::from_fn(m, m, |k, l| h[k] * c[(k, l)]);
            GeneralizedPencil {
                a,
                b,
                variant,
                a_structure: Structure::Diagonal,
                b_structure: Structure::Tridiagonal,
            }
        }
    };
    debug_assert!(pencil.a_structure.holds(&pencil.a) && pencil.b_structure.holds(&pencil.b));
    Ok(pencil)
}
