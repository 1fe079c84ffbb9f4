//! Executable checks: Hurwitz stability, positive pairs, interlacing, and
//! the theorem suites built on them.
//!
//! Every check returns a [`VerificationReport`] whose `passed` flag is
//! exactly `margin <relation> tolerance`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::charpoly::{
    charpoly_sequence, charpoly_sequence_with, jacobi_char_poly, mixed_char_poly, omega_poly,
};
use crate::error::{Error, Result};
use crate::exact::{ratio_to_f64, to_fixed, IntPoly};
use crate::field::Scalar;
use crate::orthopoly::{jacobi_deriv_at_one, GegenbauerIndex, JacobiIndex, Parity};
use crate::poly::{from_real_roots, poly_roots, MuPolynomial, RealPolynomial};
use crate::spectra::{dense_eigs, tau_spectrum_with_tol, BoundaryCondition, DEFAULT_TOL_REAL};
use crate::tau_operator::build_gi2;

/// Relative imaginary part above which a polynomial root counts as complex.
pub const ROOT_TOL_IMAG: f64 = 1e-9;
/// Minimum relative gap between neighbouring roots.
pub const ROOT_TOL_GAP: f64 = 1e-8;
/// Stability threshold relative to the root scale of the polynomial.
pub const STABLE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Below,
    #[serde(rename = ">")]
    Above,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub parameters: Map<String, Value>,
    pub passed: bool,
    pub margin: f64,
    pub tolerance: f64,
    pub relation: Relation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerificationReport {
    pub fn new(
        check_name: impl Into<String>,
        margin: f64,
        relation: Relation,
        tolerance: f64,
    ) -> Self {
        let passed = match relation {
            Relation::Below => margin < tolerance,
            Relation::Above => margin > tolerance,
        };
        Self {
            check_name: check_name.into(),
            parameters: Map::new(),
            passed,
            margin,
            tolerance,
            relation,
            note: None,
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.relation {
            Relation::Below => "<",
            Relation::Above => ">",
        };
        write!(
            f,
            "[{}] {} {} margin={:.3e} {} {:.3e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.check_name,
            Value::Object(self.parameters.clone()),
            self.margin,
            rel,
            self.tolerance
        )
    }
}

/// `max_i |a_i / a_d|^(1/(d-i))`, a bound on the root moduli up to a factor 2.
fn root_scale(p: &RealPolynomial) -> f64 {
    let c = p.coeffs();
    let d = p.degree();
    let lead = c[d];
    (0..d)
        .map(|i| (c[i] / lead).abs().powf(1.0 / (d - i) as f64))
        .fold(0.0, f64::max)
}

/// Hurwitz stability: all roots in the open left half-plane.
/// Passes iff `max Re(root) < -1e-9 · scale`.
pub fn check_stable(p: &RealPolynomial) -> Result<VerificationReport> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.degree() < 1 {
        return Err(Error::TooSmall {
            what: "degree",
            got: 0,
            min: 1,
        });
    }
    let roots = poly_roots(p)?;
    let margin = roots.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let tol = -STABLE_TOL * root_scale(p).max(f64::MIN_POSITIVE);
    Ok(VerificationReport::new("stable", margin, Relation::Below, tol).with("degree", p.degree()))
}

/// Real parts of the roots (ascending) and the worst relative imaginary
/// part `|Im z| / max(1, |z|)`.
pub fn real_roots(p: &RealPolynomial) -> Result<(Vec<f64>, f64)> {
    let roots = poly_roots(p)?;
    Ok(split_roots(&roots))
}

fn split_roots(roots: &[Complex64]) -> (Vec<f64>, f64) {
    let worst = roots
        .iter()
        .map(|z| z.im.abs() / z.norm().max(1.0))
        .fold(0.0, f64::max);
    let mut re: Vec<f64> = roots.iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    (re, worst)
}

fn rel_gap(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (b - a) / s
    }
}

/// Smallest relative gap along `seq` followed by 0; negative if the
/// sequence is out of order or reaches the right half-line.
fn chain_margin(seq: &[f64]) -> f64 {
    seq.iter()
        .chain(std::iter::once(&0.0))
        .collect::<Vec<_>>()
        .windows(2)
        .map(|w| rel_gap(*w[0], *w[1]))
        .fold(f64::INFINITY, f64::min)
}

/// Fold a reality violation into a gap-style margin: a non-real root forces
/// a negative margin proportional to its imaginary part.
fn with_reality(gap: f64, worst_imag: f64, tol_imag: f64) -> f64 {
    if worst_imag > tol_imag {
        -worst_imag
    } else {
        gap
    }
}

/// Roots real (to `1e-9` relative), negative and distinct (relative gap
/// above `1e-8`).
pub fn check_real_negative_distinct(p: &RealPolynomial) -> Result<VerificationReport> {
    let (re, worst) = real_roots(p)?;
    Ok(real_negative_distinct_from(&re, worst, ROOT_TOL_IMAG).with("degree", p.degree()))
}

fn real_negative_distinct_from(re: &[f64], worst_imag: f64, tol_imag: f64) -> VerificationReport {
    let margin = with_reality(chain_margin(re), worst_imag, tol_imag);
    VerificationReport::new(
        "real_negative_distinct",
        margin,
        Relation::Above,
        ROOT_TOL_GAP,
    )
    .with("worst_rel_imag", worst_imag)
}

/// Strict interlacing of two sorted real root sets in the order of a
/// positive pair: `r1` has `n` entries, `r2` has `n - 1` or `n`, and the
/// root closest to zero belongs to `r1`.
pub fn check_interlacing(r1: &[f64], r2: &[f64]) -> Result<VerificationReport> {
    let seq = interlaced_order(r1, r2)?;
    Ok(VerificationReport::new(
        "interlacing",
        chain_margin(&seq),
        Relation::Above,
        ROOT_TOL_GAP,
    )
    .with("n1", r1.len())
    .with("n2", r2.len()))
}

fn interlaced_order(r1: &[f64], r2: &[f64]) -> Result<Vec<f64>> {
    let n = r1.len();
    if !(r2.len() == n || r2.len() + 1 == n) {
        return Err(Error::DegreeMismatch(n, r2.len()));
    }
    let mut seq = Vec::with_capacity(2 * n);
    let offset = n - r2.len();
    // equal degree: r2[0] < r1[0] < r2[1] < ...; one less: r1[0] < r2[0] < r1[1] < ...
    for i in 0..n {
        if offset == 0 {
            seq.push(r2[i]);
            seq.push(r1[i]);
        } else {
            seq.push(r1[i]);
            if i < r2.len() {
                seq.push(r2[i]);
            }
        }
    }
    Ok(seq)
}

/// Positive pair: both root sets real, negative, distinct and strictly
/// interlacing, with leading coefficients of like sign.
pub fn check_positive_pair(om1: &MuPolynomial, om2: &MuPolynomial) -> Result<VerificationReport> {
    if om1.is_zero() || om2.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = om1.degree();
    let d2 = om2.degree();
    if !(d2 == n || d2 + 1 == n) {
        return Err(Error::DegreeMismatch(n, d2));
    }
    let (r1, w1) = real_roots(om1)?;
    let (r2, w2) = real_roots(om2)?;
    let same_sign = om1.leading().unwrap().signum() == om2.leading().unwrap().signum();
    let seq = interlaced_order(&r1, &r2)?;
    let mut margin = with_reality(chain_margin(&seq), w1.max(w2), ROOT_TOL_IMAG);
    if !same_sign {
        margin = margin.min(-1.0);
    }
    Ok(
        VerificationReport::new("positive_pair", margin, Relation::Above, ROOT_TOL_GAP)
            .with("deg1", n)
            .with("deg2", d2)
            .with("like_sign_leading", same_sign),
    )
}

/// `p(z) = Ω1(z²) + z Ω2(z²)`.
pub fn hb_compose(om1: &MuPolynomial, om2: &MuPolynomial) -> RealPolynomial {
    om1.compose_square().add(&om2.compose_square().shift(1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiVariant {
    Base,
    Plus,
    PlusMu2,
}

impl fmt::Display for PhiVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhiVariant::Base => "base",
            PhiVariant::Plus => "plus",
            PhiVariant::PlusMu2 => "plus_mu2",
        })
    }
}

impl FromStr for PhiVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "base" => Ok(PhiVariant::Base),
            "plus" => Ok(PhiVariant::Plus),
            "plus_mu2" => Ok(PhiVariant::PlusMu2),
            other => Err(Error::UnknownTag {
                kind: "phi variant",
                value: other.to_string(),
            }),
        }
    }
}

fn full_derivative_sum(n: usize, idx: JacobiIndex) -> RealPolynomial {
    MuPolynomial::new((0..=n).map(|k| jacobi_deriv_at_one(n, idx, k)).collect())
}

/// `Φ_n(μ) = Σ_{k=0}^{n} D^k P_n(1) μ^k`, optionally plus `A Φ_{n-1}` or
/// `A μ² Φ_{n-1}`. All derivative orders are used, odd and even.
pub fn phi_poly(n: usize, idx: JacobiIndex, a: f64, variant: PhiVariant) -> Result<RealPolynomial> {
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::InvalidArgument {
            what: "weight A",
            value: a,
        });
    }
    let base = full_derivative_sum(n, idx);
    if variant == PhiVariant::Base {
        return Ok(base);
    }
    if n < 1 {
        return Err(Error::TooSmall {
            what: "degree n",
            got: n,
            min: 1,
        });
    }
    let lower = full_derivative_sum(n - 1, idx).scale(&a);
    Ok(match variant {
        PhiVariant::Plus => base.add(&lower),
        _ => base.add(&lower.shift(2)),
    })
}

/// Any real combination `a Ω1 + b Ω2` of a positive pair has real roots.
/// Margin is the worst relative imaginary part over `trials` combinations.
pub fn check_real_combinations(
    om1: &MuPolynomial,
    om2: &MuPolynomial,
    trials: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let a: f64 = rng.gen_range(-2.0..2.0);
        let b: f64 = rng.gen_range(-2.0..2.0);
        let p = om1.scale(&a).add(&om2.scale(&b));
        if p.degree() == 0 {
            continue;
        }
        let (_, w) = real_roots(&p)?;
        worst = worst.max(w);
    }
    Ok(
        VerificationReport::new("real_combinations", worst, Relation::Below, 1e-7)
            .with("trials", trials)
            .with("seed", seed),
    )
}

/// `H = Ω1 Θ2 + Ω2 Θ1` for two positive pairs has real, negative, distinct
/// roots.
pub fn check_product_roots(
    om1: &MuPolynomial,
    om2: &MuPolynomial,
    th1: &MuPolynomial,
    th2: &MuPolynomial,
) -> Result<VerificationReport> {
    let h = om1.mul(th2).add(&om2.mul(th1));
    let mut r = check_real_negative_distinct(&h)?;
    r.check_name = "product_roots".into();
    Ok(r)
}

/// One randomized Hermite–Biehler case.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HbCase {
    pub om1: MuPolynomial,
    pub om2: MuPolynomial,
    pub constructed_positive: bool,
    pub stable: bool,
    pub positive_pair: bool,
}

fn random_pair(rng: &mut ChaCha8Rng) -> (MuPolynomial, MuPolynomial, bool) {
    let n = rng.gen_range(1..=8usize);
    let d2 = if rng.gen_bool(0.5) { n } else { n - 1 };
    // Interlaced negative roots, walking away from zero: Ω1, Ω2, Ω1, ...
    let mut s: f64 = rng.gen_range(-1.5..0.0);
    let mut r1 = Vec::new();
    let mut r2 = Vec::new();
    for i in 0..(n + d2) {
        let v = -s.exp();
        if i % 2 == 0 {
            r1.push(v);
        } else {
            r2.push(v);
        }
        s += rng.gen_range(0.25..0.6);
    }
    let lead: f64 = rng.gen_range(0.5..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let lead2 = lead.signum() * rng.gen_range(0.5..2.0);
    let positive = rng.gen_bool(0.5);
    if positive {
        return (
            from_real_roots(lead, &r1),
            from_real_roots(lead2, &r2),
            true,
        );
    }
    match rng.gen_range(0..4) {
        // unlike leading signs
        0 => (
            from_real_roots(lead, &r1),
            from_real_roots(-lead2, &r2),
            false,
        ),
        // a root in the right half-line
        1 => {
            r1[0] = rng.gen_range(0.2..1.0);
            (
                from_real_roots(lead, &r1),
                from_real_roots(lead2, &r2),
                false,
            )
        }
        // two Ω1 roots pushed past their Ω2 neighbour
        2 if n >= 2 && d2 >= 1 => {
            let far = r1.iter().fold(0.0f64, |a, b| a.min(*b));
            r1[0] = far * 1.8;
            (
                from_real_roots(lead, &r1),
                from_real_roots(lead2, &r2),
                false,
            )
        }
        // a complex pair in Ω1
        _ if n >= 2 => {
            let x = r1[0];
            let quad = MuPolynomial::new(vec![x * x * 1.25, -2.0 * x, 1.0]);
            let rest = from_real_roots(lead, &r1[2..]);
            (rest.mul(&quad), from_real_roots(lead2, &r2), false)
        }
        _ => (
            from_real_roots(lead, &r1),
            from_real_roots(-lead2, &r2),
            false,
        ),
    }
}

/// Randomized cross-validation of `stable(hb_compose(Ω1, Ω2))` against
/// `positive_pair(Ω1, Ω2)`. Margin is the number of disagreements.
pub fn hb_cross_validation(cases: usize, seed: u64) -> Result<(VerificationReport, Vec<HbCase>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(cases);
    let mut disagreements = 0usize;
    for _ in 0..cases {
        let (om1, om2, constructed_positive) = random_pair(&mut rng);
        let stable = check_stable(&hb_compose(&om1, &om2))?.passed;
        let positive_pair = check_positive_pair(&om1, &om2)?.passed;
        if stable != positive_pair {
            disagreements += 1;
        }
        out.push(HbCase {
            om1,
            om2,
            constructed_positive,
            stable,
            positive_pair,
        });
    }
    let positives = out.iter().filter(|c| c.constructed_positive).count();
    let report = VerificationReport::new(
        "hermite_biehler_agreement",
        disagreements as f64,
        Relation::Below,
        0.5,
    )
    .with("cases", cases)
    .with("constructed_positive", positives)
    .with("seed", seed);
    Ok((report, out))
}

/// `γ` grid covering the proven range, with `-0.49` standing in for the open
/// endpoint.
pub const DEFAULT_GAMMA_GRID: [f64; 8] = [-0.49, -0.25, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5];

/// `(α, β)` samples, nine in each of `(-1, 0]²` and `(0, 1]²`.
pub fn jacobi_samples() -> Vec<(f64, f64)> {
    let lo = [-0.9, -0.5, 0.0];
    let hi = [0.1, 0.5, 1.0];
    let mut v = Vec::new();
    for a in lo {
        for b in lo {
            v.push((a, b));
        }
    }
    for a in hi {
        for b in hi {
            v.push((a, b));
        }
    }
    v
}

fn tag(r: VerificationReport, gamma: f64, m: usize) -> VerificationReport {
    r.with("gamma", gamma).with("m", m)
}

/// Gegenbauer reality/negativity/distinctness and successive-order
/// interlacing from the characteristic polynomial coefficients, `m ≤ m_max`.
pub fn gegenbauer_polynomial_suite(gamma: f64, m_max: usize) -> Result<Vec<VerificationReport>> {
    let idx = GegenbauerIndex::new(gamma)?;
    let p = charpoly_sequence(m_max, idx, Parity::Even);
    let q = charpoly_sequence(m_max, idx, Parity::Odd);
    let mut out = Vec::new();
    for m in 1..=m_max {
        for (name, poly) in [("p_m", &p[m]), ("q_m", &q[m])] {
            let mut r = tag(check_real_negative_distinct(poly)?, gamma, m).with("family", name);
            r.check_name = "poly_roots_real_negative_distinct".into();
            out.push(r);
        }
        let mut r =
            tag(check_positive_pair(&p[m], &q[m - 1])?, gamma, m).with("pair", "p_m,q_{m-1}");
        r.check_name = "poly_successive_interlacing".into();
        out.push(r);
        let mut r = tag(check_positive_pair(&q[m], &p[m])?, gamma, m).with("pair", "q_m,p_m");
        r.check_name = "poly_successive_interlacing".into();
        out.push(r);
    }
    Ok(out)
}

fn matrix_mus(m: usize, idx: GegenbauerIndex, parity: Parity) -> Result<(Vec<f64>, f64)> {
    if m == 0 {
        return Ok((Vec::new(), 0.0));
    }
    let mat = crate::tau_operator::build_gi2_any(m, idx, parity)?;
    let mus = dense_eigs(&mat.square())?;
    Ok(split_roots(&mus))
}

/// Successive-order interlacing of the integration-matrix eigenvalues
/// `μ`, `m ≤ m_max`.
pub fn gegenbauer_matrix_interlacing_suite(
    gamma: f64,
    m_max: usize,
) -> Result<Vec<VerificationReport>> {
    let idx = GegenbauerIndex::new(gamma)?;
    let mut out = Vec::new();
    for m in 2..=m_max {
        let (pm, _) = matrix_mus(m, idx, Parity::Even)?;
        let (qm, _) = matrix_mus(m, idx, Parity::Odd)?;
        let (qm1, _) = matrix_mus(m - 1, idx, Parity::Odd)?;
        let mut r = tag(check_interlacing(&pm, &qm1)?, gamma, m).with("pair", "p_m,q_{m-1}");
        r.check_name = "matrix_successive_interlacing".into();
        out.push(r);
        let mut r = tag(check_interlacing(&qm, &pm)?, gamma, m).with("pair", "q_m,p_m");
        r.check_name = "matrix_successive_interlacing".into();
        out.push(r);
    }
    Ok(out)
}

/// Eigenvalues of the `m`-mode matrices are real (`|Im λ| ≤ tol·|λ|`),
/// negative, and distinct (relative gap `> 1e-10`).
pub fn gegenbauer_matrix_suite(
    gamma: f64,
    m: usize,
    tol_real: f64,
) -> Result<Vec<VerificationReport>> {
    let idx = GegenbauerIndex::new(gamma)?;
    let mut out = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        let s = tau_spectrum_with_tol(m, idx, parity, BoundaryCondition::Dirichlet, tol_real)?;
        let worst = s
            .eigenvalues
            .iter()
            .map(|l| l.im.abs() / l.norm())
            .fold(0.0, f64::max);
        let base = |name: &str, margin: f64, rel: Relation, tol: f64| {
            tag(VerificationReport::new(name, margin, rel, tol), gamma, m)
                .with("parity", parity.to_string())
        };
        out.push(base("matrix_real", worst, Relation::Below, tol_real));
        let max_re = s
            .eigenvalues
            .iter()
            .map(|l| l.re)
            .fold(f64::NEG_INFINITY, f64::max);
        out.push(base("matrix_negative", max_re, Relation::Below, 0.0));
        out.push(base(
            "matrix_distinct",
            s.min_relative_gap(),
            Relation::Above,
            1e-10,
        ));
    }
    Ok(out)
}

/// Jacobi characteristic polynomials `B_n` (and, in `(-1, 0]²`, the mixed
/// boundary polynomials) for `2 ≤ n ≤ n_max`.
pub fn jacobi_suite(n_max: usize) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for (a, b) in jacobi_samples() {
        let idx = JacobiIndex::new(a, b)?;
        for n in 2..=n_max {
            let mut r = check_real_negative_distinct(&jacobi_char_poly(n, idx)?)?
                .with("alpha", a)
                .with("beta", b)
                .with("n", n);
            r.check_name = "jacobi_roots".into();
            out.push(r);
            if a <= 0.0 && b <= 0.0 {
                let mut r = check_real_negative_distinct(&mixed_char_poly(n, idx)?)?
                    .with("alpha", a)
                    .with("beta", b)
                    .with("n", n);
                r.check_name = "mixed_bc_roots".into();
                out.push(r);
            }
            if n >= 3 {
                let mut r = check_positive_pair(&omega_poly(n, idx), &omega_poly(n - 1, idx))?
                    .with("alpha", a)
                    .with("beta", b)
                    .with("n", n);
                r.check_name = "omega_positive_pair".into();
                out.push(r);
            }
        }
    }
    Ok(out)
}

/// Stability of the `Φ` polynomials over their stated parameter ranges.
pub fn phi_suite(n_max: usize) -> Result<Vec<VerificationReport>> {
    let alphas = [-0.9, -0.5, 0.0, 0.5, 1.0];
    let betas = [-0.9, 0.0, 1.0, 3.0];
    let weights = [0.1, 1.0, 10.0];
    let mut out = Vec::new();
    let mut push = |r: VerificationReport, name: &str, a: f64, b: f64, n: usize, w: Option<f64>| {
        let mut r = r.with("alpha", a).with("beta", b).with("n", n);
        if let Some(w) = w {
            r = r.with("A", w);
        }
        r.check_name = name.into();
        out.push(r);
    };
    for a in alphas {
        for b in betas {
            let idx = JacobiIndex::new(a, b)?;
            for n in 2..=n_max {
                push(
                    check_stable(&phi_poly(n, idx, 0.0, PhiVariant::Base)?)?,
                    "phi_base_stable",
                    a,
                    b,
                    n,
                    None,
                );
                if n < 3 {
                    continue;
                }
                for w in weights {
                    if a <= 0.0 {
                        let p = phi_poly(n, idx, w, PhiVariant::Plus)?;
                        push(check_stable(&p)?, "phi_plus_stable", a, b, n, Some(w));
                    }
                    let p = phi_poly(n, idx, w, PhiVariant::PlusMu2)?;
                    push(check_stable(&p)?, "phi_plus_mu2_stable", a, b, n, Some(w));
                }
            }
        }
    }
    Ok(out)
}

/// Combination and product spot checks on Jacobi positive pairs, plus
/// the randomized Hermite–Biehler agreement.
pub fn hb_suite(seed: u64) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let (r, _) = hb_cross_validation(200, seed)?;
    out.push(r);
    let pairs: Vec<(JacobiIndex, usize)> = [
        (-0.3, -0.3, 8),
        (-0.9, 0.0, 6),
        (0.5, 0.5, 7),
        (0.0, 0.0, 5),
    ]
    .into_iter()
    .map(|(a, b, n)| Ok((JacobiIndex::new(a, b)?, n)))
    .collect::<Result<_>>()?;
    for (i, (idx, n)) in pairs.iter().enumerate() {
        let om1 = omega_poly(*n, *idx);
        let om2 = omega_poly(n - 1, *idx);
        out.push(
            check_real_combinations(&om1, &om2, 50, seed.wrapping_add(i as u64))?
                .with("alpha", idx.alpha())
                .with("beta", idx.beta())
                .with("n", *n),
        );
        let sw = idx.swapped();
        out.push(
            check_product_roots(&om1, &om2, &omega_poly(*n, sw), &omega_poly(n - 1, sw))?
                .with("alpha", idx.alpha())
                .with("beta", idx.beta())
                .with("n", *n),
        );
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Gegenbauer and Jacobi range theorems, `Φ` stability scans.
    Theorems,
    /// Hermite–Biehler cross-validation and combination spot checks.
    HermiteBiehler,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorems" => Ok(Suite::Theorems),
            "hb" | "hermite-biehler" => Ok(Suite::HermiteBiehler),
            "all" => Ok(Suite::All),
            other => Err(Error::UnknownTag {
                kind: "suite",
                value: other.to_string(),
            }),
        }
    }
}

/// Options for [`run_suite`].
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOptions {
    pub gamma_grid: Vec<f64>,
    pub poly_m_max: usize,
    pub matrix_sizes: Vec<usize>,
    pub jacobi_n_max: usize,
    pub phi_n_max: usize,
    pub tol_real: f64,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            gamma_grid: DEFAULT_GAMMA_GRID.to_vec(),
            poly_m_max: 20,
            matrix_sizes: vec![50, 200],
            jacobi_n_max: 15,
            phi_n_max: 12,
            tol_real: DEFAULT_TOL_REAL,
            seed: 20_240_601,
        }
    }
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Theorems | Suite::All) {
        for &g in &opts.gamma_grid {
            out.extend(gegenbauer_polynomial_suite(g, opts.poly_m_max)?);
            out.extend(gegenbauer_matrix_interlacing_suite(g, opts.poly_m_max)?);
            for &m in &opts.matrix_sizes {
                out.extend(gegenbauer_matrix_suite(g, m, opts.tol_real)?);
            }
        }
        out.extend(jacobi_suite(opts.jacobi_n_max)?);
        out.extend(phi_suite(opts.phi_n_max)?);
    }
    if matches!(suite, Suite::HermiteBiehler | Suite::All) {
        out.extend(hb_suite(opts.seed)?);
    }
    Ok(out)
}

/// Square integration matrix eigenvalues `μ` checked against the exact
/// characteristic polynomial, built in rational arithmetic at the binary
/// value of `γ`. Each eigenvalue's distance to a root is the exact Newton
/// correction `|p(μ)/p'(μ)| / |μ|`; the margin is the worst one. The
/// eigenvalues must also sit further apart than twice that, so each one
/// pins a different root.
///
/// Companion-matrix roots are not used here: in the monomial basis they are
/// off by up to `1e-2` at `m = 20`, far more than the matrix eigenvalues.
pub fn check_matrix_matches_polynomial(
    m: usize,
    idx: GegenbauerIndex,
    parity: Parity,
) -> Result<VerificationReport> {
    let gamma = BigRational::from_float(idx.gamma()).ok_or(Error::NonFinite("gamma"))?;
    matrix_matches_polynomial(m, idx, &gamma, parity)
}

/// [`check_matrix_matches_polynomial`] with an exact rational `γ` (the
/// matrix is still built in floating point at its nearest double).
pub fn check_matrix_matches_polynomial_exact(
    m: usize,
    gamma: &BigRational,
    parity: Parity,
) -> Result<VerificationReport> {
    let idx = GegenbauerIndex::new(gamma.to_f64())?;
    matrix_matches_polynomial(m, idx, gamma, parity)
}

fn matrix_matches_polynomial(
    m: usize,
    idx: GegenbauerIndex,
    gamma: &BigRational,
    parity: Parity,
) -> Result<VerificationReport> {
    let mat = build_gi2(m, idx, parity)?;
    let mus = dense_eigs(&mat.square())?;
    let p = &charpoly_sequence_with(m, gamma, parity)[m];
    let ip = IntPoly::new(p);
    let dp = derivative(p);
    let worst = mus
        .iter()
        .map(|z| {
            if z.im.abs() <= ROOT_TOL_IMAG * z.norm() {
                to_fixed(z.re, FIXED_BITS)
                    .map_or(f64::INFINITY, |a| ip.relative_newton_step(&a, FIXED_BITS))
            } else {
                exact_newton_step(p, &dp, *z)
            }
        })
        .fold(0.0, f64::max);
    let gap = min_pair_gap(&mus);
    let separated = gap > 2.0 * worst;
    let margin = if separated { worst } else { worst.max(1.0) };
    Ok(
        VerificationReport::new("matrix_vs_polynomial", margin, Relation::Below, 1e-8)
            .with("gamma", idx.gamma())
            .with("m", m)
            .with("parity", parity.to_string())
            .with("min_rel_gap", gap),
    )
}

fn min_pair_gap(mus: &[Complex64]) -> f64 {
    let mut gap = f64::INFINITY;
    for (i, a) in mus.iter().enumerate() {
        for b in &mus[i + 1..] {
            gap = gap.min((a - b).norm() / a.norm().max(b.norm()));
        }
    }
    gap
}

/// Fixed-point bits for the exact checks (`μ = a / 2^k`).
const FIXED_BITS: usize = 192;

/// Rows `[p_0(μ_j), …, p_{m-1}(μ_j)]` are left eigenvectors of the square
/// integration matrix: `‖v M - μ_j v‖ ≤ 1e-8 ‖v‖ ‖M‖` (2-norms).
///
/// Everything is exact: `M` and the `p_l` are rational in `γ`, and each
/// `μ_j` is the matrix eigenvalue refined by Newton on `p_m` to a 192-bit
/// dyadic. In floating point the row is the decaying solution of the
/// recurrence, so an error `δμ` in the eigenvalue shows up in `p_{m-1}(μ)`
/// amplified by orders of magnitude; past `m ≈ 7` no double-precision `μ` is
/// close enough.
pub fn check_left_eigenvectors(
    m: usize,
    gamma: &BigRational,
    parity: Parity,
) -> Result<VerificationReport> {
    let idx = GegenbauerIndex::new(gamma.to_f64())?;
    let sq = build_gi2(m, idx, parity)?.square();
    let norm_m = sq.singular_values().map_err(|_| Error::NoConvergence(m))?[0];
    let mus = dense_eigs(&sq)?;
    let k = FIXED_BITS;

    // rows: v_l = V_l / (L 2^{k(m-1)}); matrix: M_ij = Q_ij / E
    let seq: Vec<IntPoly> = charpoly_sequence_with(m, gamma, parity)
        .iter()
        .map(IntPoly::new)
        .collect();
    let l_den = seq[..m]
        .iter()
        .fold(BigInt::from(1), |acc, p| acc.lcm(&p.den));
    let exact = crate::tau_operator::gi2_dense_with(m, gamma, parity);
    let e_den = exact[..m]
        .iter()
        .flatten()
        .fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    let q: Vec<Vec<BigInt>> = exact[..m]
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| c.numer() * (&e_den / c.denom()))
                .collect()
        })
        .collect();

    let mut worst = 0.0f64;
    let mut refined: Vec<f64> = Vec::with_capacity(m);
    for z in &mus {
        if z.im.abs() > ROOT_TOL_IMAG * z.norm() {
            worst = f64::INFINITY;
            continue;
        }
        let a0 = to_fixed(z.re, k).ok_or(Error::NonFinite("eigenvalue"))?;
        let a = seq[m].newton(&a0, k, 4);
        let sign = if a.is_negative() { -1.0 } else { 1.0 };
        refined.push(sign * ratio_to_f64(&a.abs(), &(BigInt::from(1) << k)));
        let v: Vec<BigInt> = seq[..m]
            .iter()
            .map(|p| (p.scaled(&a, k) << (k * (m - 1 - p.degree()))) * (&l_den / &p.den))
            .collect();
        let mut r2 = BigInt::zero();
        for j in 0..m {
            let mut acc = BigInt::zero();
            for (i, vi) in v.iter().enumerate() {
                acc += vi * &q[i][j];
            }
            let r = (acc << k) - &a * &v[j] * &e_den;
            r2 += &r * &r;
        }
        let v2 = v.iter().fold(BigInt::zero(), |acc, x| acc + x * x);
        let den = (&e_den * &e_den * v2) << (2 * k);
        worst = worst.max(ratio_to_f64(&r2, &den).sqrt() / norm_m);
    }
    // the refined values must still be m different roots
    refined.sort_by(f64::total_cmp);
    let distinct = refined.windows(2).all(|w| rel_gap(w[0], w[1]) > 1e-12);
    let margin = if distinct { worst } else { worst.max(1.0) };
    Ok(
        VerificationReport::new("left_eigenvector", margin, Relation::Below, 1e-8)
            .with("gamma", idx.gamma())
            .with("m", m)
            .with("parity", parity.to_string()),
    )
}

fn derivative(p: &MuPolynomial<BigRational>) -> MuPolynomial<BigRational> {
    MuPolynomial::new(
        p.coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
            .collect(),
    )
}

// Horner over exact complex rationals (re, im).
fn eval_complex(
    p: &MuPolynomial<BigRational>,
    re: &BigRational,
    im: &BigRational,
) -> (BigRational, BigRational) {
    let mut acc = (BigRational::zero(), BigRational::zero());
    for c in p.coeffs().iter().rev() {
        let r = &acc.0 * re - &acc.1 * im + c;
        let i = &acc.0 * im + &acc.1 * re;
        acc = (r, i);
    }
    acc
}

/// `|p(z)/p'(z)| / |z|` evaluated exactly at the binary value of `z`.
fn exact_newton_step(
    p: &MuPolynomial<BigRational>,
    dp: &MuPolynomial<BigRational>,
    z: Complex64,
) -> f64 {
    let (Some(re), Some(im)) = (BigRational::from_float(z.re), BigRational::from_float(z.im))
    else {
        return f64::INFINITY;
    };
    let (a, b) = eval_complex(p, &re, &im);
    let (c, d) = eval_complex(dp, &re, &im);
    let den = &c * &c + &d * &d;
    if den.is_zero() {
        return f64::INFINITY;
    }
    let qr = (&a * &c + &b * &d) / &den;
    let qi = (&b * &c - &a * &d) / &den;
    Complex64::new(qr.to_f64(), qi.to_f64()).norm() / z.norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[f64]) -> MuPolynomial {
        MuPolynomial::new(c.to_vec())
    }

    #[test]
    fn stability_examples() {
        let r = check_stable(&poly(&[1.0, 1.0])).unwrap();
        assert!(r.passed);
        assert!((r.margin + 1.0).abs() < 1e-15);
        let r = check_stable(&poly(&[1.0, 0.0, 1.0])).unwrap();
        assert!(!r.passed);
        assert!(r.margin.abs() < 1e-12);
        assert!(check_stable(&MuPolynomial::zero()).is_err());
        assert!(check_stable(&poly(&[2.0])).is_err());
    }

    #[test]
    fn positive_pair_examples() {
        let om1 = from_real_roots(1.0, &[-2.0, -4.0]);
        assert!(
            check_positive_pair(&om1, &from_real_roots(1.0, &[-3.0]))
                .unwrap()
                .passed
        );
        let om1 = from_real_roots(1.0, &[-2.0, -3.0]);
        assert!(
            !check_positive_pair(&om1, &from_real_roots(1.0, &[-10.0]))
                .unwrap()
                .passed
        );
        assert!(matches!(
            check_positive_pair(&om1, &poly(&[1.0])),
            Err(Error::DegreeMismatch(2, 0))
        ));
        let leg = JacobiIndex::new(-0.3, -0.3).unwrap();
        assert!(
            check_positive_pair(&omega_poly(8, leg), &omega_poly(7, leg))
                .unwrap()
                .passed
        );
    }

    #[test]
    fn composition_examples() {
        let p = hb_compose(&poly(&[1.0]), &poly(&[1.0]));
        assert_eq!(p.coeffs(), &[1.0, 1.0]);
        assert!(check_stable(&p).unwrap().passed);
        assert!(
            check_positive_pair(&poly(&[1.0]), &poly(&[1.0]))
                .unwrap()
                .passed
        );

        let p = hb_compose(&poly(&[2.0, 1.0]), &poly(&[1.0]));
        assert_eq!(p.coeffs(), &[2.0, 1.0, 1.0]);
        let r = check_stable(&p).unwrap();
        assert!(r.passed && (r.margin + 0.5).abs() < 1e-12);
        assert!(
            check_positive_pair(&poly(&[2.0, 1.0]), &poly(&[1.0]))
                .unwrap()
                .passed
        );

        let p = hb_compose(&poly(&[1.0, 1.0]), &poly(&[-1.0]));
        assert!(!check_stable(&p).unwrap().passed);
        let r = check_positive_pair(&poly(&[1.0, 1.0]), &poly(&[-1.0])).unwrap();
        assert!(!r.passed);
        assert_eq!(r.parameters["like_sign_leading"], Value::Bool(false));
    }

    #[test]
    fn phi_examples() {
        let leg = JacobiIndex::new(0.0, 0.0).unwrap();
        assert_eq!(
            phi_poly(1, leg, 0.0, PhiVariant::Base).unwrap().coeffs(),
            &[1.0, 1.0]
        );
        assert_eq!(
            phi_poly(6, leg, 0.0, PhiVariant::Plus).unwrap(),
            phi_poly(6, leg, 0.0, PhiVariant::Base).unwrap()
        );
        assert!(
            check_stable(&phi_poly(4, leg, 0.0, PhiVariant::Base).unwrap())
                .unwrap()
                .passed
        );
        let j = JacobiIndex::new(-0.5, 0.7).unwrap();
        assert!(
            check_stable(&phi_poly(5, j, 2.5, PhiVariant::PlusMu2).unwrap())
                .unwrap()
                .passed
        );
        assert!(phi_poly(5, j, -1.0, PhiVariant::Plus).is_err());
        assert!("plus_mu3".parse::<PhiVariant>().is_err());
    }

    #[test]
    fn report_relation_is_consistent() {
        let r = VerificationReport::new("x", 0.5, Relation::Below, 1.0);
        assert!(r.passed);
        let r = VerificationReport::new("x", f64::NAN, Relation::Above, 1.0);
        assert!(!r.passed);
        let js = serde_json::to_value(r.with("gamma", 0.5)).unwrap();
        assert_eq!(js["relation"], ">");
        assert_eq!(js["parameters"]["gamma"], 0.5);
    }

    #[test]
    fn interlacing_orders() {
        assert!(check_interlacing(&[-4.0, -2.0], &[-3.0]).unwrap().passed);
        assert!(
            check_interlacing(&[-4.0, -2.0], &[-5.0, -3.0])
                .unwrap()
                .passed
        );
        assert!(
            !check_interlacing(&[-5.0, -3.0], &[-4.0, -2.0])
                .unwrap()
                .passed
        );
        assert!(check_interlacing(&[-1.0], &[-3.0, -2.0, -1.5]).is_err());
    }
}
