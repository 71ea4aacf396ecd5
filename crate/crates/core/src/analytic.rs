//! Where does `E(p)` fail to be meromorphic? Branch points of `√Q` with
//! `Q = E²` restricted to a ray, found from the parity of zero/pole
//! multiplicities and confirmed by continuing `√Q` around each candidate.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{build, FieldSpec};
use crate::quantization::{decide_statistics_with, QuantizationOptions, Verdict};
use crate::ratfunc::{rational, Poly1, RationalFunc1, RationalFunc2};
use crate::spin::check_helicity;

/// Relative clustering radius for [`find_roots`].
pub const ROOT_TOL: f64 = 1e-7;
/// Points on the monodromy contour.
pub const CONTOUR_POINTS: usize = 64;
/// Relative tolerance for `√Q` returning to minus its starting value.
pub const MONODROMY_TOL: f64 = 1e-6;

/// A complex number in report form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexPoint {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexPoint> for Complex64 {
    fn from(z: ComplexPoint) -> Self {
        Complex64::new(z.re, z.im)
    }
}

impl std::fmt::Display for ComplexPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let clean = |v: f64| if v.abs() < 1e-12 { 0.0 } else { v };
        let (re, im) = (clean(self.re), clean(self.im));
        match (re == 0.0, im == 0.0) {
            (_, true) => write!(f, "{re}"),
            (true, false) => write!(f, "{im}i"),
            (false, false) if im < 0.0 => write!(f, "{re} - {}i", -im),
            _ => write!(f, "{re} + {im}i"),
        }
    }
}

/// Roots of `Σ coeffs[k] pᵏ` from companion-matrix eigenvalues, merged into
/// clusters of radius `tol (1 + |root|)`.
pub fn find_roots(coeffs: &[Complex64], tol: f64) -> Result<Vec<(Complex64, u32)>> {
    let mut coeffs = coeffs.to_vec();
    while coeffs
        .last()
        .is_some_and(|c| *c == Complex64::new(0.0, 0.0))
    {
        coeffs.pop();
    }
    let degree = coeffs.len().saturating_sub(1);
    if degree == 0 {
        return Err(Error::DegreeZero);
    }
    // the plain companion matrix of e.g. p⁴ + 1 is unitary and stalls the QR
    // iteration, so retry on a translated variable p = w + t
    for t in SHIFTS {
        let t = Complex64::new(t.0, t.1);
        let shifted = taylor_shift(&coeffs, t);
        if let Some(eigs) = companion_eigenvalues(&shifted) {
            let roots: Vec<Complex64> = eigs.iter().map(|w| polish(&coeffs, w + t)).collect();
            return Ok(cluster(&roots, tol));
        }
    }
    Err(Error::NumericalBreakdown(
        "companion-matrix QR iteration did not converge".into(),
    ))
}

const SHIFTS: [(f64, f64); 4] = [(0.0, 0.0), (0.297, 0.127), (-0.541, 0.293), (0.173, -0.611)];

/// Coefficients of `q(w) = p(w + t)`.
fn taylor_shift(coeffs: &[Complex64], t: Complex64) -> Vec<Complex64> {
    let mut out = coeffs.to_vec();
    let n = out.len();
    for i in 0..n {
        for k in (i..n - 1).rev() {
            let carry = out[k + 1] * t;
            out[k] += carry;
        }
    }
    out
}

fn companion_eigenvalues(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let degree = coeffs.len() - 1;
    let lead = coeffs[degree];
    let companion = DMatrix::from_fn(degree, degree, |r, col| {
        if r == 0 {
            -coeffs[degree - 1 - col] / lead
        } else if r == col + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let (_, t) = companion.try_schur(f64::EPSILON, 2000)?.unpack();
    Some(t.diagonal().iter().copied().collect())
}

fn horner(coeffs: &[Complex64], p: Complex64) -> (Complex64, Complex64) {
    let mut value = Complex64::new(0.0, 0.0);
    let mut slope = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        slope = slope * p + value;
        value = value * p + c;
    }
    (value, slope)
}

/// A few Newton steps, kept only while they shrink the residual.
fn polish(coeffs: &[Complex64], mut z: Complex64) -> Complex64 {
    let mut best = horner(coeffs, z).0.norm();
    for _ in 0..8 {
        let (value, slope) = horner(coeffs, z);
        if slope.norm() == 0.0 {
            break;
        }
        let next = z - value / slope;
        let r = horner(coeffs, next).0.norm();
        if r.partial_cmp(&best) != Some(std::cmp::Ordering::Less) {
            break;
        }
        best = r;
        z = next;
    }
    z
}

fn cluster(roots: &[Complex64], tol: f64) -> Vec<(Complex64, u32)> {
    let mut groups: Vec<(Complex64, Vec<Complex64>)> = Vec::new();
    for &z in roots {
        match groups
            .iter_mut()
            .find(|(center, _)| (z - center).norm() <= tol * (1.0 + center.norm()))
        {
            Some((center, members)) => {
                members.push(z);
                *center = members.iter().sum::<Complex64>() / members.len() as f64;
            }
            None => groups.push((z, vec![z])),
        }
    }
    let mut out: Vec<(Complex64, u32)> = groups
        .into_iter()
        .map(|(c, m)| (c, m.len() as u32))
        .collect();
    out.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SingularityKind {
    Zero,
    Pole,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchPoint {
    pub location: ComplexPoint,
    pub multiplicity: u32,
    pub kind: SingularityKind,
    pub monodromy_confirmed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchPointReport {
    pub sigma_two: i32,
    pub direction: [f64; 3],
    /// `Q(p)` in lowest terms, variable `p`.
    pub e_squared: String,
    pub finite_branch_points: Vec<BranchPoint>,
    pub branch_at_infinity: bool,
    /// Some candidate could not be separated from a neighbour or its
    /// monodromy disagreed with the multiplicity parity.
    pub ambiguous: bool,
}

impl BranchPointReport {
    pub fn all_confirmed(&self) -> bool {
        self.finite_branch_points
            .iter()
            .all(|b| b.monodromy_confirmed)
    }
}

/// `Q = M₊² + (-1)^{2j+1} M₋²` as a function of `(x, y)`.
pub fn energy_squared_function(spec: &FieldSpec) -> RationalFunc2 {
    let plus = spec.m_plus.pow(2);
    let minus = spec.m_minus.pow(2);
    if spec.is_integer_spin() {
        plus.sub(&minus)
    } else {
        plus.add(&minus)
    }
}

/// `Q` on the ray `x = p²`, `y = σ p`.
pub fn energy_squared_on_ray(spec: &FieldSpec, sigma_two: i32) -> Result<RationalFunc1> {
    check_helicity(spec.two_j, sigma_two)?;
    let q = energy_squared_function(spec).restrict_to_ray(&rational(sigma_two as i64, 2))?;
    if q.is_zero() {
        return Err(Error::ZeroEnergySquared);
    }
    Ok(q)
}

/// Odd-multiplicity roots of `poly`. Multiplicities are exact (square-free
/// decomposition over the rationals); locations come from [`find_roots`] on
/// each square-free factor. The flag reports factors whose roots collided.
fn odd_roots(poly: &Poly1) -> Result<(Vec<(Complex64, u32)>, bool)> {
    let mut out = Vec::new();
    let mut ambiguous = false;
    for (k, factor) in poly.squarefree_decomposition() {
        if k % 2 == 0 {
            continue;
        }
        for (z, m) in find_roots(&factor.to_complex(), ROOT_TOL)? {
            ambiguous |= m != 1;
            out.push((z, k * m));
        }
    }
    Ok((out, ambiguous))
}

fn all_roots(poly: &Poly1) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    for (_, factor) in poly.squarefree_decomposition() {
        out.extend(
            find_roots(&factor.to_complex(), ROOT_TOL)?
                .into_iter()
                .map(|(z, _)| z),
        );
    }
    Ok(out)
}

pub fn branch_points(
    spec: &FieldSpec,
    sigma_two: i32,
    direction: &Vector3<f64>,
) -> Result<BranchPointReport> {
    if direction.norm() == 0.0 {
        return Err(Error::ZeroDirection);
    }
    let q = energy_squared_on_ray(spec, sigma_two)?;
    let (zeros, amb_zeros) = odd_roots(q.numerator())?;
    let (poles, amb_poles) = odd_roots(q.denominator())?;
    let mut singular = all_roots(q.numerator())?;
    singular.extend(all_roots(q.denominator())?);

    let mut ambiguous = amb_zeros || amb_poles;
    let mut finite = Vec::new();
    let tagged = zeros
        .into_iter()
        .map(|z| (z, SingularityKind::Zero))
        .chain(poles.into_iter().map(|z| (z, SingularityKind::Pole)));
    for ((location, multiplicity), kind) in tagged {
        let confirmed = match monodromy_with_neighbours(&q, location, &singular) {
            Ok(flipped) => flipped,
            Err(Error::RadiusUnderflow { .. }) => false,
            Err(e) => return Err(e),
        };
        ambiguous |= !confirmed;
        finite.push(BranchPoint {
            location: location.into(),
            multiplicity,
            kind,
            monodromy_confirmed: confirmed,
        });
    }
    finite.sort_by(|a, b| {
        a.location
            .re
            .total_cmp(&b.location.re)
            .then(a.location.im.total_cmp(&b.location.im))
    });

    let deg = |p: &Poly1| p.degree().unwrap_or(0) as i64;
    let unit = direction / direction.norm();
    Ok(BranchPointReport {
        sigma_two,
        direction: [unit.x, unit.y, unit.z],
        e_squared: q.to_string(),
        finite_branch_points: finite,
        branch_at_infinity: (deg(q.numerator()) - deg(q.denominator())).rem_euclid(2) == 1,
        ambiguous,
    })
}

/// Whether `√q` changes sign around `center`.
pub fn monodromy_check(q: &RationalFunc1, center: Complex64) -> Result<bool> {
    let mut singular = all_roots(q.numerator())?;
    singular.extend(all_roots(q.denominator())?);
    monodromy_with_neighbours(q, center, &singular)
}

fn monodromy_with_neighbours(
    q: &RationalFunc1,
    center: Complex64,
    singular: &[Complex64],
) -> Result<bool> {
    let scale = 1.0 + center.norm();
    let nearest = singular
        .iter()
        .map(|z| (z - center).norm())
        .filter(|d| *d > ROOT_TOL * scale)
        .fold(f64::INFINITY, f64::min);
    let radius = if nearest.is_finite() {
        nearest / 2.0
    } else {
        0.5 * scale
    };
    if radius < 1e-9 * scale {
        return Err(Error::RadiusUnderflow {
            center: ComplexPoint::from(center).to_string(),
            radius,
        });
    }
    let at = |k: usize| {
        center + Complex64::from_polar(radius, 2.0 * PI * k as f64 / CONTOUR_POINTS as f64)
    };
    let start = q.evaluate(at(0))?.sqrt();
    let mut current = start;
    for k in 1..=CONTOUR_POINTS {
        let root = q.evaluate(at(k))?.sqrt();
        current = if (root - current).norm() <= (root + current).norm() {
            root
        } else {
            -root
        };
    }
    Ok((current + start).norm() <= MONODROMY_TOL * start.norm())
}

/// Each implication of the corollary and the facts it connects.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorollaryReport {
    pub branch_points_exist: bool,
    pub m_minus_nonzero: bool,
    pub lambda_dimension: usize,
    pub verdict: Verdict,
    pub integer_spin: bool,
    /// branch points ⇒ `M₋ ≢ 0`
    pub link_branch_implies_m_minus: bool,
    /// `M₋ ≢ 0` ⇒ `dim Λ = 1`
    pub link_m_minus_implies_unique_lambda: bool,
    /// `dim Λ = 1` ⇒ Bose iff integer `j`
    pub link_unique_lambda_implies_parity: bool,
    pub holds: bool,
    pub branch_reports: Vec<BranchPointReport>,
}

pub fn verify_corollary(spec: &FieldSpec) -> Result<CorollaryReport> {
    verify_corollary_with(spec, &QuantizationOptions::default())
}

pub fn verify_corollary_with(
    spec: &FieldSpec,
    opts: &QuantizationOptions,
) -> Result<CorollaryReport> {
    let field = build(spec.clone())?;
    let direction = Vector3::z();
    let branch_reports = field
        .rep
        .helicities()
        .map(|s| branch_points(spec, s, &direction))
        .collect::<Result<Vec<_>>>()?;
    let branch_points_exist = branch_reports
        .iter()
        .any(|r| !r.finite_branch_points.is_empty());
    let m_minus_nonzero = !spec.m_minus.is_zero();
    let verdict = decide_statistics_with(spec, opts)?;
    let lambda_dimension = verdict.lambda.dimension;
    let integer_spin = spec.is_integer_spin();
    let parity_ok = matches!(
        (verdict.kind, integer_spin),
        (Verdict::Bose, true) | (Verdict::Fermi, false)
    );

    let link1 = !branch_points_exist || m_minus_nonzero;
    let link2 = !m_minus_nonzero || lambda_dimension == 1;
    let link3 = lambda_dimension != 1 || parity_ok;
    Ok(CorollaryReport {
        branch_points_exist,
        m_minus_nonzero,
        lambda_dimension,
        verdict: verdict.kind,
        integer_spin,
        link_branch_implies_m_minus: link1,
        link_m_minus_implies_unique_lambda: link2,
        link_unique_lambda_implies_parity: link3,
        holds: link1 && link2 && link3,
        branch_reports,
    })
}
