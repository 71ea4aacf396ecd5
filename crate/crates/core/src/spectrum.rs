//! Closed-form energies and mode eigenvectors, and an independent
//! eigenvalue solver for `[EΩ - M(p)]ψ = 0`.

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{spin_trig, CanonicalField, FieldSpec};
use crate::linalg::{c, max_abs, CMatrix, CVector};
use crate::spin::{check_helicity, helicity_spinor};

/// Mode residual tolerance, relative to `max(1, |M(p)|)`.
pub const MODE_TOL: f64 = 1e-9;
/// Modes with `E` below this (relative to `max(1, |M₊|)`) count as gapless.
pub const GAP_TOL: f64 = 1e-8;

/// `M₊` and `M₋` at `(p², p σ)`.
pub fn m_values(spec: &FieldSpec, p: f64, sigma_two: i32) -> Result<(f64, f64)> {
    let x = p * p;
    let y = p * sigma_two as f64 / 2.0;
    Ok((
        spec.m_plus.evaluate_real(x, y)?,
        spec.m_minus.evaluate_real(x, y)?,
    ))
}

/// `E² = M₊² + (-1)^{2j+1} M₋²`, with `p` allowed to be negative (direction
/// reversal).
pub fn energy_squared(spec: &FieldSpec, p: f64, sigma_two: i32) -> Result<f64> {
    check_helicity(spec.two_j, sigma_two)?;
    let (mp, mm) = m_values(spec, p, sigma_two)?;
    Ok(if spec.is_integer_spin() {
        mp * mp - mm * mm
    } else {
        mp * mp + mm * mm
    })
}

/// Positive-branch energy `E⁽⁺⁾(p, σ)`.
pub fn energy(spec: &FieldSpec, p: f64, sigma_two: i32) -> Result<f64> {
    let e2 = energy_squared(spec, p, sigma_two)?;
    if e2 < 0.0 {
        return Err(Error::NegativeEnergySquared {
            p,
            sigma_two,
            value: e2,
        });
    }
    Ok(e2.sqrt())
}

/// Positive- and negative-energy solutions at one momentum and helicity.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeSolution {
    pub p_vec: Vector3<f64>,
    pub sigma_two: i32,
    pub energy: f64,
    pub u: CVector,
    pub v: CVector,
    pub normalization: f64,
}

/// Builds `u(p, σ)` and `v(p, σ) = J u(p, σ)` from the closed form.
///
/// The radicals use `κ M₋` with `κ = cos jπ + sin jπ`; for `j` with
/// `κ = -1` (e.g. `j = 1, 3/2`) the unsigned form picks the wrong block
/// ratio. The eigen-equation residual is checked before returning.
pub fn eigenvectors(
    field: &CanonicalField,
    p_vec: &Vector3<f64>,
    sigma_two: i32,
) -> Result<ModeSolution> {
    let spec = &field.spec;
    check_helicity(spec.two_j, sigma_two)?;
    let p = p_vec.norm();
    let xi = helicity_spinor(&field.rep, sigma_two, p_vec)?;
    let (mp, mm) = m_values(spec, p, sigma_two)?;
    let e = energy(spec, p, sigma_two)?;
    if e <= GAP_TOL * mp.abs().max(1.0) {
        return Err(Error::GaplessMode {
            p,
            sigma_two,
            energy: e,
        });
    }
    let (cj, sj) = spin_trig(spec.two_j);
    let kappa = (cj + sj) as f64;
    let mu = kappa * mm;
    let root = (mp * mp + mm * mm * (sj * sj) as f64).sqrt();
    let a = (root - mu).max(0.0).sqrt();
    let b = (root + mu).max(0.0).sqrt();
    let norm = (2.0 * e).sqrt();

    let n = field.block_dim();
    let mut u = CVector::zeros(2 * n);
    u.rows_mut(0, n).copy_from(&(&xi.components * c(a / norm)));
    u.rows_mut(n, n).copy_from(&(&xi.components * c(b / norm)));
    let v = &field.j_matrix * &u;

    let m = field.m_matrix(p_vec)?;
    let scale = max_abs(&m).max(1.0);
    let res_u = (&m * &u - &field.omega * &u * c(e)).norm() / u.norm();
    let res_v = (&m * &v + &field.omega * &v * c(e)).norm() / v.norm();
    let residual = res_u.max(res_v) / scale;
    if residual.is_nan() || residual >= MODE_TOL {
        return Err(Error::EigenResidual {
            sigma_two,
            residual,
        });
    }
    Ok(ModeSolution {
        p_vec: *p_vec,
        sigma_two,
        energy: e,
        u,
        v,
        normalization: norm,
    })
}

/// Eigenpairs of `Ω⁻¹ M(p)`, sorted by energy, with an orthonormal basis of
/// each (possibly degenerate) eigenspace.
pub fn solve_generalized_eigenproblem(
    field: &CanonicalField,
    p_vec: &Vector3<f64>,
) -> Result<Vec<(f64, CVector)>> {
    let m = field.m_matrix(p_vec)?;
    // Ω is an involution, so Ω⁻¹ = Ω
    let a = &field.omega * &m;
    let dim = a.nrows();
    let scale = max_abs(&m).max(1.0);

    let (_, t) = a
        .clone()
        .try_schur(f64::EPSILON, 5000)
        .ok_or_else(|| Error::NumericalBreakdown("Schur iteration did not converge".into()))?
        .unpack();
    let mut eigs: Vec<Complex64> = t.diagonal().iter().copied().collect();
    for z in &eigs {
        if z.im.abs() > 1e-6 * scale {
            return Err(Error::NumericalBreakdown(format!(
                "complex eigenvalue {z} of Omega^-1 M"
            )));
        }
    }
    eigs.sort_by(|x, y| x.re.total_cmp(&y.re));

    let mut out = Vec::with_capacity(dim);
    let mut start = 0;
    while start < dim {
        let mut end = start + 1;
        while end < dim && (eigs[end].re - eigs[start].re).abs() <= 1e-7 * scale {
            end += 1;
        }
        let k = end - start;
        let mean = eigs[start..end].iter().map(|z| z.re).sum::<f64>() / k as f64;
        let shifted = &a - CMatrix::identity(dim, dim) * c(mean);
        let svd = shifted.svd(false, true);
        let v_t = svd.v_t.expect("requested right singular vectors");
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
        for &idx in order.iter().take(k) {
            let vec: CVector = v_t.row(idx).adjoint();
            let residual = (&m * &vec - &field.omega * &vec * c(mean)).norm();
            if residual > 1e-6 * scale {
                return Err(Error::NumericalBreakdown(format!(
                    "eigenvector residual {residual:e} at E = {mean}"
                )));
            }
            out.push((mean, vec));
        }
        start = end;
    }
    Ok(out)
}

/// Outcome of the spectral-reality scan `M₊² - M₋² ≥ 0` (integer `j`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub pass: bool,
    pub integer_spin: bool,
    /// Grid intervals `[p_start, p_end]` per helicity where `E² < 0`.
    pub violations: Vec<Violation>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub sigma_two: i32,
    pub p_start: f64,
    pub p_end: f64,
    pub min_e_squared: f64,
}

pub fn validate_spectrum(spec: &FieldSpec, p_grid: &[f64]) -> ValidationReport {
    let integer_spin = spec.is_integer_spin();
    let mut violations = Vec::new();
    if integer_spin {
        let two_j = spec.two_j as i32;
        for sigma_two in (-two_j..=two_j).step_by(2) {
            let mut open: Option<Violation> = None;
            for &p in p_grid {
                // a pole counts as a violation: E² is not finite there
                let e2 = energy_squared(spec, p, sigma_two).unwrap_or(f64::NEG_INFINITY);
                if e2 < 0.0 {
                    let v = open.get_or_insert(Violation {
                        sigma_two,
                        p_start: p,
                        p_end: p,
                        min_e_squared: e2,
                    });
                    v.p_end = p;
                    v.min_e_squared = v.min_e_squared.min(e2);
                } else if let Some(v) = open.take() {
                    violations.push(v);
                }
            }
            violations.extend(open);
        }
    }
    ValidationReport {
        pass: violations.is_empty(),
        integer_spin,
        violations,
    }
}

/// Uniform grid on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}
