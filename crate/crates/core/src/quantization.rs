//! Second quantization of the canonical field: the Lagrangian weight `Λ`,
//! Hamiltonian mode coefficients, the statistics forced by positivity, and
//! the equal-time bracket check.

use std::fmt;

use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{build, sample_momenta, spin_trig, CanonicalField, FieldSpec};
use crate::linalg::{block_scale, c, identity, max_abs, CMatrix, I};
use crate::spectrum::{eigenvectors, ModeSolution};

/// Singular values below this fraction of the largest count as zero.
pub const NULLSPACE_TOL: f64 = 1e-10;
/// Tolerance for `‖C(p) - I‖` in the bracket check.
pub const CAUSALITY_TOL: f64 = 1e-9;
/// Minimum number of modes sampled when deciding statistics.
pub const MIN_MODES: usize = 20;

/// Statistics of the ladder operators `a`, `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    /// Commutators.
    Bose,
    /// Anticommutators.
    Fermi,
}

impl Statistics {
    /// Sign `s` multiplying the antiparticle term in the bracket identity.
    fn bracket_sign(self) -> f64 {
        match self {
            Statistics::Bose => -1.0,
            Statistics::Fermi => 1.0,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Statistics::Bose => Statistics::Fermi,
            Statistics::Fermi => Statistics::Bose,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Bose,
    Fermi,
    Arbitrary,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Bose => "bose",
            Verdict::Fermi => "fermi",
            Verdict::Arbitrary => "arbitrary",
        })
    }
}

impl From<Statistics> for Verdict {
    fn from(s: Statistics) -> Self {
        match s {
            Statistics::Bose => Verdict::Bose,
            Statistics::Fermi => Verdict::Fermi,
        }
    }
}

/// `Λ = [[α I, β I], [γ I, δ I]]` from `[α, β, γ, δ]`.
pub fn lambda_matrix(coeffs: [f64; 4], block_dim: usize) -> CMatrix {
    block_scale(
        &identity(block_dim),
        [[coeffs[0], coeffs[1]], [coeffs[2], coeffs[3]]],
    )
}

/// `Λ⁽ᵇ⁾ = I`
pub const LAMBDA_BOSE: [f64; 4] = [1.0, 0.0, 0.0, 1.0];
/// `Λ⁽ᶠ⁾ = [[0, I], [I, 0]]`
pub const LAMBDA_FERMI: [f64; 4] = [0.0, 1.0, 1.0, 0.0];

/// `[[cos²jπ, sin²jπ], [sin²jπ, cos²jπ]]`
pub fn unique_lambda(two_j: u32) -> [f64; 4] {
    let (cj, sj) = spin_trig(two_j);
    let (c2, s2) = ((cj * cj) as f64, (sj * sj) as f64);
    [c2, s2, s2, c2]
}

/// Solution space of the Hermiticity and reality constraints on `Λ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaSpace {
    /// Orthonormal basis of `(α, β, γ, δ)`.
    pub basis: Vec<[f64; 4]>,
    pub dimension: usize,
    /// Canonical representatives: the unique `Λ` or `{Λ⁽ᵇ⁾, Λ⁽ᶠ⁾}`.
    pub canonical: Vec<[f64; 4]>,
    /// Singular values of the stacked constraint matrix, descending.
    pub singular_values: Vec<f64>,
    /// Largest distance from a canonical representative to the span of `basis`.
    pub alignment_residual: f64,
}

impl LambdaSpace {
    pub fn canonical_matrices(&self, block_dim: usize) -> Vec<CMatrix> {
        self.canonical
            .iter()
            .map(|c| lambda_matrix(*c, block_dim))
            .collect()
    }

    /// Distance from `coeffs` (normalized) to the span of the basis.
    pub fn distance_to_span(&self, coeffs: [f64; 4]) -> f64 {
        distance_to_span(&self.basis, coeffs)
    }
}

fn distance_to_span(basis: &[[f64; 4]], coeffs: [f64; 4]) -> f64 {
    let norm = coeffs.iter().map(|v| v * v).sum::<f64>().sqrt();
    let target = coeffs.map(|v| v / norm);
    let mut rest = target;
    for b in basis {
        let dot: f64 = b.iter().zip(&target).map(|(x, y)| x * y).sum();
        for k in 0..4 {
            rest[k] -= dot * b[k];
        }
    }
    rest.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Momenta at which every helicity avoids poles and, unless `M₋` is the
/// zero function, at least one helicity has `M₋` away from zero.
pub fn generic_momenta(field: &CanonicalField, count: usize, seed: u64) -> Vec<Vector3<f64>> {
    let spec = &field.spec;
    let check_minus = !spec.m_minus.is_zero();
    let mut out = Vec::with_capacity(count);
    let mut round = 0u64;
    while out.len() < count {
        for p in sample_momenta(count, seed.wrapping_add(round.wrapping_mul(0x9E37_79B9))) {
            let pm = p.norm();
            // M₋ may vanish on some helicities (e.g. when odd in σ); one
            // nonvanishing helicity already pins Λ down.
            let mut finite = true;
            let mut minus_seen = !check_minus;
            for sigma_two in field.rep.helicities() {
                let (x, y) = (pm * pm, pm * sigma_two as f64 / 2.0);
                match (
                    spec.m_plus.evaluate_real(x, y),
                    spec.m_minus.evaluate_real(x, y),
                ) {
                    (Ok(_), Ok(m)) => minus_seen |= m.abs() >= 1e-8,
                    _ => finite = false,
                }
            }
            let ok = finite && minus_seen;
            if ok && out.len() < count {
                out.push(p);
            }
        }
        round += 1;
        if round > 1000 {
            break;
        }
    }
    out
}

/// Real-linear constraint rows acting on the 8 real unknowns
/// `(Re α, Re β, Re γ, Re δ, Im α, Im β, Im γ, Im δ)`.
fn constraint_rows(field: &CanonicalField, samples: &[Vector3<f64>]) -> Result<DMatrix<f64>> {
    let n = field.block_dim();
    let omega = &field.omega;
    let unknowns: Vec<CMatrix> = (0..8)
        .map(|k| {
            let mut coeffs = [0.0; 4];
            coeffs[k % 4] = 1.0;
            let m = lambda_matrix(coeffs, n);
            if k < 4 {
                m
            } else {
                m * I
            }
        })
        .collect();

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut push_antihermitian = |mats: &[CMatrix], scale: f64| {
        let dim = mats[0].nrows();
        for r in 0..dim {
            for col in 0..dim {
                let re: Vec<f64> = mats
                    .iter()
                    .map(|m| (m[(r, col)] - m[(col, r)].conj()).re / scale)
                    .collect();
                let im: Vec<f64> = mats
                    .iter()
                    .map(|m| (m[(r, col)] - m[(col, r)].conj()).im / scale)
                    .collect();
                rows.push(re);
                rows.push(im);
            }
        }
    };

    let lambda_omega: Vec<CMatrix> = unknowns.iter().map(|l| l * omega).collect();
    push_antihermitian(&lambda_omega, 1.0);

    for p in samples {
        let m_plus = block_scale(&field.m_plus_block(p)?, [[1.0, 0.0], [0.0, 1.0]]);
        let m_minus = block_scale(&field.m_minus_block(p)?, [[1.0, 0.0], [0.0, 1.0]]);
        let sp = max_abs(&m_plus).max(f64::MIN_POSITIVE);
        let with_plus: Vec<CMatrix> = unknowns.iter().map(|l| &m_plus * l).collect();
        push_antihermitian(&with_plus, sp);
        if max_abs(&m_minus) > 0.0 {
            let sm = max_abs(&m_minus);
            let with_minus: Vec<CMatrix> = unknowns
                .iter()
                .map(|l| &m_minus * l * &field.j_matrix)
                .collect();
            push_antihermitian(&with_minus, sm);
        }
    }

    // Λ* = Λ
    for k in 4..8 {
        let mut row = vec![0.0; 8];
        row[k] = 1.0;
        rows.push(row);
    }
    Ok(DMatrix::from_fn(rows.len(), 8, |r, col| rows[r][col]))
}

pub fn solve_lambda(field: &CanonicalField) -> Result<LambdaSpace> {
    solve_lambda_at(field, &generic_momenta(field, 4, 0))
}

pub fn solve_lambda_at(field: &CanonicalField, samples: &[Vector3<f64>]) -> Result<LambdaSpace> {
    let a = constraint_rows(field, samples)?;
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let singular_values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let largest = singular_values.first().copied().unwrap_or(0.0);

    let mut basis = Vec::new();
    for &i in &order {
        if svd.singular_values[i] < NULLSPACE_TOL * largest {
            let row = v_t.row(i);
            let imag: f64 = (4..8).map(|k| row[k].abs()).fold(0.0, f64::max);
            if imag > 1e-8 {
                return Err(Error::NumericalBreakdown(format!(
                    "null vector of the Lambda constraints has imaginary part {imag:e}"
                )));
            }
            basis.push([row[0], row[1], row[2], row[3]]);
        }
    }

    let dimension = basis.len();
    let canonical = match dimension {
        0 => return Err(Error::EmptyLambdaSpace),
        1 => vec![unique_lambda(field.two_j())],
        2 => vec![LAMBDA_BOSE, LAMBDA_FERMI],
        d => {
            return Err(Error::Inconsistent(format!(
                "Lambda solution space has dimension {d}"
            )))
        }
    };
    let alignment_residual = canonical
        .iter()
        .map(|c| distance_to_span(&basis, *c))
        .fold(0.0, f64::max);
    if alignment_residual > 1e-8 {
        return Err(Error::Inconsistent(format!(
            "canonical Lambda lies {alignment_residual:e} away from the solution space"
        )));
    }
    Ok(LambdaSpace {
        basis,
        dimension,
        canonical,
        singular_values,
        alignment_residual,
    })
}

/// Coefficients of `a†a` and `b b†` contributed by one `(p, σ)` mode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeCoefficients {
    pub p: [f64; 3],
    pub sigma_two: i32,
    pub energy: f64,
    pub a: f64,
    pub b: f64,
    /// `u†ΛΩu`, equal to 1 with `N = √(2E)`.
    pub norm: f64,
    /// Largest `|u(p,σ)† Λ Ω v(p,σ')|` over `σ'`; these would multiply `a† b†`.
    pub cross: f64,
}

fn real_part_checked(z: Complex64, scale: f64) -> Result<f64> {
    if z.im.abs() > 1e-10 * scale.max(1.0) {
        return Err(Error::NonRealCoefficient { imag: z.im });
    }
    Ok(z.re)
}

/// `A = E(σ) u†ΛΩu` and `B = -E(-σ) w†ΛΩw` with `w = v(-p, -σ)`.
pub fn hamiltonian_coefficients(
    field: &CanonicalField,
    lambda: &CMatrix,
    mode: &ModeSolution,
) -> Result<ModeCoefficients> {
    let weight = lambda * &field.omega;
    let p = mode.p_vec;
    let u = &mode.u;
    let norm_z = (u.adjoint() * &weight * u)[(0, 0)];
    let norm = real_part_checked(norm_z, 1.0)?;
    let a = mode.energy * norm;

    let partner = eigenvectors(field, &-p, -mode.sigma_two)?;
    let w = &partner.v;
    let b_z = (w.adjoint() * &weight * w)[(0, 0)] * c(-partner.energy);
    let b = real_part_checked(b_z, partner.energy)?;

    let mut cross: f64 = 0.0;
    for sigma_two in field.rep.helicities() {
        let other = eigenvectors(field, &p, sigma_two)?;
        cross = cross.max((u.adjoint() * &weight * &other.v)[(0, 0)].norm());
    }
    if cross > 1e-10 {
        return Err(Error::Inconsistent(format!(
            "a-dagger b-dagger coefficient {cross:e} does not vanish"
        )));
    }

    Ok(ModeCoefficients {
        p: [p.x, p.y, p.z],
        sigma_two: mode.sigma_two,
        energy: mode.energy,
        a,
        b,
        norm,
        cross,
    })
}

/// Residuals of the momentum-space bracket identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CausalityReport {
    pub statistics: Statistics,
    pub pass: bool,
    pub max_residual: f64,
    pub residuals: Vec<f64>,
}

/// `C(p) = Σ_σ [u u† + s v v†] ΛΩ` with `s = +1` for anticommutators and
/// `s = -1` for commutators; causality holds iff `C(p) = I` at every sample.
pub fn check_causality(
    field: &CanonicalField,
    lambda: &CMatrix,
    statistics: Statistics,
    samples: &[Vector3<f64>],
) -> Result<CausalityReport> {
    let weight = lambda * &field.omega;
    let dim = weight.nrows();
    let s = c(statistics.bracket_sign());
    let mut residuals = Vec::with_capacity(samples.len());
    for p in samples {
        let mut sum = CMatrix::zeros(dim, dim);
        for sigma_two in field.rep.helicities() {
            let mode = eigenvectors(field, p, sigma_two)?;
            sum += &mode.u * mode.u.adjoint() + &mode.v * mode.v.adjoint() * s;
        }
        residuals.push(max_abs(&(sum * &weight - identity(dim))));
    }
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(CausalityReport {
        statistics,
        pass: max_residual < CAUSALITY_TOL,
        max_residual,
        residuals,
    })
}

/// Ground-state energies of `H = A a†a + B b b†` on truncated Fock spaces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FockResult {
    pub bounded_below: bool,
    pub min_at_cutoff: f64,
    pub min_at_double_cutoff: f64,
}

fn annihilation(dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(dim, dim, |r, col| {
        if col == r + 1 {
            (col as f64).sqrt()
        } else {
            0.0
        }
    })
}

fn single_mode_ops(statistics: Statistics, cutoff: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let dim = match statistics {
        Statistics::Bose => cutoff + 1,
        Statistics::Fermi => 2,
    };
    // products are formed one level above the truncation so that b b† is
    // exact on every retained state
    let big = match statistics {
        Statistics::Bose => annihilation(dim + 1),
        Statistics::Fermi => annihilation(2),
    };
    let keep = |m: DMatrix<f64>| m.view((0, 0), (dim, dim)).into_owned();
    let number = keep(big.transpose() * &big);
    let anti_number = keep(&big * big.transpose());
    (number, anti_number)
}

fn min_energy(a: f64, b: f64, statistics: Statistics, cutoff: usize) -> f64 {
    let (number, anti_number) = single_mode_ops(statistics, cutoff);
    // the two terms act on different tensor factors, so the spectrum of H is
    // every sum A·n + B·k of factor eigenvalues
    let ns = number.symmetric_eigen().eigenvalues;
    let ks = anti_number.symmetric_eigen().eigenvalues;
    ns.iter()
        .flat_map(|n| ks.iter().map(move |k| a * n + b * k))
        .fold(f64::INFINITY, f64::min)
}

/// Brute-force positivity check: `H` is bounded below iff its minimum does
/// not drop when the occupation cutoff is doubled.
pub fn fock_oracle(a: f64, b: f64, statistics: Statistics, cutoff: usize) -> FockResult {
    let cutoff = cutoff.max(2);
    let lo = min_energy(a, b, statistics, cutoff);
    let hi = min_energy(a, b, statistics, 2 * cutoff);
    let tol = 1e-9 * (1.0 + a.abs() + b.abs());
    FockResult {
        bounded_below: hi >= lo - tol,
        min_at_cutoff: lo,
        min_at_double_cutoff: hi,
    }
}

/// Evidence gathered for one (statistics, Λ) choice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChoiceEvidence {
    pub statistics: Statistics,
    pub lambda: [f64; 4],
    /// Bounded below at cutoffs 8 and 16 for every sampled mode.
    pub fock_bounded: bool,
    /// Oracle output for the first sampled mode.
    pub fock_first_mode: FockResult,
    pub causality: CausalityReport,
    /// Positivity and causality both hold for this choice.
    pub admissible: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatisticsVerdict {
    pub kind: Verdict,
    pub lambda: LambdaSpace,
    /// `(A, B)` per sampled mode with the unique `Λ` (or `Λ⁽ᵇ⁾` when arbitrary).
    pub mode_coefficients: Vec<ModeCoefficients>,
    pub evidence: Vec<ChoiceEvidence>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantizationOptions {
    pub seed: u64,
    pub lambda_samples: usize,
    pub min_modes: usize,
    pub causality_samples: usize,
    pub fock_cutoff: usize,
}

impl Default for QuantizationOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            lambda_samples: 4,
            min_modes: MIN_MODES,
            causality_samples: 8,
            fock_cutoff: 8,
        }
    }
}

/// Positive-energy modes over generic momenta, skipping gapless ones.
fn sample_modes(
    field: &CanonicalField,
    opts: &QuantizationOptions,
    warnings: &mut Vec<String>,
) -> Result<Vec<ModeSolution>> {
    let per_momentum = field.block_dim();
    let mut modes = Vec::new();
    let mut round = 0;
    while modes.len() < opts.min_modes {
        let needed = (opts.min_modes - modes.len()).div_ceil(per_momentum).max(1);
        let momenta = generic_momenta(field, needed, opts.seed.wrapping_add(1000 + round));
        if momenta.is_empty() {
            break;
        }
        for p in momenta {
            for sigma_two in field.rep.helicities() {
                match eigenvectors(field, &p, sigma_two) {
                    Ok(m) => modes.push(m),
                    Err(Error::GaplessMode {
                        p,
                        sigma_two,
                        energy,
                    }) => warnings.push(format!(
                        "gapless mode skipped: |p| = {p}, 2*sigma = {sigma_two}, E = {energy:e}"
                    )),
                    Err(e) => return Err(e),
                }
            }
        }
        round += 1;
        if round > 50 {
            break;
        }
    }
    Ok(modes)
}

fn evidence_for(
    field: &CanonicalField,
    lambda: [f64; 4],
    statistics: Statistics,
    coefficients: &[ModeCoefficients],
    samples: &[Vector3<f64>],
    cutoff: usize,
) -> Result<ChoiceEvidence> {
    let lam = lambda_matrix(lambda, field.block_dim());
    let fock_bounded = coefficients
        .iter()
        .all(|m| fock_oracle(m.a, m.b, statistics, cutoff).bounded_below);
    let first = &coefficients[0];
    let fock_first_mode = fock_oracle(first.a, first.b, statistics, cutoff);
    let causality = check_causality(field, &lam, statistics, samples)?;
    Ok(ChoiceEvidence {
        statistics,
        lambda,
        fock_bounded,
        fock_first_mode,
        admissible: fock_bounded && causality.pass,
        causality,
    })
}

pub fn decide_statistics(spec: &FieldSpec) -> Result<StatisticsVerdict> {
    decide_statistics_with(spec, &QuantizationOptions::default())
}

pub fn decide_statistics_with(
    spec: &FieldSpec,
    opts: &QuantizationOptions,
) -> Result<StatisticsVerdict> {
    let field = build(spec.clone())?;
    let lambda = solve_lambda_at(
        &field,
        &generic_momenta(&field, opts.lambda_samples, opts.seed),
    )?;
    decide_with_lambda(&field, lambda, opts)
}

fn decide_with_lambda(
    field: &CanonicalField,
    lambda: LambdaSpace,
    opts: &QuantizationOptions,
) -> Result<StatisticsVerdict> {
    let mut warnings = Vec::new();
    let modes = sample_modes(field, opts, &mut warnings)?;
    if modes.is_empty() {
        return Err(Error::Inconsistent("no gapped modes to sample".into()));
    }
    let causality_samples =
        generic_momenta(field, opts.causality_samples, opts.seed.wrapping_add(7));
    let n = field.block_dim();

    let coefficients_with = |coeffs: [f64; 4]| -> Result<Vec<ModeCoefficients>> {
        let lam = lambda_matrix(coeffs, n);
        modes
            .iter()
            .map(|m| hamiltonian_coefficients(field, &lam, m))
            .collect()
    };

    if lambda.dimension == 2 {
        let mode_coefficients = coefficients_with(LAMBDA_BOSE)?;
        let fermi_coefficients = coefficients_with(LAMBDA_FERMI)?;
        let evidence = vec![
            evidence_for(
                field,
                LAMBDA_BOSE,
                Statistics::Bose,
                &mode_coefficients,
                &causality_samples,
                opts.fock_cutoff,
            )?,
            evidence_for(
                field,
                LAMBDA_FERMI,
                Statistics::Fermi,
                &fermi_coefficients,
                &causality_samples,
                opts.fock_cutoff,
            )?,
        ];
        if let Some(bad) = evidence.iter().find(|e| !e.admissible) {
            return Err(Error::Inconsistent(format!(
                "M- = 0 but the {:?} choice fails positivity or causality",
                bad.statistics
            )));
        }
        return Ok(StatisticsVerdict {
            kind: Verdict::Arbitrary,
            lambda,
            mode_coefficients,
            evidence,
            warnings,
        });
    }

    // Λ is fixed up to a real factor; orient it so particles carry positive energy
    let mut coeffs = lambda.canonical[0];
    let mut mode_coefficients = coefficients_with(coeffs)?;
    if mode_coefficients[0].a < 0.0 {
        coeffs = coeffs.map(|v| -v);
        mode_coefficients = coefficients_with(coeffs)?;
        warnings.push("Lambda orientation flipped so that A > 0".into());
    }
    if mode_coefficients.iter().any(|m| m.a <= 0.0) {
        return Err(Error::MixedSign);
    }
    let statistics = if mode_coefficients.iter().all(|m| m.b > 0.0) {
        Statistics::Bose
    } else if mode_coefficients.iter().all(|m| m.b < 0.0) {
        Statistics::Fermi
    } else {
        return Err(Error::MixedSign);
    };

    let chosen = evidence_for(
        field,
        coeffs,
        statistics,
        &mode_coefficients,
        &causality_samples,
        opts.fock_cutoff,
    )?;
    let rejected = evidence_for(
        field,
        coeffs,
        statistics.other(),
        &mode_coefficients,
        &causality_samples,
        opts.fock_cutoff,
    )?;
    if !chosen.admissible {
        return Err(Error::Inconsistent(format!(
            "{statistics:?} chosen from the sign of B but positivity or causality fails"
        )));
    }
    if rejected.causality.pass {
        return Err(Error::Inconsistent(format!(
            "causality also holds for {:?} although Lambda is unique",
            statistics.other()
        )));
    }
    let expected_b_sign = if field.spec.is_integer_spin() {
        1.0
    } else {
        -1.0
    };
    warnings.push(format!(
        "computed b b-dagger coefficient has sign {:+}, i.e. B = (-1)^(2j) E rather than (-1)^(2j+1) E",
        expected_b_sign
    ));

    Ok(StatisticsVerdict {
        kind: statistics.into(),
        lambda,
        mode_coefficients,
        evidence: vec![chosen, rejected],
        warnings,
    })
}
