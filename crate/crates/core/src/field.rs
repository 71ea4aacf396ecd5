//! Canonical spin-j bispinor field: `Ω`, `S_T`, `S_C`, the block matrix `J`
//! and `M(p)`, plus numerical verification of the C and T constraints.

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{block_scale, blocks, conj, identity, max_abs, CMatrix};
use crate::ratfunc::{Params, RationalFunc2};
use crate::spin::{r2_matrix, scalar_func_of_pdots, spin_matrices, SpinRep};

/// Default tolerance for the symmetry residuals.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// A free spin-j field given by the pair `M₊(x, y)`, `M₋(x, y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldSpec {
    pub two_j: u32,
    pub m_plus: RationalFunc2,
    pub m_minus: RationalFunc2,
    pub params: Params,
    /// Antiparticle identical to particle. Carried through to reports only.
    pub neutral: bool,
}

impl FieldSpec {
    pub fn new(two_j: u32, m_plus: RationalFunc2, m_minus: RationalFunc2) -> Self {
        Self {
            two_j,
            m_plus,
            m_minus,
            params: Params::new(),
            neutral: false,
        }
    }

    pub fn with_params(mut self, params: Params) -> Self {
        self.params = params;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_plus.is_zero() {
            return Err(Error::ZeroMPlus);
        }
        Ok(())
    }

    pub fn is_integer_spin(&self) -> bool {
        self.two_j.is_multiple_of(2)
    }

    /// `(cos jπ, sin jπ)`, exact.
    pub fn trig(&self) -> (i32, i32) {
        spin_trig(self.two_j)
    }

    /// Same function pair with both entries multiplied by `factor`.
    pub fn scaled(&self, factor: &crate::ratfunc::Rational) -> Self {
        Self {
            m_plus: self.m_plus.scale(factor),
            m_minus: self.m_minus.scale(factor),
            ..self.clone()
        }
    }
}

/// `(cos jπ, sin jπ)` from the parity of `2j`: integer `j` gives `((-1)^j, 0)`,
/// half-odd `j` gives `(0, (-1)^{j - 1/2})`.
pub fn spin_trig(two_j: u32) -> (i32, i32) {
    if two_j.is_multiple_of(2) {
        (if (two_j / 2).is_multiple_of(2) { 1 } else { -1 }, 0)
    } else {
        (
            0,
            if ((two_j - 1) / 2).is_multiple_of(2) {
                1
            } else {
                -1
            },
        )
    }
}

/// The 2x2 pattern `[[cos jπ, sin jπ], [-sin jπ, -cos jπ]]`.
pub fn j_pattern(two_j: u32) -> [[f64; 2]; 2] {
    let (cj, sj) = spin_trig(two_j);
    let (cj, sj) = (cj as f64, sj as f64);
    [[cj, sj], [-sj, -cj]]
}

#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalField {
    pub spec: FieldSpec,
    pub rep: SpinRep,
    pub omega: CMatrix,
    pub s_t: CMatrix,
    pub s_c: CMatrix,
    pub j_matrix: CMatrix,
}

pub fn build(spec: FieldSpec) -> Result<CanonicalField> {
    spec.validate()?;
    let rep = spin_matrices(spec.two_j);
    let n = rep.dim();
    let one = identity(n);
    let zero = CMatrix::zeros(n, n);
    let r2 = r2_matrix(spec.two_j);
    let pattern = j_pattern(spec.two_j);
    Ok(CanonicalField {
        omega: blocks(&zero, &one, &one, &zero),
        s_t: blocks(&r2, &zero, &zero, &r2),
        s_c: block_scale(&r2, pattern),
        j_matrix: block_scale(&one, pattern),
        rep,
        spec,
    })
}

impl CanonicalField {
    pub fn two_j(&self) -> u32 {
        self.spec.two_j
    }

    /// Size of one spin block, `2j + 1`.
    pub fn block_dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn m_plus_block(&self, p: &Vector3<f64>) -> Result<CMatrix> {
        scalar_func_of_pdots(&self.spec.m_plus, p, &self.rep)
    }

    pub fn m_minus_block(&self, p: &Vector3<f64>) -> Result<CMatrix> {
        scalar_func_of_pdots(&self.spec.m_minus, p, &self.rep)
    }

    /// The two terms `M₊ ⊗ 1` and `M₋ ⊗ J` separately.
    pub fn m_terms(&self, p: &Vector3<f64>) -> Result<(CMatrix, CMatrix)> {
        let plus = block_scale(&self.m_plus_block(p)?, [[1.0, 0.0], [0.0, 1.0]]);
        let minus = block_scale(&self.m_minus_block(p)?, j_pattern(self.two_j()));
        Ok((plus, minus))
    }

    pub fn m_matrix(&self, p: &Vector3<f64>) -> Result<CMatrix> {
        let (plus, minus) = self.m_terms(p)?;
        Ok(plus + minus)
    }

    /// Bispinor spin matrices `S ⊕ S`.
    pub fn bispinor_spin(&self) -> [CMatrix; 3] {
        let n = self.block_dim();
        let zero = CMatrix::zeros(n, n);
        [0, 1, 2].map(|a| blocks(&self.rep.s[a], &zero, &zero, &self.rep.s[a]))
    }
}

/// Maximum residual of each C/T constraint over the sampled momenta.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    /// `S_T† Ω* S_T - Ω`
    pub t_omega: f64,
    /// `S_C† Ω S_C + Ω*`
    pub c_omega: f64,
    /// `S_T† M*(-p) S_T - M(p)`, relative to `max(1, |M(p)|)`
    pub t_m: f64,
    /// `S_C† M(p) S_C - M*(-p)`, relative to `max(1, |M(p)|)`
    pub c_m: f64,
    /// `S_T† S* S_T + S`
    pub t_spin: f64,
    /// `S_C† S S_C + S*`
    pub c_spin: f64,
    /// `S_C S_C* - I`
    pub c_squared: f64,
    pub tol: f64,
    pub samples: usize,
    pub pass: bool,
}

impl SymmetryReport {
    pub fn residuals(&self) -> [(&'static str, f64); 7] {
        [
            ("T_omega", self.t_omega),
            ("C_omega", self.c_omega),
            ("T_M", self.t_m),
            ("C_M", self.c_m),
            ("T_spin", self.t_spin),
            ("C_spin", self.c_spin),
            ("C_squared", self.c_squared),
        ]
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals().iter().fold(0.0, |acc, (_, r)| acc.max(*r))
    }
}

/// Deterministic pseudo-random momenta with `|p| ∈ [0.1, 10]` and generic
/// (off-axis) directions.
pub fn sample_momenta(count: usize, seed: u64) -> Vec<Vector3<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| loop {
            let v = Vector3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let n = v.norm();
            if n > 0.2 && n <= 1.0 {
                break v / n * rng.gen_range(0.1..10.0);
            }
        })
        .collect()
}

pub fn verify_symmetries(
    field: &CanonicalField,
    samples: &[Vector3<f64>],
) -> Result<SymmetryReport> {
    verify_symmetries_with_tol(field, samples, SYMMETRY_TOL)
}

pub fn verify_symmetries_with_tol(
    field: &CanonicalField,
    samples: &[Vector3<f64>],
    tol: f64,
) -> Result<SymmetryReport> {
    let (omega, s_t, s_c) = (&field.omega, &field.s_t, &field.s_c);
    let s_t_dag = s_t.adjoint();
    let s_c_dag = s_c.adjoint();
    let dim = omega.nrows();

    let t_omega = max_abs(&(&s_t_dag * conj(omega) * s_t - omega));
    let c_omega = max_abs(&(&s_c_dag * omega * s_c + conj(omega)));
    let c_squared = max_abs(&(s_c * conj(s_c) - identity(dim)));

    let mut t_spin: f64 = 0.0;
    let mut c_spin: f64 = 0.0;
    for s in field.bispinor_spin() {
        t_spin = t_spin.max(max_abs(&(&s_t_dag * conj(&s) * s_t + &s)));
        c_spin = c_spin.max(max_abs(&(&s_c_dag * &s * s_c + conj(&s))));
    }

    let mut t_m: f64 = 0.0;
    let mut c_m: f64 = 0.0;
    for p in samples {
        let m = field.m_matrix(p)?;
        let m_neg = field.m_matrix(&-p)?;
        let scale = max_abs(&m).max(1.0);
        t_m = t_m.max(max_abs(&(&s_t_dag * conj(&m_neg) * s_t - &m)) / scale);
        c_m = c_m.max(max_abs(&(&s_c_dag * &m * s_c - conj(&m_neg))) / scale);
    }

    let mut report = SymmetryReport {
        t_omega,
        c_omega,
        t_m,
        c_m,
        t_spin,
        c_spin,
        c_squared,
        tol,
        samples: samples.len(),
        pass: false,
    };
    report.pass = report.residuals().iter().all(|(_, r)| *r < tol);
    Ok(report)
}
