//! Built-in field specs: the four familiar equations in canonical form plus
//! a BdG-type spin-1/2 example with constant `M₋`.

use nalgebra::Vector3;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{build, verify_symmetries, FieldSpec, SymmetryReport};
use crate::linalg::{blocks, c, identity, max_abs, CMatrix};
use crate::ratfunc::{parse_expr, rational, Params, Rational};
use crate::spin::spin_matrices;

pub const NAMES: [&str; 5] = ["klein-gordon", "dirac", "proca", "schroedinger", "bdg"];

/// Parameter defaults: `m0 = 1`, `mu = 0`, `delta = 1`.
pub fn default_params() -> Params {
    let mut params = Params::new();
    params.insert("m0".into(), rational(1, 1));
    params.insert("mu".into(), rational(0, 1));
    params.insert("delta".into(), rational(1, 1));
    params
}

/// The block matrix printed for an entry, evaluated directly.
#[derive(Clone, Debug, PartialEq)]
pub enum Table1 {
    /// `diag(p² + m0², 1)` in each spin block.
    Massive { two_j: u32, m0: f64 },
    /// `[[m0, p·σ], [-p·σ, m0]]`
    Dirac { m0: f64 },
    /// `(p²/2m0 + μ) I`
    Schroedinger { two_j: u32, m0: f64, mu: f64 },
}

impl Table1 {
    pub fn m(&self, p: &Vector3<f64>) -> CMatrix {
        let p2 = p.norm_squared();
        match *self {
            Table1::Massive { two_j, m0 } => {
                let n = two_j as usize + 1;
                let zero = CMatrix::zeros(n, n);
                blocks(&(identity(n) * c(p2 + m0 * m0)), &zero, &zero, &identity(n))
            }
            Table1::Dirac { m0 } => {
                // p·σ = 2 p·S
                let rep = spin_matrices(1);
                let p_sigma = rep.dot(p) * c(2.0);
                let m = identity(2) * c(m0);
                blocks(&m, &p_sigma, &-&p_sigma, &m)
            }
            Table1::Schroedinger { two_j, m0, mu } => {
                identity(2 * (two_j as usize + 1)) * c(p2 / (2.0 * m0) + mu)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub spec: FieldSpec,
    pub table1: Option<Table1>,
    pub notes: &'static str,
}

impl CatalogEntry {
    pub fn table1_m(&self, p: &Vector3<f64>) -> Option<CMatrix> {
        self.table1.as_ref().map(|t| t.m(p))
    }
}

const KG_NOTES: &str =
    "psi = (phi, i dphi/dt); M+ = (M11 + M22)/2, M- = (M11 - M22)/2 with cos(j pi) = 1";
const DIRAC_NOTES: &str =
    "Dirac bispinor in the chiral-free form M = [[m0, p.sigma], [-p.sigma, m0]]";
const PROCA_NOTES: &str = "psi = (A, i dA/dt) for spin 1; A0 = i d/dt (p.A)/(p^2 + m0^2) is an eliminated extra variable, \
     not re-derived; M- carries the sign that reproduces diag((p^2 + m0^2) I, I) with cos(j pi) = -1";
const SCHROEDINGER_NOTES: &str =
    "Nambu-doubled form psi = (psi_S + R2 psi_S*, psi_S - R2 psi_S*); \
     the component map from the single spinor is documentation only";
const BDG_NOTES: &str = "spin-1/2 Schroedinger particle with a constant pairing term M- = delta";

/// Catalog entry by name. `two_j` is required to match the entry's spin
/// except for `schroedinger`, where it picks the spin (default 1). Missing
/// parameters fall back to [`default_params`].
pub fn get(name: &str, two_j: Option<u32>, overrides: &Params) -> Result<CatalogEntry> {
    let mut params = default_params();
    for (k, v) in overrides {
        params.insert(k.clone(), v.clone());
    }
    let value = |k: &str| params[k].to_f64().unwrap_or(f64::NAN);
    let (m0, mu) = (value("m0"), value("mu"));

    let (fixed, m_plus, m_minus, table1, notes, name) = match name {
        "klein-gordon" => (
            Some(0),
            "(x + m0^2 + 1)/2",
            "(x + m0^2 - 1)/2",
            Some(Table1::Massive { two_j: 0, m0 }),
            KG_NOTES,
            "klein-gordon",
        ),
        "dirac" => (
            Some(1),
            "m0",
            "2*y",
            Some(Table1::Dirac { m0 }),
            DIRAC_NOTES,
            "dirac",
        ),
        "proca" => (
            Some(2),
            "(x + m0^2 + 1)/2",
            "(1 - x - m0^2)/2",
            Some(Table1::Massive { two_j: 2, m0 }),
            PROCA_NOTES,
            "proca",
        ),
        "schroedinger" => {
            let t = two_j.unwrap_or(1);
            (
                None,
                "x/(2*m0) + mu",
                "0",
                Some(Table1::Schroedinger { two_j: t, m0, mu }),
                SCHROEDINGER_NOTES,
                "schroedinger",
            )
        }
        "bdg" => (Some(1), "x/(2*m0) + mu", "delta", None, BDG_NOTES, "bdg"),
        other => return Err(Error::UnknownCatalog(other.to_string())),
    };
    let spin = match (fixed, two_j) {
        (Some(f), Some(t)) if f != t => {
            return Err(Error::CatalogSpin {
                name: name.to_string(),
                two_j: t,
            })
        }
        (Some(f), _) => f,
        (None, t) => t.unwrap_or(1),
    };
    let spec = FieldSpec::new(
        spin,
        parse_expr(m_plus, &params)?,
        parse_expr(m_minus, &params)?,
    )
    .with_params(params);
    spec.validate()?;
    Ok(CatalogEntry {
        name,
        spec,
        table1,
        notes,
    })
}

/// Catalog entry with one parameter overridden.
pub fn get_with(
    name: &str,
    two_j: Option<u32>,
    key: &str,
    value: Rational,
) -> Result<CatalogEntry> {
    let mut params = Params::new();
    params.insert(key.to_string(), value);
    get(name, two_j, &params)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Report {
    pub name: String,
    /// `max |m_matrix(p) - table1_m(p)|`; absent when the entry has no table.
    pub m_residual: Option<f64>,
    pub symmetry: SymmetryReport,
    pub pass: bool,
}

pub fn verify_table1(entry: &CatalogEntry, samples: &[Vector3<f64>]) -> Result<Table1Report> {
    let field = build(entry.spec.clone())?;
    let m_residual = match &entry.table1 {
        Some(t) => {
            let mut worst: f64 = 0.0;
            for p in samples {
                worst = worst.max(max_abs(&(field.m_matrix(p)? - t.m(p))));
            }
            Some(worst)
        }
        None => None,
    };
    let symmetry = verify_symmetries(&field, samples)?;
    Ok(Table1Report {
        name: entry.name.to_string(),
        pass: symmetry.pass && m_residual.is_none_or(|r| r < 1e-10),
        m_residual,
        symmetry,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::branch_points;
    use crate::field::sample_momenta;
    use crate::quantization::{decide_statistics, Verdict};
    use num_complex::Complex64;

    #[test]
    fn dirac_reproduces_table_at_z3() {
        let e = get_with("dirac", None, "m0", rational(4, 1)).unwrap();
        let field = build(e.spec.clone()).unwrap();
        let p = Vector3::new(0.0, 0.0, 3.0);
        let m = field.m_matrix(&p).unwrap();
        let expected = e.table1_m(&p).unwrap();
        assert!(max_abs(&(m.clone() - expected)) < 1e-12);
        assert!((m[(0, 0)] - c(4.0)).norm() < 1e-12);
        assert!((m[(0, 2)] - c(3.0)).norm() < 1e-12);
        assert!((m[(1, 3)] - c(-3.0)).norm() < 1e-12);
    }

    #[test]
    fn schroedinger_has_no_m_minus() {
        for two_j in 0..=4 {
            let e = get("schroedinger", Some(two_j), &Params::new()).unwrap();
            assert!(e.spec.m_minus.is_zero());
            assert_eq!(e.spec.two_j, two_j);
        }
    }

    #[test]
    fn table1_residuals() {
        let samples = sample_momenta(8, 0);
        for name in NAMES {
            let e = get_with(name, None, "m0", rational(4, 1)).unwrap();
            let r = verify_table1(&e, &samples).unwrap();
            assert!(r.pass, "{name}: {r:?}");
            if let Some(res) = r.m_residual {
                assert!(res < 1e-12, "{name}: {res}");
            }
        }
    }

    #[test]
    fn unknown_and_mismatched() {
        assert_eq!(
            get("maxwell", None, &Params::new()),
            Err(Error::UnknownCatalog("maxwell".into()))
        );
        assert!(matches!(
            get("dirac", Some(2), &Params::new()),
            Err(Error::CatalogSpin { .. })
        ));
        assert!(get("dirac", Some(1), &Params::new()).is_ok());
    }

    #[test]
    fn golden_pipeline_table() {
        let golden = [
            ("klein-gordon", Verdict::Bose, 1, 2),
            ("dirac", Verdict::Fermi, 1, 2),
            ("proca", Verdict::Bose, 1, 2),
            ("schroedinger", Verdict::Arbitrary, 2, 0),
            ("bdg", Verdict::Fermi, 1, 4),
        ];
        for (name, verdict, dim, count) in golden {
            let e = get_with(name, None, "m0", rational(4, 1)).unwrap();
            let v = decide_statistics(&e.spec).unwrap();
            assert_eq!(v.kind, verdict, "{name}");
            assert_eq!(v.lambda.dimension, dim, "{name}");
            let sigma_two = e.spec.two_j as i32;
            let r = branch_points(&e.spec, sigma_two, &Vector3::z()).unwrap();
            assert_eq!(r.finite_branch_points.len(), count, "{name}");
            assert!(r.all_confirmed());
            if count == 2 {
                for b in &r.finite_branch_points {
                    let z: Complex64 = b.location.into();
                    assert!(
                        z.re.abs() < 1e-6 && (z.im.abs() - 4.0).abs() < 1e-6,
                        "{name}: {z}"
                    );
                }
            }
        }
    }

    #[test]
    fn bdg_points_lie_on_circle() {
        // Q = (p²/2m0)² + Δ² vanishes on |p|⁴ = 4 m0² Δ²
        let e = get_with("bdg", None, "m0", rational(1, 2)).unwrap();
        let r = branch_points(&e.spec, 1, &Vector3::z()).unwrap();
        assert_eq!(r.e_squared, "p^4 + 1");
        for b in &r.finite_branch_points {
            let z: Complex64 = b.location.into();
            assert!((z.norm() - 1.0).abs() < 1e-9);
        }
    }
}
