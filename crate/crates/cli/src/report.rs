//! Machine-readable report. Every command fills the sections it computes and
//! leaves the rest `null`.

use std::collections::BTreeMap;
use std::fmt::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use spinstat_core::analytic::BranchPointReport;
use spinstat_core::quantization::{FockResult, ModeCoefficients, Statistics, Verdict};
use spinstat_core::{SymmetryReport, ValidationReport};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub schema_version: u32,
    pub command: String,
    pub spec: SpecEcho,
    pub run: RunEcho,
    pub symmetry: Option<SymmetryReport>,
    pub spectrum: Option<SpectrumSection>,
    pub lambda: Option<LambdaSection>,
    pub statistics: Option<StatisticsSection>,
    pub causality: Option<CausalitySection>,
    pub branch_points: Option<Vec<BranchPointReport>>,
    pub corollary: Option<CorollarySection>,
    pub warnings: Vec<String>,
    pub error: Option<String>,
    pub exit_code: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecEcho {
    /// `catalog:<name>` or the spec-file path.
    pub source: String,
    pub two_j: u32,
    /// Reduced form of `M₊` after parameter substitution.
    pub m_plus: String,
    pub m_minus: String,
    pub m_plus_input: String,
    pub m_minus_input: String,
    pub params: BTreeMap<String, String>,
    pub neutral: bool,
    pub notes: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunEcho {
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSample {
    pub p: [f64; 3],
    pub sigma_two: i32,
    pub e_closed_form: f64,
    pub e_oracle: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSection {
    pub reality: ValidationReport,
    pub samples: Vec<SpectrumSample>,
    pub max_relative_error: f64,
}

/// `Λ = [[α I, β I], [γ I, δ I]]`
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaBlocks {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl From<[f64; 4]> for LambdaBlocks {
    fn from(c: [f64; 4]) -> Self {
        Self {
            alpha: c[0],
            beta: c[1],
            gamma: c[2],
            delta: c[3],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaSection {
    pub dimension: usize,
    pub block_dim: usize,
    pub canonical: Vec<LambdaBlocks>,
    pub singular_values: Vec<f64>,
    pub alignment_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvidenceSummary {
    pub statistics: Statistics,
    pub lambda: LambdaBlocks,
    pub fock_bounded: bool,
    pub fock_first_mode: FockResult,
    pub causality_pass: bool,
    pub causality_max_residual: f64,
    pub admissible: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatisticsSection {
    pub verdict: Verdict,
    pub modes: Vec<ModeCoefficients>,
    pub evidence: Vec<EvidenceSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CausalitySection {
    pub statistics: Statistics,
    pub pass: bool,
    pub max_residual: f64,
    /// Residual with the other statistics and the same `Λ` (unique-`Λ` specs).
    pub wrong_choice_residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorollarySection {
    pub branch_points_exist: bool,
    pub m_minus_nonzero: bool,
    pub lambda_dimension: usize,
    pub verdict: Verdict,
    pub integer_spin: bool,
    pub link_branch_implies_m_minus: bool,
    pub link_m_minus_implies_unique_lambda: bool,
    pub link_unique_lambda_implies_parity: bool,
    pub holds: bool,
}

/// Shortest decimal within 1e-10 relative.
fn fmt_num(v: f64) -> String {
    let v = if v.abs() < 1e-12 { 0.0 } else { v };
    let text = format!("{v:.10}");
    let text = text.trim_end_matches('0').trim_end_matches('.');
    if text == "-0" {
        "0".into()
    } else {
        text.into()
    }
}

fn fmt_complex(z: Complex64) -> String {
    let (re, im) = (fmt_num(z.re), fmt_num(z.im));
    match (re.as_str(), im.as_str()) {
        (_, "0") => re,
        ("0", _) => format!("{im}i"),
        _ if z.im < 0.0 => format!("{re} - {}i", fmt_num(-z.im)),
        _ => format!("{re} + {im}i"),
    }
}

/// Groups `z, -z` pairs as `±z`.
fn pair_up(points: &[Complex64]) -> Vec<String> {
    let mut used = vec![false; points.len()];
    let mut out = Vec::new();
    for i in 0..points.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let z = points[i];
        let partner = (0..points.len())
            .find(|&k| !used[k] && (points[k] + z).norm() <= 1e-9 * (1.0 + z.norm()));
        match partner {
            Some(k) => {
                used[k] = true;
                let rep = if z.im > 0.0 || (z.im == 0.0 && z.re > 0.0) {
                    z
                } else {
                    -z
                };
                let body = fmt_complex(rep);
                if rep.re != 0.0 && rep.im.abs() > 1e-12 {
                    out.push(format!("±({body})"));
                } else {
                    out.push(format!("±{body}"));
                }
            }
            None => out.push(fmt_complex(z)),
        }
    }
    out
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

impl VerdictReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let s = &self.spec;
        let _ = writeln!(out, "spec: {} (2j = {})", s.source, s.two_j);
        let _ = writeln!(out, "  M+ = {}", s.m_plus);
        let _ = writeln!(out, "  M- = {}", s.m_minus);

        if let Some(sym) = &self.symmetry {
            let _ = writeln!(
                out,
                "symmetry ({} momenta, tol {:e}): {}",
                sym.samples,
                sym.tol,
                pass(sym.pass)
            );
            for (name, r) in sym.residuals() {
                let _ = writeln!(out, "  {name:<10} {r:.3e}");
            }
        }
        if let Some(sp) = &self.spectrum {
            let _ = writeln!(
                out,
                "spectrum: reality {}, closed form vs oracle max rel. error {:.3e}",
                pass(sp.reality.pass),
                sp.max_relative_error
            );
            for v in &sp.reality.violations {
                let _ = writeln!(
                    out,
                    "  E^2 < 0 for 2*sigma = {} on p in [{}, {}] (min {:e})",
                    v.sigma_two, v.p_start, v.p_end, v.min_e_squared
                );
            }
        }
        if let Some(l) = &self.lambda {
            let _ = writeln!(out, "lambda: solution space dimension {}", l.dimension);
            for b in &l.canonical {
                let _ = writeln!(
                    out,
                    "  [[{} I, {} I], [{} I, {} I]]",
                    b.alpha, b.beta, b.gamma, b.delta
                );
            }
        }
        if let Some(st) = &self.statistics {
            let _ = writeln!(out, "verdict: {}", st.verdict);
            let bmin = st
                .modes
                .iter()
                .map(|m| m.b / m.energy)
                .fold(f64::INFINITY, f64::min);
            let bmax = st
                .modes
                .iter()
                .map(|m| m.b / m.energy)
                .fold(f64::NEG_INFINITY, f64::max);
            let _ = writeln!(
                out,
                "  {} modes, B/E in [{bmin:.6}, {bmax:.6}]",
                st.modes.len()
            );
            for e in &st.evidence {
                let _ = writeln!(
                    out,
                    "  {:?} with [[{}, {}], [{}, {}]]: fock bounded {}, causality residual {:.3e} -> {}",
                    e.statistics,
                    e.lambda.alpha,
                    e.lambda.beta,
                    e.lambda.gamma,
                    e.lambda.delta,
                    yes(e.fock_bounded),
                    e.causality_max_residual,
                    if e.admissible { "admissible" } else { "rejected" }
                );
            }
        }
        if let Some(c) = &self.causality {
            let _ = writeln!(
                out,
                "causality ({:?}): {} (residual {:.3e})",
                c.statistics,
                pass(c.pass),
                c.max_residual
            );
        }
        if let Some(bps) = &self.branch_points {
            for r in bps {
                let points: Vec<Complex64> = r
                    .finite_branch_points
                    .iter()
                    .map(|b| b.location.into())
                    .collect();
                let summary = if points.is_empty() {
                    "none".to_string()
                } else {
                    pair_up(&points).join(", ")
                };
                let infinity = if r.branch_at_infinity {
                    "; branch point at infinity"
                } else {
                    ""
                };
                let _ = writeln!(
                    out,
                    "branch points, 2*sigma = {}: {summary}{infinity}",
                    r.sigma_two
                );
                let _ = writeln!(out, "  E^2 = {}", r.e_squared);
                for b in &r.finite_branch_points {
                    let _ = writeln!(
                        out,
                        "  {}: {:?} of multiplicity {}, monodromy {}",
                        fmt_complex(b.location.into()),
                        b.kind,
                        b.multiplicity,
                        if b.monodromy_confirmed {
                            "confirmed"
                        } else {
                            "NOT confirmed"
                        }
                    );
                }
            }
        }
        if let Some(c) = &self.corollary {
            let _ = writeln!(
                out,
                "corollary: {}",
                if c.holds { "holds" } else { "VIOLATED" }
            );
            let _ = writeln!(
                out,
                "  branch points exist ({}) => M- not identically zero ({}): {}",
                yes(c.branch_points_exist),
                yes(c.m_minus_nonzero),
                c.link_branch_implies_m_minus
            );
            let _ = writeln!(
                out,
                "  M- not identically zero => dim Lambda = 1 (dim {}): {}",
                c.lambda_dimension, c.link_m_minus_implies_unique_lambda
            );
            let _ = writeln!(
                out,
                "  dim Lambda = 1 => bose iff integer spin (verdict {}, integer spin {}): {}",
                c.verdict,
                yes(c.integer_spin),
                c.link_unique_lambda_implies_parity
            );
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error: {e}");
        }
        out
    }
}
