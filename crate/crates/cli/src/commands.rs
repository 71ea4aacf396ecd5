use nalgebra::Vector3;
use spinstat_core::analytic::{branch_points, verify_corollary_with};
use spinstat_core::catalog;
use spinstat_core::field::{sample_momenta, verify_symmetries_with_tol, SYMMETRY_TOL};
use spinstat_core::quantization::{decide_statistics_with, QuantizationOptions, StatisticsVerdict};
use spinstat_core::spectrum::{energy, linspace, solve_generalized_eigenproblem};
use spinstat_core::{build, validate_spectrum, Error as CoreError, FieldSpec, Params};

use crate::error::{CliError, EXIT_INCONSISTENT, EXIT_OK};
use crate::report::*;
use crate::specfile::{load_spec, FileOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Check,
    Statistics,
    BranchPoints,
    Corollary,
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Statistics => "statistics",
            Command::BranchPoints => "branch-points",
            Command::Corollary => "corollary",
            Command::Report => "report",
        }
    }
}

/// Where the spec comes from and the command-line overrides.
#[derive(Clone, Debug, Default)]
pub struct Input {
    pub spec_path: Option<String>,
    pub catalog: Option<String>,
    pub two_j: Option<u32>,
    pub params: Params,
    pub tol: Option<f64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub sigma_two: Option<i32>,
    pub direction: Option<[f64; 3]>,
}

pub const DEFAULT_SAMPLES: usize = 8;
/// Grid for the spectral-reality scan.
pub const REALITY_GRID: (f64, f64, usize) = (0.0, 10.0, 401);

pub struct Resolved {
    pub spec: FieldSpec,
    pub echo: SpecEcho,
    pub run: RunEcho,
}

pub fn resolve(input: &Input) -> Result<Resolved, CliError> {
    let (spec, echo, file_opts) = match (&input.catalog, &input.spec_path) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "give either a spec file or --catalog, not both".into(),
            ))
        }
        (None, None) => {
            return Err(CliError::Usage(
                "a spec file or --catalog <name> is required".into(),
            ))
        }
        (Some(name), None) => {
            let entry = catalog::get(name, input.two_j, &input.params)?;
            let echo = echo_for(
                format!("catalog:{}", entry.name),
                &entry.spec,
                entry.spec.m_plus.to_string(),
                entry.spec.m_minus.to_string(),
                Some(entry.notes.to_string()),
            );
            (entry.spec, echo, FileOptions::default())
        }
        (None, Some(path)) => {
            if input.two_j.is_some() {
                return Err(CliError::Usage("--two-j applies to --catalog only".into()));
            }
            let loaded = load_spec(path, &input.params)?;
            let echo = echo_for(
                path.clone(),
                &loaded.spec,
                loaded.m_plus_text,
                loaded.m_minus_text,
                None,
            );
            (loaded.spec, echo, loaded.options)
        }
    };
    let run = RunEcho {
        seed: input.seed.or(file_opts.seed).unwrap_or(0),
        samples: input
            .samples
            .or(file_opts.samples)
            .unwrap_or(DEFAULT_SAMPLES)
            .max(1),
        tol: input.tol.or(file_opts.tol).unwrap_or(SYMMETRY_TOL),
    };
    Ok(Resolved { spec, echo, run })
}

fn echo_for(
    source: String,
    spec: &FieldSpec,
    m_plus_input: String,
    m_minus_input: String,
    notes: Option<String>,
) -> SpecEcho {
    SpecEcho {
        source,
        two_j: spec.two_j,
        m_plus: spec.m_plus.to_string(),
        m_minus: spec.m_minus.to_string(),
        m_plus_input,
        m_minus_input,
        params: spec
            .params
            .iter()
            .map(|(k, v)| (k.clone(), v.to_string()))
            .collect(),
        neutral: spec.neutral,
        notes,
    }
}

fn empty_report(command: Command, echo: SpecEcho, run: RunEcho) -> VerdictReport {
    VerdictReport {
        schema_version: SCHEMA_VERSION,
        command: command.name().to_string(),
        spec: echo,
        run,
        symmetry: None,
        spectrum: None,
        lambda: None,
        statistics: None,
        causality: None,
        branch_points: None,
        corollary: None,
        warnings: Vec::new(),
        error: None,
        exit_code: EXIT_OK,
    }
}

/// Runs `command`. A spec that cannot be loaded is an `Err`; failures during
/// the analysis are recorded in the returned report with its exit code.
pub fn run(command: Command, input: &Input) -> Result<VerdictReport, CliError> {
    let resolved = resolve(input)?;
    let mut report = empty_report(command, resolved.echo, resolved.run);
    if let Err(e) = execute(command, &resolved.spec, input, &mut report) {
        report.exit_code = e.exit_code();
        report.error = Some(e.to_string());
    }
    Ok(report)
}

fn execute(
    command: Command,
    spec: &FieldSpec,
    input: &Input,
    report: &mut VerdictReport,
) -> Result<(), CliError> {
    spec.validate()?;
    let field = build(spec.clone())?;
    let run = report.run.clone();
    let opts = QuantizationOptions {
        seed: run.seed,
        ..QuantizationOptions::default()
    };

    let checks = matches!(
        command,
        Command::Check | Command::Statistics | Command::Report
    );
    if checks {
        let reality = validate_spectrum(
            spec,
            &linspace(REALITY_GRID.0, REALITY_GRID.1, REALITY_GRID.2),
        );
        let reality_pass = reality.pass;
        if command != Command::Statistics {
            let samples = sample_momenta(run.samples, run.seed);
            let symmetry = verify_symmetries_with_tol(&field, &samples, run.tol)?;
            let sym_pass = symmetry.pass;
            report.symmetry = Some(symmetry);
            if !sym_pass {
                report.spectrum = Some(SpectrumSection {
                    reality,
                    samples: Vec::new(),
                    max_relative_error: 0.0,
                });
                return Err(CliError::Validation(
                    "symmetry residuals exceed tolerance".into(),
                ));
            }
        }
        let (samples, max_relative_error) = if reality_pass {
            spectrum_samples(spec, &field, run.samples, run.seed)?
        } else {
            (Vec::new(), 0.0)
        };
        report.spectrum = Some(SpectrumSection {
            reality,
            samples,
            max_relative_error,
        });
        if !reality_pass {
            return Err(CliError::Validation(
                "E^2 is negative on part of the real momentum axis".into(),
            ));
        }
        if max_relative_error > 1e-9 {
            return Err(CliError::Inconsistent(format!(
                "closed-form energies disagree with the eigenproblem by {max_relative_error:e}"
            )));
        }
    }

    if matches!(command, Command::Statistics | Command::Report) {
        let verdict = decide_statistics_with(spec, &opts)?;
        fill_statistics(report, verdict);
    }

    if matches!(
        command,
        Command::BranchPoints | Command::Report | Command::Corollary
    ) {
        let direction = input.direction.unwrap_or([0.0, 0.0, 1.0]);
        let direction = Vector3::new(direction[0], direction[1], direction[2]);
        let helicities: Vec<i32> = match input.sigma_two {
            Some(s) => vec![s],
            None => field.rep.helicities().collect(),
        };
        let reports = helicities
            .into_iter()
            .map(|s| branch_points(spec, s, &direction))
            .collect::<Result<Vec<_>, _>>()?;
        for r in &reports {
            if r.ambiguous {
                report.warnings.push(format!(
                    "2*sigma = {}: a branch candidate is numerically ambiguous (clustered roots or unconfirmed monodromy)",
                    r.sigma_two
                ));
            }
        }
        report.branch_points = Some(reports);
    }

    if matches!(command, Command::Corollary | Command::Report) {
        let c = verify_corollary_with(spec, &opts)?;
        let holds = c.holds;
        report.corollary = Some(CorollarySection {
            branch_points_exist: c.branch_points_exist,
            m_minus_nonzero: c.m_minus_nonzero,
            lambda_dimension: c.lambda_dimension,
            verdict: c.verdict,
            integer_spin: c.integer_spin,
            link_branch_implies_m_minus: c.link_branch_implies_m_minus,
            link_m_minus_implies_unique_lambda: c.link_m_minus_implies_unique_lambda,
            link_unique_lambda_implies_parity: c.link_unique_lambda_implies_parity,
            holds,
        });
        if !holds {
            report.exit_code = EXIT_INCONSISTENT;
            report.error = Some("corollary chain violated".into());
        }
    }
    Ok(())
}

/// Closed-form `E(σ)` paired with the positive eigenvalues of `Ω⁻¹M`, both
/// sorted, at each sample momentum.
fn spectrum_samples(
    spec: &FieldSpec,
    field: &spinstat_core::CanonicalField,
    count: usize,
    seed: u64,
) -> Result<(Vec<SpectrumSample>, f64), CliError> {
    let mut out = Vec::new();
    let mut worst: f64 = 0.0;
    for p in sample_momenta(count, seed) {
        let pm = p.norm();
        let mut closed = Vec::new();
        for s in field.rep.helicities() {
            match energy(spec, pm, s) {
                Ok(e) => closed.push((e, s)),
                Err(CoreError::NegativeEnergySquared { .. }) => {
                    return Err(CliError::Validation(format!("E^2 < 0 at |p| = {pm}")))
                }
                Err(e) => return Err(e.into()),
            }
        }
        closed.sort_by(|a, b| a.0.total_cmp(&b.0));
        let oracle = solve_generalized_eigenproblem(field, &p)?;
        let positive: Vec<f64> = oracle
            .iter()
            .rev()
            .take(closed.len())
            .map(|(e, _)| *e)
            .rev()
            .collect();
        for ((e, s), o) in closed.iter().zip(&positive) {
            worst = worst.max((e - o).abs() / e.abs().max(1.0));
            out.push(SpectrumSample {
                p: [p.x, p.y, p.z],
                sigma_two: *s,
                e_closed_form: *e,
                e_oracle: *o,
            });
        }
    }
    Ok((out, worst))
}

fn fill_statistics(report: &mut VerdictReport, verdict: StatisticsVerdict) {
    let lambda = &verdict.lambda;
    report.lambda = Some(LambdaSection {
        dimension: lambda.dimension,
        block_dim: report.spec.two_j as usize + 1,
        canonical: lambda
            .canonical
            .iter()
            .map(|c| LambdaBlocks::from(*c))
            .collect(),
        singular_values: lambda.singular_values.clone(),
        alignment_residual: lambda.alignment_residual,
    });
    let evidence: Vec<EvidenceSummary> = verdict
        .evidence
        .iter()
        .map(|e| EvidenceSummary {
            statistics: e.statistics,
            lambda: e.lambda.into(),
            fock_bounded: e.fock_bounded,
            fock_first_mode: e.fock_first_mode.clone(),
            causality_pass: e.causality.pass,
            causality_max_residual: e.causality.max_residual,
            admissible: e.admissible,
        })
        .collect();
    let chosen = &verdict.evidence[0];
    report.causality = Some(CausalitySection {
        statistics: chosen.statistics,
        pass: chosen.causality.pass,
        max_residual: chosen.causality.max_residual,
        wrong_choice_residual: (lambda.dimension == 1)
            .then(|| verdict.evidence[1].causality.max_residual),
    });
    report.statistics = Some(StatisticsSection {
        verdict: verdict.kind,
        modes: verdict.mode_coefficients,
        evidence,
    });
    report.warnings.extend(verdict.warnings);
}
