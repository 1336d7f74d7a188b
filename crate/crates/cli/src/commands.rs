//! One function per subcommand. Each returns a finished [`Report`]; nothing
//! here touches stdout or the process exit code.

use std::path::PathBuf;

use abel_core::abel::{abel_average, cesaro_average, power_iterate, riesz_projection_at_one, AbelParameter};
use abel_core::certify::generate::{
    generate_instance, numerical_range_instance, stable_generator, GeneratorConfig, InstanceKind,
};
use abel_core::certify::{
    cesaro_sup_estimate, check_power_growth, verify_equivalence, AlphaEvidence, SupEstimate, Tolerances, Witness,
};
use abel_core::linalg::operator_norm;
use abel_core::oscillator::{
    c_constant, eigen_residual, first_order_gap, gram_matrix, scaled_resolvent_power_gap, DiagonalOscillator,
};
use abel_core::semigroup::{
    abel_average_closed, abel_power_quadrature_detailed, discrete_bridge, ergodic_projection_continuous,
    relative_defect, GeneratorMatrix, QuadratureScheme, QuadratureSpec,
};
use abel_core::ComplexMatrix;

use crate::json::Json;
use crate::matrix_file::parse_matrix;
use crate::report::Report;
use crate::CliError;

pub const DEFAULT_ALPHAS: [f64; 3] = [0.1, 0.5, 0.9];

/// Where the operator matrix comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixSource {
    File(PathBuf),
    Generated { seed: u64, kind: String, dim: usize },
}

/// Extra generator families besides the three instance kinds.
pub const GENERATED_KINDS: [&str; 5] = ["holds", "jordan_at_one", "spectrum_escapes", "stable_generator", "numerical_range"];

impl MatrixSource {
    pub fn load(&self) -> Result<ComplexMatrix, CliError> {
        match self {
            MatrixSource::File(path) => parse_matrix(path),
            MatrixSource::Generated { seed, kind, dim } => generated_matrix(*seed, kind, *dim),
        }
    }

    fn describe(&self) -> Json {
        match self {
            MatrixSource::File(path) => Json::object([("file", Json::from(path.display().to_string()))]),
            MatrixSource::Generated { seed, kind, dim } => Json::object([
                ("seed", Json::from(*seed)),
                ("kind", Json::from(kind.as_str())),
                ("dim", Json::from(*dim)),
            ]),
        }
    }
}

pub fn generated_matrix(seed: u64, kind: &str, dim: usize) -> Result<ComplexMatrix, CliError> {
    if !(1..=abel_core::linalg::MAX_DIMENSION).contains(&dim) {
        return Err(CliError::Input(format!("dimension {dim} must be between 1 and {}", abel_core::linalg::MAX_DIMENSION)));
    }
    let config = GeneratorConfig::default();
    match kind {
        "stable_generator" => Ok(stable_generator(seed, dim, config.max_condition)),
        "numerical_range" => Ok(numerical_range_instance(seed, dim, 1.0 - 1e-3)?),
        other => {
            let kind = InstanceKind::from_tag(other).ok_or_else(|| {
                CliError::Input(format!("unknown kind {other:?}; expected one of {}", GENERATED_KINDS.join(", ")))
            })?;
            if dim < 2 {
                return Err(CliError::Input("structured instances need dimension at least 2".into()));
            }
            Ok(generate_instance(seed, kind, dim, &config).matrix)
        }
    }
}

fn parameters(alphas: &[AbelParameter]) -> Json {
    Json::Array(alphas.iter().map(|p| Json::from(p.value())).collect())
}

fn abel_parameters(values: &[f64]) -> Result<Vec<AbelParameter>, CliError> {
    values.iter().map(|&a| AbelParameter::new(a).map_err(CliError::from)).collect()
}

fn check_positive(name: &str, x: f64) -> Result<(), CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(CliError::Input(format!("--{name} must be positive and finite, got {x}")))
    }
}

fn witness_json(w: &Witness) -> Json {
    let mut fields = vec![("kind", Json::from(w.kind())), ("negative", Json::from(w.is_negative()))];
    match w {
        Witness::MaxRealPart(z) | Witness::OffendingEigenvalue(z) => fields.push(("eigenvalue", Json::complex(*z))),
        Witness::RankGap { at, first, second } => {
            fields.push(("at", Json::complex(*at)));
            fields.push(("rank_first", Json::from(*first)));
            fields.push(("rank_second", Json::from(*second)));
        }
        Witness::StackTest(msg) => fields.push(("detail", Json::from(msg.as_str()))),
        Witness::Divergence { alpha, reason, exponent } => {
            fields.push(("alpha", Json::from(*alpha)));
            fields.push(("reason", Json::from(reason.tag())));
            fields.push(("exponent", Json::from(*exponent)));
        }
        Witness::ResolventPole { alpha } => fields.push(("alpha", Json::from(*alpha))),
        Witness::LimitMismatch { alpha_a, alpha_b, distance } => {
            fields.push(("alpha_a", Json::from(*alpha_a)));
            fields.push(("alpha_b", Json::from(*alpha_b)));
            fields.push(("distance", Json::from(*distance)));
        }
        Witness::GrowthOverflow { n } => fields.push(("n", Json::from(*n))),
        Witness::SpectralRadius(r) => fields.push(("value", Json::from(*r))),
    }
    Json::object(fields)
}

fn evidence_json(e: &AlphaEvidence) -> Json {
    Json::object([
        ("alpha", Json::from(e.alpha)),
        ("converged", Json::from(e.converged)),
        ("resolvent_pole", Json::from(e.resolvent_pole)),
        ("steps", Json::from(e.steps)),
        ("final_increment", Json::from(e.final_increment)),
        ("divergence_reason", Json::from(e.divergence_reason.map(|r| r.tag()))),
    ])
}

fn sup_json(s: &SupEstimate) -> Json {
    Json::object([
        ("value", Json::from(s.value)),
        ("argmax", Json::from(s.argmax)),
        ("horizon", Json::from(s.horizon)),
        ("note", Json::from(SupEstimate::NOTE)),
    ])
}

#[derive(Debug, Clone)]
pub struct CertifyOptions {
    pub alphas: Vec<f64>,
    pub tol: f64,
    pub rank_tol: Option<f64>,
}

pub fn certify(source: &MatrixSource, opts: &CertifyOptions) -> Result<Report, CliError> {
    let t = source.load()?;
    let alphas = abel_parameters(if opts.alphas.is_empty() { &DEFAULT_ALPHAS } else { &opts.alphas })?;
    check_positive("tol", opts.tol)?;
    if let Some(r) = opts.rank_tol {
        check_positive("rank-tol", r)?;
    }
    let tol = Tolerances { rank_tol: opts.rank_tol, ..Tolerances::with_tol(opts.tol) };
    let report = verify_equivalence(&t, &alphas, &tol)?;
    let cert = &report.certificate;
    let ci = cert.condition_i.as_ref().expect("both conditions are always evaluated");
    let cii = cert.condition_ii.as_ref().expect("both conditions are always evaluated");

    let distance = match (&ci.limit, &cii.projection) {
        (Some(l), Some(p)) => Some(operator_norm(&(l - &p.matrix))),
        _ => None,
    };
    let results = Json::object([
        ("agree", Json::from(report.agree)),
        (
            "condition_i",
            Json::object([
                ("verdict", Json::from(ci.verdict.tag())),
                ("evidence", Json::Array(ci.evidence.iter().map(evidence_json).collect())),
                ("limit", ci.limit.as_ref().map_or(Json::Null, Json::matrix)),
            ]),
        ),
        (
            "condition_ii",
            Json::object([
                ("verdict", Json::from(cii.verdict.tag())),
                ("max_real_part", cii.max_real_part.map_or(Json::Null, Json::complex)),
                ("rank_first", Json::from(cii.rank_first)),
                ("rank_second", Json::from(cii.rank_second)),
                ("projection", cii.projection.as_ref().map_or(Json::Null, |p| Json::matrix(&p.matrix))),
                ("idempotency_defect", Json::from(cii.projection.as_ref().map(|p| p.idempotency_defect))),
            ]),
        ),
        ("limit_projection_distance", Json::from(distance)),
        ("witnesses", Json::Array(cert.witnesses().iter().map(witness_json).collect())),
    ]);
    let params = Json::object([
        ("source", source.describe()),
        ("alphas", parameters(&alphas)),
        ("tol", Json::from(tol.tol)),
        ("rank_tol", Json::from(tol.rank_tol_for(t.rows()))),
        ("max_doublings", Json::from(tol.max_doublings)),
        ("cluster_radius", Json::from(tol.cluster_radius)),
    ]);
    Ok(Report::new("certify", &t, params, results))
}

#[derive(Debug, Clone)]
pub struct AbelPowerOptions {
    pub alpha: f64,
    pub tol: f64,
    pub max_doublings: u32,
}

/// The report plus the convergence history `(2^k, ‖A^{2^{k+1}} − A^{2^k}‖)`.
pub fn abel_power(source: &MatrixSource, opts: &AbelPowerOptions) -> Result<(Report, Vec<(u64, f64)>), CliError> {
    let t = source.load()?;
    let p = AbelParameter::new(opts.alpha)?;
    check_positive("tol", opts.tol)?;
    let a = abel_average(&t, p)?;
    let conv = power_iterate(&a, opts.tol, opts.max_doublings)?;
    let history: Vec<Json> =
        conv.history.iter().map(|&(e, d)| Json::Array(vec![Json::from(e), Json::from(d)])).collect();
    let results = Json::object([
        ("average_norm", Json::from(operator_norm(&a))),
        ("converged", Json::from(conv.converged)),
        ("steps", Json::from(conv.steps)),
        ("divergence_reason", Json::from(conv.divergence_reason.map(|r| r.tag()))),
        ("limit", conv.limit.as_ref().map_or(Json::Null, Json::matrix)),
        ("history", Json::Array(history)),
    ]);
    let params = Json::object([
        ("source", source.describe()),
        ("alpha", Json::from(p.value())),
        ("tol", Json::from(opts.tol)),
        ("max_doublings", Json::from(opts.max_doublings)),
    ]);
    Ok((Report::new("abel-power", &t, params, results), conv.history))
}

#[derive(Debug, Clone)]
pub struct CesaroOptions {
    pub n: u64,
    /// Horizon of the `sup_N ‖C_N‖` sweep.
    pub sweep: u64,
    pub tol: f64,
    pub rank_tol: Option<f64>,
}

pub fn cesaro(source: &MatrixSource, opts: &CesaroOptions) -> Result<Report, CliError> {
    let t = source.load()?;
    if opts.n == 0 || opts.sweep == 0 {
        return Err(CliError::Input("--n and --sweep must be at least 1".into()));
    }
    check_positive("tol", opts.tol)?;
    let tol = Tolerances { rank_tol: opts.rank_tol, ..Tolerances::with_tol(opts.tol) };
    let rank_tol = tol.rank_tol_for(t.rows());
    // An unbounded power sequence makes the mean overflow; that is an answer
    // about T, so it is reported rather than raised.
    let mean = match cesaro_average(&t, opts.n) {
        Ok(m) => Some(m),
        Err(abel_core::Error::Overflow(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let projection = riesz_projection_at_one(&t, rank_tol).ok();
    let defect = match (&mean, &projection) {
        (Some(m), Some(p)) => Some(operator_norm(&(m - &p.matrix))),
        _ => None,
    };
    let sup = cesaro_sup_estimate(&t, opts.sweep.min(opts.n))?;
    let growth = check_power_growth(&t, opts.n.max(4), &tol)?;
    let results = Json::object([
        ("overflowed", Json::from(mean.is_none())),
        ("average", mean.as_ref().map_or(Json::Null, Json::matrix)),
        ("average_norm", Json::from(mean.as_ref().map(operator_norm))),
        ("projection", projection.as_ref().map_or(Json::Null, |p| Json::matrix(&p.matrix))),
        ("defect_to_projection", Json::from(defect)),
        ("sup_estimate", sup_json(&sup)),
        (
            "growth",
            Json::object([
                ("heuristic_holds", Json::from(growth.heuristic_holds)),
                ("exact_holds", Json::from(growth.exact_holds)),
                ("spectral_radius", Json::from(growth.spectral_radius)),
                (
                    "samples",
                    Json::Array(
                        growth.samples.iter().map(|&(n, v)| Json::Array(vec![Json::from(n), Json::from(v)])).collect(),
                    ),
                ),
                ("witnesses", Json::Array(growth.witnesses.iter().map(witness_json).collect())),
            ]),
        ),
    ]);
    let params = Json::object([
        ("source", source.describe()),
        ("n", Json::from(opts.n)),
        ("sweep", Json::from(opts.sweep.min(opts.n))),
        ("tol", Json::from(opts.tol)),
        ("rank_tol", Json::from(rank_tol)),
    ]);
    Ok(Report::new("cesaro", &t, params, results))
}

#[derive(Debug, Clone)]
pub struct SemigroupOptions {
    pub lambda: f64,
    pub n: u32,
    pub nodes: usize,
    pub t_max_factor: f64,
    pub scheme: String,
    pub tol: f64,
}

pub fn semigroup(source: &MatrixSource, opts: &SemigroupOptions) -> Result<Report, CliError> {
    let b = source.load()?;
    let g = GeneratorMatrix::new(b.clone())?;
    if opts.n == 0 {
        return Err(CliError::Input("--n must be at least 1".into()));
    }
    check_positive("tol", opts.tol)?;
    let scheme = QuadratureScheme::from_tag(&opts.scheme)
        .ok_or_else(|| CliError::Input(format!("unknown scheme {:?}", opts.scheme)))?;
    let spec = QuadratureSpec::new(opts.nodes, opts.t_max_factor, scheme)?;

    let closed = abel_average_closed(&g, opts.lambda)?;
    let first = abel_power_quadrature_detailed(&g, opts.lambda, 1, &spec)?;
    let power = abel_power_quadrature_detailed(&g, opts.lambda, opts.n, &spec)?;
    let product = closed.pow(opts.n as u64);
    let bridge = discrete_bridge(&g, opts.lambda)?;
    let ergodic = ergodic_projection_continuous(&g, opts.lambda, opts.tol)?;

    let results = Json::object([
        ("spectral_abscissa", Json::from(g.spectral_abscissa()?)),
        ("closed_form", Json::matrix(&closed)),
        (
            "quadrature",
            Json::object([
                ("relative_defect", Json::from(relative_defect(&first.value, &closed))),
                ("self_check_defect", Json::from(first.self_check_defect)),
                ("time_scale", Json::from(first.time_scale)),
            ]),
        ),
        (
            "power",
            Json::object([
                ("n", Json::from(opts.n)),
                ("relative_defect", Json::from(relative_defect(&power.value, &product))),
                ("self_check_defect", Json::from(power.self_check_defect)),
            ]),
        ),
        (
            "bridge",
            Json::object([
                ("alpha", Json::from(bridge.alpha)),
                ("defect", Json::from(bridge.defect)),
                ("relative_defect", Json::from(bridge.relative_defect)),
            ]),
        ),
        (
            "ergodic",
            Json::object([
                ("converged", Json::from(ergodic.convergence.converged)),
                ("divergence_reason", Json::from(ergodic.convergence.divergence_reason.map(|r| r.tag()))),
                ("limit", ergodic.convergence.limit.as_ref().map_or(Json::Null, Json::matrix)),
                ("kernel_defect", Json::from(ergodic.kernel_defect)),
                ("projects_onto_kernel", Json::from(ergodic.projects_onto_kernel)),
            ]),
        ),
    ]);
    let params = Json::object([
        ("source", source.describe()),
        ("lambda", Json::from(opts.lambda)),
        ("n", Json::from(opts.n)),
        ("nodes", Json::from(spec.node_count)),
        ("t_max_factor", Json::from(spec.t_max_factor)),
        ("scheme", Json::from(spec.scheme.tag())),
        ("tol", Json::from(opts.tol)),
    ]);
    Ok(Report::new("semigroup", &b, params, results))
}

#[derive(Debug, Clone)]
pub struct OscillatorOptions {
    pub lambda: f64,
    pub m: u32,
    pub truncation: usize,
    /// Hermite modes `0..=hermite_max` are checked on the grid.
    pub hermite_max: usize,
    pub half_width: f64,
    pub step: f64,
}

impl Default for OscillatorOptions {
    fn default() -> Self {
        Self { lambda: 2.0, m: 4, truncation: 10_000, hermite_max: 10, half_width: 12.0, step: 1e-3 }
    }
}

pub fn oscillator(opts: &OscillatorOptions) -> Result<Report, CliError> {
    let model = DiagonalOscillator::new(opts.truncation)?;
    let gap = scaled_resolvent_power_gap(&model, opts.lambda, opts.m)?;
    let first = first_order_gap(&model, opts.lambda)?;
    let c = c_constant(&model, opts.lambda)?;
    let residuals: Vec<Json> = (0..=opts.hermite_max)
        .map(|n| eigen_residual(n, opts.half_width, opts.step).map(|r| Json::Array(vec![Json::from(n), Json::from(r)])))
        .collect::<Result<_, _>>()?;
    let gram = gram_matrix(opts.hermite_max.min(9) + 1, opts.half_width, opts.step)?;
    let gram_defect = gram
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, v)| (v - if i == j { 1.0 } else { 0.0 }).abs()))
        .fold(0.0, f64::max);
    let results = Json::object([
        (
            "power_gap",
            Json::object([
                ("gap", Json::from(gap.gap)),
                ("closed_form", Json::from(gap.closed_form)),
                ("bound", Json::from(gap.bound)),
            ]),
        ),
        ("first_order_gap", Json::from(first)),
        (
            "c_constant",
            Json::object([
                ("value", Json::from(c.value)),
                ("partial_sum", Json::from(c.partial_sum)),
                ("tail_bound", Json::from(c.tail_bound)),
                ("uncertainty", Json::from(c.uncertainty)),
            ]),
        ),
        ("hermite_residuals", Json::Array(residuals)),
        ("gram_defect", Json::from(gram_defect)),
    ]);
    let params = Json::object([
        ("lambda", Json::from(opts.lambda)),
        ("m", Json::from(opts.m)),
        ("truncation", Json::from(opts.truncation)),
        ("hermite_max", Json::from(opts.hermite_max)),
        ("half_width", Json::from(opts.half_width)),
        ("step", Json::from(opts.step)),
    ]);
    Ok(Report::without_matrix("oscillator", params, results))
}
