//! Machine-readable decision reports.

use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::decision::{DecideOptions, Verdict};
use crate::error::Result;
use crate::essential::{
    classify_m4, decide_essential, demazure_residuals, is_essential, EssentialCandidate, EssentialDecision, EssentialWitness, M4Configuration,
};
use crate::fundamental::{
    build_reduced, classify_rank_one_kernel, decide_fundamental, six_point_generic, Certificate, FundamentalDecision, GeometricCertificate,
    WitnessF,
};
use crate::io::InputDocument;
use crate::linalg::RationalMatrix;
use crate::numeric::{matrix3, sigma_ratios};
use crate::projective::{collinearity_class, CollinearityClass, CorrespondenceSet};
use crate::rational::{format_rational, Rational};

pub const SCHEMA: &str = "epipolar-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Question {
    Fundamental,
    Essential,
    Both,
}

impl Question {
    fn fundamental(self) -> bool {
        self != Question::Essential
    }

    fn essential(self) -> bool {
        self != Question::Fundamental
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Problem {
    pub m: usize,
    /// `rank Z`, the number of independent constraints.
    pub rank: usize,
    pub selected_rows: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Geometry {
    pub x: CollinearityClass,
    pub y: CollinearityClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SixPoint {
    pub rows: Vec<usize>,
    pub witness: WitnessF,
}

/// Geometric classifiers that apply to the input size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    /// Present when `rank Z ∈ {6, 7}`; `certificate` is absent when the
    /// kernel is not forced into the rank-one variety by the geometry.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_one_kernel: Option<RankOneKernel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub six_point: Option<SixPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m4: Option<M4Configuration>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankOneKernel {
    pub certificate: Option<GeometricCertificate>,
}

/// Wall-clock milliseconds; only present on request.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Timings {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fundamental_ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub essential_ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub problem: Problem,
    pub geometry: Geometry,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fundamental: Option<FundamentalDecision>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub essential: Option<EssentialDecision>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<Classification>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64() * 1e3)
}

fn skeleton(doc: &InputDocument) -> Report {
    let pairs = &doc.correspondences;
    let reduced = build_reduced(pairs);
    Report {
        schema: SCHEMA.to_string(),
        name: doc.name.clone(),
        source: doc.source.clone(),
        problem: Problem { m: pairs.len(), rank: reduced.rank, selected_rows: reduced.selected_rows },
        geometry: Geometry { x: collinearity_class(&pairs.x_points()), y: collinearity_class(&pairs.y_points()) },
        fundamental: None,
        essential: None,
        classification: None,
        timings: None,
    }
}

/// Runs the requested decisions. Timings are recorded only when asked for,
/// so reports without them are reproducible byte for byte.
pub fn run_decide(doc: &InputDocument, question: Question, opts: &DecideOptions, with_timings: bool) -> Result<Report> {
    opts.validate()?;
    let pairs = &doc.correspondences;
    let mut report = skeleton(doc);
    let mut timings = Timings::default();
    if question.fundamental() {
        let (d, ms) = timed(|| decide_fundamental(pairs, opts));
        report.fundamental = Some(d?);
        timings.fundamental_ms = Some(ms);
    }
    if question.essential() {
        let (d, ms) = timed(|| decide_essential(pairs, opts));
        report.essential = Some(d?);
        timings.essential_ms = Some(ms);
    }
    report.timings = with_timings.then_some(timings);
    Ok(report)
}

pub fn run_classify(doc: &InputDocument, with_timings: bool) -> Result<Report> {
    let pairs = &doc.correspondences;
    let mut report = skeleton(doc);
    let (classification, ms) = timed(|| classify(pairs, report.problem.rank));
    report.classification = Some(classification?);
    report.timings = with_timings.then_some(Timings { classification_ms: Some(ms), ..Timings::default() });
    Ok(report)
}

fn classify(pairs: &CorrespondenceSet, rank: usize) -> Result<Classification> {
    let rank_one_kernel = match rank {
        6 | 7 => Some(RankOneKernel { certificate: classify_rank_one_kernel(pairs)? }),
        _ => None,
    };
    let six_point = match pairs.len() {
        6 => six_point_generic(pairs)?.map(|(rows, witness)| SixPoint { rows, witness }),
        _ => None,
    };
    let m4 = match pairs.len() {
        4 => classify_m4(pairs).ok(),
        _ => None,
    };
    Ok(Classification { rank_one_kernel, six_point, m4 })
}

impl Report {
    /// The verdict the exit code reflects: fundamental when present.
    pub fn primary_verdict(&self) -> Option<Verdict> {
        self.fundamental.as_ref().map(|d| d.verdict).or(self.essential.as_ref().map(|d| d.verdict))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    /// Human-readable rendering of the branch taken and its certificate.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.name {
            writeln!(out, "{name}").unwrap();
        }
        let p = &self.problem;
        writeln!(out, "m = {}, rank Z = {}, rows {:?}", p.m, p.rank, p.selected_rows).unwrap();
        writeln!(out, "geometry: x {:?}, y {:?}", self.geometry.x, self.geometry.y).unwrap();
        if let Some(f) = &self.fundamental {
            writeln!(out, "fundamental: {} via {}", enum_text(&f.verdict), enum_text(&f.branch)).unwrap();
            render_certificate(&mut out, &f.certificate);
            if let Some(w) = &f.witness {
                render_witness_f(&mut out, w);
            }
        }
        if let Some(e) = &self.essential {
            writeln!(out, "essential: {} via {}", enum_text(&e.verdict), enum_text(&e.case)).unwrap();
            if let Some(c) = &e.configuration {
                writeln!(out, "  relabeling {:?} of rows {:?}, views swapped: {}", c.permutation, e.rows.as_deref().unwrap_or(&[]), c.swapped).unwrap();
            }
            match &e.witness {
                Some(EssentialWitness::Homography { matrix }) => {
                    writeln!(out, "  homography certificate").unwrap();
                    render_matrix(&mut out, matrix);
                }
                Some(EssentialWitness::Essential { candidate, residual }) => {
                    writeln!(out, "  essential matrix (residual {residual:.3e})").unwrap();
                    match candidate {
                        EssentialCandidate::Exact(m) => render_matrix(&mut out, m),
                        EssentialCandidate::Numeric(m) => render_float(&mut out, &m.0),
                    }
                }
                None => {}
            }
            if !e.kernel.is_empty() {
                writeln!(out, "  kernel dimension {}", e.kernel.len()).unwrap();
            }
        }
        if let Some(c) = &self.classification {
            match &c.rank_one_kernel {
                Some(RankOneKernel { certificate: Some(cert) }) => writeln!(out, "rank-one kernel: {}", serde_json::to_string(cert).unwrap()).unwrap(),
                Some(RankOneKernel { certificate: None }) => writeln!(out, "rank-one kernel: no geometric certificate").unwrap(),
                None => {}
            }
            if let Some(s) = &c.six_point {
                writeln!(out, "six points in general position on rows {:?}", s.rows).unwrap();
                render_witness_f(&mut out, &s.witness);
            }
            if let Some(m4) = &c.m4 {
                writeln!(out, "four-point case {} (relabeling {:?}, swapped {})", m4.case, m4.permutation, m4.swapped).unwrap();
            }
        }
        if let Some(t) = &self.timings {
            for (label, v) in [("fundamental", t.fundamental_ms), ("essential", t.essential_ms), ("classification", t.classification_ms)] {
                if let Some(ms) = v {
                    writeln!(out, "{label}: {ms:.3} ms").unwrap();
                }
            }
        }
        out
    }
}

fn enum_text<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

fn render_certificate(out: &mut String, cert: &Certificate) {
    match cert {
        Certificate::EmptyKernel => writeln!(out, "  kernel is zero").unwrap(),
        Certificate::KernelPoint { rank } => writeln!(out, "  single kernel matrix of rank {rank}").unwrap(),
        Certificate::ZeroDeterminant { minor } => match minor {
            Some(w) => writeln!(out, "  det vanishes; minor rows {:?} cols {:?} nonzero at {:?}", w.minor.rows, w.minor.cols, fmt_entries(w.point.entries())).unwrap(),
            None => writeln!(out, "  det and every 2x2 minor vanish identically").unwrap(),
        },
        Certificate::NotACube { determinant, line } => {
            writeln!(out, "  det = {:?} is not a cube of a linear form", determinant.polynomial()).unwrap();
            writeln!(out, "  line {:?} + t {:?}", fmt_entries(line.base.entries()), fmt_entries(line.direction.entries())).unwrap();
        }
        Certificate::Cube { cube, dropped, minor, .. } => {
            writeln!(out, "  det = {} * ({:?} . u)^3", format_rational(&cube.scale), fmt_entries(cube.linear.entries())).unwrap();
            writeln!(out, "  restricted to the hyperplane, dropping basis elements {dropped:?}").unwrap();
            match minor {
                Some(w) => writeln!(out, "  minor rows {:?} cols {:?} nonzero at {:?}", w.minor.rows, w.minor.cols, fmt_entries(w.point.entries())).unwrap(),
                None => writeln!(out, "  every 2x2 minor vanishes on the hyperplane").unwrap(),
            }
        }
    }
}

fn render_witness_f(out: &mut String, w: &WitnessF) {
    match w {
        WitnessF::Exact { matrix } => {
            writeln!(out, "  witness (exact)").unwrap();
            render_matrix(out, matrix);
        }
        WitnessF::Numeric { matrix, sigma_ratios, residual } => {
            writeln!(out, "  witness (numeric, sigma ratios {:.3e} {:.3e}, residual {:.3e})", sigma_ratios[0], sigma_ratios[1], residual.unwrap_or(f64::NAN))
                .unwrap();
            render_float(out, &matrix.0);
        }
    }
}

fn fmt_entries(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn render_matrix(out: &mut String, m: &RationalMatrix) {
    for r in 0..m.rows() {
        writeln!(out, "    {}", fmt_entries(m.row(r).entries()).join("  ")).unwrap();
    }
}

fn render_float(out: &mut String, m: &nalgebra::Matrix3<f64>) {
    for r in 0..3 {
        writeln!(out, "    {:>12.6e} {:>12.6e} {:>12.6e}", m[(r, 0)], m[(r, 1)], m[(r, 2)]).unwrap();
    }
}

/// Checks of a user-supplied matrix against the correspondences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixCheck {
    pub rank: usize,
    #[serde(with = "residual_strings")]
    pub residuals: Vec<Rational>,
    pub satisfies: bool,
    pub sigma_ratios: [f64; 2],
    pub demazure_max: f64,
    /// Rank two and every constraint holds exactly.
    pub fundamental: bool,
    /// `fundamental`, and the Demazure and singular-value tests pass.
    pub essential: bool,
}

mod residual_strings {
    use super::{format_rational, Rational};
    use crate::rational::parse_rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?.iter().map(|t| parse_rational(t).map_err(serde::de::Error::custom)).collect()
    }
}

pub fn verify_matrix(pairs: &CorrespondenceSet, m: &RationalMatrix, opts: &DecideOptions) -> Result<MatrixCheck> {
    let rank = m.rank();
    let residuals = pairs.residuals(m);
    let satisfies = residuals.iter().all(num_traits::Zero::is_zero);
    let (r2, r3) = sigma_ratios(&matrix3(m));
    let candidate = EssentialCandidate::Exact(m.clone());
    let demazure_max = demazure_residuals(&candidate).max_abs();
    let fundamental = rank == 2 && satisfies;
    let essential = fundamental && is_essential(&candidate, opts.tol_rank)?;
    Ok(MatrixCheck { rank, residuals, satisfies, sigma_ratios: [r2, r3], demazure_max, fundamental, essential })
}
