//! Essential matrices: verification, and constructions for up to four pairs.

use nalgebra::{Matrix3, Vector3};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::decision::{DecideOptions, Verdict};
use crate::error::{GeometryError, Result};
use crate::fundamental::build_reduced;
use crate::linalg::{cross, RationalMatrix, RationalVector};
use crate::numeric::{epipolar_residual, matrix3, null_vector, singular_values, unit_max, vector3, FloatMatrix3};
use crate::projective::{collinear3, has_collinear_triple, line_normalizer, solve_projectivity, CorrespondenceSet, HomogeneousPoint};
use crate::rational::{to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "matrix", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EssentialCandidate {
    Exact(RationalMatrix),
    Numeric(FloatMatrix3),
}

impl EssentialCandidate {
    pub fn to_f64(&self) -> Matrix3<f64> {
        match self {
            EssentialCandidate::Exact(m) => matrix3(m),
            EssentialCandidate::Numeric(m) => m.0,
        }
    }
}

/// The nine entries of `2EEᵀE − tr(EEᵀ)E` (row-major) followed by `det E`,
/// for `E` scaled to unit max entry.
#[derive(Debug, Clone, PartialEq)]
pub enum DemazureResiduals {
    Exact(Vec<Rational>),
    Numeric(Vec<f64>),
}

impl DemazureResiduals {
    pub fn max_abs(&self) -> f64 {
        match self {
            DemazureResiduals::Exact(v) => v.iter().map(|q| to_f64(q).abs()).fold(0.0, f64::max),
            DemazureResiduals::Numeric(v) => v.iter().map(|x| x.abs()).fold(0.0, f64::max),
        }
    }

    /// Exact residuals must vanish identically; numeric ones must be below `tol`.
    pub fn vanish(&self, tol: f64) -> bool {
        match self {
            DemazureResiduals::Exact(v) => v.iter().all(Zero::is_zero),
            DemazureResiduals::Numeric(_) => self.max_abs() < tol,
        }
    }
}

pub fn demazure_residuals(e: &EssentialCandidate) -> DemazureResiduals {
    match e {
        EssentialCandidate::Exact(m) => {
            let s = m.max_abs();
            let m = if s.is_zero() { m.clone() } else { m.scale(&s.recip()) };
            let eet = m.matmul(&m.transpose());
            let cubic = eet.matmul(&m).scale(&Rational::from_integer(2.into())).sub(&m.scale(&eet.trace()));
            let mut out = cubic.entries().to_vec();
            out.push(m.det());
            DemazureResiduals::Exact(out)
        }
        EssentialCandidate::Numeric(m) => {
            let m = unit_max(&m.0);
            let eet = m * m.transpose();
            let cubic = 2.0 * eet * m - eet.trace() * m;
            let mut out: Vec<f64> = cubic.transpose().iter().copied().collect();
            out.push(m.determinant());
            DemazureResiduals::Numeric(out)
        }
    }
}

/// `σ₃/σ₁ < tol` and `(σ₁ − σ₂)/σ₁ < tol`; rational input must also satisfy
/// the cubic constraints exactly.
pub fn is_essential(e: &EssentialCandidate, tol: f64) -> Result<bool> {
    let m = e.to_f64();
    if matches!(e, EssentialCandidate::Exact(x) if x.is_zero()) || m.amax() == 0.0 {
        return Err(GeometryError::Contract("the zero matrix is not a candidate".into()));
    }
    let [s1, s2, s3] = singular_values(&unit_max(&m));
    let by_sigma = s3 / s1 < tol && (s1 - s2) / s1 < tol;
    Ok(match e {
        EssentialCandidate::Exact(_) => by_sigma && demazure_residuals(e).vanish(tol),
        EssentialCandidate::Numeric(_) => by_sigma,
    })
}

fn unit(v: &RationalVector) -> Vector3<f64> {
    vector3(v).normalize()
}

fn skew_f64(v: &Vector3<f64>) -> Matrix3<f64> {
    v.cross_matrix()
}

/// Rotation of least angle taking direction `a` to direction `b`; a half
/// turn when they are opposite.
fn rotation_between(a: &Vector3<f64>, b: &Vector3<f64>) -> Matrix3<f64> {
    let (a, b) = (a.normalize(), b.normalize());
    let v = a.cross(&b);
    let c = a.dot(&b);
    let s = v.norm();
    if s < 1e-15 {
        if c > 0.0 {
            return Matrix3::identity();
        }
        let helper = if a.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
        let k = a.cross(&helper).normalize();
        return 2.0 * k * k.transpose() - Matrix3::identity();
    }
    let vx = skew_f64(&v);
    Matrix3::identity() + vx + vx * vx * ((1.0 - c) / (s * s))
}

/// `E = [t]× R` for at most three pairs, with `R y₁`-aligning rotation and
/// `t` orthogonal to `yᵢ × R xᵢ` for the other pairs.
pub fn essential_m3(pairs: &CorrespondenceSet) -> Result<EssentialCandidate> {
    if pairs.len() > 3 {
        return Err(GeometryError::Contract(format!("expected at most 3 pairs, got {}", pairs.len())));
    }
    let p = pairs.pairs();
    let r = rotation_between(&unit(p[0].x.coords()), &unit(p[0].y.coords()));
    let constraints: Vec<Vector3<f64>> = p[1..].iter().map(|c| unit(c.y.coords()).cross(&(r * unit(c.x.coords())))).collect();
    let nonzero: Vec<&Vector3<f64>> = constraints.iter().filter(|c| c.norm() > 1e-12).collect();
    let t = match nonzero.as_slice() {
        [] => Vector3::z(),
        [c] => null_vector(&Matrix3::from_rows(&[c.transpose(), Vector3::zeros().transpose(), Vector3::zeros().transpose()])),
        [c2, c3] => {
            let t = c2.cross(c3);
            if t.norm() > 1e-8 * c2.norm() * c3.norm() {
                t.normalize()
            } else {
                null_vector(&Matrix3::from_rows(&[c2.transpose(), c3.transpose(), Vector3::zeros().transpose()]))
            }
        }
        _ => unreachable!("at most two constraints"),
    };
    Ok(EssentialCandidate::Numeric(FloatMatrix3(unit_max(&(skew_f64(&t) * r)))))
}

/// Which construction applies to four pairs, after relabeling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct M4Configuration {
    pub case: u8,
    /// Relabeled pair `k` is input pair `permutation[k]`.
    pub permutation: [usize; 4],
    /// Whether the views were exchanged before relabeling.
    pub swapped: bool,
}

impl M4Configuration {
    pub fn apply(&self, pairs: &CorrespondenceSet) -> CorrespondenceSet {
        let relabeled = pairs.subset(&self.permutation);
        if self.swapped {
            relabeled.swapped()
        } else {
            relabeled
        }
    }
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in (0..4).filter(|&b| b != a) {
            for c in (0..4).filter(|&c| c != a && c != b) {
                out.push([a, b, c, 6 - a - b - c]);
            }
        }
    }
    out
}

fn case_matches(case: u8, x: &[HomogeneousPoint], y: &[HomogeneousPoint]) -> bool {
    let coords = |pts: &[HomogeneousPoint]| pts.iter().map(|p| p.coords().clone()).collect::<Vec<_>>();
    let (xc, yc) = (coords(x), coords(y));
    let general = |c: &[RationalVector]| !has_collinear_triple(&c.iter().collect::<Vec<_>>());
    match case {
        1 => general(&xc) && general(&yc),
        2 => general(&xc) && collinear3(&y[0], &y[1], &y[2]),
        3 => {
            collinear3(&x[0], &x[1], &x[2])
                && !collinear3(&x[0], &x[1], &x[3])
                && collinear3(&y[0], &y[1], &y[2])
                && !collinear3(&y[0], &y[1], &y[3])
        }
        4 => collinear3(&x[0], &x[1], &x[2]) && collinear3(&y[1], &y[2], &y[3]),
        _ => false,
    }
}

fn distinct(points: &[HomogeneousPoint]) -> bool {
    (0..points.len()).all(|i| (i + 1..points.len()).all(|j| points[i] != points[j]))
}

/// First case (1 to 4) that holds after relabeling, trying the unswapped
/// views before the swapped ones and permutations in lexicographic order.
pub fn classify_m4(pairs: &CorrespondenceSet) -> Result<M4Configuration> {
    if pairs.len() != 4 {
        return Err(GeometryError::Contract(format!("expected 4 pairs, got {}", pairs.len())));
    }
    if !distinct(&pairs.x_points()) || !distinct(&pairs.y_points()) {
        return Err(GeometryError::Degenerate("points within a view must be distinct".into()));
    }
    let perms = permutations4();
    for case in 1..=4 {
        for swapped in [false, true] {
            for &permutation in &perms {
                let config = M4Configuration { case, permutation, swapped };
                let r = config.apply(pairs);
                if case_matches(case, &r.x_points(), &r.y_points()) {
                    return Ok(config);
                }
            }
        }
    }
    Err(GeometryError::Contract("no case matched four distinct pairs".into()))
}

/// Rank ≥ 2 and, for every pair, `yᵢ ∼ H xᵢ` or `H xᵢ = 0`.
pub fn certificate_from_h(pairs: &CorrespondenceSet, h: &RationalMatrix) -> bool {
    (h.rows(), h.cols()) == (3, 3)
        && h.rank() >= 2
        && pairs.pairs().iter().all(|c| {
            let hx = h.mul_vec(c.x.coords());
            hx.is_zero() || cross(c.y.coords(), &hx).is_zero()
        })
}

fn frame() -> [RationalVector; 4] {
    [
        RationalVector::from_ints(&[1, 1, 1]),
        RationalVector::from_ints(&[0, 0, 1]),
        RationalVector::from_ints(&[0, 1, 0]),
        RationalVector::from_ints(&[1, 0, 0]),
    ]
}

/// Second affine coordinate of `G p`; `G` maps the relevant line to `{first = 0}`.
fn line_coordinate(g: &RationalMatrix, p: &HomogeneousPoint) -> Rational {
    g.mul_vec(p.coords())[1].clone()
}

fn case1(r: &CorrespondenceSet) -> Result<RationalMatrix> {
    let p = r.pairs();
    solve_projectivity(&std::array::from_fn(|i| (p[i].x.coords().clone(), p[i].y.coords().clone())))
}

/// `H = H₂⁻¹ H₃ H₁`: `H₁` sends the x's to the standard frame, `H₂` puts
/// `y₁, y₂, y₃` at `(0,0), (0,α), (0,β)`, and `H₃` kills the image of `x₄`.
fn case2(r: &CorrespondenceSet) -> Result<RationalMatrix> {
    let p = r.pairs();
    let f = frame();
    let h1 = solve_projectivity(&std::array::from_fn(|i| (p[i].x.coords().clone(), f[i].clone())))?;
    let ys = r.y_points();
    let h2 = line_normalizer(&ys[..3], &ys[0])?;
    let alpha = line_coordinate(&h2, &ys[1]);
    let beta = line_coordinate(&h2, &ys[2]);
    let ab = &alpha * &beta;
    let z = Rational::zero;
    let h3 = RationalMatrix::from_vec(3, 3, vec![z(), z(), z(), z(), -ab.clone(), ab, z(), -alpha, beta])?;
    Ok(h2.inverse()?.matmul(&h3).matmul(&h1))
}

/// Closed-form `H` in coordinates where `x₁, x₂, x₃ = (0,0), (0,α), (0,β)`
/// and `y₁, y₂, y₃ = (0,0), (0,γ), (0,δ)`, conjugated back by the normalizers.
fn case3(r: &CorrespondenceSet) -> Result<RationalMatrix> {
    let (xs, ys) = (r.x_points(), r.y_points());
    let gx = line_normalizer(&xs[..3], &xs[0])?;
    let gy = line_normalizer(&ys[..3], &ys[0])?;
    let (a, b) = (line_coordinate(&gx, &xs[1]), line_coordinate(&gx, &xs[2]));
    let (g, d) = (line_coordinate(&gy, &ys[1]), line_coordinate(&gy, &ys[2]));
    let x4 = gx.mul_vec(xs[3].coords());
    let y4 = gy.mul_vec(ys[3].coords());
    let h = case3_normalized(&[a, b, g, d], (&x4[0], &x4[1]), (&y4[0], &y4[1]));
    Ok(gy.inverse()?.matmul(&h).matmul(&gx))
}

pub(crate) fn case3_normalized(
    [a, b, g, d]: &[Rational; 4],
    (x41, x42): (&Rational, &Rational),
    (y41, y42): (&Rational, &Rational),
) -> RationalMatrix {
    let h11 = (a - x42) * b * g * y41 - (b - x42) * a * d * y41;
    let h21 = -(a * x42 * g * d) + b * x42 * g * d + a * b * g * y42 - b * x42 * g * y42 - a * b * d * y42 + a * x42 * d * y42;
    let h22 = (a - b) * x41 * g * d;
    let h32 = (a * d - b * g) * x41;
    let h33 = (g - d) * x41 * a * b;
    let z = Rational::zero;
    RationalMatrix::from_vec(3, 3, vec![h11, z(), z(), h21, h22, z(), z(), h32, h33]).expect("3x3")
}

/// `E = [y₄]× R` with `R` taking the plane of the x-line to the plane of the
/// y-line and `x₁` to `y₄`.
fn case4(r: &CorrespondenceSet) -> Matrix3<f64> {
    let (xs, ys) = (r.x_points(), r.y_points());
    let v = |p: &HomogeneousPoint| vector3(p.coords());
    let frame = |anchor: Vector3<f64>, other: Vector3<f64>| {
        let a = anchor.normalize();
        let normal = anchor.cross(&other);
        let u = normal.cross(&anchor).normalize();
        Matrix3::from_columns(&[a, u, a.cross(&u)])
    };
    let u = frame(v(&xs[0]), v(&xs[1]));
    let w = frame(v(&ys[3]), v(&ys[1]));
    let rot = w * u.transpose();
    skew_f64(&v(&ys[3])) * rot
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EssentialCase {
    #[serde(rename = "M_LE_3")]
    MLe3,
    #[serde(rename = "M4_CASE1")]
    M4Case1,
    #[serde(rename = "M4_CASE2")]
    M4Case2,
    #[serde(rename = "M4_CASE3")]
    M4Case3,
    #[serde(rename = "M4_CASE4")]
    M4Case4,
    #[serde(rename = "M8_POINT")]
    M8Point,
    #[serde(rename = "M9_EMPTY")]
    M9Empty,
    #[serde(rename = "RANGE_5_7")]
    Range5To7,
    #[serde(rename = "HYPOTHESIS_VIOLATED")]
    HypothesisViolated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EssentialWitness {
    Essential { candidate: EssentialCandidate, residual: f64 },
    /// `H` of rank ≥ 2 with `yᵢ ∼ H xᵢ` or `H xᵢ = 0` on the relabeled pairs.
    Homography { matrix: RationalMatrix },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EssentialDecision {
    pub verdict: Verdict,
    pub case: EssentialCase,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<EssentialWitness>,
    /// Input pairs used by the four-pair constructions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<usize>>,
    /// Relabeling of `rows`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub configuration: Option<M4Configuration>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub kernel: Vec<RationalVector>,
}

impl EssentialDecision {
    fn new(verdict: Verdict, case: EssentialCase) -> Self {
        EssentialDecision { verdict, case, witness: None, rows: None, configuration: None, kernel: Vec::new() }
    }

    /// Re-checks the attached witness against the input pairs.
    pub fn verify(&self, pairs: &CorrespondenceSet, opts: &DecideOptions) -> bool {
        match &self.witness {
            None => self.verdict != Verdict::Exists,
            Some(EssentialWitness::Essential { candidate, .. }) => {
                let exact_ok = match candidate {
                    EssentialCandidate::Exact(m) => pairs.satisfies(m),
                    EssentialCandidate::Numeric(_) => true,
                };
                exact_ok
                    && epipolar_residual(pairs, &candidate.to_f64()) < opts.tol_res
                    && is_essential(candidate, opts.tol_rank).unwrap_or(false)
            }
            Some(EssentialWitness::Homography { matrix }) => match (&self.rows, &self.configuration) {
                (Some(rows), Some(config)) => certificate_from_h(&config.apply(&pairs.subset(rows)), matrix),
                _ => false,
            },
        }
    }
}

/// Construction for four pairs with distinct points in each view.
pub fn essential_m4(pairs: &CorrespondenceSet) -> Result<EssentialDecision> {
    if pairs.len() != 4 {
        return Err(GeometryError::Contract(format!("expected 4 pairs, got {}", pairs.len())));
    }
    let config = match classify_m4(pairs) {
        Ok(c) => c,
        Err(GeometryError::Degenerate(_)) => return Ok(EssentialDecision::new(Verdict::Undecided, EssentialCase::HypothesisViolated)),
        Err(e) => return Err(e),
    };
    let r = config.apply(pairs);
    let (case, witness) = match config.case {
        1 => (EssentialCase::M4Case1, EssentialWitness::Homography { matrix: case1(&r)? }),
        2 => (EssentialCase::M4Case2, EssentialWitness::Homography { matrix: case2(&r)? }),
        3 => (EssentialCase::M4Case3, EssentialWitness::Homography { matrix: case3(&r)? }),
        _ => {
            let e = case4(&r);
            let e = unit_max(&if config.swapped { e.transpose() } else { e });
            let residual = epipolar_residual(pairs, &e);
            (EssentialCase::M4Case4, EssentialWitness::Essential { candidate: EssentialCandidate::Numeric(FloatMatrix3(e)), residual })
        }
    };
    if let EssentialWitness::Homography { matrix } = &witness {
        if !certificate_from_h(&r, matrix) {
            return Err(GeometryError::Contract(format!("case {} homography failed verification", config.case)));
        }
    }
    Ok(EssentialDecision {
        verdict: Verdict::Exists,
        case,
        witness: Some(witness),
        rows: Some((0..4).collect()),
        configuration: Some(config),
        kernel: Vec::new(),
    })
}

/// Four input rows spanning the row space of `Z` with distinct points per
/// view: the selected rows first, then other four-subsets in lexicographic order.
fn admissible_quadruple(pairs: &CorrespondenceSet, selected: &[usize]) -> Option<Vec<usize>> {
    let ok = |rows: &[usize]| {
        let s = pairs.subset(rows);
        distinct(&s.x_points()) && distinct(&s.y_points()) && s.z_matrix().rank() == 4
    };
    if ok(selected) {
        return Some(selected.to_vec());
    }
    let n = pairs.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let rows = [a, b, c, d];
                    if ok(&rows) {
                        return Some(rows.to_vec());
                    }
                }
            }
        }
    }
    None
}

pub fn decide_essential(pairs: &CorrespondenceSet, opts: &DecideOptions) -> Result<EssentialDecision> {
    opts.validate()?;
    let reduced = build_reduced(pairs);
    let decision = match reduced.rank {
        9 => EssentialDecision::new(Verdict::NotExists, EssentialCase::M9Empty),
        8 => {
            let e = EssentialCandidate::Exact(RationalMatrix::from_vec9(&reduced.kernel[0]));
            if demazure_residuals(&e).vanish(0.0) {
                let mut d = EssentialDecision::new(Verdict::Exists, EssentialCase::M8Point);
                d.witness = Some(EssentialWitness::Essential { residual: 0.0, candidate: e });
                d
            } else {
                EssentialDecision::new(Verdict::NotExists, EssentialCase::M8Point)
            }
        }
        5..=7 => EssentialDecision { kernel: reduced.kernel.clone(), ..EssentialDecision::new(Verdict::Undecided, EssentialCase::Range5To7) },
        4 => match admissible_quadruple(pairs, &reduced.selected_rows) {
            None => EssentialDecision::new(Verdict::Undecided, EssentialCase::HypothesisViolated),
            Some(rows) => {
                let mut d = essential_m4(&pairs.subset(&rows))?;
                if let Some(EssentialWitness::Essential { residual, candidate }) = &mut d.witness {
                    *residual = epipolar_residual(pairs, &candidate.to_f64());
                }
                d.rows = Some(rows);
                d
            }
        },
        _ => {
            let candidate = essential_m3(&reduced.selected_pairs(pairs))?;
            let residual = epipolar_residual(pairs, &candidate.to_f64());
            let mut d = EssentialDecision::new(Verdict::Exists, EssentialCase::MLe3);
            d.witness = Some(EssentialWitness::Essential { candidate, residual });
            d
        }
    };
    if decision.verdict == Verdict::Exists && !decision.verify(pairs, opts) {
        return Err(GeometryError::Contract(format!("essential witness failed verification: {:?}", decision.witness)));
    }
    Ok(decision)
}

/// Rational rotation `(I − S)⁻¹(I + S)` for `S = [s]×`.
pub fn cayley_rotation(s: &RationalVector) -> RationalMatrix {
    let k = crate::linalg::skew(s).expect("length 3");
    let i = RationalMatrix::identity(3);
    i.sub(&k).inverse().expect("I − S is invertible for skew S").matmul(&i.add(&k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::skew;
    use crate::rational::{rat, ratio};

    fn exact(rows: &[[i64; 3]]) -> EssentialCandidate {
        EssentialCandidate::Exact(RationalMatrix::from_ints(rows))
    }

    #[test]
    fn demazure_of_skew_and_identity() {
        let e = EssentialCandidate::Exact(skew(&RationalVector::from_ints(&[0, 0, 1])).unwrap());
        assert!(demazure_residuals(&e).vanish(0.0));
        let DemazureResiduals::Exact(r) = demazure_residuals(&exact(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]])) else { unreachable!() };
        let expected: Vec<Rational> = [-1, 0, 0, 0, -1, 0, 0, 0, -1, 1].iter().map(|&v| rat(v)).collect();
        assert_eq!(r, expected);
    }

    #[test]
    fn essential_examples() {
        let t = skew(&RationalVector::from_ints(&[1, 2, 3])).unwrap();
        assert!(is_essential(&EssentialCandidate::Exact(t), 1e-9).unwrap());
        assert!(!is_essential(&exact(&[[2, 0, 0], [0, 1, 0], [0, 0, 0]]), 1e-9).unwrap());
        assert!(!is_essential(&exact(&[[1, 2, 0], [0, 1, 4], [5, 0, 1]]), 1e-9).unwrap());
        assert!(is_essential(&exact(&[[0, 0, 0], [0, 0, 0], [0, 0, 0]]), 1e-9).is_err());
    }

    #[test]
    fn skew_times_cayley_rotation_is_essential() {
        let r = cayley_rotation(&RationalVector::new(vec![ratio(1, 2), rat(-1), ratio(2, 3)]));
        assert_eq!(r.matmul(&r.transpose()), RationalMatrix::identity(3));
        assert_eq!(r.det(), rat(1));
        let e = skew(&RationalVector::from_ints(&[3, -1, 2])).unwrap().matmul(&r);
        let e = EssentialCandidate::Exact(e);
        assert!(demazure_residuals(&e).vanish(0.0));
        assert!(is_essential(&e, 1e-9).unwrap());
    }

    fn check_m3(c: &CorrespondenceSet) -> Matrix3<f64> {
        let e = essential_m3(c).unwrap();
        assert!(epipolar_residual(c, &e.to_f64()) < 1e-10);
        assert!(is_essential(&e, 1e-9).unwrap());
        e.to_f64()
    }

    #[test]
    fn m3_single_pair_at_origin() {
        let e = check_m3(&CorrespondenceSet::from_ints(&[[0, 0, 0, 0]]));
        let expected = Matrix3::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        assert!((e - expected).amax() < 1e-12);
    }

    #[test]
    fn m3_identical_views_and_random_points() {
        check_m3(&CorrespondenceSet::from_ints(&[[1, 2, 1, 2], [3, -1, 3, -1], [0, 5, 0, 5]]));
        check_m3(&CorrespondenceSet::from_ints(&[[1, 2, 7, -3], [3, -1, 0, 4], [-2, 5, 6, 6]]));
        check_m3(&CorrespondenceSet::from_ints(&[[1, 2, 7, -3], [3, -1, 0, 4]]));
    }

    #[test]
    fn classify_examples() {
        let general = CorrespondenceSet::from_ints(&[[0, 0, 0, 0], [1, 0, 2, 1], [0, 1, 1, 3], [3, 2, 5, 4]]);
        assert_eq!(classify_m4(&general).unwrap(), M4Configuration { case: 1, permutation: [0, 1, 2, 3], swapped: false });

        let case2 = CorrespondenceSet::from_ints(&[[0, 0, 0, 0], [1, 0, 1, 1], [0, 1, 2, 2], [3, 2, 5, 1]]);
        let c = classify_m4(&case2).unwrap();
        assert_eq!((c.case, c.swapped), (2, false));

        let case3 = CorrespondenceSet::from_ints(&[[0, 0, 0, 0], [0, 1, 0, 1], [0, 2, 0, 3], [1, 1, 2, 1]]);
        assert_eq!(classify_m4(&case3).unwrap(), M4Configuration { case: 3, permutation: [0, 1, 2, 3], swapped: false });

        let repeated = CorrespondenceSet::from_ints(&[[0, 0, 0, 0], [0, 0, 1, 1], [0, 2, 0, 3], [1, 1, 2, 1]]);
        assert!(matches!(classify_m4(&repeated), Err(GeometryError::Degenerate(_))));
    }

    #[test]
    fn case3_closed_form_scalars() {
        // already normalized: α = 1, β = 2, γ = 1, δ = 3, x₄ = (1, 1), y₄ = (2, 1)
        let c = CorrespondenceSet::from_ints(&[[0, 0, 0, 0], [0, 1, 0, 1], [0, 2, 0, 3], [1, 1, 2, 1]]);
        let (a, b, g, d) = (rat(1), rat(2), rat(1), rat(3));
        let (x41, x42) = (rat(1), rat(1));
        let h = case3_normalized(&[a.clone(), b.clone(), g.clone(), d.clone()], (&x41, &x42), (&rat(2), &rat(1)));
        assert_eq!(h, RationalMatrix::from_ints(&[[-6, 0, 0], [0, -3, 0], [0, 1, -4]]));
        let factors = [
            &a * &b * &x41 * (&g - &d),
            &a * &d * &x41 * (&a - &b),
            &b * &g * &x41 * (&a - &b),
            &x41 * (&b * &g * (&a - &x42) - &a * &d * (&b - &x42)),
        ];
        for (p, f) in c.pairs().iter().zip(factors) {
            assert_eq!(h.mul_vec(p.x.coords()), p.y.coords().scale(&f));
        }
        let dec = essential_m4(&c).unwrap();
        assert_eq!(dec.case, EssentialCase::M4Case3);
        let Some(EssentialWitness::Homography { matrix }) = &dec.witness else { panic!("expected a homography") };
        assert!(certificate_from_h(&c, matrix));
        assert_eq!(matrix.vectorize().normalized_leading(), h.vectorize().normalized_leading());
    }

    #[test]
    fn case2_and_case4_constructions() {
        let case2 = CorrespondenceSet::from_ints(&[[0, 0, 0, 0], [1, 0, 1, 1], [0, 1, 2, 2], [3, 2, 5, 1]]);
        let d = essential_m4(&case2).unwrap();
        assert_eq!(d.case, EssentialCase::M4Case2);
        assert!(d.verify(&case2, &DecideOptions::default()));

        // x₁x₂x₃ on a line, y₂y₃y₄ on a line, no other triples
        let case4 = CorrespondenceSet::from_ints(&[[0, 0, 3, 5], [1, 1, 0, 0], [2, 2, 1, 2], [5, -1, 2, 4]]);
        let d = essential_m4(&case4).unwrap();
        assert_eq!(d.case, EssentialCase::M4Case4);
        let Some(EssentialWitness::Essential { candidate, residual }) = &d.witness else { panic!("expected an essential matrix") };
        assert!(*residual < 1e-9);
        assert!(is_essential(candidate, 1e-9).unwrap());
    }

    #[test]
    fn certificate_examples() {
        let same = CorrespondenceSet::from_ints(&[[1, 2, 1, 2], [0, 0, 0, 0], [5, -3, 5, -3]]);
        assert!(certificate_from_h(&same, &RationalMatrix::identity(3)));
        let rank1 = RationalMatrix::from_ints(&[[1, 0, 0], [0, 0, 0], [0, 0, 0]]);
        assert!(!certificate_from_h(&same, &rank1));
    }

    #[test]
    fn eight_rank_kernel_point_is_essential() {
        // y ∥ x as plane vectors puts [e₃]× in the kernel
        let c = CorrespondenceSet::from_ints(&[
            [1, 2, 2, 4],
            [3, 1, -3, -1],
            [2, 5, 4, 10],
            [1, -1, 3, -3],
            [4, 3, 8, 6],
            [5, 2, -5, -2],
            [1, 4, 2, 8],
            [3, 3, 1, 1],
        ]);
        let r = build_reduced(&c);
        assert_eq!(r.rank, 8);
        let d = decide_essential(&c, &DecideOptions::default()).unwrap();
        assert_eq!((d.verdict, d.case), (Verdict::Exists, EssentialCase::M8Point));
    }

    #[test]
    fn five_pairs_are_undecided() {
        let c = CorrespondenceSet::from_ints(&[[3, 0, 2, 0], [9, 1, 5, 4], [1, 2, 9, 6], [8, 8, 2, 5], [4, 8, 1, 4]]);
        let d = decide_essential(&c, &DecideOptions::default()).unwrap();
        assert_eq!((d.verdict, d.case, d.kernel.len()), (Verdict::Undecided, EssentialCase::Range5To7, 4));
    }

    #[test]
    fn four_generic_pairs_use_case1() {
        let c = CorrespondenceSet::from_ints(&[[0, 0, 1, 1], [1, 0, 4, 2], [0, 1, 2, 5], [3, 2, 7, 4]]);
        let d = decide_essential(&c, &DecideOptions::default()).unwrap();
        assert_eq!((d.verdict, d.case), (Verdict::Exists, EssentialCase::M4Case1));
    }
}
