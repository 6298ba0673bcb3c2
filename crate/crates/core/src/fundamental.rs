//! Deciding whether the kernel of the constraint matrix `Z` contains a real
//! matrix of rank exactly two.

use nalgebra::Matrix3;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::decision::{DecideOptions, Verdict};
use crate::error::{GeometryError, Result};
use crate::forms::{cube_of_linear, det_pencil, minor2_witness, restrict_pencil, CubicForm, LinearFormCube, MinorWitness, Pencil};
use crate::linalg::{cross, independent_rows, skew, RationalMatrix, RationalVector};
use crate::numeric::{epipolar_residual, matrix3, sigma_ratios, unit_max, FloatMatrix3};
use crate::poly::{find_nonvanishing_point, Polynomial};
use crate::projective::{collinearity_class, has_collinear_triple, solve_projectivity, CollinearityClass, Correspondence, CorrespondenceSet, HomogeneousPoint};
use crate::rational::{rat, Rational};
use crate::univariate::{real_roots, refine, RealRoot, UniPoly};

/// `Z` restricted to a maximal independent set of rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedProblem {
    pub z: RationalMatrix,
    /// Indices into the original pairs, ascending.
    pub selected_rows: Vec<usize>,
    /// `rank(Z)`, the number of selected rows.
    pub rank: usize,
    /// Canonical basis of `ker Z`.
    pub kernel: Vec<RationalVector>,
}

impl ReducedProblem {
    pub fn selected_pairs(&self, pairs: &CorrespondenceSet) -> CorrespondenceSet {
        pairs.subset(&self.selected_rows)
    }
}

/// Keeps the lexicographically first maximal independent set of rows `yᵢᵀ ⊗ xᵢᵀ`.
pub fn build_reduced(pairs: &CorrespondenceSet) -> ReducedProblem {
    let rows: Vec<RationalVector> = pairs.pairs().iter().map(Correspondence::kronecker_row).collect();
    let selected_rows = independent_rows(&rows);
    let z = RationalMatrix::from_rows(&selected_rows.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>());
    let kernel = z.kernel_basis();
    ReducedProblem { rank: selected_rows.len(), z, selected_rows, kernel }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Branch {
    M9Empty,
    M8Point,
    DzeroMinor,
    DzeroNoMinor,
    NotACube,
    CubeMinor,
    CubeNoMinor,
}

/// A matrix of rank two in the kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WitnessF {
    /// Scaled so the first nonzero entry is 1.
    Exact { matrix: RationalMatrix },
    /// Scaled to unit max entry.
    Numeric {
        matrix: FloatMatrix3,
        sigma_ratios: [f64; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        residual: Option<f64>,
    },
}

impl WitnessF {
    pub fn exact(m: &RationalMatrix) -> Self {
        WitnessF::Exact { matrix: RationalMatrix::from_vec9(&m.vectorize().normalized_leading()) }
    }

    pub fn numeric(m: &Matrix3<f64>) -> Self {
        let m = unit_max(m);
        let (r2, r3) = sigma_ratios(&m);
        WitnessF::Numeric { matrix: FloatMatrix3(m), sigma_ratios: [r2, r3], residual: None }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, WitnessF::Exact { .. })
    }

    pub fn to_f64(&self) -> Matrix3<f64> {
        match self {
            WitnessF::Exact { matrix } => matrix3(matrix),
            WitnessF::Numeric { matrix, .. } => matrix.0,
        }
    }

    /// Exact: rank two and every constraint holds exactly. Numeric: the
    /// σ-ratio gap and residual bound hold.
    pub fn verify(&self, pairs: &CorrespondenceSet, opts: &DecideOptions) -> bool {
        match self {
            WitnessF::Exact { matrix } => matrix.rank() == 2 && pairs.satisfies(matrix),
            WitnessF::Numeric { matrix, sigma_ratios: [r2, r3], .. } => {
                *r3 < opts.tol_rank && *r2 > opts.tol_rank && epipolar_residual(pairs, &matrix.0) < opts.tol_res
            }
        }
    }

    fn with_residual(self, pairs: &CorrespondenceSet) -> Self {
        match self {
            WitnessF::Numeric { matrix, sigma_ratios, .. } => {
                let residual = Some(epipolar_residual(pairs, &matrix.0));
                WitnessF::Numeric { matrix, sigma_ratios, residual }
            }
            exact => exact,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RootCertificate {
    Exact {
        #[serde(with = "crate::rational::serde_str")]
        value: Rational,
    },
    /// A simple irrational root strictly between `lo` and `hi`.
    Isolated {
        #[serde(with = "crate::rational::serde_str")]
        lo: Rational,
        #[serde(with = "crate::rational::serde_str")]
        hi: Rational,
    },
}

/// The line `u = h − λ g` on which `q(λ) = d(h − λ g)` has a simple real root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineCertificate {
    pub base: RationalVector,
    pub direction: RationalVector,
    /// Coefficients of `q`, ascending.
    pub cubic: RationalVector,
    pub root: RootCertificate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineWitness {
    pub certificate: LineCertificate,
    pub witness: WitnessF,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Certificate {
    EmptyKernel,
    KernelPoint {
        rank: usize,
    },
    ZeroDeterminant {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        minor: Option<MinorWitness>,
    },
    NotACube {
        determinant: CubicForm,
        line: LineCertificate,
    },
    Cube {
        determinant: CubicForm,
        cube: LinearFormCube,
        /// Independent members of the pencil restricted to `bᵀu = 0`.
        restricted: Vec<RationalMatrix>,
        dropped: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        minor: Option<MinorWitness>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FundamentalDecision {
    pub verdict: Verdict,
    pub branch: Branch,
    /// Pencil basis, each a reshaped kernel vector.
    pub kernel: Vec<RationalMatrix>,
    pub certificate: Certificate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessF>,
}

pub fn decide_fundamental(pairs: &CorrespondenceSet, opts: &DecideOptions) -> Result<FundamentalDecision> {
    opts.validate()?;
    let reduced = build_reduced(pairs);
    let mut decision = match reduced.rank {
        9 => FundamentalDecision {
            verdict: Verdict::NotExists,
            branch: Branch::M9Empty,
            kernel: Vec::new(),
            certificate: Certificate::EmptyKernel,
            witness: None,
        },
        8 => {
            let a = RationalMatrix::from_vec9(&reduced.kernel[0]);
            let rank = a.rank();
            FundamentalDecision {
                verdict: if rank == 2 { Verdict::Exists } else { Verdict::NotExists },
                branch: Branch::M8Point,
                witness: (rank == 2).then(|| WitnessF::exact(&a)),
                kernel: vec![a],
                certificate: Certificate::KernelPoint { rank },
            }
        }
        _ => decide_pencil(&Pencil::from_kernel(&reduced.kernel)?, opts)?,
    };
    if let Some(w) = decision.witness.take() {
        let w = w.with_residual(pairs);
        if !w.verify(pairs, opts) {
            return Err(GeometryError::Contract(format!("witness failed verification: {w:?}")));
        }
        decision.witness = Some(w);
    }
    Ok(decision)
}

/// Decides whether the pencil contains a real matrix of rank two.
pub fn decide_pencil(pencil: &Pencil, opts: &DecideOptions) -> Result<FundamentalDecision> {
    opts.validate()?;
    let radius = opts.grid_radius;
    let kernel = pencil.basis().to_vec();
    let d = det_pencil(pencil);
    if d.is_zero() {
        let minor = minor2_witness(pencil, radius);
        let witness = minor.as_ref().map(|w| WitnessF::exact(&pencil.eval(w.point.entries())));
        return Ok(FundamentalDecision {
            verdict: if witness.is_some() { Verdict::Exists } else { Verdict::NotExists },
            branch: if witness.is_some() { Branch::DzeroMinor } else { Branch::DzeroNoMinor },
            kernel,
            certificate: Certificate::ZeroDeterminant { minor },
            witness,
        });
    }
    match cube_of_linear(&d)? {
        None => {
            let line = extract_rank2_on_line(pencil, &d, radius)?;
            Ok(FundamentalDecision {
                verdict: Verdict::Exists,
                branch: Branch::NotACube,
                kernel,
                certificate: Certificate::NotACube { determinant: d, line: line.certificate },
                witness: Some(line.witness),
            })
        }
        Some(cube) => {
            let restricted = restrict_pencil(pencil, &cube.linear)?;
            let minor = minor2_witness(&restricted.pencil, radius);
            let witness = minor.as_ref().map(|w| WitnessF::exact(&restricted.pencil.eval(w.point.entries())));
            Ok(FundamentalDecision {
                verdict: if witness.is_some() { Verdict::Exists } else { Verdict::NotExists },
                branch: if witness.is_some() { Branch::CubeMinor } else { Branch::CubeNoMinor },
                kernel,
                certificate: Certificate::Cube {
                    determinant: d,
                    cube,
                    restricted: restricted.pencil.basis().to_vec(),
                    dropped: restricted.dropped,
                    minor,
                },
                witness,
            })
        }
    }
}

/// A rank-two member of a pencil whose determinant `d` is nonzero and not a
/// cube of a linear form.
///
/// With `g` a grid point where `d(g) ≠ 0`, `q(λ) = d(h − λg)` is a cubic with
/// leading coefficient `−d(g)`. It is a cube exactly when both
/// `a₂² − 3a₃a₁` and `a₂³ − 27a₃²a₀` vanish, where `aⱼ(h)` is its `λʲ`
/// coefficient; those are polynomials in `h` of per-variable degree at most 3,
/// so a direction `h` making `q` a non-cube exists on the grid. A non-cube
/// cubic has a simple real root `λ*`, and a simple zero of the determinant
/// cannot have rank ≤ 1 (every first derivative of `det` vanishes there), so
/// `M(h − λ*g)` has rank two.
pub fn extract_rank2_on_line(pencil: &Pencil, d: &CubicForm, grid_radius: u32) -> Result<LineWitness> {
    let t = pencil.len();
    if d.nvars() != t {
        return Err(GeometryError::Dimension { expected: t.to_string(), got: d.nvars().to_string() });
    }
    if d.is_zero() || cube_of_linear(d)?.is_some() {
        return Err(GeometryError::Contract("determinant is zero or a cube of a linear form".into()));
    }
    let grid_err = || GeometryError::Contract(format!("grid radius {grid_radius} too small"));
    let base = find_nonvanishing_point(d.polynomial(), grid_radius).ok_or_else(grid_err)?;

    // variable t of `shifted` is λ
    let images: Vec<Vec<Rational>> = (0..t)
        .map(|i| {
            let mut row = vec![Rational::zero(); t + 1];
            row[i] = rat(1);
            row[t] = -base[i].clone();
            row
        })
        .collect();
    let shifted = d.polynomial().compose_linear(&images);
    let a: Vec<Polynomial> = (0..4).map(|j| shifted.coefficient_of_power(t, j)).collect();
    let p1 = a[2].mul(&a[2]).sub(&a[3].mul(&a[1]).scale(&rat(3)));
    let p2 = a[2].pow(3).sub(&a[3].mul(&a[3]).mul(&a[0]).scale(&rat(27)));
    if p1.is_zero() && p2.is_zero() {
        return Err(GeometryError::Contract("determinant is a cube on every line through the base point".into()));
    }
    let point = find_nonvanishing_point(&p1, grid_radius)
        .or_else(|| find_nonvanishing_point(&p2, grid_radius))
        .ok_or_else(grid_err)?;
    let q = UniPoly::new(a.iter().map(|aj| aj.eval(&point)).collect());
    let direction = RationalVector::new(point[..t].to_vec());
    let base = RationalVector::new(base);

    let repeated = q.gcd(&q.derivative());
    let (squarefree, _) = q.div_rem(&repeated);
    let simple: Vec<RealRoot> = real_roots(&squarefree)
        .into_iter()
        .filter(|r| match r {
            RealRoot::Rational(x) => !repeated.eval(x).is_zero(),
            RealRoot::Isolated { .. } => true,
        })
        .collect();
    let at = |lambda: &Rational| pencil.eval(direction.sub(&base.scale(lambda)).entries());
    let cubic = RationalVector::new(q.coeffs().to_vec());

    if let Some(RealRoot::Rational(lambda)) = simple.iter().find(|r| matches!(r, RealRoot::Rational(_))) {
        let witness = WitnessF::exact(&at(lambda));
        let root = RootCertificate::Exact { value: lambda.clone() };
        return Ok(LineWitness { certificate: LineCertificate { base, direction, cubic, root }, witness });
    }
    let Some(RealRoot::Isolated { lo, hi }) = simple.first() else {
        return Err(GeometryError::Contract("non-cube cubic without a simple real root".into()));
    };
    let (lo, hi) = (lo.clone(), hi.clone());
    let scale = lo.abs() + hi.abs() + rat(1);
    let width = scale / Rational::from_integer(num_bigint::BigInt::from(2).pow(160));
    let lambda = match refine(&squarefree, lo.clone(), hi.clone(), &width) {
        RealRoot::Rational(exact) => exact,
        RealRoot::Isolated { lo, hi } => (lo + hi) / rat(2),
    };
    let witness = WitnessF::numeric(&matrix3(&at(&lambda)));
    Ok(LineWitness { certificate: LineCertificate { base, direction, cubic, root: RootCertificate::Isolated { lo, hi } }, witness })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum View {
    X,
    Y,
}

/// Geometric reason for `ker Z` to lie in the rank-one variety.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GeometricCertificate {
    /// Seven pairs: the `collinear` view is collinear on `tau` and the other
    /// view has a single point off `tau`. Indices refer to the input pairs.
    Seven { tau: Vec<usize>, collinear: View },
    /// Six pairs, all points of one view collinear.
    Six { collinear: View },
}

/// Geometric test for `ker Z ⊆ R₁` when `rank Z ∈ {6, 7}`.
pub fn classify_rank_one_kernel(pairs: &CorrespondenceSet) -> Result<Option<GeometricCertificate>> {
    let reduced = build_reduced(pairs);
    let sel = reduced.selected_pairs(pairs);
    let on_line = |pts: Vec<HomogeneousPoint>| collinearity_class(&pts) != CollinearityClass::General;
    match reduced.rank {
        7 => {
            for view in [View::Y, View::X] {
                let (line_side, point_side) = match view {
                    View::Y => (sel.y_points(), sel.x_points()),
                    View::X => (sel.x_points(), sel.y_points()),
                };
                for mask in 1u32..(1 << 7) - 1 {
                    let inside = |i: usize| mask & (1 << i) != 0;
                    let collinear = on_line((0..7).filter(|&i| inside(i)).map(|i| line_side[i].clone()).collect());
                    let off: Vec<&HomogeneousPoint> = (0..7).filter(|&i| !inside(i)).map(|i| &point_side[i]).collect();
                    if collinear && off.windows(2).all(|w| w[0] == w[1]) {
                        let tau = (0..7).filter(|&i| inside(i)).map(|i| reduced.selected_rows[i]).collect();
                        return Ok(Some(GeometricCertificate::Seven { tau, collinear: view }));
                    }
                }
            }
            Ok(None)
        }
        6 => {
            let x = on_line(sel.x_points());
            let y = on_line(sel.y_points());
            assert!(!(x && y), "both views collinear force rank(Z) ≤ 4");
            Ok(if x {
                Some(GeometricCertificate::Six { collinear: View::X })
            } else if y {
                Some(GeometricCertificate::Six { collinear: View::Y })
            } else {
                None
            })
        }
        m => Err(GeometryError::Contract(format!("rank-one kernel classifier needs rank(Z) in {{6, 7}}, got {m}"))),
    }
}

/// `F = [b]× H` where `b` is orthogonal to every `yᵢ × H xᵢ`, if such `b ≠ 0` exists.
pub fn fundamental_from_homography(pairs: &CorrespondenceSet, h: &RationalMatrix) -> Result<Option<WitnessF>> {
    if (h.rows(), h.cols()) != (3, 3) {
        return Err(GeometryError::Dimension { expected: "3x3".into(), got: format!("{}x{}", h.rows(), h.cols()) });
    }
    if h.det().is_zero() {
        return Err(GeometryError::Contract("homography must be invertible".into()));
    }
    let columns: Vec<RationalVector> = pairs.pairs().iter().map(|c| cross(c.y.coords(), &h.mul_vec(c.x.coords()))).collect();
    let stacked = RationalMatrix::from_rows(&columns);
    let Some(b) = stacked.kernel_basis().into_iter().next() else {
        return Ok(None);
    };
    let f = skew(&b)?.matmul(h);
    if f.rank() != 2 || !pairs.satisfies(&f) {
        return Err(GeometryError::Contract("homography construction failed verification".into()));
    }
    Ok(Some(WitnessF::exact(&f)))
}

/// For six pairs: the first four-subset (lexicographic) with no collinear
/// triple in either view, and the witness built from its projectivity.
pub fn six_point_generic(pairs: &CorrespondenceSet) -> Result<Option<(Vec<usize>, WitnessF)>> {
    if pairs.len() != 6 {
        return Err(GeometryError::Contract(format!("six-point test needs 6 pairs, got {}", pairs.len())));
    }
    let p = pairs.pairs();
    for a in 0..6 {
        for b in a + 1..6 {
            for c in b + 1..6 {
                for d in c + 1..6 {
                    let tau = [a, b, c, d];
                    let xs: Vec<&RationalVector> = tau.iter().map(|&i| p[i].x.coords()).collect();
                    let ys: Vec<&RationalVector> = tau.iter().map(|&i| p[i].y.coords()).collect();
                    if has_collinear_triple(&xs) || has_collinear_triple(&ys) {
                        continue;
                    }
                    let quad = tau.map(|i| (p[i].x.coords().clone(), p[i].y.coords().clone()));
                    let h = solve_projectivity(&quad)?;
                    let w = fundamental_from_homography(pairs, &h)?
                        .ok_or_else(|| GeometryError::Contract("projectivity on four pairs left a rank-3 residual".into()))?;
                    return Ok(Some((tau.to_vec(), w)));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::HomogeneousPoint;
    use crate::rational::ratio;

    fn pair(x: (Rational, Rational), y: (Rational, Rational)) -> Correspondence {
        Correspondence::new(HomogeneousPoint::new(x.0, x.1), HomogeneousPoint::new(y.0, y.1))
    }

    fn fixture_a() -> CorrespondenceSet {
        let x = [(ratio(1, 5), rat(-1)), (rat(-1), rat(-7)), (ratio(-1, 2), rat(0)), (rat(-2), rat(-12)), (ratio(-57, 4), rat(8)), (rat(2), rat(8)), (rat(0), ratio(-1, 9))];
        let y = [(rat(0), rat(1)), (rat(1), rat(0)), (rat(2), rat(5)), (rat(3), ratio(-5, 12)), (rat(4), rat(7)), (rat(5), ratio(-11, 8)), (rat(6), rat(9))];
        CorrespondenceSet::new(x.into_iter().zip(y).map(|(x, y)| pair(x, y)).collect()).unwrap()
    }

    fn fixture_b() -> CorrespondenceSet {
        let x = [(rat(-1), rat(0)), (rat(-3), rat(0)), (rat(6), rat(3)), (rat(0), rat(1)), (rat(2), rat(2)), (rat(0), ratio(1, 2)), (ratio(1, 2), rat(1))];
        let y = [(rat(1), rat(0)), (ratio(1, 3), rat(0)), (ratio(1, 3), rat(-1)), (rat(1), rat(-1)), (ratio(1, 2), rat(-1)), (rat(4), rat(-2)), (rat(2), rat(-2))];
        CorrespondenceSet::new(x.into_iter().zip(y).map(|(x, y)| pair(x, y)).collect()).unwrap()
    }

    fn span_equal(kernel: &[RationalMatrix], expected: &[RationalMatrix]) -> bool {
        let all: Vec<RationalVector> = kernel.iter().chain(expected).map(RationalMatrix::vectorize).collect();
        RationalMatrix::from_rows(&all).rank() == expected.len() && kernel.len() == expected.len()
    }

    fn proportional(a: &RationalMatrix, b: &RationalMatrix) -> bool {
        a.vectorize().normalized_leading() == b.vectorize().normalized_leading()
    }

    #[test]
    fn single_pair_at_origin() {
        let r = build_reduced(&CorrespondenceSet::from_ints(&[[0, 0, 0, 0]]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.z.row(0), RationalVector::from_ints(&[0, 0, 0, 0, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn duplicates_do_not_raise_rank() {
        let once = CorrespondenceSet::from_ints(&[[1, 2, 3, 4], [5, 1, 0, 2]]);
        let thrice = CorrespondenceSet::from_ints(&[[1, 2, 3, 4], [1, 2, 3, 4], [5, 1, 0, 2], [1, 2, 3, 4]]);
        assert_eq!(build_reduced(&once).rank, build_reduced(&thrice).rank);
        assert_eq!(build_reduced(&thrice).selected_rows, vec![0, 2]);
    }

    #[test]
    fn fixture_a_has_no_fundamental_matrix() {
        let c = fixture_a();
        let r = build_reduced(&c);
        assert_eq!((r.rank, r.selected_rows.clone()), (7, (0..7).collect()));
        let a2 = RationalMatrix::from_ints(&[[0, 1, 2], [5, 4, -2], [-15, 3, 11]]);
        let d = decide_fundamental(&c, &DecideOptions::default()).unwrap();
        assert!(span_equal(&d.kernel, &[RationalMatrix::identity(3), a2]));
        assert_eq!((d.verdict, d.branch), (Verdict::NotExists, Branch::CubeNoMinor));
        assert!(d.witness.is_none());
    }

    #[test]
    fn fixture_b_witness_is_the_shift() {
        let c = fixture_b();
        let shift = RationalMatrix::from_ints(&[[0, 1, 0], [0, 0, 1], [0, 0, 0]]);
        let d = decide_fundamental(&c, &DecideOptions::default()).unwrap();
        assert!(span_equal(&d.kernel, &[RationalMatrix::identity(3), shift.clone()]));
        assert_eq!((d.verdict, d.branch), (Verdict::Exists, Branch::CubeMinor));
        let Some(WitnessF::Exact { matrix }) = &d.witness else { panic!("expected an exact witness") };
        assert!(proportional(matrix, &shift));
    }

    #[test]
    fn identity_and_shift_basis_gives_b_e1() {
        let shift = RationalMatrix::from_ints(&[[0, 1, 0], [0, 0, 1], [0, 0, 0]]);
        let p = Pencil::new(vec![RationalMatrix::identity(3), shift]).unwrap();
        let d = decide_pencil(&p, &DecideOptions::default()).unwrap();
        let Certificate::Cube { cube, .. } = &d.certificate else { panic!("expected a cube certificate") };
        assert_eq!(cube.linear, RationalVector::from_ints(&[1, 0]));
    }

    #[test]
    fn diagonal_pencil_has_rational_rank_two_member() {
        let diag = RationalMatrix::from_ints(&[[1, 0, 0], [0, 2, 0], [0, 0, 3]]);
        let p = Pencil::new(vec![diag, RationalMatrix::identity(3)]).unwrap();
        let d = det_pencil(&p);
        let lw = extract_rank2_on_line(&p, &d, 3).unwrap();
        let WitnessF::Exact { matrix } = &lw.witness else { panic!("expected an exact witness") };
        assert_eq!(matrix.rank(), 2);
        assert!((0..3).all(|i| (0..3).all(|j| i == j || matrix[(i, j)].is_zero())));
        assert!(matches!(lw.certificate.root, RootCertificate::Exact { .. }));
    }

    #[test]
    fn companion_pencil_needs_a_numeric_witness() {
        // companion matrix of λ³ − 2
        let c = RationalMatrix::from_ints(&[[0, 0, 2], [1, 0, 0], [0, 1, 0]]);
        let p = Pencil::new(vec![RationalMatrix::identity(3), c]).unwrap();
        let d = det_pencil(&p);
        let lw = extract_rank2_on_line(&p, &d, 3).unwrap();
        let WitnessF::Numeric { sigma_ratios: [r2, r3], .. } = lw.witness else { panic!("expected a numeric witness") };
        assert!(r3 < 1e-9 && r2 > 1e-9, "{r2} {r3}");
        assert!(matches!(lw.certificate.root, RootCertificate::Isolated { .. }));
    }

    #[test]
    fn rotation_block_pencil_has_rank_two_member() {
        let r = RationalMatrix::from_ints(&[[0, -1, 0], [1, 0, 0], [0, 0, 1]]);
        let p = Pencil::new(vec![RationalMatrix::identity(3), r]).unwrap();
        let d = decide_pencil(&p, &DecideOptions::default()).unwrap();
        assert_eq!((d.verdict, d.branch), (Verdict::Exists, Branch::NotACube));
        let (_, r3) = sigma_ratios(&d.witness.unwrap().to_f64());
        assert!(r3 < 1e-9);
    }

    #[test]
    fn cube_determinant_is_refused() {
        let a2 = RationalMatrix::from_ints(&[[0, 1, 2], [5, 4, -2], [-15, 3, 11]]);
        let p = Pencil::new(vec![RationalMatrix::identity(3), a2]).unwrap();
        assert!(extract_rank2_on_line(&p, &det_pencil(&p), 3).is_err());
    }

    #[test]
    fn consistent_homography_gives_exact_witness() {
        let h = RationalMatrix::from_ints(&[[2, 1, 0], [0, 1, 3], [1, 0, 1]]);
        let xs = [[0, 0], [1, 0], [0, 1], [2, 3], [-3, 4]];
        let pairs: Vec<Correspondence> = xs
            .iter()
            .map(|&[a, b]| {
                let x = HomogeneousPoint::from_ints(a, b);
                let hx = h.mul_vec(x.coords());
                let y = HomogeneousPoint::new(&hx[0] / &hx[2], &hx[1] / &hx[2]);
                Correspondence::new(x, y)
            })
            .collect();
        let c = CorrespondenceSet::new(pairs).unwrap();
        let w = fundamental_from_homography(&c, &h).unwrap().unwrap();
        assert!(w.verify(&c, &DecideOptions::default()));
        assert!(fundamental_from_homography(&c, &RationalMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn generic_nine_pairs_defeat_a_homography() {
        let c = CorrespondenceSet::from_ints(&[
            [3, 0, 2, 0],
            [9, 1, 5, 4],
            [1, 2, 9, 6],
            [8, 8, 2, 5],
            [4, 8, 1, 4],
            [7, 2, 6, 3],
            [0, 5, 3, 7],
            [2, 9, 8, 1],
            [6, 6, 0, 9],
        ]);
        let h = RationalMatrix::from_ints(&[[1, 2, 0], [0, 1, 1], [3, 0, 1]]);
        assert_eq!(fundamental_from_homography(&c, &h).unwrap(), None);
    }

    #[test]
    fn six_point_search() {
        let general = CorrespondenceSet::from_ints(&[[0, 0, 1, 2], [1, 0, 3, 1], [0, 1, 2, 5], [2, 3, 7, 1], [5, 1, 4, 4], [3, 7, 0, 6]]);
        let (tau, w) = six_point_generic(&general).unwrap().unwrap();
        assert_eq!(tau, vec![0, 1, 2, 3]);
        assert!(w.verify(&general, &DecideOptions::default()));

        let x_line = CorrespondenceSet::from_ints(&[[0, 0, 1, 2], [1, 1, 3, 1], [2, 2, 2, 5], [3, 3, 7, 1], [4, 4, 4, 4], [5, 5, 0, 6]]);
        assert_eq!(six_point_generic(&x_line).unwrap(), None);

        // x of pairs 0, 1, 2 on a line: every admissible subset avoids two of them
        let partial = CorrespondenceSet::from_ints(&[[0, 0, 1, 2], [1, 1, 3, 1], [2, 2, 2, 5], [2, 3, 7, 1], [5, 1, 4, 4], [3, 7, 0, 6]]);
        let (tau, w) = six_point_generic(&partial).unwrap().unwrap();
        assert!(tau.iter().filter(|&&i| i < 3).count() <= 2);
        assert_eq!(tau, vec![0, 1, 3, 4]);
        assert!(w.verify(&partial, &DecideOptions::default()));
        assert!(six_point_generic(&CorrespondenceSet::from_ints(&[[0, 0, 0, 0]])).is_err());
    }

    #[test]
    fn seven_point_tau_pattern() {
        // y of pairs 0..4 on the line y₂ = 2, x of pairs 4..7 equal
        let c = CorrespondenceSet::from_ints(&[
            [0, 0, 1, 2],
            [3, 1, 4, 2],
            [1, 5, -2, 2],
            [-4, 2, 7, 2],
            [2, 3, 5, -1],
            [2, 3, -3, 4],
            [2, 3, 1, 9],
        ]);
        assert_eq!(build_reduced(&c).rank, 7);
        let cert = classify_rank_one_kernel(&c).unwrap();
        assert_eq!(cert, Some(GeometricCertificate::Seven { tau: vec![0, 1, 2, 3], collinear: View::Y }));
        let d = decide_fundamental(&c, &DecideOptions::default()).unwrap();
        assert_eq!((d.verdict, d.branch), (Verdict::NotExists, Branch::DzeroNoMinor));
    }

    #[test]
    fn six_point_collinear_view() {
        let c = CorrespondenceSet::from_ints(&[[0, 0, 1, 1], [1, 3, 2, 2], [4, 1, 3, 3], [2, 7, 4, 4], [5, 5, -1, -1], [-3, 2, 7, 7]]);
        assert_eq!(build_reduced(&c).rank, 6);
        assert_eq!(classify_rank_one_kernel(&c).unwrap(), Some(GeometricCertificate::Six { collinear: View::Y }));
        assert_eq!(classify_rank_one_kernel(&c.swapped()).unwrap(), Some(GeometricCertificate::Six { collinear: View::X }));
    }

    #[test]
    fn fixture_a_kernel_is_not_rank_one() {
        assert_eq!(classify_rank_one_kernel(&fixture_a()).unwrap(), None);
        assert!(classify_rank_one_kernel(&CorrespondenceSet::from_ints(&[[0, 0, 0, 0]])).is_err());
    }
}
