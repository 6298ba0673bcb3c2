//! Points of the projective plane, correspondences, and the two exact
//! homography constructions used by the decision procedures.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::linalg::{cross, RationalMatrix, RationalVector};
use crate::rational::Rational;

/// An affine point `(a, b)` lifted to `(a, b, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RationalVector", into = "RationalVector")]
pub struct HomogeneousPoint(RationalVector);

impl HomogeneousPoint {
    pub fn new(a: Rational, b: Rational) -> Self {
        HomogeneousPoint(RationalVector::new(vec![a, b, Rational::one()]))
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        HomogeneousPoint::new(crate::rational::rat(a), crate::rational::rat(b))
    }

    pub fn coords(&self) -> &RationalVector {
        &self.0
    }

    pub fn affine(&self) -> (&Rational, &Rational) {
        (&self.0[0], &self.0[1])
    }
}

impl TryFrom<RationalVector> for HomogeneousPoint {
    type Error = GeometryError;
    fn try_from(v: RationalVector) -> Result<Self> {
        match v.len() {
            2 => Ok(HomogeneousPoint::new(v[0].clone(), v[1].clone())),
            3 if v[2].is_one() => Ok(HomogeneousPoint(v)),
            3 => Err(GeometryError::Contract("third coordinate must be 1".into())),
            n => Err(GeometryError::Dimension { expected: "2 or 3".into(), got: n.to_string() }),
        }
    }
}

impl From<HomogeneousPoint> for RationalVector {
    fn from(p: HomogeneousPoint) -> RationalVector {
        RationalVector::new(p.0.entries()[..2].to_vec())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Correspondence {
    pub x: HomogeneousPoint,
    pub y: HomogeneousPoint,
}

impl Correspondence {
    pub fn new(x: HomogeneousPoint, y: HomogeneousPoint) -> Self {
        Correspondence { x, y }
    }

    /// The row `yᵀ ⊗ xᵀ`, so that `yᵀ F x = row · vec(F)` with `vec` row-major.
    pub fn kronecker_row(&self) -> RationalVector {
        let (x, y) = (self.x.coords(), self.y.coords());
        RationalVector::new(y.iter().flat_map(|yj| x.iter().map(move |xk| yj * xk)).collect())
    }
}

/// The input data: `m ≥ 1` homogenized point pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Correspondence>", into = "Vec<Correspondence>")]
pub struct CorrespondenceSet {
    pairs: Vec<Correspondence>,
}

impl CorrespondenceSet {
    pub fn new(pairs: Vec<Correspondence>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(GeometryError::Contract("at least one correspondence is required".into()));
        }
        Ok(CorrespondenceSet { pairs })
    }

    /// Convenience constructor from integer affine coordinates `(x1, x2, y1, y2)`.
    pub fn from_ints(rows: &[[i64; 4]]) -> Self {
        let pairs = rows
            .iter()
            .map(|r| Correspondence::new(HomogeneousPoint::from_ints(r[0], r[1]), HomogeneousPoint::from_ints(r[2], r[3])))
            .collect();
        CorrespondenceSet::new(pairs).expect("nonempty")
    }

    pub fn pairs(&self) -> &[Correspondence] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn subset(&self, indices: &[usize]) -> CorrespondenceSet {
        CorrespondenceSet { pairs: indices.iter().map(|&i| self.pairs[i].clone()).collect() }
    }

    pub fn swapped(&self) -> CorrespondenceSet {
        CorrespondenceSet { pairs: self.pairs.iter().map(|c| Correspondence::new(c.y.clone(), c.x.clone())).collect() }
    }

    pub fn x_points(&self) -> Vec<HomogeneousPoint> {
        self.pairs.iter().map(|c| c.x.clone()).collect()
    }

    pub fn y_points(&self) -> Vec<HomogeneousPoint> {
        self.pairs.iter().map(|c| c.y.clone()).collect()
    }

    /// The `m × 3` matrix of homogenized x points.
    pub fn x_matrix(&self) -> RationalMatrix {
        point_matrix(&self.x_points())
    }

    pub fn y_matrix(&self) -> RationalMatrix {
        point_matrix(&self.y_points())
    }

    /// The `m × 9` constraint matrix whose rows are `yᵢᵀ ⊗ xᵢᵀ`.
    pub fn z_matrix(&self) -> RationalMatrix {
        RationalMatrix::from_rows(&self.pairs.iter().map(Correspondence::kronecker_row).collect::<Vec<_>>())
    }

    /// Exact epipolar residuals `yᵢᵀ F xᵢ`.
    pub fn residuals(&self, f: &RationalMatrix) -> Vec<Rational> {
        self.pairs.iter().map(|c| c.y.coords().dot(&f.mul_vec(c.x.coords()))).collect()
    }

    pub fn satisfies(&self, f: &RationalMatrix) -> bool {
        self.residuals(f).iter().all(Zero::is_zero)
    }
}

impl TryFrom<Vec<Correspondence>> for CorrespondenceSet {
    type Error = GeometryError;
    fn try_from(pairs: Vec<Correspondence>) -> Result<Self> {
        CorrespondenceSet::new(pairs)
    }
}

impl From<CorrespondenceSet> for Vec<Correspondence> {
    fn from(set: CorrespondenceSet) -> Self {
        set.pairs
    }
}

fn point_matrix(points: &[HomogeneousPoint]) -> RationalMatrix {
    RationalMatrix::from_rows(&points.iter().map(|p| p.coords().clone()).collect::<Vec<_>>())
}

/// Geometric class of a planar point set, equal to the rank of the stacked
/// homogeneous coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CollinearityClass {
    AllEqual = 1,
    Collinear = 2,
    General = 3,
}

pub fn collinearity_class(points: &[HomogeneousPoint]) -> CollinearityClass {
    assert!(!points.is_empty(), "collinearity_class needs at least one point");
    match point_matrix(points).rank() {
        1 => CollinearityClass::AllEqual,
        2 => CollinearityClass::Collinear,
        _ => CollinearityClass::General,
    }
}

/// Whether the three projective points are linearly dependent.
pub fn dependent3(a: &RationalVector, b: &RationalVector, c: &RationalVector) -> bool {
    cross(a, b).dot(c).is_zero()
}

pub fn collinear3(a: &HomogeneousPoint, b: &HomogeneousPoint, c: &HomogeneousPoint) -> bool {
    dependent3(a.coords(), b.coords(), c.coords())
}

/// Whether some three of the given points are collinear.
pub fn has_collinear_triple(points: &[&RationalVector]) -> bool {
    let n = points.len();
    (0..n).any(|i| (i + 1..n).any(|j| (j + 1..n).any(|k| dependent3(points[i], points[j], points[k]))))
}

/// Invertible `H` with `H·srcᵢ ∼ dstᵢ` for four projective point pairs,
/// no three of the sources and no three of the targets dependent.
///
/// Solves the stacked incidence system `dstᵢ × (H srcᵢ) = 0` (12 × 9) and
/// takes its one-dimensional kernel.
pub fn solve_projectivity(pairs: &[(RationalVector, RationalVector); 4]) -> Result<RationalMatrix> {
    for (s, d) in pairs {
        if s.len() != 3 || d.len() != 3 {
            return Err(GeometryError::Dimension { expected: "3".into(), got: format!("{}/{}", s.len(), d.len()) });
        }
    }
    let sources: Vec<&RationalVector> = pairs.iter().map(|(s, _)| s).collect();
    let targets: Vec<&RationalVector> = pairs.iter().map(|(_, d)| d).collect();
    if has_collinear_triple(&sources) {
        return Err(GeometryError::Degenerate("three source points are collinear".into()));
    }
    if has_collinear_triple(&targets) {
        return Err(GeometryError::Degenerate("three target points are collinear".into()));
    }
    let mut rows = Vec::with_capacity(12);
    for (s, d) in pairs {
        // component r of d × (H s) is linear in vec(H)
        for r in 0..3 {
            let (p, q) = ((r + 1) % 3, (r + 2) % 3);
            let mut row = RationalVector::zeros(9);
            for k in 0..3 {
                row[3 * q + k] += &d[p] * &s[k];
                row[3 * p + k] -= &d[q] * &s[k];
            }
            rows.push(row);
        }
    }
    let kernel = RationalMatrix::from_rows(&rows).kernel_basis();
    if kernel.len() != 1 {
        return Err(GeometryError::Degenerate(format!("projectivity system has a {}-dimensional kernel", kernel.len())));
    }
    let h = RationalMatrix::from_vec9(&kernel[0]);
    debug_assert!(!h.det().is_zero());
    Ok(h)
}

/// Rational affine map `[[W, z], [0, 0, 1]]` sending the line through
/// `points` onto the line `{first coordinate = 0}` and `anchor` to the
/// origin. `W` is a coordinate swap or a shear, so images are `(0, αᵢ, 1)`.
pub fn line_normalizer(points: &[HomogeneousPoint], anchor: &HomogeneousPoint) -> Result<RationalMatrix> {
    let mut all: Vec<HomogeneousPoint> = points.to_vec();
    all.push(anchor.clone());
    if collinearity_class(&all) == CollinearityClass::General {
        return Err(GeometryError::Degenerate("points (with anchor) are not collinear".into()));
    }
    let (a0, a1) = anchor.affine();
    let direction = points.iter().map(|p| p.affine()).find(|(p0, p1)| (*p0, *p1) != (a0, a1));
    let (d0, d1) = match direction {
        Some((p0, p1)) => (p0 - a0, p1 - a1),
        None => (Rational::zero(), Rational::one()),
    };
    let one = Rational::one;
    let zero = Rational::zero;
    let w = if d0.is_zero() {
        [[one(), zero()], [zero(), one()]]
    } else if !d1.is_zero() {
        [[one(), -(&d0 / &d1)], [zero(), one()]]
    } else {
        [[zero(), one()], [one(), zero()]]
    };
    let z0 = -(&w[0][0] * a0 + &w[0][1] * a1);
    let z1 = -(&w[1][0] * a0 + &w[1][1] * a1);
    let [[w00, w01], [w10, w11]] = w;
    RationalMatrix::from_vec(3, 3, vec![w00, w01, z0, w10, w11, z1, zero(), zero(), one()])
}
