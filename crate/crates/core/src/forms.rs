//! Matrix pencils `M(u) = Σ A_i u_i` over the rationals and the cubic form
//! `det M(u)`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::linalg::{RationalMatrix, RationalVector, RowSpace};
use crate::poly::{find_nonvanishing_point, Polynomial};
use crate::rational::Rational;

/// A homogeneous form of degree 3 (or the zero form) in `nvars` variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Polynomial", into = "Polynomial")]
pub struct CubicForm(Polynomial);

impl CubicForm {
    pub fn new(p: Polynomial) -> Result<Self> {
        match p.homogeneous_degree() {
            None | Some(3) => Ok(CubicForm(p)),
            Some(d) => Err(GeometryError::Contract(format!("expected a cubic form, got degree {d}"))),
        }
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn eval(&self, u: &[Rational]) -> Rational {
        self.0.eval(u)
    }
}

impl TryFrom<Polynomial> for CubicForm {
    type Error = GeometryError;
    fn try_from(p: Polynomial) -> Result<Self> {
        CubicForm::new(p)
    }
}

impl From<CubicForm> for Polynomial {
    fn from(f: CubicForm) -> Polynomial {
        f.0
    }
}

/// `c · (bᵀu)³` with `b` scaled so its first nonzero entry is 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearFormCube {
    #[serde(with = "crate::rational::serde_str")]
    pub scale: Rational,
    pub linear: RationalVector,
}

impl LinearFormCube {
    pub fn expand(&self) -> Polynomial {
        Polynomial::linear(self.linear.entries()).pow(3).scale(&self.scale)
    }
}

/// A linearly independent family of 3×3 matrices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pencil {
    basis: Vec<RationalMatrix>,
}

impl Pencil {
    pub fn new(basis: Vec<RationalMatrix>) -> Result<Self> {
        if basis.is_empty() {
            return Err(GeometryError::Contract("a pencil needs at least one matrix".into()));
        }
        if basis.iter().any(|a| (a.rows(), a.cols()) != (3, 3)) {
            return Err(GeometryError::Dimension { expected: "3x3".into(), got: "other".into() });
        }
        let mut span = RowSpace::default();
        if !basis.iter().all(|a| span.insert(&a.vectorize())) {
            return Err(GeometryError::Contract("pencil basis is linearly dependent".into()));
        }
        Ok(Pencil { basis })
    }

    /// Pencil whose basis matrices are the given kernel vectors reshaped row-major.
    pub fn from_kernel(kernel: &[RationalVector]) -> Result<Self> {
        Self::new(kernel.iter().map(RationalMatrix::from_vec9).collect())
    }

    pub fn basis(&self) -> &[RationalMatrix] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// `M(u) = Σ A_i u_i`.
    pub fn eval(&self, u: &[Rational]) -> RationalMatrix {
        combine(&self.basis, u)
    }

    /// The entries of `M(u)` as linear forms in `u`.
    pub fn symbolic(&self) -> [[Polynomial; 3]; 3] {
        symbolic_entries(&self.basis)
    }
}

fn combine(family: &[RationalMatrix], u: &[Rational]) -> RationalMatrix {
    assert_eq!(family.len(), u.len(), "coefficient count must match the family size");
    family
        .iter()
        .zip(u)
        .fold(RationalMatrix::zeros(3, 3), |acc, (a, ui)| if ui.is_zero() { acc } else { acc.add(&a.scale(ui)) })
}

fn symbolic_entries(family: &[RationalMatrix]) -> [[Polynomial; 3]; 3] {
    std::array::from_fn(|r| {
        std::array::from_fn(|c| Polynomial::linear(&family.iter().map(|a| a[(r, c)].clone()).collect::<Vec<_>>()))
    })
}

/// `det(Σ A_i u_i)` for an arbitrary (possibly dependent) family.
pub fn det_of_family(family: &[RationalMatrix]) -> CubicForm {
    let m = symbolic_entries(family);
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| m[r1][c1].mul(&m[r2][c2]).sub(&m[r1][c2].mul(&m[r2][c1]));
    let det = m[0][0]
        .mul(&minor(1, 2, 1, 2))
        .sub(&m[0][1].mul(&minor(1, 2, 0, 2)))
        .add(&m[0][2].mul(&minor(1, 2, 0, 1)));
    CubicForm::new(det).expect("determinant of a linear pencil is a cubic form")
}

pub fn det_pencil(pencil: &Pencil) -> CubicForm {
    det_of_family(pencil.basis())
}

/// Detects `f = c · (bᵀu)³`.
///
/// With `i` the first variable where `∂f/∂u_i ≠ 0`, every other partial must
/// be a rational multiple `λ_j` of `∂f/∂u_i`; the candidate
/// `ℓ = u_i + Σ λ_j u_j` and `c = coeff(u_i³)` are then checked by expansion.
pub fn cube_of_linear(f: &CubicForm) -> Result<Option<LinearFormCube>> {
    if f.is_zero() {
        return Err(GeometryError::Contract("cube_of_linear needs a nonzero cubic form".into()));
    }
    let p = f.polynomial();
    let n = p.nvars();
    let partials: Vec<Polynomial> = (0..n).map(|j| p.derivative(j)).collect();
    let i = partials.iter().position(|d| !d.is_zero()).expect("nonzero form has a nonzero partial");
    let mut b = RationalVector::zeros(n);
    for (j, dj) in partials.iter().enumerate() {
        if dj.is_zero() {
            continue;
        }
        match dj.ratio_to(&partials[i]) {
            Some(lambda) => b[j] = lambda,
            None => return Ok(None),
        }
    }
    let mut mono = vec![0u8; n];
    mono[i] = 3;
    let candidate = LinearFormCube { scale: p.coefficient(&mono), linear: b };
    if candidate.scale.is_zero() || candidate.expand() != *p {
        return Ok(None);
    }
    Ok(Some(candidate))
}

/// The pencil on the hyperplane `bᵀu = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictedPencil {
    /// `A_i − (b_i / bᵀb) Σ_j b_j A_j`, one per original variable; evaluating
    /// this family at `u` gives `M(u − (bᵀu / bᵀb) b)`.
    pub substituted: Vec<RationalMatrix>,
    /// Linearly independent members of `substituted`.
    pub pencil: Pencil,
    /// Original indices kept in `pencil`, ascending.
    pub kept: Vec<usize>,
    /// Original indices dropped as linearly dependent on earlier members.
    pub dropped: Vec<usize>,
}

pub fn restrict_pencil(pencil: &Pencil, b: &RationalVector) -> Result<RestrictedPencil> {
    let t = pencil.len();
    if b.len() != t {
        return Err(GeometryError::Dimension { expected: t.to_string(), got: b.len().to_string() });
    }
    if b.is_zero() {
        return Err(GeometryError::Contract("restriction direction must be nonzero".into()));
    }
    if t == 1 {
        return Err(GeometryError::Contract("restricting a one-member pencil leaves only the zero matrix".into()));
    }
    let bb = b.dot(b);
    let along_b = combine(pencil.basis(), b.entries());
    let substituted: Vec<RationalMatrix> =
        pencil.basis().iter().zip(b.iter()).map(|(a, bi)| a.sub(&along_b.scale(&(bi / &bb)))).collect();
    let mut span = RowSpace::default();
    let (mut kept, mut dropped) = (Vec::new(), Vec::new());
    for (i, a) in substituted.iter().enumerate() {
        if span.insert(&a.vectorize()) {
            kept.push(i);
        } else {
            dropped.push(i);
        }
    }
    let reduced = Pencil::new(kept.iter().map(|&i| substituted[i].clone()).collect())?;
    Ok(RestrictedPencil { substituted, pencil: reduced, kept, dropped })
}

/// Rows and columns (0-based, ascending) of a 2×2 minor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorIndex {
    pub rows: [usize; 2],
    pub cols: [usize; 2],
}

impl MinorIndex {
    /// The nine 2×2 minors of a 3×3 matrix in lexicographic order.
    pub fn all() -> impl Iterator<Item = MinorIndex> {
        const PAIRS: [[usize; 2]; 3] = [[0, 1], [0, 2], [1, 2]];
        PAIRS.into_iter().flat_map(|rows| PAIRS.into_iter().map(move |cols| MinorIndex { rows, cols }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorWitness {
    pub minor: MinorIndex,
    pub point: RationalVector,
}

/// The 2×2 minor polynomials of `M(u)` in lexicographic order.
pub fn minor_polynomials(pencil: &Pencil) -> Vec<(MinorIndex, Polynomial)> {
    let m = pencil.symbolic();
    MinorIndex::all()
        .map(|idx| {
            let [r1, r2] = idx.rows;
            let [c1, c2] = idx.cols;
            (idx, m[r1][c1].mul(&m[r2][c2]).sub(&m[r1][c2].mul(&m[r2][c1])))
        })
        .collect()
}

/// First 2×2 minor that is a nonzero polynomial, with a grid point where it
/// does not vanish. `None` means every matrix of the family has rank ≤ 1.
pub fn minor2_witness(pencil: &Pencil, grid_radius: u32) -> Option<MinorWitness> {
    minor_polynomials(pencil).into_iter().find_map(|(minor, p)| {
        find_nonvanishing_point(&p, grid_radius).map(|pt| MinorWitness { minor, point: RationalVector::new(pt) })
    })
}
