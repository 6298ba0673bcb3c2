//! Exact decisions on whether two-view point correspondences admit a
//! fundamental or an essential matrix, with checkable certificates.
//!
//! All verdicts are computed over the rationals. Floating point appears only
//! in witnesses that cannot be rational, and those carry their own residual
//! and singular-value checks.

pub mod decision;
pub mod error;
pub mod essential;
pub mod forms;
pub mod fundamental;
pub mod io;
pub mod linalg;
pub mod numeric;
pub mod poly;
pub mod projective;
pub mod rational;
pub mod report;
pub mod univariate;

pub use decision::{DecideOptions, Verdict};
pub use error::{GeometryError, ParseError};
pub use essential::{classify_m4, decide_essential, demazure_residuals, is_essential, EssentialCandidate, EssentialCase, EssentialDecision};
pub use forms::{det_pencil, CubicForm, Pencil};
pub use fundamental::{classify_rank_one_kernel, decide_fundamental, Branch, Certificate, FundamentalDecision, WitnessF};
pub use io::{parse_input, serialize_input, InputDocument, InputFormat};
pub use linalg::{RationalMatrix, RationalVector};
pub use projective::{Correspondence, CorrespondenceSet, HomogeneousPoint};
pub use rational::Rational;
pub use report::{run_classify, run_decide, verify_matrix, Question, Report, SCHEMA};
