//! Inputs shared by the benchmarks.

use epicert_core::rational::ratio;
use epicert_core::{Correspondence, CorrespondenceSet, HomogeneousPoint, Rational};

fn pair(x: (Rational, Rational), y: (Rational, Rational)) -> Correspondence {
    Correspondence::new(HomogeneousPoint::new(x.0, x.1), HomogeneousPoint::new(y.0, y.1))
}

fn q(n: i64, d: i64) -> Rational {
    ratio(n, d)
}

/// Seven pairs whose kernel is a pencil with a cubed determinant and no rank-two member.
pub fn rank_one_and_three() -> CorrespondenceSet {
    let x = [(q(1, 5), q(-1, 1)), (q(-1, 1), q(-7, 1)), (q(-1, 2), q(0, 1)), (q(-2, 1), q(-12, 1)), (q(-57, 4), q(8, 1)), (q(2, 1), q(8, 1)), (q(0, 1), q(-1, 9))];
    let y = [(q(0, 1), q(1, 1)), (q(1, 1), q(0, 1)), (q(2, 1), q(5, 1)), (q(3, 1), q(-5, 12)), (q(4, 1), q(7, 1)), (q(5, 1), q(-11, 8)), (q(6, 1), q(9, 1))];
    CorrespondenceSet::new(x.into_iter().zip(y).map(|(x, y)| pair(x, y)).collect()).unwrap()
}

/// Seven pairs with a cubed determinant and a rank-two member.
pub fn cube_with_witness() -> CorrespondenceSet {
    let x = [(q(-1, 1), q(0, 1)), (q(-3, 1), q(0, 1)), (q(6, 1), q(3, 1)), (q(0, 1), q(1, 1)), (q(2, 1), q(2, 1)), (q(0, 1), q(1, 2)), (q(1, 2), q(1, 1))];
    let y = [(q(1, 1), q(0, 1)), (q(1, 3), q(0, 1)), (q(1, 3), q(-1, 1)), (q(1, 1), q(-1, 1)), (q(1, 2), q(-1, 1)), (q(4, 1), q(-2, 1)), (q(2, 1), q(-2, 1))];
    CorrespondenceSet::new(x.into_iter().zip(y).map(|(x, y)| pair(x, y)).collect()).unwrap()
}

/// Generic integer pairs; the first `m` are used.
pub fn generic(m: usize) -> CorrespondenceSet {
    const ROWS: [[i64; 4]; 9] = [[3, 0, 2, 0], [9, 1, 5, 4], [1, 2, 9, 6], [8, 8, 2, 5], [4, 8, 1, 4], [7, 2, 6, 3], [0, 5, 3, 7], [2, 9, 8, 1], [6, 6, 0, 9]];
    CorrespondenceSet::from_ints(&ROWS[..m])
}
