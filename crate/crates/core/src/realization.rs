//! The defining matrix realization of the signed permutation group.
//!
//! Column convention: column `j` of `realize(p)` holds `sgn(p(j))` in row
//! `|p(j)|`. With composition applied right-to-left this makes `realize` a
//! homomorphism, `realize(p∘q) = realize(p)·realize(q)`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{int, rational_signum, RationalMatrix};
use crate::perm::SignedPermutation;

pub fn realize(p: &SignedPermutation) -> RationalMatrix {
    let n = p.degree();
    let mut m = RationalMatrix::zeros(n);
    for (j, &v) in p.images().iter().enumerate() {
        let row = v.unsigned_abs() as usize - 1;
        m.set(row, j, int(i64::from(v.signum())));
    }
    m
}

/// Inverse of [`realize`]: accepts exactly the matrices with one `±1` per
/// row and column and zeros elsewhere.
pub fn recognize(m: &RationalMatrix) -> Result<SignedPermutation> {
    let n = m.n();
    let mut images = vec![0i32; n];
    let mut row_used = vec![false; n];
    for (col, image) in images.iter_mut().enumerate() {
        for row in 0..n {
            let v = &m[(row, col)];
            if v.is_zero() {
                continue;
            }
            if !(v.is_one() || (-v).is_one()) {
                return Err(Error::NotSignedPermutationMatrix(format!(
                    "entry ({}, {}) is {v}, expected 0 or ±1",
                    row + 1,
                    col + 1
                )));
            }
            if *image != 0 {
                return Err(Error::NotSignedPermutationMatrix(format!(
                    "column {} has more than one nonzero",
                    col + 1
                )));
            }
            if row_used[row] {
                return Err(Error::NotSignedPermutationMatrix(format!(
                    "row {} has more than one nonzero",
                    row + 1
                )));
            }
            row_used[row] = true;
            *image = i32::from(rational_signum(v)) * (row as i32 + 1);
        }
        if *image == 0 {
            return Err(Error::NotSignedPermutationMatrix(format!(
                "column {} is zero",
                col + 1
            )));
        }
    }
    SignedPermutation::new(images)
}

/// Determinant of the realization, computed exactly.
pub fn det_sign(p: &SignedPermutation) -> i8 {
    rational_signum(&realize(p).determinant())
}
