//! Signed ("arrow") permutation groups, their rational group algebra, and
//! factorization of invertible real matrices into adjacent block generators.
//!
//! - [`perm`]: the group itself, with parity, cycles and generating words.
//! - [`matrix`] and [`realization`]: exact and floating matrices, and the
//!   monomial-matrix realization of the group.
//! - [`algebra`]: the group algebra and its identification with all
//!   `n × n` matrices.
//! - [`generators`] and [`factorize`]: the continuous generator alphabet and
//!   the constructive factorization into it.
//! - [`closure`]: BFS closure of finite generating sets.

pub mod algebra;
pub mod cli;
pub mod closure;
pub mod error;
pub mod factorize;
pub mod generators;
pub mod matrix;
pub mod perm;
pub mod realization;

pub use algebra::{express_matrix, matrix_unit, spanning_basis, AlgebraElement};
pub use closure::{element_orders, generate_closure, subgroup_index, ClosureTable, GroupElement};
pub use error::{Error, Result};
pub use factorize::{factor_diag, factor_gl, factor_sl2_rbt, factor_so, verify};
pub use generators::{embed, eval_word, simplify, word_inverse, BlockGenerator, GeneratorWord};
pub use matrix::{FloatMatrix, Rational, RationalMatrix};
pub use perm::{
    enumerate_group, random_element, ArrowCycle, PermLetter, PermWord, SignedPermutation,
};
pub use realization::{det_sign, realize, recognize};
