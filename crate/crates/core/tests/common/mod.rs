//! Test-only oracles and samplers, independent of the library's algorithms.

#![allow(dead_code)]

use arrowperm::matrix::{rational, Rational};
use arrowperm::perm::random_element_with;
use arrowperm::{AlgebraElement, FloatMatrix, RationalMatrix, SignedPermutation};
use nalgebra::DMatrix;
use num_traits::{One, Zero};
use rand::Rng;
use rand_distr::StandardNormal;

/// Leibniz expansion over all `n!` permutations.
pub fn leibniz_det(m: &RationalMatrix) -> Rational {
    let n = m.n();
    let mut idx: Vec<usize> = (0..n).collect();
    let mut total = Rational::zero();
    permute(&mut idx, 0, &mut |perm| {
        let mut inversions = 0;
        for a in 0..n {
            for b in a + 1..n {
                if perm[a] > perm[b] {
                    inversions += 1;
                }
            }
        }
        let mut term = if inversions % 2 == 0 {
            Rational::one()
        } else {
            -Rational::one()
        };
        for (r, &c) in perm.iter().enumerate() {
            term *= &m[(r, c)];
        }
        total += term;
    });
    total
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

/// Textbook triple-loop product.
pub fn naive_product(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
    let n = a.n();
    let mut rows = vec![vec![Rational::zero(); n]; n];
    for (r, row) in rows.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            for k in 0..n {
                *cell += &a[(r, k)] * &b[(k, c)];
            }
        }
    }
    RationalMatrix::from_rows(rows).unwrap()
}

/// All signed permutations of degree `n` by brute force over sign vectors
/// and index permutations.
pub fn brute_force_group(n: usize) -> Vec<SignedPermutation> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (1..=n).collect();
    permute(&mut idx, 0, &mut |perm| {
        for mask in 0..(1u32 << n) {
            let images = perm
                .iter()
                .enumerate()
                .map(|(k, &a)| {
                    if mask >> k & 1 == 1 {
                        -(a as i32)
                    } else {
                        a as i32
                    }
                })
                .collect();
            out.push(SignedPermutation::new(images).unwrap());
        }
    });
    out
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    rational(rng.gen_range(-10..=10), rng.gen_range(1..=10))
}

pub fn random_rational_matrix<R: Rng>(n: usize, rng: &mut R) -> RationalMatrix {
    RationalMatrix::from_rows(
        (0..n)
            .map(|_| (0..n).map(|_| random_rational(rng)).collect())
            .collect(),
    )
    .unwrap()
}

pub fn random_algebra_element<R: Rng>(n: usize, max_terms: usize, rng: &mut R) -> AlgebraElement {
    let k = rng.gen_range(1..=max_terms);
    let terms: Vec<_> = (0..k)
        .map(|_| (random_element_with(n, rng).unwrap(), random_rational(rng)))
        .collect();
    AlgebraElement::from_terms(n, terms).unwrap()
}

/// Entries uniform in `[-1, 1]`, resampled until `|det| ≥ 1e-3`.
pub fn random_well_conditioned<R: Rng>(n: usize, rng: &mut R) -> FloatMatrix {
    loop {
        let m = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0f64..=1.0));
        if m.determinant().abs() >= 1e-3 {
            return FloatMatrix::new(m).unwrap();
        }
    }
}

/// Q factor of a Gaussian matrix, with one column negated if needed so that
/// `det = +1`.
pub fn random_special_orthogonal<R: Rng>(n: usize, rng: &mut R) -> FloatMatrix {
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let mut q = g.qr().q();
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    FloatMatrix::new(q).unwrap()
}

/// Gaussian 2×2 normalized to determinant 1 with condition number ≤ `max_cond`.
pub fn random_sl2<R: Rng>(max_cond: f64, rng: &mut R) -> FloatMatrix {
    loop {
        let mut m = DMatrix::from_fn(2, 2, |_, _| rng.sample::<f64, _>(StandardNormal));
        let det = m.determinant();
        if det.abs() < 1e-12 {
            continue;
        }
        if det < 0.0 {
            m.swap_columns(0, 1);
        }
        let m = m / det.abs().sqrt();
        let sv = m.singular_values();
        let cond = sv.max() / sv.min();
        if cond <= max_cond {
            return FloatMatrix::new(m).unwrap();
        }
    }
}
