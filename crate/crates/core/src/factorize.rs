//! Factorization of invertible real matrices into generator words.
//!
//! `A = λ · F · U · Σ · Vᵀ`: a positive scalar `λ = |det A|^{1/n}`, an
//! optional sign-fixing signed permutation `F`, two special orthogonal
//! factors written as adjacent Givens rotations (plus a diagonal sign
//! permutation), and a unimodular positive diagonal written as adjacent
//! scalings. Boosts are only used by the 2×2 rotation–boost–scaling split.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::generators::{eval_word, simplify, BlockGenerator, GeneratorWord};
use crate::matrix::FloatMatrix;
use crate::perm::SignedPermutation;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// `|det|` floor for the matrix rescaled to unit RMS entry size.
pub const SINGULARITY_FLOOR: f64 = 1e-12;

/// Entries below this magnitude are treated as already eliminated.
const ELIMINATION_EPS: f64 = 4.0 * f64::EPSILON;

/// Grid resolution and refinement budget of the angle search.
const ANGLE_GRID: usize = 4096;
const BISECTION_STEPS: usize = 100;

/// Factors `a` as `[Scalar] [ArrowPerm] rotations.. scalings.. rotations..`.
///
/// The returned word is simplified; callers measure its quality with
/// [`verify`].
pub fn factor_gl(a: &FloatMatrix, tol: f64) -> Result<GeneratorWord> {
    let n = a.n();
    let norm = a.frobenius_norm();
    let svd = a.as_dmatrix().clone().svd(true, true);
    let mut u = svd.u.expect("left singular vectors requested");
    let mut v_t = svd.v_t.expect("right singular vectors requested");
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();

    let log_det: f64 = sigma.iter().map(|s| s.ln()).sum();
    let log_rms = (norm / (n as f64).sqrt()).ln();
    let balanced = (log_det - n as f64 * log_rms).exp();
    if norm == 0.0 || balanced.is_nan() || balanced <= SINGULARITY_FLOOR {
        return Err(Error::NotInvertible {
            det_abs: log_det.exp(),
        });
    }
    let lambda = (log_det / n as f64).exp();

    // Fix the U·Vᵀ sign freedom: nonnegative diagonal of U, then det V = +1.
    for k in 0..n {
        if u[(k, k)] < 0.0 {
            u.column_mut(k).neg_mut();
            v_t.row_mut(k).neg_mut();
        }
    }
    if v_t.determinant() < 0.0 {
        u.column_mut(n - 1).neg_mut();
        v_t.row_mut(n - 1).neg_mut();
    }

    let mut letters = vec![BlockGenerator::Scalar(lambda)];
    let flip = u.determinant() < 0.0;
    if flip {
        letters.push(BlockGenerator::ArrowPerm(SignedPermutation::inversion(
            n, 1,
        )?));
        u.row_mut(0).neg_mut();
    }

    let scaled = a.scale(1.0 / lambda);
    let (left, diag, right) = if is_orthogonal(scaled.as_dmatrix(), 64.0 * f64::EPSILON * n as f64)
    {
        // Already orthogonal: skip the SVD factors, they are not unique.
        let mut q = scaled.into_dmatrix();
        if flip {
            q.row_mut(0).neg_mut();
        }
        (q, vec![1.0; n], DMatrix::identity(n, n))
    } else {
        let d = sigma.iter().map(|s| s / lambda).collect();
        (u, d, v_t)
    };

    let so_tol = tol.max(1e3 * f64::EPSILON * n as f64);
    let mut word = GeneratorWord::new(n, letters)?;
    word = word.concat(&factor_so(&FloatMatrix::new(left)?, so_tol)?)?;
    word = word.concat(&factor_diag(&diag, so_tol)?)?;
    word = word.concat(&factor_so(&FloatMatrix::new(right)?, so_tol)?)?;
    Ok(simplify(&word))
}

fn is_orthogonal(q: &DMatrix<f64>, tol: f64) -> bool {
    let n = q.nrows();
    (q.transpose() * q - DMatrix::<f64>::identity(n, n)).norm() <= tol
}

/// Adjacent Givens factorization of an orthogonal matrix.
///
/// Columns are cleared left to right, each from the bottom up with the row
/// pair `(i, i+1)`. The leftover diagonal of `±1` becomes one trailing
/// signed permutation.
pub fn factor_so(q: &FloatMatrix, tol: f64) -> Result<GeneratorWord> {
    let n = q.n();
    let m = q.as_dmatrix();
    let deviation = (m.transpose() * m - DMatrix::<f64>::identity(n, n)).norm();
    let det = q.determinant();
    if deviation > tol || (det.abs() - 1.0).abs() > tol {
        return Err(Error::NotOrthogonal {
            deviation: deviation.max((det.abs() - 1.0).abs()),
        });
    }

    let mut r = m.clone();
    let mut letters = Vec::new();
    for col in 0..n.saturating_sub(1) {
        for i in (col..n - 1).rev() {
            let (a, b) = (r[(i, col)], r[(i + 1, col)]);
            if b.abs() <= ELIMINATION_EPS {
                r[(i + 1, col)] = 0.0;
                continue;
            }
            let theta = b.atan2(a);
            let (s, c) = theta.sin_cos();
            for k in 0..n {
                let (x, y) = (r[(i, k)], r[(i + 1, k)]);
                r[(i, k)] = c * x + s * y;
                r[(i + 1, k)] = -s * x + c * y;
            }
            r[(i + 1, col)] = 0.0;
            letters.push(BlockGenerator::rotation(i + 1, i + 2, theta));
        }
    }
    let signs: Vec<i32> = (0..n)
        .map(|k| {
            if r[(k, k)] < 0.0 {
                -(k as i32 + 1)
            } else {
                k as i32 + 1
            }
        })
        .collect();
    let d = SignedPermutation::new(signs)?;
    if !d.is_identity() {
        letters.push(BlockGenerator::ArrowPerm(d));
    }
    GeneratorWord::new(n, letters)
}

/// Adjacent scalings for a positive diagonal with unit product:
/// `Scaling(k, k+1, a_k)` with `a_k = Σ_{i≤k} ln d_i`.
pub fn factor_diag(d: &[f64], tol: f64) -> Result<GeneratorWord> {
    let n = d.len();
    if n == 0 {
        return Err(Error::DegenerateDegree);
    }
    if let Some((index, &value)) = d
        .iter()
        .enumerate()
        .find(|(_, v)| !(v.is_finite() && **v > 0.0))
    {
        return Err(Error::NonPositiveEntry { index, value });
    }
    let product: f64 = d.iter().product();
    if (product - 1.0).abs() > tol {
        return Err(Error::ProductNotOne { product });
    }
    let mut acc = 0.0;
    let mut letters = Vec::with_capacity(n - 1);
    for (k, v) in d.iter().take(n - 1).enumerate() {
        acc += v.ln();
        letters.push(BlockGenerator::scaling(k + 1, k + 2, acc));
    }
    Ok(simplify(&GeneratorWord::new(n, letters)?))
}

/// Parameters of `M = Rotation(θ) · Boost(x) · Scaling(y)` in `SL(2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationBoostScaling {
    pub theta: f64,
    pub rapidity: f64,
    pub log_scale: f64,
    /// Relative Frobenius residual of the reconstruction.
    pub residual: f64,
}

impl RotationBoostScaling {
    pub fn to_word(&self) -> GeneratorWord {
        GeneratorWord::new(
            2,
            vec![
                BlockGenerator::rotation(1, 2, self.theta),
                BlockGenerator::boost(1, 2, self.rapidity),
                BlockGenerator::scaling(1, 2, self.log_scale),
            ],
        )
        .expect("finite parameters")
    }
}

/// Splits a determinant-one 2×2 matrix into rotation, boost and scaling.
///
/// With `N = Rotation(−θ)·M`, the first column of `Boost(x)·Scaling(y)` is
/// `e^y (cosh x, sinh x)`, which fixes `x` and `y` once `θ` is known. The
/// remaining condition `N₁₂ (N₁₁² − N₂₁²) = N₂₁` is a trigonometric
/// polynomial in `θ`, solved by a grid scan with bisection on sign changes.
pub fn factor_sl2_rbt(m: &FloatMatrix, tol: f64) -> Result<RotationBoostScaling> {
    if m.n() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: m.n(),
        });
    }
    let det = m.determinant();
    if (det - 1.0).abs() > tol {
        return Err(Error::DeterminantNotOne { det });
    }
    let (m11, m12, m21, m22) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let rotated = |theta: f64| {
        let (s, c) = theta.sin_cos();
        (c * m11 + s * m21, c * m12 + s * m22, -s * m11 + c * m21)
    };
    // None where the rotated first column is not inside the boost cone.
    let constraint = |theta: f64| {
        let (r, n12, s) = rotated(theta);
        (r > s.abs()).then_some(n12 * (r * r - s * s) - s)
    };
    let norm = m.frobenius_norm();
    let reconstruct = |theta: f64| -> Option<RotationBoostScaling> {
        let (r, _, s) = rotated(theta);
        if r <= s.abs() {
            return None;
        }
        let rapidity = (s / r).atanh();
        let log_scale = 0.5 * ((r - s) * (r + s)).ln();
        let mut out = RotationBoostScaling {
            theta,
            rapidity,
            log_scale,
            residual: f64::INFINITY,
        };
        let e = eval_word(&out.to_word());
        out.residual = e.distance(m).ok()? / norm;
        out.residual.is_finite().then_some(out)
    };

    let step = 2.0 * PI / ANGLE_GRID as f64;
    let grid: Vec<(f64, Option<f64>)> = (0..=ANGLE_GRID)
        .map(|k| {
            let theta = -PI + step * k as f64;
            (theta, constraint(theta))
        })
        .collect();

    let mut candidates = Vec::new();
    for w in grid.windows(2) {
        let ((t0, g0), (t1, g1)) = (w[0], w[1]);
        match (g0, g1) {
            (Some(0.0), _) => candidates.push(t0),
            (Some(g0), Some(g1)) if g0.signum() != g1.signum() => {
                let (mut lo, mut hi, mut glo) = (t0, t1, g0);
                for _ in 0..BISECTION_STEPS {
                    let mid = 0.5 * (lo + hi);
                    match constraint(mid) {
                        Some(0.0) => {
                            lo = mid;
                            hi = mid;
                            break;
                        }
                        Some(gm) if gm.signum() == glo.signum() => {
                            lo = mid;
                            glo = gm;
                        }
                        _ => hi = mid,
                    }
                }
                candidates.push(0.5 * (lo + hi));
            }
            _ => {}
        }
    }
    // Tangential roots give no sign change: refine local minima of |g|.
    for k in 1..grid.len() - 1 {
        if let (Some(a), Some(b), Some(c)) = (grid[k - 1].1, grid[k].1, grid[k + 1].1) {
            if b.abs() <= a.abs() && b.abs() <= c.abs() {
                candidates.push(golden_min(
                    |t| constraint(t).map_or(f64::INFINITY, f64::abs),
                    grid[k - 1].0,
                    grid[k + 1].0,
                ));
            }
        }
    }

    let mut best: Option<RotationBoostScaling> = None;
    let mut best_accepted: Option<RotationBoostScaling> = None;
    for theta in candidates {
        let theta = if theta <= -PI {
            theta + 2.0 * PI
        } else {
            theta
        };
        let Some(f) = reconstruct(theta) else {
            continue;
        };
        if best.is_none_or(|b| f.residual < b.residual) {
            best = Some(f);
        }
        if f.residual <= tol && best_accepted.is_none_or(|b| f.theta.abs() < b.theta.abs()) {
            best_accepted = Some(f);
        }
    }
    best_accepted.ok_or(Error::NoRootFound {
        best_residual: best.map_or(f64::INFINITY, |b| b.residual),
    })
}

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..BISECTION_STEPS {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Relative Frobenius residual `‖eval(w) − A‖_F / ‖A‖_F`.
pub fn verify(w: &GeneratorWord, a: &FloatMatrix) -> Result<f64> {
    if w.degree() != a.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: w.degree(),
        });
    }
    Ok(eval_word(w).distance(a)? / a.frobenius_norm())
}

/// Determinant of the word with its scalar letters removed.
pub fn unimodular_part_det(w: &GeneratorWord) -> f64 {
    let rest: Vec<BlockGenerator> = w
        .letters()
        .iter()
        .filter(|g| !matches!(g, BlockGenerator::Scalar(_)))
        .cloned()
        .collect();
    let rest = GeneratorWord::new(w.degree(), rest).expect("subword of a valid word");
    eval_word(&rest).determinant()
}
