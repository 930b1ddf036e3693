//! Signed ("arrow") permutations of degree `n`.
//!
//! An element maps each position `i` in `1..=n` to a signed image `±k`, the
//! absolute values forming an ordinary permutation. The action on negative
//! points is fixed by `p(-k) = -p(k)` and is never stored.
//!
//! Composition applies the right operand first: `(p∘q)(i) = p(q(i))`.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default degree cap for exhaustive enumeration (`2^6 * 6! = 46080`).
pub const DEFAULT_ENUMERATION_CAP: usize = 6;

/// A sign-decorated bijection of `{1..n}`.
///
/// Ordering is lexicographic on the image sequence under the integer order,
/// so `-k` sorts before `+k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i32>", into = "Vec<i32>")]
pub struct SignedPermutation {
    images: Vec<i32>,
}

impl SignedPermutation {
    /// Builds a permutation from 1-based signed images.
    pub fn new(images: Vec<i32>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::DegenerateDegree);
        }
        let mut seen = vec![false; n];
        for &v in &images {
            if v == 0 {
                return Err(Error::InvalidPermutation("image 0 is not allowed".into()));
            }
            let a = v.unsigned_abs() as usize;
            if a > n {
                return Err(Error::InvalidPermutation(format!(
                    "image {v} out of range for degree {n}"
                )));
            }
            if seen[a - 1] {
                return Err(Error::InvalidPermutation(format!(
                    "absolute value {a} appears twice"
                )));
            }
            seen[a - 1] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::DegenerateDegree);
        }
        Ok(Self {
            images: (1..=n as i32).collect(),
        })
    }

    /// The elementary inversion flipping the sign at position `i`.
    pub fn inversion(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { i, j: i, n });
        }
        let mut p = Self::identity(n)?;
        p.images[i - 1] = -p.images[i - 1];
        Ok(p)
    }

    /// The plain transposition exchanging positions `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::IndexOutOfRange { i, j, n });
        }
        let mut p = Self::identity(n)?;
        p.images.swap(i - 1, j - 1);
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[i32] {
        &self.images
    }

    /// Image of a signed point `k ∈ {±1..±n}`.
    pub fn apply(&self, k: i32) -> i32 {
        let v = self.images[k.unsigned_abs() as usize - 1];
        if k < 0 {
            -v
        } else {
            v
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &v)| v == i as i32 + 1)
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::DimensionMismatch {
                expected: self.degree(),
                found: other.degree(),
            });
        }
        Ok(Self {
            images: other.images.iter().map(|&k| self.apply(k)).collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v.unsigned_abs() as usize - 1] = v.signum() * (i as i32 + 1);
        }
        Self { images }
    }

    /// Parity: sign of the underlying permutation times the product of the
    /// image signs. Equals the determinant of the matrix realization.
    pub fn sign(&self) -> i8 {
        let n = self.degree();
        let mut visited = vec![false; n];
        let mut parity = 1i8;
        for start in 0..n {
            if visited[start] {
                continue;
            }
            let mut len = 0;
            let mut cur = start;
            while !visited[cur] {
                visited[cur] = true;
                cur = self.images[cur].unsigned_abs() as usize - 1;
                len += 1;
            }
            if len % 2 == 0 {
                parity = -parity;
            }
        }
        let negatives = self.images.iter().filter(|&&v| v < 0).count();
        if negatives % 2 == 1 {
            -parity
        } else {
            parity
        }
    }

    /// Disjoint arrow cycles; fixed points with positive sign are omitted.
    pub fn cycle_decomposition(&self) -> Vec<ArrowCycle> {
        let n = self.degree();
        let mut visited = vec![false; n];
        let mut cycles = Vec::new();
        for start in 1..=n {
            if visited[start - 1] {
                continue;
            }
            let mut support = Vec::new();
            let mut signs = Vec::new();
            let mut cur = start;
            while !visited[cur - 1] {
                visited[cur - 1] = true;
                support.push(cur);
                let v = self.images[cur - 1];
                signs.push(v.signum() as i8);
                cur = v.unsigned_abs() as usize;
            }
            let cycle = ArrowCycle { support, signs };
            if cycle.len() > 1 || cycle.closing_sign() < 0 {
                cycles.push(cycle);
            }
        }
        cycles
    }

    /// Rebuilds a permutation of degree `n` from disjoint arrow cycles.
    pub fn from_cycles(n: usize, cycles: &[ArrowCycle]) -> Result<Self> {
        let mut images: Vec<i32> = (1..=n as i32).collect();
        let mut touched = vec![false; n];
        for c in cycles {
            if c.support.is_empty() || c.support.len() != c.signs.len() {
                return Err(Error::InvalidPermutation("malformed cycle".into()));
            }
            for (t, &a) in c.support.iter().enumerate() {
                if a == 0 || a > n || touched[a - 1] {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle position {a} is out of range or repeated"
                    )));
                }
                touched[a - 1] = true;
                let next = c.support[(t + 1) % c.support.len()] as i32;
                images[a - 1] = i32::from(c.signs[t]) * next;
            }
        }
        Self::new(images)
    }

    /// A word in adjacent transpositions and elementary inversions whose
    /// right-to-left evaluation reproduces `self`.
    ///
    /// The word is `s_{a1} ∘ … ∘ s_{am} ∘ d_{b1} ∘ … ∘ d_{bk}`: the plain
    /// permutation comes from bubble sort, the inversions carry the signs.
    pub fn to_word(&self) -> PermWord {
        let n = self.degree();
        let mut abs: Vec<usize> = self
            .images
            .iter()
            .map(|v| v.unsigned_abs() as usize)
            .collect();
        // abs ∘ s_{i1} ∘ … ∘ s_{im} = id, hence abs = s_{im} ∘ … ∘ s_{i1}
        let mut swaps = Vec::new();
        while let Some(i) = (0..n.saturating_sub(1)).find(|&i| abs[i] > abs[i + 1]) {
            abs.swap(i, i + 1);
            swaps.push(i + 1);
        }
        let mut letters: Vec<PermLetter> = swaps
            .into_iter()
            .rev()
            .map(PermLetter::AdjacentTransposition)
            .collect();
        letters.extend(
            self.images
                .iter()
                .enumerate()
                .filter(|(_, &v)| v < 0)
                .map(|(i, _)| PermLetter::ElementaryInversion(i + 1)),
        );
        PermWord { degree: n, letters }
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for SignedPermutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected a bracketed list, got {s:?}")))?;
        let images = inner
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<i32>()
                    .map_err(|e| Error::Parse(format!("bad image {tok:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(images)
    }
}

impl TryFrom<Vec<i32>> for SignedPermutation {
    type Error = Error;

    fn try_from(images: Vec<i32>) -> Result<Self> {
        Self::new(images)
    }
}

impl From<SignedPermutation> for Vec<i32> {
    fn from(p: SignedPermutation) -> Self {
        p.images
    }
}

/// One cycle of an arrow permutation.
///
/// `signs[t]` is the sign picked up on the step `support[t] -> support[t+1]`
/// (cyclically). The closing sign is their product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowCycle {
    pub support: Vec<usize>,
    pub signs: Vec<i8>,
}

impl ArrowCycle {
    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn closing_sign(&self) -> i8 {
        self.signs.iter().product()
    }
}

/// Written as `(a1 ±a2 … ±ak | s)`: each point after the first carries the
/// sign of the step into it and `s` is the closing sign.
impl fmt::Display for ArrowCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (t, a) in self.support.iter().enumerate() {
            if t == 0 {
                write!(f, "{a}")?;
            } else if self.signs[t - 1] < 0 {
                write!(f, " -{a}")?;
            } else {
                write!(f, " {a}")?;
            }
        }
        let s = if self.closing_sign() < 0 { '-' } else { '+' };
        write!(f, " | {s})")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PermLetter {
    /// Swaps positions `i` and `i + 1`.
    AdjacentTransposition(usize),
    /// Flips the sign at position `i`.
    ElementaryInversion(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermWord {
    pub degree: usize,
    pub letters: Vec<PermLetter>,
}

impl PermWord {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Product of the letters, leftmost letter applied last.
    pub fn evaluate(&self) -> Result<SignedPermutation> {
        let n = self.degree;
        let mut acc = SignedPermutation::identity(n)?;
        for letter in self.letters.iter().rev() {
            let g = match *letter {
                PermLetter::AdjacentTransposition(i) => {
                    if i == 0 || i >= n {
                        return Err(Error::IndexOutOfRange { i, j: i + 1, n });
                    }
                    SignedPermutation::transposition(n, i, i + 1)?
                }
                PermLetter::ElementaryInversion(i) => SignedPermutation::inversion(n, i)?,
            };
            acc = g.compose(&acc)?;
        }
        Ok(acc)
    }
}

pub fn identity(n: usize) -> Result<SignedPermutation> {
    SignedPermutation::identity(n)
}

/// All `2^n * n!` elements in canonical (lexicographic) order.
pub fn enumerate_group(n: usize) -> Result<Vec<SignedPermutation>> {
    enumerate_group_with_cap(n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_group_with_cap(n: usize, cap: usize) -> Result<Vec<SignedPermutation>> {
    if n == 0 {
        return Err(Error::DegenerateDegree);
    }
    if n > cap {
        return Err(Error::ResourceLimit { degree: n, cap });
    }
    let candidates: Vec<i32> = (-(n as i32)..=n as i32).filter(|&v| v != 0).collect();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fill(&candidates, &mut current, &mut used, &mut out);
    Ok(out)
}

fn fill(
    candidates: &[i32],
    current: &mut Vec<i32>,
    used: &mut [bool],
    out: &mut Vec<SignedPermutation>,
) {
    if current.len() == used.len() {
        out.push(SignedPermutation {
            images: current.clone(),
        });
        return;
    }
    for &v in candidates {
        let a = v.unsigned_abs() as usize - 1;
        if used[a] {
            continue;
        }
        used[a] = true;
        current.push(v);
        fill(candidates, current, used, out);
        current.pop();
        used[a] = false;
    }
}

/// Uniform sample from the group: Fisher–Yates on the absolute values and
/// independent fair signs. Deterministic in `seed`.
pub fn random_element(n: usize, seed: u64) -> Result<SignedPermutation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_element_with(n, &mut rng)
}

pub fn random_element_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<SignedPermutation> {
    if n == 0 {
        return Err(Error::DegenerateDegree);
    }
    let mut images: Vec<i32> = (1..=n as i32).collect();
    images.shuffle(rng);
    for v in images.iter_mut() {
        if rng.gen::<bool>() {
            *v = -*v;
        }
    }
    Ok(SignedPermutation { images })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(v: &[i32]) -> SignedPermutation {
        SignedPermutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn identity_basics() {
        assert_eq!(identity(3).unwrap().images(), &[1, 2, 3]);
        assert_eq!(identity(0), Err(Error::DegenerateDegree));
        let p = sp(&[2, -1]);
        assert_eq!(identity(2).unwrap().compose(&p).unwrap(), p);
        assert_eq!(p.compose(&identity(2).unwrap()).unwrap(), p);
        assert_eq!(identity(4).unwrap().sign(), 1);
    }

    #[test]
    fn compose_examples() {
        let p = sp(&[2, -1]);
        assert_eq!(p.compose(&p).unwrap(), sp(&[-1, -2]));
        assert_eq!(sp(&[2, 1]).compose(&sp(&[-1, 2])).unwrap(), sp(&[-2, 1]));
        assert!(matches!(
            p.compose(&identity(3).unwrap()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(sp(&[2, -1]).inverse(), sp(&[-2, 1]));
        assert_eq!(identity(5).unwrap().inverse(), identity(5).unwrap());
        assert_eq!(sp(&[-1, 2]).inverse(), sp(&[-1, 2]));
    }

    #[test]
    fn sign_examples() {
        assert_eq!(sp(&[2, -1]).sign(), 1);
        assert_eq!(sp(&[-1, 2]).sign(), -1);
        assert_eq!(sp(&[2, 1, 3]).sign(), -1);
    }

    #[test]
    fn cycles_examples() {
        let c = sp(&[2, -1]).cycle_decomposition();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].support, vec![1, 2]);
        assert_eq!(c[0].closing_sign(), -1);
        assert_eq!(c[0].to_string(), "(1 2 | -)");

        assert!(identity(3).unwrap().cycle_decomposition().is_empty());

        let c = sp(&[-1, 2]).cycle_decomposition();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].support, vec![1]);
        assert_eq!(c[0].closing_sign(), -1);

        let c = sp(&[-2, 1]).cycle_decomposition();
        assert_eq!(c[0].to_string(), "(1 -2 | -)");
    }

    #[test]
    fn word_examples() {
        assert_eq!(
            sp(&[-1, 2]).to_word().letters,
            vec![PermLetter::ElementaryInversion(1)]
        );
        assert_eq!(
            sp(&[2, 1]).to_word().letters,
            vec![PermLetter::AdjacentTransposition(1)]
        );
        let w = sp(&[-2, 1]).to_word();
        assert_eq!(w.len(), 2);
        assert_eq!(w.evaluate().unwrap(), sp(&[-2, 1]));
    }

    #[test]
    fn enumeration_sizes_and_order() {
        let e1 = enumerate_group(1).unwrap();
        assert_eq!(e1, vec![sp(&[-1]), sp(&[1])]);
        assert_eq!(enumerate_group(2).unwrap().len(), 8);
        let e3 = enumerate_group(3).unwrap();
        assert_eq!(e3.len(), 48);
        assert!(e3.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(
            enumerate_group(7),
            Err(Error::ResourceLimit { degree: 7, cap: 6 })
        );
    }

    #[test]
    fn random_is_deterministic() {
        assert_eq!(
            random_element(5, 42).unwrap(),
            random_element(5, 42).unwrap()
        );
        let p = random_element(1, 7).unwrap();
        assert!(p == sp(&[1]) || p == sp(&[-1]));
    }

    #[test]
    fn parse_and_display() {
        let p: SignedPermutation = "[2, -1, 3]".parse().unwrap();
        assert_eq!(p.to_string(), "[2,-1,3]");
        assert!("[0,1]".parse::<SignedPermutation>().is_err());
        assert!("[1,-1]".parse::<SignedPermutation>().is_err());
        assert!("[1,3]".parse::<SignedPermutation>().is_err());
        assert!("1,2".parse::<SignedPermutation>().is_err());
        assert!("[]".parse::<SignedPermutation>().is_err());
    }

    #[test]
    fn from_cycles_rejects_overlap() {
        let c = ArrowCycle {
            support: vec![1, 2],
            signs: vec![1, 1],
        };
        assert!(SignedPermutation::from_cycles(2, &[c.clone(), c]).is_err());
    }
}
