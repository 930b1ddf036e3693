//! Generator alphabet for the general linear group: 2×2 blocks (rotation,
//! boost, scaling) embedded on a pair of coordinates, signed permutations,
//! and a positive scalar. Words evaluate left to right.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::matrix::FloatMatrix;
use crate::perm::SignedPermutation;

#[derive(Debug, Clone, PartialEq)]
pub enum BlockGenerator {
    /// `[[cos θ, −sin θ], [sin θ, cos θ]]` on coordinates `(i, j)`.
    Rotation {
        i: usize,
        j: usize,
        theta: f64,
    },
    /// `[[cosh x, sinh x], [sinh x, cosh x]]`.
    Boost {
        i: usize,
        j: usize,
        rapidity: f64,
    },
    /// `diag(e^y, e^−y)`.
    Scaling {
        i: usize,
        j: usize,
        log_scale: f64,
    },
    ArrowPerm(SignedPermutation),
    /// `λ·I` with `λ > 0`.
    Scalar(f64),
}

impl BlockGenerator {
    pub fn rotation(i: usize, j: usize, theta: f64) -> Self {
        Self::Rotation { i, j, theta }
    }

    pub fn boost(i: usize, j: usize, rapidity: f64) -> Self {
        Self::Boost { i, j, rapidity }
    }

    pub fn scaling(i: usize, j: usize, log_scale: f64) -> Self {
        Self::Scaling { i, j, log_scale }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Rotation { .. } => "rot",
            Self::Boost { .. } => "boost",
            Self::Scaling { .. } => "scale",
            Self::ArrowPerm(_) => "perm",
            Self::Scalar(_) => "scalar",
        }
    }

    /// Block positions for the continuous kinds.
    pub fn positions(&self) -> Option<(usize, usize)> {
        match *self {
            Self::Rotation { i, j, .. } | Self::Boost { i, j, .. } | Self::Scaling { i, j, .. } => {
                Some((i, j))
            }
            _ => None,
        }
    }

    pub fn is_continuous(&self) -> bool {
        self.positions().is_some()
    }

    /// The 2×2 block `[[a, b], [c, d]]` of a continuous letter.
    fn block(&self) -> Option<[[f64; 2]; 2]> {
        match *self {
            Self::Rotation { theta, .. } => {
                let (s, c) = theta.sin_cos();
                Some([[c, -s], [s, c]])
            }
            Self::Boost { rapidity, .. } => {
                let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
                Some([[ch, sh], [sh, ch]])
            }
            Self::Scaling { log_scale, .. } => {
                Some([[log_scale.exp(), 0.0], [0.0, (-log_scale).exp()]])
            }
            _ => None,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            Self::Rotation { i, j, theta: p }
            | Self::Boost { i, j, rapidity: p }
            | Self::Scaling { i, j, log_scale: p } => {
                if *i == 0 || *i >= *j || *j > n {
                    return Err(Error::IndexOutOfRange { i: *i, j: *j, n });
                }
                if !p.is_finite() {
                    return Err(Error::InvalidGenerator(format!(
                        "{} parameter {p} is not finite",
                        self.kind()
                    )));
                }
            }
            Self::ArrowPerm(p) => {
                if p.degree() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: p.degree(),
                    });
                }
            }
            Self::Scalar(lambda) => {
                if !(lambda.is_finite() && *lambda > 0.0) {
                    return Err(Error::InvalidGenerator(format!(
                        "scalar {lambda} is not strictly positive"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn inverse(&self) -> Self {
        match self {
            Self::Rotation { i, j, theta } => Self::rotation(*i, *j, -theta),
            Self::Boost { i, j, rapidity } => Self::boost(*i, *j, -rapidity),
            Self::Scaling { i, j, log_scale } => Self::scaling(*i, *j, -log_scale),
            Self::ArrowPerm(p) => Self::ArrowPerm(p.inverse()),
            Self::Scalar(lambda) => Self::Scalar(1.0 / lambda),
        }
    }

    fn is_trivial(&self) -> bool {
        match self {
            Self::Rotation { theta: p, .. }
            | Self::Boost { rapidity: p, .. }
            | Self::Scaling { log_scale: p, .. } => *p == 0.0,
            Self::ArrowPerm(p) => p.is_identity(),
            Self::Scalar(lambda) => *lambda == 1.0,
        }
    }

    /// Product of two adjacent letters as one letter, when they lie in the
    /// same one-parameter block (or both are scalars or both permutations).
    fn merge(&self, next: &Self) -> Option<Self> {
        match (self, next) {
            (
                Self::Rotation { i, j, theta: a },
                Self::Rotation {
                    i: k,
                    j: l,
                    theta: b,
                },
            ) if (i, j) == (k, l) => Some(Self::rotation(*i, *j, a + b)),
            (
                Self::Boost { i, j, rapidity: a },
                Self::Boost {
                    i: k,
                    j: l,
                    rapidity: b,
                },
            ) if (i, j) == (k, l) => Some(Self::boost(*i, *j, a + b)),
            (
                Self::Scaling { i, j, log_scale: a },
                Self::Scaling {
                    i: k,
                    j: l,
                    log_scale: b,
                },
            ) if (i, j) == (k, l) => Some(Self::scaling(*i, *j, a + b)),
            (Self::Scalar(a), Self::Scalar(b)) => Some(Self::Scalar(a * b)),
            (Self::ArrowPerm(p), Self::ArrowPerm(q)) => p.compose(q).ok().map(Self::ArrowPerm),
            _ => None,
        }
    }

    /// Right-multiplies `acc` by this letter's embedding in place.
    fn apply_right(&self, acc: &mut nalgebra::DMatrix<f64>) {
        let n = acc.nrows();
        if let (Some((i, j)), Some([[a, b], [c, d]])) = (self.positions(), self.block()) {
            let (i, j) = (i - 1, j - 1);
            for r in 0..n {
                let (x, y) = (acc[(r, i)], acc[(r, j)]);
                acc[(r, i)] = a * x + c * y;
                acc[(r, j)] = b * x + d * y;
            }
            return;
        }
        match self {
            Self::Scalar(lambda) => *acc *= *lambda,
            Self::ArrowPerm(p) => {
                let old = acc.clone();
                for (col, &v) in p.images().iter().enumerate() {
                    let src = v.unsigned_abs() as usize - 1;
                    let s = f64::from(v.signum());
                    for r in 0..n {
                        acc[(r, col)] = s * old[(r, src)];
                    }
                }
            }
            _ => unreachable!("continuous letters handled above"),
        }
    }
}

impl fmt::Display for BlockGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rotation { i, j, theta } => write!(f, "Rotation({i},{j},{theta})"),
            Self::Boost { i, j, rapidity } => write!(f, "Boost({i},{j},{rapidity})"),
            Self::Scaling { i, j, log_scale } => write!(f, "Scaling({i},{j},{log_scale})"),
            Self::ArrowPerm(p) => write!(f, "ArrowPerm({p})"),
            Self::Scalar(lambda) => write!(f, "Scalar({lambda})"),
        }
    }
}

/// Embeds one letter as an `n × n` matrix.
pub fn embed(g: &BlockGenerator, n: usize) -> Result<FloatMatrix> {
    if n == 0 {
        return Err(Error::DegenerateDegree);
    }
    g.validate(n)?;
    let mut m = nalgebra::DMatrix::identity(n, n);
    g.apply_right(&mut m);
    FloatMatrix::new(m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorWord {
    degree: usize,
    letters: Vec<BlockGenerator>,
}

impl GeneratorWord {
    pub fn new(degree: usize, letters: Vec<BlockGenerator>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::DegenerateDegree);
        }
        for g in &letters {
            g.validate(degree)?;
        }
        Ok(Self { degree, letters })
    }

    pub fn empty(degree: usize) -> Result<Self> {
        Self::new(degree, Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn letters(&self) -> &[BlockGenerator] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Ok(Self {
            degree: self.degree,
            letters,
        })
    }

    pub fn count(&self, kind: &str) -> usize {
        self.letters.iter().filter(|g| g.kind() == kind).count()
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(WordJson::from(self)).expect("word serializes")
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let raw: WordJson =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        raw.try_into()
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&v)
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, g) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "]")
    }
}

/// Left-to-right product of the letter embeddings.
pub fn eval_word(w: &GeneratorWord) -> FloatMatrix {
    let mut acc = nalgebra::DMatrix::identity(w.degree, w.degree);
    for g in &w.letters {
        g.apply_right(&mut acc);
    }
    FloatMatrix::new(acc).expect("word letters are validated and finite")
}

pub fn word_inverse(w: &GeneratorWord) -> GeneratorWord {
    GeneratorWord {
        degree: w.degree,
        letters: w
            .letters
            .iter()
            .rev()
            .map(BlockGenerator::inverse)
            .collect(),
    }
}

/// Merges adjacent letters of the same one-parameter block and drops
/// letters that evaluate to the identity.
pub fn simplify(w: &GeneratorWord) -> GeneratorWord {
    let mut out: Vec<BlockGenerator> = Vec::with_capacity(w.letters.len());
    for g in &w.letters {
        if g.is_trivial() {
            continue;
        }
        match out.last().and_then(|top| top.merge(g)) {
            Some(merged) => {
                out.pop();
                if !merged.is_trivial() {
                    out.push(merged);
                }
            }
            None => out.push(g.clone()),
        }
    }
    GeneratorWord {
        degree: w.degree,
        letters: out,
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct LetterJson {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    i: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    j: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    param: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    perm: Option<Vec<i32>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct WordJson {
    n: usize,
    letters: Vec<LetterJson>,
}

impl From<&BlockGenerator> for LetterJson {
    fn from(g: &BlockGenerator) -> Self {
        let mut out = LetterJson {
            kind: g.kind().to_string(),
            i: None,
            j: None,
            param: None,
            perm: None,
        };
        match g {
            BlockGenerator::Rotation { i, j, theta: p }
            | BlockGenerator::Boost { i, j, rapidity: p }
            | BlockGenerator::Scaling { i, j, log_scale: p } => {
                out.i = Some(*i);
                out.j = Some(*j);
                out.param = Some(*p);
            }
            BlockGenerator::ArrowPerm(p) => out.perm = Some(p.images().to_vec()),
            BlockGenerator::Scalar(lambda) => out.param = Some(*lambda),
        }
        out
    }
}

impl TryFrom<LetterJson> for BlockGenerator {
    type Error = Error;

    fn try_from(l: LetterJson) -> Result<Self> {
        let missing = |field: &str| Error::Parse(format!("{} letter needs \"{field}\"", l.kind));
        let block = || -> Result<(usize, usize, f64)> {
            Ok((
                l.i.ok_or_else(|| missing("i"))?,
                l.j.ok_or_else(|| missing("j"))?,
                l.param.ok_or_else(|| missing("param"))?,
            ))
        };
        Ok(match l.kind.as_str() {
            "rot" => {
                let (i, j, p) = block()?;
                Self::rotation(i, j, p)
            }
            "boost" => {
                let (i, j, p) = block()?;
                Self::boost(i, j, p)
            }
            "scale" => {
                let (i, j, p) = block()?;
                Self::scaling(i, j, p)
            }
            "perm" => Self::ArrowPerm(SignedPermutation::new(
                l.perm.clone().ok_or_else(|| missing("perm"))?,
            )?),
            "scalar" => Self::Scalar(l.param.ok_or_else(|| missing("param"))?),
            other => return Err(Error::Parse(format!("unknown letter kind {other:?}"))),
        })
    }
}

impl From<&GeneratorWord> for WordJson {
    fn from(w: &GeneratorWord) -> Self {
        WordJson {
            n: w.degree,
            letters: w.letters.iter().map(LetterJson::from).collect(),
        }
    }
}

impl TryFrom<WordJson> for GeneratorWord {
    type Error = Error;

    fn try_from(w: WordJson) -> Result<Self> {
        let letters = w
            .letters
            .into_iter()
            .map(BlockGenerator::try_from)
            .collect::<Result<Vec<_>>>()?;
        GeneratorWord::new(w.n, letters)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, LN_2};

    fn close(a: &FloatMatrix, rows: &[Vec<f64>], tol: f64) {
        let b = FloatMatrix::from_rows(rows).unwrap();
        let d = a.distance(&b).unwrap();
        assert!(d <= tol, "distance {d} > {tol}: {a:?}");
    }

    #[test]
    fn embed_examples() {
        let r = embed(&BlockGenerator::rotation(1, 2, FRAC_PI_2), 2).unwrap();
        close(&r, &[vec![0.0, -1.0], vec![1.0, 0.0]], 1e-15);
        let s = embed(&BlockGenerator::scaling(1, 2, LN_2), 2).unwrap();
        close(&s, &[vec![2.0, 0.0], vec![0.0, 0.5]], 1e-15);
        let b = embed(&BlockGenerator::boost(1, 2, 0.0), 3).unwrap();
        assert_eq!(b, FloatMatrix::identity(3));
    }

    #[test]
    fn embed_rejects_bad_letters() {
        assert!(embed(&BlockGenerator::rotation(2, 1, 0.1), 2).is_err());
        assert!(embed(&BlockGenerator::rotation(1, 3, 0.1), 2).is_err());
        assert!(embed(&BlockGenerator::rotation(0, 1, 0.1), 2).is_err());
        assert!(embed(&BlockGenerator::Scalar(0.0), 2).is_err());
        assert!(embed(&BlockGenerator::Scalar(-1.0), 2).is_err());
        assert!(embed(&BlockGenerator::boost(1, 2, f64::NAN), 2).is_err());
        let p = SignedPermutation::identity(3).unwrap();
        assert!(embed(&BlockGenerator::ArrowPerm(p), 2).is_err());
    }

    #[test]
    fn scalar_and_perm_embeddings() {
        let s = embed(&BlockGenerator::Scalar(3.0), 3).unwrap();
        assert_abs_diff_eq!(s.determinant(), 27.0, epsilon = 1e-12);
        let p: SignedPermutation = "[2,-1]".parse().unwrap();
        let m = embed(&BlockGenerator::ArrowPerm(p), 2).unwrap();
        close(&m, &[vec![0.0, -1.0], vec![1.0, 0.0]], 0.0);
    }

    #[test]
    fn eval_examples() {
        assert_eq!(
            eval_word(&GeneratorWord::empty(3).unwrap()),
            FloatMatrix::identity(3)
        );
        let w = GeneratorWord::new(
            2,
            vec![
                BlockGenerator::Scalar(3.0),
                BlockGenerator::rotation(1, 2, FRAC_PI_2),
            ],
        )
        .unwrap();
        close(&eval_word(&w), &[vec![0.0, -3.0], vec![3.0, 0.0]], 1e-15);

        let (a, b) = (0.3, -1.1);
        let w = GeneratorWord::new(
            3,
            vec![
                BlockGenerator::scaling(1, 2, a),
                BlockGenerator::scaling(2, 3, b),
            ],
        )
        .unwrap();
        let d = [a.exp(), (b - a).exp(), (-b).exp()];
        let expected = FloatMatrix::from_diagonal(&d).unwrap();
        assert!(eval_word(&w).distance(&expected).unwrap() < 1e-14);
    }

    #[test]
    fn eval_matches_explicit_products() {
        let p: SignedPermutation = "[3,-1,2]".parse().unwrap();
        let letters = vec![
            BlockGenerator::rotation(1, 3, 0.4),
            BlockGenerator::ArrowPerm(p),
            BlockGenerator::boost(2, 3, -0.7),
            BlockGenerator::Scalar(1.5),
            BlockGenerator::scaling(1, 2, 0.2),
        ];
        let w = GeneratorWord::new(3, letters.clone()).unwrap();
        let mut prod = FloatMatrix::identity(3);
        for g in &letters {
            prod = prod.try_mul(&embed(g, 3).unwrap()).unwrap();
        }
        assert!(eval_word(&w).distance(&prod).unwrap() < 1e-14);
    }

    #[test]
    fn inverse_examples() {
        let w = GeneratorWord::new(2, vec![BlockGenerator::rotation(1, 2, 0.9)]).unwrap();
        assert_eq!(
            word_inverse(&w).letters(),
            &[BlockGenerator::rotation(1, 2, -0.9)]
        );
        let e = GeneratorWord::empty(4).unwrap();
        assert_eq!(word_inverse(&e), e);
    }

    #[test]
    fn simplify_examples() {
        let w = GeneratorWord::new(
            2,
            vec![
                BlockGenerator::rotation(1, 2, 0.25),
                BlockGenerator::rotation(1, 2, 0.5),
            ],
        )
        .unwrap();
        assert_eq!(
            simplify(&w).letters(),
            &[BlockGenerator::rotation(1, 2, 0.75)]
        );

        let w = GeneratorWord::new(2, vec![BlockGenerator::boost(1, 2, 0.0)]).unwrap();
        assert!(simplify(&w).is_empty());

        let w = GeneratorWord::new(
            2,
            vec![BlockGenerator::Scalar(2.0), BlockGenerator::Scalar(3.0)],
        )
        .unwrap();
        assert_eq!(simplify(&w).letters(), &[BlockGenerator::Scalar(6.0)]);
    }

    #[test]
    fn simplify_cascades() {
        let p: SignedPermutation = "[-1,2]".parse().unwrap();
        let w = GeneratorWord::new(
            2,
            vec![
                BlockGenerator::scaling(1, 2, 0.5),
                BlockGenerator::ArrowPerm(p.clone()),
                BlockGenerator::ArrowPerm(p),
                BlockGenerator::scaling(1, 2, -0.5),
            ],
        )
        .unwrap();
        assert!(simplify(&w).is_empty());
    }

    #[test]
    fn json_round_trip() {
        let p: SignedPermutation = "[2,-1,3]".parse().unwrap();
        let w = GeneratorWord::new(
            3,
            vec![
                BlockGenerator::Scalar(2.5),
                BlockGenerator::ArrowPerm(p),
                BlockGenerator::rotation(2, 3, -0.125),
                BlockGenerator::boost(1, 2, 0.5),
                BlockGenerator::scaling(1, 3, 1.0),
            ],
        )
        .unwrap();
        let v = w.to_json();
        assert_eq!(
            v["letters"][0].to_string(),
            r#"{"kind":"scalar","param":2.5}"#
        );
        assert_eq!(GeneratorWord::from_json(&v).unwrap(), w);
        assert!(GeneratorWord::parse_json(r#"{"n":2,"letters":[{"kind":"rot","i":1}]}"#).is_err());
        assert!(GeneratorWord::parse_json(r#"{"n":2,"letters":[{"kind":"spin"}]}"#).is_err());
    }
}
