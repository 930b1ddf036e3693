//! The rational group algebra of the signed permutation group.
//!
//! Elements are finitely supported rational combinations of permutations;
//! the product is the bilinear extension of composition. The linear
//! extension of the realization, [`AlgebraElement::to_matrix`], is an
//! algebra homomorphism onto the full matrix algebra.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::{parse_rational, rank_of_rows, solve_exact, Rational, RationalMatrix};
use crate::perm::{enumerate_group_with_cap, SignedPermutation, DEFAULT_ENUMERATION_CAP};
use crate::realization::realize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    degree: usize,
    terms: BTreeMap<SignedPermutation, Rational>,
}

impl AlgebraElement {
    pub fn zero(degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::DegenerateDegree);
        }
        Ok(Self {
            degree,
            terms: BTreeMap::new(),
        })
    }

    /// `1·e`, the multiplicative unit.
    pub fn unit(degree: usize) -> Result<Self> {
        Ok(Self::term(
            SignedPermutation::identity(degree)?,
            Rational::one(),
        ))
    }

    pub fn term(p: SignedPermutation, coeff: Rational) -> Self {
        let mut terms = BTreeMap::new();
        let degree = p.degree();
        if !coeff.is_zero() {
            terms.insert(p, coeff);
        }
        Self { degree, terms }
    }

    pub fn from_terms<I>(degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (SignedPermutation, Rational)>,
    {
        let mut out = Self::zero(degree)?;
        for (p, c) in terms {
            if p.degree() != degree {
                return Err(Error::DimensionMismatch {
                    expected: degree,
                    found: p.degree(),
                });
            }
            out.accumulate(p, c);
        }
        Ok(out)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.is_empty()
    }

    pub fn coeff(&self, p: &SignedPermutation) -> Rational {
        self.terms.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in canonical permutation order.
    pub fn terms(&self) -> impl Iterator<Item = (&SignedPermutation, &Rational)> {
        self.terms.iter()
    }

    fn accumulate(&mut self, p: SignedPermutation, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(p) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    fn check_degree(&self, other: &Self) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_degree(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.accumulate(p.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self {
                degree: self.degree,
                terms: BTreeMap::new(),
            };
        }
        Self {
            degree: self.degree,
            terms: self.terms.iter().map(|(p, c)| (p.clone(), c * k)).collect(),
        }
    }

    /// Convolution product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_degree(other)?;
        let mut out = Self::zero(self.degree)?;
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                out.accumulate(p.compose(q)?, a * b);
            }
        }
        Ok(out)
    }

    /// `Σ coeff · realize(p)`.
    pub fn to_matrix(&self) -> RationalMatrix {
        let n = self.degree;
        let mut m = RationalMatrix::zeros(n);
        for (p, c) in &self.terms {
            for (j, &v) in p.images().iter().enumerate() {
                let row = v.unsigned_abs() as usize - 1;
                let entry = if v < 0 { -c.clone() } else { c.clone() };
                let cur = m[(row, j)].clone();
                m.set(row, j, cur + entry);
            }
        }
        m
    }

    /// Unit of the algebra iff its image matrix is invertible.
    pub fn is_invertible(&self) -> bool {
        !self.to_matrix().determinant().is_zero()
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(p, c)| json!({ "perm": p.images(), "coeff": c.to_string() }))
            .collect();
        json!({ "n": self.degree, "terms": terms })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let n = value
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing integer \"n\"".into()))? as usize;
        let terms = value
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing array \"terms\"".into()))?;
        let mut parsed = Vec::with_capacity(terms.len());
        for t in terms {
            let perm: Vec<i32> = serde_json::from_value(
                t.get("perm")
                    .cloned()
                    .ok_or_else(|| Error::Parse("term without \"perm\"".into()))?,
            )
            .map_err(|e| Error::Parse(e.to_string()))?;
            let coeff = match t.get("coeff") {
                Some(Value::String(s)) => parse_rational(s)?,
                Some(Value::Number(num)) => num
                    .as_i64()
                    .map(|i| Rational::from_integer(i.into()))
                    .ok_or_else(|| Error::Parse(format!("coefficient {num} is not exact")))?,
                _ => return Err(Error::Parse("term without \"coeff\"".into())),
            };
            parsed.push((SignedPermutation::new(perm)?, coeff));
        }
        Self::from_terms(n, parsed)
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&v)
    }
}

fn vectorize(p: &SignedPermutation) -> Vec<Rational> {
    realize(p).entries().to_vec()
}

/// `n²` permutations whose realizations are linearly independent, chosen by
/// a greedy scan: the identity first, then the group in canonical order.
pub fn spanning_basis(n: usize) -> Result<Vec<SignedPermutation>> {
    spanning_basis_with_cap(n, DEFAULT_ENUMERATION_CAP)
}

pub fn spanning_basis_with_cap(n: usize, cap: usize) -> Result<Vec<SignedPermutation>> {
    let target = n * n;
    let mut basis = Vec::with_capacity(target);
    // reduced rows with their pivot columns, kept in echelon form
    let mut reduced: Vec<(usize, Vec<Rational>)> = Vec::with_capacity(target);
    let identity = SignedPermutation::identity(n)?;
    let scan = std::iter::once(identity.clone()).chain(
        enumerate_group_with_cap(n, cap)?
            .into_iter()
            .filter(|p| *p != identity),
    );
    for p in scan {
        let mut v = vectorize(&p);
        for (pivot, row) in &reduced {
            if v[*pivot].is_zero() {
                continue;
            }
            let factor = v[*pivot].clone() / &row[*pivot];
            for (x, r) in v.iter_mut().zip(row) {
                *x -= &factor * r;
            }
        }
        if let Some(pivot) = v.iter().position(|x| !x.is_zero()) {
            reduced.push((pivot, v));
            basis.push(p);
            if basis.len() == target {
                break;
            }
        }
    }
    if basis.len() != target {
        return Err(Error::Internal(format!(
            "realizations span only {} of {target} dimensions",
            basis.len()
        )));
    }
    Ok(basis)
}

/// Exact rank of the vectorized realizations of the given permutations.
pub fn realization_rank(perms: &[SignedPermutation]) -> usize {
    let rows: Vec<Vec<Rational>> = perms.iter().map(vectorize).collect();
    rank_of_rows(&rows)
}

/// Two-term element mapping to the matrix unit `E_ij` (1-based).
///
/// `p⁺` is the transposition `(i j)` (the identity when `i = j`), so
/// `p⁺(j) = +i`; `p⁻` flips the sign at `j`. Then
/// `½·realize(p⁺) − ½·realize(p⁻)` keeps only column `j`'s entry at row `i`.
pub fn matrix_unit(i: usize, j: usize, n: usize) -> Result<AlgebraElement> {
    if i == 0 || j == 0 || i > n || j > n {
        return Err(Error::IndexOutOfRange { i, j, n });
    }
    let plus = SignedPermutation::transposition(n, i, j)?;
    let mut images = plus.images().to_vec();
    images[j - 1] = -images[j - 1];
    let minus = SignedPermutation::new(images)?;
    let half = Rational::new(1.into(), 2.into());
    AlgebraElement::from_terms(n, [(plus, half.clone()), (minus, -half)])
}

/// Preimage of `m` supported on [`spanning_basis`], found by an exact
/// `n² × n²` solve.
pub fn express_matrix(m: &RationalMatrix) -> Result<AlgebraElement> {
    express_matrix_with_cap(m, DEFAULT_ENUMERATION_CAP)
}

pub fn express_matrix_with_cap(m: &RationalMatrix, cap: usize) -> Result<AlgebraElement> {
    let n = m.n();
    let basis = spanning_basis_with_cap(n, cap)?;
    let columns: Vec<Vec<Rational>> = basis.iter().map(vectorize).collect();
    let dim = n * n;
    let system: Vec<Vec<Rational>> = (0..dim)
        .map(|r| columns.iter().map(|col| col[r].clone()).collect())
        .collect();
    let coeffs = solve_exact(&system, m.entries())
        .ok_or_else(|| Error::Internal("spanning basis system is singular".into()))?;
    let out = AlgebraElement::from_terms(n, basis.into_iter().zip(coeffs))?;
    if out.to_matrix() != *m {
        return Err(Error::Internal(
            "expression does not reproduce the matrix".into(),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{int, rational};

    fn sp(v: &[i32]) -> SignedPermutation {
        SignedPermutation::new(v.to_vec()).unwrap()
    }

    fn half() -> Rational {
        rational(1, 2)
    }

    #[test]
    fn add_examples() {
        let p = sp(&[2, -1, 3]);
        let x = AlgebraElement::term(p.clone(), rational(3, 7));
        assert_eq!(x.add(&AlgebraElement::zero(3).unwrap()).unwrap(), x);
        let cancel = AlgebraElement::term(p.clone(), int(1))
            .add(&AlgebraElement::term(p.clone(), int(-1)))
            .unwrap();
        assert!(cancel.is_zero());
        let halves = AlgebraElement::term(p.clone(), half())
            .add(&AlgebraElement::term(p.clone(), half()))
            .unwrap();
        assert_eq!(halves, AlgebraElement::term(p, int(1)));
        assert!(x.add(&AlgebraElement::zero(2).unwrap()).is_err());
    }

    #[test]
    fn mul_examples() {
        let p = sp(&[2, -1]);
        let q = sp(&[-2, 1]);
        let prod = AlgebraElement::term(p.clone(), int(1))
            .mul(&AlgebraElement::term(q.clone(), int(1)))
            .unwrap();
        assert_eq!(prod, AlgebraElement::term(p.compose(&q).unwrap(), int(1)));

        let e11 = matrix_unit(1, 2, 2)
            .unwrap()
            .mul(&matrix_unit(2, 1, 2).unwrap())
            .unwrap();
        assert_eq!(e11.to_matrix(), RationalMatrix::unit(2, 1, 1).unwrap());

        let x =
            AlgebraElement::from_terms(2, [(sp(&[2, 1]), rational(2, 3)), (sp(&[-1, -2]), int(5))])
                .unwrap();
        assert_eq!(x.mul(&AlgebraElement::unit(2).unwrap()).unwrap(), x);
    }

    #[test]
    fn to_matrix_examples() {
        assert_eq!(
            AlgebraElement::unit(3).unwrap().to_matrix(),
            RationalMatrix::identity(3)
        );
        let e11 = AlgebraElement::from_terms(2, [(sp(&[1, 2]), half()), (sp(&[-1, 2]), -half())])
            .unwrap();
        assert_eq!(e11.to_matrix(), RationalMatrix::unit(2, 1, 1).unwrap());
        // flipping the sign at position 1 isolates column 1, i.e. E_21
        let x = AlgebraElement::from_terms(2, [(sp(&[2, 1]), half()), (sp(&[-2, 1]), -half())])
            .unwrap();
        assert_eq!(x.to_matrix(), RationalMatrix::unit(2, 2, 1).unwrap());
    }

    #[test]
    fn matrix_unit_examples() {
        let e11 = matrix_unit(1, 1, 2).unwrap();
        assert_eq!(e11.len(), 2);
        assert_eq!(e11.coeff(&sp(&[1, 2])), half());
        assert_eq!(e11.coeff(&sp(&[-1, 2])), -half());

        let e12 = matrix_unit(1, 2, 2).unwrap();
        assert_eq!(e12.coeff(&sp(&[2, 1])), half());
        assert_eq!(e12.coeff(&sp(&[2, -1])), -half());
        assert_eq!(e12.to_matrix(), RationalMatrix::unit(2, 1, 2).unwrap());

        for i in 1..=3 {
            for j in 1..=3 {
                let u = matrix_unit(i, j, 3).unwrap();
                assert_eq!(u.len(), 2);
                assert_eq!(u.to_matrix(), RationalMatrix::unit(3, i, j).unwrap());
            }
        }
        assert!(matrix_unit(0, 1, 2).is_err());
        assert!(matrix_unit(1, 3, 2).is_err());
    }

    #[test]
    fn spanning_basis_small() {
        assert_eq!(spanning_basis(1).unwrap(), vec![sp(&[1])]);
        let b2 = spanning_basis(2).unwrap();
        assert_eq!(
            b2,
            vec![sp(&[1, 2]), sp(&[-2, -1]), sp(&[-2, 1]), sp(&[-1, 2])]
        );
        assert_eq!(realization_rank(&b2), 4);
        let b3 = spanning_basis(3).unwrap();
        assert_eq!(b3.len(), 9);
        assert_eq!(realization_rank(&b3), 9);
        assert!(spanning_basis(7).is_err());
    }

    #[test]
    fn express_examples() {
        let id = express_matrix(&RationalMatrix::identity(2)).unwrap();
        assert_eq!(id, AlgebraElement::unit(2).unwrap());
        let e12 = RationalMatrix::unit(2, 1, 2).unwrap();
        let x = express_matrix(&e12).unwrap();
        assert_eq!(x.to_matrix(), e12);
        let basis = spanning_basis(2).unwrap();
        assert!(x.terms().all(|(p, _)| basis.contains(p)));
        let m = RationalMatrix::from_i64_rows(&[vec![3, -1, 0], vec![2, 7, -5], vec![0, 4, 1]])
            .unwrap();
        assert_eq!(express_matrix(&m).unwrap().to_matrix(), m);
    }

    #[test]
    fn invertibility() {
        assert!(AlgebraElement::unit(2).unwrap().is_invertible());
        assert!(!matrix_unit(1, 1, 2).unwrap().is_invertible());
        for p in crate::perm::enumerate_group(2).unwrap() {
            assert!(AlgebraElement::term(p, int(1)).is_invertible());
        }
    }

    #[test]
    fn json_round_trip() {
        let x = matrix_unit(2, 3, 3).unwrap();
        let back = AlgebraElement::from_json(&x.to_json()).unwrap();
        assert_eq!(back, x);
        assert_eq!(
            x.to_json().to_string(),
            r#"{"n":3,"terms":[{"coeff":"-1/2","perm":[1,3,-2]},{"coeff":"1/2","perm":[1,3,2]}]}"#
        );
    }
}
