//! Breadth-first closure of a finite generating set.
//!
//! Elements are deduplicated by an exact canonical key. Each BFS layer is
//! inserted in key order, so tables and recorded words are reproducible.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::perm::SignedPermutation;

pub const DEFAULT_CAP: usize = 1_000_000;

/// Largest table exported as a Cayley graph.
pub const DOT_LIMIT: usize = 200;

/// An exactly comparable group element.
pub trait GroupElement: Clone {
    fn degree(&self) -> usize;
    fn identity_of(degree: usize) -> Result<Self>;
    /// `self · other`.
    fn product(&self, other: &Self) -> Self;
    fn canonical_key(&self) -> String;
}

impl GroupElement for SignedPermutation {
    fn degree(&self) -> usize {
        SignedPermutation::degree(self)
    }

    fn identity_of(degree: usize) -> Result<Self> {
        SignedPermutation::identity(degree)
    }

    fn product(&self, other: &Self) -> Self {
        self.compose(other)
            .expect("degrees checked when the table is built")
    }

    fn canonical_key(&self) -> String {
        self.to_string()
    }
}

impl GroupElement for RationalMatrix {
    fn degree(&self) -> usize {
        self.n()
    }

    fn identity_of(degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::DegenerateDegree);
        }
        Ok(RationalMatrix::identity(degree))
    }

    fn product(&self, other: &Self) -> Self {
        self * other
    }

    fn canonical_key(&self) -> String {
        RationalMatrix::canonical_key(self)
    }
}

#[derive(Debug, Clone)]
pub struct ClosureTable<E> {
    degree: usize,
    generators: Vec<E>,
    elements: Vec<E>,
    keys: Vec<String>,
    words: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
    truncated: bool,
    cap: usize,
}

impl<E: GroupElement> ClosureTable<E> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn generators(&self) -> &[E] {
        &self.generators
    }

    /// Elements in insertion order; the identity comes first.
    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    /// Shortest generator-index word for element `k`, evaluated left to right.
    pub fn word(&self, k: usize) -> &[usize] {
        &self.words[k]
    }

    pub fn key(&self, k: usize) -> &str {
        &self.keys[k]
    }

    pub fn contains(&self, e: &E) -> bool {
        self.index.contains_key(&e.canonical_key())
    }

    pub fn contains_key(&self, key: &str) -> bool {
        self.index.contains_key(key)
    }

    /// Product of the generators named by `word`.
    pub fn eval_word(&self, word: &[usize]) -> Result<E> {
        let mut acc = E::identity_of(self.degree)?;
        for &g in word {
            let gen = self
                .generators
                .get(g)
                .ok_or_else(|| Error::Internal(format!("generator index {g} out of range")))?;
            acc = acc.product(gen);
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Value {
        let elements: Vec<Value> = self
            .keys
            .iter()
            .zip(&self.words)
            .map(|(k, w)| json!({ "key": k, "word": w }))
            .collect();
        json!({
            "size": self.len(),
            "truncated": self.truncated,
            "elements": elements,
        })
    }

    /// Cayley graph in DOT form, edges `x -> x·g` labelled by `g`'s index.
    /// `None` above [`DOT_LIMIT`] elements or for truncated tables.
    pub fn to_dot(&self) -> Option<String> {
        if self.truncated || self.len() > DOT_LIMIT {
            return None;
        }
        let mut out = String::from("digraph cayley {\n");
        for (k, key) in self.keys.iter().enumerate() {
            let _ = writeln!(out, "  n{k} [label=\"{key}\"];");
        }
        for (k, e) in self.elements.iter().enumerate() {
            for (g, gen) in self.generators.iter().enumerate() {
                let target = self.index[&e.product(gen).canonical_key()];
                let _ = writeln!(out, "  n{k} -> n{target} [label=\"{g}\"];");
            }
        }
        out.push_str("}\n");
        Some(out)
    }
}

/// BFS from the identity under right multiplication by each generator.
///
/// At most `cap` elements are stored; the table is marked truncated iff a
/// further new element was found once the cap was reached.
pub fn generate_closure<E: GroupElement>(
    degree: usize,
    gens: &[E],
    cap: usize,
) -> Result<ClosureTable<E>> {
    if cap == 0 {
        return Err(Error::ZeroCap);
    }
    if gens.iter().any(|g| g.degree() != degree) {
        return Err(Error::MixedDegrees);
    }
    let id = E::identity_of(degree)?;
    let id_key = id.canonical_key();
    let mut table = ClosureTable {
        degree,
        generators: gens.to_vec(),
        elements: vec![id],
        keys: vec![id_key.clone()],
        words: vec![Vec::new()],
        index: HashMap::from([(id_key, 0)]),
        truncated: false,
        cap,
    };

    let mut layer = vec![0usize];
    while !layer.is_empty() {
        // first discovery wins, scanning the layer then the generators
        let mut found: BTreeMap<String, (E, Vec<usize>)> = BTreeMap::new();
        for &k in &layer {
            for (g, gen) in gens.iter().enumerate() {
                let next = table.elements[k].product(gen);
                let key = next.canonical_key();
                if table.index.contains_key(&key) || found.contains_key(&key) {
                    continue;
                }
                let mut word = table.words[k].clone();
                word.push(g);
                found.insert(key, (next, word));
            }
        }
        let mut next_layer = Vec::with_capacity(found.len());
        for (key, (e, word)) in found {
            if table.elements.len() == cap {
                table.truncated = true;
                return Ok(table);
            }
            table.index.insert(key.clone(), table.elements.len());
            next_layer.push(table.elements.len());
            table.elements.push(e);
            table.keys.push(key);
            table.words.push(word);
        }
        layer = next_layer;
    }
    Ok(table)
}

/// `|whole| / |sub|` for complete tables with `sub ⊆ whole`.
pub fn subgroup_index<E: GroupElement>(
    whole: &ClosureTable<E>,
    sub: &ClosureTable<E>,
) -> Result<usize> {
    if whole.truncated || sub.truncated {
        return Err(Error::Truncated);
    }
    if sub.keys.iter().any(|k| !whole.contains_key(k)) {
        return Err(Error::NotContained);
    }
    if !whole.len().is_multiple_of(sub.len()) {
        return Err(Error::NotDivisible {
            whole: whole.len(),
            sub: sub.len(),
        });
    }
    Ok(whole.len() / sub.len())
}

/// Order of every element, in table order.
pub fn element_orders<E: GroupElement>(t: &ClosureTable<E>) -> Result<Vec<usize>> {
    if t.truncated {
        return Err(Error::Truncated);
    }
    let id_key = &t.keys[0];
    let bound = t.len();
    t.elements
        .iter()
        .map(|e| {
            let mut acc = e.clone();
            let mut order = 1;
            while acc.canonical_key() != *id_key {
                if order >= bound {
                    return Err(Error::Internal("element order exceeds group size".into()));
                }
                acc = acc.product(e);
                order += 1;
            }
            Ok(order)
        })
        .collect()
}

/// Histogram of [`element_orders`].
pub fn order_histogram(orders: &[usize]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for &o in orders {
        *h.entry(o).or_insert(0) += 1;
    }
    h
}

/// Adjacent transpositions `(i i+1)` followed by the inversion at 1.
pub fn standard_generators(n: usize) -> Result<Vec<SignedPermutation>> {
    let mut gens = (1..n)
        .map(|i| SignedPermutation::transposition(n, i, i + 1))
        .collect::<Result<Vec<_>>>()?;
    gens.push(SignedPermutation::inversion(n, 1)?);
    Ok(gens)
}

/// All ordered products `g·h` of the given generators.
pub fn pairwise_products(gens: &[SignedPermutation]) -> Result<Vec<SignedPermutation>> {
    let mut out = Vec::with_capacity(gens.len() * gens.len());
    for g in gens {
        for h in gens {
            out.push(g.compose(h)?);
        }
    }
    Ok(out)
}

/// Every 3-cycle `i → j → k → i` on distinct points, unsigned.
pub fn three_cycles(n: usize) -> Result<Vec<SignedPermutation>> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if i == j || j == k || i == k || i > j.min(k) {
                    continue;
                }
                let mut images: Vec<i32> = (1..=n as i32).collect();
                images[i - 1] = j as i32;
                images[j - 1] = k as i32;
                images[k - 1] = i as i32;
                out.push(SignedPermutation::new(images)?);
            }
        }
    }
    Ok(out)
}
