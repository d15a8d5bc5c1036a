//! Finite relational structures, embeddings between them, and the
//! amalgamation searches used to probe ages.
//!
//! Elements of a structure are the indices `0..size`; each carries a text
//! label used only for input and output.

mod age;
mod amalgam;
mod text;

pub use age::{Age, CachedAge, KindAge, PairAge, PredicateAge};
pub use amalgam::{
    age_has_sap, solve_amalgamation, solve_amalgamation_on, Amalgam, AmalgamationProblem,
    SapReport, DEFAULT_DIAGRAM_CAP,
};
pub use text::{parse_embedding_file, EmbeddingFile};

use std::collections::BTreeSet;

use serde::Serialize;

use crate::actions::{orbits, FiniteAction, OrbitMode};
use crate::categories::CategoryKind;
use crate::error::{malformed, Result};

pub type Signature = Vec<(String, usize)>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteStructure {
    labels: Vec<String>,
    signature: Signature,
    relations: Vec<BTreeSet<Vec<usize>>>,
}

pub(crate) fn default_label(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("p{}", i + 1)
    }
}

impl FiniteStructure {
    /// A structure with the given universe size and no tuples yet.
    pub fn empty(size: usize, signature: Signature) -> Self {
        Self::with_labels((0..size).map(default_label).collect(), signature)
    }

    pub fn with_labels(labels: Vec<String>, signature: Signature) -> Self {
        let relations = vec![BTreeSet::new(); signature.len()];
        FiniteStructure {
            labels,
            signature,
            relations,
        }
    }

    /// `[n]` with the canonical structure of `kind`, elements labelled
    /// `1..=n`.
    pub fn canonical_chain(kind: CategoryKind, n: usize) -> Self {
        let order: Vec<usize> = (0..n).collect();
        let mut s = Self::from_arrangement(kind, &order);
        s.labels = (1..=n).map(|i| i.to_string()).collect();
        s
    }

    /// The structure of `kind` induced by listing the elements in `order`
    /// (a linear order, or a circular one for CI and SI).
    pub fn from_arrangement(kind: CategoryKind, order: &[usize]) -> Self {
        let n = order.len();
        let signature: Signature = match (kind.relation_name(), kind.arity()) {
            (Some(name), Some(arity)) => vec![(name.to_string(), arity)],
            _ => Vec::new(),
        };
        let mut s = Self::empty(n, signature);
        if let Some(arity) = kind.arity() {
            let mut position = vec![0; n];
            for (pos, &x) in order.iter().enumerate() {
                position[x] = pos + 1;
            }
            for t in all_tuples(n, arity) {
                let values: Vec<usize> = t.iter().map(|&x| position[x]).collect();
                if kind.relation_holds(&values) {
                    s.relations[0].insert(t);
                }
            }
        }
        s
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn relation(&self, index: usize) -> &BTreeSet<Vec<usize>> {
        &self.relations[index]
    }

    pub fn relation_index(&self, name: &str) -> Option<usize> {
        self.signature.iter().position(|(n, _)| n == name)
    }

    pub fn add_tuple(&mut self, relation: usize, tuple: Vec<usize>) -> Result<()> {
        let arity = self.signature[relation].1;
        if tuple.len() != arity {
            return malformed(format!(
                "tuple {tuple:?} has length {}, relation `{}` has arity {arity}",
                tuple.len(),
                self.signature[relation].0
            ));
        }
        if let Some(x) = tuple.iter().find(|&&x| x >= self.size()) {
            return malformed(format!("element {x} outside a universe of {}", self.size()));
        }
        self.relations[relation].insert(tuple);
        Ok(())
    }

    pub fn holds(&self, relation: usize, tuple: &[usize]) -> bool {
        self.relations[relation].contains(tuple)
    }

    /// Substructure on `subset`, elements renumbered in the given order.
    pub fn induced(&self, subset: &[usize]) -> Self {
        let mut position = vec![usize::MAX; self.size()];
        for (i, &x) in subset.iter().enumerate() {
            position[x] = i;
        }
        let relations = self
            .relations
            .iter()
            .map(|rel| {
                rel.iter()
                    .filter(|t| t.iter().all(|&x| position[x] != usize::MAX))
                    .map(|t| t.iter().map(|&x| position[x]).collect())
                    .collect()
            })
            .collect();
        FiniteStructure {
            labels: subset.iter().map(|&x| self.labels[x].clone()).collect(),
            signature: self.signature.clone(),
            relations,
        }
    }

    /// Copy with element `i` renamed to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let mut labels = vec![String::new(); self.size()];
        for (i, &p) in perm.iter().enumerate() {
            labels[p] = self.labels[i].clone();
        }
        let relations = self
            .relations
            .iter()
            .map(|rel| {
                rel.iter()
                    .map(|t| t.iter().map(|&x| perm[x]).collect())
                    .collect()
            })
            .collect();
        FiniteStructure {
            labels,
            signature: self.signature.clone(),
            relations,
        }
    }

    pub fn set_labels(&mut self, labels: Vec<String>) {
        assert_eq!(labels.len(), self.size());
        self.labels = labels;
    }

    /// Same relations, ignoring labels.
    pub fn same_relations(&self, other: &Self) -> bool {
        self.signature == other.signature && self.relations == other.relations
    }

    /// Isomorphism invariant: the least relation listing over all
    /// relabelings. Exhaustive, so only meant for small structures.
    pub fn canonical_form(&self) -> Vec<Vec<Vec<usize>>> {
        let mut best: Option<Vec<Vec<Vec<usize>>>> = None;
        for perm in permutations(self.size()) {
            let form: Vec<Vec<Vec<usize>>> = self
                .relations
                .iter()
                .map(|rel| {
                    let mut ts: Vec<Vec<usize>> = rel
                        .iter()
                        .map(|t| t.iter().map(|&x| perm[x]).collect())
                        .collect();
                    ts.sort();
                    ts
                })
                .collect();
            if best.as_ref().is_none_or(|b| form < *b) {
                best = Some(form);
            }
        }
        best.unwrap_or_default()
    }
}

pub(crate) fn all_tuples(n: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                current.push(v);
                rec(n, current, used, out);
                current.pop();
                used[v] = false;
            }
        }
    }
    rec(n, &mut current, &mut used, &mut out);
    out
}

/// An injection between universes that preserves and reflects every
/// relation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StructureEmbedding {
    pub map: Vec<usize>,
}

/// Whether `map` is an embedding `a -> b`.
pub fn is_embedding(a: &FiniteStructure, b: &FiniteStructure, map: &[usize]) -> bool {
    if a.signature != b.signature || map.len() != a.size() {
        return false;
    }
    if map.iter().any(|&y| y >= b.size()) {
        return false;
    }
    let mut seen = BTreeSet::new();
    if !map.iter().all(|y| seen.insert(*y)) {
        return false;
    }
    a.signature.iter().enumerate().all(|(r, (_, arity))| {
        all_tuples(a.size(), *arity).into_iter().all(|t| {
            let image: Vec<usize> = t.iter().map(|&x| map[x]).collect();
            a.holds(r, &t) == b.holds(r, &image)
        })
    })
}

/// All embeddings `a -> b`, lexicographic in the image array.
pub fn enumerate_embeddings(a: &FiniteStructure, b: &FiniteStructure) -> Vec<StructureEmbedding> {
    let fixed = vec![None; a.size()];
    let allowed = vec![true; b.size()];
    constrained_embeddings(a, b, &fixed, &allowed, usize::MAX)
        .into_iter()
        .map(|map| StructureEmbedding { map })
        .collect()
}

/// Embeddings `a -> b` such that `map[i] = fixed[i]` wherever `fixed[i]` is
/// set, and every unfixed point lands in an `allowed` element. Stops after
/// `limit` results.
pub(crate) fn constrained_embeddings(
    a: &FiniteStructure,
    b: &FiniteStructure,
    fixed: &[Option<usize>],
    allowed: &[bool],
    limit: usize,
) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if a.signature != b.signature || a.size() > b.size() {
        return out;
    }
    let mut map = Vec::with_capacity(a.size());
    let mut used = vec![false; b.size()];
    extend_embedding(a, b, fixed, allowed, limit, &mut map, &mut used, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn extend_embedding(
    a: &FiniteStructure,
    b: &FiniteStructure,
    fixed: &[Option<usize>],
    allowed: &[bool],
    limit: usize,
    map: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    if out.len() >= limit {
        return;
    }
    let i = map.len();
    if i == a.size() {
        out.push(map.clone());
        return;
    }
    let candidates: Vec<usize> = match fixed[i] {
        Some(y) => vec![y],
        None => (0..b.size()).filter(|&y| allowed[y]).collect(),
    };
    for y in candidates {
        if used[y] {
            continue;
        }
        map.push(y);
        if newest_point_consistent(a, b, map) {
            used[y] = true;
            extend_embedding(a, b, fixed, allowed, limit, map, used, out);
            used[y] = false;
        }
        map.pop();
    }
}

/// Relation check on all tuples over the assigned prefix that contain the
/// most recently assigned point.
fn newest_point_consistent(a: &FiniteStructure, b: &FiniteStructure, map: &[usize]) -> bool {
    let k = map.len();
    let last = k - 1;
    for (r, (_, arity)) in a.signature.iter().enumerate() {
        for t in all_tuples(k, *arity) {
            if !t.contains(&last) {
                continue;
            }
            let image: Vec<usize> = t.iter().map(|&x| map[x]).collect();
            if a.holds(r, &t) != b.holds(r, &image) {
                return false;
            }
        }
    }
    true
}

/// The canonical relational structure of an action, truncated at
/// `max_arity`: one relation `R<n>_<i>` for the `i`-th orbit on `Ω^n`, for
/// every `1 <= n <= max_arity`.
pub fn canonical_structure(action: &FiniteAction, max_arity: usize) -> Result<FiniteStructure> {
    if max_arity > action.degree() {
        return malformed(format!(
            "arity {max_arity} exceeds the domain size {}",
            action.degree()
        ));
    }
    let mut signature = Vec::new();
    let mut relations = Vec::new();
    for n in 1..=max_arity {
        let (items, labels) = crate::actions::orbit_labels(action, n, OrbitMode::Power)?;
        let count = orbits(action, n, OrbitMode::Power)?.len();
        let mut rels = vec![BTreeSet::new(); count];
        for (item, label) in items.into_iter().zip(labels) {
            rels[label].insert(item);
        }
        for (i, rel) in rels.into_iter().enumerate() {
            signature.push((format!("R{n}_{i}"), n));
            relations.push(rel);
        }
    }
    Ok(FiniteStructure {
        labels: (1..=action.degree()).map(|i| i.to_string()).collect(),
        signature,
        relations,
    })
}

/// Whether the pointwise stabilizer of `gamma` fixes no point outside it.
pub fn fixed_point_condition(action: &FiniteAction, gamma: &[usize]) -> Result<bool> {
    if let Some(x) = gamma.iter().find(|&&x| x >= action.degree()) {
        return malformed(format!("point {x} outside the domain"));
    }
    let stabilizer = action.pointwise_stabilizer(gamma)?;
    Ok((0..action.degree())
        .filter(|x| !gamma.contains(x))
        .all(|x| stabilizer.iter().any(|g| g.apply(x) != x)))
}
