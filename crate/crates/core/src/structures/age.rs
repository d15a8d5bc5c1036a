use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};

use super::{all_tuples, constrained_embeddings, FiniteStructure, Signature};
use crate::categories::CategoryKind;
use crate::error::{check_cap, Result};

/// A class of finite structures closed under isomorphism, given by a
/// membership test and a list of isomorphism-class representatives per size.
pub trait Age {
    fn name(&self) -> String;

    fn signature(&self) -> Signature;

    fn contains(&self, s: &FiniteStructure) -> bool;

    /// One structure per isomorphism class of `k`-element members.
    fn representatives(&self, k: usize) -> Result<Vec<FiniteStructure>>;
}

/// Wraps an age, remembering representatives already computed.
pub struct CachedAge<'a> {
    inner: &'a dyn Age,
    cache: RefCell<HashMap<usize, Vec<FiniteStructure>>>,
}

impl<'a> CachedAge<'a> {
    pub fn new(inner: &'a dyn Age) -> Self {
        CachedAge {
            inner,
            cache: RefCell::new(HashMap::new()),
        }
    }
}

impl Age for CachedAge<'_> {
    fn name(&self) -> String {
        self.inner.name()
    }

    fn signature(&self) -> Signature {
        self.inner.signature()
    }

    fn contains(&self, s: &FiniteStructure) -> bool {
        self.inner.contains(s)
    }

    fn representatives(&self, k: usize) -> Result<Vec<FiniteStructure>> {
        if let Some(r) = self.cache.borrow().get(&k) {
            return Ok(r.clone());
        }
        let r = self.inner.representatives(k)?;
        self.cache.borrow_mut().insert(k, r.clone());
        Ok(r)
    }
}

/// Finite substructures of `(ℚ, ≤)`, `(ℚ, B)`, the circle with its cyclic
/// or separation relation, or a bare infinite set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KindAge(pub CategoryKind);

impl KindAge {
    /// An arrangement inducing `s`, as the list of elements in order.
    pub fn arrangement_witness(&self, s: &FiniteStructure) -> Option<Vec<usize>> {
        if *s.signature() != self.signature() {
            return None;
        }
        let k = s.size();
        let chain = FiniteStructure::from_arrangement(self.0, &(0..k).collect::<Vec<_>>());
        let found = constrained_embeddings(s, &chain, &vec![None; k], &vec![true; k], 1);
        found.into_iter().next().map(|positions| {
            let mut order = vec![0; k];
            for (x, p) in positions.into_iter().enumerate() {
                order[p] = x;
            }
            order
        })
    }
}

impl Age for KindAge {
    fn name(&self) -> String {
        self.0.name().to_string()
    }

    fn signature(&self) -> Signature {
        match (self.0.relation_name(), self.0.arity()) {
            (Some(name), Some(arity)) => vec![(name.to_string(), arity)],
            _ => Vec::new(),
        }
    }

    fn contains(&self, s: &FiniteStructure) -> bool {
        self.arrangement_witness(s).is_some()
    }

    fn representatives(&self, k: usize) -> Result<Vec<FiniteStructure>> {
        Ok(vec![FiniteStructure::from_arrangement(
            self.0,
            &(0..k).collect::<Vec<_>>(),
        )])
    }
}

/// Finite subsets of `Ω²` for `Sym(Ω)` acting diagonally on pairs, `Ω`
/// infinite. A point `p = (p1, p2)` carries the unary relation `D` when
/// `p1 = p2`, and `Eij(p, q)` holds when `p_i = q_j`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PairAge;

const PAIR_RELATIONS: [(&str, usize, usize); 4] =
    [("E11", 0, 0), ("E12", 0, 1), ("E21", 1, 0), ("E22", 1, 1)];

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut root = x;
    while parent[root] != root {
        root = parent[root];
    }
    let mut y = x;
    while parent[y] != root {
        let next = parent[y];
        parent[y] = root;
        y = next;
    }
    root
}

impl PairAge {
    /// The structure on points whose coordinates `2i, 2i+1` carry the block
    /// numbers in `blocks`.
    pub fn from_coordinates(blocks: &[usize]) -> FiniteStructure {
        let k = blocks.len() / 2;
        let mut s = FiniteStructure::empty(k, PairAge.signature());
        for p in 0..k {
            if blocks[2 * p] == blocks[2 * p + 1] {
                s.add_tuple(0, vec![p]).expect("in range");
            }
            for q in 0..k {
                for (r, &(_, i, j)) in PAIR_RELATIONS.iter().enumerate() {
                    if blocks[2 * p + i] == blocks[2 * q + j] {
                        s.add_tuple(r + 1, vec![p, q]).expect("in range");
                    }
                }
            }
        }
        s
    }

    /// Finest coordinate partition forced by the true atoms of `s`.
    fn forced_blocks(s: &FiniteStructure) -> Vec<usize> {
        let k = s.size();
        let mut parent: Vec<usize> = (0..2 * k).collect();
        let union = |a: usize, b: usize, parent: &mut Vec<usize>| {
            let (ra, rb) = (find(parent, a), find(parent, b));
            parent[ra.max(rb)] = ra.min(rb);
        };
        for t in s.relation(0) {
            union(2 * t[0], 2 * t[0] + 1, &mut parent);
        }
        for (r, &(_, i, j)) in PAIR_RELATIONS.iter().enumerate() {
            for t in s.relation(r + 1) {
                union(2 * t[0] + i, 2 * t[1] + j, &mut parent);
            }
        }
        (0..2 * k).map(|c| find(&mut parent, c)).collect()
    }
}

impl Age for PairAge {
    fn name(&self) -> String {
        "pairs".to_string()
    }

    fn signature(&self) -> Signature {
        let mut sig = vec![("D".to_string(), 1)];
        sig.extend(PAIR_RELATIONS.iter().map(|(n, _, _)| (n.to_string(), 2)));
        sig
    }

    fn contains(&self, s: &FiniteStructure) -> bool {
        if *s.signature() != self.signature() {
            return false;
        }
        let blocks = Self::forced_blocks(s);
        let k = s.size();
        let distinct: BTreeSet<(usize, usize)> =
            (0..k).map(|p| (blocks[2 * p], blocks[2 * p + 1])).collect();
        distinct.len() == k && Self::from_coordinates(&blocks).same_relations(s)
    }

    fn representatives(&self, k: usize) -> Result<Vec<FiniteStructure>> {
        check_cap("pair-age representative size", k as u128, 5)?;
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for blocks in set_partitions(2 * k) {
            let points: BTreeSet<(usize, usize)> =
                (0..k).map(|p| (blocks[2 * p], blocks[2 * p + 1])).collect();
            if points.len() < k {
                continue;
            }
            let s = Self::from_coordinates(&blocks);
            if seen.insert(s.canonical_form()) {
                out.push(s);
            }
        }
        Ok(out)
    }
}

/// Restricted growth strings of length `n`: every set partition once.
pub(crate) fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    fn rec(n: usize, max: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for b in 0..=max {
            current.push(b);
            let next = if b == max { max + 1 } else { max };
            rec(n, next, current, out);
            current.pop();
        }
    }
    rec(n, 0, &mut current, &mut out);
    out
}

/// A user-defined age: a signature and a membership predicate. Members of a
/// given size are found by trying every relation assignment, so only tiny
/// signatures are practical.
pub struct PredicateAge {
    name: String,
    signature: Signature,
    predicate: Box<dyn Fn(&FiniteStructure) -> bool + Send + Sync>,
}

/// Largest number of candidate relation assignments tried per size.
const PREDICATE_ASSIGNMENT_CAP: u128 = 1 << 20;

impl PredicateAge {
    pub fn new(
        name: impl Into<String>,
        signature: Signature,
        predicate: impl Fn(&FiniteStructure) -> bool + Send + Sync + 'static,
    ) -> Self {
        PredicateAge {
            name: name.into(),
            signature,
            predicate: Box::new(predicate),
        }
    }
}

impl std::fmt::Debug for PredicateAge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PredicateAge")
            .field("name", &self.name)
            .field("signature", &self.signature)
            .finish_non_exhaustive()
    }
}

impl Age for PredicateAge {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn signature(&self) -> Signature {
        self.signature.clone()
    }

    fn contains(&self, s: &FiniteStructure) -> bool {
        *s.signature() == self.signature && (self.predicate)(s)
    }

    fn representatives(&self, k: usize) -> Result<Vec<FiniteStructure>> {
        let atoms: Vec<(usize, Vec<usize>)> = self
            .signature
            .iter()
            .enumerate()
            .flat_map(|(r, (_, arity))| all_tuples(k, *arity).into_iter().map(move |t| (r, t)))
            .collect();
        let total = 1u128.checked_shl(atoms.len() as u32).unwrap_or(u128::MAX);
        check_cap("relation assignments", total, PREDICATE_ASSIGNMENT_CAP)?;
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for mask in 0..total {
            let mut s = FiniteStructure::empty(k, self.signature.clone());
            for (bit, (r, t)) in atoms.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    s.add_tuple(*r, t.clone()).expect("in range");
                }
            }
            if (self.predicate)(&s) && seen.insert(s.canonical_form()) {
                out.push(s);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_membership() {
        let oi = KindAge(CategoryKind::Oi);
        let s = FiniteStructure::from_arrangement(CategoryKind::Oi, &[2, 0, 1]);
        assert_eq!(oi.arrangement_witness(&s), Some(vec![2, 0, 1]));
        let mut broken = s.clone();
        broken.add_tuple(0, vec![0, 2]).unwrap();
        assert!(!oi.contains(&broken));
        assert!(!KindAge(CategoryKind::Bi).contains(&s));
        for kind in CategoryKind::ALL {
            let age = KindAge(kind);
            for k in 0..=5 {
                let reps = age.representatives(k).unwrap();
                assert_eq!(reps.len(), 1);
                assert!(age.contains(&reps[0]));
            }
        }
    }

    #[test]
    fn pair_age_counts() {
        // Orbits of Sym(Ω) on injective pairs of points of Ω²: one point is
        // either on or off the diagonal.
        assert_eq!(PairAge.representatives(1).unwrap().len(), 2);
        for k in 0..=3 {
            for s in PairAge.representatives(k).unwrap() {
                assert!(PairAge.contains(&s));
            }
        }
        let mut bad = FiniteStructure::empty(1, PairAge.signature());
        bad.add_tuple(0, vec![0]).unwrap();
        assert!(!PairAge.contains(&bad));
    }

    #[test]
    fn bell_numbers() {
        let bell: Vec<usize> = (0..7).map(|n| set_partitions(n).len()).collect();
        assert_eq!(bell, vec![1, 1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn predicate_age_graphs() {
        let graphs = PredicateAge::new("graphs", vec![("E".into(), 2)], |s| {
            s.relation(0)
                .iter()
                .all(|t| t[0] != t[1] && s.holds(0, &[t[1], t[0]]))
        });
        let counts: Vec<usize> = (0..=4)
            .map(|k| graphs.representatives(k).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 11]);
    }
}
