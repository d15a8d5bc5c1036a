//! Permutation groups acting on a finite set `Ω = {0, ..., N-1}`.
//!
//! Groups are given by generators and handled by explicit element
//! enumeration, so they are only suitable for orders up to a few tens of
//! thousands. Points are 0-indexed in the API; every text format is
//! 1-indexed.

mod density;
mod growth;
mod orbits;
mod perm;

pub use density::{
    is_t_dense, lemma_equivalence_check, restriction_fullness_witness, same_orbits,
    FullnessWitness, LemmaReport, OrbitWitness, PermutationModule,
};
pub use growth::{growth_profile, stirling2, GrowthProfile};
pub use orbits::{orbit_labels, orbits, Orbit, OrbitMode, DEFAULT_SPACE_CAP};
pub use perm::Permutation;

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::sync::OnceLock;

use crate::error::{check_cap, malformed, Error, Result};

/// `k`-subsets of `{0, ..., degree-1}` as sorted vectors, lexicographically.
pub(crate) fn enumerate_subsets(degree: usize, k: usize) -> Vec<Vec<usize>> {
    orbits::enumerate_space(degree, k, OrbitMode::Subsets)
}

/// Largest group order that will be enumerated element by element.
pub const DEFAULT_GROUP_ORDER_CAP: usize = 50_000;

/// A permutation group on `{0, ..., degree-1}` given by generators.
#[derive(Debug, Clone)]
pub struct FiniteAction {
    degree: usize,
    generators: Vec<Permutation>,
    elements: OnceLock<Vec<Permutation>>,
}

impl PartialEq for FiniteAction {
    /// Equality of the generated groups.
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && match (self.elements(), other.elements()) {
                (Ok(a), Ok(b)) => a == b,
                _ => false,
            }
    }
}

impl FiniteAction {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return malformed(format!(
                "generator {g} acts on {} points, expected {degree}",
                g.degree()
            ));
        }
        Ok(FiniteAction {
            degree,
            generators,
            elements: OnceLock::new(),
        })
    }

    /// Builds an action from 1-indexed cycle lists, one per generator.
    pub fn from_cycles(degree: usize, generators: &[&[&[usize]]]) -> Result<Self> {
        let gens = generators
            .iter()
            .map(|cycles| Permutation::from_cycles(degree, cycles))
            .collect::<Result<Vec<_>>>()?;
        Self::new(degree, gens)
    }

    pub fn trivial(degree: usize) -> Self {
        Self::new(degree, Vec::new()).expect("no generators")
    }

    /// `Sym([n])`, generated by `(1 2)` and `(1 2 ... n)`.
    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Permutation::from_cycles(n, &[&[1, 2]]).unwrap());
            let long: Vec<usize> = (1..=n).collect();
            gens.push(Permutation::from_cycles(n, &[&long]).unwrap());
        }
        Self::new(n, gens).unwrap()
    }

    /// `Alt([n])`, generated by the 3-cycles `(1 2 k)`.
    pub fn alternating(n: usize) -> Self {
        let gens = (3..=n)
            .map(|k| Permutation::from_cycles(n, &[&[1, 2, k]]).unwrap())
            .collect();
        Self::new(n, gens).unwrap()
    }

    /// The rotation group `⟨(1 2 ... n)⟩`.
    pub fn cyclic(n: usize) -> Self {
        let long: Vec<usize> = (1..=n).collect();
        let gens = if n >= 2 {
            vec![Permutation::from_cycles(n, &[&long]).unwrap()]
        } else {
            Vec::new()
        };
        Self::new(n, gens).unwrap()
    }

    /// Symmetries of the regular `n`-gon with vertices `1, ..., n`.
    pub fn dihedral(n: usize) -> Self {
        let mut gens = Self::cyclic(n).generators;
        if n >= 2 {
            let reflection =
                Permutation::from_images((0..n).map(|i| (n - i) % n).collect()).unwrap();
            gens.push(reflection);
        }
        Self::new(n, gens).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// All group elements, sorted. Computed once by closure under the
    /// generators.
    pub fn elements(&self) -> Result<&[Permutation]> {
        self.elements_capped(DEFAULT_GROUP_ORDER_CAP)
    }

    pub fn elements_capped(&self, cap: usize) -> Result<&[Permutation]> {
        if let Some(e) = self.elements.get() {
            return Ok(e);
        }
        let identity = Permutation::identity(self.degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        seen.insert(identity.clone());
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for s in &self.generators {
                let y = s.compose(&x);
                if !seen.contains(&y) {
                    check_cap("group order", seen.len() as u128 + 1, cap as u128)?;
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_iter().collect();
        elements.sort();
        let _ = self.elements.set(elements);
        Ok(self.elements.get().expect("just set"))
    }

    pub fn order(&self) -> Result<usize> {
        Ok(self.elements()?.len())
    }

    pub fn contains(&self, g: &Permutation) -> Result<bool> {
        Ok(self.elements()?.binary_search(g).is_ok())
    }

    /// Whether every generator of `other` lies in this group.
    pub fn contains_group(&self, other: &FiniteAction) -> Result<bool> {
        if other.degree != self.degree {
            return Ok(false);
        }
        for g in &other.generators {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Elements fixing every point of `points`.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> Result<Vec<Permutation>> {
        Ok(self
            .elements()?
            .iter()
            .filter(|g| g.fixes_all(points))
            .cloned()
            .collect())
    }

    /// All subgroups, each as a sorted element list, ordered by size and
    /// then lexicographically.
    pub fn subgroups(&self, cap: usize) -> Result<Vec<FiniteAction>> {
        let elements = self.elements()?.to_vec();
        let identity = Permutation::identity(self.degree);
        let mut found: BTreeSet<Vec<Permutation>> = BTreeSet::new();
        let mut queue: VecDeque<Vec<Permutation>> = VecDeque::new();
        let trivial = vec![identity.clone()];
        found.insert(trivial.clone());
        queue.push_back(trivial);
        while let Some(sub) = queue.pop_front() {
            for g in &elements {
                if sub.binary_search(g).is_ok() {
                    continue;
                }
                let mut gens: Vec<Permutation> = sub.clone();
                gens.push(g.clone());
                let joined = FiniteAction::new(self.degree, gens)?;
                let joined = joined.elements()?.to_vec();
                if !found.contains(&joined) {
                    check_cap("subgroup count", found.len() as u128 + 1, cap as u128)?;
                    found.insert(joined.clone());
                    queue.push_back(joined);
                }
            }
        }
        let mut subs: Vec<Vec<Permutation>> = found.into_iter().collect();
        subs.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        subs.into_iter()
            .map(|els| {
                let action = FiniteAction::new(self.degree, els.clone())?;
                let _ = action.elements.set(els);
                Ok(action)
            })
            .collect()
    }

    /// Parses a group file: a header `N=<degree>`, then one generator per
    /// line in cycle or one-line notation. `#` starts a comment.
    pub fn parse_group_file(text: &str) -> Result<Self> {
        let mut degree: Option<usize> = None;
        let mut gens = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            match degree {
                None => {
                    let value = line
                        .strip_prefix("N")
                        .map(str::trim_start)
                        .and_then(|r| r.strip_prefix('='))
                        .ok_or_else(|| {
                            Error::Malformed(format!(
                                "line {}: expected header `N=<degree>`",
                                lineno + 1
                            ))
                        })?;
                    degree = Some(crate::categories::parse_natural(value)?);
                }
                Some(n) => gens.push(
                    Permutation::parse(n, line)
                        .map_err(|e| Error::Malformed(format!("line {}: {e}", lineno + 1)))?,
                ),
            }
        }
        let degree = degree.ok_or_else(|| Error::Malformed("missing `N=` header".into()))?;
        Self::new(degree, gens)
    }

    /// Inverse of [`FiniteAction::parse_group_file`], generators in cycle
    /// notation.
    pub fn to_group_file(&self) -> String {
        let mut out = format!("N={}\n", self.degree);
        for g in &self.generators {
            out.push_str(&g.cycle_string());
            out.push('\n');
        }
        out
    }
}
