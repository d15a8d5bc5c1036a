//! Comparing two actions on the same set: shared orbits, truncated density,
//! and the permutation-module witness that restriction to a non-dense
//! subgroup is not full.

use std::collections::{HashMap, HashSet};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::orbits::{enumerate_space, orbit_labels, OrbitMode};
use super::{FiniteAction, Permutation};
use crate::error::{malformed, Error, Result};

fn same_domain(g: &FiniteAction, h: &FiniteAction) -> Result<()> {
    if g.degree() != h.degree() {
        return malformed(format!(
            "actions on {} and {} points are not comparable",
            g.degree(),
            h.degree()
        ));
    }
    Ok(())
}

fn require_subgroup(g: &FiniteAction, h: &FiniteAction, name: &str) -> Result<()> {
    same_domain(g, h)?;
    if !g.contains_group(h)? {
        return malformed(format!("{name} is not a subgroup of the ambient group"));
    }
    Ok(())
}

/// Two items (1-indexed points) in the same orbit of one action but
/// different orbits of the other.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitWitness {
    pub mode: OrbitMode,
    pub n: usize,
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    /// `"G"` or `"H"`: the action that identifies the two items.
    pub joined_by: &'static str,
}

fn orbit_witness(
    g: &FiniteAction,
    h: &FiniteAction,
    n: usize,
    mode: OrbitMode,
) -> Result<Option<OrbitWitness>> {
    same_domain(g, h)?;
    let (items, lg) = orbit_labels(g, n, mode)?;
    let (_, lh) = orbit_labels(h, n, mode)?;
    let mut first_g: HashMap<usize, usize> = HashMap::new();
    let mut first_h: HashMap<usize, usize> = HashMap::new();
    for i in 0..items.len() {
        let rg = *first_g.entry(lg[i]).or_insert(i);
        let rh = *first_h.entry(lh[i]).or_insert(i);
        if rg != rh {
            let (other, joined_by) = if rg < rh { (rg, "G") } else { (rh, "H") };
            return Ok(Some(OrbitWitness {
                mode,
                n,
                first: items[other].iter().map(|x| x + 1).collect(),
                second: items[i].iter().map(|x| x + 1).collect(),
                joined_by,
            }));
        }
    }
    Ok(None)
}

/// Whether `g` and `h` have exactly the same orbits on the given space.
pub fn same_orbits(g: &FiniteAction, h: &FiniteAction, n: usize, mode: OrbitMode) -> Result<bool> {
    same_domain(g, h)?;
    let (_, lg) = orbit_labels(g, n, mode)?;
    let (_, lh) = orbit_labels(h, n, mode)?;
    Ok(lg == lh)
}

/// The four shared-orbit conditions for `n`, each evaluated by its own
/// enumeration:
///
/// 1. same orbits on `Ω^n`;
/// 2. same orbits on `Ω^(n)`;
/// 3. same orbits on `Ω^s` for every `s <= n`;
/// 4. same orbits on `Ω^(s)` for every `s <= n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub n: usize,
    pub conditions: [bool; 4],
    /// All four agree.
    pub consistent: bool,
    /// Separating pair for the first failing condition.
    pub witness: Option<OrbitWitness>,
}

pub fn lemma_equivalence_check(
    g: &FiniteAction,
    h: &FiniteAction,
    n: usize,
) -> Result<LemmaReport> {
    same_domain(g, h)?;
    if n > g.degree() {
        return malformed(format!(
            "n = {n} exceeds the domain size {}; no room for distinct extensions",
            g.degree()
        ));
    }
    let c1 = orbit_witness(g, h, n, OrbitMode::Power)?;
    let c2 = orbit_witness(g, h, n, OrbitMode::Injective)?;
    let mut c3 = None;
    let mut c4 = None;
    for s in 0..=n {
        if c3.is_none() {
            c3 = orbit_witness(g, h, s, OrbitMode::Power)?;
        }
        if c4.is_none() {
            c4 = orbit_witness(g, h, s, OrbitMode::Injective)?;
        }
    }
    let conditions = [c1.is_none(), c2.is_none(), c3.is_none(), c4.is_none()];
    let consistent = conditions.iter().all(|&c| c == conditions[0]);
    let witness = c1.or(c2).or(c3).or(c4);
    Ok(LemmaReport {
        n,
        conditions,
        consistent,
        witness,
    })
}

/// `|H · K|` computed as `|H| |K| / |H ∩ K|`.
fn product_size(h: &[Permutation], k: &[Permutation]) -> usize {
    let k_set: HashSet<&Permutation> = k.iter().collect();
    let meet = h.iter().filter(|x| k_set.contains(x)).count();
    h.len() * k.len() / meet
}

/// Whether `H · G_Γ = G` for every `Γ` with `|Γ| <= t`.
///
/// This is the truncation of density in the permutation topology: pointwise
/// stabilizers of sets of size at most `t` stand in for the basic open
/// subgroups.
pub fn is_t_dense(h: &FiniteAction, g: &FiniteAction, t: usize) -> Result<bool> {
    require_subgroup(g, h, "H")?;
    if t > g.degree() {
        return malformed(format!("t = {t} exceeds the domain size {}", g.degree()));
    }
    let order = g.order()?;
    let h_elems = h.elements()?;
    for size in 0..=t {
        for gamma in enumerate_space(g.degree(), size, OrbitMode::Subsets) {
            let stab = g.pointwise_stabilizer(&gamma)?;
            if product_size(h_elems, &stab) != order {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The permutation module `ℚ(G/K)`: left cosets of `K` with `G` acting by
/// left multiplication.
#[derive(Debug, Clone)]
pub struct PermutationModule {
    /// One representative per coset, the least element of the coset.
    representatives: Vec<Permutation>,
    coset_of: HashMap<Permutation, usize>,
}

impl PermutationModule {
    pub fn new(g: &FiniteAction, k: &FiniteAction) -> Result<Self> {
        require_subgroup(g, k, "K")?;
        let k_elems = k.elements()?;
        let mut coset_of = HashMap::new();
        let mut representatives = Vec::new();
        for x in g.elements()? {
            if coset_of.contains_key(x) {
                continue;
            }
            let id = representatives.len();
            representatives.push(x.clone());
            for y in k_elems {
                coset_of.insert(x.compose(y), id);
            }
        }
        Ok(PermutationModule {
            representatives,
            coset_of,
        })
    }

    pub fn rank(&self) -> usize {
        self.representatives.len()
    }

    pub fn representative(&self, coset: usize) -> &Permutation {
        &self.representatives[coset]
    }

    /// Index of the coset `xK`.
    pub fn coset_of(&self, x: &Permutation) -> usize {
        self.coset_of[x]
    }

    /// `g · (xK) = (gx)K`.
    pub fn act(&self, g: &Permutation, coset: usize) -> usize {
        self.coset_of(&g.compose(&self.representatives[coset]))
    }
}

/// A coset pair exhibiting that the indicator map `f` is not `G`-equivariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FullnessWitness {
    /// `g = g1 g0⁻¹`.
    pub g: Permutation,
    /// Representative of a coset in the `H`-orbit of `K`.
    pub g0: Permutation,
    /// Representative of a coset outside that orbit.
    pub g1: Permutation,
    /// Number of cosets of `K` in `G`.
    pub rank: usize,
    /// `f(g · g0K)`, always 0.
    pub f_of_translate: String,
    /// `g · f(g0K)`, always 1 (the coefficients carry the trivial action).
    pub translate_of_f: String,
}

/// Builds `V = ℚ(G/K)` and the map `f: V -> ℚ` that is 1 on the `H`-orbit of
/// the coset `K` and 0 elsewhere. `f` is checked to be `H`-equivariant.
///
/// Returns `None` when `HK = G`, in which case `f` is checked to be
/// `G`-equivariant as well; otherwise returns the explicit failure of
/// `G`-equivariance.
pub fn restriction_fullness_witness(
    g: &FiniteAction,
    h: &FiniteAction,
    k: &FiniteAction,
) -> Result<Option<FullnessWitness>> {
    require_subgroup(g, h, "H")?;
    let module = PermutationModule::new(g, k)?;
    let base = module.coset_of(&Permutation::identity(g.degree()));
    let h_orbit: HashSet<usize> = h.elements()?.iter().map(|x| module.act(x, base)).collect();
    let f: Vec<BigRational> = (0..module.rank())
        .map(|c| {
            if h_orbit.contains(&c) {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
        .collect();

    let equivariant_under = |elements: &[Permutation]| -> bool {
        elements
            .iter()
            .all(|x| (0..module.rank()).all(|c| f[module.act(x, c)] == f[c]))
    };
    if !equivariant_under(h.elements()?) {
        return Err(Error::Violation(
            "indicator of the H-orbit of K is not H-equivariant".into(),
        ));
    }

    if h_orbit.len() == module.rank() {
        if !equivariant_under(g.elements()?) {
            return Err(Error::Violation(
                "HK = G but the indicator map is not G-equivariant".into(),
            ));
        }
        return Ok(None);
    }

    let g0 = module.representative(base).clone();
    let outside = (0..module.rank())
        .find(|c| !h_orbit.contains(c))
        .expect("orbit is a proper subset");
    let g1 = module.representative(outside).clone();
    let translate = g1.compose(&g0.inverse());
    let moved = module.act(&translate, base);
    let lhs = f[moved].clone();
    let rhs = f[base].clone();
    if lhs == rhs {
        return Err(Error::Violation(format!(
            "g = {translate} does not break equivariance as expected"
        )));
    }
    Ok(Some(FullnessWitness {
        g: translate,
        g0,
        g1,
        rank: module.rank(),
        f_of_translate: lhs.to_string(),
        translate_of_f: rhs.to_string(),
    }))
}
