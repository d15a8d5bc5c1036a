//! Orbit categories of pointwise stabilizers.
//!
//! The object for a subset `Γ ⊆ Ω` is the coset space `G/G_Γ`. A morphism
//! `G/G_Γ -> G/G_Σ` is stored by a representative `g` with
//! `g G_Γ g⁻¹ ⊆ G_Σ`; it sends `x G_Γ` to `x g⁻¹ G_Σ`. Two representatives
//! `g`, `h` give the same morphism iff `G_Σ g = G_Σ h`. A morphism given by
//! `g` followed by one given by `h` is given by `h g`.
//!
//! An embedding `σ: Γ -> Σ` of substructures of the canonical structure is
//! an injection agreeing with some group element on `Γ`. The functor `φ`
//! sends it to the morphism `G/G_Σ -> G/G_Γ` represented by `σ̃⁻¹`, where
//! `σ̃ ∈ G` extends `σ`.
//!
//! Subsets are 0-indexed sorted vectors in the API and 1-indexed in reports.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::actions::{FiniteAction, Permutation};
use crate::error::{malformed, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitObject {
    pub subset: Vec<usize>,
    pub stabilizer: Vec<Permutation>,
    /// Points fixed by the whole stabilizer.
    pub fixed: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitMorphism {
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    pub representative: Permutation,
}

/// An embedding `source -> target` of subsets, `map[i]` being the image of
/// `source[i]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SubsetEmbedding {
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    pub map: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct OrbitCategory {
    action: FiniteAction,
    elements: Vec<Permutation>,
    inverses: Vec<Permutation>,
}

fn normalize(degree: usize, subset: &[usize]) -> Result<Vec<usize>> {
    let set: BTreeSet<usize> = subset.iter().copied().collect();
    if set.len() != subset.len() {
        return malformed(format!("subset {subset:?} has repeated points"));
    }
    if let Some(x) = set.iter().find(|&&x| x >= degree) {
        return malformed(format!("point {x} outside a domain of size {degree}"));
    }
    Ok(set.into_iter().collect())
}

impl OrbitCategory {
    pub fn new(action: &FiniteAction) -> Result<Self> {
        let elements = action.elements()?.to_vec();
        let inverses = elements.iter().map(Permutation::inverse).collect();
        Ok(OrbitCategory {
            action: action.clone(),
            elements,
            inverses,
        })
    }

    pub fn action(&self) -> &FiniteAction {
        &self.action
    }

    pub fn object(&self, subset: &[usize]) -> Result<OrbitObject> {
        let subset = normalize(self.action.degree(), subset)?;
        let stabilizer: Vec<Permutation> = self
            .elements
            .iter()
            .filter(|g| g.fixes_all(&subset))
            .cloned()
            .collect();
        let fixed = (0..self.action.degree())
            .filter(|&x| stabilizer.iter().all(|g| g.apply(x) == x))
            .collect();
        Ok(OrbitObject {
            subset,
            stabilizer,
            fixed,
        })
    }

    /// The literal condition `g G_Γ g⁻¹ ⊆ G_Σ`.
    pub fn is_morphism(&self, m: &OrbitMorphism) -> Result<bool> {
        let source = self.object(&m.source)?;
        let target = normalize(self.action.degree(), &m.target)?;
        let g = &m.representative;
        let g_inv = g.inverse();
        Ok(source
            .stabilizer
            .iter()
            .all(|h| g.compose(h).compose(&g_inv).fixes_all(&target)))
    }

    /// Equality of morphisms: same ends and `G_Σ g = G_Σ h`.
    pub fn same_morphism(&self, a: &OrbitMorphism, b: &OrbitMorphism) -> bool {
        a.source == b.source
            && a.target == b.target
            && a.representative
                .compose(&b.representative.inverse())
                .fixes_all(&a.target)
    }

    pub fn identity(&self, subset: &[usize]) -> Result<OrbitMorphism> {
        let subset = normalize(self.action.degree(), subset)?;
        Ok(OrbitMorphism {
            source: subset.clone(),
            target: subset,
            representative: Permutation::identity(self.action.degree()),
        })
    }

    /// `first` followed by `then`.
    pub fn compose(&self, first: &OrbitMorphism, then: &OrbitMorphism) -> Result<OrbitMorphism> {
        if first.target != then.source {
            return malformed("morphisms are not composable");
        }
        Ok(OrbitMorphism {
            source: first.source.clone(),
            target: then.target.clone(),
            representative: then.representative.compose(&first.representative),
        })
    }

    /// One representative per morphism `G/G_source -> G/G_target`, using
    /// `g G_Γ g⁻¹ ⊆ G_Σ ⟺ g⁻¹(Σ) ⊆ Fix(G_Γ)`. Ordered by `g⁻¹` on the
    /// target, each class represented by its least element.
    pub fn orbit_hom(&self, source: &OrbitObject, target: &OrbitObject) -> Vec<OrbitMorphism> {
        let fixed: BTreeSet<usize> = source.fixed.iter().copied().collect();
        let mut classes: BTreeMap<Vec<usize>, &Permutation> = BTreeMap::new();
        for (g, g_inv) in self.elements.iter().zip(&self.inverses) {
            if target
                .subset
                .iter()
                .all(|&y| fixed.contains(&g_inv.apply(y)))
            {
                classes
                    .entry(g_inv.apply_tuple(&target.subset))
                    .or_insert(g);
            }
        }
        classes
            .into_values()
            .map(|g| OrbitMorphism {
                source: source.subset.clone(),
                target: target.subset.clone(),
                representative: g.clone(),
            })
            .collect()
    }

    /// Embeddings `Γ -> Σ`: restrictions to `Γ` of group elements mapping
    /// `Γ` into `Σ`, sorted.
    pub fn embeddings(&self, gamma: &[usize], sigma: &[usize]) -> Result<Vec<SubsetEmbedding>> {
        let gamma = normalize(self.action.degree(), gamma)?;
        let sigma = normalize(self.action.degree(), sigma)?;
        let maps: BTreeSet<Vec<usize>> = self
            .elements
            .iter()
            .filter(|g| {
                gamma
                    .iter()
                    .all(|&x| sigma.binary_search(&g.apply(x)).is_ok())
            })
            .map(|g| g.apply_tuple(&gamma))
            .collect();
        Ok(maps
            .into_iter()
            .map(|map| SubsetEmbedding {
                source: gamma.clone(),
                target: sigma.clone(),
                map,
            })
            .collect())
    }

    /// `φ(σ)`, checking that every extension of `σ` gives the same morphism.
    pub fn phi(&self, e: &SubsetEmbedding) -> Result<OrbitMorphism> {
        let source = normalize(self.action.degree(), &e.source)?;
        let target = normalize(self.action.degree(), &e.target)?;
        if e.map.len() != source.len() || e.map.iter().any(|y| target.binary_search(y).is_err()) {
            return malformed("embedding map does not send the source into the target");
        }
        let mut result: Option<OrbitMorphism> = None;
        for (g, g_inv) in self.elements.iter().zip(&self.inverses) {
            if source.iter().zip(&e.map).any(|(&x, &y)| g.apply(x) != y) {
                continue;
            }
            let m = OrbitMorphism {
                source: target.clone(),
                target: source.clone(),
                representative: g_inv.clone(),
            };
            match &result {
                None => result = Some(m),
                Some(first) if !self.same_morphism(first, &m) => {
                    return Err(Error::Violation(format!(
                        "extensions {} and {} of {:?} give different morphisms",
                        first.representative.inverse(),
                        g,
                        e.map
                    )))
                }
                Some(_) => {}
            }
        }
        result.ok_or_else(|| {
            Error::NoExtension(format!(
                "no group element sends {:?} to {:?}",
                one_based(&source),
                one_based(&e.map)
            ))
        })
    }
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

fn subsets_up_to(degree: usize, cap: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for k in 0..=cap.min(degree) {
        out.extend(crate::actions::enumerate_subsets(degree, k));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomMismatch {
    /// Source object `G/G_Σ` of the morphisms (1-indexed Σ).
    pub from: Vec<usize>,
    /// Target object `G/G_Γ` (1-indexed Γ).
    pub to: Vec<usize>,
    pub morphisms: usize,
    pub embedding_images: usize,
}

/// Result of comparing the embedding category with the orbit category on
/// subsets of size at most `size_cap`. All subsets are 1-indexed.
#[derive(Debug, Clone, Serialize)]
pub struct PhiIsoReport {
    pub degree: usize,
    pub group_order: usize,
    pub size_cap: usize,
    pub objects: Vec<Vec<usize>>,
    /// `hom_counts[i][j]`: morphisms `G/G_{objects[i]} -> G/G_{objects[j]}`.
    pub hom_counts: Vec<Vec<usize>>,
    /// `embedding_counts[i][j]`: embeddings `objects[j] -> objects[i]`.
    pub embedding_counts: Vec<Vec<usize>>,
    /// Distinct subsets with equal stabilizers.
    pub object_collisions: Vec<(Vec<usize>, Vec<usize>)>,
    pub fullness_failures: Vec<HomMismatch>,
    pub faithfulness_failures: Vec<HomMismatch>,
    pub functoriality_failures: Vec<String>,
    pub extension_failures: Vec<String>,
    /// Subsets whose stabilizer fixes an outside point.
    pub fixed_point_failures: Vec<Vec<usize>>,
    /// Every failure is accounted for by a fixed point outside the subset,
    /// and every such subset shows a fullness failure.
    pub failures_explained: bool,
    pub is_isomorphism: bool,
    pub witness: Option<Vec<usize>>,
}

/// Compares `φ` with the orbit category on all subsets of size at most
/// `size_cap`.
pub fn phi_iso_report(action: &FiniteAction, size_cap: usize) -> Result<PhiIsoReport> {
    if size_cap > action.degree() {
        return malformed(format!(
            "size cap {size_cap} exceeds the domain size {}",
            action.degree()
        ));
    }
    let cat = OrbitCategory::new(action)?;
    let subsets = subsets_up_to(action.degree(), size_cap);
    let objects: Vec<OrbitObject> = subsets
        .iter()
        .map(|s| cat.object(s))
        .collect::<Result<_>>()?;
    let n = objects.len();

    let mut object_collisions = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if objects[i].stabilizer == objects[j].stabilizer {
                object_collisions.push((one_based(&subsets[i]), one_based(&subsets[j])));
            }
        }
    }

    let fixed_point_failures: Vec<Vec<usize>> = objects
        .iter()
        .filter(|o| o.fixed.len() > o.subset.len())
        .map(|o| one_based(&o.subset))
        .collect();

    let mut hom_counts = vec![vec![0; n]; n];
    let mut embedding_counts = vec![vec![0; n]; n];
    let mut fullness_failures = Vec::new();
    let mut faithfulness_failures = Vec::new();
    let mut extension_failures = Vec::new();
    // phi_images[(gamma, sigma)] = (embedding, φ(embedding))
    let mut phi_images: Vec<Vec<Vec<(SubsetEmbedding, OrbitMorphism)>>> =
        vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            // Morphisms G/G_Σ -> G/G_Γ with Σ = objects[i], Γ = objects[j].
            let homs = cat.orbit_hom(&objects[i], &objects[j]);
            hom_counts[i][j] = homs.len();
            let embs = cat.embeddings(&subsets[j], &subsets[i])?;
            embedding_counts[i][j] = embs.len();
            let mut images: Vec<OrbitMorphism> = Vec::new();
            for e in embs {
                match cat.phi(&e) {
                    Ok(m) => {
                        images.push(m.clone());
                        phi_images[j][i].push((e, m));
                    }
                    Err(err) => extension_failures.push(err.to_string()),
                }
            }
            let mut distinct: Vec<&OrbitMorphism> = Vec::new();
            for m in &images {
                if !distinct.iter().any(|d| cat.same_morphism(d, m)) {
                    distinct.push(m);
                }
            }
            let mismatch = HomMismatch {
                from: one_based(&subsets[i]),
                to: one_based(&subsets[j]),
                morphisms: homs.len(),
                embedding_images: distinct.len(),
            };
            if distinct.len() < images.len() {
                faithfulness_failures.push(mismatch.clone());
            }
            if distinct.len() < homs.len() {
                fullness_failures.push(mismatch);
            }
        }
    }

    // φ(τ ∘ σ) = φ(σ) ∘ φ(τ) for σ: Γ -> Σ, τ: Σ -> Θ.
    let mut functoriality_failures = Vec::new();
    for row in &phi_images {
        for (s, cell) in row.iter().enumerate() {
            for (sigma, phi_sigma) in cell {
                for next in &phi_images[s] {
                    for (tau, phi_tau) in next {
                        let composite = SubsetEmbedding {
                            source: sigma.source.clone(),
                            target: tau.target.clone(),
                            map: sigma
                                .map
                                .iter()
                                .map(|y| tau.map[tau.source.binary_search(y).expect("in Σ")])
                                .collect(),
                        };
                        let lhs = cat.phi(&composite)?;
                        let rhs = cat.compose(phi_tau, phi_sigma)?;
                        if !cat.same_morphism(&lhs, &rhs) {
                            functoriality_failures.push(format!(
                                "{:?} -> {:?} -> {:?}",
                                one_based(&sigma.map),
                                one_based(&tau.source),
                                one_based(&composite.map)
                            ));
                        }
                    }
                }
            }
        }
    }

    let fullness_sources: BTreeSet<Vec<usize>> =
        fullness_failures.iter().map(|m| m.from.clone()).collect();
    let fp_set: BTreeSet<Vec<usize>> = fixed_point_failures.iter().cloned().collect();
    let collisions_explained = object_collisions
        .iter()
        .all(|(a, b)| fp_set.contains(a) || fp_set.contains(b));
    let failures_explained = fullness_sources == fp_set
        && collisions_explained
        && faithfulness_failures.is_empty()
        && functoriality_failures.is_empty()
        && extension_failures.is_empty();
    let is_isomorphism = object_collisions.is_empty()
        && fullness_failures.is_empty()
        && faithfulness_failures.is_empty()
        && functoriality_failures.is_empty()
        && extension_failures.is_empty();
    let witness = fullness_failures
        .first()
        .map(|m| m.from.clone())
        .or_else(|| object_collisions.first().map(|(a, _)| a.clone()));

    Ok(PhiIsoReport {
        degree: action.degree(),
        group_order: cat.elements.len(),
        size_cap,
        objects: subsets.iter().map(|s| one_based(s)).collect(),
        hom_counts,
        embedding_counts,
        object_collisions,
        fullness_failures,
        faithfulness_failures,
        functoriality_failures,
        extension_failures,
        fixed_point_failures,
        failures_explained,
        is_isomorphism,
        witness,
    })
}
