use serde::Serialize;

use super::{
    constrained_embeddings, enumerate_embeddings, is_embedding, Age, CachedAge, FiniteStructure,
};
use crate::error::{check_cap, malformed, Result};

/// Largest number of diagrams `age_has_sap` will examine.
pub const DEFAULT_DIAGRAM_CAP: u128 = 10_000_000;

/// A span `Γ₁ <- Σ -> Γ₂` of embeddings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmalgamationProblem {
    pub sigma: FiniteStructure,
    pub gamma1: FiniteStructure,
    pub gamma2: FiniteStructure,
    pub f1: Vec<usize>,
    pub f2: Vec<usize>,
}

impl AmalgamationProblem {
    /// Checks both maps are embeddings and all three structures lie in `age`.
    pub fn new(
        sigma: FiniteStructure,
        gamma1: FiniteStructure,
        gamma2: FiniteStructure,
        f1: Vec<usize>,
        f2: Vec<usize>,
        age: &dyn Age,
    ) -> Result<Self> {
        for (name, s) in [("Σ", &sigma), ("Γ₁", &gamma1), ("Γ₂", &gamma2)] {
            if !age.contains(s) {
                return malformed(format!("{name} is not in the age `{}`", age.name()));
            }
        }
        if !is_embedding(&sigma, &gamma1, &f1) {
            return malformed("f₁ is not an embedding Σ -> Γ₁");
        }
        if !is_embedding(&sigma, &gamma2, &f2) {
            return malformed("f₂ is not an embedding Σ -> Γ₂");
        }
        Ok(AmalgamationProblem {
            sigma,
            gamma1,
            gamma2,
            f1,
            f2,
        })
    }

    /// Size of the set pushout `Γ₁ ⊔_Σ Γ₂`.
    pub fn pushout_size(&self) -> usize {
        self.gamma1.size() + self.gamma2.size() - self.sigma.size()
    }
}

/// A cocone `Γ₁ -> Δ <- Γ₂` over a problem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Amalgam {
    pub delta: FiniteStructure,
    pub g1: Vec<usize>,
    pub g2: Vec<usize>,
}

impl Amalgam {
    /// Whether `g1`, `g2` are embeddings agreeing on `Σ`, and (if `strong`)
    /// their images meet only in the image of `Σ`.
    pub fn is_valid_for(&self, p: &AmalgamationProblem, strong: bool) -> bool {
        if !is_embedding(&p.gamma1, &self.delta, &self.g1)
            || !is_embedding(&p.gamma2, &self.delta, &self.g2)
        {
            return false;
        }
        let commutes = (0..p.sigma.size()).all(|a| self.g1[p.f1[a]] == self.g2[p.f2[a]]);
        if !commutes {
            return false;
        }
        !strong
            || (0..p.gamma1.size()).all(|b1| {
                (0..p.gamma2.size()).all(|b2| {
                    self.g1[b1] != self.g2[b2]
                        || (0..p.sigma.size()).any(|a| p.f1[a] == b1 && p.f2[a] == b2)
                })
            })
    }
}

/// Searches for an amalgam inside the members of `age`. With `strong`, the
/// universe is the set pushout and images overlap only over `Σ`; otherwise
/// universes from `max |Γᵢ|` to `|Γ₁| + |Γ₂|` are tried in turn.
pub fn solve_amalgamation(
    p: &AmalgamationProblem,
    age: &dyn Age,
    strong: bool,
) -> Result<Option<Amalgam>> {
    if strong {
        return solve_amalgamation_on(p, age, p.pushout_size(), true);
    }
    let low = p.gamma1.size().max(p.gamma2.size());
    for size in low..=p.gamma1.size() + p.gamma2.size() {
        if let Some(a) = solve_amalgamation_on(p, age, size, false)? {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

/// Amalgam search over members of `age` with exactly `size` elements.
pub fn solve_amalgamation_on(
    p: &AmalgamationProblem,
    age: &dyn Age,
    size: usize,
    strong: bool,
) -> Result<Option<Amalgam>> {
    for delta in age.representatives(size)? {
        for e1 in enumerate_embeddings(&p.gamma1, &delta) {
            let g1 = e1.map;
            let mut fixed = vec![None; p.gamma2.size()];
            for a in 0..p.sigma.size() {
                fixed[p.f2[a]] = Some(g1[p.f1[a]]);
            }
            let mut allowed = vec![true; size];
            if strong {
                for &y in &g1 {
                    allowed[y] = false;
                }
            }
            if let Some(g2) = constrained_embeddings(&p.gamma2, &delta, &fixed, &allowed, 1)
                .into_iter()
                .next()
            {
                let delta = label_amalgam(p, delta.clone(), &g1, &g2);
                return Ok(Some(Amalgam { delta, g1, g2 }));
            }
        }
    }
    Ok(None)
}

/// Names each element of `Δ` after the element of `Γ₁` or `Γ₂` mapping to it.
fn label_amalgam(
    p: &AmalgamationProblem,
    mut delta: FiniteStructure,
    g1: &[usize],
    g2: &[usize],
) -> FiniteStructure {
    let mut labels: Vec<Option<String>> = vec![None; delta.size()];
    for (b, &y) in g1.iter().enumerate() {
        labels[y] = Some(p.gamma1.labels()[b].clone());
    }
    for (b, &y) in g2.iter().enumerate() {
        if labels[y].is_none() {
            let mut name = p.gamma2.labels()[b].clone();
            while labels.iter().flatten().any(|l| *l == name) {
                name.push('\'');
            }
            labels[y] = Some(name);
        }
    }
    let mut fresh = 0;
    let labels = labels
        .into_iter()
        .map(|l| {
            l.unwrap_or_else(|| {
                fresh += 1;
                format!("new{fresh}")
            })
        })
        .collect();
    delta.set_labels(labels);
    delta
}

#[derive(Debug, Clone, Serialize)]
pub struct SapReport {
    pub age: String,
    pub size_cap: usize,
    pub holds: bool,
    pub diagrams_checked: u64,
    /// A diagram with no strong amalgam, when one was found.
    pub counterexample: Option<AmalgamationProblem>,
}

/// Checks the strong amalgamation property for all diagrams whose
/// structures have at most `size_cap` elements. Structures range over
/// isomorphism-class representatives and embeddings over all embeddings;
/// `Γ₁` is never larger than `Γ₂`.
pub fn age_has_sap(age: &dyn Age, size_cap: usize) -> Result<SapReport> {
    let cached = CachedAge::new(age);
    let age: &dyn Age = &cached;
    if size_cap == 0 {
        return malformed("size cap must be at least 1");
    }
    let reps: Vec<Vec<FiniteStructure>> = (0..=size_cap)
        .map(|k| age.representatives(k))
        .collect::<Result<_>>()?;
    let mut checked: u64 = 0;
    for s in 0..=size_cap {
        for sigma in &reps[s] {
            for a in s..=size_cap {
                for gamma1 in &reps[a] {
                    let emb1 = enumerate_embeddings(sigma, gamma1);
                    for larger in &reps[a..] {
                        for gamma2 in larger {
                            let emb2 = enumerate_embeddings(sigma, gamma2);
                            for f1 in &emb1 {
                                for f2 in &emb2 {
                                    checked += 1;
                                    check_cap("diagrams", checked as u128, DEFAULT_DIAGRAM_CAP)?;
                                    let p = AmalgamationProblem {
                                        sigma: sigma.clone(),
                                        gamma1: gamma1.clone(),
                                        gamma2: gamma2.clone(),
                                        f1: f1.map.clone(),
                                        f2: f2.map.clone(),
                                    };
                                    if solve_amalgamation(&p, age, true)?.is_none() {
                                        return Ok(SapReport {
                                            age: age.name(),
                                            size_cap,
                                            holds: false,
                                            diagrams_checked: checked,
                                            counterexample: Some(p),
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(SapReport {
        age: age.name(),
        size_cap,
        holds: true,
        diagrams_checked: checked,
        counterexample: None,
    })
}
