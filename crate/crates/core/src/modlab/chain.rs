use serde::Serialize;

use super::field::Field;
use super::poly::{Monomial, MonomialOrder, Polynomial};
use super::presheaf::{width_component, PresheafElement, TruncatedSubmodule};
use crate::categories::CategoryKind;
use crate::error::{malformed, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChainConfig {
    pub max_width: usize,
    pub degree_cap: u32,
    pub order: MonomialOrder,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainRow {
    pub width: usize,
    /// 1-indexed position in the chain.
    pub chain_index: usize,
    pub component_rank_profile: Vec<usize>,
    pub grew: bool,
    /// No later step enlarges this width.
    pub stabilized: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WidthSummary {
    pub width: usize,
    /// First chain index after which the component never grows.
    pub stabilization_index: usize,
    /// The final step added nothing, so stabilization was observed.
    pub stabilized: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainReport {
    pub kind: CategoryKind,
    pub n: usize,
    pub field: Option<Field>,
    pub steps: usize,
    pub config: ChainConfig,
    pub rows: Vec<ChainRow>,
    pub widths: Vec<WidthSummary>,
    pub uniform_index: usize,
    pub all_stabilized: bool,
    /// Each component contains the previous one.
    pub components_monotone: bool,
    pub degree_cap_binding: bool,
}

fn contains_all(m: &TruncatedSubmodule, elements: &[super::groebner::ModuleElement]) -> bool {
    elements.iter().all(|e| m.groebner.contains(e))
}

/// Runs an ascending chain of generator sets (each containing the previous)
/// and records, for every width `0..=max_width`, where the components stop
/// growing.
pub fn chain_experiment(
    kind: CategoryKind,
    n: usize,
    chain: &[Vec<PresheafElement>],
    config: ChainConfig,
) -> Result<ChainReport> {
    if chain.is_empty() {
        return malformed("empty chain");
    }
    for (i, w) in chain.windows(2).enumerate() {
        if let Some(missing) = w[0].iter().find(|g| !w[1].contains(g)) {
            return malformed(format!(
                "step {} drops the generator `{missing}` of step {}",
                i + 2,
                i + 1
            ));
        }
    }
    let field = chain.iter().flatten().next().map(PresheafElement::field);
    let mut rows = Vec::new();
    let mut widths = Vec::new();
    let mut monotone = true;
    let mut binding = false;
    for s in 0..=config.max_width {
        let mut previous: Option<TruncatedSubmodule> = None;
        let mut last_growth = 1;
        let first_row = rows.len();
        for (i, gens) in chain.iter().enumerate() {
            let m = width_component(kind, n, gens, s, config.order, Some(config.degree_cap))?;
            binding |= m.groebner.degree_cap_binding;
            let grew = match &previous {
                None => !m.groebner.elements.is_empty(),
                Some(prev) => {
                    monotone &= contains_all(&m, &prev.spanning);
                    !contains_all(prev, &m.spanning)
                }
            };
            if grew {
                last_growth = i + 1;
            }
            rows.push(ChainRow {
                width: s,
                chain_index: i + 1,
                component_rank_profile: m.groebner.rank_profile(s, config.degree_cap),
                grew,
                stabilized: false,
            });
            previous = Some(m);
        }
        for row in &mut rows[first_row..] {
            row.stabilized = row.chain_index >= last_growth;
        }
        widths.push(WidthSummary {
            width: s,
            stabilization_index: last_growth,
            stabilized: last_growth < chain.len(),
        });
    }
    let uniform_index = widths
        .iter()
        .map(|w| w.stabilization_index)
        .max()
        .unwrap_or(1);
    let all_stabilized = widths.iter().all(|w| w.stabilized);
    Ok(ChainReport {
        kind,
        n,
        field,
        steps: chain.len(),
        config,
        rows,
        widths,
        uniform_index,
        all_stabilized,
        components_monotone: monotone,
        degree_cap_binding: binding,
    })
}

/// Prefix unions of `increments`: step `i` holds every generator of the
/// first `i` increments.
pub fn cumulative(increments: &[Vec<PresheafElement>]) -> Vec<Vec<PresheafElement>> {
    let mut acc = Vec::new();
    increments
        .iter()
        .map(|inc| {
            acc.extend(inc.iter().cloned());
            acc.clone()
        })
        .collect()
}

fn single(
    kind: CategoryKind,
    n: usize,
    s: usize,
    image: Vec<usize>,
    p: Polynomial,
    field: Field,
) -> PresheafElement {
    PresheafElement::basis_multiple(kind, n, s, image, p, field).expect("valid example generator")
}

/// The OI chain `⟨x1²⟩ ⊆ + ⟨x1x2⟩ ⊆ + ⟨x1⟩`, followed by a step adding the
/// redundant `x1³` so that stabilization can be observed.
pub fn oi_example_chain(field: Field) -> Vec<Vec<PresheafElement>> {
    let kind = CategoryKind::Oi;
    let mono = |e: Vec<u32>| Polynomial::term(field.one(), Monomial::new(e));
    cumulative(&[
        vec![single(kind, 1, 1, vec![1], mono(vec![2]), field)],
        vec![single(kind, 1, 2, vec![1], mono(vec![1, 1]), field)],
        vec![single(kind, 1, 1, vec![1], mono(vec![1]), field)],
        vec![single(kind, 1, 1, vec![1], mono(vec![3]), field)],
    ])
}

/// The FI chain in `P_0` whose step `j` adds the power sum
/// `x1^j + x2^j` at width 2.
pub fn fi_power_sum_chain(field: Field, steps: usize) -> Vec<Vec<PresheafElement>> {
    let increments: Vec<Vec<PresheafElement>> = (1..=steps as u32)
        .map(|k| {
            let p = Polynomial::var(field, 0)
                .pow(k, field)
                .add(&Polynomial::var(field, 1).pow(k, field));
            vec![single(CategoryKind::Fi, 0, 2, vec![], p, field)]
        })
        .collect();
    cumulative(&increments)
}
