use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::FiniteAction;
use crate::categories::binomial;
use crate::error::{check_cap, malformed, Result};

/// Largest tuple/subset space that orbit enumeration will materialize.
pub const DEFAULT_SPACE_CAP: u128 = 5_000_000;

/// Which induced action on `n`-element objects to consider.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitMode {
    /// All of `Ω^n`.
    Power,
    /// Componentwise distinct tuples `Ω^(n)`.
    Injective,
    /// `n`-element subsets, stored as sorted tuples.
    Subsets,
}

impl std::str::FromStr for OrbitMode {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "power" => Ok(OrbitMode::Power),
            "injective" => Ok(OrbitMode::Injective),
            "subsets" => Ok(OrbitMode::Subsets),
            other => malformed(format!("unknown orbit mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orbit {
    /// Lexicographically least member (0-indexed points).
    pub representative: Vec<usize>,
    pub size: usize,
}

pub(crate) fn space_size(degree: usize, n: usize, mode: OrbitMode) -> u128 {
    match mode {
        OrbitMode::Power => (degree as u128).checked_pow(n as u32).unwrap_or(u128::MAX),
        OrbitMode::Injective => {
            if n > degree {
                0
            } else {
                ((degree - n + 1)..=degree).map(|v| v as u128).product()
            }
        }
        OrbitMode::Subsets => binomial(degree, n),
    }
}

/// Every element of the space in lexicographic order.
pub(crate) fn enumerate_space(degree: usize, n: usize, mode: OrbitMode) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    fn rec(
        degree: usize,
        n: usize,
        mode: OrbitMode,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        let start = match (mode, current.last()) {
            (OrbitMode::Subsets, Some(&last)) => last + 1,
            _ => 0,
        };
        for v in start..degree {
            if mode == OrbitMode::Injective && current.contains(&v) {
                continue;
            }
            current.push(v);
            rec(degree, n, mode, current, out);
            current.pop();
        }
    }
    rec(degree, n, mode, &mut current, &mut out);
    out
}

fn act(g: &super::Permutation, item: &[usize], mode: OrbitMode) -> Vec<usize> {
    let mut image = g.apply_tuple(item);
    if mode == OrbitMode::Subsets {
        image.sort_unstable();
    }
    image
}

/// The space in lexicographic order together with an orbit label per item.
/// Labels are assigned in order of first appearance, so two actions with the
/// same orbits on the space produce identical label vectors.
pub fn orbit_labels(
    action: &FiniteAction,
    n: usize,
    mode: OrbitMode,
) -> Result<(Vec<Vec<usize>>, Vec<usize>)> {
    let degree = action.degree();
    if mode != OrbitMode::Power && n > degree {
        return malformed(format!("n = {n} exceeds the domain size {degree}"));
    }
    check_cap(
        "orbit space",
        space_size(degree, n, mode),
        DEFAULT_SPACE_CAP,
    )?;
    let items = enumerate_space(degree, n, mode);
    let index: HashMap<&[usize], usize> = items
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_slice(), i))
        .collect();
    let mut labels = vec![usize::MAX; items.len()];
    let mut next = 0;
    let mut queue = VecDeque::new();
    for start in 0..items.len() {
        if labels[start] != usize::MAX {
            continue;
        }
        labels[start] = next;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            for g in action.generators() {
                let j = index[act(g, &items[i], mode).as_slice()];
                if labels[j] == usize::MAX {
                    labels[j] = next;
                    queue.push_back(j);
                }
            }
        }
        next += 1;
    }
    Ok((items, labels))
}

/// Orbits of the induced action on `n`-tuples or `n`-subsets.
///
/// Orbits are listed by representative, each representative being the
/// lexicographic minimum of its orbit.
pub fn orbits(action: &FiniteAction, n: usize, mode: OrbitMode) -> Result<Vec<Orbit>> {
    let (items, labels) = orbit_labels(action, n, mode)?;
    let mut out: Vec<Orbit> = Vec::new();
    for (item, &label) in items.iter().zip(&labels) {
        if label == out.len() {
            out.push(Orbit {
                representative: item.clone(),
                size: 0,
            });
        }
        out[label].size += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_power_pairs() {
        let s4 = FiniteAction::symmetric(4);
        let o = orbits(&s4, 2, OrbitMode::Power).unwrap();
        assert_eq!(o.len(), 2);
        assert_eq!(o[0].representative, vec![0, 0]);
        assert_eq!(o[0].size, 4);
        assert_eq!(o[1].representative, vec![0, 1]);
        assert_eq!(o[1].size, 12);
    }

    #[test]
    fn cyclic_injective_pairs() {
        let c4 = FiniteAction::cyclic(4);
        let o = orbits(&c4, 2, OrbitMode::Injective).unwrap();
        assert_eq!(o.len(), 3);
        let reps: Vec<_> = o.iter().map(|x| x.representative.clone()).collect();
        assert_eq!(reps, vec![vec![0, 1], vec![0, 2], vec![0, 3]]);
        assert!(o.iter().all(|x| x.size == 4));
    }

    #[test]
    fn empty_tuple() {
        for mode in [OrbitMode::Power, OrbitMode::Injective, OrbitMode::Subsets] {
            let o = orbits(&FiniteAction::dihedral(5), 0, mode).unwrap();
            assert_eq!(
                o,
                vec![Orbit {
                    representative: vec![],
                    size: 1
                }]
            );
        }
    }

    #[test]
    fn too_large_n() {
        assert!(orbits(&FiniteAction::symmetric(3), 4, OrbitMode::Injective).is_err());
        assert!(orbits(&FiniteAction::symmetric(3), 4, OrbitMode::Subsets).is_err());
        assert_eq!(
            orbits(&FiniteAction::symmetric(3), 4, OrbitMode::Power)
                .unwrap()
                .len(),
            14
        );
    }

    #[test]
    fn space_sizes_match_enumeration() {
        for mode in [OrbitMode::Power, OrbitMode::Injective, OrbitMode::Subsets] {
            for n in 0..=4 {
                assert_eq!(
                    enumerate_space(5, n, mode).len() as u128,
                    space_size(5, n, mode)
                );
            }
        }
    }
}
