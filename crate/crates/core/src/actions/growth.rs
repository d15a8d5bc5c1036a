use serde::Serialize;

use super::{orbits, FiniteAction, OrbitMode};
use crate::error::{malformed, Result};

/// Orbit counts on subsets (`f`), injective tuples (`F`) and all tuples
/// (`F_star`) for `n = 1, ..., max_n`. Entry `n - 1` holds the value at `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthProfile {
    pub max_n: usize,
    pub f: Vec<u64>,
    #[serde(rename = "F")]
    pub big_f: Vec<u64>,
    #[serde(rename = "F_star")]
    pub f_star: Vec<u64>,
}

impl GrowthProfile {
    /// Violated invariants, empty when the profile is consistent.
    ///
    /// `degree` is the size of the underlying set. On a finite set the subset
    /// counts are symmetric (`f(n) = f(N - n)`), so `f` is only required to be
    /// nondecreasing up to `N / 2`.
    pub fn violations(&self, degree: usize) -> Vec<String> {
        let mut out = Vec::new();
        for n in 1..=self.max_n {
            let (f, big_f, f_star) = (self.f[n - 1], self.big_f[n - 1], self.f_star[n - 1]);
            let fact: u128 = (1..=n as u128).product();
            if !(f <= big_f && big_f as u128 <= fact * f as u128) {
                out.push(format!("sandwich f <= F <= n! f fails at n = {n}"));
            }
            let stirling: u128 = (1..=n)
                .map(|i| stirling2(n, i) * self.big_f[i - 1] as u128)
                .sum();
            if stirling != f_star as u128 {
                out.push(format!(
                    "F_star({n}) = {f_star} but the Stirling sum gives {stirling}"
                ));
            }
            if n >= 2 {
                if self.big_f[n - 2] > big_f {
                    out.push(format!("F decreases at n = {n}"));
                }
                if self.f_star[n - 2] > f_star {
                    out.push(format!("F_star decreases at n = {n}"));
                }
                if 2 * n <= degree && self.f[n - 2] > f {
                    out.push(format!("f decreases at n = {n}"));
                }
            }
        }
        out
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("n\tf\tF\tF_star\n");
        for n in 1..=self.max_n {
            out.push_str(&format!(
                "{n}\t{}\t{}\t{}\n",
                self.f[n - 1],
                self.big_f[n - 1],
                self.f_star[n - 1]
            ));
        }
        out
    }
}

/// Growth functions of `action` up to `max_n` (which must not exceed the
/// domain size).
pub fn growth_profile(action: &FiniteAction, max_n: usize) -> Result<GrowthProfile> {
    if max_n > action.degree() {
        return malformed(format!(
            "max_n = {max_n} exceeds the domain size {}",
            action.degree()
        ));
    }
    let count = |n, mode| -> Result<u64> { Ok(orbits(action, n, mode)?.len() as u64) };
    let mut profile = GrowthProfile {
        max_n,
        f: Vec::new(),
        big_f: Vec::new(),
        f_star: Vec::new(),
    };
    for n in 1..=max_n {
        profile.f.push(count(n, OrbitMode::Subsets)?);
        profile.big_f.push(count(n, OrbitMode::Injective)?);
        profile.f_star.push(count(n, OrbitMode::Power)?);
    }
    Ok(profile)
}

/// Stirling number of the second kind: partitions of an `n`-set into `k`
/// nonempty blocks.
pub fn stirling2(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = j as u128 * row[j] + row[j - 1];
        }
        row[0] = 0;
    }
    row[k]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stirling_values() {
        assert_eq!(stirling2(0, 0), 1);
        assert_eq!(stirling2(4, 2), 7);
        assert_eq!(stirling2(5, 3), 25);
        assert_eq!(stirling2(3, 1) + stirling2(3, 2) + stirling2(3, 3), 5);
        for n in 0..10 {
            assert_eq!(stirling2(n, n), 1);
            assert_eq!(stirling2(n, n + 1), 0);
        }
        for n in 1..12 {
            for k in 1..=n {
                assert_eq!(
                    stirling2(n, k),
                    k as u128 * stirling2(n - 1, k) + stirling2(n - 1, k - 1)
                );
            }
        }
    }

    #[test]
    fn symmetric_group_profile() {
        let p = growth_profile(&FiniteAction::symmetric(8), 4).unwrap();
        assert_eq!(p.f, vec![1, 1, 1, 1]);
        assert_eq!(p.big_f, vec![1, 1, 1, 1]);
        assert_eq!(p.f_star, vec![1, 2, 5, 15]);
        assert!(p.violations(8).is_empty());
    }

    #[test]
    fn small_profiles() {
        let d5 = growth_profile(&FiniteAction::dihedral(5), 2).unwrap();
        assert_eq!(d5.big_f[1], 2);
        let triv = growth_profile(&FiniteAction::trivial(3), 2).unwrap();
        assert_eq!(triv.big_f[1], 6);
        assert!(triv.violations(3).is_empty());
        assert!(growth_profile(&FiniteAction::trivial(3), 4).is_err());
    }

    #[test]
    fn tsv_layout() {
        let p = growth_profile(&FiniteAction::symmetric(4), 2).unwrap();
        assert_eq!(p.to_tsv(), "n\tf\tF\tF_star\n1\t1\t1\t1\n2\t1\t1\t2\n");
    }
}
