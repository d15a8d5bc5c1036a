use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{malformed, Error, Result};

/// A permutation of `{0, ..., N-1}` stored in one-line form.
///
/// Text forms are 1-indexed: one-line `[2,1,3]` or cycles `(1 2)(3 4 5)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree).collect())
    }

    /// Builds a permutation from 0-indexed images.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return malformed(format!("{images:?} is not a bijection of {n} points"));
            }
            seen[v] = true;
        }
        Ok(Permutation(images))
    }

    /// Builds a permutation of `degree` points from 1-indexed cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (i, &p) in cycle.iter().enumerate() {
                if p == 0 || p > degree {
                    return malformed(format!("cycle entry {p} outside 1..={degree}"));
                }
                if touched[p - 1] {
                    return malformed(format!("point {p} appears twice in cycle notation"));
                }
                touched[p - 1] = true;
                let next = cycle[(i + 1) % cycle.len()];
                images[p - 1] = next - 1;
            }
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &Permutation) -> Permutation {
        Permutation(inner.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn fixes_all(&self, points: &[usize]) -> bool {
        points.iter().all(|&p| self.0[p] == p)
    }

    pub fn apply_tuple(&self, tuple: &[usize]) -> Vec<usize> {
        tuple.iter().map(|&x| self.0[x]).collect()
    }

    /// Cycle notation, 1-indexed, fixed points omitted; `()` for identity.
    pub fn cycle_string(&self) -> String {
        let mut seen = vec![false; self.degree()];
        let mut out = String::new();
        for start in 0..self.degree() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            out.push('(');
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    out.push(' ');
                }
                out.push_str(&(x + 1).to_string());
                first = false;
                x = self.0[x];
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }

    /// Parses one-line `[..]` or cycle `(..)(..)` notation for `degree`
    /// points.
    pub fn parse(degree: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.starts_with('[') {
            let values = crate::categories::parse_index_list(text)?;
            if values.len() != degree {
                return malformed(format!(
                    "one-line permutation `{text}` has {} entries, expected {degree}",
                    values.len()
                ));
            }
            if values.contains(&0) {
                return malformed(format!("one-line permutation `{text}` contains 0"));
            }
            return Permutation::from_images(values.into_iter().map(|v| v - 1).collect());
        }
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let inner = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Malformed(format!("bad cycle notation `{text}`")))?;
            let close = inner
                .find(')')
                .ok_or_else(|| Error::Malformed(format!("unclosed cycle in `{text}`")))?;
            let body = &inner[..close];
            let cycle = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(crate::categories::parse_natural)
                .collect::<Result<Vec<_>>>()?;
            cycles.push(cycle);
            rest = inner[close + 1..].trim_start();
        }
        let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
        Permutation::from_cycles(degree, &refs)
    }
}

impl fmt::Display for Permutation {
    /// One-line notation, 1-indexed.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        f.write_str("]")
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// One-line notation only; cycle notation needs the degree.
    fn from_str(s: &str) -> Result<Self> {
        let values = crate::categories::parse_index_list(s)?;
        let n = values.len();
        Permutation::parse(n, s)
    }
}
