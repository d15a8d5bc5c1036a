//! The five combinatorial categories FI, OI, BI, CI and SI.
//!
//! Objects are the finite sets `[n] = {1, ..., n}` carrying the canonical
//! structure of their kind (nothing, the linear order, linear betweenness,
//! the cyclic order, the separation relation). Morphisms are injections that
//! preserve *and* reflect that structure on tuples of distinct points.
//!
//! Image arrays are 1-indexed: `image[i]` is the value of `i + 1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_cap, malformed, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CategoryKind {
    Fi,
    Oi,
    Bi,
    Ci,
    Si,
}

impl CategoryKind {
    pub const ALL: [CategoryKind; 5] = [
        CategoryKind::Fi,
        CategoryKind::Oi,
        CategoryKind::Bi,
        CategoryKind::Ci,
        CategoryKind::Si,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CategoryKind::Fi => "FI",
            CategoryKind::Oi => "OI",
            CategoryKind::Bi => "BI",
            CategoryKind::Ci => "CI",
            CategoryKind::Si => "SI",
        }
    }

    /// Arity of the canonical relation, `None` for FI.
    pub fn arity(self) -> Option<usize> {
        match self {
            CategoryKind::Fi => None,
            CategoryKind::Oi => Some(2),
            CategoryKind::Bi | CategoryKind::Ci => Some(3),
            CategoryKind::Si => Some(4),
        }
    }

    /// Name of the canonical relation when viewed as a relational signature.
    pub fn relation_name(self) -> Option<&'static str> {
        match self {
            CategoryKind::Fi => None,
            CategoryKind::Oi => Some("le"),
            CategoryKind::Bi => Some("between"),
            CategoryKind::Ci => Some("cyclic"),
            CategoryKind::Si => Some("sep"),
        }
    }

    /// Whether the canonical relation holds on `tuple` (values compared by
    /// their natural order; on the circle `1, 2, ..., n, 1` for CI and SI).
    pub fn relation_holds(self, tuple: &[usize]) -> bool {
        match (self, tuple) {
            (CategoryKind::Fi, _) => false,
            (CategoryKind::Oi, &[x, y]) => x <= y,
            (CategoryKind::Bi, &[x, y, z]) => (y < x && x < z) || (z < x && x < y),
            (CategoryKind::Ci, &[x, y, z]) => cyclic(x, y, z),
            (CategoryKind::Si, &[x, y, z, w]) => {
                distinct(&[x, y, z, w]) && cyclic(x, z, y) != cyclic(x, w, y)
            }
            _ => false,
        }
    }

    /// Default bound on `n!/(n-m)!` for hom-set enumeration. FI materializes
    /// every injection; the other kinds prune while enumerating, so their
    /// bound only guards against absurd requests.
    pub fn default_enumeration_cap(self) -> u128 {
        match self {
            CategoryKind::Fi => 3_628_800,
            _ => 1_000_000_000_000,
        }
    }
}

fn cyclic(x: usize, y: usize, z: usize) -> bool {
    (x < y && y < z) || (y < z && z < x) || (z < x && x < y)
}

fn distinct(values: &[usize]) -> bool {
    values
        .iter()
        .enumerate()
        .all(|(i, a)| values[i + 1..].iter().all(|b| a != b))
}

impl fmt::Display for CategoryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CategoryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fi" | "set" | "sets" => Ok(CategoryKind::Fi),
            "oi" | "linear" | "order" => Ok(CategoryKind::Oi),
            "bi" | "betweenness" => Ok(CategoryKind::Bi),
            "ci" | "cyclic" => Ok(CategoryKind::Ci),
            "si" | "separation" => Ok(CategoryKind::Si),
            other => malformed(format!("unknown category kind `{other}`")),
        }
    }
}

/// The canonical relation of a kind on `[n]`, materialized as a tuple set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalRelation {
    pub kind: CategoryKind,
    pub n: usize,
    pub tuples: Vec<Vec<usize>>,
}

impl CanonicalRelation {
    /// All tuples of `[n]` (values 1..=n) in the relation, in lexicographic
    /// order. For OI this includes the reflexive pairs.
    pub fn new(kind: CategoryKind, n: usize) -> Self {
        let tuples = match kind.arity() {
            None => Vec::new(),
            Some(arity) => all_tuples(n, arity)
                .into_iter()
                .filter(|t| kind.relation_holds(t))
                .collect(),
        };
        CanonicalRelation { kind, n, tuples }
    }
}

fn all_tuples(n: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..=n).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// A morphism `[source] -> [target]` of one of the five categories.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InjectionMorphism {
    kind: CategoryKind,
    source: usize,
    target: usize,
    image: Vec<usize>,
}

impl InjectionMorphism {
    /// Validates `image` and builds the morphism. An image that is not a
    /// structure embedding is rejected as malformed.
    pub fn new(
        kind: CategoryKind,
        source: usize,
        target: usize,
        image: Vec<usize>,
    ) -> Result<Self> {
        if !is_morphism(kind, source, target, &image)? {
            return malformed(format!(
                "{kind} {source}->{target} : {image:?} is not an embedding"
            ));
        }
        Ok(InjectionMorphism {
            kind,
            source,
            target,
            image,
        })
    }

    pub(crate) fn new_unchecked(
        kind: CategoryKind,
        source: usize,
        target: usize,
        image: Vec<usize>,
    ) -> Self {
        InjectionMorphism {
            kind,
            source,
            target,
            image,
        }
    }

    pub fn identity(kind: CategoryKind, n: usize) -> Self {
        Self::new_unchecked(kind, n, n, (1..=n).collect())
    }

    pub fn kind(&self) -> CategoryKind {
        self.kind
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// Value of the point `i` (1-indexed).
    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1]
    }

    pub fn is_increasing(&self) -> bool {
        self.image.windows(2).all(|w| w[0] < w[1])
    }

    /// Same map viewed in another category. Fails if it is not a morphism
    /// there.
    pub fn with_kind(&self, kind: CategoryKind) -> Result<Self> {
        Self::new(kind, self.source, self.target, self.image.clone())
    }
}

impl fmt::Display for InjectionMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}->{} : [", self.kind, self.source, self.target)?;
        for (i, v) in self.image.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for InjectionMorphism {
    type Err = Error;

    /// Parses `KIND m->n : [i1,...,im]`.
    fn from_str(s: &str) -> Result<Self> {
        let (head, body) = s
            .split_once(':')
            .ok_or_else(|| Error::Malformed(format!("missing `:` in morphism `{s}`")))?;
        let mut head_parts = head.split_whitespace();
        let kind: CategoryKind = head_parts
            .next()
            .ok_or_else(|| Error::Malformed(format!("missing kind in `{s}`")))?
            .parse()?;
        let arrow: String = head_parts.collect();
        let (m, n) = arrow
            .split_once("->")
            .ok_or_else(|| Error::Malformed(format!("missing `m->n` in `{s}`")))?;
        let m = parse_natural(m)?;
        let n = parse_natural(n)?;
        let image = parse_index_list(body)?;
        Self::new(kind, m, n, image)
    }
}

pub(crate) fn parse_natural(s: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::Malformed(format!("expected a natural number, got `{}`", s.trim())))
}

/// Parses `[1,2,3]` (brackets required, whitespace tolerated).
pub(crate) fn parse_index_list(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::Malformed(format!("expected `[...]`, got `{s}`")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(parse_natural).collect()
}

fn validate_image(m: usize, n: usize, image: &[usize]) -> Result<()> {
    if image.len() != m {
        return malformed(format!("image has length {}, expected {m}", image.len()));
    }
    if let Some(v) = image.iter().find(|&&v| v == 0 || v > n) {
        return malformed(format!("image entry {v} outside 1..={n}"));
    }
    Ok(())
}

/// Whether `image` defines a morphism `[m] -> [n]` of `kind`.
///
/// Malformed input (wrong length, entries out of range) is an error, distinct
/// from a well-formed map that simply is not an embedding.
pub fn is_morphism(kind: CategoryKind, m: usize, n: usize, image: &[usize]) -> Result<bool> {
    validate_image(m, n, image)?;
    if !distinct(image) {
        return Ok(false);
    }
    let Some(arity) = kind.arity() else {
        return Ok(true);
    };
    let mut src = vec![0; arity];
    let mut dst = vec![0; arity];
    let ok = distinct_tuples(m, arity).all(|t| {
        for (k, &p) in t.iter().enumerate() {
            src[k] = p;
            dst[k] = image[p - 1];
        }
        kind.relation_holds(&src) == kind.relation_holds(&dst)
    });
    Ok(ok)
}

/// Tuples of pairwise distinct points of `[m]`.
fn distinct_tuples(m: usize, arity: usize) -> impl Iterator<Item = Vec<usize>> {
    all_tuples(m, arity).into_iter().filter(|t| distinct(t))
}

fn falling_factorial(n: usize, m: usize) -> u128 {
    if m > n {
        return 0;
    }
    ((n - m + 1)..=n).map(|v| v as u128).product()
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Closed-form size of `kind([m], [n])`.
pub fn closed_form_count(kind: CategoryKind, m: usize, n: usize) -> u128 {
    if m > n {
        return 0;
    }
    let c = binomial(n, m);
    match kind {
        CategoryKind::Fi => falling_factorial(n, m),
        CategoryKind::Oi => c,
        CategoryKind::Bi => match m {
            0 => 1,
            1 => n as u128,
            _ => 2 * c,
        },
        CategoryKind::Ci => match m {
            0 => 1,
            _ => m as u128 * c,
        },
        CategoryKind::Si => match m {
            0 => 1,
            1 => n as u128,
            2 => (n * (n - 1)) as u128,
            _ => 2 * m as u128 * c,
        },
    }
}

/// All morphisms `[m] -> [n]` of `kind`, sorted lexicographically by image.
pub fn hom_set(kind: CategoryKind, m: usize, n: usize) -> Result<Vec<InjectionMorphism>> {
    hom_set_capped(kind, m, n, kind.default_enumeration_cap())
}

/// As [`hom_set`] with an explicit bound on `n!/(n-m)!`.
pub fn hom_set_capped(
    kind: CategoryKind,
    m: usize,
    n: usize,
    cap: u128,
) -> Result<Vec<InjectionMorphism>> {
    check_cap("hom-set enumeration", falling_factorial(n, m), cap)?;
    let mut out = Vec::new();
    if m > n {
        return Ok(out);
    }
    let mut image = Vec::with_capacity(m);
    let mut used = vec![false; n + 1];
    extend_hom(kind, m, n, &mut image, &mut used, &mut out);
    Ok(out)
}

fn extend_hom(
    kind: CategoryKind,
    m: usize,
    n: usize,
    image: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<InjectionMorphism>,
) {
    if image.len() == m {
        out.push(InjectionMorphism::new_unchecked(kind, m, n, image.clone()));
        return;
    }
    for v in 1..=n {
        if used[v] {
            continue;
        }
        image.push(v);
        if last_point_consistent(kind, image) {
            used[v] = true;
            extend_hom(kind, m, n, image, used, out);
            used[v] = false;
        }
        image.pop();
    }
}

/// Checks the embedding condition on every distinct tuple that involves the
/// most recently assigned point. Earlier tuples were checked when their own
/// last point was assigned.
fn last_point_consistent(kind: CategoryKind, image: &[usize]) -> bool {
    let Some(arity) = kind.arity() else {
        return true;
    };
    let k = image.len();
    if k < arity {
        return true;
    }
    let last = k;
    let mut src = vec![0; arity];
    let mut dst = vec![0; arity];
    for t in distinct_tuples(k, arity) {
        if !t.contains(&last) {
            continue;
        }
        for (i, &p) in t.iter().enumerate() {
            src[i] = p;
            dst[i] = image[p - 1];
        }
        if kind.relation_holds(&src) != kind.relation_holds(&dst) {
            return false;
        }
    }
    true
}

/// `g ∘ f`: first `f`, then `g`. The result maps `i` to `g(f(i))`.
pub fn compose(f: &InjectionMorphism, g: &InjectionMorphism) -> Result<InjectionMorphism> {
    if f.kind != g.kind {
        return malformed(format!("cannot compose {} with {}", f.kind, g.kind));
    }
    if f.target != g.source {
        return malformed(format!(
            "cannot compose {}->{} with {}->{}",
            f.source, f.target, g.source, g.target
        ));
    }
    let image = f.image.iter().map(|&v| g.image[v - 1]).collect();
    Ok(InjectionMorphism::new_unchecked(
        f.kind, f.source, g.target, image,
    ))
}

/// Result of splitting a morphism into a symmetry of its source followed by
/// an increasing injection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    /// The unique increasing injection with the same image set.
    pub increasing: InjectionMorphism,
    /// The automorphism of the source structure applied first.
    pub automorphism: InjectionMorphism,
}

/// Writes `f = increasing ∘ automorphism` with `increasing` strictly
/// increasing and `automorphism` in `kind([m], [m])`.
///
/// If the rearrangement is not an automorphism of the source structure the
/// failure is surfaced as a [`Error::Violation`].
pub fn factorize(f: &InjectionMorphism) -> Result<Factorization> {
    let mut sorted = f.image.clone();
    sorted.sort_unstable();
    let rank: Vec<usize> = f
        .image
        .iter()
        .map(|v| {
            sorted
                .binary_search(v)
                .expect("value is in its own sorted image")
                + 1
        })
        .collect();
    let increasing = InjectionMorphism::new_unchecked(f.kind, f.source, f.target, sorted);
    if !is_morphism(f.kind, f.source, f.source, &rank)? {
        return Err(Error::Violation(format!(
            "{f} has no factorization: rearrangement {rank:?} is not an automorphism"
        )));
    }
    let automorphism = InjectionMorphism::new_unchecked(f.kind, f.source, f.source, rank);
    Ok(Factorization {
        increasing,
        automorphism,
    })
}

/// `kind([n], [n])`, checked to be a group under composition.
pub fn endomorphism_group(kind: CategoryKind, n: usize) -> Result<Vec<InjectionMorphism>> {
    let elements = hom_set(kind, n, n)?;
    let contains = |g: &InjectionMorphism| elements.binary_search(g).is_ok();
    let identity = InjectionMorphism::identity(kind, n);
    if !contains(&identity) {
        return Err(Error::Violation(format!(
            "{kind}([{n}],[{n}]) lacks the identity"
        )));
    }
    for a in &elements {
        let mut has_inverse = false;
        for b in &elements {
            let ab = compose(a, b)?;
            if !contains(&ab) {
                return Err(Error::Violation(format!(
                    "{kind}([{n}],[{n}]) not closed: {a} then {b}"
                )));
            }
            has_inverse |= ab == identity;
        }
        if !has_inverse {
            return Err(Error::Violation(format!("{a} has no inverse")));
        }
    }
    Ok(elements)
}
