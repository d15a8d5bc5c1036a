//! Independent oracles shared by the integration and acceptance tests.
//! Nothing here calls the routine it is used to check.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use orbitlab::categories::hom_set;
use orbitlab::modlab::{Field, Monomial, Polynomial, PresheafElement, Scalar};
use orbitlab::{CategoryKind, FiniteAction, Permutation};

/// The canonical relation of each kind, written out from its definition.
pub fn relation(kind: CategoryKind, t: &[usize]) -> bool {
    match kind {
        CategoryKind::Fi => false,
        CategoryKind::Oi => t[0] <= t[1],
        CategoryKind::Bi => {
            let (x, y, z) = (t[0], t[1], t[2]);
            (y < x && x < z) || (z < x && x < y)
        }
        CategoryKind::Ci => {
            let (x, y, z) = (t[0], t[1], t[2]);
            (x < y && y < z) || (y < z && z < x) || (z < x && x < y)
        }
        CategoryKind::Si => {
            let (x, y, z, w) = (t[0], t[1], t[2], t[3]);
            let distinct = BTreeSet::from([x, y, z, w]).len() == 4;
            let (lo, hi) = (x.min(y), x.max(y));
            let inside = |v: usize| lo < v && v < hi;
            distinct && inside(z) != inside(w)
        }
    }
}

pub fn arity(kind: CategoryKind) -> usize {
    match kind {
        CategoryKind::Fi => 0,
        CategoryKind::Oi => 2,
        CategoryKind::Bi | CategoryKind::Ci => 3,
        CategoryKind::Si => 4,
    }
}

fn tuples(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..=m).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// All injections `[m] -> [n]` (1-indexed images, lexicographic) that
/// preserve and reflect the relation of `kind`.
pub fn raw_hom_set(kind: CategoryKind, m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut injections = vec![Vec::new()];
    for _ in 0..m {
        injections = injections
            .into_iter()
            .flat_map(|f: Vec<usize>| {
                (1..=n)
                    .filter(|v| !f.contains(v))
                    .map(|v| {
                        let mut g = f.clone();
                        g.push(v);
                        g
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    if m > n {
        return Vec::new();
    }
    let checks = if arity(kind) == 0 {
        Vec::new()
    } else {
        tuples(m, arity(kind))
    };
    injections
        .into_iter()
        .filter(|f| {
            checks.iter().all(|t| {
                let image: Vec<usize> = t.iter().map(|&x| f[x - 1]).collect();
                relation(kind, t) == relation(kind, &image)
            })
        })
        .collect()
}

/// `counts[k]` = number of set partitions of `[n]` into `k` blocks, found
/// by listing restricted growth strings.
pub fn partition_counts(n: usize) -> Vec<u128> {
    fn go(pos: usize, n: usize, blocks: usize, counts: &mut [u128]) {
        if pos == n {
            counts[blocks] += 1;
            return;
        }
        for b in 0..=blocks {
            go(pos + 1, n, blocks.max(b + 1), counts);
        }
    }
    let mut counts = vec![0; n + 1];
    go(0, n, 0, &mut counts);
    counts
}

pub fn random_permutation(rng: &mut impl Rng, degree: usize) -> Permutation {
    let mut images: Vec<usize> = (0..degree).collect();
    images.shuffle(rng);
    Permutation::from_images(images).expect("shuffle is a bijection")
}

/// A group on `degree` points generated by one to three random
/// permutations.
pub fn random_action(rng: &mut impl Rng, degree: usize) -> FiniteAction {
    let gens = (0..rng.gen_range(1..=3))
        .map(|_| random_permutation(rng, degree))
        .collect();
    FiniteAction::new(degree, gens).expect("valid generators")
}

/// A subgroup generated by zero to two random elements of `g`.
pub fn random_subgroup(rng: &mut impl Rng, g: &FiniteAction) -> FiniteAction {
    let elements = g.elements().expect("small group");
    let gens = (0..rng.gen_range(0..=2))
        .map(|_| elements[rng.gen_range(0..elements.len())].clone())
        .collect();
    FiniteAction::new(g.degree(), gens).expect("valid generators")
}

/// Number of `G`-equivariant maps `G/G_Γ -> G/G_Σ` (0-indexed subsets).
///
/// The coset spaces are built as explicit element sets. A candidate image
/// `cK` of the base coset gives the function `xH ↦ xcK`, kept when it is
/// well defined on every coset and commutes with every group element.
pub fn equivariant_map_count(elements: &[Permutation], gamma: &[usize], sigma: &[usize]) -> usize {
    let h: Vec<&Permutation> = elements
        .iter()
        .filter(|g| gamma.iter().all(|&x| g.apply(x) == x))
        .collect();
    let k: Vec<&Permutation> = elements
        .iter()
        .filter(|g| sigma.iter().all(|&x| g.apply(x) == x))
        .collect();
    let coset_key = |x: &Permutation, sub: &[&Permutation]| -> Permutation {
        sub.iter()
            .map(|s| x.compose(s))
            .min()
            .expect("subgroup has the identity")
    };
    let mut h_cosets: BTreeMap<Permutation, Vec<&Permutation>> = BTreeMap::new();
    for x in elements {
        h_cosets.entry(coset_key(x, &h)).or_default().push(x);
    }
    let k_cosets: BTreeSet<Permutation> = elements.iter().map(|x| coset_key(x, &k)).collect();
    let mut count = 0;
    for c in &k_cosets {
        let mut image: HashMap<&Permutation, Permutation> = HashMap::new();
        let mut ok = true;
        for (key, members) in &h_cosets {
            let values: BTreeSet<Permutation> = members
                .iter()
                .map(|x| coset_key(&x.compose(c), &k))
                .collect();
            if values.len() != 1 {
                ok = false;
                break;
            }
            image.insert(key, values.into_iter().next().expect("one value"));
        }
        if !ok {
            continue;
        }
        let equivariant = elements.iter().all(|g| {
            h_cosets.keys().all(|key| {
                let moved = coset_key(&g.compose(key), &h);
                image[&moved] == coset_key(&g.compose(&image[key]), &k)
            })
        });
        if equivariant {
            count += 1;
        }
    }
    count
}

/// Field elements for the elimination oracle, with arithmetic written out
/// here rather than borrowed from the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Num {
    Q(BigRational),
    F(u64, u64),
}

impl Num {
    pub fn from_scalar(s: &Scalar) -> Num {
        match s {
            Scalar::Q(q) => Num::Q(q.clone()),
            Scalar::Fp { value, p } => Num::F(*value, *p),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Num::Q(q) => q.is_zero(),
            Num::F(v, _) => *v == 0,
        }
    }

    fn sub_mul(&self, a: &Num, b: &Num) -> Num {
        match (self, a, b) {
            (Num::Q(x), Num::Q(a), Num::Q(b)) => Num::Q(x - a * b),
            (Num::F(x, p), Num::F(a, _), Num::F(b, _)) => {
                let ab = (*a as u128 * *b as u128 % *p as u128) as u64;
                Num::F((x + p - ab) % p, *p)
            }
            _ => panic!("mixed fields"),
        }
    }

    fn div(&self, d: &Num) -> Num {
        match (self, d) {
            (Num::Q(x), Num::Q(d)) => Num::Q(x / d),
            (Num::F(x, p), Num::F(d, _)) => {
                // d^(p-2) by repeated squaring.
                let (mut base, mut e, mut inv) = (*d as u128, *p - 2, 1u128);
                while e > 0 {
                    if e & 1 == 1 {
                        inv = inv * base % *p as u128;
                    }
                    base = base * base % *p as u128;
                    e >>= 1;
                }
                Num::F((*x as u128 * inv % *p as u128) as u64, *p)
            }
            _ => panic!("mixed fields"),
        }
    }
}

type Vector = BTreeMap<(Vec<usize>, Vec<u32>), Num>;

/// Whether `target` lies in the linear span of `vectors`, by Gaussian
/// elimination.
pub fn in_span(vectors: &[Vector], target: &Vector) -> bool {
    let mut pivots: BTreeMap<(Vec<usize>, Vec<u32>), Vector> = BTreeMap::new();
    let reduce = |v: &Vector, pivots: &BTreeMap<(Vec<usize>, Vec<u32>), Vector>| -> Vector {
        let mut v = v.clone();
        loop {
            let hit = v
                .iter()
                .find(|(k, _)| pivots.contains_key(*k))
                .map(|(k, c)| (k.clone(), c.clone()));
            let Some((key, c)) = hit else { return v };
            let row = &pivots[&key];
            for (col, a) in row {
                let current = v.get(col).cloned().unwrap_or_else(|| zero_like(&c));
                let next = current.sub_mul(&c, a);
                if next.is_zero() {
                    v.remove(col);
                } else {
                    v.insert(col.clone(), next);
                }
            }
        }
    };
    for v in vectors {
        let r = reduce(v, &pivots);
        if let Some((key, lead)) = r.iter().next().map(|(k, c)| (k.clone(), c.clone())) {
            let normalized: Vector = r.iter().map(|(k, c)| (k.clone(), c.div(&lead))).collect();
            // Keep existing pivot rows reduced against the new one.
            let keys: Vec<_> = pivots.keys().cloned().collect();
            for k in keys {
                let row = pivots[&k].clone();
                if let Some(c) = row.get(&key).cloned() {
                    let mut updated = row.clone();
                    for (col, a) in &normalized {
                        let current = updated.get(col).cloned().unwrap_or_else(|| zero_like(&c));
                        let next = current.sub_mul(&c, a);
                        if next.is_zero() {
                            updated.remove(col);
                        } else {
                            updated.insert(col.clone(), next);
                        }
                    }
                    pivots.insert(k, updated);
                }
            }
            pivots.insert(key, normalized);
        }
    }
    reduce(target, &pivots).is_empty()
}

fn zero_like(n: &Num) -> Num {
    match n {
        Num::Q(_) => Num::Q(BigRational::zero()),
        Num::F(_, p) => Num::F(0, *p),
    }
}

fn padded(m: &Monomial, s: usize) -> Vec<u32> {
    (0..s).map(|i| m.exponent(i)).collect()
}

/// Coordinates of a presheaf element: `(basis image, exponent vector)`.
pub fn coordinates(v: &PresheafElement) -> Vector {
    let mut out = Vector::new();
    for (image, p) in v.coefficients() {
        for (m, c) in p.terms() {
            out.insert((image.clone(), padded(m, v.width())), Num::from_scalar(c));
        }
    }
    out
}

fn exponent_vectors(s: usize, d: u32) -> Vec<Vec<u32>> {
    if s == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=d {
        for mut rest in exponent_vectors(s - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Degree-`d` part of the width-`s` component generated by homogeneous
/// `generators`: translates `x^a · π(g)` with `π` any morphism into `[s]`,
/// the action written out directly on coordinates.
pub fn degree_slice(generators: &[PresheafElement], s: usize, d: u32) -> Vec<Vector> {
    let mut out = Vec::new();
    for g in generators.iter().filter(|g| g.width() <= s && !g.is_zero()) {
        let dg = g.degree();
        if dg > d {
            continue;
        }
        let coords = coordinates(g);
        for pi in raw_hom_set(g.kind(), g.width(), s) {
            let mut moved = Vector::new();
            for ((image, exps), c) in &coords {
                let new_image: Vec<usize> = image.iter().map(|&i| pi[i - 1]).collect();
                let mut new_exps = vec![0; s];
                for (i, &e) in exps.iter().enumerate() {
                    new_exps[pi[i] - 1] += e;
                }
                moved.insert((new_image, new_exps), c.clone());
            }
            for shift in exponent_vectors(s, d - dg) {
                out.push(
                    moved
                        .iter()
                        .map(|((img, e), c)| {
                            let e = e.iter().zip(&shift).map(|(a, b)| a + b).collect();
                            ((img.clone(), e), c.clone())
                        })
                        .collect(),
                );
            }
        }
    }
    out
}

/// Membership of a homogeneous element by linear algebra in its degree.
pub fn linear_membership(generators: &[PresheafElement], v: &PresheafElement) -> bool {
    if v.is_zero() {
        return true;
    }
    in_span(
        &degree_slice(generators, v.width(), v.degree()),
        &coordinates(v),
    )
}

/// A random homogeneous polynomial of degree `d` in `s` variables with
/// small nonzero coefficients.
pub fn random_homogeneous(rng: &mut impl Rng, field: Field, s: usize, d: u32) -> Polynomial {
    let monomials = exponent_vectors(s, d);
    let mut p = Polynomial::zero();
    if monomials.is_empty() {
        return p;
    }
    for _ in 0..rng.gen_range(1..=3) {
        let m = Monomial::new(monomials[rng.gen_range(0..monomials.len())].clone());
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-3i64..=3);
        }
        p = p.add(&Polynomial::term(field.from_i64(c), m));
    }
    p
}

/// A random homogeneous element of `P_n` at width `s`, supported on one or
/// two basis morphisms.
pub fn random_element(
    rng: &mut impl Rng,
    kind: CategoryKind,
    n: usize,
    s: usize,
    d: u32,
    field: Field,
) -> Option<PresheafElement> {
    let basis = hom_set(kind, n, s).expect("small hom-set");
    if basis.is_empty() {
        return None;
    }
    let mut v = PresheafElement::zero(kind, n, s, field);
    for _ in 0..rng.gen_range(1..=2) {
        let image = basis[rng.gen_range(0..basis.len())].image().to_vec();
        v.add_term(image, random_homogeneous(rng, field, s, d))
            .expect("valid term");
    }
    Some(v)
}
