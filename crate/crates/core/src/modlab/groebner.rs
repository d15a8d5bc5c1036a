//! Buchberger's algorithm for submodules of a free module `k[x]^r`.
//!
//! Terms are ordered position over term: a smaller position index is the
//! larger term, and within a position the monomial order decides.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::field::Scalar;
use super::poly::{write_term, Monomial, MonomialOrder, Polynomial};
use crate::error::{check_cap, malformed, Result};

/// Largest number of S-pairs reduced in one Buchberger run.
pub const DEFAULT_PAIR_CAP: u128 = 200_000;

/// An element of a free module, keyed by (basis position, monomial).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModuleElement {
    terms: BTreeMap<(usize, Monomial), Scalar>,
}

impl ModuleElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `p` placed at basis position `pos`.
    pub fn unit(pos: usize, p: &Polynomial) -> Self {
        let mut out = Self::zero();
        for (m, c) in p.terms() {
            out.add_term(pos, m.clone(), c.clone());
        }
        out
    }

    pub fn add_term(&mut self, pos: usize, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let key = (pos, m);
        match self.terms.remove(&key) {
            Some(old) => {
                let sum = old.add(&c);
                if !sum.is_zero() {
                    self.terms.insert(key, sum);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, Monomial), &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &ModuleElement) -> ModuleElement {
        let mut out = self.clone();
        for ((pos, m), c) in &other.terms {
            out.add_term(*pos, m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> ModuleElement {
        let mut out = Self::zero();
        for ((pos, m), a) in &self.terms {
            out.add_term(*pos, m.clone(), a.mul(c));
        }
        out
    }

    pub fn mul_poly(&self, p: &Polynomial) -> ModuleElement {
        let mut out = Self::zero();
        for ((pos, m), a) in &self.terms {
            for (n, b) in p.terms() {
                out.add_term(*pos, m.mul(n), a.mul(b));
            }
        }
        out
    }

    /// Coefficient polynomial at a position.
    pub fn component(&self, pos: usize) -> Polynomial {
        let mut p = Polynomial::zero();
        for ((q, m), c) in &self.terms {
            if *q == pos {
                p.add_term(m.clone(), c.clone());
            }
        }
        p
    }

    pub fn positions(&self) -> BTreeSet<usize> {
        self.terms.keys().map(|(p, _)| *p).collect()
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|(_, m)| m.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let degrees: BTreeSet<u32> = self.terms.keys().map(|(_, m)| m.degree()).collect();
        degrees.len() <= 1
    }

    /// Leading (position, monomial, coefficient) under `order`.
    pub fn leading_term(&self, order: MonomialOrder) -> Option<(usize, &Monomial, &Scalar)> {
        self.terms
            .iter()
            .max_by(|a, b| term_cmp(order, (a.0 .0, &a.0 .1), (b.0 .0, &b.0 .1)))
            .map(|((p, m), c)| (*p, m, c))
    }

    fn sorted(&self, order: MonomialOrder) -> Sorted {
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .map(|((pos, m), c)| Term {
                pos: *pos,
                mono: m.clone(),
                coef: c.clone(),
            })
            .collect();
        terms.sort_by(|a, b| term_cmp(order, (b.pos, &b.mono), (a.pos, &a.mono)));
        Sorted(terms)
    }

    fn from_sorted(s: &Sorted) -> ModuleElement {
        let mut out = Self::zero();
        for t in &s.0 {
            out.add_term(t.pos, t.mono.clone(), t.coef.clone());
        }
        out
    }
}

impl fmt::Display for ModuleElement {
    /// `(poly)*e1 + (poly)*e2`, positions 1-indexed.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, pos) in self.positions().into_iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let p = self.component(pos);
            f.write_str("(")?;
            for (j, (m, c)) in p
                .sorted_terms(MonomialOrder::Grevlex)
                .into_iter()
                .enumerate()
            {
                write_term(f, j == 0, c, m)?;
            }
            write!(f, ")*e{}", pos + 1)?;
        }
        Ok(())
    }
}

fn term_cmp(order: MonomialOrder, a: (usize, &Monomial), b: (usize, &Monomial)) -> Ordering {
    b.0.cmp(&a.0).then_with(|| order.cmp(a.1, b.1))
}

#[derive(Debug, Clone)]
struct Term {
    pos: usize,
    mono: Monomial,
    coef: Scalar,
}

/// Terms in strictly decreasing order.
#[derive(Debug, Clone)]
struct Sorted(Vec<Term>);

impl Sorted {
    fn lead(&self) -> Option<&Term> {
        self.0.first()
    }

    /// `self - c * m * other`; multiplication by a monomial keeps the order.
    fn sub_multiple(
        &self,
        other: &Sorted,
        c: &Scalar,
        m: &Monomial,
        order: MonomialOrder,
    ) -> Sorted {
        let shifted = other.0.iter().map(|t| Term {
            pos: t.pos,
            mono: t.mono.mul(m),
            coef: t.coef.mul(c).neg(),
        });
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let mut a = self.0.iter().cloned().peekable();
        let mut b = shifted.peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().expect("peeked")),
                (None, Some(_)) => out.push(b.next().expect("peeked")),
                (Some(x), Some(y)) => match term_cmp(order, (x.pos, &x.mono), (y.pos, &y.mono)) {
                    Ordering::Greater => out.push(a.next().expect("peeked")),
                    Ordering::Less => out.push(b.next().expect("peeked")),
                    Ordering::Equal => {
                        let x = a.next().expect("peeked");
                        let y = b.next().expect("peeked");
                        let coef = x.coef.add(&y.coef);
                        if !coef.is_zero() {
                            out.push(Term { coef, ..x });
                        }
                    }
                },
            }
        }
        Sorted(out)
    }

    fn make_monic(&mut self) {
        if let Some(inv) = self.lead().and_then(|t| t.coef.inv()) {
            for t in &mut self.0 {
                t.coef = t.coef.mul(&inv);
            }
        }
    }
}

/// Full reduction of `f` by `basis` (whose elements are monic).
fn reduce(f: &Sorted, basis: &[Sorted], order: MonomialOrder) -> Sorted {
    let mut p = f.clone();
    let mut rest: Vec<Term> = Vec::new();
    while let Some(lt) = p.lead().cloned() {
        let divisor = basis.iter().find_map(|g| {
            let gl = g.lead()?;
            if gl.pos != lt.pos {
                return None;
            }
            gl.mono.quotient(&lt.mono).map(|q| (g, q))
        });
        match divisor {
            Some((g, q)) => p = p.sub_multiple(g, &lt.coef, &q, order),
            None => {
                rest.push(lt);
                p.0.remove(0);
            }
        }
    }
    Sorted(rest)
}

fn s_poly(f: &Sorted, g: &Sorted, order: MonomialOrder) -> Option<Sorted> {
    let (lf, lg) = (f.lead()?, g.lead()?);
    if lf.pos != lg.pos {
        return None;
    }
    let lcm = lf.mono.lcm(&lg.mono);
    let mf = lf.mono.quotient(&lcm).expect("divides lcm");
    let mg = lg.mono.quotient(&lcm).expect("divides lcm");
    let cf = lf.coef.inv().expect("nonzero lead");
    let cg = lg.coef.inv().expect("nonzero lead");
    let zero = Sorted(Vec::new());
    let a = zero.sub_multiple(f, &cf.neg(), &mf, order);
    Some(a.sub_multiple(g, &cg, &mg, order))
}

/// A reduced Gröbner basis (complete up to `degree_cap` when that cap
/// skipped any S-pair).
#[derive(Debug, Clone, Serialize)]
pub struct GroebnerBasis {
    pub rank: usize,
    pub order: MonomialOrder,
    #[serde(serialize_with = "serialize_elements")]
    pub elements: Vec<ModuleElement>,
    pub degree_cap: Option<u32>,
    /// Some S-pair was skipped because its degree exceeded the cap.
    pub degree_cap_binding: bool,
    pub pairs_reduced: usize,
    #[serde(skip)]
    sorted: Vec<Sorted>,
}

fn serialize_elements<S: serde::Serializer>(
    elements: &[ModuleElement],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(elements.iter().map(|e| e.to_string()))
}

impl GroebnerBasis {
    pub fn normal_form(&self, f: &ModuleElement) -> ModuleElement {
        let basis: Vec<Sorted> = self.sorted.clone();
        ModuleElement::from_sorted(&reduce(&f.sorted(self.order), &basis, self.order))
    }

    pub fn contains(&self, f: &ModuleElement) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn leading_terms(&self) -> Vec<(usize, Monomial)> {
        self.sorted
            .iter()
            .filter_map(|w| w.lead().map(|t| (t.pos, t.mono.clone())))
            .collect()
    }

    /// For `d = 0..=max_degree`, the number of `(position, monomial of
    /// degree d in nvars variables)` lying in the leading-term module. For a
    /// homogeneous submodule this is its dimension in degree `d`.
    pub fn rank_profile(&self, nvars: usize, max_degree: u32) -> Vec<usize> {
        let leads = self.leading_terms();
        (0..=max_degree)
            .map(|d| {
                let monos = Monomial::all_of_degree(nvars, d);
                (0..self.rank)
                    .map(|pos| {
                        monos
                            .iter()
                            .filter(|m| leads.iter().any(|(p, l)| *p == pos && l.divides(m)))
                            .count()
                    })
                    .sum()
            })
            .collect()
    }

    /// Whether every S-polynomial of the basis reduces to zero.
    pub fn is_groebner(&self) -> bool {
        let basis: Vec<Sorted> = self.sorted.clone();
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                if let Some(s) = s_poly(&basis[i], &basis[j], self.order) {
                    if !reduce(&s, &basis, self.order).0.is_empty() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Reduced Gröbner basis of the submodule of `k[x]^rank` spanned by
/// `generators`. With a `degree_cap`, S-pairs whose leading monomial has
/// larger degree are skipped and the cap is reported as binding.
pub fn groebner_basis(
    generators: &[ModuleElement],
    rank: usize,
    order: MonomialOrder,
    degree_cap: Option<u32>,
) -> Result<GroebnerBasis> {
    groebner_basis_capped(generators, rank, order, degree_cap, DEFAULT_PAIR_CAP)
}

pub fn groebner_basis_capped(
    generators: &[ModuleElement],
    rank: usize,
    order: MonomialOrder,
    degree_cap: Option<u32>,
    pair_cap: u128,
) -> Result<GroebnerBasis> {
    if let Some(pos) = generators
        .iter()
        .flat_map(|g| g.positions())
        .find(|&p| p >= rank)
    {
        return malformed(format!(
            "position {} outside a free module of rank {rank}",
            pos + 1
        ));
    }
    let mut basis: Vec<Sorted> = Vec::new();
    for g in generators {
        let r = reduce(&g.sorted(order), &basis, order);
        if !r.0.is_empty() {
            let mut r = r;
            r.make_monic();
            basis.push(r);
        }
    }
    let mut pairs: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    let pair_key = |basis: &[Sorted], i: usize, j: usize| -> Option<u32> {
        let (a, b) = (basis[i].lead()?, basis[j].lead()?);
        (a.pos == b.pos).then(|| a.mono.lcm(&b.mono).degree())
    };
    for j in 0..basis.len() {
        for i in 0..j {
            if let Some(d) = pair_key(&basis, i, j) {
                pairs.insert((d, i, j));
            }
        }
    }
    let mut binding = false;
    let mut reduced = 0usize;
    while let Some(pair) = pairs.pop_first() {
        let (d, i, j) = pair;
        if degree_cap.is_some_and(|cap| d > cap) {
            binding = true;
            continue;
        }
        reduced += 1;
        check_cap("S-pairs", reduced as u128, pair_cap)?;
        let s = s_poly(&basis[i], &basis[j], order).expect("same position");
        let mut r = reduce(&s, &basis, order);
        if r.0.is_empty() {
            continue;
        }
        r.make_monic();
        basis.push(r);
        let k = basis.len() - 1;
        for i in 0..k {
            if let Some(d) = pair_key(&basis, i, k) {
                pairs.insert((d, i, k));
            }
        }
    }

    // Minimize, then interreduce.
    basis.sort_by(|a, b| {
        let (x, y) = (a.lead().expect("nonzero"), b.lead().expect("nonzero"));
        term_cmp(order, (x.pos, &x.mono), (y.pos, &y.mono))
    });
    let mut minimal: Vec<Sorted> = Vec::new();
    for (idx, g) in basis.iter().enumerate() {
        let gl = g.lead().expect("nonzero");
        let redundant = basis.iter().enumerate().any(|(jdx, h)| {
            let hl = h.lead().expect("nonzero");
            jdx != idx
                && hl.pos == gl.pos
                && hl.mono.divides(&gl.mono)
                && (hl.mono != gl.mono || jdx < idx)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced_basis = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Sorted> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let lead = minimal[i].0[0].clone();
        let tail = Sorted(minimal[i].0[1..].to_vec());
        let mut full = vec![lead];
        full.extend(reduce(&tail, &others, order).0);
        let mut g = Sorted(full);
        g.make_monic();
        reduced_basis.push(g);
    }
    reduced_basis.sort_by(|a, b| {
        let (x, y) = (a.lead().expect("nonzero"), b.lead().expect("nonzero"));
        term_cmp(order, (y.pos, &y.mono), (x.pos, &x.mono))
    });

    Ok(GroebnerBasis {
        rank,
        order,
        elements: reduced_basis
            .iter()
            .map(ModuleElement::from_sorted)
            .collect(),
        degree_cap,
        degree_cap_binding: binding,
        pairs_reduced: reduced,
        sorted: reduced_basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modlab::field::Field;

    fn el(text: &str) -> ModuleElement {
        ModuleElement::unit(0, &Polynomial::parse(text, Field::Rationals).unwrap())
    }

    #[test]
    fn univariate_gcd() {
        let gb = groebner_basis(
            &[el("x1^2 - 1"), el("x1 - 1")],
            1,
            MonomialOrder::Grevlex,
            None,
        )
        .unwrap();
        assert_eq!(gb.elements, vec![el("x1 - 1")]);
    }

    #[test]
    fn single_term_in_rank_two() {
        let f = ModuleElement::unit(0, &Polynomial::parse("x1", Field::Rationals).unwrap());
        let gb = groebner_basis(std::slice::from_ref(&f), 2, MonomialOrder::Grevlex, None).unwrap();
        assert_eq!(gb.elements, vec![f]);
    }

    #[test]
    fn lex_example() {
        let gb = groebner_basis(
            &[el("x1*x2 - 1"), el("x2^2 - 1")],
            1,
            MonomialOrder::Lex,
            None,
        )
        .unwrap();
        assert_eq!(gb.elements, vec![el("x1 - x2"), el("x2^2 - 1")]);
        assert!(gb.is_groebner());
        assert!(gb.contains(&el("x1^2 - 1")));
        assert!(!gb.contains(&el("x1 - 1")));
    }

    #[test]
    fn module_example() {
        // Submodule of k[x1,x2]^2 spanned by (x1, x2) and (x2, 0).
        let mut a = ModuleElement::unit(0, &Polynomial::parse("x1", Field::Rationals).unwrap());
        a = a.add(&ModuleElement::unit(
            1,
            &Polynomial::parse("x2", Field::Rationals).unwrap(),
        ));
        let b = ModuleElement::unit(0, &Polynomial::parse("x2", Field::Rationals).unwrap());
        let gb = groebner_basis(&[a.clone(), b.clone()], 2, MonomialOrder::Grevlex, None).unwrap();
        assert!(gb.is_groebner());
        let combo = a
            .mul_poly(&Polynomial::parse("x2", Field::Rationals).unwrap())
            .add(&b.mul_poly(&Polynomial::parse("-x1", Field::Rationals).unwrap()));
        assert!(gb.contains(&combo));
        assert!(!gb.contains(&ModuleElement::unit(
            1,
            &Polynomial::parse("x2", Field::Rationals).unwrap()
        )));
    }

    #[test]
    fn degree_cap_binding_is_reported() {
        let gb = groebner_basis(
            &[el("x1*x2 - x3^2"), el("x2^2 - x1*x3")],
            1,
            MonomialOrder::Grevlex,
            Some(2),
        )
        .unwrap();
        assert!(gb.degree_cap_binding);
        let full = groebner_basis(
            &[el("x1*x2 - x3^2"), el("x2^2 - x1*x3")],
            1,
            MonomialOrder::Grevlex,
            None,
        )
        .unwrap();
        assert!(!full.degree_cap_binding && full.is_groebner());
    }

    #[test]
    fn prime_field_unit_ideal() {
        let f3 = Field::Prime(3);
        let p = |t: &str| ModuleElement::unit(0, &Polynomial::parse(t, f3).unwrap());
        let gb = groebner_basis(&[p("x1 + 1"), p("x1 - 1")], 1, MonomialOrder::Lex, None).unwrap();
        assert_eq!(gb.elements, vec![p("1")]);
    }

    #[test]
    fn rank_profile_counts_leading_multiples() {
        let gb = groebner_basis(&[el("x1^2")], 1, MonomialOrder::Grevlex, None).unwrap();
        assert_eq!(gb.rank_profile(2, 3), vec![0, 0, 1, 2]);
    }
}
