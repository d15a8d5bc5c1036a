use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize, Serializer};

use super::field::{Field, Scalar};
use crate::error::{malformed, Error, Result};

/// Exponent vector; entry `i` is the power of `x_{i+1}`. Trailing zeros are
/// never stored, so equal monomials compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut exponents: Vec<u32>) -> Self {
        while exponents.last() == Some(&0) {
            exponents.pop();
        }
        Monomial(exponents)
    }

    /// `x_{i+1}`.
    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// One more than the largest variable index present.
    pub fn num_vars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let len = self.0.len().max(other.0.len());
        Monomial(
            (0..len)
                .map(|i| self.exponent(i) + other.exponent(i))
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient(&self, other: &Monomial) -> Option<Monomial> {
        self.divides(other).then(|| {
            Monomial::new(
                (0..other.0.len())
                    .map(|i| other.0[i] - self.exponent(i))
                    .collect(),
            )
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let len = self.0.len().max(other.0.len());
        Monomial(
            (0..len)
                .map(|i| self.exponent(i).max(other.exponent(i)))
                .collect(),
        )
    }

    /// Renames `x_{i+1}` to `x_{map[i]+1}`; `map` must be injective.
    pub fn substitute(&self, map: &[usize]) -> Monomial {
        let len = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| map[i] + 1)
            .max();
        let mut e = vec![0; len.unwrap_or(0)];
        for (i, &a) in self.0.iter().enumerate() {
            if a > 0 {
                e[map[i]] += a;
            }
        }
        Monomial(e)
    }

    /// All monomials of total degree `d` in the first `nvars` variables,
    /// in lexicographic order of exponent vectors.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        fn rec(i: usize, nvars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i + 1 == nvars {
                cur.push(left);
                out.push(Monomial::new(cur.clone()));
                cur.pop();
                return;
            }
            for e in (0..=left).rev() {
                cur.push(e);
                rec(i + 1, nvars, left - e, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial::one());
            }
            return out;
        }
        rec(0, nvars, d, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Monomial order with `x1 > x2 > ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    Lex,
    #[default]
    Grevlex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Ordering {
        let len = a.0.len().max(b.0.len());
        match self {
            MonomialOrder::Lex => {
                for i in 0..len {
                    match a.exponent(i).cmp(&b.exponent(i)) {
                        Ordering::Equal => continue,
                        other => return other,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Grevlex => a.degree().cmp(&b.degree()).then_with(|| {
                for i in (0..len).rev() {
                    match a.exponent(i).cmp(&b.exponent(i)) {
                        Ordering::Equal => continue,
                        other => return other.reverse(),
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MonomialOrder::Lex => "lex",
            MonomialOrder::Grevlex => "grevlex",
        })
    }
}

impl FromStr for MonomialOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lex" => Ok(MonomialOrder::Lex),
            "grevlex" => Ok(MonomialOrder::Grevlex),
            other => malformed(format!("unknown monomial order `{other}`")),
        }
    }
}

/// Sparse polynomial in `x1, x2, ...`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn term(c: Scalar, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn var(field: Field, i: usize) -> Self {
        Self::term(field.one(), Monomial::var(i))
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let sum = old.add(&c);
                if !sum.is_zero() {
                    self.terms.insert(m, sum);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn field(&self) -> Option<Field> {
        self.terms.values().next().map(Scalar::field)
    }

    /// One more than the largest variable index used.
    pub fn num_vars(&self) -> usize {
        self.terms.keys().map(Monomial::num_vars).max().unwrap_or(0)
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            Some(d) => degrees.all(|e| e == d),
            None => true,
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a.mul(c));
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                out.add_term(m.mul(n), a.mul(b));
            }
        }
        out
    }

    pub fn pow(&self, k: u32, field: Field) -> Polynomial {
        let mut out = Polynomial::constant(field.one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `x_{i+1} ↦ x_{map[i]+1}` for an injective `map`.
    pub fn substitute(&self, map: &[usize]) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.substitute(map), c.clone()))
                .collect(),
        }
    }

    /// Terms sorted from largest to smallest under `order`.
    pub fn sorted_terms(&self, order: MonomialOrder) -> Vec<(&Monomial, &Scalar)> {
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|a, b| order.cmp(b.0, a.0));
        ts
    }

    /// Parses ASCII such as `3/2*x1^2*x3 - x2` into `field`.
    pub fn parse(text: &str, field: Field) -> Result<Polynomial> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return malformed("empty polynomial");
        }
        let mut out = Polynomial::zero();
        let bytes = s.as_bytes();
        let mut start = 0;
        let mut i = 0;
        while i <= bytes.len() {
            let boundary = i == bytes.len()
                || (i > start && (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^');
            if boundary {
                let (m, c) = parse_term(&s[start..i], field)?;
                out.add_term(m, c);
                start = i;
            }
            i += 1;
        }
        Ok(out)
    }
}

fn parse_term(term: &str, field: Field) -> Result<(Monomial, Scalar)> {
    let (negative, body) = match term.as_bytes().first() {
        Some(b'+') => (false, &term[1..]),
        Some(b'-') => (true, &term[1..]),
        _ => (false, term),
    };
    if body.is_empty() {
        return malformed(format!("empty term in `{term}`"));
    }
    let mut coeff = BigRational::from_integer(BigInt::from(1));
    let mut exps: Vec<u32> = Vec::new();
    for factor in body.split('*') {
        if let Some(var) = factor.strip_prefix('x') {
            let (index, power) = match var.split_once('^') {
                Some((i, p)) => (i, p),
                None => (var, "1"),
            };
            let index: usize = index
                .parse()
                .map_err(|_| Error::Malformed(format!("bad variable `{factor}`")))?;
            let power: u32 = power
                .parse()
                .map_err(|_| Error::Malformed(format!("bad exponent in `{factor}`")))?;
            if index == 0 {
                return malformed("variables are numbered from x1");
            }
            if exps.len() < index {
                exps.resize(index, 0);
            }
            exps[index - 1] += power;
        } else {
            coeff *= parse_rational(factor)?;
        }
    }
    if negative {
        coeff = -coeff;
    }
    Ok((Monomial::new(exps), field.from_rational(&coeff)?))
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Malformed(format!("bad coefficient `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    if num.is_empty()
        || !num.bytes().all(|b| b.is_ascii_digit())
        || !den.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Writes one signed coefficient-monomial term.
pub(crate) fn write_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &Scalar,
    m: &Monomial,
) -> fmt::Result {
    let (negative, mag) = if c.is_negative() {
        (true, c.neg())
    } else {
        (false, c.clone())
    };
    match (first, negative) {
        (true, true) => f.write_str("-")?,
        (true, false) => {}
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
    }
    if m.is_one() {
        write!(f, "{mag}")
    } else if mag.is_one() {
        write!(f, "{m}")
    } else {
        write!(f, "{mag}*{m}")
    }
}

impl fmt::Display for Polynomial {
    /// Terms from largest to smallest in grevlex.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self
            .sorted_terms(MonomialOrder::Grevlex)
            .into_iter()
            .enumerate()
        {
            write_term(f, i == 0, c, m)?;
        }
        Ok(())
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(text: &str) -> Polynomial {
        Polynomial::parse(text, Field::Rationals).unwrap()
    }

    #[test]
    fn orders() {
        let a = Monomial::new(vec![1, 0, 2]);
        let b = Monomial::new(vec![0, 3]);
        assert_eq!(MonomialOrder::Lex.cmp(&a, &b), Ordering::Greater);
        // same degree; last differing exponent is x3: a has more, so a < b
        assert_eq!(MonomialOrder::Grevlex.cmp(&a, &b), Ordering::Less);
        let c = Monomial::new(vec![0, 0, 0, 1]);
        assert_eq!(MonomialOrder::Grevlex.cmp(&a, &c), Ordering::Greater);
        assert_eq!(
            MonomialOrder::Grevlex.cmp(&Monomial::var(0), &Monomial::var(1)),
            Ordering::Greater
        );
    }

    #[test]
    fn parse_and_print() {
        let p = q("3/2*x1^2*x3 - x2");
        assert_eq!(p.len(), 2);
        assert_eq!(p.to_string(), "3/2*x1^2*x3 - x2");
        assert_eq!(q("x1 - x1"), Polynomial::zero());
        assert_eq!(q("-1 + x2*x1").to_string(), "x1*x2 - 1");
        assert_eq!(
            q(&q("2*x3^2 - 1/3*x1 + 5").to_string()),
            q("2*x3^2 - 1/3*x1 + 5")
        );
        assert_eq!(q("0").to_string(), "0");
        for bad in ["", "x0", "x1^", "3/0", "2x1", "x1++x2"] {
            assert!(Polynomial::parse(bad, Field::Rationals).is_err(), "{bad}");
        }
        let f5 = Polynomial::parse("3*x1 - x2", Field::Prime(5)).unwrap();
        assert_eq!(f5.to_string(), "3*x1 + 4*x2");
    }

    #[test]
    fn arithmetic() {
        let p = q("x1 + x2");
        assert_eq!(p.mul(&p), q("x1^2 + 2*x1*x2 + x2^2"));
        assert_eq!(p.pow(3, Field::Rationals).degree(), 3);
        assert_eq!(q("x1^2*x2").substitute(&[2, 0]), q("x3^2*x1"));
        assert!(q("x1*x2 + x3^2").is_homogeneous());
        assert!(!q("x1 + 1").is_homogeneous());
    }

    #[test]
    fn monomial_division() {
        let a = Monomial::new(vec![1, 2]);
        let b = Monomial::new(vec![2, 2, 1]);
        assert!(a.divides(&b));
        assert_eq!(a.quotient(&b), Some(Monomial::new(vec![1, 0, 1])));
        assert_eq!(b.quotient(&a), None);
        assert_eq!(a.lcm(&Monomial::new(vec![0, 3])), Monomial::new(vec![1, 3]));
        assert_eq!(Monomial::all_of_degree(3, 2).len(), 6);
        assert_eq!(Monomial::all_of_degree(0, 0), vec![Monomial::one()]);
    }
}
