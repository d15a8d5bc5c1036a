use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::field::Field;
use super::groebner::{groebner_basis, GroebnerBasis, ModuleElement};
use super::poly::{MonomialOrder, Polynomial};
use crate::categories::{
    compose, endomorphism_group, factorize, hom_set, is_morphism, CategoryKind, InjectionMorphism,
};
use crate::error::{malformed, Result};

/// An element of the free presheaf `P_n` evaluated at `[s]`: a combination
/// of morphisms `ε: [n] -> [s]` with coefficients in `k[x1, ..., xs]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresheafElement {
    kind: CategoryKind,
    n: usize,
    s: usize,
    field: Field,
    coeffs: BTreeMap<Vec<usize>, Polynomial>,
}

impl PresheafElement {
    pub fn zero(kind: CategoryKind, n: usize, s: usize, field: Field) -> Self {
        PresheafElement {
            kind,
            n,
            s,
            field,
            coeffs: BTreeMap::new(),
        }
    }

    /// `p · ε` for the morphism with the given (1-indexed) image.
    pub fn basis_multiple(
        kind: CategoryKind,
        n: usize,
        s: usize,
        image: Vec<usize>,
        p: Polynomial,
        field: Field,
    ) -> Result<Self> {
        let mut v = Self::zero(kind, n, s, field);
        v.add_term(image, p)?;
        Ok(v)
    }

    /// Adds `p · ε`, checking `ε` is a morphism and `p` lives in the width-s
    /// ring over the right field.
    pub fn add_term(&mut self, image: Vec<usize>, p: Polynomial) -> Result<()> {
        if !is_morphism(self.kind, self.n, self.s, &image)? {
            return malformed(format!(
                "{:?} is not a {} morphism {}->{}",
                image, self.kind, self.n, self.s
            ));
        }
        if p.num_vars() > self.s {
            return malformed(format!("coefficient {p} uses variables beyond x{}", self.s));
        }
        if let Some(f) = p.field() {
            if f != self.field {
                return malformed(format!("coefficient over {f}, element over {}", self.field));
            }
        }
        let sum = match self.coeffs.remove(&image) {
            Some(old) => old.add(&p),
            None => p,
        };
        if !sum.is_zero() {
            self.coeffs.insert(image, sum);
        }
        Ok(())
    }

    pub fn kind(&self) -> CategoryKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn width(&self) -> usize {
        self.s
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coefficients(&self) -> &BTreeMap<Vec<usize>, Polynomial> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.coeffs
            .values()
            .map(Polynomial::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.kind, self.n, self.s, self.field) != (other.kind, other.n, other.s, other.field) {
            return malformed("adding elements of different presheaf components");
        }
        let mut out = self.clone();
        for (img, p) in &other.coeffs {
            out.add_term(img.clone(), p.clone())?;
        }
        Ok(out)
    }

    /// `a · v` for `a` in the width-s ring.
    pub fn scale(&self, a: &Polynomial) -> Result<Self> {
        let mut out = Self::zero(self.kind, self.n, self.s, self.field);
        for (img, p) in &self.coeffs {
            out.add_term(img.clone(), p.mul(a))?;
        }
        Ok(out)
    }

    /// Coordinates in the free module on `basis` (sorted images).
    pub fn to_module(&self, basis: &[Vec<usize>]) -> ModuleElement {
        let mut out = ModuleElement::zero();
        for (img, p) in &self.coeffs {
            let pos = basis.binary_search(img).expect("image is a basis morphism");
            out = out.add(&ModuleElement::unit(pos, p));
        }
        out
    }
}

impl fmt::Display for PresheafElement {
    /// One `KIND n s : [image] : polynomial` line per basis morphism.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "{} {} {} : zero", self.kind, self.n, self.s);
        }
        for (i, (img, p)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let img: Vec<String> = img.iter().map(|x| x.to_string()).collect();
            write!(
                f,
                "{} {} {} : [{}] : {p}",
                self.kind,
                self.n,
                self.s,
                img.join(",")
            )?;
        }
        Ok(())
    }
}

/// `a ε ↦ π*(a) (π ∘ ε)`, where `π*` renames `x_i` to `x_{π(i)}`.
pub fn apply_morphism(v: &PresheafElement, pi: &InjectionMorphism) -> Result<PresheafElement> {
    if pi.kind() != v.kind || pi.source() != v.s {
        return malformed(format!(
            "cannot apply {pi} to an element of kind {} at width {}",
            v.kind, v.s
        ));
    }
    let rename: Vec<usize> = pi.image().iter().map(|y| y - 1).collect();
    let mut out = PresheafElement::zero(v.kind, v.n, pi.target(), v.field);
    for (img, p) in &v.coeffs {
        let eps = InjectionMorphism::new(v.kind, v.n, v.s, img.clone())?;
        let moved = compose(&eps, pi)?;
        out.add_term(moved.image().to_vec(), p.substitute(&rename))?;
    }
    Ok(out)
}

/// The width-s part of the subpresheaf generated by some elements of `P_n`.
#[derive(Debug, Clone, Serialize)]
pub struct TruncatedSubmodule {
    pub kind: CategoryKind,
    pub n: usize,
    pub width: usize,
    pub field: Option<Field>,
    /// Basis morphisms `[n] -> [s]` (images), in order of module position.
    pub basis: Vec<Vec<usize>>,
    #[serde(skip)]
    pub spanning: Vec<ModuleElement>,
    pub groebner: GroebnerBasis,
}

/// Collects every `apply_morphism(g, π)` with `π: [t] -> [s]` and computes
/// a Gröbner basis of their span. Generators wider than `s` contribute
/// nothing.
pub fn width_component(
    kind: CategoryKind,
    n: usize,
    generators: &[PresheafElement],
    s: usize,
    order: MonomialOrder,
    degree_cap: Option<u32>,
) -> Result<TruncatedSubmodule> {
    let field = generators.first().map(PresheafElement::field);
    for g in generators {
        if g.kind != kind || g.n != n {
            return malformed(format!(
                "generator in {} P_{} does not belong to {kind} P_{n}",
                g.kind, g.n
            ));
        }
        if Some(g.field) != field {
            return malformed("generators over different fields");
        }
    }
    let basis: Vec<Vec<usize>> = hom_set(kind, n, s)?
        .into_iter()
        .map(|m| m.image().to_vec())
        .collect();
    let mut spanning = Vec::new();
    for g in generators.iter().filter(|g| g.s <= s) {
        for pi in hom_set(kind, g.s, s)? {
            let moved = apply_morphism(g, &pi)?;
            if !moved.is_zero() {
                spanning.push(moved.to_module(&basis));
            }
        }
    }
    let groebner = groebner_basis(&spanning, basis.len(), order, degree_cap)?;
    Ok(TruncatedSubmodule {
        kind,
        n,
        width: s,
        field,
        basis,
        spanning,
        groebner,
    })
}

/// Whether `v` lies in the component, by normal form.
pub fn membership(v: &PresheafElement, m: &TruncatedSubmodule) -> Result<bool> {
    if v.kind != m.kind || v.n != m.n || v.s != m.width {
        return malformed(format!(
            "element of {} P_{} at width {} tested against {} P_{} at width {}",
            v.kind, v.n, v.s, m.kind, m.n, m.width
        ));
    }
    if m.field.is_some_and(|f| f != v.field) {
        return malformed("element and submodule over different fields");
    }
    Ok(m.groebner.contains(&v.to_module(&m.basis)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictionClass {
    /// The automorphism factor (1-indexed image).
    pub automorphism: Vec<usize>,
    pub size: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RestrictionReport {
    pub kind: CategoryKind,
    pub n: usize,
    pub s: usize,
    pub classes: Vec<RestrictionClass>,
    pub automorphisms: usize,
    pub increasing_maps: usize,
    /// Each class's increasing parts are exactly the OI maps `[n] -> [s]`.
    pub classes_match_increasing: bool,
    /// Post-composing with increasing maps `[s] -> [s+1]` keeps each class.
    pub stable_under_increasing: bool,
    pub holds: bool,
}

/// Splits `kind([n], [s])` by the automorphism factor of each morphism.
pub fn restriction_decomposition_check(
    kind: CategoryKind,
    n: usize,
    s: usize,
) -> Result<RestrictionReport> {
    if n > s {
        return malformed(format!("n = {n} exceeds s = {s}"));
    }
    let autos = endomorphism_group(kind, n)?;
    let increasing: Vec<Vec<usize>> = hom_set(CategoryKind::Oi, n, s)?
        .into_iter()
        .map(|m| m.image().to_vec())
        .collect();
    let mut classes: BTreeMap<Vec<usize>, Vec<Vec<usize>>> = BTreeMap::new();
    for f in hom_set(kind, n, s)? {
        let fac = factorize(&f)?;
        classes
            .entry(fac.automorphism.image().to_vec())
            .or_default()
            .push(fac.increasing.image().to_vec());
    }
    let classes_match_increasing = classes.values().all(|parts| {
        let mut parts = parts.clone();
        parts.sort();
        parts == increasing
    });
    let mut stable_under_increasing = true;
    for rho in hom_set(CategoryKind::Oi, s, s + 1)? {
        let rho = rho.with_kind(kind)?;
        for f in hom_set(kind, n, s)? {
            let before = factorize(&f)?.automorphism;
            let after = factorize(&compose(&f, &rho)?)?.automorphism;
            stable_under_increasing &= before == after;
        }
    }
    let classes: Vec<RestrictionClass> = classes
        .into_iter()
        .map(|(automorphism, parts)| RestrictionClass {
            automorphism,
            size: parts.len(),
        })
        .collect();
    let holds = classes.len() == autos.len() && classes_match_increasing && stable_under_increasing;
    Ok(RestrictionReport {
        kind,
        n,
        s,
        classes,
        automorphisms: autos.len(),
        increasing_maps: increasing.len(),
        classes_match_increasing,
        stable_under_increasing,
        holds,
    })
}
