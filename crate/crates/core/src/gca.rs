//! Free graded-commutative algebra on finitely many named generators.
//!
//! Elements are finite rational linear combinations of canonical monomials.
//! Odd-degree generators are exterior (they square to zero), even-degree
//! generators are polynomial, and every product is normalized with the
//! Koszul rule: transposing adjacent factors x, y costs `(-1)^{|x||y|}`.
//! Monomials are stored as exponent vectors over the generators in a fixed
//! canonical order (degree, then name), so equality of polynomials is
//! syntactic and suitable for hashing and exact linear algebra.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::{Arc, RwLock};

use num::bigint::BigInt;
use num::{BigRational, One, Zero};
use thiserror::Error;

/// Exact rational scalar used throughout the crate.
pub type Q = BigRational;

/// Integer scalar `n`.
pub fn q_int(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// Fraction `n/d`.
pub fn q_ratio(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GcaError {
    #[error("generator `{name}` has degree {degree}; generators must have degree >= 1")]
    InvalidDegree { name: String, degree: usize },
    #[error("duplicate generator name `{name}`")]
    DuplicateName { name: String },
    #[error("operands live over different generator sets ({left} vs {right} generators)")]
    GeneratorSetMismatch { left: usize, right: usize },
    #[error("derivation value on `{generator}` is not homogeneous of degree {expected}")]
    InhomogeneousValue { generator: String, expected: i64 },
    #[error("no generator with index {index}")]
    UnknownGenerator { index: usize },
}

/// Where a generator comes from: the base algebra or the suspension copy of
/// a base generator (referenced by name).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Base,
    Barred(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: usize,
    pub origin: Origin,
}

impl Generator {
    pub fn base(name: impl Into<String>, degree: usize) -> Self {
        Generator {
            name: name.into(),
            degree,
            origin: Origin::Base,
        }
    }

    pub fn barred(name: impl Into<String>, degree: usize, of: impl Into<String>) -> Self {
        Generator {
            name: name.into(),
            degree,
            origin: Origin::Barred(of.into()),
        }
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }

    pub fn is_barred(&self) -> bool {
        matches!(self.origin, Origin::Barred(_))
    }
}

/// A monomial, stored as an exponent vector over the generators of one
/// algebra in canonical order. Odd-generator exponents are 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial {
            exps: vec![0; arity],
        }
    }

    pub fn generator(arity: usize, index: usize) -> Self {
        let mut exps = vec![0; arity];
        exps[index] = 1;
        Monomial { exps }
    }

    pub fn from_exps(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn arity(&self) -> usize {
        self.exps.len()
    }

    pub fn exp(&self, index: usize) -> u32 {
        self.exps[index]
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Word length: total number of generator letters.
    pub fn word_length(&self) -> u32 {
        self.exps.iter().sum()
    }
}

/// A polynomial: finite map from canonical monomials to nonzero rationals.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one(arity: usize) -> Self {
        Poly::from_mono(Monomial::one(arity), Q::one())
    }

    pub fn scalar(arity: usize, c: Q) -> Self {
        Poly::from_mono(Monomial::one(arity), c)
    }

    pub fn from_mono(m: Monomial, c: Q) -> Self {
        let mut p = Poly::zero();
        p.insert(m, c);
        p
    }

    pub fn generator(arity: usize, index: usize) -> Self {
        Poly::from_mono(Monomial::generator(arity, index), Q::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// Leading monomial in the canonical monomial order, if nonzero.
    pub fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next()
    }

    /// Adds `c * m`, dropping the entry if the sum cancels.
    pub fn insert(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn plus(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn minus(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.insert(m.clone(), -c.clone());
        }
        out
    }

    pub fn scaled(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.clone() * c))
                .collect(),
        }
    }

    pub fn negated(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), -a.clone()))
                .collect(),
        }
    }
}

/// The free graded-commutative algebra on a fixed generator list.
///
/// Construction sorts generators into the canonical (degree, name) order;
/// all monomials refer to that order by position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    gens: Vec<Generator>,
}

impl Algebra {
    pub fn new(mut gens: Vec<Generator>) -> Result<Self, GcaError> {
        for g in &gens {
            if g.degree == 0 {
                return Err(GcaError::InvalidDegree {
                    name: g.name.clone(),
                    degree: g.degree,
                });
            }
        }
        gens.sort_by(|a, b| (a.degree, a.name.as_str()).cmp(&(b.degree, b.name.as_str())));
        for pair in gens.windows(2) {
            if pair[0].name == pair[1].name {
                return Err(GcaError::DuplicateName {
                    name: pair[0].name.clone(),
                });
            }
        }
        Ok(Algebra { gens })
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator(&self, index: usize) -> &Generator {
        &self.gens[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn mono_degree(&self, m: &Monomial) -> usize {
        debug_assert_eq!(m.arity(), self.len());
        m.exps()
            .iter()
            .zip(&self.gens)
            .map(|(&e, g)| e as usize * g.degree)
            .sum()
    }

    /// Degree of a homogeneous polynomial. `None` for zero or mixed degrees.
    pub fn poly_degree(&self, p: &Poly) -> Option<usize> {
        let mut deg = None;
        for (m, _) in p.terms() {
            let d = self.mono_degree(m);
            match deg {
                None => deg = Some(d),
                Some(prev) if prev != d => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn is_homogeneous(&self, p: &Poly, degree: usize) -> bool {
        p.terms().all(|(m, _)| self.mono_degree(m) == degree)
    }

    /// Parity of the Koszul sign picked up when sorting the concatenation
    /// `a * b` into canonical order. Only odd-degree generators contribute.
    fn koszul_sign_negative(&self, a: &Monomial, b: &Monomial) -> bool {
        let mut swaps = 0u64;
        let mut b_odd_before = 0u64;
        for j in 0..self.len() {
            if self.gens[j].is_odd() {
                swaps += b_odd_before * a.exps[j] as u64;
                b_odd_before += b.exps[j] as u64;
            }
        }
        swaps % 2 == 1
    }

    /// Product of two monomials in canonical form. `None` when an odd
    /// generator would be squared. The boolean is true when the Koszul
    /// sign is negative.
    pub fn mul_mono(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, bool)> {
        debug_assert_eq!(a.arity(), self.len());
        debug_assert_eq!(b.arity(), self.len());
        let mut exps = Vec::with_capacity(self.len());
        for i in 0..self.len() {
            let e = a.exps[i] + b.exps[i];
            if e > 1 && self.gens[i].is_odd() {
                return None;
            }
            exps.push(e);
        }
        Some((Monomial { exps }, self.koszul_sign_negative(a, b)))
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.try_mul(a, b).expect("operands over one algebra")
    }

    pub fn try_mul(&self, a: &Poly, b: &Poly) -> Result<Poly, GcaError> {
        self.check_arity(a)?;
        self.check_arity(b)?;
        let mut out = Poly::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                if let Some((m, neg)) = self.mul_mono(ma, mb) {
                    let mut c = ca.clone() * cb;
                    if neg {
                        c = -c;
                    }
                    out.insert(m, c);
                }
            }
        }
        Ok(out)
    }

    pub fn check_arity(&self, p: &Poly) -> Result<(), GcaError> {
        for (m, _) in p.terms() {
            if m.arity() != self.len() {
                return Err(GcaError::GeneratorSetMismatch {
                    left: self.len(),
                    right: m.arity(),
                });
            }
        }
        Ok(())
    }

    /// All canonical monomials of the given total degree, in the canonical
    /// monomial order. Finite because every generator has degree >= 1.
    pub fn basis(&self, degree: usize) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.len()];
        self.enumerate(0, degree, &mut exps, &mut out);
        out.sort();
        out
    }

    fn enumerate(&self, i: usize, remaining: usize, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == self.len() {
            if remaining == 0 {
                out.push(Monomial { exps: exps.clone() });
            }
            return;
        }
        let g = &self.gens[i];
        let max = if g.is_odd() {
            (remaining / g.degree).min(1)
        } else {
            remaining / g.degree
        };
        for e in 0..=max {
            exps[i] = e as u32;
            self.enumerate(i + 1, remaining - e * g.degree, exps, out);
        }
        exps[i] = 0;
    }

    pub fn format_mono(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (i, &e) in m.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if e == 1 {
                parts.push(self.gens[i].name.clone());
            } else {
                parts.push(format!("{}^{}", self.gens[i].name, e));
            }
        }
        parts.join("*")
    }

    pub fn format_poly(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in p.terms().enumerate() {
            let neg = c < &Q::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let coeff_is_one = abs.is_one();
            if m.is_one() {
                let _ = write!(out, "{}", abs);
            } else if coeff_is_one {
                out.push_str(&self.format_mono(m));
            } else {
                let _ = write!(out, "{}*{}", abs, self.format_mono(m));
            }
        }
        out
    }
}

/// A graded derivation, determined by its values on generators and extended
/// to the whole algebra by the graded Leibniz rule
/// `th(xy) = th(x) y + (-1)^{shift * |x|} x th(y)`.
///
/// Extensions are computed on demand and memoized per monomial. The cache is
/// internally synchronized, so one derivation may be read from several
/// worker threads at once.
#[derive(Clone)]
pub struct Derivation {
    shift: i64,
    values: BTreeMap<usize, Poly>,
    cache: Arc<RwLock<HashMap<Monomial, Poly>>>,
}

impl std::fmt::Debug for Derivation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Derivation")
            .field("shift", &self.shift)
            .field("values", &self.values)
            .finish()
    }
}

impl PartialEq for Derivation {
    fn eq(&self, other: &Self) -> bool {
        self.shift == other.shift && self.values == other.values
    }
}

impl Derivation {
    /// Builds a derivation of the given degree shift from generator values.
    /// Every value must be homogeneous of degree `deg(g) + shift` (or zero).
    pub fn new(
        alg: &Algebra,
        shift: i64,
        values: BTreeMap<usize, Poly>,
    ) -> Result<Self, GcaError> {
        let mut kept = BTreeMap::new();
        for (index, poly) in values {
            if index >= alg.len() {
                return Err(GcaError::UnknownGenerator { index });
            }
            if poly.is_zero() {
                continue;
            }
            alg.check_arity(&poly)?;
            let expected = alg.generator(index).degree as i64 + shift;
            let ok = expected >= 0
                && poly
                    .terms()
                    .all(|(m, _)| alg.mono_degree(m) as i64 == expected);
            if !ok {
                return Err(GcaError::InhomogeneousValue {
                    generator: alg.generator(index).name.clone(),
                    expected,
                });
            }
            kept.insert(index, poly);
        }
        Ok(Derivation {
            shift,
            values: kept,
            cache: Arc::new(RwLock::new(HashMap::new())),
        })
    }

    pub fn zero(shift: i64) -> Self {
        Derivation {
            shift,
            values: BTreeMap::new(),
            cache: Arc::new(RwLock::new(HashMap::new())),
        }
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value_on(&self, index: usize) -> Poly {
        self.values.get(&index).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn values(&self) -> &BTreeMap<usize, Poly> {
        &self.values
    }
}

impl Algebra {
    /// Applies a derivation to a polynomial by the graded Leibniz rule.
    pub fn apply(&self, th: &Derivation, p: &Poly) -> Poly {
        self.try_apply(th, p).expect("operands over one algebra")
    }

    pub fn try_apply(&self, th: &Derivation, p: &Poly) -> Result<Poly, GcaError> {
        self.check_arity(p)?;
        let mut out = Poly::zero();
        for (m, c) in p.terms() {
            let image = self.apply_mono(th, m);
            for (im, ic) in image.terms() {
                out.insert(im.clone(), ic.clone() * c);
            }
        }
        Ok(out)
    }

    /// Leibniz expansion on a single canonical monomial, memoized.
    fn apply_mono(&self, th: &Derivation, m: &Monomial) -> Poly {
        if let Some(hit) = th.cache.read().unwrap().get(m) {
            return hit.clone();
        }
        let n = self.len();
        let mut acc = Poly::zero();
        let mut prefix_degree = 0usize;
        for i in 0..n {
            let e = m.exps[i];
            if e == 0 {
                continue;
            }
            if let Some(value) = th.values.get(&i) {
                // Coefficient e, with sign (-1)^{shift * deg(prefix)}.
                let mut c = q_int(e as i64);
                if th.shift % 2 != 0 && prefix_degree % 2 == 1 {
                    c = -c;
                }
                let mut left = vec![0u32; n];
                left[..i].copy_from_slice(&m.exps[..i]);
                left[i] = e - 1;
                let mut right = vec![0u32; n];
                right[i + 1..].copy_from_slice(&m.exps[i + 1..]);
                let term = self.mul(
                    &self.mul(&Poly::from_mono(Monomial::from_exps(left), c), value),
                    &Poly::from_mono(Monomial::from_exps(right), Q::one()),
                );
                acc = acc.plus(&term);
            }
            prefix_degree += e as usize * self.gens[i].degree;
        }
        th.cache.write().unwrap().insert(m.clone(), acc.clone());
        acc
    }

    /// Commutator of derivations,
    /// `[a, b] = a b - (-1)^{shift(a) shift(b)} b a`,
    /// recorded by its values on generators. The result has degree
    /// `shift(a) + shift(b)`.
    pub fn commutator(&self, a: &Derivation, b: &Derivation) -> Derivation {
        let negative = a.shift % 2 != 0 && b.shift % 2 != 0;
        let mut values = BTreeMap::new();
        for index in 0..self.len() {
            let ab = self.apply(a, &b.value_on(index));
            let ba = self.apply(b, &a.value_on(index));
            let v = if negative { ab.plus(&ba) } else { ab.minus(&ba) };
            if !v.is_zero() {
                values.insert(index, v);
            }
        }
        Derivation::new(self, a.shift + b.shift, values)
            .expect("commutator values are homogeneous")
    }

    /// Evaluates `[a, b]` on a single polynomial through the composite
    /// formula, without building the derivation. Used by consistency checks.
    pub fn commutator_on(&self, a: &Derivation, b: &Derivation, p: &Poly) -> Poly {
        let ab = self.apply(a, &self.apply(b, p));
        let ba = self.apply(b, &self.apply(a, p));
        if a.shift % 2 != 0 && b.shift % 2 != 0 {
            ab.plus(&ba)
        } else {
            ab.minus(&ba)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exterior_pair() -> Algebra {
        // Two odd generators of degree 1.
        Algebra::new(vec![Generator::base("a", 1), Generator::base("b", 1)]).unwrap()
    }

    /// The loop-model algebra of the 2-sphere: v(2), w(3), v_bar(1), w_bar(2).
    fn s2_loop_algebra() -> Algebra {
        Algebra::new(vec![
            Generator::base("v", 2),
            Generator::base("w", 3),
            Generator::barred("v_bar", 1, "v"),
            Generator::barred("w_bar", 2, "w"),
        ])
        .unwrap()
    }

    fn gen_poly(alg: &Algebra, name: &str) -> Poly {
        Poly::generator(alg.len(), alg.index_of(name).unwrap())
    }

    #[test]
    fn canonical_order_is_degree_then_name() {
        let alg = s2_loop_algebra();
        let names: Vec<&str> = alg.generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, vec!["v_bar", "v", "w_bar", "w"]);
    }

    #[test]
    fn odd_square_is_zero() {
        let alg = exterior_pair();
        let a = gen_poly(&alg, "a");
        assert!(alg.mul(&a, &a).is_zero());
    }

    #[test]
    fn odd_generators_anticommute() {
        let alg = exterior_pair();
        let a = gen_poly(&alg, "a");
        let b = gen_poly(&alg, "b");
        let ab = alg.mul(&a, &b);
        let ba = alg.mul(&b, &a);
        assert_eq!(ab, ba.negated());
        assert!(!ab.is_zero());
    }

    #[test]
    fn mixed_parity_product() {
        // (v + v_bar) * v_bar = v*v_bar since v_bar^2 = 0.
        let alg = s2_loop_algebra();
        let v = gen_poly(&alg, "v");
        let vbar = gen_poly(&alg, "v_bar");
        let got = alg.mul(&v.plus(&vbar), &vbar);
        assert_eq!(got, alg.mul(&v, &vbar));
        assert_eq!(alg.format_poly(&got), "v_bar*v");
    }

    #[test]
    fn graded_commutativity_exhaustive() {
        let alg = s2_loop_algebra();
        for p in 0..=6 {
            for q in 0..=6 {
                for x in alg.basis(p) {
                    for y in alg.basis(q) {
                        let px = Poly::from_mono(x.clone(), Q::one());
                        let py = Poly::from_mono(y.clone(), Q::one());
                        let xy = alg.mul(&px, &py);
                        let yx = alg.mul(&py, &px);
                        let expected = if p % 2 == 1 && q % 2 == 1 {
                            yx.negated()
                        } else {
                            yx
                        };
                        assert_eq!(xy, expected, "x={:?} y={:?}", x, y);
                    }
                }
            }
        }
    }

    fn s_derivation(alg: &Algebra) -> Derivation {
        // s(v) = v_bar, s(w) = w_bar, s kills barred generators.
        let mut values = BTreeMap::new();
        values.insert(alg.index_of("v").unwrap(), gen_poly(alg, "v_bar"));
        values.insert(alg.index_of("w").unwrap(), gen_poly(alg, "w_bar"));
        Derivation::new(alg, -1, values).unwrap()
    }

    #[test]
    fn suspension_on_square() {
        let alg = s2_loop_algebra();
        let s = s_derivation(&alg);
        let v = gen_poly(&alg, "v");
        let v2 = alg.mul(&v, &v);
        let got = alg.apply(&s, &v2);
        let expected = alg.mul(&v, &gen_poly(&alg, "v_bar")).scaled(&q_int(2));
        assert_eq!(got, expected);
    }

    #[test]
    fn suspension_kills_barred() {
        let alg = s2_loop_algebra();
        let s = s_derivation(&alg);
        assert!(alg.apply(&s, &gen_poly(&alg, "v_bar")).is_zero());
    }

    #[test]
    fn leibniz_on_product_of_generators() {
        // s(v*w) = v_bar*w + v*w_bar, expanded by hand.
        let alg = s2_loop_algebra();
        let s = s_derivation(&alg);
        let v = gen_poly(&alg, "v");
        let w = gen_poly(&alg, "w");
        let got = alg.apply(&s, &alg.mul(&v, &w));
        let expected = alg
            .mul(&gen_poly(&alg, "v_bar"), &w)
            .plus(&alg.mul(&v, &gen_poly(&alg, "w_bar")));
        assert_eq!(got, expected);
    }

    #[test]
    fn leibniz_rule_exhaustive() {
        let alg = s2_loop_algebra();
        let s = s_derivation(&alg);
        for p in 0..=5 {
            for q in 0..=5 {
                for x in alg.basis(p) {
                    for y in alg.basis(q) {
                        let px = Poly::from_mono(x.clone(), Q::one());
                        let py = Poly::from_mono(y.clone(), Q::one());
                        let lhs = alg.apply(&s, &alg.mul(&px, &py));
                        // shift(s) = -1 is odd, so the sign is (-1)^{|x|}.
                        let mut rhs = alg.mul(&alg.apply(&s, &px), &py);
                        let tail = alg.mul(&px, &alg.apply(&s, &py));
                        rhs = if p % 2 == 1 {
                            rhs.minus(&tail)
                        } else {
                            rhs.plus(&tail)
                        };
                        assert_eq!(lhs, rhs, "x={:?} y={:?}", x, y);
                    }
                }
            }
        }
    }

    #[test]
    fn commutator_matches_composite_formula() {
        let alg = s2_loop_algebra();
        let s = s_derivation(&alg);
        // d(w) = v^2, the 2-sphere differential, extended by zero.
        let mut values = BTreeMap::new();
        let v = gen_poly(&alg, "v");
        values.insert(alg.index_of("w").unwrap(), alg.mul(&v, &v));
        let d = Derivation::new(&alg, 1, values).unwrap();
        let c = alg.commutator(&d, &s);
        for p in 0..=7 {
            for m in alg.basis(p) {
                let pm = Poly::from_mono(m.clone(), Q::one());
                assert_eq!(
                    alg.apply(&c, &pm),
                    alg.commutator_on(&d, &s, &pm),
                    "monomial {:?}",
                    m
                );
            }
        }
    }

    #[test]
    fn commutator_of_odd_derivation_with_itself() {
        // th(x) = y, th(y) = x^2 with |x| = 2, |y| = 3; shift +1 is odd,
        // so [th, th] = 2 th(th(-)) on generators.
        let alg =
            Algebra::new(vec![Generator::base("x", 2), Generator::base("y", 3)]).unwrap();
        let x = gen_poly(&alg, "x");
        let y = gen_poly(&alg, "y");
        let mut values = BTreeMap::new();
        values.insert(alg.index_of("x").unwrap(), y.clone());
        values.insert(alg.index_of("y").unwrap(), alg.mul(&x, &x));
        let th = Derivation::new(&alg, 1, values).unwrap();
        let c = alg.commutator(&th, &th);
        let ix = alg.index_of("x").unwrap();
        assert_eq!(c.value_on(ix), alg.mul(&x, &x).scaled(&q_int(2)));
        assert_eq!(c.shift(), 2);
    }

    #[test]
    fn commutator_with_degree_scaling() {
        // E(g) = |g| g. [E, th](g) = shift(th) * th(g).
        let alg = s2_loop_algebra();
        let s = s_derivation(&alg);
        let mut values = BTreeMap::new();
        for i in 0..alg.len() {
            let deg = alg.generator(i).degree as i64;
            values.insert(i, Poly::generator(alg.len(), i).scaled(&q_int(deg)));
        }
        let euler = Derivation::new(&alg, 0, values).unwrap();
        let c = alg.commutator(&euler, &s);
        for i in 0..alg.len() {
            assert_eq!(c.value_on(i), s.value_on(i).scaled(&q_int(-1)));
        }
    }

    #[test]
    fn basis_enumeration_s2_loop_degree_three() {
        let alg = s2_loop_algebra();
        let basis = alg.basis(3);
        let rendered: Vec<String> = basis.iter().map(|m| alg.format_mono(m)).collect();
        assert_eq!(rendered, vec!["w", "v_bar*w_bar", "v_bar*v"]);
    }

    #[test]
    fn basis_degree_zero_is_unit() {
        let alg = s2_loop_algebra();
        assert_eq!(alg.basis(0), vec![Monomial::one(4)]);
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let alg = exterior_pair();
        let foreign = Poly::one(3);
        let err = alg.try_mul(&Poly::one(2), &foreign).unwrap_err();
        assert!(matches!(err, GcaError::GeneratorSetMismatch { .. }));
    }

    #[test]
    fn derivation_rejects_inhomogeneous_values() {
        let alg = s2_loop_algebra();
        let mut values = BTreeMap::new();
        // s must lower degree by one; v itself has the wrong degree.
        values.insert(alg.index_of("v").unwrap(), gen_poly(&alg, "v"));
        let err = Derivation::new(&alg, -1, values).unwrap_err();
        assert!(matches!(err, GcaError::InhomogeneousValue { .. }));
    }

    #[test]
    fn concurrent_reads_of_one_derivation() {
        use std::thread;
        let alg = s2_loop_algebra();
        let s = s_derivation(&alg);
        let basis = alg.basis(6);
        let expected: Vec<Poly> = basis
            .iter()
            .map(|m| alg.apply(&s, &Poly::from_mono(m.clone(), Q::one())))
            .collect();
        thread::scope(|scope| {
            for _ in 0..4 {
                scope.spawn(|| {
                    for (m, want) in basis.iter().zip(&expected) {
                        let got = alg.apply(&s, &Poly::from_mono(m.clone(), Q::one()));
                        assert_eq!(&got, want);
                    }
                });
            }
        });
    }
}
