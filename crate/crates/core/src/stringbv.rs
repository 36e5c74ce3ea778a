//! Finite presentations of loop-homology BV algebras.
//!
//! A [`BvAlgebra`] is a finite graded basis inside a degree window together
//! with structure constants for the loop product, a matrix for the BV
//! operator, a unit, and optional Hodge weights. The derived bracket
//!
//! `{a, b} = (-1)^{|a|} delta(a * b) - (-1)^{|a|} delta(a) * b - a * delta(b)`
//!
//! and the axiom suite (commutativity, associativity, unit, `delta^2 = 0`,
//! the Poisson identity, antisymmetry, Jacobi, and the weight behaviour)
//! are checked exhaustively over all basis tuples whose intermediates stay
//! inside the window. Knowledge is explicit: a product absent from the
//! table is unknown, and any operation that would need it reports a window
//! error instead of truncating.
//!
//! The built-in presentations for spheres are the classical loop-homology
//! algebras: an exterior class `b` and a polynomial class `x` for odd
//! spheres, and the three-generator truncated algebra for the 2-sphere.
//! They are validated by the axiom suite and, additively, by comparing
//! weight tables against the loop model.

use std::collections::BTreeMap;

use num::{One, Zero};
use thiserror::Error;

use crate::check::Check;
use crate::gca::{q_int, Q};
use crate::loopmodel::{HodgeTable, LoopModel};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BvError {
    #[error("product {left} * {right} (degree {degree}) leaves the window")]
    WindowExceeded {
        left: String,
        right: String,
        degree: i64,
    },
    #[error("delta of {element} is not recorded")]
    DeltaUnknown { element: String },
    #[error("unknown builtin presentation `{0}`")]
    UnknownBuiltin(String),
    #[error("element {element} carries no Hodge weight")]
    MissingWeights { element: String },
    #[error("structure constant for {left} * {right} is not homogeneous of degree {expected}")]
    InhomogeneousProduct {
        left: String,
        right: String,
        expected: i64,
    },
    #[error("delta entry for {element} is not homogeneous of degree {expected}")]
    InhomogeneousDelta { element: String, expected: i64 },
    #[error("unit must sit in degree 0, found {degree}")]
    BadUnit { degree: i64 },
    #[error("crosscheck needs degrees up to {needed} but the window ends at {available}")]
    CrosscheckRange { needed: i64, available: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BvElement {
    pub name: String,
    pub degree: i64,
    pub weight: Option<u32>,
}

/// Sparse coordinates over the basis.
pub type BvVec = BTreeMap<usize, Q>;

/// A homogeneous element: a degree and coordinates over the basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BvValue {
    pub degree: i64,
    pub coords: BvVec,
}

impl BvValue {
    pub fn zero(degree: i64) -> Self {
        BvValue {
            degree,
            coords: BvVec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn plus(&self, other: &BvValue) -> BvValue {
        debug_assert_eq!(self.degree, other.degree);
        let mut coords = self.coords.clone();
        for (i, c) in &other.coords {
            let sum = coords.get(i).cloned().unwrap_or_else(Q::zero) + c;
            if sum.is_zero() {
                coords.remove(i);
            } else {
                coords.insert(*i, sum);
            }
        }
        BvValue {
            degree: self.degree,
            coords,
        }
    }

    pub fn minus(&self, other: &BvValue) -> BvValue {
        self.plus(&other.scaled(&q_int(-1)))
    }

    pub fn scaled(&self, c: &Q) -> BvValue {
        if c.is_zero() {
            return BvValue::zero(self.degree);
        }
        BvValue {
            degree: self.degree,
            coords: self
                .coords
                .iter()
                .map(|(i, a)| (*i, a.clone() * c))
                .collect(),
        }
    }
}

/// A finite BV-algebra presentation inside a degree window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BvAlgebra {
    pub name: String,
    pub elements: Vec<BvElement>,
    pub unit: usize,
    pub window: (i64, i64),
    /// Known products. Absence means the product leaves the window.
    product: BTreeMap<(usize, usize), BvVec>,
    /// Known BV-operator values.
    delta: BTreeMap<usize, BvVec>,
}

impl BvAlgebra {
    pub fn new(
        name: String,
        elements: Vec<BvElement>,
        unit: usize,
        window: (i64, i64),
        product: BTreeMap<(usize, usize), BvVec>,
        delta: BTreeMap<usize, BvVec>,
    ) -> Result<Self, BvError> {
        if elements[unit].degree != 0 {
            return Err(BvError::BadUnit {
                degree: elements[unit].degree,
            });
        }
        for ((i, j), value) in &product {
            let expected = elements[*i].degree + elements[*j].degree;
            if value.keys().any(|t| elements[*t].degree != expected) {
                return Err(BvError::InhomogeneousProduct {
                    left: elements[*i].name.clone(),
                    right: elements[*j].name.clone(),
                    expected,
                });
            }
        }
        for (i, value) in &delta {
            let expected = elements[*i].degree + 1;
            if value.keys().any(|t| elements[*t].degree != expected) {
                return Err(BvError::InhomogeneousDelta {
                    element: elements[*i].name.clone(),
                    expected,
                });
            }
        }
        Ok(BvAlgebra {
            name,
            elements,
            unit,
            window,
            product,
            delta,
        })
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e.name == name)
    }

    pub fn element(&self, index: usize) -> BvValue {
        let mut coords = BvVec::new();
        coords.insert(index, Q::one());
        BvValue {
            degree: self.elements[index].degree,
            coords,
        }
    }

    pub fn unit_value(&self) -> BvValue {
        self.element(self.unit)
    }

    pub fn known_products(&self) -> impl Iterator<Item = (&(usize, usize), &BvVec)> {
        self.product.iter()
    }

    pub fn known_delta(&self) -> impl Iterator<Item = (&usize, &BvVec)> {
        self.delta.iter()
    }

    fn basis_product(&self, i: usize, j: usize) -> Result<&BvVec, BvError> {
        self.product
            .get(&(i, j))
            .ok_or_else(|| BvError::WindowExceeded {
                left: self.elements[i].name.clone(),
                right: self.elements[j].name.clone(),
                degree: self.elements[i].degree + self.elements[j].degree,
            })
    }

    /// The loop product, bilinear over the structure constants.
    pub fn mul(&self, a: &BvValue, b: &BvValue) -> Result<BvValue, BvError> {
        let mut out = BvValue::zero(a.degree + b.degree);
        for (i, ca) in &a.coords {
            for (j, cb) in &b.coords {
                let table = self.basis_product(*i, *j)?;
                for (t, c) in table {
                    let add = ca.clone() * cb * c;
                    let sum = out.coords.get(t).cloned().unwrap_or_else(Q::zero) + add;
                    if sum.is_zero() {
                        out.coords.remove(t);
                    } else {
                        out.coords.insert(*t, sum);
                    }
                }
            }
        }
        Ok(out)
    }

    /// The BV operator, linear over the recorded matrix.
    pub fn delta_of(&self, a: &BvValue) -> Result<BvValue, BvError> {
        let mut out = BvValue::zero(a.degree + 1);
        for (i, ca) in &a.coords {
            let row = self.delta.get(i).ok_or_else(|| BvError::DeltaUnknown {
                element: self.elements[*i].name.clone(),
            })?;
            for (t, c) in row {
                let add = ca.clone() * c;
                let sum = out.coords.get(t).cloned().unwrap_or_else(Q::zero) + add;
                if sum.is_zero() {
                    out.coords.remove(t);
                } else {
                    out.coords.insert(*t, sum);
                }
            }
        }
        Ok(out)
    }

    /// The derived loop bracket
    /// `{a, b} = (-1)^{|a|} d(a*b) - (-1)^{|a|} d(a)*b - a*d(b)`.
    pub fn bracket(&self, a: &BvValue, b: &BvValue) -> Result<BvValue, BvError> {
        let sign = if a.degree.rem_euclid(2) == 0 {
            q_int(1)
        } else {
            q_int(-1)
        };
        let first = self.delta_of(&self.mul(a, b)?)?.scaled(&sign);
        let second = self.mul(&self.delta_of(a)?, b)?.scaled(&sign);
        let third = self.mul(a, &self.delta_of(b)?)?;
        Ok(first.minus(&second).minus(&third))
    }

    /// Weight of a value when every nonzero component agrees; `None` for
    /// zero or mixed values, `Err` when weights are missing.
    pub fn weight_of(&self, a: &BvValue) -> Result<Option<u32>, BvError> {
        let mut seen = None;
        for i in a.coords.keys() {
            let w = self.elements[*i]
                .weight
                .ok_or_else(|| BvError::MissingWeights {
                    element: self.elements[*i].name.clone(),
                })?;
            match seen {
                None => seen = Some(w),
                Some(prev) if prev != w => return Ok(None),
                _ => {}
            }
        }
        Ok(seen)
    }

    pub fn format_value(&self, a: &BvValue) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (i, c)) in a.coords.iter().enumerate() {
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
            if abs.is_one() {
                out.push_str(&self.elements[*i].name);
            } else {
                out.push_str(&format!("{}*{}", abs, self.elements[*i].name));
            }
        }
        out
    }

    /// Structure constants of the derived bracket for every pair whose
    /// three-term formula stays inside the window.
    pub fn bracket_table(&self) -> BracketTable {
        let mut entries = BTreeMap::new();
        for i in 0..self.elements.len() {
            for j in 0..self.elements.len() {
                if let Ok(v) = self.bracket(&self.element(i), &self.element(j)) {
                    entries.insert((i, j), v.coords);
                }
            }
        }
        BracketTable { entries }
    }

    /// Returns a copy with one product structure constant bumped by 1.
    /// Used by mutation tests: the axiom suite must notice.
    pub fn mutated_product(&self, i: usize, j: usize, target: usize) -> BvAlgebra {
        let mut out = self.clone();
        let entry = out.product.entry((i, j)).or_default();
        let cur = entry.get(&target).cloned().unwrap_or_else(Q::zero) + Q::one();
        if cur.is_zero() {
            entry.remove(&target);
        } else {
            entry.insert(target, cur);
        }
        out
    }

    /// Returns a copy with one BV-operator entry bumped by 1.
    pub fn mutated_delta(&self, i: usize, target: usize) -> BvAlgebra {
        let mut out = self.clone();
        let entry = out.delta.entry(i).or_default();
        let cur = entry.get(&target).cloned().unwrap_or_else(Q::zero) + Q::one();
        if cur.is_zero() {
            entry.remove(&target);
        } else {
            entry.insert(target, cur);
        }
        out
    }

    /// The exhaustive axiom suite. Tuples whose intermediates leave the
    /// window are counted as skipped.
    pub fn check_axioms(&self) -> Vec<Check> {
        self.check_axioms_with(false)
    }

    /// Runs the axiom suite until the first failing family when
    /// `stop_early` is set. Mutation sweeps use this to stay fast; the
    /// report path always runs everything.
    pub fn check_axioms_with(&self, stop_early: bool) -> Vec<Check> {
        let n = self.elements.len();
        let parity = |d: i64| d.rem_euclid(2) == 1;
        let annotated = self.elements.iter().all(|e| e.weight.is_some());

        let mut out: Vec<Check> = Vec::new();
        let done = |out: &mut Vec<Check>, check: Check| -> bool {
            let failed = !check.passed();
            out.push(check);
            stop_early && failed
        };

        let mut unit = Check::new("unit_acts_as_identity");
        let e = self.unit_value();
        for i in 0..n {
            let a = self.element(i);
            match (self.mul(&e, &a), self.mul(&a, &e)) {
                (Ok(left), Ok(right)) => {
                    unit.record(left == a && right == a, || {
                        format!(
                            "unit * {} = {}, {} * unit = {}",
                            self.elements[i].name,
                            self.format_value(&left),
                            self.elements[i].name,
                            self.format_value(&right)
                        )
                    });
                }
                _ => unit.skip(),
            }
        }
        if done(&mut out, unit) {
            return out;
        }

        let mut commutativity = Check::new("graded_commutativity");
        for i in 0..n {
            for j in i..n {
                let ab = self.product.get(&(i, j));
                let ba = self.product.get(&(j, i));
                match (ab, ba) {
                    (Some(_), Some(_)) => {
                        let ab = self.mul(&self.element(i), &self.element(j)).unwrap();
                        let mut ba = self.mul(&self.element(j), &self.element(i)).unwrap();
                        if parity(self.elements[i].degree) && parity(self.elements[j].degree) {
                            ba = ba.scaled(&q_int(-1));
                        }
                        commutativity.record(ab == ba, || {
                            format!(
                                "{} * {} = {} but the sign-adjusted reverse is {}",
                                self.elements[i].name,
                                self.elements[j].name,
                                self.format_value(&ab),
                                self.format_value(&ba)
                            )
                        });
                    }
                    (None, None) => commutativity.skip(),
                    _ => commutativity.record(false, || {
                        format!(
                            "{} * {} is recorded in only one order",
                            self.elements[i].name, self.elements[j].name
                        )
                    }),
                }
            }
        }
        if done(&mut out, commutativity) {
            return out;
        }

        let mut delta_squared = Check::new("delta_squared_zero");
        for i in 0..n {
            match self
                .delta_of(&self.element(i))
                .and_then(|d| self.delta_of(&d))
            {
                Ok(dd) => delta_squared.record(dd.is_zero(), || {
                    format!(
                        "delta^2({}) = {}",
                        self.elements[i].name,
                        self.format_value(&dd)
                    )
                }),
                Err(_) => delta_squared.skip(),
            }
        }
        if done(&mut out, delta_squared) {
            return out;
        }

        let mut delta_weight = Check::new("delta_lowers_weight_by_one");
        let mut weight_bound = Check::new("product_weight_subadditive");
        if annotated {
            for i in 0..n {
                match self.delta_of(&self.element(i)) {
                    Ok(d) if d.is_zero() => delta_weight.record(true, String::new),
                    Ok(d) => {
                        let expected = self.elements[i].weight.unwrap().checked_sub(1);
                        let got = self.weight_of(&d).unwrap();
                        delta_weight.record(expected.is_some() && got == expected, || {
                            format!(
                                "delta({}) = {} has weight {:?}, expected {:?}",
                                self.elements[i].name,
                                self.format_value(&d),
                                got,
                                expected
                            )
                        });
                    }
                    Err(_) => delta_weight.skip(),
                }
            }
            for ((i, j), value) in &self.product {
                let bound = self.elements[*i].weight.unwrap() + self.elements[*j].weight.unwrap();
                let ok = value
                    .keys()
                    .all(|t| self.elements[*t].weight.unwrap() <= bound);
                weight_bound.record(ok, || {
                    format!(
                        "{} * {} has a component above weight {}",
                        self.elements[*i].name, self.elements[*j].name, bound
                    )
                });
            }
        }
        if done(&mut out, delta_weight) {
            return out;
        }
        if done(&mut out, weight_bound) {
            return out;
        }

        let mut associativity = Check::new("associativity");
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = self
                        .mul(&self.element(i), &self.element(j))
                        .and_then(|ij| self.mul(&ij, &self.element(k)));
                    let right = self
                        .mul(&self.element(j), &self.element(k))
                        .and_then(|jk| self.mul(&self.element(i), &jk));
                    match (left, right) {
                        (Ok(l), Ok(r)) => associativity.record(l == r, || {
                            format!(
                                "({} * {}) * {} = {} but {} * ({} * {}) = {}",
                                self.elements[i].name,
                                self.elements[j].name,
                                self.elements[k].name,
                                self.format_value(&l),
                                self.elements[i].name,
                                self.elements[j].name,
                                self.elements[k].name,
                                self.format_value(&r)
                            )
                        }),
                        _ => associativity.skip(),
                    }
                }
            }
        }
        if done(&mut out, associativity) {
            return out;
        }

        let mut poisson = Check::new("poisson_identity");
        for a in 0..n {
            for b1 in 0..n {
                for b2 in 0..n {
                    let outcome = (|| -> Result<(BvValue, BvValue), BvError> {
                        let prod = self.mul(&self.element(b1), &self.element(b2))?;
                        let lhs = self.bracket(&self.element(a), &prod)?;
                        let first =
                            self.mul(&self.bracket(&self.element(a), &self.element(b1))?, &self.element(b2))?;
                        let mut second = self
                            .mul(&self.element(b1), &self.bracket(&self.element(a), &self.element(b2))?)?;
                        let exponent =
                            self.elements[b1].degree * (self.elements[a].degree + 1);
                        if exponent.rem_euclid(2) == 1 {
                            second = second.scaled(&q_int(-1));
                        }
                        Ok((lhs, first.plus(&second)))
                    })();
                    match outcome {
                        Ok((lhs, rhs)) => poisson.record(lhs == rhs, || {
                            format!(
                                "{{{}, {} * {}}} = {} but the Leibniz expansion is {}",
                                self.elements[a].name,
                                self.elements[b1].name,
                                self.elements[b2].name,
                                self.format_value(&lhs),
                                self.format_value(&rhs)
                            )
                        }),
                        Err(_) => poisson.skip(),
                    }
                }
            }
        }
        if done(&mut out, poisson) {
            return out;
        }

        let mut antisymmetry = Check::new("bracket_antisymmetry");
        for i in 0..n {
            for j in 0..n {
                let outcome = (|| -> Result<(BvValue, BvValue), BvError> {
                    let ab = self.bracket(&self.element(i), &self.element(j))?;
                    let mut ba = self.bracket(&self.element(j), &self.element(i))?;
                    let exponent =
                        (self.elements[i].degree + 1) * (self.elements[j].degree + 1);
                    ba = if exponent.rem_euclid(2) == 1 {
                        ba
                    } else {
                        ba.scaled(&q_int(-1))
                    };
                    Ok((ab, ba))
                })();
                match outcome {
                    Ok((ab, expected)) => antisymmetry.record(ab == expected, || {
                        format!(
                            "{{{}, {}}} = {} violates antisymmetry",
                            self.elements[i].name,
                            self.elements[j].name,
                            self.format_value(&ab)
                        )
                    }),
                    Err(_) => antisymmetry.skip(),
                }
            }
        }
        if done(&mut out, antisymmetry) {
            return out;
        }

        let mut jacobi = Check::new("bracket_jacobi");
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let outcome = (|| -> Result<(BvValue, BvValue), BvError> {
                        let lhs = self
                            .bracket(&self.element(a), &self.bracket(&self.element(b), &self.element(c))?)?;
                        let first = self
                            .bracket(&self.bracket(&self.element(a), &self.element(b))?, &self.element(c))?;
                        let mut second = self
                            .bracket(&self.element(b), &self.bracket(&self.element(a), &self.element(c))?)?;
                        let exponent =
                            (self.elements[a].degree + 1) * (self.elements[b].degree + 1);
                        if exponent.rem_euclid(2) == 1 {
                            second = second.scaled(&q_int(-1));
                        }
                        Ok((lhs, first.plus(&second)))
                    })();
                    match outcome {
                        Ok((lhs, rhs)) => jacobi.record(lhs == rhs, || {
                            format!(
                                "Jacobi fails on ({}, {}, {})",
                                self.elements[a].name,
                                self.elements[b].name,
                                self.elements[c].name
                            )
                        }),
                        Err(_) => jacobi.skip(),
                    }
                }
            }
        }
        let _ = done(&mut out, jacobi);
        out
    }

    /// Candidates for loop-homology classes coming from the weight-one,
    /// closed part: the elements the theorems constrain.
    pub fn gamma_candidates(&self) -> Result<Vec<usize>, BvError> {
        let mut out = Vec::new();
        for i in 0..self.elements.len() {
            let w = self.elements[i]
                .weight
                .ok_or_else(|| BvError::MissingWeights {
                    element: self.elements[i].name.clone(),
                })?;
            if w != 1 {
                continue;
            }
            if let Ok(d) = self.delta_of(&self.element(i)) {
                if d.is_zero() {
                    out.push(i);
                }
            }
        }
        Ok(out)
    }

    /// Theorem-level checks: every weight-one closed element multiplies
    /// weight `i` into pure weight `i + 1` (or zero), and its bracket is a
    /// weight-preserving derivation over the product.
    pub fn theorem_checks(&self) -> Result<TheoremReport, BvError> {
        let candidates = self.gamma_candidates()?;
        let n = self.elements.len();
        let mut raises = Check::new("weight_one_closed_elements_raise_weight_by_one");
        let mut derivation = Check::new("bracket_with_candidates_is_a_derivation");
        let mut preserves = Check::new("bracket_with_candidates_preserves_weight");
        for &g in &candidates {
            let gamma = self.element(g);
            for a in 0..n {
                match self.mul(&gamma, &self.element(a)) {
                    Ok(p) if p.is_zero() => raises.record(true, String::new),
                    Ok(p) => {
                        let expected = Some(self.elements[a].weight.unwrap() + 1);
                        let got = self.weight_of(&p)?;
                        raises.record(got == expected, || {
                            format!(
                                "{} * {} = {} has weight {:?}, expected {:?}",
                                self.elements[g].name,
                                self.elements[a].name,
                                self.format_value(&p),
                                got,
                                expected
                            )
                        });
                    }
                    Err(_) => raises.skip(),
                }
                match self.bracket(&gamma, &self.element(a)) {
                    Ok(br) if br.is_zero() => preserves.record(true, String::new),
                    Ok(br) => {
                        let expected = Some(self.elements[a].weight.unwrap());
                        let got = self.weight_of(&br)?;
                        preserves.record(got == expected, || {
                            format!(
                                "{{{}, {}}} = {} has weight {:?}, expected {:?}",
                                self.elements[g].name,
                                self.elements[a].name,
                                self.format_value(&br),
                                got,
                                expected
                            )
                        });
                    }
                    Err(_) => preserves.skip(),
                }
            }
            for b1 in 0..n {
                for b2 in 0..n {
                    let outcome = (|| -> Result<(BvValue, BvValue), BvError> {
                        let prod = self.mul(&self.element(b1), &self.element(b2))?;
                        let lhs = self.bracket(&gamma, &prod)?;
                        let first =
                            self.mul(&self.bracket(&gamma, &self.element(b1))?, &self.element(b2))?;
                        let mut second =
                            self.mul(&self.element(b1), &self.bracket(&gamma, &self.element(b2))?)?;
                        let exponent =
                            self.elements[b1].degree * (self.elements[g].degree + 1);
                        if exponent.rem_euclid(2) == 1 {
                            second = second.scaled(&q_int(-1));
                        }
                        Ok((lhs, first.plus(&second)))
                    })();
                    match outcome {
                        Ok((lhs, rhs)) => derivation.record(lhs == rhs, || {
                            format!(
                                "derivation rule fails for {} on ({}, {})",
                                self.elements[g].name,
                                self.elements[b1].name,
                                self.elements[b2].name
                            )
                        }),
                        Err(_) => derivation.skip(),
                    }
                }
            }
        }
        Ok(TheoremReport {
            candidates: candidates
                .iter()
                .map(|&i| self.elements[i].name.clone())
                .collect(),
            checks: vec![raises, derivation, preserves],
        })
    }
}

/// Structure constants of the derived bracket over computable pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketTable {
    pub entries: BTreeMap<(usize, usize), BvVec>,
}

#[derive(Debug, Clone)]
pub struct TheoremReport {
    pub candidates: Vec<String>,
    pub checks: Vec<Check>,
}

/// The built-in loop-homology presentations for spheres, inside the window
/// `[-n, dmax]`.
pub fn builtin_bv(name: &str, dmax: i64) -> Result<BvAlgebra, BvError> {
    match name {
        "s3" => odd_sphere_bv(name, 3, dmax),
        "s5" => odd_sphere_bv(name, 5, dmax),
        "s7" => odd_sphere_bv(name, 7, dmax),
        "s2" => even_two_sphere_bv(dmax),
        other => Err(BvError::UnknownBuiltin(other.to_string())),
    }
}

/// Odd spheres: exterior `b` in degree `-n`, polynomial `x` in degree
/// `n - 1`, `delta(b x^j) = j x^{j-1}` and zero elsewhere. Both `x^j` and
/// `b x^j` carry weight `j`.
fn odd_sphere_bv(name: &str, n: i64, dmax: i64) -> Result<BvAlgebra, BvError> {
    let step = n - 1;
    let mut raw: Vec<(String, i64, u32, bool, u32)> = Vec::new();
    let mut j = 0i64;
    while j * step <= dmax {
        let name = match j {
            0 => "one".to_string(),
            1 => "x".to_string(),
            _ => format!("x{}", j),
        };
        raw.push((name, j * step, j as u32, false, j as u32));
        j += 1;
    }
    let mut j = 0i64;
    while -n + j * step <= dmax {
        let name = match j {
            0 => "b".to_string(),
            1 => "bx".to_string(),
            _ => format!("bx{}", j),
        };
        raw.push((name, -n + j * step, j as u32, true, j as u32));
        j += 1;
    }
    raw.sort_by(|a, b| (a.1, a.0.clone()).cmp(&(b.1, b.0.clone())));
    let elements: Vec<BvElement> = raw
        .iter()
        .map(|(name, degree, weight, _, _)| BvElement {
            name: name.clone(),
            degree: *degree,
            weight: Some(*weight),
        })
        .collect();
    let index = |with_b: bool, pow: u32| -> Option<usize> {
        raw.iter()
            .position(|(_, _, _, b, p)| *b == with_b && *p == pow)
    };
    let unit = index(false, 0).expect("unit present");

    let mut product = BTreeMap::new();
    for (i, (_, _, _, bi, pi)) in raw.iter().enumerate() {
        for (k, (_, _, _, bk, pk)) in raw.iter().enumerate() {
            let entry: Option<BvVec> = if *bi && *bk {
                Some(BvVec::new())
            } else {
                match index(*bi || *bk, pi + pk) {
                    Some(t) => {
                        let mut v = BvVec::new();
                        v.insert(t, Q::one());
                        Some(v)
                    }
                    None => None,
                }
            };
            if let Some(v) = entry {
                product.insert((i, k), v);
            }
        }
    }

    let mut delta = BTreeMap::new();
    for (i, (_, _, _, bi, pi)) in raw.iter().enumerate() {
        if *bi && *pi >= 1 {
            // The image may fall outside the window; leave delta unknown then.
            match index(false, pi - 1) {
                Some(t) => {
                    let mut v = BvVec::new();
                    v.insert(t, q_int(*pi as i64));
                    delta.insert(i, v);
                }
                None => {}
            }
        } else {
            delta.insert(i, BvVec::new());
        }
    }

    BvAlgebra::new(name.to_string(), elements, unit, (-n, dmax), product, delta)
}

/// The 2-sphere: the truncated algebra on `a` (degree -2), `b` (degree -1)
/// and `v` (degree 2) with `a^2 = ab = av = b^2 = 0`; `delta(b) = 1` and
/// `delta(b v^j) = (2j + 1) v^j`. Weights: `a` is 0, `v^j` is `j`,
/// `b v^j` is `j + 1`.
fn even_two_sphere_bv(dmax: i64) -> Result<BvAlgebra, BvError> {
    #[derive(PartialEq, Clone, Copy)]
    enum Kind {
        A,
        VPow(u32),
        BvPow(u32),
    }
    let mut raw: Vec<(String, i64, u32, Kind)> = vec![("a".to_string(), -2, 0, Kind::A)];
    let mut j = 0u32;
    while 2 * j as i64 <= dmax {
        let name = match j {
            0 => "one".to_string(),
            1 => "v".to_string(),
            _ => format!("v{}", j),
        };
        raw.push((name, 2 * j as i64, j, Kind::VPow(j)));
        j += 1;
    }
    let mut j = 0u32;
    while 2 * j as i64 - 1 <= dmax {
        let name = match j {
            0 => "b".to_string(),
            1 => "bv".to_string(),
            _ => format!("bv{}", j),
        };
        raw.push((name, 2 * j as i64 - 1, j + 1, Kind::BvPow(j)));
        j += 1;
    }
    raw.sort_by(|x, y| (x.1, x.0.clone()).cmp(&(y.1, y.0.clone())));
    let elements: Vec<BvElement> = raw
        .iter()
        .map(|(name, degree, weight, _)| BvElement {
            name: name.clone(),
            degree: *degree,
            weight: Some(*weight),
        })
        .collect();
    let find = |kind: Kind| raw.iter().position(|(_, _, _, k)| *k == kind);
    let unit = find(Kind::VPow(0)).expect("unit present");

    let single = |t: Option<usize>| -> Option<BvVec> {
        t.map(|t| {
            let mut v = BvVec::new();
            v.insert(t, Q::one());
            v
        })
    };
    let mut product = BTreeMap::new();
    for (i, (_, di, _, ki)) in raw.iter().enumerate() {
        for (k, (_, dk, _, kk)) in raw.iter().enumerate() {
            let entry: Option<BvVec> = match (*ki, *kk) {
                // a annihilates everything except the unit.
                (Kind::A, Kind::VPow(0)) | (Kind::VPow(0), Kind::A) => {
                    single(find(Kind::A))
                }
                (Kind::A, _) | (_, Kind::A) => Some(BvVec::new()),
                (Kind::BvPow(_), Kind::BvPow(_)) => Some(BvVec::new()),
                (Kind::VPow(p), Kind::VPow(q)) => {
                    if 2 * (p + q) as i64 <= dmax {
                        single(find(Kind::VPow(p + q)))
                    } else {
                        None
                    }
                }
                (Kind::VPow(p), Kind::BvPow(q)) | (Kind::BvPow(q), Kind::VPow(p)) => {
                    if 2 * (p + q) as i64 - 1 <= dmax {
                        single(find(Kind::BvPow(p + q)))
                    } else {
                        None
                    }
                }
            };
            if let Some(v) = entry {
                product.insert((i, k), v);
            }
            let _ = (di, dk);
        }
    }

    let mut delta = BTreeMap::new();
    for (i, (_, _, _, ki)) in raw.iter().enumerate() {
        if let Kind::BvPow(j) = ki {
            match find(Kind::VPow(*j)) {
                Some(t) => {
                    let mut v = BvVec::new();
                    v.insert(t, q_int(2 * *j as i64 + 1));
                    delta.insert(i, v);
                }
                None => {}
            }
        } else {
            delta.insert(i, BvVec::new());
        }
    }

    BvAlgebra::new("s2".to_string(), elements, unit, (-2, dmax), product, delta)
}

/// Additive cross-check: for every shifted degree `q` and weight `i`, the
/// number of basis elements at `(q, i)` must match the dimension of the
/// loop-model cohomology block in degree `q + m` and weight `i`, where `m`
/// is the formal dimension of the base.
pub fn crosscheck_additive(
    algebra: &BvAlgebra,
    lm: &LoopModel,
    table: &HodgeTable,
    pmax: usize,
) -> Result<CrosscheckReport, BvError> {
    let m = lm.base.formal_dim as i64;
    let qmax = pmax as i64 - m;
    if qmax > algebra.window.1 {
        return Err(BvError::CrosscheckRange {
            needed: qmax,
            available: algebra.window.1,
        });
    }
    for e in &algebra.elements {
        if e.weight.is_none() {
            return Err(BvError::MissingWeights {
                element: e.name.clone(),
            });
        }
    }
    let max_weight = algebra
        .elements
        .iter()
        .filter_map(|e| e.weight)
        .max()
        .unwrap_or(0)
        .max(table.max_weight());
    let mut check = Check::new("additive_crosscheck");
    let mut rows = Vec::new();
    for q in algebra.window.0..=qmax {
        for w in 0..=max_weight {
            let presentation_dim = algebra
                .elements
                .iter()
                .filter(|e| e.degree == q && e.weight == Some(w))
                .count();
            let model_dim = if q + m < 0 {
                0
            } else {
                table.dim((q + m) as usize, w)
            };
            if presentation_dim > 0 || model_dim > 0 {
                rows.push((q, w, presentation_dim, model_dim));
            }
            check.record(presentation_dim == model_dim, || {
                format!(
                    "degree {} weight {}: presentation has {} and the model has {}",
                    q, w, presentation_dim, model_dim
                )
            });
        }
    }
    Ok(CrosscheckReport { check, rows })
}

#[derive(Debug, Clone)]
pub struct CrosscheckReport {
    pub check: Check,
    /// `(degree, weight, presentation dim, model dim)` for occupied cells.
    pub rows: Vec<(i64, u32, usize, usize)>,
}
