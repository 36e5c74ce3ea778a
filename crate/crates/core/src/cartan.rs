//! Cartan calculus on the loop model.
//!
//! A derivation cocycle is a degree `-n` derivation `th` of the base model
//! that commutes with the differential. It induces two derivations of the
//! loop model:
//!
//! * the contraction `i(v) = 0`, `i(v_bar) = th(v)`, of degree `-(n-1)`,
//!   which lowers the Hodge weight by one;
//! * the Lie operator `L(v) = th(v)`, `L(v_bar) = (-1)^n s(th(v))`, of
//!   degree `-n`, which preserves the weight.
//!
//! The sign in `L` is pinned by requiring the Cartan formula
//! `L = (-1)^n [s, i]` to hold identically; the construction verifies it on
//! generators and panics otherwise, since a failure there means the sign
//! convention is wrong, not the input. Both operators are chain maps, so
//! they act on the block cohomology, where the same formula and the weight
//! shifts are re-checked exhaustively.

use std::collections::BTreeMap;

use num::One;
use thiserror::Error;

use crate::cdga::{CdgaError, SullivanModel};
use crate::check::Check;
use crate::gca::{q_int, Derivation, GcaError, Poly, Q};
use crate::loopmodel::{
    induced_operator, HodgeTable, HomologyVector, InducedOp, LoopError, LoopModel,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CartanError {
    #[error("not a cocycle: [d, th]({generator}) = {defect}")]
    NotACocycle { generator: String, defect: String },
    #[error("a derivation cocycle needs n >= 1, got {n}")]
    InvalidDegree { n: usize },
    #[error(transparent)]
    Algebra(#[from] GcaError),
    #[error(transparent)]
    Cdga(#[from] CdgaError),
    #[error(transparent)]
    Loop(#[from] LoopError),
}

/// A degree `-n` derivation of the base model with `[d, th] = 0`,
/// certified at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivationCocycle {
    pub theta: Derivation,
    pub n: usize,
}

/// Certifies `values` as a derivation cocycle of degree `-n`, or reports
/// the first generator with a nonzero defect.
pub fn make_cocycle(
    model: &SullivanModel,
    values: BTreeMap<usize, Poly>,
    n: usize,
) -> Result<DerivationCocycle, CartanError> {
    if n == 0 {
        return Err(CartanError::InvalidDegree { n });
    }
    let theta = Derivation::new(&model.algebra, -(n as i64), values)?;
    let defect = model.algebra.commutator(&model.d, &theta);
    for index in 0..model.algebra.len() {
        let value = defect.value_on(index);
        if !value.is_zero() {
            return Err(CartanError::NotACocycle {
                generator: model.algebra.generator(index).name.clone(),
                defect: model.algebra.format_poly(&value),
            });
        }
    }
    Ok(DerivationCocycle { theta, n })
}

/// The contraction and Lie operator attached to a cocycle, together with
/// their induced matrices on block cohomology.
#[derive(Debug, Clone)]
pub struct CartanOperators {
    pub n: usize,
    pub contraction: Derivation,
    pub lie: Derivation,
    pub contraction_induced: InducedOp,
    pub lie_induced: InducedOp,
}

/// Builds both operators on the loop model and verifies the structural
/// identities on generators before returning.
pub fn cartan_operators(
    lm: &LoopModel,
    table: &HodgeTable,
    cocycle: &DerivationCocycle,
) -> Result<CartanOperators, CartanError> {
    let n = cocycle.n;
    let arity = lm.algebra.len();
    let sigma = if n % 2 == 0 { q_int(1) } else { q_int(-1) };

    let mut i_values = BTreeMap::new();
    let mut l_values = BTreeMap::new();
    for base_index in 0..lm.base.algebra.len() {
        let value = lm.include_base(&cocycle.theta.value_on(base_index));
        if value.is_zero() {
            continue;
        }
        let barred = lm.barred_index_of_base(base_index);
        i_values.insert(barred, value.clone());
        l_values.insert(lm.loop_index_of_base(base_index), value.clone());
        let s_value = lm.algebra.apply(&lm.s, &value).scaled(&sigma);
        if !s_value.is_zero() {
            l_values.insert(barred, s_value);
        }
    }
    let contraction = Derivation::new(&lm.algebra, 1 - n as i64, i_values)?;
    let lie = Derivation::new(&lm.algebra, -(n as i64), l_values)?;

    // Generator-level verification. A failure is a wrong sign convention in
    // the construction itself, so it is fatal rather than reported.
    let bracket = lm.algebra.commutator(&lm.s, &contraction);
    for index in 0..arity {
        let lhs = lie.value_on(index);
        let rhs = bracket.value_on(index).scaled(&sigma);
        assert_eq!(
            lhs,
            rhs,
            "defect: Cartan formula fails on generator {}",
            lm.algebra.generator(index).name
        );
        for (label, op) in [("i", &contraction), ("L", &lie)] {
            let chain = lm.algebra.commutator(&lm.d, op);
            assert!(
                chain.value_on(index).is_zero(),
                "defect: [D, {}] is nonzero on {}",
                label,
                lm.algebra.generator(index).name
            );
        }
    }

    let contraction_induced = induced_operator(
        lm,
        table,
        "i_theta",
        1 - n as i64,
        -1,
        &|p| lm.algebra.apply(&contraction, p),
    )?;
    let lie_induced = induced_operator(lm, table, "L_theta", -(n as i64), 0, &|p| {
        lm.algebra.apply(&lie, p)
    })?;
    Ok(CartanOperators {
        n,
        contraction,
        lie,
        contraction_induced,
        lie_induced,
    })
}

/// Exhaustive verification of the Cartan formula: on every monomial of
/// degree at most `pmax`, and as an identity of induced matrices in both
/// composition orders.
pub fn cartan_formula_check(
    lm: &LoopModel,
    table: &HodgeTable,
    ops: &CartanOperators,
    pmax: usize,
) -> Result<Vec<Check>, CartanError> {
    let sigma = if ops.n % 2 == 0 { q_int(1) } else { q_int(-1) };
    let mut on_monomials = Check::new("cartan_formula_on_monomials");
    for p in 0..=pmax {
        for m in lm.basis(p)? {
            let pm = Poly::from_mono(m.clone(), Q::one());
            let lhs = lm.algebra.apply(&ops.lie, &pm);
            let rhs = lm
                .algebra
                .commutator_on(&lm.s, &ops.contraction, &pm)
                .scaled(&sigma);
            on_monomials.record(lhs == rhs, || {
                format!(
                    "on {}: L = {}, (-1)^n [s, i] = {}",
                    lm.algebra.format_mono(&m),
                    lm.algebra.format_poly(&lhs),
                    lm.algebra.format_poly(&rhs)
                )
            });
        }
    }

    let s_induced = lm.delta_dual(table)?;
    let s_after_i = s_induced.compose_after(&ops.contraction_induced, table);
    let i_after_s = ops.contraction_induced.compose_after(&s_induced, table);
    // (-1)^n [s, i] = (-1)^n s.i + i.s, and transposing the same identity
    // gives the homology-side form i.s + (-1)^n s.i, so one comparison in
    // each arrangement covers both readings.
    let mut on_cohomology = Check::new("cartan_formula_on_cohomology_matrices");
    let rhs = s_after_i.scaled(&sigma).plus(&i_after_s, table);
    on_cohomology.record(ops.lie_induced.equals(&rhs), || {
        "induced matrices of L and (-1)^n [s, i] differ".to_string()
    });
    let rhs_homology = i_after_s.plus(&s_after_i.scaled(&sigma), table);
    on_cohomology.record(ops.lie_induced.equals(&rhs_homology), || {
        "induced matrices differ in the transposed arrangement".to_string()
    });
    Ok(vec![on_monomials, on_cohomology])
}

/// Chain-map checks: both operators commute with the differential on every
/// monomial of degree at most `pmax` (in the graded sense).
pub fn chain_map_check(
    lm: &LoopModel,
    ops: &CartanOperators,
    pmax: usize,
) -> Result<Vec<Check>, CartanError> {
    let mut out = Vec::new();
    for (label, op) in [("i_theta", &ops.contraction), ("L_theta", &ops.lie)] {
        let mut check = Check::new(format!("{}_commutes_with_differential", label));
        for p in 0..=pmax {
            for m in lm.basis(p)? {
                let pm = Poly::from_mono(m.clone(), Q::one());
                let defect = lm.algebra.commutator_on(&lm.d, op, &pm);
                check.record(defect.is_zero(), || {
                    format!(
                        "[D, {}]({}) = {}",
                        label,
                        lm.algebra.format_mono(&m),
                        lm.algebra.format_poly(&defect)
                    )
                });
            }
        }
        out.push(check);
    }
    Ok(out)
}

/// Weight-shift checks: the contraction lowers weight by exactly one and
/// degree by `n - 1`; the Lie operator preserves weight and lowers degree
/// by `n`. Checked on every monomial and on the induced block structure.
pub fn weight_shift_check(
    lm: &LoopModel,
    ops: &CartanOperators,
    pmax: usize,
) -> Result<Vec<Check>, CartanError> {
    let n = ops.n as i64;
    let mut out = Vec::new();
    let specs: [(&str, &Derivation, i64, i64); 2] = [
        ("i_theta", &ops.contraction, -(n - 1), -1),
        ("L_theta", &ops.lie, -n, 0),
    ];
    for (label, op, deg_shift, weight_shift) in specs {
        let mut check = Check::new(format!("{}_shifts_degree_and_weight", label));
        for p in 0..=pmax {
            for m in lm.basis(p)? {
                let pm = Poly::from_mono(m.clone(), Q::one());
                let image = lm.algebra.apply(op, &pm);
                let ok = if image.is_zero() {
                    true
                } else {
                    let target_deg = p as i64 + deg_shift;
                    let target_w = lm.weight(&m) as i64 + weight_shift;
                    target_deg >= 0
                        && target_w >= 0
                        && lm.algebra.is_homogeneous(&image, target_deg as usize)
                        && lm.weight_of(&image) == Some(target_w as u32)
                };
                check.record(ok, || {
                    format!(
                        "{}({}) = {} is not pure",
                        label,
                        lm.algebra.format_mono(&m),
                        lm.algebra.format_poly(&image)
                    )
                });
            }
        }
        out.push(check);
    }
    let mut blocks = Check::new("induced_operators_have_declared_shifts");
    blocks.record(
        ops.contraction_induced.deg_shift == -(n - 1)
            && ops.contraction_induced.weight_shift == -1,
        || "contraction block shifts are wrong".to_string(),
    );
    blocks.record(
        ops.lie_induced.deg_shift == -n && ops.lie_induced.weight_shift == 0,
        || "Lie operator block shifts are wrong".to_string(),
    );
    out.push(blocks);
    Ok(out)
}

/// The class `(-1)^n (i_theta)^T (unit)` in the homology dual basis, the
/// loop-homology avatar of the cocycle. Its homological degree is
/// `m + n - 1` and it is supported in weight one.
pub fn gamma1_class(ops: &CartanOperators, unit: &HomologyVector) -> HomologyVector {
    let sign = if ops.n % 2 == 0 { q_int(1) } else { q_int(-1) };
    ops.contraction_induced.transpose_apply(unit).scaled(&sign)
}

/// Verifies that a class is supported purely in weight one and is killed by
/// the transpose of the suspension-induced operator. Zero classes pass
/// vacuously.
pub fn gamma1_property_check(class: &HomologyVector, delta_dual: &InducedOp) -> Vec<Check> {
    let mut weight_one = Check::new("gamma1_supported_in_weight_one");
    weight_one.record(class.weights().iter().all(|&w| w == 1), || {
        format!("class has support in weights {:?}", class.weights())
    });
    let mut killed = Check::new("gamma1_killed_by_delta_transpose");
    let image = delta_dual.transpose_apply(class);
    killed.record(image.is_zero(), || {
        format!("delta transpose of the class has support {:?}", image.support())
    });
    vec![weight_one, killed]
}

impl InducedOp {
    /// Blockwise sum; absent blocks are zero of the dimensions recorded in
    /// the table.
    pub fn plus(&self, other: &InducedOp, table: &HodgeTable) -> InducedOp {
        assert_eq!(self.deg_shift, other.deg_shift);
        assert_eq!(self.weight_shift, other.weight_shift);
        let keys: std::collections::BTreeSet<_> = self
            .blocks
            .keys()
            .chain(other.blocks.keys())
            .cloned()
            .collect();
        let mut blocks = BTreeMap::new();
        for key in keys {
            let dims = |op: &InducedOp| {
                op.target_of(key)
                    .map_or(0, |(p, w)| table.dim(p, w))
            };
            let zero = || {
                crate::cdga::linalg::QMatrix::zero(dims(self), table.dim(key.0, key.1))
            };
            let a = self.blocks.get(&key).cloned().unwrap_or_else(zero);
            let b = other.blocks.get(&key).cloned().unwrap_or_else(zero);
            let sum = a.plus(&b);
            if !sum.is_zero() {
                blocks.insert(key, sum);
            }
        }
        InducedOp {
            name: format!("{} + {}", self.name, other.name),
            deg_shift: self.deg_shift,
            weight_shift: self.weight_shift,
            blocks,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    fn setup(name: &str, label: &str) -> (LoopModel, HodgeTable, CartanOperators) {
        let lm = builtins::loop_model(name, 13).unwrap();
        let cocycle = builtins::cocycle(name, label, &lm.base).unwrap();
        let table = lm.hodge_table(12).unwrap();
        let ops = cartan_operators(&lm, &table, &cocycle).unwrap();
        (lm, table, ops)
    }

    #[test]
    fn sphere_cocycle_is_accepted() {
        let model = builtins::sullivan_model("s3", 13).unwrap();
        let mut values = BTreeMap::new();
        values.insert(model.algebra.index_of("v").unwrap(), Poly::one(1));
        assert!(make_cocycle(&model, values, 3).is_ok());
    }

    #[test]
    fn s2_degree_one_cocycle_is_accepted() {
        let model = builtins::sullivan_model("s2", 13).unwrap();
        let mut values = BTreeMap::new();
        values.insert(
            model.algebra.index_of("w").unwrap(),
            Poly::generator(2, model.algebra.index_of("v").unwrap()),
        );
        assert!(make_cocycle(&model, values, 1).is_ok());
    }

    #[test]
    fn non_cocycle_is_rejected_with_defect() {
        // th(v) = 1 in degree -2 on the 2-sphere model: the defect on w is
        // a multiple of v.
        let model = builtins::sullivan_model("s2", 13).unwrap();
        let mut values = BTreeMap::new();
        values.insert(model.algebra.index_of("v").unwrap(), Poly::one(2));
        let err = make_cocycle(&model, values, 2).unwrap_err();
        match err {
            CartanError::NotACocycle { generator, defect } => {
                assert_eq!(generator, "w");
                assert_eq!(defect, "-2*v");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn operator_values_on_s3() {
        let (lm, _table, ops) = setup("s3", "theta3");
        let vbar = lm.algebra.index_of("v_bar").unwrap();
        let v = lm.algebra.index_of("v").unwrap();
        assert_eq!(ops.contraction.value_on(vbar), Poly::one(2));
        assert!(ops.contraction.value_on(v).is_zero());
        assert_eq!(ops.lie.value_on(v), Poly::one(2));
        // s of a scalar vanishes.
        assert!(ops.lie.value_on(vbar).is_zero());
    }

    #[test]
    fn contraction_sends_class_v_vbar_to_class_v() {
        let (_lm, _table, ops) = setup("s3", "theta3");
        let block = ops.contraction_induced.block((5, 1)).unwrap();
        assert_eq!(block.get(0, 0), q_int(1));
    }

    #[test]
    fn cartan_formula_holds_for_s3() {
        let (lm, table, ops) = setup("s3", "theta3");
        for check in cartan_formula_check(&lm, &table, &ops, 12).unwrap() {
            assert!(check.passed(), "{}: {:?}", check.name, check.failures);
            assert!(check.checked > 0);
        }
    }

    #[test]
    fn cartan_formula_holds_for_s2() {
        let (lm, table, ops) = setup("s2", "thetaW");
        for check in cartan_formula_check(&lm, &table, &ops, 12).unwrap() {
            assert!(check.passed(), "{}: {:?}", check.name, check.failures);
        }
    }

    #[test]
    fn zero_cocycle_gives_zero_operators() {
        let lm = builtins::loop_model("s3", 13).unwrap();
        let table = lm.hodge_table(10).unwrap();
        let cocycle = make_cocycle(&lm.base, BTreeMap::new(), 2).unwrap();
        let ops = cartan_operators(&lm, &table, &cocycle).unwrap();
        assert!(ops.contraction.is_zero());
        assert!(ops.lie.is_zero());
        for check in cartan_formula_check(&lm, &table, &ops, 10).unwrap() {
            assert!(check.passed());
        }
        let unit = lm.unit_homology_vector(&table).unwrap();
        assert!(gamma1_class(&ops, &unit).is_zero());
    }

    #[test]
    fn chain_maps_and_weight_shifts() {
        for (name, label) in [("s3", "theta3"), ("s2", "thetaW")] {
            let (lm, _table, ops) = setup(name, label);
            for check in chain_map_check(&lm, &ops, 12).unwrap() {
                assert!(check.passed(), "{} {}: {:?}", name, check.name, check.failures);
            }
            for check in weight_shift_check(&lm, &ops, 12).unwrap() {
                assert!(check.passed(), "{} {}: {:?}", name, check.name, check.failures);
            }
        }
    }

    #[test]
    fn gamma1_class_of_s3_is_minus_dual_of_v_vbar() {
        let (lm, table, ops) = setup("s3", "theta3");
        let unit = lm.unit_homology_vector(&table).unwrap();
        let class = gamma1_class(&ops, &unit);
        assert_eq!(class.support(), vec![(5, 1)]);
        assert_eq!(class.coords[&(5, 1)], vec![q_int(-1)]);
        let delta = lm.delta_dual(&table).unwrap();
        for check in gamma1_property_check(&class, &delta) {
            assert!(check.passed(), "{}: {:?}", check.name, check.failures);
        }
    }

    #[test]
    fn gamma1_class_of_s2_thetaw_is_zero() {
        let (lm, table, ops) = setup("s2", "thetaW");
        let unit = lm.unit_homology_vector(&table).unwrap();
        let class = gamma1_class(&ops, &unit);
        assert!(class.is_zero());
        let delta = lm.delta_dual(&table).unwrap();
        for check in gamma1_property_check(&class, &delta) {
            assert!(check.passed());
        }
    }
}
