//! Built-in Sullivan models and derivation cocycles.
//!
//! Spheres and complex projective spaces at desk scale. Each model is small
//! enough that every table in the crate finishes in seconds with exact
//! arithmetic.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::cartan::{make_cocycle, CartanError, DerivationCocycle};
use crate::cdga::{CdgaError, SullivanModel};
use crate::gca::{Algebra, Derivation, Generator, Poly};
use crate::loopmodel::{LoopError, LoopModel};

pub const MODEL_NAMES: &[&str] = &["s2", "s3", "s5", "s7", "cp2", "cp3"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuiltinError {
    #[error("unknown builtin model `{0}`")]
    UnknownModel(String),
    #[error("unknown cocycle `{label}` for model `{model}`")]
    UnknownCocycle { model: String, label: String },
    #[error(transparent)]
    Cdga(#[from] CdgaError),
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
}

/// A sphere model: one generator for odd n, the usual two-generator model
/// for even n; projective spaces carry the truncated polynomial relation.
pub fn sullivan_model(name: &str, max_degree: usize) -> Result<SullivanModel, BuiltinError> {
    match name {
        "s3" | "s5" | "s7" => {
            let n = match name {
                "s3" => 3,
                "s5" => 5,
                _ => 7,
            };
            let algebra =
                Algebra::new(vec![Generator::base("v", n)]).map_err(CdgaError::from)?;
            Ok(SullivanModel::new(
                algebra,
                Derivation::zero(1),
                n,
                max_degree,
            )?)
        }
        "s2" => two_generator_model(2, 3, 2, 2, max_degree),
        "cp2" => two_generator_model(2, 5, 3, 4, max_degree),
        "cp3" => two_generator_model(2, 7, 4, 6, max_degree),
        other => Err(BuiltinError::UnknownModel(other.to_string())),
    }
}

/// `/\(v, w)` with `d w = v^power` and the given formal dimension.
fn two_generator_model(
    v_degree: usize,
    w_degree: usize,
    power: u32,
    formal_dim: usize,
    max_degree: usize,
) -> Result<SullivanModel, BuiltinError> {
    let algebra = Algebra::new(vec![
        Generator::base("v", v_degree),
        Generator::base("w", w_degree),
    ])
    .map_err(CdgaError::from)?;
    let v = Poly::generator(2, algebra.index_of("v").unwrap());
    let mut vpow = Poly::one(2);
    for _ in 0..power {
        vpow = algebra.mul(&vpow, &v);
    }
    let mut values = BTreeMap::new();
    values.insert(algebra.index_of("w").unwrap(), vpow);
    let d = Derivation::new(&algebra, 1, values).map_err(CdgaError::from)?;
    Ok(SullivanModel::new(algebra, d, formal_dim, max_degree)?)
}

pub fn loop_model(name: &str, max_degree: usize) -> Result<LoopModel, BuiltinError> {
    Ok(LoopModel::build(
        sullivan_model(name, max_degree)?,
        max_degree,
    )?)
}

/// Labels of the cocycles shipped with each model.
pub fn cocycle_labels(model_name: &str) -> &'static [&'static str] {
    match model_name {
        "s3" => &["theta3"],
        "s2" => &["thetaW"],
        _ => &[],
    }
}

/// The built-in derivation cocycles: `theta3` on the 3-sphere sends v to 1
/// in degree -3; `thetaW` on the 2-sphere sends w to v in degree -1.
pub fn cocycle(
    model_name: &str,
    label: &str,
    model: &SullivanModel,
) -> Result<DerivationCocycle, BuiltinError> {
    match (model_name, label) {
        ("s3", "theta3") => {
            let mut values = BTreeMap::new();
            values.insert(
                model.algebra.index_of("v").expect("s3 generator"),
                Poly::one(model.algebra.len()),
            );
            Ok(make_cocycle(model, values, 3)?)
        }
        ("s2", "thetaW") => {
            let mut values = BTreeMap::new();
            values.insert(
                model.algebra.index_of("w").expect("s2 generator"),
                Poly::generator(
                    model.algebra.len(),
                    model.algebra.index_of("v").expect("s2 generator"),
                ),
            );
            Ok(make_cocycle(model, values, 1)?)
        }
        _ => Err(BuiltinError::UnknownCocycle {
            model: model_name.to_string(),
            label: label.to_string(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_builtin_models_build() {
        for name in MODEL_NAMES {
            let model = sullivan_model(name, 13).unwrap();
            assert!(model.validation().minimal, "{}", name);
        }
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert!(matches!(
            sullivan_model("k3", 10),
            Err(BuiltinError::UnknownModel(_))
        ));
        let s3 = sullivan_model("s3", 10).unwrap();
        assert!(matches!(
            cocycle("s3", "nope", &s3),
            Err(BuiltinError::UnknownCocycle { .. })
        ));
    }

    #[test]
    fn builtin_cocycles_certify() {
        let s3 = sullivan_model("s3", 13).unwrap();
        let c = cocycle("s3", "theta3", &s3).unwrap();
        assert_eq!(c.n, 3);
        let s2 = sullivan_model("s2", 13).unwrap();
        let c = cocycle("s2", "thetaW", &s2).unwrap();
        assert_eq!(c.n, 1);
    }
}
