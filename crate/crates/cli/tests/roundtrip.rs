//! Parser round trip on randomized well-formed presentations.

use std::collections::BTreeMap;

use proptest::prelude::*;

use loopcalc::gca::{q_int, Algebra, Generator, Poly};
use loopcalc_cli::parser::{parse, print, CocycleStanza, PresentationFile};

const NAMES: [&str; 3] = ["u", "v", "w"];

/// A random value built from the degree-`target` basis of the algebra.
fn poly_from_coeffs(alg: &Algebra, target: i64, coeffs: &[i64]) -> Poly {
    let mut out = Poly::zero();
    if target < 0 {
        return out;
    }
    for (m, c) in alg.basis(target as usize).into_iter().zip(coeffs) {
        if *c != 0 {
            out.insert(m, q_int(*c));
        }
    }
    out
}

fn arb_file() -> impl Strategy<Value = PresentationFile> {
    (1usize..=3, proptest::collection::vec(2usize..=5, 3))
        .prop_flat_map(|(count, degrees)| {
            let gens: Vec<Generator> = NAMES
                .iter()
                .take(count)
                .zip(&degrees)
                .map(|(name, degree)| Generator::base(*name, *degree))
                .collect();
            let alg = Algebra::new(gens).unwrap();
            // Enough coefficients for the largest basis that can appear.
            let max_len = (0..=6usize).map(|p| alg.basis(p).len()).max().unwrap_or(1);
            let coeffs = proptest::collection::vec(
                proptest::collection::vec(-3i64..=3, max_len),
                count,
            );
            let cocycle_coeffs = proptest::collection::vec(
                proptest::collection::vec(-2i64..=2, max_len),
                count,
            );
            (
                Just(alg),
                coeffs,
                proptest::option::of(0usize..=6),
                proptest::option::of(1usize..=2),
                cocycle_coeffs,
            )
        })
        .prop_map(|(alg, coeffs, dim, cocycle_n, cocycle_coeffs)| {
            let mut differentials = BTreeMap::new();
            for (index, row) in coeffs.iter().enumerate() {
                let target = alg.generator(index).degree as i64 + 1;
                let value = poly_from_coeffs(&alg, target, row);
                if !value.is_zero() {
                    differentials.insert(index, value);
                }
            }
            let mut cocycles = Vec::new();
            if let Some(n) = cocycle_n {
                let mut values = BTreeMap::new();
                for (index, row) in cocycle_coeffs.iter().enumerate() {
                    let target = alg.generator(index).degree as i64 - n as i64;
                    let value = poly_from_coeffs(&alg, target, row);
                    if !value.is_zero() {
                        values.insert(index, value);
                    }
                }
                if !values.is_empty() {
                    cocycles.push(CocycleStanza {
                        label: "th".to_string(),
                        n,
                        values,
                    });
                }
            }
            PresentationFile {
                algebra: alg,
                differentials,
                dim,
                cocycles,
                bv: None,
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parse_print_is_the_identity(file in arb_file()) {
        let text = print(&file);
        let reparsed = parse(&text).unwrap_or_else(|e| panic!("{}\n{}", e, text));
        prop_assert_eq!(file, reparsed);
    }
}
