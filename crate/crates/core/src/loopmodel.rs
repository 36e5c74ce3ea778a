//! The loop-space model of a simply-connected Sullivan model.
//!
//! Given a base model `(/\V, d)`, the loop model is the free algebra on V
//! together with a degree-shifted copy `V_bar` (one barred generator of
//! degree `|v| - 1` per base generator), carrying
//!
//! * the suspension `s`, the degree -1 derivation with `s(v) = v_bar` and
//!   `s(v_bar) = 0`;
//! * the differential `D`, the unique degree +1 extension of `d` with
//!   `D s + s D = 0`, so `D(v) = d(v)` and `D(v_bar) = -s(d v)`.
//!
//! Word length in the barred generators gives the Hodge weight. `D`
//! preserves weight, so every fixed-weight part is a subcomplex and
//! cohomology splits into `(degree, weight)` blocks. The power operation
//! that scales barred generators by `k` acts on a weight-`i` class by
//! `k^i`, which is how the blocks are cross-checked.

use std::collections::BTreeMap;

use num::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::cdga::linalg::QMatrix;
use crate::cdga::{
    cohomology_block, derivation_matrix, CdgaError, CohomologyBlock, SullivanModel,
};
use crate::check::Check;
use crate::gca::{q_int, Algebra, Derivation, GcaError, Generator, Monomial, Poly, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LoopError {
    #[error(transparent)]
    Cdga(#[from] CdgaError),
    #[error(transparent)]
    Algebra(#[from] GcaError),
    #[error("top cohomology in degree {degree} has dimension {dim}; expected 1")]
    TopClassNotUnique { degree: usize, dim: usize },
    #[error("power endomorphism requires k >= 2, got {k}")]
    InvalidK { k: u32 },
}

/// The loop model `(/\V (x) /\V_bar, D)` with its weight grading.
#[derive(Debug, Clone)]
pub struct LoopModel {
    pub base: SullivanModel,
    pub algebra: Algebra,
    /// Base generator index -> index in the loop algebra.
    base_to_loop: Vec<usize>,
    /// Loop index of the barred copy of each base generator.
    barred_of: Vec<usize>,
    pub s: Derivation,
    pub d: Derivation,
    pub max_degree: usize,
}

impl LoopModel {
    /// Builds the loop model and asserts the structural identities on all
    /// generators. A failure there is a construction defect and panics; it
    /// is never returned as a value.
    pub fn build(base: SullivanModel, max_degree: usize) -> Result<Self, LoopError> {
        let mut gens: Vec<Generator> = base.algebra.generators().to_vec();
        for g in base.algebra.generators() {
            gens.push(Generator::barred(
                format!("{}_bar", g.name),
                g.degree - 1,
                g.name.clone(),
            ));
        }
        let algebra = Algebra::new(gens)?;
        let n = algebra.len();
        let base_to_loop: Vec<usize> = base
            .algebra
            .generators()
            .iter()
            .map(|g| algebra.index_of(&g.name).expect("base generator present"))
            .collect();
        let barred_of: Vec<usize> = base
            .algebra
            .generators()
            .iter()
            .map(|g| {
                algebra
                    .index_of(&format!("{}_bar", g.name))
                    .expect("barred generator present")
            })
            .collect();

        let mut s_values = BTreeMap::new();
        for (bi, &li) in base_to_loop.iter().enumerate() {
            s_values.insert(li, Poly::generator(n, barred_of[bi]));
        }
        let s = Derivation::new(&algebra, -1, s_values)?;

        let include = |p: &Poly| include_poly(&base.algebra, &algebra, &base_to_loop, p);
        let mut d_values = BTreeMap::new();
        for (bi, &li) in base_to_loop.iter().enumerate() {
            let dv = include(&base.d.value_on(bi));
            if !dv.is_zero() {
                let minus_s_dv = algebra.apply(&s, &dv).negated();
                if !minus_s_dv.is_zero() {
                    d_values.insert(barred_of[bi], minus_s_dv);
                }
                d_values.insert(li, dv);
            }
        }
        let d = Derivation::new(&algebra, 1, d_values)?;

        let model = LoopModel {
            base,
            algebra,
            base_to_loop,
            barred_of,
            s,
            d,
            max_degree,
        };
        for index in 0..model.algebra.len() {
            let g = Poly::generator(model.algebra.len(), index);
            let dd = model.algebra.apply(&model.d, &model.algebra.apply(&model.d, &g));
            assert!(
                dd.is_zero(),
                "defect: D^2 on {} is {}",
                model.algebra.generator(index).name,
                model.algebra.format_poly(&dd)
            );
            let anti = model
                .algebra
                .apply(&model.d, &model.algebra.apply(&model.s, &g))
                .plus(&model.algebra.apply(&model.s, &model.algebra.apply(&model.d, &g)));
            assert!(
                anti.is_zero(),
                "defect: Ds + sD on {} is {}",
                model.algebra.generator(index).name,
                model.algebra.format_poly(&anti)
            );
        }
        Ok(model)
    }

    pub fn include_base(&self, p: &Poly) -> Poly {
        include_poly(&self.base.algebra, &self.algebra, &self.base_to_loop, p)
    }

    /// The retraction onto the base: barred generators go to zero.
    pub fn retract(&self, p: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in p.terms() {
            if self.weight(m) != 0 {
                continue;
            }
            let mut exps = vec![0u32; self.base.algebra.len()];
            for (bi, &li) in self.base_to_loop.iter().enumerate() {
                exps[bi] = m.exp(li);
            }
            out.insert(Monomial::from_exps(exps), c.clone());
        }
        out
    }

    pub fn loop_index_of_base(&self, base_index: usize) -> usize {
        self.base_to_loop[base_index]
    }

    pub fn barred_index_of_base(&self, base_index: usize) -> usize {
        self.barred_of[base_index]
    }

    /// Hodge weight: word length in the barred generators.
    pub fn weight(&self, m: &Monomial) -> u32 {
        m.exps()
            .iter()
            .zip(self.algebra.generators())
            .filter(|(_, g)| g.is_barred())
            .map(|(&e, _)| e)
            .sum()
    }

    /// Weight of a weight-homogeneous polynomial; `None` for zero or mixed.
    pub fn weight_of(&self, p: &Poly) -> Option<u32> {
        let mut seen = None;
        for (m, _) in p.terms() {
            let w = self.weight(m);
            match seen {
                None => seen = Some(w),
                Some(prev) if prev != w => return None,
                _ => {}
            }
        }
        seen
    }

    pub fn basis(&self, degree: usize) -> Result<Vec<Monomial>, LoopError> {
        if degree > self.max_degree {
            return Err(CdgaError::CutoffExceeded {
                requested: degree,
                cutoff: self.max_degree,
            }
            .into());
        }
        Ok(self.algebra.basis(degree))
    }

    fn basis_by_weight(&self, degree: usize) -> Result<BTreeMap<u32, Vec<Monomial>>, LoopError> {
        let mut out: BTreeMap<u32, Vec<Monomial>> = BTreeMap::new();
        for m in self.basis(degree)? {
            out.entry(self.weight(&m)).or_default().push(m);
        }
        Ok(out)
    }

    /// Structural checks: the generator identities and, per degree up to the
    /// cutoff minus one, weight preservation of `D` (the block-diagonal form
    /// of the differential) and the shifts of `s`.
    pub fn verify_invariants(&self) -> Result<Vec<Check>, LoopError> {
        let mut d_squared = Check::new("d_squared_zero_on_generators");
        let mut anti = Check::new("ds_plus_sd_zero_on_generators");
        for index in 0..self.algebra.len() {
            let g = Poly::generator(self.algebra.len(), index);
            let name = &self.algebra.generator(index).name;
            let dd = self.algebra.apply(&self.d, &self.algebra.apply(&self.d, &g));
            d_squared.record(dd.is_zero(), || {
                format!("D^2({}) = {}", name, self.algebra.format_poly(&dd))
            });
            let ds = self
                .algebra
                .apply(&self.d, &self.algebra.apply(&self.s, &g))
                .plus(&self.algebra.apply(&self.s, &self.algebra.apply(&self.d, &g)));
            anti.record(ds.is_zero(), || {
                format!("(Ds+sD)({}) = {}", name, self.algebra.format_poly(&ds))
            });
        }
        let mut blocks = Check::new("differential_is_weight_block_diagonal");
        let mut s_shift = Check::new("s_raises_weight_and_lowers_degree");
        for p in 0..self.max_degree {
            for m in self.basis(p)? {
                let w = self.weight(&m);
                let pm = Poly::from_mono(m.clone(), Q::one());
                let dm = self.algebra.apply(&self.d, &pm);
                let ok = dm.is_zero()
                    || (self.weight_of(&dm) == Some(w)
                        && self.algebra.is_homogeneous(&dm, p + 1));
                blocks.record(ok, || {
                    format!(
                        "D({}) = {} leaves the weight-{} block in degree {}",
                        self.algebra.format_mono(&m),
                        self.algebra.format_poly(&dm),
                        w,
                        p
                    )
                });
                let sm = self.algebra.apply(&self.s, &pm);
                let ok = sm.is_zero()
                    || (self.weight_of(&sm) == Some(w + 1)
                        && p >= 1
                        && self.algebra.is_homogeneous(&sm, p - 1));
                s_shift.record(ok, || {
                    format!(
                        "s({}) = {} is not pure (degree {}, weight {})",
                        self.algebra.format_mono(&m),
                        self.algebra.format_poly(&sm),
                        p.saturating_sub(1),
                        w + 1
                    )
                });
            }
        }
        Ok(vec![d_squared, anti, blocks, s_shift])
    }

    /// Cohomology of every `(degree, weight)` block with degree <= pmax.
    /// Blocks are independent subcomplexes and are computed in parallel.
    pub fn hodge_table(&self, pmax: usize) -> Result<HodgeTable, LoopError> {
        if pmax + 1 > self.max_degree {
            return Err(CdgaError::CutoffExceeded {
                requested: pmax + 1,
                cutoff: self.max_degree,
            }
            .into());
        }
        let mut by_degree: Vec<BTreeMap<u32, Vec<Monomial>>> = Vec::with_capacity(pmax + 2);
        for p in 0..=pmax + 1 {
            by_degree.push(self.basis_by_weight(p)?);
        }
        let empty: Vec<Monomial> = Vec::new();
        let mut keys: Vec<(usize, u32)> = Vec::new();
        for (p, groups) in by_degree.iter().enumerate().take(pmax + 1) {
            for &w in groups.keys() {
                keys.push((p, w));
            }
        }
        let blocks: Vec<((usize, u32), CohomologyBlock)> = keys
            .par_iter()
            .map(|&(p, w)| {
                let below = if p == 0 {
                    &empty
                } else {
                    by_degree[p - 1].get(&w).unwrap_or(&empty)
                };
                let current = by_degree[p].get(&w).unwrap_or(&empty);
                let above = by_degree[p + 1].get(&w).unwrap_or(&empty);
                let block = cohomology_block(
                    &self.algebra,
                    &self.d,
                    p,
                    Some(w),
                    below,
                    current,
                    above,
                );
                ((p, w), block)
            })
            .collect();
        Ok(HodgeTable {
            pmax,
            blocks: blocks.into_iter().collect(),
        })
    }

    /// Betti number of the total complex in degree `p`, computed from the
    /// unsplit differential matrices. Used to cross-check the weight split.
    pub fn betti_unsplit(&self, p: usize) -> Result<usize, LoopError> {
        if p + 1 > self.max_degree {
            return Err(CdgaError::CutoffExceeded {
                requested: p + 1,
                cutoff: self.max_degree,
            }
            .into());
        }
        let current = self.basis(p)?;
        let above = self.basis(p + 1)?;
        let m_p = derivation_matrix(&self.algebra, &self.d, &current, &above);
        let kernel = current.len() - m_p.rank();
        let boundary_rank = if p == 0 {
            0
        } else {
            let below = self.basis(p - 1)?;
            derivation_matrix(&self.algebra, &self.d, &below, &current).rank()
        };
        Ok(kernel - boundary_rank)
    }

    /// Verifies that scaling barred generators by `k` acts on every
    /// representative of weight `i` as multiplication by `k^i`, after
    /// reduction modulo coboundaries, and that the scaling commutes with
    /// the differential on generators.
    pub fn phi_k_check(
        &self,
        table: &HodgeTable,
        k: u32,
        pmax: usize,
    ) -> Result<Vec<Check>, LoopError> {
        if k < 2 {
            return Err(LoopError::InvalidK { k });
        }
        let phi = PowerEndomorphism { k };
        let mut commutes = Check::new(format!("phi_{}_commutes_with_differential", k));
        for index in 0..self.algebra.len() {
            let g = Poly::generator(self.algebra.len(), index);
            let lhs = phi.apply(self, &self.algebra.apply(&self.d, &g));
            let rhs = self.algebra.apply(&self.d, &phi.apply(self, &g));
            commutes.record(lhs == rhs, || {
                format!(
                    "on {}: {} vs {}",
                    self.algebra.generator(index).name,
                    self.algebra.format_poly(&lhs),
                    self.algebra.format_poly(&rhs)
                )
            });
        }
        let mut eigen = Check::new(format!("phi_{}_eigenvalue_is_k_pow_weight", k));
        for ((p, w), block) in table.blocks() {
            if *p > pmax {
                continue;
            }
            let expected_scale = q_int(k as i64).pow(*w as i32);
            for (j, rep) in block.reps.iter().enumerate() {
                let image = phi.apply(self, rep);
                let coords = block.reduce(&self.algebra, &image)?;
                let mut expected = vec![Q::zero(); block.dim()];
                expected[j] = expected_scale.clone();
                eigen.record(coords == expected, || {
                    format!(
                        "degree {} weight {} rep {}: got {:?}",
                        p,
                        w,
                        self.algebra.format_poly(rep),
                        coords.iter().map(|c| c.to_string()).collect::<Vec<_>>()
                    )
                });
            }
        }
        Ok(vec![commutes, eigen])
    }

    /// The operator induced on cohomology by the suspension `s`. It lowers
    /// degree by one and raises weight by one, and squares to zero.
    pub fn delta_dual(&self, table: &HodgeTable) -> Result<InducedOp, LoopError> {
        induced_operator(self, table, "s_induced", -1, 1, &|p| {
            self.algebra.apply(&self.s, p)
        })
    }

    /// Coordinates, in the dual basis of degree-`m` cohomology, of the image
    /// of the fundamental class under the retraction transposed. `m` is the
    /// formal dimension of the base, whose top cohomology must be a line.
    pub fn unit_homology_vector(&self, table: &HodgeTable) -> Result<HomologyVector, LoopError> {
        let m = self.base.formal_dim;
        if m > table.pmax {
            return Err(CdgaError::CutoffExceeded {
                requested: m,
                cutoff: table.pmax,
            }
            .into());
        }
        let base_table = self.base.cohomology_table(m)?;
        let top = base_table.block(m).filter(|b| b.dim() == 1).ok_or(
            LoopError::TopClassNotUnique {
                degree: m,
                dim: base_table.dim(m),
            },
        )?;
        let mut coords = BTreeMap::new();
        for ((p, w), block) in table.blocks() {
            if *p != m || block.dim() == 0 {
                continue;
            }
            let mut v = vec![Q::zero(); block.dim()];
            let mut nonzero = false;
            for (j, rep) in block.reps.iter().enumerate() {
                let down = self.retract(rep);
                let c = top.reduce(&self.base.algebra, &down)?;
                if !c[0].is_zero() {
                    v[j] = c[0].clone();
                    nonzero = true;
                }
            }
            if nonzero {
                coords.insert((*p, *w), v);
            }
        }
        let vector = HomologyVector { coords };
        assert!(
            !vector.is_zero(),
            "defect: retraction transpose sent the fundamental class to zero"
        );
        Ok(vector)
    }
}

fn include_poly(base: &Algebra, looped: &Algebra, base_to_loop: &[usize], p: &Poly) -> Poly {
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        let mut exps = vec![0u32; looped.len()];
        for (bi, &e) in m.exps().iter().enumerate() {
            exps[base_to_loop[bi]] = e;
        }
        let _ = base;
        out.insert(Monomial::from_exps(exps), c.clone());
    }
    out
}

/// The algebra endomorphism fixing base generators and scaling each barred
/// generator by `k`; it multiplies a weight-`i` monomial by `k^i`.
#[derive(Debug, Clone, Copy)]
pub struct PowerEndomorphism {
    pub k: u32,
}

impl PowerEndomorphism {
    pub fn apply(&self, lm: &LoopModel, p: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in p.terms() {
            let w = lm.weight(m);
            let scale = q_int(self.k as i64).pow(w as i32);
            out.insert(m.clone(), c.clone() * scale);
        }
        out
    }
}

/// Per-weight cohomology of the loop model.
#[derive(Debug, Clone)]
pub struct HodgeTable {
    pub pmax: usize,
    blocks: BTreeMap<(usize, u32), CohomologyBlock>,
}

impl HodgeTable {
    pub fn block(&self, degree: usize, weight: u32) -> Option<&CohomologyBlock> {
        self.blocks.get(&(degree, weight))
    }

    pub fn dim(&self, degree: usize, weight: u32) -> usize {
        self.block(degree, weight).map_or(0, |b| b.dim())
    }

    pub fn degree_dim(&self, degree: usize) -> usize {
        self.blocks
            .iter()
            .filter(|((p, _), _)| *p == degree)
            .map(|(_, b)| b.dim())
            .sum()
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&(usize, u32), &CohomologyBlock)> {
        self.blocks.iter()
    }

    pub fn max_weight(&self) -> u32 {
        self.blocks
            .iter()
            .filter(|(_, b)| b.dim() > 0)
            .map(|((_, w), _)| *w)
            .max()
            .unwrap_or(0)
    }

    /// Weight-0 column, for comparison against base cohomology.
    pub fn weight_zero_dims(&self, pmax: usize) -> Vec<usize> {
        (0..=pmax).map(|p| self.dim(p, 0)).collect()
    }
}

/// A graded operator on the block cohomology of a loop model: one exact
/// matrix per source block, mapping into the block shifted by
/// `(deg_shift, weight_shift)`. Missing blocks are zero.
#[derive(Debug, Clone)]
pub struct InducedOp {
    pub name: String,
    pub deg_shift: i64,
    pub weight_shift: i64,
    pub blocks: BTreeMap<(usize, u32), QMatrix>,
}

impl InducedOp {
    pub fn target_of(&self, key: (usize, u32)) -> Option<(usize, u32)> {
        let p = key.0 as i64 + self.deg_shift;
        let w = key.1 as i64 + self.weight_shift;
        if p < 0 || w < 0 {
            None
        } else {
            Some((p as usize, w as u32))
        }
    }

    pub fn block(&self, key: (usize, u32)) -> Option<&QMatrix> {
        self.blocks.get(&key)
    }

    /// Applies the operator to cohomology coordinates.
    pub fn apply_block(&self, key: (usize, u32), coords: &[Q], table: &HodgeTable) -> Vec<Q> {
        match self.blocks.get(&key) {
            Some(m) => m.mul_vec(coords),
            None => {
                let dim = self
                    .target_of(key)
                    .map_or(0, |(p, w)| table.dim(p, w));
                vec![Q::zero(); dim]
            }
        }
    }

    /// Transpose action on homology vectors:
    /// `out[src] = M_src^T * v[target(src)]`.
    pub fn transpose_apply(&self, v: &HomologyVector) -> HomologyVector {
        let mut coords = BTreeMap::new();
        for (key, matrix) in &self.blocks {
            let Some(target) = self.target_of(*key) else {
                continue;
            };
            let Some(tv) = v.coords.get(&target) else {
                continue;
            };
            let out = matrix.transpose().mul_vec(tv);
            if out.iter().any(|c| !c.is_zero()) {
                coords.insert(*key, out);
            }
        }
        HomologyVector { coords }
    }

    /// `self` composed after `inner` (apply `inner` first).
    pub fn compose_after(&self, inner: &InducedOp, table: &HodgeTable) -> InducedOp {
        let mut blocks = BTreeMap::new();
        for (key, first) in &inner.blocks {
            let Some(mid) = inner.target_of(*key) else {
                continue;
            };
            let outer = match self.blocks.get(&mid) {
                Some(m) => m.clone(),
                None => {
                    let rows = self
                        .target_of(mid)
                        .map_or(0, |(p, w)| table.dim(p, w));
                    QMatrix::zero(rows, table.dim(mid.0, mid.1))
                }
            };
            let product = outer.mul(first);
            if !product.is_zero() {
                blocks.insert(*key, product);
            }
        }
        InducedOp {
            name: format!("{} . {}", self.name, inner.name),
            deg_shift: self.deg_shift + inner.deg_shift,
            weight_shift: self.weight_shift + inner.weight_shift,
            blocks,
        }
    }

    pub fn scaled(&self, c: &Q) -> InducedOp {
        InducedOp {
            name: self.name.clone(),
            deg_shift: self.deg_shift,
            weight_shift: self.weight_shift,
            blocks: self
                .blocks
                .iter()
                .map(|(k, m)| (*k, m.scaled(c)))
                .filter(|(_, m)| !m.is_zero())
                .collect(),
        }
    }

    /// Blockwise equality, treating absent blocks as zero.
    pub fn equals(&self, other: &InducedOp) -> bool {
        if self.deg_shift != other.deg_shift || self.weight_shift != other.weight_shift {
            return false;
        }
        let keys: std::collections::BTreeSet<_> = self
            .blocks
            .keys()
            .chain(other.blocks.keys())
            .cloned()
            .collect();
        keys.into_iter().all(|k| {
            match (self.blocks.get(&k), other.blocks.get(&k)) {
                (Some(a), Some(b)) => a == b,
                (Some(a), None) => a.is_zero(),
                (None, Some(b)) => b.is_zero(),
                (None, None) => true,
            }
        })
    }
}

/// Builds the operator induced on block cohomology by a cochain map. Every
/// image is reduced in its target block; an image that cannot be reduced is
/// a chain-map defect and surfaces as an error.
pub fn induced_operator(
    lm: &LoopModel,
    table: &HodgeTable,
    name: &str,
    deg_shift: i64,
    weight_shift: i64,
    f: &dyn Fn(&Poly) -> Poly,
) -> Result<InducedOp, LoopError> {
    let mut blocks = BTreeMap::new();
    for (key, block) in table.blocks() {
        if block.dim() == 0 {
            continue;
        }
        let p = key.0 as i64 + deg_shift;
        let w = key.1 as i64 + weight_shift;
        let mut columns = Vec::with_capacity(block.dim());
        let mut rows = 0usize;
        for rep in &block.reps {
            let image = f(rep);
            if p < 0 || w < 0 {
                assert!(
                    image.is_zero(),
                    "defect: image of {} leaves the grading range",
                    lm.algebra.format_poly(rep)
                );
                columns.push(Vec::new());
                continue;
            }
            let target = table.block(p as usize, w as u32);
            match target {
                Some(t) => {
                    let coords = t.reduce(&lm.algebra, &image)?;
                    rows = t.dim();
                    columns.push(coords);
                }
                None => {
                    assert!(
                        image.is_zero(),
                        "defect: image of {} lands in an empty block",
                        lm.algebra.format_poly(rep)
                    );
                    columns.push(Vec::new());
                }
            }
        }
        if rows > 0 {
            let columns: Vec<Vec<Q>> = columns
                .into_iter()
                .map(|c| if c.is_empty() { vec![Q::zero(); rows] } else { c })
                .collect();
            let matrix = QMatrix::from_columns(rows, &columns);
            if !matrix.is_zero() {
                blocks.insert(*key, matrix);
            }
        }
    }
    Ok(InducedOp {
        name: name.to_string(),
        deg_shift,
        weight_shift,
        blocks,
    })
}

/// A homology vector in the dual of the block cohomology basis: one dense
/// coordinate vector per `(degree, weight)` block.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HomologyVector {
    pub coords: BTreeMap<(usize, u32), Vec<Q>>,
}

impl HomologyVector {
    pub fn is_zero(&self) -> bool {
        self.coords
            .values()
            .all(|v| v.iter().all(|c| c.is_zero()))
    }

    pub fn support(&self) -> Vec<(usize, u32)> {
        self.coords
            .iter()
            .filter(|(_, v)| v.iter().any(|c| !c.is_zero()))
            .map(|(k, _)| *k)
            .collect()
    }

    pub fn weights(&self) -> Vec<u32> {
        let mut ws: Vec<u32> = self.support().iter().map(|(_, w)| *w).collect();
        ws.dedup();
        ws
    }

    pub fn scaled(&self, c: &Q) -> HomologyVector {
        HomologyVector {
            coords: self
                .coords
                .iter()
                .map(|(k, v)| (*k, v.iter().map(|x| x.clone() * c).collect()))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    fn model(name: &str) -> LoopModel {
        builtins::loop_model(name, 13).unwrap()
    }

    #[test]
    fn sphere_differential_vanishes() {
        let lm = model("s3");
        assert!(lm.d.is_zero());
    }

    #[test]
    fn s2_forced_differential_values() {
        let lm = model("s2");
        let wbar = lm.algebra.index_of("w_bar").unwrap();
        let vbar = lm.algebra.index_of("v_bar").unwrap();
        assert!(lm.d.value_on(vbar).is_zero());
        let got = lm.d.value_on(wbar);
        assert_eq!(lm.algebra.format_poly(&got), "-2*v_bar*v");
    }

    #[test]
    fn cp2_forced_differential_values() {
        let lm = model("cp2");
        let wbar = lm.algebra.index_of("w_bar").unwrap();
        assert_eq!(
            lm.algebra.format_poly(&lm.d.value_on(wbar)),
            "-3*v_bar*v^2"
        );
    }

    #[test]
    fn invariants_hold_for_all_builtins() {
        for name in builtins::MODEL_NAMES {
            let lm = model(name);
            let checks = lm.verify_invariants().unwrap();
            for c in &checks {
                assert!(c.passed(), "{}: {:?}", name, c.failures);
                assert!(c.checked > 0);
            }
        }
    }

    #[test]
    fn hodge_table_of_odd_sphere() {
        let lm = model("s3");
        let table = lm.hodge_table(12).unwrap();
        for p in 0..=12usize {
            for w in 0..=12u32 {
                let expected = usize::from(
                    (p as u32 == 2 * w) || (p as u32 == 3 + 2 * w),
                );
                assert_eq!(table.dim(p, w), expected, "p={} w={}", p, w);
            }
        }
        // Representatives are powers of v_bar and v times powers of v_bar.
        let b = table.block(4, 2).unwrap();
        assert_eq!(lm.algebra.format_poly(&b.reps[0]), "v_bar^2");
        let b = table.block(5, 1).unwrap();
        assert_eq!(lm.algebra.format_poly(&b.reps[0]), "v_bar*v");
    }

    #[test]
    fn hodge_table_of_s2_low_degrees() {
        let lm = model("s2");
        let table = lm.hodge_table(12).unwrap();
        let expected: &[(usize, u32, &str)] = &[
            (0, 0, "1"),
            (1, 1, "v_bar"),
            (2, 0, "v"),
            (3, 2, "v_bar*w_bar"),
            (4, 1, "v*w_bar - 2*v_bar*w"),
            (5, 3, "v_bar*w_bar^2"),
        ];
        for (p, w, rep) in expected {
            assert_eq!(table.degree_dim(*p), 1, "degree {}", p);
            let block = table.block(*p, *w).unwrap();
            assert_eq!(block.dim(), 1, "block ({}, {})", p, w);
            assert_eq!(lm.algebra.format_poly(&block.reps[0]), *rep);
        }
    }

    #[test]
    fn weight_split_matches_unsplit_betti() {
        for name in builtins::MODEL_NAMES {
            let lm = model(name);
            let table = lm.hodge_table(10).unwrap();
            for p in 0..=10 {
                assert_eq!(
                    table.degree_dim(p),
                    lm.betti_unsplit(p).unwrap(),
                    "{} degree {}",
                    name,
                    p
                );
            }
        }
    }

    #[test]
    fn weight_zero_column_is_base_cohomology() {
        for name in builtins::MODEL_NAMES {
            let lm = model(name);
            let table = lm.hodge_table(12).unwrap();
            let base_table = lm.base.cohomology_table(12).unwrap();
            for p in 0..=12 {
                assert_eq!(table.dim(p, 0), base_table.dim(p), "{} degree {}", name, p);
            }
        }
    }

    #[test]
    fn power_endomorphism_eigenvalues() {
        let lm = model("s3");
        let table = lm.hodge_table(12).unwrap();
        for k in [2, 3] {
            let checks = lm.phi_k_check(&table, k, 12).unwrap();
            for c in checks {
                assert!(c.passed(), "k={}: {:?}", k, c.failures);
            }
        }
        assert!(matches!(
            lm.phi_k_check(&table, 1, 12),
            Err(LoopError::InvalidK { k: 1 })
        ));
    }

    #[test]
    fn phi_2_on_weight_two_class_of_s2() {
        let lm = model("s2");
        let table = lm.hodge_table(5).unwrap();
        let block = table.block(3, 2).unwrap();
        let phi = PowerEndomorphism { k: 2 };
        let image = phi.apply(&lm, &block.reps[0]);
        let coords = block.reduce(&lm.algebra, &image).unwrap();
        assert_eq!(coords, vec![q_int(4)]);
    }

    #[test]
    fn suspension_induced_operator() {
        let lm = model("s2");
        let table = lm.hodge_table(8).unwrap();
        let op = lm.delta_dual(&table).unwrap();
        // On the class of v_bar it vanishes; v goes to v_bar.
        assert!(op.block((1, 1)).is_none());
        let m = op.block((2, 0)).unwrap();
        assert_eq!(m.get(0, 0), q_int(1));
        // Squares to zero.
        let twice = op.compose_after(&op, &table);
        assert!(twice.blocks.is_empty());
    }

    #[test]
    fn suspension_squares_to_zero_on_odd_sphere_classes() {
        let lm = model("s3");
        let table = lm.hodge_table(12).unwrap();
        let op = lm.delta_dual(&table).unwrap();
        let twice = op.compose_after(&op, &table);
        assert!(twice.blocks.is_empty());
    }

    #[test]
    fn unit_vector_is_dual_to_top_base_class() {
        for (name, m) in [("s3", 3usize), ("s2", 2usize)] {
            let lm = model(name);
            let table = lm.hodge_table(6).unwrap();
            let unit = lm.unit_homology_vector(&table).unwrap();
            assert_eq!(unit.support(), vec![(m, 0)]);
            assert_eq!(unit.coords[&(m, 0)], vec![q_int(1)]);
        }
    }

    #[test]
    fn unit_vector_requires_one_dimensional_top() {
        // A polynomial algebra has H^3 = 0, so formal dimension 3 fails.
        let algebra = Algebra::new(vec![Generator::base("v", 2)]).unwrap();
        let base = SullivanModel::new(algebra, Derivation::zero(1), 3, 10).unwrap();
        let lm = LoopModel::build(base, 8).unwrap();
        let table = lm.hodge_table(6).unwrap();
        assert!(matches!(
            lm.unit_homology_vector(&table),
            Err(LoopError::TopClassNotUnique { degree: 3, dim: 0 })
        ));
    }
}
