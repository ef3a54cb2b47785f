//! Koszul complexes over Z/p^r polynomial rings and the Ext algebras they
//! compute: the self-Ext exterior algebra with products as composed
//! contraction chain maps, Ext of coordinate quotient rings as a module over
//! it, the freeness and minimal-degree generation report for the quotient
//! pairing, and the group-ring comparison: Ext over
//! Z/p^n[x_1..x_R]/((1+x_i)^{p^N} - 1) against the polynomial side, with the
//! change-of-rings map on Ext^1 made explicit through the presentation of
//! I/I^2 in the group basis.

use crate::coeff::{AbelianLGroup, CoeffRing};
use crate::cohomology::chain::{check_exactness, shapes, Resolution};
use crate::cohomology::CohRing;
use crate::error::{Error, Result};
use crate::linalg::{Mat, SnfSolver};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The Koszul complex on `rank` variables over the coefficient ring: level i
/// is the free module on the i-element subsets of the variables, tensored
/// with the polynomial ring.
#[derive(Debug, Clone, PartialEq)]
pub struct KoszulComplex {
    pub ring: CoeffRing,
    pub rank: usize,
}

/// An element of one level of the complex: a finite sum of terms
/// (subset mask, monomial exponent) with coefficients in the base ring.
#[derive(Debug, Clone)]
pub struct KoszulElement {
    pub ring: CoeffRing,
    pub rank: usize,
    pub degree: usize,
    pub terms: BTreeMap<(u32, Vec<u32>), u64>,
}

impl PartialEq for KoszulElement {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring
            && self.rank == other.rank
            && self.terms == other.terms
            && (self.terms.is_empty() || self.degree == other.degree)
    }
}

impl KoszulElement {
    pub fn zero(ring: CoeffRing, rank: usize, degree: usize) -> Self {
        KoszulElement {
            ring,
            rank,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, mask: u32, exponent: Vec<u32>, coeff: i64) {
        let key = (mask, exponent);
        let value = self.ring.add(
            self.terms.get(&key).copied().unwrap_or(0),
            self.ring.from_i64(coeff),
        );
        if value == 0 {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, value);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        if out.terms.is_empty() {
            out.degree = other.degree;
        }
        for ((mask, exponent), &c) in &other.terms {
            out.add_term(*mask, exponent.clone(), c as i64);
        }
        out
    }

    pub fn scale(&self, c: u64) -> Self {
        let mut out = Self::zero(self.ring, self.rank, self.degree);
        for ((mask, exponent), &value) in &self.terms {
            let scaled = self.ring.mul(value, self.ring.reduce_u64(c));
            if scaled != 0 {
                out.terms.insert((*mask, exponent.clone()), scaled);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(self.ring.neg(1))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

fn mask_bits(mask: u32) -> Vec<usize> {
    (0..32).filter(|&j| mask >> j & 1 == 1).collect()
}

impl KoszulComplex {
    pub fn new(ring: CoeffRing, rank: usize) -> Result<Self> {
        if rank > 16 {
            return Err(Error::Unsupported(
                "Koszul complexes are limited to 16 variables".into(),
            ));
        }
        Ok(KoszulComplex { ring, rank })
    }

    /// Sorted subset masks of the given size, optionally confined to the
    /// variables of `within`.
    pub fn level_masks(&self, size: usize, within: u32) -> Vec<u32> {
        (0..1u32 << self.rank)
            .filter(|m| m.count_ones() as usize == size && m & !within == 0)
            .collect()
    }

    pub fn generator(&self, mask: u32) -> KoszulElement {
        let mut e = KoszulElement::zero(self.ring, self.rank, mask.count_ones() as usize);
        e.add_term(mask, vec![0; self.rank], 1);
        e
    }

    /// d(e_J) = sum over positions k of J of (-1)^k x_{j_k} e_{J - j_k}.
    pub fn differential(&self, e: &KoszulElement) -> KoszulElement {
        let mut out = KoszulElement::zero(self.ring, self.rank, e.degree.saturating_sub(1));
        for ((mask, exponent), &c) in &e.terms {
            for (k, j) in mask_bits(*mask).into_iter().enumerate() {
                let mut bumped = exponent.clone();
                bumped[j] += 1;
                let signed = if k % 2 == 0 { c as i64 } else { -(c as i64) };
                out.add_term(mask & !(1u32 << j), bumped, signed);
            }
        }
        out
    }

    /// Value of the augmentation on a degree-zero element.
    pub fn augment(&self, e: &KoszulElement) -> u64 {
        e.terms.get(&(0, vec![0; self.rank])).copied().unwrap_or(0)
    }

    /// The constant term of every differential coefficient is zero; the dual
    /// complex Hom(K, B) therefore has vanishing differentials and the Ext
    /// ranks are the level ranks. Returns the ranks after verifying this.
    fn dual_ranks(&self, within: u32, max_degree: usize) -> Result<Vec<u64>> {
        let d = within.count_ones() as u64;
        let mut ranks = Vec::new();
        for i in 0..=max_degree {
            for mask in self.level_masks(i, within) {
                let image = self.differential(&self.generator(mask));
                for (_, exponent) in image.terms.keys() {
                    if exponent.iter().all(|&e| e == 0) {
                        return Err(Error::BrokenSquare {
                            level: i as u32,
                            detail: "differential has a constant coefficient".into(),
                        });
                    }
                }
            }
            ranks.push(binomial(d, i as u64));
        }
        Ok(ranks)
    }
}

/// A chain map K -> K lowering the level by `shift`, with constant
/// coefficients: one matrix per source level, stored sparsely as
/// source mask -> target mask -> coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct KoszulChainMap {
    pub ring: CoeffRing,
    pub rank: usize,
    pub shift: usize,
    levels: Vec<BTreeMap<u32, BTreeMap<u32, u64>>>,
}

impl KoszulChainMap {
    pub fn identity(cx: &KoszulComplex) -> Self {
        let mut levels = vec![BTreeMap::new(); cx.rank + 1];
        for (i, level) in levels.iter_mut().enumerate() {
            for mask in cx.level_masks(i, u32::MAX) {
                level.insert(mask, BTreeMap::from([(mask, 1u64)]));
            }
        }
        KoszulChainMap {
            ring: cx.ring,
            rank: cx.rank,
            shift: 0,
            levels,
        }
    }

    /// The contraction by the dual basis vector of one variable, adjusted by
    /// a per-level sign so that it commutes with the differential on the
    /// nose and augments to the dual vector itself at the bottom level.
    pub fn contraction(cx: &KoszulComplex, variable: usize) -> Result<Self> {
        if variable >= cx.rank {
            return Err(Error::DimensionMismatch(format!(
                "variable {variable} out of range for rank {}",
                cx.rank
            )));
        }
        let mut levels = vec![BTreeMap::new(); cx.rank + 1];
        for i in 1..=cx.rank {
            let level_sign = i % 2 == 0;
            for mask in cx.level_masks(i, u32::MAX) {
                if mask >> variable & 1 == 0 {
                    continue;
                }
                let position = mask_bits(mask)
                    .into_iter()
                    .position(|j| j == variable)
                    .unwrap();
                let negative = level_sign != (position % 2 == 1);
                let value = if negative { cx.ring.neg(1) } else { 1 };
                levels[i].insert(mask, BTreeMap::from([(mask & !(1u32 << variable), value)]));
            }
        }
        Ok(KoszulChainMap {
            ring: cx.ring,
            rank: cx.rank,
            shift: 1,
            levels,
        })
    }

    /// self after other.
    pub fn compose(&self, other: &Self) -> Self {
        let mut levels = vec![BTreeMap::new(); self.rank + 1];
        for (i, level) in other.levels.iter().enumerate() {
            for (source, mids) in level {
                let mut row: BTreeMap<u32, u64> = BTreeMap::new();
                for (mid, &c1) in mids {
                    if let Some(targets) = i
                        .checked_sub(other.shift)
                        .and_then(|k| self.levels.get(k))
                        .and_then(|l| l.get(mid))
                    {
                        for (target, &c2) in targets {
                            let value = self
                                .ring
                                .add(row.get(target).copied().unwrap_or(0), self.ring.mul(c1, c2));
                            if value == 0 {
                                row.remove(target);
                            } else {
                                row.insert(*target, value);
                            }
                        }
                    }
                }
                if !row.is_empty() {
                    levels[i].insert(*source, row);
                }
            }
        }
        KoszulChainMap {
            ring: self.ring,
            rank: self.rank,
            shift: self.shift + other.shift,
            levels,
        }
    }

    pub fn apply(&self, e: &KoszulElement) -> KoszulElement {
        let mut out =
            KoszulElement::zero(self.ring, self.rank, e.degree.saturating_sub(self.shift));
        for ((mask, exponent), &c) in &e.terms {
            if let Some(targets) = self.levels.get(e.degree).and_then(|l| l.get(mask)) {
                for (target, &value) in targets {
                    out.add_term(*target, exponent.clone(), self.ring.mul(c, value) as i64);
                }
            }
        }
        out
    }

    /// Exact check of d(F(e)) = F(d(e)) on every basis generator, optionally
    /// confined to the subcomplex on the variables of `within`.
    pub fn is_chain_map(&self, cx: &KoszulComplex, within: u32) -> bool {
        for i in self.shift + 1..=cx.rank {
            for mask in cx.level_masks(i, within) {
                let e = cx.generator(mask);
                let left = cx.differential(&self.apply(&e));
                let right = self.apply(&cx.differential(&e));
                if left != right {
                    return false;
                }
            }
        }
        true
    }

    /// The induced Ext class: the functional on level-`shift` subsets read
    /// off by augmenting the image of each basis generator.
    pub fn ext_class(&self, cx: &KoszulComplex) -> BTreeMap<u32, u64> {
        let mut out = BTreeMap::new();
        for mask in cx.level_masks(self.shift, u32::MAX) {
            let value = cx.augment(&self.apply(&cx.generator(mask)));
            if value != 0 {
                out.insert(mask, value);
            }
        }
        out
    }
}

/// Contraction chain map for a subset of variables: the composition of the
/// single-variable contractions in decreasing variable order.
pub fn subset_contraction(cx: &KoszulComplex, mask: u32) -> Result<KoszulChainMap> {
    let mut map = KoszulChainMap::identity(cx);
    for j in mask_bits(mask) {
        map = map.compose(&KoszulChainMap::contraction(cx, j)?);
    }
    Ok(map)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtAlgebraReport {
    pub ranks: Vec<u64>,
    pub anticommutative: bool,
    pub witness_failures: Vec<String>,
}

/// Ext ranks of the residue module over the polynomial ring, with products
/// of the degree-one generators computed as composed contraction chain maps
/// and checked for exact anticommutativity.
pub fn ext_self_algebra(cx: &KoszulComplex, max_degree: usize) -> Result<ExtAlgebraReport> {
    let within = (1u32 << cx.rank) - 1;
    let ranks = cx.dual_ranks(within, max_degree)?;
    let mut witness_failures = Vec::new();
    for a in 0..cx.rank {
        let ca = KoszulChainMap::contraction(cx, a)?;
        if !ca.is_chain_map(cx, within) {
            witness_failures.push(format!("contraction {a} fails the chain condition"));
        }
        for b in 0..cx.rank {
            let cb = KoszulChainMap::contraction(cx, b)?;
            let ab = ca.compose(&cb).ext_class(cx);
            let ba = cb.compose(&ca).ext_class(cx);
            let negated: BTreeMap<u32, u64> =
                ba.iter().map(|(m, &v)| (*m, cx.ring.neg(v))).collect();
            if ab != negated {
                witness_failures.push(format!("generators {a}, {b} do not anticommute"));
            }
        }
    }
    Ok(ExtAlgebraReport {
        ranks,
        anticommutative: witness_failures.is_empty(),
        witness_failures,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuotientModuleReport {
    pub ranks: Vec<u64>,
    pub annihilator_respected: bool,
    pub free_through_quotient: bool,
    pub witness_failures: Vec<String>,
}

fn subset_mask(cx: &KoszulComplex, variables: &[usize]) -> Result<u32> {
    let mut mask = 0u32;
    for &v in variables {
        if v >= cx.rank {
            return Err(Error::DimensionMismatch(format!(
                "variable {v} out of range for rank {}",
                cx.rank
            )));
        }
        if mask >> v & 1 == 1 {
            return Err(Error::DimensionMismatch(format!("variable {v} repeated")));
        }
        mask |= 1 << v;
    }
    Ok(mask)
}

/// The matrix of the action of one dual generator from module degree j to
/// j + 1, columns indexed by the level-(j) subsets of `within`.
fn action_matrix(cx: &KoszulComplex, variable: usize, within: u32, j: usize) -> Result<Mat> {
    let sources = cx.level_masks(j, within);
    let targets = cx.level_masks(j + 1, within);
    let contraction = KoszulChainMap::contraction(cx, variable)?;
    let mut m = Mat::zeros(cx.ring, targets.len(), sources.len());
    for (col, &source) in sources.iter().enumerate() {
        let class_map = subset_contraction(cx, source)?;
        let acted = contraction.compose(&class_map).ext_class(cx);
        for (mask, value) in acted {
            if let Some(row) = targets.iter().position(|&t| t == mask) {
                m.set(row, col, value);
            }
        }
    }
    Ok(m)
}

/// Ext of the quotient ring killing the chosen variables, as a module over
/// the self-Ext algebra: ranks binomial(delta, i), the complement dual
/// vectors act by zero, and the chosen dual vectors act with the exterior
/// ranks binomial(delta - 1, j).
pub fn ext_quotient_module(
    cx: &KoszulComplex,
    killed_variables: &[usize],
    max_degree: usize,
) -> Result<QuotientModuleReport> {
    let within = subset_mask(cx, killed_variables)?;
    let delta = killed_variables.len();
    let ranks = cx.dual_ranks(within, max_degree)?;
    let mut witness_failures = Vec::new();
    let mut annihilator_respected = true;
    let mut free_through_quotient = true;
    for v in 0..cx.rank {
        for j in 0..delta.min(max_degree) {
            let m = action_matrix(cx, v, within, j)?;
            let rank = m.rank_mod_ell() as u64;
            if within >> v & 1 == 0 {
                if rank != 0 {
                    annihilator_respected = false;
                    witness_failures.push(format!("complement generator {v} acts in degree {j}"));
                }
            } else {
                let expected = binomial(delta as u64 - 1, j as u64);
                if rank != expected {
                    free_through_quotient = false;
                    witness_failures.push(format!(
                        "generator {v} has action rank {rank} in degree {j}, expected {expected}"
                    ));
                }
            }
        }
    }
    Ok(QuotientModuleReport {
        ranks,
        annihilator_respected,
        free_through_quotient,
        witness_failures,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FreenessReport {
    pub ranks: Vec<u64>,
    pub surjective: bool,
    pub witness_failures: Vec<String>,
}

/// The minimal-degree generation check for the quotient killing the last
/// `delta` variables: in each degree j, pairing the degree-zero class with
/// the whole degree-j self-Ext must surject onto the degree-j cohomology of
/// the dual subcomplex.
pub fn freeness_generation_check(
    cx: &KoszulComplex,
    delta: usize,
    max_degree: usize,
) -> Result<FreenessReport> {
    if delta > cx.rank {
        return Err(Error::DimensionMismatch(format!(
            "cannot kill {delta} of {} variables",
            cx.rank
        )));
    }
    let killed: Vec<usize> = (cx.rank - delta..cx.rank).collect();
    let within = subset_mask(cx, &killed)?;
    let ranks = cx.dual_ranks(within, max_degree)?;
    let mut witness_failures = Vec::new();
    for j in 0..=delta.min(max_degree) {
        let targets = cx.level_masks(j, within);
        let columns = cx.level_masks(j, (1u32 << cx.rank) - 1);
        let mut m = Mat::zeros(cx.ring, targets.len(), columns.len());
        for (col, &a) in columns.iter().enumerate() {
            let acted = subset_contraction(cx, a)?.ext_class(cx);
            for (mask, value) in acted {
                if mask & !within != 0 {
                    continue;
                }
                if let Some(row) = targets.iter().position(|&t| t == mask) {
                    m.set(row, col, value);
                }
            }
        }
        let rank = m.rank_mod_ell() as u64;
        let expected = binomial(delta as u64, j as u64);
        if rank != expected {
            witness_failures.push(format!(
                "pairing into degree {j} has rank {rank}, expected {expected}"
            ));
        }
    }
    Ok(FreenessReport {
        surjective: witness_failures.is_empty(),
        ranks,
        witness_failures,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupRingExtReport {
    pub ranks: Vec<u64>,
    pub ext1_rank: u64,
    pub koszul_ext1_rank: u64,
    pub rank_match: bool,
    pub surjective: bool,
    pub conormal_factor_logs: Vec<u32>,
    pub witness_failures: Vec<String>,
}

/// Ext of the residue module over Z/p^n[x_1..x_R]/((1+x_i)^{p^N} - 1),
/// computed from the periodic resolution of the underlying torsion group,
/// together with the change-of-rings comparison on Ext^1 against the
/// polynomial side: the conormal module I/I^2 is presented in the group
/// basis, its structure extracted by Smith normal form, and surjectivity is
/// witnessed by solving for every generator in terms of the images of the
/// variable classes.
pub fn group_ring_ext(
    p: u64,
    n: u32,
    big_n: u32,
    rank: usize,
    max_degree: usize,
) -> Result<GroupRingExtReport> {
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    if rank > 2 {
        return Err(Error::Unsupported(
            "group-ring Ext comparison is limited to one or two variables".into(),
        ));
    }
    let ring = CoeffRing::new(p, n)?;
    let group = AbelianLGroup::new(p, vec![big_n; rank])?;
    let coh = CohRing::new(group.clone(), ring)?;
    let mut ranks = Vec::new();
    for i in 0..=max_degree {
        let engine = coh.rank(i);
        let chain_side = shapes(i, rank).len() as u64;
        if engine != chain_side {
            return Err(Error::BrokenSquare {
                level: i as u32,
                detail: format!("rank {engine} against {chain_side} basis shapes"),
            });
        }
        ranks.push(engine);
    }
    let resolution = Resolution::new(group.clone(), ring);
    check_exactness(&resolution, max_degree.min(3))
        .map_err(|detail| Error::BrokenSquare { level: 0, detail })?;

    let elements = group.elements();
    let nonzero: Vec<Vec<u64>> = elements
        .iter()
        .filter(|g| g.iter().any(|&c| c != 0))
        .cloned()
        .collect();
    let index: BTreeMap<Vec<u64>, usize> = nonzero
        .iter()
        .enumerate()
        .map(|(i, g)| (g.clone(), i))
        .collect();
    let rows = nonzero.len();
    let mut columns: Vec<Vec<u64>> = Vec::new();
    for (a, g) in nonzero.iter().enumerate() {
        for h in nonzero.iter().skip(a) {
            let mut column = vec![0u64; rows];
            let sum = group.add(g, h);
            if let Some(&i) = index.get(&sum) {
                column[i] = ring.add(column[i], 1);
            }
            column[index[g]] = ring.sub(column[index[g]], 1);
            column[index[h]] = ring.sub(column[index[h]], 1);
            columns.push(column);
        }
    }
    let mut presentation = Mat::zeros(ring, rows, columns.len());
    for (j, column) in columns.iter().enumerate() {
        for (i, &value) in column.iter().enumerate() {
            presentation.set(i, j, value);
        }
    }
    let solver = SnfSolver::rows_only(&presentation);
    let conormal_factor_logs: Vec<u32> = solver
        .diag_valuations()
        .iter()
        .map(|&v| v.min(n))
        .filter(|&c| c > 0)
        .collect();
    let conormal_log = n as u64 * rows as u64 - solver.image_size_log();
    let mut witness_failures = Vec::new();
    if conormal_log != n as u64 * rank as u64 {
        witness_failures.push(format!(
            "conormal module has log size {conormal_log}, expected {}",
            n as u64 * rank as u64
        ));
    }

    let mut generators = Mat::zeros(ring, rows, columns.len() + rank);
    for (j, column) in columns.iter().enumerate() {
        for (i, &value) in column.iter().enumerate() {
            generators.set(i, j, value);
        }
    }
    for i in 0..rank {
        let mut basis = vec![0u64; rank];
        basis[i] = 1;
        generators.set(index[&basis], columns.len() + i, 1);
    }
    let generation = SnfSolver::rows_only(&generators);
    for (i, g) in nonzero.iter().enumerate() {
        let mut target = vec![0u64; rows];
        target[i] = 1;
        if !generation.solvable(&target) {
            witness_failures.push(format!(
                "group element {g:?} is not generated by the variable classes"
            ));
        }
    }

    for i in 0..rank {
        let norm_augmentation = ring.reduce_u64(group.factor_order(i));
        if norm_augmentation != 0 {
            witness_failures.push(format!(
                "norm element of factor {i} does not augment to zero"
            ));
        }
    }

    let ext1_rank = coh.rank(1);
    let koszul_ext1_rank = rank as u64;
    Ok(GroupRingExtReport {
        ranks,
        ext1_rank,
        koszul_ext1_rank,
        rank_match: ext1_rank == koszul_ext1_rank,
        surjective: witness_failures.is_empty(),
        conormal_factor_logs,
        witness_failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(rank: usize) -> KoszulComplex {
        KoszulComplex::new(CoeffRing::new(3, 2).unwrap(), rank).unwrap()
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(4, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(0, 0), 1);
    }

    #[test]
    fn differential_squares_to_zero() {
        for rank in 0..=4 {
            for ring in [CoeffRing::new(3, 2).unwrap(), CoeffRing::new(5, 1).unwrap()] {
                let cx = KoszulComplex::new(ring, rank).unwrap();
                for i in 0..=rank {
                    for mask in cx.level_masks(i, u32::MAX) {
                        let twice = cx.differential(&cx.differential(&cx.generator(mask)));
                        assert!(twice.is_zero(), "rank {rank} mask {mask:b}");
                    }
                }
            }
        }
    }

    #[test]
    fn differential_on_a_pair() {
        let cx = cx(2);
        let d = cx.differential(&cx.generator(0b11));
        let mut expected = KoszulElement::zero(cx.ring, 2, 1);
        expected.add_term(0b10, vec![1, 0], 1);
        expected.add_term(0b01, vec![0, 1], -1);
        assert_eq!(d, expected);
    }

    #[test]
    fn contractions_are_chain_maps() {
        let cx = cx(3);
        let within = 0b111;
        for v in 0..3 {
            let c = KoszulChainMap::contraction(&cx, v).unwrap();
            assert!(c.is_chain_map(&cx, within), "variable {v}");
            let class = c.ext_class(&cx);
            assert_eq!(class, BTreeMap::from([(1u32 << v, 1u64)]));
        }
    }

    #[test]
    fn contraction_products_anticommute() {
        let cx = cx(3);
        let c0 = KoszulChainMap::contraction(&cx, 0).unwrap();
        let c1 = KoszulChainMap::contraction(&cx, 1).unwrap();
        let ab = c0.compose(&c1);
        let ba = c1.compose(&c0);
        assert!(ab.is_chain_map(&cx, 0b111));
        assert_eq!(ab.ext_class(&cx), BTreeMap::from([(0b011, 1u64)]));
        assert_eq!(ba.ext_class(&cx), BTreeMap::from([(0b011, cx.ring.neg(1))]));
        assert!(c0.compose(&c0).ext_class(&cx).is_empty());
    }

    #[test]
    fn triple_contraction_reads_the_top_class() {
        let cx = cx(3);
        let c = subset_contraction(&cx, 0b111).unwrap();
        assert!(c.is_chain_map(&cx, 0b111));
        assert_eq!(c.ext_class(&cx), BTreeMap::from([(0b111, 1u64)]));
    }

    #[test]
    fn composition_is_associative() {
        let cx = cx(3);
        let c0 = KoszulChainMap::contraction(&cx, 0).unwrap();
        let c1 = KoszulChainMap::contraction(&cx, 1).unwrap();
        let c2 = KoszulChainMap::contraction(&cx, 2).unwrap();
        let left = c0.compose(&c1).compose(&c2);
        let right = c0.compose(&c1.compose(&c2));
        assert_eq!(left, right);
        assert_eq!(left.ext_class(&cx), right.ext_class(&cx));
    }

    #[test]
    fn self_algebra_ranks() {
        for rank in 0..=4 {
            let cx = cx(rank);
            let report = ext_self_algebra(&cx, 4).unwrap();
            let expected: Vec<u64> = (0..=4).map(|i| binomial(rank as u64, i)).collect();
            assert_eq!(report.ranks, expected, "rank {rank}");
            assert!(report.anticommutative);
            assert!(report.witness_failures.is_empty());
        }
    }

    #[test]
    fn quotient_module_one_killed_variable() {
        let cx = cx(2);
        let report = ext_quotient_module(&cx, &[1], 1).unwrap();
        assert_eq!(report.ranks, vec![1, 1]);
        assert!(report.annihilator_respected);
        assert!(report.free_through_quotient);

        let kill = action_matrix(&cx, 0, 0b10, 0).unwrap();
        assert_eq!(kill.rank_mod_ell(), 0);
        let iso = action_matrix(&cx, 1, 0b10, 0).unwrap();
        assert_eq!(iso.rank_mod_ell(), 1);
        assert_eq!(iso.get(0, 0), 1);
    }

    #[test]
    fn quotient_module_edge_cases() {
        let cx = cx(2);
        let full = ext_quotient_module(&cx, &[0, 1], 2).unwrap();
        assert_eq!(full.ranks, vec![1, 2, 1]);
        assert!(full.annihilator_respected && full.free_through_quotient);
        let empty = ext_quotient_module(&cx, &[], 2).unwrap();
        assert_eq!(empty.ranks, vec![1, 0, 0]);
        assert!(empty.annihilator_respected);
        assert!(matches!(
            ext_quotient_module(&cx, &[0, 0], 1),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            ext_quotient_module(&cx, &[5], 1),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn module_action_is_associative_at_chain_level() {
        let cx = cx(3);
        let within = 0b110;
        let module_class = subset_contraction(&cx, 0b010).unwrap();
        let a = KoszulChainMap::contraction(&cx, 2).unwrap();
        let b = KoszulChainMap::contraction(&cx, 1).unwrap();
        let left = a.compose(&b).compose(&module_class);
        let right = a.compose(&b.compose(&module_class));
        assert_eq!(left, right);
        assert!(left.is_chain_map(&cx, within));
    }

    #[test]
    fn freeness_generation_examples() {
        let report = freeness_generation_check(&cx(2), 1, 2).unwrap();
        assert_eq!(report.ranks, vec![1, 1, 0]);
        assert!(report.surjective);

        let report = freeness_generation_check(&cx(3), 2, 3).unwrap();
        assert_eq!(report.ranks, vec![1, 2, 1, 0]);
        assert!(report.surjective);

        let report = freeness_generation_check(&cx(3), 1, 2).unwrap();
        assert_eq!(report.ranks, vec![1, 1, 0]);
        assert!(report.surjective);

        let report = freeness_generation_check(&cx(2), 0, 1).unwrap();
        assert_eq!(report.ranks, vec![1, 0]);
        assert!(report.surjective);

        assert!(freeness_generation_check(&cx(2), 3, 1).is_err());
    }

    #[test]
    fn group_ring_ranks_one_variable() {
        let report = group_ring_ext(3, 1, 1, 1, 4).unwrap();
        assert_eq!(report.ranks, vec![1, 1, 1, 1, 1]);
        assert_eq!(report.ext1_rank, 1);
        assert_eq!(report.koszul_ext1_rank, 1);
        assert!(report.rank_match);
        assert!(report.surjective, "{:?}", report.witness_failures);
        assert_eq!(report.conormal_factor_logs, vec![1]);
    }

    #[test]
    fn group_ring_deeper_group_than_coefficients() {
        let report = group_ring_ext(3, 1, 2, 1, 3).unwrap();
        assert!(report.rank_match && report.surjective);
        assert_eq!(report.conormal_factor_logs, vec![1]);

        let report = group_ring_ext(3, 2, 2, 1, 3).unwrap();
        assert_eq!(report.ranks, vec![1, 1, 1, 1]);
        assert!(report.rank_match && report.surjective);
        assert_eq!(report.conormal_factor_logs, vec![2]);
    }

    #[test]
    fn group_ring_two_variables() {
        let report = group_ring_ext(3, 1, 1, 2, 3).unwrap();
        assert_eq!(report.ranks, vec![1, 2, 3, 4]);
        assert_eq!(report.ext1_rank, 2);
        assert!(report.rank_match);
        assert!(report.surjective, "{:?}", report.witness_failures);
        assert_eq!(report.conormal_factor_logs, vec![1, 1]);

        let report = group_ring_ext(3, 2, 2, 2, 2).unwrap();
        assert_eq!(report.ranks, vec![1, 2, 3]);
        assert!(report.rank_match && report.surjective);
        assert_eq!(report.conormal_factor_logs, vec![2, 2]);
    }

    #[test]
    fn group_ring_gates() {
        assert!(matches!(
            group_ring_ext(2, 1, 1, 1, 2),
            Err(Error::EvenPrime)
        ));
        assert!(matches!(
            group_ring_ext(3, 1, 1, 3, 2),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            group_ring_ext(3, 2, 1, 1, 2),
            Err(Error::ExponentTooLarge { .. })
        ));
    }

    #[test]
    fn report_json_shape() {
        let report = freeness_generation_check(&cx(2), 1, 1).unwrap();
        let text = serde_json::to_string(&report).unwrap();
        assert!(text.contains("\"ranks\""));
        assert!(text.contains("\"surjective\""));
        assert!(text.contains("\"witness_failures\""));
    }
}
