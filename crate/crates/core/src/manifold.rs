//! The arithmetic manifold of an anisotropic torus, reduced to its
//! linear-algebra shadow: a rank-delta lattice with user-supplied reduction
//! maps to finite l-groups, exterior-algebra cohomology over Z/l^r,
//! congruence classes obtained by composing a character with a reduction
//! map, the degree-raising action by wedging, and assembly of a compatible
//! family of endomorphisms mod l^n into one at the top precision.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coeff::{prime_power_decompose, AbelianLGroup, CoeffRing};
use crate::error::{Error, Result};
use crate::koszul::binomial;
use crate::linalg::Mat;

const MAX_DELTA: usize = 12;

/// A reduction map from the lattice to the l-part of a local torus,
/// recorded as an integer matrix with one row per target factor.
#[derive(Debug, Clone, PartialEq)]
pub struct Place {
    pub label: String,
    pub target: AbelianLGroup,
    pub matrix: Vec<Vec<i64>>,
}

/// A rank-delta lattice together with its labeled reduction maps.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusManifold {
    pub delta: usize,
    pub places: Vec<Place>,
}

/// An element of the exterior algebra on the dual basis of the lattice,
/// over a fixed coefficient ring. Keys are bitmasks of dual generators.
#[derive(Debug, Clone)]
pub struct ManifoldClass {
    pub ring: CoeffRing,
    pub delta: usize,
    pub terms: BTreeMap<u32, u64>,
}

impl PartialEq for ManifoldClass {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.delta == other.delta && self.terms == other.terms
    }
}

fn wedge_sign_is_negative(m1: u32, m2: u32) -> bool {
    let mut inversions = 0u32;
    for i in 0..32 {
        if m1 >> i & 1 == 1 {
            inversions += (m2 & ((1u32 << i) - 1)).count_ones();
        }
    }
    inversions % 2 == 1
}

impl ManifoldClass {
    pub fn zero(ring: CoeffRing, delta: usize) -> ManifoldClass {
        ManifoldClass {
            ring,
            delta,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: CoeffRing, delta: usize) -> ManifoldClass {
        let mut out = ManifoldClass::zero(ring, delta);
        out.add_term(0, 1);
        out
    }

    /// The degree-1 class with the given coordinates on the dual basis.
    pub fn character(ring: CoeffRing, coords: &[u64]) -> ManifoldClass {
        let mut out = ManifoldClass::zero(ring, coords.len());
        for (i, &c) in coords.iter().enumerate() {
            out.add_term(1 << i, c as i64);
        }
        out
    }

    pub fn add_term(&mut self, mask: u32, coeff: i64) {
        assert!(
            (mask >> self.delta) == 0,
            "mask uses generators beyond the rank"
        );
        let c = self.ring.add(
            self.terms.get(&mask).copied().unwrap_or(0),
            self.ring.from_i64(coeff),
        );
        if c == 0 {
            self.terms.remove(&mask);
        } else {
            self.terms.insert(mask, c);
        }
    }

    pub fn coefficient(&self, mask: u32) -> u64 {
        self.terms.get(&mask).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Result<usize> {
        let mut degree = None;
        for mask in self.terms.keys() {
            let d = mask.count_ones() as usize;
            match degree {
                None => degree = Some(d),
                Some(e) if e != d => return Err(Error::NotHomogeneous),
                _ => {}
            }
        }
        Ok(degree.unwrap_or(0))
    }

    fn check_compatible(&self, other: &ManifoldClass) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(
                self.ring.to_string(),
                other.ring.to_string(),
            ));
        }
        if self.delta != other.delta {
            return Err(Error::DimensionMismatch(format!(
                "lattice ranks {} vs {}",
                self.delta, other.delta
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &ManifoldClass) -> Result<ManifoldClass> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (&mask, &c) in &other.terms {
            out.add_term(mask, c as i64);
        }
        Ok(out)
    }

    pub fn neg(&self) -> ManifoldClass {
        self.scale_i64(-1)
    }

    pub fn sub(&self, other: &ManifoldClass) -> Result<ManifoldClass> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u64) -> ManifoldClass {
        let mut out = ManifoldClass::zero(self.ring, self.delta);
        for (&mask, &v) in &self.terms {
            out.add_term(mask, self.ring.mul(v, self.ring.reduce_u64(c)) as i64);
        }
        out
    }

    pub fn scale_i64(&self, c: i64) -> ManifoldClass {
        self.scale(self.ring.from_i64(c))
    }

    pub fn wedge(&self, other: &ManifoldClass) -> Result<ManifoldClass> {
        self.check_compatible(other)?;
        let mut out = ManifoldClass::zero(self.ring, self.delta);
        for (&m1, &c1) in &self.terms {
            for (&m2, &c2) in &other.terms {
                if m1 & m2 != 0 {
                    continue;
                }
                let mut c = self.ring.mul(c1, c2) as i64;
                if wedge_sign_is_negative(m1, m2) {
                    c = -c;
                }
                out.add_term(m1 | m2, c);
            }
        }
        Ok(out)
    }

    /// Reduce coefficients into a smaller ring with the same prime.
    pub fn coeff_change(&self, target: CoeffRing) -> Result<ManifoldClass> {
        if target.ell != self.ring.ell {
            return Err(Error::RingMismatch(
                self.ring.to_string(),
                target.to_string(),
            ));
        }
        if target.r > self.ring.r {
            return Err(Error::ExponentTooLarge {
                r: target.r,
                n: self.ring.r,
            });
        }
        let mut out = ManifoldClass::zero(target, self.delta);
        for (&mask, &c) in &self.terms {
            out.add_term(mask, target.reduce_u64(c) as i64);
        }
        Ok(out)
    }

    /// Coordinates on the full 2^delta mask basis, for matrix assembly.
    pub fn dense_coordinates(&self) -> Vec<u64> {
        let mut out = vec![0u64; 1 << self.delta];
        for (&mask, &c) in &self.terms {
            out[mask as usize] = c;
        }
        out
    }
}

impl TorusManifold {
    pub fn new(delta: usize, places: Vec<Place>) -> Result<TorusManifold> {
        if delta == 0 || delta > MAX_DELTA {
            return Err(Error::Unsupported(format!(
                "lattice rank {delta} is outside the supported range 1..={MAX_DELTA}"
            )));
        }
        for place in &places {
            if place.matrix.len() != place.target.num_factors() {
                return Err(Error::DimensionMismatch(format!(
                    "place {} has {} matrix rows for {} target factors",
                    place.label,
                    place.matrix.len(),
                    place.target.num_factors()
                )));
            }
            for row in &place.matrix {
                if row.len() != delta {
                    return Err(Error::DimensionMismatch(format!(
                        "place {} has a row of width {} for lattice rank {delta}",
                        place.label,
                        row.len()
                    )));
                }
            }
        }
        Ok(TorusManifold { delta, places })
    }

    pub fn place(&self, label: &str) -> Result<&Place> {
        self.places
            .iter()
            .find(|p| p.label == label)
            .ok_or_else(|| Error::Unsupported(format!("unknown place {label}")))
    }

    /// The degree-1 class of a character of the local torus at a place,
    /// composed with the reduction map. The character is given by its
    /// values on the target factors and must kill each factor's order.
    pub fn congruence_class(
        &self,
        ring: CoeffRing,
        label: &str,
        alpha: &[u64],
    ) -> Result<ManifoldClass> {
        let place = self.place(label)?;
        if place.target.ell != ring.ell {
            return Err(Error::RingMismatch(
                place.target.to_string(),
                ring.to_string(),
            ));
        }
        if alpha.len() != place.target.num_factors() {
            return Err(Error::DimensionMismatch(format!(
                "character has {} coordinates for {} target factors",
                alpha.len(),
                place.target.num_factors()
            )));
        }
        for (i, &a) in alpha.iter().enumerate() {
            let order = place.target.factor_order(i);
            if ring.mul(ring.reduce_u64(a), ring.reduce_u64(order)) != 0 {
                return Err(Error::InvalidHom(format!(
                    "character value {a} does not kill the factor order {order}"
                )));
            }
        }
        let mut coords = vec![0u64; self.delta];
        for (j, coord) in coords.iter_mut().enumerate() {
            let mut acc = 0u64;
            for (i, &a) in alpha.iter().enumerate() {
                acc = ring.add(
                    acc,
                    ring.mul(ring.reduce_u64(a), ring.from_i64(place.matrix[i][j])),
                );
            }
            *coord = acc;
        }
        Ok(ManifoldClass::character(ring, &coords))
    }

    /// Wedge by the congruence class of (label, alpha); raises degree by 1.
    pub fn derived_act(
        &self,
        ring: CoeffRing,
        label: &str,
        alpha: &[u64],
        omega: &ManifoldClass,
    ) -> Result<ManifoldClass> {
        self.congruence_class(ring, label, alpha)?.wedge(omega)
    }

    /// The matrix of derived_act on the full 2^delta mask basis.
    pub fn action_matrix(&self, ring: CoeffRing, label: &str, alpha: &[u64]) -> Result<Mat> {
        let class = self.congruence_class(ring, label, alpha)?;
        let dim = 1usize << self.delta;
        let mut out = Mat::zeros(ring, dim, dim);
        for col in 0..dim {
            let mut basis = ManifoldClass::zero(ring, self.delta);
            basis.add_term(col as u32, 1);
            let image = class.wedge(&basis)?;
            for (row, &c) in image.dense_coordinates().iter().enumerate() {
                out.set(row, col, c);
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> ManifoldJson {
        ManifoldJson {
            delta: self.delta,
            places: self
                .places
                .iter()
                .map(|p| PlaceJson {
                    label: p.label.clone(),
                    orders: (0..p.target.num_factors())
                        .map(|i| p.target.factor_order(i))
                        .collect(),
                    matrix: p.matrix.clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &ManifoldJson) -> Result<TorusManifold> {
        let mut places = Vec::new();
        for pj in &json.places {
            let mut ell = None;
            let mut exponents = Vec::new();
            for &order in &pj.orders {
                let (p, n) = prime_power_decompose(order).ok_or(Error::NotPrimePower(order))?;
                match ell {
                    None => ell = Some(p),
                    Some(q) if q != p => {
                        return Err(Error::Parse(format!(
                            "place {} mixes factor orders of primes {q} and {p}",
                            pj.label
                        )));
                    }
                    _ => {}
                }
                exponents.push(n);
            }
            let ell = ell
                .ok_or_else(|| Error::Parse(format!("place {} has no factor orders", pj.label)))?;
            places.push(Place {
                label: pj.label.clone(),
                target: AbelianLGroup::new(ell, exponents)?,
                matrix: pj.matrix.clone(),
            });
        }
        TorusManifold::new(json.delta, places)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlaceJson {
    pub label: String,
    pub orders: Vec<u64>,
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifoldJson {
    pub delta: usize,
    pub places: Vec<PlaceJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExteriorReport {
    pub delta: usize,
    pub ranks: Vec<u64>,
    pub expected_ranks: Vec<u64>,
    pub total_rank: u64,
    pub freely_generated: bool,
    pub witness_failures: Vec<String>,
}

/// Check that the chosen congruence classes generate the cohomology as an
/// exterior algebra: their degree-1 span must be everything, and then each
/// graded piece is spanned by the k-fold wedges with the binomial rank.
pub fn exterior_generation_report(
    m: &TorusManifold,
    ring: CoeffRing,
    choices: &[(String, Vec<u64>)],
) -> Result<ExteriorReport> {
    if choices.len() != m.delta {
        return Err(Error::DimensionMismatch(format!(
            "{} generators chosen for lattice rank {}",
            choices.len(),
            m.delta
        )));
    }
    let mut report = ExteriorReport {
        delta: m.delta,
        ranks: Vec::new(),
        expected_ranks: (0..=m.delta as u64)
            .map(|k| binomial(m.delta as u64, k))
            .collect(),
        total_rank: 0,
        freely_generated: true,
        witness_failures: Vec::new(),
    };
    let generators: Vec<ManifoldClass> = choices
        .iter()
        .map(|(label, alpha)| m.congruence_class(ring, label, alpha))
        .collect::<Result<_>>()?;
    for k in 0..=m.delta {
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for subset in 0u32..(1 << m.delta) {
            if subset.count_ones() as usize != k {
                continue;
            }
            let mut product = ManifoldClass::one(ring, m.delta);
            for (i, g) in generators.iter().enumerate() {
                if subset >> i & 1 == 1 {
                    product = product.wedge(g)?;
                }
            }
            rows.push(product.dense_coordinates());
        }
        if rows.is_empty() {
            rows.push(vec![0; 1 << m.delta]);
        }
        let rank = Mat::from_rows(ring, &rows).rank_mod_ell() as u64;
        if rank != report.expected_ranks[k] {
            report.freely_generated = false;
            report.witness_failures.push(format!(
                "degree {k} span has rank {rank}, expected {}",
                report.expected_ranks[k]
            ));
        }
        report.total_rank += rank;
        report.ranks.push(rank);
    }
    Ok(report)
}

/// Assemble a compatible family of endomorphisms, one per precision
/// l^1..l^N on the 2^delta mask basis, into the top-precision matrix.
/// Level k+1 must reduce to level k entry by entry; the first broken
/// square is reported with its level.
pub fn limit_assemble(ell: u64, delta: usize, levels: &[Mat]) -> Result<Mat> {
    if levels.is_empty() {
        return Err(Error::Unsupported("no endomorphism levels given".into()));
    }
    let dim = 1usize << delta;
    for (k, t) in levels.iter().enumerate() {
        let expected = CoeffRing::new(ell, k as u32 + 1)?;
        if t.ring != expected {
            return Err(Error::RingMismatch(
                t.ring.to_string(),
                expected.to_string(),
            ));
        }
        if t.rows != dim || t.cols != dim {
            return Err(Error::DimensionMismatch(format!(
                "level {} matrix is {}x{}, expected {dim}x{dim}",
                k + 1,
                t.rows,
                t.cols
            )));
        }
    }
    for k in 0..levels.len() - 1 {
        let small = &levels[k];
        let big = &levels[k + 1];
        for i in 0..dim {
            for j in 0..dim {
                if small.ring.reduce_u64(big.get(i, j)) != small.get(i, j) {
                    return Err(Error::BrokenSquare {
                        level: k as u32 + 1,
                        detail: format!(
                            "entry ({i},{j}) is {} at level {} but reduces to {}, not {}",
                            big.get(i, j),
                            k + 2,
                            small.ring.reduce_u64(big.get(i, j)),
                            small.get(i, j)
                        ),
                    });
                }
            }
        }
    }
    Ok(levels[levels.len() - 1].clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(ell: u64, r: u32) -> CoeffRing {
        CoeffRing::new(ell, r).unwrap()
    }

    fn group(ell: u64, exps: &[u32]) -> AbelianLGroup {
        AbelianLGroup::new(ell, exps.to_vec()).unwrap()
    }

    fn two_place_manifold() -> TorusManifold {
        TorusManifold::new(
            2,
            vec![
                Place {
                    label: "v1".into(),
                    target: group(3, &[2, 2]),
                    matrix: vec![vec![1, 0], vec![0, 1]],
                },
                Place {
                    label: "v2".into(),
                    target: group(3, &[1]),
                    matrix: vec![vec![1, 1]],
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn wedge_is_graded_anticommutative() {
        let s = ring(3, 2);
        let a = ManifoldClass::character(s, &[1, 2, 0]);
        let b = ManifoldClass::character(s, &[0, 4, 5]);
        assert!(a.wedge(&a).unwrap().is_zero());
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        assert_eq!(ab, ba.neg());
        assert_eq!(ab.degree().unwrap(), 2);
        let c = ManifoldClass::character(s, &[1, 1, 1]);
        let left = a.wedge(&b).unwrap().wedge(&c).unwrap();
        let right = a.wedge(&b.wedge(&c).unwrap()).unwrap();
        assert_eq!(left, right);
        let top = a.wedge(&b).unwrap().wedge(&c).unwrap();
        assert_eq!(
            top.coefficient(0b111),
            top.terms.get(&0b111).copied().unwrap_or(0)
        );
        assert_eq!(ab.scale(5), ab.scale(2).add(&ab.scale(3)).unwrap());
    }

    #[test]
    fn explicit_wedge_signs() {
        let s = ring(3, 1);
        let e0 = ManifoldClass::character(s, &[1, 0]);
        let e1 = ManifoldClass::character(s, &[0, 1]);
        let w = e0.wedge(&e1).unwrap();
        assert_eq!(w.coefficient(0b11), 1);
        let w = e1.wedge(&e0).unwrap();
        assert_eq!(w.coefficient(0b11), 2);
    }

    #[test]
    fn congruence_class_composes_the_matrices() {
        let m = two_place_manifold();
        let class = m.congruence_class(ring(3, 1), "v1", &[1, 0]).unwrap();
        assert_eq!(class, ManifoldClass::character(ring(3, 1), &[1, 0]));
        let zero = m.congruence_class(ring(3, 1), "v1", &[0, 0]).unwrap();
        assert!(zero.is_zero());
        let diag = m.congruence_class(ring(3, 1), "v2", &[2]).unwrap();
        assert_eq!(diag, ManifoldClass::character(ring(3, 1), &[2, 2]));
        assert!(matches!(
            m.congruence_class(ring(3, 1), "v9", &[1]),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn congruence_class_respects_factor_orders() {
        let m = two_place_manifold();
        assert!(matches!(
            m.congruence_class(ring(3, 2), "v2", &[1]),
            Err(Error::InvalidHom(_))
        ));
        let lifted = m.congruence_class(ring(3, 2), "v2", &[3]).unwrap();
        assert_eq!(lifted, ManifoldClass::character(ring(3, 2), &[3, 3]));
        let fine = m.congruence_class(ring(3, 2), "v1", &[1, 4]).unwrap();
        assert_eq!(fine, ManifoldClass::character(ring(3, 2), &[1, 4]));
    }

    #[test]
    fn derived_action_wedges() {
        let m = two_place_manifold();
        let s = ring(3, 2);
        let unit = ManifoldClass::one(s, 2);
        let act_once = m.derived_act(s, "v1", &[1, 0], &unit).unwrap();
        assert_eq!(act_once, m.congruence_class(s, "v1", &[1, 0]).unwrap());
        let act_twice = m.derived_act(s, "v1", &[1, 0], &act_once).unwrap();
        assert!(act_twice.is_zero());
        let a = m.congruence_class(s, "v1", &[1, 0]).unwrap();
        let b = m.congruence_class(s, "v1", &[0, 1]).unwrap();
        let ab = m
            .derived_act(
                s,
                "v1",
                &[1, 0],
                &m.derived_act(s, "v1", &[0, 1], &unit).unwrap(),
            )
            .unwrap();
        let ba = m
            .derived_act(
                s,
                "v1",
                &[0, 1],
                &m.derived_act(s, "v1", &[1, 0], &unit).unwrap(),
            )
            .unwrap();
        assert_eq!(ab, ba.neg());
        assert_eq!(ab, a.wedge(&b).unwrap());
        let omega = ManifoldClass::character(s, &[2, 5]);
        let scaled = m.derived_act(s, "v1", &[1, 0], &omega.scale(7)).unwrap();
        assert_eq!(
            scaled,
            m.derived_act(s, "v1", &[1, 0], &omega).unwrap().scale(7)
        );
    }

    #[test]
    fn generation_report_on_a_spanning_choice() {
        let m = two_place_manifold();
        let report = exterior_generation_report(
            &m,
            ring(3, 2),
            &[("v1".into(), vec![1, 0]), ("v1".into(), vec![0, 1])],
        )
        .unwrap();
        assert!(report.freely_generated);
        assert_eq!(report.ranks, vec![1, 2, 1]);
        assert_eq!(report.total_rank, 4);
        assert!(report.witness_failures.is_empty());
    }

    #[test]
    fn generation_report_rank_one() {
        let m = TorusManifold::new(
            1,
            vec![Place {
                label: "v".into(),
                target: group(3, &[1]),
                matrix: vec![vec![1]],
            }],
        )
        .unwrap();
        let report = exterior_generation_report(&m, ring(3, 1), &[("v".into(), vec![1])]).unwrap();
        assert!(report.freely_generated);
        assert_eq!(report.ranks, vec![1, 1]);
    }

    #[test]
    fn generation_report_flags_a_deficient_span() {
        let m = two_place_manifold();
        let report = exterior_generation_report(
            &m,
            ring(3, 1),
            &[("v2".into(), vec![1]), ("v2".into(), vec![2])],
        )
        .unwrap();
        assert!(!report.freely_generated);
        assert_eq!(report.ranks, vec![1, 1, 0]);
        assert!(report
            .witness_failures
            .iter()
            .any(|w| w.contains("degree 1")));
    }

    #[test]
    fn limit_assembly_of_a_compatible_family() {
        let m = two_place_manifold();
        let levels: Vec<Mat> = (1..=3u32)
            .map(|n| {
                let s = ring(3, n);
                m.action_matrix(s, "v1", &[s.reduce_u64(3), 0]).unwrap()
            })
            .collect();
        let top = limit_assemble(3, 2, &levels).unwrap();
        assert_eq!(top, m.action_matrix(ring(3, 3), "v1", &[3, 0]).unwrap());
        let identities: Vec<Mat> = (1..=3u32).map(|n| Mat::identity(ring(3, n), 4)).collect();
        let top = limit_assemble(3, 2, &identities).unwrap();
        assert_eq!(top, Mat::identity(ring(3, 3), 4));
    }

    #[test]
    fn limit_assembly_reports_the_first_broken_square() {
        let mut levels = vec![Mat::identity(ring(3, 1), 4), Mat::identity(ring(3, 2), 4)];
        levels[1].set(0, 0, 2);
        match limit_assemble(3, 2, &levels) {
            Err(Error::BrokenSquare { level, detail }) => {
                assert_eq!(level, 1);
                assert!(detail.contains("(0,0)"));
            }
            other => panic!("expected a broken square, got {other:?}"),
        }
        let wrong_ring = vec![Mat::identity(ring(3, 2), 4)];
        assert!(matches!(
            limit_assemble(3, 2, &wrong_ring),
            Err(Error::RingMismatch(_, _))
        ));
    }

    #[test]
    fn coefficient_change_intertwines() {
        let m = two_place_manifold();
        let big = ring(3, 2);
        let small = ring(3, 1);
        let over_big = m.congruence_class(big, "v1", &[4, 7]).unwrap();
        let reduced = over_big.coeff_change(small).unwrap();
        assert_eq!(reduced, m.congruence_class(small, "v1", &[1, 1]).unwrap());
        let a = ManifoldClass::character(big, &[1, 2]);
        let b = ManifoldClass::character(big, &[3, 4]);
        let wedge_then_reduce = a.wedge(&b).unwrap().coeff_change(small).unwrap();
        let reduce_then_wedge = a
            .coeff_change(small)
            .unwrap()
            .wedge(&b.coeff_change(small).unwrap())
            .unwrap();
        assert_eq!(wedge_then_reduce, reduce_then_wedge);
    }

    #[test]
    fn json_round_trip() {
        let m = two_place_manifold();
        let json = m.to_json();
        assert_eq!(json.places[0].orders, vec![9, 9]);
        let text = serde_json::to_string(&json).unwrap();
        let parsed: ManifoldJson = serde_json::from_str(&text).unwrap();
        let back = TorusManifold::from_json(&parsed).unwrap();
        assert_eq!(back, m);
        let mut bad = m.to_json();
        bad.places[0].orders[0] = 12;
        assert!(matches!(
            TorusManifold::from_json(&bad),
            Err(Error::NotPrimePower(12))
        ));
    }
}
