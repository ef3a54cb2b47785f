//! A depth-bounded ball around the standard vertex of the (q+1)-regular
//! tree attached to PGL2 of a q-adic field, the action of the l-part of the
//! diagonal torus on it, and a vertex-by-vertex convolution oracle for
//! spherical elements.
//!
//! A vertex at distance d >= 1 from the base corresponds to a point of
//! P^1(Z/q^d): either [a : 1] with a in Z/q^d, or [1 : q*b] with b in
//! Z/q^{d-1}. Reducing coordinates mod q^j gives the vertex at distance j
//! on the geodesic back to the base, so tree distance is read off from the
//! longest common reduction. A unit u of l-power order acts through its
//! Teichmueller lift by [a : b] -> [u*a : b]. Distinct roots of unity stay
//! distinct mod q, so u*a = a mod q^d forces u = 1 whenever a is nonzero;
//! the fixed vertices of the torus are exactly the standard apartment, and
//! every off-apartment stabilizer is trivial.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::coeff::{is_prime, AbelianLGroup, CoeffRing, GroupHom};
use crate::cohomology::{corestrict, restrict, CohClass, CohRing, Monomial};
use crate::error::{Error, Result};
use crate::root_datum::RootDatum;
use crate::satake::satake_basis;

const MAX_VERTICES: u64 = 2_000_000;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    acc
}

/// A point of P^1(Z/q^d) in normal form: `Affine(a)` is [a : 1] and
/// `Infinite(b)` is [1 : q*b].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ProjPoint {
    Affine(u64),
    Infinite(u64),
}

/// A tree vertex, recorded by its distance from the base together with the
/// projective coordinate that pins down the geodesic from the base.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TreeVertex {
    pub distance: u32,
    pub point: ProjPoint,
}

/// The ball of radius `depth` around the base vertex, with the l-Sylow
/// subgroup of the split diagonal torus acting on it.
pub struct TreeBall {
    pub q: u64,
    pub ell: u64,
    pub r: u32,
    /// l-adic valuation of q - 1; the torus l-part has order ell^s.
    pub s: u32,
    pub depth: u32,
    pub gamma: AbelianLGroup,
    pub gamma_order: u64,
    pub coeff: CoeffRing,
    generator: u64,
    generator_inv: u64,
    q_pows: Vec<u64>,
}

/// Checks the arithmetic regime: ell an odd prime, q a prime different from
/// ell, and ell^r dividing q - 1. Returns the exact ell-valuation of q - 1.
pub fn validate_regime(q: u64, ell: u64, r: u32) -> Result<u32> {
    CoeffRing::new(ell, r)?;
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if q == ell {
        return Err(Error::CharacteristicClash { ell, q });
    }
    let mut s = 0u32;
    let mut m = q - 1;
    while m % ell == 0 {
        s += 1;
        m /= ell;
    }
    if s < r {
        return Err(Error::Regime(format!(
            "q - 1 = {} is not divisible by {}^{}",
            q - 1,
            ell,
            r
        )));
    }
    Ok(s)
}

impl TreeBall {
    pub fn new(q: u64, ell: u64, r: u32, depth: u32) -> Result<TreeBall> {
        let coeff = CoeffRing::new(ell, r)?;
        let s = validate_regime(q, ell, r)?;
        if depth == 0 || depth > 3 {
            return Err(Error::Unsupported(format!(
                "ball depth {depth} is outside the supported range 1..=3"
            )));
        }
        let mut q_pows = vec![1u64];
        let mut count = 1u64;
        for d in 1..=depth {
            q_pows.push(q_pows[d as usize - 1] * q);
            count += (q + 1) * q_pows[d as usize - 1];
            if count > MAX_VERTICES {
                return Err(Error::Unsupported(format!(
                    "ball of depth {depth} around q = {q} exceeds the vertex budget"
                )));
            }
        }
        let gamma_order = ell.pow(s);
        let mut seed = 0u64;
        for c in 2..q {
            let cand = pow_mod(c, (q - 1) / gamma_order, q);
            if pow_mod(cand, gamma_order / ell, q) != 1 {
                seed = cand;
                break;
            }
        }
        assert!(seed != 0, "a cyclic group of even order has a generator");
        let modulus = q_pows[depth as usize];
        let mut generator = seed % modulus;
        for _ in 1..depth {
            generator = pow_mod(generator, q, modulus);
        }
        assert_eq!(pow_mod(generator, gamma_order, modulus), 1);
        assert_ne!(pow_mod(generator, gamma_order / ell, modulus), 1);
        let generator_inv = pow_mod(generator, gamma_order - 1, modulus);
        Ok(TreeBall {
            q,
            ell,
            r,
            s,
            depth,
            gamma: AbelianLGroup::cyclic(ell, s)?,
            gamma_order,
            coeff,
            generator,
            generator_inv,
            q_pows,
        })
    }

    /// Cohomology of the torus l-part with the configured coefficients.
    pub fn gamma_ring(&self) -> Result<CohRing> {
        CohRing::new(self.gamma.clone(), self.coeff)
    }

    pub fn base(&self) -> TreeVertex {
        TreeVertex {
            distance: 0,
            point: ProjPoint::Affine(0),
        }
    }

    pub fn vertex_count(&self) -> u64 {
        let mut count = 1;
        for d in 1..=self.depth as usize {
            count += (self.q + 1) * self.q_pows[d - 1];
        }
        count
    }

    /// Every vertex of the ball, in a fixed deterministic order.
    pub fn vertices(&self) -> Vec<TreeVertex> {
        let mut out = vec![self.base()];
        for d in 1..=self.depth {
            for a in 0..self.q_pows[d as usize] {
                out.push(TreeVertex {
                    distance: d,
                    point: ProjPoint::Affine(a),
                });
            }
            for b in 0..self.q_pows[d as usize - 1] {
                out.push(TreeVertex {
                    distance: d,
                    point: ProjPoint::Infinite(b),
                });
            }
        }
        out
    }

    /// The apartment vertex at signed position n: [0 : 1] side for n > 0,
    /// [1 : 0] side for n < 0.
    pub fn apartment_vertex(&self, n: i64) -> Result<TreeVertex> {
        if n.unsigned_abs() > self.depth as u64 {
            return Err(Error::SupportBoundExceeded {
                radius: n,
                bound: self.depth as i64,
            });
        }
        let point = if n >= 0 {
            ProjPoint::Affine(0)
        } else {
            ProjPoint::Infinite(0)
        };
        Ok(TreeVertex {
            distance: n.unsigned_abs() as u32,
            point,
        })
    }

    /// The signed apartment position of a vertex, if it lies on the
    /// standard apartment.
    pub fn apartment_position(&self, v: &TreeVertex) -> Option<i64> {
        match v.point {
            ProjPoint::Affine(0) => Some(v.distance as i64),
            ProjPoint::Infinite(0) => Some(-(v.distance as i64)),
            _ => None,
        }
    }

    fn reduction(&self, v: &TreeVertex, j: u32) -> TreeVertex {
        if j == 0 {
            return self.base();
        }
        let point = match v.point {
            ProjPoint::Affine(a) => ProjPoint::Affine(a % self.q_pows[j as usize]),
            ProjPoint::Infinite(b) => ProjPoint::Infinite(b % self.q_pows[j as usize - 1]),
        };
        TreeVertex { distance: j, point }
    }

    pub fn distance(&self, v: &TreeVertex, w: &TreeVertex) -> u32 {
        let top = v.distance.min(w.distance);
        let mut overlap = 0;
        for j in (0..=top).rev() {
            if self.reduction(v, j) == self.reduction(w, j) {
                overlap = j;
                break;
            }
        }
        v.distance + w.distance - 2 * overlap
    }

    /// The k-th power of the torus generator acting on a vertex.
    pub fn act(&self, k: u64, v: &TreeVertex) -> TreeVertex {
        let k = k % self.gamma_order;
        if v.distance == 0 {
            return *v;
        }
        let point = match v.point {
            ProjPoint::Affine(a) => {
                let m = self.q_pows[v.distance as usize];
                ProjPoint::Affine(mul_mod(pow_mod(self.generator, k, m), a, m))
            }
            ProjPoint::Infinite(b) => {
                let m = self.q_pows[v.distance as usize - 1];
                ProjPoint::Infinite(mul_mod(pow_mod(self.generator_inv, k, m), b, m))
            }
        };
        TreeVertex {
            distance: v.distance,
            point,
        }
    }

    /// The smallest vertex in the torus orbit, used as the orbit key.
    pub fn orbit_representative(&self, v: &TreeVertex) -> TreeVertex {
        let mut best = *v;
        for k in 1..self.gamma_order {
            let moved = self.act(k, v);
            if moved < best {
                best = moved;
            }
        }
        best
    }

    /// Order of the stabilizer of a vertex, by enumeration.
    pub fn stabilizer_order(&self, v: &TreeVertex) -> u64 {
        (0..self.gamma_order)
            .filter(|&k| self.act(k, v) == *v)
            .count() as u64
    }

    /// The stabilizer as ell^t, checking that the fixed exponents form the
    /// cyclic subgroup generated by ell^(s - t).
    pub fn stabilizer_log(&self, v: &TreeVertex) -> u32 {
        let order = self.stabilizer_order(v);
        let mut t = 0;
        while self.ell.pow(t + 1) <= order {
            t += 1;
        }
        assert_eq!(self.ell.pow(t), order, "stabilizer order is an l-power");
        let step = self.gamma_order / order;
        for k in 0..self.gamma_order {
            assert_eq!(
                self.act(k, v) == *v,
                k % step == 0,
                "stabilizer is the cyclic subgroup of its order"
            );
        }
        t
    }

    /// Inclusion of the stabilizer of a vertex into the full torus l-part.
    pub fn stabilizer_inclusion(&self, v: &TreeVertex) -> Result<GroupHom> {
        let t = self.stabilizer_log(v);
        let sub = if t == 0 {
            AbelianLGroup::trivial(self.ell)?
        } else {
            AbelianLGroup::cyclic(self.ell, t)?
        };
        let matrix = if t == 0 {
            vec![vec![]]
        } else {
            vec![vec![self.ell.pow(self.s - t) as i64]]
        };
        GroupHom::new(sub, self.gamma.clone(), &matrix)
    }
}

/// Pullback along inversion of the group, the twist picked up by moving a
/// pair to canonical position with an orientation-reversing isometry.
pub fn inversion_twist(a: &CohClass) -> Result<CohClass> {
    let d = a.group.num_factors();
    let mut matrix = vec![vec![0i64; d]; d];
    for (i, row) in matrix.iter_mut().enumerate() {
        row[i] = -1;
    }
    let hom = GroupHom::new(a.group.clone(), a.group.clone(), &matrix)?;
    restrict(&hom, a)
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitnessReport {
    pub q: u64,
    pub ell: u64,
    pub r: u32,
    pub depth: u32,
    pub off_apartment_vertices: usize,
    pub classes_checked: usize,
    pub all_transfers_vanish: bool,
    pub apartment_identity: bool,
    pub witness_failures: Vec<String>,
}

/// For every off-apartment vertex, corestrict each cohomology class of its
/// stabilizer (degrees 0..=3) into the full torus l-part and confirm the
/// result vanishes with Z/l^r coefficients. Apartment vertices carry the
/// full torus, where the transfer is checked to be the identity instead.
pub fn splitness_check(q: u64, ell: u64, r: u32, depth: u32) -> Result<SplitnessReport> {
    let ball = TreeBall::new(q, ell, r, depth)?;
    let gamma_ring = ball.gamma_ring()?;
    let identity = GroupHom::identity(&ball.gamma);
    let mut report = SplitnessReport {
        q,
        ell,
        r,
        depth,
        off_apartment_vertices: 0,
        classes_checked: 0,
        all_transfers_vanish: true,
        apartment_identity: true,
        witness_failures: Vec::new(),
    };
    for v in ball.vertices() {
        if ball.apartment_position(&v).is_some() {
            for degree in 0..=3usize {
                for class in gamma_ring.basis_classes(degree) {
                    report.classes_checked += 1;
                    if corestrict(&identity, &class)? != class {
                        report.apartment_identity = false;
                        report
                            .witness_failures
                            .push(format!("identity transfer moved a class at {v:?}"));
                    }
                }
            }
            continue;
        }
        report.off_apartment_vertices += 1;
        let inclusion = ball.stabilizer_inclusion(&v)?;
        let sub_ring = CohRing::new(inclusion.source.clone(), ball.coeff)?;
        for degree in 0..=3usize {
            for class in sub_ring.basis_classes(degree) {
                report.classes_checked += 1;
                let transferred = corestrict(&inclusion, &class)?;
                if !transferred.is_zero() {
                    report.all_transfers_vanish = false;
                    report.witness_failures.push(format!(
                        "nonzero transfer from the stabilizer of {v:?} in degree {degree}"
                    ));
                }
            }
        }
    }
    Ok(report)
}

/// A distance-indexed spherical element: the value assigned to the
/// canonical vertex pair at each distance, extended to all pairs by
/// equivariance. Moving a pair to canonical position with an
/// orientation-reversing apartment isometry twists the value by inversion.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleElement {
    pub ring: CohRing,
    pub values: BTreeMap<u32, CohClass>,
}

impl OracleElement {
    pub fn new(ring: &CohRing) -> OracleElement {
        OracleElement {
            ring: ring.clone(),
            values: BTreeMap::new(),
        }
    }

    pub fn set_value(&mut self, distance: u32, class: CohClass) -> Result<()> {
        if class.group != self.ring.group {
            return Err(Error::GroupMismatch(
                class.group.to_string(),
                self.ring.group.to_string(),
            ));
        }
        if class.ring != self.ring.ring {
            return Err(Error::RingMismatch(
                class.ring.to_string(),
                self.ring.ring.to_string(),
            ));
        }
        if distance == 0 && inversion_twist(&class)? != class {
            return Err(Error::NotStabilizerInvariant);
        }
        if class.is_zero() {
            self.values.remove(&distance);
        } else {
            self.values.insert(distance, class);
        }
        Ok(())
    }

    pub fn value(&self, distance: u32) -> CohClass {
        match self.values.get(&distance) {
            Some(class) => class.clone(),
            None => self.ring.zero(),
        }
    }

    pub fn max_support(&self) -> u32 {
        self.values.keys().next_back().copied().unwrap_or(0)
    }
}

/// The element supported at a single distance.
pub fn oracle_basis(ring: &CohRing, distance: u32, class: &CohClass) -> Result<OracleElement> {
    let mut out = OracleElement::new(ring);
    out.set_value(distance, class.clone())?;
    Ok(out)
}

fn transported_value(h: &OracleElement, from: i64, to: i64) -> Result<CohClass> {
    let class = h.value((to - from).unsigned_abs() as u32);
    if to >= from {
        Ok(class)
    } else {
        inversion_twist(&class)
    }
}

/// Convolve two distance-indexed elements by summing over middle vertices
/// of the ball, one term per torus orbit. An apartment middle vertex
/// contributes the cup product of the transported values. An off-apartment
/// orbit contributes the corestriction, from the stabilizer of its
/// representative up to the full torus l-part, of the product of the
/// restricted values; restriction to a trivial stabilizer keeps only the
/// degree-zero coefficient, which no transport can change, so free orbits
/// need no canonical-position bookkeeping.
///
/// Returns the value at every ordered pair of apartment positions within
/// the window.
pub fn oracle_convolve(
    ball: &TreeBall,
    h1: &OracleElement,
    h2: &OracleElement,
    window: u32,
) -> Result<BTreeMap<(i64, i64), CohClass>> {
    if h1.ring.group != ball.gamma || h2.ring.group != ball.gamma {
        return Err(Error::GroupMismatch(
            h1.ring.group.to_string(),
            ball.gamma.to_string(),
        ));
    }
    if h1.ring.ring != ball.coeff || h2.ring.ring != ball.coeff {
        return Err(Error::RingMismatch(
            h1.ring.ring.to_string(),
            ball.coeff.to_string(),
        ));
    }
    let reach = window + h1.max_support().max(h2.max_support());
    if reach > ball.depth {
        return Err(Error::SupportBoundExceeded {
            radius: reach as i64,
            bound: ball.depth as i64,
        });
    }
    let trivial = AbelianLGroup::trivial(ball.ell)?;
    let trivial_inclusion = GroupHom::new(trivial.clone(), ball.gamma.clone(), &[vec![]])?;
    let trivial_ring = CohRing::new(trivial, ball.coeff)?;
    let cores_one = corestrict(&trivial_inclusion, &trivial_ring.one())?;
    let unit_monomial = Monomial::one(ball.gamma.num_factors());

    let vertices = ball.vertices();
    let mut dist_to: BTreeMap<i64, Vec<u32>> = BTreeMap::new();
    for n in -(window as i64)..=window as i64 {
        let vn = ball.apartment_vertex(n)?;
        dist_to.insert(n, vertices.iter().map(|v| ball.distance(&vn, v)).collect());
    }

    let mut out = BTreeMap::new();
    for a in -(window as i64)..=window as i64 {
        for b in -(window as i64)..=window as i64 {
            let da = &dist_to[&a];
            let db = &dist_to[&b];
            let mut total = h1.ring.zero();
            for (idx, y) in vertices.iter().enumerate() {
                let (Some(v1), Some(v2)) = (h1.values.get(&da[idx]), h2.values.get(&db[idx]))
                else {
                    continue;
                };
                if let Some(p) = ball.apartment_position(y) {
                    let left = transported_value(h1, a, p)?;
                    let right = transported_value(h2, p, b)?;
                    total = total.add(&left.cup(&right)?)?;
                } else {
                    if ball.orbit_representative(y) != *y {
                        continue;
                    }
                    if ball.stabilizer_order(y) != 1 {
                        return Err(Error::Unsupported(
                            "off-apartment vertex with a nontrivial stabilizer; transport to \
                             canonical position is only implemented for free orbits"
                                .into(),
                        ));
                    }
                    let scalar = ball.coeff.mul(
                        v1.coefficient(&unit_monomial),
                        v2.coefficient(&unit_monomial),
                    );
                    if scalar != 0 {
                        total = total.add(&cores_one.scale(scalar))?;
                    }
                }
            }
            out.insert((a, b), total);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleModelReport {
    pub q: u64,
    pub ell: u64,
    pub r: u32,
    pub window: u32,
    pub products_checked: usize,
    pub pairs_compared: usize,
    pub matches: bool,
    pub witness_failures: Vec<String>,
}

/// Multiply every ordered pair drawn from the standard degree <= 1 basis
/// both ways: once through the toral convolution model and once through
/// the tree oracle, then compare value by value over all apartment pairs
/// in the window. The model value at displacement n is compared against
/// the oracle value at every pair (a, b) with b - a = n, so the check also
/// confirms translation invariance of the oracle output.
pub fn oracle_model_comparison(q: u64, ell: u64, r: u32, window: u32) -> Result<OracleModelReport> {
    let ball = TreeBall::new(q, ell, r, window + 1)?;
    let ring = ball.gamma_ring()?;
    let rd = RootDatum::catalog("PGL2")?;
    let basis: Vec<(&str, u32, CohClass)> = vec![
        ("unit", 0, ring.one()),
        ("t", 1, ring.one()),
        ("tx", 1, ring.x(0)),
    ];
    let mut report = OracleModelReport {
        q,
        ell,
        r,
        window,
        products_checked: 0,
        pairs_compared: 0,
        matches: true,
        witness_failures: Vec::new(),
    };
    for (name1, d1, c1) in &basis {
        let oracle1 = oracle_basis(&ring, *d1, c1)?;
        let model1 = satake_basis(&rd, &ring, &[*d1 as i64], c1)?;
        for (name2, d2, c2) in &basis {
            let oracle2 = oracle_basis(&ring, *d2, c2)?;
            let model2 = satake_basis(&rd, &ring, &[*d2 as i64], c2)?;
            let product = model1.multiply(&model2)?;
            let table = oracle_convolve(&ball, &oracle1, &oracle2, window)?;
            report.products_checked += 1;
            for ((a, b), got) in &table {
                report.pairs_compared += 1;
                let expected = product.inner().value(&[b - a]);
                if *got != expected {
                    report.matches = false;
                    report.witness_failures.push(format!(
                        "q={q} {name1}*{name2} at ({a},{b}): oracle {:?} vs model {:?}",
                        got.terms, expected.terms
                    ));
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball(q: u64, ell: u64, r: u32, depth: u32) -> TreeBall {
        TreeBall::new(q, ell, r, depth).unwrap()
    }

    fn affine(distance: u32, a: u64) -> TreeVertex {
        TreeVertex {
            distance,
            point: ProjPoint::Affine(a),
        }
    }

    fn infinite(distance: u32, b: u64) -> TreeVertex {
        TreeVertex {
            distance,
            point: ProjPoint::Infinite(b),
        }
    }

    #[test]
    fn vertex_counts_in_small_balls() {
        let b1 = ball(7, 3, 1, 1);
        assert_eq!(b1.vertex_count(), 9);
        assert_eq!(b1.vertices().len(), 9);
        let b2 = ball(7, 3, 1, 2);
        assert_eq!(b2.vertex_count(), 65);
        assert_eq!(b2.vertices().len(), 65);
        let sphere2 = b2.vertices().iter().filter(|v| v.distance == 2).count();
        assert_eq!(sphere2, 56);
        let b19 = ball(19, 3, 2, 2);
        assert_eq!(b19.vertex_count(), 401);
    }

    #[test]
    fn construction_gates() {
        assert!(matches!(TreeBall::new(6, 3, 1, 2), Err(Error::NotPrime(6))));
        assert!(matches!(
            TreeBall::new(3, 3, 1, 2),
            Err(Error::CharacteristicClash { .. })
        ));
        assert!(matches!(TreeBall::new(5, 3, 1, 2), Err(Error::Regime(_))));
        assert!(matches!(TreeBall::new(7, 3, 2, 2), Err(Error::Regime(_))));
        assert!(matches!(
            TreeBall::new(7, 3, 1, 4),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn tree_distances_on_known_pairs() {
        let b = ball(7, 3, 1, 2);
        assert_eq!(b.distance(&b.base(), &affine(2, 3)), 2);
        assert_eq!(b.distance(&affine(1, 1), &affine(2, 8)), 1);
        assert_eq!(b.distance(&affine(1, 1), &affine(1, 2)), 2);
        assert_eq!(b.distance(&affine(2, 1), &affine(2, 8)), 2);
        assert_eq!(b.distance(&affine(2, 0), &infinite(2, 0)), 4);
        assert_eq!(b.distance(&affine(2, 5), &infinite(2, 3)), 4);
        let verts = b.vertices();
        for v in &verts {
            for w in &verts {
                let d = b.distance(v, w);
                assert_eq!(d, b.distance(w, v));
                assert_eq!(d == 0, v == w);
                assert_eq!(d % 2, (v.distance + w.distance) % 2);
                for u in [b.base(), affine(1, 3), infinite(2, 4)] {
                    assert!(b.distance(v, &u) + b.distance(&u, w) >= d);
                }
            }
        }
    }

    #[test]
    fn apartment_embedding_is_geodesic() {
        let b = ball(7, 3, 1, 2);
        for n in -2i64..=2 {
            let vn = b.apartment_vertex(n).unwrap();
            assert_eq!(b.apartment_position(&vn), Some(n));
            for m in -2i64..=2 {
                let vm = b.apartment_vertex(m).unwrap();
                assert_eq!(b.distance(&vn, &vm) as i64, (n - m).abs());
            }
        }
        assert_eq!(b.apartment_position(&affine(2, 7)), None);
        assert!(matches!(
            b.apartment_vertex(3),
            Err(Error::SupportBoundExceeded { .. })
        ));
    }

    #[test]
    fn torus_action_is_isometric() {
        let b = ball(7, 3, 1, 2);
        let verts = b.vertices();
        for k in 0..b.gamma_order {
            let moved: Vec<TreeVertex> = verts.iter().map(|v| b.act(k, v)).collect();
            let mut sorted = moved.clone();
            sorted.sort();
            assert_eq!(sorted, verts, "the action permutes the ball");
            for (i, v) in verts.iter().enumerate() {
                for (j, w) in verts.iter().enumerate() {
                    assert_eq!(b.distance(v, w), b.distance(&moved[i], &moved[j]));
                }
            }
        }
        let v = affine(2, 5);
        let once = b.act(1, &v);
        let twice = b.act(1, &once);
        assert_eq!(b.act(2, &v), twice);
        assert_eq!(b.act(3, &v), v);
    }

    #[test]
    fn fixed_vertices_are_exactly_the_apartment() {
        for (q, ell, r) in [(7u64, 3u64, 1u32), (19, 3, 2)] {
            let b = ball(q, ell, r, 2);
            for v in b.vertices() {
                let fixed = (0..b.gamma_order).all(|k| b.act(k, &v) == v);
                assert_eq!(
                    fixed,
                    b.apartment_position(&v).is_some(),
                    "q={q} vertex {v:?}"
                );
            }
        }
    }

    #[test]
    fn off_apartment_stabilizers_are_trivial() {
        for (q, ell, r) in [(7u64, 3u64, 1u32), (13, 3, 1), (19, 3, 2)] {
            let b = ball(q, ell, r, 2);
            for v in b.vertices() {
                let order = b.stabilizer_order(&v);
                if b.apartment_position(&v).is_some() {
                    assert_eq!(order, b.gamma_order);
                    assert_eq!(b.stabilizer_log(&v), b.s);
                } else {
                    assert_eq!(order, 1, "q={q} vertex {v:?}");
                    assert_eq!(b.stabilizer_log(&v), 0);
                }
            }
        }
    }

    #[test]
    fn orbit_sizes_multiply_to_the_group_order() {
        let b = ball(7, 3, 1, 2);
        let mut orbit_sizes: BTreeMap<TreeVertex, u64> = BTreeMap::new();
        for v in b.vertices() {
            *orbit_sizes.entry(b.orbit_representative(&v)).or_insert(0) += 1;
        }
        let total: u64 = orbit_sizes.values().sum();
        assert_eq!(total, b.vertex_count());
        for (rep, size) in &orbit_sizes {
            assert_eq!(size * b.stabilizer_order(rep), b.gamma_order);
        }
        let sphere_one_orbits = orbit_sizes
            .keys()
            .filter(|v| v.distance == 1 && b.apartment_position(v).is_none())
            .count();
        assert_eq!(sphere_one_orbits, 2);
    }

    #[test]
    fn splitness_reports_vanishing_transfers() {
        let report = splitness_check(7, 3, 1, 2).unwrap();
        assert!(report.all_transfers_vanish);
        assert!(report.apartment_identity);
        assert!(report.witness_failures.is_empty());
        assert_eq!(report.off_apartment_vertices, 60);
        let report = splitness_check(19, 3, 2, 2).unwrap();
        assert!(report.all_transfers_vanish);
        assert!(report.apartment_identity);
        assert_eq!(report.off_apartment_vertices, 396);
    }

    #[test]
    fn identity_element_convolves_trivially() {
        let b = ball(7, 3, 1, 2);
        let ring = b.gamma_ring().unwrap();
        let unit = oracle_basis(&ring, 0, &ring.one()).unwrap();
        let h = oracle_basis(&ring, 1, &ring.x(0)).unwrap();
        let table = oracle_convolve(&b, &unit, &h, 1).unwrap();
        let mut x = ring.zero();
        x.insert(
            {
                let mut m = Monomial::one(1);
                m.x_mask = 1;
                m
            },
            1,
        );
        assert_eq!(table[&(0, 1)], x);
        assert_eq!(table[&(0, -1)], inversion_twist(&x).unwrap());
        assert_eq!(table[&(1, 0)], inversion_twist(&x).unwrap());
        assert_eq!(table[&(0, 0)], ring.zero());
        let other = oracle_convolve(&b, &h, &unit, 1).unwrap();
        assert_eq!(table, other);
    }

    #[test]
    fn degree_zero_square_reproduces_the_classical_count() {
        for (q, ell, r) in [(7u64, 3u64, 1u32), (13, 3, 1), (19, 3, 2)] {
            let b = ball(q, ell, r, 3);
            let ring = b.gamma_ring().unwrap();
            let t = oracle_basis(&ring, 1, &ring.one()).unwrap();
            let table = oracle_convolve(&b, &t, &t, 2).unwrap();
            let two = ring.one().scale(2);
            assert_eq!(table[&(0, 0)], two, "q = {q}");
            assert_eq!(table[&(0, 2)], ring.one());
            assert_eq!(table[&(0, -2)], ring.one());
            assert!(table[&(0, 1)].is_zero());
            assert!(table[&(0, -1)].is_zero());
            for ((a, bpos), value) in &table {
                if let Some(reference) = table.get(&(0, bpos - a)) {
                    assert_eq!(value, reference, "translation invariance");
                }
            }
        }
    }

    #[test]
    fn degree_one_square_vanishes() {
        let b = ball(7, 3, 1, 3);
        let ring = b.gamma_ring().unwrap();
        let hx = oracle_basis(&ring, 1, &ring.x(0)).unwrap();
        let table = oracle_convolve(&b, &hx, &hx, 2).unwrap();
        for value in table.values() {
            assert!(value.is_zero());
        }
    }

    #[test]
    fn mixed_product_keeps_the_orientation_sign() {
        let b = ball(7, 3, 1, 3);
        let ring = b.gamma_ring().unwrap();
        let t = oracle_basis(&ring, 1, &ring.one()).unwrap();
        let hx = oracle_basis(&ring, 1, &ring.x(0)).unwrap();
        let table = oracle_convolve(&b, &t, &hx, 2).unwrap();
        assert_eq!(table[&(0, 2)], ring.x(0));
        assert_eq!(table[&(0, -2)], ring.x(0).neg());
        assert!(table[&(0, 0)].is_zero());
        let reversed = oracle_convolve(&b, &hx, &t, 2).unwrap();
        assert_eq!(table, reversed);
    }

    #[test]
    fn oracle_gates() {
        let b = ball(7, 3, 1, 2);
        let ring = b.gamma_ring().unwrap();
        assert!(matches!(
            oracle_basis(&ring, 0, &ring.x(0)),
            Err(Error::NotStabilizerInvariant)
        ));
        let t = oracle_basis(&ring, 1, &ring.one()).unwrap();
        assert!(matches!(
            oracle_convolve(&b, &t, &t, 2),
            Err(Error::SupportBoundExceeded { .. })
        ));
        let other_ring = CohRing::new(b.gamma.clone(), CoeffRing::new(3, 1).unwrap()).unwrap();
        let wrong_group = CohRing::new(AbelianLGroup::cyclic(3, 2).unwrap(), b.coeff).unwrap();
        let w = oracle_basis(&wrong_group, 1, &wrong_group.one()).unwrap();
        assert!(oracle_convolve(&b, &w, &w, 1).is_err());
        drop(other_ring);
    }

    #[test]
    fn oracle_agrees_with_the_toral_model() {
        for (q, ell, r) in [(7u64, 3u64, 1u32), (13, 3, 1), (19, 3, 2)] {
            let report = oracle_model_comparison(q, ell, r, 2).unwrap();
            assert!(report.matches, "{:?}", report.witness_failures);
            assert_eq!(report.products_checked, 9);
            assert_eq!(report.pairs_compared, 9 * 25);
            assert!(report.witness_failures.is_empty());
        }
    }
}
