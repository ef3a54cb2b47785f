//! The derived Hecke algebra of a split torus, S[X_*] tensor H*(T; S), with
//! its Weyl action, and the W-invariant subalgebra that the spherical Hecke
//! algebra restricts onto. Elements are finitely supported functions from
//! the cocharacter lattice to cohomology classes; the product convolves the
//! lattice variable and cups the class variable. The invariant subalgebra
//! is represented directly here and independently cross-checked against
//! building-level convolution in the tree module.

use crate::cohomology::{
    class_from_json, class_to_json, weyl_left_act, CohClass, CohRing, CohTermJson,
};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::root_datum::{RootDatum, WeylElement};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// A finitely supported function X_* -> H*(T; S).
#[derive(Debug, Clone)]
pub struct ToralElement {
    pub rd: RootDatum,
    pub ring: CohRing,
    pub support: BTreeMap<Vec<i64>, CohClass>,
}

impl PartialEq for ToralElement {
    fn eq(&self, other: &Self) -> bool {
        self.rd.name == other.rd.name && self.ring == other.ring && self.support == other.support
    }
}

impl Eq for ToralElement {}

impl ToralElement {
    pub fn zero(rd: &RootDatum, ring: &CohRing) -> Result<Self> {
        if ring.group.num_factors() != rd.rank {
            return Err(Error::DimensionMismatch(format!(
                "torus has {} factors, root datum rank {}",
                ring.group.num_factors(),
                rd.rank
            )));
        }
        Ok(ToralElement {
            rd: rd.clone(),
            ring: ring.clone(),
            support: BTreeMap::new(),
        })
    }

    pub fn delta(
        rd: &RootDatum,
        ring: &CohRing,
        coweight: &[i64],
        class: CohClass,
    ) -> Result<Self> {
        let mut out = ToralElement::zero(rd, ring)?;
        out.set_value(coweight, class)?;
        Ok(out)
    }

    pub fn set_value(&mut self, coweight: &[i64], class: CohClass) -> Result<()> {
        if coweight.len() != self.rd.rank {
            return Err(Error::DimensionMismatch(format!(
                "coweight length {} for rank {}",
                coweight.len(),
                self.rd.rank
            )));
        }
        if class.group != self.ring.group || class.ring != self.ring.ring {
            return Err(Error::GroupMismatch(
                class.group.to_string(),
                self.ring.group.to_string(),
            ));
        }
        if class.is_zero() {
            self.support.remove(coweight);
        } else {
            self.support.insert(coweight.to_vec(), class);
        }
        Ok(())
    }

    pub fn value(&self, coweight: &[i64]) -> CohClass {
        self.support
            .get(coweight)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    fn check_match(&self, other: &ToralElement) -> Result<()> {
        if self.rd.name != other.rd.name {
            return Err(Error::GroupMismatch(
                self.rd.name.clone(),
                other.rd.name.clone(),
            ));
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch(
                self.ring.ring.to_string(),
                other.ring.ring.to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &ToralElement) -> Result<ToralElement> {
        self.check_match(other)?;
        let mut out = self.clone();
        for (lam, v) in &other.support {
            let sum = out.value(lam).add(v)?;
            out.set_value(lam, sum)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ToralElement) -> Result<ToralElement> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ToralElement {
        self.scale_i64(-1)
    }

    pub fn scale(&self, c: u64) -> ToralElement {
        let mut out = ToralElement {
            rd: self.rd.clone(),
            ring: self.ring.clone(),
            support: BTreeMap::new(),
        };
        for (lam, v) in &self.support {
            let scaled = v.scale(c);
            if !scaled.is_zero() {
                out.support.insert(lam.clone(), scaled);
            }
        }
        out
    }

    pub fn scale_i64(&self, c: i64) -> ToralElement {
        self.scale(self.ring.ring.from_i64(c))
    }

    /// Largest sup-norm over the support (0 for the zero element).
    pub fn support_radius(&self) -> i64 {
        self.support
            .keys()
            .flat_map(|lam| lam.iter().map(|&c| c.abs()))
            .max()
            .unwrap_or(0)
    }

    /// The common cohomological degree of all values, if homogeneous.
    pub fn degree(&self) -> Result<usize> {
        let mut deg = None;
        for v in self.support.values() {
            let d = v.degree()?;
            match deg {
                None => deg = Some(d),
                Some(existing) if existing == d => {}
                _ => return Err(Error::NotHomogeneous),
            }
        }
        Ok(deg.unwrap_or(0))
    }

    /// The left Weyl action (w . a)(lambda) = w . a(w^{-1} lambda), a ring
    /// automorphism of the toral algebra.
    pub fn weyl_act(&self, w: WeylElement) -> Result<ToralElement> {
        let mut out = ToralElement {
            rd: self.rd.clone(),
            ring: self.ring.clone(),
            support: BTreeMap::new(),
        };
        for (lam, v) in &self.support {
            let moved = self.rd.weyl_apply(w, lam);
            let acted = weyl_left_act(&self.rd, w, v)?;
            out.set_value(&moved, acted)?;
        }
        Ok(out)
    }

    /// Invariance under the full Weyl group: value(w lambda) = w . value(lambda).
    pub fn is_weyl_invariant(&self) -> Result<bool> {
        for i in 0..self.rd.simple.len() {
            let s = self.rd.weyl_from_word(&[i])?;
            if self.weyl_act(s)? != *self {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> ToralElementJson {
        ToralElementJson {
            support: self
                .support
                .iter()
                .map(|(lam, v)| SupportTermJson {
                    coweight: lam.clone(),
                    class: class_to_json(v),
                })
                .collect(),
        }
    }

    pub fn from_json(rd: &RootDatum, ring: &CohRing, json: &ToralElementJson) -> Result<Self> {
        let mut out = ToralElement::zero(rd, ring)?;
        for term in &json.support {
            let class = class_from_json(ring, &term.class)?;
            let prev = out.value(&term.coweight);
            out.set_value(&term.coweight, prev.add(&class)?)?;
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SupportTermJson {
    pub coweight: Vec<i64>,
    pub class: Vec<CohTermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToralElementJson {
    pub support: Vec<SupportTermJson>,
}

/// Convolution over the lattice with cup product on values:
/// (a*b)(lambda) = sum over mu + nu = lambda of a(mu) cup b(nu).
pub fn toral_convolve(a: &ToralElement, b: &ToralElement) -> Result<ToralElement> {
    a.check_match(b)?;
    let mut out = ToralElement::zero(&a.rd, &a.ring)?;
    for (mu, u) in &a.support {
        for (nu, v) in &b.support {
            let lam: Vec<i64> = mu.iter().zip(nu.iter()).map(|(&x, &y)| x + y).collect();
            let prod = u.cup(v)?;
            if prod.is_zero() {
                continue;
            }
            let acc = out.value(&lam).add(&prod)?;
            out.set_value(&lam, acc)?;
        }
    }
    Ok(out)
}

/// Convolution with an explicit support bound; the exact result is computed
/// first and rejected if it spills past the bound.
pub fn toral_convolve_bounded(
    a: &ToralElement,
    b: &ToralElement,
    support_bound: i64,
) -> Result<ToralElement> {
    let out = toral_convolve(a, b)?;
    let radius = out.support_radius();
    if radius > support_bound {
        return Err(Error::SupportBoundExceeded {
            radius,
            bound: support_bound,
        });
    }
    Ok(out)
}

/// A Weyl-invariant toral element: the computational face of the spherical
/// Hecke algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphericalElement(ToralElement);

impl SphericalElement {
    pub fn new(inner: ToralElement) -> Result<Self> {
        if !inner.is_weyl_invariant()? {
            return Err(Error::NotWeylInvariant);
        }
        Ok(SphericalElement(inner))
    }

    pub fn inner(&self) -> &ToralElement {
        &self.0
    }

    pub fn into_inner(self) -> ToralElement {
        self.0
    }

    pub fn multiply(&self, other: &SphericalElement) -> Result<SphericalElement> {
        SphericalElement::new(toral_convolve(&self.0, &other.0)?)
    }

    pub fn multiply_bounded(
        &self,
        other: &SphericalElement,
        support_bound: i64,
    ) -> Result<SphericalElement> {
        SphericalElement::new(toral_convolve_bounded(&self.0, &other.0, support_bound)?)
    }

    pub fn add(&self, other: &SphericalElement) -> Result<SphericalElement> {
        Ok(SphericalElement(self.0.add(&other.0)?))
    }

    pub fn scale(&self, c: u64) -> SphericalElement {
        SphericalElement(self.0.scale(c))
    }

    pub fn to_json(&self) -> ToralElementJson {
        self.0.to_json()
    }
}

/// The basis element supported on one dominant orbit: value alpha at lambda,
/// value w . alpha at w lambda. Well-defined exactly when alpha is fixed by
/// the stabilizer of lambda.
pub fn satake_basis(
    rd: &RootDatum,
    ring: &CohRing,
    coweight: &[i64],
    alpha: &CohClass,
) -> Result<SphericalElement> {
    if !rd.is_dominant(coweight) {
        return Err(Error::NotDominant(coweight.to_vec()));
    }
    for u in rd.stabilizer(coweight) {
        if weyl_left_act(rd, u, alpha)? != *alpha {
            return Err(Error::NotStabilizerInvariant);
        }
    }
    let mut out = ToralElement::zero(rd, ring)?;
    for w in rd.weyl_elements() {
        let mu = rd.weyl_apply(w, coweight);
        if out.support.contains_key(&mu) {
            continue;
        }
        out.set_value(&mu, weyl_left_act(rd, w, alpha)?)?;
    }
    SphericalElement::new(out)
}

/// The averaging projector (1/|W|) sum of w . a onto invariants.
pub fn symmetrize(a: &ToralElement) -> Result<SphericalElement> {
    let order = a.rd.weyl_order() as u64;
    let inv = a.ring.ring.inv(a.ring.ring.reduce_u64(order))?;
    let mut acc = ToralElement::zero(&a.rd, &a.ring)?;
    for w in a.rd.weyl_elements() {
        acc = acc.add(&a.weyl_act(w)?)?;
    }
    SphericalElement::new(acc.scale(inv))
}

/// Ranks of the W-invariant subspace, tabulated by nested support shell and
/// cohomological degree. Shell s is the W-orbit closure of the sup-norm ball
/// of radius s; entry [s][k] is the rank of invariant functions supported on
/// shell s with values in H^k.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantDims {
    pub support_bound: i64,
    pub degree_bound: usize,
    /// ranks[s][k] for s in 0..=support_bound, k in 0..=degree_bound.
    pub ranks: Vec<Vec<u64>>,
}

impl InvariantDims {
    /// The top-shell rank in one degree.
    pub fn total(&self, degree: usize) -> u64 {
        self.ranks[self.support_bound as usize][degree]
    }
}

/// All lattice points of sup-norm at most `radius`, closed under W.
pub fn shell_points(rd: &RootDatum, radius: i64) -> Vec<Vec<i64>> {
    let mut box_points = vec![vec![]];
    for _ in 0..rd.rank {
        let mut next = Vec::new();
        for p in &box_points {
            for c in -radius..=radius {
                let mut q = p.clone();
                q.push(c);
                next.push(q);
            }
        }
        box_points = next;
    }
    let mut closed: BTreeSet<Vec<i64>> = BTreeSet::new();
    for p in box_points {
        for q in rd.orbit(&p) {
            closed.insert(q);
        }
    }
    closed.into_iter().collect()
}

/// Exact ranks of invariants via the averaging idempotent: over S the
/// invariants are the image of (1/|W|) sum of the action matrices, a
/// projector with free image, so the rank equals the residue rank.
pub fn invariant_dims(
    rd: &RootDatum,
    ring: &CohRing,
    support_bound: i64,
    degree_bound: usize,
) -> Result<InvariantDims> {
    if ring.group.num_factors() != rd.rank {
        return Err(Error::DimensionMismatch(format!(
            "torus has {} factors, root datum rank {}",
            ring.group.num_factors(),
            rd.rank
        )));
    }
    let s = ring.ring;
    let w_inv = s.inv(s.reduce_u64(rd.weyl_order() as u64))?;
    let mut ranks = Vec::new();
    for shell in 0..=support_bound {
        let points = shell_points(rd, shell);
        let point_index: BTreeMap<Vec<i64>, usize> = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let mut row = Vec::new();
        for degree in 0..=degree_bound {
            let monos = ring.monomials(degree);
            let dim = points.len() * monos.len();
            if dim == 0 {
                row.push(0);
                continue;
            }
            let mut avg = Mat::zeros(s, dim, dim);
            for w in rd.weyl_elements() {
                for (pi, p) in points.iter().enumerate() {
                    let wp = rd.weyl_apply(w, p);
                    let target = point_index[&wp];
                    for (mi, m) in monos.iter().enumerate() {
                        let acted = weyl_left_act(rd, w, &ring.monomial_class(m, 1))?;
                        for (m2, &c) in &acted.terms {
                            let m2_idx = monos
                                .iter()
                                .position(|cand| cand == m2)
                                .expect("degree-preserving action");
                            let row_idx = target * monos.len() + m2_idx;
                            let col_idx = pi * monos.len() + mi;
                            let prev = avg.get(row_idx, col_idx);
                            avg.set(row_idx, col_idx, s.add(prev, c));
                        }
                    }
                }
            }
            let avg = avg.scale(w_inv);
            row.push(avg.rank_mod_ell() as u64);
        }
        ranks.push(row);
    }
    Ok(InvariantDims {
        support_bound,
        degree_bound,
        ranks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{AbelianLGroup, CoeffRing};

    fn pgl2_setup() -> (RootDatum, CohRing) {
        let rd = RootDatum::catalog("PGL2").unwrap();
        let group = AbelianLGroup::cyclic(3, 1).unwrap();
        let ring = CohRing::new(group, CoeffRing::new(3, 1).unwrap()).unwrap();
        (rd, ring)
    }

    #[test]
    fn group_algebra_convolution() {
        let (rd, ring) = pgl2_setup();
        let one = ring.one();
        let a = ToralElement::delta(&rd, &ring, &[1], one.clone()).unwrap();
        let b = ToralElement::delta(&rd, &ring, &[-1], one.clone()).unwrap();
        let prod = toral_convolve(&a, &b).unwrap();
        assert_eq!(prod, ToralElement::delta(&rd, &ring, &[0], one).unwrap());
    }

    #[test]
    fn symmetrized_delta_squared() {
        let (rd, ring) = pgl2_setup();
        let one = ring.one();
        let mut h = ToralElement::zero(&rd, &ring).unwrap();
        h.set_value(&[1], one.clone()).unwrap();
        h.set_value(&[-1], one.clone()).unwrap();
        let sq = toral_convolve(&h, &h).unwrap();
        let mut expected = ToralElement::zero(&rd, &ring).unwrap();
        expected.set_value(&[2], one.clone()).unwrap();
        expected.set_value(&[-2], one.clone()).unwrap();
        expected.set_value(&[0], one.scale(2)).unwrap();
        assert_eq!(sq, expected);
    }

    #[test]
    fn degree_one_square_vanishes() {
        let (rd, ring) = pgl2_setup();
        let a = ToralElement::delta(&rd, &ring, &[0], ring.x(0)).unwrap();
        assert!(toral_convolve(&a, &a).unwrap().is_zero());
    }

    #[test]
    fn satake_basis_examples() {
        let (rd, ring) = pgl2_setup();
        let id = satake_basis(&rd, &ring, &[0], &ring.one()).unwrap();
        assert_eq!(
            id.inner(),
            &ToralElement::delta(&rd, &ring, &[0], ring.one()).unwrap()
        );

        let h = satake_basis(&rd, &ring, &[1], &ring.x(0)).unwrap();
        assert_eq!(h.inner().value(&[1]), ring.x(0));
        assert_eq!(h.inner().value(&[-1]), ring.x(0).neg());

        assert_eq!(
            satake_basis(&rd, &ring, &[0], &ring.x(0)),
            Err(Error::NotStabilizerInvariant)
        );
        assert_eq!(
            satake_basis(&rd, &ring, &[-1], &ring.one()),
            Err(Error::NotDominant(vec![-1]))
        );
    }

    #[test]
    fn satake_identity_is_two_sided() {
        let (rd, ring) = pgl2_setup();
        let id = satake_basis(&rd, &ring, &[0], &ring.one()).unwrap();
        for h in [
            satake_basis(&rd, &ring, &[1], &ring.one()).unwrap(),
            satake_basis(&rd, &ring, &[1], &ring.x(0)).unwrap(),
            satake_basis(&rd, &ring, &[2], &ring.y(0)).unwrap(),
        ] {
            assert_eq!(id.multiply(&h).unwrap(), h);
            assert_eq!(h.multiply(&id).unwrap(), h);
        }
    }

    #[test]
    fn symmetrize_examples() {
        let (rd, ring) = pgl2_setup();
        let one = ring.one();
        let d = ToralElement::delta(&rd, &ring, &[1], one.clone()).unwrap();
        let sym = symmetrize(&d).unwrap();
        // One half is 2 mod 3.
        let mut expected = ToralElement::zero(&rd, &ring).unwrap();
        expected.set_value(&[1], one.scale(2)).unwrap();
        expected.set_value(&[-1], one.scale(2)).unwrap();
        assert_eq!(sym.inner(), &expected);

        let again = symmetrize(sym.inner()).unwrap();
        assert_eq!(again, sym);

        let dx = ToralElement::delta(&rd, &ring, &[0], ring.x(0)).unwrap();
        assert!(symmetrize(&dx).unwrap().inner().is_zero());
    }

    #[test]
    fn symmetrize_needs_invertible_weyl_order() {
        // SL3 has |W| = 6, not invertible mod 3.
        let rd = RootDatum::catalog("SL3").unwrap();
        let group = AbelianLGroup::new(3, vec![1, 1]).unwrap();
        let ring = CohRing::new(group, CoeffRing::new(3, 1).unwrap()).unwrap();
        let d = ToralElement::delta(&rd, &ring, &[0, 0], ring.one()).unwrap();
        assert!(matches!(symmetrize(&d), Err(Error::NotAUnit { .. })));
    }

    #[test]
    fn spherical_constructor_rejects_asymmetric_support() {
        let (rd, ring) = pgl2_setup();
        let d = ToralElement::delta(&rd, &ring, &[1], ring.one()).unwrap();
        assert_eq!(SphericalElement::new(d), Err(Error::NotWeylInvariant));
    }

    #[test]
    fn spherical_products_stay_invariant() {
        let (rd, ring) = pgl2_setup();
        let h1 = satake_basis(&rd, &ring, &[1], &ring.one()).unwrap();
        let hx = satake_basis(&rd, &ring, &[1], &ring.x(0)).unwrap();
        let prod = h1.multiply(&hx).unwrap();
        assert!(prod.inner().is_weyl_invariant().unwrap());
        // h_{mu,1} * h_{mu,x} = delta_{2mu} x - delta_{-2mu} x (the
        // cross terms at 0 cancel: x + (-x)).
        assert_eq!(prod.inner().value(&[2]), ring.x(0));
        assert_eq!(prod.inner().value(&[-2]), ring.x(0).neg());
        assert!(prod.inner().value(&[0]).is_zero());
    }

    #[test]
    fn graded_anticommutativity_of_degree_one() {
        let (rd, ring) = pgl2_setup();
        let hx = satake_basis(&rd, &ring, &[1], &ring.x(0)).unwrap();
        let hx2 = satake_basis(&rd, &ring, &[2], &ring.x(0)).unwrap();
        let ab = hx.multiply(&hx2).unwrap();
        let ba = hx2.multiply(&hx).unwrap();
        assert_eq!(ab.inner(), &ba.inner().neg());
        // Degree-1 self-square vanishes.
        assert!(hx.multiply(&hx).unwrap().inner().is_zero());
    }

    #[test]
    fn convolve_bounded_gates_support() {
        let (rd, ring) = pgl2_setup();
        let h = satake_basis(&rd, &ring, &[2], &ring.one()).unwrap();
        let err = toral_convolve_bounded(h.inner(), h.inner(), 3).unwrap_err();
        assert_eq!(
            err,
            Error::SupportBoundExceeded {
                radius: 4,
                bound: 3
            }
        );
        assert!(toral_convolve_bounded(h.inner(), h.inner(), 4).is_ok());
    }

    #[test]
    fn invariant_dims_pgl2_table() {
        let (rd, ring) = pgl2_setup();
        for n in 2..=3 {
            let dims = invariant_dims(&rd, &ring, n, 2).unwrap();
            assert_eq!(dims.total(0), n as u64 + 1);
            assert_eq!(dims.total(1), n as u64);
            assert_eq!(dims.total(2), n as u64);
        }
        // Shell rows are nested and increase one step at a time.
        let dims = invariant_dims(&rd, &ring, 3, 2).unwrap();
        assert_eq!(
            dims.ranks,
            vec![vec![1, 0, 0], vec![2, 1, 1], vec![3, 2, 2], vec![4, 3, 3]]
        );
    }

    #[test]
    fn invariant_dims_sl2_matches_pgl2_counts() {
        // SL2 coroot lattice with the same involution gives the same table.
        let rd = RootDatum::catalog("SL2").unwrap();
        let group = AbelianLGroup::cyclic(5, 1).unwrap();
        let ring = CohRing::new(group, CoeffRing::new(5, 1).unwrap()).unwrap();
        let dims = invariant_dims(&rd, &ring, 2, 2).unwrap();
        assert_eq!(dims.ranks[2], vec![3, 2, 2]);
    }

    #[test]
    fn sl3_orbit_basis_element() {
        let rd = RootDatum::catalog("SL3").unwrap();
        let group = AbelianLGroup::new(5, vec![1, 1]).unwrap();
        let ring = CohRing::new(group, CoeffRing::new(5, 1).unwrap()).unwrap();
        let h = satake_basis(&rd, &ring, &[1, 1], &ring.one()).unwrap();
        // Regular dominant coweight: support is the full 6-element orbit.
        assert_eq!(h.inner().support.len(), 6);
        let sq = h.multiply(&h).unwrap();
        assert!(sq.inner().is_weyl_invariant().unwrap());
        assert_eq!(sq.inner().value(&[2, 2]), ring.one());
        // The origin coefficient counts orbit pairs summing to zero: each of
        // the 6 points pairs with its negative (w0 = -1 on the lattice).
        assert_eq!(sq.inner().value(&[0, 0]), ring.one().scale(6));
    }

    #[test]
    fn json_round_trip() {
        let (rd, ring) = pgl2_setup();
        let h = satake_basis(&rd, &ring, &[1], &ring.x(0)).unwrap();
        let json = h.to_json();
        let back = ToralElement::from_json(&rd, &ring, &json).unwrap();
        assert_eq!(&back, h.inner());
        let text = serde_json::to_string(&json).unwrap();
        let parsed: ToralElementJson = serde_json::from_str(&text).unwrap();
        let back2 = ToralElement::from_json(&rd, &ring, &parsed).unwrap();
        assert_eq!(&back2, h.inner());
    }
}
