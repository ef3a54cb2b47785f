//! The graded-commutative ring H*(T; Z/l^r) for finite abelian l-groups T
//! with l odd and r at most every cyclic exponent, in exterior-tensor-
//! polynomial generator form: x_i in degree 1 (the identity character of the
//! i-th cyclic factor), y_i in degree 2 (the dual of the second step of that
//! factor's 2-periodic resolution, equivalently the connecting image of the
//! i-th tautological character along 0 -> Z/l^r -> Z/l^{n_i+r} -> Z/l^{n_i}
//! -> 0).
//!
//! This module is the closed-form engine: cup by the monomial sign rule,
//! restriction by matrix transport of generators extended multiplicatively,
//! corestriction by the deterministic chain-level transfer from the `chain`
//! submodule. Every operation here is cross-checked against an independent
//! chain-level computation in the test suites.

pub mod chain;

use crate::coeff::{AbelianLGroup, CoeffRing, GroupHom};
use crate::error::{Error, Result};
use crate::root_datum::{RootDatum, WeylElement};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

pub const DEFAULT_DEGREE_CAP: usize = 6;

/// A monomial x_A y^e: `x_mask` bit i set means x_i is present, `y_exp[i]` is
/// the exponent of y_i. Degree = |A| + 2 sum(e).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub x_mask: u64,
    pub y_exp: Vec<u32>,
}

impl Monomial {
    pub fn one(d: usize) -> Monomial {
        Monomial {
            x_mask: 0,
            y_exp: vec![0; d],
        }
    }

    pub fn degree(&self) -> usize {
        self.x_mask.count_ones() as usize
            + 2 * self.y_exp.iter().map(|&e| e as usize).sum::<usize>()
    }

    /// The resolution shape (per-factor homological degree) this monomial is
    /// dual to: k_i = [x_i present] + 2 e_i.
    pub fn shape(&self) -> Vec<u32> {
        self.y_exp
            .iter()
            .enumerate()
            .map(|(i, &e)| u32::from(self.x_mask >> i & 1 == 1) + 2 * e)
            .collect()
    }

    pub fn from_shape(shape: &[u32]) -> Monomial {
        let mut x_mask = 0u64;
        let mut y_exp = vec![0u32; shape.len()];
        for (i, &k) in shape.iter().enumerate() {
            if k % 2 == 1 {
                x_mask |= 1 << i;
            }
            y_exp[i] = k / 2;
        }
        Monomial { x_mask, y_exp }
    }

    pub fn x_indices(&self) -> Vec<usize> {
        (0..self.y_exp.len())
            .filter(|&i| self.x_mask >> i & 1 == 1)
            .collect()
    }
}

/// Count of exterior transpositions when moving x_B past x_A: pairs
/// (a in A, b in B) with a > b.
fn inversion_count(mask_a: u64, mask_b: u64) -> u32 {
    let mut count = 0;
    let mut a = mask_a;
    while a != 0 {
        let bit = a.trailing_zeros();
        // bits of B strictly below `bit`
        count += (mask_b & ((1u64 << bit) - 1)).count_ones();
        a &= a - 1;
    }
    count
}

/// Handle for H*(T; S): validates the regime (l odd, r <= n_i) and provides
/// generators, monomial bases, and ranks.
#[derive(Debug, Clone, PartialEq)]
pub struct CohRing {
    pub group: AbelianLGroup,
    pub ring: CoeffRing,
    pub degree_cap: usize,
}

impl CohRing {
    pub fn new(group: AbelianLGroup, ring: CoeffRing) -> Result<Self> {
        if ring.ell == 2 {
            return Err(Error::EvenPrime);
        }
        if group.ell != ring.ell {
            return Err(Error::GroupMismatch(
                group.to_string(),
                format!("coefficients {ring}"),
            ));
        }
        for &n in &group.exponents {
            if ring.r > n {
                return Err(Error::ExponentTooLarge { r: ring.r, n });
            }
        }
        if group.num_factors() > 32 {
            return Err(Error::Unsupported(
                "more than 32 cyclic factors".to_string(),
            ));
        }
        Ok(CohRing {
            group,
            ring,
            degree_cap: DEFAULT_DEGREE_CAP,
        })
    }

    pub fn with_degree_cap(mut self, cap: usize) -> Self {
        self.degree_cap = cap;
        self
    }

    /// All monomials of the given degree, in canonical (mask, exponent) order.
    pub fn monomials(&self, degree: usize) -> Vec<Monomial> {
        let d = self.group.num_factors();
        let mut out = Vec::new();
        for shape in chain::shapes(degree, d) {
            out.push(Monomial::from_shape(&shape));
        }
        out.sort();
        out
    }

    /// Free rank of H^degree over S.
    pub fn rank(&self, degree: usize) -> u64 {
        self.monomials(degree).len() as u64
    }

    pub fn zero(&self) -> CohClass {
        CohClass {
            group: self.group.clone(),
            ring: self.ring,
            degree_cap: self.degree_cap,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> CohClass {
        self.monomial_class(&Monomial::one(self.group.num_factors()), 1)
    }

    pub fn x(&self, i: usize) -> CohClass {
        assert!(i < self.group.num_factors());
        self.monomial_class(
            &Monomial {
                x_mask: 1 << i,
                y_exp: vec![0; self.group.num_factors()],
            },
            1,
        )
    }

    pub fn y(&self, i: usize) -> CohClass {
        assert!(i < self.group.num_factors());
        let mut y_exp = vec![0; self.group.num_factors()];
        y_exp[i] = 1;
        self.monomial_class(&Monomial { x_mask: 0, y_exp }, 1)
    }

    pub fn monomial_class(&self, m: &Monomial, coeff: u64) -> CohClass {
        let mut c = self.zero();
        c.insert(m.clone(), coeff as i64);
        c
    }

    /// All monomial basis classes of the degree.
    pub fn basis_classes(&self, degree: usize) -> Vec<CohClass> {
        self.monomials(degree)
            .iter()
            .map(|m| self.monomial_class(m, 1))
            .collect()
    }
}

/// An element of H*(T; S) as a finite sum of monomials with coefficients in
/// S; possibly inhomogeneous (see `homogeneous_components`).
#[derive(Debug, Clone)]
pub struct CohClass {
    pub group: AbelianLGroup,
    pub ring: CoeffRing,
    pub degree_cap: usize,
    pub terms: BTreeMap<Monomial, u64>,
}

impl PartialEq for CohClass {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.ring == other.ring && self.terms == other.terms
    }
}

impl Eq for CohClass {}

impl CohClass {
    pub fn ring_handle(&self) -> CohRing {
        CohRing {
            group: self.group.clone(),
            ring: self.ring,
            degree_cap: self.degree_cap,
        }
    }

    fn check_match(&self, other: &CohClass) -> Result<()> {
        if self.group != other.group {
            return Err(Error::GroupMismatch(
                self.group.to_string(),
                other.group.to_string(),
            ));
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch(
                self.ring.to_string(),
                other.ring.to_string(),
            ));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn insert(&mut self, m: Monomial, coeff: i64) {
        let c = self.ring.from_i64(coeff);
        let entry = self.terms.entry(m.clone()).or_insert(0);
        *entry = self.ring.add(*entry, c);
        if *entry == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> u64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// The common degree of all monomials, if homogeneous. The zero class is
    /// homogeneous of every degree; by convention it reports 0.
    pub fn degree(&self) -> Result<usize> {
        let mut deg = None;
        for m in self.terms.keys() {
            match deg {
                None => deg = Some(m.degree()),
                Some(d) if d == m.degree() => {}
                _ => return Err(Error::NotHomogeneous),
            }
        }
        Ok(deg.unwrap_or(0))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree().is_ok()
    }

    pub fn homogeneous_components(&self) -> BTreeMap<usize, CohClass> {
        let mut out: BTreeMap<usize, CohClass> = BTreeMap::new();
        for (m, &c) in &self.terms {
            let comp = out.entry(m.degree()).or_insert_with(|| CohClass {
                group: self.group.clone(),
                ring: self.ring,
                degree_cap: self.degree_cap,
                terms: BTreeMap::new(),
            });
            comp.terms.insert(m.clone(), c);
        }
        out
    }

    pub fn add(&self, other: &CohClass) -> Result<CohClass> {
        self.check_match(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.insert(m.clone(), c as i64);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &CohClass) -> Result<CohClass> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CohClass {
        self.scale_i64(-1)
    }

    pub fn scale(&self, c: u64) -> CohClass {
        let mut out = CohClass {
            group: self.group.clone(),
            ring: self.ring,
            degree_cap: self.degree_cap,
            terms: BTreeMap::new(),
        };
        for (m, &a) in &self.terms {
            let v = self.ring.mul(a, c);
            if v != 0 {
                out.terms.insert(m.clone(), v);
            }
        }
        out
    }

    pub fn scale_i64(&self, c: i64) -> CohClass {
        self.scale(self.ring.from_i64(c))
    }

    /// Cup product by the exterior sign rule: x_A y^e . x_B y^f = 0 when A
    /// and B intersect, else (-1)^{inv(A,B)} x_{A u B} y^{e+f}.
    pub fn cup(&self, other: &CohClass) -> Result<CohClass> {
        self.check_match(other)?;
        let cap = self.degree_cap.min(other.degree_cap);
        let mut out = CohClass {
            group: self.group.clone(),
            ring: self.ring,
            degree_cap: cap,
            terms: BTreeMap::new(),
        };
        for (m1, &c1) in &self.terms {
            for (m2, &c2) in &other.terms {
                if m1.x_mask & m2.x_mask != 0 {
                    continue;
                }
                let sign = inversion_count(m1.x_mask, m2.x_mask);
                let coeff = self.ring.mul(c1, c2);
                let coeff = if sign % 2 == 1 {
                    self.ring.neg(coeff)
                } else {
                    coeff
                };
                let m = Monomial {
                    x_mask: m1.x_mask | m2.x_mask,
                    y_exp: m1
                        .y_exp
                        .iter()
                        .zip(m2.y_exp.iter())
                        .map(|(&a, &b)| a + b)
                        .collect(),
                };
                let entry = out.terms.entry(m).or_insert(0);
                *entry = self.ring.add(*entry, coeff);
            }
        }
        out.terms.retain(|_, c| *c != 0);
        for m in out.terms.keys() {
            if m.degree() > cap {
                return Err(Error::DegreeCapExceeded(m.degree(), cap));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<CohClass> {
        let mut out = self.ring_handle().one();
        for _ in 0..e {
            out = out.cup(self)?;
        }
        Ok(out)
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors = Vec::new();
            if *c != 1 || m.degree() == 0 {
                factors.push(c.to_string());
            }
            for i in m.x_indices() {
                factors.push(format!("x{}", i + 1));
            }
            for (i, &e) in m.y_exp.iter().enumerate() {
                if e == 1 {
                    factors.push(format!("y{}", i + 1));
                } else if e > 1 {
                    factors.push(format!("y{}^{}", i + 1, e));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// JSON form of one monomial term.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CohTermJson {
    pub x_indices: Vec<usize>,
    pub y_exponents: Vec<u32>,
    pub coeff: u64,
}

pub fn class_to_json(a: &CohClass) -> Vec<CohTermJson> {
    a.terms
        .iter()
        .map(|(m, &c)| CohTermJson {
            x_indices: m.x_indices(),
            y_exponents: m.y_exp.clone(),
            coeff: c,
        })
        .collect()
}

pub fn class_from_json(ring: &CohRing, terms: &[CohTermJson]) -> Result<CohClass> {
    let d = ring.group.num_factors();
    let mut out = ring.zero();
    for t in terms {
        if t.y_exponents.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "y_exponents length {} for a group with {} factors",
                t.y_exponents.len(),
                d
            )));
        }
        let mut mask = 0u64;
        for &i in &t.x_indices {
            if i >= d {
                return Err(Error::DimensionMismatch(format!(
                    "x index {i} out of range for {d} factors"
                )));
            }
            if mask >> i & 1 == 1 {
                return Err(Error::Parse(format!("repeated x index {i}")));
            }
            mask |= 1 << i;
        }
        out.insert(
            Monomial {
                x_mask: mask,
                y_exp: t.y_exponents.clone(),
            },
            t.coeff as i64,
        );
    }
    Ok(out)
}

/// Restriction along f: T' -> T, a ring homomorphism H*(T) -> H*(T').
///
/// On generators (f given by matrix M with f(e'_j) = sum_i M_ij e_i):
///   Res(x_i) = sum_j M_ij x'_j
///   Res(y_i) = sum_j (M_ij l^{n'_j - n_i}) y'_j
/// where the y-coefficient is the exact integer transport of the periodicity
/// generator (integral because the hom respects factor orders), and the map
/// extends multiplicatively. Cross-check: chain::oracle_restrict.
pub fn restrict(f: &GroupHom, a: &CohClass) -> Result<CohClass> {
    if f.target != a.group {
        return Err(Error::GroupMismatch(
            f.target.to_string(),
            a.group.to_string(),
        ));
    }
    let source_ring = CohRing::new(f.source.clone(), a.ring)?.with_degree_cap(a.degree_cap);
    let ell = a.ring.ell;
    let d_t = f.target.num_factors();
    let d_s = f.source.num_factors();

    let mut res_x: Vec<CohClass> = Vec::with_capacity(d_t);
    let mut res_y: Vec<CohClass> = Vec::with_capacity(d_t);
    for i in 0..d_t {
        let n_i = f.target.exponents[i];
        let mut xi = source_ring.zero();
        let mut yi = source_ring.zero();
        for j in 0..d_s {
            let n_j = f.source.exponents[j];
            let entry = f.matrix[i][j];
            let cx = a.ring.reduce_u64(entry);
            if cx != 0 {
                let mut m = Monomial::one(d_s);
                m.x_mask = 1 << j;
                xi.insert(m, cx as i64);
            }
            let cy = if n_j >= n_i {
                let pow = ell.pow(n_j - n_i) as u128;
                a.ring
                    .reduce_u64(((entry as u128 * pow) % a.ring.modulus as u128) as u64)
            } else {
                let div = ell.pow(n_i - n_j);
                debug_assert_eq!(entry % div, 0, "hom validity guarantees divisibility");
                a.ring.reduce_u64(entry / div)
            };
            if cy != 0 {
                let mut m = Monomial::one(d_s);
                m.y_exp[j] = 1;
                yi.insert(m, cy as i64);
            }
        }
        res_x.push(xi);
        res_y.push(yi);
    }

    let mut out = source_ring.zero();
    for (m, &c) in &a.terms {
        let mut image = source_ring.one().scale(c);
        for i in m.x_indices() {
            image = image.cup(&res_x[i])?;
        }
        for (i, &e) in m.y_exp.iter().enumerate() {
            for _ in 0..e {
                image = image.cup(&res_y[i])?;
            }
        }
        out = out.add(&image)?;
    }
    Ok(out)
}

/// Corestriction (transfer) along an injective f: T' -> T, additive, computed
/// by the deterministic chain-level transfer: sum over a canonical coset
/// transversal of the cochain pulled through the canonical comparison map
/// P(T)|_{T'} -> P(T') built from the contracting homotopy.
///
/// Satisfies Cores(Res(a)) = [T:T'] a and the projection formula
/// Cores(Res(a) u b) = a u Cores(b); independently cross-checked by the
/// solver-built comparison in chain::oracle_corestrict.
pub fn corestrict(f: &GroupHom, a: &CohClass) -> Result<CohClass> {
    chain::transfer(f, a, chain::LiftMode::Homotopy)
}

/// Coefficient reduction H*(T; Z/l^r) -> H*(T; Z/l^{r'}), r' <= r: a
/// surjective ring homomorphism sending generators to generators.
pub fn coeff_change(a: &CohClass, target: CoeffRing) -> Result<CohClass> {
    if target.ell != a.ring.ell {
        return Err(Error::RingMismatch(a.ring.to_string(), target.to_string()));
    }
    if target.r > a.ring.r {
        return Err(Error::Unsupported(format!(
            "coefficient change must not increase precision ({} to {})",
            a.ring, target
        )));
    }
    let ring = CohRing::new(a.group.clone(), target)?.with_degree_cap(a.degree_cap);
    let mut out = ring.zero();
    for (m, &c) in &a.terms {
        out.insert(m.clone(), target.reduce_u64(c) as i64);
    }
    Ok(out)
}

/// The l-part of the split torus points: (Z/l^n)^rank with n = v_l(q-1)
/// taken uniformly across coordinates.
pub fn torus_group(rd: &RootDatum, ell: u64, n: u32) -> Result<AbelianLGroup> {
    AbelianLGroup::new(ell, vec![n; rd.rank])
}

/// The endomorphism of the torus l-part given by a Weyl element's integer
/// matrix on the cocharacter lattice.
pub fn weyl_hom(rd: &RootDatum, w: WeylElement, group: &AbelianLGroup) -> Result<GroupHom> {
    if group.num_factors() != rd.rank {
        return Err(Error::DimensionMismatch(format!(
            "group has {} factors, root datum rank {}",
            group.num_factors(),
            rd.rank
        )));
    }
    if group.exponents.iter().any(|&n| n != group.exponents[0]) {
        return Err(Error::Unsupported(
            "torus factors must share one exponent".to_string(),
        ));
    }
    GroupHom::new(group.clone(), group.clone(), rd.weyl_matrix(w))
}

/// Contravariant Weyl action on H*(T): weyl_act(w) = restriction along w's
/// matrix, so (w1 w2)* = w2* o w1*.
pub fn weyl_act(rd: &RootDatum, w: WeylElement, a: &CohClass) -> Result<CohClass> {
    let hom = weyl_hom(rd, w, &a.group)?;
    restrict(&hom, a)
}

/// The left Weyl action w . a := weyl_act(w^{-1}, a), satisfying
/// (w1 w2) . a = w1 . (w2 . a). Spherical invariance is stated with this
/// action.
pub fn weyl_left_act(rd: &RootDatum, w: WeylElement, a: &CohClass) -> Result<CohClass> {
    weyl_act(rd, rd.weyl_inverse(w), a)
}

/// Expand a homogeneous class in the monomial basis of its degree.
pub fn class_to_vec(ring: &CohRing, a: &CohClass, degree: usize) -> Result<Vec<u64>> {
    for m in a.terms.keys() {
        if m.degree() != degree {
            return Err(Error::NotHomogeneous);
        }
    }
    Ok(ring
        .monomials(degree)
        .iter()
        .map(|m| a.coefficient(m))
        .collect())
}

pub fn vec_to_class(ring: &CohRing, v: &[u64], degree: usize) -> CohClass {
    let monos = ring.monomials(degree);
    assert_eq!(monos.len(), v.len());
    let mut out = ring.zero();
    for (m, &c) in monos.iter().zip(v.iter()) {
        out.insert(m.clone(), c as i64);
    }
    out
}
