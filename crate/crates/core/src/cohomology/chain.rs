//! Chain-level computations behind H*(T; S): the standard 2-periodic
//! resolution of S over S[Z/l^n], tensored across cyclic factors, with an
//! explicit contracting homotopy. Everything the closed-form engine asserts
//! is recomputed here from first principles:
//!
//!   * restriction as an honest chain map lifted through the homotopy,
//!   * cup products as composition of lifted cochains,
//!   * corestriction as the chain-level transfer over a coset transversal,
//!     with the comparison map built either from the homotopy or from a
//!     Smith-form solver (two independent routes).
//!
//! On trivial coefficients every differential of the dual complex vanishes
//! (t - 1 acts as 0 and the norm acts as l^{n_i} = 0 since r <= n_i), so
//! every cochain is a cocycle and no computed class depends on the choices
//! made inside the lifts.

use super::{CohClass, CohRing, Monomial};
use crate::coeff::{AbelianLGroup, CoeffRing, GroupHom};
use crate::error::{Error, Result};
use crate::linalg::{Mat, SnfSolver};
use std::collections::BTreeMap;

/// All d-tuples of nonnegative integers summing to `degree`, in
/// lexicographic order of the tuple.
pub fn shapes(degree: usize, d: usize) -> Vec<Vec<u32>> {
    if d == 0 {
        return if degree == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=degree {
        for mut rest in shapes(degree - first, d - 1) {
            let mut s = Vec::with_capacity(d);
            s.push(first as u32);
            s.append(&mut rest);
            out.push(s);
        }
    }
    out
}

/// An element of the tensor resolution in one homological degree: a sum of
/// basis elements keyed by (per-factor degrees, group translate). Zero
/// elements compare equal whatever degree they are tagged with.
#[derive(Debug, Clone)]
pub struct ChainElement {
    pub degree: usize,
    pub terms: BTreeMap<(Vec<u32>, Vec<u64>), u64>,
}

impl PartialEq for ChainElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && (self.terms.is_empty() || self.degree == other.degree)
    }
}

impl Eq for ChainElement {}

impl ChainElement {
    pub fn zero(degree: usize) -> Self {
        ChainElement {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// The 2-periodic tensor resolution of S over S[T]: factor i contributes
/// generators e_0, e_1, e_2, ... with d(e_{2j+1}) = (t_i - 1) e_{2j} and
/// d(e_{2j}) = N_i e_{2j-1}, N_i the norm element.
#[derive(Debug, Clone)]
pub struct Resolution {
    pub group: AbelianLGroup,
    pub ring: CoeffRing,
}

impl Resolution {
    pub fn new(group: AbelianLGroup, ring: CoeffRing) -> Self {
        Resolution { group, ring }
    }

    pub fn basis(&self, shape: &[u32], g: &[i64]) -> ChainElement {
        assert_eq!(shape.len(), self.group.num_factors());
        let degree = shape.iter().map(|&k| k as usize).sum();
        let mut e = ChainElement::zero(degree);
        e.terms.insert(
            (shape.to_vec(), self.group.reduce(g)),
            1 % self.ring.modulus,
        );
        e
    }

    fn add_term(&self, acc: &mut ChainElement, shape: Vec<u32>, g: Vec<u64>, c: u64) {
        if c == 0 {
            return;
        }
        let key = (shape, g);
        let entry = acc.terms.entry(key.clone()).or_insert(0);
        *entry = self.ring.add(*entry, c);
        if *entry == 0 {
            acc.terms.remove(&key);
        }
    }

    pub fn add(&self, a: &ChainElement, b: &ChainElement) -> ChainElement {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        assert_eq!(a.degree, b.degree);
        let mut out = a.clone();
        for ((shape, g), &c) in &b.terms {
            self.add_term(&mut out, shape.clone(), g.clone(), c);
        }
        out
    }

    pub fn add_scaled(&self, acc: &mut ChainElement, elt: &ChainElement, c: u64) {
        if c == 0 || elt.is_zero() {
            return;
        }
        if acc.is_zero() {
            acc.degree = elt.degree;
        }
        assert_eq!(acc.degree, elt.degree);
        for ((shape, g), &a) in &elt.terms {
            self.add_term(acc, shape.clone(), g.clone(), self.ring.mul(a, c));
        }
    }

    pub fn scale(&self, a: &ChainElement, c: u64) -> ChainElement {
        let mut out = ChainElement::zero(a.degree);
        for ((shape, g), &v) in &a.terms {
            self.add_term(&mut out, shape.clone(), g.clone(), self.ring.mul(v, c));
        }
        out
    }

    pub fn neg(&self, a: &ChainElement) -> ChainElement {
        self.scale(a, self.ring.neg(1 % self.ring.modulus))
    }

    pub fn sub(&self, a: &ChainElement, b: &ChainElement) -> ChainElement {
        self.add(a, &self.neg(b))
    }

    pub fn translate(&self, g: &[u64], a: &ChainElement) -> ChainElement {
        let mut out = ChainElement::zero(a.degree);
        for ((shape, h), &c) in &a.terms {
            self.add_term(&mut out, shape.clone(), self.group.add(g, h), c);
        }
        out
    }

    /// The tensor differential with Koszul signs: the factor-i piece carries
    /// (-1)^{k_1 + ... + k_{i-1}}.
    pub fn differential(&self, a: &ChainElement) -> ChainElement {
        if a.degree == 0 {
            return ChainElement::zero(0);
        }
        let mut out = ChainElement::zero(a.degree - 1);
        for ((shape, g), &c) in &a.terms {
            let mut prefix_odd = false;
            for i in 0..shape.len() {
                let k = shape[i];
                if k > 0 {
                    let signed = if prefix_odd { self.ring.neg(c) } else { c };
                    let mut sh = shape.clone();
                    sh[i] -= 1;
                    if k % 2 == 1 {
                        // d e_{2j+1} = (t_i - 1) e_{2j}
                        let mut shifted = g.clone();
                        shifted[i] = (shifted[i] + 1) % self.group.factor_order(i);
                        self.add_term(&mut out, sh.clone(), shifted, signed);
                        self.add_term(&mut out, sh, g.clone(), self.ring.neg(signed));
                    } else {
                        // d e_{2j} = N_i e_{2j-1}
                        let m = self.group.factor_order(i);
                        for step in 0..m {
                            let mut shifted = g.clone();
                            shifted[i] = (shifted[i] + step) % m;
                            self.add_term(&mut out, sh.clone(), shifted, signed);
                        }
                    }
                }
                prefix_odd ^= k % 2 == 1;
            }
        }
        out
    }

    /// The contracting homotopy of the tensor resolution: factor i
    /// contributes only when all earlier factors sit in degree 0 (they get
    /// projected to the unit), using the cyclic homotopy
    /// h(t^a e_{2j}) = (1 + t + ... + t^{a-1}) e_{2j+1} and
    /// h(t^a e_{2j+1}) = e_{2j+2} if a = m_i - 1, else 0.
    pub fn contraction(&self, a: &ChainElement) -> ChainElement {
        let mut out = ChainElement::zero(a.degree + 1);
        for ((shape, g), &c) in &a.terms {
            for i in 0..shape.len() {
                let k = shape[i];
                let mut sh = shape.clone();
                sh[i] += 1;
                let mut base = g.clone();
                for coord in base.iter_mut().take(i) {
                    *coord = 0;
                }
                if k % 2 == 0 {
                    for b in 0..g[i] {
                        let mut tg = base.clone();
                        tg[i] = b;
                        self.add_term(&mut out, sh.clone(), tg, c);
                    }
                } else if g[i] == self.group.factor_order(i) - 1 {
                    let mut tg = base;
                    tg[i] = 0;
                    self.add_term(&mut out, sh, tg, c);
                }
                if k > 0 {
                    break;
                }
            }
        }
        out
    }

    /// The idempotent eta o epsilon: in degree 0 every basis element maps to
    /// the one at the identity; zero in positive degrees.
    pub fn unit_projection(&self, a: &ChainElement) -> ChainElement {
        let mut out = ChainElement::zero(a.degree);
        if a.degree != 0 {
            return out;
        }
        let d = self.group.num_factors();
        let mut total = 0u64;
        for (_, &c) in &a.terms {
            total = self.ring.add(total, c);
        }
        self.add_term(&mut out, vec![0; d], vec![0; d], total);
        out
    }

    pub fn basis_index(&self, degree: usize) -> BasisIndex {
        let mut list = Vec::new();
        for shape in shapes(degree, self.group.num_factors()) {
            for g in self.group.elements() {
                list.push((shape.clone(), g));
            }
        }
        let index = list
            .iter()
            .enumerate()
            .map(|(i, k)| (k.clone(), i))
            .collect();
        BasisIndex { list, index }
    }

    pub fn element_to_vec(&self, a: &ChainElement, basis: &BasisIndex) -> Vec<u64> {
        let mut v = vec![0u64; basis.list.len()];
        for (key, &c) in &a.terms {
            let idx = basis.index[key];
            v[idx] = c;
        }
        v
    }

    pub fn vec_to_element(&self, v: &[u64], degree: usize, basis: &BasisIndex) -> ChainElement {
        let mut out = ChainElement::zero(degree);
        for (idx, &c) in v.iter().enumerate() {
            if c != 0 {
                let (shape, g) = basis.list[idx].clone();
                self.add_term(&mut out, shape, g, c);
            }
        }
        out
    }

    /// Matrix of d: P_degree -> P_{degree-1} in the given bases.
    pub fn boundary_matrix(
        &self,
        degree: usize,
        basis_k: &BasisIndex,
        basis_km1: &BasisIndex,
    ) -> Mat {
        let mut m = Mat::zeros(self.ring, basis_km1.list.len(), basis_k.list.len());
        for (j, (shape, g)) in basis_k.list.iter().enumerate() {
            let mut e = ChainElement::zero(degree);
            self.add_term(&mut e, shape.clone(), g.clone(), 1 % self.ring.modulus);
            let de = self.differential(&e);
            for (key, &c) in &de.terms {
                let i = basis_km1.index[key];
                m.set(i, j, c);
            }
        }
        m
    }
}

#[derive(Debug, Clone)]
pub struct BasisIndex {
    pub list: Vec<(Vec<u32>, Vec<u64>)>,
    pub index: BTreeMap<(Vec<u32>, Vec<u64>), usize>,
}

/// Evaluate a cohomology class (a cochain on the resolution, constant on
/// group translates) against a chain element.
pub fn evaluate(class: &CohClass, elt: &ChainElement) -> u64 {
    let ring = class.ring;
    let mut acc = 0u64;
    for ((shape, _), &c) in &elt.terms {
        let coeff = class.coefficient(&Monomial::from_shape(shape));
        acc = ring.add(acc, ring.mul(c, coeff));
    }
    acc
}

/// Chain lift of a group homomorphism f: T' -> T, i.e. an f-semilinear chain
/// map P(T') -> P(T) over the identity of S, built degree by degree with the
/// contracting homotopy. Restriction of cochains is precomposition with it.
pub struct RestrictionLift {
    pub hom: GroupHom,
    pub source_res: Resolution,
    pub target_res: Resolution,
    memo: BTreeMap<Vec<u32>, ChainElement>,
}

impl RestrictionLift {
    pub fn new(hom: &GroupHom, ring: CoeffRing) -> Self {
        RestrictionLift {
            hom: hom.clone(),
            source_res: Resolution::new(hom.source.clone(), ring),
            target_res: Resolution::new(hom.target.clone(), ring),
            memo: BTreeMap::new(),
        }
    }

    pub fn generator_image(&mut self, shape: &[u32]) -> ChainElement {
        if let Some(e) = self.memo.get(shape) {
            return e.clone();
        }
        let degree: usize = shape.iter().map(|&k| k as usize).sum();
        let result = if degree == 0 {
            let d = self.hom.target.num_factors();
            self.target_res.basis(&vec![0; d], &vec![0; d])
        } else {
            let e = self.source_res.basis(shape, &vec![0; shape.len()]);
            let boundary = self.source_res.differential(&e);
            let mapped = self.map(&boundary);
            self.target_res.contraction(&mapped)
        };
        self.memo.insert(shape.to_vec(), result.clone());
        result
    }

    pub fn map(&mut self, a: &ChainElement) -> ChainElement {
        let mut out = ChainElement::zero(a.degree);
        let terms: Vec<_> = a.terms.iter().map(|(k, &c)| (k.clone(), c)).collect();
        for ((shape, g), c) in terms {
            let gen = self.generator_image(&shape);
            let img_g = self.hom.apply(&g);
            let moved = self.target_res.translate(&img_g, &gen);
            self.target_res.add_scaled(&mut out, &moved, c);
        }
        out
    }
}

/// Restriction computed at chain level: (Res a)(e') = a(F(e')).
pub fn oracle_restrict(hom: &GroupHom, a: &CohClass) -> Result<CohClass> {
    if hom.target != a.group {
        return Err(Error::GroupMismatch(
            hom.target.to_string(),
            a.group.to_string(),
        ));
    }
    let source_ring = CohRing::new(hom.source.clone(), a.ring)?.with_degree_cap(a.degree_cap);
    let mut lift = RestrictionLift::new(hom, a.ring);
    let mut out = source_ring.zero();
    let degrees: std::collections::BTreeSet<usize> = a.terms.keys().map(|m| m.degree()).collect();
    for degree in degrees {
        for shape in shapes(degree, hom.source.num_factors()) {
            let val = evaluate(a, &lift.generator_image(&shape));
            if val != 0 {
                out.insert(Monomial::from_shape(&shape), val as i64);
            }
        }
    }
    Ok(out)
}

/// Chain lift of a homogeneous degree-q class v to a map P -> P[q] over
/// S[T], starting from v itself in degree q. Composition with another
/// cochain computes the cup product the honest way.
pub struct YonedaLift {
    pub res: Resolution,
    v: CohClass,
    q: usize,
    memo: BTreeMap<Vec<u32>, ChainElement>,
}

impl YonedaLift {
    pub fn new(v: &CohClass) -> Result<Self> {
        let q = v.degree()?;
        Ok(YonedaLift {
            res: Resolution::new(v.group.clone(), v.ring),
            v: v.clone(),
            q,
            memo: BTreeMap::new(),
        })
    }

    pub fn generator_image(&mut self, shape: &[u32]) -> ChainElement {
        if let Some(e) = self.memo.get(shape) {
            return e.clone();
        }
        let degree: usize = shape.iter().map(|&k| k as usize).sum();
        assert!(degree >= self.q);
        let d = shape.len();
        let result = if degree == self.q {
            let c = self.v.coefficient(&Monomial::from_shape(shape));
            let mut e = ChainElement::zero(0);
            self.res.add_term(&mut e, vec![0; d], vec![0; d], c);
            e
        } else {
            let e = self.res.basis(shape, &vec![0; d]);
            let boundary = self.res.differential(&e);
            let mapped = self.map(&boundary);
            self.res.contraction(&mapped)
        };
        self.memo.insert(shape.to_vec(), result.clone());
        result
    }

    /// The lift on a general element; zero below degree q.
    pub fn map(&mut self, a: &ChainElement) -> ChainElement {
        if a.degree < self.q {
            return ChainElement::zero(0);
        }
        let mut out = ChainElement::zero(a.degree - self.q);
        let terms: Vec<_> = a.terms.iter().map(|(k, &c)| (k.clone(), c)).collect();
        for ((shape, g), c) in terms {
            let gen = self.generator_image(&shape);
            let moved = self.res.translate(&g, &gen);
            self.res.add_scaled(&mut out, &moved, c);
        }
        out
    }
}

/// Cup product computed at chain level: (u cup v)(e) = u(V(e)) with V the
/// lift of v.
pub fn oracle_cup(u: &CohClass, v: &CohClass) -> Result<CohClass> {
    if u.group != v.group {
        return Err(Error::GroupMismatch(
            u.group.to_string(),
            v.group.to_string(),
        ));
    }
    if u.ring != v.ring {
        return Err(Error::RingMismatch(u.ring.to_string(), v.ring.to_string()));
    }
    let ring =
        CohRing::new(u.group.clone(), u.ring)?.with_degree_cap(u.degree_cap.min(v.degree_cap));
    let d = u.group.num_factors();
    let mut out = ring.zero();
    for (p, u_p) in u.homogeneous_components() {
        for (q, v_q) in v.homogeneous_components() {
            let mut lift = YonedaLift::new(&v_q)?;
            for shape in shapes(p + q, d) {
                let val = evaluate(&u_p, &lift.generator_image(&shape));
                if val != 0 {
                    out.insert(Monomial::from_shape(&shape), val as i64);
                }
            }
        }
    }
    for m in out.terms.keys() {
        if m.degree() > ring.degree_cap {
            return Err(Error::DegreeCapExceeded(m.degree(), ring.degree_cap));
        }
    }
    Ok(out)
}

/// How to build the comparison map P(T)|_{T'} -> P(T') inside the transfer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftMode {
    /// Degree by degree through the contracting homotopy (deterministic
    /// closed recursion; the production route).
    Homotopy,
    /// Degree by degree by solving the boundary equation with a Smith-form
    /// solver (an independent oracle; any solution is valid because cochain
    /// values on trivial coefficients do not see the choice).
    Solver,
}

/// The chain-level transfer for an injective f: T' -> T of finite index:
/// choose the lexicographically first element of each coset as transversal,
/// build a T'-linear comparison map G: P(T) -> P(T'), and sum the cochain
/// over the transversal.
pub struct TransferLift {
    pub hom: GroupHom,
    pub sub: Resolution,
    pub amb: Resolution,
    reps: Vec<Vec<u64>>,
    decomp: BTreeMap<Vec<u64>, (usize, Vec<u64>)>,
    mode: LiftMode,
    memo: BTreeMap<(Vec<u32>, usize), ChainElement>,
    solvers: BTreeMap<usize, SnfSolver>,
    bases: BTreeMap<usize, BasisIndex>,
}

impl TransferLift {
    pub fn new(hom: &GroupHom, ring: CoeffRing, mode: LiftMode) -> Result<Self> {
        if !hom.is_injective() {
            return Err(Error::NotInjective);
        }
        if hom.target.order() > 1 << 14 {
            return Err(Error::Unsupported(
                "transfer enumerates the ambient group; order too large".to_string(),
            ));
        }
        let mut image: BTreeMap<Vec<u64>, Vec<u64>> = BTreeMap::new();
        for tp in hom.source.elements() {
            image.insert(hom.apply(&tp), tp);
        }
        let mut reps = Vec::new();
        let mut decomp: BTreeMap<Vec<u64>, (usize, Vec<u64>)> = BTreeMap::new();
        for g in hom.target.elements() {
            if decomp.contains_key(&g) {
                continue;
            }
            let idx = reps.len();
            for (h, tp) in &image {
                decomp.insert(hom.target.add(&g, h), (idx, tp.clone()));
            }
            reps.push(g);
        }
        Ok(TransferLift {
            hom: hom.clone(),
            sub: Resolution::new(hom.source.clone(), ring),
            amb: Resolution::new(hom.target.clone(), ring),
            reps,
            decomp,
            mode,
            memo: BTreeMap::new(),
            solvers: BTreeMap::new(),
            bases: BTreeMap::new(),
        })
    }

    pub fn index(&self) -> u64 {
        self.reps.len() as u64
    }

    fn basis_for(&mut self, degree: usize) -> BasisIndex {
        if let Some(b) = self.bases.get(&degree) {
            return b.clone();
        }
        let b = self.sub.basis_index(degree);
        self.bases.insert(degree, b.clone());
        b
    }

    fn ensure_solver(&mut self, degree: usize) {
        if self.solvers.contains_key(&degree) {
            return;
        }
        let basis_k = self.basis_for(degree);
        let basis_km1 = self.basis_for(degree - 1);
        let m = self.sub.boundary_matrix(degree, &basis_k, &basis_km1);
        self.solvers.insert(degree, SnfSolver::new(&m));
    }

    fn generator_image(&mut self, shape: &[u32], rep_idx: usize) -> Result<ChainElement> {
        let key = (shape.to_vec(), rep_idx);
        if let Some(e) = self.memo.get(&key) {
            return Ok(e.clone());
        }
        let degree: usize = shape.iter().map(|&k| k as usize).sum();
        let result = if degree == 0 {
            let d = self.hom.source.num_factors();
            self.sub.basis(&vec![0; d], &vec![0; d])
        } else {
            let rep: Vec<i64> = self.reps[rep_idx].iter().map(|&x| x as i64).collect();
            let e = self.amb.basis(shape, &rep);
            let boundary = self.amb.differential(&e);
            let mapped = self.map(&boundary)?;
            match self.mode {
                LiftMode::Homotopy => self.sub.contraction(&mapped),
                LiftMode::Solver => {
                    self.ensure_solver(degree);
                    let basis_k = self.basis_for(degree);
                    let basis_km1 = self.basis_for(degree - 1);
                    let b = self.sub.element_to_vec(&mapped, &basis_km1);
                    let solver = &self.solvers[&degree];
                    let x = solver.solve(&b).ok_or(Error::NoSolution)?;
                    self.sub.vec_to_element(&x, degree, &basis_k)
                }
            }
        };
        self.memo.insert(key, result.clone());
        Ok(result)
    }

    /// The comparison map P(T) -> P(T') on a general element, using the
    /// coset decomposition g = rep + f(t').
    pub fn map(&mut self, a: &ChainElement) -> Result<ChainElement> {
        let mut out = ChainElement::zero(a.degree);
        let terms: Vec<_> = a.terms.iter().map(|(k, &c)| (k.clone(), c)).collect();
        for ((shape, g), c) in terms {
            let (idx, tp) = self.decomp[&g].clone();
            let gen = self.generator_image(&shape, idx)?;
            let moved = self.sub.translate(&tp, &gen);
            self.sub.add_scaled(&mut out, &moved, c);
        }
        Ok(out)
    }

    /// Value of the transferred cochain on the basis element of the given
    /// shape: the sum over the transversal.
    pub fn transfer_value(&mut self, class: &CohClass, shape: &[u32]) -> Result<u64> {
        let ring = class.ring;
        let mut acc = 0u64;
        for idx in 0..self.reps.len() {
            let gen = self.generator_image(shape, idx)?;
            acc = ring.add(acc, evaluate(class, &gen));
        }
        Ok(acc)
    }
}

/// Corestriction along an injective hom by the chain-level transfer.
pub fn transfer(hom: &GroupHom, a: &CohClass, mode: LiftMode) -> Result<CohClass> {
    if hom.source != a.group {
        return Err(Error::GroupMismatch(
            hom.source.to_string(),
            a.group.to_string(),
        ));
    }
    CohRing::new(hom.source.clone(), a.ring)?;
    let target_ring = CohRing::new(hom.target.clone(), a.ring)?.with_degree_cap(a.degree_cap);
    let mut lift = TransferLift::new(hom, a.ring, mode)?;
    let mut out = target_ring.zero();
    let degrees: std::collections::BTreeSet<usize> = a.terms.keys().map(|m| m.degree()).collect();
    for degree in degrees {
        for shape in shapes(degree, hom.target.num_factors()) {
            let val = lift.transfer_value(a, &shape)?;
            if val != 0 {
                out.insert(Monomial::from_shape(&shape), val as i64);
            }
        }
    }
    Ok(out)
}

/// Corestriction through the solver-built comparison map: the independent
/// cross-check for the production (homotopy) route.
pub fn oracle_corestrict(hom: &GroupHom, a: &CohClass) -> Result<CohClass> {
    transfer(hom, a, LiftMode::Solver)
}

/// The degree-2 dual generator normalization: the image of the tautological
/// character of factor i under the connecting map of
/// 0 -> Z/l^r -> Z/l^{n_i + r} -> Z/l^{n_i} -> 0, evaluated on the shape
/// basis element with a 2 in slot i. Computed by an honest integral lift:
/// the character lifts to the cochain with value 1 on e_1, its coboundary
/// on e_2 is the norm count l^{n_i}, and division by l^{n_i} lands in Z/l^r.
pub fn connecting_y_coefficient(group: &AbelianLGroup, ring: CoeffRing, i: usize) -> Result<u64> {
    let n_i = group.exponents[i];
    let big = CoeffRing::new(group.ell, n_i + ring.r)?;
    let res = Resolution::new(group.clone(), big);
    let d = group.num_factors();
    let mut shape2 = vec![0u32; d];
    shape2[i] = 2;
    let e2 = res.basis(&shape2, &vec![0; d]);
    let boundary = res.differential(&e2);
    // The lifted cochain is 1 on every translate of the e_1 generator of
    // slot i, 0 on other degree-1 shapes.
    let mut shape1 = vec![0u32; d];
    shape1[i] = 1;
    let mut value = 0u64;
    for ((shape, _), &c) in &boundary.terms {
        if *shape == shape1 {
            value = big.add(value, c);
        }
    }
    let step = group.ell.pow(n_i);
    if value % step != 0 {
        return Err(Error::NoSolution);
    }
    Ok(ring.reduce_u64(value / step))
}

/// d o d = 0 on every basis element through the given degree.
pub fn check_d_squared(res: &Resolution, max_degree: usize) -> std::result::Result<(), String> {
    let d = res.group.num_factors();
    for degree in 2..=max_degree {
        for shape in shapes(degree, d) {
            for g in res.group.elements() {
                let g_i: Vec<i64> = g.iter().map(|&x| x as i64).collect();
                let e = res.basis(&shape, &g_i);
                let dd = res.differential(&res.differential(&e));
                if !dd.is_zero() {
                    return Err(format!(
                        "d^2 != 0 at degree {degree}, shape {shape:?}, translate {g:?}"
                    ));
                }
            }
        }
    }
    Ok(())
}

/// dh + hd = 1 - (unit projection) on every basis element through the given
/// degree; the unit projection only bites in degree 0.
pub fn check_homotopy(res: &Resolution, max_degree: usize) -> std::result::Result<(), String> {
    let d = res.group.num_factors();
    for degree in 0..=max_degree {
        for shape in shapes(degree, d) {
            for g in res.group.elements() {
                let g_i: Vec<i64> = g.iter().map(|&x| x as i64).collect();
                let e = res.basis(&shape, &g_i);
                let lhs = res.add(
                    &res.differential(&res.contraction(&e)),
                    &res.contraction(&res.differential(&e)),
                );
                let rhs = res.sub(&e, &res.unit_projection(&e));
                if lhs != rhs {
                    return Err(format!(
                        "dh + hd failed at degree {degree}, shape {shape:?}, translate {g:?}"
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Exactness in positive degrees and H_0 = S, verified by cardinality
/// counting through Smith forms: |ker d_k| = |im d_{k+1}| and
/// |P_0| / |im d_1| = |S|.
pub fn check_exactness(res: &Resolution, max_degree: usize) -> std::result::Result<(), String> {
    let r = res.ring.r as u64;
    let mut bases = Vec::new();
    for k in 0..=max_degree {
        bases.push(res.basis_index(k));
    }
    let mut image_logs = vec![0u64; max_degree + 1];
    for k in 1..=max_degree {
        let m = res.boundary_matrix(k, &bases[k], &bases[k - 1]);
        let solver = SnfSolver::new(&m);
        image_logs[k] = solver.image_size_log();
    }
    let dim0 = bases[0].list.len() as u64;
    if r * dim0 - image_logs[1] != r {
        return Err(format!(
            "H_0 has log-size {} instead of {}",
            r * dim0 - image_logs[1],
            r
        ));
    }
    for k in 1..max_degree {
        let dim_k = bases[k].list.len() as u64;
        let kernel_log = r * dim_k - image_logs[k];
        if kernel_log != image_logs[k + 1] {
            return Err(format!(
                "exactness fails at degree {k}: |ker| log {} vs |im| log {}",
                kernel_log,
                image_logs[k + 1]
            ));
        }
    }
    Ok(())
}

/// The restriction lift commutes with differentials on every generator.
pub fn check_restriction_chain_map(
    hom: &GroupHom,
    ring: CoeffRing,
    max_degree: usize,
) -> std::result::Result<(), String> {
    let mut lift = RestrictionLift::new(hom, ring);
    let d = hom.source.num_factors();
    for degree in 1..=max_degree {
        for shape in shapes(degree, d) {
            let e = lift.source_res.basis(&shape, &vec![0; d]);
            let mapped = lift.map(&e);
            let lhs = lift.target_res.differential(&mapped);
            let de = lift.source_res.differential(&e);
            let rhs = lift.map(&de);
            if lhs != rhs {
                return Err(format!("dF != Fd at degree {degree}, shape {shape:?}"));
            }
        }
    }
    Ok(())
}

/// The cup lift commutes with differentials on every generator.
pub fn check_yoneda_chain_map(v: &CohClass, max_degree: usize) -> std::result::Result<(), String> {
    let mut lift = YonedaLift::new(v).map_err(|e| e.to_string())?;
    let d = v.group.num_factors();
    for degree in 1..=max_degree {
        for shape in shapes(degree, d) {
            let e = lift.res.basis(&shape, &vec![0; d]);
            let mapped = lift.map(&e);
            let lhs = lift.res.differential(&mapped);
            let de = lift.res.differential(&e);
            let rhs = lift.map(&de);
            if lhs != rhs {
                return Err(format!(
                    "dV != Vd at degree {degree}, shape {shape:?} for {v}"
                ));
            }
        }
    }
    Ok(())
}

/// The transfer comparison map commutes with differentials on every basis
/// element of the ambient resolution through the given degree.
pub fn check_transfer_chain_map(
    hom: &GroupHom,
    ring: CoeffRing,
    mode: LiftMode,
    max_degree: usize,
) -> std::result::Result<(), String> {
    let mut lift = TransferLift::new(hom, ring, mode).map_err(|e| e.to_string())?;
    let d = hom.target.num_factors();
    for degree in 1..=max_degree {
        for shape in shapes(degree, d) {
            for g in hom.target.elements() {
                let g_i: Vec<i64> = g.iter().map(|&x| x as i64).collect();
                let e = lift.amb.basis(&shape, &g_i);
                let mapped = lift.map(&e).map_err(|e| e.to_string())?;
                let lhs = lift.sub.differential(&mapped);
                let de = lift.amb.differential(&e);
                let rhs = lift.map(&de).map_err(|e| e.to_string())?;
                if lhs != rhs {
                    return Err(format!(
                        "dG != Gd ({mode:?}) at degree {degree}, shape {shape:?}, translate {g:?}"
                    ));
                }
            }
        }
    }
    Ok(())
}
