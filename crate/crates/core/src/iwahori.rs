//! Extended affine Weyl group algebra at q = 1: the convolution algebra on
//! X_* ⋊ W with coefficients in Z/l^r, its principal-series representations
//! over the residue field, the spherical idempotent e_K, rank diagnostics for
//! the bimodule square (endomorphisms, the two e_K-corners), the orbit
//! projector built from a character with free Weyl orbit, and the derived
//! version of the algebra whose coefficients are classes in H*(T; Z/l^r).
//!
//! Group law on pairs: (lambda1, w1)(lambda2, w2) = (lambda1 + w1 lambda2,
//! w1 w2). Translations act trivially on cohomology classes, so the derived
//! crossed product only twists by the Weyl component.

use crate::coeff::CoeffRing;
use crate::cohomology::{weyl_left_act, CohClass, CohRing, CohTermJson};
use crate::error::{Error, Result};
use crate::laurent::LaurentElement;
use crate::linalg::Mat;
use crate::root_datum::{RootDatum, WeylElement};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Element of the convolution algebra S[X_* ⋊ W]: a finitely supported
/// S-valued function on pairs (translation, Weyl element).
#[derive(Debug, Clone)]
pub struct IwahoriElement {
    pub rd: RootDatum,
    pub ring: CoeffRing,
    pub terms: BTreeMap<(Vec<i64>, WeylElement), u64>,
}

impl PartialEq for IwahoriElement {
    fn eq(&self, other: &Self) -> bool {
        self.rd.name == other.rd.name && self.ring == other.ring && self.terms == other.terms
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IwahoriTermJson {
    pub translation: Vec<i64>,
    pub weyl: Vec<usize>,
    pub coeff: u64,
}

impl IwahoriElement {
    pub fn zero(rd: &RootDatum, ring: CoeffRing) -> Self {
        IwahoriElement {
            rd: rd.clone(),
            ring,
            terms: BTreeMap::new(),
        }
    }

    /// The basis element delta_{(translation, w)} scaled by coeff.
    pub fn delta(
        rd: &RootDatum,
        ring: CoeffRing,
        translation: &[i64],
        w: WeylElement,
        coeff: u64,
    ) -> Result<Self> {
        if translation.len() != rd.rank {
            return Err(Error::DimensionMismatch(format!(
                "translation length {} does not match rank {}",
                translation.len(),
                rd.rank
            )));
        }
        let mut out = Self::zero(rd, ring);
        out.insert(translation.to_vec(), w, ring.reduce_u64(coeff) as i64);
        Ok(out)
    }

    pub fn one(rd: &RootDatum, ring: CoeffRing) -> Self {
        let mut out = Self::zero(rd, ring);
        out.insert(vec![0; rd.rank], rd.weyl_identity(), 1);
        out
    }

    /// The finite Weyl group element w viewed inside the algebra.
    pub fn from_weyl(rd: &RootDatum, ring: CoeffRing, w: WeylElement) -> Self {
        let mut out = Self::zero(rd, ring);
        out.insert(vec![0; rd.rank], w, 1);
        out
    }

    pub fn insert(&mut self, translation: Vec<i64>, w: WeylElement, coeff: i64) {
        let key = (translation, w);
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

    pub fn coefficient(&self, translation: &[i64], w: WeylElement) -> u64 {
        self.terms
            .get(&(translation.to_vec(), w))
            .copied()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_match(&self, other: &Self) -> Result<()> {
        if self.rd.name != other.rd.name {
            return Err(Error::GroupMismatch(
                self.rd.name.clone(),
                other.rd.name.clone(),
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

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_match(other)?;
        let mut out = self.clone();
        for ((translation, w), &c) in &other.terms {
            let value = self.ring.add(out.coefficient(translation, *w), c);
            let key = (translation.clone(), *w);
            if value == 0 {
                out.terms.remove(&key);
            } else {
                out.terms.insert(key, value);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for value in out.terms.values_mut() {
            *value = self.ring.neg(*value);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u64) -> Self {
        let c = self.ring.reduce_u64(c);
        let mut out = Self::zero(&self.rd, self.ring);
        for ((translation, w), &value) in &self.terms {
            let scaled = self.ring.mul(value, c);
            if scaled != 0 {
                out.terms.insert((translation.clone(), *w), scaled);
            }
        }
        out
    }

    /// Convolution product for the semidirect group law.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_match(other)?;
        let mut out = Self::zero(&self.rd, self.ring);
        for ((l1, w1), &c1) in &self.terms {
            for ((l2, w2), &c2) in &other.terms {
                let moved = self.rd.weyl_apply(*w1, l2);
                let translation: Vec<i64> =
                    l1.iter().zip(moved.iter()).map(|(a, b)| a + b).collect();
                let w = self.rd.weyl_mul(*w1, *w2);
                let c = self.ring.mul(c1, c2);
                if c != 0 {
                    out.insert(translation, w, c as i64);
                }
            }
        }
        Ok(out)
    }

    /// Largest sup-norm of a supported translation.
    pub fn support_radius(&self) -> i64 {
        self.terms
            .keys()
            .flat_map(|(translation, _)| translation.iter().map(|c| c.abs()))
            .max()
            .unwrap_or(0)
    }

    pub fn to_json(&self) -> Vec<IwahoriTermJson> {
        self.terms
            .iter()
            .map(|((translation, w), &coeff)| IwahoriTermJson {
                translation: translation.clone(),
                weyl: self.rd.weyl_word(*w).to_vec(),
                coeff,
            })
            .collect()
    }

    pub fn from_json(rd: &RootDatum, ring: CoeffRing, terms: &[IwahoriTermJson]) -> Result<Self> {
        let mut out = Self::zero(rd, ring);
        for term in terms {
            if term.translation.len() != rd.rank {
                return Err(Error::DimensionMismatch(
                    "translation length in serialized term".into(),
                ));
            }
            let w = rd.weyl_from_word(&term.weyl)?;
            out.insert(
                term.translation.clone(),
                w,
                ring.reduce_u64(term.coeff) as i64,
            );
        }
        Ok(out)
    }
}

/// The averaging idempotent |W|^{-1} sum_w delta_{(0, w)}. Requires |W| to be
/// a unit in the coefficient ring.
pub fn spherical_idempotent(rd: &RootDatum, ring: CoeffRing) -> Result<IwahoriElement> {
    let inv_order = ring.inv(ring.reduce_u64(rd.weyl_order()))?;
    let mut out = IwahoriElement::zero(rd, ring);
    for w in rd.weyl_elements() {
        out.insert(vec![0; rd.rank], w, inv_order as i64);
    }
    Ok(out)
}

/// Embed a W-invariant element of S[X_*] as a sum of pure translations.
/// Such elements are central: they commute with every delta_{(lambda, w)}.
pub fn central_embed(
    rd: &RootDatum,
    ring: CoeffRing,
    z: &LaurentElement,
) -> Result<IwahoriElement> {
    if z.rank != rd.rank {
        return Err(Error::DimensionMismatch(format!(
            "lattice rank {} does not match datum rank {}",
            z.rank, rd.rank
        )));
    }
    if z.ring != ring {
        return Err(Error::RingMismatch(z.ring.to_string(), ring.to_string()));
    }
    for &i in &rd.simple {
        let word = [i];
        let s = rd.weyl_from_word(&word)?;
        if z.transform_exponents(rd.weyl_matrix(s)) != *z {
            return Err(Error::NotWeylInvariant);
        }
    }
    let mut out = IwahoriElement::zero(rd, ring);
    let id = rd.weyl_identity();
    for (exponent, &coeff) in &z.terms {
        out.insert(exponent.clone(), id, coeff as i64);
    }
    Ok(out)
}

/// Check that the values define a character X_* -> S^* on the coweight
/// lattice: one unit per coordinate.
pub fn validate_character(ring: &CoeffRing, chi: &[u64], rank: usize) -> Result<()> {
    if chi.len() != rank {
        return Err(Error::DimensionMismatch(format!(
            "character has {} coordinates, lattice rank is {}",
            chi.len(),
            rank
        )));
    }
    for &value in chi {
        if !ring.is_unit(ring.reduce_u64(value)) {
            return Err(Error::NonUnitCharacterValue);
        }
    }
    Ok(())
}

/// chi(lambda) = prod_i chi_i^{lambda_i}.
pub fn character_value(ring: &CoeffRing, chi: &[u64], lambda: &[i64]) -> Result<u64> {
    let mut acc = 1u64;
    for (value, &exp) in chi.iter().zip(lambda.iter()) {
        acc = ring.mul(acc, ring.pow_i64(ring.reduce_u64(*value), exp)?);
    }
    Ok(acc)
}

/// The twisted character (w chi)(lambda) = chi(w^{-1} lambda), returned as a
/// value vector on the standard basis.
pub fn twisted_character(
    rd: &RootDatum,
    ring: &CoeffRing,
    chi: &[u64],
    w: WeylElement,
) -> Result<Vec<u64>> {
    validate_character(ring, chi, rd.rank)?;
    let inv = rd.weyl_inverse(w);
    let mut out = Vec::with_capacity(rd.rank);
    for i in 0..rd.rank {
        let basis: Vec<i64> = (0..rd.rank).map(|j| i64::from(j == i)).collect();
        let moved = rd.weyl_apply(inv, &basis);
        out.push(character_value(ring, chi, &moved)?);
    }
    Ok(out)
}

/// Evaluate the Weyl discriminant prod_{roots alpha} (1 - x^{alpha*}) at the
/// character chi. Nonzero exactly when chi is regular for the root datum.
pub fn discriminant_eval(rd: &RootDatum, ring: &CoeffRing, chi: &[u64]) -> Result<u64> {
    validate_character(ring, chi, rd.rank)?;
    rd.discriminant(ring)?.eval_character(chi)
}

/// The principal-series representation of S[X_* ⋊ W] induced from the
/// character chi of the translation lattice, realized on the |W|-dimensional
/// space with basis indexed by Weyl elements in canonical order:
/// rho(lambda, u) v_w = (u w chi)(lambda) v_{u w}. Works over the residue
/// field (r = 1).
#[derive(Debug, Clone)]
pub struct InducedRep {
    pub rd: RootDatum,
    pub field: CoeffRing,
    pub chi: Vec<u64>,
}

impl InducedRep {
    pub fn new(rd: &RootDatum, field: CoeffRing, chi: &[u64]) -> Result<Self> {
        if field.r != 1 {
            return Err(Error::Unsupported(
                "induced representation matrices are computed over the residue field".into(),
            ));
        }
        validate_character(&field, chi, rd.rank)?;
        Ok(InducedRep {
            rd: rd.clone(),
            field,
            chi: chi.iter().map(|&c| field.reduce_u64(c)).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.rd.weyl_order() as usize
    }

    fn basis_position(&self, w: WeylElement) -> usize {
        self.rd
            .weyl_elements()
            .iter()
            .position(|&v| v == w)
            .expect("Weyl element from the same datum")
    }

    /// Matrix of a single basis element delta_{(lambda, u)}.
    pub fn basis_matrix(&self, translation: &[i64], u: WeylElement) -> Result<Mat> {
        let n = self.dim();
        let mut out = Mat::zeros(self.field, n, n);
        for (col, &w) in self.rd.weyl_elements().iter().enumerate() {
            let uw = self.rd.weyl_mul(u, w);
            let inv = self.rd.weyl_inverse(uw);
            let moved = self.rd.weyl_apply(inv, translation);
            let value = character_value(&self.field, &self.chi, &moved)?;
            let row = self.basis_position(uw);
            out.set(row, col, value);
        }
        Ok(out)
    }

    pub fn matrix_of(&self, a: &IwahoriElement) -> Result<Mat> {
        if a.rd.name != self.rd.name {
            return Err(Error::GroupMismatch(
                a.rd.name.clone(),
                self.rd.name.clone(),
            ));
        }
        if a.ring != self.field {
            return Err(Error::RingMismatch(
                a.ring.to_string(),
                self.field.to_string(),
            ));
        }
        let n = self.dim();
        let mut out = Mat::zeros(self.field, n, n);
        for ((translation, u), &c) in &a.terms {
            out = out.add(&self.basis_matrix(translation, *u)?.scale(c));
        }
        Ok(out)
    }
}

/// Rank diagnostics for the four corners of the bimodule square attached to
/// the idempotent e_K inside End(induced representation).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MoritaReport {
    /// Both gate conditions hold: regular character (trivial stabilizer in W)
    /// and nonvanishing Weyl discriminant.
    pub applicable: bool,
    pub reason: Option<String>,
    pub discriminant_value: u64,
    pub endo_rank: u64,
    pub endo_expected: u64,
    pub hom_ik_rank: u64,
    pub hom_ki_rank: u64,
    pub kk_rank: u64,
}

fn flatten(m: &Mat) -> Vec<u64> {
    let mut row = Vec::with_capacity(m.rows * m.cols);
    for i in 0..m.rows {
        for j in 0..m.cols {
            row.push(m.get(i, j));
        }
    }
    row
}

fn span_rank(field: CoeffRing, rows: &[Vec<u64>]) -> u64 {
    if rows.is_empty() {
        return 0;
    }
    let mut m = Mat::zeros(field, rows.len(), rows[0].len());
    for (i, row) in rows.iter().enumerate() {
        for (j, &value) in row.iter().enumerate() {
            m.set(i, j, value);
        }
    }
    m.rank_mod_ell() as u64
}

/// Compute the image ranks of the algebra, of the two e_K-corners, and of
/// the bi-spherical corner inside End(V) for the representation induced from
/// chi, spanning by all delta_{(lambda, w)} with |lambda|_infty bounded.
pub fn morita_check(
    rd: &RootDatum,
    field: CoeffRing,
    chi: &[u64],
    translation_bound: i64,
) -> Result<MoritaReport> {
    let rep = InducedRep::new(rd, field, chi)?;
    let discriminant_value = discriminant_eval(rd, &field, &rep.chi)?;
    let mut regular = true;
    for w in rd.weyl_elements() {
        if w == rd.weyl_identity() {
            continue;
        }
        if twisted_character(rd, &field, &rep.chi, w)? == rep.chi {
            regular = false;
            break;
        }
    }
    let mut reasons = Vec::new();
    if discriminant_value == 0 {
        reasons.push("the Weyl discriminant vanishes at chi".to_string());
    }
    if !regular {
        reasons.push("chi is fixed by a nontrivial Weyl element".to_string());
    }

    let ek = spherical_idempotent(rd, field)?;
    let ek_matrix = rep.matrix_of(&ek)?;
    let mut spanning = Vec::new();
    let mut box_points = vec![vec![]];
    for _ in 0..rd.rank {
        let mut next = Vec::new();
        for point in &box_points {
            for c in -translation_bound..=translation_bound {
                let mut extended: Vec<i64> = point.clone();
                extended.push(c);
                next.push(extended);
            }
        }
        box_points = next;
    }
    for point in &box_points {
        for w in rd.weyl_elements() {
            spanning.push(rep.basis_matrix(point, w)?);
        }
    }

    let endo_rows: Vec<Vec<u64>> = spanning.iter().map(flatten).collect();
    let ik_rows: Vec<Vec<u64>> = spanning
        .iter()
        .map(|m| flatten(&ek_matrix.mul(m)))
        .collect();
    let ki_rows: Vec<Vec<u64>> = spanning
        .iter()
        .map(|m| flatten(&m.mul(&ek_matrix)))
        .collect();
    let kk_rows: Vec<Vec<u64>> = spanning
        .iter()
        .map(|m| flatten(&ek_matrix.mul(m).mul(&ek_matrix)))
        .collect();
    let order = rd.weyl_order();

    Ok(MoritaReport {
        applicable: reasons.is_empty(),
        reason: if reasons.is_empty() {
            None
        } else {
            Some(reasons.join("; "))
        },
        discriminant_value,
        endo_rank: span_rank(field, &endo_rows),
        endo_expected: order * order,
        hom_ik_rank: span_rank(field, &ik_rows),
        hom_ki_rank: span_rank(field, &ki_rows),
        kk_rank: span_rank(field, &kk_rows),
    })
}

/// The Lagrange projector onto the chi-eigenline of S[X_*] acting through the
/// Weyl orbit of chi: Theta = prod_{w != 1} (x_{i_w} - (w chi)_{i_w}) /
/// (chi_{i_w} - (w chi)_{i_w}), where i_w is the first coordinate whose
/// character difference is a unit. Theta evaluates to 1 at chi and to 0 at
/// every other orbit point. Requires the orbit to be residually free: every
/// twisted character must differ from chi in some coordinate by a unit.
pub fn theta_projector(rd: &RootDatum, ring: &CoeffRing, chi: &[u64]) -> Result<LaurentElement> {
    validate_character(ring, chi, rd.rank)?;
    let chi: Vec<u64> = chi.iter().map(|&c| ring.reduce_u64(c)).collect();
    let mut theta = LaurentElement::one(*ring, rd.rank);
    for w in rd.weyl_elements() {
        if w == rd.weyl_identity() {
            continue;
        }
        let twisted = twisted_character(rd, ring, &chi, w)?;
        let mut pivot = None;
        for i in 0..rd.rank {
            let diff = ring.sub(chi[i], twisted[i]);
            if ring.is_unit(diff) {
                pivot = Some((i, diff));
                break;
            }
        }
        let Some((i, diff)) = pivot else {
            return Err(Error::OrbitNotFree);
        };
        let mut exponent = vec![0i64; rd.rank];
        exponent[i] = 1;
        let mut factor = LaurentElement::monomial(*ring, exponent, 1);
        factor.insert(vec![0; rd.rank], -(twisted[i] as i64));
        theta = theta.mul(&factor.scale(ring.inv(diff)?));
    }
    Ok(theta)
}

/// Element of the derived convolution algebra: finitely supported function on
/// X_* ⋊ W with values in H*(T; Z/l^r). The product twists the right factor
/// by the Weyl component of the left index; translations act trivially on
/// coefficients.
#[derive(Debug, Clone)]
pub struct DerivedIwahoriElement {
    pub rd: RootDatum,
    pub ring: CohRing,
    pub terms: BTreeMap<(Vec<i64>, WeylElement), CohClass>,
}

impl PartialEq for DerivedIwahoriElement {
    fn eq(&self, other: &Self) -> bool {
        self.rd.name == other.rd.name && self.ring == other.ring && self.terms == other.terms
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DerivedIwahoriTermJson {
    pub translation: Vec<i64>,
    pub weyl: Vec<usize>,
    pub class: Vec<CohTermJson>,
}

impl DerivedIwahoriElement {
    pub fn zero(rd: &RootDatum, ring: &CohRing) -> Self {
        DerivedIwahoriElement {
            rd: rd.clone(),
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn delta(
        rd: &RootDatum,
        ring: &CohRing,
        translation: &[i64],
        w: WeylElement,
        class: &CohClass,
    ) -> Result<Self> {
        if translation.len() != rd.rank {
            return Err(Error::DimensionMismatch(format!(
                "translation length {} does not match rank {}",
                translation.len(),
                rd.rank
            )));
        }
        let mut out = Self::zero(rd, ring);
        out.set_value(translation.to_vec(), w, class.clone());
        Ok(out)
    }

    pub fn one(rd: &RootDatum, ring: &CohRing) -> Self {
        let mut out = Self::zero(rd, ring);
        out.set_value(vec![0; rd.rank], rd.weyl_identity(), ring.one());
        out
    }

    /// Promote a scalar element: each coefficient becomes a multiple of the
    /// unit class.
    pub fn from_scalar(a: &IwahoriElement, ring: &CohRing) -> Result<Self> {
        if a.ring != ring.ring {
            return Err(Error::RingMismatch(
                a.ring.to_string(),
                ring.ring.to_string(),
            ));
        }
        let mut out = Self::zero(&a.rd, ring);
        for ((translation, w), &c) in &a.terms {
            out.set_value(translation.clone(), *w, ring.one().scale(c));
        }
        Ok(out)
    }

    pub fn set_value(&mut self, translation: Vec<i64>, w: WeylElement, class: CohClass) {
        let key = (translation, w);
        if class.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, class);
        }
    }

    pub fn value(&self, translation: &[i64], w: WeylElement) -> CohClass {
        self.terms
            .get(&(translation.to_vec(), w))
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_match(&self, other: &Self) -> Result<()> {
        if self.rd.name != other.rd.name {
            return Err(Error::GroupMismatch(
                self.rd.name.clone(),
                other.rd.name.clone(),
            ));
        }
        if self.ring != other.ring {
            return Err(Error::GroupMismatch(
                "derived algebra coefficients".into(),
                "differ between operands".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_match(other)?;
        let mut out = self.clone();
        for ((translation, w), class) in &other.terms {
            let sum = out.value(translation, *w).add(class)?;
            out.set_value(translation.clone(), *w, sum);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for class in out.terms.values_mut() {
            *class = class.neg();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u64) -> Self {
        let mut out = Self::zero(&self.rd, &self.ring);
        for ((translation, w), class) in &self.terms {
            out.set_value(translation.clone(), *w, class.scale(c));
        }
        out
    }

    /// Crossed-product multiplication: (a b)(sigma) = sum over factorizations
    /// sigma = sigma1 sigma2 of a(sigma1) cup (w_{sigma1} . b(sigma2)).
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_match(other)?;
        let mut out = Self::zero(&self.rd, &self.ring);
        for ((l1, w1), v1) in &self.terms {
            for ((l2, w2), v2) in &other.terms {
                let moved = self.rd.weyl_apply(*w1, l2);
                let translation: Vec<i64> =
                    l1.iter().zip(moved.iter()).map(|(a, b)| a + b).collect();
                let w = self.rd.weyl_mul(*w1, *w2);
                let twisted = weyl_left_act(&self.rd, *w1, v2)?;
                let product = v1.cup(&twisted)?;
                let total = out.value(&translation, w).add(&product)?;
                out.set_value(translation, w, total);
            }
        }
        Ok(out)
    }

    /// Push forward along the quotient X_* ⋊ W -> X_*: sum the values over
    /// the Weyl fiber at each translation.
    pub fn compress(&self) -> Result<crate::satake::ToralElement> {
        let mut out = crate::satake::ToralElement::zero(&self.rd, &self.ring)?;
        for ((translation, _), class) in &self.terms {
            let sum = out.value(translation).add(class)?;
            out.set_value(translation, sum)?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Vec<DerivedIwahoriTermJson> {
        self.terms
            .iter()
            .map(|((translation, w), class)| DerivedIwahoriTermJson {
                translation: translation.clone(),
                weyl: self.rd.weyl_word(*w).to_vec(),
                class: crate::cohomology::class_to_json(class),
            })
            .collect()
    }
}

/// The spherical idempotent inside the derived algebra.
pub fn derived_spherical_idempotent(
    rd: &RootDatum,
    ring: &CohRing,
) -> Result<DerivedIwahoriElement> {
    let scalar = spherical_idempotent(rd, ring.ring)?;
    DerivedIwahoriElement::from_scalar(&scalar, ring)
}

/// Compress the two-sided spherical average of the projected degree-one
/// element theta . <h> into the spherical Hecke algebra:
/// |W| e_K Theta <h> e_K pushed forward along the Weyl fiber. The result is
/// sum_lambda Theta_lambda sum_{v in W} delta_{v lambda} (x) (v . h), a
/// W-invariant element of the toral algebra with coefficients in degree one.
pub fn spherical_compress(
    rd: &RootDatum,
    theta: &LaurentElement,
    h: &CohClass,
) -> Result<crate::satake::SphericalElement> {
    let ring_handle = h.ring_handle();
    if theta.ring != ring_handle.ring {
        return Err(Error::RingMismatch(
            theta.ring.to_string(),
            ring_handle.ring.to_string(),
        ));
    }
    if theta.rank != rd.rank {
        return Err(Error::DimensionMismatch(format!(
            "projector rank {} does not match datum rank {}",
            theta.rank, rd.rank
        )));
    }
    if h.degree()? != 1 {
        return Err(Error::Unsupported(
            "spherical compression is defined for degree-one classes".into(),
        ));
    }
    let ring = ring_handle;
    let ek = derived_spherical_idempotent(rd, &ring)?;
    let id = rd.weyl_identity();
    let mut theta_elt = DerivedIwahoriElement::zero(rd, &ring);
    for (exponent, &coeff) in &theta.terms {
        theta_elt.set_value(exponent.clone(), id, ring.one().scale(coeff));
    }
    let h_elt = DerivedIwahoriElement::delta(rd, &ring, &vec![0; rd.rank], id, h)?;
    let scaled = ek.scale(ring.ring.reduce_u64(rd.weyl_order()));
    let product = scaled
        .multiply(&theta_elt)?
        .multiply(&h_elt)?
        .multiply(&ek)?;
    crate::satake::SphericalElement::new(product.compress()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::AbelianLGroup;
    use crate::root_datum::RootDatumSpec;

    fn f7() -> CoeffRing {
        CoeffRing::new(7, 1).unwrap()
    }

    fn pgl2() -> RootDatum {
        RootDatum::catalog("PGL2").unwrap()
    }

    fn simple_reflection(rd: &RootDatum, i: usize) -> WeylElement {
        rd.weyl_from_word(&[i]).unwrap()
    }

    #[test]
    fn weyl_elements_square_to_one() {
        for name in ["SL2", "PGL2", "SL3", "Sp4"] {
            let rd = RootDatum::catalog(name).unwrap();
            let ring = CoeffRing::new(5, 2).unwrap();
            for &i in &rd.simple.clone() {
                let s = simple_reflection(&rd, i);
                let ts = IwahoriElement::from_weyl(&rd, ring, s);
                assert_eq!(
                    ts.multiply(&ts).unwrap(),
                    IwahoriElement::one(&rd, ring),
                    "{name} simple reflection {i}"
                );
            }
        }
    }

    #[test]
    fn translations_form_the_lattice() {
        let rd = pgl2();
        let ring = f7();
        let id = rd.weyl_identity();
        let a = IwahoriElement::delta(&rd, ring, &[2], id, 1).unwrap();
        let b = IwahoriElement::delta(&rd, ring, &[-3], id, 1).unwrap();
        let expected = IwahoriElement::delta(&rd, ring, &[-1], id, 1).unwrap();
        assert_eq!(a.multiply(&b).unwrap(), expected);
        assert_eq!(b.multiply(&a).unwrap(), expected);
    }

    #[test]
    fn reflection_conjugates_translations() {
        let rd = pgl2();
        let ring = f7();
        let id = rd.weyl_identity();
        let s = simple_reflection(&rd, 0);
        let ts = IwahoriElement::from_weyl(&rd, ring, s);
        let mu = IwahoriElement::delta(&rd, ring, &[1], id, 1).unwrap();
        let conjugated = ts.multiply(&mu).unwrap().multiply(&ts).unwrap();
        let expected = IwahoriElement::delta(&rd, ring, &[-1], id, 1).unwrap();
        assert_eq!(conjugated, expected);
    }

    #[test]
    fn spherical_idempotent_squares_to_itself() {
        let rd = pgl2();
        let ring = CoeffRing::new(3, 1).unwrap();
        let ek = spherical_idempotent(&rd, ring).unwrap();
        let id = rd.weyl_identity();
        let s = simple_reflection(&rd, 0);
        assert_eq!(ek.coefficient(&[0], id), 2);
        assert_eq!(ek.coefficient(&[0], s), 2);
        assert_eq!(ek.multiply(&ek).unwrap(), ek);

        let ring7 = f7();
        let ek7 = spherical_idempotent(&rd, ring7).unwrap();
        assert_eq!(ek7.coefficient(&[0], id), 4);
        assert_eq!(ek7.multiply(&ek7).unwrap(), ek7);

        let drop2 = CoeffRing::new(2, 1).unwrap();
        assert!(matches!(
            spherical_idempotent(&rd, drop2),
            Err(Error::NotAUnit { .. })
        ));
    }

    #[test]
    fn central_embedding_commutes_with_everything() {
        let rd = pgl2();
        let ring = f7();
        let mut z = LaurentElement::zero(ring, 1);
        z.insert(vec![1], 1);
        z.insert(vec![-1], 1);
        let central = central_embed(&rd, ring, &z).unwrap();
        let s = simple_reflection(&rd, 0);
        let id = rd.weyl_identity();
        for lambda in -3i64..=3 {
            for w in [id, s] {
                let basis = IwahoriElement::delta(&rd, ring, &[lambda], w, 1).unwrap();
                assert_eq!(
                    central.multiply(&basis).unwrap(),
                    basis.multiply(&central).unwrap(),
                    "lambda = {lambda}"
                );
            }
        }
        let ek = spherical_idempotent(&rd, ring).unwrap();
        let two_sided = ek.multiply(&central).unwrap().multiply(&ek).unwrap();
        let one_sided = ek.multiply(&central).unwrap();
        assert_eq!(two_sided, one_sided);
    }

    #[test]
    fn central_embedding_rejects_asymmetric_input() {
        let rd = pgl2();
        let ring = f7();
        let z = LaurentElement::monomial(ring, vec![1], 1);
        assert!(matches!(
            central_embed(&rd, ring, &z),
            Err(Error::NotWeylInvariant)
        ));
    }

    #[test]
    fn twisted_characters_on_pgl2() {
        let rd = pgl2();
        let ring = f7();
        let s = simple_reflection(&rd, 0);
        assert_eq!(twisted_character(&rd, &ring, &[2], s).unwrap(), vec![4]);
        assert_eq!(
            twisted_character(&rd, &ring, &[2], rd.weyl_identity()).unwrap(),
            vec![2]
        );
    }

    #[test]
    fn discriminant_detects_regular_characters() {
        let rd = pgl2();
        let ring = f7();
        assert_eq!(discriminant_eval(&rd, &ring, &[2]).unwrap(), 3);
        let s = simple_reflection(&rd, 0);
        for c in 1u64..7 {
            let value = discriminant_eval(&rd, &ring, &[c]).unwrap();
            let twisted = twisted_character(&rd, &ring, &[c], s).unwrap();
            let fixed = twisted == vec![c];
            assert_eq!(value == 0, fixed, "chi(mu) = {c}");
            assert_eq!(fixed, c == 1 || c == 6, "chi(mu) = {c}");
        }
    }

    #[test]
    fn induced_representation_matrices() {
        let rd = pgl2();
        let rep = InducedRep::new(&rd, f7(), &[2]).unwrap();
        let id = rd.weyl_identity();
        let s = simple_reflection(&rd, 0);

        let t = rep.basis_matrix(&[1], id).unwrap();
        assert_eq!(
            (t.get(0, 0), t.get(0, 1), t.get(1, 0), t.get(1, 1)),
            (2, 0, 0, 4)
        );
        let p = rep.basis_matrix(&[0], s).unwrap();
        assert_eq!(
            (p.get(0, 0), p.get(0, 1), p.get(1, 0), p.get(1, 1)),
            (0, 1, 1, 0)
        );

        let ek = spherical_idempotent(&rd, f7()).unwrap();
        let ek_matrix = rep.matrix_of(&ek).unwrap();
        assert_eq!(ek_matrix.rank_mod_ell(), 1);
        assert!(ek_matrix.mul(&ek_matrix).sub(&ek_matrix).is_zero());
    }

    #[test]
    fn induced_representation_is_multiplicative() {
        let rd = pgl2();
        let ring = f7();
        let rep = InducedRep::new(&rd, ring, &[2]).unwrap();
        let id = rd.weyl_identity();
        let s = simple_reflection(&rd, 0);
        let samples = [
            IwahoriElement::from_weyl(&rd, ring, s),
            IwahoriElement::delta(&rd, ring, &[1], id, 1).unwrap(),
            IwahoriElement::delta(&rd, ring, &[1], s, 3).unwrap(),
            IwahoriElement::delta(&rd, ring, &[-2], id, 5)
                .unwrap()
                .add(&IwahoriElement::one(&rd, ring))
                .unwrap(),
        ];
        for a in &samples {
            for b in &samples {
                let lhs = rep.matrix_of(&a.multiply(b).unwrap()).unwrap();
                let rhs = rep.matrix_of(a).unwrap().mul(&rep.matrix_of(b).unwrap());
                assert!(lhs.sub(&rhs).is_zero());
            }
        }
    }

    #[test]
    fn morita_ranks_for_a_regular_character() {
        let rd = pgl2();
        let report = morita_check(&rd, f7(), &[2], 2).unwrap();
        assert!(report.applicable);
        assert_eq!(report.reason, None);
        assert_eq!(report.discriminant_value, 3);
        assert_eq!(report.endo_rank, 4);
        assert_eq!(report.endo_expected, 4);
        assert_eq!(report.hom_ik_rank, 2);
        assert_eq!(report.hom_ki_rank, 2);
        assert_eq!(report.kk_rank, 1);
    }

    #[test]
    fn morita_ranks_degrade_for_a_fixed_character() {
        let rd = pgl2();
        let report = morita_check(&rd, f7(), &[1], 2).unwrap();
        assert!(!report.applicable);
        let reason = report.reason.unwrap();
        assert!(reason.contains("discriminant"));
        assert!(reason.contains("fixed"));
        assert_eq!(report.discriminant_value, 0);
        assert_eq!(report.endo_rank, 2);
        assert_eq!(report.hom_ik_rank, 1);
        assert_eq!(report.hom_ki_rank, 1);
        assert_eq!(report.kk_rank, 1);
    }

    #[test]
    fn theta_projector_on_pgl2() {
        let rd = pgl2();
        let ring = f7();
        let theta = theta_projector(&rd, &ring, &[2]).unwrap();
        assert_eq!(theta.coeff(&[1]), 3);
        assert_eq!(theta.coeff(&[0]), 2);
        assert_eq!(theta.terms.len(), 2);
        assert_eq!(theta.eval_character(&[2]).unwrap(), 1);
        assert_eq!(theta.eval_character(&[4]).unwrap(), 0);

        assert!(matches!(
            theta_projector(&rd, &ring, &[6]),
            Err(Error::OrbitNotFree)
        ));
    }

    #[test]
    fn theta_projector_trivial_weyl_group() {
        let spec = RootDatumSpec {
            name: "T1".into(),
            rank: 1,
            pairing: vec![vec![1]],
            roots: vec![],
            coroots: vec![],
            simple: vec![],
        };
        let rd = RootDatum::build(&spec).unwrap();
        assert_eq!(rd.weyl_order(), 1);
        let ring = f7();
        let theta = theta_projector(&rd, &ring, &[3]).unwrap();
        assert_eq!(theta, LaurentElement::one(ring, 1));
    }

    #[test]
    fn theta_projector_exact_over_prime_square() {
        let rd = pgl2();
        let ring = CoeffRing::new(7, 2).unwrap();
        let theta = theta_projector(&rd, &ring, &[2]).unwrap();
        assert_eq!(theta.eval_character(&[2]).unwrap(), 1);
        assert_eq!(theta.eval_character(&[ring.inv(2).unwrap()]).unwrap(), 0);
    }

    fn coh_setup(ell: u64) -> (RootDatum, CohRing) {
        let rd = pgl2();
        let group = AbelianLGroup::cyclic(ell, 1).unwrap();
        let ring = CohRing::new(group, CoeffRing::new(ell, 1).unwrap()).unwrap();
        (rd, ring)
    }

    #[test]
    fn derived_unit_terms_multiply_by_cup() {
        let (rd, ring) = coh_setup(7);
        let id = rd.weyl_identity();
        let origin = vec![0i64];
        let x = ring.x(0);
        let y = ring.y(0);
        let hx = DerivedIwahoriElement::delta(&rd, &ring, &origin, id, &x).unwrap();
        let hy = DerivedIwahoriElement::delta(&rd, &ring, &origin, id, &y).unwrap();
        let product = hx.multiply(&hy).unwrap();
        assert_eq!(product.value(&origin, id), x.cup(&y).unwrap());
        assert!(hx.multiply(&hx).unwrap().is_zero());
    }

    #[test]
    fn derived_reflection_twists_coefficients() {
        let (rd, ring) = coh_setup(7);
        let id = rd.weyl_identity();
        let s = simple_reflection(&rd, 0);
        let origin = vec![0i64];
        let x = ring.x(0);
        let ts = DerivedIwahoriElement::delta(&rd, &ring, &origin, s, &ring.one()).unwrap();
        let hx = DerivedIwahoriElement::delta(&rd, &ring, &origin, id, &x).unwrap();
        let conjugated = ts.multiply(&hx).unwrap().multiply(&ts).unwrap();
        let twisted = crate::cohomology::weyl_left_act(&rd, s, &x).unwrap();
        assert_eq!(conjugated.value(&origin, id), twisted);
        assert_eq!(twisted, x.neg());
    }

    #[test]
    fn derived_product_is_associative_on_samples() {
        let (rd, ring) = coh_setup(7);
        let id = rd.weyl_identity();
        let s = simple_reflection(&rd, 0);
        let x = ring.x(0);
        let one = ring.one();
        let samples = [
            DerivedIwahoriElement::delta(&rd, &ring, &[1], s, &x).unwrap(),
            DerivedIwahoriElement::delta(&rd, &ring, &[-1], id, &one.scale(3))
                .unwrap()
                .add(&DerivedIwahoriElement::delta(&rd, &ring, &[0], s, &x).unwrap())
                .unwrap(),
            derived_spherical_idempotent(&rd, &ring).unwrap(),
        ];
        for a in &samples {
            for b in &samples {
                for c in &samples {
                    let left = a.multiply(b).unwrap().multiply(c).unwrap();
                    let right = a.multiply(&b.multiply(c).unwrap()).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn spherical_compression_of_the_projected_generator() {
        let (rd, ring) = coh_setup(7);
        let scalar = ring.ring;
        let theta = theta_projector(&rd, &scalar, &[2]).unwrap();
        let x = ring.x(0);
        let compressed = spherical_compress(&rd, &theta, &x).unwrap();
        let toral = compressed.inner();

        assert_eq!(toral.value(&[1]), x.scale(3));
        assert_eq!(toral.value(&[-1]), x.scale(4));
        assert_eq!(toral.value(&[0]), ring.zero());
        assert_eq!(toral.support.len(), 2);

        let s = simple_reflection(&rd, 0);
        let mut direct = crate::satake::ToralElement::zero(&rd, &ring).unwrap();
        for (lambda, &coeff) in &theta.terms {
            for w in [rd.weyl_identity(), s] {
                let moved = rd.weyl_apply(w, lambda);
                let class = weyl_left_act(&rd, w, &x).unwrap().scale(coeff);
                let sum = direct.value(&moved).add(&class).unwrap();
                direct.set_value(&moved, sum).unwrap();
            }
        }
        assert_eq!(*toral, direct);

        for w in rd.weyl_elements() {
            let chi_w = twisted_character(&rd, &scalar, &[2], w).unwrap();
            let mut evaluated = ring.zero();
            for (lambda, class) in &toral.support {
                let value = character_value(&scalar, &chi_w, lambda).unwrap();
                evaluated = evaluated.add(&class.scale(value)).unwrap();
            }
            let expected = weyl_left_act(&rd, w, &x).unwrap();
            assert_eq!(evaluated, expected, "evaluation at the {w:?}-twist");
        }
    }

    #[test]
    fn spherical_compression_of_a_bare_generator() {
        let (rd, ring) = coh_setup(7);
        let x = ring.x(0);
        let id = rd.weyl_identity();
        let ek = derived_spherical_idempotent(&rd, &ring).unwrap();
        let middle = DerivedIwahoriElement::delta(&rd, &ring, &[1], id, &x).unwrap();
        let averaged = ek.multiply(&middle).unwrap().multiply(&ek).unwrap();
        let toral = averaged.compress().unwrap();
        assert_eq!(toral.value(&[1]), x.scale(4));
        assert_eq!(toral.value(&[-1]), x.scale(3));
    }

    #[test]
    fn spherical_compression_rejects_wrong_degree() {
        let (rd, ring) = coh_setup(7);
        let scalar = ring.ring;
        let theta = theta_projector(&rd, &scalar, &[2]).unwrap();
        let y = ring.y(0);
        assert!(matches!(
            spherical_compress(&rd, &theta, &y),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let rd = pgl2();
        let ring = f7();
        let s = simple_reflection(&rd, 0);
        let mut a = IwahoriElement::zero(&rd, ring);
        a.insert(vec![2], s, 3);
        a.insert(vec![-1], rd.weyl_identity(), 5);
        let json = a.to_json();
        let text = serde_json::to_string(&json).unwrap();
        let parsed: Vec<IwahoriTermJson> = serde_json::from_str(&text).unwrap();
        let back = IwahoriElement::from_json(&rd, ring, &parsed).unwrap();
        assert_eq!(back, a);
    }
}
