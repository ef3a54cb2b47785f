//! Root data with explicit character/cocharacter lattices, Weyl groups
//! enumerated as integer matrices, dominance, the twisted discriminant, and
//! the rank-1 dual-side derivative map.
//!
//! A root datum is stored in coordinates: X^* and X_* are Z^rank with a fixed
//! integral pairing matrix, roots live in X^* coordinates, coroots in X_*
//! coordinates, matched by index.

use crate::coeff::CoeffRing;
use crate::error::{Error, Result};
use crate::laurent::LaurentElement;
use crate::linalg::Mat;
use serde::{Deserialize, Serialize};

/// Serializable description of a root datum, either by catalog name or by
/// explicit data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RootDatumSpec {
    pub name: String,
    pub rank: usize,
    /// pairing[i][j] = <(X^* basis)_i, (X_* basis)_j>.
    pub pairing: Vec<Vec<i64>>,
    /// Root coordinates in the X^* basis.
    pub roots: Vec<Vec<i64>>,
    /// Coroot coordinates in the X_* basis, matched to `roots` by index.
    pub coroots: Vec<Vec<i64>>,
    /// Indices into `roots` forming the simple system.
    pub simple: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WeylElement(pub usize);

#[derive(Debug, Clone)]
struct WeylData {
    /// Action on X_* (columns act on coweight coordinates).
    matrix: Vec<Vec<i64>>,
    /// Reduced word in simple reflection indices (canonical BFS discovery).
    word: Vec<usize>,
    inverse: usize,
}

#[derive(Debug, Clone)]
pub struct RootDatum {
    pub name: String,
    pub rank: usize,
    pub pairing: Vec<Vec<i64>>,
    pub roots: Vec<Vec<i64>>,
    pub coroots: Vec<Vec<i64>>,
    pub simple: Vec<usize>,
    weyl: Vec<WeylData>,
}

const WEYL_CAP: usize = 1 << 16;

fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    (0..m.len())
        .map(|i| (0..v.len()).map(|j| m[i][j] * v[j]).sum())
        .collect()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn identity_mat(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

impl RootDatum {
    /// Build and validate a root datum from explicit data.
    pub fn build(spec: &RootDatumSpec) -> Result<RootDatum> {
        let rank = spec.rank;
        if spec.pairing.len() != rank || spec.pairing.iter().any(|r| r.len() != rank) {
            return Err(Error::InvalidRootDatum("pairing matrix shape".into()));
        }
        if spec.roots.len() != spec.coroots.len() {
            return Err(Error::InvalidRootDatum(
                "roots and coroots must match by index".into(),
            ));
        }
        for (alpha, alpha_v) in spec.roots.iter().zip(spec.coroots.iter()) {
            if alpha.len() != rank || alpha_v.len() != rank {
                return Err(Error::InvalidRootDatum("root coordinate length".into()));
            }
            let p = pair_with(&spec.pairing, alpha, alpha_v);
            if p != 2 {
                return Err(Error::InvalidRootDatum(format!(
                    "<alpha, alpha^vee> = {p} for root {alpha:?}, expected 2"
                )));
            }
        }
        // Every root must have its negative present.
        for alpha in &spec.roots {
            let neg: Vec<i64> = alpha.iter().map(|c| -c).collect();
            if !spec.roots.contains(&neg) {
                return Err(Error::InvalidRootDatum(format!(
                    "root set not symmetric: missing -{alpha:?}"
                )));
            }
        }
        for &i in &spec.simple {
            if i >= spec.roots.len() {
                return Err(Error::InvalidRootDatum("simple index out of range".into()));
            }
        }
        let datum = RootDatum {
            name: spec.name.clone(),
            rank,
            pairing: spec.pairing.clone(),
            roots: spec.roots.clone(),
            coroots: spec.coroots.clone(),
            simple: spec.simple.clone(),
            weyl: Vec::new(),
        };
        let weyl = datum.enumerate_weyl()?;
        let datum = RootDatum { weyl, ..datum };
        // Simple reflections must permute the root set (on the X^* side).
        for &i in &datum.simple {
            for alpha in &datum.roots {
                let image = datum.reflect_character(i, alpha);
                if !datum.roots.contains(&image) {
                    return Err(Error::InvalidRootDatum(format!(
                        "reflection {i} does not preserve the root set at {alpha:?}"
                    )));
                }
            }
        }
        Ok(datum)
    }

    /// Catalog entry by name: SL2, PGL2, SL3, Sp4.
    pub fn catalog(name: &str) -> Result<RootDatum> {
        let spec = match name {
            // X^* = Z w (fundamental weight), alpha = 2w; X_* = Z alpha^vee.
            "SL2" => RootDatumSpec {
                name: "SL2".into(),
                rank: 1,
                pairing: vec![vec![1]],
                roots: vec![vec![2], vec![-2]],
                coroots: vec![vec![1], vec![-1]],
                simple: vec![0],
            },
            // X^* = Z alpha, X_* = Z mu with alpha^vee = 2 mu.
            "PGL2" => RootDatumSpec {
                name: "PGL2".into(),
                rank: 1,
                pairing: vec![vec![1]],
                roots: vec![vec![1], vec![-1]],
                coroots: vec![vec![2], vec![-2]],
                simple: vec![0],
            },
            // Weight lattice with fundamental-weight basis; coroot basis dual.
            "SL3" => RootDatumSpec {
                name: "SL3".into(),
                rank: 2,
                pairing: vec![vec![1, 0], vec![0, 1]],
                roots: vec![
                    vec![2, -1],
                    vec![-1, 2],
                    vec![1, 1],
                    vec![-2, 1],
                    vec![1, -2],
                    vec![-1, -1],
                ],
                coroots: vec![
                    vec![1, 0],
                    vec![0, 1],
                    vec![1, 1],
                    vec![-1, 0],
                    vec![0, -1],
                    vec![-1, -1],
                ],
                simple: vec![0, 1],
            },
            // Type C2 in the standard e-basis: short e1 - e2, long 2 e2.
            "Sp4" => RootDatumSpec {
                name: "Sp4".into(),
                rank: 2,
                pairing: vec![vec![1, 0], vec![0, 1]],
                roots: vec![
                    vec![1, -1],
                    vec![0, 2],
                    vec![1, 1],
                    vec![2, 0],
                    vec![-1, 1],
                    vec![0, -2],
                    vec![-1, -1],
                    vec![-2, 0],
                ],
                coroots: vec![
                    vec![1, -1],
                    vec![0, 1],
                    vec![1, 1],
                    vec![1, 0],
                    vec![-1, 1],
                    vec![0, -1],
                    vec![-1, -1],
                    vec![-1, 0],
                ],
                simple: vec![0, 1],
            },
            other => return Err(Error::UnknownGroup(other.to_string())),
        };
        RootDatum::build(&spec)
    }

    pub fn spec(&self) -> RootDatumSpec {
        RootDatumSpec {
            name: self.name.clone(),
            rank: self.rank,
            pairing: self.pairing.clone(),
            roots: self.roots.clone(),
            coroots: self.coroots.clone(),
            simple: self.simple.clone(),
        }
    }

    pub fn pair(&self, character: &[i64], coweight: &[i64]) -> i64 {
        pair_with(&self.pairing, character, coweight)
    }

    /// Reflection in simple root `simple_idx` acting on X_* coordinates.
    fn reflection_matrix(&self, simple_idx: usize) -> Vec<Vec<i64>> {
        let root_idx = self.simple[simple_idx];
        let alpha = &self.roots[root_idx];
        let alpha_v = &self.coroots[root_idx];
        let mut m = identity_mat(self.rank);
        for k in 0..self.rank {
            let basis: Vec<i64> = (0..self.rank).map(|j| i64::from(j == k)).collect();
            let c = self.pair(alpha, &basis);
            for j in 0..self.rank {
                m[j][k] -= c * alpha_v[j];
            }
        }
        m
    }

    /// Reflection in simple root `simple_idx` acting on X^* coordinates.
    fn reflect_character(&self, simple_idx: usize, chi: &[i64]) -> Vec<i64> {
        let root_idx = self.simple[simple_idx];
        let alpha = &self.roots[root_idx];
        let alpha_v = &self.coroots[root_idx];
        let c = self.pair(chi, alpha_v);
        (0..self.rank).map(|j| chi[j] - c * alpha[j]).collect()
    }

    fn enumerate_weyl(&self) -> Result<Vec<WeylData>> {
        use std::collections::HashMap;
        let gens: Vec<Vec<Vec<i64>>> = (0..self.simple.len())
            .map(|i| self.reflection_matrix(i))
            .collect();
        let id = identity_mat(self.rank);
        let mut elements = vec![WeylData {
            matrix: id.clone(),
            word: vec![],
            inverse: 0,
        }];
        let mut index: HashMap<Vec<Vec<i64>>, usize> = HashMap::new();
        index.insert(id, 0);
        let mut frontier = vec![0usize];
        while let Some(&_) = frontier.first() {
            let mut next = Vec::new();
            for &w in &frontier {
                for (gi, g) in gens.iter().enumerate() {
                    // Right multiplication: w * s_gi as maps, i.e. apply s first.
                    let m = mat_mul(&elements[w].matrix, g);
                    if !index.contains_key(&m) {
                        let mut word = elements[w].word.clone();
                        word.push(gi);
                        let idx = elements.len();
                        index.insert(m.clone(), idx);
                        elements.push(WeylData {
                            matrix: m,
                            word,
                            inverse: usize::MAX,
                        });
                        next.push(idx);
                        if elements.len() > WEYL_CAP {
                            return Err(Error::InvalidRootDatum(
                                "reflections do not generate a small finite group".into(),
                            ));
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        // Fill inverses.
        let matrices: Vec<Vec<Vec<i64>>> = elements.iter().map(|e| e.matrix.clone()).collect();
        for i in 0..elements.len() {
            let inv = matrices
                .iter()
                .position(|m| {
                    let prod = mat_mul(&matrices[i], m);
                    prod == identity_mat(self.rank)
                })
                .ok_or_else(|| Error::InvalidRootDatum("missing inverse".into()))?;
            elements[i].inverse = inv;
        }
        Ok(elements)
    }

    pub fn weyl_order(&self) -> u64 {
        self.weyl.len() as u64
    }

    pub fn weyl_elements(&self) -> Vec<WeylElement> {
        (0..self.weyl.len()).map(WeylElement).collect()
    }

    pub fn weyl_identity(&self) -> WeylElement {
        WeylElement(0)
    }

    pub fn weyl_matrix(&self, w: WeylElement) -> &Vec<Vec<i64>> {
        &self.weyl[w.0].matrix
    }

    pub fn weyl_word(&self, w: WeylElement) -> &[usize] {
        &self.weyl[w.0].word
    }

    pub fn weyl_inverse(&self, w: WeylElement) -> WeylElement {
        WeylElement(self.weyl[w.0].inverse)
    }

    pub fn weyl_mul(&self, a: WeylElement, b: WeylElement) -> WeylElement {
        let m = mat_mul(&self.weyl[a.0].matrix, &self.weyl[b.0].matrix);
        WeylElement(
            self.weyl
                .iter()
                .position(|e| e.matrix == m)
                .expect("product stays in the group"),
        )
    }

    pub fn weyl_from_word(&self, word: &[usize]) -> Result<WeylElement> {
        let mut m = identity_mat(self.rank);
        for &s in word {
            if s >= self.simple.len() {
                return Err(Error::Parse(format!("simple reflection index {s}")));
            }
            m = mat_mul(&m, &self.reflection_matrix(s));
        }
        self.weyl
            .iter()
            .position(|e| e.matrix == m)
            .map(WeylElement)
            .ok_or_else(|| Error::InvalidRootDatum("word leaves the group".into()))
    }

    pub fn weyl_apply(&self, w: WeylElement, coweight: &[i64]) -> Vec<i64> {
        mat_vec(&self.weyl[w.0].matrix, coweight)
    }

    pub fn is_dominant(&self, coweight: &[i64]) -> bool {
        self.simple
            .iter()
            .all(|&i| self.pair(&self.roots[i], coweight) >= 0)
    }

    /// The dominant representative of the W-orbit, with the first Weyl element
    /// (in the canonical enumeration order) carrying lambda onto it.
    pub fn dominant_representative(&self, coweight: &[i64]) -> (Vec<i64>, WeylElement) {
        for idx in 0..self.weyl.len() {
            let image = self.weyl_apply(WeylElement(idx), coweight);
            if self.is_dominant(&image) {
                return (image, WeylElement(idx));
            }
        }
        unreachable!("every orbit meets the dominant cone");
    }

    pub fn orbit(&self, coweight: &[i64]) -> Vec<Vec<i64>> {
        let mut orbit: Vec<Vec<i64>> = Vec::new();
        for idx in 0..self.weyl.len() {
            let image = self.weyl_apply(WeylElement(idx), coweight);
            if !orbit.contains(&image) {
                orbit.push(image);
            }
        }
        orbit
    }

    pub fn stabilizer(&self, coweight: &[i64]) -> Vec<WeylElement> {
        (0..self.weyl.len())
            .map(WeylElement)
            .filter(|&w| self.weyl_apply(w, coweight) == coweight)
            .collect()
    }

    /// Divisibility of a root in X^*: the largest m with alpha/m integral.
    pub fn root_divisibility(&self, root_idx: usize) -> i64 {
        let g = self.roots[root_idx]
            .iter()
            .fold(0i64, |acc, &c| gcd(acc, c.abs()));
        g.max(1)
    }

    /// alpha^* = (alpha^vee)^{m_alpha} in additive X_* coordinates.
    pub fn alpha_star(&self, root_idx: usize) -> Vec<i64> {
        let m = self.root_divisibility(root_idx);
        self.coroots[root_idx].iter().map(|&c| m * c).collect()
    }

    /// The twisted discriminant f = prod_alpha (1 - x^{alpha^*}) in S[X_*],
    /// expanded exactly. W-invariance is checked on construction.
    pub fn discriminant(&self, s: &CoeffRing) -> Result<LaurentElement> {
        let mut f = LaurentElement::one(*s, self.rank);
        for root_idx in 0..self.roots.len() {
            let mut factor = LaurentElement::one(*s, self.rank);
            factor.insert(self.alpha_star(root_idx), -1);
            f = f.mul(&factor);
        }
        for w in self.weyl_elements() {
            let transformed = f.transform_exponents(self.weyl_matrix(w));
            if transformed != f {
                return Err(Error::InvalidRootDatum(
                    "discriminant is not W-invariant".into(),
                ));
            }
        }
        Ok(f)
    }
}

fn pair_with(pairing: &[Vec<i64>], character: &[i64], coweight: &[i64]) -> i64 {
    let mut acc = 0i64;
    for (a, chi_a) in character.iter().enumerate() {
        for (b, lam_b) in coweight.iter().enumerate() {
            acc += chi_a * pairing[a][b] * lam_b;
        }
    }
    acc
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The rank-1 dual-side derivative map evaluated on the standard coroot basis
/// vector diag(1, -1) of the dual torus Lie algebra: for the k-th power of
/// the standard character, the two torus embeddings into the centralizer of g
/// contribute opposite copies weighted by the eigenvalues of g^k, summing to
/// 2 g^k - trace(g^k) Id.
///
/// `g` must be regular semisimple; scalar matrices are rejected (for a scalar
/// the output form 2g - trace(g) Id collapses to zero and no eigenbasis
/// separates the embeddings).
pub fn e_psi_g(s: &CoeffRing, g: &Mat, psi_power: i64) -> Result<Mat> {
    if g.rows != 2 || g.cols != 2 {
        return Err(Error::DimensionMismatch(
            "rank-1 dual side expects a 2x2 matrix".into(),
        ));
    }
    let gk = if psi_power >= 0 {
        g.pow(psi_power as u64)
    } else {
        let det = s.sub(
            s.mul(g.get(0, 0), g.get(1, 1)),
            s.mul(g.get(0, 1), g.get(1, 0)),
        );
        let det_inv = s.inv(det)?;
        // Explicit 2x2 inverse, then the positive power.
        let mut inv = Mat::zeros(*s, 2, 2);
        inv.set(0, 0, s.mul(det_inv, g.get(1, 1)));
        inv.set(0, 1, s.mul(det_inv, s.neg(g.get(0, 1))));
        inv.set(1, 0, s.mul(det_inv, s.neg(g.get(1, 0))));
        inv.set(1, 1, s.mul(det_inv, g.get(0, 0)));
        inv.pow((-psi_power) as u64)
    };
    // Regular-semisimple gate on g itself: 2g - trace(g) Id must be nonzero.
    let test = g
        .scale(2)
        .sub(&Mat::identity(*s, 2).scale(s.add(g.get(0, 0), g.get(1, 1))));
    if test.is_zero() {
        return Err(Error::NotRegularSemisimple);
    }
    let trace = s.add(gk.get(0, 0), gk.get(1, 1));
    Ok(gk.scale(2).sub(&Mat::identity(*s, 2).scale(trace)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_weyl_orders() {
        assert_eq!(RootDatum::catalog("SL2").unwrap().weyl_order(), 2);
        assert_eq!(RootDatum::catalog("PGL2").unwrap().weyl_order(), 2);
        assert_eq!(RootDatum::catalog("SL3").unwrap().weyl_order(), 6);
        assert_eq!(RootDatum::catalog("Sp4").unwrap().weyl_order(), 8);
        assert!(RootDatum::catalog("E8").is_err());
    }

    #[test]
    fn pgl2_reflection_negates_the_coweight() {
        let rd = RootDatum::catalog("PGL2").unwrap();
        let s = rd.weyl_from_word(&[0]).unwrap();
        assert_eq!(rd.weyl_apply(s, &[1]), vec![-1]);
    }

    #[test]
    fn dominance_and_representatives_rank_one() {
        let rd = RootDatum::catalog("PGL2").unwrap();
        assert!(rd.is_dominant(&[1]));
        assert!(!rd.is_dominant(&[-2]));
        let (rep, w) = rd.dominant_representative(&[-3]);
        assert_eq!(rep, vec![3]);
        assert_eq!(w, rd.weyl_from_word(&[0]).unwrap());
        // Idempotent with the identity element on dominant input.
        let (rep2, w2) = rd.dominant_representative(&[3]);
        assert_eq!(rep2, vec![3]);
        assert_eq!(w2, rd.weyl_identity());
    }

    #[test]
    fn sl3_antidominant_orbit() {
        let rd = RootDatum::catalog("SL3").unwrap();
        // lambda = -(alpha1^vee + alpha2^vee) pairs to -1 with both simple
        // roots: anti-dominant regular, so the orbit has 6 elements and the
        // longest element carries lambda to the dominant chamber.
        let lambda = vec![-1, -1];
        let orbit = rd.orbit(&lambda);
        assert_eq!(orbit.len(), 6);
        let (rep, w) = rd.dominant_representative(&lambda);
        assert_eq!(rep, vec![1, 1]);
        assert_eq!(rd.weyl_word(w).len(), 3, "longest element of S_3");
        assert!(rd.is_dominant(&rep));
    }

    #[test]
    fn dominant_stabilizer_sizes() {
        let rd = RootDatum::catalog("SL3").unwrap();
        assert_eq!(rd.stabilizer(&[0, 0]).len(), 6);
        // (1,2) is on the alpha1 wall: <alpha1, (1,2)> = 0, <alpha2, (1,2)> = 3.
        assert!(rd.is_dominant(&[1, 2]));
        assert_eq!(rd.stabilizer(&[1, 2]).len(), 2);
        assert_eq!(rd.orbit(&[1, 2]).len(), 3);
        // rho^vee = (1,1) is regular.
        assert_eq!(rd.stabilizer(&[1, 1]).len(), 1);
        // A coroot is not dominant and has trivial stabilizer.
        assert!(!rd.is_dominant(&[1, 0]));
        assert_eq!(rd.stabilizer(&[1, 0]).len(), 1);
    }

    #[test]
    fn alpha_star_examples() {
        let sl2 = RootDatum::catalog("SL2").unwrap();
        // alpha = 2w is divisible by 2, so alpha^* = 2 alpha^vee.
        assert_eq!(sl2.alpha_star(0), vec![2]);
        let pgl2 = RootDatum::catalog("PGL2").unwrap();
        // alpha is primitive, alpha^* = alpha^vee = 2 mu.
        assert_eq!(pgl2.alpha_star(0), vec![2]);
    }

    #[test]
    fn discriminants_rank_one() {
        let s = CoeffRing::new(7, 1).unwrap();
        let sl2 = RootDatum::catalog("SL2").unwrap();
        let f = sl2.discriminant(&s).unwrap();
        // 2 - nu^2 - nu^-2.
        assert_eq!(f.coeff(&[0]), 2);
        assert_eq!(f.coeff(&[2]), 6);
        assert_eq!(f.coeff(&[-2]), 6);
        let pgl2 = RootDatum::catalog("PGL2").unwrap();
        let g = pgl2.discriminant(&s).unwrap();
        assert_eq!(g.coeff(&[0]), 2);
        assert_eq!(g.coeff(&[2]), 6);
        assert_eq!(g.coeff(&[-2]), 6);
    }

    #[test]
    fn sp4_discriminant_is_weyl_invariant() {
        let s = CoeffRing::new(3, 1).unwrap();
        // Construction already checks invariance; just confirm it builds and
        // has the constant term |roots| choose expansion at 0.
        let sp4 = RootDatum::catalog("Sp4").unwrap();
        let f = sp4.discriminant(&s).unwrap();
        assert!(f.terms.contains_key(&vec![0, 0]));
    }

    #[test]
    fn weyl_group_laws() {
        let rd = RootDatum::catalog("Sp4").unwrap();
        for a in rd.weyl_elements() {
            let inv = rd.weyl_inverse(a);
            assert_eq!(rd.weyl_mul(a, inv), rd.weyl_identity());
            for b in rd.weyl_elements() {
                let ab = rd.weyl_mul(a, b);
                let l = rd.weyl_apply(ab, &[1, 2]);
                let r = rd.weyl_apply(a, &rd.weyl_apply(b, &[1, 2]));
                assert_eq!(l, r, "composition acts as iterated application");
            }
        }
    }

    #[test]
    fn e_psi_g_diagonal_example() {
        let s = CoeffRing::new(3, 2).unwrap();
        let g = Mat::from_rows(s, &[vec![2, 0], vec![0, 5]]);
        let out = e_psi_g(&s, &g, 1).unwrap();
        assert_eq!(out.get(0, 0), 6);
        assert_eq!(out.get(1, 1), 3);
        assert_eq!(out.get(0, 1), 0);
        // Output commutes with g.
        assert_eq!(out.mul(&g), g.mul(&out));
    }

    #[test]
    fn e_psi_g_rejects_scalars() {
        let s = CoeffRing::new(3, 2).unwrap();
        let id = Mat::identity(s, 2);
        assert_eq!(e_psi_g(&s, &id, 1), Err(Error::NotRegularSemisimple));
        let scalar = Mat::from_rows(s, &[vec![4, 0], vec![0, 4]]);
        assert_eq!(e_psi_g(&s, &scalar, 1), Err(Error::NotRegularSemisimple));
    }

    #[test]
    fn e_psi_g_power_of_character() {
        let s = CoeffRing::new(3, 2).unwrap();
        let g = Mat::from_rows(s, &[vec![2, 0], vec![0, 5]]);
        // psi^2: 2 g^2 - tr(g^2) = diag(2*4 - (4+7), 2*7 - 11) = diag(-3, 3).
        let out = e_psi_g(&s, &g, 2).unwrap();
        assert_eq!(out.get(0, 0), 6);
        assert_eq!(out.get(1, 1), 3);
        // psi^-1 uses g^-1 = diag(5, 2): 2*5 - 7 = 3, 2*2 - 7 = -3.
        let out_neg = e_psi_g(&s, &g, -1).unwrap();
        assert_eq!(out_neg.get(0, 0), 3);
        assert_eq!(out_neg.get(1, 1), 6);
    }
}
