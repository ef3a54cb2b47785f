//! Coefficient rings Z/l^r, finite abelian l-groups, and homomorphisms.
//!
//! All arithmetic is exact. Residues are stored as `u64` values reduced into
//! `[0, modulus)`; intermediate products go through `u128`, so any modulus
//! below 2^63 is safe. Construction rejects moduli that do not fit.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Deterministic Miller-Rabin, valid for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Writes `q` as `p^k` with `p` prime, if possible.
pub fn prime_power_decompose(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    if is_prime(q) {
        return Some((q, 1));
    }
    let mut p = 2u64;
    while p.saturating_mul(p) <= q {
        if q % p == 0 {
            let mut m = q;
            let mut k = 0u32;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            return if m == 1 { Some((p, k)) } else { None };
        }
        p += 1;
    }
    None
}

/// The coefficient ring Z/l^r with `l` prime and `r >= 1`.
///
/// Carried by value everywhere; elements are bare `u64` residues interpreted
/// relative to a ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoeffRing {
    pub ell: u64,
    pub r: u32,
    pub modulus: u64,
}

impl std::fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Z/{}^{}", self.ell, self.r)
    }
}

impl CoeffRing {
    pub fn new(ell: u64, r: u32) -> Result<Self> {
        if !is_prime(ell) {
            return Err(Error::NotPrime(ell));
        }
        if r == 0 {
            return Err(Error::ZeroExponent);
        }
        let modulus = ell
            .checked_pow(r)
            .filter(|&m| m < (1u64 << 63))
            .ok_or(Error::ModulusOverflow { ell, r })?;
        Ok(CoeffRing { ell, r, modulus })
    }

    /// The same prime at a lower exponent, for coefficient change.
    pub fn reduced(&self, r: u32) -> Result<Self> {
        CoeffRing::new(self.ell, r)
    }

    pub fn reduce_u64(&self, a: u64) -> u64 {
        a % self.modulus
    }

    pub fn reduce_i128(&self, a: i128) -> u64 {
        let m = self.modulus as i128;
        (((a % m) + m) % m) as u64
    }

    pub fn from_i64(&self, a: i64) -> u64 {
        self.reduce_i128(a as i128)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.modulus
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.modulus - b % self.modulus) % self.modulus
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a % self.modulus
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.modulus)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.modulus)
    }

    pub fn is_unit(&self, a: u64) -> bool {
        a % self.ell != 0
    }

    /// Multiplicative inverse; errors on non-units (no partial answers).
    pub fn inv(&self, a: u64) -> Result<u64> {
        let a = self.reduce_u64(a);
        if !self.is_unit(a) {
            return Err(Error::NotAUnit {
                value: a,
                modulus: self.modulus,
            });
        }
        // |(Z/l^r)^x| = l^(r-1)(l-1), so a^(phi-1) inverts a.
        let phi = self.modulus / self.ell * (self.ell - 1);
        Ok(pow_mod(a, phi - 1, self.modulus))
    }

    /// Signed power: negative exponents require a unit base.
    pub fn pow_i64(&self, a: u64, e: i64) -> Result<u64> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            let inv = self.inv(a)?;
            Ok(self.pow(inv, (-e) as u64))
        }
    }

    /// l-adic valuation of a residue, capped at `r` (val(0) = r).
    pub fn val(&self, a: u64) -> u32 {
        let mut a = self.reduce_u64(a);
        if a == 0 {
            return self.r;
        }
        let mut v = 0;
        while a % self.ell == 0 {
            a /= self.ell;
            v += 1;
        }
        v
    }
}

/// A finite abelian l-group, presented as a product of cyclic factors
/// Z/l^{n_1} x ... x Z/l^{n_d}. The trivial group (d = 0) is allowed.
///
/// Elements are coordinate vectors `Vec<u64>` with the i-th entry reduced
/// modulo l^{n_i}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianLGroup {
    pub ell: u64,
    pub exponents: Vec<u32>,
}

impl std::fmt::Display for AbelianLGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "trivial");
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|n| format!("Z/{}^{}", self.ell, n))
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

impl AbelianLGroup {
    pub fn new(ell: u64, exponents: Vec<u32>) -> Result<Self> {
        if !is_prime(ell) {
            return Err(Error::NotPrime(ell));
        }
        if exponents.iter().any(|&n| n == 0) {
            return Err(Error::ZeroExponent);
        }
        for &n in &exponents {
            ell.checked_pow(n)
                .filter(|&m| m < (1u64 << 63))
                .ok_or(Error::ModulusOverflow { ell, r: n })?;
        }
        Ok(AbelianLGroup { ell, exponents })
    }

    pub fn trivial(ell: u64) -> Result<Self> {
        AbelianLGroup::new(ell, vec![])
    }

    pub fn cyclic(ell: u64, n: u32) -> Result<Self> {
        AbelianLGroup::new(ell, vec![n])
    }

    pub fn num_factors(&self) -> usize {
        self.exponents.len()
    }

    pub fn factor_order(&self, i: usize) -> u64 {
        self.ell.pow(self.exponents[i])
    }

    pub fn order(&self) -> u64 {
        self.exponents.iter().map(|&n| self.ell.pow(n)).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.exponents.len()]
    }

    pub fn reduce(&self, x: &[i64]) -> Vec<u64> {
        x.iter()
            .enumerate()
            .map(|(i, &c)| {
                let m = self.factor_order(i) as i128;
                (((c as i128 % m) + m) % m) as u64
            })
            .collect()
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        (0..self.num_factors())
            .map(|i| (a[i] + b[i]) % self.factor_order(i))
            .collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        (0..self.num_factors())
            .map(|i| {
                let m = self.factor_order(i);
                (m - a[i] % m) % m
            })
            .collect()
    }

    /// Every element, in lexicographic coordinate order.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for i in 0..self.num_factors() {
            let m = self.factor_order(i);
            let mut next = Vec::with_capacity(out.len() * m as usize);
            for prefix in &out {
                for c in 0..m {
                    let mut e = prefix.clone();
                    e.push(c);
                    next.push(e);
                }
            }
            out = next;
        }
        out
    }
}

/// A homomorphism of abelian l-groups, given by an integer matrix acting on
/// generators: the image of source generator `j` is
/// `sum_i matrix[i][j] * (target generator i)`.
///
/// Construction checks that each column respects the source order: the image
/// of a generator of order l^{n_j} must be killed by l^{n_j}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupHom {
    pub source: AbelianLGroup,
    pub target: AbelianLGroup,
    /// Row i, column j: reduced modulo the order of target factor i.
    pub matrix: Vec<Vec<u64>>,
}

impl GroupHom {
    pub fn new(source: AbelianLGroup, target: AbelianLGroup, matrix: &[Vec<i64>]) -> Result<Self> {
        if source.ell != target.ell {
            return Err(Error::GroupMismatch(source.to_string(), target.to_string()));
        }
        if matrix.len() != target.num_factors()
            || matrix.iter().any(|row| row.len() != source.num_factors())
        {
            return Err(Error::InvalidHom(format!(
                "matrix shape {}x{} does not match target rank {} and source rank {}",
                matrix.len(),
                matrix.first().map_or(0, |r| r.len()),
                target.num_factors(),
                source.num_factors()
            )));
        }
        let ell = source.ell;
        let mut reduced = vec![vec![0u64; source.num_factors()]; target.num_factors()];
        for i in 0..target.num_factors() {
            let m_i = target.exponents[i];
            let modulus = target.factor_order(i) as i128;
            for j in 0..source.num_factors() {
                let n_j = source.exponents[j];
                let entry = (((matrix[i][j] as i128 % modulus) + modulus) % modulus) as u64;
                if m_i > n_j {
                    // Need l^{m_i - n_j} | entry so the image has order <= l^{n_j}.
                    let need = ell.pow(m_i - n_j);
                    if entry % need != 0 {
                        return Err(Error::InvalidHom(format!(
                            "entry ({i},{j}) = {entry} sends a generator of order {}^{} to an element of larger order",
                            ell, n_j
                        )));
                    }
                }
                reduced[i][j] = entry;
            }
        }
        Ok(GroupHom {
            source,
            target,
            matrix: reduced,
        })
    }

    pub fn identity(group: &AbelianLGroup) -> Self {
        let d = group.num_factors();
        let matrix = (0..d)
            .map(|i| (0..d).map(|j| u64::from(i == j)).collect())
            .collect();
        GroupHom {
            source: group.clone(),
            target: group.clone(),
            matrix,
        }
    }

    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        (0..self.target.num_factors())
            .map(|i| {
                let m = self.target.factor_order(i) as u128;
                let mut acc = 0u128;
                for j in 0..self.source.num_factors() {
                    acc = (acc + self.matrix[i][j] as u128 * x[j] as u128) % m;
                }
                acc as u64
            })
            .collect()
    }

    /// `self` after `first` (so `compose(f).apply = self.apply . f.apply`).
    pub fn compose(&self, first: &GroupHom) -> Result<GroupHom> {
        if first.target != self.source {
            return Err(Error::GroupMismatch(
                first.target.to_string(),
                self.source.to_string(),
            ));
        }
        let rows = self.target.num_factors();
        let mid = self.source.num_factors();
        let cols = first.source.num_factors();
        let mut matrix = vec![vec![0i64; cols]; rows];
        for i in 0..rows {
            let m = self.target.factor_order(i) as i128;
            for j in 0..cols {
                let mut acc: i128 = 0;
                for k in 0..mid {
                    acc = (acc + self.matrix[i][k] as i128 * first.matrix[k][j] as i128) % m;
                }
                matrix[i][j] = acc as i64;
            }
        }
        GroupHom::new(first.source.clone(), self.target.clone(), &matrix)
    }

    pub fn is_injective(&self) -> bool {
        self.source
            .elements()
            .iter()
            .filter(|x| self.apply(x).iter().all(|&c| c == 0))
            .count()
            == 1
    }

    /// Index of the image inside the target (for injective maps this is
    /// [target : image]).
    pub fn image_index(&self) -> u64 {
        let mut image: std::collections::BTreeSet<Vec<u64>> = std::collections::BTreeSet::new();
        for x in self.source.elements() {
            image.insert(self.apply(&x));
        }
        self.target.order() / image.len() as u64
    }
}

/// The l-part of the unit group of F_q: a cyclic group of order
/// l^{v_l(q-1)}, trivial when l does not divide q - 1.
pub fn ell_part(q: u64, ell: u64) -> Result<AbelianLGroup> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    let (p, _) = prime_power_decompose(q).ok_or(Error::NotPrimePower(q))?;
    if p == ell {
        return Err(Error::CharacteristicClash { ell, q });
    }
    let mut m = q - 1;
    let mut v = 0u32;
    while m % ell == 0 {
        m /= ell;
        v += 1;
    }
    if v == 0 {
        AbelianLGroup::trivial(ell)
    } else {
        AbelianLGroup::cyclic(ell, v)
    }
}

/// Outcome of checking the torsion regime l^r | q - 1, l coprime to the Weyl
/// order, l different from the residue characteristic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub satisfied: bool,
    pub violations: Vec<String>,
}

pub fn validate_regime(weyl_order: u64, s: &CoeffRing, q: u64) -> Result<RegimeReport> {
    let (p, _) = prime_power_decompose(q).ok_or(Error::NotPrimePower(q))?;
    let mut violations = Vec::new();
    if (q - 1) % s.modulus != 0 {
        violations.push(format!(
            "{}^{} does not divide q - 1 = {}",
            s.ell,
            s.r,
            q - 1
        ));
    }
    if weyl_order % s.ell == 0 {
        violations.push(format!(
            "{} divides the Weyl group order {}",
            s.ell, weyl_order
        ));
    }
    if p == s.ell {
        violations.push(format!(
            "{} equals the residue characteristic of F_{}",
            s.ell, q
        ));
    }
    Ok(RegimeReport {
        satisfied: violations.is_empty(),
        violations,
    })
}
