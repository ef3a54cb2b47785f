//! Sparse group algebra S[Z^rank]: finitely supported S-valued functions on a
//! lattice, with convolution product. Exponent vectors may be negative
//! (Laurent monomials x^lambda).

use crate::coeff::CoeffRing;
use crate::error::{Error, Result};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentElement {
    pub ring: CoeffRing,
    pub rank: usize,
    pub terms: BTreeMap<Vec<i64>, u64>,
}

impl LaurentElement {
    pub fn zero(ring: CoeffRing, rank: usize) -> Self {
        LaurentElement {
            ring,
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: CoeffRing, rank: usize) -> Self {
        Self::monomial(ring, vec![0; rank], 1)
    }

    pub fn monomial(ring: CoeffRing, exponent: Vec<i64>, coeff: u64) -> Self {
        let rank = exponent.len();
        let mut terms = BTreeMap::new();
        let c = ring.reduce_u64(coeff);
        if c != 0 {
            terms.insert(exponent, c);
        }
        LaurentElement { ring, rank, terms }
    }

    pub fn insert(&mut self, exponent: Vec<i64>, coeff: i64) {
        assert_eq!(exponent.len(), self.rank);
        let c = self.ring.from_i64(coeff);
        let entry = self.terms.entry(exponent.clone()).or_insert(0);
        *entry = self.ring.add(*entry, c);
        if *entry == 0 {
            self.terms.remove(&exponent);
        }
    }

    pub fn coeff(&self, exponent: &[i64]) -> u64 {
        self.terms.get(exponent).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &LaurentElement) -> LaurentElement {
        assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            let entry = out.terms.entry(e.clone()).or_insert(0);
            *entry = self.ring.add(*entry, c);
            if *entry == 0 {
                out.terms.remove(e);
            }
        }
        out
    }

    pub fn scale(&self, c: u64) -> LaurentElement {
        let mut out = LaurentElement::zero(self.ring, self.rank);
        for (e, &a) in &self.terms {
            let v = self.ring.mul(a, c);
            if v != 0 {
                out.terms.insert(e.clone(), v);
            }
        }
        out
    }

    pub fn neg(&self) -> LaurentElement {
        self.scale(self.ring.neg(1))
    }

    pub fn mul(&self, other: &LaurentElement) -> LaurentElement {
        assert_eq!(self.rank, other.rank);
        let mut out = LaurentElement::zero(self.ring, self.rank);
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &other.terms {
                let c = self.ring.mul(c1, c2);
                if c == 0 {
                    continue;
                }
                let e: Vec<i64> = e1.iter().zip(e2.iter()).map(|(a, b)| a + b).collect();
                let entry = out.terms.entry(e.clone()).or_insert(0);
                *entry = self.ring.add(*entry, c);
                if *entry == 0 {
                    out.terms.remove(&e);
                }
            }
        }
        out
    }

    /// Transport exponents along an integer lattice map (w acting on X_*).
    pub fn transform_exponents(&self, matrix: &[Vec<i64>]) -> LaurentElement {
        let mut out = LaurentElement::zero(self.ring, self.rank);
        for (e, &c) in &self.terms {
            let new_e: Vec<i64> = (0..self.rank)
                .map(|i| (0..self.rank).map(|j| matrix[i][j] * e[j]).sum())
                .collect();
            let entry = out.terms.entry(new_e.clone()).or_insert(0);
            *entry = self.ring.add(*entry, c);
            if *entry == 0 {
                out.terms.remove(&new_e);
            }
        }
        out
    }

    /// Evaluate at the character lambda -> prod_i t_i^{lambda_i}.
    ///
    /// Negative exponents require the character values to be units.
    pub fn eval_character(&self, values: &[u64]) -> Result<u64> {
        if values.len() != self.rank {
            return Err(Error::DimensionMismatch(format!(
                "character has {} values, element has rank {}",
                values.len(),
                self.rank
            )));
        }
        let mut acc = 0u64;
        for (e, &c) in &self.terms {
            let mut term = c;
            for (i, &exp) in e.iter().enumerate() {
                term = self.ring.mul(term, self.ring.pow_i64(values[i], exp)?);
            }
            acc = self.ring.add(acc, term);
        }
        Ok(acc)
    }

    /// Largest coordinate magnitude over the support.
    pub fn support_radius(&self) -> i64 {
        self.terms
            .keys()
            .flat_map(|e| e.iter().map(|c| c.abs()))
            .max()
            .unwrap_or(0)
    }
}
