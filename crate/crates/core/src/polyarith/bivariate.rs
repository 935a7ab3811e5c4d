use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::IntPoly;

/// Sparse bivariate integer polynomial, keyed by `(deg_a, deg_b)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), BigInt)>>(terms: I) -> Self {
        let mut poly = Self::zero();
        for (mono, c) in terms {
            poly.add_term(mono, c);
        }
        poly
    }

    pub fn monomial(c: impl Into<BigInt>, da: u32, db: u32) -> Self {
        Self::from_terms([((da, db), c.into())])
    }

    pub fn add_term(&mut self, mono: (u32, u32), c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(mono).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), BigInt> {
        &self.terms
    }

    pub fn coeff(&self, da: u32, db: u32) -> BigInt {
        self.terms.get(&(da, db)).cloned().unwrap_or_default()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (&mono, c) in &rhs.terms {
            out.add_term(mono, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (&mono, c) in &rhs.terms {
            out.add_term(mono, -c);
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::from_terms(self.terms.iter().map(|(&m, c)| (m, c * k)))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term((i1 + i2, j1 + j2), c1 * c2);
            }
        }
        out
    }

    /// `None` if some coefficient is not divisible by `d`.
    pub fn div_scalar_exact(&self, d: &BigInt) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (&mono, c) in &self.terms {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            terms.insert(mono, q);
        }
        Some(Self { terms })
    }

    /// Substitutes `a -> a^m`, `b -> b^m`.
    pub fn inflate(&self, m: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((i * m, j * m), c.clone()))
                .collect(),
        }
    }

    pub fn eval(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c * num_traits::pow(a.clone(), i as usize) * num_traits::pow(b.clone(), j as usize))
            .sum()
    }

    /// Restriction to the line `b = 1 - a`.
    pub fn on_antidiagonal(&self) -> IntPoly {
        let one_minus_a = IntPoly::from_i64(&[1, -1]);
        let max_j = self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0);
        let mut powers = Vec::with_capacity(max_j as usize + 1);
        let mut acc = IntPoly::one();
        for _ in 0..=max_j {
            powers.push(acc.clone());
            acc = &acc * &one_minus_a;
        }
        let mut out = IntPoly::zero();
        for (&(i, j), c) in &self.terms {
            let term = &IntPoly::monomial(c.clone(), i as usize) * &powers[j as usize];
            out = &out + &term;
        }
        out
    }
}

/// `a + b - 1` as a bivariate polynomial with `a -> a^m`, `b -> b^m`.
pub(crate) fn fermat_linear(m: u32) -> BiPoly {
    BiPoly::from_terms([
        ((m, 0), BigInt::one()),
        ((0, m), BigInt::one()),
        ((0, 0), -BigInt::one()),
    ])
}
