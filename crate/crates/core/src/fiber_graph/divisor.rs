use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::rational::Rational;

/// Finite formal combination of fiber components with rational
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QDivisor {
    coeffs: BTreeMap<usize, Rational>,
}

impl QDivisor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(id: usize, c: Rational) -> Self {
        let mut d = Self::zero();
        d.add_to(id, c);
        d
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, Rational)>>(pairs: I) -> Self {
        let mut d = Self::zero();
        for (id, c) in pairs {
            d.add_to(id, c);
        }
        d
    }

    pub fn get(&self, id: usize) -> Rational {
        self.coeffs.get(&id).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, id: usize, c: Rational) {
        if c.is_zero() {
            self.coeffs.remove(&id);
        } else {
            self.coeffs.insert(id, c);
        }
    }

    pub fn add_to(&mut self, id: usize, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(id).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&id);
        }
    }

    /// `self += k * other`.
    pub fn axpy(&mut self, k: &Rational, other: &QDivisor) {
        for (&id, c) in &other.coeffs {
            self.add_to(id, k * c);
        }
    }

    pub fn scaled(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(&id, c)| (id, c * k)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().map(|(&id, c)| (id, c))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn max_id(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }
}

impl Add for &QDivisor {
    type Output = QDivisor;
    fn add(self, rhs: &QDivisor) -> QDivisor {
        let mut out = self.clone();
        for (id, c) in rhs.iter() {
            out.add_to(id, c.clone());
        }
        out
    }
}

impl Sub for &QDivisor {
    type Output = QDivisor;
    fn sub(self, rhs: &QDivisor) -> QDivisor {
        let mut out = self.clone();
        for (id, c) in rhs.iter() {
            out.add_to(id, -c);
        }
        out
    }
}

impl Neg for &QDivisor {
    type Output = QDivisor;
    fn neg(self) -> QDivisor {
        QDivisor {
            coeffs: self.coeffs.iter().map(|(&id, c)| (id, -c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn cancellation_drops_keys() {
        let mut d = QDivisor::single(3, rat(1, 2));
        d.add_to(3, rat(-1, 2));
        assert!(d.is_zero());
        let e = &QDivisor::from_pairs([(1, int(2)), (4, int(1))]) - &QDivisor::single(4, int(1));
        assert_eq!(e, QDivisor::single(1, int(2)));
    }
}
