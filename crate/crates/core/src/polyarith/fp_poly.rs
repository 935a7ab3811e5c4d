use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::IntPoly;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo the prime `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(!a.is_multiple_of(p), "zero has no inverse");
    pow_mod(a, p - 2, p)
}

/// Dense polynomial over F_p, coefficients reduced to `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut poly = Self {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        poly.normalize();
        poly
    }

    /// Coefficients may be negative; they are reduced into `[0, p)`.
    pub fn from_i64(p: u64, coeffs: &[i64]) -> Self {
        let pi = p as i128;
        Self::new(
            p,
            coeffs
                .iter()
                .map(|&c| (c as i128).mod_floor(&pi) as u64)
                .collect(),
        )
    }

    pub fn reduce(poly: &IntPoly, p: u64) -> Self {
        let bp = BigInt::from(p);
        Self::new(
            p,
            poly.coeffs()
                .iter()
                .map(|c| c.mod_floor(&bp).to_u64().expect("residue fits in u64"))
                .collect(),
        )
    }

    pub fn zero(p: u64) -> Self {
        Self { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, at: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul_mod(acc, at, self.p) + c) % self.p)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        Self::new(
            self.p,
            (0..n)
                .map(|i| (get(&self.coeffs, i) + get(&rhs.coeffs, i)) % self.p)
                .collect(),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        Self::new(
            self.p,
            (0..n)
                .map(|i| (get(&self.coeffs, i) + self.p - get(&rhs.coeffs, i)) % self.p)
                .collect(),
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, self.p)) % self.p;
            }
        }
        Self::new(self.p, out)
    }

    pub fn scale(&self, k: u64) -> Self {
        Self::new(
            self.p,
            self.coeffs.iter().map(|&c| mul_mod(c, k, self.p)).collect(),
        )
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.leading_coeff(), self.p))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % self.p, self.p))
                .collect(),
        )
    }

    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(self.p), self.clone());
        }
        let inv_lead = inv_mod(divisor.leading_coeff(), self.p);
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = mul_mod(rem[i + dd], inv_lead, self.p);
            if c == 0 {
                continue;
            }
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = (rem[i + j] + self.p - mul_mod(c, dc, self.p)) % self.p;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::new(self.p, quot), Self::new(self.p, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &Self) -> Self {
        let mut base = self.rem(modulus);
        let mut acc = Self::one(self.p).rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(modulus);
            }
        }
        acc
    }

    /// Roots in F_p by exhaustive evaluation, ascending.
    pub fn roots_by_enumeration(&self) -> Vec<u64> {
        (0..self.p).filter(|&a| self.eval(a) == 0).collect()
    }

    /// `gcd(self, x^p - x)`: the product of the distinct linear factors.
    pub fn rational_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return Self::one(self.p);
        }
        let x = Self::x(self.p);
        let xp = x.pow_mod(self.p, self);
        self.gcd(&xp.sub(&x))
    }

    /// Roots of a squarefree product of distinct linear factors, found by
    /// deterministic equal-degree splitting with shifts `x + delta`.
    pub fn split_linear(&self) -> Vec<u64> {
        let mut roots = Vec::new();
        let mut stack = vec![self.monic()];
        while let Some(f) = stack.pop() {
            match f.degree() {
                None | Some(0) => {}
                Some(1) => roots.push((self.p - f.coeffs[0]) % self.p),
                Some(_) => {
                    let half = (self.p - 1) / 2;
                    let mut split = false;
                    for delta in 0..self.p {
                        let shifted = Self::new(self.p, vec![delta, 1]);
                        let h = shifted.pow_mod(half, &f).sub(&Self::one(self.p));
                        let d = f.gcd(&h);
                        let dd = d.degree().unwrap_or(0);
                        if dd > 0 && Some(dd) < f.degree() {
                            let (q, _) = f.div_rem(&d);
                            stack.push(d);
                            stack.push(q.monic());
                            split = true;
                            break;
                        }
                    }
                    assert!(split, "polynomial is not a product of distinct linear factors");
                }
            }
        }
        roots.sort_unstable();
        roots
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c != 1 || i == 0 {
                write!(f, "{c}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "a")?,
                _ => write!(f, "a^{i}")?,
            }
        }
        write!(f, " (mod {})", self.p)
    }
}
