//! Small integer helpers: primality, squarefree factorization, totient.

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn is_odd_prime(n: u64) -> bool {
    n % 2 == 1 && is_prime(n)
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_squarefree(n: u64) -> bool {
    n >= 1 && factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Distinct primes of an odd, squarefree, composite `n`, ascending.
pub fn factor_odd_squarefree(n: u64) -> Result<Vec<u64>> {
    if n < 3 {
        return Err(Error::param(format!("N = {n} must be at least 3")));
    }
    if n.is_multiple_of(2) {
        return Err(Error::param(format!("N = {n} is even")));
    }
    let factors = factorize(n);
    if factors.iter().any(|&(_, e)| e > 1) {
        return Err(Error::param(format!("N = {n} is not squarefree")));
    }
    if factors.len() < 2 {
        return Err(Error::param(format!("N = {n} is prime, not composite")));
    }
    Ok(factors.into_iter().map(|(p, _)| p).collect())
}

/// Euler's totient of a squarefree number given its prime factors.
pub fn euler_phi(primes: &[u64]) -> u64 {
    primes.iter().map(|p| p - 1).product()
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Every odd squarefree composite number in `[15, max]`, ascending.
pub fn admissible_exponents(max: u64) -> Vec<u64> {
    if max < 15 {
        return Vec::new();
    }
    // Sieve of smallest prime factors keeps the scan linear-ish.
    let n = max as usize;
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    (15..=n)
        .step_by(2)
        .filter(|&k| {
            let mut x = k;
            let mut count = 0;
            while x > 1 {
                let q = spf[x] as usize;
                x /= q;
                if x % q == 0 {
                    return false;
                }
                count += 1;
            }
            count >= 2
        })
        .map(|k| k as u64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_examples() {
        assert_eq!(factor_odd_squarefree(15).unwrap(), vec![3, 5]);
        assert_eq!(factor_odd_squarefree(105).unwrap(), vec![3, 5, 7]);
        assert!(matches!(factor_odd_squarefree(9), Err(Error::Parameter(m)) if m.contains("squarefree")));
        assert!(matches!(factor_odd_squarefree(30), Err(Error::Parameter(m)) if m.contains("even")));
        assert!(matches!(factor_odd_squarefree(13), Err(Error::Parameter(m)) if m.contains("prime")));
    }

    #[test]
    fn totient() {
        assert_eq!(euler_phi(&[3, 5]), 8);
        assert_eq!(euler_phi(&[3, 5, 7]), 48);
        assert_eq!(euler_phi(&[3]), 2);
    }

    #[test]
    fn sieve_agrees_with_trial_division() {
        let fast = admissible_exponents(3000);
        let slow: Vec<u64> = (15..=3000).filter(|&n| factor_odd_squarefree(n).is_ok()).collect();
        assert_eq!(fast, slow);
        assert_eq!(
            admissible_exponents(100),
            vec![15, 21, 33, 35, 39, 51, 55, 57, 65, 69, 77, 85, 87, 91, 93, 95]
        );
    }
}
