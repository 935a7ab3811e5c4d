//! Integer and finite-field polynomials behind the splitting
//! `X^N + Y^N - 1 = (X^m + Y^m - 1)^p + p*psi(X^m, Y^m)` and the double-root
//! count of `Psi` modulo `p`.

mod bivariate;
mod fp_poly;
mod int_poly;

pub use bivariate::BiPoly;
pub use fp_poly::{inv_mod, FpPoly};
pub use int_poly::IntPoly;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numtheory::is_odd_prime;

/// Default bound on `N = p*m` for [`fermat_split_check`].
pub const DEFAULT_SPLIT_CAP: u64 = 2000;

/// Above this prime, rational roots are counted via `gcd(f, a^p - a)`
/// instead of by evaluation at every residue.
pub const ENUMERATION_LIMIT: u64 = 1000;

fn require_odd_prime(p: u64) -> Result<()> {
    if is_odd_prime(p) {
        Ok(())
    } else {
        Err(Error::param(format!("p = {p} is not an odd prime")))
    }
}

fn binomial_row(n: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 0..n {
        let next = &row[k as usize] * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(next);
    }
    row
}

/// `psi(a, b) = (a^p + b^p - 1 - (a + b - 1)^p) / p`.
pub fn psi_poly(p: u64) -> Result<BiPoly> {
    require_odd_prime(p)?;
    let p32 = p as u32;
    let outer = binomial_row(p32);
    let mut numer = BiPoly::from_terms([
        ((p32, 0), BigInt::one()),
        ((0, p32), BigInt::one()),
        ((0, 0), -BigInt::one()),
    ]);
    // (a + b - 1)^p = sum C(p,i) C(p-i,j) a^i b^j (-1)^(p-i-j)
    for i in 0..=p32 {
        let inner = binomial_row(p32 - i);
        for j in 0..=(p32 - i) {
            let k = p32 - i - j;
            let c = &outer[i as usize] * &inner[j as usize];
            numer.add_term((i, j), if k.is_multiple_of(2) { -c } else { c });
        }
    }
    numer
        .div_scalar_exact(&BigInt::from(p))
        .ok_or_else(|| Error::Internal(format!("psi numerator not divisible by {p}")))
}

/// `psi(a, 1 - a)`, expanded directly from `(a^p + (1 - a)^p - 1) / p`.
pub fn psi_diag(p: u64) -> Result<IntPoly> {
    require_odd_prime(p)?;
    let numer = &(&IntPoly::monomial(BigInt::one(), p as usize)
        + &IntPoly::from_i64(&[1, -1]).pow(p as u32))
        - &IntPoly::one();
    numer
        .div_scalar_exact(&BigInt::from(p))
        .ok_or_else(|| Error::Internal(format!("psi(a,1-a) numerator not divisible by {p}")))
}

/// `Psi = psi(a, 1 - a) / (a^2 - a)`, monic of degree `p - 3`.
pub fn capital_psi(p: u64) -> Result<IntPoly> {
    let diag = psi_diag(p)?;
    let (q, r) = diag.div_rem_monic(&IntPoly::from_i64(&[0, -1, 1]));
    if !r.is_zero() {
        return Err(Error::Internal(format!(
            "a^2 - a does not divide psi(a,1-a) for p = {p}: remainder {r}"
        )));
    }
    if q.degree() != Some(p as usize - 3) {
        return Err(Error::Internal(format!("Psi has degree {:?} for p = {p}", q.degree())));
    }
    Ok(q)
}

/// Above this prime, `Psi mod p` is built directly in F_p rather than by
/// reducing the exact integer polynomial, whose coefficients grow like `2^p`.
pub const EXACT_REDUCTION_LIMIT: u64 = 200;

/// `psi(a, 1 - a) mod p` without big integers.
///
/// For `0 < k < p` the coefficient of `a^k` is `(-1)^k C(p,k)/p`, and
/// `C(p,k)/p = C(p-1,k-1)/k = (-1)^(k-1)/k (mod p)`, so the reduction is
/// `-sum_{k=1}^{p-1} a^k / k`.
pub fn psi_diag_mod_p(p: u64) -> Result<FpPoly> {
    require_odd_prime(p)?;
    let mut coeffs = vec![0u64; p as usize];
    for k in 1..p {
        coeffs[k as usize] = p - inv_mod(k, p);
    }
    Ok(FpPoly::new(p, coeffs))
}

/// `Psi mod p`, by exact reduction for small `p` and in F_p otherwise.
pub fn capital_psi_mod_p(p: u64) -> Result<FpPoly> {
    if p <= EXACT_REDUCTION_LIMIT {
        return Ok(FpPoly::reduce(&capital_psi(p)?, p));
    }
    let (q, r) = psi_diag_mod_p(p)?.div_rem(&FpPoly::from_i64(p, &[0, -1, 1]));
    if !r.is_zero() || q.degree() != Some(p as usize - 3) {
        return Err(Error::Internal(format!("a^2 - a does not divide psi(a,1-a) mod {p}")));
    }
    Ok(q)
}

/// Multiplicity structure of `Psi mod p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepeatedRoots {
    pub p: u64,
    /// Number of F_p-rational double roots.
    pub s: u64,
    /// The double roots, ascending in `[0, p)`.
    pub roots: Vec<u64>,
    pub psi_degree: usize,
}

/// Squarefree analysis of `Psi mod p`, enforcing that every repeated factor
/// is a rational linear factor of multiplicity exactly two.
pub fn repeated_root_analysis(p: u64) -> Result<RepeatedRoots> {
    let f = capital_psi_mod_p(p)?;
    let deg = f.degree().unwrap_or(0);
    let name = "double roots of Psi mod p";
    if deg == 0 {
        return Ok(RepeatedRoots { p, s: 0, roots: Vec::new(), psi_degree: deg });
    }
    // The repeated part: for multiplicities <= 2 this is the product of the
    // doubled factors.
    let g = f.gcd(&f.derivative());
    let s = g.degree().unwrap_or(0) as u64;
    if s > 0 && !g.gcd(&g.derivative()).is_one() {
        return Err(Error::contract(name, format!("p = {p}: a factor has multiplicity >= 3")));
    }
    let g2 = g.mul(&g);
    let (cofactor, rem) = f.div_rem(&g2);
    if !rem.is_zero() {
        return Err(Error::contract(name, format!("p = {p}: gcd(f, f')^2 does not divide f")));
    }
    if !cofactor.gcd(&g).is_one() {
        return Err(Error::contract(name, format!("p = {p}: a factor has multiplicity >= 3")));
    }
    let roots = if s == 0 {
        Vec::new()
    } else if p <= ENUMERATION_LIMIT {
        g.roots_by_enumeration()
    } else {
        let rational = g.rational_part();
        if rational.degree() != g.degree() {
            return Err(Error::contract(
                name,
                format!("p = {p}: a repeated factor is not linear over F_p"),
            ));
        }
        g.split_linear()
    };
    if roots.len() as u64 != s {
        return Err(Error::contract(
            name,
            format!("p = {p}: {} rational roots in a repeated part of degree {s}", roots.len()),
        ));
    }
    if 2 * s > p - 3 {
        return Err(Error::contract(name, format!("p = {p}: 2s = {} > p - 3", 2 * s)));
    }
    Ok(RepeatedRoots { p, s, roots, psi_degree: deg })
}

pub fn double_root_count(p: u64) -> Result<u64> {
    Ok(repeated_root_analysis(p)?.s)
}

pub fn rho(p: u64, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::param("m must be positive"));
    }
    Ok(m * double_root_count(p)?)
}

pub fn fermat_split_check(p: u64, m: u64) -> Result<bool> {
    fermat_split_check_capped(p, m, DEFAULT_SPLIT_CAP)
}

/// Checks `X^N + Y^N - 1 = (X^m + Y^m - 1)^p + p*psi(X^m, Y^m)` exactly.
pub fn fermat_split_check_capped(p: u64, m: u64, cap: u64) -> Result<bool> {
    require_odd_prime(p)?;
    if m == 0 {
        return Err(Error::param("m must be positive"));
    }
    let n = p * m;
    if n > cap {
        return Err(Error::CapExceeded { what: "N".into(), value: n, cap });
    }
    let n32 = n as u32;
    let lhs = BiPoly::from_terms([
        ((n32, 0), BigInt::one()),
        ((0, n32), BigInt::one()),
        ((0, 0), -BigInt::one()),
    ]);
    // Repeated multiplication by the trinomial keeps this independent of the
    // multinomial expansion inside psi_poly.
    let lin = bivariate::fermat_linear(m as u32);
    let mut fm_p = BiPoly::monomial(1, 0, 0);
    for _ in 0..p {
        fm_p = fm_p.mul(&lin);
    }
    let rhs = fm_p.add(&psi_poly(p)?.inflate(m as u32).scale(&BigInt::from(p)));
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_three() {
        let expected = BiPoly::from_terms(
            [((2, 1), -1), ((1, 2), -1), ((2, 0), 1), ((1, 1), 2), ((0, 2), 1), ((1, 0), -1), ((0, 1), -1)]
                .map(|(m, c)| (m, BigInt::from(c))),
        );
        assert_eq!(psi_poly(3).unwrap(), expected);
    }

    #[test]
    fn diagonal_small_cases() {
        assert_eq!(psi_diag(3).unwrap(), IntPoly::from_i64(&[0, -1, 1]));
        assert_eq!(psi_diag(5).unwrap(), IntPoly::from_i64(&[0, -1, 2, -2, 1]));
        assert_eq!(capital_psi(3).unwrap(), IntPoly::one());
        assert_eq!(capital_psi(5).unwrap(), IntPoly::from_i64(&[1, -1, 1]));
    }

    #[test]
    fn rejects_non_primes() {
        for p in [0, 1, 2, 4, 9, 15] {
            assert!(matches!(psi_poly(p), Err(Error::Parameter(_))));
        }
    }

    #[test]
    fn seven_has_two_double_roots() {
        let r = repeated_root_analysis(7).unwrap();
        assert_eq!(r.s, 2);
        assert_eq!(r.roots, vec![3, 5]);
        assert_eq!(rho(7, 5).unwrap(), 10);
    }

    #[test]
    fn split_cap_is_enforced() {
        assert!(matches!(
            fermat_split_check_capped(5, 7, 30),
            Err(Error::CapExceeded { value: 35, cap: 30, .. })
        ));
    }
}
