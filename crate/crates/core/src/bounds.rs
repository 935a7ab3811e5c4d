//! Assembly over the primes dividing `N`: the geometric part of the upper
//! bound, the unconditional lower bound and its simplified form.

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fermat_model::genus_formula;
use crate::numtheory::{euler_phi, factor_odd_squarefree};
use crate::polyarith::double_root_count;
use crate::rational::{big, rat, to_f64, Rational};

/// Largest prime for which a [`BoundReport`] computes the double-root count.
pub const REPORT_S_LIMIT: u64 = 3000;

/// `Q(N,p) = (3N^2 - 2Np - 10N + 6p - 6 - 4(N/p)^2 + 12(N/p)) / (N(N-3))`.
pub fn q_coefficient(n: u64, p: u64) -> Rational {
    let (n, p) = (n as i64, p as i64);
    let m = n / p;
    let num = 3 * n * n - 2 * n * p - 10 * n + 6 * p - 6 - 4 * m * m + 12 * m;
    rat(num, n * (n - 3))
}

pub fn alpha(n: u64, p: u64) -> BigInt {
    let (n, p) = (BigInt::from(n), BigInt::from(p));
    let n2 = &n * &n;
    let n3 = &n2 * &n;
    let n4 = &n3 * &n;
    let p2 = &p * &p;
    4 * &n4 * &p - 6 * &n3 * &p2 - 24 * &n3 * &p + 37 * &n2 * &p2 + 44 * &n2 * &p
        - 72 * &n * &p2
        - 4 * &n2
        - 12 * &n * &p
        + 36 * &p2
}

/// `alpha(N,p) (Np + 2N - 6p)(p - 2) / ((N-1)(N-2)(N-3)^3 p^4)`.
pub fn beta_sp_closed(n: u64, p: u64) -> Rational {
    let (nb, pb) = (BigInt::from(n), BigInt::from(p));
    let num = alpha(n, p) * (&nb * &pb + 2 * &nb - 6 * &pb) * (&pb - 2);
    let n3 = &nb - 3;
    let den = (&nb - 1) * (&nb - 2) * &n3 * &n3 * &n3 * num_traits::pow(pb, 4);
    Rational::new(num, den)
}

/// Exact rational coefficients of `log p`, with their floating-point sum.
#[derive(Clone, Debug, PartialEq)]
pub struct LogCombination {
    pub terms: Vec<(u64, Rational)>,
    pub value: f64,
}

impl LogCombination {
    fn new(terms: Vec<(u64, Rational)>) -> Self {
        let value = terms.iter().map(|(p, c)| to_f64(c) * (*p as f64).ln()).sum();
        Self { terms, value }
    }

    /// Same sum accumulated from the largest prime down.
    pub fn value_reversed(&self) -> f64 {
        self.terms.iter().rev().map(|(p, c)| to_f64(c) * (*p as f64).ln()).sum()
    }
}

/// `sum_p phi(N)/phi(p) Q(N,p) log p`.
pub fn geometric_contribution(n: u64) -> Result<LogCombination> {
    let primes = factor_odd_squarefree(n)?;
    let phi = euler_phi(&primes) as i64;
    Ok(LogCombination::new(
        primes
            .iter()
            .map(|&p| (p, rat(phi, p as i64 - 1) * q_coefficient(n, p)))
            .collect(),
    ))
}

/// `(2g - 2) (phi(N)(kappa1 log N + kappa2) + geometric contribution)`.
///
/// Both constants must be finite and non-negative, and not both zero.
pub fn upper_bound(n: u64, kappa1: f64, kappa2: f64) -> Result<f64> {
    for (name, k) in [("kappa1", kappa1), ("kappa2", kappa2)] {
        if !k.is_finite() || k < 0.0 {
            return Err(Error::param(format!("{name} = {k} must be finite and non-negative")));
        }
    }
    if kappa1 == 0.0 && kappa2 == 0.0 {
        return Err(Error::param("kappa1 and kappa2 cannot both be zero"));
    }
    let primes = factor_odd_squarefree(n)?;
    let phi = euler_phi(&primes) as f64;
    let geo = geometric_contribution(n)?;
    let two_g_2 = 2.0 * genus_formula(n) as f64 - 2.0;
    Ok(two_g_2 * (phi * (kappa1 * (n as f64).ln() + kappa2) + geo.value))
}

/// `phi(N) sum_p beta_{S,p}/(p - 1) log p` as exact coefficients.
pub fn lower_bound_terms(n: u64) -> Result<LogCombination> {
    let primes = factor_odd_squarefree(n)?;
    let phi = euler_phi(&primes) as i64;
    Ok(LogCombination::new(
        primes
            .iter()
            .map(|&p| (p, rat(phi, p as i64 - 1) * beta_sp_closed(n, p)))
            .collect(),
    ))
}

pub fn lower_bound(n: u64) -> Result<f64> {
    Ok(lower_bound_terms(n)?.value)
}

/// `phi(N) log N / (5 N^2)`.
pub fn simple_lower(n: u64) -> Result<f64> {
    let primes = factor_odd_squarefree(n)?;
    let nf = n as f64;
    Ok(euler_phi(&primes) as f64 * nf.ln() / (5.0 * nf * nf))
}

/// `sum_p log p / (p - 1)`; diagnostic only.
pub fn mertens_diag(n: u64) -> Result<f64> {
    Ok(factor_odd_squarefree(n)?
        .iter()
        .map(|&p| (p as f64).ln() / (p - 1) as f64)
        .sum())
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrimeRecord {
    pub p: u64,
    pub m: u64,
    /// Double-root count; `None` above [`REPORT_S_LIMIT`].
    pub s: Option<u64>,
    pub rho: Option<u64>,
    pub q: Rational,
    pub beta: Rational,
    pub alpha: BigInt,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub n: u64,
    pub g: u64,
    pub phi: u64,
    pub primes: Vec<PrimeRecord>,
    pub geometric: LogCombination,
    pub lower: LogCombination,
    /// Present only when both constants were supplied.
    pub upper_bound: Option<f64>,
    pub lower_bound: f64,
    pub simple_lower: f64,
    pub mertens_diag: f64,
}

impl BoundReport {
    pub fn new(n: u64, kappa: Option<(f64, f64)>) -> Result<Self> {
        Self::build(n, kappa, true)
    }

    /// Without double-root counts, for range scans.
    pub fn lightweight(n: u64) -> Result<Self> {
        Self::build(n, None, false)
    }

    fn build(n: u64, kappa: Option<(f64, f64)>, with_s: bool) -> Result<Self> {
        let primes = factor_odd_squarefree(n)?;
        let records = primes
            .iter()
            .map(|&p| {
                let s = if with_s && p <= REPORT_S_LIMIT {
                    Some(double_root_count(p)?)
                } else {
                    None
                };
                Ok(PrimeRecord {
                    p,
                    m: n / p,
                    s,
                    rho: s.map(|s| s * (n / p)),
                    q: q_coefficient(n, p),
                    beta: beta_sp_closed(n, p),
                    alpha: alpha(n, p),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let upper_bound = match kappa {
            Some((k1, k2)) => Some(upper_bound(n, k1, k2)?),
            None => None,
        };
        let lower = lower_bound_terms(n)?;
        Ok(Self {
            n,
            g: genus_formula(n),
            phi: euler_phi(&primes),
            primes: records,
            geometric: geometric_contribution(n)?,
            lower_bound: lower.value,
            lower,
            upper_bound,
            simple_lower: simple_lower(n)?,
            mertens_diag: mertens_diag(n)?,
        })
    }

    pub fn strict_inequality_holds(&self) -> bool {
        self.lower_bound > self.simple_lower
    }

    /// Every exact coefficient and `alpha` is positive.
    pub fn positivity_holds(&self) -> bool {
        self.primes
            .iter()
            .all(|r| r.q.is_positive() && r.beta.is_positive() && r.alpha.is_positive())
            && self.geometric.terms.iter().all(|(_, c)| c.is_positive())
    }
}

/// Lightweight reports for every admissible `N <= max_n`, in order.
pub fn scan(max_n: u64) -> Result<Vec<BoundReport>> {
    crate::numtheory::admissible_exponents(max_n)
        .into_par_iter()
        .map(BoundReport::lightweight)
        .collect()
}

/// Distance in units in the last place between two finite floats.
pub fn ulp_distance(a: f64, b: f64) -> u64 {
    fn key(x: f64) -> i64 {
        let bits = x.to_bits() as i64;
        if bits < 0 {
            i64::MIN - bits
        } else {
            bits
        }
    }
    key(a).abs_diff(key(b))
}

/// `sum_p phi(N) (beta/(p-1)) log p` accumulated differently from
/// [`lower_bound`]: rationals are floated before multiplying by `phi(N)`.
pub fn lower_bound_alternate(n: u64) -> Result<f64> {
    let primes = factor_odd_squarefree(n)?;
    let phi = euler_phi(&primes) as f64;
    let inner: f64 = primes
        .iter()
        .rev()
        .map(|&p| to_f64(&(beta_sp_closed(n, p) / big(p - 1))) * (p as f64).ln())
        .sum();
    Ok(phi * inner)
}
