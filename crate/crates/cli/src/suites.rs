//! Named verification suites shared by `ffk verify` and the acceptance tests.

use std::time::Instant;

use ffk_core::bounds::{beta_sp_closed, geometric_contribution, q_coefficient, scan};
use ffk_core::check::CheckResult;
use ffk_core::divisor_calc::{beta_s_closed, identity_suite, per_prime_geometric};
use ffk_core::fermat_model::{build_config, FermatFiber, FermatParams};
use ffk_core::numtheory::{euler_phi, factor_odd_squarefree, is_odd_prime};
use ffk_core::polyarith::{capital_psi, double_root_count, fermat_split_check, fermat_split_check_capped, FpPoly};
use ffk_core::rational::{format_rational, rat};
use ffk_core::Result;
use rayon::prelude::*;

pub const PM_LIST: [(u64, u64); 8] = [(3, 5), (5, 3), (3, 7), (7, 3), (5, 7), (7, 5), (3, 11), (11, 3)];

pub const SCAN_MAX: u64 = 100_000;

fn tagged(p: u64, m: u64, mut c: CheckResult) -> CheckResult {
    c.detail = format!("(p={p}, m={m}) {}", c.detail);
    c
}

pub fn fibers() -> Result<Vec<FermatFiber>> {
    PM_LIST
        .iter()
        .map(|&(p, m)| build_config(FermatParams::derive(p, m)?))
        .collect()
}

pub fn polynomial() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let primes: Vec<u64> = (3..=101).filter(|&p| is_odd_prime(p)).collect();
    let bad: Vec<u64> = primes
        .par_iter()
        .filter(|&&p| !fermat_split_check_capped(p, 1, u64::MAX).unwrap_or(false))
        .copied()
        .collect();
    out.push(CheckResult::from_bool(
        "psi_defining_identity",
        bad.is_empty(),
        format!("p*psi + (a+b-1)^p = a^p + b^p - 1 for odd p <= 101; failures {bad:?}"),
    ));
    let psi5 = FpPoly::reduce(&capital_psi(5)?, 5);
    out.push(CheckResult::from_bool(
        "psi5_mod_5",
        psi5 == FpPoly::from_i64(5, &[1, -1, 1]),
        format!("Psi_5 mod 5 = {psi5}"),
    ));
    let psi7 = FpPoly::reduce(&capital_psi(7)?, 7);
    let sq = |r: i64| FpPoly::from_i64(7, &[r, 1]).mul(&FpPoly::from_i64(7, &[r, 1]));
    let target = sq(2).mul(&sq(4));
    let unit = psi7.leading_coeff();
    out.push(CheckResult::from_bool(
        "psi7_mod_7",
        psi7 == target.scale(unit),
        format!("Psi_7 mod 7 = {psi7}"),
    ));
    for (p, want) in [(5, 0), (7, 2), (3, 0)] {
        let s = double_root_count(p)?;
        out.push(CheckResult::from_bool(
            format!("double_root_count_{p}"),
            s == want,
            format!("s({p}) = {s}, expected {want}"),
        ));
    }
    for (p, m) in PM_LIST {
        out.push(CheckResult::from_bool(
            format!("fermat_split_{p}_{m}"),
            fermat_split_check(p, m)?,
            format!("X^N + Y^N - 1 = F_m^p + p psi(X^m, Y^m) for N = {}", p * m),
        ));
    }
    Ok(out)
}

pub fn fiber() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for f in fibers()? {
        let (p, m) = (f.params.p, f.params.m);
        out.extend(f.full_validation().into_iter().map(|c| tagged(p, m, c)));
    }
    Ok(out)
}

pub fn divisor() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for f in fibers()? {
        let (p, m) = (f.params.p, f.params.m);
        let cusp = f.cusp(1, 1)?;
        out.extend(identity_suite(&f, cusp)?.into_iter().map(|c| tagged(p, m, c)));
    }
    Ok(out)
}

pub fn bounds() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for f in fibers()? {
        let (p, m) = (f.params.p, f.params.m);
        let n = p * m;
        let graph = per_prime_geometric(&f, f.cusp(1, 1)?);
        let primes = factor_odd_squarefree(n)?;
        let weight = rat(euler_phi(&primes) as i64, p as i64 - 1);
        let exact = geometric_contribution(n)?
            .terms
            .into_iter()
            .find(|(q, _)| *q == p)
            .map(|(_, c)| c);
        let pass = matches!((&graph, &exact), (Ok(g), Some(c)) if &(&weight * g) == c);
        out.push(CheckResult::from_bool(
            "geometric_cross_oracle",
            pass,
            format!(
                "(p={p}, m={m}) graph {} vs Q(N,p) {}",
                graph.map(|g| format_rational(&g)).unwrap_or_else(|e| e.to_string()),
                format_rational(&q_coefficient(n, p))
            ),
        ));
        out.push(CheckResult::from_bool(
            "beta_closed_forms",
            beta_s_closed(&f.params) == beta_sp_closed(n, p),
            format!("(p={p}, m={m}) {}", format_rational(&beta_sp_closed(n, p))),
        ));
    }
    out.push(CheckResult::from_bool(
        "q_15_5",
        q_coefficient(15, 5) == rat(133, 60),
        format!("Q(15,5) = {}", format_rational(&q_coefficient(15, 5))),
    ));
    let start = Instant::now();
    let reports = scan(SCAN_MAX)?;
    let elapsed = start.elapsed();
    let bad: Vec<u64> = reports.iter().filter(|r| !r.strict_inequality_holds()).map(|r| r.n).collect();
    out.push(CheckResult::from_bool(
        "lower_bound_strict",
        bad.is_empty(),
        format!(
            "lower_bound > phi(N) log N / (5N^2) for {} admissible N <= {SCAN_MAX} in {:.2}s; failures {bad:?}",
            reports.len(),
            elapsed.as_secs_f64()
        ),
    ));
    out.push(CheckResult::from_bool(
        "scan_time",
        elapsed.as_secs_f64() < 60.0,
        format!("{:.2}s", elapsed.as_secs_f64()),
    ));
    Ok(out)
}
