//! Vertical Q-divisors attached to a cusp section on a Fermat fiber and the
//! exact identities they satisfy.
//!
//! Two rows of the closed-form tables differ from the usual printed ones for
//! chain components at depth `r >= 2`; see [`v_divisor`].

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{beta_sp_closed, q_coefficient};
use crate::check::CheckResult;
use crate::error::{Error, Result};
use crate::fermat_model::{FermatFiber, FermatKind, FermatLabel, FermatParams};
use crate::fiber_graph::{CuspSection, GaugeSolver, QDivisor};
use crate::rational::{format_rational, int, rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaNu {
    pub lambda: Rational,
    pub nu: Rational,
}

impl LambdaNu {
    pub fn sum(&self) -> Rational {
        &self.lambda + &self.nu
    }
}

pub fn lambda_nu(params: &FermatParams) -> LambdaNu {
    let (p, m) = (params.p as i64, params.m as i64);
    let g1 = params.genus() as i64 - 1;
    let base = rat(m * (p - 2), 2 * g1);
    LambdaNu {
        lambda: -(&base * &base),
        nu: rat(p - 2, p * g1),
    }
}

fn two_g_minus_two(params: &FermatParams) -> Rational {
    int(2 * params.genus() as i64 - 2)
}

/// `V_Fm = (p - 2)/(2g - 2) * Fm`.
pub fn v_fm(fiber: &FermatFiber) -> QDivisor {
    let p = fiber.params.p as i64;
    QDivisor::single(fiber.fm(), int(p - 2) / two_g_minus_two(&fiber.params))
}

fn lookup(fiber: &FermatFiber, label: FermatLabel) -> Result<usize> {
    fiber
        .id(label)
        .ok_or_else(|| Error::Internal(format!("missing component {label}")))
}

/// The representative `V_D` with `(V_D . C) = a_C/(2g-2) - delta_{D,C}/d_C`
/// for every component `C`, normalized by its `Fm` coefficient.
///
/// For a chain component at depth `r` on chain `s` of `LXYZ(i)`:
/// `V_Fm + (1/p) LXYZ(i) + sum_{j,k} (j/N) Chain(j,k,i)` plus, on chain `s`,
/// `j(m-r)/(rm)` for `j < r` and `(m-j)/m` for `j >= r`. The commonly quoted
/// form is `r` times this minus `(r-1) V_Fm`; it only satisfies the defining
/// relation at `r = 1` (see [`printed_chain_representative`]).
pub fn v_divisor(fiber: &FermatFiber, id: usize) -> Result<QDivisor> {
    let label = fiber.config.component(id)?.label;
    let FermatParams { p, m, .. } = fiber.params;
    let (pi, mi, ni) = (p as i64, m as i64, (p * m) as i64);
    let mut v = v_fm(fiber);
    match label.kind {
        FermatKind::Fm => {}
        FermatKind::Ldelta => v.add_to(id, rat(1, pi)),
        FermatKind::Lgamma | FermatKind::LgammaLeaf => {
            let parent = lookup(fiber, FermatLabel::lgamma(label.i))?;
            v.add_to(parent, rat(1, pi));
            for j in 1..=p {
                v.add_to(lookup(fiber, FermatLabel::leaf(j, label.i))?, rat(1, 2 * pi));
            }
            if label.kind == FermatKind::LgammaLeaf {
                v.add_to(id, rat(1, 2));
            }
        }
        FermatKind::LXYZ | FermatKind::Chain => {
            let i = label.i;
            v.add_to(lookup(fiber, FermatLabel::lxyz(i))?, rat(1, pi));
            for k in 1..=p {
                for j in 1..m {
                    v.add_to(lookup(fiber, FermatLabel::chain(j, k, i))?, rat(j as i64, ni));
                }
            }
            if label.kind == FermatKind::Chain {
                let (r, s) = (label.j as i64, label.k);
                for j in 1..m {
                    let ji = j as i64;
                    let c = if ji < r {
                        rat(ji * (mi - r), r * mi)
                    } else {
                        rat(mi - ji, mi)
                    };
                    v.add_to(lookup(fiber, FermatLabel::chain(j, s, i))?, c);
                }
            }
        }
    }
    Ok(v)
}

/// The chain representative as commonly printed: `V_Fm + (r/p) LXYZ(i) +
/// sum (jr/N) Chain(j,k,i)` plus `j(m-r)/m` (`j < r`) and `r(m-j)/m`
/// (`j >= r`) on chain `s`. Kept for comparison; wrong for `r >= 2`.
pub fn printed_chain_representative(fiber: &FermatFiber, r: u64, s: u64, i: u64) -> Result<QDivisor> {
    let FermatParams { p, m, .. } = fiber.params;
    let (pi, mi, ni, ri) = (p as i64, m as i64, (p * m) as i64, r as i64);
    if r == 0 || r >= m {
        return Err(Error::param(format!("chain depth r = {r} outside 1..{}", m - 1)));
    }
    let mut v = v_fm(fiber);
    v.add_to(fiber.require(FermatLabel::lxyz(i))?, rat(ri, pi));
    for k in 1..=p {
        for j in 1..m {
            v.add_to(fiber.require(FermatLabel::chain(j, k, i))?, rat(j as i64 * ri, ni));
        }
    }
    for j in 1..m {
        let ji = j as i64;
        let c = if ji < ri {
            rat(ji * (mi - ri), mi)
        } else {
            rat(ri * (mi - ji), mi)
        };
        v.add_to(fiber.require(FermatLabel::chain(j, s, i))?, c);
    }
    Ok(v)
}

/// Right-hand side of the defining relation of `V_D`, as a vector over `C`.
pub fn v_targets(fiber: &FermatFiber, id: usize) -> Vec<Rational> {
    let denom = two_g_minus_two(&fiber.params);
    let mut t: Vec<Rational> = fiber.config.a_numbers().into_iter().map(|a| a / &denom).collect();
    t[id] -= rat(1, fiber.config.multiplicity(id) as i64);
    t
}

/// Closed form of `V_D^2`.
pub fn v_self_closed(fiber: &FermatFiber, id: usize) -> Result<Rational> {
    let label = fiber.config.component(id)?.label;
    let ln = lambda_nu(&fiber.params);
    let FermatParams { p, .. } = fiber.params;
    let (pi, ni) = (p as i64, fiber.params.n() as i64);
    let ln_sum = ln.sum();
    Ok(match label.kind {
        FermatKind::Fm => ln.lambda,
        FermatKind::Ldelta => ln_sum - rat(1, pi),
        FermatKind::Lgamma => ln_sum - rat(1, 2 * pi),
        FermatKind::LgammaLeaf => ln_sum - rat(1 + pi, 2 * pi),
        FermatKind::LXYZ => ln_sum - rat(1, ni),
        FermatKind::Chain => {
            let r = label.j as i64;
            ln_sum - rat(r + ni - r * pi, r * ni)
        }
    })
}

/// `V_D^2` from the graph, checked against [`v_self_closed`].
pub fn v_self(fiber: &FermatFiber, id: usize) -> Result<Rational> {
    let v = v_divisor(fiber, id)?;
    let graph = fiber.config.pair(&v, &v)?;
    let closed = v_self_closed(fiber, id)?;
    if graph != closed {
        return Err(Error::contract(
            "V_D^2 closed form",
            format!(
                "{}: graph {} != closed {}",
                fiber.label(id),
                format_rational(&graph),
                format_rational(&closed)
            ),
        ));
    }
    Ok(graph)
}

/// Cusp position `(i, k)` of a section meeting `Chain(1, k, i)`.
fn cusp_position(fiber: &FermatFiber, cusp: CuspSection) -> Result<(u64, u64)> {
    let l = fiber.config.component(cusp.target)?.label;
    if l.kind != FermatKind::Chain || l.j != 1 {
        return Err(Error::param(format!("section target {l} is not a chain end")));
    }
    Ok((l.i, l.k))
}

/// Closed form of `(V_S . V_D)`.
pub fn v_s_pair_closed(fiber: &FermatFiber, cusp: CuspSection, id: usize) -> Result<Rational> {
    let (i0, k0) = cusp_position(fiber, cusp)?;
    let label = fiber.config.component(id)?.label;
    let ln = lambda_nu(&fiber.params);
    let (mi, ni) = (fiber.params.m as i64, fiber.params.n() as i64);
    let mut out = ln.sum();
    match label.kind {
        FermatKind::Fm => out = &ln.lambda + &ln.nu / int(2),
        FermatKind::Ldelta | FermatKind::Lgamma | FermatKind::LgammaLeaf => {}
        FermatKind::LXYZ => {
            if label.i == i0 {
                out -= rat(1, ni);
            }
        }
        FermatKind::Chain => {
            if label.i == i0 {
                out -= rat(1, ni);
                if label.k == k0 {
                    let r = label.j as i64;
                    out -= rat(mi - r, r * mi);
                }
            }
        }
    }
    Ok(out)
}

/// `V_S`: the representative of the chain end the section meets.
pub fn v_s(fiber: &FermatFiber, cusp: CuspSection) -> Result<QDivisor> {
    cusp_position(fiber, cusp)?;
    v_divisor(fiber, cusp.target)
}

fn dot(d: &QDivisor, w: &[Rational]) -> Rational {
    d.iter().map(|(id, c)| c * &w[id]).sum()
}

/// `U_S = sum_C d_C (2 (V_C . V_S) - V_C^2) C`.
pub fn u_s(fiber: &FermatFiber, cusp: CuspSection) -> Result<QDivisor> {
    let vs = v_s(fiber, cusp)?;
    let ws = fiber.config.pairing_vector(&vs)?;
    let coeffs: Vec<Result<(usize, Rational)>> = (0..fiber.config.len())
        .into_par_iter()
        .map(|id| {
            let v = v_divisor(fiber, id)?;
            let cross = dot(&v, &ws);
            let sq = fiber.config.pair(&v, &v)?;
            let d = int(fiber.config.multiplicity(id) as i64);
            Ok((id, d * (int(2) * cross - sq)))
        })
        .collect();
    coeffs.into_iter().collect::<Result<Vec<_>>>().map(QDivisor::from_pairs)
}

/// The explicit expansion as usually printed, taken literally.
pub fn u_s_printed_expansion(fiber: &FermatFiber, cusp: CuspSection) -> Result<QDivisor> {
    let (i0, k0) = cusp_position(fiber, cusp)?;
    let FermatParams { p, m, .. } = fiber.params;
    let (pi, mi, ni) = (p as i64, m as i64, (p * m) as i64);
    let mut u = QDivisor::zero();
    for c in fiber.config.components() {
        let l = c.label;
        let coeff = match l.kind {
            FermatKind::Fm => int(0),
            FermatKind::Ldelta | FermatKind::Lgamma => rat(1, pi),
            FermatKind::LXYZ if l.i == i0 => rat(1, pi) - rat(2, pi),
            FermatKind::LXYZ => rat(1, pi),
            FermatKind::LgammaLeaf => rat(1 + pi, pi),
            FermatKind::Chain => {
                let j = l.j as i64;
                let mu = rat(j - j * pi + ni, ni);
                let mut x = int(j) * mu;
                if l.i == i0 {
                    x -= rat(2 * j, ni);
                    if l.k == k0 {
                        x -= rat(2 * (mi - j), mi);
                    }
                }
                x
            }
        };
        u.add_to(c.id, coeff);
    }
    Ok(u)
}

/// `sum_C d_C (2 (V_C . V_S) - V_S^2) C - (lambda + nu) F`.
pub fn u_s_fiber_shifted(fiber: &FermatFiber, cusp: CuspSection) -> Result<QDivisor> {
    let vs = v_s(fiber, cusp)?;
    let ws = fiber.config.pairing_vector(&vs)?;
    let vs2 = dot(&vs, &ws);
    let shift = lambda_nu(&fiber.params).sum();
    let mut u = QDivisor::zero();
    for id in 0..fiber.config.len() {
        let v = v_divisor(fiber, id)?;
        let d = int(fiber.config.multiplicity(id) as i64);
        u.add_to(id, &d * (int(2) * dot(&v, &ws) - &vs2) - d * &shift);
    }
    Ok(u)
}

/// `a_C + 2 (S . C) - (U_S . C)` for every component.
pub fn semipos_values(fiber: &FermatFiber, cusp: CuspSection, u: &QDivisor) -> Result<Vec<Rational>> {
    let wu = fiber.config.pairing_vector(u)?;
    Ok((0..fiber.config.len())
        .map(|id| {
            let mut x = fiber.config.a_number(id).expect("valid id") - &wu[id];
            if id == cusp.target {
                x += int(2);
            }
            x
        })
        .collect())
}

/// Per-component semipositivity values for the adopted `U_S`.
pub fn semipos_check(fiber: &FermatFiber, cusp: CuspSection) -> Result<Vec<(usize, Rational)>> {
    let u = u_s(fiber, cusp)?;
    Ok(semipos_values(fiber, cusp, &u)?.into_iter().enumerate().collect())
}

/// Quantities derived from one choice of `U_S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UsEvaluation {
    pub name: &'static str,
    /// `(2 V_S + U_S)^2`.
    pub square: Rational,
    /// `(K . U_S)`.
    pub canonical: Rational,
    pub semipos_min: Rational,
    pub beta_graph: Rational,
    /// `(U_S . Ldelta)`, if the fiber has an `Ldelta`.
    pub pair_with_ldelta: Option<Rational>,
}

pub fn evaluate_u(fiber: &FermatFiber, cusp: CuspSection, name: &'static str, u: &QDivisor) -> Result<UsEvaluation> {
    let vs = v_s(fiber, cusp)?;
    let mut w = vs.scaled(&int(2));
    w.axpy(&int(1), u);
    let square = fiber.config.pair(&w, &w)?;
    let canonical = fiber.config.canonical_pair(u)?;
    let semipos_min = semipos_values(fiber, cusp, u)?
        .into_iter()
        .min()
        .unwrap_or_else(Rational::zero);
    let g = fiber.params.genus() as i64;
    let beta_graph = rat(1 - g, g) * &square + int(2) * &canonical;
    let pair_with_ldelta = match fiber.id(FermatLabel::ldelta(1)) {
        Some(id) => Some(fiber.config.pair_with_component(u, id)?),
        None => None,
    };
    Ok(UsEvaluation { name, square, canonical, semipos_min, beta_graph, pair_with_ldelta })
}

/// Evaluates the three candidate definitions of `U_S` side by side.
pub fn u_s_probe(fiber: &FermatFiber, cusp: CuspSection) -> Result<Vec<UsEvaluation>> {
    Ok(vec![
        evaluate_u(fiber, cusp, "pairing_definition", &u_s(fiber, cusp)?)?,
        evaluate_u(fiber, cusp, "printed_expansion", &u_s_printed_expansion(fiber, cusp)?)?,
        evaluate_u(fiber, cusp, "fiber_shifted", &u_s_fiber_shifted(fiber, cusp)?)?,
    ])
}

/// `-(N (lambda + nu))^2`, the value `(2 V_S + U_S)^2` is expected to take.
pub fn expected_square(params: &FermatParams) -> Rational {
    let x = int(params.n() as i64) * lambda_nu(params).sum();
    -(&x * &x)
}

/// `(2m - 3) N (lambda + nu)`, the value `(K . U_S)` is expected to take.
pub fn expected_canonical(params: &FermatParams) -> Rational {
    int(2 * params.m as i64 - 3) * int(params.n() as i64) * lambda_nu(params).sum()
}

/// `((1 - g)/g) (2V_S + U_S)^2 + 2 (K . U_S)` on the graph.
pub fn beta_s_graph(fiber: &FermatFiber, cusp: CuspSection) -> Result<Rational> {
    Ok(evaluate_u(fiber, cusp, "pairing_definition", &u_s(fiber, cusp)?)?.beta_graph)
}

/// `N(lambda+nu) (N(lambda+nu)(g-1)/g + 4m - 6)`.
pub fn beta_s_closed(params: &FermatParams) -> Rational {
    let x = int(params.n() as i64) * lambda_nu(params).sum();
    let g = params.genus() as i64;
    &x * (&x * rat(g - 1, g) + int(4 * params.m as i64 - 6))
}

/// Graph value, asserted equal to the closed form.
pub fn beta_s(fiber: &FermatFiber, cusp: CuspSection) -> Result<Rational> {
    let graph = beta_s_graph(fiber, cusp)?;
    let closed = beta_s_closed(&fiber.params);
    if graph != closed {
        return Err(Error::contract(
            "beta_S",
            format!(
                "graph {} != closed form {}",
                format_rational(&graph),
                format_rational(&closed)
            ),
        ));
    }
    Ok(graph)
}

/// `G_S = V_S - V_Fm`.
pub fn g_s(fiber: &FermatFiber, cusp: CuspSection) -> Result<QDivisor> {
    Ok(&v_s(fiber, cusp)? - &v_fm(fiber))
}

/// `-(N - p + 1)/N`.
pub fn g_s_square_closed(params: &FermatParams) -> Rational {
    let (n, p) = (params.n() as i64, params.p as i64);
    rat(-(n - p + 1), n)
}

/// `(S + G_S . C) = 0` off `Fm` and `1/p` on `Fm`.
pub fn g_s_constraint_check(fiber: &FermatFiber, cusp: CuspSection) -> Result<CheckResult> {
    let g = g_s(fiber, cusp)?;
    let mut w = fiber.config.pairing_vector(&g)?;
    w[cusp.target] += int(1);
    let want_fm = rat(1, fiber.params.p as i64);
    let bad: Vec<usize> = (0..w.len())
        .filter(|&id| {
            if id == fiber.fm() {
                w[id] != want_fm
            } else {
                !w[id].is_zero()
            }
        })
        .collect();
    Ok(if bad.is_empty() {
        CheckResult::pass("g_s_constraints", "(S + G_S . C) = 0 off Fm, 1/p on Fm")
    } else {
        CheckResult::fail(
            "g_s_constraints",
            format!("violated at {}", fiber.label(bad[0])),
            bad,
        )
    })
}

/// `-2g G_S^2 + (2g - 2) V_S^2`, asserted equal to `Q(N, p)`.
pub fn per_prime_geometric(fiber: &FermatFiber, cusp: CuspSection) -> Result<Rational> {
    let g = g_s(fiber, cusp)?;
    let vs = v_s(fiber, cusp)?;
    let gi = fiber.params.genus() as i64;
    let value = int(-2 * gi) * fiber.config.pair(&g, &g)? + int(2 * gi - 2) * fiber.config.pair(&vs, &vs)?;
    let closed = q_coefficient(fiber.params.n(), fiber.params.p);
    if value != closed {
        return Err(Error::contract(
            "per-prime geometric term",
            format!("graph {} != Q(N,p) {}", format_rational(&value), format_rational(&closed)),
        ));
    }
    Ok(value)
}

fn first_mismatch(fiber: &FermatFiber, name: &str, bad: Vec<(usize, String)>, total: usize) -> CheckResult {
    if bad.is_empty() {
        CheckResult::pass(name, format!("{total} exact equalities"))
    } else {
        let detail = format!("{} of {total} fail; first at {}: {}", bad.len(), fiber.label(bad[0].0), bad[0].1);
        CheckResult::fail(name, detail, bad.into_iter().map(|(id, _)| id).collect())
    }
}

/// `(V_D . C) = a_C/(2g-2) - delta_{D,C}/d_C` for every pair `(D, C)`.
pub fn v_relation_check(fiber: &FermatFiber) -> CheckResult {
    let n = fiber.config.len();
    let denom = two_g_minus_two(&fiber.params);
    let base: Vec<Rational> = fiber.config.a_numbers().into_iter().map(|a| a / &denom).collect();
    let bad: Vec<(usize, String)> = (0..n)
        .into_par_iter()
        .filter_map(|d| {
            let v = v_divisor(fiber, d).ok()?;
            let w = fiber.config.pairing_vector(&v).ok()?;
            let inv = rat(1, fiber.config.multiplicity(d) as i64);
            (0..n).find_map(|c| {
                let want = if c == d { &base[c] - &inv } else { base[c].clone() };
                (w[c] != want).then(|| {
                    (d, format!("against {}: {} != {}", fiber.label(c), format_rational(&w[c]), format_rational(&want)))
                })
            })
        })
        .collect();
    first_mismatch(fiber, "v_relation", bad, n * n)
}

pub fn v_self_check(fiber: &FermatFiber) -> CheckResult {
    let bad: Vec<(usize, String)> = (0..fiber.config.len())
        .into_par_iter()
        .filter_map(|id| match v_self(fiber, id) {
            Ok(_) => None,
            Err(e) => Some((id, e.to_string())),
        })
        .collect();
    first_mismatch(fiber, "v_self_closed_form", bad, fiber.config.len())
}

pub fn v_s_pair_check(fiber: &FermatFiber, cusp: CuspSection) -> Result<CheckResult> {
    let vs = v_s(fiber, cusp)?;
    let ws = fiber.config.pairing_vector(&vs)?;
    let bad: Vec<(usize, String)> = (0..fiber.config.len())
        .into_par_iter()
        .filter_map(|id| {
            let graph = dot(&v_divisor(fiber, id).ok()?, &ws);
            let closed = v_s_pair_closed(fiber, cusp, id).ok()?;
            (graph != closed).then(|| (id, format!("{} != {}", format_rational(&graph), format_rational(&closed))))
        })
        .collect();
    Ok(first_mismatch(fiber, "v_s_pairing_closed_form", bad, fiber.config.len()))
}

/// The gauged solver, fixed at `Fm = (p-2)/(2g-2)`, reproduces every `V_D`.
pub fn gauge_reproduction_check(fiber: &FermatFiber) -> Result<CheckResult> {
    let solver = GaugeSolver::new(&fiber.config, fiber.fm())?;
    let gauge_value = v_fm(fiber).get(fiber.fm());
    let bad: Vec<(usize, String)> = (0..fiber.config.len())
        .into_par_iter()
        .filter_map(|id| {
            let solved = match solver.solve(&v_targets(fiber, id), &gauge_value) {
                Ok(s) => s,
                Err(e) => return Some((id, e.to_string())),
            };
            let explicit = v_divisor(fiber, id).ok()?;
            (solved != explicit).then(|| (id, "solver and explicit representative differ".to_string()))
        })
        .collect();
    Ok(first_mismatch(fiber, "gauge_reproduction", bad, fiber.config.len()))
}

fn equality(name: &str, graph: &Rational, closed: &Rational) -> CheckResult {
    CheckResult::from_bool(
        name,
        graph == closed,
        format!("graph {} vs closed {}", format_rational(graph), format_rational(closed)),
    )
}

/// Cusp-dependent identities for one section.
pub fn cusp_suite(fiber: &FermatFiber, cusp: CuspSection) -> Result<Vec<CheckResult>> {
    let params = fiber.params;
    let mut out = vec![v_s_pair_check(fiber, cusp)?, g_s_constraint_check(fiber, cusp)?];

    let g = g_s(fiber, cusp)?;
    out.push(equality("g_s_square", &fiber.config.pair(&g, &g)?, &g_s_square_closed(&params)));

    let vs = v_s(fiber, cusp)?;
    let gi = params.genus() as i64;
    let geometric = int(-2 * gi) * fiber.config.pair(&g, &g)? + int(2 * gi - 2) * fiber.config.pair(&vs, &vs)?;
    out.push(equality("per_prime_geometric", &geometric, &q_coefficient(params.n(), params.p)));

    let eval = evaluate_u(fiber, cusp, "pairing_definition", &u_s(fiber, cusp)?)?;
    out.push(CheckResult::from_bool(
        "semipositivity",
        !eval.semipos_min.is_negative(),
        format!("minimum of a_C + 2(S.C) - (U_S.C) is {}", format_rational(&eval.semipos_min)),
    ));
    if let Some(x) = &eval.pair_with_ldelta {
        out.push(equality("u_s_pair_ldelta", x, &int(-1)));
    }
    out.push(equality("two_vs_plus_us_square", &eval.square, &expected_square(&params)));
    out.push(equality("canonical_u_s", &eval.canonical, &expected_canonical(&params)));
    out.push(equality("beta_graph_vs_closed", &eval.beta_graph, &beta_s_closed(&params)));
    Ok(out)
}

/// Quantities that must not depend on which cusp is chosen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CuspInvariants {
    pub cusp: (u64, u64),
    pub v_s_square: String,
    pub g_s_square: String,
    pub beta_graph: String,
    pub semipos_min: String,
}

pub fn cusp_invariants(fiber: &FermatFiber, cusp: CuspSection) -> Result<CuspInvariants> {
    let vs = v_s(fiber, cusp)?;
    let g = g_s(fiber, cusp)?;
    let eval = evaluate_u(fiber, cusp, "pairing_definition", &u_s(fiber, cusp)?)?;
    Ok(CuspInvariants {
        cusp: cusp_position(fiber, cusp)?,
        v_s_square: format_rational(&fiber.config.pair(&vs, &vs)?),
        g_s_square: format_rational(&fiber.config.pair(&g, &g)?),
        beta_graph: format_rational(&eval.beta_graph),
        semipos_min: format_rational(&eval.semipos_min),
    })
}

/// Three spread-out cusps: `(1,1)`, `(2,p)` and `(3m, 2)`.
pub fn sample_cusps(fiber: &FermatFiber) -> Vec<CuspSection> {
    let FermatParams { p, m, .. } = fiber.params;
    [(1, 1), (2, p), (3 * m, 2)]
        .into_iter()
        .filter_map(|(i, k)| fiber.cusp(i, k).ok())
        .collect()
}

pub fn cusp_independence_check(fiber: &FermatFiber, cusps: &[CuspSection]) -> Result<CheckResult> {
    let values = cusps
        .iter()
        .map(|&c| cusp_invariants(fiber, c))
        .collect::<Result<Vec<_>>>()?;
    let same = values.windows(2).all(|w| {
        let (a, b) = (&w[0], &w[1]);
        a.v_s_square == b.v_s_square
            && a.g_s_square == b.g_s_square
            && a.beta_graph == b.beta_graph
            && a.semipos_min == b.semipos_min
    });
    let positions: Vec<String> = values.iter().map(|v| format!("({},{})", v.cusp.0, v.cusp.1)).collect();
    Ok(CheckResult::from_bool(
        "cusp_independence",
        same && values.len() >= 3,
        format!("cusps {} agree: {same}", positions.join(" ")),
    ))
}

/// Everything checkable on one fiber at one cusp.
pub fn identity_suite(fiber: &FermatFiber, cusp: CuspSection) -> Result<Vec<CheckResult>> {
    let mut out = vec![
        v_relation_check(fiber),
        v_self_check(fiber),
        gauge_reproduction_check(fiber)?,
    ];
    out.extend(cusp_suite(fiber, cusp)?);
    let closed57 = beta_s_closed(&fiber.params);
    let closed69 = beta_sp_closed(fiber.params.n(), fiber.params.p);
    out.push(equality("beta_closed_forms_agree", &closed57, &closed69));
    let mut cusps = vec![cusp];
    cusps.extend(sample_cusps(fiber).into_iter().filter(|c| *c != cusp));
    out.push(cusp_independence_check(fiber, &cusps)?);
    Ok(out)
}

/// Headline values reported alongside the identity suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorSummary {
    pub lambda_nu: LambdaNu,
    pub v_s_square: Rational,
    pub g_s_square: Rational,
    pub beta_graph: Rational,
    pub beta_closed: Rational,
    pub per_prime_geometric: Rational,
    pub semipos_min: Rational,
    pub probe: Vec<UsEvaluation>,
}

pub fn summarize(fiber: &FermatFiber, cusp: CuspSection) -> Result<DivisorSummary> {
    let vs = v_s(fiber, cusp)?;
    let g = g_s(fiber, cusp)?;
    let probe = u_s_probe(fiber, cusp)?;
    let gi = fiber.params.genus() as i64;
    let v_s_square = fiber.config.pair(&vs, &vs)?;
    let g_s_square = fiber.config.pair(&g, &g)?;
    Ok(DivisorSummary {
        lambda_nu: lambda_nu(&fiber.params),
        per_prime_geometric: int(-2 * gi) * &g_s_square + int(2 * gi - 2) * &v_s_square,
        v_s_square,
        g_s_square,
        beta_graph: probe[0].beta_graph.clone(),
        beta_closed: beta_s_closed(&fiber.params),
        semipos_min: probe[0].semipos_min.clone(),
        probe,
    })
}

/// Coefficients of a divisor keyed by label, for reports.
pub fn by_label(fiber: &FermatFiber, d: &QDivisor) -> BTreeMap<FermatLabel, Rational> {
    d.iter().map(|(id, c)| (fiber.label(id), c.clone())).collect()
}
