//! The special fiber at `p | N` of the minimal regular model of the Fermat
//! curve of exponent `N = p*m`: components, adjacency and cusp sections.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::check::CheckResult;
use crate::error::{Error, Result};
use crate::fiber_graph::{CuspSection, FiberConfig, QDivisor, DEFAULT_COMPONENT_CAP};
use crate::numtheory::{gcd, is_odd_prime, is_squarefree};
use crate::polyarith::double_root_count;
use crate::rational::{int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FermatKind {
    Fm,
    LXYZ,
    Chain,
    Lgamma,
    LgammaLeaf,
    Ldelta,
}

impl FermatKind {
    pub const ALL: [FermatKind; 6] = [
        FermatKind::Fm,
        FermatKind::LXYZ,
        FermatKind::Chain,
        FermatKind::Lgamma,
        FermatKind::LgammaLeaf,
        FermatKind::Ldelta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FermatKind::Fm => "Fm",
            FermatKind::LXYZ => "LXYZ",
            FermatKind::Chain => "Chain",
            FermatKind::Lgamma => "Lgamma",
            FermatKind::LgammaLeaf => "LgammaLeaf",
            FermatKind::Ldelta => "Ldelta",
        }
    }
}

impl fmt::Display for FermatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Structured component name. Unused indices are 0.
///
/// * `Chain`: `j` is the position from the cusp end (1..m-1), `k` the chain
///   (1..p), `i` the attached `LXYZ`.
/// * `LgammaLeaf`: `j` in 1..p, `i` the parent `Lgamma`.
/// * `LXYZ`, `Lgamma`, `Ldelta`: `i` only.
///
/// The derived order, `(kind, i, k, j)`, is the order components are built in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FermatLabel {
    pub kind: FermatKind,
    pub i: u64,
    pub k: u64,
    pub j: u64,
}

impl FermatLabel {
    pub const FM: FermatLabel = FermatLabel { kind: FermatKind::Fm, i: 0, k: 0, j: 0 };

    pub fn lxyz(i: u64) -> Self {
        Self { kind: FermatKind::LXYZ, i, k: 0, j: 0 }
    }

    pub fn chain(j: u64, k: u64, i: u64) -> Self {
        Self { kind: FermatKind::Chain, i, k, j }
    }

    pub fn lgamma(i: u64) -> Self {
        Self { kind: FermatKind::Lgamma, i, k: 0, j: 0 }
    }

    pub fn leaf(j: u64, i: u64) -> Self {
        Self { kind: FermatKind::LgammaLeaf, i, k: 0, j }
    }

    pub fn ldelta(i: u64) -> Self {
        Self { kind: FermatKind::Ldelta, i, k: 0, j: 0 }
    }
}

impl fmt::Display for FermatLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FermatKind::Fm => write!(f, "Fm"),
            FermatKind::Chain => write!(f, "Chain(j={},k={},i={})", self.j, self.k, self.i),
            FermatKind::LgammaLeaf => write!(f, "LgammaLeaf(j={},i={})", self.j, self.i),
            kind => write!(f, "{kind}({})", self.i),
        }
    }
}

/// Admissible `(p, m, s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FermatParams {
    pub p: u64,
    pub m: u64,
    pub s: u64,
}

impl FermatParams {
    pub fn new(p: u64, m: u64, s: u64) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::param(format!("p = {p} is not an odd prime")));
        }
        if m == 1 {
            return Err(Error::param(
                "m = 1 (prime exponent) is not supported: the model has a different special fiber",
            ));
        }
        if m < 3 || m.is_multiple_of(2) {
            return Err(Error::param(format!("m = {m} must be odd and at least 3")));
        }
        if !is_squarefree(m) {
            return Err(Error::param(format!("m = {m} is not squarefree")));
        }
        if gcd(p, m) != 1 {
            return Err(Error::param(format!("p = {p} divides m = {m}; N is not squarefree")));
        }
        if 2 * s > p - 3 {
            return Err(Error::param(format!("s = {s} violates 2s <= p - 3 for p = {p}")));
        }
        Ok(Self { p, m, s })
    }

    /// Takes `s` from the double-root count of `Psi mod p`.
    pub fn derive(p: u64, m: u64) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::param(format!("p = {p} is not an odd prime")));
        }
        Self::new(p, m, double_root_count(p)?)
    }

    pub fn n(&self) -> u64 {
        self.p * self.m
    }

    pub fn genus(&self) -> u64 {
        genus_formula(self.n())
    }

    pub fn rho(&self) -> u64 {
        self.m * self.s
    }

    pub fn expected_count(&self, kind: FermatKind) -> u64 {
        let (p, m, s) = (self.p, self.m, self.s);
        match kind {
            FermatKind::Fm => 1,
            FermatKind::LXYZ => 3 * m,
            FermatKind::Chain => 3 * m * p * (m - 1),
            FermatKind::Lgamma => m * s,
            FermatKind::LgammaLeaf => p * m * s,
            FermatKind::Ldelta => m * m * (p - 3) - 2 * m * s,
        }
    }

    pub fn expected_components(&self) -> u64 {
        FermatKind::ALL.iter().map(|&k| self.expected_count(k)).sum()
    }
}

pub fn genus_formula(n: u64) -> u64 {
    (n - 1) * (n - 2) / 2
}

/// A built configuration with its label index and cusp sections.
#[derive(Clone, Debug)]
pub struct FermatFiber {
    pub params: FermatParams,
    pub config: FiberConfig<FermatLabel>,
    index: BTreeMap<FermatLabel, usize>,
    cusps: Vec<CuspSection>,
}

pub fn build_config(params: FermatParams) -> Result<FermatFiber> {
    build_config_capped(params, DEFAULT_COMPONENT_CAP)
}

pub fn build_config_capped(params: FermatParams, cap: usize) -> Result<FermatFiber> {
    let total = params.expected_components();
    if total > cap as u64 {
        return Err(Error::CapExceeded {
            what: "component count".into(),
            value: total,
            cap: cap as u64,
        });
    }
    let FermatParams { p, m, s } = params;
    let pi = p as i64;
    let mut config = FiberConfig::new(params.genus());
    let mut index = BTreeMap::new();
    let mut add = |config: &mut FiberConfig<FermatLabel>, label, mult, genus, self_int| {
        let id = config.add_component(label, mult, genus, self_int);
        index.insert(label, id);
        id
    };

    let fm = add(&mut config, FermatLabel::FM, p, (m - 1) * (m - 2) / 2, -((m * m) as i64));
    let lxyz: Vec<usize> = (1..=3 * m)
        .map(|i| add(&mut config, FermatLabel::lxyz(i), m, 0, -pi))
        .collect();
    let mut cusps = Vec::with_capacity(3 * params.n() as usize);
    for i in 1..=3 * m {
        for k in 1..=p {
            let mut prev = None;
            for j in 1..m {
                let id = add(&mut config, FermatLabel::chain(j, k, i), j, 0, -2);
                match prev {
                    Some(q) => config.add_intersection(q, id, 1),
                    None => cusps.push(CuspSection { target: id }),
                }
                prev = Some(id);
            }
            config.add_intersection(prev.expect("m >= 3"), lxyz[i as usize - 1], 1);
        }
    }
    for &l in &lxyz {
        config.add_intersection(l, fm, 1);
    }
    let rho = m * s;
    let lgamma: Vec<usize> = (1..=rho)
        .map(|i| add(&mut config, FermatLabel::lgamma(i), 2, 0, -pi))
        .collect();
    for (x, &g) in lgamma.iter().enumerate() {
        for j in 1..=p {
            let leaf = add(&mut config, FermatLabel::leaf(j, x as u64 + 1), 1, 0, -2);
            config.add_intersection(leaf, g, 1);
        }
        config.add_intersection(g, fm, 1);
    }
    for i in 1..=params.expected_count(FermatKind::Ldelta) {
        let d = add(&mut config, FermatLabel::ldelta(i), 1, 0, -pi);
        config.add_intersection(d, fm, 1);
    }
    Ok(FermatFiber { params, config, index, cusps })
}

impl FermatFiber {
    /// Wraps an existing configuration, e.g. one loaded from JSON, rebuilding
    /// the label index and the cusp list from the labels.
    pub fn from_config(params: FermatParams, config: FiberConfig<FermatLabel>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for c in config.components() {
            if index.insert(c.label, c.id).is_some() {
                return Err(Error::param(format!("duplicate label {}", c.label)));
            }
        }
        if config.is_empty() || config.components()[0].label != FermatLabel::FM {
            return Err(Error::param("component 0 must be Fm"));
        }
        let mut ends: Vec<(FermatLabel, usize)> = index
            .iter()
            .filter(|(l, _)| l.kind == FermatKind::Chain && l.j == 1)
            .map(|(l, &id)| (*l, id))
            .collect();
        ends.sort();
        let cusps = ends.into_iter().map(|(_, target)| CuspSection { target }).collect();
        Ok(Self { params, config, index, cusps })
    }

    pub fn id(&self, label: FermatLabel) -> Option<usize> {
        self.index.get(&label).copied()
    }

    pub fn require(&self, label: FermatLabel) -> Result<usize> {
        self.id(label)
            .ok_or_else(|| Error::param(format!("no component {label} in this fiber")))
    }

    pub fn label(&self, id: usize) -> FermatLabel {
        self.config.components()[id].label
    }

    pub fn fm(&self) -> usize {
        0
    }

    pub fn cusps(&self) -> &[CuspSection] {
        &self.cusps
    }

    /// The cusp section meeting `Chain(1, k, i)`.
    pub fn cusp(&self, i: u64, k: u64) -> Result<CuspSection> {
        let target = self.id(FermatLabel::chain(1, k, i)).ok_or_else(|| {
            Error::param(format!(
                "cusp ({i},{k}) out of range: need 1 <= i <= {} and 1 <= k <= {}",
                3 * self.params.m,
                self.params.p
            ))
        })?;
        Ok(CuspSection { target })
    }

    pub fn census(&self) -> BTreeMap<FermatKind, u64> {
        let mut out: BTreeMap<FermatKind, u64> = FermatKind::ALL.iter().map(|&k| (k, 0)).collect();
        for c in self.config.components() {
            *out.get_mut(&c.label.kind).expect("every kind present") += 1;
        }
        out
    }

    pub fn census_check(&self) -> CheckResult {
        let census = self.census();
        let bad: Vec<String> = FermatKind::ALL
            .iter()
            .filter(|&&k| census[&k] != self.params.expected_count(k))
            .map(|&k| format!("{k}: {} != {}", census[&k], self.params.expected_count(k)))
            .collect();
        CheckResult::from_bool(
            "census",
            bad.is_empty(),
            if bad.is_empty() {
                format!("{} components as expected", self.config.len())
            } else {
                bad.join("; ")
            },
        )
    }

    /// One resolution chain `sum_j Chain(j, k, i)`.
    pub fn chain_divisor(&self, k: u64, i: u64) -> QDivisor {
        QDivisor::from_pairs(
            (1..self.params.m)
                .filter_map(|j| self.id(FermatLabel::chain(j, k, i)))
                .map(|id| (id, int(1))),
        )
    }

    /// Arithmetic genus 0 for every resolution chain and every leaf.
    pub fn fundamental_cycle_check(&self) -> CheckResult {
        let FermatParams { p, m, .. } = self.params;
        let mut bad = Vec::new();
        let mut count = 0;
        for i in 1..=3 * m {
            for k in 1..=p {
                let d = self.chain_divisor(k, i);
                count += 1;
                if d.is_zero() || self.config.p_a_divisor(&d).ok() != Some(Rational::from_integer(0.into())) {
                    bad.push(d.support().next().unwrap_or(0));
                }
            }
        }
        for c in self.config.components() {
            if c.label.kind == FermatKind::LgammaLeaf {
                count += 1;
                let d = QDivisor::single(c.id, int(1));
                if self.config.p_a_divisor(&d).ok() != Some(int(0)) {
                    bad.push(c.id);
                }
            }
        }
        if bad.is_empty() {
            CheckResult::pass("fundamental_cycles", format!("p_a = 0 for all {count} cycles"))
        } else {
            CheckResult::fail(
                "fundamental_cycles",
                format!("{} of {count} cycles have p_a != 0", bad.len()),
                bad,
            )
        }
    }

    /// Every cusp section meets a distinct `Chain(1, k, i)` and there are 3N.
    pub fn cusp_bijection_check(&self) -> CheckResult {
        let targets: std::collections::BTreeSet<usize> = self.cusps.iter().map(|c| c.target).collect();
        let l1 = self
            .config
            .components()
            .iter()
            .filter(|c| c.label.kind == FermatKind::Chain && c.label.j == 1)
            .count();
        let n3 = 3 * self.params.n() as usize;
        let ok = targets.len() == self.cusps.len()
            && self.cusps.len() == n3
            && l1 == n3
            && targets.iter().all(|&t| self.label(t).kind == FermatKind::Chain && self.label(t).j == 1);
        CheckResult::from_bool(
            "cusp_bijection",
            ok,
            format!("{} cusps, {} distinct targets, {l1} chain ends, 3N = {n3}", self.cusps.len(), targets.len()),
        )
    }

    /// Every generic check plus census, transversality, cusps and cycles.
    pub fn full_validation(&self) -> Vec<CheckResult> {
        let mut out = self.config.validate();
        out.push(self.census_check());
        out.push(transversality_check(&self.config, &self.params));
        out.push(self.cusp_bijection_check());
        out.push(self.fundamental_cycle_check());
        out
    }
}

/// `I_C`: sum over neighbors of multiplicity times number of points.
pub fn i_c<L>(config: &FiberConfig<L>, id: usize) -> u64 {
    config.neighbor_weight(id)
}

/// `2g - 2 = sum I_C + sum 2 d_C g_C - 2 sum d_C`, and `2g - 2 = m^2 p^2 - 3mp`.
pub fn transversality_check<L>(config: &FiberConfig<L>, params: &FermatParams) -> CheckResult {
    let mut rhs: i128 = 0;
    for c in config.components() {
        rhs += i_c(config, c.id) as i128;
        rhs += 2 * (c.multiplicity * c.genus) as i128;
        rhs -= 2 * c.multiplicity as i128;
    }
    let lhs = config.two_g_minus_two() as i128;
    let (m, p) = (params.m as i128, params.p as i128);
    let closed = m * m * p * p - 3 * m * p;
    CheckResult::from_bool(
        "transversality",
        lhs == rhs && lhs == closed,
        format!("2g - 2 = {lhs}, sum over components = {rhs}, m^2p^2 - 3mp = {closed}"),
    )
}
