//! Exact intersection theory on one special fiber: components, the
//! intersection pairing, adjunction numbers and a gauged solver for the
//! corank-one intersection matrix.

mod divisor;
mod solver;

pub use divisor::QDivisor;
pub use solver::{solve_gauge, sparse_rank, GaugeSolver};

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::check::CheckResult;
use crate::error::{Error, Result};
use crate::rational::{int, Rational};

/// Default bound on the number of components a fiber may have.
pub const DEFAULT_COMPONENT_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component<L> {
    pub id: usize,
    pub label: L,
    pub multiplicity: u64,
    pub genus: u64,
    pub self_intersection: i64,
}

/// A section meeting exactly one vertical component, transversally.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CuspSection {
    pub target: usize,
}

/// Weighted intersection graph of a special fiber.
///
/// Ids are dense indices into `components`. Off-diagonal pairings are the
/// number of transversal intersection points; diagonals are self-intersections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberConfig<L> {
    components: Vec<Component<L>>,
    adjacency: Vec<Vec<(usize, u64)>>,
    genus_g: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Intersection {
    pub a: usize,
    pub b: usize,
    pub count: u64,
}

/// Serialized form of a [`FiberConfig`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConfigDocument<L> {
    pub genus_g: u64,
    pub components: Vec<Component<L>>,
    pub intersections: Vec<Intersection>,
}

impl<L> FiberConfig<L> {
    pub fn new(genus_g: u64) -> Self {
        Self {
            components: Vec::new(),
            adjacency: Vec::new(),
            genus_g,
        }
    }

    /// Builds from raw per-row adjacency lists, without symmetrizing; used to
    /// load external data that [`FiberConfig::validate`] should judge.
    pub fn from_parts(
        genus_g: u64,
        components: Vec<Component<L>>,
        adjacency: Vec<Vec<(usize, u64)>>,
    ) -> Result<Self> {
        if adjacency.len() != components.len() {
            return Err(Error::param("adjacency rows do not match component count"));
        }
        for (i, c) in components.iter().enumerate() {
            if c.id != i {
                return Err(Error::param(format!("component at index {i} has id {}", c.id)));
            }
            if c.multiplicity == 0 {
                return Err(Error::param(format!("component {i} has multiplicity 0")));
            }
        }
        for row in &adjacency {
            if let Some(&(j, _)) = row.iter().find(|&&(j, _)| j >= components.len()) {
                return Err(Error::UnknownComponent(j));
            }
        }
        Ok(Self { components, adjacency, genus_g })
    }

    pub fn add_component(&mut self, label: L, multiplicity: u64, genus: u64, self_intersection: i64) -> usize {
        assert!(multiplicity >= 1, "multiplicity must be positive");
        let id = self.components.len();
        self.components.push(Component {
            id,
            label,
            multiplicity,
            genus,
            self_intersection,
        });
        self.adjacency.push(Vec::new());
        id
    }

    /// Records `count` transversal points between two distinct components.
    pub fn add_intersection(&mut self, a: usize, b: usize, count: u64) {
        assert!(a != b, "use the self-intersection for diagonal entries");
        for (x, y) in [(a, b), (b, a)] {
            match self.adjacency[x].iter_mut().find(|(j, _)| *j == y) {
                Some(entry) => entry.1 += count,
                None => self.adjacency[x].push((y, count)),
            }
        }
    }

    /// Removes every intersection point between `a` and `b`.
    pub fn remove_intersection(&mut self, a: usize, b: usize) {
        self.adjacency[a].retain(|&(j, _)| j != b);
        self.adjacency[b].retain(|&(j, _)| j != a);
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn genus_g(&self) -> u64 {
        self.genus_g
    }

    pub fn components(&self) -> &[Component<L>] {
        &self.components
    }

    pub fn component(&self, id: usize) -> Result<&Component<L>> {
        self.components.get(id).ok_or(Error::UnknownComponent(id))
    }

    pub fn component_mut(&mut self, id: usize) -> Result<&mut Component<L>> {
        self.components.get_mut(id).ok_or(Error::UnknownComponent(id))
    }

    pub fn neighbors(&self, id: usize) -> &[(usize, u64)] {
        &self.adjacency[id]
    }

    pub fn self_intersection(&self, id: usize) -> i64 {
        self.components[id].self_intersection
    }

    pub fn multiplicity(&self, id: usize) -> u64 {
        self.components[id].multiplicity
    }

    /// Integer matrix entry `(C_a . C_b)`.
    pub fn entry(&self, a: usize, b: usize) -> i64 {
        if a == b {
            self.components[a].self_intersection
        } else {
            self.adjacency[a]
                .iter()
                .filter(|(j, _)| *j == b)
                .map(|&(_, c)| c as i64)
                .sum()
        }
    }

    /// `2g - 2` for the generic fiber.
    pub fn two_g_minus_two(&self) -> i64 {
        2 * self.genus_g as i64 - 2
    }

    fn check_ids(&self, d: &QDivisor) -> Result<()> {
        match d.max_id() {
            Some(id) if id >= self.len() => Err(Error::UnknownComponent(id)),
            _ => Ok(()),
        }
    }

    /// `(D . C)` for every component `C`, indexed by id.
    pub fn pairing_vector(&self, d: &QDivisor) -> Result<Vec<Rational>> {
        self.check_ids(d)?;
        let mut out = vec![Rational::zero(); self.len()];
        for (id, c) in d.iter() {
            out[id] += c * int(self.components[id].self_intersection);
            for &(j, count) in &self.adjacency[id] {
                out[j] += c * int(count as i64);
            }
        }
        Ok(out)
    }

    /// `(D . C)` for a single component, reading only the row of `C`.
    pub fn pair_with_component(&self, d: &QDivisor, id: usize) -> Result<Rational> {
        self.check_ids(d)?;
        if id >= self.len() {
            return Err(Error::UnknownComponent(id));
        }
        let mut acc = d.get(id) * int(self.components[id].self_intersection);
        for &(j, count) in &self.adjacency[id] {
            let c = d.get(j);
            if !c.is_zero() {
                acc += c * int(count as i64);
            }
        }
        Ok(acc)
    }

    /// Bilinear intersection pairing of vertical Q-divisors.
    pub fn pair(&self, d: &QDivisor, e: &QDivisor) -> Result<Rational> {
        self.check_ids(d)?;
        self.check_ids(e)?;
        let (small, large) = if d.len() <= e.len() { (d, e) } else { (e, d) };
        let mut acc = Rational::zero();
        for (id, c) in small.iter() {
            acc += c * self.pair_with_component(large, id)?;
        }
        Ok(acc)
    }

    pub fn section_pair(&self, s: CuspSection, d: &QDivisor) -> Rational {
        d.get(s.target)
    }

    /// `a_C = -C^2 + 2 g_C - 2`, which equals `(K . C)` by adjunction.
    pub fn a_number(&self, id: usize) -> Result<Rational> {
        let c = self.component(id)?;
        Ok(int(-c.self_intersection + 2 * c.genus as i64 - 2))
    }

    pub fn a_numbers(&self) -> Vec<Rational> {
        (0..self.len()).map(|id| self.a_number(id).expect("valid id")).collect()
    }

    /// `(K . D)` without building `K`.
    pub fn canonical_pair(&self, d: &QDivisor) -> Result<Rational> {
        self.check_ids(d)?;
        let mut acc = Rational::zero();
        for (id, c) in d.iter() {
            acc += c * self.a_number(id)?;
        }
        Ok(acc)
    }

    /// Arithmetic genus `1 + (D^2 + K.D)/2` of a nonzero effective divisor.
    pub fn p_a_divisor(&self, d: &QDivisor) -> Result<Rational> {
        if d.is_zero() {
            return Err(Error::param("arithmetic genus of the zero divisor"));
        }
        if d.iter().any(|(_, c)| c.is_negative()) {
            return Err(Error::param("divisor is not effective"));
        }
        let two = int(2);
        Ok(int(1) + (self.pair(d, d)? + self.canonical_pair(d)?) / two)
    }

    /// The full fiber `F = sum d_C C`.
    pub fn fiber_divisor(&self) -> QDivisor {
        QDivisor::from_pairs(
            self.components
                .iter()
                .map(|c| (c.id, int(c.multiplicity as i64))),
        )
    }

    /// Sum of multiplicities of the neighbors of `C`, weighted by point count.
    pub fn neighbor_weight(&self, id: usize) -> u64 {
        self.adjacency[id]
            .iter()
            .map(|&(j, count)| self.components[j].multiplicity * count)
            .sum()
    }

    /// Orthogonality, symmetry, kernel dimension and the adjunction sum.
    pub fn validate(&self) -> Vec<CheckResult> {
        let mut out = Vec::new();

        let mut asym = Vec::new();
        for a in 0..self.len() {
            for &(b, _) in &self.adjacency[a] {
                if self.entry(a, b) != self.entry(b, a) {
                    asym.push(a);
                    break;
                }
            }
        }
        out.push(if asym.is_empty() {
            CheckResult::pass("symmetry", "pairing matrix is symmetric")
        } else {
            CheckResult::fail(
                "symmetry",
                format!("{} rows disagree with their transpose", asym.len()),
                asym,
            )
        });

        let fiber = self.fiber_divisor();
        let pv = self.pairing_vector(&fiber).expect("fiber ids are valid");
        let bad: Vec<usize> = (0..self.len()).filter(|&i| !pv[i].is_zero()).collect();
        out.push(if bad.is_empty() {
            CheckResult::pass("fiber_orthogonality", "(F . C) = 0 for every component")
        } else {
            CheckResult::fail(
                "fiber_orthogonality",
                format!("(F . C) = {} at component {}", pv[bad[0]], bad[0]),
                bad,
            )
        });

        let rows: Vec<BTreeMap<usize, Rational>> = (0..self.len())
            .map(|a| {
                let mut r: BTreeMap<usize, Rational> = BTreeMap::new();
                r.insert(a, int(self.components[a].self_intersection));
                for &(b, count) in &self.adjacency[a] {
                    *r.entry(b).or_insert_with(Rational::zero) += int(count as i64);
                }
                r
            })
            .collect();
        let rank = sparse_rank(rows);
        let kernel = self.len() - rank;
        out.push(CheckResult::from_bool(
            "kernel_dimension",
            kernel == 1,
            format!("rank {rank} of {}, kernel dimension {kernel}", self.len()),
        ));

        let sum: Rational = self
            .components
            .iter()
            .map(|c| int(c.multiplicity as i64) * self.a_number(c.id).expect("valid id"))
            .sum();
        let want = int(self.two_g_minus_two());
        out.push(CheckResult::from_bool(
            "adjunction_sum",
            sum == want,
            format!("sum d_C a_C = {sum}, 2g - 2 = {want}"),
        ));
        out
    }

    pub fn map_labels<M>(&self, f: impl Fn(&L) -> M) -> FiberConfig<M> {
        FiberConfig {
            components: self
                .components
                .iter()
                .map(|c| Component {
                    id: c.id,
                    label: f(&c.label),
                    multiplicity: c.multiplicity,
                    genus: c.genus,
                    self_intersection: c.self_intersection,
                })
                .collect(),
            adjacency: self.adjacency.clone(),
            genus_g: self.genus_g,
        }
    }
}

impl<L: Clone> FiberConfig<L> {
    pub fn to_document(&self) -> ConfigDocument<L> {
        let mut intersections = Vec::new();
        for (a, row) in self.adjacency.iter().enumerate() {
            let mut row = row.clone();
            row.sort_unstable();
            for (b, count) in row {
                if a < b {
                    intersections.push(Intersection { a, b, count });
                }
            }
        }
        ConfigDocument {
            genus_g: self.genus_g,
            components: self.components.clone(),
            intersections,
        }
    }

    pub fn from_document(doc: ConfigDocument<L>) -> Result<Self> {
        let n = doc.components.len();
        let mut adjacency: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
        for e in &doc.intersections {
            if e.a >= n || e.b >= n {
                return Err(Error::UnknownComponent(e.a.max(e.b)));
            }
            if e.a == e.b {
                return Err(Error::param(format!("intersection of component {} with itself", e.a)));
            }
            adjacency[e.a].push((e.b, e.count));
            adjacency[e.b].push((e.a, e.count));
        }
        Self::from_parts(doc.genus_g, doc.components, adjacency)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    /// Two genus-0 components of multiplicity 1 meeting in two points:
    /// each has self-intersection -2, generic genus 1.
    fn banana() -> FiberConfig<&'static str> {
        let mut c = FiberConfig::new(1);
        let a = c.add_component("A", 1, 0, -2);
        let b = c.add_component("B", 1, 0, -2);
        c.add_intersection(a, b, 2);
        c
    }

    #[test]
    fn banana_validates() {
        let c = banana();
        assert!(c.validate().iter().all(|r| r.pass), "{:?}", c.validate());
        let f = c.fiber_divisor();
        assert!(c.pair(&f, &f).unwrap().is_zero());
    }

    #[test]
    fn perturbed_self_intersection_is_caught() {
        let mut c = banana();
        c.component_mut(1).unwrap().self_intersection = -1;
        let checks = c.validate();
        let orth = checks.iter().find(|r| r.name == "fiber_orthogonality").unwrap();
        assert!(!orth.pass);
        assert_eq!(orth.offending, vec![1]);
    }

    #[test]
    fn asymmetric_rows_are_reported() {
        let comps = banana().components().to_vec();
        let c = FiberConfig::from_parts(1, comps, vec![vec![(1, 2)], vec![(0, 1)]]).unwrap();
        assert!(!c.validate()[0].pass);
    }

    #[test]
    fn gauge_solve_on_banana() {
        let c = banana();
        let mut t = BTreeMap::new();
        t.insert(0, rat(1, 1));
        t.insert(1, rat(-1, 1));
        let v = solve_gauge(&c, &t, (0, Rational::zero())).unwrap();
        assert_eq!(v.get(1), rat(1, 2));
        assert_eq!(c.pairing_vector(&v).unwrap(), vec![rat(1, 1), rat(-1, 1)]);
        t.insert(1, rat(0, 1));
        assert!(matches!(solve_gauge(&c, &t, (0, Rational::zero())), Err(Error::NoSolution(_))));
    }

    #[test]
    fn unknown_ids_are_rejected() {
        let c = banana();
        let d = QDivisor::single(7, rat(1, 1));
        assert_eq!(c.pair(&d, &d), Err(Error::UnknownComponent(7)));
    }
}
