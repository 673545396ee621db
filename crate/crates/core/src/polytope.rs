//! Integer points of the base polytope
//! `B_f(d) = { x ∈ N^E : x(U) ≤ f(U) for all U ⊆ E, x(E) = d }`
//! and the local moves between them.

use std::fmt;

use crate::error::{Error, Result};
use crate::rank::{ElementSet, RankFunction, ENUMERATION_CAP};

/// A nonnegative integer vector indexed by the ground set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Allocation(Vec<u64>);

impl Allocation {
    pub fn zero(m: usize) -> Self {
        Allocation(vec![0; m])
    }

    pub fn new(values: Vec<u64>) -> Self {
        Allocation(values)
    }

    /// `χ_e` in dimension `m`.
    pub fn unit(m: usize, e: usize) -> Self {
        let mut x = Allocation::zero(m);
        x.0[e] = 1;
        x
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, e: usize) -> u64 {
        self.0[e]
    }

    pub fn values(&self) -> &[u64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<u64> {
        self.0
    }

    /// `x(E)`.
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// `x(U)`.
    pub fn sum_over(&self, set: ElementSet) -> u64 {
        set.iter()
            .filter(|&e| e < self.0.len())
            .map(|e| self.0[e])
            .sum()
    }

    /// `{e : x_e > 0}`.
    pub fn support(&self) -> ElementSet {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0)
            .map(|(e, _)| e)
            .collect()
    }

    pub fn l1_distance(&self, other: &Allocation) -> u64 {
        assert_eq!(self.len(), other.len(), "dimension mismatch");
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.abs_diff(b))
            .sum()
    }

    /// `x - χ_from + χ_to`. Membership is not checked.
    pub fn apply_exchange(&self, from: usize, to: usize) -> Result<Allocation> {
        self.check_index(from)?;
        self.check_index(to)?;
        if self.0[from] == 0 {
            return Err(Error::Domain(format!(
                "cannot move a unit out of element {from}: it holds none"
            )));
        }
        let mut y = self.clone();
        y.0[from] -= 1;
        y.0[to] += 1;
        Ok(y)
    }

    /// `x + χ_e`.
    pub fn apply_increment(&self, e: usize) -> Result<Allocation> {
        self.check_index(e)?;
        let mut y = self.clone();
        y.0[e] += 1;
        Ok(y)
    }

    /// `x - χ_e`.
    pub fn apply_decrement(&self, e: usize) -> Result<Allocation> {
        self.check_index(e)?;
        if self.0[e] == 0 {
            return Err(Error::Domain(format!(
                "cannot decrement element {e} below zero"
            )));
        }
        let mut y = self.clone();
        y.0[e] -= 1;
        Ok(y)
    }

    fn check_index(&self, e: usize) -> Result<()> {
        if e >= self.0.len() {
            return Err(Error::Domain(format!(
                "element {e} outside a vector of length {}",
                self.0.len()
            )));
        }
        Ok(())
    }
}

impl From<Vec<u64>> for Allocation {
    fn from(v: Vec<u64>) -> Self {
        Allocation(v)
    }
}

impl fmt::Debug for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// `B_f(d)` for a rank function `f` and rank `d`.
#[derive(Clone, Debug)]
pub struct BasePolytope {
    rank: RankFunction,
    demand: u64,
}

impl BasePolytope {
    pub fn new(rank: RankFunction, demand: u64) -> Self {
        BasePolytope { rank, demand }
    }

    pub fn rank(&self) -> &RankFunction {
        &self.rank
    }

    pub fn demand(&self) -> u64 {
        self.demand
    }

    pub fn dim(&self) -> usize {
        self.rank.ground().len()
    }

    /// The same polytope family at another rank.
    pub fn with_demand(&self, demand: u64) -> BasePolytope {
        BasePolytope {
            rank: self.rank.clone(),
            demand,
        }
    }

    /// Exhaustive test of every constraint `x(U) ≤ f(U)` plus `x(E) = d`.
    pub fn member(&self, x: &Allocation) -> Result<bool> {
        let m = self.dim();
        if x.len() != m {
            return Err(Error::Domain(format!(
                "allocation has {} entries, ground set has {m}",
                x.len()
            )));
        }
        if m > ENUMERATION_CAP {
            return Err(Error::Capacity {
                what: "ground set size for exhaustive membership",
                limit: ENUMERATION_CAP,
                actual: m,
            });
        }
        if x.total() != self.demand {
            return Ok(false);
        }
        // sums[U] = x(U), filled by peeling off the lowest element.
        let mut sums = vec![0u64; 1 << m];
        for u in 1..sums.len() {
            let low = u.trailing_zeros() as usize;
            sums[u] = sums[u & (u - 1)] + x.get(low);
            if sums[u] > self.rank.value(ElementSet::from_bits(u as u64)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn require_member(&self, x: &Allocation) -> Result<()> {
        if !self.member(x)? {
            return Err(Error::Precondition(format!(
                "allocation {x} is not in the base polytope of rank {}",
                self.demand
            )));
        }
        Ok(())
    }

    /// Feasible local exchanges `D_e(x) = {g ≠ e : x + χ_g - χ_e ∈ B_f(d)}`.
    /// Empty when `x_e = 0`.
    pub fn exchange_set(&self, x: &Allocation, e: usize) -> Result<ElementSet> {
        self.require_member(x)?;
        if e >= self.dim() {
            return Err(Error::Domain(format!("element {e} outside the ground set")));
        }
        if x.get(e) == 0 {
            return Ok(ElementSet::EMPTY);
        }
        let mut out = ElementSet::EMPTY;
        for g in (0..self.dim()).filter(|&g| g != e) {
            if self.member(&x.apply_exchange(e, g)?)? {
                out = out.with(g);
            }
        }
        Ok(out)
    }

    /// Slack set `S(x) = {e : x + χ_e ∈ B_f(d+1)}`.
    pub fn slack_set(&self, x: &Allocation) -> Result<ElementSet> {
        self.require_member(x)?;
        let next = self.with_demand(self.demand + 1);
        let mut out = ElementSet::EMPTY;
        for e in 0..self.dim() {
            if next.member(&x.apply_increment(e)?)? {
                out = out.with(e);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank::GroundSet;

    fn k3() -> BasePolytope {
        BasePolytope::new(
            RankFunction::graphic_indexed(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap(),
            2,
        )
    }

    fn uniform2(d: u64) -> BasePolytope {
        // f(U) = 2 for every non-empty U.
        let f = RankFunction::from_table(GroundSet::indexed(2).unwrap(), vec![0, 2, 2, 2]).unwrap();
        BasePolytope::new(f, d)
    }

    fn alloc(v: &[u64]) -> Allocation {
        Allocation::new(v.to_vec())
    }

    #[test]
    fn member_examples() {
        assert!(k3().with_demand(0).member(&alloc(&[0, 0, 0])).unwrap());
        assert!(k3().member(&alloc(&[1, 1, 0])).unwrap());
        assert!(!k3().member(&alloc(&[2, 0, 0])).unwrap());
        assert!(!k3().member(&alloc(&[1, 0, 0])).unwrap());
        assert!(matches!(
            k3().member(&alloc(&[1, 1])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn exchange_set_examples() {
        let p = uniform2(2);
        assert_eq!(
            p.exchange_set(&alloc(&[2, 0]), 0).unwrap(),
            ElementSet::singleton(1)
        );
        assert_eq!(
            p.exchange_set(&alloc(&[2, 0]), 1).unwrap(),
            ElementSet::EMPTY
        );

        // Edges (a,b), (b,c), (a,c); dropping (a,b) from {(a,b),(b,c)}
        // can only be repaired by (a,c).
        let x = alloc(&[1, 1, 0]);
        let d = k3().exchange_set(&x, 0).unwrap();
        assert_eq!(d, ElementSet::singleton(2));
        assert!(k3().member(&x.apply_exchange(0, 2).unwrap()).unwrap());

        assert!(matches!(
            k3().exchange_set(&alloc(&[2, 0, 0]), 0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn slack_set_examples() {
        let p = k3().with_demand(0);
        assert_eq!(
            p.slack_set(&alloc(&[0, 0, 0])).unwrap(),
            ElementSet::full(3)
        );
        assert_eq!(
            k3().slack_set(&alloc(&[1, 1, 0])).unwrap(),
            ElementSet::EMPTY
        );
    }

    #[test]
    fn moves() {
        let x = alloc(&[1, 1]);
        assert_eq!(x.apply_exchange(0, 1).unwrap(), alloc(&[0, 2]));
        assert_eq!(alloc(&[0, 0]).apply_increment(1).unwrap(), alloc(&[0, 1]));
        assert_eq!(
            x.apply_exchange(0, 1)
                .unwrap()
                .apply_exchange(1, 0)
                .unwrap(),
            x
        );
        assert!(matches!(
            alloc(&[0, 1]).apply_exchange(0, 1),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            alloc(&[0, 1]).apply_decrement(0),
            Err(Error::Domain(_))
        ));
        assert_eq!(x.l1_distance(&x.apply_exchange(0, 1).unwrap()), 2);
        assert_eq!(x.l1_distance(&x.apply_increment(0).unwrap()), 1);
    }

    #[test]
    fn display() {
        assert_eq!(alloc(&[1, 0, 2]).to_string(), "(1,0,2)");
    }
}
