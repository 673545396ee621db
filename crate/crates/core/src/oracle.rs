//! Brute-force reference implementations. Nothing here calls the polytope,
//! optimizer or game code it is used to check; constraints and costs are
//! evaluated directly from the rank function and cost functions.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exact::ExactValue;
use crate::game::{Game, StrategyProfile};
use crate::optimize::ProblemInstance;
use crate::polytope::{Allocation, BasePolytope};
use crate::rank::{ElementSet, RankFunction};

/// Limits on brute-force enumeration.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_ground: usize,
    pub max_demand: u64,
    pub max_points: usize,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_ground: 6,
            max_demand: 6,
            max_points: 1_000_000,
        }
    }
}

impl EnumerationBudget {
    fn check(&self, m: usize, d: u64) -> Result<()> {
        if m > self.max_ground {
            return Err(Error::Capacity {
                what: "ground set size",
                limit: self.max_ground,
                actual: m,
            });
        }
        if d > self.max_demand {
            return Err(Error::Capacity {
                what: "demand",
                limit: self.max_demand as usize,
                actual: d as usize,
            });
        }
        Ok(())
    }
}

/// Every constraint `x(U) ≤ f(U)` with `U ⊆ {0..=k}` and `k ∈ U`.
fn prefix_ok(f: &RankFunction, x: &[u64], k: usize) -> bool {
    let top = 1u64 << k;
    (0..top).all(|low| {
        let set = ElementSet::from_bits(low | top);
        let sum: u64 = set.iter().map(|e| x[e]).sum();
        sum <= f.value(set)
    })
}

/// All integer points of `B_f(d)` in lexicographic order, by recursive
/// generation with pruning on the constraints that are fully assigned.
pub fn enumerate_base(b: &BasePolytope, budget: &EnumerationBudget) -> Result<Vec<Allocation>> {
    let f = b.rank();
    let m = f.ground().len();
    let d = b.demand();
    budget.check(m, d)?;
    let mut out = Vec::new();
    let mut x = vec![0u64; m];
    fill(f, &mut x, 0, d, &mut out, budget)?;
    Ok(out)
}

fn fill(
    f: &RankFunction,
    x: &mut Vec<u64>,
    k: usize,
    remaining: u64,
    out: &mut Vec<Allocation>,
    budget: &EnumerationBudget,
) -> Result<()> {
    let m = x.len();
    let values: Vec<u64> = if k + 1 == m {
        vec![remaining]
    } else {
        (0..=remaining).collect()
    };
    for v in values {
        x[k] = v;
        if !prefix_ok(f, x, k) {
            continue;
        }
        if k + 1 == m {
            out.push(Allocation::new(x.clone()));
            if out.len() > budget.max_points {
                return Err(Error::Capacity {
                    what: "enumerated points",
                    limit: budget.max_points,
                    actual: out.len(),
                });
            }
        } else {
            fill(f, x, k + 1, remaining - v, out, budget)?;
        }
    }
    x[k] = 0;
    Ok(())
}

/// The same set as [`enumerate_base`] by scanning the whole grid
/// `{0..d}^E` and testing every constraint. Only for tiny sizes.
pub fn grid_scan_base(b: &BasePolytope, budget: &EnumerationBudget) -> Result<Vec<Allocation>> {
    let f = b.rank();
    let m = f.ground().len();
    let d = b.demand();
    budget.check(m, d)?;
    let side = d + 1;
    let cells = side
        .checked_pow(m as u32)
        .filter(|&c| c <= budget.max_points as u64)
        .ok_or(Error::Capacity {
            what: "grid cells",
            limit: budget.max_points,
            actual: usize::MAX,
        })?;
    let mut out = Vec::new();
    for code in 0..cells {
        // Most significant coordinate first, so codes run in lex order.
        let mut x = vec![0u64; m];
        let mut rest = code;
        for slot in x.iter_mut().rev() {
            *slot = rest % side;
            rest /= side;
        }
        if x.iter().sum::<u64>() != d {
            continue;
        }
        let ok = (1..1u64 << m).all(|bits| {
            let set = ElementSet::from_bits(bits);
            set.iter().map(|e| x[e]).sum::<u64>() <= f.value(set)
        });
        if ok {
            out.push(Allocation::new(x));
        }
    }
    Ok(out)
}

/// `Σ_e C_e(x_e; t_e)` evaluated directly.
pub fn objective(p: &ProblemInstance, x: &Allocation) -> Result<ExactValue> {
    let mut total = ExactValue::zero();
    for (e, c) in p.costs().iter().enumerate() {
        total = total + c.eval(x.get(e), p.params()[e])?;
    }
    Ok(total)
}

/// Global minimum over the enumerated polytope; ties go to the
/// lexicographically smallest point.
pub fn brute_optimum(
    p: &ProblemInstance,
    budget: &EnumerationBudget,
) -> Result<(Allocation, ExactValue)> {
    let mut best: Option<(Allocation, ExactValue)> = None;
    for x in enumerate_base(p.polytope(), budget)? {
        let v = objective(p, &x)?;
        if best.as_ref().is_none_or(|(_, b)| v < *b) {
            best = Some((x, v));
        }
    }
    best.ok_or_else(|| Error::Infeasible(format!("B_f({}) has no integer point", p.demand())))
}

/// All strategies of every player, at their full demands.
pub fn strategy_sets(g: &Game, budget: &EnumerationBudget) -> Result<Vec<Vec<Allocation>>> {
    g.players()
        .iter()
        .map(|p| enumerate_base(&BasePolytope::new(p.rank.clone(), p.demand), budget))
        .collect()
}

/// First pure equilibrium in the product of the strategy sets, scanning
/// profiles in odometer order with the last player fastest. `None` certifies
/// that no equilibrium exists.
pub fn brute_pne(g: &Game, budget: &EnumerationBudget) -> Result<Option<StrategyProfile>> {
    let sets = strategy_sets(g, budget)?;
    brute_pne_over(g, &sets, budget)
}

/// [`brute_pne`] with each player restricted to the given strategies.
pub fn brute_pne_over(
    g: &Game,
    sets: &[Vec<Allocation>],
    budget: &EnumerationBudget,
) -> Result<Option<StrategyProfile>> {
    if sets.len() != g.n() {
        return Err(Error::Domain(
            "one strategy list per player required".into(),
        ));
    }
    let mut size: usize = 1;
    for s in sets {
        size = size.saturating_mul(s.len());
    }
    if size > budget.max_points {
        return Err(Error::Capacity {
            what: "strategy profiles",
            limit: budget.max_points,
            actual: size,
        });
    }
    if size == 0 {
        return Ok(None);
    }
    let m = g.m();
    // Best attainable private cost per (player, opponent loads).
    let mut best: HashMap<(usize, Vec<u64>), ExactValue> = HashMap::new();
    let mut index = vec![0usize; g.n()];
    'profiles: loop {
        let profile: Vec<&Allocation> = index
            .iter()
            .enumerate()
            .map(|(i, &k)| &sets[i][k])
            .collect();
        let loads: Vec<u64> = (0..m)
            .map(|e| profile.iter().map(|x| x.get(e)).sum())
            .collect();
        let mut stable = true;
        for i in 0..g.n() {
            let others: Vec<u64> = (0..m).map(|e| loads[e] - profile[i].get(e)).collect();
            let current = cost_against(g, i, profile[i], &others)?;
            let key = (i, others);
            let floor = match best.get(&key) {
                Some(v) => v.clone(),
                None => {
                    let mut v = ExactValue::Infinite;
                    for y in &sets[i] {
                        v = v.min(cost_against(g, i, y, &key.1)?);
                    }
                    best.insert(key, v.clone());
                    v
                }
            };
            if floor < current {
                stable = false;
                break;
            }
        }
        if stable {
            let strategies = profile.into_iter().cloned().collect();
            return Ok(Some(StrategyProfile::new(strategies)));
        }
        for i in (0..g.n()).rev() {
            index[i] += 1;
            if index[i] < sets[i].len() {
                continue 'profiles;
            }
            index[i] = 0;
        }
        return Ok(None);
    }
}

fn cost_against(g: &Game, i: usize, own: &Allocation, others: &[u64]) -> Result<ExactValue> {
    let mut total = ExactValue::zero();
    for (e, c) in g.player(i).costs.iter().enumerate() {
        total = total + c.eval(own.get(e), others[e])?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::CostFunction;
    use crate::game::Player;
    use crate::rank::GroundSet;

    fn alloc(v: &[u64]) -> Allocation {
        Allocation::new(v.to_vec())
    }

    fn uniform2(d: u64) -> BasePolytope {
        let f = RankFunction::from_table(GroundSet::indexed(2).unwrap(), vec![0, 2, 2, 2]).unwrap();
        BasePolytope::new(f, d)
    }

    #[test]
    fn enumerate_examples() {
        let budget = EnumerationBudget::default();
        assert_eq!(
            enumerate_base(&uniform2(2), &budget).unwrap(),
            vec![alloc(&[0, 2]), alloc(&[1, 1]), alloc(&[2, 0])]
        );
        let k3 = BasePolytope::new(
            RankFunction::graphic_indexed(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap(),
            2,
        );
        assert_eq!(
            enumerate_base(&k3, &budget).unwrap(),
            vec![alloc(&[0, 1, 1]), alloc(&[1, 0, 1]), alloc(&[1, 1, 0])]
        );
        assert!(enumerate_base(&uniform2(3), &budget).unwrap().is_empty());
        assert_eq!(
            grid_scan_base(&k3, &budget).unwrap(),
            enumerate_base(&k3, &budget).unwrap()
        );
    }

    #[test]
    fn budget_is_enforced() {
        let tight = EnumerationBudget {
            max_points: 2,
            ..Default::default()
        };
        assert!(matches!(
            enumerate_base(&uniform2(2), &tight),
            Err(Error::Capacity { .. })
        ));
        let small = EnumerationBudget {
            max_demand: 1,
            ..Default::default()
        };
        assert!(matches!(
            enumerate_base(&uniform2(2), &small),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn brute_optimum_examples() {
        let f = RankFunction::from_table(GroundSet::indexed(2).unwrap(), vec![0, 2, 2, 2]).unwrap();
        let sq = CostFunction::polynomial_int(&[0, 0, 1]).unwrap();
        let p = ProblemInstance::new(f, 2, vec![0, 0], vec![sq.clone(), sq]).unwrap();
        let budget = EnumerationBudget::default();
        assert_eq!(
            brute_optimum(&p, &budget).unwrap(),
            (alloc(&[1, 1]), ExactValue::from_integer(2))
        );
        assert!(matches!(
            brute_optimum(&p.with_demand(5), &budget),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn zero_demand_pne() {
        let ground = GroundSet::indexed(2).unwrap();
        let f = RankFunction::from_table(ground.clone(), vec![0, 2, 2, 2]).unwrap();
        let c = CostFunction::polynomial_int(&[0, 1]).unwrap();
        let player = Player {
            demand: 0,
            rank: f,
            costs: vec![c.clone(), c],
        };
        let g = Game::new(ground, vec![player.clone(), player]).unwrap();
        let x = brute_pne(&g, &EnumerationBudget::default())
            .unwrap()
            .unwrap();
        assert_eq!(x, StrategyProfile::zero(2, 2));
    }
}
