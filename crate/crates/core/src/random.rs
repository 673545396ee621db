//! Seeded generators for random instances: submodular and non-submodular
//! rank functions, regular costs, optimization instances and games.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cost::{CostFunction, CostKind, UnaryCost};
use crate::counterexample;
use crate::error::Result;
use crate::game::{Game, Player};
use crate::optimize::ProblemInstance;
use crate::rank::{ElementSet, GroundSet, RankFunction};

pub type InstanceRng = ChaCha8Rng;

pub fn rng(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_nonempty(rng: &mut impl Rng, m: usize) -> ElementSet {
    loop {
        let set = ElementSet::from_bits(rng.gen_range(1..1u64 << m));
        if !set.is_empty() {
            return set;
        }
    }
}

/// A random normalized monotone submodular rank function on `m` elements,
/// drawn from coverage, budget-additive, graphic, singleton-cover and
/// uniform families, sometimes truncated or scaled.
pub fn submodular_rank(rng: &mut impl Rng, m: usize) -> Result<RankFunction> {
    let ground = GroundSet::indexed(m)?;
    let base = match rng.gen_range(0..5) {
        0 => {
            let universe = rng.gen_range(2..=4);
            let weights: Vec<u64> = (0..universe).map(|_| rng.gen_range(1..=2)).collect();
            let covers: Vec<u64> = (0..m).map(|_| rng.gen_range(1..1u64 << universe)).collect();
            RankFunction::from_fn(ground, |u| {
                let covered = u.iter().fold(0, |acc, e| acc | covers[e]);
                (0..universe)
                    .filter(|&k| covered >> k & 1 == 1)
                    .map(|k| weights[k])
                    .sum()
            })?
        }
        1 => {
            let weights: Vec<u64> = (0..m).map(|_| rng.gen_range(1..=3)).collect();
            let cap = rng.gen_range(1..=weights.iter().sum::<u64>());
            RankFunction::from_fn(ground, |u| {
                u.iter().map(|e| weights[e]).sum::<u64>().min(cap)
            })?
        }
        2 => {
            let vertices = rng.gen_range(2..=(m + 1).min(4));
            let mut edges: Vec<(usize, usize)> =
                (1..vertices).map(|v| (rng.gen_range(0..v), v)).collect();
            while edges.len() < m {
                edges.push((rng.gen_range(0..vertices), rng.gen_range(0..vertices)));
            }
            edges.truncate(m);
            edges.shuffle(rng);
            RankFunction::graphic(ground, vertices, edges)?
        }
        3 => {
            let allowed = random_nonempty(rng, m);
            RankFunction::singleton_cover(ground, allowed, rng.gen_range(1..=3))?
        }
        _ => RankFunction::uniform(ground, rng.gen_range(1..=m as u64))?,
    };
    Ok(match rng.gen_range(0..6) {
        0 => {
            let total = base.total().max(1);
            base.truncate(rng.gen_range(1..=total))
        }
        1 => base.scale(2)?,
        _ => base,
    })
}

/// Whether every singleton has rank at most 1.
pub fn is_unit_capacity(f: &RankFunction) -> bool {
    (0..f.ground().len()).all(|e| f.value(ElementSet::singleton(e)) <= 1)
}

/// A strictly positive, normalized, monotone, non-submodular function on
/// `m ≥ 4` elements whose rank-2 polytope is not a polymatroid: value 1 on
/// non-empty subsets of a few random facets, 2 on other sets, and
/// sometimes 3 on large sets (a slack constraint for the tightening step).
pub fn non_submodular_rank(rng: &mut impl Rng, m: usize) -> Result<RankFunction> {
    assert!(m >= 4, "need at least four elements");
    loop {
        let facets: Vec<ElementSet> = (0..rng.gen_range(2..=3))
            .map(|_| random_nonempty(rng, m))
            .collect();
        let big = if rng.gen_bool(0.3) {
            rng.gen_range(3..=m)
        } else {
            usize::MAX
        };
        let f = RankFunction::from_fn(GroundSet::indexed(m)?, |u| {
            if u.is_empty() {
                0
            } else if facets.iter().any(|&s| u.is_subset(s)) {
                1
            } else if u.len() >= big {
                3
            } else {
                2
            }
        })?;
        if counterexample::tighten(&f, 2).is_ok() {
            return Ok(f);
        }
    }
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Nonnegative coefficients, at most cubic; sometimes half-integral.
fn coefficients(rng: &mut impl Rng) -> Vec<BigRational> {
    let degree = rng.gen_range(0..=3);
    (0..=degree)
        .map(|_| {
            if rng.gen_bool(0.2) {
                rational(rng.gen_range(0..=5), 2)
            } else {
                rational(rng.gen_range(0..=3), 1)
            }
        })
        .collect()
}

/// Convex nondecreasing nonnegative unary function.
fn convex_unary(rng: &mut impl Rng) -> UnaryCost {
    if rng.gen_bool(0.3) {
        UnaryCost::positive_part(rng.gen_range(1..=3), rng.gen_range(-2..=1))
    } else {
        UnaryCost::Polynomial(coefficients(rng))
    }
}

/// A regular cost function. `load_bound` is the largest `x + t` the
/// instance can reach; M/M/1 capacities are usually above it.
/// Binary matroid costs only appear when `unit_capacity` holds.
pub fn regular_cost(
    rng: &mut impl Rng,
    unit_capacity: bool,
    load_bound: u64,
) -> Result<CostFunction> {
    let families = if unit_capacity { 4 } else { 3 };
    match rng.gen_range(0..families) {
        0 => CostFunction::polynomial(coefficients(rng)),
        1 => CostFunction::scaled_congestion(convex_unary(rng)),
        2 => {
            let capacity = if rng.gen_bool(0.8) {
                load_bound + rng.gen_range(1..=3)
            } else {
                rng.gen_range(1..=3)
            };
            CostFunction::mm1(capacity)
        }
        _ => CostFunction::matroid_binary(UnaryCost::Polynomial(coefficients(rng))),
    }
}

/// Random instance with `1 ≤ |E| ≤ max_m`, `d ≤ min(max_d, f(E))` and
/// parameters in `0..=max_t`.
pub fn instance(
    rng: &mut impl Rng,
    max_m: usize,
    max_d: u64,
    max_t: u64,
) -> Result<ProblemInstance> {
    let m = rng.gen_range(1..=max_m);
    let f = submodular_rank(rng, m)?;
    let d = rng.gen_range(0..=max_d.min(f.total()));
    let t: Vec<u64> = (0..m).map(|_| rng.gen_range(0..=max_t)).collect();
    let unit = is_unit_capacity(&f);
    let costs = (0..m)
        .map(|_| regular_cost(rng, unit, max_d + max_t + 1))
        .collect::<Result<Vec<_>>>()?;
    ProblemInstance::new(f, d, t, costs)
}

/// Random polymatroid game with `1 ≤ n ≤ max_n` players, `2 ≤ m ≤ max_m`
/// resources and demands up to `max_demand`, biased towards the maximum.
/// Players often share cost functions, which creates congestion. Costs
/// are finite on every reachable load.
pub fn polymatroid_game(
    rng: &mut impl Rng,
    max_n: usize,
    max_m: usize,
    max_demand: u64,
) -> Result<Game> {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(2..=max_m);
    let ground = GroundSet::indexed(m)?;
    let load_bound = n as u64 * max_demand;
    let finite = |c: CostFunction| match c.kind() {
        CostKind::Mm1 { capacity } if *capacity <= load_bound => CostFunction::mm1(load_bound + 1),
        _ => Ok(c),
    };
    let shared = (0..m)
        .map(|_| finite(regular_cost(rng, false, load_bound)?))
        .collect::<Result<Vec<_>>>()?;
    let mut players = Vec::with_capacity(n);
    for _ in 0..n {
        let rank = submodular_rank(rng, m)?;
        let cap = max_demand.min(rank.total());
        let demand = if rng.gen_bool(0.6) {
            cap
        } else {
            rng.gen_range(0..=cap)
        };
        let unit = is_unit_capacity(&rank);
        let costs = if rng.gen_bool(0.5) {
            shared.clone()
        } else {
            (0..m)
                .map(|_| finite(regular_cost(rng, unit, load_bound)?))
                .collect::<Result<Vec<_>>>()?
        };
        players.push(Player {
            demand,
            rank,
            costs,
        });
    }
    Game::new(ground, players)
}

/// Two players sharing rank `f` with demand `min(2, f(E))` and linear
/// congestion costs.
pub fn symmetric_game(f: &RankFunction) -> Result<Game> {
    let m = f.ground().len();
    let c = CostFunction::scaled_congestion(UnaryCost::identity())?;
    let player = Player {
        demand: f.total().min(2),
        rank: f.clone(),
        costs: vec![c; m],
    };
    Game::new(f.ground().clone(), vec![player.clone(), player])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let a = instance(&mut rng(7), 5, 5, 3).unwrap();
        let b = instance(&mut rng(7), 5, 5, 3).unwrap();
        assert_eq!(a.params(), b.params());
        assert_eq!(a.demand(), b.demand());
        assert!(a.rank().same_values(b.rank()).unwrap());
    }

    #[test]
    fn submodular_ranks_are_polymatroids() {
        let mut r = rng(1);
        for _ in 0..50 {
            let m = r.gen_range(1..=5);
            let f = submodular_rank(&mut r, m).unwrap();
            assert!(f.is_submodular().unwrap().holds);
            assert!(f.is_monotone_normalized().unwrap().holds);
        }
    }

    #[test]
    fn non_submodular_ranks_qualify() {
        let mut r = rng(2);
        for _ in 0..10 {
            let f = non_submodular_rank(&mut r, 5).unwrap();
            assert!(!f.is_submodular().unwrap().holds);
            assert!(f.is_strictly_positive().unwrap());
        }
    }
}
