//! Polymatroid congestion games: players pick points of their own base
//! polytopes and pay `Σ_e C_{i,e}(x_{i,e}; x_{-i,e})`.
//!
//! [`compute_pne`] raises demands one unit at a time and repairs the
//! profile with single-unit exchanges. Every exchange is checked against
//! the sorted per-unit marginal vector, which must fall strictly in
//! lexicographic order.

use std::cmp::Ordering;
use std::fmt;

use crate::cost::{CostFunction, UnaryCost};
use crate::error::{Error, Result};
use crate::exact::{lex_cmp, ExactValue};
use crate::optimize::{self, DemandShift, ProblemInstance, Step};
use crate::oracle::{self, EnumerationBudget};
use crate::polytope::{Allocation, BasePolytope};
use crate::rank::{ElementSet, GroundSet, RankFunction};

#[derive(Clone, Debug)]
pub struct Player {
    pub demand: u64,
    pub rank: RankFunction,
    /// One cost function per resource.
    pub costs: Vec<CostFunction>,
}

#[derive(Clone, Debug)]
pub struct Game {
    ground: GroundSet,
    players: Vec<Player>,
}

impl Game {
    /// Checks shapes, `d_i ≤ f_i(E)`, and regularity of every `C_{i,e}` on
    /// `[1..d_i] × [0..Σ_{j≠i} d_j]`.
    pub fn new(ground: GroundSet, players: Vec<Player>) -> Result<Self> {
        let m = ground.len();
        for (i, p) in players.iter().enumerate() {
            if p.rank.ground().labels() != ground.labels() {
                return Err(Error::InvalidParameter(format!(
                    "player {i}'s rank function lives on a different ground set"
                )));
            }
            if p.costs.len() != m {
                return Err(Error::InvalidParameter(format!(
                    "player {i} has {} cost functions for {m} resources",
                    p.costs.len()
                )));
            }
            if p.demand > p.rank.total() {
                return Err(Error::Infeasible(format!(
                    "player {i} demands {} but f_i(E) = {}",
                    p.demand,
                    p.rank.total()
                )));
            }
        }
        let game = Game { ground, players };
        if let Some((i, e)) = game.regularity_violation()? {
            return Err(Error::InvalidParameter(format!(
                "cost of player {i} on resource {} is not regular",
                game.ground.label(e)
            )));
        }
        Ok(game)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn players(&self) -> &[Player] {
        &self.players
    }

    pub fn player(&self, i: usize) -> &Player {
        &self.players[i]
    }

    pub fn n(&self) -> usize {
        self.players.len()
    }

    pub fn m(&self) -> usize {
        self.ground.len()
    }

    /// `δ = max_i d_i`.
    pub fn max_demand(&self) -> u64 {
        self.players.iter().map(|p| p.demand).max().unwrap_or(0)
    }

    pub fn total_demand(&self) -> u64 {
        self.players.iter().map(|p| p.demand).sum()
    }

    /// `n² m δ³`.
    pub fn step_bound(&self) -> u64 {
        let n = self.n() as u64;
        n * n * self.m() as u64 * self.max_demand().pow(3)
    }

    /// `Σ_i m d_i²`, the bound on exchanges after a single demand raise.
    pub fn round_bound(&self) -> u64 {
        self.players
            .iter()
            .map(|p| self.m() as u64 * p.demand * p.demand)
            .sum()
    }

    /// The same game with player `i`'s demand replaced.
    pub fn with_demand(&self, i: usize, demand: u64) -> Result<Game> {
        let mut players = self.players.clone();
        players
            .get_mut(i)
            .ok_or_else(|| Error::Domain(format!("no player {i}")))?
            .demand = demand;
        Game::new(self.ground.clone(), players)
    }

    /// First `(player, resource)` whose cost is not regular on its box.
    pub fn regularity_violation(&self) -> Result<Option<(usize, usize)>> {
        let total = self.total_demand();
        for (i, p) in self.players.iter().enumerate() {
            for (e, c) in p.costs.iter().enumerate() {
                if !c.is_regular(p.demand, total - p.demand)?.holds {
                    return Ok(Some((i, e)));
                }
            }
        }
        Ok(None)
    }

    /// First player whose rank function is not submodular.
    pub fn first_non_submodular(&self) -> Result<Option<usize>> {
        for (i, p) in self.players.iter().enumerate() {
            if !is_submodular(&p.rank)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }
}

fn is_submodular(f: &RankFunction) -> Result<bool> {
    match f.known_submodular() {
        Some(v) => Ok(v),
        None => Ok(f.is_submodular()?.holds),
    }
}

/// One allocation per player.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrategyProfile {
    strategies: Vec<Allocation>,
}

impl StrategyProfile {
    pub fn new(strategies: Vec<Allocation>) -> Self {
        StrategyProfile { strategies }
    }

    pub fn zero(n: usize, m: usize) -> Self {
        StrategyProfile {
            strategies: vec![Allocation::zero(m); n],
        }
    }

    pub fn n(&self) -> usize {
        self.strategies.len()
    }

    pub fn strategy(&self, i: usize) -> &Allocation {
        &self.strategies[i]
    }

    pub fn strategies(&self) -> &[Allocation] {
        &self.strategies
    }

    /// `x_e = Σ_i x_{i,e}`.
    pub fn load(&self, e: usize) -> u64 {
        self.strategies.iter().map(|x| x.get(e)).sum()
    }

    pub fn loads(&self) -> Vec<u64> {
        let m = self.strategies.first().map_or(0, Allocation::len);
        (0..m).map(|e| self.load(e)).collect()
    }

    /// `x_{-i}` as a load vector.
    pub fn others(&self, i: usize) -> Vec<u64> {
        let own = &self.strategies[i];
        self.loads()
            .iter()
            .enumerate()
            .map(|(e, &l)| l - own.get(e))
            .collect()
    }

    pub fn with_strategy(&self, i: usize, x: Allocation) -> StrategyProfile {
        let mut strategies = self.strategies.clone();
        strategies[i] = x;
        StrategyProfile { strategies }
    }

    fn check_shape(&self, g: &Game) -> Result<()> {
        if self.n() != g.n() || self.strategies.iter().any(|x| x.len() != g.m()) {
            return Err(Error::Domain(
                "profile shape does not match the game".into(),
            ));
        }
        Ok(())
    }

    fn check_feasible(&self, g: &Game) -> Result<()> {
        self.check_shape(g)?;
        for (i, x) in self.strategies.iter().enumerate() {
            let b = BasePolytope::new(g.players[i].rank.clone(), g.players[i].demand);
            if !b.member(x)? {
                return Err(Error::Precondition(format!(
                    "strategy {x} of player {i} is infeasible"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Debug for StrategyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for StrategyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.strategies.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("]")
    }
}

/// Player `i`'s problem against fixed opponents: `f_i`, demand `demand`,
/// `t = x_{-i}`, costs `C_{i,·}`.
pub fn induced_instance(
    g: &Game,
    x: &StrategyProfile,
    i: usize,
    demand: u64,
) -> Result<ProblemInstance> {
    x.check_shape(g)?;
    let p = &g.players[i];
    ProblemInstance::new(p.rank.clone(), demand, x.others(i), p.costs.clone())
}

/// `π_i(x) = Σ_e C_{i,e}(x_{i,e}; x_{-i,e})`.
pub fn private_cost(g: &Game, x: &StrategyProfile, i: usize) -> Result<ExactValue> {
    x.check_shape(g)?;
    let others = x.others(i);
    let own = x.strategy(i);
    let mut total = ExactValue::zero();
    for (e, c) in g.players[i].costs.iter().enumerate() {
        total = total + c.eval(own.get(e), others[e])?;
    }
    Ok(total)
}

/// Cheapest strategy of player `i` at demand `demand` against opponent
/// loads `others`, by the greedy solver.
pub fn best_response(g: &Game, others: &[u64], i: usize, demand: u64) -> Result<Allocation> {
    let p = g
        .players
        .get(i)
        .ok_or_else(|| Error::Domain(format!("no player {i}")))?;
    if demand > p.demand {
        return Err(Error::InvalidParameter(format!(
            "preliminary demand {demand} exceeds player {i}'s demand {}",
            p.demand
        )));
    }
    if others.len() != g.m() {
        return Err(Error::Domain(
            "opponent load vector has the wrong length".into(),
        ));
    }
    let inst = ProblemInstance::new(p.rank.clone(), demand, others.to_vec(), p.costs.clone())?;
    optimize::solve(&inst)
}

/// How [`is_pne_with`] looks for improving deviations.
#[derive(Copy, Clone, Debug)]
pub enum PneCheckMode {
    /// Compare against every point of every player's strategy set.
    Exhaustive(EnumerationBudget),
    /// Optimality test on each induced instance. Valid only for
    /// submodular rank functions.
    Local,
    /// Exhaustive when every strategy set fits the default budget, else local.
    Auto,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PneVerdict {
    pub equilibrium: bool,
    /// Lowest-index player that can improve, with a cheaper strategy.
    pub deviation: Option<(usize, Allocation)>,
}

pub fn is_pne(g: &Game, x: &StrategyProfile) -> Result<PneVerdict> {
    is_pne_with(g, x, PneCheckMode::Auto)
}

pub fn is_pne_with(g: &Game, x: &StrategyProfile, mode: PneCheckMode) -> Result<PneVerdict> {
    x.check_feasible(g)?;
    let mode = match mode {
        PneCheckMode::Auto => {
            let budget = EnumerationBudget::default();
            if g.m() <= budget.max_ground && g.max_demand() <= budget.max_demand {
                PneCheckMode::Exhaustive(budget)
            } else {
                PneCheckMode::Local
            }
        }
        other => other,
    };
    match mode {
        PneCheckMode::Exhaustive(budget) => {
            for i in 0..g.n() {
                let current = private_cost(g, x, i)?;
                let b = BasePolytope::new(g.players[i].rank.clone(), g.players[i].demand);
                let mut best: Option<(Allocation, ExactValue)> = None;
                for y in oracle::enumerate_base(&b, &budget)? {
                    let v = private_cost(g, &x.with_strategy(i, y.clone()), i)?;
                    if best.as_ref().is_none_or(|(_, b)| v < *b) {
                        best = Some((y, v));
                    }
                }
                if let Some((y, v)) = best {
                    if v < current {
                        return Ok(PneVerdict {
                            equilibrium: false,
                            deviation: Some((i, y)),
                        });
                    }
                }
            }
        }
        PneCheckMode::Local => {
            if let Some(i) = g.first_non_submodular()? {
                return Err(Error::Rejected(format!(
                    "local equilibrium test needs submodular rank functions; player {i}'s is not"
                )));
            }
            for i in 0..g.n() {
                let inst = induced_instance(g, x, i, g.players[i].demand)?;
                if !optimize::verify_optimal(&inst, x.strategy(i))?.optimal {
                    let y = optimize::solve(&inst)?;
                    return Ok(PneVerdict {
                        equilibrium: false,
                        deviation: Some((i, y)),
                    });
                }
            }
        }
        PneCheckMode::Auto => unreachable!("resolved above"),
    }
    Ok(PneVerdict {
        equilibrium: true,
        deviation: None,
    })
}

/// Marginal cost of one demand unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitMarginal {
    pub player: usize,
    pub resource: usize,
    pub value: ExactValue,
}

/// Per-unit marginal costs relative to a distinguished resource, and the
/// same values sorted in non-increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitMarginalVector {
    pub distinguished: usize,
    pub units: Vec<UnitMarginal>,
    pub sorted: Vec<ExactValue>,
}

/// A unit of player `i` on `e` is worth `C⁻_{i,e}(x_{i,e}; x_{-i,e})` if
/// `e = e_l` and `C⁻_{i,e}(x_{i,e}; x_{-i,e} + 1)` otherwise. Units of one
/// player on one resource share a value.
pub fn delta_potential(g: &Game, x: &StrategyProfile, e_l: usize) -> Result<UnitMarginalVector> {
    x.check_shape(g)?;
    if e_l >= g.m() {
        return Err(Error::Domain(format!(
            "resource {e_l} outside the ground set"
        )));
    }
    let mut units = Vec::new();
    for i in 0..g.n() {
        let others = x.others(i);
        for e in 0..g.m() {
            let k = x.strategy(i).get(e);
            if k == 0 {
                continue;
            }
            let t = if e == e_l { others[e] } else { others[e] + 1 };
            let value = g.players[i].costs[e].marginal_down(k, t)?;
            for _ in 0..k {
                units.push(UnitMarginal {
                    player: i,
                    resource: e,
                    value: value.clone(),
                });
            }
        }
    }
    let mut sorted: Vec<ExactValue> = units.iter().map(|u| u.value.clone()).collect();
    sorted.sort_by(|a, b| b.cmp(a));
    Ok(UnitMarginalVector {
        distinguished: e_l,
        units,
        sorted,
    })
}

/// One improving exchange inside the repair loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deviation {
    pub player: usize,
    pub from: usize,
    pub to: usize,
    pub potential_before: Vec<ExactValue>,
    pub potential_after: Vec<ExactValue>,
}

/// One demand raise followed by its repair exchanges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DemandRound {
    pub player: usize,
    pub resource: usize,
    pub deviations: Vec<Deviation>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PneRunLog {
    pub rounds: Vec<DemandRound>,
}

impl PneRunLog {
    /// Number of demand raises.
    pub fn iterations(&self) -> usize {
        self.rounds.len()
    }

    /// Number of repair exchanges over the whole run.
    pub fn exchange_steps(&self) -> usize {
        self.rounds.iter().map(|r| r.deviations.len()).sum()
    }

    pub fn max_round_steps(&self) -> usize {
        self.rounds
            .iter()
            .map(|r| r.deviations.len())
            .max()
            .unwrap_or(0)
    }
}

/// State of a run: preliminary demands and the current profile.
struct Runner<'a> {
    game: &'a Game,
    demands: Vec<u64>,
    profile: StrategyProfile,
}

impl<'a> Runner<'a> {
    fn new(game: &'a Game) -> Self {
        Runner {
            game,
            demands: vec![0; game.n()],
            profile: StrategyProfile::zero(game.n(), game.m()),
        }
    }

    fn next_player(&self) -> Option<usize> {
        (0..self.game.n()).find(|&i| self.demands[i] < self.game.players[i].demand)
    }

    fn instance(&self, i: usize) -> Result<ProblemInstance> {
        induced_instance(self.game, &self.profile, i, self.demands[i])
    }

    /// Raise player `i`'s demand by one and return the resource that got the unit.
    fn raise(&mut self, i: usize) -> Result<usize> {
        let inst = self.instance(i)?;
        let r = optimize::reoptimize_d(&inst, self.profile.strategy(i), DemandShift::Up)?;
        let Some(Step::Increment(e)) = r.step else {
            return Err(Error::Invariant(format!(
                "demand raise of player {i} did not add a unit"
            )));
        };
        self.demands[i] += 1;
        self.profile = self.profile.with_strategy(i, r.allocation);
        Ok(e)
    }

    fn deviator(&self) -> Result<Option<usize>> {
        for i in 0..self.game.n() {
            if !optimize::verify_optimal(&self.instance(i)?, self.profile.strategy(i))?.optimal {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Move one unit of player `i` off the overloaded resource `e_l`.
    fn deviate(&mut self, i: usize, e_l: usize) -> Result<Deviation> {
        let inst = self.instance(i)?;
        let x_i = self.profile.strategy(i).clone();
        if x_i.get(e_l) == 0 {
            return Err(Error::Invariant(format!(
                "player {i} can improve but holds no unit on the overloaded resource {e_l}"
            )));
        }
        let to = optimize::delta(&inst, &x_i, e_l)?.argmin.ok_or_else(|| {
            Error::Invariant(format!(
                "player {i} can improve but has no exchange out of {e_l}"
            ))
        })?;
        let y = x_i.apply_exchange(e_l, to)?;
        if inst.objective(&y)? >= inst.objective(&x_i)? {
            return Err(Error::Invariant(format!(
                "exchange {e_l} -> {to} of player {i} is not an improvement"
            )));
        }
        if !optimize::verify_optimal(&inst, &y)?.optimal {
            return Err(Error::Invariant(format!(
                "exchange {e_l} -> {to} of player {i} is not a best response"
            )));
        }
        let before = delta_potential(self.game, &self.profile, e_l)?.sorted;
        let next = self.profile.with_strategy(i, y);
        let after = delta_potential(self.game, &next, to)?.sorted;
        if lex_cmp(&after, &before) != Ordering::Less {
            return Err(Error::Invariant(format!(
                "marginal vector did not decrease after player {i} moved {e_l} -> {to}"
            )));
        }
        self.profile = next;
        Ok(Deviation {
            player: i,
            from: e_l,
            to,
            potential_before: before,
            potential_after: after,
        })
    }
}

fn require_polymatroid_game(g: &Game) -> Result<()> {
    if let Some(i) = g.first_non_submodular()? {
        return Err(Error::Rejected(format!(
            "player {i}'s rank function is not submodular; such games may have no pure \
             equilibrium (see the counterexample constructions)"
        )));
    }
    Ok(())
}

/// Raise demands one unit at a time (lowest-index player first), then let
/// players on the overloaded resource move one unit away until nobody can
/// improve.
pub fn compute_pne(g: &Game) -> Result<(StrategyProfile, PneRunLog)> {
    require_polymatroid_game(g)?;
    let mut run = Runner::new(g);
    let mut log = PneRunLog::default();
    let round_bound = g.round_bound();
    let step_bound = g.step_bound();
    let mut steps = 0u64;
    while let Some(i) = run.next_player() {
        let mut e_l = run.raise(i)?;
        let mut round = DemandRound {
            player: i,
            resource: e_l,
            deviations: Vec::new(),
        };
        while let Some(j) = run.deviator()? {
            let dev = run.deviate(j, e_l)?;
            e_l = dev.to;
            round.deviations.push(dev);
            steps += 1;
            if round.deviations.len() as u64 > round_bound || steps > step_bound {
                return Err(Error::Invariant(format!(
                    "exchange count {steps} exceeds its bound (round {round_bound}, total {step_bound})"
                )));
            }
        }
        log.rounds.push(round);
    }
    Ok((run.profile, log))
}

/// Re-execute a run log, checking that every recorded choice is the one the
/// algorithm makes and every certificate holds. Returns the final profile.
pub fn replay(g: &Game, log: &PneRunLog) -> Result<StrategyProfile> {
    require_polymatroid_game(g)?;
    let mut run = Runner::new(g);
    for (k, round) in log.rounds.iter().enumerate() {
        if run.next_player() != Some(round.player) {
            return Err(Error::Invariant(format!(
                "round {k}: wrong player {}",
                round.player
            )));
        }
        let mut e_l = run.raise(round.player)?;
        if e_l != round.resource {
            return Err(Error::Invariant(format!(
                "round {k}: unit went to {e_l}, log says {}",
                round.resource
            )));
        }
        for (s, logged) in round.deviations.iter().enumerate() {
            let j = run.deviator()?.ok_or_else(|| {
                Error::Invariant(format!("round {k} step {s}: no player can improve"))
            })?;
            let dev = run.deviate(j, e_l)?;
            if &dev != logged {
                return Err(Error::Invariant(format!(
                    "round {k} step {s}: exchange differs from the log"
                )));
            }
            e_l = dev.to;
        }
        if let Some(j) = run.deviator()? {
            return Err(Error::Invariant(format!(
                "round {k}: player {j} can still improve"
            )));
        }
    }
    if run.next_player().is_some() {
        return Err(Error::Invariant(
            "log ends before all demand is placed".into(),
        ));
    }
    Ok(run.profile)
}

/// Each player may use one resource of `allowed[i]` and splits `demands[i]`
/// units over them; every unit on `e` pays `c_e(x_e)`.
pub fn from_singleton_integer_splittable(
    ground: GroundSet,
    allowed: Vec<ElementSet>,
    demands: Vec<u64>,
    c: Vec<UnaryCost>,
) -> Result<Game> {
    if allowed.len() != demands.len() {
        return Err(Error::InvalidParameter(
            "one allowed set per player required".into(),
        ));
    }
    if c.len() != ground.len() {
        return Err(Error::InvalidParameter(
            "one congestion function per resource required".into(),
        ));
    }
    let costs = c
        .into_iter()
        .map(CostFunction::scaled_congestion)
        .collect::<Result<Vec<_>>>()?;
    let players = allowed
        .into_iter()
        .zip(demands)
        .map(|(set, d)| {
            Ok(Player {
                demand: d,
                rank: RankFunction::singleton_cover(ground.clone(), set, d)?,
                costs: costs.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Game::new(ground, players)
}

/// Player `i` picks a basis of `matroid_i` restricted to `support_i`; using
/// `e` costs `c_{i,e}(x_e)`.
pub fn from_matroid_congestion(
    ground: GroundSet,
    matroids: Vec<(RankFunction, ElementSet)>,
    c: Vec<Vec<UnaryCost>>,
) -> Result<Game> {
    if matroids.len() != c.len() {
        return Err(Error::InvalidParameter(
            "one cost row per player required".into(),
        ));
    }
    let mut players = Vec::with_capacity(matroids.len());
    for (i, ((rank, support), row)) in matroids.into_iter().zip(c).enumerate() {
        check_matroid(&rank).map_err(|msg| {
            Error::InvalidParameter(format!(
                "player {i}'s rank function is not a matroid rank: {msg}"
            ))
        })?;
        let rank = rank.restrict(support)?;
        let costs = row
            .into_iter()
            .map(CostFunction::matroid_binary)
            .collect::<Result<Vec<_>>>()?;
        players.push(Player {
            demand: rank.total(),
            rank,
            costs,
        });
    }
    Game::new(ground, players)
}

fn check_matroid(f: &RankFunction) -> std::result::Result<(), String> {
    let m = f.ground().len();
    if let Some(e) = (0..m).find(|&e| f.value(ElementSet::singleton(e)) > 1) {
        return Err(format!("singleton {e} has rank above 1"));
    }
    let monotone = f.is_monotone_normalized().map_err(|e| e.to_string())?;
    if !monotone.holds {
        return Err("not normalized and monotone".into());
    }
    if !is_submodular(f).map_err(|e| e.to_string())? {
        return Err("not submodular".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alloc(v: &[u64]) -> Allocation {
        Allocation::new(v.to_vec())
    }

    fn two_by_two() -> Game {
        let ground = GroundSet::indexed(2).unwrap();
        from_singleton_integer_splittable(
            ground,
            vec![ElementSet::full(2), ElementSet::full(2)],
            vec![2, 2],
            vec![UnaryCost::identity(), UnaryCost::identity()],
        )
        .unwrap()
    }

    #[test]
    fn zero_demand_game() {
        let g = two_by_two()
            .with_demand(0, 0)
            .unwrap()
            .with_demand(1, 0)
            .unwrap();
        let (x, log) = compute_pne(&g).unwrap();
        assert_eq!(x, StrategyProfile::zero(2, 2));
        assert_eq!(log.iterations(), 0);
        assert_eq!(private_cost(&g, &x, 0).unwrap(), ExactValue::zero());
    }

    #[test]
    fn singleton_splittable_equilibrium() {
        let g = two_by_two();
        let (x, log) = compute_pne(&g).unwrap();
        assert_eq!(x.loads(), vec![2, 2]);
        assert!(is_pne(&g, &x).unwrap().equilibrium);
        assert_eq!(log.iterations(), 4);
        assert!(log.exchange_steps() as u64 <= g.step_bound());
        assert_eq!(replay(&g, &log).unwrap(), x);
    }

    #[test]
    fn singleton_rank_formula() {
        let ground = GroundSet::new(["a", "b"]).unwrap();
        let g = from_singleton_integer_splittable(
            ground,
            vec![ElementSet::singleton(0)],
            vec![2],
            vec![UnaryCost::identity(), UnaryCost::identity()],
        )
        .unwrap();
        let f = &g.player(0).rank;
        assert_eq!(f.value(ElementSet::singleton(0)), 2);
        assert_eq!(f.value(ElementSet::singleton(1)), 0);
    }

    #[test]
    fn matroid_player_on_k3() {
        let k3 = RankFunction::graphic_indexed(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let ground = k3.ground().clone();
        let row = vec![UnaryCost::identity(); 3];
        let g =
            from_matroid_congestion(ground, vec![(k3, ElementSet::full(3))], vec![row]).unwrap();
        assert_eq!(g.player(0).demand, 2);
        let b = BasePolytope::new(g.player(0).rank.clone(), 2);
        let points = oracle::enumerate_base(&b, &EnumerationBudget::default()).unwrap();
        assert_eq!(
            points,
            vec![alloc(&[0, 1, 1]), alloc(&[1, 0, 1]), alloc(&[1, 1, 0])]
        );
        let (x, _) = compute_pne(&g).unwrap();
        assert!(is_pne(&g, &x).unwrap().equilibrium);
    }

    #[test]
    fn best_response_examples() {
        let g = Game::new(
            GroundSet::indexed(2).unwrap(),
            vec![Player {
                demand: 2,
                rank: RankFunction::from_table(GroundSet::indexed(2).unwrap(), vec![0, 2, 2, 2])
                    .unwrap(),
                costs: vec![CostFunction::polynomial_int(&[0, 0, 1]).unwrap(); 2],
            }],
        )
        .unwrap();
        assert_eq!(best_response(&g, &[0, 0], 0, 2).unwrap(), alloc(&[1, 1]));
        assert_eq!(best_response(&g, &[0, 0], 0, 0).unwrap(), alloc(&[0, 0]));
        assert!(matches!(
            best_response(&g, &[0, 0], 0, 3),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn single_player_pne_is_optimality() {
        let g = two_by_two().with_demand(1, 0).unwrap();
        let x = StrategyProfile::new(vec![alloc(&[2, 0]), alloc(&[0, 0])]);
        let verdict = is_pne(&g, &x).unwrap();
        assert!(!verdict.equilibrium);
        assert_eq!(verdict.deviation, Some((0, alloc(&[1, 1]))));
        let local = is_pne_with(&g, &x, PneCheckMode::Local).unwrap();
        assert!(!local.equilibrium);
    }

    #[test]
    fn potential_single_unit() {
        let g = two_by_two()
            .with_demand(1, 0)
            .unwrap()
            .with_demand(0, 1)
            .unwrap();
        let x = StrategyProfile::new(vec![alloc(&[1, 0]), alloc(&[0, 0])]);
        let v = delta_potential(&g, &x, 0).unwrap();
        // C(x;t) = (x+t)x, so C⁻(1;0) = 1.
        assert_eq!(v.sorted, vec![ExactValue::one()]);
    }

    #[test]
    fn prefix_property() {
        let g = two_by_two();
        let shorter = g.with_demand(1, 1).unwrap();
        let (_, full) = compute_pne(&g).unwrap();
        let (_, prefix) = compute_pne(&shorter).unwrap();
        assert_eq!(&full.rounds[..prefix.rounds.len()], &prefix.rounds[..]);
    }

    #[test]
    fn rejects_non_submodular() {
        let ground = GroundSet::indexed(4).unwrap();
        let f = RankFunction::from_fn(ground.clone(), |u| {
            let s = ElementSet::from_bits(0b0110);
            let t = ElementSet::from_bits(0b1010);
            if u.is_empty() {
                0
            } else if u.is_subset(s) || u.is_subset(t) {
                1
            } else {
                2
            }
        })
        .unwrap();
        let g = Game::new(
            ground,
            vec![Player {
                demand: 1,
                rank: f,
                costs: vec![CostFunction::polynomial_int(&[0, 1]).unwrap(); 4],
            }],
        )
        .unwrap();
        assert!(matches!(compute_pne(&g), Err(Error::Rejected(_))));
    }
}
