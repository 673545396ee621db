//! Constructions showing that submodularity cannot be dropped. Starting
//! from any strictly positive, normalized, monotone, non-submodular `f`
//! whose rank-2 polytope is not a polymatroid base polytope, these build
//!
//! * an instance where a unit parameter shift moves the unique optimum by 4,
//!   and a unit rank shift moves it by 3;
//! * a two-player game on copies of `B_f(2)` without a pure equilibrium.
//!
//! Every claim is certified by enumeration before it is returned.

use crate::cost::{CostFunction, UnaryCost};
use crate::error::{Error, Result};
use crate::exact::ExactValue;
use crate::game::{Game, Player, StrategyProfile};
use crate::optimize::ProblemInstance;
use crate::oracle::{self, EnumerationBudget};
use crate::polytope::{Allocation, BasePolytope};
use crate::rank::{ElementSet, GroundSet, RankFunction};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Largest ground set accepted. The game's shared ground set has
/// `2|E| - 4` resources and its rank tables are explicit.
pub const COUNTEREXAMPLE_CAP: usize = 12;

/// `(S, T)` with `f(S) = f(T) = f(S∩T) = 1` and `f(S∪T) = 2` for the
/// tightened function.
#[derive(Clone, Debug)]
pub struct SubmodularityViolation {
    pub s: ElementSet,
    pub t: ElementSet,
    pub tightened: RankFunction,
}

/// Four distinct elements around a violation and the two rank-2 points
/// they support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalQuadruple {
    /// `e1 ∉ S∪T`, `e2 ∈ S∩T`, `e3 ∈ S∖T`, `e4 ∈ T∖S`.
    pub elements: [usize; 4],
    /// Support `{e1, e2}`.
    pub x: Allocation,
    /// Support `{e3, e4}`.
    pub y: Allocation,
    /// Other points supported on the four elements; supports are
    /// `{e1,e3}`, `{e1,e4}` or `{e1}`.
    pub crit: Vec<Allocation>,
    /// Points using some other element.
    pub out: Vec<Allocation>,
}

fn budget(m: usize) -> EnumerationBudget {
    EnumerationBudget {
        max_ground: COUNTEREXAMPLE_CAP.max(m),
        max_demand: 2,
        max_points: 1_000_000,
    }
}

fn points(f: &RankFunction, d: u64) -> Result<Vec<Allocation>> {
    let m = f.ground().len();
    oracle::enumerate_base(&BasePolytope::new(f.clone(), d), &budget(m))
}

fn check_input(f: &RankFunction) -> Result<()> {
    let m = f.ground().len();
    if m > COUNTEREXAMPLE_CAP {
        return Err(Error::Capacity {
            what: "ground set for counterexamples",
            limit: COUNTEREXAMPLE_CAP,
            actual: m,
        });
    }
    if !f.is_monotone_normalized()?.holds {
        return Err(Error::InvalidParameter(
            "f must be normalized and monotone".into(),
        ));
    }
    if !f.is_strictly_positive()? {
        return Err(Error::InvalidParameter(
            "f must be positive on every non-empty set".into(),
        ));
    }
    if f.is_submodular()?.holds {
        return Err(Error::Rejected(
            "f is submodular: no counterexample exists and the equilibrium algorithm applies"
                .into(),
        ));
    }
    Ok(())
}

/// Lower every constraint of `B_f(d)` to the largest value it attains on
/// the polytope, so that every constraint is tight somewhere. Only `d = 2`
/// is meaningful: at rank 1 every strictly positive `f` describes the same
/// polytope as a submodular one.
pub fn tighten(f: &RankFunction, d: u64) -> Result<RankFunction> {
    if d == 1 {
        return Err(Error::Rejected(
            "at rank 1 every strictly positive f gives the simplex, which is a polymatroid".into(),
        ));
    }
    if d != 2 {
        return Err(Error::InvalidParameter(format!(
            "tightening is defined for rank 2, got {d}"
        )));
    }
    check_input(f)?;
    let base = points(f, 2)?;
    if base.is_empty() {
        return Err(Error::Infeasible("B_f(2) is empty".into()));
    }
    let m = f.ground().len();
    let values: Vec<u64> = (0..1u64 << m)
        .map(|bits| {
            let set = ElementSet::from_bits(bits);
            base.iter().map(|x| x.sum_over(set)).max().unwrap_or(0)
        })
        .collect();
    let tight = RankFunction::from_table(f.ground().clone(), values)?;
    if points(&tight, 2)? != base {
        return Err(Error::Invariant(
            "tightening changed the rank-2 polytope".into(),
        ));
    }
    if tight.is_submodular()?.holds {
        return Err(Error::Rejected(
            "B_f(2) is a polymatroid base polytope: its tight description is submodular".into(),
        ));
    }
    Ok(tight)
}

/// Lexicographically smallest `(S, T)` by bitmask with
/// `f(S) = f(T) = f(S∩T) = 1` and `f(S∪T) = 2`.
pub fn find_violation(tight: &RankFunction) -> Result<SubmodularityViolation> {
    let table = tight.table()?;
    let n = table.len() as u64;
    for s in 1..n {
        if table[s as usize] != 1 {
            continue;
        }
        for t in 1..n {
            let (i, u) = (s & t, s | t);
            if table[t as usize] == 1 && i != 0 && table[i as usize] == 1 && table[u as usize] == 2
            {
                return Ok(SubmodularityViolation {
                    s: ElementSet::from_bits(s),
                    t: ElementSet::from_bits(t),
                    tightened: tight.clone(),
                });
            }
        }
    }
    Err(Error::Invariant(
        "tightened function has no (S, T) pair with values 1, 1, 1, 2".into(),
    ))
}

/// Pick `x`, the first point with `x(S∩T) = 1`, and `y`, the first with
/// `y(S∪T) = 2`, and check the structure of the remaining points.
pub fn find_critical_quadruple(
    tight: &RankFunction,
    s: ElementSet,
    t: ElementSet,
) -> Result<CriticalQuadruple> {
    let (both, either) = (s.intersection(t), s.union(t));
    let f = |u: ElementSet| tight.value(u);
    if f(s) != 1 || f(t) != 1 || f(both) != 1 || f(either) != 2 {
        return Err(Error::Precondition(
            "(S, T) does not have values 1, 1, 1, 2".into(),
        ));
    }
    let base = points(tight, 2)?;
    for z in &base {
        if z.support().is_subset(either) && !z.support().intersection(both).is_empty() {
            return Err(Error::Invariant(format!("{z} lies in S∪T but uses S∩T")));
        }
    }
    let x = base
        .iter()
        .find(|z| z.sum_over(both) == 1)
        .ok_or_else(|| Error::Invariant("no point is tight on S∩T".into()))?
        .clone();
    let e2 = x
        .support()
        .intersection(both)
        .iter()
        .next()
        .expect("x(S∩T) = 1");
    let e1 = x
        .support()
        .difference(either)
        .iter()
        .next()
        .ok_or_else(|| Error::Invariant(format!("{x} has no element outside S∪T")))?;
    let y = base
        .iter()
        .find(|z| z.sum_over(either) == 2)
        .ok_or_else(|| Error::Invariant("no point is tight on S∪T".into()))?
        .clone();
    let e3 = y.support().intersection(s.difference(t)).iter().next();
    let e4 = y.support().intersection(t.difference(s)).iter().next();
    let (Some(e3), Some(e4)) = (e3, e4) else {
        return Err(Error::Invariant(format!(
            "{y} does not use both S∖T and T∖S"
        )));
    };
    if x.get(e1) != 1 || x.get(e2) != 1 || y.get(e3) != 1 || y.get(e4) != 1 {
        return Err(Error::Invariant(
            "critical points are not 0/1 on their supports".into(),
        ));
    }
    let quad: ElementSet = [e1, e2, e3, e4].into_iter().collect();
    let allowed = [
        ElementSet::from_iter([e1, e3]),
        ElementSet::from_iter([e1, e4]),
        ElementSet::singleton(e1),
    ];
    let mut crit = Vec::new();
    let mut out = Vec::new();
    for z in base {
        if z == x || z == y {
            continue;
        }
        if z.support().is_subset(quad) {
            if !allowed.contains(&z.support()) {
                return Err(Error::Invariant(format!(
                    "critical point {z} has an unexpected support"
                )));
            }
            crit.push(z);
        } else {
            out.push(z);
        }
    }
    crit.sort_by_key(|z| allowed.iter().position(|&a| a == z.support()));
    Ok(CriticalQuadruple {
        elements: [e1, e2, e3, e4],
        x,
        y,
        crit,
        out,
    })
}

/// A verified sensitivity violation.
#[derive(Clone, Debug)]
pub struct SensitivityCounterexample {
    pub violation: SubmodularityViolation,
    pub quadruple: CriticalQuadruple,
    /// Rank 2 with `t = 0`.
    pub instance: ProblemInstance,
    pub t: Vec<u64>,
    /// `χ_{e2}`.
    pub t_prime: Vec<u64>,
    /// Unique optimum at `(t, 2)`.
    pub optimum_t: Allocation,
    /// Unique optimum at `(t', 2)`.
    pub optimum_t_prime: Allocation,
    /// Unique optimum at `(t', 1)`.
    pub optimum_rank_one: Allocation,
    pub distance_t: u64,
    pub distance_d: u64,
}

fn poly(coefficients: &[(i64, i64)]) -> Result<CostFunction> {
    CostFunction::polynomial(
        coefficients
            .iter()
            .map(|&(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
            .collect(),
    )
}

/// Costs `p_e(x + t)`: `y² + 4y` on `e1`, `y²` on `e2`, `y² + 5y/2` on
/// `e3, e4`, `20y` elsewhere.
pub fn sensitivity_costs(m: usize, quad: &CriticalQuadruple) -> Result<Vec<CostFunction>> {
    let [e1, e2, e3, e4] = quad.elements;
    (0..m)
        .map(|e| {
            if e == e1 {
                poly(&[(0, 1), (4, 1), (1, 1)])
            } else if e == e2 {
                poly(&[(0, 1), (0, 1), (1, 1)])
            } else if e == e3 || e == e4 {
                poly(&[(0, 1), (5, 2), (1, 1)])
            } else {
                poly(&[(0, 1), (20, 1)])
            }
        })
        .collect()
}

fn unique_optimum(p: &ProblemInstance) -> Result<Allocation> {
    let mut best: Option<ExactValue> = None;
    let mut winners = Vec::new();
    for x in points(p.rank(), p.demand())? {
        let v = oracle::objective(p, &x)?;
        match best.as_ref().map(|b| v.cmp(b)) {
            None | Some(std::cmp::Ordering::Less) => {
                best = Some(v);
                winners = vec![x];
            }
            Some(std::cmp::Ordering::Equal) => winners.push(x),
            Some(std::cmp::Ordering::Greater) => {}
        }
    }
    match winners.len() {
        1 => Ok(winners.pop().expect("one winner")),
        0 => Err(Error::Infeasible("empty polytope".into())),
        k => Err(Error::Invariant(format!(
            "optimum is not unique ({k} minimizers)"
        ))),
    }
}

pub fn build_sensitivity_counterexample(f: &RankFunction) -> Result<SensitivityCounterexample> {
    let tight = tighten(f, 2)?;
    let violation = find_violation(&tight)?;
    let quadruple = find_critical_quadruple(&tight, violation.s, violation.t)?;
    let m = f.ground().len();
    let costs = sensitivity_costs(m, &quadruple)?;
    for (e, c) in costs.iter().enumerate() {
        if !c.is_regular(2, 1)?.holds {
            return Err(Error::Invariant(format!(
                "cost on element {e} is not regular"
            )));
        }
    }
    let t = vec![0; m];
    let mut t_prime = t.clone();
    t_prime[quadruple.elements[1]] = 1;
    let instance = ProblemInstance::new(f.clone(), 2, t.clone(), costs)?;
    let shifted = instance.with_params(t_prime.clone())?;
    let optimum_t = unique_optimum(&instance)?;
    let optimum_t_prime = unique_optimum(&shifted)?;
    let optimum_rank_one = unique_optimum(&shifted.with_demand(1))?;
    if optimum_t != quadruple.x || optimum_t_prime != quadruple.y {
        return Err(Error::Invariant(format!(
            "optima {optimum_t} and {optimum_t_prime} are not the critical points"
        )));
    }
    let distance_t = optimum_t.l1_distance(&optimum_t_prime);
    let distance_d = optimum_rank_one.l1_distance(&optimum_t_prime);
    if distance_t != 4 || distance_d != 3 {
        return Err(Error::Invariant(format!(
            "expected distances 4 and 3, found {distance_t} and {distance_d}"
        )));
    }
    Ok(SensitivityCounterexample {
        violation,
        quadruple,
        instance,
        t,
        t_prime,
        optimum_t,
        optimum_t_prime,
        optimum_rank_one,
        distance_t,
        distance_d,
    })
}

/// Shared resources of the two-player game, in this order.
pub const SHARED_RESOURCES: [&str; 4] = ["a", "b", "h", "g"];
const A: usize = 0;
const B: usize = 1;
const H: usize = 2;
const G: usize = 3;

/// A two-player game without pure equilibrium, with its certificate.
#[derive(Clone, Debug)]
pub struct NoPneGame {
    pub game: Game,
    pub violation: SubmodularityViolation,
    pub quadruple: CriticalQuadruple,
    /// `resource_of[i][e]`: where player `i` places element `e` of `f`.
    pub resource_of: [Vec<usize>; 2],
    /// Per-unit congestion functions `c_{i,r}`.
    pub unit_costs: [Vec<UnaryCost>; 2],
    /// Strategy sets of both players, images of `B_f(2)`.
    pub strategies: [Vec<Allocation>; 2],
    /// Number of restricted strategy-set pairs searched (every choice of
    /// present critical strategies for both players).
    pub certified_subsets: usize,
}

impl NoPneGame {
    fn image(&self, i: usize, z: &Allocation) -> Allocation {
        map_point(&self.resource_of[i], z, self.game.m())
    }

    /// Player `i`'s `x`, `y` and critical strategies on the shared resources.
    pub fn critical_strategies(&self, i: usize) -> Vec<Allocation> {
        let q = &self.quadruple;
        let mut out = vec![self.image(i, &q.y), self.image(i, &q.x)];
        out.extend(q.crit.iter().map(|z| self.image(i, z)));
        out
    }

    /// Per-unit costs of player `i` under profile `x`, listed resource by
    /// resource in shared order and joined with `+`.
    pub fn cell_part(&self, x: &StrategyProfile, i: usize) -> Result<String> {
        let own = x.strategy(i);
        let mut parts = Vec::new();
        for r in own.support().iter() {
            let v = self.unit_costs[i][r].eval(x.load(r))?;
            for _ in 0..own.get(r) {
                parts.push(v.to_string());
            }
        }
        Ok(parts.join("+"))
    }

    /// Private-cost bimatrix over the critical strategies. Rows are player 1
    /// (`y`, `x`, then the critical points), columns player 2 likewise.
    /// Cells read `"<player 1 costs>,<player 2 costs>"`.
    pub fn bimatrix(&self) -> Result<Bimatrix> {
        let rows = self.critical_strategies(0);
        let cols = self.critical_strategies(1);
        let mut cells = Vec::with_capacity(rows.len());
        for r in &rows {
            let mut line = Vec::with_capacity(cols.len());
            for c in &cols {
                let x = StrategyProfile::new(vec![r.clone(), c.clone()]);
                line.push(format!(
                    "{},{}",
                    self.cell_part(&x, 0)?,
                    self.cell_part(&x, 1)?
                ));
            }
            cells.push(line);
        }
        let label = |z: &Allocation| -> String {
            format!(
                "{{{}}}",
                self.game.ground().labels_of(z.support()).join(",")
            )
        };
        Ok(Bimatrix {
            row_supports: rows.iter().map(label).collect(),
            col_supports: cols.iter().map(label).collect(),
            cells,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimatrix {
    pub row_supports: Vec<String>,
    pub col_supports: Vec<String>,
    pub cells: Vec<Vec<String>>,
}

fn map_point(map: &[usize], z: &Allocation, size: usize) -> Allocation {
    let mut v = vec![0; size];
    for (e, &r) in map.iter().enumerate() {
        v[r] += z.get(e);
    }
    Allocation::new(v)
}

/// All subsets of `items`, each kept in the original order.
fn subsets<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    (0..1usize << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, v)| v.clone())
                .collect()
        })
        .collect()
}

pub fn build_no_pne_game(f: &RankFunction) -> Result<NoPneGame> {
    let tight = tighten(f, 2)?;
    let violation = find_violation(&tight)?;
    let quadruple = find_critical_quadruple(&tight, violation.s, violation.t)?;
    let [e1, e2, e3, e4] = quadruple.elements;
    let m = f.ground().len();

    let mut labels: Vec<String> = SHARED_RESOURCES.iter().map(|s| s.to_string()).collect();
    let critical = [
        [(e1, G), (e2, H), (e3, A), (e4, B)],
        [(e1, G), (e2, B), (e3, A), (e4, H)],
    ];
    let mut resource_of = [vec![usize::MAX; m], vec![usize::MAX; m]];
    for i in 0..2 {
        for &(e, r) in &critical[i] {
            resource_of[i][e] = r;
        }
        for e in 0..m {
            if resource_of[i][e] == usize::MAX {
                resource_of[i][e] = labels.len();
                labels.push(format!("{}.{}", i + 1, f.ground().label(e)));
            }
        }
    }
    let ground = GroundSet::new(labels)?;
    let size = ground.len();

    let unit_costs: [Vec<UnaryCost>; 2] = [
        (0..size)
            .map(|r| match r {
                A => UnaryCost::positive_part(1, -1),
                B => UnaryCost::constant(1),
                H => UnaryCost::constant(0),
                G => UnaryCost::positive_part(3, -3),
                _ => UnaryCost::constant(20),
            })
            .collect(),
        (0..size)
            .map(|r| match r {
                A => UnaryCost::constant(1),
                B => UnaryCost::constant(0),
                H => UnaryCost::positive_part(2, -2),
                G => UnaryCost::constant(2),
                _ => UnaryCost::constant(20),
            })
            .collect(),
    ];

    let mut players = Vec::with_capacity(2);
    for i in 0..2 {
        let map = &resource_of[i];
        let rank = RankFunction::from_fn(ground.clone(), |u| {
            let pre: ElementSet = (0..m).filter(|&e| u.contains(map[e])).collect();
            tight.value(pre)
        })?;
        let costs = unit_costs[i]
            .iter()
            .cloned()
            .map(CostFunction::scaled_congestion)
            .collect::<Result<Vec<_>>>()?;
        players.push(Player {
            demand: 2,
            rank,
            costs,
        });
    }
    let game = Game::new(ground, players)?;

    let base = points(&tight, 2)?;
    let strategies = [0, 1].map(|i| {
        base.iter()
            .map(|z| map_point(&resource_of[i], z, size))
            .collect::<Vec<_>>()
    });
    if size <= 8 {
        let wide = EnumerationBudget {
            max_ground: 8,
            max_demand: 2,
            max_points: 1_000_000,
        };
        for (i, set) in strategies.iter().enumerate() {
            let direct =
                oracle::enumerate_base(&BasePolytope::new(game.player(i).rank.clone(), 2), &wide)?;
            let mut mapped = set.clone();
            mapped.sort();
            if direct != mapped {
                return Err(Error::Invariant(format!(
                    "player {i}'s strategy set is not a copy of B_f(2)"
                )));
            }
        }
    }

    let mut out = NoPneGame {
        game,
        violation,
        quadruple,
        resource_of,
        unit_costs,
        strategies,
        certified_subsets: 0,
    };
    out.certified_subsets = certify_no_pne(&out)?;
    Ok(out)
}

/// Exhaustive search over the full strategy sets and over every choice of
/// which critical strategies are present. Also checks that strategies
/// using a non-critical resource always cost their owner at least 20.
fn certify_no_pne(ng: &NoPneGame) -> Result<usize> {
    let budget = EnumerationBudget {
        max_points: 10_000_000,
        ..EnumerationBudget::default()
    };
    if let Some(x) = oracle::brute_pne_over(&ng.game, &ng.strategies, &budget)? {
        return Err(Error::Invariant(format!("profile {x} is an equilibrium")));
    }
    let twenty = ExactValue::from_integer(20);
    for i in 0..2 {
        for own in ng.quadruple.out.iter().map(|z| ng.image(i, z)) {
            for other in &ng.strategies[1 - i] {
                let mut pair = vec![other.clone(), other.clone()];
                pair[i] = own.clone();
                let x = StrategyProfile::new(pair);
                if crate::game::private_cost(&ng.game, &x, i)? < twenty {
                    return Err(Error::Invariant(format!(
                        "strategy {own} of player {i} costs below 20"
                    )));
                }
            }
        }
    }
    let per_player = [0, 1].map(|i| {
        let q = &ng.quadruple;
        let fixed: Vec<Allocation> = [&q.x, &q.y]
            .into_iter()
            .chain(q.out.iter())
            .map(|z| ng.image(i, z))
            .collect();
        let crit: Vec<Allocation> = q.crit.iter().map(|z| ng.image(i, z)).collect();
        (fixed, subsets(&crit))
    });
    let mut count = 0;
    for c0 in &per_player[0].1 {
        for c1 in &per_player[1].1 {
            let sets = [
                per_player[0]
                    .0
                    .iter()
                    .chain(c0)
                    .cloned()
                    .collect::<Vec<_>>(),
                per_player[1]
                    .0
                    .iter()
                    .chain(c1)
                    .cloned()
                    .collect::<Vec<_>>(),
            ];
            if let Some(x) = oracle::brute_pne_over(&ng.game, &sets, &budget)? {
                return Err(Error::Invariant(format!(
                    "restricted strategy sets admit the equilibrium {x}"
                )));
            }
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn canonical_is_already_tight() {
        let f = fixtures::canonical_violation();
        let tight = tighten(&f, 2).unwrap();
        assert!(tight.same_values(&f).unwrap());
    }

    #[test]
    fn slack_constraint_is_lowered() {
        let f = fixtures::canonical_violation();
        let mut table = f.table().unwrap();
        table[0b1111] = 3;
        let loose = RankFunction::from_table(f.ground().clone(), table).unwrap();
        let tight = tighten(&loose, 2).unwrap();
        assert_eq!(tight.value(ElementSet::full(4)), 2);
        assert!(tight.same_values(&f).unwrap());
    }

    #[test]
    fn rank_one_and_submodular_are_refused() {
        let f = fixtures::canonical_violation();
        assert!(matches!(tighten(&f, 1), Err(Error::Rejected(_))));
        let uniform = RankFunction::uniform(GroundSet::indexed(4).unwrap(), 2).unwrap();
        assert!(matches!(tighten(&uniform, 2), Err(Error::Rejected(_))));
        assert!(matches!(
            build_no_pne_game(&uniform),
            Err(Error::Rejected(_))
        ));
    }

    #[test]
    fn canonical_quadruple() {
        let f = fixtures::canonical_violation();
        let v = find_violation(&f).unwrap();
        assert_eq!(
            (v.s, v.t),
            (ElementSet::from_iter([1, 2]), ElementSet::from_iter([1, 3]))
        );
        let q = find_critical_quadruple(&f, v.s, v.t).unwrap();
        assert_eq!(q.elements, [0, 1, 2, 3]);
        assert_eq!(q.x, Allocation::new(vec![1, 1, 0, 0]));
        assert_eq!(q.y, Allocation::new(vec![0, 0, 1, 1]));
        let supports: Vec<ElementSet> = q.crit.iter().map(Allocation::support).collect();
        assert_eq!(
            supports,
            vec![
                ElementSet::from_iter([0, 2]),
                ElementSet::from_iter([0, 3]),
                ElementSet::singleton(0)
            ]
        );
        assert!(q.out.is_empty());
    }

    #[test]
    fn sensitivity_distances() {
        let c = build_sensitivity_counterexample(&fixtures::canonical_violation()).unwrap();
        assert_eq!(c.distance_t, 4);
        assert_eq!(c.distance_d, 3);
        assert_eq!(c.optimum_rank_one, Allocation::unit(4, 1));
    }

    #[test]
    fn no_pne_example_cells() {
        let ng = fixtures::no_pne_example();
        let bm = ng.bimatrix().unwrap();
        assert_eq!(bm.row_supports, fixtures::NO_PNE_ROWS);
        assert_eq!(bm.col_supports, fixtures::NO_PNE_COLS);
        for (r, row) in fixtures::NO_PNE_CELLS.iter().enumerate() {
            for (c, cell) in row.iter().enumerate() {
                assert_eq!(bm.cells[r][c], *cell, "row {r} column {c}");
            }
        }
        assert_eq!(ng.certified_subsets, 64);
    }
}
