//! Minimizing `Σ_e C_e(x_e; t_e)` over `B_f(d)`, checking optimality by local
//! exchanges, and repairing an optimum after the parameters `t` or the rank
//! `d` move by one unit.
//!
//! Ties are always broken towards the lowest element index.
//!
//! Marginals use the extended convention of [`CostFunction::marginal_up`] /
//! [`CostFunction::marginal_down`]: a unit on an element whose cost is
//! already `+inf` is infinitely expensive. An allocation with infinite
//! objective is optimal exactly when no point of the polytope has finite
//! objective; that case is decided separately from the exchange test.

use std::fmt;

use crate::cost::CostFunction;
use crate::error::{Error, Result};
use crate::exact::ExactValue;
use crate::polytope::{Allocation, BasePolytope};
use crate::rank::{ElementSet, RankFunction};

/// One instance of the parametrized problem: `(f, d, t, (C_e)_e)`.
#[derive(Clone, Debug)]
pub struct ProblemInstance {
    polytope: BasePolytope,
    params: Vec<u64>,
    costs: Vec<CostFunction>,
}

impl ProblemInstance {
    pub fn new(
        rank: RankFunction,
        demand: u64,
        params: Vec<u64>,
        costs: Vec<CostFunction>,
    ) -> Result<Self> {
        let m = rank.ground().len();
        if params.len() != m {
            return Err(Error::InvalidParameter(format!(
                "parameter vector has {} entries, ground set has {m}",
                params.len()
            )));
        }
        if costs.len() != m {
            return Err(Error::InvalidParameter(format!(
                "{} cost functions given for {m} elements",
                costs.len()
            )));
        }
        Ok(ProblemInstance {
            polytope: BasePolytope::new(rank, demand),
            params,
            costs,
        })
    }

    pub fn polytope(&self) -> &BasePolytope {
        &self.polytope
    }

    pub fn rank(&self) -> &RankFunction {
        self.polytope.rank()
    }

    pub fn demand(&self) -> u64 {
        self.polytope.demand()
    }

    pub fn params(&self) -> &[u64] {
        &self.params
    }

    pub fn costs(&self) -> &[CostFunction] {
        &self.costs
    }

    pub fn dim(&self) -> usize {
        self.params.len()
    }

    pub fn with_params(&self, params: Vec<u64>) -> Result<ProblemInstance> {
        ProblemInstance::new(
            self.rank().clone(),
            self.demand(),
            params,
            self.costs.clone(),
        )
    }

    pub fn with_demand(&self, demand: u64) -> ProblemInstance {
        ProblemInstance {
            polytope: self.polytope.with_demand(demand),
            ..self.clone()
        }
    }

    fn shifted(&self, e: usize, up: bool) -> Result<ProblemInstance> {
        if e >= self.dim() {
            return Err(Error::Domain(format!("element {e} outside the ground set")));
        }
        let mut params = self.params.clone();
        if up {
            params[e] += 1;
        } else {
            params[e] = params[e]
                .checked_sub(1)
                .ok_or_else(|| Error::Domain(format!("parameter of element {e} is already 0")))?;
        }
        Ok(ProblemInstance {
            params,
            ..self.clone()
        })
    }

    /// `Σ_e C_e(x_e; t_e)`.
    pub fn objective(&self, x: &Allocation) -> Result<ExactValue> {
        if x.len() != self.dim() {
            return Err(Error::Domain("allocation dimension mismatch".into()));
        }
        let mut total = ExactValue::zero();
        for (e, c) in self.costs.iter().enumerate() {
            total = total + c.eval(x.get(e), self.params[e])?;
        }
        Ok(total)
    }

    /// First element whose cost fails the regularity check on
    /// `[1..x_max] × [0..t_max]`.
    pub fn regularity_violation(&self, x_max: u64, t_max: u64) -> Result<Option<usize>> {
        for (e, c) in self.costs.iter().enumerate() {
            if !c.is_regular(x_max, t_max)?.holds {
                return Ok(Some(e));
            }
        }
        Ok(None)
    }

    fn up(&self, x: &Allocation, g: usize) -> Result<ExactValue> {
        self.costs[g].marginal_up(x.get(g), self.params[g])
    }

    fn down(&self, x: &Allocation, e: usize) -> Result<ExactValue> {
        self.costs[e].marginal_down(x.get(e), self.params[e])
    }
}

/// `Δ_e(x; t)` and the element attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaValue {
    pub value: ExactValue,
    /// `None` exactly when `D_e(x)` is empty.
    pub argmin: Option<usize>,
}

/// Result of the local optimality test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimalityCheck {
    pub optimal: bool,
    /// Lowest-index element whose condition fails.
    pub violating: Option<usize>,
}

/// An elementary change to an allocation.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Exchange {
        from: usize,
        to: usize,
    },
    Increment(usize),
    Decrement(usize),
    /// The local rule failed its optimality gate and the instance was
    /// solved from scratch. Never produced by the proven rules.
    Resolve,
}

/// Outcome of a single-unit reoptimization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reoptimized {
    pub allocation: Allocation,
    /// `None` when the old optimum is still optimal.
    pub step: Option<Step>,
    pub fallback: bool,
}

/// Direction of a unit change of the rank `d`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum DemandShift {
    Up,
    Down,
}

/// One recorded step together with the state after it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub step: Step,
    pub allocation: Allocation,
    pub objective: ExactValue,
    pub demand: u64,
    pub params: Vec<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExchangeTrace {
    pub steps: Vec<TraceStep>,
}

impl ExchangeTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn fallbacks(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| s.step == Step::Resolve)
            .count()
    }
}

/// `Δ_e(x; t) = min_{g ∈ D_e(x)} C⁺_g(x_g; t_g)`, `+inf` if `D_e(x) = ∅`.
pub fn delta(p: &ProblemInstance, x: &Allocation, e: usize) -> Result<DeltaValue> {
    let candidates = p.polytope().exchange_set(x, e)?;
    delta_over(p, x, candidates)
}

fn delta_over(p: &ProblemInstance, x: &Allocation, candidates: ElementSet) -> Result<DeltaValue> {
    let mut best = DeltaValue {
        value: ExactValue::Infinite,
        argmin: None,
    };
    for g in candidates.iter() {
        let v = p.up(x, g)?;
        if best.argmin.is_none() || v < best.value {
            best = DeltaValue {
                value: v,
                argmin: Some(g),
            };
        }
    }
    Ok(best)
}

/// Local optimality: `C⁻_e(x_e; t_e) ≤ Δ_e(x; t)` for every `e` with
/// `x_e ≥ 1`. Elements with `x_e = 0` hold vacuously.
pub fn verify_optimal(p: &ProblemInstance, x: &Allocation) -> Result<OptimalityCheck> {
    if !p.polytope().member(x)? {
        return Err(Error::Precondition(format!("allocation {x} is infeasible")));
    }
    if p.objective(x)?.is_infinite() {
        if !has_finite_point(p)? {
            return Ok(OptimalityCheck {
                optimal: true,
                violating: None,
            });
        }
        let e = (0..p.dim())
            .map(|e| p.costs[e].eval(x.get(e), p.params[e]).map(|v| (e, v)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .find(|(_, v)| v.is_infinite())
            .map(|(e, _)| e);
        return Ok(OptimalityCheck {
            optimal: false,
            violating: e,
        });
    }
    for e in (0..p.dim()).filter(|&e| x.get(e) >= 1) {
        let lhs = p.down(x, e)?;
        let rhs = delta(p, x, e)?.value;
        if lhs > rhs {
            return Ok(OptimalityCheck {
                optimal: false,
                violating: Some(e),
            });
        }
    }
    Ok(OptimalityCheck {
        optimal: true,
        violating: None,
    })
}

/// Whether some point of `B_f(d)` has finite objective. Each element can
/// take at most as many units as keep its cost finite; the polytope cut by
/// these bounds is again a polymatroid, so filling it greedily reaches its
/// maximum rank.
pub fn has_finite_point(p: &ProblemInstance) -> Result<bool> {
    let d = p.demand();
    let mut caps = Vec::with_capacity(p.dim());
    for (e, c) in p.costs.iter().enumerate() {
        let limit = c.max_argument().unwrap_or(d).min(d);
        let mut cap = None;
        for x in 0..=limit {
            if c.eval(x, p.params[e])?.is_finite() {
                cap = Some(x);
            } else {
                break;
            }
        }
        match cap {
            Some(cap) => caps.push(cap),
            None => return Ok(false),
        }
    }
    let mut y = Allocation::zero(p.dim());
    for k in 0..d {
        let slack = p.polytope().with_demand(k).slack_set(&y)?;
        match slack.iter().find(|&e| y.get(e) < caps[e]) {
            Some(e) => y = y.apply_increment(e)?,
            None => return Ok(false),
        }
    }
    Ok(true)
}

/// Greedy: starting from `0`, add `d` units one at a time, each to the
/// element of the slack set with the smallest marginal cost.
pub fn solve(p: &ProblemInstance) -> Result<Allocation> {
    let d = p.demand();
    if d > p.rank().total() {
        return Err(Error::Infeasible(format!(
            "rank {d} exceeds f(E) = {}",
            p.rank().total()
        )));
    }
    let mut x = Allocation::zero(p.dim());
    for k in 0..d {
        let slack = p.polytope().with_demand(k).slack_set(&x)?;
        let g = cheapest_increment(p, &x, slack)?.ok_or_else(|| {
            Error::Infeasible(format!("no element can take another unit at rank {k}"))
        })?;
        x = x.apply_increment(g)?;
    }
    Ok(x)
}

fn cheapest_increment(
    p: &ProblemInstance,
    x: &Allocation,
    slack: ElementSet,
) -> Result<Option<usize>> {
    Ok(delta_over(p, x, slack)?.argmin)
}

fn require_optimal(p: &ProblemInstance, x: &Allocation) -> Result<()> {
    if !verify_optimal(p, x)?.optimal {
        return Err(Error::Precondition(format!(
            "allocation {x} is not optimal for the current parameters"
        )));
    }
    Ok(())
}

/// Repair an optimum after `t_{e*}` grows by one: compare `x` with
/// `x - χ_{e*} + χ_{g*}`, `g*` the cheapest feasible exchange partner, and
/// keep the better one (ties keep `x`).
pub fn reoptimize_t_increase(
    p: &ProblemInstance,
    x: &Allocation,
    e_star: usize,
) -> Result<Reoptimized> {
    require_optimal(p, x)?;
    let shifted = p.shifted(e_star, true)?;
    let exchange = delta(p, x, e_star)?;
    let mut out = Reoptimized {
        allocation: x.clone(),
        step: None,
        fallback: false,
    };
    if let Some(g) = exchange.argmin {
        let y = x.apply_exchange(e_star, g)?;
        if shifted.objective(&y)? < shifted.objective(x)? {
            out = Reoptimized {
                allocation: y,
                step: Some(Step::Exchange {
                    from: e_star,
                    to: g,
                }),
                fallback: false,
            };
        }
    }
    if !verify_optimal(&shifted, &out.allocation)?.optimal {
        return Err(Error::Invariant(format!(
            "parameter increase on element {e_star} produced a non-optimal allocation {}",
            out.allocation
        )));
    }
    Ok(out)
}

/// Repair an optimum after `t_{e*}` drops by one: move one unit into `e*`
/// from the feasible donor with the largest removal marginal, if that is
/// strictly cheaper. Falls back to a full solve if the result fails the
/// optimality gate.
pub fn reoptimize_t_decrease(
    p: &ProblemInstance,
    x: &Allocation,
    e_star: usize,
) -> Result<Reoptimized> {
    if e_star >= p.dim() {
        return Err(Error::Domain(format!(
            "element {e_star} outside the ground set"
        )));
    }
    if p.params[e_star] == 0 {
        return Err(Error::Domain(format!(
            "parameter of element {e_star} is already 0"
        )));
    }
    require_optimal(p, x)?;
    let shifted = p.shifted(e_star, false)?;
    let mut donor: Option<(usize, ExactValue)> = None;
    for g in (0..p.dim()).filter(|&g| g != e_star && x.get(g) >= 1) {
        if !p.polytope().member(&x.apply_exchange(g, e_star)?)? {
            continue;
        }
        let v = p.down(x, g)?;
        if donor.as_ref().is_none_or(|(_, best)| v > *best) {
            donor = Some((g, v));
        }
    }
    let mut out = Reoptimized {
        allocation: x.clone(),
        step: None,
        fallback: false,
    };
    if let Some((g, _)) = donor {
        let y = x.apply_exchange(g, e_star)?;
        if shifted.objective(&y)? < shifted.objective(x)? {
            out = Reoptimized {
                allocation: y,
                step: Some(Step::Exchange {
                    from: g,
                    to: e_star,
                }),
                fallback: false,
            };
        }
    }
    gate_or_resolve(&shifted, out)
}

/// Repair an optimum after `d` moves by one. Up: add a unit at the cheapest
/// slack element. Down: remove the unit with the largest marginal among
/// removals that stay feasible, with the same gate-and-fallback as
/// [`reoptimize_t_decrease`].
pub fn reoptimize_d(
    p: &ProblemInstance,
    x: &Allocation,
    shift: DemandShift,
) -> Result<Reoptimized> {
    require_optimal(p, x)?;
    match shift {
        DemandShift::Up => {
            let target = p.with_demand(p.demand() + 1);
            let slack = p.polytope().slack_set(x)?;
            let g = cheapest_increment(p, x, slack)?
                .ok_or_else(|| Error::Infeasible(format!("B_f({}) is empty", p.demand() + 1)))?;
            let y = x.apply_increment(g)?;
            if !verify_optimal(&target, &y)?.optimal {
                return Err(Error::Invariant(format!(
                    "rank increase produced a non-optimal allocation {y}"
                )));
            }
            Ok(Reoptimized {
                allocation: y,
                step: Some(Step::Increment(g)),
                fallback: false,
            })
        }
        DemandShift::Down => {
            if p.demand() == 0 {
                return Err(Error::Infeasible("cannot lower the rank below 0".into()));
            }
            let target = p.with_demand(p.demand() - 1);
            let mut choice: Option<(usize, ExactValue)> = None;
            for e in (0..p.dim()).filter(|&e| x.get(e) >= 1) {
                if !target.polytope().member(&x.apply_decrement(e)?)? {
                    continue;
                }
                let v = p.down(x, e)?;
                if choice.as_ref().is_none_or(|(_, best)| v > *best) {
                    choice = Some((e, v));
                }
            }
            let (e, _) = choice
                .ok_or_else(|| Error::Infeasible(format!("no feasible unit removal from {x}")))?;
            let out = Reoptimized {
                allocation: x.apply_decrement(e)?,
                step: Some(Step::Decrement(e)),
                fallback: false,
            };
            gate_or_resolve(&target, out)
        }
    }
}

fn gate_or_resolve(target: &ProblemInstance, candidate: Reoptimized) -> Result<Reoptimized> {
    if verify_optimal(target, &candidate.allocation)?.optimal {
        return Ok(candidate);
    }
    let allocation = solve(target)?;
    if !verify_optimal(target, &allocation)?.optimal {
        return Err(Error::Invariant(format!(
            "full resolve returned non-optimal {allocation}"
        )));
    }
    Ok(Reoptimized {
        allocation,
        step: Some(Step::Resolve),
        fallback: true,
    })
}

/// Move from an optimum of `(t, d)` to one of `(t', d')` by unit shifts:
/// first all rank changes, then parameter decreases in ascending element
/// order, then parameter increases in ascending element order.
pub fn reoptimize_general(
    p: &ProblemInstance,
    x: &Allocation,
    target_params: &[u64],
    target_demand: u64,
) -> Result<(Allocation, ExchangeTrace)> {
    if target_params.len() != p.dim() {
        return Err(Error::InvalidParameter(
            "target parameter vector has the wrong length".into(),
        ));
    }
    require_optimal(p, x)?;
    let mut current = p.clone();
    let mut x = x.clone();
    let mut trace = ExchangeTrace::default();

    let mut record =
        |current: &ProblemInstance, x: &mut Allocation, r: Reoptimized| -> Result<()> {
            if let Some(step) = r.step {
                trace.steps.push(TraceStep {
                    step,
                    allocation: r.allocation.clone(),
                    objective: current.objective(&r.allocation)?,
                    demand: current.demand(),
                    params: current.params.clone(),
                });
            }
            *x = r.allocation;
            Ok(())
        };

    while current.demand() != target_demand {
        let shift = if current.demand() < target_demand {
            DemandShift::Up
        } else {
            DemandShift::Down
        };
        let next_d = match shift {
            DemandShift::Up => current.demand() + 1,
            DemandShift::Down => current.demand() - 1,
        };
        let r = reoptimize_d(&current, &x, shift).map_err(|err| match err {
            Error::Infeasible(msg) => {
                Error::Infeasible(format!("intermediate rank {next_d}: {msg}"))
            }
            other => other,
        })?;
        current = current.with_demand(next_d);
        record(&current, &mut x, r)?;
    }
    for e in 0..p.dim() {
        while current.params[e] > target_params[e] {
            let r = reoptimize_t_decrease(&current, &x, e)?;
            current = current.shifted(e, false)?;
            record(&current, &mut x, r)?;
        }
    }
    for e in 0..p.dim() {
        while current.params[e] < target_params[e] {
            let r = reoptimize_t_increase(&current, &x, e)?;
            current = current.shifted(e, true)?;
            record(&current, &mut x, r)?;
        }
    }
    Ok((x, trace))
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Exchange { from, to } => write!(f, "exchange {from} -> {to}"),
            Step::Increment(e) => write!(f, "increment {e}"),
            Step::Decrement(e) => write!(f, "decrement {e}"),
            Step::Resolve => f.write_str("resolve"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank::GroundSet;

    fn alloc(v: &[u64]) -> Allocation {
        Allocation::new(v.to_vec())
    }

    fn square() -> CostFunction {
        CostFunction::polynomial_int(&[0, 0, 1]).unwrap()
    }

    /// f(U) = cap for non-empty U on two elements, costs x².
    fn two_element(d: u64, cap: u64) -> ProblemInstance {
        let f = RankFunction::from_table(GroundSet::indexed(2).unwrap(), vec![0, cap, cap, cap])
            .unwrap();
        ProblemInstance::new(f, d, vec![0, 0], vec![square(), square()]).unwrap()
    }

    fn k3_mm1() -> ProblemInstance {
        let f = RankFunction::graphic_indexed(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let c = CostFunction::mm1(3).unwrap();
        ProblemInstance::new(f, 2, vec![0; 3], vec![c.clone(), c.clone(), c]).unwrap()
    }

    #[test]
    fn delta_examples() {
        let p = two_element(2, 2);
        let d = delta(&p, &alloc(&[2, 0]), 0).unwrap();
        assert_eq!(
            d,
            DeltaValue {
                value: ExactValue::one(),
                argmin: Some(1)
            }
        );
        let empty = delta(&p, &alloc(&[2, 0]), 1).unwrap();
        assert_eq!(
            empty,
            DeltaValue {
                value: ExactValue::Infinite,
                argmin: None
            }
        );
    }

    #[test]
    fn verify_examples() {
        let p = two_element(2, 2);
        assert!(verify_optimal(&p, &alloc(&[1, 1])).unwrap().optimal);
        let bad = verify_optimal(&p, &alloc(&[2, 0])).unwrap();
        assert_eq!(
            bad,
            OptimalityCheck {
                optimal: false,
                violating: Some(0)
            }
        );
        assert!(
            verify_optimal(&p.with_demand(0), &alloc(&[0, 0]))
                .unwrap()
                .optimal
        );
        assert!(matches!(
            verify_optimal(&p, &alloc(&[3, 0])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn solve_examples() {
        let p = two_element(2, 2);
        let x = solve(&p).unwrap();
        assert_eq!(x, alloc(&[1, 1]));
        assert_eq!(p.objective(&x).unwrap(), ExactValue::from_integer(2));

        let k3 = k3_mm1();
        let x = solve(&k3).unwrap();
        assert_eq!(x, alloc(&[1, 1, 0]));
        // The unused edge still pays 1/3 at zero load.
        assert_eq!(k3.objective(&x).unwrap(), ExactValue::ratio(4, 3));

        assert_eq!(solve(&p.with_demand(0)).unwrap(), alloc(&[0, 0]));
        assert!(matches!(
            solve(&k3.with_demand(3)),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn infinite_optimum_is_accepted() {
        // Capacity 1 on every edge of K3 with t = 1 everywhere: every base
        // overflows, so every feasible point is optimal.
        let p = k3_mm1().with_params(vec![2, 2, 2]).unwrap();
        assert!(!has_finite_point(&p).unwrap());
        let x = solve(&p).unwrap();
        assert!(p.objective(&x).unwrap().is_infinite());
        assert!(verify_optimal(&p, &x).unwrap().optimal);
        assert!(verify_optimal(&p, &alloc(&[0, 1, 1])).unwrap().optimal);

        // Only edge 2 overflows: the optimum avoids it.
        let q = k3_mm1().with_params(vec![0, 0, 2]).unwrap();
        assert!(has_finite_point(&q).unwrap());
        let bad = verify_optimal(&q, &alloc(&[0, 1, 1])).unwrap();
        assert_eq!(
            bad,
            OptimalityCheck {
                optimal: false,
                violating: Some(2)
            }
        );
    }

    #[test]
    fn t_increase_constant_costs_keep_optimum() {
        let f = RankFunction::from_table(GroundSet::indexed(2).unwrap(), vec![0, 2, 2, 2]).unwrap();
        let flat = CostFunction::polynomial_int(&[0, 1]).unwrap();
        let p = ProblemInstance::new(f, 2, vec![0, 0], vec![flat.clone(), flat]).unwrap();
        let x = solve(&p).unwrap();
        let r = reoptimize_t_increase(&p, &x, 0).unwrap();
        assert_eq!(r.allocation, x);
        assert_eq!(r.step, None);
    }

    #[test]
    fn t_shift_round_trip() {
        let p = two_element(2, 2);
        let x = solve(&p).unwrap();
        let up = reoptimize_t_increase(&p, &x, 0).unwrap();
        assert!(up.allocation.l1_distance(&x) <= 2);
        let shifted = p.with_params(vec![1, 0]).unwrap();
        let down = reoptimize_t_decrease(&shifted, &up.allocation, 0).unwrap();
        assert!(!down.fallback);
        assert_eq!(
            p.objective(&down.allocation).unwrap(),
            p.objective(&x).unwrap()
        );
        assert!(matches!(
            reoptimize_t_decrease(&p, &x, 0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn t_increase_requires_optimal_input() {
        let p = two_element(2, 2);
        assert!(matches!(
            reoptimize_t_increase(&p, &alloc(&[2, 0]), 0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn demand_shift_examples() {
        let p = two_element(2, 3);
        let up = reoptimize_d(&p, &alloc(&[1, 1]), DemandShift::Up).unwrap();
        assert_eq!(up.allocation, alloc(&[2, 1]));
        assert_eq!(up.step, Some(Step::Increment(0)));

        let one = two_element(1, 3);
        let down = reoptimize_d(&one, &alloc(&[1, 0]), DemandShift::Down).unwrap();
        assert_eq!(down.allocation, alloc(&[0, 0]));

        let full = two_element(3, 3);
        let x = solve(&full).unwrap();
        assert!(matches!(
            reoptimize_d(&full, &x, DemandShift::Up),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn demand_chain_reproduces_solve() {
        let p = two_element(0, 5);
        let mut x = solve(&p).unwrap();
        let mut current = p.clone();
        for d in 1..=5 {
            x = reoptimize_d(&current, &x, DemandShift::Up)
                .unwrap()
                .allocation;
            current = current.with_demand(d);
            assert_eq!(x, solve(&current).unwrap());
        }
    }

    #[test]
    fn general_identity_and_trace() {
        let p = two_element(2, 3);
        let x = solve(&p).unwrap();
        let (same, trace) = reoptimize_general(&p, &x, &[0, 0], 2).unwrap();
        assert_eq!(same, x);
        assert!(trace.is_empty());

        let (y, trace) = reoptimize_general(&p, &x, &[0, 2], 3).unwrap();
        let target = p.with_demand(3).with_params(vec![0, 2]).unwrap();
        assert!(verify_optimal(&target, &y).unwrap().optimal);
        assert!(trace.len() <= 3);
        assert!(y.l1_distance(&x) <= 2 * 2 + 1);
        assert_eq!(trace.steps.last().unwrap().allocation, y);
    }

    #[test]
    fn general_names_failing_rank() {
        let p = two_element(2, 3);
        let x = solve(&p).unwrap();
        let err = reoptimize_general(&p, &x, &[0, 0], 5).unwrap_err();
        assert!(
            matches!(&err, Error::Infeasible(msg) if msg.contains("intermediate rank 4")),
            "{err}"
        );
    }
}
