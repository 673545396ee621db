//! Randomized oracle-equivalence sweep. Each criterion draws its own seeded
//! corpus, checks the fast paths against the brute-force oracle or against
//! the stated bounds, and reports how many checks ran and which failed.

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::Rng;

use crate::cost::{CostFunction, RegularityCondition, UnaryCost};
use crate::counterexample::{build_no_pne_game, build_sensitivity_counterexample};
use crate::error::Result;
use crate::exact::{lex_cmp, ExactValue};
use crate::fixtures;
use crate::game::{compute_pne, is_pne_with, replay, PneCheckMode};
use crate::optimize::{
    reoptimize_d, reoptimize_general, reoptimize_t_decrease, reoptimize_t_increase, solve,
    verify_optimal, DemandShift, ProblemInstance,
};
use crate::oracle::{self, EnumerationBudget};
use crate::polytope::Allocation;
use crate::random::{self, InstanceRng};
use crate::rank::RankFunction;

/// Corpus sizes and seed for a sweep.
#[derive(Clone, Debug)]
pub struct SelftestConfig {
    pub seed: u64,
    pub budget: EnumerationBudget,
    pub instances: usize,
    pub characterization: usize,
    pub shift_scenarios: usize,
    pub games: usize,
    pub counterexamples: usize,
    pub dichotomy: usize,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: 0,
            budget: EnumerationBudget::default(),
            instances: 500,
            characterization: 100,
            shift_scenarios: 300,
            games: 200,
            counterexamples: 20,
            dichotomy: 60,
        }
    }
}

impl SelftestConfig {
    pub fn with_seed(seed: u64) -> Self {
        SelftestConfig {
            seed,
            ..Default::default()
        }
    }

    fn rng(&self, criterion: u64) -> InstanceRng {
        random::rng(
            self.seed
                .wrapping_mul(0x9e37_79b9_7f4a_7c15)
                .wrapping_add(criterion),
        )
    }
}

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    /// Number of individual checks performed.
    pub checked: usize,
    pub detail: String,
    /// First few failures.
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

const KEPT_FAILURES: usize = 10;

#[derive(Default)]
struct Tally {
    checked: usize,
    failed: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn fail(&mut self, msg: String) {
        self.failed += 1;
        if self.failures.len() < KEPT_FAILURES {
            self.failures.push(msg);
        }
    }

    /// Record an error as a failure and drop the value.
    fn ok<T>(&mut self, r: Result<T>, context: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(err) => {
                self.checked += 1;
                self.fail(format!("{}: {err}", context()));
                None
            }
        }
    }

    fn finish(self, id: u8, name: &'static str, detail: String, start: Instant) -> CriterionResult {
        CriterionResult {
            id,
            name,
            passed: self.failed == 0 && self.checked > 0,
            checked: self.checked,
            detail: if self.failed > 0 {
                format!("{detail}; {} failed", self.failed)
            } else {
                detail
            },
            failures: self.failures,
            elapsed: start.elapsed(),
        }
    }
}

pub fn run_all(config: &SelftestConfig) -> Vec<CriterionResult> {
    vec![
        oracle_optimality(config),
        characterization(config),
        sensitivity_bounds(config),
        equilibrium_runs(config),
        counterexample_reproduction(config),
        dichotomy(config),
        regularity_suite(),
    ]
}

/// `solve` reaches the brute-force minimum exactly and passes the optimality test.
pub fn oracle_optimality(config: &SelftestConfig) -> CriterionResult {
    let start = Instant::now();
    let mut rng = config.rng(1);
    let mut tally = Tally::default();
    let mut infinite = 0;
    for k in 0..config.instances {
        let Some(p) = tally.ok(random::instance(&mut rng, 5, 5, 3), || {
            format!("instance {k}")
        }) else {
            continue;
        };
        let Some(x) = tally.ok(solve(&p), || format!("instance {k}: solve")) else {
            continue;
        };
        let Some((_, best)) = tally.ok(oracle::brute_optimum(&p, &config.budget), || {
            format!("instance {k}: oracle")
        }) else {
            continue;
        };
        let Some(value) = tally.ok(oracle::objective(&p, &x), || {
            format!("instance {k}: objective")
        }) else {
            continue;
        };
        if best.is_infinite() {
            infinite += 1;
        }
        tally.check(value == best, || {
            format!("instance {k}: solve {value}, oracle {best}")
        });
        let verdict = tally.ok(verify_optimal(&p, &x), || format!("instance {k}: verify"));
        tally.check(verdict.is_some_and(|v| v.optimal), || {
            format!("instance {k}: solve output fails the optimality test")
        });
    }
    let detail = format!(
        "{} instances, {infinite} with infinite minimum",
        config.instances
    );
    tally.finish(1, "solve matches brute-force optimum", detail, start)
}

/// At every enumerated point, the optimality test agrees with the oracle.
pub fn characterization(config: &SelftestConfig) -> CriterionResult {
    let start = Instant::now();
    let mut rng = config.rng(2);
    let mut tally = Tally::default();
    let mut done = 0;
    let mut points = 0;
    let mut optimal_points = 0;
    while done < config.characterization {
        let Some(p) = tally.ok(random::instance(&mut rng, 5, 5, 3), || {
            format!("instance {done}")
        }) else {
            continue;
        };
        let Some(all) = tally.ok(oracle::enumerate_base(p.polytope(), &config.budget), || {
            format!("instance {done}")
        }) else {
            continue;
        };
        if all.len() < 2 || all.len() > 200 {
            continue;
        }
        let values: Vec<ExactValue> = match all.iter().map(|x| oracle::objective(&p, x)).collect() {
            Ok(v) => v,
            Err(err) => {
                tally.fail(format!("instance {done}: {err}"));
                continue;
            }
        };
        let min = values.iter().min().cloned().unwrap_or(ExactValue::Infinite);
        for (x, v) in all.iter().zip(&values) {
            let Some(check) = tally.ok(verify_optimal(&p, x), || format!("instance {done} at {x}"))
            else {
                continue;
            };
            let is_min = *v == min;
            optimal_points += usize::from(is_min);
            tally.check(check.optimal == is_min, || {
                format!(
                    "instance {done} at {x}: test says {}, objective {v} vs minimum {min}",
                    check.optimal
                )
            });
        }
        points += all.len();
        done += 1;
    }
    let detail = format!("{done} instances, {points} points, {optimal_points} optimal");
    tally.finish(
        2,
        "optimality test characterizes the minimizers",
        detail,
        start,
    )
}

struct ShiftStats {
    unit_t: usize,
    unit_d: usize,
    general: usize,
    fallbacks: usize,
}

fn check_reoptimized(
    tally: &mut Tally,
    q: &ProblemInstance,
    x: &Allocation,
    y: &Allocation,
    bound: u64,
    budget: &EnumerationBudget,
    what: &str,
) {
    if let Some(check) = tally.ok(verify_optimal(q, y), || format!("{what}: verify")) {
        tally.check(check.optimal, || {
            format!("{what}: {y} fails the optimality test")
        });
    }
    if let (Some((_, best)), Some(v)) = (
        tally.ok(oracle::brute_optimum(q, budget), || {
            format!("{what}: oracle")
        }),
        tally.ok(oracle::objective(q, y), || format!("{what}: objective")),
    ) {
        tally.check(v == best, || {
            format!("{what}: objective {v}, oracle {best}")
        });
    }
    let dist = x.l1_distance(y);
    tally.check(dist <= bound, || {
        format!("{what}: moved {x} -> {y}, distance {dist} > {bound}")
    });
}

fn shift_scenario(
    tally: &mut Tally,
    stats: &mut ShiftStats,
    rng: &mut InstanceRng,
    k: usize,
    budget: &EnumerationBudget,
) -> Result<()> {
    let p = random::instance(rng, 5, 4, 3)?;
    let x = solve(&p)?;
    let m = p.dim();
    let t = p.params().to_vec();
    for e in 0..m {
        let mut up = t.clone();
        up[e] += 1;
        let r = reoptimize_t_increase(&p, &x, e)?;
        stats.fallbacks += usize::from(r.fallback);
        check_reoptimized(
            tally,
            &p.with_params(up)?,
            &x,
            &r.allocation,
            2,
            budget,
            &format!("scenario {k}: t_{e}+1"),
        );
        stats.unit_t += 1;
        if t[e] > 0 {
            let mut down = t.clone();
            down[e] -= 1;
            let r = reoptimize_t_decrease(&p, &x, e)?;
            stats.fallbacks += usize::from(r.fallback);
            let what = format!("scenario {k}: t_{e}-1");
            check_reoptimized(
                tally,
                &p.with_params(down)?,
                &x,
                &r.allocation,
                2,
                budget,
                &what,
            );
            stats.unit_t += 1;
        }
    }
    let d = p.demand();
    let top = p.rank().total();
    for (shift, next) in [
        (DemandShift::Up, d + 1),
        (DemandShift::Down, d.wrapping_sub(1)),
    ] {
        if next > top || (shift == DemandShift::Down && d == 0) {
            continue;
        }
        let r = reoptimize_d(&p, &x, shift)?;
        stats.fallbacks += usize::from(r.fallback);
        check_reoptimized(
            tally,
            &p.with_demand(next),
            &x,
            &r.allocation,
            1,
            budget,
            &format!("scenario {k}: d={next}"),
        );
        stats.unit_d += 1;
    }

    let target: Vec<u64> = (0..m).map(|_| rng.gen_range(0..=3)).collect();
    let target_d = rng.gen_range(0..=top.min(5));
    let (y, trace) = reoptimize_general(&p, &x, &target, target_d)?;
    let norm: u64 = t.iter().zip(&target).map(|(a, b)| a.abs_diff(*b)).sum();
    let dd = d.abs_diff(target_d);
    let q = p.with_params(target.clone())?.with_demand(target_d);
    check_reoptimized(
        tally,
        &q,
        &x,
        &y,
        2 * norm + dd,
        budget,
        &format!("scenario {k}: general"),
    );
    tally.check(trace.len() as u64 <= norm + dd, || {
        format!(
            "scenario {k}: trace length {} exceeds {}",
            trace.len(),
            norm + dd
        )
    });
    for (s, step) in trace.steps.iter().enumerate() {
        let stage = p.with_params(step.params.clone())?.with_demand(step.demand);
        let check = verify_optimal(&stage, &step.allocation)?;
        tally.check(check.optimal, || {
            format!("scenario {k}: trace step {s} ({}) not optimal", step.step)
        });
    }
    stats.fallbacks += trace.fallbacks();
    stats.general += 1;
    Ok(())
}

/// Unit and general reoptimization stay optimal and within the distance bounds.
pub fn sensitivity_bounds(config: &SelftestConfig) -> CriterionResult {
    let start = Instant::now();
    let mut rng = config.rng(3);
    let mut tally = Tally::default();
    let mut stats = ShiftStats {
        unit_t: 0,
        unit_d: 0,
        general: 0,
        fallbacks: 0,
    };
    for k in 0..config.shift_scenarios {
        let r = shift_scenario(&mut tally, &mut stats, &mut rng, k, &config.budget);
        tally.ok(r, || format!("scenario {k}"));
    }
    let detail = format!(
        "{} scenarios: {} unit parameter shifts, {} unit rank shifts, {} general shifts, {} fallbacks",
        config.shift_scenarios, stats.unit_t, stats.unit_d, stats.general, stats.fallbacks
    );
    tally.finish(3, "sensitivity distance and trace bounds", detail, start)
}

/// `compute_pne` ends in an equilibrium with a decreasing potential and
/// within both step bounds.
pub fn equilibrium_runs(config: &SelftestConfig) -> CriterionResult {
    let start = Instant::now();
    let mut rng = config.rng(4);
    let mut tally = Tally::default();
    let mut total_steps = 0;
    let mut worst_ratio = (0u64, 1u64);
    for k in 0..config.games {
        let Some(g) = tally.ok(random::polymatroid_game(&mut rng, 3, 5, 3), || {
            format!("game {k}")
        }) else {
            continue;
        };
        let Some((x, log)) = tally.ok(compute_pne(&g), || format!("game {k}: compute_pne")) else {
            continue;
        };
        if let Some(v) = tally.ok(
            is_pne_with(&g, &x, PneCheckMode::Exhaustive(config.budget)),
            || format!("game {k}: exhaustive check"),
        ) {
            tally.check(v.equilibrium, || {
                format!("game {k}: {x} is not an equilibrium")
            });
        }
        if let Some(y) = tally.ok(replay(&g, &log), || format!("game {k}: replay")) {
            tally.check(y == x, || {
                format!("game {k}: replay ended at {y}, run at {x}")
            });
        }
        for (r, round) in log.rounds.iter().enumerate() {
            for (s, dev) in round.deviations.iter().enumerate() {
                tally.check(
                    lex_cmp(&dev.potential_after, &dev.potential_before) == Ordering::Less,
                    || format!("game {k}: round {r} step {s}: marginal vector did not decrease"),
                );
            }
        }
        let steps = log.exchange_steps() as u64;
        let fine = g.round_bound();
        tally.check(steps <= g.step_bound(), || {
            format!("game {k}: {steps} steps > {}", g.step_bound())
        });
        tally.check(steps <= fine, || {
            format!("game {k}: {steps} steps > {fine}")
        });
        tally.check(log.max_round_steps() as u64 <= fine, || {
            format!("game {k}: a round exceeds {fine} steps")
        });
        if fine > 0 && steps * worst_ratio.1 > worst_ratio.0 * fine {
            worst_ratio = (steps, fine);
        }
        total_steps += steps;
    }
    let detail = format!(
        "{} games, {total_steps} exchange steps, largest steps/bound {}/{}",
        config.games, worst_ratio.0, worst_ratio.1
    );
    tally.finish(4, "equilibrium computation and potential", detail, start)
}

/// Number of minimizers and the minimum itself.
fn minimizers(
    p: &ProblemInstance,
    budget: &EnumerationBudget,
) -> Result<(Vec<Allocation>, ExactValue)> {
    let all = oracle::enumerate_base(p.polytope(), budget)?;
    let values = all
        .iter()
        .map(|x| oracle::objective(p, x))
        .collect::<Result<Vec<_>>>()?;
    let min = values.iter().min().cloned().unwrap_or(ExactValue::Infinite);
    let argmins = all
        .into_iter()
        .zip(values)
        .filter(|(_, v)| *v == min)
        .map(|(x, _)| x)
        .collect();
    Ok((argmins, min))
}

fn check_counterexample(tally: &mut Tally, f: &RankFunction, k: usize) -> Result<()> {
    let wide = EnumerationBudget {
        max_ground: 20,
        max_demand: 2,
        max_points: 10_000_000,
    };
    let sc = build_sensitivity_counterexample(f)?;
    tally.check(sc.distance_t == 4, || {
        format!("function {k}: parameter distance {}", sc.distance_t)
    });
    tally.check(sc.distance_d == 3, || {
        format!("function {k}: rank distance {}", sc.distance_d)
    });
    let at_t_prime = sc.instance.with_params(sc.t_prime.clone())?;
    for (label, p, claimed) in [
        ("t", sc.instance.clone(), &sc.optimum_t),
        ("t'", at_t_prime.clone(), &sc.optimum_t_prime),
        (
            "t', rank 1",
            at_t_prime.with_demand(1),
            &sc.optimum_rank_one,
        ),
    ] {
        let (argmins, _) = minimizers(&p, &wide)?;
        tally.check(argmins.len() == 1 && &argmins[0] == claimed, || {
            format!("function {k}: optimum at {label} is {argmins:?}, claimed {claimed}")
        });
    }
    let ng = build_no_pne_game(f)?;
    let found = oracle::brute_pne(&ng.game, &wide)?;
    tally.check(found.is_none(), || {
        format!("function {k}: game has equilibrium {}", found.unwrap())
    });
    tally.check(ng.certified_subsets > 0, || {
        format!("function {k}: no restricted pairs certified")
    });
    Ok(())
}

/// Counterexample constructions on non-submodular functions, and the reference bimatrix.
pub fn counterexample_reproduction(config: &SelftestConfig) -> CriterionResult {
    let start = Instant::now();
    let mut rng = config.rng(5);
    let mut tally = Tally::default();
    let mut corpus = vec![fixtures::canonical_violation()];
    while corpus.len() < config.counterexamples.max(1) {
        let m = rng.gen_range(4..=6);
        if let Some(f) = tally.ok(random::non_submodular_rank(&mut rng, m), || "corpus".into()) {
            corpus.push(f);
        }
    }
    for (k, f) in corpus.iter().enumerate() {
        let r = check_counterexample(&mut tally, f, k);
        tally.ok(r, || format!("function {k}"));
    }
    let example = fixtures::no_pne_example();
    if let Some(b) = tally.ok(example.bimatrix(), || "reference bimatrix".into()) {
        tally.check(b.row_supports == fixtures::NO_PNE_ROWS, || {
            format!("reference rows {:?}", b.row_supports)
        });
        tally.check(b.col_supports == fixtures::NO_PNE_COLS, || {
            format!("reference columns {:?}", b.col_supports)
        });
        for (r, row) in fixtures::NO_PNE_CELLS.iter().enumerate() {
            for (c, expected) in row.iter().enumerate() {
                let got = b
                    .cells
                    .get(r)
                    .and_then(|l| l.get(c))
                    .map(String::as_str)
                    .unwrap_or("");
                tally.check(got == *expected, || {
                    format!("reference cell ({r},{c}): {got} vs {expected}")
                });
            }
        }
    }
    let detail = format!(
        "{} non-submodular functions plus the 5x5 reference bimatrix",
        corpus.len()
    );
    tally.finish(5, "counterexample constructions reproduce", detail, start)
}

/// Exactly one of the equilibrium computation and the counterexample
/// constructions succeeds, decided by submodularity.
pub fn dichotomy(config: &SelftestConfig) -> CriterionResult {
    let start = Instant::now();
    let mut rng = config.rng(6);
    let mut tally = Tally::default();
    let mut corpus = vec![fixtures::canonical_violation(), fixtures::k3()];
    while corpus.len() < config.dichotomy.max(2) {
        let f = if rng.gen_bool(0.35) {
            let m = rng.gen_range(4..=5);
            random::non_submodular_rank(&mut rng, m)
        } else {
            let m = rng.gen_range(2..=5);
            random::submodular_rank(&mut rng, m)
        };
        if let Some(f) = tally.ok(f, || "corpus".into()) {
            corpus.push(f);
        }
    }
    let mut submodular = 0;
    for (k, f) in corpus.iter().enumerate() {
        let Some(check) = tally.ok(f.is_submodular(), || format!("function {k}")) else {
            continue;
        };
        submodular += usize::from(check.holds);
        let pne = random::symmetric_game(f)
            .and_then(|g| compute_pne(&g))
            .is_ok();
        let ce = build_sensitivity_counterexample(f).is_ok() && build_no_pne_game(f).is_ok();
        tally.check(pne != ce && pne == check.holds, || {
            format!(
                "function {k}: submodular {}, equilibrium {pne}, counterexamples {ce}",
                check.holds
            )
        });
    }
    let detail = format!("{} functions, {submodular} submodular", corpus.len());
    tally.finish(
        6,
        "submodularity decides equilibrium vs counterexample",
        detail,
        start,
    )
}

/// Standard cost families are regular; the shift-violating table is caught.
pub fn regularity_suite() -> CriterionResult {
    let start = Instant::now();
    let mut tally = Tally::default();
    let mut family: Vec<(String, Result<CostFunction>)> = (1..=6)
        .map(|u| (format!("mm1({u})"), CostFunction::mm1(u)))
        .collect();
    for (name, c) in [
        ("y", UnaryCost::identity()),
        (
            "y^2",
            UnaryCost::Polynomial(
                [0, 0, 1]
                    .map(|k| BigRational::from_integer(k.into()))
                    .to_vec(),
            ),
        ),
        ("(2y-1)+", UnaryCost::positive_part(2, -1)),
        ("3", UnaryCost::constant(3)),
    ] {
        family.push((
            format!("scaled_congestion({name})"),
            CostFunction::scaled_congestion(c.clone()),
        ));
        family.push((
            format!("matroid_binary({name})"),
            CostFunction::matroid_binary(c),
        ));
    }
    family.push((
        "polynomial(y+y^2)".into(),
        CostFunction::polynomial_int(&[0, 1, 1]),
    ));
    for (name, c) in family {
        let Some(c) = tally.ok(c, || name.clone()) else {
            continue;
        };
        if let Some(r) = tally.ok(c.is_regular(6, 6), || name.clone()) {
            tally.check(r.holds, || {
                format!("{name}: fails at {:?} ({:?})", r.witness, r.condition)
            });
        }
    }
    let table = fixtures::shift_violating_table();
    if let Some(r) = tally.ok(table.is_regular(3, 3), || "violating table".into()) {
        let expected = (
            false,
            Some((1, 0)),
            Some(RegularityCondition::ShiftDominated),
        );
        tally.check((r.holds, r.witness, r.condition) == expected, || {
            format!(
                "violating table: {:?} at {:?} ({:?})",
                r.holds, r.witness, r.condition
            )
        });
    }
    let detail = "15 regular costs on x,t <= 6; violating table caught at (1,0)".to_string();
    tally.finish(7, "regularity of the cost families", detail, start)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SelftestConfig {
        SelftestConfig {
            instances: 20,
            characterization: 5,
            shift_scenarios: 10,
            games: 10,
            counterexamples: 2,
            dichotomy: 6,
            ..SelftestConfig::with_seed(3)
        }
    }

    #[test]
    fn small_sweep_passes() {
        for r in run_all(&small()) {
            assert!(r.passed, "{} {}: {:?}", r.id, r.detail, r.failures);
        }
    }

    #[test]
    fn sweep_is_deterministic() {
        let a: Vec<_> = run_all(&small())
            .into_iter()
            .map(|r| (r.checked, r.detail))
            .collect();
        let b: Vec<_> = run_all(&small())
            .into_iter()
            .map(|r| (r.checked, r.detail))
            .collect();
        assert_eq!(a, b);
    }
}
