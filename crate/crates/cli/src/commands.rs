//! Command implementations. Each returns a finished [`Report`].

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use polymatroid::counterexample::{build_no_pne_game, build_sensitivity_counterexample};
use polymatroid::exact::lex_cmp;
use polymatroid::game::{
    compute_pne, is_pne_with, private_cost, replay, Game, PneCheckMode, StrategyProfile,
};
use polymatroid::optimize::{reoptimize_general, solve, verify_optimal, ProblemInstance, Step};
use polymatroid::oracle::{self, EnumerationBudget};
use polymatroid::rank::PropertyCheck;
use polymatroid::selftest::{run_all, SelftestConfig};
use polymatroid::{
    Allocation, CostFunction, ElementSet, Error, ExactValue, GroundSet, RankFunction, Result,
};
use serde_json::{json, Value};

use crate::format::InstanceFile;
use crate::report::{digest, CommandEcho, Report, Status};

#[derive(Clone, Debug)]
pub struct Options {
    pub oracle: bool,
    pub trace: bool,
    pub timing: bool,
    pub budget: EnumerationBudget,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            oracle: false,
            trace: false,
            timing: false,
            budget: EnumerationBudget::default(),
        }
    }
}

/// `LABEL:+N` or `LABEL:-N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shift {
    pub label: String,
    pub delta: i64,
}

impl std::str::FromStr for Shift {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (label, amount) = s
            .rsplit_once(':')
            .ok_or_else(|| format!("expected LABEL:+N or LABEL:-N, got {s:?}"))?;
        if label.is_empty() || !(amount.starts_with('+') || amount.starts_with('-')) {
            return Err(format!("expected LABEL:+N or LABEL:-N, got {s:?}"));
        }
        let delta = amount
            .parse::<i64>()
            .map_err(|e| format!("bad shift amount in {s:?}: {e}"))?;
        Ok(Shift {
            label: label.to_owned(),
            delta,
        })
    }
}

/// `N` (point limit) or a comma list of `ground=N`, `demand=N`, `points=N`.
pub fn parse_budget(s: &str) -> std::result::Result<EnumerationBudget, String> {
    let mut b = EnumerationBudget::default();
    if let Ok(points) = s.parse::<usize>() {
        b.max_points = points;
        return Ok(b);
    }
    for part in s.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("bad budget entry {part:?}"))?;
        let value: u64 = value
            .trim()
            .parse()
            .map_err(|e| format!("bad budget value in {part:?}: {e}"))?;
        match key.trim() {
            "ground" => b.max_ground = value as usize,
            "demand" => b.max_demand = value,
            "points" => b.max_points = value as usize,
            other => return Err(format!("unknown budget key {other:?}")),
        }
    }
    Ok(b)
}

#[derive(Clone, Debug)]
pub enum Command {
    Solve {
        file: PathBuf,
    },
    Reopt {
        file: PathBuf,
        shifts: Vec<Shift>,
        demand: Option<u64>,
    },
    Pne {
        file: PathBuf,
    },
    Check {
        file: PathBuf,
    },
    Counterexample {
        file: PathBuf,
        emit: Option<PathBuf>,
    },
    Selftest {
        seed: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Solve { .. } => "solve",
            Command::Reopt { .. } => "reopt",
            Command::Pne { .. } => "pne",
            Command::Check { .. } => "check",
            Command::Counterexample { .. } => "counterexample",
            Command::Selftest { .. } => "selftest",
        }
    }

    fn file(&self) -> Option<&Path> {
        match self {
            Command::Solve { file }
            | Command::Reopt { file, .. }
            | Command::Pne { file }
            | Command::Check { file }
            | Command::Counterexample { file, .. } => Some(file),
            Command::Selftest { .. } => None,
        }
    }
}

pub fn execute(cmd: &Command, opts: &Options, args: Vec<String>) -> Report {
    let start = Instant::now();
    let mut report = Report::new(CommandEcho {
        name: cmd.name().into(),
        args,
    });
    let outcome =
        load(cmd, &mut report).and_then(|file| dispatch(cmd, opts, file.as_ref(), &mut report));
    if let Err(err) = outcome {
        report.fail(&err);
    }
    if opts.timing {
        report.wall_time_ms = Some(start.elapsed().as_millis());
    }
    report
}

fn load(cmd: &Command, report: &mut Report) -> Result<Option<InstanceFile>> {
    let Some(path) = cmd.file() else {
        return Ok(None);
    };
    let bytes =
        fs::read(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    report.input_sha256 = Some(digest(&bytes));
    let text = String::from_utf8(bytes)
        .map_err(|_| Error::Parse(format!("{} is not UTF-8", path.display())))?;
    InstanceFile::parse(&text).map(Some)
}

fn dispatch(
    cmd: &Command,
    opts: &Options,
    file: Option<&InstanceFile>,
    report: &mut Report,
) -> Result<()> {
    let file = || file.expect("file commands load their input");
    match cmd {
        Command::Solve { .. } => cmd_solve(file(), opts, report),
        Command::Reopt { shifts, demand, .. } => cmd_reopt(file(), shifts, *demand, opts, report),
        Command::Pne { .. } => cmd_pne(file(), opts, report),
        Command::Check { .. } => cmd_check(file(), report),
        Command::Counterexample { emit, .. } => {
            cmd_counterexample(file(), emit.as_deref(), opts, report)
        }
        Command::Selftest { seed } => cmd_selftest(*seed, opts, report),
    }
}

fn set_labels(ground: &GroundSet, set: ElementSet) -> Vec<&str> {
    ground.labels_of(set)
}

fn exact(v: &ExactValue) -> Value {
    Value::String(v.to_string())
}

fn exacts(values: &[ExactValue]) -> Value {
    values.iter().map(exact).collect()
}

fn step_text(ground: &GroundSet, step: Step) -> String {
    match step {
        Step::Exchange { from, to } => {
            format!("exchange {} -> {}", ground.label(from), ground.label(to))
        }
        Step::Increment(e) => format!("increment {}", ground.label(e)),
        Step::Decrement(e) => format!("decrement {}", ground.label(e)),
        Step::Resolve => "resolve".into(),
    }
}

fn optimum(p: &ProblemInstance, opts: &Options) -> Result<(Allocation, ExactValue)> {
    if opts.oracle {
        oracle::brute_optimum(p, &opts.budget)
    } else {
        let x = solve(p)?;
        let v = p.objective(&x)?;
        Ok((x, v))
    }
}

fn assert_optimal(
    report: &mut Report,
    name: &str,
    p: &ProblemInstance,
    x: &Allocation,
) -> Result<()> {
    report.assert(
        format!("{name} lies in the base polytope"),
        p.polytope().member(x)?,
        None,
    );
    let check = verify_optimal(p, x)?;
    let detail = check
        .violating
        .map(|e| format!("fails at {}", p.rank().ground().label(e)));
    report.assert(
        format!("{name} passes the optimality test"),
        check.optimal,
        detail,
    );
    Ok(())
}

pub fn cmd_solve(file: &InstanceFile, opts: &Options, report: &mut Report) -> Result<()> {
    let p = file.instance()?;
    let (x, objective) = optimum(&p, opts)?;
    report.result = json!({
        "route": if opts.oracle { "oracle" } else { "greedy" },
        "ground": p.rank().ground().labels(),
        "demand": p.demand(),
        "params": p.params(),
        "allocation": x.values(),
        "objective": exact(&objective),
    });
    assert_optimal(report, "solution", &p, &x)
}

fn state(p: &ProblemInstance, x: &Allocation) -> Result<Value> {
    Ok(json!({
        "demand": p.demand(),
        "params": p.params(),
        "allocation": x.values(),
        "objective": exact(&p.objective(x)?),
    }))
}

pub fn cmd_reopt(
    file: &InstanceFile,
    shifts: &[Shift],
    demand: Option<u64>,
    opts: &Options,
    report: &mut Report,
) -> Result<()> {
    let p = file.instance()?;
    let ground = p.rank().ground().clone();
    let mut target: Vec<i64> = p.params().iter().map(|&t| t as i64).collect();
    for s in shifts {
        let e = ground
            .index_of(&s.label)
            .ok_or_else(|| Error::Domain(format!("shift names unknown element {:?}", s.label)))?;
        target[e] += s.delta;
    }
    if let Some(e) = target.iter().position(|&t| t < 0) {
        return Err(Error::InvalidParameter(format!(
            "shifted parameter of {} is negative",
            ground.label(e)
        )));
    }
    let target: Vec<u64> = target.into_iter().map(|t| t as u64).collect();
    let target_demand = demand.unwrap_or(p.demand());
    let (x, _) = optimum(&p, opts)?;
    let (y, trace) = reoptimize_general(&p, &x, &target, target_demand)?;
    let q = p.with_params(target.clone())?.with_demand(target_demand);

    let norm: u64 = p
        .params()
        .iter()
        .zip(&target)
        .map(|(a, b)| a.abs_diff(*b))
        .sum();
    let dd = p.demand().abs_diff(target_demand);
    let distance = x.l1_distance(&y);
    report.result = json!({
        "ground": ground.labels(),
        "initial": state(&p, &x)?,
        "final": state(&q, &y)?,
        "distance": distance,
        "distance_bound": 2 * norm + dd,
        "trace_length": trace.len(),
        "trace_bound": norm + dd,
        "fallbacks": trace.fallbacks(),
    });
    if opts.trace {
        let steps: Vec<Value> = trace
            .steps
            .iter()
            .map(|s| {
                json!({
                    "step": step_text(&ground, s.step),
                    "demand": s.demand,
                    "params": s.params,
                    "allocation": s.allocation.values(),
                    "objective": exact(&s.objective),
                })
            })
            .collect();
        report.trace = Some(Value::Array(steps));
    }
    assert_optimal(report, "reoptimized solution", &q, &y)?;
    report.assert(
        "distance within 2|t-t'| + |d-d'|",
        distance <= 2 * norm + dd,
        Some(format!("{distance}")),
    );
    report.assert(
        "trace length within |t-t'| + |d-d'|",
        trace.len() as u64 <= norm + dd,
        None,
    );
    if opts.oracle {
        let (_, best) = oracle::brute_optimum(&q, &opts.budget)?;
        let v = q.objective(&y)?;
        report.assert(
            "objective equals the enumerated minimum",
            v == best,
            Some(format!("{v} vs {best}")),
        );
    }
    Ok(())
}

fn profile_json(x: &StrategyProfile) -> Value {
    x.strategies().iter().map(|s| json!(s.values())).collect()
}

fn private_costs(g: &Game, x: &StrategyProfile) -> Result<Value> {
    (0..g.n())
        .map(|i| private_cost(g, x, i).map(|v| exact(&v)))
        .collect::<Result<Vec<_>>>()
        .map(Value::Array)
}

pub fn cmd_pne(file: &InstanceFile, opts: &Options, report: &mut Report) -> Result<()> {
    let g = file.game()?;
    let ground = g.ground().clone();
    if opts.oracle {
        match oracle::brute_pne(&g, &opts.budget)? {
            None => {
                report.result =
                    json!({ "route": "oracle", "ground": ground.labels(), "equilibrium": null });
                report.set_outcome(Status::Absent);
            }
            Some(x) => {
                report.result = json!({
                    "route": "oracle",
                    "ground": ground.labels(),
                    "equilibrium": profile_json(&x),
                    "private_costs": private_costs(&g, &x)?,
                });
                let v = is_pne_with(&g, &x, PneCheckMode::Exhaustive(opts.budget))?;
                report.assert("profile is a pure equilibrium", v.equilibrium, None);
            }
        }
        return Ok(());
    }
    let (x, log) = compute_pne(&g)?;
    let steps = log.exchange_steps() as u64;
    let rounds: Vec<Value> = log
        .rounds
        .iter()
        .map(|r| json!({ "player": r.player, "resource": ground.label(r.resource), "exchanges": r.deviations.len() }))
        .collect();
    report.result = json!({
        "route": "incremental",
        "ground": ground.labels(),
        "equilibrium": profile_json(&x),
        "private_costs": private_costs(&g, &x)?,
        "iterations": log.iterations(),
        "exchange_steps": steps,
        "step_bound": g.step_bound(),
        "round_bound": g.round_bound(),
        "rounds": rounds,
    });
    if opts.trace {
        let trace: Vec<Value> = log
            .rounds
            .iter()
            .map(|r| {
                let deviations: Vec<Value> = r
                    .deviations
                    .iter()
                    .map(|d| {
                        json!({
                            "player": d.player,
                            "from": ground.label(d.from),
                            "to": ground.label(d.to),
                            "potential_before": exacts(&d.potential_before),
                            "potential_after": exacts(&d.potential_after),
                        })
                    })
                    .collect();
                json!({ "player": r.player, "resource": ground.label(r.resource), "deviations": deviations })
            })
            .collect();
        report.trace = Some(Value::Array(trace));
    }
    let verdict = is_pne_with(&g, &x, PneCheckMode::Auto)?;
    report.assert("profile is a pure equilibrium", verdict.equilibrium, None);
    report.assert(
        "replaying the log reproduces the profile",
        replay(&g, &log)? == x,
        None,
    );
    let decreasing = log
        .rounds
        .iter()
        .flat_map(|r| &r.deviations)
        .all(|d| lex_cmp(&d.potential_after, &d.potential_before).is_lt());
    report.assert(
        "marginal vector strictly decreases at every exchange",
        decreasing,
        None,
    );
    report.assert(
        "exchange steps within n^2 m delta^3",
        steps <= g.step_bound(),
        None,
    );
    report.assert(
        "exchange steps within sum_i m d_i^2",
        steps <= g.round_bound(),
        None,
    );
    Ok(())
}

fn property_json(ground: &GroundSet, c: &PropertyCheck) -> Value {
    match c.witness {
        Some((a, b)) => {
            json!({ "holds": c.holds, "witness": [set_labels(ground, a), set_labels(ground, b)] })
        }
        None => json!({ "holds": c.holds }),
    }
}

fn rank_properties(f: &RankFunction) -> Result<Value> {
    let ground = f.ground();
    Ok(json!({
        "total": f.total(),
        "submodular": property_json(ground, &f.is_submodular()?),
        "monotone_normalized": property_json(ground, &f.is_monotone_normalized()?),
    }))
}

fn cost_properties(
    ground: &GroundSet,
    costs: &[CostFunction],
    x_max: u64,
    t_max: u64,
) -> Result<Value> {
    let mut out = Vec::with_capacity(costs.len());
    for (e, c) in costs.iter().enumerate() {
        let r = c.is_regular(x_max, t_max)?;
        let mut v = json!({ "element": ground.label(e), "family": format!("{:?}", c.tag()), "regular": r.holds });
        if let (Some((x, t)), Some(cond)) = (r.witness, r.condition) {
            v["witness"] = json!({ "x": x, "t": t, "condition": format!("{cond:?}") });
        }
        out.push(v);
    }
    Ok(json!({ "box": { "x_max": x_max, "t_max": t_max }, "costs": out }))
}

pub fn cmd_check(file: &InstanceFile, report: &mut Report) -> Result<()> {
    if file.is_game() {
        let (ground, players) = file.players()?;
        let total: u64 = players.iter().map(|p| p.demand).sum();
        let mut out = Vec::new();
        for p in &players {
            let mut v = rank_properties(&p.rank)?;
            v["demand"] = json!(p.demand);
            v["regularity"] = cost_properties(&ground, &p.costs, p.demand, total - p.demand)?;
            out.push(v);
        }
        report.result = json!({ "kind": "game", "ground": ground.labels(), "players": out });
    } else {
        let p = file.instance()?;
        let ground = p.rank().ground();
        let t_max = p.params().iter().copied().max().unwrap_or(0);
        let mut v = rank_properties(p.rank())?;
        v["demand"] = json!(p.demand());
        v["regularity"] = cost_properties(ground, p.costs(), p.demand(), t_max)?;
        v["kind"] = json!("instance");
        v["ground"] = json!(ground.labels());
        report.result = v;
    }
    Ok(())
}

fn points_json(points: &[Allocation]) -> Value {
    points.iter().map(|z| json!(z.values())).collect()
}

pub fn cmd_counterexample(
    file: &InstanceFile,
    emit: Option<&Path>,
    opts: &Options,
    report: &mut Report,
) -> Result<()> {
    let ground = file.ground_set()?;
    let f = file
        .rank
        .as_ref()
        .ok_or_else(|| Error::Parse("counterexample input needs a `rank`".into()))?
        .build(&ground)?;
    let sc = build_sensitivity_counterexample(&f)?;
    let ng = build_no_pne_game(&f)?;
    let q = &sc.quadruple;
    let bimatrix = ng.bimatrix()?;
    report.result = json!({
        "ground": ground.labels(),
        "violation": {
            "s": set_labels(&ground, sc.violation.s),
            "t": set_labels(&ground, sc.violation.t),
            "tightened_table": sc.violation.tightened.table()?,
        },
        "quadruple": {
            "elements": q.elements.iter().map(|&e| ground.label(e)).collect::<Vec<_>>(),
            "x": q.x.values(),
            "y": q.y.values(),
            "critical": points_json(&q.crit),
            "other_points": q.out.len(),
        },
        "sensitivity": {
            "t": sc.t,
            "t_prime": sc.t_prime,
            "optimum_t": sc.optimum_t.values(),
            "optimum_t_prime": sc.optimum_t_prime.values(),
            "optimum_rank_one": sc.optimum_rank_one.values(),
            "distance_t": sc.distance_t,
            "distance_d": sc.distance_d,
        },
        "game": {
            "ground": ng.game.ground().labels(),
            "strategies": [ng.strategies[0].len(), ng.strategies[1].len()],
            "certified_subset_pairs": ng.certified_subsets,
            "bimatrix": {
                "rows": bimatrix.row_supports,
                "columns": bimatrix.col_supports,
                "cells": bimatrix.cells,
            },
        },
    });
    report.assert(
        "parameter shift moves the optimum by 4",
        sc.distance_t == 4,
        Some(sc.distance_t.to_string()),
    );
    report.assert(
        "rank shift moves the optimum by 3",
        sc.distance_d == 3,
        Some(sc.distance_d.to_string()),
    );
    let wide = EnumerationBudget {
        max_ground: 20,
        max_demand: 2,
        max_points: opts.budget.max_points.max(10_000_000),
    };
    let at_t_prime = sc.instance.with_params(sc.t_prime.clone())?;
    for (name, p, claimed) in [
        ("t", sc.instance.clone(), &sc.optimum_t),
        ("t'", at_t_prime.clone(), &sc.optimum_t_prime),
        (
            "t' at rank 1",
            at_t_prime.with_demand(1),
            &sc.optimum_rank_one,
        ),
    ] {
        let (best, v) = oracle::brute_optimum(&p, &wide)?;
        report.assert(
            format!("enumerated optimum at {name} matches"),
            &best == claimed,
            Some(v.to_string()),
        );
    }
    let found = oracle::brute_pne(&ng.game, &wide)?;
    report.assert(
        "exhaustive search finds no pure equilibrium",
        found.is_none(),
        found.map(|x| x.to_string()),
    );

    if let Some(dir) = emit {
        fs::create_dir_all(dir)
            .map_err(|e| Error::Parse(format!("cannot create {}: {e}", dir.display())))?;
        let mut written = Vec::new();
        for (name, body) in [
            (
                "sensitivity_instance.json",
                InstanceFile::from_instance(&sc.instance)?.to_json(),
            ),
            (
                "no_pne_game.json",
                InstanceFile::from_game(&ng.game)?.to_json(),
            ),
        ] {
            let path = dir.join(name);
            fs::write(&path, body)
                .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))?;
            written.push(path.display().to_string());
        }
        report.result["emitted"] = json!(written);
    }
    Ok(())
}

pub fn cmd_selftest(seed: u64, opts: &Options, report: &mut Report) -> Result<()> {
    let config = SelftestConfig {
        budget: opts.budget,
        ..SelftestConfig::with_seed(seed)
    };
    let results = run_all(&config);
    let criteria: Vec<Value> = results
        .iter()
        .map(|r| {
            let mut v = json!({
                "id": r.id,
                "name": r.name,
                "passed": r.passed,
                "checks": r.checked,
                "detail": r.detail,
                "failures": r.failures,
            });
            if opts.timing {
                v["elapsed_ms"] = json!(r.elapsed.as_millis());
            }
            v
        })
        .collect();
    report.result = json!({ "seed": seed, "criteria": criteria });
    for r in &results {
        report.assert(
            format!("criterion {}: {}", r.id, r.name),
            r.passed,
            Some(r.detail.clone()),
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifts_parse() {
        assert_eq!(
            "a:+2".parse::<Shift>().unwrap(),
            Shift {
                label: "a".into(),
                delta: 2
            }
        );
        assert_eq!(
            "1.e:-1".parse::<Shift>().unwrap(),
            Shift {
                label: "1.e".into(),
                delta: -1
            }
        );
        assert!("a:2".parse::<Shift>().is_err());
        assert!(":+1".parse::<Shift>().is_err());
    }

    #[test]
    fn budgets_parse() {
        assert_eq!(parse_budget("100").unwrap().max_points, 100);
        let b = parse_budget("ground=8, demand=3").unwrap();
        assert_eq!((b.max_ground, b.max_demand), (8, 3));
        assert!(parse_budget("colour=1").is_err());
    }
}
