//! Small named instances used by tests, the self-test and the CLI.

use std::collections::BTreeMap;

use crate::cost::{CostFunction, TableFallback};
use crate::counterexample::{build_no_pne_game, NoPneGame};
use crate::exact::ExactValue;
use crate::optimize::ProblemInstance;
use crate::rank::{ElementSet, GroundSet, RankFunction};

/// Graphic matroid of the triangle, edges `(0,1), (1,2), (0,2)`.
pub fn k3() -> RankFunction {
    RankFunction::graphic_indexed(3, vec![(0, 1), (1, 2), (0, 2)]).expect("valid graph")
}

/// Two spanning-tree edges of the triangle with M/M/1 delays of capacity 3.
pub fn k3_mm1() -> ProblemInstance {
    let c = CostFunction::mm1(3).expect("capacity is positive");
    ProblemInstance::new(k3(), 2, vec![0; 3], vec![c.clone(), c.clone(), c])
        .expect("consistent shapes")
}

/// Four elements, `S = {1,2}`, `T = {1,3}`: value 1 on non-empty subsets
/// of `S` or `T`, 2 on every other non-empty set.
pub fn canonical_violation() -> RankFunction {
    let s = ElementSet::from_iter([1, 2]);
    let t = ElementSet::from_iter([1, 3]);
    RankFunction::from_fn(GroundSet::indexed(4).expect("non-empty"), |u| {
        if u.is_empty() {
            0
        } else if u.is_subset(s) || u.is_subset(t) {
            1
        } else {
            2
        }
    })
    .expect("small table")
}

/// The two-player game built from [`canonical_violation`]; every critical
/// strategy is present.
pub fn no_pne_example() -> NoPneGame {
    build_no_pne_game(&canonical_violation()).expect("canonical construction succeeds")
}

pub const NO_PNE_ROWS: [&str; 5] = ["{a,b}", "{h,g}", "{a,g}", "{b,g}", "{g}"];
pub const NO_PNE_COLS: [&str; 5] = ["{a,h}", "{b,g}", "{a,g}", "{h,g}", "{g}"];

/// Private costs per unit, player 1 then player 2.
pub const NO_PNE_CELLS: [[&str; 5]; 5] = [
    ["1+1,1+0", "0+1,0+2", "1+1,1+2", "0+1,0+2", "0+1,2+2"],
    ["0+0,1+2", "0+3,0+2", "0+3,1+2", "0+3,2+2", "0+6,2+2"],
    ["1+0,1+0", "0+3,0+2", "1+3,1+2", "0+3,0+2", "0+6,2+2"],
    ["1+0,1+0", "1+3,0+2", "1+3,1+2", "1+3,0+2", "1+6,2+2"],
    ["3+3,1+0", "6+6,0+2", "6+6,1+2", "6+6,0+2", "9+9,2+2"],
];

/// A cost table with `C(1;1) - C(0;1) = 5 > C(2;0) - C(1;0) = 1`, so the
/// shift-domination condition fails at `(x, t) = (1, 0)`.
pub fn shift_violating_table() -> CostFunction {
    let mut entries = BTreeMap::new();
    for (x, t, v) in [
        (0, 0, 0),
        (1, 0, 1),
        (2, 0, 2),
        (3, 0, 3),
        (0, 1, 0),
        (1, 1, 5),
        (2, 1, 10),
    ] {
        entries.insert((x, t), ExactValue::from_integer(v));
    }
    CostFunction::custom_table(entries, TableFallback::Value(ExactValue::Infinite))
        .expect("nonnegative")
}
