//! Versioned JSON instance files. Exact numbers are strings (`"3"`,
//! `"-1/2"`, `"inf"`); unknown fields are rejected.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_rational::BigRational;
use polymatroid::cost::{CostKind, TableFallback};
use polymatroid::exact::parse_rational;
use polymatroid::game::{Game, Player};
use polymatroid::optimize::ProblemInstance;
use polymatroid::rank::RankKind;
use polymatroid::{
    CostFunction, ElementSet, Error, ExactValue, GroundSet, RankFunction, Result, UnaryCost,
};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// An optimization instance (`rank`, `demand`, `params`, `costs`) or a game
/// (`players`) on a labelled ground set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub schema: u32,
    pub ground: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<RankSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub demand: Option<u64>,
    /// Defaults to all zeros.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub costs: Option<Vec<CostSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub players: Option<Vec<PlayerSpec>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerSpec {
    pub demand: u64,
    pub rank: RankSpec,
    pub costs: Vec<CostSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RankSpec {
    /// Values indexed by subset bitmask (bit `k` is the `k`-th label).
    Table {
        values: Vec<u64>,
    },
    /// Element `k` is the edge `edges[k]`.
    Graphic {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
    SingletonCover {
        allowed: Vec<String>,
        demand: u64,
    },
    Truncate {
        base: Box<RankSpec>,
        cap: u64,
    },
    Scale {
        base: Box<RankSpec>,
        factor: u64,
    },
    Restrict {
        base: Box<RankSpec>,
        support: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum CostSpec {
    Mm1 {
        capacity: u64,
    },
    ScaledCongestion {
        c: UnarySpec,
    },
    MatroidBinary {
        c: UnarySpec,
    },
    Polynomial {
        coefficients: Vec<String>,
    },
    /// Entries `[x, t, value]`; missing points are rejected unless a
    /// fallback value is given.
    Table {
        entries: Vec<(u64, u64, String)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        fallback: Option<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum UnarySpec {
    Polynomial { coefficients: Vec<String> },
    PositivePart { slope: String, intercept: String },
    Table { values: Vec<String> },
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<InstanceFile> {
        let file: InstanceFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if file.schema != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "unsupported schema {} (expected {SCHEMA_VERSION})",
                file.schema
            )));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance files always serialize");
        s.push('\n');
        s
    }

    pub fn ground_set(&self) -> Result<GroundSet> {
        GroundSet::new(self.ground.iter().cloned())
    }

    pub fn is_game(&self) -> bool {
        self.players.is_some()
    }

    pub fn instance(&self) -> Result<ProblemInstance> {
        if self.players.is_some() {
            return Err(Error::Parse(
                "expected an optimization instance, found a game".into(),
            ));
        }
        let ground = self.ground_set()?;
        let missing = |what: &str| Error::Parse(format!("instance file is missing `{what}`"));
        let rank = self
            .rank
            .as_ref()
            .ok_or_else(|| missing("rank"))?
            .build(&ground)?;
        let demand = self.demand.ok_or_else(|| missing("demand"))?;
        let params = self.params.clone().unwrap_or_else(|| vec![0; ground.len()]);
        let costs = build_costs(self.costs.as_ref().ok_or_else(|| missing("costs"))?)?;
        ProblemInstance::new(rank, demand, params, costs)
    }

    /// Players in file order, without the game-level validation.
    pub fn players(&self) -> Result<(GroundSet, Vec<Player>)> {
        if self.rank.is_some()
            || self.demand.is_some()
            || self.params.is_some()
            || self.costs.is_some()
        {
            return Err(Error::Parse(
                "a game file only has `schema`, `ground` and `players`".into(),
            ));
        }
        let specs = self
            .players
            .as_ref()
            .ok_or_else(|| Error::Parse("expected a game, found no `players`".into()))?;
        let ground = self.ground_set()?;
        let players = specs
            .iter()
            .map(|p| {
                Ok(Player {
                    demand: p.demand,
                    rank: p.rank.build(&ground)?,
                    costs: build_costs(&p.costs)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((ground, players))
    }

    pub fn game(&self) -> Result<Game> {
        let (ground, players) = self.players()?;
        Game::new(ground, players)
    }

    pub fn from_instance(p: &ProblemInstance) -> Result<InstanceFile> {
        Ok(InstanceFile {
            schema: SCHEMA_VERSION,
            ground: p.rank().ground().labels().to_vec(),
            rank: Some(RankSpec::from_rank(p.rank())),
            demand: Some(p.demand()),
            params: Some(p.params().to_vec()),
            costs: Some(
                p.costs()
                    .iter()
                    .map(CostSpec::from_cost)
                    .collect::<Result<_>>()?,
            ),
            players: None,
        })
    }

    pub fn from_game(g: &Game) -> Result<InstanceFile> {
        let players = g
            .players()
            .iter()
            .map(|p| {
                Ok(PlayerSpec {
                    demand: p.demand,
                    rank: RankSpec::from_rank(&p.rank),
                    costs: p
                        .costs
                        .iter()
                        .map(CostSpec::from_cost)
                        .collect::<Result<_>>()?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(InstanceFile {
            schema: SCHEMA_VERSION,
            ground: g.ground().labels().to_vec(),
            rank: None,
            demand: None,
            params: None,
            costs: None,
            players: Some(players),
        })
    }
}

fn build_costs(specs: &[CostSpec]) -> Result<Vec<CostFunction>> {
    specs.iter().map(CostSpec::build).collect()
}

fn subset(ground: &GroundSet, labels: &[String]) -> Result<ElementSet> {
    ground.subset(labels.iter().map(String::as_str))
}

fn labels(ground: &GroundSet, set: ElementSet) -> Vec<String> {
    ground
        .labels_of(set)
        .into_iter()
        .map(str::to_owned)
        .collect()
}

impl RankSpec {
    pub fn build(&self, ground: &GroundSet) -> Result<RankFunction> {
        match self {
            RankSpec::Table { values } => RankFunction::from_table(ground.clone(), values.clone()),
            RankSpec::Graphic { vertices, edges } => {
                RankFunction::graphic(ground.clone(), *vertices, edges.clone())
            }
            RankSpec::SingletonCover { allowed, demand } => {
                RankFunction::singleton_cover(ground.clone(), subset(ground, allowed)?, *demand)
            }
            RankSpec::Truncate { base, cap } => Ok(base.build(ground)?.truncate(*cap)),
            RankSpec::Scale { base, factor } => base.build(ground)?.scale(*factor),
            RankSpec::Restrict { base, support } => {
                base.build(ground)?.restrict(subset(ground, support)?)
            }
        }
    }

    pub fn from_rank(f: &RankFunction) -> RankSpec {
        let ground = f.ground();
        match f.kind() {
            RankKind::Table(values) => RankSpec::Table {
                values: values.clone(),
            },
            RankKind::Graphic { vertices, edges } => RankSpec::Graphic {
                vertices: *vertices,
                edges: edges.clone(),
            },
            RankKind::SingletonCover { allowed, demand } => RankSpec::SingletonCover {
                allowed: labels(ground, *allowed),
                demand: *demand,
            },
            RankKind::Truncated { base, cap } => RankSpec::Truncate {
                base: Box::new(RankSpec::from_rank(base)),
                cap: *cap,
            },
            RankKind::Scaled { base, factor } => RankSpec::Scale {
                base: Box::new(RankSpec::from_rank(base)),
                factor: *factor,
            },
            RankKind::Restricted { base, support } => RankSpec::Restrict {
                base: Box::new(RankSpec::from_rank(base)),
                support: labels(ground, *support),
            },
        }
    }
}

fn rationals(values: &[String]) -> Result<Vec<BigRational>> {
    values.iter().map(|s| parse_rational(s)).collect()
}

fn strings<T: ToString>(values: &[T]) -> Vec<String> {
    values.iter().map(T::to_string).collect()
}

impl CostSpec {
    pub fn build(&self) -> Result<CostFunction> {
        match self {
            CostSpec::Mm1 { capacity } => CostFunction::mm1(*capacity),
            CostSpec::ScaledCongestion { c } => CostFunction::scaled_congestion(c.build()?),
            CostSpec::MatroidBinary { c } => CostFunction::matroid_binary(c.build()?),
            CostSpec::Polynomial { coefficients } => {
                CostFunction::polynomial(rationals(coefficients)?)
            }
            CostSpec::Table { entries, fallback } => {
                let mut map = BTreeMap::new();
                for (x, t, v) in entries {
                    if map.insert((*x, *t), ExactValue::from_str(v)?).is_some() {
                        return Err(Error::Parse(format!("cost table lists ({x}, {t}) twice")));
                    }
                }
                let fallback = match fallback {
                    Some(v) => TableFallback::Value(ExactValue::from_str(v)?),
                    None => TableFallback::Reject,
                };
                CostFunction::custom_table(map, fallback)
            }
        }
    }

    pub fn from_cost(c: &CostFunction) -> Result<CostSpec> {
        Ok(match c.kind() {
            CostKind::Mm1 { capacity } => CostSpec::Mm1 {
                capacity: *capacity,
            },
            CostKind::ScaledCongestion { c } => CostSpec::ScaledCongestion {
                c: UnarySpec::from_unary(c),
            },
            CostKind::MatroidBinary { c } => CostSpec::MatroidBinary {
                c: UnarySpec::from_unary(c),
            },
            CostKind::Polynomial { coefficients } => CostSpec::Polynomial {
                coefficients: strings(coefficients),
            },
            CostKind::Table { entries, fallback } => CostSpec::Table {
                entries: entries
                    .iter()
                    .map(|(&(x, t), v)| (x, t, v.to_string()))
                    .collect(),
                fallback: match fallback {
                    TableFallback::Reject => None,
                    TableFallback::Value(v) => Some(v.to_string()),
                },
            },
        })
    }
}

impl UnarySpec {
    pub fn build(&self) -> Result<UnaryCost> {
        Ok(match self {
            UnarySpec::Polynomial { coefficients } => {
                UnaryCost::Polynomial(rationals(coefficients)?)
            }
            UnarySpec::PositivePart { slope, intercept } => UnaryCost::PositivePart {
                slope: parse_rational(slope)?,
                intercept: parse_rational(intercept)?,
            },
            UnarySpec::Table { values } => UnaryCost::Table(
                values
                    .iter()
                    .map(|v| ExactValue::from_str(v))
                    .collect::<Result<_>>()?,
            ),
        })
    }

    pub fn from_unary(c: &UnaryCost) -> UnarySpec {
        match c {
            UnaryCost::Polynomial(coefficients) => UnarySpec::Polynomial {
                coefficients: strings(coefficients),
            },
            UnaryCost::PositivePart { slope, intercept } => UnarySpec::PositivePart {
                slope: slope.to_string(),
                intercept: intercept.to_string(),
            },
            UnaryCost::Table(values) => UnarySpec::Table {
                values: strings(values),
            },
        }
    }
}
