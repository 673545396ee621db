//! Integral rank functions `f: 2^E -> N` and their structural checks.
//!
//! Subsets of the ground set are bitmasks ([`ElementSet`]). Explicit tables
//! are stored densely by mask and are limited to [`ENUMERATION_CAP`]
//! elements; the composite constructors (truncation, scaling, graphic
//! matroids, singleton covers, restrictions) evaluate lazily and work on
//! ground sets of up to 64 elements.
//!
//! Submodularity is deliberately *not* an invariant of [`RankFunction`]: the
//! non-polymatroid constructions in [`crate::counterexample`] need
//! non-submodular inputs. It is a checked property instead.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest ground set on which exhaustive subset checks and explicit tables
/// are allowed.
pub const ENUMERATION_CAP: usize = 20;

const MAX_ELEMENTS: usize = 64;

/// A subset of the ground set, stored as a bitmask over dense indices.
#[derive(Copy, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementSet(u64);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    pub fn from_bits(bits: u64) -> Self {
        ElementSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(e: usize) -> Self {
        assert!(e < MAX_ELEMENTS, "element index {e} out of range");
        ElementSet(1 << e)
    }

    /// The first `m` elements `{0, .., m-1}`.
    pub fn full(m: usize) -> Self {
        assert!(m <= MAX_ELEMENTS);
        if m == MAX_ELEMENTS {
            ElementSet(u64::MAX)
        } else {
            ElementSet((1u64 << m) - 1)
        }
    }

    pub fn contains(self, e: usize) -> bool {
        e < MAX_ELEMENTS && self.0 & (1 << e) != 0
    }

    pub fn with(self, e: usize) -> Self {
        ElementSet(self.0 | ElementSet::singleton(e).0)
    }

    pub fn without(self, e: usize) -> Self {
        ElementSet(self.0 & !ElementSet::singleton(e).0)
    }

    pub fn union(self, other: Self) -> Self {
        ElementSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ElementSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        ElementSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Elements in ascending index order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let e = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(e)
            }
        })
    }
}

impl FromIterator<usize> for ElementSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(ElementSet::EMPTY, ElementSet::with)
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Ordered, labelled ground set `E = {0, .., m-1}`.
#[derive(Clone, PartialEq, Eq)]
pub struct GroundSet {
    labels: Arc<[String]>,
}

impl GroundSet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidParameter(
                "ground set must be non-empty".into(),
            ));
        }
        if labels.len() > MAX_ELEMENTS {
            return Err(Error::Capacity {
                what: "ground set size",
                limit: MAX_ELEMENTS,
                actual: labels.len(),
            });
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate element label {l:?}"
                )));
            }
        }
        Ok(GroundSet {
            labels: labels.into(),
        })
    }

    /// Ground set labelled by its own indices `"0", "1", ...`.
    pub fn indexed(m: usize) -> Result<Self> {
        GroundSet::new((0..m).map(|e| e.to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, e: usize) -> &str {
        &self.labels[e]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn full(&self) -> ElementSet {
        ElementSet::full(self.len())
    }

    pub fn contains_set(&self, set: ElementSet) -> bool {
        set.is_subset(self.full())
    }

    /// Resolve labels to a subset; unknown labels are a domain error.
    pub fn subset<'a>(&self, labels: impl IntoIterator<Item = &'a str>) -> Result<ElementSet> {
        labels
            .into_iter()
            .map(|l| {
                self.index_of(l)
                    .ok_or_else(|| Error::Domain(format!("unknown element {l:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(|es| es.into_iter().collect())
    }

    pub fn labels_of(&self, set: ElementSet) -> Vec<&str> {
        set.iter().map(|e| self.label(e)).collect()
    }

    fn check_enumerable(&self) -> Result<()> {
        if self.len() > ENUMERATION_CAP {
            return Err(Error::Capacity {
                what: "ground set size for exhaustive enumeration",
                limit: ENUMERATION_CAP,
                actual: self.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels.iter()).finish()
    }
}

/// How a rank function is represented.
#[derive(Clone, Debug)]
pub enum RankKind {
    /// Dense table indexed by subset bitmask.
    Table(Vec<u64>),
    /// `min(cap, base(U))`.
    Truncated { base: RankFunction, cap: u64 },
    /// `factor * base(U)`.
    Scaled { base: RankFunction, factor: u64 },
    /// Graphic matroid rank; element `k` is edge `edges[k]`.
    Graphic {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
    /// `demand` if `U` meets `allowed`, else 0.
    SingletonCover { allowed: ElementSet, demand: u64 },
    /// `base(U ∩ support)`: a matroid restricted to a player's resources.
    Restricted {
        base: RankFunction,
        support: ElementSet,
    },
}

/// Short tag naming the representation.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum RankTag {
    ExplicitTable,
    Truncated,
    Scaled,
    GraphicMatroid,
    SingletonCover,
    MatroidFromRankTable,
}

/// Integral, normalized set function on a [`GroundSet`]. Immutable and
/// cheap to clone.
#[derive(Clone)]
pub struct RankFunction {
    ground: GroundSet,
    kind: Arc<RankKind>,
}

/// Outcome of an exhaustive structural check. A failing check carries a
/// pair of subsets witnessing the violation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyCheck {
    pub holds: bool,
    pub witness: Option<(ElementSet, ElementSet)>,
}

impl PropertyCheck {
    fn pass() -> Self {
        PropertyCheck {
            holds: true,
            witness: None,
        }
    }

    fn fail(a: ElementSet, b: ElementSet) -> Self {
        PropertyCheck {
            holds: false,
            witness: Some((a, b)),
        }
    }
}

impl RankFunction {
    /// Explicit table indexed by subset bitmask; `values.len()` must be `2^|E|`.
    /// No structural property is enforced; use the check methods.
    pub fn from_table(ground: GroundSet, values: Vec<u64>) -> Result<Self> {
        ground.check_enumerable()?;
        let expected = 1usize << ground.len();
        if values.len() != expected {
            return Err(Error::InvalidParameter(format!(
                "rank table has {} entries, expected {expected}",
                values.len()
            )));
        }
        Ok(RankFunction {
            ground,
            kind: Arc::new(RankKind::Table(values)),
        })
    }

    /// Tabulate an arbitrary closure over all subsets.
    pub fn from_fn(ground: GroundSet, mut f: impl FnMut(ElementSet) -> u64) -> Result<Self> {
        ground.check_enumerable()?;
        let values = (0..1u64 << ground.len())
            .map(|b| f(ElementSet(b)))
            .collect();
        RankFunction::from_table(ground, values)
    }

    /// Rank function of the graphic matroid of a connected multigraph: the
    /// edges become the ground set, and `rank(U) = |V| - #components(V, U)`.
    pub fn graphic(ground: GroundSet, vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::InvalidParameter(
                "graph needs at least one vertex".into(),
            ));
        }
        if edges.len() != ground.len() {
            return Err(Error::InvalidParameter(format!(
                "graph has {} edges but the ground set has {} elements",
                edges.len(),
                ground.len()
            )));
        }
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= vertices || v >= vertices) {
            return Err(Error::InvalidParameter(format!(
                "edge ({u},{v}) uses a missing vertex"
            )));
        }
        if forest_size(vertices, edges.iter().copied()) + 1 != vertices {
            return Err(Error::InvalidParameter("graph is disconnected".into()));
        }
        Ok(RankFunction {
            ground,
            kind: Arc::new(RankKind::Graphic { vertices, edges }),
        })
    }

    /// Graphic matroid with ground labels `"0".."m-1"`.
    pub fn graphic_indexed(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let ground = GroundSet::indexed(edges.len())?;
        RankFunction::graphic(ground, vertices, edges)
    }

    /// `f(U) = demand` if `U ∩ allowed ≠ ∅`, else 0.
    pub fn singleton_cover(ground: GroundSet, allowed: ElementSet, demand: u64) -> Result<Self> {
        if !ground.contains_set(allowed) {
            return Err(Error::Domain("allowed set leaves the ground set".into()));
        }
        Ok(RankFunction {
            ground,
            kind: Arc::new(RankKind::SingletonCover { allowed, demand }),
        })
    }

    /// Uniform rank `min(k, |U|)`, the rank of the uniform matroid `U_{k,m}`.
    pub fn uniform(ground: GroundSet, k: u64) -> Result<Self> {
        let m = ground.len();
        // Built as the truncation of a free matroid so it evaluates lazily.
        let free = RankFunction::graphic(ground, m + 1, (0..m).map(|e| (0, e + 1)).collect())?;
        Ok(free.truncate(k))
    }

    /// `f'(U) = min(cap, f(U))`.
    pub fn truncate(&self, cap: u64) -> RankFunction {
        RankFunction {
            ground: self.ground.clone(),
            kind: Arc::new(RankKind::Truncated {
                base: self.clone(),
                cap,
            }),
        }
    }

    /// `(k f)(U) = k f(U)`, `k ≥ 1`.
    pub fn scale(&self, factor: u64) -> Result<RankFunction> {
        if factor == 0 {
            return Err(Error::InvalidParameter(
                "scale factor must be at least 1; use an explicit zero function".into(),
            ));
        }
        Ok(RankFunction {
            ground: self.ground.clone(),
            kind: Arc::new(RankKind::Scaled {
                base: self.clone(),
                factor,
            }),
        })
    }

    /// `U ↦ f(U ∩ support)`.
    pub fn restrict(&self, support: ElementSet) -> Result<RankFunction> {
        if !self.ground.contains_set(support) {
            return Err(Error::Domain(
                "restriction support leaves the ground set".into(),
            ));
        }
        Ok(RankFunction {
            ground: self.ground.clone(),
            kind: Arc::new(RankKind::Restricted {
                base: self.clone(),
                support,
            }),
        })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn kind(&self) -> &RankKind {
        &self.kind
    }

    pub fn tag(&self) -> RankTag {
        match &*self.kind {
            RankKind::Table(_) => RankTag::ExplicitTable,
            RankKind::Truncated { .. } => RankTag::Truncated,
            RankKind::Scaled { .. } => RankTag::Scaled,
            RankKind::Graphic { .. } => RankTag::GraphicMatroid,
            RankKind::SingletonCover { .. } => RankTag::SingletonCover,
            RankKind::Restricted { .. } => RankTag::MatroidFromRankTable,
        }
    }

    /// `f(U)`; rejects subsets with elements outside the ground set.
    pub fn eval(&self, set: ElementSet) -> Result<u64> {
        if !self.ground.contains_set(set) {
            return Err(Error::Domain(format!(
                "subset {set:?} is not contained in a ground set of {} elements",
                self.ground.len()
            )));
        }
        Ok(self.value(set))
    }

    /// `f(U)` without the ground-set check.
    pub fn value(&self, set: ElementSet) -> u64 {
        match &*self.kind {
            RankKind::Table(values) => values[set.0 as usize],
            RankKind::Truncated { base, cap } => base.value(set).min(*cap),
            RankKind::Scaled { base, factor } => base.value(set) * factor,
            RankKind::Graphic { vertices, edges } => {
                forest_size(*vertices, set.iter().map(|e| edges[e])) as u64
            }
            RankKind::SingletonCover { allowed, demand } => {
                if set.intersection(*allowed).is_empty() {
                    0
                } else {
                    *demand
                }
            }
            RankKind::Restricted { base, support } => base.value(set.intersection(*support)),
        }
    }

    /// `f(E)`.
    pub fn total(&self) -> u64 {
        self.value(self.ground.full())
    }

    /// Values of all `2^|E|` subsets indexed by mask.
    pub fn table(&self) -> Result<Vec<u64>> {
        self.ground.check_enumerable()?;
        if let RankKind::Table(values) = &*self.kind {
            return Ok(values.clone());
        }
        Ok((0..1u64 << self.ground.len())
            .map(|b| self.value(ElementSet(b)))
            .collect())
    }

    /// Equivalent explicit-table function.
    pub fn materialize(&self) -> Result<RankFunction> {
        RankFunction::from_table(self.ground.clone(), self.table()?)
    }

    /// Submodularity known from the construction, without enumeration.
    /// `None` for explicit tables.
    pub fn known_submodular(&self) -> Option<bool> {
        match &*self.kind {
            RankKind::Table(_) => None,
            RankKind::Graphic { .. } | RankKind::SingletonCover { .. } => Some(true),
            RankKind::Truncated { base, .. }
            | RankKind::Scaled { base, .. }
            | RankKind::Restricted { base, .. } => match base.known_submodular() {
                Some(true) => Some(true),
                _ => None,
            },
        }
    }

    /// Exhaustive submodularity test via the local criterion
    /// `f(U+a) + f(U+b) ≥ f(U+a+b) + f(U)` for `a ≠ b ∉ U`, which is
    /// equivalent to the lattice inequality over all pairs. A failing check
    /// returns `(S, T) = (U+a, U+b)`, for which
    /// `f(S) + f(T) < f(S∩T) + f(S∪T)` holds strictly.
    pub fn is_submodular(&self) -> Result<PropertyCheck> {
        let table = self.table()?;
        let m = self.ground.len();
        for u in 0..1u64 << m {
            let base = table[u as usize];
            for a in (0..m).filter(|&a| u & (1 << a) == 0) {
                let ua = u | 1 << a;
                for b in (a + 1..m).filter(|&b| u & (1 << b) == 0) {
                    let ub = u | 1 << b;
                    if table[ua as usize] + table[ub as usize] < table[(ua | ub) as usize] + base {
                        return Ok(PropertyCheck::fail(ElementSet(ua), ElementSet(ub)));
                    }
                }
            }
        }
        Ok(PropertyCheck::pass())
    }

    /// Exhaustive check of `f(∅) = 0` and `U ⊆ V ⇒ f(U) ≤ f(V)`.
    /// A normalization failure is reported as the witness `(∅, ∅)`; a
    /// monotonicity failure as `(U - e, U)` with `f(U - e) > f(U)`.
    pub fn is_monotone_normalized(&self) -> Result<PropertyCheck> {
        let table = self.table()?;
        if table[0] != 0 {
            return Ok(PropertyCheck::fail(ElementSet::EMPTY, ElementSet::EMPTY));
        }
        for (u, &value) in table.iter().enumerate().skip(1) {
            let set = ElementSet(u as u64);
            for e in set.iter() {
                let smaller = set.without(e);
                if table[smaller.0 as usize] > value {
                    return Ok(PropertyCheck::fail(smaller, set));
                }
            }
        }
        Ok(PropertyCheck::pass())
    }

    /// `f(U) > 0` for every non-empty `U`. By monotonicity it is enough to
    /// look at singletons, but the check is exhaustive so it also applies to
    /// non-monotone tables.
    pub fn is_strictly_positive(&self) -> Result<bool> {
        let table = self.table()?;
        Ok(table.iter().skip(1).all(|&v| v > 0))
    }

    /// Pointwise equality on all subsets.
    pub fn same_values(&self, other: &RankFunction) -> Result<bool> {
        if self.ground.len() != other.ground.len() {
            return Ok(false);
        }
        Ok(self.table()? == other.table()?)
    }
}

impl fmt::Debug for RankFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RankFunction")
            .field("ground", &self.ground)
            .field("kind", &self.tag())
            .finish()
    }
}

/// Number of edges in a spanning forest, i.e. `|V| - #components`.
fn forest_size(vertices: usize, edges: impl Iterator<Item = (usize, usize)>) -> usize {
    let mut parent: Vec<usize> = (0..vertices).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mut merged = 0;
    for (u, v) in edges {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            merged += 1;
        }
    }
    merged
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> RankFunction {
        RankFunction::graphic_indexed(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn set(es: &[usize]) -> ElementSet {
        es.iter().copied().collect()
    }

    #[test]
    fn eval_examples() {
        let table = RankFunction::from_table(GroundSet::indexed(1).unwrap(), vec![0, 3]).unwrap();
        assert_eq!(table.eval(ElementSet::EMPTY).unwrap(), 0);
        assert_eq!(k3().eval(set(&[0, 1, 2])).unwrap(), 2);

        let ground = GroundSet::new(["a", "b", "c"]).unwrap();
        let cover =
            RankFunction::singleton_cover(ground.clone(), ground.subset(["a", "b"]).unwrap(), 4)
                .unwrap();
        assert_eq!(cover.eval(ground.subset(["a"]).unwrap()).unwrap(), 4);
        assert_eq!(cover.eval(ground.subset(["c"]).unwrap()).unwrap(), 0);
    }

    #[test]
    fn eval_rejects_foreign_elements() {
        assert!(matches!(k3().eval(set(&[3])), Err(Error::Domain(_))));
    }

    #[test]
    fn ground_set_validation() {
        assert!(GroundSet::new(Vec::<String>::new()).is_err());
        assert!(GroundSet::new(["a", "a"]).is_err());
        assert!(GroundSet::indexed(65).is_err());
    }

    #[test]
    fn truncate_examples() {
        let f = k3().scale(3).unwrap().truncate(2);
        for e in 0..3 {
            assert_eq!(f.value(ElementSet::singleton(e)), 2);
        }
        let zero = k3().truncate(0);
        assert!(zero.table().unwrap().iter().all(|&v| v == 0));
    }

    #[test]
    fn scale_examples() {
        let f = k3();
        assert!(f.same_values(&f.scale(1).unwrap()).unwrap());
        assert_eq!(f.scale(2).unwrap().value(set(&[0])), 2);
        assert!(matches!(f.scale(0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn graphic_examples() {
        let f = k3();
        assert_eq!(f.value(set(&[0, 1])), 2);
        assert_eq!(f.value(set(&[0, 1, 2])), 2);
        let path = RankFunction::graphic_indexed(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(path.total(), 3);
        assert!(RankFunction::graphic_indexed(4, vec![(0, 1), (2, 3)]).is_err());
        assert_eq!(f.tag(), RankTag::GraphicMatroid);
    }

    #[test]
    fn submodularity_examples() {
        assert!(k3().is_submodular().unwrap().holds);
        let f = crate::fixtures::canonical_violation();
        let check = f.is_submodular().unwrap();
        assert!(!check.holds);
        assert_eq!(check.witness, Some((set(&[1, 2]), set(&[1, 3]))));
        let (s, t) = check.witness.unwrap();
        assert!(f.value(s) + f.value(t) < f.value(s.intersection(t)) + f.value(s.union(t)));
        assert!(
            k3().scale(2)
                .unwrap()
                .truncate(3)
                .is_submodular()
                .unwrap()
                .holds
        );
    }

    #[test]
    fn monotone_normalized_examples() {
        assert!(k3().is_monotone_normalized().unwrap().holds);
        assert!(
            crate::fixtures::canonical_violation()
                .is_monotone_normalized()
                .unwrap()
                .holds
        );
        let g = GroundSet::indexed(2).unwrap();
        let not_normalized = RankFunction::from_table(g.clone(), vec![1, 1, 1, 1]).unwrap();
        assert_eq!(
            not_normalized.is_monotone_normalized().unwrap().witness,
            Some((ElementSet::EMPTY, ElementSet::EMPTY))
        );
        let not_monotone = RankFunction::from_table(g, vec![0, 2, 1, 1]).unwrap();
        let check = not_monotone.is_monotone_normalized().unwrap();
        assert!(!check.holds);
        assert_eq!(check.witness, Some((set(&[0]), set(&[0, 1]))));
    }

    #[test]
    fn checks_respect_enumeration_cap() {
        let m = ENUMERATION_CAP + 1;
        let big = RankFunction::uniform(GroundSet::indexed(m).unwrap(), 2).unwrap();
        assert!(matches!(big.is_submodular(), Err(Error::Capacity { .. })));
        assert_eq!(big.value(ElementSet::full(m)), 2);
        assert_eq!(big.known_submodular(), Some(true));
    }

    #[test]
    fn strict_positivity() {
        assert!(k3().is_strictly_positive().unwrap());
        let g = GroundSet::indexed(2).unwrap();
        let cover = RankFunction::singleton_cover(g, set(&[0]), 2).unwrap();
        assert!(!cover.is_strictly_positive().unwrap());
    }

    #[test]
    fn element_set_ops() {
        let a = set(&[0, 2, 5]);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![0, 2, 5]);
        assert_eq!(a.len(), 3);
        assert!(set(&[2]).is_subset(a));
        assert_eq!(a.without(2), set(&[0, 5]));
        assert_eq!(a.difference(set(&[0, 1])), set(&[2, 5]));
    }
}
