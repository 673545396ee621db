//! Two-parameter cost functions `C(x; t)` over `N × N`, evaluated exactly.
//!
//! `x` is the amount placed on an element and `t` is the parameter (in games,
//! the load of all other players). Regularity means
//!
//! ```text
//! C⁻(x; t)   ≤ C⁻(x; t+1)      marginal cost nondecreasing in t
//! C⁻(x; t+1) ≤ C⁻(x+1; t)      a parameter bump is dominated by an argument bump
//! ```
//!
//! and implies discrete convexity in `x`. Both are checked on a finite box.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::ExactValue;

/// How far single-variable coefficient functions are sampled when checking
/// monotonicity and convexity.
pub const UNARY_SAMPLE_BOUND: u64 = 64;

/// A one-variable cost `c: N -> Q ∪ {inf}` used by the congestion families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnaryCost {
    /// `Σ_k a_k y^k`.
    Polynomial(Vec<BigRational>),
    /// `max(0, slope * y + intercept)`.
    PositivePart {
        slope: BigRational,
        intercept: BigRational,
    },
    /// `values[y]`; undefined beyond the table.
    Table(Vec<ExactValue>),
}

impl UnaryCost {
    pub fn constant(v: i64) -> Self {
        UnaryCost::Polynomial(vec![BigRational::from_integer(BigInt::from(v))])
    }

    /// `c(y) = y`.
    pub fn identity() -> Self {
        UnaryCost::Polynomial(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn positive_part(slope: i64, intercept: i64) -> Self {
        UnaryCost::PositivePart {
            slope: BigRational::from_integer(BigInt::from(slope)),
            intercept: BigRational::from_integer(BigInt::from(intercept)),
        }
    }

    pub fn eval(&self, y: u64) -> Result<ExactValue> {
        let yq = BigRational::from_integer(BigInt::from(y));
        match self {
            UnaryCost::Polynomial(coeffs) => Ok(ExactValue::Finite(horner(coeffs, &yq))),
            UnaryCost::PositivePart { slope, intercept } => {
                let v = slope * &yq + intercept;
                Ok(ExactValue::Finite(if v.is_negative() {
                    BigRational::zero()
                } else {
                    v
                }))
            }
            UnaryCost::Table(values) => values
                .get(y as usize)
                .cloned()
                .ok_or_else(|| Error::Domain(format!("unary cost table has no value at {y}"))),
        }
    }

    /// Largest argument at which the function is defined, if bounded.
    fn domain_end(&self) -> u64 {
        match self {
            UnaryCost::Table(values) => (values.len() as u64).saturating_sub(1),
            _ => UNARY_SAMPLE_BOUND,
        }
    }

    /// Sampled check: nonnegative and nondecreasing, and (if `convex`) with
    /// nondecreasing first differences.
    fn validate(&self, convex: bool) -> Result<()> {
        let end = self.domain_end().min(UNARY_SAMPLE_BOUND);
        let values = (0..=end)
            .map(|y| self.eval(y))
            .collect::<Result<Vec<_>>>()?;
        if let Some(y) = values.iter().position(|v| v.is_negative()) {
            return Err(Error::InvalidParameter(format!(
                "coefficient function is negative at {y}"
            )));
        }
        if let Some(y) = values.windows(2).position(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter(format!(
                "coefficient function decreases between {y} and {}",
                y + 1
            )));
        }
        if convex {
            for y in 1..values.len().saturating_sub(1) {
                let left = values[y].checked_sub(&values[y - 1]);
                let right = values[y + 1].checked_sub(&values[y]);
                if let (Ok(l), Ok(r)) = (left, right) {
                    if l > r {
                        return Err(Error::InvalidParameter(format!(
                            "coefficient function is not convex at {y}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn horner(coeffs: &[BigRational], y: &BigRational) -> BigRational {
    coeffs
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, a| acc * y + a)
}

/// What a custom table returns for a point it does not list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableFallback {
    /// Missing points are a domain error.
    Reject,
    /// Missing points take this value.
    Value(ExactValue),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CostKind {
    /// M/M/1 delay `1 / (u - t - x)` below capacity, `+inf` at or above.
    Mm1 { capacity: u64 },
    /// `c(x + t) * x`: a player pays the per-unit congestion cost on each unit.
    ScaledCongestion { c: UnaryCost },
    /// `c(1 + t)` if `x = 1`, `0` if `x = 0`; undefined for `x ≥ 2`.
    MatroidBinary { c: UnaryCost },
    /// `p(x + t)` with nonnegative coefficients, `p(y) = Σ a_k y^k`.
    Polynomial { coefficients: Vec<BigRational> },
    /// Explicit `(x, t) -> value` table.
    Table {
        entries: BTreeMap<(u64, u64), ExactValue>,
        fallback: TableFallback,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CostTag {
    Mm1,
    ScaledCongestion,
    MatroidBinary,
    Polynomial,
    CustomTable,
}

/// Which regularity inequality failed.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum RegularityCondition {
    /// `C⁻(x;t) ≤ C⁻(x;t+1)`.
    MonotoneInParameter,
    /// `C⁻(x;t+1) ≤ C⁻(x+1;t)`.
    ShiftDominated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityCheck {
    pub holds: bool,
    /// First failing `(x, t)` in the scan order `x` ascending, then `t`.
    pub witness: Option<(u64, u64)>,
    pub condition: Option<RegularityCondition>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexityCheck {
    pub holds: bool,
    pub witness: Option<(u64, u64)>,
}

/// `C: N × N -> Q≥0 ∪ {inf}`. Immutable, cheap to clone.
#[derive(Clone, PartialEq, Eq)]
pub struct CostFunction {
    kind: Arc<CostKind>,
}

impl CostFunction {
    pub fn mm1(capacity: u64) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidParameter(
                "M/M/1 capacity must be at least 1".into(),
            ));
        }
        Ok(CostFunction::from_kind(CostKind::Mm1 { capacity }))
    }

    /// `C(x;t) = c(x+t) x` with `c` nonnegative, nondecreasing and convex.
    pub fn scaled_congestion(c: UnaryCost) -> Result<Self> {
        c.validate(true)?;
        Ok(CostFunction::from_kind(CostKind::ScaledCongestion { c }))
    }

    /// `C(1;t) = c(1+t)`, `C(0;t) = 0`, with `c` nonnegative and nondecreasing.
    pub fn matroid_binary(c: UnaryCost) -> Result<Self> {
        c.validate(false)?;
        Ok(CostFunction::from_kind(CostKind::MatroidBinary { c }))
    }

    /// `C(x;t) = Σ_k a_k (x+t)^k` with every `a_k ≥ 0`.
    pub fn polynomial(coefficients: Vec<BigRational>) -> Result<Self> {
        if coefficients.iter().any(|a| a.is_negative()) {
            return Err(Error::InvalidParameter(
                "polynomial coefficients must be nonnegative".into(),
            ));
        }
        Ok(CostFunction::from_kind(CostKind::Polynomial {
            coefficients,
        }))
    }

    /// Convenience for integer coefficients.
    pub fn polynomial_int(coefficients: &[i64]) -> Result<Self> {
        CostFunction::polynomial(
            coefficients
                .iter()
                .map(|&a| BigRational::from_integer(BigInt::from(a)))
                .collect(),
        )
    }

    pub fn custom_table(
        entries: BTreeMap<(u64, u64), ExactValue>,
        fallback: TableFallback,
    ) -> Result<Self> {
        if entries.values().any(ExactValue::is_negative) {
            return Err(Error::InvalidParameter(
                "cost table values must be nonnegative".into(),
            ));
        }
        if let TableFallback::Value(v) = &fallback {
            if v.is_negative() {
                return Err(Error::InvalidParameter(
                    "table fallback must be nonnegative".into(),
                ));
            }
        }
        Ok(CostFunction::from_kind(CostKind::Table {
            entries,
            fallback,
        }))
    }

    fn from_kind(kind: CostKind) -> Self {
        CostFunction {
            kind: Arc::new(kind),
        }
    }

    pub fn kind(&self) -> &CostKind {
        &self.kind
    }

    pub fn tag(&self) -> CostTag {
        match &*self.kind {
            CostKind::Mm1 { .. } => CostTag::Mm1,
            CostKind::ScaledCongestion { .. } => CostTag::ScaledCongestion,
            CostKind::MatroidBinary { .. } => CostTag::MatroidBinary,
            CostKind::Polynomial { .. } => CostTag::Polynomial,
            CostKind::Table { .. } => CostTag::CustomTable,
        }
    }

    /// Largest `x` the function is defined for, if bounded.
    pub fn max_argument(&self) -> Option<u64> {
        match &*self.kind {
            CostKind::MatroidBinary { .. } => Some(1),
            _ => None,
        }
    }

    /// `C(x; t)`.
    pub fn eval(&self, x: u64, t: u64) -> Result<ExactValue> {
        match &*self.kind {
            CostKind::Mm1 { capacity } => {
                let used = x.saturating_add(t);
                if used >= *capacity {
                    Ok(ExactValue::Infinite)
                } else {
                    Ok(ExactValue::ratio(1, (*capacity - used) as i64))
                }
            }
            CostKind::ScaledCongestion { c } => Ok(c.eval(x + t)?.mul_count(x)),
            CostKind::MatroidBinary { c } => match x {
                0 => Ok(ExactValue::zero()),
                1 => c.eval(1 + t),
                _ => Err(Error::Domain(format!(
                    "binary matroid cost is only defined for x in {{0,1}}, got {x}"
                ))),
            },
            CostKind::Polynomial { coefficients } => {
                let y = BigRational::from_integer(BigInt::from(x + t));
                Ok(ExactValue::Finite(horner(coefficients, &y)))
            }
            CostKind::Table { entries, fallback } => match entries.get(&(x, t)) {
                Some(v) => Ok(v.clone()),
                None => match fallback {
                    TableFallback::Value(v) => Ok(v.clone()),
                    TableFallback::Reject => Err(Error::Domain(format!(
                        "cost table has no entry for (x={x}, t={t})"
                    ))),
                },
            },
        }
    }

    /// `C⁻(x;t) = C(x;t) - C(x-1;t)`, only for `x ≥ 1`.
    pub fn left_derivative(&self, x: u64, t: u64) -> Result<ExactValue> {
        if x == 0 {
            return Err(Error::Domain(
                "left derivative is only defined for x >= 1".into(),
            ));
        }
        self.eval(x, t)?.checked_sub(&self.eval(x - 1, t)?)
    }

    /// `C⁺(x;t) = C(x+1;t) - C(x;t)`.
    pub fn right_derivative(&self, x: u64, t: u64) -> Result<ExactValue> {
        self.eval(x + 1, t)?.checked_sub(&self.eval(x, t)?)
    }

    /// Marginal cost of removing the `x`-th unit, extended so that a unit
    /// on an element whose cost is already `+inf` has marginal `+inf` (the
    /// plain derivative would be `inf - inf`).
    pub fn marginal_down(&self, x: u64, t: u64) -> Result<ExactValue> {
        if x == 0 {
            return Err(Error::Domain("no unit to remove at x = 0".into()));
        }
        let hi = self.eval(x, t)?;
        if hi.is_infinite() {
            return Ok(ExactValue::Infinite);
        }
        hi.checked_sub(&self.eval(x - 1, t)?)
    }

    /// Marginal cost of adding a unit at `x`, with the same `+inf` extension
    /// as [`CostFunction::marginal_down`].
    pub fn marginal_up(&self, x: u64, t: u64) -> Result<ExactValue> {
        let lo = self.eval(x, t)?;
        if lo.is_infinite() {
            return Ok(ExactValue::Infinite);
        }
        self.eval(x + 1, t)?.checked_sub(&lo)
    }

    /// Check both regularity inequalities for `1 ≤ x ≤ x_max`,
    /// `0 ≤ t ≤ t_max`. Comparisons whose operands are undefined because the
    /// cost is already `+inf` on both sides (`inf - inf`) are outside the
    /// function's effective domain and skipped; for binary matroid costs,
    /// arguments above 1 are skipped.
    pub fn is_regular(&self, x_max: u64, t_max: u64) -> Result<RegularityCheck> {
        let limit = self.max_argument().unwrap_or(u64::MAX);
        for x in 1..=x_max.min(limit) {
            for t in 0..=t_max {
                let here = self.defined_left_derivative(x, t)?;
                let bumped_t = self.defined_left_derivative(x, t + 1)?;
                if let (Some(a), Some(b)) = (&here, &bumped_t) {
                    if a > b {
                        return Ok(RegularityCheck {
                            holds: false,
                            witness: Some((x, t)),
                            condition: Some(RegularityCondition::MonotoneInParameter),
                        });
                    }
                }
                if x + 1 > limit {
                    continue;
                }
                let bumped_x = self.defined_left_derivative(x + 1, t)?;
                if let (Some(a), Some(b)) = (&bumped_t, &bumped_x) {
                    if a > b {
                        return Ok(RegularityCheck {
                            holds: false,
                            witness: Some((x, t)),
                            condition: Some(RegularityCondition::ShiftDominated),
                        });
                    }
                }
            }
        }
        Ok(RegularityCheck {
            holds: true,
            witness: None,
            condition: None,
        })
    }

    /// Check `C⁻(x;t) ≤ C⁺(x;t)` on `1 ≤ x ≤ x_max`, `0 ≤ t ≤ t_max`,
    /// with the same skipping rules as [`CostFunction::is_regular`].
    pub fn is_discrete_convex(&self, x_max: u64, t_max: u64) -> Result<ConvexityCheck> {
        let limit = self.max_argument().unwrap_or(u64::MAX);
        for x in 1..=x_max.min(limit.saturating_sub(1)) {
            for t in 0..=t_max {
                let left = self.defined_left_derivative(x, t)?;
                let right = self.defined_left_derivative(x + 1, t)?;
                if let (Some(l), Some(r)) = (left, right) {
                    if l > r {
                        return Ok(ConvexityCheck {
                            holds: false,
                            witness: Some((x, t)),
                        });
                    }
                }
            }
        }
        Ok(ConvexityCheck {
            holds: true,
            witness: None,
        })
    }

    /// `C⁻(x;t)`, or `None` when both values are `+inf`.
    fn defined_left_derivative(&self, x: u64, t: u64) -> Result<Option<ExactValue>> {
        let hi = self.eval(x, t)?;
        let lo = self.eval(x - 1, t)?;
        if hi.is_infinite() && lo.is_infinite() {
            return Ok(None);
        }
        hi.checked_sub(&lo).map(Some)
    }
}

impl fmt::Debug for CostFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.kind)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactValue {
        ExactValue::ratio(n, d)
    }

    fn square() -> CostFunction {
        CostFunction::polynomial_int(&[0, 0, 1]).unwrap()
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(square().left_derivative(2, 0).unwrap(), q(3, 1));
        let mm1 = CostFunction::mm1(3).unwrap();
        assert_eq!(mm1.right_derivative(1, 0).unwrap(), q(1, 2));
        assert_eq!(mm1.right_derivative(2, 0).unwrap(), ExactValue::Infinite);
        assert!(matches!(
            mm1.left_derivative(3, 1),
            Err(Error::Arithmetic(_))
        ));
        assert_eq!(mm1.marginal_down(3, 1).unwrap(), ExactValue::Infinite);
        assert!(matches!(
            square().left_derivative(0, 0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn derivative_identity() {
        let c = CostFunction::scaled_congestion(UnaryCost::positive_part(3, -3)).unwrap();
        for x in 0..5 {
            for t in 0..5 {
                assert_eq!(
                    c.right_derivative(x, t).unwrap(),
                    c.left_derivative(x + 1, t).unwrap()
                );
            }
        }
    }

    #[test]
    fn constructor_examples() {
        assert_eq!(CostFunction::mm1(3).unwrap().eval(1, 1).unwrap(), q(1, 1));
        let sc = CostFunction::scaled_congestion(UnaryCost::identity()).unwrap();
        assert_eq!(sc.eval(2, 1).unwrap(), q(6, 1));
        let mb = CostFunction::matroid_binary(UnaryCost::positive_part(3, -3)).unwrap();
        assert_eq!(mb.eval(1, 1).unwrap(), q(3, 1));
        assert_eq!(mb.eval(0, 7).unwrap(), ExactValue::zero());
        assert!(matches!(mb.eval(2, 0), Err(Error::Domain(_))));
        assert!(CostFunction::mm1(0).is_err());
        assert!(CostFunction::polynomial_int(&[0, -1]).is_err());
        // Decreasing and concave coefficient functions are refused.
        assert!(CostFunction::scaled_congestion(UnaryCost::positive_part(-1, 5)).is_err());
        let concave = UnaryCost::Table(vec![q(0, 1), q(2, 1), q(3, 1)]);
        assert!(CostFunction::scaled_congestion(concave.clone()).is_err());
        assert!(CostFunction::matroid_binary(concave).is_ok());
    }

    #[test]
    fn regularity_of_built_in_families() {
        let families = [
            CostFunction::mm1(3).unwrap(),
            CostFunction::mm1(7).unwrap(),
            CostFunction::scaled_congestion(UnaryCost::identity()).unwrap(),
            CostFunction::scaled_congestion(UnaryCost::positive_part(2, -2)).unwrap(),
            CostFunction::scaled_congestion(UnaryCost::Polynomial(vec![
                BigRational::one(),
                BigRational::zero(),
                BigRational::new(1.into(), 2.into()),
            ]))
            .unwrap(),
            CostFunction::matroid_binary(UnaryCost::positive_part(3, -3)).unwrap(),
            CostFunction::matroid_binary(UnaryCost::constant(2)).unwrap(),
            square(),
        ];
        for c in &families {
            let reg = c.is_regular(6, 12).unwrap();
            assert!(reg.holds, "{c:?} not regular: {reg:?}");
            assert!(c.is_discrete_convex(6, 12).unwrap().holds);
        }
    }

    #[test]
    fn table_violating_shift_condition() {
        let c = crate::fixtures::shift_violating_table();
        let check = c.is_regular(1, 0).unwrap();
        assert!(!check.holds);
        assert_eq!(check.witness, Some((1, 0)));
        assert_eq!(check.condition, Some(RegularityCondition::ShiftDominated));
    }

    #[test]
    fn convexity_examples() {
        assert!(square().is_discrete_convex(10, 3).unwrap().holds);
        // 0, 2, 3: a square-root-like concave shape.
        let mut entries = BTreeMap::new();
        for (x, v) in [(0, 0), (1, 2), (2, 3)] {
            entries.insert((x, 0), ExactValue::from_integer(v));
        }
        let c = CostFunction::custom_table(entries, TableFallback::Reject).unwrap();
        let check = c.is_discrete_convex(1, 0).unwrap();
        assert!(!check.holds);
        assert_eq!(check.witness, Some((1, 0)));
    }

    #[test]
    fn table_fallback() {
        let c = CostFunction::custom_table(BTreeMap::new(), TableFallback::Reject).unwrap();
        assert!(matches!(c.eval(0, 0), Err(Error::Domain(_))));
        let neg = BTreeMap::from([((0, 0), ExactValue::from_integer(-1))]);
        assert!(CostFunction::custom_table(neg, TableFallback::Reject).is_err());
    }
}
