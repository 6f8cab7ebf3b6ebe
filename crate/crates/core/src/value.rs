//! Extended valuation values: finite levels, a proven infinity, and the
//! honest "at least N" produced when a bounded search runs out of levels.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtValue {
    #[serde(rename = "finite")]
    Finite(u64),
    #[serde(rename = "infinity")]
    Infinity,
    /// The true value is some unknown element of `{N, N+1, ...} ∪ {∞}`.
    #[serde(rename = "atLeast")]
    AtLeast(u64),
}

impl ExtValue {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtValue::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtValue::Finite(k) => Some(k),
            _ => None,
        }
    }

    /// Decides `self >= rhs` for the true values behind both sides, or
    /// `None` when an `AtLeast` bound leaves it open.
    pub fn decide_ge(self, rhs: ExtValue) -> Option<bool> {
        use ExtValue::*;
        match (self, rhs) {
            (Infinity, _) => Some(true),
            (Finite(_), Infinity) => Some(false),
            (Finite(a), Finite(b)) => Some(a >= b),
            (Finite(a), AtLeast(n)) => (a < n).then_some(false),
            (AtLeast(n), Finite(b)) => (n >= b).then_some(true),
            (AtLeast(_), Infinity | AtLeast(_)) => None,
        }
    }

    /// Decides `self == rhs` for the true values, or `None` when undecidable.
    pub fn decide_eq(self, rhs: ExtValue) -> Option<bool> {
        use ExtValue::*;
        match (self, rhs) {
            (Finite(a), Finite(b)) => Some(a == b),
            (Infinity, Infinity) => Some(true),
            (Finite(_), Infinity) | (Infinity, Finite(_)) => Some(false),
            (Finite(a), AtLeast(n)) | (AtLeast(n), Finite(a)) => (a < n).then_some(false),
            (AtLeast(_), Infinity | AtLeast(_)) | (Infinity, AtLeast(_)) => None,
        }
    }

    /// Minimum of the true values, as tight as the bounds allow.
    pub fn min(self, other: ExtValue) -> ExtValue {
        use ExtValue::*;
        match (self, other) {
            (Infinity, x) | (x, Infinity) => x,
            (Finite(a), Finite(b)) => Finite(a.min(b)),
            (Finite(a), AtLeast(n)) | (AtLeast(n), Finite(a)) => {
                if a < n {
                    Finite(a)
                } else {
                    AtLeast(n)
                }
            }
            (AtLeast(a), AtLeast(b)) => AtLeast(a.min(b)),
        }
    }
}

impl Add for ExtValue {
    type Output = ExtValue;

    fn add(self, rhs: ExtValue) -> ExtValue {
        use ExtValue::*;
        match (self, rhs) {
            (Infinity, _) | (_, Infinity) => Infinity,
            (Finite(a), Finite(b)) => Finite(a + b),
            (AtLeast(a), Finite(b)) | (Finite(b), AtLeast(a)) => AtLeast(a + b),
            (AtLeast(a), AtLeast(b)) => AtLeast(a + b),
        }
    }
}

impl PartialOrd for ExtValue {
    /// Finite values order numerically, `Finite(k) < AtLeast(N)` for
    /// `k < N`, and everything else sits below `Infinity`. Pairs whose
    /// order depends on the unknown value behind `AtLeast` are incomparable.
    fn partial_cmp(&self, other: &ExtValue) -> Option<Ordering> {
        use ExtValue::*;
        match (*self, *other) {
            (a, b) if a == b => Some(Ordering::Equal),
            (Infinity, _) => Some(Ordering::Greater),
            (_, Infinity) => Some(Ordering::Less),
            (Finite(a), Finite(b)) => Some(a.cmp(&b)),
            (Finite(k), AtLeast(n)) => (k < n).then_some(Ordering::Less),
            (AtLeast(n), Finite(k)) => (k < n).then_some(Ordering::Greater),
            (AtLeast(_), AtLeast(_)) => None,
        }
    }
}

impl fmt::Display for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtValue::Finite(k) => write!(f, "{k}"),
            ExtValue::Infinity => write!(f, "infinity"),
            ExtValue::AtLeast(n) => write!(f, ">={n}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::ExtValue::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ordering_rules() {
        assert!(Finite(2) < Finite(3));
        assert!(Finite(2) < AtLeast(3));
        assert_eq!(Finite(3).partial_cmp(&AtLeast(3)), None);
        assert!(AtLeast(64) < Infinity);
        assert!(Finite(1000) < Infinity);
        assert_eq!(AtLeast(3).partial_cmp(&AtLeast(4)), None);
    }

    #[test]
    fn addition_rules() {
        assert_eq!(Finite(2) + Finite(3), Finite(5));
        assert_eq!(Infinity + Finite(3), Infinity);
        assert_eq!(AtLeast(4) + Finite(3), AtLeast(7));
        assert_eq!(AtLeast(4) + AtLeast(3), AtLeast(7));
        assert_eq!(Infinity + AtLeast(3), Infinity);
    }

    #[test]
    fn decisions() {
        assert_eq!(Finite(1).decide_ge(Finite(0)), Some(true));
        assert_eq!(Finite(1).decide_ge(Infinity), Some(false));
        assert_eq!(AtLeast(5).decide_ge(Finite(3)), Some(true));
        assert_eq!(AtLeast(5).decide_ge(Finite(7)), None);
        assert_eq!(Finite(2).decide_ge(AtLeast(3)), Some(false));
        assert_eq!(AtLeast(5).decide_ge(Infinity), None);
        assert_eq!(Infinity.decide_eq(Finite(2)), Some(false));
        assert_eq!(AtLeast(3).decide_eq(Finite(2)), Some(false));
        assert_eq!(AtLeast(3).decide_eq(Finite(4)), None);
    }

    #[test]
    fn json_forms() {
        assert_eq!(
            serde_json::to_string(&Finite(3)).unwrap(),
            r#"{"finite":3}"#
        );
        assert_eq!(serde_json::to_string(&Infinity).unwrap(), r#""infinity""#);
        assert_eq!(
            serde_json::to_string(&AtLeast(64)).unwrap(),
            r#"{"atLeast":64}"#
        );
    }

    /// Concrete values an `ExtValue` may stand for, truncated at `cap`
    /// (`None` = infinity).
    fn realizations(v: ExtValue, cap: u64) -> Vec<Option<u64>> {
        match v {
            Finite(k) => vec![Some(k)],
            Infinity => vec![None],
            AtLeast(n) => (n..cap).map(Some).chain([None]).collect(),
        }
    }

    fn ext() -> impl Strategy<Value = ExtValue> {
        prop_oneof![
            (0u64..12).prop_map(Finite),
            Just(Infinity),
            (1u64..12).prop_map(AtLeast),
        ]
    }

    proptest! {
        /// A decided comparison must agree with every concrete realization.
        #[test]
        fn decisions_are_sound(a in ext(), b in ext()) {
            let ge = |x: Option<u64>, y: Option<u64>| match (x, y) {
                (None, _) => true,
                (Some(_), None) => false,
                (Some(x), Some(y)) => x >= y,
            };
            for x in realizations(a, 30) {
                for y in realizations(b, 30) {
                    if let Some(d) = a.decide_ge(b) {
                        prop_assert_eq!(d, ge(x, y));
                    }
                    if let Some(d) = a.decide_eq(b) {
                        prop_assert_eq!(d, x == y);
                    }
                }
            }
        }

        #[test]
        fn min_is_a_sound_bound(a in ext(), b in ext()) {
            let m = a.min(b);
            for x in realizations(a, 30) {
                for y in realizations(b, 30) {
                    let real = match (x, y) {
                        (None, y) => y,
                        (x, None) => x,
                        (Some(x), Some(y)) => Some(x.min(y)),
                    };
                    let ok = match (m, real) {
                        (Finite(k), r) => r == Some(k),
                        (Infinity, r) => r.is_none(),
                        (AtLeast(n), r) => r.is_none_or(|r| r >= n),
                    };
                    prop_assert!(ok, "{:?} min {:?} = {:?} vs {:?}", a, b, m, real);
                }
            }
        }
    }
}
