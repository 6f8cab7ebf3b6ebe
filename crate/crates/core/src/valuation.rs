//! The map `ν(α) = min{ i : α ∈ R_i ∖ R_{i+1} }` induced by a filtration,
//! and checks of the valuation axioms on element pairs.
//!
//! `ν(0)` is `Infinity`, as is `ν(α)` for any `α` shown to lie in every level
//! (via a stabilization index). When the search reaches `max_level` without
//! such a proof the result is `AtLeast(max_level)`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::filtration::Filtration;
use crate::pairs::diagonal_pairs;
use crate::ring::{Element, RingError};
use crate::value::ExtValue;

pub const DEFAULT_MAX_LEVEL: usize = 64;

/// Computes `ν(a)` searching levels `1..=max_level`.
pub fn nu(f: &Filtration, a: &Element, max_level: usize) -> Result<ExtValue, RingError> {
    if a.ring() != f.ring() {
        return Err(RingError::RingMismatch {
            left: f.ring(),
            right: a.ring(),
        });
    }
    if a.is_zero() {
        return Ok(ExtValue::Infinity);
    }
    let max_level = max_level.max(1);
    for i in 0..max_level {
        if !f.level(i + 1).contains(a)? {
            return Ok(ExtValue::Finite(i as u64));
        }
        if f.known_stable_from().is_some_and(|s| s <= i + 1) {
            return Ok(ExtValue::Infinity);
        }
    }
    Ok(ExtValue::AtLeast(max_level as u64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Relation {
    /// `ν(ab) >= ν(a) + ν(b)`
    #[serde(rename = "superadditive")]
    SuperAdditive,
    /// `ν(a+b) >= min(ν(a), ν(b))`
    #[serde(rename = "minInequality")]
    MinInequality,
    /// `ν(ab) = ν(a) + ν(b)`
    #[serde(rename = "additive")]
    Additive,
    /// `ν(ab) = ∞` forces `ν(a) = ∞` or `ν(b) = ∞`
    #[serde(rename = "infPreimagePrime")]
    InfPreimagePrime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum CheckVerdict {
    Holds,
    Fails,
    Inconclusive,
}

impl CheckVerdict {
    fn from_decision(d: Option<bool>) -> Self {
        match d {
            Some(true) => CheckVerdict::Holds,
            Some(false) => CheckVerdict::Fails,
            None => CheckVerdict::Inconclusive,
        }
    }
}

/// One axiom evaluated on one pair. For [`Relation::InfPreimagePrime`] the
/// sides are `ν(ab)` and `ν(a) + ν(b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomCheckResult {
    pub a: Element,
    pub b: Element,
    pub lhs: ExtValue,
    pub rhs: ExtValue,
    pub relation: Relation,
    pub verdict: CheckVerdict,
}

/// Membership in `ν^{-1}(∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfMembership {
    Yes,
    No,
    Unknown,
}

impl From<ExtValue> for InfMembership {
    fn from(v: ExtValue) -> Self {
        match v {
            ExtValue::Infinity => InfMembership::Yes,
            ExtValue::Finite(_) => InfMembership::No,
            ExtValue::AtLeast(_) => InfMembership::Unknown,
        }
    }
}

/// Evaluates `relation` on `(a, b)` given already computed `ν(a)`, `ν(b)`.
pub fn check_with_values(
    f: &Filtration,
    relation: Relation,
    a: &Element,
    b: &Element,
    nu_a: ExtValue,
    nu_b: ExtValue,
    max_level: usize,
) -> Result<AxiomCheckResult, RingError> {
    let (lhs, rhs, verdict) = match relation {
        Relation::SuperAdditive => {
            let lhs = nu(f, &a.mul(b)?, max_level)?;
            let rhs = nu_a + nu_b;
            (lhs, rhs, CheckVerdict::from_decision(lhs.decide_ge(rhs)))
        }
        Relation::MinInequality => {
            let lhs = nu(f, &a.add(b)?, max_level)?;
            let rhs = nu_a.min(nu_b);
            (lhs, rhs, CheckVerdict::from_decision(lhs.decide_ge(rhs)))
        }
        Relation::Additive => {
            let lhs = nu(f, &a.mul(b)?, max_level)?;
            let rhs = nu_a + nu_b;
            (lhs, rhs, CheckVerdict::from_decision(lhs.decide_eq(rhs)))
        }
        Relation::InfPreimagePrime => {
            let lhs = nu(f, &a.mul(b)?, max_level)?;
            let verdict = match (
                InfMembership::from(lhs),
                InfMembership::from(nu_a),
                InfMembership::from(nu_b),
            ) {
                (InfMembership::No, _, _) => CheckVerdict::Holds,
                (_, InfMembership::Yes, _) | (_, _, InfMembership::Yes) => CheckVerdict::Holds,
                (InfMembership::Yes, InfMembership::No, InfMembership::No) => CheckVerdict::Fails,
                _ => CheckVerdict::Inconclusive,
            };
            (lhs, nu_a + nu_b, verdict)
        }
    };
    Ok(AxiomCheckResult {
        a: a.clone(),
        b: b.clone(),
        lhs,
        rhs,
        relation,
        verdict,
    })
}

pub fn check(
    f: &Filtration,
    relation: Relation,
    a: &Element,
    b: &Element,
    max_level: usize,
) -> Result<AxiomCheckResult, RingError> {
    let nu_a = nu(f, a, max_level)?;
    let nu_b = nu(f, b, max_level)?;
    check_with_values(f, relation, a, b, nu_a, nu_b, max_level)
}

pub fn check_superadditive(
    f: &Filtration,
    a: &Element,
    b: &Element,
    max_level: usize,
) -> Result<AxiomCheckResult, RingError> {
    check(f, Relation::SuperAdditive, a, b, max_level)
}

pub fn check_min_inequality(
    f: &Filtration,
    a: &Element,
    b: &Element,
    max_level: usize,
) -> Result<AxiomCheckResult, RingError> {
    check(f, Relation::MinInequality, a, b, max_level)
}

pub fn check_additive(
    f: &Filtration,
    a: &Element,
    b: &Element,
    max_level: usize,
) -> Result<AxiomCheckResult, RingError> {
    check(f, Relation::Additive, a, b, max_level)
}

pub fn is_in_inf_preimage(
    f: &Filtration,
    a: &Element,
    max_level: usize,
) -> Result<InfMembership, RingError> {
    Ok(nu(f, a, max_level)?.into())
}

/// Result of scanning a set of pairs for the first failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScanOutcome {
    Holds {
        pairs_tested: u64,
    },
    Fails {
        pairs_tested: u64,
        inconclusive: u64,
        witness: AxiomCheckResult,
    },
    Inconclusive {
        pairs_tested: u64,
        inconclusive: u64,
    },
}

/// Searches `sample × sample` in diagonal order for `a, b ∉ ν^{-1}(∞)` with
/// `ab ∈ ν^{-1}(∞)`.
pub fn check_inf_preimage_prime(
    f: &Filtration,
    sample: &[Element],
    max_level: usize,
) -> Result<ScanOutcome, RingError> {
    let values = sample
        .iter()
        .map(|e| nu(f, e, max_level))
        .collect::<Result<Vec<_>, _>>()?;
    let mut inconclusive = 0;
    let mut tested = 0;
    for (i, j) in diagonal_pairs(sample.len()) {
        tested += 1;
        let r = check_with_values(
            f,
            Relation::InfPreimagePrime,
            &sample[i],
            &sample[j],
            values[i],
            values[j],
            max_level,
        )?;
        match r.verdict {
            CheckVerdict::Holds => {}
            CheckVerdict::Inconclusive => inconclusive += 1,
            CheckVerdict::Fails => {
                return Ok(ScanOutcome::Fails {
                    pairs_tested: tested,
                    inconclusive,
                    witness: r,
                })
            }
        }
    }
    Ok(if inconclusive > 0 {
        ScanOutcome::Inconclusive {
            pairs_tested: tested,
            inconclusive,
        }
    } else {
        ScanOutcome::Holds {
            pairs_tested: tested,
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurjectivityReport {
    pub attained: BTreeSet<u64>,
    pub missing: BTreeSet<u64>,
}

impl SurjectivityReport {
    pub fn from_values(values: impl IntoIterator<Item = ExtValue>, k: u64) -> Self {
        let attained: BTreeSet<u64> = values
            .into_iter()
            .filter_map(ExtValue::finite)
            .filter(|&v| v <= k)
            .collect();
        let missing = (0..=k).filter(|v| !attained.contains(v)).collect();
        SurjectivityReport { attained, missing }
    }
}

/// Which of `0..=k` are attained by `ν` on `sample`. Diagnostic only.
pub fn surjectivity_report(
    f: &Filtration,
    sample: &[Element],
    k: u64,
    max_level: usize,
) -> Result<SurjectivityReport, RingError> {
    let values = sample
        .iter()
        .map(|e| nu(f, e, max_level))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SurjectivityReport::from_values(values, k))
}
