use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::valuation::Relation;

/// A falsifiable statement about the map `ν` of a filtration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClaimId {
    QvSuperadd,
    QvMin,
    QvExists,
    ValStrong,
    ValPrimeAdic,
    NuclosedStrong,
    NuclosedPrimeAdic,
    DvSurjective,
}

/// Hypothesis a claim needs before its pair check is meaningful.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precondition {
    None,
    /// `R_n R_m = R_{n+m}` up to the validation depth.
    Strong,
    /// Adic filtration over a prime ideal.
    PrimeAdic,
}

impl ClaimId {
    pub const ALL: [ClaimId; 8] = [
        ClaimId::QvSuperadd,
        ClaimId::QvMin,
        ClaimId::QvExists,
        ClaimId::ValStrong,
        ClaimId::ValPrimeAdic,
        ClaimId::NuclosedStrong,
        ClaimId::NuclosedPrimeAdic,
        ClaimId::DvSurjective,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClaimId::QvSuperadd => "QV_SUPERADD",
            ClaimId::QvMin => "QV_MIN",
            ClaimId::QvExists => "QV_EXISTS",
            ClaimId::ValStrong => "VAL_STRONG",
            ClaimId::ValPrimeAdic => "VAL_PRIME_ADIC",
            ClaimId::NuclosedStrong => "NUCLOSED_STRONG",
            ClaimId::NuclosedPrimeAdic => "NUCLOSED_PRIME_ADIC",
            ClaimId::DvSurjective => "DV_SURJECTIVE",
        }
    }

    /// Kind of statement and a short anchor for the claim catalog.
    pub fn anchor(self) -> (&'static str, &'static str) {
        match self {
            ClaimId::QvSuperadd => ("Lemma", "v(ab) >= v(a)+v(b)"),
            ClaimId::QvMin => ("Lemma", "v(a+b) >= min{v(a),v(b)}"),
            ClaimId::QvExists => ("Theorem", "filtered ring => quasi valuation"),
            ClaimId::ValStrong => ("Proposition", "strong filtration => v(ab) = v(a)+v(b)"),
            ClaimId::ValPrimeAdic => ("Proposition", "be P-adic filtration"),
            ClaimId::NuclosedStrong => ("Proposition", "strong filtration => v^-1(inf) prime"),
            ClaimId::NuclosedPrimeAdic => ("Proposition", "P-adic filtration => v^-1(inf) prime"),
            ClaimId::DvSurjective => ("Definition", "discrete valuation: v onto 0..K"),
        }
    }

    /// Pair relations checked, in the order they are tried. Empty for the
    /// sample-level surjectivity diagnostic.
    pub fn relations(self) -> &'static [Relation] {
        match self {
            ClaimId::QvSuperadd => &[Relation::SuperAdditive],
            ClaimId::QvMin => &[Relation::MinInequality],
            ClaimId::QvExists => &[Relation::SuperAdditive, Relation::MinInequality],
            ClaimId::ValStrong | ClaimId::ValPrimeAdic => &[Relation::Additive],
            ClaimId::NuclosedStrong | ClaimId::NuclosedPrimeAdic => &[Relation::InfPreimagePrime],
            ClaimId::DvSurjective => &[],
        }
    }

    pub fn precondition(self) -> Precondition {
        match self {
            ClaimId::ValStrong | ClaimId::NuclosedStrong => Precondition::Strong,
            ClaimId::ValPrimeAdic | ClaimId::NuclosedPrimeAdic => Precondition::PrimeAdic,
            _ => Precondition::None,
        }
    }

    /// Claims that are unconditional theorems for any valid filtration.
    pub fn is_theorem(self) -> bool {
        matches!(
            self,
            ClaimId::QvSuperadd | ClaimId::QvMin | ClaimId::QvExists
        )
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClaimId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        ClaimId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown claim {s:?}"))
    }
}

/// One catalog line per claim.
pub fn catalog() -> Vec<String> {
    ClaimId::ALL
        .iter()
        .map(|c| {
            let (kind, anchor) = c.anchor();
            format!("{c}  {kind}: \"{anchor}\"")
        })
        .collect()
}
