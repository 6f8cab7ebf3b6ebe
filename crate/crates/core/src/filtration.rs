//! Descending ideal filtrations `R = R_0 ⊇ R_1 ⊇ ...`, either `I`-adic or
//! given by an explicit chain whose last level repeats forever.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ideal::{Ideal, IdealError, IdealPowerCache};
use crate::ring::{Element, RingDescriptor, RingError};

/// Depth used by `validate` / `is_strong` when none is given.
pub const DEFAULT_DEPTH: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiltrationError {
    #[error("chain is empty")]
    EmptyChain,
    #[error("level 0 of a chain must be the unit ideal, got {0}")]
    FirstLevelNotUnit(Ideal),
    #[error("filtration validated only to depth {validated}, strongness requested to {requested}")]
    NotValidated { requested: usize, validated: usize },
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiltrationWarning {
    /// `adic` of the unit ideal: every level is `R` and `ν` is identically 0
    /// away from zero.
    UnitIdeal,
}

#[derive(Debug, Clone)]
pub enum FiltrationKind {
    Adic(IdealPowerCache),
    /// `level(n) = chain[min(n, len - 1)]`.
    Explicit(Vec<Ideal>),
}

#[derive(Debug)]
pub struct Filtration {
    ring: RingDescriptor,
    kind: FiltrationKind,
    warning: Option<FiltrationWarning>,
    validated_to: AtomicUsize,
}

impl Clone for Filtration {
    fn clone(&self) -> Self {
        Filtration {
            ring: self.ring,
            kind: self.kind.clone(),
            warning: self.warning,
            validated_to: AtomicUsize::new(self.validated_to.load(Ordering::Relaxed)),
        }
    }
}

/// Which filtration axiom a check refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Condition {
    /// `R_0 = R`
    #[serde(rename = "i")]
    UnitBase,
    /// `R_{n+1} ⊆ R_n`
    #[serde(rename = "ii")]
    Descending,
    /// `R_n R_m ⊆ R_{n+m}`
    #[serde(rename = "iii")]
    Multiplicative,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::UnitBase => "i",
            Condition::Descending => "ii",
            Condition::Multiplicative => "iii",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation {
    pub condition: Condition,
    pub n: usize,
    /// Second index for the multiplicative condition.
    pub m: Option<usize>,
    /// Generator of the smaller side that escapes the larger one.
    pub offending: Element,
    pub target: Ideal,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "condition {} at n={}", self.condition, self.n)?;
        if let Some(m) = self.m {
            write!(f, ", m={m}")?;
        }
        write!(f, ": {} not in {}", self.offending, self.target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationVerdict {
    Holds { depth: usize },
    Fails(AxiomViolation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrongVerdict {
    Holds,
    /// `level(n)·level(m)` is strictly smaller than `level(n+m)`; `unmatched`
    /// generates `level(n+m)` but is not in the product.
    Fails {
        n: usize,
        m: usize,
        unmatched: Element,
        product: Ideal,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongnessReport {
    pub checked_depth: usize,
    pub verdict: StrongVerdict,
}

impl Filtration {
    /// The `I`-adic filtration `level(n) = I^n`. The unit ideal is accepted
    /// but flagged with [`FiltrationWarning::UnitIdeal`].
    pub fn adic(base: Ideal) -> Filtration {
        let warning = base.is_unit().then_some(FiltrationWarning::UnitIdeal);
        Filtration {
            ring: base.ring(),
            kind: FiltrationKind::Adic(IdealPowerCache::new(base)),
            warning,
            validated_to: AtomicUsize::new(0),
        }
    }

    pub fn explicit(chain: Vec<Ideal>) -> Result<Filtration, FiltrationError> {
        let first = chain.first().ok_or(FiltrationError::EmptyChain)?;
        let ring = first.ring();
        if let Some(bad) = chain.iter().find(|i| i.ring() != ring) {
            return Err(RingError::RingMismatch {
                left: ring,
                right: bad.ring(),
            }
            .into());
        }
        if !first.is_unit() {
            return Err(FiltrationError::FirstLevelNotUnit(first.clone()));
        }
        Ok(Filtration {
            ring,
            kind: FiltrationKind::Explicit(chain),
            warning: None,
            validated_to: AtomicUsize::new(0),
        })
    }

    pub fn ring(&self) -> RingDescriptor {
        self.ring
    }

    pub fn kind(&self) -> &FiltrationKind {
        &self.kind
    }

    pub fn warning(&self) -> Option<FiltrationWarning> {
        self.warning
    }

    /// Base ideal of an adic filtration.
    pub fn adic_base(&self) -> Option<&Ideal> {
        match &self.kind {
            FiltrationKind::Adic(cache) => Some(cache.base()),
            FiltrationKind::Explicit(_) => None,
        }
    }

    pub fn level(&self, n: usize) -> Ideal {
        match &self.kind {
            FiltrationKind::Adic(cache) => cache.pow(n),
            FiltrationKind::Explicit(chain) => chain[n.min(chain.len() - 1)].clone(),
        }
    }

    /// An index `s` already known to satisfy `level(t) = level(s)` for every
    /// `t >= s`. Adic filtrations learn this lazily as powers are computed.
    pub fn known_stable_from(&self) -> Option<usize> {
        match &self.kind {
            FiltrationKind::Adic(cache) => cache.stabilized_at(),
            FiltrationKind::Explicit(chain) => Some(explicit_tail_start(chain)),
        }
    }

    /// Least `s <= max` from which the filtration is constant.
    ///
    /// For an adic filtration this is the first `s` with `I^s = I^(s+1)`.
    /// For an explicit chain it is the start of the constant tail, which can
    /// differ from the first repeated pair when the chain plateaus and then
    /// drops again.
    pub fn stabilization_index(&self, max: usize) -> Option<usize> {
        match &self.kind {
            FiltrationKind::Adic(cache) => cache.stabilization_within(max),
            FiltrationKind::Explicit(chain) => {
                Some(explicit_tail_start(chain)).filter(|&s| s <= max)
            }
        }
    }

    pub fn validated_to(&self) -> usize {
        self.validated_to.load(Ordering::Acquire)
    }

    /// Checks `R_0 = R`, `R_{n+1} ⊆ R_n` and `R_n R_m ⊆ R_{n+m}` for all
    /// `n + m <= depth`, on generators.
    pub fn validate(&self, depth: usize) -> ValidationVerdict {
        let depth = depth.max(1);
        let levels: Vec<Ideal> = (0..=depth).map(|n| self.level(n)).collect();
        if !levels[0].is_unit() {
            return ValidationVerdict::Fails(AxiomViolation {
                condition: Condition::UnitBase,
                n: 0,
                m: None,
                offending: self.ring.one(),
                target: levels[0].clone(),
            });
        }
        for n in 0..depth {
            let (upper, lower) = (&levels[n], &levels[n + 1]);
            if !lower.is_subset_of(upper).expect("same ring") {
                return ValidationVerdict::Fails(AxiomViolation {
                    condition: Condition::Descending,
                    n,
                    m: None,
                    offending: lower.generator().clone(),
                    target: upper.clone(),
                });
            }
        }
        for n in 0..=depth {
            for m in 0..=depth - n {
                let product = levels[n].mul(&levels[m]).expect("same ring");
                if !product.is_subset_of(&levels[n + m]).expect("same ring") {
                    return ValidationVerdict::Fails(AxiomViolation {
                        condition: Condition::Multiplicative,
                        n,
                        m: Some(m),
                        offending: product.generator().clone(),
                        target: levels[n + m].clone(),
                    });
                }
            }
        }
        self.validated_to.fetch_max(depth, Ordering::AcqRel);
        ValidationVerdict::Holds { depth }
    }

    /// Checks `R_n R_m = R_{n+m}` for all `n + m <= depth`. Requires a prior
    /// successful [`Filtration::validate`] to at least `depth`.
    pub fn is_strong(&self, depth: usize) -> Result<StrongnessReport, FiltrationError> {
        let validated = self.validated_to();
        if validated < depth {
            return Err(FiltrationError::NotValidated {
                requested: depth,
                validated,
            });
        }
        let levels: Vec<Ideal> = (0..=depth).map(|n| self.level(n)).collect();
        for n in 0..=depth {
            for m in 0..=depth - n {
                let product = levels[n].mul(&levels[m]).expect("same ring");
                let target = &levels[n + m];
                if !target.is_subset_of(&product).expect("same ring") {
                    return Ok(StrongnessReport {
                        checked_depth: depth,
                        verdict: StrongVerdict::Fails {
                            n,
                            m,
                            unmatched: target.generator().clone(),
                            product,
                        },
                    });
                }
            }
        }
        Ok(StrongnessReport {
            checked_depth: depth,
            verdict: StrongVerdict::Holds,
        })
    }
}

fn explicit_tail_start(chain: &[Ideal]) -> usize {
    let last = chain.last().expect("nonempty chain");
    chain
        .iter()
        .rposition(|i| !i.same_as(last).expect("same ring"))
        .map_or(0, |p| p + 1)
}

impl fmt::Display for Filtration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FiltrationKind::Adic(cache) => write!(f, "adic {}", cache.base()),
            FiltrationKind::Explicit(chain) => {
                write!(f, "chain [")?;
                for (i, id) in chain.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{id}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// Serialized form of a filtration: `{"type": "adic", "ideal": ["2"]}` or
/// `{"type": "explicit", "chain": [["1"], ["2"], ["4"]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum FiltrationSpec {
    Adic { ideal: Vec<String> },
    Explicit { chain: Vec<Vec<String>> },
}

impl FiltrationSpec {
    pub fn build(&self, ring: RingDescriptor) -> Result<Filtration, FiltrationError> {
        match self {
            FiltrationSpec::Adic { ideal } => Ok(Filtration::adic(Ideal::parse(ring, ideal)?)),
            FiltrationSpec::Explicit { chain } => Filtration::explicit(
                chain
                    .iter()
                    .map(|gens| Ideal::parse(ring, gens))
                    .collect::<Result<_, _>>()?,
            ),
        }
    }
}
