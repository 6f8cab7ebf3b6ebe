//! Claim auditor: runs each named claim about `ν` over a ring instance by
//! deterministic enumeration, and reports verdicts with minimal witnesses.
//!
//! A claim [`Fails`](Verdict::Fails) only with a concrete pair whose check
//! can be replayed. Unmet or undecidable hypotheses, and pairs whose values
//! were truncated at `maxLevel`, make a cell
//! [`Inconclusive`](Verdict::Inconclusive) instead.

pub mod claims;
pub mod config;
pub mod report;
pub mod sampler;

use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::exec::Execution;
use crate::filtration::{Filtration, StrongVerdict, ValidationVerdict, DEFAULT_DEPTH};
use crate::ideal::Primality;
use crate::pairs::diagonal_pairs;
use crate::ring::{parse_element, Element, RingDescriptor, RingError};
use crate::valuation::{
    check, check_with_values, nu, AxiomCheckResult, CheckVerdict, Relation, SurjectivityReport,
};
use crate::value::ExtValue;

pub use claims::{catalog, ClaimId, Precondition};
pub use config::{AuditConfig, ConfigError, InstanceSpec};
pub use report::AuditReport;
pub use sampler::{pair_plan, PairPlan, SamplerError, SamplerKind, SamplerSpec};

/// Pairs scanned by [`find_minimal_witness`] before giving up.
pub const WITNESS_SEARCH_CAP: u64 = 10_000_000;

const CHUNK: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("no witness among the first {cap} pairs of a {total}-pair square")]
    BudgetExceeded { cap: u64, total: u128 },
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Clone, Copy)]
pub struct AuditOptions {
    pub validate_depth: usize,
    pub surjectivity_bound: u64,
    pub execution: Execution,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            validate_depth: DEFAULT_DEPTH,
            surjectivity_bound: config::DEFAULT_SURJECTIVITY_BOUND,
            execution: Execution::default(),
        }
    }
}

/// A ring, a filtration on it and a deterministic sample of its elements.
#[derive(Debug, Clone)]
pub struct Instance {
    pub label: String,
    pub filtration: Filtration,
    pub sampler: SamplerSpec,
    pub elements: Vec<Element>,
    pub max_level: usize,
    /// Seed for pair subsampling.
    pub seed: u64,
    pub fingerprint: String,
}

impl Instance {
    pub fn new(
        filtration: Filtration,
        sampler: SamplerSpec,
        max_level: usize,
        seed: u64,
    ) -> Result<Instance, SamplerError> {
        let ring = filtration.ring();
        let elements = sampler.elements(ring)?;
        let label = format!("{ring} {filtration}");
        let sampler_json = serde_json::to_string(&sampler).expect("sampler serializes");
        let digest = Sha256::digest(format!("{label}|{sampler_json}|{max_level}|{seed}"));
        Ok(Instance {
            label,
            filtration,
            seed: sampler.seed.unwrap_or(seed),
            sampler,
            elements,
            max_level,
            fingerprint: hex::encode(&digest[..8]),
        })
    }

    /// Builds instance `index` of a config, reporting errors by JSON pointer.
    pub fn from_spec(
        spec: &InstanceSpec,
        config: &AuditConfig,
        index: usize,
    ) -> Result<Instance, ConfigError> {
        let at = |field: &str| format!("/instances/{index}/{field}");
        let filtration = spec
            .filtration
            .build(spec.ring)
            .map_err(|e| ConfigError::new(at("filtration"), e))?;
        let max_level = spec.max_level.unwrap_or(config.max_level);
        let mut inst = Instance::new(filtration, spec.sampler.clone(), max_level, config.seed)
            .map_err(|e| ConfigError::new(at("sampler"), e))?;
        if let Some(name) = &spec.name {
            inst.label = name.clone();
        }
        Ok(inst)
    }

    pub fn ring(&self) -> RingDescriptor {
        self.filtration.ring()
    }

    pub fn pair_plan(&self) -> PairPlan {
        pair_plan(self.elements.len(), self.sampler.pair_budget(), self.seed)
    }
}

/// A failing pair, reproducible through [`replay_witness`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Witness {
    pub claim: ClaimId,
    pub relation: Relation,
    pub a: String,
    pub b: String,
    pub lhs: ExtValue,
    pub rhs: ExtValue,
    pub instance: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds {
        pairs_tested: u64,
    },
    Fails {
        pairs_tested: u64,
        inconclusive: u64,
        witness: Witness,
    },
    Inconclusive {
        pairs_tested: u64,
        inconclusive: u64,
        reason: String,
    },
}

impl Verdict {
    pub fn status(&self) -> &'static str {
        match self {
            Verdict::Holds { .. } => "holds",
            Verdict::Fails { .. } => "fails",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn pairs_tested(&self) -> u64 {
        match self {
            Verdict::Holds { pairs_tested }
            | Verdict::Fails { pairs_tested, .. }
            | Verdict::Inconclusive { pairs_tested, .. } => *pairs_tested,
        }
    }

    pub fn inconclusive(&self) -> u64 {
        match self {
            Verdict::Holds { .. } => 0,
            Verdict::Fails { inconclusive, .. } | Verdict::Inconclusive { inconclusive, .. } => {
                *inconclusive
            }
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Fails { witness, .. } => Some(witness),
            _ => None,
        }
    }

    fn precondition(reason: String) -> Verdict {
        Verdict::Inconclusive {
            pairs_tested: 0,
            inconclusive: 0,
            reason,
        }
    }
}

enum PairOutcome {
    Holds,
    Inconclusive,
    Fails(AxiomCheckResult),
}

enum Scan {
    Exhausted {
        tested: u64,
        inconclusive: u64,
    },
    Failed {
        tested: u64,
        inconclusive: u64,
        check: AxiomCheckResult,
    },
}

fn evaluate_pair(
    relations: &[Relation],
    inst: &Instance,
    values: &[ExtValue],
    (i, j): (usize, usize),
) -> Result<PairOutcome, RingError> {
    let mut undecided = false;
    for &rel in relations {
        let r = check_with_values(
            &inst.filtration,
            rel,
            &inst.elements[i],
            &inst.elements[j],
            values[i],
            values[j],
            inst.max_level,
        )?;
        match r.verdict {
            CheckVerdict::Fails => return Ok(PairOutcome::Fails(r)),
            CheckVerdict::Inconclusive => undecided = true,
            CheckVerdict::Holds => {}
        }
    }
    Ok(if undecided {
        PairOutcome::Inconclusive
    } else {
        PairOutcome::Holds
    })
}

fn sample_values(inst: &Instance, exec: Execution) -> Result<Vec<ExtValue>, RingError> {
    exec.map(&inst.elements, |e| nu(&inst.filtration, e, inst.max_level))
        .into_iter()
        .collect()
}

/// Evaluates pairs chunk by chunk (each chunk possibly in parallel) and stops
/// after the first chunk holding a failure, reporting the earliest one.
fn scan_pairs(
    claim: ClaimId,
    inst: &Instance,
    values: &[ExtValue],
    pairs: impl Iterator<Item = (usize, usize)>,
    exec: Execution,
) -> Result<Scan, RingError> {
    let relations = claim.relations();
    let mut tested = 0u64;
    let mut inconclusive = 0u64;
    let mut pairs = pairs.peekable();
    let mut chunk = Vec::with_capacity(CHUNK);
    while pairs.peek().is_some() {
        chunk.clear();
        chunk.extend(pairs.by_ref().take(CHUNK));
        let outcomes = exec.map(&chunk, |&p| evaluate_pair(relations, inst, values, p));
        for outcome in outcomes {
            tested += 1;
            match outcome? {
                PairOutcome::Holds => {}
                PairOutcome::Inconclusive => inconclusive += 1,
                PairOutcome::Fails(check) => {
                    return Ok(Scan::Failed {
                        tested,
                        inconclusive,
                        check,
                    })
                }
            }
        }
    }
    Ok(Scan::Exhausted {
        tested,
        inconclusive,
    })
}

fn witness_of(claim: ClaimId, inst: &Instance, check: &AxiomCheckResult) -> Witness {
    Witness {
        claim,
        relation: check.relation,
        a: check.a.to_string(),
        b: check.b.to_string(),
        lhs: check.lhs,
        rhs: check.rhs,
        instance: inst.fingerprint.clone(),
    }
}

/// Checks the claim's hypotheses; `Some(reason)` when they are not certified.
fn unmet_precondition(claim: ClaimId, inst: &Instance, depth: usize) -> Option<String> {
    let f = &inst.filtration;
    if let ValidationVerdict::Fails(v) = f.validate(depth) {
        return Some(format!("filtration fails validation: {v}"));
    }
    match claim.precondition() {
        Precondition::None => None,
        Precondition::Strong => match f.is_strong(depth).expect("validated above").verdict {
            StrongVerdict::Holds => None,
            StrongVerdict::Fails {
                n,
                m,
                unmatched,
                product,
            } => Some(format!(
                "precondition unmet: filtration not strong, R_{n}R_{m} = {product} misses {unmatched}"
            )),
        },
        Precondition::PrimeAdic => {
            let Some(base) = f.adic_base() else {
                return Some("precondition unmet: filtration is not adic".to_string());
            };
            match base.is_prime() {
                Primality::Prime => None,
                Primality::NotPrime { witness: Some((a, b)) } => Some(format!(
                    "precondition unmet: {base} is not prime ({a} * {b} lies in it)"
                )),
                Primality::NotPrime { witness: None } => {
                    Some(format!("precondition unmet: {base} is not prime"))
                }
                Primality::Unknown => Some(format!(
                    "precondition undecided: primality of {base} is unknown"
                )),
            }
        }
    }
}

/// Runs one claim on one instance.
pub fn run_claim(
    claim: ClaimId,
    inst: &Instance,
    opts: &AuditOptions,
) -> Result<Verdict, RingError> {
    if let Some(reason) = unmet_precondition(claim, inst, opts.validate_depth) {
        return Ok(Verdict::precondition(reason));
    }
    let values = sample_values(inst, opts.execution)?;
    if claim == ClaimId::DvSurjective {
        let k = opts.surjectivity_bound.min(inst.max_level as u64);
        let report = SurjectivityReport::from_values(values.iter().copied(), k);
        let tested = values.len() as u64;
        return Ok(if report.missing.is_empty() {
            Verdict::Holds {
                pairs_tested: tested,
            }
        } else {
            let missing: Vec<String> = report.missing.iter().map(u64::to_string).collect();
            Verdict::Inconclusive {
                pairs_tested: tested,
                inconclusive: report.missing.len() as u64,
                reason: format!("values not attained by the sample: {}", missing.join(", ")),
            }
        });
    }
    let plan = inst.pair_plan();
    let pairs = plan.pairs.iter().map(|&(i, j)| (i as usize, j as usize));
    Ok(
        match scan_pairs(claim, inst, &values, pairs, opts.execution)? {
            Scan::Failed {
                tested,
                inconclusive,
                check,
            } => Verdict::Fails {
                pairs_tested: tested,
                inconclusive,
                witness: witness_of(claim, inst, &check),
            },
            Scan::Exhausted {
                tested,
                inconclusive: 0,
            } => Verdict::Holds {
                pairs_tested: tested,
            },
            Scan::Exhausted {
                tested,
                inconclusive,
            } => Verdict::Inconclusive {
                pairs_tested: tested,
                inconclusive,
                reason: format!(
                    "{inconclusive} pairs undecided at maxLevel {}",
                    inst.max_level
                ),
            },
        },
    )
}

/// First failing pair of the full sample square in diagonal order, ignoring
/// the pair budget and the claim's preconditions.
pub fn find_minimal_witness(
    claim: ClaimId,
    inst: &Instance,
    exec: Execution,
) -> Result<Option<Witness>, AuditError> {
    if claim.relations().is_empty() {
        return Ok(None);
    }
    let values = sample_values(inst, exec)?;
    let len = inst.elements.len();
    let total = (len as u128) * (len as u128);
    let pairs = diagonal_pairs(len).take(WITNESS_SEARCH_CAP as usize);
    match scan_pairs(claim, inst, &values, pairs, exec)? {
        Scan::Failed { check, .. } => Ok(Some(witness_of(claim, inst, &check))),
        Scan::Exhausted { .. } if total <= WITNESS_SEARCH_CAP as u128 => Ok(None),
        Scan::Exhausted { .. } => Err(AuditError::BudgetExceeded {
            cap: WITNESS_SEARCH_CAP,
            total,
        }),
    }
}

/// Re-runs the engine check recorded in a witness.
pub fn replay_witness(w: &Witness, inst: &Instance) -> Result<AxiomCheckResult, RingError> {
    let a = parse_element(inst.ring(), &w.a)?;
    let b = parse_element(inst.ring(), &w.b)?;
    check(&inst.filtration, w.relation, &a, &b, inst.max_level)
}

/// Runs every (instance, claim) cell of a config.
pub fn audit(config: &AuditConfig, execution: Execution) -> Result<AuditReport, ConfigError> {
    let started = Instant::now();
    let instances = config
        .instances
        .iter()
        .enumerate()
        .map(|(i, spec)| Instance::from_spec(spec, config, i))
        .collect::<Result<Vec<_>, _>>()?;
    let opts = AuditOptions {
        validate_depth: config.validate_depth,
        surjectivity_bound: config.surjectivity_bound,
        execution,
    };
    let cells: Vec<(usize, ClaimId)> = (0..instances.len())
        .flat_map(|i| config.claims.iter().map(move |&c| (i, c)))
        .collect();
    let results = execution.map(&cells, |&(i, claim)| {
        let t = Instant::now();
        let v = run_claim(claim, &instances[i], &opts);
        (v, t.elapsed())
    });
    let mut verdicts = Vec::with_capacity(results.len());
    let mut cell_micros = Vec::with_capacity(results.len());
    for (&(i, _), (v, elapsed)) in cells.iter().zip(results) {
        let v = v.map_err(|e| ConfigError::new(format!("/instances/{i}"), e))?;
        verdicts.push(v);
        cell_micros.push(elapsed.as_micros() as u64);
    }
    Ok(AuditReport::assemble(
        config,
        &instances,
        &opts,
        &cells,
        verdicts,
        cell_micros,
        started.elapsed().as_micros() as u64,
    ))
}
