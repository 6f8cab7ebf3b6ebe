//! Deterministic element samples and the pair plans drawn from them.

use std::collections::HashSet;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pairs::{diagonal_key, diagonal_pairs};
use crate::ring::{parse_element, Element, RingDescriptor, RingError, RingKind};

pub const DEFAULT_PAIR_BUDGET: u64 = 1_000_000;
pub const MAX_SAMPLE_SIZE: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SamplerError {
    #[error("exhaustiveResidues needs a Zmod ring, got {0}")]
    NotResidueRing(RingDescriptor),
    #[error("boundedPolys needs a polynomial ring, got {0}")]
    NotPolynomialRing(RingDescriptor),
    #[error("sample would have {0} elements, more than the limit {MAX_SAMPLE_SIZE}")]
    TooLarge(u128),
    #[error("coefficient pool is empty")]
    EmptyPool,
    #[error("coefficient {0:?} is not a constant")]
    NonConstantCoefficient(String),
    #[error("pairBudget must be positive")]
    ZeroBudget,
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(
    tag = "kind",
    rename_all = "camelCase",
    rename_all_fields = "camelCase"
)]
pub enum SamplerKind {
    /// Every residue `0, 1, ..., n-1` of `Z/n`.
    ExhaustiveResidues,
    /// `0, 1, -1, 2, -2, ..., bound, -bound`, mapped into the ring.
    BoundedIntegers { bound: u64 },
    /// Every polynomial of degree `<= max_degree` with coefficients from the
    /// pool, counted with the constant coefficient varying fastest.
    BoundedPolys {
        max_degree: usize,
        coefficients: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SamplerSpec {
    #[serde(flatten)]
    pub kind: SamplerKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair_budget: Option<u64>,
    /// Overrides the audit seed for subsampling.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl SamplerSpec {
    pub fn new(kind: SamplerKind) -> Self {
        SamplerSpec {
            kind,
            pair_budget: None,
            seed: None,
        }
    }

    pub fn pair_budget(&self) -> u64 {
        self.pair_budget.unwrap_or(DEFAULT_PAIR_BUDGET)
    }

    /// The sample, in enumeration order, with later duplicates dropped.
    pub fn elements(&self, ring: RingDescriptor) -> Result<Vec<Element>, SamplerError> {
        if self.pair_budget == Some(0) {
            return Err(SamplerError::ZeroBudget);
        }
        let raw: Vec<Element> = match &self.kind {
            SamplerKind::ExhaustiveResidues => {
                let RingKind::ZmodN { n } = ring.kind() else {
                    return Err(SamplerError::NotResidueRing(ring));
                };
                if n > MAX_SAMPLE_SIZE {
                    return Err(SamplerError::TooLarge(n as u128));
                }
                (0..n)
                    .map(|r| Element::from_bigint(ring, &BigInt::from(r)))
                    .collect()
            }
            SamplerKind::BoundedIntegers { bound } => {
                let size = 2 * *bound as u128 + 1;
                if size > MAX_SAMPLE_SIZE as u128 {
                    return Err(SamplerError::TooLarge(size));
                }
                integer_order(*bound as i64)
                    .map(|v| Element::from_int(ring, v))
                    .collect()
            }
            SamplerKind::BoundedPolys {
                max_degree,
                coefficients,
            } => {
                if !ring.is_polynomial() {
                    return Err(SamplerError::NotPolynomialRing(ring));
                }
                if coefficients.is_empty() {
                    return Err(SamplerError::EmptyPool);
                }
                let pool = coefficients
                    .iter()
                    .map(|s| {
                        let c = parse_element(ring, s)?;
                        if c.degree().unwrap_or(0) > 0 {
                            return Err(SamplerError::NonConstantCoefficient(s.clone()));
                        }
                        Ok(c)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let size = (pool.len() as u128)
                    .checked_pow(*max_degree as u32 + 1)
                    .unwrap_or(u128::MAX);
                if size > MAX_SAMPLE_SIZE as u128 {
                    return Err(SamplerError::TooLarge(size));
                }
                bounded_polys(ring, &pool, *max_degree, size as usize)
            }
        };
        let mut seen = HashSet::with_capacity(raw.len());
        Ok(raw.into_iter().filter(|e| seen.insert(e.clone())).collect())
    }
}

/// `0, 1, -1, 2, -2, ..., bound, -bound`.
pub fn integer_order(bound: i64) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=bound).flat_map(|k| [k, -k]))
}

fn bounded_polys(
    ring: RingDescriptor,
    pool: &[Element],
    max_degree: usize,
    count: usize,
) -> Vec<Element> {
    let x = ring.var().expect("polynomial ring");
    let powers: Vec<Element> = (0..=max_degree as u64).map(|d| x.pow(d)).collect();
    (0..count)
        .map(|mut idx| {
            let mut acc = ring.zero();
            for power in &powers {
                let c = &pool[idx % pool.len()];
                idx /= pool.len();
                acc = acc
                    .add(&c.mul(power).expect("same ring"))
                    .expect("same ring");
            }
            acc
        })
        .collect()
}

/// Pairs of sample indices to evaluate, in diagonal order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairPlan {
    pub pairs: Vec<(u32, u32)>,
    /// True when `pairs` is the whole square.
    pub exhaustive: bool,
}

/// The full square when it fits in `budget`, otherwise `budget` distinct
/// pairs drawn with a seeded generator, sorted into diagonal order.
pub fn pair_plan(len: usize, budget: u64, seed: u64) -> PairPlan {
    let total = (len as u128) * (len as u128);
    if total <= budget as u128 {
        return PairPlan {
            pairs: diagonal_pairs(len)
                .map(|(i, j)| (i as u32, j as u32))
                .collect(),
            exhaustive: true,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(u32, u32)> =
        rand::seq::index::sample(&mut rng, total as usize, budget as usize)
            .into_iter()
            .map(|idx| ((idx / len) as u32, (idx % len) as u32))
            .collect();
    pairs.sort_unstable_by_key(|&(i, j)| diagonal_key(i as usize, j as usize));
    PairPlan {
        pairs,
        exhaustive: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(elems: &[Element]) -> Vec<String> {
        elems.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn integer_enumeration_order() {
        let s = SamplerSpec::new(SamplerKind::BoundedIntegers { bound: 4 });
        let elems = s.elements(RingDescriptor::integers()).unwrap();
        assert_eq!(
            texts(&elems),
            ["0", "1", "-1", "2", "-2", "3", "-3", "4", "-4"]
        );
    }

    #[test]
    fn residues_and_duplicates() {
        let z8 = RingDescriptor::zmod(8).unwrap();
        let s = SamplerSpec::new(SamplerKind::ExhaustiveResidues);
        assert_eq!(
            texts(&s.elements(z8).unwrap()),
            ["0", "1", "2", "3", "4", "5", "6", "7"]
        );
        // 0, 1, -1=4, 2, -2=3 then repeats
        let z5 = RingDescriptor::zmod(5).unwrap();
        let s = SamplerSpec::new(SamplerKind::BoundedIntegers { bound: 10 });
        assert_eq!(texts(&s.elements(z5).unwrap()), ["0", "1", "4", "2", "3"]);
        assert_eq!(
            s_err(SamplerKind::ExhaustiveResidues, RingDescriptor::integers()),
            SamplerError::NotResidueRing(RingDescriptor::integers())
        );
    }

    fn s_err(kind: SamplerKind, ring: RingDescriptor) -> SamplerError {
        SamplerSpec::new(kind).elements(ring).unwrap_err()
    }

    #[test]
    fn polynomial_enumeration_order() {
        let s = SamplerSpec::new(SamplerKind::BoundedPolys {
            max_degree: 1,
            coefficients: vec!["0".into(), "1".into()],
        });
        let elems = s.elements(RingDescriptor::poly_q()).unwrap();
        assert_eq!(texts(&elems), ["0", "1", "x", "x + 1"]);

        let s = SamplerSpec::new(SamplerKind::BoundedPolys {
            max_degree: 3,
            coefficients: ["0", "1", "-1", "2", "-2"].map(String::from).to_vec(),
        });
        assert_eq!(s.elements(RingDescriptor::poly_q()).unwrap().len(), 625);
        let f5 = RingDescriptor::poly_zmod(5).unwrap();
        assert_eq!(s.elements(f5).unwrap().len(), 625);
    }

    #[test]
    fn polynomial_sampler_rejections() {
        let kind = |coeffs: &[&str]| SamplerKind::BoundedPolys {
            max_degree: 2,
            coefficients: coeffs.iter().map(|s| s.to_string()).collect(),
        };
        assert!(matches!(
            s_err(kind(&["x"]), RingDescriptor::poly_q()),
            SamplerError::NonConstantCoefficient(_)
        ));
        assert_eq!(
            s_err(kind(&[]), RingDescriptor::poly_q()),
            SamplerError::EmptyPool
        );
        assert!(matches!(
            s_err(kind(&["1"]), RingDescriptor::integers()),
            SamplerError::NotPolynomialRing(_)
        ));
        assert!(matches!(
            s_err(
                SamplerKind::BoundedPolys {
                    max_degree: 20,
                    coefficients: vec!["0".into(), "1".into()]
                },
                RingDescriptor::poly_q()
            ),
            SamplerError::TooLarge(_)
        ));
    }

    #[test]
    fn pair_plans() {
        let full = pair_plan(10, 100, 1);
        assert!(full.exhaustive);
        assert_eq!(full.pairs.len(), 100);
        assert_eq!(full.pairs[..3], [(0, 0), (0, 1), (1, 0)]);

        let sub = pair_plan(100, 500, 7);
        assert!(!sub.exhaustive);
        assert_eq!(sub.pairs.len(), 500);
        assert_eq!(sub, pair_plan(100, 500, 7));
        assert_ne!(sub, pair_plan(100, 500, 8));
        let distinct: HashSet<_> = sub.pairs.iter().collect();
        assert_eq!(distinct.len(), 500);
        assert!(sub
            .pairs
            .windows(2)
            .all(|w| diagonal_key(w[0].0 as usize, w[0].1 as usize)
                < diagonal_key(w[1].0 as usize, w[1].1 as usize)));
    }

    #[test]
    fn json_shape() {
        let s: SamplerSpec =
            serde_json::from_str(r#"{"kind":"boundedIntegers","bound":200,"pairBudget":100000}"#)
                .unwrap();
        assert_eq!(s.kind, SamplerKind::BoundedIntegers { bound: 200 });
        assert_eq!(s.pair_budget, Some(100000));
        let s: SamplerSpec = serde_json::from_str(
            r#"{"kind":"boundedPolys","maxDegree":1,"coefficients":["0","1"]}"#,
        )
        .unwrap();
        assert_eq!(s.pair_budget(), DEFAULT_PAIR_BUDGET);
    }
}
