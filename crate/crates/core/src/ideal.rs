//! Finitely generated ideals of the carrier rings.
//!
//! Every carrier is a principal ideal ring, so an ideal is stored as one
//! canonical generator: the gcd of its generators in the Euclidean carriers,
//! and `gcd(generators, n)` reduced into `[0, n)` over `Z/n`.

use std::fmt;
use std::sync::RwLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::ring::arith::{big_primality, divisors, gcd_u64, is_prime_u64, small_divisor};
use crate::ring::{parse_element, Element, RingDescriptor, RingError, RingKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("an ideal needs at least one generator")]
    EmptyGenerators,
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// How the stored generator was normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormalForm {
    /// Nonnegative / monic gcd of the generators.
    PrincipalGcd,
    /// `gcd(generators, n)` in `[0, n)`; `0` is the zero ideal.
    ResidueLattice,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ideal {
    ring: RingDescriptor,
    generator: Element,
    normal_form: NormalForm,
}

/// Outcome of a primality decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Primality {
    Prime,
    /// `witness = (a, b)` with `ab` in the ideal and neither factor in it.
    /// Absent for the unit ideal, and for huge integers known composite
    /// without a cheap factor.
    NotPrime {
        witness: Option<(Element, Element)>,
    },
    Unknown,
}

impl Ideal {
    pub fn new(ring: RingDescriptor, gens: &[Element]) -> Result<Ideal, IdealError> {
        if gens.is_empty() {
            return Err(IdealError::EmptyGenerators);
        }
        for g in gens {
            if g.ring() != ring {
                return Err(RingError::RingMismatch {
                    left: ring,
                    right: g.ring(),
                }
                .into());
            }
        }
        Ok(match ring.kind() {
            RingKind::ZmodN { n } => {
                let g = gens
                    .iter()
                    .fold(n, |acc, e| gcd_u64(acc, e.residue().expect("residue")));
                Ideal {
                    ring,
                    generator: Element::from_bigint(ring, &BigInt::from(g % n)),
                    normal_form: NormalForm::ResidueLattice,
                }
            }
            _ => {
                let g = gens
                    .iter()
                    .fold(ring.zero(), |acc, e| acc.gcd_unchecked(e))
                    .normalize_unit();
                Ideal {
                    ring,
                    generator: g,
                    normal_form: NormalForm::PrincipalGcd,
                }
            }
        })
    }

    /// Builds an ideal from textual generators.
    pub fn parse<S: AsRef<str>>(ring: RingDescriptor, gens: &[S]) -> Result<Ideal, IdealError> {
        let elems = gens
            .iter()
            .map(|s| parse_element(ring, s.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Ideal::new(ring, &elems)
    }

    pub fn principal(generator: &Element) -> Ideal {
        Ideal::new(generator.ring(), std::slice::from_ref(generator)).expect("one generator")
    }

    pub fn unit(ring: RingDescriptor) -> Ideal {
        Ideal::principal(&ring.one())
    }

    pub fn ring(&self) -> RingDescriptor {
        self.ring
    }

    pub fn generator(&self) -> &Element {
        &self.generator
    }

    pub fn generators(&self) -> &[Element] {
        std::slice::from_ref(&self.generator)
    }

    pub fn normal_form(&self) -> NormalForm {
        self.normal_form
    }

    pub fn contains(&self, a: &Element) -> Result<bool, RingError> {
        if a.ring() != self.ring {
            return Err(RingError::RingMismatch {
                left: self.ring,
                right: a.ring(),
            });
        }
        if self.generator.is_zero() {
            return Ok(a.is_zero());
        }
        Ok(a.try_exact_div(&self.generator)?.is_some())
    }

    pub fn mul(&self, other: &Ideal) -> Result<Ideal, RingError> {
        let prod = self.generator.mul(&other.generator)?;
        Ok(Ideal::principal(&prod))
    }

    /// `I ⊆ J`, checked on generators.
    pub fn is_subset_of(&self, other: &Ideal) -> Result<bool, RingError> {
        other.contains(&self.generator)
    }

    /// Ideal equality by mutual containment of generators.
    pub fn same_as(&self, other: &Ideal) -> Result<bool, RingError> {
        Ok(self.is_subset_of(other)? && other.is_subset_of(self)?)
    }

    pub fn is_unit(&self) -> bool {
        self.contains(&self.ring.one()).expect("same ring")
    }

    pub fn is_proper(&self) -> bool {
        !self.is_unit()
    }

    pub fn is_zero(&self) -> bool {
        self.generator.is_zero()
    }

    pub fn is_prime(&self) -> Primality {
        if self.is_unit() {
            return Primality::NotPrime { witness: None };
        }
        match self.ring.kind() {
            RingKind::Z => self.integer_primality(),
            RingKind::ZmodN { n } => self.residue_primality(n),
            RingKind::PolyQ => self.rational_poly_primality(),
            RingKind::PolyZmodP { p } => self.mod_p_poly_primality(p),
        }
    }

    fn witness(&self, a: Element, b: Element) -> Primality {
        debug_assert!(self.contains(&a.mul(&b).unwrap()).unwrap());
        Primality::NotPrime {
            witness: Some((a, b)),
        }
    }

    fn integer_primality(&self) -> Primality {
        let g = self.generator.as_integer().expect("integer generator");
        if g.is_zero() {
            return Primality::Prime;
        }
        let mag = g.magnitude();
        match big_primality(mag) {
            Some(true) => Primality::Prime,
            Some(false) => match small_divisor(mag, 1 << 20) {
                Some(d) => {
                    let d = BigInt::from(d);
                    let cof = g / &d;
                    self.witness(
                        Element::from_bigint(self.ring, &d),
                        Element::from_bigint(self.ring, &cof),
                    )
                }
                None => Primality::NotPrime { witness: None },
            },
            None => Primality::Unknown,
        }
    }

    /// `(Z/n)/(g) ≅ Z/g` for `g | n`, so `(g)` is prime iff `g` is prime; the
    /// zero ideal (`g = 0`) is prime iff `n` is.
    fn residue_primality(&self, n: u64) -> Primality {
        let g = self.generator.residue().expect("residue generator");
        let m = if g == 0 { n } else { g };
        if is_prime_u64(m) {
            return Primality::Prime;
        }
        // The lexicographically first witness is (p, m/p) with p the least
        // prime factor of m.
        match small_divisor(&BigUint::from(m), 10_000_000) {
            Some(p) => {
                let p = p.to_u64().expect("fits");
                self.witness(
                    Element::from_bigint(self.ring, &BigInt::from(p)),
                    Element::from_bigint(self.ring, &BigInt::from(m / p)),
                )
            }
            None => Primality::NotPrime { witness: None },
        }
    }

    fn rational_poly_primality(&self) -> Primality {
        let g = &self.generator;
        match g.degree() {
            None => Primality::Prime,
            Some(1) => Primality::Prime,
            Some(2 | 3) => match rational_root(g.rational_coeffs().expect("rational poly")) {
                RootSearch::Root(r) => {
                    let linear = Element::poly_q(vec![-r, BigRational::one()]);
                    let cof = g
                        .try_exact_div(&linear)
                        .expect("nonzero")
                        .expect("root gives a linear factor");
                    self.witness(linear, cof)
                }
                RootSearch::NoRoot => Primality::Prime,
                RootSearch::TooLarge => Primality::Unknown,
            },
            Some(_) => Primality::Unknown,
        }
    }

    fn mod_p_poly_primality(&self, p: u64) -> Primality {
        const MAX_DEGREE: usize = 8;
        const MAX_CANDIDATES: u64 = 2_000_000;
        let g = &self.generator;
        let deg = match g.degree() {
            None | Some(1) => return Primality::Prime,
            Some(d) if d > MAX_DEGREE => return Primality::Unknown,
            Some(d) => d,
        };
        let half = deg / 2;
        let mut total = 0u64;
        for k in 1..=half as u32 {
            total = p
                .checked_pow(k)
                .and_then(|c| total.checked_add(c))
                .unwrap_or(u64::MAX);
        }
        if total > MAX_CANDIDATES {
            return Primality::Unknown;
        }
        for k in 1..=half {
            let count = p.pow(k as u32);
            for idx in 0..count {
                let mut coeffs = Vec::with_capacity(k + 1);
                let mut rest = idx;
                for _ in 0..k {
                    coeffs.push((rest % p) as i64);
                    rest /= p;
                }
                coeffs.push(1);
                let cand = Element::poly_zmod(self.ring, &coeffs).expect("mod p ring");
                if let Some(cof) = g.try_exact_div(&cand).expect("nonzero") {
                    return self.witness(cand, cof);
                }
            }
        }
        Primality::Prime
    }
}

enum RootSearch {
    Root(BigRational),
    NoRoot,
    TooLarge,
}

fn rational_root(coeffs: &[BigRational]) -> RootSearch {
    const DIVISOR_LIMIT: u64 = 1_000_000_000_000;
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    if ints[0].is_zero() {
        return RootSearch::Root(BigRational::zero());
    }
    let (Some(ps), Some(qs)) = (
        divisors(ints[0].magnitude(), DIVISOR_LIMIT),
        divisors(ints.last().unwrap().magnitude(), DIVISOR_LIMIT),
    ) else {
        return RootSearch::TooLarge;
    };
    let eval = |r: &BigRational| {
        coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * r + c)
    };
    for q in &qs {
        for p in &ps {
            for sign in [1i32, -1] {
                let r = BigRational::new(BigInt::from(p.clone()) * sign, BigInt::from(q.clone()));
                if eval(&r).is_zero() {
                    return RootSearch::Root(r);
                }
            }
        }
    }
    RootSearch::NoRoot
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.generator)
    }
}

/// Memoized powers `I^0, I^1, ...` of a base ideal, with stabilization
/// detection: once `I^s = I^(s+1)` every later power equals `I^s`.
#[derive(Debug)]
pub struct IdealPowerCache {
    base: Ideal,
    state: RwLock<PowerState>,
}

#[derive(Debug, Clone)]
struct PowerState {
    powers: Vec<Ideal>,
    stabilized_at: Option<usize>,
}

impl Clone for IdealPowerCache {
    fn clone(&self) -> Self {
        IdealPowerCache {
            base: self.base.clone(),
            state: RwLock::new(self.state.read().expect("poisoned").clone()),
        }
    }
}

impl IdealPowerCache {
    pub fn new(base: Ideal) -> Self {
        let unit = Ideal::unit(base.ring());
        IdealPowerCache {
            base,
            state: RwLock::new(PowerState {
                powers: vec![unit],
                stabilized_at: None,
            }),
        }
    }

    pub fn base(&self) -> &Ideal {
        &self.base
    }

    /// Stabilization index discovered so far.
    pub fn stabilized_at(&self) -> Option<usize> {
        self.state.read().expect("poisoned").stabilized_at
    }

    fn lookup(state: &PowerState, k: usize) -> Option<Ideal> {
        match state.stabilized_at {
            Some(s) if k >= s => Some(state.powers[s].clone()),
            _ => state.powers.get(k).cloned(),
        }
    }

    pub fn pow(&self, k: usize) -> Ideal {
        if let Some(hit) = Self::lookup(&self.state.read().expect("poisoned"), k) {
            return hit;
        }
        let mut state = self.state.write().expect("poisoned");
        while Self::lookup(&state, k).is_none() {
            let last = state.powers.last().expect("I^0 present");
            let next = last.mul(&self.base).expect("same ring");
            if next.same_as(last).expect("same ring") {
                state.stabilized_at = Some(state.powers.len() - 1);
            } else {
                state.powers.push(next);
            }
        }
        Self::lookup(&state, k).expect("filled")
    }

    /// Least `s <= max` with `I^s = I^(s+1)`, computing powers as needed.
    pub fn stabilization_within(&self, max: usize) -> Option<usize> {
        self.pow(max + 1);
        self.stabilized_at().filter(|&s| s <= max)
    }
}
