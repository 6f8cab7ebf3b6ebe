//! Exact arithmetic for the carrier rings: the integers, the integers modulo
//! `n`, and univariate polynomials over the rationals or over a prime field.
//!
//! Every [`Element`] is kept in canonical form, so structural equality is ring
//! equality.

pub(crate) mod arith;
mod parse;
pub(crate) mod poly;

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use arith::{add_mod, gcd_u64, inv_mod, is_prime_u64, mul_mod};
use poly::{CoeffField, PrimeField, Rationals};

pub use parse::parse_element;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch {
        left: RingDescriptor,
        right: RingDescriptor,
    },
    #[error("division by zero")]
    DivisorZero,
    #[error("{op} is not supported over {ring}")]
    UnsupportedRing {
        op: &'static str,
        ring: RingDescriptor,
    },
    #[error("gcd of two zero elements")]
    BothZero,
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),
    #[error("characteristic {0} is not prime")]
    NotPrimeCharacteristic(u64),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("coefficient {coeff} is not an element of {ring}")]
    CoefficientNotInRing { coeff: String, ring: RingDescriptor },
}

/// Which carrier a descriptor names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RingKind {
    Z,
    ZmodN { n: u64 },
    PolyQ,
    PolyZmodP { p: u64 },
}

/// A validated [`RingKind`]: moduli are at least 2 and polynomial
/// characteristics are prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct RingDescriptor(RingKind);

impl RingDescriptor {
    pub fn new(kind: RingKind) -> Result<Self, RingError> {
        match kind {
            RingKind::ZmodN { n } if n < 2 => Err(RingError::InvalidModulus(n)),
            RingKind::PolyZmodP { p } if !is_prime_u64(p) => {
                Err(RingError::NotPrimeCharacteristic(p))
            }
            _ => Ok(Self(kind)),
        }
    }

    pub const fn integers() -> Self {
        Self(RingKind::Z)
    }

    pub const fn poly_q() -> Self {
        Self(RingKind::PolyQ)
    }

    pub fn zmod(n: u64) -> Result<Self, RingError> {
        Self::new(RingKind::ZmodN { n })
    }

    pub fn poly_zmod(p: u64) -> Result<Self, RingError> {
        Self::new(RingKind::PolyZmodP { p })
    }

    pub fn kind(&self) -> RingKind {
        self.0
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(self.0, RingKind::PolyQ | RingKind::PolyZmodP { .. })
    }

    /// True for the carriers with a Euclidean gcd (everything but `Z/n`).
    pub fn is_euclidean(&self) -> bool {
        !matches!(self.0, RingKind::ZmodN { .. })
    }

    pub fn zero(&self) -> Element {
        Element::from_int(*self, 0)
    }

    pub fn one(&self) -> Element {
        Element::from_int(*self, 1)
    }

    /// The polynomial variable `x`.
    pub fn var(&self) -> Result<Element, RingError> {
        let payload = match self.0 {
            RingKind::PolyQ => Payload::PolyQ(vec![BigRational::zero(), BigRational::one()]),
            RingKind::PolyZmodP { .. } => Payload::PolyP(vec![0, 1]),
            _ => {
                return Err(RingError::UnsupportedRing {
                    op: "polynomial variable",
                    ring: *self,
                })
            }
        };
        Ok(Element {
            ring: *self,
            payload,
        })
    }
}

impl<'de> Deserialize<'de> for RingDescriptor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let kind = RingKind::deserialize(d)?;
        RingDescriptor::new(kind).map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for RingDescriptor {
    type Err = RingError;

    /// Accepts `Z`, `Zmod:<n>`, `PolyQ` and `PolyZmod:<p>`.
    fn from_str(s: &str) -> Result<Self, RingError> {
        let s = s.trim();
        let bad = |msg: &str| RingError::Syntax {
            pos: 0,
            msg: format!("{msg}: {s:?}"),
        };
        let parse_mod = |t: &str| t.trim().parse::<u64>().map_err(|_| bad("bad modulus"));
        match s.split_once(':') {
            None if s == "Z" => Ok(Self::integers()),
            None if s == "PolyQ" => Ok(Self::poly_q()),
            Some(("Zmod", n)) => Self::zmod(parse_mod(n)?),
            Some(("PolyZmod", p)) => Self::poly_zmod(parse_mod(p)?),
            _ => Err(bad("unknown ring")),
        }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            RingKind::Z => write!(f, "Z"),
            RingKind::ZmodN { n } => write!(f, "Zmod:{n}"),
            RingKind::PolyQ => write!(f, "PolyQ"),
            RingKind::PolyZmodP { p } => write!(f, "PolyZmod:{p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Payload {
    Int(BigInt),
    /// In `[0, n)`.
    Residue(u64),
    /// Low degree first, trimmed, coefficients in lowest terms.
    PolyQ(Vec<BigRational>),
    /// Low degree first, trimmed, coefficients in `[0, p)`.
    PolyP(Vec<u64>),
}

/// A canonical element of a carrier ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    ring: RingDescriptor,
    payload: Payload,
}

fn reduce_bigint(v: &BigInt, n: u64) -> u64 {
    v.mod_floor(&BigInt::from(n))
        .to_u64()
        .expect("residue fits")
}

#[allow(clippy::should_implement_trait)]
impl Element {
    /// Image of an integer under the canonical map `Z -> R`.
    pub fn from_bigint(ring: RingDescriptor, v: &BigInt) -> Element {
        let payload = match ring.0 {
            RingKind::Z => Payload::Int(v.clone()),
            RingKind::ZmodN { n } => Payload::Residue(reduce_bigint(v, n)),
            RingKind::PolyQ => Payload::PolyQ(poly::trim(
                &Rationals,
                vec![BigRational::from_integer(v.clone())],
            )),
            RingKind::PolyZmodP { p } => {
                Payload::PolyP(poly::trim(&PrimeField(p), vec![reduce_bigint(v, p)]))
            }
        };
        Element { ring, payload }
    }

    pub fn from_int(ring: RingDescriptor, v: i64) -> Element {
        Self::from_bigint(ring, &BigInt::from(v))
    }

    /// Image of a rational number, when it lies in the ring (denominator
    /// invertible).
    pub fn from_rational(ring: RingDescriptor, v: &BigRational) -> Result<Element, RingError> {
        if v.is_integer() {
            return Ok(Self::from_bigint(ring, v.numer()));
        }
        let not_in_ring = || RingError::CoefficientNotInRing {
            coeff: v.to_string(),
            ring,
        };
        let invert_mod = |m: u64| -> Result<u64, RingError> {
            let den = reduce_bigint(v.denom(), m);
            let inv = inv_mod(den, m).ok_or_else(not_in_ring)?;
            Ok(mul_mod(reduce_bigint(v.numer(), m), inv, m))
        };
        let payload = match ring.0 {
            RingKind::Z => return Err(not_in_ring()),
            RingKind::ZmodN { n } => Payload::Residue(invert_mod(n)?),
            RingKind::PolyQ => Payload::PolyQ(vec![v.clone()]),
            RingKind::PolyZmodP { p } => {
                Payload::PolyP(poly::trim(&PrimeField(p), vec![invert_mod(p)?]))
            }
        };
        Ok(Element { ring, payload })
    }

    /// Polynomial over the rationals from low-to-high coefficients.
    pub fn poly_q(coeffs: Vec<BigRational>) -> Element {
        Element {
            ring: RingDescriptor::poly_q(),
            payload: Payload::PolyQ(poly::trim(&Rationals, coeffs)),
        }
    }

    /// Polynomial over `F_p` from low-to-high coefficients, reduced mod `p`.
    pub fn poly_zmod(ring: RingDescriptor, coeffs: &[i64]) -> Result<Element, RingError> {
        let RingKind::PolyZmodP { p } = ring.0 else {
            return Err(RingError::UnsupportedRing {
                op: "polynomial over F_p",
                ring,
            });
        };
        let cs = coeffs
            .iter()
            .map(|&c| reduce_bigint(&BigInt::from(c), p))
            .collect();
        Ok(Element {
            ring,
            payload: Payload::PolyP(poly::trim(&PrimeField(p), cs)),
        })
    }

    pub fn ring(&self) -> RingDescriptor {
        self.ring
    }

    pub fn as_integer(&self) -> Option<&BigInt> {
        match &self.payload {
            Payload::Int(v) => Some(v),
            _ => None,
        }
    }

    pub fn residue(&self) -> Option<u64> {
        match self.payload {
            Payload::Residue(r) => Some(r),
            _ => None,
        }
    }

    pub fn rational_coeffs(&self) -> Option<&[BigRational]> {
        match &self.payload {
            Payload::PolyQ(c) => Some(c),
            _ => None,
        }
    }

    pub fn residue_coeffs(&self) -> Option<&[u64]> {
        match &self.payload {
            Payload::PolyP(c) => Some(c),
            _ => None,
        }
    }

    /// Degree of a nonzero polynomial; `None` for zero or non-polynomials.
    pub fn degree(&self) -> Option<usize> {
        match &self.payload {
            Payload::PolyQ(c) => c.len().checked_sub(1),
            Payload::PolyP(c) => c.len().checked_sub(1),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.payload {
            Payload::Int(v) => v.is_zero(),
            Payload::Residue(r) => *r == 0,
            Payload::PolyQ(c) => c.is_empty(),
            Payload::PolyP(c) => c.is_empty(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.ring.one()
    }

    fn same_ring(&self, other: &Element) -> Result<(), RingError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(RingError::RingMismatch {
                left: self.ring,
                right: other.ring,
            })
        }
    }

    fn with(&self, payload: Payload) -> Element {
        Element {
            ring: self.ring,
            payload,
        }
    }

    fn modulus(&self) -> u64 {
        match self.ring.0 {
            RingKind::ZmodN { n } => n,
            RingKind::PolyZmodP { p } => p,
            _ => unreachable!("modulus of a characteristic-zero carrier"),
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element, RingError> {
        self.same_ring(other)?;
        let payload = match (&self.payload, &other.payload) {
            (Payload::Int(a), Payload::Int(b)) => Payload::Int(a + b),
            (Payload::Residue(a), Payload::Residue(b)) => {
                Payload::Residue(add_mod(*a, *b, self.modulus()))
            }
            (Payload::PolyQ(a), Payload::PolyQ(b)) => Payload::PolyQ(poly::add(&Rationals, a, b)),
            (Payload::PolyP(a), Payload::PolyP(b)) => {
                Payload::PolyP(poly::add(&PrimeField(self.modulus()), a, b))
            }
            _ => unreachable!("payload matches ring"),
        };
        Ok(self.with(payload))
    }

    pub fn neg(&self) -> Element {
        let payload = match &self.payload {
            Payload::Int(a) => Payload::Int(-a),
            Payload::Residue(a) => Payload::Residue(PrimeField(self.modulus()).neg(a)),
            Payload::PolyQ(a) => Payload::PolyQ(poly::neg(&Rationals, a)),
            Payload::PolyP(a) => Payload::PolyP(poly::neg(&PrimeField(self.modulus()), a)),
        };
        self.with(payload)
    }

    pub fn sub(&self, other: &Element) -> Result<Element, RingError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Element) -> Result<Element, RingError> {
        self.same_ring(other)?;
        let payload = match (&self.payload, &other.payload) {
            (Payload::Int(a), Payload::Int(b)) => Payload::Int(a * b),
            (Payload::Residue(a), Payload::Residue(b)) => {
                Payload::Residue(mul_mod(*a, *b, self.modulus()))
            }
            (Payload::PolyQ(a), Payload::PolyQ(b)) => Payload::PolyQ(poly::mul(&Rationals, a, b)),
            (Payload::PolyP(a), Payload::PolyP(b)) => {
                Payload::PolyP(poly::mul(&PrimeField(self.modulus()), a, b))
            }
            _ => unreachable!("payload matches ring"),
        };
        Ok(self.with(payload))
    }

    pub fn pow(&self, mut exp: u64) -> Element {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        acc
    }

    /// Some `q` with `q * divisor = self`, or `Ok(None)` when no such `q`
    /// exists in the carrier. Over `Z/n` the smallest nonnegative solution is
    /// returned.
    pub fn try_exact_div(&self, divisor: &Element) -> Result<Option<Element>, RingError> {
        self.same_ring(divisor)?;
        if divisor.is_zero() {
            return Err(RingError::DivisorZero);
        }
        let payload = match (&self.payload, &divisor.payload) {
            (Payload::Int(a), Payload::Int(b)) => {
                let (q, r) = a.div_rem(b);
                r.is_zero().then_some(Payload::Int(q))
            }
            (Payload::Residue(a), Payload::Residue(b)) => {
                let n = self.modulus();
                let g = gcd_u64(*b, n);
                if a % g != 0 {
                    None
                } else {
                    // q*b = a (mod n)  <=>  q*(b/g) = a/g (mod n/g)
                    let m = n / g;
                    let inv = inv_mod((b / g) % m, m).expect("coprime after dividing by gcd");
                    Some(Payload::Residue(if m == 1 {
                        0
                    } else {
                        mul_mod((a / g) % m, inv, m)
                    }))
                }
            }
            (Payload::PolyQ(a), Payload::PolyQ(b)) => {
                poly::exact_div(&Rationals, a, b).map(Payload::PolyQ)
            }
            (Payload::PolyP(a), Payload::PolyP(b)) => {
                poly::exact_div(&PrimeField(self.modulus()), a, b).map(Payload::PolyP)
            }
            _ => unreachable!("payload matches ring"),
        };
        Ok(payload.map(|p| self.with(p)))
    }

    /// Canonical gcd in the Euclidean carriers: nonnegative over `Z`, monic
    /// for polynomials.
    pub fn gcd(&self, other: &Element) -> Result<Element, RingError> {
        self.same_ring(other)?;
        if !self.ring.is_euclidean() {
            return Err(RingError::UnsupportedRing {
                op: "gcd",
                ring: self.ring,
            });
        }
        if self.is_zero() && other.is_zero() {
            return Err(RingError::BothZero);
        }
        Ok(self.gcd_unchecked(other))
    }

    /// Like [`Element::gcd`] but with `gcd(0, 0) = 0`.
    pub(crate) fn gcd_unchecked(&self, other: &Element) -> Element {
        let payload = match (&self.payload, &other.payload) {
            (Payload::Int(a), Payload::Int(b)) => Payload::Int(a.gcd(b)),
            (Payload::PolyQ(a), Payload::PolyQ(b)) => Payload::PolyQ(poly::gcd(&Rationals, a, b)),
            (Payload::PolyP(a), Payload::PolyP(b)) => {
                Payload::PolyP(poly::gcd(&PrimeField(self.modulus()), a, b))
            }
            _ => unreachable!("euclidean carrier"),
        };
        self.with(payload)
    }

    /// Associate normal form: `|a|` over `Z`, monic over a field of
    /// coefficients. Residues are returned unchanged.
    pub fn normalize_unit(&self) -> Element {
        match &self.payload {
            Payload::Int(a) => self.with(Payload::Int(a.abs())),
            Payload::Residue(_) => self.clone(),
            Payload::PolyQ(a) => self.with(Payload::PolyQ(poly::make_monic(&Rationals, a))),
            Payload::PolyP(a) => self.with(Payload::PolyP(poly::make_monic(
                &PrimeField(self.modulus()),
                a,
            ))),
        }
    }

    /// True when the payload is already canonical; every constructor and
    /// operation maintains this.
    pub fn is_canonical(&self) -> bool {
        match &self.payload {
            Payload::Int(_) => true,
            Payload::Residue(r) => *r < self.modulus(),
            Payload::PolyQ(c) => {
                c.last().is_none_or(|l| !l.is_zero())
                    && c.iter().all(|q| {
                        q.denom().sign() == Sign::Plus && q.numer().gcd(q.denom()).is_one()
                    })
            }
            Payload::PolyP(c) => {
                let p = self.modulus();
                c.last().is_none_or(|&l| l != 0) && c.iter().all(|&x| x < p)
            }
        }
    }
}

fn write_poly<C>(
    f: &mut fmt::Formatter<'_>,
    coeffs: &[C],
    is_negative: impl Fn(&C) -> bool,
    magnitude: impl Fn(&C) -> String,
) -> fmt::Result {
    if coeffs.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (deg, c) in coeffs.iter().enumerate().rev() {
        let mag = magnitude(c);
        if mag == "0" {
            continue;
        }
        let neg = is_negative(c);
        match (first, neg) {
            (true, true) => write!(f, "-")?,
            (true, false) => {}
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
        }
        first = false;
        let var = match deg {
            0 => String::new(),
            1 => "x".to_string(),
            d => format!("x^{d}"),
        };
        match (deg, mag.as_str()) {
            (0, _) => write!(f, "{mag}")?,
            (_, "1") => write!(f, "{var}")?,
            _ => write!(f, "{mag}*{var}")?,
        }
    }
    Ok(())
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.payload {
            Payload::Int(v) => write!(f, "{v}"),
            Payload::Residue(r) => write!(f, "{r}"),
            Payload::PolyQ(c) => write_poly(f, c, |q| q.is_negative(), |q| q.abs().to_string()),
            Payload::PolyP(c) => write_poly(f, c, |_| false, |r| r.to_string()),
        }
    }
}

/// Canonical text of an element; `parse_element(ring, &format_element(a)) == a`.
pub fn format_element(a: &Element) -> String {
    a.to_string()
}
