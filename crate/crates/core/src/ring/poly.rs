//! Dense univariate polynomial arithmetic over a coefficient field.
//!
//! Coefficient vectors are stored low degree first and kept trimmed: the
//! last entry (if any) is nonzero, so the zero polynomial is `[]`.

use num_rational::BigRational;
use num_traits::Zero;

use super::arith::{add_mod, inv_mod, mul_mod};

pub(crate) trait CoeffField {
    type C: Clone + PartialEq;

    fn zero(&self) -> Self::C;
    fn is_zero(&self, c: &Self::C) -> bool;
    fn add(&self, a: &Self::C, b: &Self::C) -> Self::C;
    fn neg(&self, a: &Self::C) -> Self::C;
    fn mul(&self, a: &Self::C, b: &Self::C) -> Self::C;
    /// Caller guarantees `a` is nonzero.
    fn inv(&self, a: &Self::C) -> Self::C;
}

pub(crate) struct Rationals;

impl CoeffField for Rationals {
    type C = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn is_zero(&self, c: &BigRational) -> bool {
        c.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
}

pub(crate) struct PrimeField(pub u64);

impl CoeffField for PrimeField {
    type C = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn is_zero(&self, c: &u64) -> bool {
        *c == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        add_mod(*a, *b, self.0)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.0 - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.0)
    }
    fn inv(&self, a: &u64) -> u64 {
        inv_mod(*a, self.0).expect("nonzero element of a prime field")
    }
}

pub(crate) fn trim<F: CoeffField>(f: &F, mut p: Vec<F::C>) -> Vec<F::C> {
    while p.last().is_some_and(|c| f.is_zero(c)) {
        p.pop();
    }
    p
}

pub(crate) fn add<F: CoeffField>(f: &F, a: &[F::C], b: &[F::C]) -> Vec<F::C> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => f.add(x, y),
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => unreachable!(),
        })
        .collect();
    trim(f, out)
}

pub(crate) fn neg<F: CoeffField>(f: &F, a: &[F::C]) -> Vec<F::C> {
    a.iter().map(|c| f.neg(c)).collect()
}

pub(crate) fn mul<F: CoeffField>(f: &F, a: &[F::C], b: &[F::C]) -> Vec<F::C> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn div_rem<F: CoeffField>(f: &F, a: &[F::C], b: &[F::C]) -> (Vec<F::C>, Vec<F::C>) {
    let lead_inv = f.inv(b.last().expect("nonzero divisor"));
    let mut rem = a.to_vec();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![f.zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let factor = f.mul(rem.last().unwrap(), &lead_inv);
        for (j, c) in b.iter().enumerate() {
            let sub = f.neg(&f.mul(&factor, c));
            rem[shift + j] = f.add(&rem[shift + j], &sub);
        }
        quot[shift] = factor;
        rem = trim(f, rem);
    }
    (trim(f, quot), rem)
}

pub(crate) fn make_monic<F: CoeffField>(f: &F, a: &[F::C]) -> Vec<F::C> {
    match a.last() {
        None => Vec::new(),
        Some(lead) => {
            let inv = f.inv(lead);
            a.iter().map(|c| f.mul(c, &inv)).collect()
        }
    }
}

/// Monic gcd; `gcd(0, 0) = 0`.
pub(crate) fn gcd<F: CoeffField>(f: &F, a: &[F::C], b: &[F::C]) -> Vec<F::C> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let (_, r) = div_rem(f, &x, &y);
        x = y;
        y = r;
    }
    make_monic(f, &x)
}

pub(crate) fn exact_div<F: CoeffField>(f: &F, a: &[F::C], b: &[F::C]) -> Option<Vec<F::C>> {
    let (q, r) = div_rem(f, a, b);
    r.is_empty().then_some(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn rational_gcd_of_difference_of_squares() {
        // x^2 - 1 and x - 1
        let a = vec![q(-1), q(0), q(1)];
        let b = vec![q(-1), q(1)];
        assert_eq!(gcd(&Rationals, &a, &b), vec![q(-1), q(1)]);
    }

    #[test]
    fn division_identity_mod_p() {
        let f = PrimeField(5);
        let a = vec![1, 2, 3, 4];
        let b = vec![2, 0, 1];
        let (quot, rem) = div_rem(&f, &a, &b);
        assert!(rem.len() < b.len());
        assert_eq!(add(&f, &mul(&f, &quot, &b), &rem), a);
    }

    #[test]
    fn exact_division_fails_on_remainder() {
        let f = PrimeField(7);
        assert_eq!(exact_div(&f, &[1, 1], &[0, 1]), None);
        assert_eq!(exact_div(&f, &[0, 0, 1], &[0, 1]), Some(vec![0, 1]));
    }
}
