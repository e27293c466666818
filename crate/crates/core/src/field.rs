//! Exact scalar arithmetic over the rationals or a prime field.
//!
//! Every computation in this crate runs over one of these fields; there is no
//! floating point anywhere. Rationals are kept as reduced fractions with
//! arbitrary-precision integers, prime-field elements as residues in `[0, p)`.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// The coefficient field: `Q` or `F_p` for a prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Field {
    Rationals,
    Prime(u64),
}

/// A scalar in whichever field the surrounding context fixed.
///
/// Values are canonical: fractions are reduced with positive denominator,
/// residues lie in `[0, p)`. Mixing scalars from different fields is a
/// programming error and panics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Rat(BigRational),
    Mod(u64),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{}", r),
            Scalar::Mod(v) => write!(f, "{}", v),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// Residues stay below 2^31 so products fit in u64 without widening.
const MAX_PRIME: u64 = 1 << 31;

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::Format(format!("{} is not prime", p)));
        }
        if p >= MAX_PRIME {
            return Err(Error::Unsupported(format!("prime {} too large", p)));
        }
        Ok(Field::Prime(p))
    }

    /// 0 for the rationals, `p` for `F_p`.
    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    /// Short text form: `Q` or `F<p>`. Inverse of [`Field::from_tag`].
    pub fn tag(&self) -> String {
        match self {
            Field::Rationals => "Q".to_string(),
            Field::Prime(p) => format!("F{}", p),
        }
    }

    pub fn from_tag(tag: &str) -> Result<Field> {
        if tag == "Q" {
            return Ok(Field::Rationals);
        }
        if let Some(rest) = tag.strip_prefix('F') {
            if let Ok(p) = rest.parse::<u64>() {
                return Field::prime(p);
            }
        }
        Err(Error::Format(format!(
            "unknown field '{}': expected Q or F<prime>",
            tag
        )))
    }

    /// Whether the integer `n` maps to an invertible scalar: always in
    /// characteristic zero, and iff `p` does not divide `n` in `F_p`.
    pub fn integer_is_invertible(&self, n: i64) -> bool {
        match self {
            Field::Rationals => n != 0,
            Field::Prime(p) => n.rem_euclid(*p as i64) != 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rat(BigRational::zero()),
            Field::Prime(_) => Scalar::Mod(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rat(BigRational::one()),
            Field::Prime(_) => Scalar::Mod(1),
        }
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Mod(n.rem_euclid(*p as i64) as u64),
        }
    }

    /// `num / den` as a field element. In `F_p` the denominator is inverted.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        match self {
            Field::Rationals => Ok(Scalar::Rat(BigRational::new(
                BigInt::from(num),
                BigInt::from(den),
            ))),
            Field::Prime(_) => {
                let d = self.from_int(den);
                let n = self.from_int(num);
                Ok(self.mul(&n, &self.invert(&d)?))
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod(v) => *v == 0,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (Field::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod((x + y) % p),
            _ => panic!("scalar from a different field"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.negate(b))
    }

    pub fn negate(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Field::Rationals, Scalar::Rat(x)) => Scalar::Rat(-x),
            (Field::Prime(p), Scalar::Mod(x)) => Scalar::Mod(if *x == 0 { 0 } else { p - x }),
            _ => panic!("scalar from a different field"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Field::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod((x * y) % p),
            _ => panic!("scalar from a different field"),
        }
    }

    pub fn invert(&self, a: &Scalar) -> Result<Scalar> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        match (self, a) {
            (Field::Rationals, Scalar::Rat(x)) => Ok(Scalar::Rat(x.recip())),
            (Field::Prime(p), Scalar::Mod(x)) => Ok(Scalar::Mod(mod_inverse(*x, *p))),
            _ => panic!("scalar from a different field"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.invert(b)?))
    }

    /// `a^e` for any integer exponent; negative exponents require `a != 0`.
    pub fn pow(&self, a: &Scalar, e: i64) -> Result<Scalar> {
        let base = if e < 0 { self.invert(a)? } else { a.clone() };
        let mut acc = self.one();
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        Ok(acc)
    }

    /// `(-1)^parity` where only the low bit of `parity` matters.
    pub fn sign(&self, parity: i64) -> Scalar {
        if parity.rem_euclid(2) == 0 {
            self.one()
        } else {
            self.negate(&self.one())
        }
    }

    /// All field elements, for exhaustive checks. Only available over `F_p`.
    pub fn enumerate(&self) -> Option<Vec<Scalar>> {
        match self {
            Field::Rationals => None,
            Field::Prime(p) => Some((0..*p).map(Scalar::Mod).collect()),
        }
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // extended Euclid on (a, p); p prime and a nonzero mod p
    let (mut r0, mut r1) = (a as i128, p as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(p as i128) as u64
}

impl Scalar {
    /// Compact textual form used in reports: `a/b` over `Q`, the residue over `F_p`.
    pub fn report_string(&self) -> String {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod(v) => v.to_string(),
        }
    }

    /// Parse from the report form. Field decides interpretation.
    pub fn parse(field: &Field, s: &str) -> Result<Scalar> {
        let bad = || Error::Format(format!("bad scalar literal {:?}", s));
        match field {
            Field::Rationals => {
                let (n, d) = match s.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (s, "1"),
                };
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(Scalar::Rat(BigRational::new(n, d)))
            }
            Field::Prime(_) => {
                let v: i64 = s.trim().parse().map_err(|_| bad())?;
                Ok(field.from_int(v))
            }
        }
    }

    /// Sign-aware magnitude used to order canonical representatives.
    pub fn abs_key(&self) -> (bool, String) {
        match self {
            Scalar::Rat(r) => (r.is_negative(), format!("{}", r.abs())),
            Scalar::Mod(v) => (false, format!("{:020}", v)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn invert_two_in_f5() {
        let f = Field::prime(5).unwrap();
        let two = f.from_int(2);
        assert_eq!(f.invert(&two).unwrap(), f.from_int(3));
        // oracle: 2 * 3 = 6 = 1 mod 5
        assert_eq!(f.mul(&two, &f.from_int(3)), f.one());
    }

    #[test]
    fn rational_sum_reduces() {
        let f = q();
        let a = f.from_ratio(2, 3).unwrap();
        let b = f.from_ratio(1, 6).unwrap();
        assert_eq!(f.add(&a, &b), f.from_ratio(5, 6).unwrap());
    }

    #[test]
    fn char_two_wraps() {
        let f = Field::prime(2).unwrap();
        assert_eq!(f.add(&f.one(), &f.one()), f.zero());
    }

    #[test]
    fn invert_zero_fails() {
        for f in [q(), Field::prime(7).unwrap()] {
            assert!(matches!(f.invert(&f.zero()), Err(Error::DivisionByZero)));
        }
    }

    #[test]
    fn integer_invertibility() {
        assert!(q().integer_is_invertible(7));
        assert!(!q().integer_is_invertible(0));
        let f5 = Field::prime(5).unwrap();
        assert!(f5.integer_is_invertible(3));
        assert!(!f5.integer_is_invertible(10));
        assert!(f5.integer_is_invertible(-2));
        assert!(!f5.integer_is_invertible(-5));
        let f2 = Field::prime(2).unwrap();
        assert!(f2.integer_is_invertible(3));
        assert!(!f2.integer_is_invertible(6));
    }

    #[test]
    fn exhaustive_inverses_small_primes() {
        for p in [2u64, 3, 5, 7] {
            let f = Field::prime(p).unwrap();
            for a in f.enumerate().unwrap() {
                if f.is_zero(&a) {
                    continue;
                }
                let inv = f.invert(&a).unwrap();
                assert_eq!(f.mul(&a, &inv), f.one(), "p={} a={}", p, a);
            }
        }
    }

    #[test]
    fn non_prime_rejected() {
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(6).is_err());
        assert!(Field::prime(0).is_err());
    }

    #[test]
    fn pow_with_negative_exponent() {
        let f = Field::prime(5).unwrap();
        let two = f.from_int(2);
        assert_eq!(f.pow(&two, -1).unwrap(), f.from_int(3));
        assert_eq!(f.pow(&two, 4).unwrap(), f.one());
        let fq = q();
        assert_eq!(
            fq.pow(&fq.from_int(2), -2).unwrap(),
            fq.from_ratio(1, 4).unwrap()
        );
    }

    #[test]
    fn scalar_parse_round_trip() {
        let f = q();
        for s in ["5/6", "-2", "0", "7/3"] {
            let v = Scalar::parse(&f, s).unwrap();
            assert_eq!(v.report_string(), s);
        }
        let f5 = Field::prime(5).unwrap();
        assert_eq!(Scalar::parse(&f5, "7").unwrap(), f5.from_int(2));
    }
}
