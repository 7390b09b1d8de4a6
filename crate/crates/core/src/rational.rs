//! Exact rational helpers and a compact serde encoding.
//!
//! Rationals serialize as a bare integer when the denominator is one, as a
//! `[numerator, denominator]` pair when both fit in `i64`, and as a
//! `"numerator/denominator"` string otherwise. Floats are rejected on input.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeTuple, Serializer};
use std::fmt;

pub type Rational = BigRational;

/// Largest denominator [`snap`] will consider.
pub const SNAP_MAX_DENOMINATOR: i64 = 1_000_000;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact dyadic value of a finite float.
pub fn from_f64_exact(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Recovers a small-denominator rational from a float produced by rounding it.
///
/// Walks the continued fraction of `x` and returns the first convergent within
/// `1e-14 * max(1, |x|)` whose denominator is at most [`SNAP_MAX_DENOMINATOR`];
/// falls back to the exact dyadic value. Deterministic for a given input.
pub fn snap(x: f64) -> Rational {
    let tol = 1e-14 * x.abs().max(1.0);
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i128;
        let h = a * h1 + h0;
        let k = a * k1 + k0;
        if k > SNAP_MAX_DENOMINATOR as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h, k1, k);
        if (x - h as f64 / k as f64).abs() <= tol {
            return Rational::new(BigInt::from(h), BigInt::from(k));
        }
        let frac = rest - a as f64;
        if frac <= 0.0 {
            break;
        }
        rest = 1.0 / frac;
    }
    from_f64_exact(x).expect("snap of a non-finite float")
}

pub fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.lcm(b)
}

pub fn min_of<'a>(it: impl IntoIterator<Item = &'a Rational>) -> Option<Rational> {
    it.into_iter().min().cloned()
}

pub fn max_of<'a>(it: impl IntoIterator<Item = &'a Rational>) -> Option<Rational> {
    it.into_iter().max().cloned()
}

/// Formats as `n` or `n/d`.
pub fn display(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(1)) => s.serialize_i64(n),
        (Some(n), Some(d)) => {
            let mut t = s.serialize_tuple(2)?;
            t.serialize_element(&n)?;
            t.serialize_element(&d)?;
            t.end()
        }
        _ => s.serialize_str(&display(r)),
    }
}

struct RationalVisitor;

impl<'de> Visitor<'de> for RationalVisitor {
    type Value = Rational;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer, a [numerator, denominator] pair or a \"n/d\" string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
        Ok(int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
        Ok(Rational::from_integer(BigInt::from(v)))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Rational, E> {
        Err(E::custom(format!(
            "float {v} is not allowed here; write it as [numerator, denominator]"
        )))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
        parse(v).ok_or_else(|| E::custom(format!("malformed rational {v:?}")))
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Rational, A::Error> {
        let n: i64 = seq
            .next_element()?
            .ok_or_else(|| de::Error::invalid_length(0, &self))?;
        let d: i64 = seq
            .next_element()?
            .ok_or_else(|| de::Error::invalid_length(1, &self))?;
        if seq.next_element::<i64>()?.is_some() {
            return Err(de::Error::invalid_length(3, &self));
        }
        if d == 0 {
            return Err(de::Error::custom("zero denominator"));
        }
        Ok(ratio(n, d))
    }
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
    d.deserialize_any(RationalVisitor)
}

/// Serde adapter for `Vec<Rational>`.
pub mod vec {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Wrap(#[serde(with = "super")] Rational);

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| Wrap(r.clone())))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Ok(Vec::<Wrap>::deserialize(d)?.into_iter().map(|w| w.0).collect())
    }
}

/// Serde adapter for a `(Rational, Rational)` pair.
pub mod pair {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Wrap(#[serde(with = "super")] Rational);

    pub fn serialize<S: Serializer>(p: &(Rational, Rational), s: S) -> Result<S::Ok, S::Error> {
        (Wrap(p.0.clone()), Wrap(p.1.clone())).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(Rational, Rational), D::Error> {
        let (a, b) = <(Wrap, Wrap)>::deserialize(d)?;
        Ok((a.0, b.0))
    }
}

pub(crate) fn is_nonneg(r: &Rational) -> bool {
    !r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snap_recovers_thirds_and_tenths() {
        assert_eq!(snap(1.0 / 3.0), ratio(1, 3));
        assert_eq!(snap(0.1), ratio(1, 10));
        assert_eq!(snap(2.55), ratio(51, 20));
        assert_eq!(snap(-7.0 / 12.0), ratio(-7, 12));
        assert_eq!(snap(0.0), int(0));
        assert_eq!(snap(1e9), int(1_000_000_000));
    }

    #[test]
    fn snap_falls_back_to_exact_dyadic() {
        // The closest small-denominator rational, 100000/999999, is 1e-13 away.
        let x = 0.1000001;
        assert_eq!(snap(x), from_f64_exact(x).unwrap());
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["0", "-3", "5/7", "-12/5"] {
            assert_eq!(display(&parse(s).unwrap()), s);
        }
        assert!(parse("1/0").is_none());
        assert!(parse("x").is_none());
    }
}
