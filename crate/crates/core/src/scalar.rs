//! Scalar abstraction.
//!
//! Everything geometric in this crate is generic over [`Field`], an ordered
//! field built on `num-traits`. The default instantiation is [`Scalar`], an
//! arbitrary-precision rational, which keeps every envelope, crossing point and
//! stripe section exact. `f64` and `f32` also implement [`Field`] for quick
//! exploratory runs where exactness does not matter.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Exact rational number, the default scalar for all geometry.
pub type Scalar = BigRational;

/// Ordered field used as the coordinate type.
pub trait Field:
    Clone + Debug + PartialOrd + Num + Signed + ToPrimitive + Send + Sync + 'static
{
    /// Builds `num / den`. Panics if `den == 0`.
    fn ratio(num: i64, den: i64) -> Self;

    /// Whether arithmetic in this field is exact.
    const EXACT: bool;

    fn from_int(n: i64) -> Self {
        Self::ratio(n, 1)
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Field for BigRational {
    const EXACT: bool = true;

    fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Ratio::new(BigInt::from(num), BigInt::from(den))
    }
}

impl Field for f64 {
    const EXACT: bool = false;

    fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }
}

impl Field for f32 {
    const EXACT: bool = false;

    fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f32 / den as f32
    }
}

/// Shorthand for an exact rational `num / den`.
pub fn rat(num: i64, den: i64) -> Scalar {
    Scalar::ratio(num, den)
}

/// Shorthand for an exact integer.
pub fn int(n: i64) -> Scalar {
    Scalar::from_int(n)
}

/// `2^-k` as an exact rational.
pub fn dyadic(k: u32) -> Scalar {
    Ratio::new(BigInt::one(), BigInt::one() << k as usize)
}

/// Best-effort conversion of a float into an exact rational.
pub fn from_f64(x: f64) -> Option<Scalar> {
    BigRational::from_f64(x)
}

pub(crate) fn cmp<T: PartialOrd>(a: &T, b: &T) -> Ordering {
    a.partial_cmp(b).expect("unordered scalar (NaN)")
}

pub(crate) fn max_of<T: Field>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}

pub(crate) fn min_of<T: Field>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}

/// Error returned when a textual scalar cannot be parsed.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{0}` as a rational number")]
pub struct ParseScalarError(pub String);

/// Parses `"3"`, `"-3/4"`, or a finite decimal such as `"0.125"` exactly.
pub fn parse_scalar(s: &str) -> Result<Scalar, ParseScalarError> {
    let t = s.trim();
    let err = || ParseScalarError(s.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Ratio::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let n = BigInt::from_str(&digits).map_err(|_| err())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let q = Ratio::new(n, d);
        return Ok(if negative { -q } else { q });
    }
    BigInt::from_str(t)
        .map(Ratio::from_integer)
        .map_err(|_| err())
}

/// Parses a comma-separated point such as `"1/2,3"`.
pub fn parse_point(s: &str) -> Result<Vec<Scalar>, ParseScalarError> {
    s.split(',').map(parse_scalar).collect()
}

/// Renders a rational as `p/q`, or `p` when integral.
pub fn fmt_scalar(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Serde adapter for the `["num","den"]` wire form of a rational.
///
/// Reading is lenient: a bare JSON integer or a string such as `"3/4"` is
/// accepted as well.
pub mod serde_scalar {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Pair(String, String),
        Text(String),
        Int(i64),
    }

    pub fn serialize<S: Serializer>(x: &Scalar, s: S) -> Result<S::Ok, S::Error> {
        [x.numer().to_string(), x.denom().to_string()].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Scalar, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Pair(n, den) => {
                let n = BigInt::from_str(n.trim()).map_err(D::Error::custom)?;
                let den = BigInt::from_str(den.trim()).map_err(D::Error::custom)?;
                if !den.is_positive() {
                    return Err(D::Error::custom("denominator must be positive"));
                }
                Ok(Ratio::new(n, den))
            }
            Repr::Text(t) => parse_scalar(&t).map_err(D::Error::custom),
            Repr::Int(i) => Ok(int(i)),
        }
    }

    /// The same adapter for `Vec<Scalar>`.
    pub mod vec {
        use super::*;

        #[derive(Serialize, Deserialize)]
        struct W(#[serde(with = "super")] Scalar);

        pub fn serialize<S: Serializer>(xs: &[Scalar], s: S) -> Result<S::Ok, S::Error> {
            xs.iter().cloned().map(W).collect::<Vec<_>>().serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Scalar>, D::Error> {
            Ok(Vec::<W>::deserialize(d)?.into_iter().map(|w| w.0).collect())
        }
    }

    /// The same adapter for an optional closed interval `[lo, hi]`.
    pub mod interval_opt {
        use super::*;

        #[derive(Serialize, Deserialize)]
        struct W(#[serde(with = "super")] Scalar);

        pub fn serialize<S: Serializer>(x: &Option<(Scalar, Scalar)>, s: S) -> Result<S::Ok, S::Error> {
            x.as_ref()
                .map(|(a, b)| [W(a.clone()), W(b.clone())])
                .serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> Result<Option<(Scalar, Scalar)>, D::Error> {
            Ok(Option::<[W; 2]>::deserialize(d)?.map(|[a, b]| (a.0, b.0)))
        }
    }
}
