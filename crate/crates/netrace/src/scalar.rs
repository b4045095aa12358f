//! Numeric scalars for delay arithmetic.
//!
//! All delay formulas and simulators are generic over a [`Scalar`]. The
//! canonical instantiation is [`Exact`], a rational over `i128`, so that
//! worked delays such as 88 s come out as exact integers instead of floats.
//! `f32`/`f64` satisfy [`Scalar`] as well and can be used for quick
//! approximate evaluation of the closed forms; the simulators additionally
//! require a total order on time ([`SimScalar`]), which floats do not
//! provide.

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, One, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};
use std::str::FromStr;

/// Arithmetic needed for rates, distances and delays.
pub trait Scalar:
    Num + Clone + PartialOrd + FromPrimitive + ToPrimitive + fmt::Debug + fmt::Display
{
}

impl<T> Scalar for T where
    T: Num + Clone + PartialOrd + FromPrimitive + ToPrimitive + fmt::Debug + fmt::Display
{
}

/// Scalars usable as a simulation clock. Event queues need a total order,
/// which rules out bare floats.
pub trait SimScalar: Scalar + Ord {}

impl<T> SimScalar for T where T: Scalar + Ord {}

/// Convert a count (bits, packets, hops) into a scalar.
pub fn count<T: Scalar>(n: u64) -> T {
    T::from_u64(n).expect("count representable in scalar")
}

/// Exact rational number of seconds (or meters, or bits per second).
///
/// Wraps `Ratio<i128>` so it can carry its own serde representation:
/// integers serialize as plain numbers, everything else as a `"n/d"`
/// string, and parsing accepts integers, decimal strings like `"2.5"`
/// and fraction strings like `"1/3"`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Exact(Ratio<i128>);

impl Exact {
    pub fn new(numer: i128, denom: i128) -> Self {
        Exact(Ratio::new(numer, denom))
    }

    pub fn from_int(v: i64) -> Self {
        Exact(Ratio::from_integer(v as i128))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        if self.0 < Ratio::zero() {
            Exact(-self.0)
        } else {
            *self
        }
    }

    /// Largest integer not above the value.
    pub fn floor(&self) -> i128 {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> i128 {
        self.0.ceil().to_integer()
    }
}

impl From<i64> for Exact {
    fn from(v: i64) -> Self {
        Exact::from_int(v)
    }
}

impl From<u32> for Exact {
    fn from(v: u32) -> Self {
        Exact::from_int(v as i64)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Exact {
            type Output = Exact;
            fn $method(self, rhs: Exact) -> Exact {
                Exact(self.0.$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);
forward_binop!(Rem, rem);

impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        Exact(-self.0)
    }
}

impl Zero for Exact {
    fn zero() -> Self {
        Exact(Ratio::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Exact {
    fn one() -> Self {
        Exact(Ratio::one())
    }
}

impl Num for Exact {
    type FromStrRadixErr = num_rational::ParseRatioError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        Ratio::from_str_radix(s, radix).map(Exact)
    }
}

impl FromPrimitive for Exact {
    fn from_i64(n: i64) -> Option<Self> {
        Some(Exact::from_int(n))
    }
    fn from_u64(n: u64) -> Option<Self> {
        Some(Exact(Ratio::from_integer(n as i128)))
    }
    fn from_f64(v: f64) -> Option<Self> {
        Ratio::<i128>::from_f64(v).map(Exact)
    }
}

impl ToPrimitive for Exact {
    fn to_i64(&self) -> Option<i64> {
        self.0.to_i64()
    }
    fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
    fn to_f64(&self) -> Option<f64> {
        self.0.to_f64()
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Error when parsing an [`Exact`] from text.
#[derive(Debug, thiserror::Error)]
#[error("invalid rational `{0}`: expected an integer, `a/b` or a decimal")]
pub struct ParseExactError(String);

impl FromStr for Exact {
    type Err = ParseExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseExactError(s.to_owned());
        let t = s.trim();
        if let Some((n, d)) = t.split_once('/') {
            let n: i128 = n.trim().parse().map_err(|_| bad())?;
            let d: i128 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            return Ok(Exact::new(n, d));
        }
        if let Some((int, frac)) = t.split_once('.') {
            let neg = int.trim_start().starts_with('-');
            let int: i128 = if int.is_empty() || int == "-" {
                0
            } else {
                int.parse().map_err(|_| bad())?
            };
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let scale = 10i128.checked_pow(frac.len() as u32).ok_or_else(bad)?;
            let frac_val: i128 = frac.parse().map_err(|_| bad())?;
            let signed_frac = if neg { -frac_val } else { frac_val };
            let numer = int
                .checked_mul(scale)
                .and_then(|v| v.checked_add(signed_frac))
                .ok_or_else(bad)?;
            return Ok(Exact::new(numer, scale));
        }
        let n: i128 = t.parse().map_err(|_| bad())?;
        Ok(Exact(Ratio::from_integer(n)))
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.is_integer() {
            if let Some(v) = self.to_i64() {
                return serializer.serialize_i64(v);
            }
        }
        serializer.serialize_str(&format!("{}/{}", self.numer(), self.denom()))
    }
}

struct ExactVisitor;

impl de::Visitor<'_> for ExactVisitor {
    type Value = Exact;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a number, a decimal string or an `a/b` fraction string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Exact, E> {
        Ok(Exact::from_int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Exact, E> {
        Ok(Exact(Ratio::from_integer(v as i128)))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Exact, E> {
        Exact::from_f64(v).ok_or_else(|| E::custom("non-finite number"))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Exact, E> {
        v.parse().map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(ExactVisitor)
    }
}

/// Format an exact number of seconds with up to six decimal places,
/// trailing zeros trimmed. `5/2` renders as `2.5`, `1/3` as `0.333333`.
pub fn format_seconds(x: &Exact) -> String {
    let neg = x.numer() < 0;
    let n = x.numer().unsigned_abs();
    let d = x.denom().unsigned_abs();
    let mut int = n / d;
    let rem = n % d;
    let sign = if neg { "-" } else { "" };
    if rem == 0 {
        return format!("{sign}{int}");
    }
    const SCALE: u128 = 1_000_000;
    let mut frac = rem * SCALE / d;
    let leftover = rem * SCALE % d;
    if leftover * 2 >= d {
        frac += 1;
    }
    if frac == SCALE {
        int += 1;
        return format!("{sign}{int}");
    }
    let digits = format!("{frac:06}");
    let trimmed = digits.trim_end_matches('0');
    if trimmed.is_empty() {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{trimmed}")
    }
}
