//! Exact rational arithmetic and lattice enumeration.
//!
//! Every bound of the form `|x| <= sqrt(R)` is evaluated as `x^2 <= R`, so no
//! irrational number is ever materialized.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::Error;

/// An arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Rat, Error> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(BigRational::new(numer.into(), denom)))
    }

    /// Shorthand for small literals; panics on a zero denominator.
    pub fn frac(numer: i64, denom: i64) -> Rat {
        Rat::new(numer, denom).expect("zero denominator")
    }

    pub fn int(n: impl Into<BigInt>) -> Rat {
        Rat(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn from_big(r: BigRational) -> Rat {
        Rat(r)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn square(&self) -> Rat {
        Rat(&self.0 * &self.0)
    }

    pub fn recip(&self) -> Result<Rat, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Rat) -> Result<Rat, Error> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(&self.0 / &rhs.0))
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            // numerator/denominator beyond f64 range individually
            let n = self.numer().bits() as i64;
            let d = self.denom().bits() as i64;
            let shift = (n.max(d) - 1000).max(0) as u64;
            let nn = (self.numer() >> shift).to_f64().unwrap_or(0.0);
            let dd = (self.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
            nn / dd
        })
    }
}

/// Exact three-way comparison of `x^2` against `bound_sq`.
pub fn cmp_sq(x: &Rat, bound_sq: &Rat) -> Ordering {
    x.square().cmp(bound_sq)
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    /// Accepts `p` or `p/q` with optional sign on `p`.
    fn from_str(s: &str) -> Result<Rat, Error> {
        let bad = || Error::Parse(format!("invalid rational {s:?}"));
        let parse_int = |t: &str, allow_sign: bool| -> Result<BigInt, Error> {
            let digits = if allow_sign {
                t.strip_prefix(['-', '+']).unwrap_or(t)
            } else {
                t
            };
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse::<BigInt>().map_err(|_| bad())
        };
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => Rat::new(parse_int(p, true)?, parse_int(q, false)?),
            None => Ok(Rat::int(parse_int(s, true)?)),
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::int(n)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Rat {
        Rat::int(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Division panics on a zero divisor, like the integer types; use
// `checked_div` where the divisor is not known to be nonzero.
forward_binop!(Div, div);

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl Product for Rat {
    fn product<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::one(), |acc, x| acc * x)
    }
}

/// The lattice `(1/m)Z`, uniformly discrete with bound `1/m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lattice {
    denom: u32,
}

impl Lattice {
    pub fn new(denom: u32) -> Result<Lattice, Error> {
        if denom == 0 {
            return Err(Error::InvalidLattice(0));
        }
        Ok(Lattice { denom })
    }

    pub fn integers() -> Lattice {
        Lattice { denom: 1 }
    }

    pub fn half_integers() -> Lattice {
        Lattice { denom: 2 }
    }

    pub fn denom(&self) -> u32 {
        self.denom
    }

    /// Uniform-discreteness bound `r0 = 1/m`.
    pub fn r0(&self) -> Rat {
        Rat::frac(1, self.denom as i64)
    }

    pub fn contains(&self, x: &Rat) -> bool {
        (x * Rat::int(self.denom)).is_integer()
    }

    pub fn point(&self, k: impl Into<BigInt>) -> Rat {
        Rat::new(k.into(), self.denom).expect("lattice denominator is positive")
    }
}

/// All lattice points `p` with `(p - center)^2 <= radius_sq`, ascending.
pub fn lattice_points_in_interval(center: &Rat, radius_sq: &Rat, lat: Lattice) -> Vec<Rat> {
    if radius_sq.is_negative() {
        return Vec::new();
    }
    let m = Rat::int(lat.denom());
    // In units of 1/m: (k - m*center)^2 <= m^2 * radius_sq.
    let scaled_center = center * &m;
    let scaled_sq = radius_sq * &m * &m;
    let reach = scaled_sq.floor().sqrt();
    let mut lo = scaled_center.floor() - &reach;
    let mut hi = scaled_center.ceil() + &reach;
    let fits = |k: &BigInt| cmp_sq(&(Rat::int(k.clone()) - &scaled_center), &scaled_sq) != Ordering::Greater;
    // isqrt of the floor can undershoot by one; widen until the ends fail.
    while fits(&lo) {
        lo -= 1;
    }
    while fits(&hi) {
        hi += 1;
    }
    let mut out = Vec::new();
    let mut k = lo + 1;
    while k < hi {
        if fits(&k) {
            out.push(lat.point(k.clone()));
        }
        k += 1;
    }
    out
}

/// Integer square root for nonnegative integers.
pub fn isqrt(n: &BigInt) -> BigInt {
    if n.is_negative() {
        return BigInt::zero();
    }
    n.sqrt()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn cmp_sq_examples() {
        assert_eq!(cmp_sq(&r("1/4"), &r("1/16")), Ordering::Equal);
        assert_eq!(cmp_sq(&r("5/8"), &r("15/32")), Ordering::Less);
        assert_eq!(cmp_sq(&r("-3/4"), &r("15/32")), Ordering::Greater);
    }

    #[test]
    fn lattice_points_examples() {
        let half = Lattice::half_integers();
        assert_eq!(
            lattice_points_in_interval(&r("21/8"), &r("15/32"), half),
            vec![r("2"), r("5/2"), r("3")]
        );
        assert_eq!(
            lattice_points_in_interval(&r("0"), &r("0"), Lattice::integers()),
            vec![r("0")]
        );
        assert!(lattice_points_in_interval(&r("1/3"), &r("1/100"), half).is_empty());
        assert!(lattice_points_in_interval(&r("0"), &r("-1"), half).is_empty());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(r("-215/8192").to_string(), "-215/8192");
        assert_eq!(r("4/2").to_string(), "2");
        assert!("6/-4".parse::<Rat>().is_err());
        assert!("1/0".parse::<Rat>().is_err());
        assert!("".parse::<Rat>().is_err());
        assert!("1/".parse::<Rat>().is_err());
        assert!("--1".parse::<Rat>().is_err());
        assert!("1.5".parse::<Rat>().is_err());
        let json = serde_json::to_string(&r("-215/8192")).unwrap();
        assert_eq!(json, "\"-215/8192\"");
        assert_eq!(serde_json::from_str::<Rat>(&json).unwrap(), r("-215/8192"));
    }

    #[test]
    fn lattice_rejects_zero() {
        assert!(Lattice::new(0).is_err());
        assert!(Lattice::half_integers().contains(&r("7/2")));
        assert!(!Lattice::half_integers().contains(&r("1/4")));
    }

    fn small_rat() -> impl Strategy<Value = Rat> {
        (-60i64..60, 1i64..17).prop_map(|(p, q)| Rat::frac(p, q))
    }

    proptest! {
        #[test]
        fn lattice_points_are_exactly_the_admissible_ones(
            c in small_rat(), rsq in (-4i64..40, 1i64..9), m in 1u32..5
        ) {
            let radius_sq = Rat::frac(rsq.0, rsq.1);
            let lat = Lattice::new(m).unwrap();
            let pts = lattice_points_in_interval(&c, &radius_sq, lat);
            for w in pts.windows(2) {
                prop_assert!(w[0] < w[1]);
            }
            for p in &pts {
                prop_assert!(cmp_sq(&(p - &c), &radius_sq) != Ordering::Greater);
            }
            // neighbours of the returned range fail the test
            let step = lat.r0();
            let (below, above) = match (pts.first(), pts.last()) {
                (Some(f), Some(l)) => (f - &step, l + &step),
                _ => {
                    let k = (&c * Rat::int(m)).floor();
                    (lat.point(k.clone()), lat.point(k + 1))
                }
            };
            prop_assert_eq!(cmp_sq(&(below - &c), &radius_sq), Ordering::Greater);
            prop_assert_eq!(cmp_sq(&(above - &c), &radius_sq), Ordering::Greater);
        }

        #[test]
        fn field_laws(a in small_rat(), b in small_rat(), c in small_rat()) {
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            if !b.is_zero() {
                prop_assert_eq!((&a / &b) * &b, a.clone());
            }
        }
    }
}
