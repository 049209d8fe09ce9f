//! Number-theory primitives shared by every evaluator.
//!
//! Everything downstream is built from four ingredients:
//!
//! 1. validated odd primes ([`OddPrime`]),
//! 2. p-adic unit decompositions n = unit * p^exponent ([`padic_split`]),
//! 3. Legendre symbols and the fourth-root-of-unity phases that show up in
//!    quadratic exponential sums ([`legendre`], [`epsilon`], [`PhaseUnit`]),
//! 4. an exact arbitrary-precision rational carrier ([`Rational`]).
//!
//! All arithmetic here is exact; floating point only appears in the explicit
//! complex conversions used by the numeric cross-check evaluators.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

// --------------------------------------------------------------------------
// Odd primes
// --------------------------------------------------------------------------

/// An odd prime, validated on construction.
///
/// The whole crate works at a fixed odd prime; wrapping it in a type means
/// no evaluator ever needs to re-check primality or exclude p = 2.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct OddPrime(u64);

impl OddPrime {
    /// Validates by trial division. Intended for primes of modest size
    /// (the enumeration caps keep everything well below 64 bits anyway).
    pub fn new(value: u64) -> Result<Self> {
        if value == 2 || !is_prime(value) {
            return Err(Error::NotOddPrime { value });
        }
        Ok(OddPrime(value))
    }

    /// The underlying prime.
    pub fn get(self) -> u64 {
        self.0
    }

    /// The prime as a `BigInt`, for arbitrary-precision arithmetic.
    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }
}

impl fmt::Display for OddPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d <= n / d {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Modular exponentiation with 128-bit intermediates.
fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut b = (base as u128) % m;
    let mut acc: u128 = 1 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

// --------------------------------------------------------------------------
// Legendre symbols
// --------------------------------------------------------------------------

/// Legendre symbol (a|p) in {-1, 0, 1}, via Euler's criterion after reducing
/// a into [0, p).
pub fn legendre(a: &BigInt, p: OddPrime) -> i32 {
    let r = a
        .mod_floor(&p.to_bigint())
        .to_u64()
        .expect("residue fits in u64");
    legendre_residue(r, p)
}

/// [`legendre`] for machine integers; avoids BigInt churn in hot loops.
pub fn legendre_i64(a: i64, p: OddPrime) -> i32 {
    legendre_residue(a.rem_euclid(p.get() as i64) as u64, p)
}

fn legendre_residue(r: u64, p: OddPrime) -> i32 {
    let q = p.get();
    let s = pow_mod(r % q, (q - 1) / 2, q);
    if s == 0 {
        0
    } else if s == 1 {
        1
    } else {
        debug_assert_eq!(s, q - 1);
        -1
    }
}

/// (a|p)^k with the empty-product convention (a|p)^0 = 1, including for
/// p | a. For p | a and k >= 1 the power is 0.
pub fn legendre_power(a: &BigInt, p: OddPrime, k: u32) -> i32 {
    if k == 0 {
        return 1;
    }
    match legendre(a, p) {
        0 => 0,
        1 => 1,
        _ => {
            if k % 2 == 0 {
                1
            } else {
                -1
            }
        }
    }
}

/// Smallest positive quadratic nonresidue mod p. Exists for every odd prime.
pub fn least_nonresidue(p: OddPrime) -> u64 {
    (2..p.get())
        .find(|&n| legendre_residue(n, p) == -1)
        .expect("every odd prime has a nonresidue below it")
}

// --------------------------------------------------------------------------
// Fourth roots of unity
// --------------------------------------------------------------------------

/// A fourth root of unity i^n, the only phases a quadratic Gauss sum over an
/// odd prime power can carry. Stored as the exponent of i mod 4.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PhaseUnit(u8);

impl PhaseUnit {
    pub const ONE: PhaseUnit = PhaseUnit(0);
    pub const I: PhaseUnit = PhaseUnit(1);
    pub const MINUS_ONE: PhaseUnit = PhaseUnit(2);
    pub const MINUS_I: PhaseUnit = PhaseUnit(3);

    /// Embeds a sign from {-1, +1}.
    pub fn from_sign(sign: i32) -> PhaseUnit {
        match sign {
            1 => PhaseUnit::ONE,
            -1 => PhaseUnit::MINUS_ONE,
            _ => panic!("sign must be +1 or -1, got {sign}"),
        }
    }

    /// i^(n * e).
    pub fn pow(self, e: u32) -> PhaseUnit {
        PhaseUnit(((self.0 as u32 * (e % 4)) % 4) as u8)
    }

    /// `Some(+1)` or `Some(-1)` for the real phases, `None` for +/-i.
    pub fn real_sign(self) -> Option<i32> {
        match self.0 {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    /// Exact complex value (components are 0 or +/-1).
    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl Mul for PhaseUnit {
    type Output = PhaseUnit;
    fn mul(self, rhs: PhaseUnit) -> PhaseUnit {
        PhaseUnit((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for PhaseUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "1",
            1 => "i",
            2 => "-1",
            _ => "-i",
        })
    }
}

/// The normalized quadratic Gauss sum phase for modulus p^k:
/// 1 when p^k = 1 (mod 4), i when p^k = 3 (mod 4).
///
/// Equivalently: 1 unless p = 3 (mod 4) and k is odd.
pub fn epsilon(p: OddPrime, k: u32) -> PhaseUnit {
    if k % 2 == 0 || p.get() % 4 == 1 {
        PhaseUnit::ONE
    } else {
        PhaseUnit::I
    }
}

// --------------------------------------------------------------------------
// p-adic splits
// --------------------------------------------------------------------------

/// A nonzero integer written as unit * p^exponent with p not dividing unit.
///
/// Only [`padic_split`] constructs these, so the coprimality invariant
/// always holds.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PAdicSplit {
    unit: BigInt,
    exponent: u32,
    prime: OddPrime,
}

impl PAdicSplit {
    /// The p-free part (carries the sign of the original integer).
    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    /// The exact power of p dividing the original integer.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn prime(&self) -> OddPrime {
        self.prime
    }

    /// Reassembles unit * p^exponent.
    pub fn reconstruct(&self) -> BigInt {
        &self.unit * self.prime.to_bigint().pow(self.exponent)
    }
}

/// Splits a nonzero integer as unit * p^exponent. Zero is rejected: it is
/// divisible by every power of p.
pub fn padic_split(n: &BigInt, p: OddPrime) -> Result<PAdicSplit> {
    if n.is_zero() {
        return Err(Error::ZeroPAdicSplit);
    }
    let pb = p.to_bigint();
    let mut unit = n.clone();
    let mut exponent = 0u32;
    loop {
        let (q, r) = unit.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        unit = q;
        exponent += 1;
    }
    Ok(PAdicSplit {
        unit,
        exponent,
        prime: p,
    })
}

// --------------------------------------------------------------------------
// Exact rationals
// --------------------------------------------------------------------------

/// Exact rational number with arbitrary-precision numerator and denominator,
/// kept in lowest terms with a positive denominator.
///
/// Densities are rationals whose denominators are powers of p; this type
/// also carries the intermediate quarter-integer bookkeeping that shows up
/// inside the closed-form branch expressions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Rational {
        Rational(BigRational::zero())
    }

    pub fn one() -> Rational {
        Rational(BigRational::one())
    }

    /// numer/denom reduced to lowest terms. Panics if denom is zero.
    pub fn new(numer: BigInt, denom: BigInt) -> Rational {
        Rational(BigRational::new(numer, denom))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Rational {
        Rational(BigRational::from_integer(n.into()))
    }

    /// p^exp for any integer exp (negative exponents give 1/p^|exp|).
    pub fn prime_power(p: OddPrime, exp: i64) -> Rational {
        let mag = p.to_bigint().pow(exp.unsigned_abs().try_into().expect("exponent fits u32"));
        if exp >= 0 {
            Rational::from_integer(mag)
        } else {
            Rational::new(BigInt::one(), mag)
        }
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

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// The exact integer value, or `None` when the denominator exceeds 1.
    pub fn to_integer(&self) -> Option<BigInt> {
        if self.is_integer() {
            Some(self.0.to_integer())
        } else {
            None
        }
    }

    /// Exact integer power; negative exponents invert. Panics on 0^negative.
    pub fn pow(&self, exp: i64) -> Rational {
        let e: i32 = exp.try_into().expect("exponent fits i32");
        Rational(num_traits::Pow::pow(&self.0, e))
    }

    pub fn abs(&self) -> Rational {
        Rational(self.0.abs())
    }

    /// Nearest-double approximation (only for reporting and float checks).
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().expect("rational convertible to f64")
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Rational {
        Rational::from_integer(n)
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Rational {
        Rational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(self.0, rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational($trait::$method(self.0, &rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(&self.0, rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl<'a> Neg for &'a Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl fmt::Display for Rational {
    /// `numer/denom`, or just `numer` for integers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rational> {
        let err = || Error::RationalParse {
            input: s.to_string(),
        };
        match s.split_once('/') {
            None => {
                let n: BigInt = s.trim().parse().map_err(|_| err())?;
                Ok(Rational::from_integer(n))
            }
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| err())?;
                let d: BigInt = d.trim().parse().map_err(|_| err())?;
                if d.is_zero() {
                    return Err(err());
                }
                Ok(Rational::new(n, d))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(v: u64) -> OddPrime {
        OddPrime::new(v).unwrap()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn odd_prime_accepts_odd_primes_only() {
        for good in [3u64, 5, 7, 11, 13, 97, 7919] {
            assert_eq!(OddPrime::new(good).unwrap().get(), good);
        }
        for bad in [0u64, 1, 2, 4, 9, 15, 91, 561] {
            assert_eq!(
                OddPrime::new(bad).unwrap_err(),
                Error::NotOddPrime { value: bad }
            );
        }
    }

    #[test]
    fn padic_split_examples() {
        // 18 = 2 * 3^2
        let s = padic_split(&big(18), p(3)).unwrap();
        assert_eq!((s.unit(), s.exponent()), (&big(2), 2));
        // -5 is a 3-adic unit
        let s = padic_split(&big(-5), p(3)).unwrap();
        assert_eq!((s.unit(), s.exponent()), (&big(-5), 0));
        // 27 = 1 * 3^3
        let s = padic_split(&big(27), p(3)).unwrap();
        assert_eq!((s.unit(), s.exponent()), (&big(1), 3));

        assert_eq!(padic_split(&big(0), p(3)).unwrap_err(), Error::ZeroPAdicSplit);
    }

    #[test]
    fn legendre_small_values() {
        // Values checked against Euler's criterion by hand:
        // (1|7) = 1; (-1|3) = (-1)^1 = -1; (2|7) = 2^3 mod 7 = 1.
        assert_eq!(legendre(&big(1), p(7)), 1);
        assert_eq!(legendre(&big(-1), p(3)), -1);
        assert_eq!(legendre(&big(2), p(7)), 1);
        assert_eq!(legendre(&big(0), p(5)), 0);
        assert_eq!(legendre(&big(10), p(5)), 0);
        // Full residue classification mod 5: squares are {1, 4}.
        assert_eq!(legendre(&big(1), p(5)), 1);
        assert_eq!(legendre(&big(2), p(5)), -1);
        assert_eq!(legendre(&big(3), p(5)), -1);
        assert_eq!(legendre(&big(4), p(5)), 1);
    }

    #[test]
    fn legendre_power_conventions() {
        // Zeroth power is the empty product, even at p | a.
        assert_eq!(legendre_power(&big(2), p(7), 0), 1);
        assert_eq!(legendre_power(&big(7), p(7), 0), 1);
        assert_eq!(legendre_power(&big(7), p(7), 2), 0);
        // (-1|3) = -1, so even powers are 1 and odd powers -1.
        assert_eq!(legendre_power(&big(-1), p(3), 2), 1);
        assert_eq!(legendre_power(&big(-1), p(3), 3), -1);
    }

    #[test]
    fn least_nonresidue_small() {
        assert_eq!(least_nonresidue(p(3)), 2);
        assert_eq!(least_nonresidue(p(5)), 2);
        assert_eq!(least_nonresidue(p(7)), 3);
        assert_eq!(least_nonresidue(p(11)), 2);
        assert_eq!(least_nonresidue(p(13)), 2);
    }

    #[test]
    fn epsilon_values() {
        // 3^1 = 3 (mod 4) -> i; 3^2 = 1 (mod 4) -> 1; 5^k = 1 (mod 4) -> 1.
        assert_eq!(epsilon(p(3), 1), PhaseUnit::I);
        assert_eq!(epsilon(p(3), 2), PhaseUnit::ONE);
        assert_eq!(epsilon(p(5), 7), PhaseUnit::ONE);
        assert_eq!(epsilon(p(7), 3), PhaseUnit::I);
    }

    #[test]
    fn epsilon_square_law() {
        // epsilon(p,k)^2 = (-1|p)^k for every odd prime and depth.
        for q in [3u64, 5, 7, 11, 13, 17, 19, 23] {
            let pr = p(q);
            for k in 0..8u32 {
                let sq = epsilon(pr, k).pow(2);
                let expected = PhaseUnit::from_sign(legendre_power(&big(-1), pr, k));
                assert_eq!(sq, expected, "p = {q}, k = {k}");
            }
        }
    }

    #[test]
    fn phase_unit_group_structure() {
        use PhaseUnit as P;
        assert_eq!(P::I * P::I, P::MINUS_ONE);
        assert_eq!(P::I * P::MINUS_I, P::ONE);
        assert_eq!(P::MINUS_ONE * P::MINUS_ONE, P::ONE);
        assert_eq!(P::I.pow(4), P::ONE);
        assert_eq!(P::MINUS_I.pow(3), P::I);
        assert_eq!(P::I.to_complex(), Complex64::new(0.0, 1.0));
        assert_eq!(P::MINUS_ONE.real_sign(), Some(-1));
        assert_eq!(P::I.real_sign(), None);
        assert_eq!(format!("{} {} {} {}", P::ONE, P::I, P::MINUS_ONE, P::MINUS_I), "1 i -1 -i");
    }

    #[test]
    fn rational_basics() {
        let r = Rational::new(big(4), big(6));
        assert_eq!((r.numer(), r.denom()), (&big(2), &big(3)));
        assert_eq!(r.to_string(), "2/3");
        assert_eq!(Rational::from(7i64).to_string(), "7");
        assert_eq!(Rational::new(big(3), big(-6)).to_string(), "-1/2");

        let p3 = p(3);
        assert_eq!(Rational::prime_power(p3, 4), Rational::from(81i64));
        assert_eq!(Rational::prime_power(p3, -2), Rational::new(big(1), big(9)));
        assert_eq!(Rational::prime_power(p3, 0), Rational::one());

        assert_eq!(
            "8/12".parse::<Rational>().unwrap(),
            Rational::new(big(2), big(3))
        );
        assert_eq!("-5".parse::<Rational>().unwrap(), Rational::from(-5i64));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x/2".parse::<Rational>().is_err());
    }

    proptest! {
        /// (ab|p) = (a|p)(b|p) and (a + p|p) = (a|p).
        #[test]
        fn legendre_multiplicative_and_periodic(
            a in -2000i64..2000,
            b in -2000i64..2000,
            q in prop::sample::select(vec![3u64, 5, 7, 11, 13, 31, 97]),
        ) {
            let pr = p(q);
            let ab = big(a) * big(b);
            prop_assert_eq!(legendre(&ab, pr), legendre(&big(a), pr) * legendre(&big(b), pr));
            prop_assert_eq!(legendre(&(big(a) + big(q as i64)), pr), legendre(&big(a), pr));
            prop_assert_eq!(legendre_i64(a, pr), legendre(&big(a), pr));
        }

        /// reconstruct(padic_split(n)) = n, with a p-free unit.
        #[test]
        fn padic_split_round_trip(
            n in prop::num::i64::ANY.prop_filter("nonzero", |n| *n != 0),
            q in prop::sample::select(vec![3u64, 5, 7, 11, 13]),
        ) {
            let pr = p(q);
            let s = padic_split(&big(n), pr).unwrap();
            prop_assert_eq!(s.reconstruct(), big(n));
            prop_assert!(!s.unit().is_multiple_of(&pr.to_bigint()));
        }

        /// Display/FromStr round-trip for rationals.
        #[test]
        fn rational_display_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let r = Rational::new(big(n), big(d));
            let back: Rational = r.to_string().parse().unwrap();
            prop_assert_eq!(back, r);
        }
    }
}
