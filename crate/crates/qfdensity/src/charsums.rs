//! Closed forms for the character and exponential sums that the stratified
//! count evaluator is assembled from.
//!
//! Four families, each with an elementary direct-summation oracle in the
//! tests:
//!
//! * full geometric sums `sum over t mod q of e(a t / q)`
//!   ([`geometric_exp_sum`]): q when q | a, else 0;
//! * Legendre-power sums over the units of Z/p^k
//!   ([`legendre_power_unit_sum`]): p^k (1 - 1/p) for even powers, 0 for
//!   odd, since the symbol is a nontrivial character exactly when the power
//!   is odd;
//! * the same unit sums twisted by e(m t / p^k) ([`twisted_unit_sum`]):
//!   -p^(k-1) for even powers, and a half-integral power of p with a unit
//!   phase — a [`GaussValue`] — for odd powers;
//! * geometric-in-j sums of Legendre powers ([`legendre_interval_sum`]) and
//!   of half-integral powers p^(-j/2) restricted to one parity of j
//!   ([`half_power_tail_sum`]).
//!
//! The last family is where irrational values can appear: summing j of odd
//! parity leaves a loose factor of sqrt(p). [`TailSum`] keeps that factor
//! symbolic so callers must absorb it into an adjacent p^(n/2) prefactor —
//! converting an unabsorbed half power to a rational is an error rather
//! than a rounding.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::gauss::GaussValue;
use crate::ntkernel::{epsilon, legendre_i64, OddPrime, PhaseUnit, Rational};

/// Parity selector for the half-power tail sums.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// The parity of n.
    pub fn of(n: i64) -> Parity {
        if n.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Value of a unit-group sum twisted by an additive character: either an
/// exact rational or a symbolic `phase * p^(h/2)`.
#[derive(Clone, PartialEq, Debug)]
pub enum TwistedUnitSum {
    Rational(Rational),
    Gauss(GaussValue),
}

/// Value of a parity-restricted sum of p^(-j/2) terms.
///
/// `Rational(f)` is the exact value f; `HalfPower(f)` means f * sqrt(p),
/// which is irrational unless f = 0.
#[derive(Clone, PartialEq, Debug)]
pub enum TailSum {
    Rational(Rational),
    HalfPower(Rational),
}

impl TailSum {
    /// The exact rational value. A nonzero half-power factor has none; the
    /// caller must multiply it into a p^(n/2) prefactor instead.
    pub fn into_rational(self) -> Result<Rational> {
        match self {
            TailSum::Rational(f) => Ok(f),
            TailSum::HalfPower(f) if f.is_zero() => Ok(f),
            TailSum::HalfPower(_) => Err(Error::UnabsorbedHalfPower),
        }
    }

    /// Nearest-double value (f or f * sqrt(p)), for numeric cross-checks.
    pub fn to_f64(&self, p: OddPrime) -> f64 {
        match self {
            TailSum::Rational(f) => f.to_f64(),
            TailSum::HalfPower(f) => f.to_f64() * (p.get() as f64).sqrt(),
        }
    }
}

/// sum over t mod q of e(a t / q): q when q | a (every term is 1), else 0
/// (a full orbit of a nontrivial character).
pub fn geometric_exp_sum(a: i64, q: u64) -> u64 {
    assert!(q >= 1, "modulus must be positive");
    if a.rem_euclid(q as i64) == 0 {
        q
    } else {
        0
    }
}

/// sum over units t of Z/p^k of (t|p)^m, for k >= 1:
/// the unit count p^k (1 - 1/p) when m is even, 0 when m is odd.
pub fn legendre_power_unit_sum(p: OddPrime, k: u32, m: u32) -> Rational {
    assert!(k >= 1, "depth k must be positive");
    if m % 2 == 0 {
        Rational::prime_power(p, k as i64) - Rational::prime_power(p, k as i64 - 1)
    } else {
        Rational::zero()
    }
}

/// sum over units t of Z/p^k of (t|p)^n e(m t / p), for k >= 1 and m
/// coprime to p (checked). Both factors only see t mod p, and each nonzero
/// residue mod p has p^(k-1) unit lifts, so the sum is p^(k-1) times its
/// k = 1 value:
///
/// * n even: p^(k-1) sum of e(m s / p) over s != 0, giving -p^(k-1);
/// * n odd: a quadratic Gauss sum in disguise, (m|p) eps(p) p^(k - 1/2).
pub fn twisted_unit_sum(p: OddPrime, k: u32, m: i64, n: u32) -> Result<TwistedUnitSum> {
    assert!(k >= 1, "depth k must be positive");
    if m.rem_euclid(p.get() as i64) == 0 {
        return Err(Error::NotCoprime {
            name: "twist multiplier m",
            prime: p.get(),
        });
    }
    if n % 2 == 0 {
        Ok(TwistedUnitSum::Rational(-Rational::prime_power(
            p,
            k as i64 - 1,
        )))
    } else {
        let phase = PhaseUnit::from_sign(legendre_i64(m, p)) * epsilon(p, 1);
        Ok(TwistedUnitSum::Gauss(GaussValue::new(p, 2 * k - 1, phase)))
    }
}

/// sum for j = n1..n2 of (r|p)^j, for 0 <= n1 <= n2 <= k and r coprime to p
/// (both checked). Closed form: the even j contribute their count, the odd
/// j contribute (r|p) times theirs, and the two counts differ only by the
/// endpoint parities:
///
/// ```text
/// (n2-n1+1)/2 + ((-1)^n1 + (-1)^n2)/4  +  (r|p) [ (n2-n1+1)/2 - ((-1)^n1 + (-1)^n2)/4 ]
/// ```
pub fn legendre_interval_sum(r: i64, p: OddPrime, n1: i64, n2: i64, k: i64) -> Result<Rational> {
    if !(0 <= n1 && n1 <= n2 && n2 <= k) {
        return Err(Error::InvalidInterval { n1, n2 });
    }
    if r.rem_euclid(p.get() as i64) == 0 {
        return Err(Error::NotCoprime {
            name: "interval base r",
            prime: p.get(),
        });
    }
    Ok(interval_sum_signed(legendre_i64(r, p), n1, n2))
}

/// The [`legendre_interval_sum`] closed form, taking the symbol value
/// chi = (r|p) in {+1, -1} directly — for callers that already hold the
/// sign of a product of units rather than the product itself.
pub(crate) fn interval_sum_signed(chi: i32, n1: i64, n2: i64) -> Rational {
    debug_assert!(chi == 1 || chi == -1);
    debug_assert!(0 <= n1 && n1 <= n2);
    let sign = |n: i64| BigInt::from(if n % 2 == 0 { 1 } else { -1 });
    let half_len = Rational::new(BigInt::from(n2 - n1 + 1), BigInt::from(2));
    let parity_corr = Rational::new(sign(n1) + sign(n2), BigInt::from(4));
    &half_len + &parity_corr + Rational::from(chi as i64) * (half_len - parity_corr)
}

/// sum over j in [n1, n2] of the stated parity of p^(-j/2) (1 - 1/p), for
/// 0 <= n1 <= n2 (checked). An empty parity class sums to zero.
///
/// Even j give an exact rational; odd j give sqrt(p) times one, returned
/// symbolically as [`TailSum::HalfPower`]:
///
/// ```text
/// even:  p^(-ceil(n1/2))       (1 - p^(-floor(n2/2)   + ceil(n1/2)     - 1))
/// odd:   p^(-ceil((n1+1)/2))   (1 - p^(-floor((n2+1)/2) + ceil((n1+1)/2) - 1))  * sqrt(p)
/// ```
pub fn half_power_tail_sum(p: OddPrime, n1: i64, n2: i64, parity: Parity) -> Result<TailSum> {
    if !(0 <= n1 && n1 <= n2) {
        return Err(Error::InvalidInterval { n1, n2 });
    }
    // Reindex by i = j/2 (even) or i = (j+1)/2 (odd): a plain geometric sum
    // over i in [i1, i2], collapsing to p^(-i1) - p^(-i2 - 1).
    let (i1, i2) = match parity {
        Parity::Even => ((n1 + 1).div_euclid(2), n2.div_euclid(2)),
        Parity::Odd => ((n1 + 2).div_euclid(2), (n2 + 1).div_euclid(2)),
    };
    let factor = Rational::prime_power(p, -i1)
        * (Rational::one() - Rational::prime_power(p, i1 - i2 - 1));
    Ok(match parity {
        Parity::Even => TailSum::Rational(factor),
        Parity::Odd => TailSum::HalfPower(factor),
    })
}
