//! Quadratic Gauss sums over odd prime powers, held in exact symbolic form.
//!
//! The sum in question is
//!
//! ```text
//! G(a; p^k) = sum over t mod p^k of e(a t^2 / p^k),   e(x) = exp(2 pi i x).
//! ```
//!
//! For odd p its value is always `phase * p^(h/2)` with `phase` a fourth
//! root of unity and `h` a nonnegative integer: writing a = a0 * p^l with
//! p not dividing a0,
//!
//! * if a = 0 or l >= k, every term is 1 and G = p^k;
//! * otherwise G = p^((k+l)/2) * (a0|p)^(k-l) * eps(p^(k-l)), where
//!   eps(p^j) is 1 for p^j = 1 (mod 4) and i for p^j = 3 (mod 4).
//!
//! [`GaussValue`] stores `(phase, h)` exactly; [`gauss_sum_float`] is the
//! independent term-by-term numeric oracle the exact form is checked
//! against.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ntkernel::{self, epsilon, padic_split, OddPrime, PhaseUnit, Rational};

/// Default cap on the modulus of the term-by-term float evaluation.
pub const DEFAULT_FLOAT_CAP: u64 = 1_000_000;

/// A value of the form `phase * p^(half_exponent / 2)` with `phase` a fourth
/// root of unity — the exact shape of every quadratic Gauss sum over an odd
/// prime power, closed under multiplication at a fixed prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct GaussValue {
    prime: OddPrime,
    half_exponent: u32,
    phase: PhaseUnit,
}

impl GaussValue {
    pub fn new(prime: OddPrime, half_exponent: u32, phase: PhaseUnit) -> GaussValue {
        GaussValue {
            prime,
            half_exponent,
            phase,
        }
    }

    pub fn prime(&self) -> OddPrime {
        self.prime
    }

    /// h in `phase * p^(h/2)`; odd h carries a factor of sqrt(p).
    pub fn half_exponent(&self) -> u32 {
        self.half_exponent
    }

    pub fn phase(&self) -> PhaseUnit {
        self.phase
    }

    /// Exact product; the primes must match.
    pub fn checked_mul(&self, rhs: &GaussValue) -> Result<GaussValue> {
        if self.prime != rhs.prime {
            return Err(Error::PrimeMismatch {
                left: self.prime.get(),
                right: rhs.prime.get(),
            });
        }
        Ok(GaussValue {
            prime: self.prime,
            half_exponent: self.half_exponent + rhs.half_exponent,
            phase: self.phase * rhs.phase,
        })
    }

    /// The exact rational value, defined only when the phase is real and the
    /// power of p is integral.
    pub fn to_rational(&self) -> Result<Rational> {
        let irrational = || Error::IrrationalValue {
            value: self.to_string(),
        };
        let sign = self.phase.real_sign().ok_or_else(irrational)?;
        if self.half_exponent % 2 != 0 {
            return Err(irrational());
        }
        let mag = Rational::prime_power(self.prime, (self.half_exponent / 2) as i64);
        Ok(if sign < 0 { -mag } else { mag })
    }

    /// |value|^2 = p^h, always rational.
    pub fn magnitude_squared(&self) -> Rational {
        Rational::prime_power(self.prime, self.half_exponent as i64)
    }

    /// Nearest-double complex value, `phase * sqrt(p)^h`.
    pub fn to_complex(&self) -> Complex64 {
        let mag = (self.prime.get() as f64)
            .sqrt()
            .powi(self.half_exponent as i32);
        self.phase.to_complex() * mag
    }

    /// `phase * p^(h/2)` from the split pieces: the Legendre symbol of the
    /// unit part of a (+1 or -1), and v_p(a) (saturating at k). This is the
    /// closed form itself; [`gauss_sum_exact`] is a thin wrapper.
    pub(crate) fn from_unit_valuation(
        chi_unit: i32,
        valuation: u32,
        p: OddPrime,
        k: u32,
    ) -> GaussValue {
        debug_assert!(k >= 1);
        if valuation >= k {
            // Every term is e(integer) = 1.
            return GaussValue::new(p, 2 * k, PhaseUnit::ONE);
        }
        debug_assert!(chi_unit == 1 || chi_unit == -1);
        let j = k - valuation;
        let sign = if j % 2 == 0 { 1 } else { chi_unit };
        GaussValue::new(p, k + valuation, PhaseUnit::from_sign(sign) * epsilon(p, j))
    }
}

impl std::fmt::Display for GaussValue {
    /// `phase * p^(exp)` with the exponent shown as h/2 in lowest terms,
    /// e.g. `i * 3^(1/2)` or `1 * 3^(2)`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let h = self.half_exponent;
        if h % 2 == 0 {
            write!(f, "{} * {}^({})", self.phase, self.prime, h / 2)
        } else {
            write!(f, "{} * {}^({}/2)", self.phase, self.prime, h)
        }
    }
}

/// Exact value of G(a; p^k) for k >= 1 (see the module overview for the
/// closed form).
pub fn gauss_sum_exact(a: &BigInt, p: OddPrime, k: u32) -> GaussValue {
    assert!(k >= 1, "modulus exponent k must be positive");
    if a.is_zero() {
        return GaussValue::new(p, 2 * k, PhaseUnit::ONE);
    }
    let split = padic_split(a, p).expect("a is nonzero");
    let valuation = split.exponent().min(k);
    let chi = if valuation >= k {
        1 // unit part is irrelevant once the sum degenerates
    } else {
        ntkernel::legendre(split.unit(), p)
    };
    GaussValue::from_unit_valuation(chi, valuation, p, k)
}

/// Term-by-term numeric evaluation of G(a; q) for an arbitrary modulus
/// q >= 1, used as an independent oracle for [`gauss_sum_exact`]. Errors
/// when q exceeds [`DEFAULT_FLOAT_CAP`].
pub fn gauss_sum_float(a: &BigInt, q: u64) -> Result<Complex64> {
    gauss_sum_float_with_cap(a, q, DEFAULT_FLOAT_CAP)
}

/// [`gauss_sum_float`] with an explicit cap on q.
pub fn gauss_sum_float_with_cap(a: &BigInt, q: u64, cap: u64) -> Result<Complex64> {
    assert!(q >= 1, "modulus must be positive");
    if q > cap {
        return Err(Error::ResourceLimit {
            what: "float Gauss sum modulus",
            requested: q,
            cap,
        });
    }
    let a_red = a
        .mod_floor(&BigInt::from(q))
        .to_u64()
        .expect("residue fits in u64");
    let step = std::f64::consts::TAU / q as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for t in 0..q {
        let sq = (t as u128 * t as u128 % q as u128) as u64;
        let phase = (a_red as u128 * sq as u128 % q as u128) as u64;
        acc += Complex64::from_polar(1.0, step * phase as f64);
    }
    Ok(acc)
}

/// Exact product G(x) * G(y) * G(z) of three Gauss-sum values at the same
/// prime — the shape that arises when a diagonal ternary form's three
/// variables are summed independently.
pub fn gauss_product(x: &GaussValue, y: &GaussValue, z: &GaussValue) -> Result<GaussValue> {
    x.checked_mul(y)?.checked_mul(z)
}
