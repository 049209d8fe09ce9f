//! Local representation counts r(m, Q; n) = #{v in (Z/nZ)^3 : Q(v) = m},
//! by three independent routes.
//!
//! * [`count_bruteforce`]: direct enumeration for any modulus, organized as
//!   a square-histogram convolution — O(n^2) time, O(n) space — so moduli up
//!   to about 10^4 stay cheap.
//! * [`count_via_gauss_float`]: the finite Fourier expansion of the count,
//!   p^{2k} + p^{-k} sum over t != 0 of e(-mt/p^k) G(at) G(bt) G(ct), with
//!   each Gauss sum taken exactly and only the final accumulation in
//!   floating point. Verifies its own rounding residual.
//! * [`count_stratified`] / [`count_zero_stratified`]: the same Fourier sum
//!   evaluated exactly, stratum by stratum. Grouping t by its valuation tau
//!   turns each stratum sum s(k, tau) into a closed-form character sum (the
//!   lemmas in [`crate::charsums`]), and the strata assemble into a fully
//!   rational expression.
//!
//! The stratified evaluators require the form to be normalized at p — unit
//! leading coefficient and ascending valuations, see
//! [`crate::density::normalize`] — and, for a nonzero target, depth
//! k >= v_p(m) + 1, past which r grows by exactly p^2 per extra level.
//!
//! Throughout, for the normalized form a x^2 + b0 p^{b1} y^2 + c0 p^{c1} z^2
//! and target m = m0 p^{m1}, a stratum at valuation tau is described by
//! j = k - tau; the j-th stratum's Gauss sums degenerate coefficient by
//! coefficient as j falls below c1, then b1.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::charsums::{self, Parity, TailSum};
use crate::error::{Error, Result};
use crate::gauss::{gauss_product, GaussValue};
use crate::ntkernel::{legendre, legendre_i64, padic_split, OddPrime, Rational};

/// Default modulus cap for the brute-force counters.
pub const DEFAULT_BRUTE_CAP: u64 = 10_000;

/// Modulus cap for the float Fourier evaluator.
pub const GAUSS_FLOAT_CAP: u64 = 100_000;

/// A diagonal ternary quadratic form a x^2 + b y^2 + c z^2 with nonzero
/// integer coefficients (zero coefficients degenerate the rank and are
/// rejected at construction).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DiagonalForm {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl DiagonalForm {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
    ) -> Result<DiagonalForm> {
        let (a, b, c) = (a.into(), b.into(), c.into());
        if a.is_zero() || b.is_zero() || c.is_zero() {
            return Err(Error::ZeroCoefficient);
        }
        Ok(DiagonalForm { a, b, c })
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn coefficients(&self) -> [&BigInt; 3] {
        [&self.a, &self.b, &self.c]
    }
}

impl std::fmt::Display for DiagonalForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "diag({}, {}, {})", self.a, self.b, self.c)
    }
}

/// One stratum's contribution s(k, tau) to the Fourier expansion of
/// r(m, Q; p^k): the sum over t of valuation exactly tau. Always an
/// integer-valued rational (the half powers of p cancel within a stratum).
#[derive(Clone, PartialEq, Debug)]
pub struct StratumTerm {
    pub k: u32,
    pub tau: u32,
    pub value: Rational,
}

// --------------------------------------------------------------------------
// Brute force
// --------------------------------------------------------------------------

/// h[t] = #{x mod n : coeff * x^2 = t (mod n)}.
fn square_histogram(coeff: &BigInt, n: u64) -> Vec<u64> {
    let c = coeff
        .mod_floor(&BigInt::from(n))
        .to_u64()
        .expect("residue fits in u64");
    let mut h = vec![0u64; n as usize];
    for x in 0..n {
        let sq = (x as u128 * x as u128 % n as u128) as u64;
        let t = (c as u128 * sq as u128 % n as u128) as u64;
        h[t as usize] += 1;
    }
    h
}

/// r(m, Q; n) by enumeration: histogram the three squares, convolve two of
/// the histograms, pair with the third. Errors when n exceeds
/// [`DEFAULT_BRUTE_CAP`].
pub fn count_bruteforce(m: &BigInt, q: &DiagonalForm, n: u64) -> Result<u64> {
    count_bruteforce_with_cap(m, q, n, DEFAULT_BRUTE_CAP)
}

/// [`count_bruteforce`] with an explicit modulus cap.
pub fn count_bruteforce_with_cap(m: &BigInt, q: &DiagonalForm, n: u64, cap: u64) -> Result<u64> {
    assert!(n >= 1, "modulus must be positive");
    if n > cap {
        return Err(Error::ResourceLimit {
            what: "brute-force modulus",
            requested: n,
            cap,
        });
    }
    let ha = square_histogram(&q.a, n);
    let hb = square_histogram(&q.b, n);
    let hc = square_histogram(&q.c, n);
    let nn = n as usize;

    // conv[s] = #{(x, y) : a x^2 + b y^2 = s (mod n)}.
    let mut conv = vec![0u64; nn];
    for (i, &hai) in ha.iter().enumerate() {
        if hai == 0 {
            continue;
        }
        let mut idx = i;
        for &hbj in &hb {
            conv[idx] += hai * hbj;
            idx += 1;
            if idx == nn {
                idx = 0;
            }
        }
    }

    let m_red = m
        .mod_floor(&BigInt::from(n))
        .to_u64()
        .expect("residue fits in u64") as usize;
    let mut total = 0u64;
    for (s, &cs) in conv.iter().enumerate() {
        if cs != 0 {
            let need = (m_red + nn - s) % nn;
            total += cs * hc[need];
        }
    }
    Ok(total)
}

/// #{(x, y) in (Z/nZ)^2 : a x^2 + b y^2 = m (mod n)} — the rank-2 analogue
/// of [`count_bruteforce`], O(n) after the histograms.
pub fn count_bruteforce_binary(m: &BigInt, a: &BigInt, b: &BigInt, n: u64) -> Result<u64> {
    count_bruteforce_binary_with_cap(m, a, b, n, DEFAULT_BRUTE_CAP)
}

/// [`count_bruteforce_binary`] with an explicit modulus cap.
pub fn count_bruteforce_binary_with_cap(
    m: &BigInt,
    a: &BigInt,
    b: &BigInt,
    n: u64,
    cap: u64,
) -> Result<u64> {
    assert!(n >= 1, "modulus must be positive");
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroCoefficient);
    }
    if n > cap {
        return Err(Error::ResourceLimit {
            what: "brute-force modulus",
            requested: n,
            cap,
        });
    }
    let ha = square_histogram(a, n);
    let hb = square_histogram(b, n);
    let nn = n as usize;
    let m_red = m
        .mod_floor(&BigInt::from(n))
        .to_u64()
        .expect("residue fits in u64") as usize;
    let mut total = 0u64;
    for (t, &hat) in ha.iter().enumerate() {
        if hat != 0 {
            total += hat * hb[(m_red + nn - t) % nn];
        }
    }
    Ok(total)
}

// --------------------------------------------------------------------------
// Float Fourier evaluator
// --------------------------------------------------------------------------

/// r(m, Q; p^k) via the Fourier expansion with exact Gauss sums and a float
/// accumulator:
///
/// ```text
/// r = p^{2k} + p^{-k} * sum for t in 1..p^k of e(-m t / p^k) G(at; p^k) G(bt; p^k) G(ct; p^k)
/// ```
///
/// Pre: p^k <= [`GAUSS_FLOAT_CAP`]. The rounded result must sit within
/// 10^-3 * p^{2k} of the complex value, else a numerical-instability error
/// is returned rather than a silently wrong count.
pub fn count_via_gauss_float(m: &BigInt, q: &DiagonalForm, p: OddPrime, k: u32) -> Result<u64> {
    assert!(k >= 1, "depth k must be positive");
    let pv = p.get();
    let pk = pv
        .checked_pow(k)
        .filter(|&pk| pk <= GAUSS_FLOAT_CAP)
        .ok_or(Error::ResourceLimit {
            what: "float Fourier modulus",
            requested: pv.saturating_pow(k),
            cap: GAUSS_FLOAT_CAP,
        })?;

    // Split each coefficient once; the per-t Gauss sums then follow from
    // v_p(coeff * t) = v_p(coeff) + v_p(t) and the multiplicativity of the
    // Legendre symbol on the unit parts.
    let coeff_data: Vec<(i32, u32)> = [&q.a, &q.b, &q.c]
        .into_iter()
        .map(|coeff| {
            let s = padic_split(coeff, p).expect("form coefficients are nonzero");
            (legendre(s.unit(), p), s.exponent().min(k))
        })
        .collect();
    let chi_table: Vec<i32> = (0..pv).map(|t| legendre_i64(t as i64, p)).collect();
    let m_red = m
        .mod_floor(&BigInt::from(pk))
        .to_u64()
        .expect("residue fits in u64");

    let step = -std::f64::consts::TAU / pk as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for t in 1..pk {
        let mut t0 = t;
        let mut tau = 0u32;
        while t0 % pv == 0 {
            t0 /= pv;
            tau += 1;
        }
        let chi_t = chi_table[(t0 % pv) as usize];
        let gs: Vec<GaussValue> = coeff_data
            .iter()
            .map(|&(chi_u, val)| {
                GaussValue::from_unit_valuation(chi_u * chi_t, (val + tau).min(k), p, k)
            })
            .collect();
        let prod = gauss_product(&gs[0], &gs[1], &gs[2]).expect("same prime throughout");
        let twiddle_arg = (m_red as u128 * t as u128 % pk as u128) as u64;
        acc += Complex64::from_polar(1.0, step * twiddle_arg as f64) * prod.to_complex();
    }

    let scale = pk as f64;
    let real = scale * scale + acc.re / scale;
    let imag = acc.im / scale;
    let rounded = real.round();
    let bound = 1e-3 * scale * scale;
    let residual = (real - rounded).abs().max(imag.abs());
    if residual > bound || rounded < 0.0 {
        return Err(Error::NumericalInstability {
            value: real,
            residual,
            bound,
        });
    }
    Ok(rounded as u64)
}

// --------------------------------------------------------------------------
// Exact stratified evaluators
// --------------------------------------------------------------------------

/// Legendre data of a form normalized at p, plus the target's split —
/// everything the stratum formulas consume. chi_* are Legendre symbols of
/// the unit parts, each +1 or -1.
struct StratumParams {
    p: OddPrime,
    chi_a: i32,
    chi_b0: i32,
    chi_c0: i32,
    b1: u32,
    c1: u32,
    /// (-1|p).
    chi_neg: i32,
    /// Target split m = m0 p^{m1}; chi_m0 = (m0|p).
    chi_m0: i32,
    m1: u32,
}

impl StratumParams {
    /// Validates the normalization hypotheses (p does not divide a,
    /// valuations of b and c ascend) and a nonzero target.
    fn extract(m: &BigInt, q: &DiagonalForm, p: OddPrime) -> Result<StratumParams> {
        if m.is_zero() {
            return Err(Error::ZeroTarget);
        }
        let sa = padic_split(&q.a, p).expect("coefficients are nonzero");
        if sa.exponent() != 0 {
            return Err(Error::NotNormalized {
                prime: p.get(),
                reason: "leading coefficient must be a p-adic unit",
            });
        }
        let sb = padic_split(&q.b, p).expect("coefficients are nonzero");
        let sc = padic_split(&q.c, p).expect("coefficients are nonzero");
        if sb.exponent() > sc.exponent() {
            return Err(Error::NotNormalized {
                prime: p.get(),
                reason: "coefficient valuations must be ascending",
            });
        }
        let sm = padic_split(m, p).expect("m is nonzero");
        Ok(StratumParams {
            p,
            chi_a: legendre(sa.unit(), p),
            chi_b0: legendre(sb.unit(), p),
            chi_c0: legendre(sc.unit(), p),
            b1: sb.exponent(),
            c1: sc.exponent(),
            chi_neg: legendre_i64(-1, p),
            chi_m0: legendre(sm.unit(), p),
            m1: sm.exponent(),
        })
    }

    fn pw(&self, e: i64) -> Rational {
        Rational::prime_power(self.p, e)
    }

    /// 1 - 1/p, the relative size of the unit group.
    fn unit_weight(&self) -> Rational {
        Rational::one() - self.pw(-1)
    }

    /// sign^exp for sign in {+1, -1}.
    fn sgn(sign: i32, exp: u32) -> i32 {
        if sign == 1 || exp % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// The boundary stratum s(k, k - m1 - 1), where the additive twist
    /// e(-m t / p^k) first becomes a nontrivial character. Its shape depends
    /// on which Gauss sums have degenerated at j = m1 + 1, i.e. on where m1
    /// sits relative to b1 and c1.
    fn boundary(&self, k: u32) -> Rational {
        let k3 = 3 * k as i64;
        let (b1, c1, m1) = (self.b1 as i64, self.c1 as i64, self.m1 as i64);
        if m1 < b1 {
            // Only the a-sum is live: a pure quadratic Gauss sum in t0.
            if m1 % 2 == 0 {
                self.pw(k3 + m1 / 2) * Rational::from((self.chi_a * self.chi_m0) as i64)
            } else {
                -self.pw(k3 + (m1 - 1) / 2)
            }
        } else if m1 < c1 {
            // a- and b-sums live.
            if b1 % 2 == 0 {
                let chi = Self::sgn(self.chi_neg * self.chi_a * self.chi_b0, self.m1 + 1);
                -self.pw(k3 + b1 / 2 - 1) * Rational::from(chi as i64)
            } else {
                let chi = Self::sgn(self.chi_a, self.m1 + 1)
                    * Self::sgn(self.chi_b0, self.m1)
                    * self.chi_m0;
                self.pw(k3 + (b1 - 1) / 2) * Rational::from(chi as i64)
            }
        } else {
            // All three sums live; the phase bookkeeping splits on whether
            // the b- and c-valuations agree mod 2.
            if (b1 - c1) % 2 == 0 {
                let chi_bc = self.chi_neg * self.chi_b0 * self.chi_c0;
                if m1 % 2 == 0 {
                    let chi = self.chi_a * self.chi_m0 * Self::sgn(chi_bc, self.b1 + 1);
                    self.pw(k3 - m1 / 2 + (b1 + c1) / 2 - 1) * Rational::from(chi as i64)
                } else {
                    let chi = Self::sgn(chi_bc, self.b1);
                    -self.pw(k3 - (m1 + 1) / 2 + (b1 + c1) / 2 - 1) * Rational::from(chi as i64)
                }
            } else if m1 % 2 == 0 {
                let chi = self.chi_neg
                    * self.chi_a
                    * Self::sgn(self.chi_b0, self.b1 + 1)
                    * Self::sgn(self.chi_c0, self.b1);
                -self.pw(k3 - m1 / 2 + (b1 + c1 - 1) / 2 - 1) * Rational::from(chi as i64)
            } else {
                let chi = Self::sgn(self.chi_b0, self.b1)
                    * Self::sgn(self.chi_c0, self.b1 + 1)
                    * self.chi_m0;
                self.pw(k3 - (m1 + 1) / 2 + (b1 + c1 - 1) / 2) * Rational::from(chi as i64)
            }
        }
    }

    /// s(k, tau) for any stratum, j = k - tau in [1, m1]; the boundary and
    /// deeper strata are handled by [`Self::boundary`] and the vanishing
    /// lemma. Split by how many Gauss sums are still nondegenerate.
    fn middle_term(&self, k: u32, j: u32) -> Rational {
        debug_assert!(j >= 1 && j <= self.m1);
        let k3 = 3 * k as i64;
        let (b1, c1) = (self.b1 as i64, self.c1 as i64);
        if j as i64 <= b1 {
            // Only the a-sum is live; a full unit-group character sum.
            if j % 2 == 0 {
                self.pw(k3 + j as i64 / 2) * self.unit_weight()
            } else {
                Rational::zero()
            }
        } else if (j as i64) <= c1 {
            // a- and b-sums live: the strata alternate with (-a b0 | p)^j
            // and vanish entirely for odd b1.
            if b1 % 2 == 0 {
                let chi = Self::sgn(self.chi_neg * self.chi_a * self.chi_b0, j);
                self.pw(k3 + b1 / 2) * Rational::from(chi as i64) * self.unit_weight()
            } else {
                Rational::zero()
            }
        } else {
            // All three sums live.
            let j = j as i64;
            if (b1 - c1) % 2 == 0 {
                if j % 2 == 0 {
                    let chi = Self::sgn(self.chi_neg * self.chi_b0 * self.chi_c0, self.b1);
                    self.pw(k3 - j / 2 + (b1 + c1) / 2)
                        * Rational::from(chi as i64)
                        * self.unit_weight()
                } else {
                    Rational::zero()
                }
            } else if j % 2 == 1 {
                let chi = self.chi_neg
                    * self.chi_a
                    * Self::sgn(self.chi_b0, self.b1 + 1)
                    * Self::sgn(self.chi_c0, self.b1);
                self.pw(k3 + (b1 + c1 - j) / 2)
                    * Rational::from(chi as i64)
                    * self.unit_weight()
            } else {
                Rational::zero()
            }
        }
    }
}

/// Exact r(m, Q; p^k) for m != 0 by summing the valuation strata in closed
/// form. Requires Q normalized at p (p does not divide a, ascending
/// valuations — see the module docs) and depth k >= v_p(m) + 1.
pub fn count_stratified(m: &BigInt, q: &DiagonalForm, p: OddPrime, k: u32) -> Result<BigInt> {
    let params = StratumParams::extract(m, q, p)?;
    if k < params.m1 + 1 {
        return Err(Error::DepthTooSmall {
            k,
            min: params.m1 + 1,
        });
    }
    let k3 = 3 * k as i64;
    let (b1, c1, m1) = (params.b1 as i64, params.c1 as i64, params.m1 as i64);

    // Boundary stratum j = m1 + 1 (strata deeper than it vanish outright).
    let boundary = StratumTerm {
        k,
        tau: k - params.m1 - 1,
        value: params.boundary(k),
    };
    debug_assert!(boundary.value.is_integer(), "stratum values are integers");
    let mut total = boundary.value;

    // Strata with a- and b-sums live: j in [b1 + 1, min(c1, m1)], a
    // geometric sum in the sign (-a b0 | p)^j. Vanishes for odd b1.
    let two_active_top = c1.min(m1);
    if b1 % 2 == 0 && two_active_top > b1 {
        let chi = params.chi_neg * params.chi_a * params.chi_b0;
        total = total
            + params.pw(k3 + b1 / 2)
                * params.unit_weight()
                * charsums::interval_sum_signed(chi, b1 + 1, two_active_top);
    }

    // Strata with all three sums live: j in [c1 + 1, m1], a half-power tail
    // whose parity class is fixed by b1 + c1 mod 2.
    if m1 > c1 {
        let (parity, prefactor_exp, chi) = if (b1 - c1) % 2 == 0 {
            (
                Parity::Even,
                k3 + (b1 + c1) / 2,
                StratumParams::sgn(params.chi_neg * params.chi_b0 * params.chi_c0, params.b1),
            )
        } else {
            // The odd-parity tail carries sqrt(p); absorbing it raises the
            // prefactor exponent by 1/2, integral since b1 + c1 is odd.
            (
                Parity::Odd,
                k3 + (b1 + c1 + 1) / 2,
                params.chi_neg
                    * params.chi_a
                    * StratumParams::sgn(params.chi_b0, params.b1 + 1)
                    * StratumParams::sgn(params.chi_c0, params.b1),
            )
        };
        let tail = match charsums::half_power_tail_sum(p, c1 + 1, m1, parity)? {
            TailSum::Rational(f) | TailSum::HalfPower(f) => f,
        };
        total = total + params.pw(prefactor_exp) * Rational::from(chi as i64) * tail;
    }

    // Fully degenerate strata j <= min(m1, b1): only the a-sum is live, a
    // geometric sum over even j collapsing to p^{3k} (p^{floor(n/2)} - 1).
    let n1 = m1.min(b1);
    total = total + params.pw(k3) * (params.pw(n1 / 2) - Rational::one());

    let r = params.pw(2 * k as i64) + params.pw(-(k as i64)) * total;
    let r = r
        .to_integer()
        .expect("assembled count is an integer");
    debug_assert!(!r.is_negative(), "counts are nonnegative");
    Ok(r)
}

/// s(k, tau) for a single stratum — the per-tau closed forms, exposed so
/// the sum-of-strata identity can be tested term by term against the
/// assembled evaluator. Same preconditions as [`count_stratified`], plus
/// tau <= k - 1.
pub fn stratum_term(
    m: &BigInt,
    q: &DiagonalForm,
    p: OddPrime,
    k: u32,
    tau: u32,
) -> Result<StratumTerm> {
    assert!(tau < k, "stratum valuation tau must lie in [0, k-1]");
    let params = StratumParams::extract(m, q, p)?;
    if k < params.m1 + 1 {
        return Err(Error::DepthTooSmall {
            k,
            min: params.m1 + 1,
        });
    }
    let value = if tau + params.m1 + 2 <= k {
        // The twist e(-m0 t0 / p^{j - m1}) still sweeps full unit orbits:
        // the stratum cancels to zero.
        Rational::zero()
    } else if tau + params.m1 + 1 == k {
        params.boundary(k)
    } else {
        params.middle_term(k, k - tau)
    };
    debug_assert!(value.is_integer(), "stratum values are integers");
    Ok(StratumTerm { k, tau, value })
}

/// Exact r(0, Q; p^k) for Q normalized at p and k >= c1 + 1 (shallower
/// depths don't contain all the stratum ranges; fall back to brute force).
///
/// The m = 0 Fourier sum has no boundary stratum — every stratum is a pure
/// character sum — and collapses to a four-branch closed form in the
/// parities of b1 and c1.
pub fn count_zero_stratified(q: &DiagonalForm, p: OddPrime, k: u32) -> Result<BigInt> {
    // Reuse the hypothesis validation with a dummy nonzero target.
    let params = StratumParams::extract(&BigInt::from(1), q, p)?;
    if k < params.c1 + 1 {
        return Err(Error::DepthTooSmall {
            k,
            min: params.c1 + 1,
        });
    }
    let (b1, c1, kk) = (params.b1 as i64, params.c1 as i64, k as i64);
    let k2 = 2 * kk;
    let chi_ab = Rational::from((params.chi_neg * params.chi_a * params.chi_b0) as i64);
    let one = Rational::one();
    let w = params.unit_weight();

    let r = match (b1 % 2 == 0, c1 % 2 == 0) {
        (true, true) => {
            params.pw(k2 + b1 / 2 - 1) * (&one - params.pw(-(kk / 2) + c1 / 2))
                + params.pw(k2 + b1 / 2)
                    * (&one + w * Rational::from((c1 - b1) / 2) * (one.clone() + chi_ab))
        }
        (true, false) => {
            params.pw(k2 + b1 / 2 - 1)
                * &chi_ab
                * (&one - params.pw(-((kk + 1) / 2) + (c1 + 1) / 2))
                + params.pw(k2 + b1 / 2)
                    * (&one
                        + w * (Rational::from((c1 - b1 - 1) / 2)
                            + chi_ab * Rational::from((c1 - b1 + 1) / 2)))
        }
        (false, true) => {
            let chi_ac = Rational::from((params.chi_neg * params.chi_a * params.chi_c0) as i64);
            params.pw(k2 + (b1 - 1) / 2)
                * (chi_ac * (&one - params.pw(-((kk + 1) / 2) + c1 / 2)) + &one)
        }
        (false, false) => {
            let chi_bc = Rational::from((params.chi_neg * params.chi_b0 * params.chi_c0) as i64);
            params.pw(k2 + (b1 - 1) / 2)
                * (chi_bc * (&one - params.pw(-(kk / 2) + (c1 + 1) / 2 - 1)) + &one)
        }
    };
    let r = r.to_integer().expect("assembled count is an integer");
    debug_assert!(!r.is_negative(), "counts are nonnegative");
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntkernel::least_nonresidue;
    use proptest::prelude::*;

    fn p(v: u64) -> OddPrime {
        OddPrime::new(v).unwrap()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn form(a: i64, b: i64, c: i64) -> DiagonalForm {
        DiagonalForm::new(a, b, c).unwrap()
    }

    #[test]
    fn form_construction_rejects_zero_coefficients() {
        assert_eq!(DiagonalForm::new(0, 1, 1).unwrap_err(), Error::ZeroCoefficient);
        assert_eq!(DiagonalForm::new(1, 0, 1).unwrap_err(), Error::ZeroCoefficient);
        assert_eq!(DiagonalForm::new(1, 1, 0).unwrap_err(), Error::ZeroCoefficient);
        assert_eq!(form(1, -2, 3).to_string(), "diag(1, -2, 3)");
    }

    #[test]
    fn bruteforce_examples() {
        // Enumerated by hand over (Z/3)^3: squares mod 3 are {0, 1, 1},
        // and 1 = 1+0+0 in 3 slot orders with 2 roots of 1 each.
        assert_eq!(count_bruteforce(&big(1), &form(1, 1, 1), 3).unwrap(), 6);
        assert_eq!(count_bruteforce(&big(0), &form(1, 1, 1), 1).unwrap(), 1);
        // x^2 = 3 (mod 9) has no solution: squares mod 9 are {0, 1, 4, 7}.
        assert_eq!(count_bruteforce(&big(3), &form(1, 9, 9), 9).unwrap(), 0);
    }

    #[test]
    fn bruteforce_matches_naive_triple_loop() {
        // The histogram convolution against the O(n^3) definition.
        for n in [2u64, 3, 4, 5, 8, 9, 12] {
            for (a, b, c) in [(1i64, 1, 1), (1, 2, 3), (2, 3, 5), (1, -1, 4), (-2, 6, 9)] {
                for m in -2..=(n as i64) {
                    let mut naive = 0u64;
                    for x in 0..n as i64 {
                        for y in 0..n as i64 {
                            for z in 0..n as i64 {
                                let v = a * x * x + b * y * y + c * z * z - m;
                                if v.rem_euclid(n as i64) == 0 {
                                    naive += 1;
                                }
                            }
                        }
                    }
                    assert_eq!(
                        count_bruteforce(&big(m), &form(a, b, c), n).unwrap(),
                        naive,
                        "m = {m}, Q = ({a},{b},{c}), n = {n}"
                    );
                }
            }
        }
    }

    #[test]
    fn bruteforce_cap() {
        let err = count_bruteforce(&big(1), &form(1, 1, 1), 20_000).unwrap_err();
        assert_eq!(
            err,
            Error::ResourceLimit {
                what: "brute-force modulus",
                requested: 20_000,
                cap: DEFAULT_BRUTE_CAP
            }
        );
        // An explicit cap overrides the default.
        assert!(count_bruteforce_with_cap(&big(1), &form(1, 1, 1), 20_000, 30_000).is_ok());
    }

    #[test]
    fn binary_examples() {
        assert_eq!(count_bruteforce_binary(&big(1), &big(1), &big(1), 3).unwrap(), 4);
        assert_eq!(count_bruteforce_binary(&big(0), &big(1), &big(1), 1).unwrap(), 1);
        // x^2 + y^2 = 2 (mod 3) forces x^2 = y^2 = 1: 2 roots each.
        // (Value fixed by the naive enumeration below.)
        let mut naive = 0u64;
        for x in 0..3i64 {
            for y in 0..3i64 {
                if (x * x + y * y - 2).rem_euclid(3) == 0 {
                    naive += 1;
                }
            }
        }
        assert_eq!(naive, 4);
        assert_eq!(count_bruteforce_binary(&big(2), &big(1), &big(1), 3).unwrap(), naive);
        assert_eq!(
            count_bruteforce_binary(&big(1), &big(0), &big(1), 3).unwrap_err(),
            Error::ZeroCoefficient
        );
    }

    #[test]
    fn gauss_float_examples() {
        assert_eq!(count_via_gauss_float(&big(1), &form(1, 1, 1), p(3), 1).unwrap(), 6);
        assert_eq!(count_via_gauss_float(&big(3), &form(1, 9, 9), p(3), 2).unwrap(), 0);
        assert_eq!(count_via_gauss_float(&big(1), &form(1, 3, 3), p(3), 1).unwrap(), 18);
        // 3^11 = 177147 exceeds the cap.
        assert!(matches!(
            count_via_gauss_float(&big(1), &form(1, 1, 1), p(3), 11).unwrap_err(),
            Error::ResourceLimit { .. }
        ));
    }

    #[test]
    fn stratified_examples_and_preconditions() {
        assert_eq!(count_stratified(&big(1), &form(1, 1, 1), p(3), 1).unwrap(), big(6));
        // One more level multiplies the count by p^2.
        assert_eq!(count_stratified(&big(1), &form(1, 1, 1), p(3), 2).unwrap(), big(54));
        assert_eq!(
            count_bruteforce(&big(1), &form(1, 1, 1), 9).unwrap(),
            54,
            "stabilized value confirmed by enumeration"
        );
        // Odd target valuation below b1: the count vanishes.
        assert_eq!(count_stratified(&big(3), &form(1, 9, 9), p(3), 2).unwrap(), big(0));

        assert_eq!(
            count_stratified(&big(0), &form(1, 1, 1), p(3), 1).unwrap_err(),
            Error::ZeroTarget
        );
        assert_eq!(
            count_stratified(&big(9), &form(1, 1, 1), p(3), 1).unwrap_err(),
            Error::DepthTooSmall { k: 1, min: 3 }
        );
        assert!(matches!(
            count_stratified(&big(1), &form(3, 1, 1), p(3), 1).unwrap_err(),
            Error::NotNormalized { .. }
        ));
        assert!(matches!(
            count_stratified(&big(1), &form(1, 9, 3), p(3), 1).unwrap_err(),
            Error::NotNormalized { .. }
        ));
    }

    #[test]
    fn zero_stratified_examples_and_preconditions() {
        assert_eq!(count_zero_stratified(&form(1, 1, 1), p(3), 1).unwrap(), big(9));
        assert_eq!(count_zero_stratified(&form(1, 1, 1), p(3), 2).unwrap(), big(99));
        // b1 = c1 = 1 branch at k = 2, frozen from the brute-force oracle.
        assert_eq!(
            count_bruteforce(&big(0), &form(1, 3, 3), 9).unwrap(),
            27
        );
        assert_eq!(count_zero_stratified(&form(1, 3, 3), p(3), 2).unwrap(), big(27));
        assert_eq!(
            count_zero_stratified(&form(1, 3, 3), p(3), 1).unwrap_err(),
            Error::DepthTooSmall { k: 1, min: 2 }
        );
    }

    /// The spec grid for three-evaluator equivalence: p in {3,5,7},
    /// b1 <= c1 <= 2, m1 <= c1 + 1, unit parts in {1, least nonresidue},
    /// k in {m1+1, m1+2}, p^k <= 2401.
    #[test]
    fn three_evaluators_agree_on_grid() {
        let mut checked = 0u64;
        for q in [3u64, 5, 7] {
            let pr = p(q);
            let nr = least_nonresidue(pr) as i64;
            for c1 in 0..=2u32 {
                for b1 in 0..=c1 {
                    for (au, b0, c0) in iproduct3(&[1, nr]) {
                        let qf = form(au, b0 * (q as i64).pow(b1), c0 * (q as i64).pow(c1));
                        for m1 in 0..=c1 + 1 {
                            for m0 in [1i64, nr] {
                                let m = big(m0) * big(q as i64).pow(m1);
                                for k in [m1 + 1, m1 + 2] {
                                    let Some(pk) = q.checked_pow(k).filter(|&v| v <= 2401) else {
                                        continue;
                                    };
                                    let brute = count_bruteforce(&m, &qf, pk).unwrap();
                                    let float = count_via_gauss_float(&m, &qf, pr, k).unwrap();
                                    let strat = count_stratified(&m, &qf, pr, k).unwrap();
                                    assert_eq!(
                                        strat,
                                        BigInt::from(brute),
                                        "stratified vs brute: m = {m}, Q = {qf}, p^k = {pk}"
                                    );
                                    assert_eq!(
                                        float, brute,
                                        "float vs brute: m = {m}, Q = {qf}, p^k = {pk}"
                                    );
                                    checked += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
        assert!(checked > 500, "grid should be nontrivial, got {checked}");
    }

    /// The zero-target closed form against enumeration on its spec grid.
    #[test]
    fn zero_stratified_agrees_with_bruteforce_on_grid() {
        for q in [3u64, 5, 7] {
            let pr = p(q);
            let nr = least_nonresidue(pr) as i64;
            for c1 in 0..=2u32 {
                for b1 in 0..=c1 {
                    for (au, b0, c0) in iproduct3(&[1, nr]) {
                        let qf = form(au, b0 * (q as i64).pow(b1), c0 * (q as i64).pow(c1));
                        for k in c1 + 1..=4 {
                            let Some(pk) = q.checked_pow(k).filter(|&v| v <= 2401) else {
                                continue;
                            };
                            let brute = count_bruteforce(&big(0), &qf, pk).unwrap();
                            let closed = count_zero_stratified(&qf, pr, k).unwrap();
                            assert_eq!(
                                closed,
                                BigInt::from(brute),
                                "zero count: Q = {qf}, p = {q}, k = {k}"
                            );
                        }
                    }
                }
            }
        }
    }

    /// All unit-coefficient triples from a two-element set.
    fn iproduct3(units: &[i64; 2]) -> Vec<(i64, i64, i64)> {
        let mut out = Vec::with_capacity(8);
        for &a in units {
            for &b in units {
                for &c in units {
                    out.push((a, b, c));
                }
            }
        }
        out
    }

    /// Past depth m1, each extra level multiplies the count by p^2.
    #[test]
    fn stratified_stabilization() {
        for q in [3u64, 5] {
            let pr = p(q);
            let nr = least_nonresidue(pr) as i64;
            for (b1, c1) in [(0u32, 0u32), (0, 1), (1, 1), (0, 2), (1, 2), (2, 2)] {
                let qf = form(1, nr * (q as i64).pow(b1), (q as i64).pow(c1));
                for m1 in 0..=c1 + 1 {
                    for m0 in [1i64, -1, nr] {
                        let m = big(m0) * big(q as i64).pow(m1);
                        for k in m1 + 1..=m1 + 3 {
                            let r_k = count_stratified(&m, &qf, pr, k).unwrap();
                            let r_next = count_stratified(&m, &qf, pr, k + 1).unwrap();
                            assert_eq!(
                                r_next,
                                r_k * (q * q),
                                "m = {m}, Q = {qf}, k = {k}"
                            );
                        }
                    }
                }
            }
        }
    }

    /// The per-stratum closed forms sum to the assembled evaluator:
    /// sum over tau of s(k, tau) = (r - p^{2k}) p^k.
    #[test]
    fn stratum_terms_sum_to_assembled_count() {
        for q in [3u64, 5] {
            let pr = p(q);
            let nr = least_nonresidue(pr) as i64;
            for c1 in 0..=2u32 {
                for b1 in 0..=c1 {
                    let qf = form(nr, (q as i64).pow(b1), nr * (q as i64).pow(c1));
                    for m1 in 0..=c1 + 1 {
                        for m0 in [1i64, -nr] {
                            let m = big(m0) * big(q as i64).pow(m1);
                            for k in [m1 + 1, m1 + 2] {
                                let mut sum = Rational::zero();
                                for tau in 0..k {
                                    sum += stratum_term(&m, &qf, pr, k, tau).unwrap().value;
                                }
                                let r = count_stratified(&m, &qf, pr, k).unwrap();
                                let expected = (Rational::from(r)
                                    - Rational::prime_power(pr, 2 * k as i64))
                                    * Rational::prime_power(pr, k as i64);
                                assert_eq!(sum, expected, "m = {m}, Q = {qf}, k = {k}");
                            }
                        }
                    }
                }
            }
        }
    }

    proptest! {
        /// Counts multiply across coprime moduli.
        #[test]
        fn crt_multiplicativity(
            m in -20i64..40,
            a in 1i64..6,
            b in 1i64..6,
            c in 1i64..6,
        ) {
            let qf = form(a, b, c);
            let r15 = count_bruteforce(&big(m), &qf, 15).unwrap();
            let r3 = count_bruteforce(&big(m), &qf, 3).unwrap();
            let r5 = count_bruteforce(&big(m), &qf, 5).unwrap();
            prop_assert_eq!(r15, r3 * r5);
            let r21 = count_bruteforce(&big(m), &qf, 21).unwrap();
            let r7 = count_bruteforce(&big(m), &qf, 7).unwrap();
            prop_assert_eq!(r21, r3 * r7);
        }

        /// The count is symmetric in the three coefficients.
        #[test]
        fn bruteforce_permutation_invariance(
            m in -10i64..30,
            a in 1i64..8,
            b in 1i64..8,
            c in 1i64..8,
            n in 2u64..30,
        ) {
            let base = count_bruteforce(&big(m), &form(a, b, c), n).unwrap();
            prop_assert_eq!(count_bruteforce(&big(m), &form(b, a, c), n).unwrap(), base);
            prop_assert_eq!(count_bruteforce(&big(m), &form(c, b, a), n).unwrap(), base);
            prop_assert_eq!(count_bruteforce(&big(m), &form(a, c, b), n).unwrap(), base);
        }
    }
}
