//! Closed-form evaluation of the local densities alpha_p(m, Q).
//!
//! A diagonal form is first normalized into p-local coordinates
//!
//! ```text
//!     Q = p^e (a x^2 + b0 p^{b1} y^2 + c0 p^{c1} z^2),    b1 <= c1,
//! ```
//!
//! with a, b0, c0 units mod p and the variable reordering recorded. The
//! density then depends only on these coordinates and on the split
//! m = m0 p^{m1}: after peeling the common power e off both sides, the
//! evaluator dispatches on the regime of m1 relative to b1 and c1 and on the
//! parities of the valuations. Every branch is a finite expression in powers
//! of p and Legendre symbols, so the result is an exact rational; it is
//! returned together with a tag naming the branch that produced it, because
//! a zero answer ("no local solution") is only auditable with its branch.
//!
//! The same dispatch with the c-coefficient absent (read: c1 infinite)
//! evaluates densities of binary forms a x^2 + b y^2 for nonzero targets.
//!
//! Two independent special-case formulas, [`unramified_density`] for p
//! dividing nothing in sight and [`bj_density`] for the anisotropic shape
//! u x^2 + p y^2 + u p z^2, serve as oracles for the general evaluator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;

use crate::error::{Error, Result};
use crate::localcount::{count_bruteforce, count_stratified, count_zero_stratified, DiagonalForm};
use crate::ntkernel::{legendre, legendre_i64, padic_split, OddPrime, PAdicSplit, Rational};

// --------------------------------------------------------------------------
// Normalized local coordinates
// --------------------------------------------------------------------------

/// A diagonal ternary form in p-local coordinates: common power of p
/// extracted, coefficients stably sorted by valuation, units and valuations
/// split apart. Constructed by [`normalize`]; the original form can be
/// recovered with [`LocalizedForm::reconstruct`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LocalizedForm {
    prime: OddPrime,
    a: BigInt,
    b0: BigInt,
    b1: u32,
    c0: BigInt,
    c1: u32,
    common_power: u32,
    /// `permutation[i]` is the index (0 = x, 1 = y, 2 = z) of the original
    /// coefficient occupying slot i of the sorted form.
    permutation: [usize; 3],
}

impl LocalizedForm {
    pub fn prime(&self) -> OddPrime {
        self.prime
    }

    /// The unit leading coefficient (valuation 0 after extracting p^e).
    pub fn a(&self) -> &BigInt {
        &self.a
    }

    /// Unit part of the middle coefficient.
    pub fn b0(&self) -> &BigInt {
        &self.b0
    }

    /// Valuation of the middle coefficient (relative to p^e).
    pub fn b1(&self) -> u32 {
        self.b1
    }

    /// Unit part of the last coefficient.
    pub fn c0(&self) -> &BigInt {
        &self.c0
    }

    /// Valuation of the last coefficient (relative to p^e); c1 >= b1.
    pub fn c1(&self) -> u32 {
        self.c1
    }

    /// The power of p dividing all three coefficients.
    pub fn common_power(&self) -> u32 {
        self.common_power
    }

    /// The coefficient reordering: slot i of the sorted form holds the
    /// original coefficient with index `permutation()[i]`.
    pub fn permutation(&self) -> [usize; 3] {
        self.permutation
    }

    /// The normalized ternary form a x^2 + b0 p^{b1} y^2 + c0 p^{c1} z^2
    /// with the common power removed.
    pub fn reduced_form(&self) -> DiagonalForm {
        DiagonalForm::new(
            self.a.clone(),
            &self.b0 * prime_power_int(self.prime, self.b1),
            &self.c0 * prime_power_int(self.prime, self.c1),
        )
        .expect("unit parts are nonzero")
    }

    /// The original diagonal form: common power restored, permutation undone.
    pub fn reconstruct(&self) -> DiagonalForm {
        let scale = prime_power_int(self.prime, self.common_power);
        let sorted = [
            &self.a * &scale,
            &self.b0 * prime_power_int(self.prime, self.b1) * &scale,
            &self.c0 * prime_power_int(self.prime, self.c1) * &scale,
        ];
        let mut original = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
        for (slot, coeff) in sorted.into_iter().enumerate() {
            original[self.permutation[slot]] = coeff;
        }
        let [a, b, c] = original;
        DiagonalForm::new(a, b, c).expect("coefficients are nonzero")
    }
}

/// p^k as an integer.
fn prime_power_int(p: OddPrime, k: u32) -> BigInt {
    Rational::prime_power(p, i64::from(k))
        .to_integer()
        .expect("nonnegative power of p is an integer")
}

/// Split a diagonal form into p-local coordinates: p-adic split of each
/// coefficient, common power e = min of the valuations extracted, remaining
/// valuations stably sorted ascending (equal valuations keep input order),
/// reordering recorded.
pub fn normalize(q: &DiagonalForm, p: OddPrime) -> LocalizedForm {
    let splits: Vec<PAdicSplit> = q
        .coefficients()
        .iter()
        .map(|coeff| padic_split(coeff, p).expect("form coefficients are nonzero"))
        .collect();
    let mut order = [0usize, 1, 2];
    order.sort_by_key(|&i| splits[i].exponent());
    let e = splits[order[0]].exponent();
    LocalizedForm {
        prime: p,
        a: splits[order[0]].unit().clone(),
        b0: splits[order[1]].unit().clone(),
        b1: splits[order[1]].exponent() - e,
        c0: splits[order[2]].unit().clone(),
        c1: splits[order[2]].exponent() - e,
        common_power: e,
        permutation: order,
    }
}

// --------------------------------------------------------------------------
// Branch tags
// --------------------------------------------------------------------------

/// Which closed-form branch produced a density value. The Display form is a
/// stable tag string (e.g. `m1>=c1/b1-even/c1-odd/m1-even`) meant for
/// snapshots, logs, and the CLI.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum DensityBranch {
    /// m1 < b1: only the leading square can reach the target's valuation.
    BelowB { m1_even: bool },
    /// b1 <= m1 < c1: the last square is inert.
    Between { b1_even: bool },
    /// m1 >= c1: all three squares participate.
    AboveC {
        b1_even: bool,
        c1_even: bool,
        m1_even: bool,
    },
    /// m = 0: the limiting density of the null locus.
    Zero { b1_even: bool, c1_even: bool },
    /// A common power p^e divides the form but not the target; the density
    /// vanishes before any formula is consulted.
    ReducedVanishing,
}

fn parity_word(even: bool) -> &'static str {
    if even {
        "even"
    } else {
        "odd"
    }
}

impl fmt::Display for DensityBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DensityBranch::BelowB { m1_even } => write!(f, "m1<b1/{}", parity_word(m1_even)),
            DensityBranch::Between { b1_even } => {
                write!(f, "b1<=m1<c1/b1-{}", parity_word(b1_even))
            }
            DensityBranch::AboveC {
                b1_even,
                c1_even,
                m1_even,
            } => write!(
                f,
                "m1>=c1/b1-{}/c1-{}/m1-{}",
                parity_word(b1_even),
                parity_word(c1_even),
                parity_word(m1_even)
            ),
            DensityBranch::Zero { b1_even, c1_even } => write!(
                f,
                "zero/b1-{}-c1-{}",
                parity_word(b1_even),
                parity_word(c1_even)
            ),
            DensityBranch::ReducedVanishing => write!(f, "reduced/valuation-too-small"),
        }
    }
}

/// An evaluated density: the exact value, the branch that produced it, and
/// an echo of the inputs in normalized coordinates (`target` is the split of
/// m, absent for m = 0).
#[derive(Clone, PartialEq, Debug)]
pub struct DensityResult {
    pub value: Rational,
    pub branch: DensityBranch,
    pub form: LocalizedForm,
    pub target: Option<PAdicSplit>,
}

/// An evaluated binary-form density. Same shape as [`DensityResult`] but
/// with two-coefficient coordinates and a mandatory nonzero target.
#[derive(Clone, PartialEq, Debug)]
pub struct BinaryDensityResult {
    pub value: Rational,
    pub branch: DensityBranch,
    pub form: BinaryLocalizedForm,
    pub target: PAdicSplit,
}

/// A binary form a x^2 + b y^2 in p-local coordinates: common power
/// extracted, coefficients sorted by valuation (stable under ties).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BinaryLocalizedForm {
    prime: OddPrime,
    a: BigInt,
    b0: BigInt,
    b1: u32,
    common_power: u32,
    swapped: bool,
}

impl BinaryLocalizedForm {
    pub fn prime(&self) -> OddPrime {
        self.prime
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b0(&self) -> &BigInt {
        &self.b0
    }

    pub fn b1(&self) -> u32 {
        self.b1
    }

    pub fn common_power(&self) -> u32 {
        self.common_power
    }

    /// Whether the two input coefficients were exchanged during sorting.
    pub fn swapped(&self) -> bool {
        self.swapped
    }

    /// The original coefficient pair, in input order.
    pub fn reconstruct(&self) -> (BigInt, BigInt) {
        let scale = prime_power_int(self.prime, self.common_power);
        let lo = &self.a * &scale;
        let hi = &self.b0 * prime_power_int(self.prime, self.b1) * &scale;
        if self.swapped {
            (hi, lo)
        } else {
            (lo, hi)
        }
    }
}

// --------------------------------------------------------------------------
// The branch formulas
// --------------------------------------------------------------------------

/// n/2, asserting n is even. Every power of p appearing in the branch
/// formulas has an integral exponent exactly when the dispatch is right, so
/// a failure here means a branch bug, not bad input.
fn half(n: i64) -> i64 {
    assert!(n % 2 == 0, "exponent {n} is odd; branch dispatch is inconsistent");
    n / 2
}

/// sign^exp for sign in {-1, +1}.
fn sign_pow(sign: i32, exp: i64) -> i32 {
    debug_assert!(sign == 1 || sign == -1);
    if exp % 2 == 0 {
        1
    } else {
        sign
    }
}

/// The weight of the valuation window (b1, c1] appearing in every b1-even
/// branch: (c1-b1)/2 (1 + chi) when the window length is even, otherwise
/// (c1-b1-1)/2 + chi (c1-b1+1)/2.
fn window_weight(b1: i64, c1: i64, chi: i32) -> Rational {
    debug_assert!(b1 <= c1);
    if (c1 - b1) % 2 == 0 {
        Rational::from_integer(half(c1 - b1) * (1 + i64::from(chi)))
    } else {
        Rational::from_integer(half(c1 - b1 - 1) + i64::from(chi) * half(c1 - b1 + 1))
    }
}

/// Regime m1 < b1: the target's valuation undercuts both non-leading
/// coefficients, so only a x^2 can hit it. Nonzero only for even m1.
fn below_b_value(p: OddPrime, m1: i64, chi_a: i32, chi_m0: i32) -> (Rational, DensityBranch) {
    let m1_even = m1 % 2 == 0;
    let branch = DensityBranch::BelowB { m1_even };
    if !m1_even {
        return (Rational::zero(), branch);
    }
    let value = Rational::prime_power(p, half(m1)) * Rational::from_integer(1 + chi_a * chi_m0);
    (value, branch)
}

/// Regime b1 <= m1 < c1: the last square is inert; the density is a
/// two-variable expression plus the window weight accumulated between b1
/// and m1.
fn between_value(
    p: OddPrime,
    b1: i64,
    m1: i64,
    chi_a: i32,
    chi_b0: i32,
    chi_m0: i32,
    chi_neg: i32,
) -> (Rational, DensityBranch) {
    debug_assert!(b1 <= m1);
    let b1_even = b1 % 2 == 0;
    let branch = DensityBranch::Between { b1_even };
    let value = if b1_even {
        let chi_nab = chi_neg * chi_a * chi_b0;
        // (-1)^{m1}, driving the parity corrections of the half-open window.
        let m1_sign = i64::from(sign_pow(-1, m1));
        let half_diff = Rational::new(BigInt::from(m1 - b1), BigInt::from(2));
        let window = &half_diff
            + Rational::new(BigInt::from(m1_sign - 1), BigInt::from(4))
            + Rational::from_integer(chi_nab)
                * (&half_diff + Rational::new(BigInt::from(1 - m1_sign), BigInt::from(4)));
        let p_inv = Rational::prime_power(p, -1);
        let lead = Rational::one()
            - &p_inv * Rational::from_integer(sign_pow(chi_nab, m1 + 1))
            + (Rational::one() - &p_inv) * window;
        Rational::prime_power(p, half(b1)) * lead
    } else {
        let sign = sign_pow(chi_a, m1 + 1) * sign_pow(chi_b0, m1) * chi_m0;
        Rational::prime_power(p, half(b1 - 1)) * Rational::from_integer(1 + sign)
    };
    (value, branch)
}

/// Regime m1 >= c1: all three squares participate and the expression splits
/// into eight parity sub-cases.
#[allow(clippy::too_many_arguments)]
fn above_c_value(
    p: OddPrime,
    b1: i64,
    c1: i64,
    m1: i64,
    chi_a: i32,
    chi_b0: i32,
    chi_c0: i32,
    chi_m0: i32,
    chi_neg: i32,
) -> (Rational, DensityBranch) {
    debug_assert!(b1 <= c1 && c1 <= m1);
    let b1_even = b1 % 2 == 0;
    let c1_even = c1 % 2 == 0;
    let m1_even = m1 % 2 == 0;
    let branch = DensityBranch::AboveC {
        b1_even,
        c1_even,
        m1_even,
    };
    let p_inv = Rational::prime_power(p, -1);
    let w = Rational::one() - &p_inv;
    let chi_nab = chi_neg * chi_a * chi_b0;

    let value = if b1_even {
        let window = window_weight(b1, c1, chi_nab);
        let inner = match (c1_even, m1_even) {
            (true, true) => {
                // chi(-a b0 c0 m0): the residue class of the full product.
                let deep = chi_nab * chi_c0 * chi_m0;
                Rational::one()
                    + &p_inv
                    + Rational::prime_power(p, half(c1 - m1) - 1)
                        * Rational::from_integer(deep - 1)
                    + &w * window
            }
            (true, false) => {
                (Rational::one() + &p_inv)
                    * (Rational::one() - Rational::prime_power(p, half(c1 - m1 - 1)))
                    + &w * window
            }
            (false, true) => {
                Rational::one()
                    - Rational::prime_power(p, half(c1 - 1 - m1))
                        * Rational::from_integer(chi_nab)
                        * (Rational::one() + &p_inv)
                    + &p_inv * Rational::from_integer(chi_nab)
                    + &w * window
            }
            (false, false) => {
                Rational::one()
                    + Rational::prime_power(p, half(c1 - m1 - 2))
                        * Rational::from_integer(chi_c0 * chi_m0 - chi_nab)
                    + &p_inv * Rational::from_integer(chi_nab)
                    + &w * window
            }
        };
        Rational::prime_power(p, half(b1)) * inner
    } else {
        let chi_nac = chi_neg * chi_a * chi_c0;
        let chi_nbc = chi_neg * chi_b0 * chi_c0;
        let inner = match (c1_even, m1_even) {
            (true, true) => {
                Rational::from_integer(1 + chi_nac)
                    - Rational::prime_power(p, half(c1 - m1))
                        * (Rational::one() + &p_inv)
                        * Rational::from_integer(chi_nac)
            }
            (true, false) => {
                Rational::from_integer(1 + chi_nac)
                    + Rational::prime_power(p, half(c1 - m1 - 1))
                        * Rational::from_integer(chi_b0 * chi_m0 - chi_nac)
            }
            (false, true) => {
                Rational::from_integer(1 + chi_nbc)
                    + Rational::prime_power(p, half(c1 - 1 - m1))
                        * Rational::from_integer(chi_a * chi_m0 - chi_nbc)
            }
            (false, false) => {
                Rational::from_integer(1 + chi_nbc)
                    - Rational::prime_power(p, half(c1 - m1))
                        * (Rational::one() + &p_inv)
                        * Rational::from_integer(chi_nbc)
            }
        };
        Rational::prime_power(p, half(b1 - 1)) * inner
    };
    (value, branch)
}

/// Target m = 0: the density of the null locus, a genuine limit over depth.
fn zero_value(
    p: OddPrime,
    b1: i64,
    c1: i64,
    chi_a: i32,
    chi_b0: i32,
    chi_c0: i32,
    chi_neg: i32,
) -> (Rational, DensityBranch) {
    let b1_even = b1 % 2 == 0;
    let c1_even = c1 % 2 == 0;
    let branch = DensityBranch::Zero { b1_even, c1_even };
    let p_inv = Rational::prime_power(p, -1);
    let w = Rational::one() - &p_inv;
    let value = if b1_even {
        let chi_nab = chi_neg * chi_a * chi_b0;
        let lead = if c1_even {
            Rational::one() + &p_inv
        } else {
            Rational::one() + &p_inv * Rational::from_integer(chi_nab)
        };
        Rational::prime_power(p, half(b1)) * (lead + w * window_weight(b1, c1, chi_nab))
    } else {
        let sign = if c1_even {
            chi_neg * chi_a * chi_c0
        } else {
            chi_neg * chi_b0 * chi_c0
        };
        Rational::prime_power(p, half(b1 - 1)) * Rational::from_integer(1 + sign)
    };
    (value, branch)
}

/// Dispatch on the regime and parities for a normalized form (common power
/// already peeled). `target` is (chi(m0), m1) or None for m = 0.
fn dispatch_normalized(form: &LocalizedForm, target: Option<(i32, i64)>) -> (Rational, DensityBranch) {
    let p = form.prime;
    let chi_a = legendre(&form.a, p);
    let chi_b0 = legendre(&form.b0, p);
    let chi_c0 = legendre(&form.c0, p);
    let chi_neg = legendre_i64(-1, p);
    let b1 = i64::from(form.b1);
    let c1 = i64::from(form.c1);
    match target {
        None => zero_value(p, b1, c1, chi_a, chi_b0, chi_c0, chi_neg),
        Some((chi_m0, m1)) if m1 < b1 => below_b_value(p, m1, chi_a, chi_m0),
        Some((chi_m0, m1)) if m1 < c1 => {
            between_value(p, b1, m1, chi_a, chi_b0, chi_m0, chi_neg)
        }
        Some((chi_m0, m1)) => {
            above_c_value(p, b1, c1, m1, chi_a, chi_b0, chi_c0, chi_m0, chi_neg)
        }
    }
}

/// True when the denominator of `value` is a power of p.
fn denom_is_power_of(value: &Rational, p: OddPrime) -> bool {
    let pb = p.to_bigint();
    let mut d = value.denom().clone();
    while d.mod_floor(&pb).is_zero() {
        d /= &pb;
    }
    d == BigInt::one()
}

fn density_result(
    value: Rational,
    branch: DensityBranch,
    form: LocalizedForm,
    target: Option<PAdicSplit>,
) -> DensityResult {
    debug_assert!(!value.is_negative(), "densities are nonnegative");
    debug_assert!(
        denom_is_power_of(&value, form.prime),
        "density denominators are powers of p"
    );
    DensityResult {
        value,
        branch,
        form,
        target,
    }
}

// --------------------------------------------------------------------------
// Public evaluators
// --------------------------------------------------------------------------

/// The local density alpha_p(m, Q) of a diagonal ternary form, evaluated in
/// closed form.
///
/// The form is normalized first; a common power p^e is peeled off via the
/// counting identity r(m, p^e Q'; p^k) = p^{3e} r(m/p^e, Q'; p^{k-e}), which
/// gives alpha_p(m, p^e Q') = p^e alpha_p(m/p^e, Q') when p^e divides m,
/// zero when 0 < v_p(m) ordering fails (m != 0, v_p(m) < e), and
/// p^e alpha_p(0, Q') when m = 0.
pub fn local_density(m: &BigInt, q: &DiagonalForm, p: OddPrime) -> DensityResult {
    let form = normalize(q, p);
    let e = form.common_power;
    let scale = Rational::prime_power(p, i64::from(e));
    if m.is_zero() {
        let (value, branch) = dispatch_normalized(&form, None);
        return density_result(scale * value, branch, form, None);
    }
    let split = padic_split(m, p).expect("m is nonzero");
    if split.exponent() < e {
        return density_result(
            Rational::zero(),
            DensityBranch::ReducedVanishing,
            form,
            Some(split),
        );
    }
    let m1 = i64::from(split.exponent() - e);
    let chi_m0 = legendre(split.unit(), p);
    let (value, branch) = dispatch_normalized(&form, Some((chi_m0, m1)));
    density_result(scale * value, branch, form, Some(split))
}

/// The local density of a binary form a x^2 + b y^2 at a nonzero target:
/// the limit of r(m; p^k) / p^k. This is the ternary dispatch with the
/// last coefficient's valuation read as infinite, so only the m1 < b1 and
/// b1 <= m1 branches can fire. The m = 0 limit diverges and is rejected.
pub fn binary_local_density(
    m: &BigInt,
    a: &BigInt,
    b: &BigInt,
    p: OddPrime,
) -> Result<BinaryDensityResult> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroCoefficient);
    }
    if m.is_zero() {
        return Err(Error::BinaryZeroTarget);
    }
    let sa = padic_split(a, p).expect("a is nonzero");
    let sb = padic_split(b, p).expect("b is nonzero");
    let swapped = sb.exponent() < sa.exponent();
    let (lo, hi) = if swapped { (&sb, &sa) } else { (&sa, &sb) };
    let e = lo.exponent();
    let form = BinaryLocalizedForm {
        prime: p,
        a: lo.unit().clone(),
        b0: hi.unit().clone(),
        b1: hi.exponent() - e,
        common_power: e,
        swapped,
    };
    let split = padic_split(m, p).expect("m is nonzero");
    if split.exponent() < e {
        return Ok(BinaryDensityResult {
            value: Rational::zero(),
            branch: DensityBranch::ReducedVanishing,
            form,
            target: split,
        });
    }
    let scale = Rational::prime_power(p, i64::from(e));
    let m1 = i64::from(split.exponent() - e);
    let chi_m0 = legendre(split.unit(), p);
    let chi_a = legendre(&form.a, p);
    let b1 = i64::from(form.b1);
    let (value, branch) = if m1 < b1 {
        below_b_value(p, m1, chi_a, chi_m0)
    } else {
        let chi_b0 = legendre(&form.b0, p);
        let chi_neg = legendre_i64(-1, p);
        between_value(p, b1, m1, chi_a, chi_b0, chi_m0, chi_neg)
    };
    debug_assert!(!value.is_negative() && denom_is_power_of(&value, p));
    Ok(BinaryDensityResult {
        value: scale * value,
        branch,
        form,
        target: split,
    })
}

/// The density when p divides none of a, b, c, m: 1 + chi(-abcm)/p. The
/// preconditions are checked; note m = 0 is divisible by p and is rejected.
pub fn unramified_density(m: &BigInt, q: &DiagonalForm, p: OddPrime) -> Result<Rational> {
    let pb = p.to_bigint();
    for coeff in q.coefficients() {
        if coeff.mod_floor(&pb).is_zero() {
            return Err(Error::Ramified {
                prime: p.get(),
                what: "a coefficient",
            });
        }
    }
    if m.mod_floor(&pb).is_zero() {
        return Err(Error::Ramified {
            prime: p.get(),
            what: "the target",
        });
    }
    let product = -(q.a() * q.b() * q.c() * m);
    Ok(Rational::one()
        + Rational::prime_power(p, -1) * Rational::from_integer(legendre(&product, p)))
}

/// The density of the anisotropic shape Q = u x^2 + p y^2 + u p z^2, where
/// -u is a quadratic nonresidue mod p (checked): p^{-m1/2} (1 - chi(-m0))
/// for even m1, p^{(-m1+1)/2} (1 + 1/p) for odd m1.
pub fn bj_density(u: &BigInt, m: &BigInt, p: OddPrime) -> Result<Rational> {
    if legendre(&-u, p) != -1 {
        return Err(Error::NotAntiresidue { prime: p.get() });
    }
    if m.is_zero() {
        return Err(Error::ZeroTarget);
    }
    let split = padic_split(m, p).expect("m is nonzero");
    let m1 = i64::from(split.exponent());
    let value = if m1 % 2 == 0 {
        let chi = legendre_i64(-1, p) * legendre(split.unit(), p);
        Rational::prime_power(p, -m1 / 2) * Rational::from_integer(1 - chi)
    } else {
        Rational::prime_power(p, (-m1 + 1) / 2) * (Rational::one() + Rational::prime_power(p, -1))
    };
    Ok(value)
}

/// The density computed the definitional way: brute-force count at the
/// stabilization depth k = v_p(m) + 1, divided by p^{2k}. Exact for m != 0;
/// the modulus p^{k} must stay within the brute-force cap.
pub fn density_from_counts(m: &BigInt, q: &DiagonalForm, p: OddPrime) -> Result<Rational> {
    if m.is_zero() {
        return Err(Error::ZeroTarget);
    }
    let split = padic_split(m, p).expect("m is nonzero");
    let k = split.exponent() + 1;
    let n = p.get().saturating_pow(k);
    let r = count_bruteforce(m, q, n)?;
    Ok(Rational::from_integer(r) * Rational::prime_power(p, -2 * i64::from(k)))
}

/// Exact r(m, Q; p^k) for an arbitrary diagonal form, routed through
/// normalization and the stratified closed-form counters. Handles common
/// powers of p, m = 0 (needs k > e + c1), and targets divisible by p^k.
/// Depth k below the stabilization threshold of the requested target is
/// reported as an error rather than silently falling back to enumeration.
pub fn exact_count(m: &BigInt, q: &DiagonalForm, p: OddPrime, k: u32) -> Result<BigInt> {
    let form = normalize(q, p);
    let e = form.common_power;
    if e >= k {
        // Q vanishes identically mod p^k, so either every vector counts or
        // none does. Covers k = 0 (everything is 0 mod 1).
        let hits = m.mod_floor(&prime_power_int(p, k)).is_zero();
        return Ok(if hits {
            prime_power_int(p, 3 * k)
        } else {
            BigInt::zero()
        });
    }
    let reduced = form.reduced_form();
    let depth = k - e;
    let scale = prime_power_int(p, 3 * e);
    if m.is_zero() {
        if depth < form.c1 + 1 {
            // Report the threshold in the caller's depth, not the reduced one.
            return Err(Error::DepthTooSmall {
                k,
                min: e + form.c1 + 1,
            });
        }
        return Ok(scale * count_zero_stratified(&reduced, p, depth)?);
    }
    let split = padic_split(m, p).expect("m is nonzero");
    if split.exponent() < e {
        // p^e divides Q(v) for every v but not m.
        return Ok(BigInt::zero());
    }
    let m1 = split.exponent() - e;
    if m1 >= depth {
        // The reduced target is 0 mod p^{depth}; count the null locus.
        if depth < form.c1 + 1 {
            return Err(Error::DepthTooSmall {
                k,
                min: e + form.c1 + 1,
            });
        }
        return Ok(scale * count_zero_stratified(&reduced, p, depth)?);
    }
    let m_reduced = m / prime_power_int(p, e);
    Ok(scale * count_stratified(&m_reduced, &reduced, p, depth)?)
}
