//! Cross-check families tying the three evaluators together over parameter
//! grids.
//!
//! Each family sweeps a pinned grid of (prime, form, target) tuples and
//! compares two independently implemented quantities — closed form against
//! enumeration, symbolic against float, general evaluator against a
//! special-case oracle. The families double as the acceptance suite (each
//! is one numbered criterion) and as the CLI `verify` subcommand; both
//! consume the same [`FamilyReport`]s from [`run_all`].
//!
//! Grids are exact-equality wherever both sides are exact; float comparisons
//! carry the stated absolute tolerances. A [`VerifyConfig`] can shrink the
//! grids (for quick smoke runs) but never changes what is compared.

use num_bigint::BigInt;
use num_complex::Complex64;
use std::time::{Duration, Instant};

use crate::charsums::{
    geometric_exp_sum, half_power_tail_sum, legendre_interval_sum, legendre_power_unit_sum,
    twisted_unit_sum, Parity, TailSum, TwistedUnitSum,
};
use crate::density::{
    bj_density, binary_local_density, local_density, unramified_density,
};
use crate::gauss::{gauss_sum_exact, gauss_sum_float};
use crate::localcount::{
    count_bruteforce, count_bruteforce_binary, count_stratified, count_via_gauss_float,
    count_zero_stratified, DiagonalForm, DEFAULT_BRUTE_CAP,
};
use crate::ntkernel::{least_nonresidue, legendre_i64, OddPrime, Rational};

// --------------------------------------------------------------------------
// Configuration and reports
// --------------------------------------------------------------------------

/// Optional clamps on the pinned verification grids. `None` means the full
/// default grid for every family; setting a field shrinks the corresponding
/// dimension (it never widens a grid beyond its pinned default, except for
/// `cap`, which replaces the brute-force modulus cap outright).
#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyConfig {
    /// Keep only primes `<= p_max`.
    pub p_max: Option<u64>,
    /// Clamp the largest coefficient valuation c1.
    pub c1_max: Option<u32>,
    /// Clamp the target valuation m1.
    pub m1_max: Option<u32>,
    /// Replace the brute-force modulus cap (default 10^4).
    pub cap: Option<u64>,
}

impl VerifyConfig {
    fn primes(&self, pinned: &[u64]) -> Vec<OddPrime> {
        pinned
            .iter()
            .copied()
            .filter(|&p| self.p_max.map_or(true, |mx| p <= mx))
            .map(|p| OddPrime::new(p).expect("pinned primes are odd primes"))
            .collect()
    }

    fn clamp_c1(&self, pinned: u32) -> u32 {
        self.c1_max.map_or(pinned, |mx| mx.min(pinned))
    }

    fn clamp_m1(&self, pinned: u32) -> u32 {
        self.m1_max.map_or(pinned, |mx| mx.min(pinned))
    }

    fn cap(&self) -> u64 {
        self.cap.unwrap_or(DEFAULT_BRUTE_CAP)
    }
}

/// Outcome of one cross-check family: how many grid points were checked,
/// how many failed, a sample of failing tuples, and the wall time.
#[derive(Clone, Debug)]
pub struct FamilyReport {
    /// Criterion number (1-based, stable).
    pub number: u32,
    pub name: &'static str,
    pub checked: u64,
    pub failure_count: u64,
    /// First few failing tuples, for diagnostics.
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    /// One-line human summary, e.g.
    /// `criterion 1 (closed form vs brute force): PASS (1600 checks, 3.1s)`.
    pub fn headline(&self) -> String {
        if self.passed() {
            format!(
                "criterion {} ({}): PASS ({} checks, {:.1?})",
                self.number, self.name, self.checked, self.elapsed
            )
        } else {
            format!(
                "criterion {} ({}): FAIL ({} of {} checks failed, {:.1?})",
                self.number, self.name, self.failure_count, self.checked, self.elapsed
            )
        }
    }
}

/// Accumulates check outcomes for one family, keeping only a bounded sample
/// of failure descriptions.
struct Recorder {
    number: u32,
    name: &'static str,
    checked: u64,
    failure_count: u64,
    failures: Vec<String>,
    start: Instant,
}

const MAX_STORED_FAILURES: usize = 32;

impl Recorder {
    fn new(number: u32, name: &'static str) -> Recorder {
        Recorder {
            number,
            name,
            checked: 0,
            failure_count: 0,
            failures: Vec::new(),
            start: Instant::now(),
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < MAX_STORED_FAILURES {
                self.failures.push(detail());
            }
        }
    }

    fn finish(self) -> FamilyReport {
        FamilyReport {
            number: self.number,
            name: self.name,
            checked: self.checked,
            failure_count: self.failure_count,
            failures: self.failures,
            elapsed: self.start.elapsed(),
        }
    }
}

// --------------------------------------------------------------------------
// Grid helpers
// --------------------------------------------------------------------------

/// Unit coefficient representatives: 1 and the least nonresidue.
fn unit_pool(p: OddPrime) -> [i64; 2] {
    [1, least_nonresidue(p) as i64]
}

/// Target unit representatives: both residue classes, both signs.
fn target_unit_pool(p: OddPrime) -> [i64; 4] {
    let nr = least_nonresidue(p) as i64;
    [1, -1, nr, -nr]
}

fn pow_i64(p: OddPrime, e: u32) -> i64 {
    (p.get() as i64).pow(e)
}

fn form(a: i64, b: i64, c: i64) -> DiagonalForm {
    DiagonalForm::new(a, b, c).expect("grid coefficients are nonzero")
}

/// The graded form a x^2 + b0 p^{b1} y^2 + c0 p^{c1} z^2.
fn graded_form(p: OddPrime, a: i64, b0: i64, b1: u32, c0: i64, c1: u32) -> DiagonalForm {
    form(a, b0 * pow_i64(p, b1), c0 * pow_i64(p, c1))
}

// --------------------------------------------------------------------------
// Families (numbered as in the acceptance suite)
// --------------------------------------------------------------------------

/// 1: the closed-form density times p^{2k} equals the brute-force count at
/// the stabilization depth k = m1 + 1, exactly, across the full grid of
/// primes, unit classes, valuations, and target classes.
pub fn closed_form_vs_bruteforce(cfg: &VerifyConfig) -> FamilyReport {
    let mut rec = Recorder::new(1, "closed form vs brute force");
    for p in cfg.primes(&[3, 5, 7, 11, 13]) {
        let units = unit_pool(p);
        for b1 in 0..=cfg.clamp_c1(3) {
            for c1 in b1..=cfg.clamp_c1(3) {
                for m1 in 0..=cfg.clamp_m1(c1 + 2) {
                    let k = m1 + 1;
                    let n = match p.get().checked_pow(k).filter(|&n| n <= cfg.cap()) {
                        Some(n) => n,
                        None => continue,
                    };
                    for a in units {
                        for b0 in units {
                            for c0 in units {
                                let q = graded_form(p, a, b0, b1, c0, c1);
                                for m0 in target_unit_pool(p) {
                                    let m = BigInt::from(m0 * pow_i64(p, m1));
                                    let alpha = local_density(&m, &q, p);
                                    let scaled =
                                        &alpha.value * Rational::prime_power(p, 2 * i64::from(k));
                                    let brute = count_bruteforce(&m, &q, n)
                                        .map(Rational::from_integer);
                                    rec.check(brute.as_ref() == Ok(&scaled), || {
                                        format!(
                                            "p={p} q={q} m={m}: closed {} * p^{} vs brute {:?}",
                                            alpha.value,
                                            2 * k,
                                            brute
                                        )
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    rec.finish()
}

/// 2: counts stabilize — r(m, Q; p^{m1+2}) = p^2 r(m, Q; p^{m1+1}) exactly
/// on the sub-grid where the deeper modulus stays under the cap.
pub fn stabilization(cfg: &VerifyConfig) -> FamilyReport {
    let mut rec = Recorder::new(2, "count stabilization");
    for p in cfg.primes(&[3, 5, 7, 11, 13]) {
        let units = unit_pool(p);
        for b1 in 0..=cfg.clamp_c1(3) {
            for c1 in b1..=cfg.clamp_c1(3) {
                for m1 in 0..=cfg.clamp_m1(c1 + 2) {
                    let n_deep = match p.get().checked_pow(m1 + 2).filter(|&n| n <= cfg.cap()) {
                        Some(n) => n,
                        None => continue,
                    };
                    let n = n_deep / p.get();
                    for a in units {
                        for b0 in units {
                            for c0 in units {
                                let q = graded_form(p, a, b0, b1, c0, c1);
                                for m0 in target_unit_pool(p) {
                                    let m = BigInt::from(m0 * pow_i64(p, m1));
                                    let shallow = count_bruteforce(&m, &q, n);
                                    let deep = count_bruteforce(&m, &q, n_deep);
                                    let ok = match (&shallow, &deep) {
                                        (Ok(s), Ok(d)) => *d == s * p.get() * p.get(),
                                        _ => false,
                                    };
                                    rec.check(ok, || {
                                        format!(
                                            "p={p} q={q} m={m}: r({n_deep}) = {deep:?} vs p^2 r({n}) with r({n}) = {shallow:?}"
                                        )
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    rec.finish()
}

/// 3: brute force, Gauss-sum float assembly, and exact stratified assembly
/// agree on every grid point with p^k <= 2401 (k = m1 + 1). The float
/// evaluator's internal rounding guard enforces the residual bound.
pub fn three_evaluator_agreement(cfg: &VerifyConfig) -> FamilyReport {
    let mut rec = Recorder::new(3, "three-evaluator agreement");
    for p in cfg.primes(&[3, 5, 7, 11, 13]) {
        let units = unit_pool(p);
        for b1 in 0..=cfg.clamp_c1(3) {
            for c1 in b1..=cfg.clamp_c1(3) {
                for m1 in 0..=cfg.clamp_m1(c1 + 2) {
                    let k = m1 + 1;
                    let n = match p.get().checked_pow(k).filter(|&n| n <= 2401) {
                        Some(n) => n,
                        None => continue,
                    };
                    for a in units {
                        for b0 in units {
                            for c0 in units {
                                let q = graded_form(p, a, b0, b1, c0, c1);
                                for m0 in target_unit_pool(p) {
                                    let m = BigInt::from(m0 * pow_i64(p, m1));
                                    let brute = count_bruteforce(&m, &q, n);
                                    let float = count_via_gauss_float(&m, &q, p, k);
                                    let strat = count_stratified(&m, &q, p, k);
                                    let ok = match (&brute, &float, &strat) {
                                        (Ok(b), Ok(f), Ok(s)) => {
                                            b == f && *s == BigInt::from(*b)
                                        }
                                        _ => false,
                                    };
                                    rec.check(ok, || {
                                        format!(
                                            "p={p} q={q} m={m} k={k}: brute {brute:?}, gauss-float {float:?}, stratified {strat:?}"
                                        )
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    rec.finish()
}

/// 4: null targets — the closed-form count of Q = 0 solutions matches brute
/// force exactly for c1 < k <= 4, and the depth-k density estimate converges
/// to the limit density within p^{-floor(k/2) + (b1+c1)/2 + 1}.
pub fn null_target_counts(cfg: &VerifyConfig) -> FamilyReport {
    let mut rec = Recorder::new(4, "null-target counts and limit");
    let zero = BigInt::from(0);
    for p in cfg.primes(&[3, 5, 7]) {
        let units = unit_pool(p);
        for b1 in 0..=cfg.clamp_c1(2) {
            for c1 in b1..=cfg.clamp_c1(2) {
                for a in units {
                    for b0 in units {
                        for c0 in units {
                            let q = graded_form(p, a, b0, b1, c0, c1);
                            let limit = local_density(&zero, &q, p).value;
                            for k in c1 + 1..=4 {
                                let n = p.get().pow(k);
                                let closed = count_zero_stratified(&q, p, k);
                                let brute = count_bruteforce(&zero, &q, n)
                                    .map(BigInt::from);
                                rec.check(closed == brute, || {
                                    format!(
                                        "p={p} q={q} k={k}: closed {closed:?} vs brute {brute:?}"
                                    )
                                });
                                if let Ok(count) = &closed {
                                    let at_k = Rational::from_integer(count.clone())
                                        * Rational::prime_power(p, -2 * i64::from(k));
                                    let diff = at_k - &limit;
                                    // Compare squares: the bound's exponent
                                    // can be half-integral.
                                    let bound_sq = Rational::prime_power(
                                        p,
                                        -2 * i64::from(k / 2) + i64::from(b1 + c1) + 2,
                                    );
                                    rec.check(&diff * &diff <= bound_sq, || {
                                        format!(
                                            "p={p} q={q} k={k}: residual {diff} exceeds the convergence bound"
                                        )
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    rec.finish()
}

/// 5: when p divides none of a, b, c, m, the general evaluator reproduces
/// 1 + chi(-abcm)/p — exhaustively over residue tuples for every p <= 31.
pub fn unramified_agreement(cfg: &VerifyConfig) -> FamilyReport {
    let mut rec = Recorder::new(5, "unramified closed form");
    for p in cfg.primes(&[3, 5, 7, 11, 13, 17, 19, 23, 29, 31]) {
        let pv = p.get() as i64;
        for a in 1..pv {
            for b in 1..pv {
                for c in 1..pv {
                    let q = form(a, b, c);
                    for m in 1..pv {
                        let m = BigInt::from(m);
                        let simple = unramified_density(&m, &q, p);
                        let general = local_density(&m, &q, p).value;
                        rec.check(simple.as_ref() == Ok(&general), || {
                            format!("p={p} q={q} m={m}: {simple:?} vs general {general}")
                        });
                    }
                }
            }
        }
    }
    rec.finish()
}

/// 6: for the anisotropic shape Q = u x^2 + p y^2 + u p z^2 with -u a
/// nonresidue, the general evaluator matches the dedicated two-branch
/// formula for every unit class of u and m0 and every m1 <= 4.
pub fn anisotropic_oracle(cfg: &VerifyConfig) -> FamilyReport {
    let mut rec = Recorder::new(6, "anisotropic-shape oracle");
    for p in cfg.primes(&[3, 5, 7, 11]) {
        let pv = p.get() as i64;
        for u in 1..pv {
            if legendre_i64(-u, p) != -1 {
                continue;
            }
            let q = form(u, pv, u * pv);
            for m0 in 1..pv {
                for m1 in 0..=cfg.clamp_m1(4) {
                    let m = BigInt::from(m0 * pow_i64(p, m1));
                    let oracle = bj_density(&BigInt::from(u), &m, p);
                    let general = local_density(&m, &q, p).value;
                    rec.check(oracle.as_ref() == Ok(&general), || {
                        format!("p={p} u={u} m={m}: oracle {oracle:?} vs general {general}")
                    });
                }
            }
        }
    }
    rec.finish()
}

/// 7: symbolic Gauss sums match direct float summation within
/// 10^{-6} p^{k/2} for every residue a, over all moduli p^k up to 2401.
pub fn gauss_exact_vs_float(cfg: &VerifyConfig) -> FamilyReport {
    let mut rec = Recorder::new(7, "gauss sums exact vs float");
    let moduli: [(u64, u32); 10] = [
        (3, 1),
        (3, 2),
        (3, 3),
        (5, 1),
        (5, 2),
        (5, 3),
        (7, 1),
        (7, 2),
        (7, 3),
        (7, 4),
    ];
    for (pv, k) in moduli {
        if cfg.p_max.map_or(false, |mx| pv > mx) {
            continue;
        }
        let p = OddPrime::new(pv).expect("pinned primes are odd primes");
        let q = pv.pow(k);
        let tol = 1e-6 * (pv as f64).powf(f64::from(k) / 2.0);
        for a in 0..q {
            let a = BigInt::from(a);
            let exact = gauss_sum_exact(&a, p, k).to_complex();
            let ok = match gauss_sum_float(&a, q) {
                Ok(direct) => (exact - direct).norm() <= tol,
                Err(_) => false,
            };
            rec.check(ok, || format!("a={a} modulus {q}: exact {exact} off by > {tol:e}"));
        }
    }
    rec.finish()
}

/// 8: every character-sum closed form equals an independent direct
/// summation on its small-parameter grid — exactly where both sides are
/// rational, within 10^{-9} (scaled by the modulus) where the direct side
/// is a complex float.
pub fn character_sum_closed_forms(cfg: &VerifyConfig) -> FamilyReport {
    let mut rec = Recorder::new(8, "character-sum closed forms");
    let e = |n: i64, q: u64| -> Complex64 {
        Complex64::from_polar(
            1.0,
            std::f64::consts::TAU * n.rem_euclid(q as i64) as f64 / q as f64,
        )
    };

    // Full-orbit exponential sums.
    for q in 1..=16u64 {
        for a in -16..=16i64 {
            let direct: Complex64 = (0..q as i64).map(|t| e(a * t, q)).sum();
            let closed = geometric_exp_sum(a, q) as f64;
            rec.check((direct - closed).norm() <= 1e-9 * q as f64, || {
                format!("geometric a={a} q={q}")
            });
        }
    }

    let primes = cfg.primes(&[3, 5, 7]);

    // Power-of-symbol sums over units, exact integer oracle.
    for &p in &primes {
        for k in 1..=3u32 {
            let q = p.get().pow(k);
            for m in 0..=4u32 {
                let direct: i64 = (1..q as i64)
                    .filter(|t| t % p.get() as i64 != 0)
                    .map(|t| i64::from(legendre_i64(t, p)).pow(m))
                    .sum();
                let closed = legendre_power_unit_sum(p, k, m);
                rec.check(closed == Rational::from_integer(direct), || {
                    format!("unit-sum p={p} k={k} m={m}: closed {closed} vs direct {direct}")
                });
            }
        }
    }

    // Twisted unit sums, complex float oracle. The exponential's denominator
    // is p itself; t still ranges over the units of Z/p^k.
    for &p in &primes {
        for k in 1..=3u32 {
            let q = p.get().pow(k);
            for m in 1..(2 * p.get() as i64).min(q as i64) {
                if m % p.get() as i64 == 0 {
                    continue;
                }
                for n in 0..=3u32 {
                    let direct: Complex64 = (1..q as i64)
                        .filter(|t| t % p.get() as i64 != 0)
                        .map(|t| {
                            let chi = i64::from(legendre_i64(t, p)).pow(n);
                            e(m * t, p.get()) * chi as f64
                        })
                        .sum();
                    let closed = match twisted_unit_sum(p, k, m, n) {
                        Ok(TwistedUnitSum::Rational(r)) => Complex64::new(r.to_f64(), 0.0),
                        Ok(TwistedUnitSum::Gauss(g)) => g.to_complex(),
                        Err(_) => Complex64::new(f64::NAN, 0.0),
                    };
                    rec.check((direct - closed).norm() <= 1e-9 * q as f64, || {
                        format!("twisted p={p} k={k} m={m} n={n}: closed {closed} vs {direct}")
                    });
                }
            }
        }
    }

    // Symbol-power interval sums, exact rational oracle.
    for &p in &primes {
        let nr = least_nonresidue(p) as i64;
        for r in [1, -1, nr, -nr] {
            for n1 in 0..=6i64 {
                for n2 in n1..=6i64 {
                    let direct: i64 = (n1..=n2)
                        .map(|j| i64::from(legendre_i64(r, p)).pow(j as u32))
                        .sum();
                    let closed = legendre_interval_sum(r, p, n1, n2, 6);
                    rec.check(
                        closed.as_ref() == Ok(&Rational::from_integer(direct)),
                        || format!("interval p={p} r={r} [{n1},{n2}]: {closed:?} vs {direct}"),
                    );
                }
            }
        }
    }

    // Half-power tails, exact rational oracle on the sqrt(p)-free factor.
    for &p in &primes {
        for n1 in 0..=8i64 {
            for n2 in n1..=8i64 {
                for parity in [Parity::Even, Parity::Odd] {
                    let wanted = |j: i64| match parity {
                        Parity::Even => j % 2 == 0,
                        Parity::Odd => j % 2 != 0,
                    };
                    // Each odd-j term is sqrt(p) * p^{-(j+1)/2} (1 - 1/p);
                    // sum the rational cofactors exactly.
                    let unit_frac =
                        Rational::one() - Rational::prime_power(p, -1);
                    let direct: Rational = (n1..=n2)
                        .filter(|&j| wanted(j))
                        .map(|j| {
                            let half_exp = if j % 2 == 0 { -j / 2 } else { -(j + 1) / 2 };
                            Rational::prime_power(p, half_exp) * &unit_frac
                        })
                        .fold(Rational::zero(), |acc, t| acc + t);
                    let closed = half_power_tail_sum(p, n1, n2, parity);
                    let ok = match &closed {
                        Ok(TailSum::Rational(f)) => parity == Parity::Even && *f == direct,
                        Ok(TailSum::HalfPower(f)) => parity == Parity::Odd && *f == direct,
                        Err(_) => false,
                    };
                    rec.check(ok, || {
                        format!("tail p={p} [{n1},{n2}] {parity:?}: {closed:?} vs {direct}")
                    });
                }
            }
        }
    }

    rec.finish()
}

/// 9: binary densities — alpha(m, ax^2 + by^2) p^{m1+1} equals the binary
/// brute-force count at depth m1 + 1, exactly.
pub fn binary_consistency(cfg: &VerifyConfig) -> FamilyReport {
    let mut rec = Recorder::new(9, "binary-form consistency");
    for p in cfg.primes(&[3, 5, 7]) {
        let units = unit_pool(p);
        for b1 in 0..=cfg.clamp_c1(3) {
            for m1 in 0..=cfg.clamp_m1(b1 + 2) {
                let k = m1 + 1;
                let n = match p.get().checked_pow(k).filter(|&n| n <= cfg.cap()) {
                    Some(n) => n,
                    None => continue,
                };
                for a in units {
                    for b0 in units {
                        let b = BigInt::from(b0 * pow_i64(p, b1));
                        let a = BigInt::from(a);
                        for m0 in target_unit_pool(p) {
                            let m = BigInt::from(m0 * pow_i64(p, m1));
                            let dens = binary_local_density(&m, &a, &b, p);
                            let count = count_bruteforce_binary(&m, &a, &b, n);
                            let ok = match (&dens, &count) {
                                (Ok(d), Ok(c)) => {
                                    &d.value * Rational::prime_power(p, i64::from(k))
                                        == Rational::from_integer(*c)
                                }
                                _ => false,
                            };
                            rec.check(ok, || {
                                format!(
                                    "p={p} a={a} b={b} m={m}: density {:?} vs count {count:?}",
                                    dens.as_ref().map(|d| d.value.clone())
                                )
                            });
                        }
                    }
                }
            }
        }
    }
    rec.finish()
}

/// 10: counts are multiplicative across coprime moduli — r(15) = r(3) r(5)
/// and r(21) = r(3) r(7) on a fixed sample of targets and forms. The sample
/// is pinned, so the grid clamps do not apply.
pub fn crt_multiplicativity(_cfg: &VerifyConfig) -> FamilyReport {
    let mut rec = Recorder::new(10, "CRT multiplicativity");
    let forms = [
        form(1, 1, 1),
        form(1, 2, 3),
        form(2, 3, 5),
        form(1, 3, 9),
        form(2, 5, 7),
    ];
    for q in &forms {
        for m in 0i64..4 {
            let m = BigInt::from(m);
            let r3 = count_bruteforce(&m, q, 3).unwrap();
            for (small, composite) in [(5u64, 15u64), (7, 21)] {
                let r_small = count_bruteforce(&m, q, small).unwrap();
                let r_comp = count_bruteforce(&m, q, composite).unwrap();
                rec.check(r_comp == r3 * r_small, || {
                    format!(
                        "q={q} m={m}: r({composite}) = {r_comp} vs r(3) r({small}) = {}",
                        r3 * r_small
                    )
                });
            }
        }
    }
    rec.finish()
}

/// 11: worked spot values, each re-derived from the brute-force oracle on
/// the spot before being compared against its frozen constant.
pub fn frozen_spot_values(_cfg: &VerifyConfig) -> FamilyReport {
    let mut rec = Recorder::new(11, "frozen spot values");
    let p = OddPrime::new(3).expect("3 is an odd prime");
    let rat = |n: i64, d: i64| Rational::new(BigInt::from(n), BigInt::from(d));

    // Nonzero targets: derive alpha = r(p^{m1+1}) / p^{2(m1+1)} by
    // enumeration, then require both it and the closed form to equal the
    // frozen value.
    let nonzero: [(i64, DiagonalForm, u32, Rational); 3] = [
        (1, form(1, 1, 1), 1, rat(2, 3)),
        (1, form(1, 3, 3), 1, rat(2, 1)),
        (3, form(1, 9, 9), 2, rat(0, 1)),
    ];
    for (m, q, k, frozen) in nonzero {
        let m = BigInt::from(m);
        let n = 3u64.pow(k);
        let derived = Rational::from_integer(count_bruteforce(&m, &q, n).unwrap())
            * Rational::prime_power(p, -2 * i64::from(k));
        rec.check(derived == frozen, || {
            format!("q={q} m={m}: oracle re-derivation {derived} vs frozen {frozen}")
        });
        let closed = local_density(&m, &q, p).value;
        rec.check(closed == frozen, || {
            format!("q={q} m={m}: closed form {closed} vs frozen {frozen}")
        });
    }

    // The null target is a limit; derive depth-k estimates by enumeration
    // and require the frozen value to sit within the convergence bound.
    let q = form(1, 1, 1);
    let frozen = rat(4, 3);
    let zero = BigInt::from(0);
    for k in [3u32, 4] {
        let n = 3u64.pow(k);
        let at_k = Rational::from_integer(count_bruteforce(&zero, &q, n).unwrap())
            * Rational::prime_power(p, -2 * i64::from(k));
        let diff = at_k - &frozen;
        let bound_sq = Rational::prime_power(p, -2 * i64::from(k / 2) + 2);
        rec.check(&diff * &diff <= bound_sq, || {
            format!("null target depth {k}: estimate off the frozen 4/3 by {diff}")
        });
    }
    let closed = local_density(&zero, &q, p).value;
    rec.check(closed == frozen, || {
        format!("null target: closed form {closed} vs frozen {frozen}")
    });

    rec.finish()
}

/// Run every family in criterion order.
pub fn run_all(cfg: &VerifyConfig) -> Vec<FamilyReport> {
    vec![
        closed_form_vs_bruteforce(cfg),
        stabilization(cfg),
        three_evaluator_agreement(cfg),
        null_target_counts(cfg),
        unramified_agreement(cfg),
        anisotropic_oracle(cfg),
        gauss_exact_vs_float(cfg),
        character_sum_closed_forms(cfg),
        binary_consistency(cfg),
        crt_multiplicativity(cfg),
        frozen_spot_values(cfg),
    ]
}
