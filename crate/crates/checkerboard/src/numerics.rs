//! Foundational exact and floating-point numerics.
//!
//! This module supplies the low-level machinery everything else is built on:
//!
//! * [`PathCount`] — an arbitrary-precision nonnegative integer for exact
//!   lattice-path counts, together with [`binomial`].
//! * [`bessel_j`] — Bessel functions J₀, J₁, J₂ of the first kind across all
//!   argument scales relevant here (0 ≤ z ≤ 10⁹), combining the ascending
//!   power series at small argument with the full Hankel asymptotic expansion
//!   at large argument.
//! * [`bessel_j_hankel2`] — the *two-term* Hankel approximation for orders 0
//!   and 2, kept as a separate operation because it is an analysis tool (used
//!   by the first-to-full ratio asymptotics), not a general evaluator.
//! * [`integrate_complex`] — deterministic composite Simpson quadrature for
//!   complex-valued integrands.
//!
//! All functions here are pure; everything is safe to call concurrently.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use std::f64::consts::{FRAC_PI_4, PI, TAU};
use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use crate::error::{Error, Result};

/// A complex amplitude. Components must stay finite through every public
/// operation in this crate.
pub type ComplexAmplitude = num_complex::Complex64;

// ---------------------------------------------------------------------------
// Exact path counts
// ---------------------------------------------------------------------------

/// Exact arbitrary-precision nonnegative count of lattice paths.
///
/// A thin newtype over [`BigUint`] so that counting results cannot be silently
/// mixed with other integer quantities, and so the "counts are nonnegative"
/// invariant is carried by the type.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PathCount(BigUint);

impl PathCount {
    /// The zero count.
    pub fn zero() -> Self {
        PathCount(BigUint::zero())
    }

    /// The unit count.
    pub fn one() -> Self {
        PathCount(BigUint::one())
    }

    /// Whether this count is zero.
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Borrow the underlying arbitrary-precision value.
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    /// Consume into the underlying arbitrary-precision value.
    pub fn into_value(self) -> BigUint {
        self.0
    }

    /// Lossy conversion to `f64` (may overflow to infinity for huge counts).
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }

    /// Natural logarithm of the count; `-inf` for a zero count.
    ///
    /// Computed from the top 53 bits plus the bit length, so it stays accurate
    /// (relative error ~1e-15) even when the count itself far exceeds the
    /// `f64` range. This is what lets finite-N propagator sums weight huge
    /// exact counts without overflow.
    pub fn ln(&self) -> f64 {
        big_ln(&self.0)
    }

    /// `self - other` if nonnegative, else `None`.
    pub fn checked_sub(&self, other: &PathCount) -> Option<PathCount> {
        if self.0 >= other.0 {
            Some(PathCount(&self.0 - &other.0))
        } else {
            None
        }
    }
}

/// Natural logarithm of a [`BigUint`] (`-inf` for zero), accurate to ~1e-15
/// relative regardless of magnitude.
pub(crate) fn big_ln(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    if bits <= 53 {
        return v.to_f64().expect("value fits in f64").ln();
    }
    let shift = bits - 53;
    let top = (v >> shift).to_f64().expect("53-bit value fits in f64");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

impl From<u64> for PathCount {
    fn from(v: u64) -> Self {
        PathCount(BigUint::from(v))
    }
}

impl From<BigUint> for PathCount {
    fn from(v: BigUint) -> Self {
        PathCount(v)
    }
}

impl fmt::Display for PathCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Add<&PathCount> for &PathCount {
    type Output = PathCount;
    fn add(self, rhs: &PathCount) -> PathCount {
        PathCount(&self.0 + &rhs.0)
    }
}

impl AddAssign<PathCount> for PathCount {
    fn add_assign(&mut self, rhs: PathCount) {
        self.0 += rhs.0;
    }
}

impl AddAssign<&PathCount> for PathCount {
    fn add_assign(&mut self, rhs: &PathCount) {
        self.0 += &rhs.0;
    }
}

impl Mul<&PathCount> for &PathCount {
    type Output = PathCount;
    fn mul(self, rhs: &PathCount) -> PathCount {
        PathCount(&self.0 * &rhs.0)
    }
}

/// Exact binomial coefficient C(n, k).
///
/// Convention: returns 0 whenever `k < 0`, `k > n`, or `n < 0`. This is what
/// makes the corner-count formulas evaluate correctly at boundary reversal
/// numbers (e.g. an `(R-2)/2 = -1` index at `R = 0`) without special-casing.
pub fn binomial(n: i64, k: i64) -> PathCount {
    if n < 0 || k < 0 || k > n {
        return PathCount::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    // Multiply/divide incrementally; each division is exact because every
    // prefix of the product is itself a binomial coefficient.
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc *= BigUint::from(n - k + i);
        acc /= BigUint::from(i);
    }
    PathCount(acc)
}

// ---------------------------------------------------------------------------
// Bessel functions of the first kind, orders 0..2
// ---------------------------------------------------------------------------

/// Largest argument accepted by [`bessel_j`]. Beyond this, double-precision
/// argument reduction can no longer deliver a meaningful phase.
pub const BESSEL_MAX_ARGUMENT: f64 = 1.0e9;

/// Crossover between the ascending power series and the asymptotic expansion.
const SERIES_ASYMPTOTIC_SWITCH: f64 = 12.0;

// Three-part split of 2π for compensated argument reduction
// (Cody–Waite style). HI and MID have 24-bit significands, so products with
// an integer multiple k < 2^28 are exact in double precision; the reduction
// error is then dominated by the LO term, giving phases accurate to ~4e-16 rad
// even at z = 1e9 (verified against extended-precision reduction).
const TWO_PI_HI: f64 = 6.283_185_482_025_146_5;
const TWO_PI_MID: f64 = -1.748_455_531_469_517_2e-7;
const TWO_PI_LO: f64 = -6.860_497_997_771_531_6e-15;

/// Reduce `z ≥ 0` modulo 2π into roughly `[-π, π]` using the compensated
/// three-part split above.
pub(crate) fn reduce_two_pi(z: f64) -> f64 {
    let k = (z / TAU).round();
    ((z - k * TWO_PI_HI) - k * TWO_PI_MID) - k * TWO_PI_LO
}

/// Ascending power series for J_n(z), n ∈ {0,1,2}; used for z below the
/// crossover where it converges in at most a few tens of terms.
fn bessel_series(order: u32, z: f64) -> f64 {
    let half = 0.5 * z;
    let mut term = match order {
        0 => 1.0,
        1 => half,
        2 => 0.5 * half * half,
        _ => unreachable!("order checked by caller"),
    };
    let mut sum = term;
    let x2 = half * half;
    for k in 1..=60u32 {
        let kf = f64::from(k);
        term *= -x2 / (kf * (kf + f64::from(order)));
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// Full Hankel asymptotic expansion for J_n(z), truncated at the smallest
/// term (the expansion is divergent; optimal truncation leaves an error below
/// the last kept term, far under 1e-12 of the envelope for z ≥ 12).
fn bessel_asymptotic(order: u32, z: f64) -> f64 {
    let mu = f64::from(4 * order * order);
    let mut p = 1.0; // a_0 contribution (even index, positive sign)
    let mut q = 0.0;
    let mut a = 1.0_f64;
    let mut prev = f64::INFINITY;
    for m in 1..=34u32 {
        let mf = f64::from(m);
        let factor = (mu - (2.0 * mf - 1.0).powi(2)) / (8.0 * mf * z);
        a *= factor;
        if a.abs() >= prev {
            break; // divergent tail reached; stop at the optimal truncation
        }
        prev = a.abs();
        if m % 2 == 1 {
            let sign = if ((m - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            q += sign * a;
        } else {
            let sign = if (m / 2) % 2 == 0 { 1.0 } else { -1.0 };
            p += sign * a;
        }
        if a.abs() < 1e-18 {
            break;
        }
    }
    let chi = reduce_two_pi(z) - (2.0 * f64::from(order) + 1.0) * FRAC_PI_4;
    (2.0 / (PI * z)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Bessel function of the first kind J_n(z) for n ∈ {0, 1, 2}, 0 ≤ z ≤ 10⁹.
///
/// Strategy: ascending power series below z = 12, full asymptotic expansion
/// with optimal truncation above. Relative accuracy is ~1e-11 or better for
/// z ≤ 10³; for larger z the error is bounded by ~1e-9 of the oscillation
/// envelope, with phase accurate to well under 1e-6 rad up to z = 10⁸
/// (argument reduction is the only floor, and the compensated reduction keeps
/// it near machine precision).
///
/// # Errors
///
/// `UnsupportedBesselOrder` for orders other than 0/1/2;
/// `BesselArgumentOutOfRange` for negative, non-finite, or > 10⁹ arguments.
pub fn bessel_j(order: u32, z: f64) -> Result<f64> {
    if order > 2 {
        return Err(Error::UnsupportedBesselOrder {
            order,
            supported: "0, 1, 2",
        });
    }
    if !z.is_finite() || !(0.0..=BESSEL_MAX_ARGUMENT).contains(&z) {
        return Err(Error::BesselArgumentOutOfRange {
            z,
            constraint: "0 <= z <= 1e9, finite",
        });
    }
    if z < SERIES_ASYMPTOTIC_SWITCH {
        Ok(bessel_series(order, z))
    } else {
        Ok(bessel_asymptotic(order, z))
    }
}

/// J₀, J₁ and J₂ at the same argument, each evaluated independently.
pub fn bessel_j012(z: f64) -> Result<(f64, f64, f64)> {
    Ok((bessel_j(0, z)?, bessel_j(1, z)?, bessel_j(2, z)?))
}

/// The *two-term* Hankel asymptotic approximation of J_n(z) for n ∈ {0, 2}:
///
/// ```text
/// J0(z) ≈ sqrt(2/(πz)) [ cos(z - π/4)  + sin(z - π/4) / (8z) ]
/// J2(z) ≈ sqrt(2/(πz)) [ cos(z - 5π/4) - 15 sin(z - 5π/4) / (8z) ]
/// ```
///
/// This truncation is deliberately exposed as its own operation: it is the
/// form used by the closed-form ratio analysis, and it cannot meet the
/// general accuracy contract of [`bessel_j`] (which should always be used for
/// actual propagator evaluation).
///
/// # Errors
///
/// `UnsupportedBesselOrder` for orders other than 0/2;
/// `BesselArgumentOutOfRange` for z < 10 (outside the asymptotic regime).
pub fn bessel_j_hankel2(order: u32, z: f64) -> Result<f64> {
    if order != 0 && order != 2 {
        return Err(Error::UnsupportedBesselOrder {
            order,
            supported: "0, 2",
        });
    }
    if !z.is_finite() || z < 10.0 {
        return Err(Error::BesselArgumentOutOfRange {
            z,
            constraint: "z >= 10 (asymptotic regime)",
        });
    }
    let chi = reduce_two_pi(z) - (2.0 * f64::from(order) + 1.0) * FRAC_PI_4;
    let envelope = (2.0 / (PI * z)).sqrt();
    let sin_coeff = match order {
        0 => 1.0,
        _ => -15.0,
    };
    Ok(envelope * (chi.cos() + sin_coeff * chi.sin() / (8.0 * z)))
}

// ---------------------------------------------------------------------------
// Composite Simpson quadrature for complex integrands
// ---------------------------------------------------------------------------

/// Composite Simpson approximation of ∫ₐᵇ f(x) dx for a complex-valued
/// integrand, on `n_points` equally spaced nodes (odd, ≥ 3).
///
/// Deterministic (fixed evaluation order), exact for polynomials of degree
/// ≤ 3 on each panel, and converges at 4th order on smooth integrands.
///
/// # Errors
///
/// `InvalidQuadratureGrid` if `n_points` is even or < 3;
/// `InvalidIntegrationBounds` if `a > b` (or either bound is NaN).
pub fn integrate_complex<F>(f: F, a: f64, b: f64, n_points: usize) -> Result<ComplexAmplitude>
where
    F: Fn(f64) -> ComplexAmplitude,
{
    if n_points < 3 || n_points.is_multiple_of(2) {
        return Err(Error::InvalidQuadratureGrid { n_points });
    }
    if !(a <= b) {
        return Err(Error::InvalidIntegrationBounds { a, b });
    }
    if a == b {
        return Ok(ComplexAmplitude::new(0.0, 0.0));
    }
    let n = n_points - 1; // number of panels (even)
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let x = a + h * i as f64;
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += f(x) * w;
    }
    Ok(sum * (h / 3.0))
}
