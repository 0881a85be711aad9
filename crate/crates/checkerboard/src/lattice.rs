//! Exact enumeration of checkerboard paths in the rotated u–v lattice.
//!
//! A checkerboard path of `N` time steps is a sign sequence `s_1..s_N`
//! (`+` = right-moving, `-` = left-moving). Rotating 45°, a right step becomes
//! a unit step in `u` and a left step a unit step in `v`, so a path becomes a
//! monotone staircase in the (u, v) plane. Two corner types are distinguished:
//!
//! * **l-corner**: a (u-step, v-step) transition (right turn to left);
//! * **r-corner**: a (v-step, u-step) transition (left turn to right).
//!
//! This module provides:
//!
//! * closed-form corner-count formulas for unrestricted staircases
//!   ([`phi_l_wr`], [`phi_r_wr`]);
//! * ballot-type counts for staircases confined weakly above the diagonal
//!   `u = v` ([`phi_l_restricted`], [`phi_r_restricted`]), which encode "do
//!   not touch the arrival point before the final time";
//! * first-arrival path counts per propagator component ([`phi_first`]);
//! * exhaustive brute-force oracles ([`enumerate_paths`],
//!   [`tally_unrestricted_corners`], [`tally_restricted_corners`]) that define
//!   ground truth for every counting convention used in this crate.
//!
//! Conventions fixed here and relied on everywhere else:
//!
//! * The *reversal number* `R` of a first-arrival path is defined through the
//!   corner counts of the **inner** path (first and last steps stripped):
//!   `R = 2·R_r - 1` for the `++` component and `R = 2·R_l` for `+-`.
//!   Junction corners where the inner path meets the fixed first/last steps
//!   are not counted. This is the only reading that makes the component
//!   parities (odd `R` for `++`, even for `+-`) and the closed-form limits
//!   consistent, and the oracle enforces it.
//! * Out-of-range binomials are 0, so boundary reversal numbers need no
//!   special-casing.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{binomial, PathCount};

/// Largest `N` accepted by the exhaustive sign-sequence walk.
pub const MAX_ENUMERATION_STEPS: u32 = 24;

/// The sign of a single checkerboard step (also used for the departure and
/// arrival velocity labels α and β).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StepSign {
    /// Right-moving (+c).
    Plus,
    /// Left-moving (−c).
    Minus,
}

impl StepSign {
    /// The opposite sign.
    pub fn flipped(self) -> StepSign {
        match self {
            StepSign::Plus => StepSign::Minus,
            StepSign::Minus => StepSign::Plus,
        }
    }
}

impl fmt::Display for StepSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepSign::Plus => "+",
            StepSign::Minus => "-",
        })
    }
}

/// Propagator component K_βα: departure velocity sign α (first step),
/// arrival velocity sign β (last step).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Component {
    /// β = +, α = + (right-moving to right-moving).
    PlusPlus,
    /// β = +, α = − (left-moving to right-moving).
    PlusMinus,
    /// β = −, α = + (right-moving to left-moving).
    MinusPlus,
    /// β = −, α = − (left-moving to left-moving).
    MinusMinus,
}

impl Component {
    /// The arrival velocity sign β (first label).
    pub fn beta(self) -> StepSign {
        match self {
            Component::PlusPlus | Component::PlusMinus => StepSign::Plus,
            Component::MinusPlus | Component::MinusMinus => StepSign::Minus,
        }
    }

    /// The departure velocity sign α (second label).
    pub fn alpha(self) -> StepSign {
        match self {
            Component::PlusPlus | Component::MinusPlus => StepSign::Plus,
            Component::PlusMinus | Component::MinusMinus => StepSign::Minus,
        }
    }

    /// Short ASCII name, e.g. `++` or `+-`.
    pub fn name(self) -> &'static str {
        match self {
            Component::PlusPlus => "++",
            Component::PlusMinus => "+-",
            Component::MinusPlus => "-+",
            Component::MinusMinus => "--",
        }
    }

    /// All four components in a fixed order.
    pub fn all() -> [Component; 4] {
        [
            Component::PlusPlus,
            Component::PlusMinus,
            Component::MinusPlus,
            Component::MinusMinus,
        ]
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Specification of an `N`-step lattice: `P` right steps, `Q` left steps,
/// net displacement `M = P - Q` in units of the spatial step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    n: u32,
    p: u32,
    q: u32,
    m: i64,
}

impl GridSpec {
    /// Build from the step counts (P right, Q left).
    pub fn from_steps(p: u32, q: u32) -> Result<GridSpec> {
        let n = p + q;
        if n == 0 {
            return Err(Error::InvalidGridSpec {
                reason: "need at least one step (P + Q >= 1)".to_string(),
            });
        }
        Ok(GridSpec {
            n,
            p,
            q,
            m: i64::from(p) - i64::from(q),
        })
    }

    /// Build from the total step count `N` and net displacement `M`
    /// (which must satisfy `|M| <= N` and share `N`'s parity).
    pub fn from_displacement(n: u32, m: i64) -> Result<GridSpec> {
        if n == 0 {
            return Err(Error::InvalidGridSpec {
                reason: "need at least one step (N >= 1)".to_string(),
            });
        }
        if m.unsigned_abs() > u64::from(n) {
            return Err(Error::InvalidGridSpec {
                reason: format!("|M| = {} exceeds N = {n}", m.abs()),
            });
        }
        if (i64::from(n) - m) % 2 != 0 {
            return Err(Error::InvalidGridSpec {
                reason: format!("N = {n} and M = {m} must have the same parity"),
            });
        }
        let p = (i64::from(n) + m) / 2;
        let q = (i64::from(n) - m) / 2;
        Ok(GridSpec {
            n,
            p: p as u32,
            q: q as u32,
            m,
        })
    }

    /// Total number of time steps `N = P + Q`.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of right steps `P`.
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Number of left steps `Q`.
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Net displacement `M = P - Q` in spatial-step units.
    pub fn m(&self) -> i64 {
        self.m
    }
}

// ---------------------------------------------------------------------------
// Closed-form corner counts
// ---------------------------------------------------------------------------

/// Number of unrestricted monotone staircases with `du` u-steps, `dv` v-steps
/// and exactly `r_l` l-corners: `C(du, r_l) * C(dv, r_l)`.
///
/// Out-of-range `r_l` yields 0 through the binomial convention.
pub fn phi_l_wr(r_l: i64, du: i64, dv: i64) -> PathCount {
    &binomial(du, r_l) * &binomial(dv, r_l)
}

/// Number of unrestricted monotone staircases with exactly `r_r` r-corners:
/// `C(du, r_r) * C(dv, r_r)` (the staircase reflection of [`phi_l_wr`]).
pub fn phi_r_wr(r_r: i64, du: i64, dv: i64) -> PathCount {
    &binomial(du, r_r) * &binomial(dv, r_r)
}

fn check_restricted_domain(a: i64, b: i64) -> Result<()> {
    if a > 0 || b < 0 {
        return Err(Error::InvalidGridSpec {
            reason: format!(
                "diagonal-restricted counts are defined for starts on or above the \
                 diagonal: need a <= 0 <= b, got a = {a}, b = {b}"
            ),
        });
    }
    Ok(())
}

/// Number of monotone staircases from `(a, 0)` to `(b, b)` that stay weakly
/// above the diagonal (`v >= u` at every lattice point) with exactly `r_l`
/// l-corners:
///
/// ```text
/// C(b-a, r_l) C(b, r_l) - C(b-a-1, r_l - 1) C(b+1, r_l + 1)
/// ```
///
/// The subtracted term is the reflection correction that removes staircases
/// dipping below the diagonal.
///
/// # Errors
///
/// `InvalidGridSpec` unless `a <= 0 <= b`: the start must sit on or above the
/// diagonal or the count formula does not apply (the reflection argument
/// breaks down and the difference can go negative).
pub fn phi_l_restricted(r_l: i64, a: i64, b: i64) -> Result<PathCount> {
    check_restricted_domain(a, b)?;
    let unrestricted = &binomial(b - a, r_l) * &binomial(b, r_l);
    let reflected = &binomial(b - a - 1, r_l - 1) * &binomial(b + 1, r_l + 1);
    Ok(unrestricted
        .checked_sub(&reflected)
        .expect("reflection correction cannot exceed the unrestricted count on a <= 0 <= b"))
}

/// Number of monotone staircases from `(a, 0)` to `(b, b)` that stay weakly
/// above the diagonal with exactly `r_r` r-corners:
///
/// ```text
/// C(b-a, r_r) C(b, r_r) - C(b-a+1, r_r) C(b-1, r_r)
/// ```
///
/// # Errors
///
/// As [`phi_l_restricted`].
pub fn phi_r_restricted(r_r: i64, a: i64, b: i64) -> Result<PathCount> {
    check_restricted_domain(a, b)?;
    let unrestricted = &binomial(b - a, r_r) * &binomial(b, r_r);
    let reflected = &binomial(b - a + 1, r_r) * &binomial(b - 1, r_r);
    Ok(unrestricted
        .checked_sub(&reflected)
        .expect("reflection correction cannot exceed the unrestricted count on a <= 0 <= b"))
}

/// Number of first-arrival paths with reversal number `R` for the `++` or
/// `+-` component on a `(P, Q)` lattice (arrival point `M = P - Q` steps to
/// the right, reached for the first time at the final step).
///
/// ```text
/// Φ¹₊₊(R) = C(P-1, (R+1)/2) C(Q-1, (R-1)/2) - C(P-2, (R-1)/2) C(Q, (R+1)/2)   (R odd)
/// Φ¹₊₋(R) = C(P-1, R/2)     C(Q-1, R/2)     - C(P-2, (R-2)/2) C(Q, (R+2)/2)   (R even)
/// ```
///
/// `R` counts reversals of the full path under the inner-path convention
/// (module docs); its parity is fixed by the component.
///
/// # Errors
///
/// * `UnsupportedComponent` for `-+` / `--` (their first-arrival parts vanish
///   for arrival from the left and are not counted here);
/// * `InvalidGridSpec` unless `P - Q >= 1` (first arrival needs the arrival
///   point strictly to the right of the start);
/// * `ReversalParity` if `R` has the wrong parity (or sign) for the component.
pub fn phi_first(component: Component, r: i64, p: i64, q: i64) -> Result<PathCount> {
    if p < 0 || q < 0 {
        return Err(Error::InvalidGridSpec {
            reason: format!("step counts must be nonnegative, got P = {p}, Q = {q}"),
        });
    }
    if p - q < 1 {
        return Err(Error::InvalidGridSpec {
            reason: format!(
                "first-arrival counts need net displacement M = P - Q >= 1, got M = {}",
                p - q
            ),
        });
    }
    let (t1, t2) = match component {
        Component::PlusPlus => {
            if r < 1 || r % 2 == 0 {
                return Err(Error::ReversalParity {
                    r,
                    component: "++",
                    expected: "odd R >= 1",
                });
            }
            let rr = (r + 1) / 2; // number of r-corners of the inner path
            (
                &binomial(p - 1, rr) * &binomial(q - 1, rr - 1),
                &binomial(p - 2, rr - 1) * &binomial(q, rr),
            )
        }
        Component::PlusMinus => {
            if r < 0 || r % 2 != 0 {
                return Err(Error::ReversalParity {
                    r,
                    component: "+-",
                    expected: "even R >= 0",
                });
            }
            let k = r / 2; // number of l-corners of the inner path
            (
                &binomial(p - 1, k) * &binomial(q - 1, k),
                &binomial(p - 2, k - 1) * &binomial(q, k + 1),
            )
        }
        other => {
            return Err(Error::UnsupportedComponent {
                component: other.name(),
                operation: "phi_first (first arrivals from the left exist only for ++ and +-)",
            });
        }
    };
    Ok(t1
        .checked_sub(&t2)
        .expect("first-arrival correction cannot exceed the leading term for M >= 1"))
}

// ---------------------------------------------------------------------------
// Exhaustive oracles
// ---------------------------------------------------------------------------

/// Key of one [`CornerTally`] bin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TallyKey {
    /// r-corner count of the inner path.
    pub r_r: u32,
    /// l-corner count of the inner path.
    pub r_l: u32,
    /// Whether the path touches the arrival point for the first time exactly
    /// at the final step.
    pub first_arrival: bool,
    /// First-step sign α.
    pub alpha: StepSign,
    /// Last-step sign β.
    pub beta: StepSign,
}

/// Exact tallies of all `2^N` sign sequences, binned by inner-path corner
/// counts, first-arrival status, and the first/last step signs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CornerTally {
    n: u32,
    arrival_x: i64,
    counts: BTreeMap<TallyKey, PathCount>,
}

impl CornerTally {
    /// Number of time steps of the walked sequences.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// The arrival point used for first-arrival classification.
    pub fn arrival_x(&self) -> i64 {
        self.arrival_x
    }

    /// Count for one bin (zero if the bin is absent).
    pub fn count(&self, key: &TallyKey) -> PathCount {
        self.counts.get(key).cloned().unwrap_or_else(PathCount::zero)
    }

    /// First-arrival count for a component at inner corner counts
    /// `(r_r, r_l)`.
    pub fn first_arrival_count(&self, component: Component, r_r: u32, r_l: u32) -> PathCount {
        self.count(&TallyKey {
            r_r,
            r_l,
            first_arrival: true,
            alpha: component.alpha(),
            beta: component.beta(),
        })
    }

    /// Iterate over the nonzero bins in key order.
    pub fn iter(&self) -> impl Iterator<Item = (&TallyKey, &PathCount)> {
        self.counts.iter()
    }

    /// Total count over all bins with the given first-step sign.
    pub fn total_for_alpha(&self, alpha: StepSign) -> PathCount {
        let mut total = PathCount::zero();
        for (key, count) in &self.counts {
            if key.alpha == alpha {
                total += count;
            }
        }
        total
    }

    /// Check the structural invariants of the tally:
    /// corner counts alternate (`|R_r - R_l| <= 1` on every nonzero bin) and,
    /// with the first step fixed, the remaining `N - 1` free steps account for
    /// exactly `2^(N-1)` sequences per sign.
    pub fn check_invariants(&self) -> Result<()> {
        for (key, count) in &self.counts {
            if count.is_zero() {
                continue;
            }
            let diff = i64::from(key.r_r) - i64::from(key.r_l);
            if diff.abs() > 1 {
                return Err(Error::InvalidGridSpec {
                    reason: format!(
                        "corner tally bin {key:?} violates |R_r - R_l| <= 1 (corners must alternate)"
                    ),
                });
            }
        }
        let expected = PathCount::from(1u64 << (self.n - 1));
        for alpha in [StepSign::Plus, StepSign::Minus] {
            let total = self.total_for_alpha(alpha);
            if total != expected {
                return Err(Error::InvalidGridSpec {
                    reason: format!(
                        "corner tally totals {total} sequences for alpha = {alpha}, expected {expected}"
                    ),
                });
            }
        }
        Ok(())
    }
}

/// Walk every sign sequence of `N` steps and tally it.
///
/// For each sequence this records the first/last step signs (α, β), the
/// l-/r-corner counts of the inner path (first and last steps stripped), and
/// whether the path — starting at position 0 — touches `arrival_x` for the
/// first time exactly at the final step. The walk covers sequences of every
/// intermediate displacement; bins with `first_arrival = true` necessarily
/// end at `arrival_x`, which pins their step counts to
/// `P = (N + arrival_x)/2`.
///
/// This is the ground-truth oracle for the closed-form counts; it runs in
/// `O(N · 2^N)` and is capped at `N = `[`MAX_ENUMERATION_STEPS`].
///
/// # Errors
///
/// `EnumerationTooLarge` if `grid.n()` exceeds the cap.
pub fn enumerate_paths(grid: &GridSpec, arrival_x: i64) -> Result<CornerTally> {
    let n = grid.n();
    if n > MAX_ENUMERATION_STEPS {
        return Err(Error::EnumerationTooLarge {
            n,
            max: MAX_ENUMERATION_STEPS,
        });
    }
    let total: u64 = 1u64 << n;
    // Parallelize over contiguous ranges of the sequence index; tallies merge
    // by exact addition, so the result is deterministic regardless of split.
    let chunks: u64 = if n >= 16 { 256 } else { 1 };
    let chunk_len = total / chunks;
    let partials: Vec<BTreeMap<TallyKey, PathCount>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut local: BTreeMap<TallyKey, PathCount> = BTreeMap::new();
            for seq in (c * chunk_len)..((c + 1) * chunk_len) {
                let key = classify_sequence(seq, n, arrival_x);
                *local.entry(key).or_insert_with(PathCount::zero) += PathCount::one();
            }
            local
        })
        .collect();
    let mut counts: BTreeMap<TallyKey, PathCount> = BTreeMap::new();
    for partial in partials {
        for (key, count) in partial {
            *counts.entry(key).or_insert_with(PathCount::zero) += count;
        }
    }
    Ok(CornerTally {
        n,
        arrival_x,
        counts,
    })
}

/// Classify one sign sequence (bit `i` set = step `i+1` moves right).
fn classify_sequence(seq: u64, n: u32, arrival_x: i64) -> TallyKey {
    let step = |i: u32| -> i64 {
        if (seq >> i) & 1 == 1 {
            1
        } else {
            -1
        }
    };
    let mut pos: i64 = 0;
    let mut touched_early = pos == arrival_x; // the start counts as a touch
    for i in 0..n - 1 {
        pos += step(i);
        if pos == arrival_x {
            touched_early = true;
        }
    }
    let final_pos = pos + step(n - 1);
    let first_arrival = final_pos == arrival_x && !touched_early;

    // Corner counts of the inner path: adjacent step pairs fully inside
    // steps 2..N-1 (1-based), i.e. pairs (i, i+1) for i in 1..=N-3 (0-based).
    let mut r_l = 0u32;
    let mut r_r = 0u32;
    if n >= 4 {
        for i in 1..=(n - 3) {
            let a = step(i);
            let b = step(i + 1);
            if a == 1 && b == -1 {
                r_l += 1;
            } else if a == -1 && b == 1 {
                r_r += 1;
            }
        }
    }
    let sign_of = |s: i64| {
        if s == 1 {
            StepSign::Plus
        } else {
            StepSign::Minus
        }
    };
    TallyKey {
        r_r,
        r_l,
        first_arrival,
        alpha: sign_of(step(0)),
        beta: sign_of(step(n - 1)),
    }
}

/// Exhaustively tally all monotone staircases with `du` u-steps and `dv`
/// v-steps by their corner counts `(r_l, r_r)`.
///
/// Ground truth for [`phi_l_wr`] / [`phi_r_wr`]. Cost is the number of
/// staircases, `C(du + dv, du)`; intended for `du + dv <= 24`.
pub fn tally_unrestricted_corners(du: u32, dv: u32) -> BTreeMap<(u32, u32), PathCount> {
    let mut tally = BTreeMap::new();
    walk_staircases(du, dv, 0, 0, false, &mut |r_l, r_r| {
        *tally.entry((r_l, r_r)).or_insert_with(PathCount::zero) += PathCount::one();
    });
    tally
}

/// Exhaustively tally all monotone staircases from `(a, 0)` to `(b, b)` that
/// stay weakly above the diagonal (`v >= u` after every step), by corner
/// counts `(r_l, r_r)`.
///
/// Ground truth for [`phi_l_restricted`] / [`phi_r_restricted`].
///
/// # Errors
///
/// `InvalidGridSpec` unless `a <= 0 <= b` (same domain as the formulas).
pub fn tally_restricted_corners(a: i64, b: i64) -> Result<BTreeMap<(u32, u32), PathCount>> {
    check_restricted_domain(a, b)?;
    let du = (b - a) as u32;
    let dv = b as u32;
    let mut tally = BTreeMap::new();
    walk_staircases(du, dv, a, 0, true, &mut |r_l, r_r| {
        *tally.entry((r_l, r_r)).or_insert_with(PathCount::zero) += PathCount::one();
    });
    Ok(tally)
}

#[derive(Clone, Copy, PartialEq)]
enum UvStep {
    U,
    V,
}

/// Depth-first walk over monotone staircases starting at `(u_pos, v_pos)`,
/// carrying corner counts incrementally. With `restrict` set, any prefix that
/// dips below the diagonal (`v < u`) is pruned.
fn walk_staircases(
    u_left: u32,
    v_left: u32,
    u_pos: i64,
    v_pos: i64,
    restrict: bool,
    visit: &mut impl FnMut(u32, u32),
) {
    walk_staircases_inner(u_left, v_left, u_pos, v_pos, None, 0, 0, restrict, visit);
}

#[allow(clippy::too_many_arguments)]
fn walk_staircases_inner(
    u_left: u32,
    v_left: u32,
    u_pos: i64,
    v_pos: i64,
    last: Option<UvStep>,
    r_l: u32,
    r_r: u32,
    restrict: bool,
    visit: &mut impl FnMut(u32, u32),
) {
    if u_left == 0 && v_left == 0 {
        visit(r_l, r_r);
        return;
    }
    if u_left > 0 {
        let u_next = u_pos + 1;
        if !restrict || u_next <= v_pos {
            let r_r_next = r_r + u32::from(last == Some(UvStep::V));
            walk_staircases_inner(
                u_left - 1,
                v_left,
                u_next,
                v_pos,
                Some(UvStep::U),
                r_l,
                r_r_next,
                restrict,
                visit,
            );
        }
    }
    if v_left > 0 {
        let r_l_next = r_l + u32::from(last == Some(UvStep::U));
        walk_staircases_inner(
            u_left,
            v_left - 1,
            u_pos,
            v_pos + 1,
            Some(UvStep::V),
            r_l_next,
            r_r,
            restrict,
            visit,
        );
    }
}
