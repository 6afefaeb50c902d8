//! Triangular fuzzy numbers and their arithmetic.
//!
//! A triangular fuzzy number `(l, m, r)_T` has center `m`, left spread
//! `l ≥ 0`, and right spread `r ≥ 0`. Its membership function rises linearly
//! from 0 at `m − l` to 1 at `m`, then falls linearly back to 0 at `m + r`:
//!
//! ```text
//! μ(x) = max{0, 1 − (m − x)/l}   for x ≤ m
//! μ(x) = max{0, 1 − (x − m)/r}   for x > m
//! ```
//!
//! Zero spreads are admitted: `(0, m, 0)_T` is an ordinary ("crisp") real
//! number with membership 1 at `m` and 0 everywhere else. The alpha-cut at
//! level `α` is the interval of points with membership at least `α`, which for
//! triangular numbers is `[m − (1−α)·l, m + (1−α)·r]`.
//!
//! Arithmetic follows the extension principle specialised to triangular
//! shapes: addition sums the components, and multiplication by a scalar
//! scales the components, swapping the spreads when the scalar is negative so
//! that they stay nonnegative. These are exactly the operations needed to
//! evaluate a fuzzy-coefficient regression line at a data point.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Absolute tolerance used by [`TriangularFuzzyNumber::is_symmetric`].
const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// A triangular fuzzy number `(l, m, r)_T` with nonnegative spreads.
///
/// Values are immutable and `Copy`; all operations are pure functions, so
/// they may be shared and evaluated concurrently without coordination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriangularFuzzyNumber {
    l: f64,
    m: f64,
    r: f64,
}

impl TriangularFuzzyNumber {
    /// Builds `(l, m, r)_T`, validating that all components are finite and
    /// both spreads are nonnegative.
    pub fn new(l: f64, m: f64, r: f64) -> Result<Self> {
        if !(l.is_finite() && m.is_finite() && r.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "fuzzy number components must be finite, got ({l}, {m}, {r})"
            )));
        }
        if l < 0.0 || r < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "fuzzy number spreads must be nonnegative, got ({l}, {m}, {r})"
            )));
        }
        Ok(Self { l, m, r })
    }

    /// Builds the symmetric number `(s, m, s)_T`.
    pub fn symmetric(m: f64, s: f64) -> Result<Self> {
        Self::new(s, m, s)
    }

    /// Embeds a crisp real number as `(0, m, 0)_T`.
    pub fn crisp(m: f64) -> Result<Self> {
        Self::new(0.0, m, 0.0)
    }

    /// Constructs without validation. Callers must guarantee the invariants;
    /// used on arithmetic hot paths where they hold by construction.
    pub(crate) fn new_unchecked(l: f64, m: f64, r: f64) -> Self {
        debug_assert!(l >= 0.0 || !l.is_finite(), "negative left spread {l}");
        debug_assert!(r >= 0.0 || !r.is_finite(), "negative right spread {r}");
        Self { l, m, r }
    }

    /// Left spread `l`.
    pub fn left_spread(&self) -> f64 {
        self.l
    }

    /// Center (modal value) `m`.
    pub fn center(&self) -> f64 {
        self.m
    }

    /// Right spread `r`.
    pub fn right_spread(&self) -> f64 {
        self.r
    }

    /// The components as a `(l, m, r)` tuple, convenient for destructuring.
    pub fn components(&self) -> (f64, f64, f64) {
        (self.l, self.m, self.r)
    }

    /// Whether both spreads are zero, i.e. the number is an embedded real.
    pub fn is_crisp(&self) -> bool {
        self.l == 0.0 && self.r == 0.0
    }

    /// Whether the spreads agree to within an absolute tolerance of 1e-12.
    pub fn is_symmetric(&self) -> bool {
        (self.l - self.r).abs() <= SYMMETRY_TOLERANCE
    }

    /// Membership grade of `x`, a total function into `[0, 1]`.
    ///
    /// A zero spread makes the corresponding side degenerate: membership is 1
    /// at the center and 0 elsewhere on that side.
    pub fn membership(&self, x: f64) -> f64 {
        if x == self.m {
            1.0
        } else if x < self.m {
            if self.l == 0.0 {
                0.0
            } else {
                f64::max(0.0, 1.0 - (self.m - x) / self.l)
            }
        } else if self.r == 0.0 {
            0.0
        } else {
            f64::max(0.0, 1.0 - (x - self.m) / self.r)
        }
    }

    /// The alpha-cut `[m − (1−α)·l, m + (1−α)·r]` for `α` in `[0, 1]`.
    ///
    /// At `α = 1` this is the singleton `[m, m]`; at `α = 0` it is the closure
    /// of the support, `[m − l, m + r]`. Anything outside `[0, 1]` is a
    /// domain error.
    pub fn alpha_cut(&self, alpha: f64) -> Result<Interval> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidArgument(format!(
                "alpha level must lie in [0, 1], got {alpha}"
            )));
        }
        let w = 1.0 - alpha;
        Ok(Interval {
            lo: self.m - w * self.l,
            hi: self.m + w * self.r,
        })
    }

    /// Componentwise sum `(l_a+l_b, m_a+m_b, r_a+r_b)_T`.
    pub fn add(&self, other: &Self) -> Self {
        Self::new_unchecked(self.l + other.l, self.m + other.m, self.r + other.r)
    }

    /// Scalar multiple `λ ⊗ (l, m, r)_T`.
    ///
    /// For `λ > 0` the components scale directly to `(λl, λm, λr)_T`; for
    /// `λ < 0` the spreads swap sides, giving `(−λr, λm, −λl)_T`, so they
    /// remain nonnegative; `λ = 0` collapses to the crisp zero `(0, 0, 0)_T`.
    pub fn scalar_mul(&self, lambda: f64) -> Self {
        if lambda > 0.0 {
            Self::new_unchecked(lambda * self.l, lambda * self.m, lambda * self.r)
        } else if lambda < 0.0 {
            Self::new_unchecked(-lambda * self.r, lambda * self.m, -lambda * self.l)
        } else {
            // Covers 0.0, -0.0, and NaN; the zero branch keeps scalar_mul
            // continuous in λ wherever the spreads are finite.
            Self::new_unchecked(0.0, 0.0, 0.0)
        }
    }

    /// Compact rendering: symmetric numbers as `(m, s)_T`, others as
    /// `(l, m, r)_T`.
    pub fn display_compact(&self) -> String {
        if self.is_symmetric() {
            format!("({}, {})_T", self.m, self.l)
        } else {
            format!("{self}")
        }
    }
}

impl fmt::Display for TriangularFuzzyNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})_T", self.l, self.m, self.r)
    }
}

/// A closed real interval `[lo, hi]`, as produced by alpha-cuts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    /// Builds `[lo, hi]`, validating `lo ≤ hi` and finiteness.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "interval endpoints must be finite, got [{lo}, {hi}]"
            )));
        }
        if lo > hi {
            return Err(Error::InvalidArgument(format!(
                "interval endpoints out of order: [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    /// Lower endpoint.
    pub fn lo(&self) -> f64 {
        self.lo
    }

    /// Upper endpoint.
    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Interval length `hi − lo`.
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Whether `other` lies entirely inside `self`.
    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
