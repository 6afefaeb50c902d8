//! Componentwise Stein-type shrinkage of fitted fuzzy regression models.
//!
//! Given a fitted coefficient component `v` and a shrinkage constant
//! `k > 0`, the plain Stein rule replaces `v` by `(1 − k/v²)·v = v − k/v`,
//! pulling the estimate toward zero; the positive rule additionally clamps
//! the result so it can never cross zero. Shrinkage is applied to each
//! coefficient component independently — every center through the center
//! rule and every spread (left and right separately) through the spread
//! rule, which is never the plain rule since spreads must stay nonnegative.
//!
//! The practical question is choosing `k`. [`optimize_k`] scans a uniform
//! grid over `(0, k_max]`, scores each shrunk model against the data with a
//! goodness-of-fit metric from [`crate::metrics`], and refines the best grid
//! point by golden-section search. [`optimal_boundary`] locates the largest
//! `k` below which shrinkage still beats the unshrunk baseline — the
//! boundary of the improvement region `(0, sup]`.
//!
//! The objective in `k` is piecewise-smooth with kinks wherever an
//! absolute-value term or a positive-part clamp changes branch, so the
//! grid-then-refine strategy is used rather than a single local search.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fuzzy_core::TriangularFuzzyNumber;
use crate::metrics::{GofMetric, MetricKernel};
use crate::regression::{CrispInputDataset, FLRModel, FuzzyInputDataset, FuzzyInputModel};

/// Rule applied to coefficient centers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CenterRule {
    /// Plain Stein rule `v − k/v`.
    Stein,
    /// Positive rule: the shrinkage factor `1 − k/v²` is clamped at zero,
    /// so the result keeps the sign of `v` (and is zero once `k ≥ v²`).
    PositiveStein,
    /// Leave centers untouched.
    None,
}

/// Rule applied to coefficient spreads; never the plain rule, because
/// spreads must remain nonnegative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpreadRule {
    /// Positive rule `max{0, v − k/v}`.
    PositiveStein,
    /// Leave spreads untouched.
    None,
}

/// Which rule each component family receives, and whether the intercept
/// participates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ShrinkagePolicy {
    pub center_rule: CenterRule,
    pub spread_rule: SpreadRule,
    /// Shrink the intercept coefficient too (the default).
    pub shrink_intercept: bool,
}

impl Default for ShrinkagePolicy {
    fn default() -> Self {
        Self {
            center_rule: CenterRule::Stein,
            spread_rule: SpreadRule::PositiveStein,
            shrink_intercept: true,
        }
    }
}

/// Result of an optimal-`k` search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShrinkageReport {
    /// The minimizing shrinkage constant.
    pub k_star: f64,
    /// Aggregate metric of the unshrunk model's predictions.
    pub metric_baseline: f64,
    /// Aggregate metric at `k_star`; the minimum over every point searched.
    pub metric_shrunk: f64,
    /// `sup{k ≤ k_max : shrunk metric < baseline}`, or 0 when no searched
    /// `k` improves on the baseline.
    pub boundary_sup: f64,
    /// Whether any searched `k` improved on the baseline.
    pub improvement_found: bool,
    /// The metric the search optimized.
    pub metric: GofMetric,
    /// The grid step used for the scan.
    pub grid_resolution: f64,
}

/// Result of [`optimal_boundary`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryResult {
    /// `sup{k ≤ k_max : shrunk metric < baseline}`; 0 when no improvement.
    pub sup: f64,
    /// False when no searched `k` beat the baseline (then `sup` is 0).
    pub improvement_found: bool,
}

/// Default grid step for the `k` scan.
pub const DEFAULT_RESOLUTION: f64 = 1e-4;

fn validate_k(k: f64) -> Result<()> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "shrinkage constant k must be a positive real, got {k}"
        )));
    }
    Ok(())
}

/// Plain Stein shrinkage `(1 − k/v²)·v`, with the convention that a zero
/// estimate stays zero (the formula is singular there, and a zero carries no
/// signal to shrink).
pub fn shrink_value(v: f64, k: f64) -> Result<f64> {
    validate_k(k)?;
    if !v.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "cannot shrink a non-finite value {v}"
        )));
    }
    Ok(stein(v, k))
}

/// Positive-rule shrinkage `max{0, (1 − k/v²)·v}` for nonnegative `v`.
pub fn shrink_positive(v: f64, k: f64) -> Result<f64> {
    validate_k(k)?;
    if !v.is_finite() || v < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "positive-rule shrinkage requires v ≥ 0, got {v}"
        )));
    }
    Ok(positive_stein(v, k))
}

/// Unvalidated plain rule; `v − k/v` is the stable arrangement of
/// `(1 − k/v²)·v` for small `v`.
#[inline]
fn stein(v: f64, k: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v - k / v
    }
}

/// Unvalidated positive rule, sign-preserving for either sign of `v`:
/// the factor `1 − k/v²` is clamped at zero.
#[inline]
fn positive_stein(v: f64, k: f64) -> f64 {
    if v == 0.0 || k >= v * v {
        0.0
    } else {
        v - k / v
    }
}

impl CenterRule {
    #[inline]
    fn apply(self, v: f64, k: f64) -> f64 {
        match self {
            CenterRule::Stein => stein(v, k),
            CenterRule::PositiveStein => positive_stein(v, k),
            CenterRule::None => v,
        }
    }
}

impl SpreadRule {
    #[inline]
    fn apply(self, v: f64, k: f64) -> f64 {
        match self {
            SpreadRule::PositiveStein => positive_stein(v, k),
            SpreadRule::None => v,
        }
    }
}

/// A model whose components can be shrunk and whose predictions can be
/// scored against its kind of dataset. Implemented by [`FLRModel`] (crisp
/// inputs) and [`FuzzyInputModel`] (fuzzy inputs); the methods carry the
/// invariants the k-search hot loop relies on, so they skip per-call
/// validation — [`shrink_model`], [`optimize_k`] and [`optimal_boundary`]
/// validate at their boundaries instead.
pub trait Shrinkable: Clone {
    type Data;

    /// Overwrites `self` with `base` shrunk by `k` under `policy`.
    /// Caller guarantees `k > 0` and that `self` has `base`'s shape.
    fn shrink_from(&mut self, base: &Self, k: f64, policy: &ShrinkagePolicy);

    /// Predicts every row of `data` into `out`. Caller guarantees matching
    /// dimensions (checked by [`Shrinkable::validate_against`]).
    fn predict_into(&self, data: &Self::Data, out: &mut [TriangularFuzzyNumber]);

    /// Errors unless the model's input dimension matches `data`.
    fn validate_against(&self, data: &Self::Data) -> Result<()>;

    /// The observed responses of `data`.
    fn observations(data: &Self::Data) -> &[TriangularFuzzyNumber];

    /// Largest absolute coefficient component; its square is the default
    /// `k_max` (beyond it every component has flipped sign or clamped to 0).
    fn max_abs_component(&self) -> f64;
}

impl Shrinkable for FLRModel {
    type Data = CrispInputDataset;

    fn shrink_from(&mut self, base: &Self, k: f64, policy: &ShrinkagePolicy) {
        debug_assert!(k > 0.0);
        for (idx, (out, coeff)) in self
            .coefficients_mut()
            .iter_mut()
            .zip(base.coefficients())
            .enumerate()
        {
            let (l, m, r) = coeff.components();
            *out = if policy.shrink_intercept || idx > 0 {
                TriangularFuzzyNumber::new_unchecked(
                    policy.spread_rule.apply(l, k),
                    policy.center_rule.apply(m, k),
                    policy.spread_rule.apply(r, k),
                )
            } else {
                *coeff
            };
        }
    }

    fn predict_into(&self, data: &Self::Data, out: &mut [TriangularFuzzyNumber]) {
        for (row, slot) in data.x().iter().zip(out) {
            *slot = self.predict_crisp_unchecked(row);
        }
    }

    fn validate_against(&self, data: &Self::Data) -> Result<()> {
        if self.inputs() != data.p() {
            return Err(Error::DimensionMismatch {
                expected: self.inputs(),
                got: data.p(),
            });
        }
        Ok(())
    }

    fn observations(data: &Self::Data) -> &[TriangularFuzzyNumber] {
        data.y()
    }

    fn max_abs_component(&self) -> f64 {
        self.coefficients()
            .iter()
            .flat_map(|c| {
                let (l, m, r) = c.components();
                [l.abs(), m.abs(), r.abs()]
            })
            .fold(0.0, f64::max)
    }
}

impl Shrinkable for FuzzyInputModel {
    type Data = FuzzyInputDataset;

    fn shrink_from(&mut self, base: &Self, k: f64, policy: &ShrinkagePolicy) {
        debug_assert!(k > 0.0);
        for (idx, (out, &a)) in self
            .center_coeffs_mut()
            .iter_mut()
            .zip(base.center_coeffs())
            .enumerate()
        {
            *out = if policy.shrink_intercept || idx > 0 {
                policy.center_rule.apply(a, k)
            } else {
                a
            };
        }
        for (idx, (out, &c)) in self
            .spread_coeffs_mut()
            .iter_mut()
            .zip(base.spread_coeffs())
            .enumerate()
        {
            *out = if policy.shrink_intercept || idx > 0 {
                policy.spread_rule.apply(c, k)
            } else {
                c
            };
        }
    }

    fn predict_into(&self, data: &Self::Data, out: &mut [TriangularFuzzyNumber]) {
        for (row, slot) in data.x().iter().zip(out) {
            *slot = self.predict_fuzzy_unchecked(row);
        }
    }

    fn validate_against(&self, data: &Self::Data) -> Result<()> {
        if self.inputs() != data.p() {
            return Err(Error::DimensionMismatch {
                expected: self.inputs(),
                got: data.p(),
            });
        }
        Ok(())
    }

    fn observations(data: &Self::Data) -> &[TriangularFuzzyNumber] {
        data.y()
    }

    fn max_abs_component(&self) -> f64 {
        self.center_coeffs()
            .iter()
            .chain(self.spread_coeffs())
            .fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

/// Applies `policy` at shrinkage constant `k` to every coefficient of
/// `model`, returning the shrunk model.
pub fn shrink_model<M: Shrinkable>(model: &M, k: f64, policy: &ShrinkagePolicy) -> Result<M> {
    validate_k(k)?;
    let mut out = model.clone();
    out.shrink_from(model, k, policy);
    Ok(out)
}

/// Reusable evaluator: shrink into scratch, predict into a buffer, score.
struct Evaluator<'a, M: Shrinkable> {
    base: &'a M,
    data: &'a M::Data,
    policy: &'a ShrinkagePolicy,
    kernel: MetricKernel,
    scratch: M,
    buffer: Vec<TriangularFuzzyNumber>,
}

impl<'a, M: Shrinkable> Evaluator<'a, M> {
    fn new(
        base: &'a M,
        data: &'a M::Data,
        policy: &'a ShrinkagePolicy,
        kernel: MetricKernel,
    ) -> Self {
        let n = M::observations(data).len();
        Self {
            base,
            data,
            policy,
            kernel,
            scratch: base.clone(),
            buffer: vec![TriangularFuzzyNumber::new_unchecked(0.0, 0.0, 0.0); n],
        }
    }

    /// Aggregate metric of the `k`-shrunk model; NaN is mapped to +∞ so
    /// comparisons always order.
    fn eval(&mut self, k: f64) -> f64 {
        self.scratch.shrink_from(self.base, k, self.policy);
        self.scratch.predict_into(self.data, &mut self.buffer);
        let j = self
            .kernel
            .aggregate(M::observations(self.data), &self.buffer);
        if j.is_nan() {
            f64::INFINITY
        } else {
            j
        }
    }

    /// Aggregate metric of the unshrunk model.
    fn baseline(&mut self) -> f64 {
        self.base.predict_into(self.data, &mut self.buffer);
        self.kernel
            .aggregate(M::observations(self.data), &self.buffer)
    }
}

/// Lexicographic "better" for (metric, k) pairs: smaller metric wins, ties
/// go to the smaller k.
#[inline]
fn better(j_a: f64, k_a: f64, j_b: f64, k_b: f64) -> bool {
    j_a < j_b || (j_a == j_b && k_a < k_b)
}

/// What the grid scan learned.
struct GridScan {
    best_j: f64,
    best_k: f64,
    /// Largest grid k whose metric beats the baseline, if any.
    last_improving: Option<f64>,
}

/// Grid points per parallel work unit.
const CHUNK: u64 = 1 << 16;

fn scan_grid<M>(
    base: &M,
    data: &M::Data,
    policy: &ShrinkagePolicy,
    kernel: MetricKernel,
    baseline: f64,
    points: u64,
    resolution: f64,
) -> Result<GridScan>
where
    M: Shrinkable + Sync,
    M::Data: Sync,
{
    let chunks = points.div_ceil(CHUNK);
    let folded = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut ev = Evaluator::new(base, data, policy, kernel);
            let lo = chunk * CHUNK;
            let hi = (lo + CHUNK).min(points);
            let mut best_j = f64::INFINITY;
            let mut best_k = f64::NAN;
            let mut last_improving = None;
            for i in lo..hi {
                let k = (i + 1) as f64 * resolution;
                let j = ev.eval(k);
                if better(j, k, best_j, best_k) {
                    best_j = j;
                    best_k = k;
                }
                if j < baseline {
                    last_improving = Some(k);
                }
            }
            GridScan {
                best_j,
                best_k,
                last_improving,
            }
        })
        .reduce(
            || GridScan {
                best_j: f64::INFINITY,
                best_k: f64::NAN,
                last_improving: None,
            },
            |a, b| GridScan {
                // Both reductions are associative and commutative, so the
                // outcome does not depend on rayon's split order.
                best_j: if better(a.best_j, a.best_k, b.best_j, b.best_k) {
                    a.best_j
                } else {
                    b.best_j
                },
                best_k: if better(a.best_j, a.best_k, b.best_j, b.best_k) {
                    a.best_k
                } else {
                    b.best_k
                },
                last_improving: match (a.last_improving, b.last_improving) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                },
            },
        );
    if !folded.best_j.is_finite() {
        return Err(Error::Internal(
            "the metric produced no finite value anywhere on the k grid".into(),
        ));
    }
    Ok(folded)
}

/// Golden-section refinement of a bracketed minimum; returns the best
/// (metric, k) among all probes.
fn golden_refine(
    ev: &mut Evaluator<'_, impl Shrinkable>,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut best_j = f64::INFINITY;
    let mut best_k = f64::NAN;
    let track = |j: f64, k: f64, best_j: &mut f64, best_k: &mut f64| {
        if better(j, k, *best_j, *best_k) {
            *best_j = j;
            *best_k = k;
        }
    };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = ev.eval(c);
    let mut fd = ev.eval(d);
    track(fc, c, &mut best_j, &mut best_k);
    track(fd, d, &mut best_j, &mut best_k);
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = ev.eval(c);
            track(fc, c, &mut best_j, &mut best_k);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = ev.eval(d);
            track(fd, d, &mut best_j, &mut best_k);
        }
    }
    (best_j, best_k)
}

/// Shared search driver for [`optimize_k`] and [`optimal_boundary`].
fn search<M>(
    model: &M,
    data: &M::Data,
    metric: &GofMetric,
    policy: &ShrinkagePolicy,
    k_max: Option<f64>,
    resolution: Option<f64>,
) -> Result<ShrinkageReport>
where
    M: Shrinkable + Sync,
    M::Data: Sync,
{
    let kernel = MetricKernel::new(metric)?;
    model.validate_against(data)?;
    if M::observations(data).is_empty() {
        return Err(Error::InvalidArgument(
            "cannot search k over an empty dataset".into(),
        ));
    }
    let k_max = match k_max {
        Some(v) => {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "k_max must be a positive real, got {v}"
                )));
            }
            v
        }
        None => {
            let m = model.max_abs_component();
            if m == 0.0 {
                return Err(Error::InvalidArgument(
                    "cannot derive a default k_max from an all-zero model".into(),
                ));
            }
            m * m
        }
    };
    let resolution = match resolution {
        Some(v) => {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "grid resolution must be a positive real, got {v}"
                )));
            }
            v
        }
        None => DEFAULT_RESOLUTION,
    };
    let points = (k_max / resolution + 1e-9).floor() as u64;
    if points == 0 {
        return Err(Error::InvalidArgument(format!(
            "the grid (0, {k_max}] at step {resolution} contains no points; \
             decrease --resolution or increase --k-max"
        )));
    }

    let mut ev = Evaluator::new(model, data, policy, kernel);
    let baseline = ev.baseline();
    let grid = scan_grid(model, data, policy, kernel, baseline, points, resolution)?;

    // Refine the minimum around the best grid point.
    let tol = resolution / 100.0;
    let lo = (grid.best_k - resolution).max(0.0);
    let hi = (grid.best_k + resolution).min(k_max);
    let (golden_j, golden_k) = golden_refine(&mut ev, lo, hi, tol);
    let (metric_shrunk, k_star) = if better(golden_j, golden_k, grid.best_j, grid.best_k) {
        (golden_j, golden_k)
    } else {
        (grid.best_j, grid.best_k)
    };

    // Refine the improvement boundary by bisecting the sign change past the
    // last improving point. The refine step can surface an improvement the
    // grid stepped over, so an improving refined k counts even when no grid
    // point improved.
    let last_improving = match grid.last_improving {
        Some(k_imp) if metric_shrunk < baseline => Some(k_imp.max(k_star)),
        None if metric_shrunk < baseline => Some(k_star),
        other => other,
    };
    let (boundary_sup, improvement_found) = match last_improving {
        None => (0.0, false),
        Some(k_imp) => {
            let hi = (k_imp + resolution).min(k_max);
            if ev.eval(hi) < baseline {
                // Still improving at the end of the searched range.
                (hi, true)
            } else {
                let mut lo = k_imp;
                let mut hi = hi;
                while hi - lo > tol {
                    let mid = 0.5 * (lo + hi);
                    if ev.eval(mid) < baseline {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                (lo, true)
            }
        }
    };

    Ok(ShrinkageReport {
        k_star,
        metric_baseline: baseline,
        metric_shrunk,
        boundary_sup,
        improvement_found,
        metric: *metric,
        grid_resolution: resolution,
    })
}

/// Finds the shrinkage constant minimizing the aggregate metric of the
/// shrunk model's predictions.
///
/// Scans the uniform grid `{resolution, 2·resolution, …} ∩ (0, k_max]`,
/// then refines around the best grid point by golden-section search to a
/// tolerance of `resolution / 100`; the returned minimum is never worse
/// than any grid value, and metric ties resolve toward smaller `k`. The
/// improvement boundary ([`ShrinkageReport::boundary_sup`]) is located from
/// the same scan.
///
/// `k_max` defaults to the squared largest absolute coefficient component
/// (past it, every component has flipped sign or clamped to zero);
/// `resolution` defaults to [`DEFAULT_RESOLUTION`]. Grid evaluations run in
/// parallel with a deterministic reduction, so results are reproducible
/// across thread counts.
pub fn optimize_k<M>(
    model: &M,
    data: &M::Data,
    metric: &GofMetric,
    policy: &ShrinkagePolicy,
    k_max: Option<f64>,
    resolution: Option<f64>,
) -> Result<ShrinkageReport>
where
    M: Shrinkable + Sync,
    M::Data: Sync,
{
    search(model, data, metric, policy, k_max, resolution)
}

/// Locates `sup{k ≤ k_max : shrunk metric < baseline}` — the right edge of
/// the improvement region `(0, sup]` — by grid scan plus bisection on the
/// sign change, to tolerance `resolution / 100`.
///
/// When no searched `k` improves on the baseline, returns `sup = 0` with
/// [`BoundaryResult::improvement_found`] `= false`.
pub fn optimal_boundary<M>(
    model: &M,
    data: &M::Data,
    metric: &GofMetric,
    policy: &ShrinkagePolicy,
    k_max: Option<f64>,
    resolution: Option<f64>,
) -> Result<BoundaryResult>
where
    M: Shrinkable + Sync,
    M::Data: Sync,
{
    let report = search(model, data, metric, policy, k_max, resolution)?;
    Ok(BoundaryResult {
        sup: report.boundary_sup,
        improvement_found: report.improvement_found,
    })
}
