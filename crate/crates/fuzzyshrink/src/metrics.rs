//! Goodness-of-fit distances between observed and fitted fuzzy responses.
//!
//! Three families are provided, each defined per observation pair and then
//! aggregated over a dataset:
//!
//! - **`D_{p,q}`** — an integral distance over alpha-cut endpoints:
//!   `(1−q)·∫₀¹ (ŷ⁻_α − y⁻_α)^p dα + q·∫₀¹ (ŷ⁺_α − y⁺_α)^p dα`, where
//!   `y⁻_α, y⁺_α` are the endpoints of the alpha-cut. For triangular numbers
//!   and even integer `p` this has a closed form; other parameters fall back
//!   to adaptive quadrature. At `p = 2` the per-pair value is a proper
//!   squared distance, and the special case `q = ½` is offered directly as
//!   [`d2_half_triangular`]. Aggregation is the mean of the per-pair
//!   (already squared) values.
//! - **`D_H`** — the componentwise absolute distance
//!   `|Δm| + |Δr| + |Δl|`, summed over observations.
//! - **`D_LR`** — a signed blend of center and spread errors,
//!   `(1/3)(|Δm| + |Δm + w_r·Δr| + |Δm − w_l·Δl|)`, summed over
//!   observations. The weights default to `w_l = w_r = ½`, the value of
//!   `∫₀¹(1−α) dα` that corresponds to triangular shape functions.
//!
//! Here `Δ` is always fitted minus observed, componentwise. The sum
//! aggregation for `D_H`/`D_LR` and the mean-of-squares aggregation for
//! `D_{p,q}` reproduce the published totals of the bundled reference studies
//! at their printed rounding.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fuzzy_core::TriangularFuzzyNumber;

/// A goodness-of-fit metric selection, including any shape parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GofMetric {
    /// The integral alpha-cut distance with exponent `p > 0` and side weight
    /// `q ∈ [0, 1]`.
    DPq { p: f64, q: f64 },
    /// Closed-form `D_{2,1/2}` for triangular numbers.
    D2Half,
    /// Componentwise absolute distance.
    DH,
    /// Weighted LR distance with `w_l, w_r > 0`.
    DLr { w_l: f64, w_r: f64 },
}

/// How per-observation values combine into the dataset aggregate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AggregationRule {
    /// Plain sum of per-pair values (`D_H`, `D_LR`).
    Sum,
    /// Mean of per-pair squared distances (`D_{p,q}`; the pair values are
    /// already the `p`-th-power integrals, so the aggregate is their mean).
    MeanOfSquares,
}

/// Per-observation distances together with their aggregate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GofValue {
    pub per_observation: Vec<f64>,
    pub aggregate: f64,
    pub aggregation_rule: AggregationRule,
}

impl GofMetric {
    /// `D_LR` with the default triangular weights `w_l = w_r = ½`.
    pub fn d_lr_default() -> Self {
        GofMetric::DLr { w_l: 0.5, w_r: 0.5 }
    }

    /// `D_{p,q}` with validated parameters.
    pub fn d_pq(p: f64, q: f64) -> Result<Self> {
        validate_pq(p, q)?;
        Ok(GofMetric::DPq { p, q })
    }

    /// `D_LR` with validated weights.
    pub fn d_lr(w_l: f64, w_r: f64) -> Result<Self> {
        validate_lr_weights(w_l, w_r)?;
        Ok(GofMetric::DLr { w_l, w_r })
    }

    /// Checks the parameter ranges (`p > 0`, `q ∈ [0,1]`, weights `> 0`).
    pub fn validate(&self) -> Result<()> {
        match *self {
            GofMetric::DPq { p, q } => validate_pq(p, q),
            GofMetric::DLr { w_l, w_r } => validate_lr_weights(w_l, w_r),
            GofMetric::D2Half | GofMetric::DH => Ok(()),
        }
    }

    /// The aggregation rule this metric uses.
    pub fn aggregation_rule(&self) -> AggregationRule {
        match self {
            GofMetric::DPq { .. } | GofMetric::D2Half => AggregationRule::MeanOfSquares,
            GofMetric::DH | GofMetric::DLr { .. } => AggregationRule::Sum,
        }
    }

    /// The distance for a single observation pair.
    pub fn pair(&self, y: &TriangularFuzzyNumber, yhat: &TriangularFuzzyNumber) -> Result<f64> {
        match *self {
            GofMetric::DPq { p, q } => d_pq_pair(y, yhat, p, q),
            GofMetric::D2Half => Ok(d2_half_triangular(y, yhat)),
            GofMetric::DH => Ok(d_h_pair(y, yhat)),
            GofMetric::DLr { w_l, w_r } => d_lr_pair(y, yhat, w_l, w_r),
        }
    }
}

impl fmt::Display for GofMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GofMetric::DPq { p, q } => write!(f, "dpq:{p},{q}"),
            GofMetric::D2Half => write!(f, "d2q"),
            GofMetric::DH => write!(f, "dh"),
            GofMetric::DLr { w_l, w_r } => {
                if w_l == 0.5 && w_r == 0.5 {
                    write!(f, "dlr")
                } else {
                    write!(f, "dlr:{w_l},{w_r}")
                }
            }
        }
    }
}

impl Serialize for GofMetric {
    /// Serializes as the canonical selector string (the [`fmt::Display`]
    /// form), so reports stay greppable and stable across field renames.
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for GofMetric {
    type Err = Error;

    /// Parses the CLI metric strings: `dlr`, `dh`, `d2q`, plus the
    /// parameterised forms `dlr:<w_l>,<w_r>` and `dpq:<p>,<q>`.
    fn from_str(s: &str) -> Result<Self> {
        let (head, params) = match s.split_once(':') {
            Some((h, p)) => (h, Some(p)),
            None => (s, None),
        };
        let parse_two = |params: &str, what: &str| -> Result<(f64, f64)> {
            let (a, b) = params.split_once(',').ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "metric '{head}' expects two comma-separated {what}, got '{params}'"
                ))
            })?;
            let parse = |t: &str| -> Result<f64> {
                t.trim().parse::<f64>().map_err(|_| {
                    Error::InvalidArgument(format!(
                        "cannot parse metric parameter '{t}' as a number"
                    ))
                })
            };
            Ok((parse(a)?, parse(b)?))
        };
        match (head, params) {
            ("dlr", None) => Ok(GofMetric::d_lr_default()),
            ("dlr", Some(p)) => {
                let (w_l, w_r) = parse_two(p, "weights")?;
                GofMetric::d_lr(w_l, w_r)
            }
            ("dh", None) => Ok(GofMetric::DH),
            ("d2q", None) => Ok(GofMetric::D2Half),
            ("dpq", Some(params)) => {
                let (p, q) = parse_two(params, "parameters")?;
                GofMetric::d_pq(p, q)
            }
            ("dpq", None) => Err(Error::InvalidArgument(
                "metric 'dpq' requires parameters, e.g. 'dpq:2,0.5'".into(),
            )),
            ("dh" | "d2q", Some(_)) => Err(Error::InvalidArgument(format!(
                "metric '{head}' takes no parameters"
            ))),
            _ => Err(Error::InvalidArgument(format!(
                "unknown metric '{s}' (expected dlr, dlr:wl,wr, dh, d2q, or dpq:p,q)"
            ))),
        }
    }
}

fn validate_pq(p: f64, q: f64) -> Result<()> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "metric exponent p must be a positive real, got {p}"
        )));
    }
    if !(q.is_finite() && (0.0..=1.0).contains(&q)) {
        return Err(Error::InvalidArgument(format!(
            "metric weight q must lie in [0, 1], got {q}"
        )));
    }
    Ok(())
}

fn validate_lr_weights(w_l: f64, w_r: f64) -> Result<()> {
    if !(w_l.is_finite() && w_l > 0.0 && w_r.is_finite() && w_r > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "LR weights must be positive reals, got w_l={w_l}, w_r={w_r}"
        )));
    }
    Ok(())
}

/// Componentwise signed differences (fitted minus observed), returned as
/// `(Δl, Δm, Δr)`.
fn deltas(y: &TriangularFuzzyNumber, yhat: &TriangularFuzzyNumber) -> (f64, f64, f64) {
    (
        yhat.left_spread() - y.left_spread(),
        yhat.center() - y.center(),
        yhat.right_spread() - y.right_spread(),
    )
}

/// Integral alpha-cut distance for one pair.
///
/// The differences of alpha-cut endpoints are linear in `α`, running from
/// `b = Δm` at `α = 1` to `a = Δm − Δl` (left) and `c = Δm + Δr` (right) at
/// `α = 0`, so each side integrates a signed linear function raised to the
/// power `p`. Even integer exponents use the exact polynomial integral;
/// everything else uses adaptive quadrature to an absolute tolerance of
/// 1e-9 per side. The integrand keeps its sign as written, so odd `p` can
/// yield negative values and is not a metric; fractional `p` over negative
/// differences is undefined (NaN).
pub fn d_pq_pair(
    y: &TriangularFuzzyNumber,
    yhat: &TriangularFuzzyNumber,
    p: f64,
    q: f64,
) -> Result<f64> {
    validate_pq(p, q)?;
    Ok(d_pq_core(y, yhat, p, q))
}

/// [`d_pq_pair`] without parameter validation, for pre-validated hot paths.
fn d_pq_core(y: &TriangularFuzzyNumber, yhat: &TriangularFuzzyNumber, p: f64, q: f64) -> f64 {
    let (dl, dm, dr) = deltas(y, yhat);
    let a = dm - dl;
    let b = dm;
    let c = dm + dr;
    let left = integral_linear_power(b, a, p);
    let right = integral_linear_power(b, c, p);
    (1.0 - q) * left + q * right
}

/// `∫₀¹ (start + t·(end − start))^p dt`, the per-side building block.
fn integral_linear_power(start: f64, end: f64, p: f64) -> f64 {
    if p == 2.0 {
        return (end * end + end * start + start * start) / 3.0;
    }
    if p.fract() == 0.0 && p <= 60.0 && (p as u64) % 2 == 0 {
        // Even integer exponent: expand (start + tΔ)^p binomially and
        // integrate term by term; stable even when start ≈ end.
        let n = p as i32;
        let delta = end - start;
        let mut coeff = 1.0f64; // C(n, k)
        let mut sum = 0.0f64;
        for k in 0..=n {
            sum += coeff * start.powi(n - k) * delta.powi(k) / (k as f64 + 1.0);
            coeff *= (n - k) as f64 / (k as f64 + 1.0);
        }
        return sum;
    }
    adaptive_simpson(|t| (start + t * (end - start)).powf(p), 0.0, 1.0, 1e-10, 24)
}

/// Adaptive Simpson quadrature on `[a, b]` with absolute tolerance `tol`.
fn adaptive_simpson(f: impl Fn(f64) -> f64 + Copy, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    fn recurse(
        f: impl Fn(f64) -> f64 + Copy,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol || !delta.is_finite() {
            left + right + delta / 15.0
        } else {
            recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(fa, fm, fb, b - a);
    recurse(f, a, b, fa, fm, fb, whole, tol, depth)
}

/// Closed-form `D_{2,1/2}` squared distance for a triangular pair.
///
/// With `a = Δm − Δl`, `b = Δm`, `c = Δm + Δr` this is
/// `(a² + ab + 2b² + c² + cb) / 6`, identical to
/// [`d_pq_pair`]`(y, ŷ, 2, ½)`.
pub fn d2_half_triangular(y: &TriangularFuzzyNumber, yhat: &TriangularFuzzyNumber) -> f64 {
    let (dl, dm, dr) = deltas(y, yhat);
    let a = dm - dl;
    let b = dm;
    let c = dm + dr;
    (a * a + a * b + 2.0 * b * b + c * c + c * b) / 6.0
}

/// Componentwise absolute distance `|Δm| + |Δr| + |Δl|`.
pub fn d_h_pair(y: &TriangularFuzzyNumber, yhat: &TriangularFuzzyNumber) -> f64 {
    let (dl, dm, dr) = deltas(y, yhat);
    dm.abs() + dr.abs() + dl.abs()
}

/// Weighted LR distance `(1/3)(|Δm| + |Δm + w_r·Δr| + |Δm − w_l·Δl|)`.
pub fn d_lr_pair(
    y: &TriangularFuzzyNumber,
    yhat: &TriangularFuzzyNumber,
    w_l: f64,
    w_r: f64,
) -> Result<f64> {
    validate_lr_weights(w_l, w_r)?;
    let (dl, dm, dr) = deltas(y, yhat);
    Ok((dm.abs() + (dm + w_r * dr).abs() + (dm - w_l * dl).abs()) / 3.0)
}

/// Evaluates `metric` over paired observation/fit lists, keeping the
/// per-observation values.
pub fn aggregate(
    metric: &GofMetric,
    ys: &[TriangularFuzzyNumber],
    yhats: &[TriangularFuzzyNumber],
) -> Result<GofValue> {
    check_paired(ys, yhats)?;
    metric.validate()?;
    let mut per_observation = Vec::with_capacity(ys.len());
    for (y, yhat) in ys.iter().zip(yhats) {
        per_observation.push(metric.pair(y, yhat)?);
    }
    let rule = metric.aggregation_rule();
    let total: f64 = per_observation.iter().sum();
    let aggregate = match rule {
        AggregationRule::Sum => total,
        AggregationRule::MeanOfSquares => total / per_observation.len() as f64,
    };
    Ok(GofValue {
        per_observation,
        aggregate,
        aggregation_rule: rule,
    })
}

/// The aggregate alone, without storing per-observation values.
///
/// Same contract as [`aggregate`]; used on hot paths (the shrinkage-constant
/// sweep) where allocation per evaluation would dominate.
pub fn aggregate_value(
    metric: &GofMetric,
    ys: &[TriangularFuzzyNumber],
    yhats: &[TriangularFuzzyNumber],
) -> Result<f64> {
    check_paired(ys, yhats)?;
    metric.validate()?;
    let mut total = 0.0;
    for (y, yhat) in ys.iter().zip(yhats) {
        total += metric.pair(y, yhat)?;
    }
    Ok(match metric.aggregation_rule() {
        AggregationRule::Sum => total,
        AggregationRule::MeanOfSquares => total / ys.len() as f64,
    })
}

/// A pre-validated metric evaluator for hot loops.
///
/// Construction checks the metric parameters once; [`MetricKernel::pair`] and
/// [`MetricKernel::aggregate`] are then infallible and allocation-free,
/// matching [`aggregate_value`] exactly.
#[derive(Debug, Clone, Copy)]
pub(crate) struct MetricKernel {
    metric: GofMetric,
}

impl MetricKernel {
    pub fn new(metric: &GofMetric) -> Result<Self> {
        metric.validate()?;
        Ok(Self { metric: *metric })
    }

    #[inline]
    pub fn pair(&self, y: &TriangularFuzzyNumber, yhat: &TriangularFuzzyNumber) -> f64 {
        match self.metric {
            GofMetric::DPq { p, q } => d_pq_core(y, yhat, p, q),
            GofMetric::D2Half => d2_half_triangular(y, yhat),
            GofMetric::DH => d_h_pair(y, yhat),
            GofMetric::DLr { w_l, w_r } => {
                let (dl, dm, dr) = deltas(y, yhat);
                (dm.abs() + (dm + w_r * dr).abs() + (dm - w_l * dl).abs()) / 3.0
            }
        }
    }

    /// Aggregate over equal-length slices (caller guarantees the pairing).
    pub fn aggregate(&self, ys: &[TriangularFuzzyNumber], yhats: &[TriangularFuzzyNumber]) -> f64 {
        debug_assert_eq!(ys.len(), yhats.len());
        debug_assert!(!ys.is_empty());
        let total: f64 = ys
            .iter()
            .zip(yhats)
            .map(|(y, yhat)| self.pair(y, yhat))
            .sum();
        match self.metric.aggregation_rule() {
            AggregationRule::Sum => total,
            AggregationRule::MeanOfSquares => total / ys.len() as f64,
        }
    }
}

fn check_paired(ys: &[TriangularFuzzyNumber], yhats: &[TriangularFuzzyNumber]) -> Result<()> {
    if ys.len() != yhats.len() {
        return Err(Error::DimensionMismatch {
            expected: ys.len(),
            got: yhats.len(),
        });
    }
    if ys.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot aggregate a metric over zero observations".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn tfn(l: f64, m: f64, r: f64) -> TriangularFuzzyNumber {
        TriangularFuzzyNumber::new(l, m, r).unwrap()
    }

    fn sym(m: f64, s: f64) -> TriangularFuzzyNumber {
        TriangularFuzzyNumber::symmetric(m, s).unwrap()
    }

    #[test]
    fn d_pq_identical_pairs_vanish() {
        let y = tfn(1.0, 2.0, 3.0);
        assert_eq!(d_pq_pair(&y, &y, 2.0, 0.5).unwrap(), 0.0);
        assert_eq!(d_pq_pair(&y, &y, 4.0, 0.25).unwrap(), 0.0);
    }

    #[test]
    fn d_pq_crisp_center_shift_gives_square() {
        let y = tfn(0.0, 0.0, 0.0);
        let yhat = tfn(0.0, 2.5, 0.0);
        assert_relative_eq!(d_pq_pair(&y, &yhat, 2.0, 0.5).unwrap(), 6.25);
    }

    #[test]
    fn d_pq_unit_spread_case() {
        let y = tfn(1.0, 0.0, 1.0);
        let yhat = tfn(0.0, 0.0, 0.0);
        assert_relative_eq!(
            d_pq_pair(&y, &yhat, 2.0, 0.5).unwrap(),
            1.0 / 3.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn d_pq_odd_p_is_signed() {
        let y = tfn(0.0, 0.0, 0.0);
        let up = tfn(0.0, 1.0, 0.0);
        let down = tfn(0.0, -1.0, 0.0);
        assert_abs_diff_eq!(d_pq_pair(&y, &up, 1.0, 0.5).unwrap(), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(
            d_pq_pair(&y, &down, 1.0, 0.5).unwrap(),
            -1.0,
            epsilon = 1e-9
        );
    }

    #[test]
    fn d_pq_rejects_bad_parameters() {
        let y = tfn(0.0, 0.0, 0.0);
        assert!(d_pq_pair(&y, &y, 0.0, 0.5).is_err());
        assert!(d_pq_pair(&y, &y, -1.0, 0.5).is_err());
        assert!(d_pq_pair(&y, &y, 2.0, -0.1).is_err());
        assert!(d_pq_pair(&y, &y, 2.0, 1.1).is_err());
        assert!(d_pq_pair(&y, &y, f64::NAN, 0.5).is_err());
    }

    #[test]
    fn even_power_integral_matches_quadrature() {
        // Same integrand evaluated through the binomial expansion (p = 4
        // even-integer branch) and through adaptive Simpson directly.
        for &(s, e) in &[(0.3, -1.7), (-2.0, -2.0), (0.0, 1.0), (5.0, 4.999)] {
            let exact = integral_linear_power(s, e, 4.0);
            let quad = adaptive_simpson(|t| (s + t * (e - s)).powf(4.0), 0.0, 1.0, 1e-10, 24);
            assert_abs_diff_eq!(exact, quad, epsilon = 1e-9);
        }
    }

    #[test]
    fn p2_closed_form_matches_quadrature() {
        for &(s, e) in &[(0.0, 0.0), (1.0, -1.0), (-0.4, 2.2), (3.0, 3.0)] {
            let exact = integral_linear_power(s, e, 2.0);
            let quad = adaptive_simpson(|t| (s + t * (e - s)).powf(2.0), 0.0, 1.0, 1e-10, 24);
            assert_abs_diff_eq!(exact, quad, epsilon = 1e-9);
        }
    }

    #[test]
    fn d2_half_examples() {
        let zero = tfn(0.0, 0.0, 0.0);
        assert_eq!(d2_half_triangular(&zero, &zero), 0.0);
        assert_relative_eq!(d2_half_triangular(&zero, &tfn(0.0, 1.0, 0.0)), 1.0);
        assert_relative_eq!(
            d2_half_triangular(&tfn(1.0, 0.0, 1.0), &zero),
            1.0 / 3.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn d2_half_equals_d_pq_special_case() {
        let pairs = [
            (tfn(1.0, 2.0, 3.0), tfn(0.5, -1.0, 0.0)),
            (tfn(0.0, 4.0, 0.1), tfn(2.0, 4.0, 2.0)),
            (sym(12.30, 1.845), sym(6.89, 1.243)),
        ];
        for (y, yhat) in pairs {
            assert_abs_diff_eq!(
                d2_half_triangular(&y, &yhat),
                d_pq_pair(&y, &yhat, 2.0, 0.5).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn d_h_examples() {
        let y = tfn(1.0, 2.0, 1.0);
        let yhat = tfn(2.0, 4.0, 0.5);
        assert_relative_eq!(d_h_pair(&y, &yhat), 3.5);
        assert_eq!(d_h_pair(&y, &y), 0.0);
        // Reference-study row: symmetric pair with |Δm| = 5.41, |Δs| = 0.602
        // on each side.
        assert_abs_diff_eq!(
            d_h_pair(&sym(12.30, 1.845), &sym(6.89, 1.243)),
            6.614,
            epsilon = 1e-9
        );
    }

    #[test]
    fn d_lr_examples() {
        let y = sym(5.83, 3.56);
        let yhat = sym(6.97, 1.78);
        assert_abs_diff_eq!(
            d_lr_pair(&y, &yhat, 0.5, 0.5).unwrap(),
            1.14,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            d_lr_pair(&sym(9.50, 2.60), &sym(10.09, 2.32), 0.5, 0.5).unwrap(),
            0.59,
            epsilon = 1e-9
        );
        assert_eq!(d_lr_pair(&y, &y, 0.5, 0.5).unwrap(), 0.0);
        assert!(d_lr_pair(&y, &yhat, 0.0, 0.5).is_err());
        assert!(d_lr_pair(&y, &yhat, 0.5, -1.0).is_err());
    }

    #[test]
    fn d_lr_translation_invariant_in_centers() {
        let y = tfn(1.0, 3.0, 2.0);
        let yhat = tfn(0.5, 4.5, 2.5);
        let shift = 17.25;
        let y2 = tfn(1.0, 3.0 + shift, 2.0);
        let yhat2 = tfn(0.5, 4.5 + shift, 2.5);
        assert_abs_diff_eq!(
            d_lr_pair(&y, &yhat, 0.5, 0.5).unwrap(),
            d_lr_pair(&y2, &yhat2, 0.5, 0.5).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn aggregate_sum_and_mean_rules() {
        let ys = vec![tfn(0.0, 0.0, 0.0), tfn(0.0, 1.0, 0.0)];
        let yhats = vec![tfn(0.0, 1.0, 0.0), tfn(0.0, 1.0, 0.0)];

        let dh = aggregate(&GofMetric::DH, &ys, &yhats).unwrap();
        assert_eq!(dh.aggregation_rule, AggregationRule::Sum);
        assert_relative_eq!(dh.aggregate, 1.0);
        assert_eq!(dh.per_observation.len(), 2);

        let d2 = aggregate(&GofMetric::D2Half, &ys, &yhats).unwrap();
        assert_eq!(d2.aggregation_rule, AggregationRule::MeanOfSquares);
        assert_relative_eq!(d2.aggregate, 0.5);

        assert_relative_eq!(
            aggregate_value(&GofMetric::D2Half, &ys, &yhats).unwrap(),
            d2.aggregate
        );
    }

    #[test]
    fn aggregate_rejects_mismatch_and_empty() {
        let ys = vec![tfn(0.0, 0.0, 0.0)];
        assert!(aggregate(&GofMetric::DH, &ys, &[]).is_err());
        assert!(aggregate(&GofMetric::DH, &[], &[]).is_err());
    }

    #[test]
    fn metric_strings_parse_and_render() {
        assert_eq!(
            "dlr".parse::<GofMetric>().unwrap(),
            GofMetric::DLr { w_l: 0.5, w_r: 0.5 }
        );
        assert_eq!(
            "dlr:0.25,0.75".parse::<GofMetric>().unwrap(),
            GofMetric::DLr {
                w_l: 0.25,
                w_r: 0.75
            }
        );
        assert_eq!("dh".parse::<GofMetric>().unwrap(), GofMetric::DH);
        assert_eq!("d2q".parse::<GofMetric>().unwrap(), GofMetric::D2Half);
        assert_eq!(
            "dpq:2,0.5".parse::<GofMetric>().unwrap(),
            GofMetric::DPq { p: 2.0, q: 0.5 }
        );

        assert!("dxyz".parse::<GofMetric>().is_err());
        assert!("dpq".parse::<GofMetric>().is_err());
        assert!("dpq:2".parse::<GofMetric>().is_err());
        assert!("dpq:0,0.5".parse::<GofMetric>().is_err());
        assert!("dlr:0,1".parse::<GofMetric>().is_err());
        assert!("dh:1".parse::<GofMetric>().is_err());

        assert_eq!(GofMetric::d_lr_default().to_string(), "dlr");
        assert_eq!(
            GofMetric::DLr {
                w_l: 0.25,
                w_r: 0.75
            }
            .to_string(),
            "dlr:0.25,0.75"
        );
        assert_eq!(GofMetric::DPq { p: 2.0, q: 0.5 }.to_string(), "dpq:2,0.5");
        assert_eq!(GofMetric::DH.to_string(), "dh");
        assert_eq!(GofMetric::D2Half.to_string(), "d2q");
    }
}
