//! Fuzzy linear regression models and baseline estimators.
//!
//! Two model families are supported:
//!
//! - [`FLRModel`] — fuzzy coefficients over crisp (real) inputs. A prediction
//!   evaluates `Ã₀ ⊕ (x₁ ⊗ Ã₁) ⊕ … ⊕ (x_p ⊗ Ã_p)` under the triangular
//!   arithmetic of [`crate::fuzzy_core`].
//! - [`FuzzyInputModel`] — crisp coefficients over fuzzy inputs. Center
//!   coefficients act on input centers and nonnegative spread coefficients
//!   act on input spreads, each side independently.
//!
//! Four estimators produce these models from data: ordinary least squares
//! ([`fit_least_squares`]), least absolute deviations via linear programming
//! ([`fit_least_absolutes`]), a bootstrap-averaged least squares
//! ([`fit_bootstrap`]), and a least-squares fit for fuzzy inputs
//! ([`fit_fuzzy_input`]). In every estimator the spread regressions are
//! solved under nonnegativity constraints, so fitted models always produce
//! valid (nonnegative) predicted spreads; clamping happens inside the solver,
//! not as a post-hoc fix.
//!
//! Spread regressions use `|x|` as the regressor for crisp inputs: a negative
//! input swaps a coefficient's spreads in the arithmetic, so its magnitude is
//! what scales a predicted spread.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fuzzy_core::TriangularFuzzyNumber;

/// Fuzzy-coefficient linear model over crisp inputs.
///
/// `coefficients[0]` is the intercept; `coefficients[j]` for `j ≥ 1` pairs
/// with the `j`-th input variable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FLRModel {
    coefficients: Vec<TriangularFuzzyNumber>,
}

impl FLRModel {
    /// Builds a model from intercept-first coefficients (at least one).
    pub fn new(coefficients: Vec<TriangularFuzzyNumber>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidArgument(
                "a model needs at least an intercept coefficient".into(),
            ));
        }
        Ok(Self { coefficients })
    }

    /// Intercept-first coefficient list.
    pub fn coefficients(&self) -> &[TriangularFuzzyNumber] {
        &self.coefficients
    }

    /// Number of input variables (coefficients minus the intercept).
    pub fn inputs(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Evaluates the model at one crisp input vector.
    pub fn predict_crisp(&self, x: &[f64]) -> Result<TriangularFuzzyNumber> {
        if x.len() != self.inputs() {
            return Err(Error::DimensionMismatch {
                expected: self.inputs(),
                got: x.len(),
            });
        }
        Ok(self.predict_crisp_unchecked(x))
    }

    /// Predictions for every row of a dataset.
    pub fn predict_dataset(&self, data: &CrispInputDataset) -> Result<Vec<TriangularFuzzyNumber>> {
        data.x.iter().map(|row| self.predict_crisp(row)).collect()
    }

    /// [`Self::predict_crisp`] without the dimension check, for hot loops
    /// that validated once up front. Must stay arithmetic-identical to the
    /// checked version.
    pub(crate) fn predict_crisp_unchecked(&self, x: &[f64]) -> TriangularFuzzyNumber {
        debug_assert_eq!(x.len(), self.inputs());
        let mut acc = self.coefficients[0];
        for (xj, coeff) in x.iter().zip(&self.coefficients[1..]) {
            acc = acc.add(&coeff.scalar_mul(*xj));
        }
        acc
    }

    pub(crate) fn coefficients_mut(&mut self) -> &mut [TriangularFuzzyNumber] {
        &mut self.coefficients
    }
}

/// Crisp-coefficient linear model over fuzzy inputs.
///
/// Predicted center: `a₀ + Σ a_j·m_j`. Predicted left (right) spread:
/// `c₀ + Σ c_j·l_j` (`c₀ + Σ c_j·r_j`). The spread coefficients `c` are
/// nonnegative, so predictions are valid fuzzy numbers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzyInputModel {
    center_coeffs: Vec<f64>,
    spread_coeffs: Vec<f64>,
}

impl FuzzyInputModel {
    /// Builds a model from intercept-first center and spread coefficients.
    pub fn new(center_coeffs: Vec<f64>, spread_coeffs: Vec<f64>) -> Result<Self> {
        if center_coeffs.is_empty() || center_coeffs.len() != spread_coeffs.len() {
            return Err(Error::InvalidArgument(format!(
                "center and spread coefficient lists must be nonempty and equal-length, got {} and {}",
                center_coeffs.len(),
                spread_coeffs.len()
            )));
        }
        if center_coeffs
            .iter()
            .chain(&spread_coeffs)
            .any(|c| !c.is_finite())
        {
            return Err(Error::InvalidArgument("coefficients must be finite".into()));
        }
        if spread_coeffs.iter().any(|&c| c < 0.0) {
            return Err(Error::InvalidArgument(
                "spread coefficients must be nonnegative".into(),
            ));
        }
        Ok(Self {
            center_coeffs,
            spread_coeffs,
        })
    }

    /// Intercept-first center coefficients `a`.
    pub fn center_coeffs(&self) -> &[f64] {
        &self.center_coeffs
    }

    /// Intercept-first spread coefficients `c`, all nonnegative.
    pub fn spread_coeffs(&self) -> &[f64] {
        &self.spread_coeffs
    }

    /// Number of input variables.
    pub fn inputs(&self) -> usize {
        self.center_coeffs.len() - 1
    }

    /// Evaluates the model at one fuzzy input vector.
    pub fn predict_fuzzy(&self, x: &[TriangularFuzzyNumber]) -> Result<TriangularFuzzyNumber> {
        if x.len() != self.inputs() {
            return Err(Error::DimensionMismatch {
                expected: self.inputs(),
                got: x.len(),
            });
        }
        Ok(self.predict_fuzzy_unchecked(x))
    }

    /// Predictions for every row of a dataset.
    pub fn predict_dataset(&self, data: &FuzzyInputDataset) -> Result<Vec<TriangularFuzzyNumber>> {
        data.x.iter().map(|row| self.predict_fuzzy(row)).collect()
    }

    /// [`Self::predict_fuzzy`] without the dimension check; see
    /// [`FLRModel::predict_crisp_unchecked`].
    pub(crate) fn predict_fuzzy_unchecked(
        &self,
        x: &[TriangularFuzzyNumber],
    ) -> TriangularFuzzyNumber {
        debug_assert_eq!(x.len(), self.inputs());
        let mut m = self.center_coeffs[0];
        let mut l = self.spread_coeffs[0];
        let mut r = self.spread_coeffs[0];
        for (xj, j) in x.iter().zip(1..) {
            m += self.center_coeffs[j] * xj.center();
            l += self.spread_coeffs[j] * xj.left_spread();
            r += self.spread_coeffs[j] * xj.right_spread();
        }
        TriangularFuzzyNumber::new_unchecked(l, m, r)
    }

    pub(crate) fn center_coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.center_coeffs
    }

    pub(crate) fn spread_coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.spread_coeffs
    }
}

/// Observations with crisp inputs and fuzzy responses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrispInputDataset {
    name: String,
    x: Vec<Vec<f64>>,
    y: Vec<TriangularFuzzyNumber>,
    symmetric: bool,
}

impl CrispInputDataset {
    /// Builds a dataset, validating shape: `x` rectangular with finite cells,
    /// one response per row, at least one row.
    ///
    /// `symmetric` records that every response (and fitted value of interest)
    /// is symmetric; it only affects display.
    pub fn new(
        name: impl Into<String>,
        x: Vec<Vec<f64>>,
        y: Vec<TriangularFuzzyNumber>,
        symmetric: bool,
    ) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidArgument("dataset has no rows".into()));
        }
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                got: y.len(),
            });
        }
        let p = x[0].len();
        for (i, row) in x.iter().enumerate() {
            if row.len() != p {
                return Err(Error::InvalidArgument(format!(
                    "ragged input matrix: row {} has {} cells, expected {p}",
                    i + 1,
                    row.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "non-finite input cell in row {}",
                    i + 1
                )));
            }
        }
        Ok(Self {
            name: name.into(),
            x,
            y,
            symmetric,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Input rows (`n × p`).
    pub fn x(&self) -> &[Vec<f64>] {
        &self.x
    }

    /// Fuzzy responses, one per row.
    pub fn y(&self) -> &[TriangularFuzzyNumber] {
        &self.y
    }

    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    /// Number of observations.
    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Number of input variables.
    pub fn p(&self) -> usize {
        self.x[0].len()
    }

    /// The dataset restricted to the given row indices (with repetition),
    /// used by the bootstrap.
    fn resample(&self, indices: &[usize]) -> Self {
        Self {
            name: self.name.clone(),
            x: indices.iter().map(|&i| self.x[i].clone()).collect(),
            y: indices.iter().map(|&i| self.y[i]).collect(),
            symmetric: self.symmetric,
        }
    }
}

/// Observations with fuzzy inputs and fuzzy responses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzyInputDataset {
    name: String,
    x: Vec<Vec<TriangularFuzzyNumber>>,
    y: Vec<TriangularFuzzyNumber>,
}

impl FuzzyInputDataset {
    /// Builds a dataset, validating the same shape constraints as
    /// [`CrispInputDataset::new`].
    pub fn new(
        name: impl Into<String>,
        x: Vec<Vec<TriangularFuzzyNumber>>,
        y: Vec<TriangularFuzzyNumber>,
    ) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidArgument("dataset has no rows".into()));
        }
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                got: y.len(),
            });
        }
        let p = x[0].len();
        for (i, row) in x.iter().enumerate() {
            if row.len() != p {
                return Err(Error::InvalidArgument(format!(
                    "ragged input matrix: row {} has {} cells, expected {p}",
                    i + 1,
                    row.len()
                )));
            }
        }
        Ok(Self {
            name: name.into(),
            x,
            y,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn x(&self) -> &[Vec<TriangularFuzzyNumber>] {
        &self.x
    }

    pub fn y(&self) -> &[TriangularFuzzyNumber] {
        &self.y
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn p(&self) -> usize {
        self.x[0].len()
    }
}

fn check_fittable(n: usize, p: usize) -> Result<()> {
    if n < p + 1 {
        return Err(Error::InvalidArgument(format!(
            "need at least {} observations to fit {} coefficients, got {n}",
            p + 1,
            p + 1
        )));
    }
    Ok(())
}

/// Intercept-prefixed design matrix `(1, x₁ … x_p)`.
fn center_design(data: &CrispInputDataset) -> Vec<Vec<f64>> {
    data.x
        .iter()
        .map(|row| {
            let mut d = Vec::with_capacity(row.len() + 1);
            d.push(1.0);
            d.extend_from_slice(row);
            d
        })
        .collect()
}

/// Intercept-prefixed absolute-value design `(1, |x₁| … |x_p|)`.
fn spread_design(data: &CrispInputDataset) -> Vec<Vec<f64>> {
    data.x
        .iter()
        .map(|row| {
            let mut d = Vec::with_capacity(row.len() + 1);
            d.push(1.0);
            d.extend(row.iter().map(|v| v.abs()));
            d
        })
        .collect()
}

fn assemble_model(centers: Vec<f64>, lefts: Vec<f64>, rights: Vec<f64>) -> Result<FLRModel> {
    let coefficients = centers
        .iter()
        .zip(&lefts)
        .zip(&rights)
        .map(|((&m, &l), &r)| {
            // Nonnegative solvers can emit exact-zero spreads stored as -0.0.
            TriangularFuzzyNumber::new(l.max(0.0), m, r.max(0.0))
        })
        .collect::<Result<Vec<_>>>()?;
    FLRModel::new(coefficients)
}

/// Fuzzy least squares: ordinary least squares for the centers and
/// nonnegativity-constrained least squares for each spread side.
pub fn fit_least_squares(data: &CrispInputDataset) -> Result<FLRModel> {
    check_fittable(data.n(), data.p())?;
    let cd = center_design(data);
    let sd = spread_design(data);
    let m_y: Vec<f64> = data.y.iter().map(|y| y.center()).collect();
    let l_y: Vec<f64> = data.y.iter().map(|y| y.left_spread()).collect();
    let r_y: Vec<f64> = data.y.iter().map(|y| y.right_spread()).collect();

    let centers = linalg::ols(&cd, &m_y)?;
    let lefts = linalg::nnls(&sd, &l_y)?;
    let rights = linalg::nnls(&sd, &r_y)?;
    assemble_model(centers, lefts, rights)
}

/// Fuzzy least absolutes: minimizes the sum of absolute residuals for the
/// centers (free coefficients) and for each spread side (coefficients
/// constrained nonnegative), each via linear programming.
pub fn fit_least_absolutes(data: &CrispInputDataset) -> Result<FLRModel> {
    check_fittable(data.n(), data.p())?;
    let cd = center_design(data);
    // The LP tolerates rank deficiency by returning one of many optima;
    // reject it up front so behavior matches the least-squares estimator.
    linalg::check_full_rank(&cd)?;
    let sd = spread_design(data);
    let m_y: Vec<f64> = data.y.iter().map(|y| y.center()).collect();
    let l_y: Vec<f64> = data.y.iter().map(|y| y.left_spread()).collect();
    let r_y: Vec<f64> = data.y.iter().map(|y| y.right_spread()).collect();

    let centers = linalg::lad(&cd, &m_y, false)?;
    let lefts = linalg::lad(&sd, &l_y, true)?;
    let rights = linalg::lad(&sd, &r_y, true)?;
    assemble_model(centers, lefts, rights)
}

/// Default number of bootstrap replicates.
pub const DEFAULT_REPLICATES: usize = 1000;

/// How many consecutive rank-deficient resamples abort the bootstrap.
const MAX_DEGENERATE_REDRAWS: usize = 100;

/// Bootstrap-averaged least squares.
///
/// Draws `replicates` row resamples with replacement, fits
/// [`fit_least_squares`] to each, and averages the coefficient components.
/// Rank-deficient resamples are redrawn; more than 100 consecutive failures
/// abort with a degenerate-data error.
///
/// Reproducibility contract: replicate `i` draws its `n` row indices
/// sequentially from a ChaCha8 stream seeded with `seed` and stream index
/// `i`, so results are identical for identical `(data, replicates, seed)`
/// regardless of host or thread count.
pub fn fit_bootstrap(data: &CrispInputDataset, replicates: usize, seed: u64) -> Result<FLRModel> {
    if replicates == 0 {
        return Err(Error::InvalidArgument(
            "bootstrap needs at least one replicate".into(),
        ));
    }
    check_fittable(data.n(), data.p())?;
    let n = data.n();
    let width = data.p() + 1;
    let mut sum_l = vec![0.0f64; width];
    let mut sum_m = vec![0.0f64; width];
    let mut sum_r = vec![0.0f64; width];

    for replicate in 0..replicates {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(replicate as u64);
        let mut failures = 0usize;
        let model = loop {
            let indices: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
            match fit_least_squares(&data.resample(&indices)) {
                Ok(model) => break model,
                Err(Error::SingularDesign(_)) => {
                    failures += 1;
                    if failures > MAX_DEGENERATE_REDRAWS {
                        return Err(Error::DegenerateData(format!(
                            "bootstrap replicate {replicate} drew {failures} rank-deficient \
                             resamples in a row"
                        )));
                    }
                }
                Err(other) => return Err(other),
            }
        };
        for (j, coeff) in model.coefficients().iter().enumerate() {
            let (l, m, r) = coeff.components();
            sum_l[j] += l;
            sum_m[j] += m;
            sum_r[j] += r;
        }
    }

    let scale = 1.0 / replicates as f64;
    assemble_model(
        sum_m.iter().map(|v| v * scale).collect(),
        sum_l.iter().map(|v| v * scale).collect(),
        sum_r.iter().map(|v| v * scale).collect(),
    )
}

/// Least-squares fit for fuzzy inputs: output centers regressed on input
/// centers, output spreads regressed on input spreads under nonnegativity.
///
/// The spread regression stacks the left-side and right-side rows into one
/// system, so a single nonnegative coefficient vector serves both sides —
/// matching the prediction convention of [`FuzzyInputModel::predict_fuzzy`].
pub fn fit_fuzzy_input(data: &FuzzyInputDataset) -> Result<FuzzyInputModel> {
    check_fittable(data.n(), data.p())?;
    let center_design: Vec<Vec<f64>> = data
        .x
        .iter()
        .map(|row| {
            let mut d = Vec::with_capacity(row.len() + 1);
            d.push(1.0);
            d.extend(row.iter().map(|x| x.center()));
            d
        })
        .collect();
    let m_y: Vec<f64> = data.y.iter().map(|y| y.center()).collect();
    let center_coeffs = linalg::ols(&center_design, &m_y)?;

    let mut spread_rows = Vec::with_capacity(2 * data.n());
    let mut spread_targets = Vec::with_capacity(2 * data.n());
    for (row, y) in data.x.iter().zip(&data.y) {
        let mut left = Vec::with_capacity(row.len() + 1);
        left.push(1.0);
        left.extend(row.iter().map(|x| x.left_spread()));
        spread_rows.push(left);
        spread_targets.push(y.left_spread());

        let mut right = Vec::with_capacity(row.len() + 1);
        right.push(1.0);
        right.extend(row.iter().map(|x| x.right_spread()));
        spread_rows.push(right);
        spread_targets.push(y.right_spread());
    }
    let spread_coeffs = linalg::nnls(&spread_rows, &spread_targets)?;

    FuzzyInputModel::new(
        center_coeffs,
        spread_coeffs.iter().map(|c| c.max(0.0)).collect(),
    )
}

/// Dense linear-algebra kernels: normal-equation least squares, nonnegative
/// least squares (Lawson–Hanson active set), and least absolute deviations
/// via a primal simplex on the split-residual formulation.
///
/// Everything here works on small dense systems (the design matrices of the
/// datasets this crate targets); the LAD tableau is `n × (2·cols + 2n)`, so
/// very large inputs would want a specialised solver instead.
mod linalg {
    use crate::error::{Error, Result};

    /// Relative pivot floor for declaring a normal-equations matrix singular.
    const SINGULAR_TOL: f64 = 1e-10;

    /// Solves `min ‖A·β − b‖₂` for full-column-rank `A` via the normal
    /// equations and a Cholesky factorization.
    pub fn ols(a: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
        let cols = a[0].len();
        let mut gram = vec![vec![0.0f64; cols]; cols];
        let mut rhs = vec![0.0f64; cols];
        for (row, &bi) in a.iter().zip(b) {
            for j in 0..cols {
                rhs[j] += row[j] * bi;
                for k in j..cols {
                    gram[j][k] += row[j] * row[k];
                }
            }
        }
        for j in 0..cols {
            for k in 0..j {
                gram[j][k] = gram[k][j];
            }
        }
        solve_spd(&mut gram, &mut rhs)?;
        Ok(rhs)
    }

    /// Errors unless `a` has full column rank (up to the pivot tolerance).
    pub fn check_full_rank(a: &[Vec<f64>]) -> Result<()> {
        ols(a, &vec![0.0; a.len()]).map(|_| ())
    }

    /// In-place Cholesky solve of the symmetric positive-definite system
    /// `g·x = rhs`; `rhs` receives the solution.
    fn solve_spd(g: &mut [Vec<f64>], rhs: &mut [f64]) -> Result<()> {
        let n = g.len();
        let scale = g
            .iter()
            .enumerate()
            .map(|(i, row)| row[i].abs())
            .fold(0.0f64, f64::max)
            .max(1.0);
        // Factor g = L·Lᵀ in the lower triangle.
        for j in 0..n {
            for k in 0..j {
                let mut sum = g[j][k];
                for s in 0..k {
                    sum -= g[j][s] * g[k][s];
                }
                g[j][k] = sum / g[k][k];
            }
            let mut diag = g[j][j];
            for s in 0..j {
                diag -= g[j][s] * g[j][s];
            }
            if diag <= SINGULAR_TOL * scale {
                return Err(Error::SingularDesign(format!(
                    "normal-equations pivot {diag:.3e} at column {j} is not positive"
                )));
            }
            g[j][j] = diag.sqrt();
        }
        // Forward then backward substitution.
        for j in 0..n {
            let mut sum = rhs[j];
            for s in 0..j {
                sum -= g[j][s] * rhs[s];
            }
            rhs[j] = sum / g[j][j];
        }
        for j in (0..n).rev() {
            let mut sum = rhs[j];
            for s in j + 1..n {
                sum -= g[s][j] * rhs[s];
            }
            rhs[j] = sum / g[j][j];
        }
        Ok(())
    }

    /// Lawson–Hanson nonnegative least squares: `min ‖A·β − b‖₂, β ≥ 0`.
    ///
    /// Always converges on full-column-rank subproblems; a singular passive
    /// set surfaces as a singular-design error.
    pub fn nnls(a: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
        let cols = a[0].len();
        let mut x = vec![0.0f64; cols];
        let mut passive = vec![false; cols];
        let mut residual: Vec<f64> = b.to_vec();
        // Optimality tolerance on the gradient, scaled to the problem data;
        // near the optimum the computed gradient carries rounding noise of
        // roughly machine epsilon times these magnitudes.
        let a_inf = a
            .iter()
            .flat_map(|row| row.iter())
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let b_inf = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tol = 1e-9 * (1.0 + a_inf * b_inf);
        let max_outer = 10 * cols.max(10);

        for _ in 0..=max_outer {
            // w = Aᵀ·residual, the negative gradient.
            let mut w = vec![0.0f64; cols];
            for (row, &ri) in a.iter().zip(&residual) {
                for j in 0..cols {
                    w[j] += row[j] * ri;
                }
            }
            let mut best: Option<(usize, f64)> = None;
            for j in 0..cols {
                if !passive[j] && w[j] > tol && best.map_or(true, |(_, bw)| w[j] > bw) {
                    best = Some((j, w[j]));
                }
            }
            let Some((enter, _)) = best else {
                return Ok(x);
            };
            passive[enter] = true;

            // Inner loop: solve on the passive set, stepping back toward the
            // previous iterate until the passive solution is feasible.
            loop {
                let subset: Vec<usize> = (0..cols).filter(|&j| passive[j]).collect();
                let sub_design: Vec<Vec<f64>> = a
                    .iter()
                    .map(|row| subset.iter().map(|&j| row[j]).collect())
                    .collect();
                let s_subset = ols(&sub_design, b)?;
                let mut s = vec![0.0f64; cols];
                for (&j, &v) in subset.iter().zip(&s_subset) {
                    s[j] = v;
                }
                if subset.iter().all(|&j| s[j] > 0.0) {
                    x = s;
                    break;
                }
                let mut alpha = f64::INFINITY;
                let mut drop_j = None;
                for &j in &subset {
                    if s[j] <= 0.0 {
                        let step = x[j] / (x[j] - s[j]);
                        if step < alpha {
                            alpha = step;
                            drop_j = Some(j);
                        }
                    }
                }
                for &j in &subset {
                    x[j] += alpha * (s[j] - x[j]);
                }
                if let Some(j) = drop_j {
                    x[j] = 0.0;
                }
                for &j in &subset {
                    if x[j] <= 0.0 {
                        x[j] = 0.0;
                        passive[j] = false;
                    }
                }
            }

            for (i, row) in a.iter().enumerate() {
                let fit: f64 = row.iter().zip(&x).map(|(aij, xj)| aij * xj).sum();
                residual[i] = b[i] - fit;
            }
        }
        Err(Error::Internal(
            "nonnegative least squares failed to converge".into(),
        ))
    }

    /// Least absolute deviations: `min Σ|A·β − b|ᵢ`.
    ///
    /// Solved as the linear program `min Σ(u+v)` subject to
    /// `A·β + u − v = b, u, v ≥ 0`, with `β` split into positive and
    /// negative parts unless `nonneg` constrains it directly. The primal
    /// simplex with Bland's rule guarantees termination.
    pub fn lad(a: &[Vec<f64>], b: &[f64], nonneg: bool) -> Result<Vec<f64>> {
        let rows = a.len();
        let cols = a[0].len();
        let beta_vars = if nonneg { cols } else { 2 * cols };
        let nvars = beta_vars + 2 * rows;

        // Tableau: one row per constraint plus a reduced-cost row; last
        // column is the right-hand side. Rows are rescaled so b ≥ 0, making
        // the u (or v) columns an immediate feasible basis.
        let mut t = vec![vec![0.0f64; nvars + 1]; rows + 1];
        let mut basis = vec![0usize; rows];
        for i in 0..rows {
            let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
            for j in 0..cols {
                t[i][j] = flip * a[i][j];
                if !nonneg {
                    t[i][cols + j] = -flip * a[i][j];
                }
            }
            t[i][beta_vars + i] = flip; // u_i
            t[i][beta_vars + rows + i] = -flip; // v_i
            t[i][nvars] = flip * b[i];
            basis[i] = if flip > 0.0 {
                beta_vars + i
            } else {
                beta_vars + rows + i
            };
        }
        // Reduced costs for cost vector (0…0, 1…1): c_j − Σ c_basic·t[i][j],
        // where every basic variable has cost 1.
        for j in 0..=nvars {
            let col_sum: f64 = (0..rows).map(|i| t[i][j]).sum();
            let cost = if j >= beta_vars && j < nvars {
                1.0
            } else {
                0.0
            };
            t[rows][j] = cost - col_sum;
        }

        let max_iters = 50_000usize.max(200 * (rows + nvars));
        for _ in 0..max_iters {
            // Bland's rule: lowest-index column with negative reduced cost.
            let Some(enter) = (0..nvars).find(|&j| t[rows][j] < -1e-9) else {
                // Optimal: read β off the basis.
                let mut beta = vec![0.0f64; cols];
                for (i, &bj) in basis.iter().enumerate() {
                    if bj < cols {
                        beta[bj] += t[i][nvars];
                    } else if !nonneg && bj < 2 * cols {
                        beta[bj - cols] -= t[i][nvars];
                    }
                }
                return Ok(beta);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..rows {
                if t[i][enter] > 1e-11 {
                    let ratio = t[i][nvars] / t[i][enter];
                    let better = match leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < lr - 1e-12 || (ratio <= lr + 1e-12 && basis[i] < basis[li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((pivot_row, _)) = leave else {
                return Err(Error::SingularDesign(
                    "least-absolutes program is unbounded; the design is deficient".into(),
                ));
            };
            // Pivot.
            let pivot = t[pivot_row][enter];
            for j in 0..=nvars {
                t[pivot_row][j] /= pivot;
            }
            for i in 0..=rows {
                if i != pivot_row {
                    let factor = t[i][enter];
                    if factor != 0.0 {
                        for j in 0..=nvars {
                            t[i][j] -= factor * t[pivot_row][j];
                        }
                    }
                }
            }
            basis[pivot_row] = enter;
        }
        Err(Error::Internal(
            "least-absolutes simplex exceeded its iteration budget".into(),
        ))
    }

    #[cfg(test)]
    mod tests {
        use super::*;
        use approx::assert_abs_diff_eq;

        fn design(rows: &[&[f64]]) -> Vec<Vec<f64>> {
            rows.iter().map(|r| r.to_vec()).collect()
        }

        #[test]
        fn ols_solves_exact_system() {
            // y = 2 + 3x at x = 0, 1, 2.
            let a = design(&[&[1.0, 0.0], &[1.0, 1.0], &[1.0, 2.0]]);
            let beta = ols(&a, &[2.0, 5.0, 8.0]).unwrap();
            assert_abs_diff_eq!(beta[0], 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(beta[1], 3.0, epsilon = 1e-12);
        }

        #[test]
        fn ols_matches_normal_equations_oracle() {
            // Overdetermined system solved by hand through (AᵀA)⁻¹Aᵀb.
            let a = design(&[&[1.0, 1.0], &[1.0, 2.0], &[1.0, 3.0], &[1.0, 4.0]]);
            let b = [1.1, 1.9, 3.2, 3.9];
            let beta = ols(&a, &b).unwrap();
            // slope = Σ(x−x̄)(y−ȳ)/Σ(x−x̄)² = 4.85/5, intercept = ȳ − slope·x̄.
            assert_abs_diff_eq!(beta[1], 0.97, epsilon = 1e-10);
            assert_abs_diff_eq!(beta[0], 2.525 - 0.97 * 2.5, epsilon = 1e-10);
        }

        #[test]
        fn ols_rejects_rank_deficiency() {
            let a = design(&[&[1.0, 2.0], &[2.0, 4.0], &[3.0, 6.0]]);
            assert!(matches!(
                ols(&a, &[1.0, 2.0, 3.0]),
                Err(Error::SingularDesign(_))
            ));
            assert!(check_full_rank(&design(&[&[1.0, 0.0], &[0.0, 1.0]])).is_ok());
        }

        #[test]
        fn nnls_clamps_negative_slope() {
            let a = design(&[&[1.0, 1.0], &[1.0, 2.0], &[1.0, 3.0]]);
            let beta = nnls(&a, &[3.0, 2.0, 1.2]).unwrap();
            assert_abs_diff_eq!(beta[0], 2.0666666666666667, epsilon = 1e-9);
            assert_abs_diff_eq!(beta[1], 0.0, epsilon = 1e-12);
        }

        #[test]
        fn nnls_reduces_to_ols_when_unconstrained_fit_is_feasible() {
            let a = design(&[&[1.0, 1.0], &[1.0, 2.0], &[1.0, 3.0]]);
            let beta = nnls(&a, &[1.0, 2.2, 2.9]).unwrap();
            assert_abs_diff_eq!(beta[0], 0.13333333333333333, epsilon = 1e-9);
            assert_abs_diff_eq!(beta[1], 0.95, epsilon = 1e-9);
        }

        #[test]
        fn nnls_zero_target_gives_zero() {
            let a = design(&[&[1.0, 1.0], &[1.0, 2.0], &[1.0, 3.0]]);
            let beta = nnls(&a, &[0.0, 0.0, 0.0]).unwrap();
            assert_eq!(beta, vec![0.0, 0.0]);
        }

        #[test]
        fn lad_picks_median_like_line() {
            // Points (0,0), (1,1), (2,4): the Σ|r| minimizer is the line
            // through (0,0) and (2,4) with objective 1.
            let a = design(&[&[1.0, 0.0], &[1.0, 1.0], &[1.0, 2.0]]);
            let beta = lad(&a, &[0.0, 1.0, 4.0], false).unwrap();
            assert_abs_diff_eq!(beta[0], 0.0, epsilon = 1e-9);
            assert_abs_diff_eq!(beta[1], 2.0, epsilon = 1e-9);
        }

        #[test]
        fn lad_handles_negative_targets_and_nonneg_mode() {
            let a = design(&[&[1.0, 0.0], &[1.0, 1.0], &[1.0, 2.0]]);
            let beta = lad(&a, &[0.0, -1.0, -4.0], false).unwrap();
            assert_abs_diff_eq!(beta[0], 0.0, epsilon = 1e-9);
            assert_abs_diff_eq!(beta[1], -2.0, epsilon = 1e-9);

            // Same data under β ≥ 0: best nonnegative fit of decreasing data
            // is the flat line at the (lower) median level.
            let beta = lad(&a, &[3.0, 2.0, 1.0], true).unwrap();
            assert!(beta.iter().all(|&v| v >= 0.0));
            let objective: f64 = (0..3)
                .map(|i| (3.0 - i as f64 - (beta[0] + beta[1] * i as f64)).abs())
                .sum();
            assert_abs_diff_eq!(objective, 2.0, epsilon = 1e-9);
        }

        #[test]
        fn lad_exact_interpolation() {
            let a = design(&[&[1.0, 0.5], &[1.0, 1.5], &[1.0, 4.0], &[1.0, 9.0]]);
            let truth = [1.25, -0.75];
            let b: Vec<f64> = a
                .iter()
                .map(|r| truth[0] * r[0] + truth[1] * r[1])
                .collect();
            let beta = lad(&a, &b, false).unwrap();
            assert_abs_diff_eq!(beta[0], truth[0], epsilon = 1e-9);
            assert_abs_diff_eq!(beta[1], truth[1], epsilon = 1e-9);
        }
    }
}
