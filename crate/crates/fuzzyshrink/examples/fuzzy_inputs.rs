//! Regression with fuzzy inputs as well as fuzzy responses: crisp
//! coefficients route the input centers and spreads separately.
//!
//! Run with `cargo run --example fuzzy_inputs`.

use fuzzyshrink::datasets::{load_builtin, BuiltinId, FixtureModel};
use fuzzyshrink::fuzzy_core::TriangularFuzzyNumber;
use fuzzyshrink::metrics::aggregate;
use fuzzyshrink::regression::fit_fuzzy_input;
use fuzzyshrink::shrinkage::shrink_model;
use fuzzyshrink::{Result, ShrinkagePolicy};

fn rounded(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .map(|c| (c * 1e4).round() / 1e4 + 0.0)
        .collect()
}

fn main() -> Result<()> {
    // The fuzzy-input reference study: both the input and the response are
    // symmetric triangular numbers.
    let dataset = load_builtin(BuiltinId::Dataset4);
    let data = dataset.data().as_fuzzy().expect("fuzzy-input study");

    let fitted = fit_fuzzy_input(data)?;
    println!(
        "fitted center coefficients: {:?}",
        rounded(fitted.center_coeffs())
    );
    println!(
        "fitted spread coefficients: {:?}",
        rounded(fitted.spread_coeffs())
    );
    println!();

    // Predicting mixes the two coefficient sets: centers drive the
    // predicted center, spreads drive the predicted spreads.
    let x = [TriangularFuzzyNumber::symmetric(7.0, 0.5)?];
    println!("prediction at {}: {}", x[0], fitted.predict_fuzzy(&x)?);
    println!();

    // Shrinkage applies just as for crisp-input models: center coefficients
    // get the configured center rule, spread coefficients the positive
    // rule. The study's own baseline model for this data makes the cleaner
    // illustration — the freshly fitted model above has a near-zero center
    // intercept, and the plain rule v - k/v is explosive near zero. (Use
    // CenterRule::PositiveStein when coefficients may sit near zero.)
    let FixtureModel::Fuzzy(baseline) = dataset.fixture("17a")? else {
        unreachable!("17a is a fuzzy-input model");
    };
    let policy = ShrinkagePolicy::default();
    let shrunk = shrink_model(baseline, 0.041, &policy)?;
    println!(
        "baseline center coefficients: {:?}",
        rounded(baseline.center_coeffs())
    );
    println!(
        "baseline spread coefficients: {:?}",
        rounded(baseline.spread_coeffs())
    );
    println!("after shrinking at k = 0.041:");
    println!(
        "shrunk   center coefficients: {:?}",
        rounded(shrunk.center_coeffs())
    );
    println!(
        "shrunk   spread coefficients: {:?}",
        rounded(shrunk.spread_coeffs())
    );
    println!();

    let metric = "dlr".parse()?;
    for (label, m) in [("baseline", baseline), ("shrunk", &shrunk)] {
        let score = aggregate(&metric, data.y(), &m.predict_dataset(data)?)?;
        println!("{label:<8} dlr = {:.5}", score.aggregate);
    }
    Ok(())
}
