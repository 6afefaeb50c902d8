//! Fitting fuzzy regression models to crisp inputs with the three baseline
//! estimators: least squares, least absolutes, and bootstrap-averaged least
//! squares.
//!
//! Run with `cargo run --example fit_estimators`.

use fuzzyshrink::datasets::{load_builtin, BuiltinId};
use fuzzyshrink::metrics::aggregate;
use fuzzyshrink::regression::{
    fit_bootstrap, fit_least_absolutes, fit_least_squares, DEFAULT_REPLICATES,
};
use fuzzyshrink::{FLRModel, Result};

fn describe(label: &str, model: &FLRModel) {
    let coeffs: Vec<String> = model
        .coefficients()
        .iter()
        .map(|c| format!("({:.4}, {:.4})_T", c.center(), c.left_spread()))
        .collect();
    println!("{label:<14} coefficients: {}", coeffs.join(", "));
}

fn main() -> Result<()> {
    // One of the bundled reference studies: five observations, one input.
    let dataset = load_builtin(BuiltinId::Dataset2);
    let data = dataset.data().as_crisp().expect("crisp-input study");

    let ls = fit_least_squares(data)?;
    let lad = fit_least_absolutes(data)?;
    let boot = fit_bootstrap(data, DEFAULT_REPLICATES, 42)?;

    describe("least squares", &ls);
    describe("least abs", &lad);
    describe("bootstrap", &boot);
    println!();

    // Every estimator scores with every metric; least absolutes tends to
    // win under the absolute-deviation distances it optimizes for.
    let metric = "dlr".parse()?;
    for (label, model) in [
        ("least squares", &ls),
        ("least abs", &lad),
        ("bootstrap", &boot),
    ] {
        let fitted = model.predict_dataset(data)?;
        let score = aggregate(&metric, data.y(), &fitted)?;
        println!("{label:<14} dlr = {:.5}", score.aggregate);
    }
    println!();

    // Bootstrap refits are deterministic for a fixed seed and replicate
    // count, and converge toward the least-squares fit as replicates grow.
    let boot_again = fit_bootstrap(data, DEFAULT_REPLICATES, 42)?;
    assert_eq!(boot, boot_again);
    println!("bootstrap refit with the same seed is bit-identical");
    Ok(())
}
