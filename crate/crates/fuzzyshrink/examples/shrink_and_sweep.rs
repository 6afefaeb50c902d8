//! Stein-type shrinkage of a fitted fuzzy regression model, and the
//! automated search for the shrinkage constant that minimizes a
//! goodness-of-fit metric.
//!
//! Run with `cargo run --example shrink_and_sweep`.

use fuzzyshrink::datasets::{load_builtin, BuiltinId, FixtureModel};
use fuzzyshrink::metrics::aggregate;
use fuzzyshrink::shrinkage::{optimize_k, shrink_model, shrink_positive, shrink_value};
use fuzzyshrink::{Result, ShrinkagePolicy};

fn main() -> Result<()> {
    // The scalar rules first. The plain rule v - k/v can overshoot through
    // zero; the positive rule clamps there, which is what spreads need.
    let k = 0.0972;
    println!(
        "plain    shrink(1.6862, {k}) = {:.7}",
        shrink_value(1.6862, k)?
    );
    println!(
        "positive shrink(1.8469, {k}) = {:.7}",
        shrink_positive(1.8469, k)?
    );
    println!(
        "positive shrink(0.1565, {k}) = {:.7}  (clamped: k > v^2)",
        shrink_positive(0.1565, k)?
    );
    println!();

    // Applied to a whole model: centers get the plain rule, spreads the
    // positive rule, and the intercept participates — all configurable
    // through the policy.
    let dataset = load_builtin(BuiltinId::Dataset2);
    let data = dataset.data().as_crisp().expect("crisp-input study");
    let FixtureModel::Crisp(baseline) = dataset.fixture("14a")? else {
        unreachable!("14a is a crisp-input model");
    };

    let policy = ShrinkagePolicy::default();
    let shrunk = shrink_model(baseline, k, &policy)?;
    println!("baseline coefficients:");
    for c in baseline.coefficients() {
        println!("    ({:.4}, {:.4})_T", c.center(), c.left_spread());
    }
    println!("shrunk at k = {k}:");
    for c in shrunk.coefficients() {
        println!("    ({:.4}, {:.4})_T", c.center(), c.left_spread());
    }
    println!();

    // Did shrinking help? Score both against the observed responses.
    let metric = "dlr".parse()?;
    let before = aggregate(&metric, data.y(), &baseline.predict_dataset(data)?)?;
    let after = aggregate(&metric, data.y(), &shrunk.predict_dataset(data)?)?;
    println!("dlr before shrinkage: {:.5}", before.aggregate);
    println!("dlr after  shrinkage: {:.5}", after.aggregate);
    println!();

    // The sweep scans a fine k grid in parallel, golden-section refines the
    // best point, and bisects for the edge of the improvement region.
    let report = optimize_k(baseline, data, &metric, &policy, None, None)?;
    println!("optimal k            : {:.6}", report.k_star);
    println!("metric at optimum    : {:.6}", report.metric_shrunk);
    println!("improvement boundary : {:.6}", report.boundary_sup);
    println!(
        "every k in (0, {:.4}] beats the unshrunk baseline's {:.5}",
        report.boundary_sup, report.metric_baseline
    );
    Ok(())
}
