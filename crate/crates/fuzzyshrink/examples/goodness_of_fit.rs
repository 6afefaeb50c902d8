//! Scoring fuzzy predictions against fuzzy observations with the three
//! bundled distance families.
//!
//! Run with `cargo run --example goodness_of_fit`.

use fuzzyshrink::fuzzy_core::TriangularFuzzyNumber;
use fuzzyshrink::metrics::{aggregate, AggregationRule};
use fuzzyshrink::{GofMetric, Result};

fn main() -> Result<()> {
    let observed = vec![
        TriangularFuzzyNumber::new(1.8, 8.0, 1.8)?,
        TriangularFuzzyNumber::new(2.2, 6.4, 2.2)?,
        TriangularFuzzyNumber::new(2.6, 9.5, 2.6)?,
    ];
    let predicted = vec![
        TriangularFuzzyNumber::new(2.0, 6.7, 2.0)?,
        TriangularFuzzyNumber::new(2.2, 8.4, 2.2)?,
        TriangularFuzzyNumber::new(2.3, 10.1, 2.3)?,
    ];

    // Each metric is selected the same way the CLI does it: a selector
    // string. `dlr` and `dh` sum per-observation distances; `d2q` and the
    // general `dpq:p,q` average squared distances instead.
    for selector in ["dlr", "dlr:1,3", "dh", "d2q", "dpq:2,0.25"] {
        let metric: GofMetric = selector.parse()?;
        let value = aggregate(&metric, &observed, &predicted)?;
        let rule = match value.aggregation_rule {
            AggregationRule::Sum => "sum",
            AggregationRule::MeanOfSquares => "mean of squares",
        };
        println!(
            "{selector:<10} aggregate = {:>9.5}  ({rule})",
            value.aggregate
        );
        for (i, d) in value.per_observation.iter().enumerate() {
            println!("    observation {i}: {d:.5}");
        }
    }

    // A distance of zero means the two sequences agree exactly.
    let self_score = aggregate(&"dh".parse()?, &observed, &observed)?;
    println!(
        "\ndh of a sequence against itself: {}",
        self_score.aggregate
    );
    Ok(())
}
