//! Replays the bundled reference studies: scores the response columns
//! printed in the original study and checks how closely the bundled
//! coefficient models reproduce them.
//!
//! Run with `cargo run --example reproduce_reference_tables`.

use fuzzyshrink::datasets::{load_builtin, BuiltinId};
use fuzzyshrink::metrics::aggregate;
use fuzzyshrink::{GofMetric, Result};

fn main() -> Result<()> {
    let metrics: Vec<GofMetric> = ["dlr", "dh", "d2q"]
        .iter()
        .map(|s| s.parse())
        .collect::<Result<_>>()?;

    for id in BuiltinId::ALL {
        let dataset = load_builtin(id);
        let data = dataset.data();
        println!(
            "=== {id}: {} ({} observations, {} input(s)) ===",
            data.name(),
            data.n(),
            data.p()
        );

        // Score the printed columns exactly as the study tabulated them.
        for (label, column) in [
            ("printed fitted", dataset.published_fitted()),
            ("printed shrunk", dataset.published_shrunk()),
        ] {
            let scores: Vec<String> = metrics
                .iter()
                .map(|m| aggregate(m, data.y(), column).map(|v| format!("{m} {:.4}", v.aggregate)))
                .collect::<Result<_>>()?;
            println!("  {label:<15} {}", scores.join("   "));
        }

        // Re-predict with each bundled coefficient model and report the
        // worst per-component deviation from the corresponding printed
        // column. Small gaps are expected: the study printed rounded
        // values.
        let printed = [dataset.published_fitted(), dataset.published_shrunk()];
        for (label, column) in dataset.fixture_names().iter().zip(printed) {
            let predictions = dataset.fixture(label)?.predict_dataset(data)?;
            let worst = predictions
                .iter()
                .zip(column)
                .flat_map(|(a, b)| {
                    [
                        (a.left_spread() - b.left_spread()).abs(),
                        (a.center() - b.center()).abs(),
                        (a.right_spread() - b.right_spread()).abs(),
                    ]
                })
                .fold(0.0_f64, f64::max);
            println!("  model {label:<4} vs printed column: worst component gap {worst:.4}");
        }

        if !dataset.notes().is_empty() {
            println!("  note: {}", dataset.notes());
        }
        println!();
    }
    Ok(())
}
