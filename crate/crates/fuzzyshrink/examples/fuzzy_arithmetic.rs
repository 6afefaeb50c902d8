//! Triangular fuzzy numbers: construction, membership, alpha-cuts, and the
//! arithmetic the regression models are built on.
//!
//! Run with `cargo run --example fuzzy_arithmetic`.

use fuzzyshrink::fuzzy_core::TriangularFuzzyNumber;
use fuzzyshrink::Result;

fn main() -> Result<()> {
    // (left spread, center, right spread): peak membership at 5, support
    // reaching down to 5 - 2 = 3 and up to 5 + 4 = 9.
    let a = TriangularFuzzyNumber::new(2.0, 5.0, 4.0)?;
    // Symmetric and crisp values are common enough to get shortcuts.
    let b = TriangularFuzzyNumber::symmetric(1.5, 0.5)?;
    let c = TriangularFuzzyNumber::crisp(2.0)?;

    println!("a = {a}");
    println!("b = {b} (prints compactly as {})", b.display_compact());
    println!("c = {c} (crisp: {})", c.is_crisp());
    println!();

    // Membership is 1 at the center and falls off linearly on each side.
    for x in [3.0, 4.0, 5.0, 7.0, 9.0, 9.5] {
        println!("membership of a at {x:>4}: {}", a.membership(x));
    }
    println!();

    // The alpha-cut is the interval where membership is at least alpha.
    for alpha in [0.0, 0.5, 1.0] {
        println!("alpha-cut of a at {alpha}: {}", a.alpha_cut(alpha)?);
    }
    println!();

    // Addition adds all three components; scaling by a negative factor
    // swaps the spreads so they stay nonnegative.
    let sum = a.add(&b);
    let scaled = a.scalar_mul(-2.0);
    println!("a + b   = {sum}");
    println!("-2 * a  = {scaled}");
    println!("0 * a   = {}", a.scalar_mul(0.0));
    Ok(())
}
