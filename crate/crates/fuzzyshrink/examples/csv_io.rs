//! Reading and writing datasets as CSV: the pair form for symmetric fuzzy
//! columns, the triple form for asymmetric ones, and round-tripping.
//!
//! Run with `cargo run --example csv_io`.

use fuzzyshrink::datasets::{load_builtin, parse_csv, write_csv, BuiltinId};
use fuzzyshrink::Result;

fn main() -> Result<()> {
    // Crisp inputs are plain columns x1..xp; a fuzzy column is a group of
    // headers sharing a name: either `<name>_m,<name>_s` (symmetric pair
    // form) or `<name>_l,<name>_m,<name>_r` (triple form).
    let text = "\
# five observations, one crisp input, symmetric fuzzy response
x1,y_m,y_s
1,8.0,1.8
2,6.4,2.2
3,9.5,2.6
4,13.5,2.6
5,13.0,2.4
";
    let data = parse_csv(text)?;
    println!("parsed {} observations, {} input(s)", data.n(), data.p());
    println!("first response: {}", data.y()[0]);
    println!();

    // Writing picks the narrowest faithful form per column: pair form when
    // every value in the column is symmetric, triple form otherwise.
    // Passing fitted values adds a `yhat` group, which parsing ignores.
    let dataset2 = load_builtin(BuiltinId::Dataset2);
    let round_trip = write_csv(dataset2.data(), Some(dataset2.published_fitted()))?;
    print!("{round_trip}");
    println!();

    // The cycle is lossless: parse(write(d)) == d.
    let reparsed = parse_csv(&round_trip)?;
    assert_eq!(reparsed.y(), dataset2.data().y());
    println!("round trip preserved every value exactly");

    // Parse errors carry the row and column they refer to.
    let bad = "x1,y_m,y_s\n1,oops,1.8\n";
    match parse_csv(bad) {
        Err(e) => println!("malformed cell reported as: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
