//! Regenerates the bundled `Cw(6,6,6)` face-pairing scheme.
//!
//! `cargo run -p cobweb-core --example export_scheme > crates/core/data/cw666.json`

use cobweb::reconstruct::{reconstruct, to_scheme};
use cobweb::{realize, Cell64, SchlafliTriple};

fn main() -> cobweb::Result<()> {
    let cell = Cell64::build(&realize(SchlafliTriple::cobweb(3)?)?)?;
    let named = reconstruct(&cell)?;
    let scheme = to_scheme(&cell, &named, "rotation-invariant face-pairing search")?;
    println!("{}", scheme.to_json()?);
    Ok(())
}
