//! Forward scattering followed by inversion for every tree with six vertices.

use qtree::inverse::{interpolate_polynomials, recover_shape};
use qtree::scattering::record::ScatterOptions;
use qtree::scattering::scattering_info;
use qtree::spectral::Potential;
use qtree::tree::enumerate_rooted_trees;

fn main() -> qtree::error::Result<()> {
    let pot = Potential::constant(-4.0, 1.0)?;
    let opts = ScatterOptions::default();
    for t in enumerate_rooted_trees(6)? {
        let rec = scattering_info(&t, &pot, &opts)?;
        let (a, b) = interpolate_polynomials(&rec)?;
        let res = recover_shape(&a, &b)?;
        println!(
            "{:<16} n = {:<4} shapes = {} recovered = {}",
            t.canonical_code(),
            rec.n_used,
            res.shapes.len(),
            res.contains(&t)
        );
    }
    Ok(())
}
