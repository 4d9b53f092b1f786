//! Dirichlet and standard root problems on a small tree, for a constant and
//! a sampled symmetric potential.

use qtree::spectral::eigen::spectrum_csv;
use qtree::spectral::{eigenvalues_in_interval, Potential, Problem};
use qtree::tree::RootedTree;

fn main() -> qtree::error::Result<()> {
    // Root with two children, one of which carries a leaf.
    let tree = RootedTree::from_edge_list(4, 0, &[(0, 1), (0, 2), (2, 3)])?;
    let potentials = [
        ("const:-4", Potential::constant(-4.0, 1.0)?),
        ("bump", Potential::from_fn(1.0, 41, |x| 6.0 * (std::f64::consts::PI * x).sin())?),
    ];
    for (name, pot) in &potentials {
        let mut rows = Vec::new();
        for which in [Problem::D, Problem::N] {
            for e in eigenvalues_in_interval(&tree, pot, which, -10.0, 60.0, 1e-12)? {
                rows.push((which, e));
            }
        }
        println!("# {name}");
        print!("{}", spectrum_csv(&rows));
    }
    Ok(())
}
