//! Lead attached at the root: Jost function, S on the real axis and the
//! finite scattering record.

use qtree::scattering::record::ScatterOptions;
use qtree::scattering::{scattering_info, LeadTree};
use qtree::spectral::Potential;
use qtree::tree::RootedTree;

fn main() -> qtree::error::Result<()> {
    let star = RootedTree::from_edge_list(4, 0, &[(0, 1), (0, 2), (0, 3)])?;
    let pot = Potential::constant(-4.0, 1.0)?;
    let lt = LeadTree::new(&star, &pot)?;

    for k in [0.5, 1.0, 2.0, 4.0] {
        let j = lt.jost(k.into())?;
        let s = lt.s_function(k.into())?;
        println!("k = {k}: E(k) = {:.6}, S = {:.6}, |S| = {:.15}", j.e_plus, s, s.norm());
    }
    print!("{}", lt.s_trace_csv(&[1.0, 1.5, 2.0])?);

    let rec = scattering_info(&star, &pot, &ScatterOptions::default())?;
    println!("{}", rec.to_json());
    Ok(())
}
