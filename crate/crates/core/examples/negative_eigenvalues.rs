//! Isolated eigenvalues below the lead's spectrum and the common zeros that
//! survive attaching it.

use qtree::scattering::{absorb_pendant_root, common_spectrum, count_negative_eigenvalues};
use qtree::spectral::Potential;
use qtree::tree::enumerate_rooted_trees;

fn main() -> qtree::error::Result<()> {
    for q in [-1.0, -5.0, -10.0] {
        let pot = Potential::constant(q, 1.0)?;
        for t in enumerate_rooted_trees(4)? {
            let n = count_negative_eigenvalues(&t, &pot)?;
            let cs = common_spectrum(&t, &pot, (q - 1.0, 50.0))?;
            let (_, absorbed) = absorb_pendant_root(&t);
            println!(
                "q = {q:<4} {:<10} E zeros = {} phi_N zeros = {} common = {:?} (m = {}) pendant edges above root = {absorbed}",
                t.canonical_code().to_string(),
                n.via_jost,
                n.via_phi_n,
                cs.eigenvalues,
                cs.m
            );
        }
    }
    Ok(())
}
