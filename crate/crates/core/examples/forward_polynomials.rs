//! Every rooted tree with up to five vertices, with its polynomial pair and
//! branched continued fraction.

use qtree::bcf::bcf_expand;
use qtree::charpoly::{psi, psi_hat};
use qtree::tree::enumerate_rooted_trees;

fn main() -> qtree::error::Result<()> {
    for p in 2..=5 {
        for t in enumerate_rooted_trees(p)? {
            println!(
                "{:<14} psi = {:<24} psi_hat = {:<20} ratio = {}",
                t.canonical_code(),
                psi(&t).to_string(),
                psi_hat(&t)?.to_string(),
                bcf_expand(&t)?
            );
        }
    }
    Ok(())
}
