//! Direct recovery of trees of depth at most two from the root.

use crate::charpoly::{psi, psi_hat};
use crate::poly::RationalPolynomial;
use crate::tree::RootedTree;

use super::diophantine::diophantine_reciprocals_bounded;
use super::recover::{reciprocal_sum, recover_d0};

/// The root with children of the given degrees, each child carrying
/// `d - 1` leaves.
pub fn snowflake(degrees: &[usize]) -> RootedTree {
    let arms: Vec<RootedTree> = degrees
        .iter()
        .map(|&d| RootedTree::graft(&vec![RootedTree::single_vertex(); d.saturating_sub(1)]))
        .collect();
    RootedTree::graft(&arms)
}

/// Matches `ψ/ψ̂ = -d₀z - Σ 1/(-d_k z - (d_k - 1)/(-z))`: the child degrees
/// satisfy `Σ 1/d_k` = the `z⁻¹` coefficient and `Σ d_k = p - 1`, and the
/// candidate must reproduce both polynomials exactly.
pub fn recover_snowflake(psi_in: &RationalPolynomial, psi_hat_in: &RationalPolynomial) -> Option<RootedTree> {
    let d0 = recover_d0(psi_in, psi_hat_in).ok()?;
    let p = psi_in.degree()?;
    let q = reciprocal_sum(psi_in, psi_hat_in, d0)?;
    if p < 2 || p - 1 < d0 {
        return None;
    }
    let bound = (p - d0) as u64;
    diophantine_reciprocals_bounded(&q, d0, Some(bound))
        .into_iter()
        .filter(|ds| ds.iter().sum::<u64>() == (p - 1) as u64)
        .map(|ds| snowflake(&ds.iter().map(|&d| d as usize).collect::<Vec<_>>()))
        .find(|t| psi(t) == *psi_in && psi_hat(t).ok().as_ref() == Some(psi_hat_in))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inverse::recover_shape;
    use crate::tree::enumerate_rooted_trees;

    #[test]
    fn eleven_vertex_pair() {
        let a = RationalPolynomial::from_i64(&[0, 0, 0, 0, 0, 52, 0, -202, 0, 258, 0, -108]);
        let b = RationalPolynomial::from_i64(&[0, 0, 0, 0, -12, 0, 52, 0, -75, 0, 36]);
        let t = recover_snowflake(&a, &b).unwrap();
        assert!(t.is_isomorphic(&snowflake(&[3, 3, 4])));
    }

    #[test]
    fn deep_chain_is_not_a_snowflake() {
        let chain = RootedTree::from_edge_list(4, 0, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(recover_snowflake(&psi(&chain), &psi_hat(&chain).unwrap()).is_none());
    }

    #[test]
    fn single_edge() {
        let edge = snowflake(&[1]);
        assert_eq!(edge.p(), 2);
        let t = recover_snowflake(&psi(&edge), &psi_hat(&edge).unwrap()).unwrap();
        assert!(t.is_isomorphic(&edge));
    }

    #[test]
    fn agrees_with_general_recovery() {
        for p in 2..=7 {
            for tree in enumerate_rooted_trees(p).unwrap() {
                let (a, b) = (psi(&tree), psi_hat(&tree).unwrap());
                let shallow = tree.height() <= 2;
                match recover_snowflake(&a, &b) {
                    Some(s) => {
                        assert!(shallow && s.is_isomorphic(&tree));
                        let all = recover_shape(&a, &b).unwrap();
                        assert_eq!(all.shapes.len(), 1);
                    }
                    None => assert!(!shallow),
                }
            }
        }
    }
}
