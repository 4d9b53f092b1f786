//! Numerical residuals of the identities tying the characteristic functions
//! of a tree to those of its pieces and to its polynomials.

use num_complex::Complex64;
use serde::Serialize;

use super::fundamental::{fundamental_values, FundamentalValues};
use super::matrix::{
    assemble_with_values, block_structure_residual, char_function_general, edge_order, EndCondition, Problem,
    TreePolynomials,
};
use super::potential::Potential;
use crate::error::{Error, Result};
use crate::tree::RootedTree;

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / (1.0 + a.norm().max(b.norm()))
}

/// `|c s' - c' s - 1|`, relative to the size of the products.
pub fn wronskian_residual(fv: &FundamentalValues) -> f64 {
    let scale = 1.0 + (fv.c * fv.sp).norm().max((fv.cp * fv.s).norm());
    (fv.wronskian() - 1.0).norm() / scale
}

/// Largest relative residual of `s' = c` and `c² - 1 = s c'`.
pub fn midpoint_symmetry_residual(fv: &FundamentalValues) -> f64 {
    rel(fv.sp, fv.c).max(rel(fv.c * fv.c - 1.0, fv.s * fv.cp))
}

/// Part of `tree` made of the root and the branches below `tops`, with the
/// original vertex id of every new label.
pub fn root_part(tree: &RootedTree, tops: &[usize]) -> Result<(RootedTree, Vec<usize>)> {
    let mut verts = vec![tree.root()];
    verts.extend_from_slice(tops);
    let mut i = 1;
    while i < verts.len() {
        let u = verts[i];
        verts.extend_from_slice(tree.children(u));
        i += 1;
    }
    let mut index = vec![usize::MAX; tree.p()];
    for (k, &v) in verts.iter().enumerate() {
        index[v] = k;
    }
    let edges: Vec<_> = verts[1..]
        .iter()
        .map(|&v| (index[tree.parent(v).expect("non-root")], index[v]))
        .collect();
    Ok((RootedTree::from_edge_list(verts.len(), 0, &edges)?, verts))
}

/// Normalized `φ_{XA}` of a root part, carrying over per-edge values
/// (keyed by the original lower endpoint) and end conditions.
fn part_value(
    tree: &RootedTree,
    tops: &[usize],
    values: &[FundamentalValues],
    ends: &[EndCondition],
    which: Problem,
) -> Result<Complex64> {
    if tops.is_empty() {
        // A lone vertex: no equations, Dirichlet determinant 1, Neumann 0.
        return Ok(match which {
            Problem::D => 1.0.into(),
            Problem::N => 0.0.into(),
        });
    }
    let full_order = edge_order(tree);
    let mut pos = vec![usize::MAX; tree.p()];
    for (i, &v) in full_order.iter().enumerate() {
        pos[v] = i;
    }
    let (part, orig) = root_part(tree, tops)?;
    let vals: Vec<_> = edge_order(&part).iter().map(|&v| values[pos[orig[v]]]).collect();
    let part_ends: Vec<_> = orig.iter().map(|&v| ends[v]).collect();
    char_function_general(&part, &vals, which, &part_ends)
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct SplitResidual {
    pub dirichlet: f64,
    pub neumann: f64,
}

/// Residuals of the two-tree reduction formulas
/// `φ_DA(T) = φ_DA(T₁)φ_DA(T₂)`, `φ_NA(T) = φ_DA(T₁)φ_NA(T₂) + φ_NA(T₁)φ_DA(T₂)`
/// for `T₁` the root with branches `group`, `T₂` the root with the rest.
pub fn split_residual(
    tree: &RootedTree,
    values: &[FundamentalValues],
    ends: &[EndCondition],
    group: &[usize],
) -> Result<SplitResidual> {
    let tops = tree.children(tree.root());
    if group.iter().any(|v| !tops.contains(v)) {
        return Err(Error::InvalidInput("split group must be children of the root".into()));
    }
    let rest: Vec<usize> = tops.iter().copied().filter(|v| !group.contains(v)).collect();
    let whole = |w| char_function_general(tree, values, w, ends);
    let one = |w| part_value(tree, group, values, ends, w);
    let two = |w| part_value(tree, &rest, values, ends, w);
    let (d1, n1, d2, n2) = (one(Problem::D)?, one(Problem::N)?, two(Problem::D)?, two(Problem::N)?);
    Ok(SplitResidual {
        dirichlet: rel(whole(Problem::D)?, d1 * d2),
        neumann: rel(whole(Problem::N)?, d1 * n2 + n1 * d2),
    })
}

/// Residual of `φ_N = Σ_k φ_{N,k} Π_{j≠k} φ_{D,j}` over the root branches.
pub fn branch_sum_residual(tree: &RootedTree, values: &[FundamentalValues], ends: &[EndCondition]) -> Result<f64> {
    let tops = tree.children(tree.root()).to_vec();
    let mut d = Vec::new();
    let mut n = Vec::new();
    for &k in &tops {
        d.push(part_value(tree, &[k], values, ends, Problem::D)?);
        n.push(part_value(tree, &[k], values, ends, Problem::N)?);
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..tops.len() {
        let mut term = n[k];
        for (j, dj) in d.iter().enumerate() {
            if j != k {
                term *= dj;
            }
        }
        sum += term;
    }
    let prod: Complex64 = d.iter().product();
    let whole_n = char_function_general(tree, values, Problem::N, ends)?;
    let whole_d = char_function_general(tree, values, Problem::D, ends)?;
    Ok(rel(whole_n, sum).max(rel(whole_d, prod)))
}

/// Every numerical identity at one `λ` for one tree and potential.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct ReductionReport {
    pub wronskian: f64,
    pub midpoint_symmetry: f64,
    pub closed_form: f64,
    pub branch_sum: f64,
    pub split: SplitResidual,
    pub block_structure: f64,
}

impl ReductionReport {
    pub fn worst(&self) -> f64 {
        [
            self.wronskian,
            self.midpoint_symmetry,
            self.closed_form,
            self.branch_sum,
            self.split.dirichlet,
            self.split.neumann,
            self.block_structure,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Residuals at `λ`; the split takes the first root branch against the rest
/// (a lone vertex on the other side when the root is pendant).
pub fn reduction_identities_check(tree: &RootedTree, pot: &Potential, lambda: Complex64) -> Result<ReductionReport> {
    let fv = fundamental_values(pot, lambda)?;
    let values = vec![fv; tree.g()];
    let ends = vec![EndCondition::Neumann; tree.p()];
    let polys = TreePolynomials::new(tree)?;
    let (fd, fnn) = polys.eval(&fv);
    let (md, mn) = assemble_with_values(tree, &values)?;
    let sigma = super::matrix::normalization_sign(tree)?;
    let closed_form = rel(md.det() * sigma, fd).max(rel(mn.det() * sigma, fnn));
    let first = [tree.children(tree.root())[0]];
    Ok(ReductionReport {
        wronskian: wronskian_residual(&fv),
        midpoint_symmetry: if pot.is_symmetric() {
            midpoint_symmetry_residual(&fv)
        } else {
            0.0
        },
        closed_form,
        branch_sum: branch_sum_residual(tree, &values, &ends)?,
        split: split_residual(tree, &values, &ends, &first)?,
        block_structure: block_structure_residual(&md, tree.degree(tree.root())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::enumerate_rooted_trees;
    use rand::{Rng, SeedableRng};

    fn t(p: usize, root: usize, edges: &[(usize, usize)]) -> RootedTree {
        RootedTree::from_edge_list(p, root, edges).unwrap()
    }

    #[test]
    fn star_random_points() {
        let star = t(4, 0, &[(0, 1), (0, 2), (0, 3)]);
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..25 {
            let lam = rng.gen_range(-20.0..300.0);
            let r = reduction_identities_check(&star, &Potential::Zero { ell: 1.0 }, lam.into()).unwrap();
            assert!(r.worst() < 1e-9, "{lam}: {r:?}");
        }
    }

    #[test]
    fn unequal_constants_and_mixed_ends() {
        // The reduction formulas need neither equal nor symmetric potentials.
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for p in 3..=6 {
            for tree in enumerate_rooted_trees(p).unwrap() {
                let values: Vec<_> = (0..tree.g())
                    .map(|_| {
                        let q = rng.gen_range(-5.0..5.0);
                        fundamental_values(&Potential::Constant { q, ell: 1.0 }, rng.gen_range(0.0..60.0).into()).unwrap()
                    })
                    .collect();
                let ends: Vec<_> = (0..p)
                    .map(|_| if rng.gen_bool(0.5) { EndCondition::Dirichlet } else { EndCondition::Neumann })
                    .collect();
                let tops = tree.children(tree.root()).to_vec();
                for cut in 0..=tops.len() {
                    let r = split_residual(&tree, &values, &ends, &tops[..cut]).unwrap();
                    assert!(r.dirichlet < 1e-9 && r.neumann < 1e-9, "{tree:?} {r:?}");
                }
                assert!(branch_sum_residual(&tree, &values, &ends).unwrap() < 1e-9);
            }
        }
    }

    #[test]
    fn single_edge_blocks() {
        // One edge: the four end-condition pairs give s, c, s', c' up to the
        // common normalization sign of the edge.
        let edge = t(2, 0, &[(0, 1)]);
        let fv = fundamental_values(&Potential::Constant { q: 1.5, ell: 1.0 }, 9.0.into()).unwrap();
        let f = |w, e| char_function_general(&edge, &[fv], w, &[e, e]).unwrap();
        let sign = super::super::matrix::normalization_sign(&edge).unwrap();
        assert!((f(Problem::D, EndCondition::Dirichlet) - sign * fv.s).norm() < 1e-14);
        assert!((f(Problem::D, EndCondition::Neumann) - sign * fv.sp).norm() < 1e-14);
        assert!((f(Problem::N, EndCondition::Dirichlet) + sign * fv.c).norm() < 1e-14);
        assert!((f(Problem::N, EndCondition::Neumann) + sign * fv.cp).norm() < 1e-14);
    }

    #[test]
    fn chain_split_at_middle() {
        // Rooted at its middle vertex the three-vertex chain splits into two
        // edges, and the formulas recombine their blocks.
        let tree = t(3, 1, &[(0, 1), (1, 2)]);
        let fv = fundamental_values(&Potential::Zero { ell: 1.0 }, 4.0.into()).unwrap();
        let ends = vec![EndCondition::Neumann; 3];
        let r = split_residual(&tree, &[fv, fv], &ends, &[0]).unwrap();
        assert!(r.dirichlet < 1e-14 && r.neumann < 1e-14);
    }
}
