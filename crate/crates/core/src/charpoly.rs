//! Determinants of the pencil `-zD + A` attached to a rooted tree.
//!
//! `psi` is the full `p×p` determinant; `psi_hat` deletes the root row and
//! column but keeps the original degrees on the diagonal. The branch
//! polynomial of a hanging subtree is the same determinant taken over the
//! subtree alone with its root's degree counted in the whole tree.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{rat, RationalPolynomial};
use crate::tree::RootedTree;

/// Fraction-free Gaussian elimination over polynomial entries. Every
/// intermediate division is exact, so integer input stays integral.
pub fn bareiss_det(mut m: Vec<Vec<RationalPolynomial>>) -> RationalPolynomial {
    let n = m.len();
    if n == 0 {
        return RationalPolynomial::one();
    }
    let mut sign = false;
    let mut prev = RationalPolynomial::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = !sign;
                }
                None => return RationalPolynomial::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss step divides exactly");
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        -det
    } else {
        det
    }
}

/// Matrix `-z·diag(degrees) + A` restricted to `keep`.
fn pencil_matrix(tree: &RootedTree, degrees: &[usize], keep: &[usize]) -> Vec<Vec<RationalPolynomial>> {
    let mut pos = vec![usize::MAX; tree.p()];
    for (i, &v) in keep.iter().enumerate() {
        pos[v] = i;
    }
    let n = keep.len();
    let mut m = vec![vec![RationalPolynomial::zero(); n]; n];
    for (i, &v) in keep.iter().enumerate() {
        m[i][i] = RationalPolynomial::monomial(rat(-(degrees[v] as i64)), 1);
        for &u in tree.neighbors(v) {
            if pos[u] != usize::MAX {
                m[i][pos[u]] = RationalPolynomial::one();
            }
        }
    }
    m
}

/// `det(-zD + A)` over all vertices, with `degrees` on the diagonal.
pub fn pencil_det(tree: &RootedTree, degrees: &[usize]) -> RationalPolynomial {
    let keep: Vec<usize> = (0..tree.p()).collect();
    bareiss_det(pencil_matrix(tree, degrees, &keep))
}

/// `det(-zD + A)` with the root row and column removed.
pub fn pencil_det_without_root(tree: &RootedTree, degrees: &[usize]) -> RationalPolynomial {
    let keep: Vec<usize> = (0..tree.p()).filter(|&v| v != tree.root()).collect();
    bareiss_det(pencil_matrix(tree, degrees, &keep))
}

pub fn psi(tree: &RootedTree) -> RationalPolynomial {
    pencil_det(tree, &tree.degrees())
}

pub fn psi_hat(tree: &RootedTree) -> Result<RationalPolynomial> {
    if tree.p() == 1 {
        return Err(Error::SingleVertex);
    }
    Ok(pencil_det_without_root(tree, &tree.degrees()))
}

/// Degrees a subtree's vertices have once it hangs below a parent: the
/// root gains the edge to the parent.
pub fn hanging_degrees(hat: &RootedTree) -> Vec<usize> {
    let mut d = hat.degrees();
    d[hat.root()] += 1;
    d
}

/// `(pencil_det, pencil_det_without_root)` by expanding along each vertex
/// from the leaves up: the block of `v` is `-z d(v) Π P_c - Σ_c Q_c Π_{c'≠c} P_c'`,
/// where `Q_c` is the product of the blocks below `c`.
pub fn pencil_pair(tree: &RootedTree, degrees: &[usize]) -> (RationalPolynomial, RationalPolynomial) {
    fn go(tree: &RootedTree, degrees: &[usize], v: usize) -> (RationalPolynomial, RationalPolynomial) {
        let kids: Vec<_> = tree.children(v).iter().map(|&c| go(tree, degrees, c)).collect();
        let prod = kids.iter().fold(RationalPolynomial::one(), |acc, (p, _)| &acc * p);
        let mut full = &RationalPolynomial::monomial(rat(-(degrees[v] as i64)), 1) * &prod;
        for (i, (_, q)) in kids.iter().enumerate() {
            let others = kids
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .fold(RationalPolynomial::one(), |acc, (_, (p, _))| &acc * p);
            full = &full - &(q * &others);
        }
        (full, prod)
    }
    go(tree, degrees, tree.root())
}

/// Branch polynomial of `hat` hung below a parent vertex, with its
/// companion: the same determinant without the hanging root, which is the
/// product of the children's branch polynomials (one for a single vertex).
pub fn branch_pair(hat: &RootedTree) -> (RationalPolynomial, RationalPolynomial) {
    pencil_pair(hat, &hanging_degrees(hat))
}

pub fn branch_psi(hat: &RootedTree) -> RationalPolynomial {
    branch_pair(hat).0
}

pub fn branch_psi_hat(hat: &RootedTree) -> RationalPolynomial {
    branch_pair(hat).1
}

/// `ψ = (z²-1)·ψ₀`; returns `ψ₀`.
pub fn psi_reduced(psi: &RationalPolynomial) -> Result<RationalPolynomial> {
    psi.div_exact(&RationalPolynomial::from_i64(&[-1, 0, 1]))
}

/// True when `f(1) = f(-1) = 0`.
pub fn vanishes_at_unit_points(f: &RationalPolynomial) -> bool {
    f.eval_i64(1).is_zero() && f.eval_i64(-1).is_zero()
}
