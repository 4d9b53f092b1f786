//! Characteristic matrices `Φ_D`, `Φ_N` and their determinants.
//!
//! Unknowns are `y_e = a_e c + b_e s` on every edge `e`; an edge is named by
//! its lower endpoint and edges are numbered in breadth-first order. Columns
//! hold all `a`'s, then all `b`'s. Rows follow the vertices in breadth-first
//! order: the root conditions first, then for each other vertex one
//! continuity row per child and a Kirchhoff row.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::fundamental::{fundamental_values, FundamentalValues};
use super::potential::Potential;
use crate::charpoly::{psi, psi_hat, psi_reduced};
use crate::error::{Error, Result};
use crate::poly::RationalPolynomial;
use crate::tree::RootedTree;

/// Condition at the root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Problem {
    D,
    N,
}

impl Problem {
    pub fn label(self) -> &'static str {
        match self {
            Problem::D => "D",
            Problem::N => "N",
        }
    }
}

/// Condition at a pendant vertex other than the root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EndCondition {
    Neumann,
    Dirichlet,
}

#[derive(Clone, Debug)]
pub struct CharMatrix {
    pub matrix: DMatrix<Complex64>,
    /// `(vertex, condition index at that vertex)` per row.
    pub rows: Vec<(usize, usize)>,
    /// `(edge lower endpoint, 'a' | 'b')` per column.
    pub cols: Vec<(usize, char)>,
}

impl CharMatrix {
    pub fn det(&self) -> Complex64 {
        self.matrix.clone().lu().determinant()
    }
}

/// Lower endpoints of the edges in breadth-first order.
pub fn edge_order(tree: &RootedTree) -> Vec<usize> {
    tree.bfs_order().into_iter().skip(1).collect()
}

/// Both matrices for per-edge fundamental values given in [`edge_order`].
pub fn assemble_with_values(tree: &RootedTree, values: &[FundamentalValues]) -> Result<(CharMatrix, CharMatrix)> {
    let ends = vec![EndCondition::Neumann; tree.p()];
    Ok((
        assemble_general(tree, values, Problem::D, &ends)?,
        assemble_general(tree, values, Problem::N, &ends)?,
    ))
}

/// One matrix with the given root problem and conditions `ends[v]` at
/// pendant non-root vertices (entries for other vertices are ignored).
pub fn assemble_general(
    tree: &RootedTree,
    values: &[FundamentalValues],
    which: Problem,
    ends: &[EndCondition],
) -> Result<CharMatrix> {
    if tree.p() < 2 {
        return Err(Error::SingleVertex);
    }
    let order = edge_order(tree);
    let g = order.len();
    if values.len() != g {
        return Err(Error::InvalidInput(format!("{} edge values for {g} edges", values.len())));
    }
    let mut idx = vec![usize::MAX; tree.p()];
    for (i, &v) in order.iter().enumerate() {
        idx[v] = i;
    }
    let a = |v: usize| idx[v];
    let b = |v: usize| g + idx[v];
    let one = Complex64::new(1.0, 0.0);
    let mut m = DMatrix::<Complex64>::zeros(2 * g, 2 * g);
    let mut rows = Vec::with_capacity(2 * g);
    let mut r = 0;

    let root = tree.root();
    let top = tree.children(root);
    match which {
        Problem::D => {
            for &k in top {
                m[(r, a(k))] = one;
                rows.push((root, rows.len()));
                r += 1;
            }
        }
        Problem::N if top.len() == 1 => {
            m[(r, b(top[0]))] = one;
            rows.push((root, 0));
            r += 1;
        }
        Problem::N => {
            for (i, &k) in top.iter().enumerate().skip(1) {
                m[(r, a(top[0]))] = one;
                m[(r, a(k))] = -one;
                rows.push((root, i - 1));
                r += 1;
            }
            for &k in top {
                m[(r, b(k))] = one;
            }
            rows.push((root, top.len() - 1));
            r += 1;
        }
    }

    for &v in &order {
        let fv = &values[idx[v]];
        let kids = tree.children(v);
        if kids.is_empty() {
            let (x, y) = match ends[v] {
                EndCondition::Neumann => (fv.cp, fv.sp),
                EndCondition::Dirichlet => (fv.c, fv.s),
            };
            m[(r, a(v))] = x;
            m[(r, b(v))] = y;
            rows.push((v, 0));
            r += 1;
            continue;
        }
        for (i, &w) in kids.iter().enumerate() {
            m[(r, a(v))] = fv.c;
            m[(r, b(v))] = fv.s;
            m[(r, a(w))] = -one;
            rows.push((v, i));
            r += 1;
        }
        m[(r, a(v))] = fv.cp;
        m[(r, b(v))] = fv.sp;
        for &w in kids {
            m[(r, b(w))] = -one;
        }
        rows.push((v, kids.len()));
        r += 1;
    }
    debug_assert_eq!(r, 2 * g);
    let cols = order
        .iter()
        .map(|&v| (v, 'a'))
        .chain(order.iter().map(|&v| (v, 'b')))
        .collect();
    Ok(CharMatrix { matrix: m, rows, cols })
}

/// Sign making `σ·det Φ_D = ψ̂(c)` and `σ·det Φ_N = ψ(c)/s` for equal
/// symmetric potentials. It depends only on the tree and its numbering:
/// at `c = s' = 1, s = c' = 0` the first identity reads `σ·det = ψ̂(1) = (-1)^g`.
pub fn normalization_sign(tree: &RootedTree) -> Result<f64> {
    let g = tree.g();
    let ids = vec![FundamentalValues::identity(); g];
    let ends = vec![EndCondition::Neumann; tree.p()];
    let raw = assemble_general(tree, &ids, Problem::D, &ends)?.det().re;
    let parity = if g.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(parity * raw.signum())
}

pub fn assemble_phi_matrices(tree: &RootedTree, pot: &Potential, lambda: Complex64) -> Result<(CharMatrix, CharMatrix)> {
    let fv = fundamental_values(pot, lambda)?;
    assemble_with_values(tree, &vec![fv; tree.g()])
}

/// Normalized `(φ_D, φ_N)` from per-edge values.
pub fn char_functions_with_values(tree: &RootedTree, values: &[FundamentalValues]) -> Result<(Complex64, Complex64)> {
    let sigma = normalization_sign(tree)?;
    let (d, n) = assemble_with_values(tree, values)?;
    Ok((d.det() * sigma, n.det() * sigma))
}

/// Normalized determinant with arbitrary Dirichlet/Neumann ends.
pub fn char_function_general(
    tree: &RootedTree,
    values: &[FundamentalValues],
    which: Problem,
    ends: &[EndCondition],
) -> Result<Complex64> {
    let sigma = normalization_sign(tree)?;
    Ok(assemble_general(tree, values, which, ends)?.det() * sigma)
}

/// `(φ_D, φ_N)` by LU determinants. For constant potentials and real `λ`
/// the values are real; an imaginary part above `1e-10·(1+|value|)` is
/// reported rather than dropped.
pub fn char_functions(tree: &RootedTree, pot: &Potential, lambda: Complex64) -> Result<(Complex64, Complex64)> {
    let fv = fundamental_values(pot, lambda)?;
    let (d, n) = char_functions_with_values(tree, &vec![fv; tree.g()])?;
    if lambda.im == 0.0 && pot.constant_value().is_some() {
        for v in [d, n] {
            if v.im.abs() > 1e-10 * (1.0 + v.norm()) {
                return Err(Error::CannotCertify);
            }
        }
        return Ok((d.re.into(), n.re.into()));
    }
    Ok((d, n))
}

/// The polynomials behind the closed form of the characteristic functions.
#[derive(Clone, Debug)]
pub struct TreePolynomials {
    pub psi: RationalPolynomial,
    pub psi_hat: RationalPolynomial,
    /// `ψ / (z² - 1)`.
    pub psi0: RationalPolynomial,
}

impl TreePolynomials {
    pub fn new(tree: &RootedTree) -> Result<Self> {
        let p = psi(tree);
        Ok(TreePolynomials {
            psi_hat: psi_hat(tree)?,
            psi0: psi_reduced(&p)?,
            psi: p,
        })
    }

    /// `φ_D = ψ̂(c)`, `φ_N = ψ(c)/s = c'·ψ₀(c)`; the last form uses
    /// `c² - 1 = s c'`, valid for symmetric potentials.
    pub fn eval(&self, fv: &FundamentalValues) -> (Complex64, Complex64) {
        (self.psi_hat.eval_complex(fv.c), fv.cp * self.psi0.eval_complex(fv.c))
    }
}

/// Closed form `(φ_D, φ_N)`; requires the same symmetric potential on all edges.
pub fn char_functions_fast(tree: &RootedTree, pot: &Potential, lambda: Complex64) -> Result<(Complex64, Complex64)> {
    if !pot.is_symmetric() {
        return Err(Error::HypothesisViolated);
    }
    let polys = TreePolynomials::new(tree)?;
    Ok(polys.eval(&fundamental_values(pot, lambda)?))
}

/// Residuals of the block structure of `Φ_D`: identity top-left block,
/// zero top-right block, and `det Φ_D = det Φ²²`.
pub fn block_structure_residual(phi_d: &CharMatrix, d0: usize) -> f64 {
    let m = &phi_d.matrix;
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..d0 {
        for j in 0..n {
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((m[(i, j)] - want).norm());
        }
    }
    let lower = m.view((d0, d0), (n - d0, n - d0)).into_owned();
    let full = phi_d.det();
    let sub = lower.lu().determinant();
    worst.max((full - sub).norm() / (1.0 + full.norm()))
}
