//! Residual report over every identity suite of the toolkit.

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::charpoly::{pencil_det_without_root, psi, psi_hat, psi_reduced};
use crate::error::Result;
use crate::poly::RationalPolynomial;
use crate::scattering::LeadTree;
use crate::spectral::fundamental::{fundamental_values, WRONSKIAN_TOL};
use crate::spectral::identities::{branch_sum_residual, midpoint_symmetry_residual, split_residual, wronskian_residual};
use crate::spectral::matrix::{assemble_with_values, block_structure_residual, EndCondition};
use crate::spectral::Potential;
use crate::tree::{enumerate_rooted_trees, RootedTree};

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub samples: usize,
    pub worst: f64,
    pub tol: f64,
    pub passed: bool,
}

impl SuiteResult {
    fn new(name: &str, residuals: &[f64], tol: f64) -> Self {
        let worst = residuals.iter().copied().fold(0.0, f64::max);
        let finite = residuals.iter().all(|r| r.is_finite());
        SuiteResult {
            name: name.into(),
            samples: residuals.len(),
            worst,
            tol,
            passed: finite && worst <= tol && !residuals.is_empty(),
        }
    }
}

fn potentials() -> Result<Vec<Potential>> {
    Ok(vec![
        Potential::zero(1.0)?,
        Potential::constant(-4.0, 1.0)?,
        Potential::constant(2.5, 0.8)?,
        Potential::from_fn(1.0, 33, |x| 3.0 * (std::f64::consts::PI * x).sin())?,
        Potential::from_fn(1.0, 21, |x| 4.0 * (x - 0.5).powi(2) - 1.0)?,
    ])
}

fn trees(max_p: usize) -> Result<Vec<RootedTree>> {
    let mut out = Vec::new();
    for p in 2..=max_p {
        out.extend(enumerate_rooted_trees(p)?);
    }
    Ok(out)
}

fn exact(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

/// Runs every suite with a fixed seed; each suite draws at least 20 samples.
pub fn run_identity_suites() -> Result<Vec<SuiteResult>> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(2024);
    let pots = potentials()?;
    let small = trees(6)?;
    let mut out = Vec::new();

    let mut wr = Vec::new();
    let mut lagr = Vec::new();
    for pot in &pots {
        for _ in 0..8 {
            let lam = Complex64::new(rng.gen_range(-30.0..250.0), rng.gen_range(-3.0..3.0));
            let fv = fundamental_values(pot, lam)?;
            wr.push(wronskian_residual(&fv));
            lagr.push(midpoint_symmetry_residual(&fv));
        }
    }
    out.push(SuiteResult::new("wronskian", &wr, WRONSKIAN_TOL));
    out.push(SuiteResult::new("midpoint symmetry (s' = c, c^2 - 1 = s c')", &lagr, 1e-9));

    let mut detf = Vec::new();
    let mut prod = Vec::new();
    let mut unit = Vec::new();
    for tree in trees(8)? {
        let subs = tree.root_subtrees()?;
        let mut product = RationalPolynomial::one();
        for sub in &subs {
            let key = pencil_det_without_root(&sub.whole, &sub.whole.degrees());
            let hat_hat = if sub.hat.p() == 1 {
                RationalPolynomial::one()
            } else {
                psi_hat(&sub.hat)?
            };
            let rhs = &psi(&sub.hat) - &(&RationalPolynomial::z() * &hat_hat);
            detf.push(exact(key == rhs));
            product = &product * &key;
        }
        let ph = psi_hat(&tree)?;
        prod.push(exact(product == ph));
        let ps = psi(&tree);
        let nonzero = |s: i64| !ph.eval_i64(s).is_zero();
        unit.push(exact(psi_reduced(&ps).is_ok() && nonzero(1) && nonzero(-1)));
    }
    out.push(SuiteResult::new("branch determinant expansion", &detf, 0.0));
    out.push(SuiteResult::new("root-deleted determinant factorization", &prod, 0.0));
    out.push(SuiteResult::new("psi(+-1) = 0, psi_hat(+-1) != 0", &unit, 0.0));

    let mut sums = Vec::new();
    let mut splits = Vec::new();
    let mut blocks = Vec::new();
    for tree in &small {
        // Independent per-edge constants and random end conditions.
        let values = (0..tree.g())
            .map(|_| {
                let pot = Potential::constant(rng.gen_range(-5.0..5.0), 1.0)?;
                fundamental_values(&pot, rng.gen_range(-10.0..80.0).into())
            })
            .collect::<Result<Vec<_>>>()?;
        let ends: Vec<_> = (0..tree.p())
            .map(|_| if rng.gen_bool(0.5) { EndCondition::Dirichlet } else { EndCondition::Neumann })
            .collect();
        sums.push(branch_sum_residual(tree, &values, &ends)?);
        let tops = tree.children(tree.root());
        let cut = rng.gen_range(0..=tops.len());
        let r = split_residual(tree, &values, &ends, &tops[..cut])?;
        splits.push(r.dirichlet.max(r.neumann));
        let (md, _) = assemble_with_values(tree, &values)?;
        blocks.push(block_structure_residual(&md, tree.degree(tree.root())));
    }
    out.push(SuiteResult::new("branch sum and product of characteristic functions", &sums, 1e-9));
    out.push(SuiteResult::new("two-tree reduction", &splits, 1e-9));
    out.push(SuiteResult::new("Dirichlet matrix block structure", &blocks, 1e-10));

    let mut emat = Vec::new();
    let mut unitary = Vec::new();
    let mut closed = Vec::new();
    for tree in &small {
        let pot = &pots[rng.gen_range(0..pots.len())];
        let lt = LeadTree::new(tree, pot)?;
        let lam = rng.gen_range(-50.0..200.0);
        match lt.emat_residual(lam) {
            Ok(r) => emat.push(r),
            Err(crate::error::Error::SVanishes) => {}
            Err(e) => return Err(e),
        }
        let k = rng.gen_range(0.1..15.0);
        if let Ok(s) = lt.s_function(k.into()) {
            unitary.push((s.norm() - 1.0).abs());
        }
        let fv = fundamental_values(pot, lam.into())?;
        let (fast_d, fast_n) = lt.polys.eval(&fv);
        let (md, mn) = assemble_with_values(tree, &vec![fv; tree.g()])?;
        let sigma = crate::spectral::matrix::normalization_sign(tree)?;
        let rel = |a: Complex64, b: Complex64| (a - b).norm() / (1.0 + a.norm().max(b.norm()));
        closed.push(rel(md.det() * sigma, fast_d).max(rel(mn.det() * sigma, fast_n)));
    }
    out.push(SuiteResult::new("lead determinant identity", &emat, 1e-10));
    out.push(SuiteResult::new("unitarity |S| = 1", &unitary, 1e-9));
    out.push(SuiteResult::new("closed form vs determinant", &closed, 1e-9));
    Ok(out)
}
