//! Eigenvalues of the Dirichlet- and Neumann-at-root problems.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use super::fundamental::{fundamental_values, FundamentalValues};
use super::matrix::{char_functions_with_values, Problem, TreePolynomials};
use super::potential::Potential;
use crate::error::{Error, Result};
use crate::format::fmt_sig;
use crate::poly::{rat, RationalPolynomial};
use crate::tree::RootedTree;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Eigenvalue {
    pub lambda: f64,
    pub multiplicity: usize,
}

/// Distinct roots in `(-1, 1)` with their multiplicities.
pub fn unit_roots(f: &RationalPolynomial) -> Vec<(f64, usize)> {
    let mut out = Vec::new();
    for (i, factor) in f.squarefree_decomposition().iter().enumerate() {
        for r in factor.real_roots_in(&rat(-1), &rat(1)) {
            out.push((r, i + 1));
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// All `λ ∈ [a, b]` with `cos(√(λ-q)·ℓ) = r`, for `|r| < 1`.
pub fn cos_preimages(r: f64, q: f64, ell: f64, a: f64, b: f64) -> Vec<f64> {
    let theta = r.clamp(-1.0, 1.0).acos();
    let top = if b > q { (b - q).sqrt() * ell } else { return Vec::new() };
    let mut out = Vec::new();
    let mut n = 0.0;
    while 2.0 * PI * n <= top + 2.0 * PI {
        for phase in [theta + 2.0 * PI * n, 2.0 * PI * (n + 1.0) - theta] {
            let lam = q + (phase / ell).powi(2);
            if lam >= a && lam <= b {
                out.push(lam);
            }
        }
        n += 1.0;
    }
    out
}

/// Eigenvalues for a constant potential `q` from the polynomial roots:
/// `φ_D = ψ̂(c)` and `φ_N = c'·ψ₀(c)`, where `c'` vanishes exactly at
/// `√(λ-q)·ℓ = nπ`, each zero simple.
pub fn closed_form_eigenvalues(
    polys: &TreePolynomials,
    q: f64,
    ell: f64,
    which: Problem,
    a: f64,
    b: f64,
) -> Vec<Eigenvalue> {
    let f = match which {
        Problem::D => &polys.psi_hat,
        Problem::N => &polys.psi0,
    };
    let mut out: Vec<Eigenvalue> = unit_roots(f)
        .into_iter()
        .flat_map(|(r, m)| {
            cos_preimages(r, q, ell, a, b)
                .into_iter()
                .map(move |lambda| Eigenvalue { lambda, multiplicity: m })
        })
        .collect();
    if which == Problem::N {
        let mut n = 0.0;
        loop {
            let lam = q + (n * PI / ell).powi(2);
            if lam > b {
                break;
            }
            if lam >= a {
                out.push(Eigenvalue {
                    lambda: lam,
                    multiplicity: 1,
                });
            }
            n += 1.0;
        }
    }
    out.sort_by(|x, y| x.lambda.total_cmp(&y.lambda));
    out
}

/// Result of scanning a real function on an interval.
#[derive(Clone, Debug, Default)]
pub struct ScanResult {
    /// Zeros located at sign changes.
    pub roots: Vec<f64>,
    /// Points where the function nearly touches zero without changing sign.
    pub touching: Vec<f64>,
}

/// Grid of `λ` values on `[a, b]` uniform in `√(λ - base)` with spacing
/// `π/(16ℓ)`: a quarter of the free oscillation spacing, halved for safety.
pub fn scan_grid(a: f64, b: f64, base: f64, ell: f64) -> Vec<f64> {
    let (u0, u1) = ((a - base).max(0.0).sqrt(), (b - base).max(0.0).sqrt());
    let du = PI / (16.0 * ell);
    let n = (((u1 - u0) / du).ceil() as usize).max(64);
    (0..=n)
        .map(|i| {
            let u = u0 + (u1 - u0) * i as f64 / n as f64;
            (base + u * u).clamp(a, b)
        })
        .collect()
}

/// Sign changes on `grid` refined by bisection to `tol·(1+|λ|)`, and local
/// minima of `|f|` below `tol·scale` with no sign change.
pub fn scan_zeros(f: &dyn Fn(f64) -> Result<f64>, grid: &[f64], tol: f64) -> Result<ScanResult> {
    let vals: Vec<f64> = grid.iter().map(|&x| f(x)).collect::<Result<_>>()?;
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    let mut res = ScanResult::default();
    for i in 0..grid.len() {
        if vals[i] == 0.0 {
            if i == 0 || vals[i - 1] != 0.0 {
                res.roots.push(grid[i]);
            }
            continue;
        }
        if i + 1 < grid.len() && vals[i + 1] != 0.0 && vals[i].signum() != vals[i + 1].signum() {
            res.roots.push(bisect(f, grid[i], grid[i + 1], vals[i], tol)?);
        }
    }
    for i in 1..grid.len().saturating_sub(1) {
        let (l, m, r) = (vals[i - 1], vals[i], vals[i + 1]);
        let same_sign = l.signum() == m.signum() && m.signum() == r.signum() && m != 0.0;
        if same_sign && m.abs() <= l.abs() && m.abs() <= r.abs() {
            let (x, v) = golden_min(f, grid[i - 1], grid[i + 1], m.signum())?;
            if v.abs() < tol * scale {
                res.touching.push(x);
            }
        }
    }
    Ok(res)
}

fn bisect(f: &dyn Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64, flo: f64, tol: f64) -> Result<f64> {
    let s = flo.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol * (1.0 + mid.abs()) || mid == lo || mid == hi {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Minimizes `sign·f` on `[a, b]`; stops early if the sign flips.
fn golden_min(f: &dyn Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, sign: f64) -> Result<(f64, f64)> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (sign * f(x1)?, sign * f(x2)?);
    for _ in 0..80 {
        if f1 <= 0.0 {
            return Ok((x1, 0.0));
        }
        if f2 <= 0.0 {
            return Ok((x2, 0.0));
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = sign * f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = sign * f(x2)?;
        }
        if b - a < 1e-14 * (1.0 + a.abs()) {
            break;
        }
    }
    Ok(if f1 < f2 { (x1, f1) } else { (x2, f2) })
}

/// Real `(φ_D, φ_N)` at real `λ` through the LU determinants.
fn real_phi(tree: &RootedTree, pot: &Potential, lam: f64) -> Result<(f64, f64)> {
    let fv = fundamental_values(pot, Complex64::new(lam, 0.0))?;
    let (d, n) = char_functions_with_values(tree, &vec![fv; tree.g()])?;
    Ok((d.re, n.re))
}

fn real_fv(pot: &Potential, lam: f64) -> Result<FundamentalValues> {
    fundamental_values(pot, Complex64::new(lam, 0.0))
}

/// Zeros of the chosen determinant by scanning, each counted once; a
/// touching zero is reported as [`Error::CannotCertifyMultiplicity`].
pub fn eigenvalues_by_scan(
    tree: &RootedTree,
    pot: &Potential,
    which: Problem,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Vec<Eigenvalue>> {
    let f = |lam: f64| -> Result<f64> {
        let (d, n) = real_phi(tree, pot, lam)?;
        Ok(if which == Problem::D { d } else { n })
    };
    let grid = scan_grid(a, b, pot.min_value().min(a) - 1.0, pot.ell());
    let res = scan_zeros(&f, &grid, tol)?;
    if !res.touching.is_empty() {
        return Err(Error::CannotCertifyMultiplicity);
    }
    Ok(res
        .roots
        .into_iter()
        .map(|lambda| Eigenvalue { lambda, multiplicity: 1 })
        .collect())
}

/// Symmetric sampled potential: zeros of `c(λ) - r` for every root `r` of
/// the relevant polynomial (multiplicity of `r`), plus zeros of `c'` for
/// the N problem.
fn eigenvalues_symmetric_sampled(
    polys: &TreePolynomials,
    pot: &Potential,
    which: Problem,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Vec<Eigenvalue>> {
    let grid = scan_grid(a, b, pot.min_value().min(a) - 1.0, pot.ell());
    let f = match which {
        Problem::D => &polys.psi_hat,
        Problem::N => &polys.psi0,
    };
    let mut out = Vec::new();
    for (r, m) in unit_roots(f) {
        let g = |lam: f64| Ok(real_fv(pot, lam)?.c.re - r);
        let res = scan_zeros(&g, &grid, tol)?;
        if !res.touching.is_empty() {
            return Err(Error::CannotCertifyMultiplicity);
        }
        out.extend(res.roots.into_iter().map(|lambda| Eigenvalue { lambda, multiplicity: m }));
    }
    if which == Problem::N {
        let g = |lam: f64| Ok(real_fv(pot, lam)?.cp.re);
        let res = scan_zeros(&g, &grid, tol)?;
        if !res.touching.is_empty() {
            return Err(Error::CannotCertifyMultiplicity);
        }
        out.extend(res.roots.into_iter().map(|lambda| Eigenvalue { lambda, multiplicity: 1 }));
    }
    out.sort_by(|x, y| x.lambda.total_cmp(&y.lambda));
    Ok(out)
}

/// All eigenvalues in `[a, b]` with multiplicities.
pub fn eigenvalues_in_interval(
    tree: &RootedTree,
    pot: &Potential,
    which: Problem,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Vec<Eigenvalue>> {
    if !(a < b) || !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("bad interval [{a}, {b}] or tolerance {tol}")));
    }
    let polys = TreePolynomials::new(tree)?;
    eigenvalues_with_polys(tree, &polys, pot, which, a, b, tol)
}

pub fn eigenvalues_with_polys(
    tree: &RootedTree,
    polys: &TreePolynomials,
    pot: &Potential,
    which: Problem,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Vec<Eigenvalue>> {
    match pot.constant_value() {
        Some(q) => Ok(closed_form_eigenvalues(polys, q, pot.ell(), which, a, b)),
        None if pot.is_symmetric() => eigenvalues_symmetric_sampled(polys, pot, which, a, b, tol),
        None => eigenvalues_by_scan(tree, pot, which, a, b, tol),
    }
}

/// `lambda,multiplicity,problem` rows.
pub fn spectrum_csv(rows: &[(Problem, Eigenvalue)]) -> String {
    let mut s = String::from("lambda,multiplicity,problem\n");
    for (p, e) in rows {
        let _ = writeln!(s, "{},{},{}", fmt_sig(e.lambda, 12), e.multiplicity, p.label());
    }
    s
}
