//! Jost function, S-function and the identities around them for a tree
//! with a lead (zero potential) attached at the root.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::fmt_sig;
use crate::poly::{rational_to_f64, RationalPolynomial};
use crate::spectral::eigen::unit_roots;
use crate::spectral::fundamental::{fundamental_values, FundamentalValues};
use crate::spectral::matrix::{char_functions_with_values, TreePolynomials};
use crate::spectral::Potential;
use crate::tree::RootedTree;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// A tree with its edge potential, ready for repeated evaluation.
#[derive(Clone, Debug)]
pub struct LeadTree {
    pub tree: RootedTree,
    pub pot: Potential,
    pub polys: TreePolynomials,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct JostSample {
    pub sqrt_lambda: Complex64,
    pub e_plus: Complex64,
    pub e_minus: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NegativeCount {
    pub via_jost: usize,
    pub via_phi_n: usize,
}

impl LeadTree {
    pub fn new(tree: &RootedTree, pot: &Potential) -> Result<Self> {
        pot.validate()?;
        Ok(LeadTree {
            tree: tree.clone(),
            pot: pot.clone(),
            polys: TreePolynomials::new(tree)?,
        })
    }

    /// `(φ_D, φ_N)` at `λ`: closed form for symmetric potentials, LU
    /// determinants otherwise.
    pub fn phi(&self, lambda: Complex64) -> Result<(Complex64, Complex64)> {
        let fv = fundamental_values(&self.pot, lambda)?;
        self.phi_from(&fv)
    }

    pub fn phi_from(&self, fv: &FundamentalValues) -> Result<(Complex64, Complex64)> {
        if self.pot.is_symmetric() {
            Ok(self.polys.eval(fv))
        } else {
            char_functions_with_values(&self.tree, &vec![*fv; self.tree.g()])
        }
    }

    /// `E(±√λ) = φ_N(λ) ± i√λ φ_D(λ)` from one evaluation.
    pub fn jost(&self, k: Complex64) -> Result<JostSample> {
        let (d, n) = self.phi(k * k)?;
        Ok(JostSample {
            sqrt_lambda: k,
            e_plus: n + I * k * d,
            e_minus: n - I * k * d,
        })
    }

    /// `S(√λ) = E(-√λ)/E(√λ)`.
    pub fn s_function(&self, k: Complex64) -> Result<Complex64> {
        let fv = fundamental_values(&self.pot, k * k)?;
        let (d, n) = self.phi_from(&fv)?;
        let e_plus = n + I * k * d;
        // Size of E when nothing cancels: the polynomial coefficients at |c|.
        let l1 = |f: &RationalPolynomial| f.coeffs().iter().map(|c| rational_to_f64(c).abs()).sum::<f64>();
        let growth = fv.c.norm().max(1.0).powi(self.tree.p() as i32);
        let scale = (1.0 + k.norm()) * (1.0 + fv.cp.norm()) * (l1(&self.polys.psi_hat) + l1(&self.polys.psi0)) * growth;
        if e_plus.norm() <= 1e-14 * scale {
            return Err(Error::PoleOfS);
        }
        Ok((n - I * k * d) / e_plus)
    }

    /// `sqrt_lambda,re_S,im_S,abs_S` rows at real `√λ`.
    pub fn s_trace_csv(&self, ks: &[f64]) -> Result<String> {
        let mut out = String::from("sqrt_lambda,re_S,im_S,abs_S\n");
        for &k in ks {
            let s = self.s_function(k.into())?;
            writeln!(
                out,
                "{},{},{},{}",
                fmt_sig(k, 12),
                fmt_sig(s.re, 12),
                fmt_sig(s.im, 12),
                fmt_sig(s.norm(), 12)
            )
            .expect("write to string");
        }
        Ok(out)
    }

    /// `F/F̂ = sin(√λ ℓ) φ_N / (√λ φ_D)` directly, and through
    /// `i sin(√λ ℓ)(1+S)/(1-S)` from the S-function alone.
    pub fn ratio_diagnostic(&self, k: f64) -> Result<(Complex64, Complex64)> {
        let (d, n) = self.phi(Complex64::new(k * k, 0.0))?;
        let sin = (k * self.pot.ell()).sin();
        let direct = n * sin / (d * k);
        let s = self.s_function(k.into())?;
        Ok((direct, I * sin * (1.0 + s) / (1.0 - s)))
    }

    /// `|det(-zD + i√λ s e₀e₀ᵀ + A) - s E(√λ)| / (1 + |s E|)` with
    /// `z = c(ℓ)`, `s = s(ℓ)`, and `E` from the LU determinants.
    pub fn emat_residual(&self, lambda: f64) -> Result<f64> {
        if !self.pot.is_symmetric() {
            return Err(Error::HypothesisViolated);
        }
        let lam = Complex64::new(lambda, 0.0);
        let k = lam.sqrt();
        let fv = fundamental_values(&self.pot, lam)?;
        if fv.s.norm() <= 1e-12 * (1.0 + fv.c.norm()) {
            return Err(Error::SVanishes);
        }
        let (d, n) = char_functions_with_values(&self.tree, &vec![fv; self.tree.g()])?;
        let rhs = fv.s * (n + I * k * d);
        let p = self.tree.p();
        let mut m = DMatrix::<Complex64>::zeros(p, p);
        for v in 0..p {
            m[(v, v)] = -fv.c * self.tree.degree(v) as f64;
            for &w in self.tree.neighbors(v) {
                m[(v, w)] = 1.0.into();
            }
        }
        let r = self.tree.root();
        m[(r, r)] += I * k * fv.s;
        let lhs = m.lu().determinant();
        Ok((lhs - rhs).norm() / (1.0 + rhs.norm()))
    }

    /// Zeros of `t ↦ E(it)` on `(0, T]`, `T = √|min q| + 1`, against zeros
    /// of `φ_N` on `[min q - 1, 0)`, both counted with multiplicity.
    ///
    /// With `g = gcd(ψ̂, ψ₀)`, `E(it) = g(c)·(c'ψ₀/g(c) - tψ̂/g(c))`; the
    /// second factor is counted by sign changes and `g(c)` by the
    /// preimages of its roots. Likewise `φ_N = c'·ψ₀(c)`. Zeros of `c'` and
    /// preimages of a root in `(-1, 1)` are simple.
    pub fn count_negative_eigenvalues(&self) -> Result<NegativeCount> {
        if !self.pot.is_symmetric() {
            return Err(Error::HypothesisViolated);
        }
        let qmin = self.pot.min_value();
        let qmax = self.pot.max_value();
        let t_max = qmin.abs().sqrt() + 1.0;
        let spread = (qmax - qmin).max(0.0).sqrt() + t_max;
        let n = 400 + (400.0 * self.pot.ell() * spread).ceil() as usize;

        let (a, b) = (qmin.min(0.0) - 1.0, -1e-9);
        let lams: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
        let fvs: Vec<FundamentalValues> = lams
            .iter()
            .map(|&l| fundamental_values(&self.pot, l.into()))
            .collect::<Result<_>>()?;
        let along = |g: &dyn Fn(&FundamentalValues) -> f64| -> Result<usize> {
            let idx: Vec<f64> = (0..fvs.len()).map(|i| i as f64).collect();
            sign_changes(&|i: f64| Ok(g(&fvs[i as usize])), &idx, false)
        };
        let preimages = |f: &RationalPolynomial| -> Result<usize> {
            let mut count = 0;
            for (r, mult) in unit_roots(f) {
                count += mult * along(&|fv| fv.c.re - r)?;
            }
            Ok(count)
        };

        let common = RationalPolynomial::gcd(&self.polys.psi_hat, &self.polys.psi0);
        let rd = self.polys.psi_hat.div_exact(&common)?;
        let rn = self.polys.psi0.div_exact(&common)?;
        let reduced = |t: f64| -> Result<f64> {
            let fv = fundamental_values(&self.pot, Complex64::new(-t * t, 0.0))?;
            Ok((fv.cp * rn.eval_complex(fv.c) - t * rd.eval_complex(fv.c)).re)
        };
        let ts: Vec<f64> = (1..=n).map(|i| t_max * i as f64 / n as f64).collect();
        let via_jost = sign_changes(&reduced, &ts, true)? + preimages(&common)?;

        let via_phi_n = along(&|fv| fv.cp.re)? + preimages(&self.polys.psi0)?;
        Ok(NegativeCount { via_jost, via_phi_n })
    }
}

/// Sign changes of `f` along `grid`. With `guard_end`, a sign change in the
/// last cell or a near-zero at the last point means the interval was too short.
fn sign_changes(f: &dyn Fn(f64) -> Result<f64>, grid: &[f64], guard_end: bool) -> Result<usize> {
    let vals: Vec<f64> = grid.iter().map(|&x| f(x)).collect::<Result<_>>()?;
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut count = 0;
    let mut last = 0.0f64;
    let mut last_cell = false;
    for (i, &v) in vals.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            count += 1;
            last_cell = i + 1 == vals.len();
        }
        last = v;
    }
    let end = *vals.last().unwrap_or(&1.0);
    if guard_end && (last_cell || end.abs() <= 1e-10 * scale) {
        return Err(Error::RootNearAxisEndpoint);
    }
    Ok(count)
}

pub fn jost(tree: &RootedTree, pot: &Potential, k: Complex64) -> Result<JostSample> {
    LeadTree::new(tree, pot)?.jost(k)
}

pub fn s_function(tree: &RootedTree, pot: &Potential, k: Complex64) -> Result<Complex64> {
    LeadTree::new(tree, pot)?.s_function(k)
}

pub fn emat_residual(tree: &RootedTree, pot: &Potential, lambda: f64) -> Result<f64> {
    LeadTree::new(tree, pot)?.emat_residual(lambda)
}

pub fn count_negative_eigenvalues(tree: &RootedTree, pot: &Potential) -> Result<NegativeCount> {
    LeadTree::new(tree, pot)?.count_negative_eigenvalues()
}

/// Removes pendant roots by moving the root down the single edge, as long
/// as at least one edge remains; returns the new tree and the number of
/// edges absorbed into the lead.
pub fn absorb_pendant_root(tree: &RootedTree) -> (RootedTree, usize) {
    let mut t = tree.clone();
    let mut absorbed = 0;
    while t.p() > 2 && t.degree(t.root()) == 1 {
        let child = t.children(t.root())[0];
        t = t.subtree_at(child).0;
        absorbed += 1;
    }
    (t, absorbed)
}
