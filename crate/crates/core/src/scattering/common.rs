//! Common zeros of `φ_D` and `φ_N`: the eigenvalues that survive attaching
//! the lead.

use serde::Serialize;

use super::jost::LeadTree;
use crate::error::{Error, Result};
use crate::poly::RationalPolynomial;
use crate::spectral::eigen::{cos_preimages, scan_grid, scan_zeros, unit_roots};
use crate::spectral::fundamental::fundamental_values;
use crate::spectral::Potential;
use crate::tree::RootedTree;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommonSpectrum {
    /// Multiplicity of `λ = 0` as a common zero (0 if it is not one).
    pub m: usize,
    pub eigenvalues: Vec<f64>,
}

/// For symmetric potentials the common zeros are the `λ` with `c(λ) = r`
/// for a root `r` of `gcd(ψ̂, ψ₀)`; `c' = 0` forces `c = ±1`, where `ψ̂`
/// does not vanish.
pub fn common_spectrum_of(lt: &LeadTree, window: (f64, f64)) -> Result<CommonSpectrum> {
    let (a, b) = window;
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(Error::InvalidInput(format!("bad window [{a}, {b}]")));
    }
    if !lt.pot.is_symmetric() {
        return Err(Error::CannotCertify);
    }
    let g = RationalPolynomial::gcd(&lt.polys.psi_hat, &lt.polys.psi0);
    let roots = unit_roots(&g);
    let ell = lt.pot.ell();
    let mut out = Vec::new();
    match lt.pot.constant_value() {
        Some(q) => {
            for &(r, _) in &roots {
                out.extend(cos_preimages(r, q, ell, a, b));
            }
        }
        None => {
            let grid = scan_grid(a, b, lt.pot.min_value().min(a) - 1.0, ell);
            for &(r, _) in &roots {
                let f = |lam: f64| Ok(fundamental_values(&lt.pot, lam.into())?.c.re - r);
                let res = scan_zeros(&f, &grid, 1e-13)?;
                if !res.touching.is_empty() {
                    return Err(Error::CannotCertifyMultiplicity);
                }
                out.extend(res.roots);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|x, y| (*x - *y).abs() <= 1e-7 * (1.0 + y.abs()));

    let c0 = fundamental_values(&lt.pot, 0.0.into())?.c.re;
    let m = roots
        .iter()
        .find(|(r, _)| (c0 - r).abs() <= 1e-9)
        .map_or(0, |&(_, mult)| mult);
    Ok(CommonSpectrum { m, eigenvalues: out })
}

pub fn common_spectrum(tree: &RootedTree, pot: &Potential, window: (f64, f64)) -> Result<CommonSpectrum> {
    common_spectrum_of(&LeadTree::new(tree, pot)?, window)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{eigenvalues_in_interval, Problem};
    use std::f64::consts::PI;

    fn t(p: usize, root: usize, edges: &[(usize, usize)]) -> RootedTree {
        RootedTree::from_edge_list(p, root, edges).unwrap()
    }

    #[test]
    fn chain_from_end_has_none() {
        let chain = t(3, 0, &[(0, 1), (1, 2)]);
        let cs = common_spectrum(&chain, &Potential::Zero { ell: 1.0 }, (0.0, 200.0)).unwrap();
        assert_eq!(cs, CommonSpectrum { m: 0, eigenvalues: vec![] });
    }

    #[test]
    fn star_family() {
        let star = t(4, 0, &[(0, 1), (0, 2), (0, 3)]);
        let cs = common_spectrum(&star, &Potential::Zero { ell: 1.0 }, (0.0, 100.0)).unwrap();
        // (π/2 + 3π)² already exceeds 100.
        let want: Vec<f64> = (0..3).map(|n| (PI / 2.0 + PI * n as f64).powi(2)).collect();
        assert_eq!(cs.eigenvalues.len(), want.len());
        for (x, y) in cs.eigenvalues.iter().zip(&want) {
            assert!((x - y).abs() < 1e-9 * y);
        }
        assert_eq!(cs.m, 0);
    }

    #[test]
    fn centre_rooted_chain_at_zeros_of_s_prime() {
        // Rooted at its middle, the chain has common zeros where s'(ℓ) = 0.
        let chain = t(3, 1, &[(0, 1), (1, 2)]);
        let cs = common_spectrum(&chain, &Potential::Zero { ell: 1.0 }, (0.0, 100.0)).unwrap();
        for lam in &cs.eigenvalues {
            assert!(lam.sqrt().cos().abs() < 1e-9);
        }
        assert_eq!(cs.eigenvalues.len(), 3);
    }

    #[test]
    fn agrees_with_intersection_of_spectra() {
        let star = t(5, 0, &[(0, 1), (0, 2), (0, 3), (1, 4)]);
        let pot = Potential::Constant { q: -2.0, ell: 1.0 };
        let d = eigenvalues_in_interval(&star, &pot, Problem::D, 0.0, 150.0, 1e-12).unwrap();
        let n = eigenvalues_in_interval(&star, &pot, Problem::N, 0.0, 150.0, 1e-12).unwrap();
        let both: Vec<f64> = d
            .iter()
            .filter(|x| n.iter().any(|y| (x.lambda - y.lambda).abs() <= 1e-7 * (1.0 + x.lambda)))
            .map(|x| x.lambda)
            .collect();
        let cs = common_spectrum(&star, &pot, (0.0, 150.0)).unwrap();
        assert_eq!(cs.eigenvalues.len(), both.len());
    }

    #[test]
    fn zero_is_common_for_tuned_constant() {
        // Star with q = -(π/2)²: c(0) = cos(π/2) = 0 is a root of the gcd.
        let star = t(4, 0, &[(0, 1), (0, 2), (0, 3)]);
        let cs = common_spectrum(&star, &Potential::Constant { q: -(PI / 2.0).powi(2), ell: 1.0 }, (0.0, 50.0)).unwrap();
        assert_eq!(cs.m, 2);
        assert!(cs.eigenvalues[0].abs() < 1e-12);
    }

    #[test]
    fn sampled_symmetric_matches_constant() {
        let star = t(4, 0, &[(0, 1), (0, 2), (0, 3)]);
        let samp = Potential::from_fn(1.0, 16, |_| -1.0).unwrap();
        let a = common_spectrum(&star, &samp, (0.0, 60.0)).unwrap();
        let b = common_spectrum(&star, &Potential::Constant { q: -1.0, ell: 1.0 }, (0.0, 60.0)).unwrap();
        assert_eq!(a.eigenvalues.len(), b.eigenvalues.len());
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            assert!((x - y).abs() < 1e-8 * (1.0 + y));
        }
    }
}
