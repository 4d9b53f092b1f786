//! From the limit values of a scattering record back to the integer
//! polynomial pair.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{ratio, rational_from_f64, RationalPolynomial};
use crate::scattering::ScatteringRecord;

/// Largest allowed distance of an interpolated coefficient from an integer.
pub const ROUNDING_MARGIN: f64 = 0.25;

/// Exact interpolating polynomial through `(xs[i], ys[i])`, by divided
/// differences in Newton form.
pub fn newton_interpolate(xs: &[BigRational], ys: &[BigRational]) -> RationalPolynomial {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut out = RationalPolynomial::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        let factor = RationalPolynomial::new(vec![-xs[i].clone(), BigRational::from_integer(1.into())]);
        out = &(&out * &factor) + &RationalPolynomial::constant(dd[i].clone());
    }
    out
}

/// Nearest integer polynomial, refusing coefficients too far from one.
pub fn round_coefficients(f: &RationalPolynomial, margin: f64) -> Result<RationalPolynomial> {
    let mut out = Vec::with_capacity(f.coeffs().len());
    for c in f.coeffs() {
        let r = c.round();
        if (c - &r).abs() > rational_from_f64(margin)? {
            return Err(Error::RoundingMarginExceeded);
        }
        out.push(r.to_integer());
    }
    Ok(RationalPolynomial::from_bigints(out))
}

fn exact_values(values: &[f64]) -> Result<Vec<BigRational>> {
    values.iter().map(|&v| rational_from_f64(v)).collect()
}

/// `(ψ, ψ̂)` from `f` at `k/p` (`p+1` values) and `f̂` at `k/(p-1)`
/// (`p` values): exact interpolation of the float data, rounding to
/// integers, then the check `ψ(±1) = 0`.
pub fn interpolate_values(p: usize, f: &[f64], f_hat: &[f64]) -> Result<(RationalPolynomial, RationalPolynomial)> {
    if p < 2 {
        return Err(Error::SingleVertex);
    }
    if f.len() != p + 1 || f_hat.len() != p {
        return Err(Error::InvalidInput(format!(
            "expected {} and {} values, got {} and {}",
            p + 1,
            p,
            f.len(),
            f_hat.len()
        )));
    }
    let z: Vec<BigRational> = (0..=p).map(|k| ratio(k as i64, p as i64)).collect();
    let zh: Vec<BigRational> = (0..p).map(|k| ratio(k as i64, p as i64 - 1)).collect();
    let psi = round_coefficients(&newton_interpolate(&z, &exact_values(f)?), ROUNDING_MARGIN)?;
    let psi_hat = round_coefficients(&newton_interpolate(&zh, &exact_values(f_hat)?), ROUNDING_MARGIN)?;
    let one = BigRational::from_integer(BigInt::from(1));
    if !psi.eval(&one).is_zero() || !psi.eval(&-one).is_zero() {
        return Err(Error::ConsistencyCheckFailed);
    }
    Ok((psi, psi_hat))
}

pub fn interpolate_polynomials(rec: &ScatteringRecord) -> Result<(RationalPolynomial, RationalPolynomial)> {
    if !(rec.ell > 0.0) {
        return Err(Error::InvalidInput(format!("edge length must be positive, got {}", rec.ell)));
    }
    interpolate_values(rec.p, &rec.f, &rec.f_hat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charpoly::{psi, psi_hat};
    use crate::inverse::linear::solve;
    use crate::poly::rat;
    use crate::tree::enumerate_rooted_trees;

    /// Independent route: the Vandermonde system solved by row reduction.
    fn vandermonde(xs: &[BigRational], ys: &[BigRational]) -> RationalPolynomial {
        let n = xs.len();
        let rows: Vec<Vec<BigRational>> = xs
            .iter()
            .map(|x| {
                let mut row = vec![rat(1)];
                for j in 1..n {
                    let next = &row[j - 1] * x;
                    row.push(next);
                }
                row
            })
            .collect();
        let sol = solve(rows, ys.to_vec(), n).unwrap();
        assert!(sol.is_unique());
        RationalPolynomial::new(sol.particular)
    }

    #[test]
    fn newton_matches_vandermonde() {
        let xs: Vec<_> = (0..6).map(|k| ratio(k, 5)).collect();
        let ys: Vec<_> = [3, -1, 4, 1, -5, 9].iter().map(|&v| ratio(v, 7)).collect();
        assert_eq!(newton_interpolate(&xs, &ys), vandermonde(&xs, &ys));
    }

    #[test]
    fn path_values() {
        let (a, b) = interpolate_values(2, &[-1.0, -0.75, 0.0], &[0.0, -1.0]).unwrap();
        assert_eq!(a, RationalPolynomial::from_i64(&[-1, 0, 1]));
        assert_eq!(b, RationalPolynomial::from_i64(&[0, -1]));
    }

    #[test]
    fn exact_values_recover_every_small_tree() {
        for p in 2..=7 {
            for tree in enumerate_rooted_trees(p).unwrap() {
                let (a, b) = (psi(&tree), psi_hat(&tree).unwrap());
                let f: Vec<f64> = (0..=p).map(|k| a.eval_f64(k as f64 / p as f64)).collect();
                let fh: Vec<f64> = (0..p).map(|k| b.eval_f64(k as f64 / (p - 1) as f64)).collect();
                assert_eq!(interpolate_values(p, &f, &fh).unwrap(), (a, b));
            }
        }
    }

    #[test]
    fn corrupted_values_rejected() {
        assert_eq!(
            interpolate_values(2, &[-1.0, -0.6, 0.0], &[0.0, -1.0]),
            Err(Error::RoundingMarginExceeded)
        );
        // Integral but inconsistent: z² + z - 1 does not vanish at 1.
        assert_eq!(
            interpolate_values(2, &[-1.0, -0.25, 1.0], &[0.0, -1.0]),
            Err(Error::ConsistencyCheckFailed)
        );
    }
}
