//! Forward simulation of the scattering information: the limits `f_k`,
//! `f̂_k` along the lattice sequences, extrapolated in `1/n`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::common::common_spectrum_of;
use super::jost::LeadTree;
use crate::error::{Error, Result};
use crate::spectral::fundamental::{fundamental_at_lattice, lattice_sin, LatticePoint};
use crate::spectral::Potential;
use crate::tree::RootedTree;

pub const DEFAULT_SCHEDULE: [u32; 5] = [16, 32, 64, 128, 256];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordMeta {
    pub potential: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScatteringRecord {
    pub p: usize,
    pub ell: f64,
    pub f: Vec<f64>,
    pub f_hat: Vec<f64>,
    pub m: usize,
    pub common_eigenvalues: Vec<f64>,
    pub n_used: u32,
    pub meta: RecordMeta,
}

impl ScatteringRecord {
    pub fn to_json(&self) -> String {
        crate::format::to_json_string(self)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let rec: ScatteringRecord = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if rec.f.len() != rec.p + 1 || rec.f_hat.len() != rec.p {
            return Err(Error::InvalidInput(format!(
                "record lengths {} and {} do not fit p = {}",
                rec.f.len(),
                rec.f_hat.len(),
                rec.p
            )));
        }
        Ok(rec)
    }
}

#[derive(Clone, Debug)]
pub struct ScatterOptions {
    pub schedule: Vec<u32>,
    pub tol: f64,
    pub window: (f64, f64),
}

impl Default for ScatterOptions {
    fn default() -> Self {
        ScatterOptions {
            schedule: DEFAULT_SCHEDULE.to_vec(),
            tol: 1e-6,
            window: (0.0, 200.0),
        }
    }
}

/// Interpolation nodes: `z_k = k/p` for `f`, `ẑ_k = k/(p-1)` for `f̂`.
pub fn nodes(p: usize) -> (Vec<f64>, Vec<f64>) {
    let z = (0..=p).map(|k| k as f64 / p as f64).collect();
    let zh = (0..p).map(|k| if p == 1 { 0.0 } else { k as f64 / (p - 1) as f64 }).collect();
    (z, zh)
}

/// `F(√λ)` at every `z_k` and `F̂(√λ)` at every `ẑ_k`, with
/// `√λ = (arccos z + 2πn)/ℓ`, `F = sin(√λℓ) φ_N/√λ` and `F̂ = φ_D`.
pub fn lattice_values(lt: &LeadTree, n: u32) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::InvalidInput("lattice index must be positive".into()));
    }
    if !lt.pot.is_symmetric() {
        return Err(Error::HypothesisViolated);
    }
    let (z, zh) = nodes(lt.tree.p());
    let ell = lt.pot.ell();
    let eval = |zk: f64, want_n: bool| -> Result<f64> {
        let pt = LatticePoint {
            theta: zk.clamp(-1.0, 1.0).acos(),
            n,
            ell,
        };
        let fv = fundamental_at_lattice(&lt.pot, pt)?;
        let (d, nn) = lt.polys.eval(&fv);
        Ok(if want_n {
            (lattice_sin(pt) * nn / pt.sqrt_lambda()).re
        } else {
            d.re
        })
    };
    let f = z.par_iter().map(|&zk| eval(zk, true)).collect::<Result<Vec<_>>>()?;
    let fh = zh.par_iter().map(|&zk| eval(zk, false)).collect::<Result<Vec<_>>>()?;
    Ok((f, fh))
}

/// Neville extrapolation to `h = 0` of values sampled at `h_i = 1/n_i`:
/// row `i` of the returned table holds the extrapolants using samples
/// `i-j..=i`. With `n` doubling, column 1 is `2F(2n) - F(n)`.
pub fn richardson_table(ns: &[u32], values: &[f64]) -> Vec<Vec<f64>> {
    let h: Vec<f64> = ns.iter().map(|&n| 1.0 / n as f64).collect();
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(values.len());
    for i in 0..values.len() {
        let mut row = vec![values[i]];
        for j in 1..=i {
            let prev = row[j - 1];
            let up = table[i - 1][j - 1];
            row.push(prev + (prev - up) * h[i] / (h[i - j] - h[i]));
        }
        table.push(row);
    }
    table
}

/// Limits of the lattice sequences with the n-sequence of each row.
#[derive(Clone, Debug)]
pub struct LimitRun {
    pub ns: Vec<u32>,
    /// `raw[i]` = concatenated `(f, f̂)` at `ns[i]`.
    pub raw: Vec<Vec<f64>>,
    pub limits: Vec<f64>,
    pub converged: bool,
}

/// Escalates along `schedule` until the diagonal extrapolants of every
/// component move by at most `tol·max(1, |value|)`.
pub fn extrapolate_limits(lt: &LeadTree, schedule: &[u32], tol: f64) -> Result<LimitRun> {
    if schedule.len() < 2 || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("n schedule must be increasing with at least two entries".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let mut run = LimitRun {
        ns: Vec::new(),
        raw: Vec::new(),
        limits: Vec::new(),
        converged: false,
    };
    let mut previous: Option<Vec<f64>> = None;
    for &n in schedule {
        let (f, fh) = lattice_values(lt, n)?;
        run.ns.push(n);
        run.raw.push(f.into_iter().chain(fh).collect());
        let width = run.raw[0].len();
        let diag: Vec<f64> = (0..width)
            .map(|c| {
                let col: Vec<f64> = run.raw.iter().map(|r| r[c]).collect();
                *richardson_table(&run.ns, &col).last().unwrap().last().unwrap()
            })
            .collect();
        if let Some(prev) = &previous {
            let ok = diag
                .iter()
                .zip(prev)
                .all(|(a, b)| (a - b).abs() <= tol * a.abs().max(1.0));
            if ok {
                run.limits = diag;
                run.converged = true;
                return Ok(run);
            }
        }
        previous = Some(diag);
    }
    run.limits = previous.unwrap_or_default();
    Ok(run)
}

/// The full record; fails with [`Error::LimitNotConverged`] when the
/// schedule runs out.
pub fn scattering_info_of(lt: &LeadTree, opts: &ScatterOptions) -> Result<ScatteringRecord> {
    let p = lt.tree.p();
    if p < 2 {
        return Err(Error::SingleVertex);
    }
    let run = extrapolate_limits(lt, &opts.schedule, opts.tol)?;
    if !run.converged {
        return Err(Error::LimitNotConverged);
    }
    let common = common_spectrum_of(lt, opts.window)?;
    let (f, f_hat) = run.limits.split_at(p + 1);
    Ok(ScatteringRecord {
        p,
        ell: lt.pot.ell(),
        f: f.to_vec(),
        f_hat: f_hat.to_vec(),
        m: common.m,
        common_eigenvalues: common.eigenvalues,
        n_used: *run.ns.last().expect("non-empty schedule"),
        meta: RecordMeta {
            potential: lt.pot.to_json_value(),
        },
    })
}

pub fn scattering_info(tree: &RootedTree, pot: &Potential, opts: &ScatterOptions) -> Result<ScatteringRecord> {
    scattering_info_of(&LeadTree::new(tree, pot)?, opts)
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(_, y)| **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charpoly::{psi, psi_hat};
    use crate::poly::RationalPolynomial;

    fn t(p: usize, root: usize, edges: &[(usize, usize)]) -> RootedTree {
        RootedTree::from_edge_list(p, root, edges).unwrap()
    }

    fn exact(tree: &RootedTree) -> (Vec<f64>, Vec<f64>) {
        let (z, zh) = nodes(tree.p());
        let (a, b): (RationalPolynomial, RationalPolynomial) = (psi(tree), psi_hat(tree).unwrap());
        (z.iter().map(|&x| a.eval_f64(x)).collect(), zh.iter().map(|&x| b.eval_f64(x)).collect())
    }

    #[test]
    fn richardson_removes_polynomial_tail() {
        let ns = [16u32, 32, 64, 128];
        let vals: Vec<f64> = ns.iter().map(|&n| 2.0 + 3.0 / n as f64 - 5.0 / (n * n) as f64 + 0.5 / (n as f64).powi(3)).collect();
        let table = richardson_table(&ns, &vals);
        assert!((table[1][1] - (2.0 * vals[1] - vals[0])).abs() < 1e-15);
        assert!((table[3][3] - 2.0).abs() < 1e-13);
    }

    #[test]
    fn zero_potential_is_exact() {
        let tree = t(5, 0, &[(0, 1), (0, 2), (1, 3), (1, 4)]);
        let lt = LeadTree::new(&tree, &Potential::Zero { ell: 1.0 }).unwrap();
        let (ef, efh) = exact(&tree);
        for n in [1, 16, 1000] {
            let (f, fh) = lattice_values(&lt, n).unwrap();
            for (a, b) in f.iter().zip(&ef).chain(fh.iter().zip(&efh)) {
                assert!((a - b).abs() < 1e-12, "{n}: {a} {b}");
            }
        }
    }

    #[test]
    fn constant_potential_converges() {
        let chain = t(3, 0, &[(0, 1), (1, 2)]);
        let lt = LeadTree::new(&chain, &Potential::Constant { q: -4.0, ell: 1.0 }).unwrap();
        let rec = scattering_info_of(&lt, &ScatterOptions::default()).unwrap();
        let (ef, efh) = exact(&chain);
        for (a, b) in rec.f.iter().zip(&ef).chain(rec.f_hat.iter().zip(&efh)) {
            assert!((a - b).abs() < 1e-6, "{a} {b}");
        }
        assert!(rec.f[3].abs() < 1e-6);
        assert!(rec.n_used <= 256);
    }

    #[test]
    fn limit_not_converged_on_short_schedule() {
        let chain = t(3, 0, &[(0, 1), (1, 2)]);
        let opts = ScatterOptions {
            schedule: vec![4, 8],
            tol: 1e-12,
            ..Default::default()
        };
        let err = scattering_info(&chain, &Potential::Constant { q: -4.0, ell: 1.0 }, &opts).unwrap_err();
        assert_eq!(err, Error::LimitNotConverged);
    }

    #[test]
    fn record_json_round_trip() {
        let tree = t(3, 1, &[(0, 1), (1, 2)]);
        let rec = scattering_info(&tree, &Potential::Zero { ell: 1.0 }, &ScatterOptions::default()).unwrap();
        let s = rec.to_json();
        assert!(s.starts_with(r#"{"p":3,"ell":1.0,"f":["#));
        assert_eq!(ScatteringRecord::from_json(&s).unwrap(), rec);
        let bad = s.replacen(r#""p":3"#, r#""p":4"#, 1);
        assert!(ScatteringRecord::from_json(&bad).is_err());
    }

    #[test]
    fn raw_error_decays_like_one_over_n() {
        let chain = t(3, 0, &[(0, 1), (1, 2)]);
        let lt = LeadTree::new(&chain, &Potential::Constant { q: -4.0, ell: 1.0 }).unwrap();
        let (ef, _) = exact(&chain);
        let ns = [16.0, 32.0, 64.0, 128.0];
        let errs: Vec<f64> = ns
            .iter()
            .map(|&n| {
                let (f, _) = lattice_values(&lt, n as u32).unwrap();
                f.iter().zip(&ef).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
            })
            .collect();
        let slope = log_log_slope(&ns, &errs);
        assert!((-3.0..=-1.0 / 3.0).contains(&slope), "{slope}");
    }
}
