//! Exact linear systems over the rationals.

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Solution set `{x0 + Σ t_i n_i}` of an exact linear system.
#[derive(Clone, Debug)]
pub struct AffineSolution {
    pub particular: Vec<BigRational>,
    pub nullspace: Vec<Vec<BigRational>>,
}

impl AffineSolution {
    /// Coordinates on which every nullspace vector vanishes.
    pub fn determined(&self) -> Vec<bool> {
        (0..self.particular.len())
            .map(|i| self.nullspace.iter().all(|v| v[i].is_zero()))
            .collect()
    }

    pub fn is_unique(&self) -> bool {
        self.nullspace.is_empty()
    }
}

/// Solves `rows · x = rhs` by reduced row echelon form; `None` if inconsistent.
pub fn solve(mut rows: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>, n: usize) -> Option<AffineSolution> {
    let m = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(pr) = (r..m).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        rhs.swap(r, pr);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        rhs[r] *= &inv;
        for i in 0..m {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for j in col..n {
                    let t = &f * &rows[r][j];
                    rows[i][j] -= t;
                }
                let t = &f * &rhs[r];
                rhs[i] -= t;
            }
        }
        pivots.push(col);
        r += 1;
        if r == m {
            break;
        }
    }
    if rhs[r..].iter().any(|b| !b.is_zero()) {
        return None;
    }
    let mut particular = vec![BigRational::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = rhs[i].clone();
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let nullspace = free
        .iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -rows[i][f].clone();
            }
            v
        })
        .collect();
    Some(AffineSolution {
        particular,
        nullspace,
    })
}
