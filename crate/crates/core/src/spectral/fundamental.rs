//! Fundamental solutions `c`, `s` of `-y'' + q y = λ y` on one edge, with
//! `c(0) = s'(0) = 1`, `c'(0) = s(0) = 0`, evaluated at the far end `x = ℓ`.

use std::f64::consts::PI;

use nalgebra::SVector;
use num_complex::Complex64;
use ode_solvers::dop853::Dop853;
use ode_solvers::dop_shared::OutputType;
use ode_solvers::System;

use super::potential::Potential;
use crate::error::{Error, Result};

/// Tolerance for `c s' - c' s = 1`.
pub const WRONSKIAN_TOL: f64 = 1e-10;

const ODE_RTOL: f64 = 1e-12;
const ODE_ATOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FundamentalValues {
    pub c: Complex64,
    pub s: Complex64,
    pub cp: Complex64,
    pub sp: Complex64,
}

impl FundamentalValues {
    pub fn wronskian(&self) -> Complex64 {
        self.c * self.sp - self.cp * self.s
    }

    /// Values at the identity: `c = s' = 1`, `s = c' = 0`.
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        FundamentalValues {
            c: one,
            s: zero,
            cp: zero,
            sp: one,
        }
    }

    /// Constant potential: the free solution at frequency `ω = √(λ - q)`.
    pub fn free(omega: Complex64, ell: f64) -> Self {
        let x = omega * ell;
        let c = x.cos();
        let s = Complex64::new(ell, 0.0) * sinc(x);
        FundamentalValues {
            c,
            s,
            cp: -omega * x.sin(),
            sp: c,
        }
    }
}

/// `sin(x)/x`, continuous at zero.
fn sinc(x: Complex64) -> Complex64 {
    if x.norm() < 1e-4 {
        let x2 = x * x;
        Complex64::new(1.0, 0.0) - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

pub fn fundamental_values(pot: &Potential, lambda: Complex64) -> Result<FundamentalValues> {
    match pot.constant_value() {
        Some(q) => Ok(FundamentalValues::free((lambda - q).sqrt(), pot.ell())),
        None => integrate(pot, lambda),
    }
}

/// A point `√λ = (θ + 2πn)/ℓ` of the sequences used by the scattering limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticePoint {
    pub theta: f64,
    pub n: u32,
    pub ell: f64,
}

impl LatticePoint {
    pub fn sqrt_lambda(&self) -> f64 {
        (self.theta + 2.0 * PI * self.n as f64) / self.ell
    }

    pub fn lambda(&self) -> f64 {
        self.sqrt_lambda().powi(2)
    }
}

/// Same as [`fundamental_values`] at `λ = k²`, `k = (θ + 2πn)/ℓ`, but for
/// constant potentials the phase `ωℓ` is reduced modulo `2π` before any
/// trigonometric call, so large `n` costs no accuracy.
pub fn fundamental_at_lattice(pot: &Potential, pt: LatticePoint) -> Result<FundamentalValues> {
    let k = pt.sqrt_lambda();
    let ell = pot.ell();
    match pot.constant_value() {
        Some(q) if pt.n > 0 && k * k > q => {
            let omega = (k * k - q).sqrt();
            // ωℓ - kℓ written without cancellation.
            let delta = ell * (-q) / (omega + k);
            let phase = pt.theta + delta;
            let (sin, cos) = phase.sin_cos();
            Ok(FundamentalValues {
                c: cos.into(),
                s: (sin / omega).into(),
                cp: (-omega * sin).into(),
                sp: cos.into(),
            })
        }
        _ => fundamental_values(pot, Complex64::new(k * k, 0.0)),
    }
}

/// `sin(kℓ)` at a lattice point, without the `2πn` part.
pub fn lattice_sin(pt: LatticePoint) -> f64 {
    pt.theta.sin()
}

type State = SVector<f64, 9>;

/// One grid cell of a sampled potential, where it is linear.
/// The state holds `(c, c'/w, s·w, s')` as real and imaginary parts; the
/// scale `w` keeps all four components of order one at large `|λ|`. The last
/// component carries `x` itself: the solver mishandles the time argument of
/// non-autonomous systems, so the system is made autonomous.
struct Cell {
    x0: f64,
    q0: f64,
    slope: f64,
    lambda: Complex64,
    w: f64,
}

impl System<f64, State> for Cell {
    fn system(&self, _x: f64, y: &State, dy: &mut State) {
        let q = self.q0 + self.slope * (y[8] - self.x0);
        dy[8] = 1.0;
        let k = Complex64::new(q, 0.0) - self.lambda;
        for (u, v) in [(0, 2), (4, 6)] {
            let f = Complex64::new(y[u], y[u + 1]);
            let g = Complex64::new(y[v], y[v + 1]);
            // f' = w g, g' = (q - λ) f / w
            let df = g * self.w;
            let dg = k * f / self.w;
            dy[u] = df.re;
            dy[u + 1] = df.im;
            dy[v] = dg.re;
            dy[v + 1] = dg.im;
        }
    }
}

fn integrate(pot: &Potential, lambda: Complex64) -> Result<FundamentalValues> {
    let Potential::Sampled { ell, values } = pot else {
        unreachable!("only sampled potentials are integrated")
    };
    let n = values.len();
    let h = ell / (n - 1) as f64;
    let w = lambda.norm().sqrt().max(1.0);
    let mut y = State::zeros();
    y[0] = 1.0; // c
    y[6] = 1.0; // s'
    for i in 0..n - 1 {
        let x0 = i as f64 * h;
        let x1 = if i == n - 2 { *ell } else { x0 + h };
        let cell = Cell {
            x0,
            q0: values[i],
            slope: (values[i + 1] - values[i]) / h,
            lambda,
            w,
        };
        y[8] = x0;
        let mut solver = Dop853::from_param(
            cell,
            x0,
            x1,
            x1 - x0,
            y,
            ODE_RTOL,
            ODE_ATOL,
            0.9,
            0.0,
            0.333,
            6.0,
            x1 - x0,
            0.0,
            1_000_000,
            u32::MAX,
            OutputType::Sparse,
        );
        solver.integrate().map_err(|_| Error::IntegrationTolerance)?;
        y = *solver.y_out().last().ok_or(Error::IntegrationTolerance)?;
    }
    let fv = FundamentalValues {
        c: Complex64::new(y[0], y[1]),
        cp: Complex64::new(y[2], y[3]) * w,
        s: Complex64::new(y[4], y[5]) / w,
        sp: Complex64::new(y[6], y[7]),
    };
    let scale = 1.0 + (fv.c * fv.sp).norm() + (fv.cp * fv.s).norm();
    if (fv.wronskian() - 1.0).norm() > 1e-9 * scale {
        return Err(Error::IntegrationTolerance);
    }
    Ok(fv)
}
