//! Fourier-diagonal linear parts shared by both solvers.
//!
//! An oscillator pair (x, y) with dx/dt = y and dy/dt = g(k) x - m y, where
//! g(k) = g0 - g1 |k|^2, and a viscous block dv/dt = -nu |k|^2 v.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{DiffContext, Field};

#[derive(Debug, Clone, Copy)]
pub(crate) struct Pair {
    pub g0: f64,
    pub g1: f64,
    pub m: f64,
}

impl Pair {
    /// A applied in physical space: (y, g0 x + g1 Lap x - m y).
    pub fn apply<const N: usize>(&self, ctx: &DiffContext, x: &Field<N>, y: &Field<N>) -> Result<(Field<N>, Field<N>)> {
        let lap = ctx.laplacian(x)?;
        let ay = x.scaled(self.g0).axpy(self.g1, &lap).axpy(-self.m, y);
        Ok((y.clone(), ay))
    }

    /// Smallest determinant of I - cA over the modes of the grid.
    pub fn min_det(&self, ctx: &DiffContext, c: f64) -> f64 {
        // det = 1 + cm - c^2 (g0 - g1 k^2) is smallest at k = 0 when g1 >= 0
        let g = if self.g1 >= 0.0 {
            self.g0
        } else {
            let (kx, ky) = (0..ctx.grid().len()).map(|i| ctx.wavenumber(i)).fold((0.0, 0.0), |a, b| {
                if b.0 * b.0 + b.1 * b.1 > a.0 * a.0 + a.1 * a.1 {
                    b
                } else {
                    a
                }
            });
            self.g0 - self.g1 * (kx * kx + ky * ky)
        };
        1.0 + c * self.m - c * c * g
    }

    /// Solves (I - cA)(X, Y) = (x, y) mode by mode.
    pub fn solve<const N: usize>(
        &self,
        ctx: &DiffContext,
        x: &Field<N>,
        y: &Field<N>,
        c: f64,
    ) -> Result<(Field<N>, Field<N>)> {
        let det_min = self.min_det(ctx, c);
        if !(det_min > 0.1) {
            return Err(Error::StiffnessViolation { dt: c, bound: f64::NAN });
        }
        let mut ox = Field::<N>::zeros(*ctx.grid());
        let mut oy = Field::<N>::zeros(*ctx.grid());
        for comp in 0..N {
            let sx = ctx.forward(x.comp(comp));
            let sy = ctx.forward(y.comp(comp));
            let mut rx = vec![Complex64::new(0.0, 0.0); sx.len()];
            let mut ry = rx.clone();
            for idx in 0..sx.len() {
                let (kx, ky) = ctx.wavenumber(idx);
                let g = self.g0 - self.g1 * (kx * kx + ky * ky);
                let det = 1.0 + c * self.m - c * c * g;
                rx[idx] = (sx[idx] * (1.0 + c * self.m) + sy[idx] * c) / det;
                ry[idx] = (sx[idx] * (c * g) + sy[idx]) / det;
            }
            *ox.comp_mut(comp) = ctx.inverse(&rx);
            *oy.comp_mut(comp) = ctx.inverse(&ry);
        }
        Ok((ox, oy))
    }
}

/// Solves (I - c nu Lap) X = x.
pub(crate) fn solve_diffusion<const N: usize>(ctx: &DiffContext, x: &Field<N>, nu: f64, c: f64) -> Result<Field<N>> {
    if nu == 0.0 {
        return Ok(x.clone());
    }
    let mut out = Field::<N>::zeros(*ctx.grid());
    for comp in 0..N {
        let mut s = ctx.forward(x.comp(comp));
        for (idx, z) in s.iter_mut().enumerate() {
            let (kx, ky) = ctx.wavenumber(idx);
            *z /= 1.0 + c * nu * (kx * kx + ky * ky);
        }
        *out.comp_mut(comp) = ctx.inverse(&s);
    }
    Ok(out)
}
