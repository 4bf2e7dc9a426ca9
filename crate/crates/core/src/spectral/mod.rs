//! Periodic-grid fields and the FFT toolkit used for every spatial derivative.
//!
//! Conventions fixed here and used everywhere: `(grad v)_ij = d_i v_j` and
//! `(div sigma)_i = d_j sigma_ji`. Fields vary in x and y only, so `d_z = 0`.

mod field;
pub mod snapshot;

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{Mat3, Vec3};

pub use field::{Field, Mat3Field, ScalarField, TensorField, VectorField};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodicGrid {
    pub nx: usize,
    pub ny: usize,
    #[serde(default = "two_pi")]
    pub lx: f64,
    #[serde(default = "two_pi")]
    pub ly: f64,
}

fn two_pi() -> f64 {
    2.0 * PI
}

impl PeriodicGrid {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        let g = PeriodicGrid { nx, ny, lx, ly };
        g.validate()?;
        Ok(g)
    }

    /// n x n points on [0, 2pi)^2.
    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n, two_pi(), two_pi())
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 8 || self.ny < 8 || !self.nx.is_multiple_of(2) || !self.ny.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("nx, ny must be even and >= 8 (got {} x {})", self.nx, self.ny)));
        }
        if !(self.lx > 0.0 && self.ly > 0.0) || !self.lx.is_finite() || !self.ly.is_finite() {
            return Err(Error::InvalidGrid("cell lengths must be positive".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dx(&self) -> f64 {
        self.lx / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        self.ly / self.ny as f64
    }

    /// Quadrature weight of one grid point.
    pub fn weight(&self) -> f64 {
        self.dx() * self.dy()
    }

    pub fn volume(&self) -> f64 {
        self.lx * self.ly
    }

    /// Coordinates of flat index `idx` (row-major, x fastest).
    pub fn coords(&self, idx: usize) -> (f64, f64) {
        let ix = idx % self.nx;
        let iy = idx / self.nx;
        (ix as f64 * self.dx(), iy as f64 * self.dy())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Signed mode number of FFT bin `i` on an axis of `n` points.
fn mode(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// FFT plans, wavenumbers and the dealiasing mask for one grid. Shareable
/// across threads; scratch buffers are allocated per call.
#[derive(Clone)]
pub struct DiffContext {
    grid: PeriodicGrid,
    fx: Arc<dyn Fft<f64>>,
    fy: Arc<dyn Fft<f64>>,
    ix: Arc<dyn Fft<f64>>,
    iy: Arc<dyn Fft<f64>>,
    // derivative wavenumbers, Nyquist zeroed
    kx: Vec<f64>,
    ky: Vec<f64>,
    keep_x: Vec<bool>,
    keep_y: Vec<bool>,
}

impl std::fmt::Debug for DiffContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DiffContext").field("grid", &self.grid).finish()
    }
}

pub type Spectrum = Vec<Complex64>;

impl DiffContext {
    pub fn new(grid: PeriodicGrid) -> Result<Self> {
        grid.validate()?;
        let mut planner = FftPlanner::new();
        let (nx, ny) = (grid.nx, grid.ny);
        let wave = |n: usize, l: f64| -> Vec<f64> {
            (0..n).map(|i| if i == n / 2 { 0.0 } else { 2.0 * PI / l * mode(i, n) as f64 }).collect()
        };
        let keep = |n: usize| -> Vec<bool> { (0..n).map(|i| 3 * mode(i, n).unsigned_abs() < n as u64).collect() };
        Ok(DiffContext {
            grid,
            fx: planner.plan_fft_forward(nx),
            fy: planner.plan_fft_forward(ny),
            ix: planner.plan_fft_inverse(nx),
            iy: planner.plan_fft_inverse(ny),
            kx: wave(nx, grid.lx),
            ky: wave(ny, grid.ly),
            keep_x: keep(nx),
            keep_y: keep(ny),
        })
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn check<const N: usize>(&self, f: &Field<N>) -> Result<()> {
        if f.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    /// Derivative wavenumbers of flat spectral index `idx`.
    pub fn wavenumber(&self, idx: usize) -> (f64, f64) {
        (self.kx[idx % self.grid.nx], self.ky[idx / self.grid.nx])
    }

    pub fn in_band(&self, idx: usize) -> bool {
        self.keep_x[idx % self.grid.nx] && self.keep_y[idx / self.grid.nx]
    }

    fn transform(&self, buf: &mut [Complex64], inverse: bool) {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let (px, py) = if inverse { (&self.ix, &self.iy) } else { (&self.fx, &self.fy) };
        px.process(buf);
        let mut col = vec![Complex64::new(0.0, 0.0); ny];
        for ix in 0..nx {
            for iy in 0..ny {
                col[iy] = buf[iy * nx + ix];
            }
            py.process(&mut col);
            for iy in 0..ny {
                buf[iy * nx + ix] = col[iy];
            }
        }
    }

    pub fn forward(&self, data: &[f64]) -> Spectrum {
        let mut buf: Spectrum = data.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.transform(&mut buf, false);
        buf
    }

    pub fn inverse(&self, spec: &[Complex64]) -> Vec<f64> {
        let mut buf = spec.to_vec();
        self.transform(&mut buf, true);
        let norm = 1.0 / self.grid.len() as f64;
        buf.iter().map(|c| c.re * norm).collect()
    }

    fn symbol_apply(&self, data: &[f64], sym: impl Fn(f64, f64) -> Complex64) -> Vec<f64> {
        let mut s = self.forward(data);
        for (idx, c) in s.iter_mut().enumerate() {
            let (kx, ky) = self.wavenumber(idx);
            *c *= sym(kx, ky);
        }
        self.inverse(&s)
    }

    /// d/dx or d/dy of one component.
    pub fn partial_comp(&self, data: &[f64], axis: Axis) -> Vec<f64> {
        match axis {
            Axis::X => self.symbol_apply(data, |kx, _| Complex64::new(0.0, kx)),
            Axis::Y => self.symbol_apply(data, |_, ky| Complex64::new(0.0, ky)),
        }
    }

    /// (d/dx, d/dy) of one component with a single forward transform.
    pub fn grad_comp(&self, data: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let s = self.forward(data);
        let mut sx = s.clone();
        let mut sy = s;
        for idx in 0..sx.len() {
            let (kx, ky) = self.wavenumber(idx);
            sx[idx] *= Complex64::new(0.0, kx);
            sy[idx] *= Complex64::new(0.0, ky);
        }
        (self.inverse(&sx), self.inverse(&sy))
    }

    pub fn partial<const N: usize>(&self, f: &Field<N>, axis: Axis) -> Result<Field<N>> {
        self.check(f)?;
        Ok(f.map_comps(|c| self.partial_comp(c, axis)))
    }

    /// Both in-plane partials of every component.
    pub fn gradient<const N: usize>(&self, f: &Field<N>) -> Result<(Field<N>, Field<N>)> {
        self.check(f)?;
        let mut gx = Field::zeros(self.grid);
        let mut gy = Field::zeros(self.grid);
        for c in 0..N {
            let (a, b) = self.grad_comp(f.comp(c));
            *gx.comp_mut(c) = a;
            *gy.comp_mut(c) = b;
        }
        Ok((gx, gy))
    }

    /// Laplacian as the composition of the first-derivative symbols, so that
    /// it is exactly the adjoint square of `partial`.
    pub fn laplacian<const N: usize>(&self, f: &Field<N>) -> Result<Field<N>> {
        self.check(f)?;
        Ok(f.map_comps(|c| self.symbol_apply(c, |kx, ky| Complex64::new(-(kx * kx + ky * ky), 0.0))))
    }

    /// Zero every mode outside the 2/3-rule band.
    pub fn dealias<const N: usize>(&self, f: &Field<N>) -> Result<Field<N>> {
        self.check(f)?;
        Ok(f.map_comps(|c| {
            let mut s = self.forward(c);
            for (idx, z) in s.iter_mut().enumerate() {
                if !self.in_band(idx) {
                    *z = Complex64::new(0.0, 0.0);
                }
            }
            self.inverse(&s)
        }))
    }

    /// Product of two scalar fields with both factors and the result truncated
    /// to the 2/3 band.
    pub fn dealiased_product(&self, f: &ScalarField, g: &ScalarField) -> Result<ScalarField> {
        let f = self.dealias(f)?;
        let g = self.dealias(g)?;
        let p = Field::from_comps(self.grid, [f.comp(0).iter().zip(g.comp(0)).map(|(a, b)| a * b).collect()]);
        self.dealias(&p)
    }

    pub fn leray_project(&self, v: &VectorField) -> Result<VectorField> {
        self.check(v)?;
        let mut s: Vec<Spectrum> = (0..3).map(|c| self.forward(v.comp(c))).collect();
        for idx in 0..self.grid.len() {
            let (kx, ky) = self.wavenumber(idx);
            let k2 = kx * kx + ky * ky;
            if k2 == 0.0 {
                continue;
            }
            let kv = (s[0][idx] * kx + s[1][idx] * ky) / k2;
            s[0][idx] -= kv * kx;
            s[1][idx] -= kv * ky;
        }
        let mut out = VectorField::zeros(self.grid);
        for (c, sc) in s.iter().enumerate() {
            *out.comp_mut(c) = self.inverse(sc);
        }
        Ok(out)
    }

    /// (v . grad) f, with the product truncated to the 2/3 band.
    pub fn advect<const N: usize>(&self, v: &VectorField, f: &Field<N>) -> Result<Field<N>> {
        self.check(v)?;
        let raw = self.advect_raw(v, f)?;
        self.dealias(&raw)
    }

    /// (v . grad) f without truncation.
    pub fn advect_raw<const N: usize>(&self, v: &VectorField, f: &Field<N>) -> Result<Field<N>> {
        self.check(v)?;
        self.check(f)?;
        let (vx, vy) = (v.comp(0), v.comp(1));
        Ok(f.map_comps(|c| {
            let (dx, dy) = self.grad_comp(c);
            (0..c.len()).map(|i| vx[i] * dx[i] + vy[i] * dy[i]).collect()
        }))
    }

    /// `G_ij = d_i v_j` (third row zero).
    pub fn velocity_gradient(&self, v: &VectorField) -> Result<Mat3Field> {
        let (gx, gy) = self.gradient(v)?;
        let mut g = Mat3Field::zeros(self.grid);
        for j in 0..3 {
            *g.comp_mut(j) = gx.comp(j).to_vec();
            *g.comp_mut(3 + j) = gy.comp(j).to_vec();
        }
        Ok(g)
    }

    /// (D, Omega) = symmetric and antisymmetric parts of grad v.
    pub fn strain_and_vorticity(&self, v: &VectorField) -> Result<(Mat3Field, Mat3Field)> {
        let g = self.velocity_gradient(v)?;
        Ok((g.map_mat(|m| m.sym()), g.map_mat(|m| m.antisym())))
    }

    /// `(div sigma)_i = d_j sigma_ji`.
    pub fn div_tensor(&self, sigma: &Mat3Field) -> Result<VectorField> {
        self.check(sigma)?;
        let mut out = VectorField::zeros(self.grid);
        for i in 0..3 {
            let a = self.partial_comp(sigma.comp(i), Axis::X);
            let b = self.partial_comp(sigma.comp(3 + i), Axis::Y);
            *out.comp_mut(i) = a.iter().zip(&b).map(|(p, q)| p + q).collect();
        }
        Ok(out)
    }

    /// `d_x v_x + d_y v_y`.
    pub fn divergence(&self, v: &VectorField) -> Result<ScalarField> {
        self.check(v)?;
        let a = self.partial_comp(v.comp(0), Axis::X);
        let b = self.partial_comp(v.comp(1), Axis::Y);
        Ok(Field::from_comps(self.grid, [a.iter().zip(&b).map(|(p, q)| p + q).collect()]))
    }

    /// Spectral quadrature (1/(nx ny)) sum |f_k|^2 times the cell volume, for
    /// the Parseval check.
    pub fn spectral_l2_sq<const N: usize>(&self, f: &Field<N>) -> Result<f64> {
        self.check(f)?;
        let n = self.grid.len() as f64;
        let mut s = 0.0;
        for c in 0..N {
            s += self.forward(f.comp(c)).iter().map(|z| z.norm_sqr()).sum::<f64>();
        }
        Ok(s * self.grid.volume() / (n * n))
    }
}

/// Vector of in-plane partials (d_x, d_y, 0).
pub fn grad_vec(dx: f64, dy: f64) -> Vec3 {
    [dx, dy, 0.0]
}

/// Entry `(i, j)` of a row-major 3x3 packed into 9 components.
pub fn mat_index(i: usize, j: usize) -> usize {
    3 * i + j
}

pub fn mat_from_slice(p: &[f64; 9]) -> Mat3 {
    Mat3::from_fn(|i, j| p[3 * i + j])
}
