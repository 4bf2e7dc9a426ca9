use crate::error::{Error, Result};
use crate::tensor::{Mat3, QTensor, Vec3};

use super::PeriodicGrid;

/// `N` real components sampled on a periodic grid, stored component-major.
///
/// Tensor fields pack a symmetric traceless tensor into the five components
/// (Q11, Q12, Q13, Q22, Q23); Q33 is implied, so the structure is exact.
/// Matrix fields store nine row-major components.
#[derive(Debug, Clone, PartialEq)]
pub struct Field<const N: usize> {
    grid: PeriodicGrid,
    comps: [Vec<f64>; N],
}

pub type ScalarField = Field<1>;
pub type VectorField = Field<3>;
pub type TensorField = Field<5>;
pub type Mat3Field = Field<9>;

impl<const N: usize> Field<N> {
    pub fn zeros(grid: PeriodicGrid) -> Self {
        let n = grid.len();
        Field { grid, comps: std::array::from_fn(|_| vec![0.0; n]) }
    }

    pub fn from_comps(grid: PeriodicGrid, comps: [Vec<f64>; N]) -> Self {
        assert!(comps.iter().all(|c| c.len() == grid.len()), "component length mismatch");
        Field { grid, comps }
    }

    pub fn from_fn(grid: PeriodicGrid, mut f: impl FnMut(f64, f64) -> [f64; N]) -> Self {
        let mut out = Self::zeros(grid);
        for idx in 0..grid.len() {
            let (x, y) = grid.coords(idx);
            out.set_point(idx, f(x, y));
        }
        out
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn comp(&self, c: usize) -> &[f64] {
        &self.comps[c]
    }

    pub fn comp_mut(&mut self, c: usize) -> &mut Vec<f64> {
        &mut self.comps[c]
    }

    pub fn comps(&self) -> &[Vec<f64>; N] {
        &self.comps
    }

    pub fn point(&self, idx: usize) -> [f64; N] {
        std::array::from_fn(|c| self.comps[c][idx])
    }

    pub fn set_point(&mut self, idx: usize, p: [f64; N]) {
        for (c, x) in p.into_iter().enumerate() {
            self.comps[c][idx] = x;
        }
    }

    pub fn map_comps(&self, mut f: impl FnMut(&[f64]) -> Vec<f64>) -> Self {
        Field { grid: self.grid, comps: std::array::from_fn(|c| f(&self.comps[c])) }
    }

    pub fn map_points<const M: usize>(&self, mut f: impl FnMut([f64; N]) -> [f64; M]) -> Field<M> {
        let mut out = Field::<M>::zeros(self.grid);
        for idx in 0..self.len() {
            out.set_point(idx, f(self.point(idx)));
        }
        out
    }

    pub fn same_grid<const M: usize>(&self, other: &Field<M>) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    fn zip(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        Field {
            grid: self.grid,
            comps: std::array::from_fn(|c| self.comps[c].iter().zip(&other.comps[c]).map(|(a, b)| f(*a, *b)).collect()),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    /// self + s * other
    pub fn axpy(&self, s: f64, other: &Self) -> Self {
        self.zip(other, |a, b| a + s * b)
    }

    pub fn scaled(&self, s: f64) -> Self {
        self.map_comps(|c| c.iter().map(|x| x * s).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.comps.iter().flatten().all(|x| x.is_finite())
    }

    /// Component-wise Euclidean quadrature, the metric for scalar, vector and
    /// matrix fields.
    fn plain_inner(&self, other: &Self) -> f64 {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        let mut s = 0.0;
        for c in 0..N {
            for (a, b) in self.comps[c].iter().zip(&other.comps[c]) {
                s += a * b;
            }
        }
        s * self.grid.weight()
    }
}

macro_rules! plain_metric {
    ($n:literal) => {
        impl Field<$n> {
            /// Quadrature inner product over the cell.
            pub fn inner(&self, other: &Self) -> f64 {
                self.plain_inner(other)
            }

            pub fn l2_norm(&self) -> f64 {
                self.inner(self).sqrt()
            }

            /// (||f||^2 + ||grad f||^2)^(1/2).
            pub fn h1_norm(&self, ctx: &super::DiffContext) -> Result<f64> {
                let (gx, gy) = ctx.gradient(self)?;
                Ok((self.inner(self) + gx.inner(&gx) + gy.inner(&gy)).sqrt())
            }
        }
    };
}

plain_metric!(1);
plain_metric!(3);
plain_metric!(9);

impl Field<5> {
    pub fn from_q_fn(grid: PeriodicGrid, mut f: impl FnMut(f64, f64) -> QTensor) -> Self {
        Self::from_fn(grid, |x, y| f(x, y).pack())
    }

    pub fn q(&self, idx: usize) -> QTensor {
        QTensor::unpack(&self.point(idx))
    }

    pub fn set_q(&mut self, idx: usize, q: &QTensor) {
        self.set_point(idx, q.pack());
    }

    pub fn map_q(&self, mut f: impl FnMut(usize, QTensor) -> QTensor) -> Self {
        let mut out = Self::zeros(self.grid);
        for idx in 0..self.len() {
            out.set_q(idx, &f(idx, self.q(idx)));
        }
        out
    }

    /// Frobenius inner product integrated over the cell.
    pub fn inner(&self, other: &Self) -> f64 {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        let mut s = 0.0;
        for idx in 0..self.len() {
            let a = self.point(idx);
            let b = other.point(idx);
            s += a[0] * b[0]
                + a[3] * b[3]
                + (a[0] + a[3]) * (b[0] + b[3])
                + 2.0 * (a[1] * b[1] + a[2] * b[2] + a[4] * b[4]);
        }
        s * self.grid.weight()
    }

    pub fn l2_norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    pub fn h1_norm(&self, ctx: &super::DiffContext) -> Result<f64> {
        let (gx, gy) = ctx.gradient(self)?;
        Ok((self.inner(self) + gx.inner(&gx) + gy.inner(&gy)).sqrt())
    }

    /// Largest pointwise Frobenius norm.
    pub fn max_norm(&self) -> f64 {
        (0..self.len()).map(|i| self.q(i).norm()).fold(0.0, f64::max)
    }
}

impl Field<3> {
    pub fn vec3(&self, idx: usize) -> Vec3 {
        self.point(idx)
    }

    pub fn set_vec3(&mut self, idx: usize, v: Vec3) {
        self.set_point(idx, v);
    }
}

impl Field<9> {
    pub fn mat(&self, idx: usize) -> Mat3 {
        let p = self.point(idx);
        Mat3::from_fn(|i, j| p[3 * i + j])
    }

    pub fn set_mat(&mut self, idx: usize, m: &Mat3) {
        self.set_point(idx, std::array::from_fn(|k| m.0[k / 3][k % 3]));
    }

    pub fn map_mat(&self, mut f: impl FnMut(Mat3) -> Mat3) -> Self {
        let mut out = Self::zeros(self.grid);
        for idx in 0..self.len() {
            out.set_mat(idx, &f(self.mat(idx)));
        }
        out
    }
}
