//! Pointwise algebra of 3x3 matrices, symmetric traceless tensors and directors.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::tolerance::TOL;

pub type Vec3 = [f64; 3];

pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub fn scale(a: &Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn axpy(y: &Vec3, s: f64, x: &Vec3) -> Vec3 {
    [y[0] + s * x[0], y[1] + s * x[1], y[2] + s * x[2]]
}

/// General 3x3 real matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const ZERO: Mat3 = Mat3([[0.0; 3]; 3]);
    pub const IDENTITY: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn from_fn(f: impl Fn(usize, usize) -> f64) -> Mat3 {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = f(i, j);
            }
        }
        Mat3(m)
    }

    pub fn outer(a: &Vec3, b: &Vec3) -> Mat3 {
        Mat3::from_fn(|i, j| a[i] * b[j])
    }

    pub fn diag(d: [f64; 3]) -> Mat3 {
        Mat3::from_fn(|i, j| if i == j { d[i] } else { 0.0 })
    }

    pub fn transpose(&self) -> Mat3 {
        Mat3::from_fn(|i, j| self.0[j][i])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn dot(&self, other: &Mat3) -> Mat3 {
        let a = &self.0;
        let b = &other.0;
        Mat3::from_fn(|i, j| a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j])
    }

    pub fn apply(&self, v: &Vec3) -> Vec3 {
        let a = &self.0;
        [
            a[0][0] * v[0] + a[0][1] * v[1] + a[0][2] * v[2],
            a[1][0] * v[0] + a[1][1] * v[1] + a[1][2] * v[2],
            a[2][0] * v[0] + a[2][1] * v[1] + a[2][2] * v[2],
        ]
    }

    /// A : B = A_ij B_ij.
    pub fn ddot(&self, other: &Mat3) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += self.0[i][j] * other.0[i][j];
            }
        }
        s
    }

    pub fn norm_sq(&self) -> f64 {
        self.ddot(self)
    }

    pub fn scale(&self, s: f64) -> Mat3 {
        Mat3::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn sym(&self) -> Mat3 {
        Mat3::from_fn(|i, j| 0.5 * (self.0[i][j] + self.0[j][i]))
    }

    pub fn antisym(&self) -> Mat3 {
        Mat3::from_fn(|i, j| 0.5 * (self.0[i][j] - self.0[j][i]))
    }

    /// Trace-free part m - tr(m)/3 Id (no symmetrization).
    pub fn deviatoric(&self) -> Mat3 {
        let t = self.trace() / 3.0;
        Mat3::from_fn(|i, j| self.0[i][j] - if i == j { t } else { 0.0 })
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()))
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, o: Mat3) -> Mat3 {
        Mat3::from_fn(|i, j| self.0[i][j] + o.0[i][j])
    }
}

impl AddAssign for Mat3 {
    fn add_assign(&mut self, o: Mat3) {
        for i in 0..3 {
            for j in 0..3 {
                self.0[i][j] += o.0[i][j];
            }
        }
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(self, o: Mat3) -> Mat3 {
        Mat3::from_fn(|i, j| self.0[i][j] - o.0[i][j])
    }
}

impl Neg for Mat3 {
    type Output = Mat3;
    fn neg(self) -> Mat3 {
        self.scale(-1.0)
    }
}

impl Mul<Mat3> for f64 {
    type Output = Mat3;
    fn mul(self, m: Mat3) -> Mat3 {
        m.scale(self)
    }
}

/// Symmetric traceless 3x3 tensor. Values built through the constructors below
/// are exactly symmetric; arithmetic keeps them symmetric and traceless up to roundoff.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QTensor(Mat3);

impl QTensor {
    pub const ZERO: QTensor = QTensor(Mat3::ZERO);

    /// Wrap a matrix that is already known to lie in S^3_0.
    pub fn from_mat_unchecked(m: Mat3) -> QTensor {
        QTensor(m)
    }

    pub fn mat(&self) -> &Mat3 {
        &self.0
    }

    pub fn entries(&self) -> [[f64; 3]; 3] {
        self.0 .0
    }

    /// Independent components (Q11, Q12, Q13, Q22, Q23).
    pub fn pack(&self) -> [f64; 5] {
        let m = &self.0 .0;
        [m[0][0], m[0][1], m[0][2], m[1][1], m[1][2]]
    }

    pub fn unpack(p: &[f64; 5]) -> QTensor {
        let q33 = -p[0] - p[3];
        QTensor(Mat3([[p[0], p[1], p[2]], [p[1], p[3], p[4]], [p[2], p[4], q33]]))
    }

    pub fn scale(&self, s: f64) -> QTensor {
        QTensor(self.0.scale(s))
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.norm_sq()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dot(&self, other: &QTensor) -> Mat3 {
        self.0.dot(&other.0)
    }

    /// Largest of the symmetry and trace residuals.
    pub fn structure_residual(&self) -> f64 {
        structure_residual(&self.0)
    }
}

impl Add for QTensor {
    type Output = QTensor;
    fn add(self, o: QTensor) -> QTensor {
        QTensor(self.0 + o.0)
    }
}

impl AddAssign for QTensor {
    fn add_assign(&mut self, o: QTensor) {
        self.0 += o.0;
    }
}

impl Sub for QTensor {
    type Output = QTensor;
    fn sub(self, o: QTensor) -> QTensor {
        QTensor(self.0 - o.0)
    }
}

impl Neg for QTensor {
    type Output = QTensor;
    fn neg(self) -> QTensor {
        self.scale(-1.0)
    }
}

impl Mul<QTensor> for f64 {
    type Output = QTensor;
    fn mul(self, q: QTensor) -> QTensor {
        q.scale(self)
    }
}

pub fn structure_residual(m: &Mat3) -> f64 {
    let mut r = m.trace().abs();
    for i in 0..3 {
        for j in 0..i {
            r = r.max((m.0[i][j] - m.0[j][i]).abs());
        }
    }
    r
}

/// Unit vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Director(Vec3);

impl Director {
    pub fn new(v: Vec3) -> Result<Director> {
        let dev = norm(&v) - 1.0;
        if dev.abs() > TOL.unit {
            return Err(Error::NonUnitDirector(dev));
        }
        Ok(Director(v))
    }

    /// Normalizes `v`; fails only for the zero vector.
    pub fn normalized(v: Vec3) -> Result<Director> {
        let l = norm(&v);
        if l == 0.0 || !l.is_finite() {
            return Err(Error::NonUnitDirector(-1.0));
        }
        Ok(Director(scale(&v, 1.0 / l)))
    }

    pub fn e(axis: usize) -> Director {
        let mut v = [0.0; 3];
        v[axis] = 1.0;
        Director(v)
    }

    pub fn vec(&self) -> &Vec3 {
        &self.0
    }

    pub fn nn(&self) -> Mat3 {
        Mat3::outer(&self.0, &self.0)
    }
}

/// (m + m^T)/2 - tr(m)/3 Id.
pub fn sym_traceless(m: &Mat3) -> QTensor {
    let t = m.trace() / 3.0;
    let mut s = m.sym();
    for i in 0..3 {
        s.0[i][i] -= t;
    }
    QTensor(s)
}

/// s (n n - Id/3).
pub fn uniaxial(n: &Director, s: f64) -> QTensor {
    let v = n.vec();
    QTensor(Mat3::from_fn(|i, j| s * (v[i] * v[j] - if i == j { 1.0 / 3.0 } else { 0.0 })))
}

pub fn frobenius(q1: &QTensor, q2: &QTensor) -> f64 {
    q1.0.ddot(&q2.0)
}

/// B(Q1,Q2) = Q1 Q2 + Q2^T Q1^T - (2/3)(Q1:Q2) Id.
pub fn bform(q1: &QTensor, q2: &QTensor) -> QTensor {
    let p = q1.0.dot(&q2.0);
    let t = (2.0 / 3.0) * frobenius(q1, q2);
    QTensor(Mat3::from_fn(|i, j| p.0[i][j] + p.0[j][i] - if i == j { t } else { 0.0 }))
}

/// C(Q1,Q2,Q3) = Q1 (Q2:Q3) + Q2 (Q1:Q3) + Q3 (Q1:Q2).
pub fn cform(q1: &QTensor, q2: &QTensor, q3: &QTensor) -> QTensor {
    q1.scale(frobenius(q2, q3)) + q2.scale(frobenius(q1, q3)) + q3.scale(frobenius(q1, q2))
}

pub fn commutator(a: &Mat3, b: &Mat3) -> Mat3 {
    a.dot(b) - b.dot(a)
}

/// 1 - 6 (tr Q^3)^2 / |Q|^6, zero at Q = 0.
pub fn biaxiality(q: &QTensor) -> f64 {
    let n2 = q.norm_sq();
    if n2 == 0.0 {
        return 0.0;
    }
    let t3 = q.dot(q).dot(&q.0).trace();
    (1.0 - 6.0 * t3 * t3 / (n2 * n2 * n2)).clamp(0.0, 1.0)
}
