//! Landau-de Gennes energetics: bulk potential, its gradient T, the linearized
//! operator H_n with its inverse, the kernel projections, and the field-level
//! elastic operator, distortion stress and molecular field.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{DiffContext, Mat3Field, TensorField};
use crate::tensor::{sym_traceless, Director, Mat3, QTensor};
use crate::tolerance::TOL;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BulkParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElasticParams {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
}

impl ElasticParams {
    /// L1 > 0 and L1 + L2 + L3 > 0.
    pub fn is_admissible(&self) -> bool {
        self.l1 > 0.0 && self.l1 + self.l2 + self.l3 > 0.0
    }
}

/// Roots of 2c s^2 - b s - 3a = 0, larger first.
pub fn critical_s(bp: &BulkParams) -> Result<(f64, f64)> {
    if !(bp.c > 0.0) {
        return Err(Error::DegenerateBulk(format!("c must be positive (c = {})", bp.c)));
    }
    let r = (bp.b * bp.b + 24.0 * bp.a * bp.c).sqrt();
    Ok(((bp.b + r) / (4.0 * bp.c), (bp.b - r) / (4.0 * bp.c)))
}

/// The stable root s1.
pub fn s1(bp: &BulkParams) -> Result<f64> {
    Ok(critical_s(bp)?.0)
}

/// T(Q) = -aQ - bQ^2 + c|Q|^2 Q + (b/3)|Q|^2 Id.
pub fn bulk_gradient(q: &QTensor, bp: &BulkParams) -> QTensor {
    let q2 = sym_traceless(&q.dot(q));
    q.scale(-bp.a + bp.c * q.norm_sq()) - q2.scale(bp.b)
}

/// -a/2 tr Q^2 - b/3 tr Q^3 + c/4 (tr Q^2)^2.
pub fn bulk_energy(q: &QTensor, bp: &BulkParams) -> f64 {
    let t2 = q.norm_sq();
    let t3 = q.dot(q).dot(q.mat()).trace();
    -0.5 * bp.a * t2 - bp.b / 3.0 * t3 + 0.25 * bp.c * t2 * t2
}

/// Q - (nnQ + Qnn) + (2/3)(Q:nn) Id.
fn transverse_bracket(nn: &Mat3, q: &QTensor) -> (Mat3, f64) {
    let qn = q.mat().ddot(nn);
    let m = *q.mat() - (nn.dot(q.mat()) + q.mat().dot(nn)) + Mat3::IDENTITY.scale(2.0 / 3.0 * qn);
    (m, qn)
}

fn dev_nn(nn: &Mat3) -> Mat3 {
    *nn - Mat3::IDENTITY.scale(1.0 / 3.0)
}

/// H_n(Q), the linearization of T at s1 (nn - Id/3).
pub fn hn_apply(n: &Director, q: &QTensor, bp: &BulkParams) -> Result<QTensor> {
    let s = s1(bp)?;
    Ok(hn_apply_s(n, q, bp, s))
}

pub(crate) fn hn_apply_s(n: &Director, q: &QTensor, bp: &BulkParams, s: f64) -> QTensor {
    let nn = n.nn();
    let (m, qn) = transverse_bracket(&nn, q);
    sym_traceless(&(m.scale(bp.b * s) + dev_nn(&nn).scale(2.0 * bp.c * s * s * qn)))
}

/// H_n^{-1} on (Ker H_n)^perp. The input is projected with P^out first; the
/// call fails if that discards more than the range tolerance (relative).
pub fn hn_inverse(n: &Director, q_perp: &QTensor, bp: &BulkParams) -> Result<QTensor> {
    Ok(hn_inverse_report(n, q_perp, bp)?.0)
}

/// Like `hn_inverse`, also returning the relative norm discarded by the projection.
pub fn hn_inverse_report(n: &Director, q_perp: &QTensor, bp: &BulkParams) -> Result<(QTensor, f64)> {
    let s = s1(bp)?;
    let pole = 4.0 * bp.c * s - bp.b;
    if pole.abs() < TOL.pole * bp.b.max(bp.c * s) || bp.b * s == 0.0 {
        return Err(Error::DegenerateBulk(format!("bs(4cs - b) vanishes (b = {}, s = {s})", bp.b)));
    }
    let p = project_out(n, q_perp);
    let total = q_perp.norm();
    let discarded = if total > 0.0 { (*q_perp - p).norm() / total } else { 0.0 };
    if discarded > TOL.range {
        return Err(Error::NotInRange(discarded));
    }
    Ok((hn_inverse_s(n, &p, bp, s), discarded))
}

pub(crate) fn hn_inverse_s(n: &Director, q: &QTensor, bp: &BulkParams, s: f64) -> QTensor {
    let nn = n.nn();
    let (m, qn) = transverse_bracket(&nn, q);
    let k = (4.0 * bp.b + 2.0 * bp.c * s) / (bp.b * s * (4.0 * bp.c * s - bp.b));
    sym_traceless(&(m.scale(1.0 / (bp.b * s)) + dev_nn(&nn).scale(k * qn)))
}

/// P^in(Q) = (nnQ + Qnn) - 2(Q:nn) nn.
pub fn project_in(n: &Director, q: &QTensor) -> QTensor {
    let nn = n.nn();
    let qn = q.mat().ddot(&nn);
    sym_traceless(&(nn.dot(q.mat()) + q.mat().dot(&nn) - nn.scale(2.0 * qn)))
}

pub fn project_out(n: &Director, q: &QTensor) -> QTensor {
    *q - project_in(n, q)
}

/// In-plane derivatives of a tensor field as full matrices, `d[k]` = d_k Q at
/// every point (d_z Q = 0).
pub(crate) struct TensorGradient {
    pub dx: TensorField,
    pub dy: TensorField,
}

impl TensorGradient {
    pub fn new(q: &TensorField, ctx: &DiffContext) -> Result<Self> {
        let (dx, dy) = ctx.gradient(q)?;
        Ok(TensorGradient { dx, dy })
    }

    pub fn at(&self, idx: usize) -> [Mat3; 3] {
        [*self.dx.q(idx).mat(), *self.dy.q(idx).mat(), Mat3::ZERO]
    }
}

/// Pointwise elastic density 1/2 (L1 |grad Q|^2 + L2 Q_ij,j Q_ik,k + L3 Q_ij,k Q_ik,j).
pub(crate) fn elastic_density(d: &[Mat3; 3], ep: &ElasticParams) -> f64 {
    let mut grad2 = 0.0;
    for dk in d {
        grad2 += dk.norm_sq();
    }
    let mut div2 = 0.0;
    for i in 0..3 {
        let di: f64 = (0..3).map(|j| d[j].0[i][j]).sum();
        div2 += di * di;
    }
    let mut cross = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                cross += d[k].0[i][j] * d[j].0[i][k];
            }
        }
    }
    0.5 * (ep.l1 * grad2 + ep.l2 * div2 + ep.l3 * cross)
}

/// Integral of the elastic density over the cell.
pub fn elastic_energy(qf: &TensorField, ep: &ElasticParams, ctx: &DiffContext) -> Result<f64> {
    let g = TensorGradient::new(qf, ctx)?;
    let mut s = 0.0;
    for idx in 0..qf.len() {
        s += elastic_density(&g.at(idx), ep);
    }
    Ok(s * qf.grid().weight())
}

/// L(Q)_kl = -(L1 Lap Q_kl + 1/2 (L2+L3)(Q_km,ml + Q_lm,mk - 2/3 delta_kl Q_ij,ij)).
pub fn elastic_operator(qf: &TensorField, ep: &ElasticParams, ctx: &DiffContext) -> Result<TensorField> {
    let lap = ctx.laplacian(qf)?;
    let l23 = ep.l2 + ep.l3;
    if l23 == 0.0 {
        return Ok(lap.scaled(-ep.l1));
    }
    let g = TensorGradient::new(qf, ctx)?;
    // d_k = Q_km,m
    let mut div = crate::spectral::VectorField::zeros(*qf.grid());
    for idx in 0..qf.len() {
        let d = g.at(idx);
        div.set_vec3(idx, std::array::from_fn(|k| d[0].0[k][0] + d[1].0[k][1]));
    }
    let (ddx, ddy) = ctx.gradient(&div)?;
    Ok(lap.map_q(|idx, lq| {
        let a = ddx.vec3(idx);
        let b = ddy.vec3(idx);
        // m_kl = d_l d_k
        let m = Mat3::from_fn(|k, l| match l {
            0 => a[k],
            1 => b[k],
            _ => 0.0,
        });
        -(lq.scale(ep.l1) + sym_traceless(&m).scale(l23))
    }))
}

/// sigma^d_ji(Q, Qbar) = -(L1 Q_kl,j Qbar_kl,i + L2 Q_km,m Qbar_kj,i + L3 Q_kj,l Qbar_kl,i),
/// stored with `j` as the row index.
pub fn distortion_stress(
    qf: &TensorField,
    qbar: &TensorField,
    ep: &ElasticParams,
    ctx: &DiffContext,
) -> Result<Mat3Field> {
    qf.same_grid(qbar)?;
    let g = TensorGradient::new(qf, ctx)?;
    let gb = TensorGradient::new(qbar, ctx)?;
    let mut out = Mat3Field::zeros(*qf.grid());
    for idx in 0..qf.len() {
        out.set_mat(idx, &distortion_stress_point(&g.at(idx), &gb.at(idx), ep));
    }
    Ok(out)
}

pub(crate) fn distortion_stress_point(d: &[Mat3; 3], db: &[Mat3; 3], ep: &ElasticParams) -> Mat3 {
    let div: [f64; 3] = std::array::from_fn(|k| (0..3).map(|m| d[m].0[k][m]).sum());
    Mat3::from_fn(|j, i| {
        let t1 = d[j].ddot(&db[i]);
        let t2: f64 = (0..3).map(|k| div[k] * db[i].0[k][j]).sum();
        let mut t3 = 0.0;
        for k in 0..3 {
            for l in 0..3 {
                t3 += d[l].0[k][j] * db[i].0[k][l];
            }
        }
        -(ep.l1 * t1 + ep.l2 * t2 + ep.l3 * t3)
    })
}

/// H^eps(Q) = -T(Q)/eps - L(Q).
pub fn molecular_field(
    qf: &TensorField,
    bp: &BulkParams,
    ep: &ElasticParams,
    eps: f64,
    ctx: &DiffContext,
) -> Result<TensorField> {
    if !(eps > 0.0) {
        return Err(Error::BadEpsilon(eps));
    }
    let l = elastic_operator(qf, ep, ctx)?;
    Ok(l.map_q(|idx, lq| -(bulk_gradient(&qf.q(idx), bp).scale(1.0 / eps) + lq)))
}

/// F_eps = (1/eps) int f_b + int f_e.
pub fn free_energy(qf: &TensorField, bp: &BulkParams, ep: &ElasticParams, eps: f64, ctx: &DiffContext) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::BadEpsilon(eps));
    }
    let bulk: f64 = (0..qf.len()).map(|i| bulk_energy(&qf.q(i), bp)).sum::<f64>() * qf.grid().weight();
    Ok(bulk / eps + elastic_energy(qf, ep, ctx)?)
}

/// Field version of `frobenius` against the uniaxial kernel basis, used by callers
/// that need P^out pointwise with a director field.
pub fn project_out_field(nf: &crate::spectral::VectorField, q: &TensorField) -> Result<TensorField> {
    nf.same_grid(q)?;
    let mut out = TensorField::zeros(*q.grid());
    for idx in 0..q.len() {
        let n = Director::normalized(nf.vec3(idx))?;
        out.set_q(idx, &project_out(&n, &q.q(idx)));
    }
    Ok(out)
}

pub fn project_in_field(nf: &crate::spectral::VectorField, q: &TensorField) -> Result<TensorField> {
    Ok(q.sub(&project_out_field(nf, q)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::PeriodicGrid;
    use crate::tensor::{cross, frobenius, uniaxial};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const ONE: BulkParams = BulkParams { a: 1.0, b: 1.0, c: 1.0 };

    fn rand_q(rng: &mut impl Rng) -> QTensor {
        QTensor::unpack(&std::array::from_fn(|_| rng.gen_range(-1.0..1.0)))
    }

    fn rand_n(rng: &mut impl Rng) -> Director {
        Director::normalized(std::array::from_fn(|_| rng.gen_range(-1.0..1.0))).unwrap()
    }

    #[test]
    fn critical_s_examples() {
        let (a, b) = critical_s(&ONE).unwrap();
        assert!((a - 1.5).abs() < 1e-15 && (b + 1.0).abs() < 1e-15);
        let (a, b) = critical_s(&BulkParams { a: 0.0, b: 1.0, c: 1.0 }).unwrap();
        assert!((a - 0.5).abs() < 1e-15 && b.abs() < 1e-15);
        assert!(matches!(critical_s(&BulkParams { a: 1.0, b: 1.0, c: 0.0 }), Err(Error::DegenerateBulk(_))));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..200 {
            let bp = BulkParams { a: rng.gen_range(0.0..3.0), b: rng.gen_range(0.0..3.0), c: rng.gen_range(0.1..3.0) };
            let s = s1(&bp).unwrap();
            assert!((2.0 * bp.c * s * s - bp.b * s - 3.0 * bp.a).abs() < 1e-12);
            let t = bulk_gradient(&uniaxial(&rand_n(&mut rng), s), &bp);
            assert!(t.norm() < 1e-11);
        }
    }

    #[test]
    fn bulk_examples() {
        assert_eq!(bulk_gradient(&QTensor::ZERO, &ONE).norm(), 0.0);
        let q = uniaxial(&Director::e(0), 1.0);
        let t = bulk_gradient(&q, &BulkParams { a: 1.0, b: 0.0, c: 0.0 });
        assert!((t + q).norm() < 1e-15);
        assert!((bulk_energy(&q, &ONE) - (-1.0 / 3.0 - 2.0 / 27.0 + 1.0 / 9.0)).abs() < 1e-15);
        assert!((bulk_energy(&uniaxial(&Director::e(2), 1.5), &ONE) + 0.4375).abs() < 1e-14);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let bp = BulkParams { a: 0.7, b: 1.3, c: 0.9 };
        for _ in 0..100 {
            let q = rand_q(&mut rng);
            let d = rand_q(&mut rng);
            let fd = |h: f64| (bulk_energy(&(q + d.scale(h)), &bp) - bulk_energy(&(q - d.scale(h)), &bp)) / (2.0 * h);
            let exact = frobenius(&bulk_gradient(&q, &bp), &d);
            let e1 = (fd(1e-2) - exact).abs();
            let e2 = (fd(5e-3) - exact).abs();
            assert!((fd(1e-4) - exact).abs() <= 1e-5 * exact.abs().max(1e-3));
            if e1 > 1e-9 {
                assert!((e1 / e2 - 4.0).abs() < 0.1, "ratio {}", e1 / e2);
            }
        }
    }

    #[test]
    fn hn_examples() {
        let q = uniaxial(&Director::e(0), 1.0);
        let h = hn_apply(&Director::e(0), &q, &ONE).unwrap();
        assert!((h - q.scale(2.5)).norm() < 1e-14);
        let inv = hn_inverse(&Director::e(0), &q, &ONE).unwrap();
        assert!((inv - q.scale(0.4)).norm() < 1e-14);
        assert_eq!(hn_inverse(&Director::e(1), &QTensor::ZERO, &ONE).unwrap().norm(), 0.0);
        let kernel = sym_traceless(&(Mat3::outer(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).scale(2.0)));
        assert!(matches!(hn_inverse(&Director::e(0), &kernel, &ONE), Err(Error::NotInRange(_))));
    }

    #[test]
    fn hn_kernel_adjointness_coercivity_and_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut c0 = f64::INFINITY;
        for _ in 0..1000 {
            let n = rand_n(&mut rng);
            let m = cross(n.vec(), &std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
            let k = sym_traceless(&(Mat3::outer(n.vec(), &m).scale(2.0)));
            assert!(hn_apply(&n, &k, &ONE).unwrap().norm() < 1e-13);
            let p = rand_q(&mut rng);
            let q = rand_q(&mut rng);
            let hp = hn_apply(&n, &p, &ONE).unwrap();
            let hq = hn_apply(&n, &q, &ONE).unwrap();
            assert!((frobenius(&hp, &q) - frobenius(&p, &hq)).abs() < 1e-12);
            assert!(frobenius(&hq, &q) >= -1e-14);
            let qp = project_out(&n, &q);
            let hqp = hn_apply(&n, &qp, &ONE).unwrap();
            c0 = c0.min(frobenius(&hqp, &qp) / qp.norm_sq());
            let back = hn_inverse(&n, &hqp, &ONE).unwrap();
            assert!((back - qp).norm() < 1e-10);
            assert!((project_out(&n, &hqp) - hqp).norm() < 1e-13);
        }
        assert!(c0 > 1.49, "c0 = {c0}");
    }

    #[test]
    fn projection_algebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let n = rand_n(&mut rng);
            let q = rand_q(&mut rng);
            let p = rand_q(&mut rng);
            let pi = project_in(&n, &q);
            let po = project_out(&n, &q);
            assert!((project_in(&n, &pi) - pi).norm() < 1e-13);
            assert!((project_out(&n, &po) - po).norm() < 1e-13);
            assert!(project_in(&n, &po).norm() < 1e-13);
            assert!(frobenius(&project_in(&n, &q), &project_out(&n, &p)).abs() < 1e-13);
        }
        let k = sym_traceless(&(Mat3::outer(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).scale(2.0)));
        assert!(project_out(&Director::e(0), &k).norm() < 1e-16);
        let u = uniaxial(&Director::e(0), 1.0);
        assert!((project_out(&Director::e(0), &u) - u).norm() < 1e-15);
    }

    fn grid_ctx() -> DiffContext {
        DiffContext::new(PeriodicGrid::square(16).unwrap()).unwrap()
    }

    fn smooth_q(ctx: &DiffContext, seed: u64) -> TensorField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modes: Vec<(f64, f64, QTensor, f64)> = (0..4)
            .map(|_| {
                (rng.gen_range(-3..=3) as f64, rng.gen_range(-3..=3) as f64, rand_q(&mut rng), rng.gen_range(0.0..6.0))
            })
            .collect();
        TensorField::from_q_fn(*ctx.grid(), |x, y| {
            modes.iter().fold(QTensor::ZERO, |acc, (a, b, q, p)| acc + q.scale((a * x + b * y + p).sin()))
        })
    }

    #[test]
    fn elastic_energy_examples() {
        let ctx = grid_ctx();
        let g = *ctx.grid();
        let ep = ElasticParams { l1: 1.3, l2: 0.0, l3: 0.0 };
        let u = uniaxial(&Director::e(0), 1.0);
        let k = TensorField::from_q_fn(g, |_, _| u);
        assert!(elastic_energy(&k, &ep, &ctx).unwrap().abs() < 1e-14);
        assert!(elastic_operator(&k, &ep, &ctx).unwrap().max_abs() < 1e-13);
        let f = TensorField::from_q_fn(g, |x, _| u.scale(x.sin()));
        // (L1/2)(2/3) int cos^2 x = (L1/2)(2/3)(2 pi^2)
        let want = 0.5 * 1.3 * (2.0 / 3.0) * 2.0 * std::f64::consts::PI.powi(2);
        assert!((elastic_energy(&f, &ep, &ctx).unwrap() - want).abs() < 1e-12);
        let pw = TensorField::from_q_fn(g, |x, y| u.scale((2.0 * x - y).cos()));
        let lq = elastic_operator(&pw, &ep, &ctx).unwrap();
        assert!(lq.sub(&pw.scaled(1.3 * 5.0)).max_abs() < 1e-12);
    }

    #[test]
    fn elastic_positivity_and_adjointness() {
        let ctx = grid_ctx();
        let ep = ElasticParams { l1: 1.0, l2: -0.4, l3: -0.4 };
        for seed in 0..100 {
            let q = smooth_q(&ctx, seed);
            assert!(elastic_energy(&q, &ep, &ctx).unwrap() > 0.0);
        }
        let ep = ElasticParams { l1: 0.8, l2: 0.5, l3: -0.3 };
        let p = smooth_q(&ctx, 200);
        let q = smooth_q(&ctx, 201);
        let lp = elastic_operator(&p, &ep, &ctx).unwrap();
        let lq = elastic_operator(&q, &ep, &ctx).unwrap();
        assert!((lp.inner(&q) - p.inner(&lq)).abs() < 1e-10 * lp.inner(&q).abs().max(1.0));
        // <L(Q), Q> = 2 E(Q)
        assert!((lq.inner(&q) - 2.0 * elastic_energy(&q, &ep, &ctx).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn distortion_stress_symmetric_for_one_constant() {
        let ctx = grid_ctx();
        let q = smooth_q(&ctx, 7);
        let ep = ElasticParams { l1: 1.0, l2: 0.0, l3: 0.0 };
        let s = distortion_stress(&q, &q, &ep, &ctx).unwrap();
        for i in 0..q.len() {
            let m = s.mat(i);
            assert!((m - m.transpose()).max_abs() < 1e-12);
        }
        let k = TensorField::from_q_fn(*ctx.grid(), |_, _| uniaxial(&Director::e(1), 1.0));
        assert!(distortion_stress(&k, &k, &ep, &ctx).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn molecular_field_examples() {
        let ctx = grid_ctx();
        let ep = ElasticParams { l1: 1.0, l2: 0.2, l3: 0.1 };
        let q0 =
            TensorField::from_q_fn(*ctx.grid(), |_, _| uniaxial(&Director::normalized([1.0, 2.0, 0.5]).unwrap(), 1.5));
        assert!(molecular_field(&q0, &ONE, &ep, 0.1, &ctx).unwrap().max_abs() < 1e-11);
        let c = rand_q(&mut ChaCha8Rng::seed_from_u64(9));
        let qc = TensorField::from_q_fn(*ctx.grid(), |_, _| c);
        let h = molecular_field(&qc, &ONE, &ep, 1.0, &ctx).unwrap();
        assert!((h.q(5) + bulk_gradient(&c, &ONE)).norm() < 1e-13);
        assert!(matches!(molecular_field(&qc, &ONE, &ep, 0.0, &ctx), Err(Error::BadEpsilon(_))));
    }

    #[test]
    fn molecular_field_is_discrete_gradient() {
        let ctx = grid_ctx();
        let ep = ElasticParams { l1: 1.0, l2: 0.3, l3: -0.2 };
        let bp = BulkParams { a: 0.5, b: 1.0, c: 2.0 };
        let eps = 0.3;
        let q = smooth_q(&ctx, 11).scaled(0.5);
        let d = smooth_q(&ctx, 12);
        let h = molecular_field(&q, &bp, &ep, eps, &ctx).unwrap();
        let exact = -h.inner(&d);
        let fd = |s: f64| {
            (free_energy(&q.axpy(s, &d), &bp, &ep, eps, &ctx).unwrap()
                - free_energy(&q.axpy(-s, &d), &bp, &ep, eps, &ctx).unwrap())
                / (2.0 * s)
        };
        assert!((fd(1e-4) - exact).abs() <= 1e-5 * exact.abs());
        let r = (fd(1e-2) - exact).abs() / (fd(5e-3) - exact).abs();
        assert!((r - 4.0).abs() < 0.2, "ratio {r}");
    }
}
