//! Coefficient bridge: Leslie viscosities and Oseen-Frank constants from the
//! Q-tensor parameters, and dissipativity certificates for both models.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landau::{s1, BulkParams, ElasticParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViscosityParams {
    pub beta1: f64,
    pub beta4: f64,
    pub beta5: f64,
    pub beta6: f64,
    pub beta7: f64,
    pub mu1: f64,
    pub mu2: f64,
    /// Inertial density J.
    pub j: f64,
}

impl ViscosityParams {
    /// Builds a parameter set with mu2 = beta6 - beta5.
    pub fn with_parodi(beta1: f64, beta4: f64, beta5: f64, beta6: f64, beta7: f64, mu1: f64, j: f64) -> Self {
        ViscosityParams { beta1, beta4, beta5, beta6, beta7, mu1, mu2: beta6 - beta5, j }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeslieParams {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub alpha4: f64,
    pub alpha5: f64,
    pub alpha6: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    /// Director inertia I.
    pub inertia: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
}

impl LeslieParams {
    /// (beta1_hat, beta2_hat, beta3_hat) of the director energy law.
    pub fn dissipation_hats(&self) -> (f64, f64, f64) {
        let g = self.gamma2 * self.gamma2 / self.gamma1;
        (self.alpha1 + g, self.alpha4, self.alpha5 + self.alpha6 - g)
    }
}

/// Maps Q-tensor parameters to director parameters at s = s1.
///
/// The splay and bend constants are (2 L1 + L2 + L3) s^2: with this value the
/// elastic density of s(nn - Id/3) equals the Oseen-Frank density and the
/// distortion stress equals the Ericksen stress for any L2, L3.
pub fn map_leslie(vp: &ViscosityParams, bp: &BulkParams, ep: &ElasticParams) -> Result<LeslieParams> {
    let s = s1(bp)?;
    let s2 = s * s;
    let ViscosityParams { beta1, beta4, beta5, beta6, beta7, mu1, mu2, j } = *vp;
    let alpha2 = mu2 * s / 2.0 - mu1 * s2;
    let alpha3 = mu2 * s / 2.0 + mu1 * s2;
    let alpha5 = beta5 * s + beta7 * s2 / 3.0;
    let alpha6 = beta6 * s + beta7 * s2 / 3.0;
    let k13 = (2.0 * ep.l1 + ep.l2 + ep.l3) * s2;
    Ok(LeslieParams {
        alpha1: beta1 * s2,
        alpha2,
        alpha3,
        alpha4: beta4 - (beta5 + beta6) * s / 3.0 + 2.0 * beta7 * s2 / 9.0,
        alpha5,
        alpha6,
        gamma1: alpha3 - alpha2,
        gamma2: alpha6 - alpha5,
        inertia: 2.0 * j * s2,
        k1: k13,
        k2: 2.0 * ep.l1 * s2,
        k3: k13,
        k4: ep.l3 * s2,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clause {
    pub name: String,
    pub passed: bool,
    /// Signed headroom: positive when the clause holds with room to spare.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub model: String,
    pub passed: bool,
    pub clauses: Vec<Clause>,
    /// Informational ratio mu1 / J (no cutoff is imposed).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu1_over_j: Option<f64>,
}

impl Certificate {
    fn new(model: &str, clauses: Vec<Clause>) -> Self {
        Certificate { model: model.into(), passed: clauses.iter().all(|c| c.passed), clauses, mu1_over_j: None }
    }

    pub fn first_failure(&self) -> Option<&str> {
        self.clauses.iter().find(|c| !c.passed).map(|c| c.name.as_str())
    }
}

fn strict(name: &str, margin: f64) -> Clause {
    Clause { name: name.into(), passed: margin > 0.0, margin }
}

fn weak(name: &str, margin: f64) -> Clause {
    Clause { name: name.into(), passed: margin >= 0.0, margin }
}

/// Relative tolerance for the equality clauses.
const EQ_TOL: f64 = 1e-12;

/// Admissibility of the Q-tensor viscosities. Besides the stated conditions the
/// certificate checks beta6 - beta5 = mu2, on which the energy law relies.
pub fn check_qs_dissipative(vp: &ViscosityParams) -> Certificate {
    let mut clauses = vec![strict("beta1>0", vp.beta1), strict("beta4>0", vp.beta4), strict("mu1>0", vp.mu1)];
    let b = if vp.mu1 > 0.0 { vp.beta4 - vp.mu2 * vp.mu2 / (4.0 * vp.mu1) } else { f64::NEG_INFINITY };
    clauses.push(strict("beta4-mu2^2/(4mu1)>0", b));
    clauses.push(weak("beta7>=0", vp.beta7));
    let sum = vp.beta5 + vp.beta6;
    if vp.beta7 != 0.0 {
        clauses.push(strict("(beta5+beta6)^2<8beta7(beta4-mu2^2/(4mu1))", 8.0 * vp.beta7 * b - sum * sum));
    } else {
        let scale = vp.beta5.abs().max(vp.beta6.abs()).max(1.0);
        clauses.push(Clause { name: "beta5+beta6=0".into(), passed: sum.abs() <= EQ_TOL * scale, margin: -sum.abs() });
    }
    let parodi = vp.beta6 - vp.beta5 - vp.mu2;
    let scale = vp.beta5.abs().max(vp.beta6.abs()).max(vp.mu2.abs()).max(1.0);
    clauses.push(Clause {
        name: "beta6-beta5=mu2".into(),
        passed: parodi.abs() <= EQ_TOL * scale,
        margin: -parodi.abs(),
    });
    let mut cert = Certificate::new("qian-sheng", clauses);
    cert.mu1_over_j = Some(vp.mu1 / vp.j);
    cert
}

/// beta1_hat (n.D.n)^2 + beta2_hat |D|^2 + beta3_hat |D.n|^2.
pub fn quadratic_form_value(b1h: f64, b2h: f64, b3h: f64, n: &[f64; 3], d: &crate::tensor::Mat3) -> f64 {
    let dn = d.apply(n);
    let ndn = crate::tensor::dot(n, &dn);
    b1h * ndn * ndn + b2h * d.norm_sq() + b3h * crate::tensor::dot(&dn, &dn)
}

fn quadratic_clauses(b1h: f64, b2h: f64, b3h: f64) -> Vec<Clause> {
    vec![
        weak("b2hat>=0", b2h),
        weak("2b2hat+b3hat>=0", 2.0 * b2h + b3h),
        weak("1.5b2hat+b3hat+b1hat>=0", 1.5 * b2h + b3h + b1h),
    ]
}

/// True iff the director dissipation form is non-negative for all unit n and
/// symmetric traceless D.
pub fn check_quadratic_form(b1h: f64, b2h: f64, b3h: f64) -> bool {
    quadratic_clauses(b1h, b2h, b3h).iter().all(|c| c.passed)
}

pub fn check_el_dissipative(lp: &LeslieParams) -> Result<Certificate> {
    if lp.gamma1 == 0.0 {
        return Err(Error::DegenerateGamma(lp.gamma1));
    }
    let (b1, b2, b3) = lp.dissipation_hats();
    let mut clauses = vec![strict("gamma1>0", lp.gamma1)];
    clauses.extend(quadratic_clauses(b1, b2, b3));
    Ok(Certificate::new("ericksen-leslie", clauses))
}
