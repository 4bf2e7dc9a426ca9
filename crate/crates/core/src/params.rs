use serde::{Deserialize, Serialize};

use crate::bridge::{check_qs_dissipative, map_leslie, Certificate, LeslieParams, ViscosityParams};
use crate::error::{Error, Result};
use crate::landau::{s1, BulkParams, ElasticParams};

/// Everything the Q-tensor model needs: bulk and elastic constants,
/// viscosities with the inertial density, and the small parameter eps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialParams {
    pub bulk: BulkParams,
    pub elastic: ElasticParams,
    pub viscosity: ViscosityParams,
    pub eps: f64,
}

impl MaterialParams {
    /// The parameter set used throughout the examples: s1 = 1.5 and the
    /// Leslie table (2.25, -3, 6, 1, 1.5, 4.5), gamma1 = 9, gamma2 = 3, I = 0.45.
    pub fn demo(eps: f64) -> Self {
        MaterialParams {
            bulk: BulkParams { a: 1.0, b: 1.0, c: 1.0 },
            elastic: ElasticParams { l1: 1.0, l2: 0.0, l3: 0.0 },
            viscosity: ViscosityParams {
                beta1: 1.0,
                beta4: 2.0,
                beta5: 0.5,
                beta6: 2.5,
                beta7: 1.0,
                mu1: 2.0,
                mu2: 2.0,
                j: 0.1,
            },
            eps,
        }
    }

    pub fn s1(&self) -> Result<f64> {
        s1(&self.bulk)
    }

    pub fn leslie(&self) -> Result<LeslieParams> {
        map_leslie(&self.viscosity, &self.bulk, &self.elastic)
    }

    pub fn certificate(&self) -> Certificate {
        check_qs_dissipative(&self.viscosity)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0) {
            return Err(Error::BadEpsilon(self.eps));
        }
        if !(self.viscosity.j > 0.0) {
            return Err(Error::InvalidConfig(format!("the Q-tensor solver needs J > 0 (got {})", self.viscosity.j)));
        }
        s1(&self.bulk)?;
        Ok(())
    }
}
