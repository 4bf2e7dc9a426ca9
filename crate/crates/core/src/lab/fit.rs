use serde::Serialize;

use crate::error::{Error, Result};

/// Least-squares slope of log(err) against log(eps), with consecutive-pair orders.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderFit {
    pub order: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the log-log fit.
    pub residual: f64,
    /// log(e_i / e_{i+1}) / log(eps_i / eps_{i+1}).
    pub pairwise: Vec<f64>,
}

pub fn fit_order(points: &[(f64, f64)]) -> Result<OrderFit> {
    if points.len() < 3 {
        return Err(Error::InsufficientPoints(points.len()));
    }
    for &(e, err) in points {
        if !(err > 0.0) {
            return Err(Error::NonPositiveError(err));
        }
        if !(e > 0.0) {
            return Err(Error::BadEpsilon(e));
        }
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidConfig("all eps values coincide".into()));
    }
    let order = sxy / sxx;
    let intercept = my - order * mx;
    let residual = (xs.iter().zip(&ys).map(|(x, y)| (y - intercept - order * x).powi(2)).sum::<f64>() / n).sqrt();
    let pairwise = points.windows(2).map(|w| (w[0].1 / w[1].1).ln() / (w[0].0 / w[1].0).ln()).collect();
    Ok(OrderFit { order, intercept, residual, pairwise })
}
