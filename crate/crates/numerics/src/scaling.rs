//! Log-log scaling fits: ordinary least squares of log(value) against
//! log(R) over a geometric series of radii.

use crate::error::{NumericsError, Result};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct ScalingFit {
    pub series: Vec<(f64, f64)>,
    /// Fitted exponent alpha in value ∝ R^alpha.
    pub slope: f64,
    pub stderr: f64,
    pub predicted: Option<f64>,
}

pub fn scaling_fit(series: &[(f64, f64)], predicted: Option<f64>) -> Result<ScalingFit> {
    if series.len() < 4 {
        return Err(NumericsError::Precondition("need at least 4 radii".into()));
    }
    let mut rs: Vec<f64> = series.iter().map(|&(r, _)| r).collect();
    rs.dedup();
    if rs.len() != series.len() {
        return Err(NumericsError::Precondition("radii must be distinct".into()));
    }
    let ratio = rs[1] / rs[0];
    for w in rs.windows(2) {
        if ((w[1] / w[0]) / ratio - 1.0).abs() > 1e-9 {
            return Err(NumericsError::Precondition("radii must be geometric".into()));
        }
    }
    for &(r, v) in series {
        if !(v > 0.0) {
            return Err(NumericsError::NonPositiveValue(r));
        }
    }
    let xs: Vec<f64> = series.iter().map(|&(r, _)| r.ln()).collect();
    let ys: Vec<f64> = series.iter().map(|&(_, v)| v.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    let dof = (xs.len() as f64 - 2.0).max(1.0);
    let stderr = (ss_res / dof / sxx).sqrt();
    Ok(ScalingFit { series: series.to_vec(), slope, stderr, predicted })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let series: Vec<(f64, f64)> = [2.0, 4.0, 8.0, 16.0].iter().map(|&r: &f64| (r, r * r)).collect();
        let fit = scaling_fit(&series, Some(2.0)).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12);
        assert!(fit.stderr < 1e-12);
    }

    #[test]
    fn flat_series() {
        let series: Vec<(f64, f64)> = [1.0, 2.0, 4.0, 8.0].iter().map(|&r| (r, 3.5)).collect();
        let fit = scaling_fit(&series, None).unwrap();
        assert!(fit.slope.abs() < 1e-12);
    }

    #[test]
    fn noisy_half_power()
    {
        let noise = [1.01, 0.99, 1.008, 0.995, 1.002];
        let series: Vec<(f64, f64)> = [4.0f64, 8.0, 16.0, 32.0, 64.0]
            .iter()
            .enumerate()
            .map(|(i, &r)| (r, r.sqrt() * noise[i]))
            .collect();
        let fit = scaling_fit(&series, Some(0.5)).unwrap();
        assert!((fit.slope - 0.5).abs() < 0.02, "slope {}", fit.slope);
    }

    #[test]
    fn rejects_bad_series() {
        assert!(scaling_fit(&[(1.0, 1.0), (2.0, 1.0), (4.0, 1.0)], None).is_err());
        assert!(scaling_fit(&[(1.0, 1.0), (2.0, 1.0), (3.0, 1.0), (4.0, 1.0)], None).is_err());
        assert!(scaling_fit(&[(1.0, 1.0), (2.0, 0.0), (4.0, 1.0), (8.0, 1.0)], None).is_err());
    }
}
