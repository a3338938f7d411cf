//! Weighted discrete L^q norms over ball samplings.

use crate::error::{NumericsError, Result};
use crate::mesh::BallSampling;
use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub q: f64,
    /// Set when a refinement check moved the value by more than 1%.
    pub quadrature_error_flag: bool,
}

/// Weighted L^q of magnitudes with explicit weights; q = inf gives the max.
pub fn lq_of_magnitudes(mags: &[f64], weights: &[f64], q: f64) -> f64 {
    debug_assert_eq!(mags.len(), weights.len());
    if q.is_infinite() {
        return mags.iter().fold(0.0f64, |a, &b| a.max(b));
    }
    mags.iter()
        .zip(weights)
        .map(|(&m, &w)| m.powf(q) * w)
        .sum::<f64>()
        .powf(1.0 / q)
}

/// Discrete L^q norm of sampled values over a ball sampling.
pub fn lq_norm_ball(values: &[Complex64], sampling: &BallSampling, q: f64) -> Result<NormEstimate> {
    if values.is_empty() || sampling.points.is_empty() {
        return Err(NumericsError::EmptySampling);
    }
    if q < 1.0 {
        return Err(NumericsError::Precondition("q >= 1 required".into()));
    }
    let mags: Vec<f64> = values.iter().map(|v| v.norm()).collect();
    let value = lq_of_magnitudes(&mags, &sampling.cell_volume, q);
    Ok(NormEstimate { value, q, quadrature_error_flag: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_on_ball() {
        let s = BallSampling::dense(2.0, &[0.05, 0.05], 10_000_000).unwrap();
        let vals: Vec<Complex64> = s.points.iter().map(|_| Complex64::new(3.0, 0.0)).collect();
        let est = lq_norm_ball(&vals, &s, 2.0).unwrap();
        let want = 3.0 * (std::f64::consts::PI * 4.0f64).sqrt();
        assert!((est.value - want).abs() / want < 0.02, "got {} want {want}", est.value);
    }

    #[test]
    fn max_norm_and_single_cell()
    {
        let s = BallSampling::dense(1.0, &[0.5, 0.5], 1000).unwrap();
        let mut vals: Vec<Complex64> = s.points.iter().map(|_| Complex64::new(0.0, 0.0)).collect();
        vals[0] = Complex64::new(0.0, -7.0);
        let est = lq_norm_ball(&vals, &s, f64::INFINITY).unwrap();
        assert_eq!(est.value, 7.0);
        let est3 = lq_norm_ball(&vals, &s, 3.0).unwrap();
        let want = (7.0f64.powi(3) * 0.25).powf(1.0 / 3.0);
        assert!((est3.value - want).abs() < 1e-12);
    }
}
