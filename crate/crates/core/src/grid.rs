//! Uniform spatial grid and time sampling shared by the verification and evolution kernels.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_x: usize,
    pub t_samples: Vec<f64>,
}

pub const MIN_POINTS: usize = 16;

impl GridSpec {
    /// Nodes `x_min + i dx`, `i = 0..n_x`, endpoints included.
    pub fn new(x_min: f64, x_max: f64, n_x: usize, t_samples: Vec<f64>) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || !(x_max > x_min) {
            return Err(Error::Grid(format!("need finite x_max > x_min, got [{x_min}, {x_max}]")));
        }
        if n_x < MIN_POINTS {
            return Err(Error::Grid(format!("n_x = {n_x} below minimum {MIN_POINTS}")));
        }
        if t_samples.iter().any(|t| !t.is_finite()) || t_samples.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Grid("t_samples must be finite and strictly increasing".into()));
        }
        Ok(Self { x_min, x_max, n_x, t_samples })
    }

    /// `n_t` equally spaced times on `[t0, t1]` inclusive.
    pub fn uniform_times(t0: f64, t1: f64, n_t: usize) -> Vec<f64> {
        match n_t {
            0 => Vec::new(),
            1 => vec![t0],
            _ => (0..n_t).map(|k| t0 + (t1 - t0) * k as f64 / (n_t - 1) as f64).collect(),
        }
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_x - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n_x {
            self.x_max
        } else {
            self.x_min + i as f64 * self.dx()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_x).map(|i| self.x(i)).collect()
    }

    pub fn with_times(&self, t_samples: Vec<f64>) -> Result<Self> {
        Self::new(self.x_min, self.x_max, self.n_x, t_samples)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_and_spacing() {
        let g = GridSpec::new(-1.0, 1.0, 21, vec![0.0, 1.0]).unwrap();
        assert_eq!(g.nodes().len(), 21);
        assert_eq!(g.x(0), -1.0);
        assert_eq!(g.x(20), 1.0);
        assert!((g.dx() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        assert!(GridSpec::new(1.0, 0.0, 32, vec![]).is_err());
        assert!(GridSpec::new(0.0, 1.0, 8, vec![]).is_err());
        assert!(GridSpec::new(0.0, 1.0, 32, vec![1.0, 1.0]).is_err());
        assert_eq!(GridSpec::uniform_times(0.0, 15.0, 64).len(), 64);
    }
}
