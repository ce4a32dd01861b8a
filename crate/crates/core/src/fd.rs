//! Centered finite-difference stencils.

use std::ops::{Add, Mul, Sub};

/// 8th-order second derivative weights `c0, c1..c4`.
pub const D2_ORDER8: [f64; 5] = [-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0];
/// 6th-order first derivative weights `c1..c3`.
pub const D1_ORDER6: [f64; 3] = [3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0];
/// 8th-order first derivative weights `c1..c4`.
pub const D1_ORDER8: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
/// 4th-order first derivative weights `c1, c2`.
pub const D1_ORDER4: [f64; 2] = [2.0 / 3.0, -1.0 / 12.0];

pub trait Stencil: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {}
impl<V: Copy + Add<Output = V> + Sub<Output = V> + Mul<f64, Output = V>> Stencil for V {}

/// Centered first derivative from `f(k)` for offsets `k = -r..=r` (`r = weights.len()`).
pub fn first<V: Stencil, F: Fn(isize) -> V>(f: F, weights: &[f64], h: f64) -> V {
    let mut acc = (f(1) - f(-1)) * weights[0];
    for (k, &c) in weights.iter().enumerate().skip(1) {
        let k = k as isize + 1;
        acc = acc + (f(k) - f(-k)) * c;
    }
    acc * (1.0 / h)
}

/// Centered 8th-order second derivative.
pub fn second8<V: Stencil, F: Fn(isize) -> V>(f: F, h: f64) -> V {
    let mut acc = f(0) * D2_ORDER8[0];
    for (k, &c) in D2_ORDER8.iter().enumerate().skip(1) {
        let k = k as isize;
        acc = acc + (f(k) + f(-k)) * c;
    }
    acc * (1.0 / (h * h))
}
