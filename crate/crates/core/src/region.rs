use serde::{Deserialize, Serialize};

/// Half-open rectangle `(x_lo, x_hi] x (y_lo, y_hi]`.
///
/// Infinite bounds are allowed: `[0, x] x (y, inf]` on a nonnegative cone is
/// `Rect::new(-inf, x, y, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl Rect {
    pub fn new(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> Self {
        Self { x_lo, x_hi, y_lo, y_hi }
    }

    /// `{x <= x_hi, y > y_lo}`, the sets generating the limit measure.
    pub fn lower_left(x_hi: f64, y_lo: f64) -> Self {
        Self::new(f64::NEG_INFINITY, x_hi, y_lo, f64::INFINITY)
    }

    /// `{x > x_lo, y > y_lo}`.
    pub fn upper_right(x_lo: f64, y_lo: f64) -> Self {
        Self::new(x_lo, f64::INFINITY, y_lo, f64::INFINITY)
    }

    #[inline]
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x > self.x_lo && x <= self.x_hi && y > self.y_lo && y <= self.y_hi
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::new(c * self.x_lo, c * self.x_hi, c * self.y_lo, c * self.y_hi)
    }
}
