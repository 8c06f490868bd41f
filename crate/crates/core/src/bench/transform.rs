//! Bias transformations used by the `iso` and `dec` benchmark variants.

/// Flat-region offset `B` shared by the isolated and deceptive variants.
pub const TRANSFORM_B: f64 = 0.001;
/// Flat-region end / deceptive-minimum value `C`.
pub const TRANSFORM_C: f64 = 0.05;

/// Flat-region ("isolated optimum") transformation. Maps `[B, C]` to the constant `a`,
/// ramps linearly to `0` below `B` and to `1` above `C`.
pub fn b_flat(y: f64, a: f64, b: f64, c: f64) -> f64 {
    a + (y - b).floor().min(0.0) * a * (b - y) / b
        - (c - y).floor().min(0.0) * (1.0 - a) * (y - c) / (1.0 - c)
}

/// Deceptive transformation: global minimum `0` at `y = a`, deceptive local minima of
/// value `c` at the interval ends. Requires `b < a < 1 - b`.
pub fn s_decept(y: f64, a: f64, b: f64, c: f64) -> f64 {
    1.0 + ((y - a).abs() - b)
        * ((y - a + b).floor() * (1.0 - c + (a - b) / b) / (a - b)
            + (a + b - y).floor() * (1.0 - c + (1.0 - a - b) / b) / (1.0 - a - b)
            + 1.0 / b)
}

/// Keeps the deceptive optimum strictly inside `(B, 1 - B)`.
pub(crate) fn deceptive_centre(g: f64) -> f64 {
    g.abs().clamp(2.0 * TRANSFORM_B, 1.0 - 2.0 * TRANSFORM_B)
}
