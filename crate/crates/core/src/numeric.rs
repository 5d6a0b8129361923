//! Small numeric helpers: compensated summation and integer powers.

/// Neumaier-compensated accumulator. Additions are performed in call order,
/// so a fixed iteration order gives bit-reproducible sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// base^exp for unsigned exponents. powi covers every exponent that fits in
/// i32; beyond that powf is exact enough (the exponent is integral-valued,
/// so negative bases are still handled by IEEE pow).
#[inline]
pub fn pow_u64(base: f64, exp: u64) -> f64 {
    if exp <= i32::MAX as u64 {
        base.powi(exp as i32)
    } else {
        base.powf(exp as f64)
    }
}

/// 17 significant digits in scientific notation: enough to round-trip any
/// f64 bit pattern, platform-independent, '.' separator.
pub fn format_float17(x: f64) -> String {
    format!("{x:.16e}")
}
