//! Floating point comparison policy.

/// Relative tolerance with an absolute floor.
///
/// Two values `a`, `b` are considered equal when
/// `|a - b| <= max(abs, rel * max(|a|, |b|))`. Equal infinities compare equal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: 1e-9,
            abs: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Self {
        Self { rel, abs }
    }

    pub fn relative(rel: f64) -> Self {
        Self { rel, abs: 1e-12 }
    }

    pub fn eq(&self, a: f64, b: f64) -> bool {
        if a == b {
            return true;
        }
        if !a.is_finite() || !b.is_finite() {
            return false;
        }
        (a - b).abs() <= self.abs.max(self.rel * a.abs().max(b.abs()))
    }

    /// `a <= b` up to tolerance.
    pub fn le(&self, a: f64, b: f64) -> bool {
        a <= b || self.eq(a, b)
    }
}

/// `|a - b| / max(|a|, |b|)`, zero when both are zero.
pub fn relative_error(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let scale = a.abs().max(b.abs());
    (a - b).abs() / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_policy() {
        let t = Tolerance::default();
        assert!(t.eq(1.0, 1.0 + 1e-10));
        assert!(!t.eq(1.0, 1.0 + 1e-8));
        assert!(t.eq(0.0, 1e-13));
        assert!(t.eq(f64::INFINITY, f64::INFINITY));
        assert!(!t.eq(f64::INFINITY, 1e300));
        assert!(t.le(1.0 + 1e-11, 1.0));
    }

    #[test]
    fn relative_error_is_symmetric() {
        assert_eq!(relative_error(0.0, 0.0), 0.0);
        assert_eq!(relative_error(2.0, 1.0), relative_error(1.0, 2.0));
    }
}
