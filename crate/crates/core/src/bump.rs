//! The fixed C^∞ transition profile and the bumps built from it.
//!
//! Every smooth object in the crate (adapted symbols, ψ_ω bumps, the prefilters
//! φ^i_j) is assembled from [`smooth_step`], so identities between them are exact
//! up to rounding.

#[allow(unused_imports)]
use num_traits::Float;

fn psi(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// 0 for `t <= 0`, 1 for `t >= 1`, C^∞ in between, with `s(t) + s(1-t) = 1`.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let p = psi(t);
        p / (p + psi(1.0 - t))
    }
}

/// Rises from 0 to 1 across `[edge - width/2, edge + width/2]`.
pub fn ramp(x: f64, edge: f64, width: f64) -> f64 {
    if width <= 0.0 {
        return if x >= edge { 1.0 } else { 0.0 };
    }
    smooth_step((x - edge) / width + 0.5)
}

/// `ramp(x, lo) - ramp(x, hi)`: 1 on `[lo + w/2, hi - w/2]`, 0 off `[lo - w/2, hi + w/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump1d {
    pub lo_edge: f64,
    pub hi_edge: f64,
    pub width: f64,
}

impl Bump1d {
    /// Bump supported in `[lo, hi]` and equal to 1 on the α-shrink about the centre.
    pub fn adapted(lo: f64, hi: f64, alpha: f64) -> Self {
        let r = 0.5 * (hi - lo);
        let w = (1.0 - alpha) * r;
        Self { lo_edge: lo + 0.5 * w, hi_edge: hi - 0.5 * w, width: w }
    }

    pub fn eval(&self, x: f64) -> f64 {
        ramp(x, self.lo_edge, self.width) - ramp(x, self.hi_edge, self.width)
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo_edge - 0.5 * self.width, self.hi_edge + 0.5 * self.width)
    }

    pub fn plateau(&self) -> (f64, f64) {
        (self.lo_edge + 0.5 * self.width, self.hi_edge - 0.5 * self.width)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_symmetry_and_limits() {
        assert_eq!(smooth_step(-1.0), 0.0);
        assert_eq!(smooth_step(0.0), 0.0);
        assert_eq!(smooth_step(1.0), 1.0);
        assert!((smooth_step(0.5) - 0.5).abs() < 1e-15);
        for i in 1..100 {
            let t = i as f64 / 100.0;
            assert!((smooth_step(t) + smooth_step(1.0 - t) - 1.0).abs() < 1e-14);
            assert!(smooth_step(t) >= smooth_step(t - 0.01));
        }
    }

    #[test]
    fn adapted_bump_support_and_plateau() {
        let b = Bump1d::adapted(1.0, 3.0, 0.8);
        assert_eq!(b.support(), (1.0, 3.0));
        let (p0, p1) = b.plateau();
        assert!((p0 - 1.2).abs() < 1e-12 && (p1 - 2.8).abs() < 1e-12);
        assert_eq!(b.eval(0.999), 0.0);
        assert_eq!(b.eval(3.001), 0.0);
        assert_eq!(b.eval(1.25), 1.0);
        assert_eq!(b.eval(2.0), 1.0);
        assert!(b.eval(1.1) > 0.0 && b.eval(1.1) < 1.0);
    }
}
