use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::SampledFunction;
use crate::symbols::SymbolSpec;
use crate::{Error, Result};

/// The symbol sampled on the `N × N` frequency grid, kept sparse.
///
/// Output frequencies `ξ + η` span `2N` grid points, so results live on a
/// grid of `2N` samples with the same period.
#[derive(Debug, Clone)]
pub struct BilinearOperator {
    n: usize,
    period: f64,
    entries: Vec<(u32, u32, f64)>,
}

impl BilinearOperator {
    pub fn new(sym: &SymbolSpec, n: usize, period: f64) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
        let freq = |i: usize| (i as f64 - (n / 2) as f64) / period;
        // the symbol vanishes off its bounding box, so only that block is sampled
        let span = |lo: f64, hi: f64| {
            let half = (n / 2) as f64;
            let a = (lo * period + half).floor().max(0.0);
            let b = (hi * period + half).ceil().min((n - 1) as f64);
            if a > b {
                (1, 0)
            } else {
                (a as usize, b as usize)
            }
        };
        let (rx, ry) = match sym.bbox() {
            Some(r) => (span(r.xi_lo, r.xi_hi), span(r.eta_lo, r.eta_hi)),
            None => ((0, n - 1), (0, n - 1)),
        };
        let mut entries = Vec::new();
        for i1 in rx.0..=rx.1 {
            let xi = freq(i1);
            for i2 in ry.0..=ry.1 {
                let eta = freq(i2);
                let w = sym.eval(xi, eta);
                if !w.is_finite() {
                    return Err(Error::SymbolUndefined { xi, eta });
                }
                if w != 0.0 {
                    entries.push((i1 as u32, i2 as u32, w));
                }
            }
        }
        Ok(Self { n, period, entries })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Number of frequency pairs where the symbol is nonzero.
    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    fn check(&self, f: &SampledFunction) -> Result<()> {
        if f.len() != self.n || (f.period() - self.period).abs() > 1e-12 * self.period {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    /// Output coefficients on the `2N` grid, ordered `k = -N … N-1`.
    pub fn apply_coefficients(&self, cf: &[Complex64], cg: &[Complex64]) -> Vec<Complex64> {
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); 2 * self.n];
        for &(i1, i2, w) in &self.entries {
            // (i1 - N/2) + (i2 - N/2) + N = i1 + i2
            out[(i1 + i2) as usize] += cf[i1 as usize] * cg[i2 as usize] * w;
        }
        out
    }

    pub fn apply(&self, f: &SampledFunction, g: &SampledFunction) -> Result<SampledFunction> {
        self.check(f)?;
        self.check(g)?;
        let out = self.apply_coefficients(&f.coefficients(), &g.coefficients());
        SampledFunction::from_coefficients(&out, self.period)
    }
}

/// `B_m(f,g)(x) = Σ_{ξ,η} m(ξ,η) f̂(ξ) ĝ(η) e^{2πi(ξ+η)x}` on the `2N` grid.
pub fn apply_bilinear(sym: &SymbolSpec, f: &SampledFunction, g: &SampledFunction) -> Result<SampledFunction> {
    if !f.same_grid(g) {
        return Err(Error::GridMismatch);
    }
    BilinearOperator::new(sym, f.len(), f.period())?.apply(f, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{Rect, SymbolKind};
    use alloc::sync::Arc;

    fn wave(n: usize, period: f64, k: i64) -> SampledFunction {
        SampledFunction::from_fn(n, period, |x| Complex64::from_polar(1.0, 2.0 * core::f64::consts::PI * k as f64 * x / period))
            .unwrap()
    }

    #[test]
    fn single_frequencies_pick_up_symbol_value() {
        let (n, period) = (32, 4.0);
        let sym = SymbolSpec::custom(Arc::new(|xi: f64, eta: f64| 1.0 + xi - 2.0 * eta), SymbolKind::SmoothAdapted, None);
        let out = apply_bilinear(&sym, &wave(n, period, 3), &wave(n, period, -5)).unwrap();
        let w = 1.0 + 3.0 / period + 10.0 / period;
        let expect = wave(2 * n, period, -2);
        for (a, b) in out.samples().iter().zip(expect.samples()) {
            assert!((a - b * w).norm() < 1e-12);
        }
    }

    #[test]
    fn unit_symbol_is_pointwise_product() {
        let (n, period) = (16, 1.0);
        let f = SampledFunction::from_fn(n, period, |x| Complex64::new((6.0 * x).cos(), x.sin())).unwrap();
        let f = SampledFunction::from_coefficients(&f.coefficients(), period).unwrap();
        let g = SampledFunction::from_coefficients(&wave(n, period, 2).add(&wave(n, period, -7)).unwrap().coefficients(), period)
            .unwrap();
        let out = apply_bilinear(&SymbolSpec::ones(), &f, &g).unwrap();
        let (f2, g2) = (f.resampled(2 * n).unwrap(), g.resampled(2 * n).unwrap());
        for i in 0..2 * n {
            assert!((out.samples()[i] - f2.samples()[i] * g2.samples()[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn bounding_box_restriction_is_invisible() {
        let (n, period) = (32, 8.0);
        let inside = |xi: f64, eta: f64| if (0.5..1.0).contains(&xi) && (-1.0..0.25).contains(&eta) { xi * eta + 2.0 } else { 0.0 };
        let with = SymbolSpec::custom(
            Arc::new(inside),
            SymbolKind::SmoothAdapted,
            Some(Rect { xi_lo: 0.5, xi_hi: 1.0, eta_lo: -1.0, eta_hi: 0.25 }),
        );
        let without = SymbolSpec::custom(Arc::new(inside), SymbolKind::SmoothAdapted, None);
        let a = BilinearOperator::new(&with, n, period).unwrap();
        let b = BilinearOperator::new(&without, n, period).unwrap();
        assert_eq!(a.support_size(), b.support_size());
        assert_eq!(a.entries, b.entries);
    }

    #[test]
    fn rejects_non_finite_symbol_and_grid_mismatch() {
        let sym = SymbolSpec::custom(Arc::new(|xi: f64, _| 1.0 / xi), SymbolKind::SmoothAdapted, None);
        assert!(matches!(BilinearOperator::new(&sym, 8, 1.0), Err(Error::SymbolUndefined { .. })));
        let f = SampledFunction::zeros(8, 1.0).unwrap();
        let g = SampledFunction::zeros(16, 1.0).unwrap();
        assert_eq!(apply_bilinear(&SymbolSpec::ones(), &f, &g).unwrap_err(), Error::GridMismatch);
        assert_eq!(BilinearOperator::new(&SymbolSpec::ones(), 12, 1.0).unwrap_err(), Error::NotPowerOfTwo(12));
    }
}
