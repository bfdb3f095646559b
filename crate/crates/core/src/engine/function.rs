use alloc::vec::Vec;

use num_complex::Complex64;

use crate::fft::Fft;
use crate::{Error, Result};

/// A trigonometric polynomial of period `L` stored as `N` samples at `x_n = nL/N`.
///
/// Coefficient index `i` stands for frequency `(i - N/2)/L`, so the spectrum
/// covers `k ∈ {-N/2, …, N/2-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    samples: Vec<Complex64>,
    period: f64,
}

fn check_period(period: f64) -> Result<()> {
    if period.is_finite() && period > 0.0 {
        Ok(())
    } else {
        Err(crate::error::invalid("period must be positive and finite"))
    }
}

fn check_len(n: usize) -> Result<()> {
    if n >= 2 && n.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::NotPowerOfTwo(n))
    }
}

impl SampledFunction {
    pub fn new(samples: Vec<Complex64>, period: f64) -> Result<Self> {
        check_len(samples.len())?;
        check_period(period)?;
        Ok(Self { samples, period })
    }

    pub fn zeros(n: usize, period: f64) -> Result<Self> {
        Self::new(alloc::vec![Complex64::new(0.0, 0.0); n], period)
    }

    pub fn from_fn(n: usize, period: f64, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        check_len(n)?;
        check_period(period)?;
        let h = period / n as f64;
        Ok(Self { samples: (0..n).map(|i| f(i as f64 * h)).collect(), period })
    }

    /// Builds the function from coefficients ordered `k = -N/2 … N/2-1`.
    pub fn from_coefficients(coeffs: &[Complex64], period: f64) -> Result<Self> {
        let n = coeffs.len();
        check_len(n)?;
        check_period(period)?;
        let mut buf = alloc::vec![Complex64::new(0.0, 0.0); n];
        for (i, c) in coeffs.iter().enumerate() {
            buf[(i + n / 2) % n] = *c;
        }
        Fft::new(n)?.inverse(&mut buf);
        Ok(Self { samples: buf, period })
    }

    /// Coefficients `c_k = (1/N) Σ_n f(x_n) e^{-2πikn/N}`, ordered `k = -N/2 … N/2-1`.
    pub fn coefficients(&self) -> Vec<Complex64> {
        let n = self.len();
        let mut buf = self.samples.clone();
        Fft::new(n).expect("length checked at construction").forward(&mut buf);
        let scale = 1.0 / n as f64;
        (0..n).map(|i| buf[(i + n / 2) % n] * scale).collect()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.period / self.len() as f64
    }

    /// Frequency of coefficient index `i`.
    pub fn frequency(&self, i: usize) -> f64 {
        (i as f64 - (self.len() / 2) as f64) / self.period
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.len() == other.len() && self.same_period(other)
    }

    pub fn same_period(&self, other: &Self) -> bool {
        (self.period - other.period).abs() <= 1e-12 * self.period
    }

    /// Same polynomial on a finer grid of `m >= N` points.
    pub fn resampled(&self, m: usize) -> Result<Self> {
        let n = self.len();
        check_len(m)?;
        if m == n {
            return Ok(self.clone());
        }
        if m < n {
            return Err(crate::error::invalid("resampling only refines the grid"));
        }
        let c = self.coefficients();
        let mut big = alloc::vec![Complex64::new(0.0, 0.0); m];
        let off = (m - n) / 2;
        big[off..off + n].copy_from_slice(&c);
        Self::from_coefficients(&big, self.period)
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self { samples: self.samples.iter().map(|v| v * s).collect(), period: self.period }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect();
        Ok(Self { samples, period: self.period })
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|v| v.re == 0.0 && v.im == 0.0)
    }

    /// Riemann sum `Σ f(x_n) L/N`, exact for the constant coefficient.
    pub fn integral(&self) -> Complex64 {
        self.samples.iter().sum::<Complex64>() * (self.period / self.len() as f64)
    }
}

/// Smallest power of two that integrates the product of the inputs exactly.
pub fn product_grid(fs: &[&SampledFunction]) -> usize {
    let half: usize = fs.iter().map(|f| f.len() / 2).sum();
    let widest = fs.iter().map(|f| f.len()).max().unwrap_or(2);
    (half + 1).next_power_of_two().max(widest)
}

/// `∫_0^L Π f_i dx` without conjugation, computed on an alias-free grid.
pub fn integrate_product(fs: &[&SampledFunction]) -> Result<Complex64> {
    let first = fs.first().ok_or_else(|| crate::error::invalid("empty product"))?;
    if fs.iter().any(|f| !f.same_period(first)) {
        return Err(Error::GridMismatch);
    }
    let m = product_grid(fs);
    let up: Vec<SampledFunction> = fs.iter().map(|f| f.resampled(m)).collect::<Result<_>>()?;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..m {
        acc += up.iter().map(|f| f.samples[i]).product::<Complex64>();
    }
    Ok(acc * (first.period / m as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn wave(k: f64, period: f64) -> impl Fn(f64) -> Complex64 {
        move |x| Complex64::from_polar(1.0, 2.0 * PI * k * x / period)
    }

    #[test]
    fn single_exponential_has_one_coefficient() {
        let f = SampledFunction::from_fn(16, 3.0, wave(-5.0, 3.0)).unwrap();
        let c = f.coefficients();
        for (i, v) in c.iter().enumerate() {
            let expect = if i == 3 { 1.0 } else { 0.0 };
            assert!((v.re - expect).abs() < 1e-12 && v.im.abs() < 1e-12);
        }
        assert!((f.frequency(3) + 5.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn round_trip_and_resample() {
        let f = SampledFunction::from_fn(32, 2.0, |x| Complex64::new((3.0 * x).sin(), x.cos())).unwrap();
        let g = SampledFunction::from_coefficients(&f.coefficients(), 2.0).unwrap();
        for (a, b) in f.samples().iter().zip(g.samples()) {
            assert!((a - b).norm() <= 1e-12 * f.max_abs());
        }
        let up = f.resampled(128).unwrap();
        for i in 0..32 {
            assert!((up.samples()[4 * i] - f.samples()[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn product_integral_is_exact() {
        let l = 5.0;
        let f = SampledFunction::from_fn(8, l, wave(3.0, l)).unwrap();
        let g = SampledFunction::from_fn(8, l, wave(-2.0, l)).unwrap();
        let h = SampledFunction::from_fn(8, l, wave(-1.0, l)).unwrap();
        let v = integrate_product(&[&f, &g, &h]).unwrap();
        assert!((v - Complex64::new(l, 0.0)).norm() < 1e-12);
        let w = integrate_product(&[&f, &g, &g]).unwrap();
        assert!(w.norm() < 1e-12);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(SampledFunction::zeros(12, 1.0).is_err());
        assert!(SampledFunction::zeros(8, 0.0).is_err());
        let a = SampledFunction::zeros(8, 1.0).unwrap();
        let b = SampledFunction::zeros(16, 1.0).unwrap();
        assert_eq!(a.add(&b), Err(Error::GridMismatch));
    }
}
