use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::analysis::{grid_indices_in, lp_norm, ExponentTriple};
use super::{BilinearOperator, SampledFunction};
use crate::symbols::SymbolSpec;
use crate::{Error, Result};

/// Random test-pair families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TrialFamily {
    /// Up to three Gaussian-envelope wave packets at grid frequencies.
    WavePacket,
    /// One to eight random coefficients.
    SparseSpectrum,
    /// Random ±1 on every admissible coefficient.
    RandomSigns,
}

impl TrialFamily {
    pub const ALL: [TrialFamily; 3] = [Self::WavePacket, Self::SparseSpectrum, Self::RandomSigns];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::WavePacket => "wave_packet",
            Self::SparseSpectrum => "sparse_spectrum",
            Self::RandomSigns => "random_signs",
        }
    }

    fn tag(self) -> u64 {
        match self {
            Self::WavePacket => 1,
            Self::SparseSpectrum => 2,
            Self::RandomSigns => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConfig {
    pub trials: usize,
    pub resolutions: Vec<usize>,
    pub seed: u64,
    /// Nyquist frequency; the period is `N / (2·band)` so finer grids see longer periods.
    pub band: f64,
    pub families: Vec<TrialFamily>,
}

impl ProbeConfig {
    pub fn new(trials: usize, resolutions: Vec<usize>, seed: u64, band: f64) -> Self {
        Self { trials, resolutions, seed, band, families: TrialFamily::ALL.to_vec() }
    }

    pub fn period(&self, n: usize) -> f64 {
        n as f64 / (2.0 * self.band)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeRow {
    pub triple: ExponentTriple,
    pub n: usize,
    pub family: TrialFamily,
    pub max_ratio: f64,
    pub argmax_trial: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Growth {
    pub triple: ExponentTriple,
    pub first: f64,
    pub last: f64,
    pub factor: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub rows: Vec<ProbeRow>,
    pub trials: usize,
    pub seed: u64,
    pub growth: Vec<Growth>,
}

impl ProbeReport {
    /// Row achieving the overall maximum for `triple` at resolution `n`.
    pub fn witness(&self, triple: &ExponentTriple, n: usize) -> Option<&ProbeRow> {
        self.rows
            .iter()
            .filter(|r| r.n == n && r.triple == *triple)
            .max_by(|a, b| a.max_ratio.total_cmp(&b.max_ratio))
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one trial, independent of evaluation order.
pub fn trial_seed(seed: u64, n: usize, family: TrialFamily, trial: usize) -> u64 {
    splitmix(splitmix(splitmix(seed ^ (n as u64).rotate_left(17)) ^ family.tag()) ^ trial as u64)
}

fn range_of(sym: &SymbolSpec, band: f64) -> ((f64, f64), (f64, f64)) {
    let full = (-band, band);
    let clip = |lo: f64, hi: f64| {
        let (l, h) = (lo.max(-band), hi.min(band));
        if l < h {
            (l, h)
        } else {
            full
        }
    };
    match sym.bbox() {
        Some(r) => (clip(r.xi_lo, r.xi_hi), clip(r.eta_lo, r.eta_hi)),
        None => (full, full),
    }
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn draw(rng: &mut ChaCha8Rng, family: TrialFamily, n: usize, period: f64, range: (f64, f64)) -> Result<SampledFunction> {
    let idx = grid_indices_in(n, period, range.0, range.1);
    let pick = |rng: &mut ChaCha8Rng| idx[rng.gen_range(0..idx.len())];
    match family {
        TrialFamily::WavePacket => {
            let count = rng.gen_range(1..=3usize);
            let packets: Vec<(Complex64, f64, f64, f64)> = (0..count)
                .map(|_| {
                    let i = pick(rng);
                    let k = i as f64 - (n / 2) as f64;
                    let amp = random_complex(rng);
                    let x0 = rng.gen_range(0.0..period);
                    let sigma = period * rng.gen_range(1.0 / 64.0..1.0 / 8.0);
                    (amp, k, x0, sigma)
                })
                .collect();
            SampledFunction::from_fn(n, period, |x| {
                packets
                    .iter()
                    .map(|&(amp, k, x0, sigma)| {
                        let t = x - x0 + 0.5 * period;
                        let d = t - period * (t / period).floor() - 0.5 * period;
                        let env = (-(d * d) / (2.0 * sigma * sigma)).exp();
                        amp * env * Complex64::from_polar(1.0, 2.0 * PI * k * x / period)
                    })
                    .sum()
            })
        }
        TrialFamily::SparseSpectrum => {
            let mut c = alloc::vec![Complex64::new(0.0, 0.0); n];
            for _ in 0..rng.gen_range(1..=8usize) {
                c[pick(rng)] = random_complex(rng);
            }
            SampledFunction::from_coefficients(&c, period)
        }
        TrialFamily::RandomSigns => {
            let mut c = alloc::vec![Complex64::new(0.0, 0.0); n];
            for &i in &idx {
                c[i] = Complex64::new(if rng.gen::<bool>() { 1.0 } else { -1.0 }, 0.0);
            }
            SampledFunction::from_coefficients(&c, period)
        }
    }
}

/// Regenerates the test pair `(f, g)` of one trial.
pub fn probe_pair(
    sym: &SymbolSpec,
    cfg: &ProbeConfig,
    n: usize,
    family: TrialFamily,
    trial: usize,
) -> Result<(SampledFunction, SampledFunction)> {
    let period = cfg.period(n);
    let (rx, ry) = range_of(sym, cfg.band);
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, n, family, trial));
    let f = draw(&mut rng, family, n, period, rx)?;
    let g = draw(&mut rng, family, n, period, ry)?;
    Ok((f, g))
}

/// Empirical `max ‖B_m(f,g)‖_{p3'} / (‖f‖_{p1} ‖g‖_{p2})` over random pairs, per
/// triple, resolution and family. All norms are taken on the `2N` output grid.
pub fn norm_probe(sym: &SymbolSpec, triples: &[ExponentTriple], cfg: &ProbeConfig) -> Result<ProbeReport> {
    if cfg.trials == 0 {
        return Err(crate::error::invalid("trials must be at least 1"));
    }
    if cfg.resolutions.is_empty() || triples.is_empty() || cfg.families.is_empty() {
        return Err(crate::error::invalid("probe needs resolutions, triples and families"));
    }
    if !(cfg.band.is_finite() && cfg.band > 0.0) {
        return Err(crate::error::invalid("band must be positive"));
    }
    let mut rows = Vec::new();
    for &n in &cfg.resolutions {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
        let op = BilinearOperator::new(sym, n, cfg.period(n))?;
        for &family in &cfg.families {
            let mut best = alloc::vec![(0.0f64, 0usize); triples.len()];
            for trial in 0..cfg.trials {
                let (f, g) = probe_pair(sym, cfg, n, family, trial)?;
                let b = op.apply(&f, &g)?;
                let (f2, g2) = (f.resampled(2 * n)?, g.resampled(2 * n)?);
                for (t, e) in triples.iter().enumerate() {
                    let den = lp_norm(&f2, e.p1())? * lp_norm(&g2, e.p2())?;
                    if den == 0.0 {
                        continue;
                    }
                    let r = lp_norm(&b, e.p3_conj())? / den;
                    if r > best[t].0 {
                        best[t] = (r, trial);
                    }
                }
            }
            for (t, e) in triples.iter().enumerate() {
                rows.push(ProbeRow { triple: *e, n, family, max_ratio: best[t].0, argmax_trial: best[t].1 });
            }
        }
    }
    let (n0, n1) = (cfg.resolutions[0], cfg.resolutions[cfg.resolutions.len() - 1]);
    let overall = |e: &ExponentTriple, n: usize| {
        rows.iter().filter(|r| r.n == n && r.triple == *e).map(|r| r.max_ratio).fold(0.0, f64::max)
    };
    let growth = triples
        .iter()
        .map(|e| {
            let (first, last) = (overall(e, n0), overall(e, n1));
            Growth { triple: *e, first, last, factor: if first > 0.0 { last / first } else { f64::INFINITY } }
        })
        .collect();
    Ok(ProbeReport { rows, trials: cfg.trials, seed: cfg.seed, growth })
}
