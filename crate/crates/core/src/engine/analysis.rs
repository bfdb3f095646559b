use alloc::{vec, vec::Vec};
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{integrate_product, BilinearOperator, SampledFunction};
use crate::curves::{Direction, SequencePair};
use crate::intervals::{neg_minkowski_sum, Interval, IntervalCollection};
use crate::symbols::staircase_symbol;
use crate::{Error, Result};

/// `(p1, p2, p3)` with `1/p1 + 1/p2 + 1/p3 = 1`, each in `(1, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentTriple {
    p1: f64,
    p2: f64,
    p3: f64,
}

pub const EXPONENT_TOL: f64 = 1e-12;

impl ExponentTriple {
    pub fn new(p1: f64, p2: f64, p3: f64) -> Result<Self> {
        let bad = |reason| Err(Error::BadExponents { p1, p2, p3, reason });
        if [p1, p2, p3].iter().any(|p| !(p.is_finite() && *p > 1.0)) {
            return bad("each exponent must lie in (1, inf)");
        }
        if (1.0 / p1 + 1.0 / p2 + 1.0 / p3 - 1.0).abs() > EXPONENT_TOL {
            return bad("reciprocals must sum to 1");
        }
        Ok(Self { p1, p2, p3 })
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn p3(&self) -> f64 {
        self.p3
    }

    /// `p3' = p3 / (p3 - 1)`, the exponent of the output.
    pub fn p3_conj(&self) -> f64 {
        self.p3 / (self.p3 - 1.0)
    }

    /// All three exponents at least 2.
    pub fn local_l2(&self) -> bool {
        self.p1 >= 2.0 && self.p2 >= 2.0 && self.p3 >= 2.0
    }
}

/// Sharp cutoff `(1_I f̂)^∨`.
pub fn frequency_project(f: &SampledFunction, iv: &Interval) -> SampledFunction {
    let mut c = f.coefficients();
    for (i, v) in c.iter_mut().enumerate() {
        if !iv.contains(f.frequency(i)) {
            *v = Complex64::new(0.0, 0.0);
        }
    }
    SampledFunction::from_coefficients(&c, f.period()).expect("grid already valid")
}

/// `𝒞g(x_n) = max` over cutoffs of `|Σ_{ξ < cutoff} ĝ(ξ) e^{2πiξx_n}|`.
///
/// Partial sums only change when the cutoff crosses a grid frequency, so the
/// prefix sums (including the empty and the full one) realise the supremum.
pub fn carleson_hunt_maximal(g: &SampledFunction) -> Vec<f64> {
    let n = g.len();
    let c = g.coefficients();
    let tw: Vec<Complex64> =
        (0..n).map(|m| Complex64::from_polar(1.0, 2.0 * PI * m as f64 / n as f64)).collect();
    let half = n / 2;
    (0..n)
        .map(|x| {
            let mut s = Complex64::new(0.0, 0.0);
            let mut best = 0.0f64;
            for (i, ci) in c.iter().enumerate() {
                // k = i - N/2, phase index k·x mod N
                let m = ((i + n - half) * x) % n;
                s += ci * tw[m];
                best = best.max(s.norm());
            }
            best
        })
        .collect()
}

/// Inner norm of a mixed `L^p(ℓ^q)` norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InnerNorm {
    L2,
    LInf,
    Lq(f64),
}

/// `‖{f_i}‖_{L^p(ℓ^inner)}` by Riemann sums over one period; `p` may be `∞`.
pub fn mixed_norm(fs: &[SampledFunction], p: f64, inner: InnerNorm) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::ExponentBelowOne(p));
    }
    if let InnerNorm::Lq(q) = inner {
        if !(q >= 1.0) {
            return Err(Error::ExponentBelowOne(q));
        }
    }
    let first = fs.first().ok_or_else(|| crate::error::invalid("empty family"))?;
    if fs.iter().any(|f| !f.same_grid(first)) {
        return Err(Error::GridMismatch);
    }
    let n = first.len();
    let pointwise = (0..n).map(|i| {
        let vals = fs.iter().map(|f| f.samples()[i].norm());
        match inner {
            InnerNorm::L2 => vals.map(|v| v * v).sum::<f64>().sqrt(),
            InnerNorm::LInf => vals.fold(0.0, f64::max),
            InnerNorm::Lq(q) if q.is_infinite() => vals.fold(0.0, f64::max),
            InnerNorm::Lq(q) => vals.map(|v| v.powf(q)).sum::<f64>().powf(1.0 / q),
        }
    });
    Ok(lp_of(pointwise, p, first.period() / n as f64))
}

fn lp_of(vals: impl Iterator<Item = f64>, p: f64, weight: f64) -> f64 {
    if p.is_infinite() {
        return vals.fold(0.0, f64::max);
    }
    // scale by the max to keep powers in range
    let v: Vec<f64> = vals.collect();
    let m = v.iter().copied().fold(0.0, f64::max);
    if m == 0.0 {
        return 0.0;
    }
    let s: f64 = v.iter().map(|x| (x / m).powf(p)).sum();
    m * (s * weight).powf(1.0 / p)
}

/// Plain `L^p` norm of one function on its own grid.
pub fn lp_norm(f: &SampledFunction, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::ExponentBelowOne(p));
    }
    Ok(lp_of(f.samples().iter().map(|v| v.norm()), p, f.period() / f.len() as f64))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareFunctionReport {
    /// `‖Sf‖_p / ‖f‖_p`.
    pub upper_ratio: f64,
    /// `‖f‖_p / ‖Sf‖_p`, reported when the collection partitions the occupied band.
    pub lower_ratio: Option<f64>,
}

/// Square function `Sf = (Σ |(1_ω f̂)^∨|²)^{1/2}` over the collection.
pub fn square_function_report(f: &SampledFunction, coll: &IntervalCollection, p: f64) -> Result<SquareFunctionReport> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let pieces: Vec<SampledFunction> = coll.items.iter().map(|iv| frequency_project(f, iv)).collect();
    let nf = lp_norm(f, p)?;
    if nf == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let ns = if pieces.is_empty() { 0.0 } else { mixed_norm(&pieces, p, InnerNorm::L2)? };
    let c = f.coefficients();
    let partitions = (0..f.len()).filter(|&i| c[i] != Complex64::new(0.0, 0.0)).all(|i| {
        let x = f.frequency(i);
        coll.items.iter().filter(|iv| iv.contains(x)).count() == 1
    });
    Ok(SquareFunctionReport {
        upper_ratio: ns / nf,
        lower_ratio: (partitions && ns > 0.0).then(|| nf / ns),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderReport {
    /// `|∫ B(f,g) h|` with `‖h‖_{p3} = 1`.
    pub lhs: f64,
    /// `|∫ Σ_j Δ^a_j f Δ^b_j g Δ^c_j h|`.
    pub trilinear: f64,
    /// Modulus of the difference of the two complex integrals.
    pub identity_error: f64,
    /// `‖{Δ^a f}‖_{L^{p1}(ℓ²)}`, `‖{Δ^b g}‖_{L^{p2}(ℓ^∞)}`, `‖{Δ^c h}‖_{L^{p3}(ℓ²)}`.
    pub factors: [f64; 3],
    pub rhs_product: f64,
    pub satisfied: bool,
}

/// Staircase operator plus the projection intervals of the three-factor bound,
/// reusable across trials on one grid.
#[derive(Debug, Clone)]
pub struct ProofChain {
    op: BilinearOperator,
    /// `([a_{k+1},a_k), [b_k,b_0), -[a_{k+1},a_k)-[b_k,b_0))` for positions `1..J`.
    pieces: Vec<(Interval, Interval, Interval)>,
}

/// Functions of one trial, moved to the `2N` grid.
#[derive(Debug, Clone)]
pub struct PreparedTrial {
    bh: Complex64,
    tri: Complex64,
    da: Vec<SampledFunction>,
    db: Vec<SampledFunction>,
    dc: Vec<SampledFunction>,
    h2: SampledFunction,
}

impl ProofChain {
    pub fn new(seq: &SequencePair, n: usize, period: f64) -> Result<Self> {
        if seq.direction() != Direction::Decreasing {
            return Err(Error::UseIncreasingStaircase);
        }
        let op = BilinearOperator::new(&staircase_symbol(seq)?, n, period)?;
        let (a, b) = (seq.a(), seq.b());
        let pieces = (1..seq.steps())
            .map(|k| {
                let ia = Interval::left_closed(a[k + 1], a[k])?;
                let ib = Interval::left_closed(b[k], b[0])?;
                Ok((ia, ib, neg_minkowski_sum(&ia, &ib)))
            })
            .collect::<Result<_>>()?;
        Ok(Self { op, pieces })
    }

    pub fn pieces(&self) -> &[(Interval, Interval, Interval)] {
        &self.pieces
    }

    pub fn prepare(&self, f: &SampledFunction, g: &SampledFunction, h: &SampledFunction) -> Result<PreparedTrial> {
        if !f.same_grid(g) || !f.same_grid(h) {
            return Err(Error::GridMismatch);
        }
        let m = 2 * f.len();
        let b = self.op.apply(f, g)?;
        let h2 = h.resampled(m)?;
        let bh = integrate_product(&[&b, &h2])?;
        let up = |x: SampledFunction| x.resampled(m);
        let mut da = Vec::with_capacity(self.pieces.len());
        let mut db = Vec::with_capacity(self.pieces.len());
        let mut dc = Vec::with_capacity(self.pieces.len());
        let mut tri = Complex64::new(0.0, 0.0);
        for (ia, ib, ic) in &self.pieces {
            let (x, y, z) = (
                up(frequency_project(f, ia))?,
                up(frequency_project(g, ib))?,
                up(frequency_project(h, ic))?,
            );
            tri += integrate_product(&[&x, &y, &z])?;
            da.push(x);
            db.push(y);
            dc.push(z);
        }
        Ok(PreparedTrial { bh, tri, da, db, dc, h2 })
    }

    /// Normalizes `h` in `L^{p3}` and evaluates both sides of the Hölder display.
    pub fn evaluate(&self, t: &PreparedTrial, e: &ExponentTriple) -> Result<HolderReport> {
        let hn = lp_norm(&t.h2, e.p3())?;
        if hn == 0.0 {
            return Err(Error::ZeroFunction);
        }
        let s = 1.0 / hn;
        let lhs = t.bh.norm() * s;
        let trilinear = t.tri.norm() * s;
        let identity_error = (t.bh - t.tri).norm() * s;
        let factors = if self.pieces.is_empty() {
            [0.0; 3]
        } else {
            [
                mixed_norm(&t.da, e.p1(), InnerNorm::L2)?,
                mixed_norm(&t.db, e.p2(), InnerNorm::LInf)?,
                mixed_norm(&t.dc, e.p3(), InnerNorm::L2)? * s,
            ]
        };
        let rhs_product = factors[0] * factors[1] * factors[2];
        let satisfied = lhs <= rhs_product * (1.0 + 1e-9) + 1e-12;
        Ok(HolderReport { lhs, trilinear, identity_error, factors, rhs_product, satisfied })
    }

    pub fn check(
        &self,
        f: &SampledFunction,
        g: &SampledFunction,
        h: &SampledFunction,
        e: &ExponentTriple,
    ) -> Result<HolderReport> {
        self.evaluate(&self.prepare(f, g, h)?, e)
    }

    /// Largest `|Δ^b_k g(x)| - 2𝒞g(x)` over positions and grid points.
    pub fn carleson_excess(&self, g: &SampledFunction) -> f64 {
        let ch = carleson_hunt_maximal(g);
        let scale: f64 = g.coefficients().iter().map(|c| c.norm()).sum();
        let mut worst = f64::NEG_INFINITY;
        for (_, ib, _) in &self.pieces {
            let d = frequency_project(g, ib);
            for (v, c) in d.samples().iter().zip(&ch) {
                worst = worst.max(v.norm() - 2.0 * c);
            }
        }
        if scale > 0.0 {
            worst / scale
        } else {
            worst
        }
    }
}

/// One-shot form of [`ProofChain::check`].
pub fn holder_chain_check(
    seq: &SequencePair,
    f: &SampledFunction,
    g: &SampledFunction,
    h: &SampledFunction,
    e: &ExponentTriple,
) -> Result<HolderReport> {
    ProofChain::new(seq, f.len(), f.period())?.check(f, g, h, e)
}

/// Frequencies of the grid that lie in the interval, as coefficient indices.
pub fn grid_indices_in(n: usize, period: f64, lo: f64, hi: f64) -> Vec<usize> {
    let mut out: Vec<usize> = (0..n)
        .filter(|&i| {
            let x = (i as f64 - (n / 2) as f64) / period;
            x >= lo && x < hi
        })
        .collect();
    if out.is_empty() {
        let mid = 0.5 * (lo + hi);
        let i = ((mid * period).round() + (n / 2) as f64).clamp(0.0, (n - 1) as f64) as usize;
        out = vec![i];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{build_dyadic_slope_sequence, CurveSpec};
    use crate::intervals::{build_hyp_collection, Hypothesis};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_fn(n: usize, period: f64, seed: u64) -> SampledFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c: Vec<Complex64> =
            (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        SampledFunction::from_coefficients(&c, period).unwrap()
    }

    #[test]
    fn exponent_validation() {
        assert!(ExponentTriple::new(3.0, 3.0, 3.0).unwrap().local_l2());
        assert!(!ExponentTriple::new(6.0, 1.5, 6.0).unwrap().local_l2());
        assert!((ExponentTriple::new(4.0, 2.0, 4.0).unwrap().p3_conj() - 4.0 / 3.0).abs() < 1e-15);
        assert!(matches!(ExponentTriple::new(3.0, 1.5, 6.0), Err(Error::BadExponents { .. })));
        assert!(matches!(ExponentTriple::new(1.0, 2.0, 2.0), Err(Error::BadExponents { .. })));
    }

    #[test]
    fn norms_of_constants() {
        let one = SampledFunction::from_fn(16, 4.0, |_| Complex64::new(1.0, 0.0)).unwrap();
        for p in [1.0, 2.0, 3.5] {
            assert!((lp_norm(&one, p).unwrap() - 4f64.powf(1.0 / p)).abs() < 1e-12);
        }
        assert_eq!(lp_norm(&one, f64::INFINITY).unwrap(), 1.0);
        assert_eq!(lp_norm(&one, 0.5).unwrap_err(), Error::ExponentBelowOne(0.5));
        let two = [one.clone(), one.clone()];
        assert!((mixed_norm(&two, 2.0, InnerNorm::L2).unwrap() - 8f64.sqrt()).abs() < 1e-12);
        assert!((mixed_norm(&two, 2.0, InnerNorm::LInf).unwrap() - 2.0).abs() < 1e-12);
        assert!((mixed_norm(&two, 1.0, InnerNorm::Lq(1.0)).unwrap() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn carleson_matches_brute_force_cutoffs() {
        let (n, period) = (16, 2.0);
        let g = random_fn(n, period, 7);
        let fast = carleson_hunt_maximal(&g);
        let c = g.coefficients();
        for x in 0..n {
            let mut best = 0.0f64;
            // every half-integer cutoff in frequency index, plus ±∞
            for cut in -1..=n as i64 {
                let mut part = vec![Complex64::new(0.0, 0.0); n];
                for i in 0..n {
                    if (i as i64) <= cut {
                        part[i] = c[i];
                    }
                }
                let s = SampledFunction::from_coefficients(&part, period).unwrap();
                best = best.max(s.samples()[x].norm());
            }
            assert!((fast[x] - best).abs() < 1e-10, "x={x}");
        }
    }

    #[test]
    fn square_function_of_partition() {
        let (n, period) = (64, 8.0);
        let f = random_fn(n, period, 3);
        let all = IntervalCollection::custom(vec![Interval::everything()]);
        let r = square_function_report(&f, &all, 3.0).unwrap();
        assert!((r.upper_ratio - 1.0).abs() < 1e-12);
        assert!((r.lower_ratio.unwrap() - 1.0).abs() < 1e-12);
        let halves = IntervalCollection::custom(vec![
            Interval::left_closed(f64::NEG_INFINITY, 0.0).unwrap(),
            Interval::left_closed(0.0, f64::INFINITY).unwrap(),
        ]);
        let r = square_function_report(&f, &halves, 2.0).unwrap();
        // orthogonal pieces: L² square function is an isometry
        assert!((r.upper_ratio - 1.0).abs() < 1e-12);
        let zero = SampledFunction::zeros(n, period).unwrap();
        assert_eq!(square_function_report(&zero, &all, 2.0).unwrap_err(), Error::ZeroFunction);
    }

    #[test]
    fn holder_chain_on_power_law() {
        let seq = build_dyadic_slope_sequence(&CurveSpec::power_law(1.0).unwrap(), 6).unwrap();
        let (n, period) = (64, 8.0);
        let chain = ProofChain::new(&seq, n, period).unwrap();
        assert_eq!(chain.pieces().len(), 5);
        for seed in 0..4 {
            let (f, g, h) = (random_fn(n, period, seed), random_fn(n, period, seed + 10), random_fn(n, period, seed + 20));
            let t = chain.prepare(&f, &g, &h).unwrap();
            for e in [(3.0, 3.0, 3.0), (4.0, 2.0, 4.0), (6.0, 1.5, 6.0)] {
                let e = ExponentTriple::new(e.0, e.1, e.2).unwrap();
                let r = chain.evaluate(&t, &e).unwrap();
                assert!(r.identity_error <= 1e-10 * r.lhs.max(1.0), "{r:?}");
                assert!(r.satisfied, "{r:?}");
            }
            assert!(chain.carleson_excess(&g) <= 1e-12);
        }
    }

    #[test]
    fn hyp_collections_feed_square_functions() {
        let seq = build_dyadic_slope_sequence(&CurveSpec::power_law(1.0).unwrap(), 8).unwrap();
        let coll = build_hyp_collection(&seq, Hypothesis::Hyp1).unwrap();
        let f = random_fn(128, 16.0, 1);
        let r = square_function_report(&f, &coll, 2.0).unwrap();
        assert!(r.upper_ratio.is_finite() && r.upper_ratio > 0.0);
    }

    #[test]
    fn grid_indices_fallback_to_nearest() {
        assert_eq!(grid_indices_in(8, 1.0, 0.0, 2.0), vec![4, 5]);
        assert_eq!(grid_indices_in(8, 1.0, 0.2, 0.4), vec![4]);
    }
}
