//! Convex curve families, dyadic-slope sequences and the sequence classifiers.
//!
//! Every family is increasing and strictly convex on its working domain, so the
//! slopes `2^-j` are attained at a strictly decreasing sequence `a_j` and the
//! values `b_j = γ(a_j)` decrease as well.

use alloc::{format, string::String, sync::Arc, vec::Vec};
use core::f64::consts::{FRAC_PI_2, LN_2};
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::invalid;
use crate::{Error, Result};

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Default bisection budget.
pub const DEFAULT_MAX_ITER: u32 = 200;

/// Largest dyadic index scanned when looking for the first attained slope.
const MAX_FIRST_INDEX: u32 = 64;

#[derive(Clone)]
pub enum CurveFamily {
    /// `|ξ|^{-c}` on `ξ < 0`.
    PowerLaw { c: f64 },
    /// `√(1+ξ²)` on `(0, 1/√3]`.
    Hyperboloid,
    /// `2^ξ` on the real line.
    Exponential,
    /// `ξ^c / c` on `(0, 1]`, `c > 1`.
    Monomial { c: f64 },
    /// `-√(1-ξ²)` on `(0, 1/√2]`.
    CircleArc,
    /// `ξ/(ξ+c)` on `ξ < -c`.
    Rational { c: f64 },
    /// `arctan ξ` on `ξ <= 0`.
    Arctan,
    PiecewiseLinear(PolygonalCurve),
    Custom { name: String, value: RealFn, slope: RealFn, lower_limit: Option<f64> },
}

impl fmt::Debug for CurveFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PowerLaw { c } => write!(f, "PowerLaw {{ c: {c} }}"),
            Self::Hyperboloid => f.write_str("Hyperboloid"),
            Self::Exponential => f.write_str("Exponential"),
            Self::Monomial { c } => write!(f, "Monomial {{ c: {c} }}"),
            Self::CircleArc => f.write_str("CircleArc"),
            Self::Rational { c } => write!(f, "Rational {{ c: {c} }}"),
            Self::Arctan => f.write_str("Arctan"),
            Self::PiecewiseLinear(p) => write!(f, "PiecewiseLinear({} vertices)", p.len()),
            Self::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

/// Closed-or-open real interval; a finite endpoint belongs to the domain when
/// the derivative is finite there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
}

/// `η ↦ scale·η + eta_shift` applied to `γ(ξ + xi_shift)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine {
    pub xi_shift: f64,
    pub eta_shift: f64,
    pub eta_scale: f64,
}

impl Default for Affine {
    fn default() -> Self {
        Self { xi_shift: 0.0, eta_shift: 0.0, eta_scale: 1.0 }
    }
}

/// An evaluable convex curve with derivative and working domain.
#[derive(Debug, Clone)]
pub struct CurveSpec {
    family: CurveFamily,
    domain: Domain,
    affine: Affine,
}

fn positive(c: f64, what: &str) -> Result<f64> {
    if c.is_finite() && c > 0.0 {
        Ok(c)
    } else {
        Err(invalid(format!("{what} must be a positive finite number, got {c}")))
    }
}

impl CurveSpec {
    fn raw(family: CurveFamily, lo: f64, hi: f64) -> Self {
        Self { family, domain: Domain { lo, hi }, affine: Affine::default() }
    }

    pub fn power_law(c: f64) -> Result<Self> {
        let c = positive(c, "power_law c")?;
        Ok(Self::raw(CurveFamily::PowerLaw { c }, f64::NEG_INFINITY, 0.0))
    }

    pub fn hyperboloid() -> Self {
        Self::raw(CurveFamily::Hyperboloid, 0.0, 1.0 / 3f64.sqrt())
    }

    pub fn exponential() -> Self {
        Self::raw(CurveFamily::Exponential, f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn monomial(c: f64) -> Result<Self> {
        let c = positive(c, "monomial c")?;
        if c <= 1.0 {
            return Err(invalid(format!("monomial c must exceed 1 for a convex curve, got {c}")));
        }
        Ok(Self::raw(CurveFamily::Monomial { c }, 0.0, 1.0))
    }

    pub fn circle_arc() -> Self {
        Self::raw(CurveFamily::CircleArc, 0.0, core::f64::consts::FRAC_1_SQRT_2)
    }

    pub fn rational(c: f64) -> Result<Self> {
        let c = positive(c, "rational c")?;
        Ok(Self::raw(CurveFamily::Rational { c }, f64::NEG_INFINITY, -c))
    }

    pub fn arctan() -> Self {
        Self::raw(CurveFamily::Arctan, f64::NEG_INFINITY, 0.0)
    }

    pub fn piecewise_linear(poly: PolygonalCurve) -> Self {
        let (lo, hi) = poly.x_range();
        Self::raw(CurveFamily::PiecewiseLinear(poly), lo, hi)
    }

    /// Library-only callback curve. `lower_limit` is `lim γ` at the lower domain end.
    pub fn custom(
        name: impl Into<String>,
        value: RealFn,
        slope: RealFn,
        lo: f64,
        hi: f64,
        lower_limit: Option<f64>,
    ) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::EmptyInterval { lo, hi });
        }
        Ok(Self::raw(CurveFamily::Custom { name: name.into(), value, slope, lower_limit }, lo, hi))
    }

    /// Restricts the working domain (given in the current, renormalized coordinates).
    pub fn with_domain(mut self, lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::EmptyInterval { lo, hi });
        }
        self.domain = Domain { lo: lo + self.affine.xi_shift, hi: hi + self.affine.xi_shift };
        Ok(self)
    }

    pub fn family(&self) -> &CurveFamily {
        &self.family
    }

    pub fn affine(&self) -> Affine {
        self.affine
    }

    pub fn name(&self) -> String {
        match &self.family {
            CurveFamily::PowerLaw { c } => format!("power_law(c={c})"),
            CurveFamily::Hyperboloid => "hyperboloid".into(),
            CurveFamily::Exponential => "exponential".into(),
            CurveFamily::Monomial { c } => format!("monomial(c={c})"),
            CurveFamily::CircleArc => "circle_arc".into(),
            CurveFamily::Rational { c } => format!("rational(c={c})"),
            CurveFamily::Arctan => "arctan".into(),
            CurveFamily::PiecewiseLinear(_) => "piecewise_linear".into(),
            CurveFamily::Custom { name, .. } => name.clone(),
        }
    }

    /// Working domain in the current coordinates.
    pub fn domain(&self) -> Domain {
        Domain { lo: self.domain.lo - self.affine.xi_shift, hi: self.domain.hi - self.affine.xi_shift }
    }

    fn base_value(&self, x: f64) -> f64 {
        match &self.family {
            CurveFamily::PowerLaw { c } => (0.0 - x).powf(-c),
            CurveFamily::Hyperboloid => (1.0 + x * x).sqrt(),
            CurveFamily::Exponential => x.exp2(),
            CurveFamily::Monomial { c } => x.powf(*c) / c,
            CurveFamily::CircleArc => -(1.0 - x * x).sqrt(),
            CurveFamily::Rational { c } => x / (x + c),
            CurveFamily::Arctan => x.atan(),
            CurveFamily::PiecewiseLinear(p) => p.value(x),
            CurveFamily::Custom { value, .. } => value(x),
        }
    }

    fn base_slope(&self, x: f64) -> f64 {
        match &self.family {
            // 0.0 - x keeps the sign of zero positive at the endpoint
            CurveFamily::PowerLaw { c } => c * (0.0 - x).powf(-c - 1.0),
            CurveFamily::Hyperboloid => x / (1.0 + x * x).sqrt(),
            CurveFamily::Exponential => LN_2 * x.exp2(),
            CurveFamily::Monomial { c } => x.powf(c - 1.0),
            CurveFamily::CircleArc => x / (1.0 - x * x).sqrt(),
            CurveFamily::Rational { c } => {
                let d = x + c;
                c / (d * d)
            }
            CurveFamily::Arctan => 1.0 / (1.0 + x * x),
            CurveFamily::PiecewiseLinear(p) => p.slope_at(x),
            CurveFamily::Custom { slope, .. } => slope(x),
        }
    }

    fn base_lower_limit(&self) -> Option<f64> {
        let lo = self.domain.lo;
        match &self.family {
            CurveFamily::Rational { .. } if lo == f64::NEG_INFINITY => Some(1.0),
            CurveFamily::Arctan if lo == f64::NEG_INFINITY => Some(-FRAC_PI_2),
            CurveFamily::PiecewiseLinear(_) => None,
            CurveFamily::Custom { lower_limit, .. } => *lower_limit,
            _ => {
                let v = self.base_value(lo);
                v.is_finite().then_some(v)
            }
        }
    }

    /// γ(ξ).
    pub fn value(&self, xi: f64) -> f64 {
        let a = self.affine;
        a.eta_scale * self.base_value(xi + a.xi_shift) + a.eta_shift
    }

    /// γ'(ξ).
    pub fn slope(&self, xi: f64) -> f64 {
        let a = self.affine;
        a.eta_scale * self.base_slope(xi + a.xi_shift)
    }

    /// `(a_∞, b_∞)`: the lower domain end and the limit of γ there.
    pub fn lower_limits(&self) -> (f64, Option<f64>) {
        let a = self.affine;
        let b = self.base_lower_limit().map(|v| a.eta_scale * v + a.eta_shift);
        (self.domain().lo, b)
    }

    /// Composes an affine change of coordinates: the new curve is
    /// `eta_scale·γ(ξ + xi_shift) + eta_shift`.
    pub fn renormalized(&self, xi_shift: f64, eta_shift: f64, eta_scale: f64) -> Result<Self> {
        if !(eta_scale.is_finite() && eta_scale > 0.0) || !xi_shift.is_finite() || !eta_shift.is_finite() {
            return Err(invalid("renormalization needs finite shifts and a positive scale"));
        }
        let a = self.affine;
        let mut out = self.clone();
        out.affine = Affine {
            xi_shift: a.xi_shift + xi_shift,
            eta_shift: eta_scale * a.eta_shift + eta_shift,
            eta_scale: eta_scale * a.eta_scale,
        };
        Ok(out)
    }

    /// Moves `x0` to the origin with `γ(0) = 0` and `γ'(0) = 1`.
    pub fn normalized_at(&self, x0: f64) -> Result<Self> {
        let s = self.slope(x0);
        let v = self.value(x0);
        if !(s.is_finite() && s > 0.0 && v.is_finite()) {
            return Err(invalid(format!("cannot normalize at {x0}: slope {s}, value {v}")));
        }
        self.renormalized(x0, -v / s, 1.0 / s)
    }

    /// Largest relative mismatch between γ' and a central difference of γ.
    pub fn derivative_mismatch(&self, points: &[f64]) -> f64 {
        points
            .iter()
            .map(|&x| {
                let h = 1e-6 * x.abs().max(1e-3);
                let fd = (self.value(x + h) - self.value(x - h)) / (2.0 * h);
                let s = self.slope(x);
                (fd - s).abs() / s.abs().max(f64::MIN_POSITIVE)
            })
            .fold(0.0, f64::max)
    }

    /// Solves `γ'(ξ) = t` by bisection; `None` when `t` is outside the slope range.
    pub fn solve_slope(&self, t: f64, max_iter: u32) -> Option<f64> {
        let Domain { lo, hi } = self.domain();
        let anchor = if hi.is_finite() {
            hi
        } else if lo.is_finite() {
            lo
        } else {
            0.0
        };
        let below = |x: f64| self.slope(x) <= t;
        let above = |x: f64| self.slope(x) >= t;

        let mut l = if lo.is_finite() {
            if !below(lo) {
                return None;
            }
            lo
        } else {
            expand(anchor, -1.0, &below)?
        };
        let mut h = if hi.is_finite() {
            if !above(hi) {
                return None;
            }
            hi
        } else {
            expand(anchor, 1.0, &above)?
        };
        if l > h {
            return None;
        }
        for _ in 0..max_iter {
            let m = 0.5 * (l + h);
            if m <= l || m >= h {
                break;
            }
            if self.slope(m) < t {
                l = m;
            } else {
                h = m;
            }
        }
        let (el, eh) = ((self.slope(l) - t).abs(), (self.slope(h) - t).abs());
        Some(if el.is_finite() && (el <= eh || !eh.is_finite()) { l } else { h })
    }
}

fn expand(anchor: f64, dir: f64, ok: &dyn Fn(f64) -> bool) -> Option<f64> {
    let mut step = 1.0;
    for _ in 0..1100 {
        let x = anchor + dir * step;
        if !x.is_finite() {
            return None;
        }
        if ok(x) {
            return Some(x);
        }
        step *= 2.0;
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Decreasing,
    Increasing,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Decreasing => "decreasing",
            Self::Increasing => "increasing",
        }
    }
}

/// Truncated sequences `a_j`, `b_j`. Position `k` holds the term with
/// paper index `first_index + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SequencePair {
    a: Vec<f64>,
    b: Vec<f64>,
    first_index: u32,
    direction: Direction,
    a_inf: Option<f64>,
    b_inf: Option<f64>,
}

fn direction_of(v: &[f64]) -> Result<Direction> {
    let dir = if v[1] > v[0] { Direction::Increasing } else { Direction::Decreasing };
    for (k, w) in v.windows(2).enumerate() {
        let ok = match dir {
            Direction::Increasing => w[1] > w[0],
            Direction::Decreasing => w[1] < w[0],
        };
        if !ok || !w[0].is_finite() || !w[1].is_finite() {
            return Err(Error::NotMonotone { position: k + 1 });
        }
    }
    Ok(dir)
}

impl SequencePair {
    pub fn new(a: Vec<f64>, b: Vec<f64>, first_index: u32) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch { a: a.len(), b: b.len() });
        }
        if a.len() < 2 {
            return Err(Error::TooShort { needed: 1, got: a.len().saturating_sub(1) });
        }
        let da = direction_of(&a)?;
        let db = direction_of(&b)?;
        if da != db {
            return Err(invalid("a and b must be monotone in the same direction"));
        }
        Ok(Self { a, b, first_index, direction: da, a_inf: None, b_inf: None })
    }

    /// Attaches limits. `a_inf` may be `-∞`; `b_inf` must be finite.
    pub fn with_limits(mut self, a_inf: Option<f64>, b_inf: Option<f64>) -> Result<Self> {
        if let Some(b) = b_inf {
            if !b.is_finite() {
                return Err(Error::LimitRequired);
            }
        }
        if matches!(a_inf, Some(x) if x.is_nan()) {
            return Err(invalid("a_inf is NaN"));
        }
        self.a_inf = a_inf;
        self.b_inf = b_inf;
        Ok(self)
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// Truncation J (number of steps).
    pub fn steps(&self) -> usize {
        self.a.len() - 1
    }

    pub fn first_index(&self) -> u32 {
        self.first_index
    }

    /// Paper index of position `k`.
    pub fn index(&self, k: usize) -> u32 {
        self.first_index + k as u32
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn a_inf(&self) -> Option<f64> {
        self.a_inf
    }

    pub fn b_inf(&self) -> Option<f64> {
        self.b_inf
    }

    /// Keeps positions `0..=steps`.
    pub fn truncated(&self, steps: usize) -> Result<Self> {
        if steps == 0 || steps > self.steps() {
            return Err(Error::TooShort { needed: steps, got: self.steps() });
        }
        let mut out = self.clone();
        out.a.truncate(steps + 1);
        out.b.truncate(steps + 1);
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Paper index of the first term; `None` picks the smallest attained slope index.
    pub first_index: Option<u32>,
    pub max_iter: u32,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self { first_index: None, max_iter: DEFAULT_MAX_ITER }
    }
}

/// `a_j` with `γ'(a_j) = 2^-j` and `b_j = γ(a_j)` for `steps + 1` consecutive `j`.
pub fn build_dyadic_slope_sequence(curve: &CurveSpec, steps: usize) -> Result<SequencePair> {
    build_dyadic_slope_sequence_with(curve, steps, BuildOptions::default())
}

pub fn build_dyadic_slope_sequence_with(
    curve: &CurveSpec,
    steps: usize,
    opts: BuildOptions,
) -> Result<SequencePair> {
    if steps == 0 {
        return Err(Error::TooShort { needed: 1, got: 0 });
    }
    let slope_at = |j: u32| curve.solve_slope((-(j as f64)).exp2(), opts.max_iter);
    let first = match opts.first_index {
        Some(f) => f,
        None => (0..=MAX_FIRST_INDEX)
            .find(|&j| slope_at(j).is_some())
            .ok_or(Error::NoFeasibleSlope { searched: MAX_FIRST_INDEX })?,
    };
    let mut a = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        match slope_at(first + k as u32) {
            Some(x) => a.push(x),
            None if k == 0 => return Err(Error::TruncationExceedsRange { requested: steps, max_feasible: 0 }),
            None => return Err(Error::TruncationExceedsRange { requested: steps, max_feasible: k - 1 }),
        }
    }
    let b = a.iter().map(|&x| curve.value(x)).collect();
    let (a_inf, b_inf) = curve.lower_limits();
    SequencePair::new(a, b, first)?.with_limits(Some(a_inf), b_inf)
}

/// Tolerance on the defining inequalities of the classifiers.
pub const CLASSIFY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum SequenceLabel {
    Convex,
    Concave,
    Arithmetic,
    Lacunary(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub convex: bool,
    pub concave: bool,
    pub arithmetic: bool,
    pub lacunary: bool,
    /// `min |a_{j+1}| / |a_j|` over positions with `a_j != 0`.
    pub ratio_q: f64,
    /// Extremes of `d_{j+1}/d_j` with `d_j = |a_j - a_{j-1}|`.
    pub min_step_ratio: f64,
    pub max_step_ratio: f64,
    /// Positions `j` where `d_{j+1} >= d_j` fails.
    pub convex_failures: Vec<usize>,
    /// Positions `j` where `d_{j+1} <= d_j` fails.
    pub concave_failures: Vec<usize>,
}

impl Classification {
    pub fn labels(&self) -> Vec<SequenceLabel> {
        let mut out = Vec::new();
        if self.arithmetic {
            out.push(SequenceLabel::Arithmetic);
        }
        if self.convex {
            out.push(SequenceLabel::Convex);
        }
        if self.concave {
            out.push(SequenceLabel::Concave);
        }
        if self.lacunary {
            out.push(SequenceLabel::Lacunary(self.ratio_q));
        }
        out
    }

    pub fn is_none(&self) -> bool {
        !(self.convex || self.concave || self.lacunary)
    }
}

/// Classifies `{|a_j|}` as convex / concave / arithmetic / lacunary.
///
/// Convexity and concavity are read off the step magnitudes `|a_j - a_{j-1}|`
/// (non-decreasing resp. non-increasing), which is the midpoint condition for an
/// increasing `|a_j|` and the step condition used for convergent sequences.
pub fn classify_sequence(seq: &SequencePair) -> Result<Classification> {
    let a = seq.a();
    if seq.steps() < 3 {
        return Err(Error::TooShort { needed: 3, got: seq.steps() });
    }
    let alpha: Vec<f64> = a.iter().map(|x| x.abs()).collect();
    let up = alpha[1] > alpha[0];
    for k in 1..alpha.len() {
        let ok = if up { alpha[k] > alpha[k - 1] } else { alpha[k] < alpha[k - 1] };
        if !ok {
            return Err(Error::ClassificationUndefined { position: k });
        }
    }
    let d: Vec<f64> = a.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let mut convex_failures = Vec::new();
    let mut concave_failures = Vec::new();
    let (mut lo_r, mut hi_r) = (f64::INFINITY, 0.0f64);
    for k in 1..d.len() {
        // d[k-1] = |a_k - a_{k-1}|, d[k] = |a_{k+1} - a_k|
        if d[k] < d[k - 1] - CLASSIFY_TOL {
            convex_failures.push(k);
        }
        if d[k] > d[k - 1] + CLASSIFY_TOL {
            concave_failures.push(k);
        }
        let r = d[k] / d[k - 1];
        lo_r = lo_r.min(r);
        hi_r = hi_r.max(r);
    }
    let ratio_q = alpha
        .windows(2)
        .filter(|w| w[0] > 0.0)
        .map(|w| w[1] / w[0])
        .fold(f64::INFINITY, f64::min);
    let convex = convex_failures.is_empty();
    let concave = concave_failures.is_empty();
    Ok(Classification {
        convex,
        concave,
        arithmetic: convex && concave,
        lacunary: ratio_q > 1.0 + CLASSIFY_TOL,
        ratio_q,
        min_step_ratio: lo_r,
        max_step_ratio: hi_r,
        convex_failures,
        concave_failures,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeBand {
    pub inf_slope: f64,
    pub sup_slope: f64,
    pub band_ok: bool,
}

pub const SLOPE_BAND_SAMPLES: usize = 10_000;

/// Extremes of γ' on a uniform sample of `[lo, hi)`.
pub fn slope_band_check(curve: &CurveSpec, lo: f64, hi: f64) -> Result<SlopeBand> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::EmptyInterval { lo, hi });
    }
    let dom = curve.domain();
    if lo < dom.lo || hi > dom.hi {
        return Err(invalid(format!("[{lo}, {hi}) is not inside the curve domain")));
    }
    let step = (hi - lo) / SLOPE_BAND_SAMPLES as f64;
    let (mut inf_slope, mut sup_slope) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..SLOPE_BAND_SAMPLES {
        let s = curve.slope(lo + step * i as f64);
        inf_slope = inf_slope.min(s);
        sup_slope = sup_slope.max(s);
    }
    Ok(SlopeBand { inf_slope, sup_slope, band_ok: inf_slope > 0.0 && sup_slope <= 2.0 * inf_slope })
}

/// A polyline through points strictly decreasing in both coordinates.
///
/// Vertex `k` is `(a_k, b_k)` and segment `k` joins vertices `k` and `k+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonalCurve {
    a: Vec<f64>,
    b: Vec<f64>,
    slopes: Vec<f64>,
}

impl PolygonalCurve {
    pub fn new(vertices: &[(f64, f64)]) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::TooShort { needed: 1, got: vertices.len().saturating_sub(1) });
        }
        let mut slopes = Vec::with_capacity(vertices.len() - 1);
        for (k, w) in vertices.windows(2).enumerate() {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            if !(x1 < x0 && y1 < y0) {
                return Err(Error::VerticesNotDecreasing { index: k + 1 });
            }
            let s = (y0 - y1) / (x0 - x1);
            if !(s > 0.0 && s < 1.0) {
                return Err(Error::SlopeOutOfRange { index: k, slope: s });
            }
            slopes.push(s);
        }
        Ok(Self {
            a: vertices.iter().map(|v| v.0).collect(),
            b: vertices.iter().map(|v| v.1).collect(),
            slopes,
        })
    }

    pub fn from_sequence(seq: &SequencePair) -> Result<Self> {
        let v: Vec<(f64, f64)> = seq.a().iter().copied().zip(seq.b().iter().copied()).collect();
        Self::new(&v)
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn segments(&self) -> usize {
        self.slopes.len()
    }

    pub fn vertex(&self, k: usize) -> (f64, f64) {
        (self.a[k], self.b[k])
    }

    pub fn slope(&self, k: usize) -> f64 {
        self.slopes[k]
    }

    pub fn is_convex(&self) -> bool {
        self.slopes.windows(2).all(|w| w[1] < w[0])
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.a[self.a.len() - 1], self.a[0])
    }

    /// Segment `k` with `a_{k+1} <= ξ < a_k` (the last segment also takes `ξ = a_0`).
    fn locate(&self, xi: f64) -> Option<usize> {
        let p = self.a.partition_point(|&x| x > xi);
        if p == self.a.len() {
            return None;
        }
        if p == 0 {
            return (xi == self.a[0]).then_some(0);
        }
        Some(p - 1)
    }

    /// Height of the polyline; NaN outside `[a_J, a_0]`.
    pub fn value(&self, xi: f64) -> f64 {
        match self.locate(xi) {
            None => f64::NAN,
            Some(k) if xi == self.a[k] => self.b[k],
            Some(k) if xi == self.a[k + 1] => self.b[k + 1],
            Some(k) => self.b[k + 1] + self.slopes[k] * (xi - self.a[k + 1]),
        }
    }

    pub fn slope_at(&self, xi: f64) -> f64 {
        self.locate(xi).map_or(f64::NAN, |k| self.slopes[k])
    }

    /// `ξ ∈ [a_J, a_0]` and `η` on or above the polyline.
    pub fn in_epigraph(&self, xi: f64, eta: f64) -> bool {
        let y = self.value(xi);
        !y.is_nan() && eta >= y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn power_law_closed_form() {
        for &c in &[0.5, 1.0, 2.0] {
            let seq = build_dyadic_slope_sequence(&CurveSpec::power_law(c).unwrap(), 12).unwrap();
            assert_eq!(seq.first_index(), 0);
            for (j, &a) in seq.a().iter().enumerate() {
                let expect = -(c * (j as f64).exp2()).powf(1.0 / (c + 1.0));
                assert!(close(a, expect, 1e-10), "c={c} j={j}: {a} vs {expect}");
            }
            assert_eq!(seq.direction(), Direction::Decreasing);
            assert_eq!(seq.b_inf(), Some(0.0));
        }
    }

    #[test]
    fn hyperboloid_starts_at_one() {
        let seq = build_dyadic_slope_sequence(&CurveSpec::hyperboloid(), 3).unwrap();
        assert_eq!(seq.first_index(), 1);
        assert!((seq.a()[0] - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        for (k, &a) in seq.a().iter().enumerate() {
            let j = seq.index(k) as f64;
            assert!((a - 1.0 / ((2.0 * j).exp2() - 1.0).sqrt()).abs() < 1e-12);
        }
        assert_eq!(seq.a_inf(), Some(0.0));
        assert_eq!(seq.b_inf(), Some(1.0));
    }

    #[test]
    fn exponential_unit_gaps() {
        let seq = build_dyadic_slope_sequence(&CurveSpec::exponential(), 3).unwrap();
        let a0 = -LN_2.log2();
        assert!((seq.a()[0] - a0).abs() < 1e-12);
        for w in seq.a().windows(2) {
            assert!((w[0] - w[1] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn other_families_closed_forms() {
        let mono = build_dyadic_slope_sequence(&CurveSpec::monomial(3.0).unwrap(), 8).unwrap();
        for (j, &a) in mono.a().iter().enumerate() {
            assert!((a - (-(j as f64) / 2.0).exp2()).abs() < 1e-12);
        }
        let circ = build_dyadic_slope_sequence(&CurveSpec::circle_arc(), 8).unwrap();
        for (j, &a) in circ.a().iter().enumerate() {
            assert!((a - 1.0 / ((2.0 * j as f64).exp2() + 1.0).sqrt()).abs() < 1e-12);
        }
        assert_eq!(circ.b_inf(), Some(-1.0));
        let rat = build_dyadic_slope_sequence(&CurveSpec::rational(2.0).unwrap(), 8).unwrap();
        for (j, &a) in rat.a().iter().enumerate() {
            let e = -2.0 - (2.0 * (j as f64).exp2()).sqrt();
            assert!(close(a, e, 1e-12));
        }
        assert_eq!(rat.b_inf(), Some(1.0));
        let at = build_dyadic_slope_sequence(&CurveSpec::arctan(), 8).unwrap();
        for (j, &a) in at.a().iter().enumerate() {
            // γ'' vanishes at a_0 = 0, so that root is only determined to about sqrt(eps)
            let tol = if j == 0 { 1e-7 } else { 1e-12 };
            assert!(close(a, -((j as f64).exp2() - 1.0).sqrt(), tol));
        }
        assert_eq!(at.b_inf(), Some(-FRAC_PI_2));
    }

    #[test]
    fn truncation_error_reports_feasible_length() {
        let curve = CurveSpec::hyperboloid().with_domain(0.01, 1.0 / 3f64.sqrt()).unwrap();
        // slope at 0.01 is about 0.01, so 2^-6 is the last attained slope
        match build_dyadic_slope_sequence(&curve, 12) {
            Err(Error::TruncationExceedsRange { requested: 12, max_feasible }) => assert_eq!(max_feasible, 5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn derivatives_match_differences() {
        let curves = [
            (CurveSpec::power_law(1.5).unwrap(), [-3.0, -1.0, -0.2]),
            (CurveSpec::hyperboloid(), [0.05, 0.3, 0.5]),
            (CurveSpec::exponential(), [-4.0, 0.0, 2.0]),
            (CurveSpec::monomial(2.5).unwrap(), [0.1, 0.5, 0.9]),
            (CurveSpec::circle_arc(), [0.1, 0.4, 0.7]),
            (CurveSpec::rational(1.0).unwrap(), [-9.0, -3.0, -1.5]),
            (CurveSpec::arctan(), [-6.0, -1.0, -0.1]),
        ];
        for (c, pts) in &curves {
            assert!(c.derivative_mismatch(pts) < 1e-6, "{}", c.name());
        }
    }

    #[test]
    fn normalization_moves_vertex_to_origin() {
        let e = CurveSpec::exponential();
        let a0 = e.solve_slope(1.0, 200).unwrap();
        let n = e.normalized_at(a0).unwrap();
        assert!(n.value(0.0).abs() < 1e-14);
        assert!((n.slope(0.0) - 1.0).abs() < 1e-14);
        let seq = build_dyadic_slope_sequence(&n, 4).unwrap();
        for (j, &a) in seq.a().iter().enumerate() {
            assert!((a + j as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn classify_examples() {
        let p = build_dyadic_slope_sequence(&CurveSpec::power_law(1.0).unwrap(), 6).unwrap();
        let c = classify_sequence(&p).unwrap();
        assert!(c.lacunary);
        assert!((c.ratio_q - 2f64.sqrt()).abs() < 1e-12);

        let ar = SequencePair::new((0..6).map(|j| -(j as f64) - 1.0).collect(), (0..6).map(|j| -(j as f64)).collect(), 0)
            .unwrap();
        let c = classify_sequence(&ar).unwrap();
        assert!(c.arithmetic && c.convex && c.concave);

        let h = build_dyadic_slope_sequence(&CurveSpec::hyperboloid(), 12).unwrap();
        let c = classify_sequence(&h).unwrap();
        assert!(c.concave && !c.convex && !c.lacunary);
    }

    #[test]
    fn classify_rejects_sign_change() {
        let seq = SequencePair::new(vec![0.5, -0.5, -1.5, -2.5], vec![3.0, 2.0, 1.0, 0.0], 0).unwrap();
        assert_eq!(classify_sequence(&seq), Err(Error::ClassificationUndefined { position: 1 }));
        let short = SequencePair::new(vec![3.0, 2.0, 1.0], vec![3.0, 2.0, 1.0], 0).unwrap();
        assert!(matches!(classify_sequence(&short), Err(Error::TooShort { .. })));
    }

    #[test]
    fn slope_bands() {
        let c = CurveSpec::power_law(1.0).unwrap();
        let s = build_dyadic_slope_sequence(&c, 6).unwrap();
        for j in 0..5 {
            let band = slope_band_check(&c, s.a()[j + 1], s.a()[j]).unwrap();
            assert!(band.band_ok);
            assert!((band.inf_slope - (-(j as f64) - 1.0).exp2()).abs() < 1e-12);
            assert!(band.sup_slope <= (-(j as f64)).exp2() && band.sup_slope > 0.99 * (-(j as f64)).exp2());
            let wide = slope_band_check(&c, s.a()[j + 2], s.a()[j]).unwrap();
            assert!(!wide.band_ok);
        }
        let poly = PolygonalCurve::new(&[(1.0, 1.0), (0.0, 0.25)]).unwrap();
        let lin = CurveSpec::piecewise_linear(poly);
        let b = slope_band_check(&lin, 0.0, 1.0).unwrap();
        assert_eq!((b.inf_slope, b.sup_slope, b.band_ok), (0.75, 0.75, true));
        assert!(slope_band_check(&lin, 0.5, 0.5).is_err());
    }

    #[test]
    fn polygon_validation() {
        assert_eq!(
            PolygonalCurve::new(&[(2.0, 2.0), (1.0, 1.5), (0.0, 0.0)]),
            Err(Error::SlopeOutOfRange { index: 1, slope: 1.5 })
        );
        assert_eq!(
            PolygonalCurve::new(&[(2.0, 2.0), (2.5, 1.0)]),
            Err(Error::VerticesNotDecreasing { index: 1 })
        );
        let p = PolygonalCurve::new(&[(2.0, 2.0), (1.0, 1.5), (0.0, 1.25)]).unwrap();
        assert!(p.is_convex());
        assert_eq!(p.value(2.0), 2.0);
        assert_eq!(p.value(1.0), 1.5);
        assert_eq!(p.value(0.5), 1.375);
        assert!(p.value(2.1).is_nan() && p.value(-0.1).is_nan());
    }
}
