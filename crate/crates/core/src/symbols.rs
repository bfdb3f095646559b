//! Multiplier symbols on the frequency plane and their sampling.

use alloc::{boxed::Box, sync::Arc, vec, vec::Vec};
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::bump::Bump1d;
use crate::curves::{CurveSpec, Direction, PolygonalCurve, SequencePair};
use crate::intervals::Interval;
use crate::{Error, Result};

pub type SymbolFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    SharpIndicator,
    SmoothAdapted,
}

/// Axis-aligned box `[xi_lo, xi_hi] × [eta_lo, eta_hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub xi_lo: f64,
    pub xi_hi: f64,
    pub eta_lo: f64,
    pub eta_hi: f64,
}

impl Rect {
    pub fn new(xi_lo: f64, xi_hi: f64, eta_lo: f64, eta_hi: f64) -> Result<Self> {
        let ok = [xi_lo, xi_hi, eta_lo, eta_hi].iter().all(|v| v.is_finite()) && xi_lo < xi_hi && eta_lo < eta_hi;
        if !ok {
            return Err(Error::EmptyInterval { lo: xi_lo, hi: xi_hi });
        }
        Ok(Self { xi_lo, xi_hi, eta_lo, eta_hi })
    }

    pub fn union(&self, o: &Rect) -> Rect {
        Rect {
            xi_lo: self.xi_lo.min(o.xi_lo),
            xi_hi: self.xi_hi.max(o.xi_hi),
            eta_lo: self.eta_lo.min(o.eta_lo),
            eta_hi: self.eta_hi.max(o.eta_hi),
        }
    }

    pub fn intersect(&self, o: &Rect) -> Option<Rect> {
        let r = Rect {
            xi_lo: self.xi_lo.max(o.xi_lo),
            xi_hi: self.xi_hi.min(o.xi_hi),
            eta_lo: self.eta_lo.max(o.eta_lo),
            eta_hi: self.eta_hi.min(o.eta_hi),
        };
        (r.xi_lo <= r.xi_hi && r.eta_lo <= r.eta_hi).then_some(r)
    }
}

#[derive(Clone)]
enum Shape {
    Constant(f64),
    Product(Interval, Interval),
    /// Σ_{k=1}^{J-1} 1_{[a_{k+1},a_k)}(ξ) 1_{[b_k,b_0)}(η)
    Staircase { a: Vec<f64>, b: Vec<f64> },
    /// Σ_{k=1}^{J-1} 1_{(u_0,u_k]}(ξ) 1_{[v_k,v_{k+1})}(η)
    IncreasingStaircase { u: Vec<f64>, v: Vec<f64> },
    /// Σ_{k=0}^{J-1} 1_{[a_{k+1},a_k)}(ξ) 1_{(b_∞,b_k)}(η)
    Hyp2Complement { a: Vec<f64>, b: Vec<f64>, b_inf: f64 },
    /// 1_{[a_{j+1},a_j)}(ξ) 1_{[γ(ξ),b_j)}(η)
    BoundaryPiece { curve: CurveSpec, xi: Interval, top: f64 },
    /// 1_I(ξ) 1_{η >= γ(ξ)}
    Epigraph { curve: CurveSpec, xi: Interval },
    Polygonal(PolygonalCurve),
    /// `ξ ∈ [a_{k+1},a_k)`, segment height `<= η < b_k`.
    Triangle { p0: (f64, f64), p1: (f64, f64) },
    RectSum(Vec<(Interval, Interval)>),
    Bump(Bump1d, Bump1d),
    Masked(Box<SymbolSpec>, Interval, Interval),
    Sum(Vec<SymbolSpec>),
    Custom(SymbolFn),
}

/// A symbol on the frequency plane with its kind and bounding box.
#[derive(Clone)]
pub struct SymbolSpec {
    shape: Shape,
    kind: SymbolKind,
    bbox: Option<Rect>,
}

impl fmt::Debug for SymbolSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymbolSpec").field("kind", &self.kind).field("bbox", &self.bbox).finish_non_exhaustive()
    }
}

fn interval_bounds(i: &Interval) -> Option<(f64, f64)> {
    (i.lo().is_finite() && i.hi().is_finite()).then(|| (i.lo(), i.hi()))
}

fn product_bbox(x: &Interval, y: &Interval) -> Option<Rect> {
    let (a, b) = interval_bounds(x)?;
    let (c, d) = interval_bounds(y)?;
    Some(Rect { xi_lo: a, xi_hi: b, eta_lo: c, eta_hi: d })
}

fn merge_boxes<'a>(it: impl Iterator<Item = Option<Rect>> + 'a) -> Option<Rect> {
    let mut acc: Option<Rect> = None;
    for r in it {
        let r = r?;
        acc = Some(acc.map_or(r, |a| a.union(&r)));
    }
    acc
}

impl SymbolSpec {
    fn sharp(shape: Shape, bbox: Option<Rect>) -> Self {
        Self { shape, kind: SymbolKind::SharpIndicator, bbox }
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn bbox(&self) -> Option<Rect> {
        self.bbox
    }

    pub fn is_bounded(&self) -> bool {
        self.bbox.is_some()
    }

    /// m ≡ 1.
    pub fn ones() -> Self {
        Self::sharp(Shape::Constant(1.0), None)
    }

    pub fn zero() -> Self {
        Self::sharp(Shape::Constant(0.0), None)
    }

    /// `1_I(ξ) 1_K(η)`.
    pub fn rectangle(xi: Interval, eta: Interval) -> Self {
        Self::sharp(Shape::Product(xi, eta), product_bbox(&xi, &eta))
    }

    /// `Σ 1_{I_k}(ξ) 1_{K_k}(η)`; callers guarantee disjoint supports for a sharp result.
    pub fn rect_sum(terms: Vec<(Interval, Interval)>) -> Self {
        let bbox = merge_boxes(terms.iter().map(|(x, y)| product_bbox(x, y)));
        Self::sharp(Shape::RectSum(terms), bbox)
    }

    pub fn custom(f: SymbolFn, kind: SymbolKind, bbox: Option<Rect>) -> Self {
        Self { shape: Shape::Custom(f), kind, bbox }
    }

    /// Sum of symbols; sharp only if every part is sharp.
    pub fn sum(parts: Vec<SymbolSpec>) -> Self {
        let kind = if parts.iter().all(|p| p.kind == SymbolKind::SharpIndicator) {
            SymbolKind::SharpIndicator
        } else {
            SymbolKind::SmoothAdapted
        };
        let bbox = merge_boxes(parts.iter().map(|p| p.bbox));
        Self { shape: Shape::Sum(parts), kind, bbox }
    }

    /// Product with `1_I(ξ) 1_K(η)`.
    pub fn masked(self, xi: Interval, eta: Interval) -> Self {
        let mask = product_bbox(&xi, &eta);
        let bbox = match (self.bbox, mask) {
            (Some(a), Some(b)) => a.intersect(&b).or(Some(b)),
            (a, b) => a.or(b),
        };
        let kind = self.kind;
        Self { shape: Shape::Masked(Box::new(self), xi, eta), kind, bbox }
    }

    pub fn eval(&self, xi: f64, eta: f64) -> f64 {
        match &self.shape {
            Shape::Constant(c) => *c,
            Shape::Product(x, y) => ind(x.contains(xi) && y.contains(eta)),
            Shape::Staircase { a, b } => {
                let p = a.partition_point(|&x| x > xi);
                let j = a.len() - 1;
                ind((2..=j).contains(&p) && eta >= b[p - 1] && eta < b[0])
            }
            Shape::IncreasingStaircase { u, v } => {
                // η ∈ [v_k, v_{k+1}) fixes k
                let p = v.partition_point(|&y| y <= eta);
                let j = u.len() - 1;
                ind((2..=j).contains(&p) && xi > u[0] && xi <= u[p - 1])
            }
            Shape::Hyp2Complement { a, b, b_inf } => {
                let p = a.partition_point(|&x| x > xi);
                let j = a.len() - 1;
                ind((1..=j).contains(&p) && eta > *b_inf && eta < b[p - 1])
            }
            Shape::BoundaryPiece { curve, xi: iv, top } => {
                ind(iv.contains(xi) && eta < *top && eta >= curve.value(xi))
            }
            Shape::Epigraph { curve, xi: iv } => ind(iv.contains(xi) && eta >= curve.value(xi)),
            Shape::Polygonal(p) => ind(p.in_epigraph(xi, eta)),
            Shape::Triangle { p0, p1 } => {
                // vertices p0 = (a_k,b_k), corner (a_{k+1},b_k), p1 = (a_{k+1},b_{k+1})
                let in_x = xi >= p1.0 && xi < p0.0;
                let s = (p0.1 - p1.1) / (p0.0 - p1.0);
                ind(in_x && eta < p0.1 && eta >= p1.1 + s * (xi - p1.0))
            }
            Shape::RectSum(terms) => terms.iter().filter(|(x, y)| x.contains(xi) && y.contains(eta)).count() as f64,
            Shape::Bump(bx, by) => bx.eval(xi) * by.eval(eta),
            Shape::Masked(inner, x, y) => {
                if x.contains(xi) && y.contains(eta) {
                    inner.eval(xi, eta)
                } else {
                    0.0
                }
            }
            Shape::Sum(parts) => parts.iter().map(|p| p.eval(xi, eta)).sum(),
            Shape::Custom(f) => f(xi, eta),
        }
    }
}

fn ind(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn require_decreasing(seq: &SequencePair) -> Result<()> {
    if seq.direction() == Direction::Decreasing {
        Ok(())
    } else {
        Err(Error::UseIncreasingStaircase)
    }
}

/// `m_{a,b}` over positions `1..J`; bbox `[a_J, a_1) × [b_J, b_0)`.
pub fn staircase_symbol(seq: &SequencePair) -> Result<SymbolSpec> {
    require_decreasing(seq)?;
    let (a, b) = (seq.a().to_vec(), seq.b().to_vec());
    let j = seq.steps();
    if j < 2 {
        return Err(Error::TooShort { needed: 2, got: j });
    }
    let bbox = Rect { xi_lo: a[j], xi_hi: a[1], eta_lo: b[j], eta_hi: b[0] };
    Ok(SymbolSpec::sharp(Shape::Staircase { a, b }, Some(bbox)))
}

/// `m̃_{u,v}` over positions `1..J`; `u`, `v` strictly increasing.
pub fn increasing_staircase_symbol(u: &[f64], v: &[f64]) -> Result<SymbolSpec> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch { a: u.len(), b: v.len() });
    }
    if u.len() < 3 {
        return Err(Error::TooShort { needed: 2, got: u.len().saturating_sub(1) });
    }
    let inc = |s: &[f64]| s.windows(2).all(|w| w[1] > w[0]) && s.iter().all(|x| x.is_finite());
    if !inc(u) || !inc(v) {
        return Err(Error::DecreasingRejected);
    }
    let j = u.len() - 1;
    let bbox = Rect { xi_lo: u[0], xi_hi: u[j - 1], eta_lo: v[1], eta_hi: v[j] };
    Ok(SymbolSpec::sharp(Shape::IncreasingStaircase { u: u.to_vec(), v: v.to_vec() }, Some(bbox)))
}

/// `m_k = 1_{[a_{k+1},a_k)}(ξ) 1_{[γ(ξ),b_k)}(η)` at position `k < J`.
pub fn boundary_piece_symbol(curve: &CurveSpec, seq: &SequencePair, k: usize) -> Result<SymbolSpec> {
    require_decreasing(seq)?;
    if k >= seq.steps() {
        return Err(Error::TooShort { needed: k + 1, got: seq.steps() });
    }
    let (a, b) = (seq.a(), seq.b());
    let xi = Interval::left_closed(a[k + 1], a[k])?;
    let bbox = Rect { xi_lo: a[k + 1], xi_hi: a[k], eta_lo: b[k + 1], eta_hi: b[k] };
    Ok(SymbolSpec::sharp(Shape::BoundaryPiece { curve: curve.clone(), xi, top: b[k] }, Some(bbox)))
}

/// `1_I(ξ) 1_{η >= γ(ξ)}`; unbounded above.
pub fn epigraph_symbol(curve: &CurveSpec, restriction: Interval) -> SymbolSpec {
    SymbolSpec::sharp(Shape::Epigraph { curve: curve.clone(), xi: restriction }, None)
}

/// Epigraph of the polyline through the vertices, over `[a_J, a_0]`.
pub fn polygonal_epigraph_symbol(vertices: &[(f64, f64)]) -> Result<SymbolSpec> {
    Ok(polygonal_from_curve(PolygonalCurve::new(vertices)?))
}

pub fn polygonal_from_curve(poly: PolygonalCurve) -> SymbolSpec {
    SymbolSpec::sharp(Shape::Polygonal(poly), None)
}

/// Region between segment `k` of the polyline and the step above it, i.e.
/// `T_k` with the half-open conventions of the staircase.
pub fn triangle_symbol(poly: &PolygonalCurve, k: usize) -> Result<SymbolSpec> {
    if k >= poly.segments() {
        return Err(Error::TooShort { needed: k + 1, got: poly.segments() });
    }
    let (p0, p1) = (poly.vertex(k), poly.vertex(k + 1));
    let bbox = Rect { xi_lo: p1.0, xi_hi: p0.0, eta_lo: p1.1, eta_hi: p0.1 };
    Ok(SymbolSpec::sharp(Shape::Triangle { p0, p1 }, Some(bbox)))
}

/// `(m₁, m₂, m₃)` of the exponential paraproduct, truncated at `j`:
/// `m₁ = Σ_{1<=k<J} 1_{[-(k+1),-k)}(ξ) 1_{[2^-k,1)}(η)`,
/// `m₂ = Σ_{1<=k<J} 1_{(0,k)}(ξ) 1_{[2^k,2^{k+1})}(η)`, `m₃ = 1_{ξ<=0} 1_{η>=1}`.
pub fn exponential_paraproduct_symbols(j: usize) -> Result<(SymbolSpec, SymbolSpec, SymbolSpec)> {
    if j < 2 {
        return Err(Error::TooShort { needed: 2, got: j });
    }
    // the k = 0 term of m₁ has the empty η-range [1, 1)
    let m1 = (1..j)
        .map(|k| {
            let k = k as f64;
            Ok((Interval::left_closed(-(k + 1.0), -k)?, Interval::left_closed((-k).exp2(), 1.0)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let m2 = (1..j)
        .map(|k| {
            let k = k as f64;
            Ok((Interval::open(0.0, k)?, Interval::left_closed(k.exp2(), (k + 1.0).exp2())?))
        })
        .collect::<Result<Vec<_>>>()?;
    let m3 = SymbolSpec::rectangle(
        Interval::right_closed(f64::NEG_INFINITY, 0.0)?,
        Interval::left_closed(1.0, f64::INFINITY)?,
    );
    Ok((SymbolSpec::rect_sum(m1), SymbolSpec::rect_sum(m2), m3))
}

/// `(rect, complement)` with `rect - complement = m_{a,b}` on the truncated box.
#[derive(Debug, Clone)]
pub struct Hyp2Rewrite {
    pub rect: SymbolSpec,
    pub complement: SymbolSpec,
    /// `a_∞` is `-∞`, so the ξ-side of `rect` stops at `a_J`.
    pub tail_truncated: bool,
}

pub fn hyp2_rewrite_pair(seq: &SequencePair) -> Result<Hyp2Rewrite> {
    require_decreasing(seq)?;
    let b_inf = seq.b_inf().ok_or(Error::LimitRequired)?;
    let (a, b) = (seq.a(), seq.b());
    let j = seq.steps();
    let tail_truncated = !matches!(seq.a_inf(), Some(x) if x.is_finite());
    let rect = SymbolSpec::rectangle(Interval::left_closed(a[j], a[0])?, Interval::open(b_inf, b[0])?);
    let bbox = Rect { xi_lo: a[j], xi_hi: a[0], eta_lo: b_inf, eta_hi: b[0] };
    let complement =
        SymbolSpec::sharp(Shape::Hyp2Complement { a: a.to_vec(), b: b.to_vec(), b_inf }, Some(bbox));
    Ok(Hyp2Rewrite { rect, complement, tail_truncated })
}

/// Smooth bump equal to 1 on the α-shrink of `rect` and supported in `rect`.
pub fn smooth_adapted_symbol(rect: Rect, alpha: f64) -> Result<SymbolSpec> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(crate::error::invalid("alpha must lie in (0, 1)"));
    }
    let bx = Bump1d::adapted(rect.xi_lo, rect.xi_hi, alpha);
    let by = Bump1d::adapted(rect.eta_lo, rect.eta_hi, alpha);
    Ok(SymbolSpec { shape: Shape::Bump(bx, by), kind: SymbolKind::SmoothAdapted, bbox: Some(rect) })
}

/// Sampling resolution and window; cell centres are sampled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid {
    pub nx: usize,
    pub ny: usize,
    pub window: Option<Rect>,
}

/// Row-major samples; row `r` is the `r`-th η value in increasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct Bitmap {
    pub nx: usize,
    pub ny: usize,
    pub window: Rect,
    pub values: Vec<f64>,
}

impl Bitmap {
    pub fn xi(&self, c: usize) -> f64 {
        self.window.xi_lo + (c as f64 + 0.5) * (self.window.xi_hi - self.window.xi_lo) / self.nx as f64
    }

    pub fn eta(&self, r: usize) -> f64 {
        self.window.eta_lo + (r as f64 + 0.5) * (self.window.eta_hi - self.window.eta_lo) / self.ny as f64
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.values[r * self.nx + c]
    }
}

pub fn sample_symbol(sym: &SymbolSpec, grid: &FrequencyGrid) -> Result<Bitmap> {
    let window = grid.window.or(sym.bbox).ok_or(Error::UnboundedSymbol)?;
    if grid.nx == 0 || grid.ny == 0 {
        return Err(crate::error::invalid("grid resolution must be positive"));
    }
    let mut bm = Bitmap { nx: grid.nx, ny: grid.ny, window, values: Vec::with_capacity(grid.nx * grid.ny) };
    for r in 0..grid.ny {
        let eta = bm.eta(r);
        for c in 0..grid.nx {
            let v = sym.eval(bm.xi(c), eta);
            bm.values.push(v);
        }
    }
    Ok(bm)
}

/// Pointwise comparison of two symbols on a grid, with pixels next to the
/// lines `ξ = x_k` or `η = y_k` counted separately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport {
    pub points: usize,
    pub mismatches: usize,
    pub interior_mismatches: usize,
    pub line_mismatches: usize,
    /// Largest number of mismatched pixels in one flagged column or row.
    pub max_per_line: usize,
    pub max_abs_diff: f64,
}

impl IdentityReport {
    pub fn exact(&self) -> bool {
        self.interior_mismatches == 0
    }
}

fn compare_on_grid(
    lhs: &dyn Fn(f64, f64) -> f64,
    rhs: &dyn Fn(f64, f64) -> f64,
    window: Rect,
    nx: usize,
    ny: usize,
    xlines: &[f64],
    ylines: &[f64],
) -> Result<IdentityReport> {
    if nx == 0 || ny == 0 {
        return Err(crate::error::invalid("grid resolution must be positive"));
    }
    let dx = (window.xi_hi - window.xi_lo) / nx as f64;
    let dy = (window.eta_hi - window.eta_lo) / ny as f64;
    let near = |v: f64, lines: &[f64], d: f64| lines.iter().any(|&l| (v - l).abs() <= d);
    let mut rep = IdentityReport {
        points: nx * ny,
        mismatches: 0,
        interior_mismatches: 0,
        line_mismatches: 0,
        max_per_line: 0,
        max_abs_diff: 0.0,
    };
    let mut per_col = vec![0usize; nx];
    let mut per_row = vec![0usize; ny];
    for r in 0..ny {
        let eta = window.eta_lo + (r as f64 + 0.5) * dy;
        let row_flag = near(eta, ylines, dy);
        for c in 0..nx {
            let xi = window.xi_lo + (c as f64 + 0.5) * dx;
            let d = (lhs(xi, eta) - rhs(xi, eta)).abs();
            if d == 0.0 {
                continue;
            }
            rep.mismatches += 1;
            rep.max_abs_diff = rep.max_abs_diff.max(d);
            let col_flag = near(xi, xlines, dx);
            if row_flag || col_flag {
                rep.line_mismatches += 1;
                if col_flag {
                    per_col[c] += 1;
                } else {
                    per_row[r] += 1;
                }
            } else {
                rep.interior_mismatches += 1;
            }
        }
    }
    rep.max_per_line = per_col.iter().chain(&per_row).copied().max().unwrap_or(0);
    Ok(rep)
}

/// `1_{epigraph} = m_{a,b} + Σ_{k<J} m_k` on `[a_J, a_0] × [b_J, b_0]`.
pub fn decomposition_check(curve: &CurveSpec, seq: &SequencePair, nx: usize, ny: usize) -> Result<IdentityReport> {
    let stair = staircase_symbol(seq)?;
    let pieces = (0..seq.steps()).map(|k| boundary_piece_symbol(curve, seq, k)).collect::<Result<Vec<_>>>()?;
    let (a, b) = (seq.a(), seq.b());
    let j = seq.steps();
    let window = Rect { xi_lo: a[j], xi_hi: a[0], eta_lo: b[j], eta_hi: b[0] };
    let epi = epigraph_symbol(curve, Interval::left_closed(a[j], a[0])?);
    let lhs = |x: f64, y: f64| if y < b[0] { epi.eval(x, y) } else { 0.0 };
    let rhs = |x: f64, y: f64| stair.eval(x, y) + pieces.iter().map(|p| p.eval(x, y)).sum::<f64>();
    compare_on_grid(&lhs, &rhs, window, nx, ny, a, b)
}

/// `rect - complement = m_{a,b}` on `[a_J, a_0] × [b_∞ - δ, b_0 + δ]`, `δ = (b_0 - b_∞)/16`.
pub fn hyp2_rewrite_check(seq: &SequencePair, nx: usize, ny: usize) -> Result<IdentityReport> {
    let pair = hyp2_rewrite_pair(seq)?;
    let stair = staircase_symbol(seq)?;
    let (a, b) = (seq.a(), seq.b());
    let b_inf = seq.b_inf().ok_or(Error::LimitRequired)?;
    let j = seq.steps();
    let d = (b[0] - b_inf) / 16.0;
    let window = Rect { xi_lo: a[j], xi_hi: a[0], eta_lo: b_inf - d, eta_hi: b[0] + d };
    let lhs = |x: f64, y: f64| pair.rect.eval(x, y) - pair.complement.eval(x, y);
    let rhs = |x: f64, y: f64| stair.eval(x, y);
    let mut ylines = b.to_vec();
    ylines.push(b_inf);
    compare_on_grid(&lhs, &rhs, window, nx, ny, a, &ylines)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{build_dyadic_slope_sequence, CurveSpec};

    fn power_seq(j: usize) -> SequencePair {
        build_dyadic_slope_sequence(&CurveSpec::power_law(1.0).unwrap(), j).unwrap()
    }

    #[test]
    fn staircase_examples() {
        let seq = power_seq(6);
        let m = staircase_symbol(&seq).unwrap();
        // ξ ∈ [a_2, a_1) = [-2, -√2) needs η ∈ [b_1, b_0) = [2^{-1/2}, 1)
        assert_eq!(m.eval(-(0.75f64).exp2(), (-0.4f64).exp2()), 1.0);
        assert_eq!(m.eval(-(0.75f64).exp2(), (-0.9f64).exp2()), 0.0);
        // η = b_0 is excluded
        assert_eq!(m.eval(-1.7, 1.0), 0.0);
        let bb = m.bbox().unwrap();
        assert_eq!((bb.xi_lo, bb.xi_hi, bb.eta_hi), (seq.a()[6], seq.a()[1], seq.b()[0]));
    }

    #[test]
    fn staircase_rejects_increasing() {
        let inc = SequencePair::new(vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0], 0).unwrap();
        assert_eq!(staircase_symbol(&inc).unwrap_err(), Error::UseIncreasingStaircase);
    }

    #[test]
    fn increasing_staircase_examples() {
        let u: Vec<f64> = (0..8).map(|j| j as f64).collect();
        let v: Vec<f64> = (0..8).map(|j| (j as f64).exp2()).collect();
        let m = increasing_staircase_symbol(&u, &v).unwrap();
        assert_eq!(m.eval(0.5, 2.5), 1.0);
        for eta in [0.0, 1.5, 3.0, 17.0, 100.0] {
            assert_eq!(m.eval(0.0, eta), 0.0);
        }
        assert!(increasing_staircase_symbol(&[3.0, 2.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn boundary_piece_example() {
        let c = CurveSpec::power_law(1.0).unwrap();
        let seq = power_seq(6);
        let m0 = boundary_piece_symbol(&c, &seq, 0).unwrap();
        assert_eq!(m0.eval(-1.2, 0.9), 1.0);
        assert_eq!(m0.eval(-1.2, 0.8), 0.0);
    }

    #[test]
    fn epigraph_boundary_is_closed() {
        let c = CurveSpec::hyperboloid();
        let m = epigraph_symbol(&c, Interval::everything());
        assert_eq!(m.eval(0.0, 1.0), 1.0);
        assert_eq!(m.eval(0.0, 0.999), 0.0);
        assert_eq!(m.eval(0.3, c.value(0.3)), 1.0);
    }

    #[test]
    fn polygon_vs_curve_between_chord_and_curve() {
        let c = CurveSpec::hyperboloid();
        let seq = build_dyadic_slope_sequence(&c, 6).unwrap();
        let verts: Vec<(f64, f64)> = seq.a().iter().copied().zip(seq.b().iter().copied()).collect();
        let poly = polygonal_epigraph_symbol(&verts).unwrap();
        let epi = epigraph_symbol(&c, Interval::everything());
        let (x0, y0) = verts[1];
        let (x1, y1) = verts[2];
        let xm = 0.5 * (x0 + x1);
        let chord = 0.5 * (y0 + y1);
        let below_chord = 0.5 * (chord + c.value(xm));
        assert_eq!(poly.eval(xm, below_chord), 0.0);
        assert_eq!(epi.eval(xm, below_chord), 1.0);
        assert_eq!((poly.eval(xm, chord), epi.eval(xm, chord)), (1.0, 1.0));
    }

    #[test]
    fn exponential_examples() {
        let (m1, m2, m3) = exponential_paraproduct_symbols(8).unwrap();
        assert_eq!(m1.eval(-1.5, 0.6), 1.0);
        assert_eq!(m3.eval(-5.0, 7.0), 1.0);
        assert_eq!(m3.eval(0.1, 7.0), 0.0);
        assert_eq!(m2.eval(1.5, 4.5), 1.0);
        assert_eq!(m2.eval(0.0, 4.5), 0.0);
    }

    #[test]
    fn hyp2_rewrite_pointwise() {
        let seq = build_dyadic_slope_sequence(&CurveSpec::hyperboloid(), 8).unwrap();
        let rw = hyp2_rewrite_pair(&seq).unwrap();
        let st = staircase_symbol(&seq).unwrap();
        let (a, b) = (seq.a(), seq.b());
        let (x, y) = (0.5 * (a[3] + a[4]), 0.5 * (1.0 + b[5]));
        assert_eq!((rw.rect.eval(x, y), rw.complement.eval(x, y), st.eval(x, y)), (1.0, 1.0, 0.0));
        assert_eq!(rw.rect.eval(x, 0.99) - rw.complement.eval(x, 0.99), 0.0);
    }

    #[test]
    fn smooth_bump_plateau() {
        let r = Rect::new(0.0, 2.0, 1.0, 3.0).unwrap();
        let s = smooth_adapted_symbol(r, 0.9).unwrap();
        assert_eq!(s.eval(1.0, 2.0), 1.0);
        assert_eq!(s.eval(0.1, 1.1), 1.0);
        assert_eq!(s.eval(-0.01, 2.0), 0.0);
        assert!(s.eval(0.02, 2.0) > 0.0 && s.eval(0.02, 2.0) < 1.0);
    }

    #[test]
    fn sample_requires_window() {
        let g = FrequencyGrid { nx: 4, ny: 4, window: None };
        assert_eq!(sample_symbol(&SymbolSpec::ones(), &g).unwrap_err(), Error::UnboundedSymbol);
        let w = Some(Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap());
        let bm = sample_symbol(&SymbolSpec::ones(), &FrequencyGrid { window: w, ..g }).unwrap();
        assert!(bm.values.iter().all(|&v| v == 1.0));
    }
}
