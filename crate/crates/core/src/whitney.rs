//! Whitney geometry of polygonal curves.
//!
//! Squares live in the preimage plane `(ξ', η')` of the affine map
//! `Φ_j(ξ', η') = (a_j - ξ', b_j - s_j η')`, which sends the diagonal to the line
//! `ℓ_j` through segment `j` and the triangle `T' = {0 <= η' <= ξ' <= Δa_j}` onto
//! `T_j`. A square `S` becomes the rectangle `R_{S,j} = Φ_j(S)`.

use alloc::{collections::BTreeSet, vec, vec::Vec};
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::bump::Bump1d;
use crate::curves::PolygonalCurve;
use crate::engine::{integrate_product, BilinearOperator, SampledFunction};
use crate::error::invalid;
use crate::fft::Fft;
use crate::intervals::{neg_minkowski_sum, Interval};
use crate::symbols::{Rect, SymbolKind, SymbolSpec};
use crate::{Error, Result};

/// Default cap on enumerated squares, cubes or tiles.
pub const DEFAULT_LIMIT: usize = 5_000_000;

/// Lattice square of side `2^scale` centred at `2^{scale - shift} (ix, iy)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WhitneySquare {
    pub scale: i32,
    pub ix: i64,
    pub iy: i64,
    pub lattice_shift: u32,
}

impl WhitneySquare {
    pub fn side(&self) -> f64 {
        (self.scale as f64).exp2()
    }

    pub fn spacing(&self) -> f64 {
        (self.scale as f64 - self.lattice_shift as f64).exp2()
    }

    pub fn center(&self) -> (f64, f64) {
        let d = self.spacing();
        (self.ix as f64 * d, self.iy as f64 * d)
    }

    /// Closed dilation by `lambda` about the centre meets `{x = y}`.
    pub fn dilation_meets_diagonal(&self, lambda: f64) -> bool {
        let (x, y) = self.center();
        (x - y).abs() <= lambda * self.side()
    }

    /// `C0·S` misses the diagonal and `4C0·S` meets it.
    pub fn is_whitney(&self, c0: f64) -> bool {
        !self.dilation_meets_diagonal(c0) && self.dilation_meets_diagonal(4.0 * c0)
    }

    /// `[x ± λℓ/2] × [y ± λℓ/2]`.
    pub fn dilated(&self, lambda: f64) -> ((f64, f64), (f64, f64)) {
        let (x, y) = self.center();
        let r = 0.5 * lambda * self.side();
        ((x - r, x + r), (y - r, y + r))
    }
}

fn check_scales(scales: (i32, i32)) -> Result<()> {
    if scales.0 > scales.1 {
        Err(Error::EmptyScaleRange)
    } else {
        Ok(())
    }
}

fn check_c0(c0: u32) -> Result<f64> {
    if c0 == 0 {
        Err(invalid("C0 must be at least 1"))
    } else {
        Ok(c0 as f64)
    }
}

fn index_range(lo: f64, hi: f64, step: f64) -> (i64, i64) {
    ((lo / step).ceil() as i64, (hi / step).floor() as i64)
}

/// All lattice squares meeting the window that satisfy the Whitney conditions,
/// ordered by `(scale, ix, iy)`.
pub fn enumerate_whitney_squares(
    c0: u32,
    window: Rect,
    scales: (i32, i32),
    lattice_shift: u32,
    limit: usize,
) -> Result<Vec<WhitneySquare>> {
    let c = check_c0(c0)?;
    check_scales(scales)?;
    let mut out = Vec::new();
    for scale in scales.0..=scales.1 {
        let side = (scale as f64).exp2();
        let step = (scale as f64 - lattice_shift as f64).exp2();
        let h = 0.5 * side;
        let (x0, x1) = index_range(window.xi_lo - h, window.xi_hi + h, step);
        let (wy0, wy1) = (window.eta_lo - h, window.eta_hi + h);
        for ix in x0..=x1 {
            let x = ix as f64 * step;
            for (lo, hi) in [(x - 4.0 * c * side, x - c * side), (x + c * side, x + 4.0 * c * side)] {
                let (y0, y1) = index_range(lo.max(wy0), hi.min(wy1), step);
                for iy in y0..=y1 {
                    let sq = WhitneySquare { scale, ix, iy, lattice_shift };
                    if sq.is_whitney(c) {
                        out.push(sq);
                        if out.len() > limit {
                            return Err(Error::TooManyItems { limit });
                        }
                    }
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// `R_{S,j} = (a_j, b_j) + L_j²(S)` with `L_j²(ξ, η) = (-ξ, -s_j η)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TileRect {
    pub j: usize,
    pub square: WhitneySquare,
    pub slope: f64,
    pub vertex: (f64, f64),
    /// ξ-extent, the edge `J_R¹`.
    pub xi: (f64, f64),
    /// η-extent, the edge `J_R²`.
    pub eta: (f64, f64),
}

impl TileRect {
    pub fn new(j: usize, square: WhitneySquare, vertex: (f64, f64), slope: f64) -> Self {
        let ((x0, x1), (y0, y1)) = square.dilated(1.0);
        Self {
            j,
            square,
            slope,
            vertex,
            xi: (vertex.0 - x1, vertex.0 - x0),
            eta: (vertex.1 - slope * y1, vertex.1 - slope * y0),
        }
    }

    pub fn width(&self) -> f64 {
        self.xi.1 - self.xi.0
    }

    pub fn height(&self) -> f64 {
        self.eta.1 - self.eta.0
    }

    pub fn corners(&self) -> [(f64, f64); 4] {
        [(self.xi.0, self.eta.0), (self.xi.1, self.eta.0), (self.xi.0, self.eta.1), (self.xi.1, self.eta.1)]
    }

    /// Closed α-dilation about the centre contains the point.
    pub fn dilation_contains(&self, p: (f64, f64), alpha: f64) -> bool {
        let (cx, cy) = (0.5 * (self.xi.0 + self.xi.1), 0.5 * (self.eta.0 + self.eta.1));
        (p.0 - cx).abs() <= 0.5 * alpha * self.width() && (p.1 - cy).abs() <= 0.5 * alpha * self.height()
    }

    /// `K_R = I + s_j J` for the generating square `S = I × J`.
    pub fn k_interval(&self) -> Interval {
        let ((x0, x1), (y0, y1)) = self.square.dilated(1.0);
        Interval::closed(x0 + self.slope * y0, x1 + self.slope * y1).expect("square has positive side")
    }
}

/// Parameters of the rectangle cover of one triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverParams {
    pub c0: u32,
    pub alpha: f64,
    pub lattice_shift: u32,
    /// Number of dyadic scales below the coarsest one.
    pub depth: u32,
    pub samples: usize,
    pub limit: usize,
}

impl Default for CoverParams {
    fn default() -> Self {
        Self { c0: 16, alpha: 0.9, lattice_shift: 1, depth: 4, samples: 10_000, limit: DEFAULT_LIMIT }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverReport {
    pub j: usize,
    pub rects: Vec<TileRect>,
    pub scales: (i32, i32),
    pub cover_ok: bool,
    pub containment_ok: bool,
    pub samples_checked: usize,
    /// Sample points closer to `ℓ_j` than the finest scale resolves.
    pub unresolved: usize,
    pub uncovered: Vec<(f64, f64)>,
    pub containment_failures: Vec<usize>,
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Halton points folded into `T' = {0 <= η' <= ξ' <= d}`.
fn triangle_samples(d: f64, count: usize) -> impl Iterator<Item = (f64, f64)> {
    (1..=count as u64).map(move |i| {
        let (mut u, mut v) = (radical_inverse(i, 2), radical_inverse(i, 3));
        if u + v > 1.0 {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        // (0,0) + u·(d,0) + v·(d,d)
        (d * (u + v), d * v)
    })
}

/// Closed α-square meets the closed triangle `T'` (separating axes x, y, x - y).
fn meets_triangle(sq: &WhitneySquare, alpha: f64, d: f64) -> bool {
    let ((x0, x1), (y0, y1)) = sq.dilated(alpha);
    x1 >= 0.0 && x0 <= d && y1 >= 0.0 && y0 <= d && (x1 - y0) >= 0.0 && (x0 - y1) <= d
}

/// Scale range `(k_min, k_max)` for a triangle of leg `d`.
pub fn cover_scales(d: f64, params: &CoverParams) -> (i32, i32) {
    let c = params.c0 as f64;
    let reach = 4.0 * c - (-(params.lattice_shift as f64)).exp2();
    let k_max = (d / reach).log2().ceil() as i32;
    (k_max - params.depth as i32, k_max)
}

/// Rectangles `R_{S,j}` with `αR ∩ T_j ≠ ∅`, plus the cover and containment checks.
pub fn build_cover(poly: &PolygonalCurve, j: usize, params: &CoverParams) -> Result<CoverReport> {
    if !(params.alpha > 0.0 && params.alpha < 1.0) {
        return Err(invalid("alpha must lie in (0, 1)"));
    }
    if j >= poly.segments() {
        return Err(Error::TooShort { needed: j + 1, got: poly.segments() });
    }
    let c = check_c0(params.c0)?;
    let (va, vb) = (poly.vertex(j), poly.vertex(j + 1));
    let s = poly.slope(j);
    let d = va.0 - vb.0;
    let scales = cover_scales(d, params);
    let mut rects = Vec::new();
    let mut keys = BTreeSet::new();
    for k in scales.0..=scales.1 {
        let pad = 0.5 * (k as f64).exp2();
        let window = Rect { xi_lo: -pad, xi_hi: d + pad, eta_lo: -pad, eta_hi: d + pad };
        for sq in enumerate_whitney_squares(params.c0, window, (k, k), params.lattice_shift, params.limit)? {
            if meets_triangle(&sq, params.alpha, d) {
                keys.insert(sq);
                rects.push(TileRect::new(j, sq, va, s));
                if rects.len() > params.limit {
                    return Err(Error::TooManyItems { limit: params.limit });
                }
            }
        }
    }

    let finest = (scales.0 as f64).exp2();
    let unresolved_below = (c + (-(params.lattice_shift as f64)).exp2()) * finest;
    let (mut unresolved, mut checked) = (0, 0);
    let mut uncovered = Vec::new();
    for (xp, yp) in triangle_samples(d, params.samples) {
        if xp - yp <= unresolved_below {
            unresolved += 1;
            continue;
        }
        checked += 1;
        if !point_covered((xp, yp), scales, params, &keys) {
            if uncovered.len() < 32 {
                uncovered.push((va.0 - xp, va.1 - s * yp));
            } else {
                uncovered.push((f64::NAN, f64::NAN));
            }
        }
    }
    let miss = uncovered.len();
    uncovered.retain(|p| !p.0.is_nan());

    let containment_failures: Vec<usize> = rects
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.corners().iter().all(|&(x, y)| poly.in_epigraph(x, y)))
        .map(|(i, _)| i)
        .collect();

    Ok(CoverReport {
        j,
        rects,
        scales,
        cover_ok: miss == 0,
        containment_ok: containment_failures.is_empty(),
        samples_checked: checked,
        unresolved,
        uncovered,
        containment_failures,
    })
}

fn point_covered(p: (f64, f64), scales: (i32, i32), params: &CoverParams, keys: &BTreeSet<WhitneySquare>) -> bool {
    for scale in scales.0..=scales.1 {
        let side = (scale as f64).exp2();
        let step = (scale as f64 - params.lattice_shift as f64).exp2();
        let r = 0.5 * params.alpha * side;
        let (x0, x1) = index_range(p.0 - r, p.0 + r, step);
        let (y0, y1) = index_range(p.1 - r, p.1 + r, step);
        for ix in x0..=x1 {
            for iy in y0..=y1 {
                let sq = WhitneySquare { scale, ix, iy, lattice_shift: params.lattice_shift };
                if keys.contains(&sq) {
                    return true;
                }
            }
        }
    }
    false
}

/// Hull of the edge projections of one group, and its `1/α` dilation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeHull {
    pub j: usize,
    /// `J^i_j` for `i = 1, 2, 3`.
    pub hull: [Interval; 3],
    /// `I^i_j = (1/α) J^i_j`.
    pub dilated: [Interval; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeCollections {
    pub groups: Vec<EdgeHull>,
    /// Maximum point overlap of `{I^i_j}_j` for each `i`.
    pub max_overlap: [usize; 3],
    /// For each `i` and group, the largest number of `I^i_{j'}` sharing a point of `I^i_j`.
    pub local_overlap: [Vec<usize>; 3],
    /// Number of disjoint pieces in the union of the edges of each group.
    pub union_pieces: [Vec<usize>; 3],
}

fn union_pieces(mut iv: Vec<(f64, f64)>) -> usize {
    iv.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut count = 0;
    let mut end = f64::NEG_INFINITY;
    for (lo, hi) in iv {
        if lo > end {
            count += 1;
        }
        end = end.max(hi);
    }
    count
}

/// `J¹_R`, `J²_R` and `J³_R = -J¹_R - J²_R` gathered per group and dilated by `1/α`.
pub fn edge_interval_collections(rects_by_j: &[Vec<TileRect>], alpha: f64) -> Result<EdgeCollections> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid("alpha must lie in (0, 1)"));
    }
    let mut groups = Vec::new();
    let mut union_counts: [Vec<usize>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for rects in rects_by_j {
        let first = rects.first().ok_or(Error::EmptyCollection)?;
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        let mut parts: [Vec<(f64, f64)>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for r in rects {
            let e1 = Interval::closed(r.xi.0, r.xi.1)?;
            let e2 = Interval::closed(r.eta.0, r.eta.1)?;
            let e3 = neg_minkowski_sum(&e1, &e2);
            for (i, e) in [e1, e2, e3].iter().enumerate() {
                lo[i] = lo[i].min(e.lo());
                hi[i] = hi[i].max(e.hi());
                parts[i].push((e.lo(), e.hi()));
            }
        }
        let hull = [
            Interval::closed(lo[0], hi[0])?,
            Interval::closed(lo[1], hi[1])?,
            Interval::closed(lo[2], hi[2])?,
        ];
        let dilated = [hull[0].dilate(1.0 / alpha), hull[1].dilate(1.0 / alpha), hull[2].dilate(1.0 / alpha)];
        for (i, p) in parts.into_iter().enumerate() {
            union_counts[i].push(union_pieces(p));
        }
        groups.push(EdgeHull { j: first.j, hull, dilated });
    }
    let mut max_overlap = [0; 3];
    let mut local_overlap: [Vec<usize>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for i in 0..3 {
        let items: Vec<Interval> = groups.iter().map(|g| g.dilated[i]).collect();
        max_overlap[i] = crate::intervals::max_point_overlap(&items);
        local_overlap[i] = items
            .iter()
            .map(|own| {
                let others: Vec<Interval> = items.iter().filter(|x| x.overlaps(own)).copied().collect();
                let mut pts: Vec<f64> = others.iter().flat_map(|x| [x.lo(), x.hi()]).collect();
                pts.retain(|p| own.contains(*p));
                pts.push(own.center());
                pts.iter().map(|&p| others.iter().filter(|x| x.contains(p)).count()).max().unwrap_or(1)
            })
            .collect();
    }
    Ok(EdgeCollections { groups, max_overlap, local_overlap, union_pieces: union_counts })
}

/// Which set plays the diagonal in the 3D Whitney conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagonalModel {
    /// `{(t, t, t)}`.
    Line,
    /// `{ξ + η + θ = 0}`.
    Plane,
}

/// Lattice cube of side `2^scale` centred at `2^{scale - shift} (ix, iy, iz)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WhitneyCube {
    pub scale: i32,
    pub ix: i64,
    pub iy: i64,
    pub iz: i64,
    pub lattice_shift: u32,
}

impl WhitneyCube {
    pub fn side(&self) -> f64 {
        (self.scale as f64).exp2()
    }

    pub fn center(&self) -> [f64; 3] {
        let d = (self.scale as f64 - self.lattice_shift as f64).exp2();
        [self.ix as f64 * d, self.iy as f64 * d, self.iz as f64 * d]
    }

    pub fn dilation_meets_diagonal(&self, lambda: f64, model: DiagonalModel) -> bool {
        let c = self.center();
        let r = 0.5 * lambda * self.side();
        match model {
            DiagonalModel::Line => {
                let mx = c[0].max(c[1]).max(c[2]);
                let mn = c[0].min(c[1]).min(c[2]);
                mx - mn <= 2.0 * r
            }
            DiagonalModel::Plane => (c[0] + c[1] + c[2]).abs() <= 3.0 * r,
        }
    }

    /// `C0·Q` misses the diagonal set and `10C0·Q` meets it.
    pub fn is_whitney(&self, c0: f64, model: DiagonalModel) -> bool {
        !self.dilation_meets_diagonal(c0, model) && self.dilation_meets_diagonal(10.0 * c0, model)
    }

    pub fn extent(&self, axis: usize) -> (f64, f64) {
        let c = self.center()[axis];
        let h = 0.5 * self.side();
        (c - h, c + h)
    }
}

/// Axis-aligned box in frequency space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Box3 {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

pub fn enumerate_whitney_cubes(
    c0: u32,
    window: Box3,
    scales: (i32, i32),
    lattice_shift: u32,
    model: DiagonalModel,
    limit: usize,
) -> Result<Vec<WhitneyCube>> {
    let c = check_c0(c0)?;
    check_scales(scales)?;
    let mut out = Vec::new();
    for scale in scales.0..=scales.1 {
        let side = (scale as f64).exp2();
        let step = (scale as f64 - lattice_shift as f64).exp2();
        let r: Vec<(i64, i64)> =
            (0..3).map(|a| index_range(window.lo[a] - 0.5 * side, window.hi[a] + 0.5 * side, step)).collect();
        let total = r.iter().map(|(a, b)| (b - a + 1).max(0) as u128).product::<u128>();
        if total > 8 * limit as u128 {
            return Err(Error::TooManyItems { limit });
        }
        for ix in r[0].0..=r[0].1 {
            for iy in r[1].0..=r[1].1 {
                for iz in r[2].0..=r[2].1 {
                    let q = WhitneyCube { scale, ix, iy, iz, lattice_shift };
                    if q.is_whitney(c, model) {
                        out.push(q);
                        if out.len() > limit {
                            return Err(Error::TooManyItems { limit });
                        }
                    }
                }
            }
        }
    }
    if out.is_empty() {
        return Err(Error::WindowTooSmall("Whitney cube"));
    }
    Ok(out)
}

/// `L_j³(ξ, η, θ) = (-ξ, -s_j η, (1+s_j) θ)` applied to a cube.
pub fn transform_cube(q: &WhitneyCube, slope: f64) -> [(f64, f64); 3] {
    let (x0, x1) = q.extent(0);
    let (y0, y1) = q.extent(1);
    let (z0, z1) = q.extent(2);
    [(-x1, -x0), (-slope * y1, -slope * y0), ((1.0 + slope) * z0, (1.0 + slope) * z1)]
}

/// A multi-tile: a dyadic space interval and a transformed Whitney cube.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiTile {
    pub j: usize,
    pub cube: WhitneyCube,
    pub omega: [(f64, f64); 3],
    pub space: (f64, f64),
    /// `j_P` with `|I_P| = period · 2^{-B j_P}`.
    pub space_scale: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TileParams {
    pub c0: u32,
    /// Exponent base `B` standing in for `2^{C0}`.
    pub base: u32,
    pub lattice_shift: u32,
    pub model: DiagonalModel,
    pub period: f64,
    pub limit: usize,
}

/// Number of dyadic space intervals at scale `j_P`, guarded against overflow.
pub fn space_intervals(base: u32, space_scale: u32) -> Result<usize> {
    let e = base as u64 * space_scale as u64;
    if e > 24 {
        return Err(Error::TooManyItems { limit: 1 << 24 });
    }
    Ok(1usize << e)
}

pub fn enumerate_multitiles(
    params: &TileParams,
    j: usize,
    slope: f64,
    window: Box3,
    scales: (i32, i32),
    space_scale: u32,
) -> Result<Vec<MultiTile>> {
    if !(slope > 0.0 && slope < 1.0) {
        return Err(Error::SlopeOutOfRange { index: j, slope });
    }
    let cubes = enumerate_whitney_cubes(params.c0, window, scales, params.lattice_shift, params.model, params.limit)?;
    let count = space_intervals(params.base, space_scale)?;
    if cubes.len().saturating_mul(count) > params.limit {
        return Err(Error::TooManyItems { limit: params.limit });
    }
    let len = params.period / count as f64;
    let mut out = Vec::with_capacity(cubes.len() * count);
    for q in &cubes {
        let omega = transform_cube(q, slope);
        for m in 0..count {
            out.push(MultiTile { j, cube: *q, omega, space: (m as f64 * len, (m + 1) as f64 * len), space_scale });
        }
    }
    Ok(out)
}

/// Smooth bumps `ψ_ω₃` whose sum is `φ_{K_R}`: 1 on `K_R`, supported in `(1/α)K_R`.
#[derive(Debug, Clone, PartialEq)]
pub struct Omega3Partition {
    pub k: Interval,
    pub outer: (f64, f64),
    pub phi: Bump1d,
    pub pieces: Vec<Bump1d>,
}

impl Omega3Partition {
    pub fn new(k: Interval, alpha: f64, pieces: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) || pieces == 0 {
            return Err(invalid("need alpha in (0, 1) and at least one piece"));
        }
        let outer = k.dilate(1.0 / alpha);
        let w = 0.5 * (outer.len() - k.len());
        let e0 = outer.lo() + 0.5 * w;
        let en = outer.hi() - 0.5 * w;
        let edge = |i: usize| if i == pieces { en } else { e0 + (en - e0) * i as f64 / pieces as f64 };
        let parts = (0..pieces).map(|i| Bump1d { lo_edge: edge(i), hi_edge: edge(i + 1), width: w }).collect();
        Ok(Self { k, outer: (outer.lo(), outer.hi()), phi: Bump1d { lo_edge: e0, hi_edge: en, width: w }, pieces: parts })
    }

    pub fn sum_pieces(&self, x: f64) -> f64 {
        self.pieces.iter().map(|p| p.eval(x)).sum()
    }
}

/// `ρ̂(ξ) = (3/2) M(ξ/a)` with `M` the centred cubic B-spline; `ρ(x) = (3a/2) sinc⁴(ax)`.
pub fn rho_hat(xi: f64, a: f64) -> f64 {
    let t = (xi / a).abs();
    let m = if t <= 1.0 {
        2.0 / 3.0 - t * t + 0.5 * t * t * t
    } else if t <= 2.0 {
        let u = 2.0 - t;
        u * u * u / 6.0
    } else {
        0.0
    };
    1.5 * m
}

pub fn rho(x: f64, a: f64) -> f64 {
    let t = PI * a * x;
    let s = if t == 0.0 { 1.0 } else { t.sin() / t };
    1.5 * a * s * s * s * s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MollifierParams {
    /// Exponent base `B`.
    pub base: u32,
    /// Spectral radius of `ρ_j` in units of `1/|I|`.
    pub kernel_width: f64,
}

impl Default for MollifierParams {
    fn default() -> Self {
        Self { base: 8, kernel_width: 2.0 }
    }
}

/// `χ_I = 1_I ∗ ρ_j` sampled at `n` points of `[0, L)`, periodised; the kernel has
/// spectral radius `kernel_width / |I|`.
pub fn mollified_indicator(iv: (f64, f64), params: &MollifierParams, period: f64, n: usize) -> Result<Vec<f64>> {
    let len = iv.1 - iv.0;
    if !(len > 0.0) {
        return Err(Error::EmptyInterval { lo: iv.0, hi: iv.1 });
    }
    if period < len {
        return Err(Error::WindowTooSmall("tile"));
    }
    let radius = params.kernel_width / len;
    if radius >= n as f64 / (2.0 * period) {
        return Err(invalid("kernel spectrum exceeds the sampling grid"));
    }
    let a = 0.5 * radius;
    let plan = Fft::new(n)?;
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    let kmax = (radius * period).ceil() as i64;
    for k in -kmax..=kmax {
        let xi = k as f64 / period;
        let w = rho_hat(xi, a);
        if w == 0.0 {
            continue;
        }
        let c = if k == 0 {
            Complex64::new(len / period, 0.0)
        } else {
            let e = |x: f64| Complex64::from_polar(1.0, -2.0 * PI * k as f64 * x / period);
            (e(iv.0) - e(iv.1)) / Complex64::new(0.0, 2.0 * PI * k as f64)
        };
        buf[k.rem_euclid(n as i64) as usize] += c * w;
    }
    plan.inverse(&mut buf);
    Ok(buf.iter().map(|v| v.re).collect())
}

/// Samples of every `χ_{I_P, j0}` at scale `j0`, as rotations of the first one.
pub fn mollified_partition(j0: u32, params: &MollifierParams, period: f64, n: usize) -> Result<Vec<Vec<f64>>> {
    let count = space_intervals(params.base, j0)?;
    if n % count != 0 {
        return Err(invalid("grid must be a multiple of the number of tiles"));
    }
    let len = period / count as f64;
    let first = mollified_indicator((0.0, len), params, period, n)?;
    let shift = n / count;
    Ok((0..count)
        .map(|m| {
            let mut v = first.clone();
            v.rotate_right(m * shift);
            v
        })
        .collect())
}

/// `max |1 - Σ_P χ_{I_P, j0}|` over the grid.
pub fn partition_check(j0: u32, params: &MollifierParams, period: f64, n: usize) -> Result<f64> {
    let parts = mollified_partition(j0, params, period, n)?;
    Ok((0..n).map(|i| (1.0 - parts.iter().map(|p| p[i]).sum::<f64>()).abs()).fold(0.0, f64::max))
}

/// One group of rectangles for the model sum, all attached to segment `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelGroup {
    pub j: usize,
    pub rects: Vec<TileRect>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelConfig {
    pub alpha: f64,
    pub omega3_pieces: usize,
    pub mollifier: MollifierParams,
    /// `j_P` of the space intervals.
    pub space_scale: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSumReport {
    pub model_value: f64,
    pub adjoint_value: f64,
    pub deviation: f64,
    /// `(j, |tile side|, |adjoint side|)` per group.
    pub per_group: Vec<(usize, f64, f64)>,
}

fn filtered(f: &SampledFunction, bump: &Bump1d) -> Result<SampledFunction> {
    let mut c = f.coefficients();
    for (i, v) in c.iter_mut().enumerate() {
        *v *= bump.eval(f.frequency(i));
    }
    SampledFunction::from_coefficients(&c, f.period())
}

/// `f(x) e^{-2πiax}` sampled on the `m`-point grid; the result is not periodic,
/// so it is formed after upsampling and never transformed again.
fn modulated(f: &SampledFunction, a: f64, m: usize) -> Result<Vec<Complex64>> {
    let up = f.resampled(m)?;
    Ok(up
        .samples()
        .iter()
        .enumerate()
        .map(|(i, v)| v * Complex64::from_polar(1.0, -2.0 * PI * a * up.x(i)))
        .collect())
}

/// Evaluates the discretised model sum and the same quantity through
/// `∫ B_σ(f_j, g_j) h_j` with `σ = Σ_R ψ_R(ξ, η) φ_{K_R}(a_j + b_j - ξ - η)`.
pub fn model_sum_eval(
    f: &SampledFunction,
    g: &SampledFunction,
    h: &SampledFunction,
    groups: &[ModelGroup],
    poly: &PolygonalCurve,
    cfg: &ModelConfig,
) -> Result<ModelSumReport> {
    if !f.same_grid(g) || !f.same_grid(h) {
        return Err(Error::GridMismatch);
    }
    if !(cfg.alpha > 0.0 && cfg.alpha < 1.0) || cfg.omega3_pieces == 0 {
        return Err(invalid("need alpha in (0, 1) and at least one ω₃ piece"));
    }
    let (n, period) = (f.len(), f.period());
    let m = 2 * n;
    let chis = mollified_partition(cfg.space_scale, &cfg.mollifier, period, m)?;
    let hulls = edge_interval_collections(&groups.iter().map(|g| g.rects.clone()).collect::<Vec<_>>(), cfg.alpha)?;

    let mut per_group = Vec::with_capacity(groups.len());
    for (group, hull) in groups.iter().zip(&hulls.groups) {
        if group.j >= poly.segments() {
            return Err(Error::ParameterMismatch("group index outside the polygon"));
        }
        let (vertex, slope) = (poly.vertex(group.j), poly.slope(group.j));
        if group.rects.iter().any(|r| r.j != group.j || r.vertex != vertex || r.slope != slope) {
            return Err(Error::ParameterMismatch("rectangle does not belong to its group segment"));
        }
        let phi: Vec<Bump1d> =
            hull.dilated.iter().map(|iv| Bump1d::adapted(iv.lo(), iv.hi(), cfg.alpha)).collect();
        let (fj, gj, hj) = (filtered(f, &phi[0])?, filtered(g, &phi[1])?, filtered(h, &phi[2])?);
        let (a, b) = vertex;
        let shift = a + b;

        let parts: Vec<(TileRect, Bump1d, Bump1d, Omega3Partition)> = group
            .rects
            .iter()
            .map(|r| {
                let p1 = Bump1d::adapted(r.xi.0, r.xi.1, cfg.alpha);
                let p2 = Bump1d::adapted(r.eta.0, r.eta.1, cfg.alpha);
                Ok((*r, p1, p2, Omega3Partition::new(r.k_interval(), cfg.alpha, cfg.omega3_pieces)?))
            })
            .collect::<Result<_>>()?;

        // tile side
        let mut tile = Complex64::new(0.0, 0.0);
        for (_, p1, p2, om) in &parts {
            let fr = modulated(&filtered(&fj, p1)?, a, m)?;
            let gr = modulated(&filtered(&gj, p2)?, b, m)?;
            for piece in &om.pieces {
                let shifted = Bump1d { lo_edge: piece.lo_edge - shift, hi_edge: piece.hi_edge - shift, width: piece.width };
                let hr = modulated(&filtered(&hj, &shifted)?, -shift, m)?;
                let prod: Vec<Complex64> = (0..m).map(|i| fr[i] * gr[i] * hr[i]).collect();
                for chi in &chis {
                    let s: Complex64 = prod.iter().zip(chi).map(|(p, c)| p * c).sum();
                    tile += s * (period / m as f64);
                }
            }
        }

        // adjoint side
        let sym_parts = parts.clone();
        let bbox = sym_parts.iter().map(|(r, ..)| Rect { xi_lo: r.xi.0, xi_hi: r.xi.1, eta_lo: r.eta.0, eta_hi: r.eta.1 }).reduce(|x, y| x.union(&y));
        let sigma = SymbolSpec::custom(
            alloc::sync::Arc::new(move |xi: f64, eta: f64| {
                sym_parts
                    .iter()
                    .map(|(_, p1, p2, om)| {
                        let u = p1.eval(xi);
                        if u == 0.0 {
                            return 0.0;
                        }
                        let v = p2.eval(eta);
                        if v == 0.0 {
                            return 0.0;
                        }
                        u * v * om.phi.eval(shift - xi - eta)
                    })
                    .sum()
            }),
            SymbolKind::SmoothAdapted,
            bbox,
        );
        let bf = BilinearOperator::new(&sigma, n, period)?.apply(&fj, &gj)?;
        let adj = integrate_product(&[&bf, &hj])?;
        per_group.push((group.j, tile.norm(), adj.norm()));
    }
    let model_value: f64 = per_group.iter().map(|g| g.1).sum();
    let adjoint_value: f64 = per_group.iter().map(|g| g.2).sum();
    Ok(ModelSumReport {
        model_value,
        adjoint_value,
        deviation: (model_value - adjoint_value).abs() / (adjoint_value.abs() + 1e-30),
        per_group,
    })
}

/// Evenly spaced subset of the coarsest-scale rectangles of a cover.
pub fn coarse_rects(report: &CoverReport, count: usize) -> Vec<TileRect> {
    let top: Vec<TileRect> = report.rects.iter().filter(|r| r.square.scale == report.scales.1).copied().collect();
    if top.len() <= count || count == 0 {
        return top;
    }
    (0..count).map(|i| top[i * top.len() / count]).collect()
}
