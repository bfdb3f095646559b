//! Intervals, negated Minkowski sums and the (Hyp 1) / (Hyp 2) splitting checks.

use alloc::{vec, vec::Vec};
use core::cmp::Ordering;

#[allow(unused_imports)]
use num_traits::Float;

use crate::curves::{Direction, SequencePair};
use crate::{Error, Result};

/// Which endpoints belong to the interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Closure {
    /// `[lo, hi)`
    LeftClosed,
    /// `(lo, hi]`
    RightClosed,
    /// `(lo, hi)`
    Open,
    /// `[lo, hi]`
    Closed,
}

impl Closure {
    pub fn from_flags(lo_closed: bool, hi_closed: bool) -> Self {
        match (lo_closed, hi_closed) {
            (true, false) => Self::LeftClosed,
            (false, true) => Self::RightClosed,
            (false, false) => Self::Open,
            (true, true) => Self::Closed,
        }
    }

    pub fn lo_closed(self) -> bool {
        matches!(self, Self::LeftClosed | Self::Closed)
    }

    pub fn hi_closed(self) -> bool {
        matches!(self, Self::RightClosed | Self::Closed)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::LeftClosed => "[)",
            Self::RightClosed => "(]",
            Self::Open => "()",
            Self::Closed => "[]",
        }
    }
}

/// A nonempty real interval. Infinite endpoints are always excluded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
    closure: Closure,
}

impl Interval {
    pub fn new(lo: f64, hi: f64, closure: Closure) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::EmptyInterval { lo, hi });
        }
        let closure = Closure::from_flags(
            closure.lo_closed() && lo.is_finite(),
            closure.hi_closed() && hi.is_finite(),
        );
        Ok(Self { lo, hi, closure })
    }

    /// `[lo, hi)`
    pub fn left_closed(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, Closure::LeftClosed)
    }

    /// `(lo, hi]`
    pub fn right_closed(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, Closure::RightClosed)
    }

    pub fn open(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, Closure::Open)
    }

    pub fn closed(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, Closure::Closed)
    }

    /// The whole line.
    pub fn everything() -> Self {
        Self { lo: f64::NEG_INFINITY, hi: f64::INFINITY, closure: Closure::Open }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn closure(&self) -> Closure {
        self.closure
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.closure.lo_closed() { x >= self.lo } else { x > self.lo };
        let below = if self.closure.hi_closed() { x <= self.hi } else { x < self.hi };
        above && below
    }

    /// Exact test for a common point.
    pub fn overlaps(&self, other: &Interval) -> bool {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        match lo.partial_cmp(&hi) {
            Some(Ordering::Less) => true,
            Some(Ordering::Equal) => self.contains(lo) && other.contains(lo),
            _ => false,
        }
    }

    /// `{-x : x ∈ self}`
    pub fn negate(&self) -> Self {
        Self {
            lo: -self.hi,
            hi: -self.lo,
            closure: Closure::from_flags(self.closure.hi_closed(), self.closure.lo_closed()),
        }
    }

    /// Dilation by `factor` about the centre, keeping the closure.
    pub fn dilate(&self, factor: f64) -> Self {
        let c = self.center();
        let r = 0.5 * self.len() * factor;
        Self { lo: c - r, hi: c + r, closure: self.closure }
    }
}

/// `-A - B = {-a-b : a ∈ A, b ∈ B}`; an endpoint is attained only when both
/// contributing endpoints are.
pub fn neg_minkowski_sum(a: &Interval, b: &Interval) -> Interval {
    let (na, nb) = (a.negate(), b.negate());
    Interval {
        lo: na.lo + nb.lo,
        hi: na.hi + nb.hi,
        closure: Closure::from_flags(
            na.closure.lo_closed() && nb.closure.lo_closed(),
            na.closure.hi_closed() && nb.closure.hi_closed(),
        ),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Hyp1,
    Hyp2,
    /// The increasing-variant collection `-(u_0,u_j] - [v_j,v_{j+1})`.
    Increasing,
    Edges,
    Custom,
}

impl Origin {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Hyp1 => "hyp1",
            Self::Hyp2 => "hyp2",
            Self::Increasing => "increasing",
            Self::Edges => "edges",
            Self::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalCollection {
    pub items: Vec<Interval>,
    /// Sequence position that generated each item.
    pub positions: Vec<usize>,
    pub origin: Origin,
}

impl IntervalCollection {
    pub fn custom(items: Vec<Interval>) -> Self {
        let positions = (0..items.len()).collect();
        Self { items, positions, origin: Origin::Custom }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    Hyp1,
    Hyp2,
}

impl Hypothesis {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Hyp1 => "hyp1",
            Self::Hyp2 => "hyp2",
        }
    }
}

/// The (Hyp 1) collection `{-[a_{k+1},a_k) - [b_k,b_0)}` over positions `1..J`,
/// or the (Hyp 2) collection `{-[a_{k+1},a_k) - (b_∞,b_k)}` over positions `0..J`.
pub fn build_hyp_collection(seq: &SequencePair, which: Hypothesis) -> Result<IntervalCollection> {
    if seq.direction() != Direction::Decreasing {
        return Err(Error::UseIncreasingStaircase);
    }
    let (a, b) = (seq.a(), seq.b());
    let j = seq.steps();
    let mut items = Vec::new();
    let mut positions = Vec::new();
    match which {
        Hypothesis::Hyp1 => {
            for k in 1..j {
                let ia = Interval::left_closed(a[k + 1], a[k])?;
                let ib = Interval::left_closed(b[k], b[0])?;
                items.push(neg_minkowski_sum(&ia, &ib));
                positions.push(k);
            }
        }
        Hypothesis::Hyp2 => {
            let binf = seq.b_inf().ok_or(Error::LimitRequired)?;
            for k in 0..j {
                let ia = Interval::left_closed(a[k + 1], a[k])?;
                let ib = Interval::open(binf, b[k])?;
                items.push(neg_minkowski_sum(&ia, &ib));
                positions.push(k);
            }
        }
    }
    let origin = match which {
        Hypothesis::Hyp1 => Origin::Hyp1,
        Hypothesis::Hyp2 => Origin::Hyp2,
    };
    Ok(IntervalCollection { items, positions, origin })
}

/// `{-(u_0,u_k] - [v_k,v_{k+1})}` for positions `1..J`; `a` holds `u`, `b` holds `v`.
pub fn build_increasing_collection(uv: &SequencePair) -> Result<IntervalCollection> {
    if uv.direction() != Direction::Increasing {
        return Err(Error::DecreasingRejected);
    }
    let (u, v) = (uv.a(), uv.b());
    let mut items = Vec::new();
    let mut positions = Vec::new();
    for k in 1..uv.steps() {
        let iu = Interval::right_closed(u[0], u[k])?;
        let iv = Interval::left_closed(v[k], v[k + 1])?;
        items.push(neg_minkowski_sum(&iu, &iv));
        positions.push(k);
    }
    Ok(IntervalCollection { items, positions, origin: Origin::Increasing })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColoringResult {
    pub num_colors: usize,
    /// Colour of each item.
    pub assignment: Vec<usize>,
    /// Item indices of each colour, sorted by left endpoint.
    pub classes: Vec<Vec<usize>>,
}

fn start_key(a: &Interval, b: &Interval) -> Ordering {
    a.lo
        .total_cmp(&b.lo)
        .then(b.closure.lo_closed().cmp(&a.closure.lo_closed()))
        .then(a.hi.total_cmp(&b.hi))
}

/// Optimal colouring of the interval graph: scan by left endpoint and give each
/// interval the first colour whose last member it does not meet.
pub fn min_disjoint_split(coll: &IntervalCollection) -> Result<ColoringResult> {
    if coll.is_empty() {
        return Err(Error::EmptyCollection);
    }
    let items = &coll.items;
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&x, &y| start_key(&items[x], &items[y]));
    let mut assignment = vec![usize::MAX; items.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        let free = classes
            .iter()
            .position(|cls| !items[*cls.last().expect("classes are nonempty")].overlaps(&items[i]));
        let c = match free {
            Some(c) => c,
            None => {
                classes.push(Vec::new());
                classes.len() - 1
            }
        };
        classes[c].push(i);
        assignment[i] = c;
    }
    Ok(ColoringResult { num_colors: classes.len(), assignment, classes })
}

/// Largest number of items sharing a point, computed exactly from endpoints.
pub fn max_point_overlap(items: &[Interval]) -> usize {
    let mut pts: Vec<f64> = items.iter().flat_map(|i| [i.lo, i.hi]).filter(|x| x.is_finite()).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut probes = pts.clone();
    probes.extend(pts.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    if probes.is_empty() {
        return items.len().min(1);
    }
    probes.iter().map(|&x| items.iter().filter(|i| i.contains(x)).count()).max().unwrap_or(0)
}

/// Re-scans each colour class for pairwise disjointness.
pub fn verify_coloring(coll: &IntervalCollection, col: &ColoringResult) -> bool {
    col.classes.iter().all(|cls| {
        cls.iter()
            .enumerate()
            .all(|(x, &i)| cls[x + 1..].iter().all(|&k| !coll.items[i].overlaps(&coll.items[k])))
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub which: Hypothesis,
    pub truncation: usize,
    pub n: usize,
    pub n_doubled: usize,
    pub stable: bool,
    /// Lengths monotone along the class with consecutive ratio bounded away from 1.
    pub per_color_lacunary: Vec<bool>,
    /// Smallest consecutive length ratio per colour class (`max/min` orientation).
    pub per_color_ratio: Vec<f64>,
    pub collection: IntervalCollection,
    pub coloring: ColoringResult,
}

/// Ratio threshold below which a class is not reported as lacunary.
pub const LACUNARY_RATIO: f64 = 1.05;

fn class_lacunarity(coll: &IntervalCollection, class: &[usize]) -> (bool, f64) {
    let mut idx = class.to_vec();
    idx.sort_by_key(|&i| coll.positions[i]);
    let lens: Vec<f64> = idx.iter().map(|&i| coll.items[i].len()).collect();
    if lens.len() < 2 {
        return (true, f64::INFINITY);
    }
    let up = lens.windows(2).all(|w| w[1] > w[0]);
    let down = lens.windows(2).all(|w| w[1] < w[0]);
    let ratio = lens
        .windows(2)
        .map(|w| if w[1] > w[0] { w[1] / w[0] } else { w[0] / w[1] })
        .fold(f64::INFINITY, f64::min);
    ((up || down) && ratio >= LACUNARY_RATIO, ratio)
}

/// Splits the collection at truncation `j` and again at `2j`.
pub fn check_hypothesis(seq: &SequencePair, which: Hypothesis, j: usize) -> Result<HypothesisReport> {
    if j < 2 || seq.steps() < 2 * j {
        return Err(Error::TooShort { needed: 2 * j.max(2), got: seq.steps() });
    }
    let collection = build_hyp_collection(&seq.truncated(j)?, which)?;
    let coloring = min_disjoint_split(&collection)?;
    let doubled = build_hyp_collection(&seq.truncated(2 * j)?, which)?;
    let n_doubled = min_disjoint_split(&doubled)?.num_colors;
    let (per_color_lacunary, per_color_ratio) =
        coloring.classes.iter().map(|c| class_lacunarity(&collection, c)).unzip();
    Ok(HypothesisReport {
        which,
        truncation: j,
        n: coloring.num_colors,
        n_doubled,
        stable: n_doubled == coloring.num_colors,
        per_color_lacunary,
        per_color_ratio,
        collection,
        coloring,
    })
}

/// One row of a chained estimate: `lhs <= middle <= rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainRow {
    pub position: usize,
    pub lhs: f64,
    pub middle: f64,
    pub rhs: f64,
}

impl ChainRow {
    pub fn holds(&self) -> bool {
        let slack = 1e-12 * self.rhs.abs().max(1.0);
        self.lhs <= self.middle + slack && self.middle <= self.rhs + slack
    }
}

fn slope_bound(seq: &SequencePair, k: usize) -> f64 {
    (-(seq.index(k) as f64)).exp2()
}

/// Convex case: `|b_k - b_0| <= Σ_{m=1}^{k} 2^{-(j_m - 1)} |a_m - a_{m-1}| <= 2 |a_k - a_{k-1}|`.
pub fn convex_chain(seq: &SequencePair) -> Vec<ChainRow> {
    let (a, b) = (seq.a(), seq.b());
    let mut acc = 0.0;
    (1..a.len())
        .map(|k| {
            acc += slope_bound(seq, k - 1) * (a[k] - a[k - 1]).abs();
            ChainRow { position: k, lhs: (b[k] - b[0]).abs(), middle: acc, rhs: 2.0 * (a[k] - a[k - 1]).abs() }
        })
        .collect()
}

/// Concave case: `|b_k - b_∞| <= Σ_{m>=k} 2^{-j_m} |a_{m+1} - a_m| + tail <= 2 |a_k - a_{k+1}| + tail`
/// with `tail = 2^{-j_J} |a_J - a_∞|`.
pub fn concave_chain(seq: &SequencePair) -> Result<Vec<ChainRow>> {
    let (a, b) = (seq.a(), seq.b());
    let binf = seq.b_inf().ok_or(Error::LimitRequired)?;
    let ainf = seq.a_inf().filter(|x| x.is_finite()).ok_or(Error::LimitRequired)?;
    let j = seq.steps();
    let tail = slope_bound(seq, j) * (a[j] - ainf).abs();
    let mut rows = Vec::with_capacity(j);
    let mut acc = tail;
    for k in (0..j).rev() {
        acc += slope_bound(seq, k) * (a[k + 1] - a[k]).abs();
        rows.push(ChainRow {
            position: k,
            lhs: (b[k] - binf).abs(),
            middle: acc,
            rhs: 2.0 * (a[k] - a[k + 1]).abs() + tail,
        });
    }
    rows.reverse();
    Ok(rows)
}
