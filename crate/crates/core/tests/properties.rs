use num_complex::Complex64;
use proptest::prelude::*;
use staircase_core::curves::*;
use staircase_core::engine::*;
use staircase_core::intervals::*;
use staircase_core::symbols::*;
use staircase_core::whitney::*;

fn coeffs(vals: &[(f64, f64)]) -> Vec<Complex64> {
    vals.iter().map(|&(re, im)| Complex64::new(re, im)).collect()
}

fn function(vals: &[(f64, f64)], period: f64) -> SampledFunction {
    SampledFunction::from_coefficients(&coeffs(vals), period).unwrap()
}

fn pairs(n: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n)
}

/// Smallest k such that the intervals admit a proper k-colouring, by exhaustive search.
fn brute_chromatic(items: &[Interval]) -> usize {
    let n = items.len();
    for k in 1..=n {
        let mut colour = vec![0usize; n];
        loop {
            let ok = (0..n).all(|i| (i + 1..n).all(|j| colour[i] != colour[j] || !items[i].overlaps(&items[j])));
            if ok {
                return k;
            }
            let mut p = 0;
            while p < n {
                colour[p] += 1;
                if colour[p] < k {
                    break;
                }
                colour[p] = 0;
                p += 1;
            }
            if p == n {
                break;
            }
        }
    }
    n
}

fn interval_strategy() -> impl Strategy<Value = Interval> {
    // endpoints on a coarse lattice so that touching and shared endpoints occur often
    (0i32..12, 1i32..6, 0u8..4).prop_map(|(lo, len, c)| {
        let closure = match c {
            0 => Closure::LeftClosed,
            1 => Closure::RightClosed,
            2 => Closure::Open,
            _ => Closure::Closed,
        };
        Interval::new(lo as f64, (lo + len) as f64, closure).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn dyadic_slopes_are_hit(c in 0.3f64..3.0) {
        let curve = CurveSpec::power_law(c).unwrap();
        let seq = build_dyadic_slope_sequence(&curve, 12).unwrap();
        for (k, &a) in seq.a().iter().enumerate() {
            let t = curve.slope(a) * (seq.index(k) as f64).exp2();
            prop_assert!((t - 1.0).abs() <= 1e-10, "k={} t={}", k, t);
            prop_assert!((seq.b()[k] - curve.value(a)).abs() <= 1e-10 * curve.value(a).abs());
        }
    }

    #[test]
    fn power_law_ratio_and_lacunarity(c in 0.3f64..3.0) {
        let seq = build_dyadic_slope_sequence(&CurveSpec::power_law(c).unwrap(), 12).unwrap();
        let q = (1.0 / (c + 1.0)).exp2();
        for w in seq.a().windows(2) {
            prop_assert!((w[1].abs() / w[0].abs() - q).abs() <= 1e-12);
        }
        let cls = classify_sequence(&seq).unwrap();
        prop_assert!(cls.lacunary);
        prop_assert!((cls.ratio_q - q).abs() <= 1e-12);
    }

    #[test]
    fn bisection_budget_doubling_is_invisible(c in 0.3f64..3.0, fam in 0usize..4) {
        let curve = match fam {
            0 => CurveSpec::power_law(c).unwrap(),
            1 => CurveSpec::hyperboloid(),
            2 => CurveSpec::monomial(1.0 + c).unwrap(),
            _ => CurveSpec::rational(c).unwrap(),
        };
        let once = build_dyadic_slope_sequence_with(&curve, 8, BuildOptions { first_index: None, max_iter: 200 }).unwrap();
        let twice = build_dyadic_slope_sequence_with(&curve, 8, BuildOptions { first_index: None, max_iter: 400 }).unwrap();
        for (x, y) in once.a().iter().zip(twice.a()) {
            prop_assert!((x - y).abs() <= 1e-10 * x.abs().max(1.0));
        }
    }

    #[test]
    fn analytic_slopes_match_differences(x in 0.05f64..0.95, c in 1.2f64..3.0) {
        let cases = [
            (CurveSpec::power_law(c).unwrap(), -x * 4.0),
            (CurveSpec::hyperboloid(), x),
            (CurveSpec::exponential(), 4.0 * x - 2.0),
            (CurveSpec::monomial(c).unwrap(), x),
            (CurveSpec::circle_arc(), 0.9 * x),
            (CurveSpec::rational(c).unwrap(), -c - 0.5 - 3.0 * x),
            (CurveSpec::arctan(), -3.0 * x),
        ];
        for (curve, p) in cases {
            prop_assert!(curve.derivative_mismatch(&[p]) <= 1e-6, "{} at {}", curve.name(), p);
        }
    }

    #[test]
    fn minkowski_length_adds(a in interval_strategy(), b in interval_strategy()) {
        let s = neg_minkowski_sum(&a, &b);
        prop_assert!((s.len() - a.len() - b.len()).abs() < 1e-12);
        prop_assert_eq!(s.lo(), -a.hi() - b.hi());
        prop_assert_eq!(s.closure().lo_closed(), a.closure().hi_closed() && b.closure().hi_closed());
    }

    #[test]
    fn greedy_colouring_is_optimal(items in prop::collection::vec(interval_strategy(), 1..=6)) {
        let coll = IntervalCollection::custom(items.clone());
        let col = min_disjoint_split(&coll).unwrap();
        prop_assert!(verify_coloring(&coll, &col));
        prop_assert_eq!(col.num_colors, brute_chromatic(&items));
        prop_assert_eq!(col.num_colors, max_point_overlap(&items));
    }

    #[test]
    fn staircase_terms_partition_the_staircase(c in 0.5f64..2.5, j in 3usize..9) {
        let seq = build_dyadic_slope_sequence(&CurveSpec::power_law(c).unwrap(), j).unwrap();
        let whole = staircase_symbol(&seq).unwrap();
        let (a, b) = (seq.a(), seq.b());
        let terms: Vec<SymbolSpec> = (1..j)
            .map(|k| SymbolSpec::rectangle(Interval::left_closed(a[k + 1], a[k]).unwrap(), Interval::left_closed(b[k], b[0]).unwrap()))
            .collect();
        let grid = FrequencyGrid { nx: 96, ny: 96, window: whole.bbox() };
        let sum = sample_symbol(&SymbolSpec::sum(terms.clone()), &grid).unwrap();
        prop_assert_eq!(&sample_symbol(&whole, &grid).unwrap().values, &sum.values);
        prop_assert!(sum.values.iter().all(|&v| v <= 1.0));
    }

    #[test]
    fn polygonal_symbol_matches_piecewise_curve(j in 3usize..9, x in 0.0f64..1.0, y in 0.0f64..1.0) {
        let seq = build_dyadic_slope_sequence(&CurveSpec::hyperboloid(), j).unwrap();
        let poly = PolygonalCurve::from_sequence(&seq).unwrap();
        let (lo, hi) = poly.x_range();
        let xi = lo + x * (hi - lo);
        let eta = seq.b()[j] + y * (seq.b()[0] - seq.b()[j]);
        let a = polygonal_from_curve(poly.clone());
        let b = epigraph_symbol(&CurveSpec::piecewise_linear(poly), Interval::closed(lo, hi).unwrap());
        prop_assert_eq!(a.eval(xi, eta), b.eval(xi, eta));
    }

    #[test]
    fn bilinear_in_first_argument(f1 in pairs(16), f2 in pairs(16), g in pairs(16), al in -2.0f64..2.0) {
        let seq = build_dyadic_slope_sequence(&CurveSpec::power_law(1.0).unwrap(), 6).unwrap();
        let sym = staircase_symbol(&seq).unwrap();
        let period = 4.0;
        let (f1, f2, g) = (function(&f1, period), function(&f2, period), function(&g, period));
        let lin = f1.scaled(Complex64::new(al, 0.0)).add(&f2).unwrap();
        let lhs = apply_bilinear(&sym, &lin, &g).unwrap();
        let rhs = apply_bilinear(&sym, &f1, &g).unwrap().scaled(Complex64::new(al, 0.0)).add(&apply_bilinear(&sym, &f2, &g).unwrap()).unwrap();
        for (x, y) in lhs.samples().iter().zip(rhs.samples()) {
            prop_assert!((x - y).norm() <= 1e-10);
        }
    }

    #[test]
    fn output_spectrum_stays_in_sumset(f in pairs(32), g in pairs(32), lo in -3i32..0, w in 1i32..3) {
        let period = 4.0;
        let a = Interval::left_closed(lo as f64 / 2.0, (lo + w) as f64 / 2.0).unwrap();
        let b = Interval::left_closed(0.25, 1.5).unwrap();
        let out = apply_bilinear(&SymbolSpec::rectangle(a, b), &function(&f, period), &function(&g, period)).unwrap();
        let c = out.coefficients();
        for (i, v) in c.iter().enumerate() {
            let z = out.frequency(i);
            if z < a.lo() + b.lo() - 1e-12 || z > a.hi() + b.hi() + 1e-12 {
                prop_assert!(v.norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn parseval(f in pairs(32)) {
        let period = 3.0;
        let fun = function(&f, period);
        let l2 = lp_norm(&fun, 2.0).unwrap();
        let coef: f64 = coeffs(&f).iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt() * period.sqrt();
        prop_assert!((l2 - coef).abs() <= 1e-10 * coef.max(1.0));
    }

    #[test]
    fn whitney_squares_pass_sampling_oracle(c0 in 1u32..5, shift in 1u32..3) {
        let window = Rect { xi_lo: -1.0, xi_hi: 1.0, eta_lo: -1.0, eta_hi: 1.0 };
        let squares = enumerate_whitney_squares(c0, window, (-4, -3), shift, DEFAULT_LIMIT).unwrap();
        for sq in squares.iter().step_by(7) {
            // boundary points of the closed dilations
            let hits = |lambda: f64| {
                let ((x0, x1), (y0, y1)) = sq.dilated(lambda);
                (0..=1000).any(|i| {
                    let t = i as f64 / 1000.0;
                    let pts = [(x0 + t * (x1 - x0), y0), (x0 + t * (x1 - x0), y1), (x0, y0 + t * (y1 - y0)), (x1, y0 + t * (y1 - y0))];
                    let side: Vec<f64> = pts.iter().map(|p| p.0 - p.1).collect();
                    side.iter().any(|&d| d == 0.0) || side.iter().any(|&d| d > 0.0) && side.iter().any(|&d| d < 0.0)
                })
            };
            prop_assert!(!hits(c0 as f64));
            prop_assert!(hits(4.0 * c0 as f64));
        }
    }

    #[test]
    fn k_interval_contains_sums(j in 0usize..5, pick in 0usize..1000, u in 0.0f64..1.0, v in 0.0f64..1.0) {
        let seq = build_dyadic_slope_sequence(&CurveSpec::hyperboloid(), 8).unwrap();
        let poly = PolygonalCurve::from_sequence(&seq).unwrap();
        let rep = build_cover(&poly, j, &CoverParams { depth: 1, samples: 0, ..CoverParams::default() }).unwrap();
        let r = rep.rects[pick % rep.rects.len()];
        prop_assert!((r.height() / r.width() - poly.slope(j)).abs() <= 1e-12);
        let xi = r.xi.0 + u * r.width();
        let eta = r.eta.0 + v * r.height();
        // back in the coordinates of L_j²(S), before the translation by (a_j, b_j)
        let (xs, ys) = (xi - r.vertex.0, eta - r.vertex.1);
        let k = r.k_interval();
        prop_assert!(-xs - ys >= k.lo() - 1e-12 && -xs - ys <= k.hi() + 1e-12);
        prop_assert!((k.len() - (1.0 + r.slope) * r.square.side()).abs() <= 1e-15);
    }

    #[test]
    fn mollified_partition_sums_to_one(j0 in 0u32..3, kw in 1.0f64..3.0) {
        let params = MollifierParams { base: 3, kernel_width: kw };
        prop_assert!(partition_check(j0, &params, 2.0, 2048).unwrap() <= 1e-12);
    }
}

#[test]
fn bilinear_matches_double_sum() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let (n, period) = (64, 8.0);
    let seq = build_dyadic_slope_sequence(&CurveSpec::power_law(1.0).unwrap(), 6).unwrap();
    let sym = staircase_symbol(&seq).unwrap();
    for _ in 0..20 {
        let mut sparse = || {
            let mut c = vec![Complex64::new(0.0, 0.0); n];
            for _ in 0..6 {
                c[rng.gen_range(0..n)] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
            c
        };
        let (cf, cg) = (sparse(), sparse());
        let out = apply_bilinear(&sym, &SampledFunction::from_coefficients(&cf, period).unwrap(), &SampledFunction::from_coefficients(&cg, period).unwrap()).unwrap();
        for (i, x) in out.samples().iter().enumerate() {
            let t = out.x(i);
            let mut s = Complex64::new(0.0, 0.0);
            for p in 0..n {
                for q in 0..n {
                    let (k1, k2) = (p as f64 - 32.0, q as f64 - 32.0);
                    let m = sym.eval(k1 / period, k2 / period);
                    s += cf[p] * cg[q] * m * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k1 + k2) * t / period);
                }
            }
            assert!((x - s).norm() <= 1e-10);
        }
    }
}
