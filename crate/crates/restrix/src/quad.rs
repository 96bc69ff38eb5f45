//! One-dimensional quadrature building blocks: composite Gauss-Legendre
//! panels (the workhorse for oscillatory integrands, where the panel count
//! is chosen from a frequency estimate) and an adaptive Gauss-Kronrod 15
//! rule for non-oscillatory reference integrals.

/// 8-point Gauss-Legendre nodes on [-1, 1], positive half.
pub const GL8_NODES: [f64; 4] = [
    0.18343464249564980494,
    0.52553240991632898582,
    0.79666647741362673959,
    0.96028985649753623168,
];

/// Weights matching `GL8_NODES`.
pub const GL8_WEIGHTS: [f64; 4] = [
    0.36268378337836198297,
    0.31370664587788728734,
    0.22238103445337447054,
    0.10122853629037625915,
];

pub const GL8_POINTS_PER_PANEL: usize = 8;

/// All 8 nodes and weights of one panel mapped to `[lo, hi]`.
pub fn gl8_panel(lo: f64, hi: f64, nodes: &mut Vec<f64>, weights: &mut Vec<f64>) {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    for k in 0..4 {
        let x = GL8_NODES[k] * half;
        let w = GL8_WEIGHTS[k] * half;
        nodes.push(mid - x);
        weights.push(w);
        nodes.push(mid + x);
        weights.push(w);
    }
}

/// Composite GL-8 grid: `panels` equal panels over `[lo, hi]`.
pub fn gl8_grid(lo: f64, hi: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(panels >= 1 && hi > lo);
    let mut nodes = Vec::with_capacity(panels * GL8_POINTS_PER_PANEL);
    let mut weights = Vec::with_capacity(panels * GL8_POINTS_PER_PANEL);
    let width = (hi - lo) / panels as f64;
    for p in 0..panels {
        let a = lo + p as f64 * width;
        gl8_panel(a, a + width, &mut nodes, &mut weights);
    }
    (nodes, weights)
}

/// Composite GL-8 integral of `f` over `[lo, hi]`.
pub fn gl8_integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, panels: usize) -> f64 {
    let (nodes, weights) = gl8_grid(lo, hi, panels);
    nodes.iter().zip(&weights).map(|(&x, &w)| w * f(x)).sum()
}

// Gauss-Kronrod 15 / Gauss 7 pair (QUADPACK abscissae).
const XGK15: [f64; 8] = [
    0.9914553711208126,
    0.9491079123427585,
    0.8648644233597691,
    0.7415311855993944,
    0.5860872354676911,
    0.4058451513773972,
    0.2077849550078985,
    0.0,
];

const WGK15: [f64; 8] = [
    0.022935322010529224,
    0.06309209262997856,
    0.10479001032225018,
    0.14065325971552592,
    0.1690047266392679,
    0.1903505780647854,
    0.20443294007529889,
    0.20948214108472782,
];

const WG7: [f64; 4] = [
    0.1294849661688697,
    0.27970539148927664,
    0.3818300050505189,
    0.4179591836734694,
];

/// One GK15 application on `[a, b]`; returns (kronrod estimate, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(mid);
    let mut kronrod = fc * WGK15[7];
    let mut gauss = fc * WG7[3];
    for j in 0..7 {
        let x = half * XGK15[j];
        let f1 = f(mid - x);
        let f2 = f(mid + x);
        kronrod += WGK15[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG7[j / 2] * (f1 + f2);
        }
    }
    kronrod *= half;
    gauss *= half;
    let err = (kronrod - gauss).abs();
    (kronrod, err)
}

/// Adaptive bisection driven by the GK15 error estimate. `tol` is absolute;
/// intervals are split worst-first until the summed error estimate passes.
pub fn adaptive_gk<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64, max_intervals: usize) -> f64 {
    #[derive(Debug)]
    struct Seg {
        a: f64,
        b: f64,
        val: f64,
        err: f64,
    }
    let (val, err) = gk15(&f, a, b);
    let mut segs = vec![Seg { a, b, val, err }];
    loop {
        let total_err: f64 = segs.iter().map(|s| s.err).sum();
        if total_err <= tol || segs.len() >= max_intervals {
            return segs.iter().map(|s| s.val).sum();
        }
        let worst = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .map(|(i, _)| i)
            .unwrap();
        let seg = segs.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // interval at floating resolution; keep its estimate
            segs.push(seg);
            return segs.iter().map(|s| s.val).sum();
        }
        let (v1, e1) = gk15(&f, seg.a, mid);
        let (v2, e2) = gk15(&f, mid, seg.b);
        segs.push(Seg { a: seg.a, b: mid, val: v1, err: e1 });
        segs.push(Seg { a: mid, b: seg.b, val: v2, err: e2 });
    }
}
