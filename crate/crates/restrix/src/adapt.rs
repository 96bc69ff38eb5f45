//! Height of a graph function and the restriction exponents derived from
//! it. The height h is the supremum of the Newton distance over linear
//! coordinate systems; for the convex finite-line-type surfaces treated
//! here it is attained after a rotation, so the search runs over SO(3).
//!
//! The distance is piecewise constant in the rotation (it only depends on
//! the Taylor support after dust pruning), so the search is derivative
//! free: deterministic seeded multistart plus coordinate-wise angular
//! refinement with a shrinking step. The starts always include the
//! identity and the eigenbasis of the Hessian at the origin; aligning
//! coordinates with the degenerate directions of the second fundamental
//! form is what actually moves the support for the surfaces of interest,
//! and random rotations alone have essentially no chance of hitting the
//! measure-zero aligned set.

use crate::newton::{self, DistanceResult, NewtonError};
use crate::polyalg::{LinearChange, Polynomial};
use crate::rat::{rat_int, Rat};
use nalgebra::DMatrix;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

/// Relative pruning threshold applied after each rotation; rotations of
/// integer polynomials produce near-zero dust that would otherwise fake a
/// larger Taylor support.
pub const ROTATION_PRUNE_REL: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum AdaptError {
    #[error("degenerate polynomial: {0}")]
    Degenerate(#[from] NewtonError),
    #[error("dual exponent undefined for p <= 1 (got {0})")]
    DualUndefined(String),
}

/// Result of the height search.
#[derive(Debug, Clone)]
pub struct HeightResult {
    /// Best Newton distance found over the searched rotations; a certified
    /// lower bound for the height, with equality expected for convex
    /// finite-line-type inputs.
    pub h: Rat,
    pub maximizer: LinearChange,
    /// Distance in the coordinates the polynomial arrived in.
    pub d_original: Rat,
    /// True when the principal face of the maximizer is a compact facet
    /// meeting the diagonal in its relative interior.
    pub certified: bool,
    /// Per-start refined optima: (start index, final angle offsets, d).
    pub trace: Vec<(usize, [f64; 3], Rat)>,
    /// Distance data in the maximizing coordinates.
    pub best_distance: DistanceResult,
}

fn objective(p: &Polynomial, rot: &LinearChange) -> Option<(Rat, DistanceResult)> {
    let composed = p.compose_linear_pruned(rot, ROTATION_PRUNE_REL).ok()?;
    let s = newton::support(&composed).ok()?;
    let dr = newton::distance_of_support(&s);
    Some((dr.d.clone(), dr))
}

/// Rotation starts from the eigenbasis of the Hessian at the origin. For a
/// surface whose quadratic part has a kernel (the finite-type directions of
/// order > 2), these starts align the coordinates with that kernel exactly.
fn hessian_eigen_starts(p: &Polynomial) -> Vec<LinearChange> {
    let n = p.nvars();
    let hess = p.hessian();
    let origin = vec![0.0; n];
    let h = DMatrix::from_fn(n, n, |i, j| hess[i][j].eval_unchecked(&origin));
    if h.amax() == 0.0 {
        return Vec::new();
    }
    let eig = h.symmetric_eigen();
    let mut q = eig.eigenvectors.clone();
    // deterministic sign convention per column
    for j in 0..n {
        let col = q.column(j);
        let lead = (0..n).find(|&i| col[i].abs() > 1e-12).unwrap_or(0);
        if col[lead] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    if q.determinant() < 0.0 {
        for i in 0..n {
            q[(i, 0)] = -q[(i, 0)];
        }
    }
    let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| q[(i, j)]).collect()).collect();
    match LinearChange::from_rows(&rows) {
        Ok(r) => vec![r],
        Err(_) => Vec::new(),
    }
}

/// Maximizes the Newton distance of `p` composed with rotations of R^3.
/// Deterministic for a fixed seed, regardless of thread count.
pub fn height_search(
    p: &Polynomial,
    starts: usize,
    iters: usize,
    seed: u64,
) -> Result<HeightResult, AdaptError> {
    assert!(starts >= 1);
    let identity = LinearChange::identity(p.nvars());
    let (d_original, base_dr) = objective(p, &identity)
        .ok_or(AdaptError::Degenerate(NewtonError::EmptySupport))?;

    // start rotations: identity, Hessian eigenbasis, then seeded random
    let mut start_rots: Vec<LinearChange> = vec![identity];
    start_rots.extend(hessian_eigen_starts(p));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while start_rots.len() < starts {
        let a = rng.gen_range(0.0..std::f64::consts::TAU);
        let b = rng.gen_range(0.0..std::f64::consts::PI);
        let c = rng.gen_range(0.0..std::f64::consts::TAU);
        start_rots.push(LinearChange::rotation_zyz(a, b, c));
    }

    // shrink factor chosen so the final step is below 1e-4 rad
    let step0 = 0.5f64;
    let shrink = if iters == 0 { 1.0 } else { (5e-5f64 / step0).powf(1.0 / iters as f64) };

    let per_start: Vec<(usize, [f64; 3], Rat, Option<DistanceResult>, LinearChange)> = start_rots
        .into_par_iter()
        .enumerate()
        .map(|(idx, start_rot)| {
            let mut angles = [0.0f64; 3];
            let rot_at = |ang: &[f64; 3]| {
                start_rot.compose(&LinearChange::rotation_zyz(ang[0], ang[1], ang[2]))
            };
            let mut best_rot = start_rot.clone();
            let (mut best_d, mut best_dr) = match objective(p, &best_rot) {
                Some((d, dr)) => (d, Some(dr)),
                None => (rat_int(0), None),
            };
            let mut step = step0;
            for _ in 0..iters {
                for axis in 0..3 {
                    for dir in [1.0f64, -1.0] {
                        let mut cand = angles;
                        cand[axis] += dir * step;
                        let rot = rot_at(&cand);
                        if let Some((d, dr)) = objective(p, &rot) {
                            if d > best_d {
                                best_d = d;
                                best_dr = Some(dr);
                                best_rot = rot;
                                angles = cand;
                            }
                        }
                    }
                }
                step *= shrink;
            }
            (idx, angles, best_d, best_dr, best_rot)
        })
        .collect();

    // merge by max d, first start index winning ties
    let mut best = None::<&(usize, [f64; 3], Rat, Option<DistanceResult>, LinearChange)>;
    for r in &per_start {
        if r.3.is_some() && best.map_or(true, |b| r.2 > b.2) {
            best = Some(r);
        }
    }
    let best = best.expect("identity start always evaluates");
    let best_dr = best.3.clone().expect("best start has distance data");
    let certified = best_dr.principal_face_dim == 2 && best_dr.attaining_normal.iter().all(|&a| a > 0);

    let trace: Vec<(usize, [f64; 3], Rat)> =
        per_start.iter().map(|r| (r.0, r.1, r.2.clone())).collect();

    debug_assert!(best.2 >= d_original);
    let _ = base_dr;
    Ok(HeightResult {
        h: best.2.clone(),
        maximizer: best.4.clone(),
        d_original,
        certified,
        trace,
        best_distance: best_dr,
    })
}

/// All exponents the theory attaches to a height (codimension 1).
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentReport {
    pub h: Rat,
    /// Decay rate beta = 1/h.
    pub beta: Rat,
    /// Critical restriction exponent p* = 2(1+h)/(2h+1).
    pub p_star: Rat,
    /// Dual of p*: q* = 2(1+h).
    pub q_star: Rat,
    /// Knapp lower bound on the dual exponent, q >= 2d+2.
    pub q_lower: Rat,
    /// Codimension of the surface.
    pub m: u32,
}

/// Transference exponent p = 2(m+beta)/(2m+beta) associated to decay rate
/// beta in codimension m.
pub fn greenleaf_p(beta: &Rat, m: u32) -> Rat {
    assert!(beta > &rat_int(0) && m >= 1);
    let m = rat_int(m as i64);
    let two = rat_int(2);
    &two * (&m + beta) / (&two * &m + beta)
}

/// Fills the exponent report from a height, taking the Newton distance
/// equal to h (adapted coordinates).
pub fn critical_p(h: &Rat) -> ExponentReport {
    exponent_report(h, h)
}

/// Exponent report with a separately supplied distance for the Knapp lower
/// bound q >= 2d+2.
pub fn exponent_report(h: &Rat, d: &Rat) -> ExponentReport {
    assert!(h > &rat_int(0));
    let one = Rat::one();
    let two = rat_int(2);
    let p_star = &two * (&one + h) / (&two * h + &one);
    let q_star = &two * (&one + h);
    let q_lower = &two * d + &two;
    let beta = &one / h;
    // the transference formula at beta = 1/h, m = 1 must reproduce p*
    assert_eq!(greenleaf_p(&beta, 1), p_star);
    // p* and q* are dual: 1/p* + 1/q* = 1
    assert_eq!(&one / &p_star + &one / &q_star, one);
    ExponentReport { h: h.clone(), beta, p_star, q_star, q_lower, m: 1 }
}

/// Dual exponent: q with 1/p + 1/q = 1, defined for p > 1.
pub fn dual_exponent(p: &Rat) -> Result<Rat, AdaptError> {
    if p <= &Rat::one() {
        return Err(AdaptError::DualUndefined(crate::rat::rat_to_string(p)));
    }
    Ok(p / (p - Rat::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_poly;
    use crate::rat::rat;

    #[test]
    fn greenleaf_examples() {
        assert_eq!(greenleaf_p(&rat_int(1), 1), rat(4, 3));
        // beta = 3/2 reproduces the classical sphere threshold
        // 2(n+1)/(n+3) at n = 4
        assert_eq!(greenleaf_p(&rat(3, 2), 1), rat(10, 7));
        assert_eq!(greenleaf_p(&rat(5, 4), 1), rat(18, 13));
    }

    #[test]
    fn critical_p_examples() {
        let r = critical_p(&rat(2, 3));
        assert_eq!(r.p_star, rat(10, 7));
        assert_eq!(r.q_star, rat(10, 3));
        assert_eq!(r.beta, rat(3, 2));
        let r = critical_p(&rat_int(1));
        assert_eq!(r.p_star, rat(4, 3));
        assert_eq!(r.q_star, rat(4, 1));
        let r = critical_p(&rat(4, 5));
        assert_eq!(r.p_star, rat(18, 13));
        assert_eq!(r.q_star, rat(18, 5));
        assert_eq!(r.q_lower, rat(18, 5));
    }

    #[test]
    fn dual_examples() {
        assert_eq!(dual_exponent(&rat_int(2)).unwrap(), rat_int(2));
        assert_eq!(dual_exponent(&rat(10, 7)).unwrap(), rat(10, 3));
        assert_eq!(dual_exponent(&rat(4, 3)).unwrap(), rat_int(4));
        assert!(dual_exponent(&rat_int(1)).is_err());
        // involution
        for p in [rat(7, 5), rat(13, 9), rat(3, 2)] {
            let q = dual_exponent(&p).unwrap();
            assert_eq!(dual_exponent(&q).unwrap(), p);
        }
    }

    #[test]
    fn p_star_monotone_and_limits() {
        // strictly decreasing in h, q* strictly increasing
        let grid: Vec<Rat> = (1..20).map(|k| rat(k, 7) + rat(1, 2)).collect();
        for w in grid.windows(2) {
            let a = critical_p(&w[0]);
            let b = critical_p(&w[1]);
            assert!(b.p_star < a.p_star);
            assert!(b.q_star > a.q_star);
        }
        // p* in (1, 2) for h > 1/2, and -> 1 as h -> infinity
        for h in &grid {
            let p = critical_p(h).p_star;
            assert!(p > rat_int(1) && p < rat_int(2));
        }
        let far = critical_p(&rat_int(1000)).p_star;
        assert!(far > rat_int(1) && (&far - rat_int(1)) < rat(1, 1000));
    }

    #[test]
    fn height_of_paraboloid() {
        let p = parse_poly("x1^2 + x2^2 + x3^2").unwrap();
        let r = height_search(&p, 6, 8, 7).unwrap();
        assert_eq!(r.h, rat(2, 3));
        assert_eq!(r.d_original, rat(2, 3));
        assert!(r.certified);
    }

    #[test]
    fn height_of_quartic() {
        let p = parse_poly("x1^2 + x2^2 + x3^4").unwrap();
        let r = height_search(&p, 6, 8, 7).unwrap();
        assert_eq!(r.h, rat(4, 5));
        assert_eq!(r.d_original, rat(4, 5));
        assert!(r.certified);
    }

    #[test]
    fn height_of_hyperbolic_paraboloid_graph() {
        // x1*x2 + x3^2 already has d = 2/3 and no rotation exceeds it
        let p = parse_poly("x1*x2 + x3^2").unwrap();
        let r = height_search(&p, 12, 10, 3).unwrap();
        assert_eq!(r.h, rat(2, 3));
        assert_eq!(r.d_original, rat(2, 3));
    }

    #[test]
    fn height_found_after_random_pre_rotation() {
        // the composed quartic hides its adapted coordinates; the Hessian
        // eigen-start must recover them
        let p = parse_poly("x1^2 + x2^2 + x3^4").unwrap();
        let pre = LinearChange::rotation_zyz(0.83, 1.21, -0.57);
        let q = p.compose_linear_pruned(&pre, ROTATION_PRUNE_REL).unwrap();
        let r = height_search(&q, 8, 10, 1).unwrap();
        assert_eq!(r.h, rat(4, 5));
    }

    #[test]
    fn degenerate_input() {
        let z = parse_poly("0").unwrap();
        assert!(matches!(height_search(&z, 4, 2, 0), Err(AdaptError::Degenerate(_))));
    }
}
