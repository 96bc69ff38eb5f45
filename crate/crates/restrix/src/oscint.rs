//! Fourier transform of the weighted surface measure of the graph
//! `x4 = phi(x')` and the decay-exponent fit against it.
//!
//! J(xi) = integral over R^3 of
//!     exp(i (xi1 x1 + xi2 x2 + xi3 x3 + xi4 phi(x))) psi(x) W(x) dx,
//! with psi a compactly supported bump and W the surface-area factor
//! sqrt(1 + |grad phi|^2) (switchable off for oracle comparisons).
//!
//! The integrator is tensor-product composite Gauss-Legendre of order 8.
//! The panel count per axis is max(16, ceil(npw * osc_i)) where osc_i is a
//! per-axis oscillation-count estimate (|xi_i| r + |xi4| B_i r) / (2 pi)
//! and B_i bounds |d_i phi| over the support box by interval arithmetic.
//! Every returned value carries a one-step Richardson-style guard: the
//! integral is recomputed at half the panel count and accepted when the two
//! agree to 1e-6 relative; otherwise the panel count doubles until the
//! evaluation budget runs out.

use crate::fit::LineFit;
use crate::polyalg::Polynomial;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

/// Relative agreement required between the accepted grid and the half-count
/// check grid.
pub const CONVERGENCE_REL_TOL: f64 = 1e-6;

/// Floating noise floor of the tensor sums, relative to the gross mass
/// sum |amplitude|: magnitudes below ~10 times this are pure cancellation
/// residue and are flagged as underflow instead of being refined forever.
pub const NOISE_FLOOR_REL: f64 = 1e-11;

#[derive(Debug, Error)]
pub enum OscError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("quadrature budget exceeded: needs about {projected} evaluations, budget is {budget}")]
    BudgetExceeded { projected: u64, budget: u64 },
    #[error("convergence guard failure: coarse {coarse:?} vs fine {fine:?} differ beyond tolerance")]
    ConvergenceFailure { coarse: (f64, f64), fine: (f64, f64) },
}

/// Bump profile multiplying the surface measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BumpKind {
    /// exp(1 - 1/(1 - |x/r|^2)) inside |x| < r; identically 0 outside.
    SmoothExp,
    /// (1 - |x/r|^2)^m inside |x| < r.
    PolyPower(u32),
}

impl BumpKind {
    /// Profile as a function of s = |x/r|^2.
    #[inline]
    pub fn profile(&self, s: f64) -> f64 {
        if s >= 1.0 {
            return 0.0;
        }
        match *self {
            BumpKind::SmoothExp => (1.0 - 1.0 / (1.0 - s)).exp(),
            BumpKind::PolyPower(m) => (1.0 - s).powi(m as i32),
        }
    }
}

/// The measure d mu = psi dS on the graph of phi, restricted to the ball
/// |x'| < bump_radius.
#[derive(Debug, Clone)]
pub struct SurfacePatch {
    pub phi: Polynomial,
    pub bump_radius: f64,
    pub bump_kind: BumpKind,
    pub include_area_factor: bool,
}

impl SurfacePatch {
    pub fn new(
        phi: Polynomial,
        bump_radius: f64,
        bump_kind: BumpKind,
        include_area_factor: bool,
    ) -> Result<Self, OscError> {
        if phi.nvars() != 3 {
            return Err(OscError::InvalidParameter(format!(
                "graph function must have 3 variables, got {}",
                phi.nvars()
            )));
        }
        if !(bump_radius > 0.0) {
            return Err(OscError::InvalidParameter("bump radius must be positive".into()));
        }
        Ok(SurfacePatch { phi, bump_radius, bump_kind, include_area_factor })
    }

    /// Standard patch: smooth bump, area factor on.
    pub fn standard(phi: Polynomial, bump_radius: f64) -> Result<Self, OscError> {
        Self::new(phi, bump_radius, BumpKind::SmoothExp, true)
    }

    /// psi(x); equals 1 at the origin and vanishes for |x| >= bump_radius.
    pub fn psi(&self, x: &[f64; 3]) -> f64 {
        let s = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (self.bump_radius * self.bump_radius);
        self.bump_kind.profile(s)
    }

    /// sqrt(1 + |grad phi|^2) at x, or 1 when the area factor is off.
    pub fn area_weight(&self, x: &[f64; 3]) -> f64 {
        if !self.include_area_factor {
            return 1.0;
        }
        let g2: f64 = self
            .phi
            .gradient()
            .iter()
            .map(|g| {
                let v = g.eval_unchecked(x);
                v * v
            })
            .sum();
        (1.0 + g2).sqrt()
    }

    /// Interval bounds B_i >= sup |d_i phi| over the box [-r, r]^3.
    pub fn gradient_bounds(&self) -> [f64; 3] {
        let r = self.bump_radius;
        let mut b = [0.0f64; 3];
        for (i, g) in self.phi.gradient().iter().enumerate() {
            b[i] = g
                .terms()
                .iter()
                .map(|t| t.coefficient.abs() * r.powi(t.total_degree() as i32))
                .sum();
        }
        b
    }
}

/// A frequency point in R^4; the fourth coordinate pairs with phi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyPoint {
    pub xi: [f64; 4],
}

impl From<[f64; 4]> for FrequencyPoint {
    fn from(xi: [f64; 4]) -> Self {
        FrequencyPoint { xi }
    }
}

/// Budget and resolution knobs of the oscillatory integrator.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    /// Panel multiplier per estimated oscillation (named after the sampling
    /// density it buys: each panel carries 8 Gauss nodes). Must be >= 4.
    pub nodes_per_wavelength: f64,
    /// Maximum integrand evaluations for one J(xi) computation, counting
    /// the convergence-check grids.
    pub max_evaluations: u64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { nodes_per_wavelength: 4.0, max_evaluations: 200_000_000 }
    }
}

/// One computed value of J(xi) with its convergence evidence.
#[derive(Debug, Clone)]
pub struct FourierSample {
    pub value: Complex64,
    /// Value on the half-panel-count grid used by the guard.
    pub check_value: Complex64,
    pub panels: [usize; 3],
    pub converged: bool,
    /// |value| is at the floating cancellation floor; the number is noise.
    pub underflow: bool,
    pub evaluations: u64,
    /// Sum of |amplitude| over the grid (the scale cancellation is
    /// measured against).
    pub gross: f64,
}

struct TermData {
    e1: u32,
    e2: u32,
    e3: usize,
    c: f64,
}

fn term_data(p: &Polynomial) -> (Vec<TermData>, usize) {
    let deg3 = p.terms().iter().map(|t| t.exponents[2]).max().unwrap_or(0) as usize;
    let data = p
        .terms()
        .iter()
        .map(|t| TermData { e1: t.exponents[0], e2: t.exponents[1], e3: t.exponents[2] as usize, c: t.coefficient })
        .collect();
    (data, deg3)
}

#[inline]
fn horner(coeffs: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Power table: pow[node * stride + e] = node_value^e.
fn power_table(nodes: &[f64], max_exp: usize) -> (Vec<f64>, usize) {
    let stride = max_exp + 1;
    let mut table = vec![0.0; nodes.len() * stride];
    for (i, &x) in nodes.iter().enumerate() {
        let row = &mut table[i * stride..(i + 1) * stride];
        row[0] = 1.0;
        for e in 1..stride {
            row[e] = row[e - 1] * x;
        }
    }
    (table, stride)
}

/// Tensor-product evaluation of J(xi) on a fixed grid. Returns the complex
/// integral and the gross amplitude mass. Deterministic for any thread
/// count: slabs are reduced in index order.
fn tensor_integral(sp: &SurfacePatch, xi: &[f64; 4], panels: [usize; 3]) -> (Complex64, f64) {
    let r = sp.bump_radius;
    let grids: Vec<(Vec<f64>, Vec<f64>)> =
        panels.iter().map(|&p| crate::quad::gl8_grid(-r, r, p)).collect();

    let (phi_terms, phi_deg3) = term_data(&sp.phi);
    let gradsq = if sp.include_area_factor {
        let g = sp.phi.gradient();
        Some(g.iter().fold(Polynomial::zero(3), |acc, gi| acc.add(&gi.mul(gi))))
    } else {
        None
    };
    let (gs_terms, gs_deg3) = gradsq.as_ref().map(term_data).unwrap_or((Vec::new(), 0));

    let max_e1 = phi_terms.iter().map(|t| t.e1).chain(gs_terms.iter().map(|t| t.e1)).max().unwrap_or(0) as usize;
    let max_e2 = phi_terms.iter().map(|t| t.e2).chain(gs_terms.iter().map(|t| t.e2)).max().unwrap_or(0) as usize;
    let (xpow, xstride) = power_table(&grids[0].0, max_e1);
    let (ypow, ystride) = power_table(&grids[1].0, max_e2);

    let r2 = r * r;
    let inv_r2 = 1.0 / r2;
    let bump = sp.bump_kind;
    let area = sp.include_area_factor;
    let (xi1, xi2, xi3, xi4) = (xi[0], xi[1], xi[2], xi[3]);

    let slabs: Vec<(Complex64, f64)> = (0..grids[0].0.len())
        .into_par_iter()
        .map(|a| {
            let x = grids[0].0[a];
            let wx = grids[0].1[a];
            let xp = &xpow[a * xstride..(a + 1) * xstride];
            let mut phi_z = vec![0.0f64; phi_deg3 + 1];
            let mut gs_z = vec![0.0f64; gs_deg3 + 1];
            let mut slab = Complex64::new(0.0, 0.0);
            let mut slab_gross = 0.0f64;
            for (b, (&y, &wy)) in grids[1].0.iter().zip(&grids[1].1).enumerate() {
                let r2xy = x * x + y * y;
                if r2xy >= r2 {
                    continue; // psi vanishes on the whole z-line
                }
                let yp = &ypow[b * ystride..(b + 1) * ystride];
                phi_z.iter_mut().for_each(|v| *v = 0.0);
                for t in &phi_terms {
                    phi_z[t.e3] += t.c * xp[t.e1 as usize] * yp[t.e2 as usize];
                }
                if area {
                    gs_z.iter_mut().for_each(|v| *v = 0.0);
                    for t in &gs_terms {
                        gs_z[t.e3] += t.c * xp[t.e1 as usize] * yp[t.e2 as usize];
                    }
                }
                let alpha = xi1 * x + xi2 * y;
                let wxy = wx * wy;
                let mut line = Complex64::new(0.0, 0.0);
                let mut line_gross = 0.0f64;
                for (&z, &wz) in grids[2].0.iter().zip(&grids[2].1) {
                    let s = (r2xy + z * z) * inv_r2;
                    if s >= 1.0 {
                        continue;
                    }
                    let mut amp = bump.profile(s) * wz;
                    if area {
                        amp *= (1.0 + horner(&gs_z, z)).sqrt();
                    }
                    let theta = alpha + xi3 * z + xi4 * horner(&phi_z, z);
                    let (sin, cos) = theta.sin_cos();
                    line += Complex64::new(amp * cos, amp * sin);
                    line_gross += amp;
                }
                slab += wxy * line;
                slab_gross += wxy.abs() * line_gross;
            }
            (slab, slab_gross)
        })
        .collect();

    let mut total = Complex64::new(0.0, 0.0);
    let mut gross = 0.0;
    for (v, g) in slabs {
        total += v;
        gross += g;
    }
    (total, gross)
}

/// Panel counts from the per-axis oscillation estimate.
pub fn panel_counts(sp: &SurfacePatch, xi: &[f64; 4], nodes_per_wavelength: f64) -> [usize; 3] {
    let r = sp.bump_radius;
    let b = sp.gradient_bounds();
    let mut p = [16usize; 3];
    for i in 0..3 {
        let osc = (xi[i].abs() * r + xi[3].abs() * b[i] * r) / std::f64::consts::TAU;
        p[i] = ((nodes_per_wavelength * osc).ceil() as usize).max(16);
    }
    p
}

fn projected_evals(panels: [usize; 3]) -> u64 {
    512 * panels[0] as u64 * panels[1] as u64 * panels[2] as u64
}

fn half_counts(panels: [usize; 3]) -> [usize; 3] {
    [panels[0].div_ceil(2), panels[1].div_ceil(2), panels[2].div_ceil(2)]
}

/// Computes J(xi) with the convergence guard described in the module
/// documentation.
pub fn fourier_surface_measure(
    sp: &SurfacePatch,
    xi: &FrequencyPoint,
    cfg: &QuadratureConfig,
) -> Result<FourierSample, OscError> {
    if cfg.nodes_per_wavelength < 4.0 {
        return Err(OscError::InvalidParameter(format!(
            "nodes_per_wavelength must be >= 4, got {}",
            cfg.nodes_per_wavelength
        )));
    }
    let mut panels = panel_counts(sp, &xi.xi, cfg.nodes_per_wavelength);
    let mut used: u64 = 0;
    loop {
        let coarse_panels = half_counts(panels);
        let cost = projected_evals(panels) + projected_evals(coarse_panels);
        if used + cost > cfg.max_evaluations {
            return Err(OscError::BudgetExceeded {
                projected: used + cost,
                budget: cfg.max_evaluations,
            });
        }
        let (fine, gross) = tensor_integral(sp, &xi.xi, panels);
        let (coarse, _) = tensor_integral(sp, &xi.xi, coarse_panels);
        used += cost;

        let noise = NOISE_FLOOR_REL * gross;
        let err = (fine - coarse).norm();
        if fine.norm() < 10.0 * noise && coarse.norm() < 10.0 * noise {
            return Ok(FourierSample {
                value: fine,
                check_value: coarse,
                panels,
                converged: true,
                underflow: true,
                evaluations: used,
                gross,
            });
        }
        if err <= CONVERGENCE_REL_TOL * fine.norm().max(noise) {
            return Ok(FourierSample {
                value: fine,
                check_value: coarse,
                panels,
                converged: true,
                underflow: false,
                evaluations: used,
                gross,
            });
        }
        let next = [panels[0] * 2, panels[1] * 2, panels[2] * 2];
        if used + projected_evals(next) + projected_evals(panels) > cfg.max_evaluations {
            log::warn!(
                "convergence guard failed at |xi|={:.3e}: fine {:?} vs coarse {:?}",
                (xi.xi.iter().map(|v| v * v).sum::<f64>()).sqrt(),
                (fine.re, fine.im),
                (coarse.re, coarse.im)
            );
            return Err(OscError::ConvergenceFailure {
                coarse: (coarse.re, coarse.im),
                fine: (fine.re, fine.im),
            });
        }
        panels = next;
    }
}

/// Non-oscillatory reference: the mass of psi W by nested adaptive
/// Gauss-Kronrod quadrature, independent of the tensor panel engine. Each
/// level integrates only over the chord of the support ball, so the
/// adaptive splitting concentrates at the two flat endpoints instead of
/// hunting for the boundary sphere in the interior.
pub fn weighted_mass(sp: &SurfacePatch) -> f64 {
    let r = sp.bump_radius;
    let grad = sp.phi.gradient();
    let f = move |x: f64, y: f64, z: f64| {
        let pt = [x, y, z];
        let s = (x * x + y * y + z * z) / (r * r);
        if s >= 1.0 {
            return 0.0;
        }
        let mut v = sp.bump_kind.profile(s);
        if sp.include_area_factor {
            let g2: f64 = grad
                .iter()
                .map(|g| {
                    let t = g.eval_unchecked(&pt);
                    t * t
                })
                .sum();
            v *= (1.0 + g2).sqrt();
        }
        v
    };
    crate::quad::adaptive_gk(
        |x| {
            let ry = (r * r - x * x).max(0.0).sqrt();
            if ry == 0.0 {
                return 0.0;
            }
            crate::quad::adaptive_gk(
                |y| {
                    let rz = (r * r - x * x - y * y).max(0.0).sqrt();
                    if rz == 0.0 {
                        return 0.0;
                    }
                    // the chord integrand is smooth with flat endpoints, so
                    // a generously resolved fixed panel rule is exact to
                    // rounding here
                    crate::quad::gl8_integrate(|z| f(x, y, z), -rz, rz, 32)
                },
                -ry,
                ry,
                1e-10,
                32,
            )
        },
        -r,
        r,
        1e-9,
        32,
    )
}

/// Configuration of a decay-exponent run.
#[derive(Debug, Clone)]
pub struct DecayConfig {
    pub mag_min: f64,
    pub mag_max: f64,
    pub n_mags: usize,
    pub n_dirs: usize,
    pub seed: u64,
    pub quad: QuadratureConfig,
}

impl Default for DecayConfig {
    fn default() -> Self {
        DecayConfig {
            mag_min: 8.0,
            mag_max: 512.0,
            n_mags: 8,
            n_dirs: 9,
            seed: 0,
            quad: QuadratureConfig::default(),
        }
    }
}

/// One row of the decay sweep.
#[derive(Debug, Clone)]
pub struct DecaySample {
    pub dir_index: usize,
    pub xi: [f64; 4],
    pub abs_xi: f64,
    /// None when the quadrature failed (budget or convergence).
    pub value: Option<Complex64>,
    pub abs_j: f64,
    pub panels_per_axis: usize,
    pub converged: bool,
    pub underflow: bool,
    pub error: Option<String>,
}

/// Per-direction slope of log|J| against log|xi|.
#[derive(Debug, Clone)]
pub struct DirectionFit {
    pub dir_index: usize,
    pub slope: Option<f64>,
    pub stderr: f64,
    pub points_used: usize,
    pub points_dropped: usize,
}

/// Full decay sweep over a geometric magnitude grid and a direction set.
#[derive(Debug, Clone)]
pub struct DecayFit {
    pub directions: Vec<[f64; 4]>,
    pub magnitudes: Vec<f64>,
    pub samples: Vec<DecaySample>,
    pub per_direction: Vec<DirectionFit>,
    /// Positive decay exponent of the slowest-decaying direction
    /// (|J| ~ |xi|^{-fitted_exponent} there).
    pub fitted_exponent: f64,
    pub fit_stderr: f64,
    pub worst_direction: usize,
    pub budget_exhausted: bool,
}

/// Unit directions: the surface normal at the origin first, then seeded
/// pseudo-random directions in the hemisphere xi4 > 0.
pub fn decay_directions(n_dirs: usize, seed: u64) -> Vec<[f64; 4]> {
    let mut dirs: Vec<[f64; 4]> = vec![[0.0, 0.0, 0.0, 1.0]];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gauss = || {
        // Box-Muller from two uniforms
        let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        (-2.0 * u1.ln()).sqrt() * u2.cos()
    };
    while dirs.len() < n_dirs {
        let v = [gauss(), gauss(), gauss(), gauss()];
        let norm = v.iter().map(|t| t * t).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        let mut u = [v[0] / norm, v[1] / norm, v[2] / norm, v[3] / norm];
        if u[3] < 0.0 {
            u = [-u[0], -u[1], -u[2], -u[3]];
        }
        if u[3] < 0.05 {
            continue; // nearly tangential frequencies decay too fast to fit
        }
        dirs.push(u);
    }
    dirs
}

/// Evaluates |J| on the (direction, magnitude) grid and fits per-direction
/// slopes; the reported exponent is the slowest decay over directions.
pub fn decay_fit(sp: &SurfacePatch, cfg: &DecayConfig) -> Result<DecayFit, OscError> {
    if cfg.mag_max < 32.0 * cfg.mag_min {
        return Err(OscError::InvalidParameter(
            "magnitude grid must span at least a factor 32".into(),
        ));
    }
    if cfg.n_mags < 8 {
        return Err(OscError::InvalidParameter("need at least 8 magnitudes".into()));
    }
    if cfg.n_dirs < 1 {
        return Err(OscError::InvalidParameter("need at least 1 direction".into()));
    }
    let directions = decay_directions(cfg.n_dirs, cfg.seed);
    let ratio = (cfg.mag_max / cfg.mag_min).powf(1.0 / (cfg.n_mags as f64 - 1.0));
    let magnitudes: Vec<f64> =
        (0..cfg.n_mags).map(|j| cfg.mag_min * ratio.powi(j as i32)).collect();

    let mut samples = Vec::with_capacity(directions.len() * magnitudes.len());
    let mut budget_exhausted = false;
    for (di, dir) in directions.iter().enumerate() {
        for &mag in &magnitudes {
            let xi = [dir[0] * mag, dir[1] * mag, dir[2] * mag, dir[3] * mag];
            match fourier_surface_measure(sp, &FrequencyPoint { xi }, &cfg.quad) {
                Ok(fs) => samples.push(DecaySample {
                    dir_index: di,
                    xi,
                    abs_xi: mag,
                    value: Some(fs.value),
                    abs_j: fs.value.norm(),
                    panels_per_axis: fs.panels.iter().cloned().max().unwrap(),
                    converged: fs.converged,
                    underflow: fs.underflow,
                    error: None,
                }),
                Err(e) => {
                    if matches!(e, OscError::BudgetExceeded { .. }) {
                        budget_exhausted = true;
                    }
                    log::warn!("decay sample dropped at |xi|={mag:.1} dir {di}: {e}");
                    samples.push(DecaySample {
                        dir_index: di,
                        xi,
                        abs_xi: mag,
                        value: None,
                        abs_j: f64::NAN,
                        panels_per_axis: 0,
                        converged: false,
                        underflow: false,
                        error: Some(e.to_string()),
                    });
                }
            }
        }
    }

    let per_direction: Vec<DirectionFit> = (0..directions.len())
        .map(|di| {
            let pts: Vec<(f64, f64)> = samples
                .iter()
                .filter(|s| {
                    s.dir_index == di && s.value.is_some() && s.converged && !s.underflow && s.abs_j > 0.0
                })
                .map(|s| (s.abs_xi, s.abs_j))
                .collect();
            let dropped = magnitudes.len() - pts.len();
            if dropped > 0 {
                log::warn!("direction {di}: {dropped} of {} samples dropped from the fit", magnitudes.len());
            }
            let fit: Option<LineFit> = crate::fit::fit_loglog(&pts);
            DirectionFit {
                dir_index: di,
                slope: fit.as_ref().map(|f| f.slope),
                stderr: fit.as_ref().map(|f| f.slope_stderr).unwrap_or(f64::NAN),
                points_used: pts.len(),
                points_dropped: dropped,
            }
        })
        .collect();

    // worst = slowest decay = largest (least negative) slope
    let worst = per_direction
        .iter()
        .filter(|f| f.slope.is_some())
        .max_by(|a, b| a.slope.unwrap().total_cmp(&b.slope.unwrap()))
        .ok_or_else(|| OscError::InvalidParameter("no direction produced a valid fit".into()))?;

    Ok(DecayFit {
        fitted_exponent: -worst.slope.unwrap(),
        fit_stderr: worst.stderr,
        worst_direction: worst.dir_index,
        directions,
        magnitudes,
        samples,
        per_direction,
        budget_exhausted,
    })
}

/// Result of the Gamma-reflection inequality scan.
#[derive(Debug, Clone, Copy)]
pub struct GammaBound {
    pub max_ratio: f64,
    pub argmax: f64,
}

/// Checks |1/Gamma(1+iy)| e^{-pi |y|} <= 1 on a grid of [-y_max, y_max].
/// The reflection formula reduces the left side to
/// sqrt(sinh(pi y)/(pi y)) e^{-pi |y|}, evaluated in log space so large
/// arguments cannot overflow.
pub fn gamma_bound_check(y_max: f64, n: usize) -> GammaBound {
    assert!(y_max > 0.0 && n >= 100);
    let mut best = (f64::NEG_INFINITY, 0.0);
    for j in 0..n {
        let y = -y_max + 2.0 * y_max * j as f64 / (n - 1) as f64;
        let r = gamma_ratio(y);
        if r > best.0 {
            best = (r, y);
        }
    }
    GammaBound { max_ratio: best.0, argmax: best.1 }
}

/// ratio(y) = |1/Gamma(1+iy)| e^{-pi|y|} via |1/Gamma(1+iy)|^2 = sinh(pi y)/(pi y).
pub fn gamma_ratio(y: f64) -> f64 {
    let t = std::f64::consts::PI * y.abs();
    if t == 0.0 {
        return 1.0; // sinh(t)/t -> 1
    }
    // log of sinh(t)/t e^{-2t} = -t + log1p(-e^{-2t}) - log 2 - log t, halved
    let log_ratio_sq = -t + (-(-2.0 * t).exp()).ln_1p() - std::f64::consts::LN_2 - t.ln();
    (0.5 * log_ratio_sq).exp()
}
