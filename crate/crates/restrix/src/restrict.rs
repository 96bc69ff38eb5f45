//! Empirical probe of the restriction inequality through Knapp-type test
//! families.
//!
//! The test function f is the inverse Fourier transform of a tensor product
//! of smooth bumps supported on the anisotropic frequency box
//! {|xi_i| <= delta^{a_i}, |xi_4| <= c delta}, where the weights a come
//! from the principal-face normal of the Newton polyhedron. Because f-hat
//! is known in closed form, the restriction quotient
//!
//!   ratio(delta) = ||f-hat||_{L2(S, d mu)} / ||f||_{L_p(R^4)}
//!
//! needs only a 3D quadrature over the surface cap (numerator) and four 1D
//! norms of the bump transform profile (denominator, by the tensor
//! structure). The quotient scales like delta^e with
//! e = 1/(2d) - (1 + 1/d)/q, so its log-log slope against the exact
//! exponent separates bounded, critical, and divergent regimes.

use crate::newton::{self, DistanceResult};
use crate::oscint::SurfacePatch;
use crate::polyalg::Polynomial;
use crate::quad::{adaptive_gk, gl8_grid, gl8_integrate};
use crate::rat::{rat, rat_int, rat_to_f64, rat_to_string, Rat};
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};
use thiserror::Error;

/// Verdict slopes within this band of zero count as critical.
pub const DEFAULT_VERDICT_BAND: f64 = 0.02;

#[derive(Debug, Error)]
pub enum RestrictError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cap quadrature failed to converge (last values {coarse:e} vs {fine:e})")]
    CapQuadrature { coarse: f64, fine: f64 },
    #[error("only {valid} valid samples after drops, need at least {needed}")]
    TooFewSamples { valid: usize, needed: usize },
}

/// Anisotropic scaling family attached to a principal face.
#[derive(Debug, Clone)]
pub struct KnappFamily {
    /// Box weights: half-width in frequency direction i is delta^{weight_i}.
    /// Normalized so the minimum of <a, k> over the Taylor support is 1.
    pub weights: [Rat; 3],
    pub scales: Vec<f64>,
    /// Half-width of the fourth frequency axis is cap_constant * delta.
    pub cap_constant: f64,
    /// Newton distance of the source polyhedron.
    pub d: Rat,
    /// Largest sampled |phi| / delta over the scaled boxes.
    pub c_phi: f64,
    /// True when a zero component of the principal normal was patched.
    pub degenerate_fixed: bool,
}

/// Builds the Knapp family for the graph function and its distance data.
/// A principal normal with a zero component is patched by giving that
/// coordinate four times the largest weight, then renormalizing against the
/// support, which keeps the box well-defined while only shrinking it.
pub fn knapp_family(
    phi: &Polynomial,
    dr: &DistanceResult,
    scales: &[f64],
    cap_constant: f64,
) -> Result<KnappFamily, RestrictError> {
    if scales.iter().any(|&s| !(s > 0.0 && s <= 1.0)) {
        return Err(RestrictError::InvalidParameter("scales must lie in (0, 1]".into()));
    }
    if !(cap_constant > 0.0) {
        return Err(RestrictError::InvalidParameter("cap constant must be positive".into()));
    }
    let offset = rat_int(dr.attaining_offset);
    if offset <= Rat::zero() {
        return Err(RestrictError::InvalidParameter(
            "principal normal has non-positive support minimum".into(),
        ));
    }
    let mut weights: Vec<Rat> =
        dr.attaining_normal.iter().map(|&a| rat_int(a) / &offset).collect();
    let mut degenerate_fixed = false;
    if weights.iter().any(|w| w.is_zero()) {
        degenerate_fixed = true;
        let max_w = weights.iter().max().cloned().expect("three weights");
        log::warn!(
            "principal-face normal {:?} has a zero component; replacing it with 4x the largest weight",
            dr.attaining_normal
        );
        for w in weights.iter_mut() {
            if w.is_zero() {
                *w = rat_int(4) * &max_w;
            }
        }
        // renormalize so the support minimum of <a, k> is exactly 1
        let support = newton::support(phi)
            .map_err(|e| RestrictError::InvalidParameter(e.to_string()))?;
        let min: Rat = support
            .points()
            .iter()
            .map(|k| {
                weights
                    .iter()
                    .zip(k)
                    .map(|(w, &ki)| w * rat_int(ki))
                    .sum::<Rat>()
            })
            .min()
            .expect("non-empty support");
        for w in weights.iter_mut() {
            *w = &*w / &min;
        }
    }
    let weights: [Rat; 3] = [weights[0].clone(), weights[1].clone(), weights[2].clone()];

    // sampled bound |phi| <= c_phi * delta on each scaled box
    let wf: Vec<f64> = weights.iter().map(rat_to_f64).collect();
    let mut c_phi = 0.0f64;
    let grid = 9;
    for &delta in scales {
        let half: Vec<f64> = wf.iter().map(|a| delta.powf(*a)).collect();
        let mut worst = 0.0f64;
        for i in 0..grid {
            for j in 0..grid {
                for k in 0..grid {
                    let frac = |t: usize| -1.0 + 2.0 * t as f64 / (grid - 1) as f64;
                    let x = [half[0] * frac(i), half[1] * frac(j), half[2] * frac(k)];
                    worst = worst.max(phi.eval_unchecked(&x).abs());
                }
            }
        }
        c_phi = c_phi.max(worst / delta);
    }

    Ok(KnappFamily {
        weights,
        scales: scales.to_vec(),
        cap_constant,
        d: dr.d.clone(),
        c_phi,
        degenerate_fixed,
    })
}

/// One measured restriction quotient.
#[derive(Debug, Clone)]
pub struct RestrictionSample {
    pub delta: f64,
    /// ||f-hat||_{L2(S, d mu)}.
    pub lhs: f64,
    /// ||f||_{L_p(R^4)}.
    pub rhs: f64,
    pub ratio: f64,
    /// Exact scaling exponent 1/(2d) - (1 + 1/d)/q of the ratio.
    pub predicted_exponent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Bounded,
    Critical,
    Divergent,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Bounded => "bounded",
            Verdict::Critical => "critical",
            Verdict::Divergent => "divergent",
        }
    }
}

/// Outcome of a scan over the family scales at a fixed p.
#[derive(Debug, Clone)]
pub struct KnappReport {
    pub p: Rat,
    pub fitted_slope: f64,
    pub predicted_slope: f64,
    pub verdict: Verdict,
    pub samples: Vec<RestrictionSample>,
    /// Relative error of the Plancherel self-check run alongside the scan.
    pub plancherel_rel_err: f64,
}

/// Exact rational scaling exponent of the restriction quotient:
/// 1/(2d) - (1 + 1/d) / q with 1/q = 1 - 1/p.
pub fn predicted_exponent(d: &Rat, p: &Rat) -> Rat {
    let one = Rat::one();
    let inv_q = &one - &one / p;
    let half = rat(1, 2);
    &half / d - (&one + &one / d) * &inv_q
}

/// The p at which the predicted exponent crosses zero: 2(d+1)/(2d+1).
/// Coincides with the critical restriction exponent at d = h.
pub fn critical_p_of_distance(d: &Rat) -> Rat {
    let one = Rat::one();
    let two = rat_int(2);
    &two * (d + &one) / (&two * d + &one)
}

/// Frequency bump profile G on [-1, 1], the same shape as the standard
/// surface bump.
#[inline]
fn profile(t: f64) -> f64 {
    let s = t * t;
    if s >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - s)).exp()
    }
}

/// ghat(s) = (1/pi) * integral_0^1 G(t) cos(s t) dt: the inverse transform
/// of the unit-width profile, so that the inverse transform of G(xi / w) is
/// w * ghat(w x).
fn ghat(s: f64) -> f64 {
    let panels = ((5.0 * s.abs() / std::f64::consts::TAU).ceil() as usize).max(24);
    gl8_integrate(|t| profile(t) * (s * t).cos(), 0.0, 1.0, panels) / std::f64::consts::PI
}

/// ||ghat||_{L_p(R)}^p by adaptive quadrature over expanding windows. The
/// integrand |ghat|^p has a kink at every zero of ghat, which the adaptive
/// rule resolves by local bisection.
fn ghat_norm_pow(p: f64) -> f64 {
    let window = 16.0;
    let mut total = 0.0f64;
    let mut quiet = 0;
    let mut k = 0;
    while quiet < 2 && k < 200 {
        let a = window * k as f64;
        let contribution =
            adaptive_gk(|s| ghat(s).abs().powf(p), a, a + window, 1e-13, 800);
        total += contribution;
        if contribution.abs() < 1e-12 * total.abs() {
            quiet += 1;
        } else {
            quiet = 0;
        }
        k += 1;
    }
    2.0 * total
}

fn ghat_norm_cache() -> &'static Mutex<HashMap<String, f64>> {
    static CACHE: OnceLock<Mutex<HashMap<String, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// ||ghat||_{L_p(R)} with a per-exponent cache.
pub fn ghat_lp_norm(p: &Rat) -> f64 {
    let key = rat_to_string(p);
    if let Some(v) = ghat_norm_cache().lock().unwrap().get(&key) {
        return *v;
    }
    let pf = rat_to_f64(p);
    let v = ghat_norm_pow(pf).powf(1.0 / pf);
    ghat_norm_cache().lock().unwrap().insert(key, v);
    v
}

/// L_p(R) norm of the inverse transform of G(xi / w): w^{1 - 1/p} ||ghat||_p.
pub fn bump_transform_lp_norm(p: &Rat, half_width: f64) -> f64 {
    let pf = rat_to_f64(p);
    half_width.powf(1.0 - 1.0 / pf) * ghat_lp_norm(p)
}

/// Plancherel self-check: the space-side L2 norm of the inverse transform
/// must reproduce the frequency-side L2 norm of the profile divided by
/// sqrt(2 pi). Returns the relative error.
pub fn plancherel_check() -> f64 {
    let x_side = ghat_lp_norm(&rat_int(2));
    let freq_side_sq = 2.0 * gl8_integrate(|t| profile(t) * profile(t), 0.0, 1.0, 64);
    let freq_side = (freq_side_sq / std::f64::consts::TAU).sqrt();
    (x_side - freq_side).abs() / freq_side
}

/// Weight variants of the cap integral; the vanishing variant multiplies
/// psi by |x/r|^2 and exists to test the psi(0) > 0 sharpness hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapWeight {
    Standard,
    VanishAtOrigin,
}

/// ||f-hat||_{L2(S, d mu)}^2 over the cap: a 3D tensor quadrature of
/// prod G(u_i / w_i)^2 * G(phi(u) / w4)^2 * psi(u) * W(u), with a
/// half-resolution agreement guard and panel doubling on failure.
fn cap_l2_squared(
    sp: &SurfacePatch,
    fam: &KnappFamily,
    delta: f64,
    weight: CapWeight,
) -> Result<f64, RestrictError> {
    let wf: Vec<f64> = fam.weights.iter().map(rat_to_f64).collect();
    let half: [f64; 3] = [delta.powf(wf[0]), delta.powf(wf[1]), delta.powf(wf[2])];
    let w4 = fam.cap_constant * delta;

    let eval = |panels: usize| -> f64 {
        let grids: Vec<(Vec<f64>, Vec<f64>)> =
            (0..3).map(|i| gl8_grid(-half[i], half[i], panels)).collect();
        let r2 = sp.bump_radius * sp.bump_radius;
        let grad = sp.phi.gradient();
        let slabs: Vec<f64> = (0..grids[0].0.len())
            .into_par_iter()
            .map(|a| {
                let x = grids[0].0[a];
                let gx = profile(x / half[0]);
                if gx == 0.0 {
                    return 0.0;
                }
                let mut slab = 0.0f64;
                for (b, (&y, &wy)) in grids[1].0.iter().zip(&grids[1].1).enumerate() {
                    let _ = b;
                    let gy = profile(y / half[1]);
                    if gy == 0.0 {
                        continue;
                    }
                    let mut line = 0.0f64;
                    for (&z, &wz) in grids[2].0.iter().zip(&grids[2].1) {
                        let pt = [x, y, z];
                        let s = (x * x + y * y + z * z) / r2;
                        if s >= 1.0 {
                            continue;
                        }
                        let gz = profile(z / half[2]);
                        if gz == 0.0 {
                            continue;
                        }
                        let g4 = profile(sp.phi.eval_unchecked(&pt) / w4);
                        if g4 == 0.0 {
                            continue;
                        }
                        let mut psi = sp.bump_kind.profile(s);
                        if weight == CapWeight::VanishAtOrigin {
                            psi *= s;
                        }
                        let mut amp = (gx * gy * gz * g4).powi(2) * psi;
                        if sp.include_area_factor {
                            let g2: f64 = grad
                                .iter()
                                .map(|g| {
                                    let t = g.eval_unchecked(&pt);
                                    t * t
                                })
                                .sum();
                            amp *= (1.0 + g2).sqrt();
                        }
                        line += wz * amp;
                    }
                    slab += wy * line;
                }
                grids[0].1[a] * slab
            })
            .collect();
        slabs.iter().sum()
    };

    let mut panels = 16usize;
    loop {
        let fine = eval(panels);
        let coarse = eval(panels.div_ceil(2));
        if (fine - coarse).abs() <= 1e-6 * fine.abs().max(1e-300) {
            return Ok(fine);
        }
        panels *= 2;
        if panels > 512 {
            return Err(RestrictError::CapQuadrature { coarse, fine });
        }
    }
}

/// Measures one restriction quotient at scale delta and exponent p.
pub fn restriction_sample(
    sp: &SurfacePatch,
    fam: &KnappFamily,
    delta: f64,
    p: &Rat,
) -> Result<RestrictionSample, RestrictError> {
    restriction_sample_weighted(sp, fam, delta, p, CapWeight::Standard)
}

/// As `restriction_sample` but with a selectable cap weight (test fixture
/// support for the psi(0) > 0 hypothesis).
pub fn restriction_sample_weighted(
    sp: &SurfacePatch,
    fam: &KnappFamily,
    delta: f64,
    p: &Rat,
    weight: CapWeight,
) -> Result<RestrictionSample, RestrictError> {
    if !(p > &Rat::one() && p <= &rat_int(2)) {
        return Err(RestrictError::InvalidParameter(format!(
            "p must lie in (1, 2], got {}",
            rat_to_string(p)
        )));
    }
    if !fam.scales.iter().any(|&s| s == delta) {
        return Err(RestrictError::InvalidParameter(format!(
            "delta {delta} is not one of the family scales"
        )));
    }
    let lhs = cap_l2_squared(sp, fam, delta, weight)?.sqrt();
    let wf: Vec<f64> = fam.weights.iter().map(rat_to_f64).collect();
    let mut rhs = 1.0f64;
    for a in &wf {
        rhs *= bump_transform_lp_norm(p, delta.powf(*a));
    }
    rhs *= bump_transform_lp_norm(p, fam.cap_constant * delta);
    if !(lhs > 0.0 && rhs > 0.0 && lhs.is_finite() && rhs.is_finite()) {
        return Err(RestrictError::InvalidParameter(format!(
            "degenerate sample at delta {delta}: lhs {lhs:e}, rhs {rhs:e}"
        )));
    }
    Ok(RestrictionSample {
        delta,
        lhs,
        rhs,
        ratio: lhs / rhs,
        predicted_exponent: rat_to_f64(&predicted_exponent(&fam.d, p)),
    })
}

/// Scans all family scales at a fixed p, fits the log-log slope of the
/// quotient, and classifies the regime.
pub fn knapp_scan(sp: &SurfacePatch, fam: &KnappFamily, p: &Rat) -> Result<KnappReport, RestrictError> {
    knapp_scan_with_band(sp, fam, p, DEFAULT_VERDICT_BAND)
}

pub fn knapp_scan_with_band(
    sp: &SurfacePatch,
    fam: &KnappFamily,
    p: &Rat,
    verdict_band: f64,
) -> Result<KnappReport, RestrictError> {
    let (lo, hi) = fam
        .scales
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &s| (lo.min(s), hi.max(s)));
    if fam.scales.len() < 6 || hi < 16.0 * lo {
        return Err(RestrictError::InvalidParameter(
            "need at least 6 scales spanning at least 4 octaves".into(),
        ));
    }
    let plancherel_rel_err = plancherel_check();
    if plancherel_rel_err > 1e-6 {
        log::warn!("Plancherel self-check off by {plancherel_rel_err:e}");
    }
    let mut samples = Vec::with_capacity(fam.scales.len());
    for &delta in &fam.scales {
        match restriction_sample(sp, fam, delta, p) {
            Ok(s) => samples.push(s),
            Err(e) => log::warn!("restriction sample dropped at delta {delta}: {e}"),
        }
    }
    if samples.len() < 4 {
        return Err(RestrictError::TooFewSamples { valid: samples.len(), needed: 4 });
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|s| (s.delta, s.ratio)).collect();
    let fit = crate::fit::fit_loglog(&pts)
        .ok_or_else(|| RestrictError::InvalidParameter("degenerate slope fit".into()))?;
    let predicted_slope = samples[0].predicted_exponent;
    let verdict = if fit.slope < -verdict_band {
        Verdict::Divergent
    } else if fit.slope > verdict_band {
        Verdict::Bounded
    } else {
        Verdict::Critical
    };
    Ok(KnappReport {
        p: p.clone(),
        fitted_slope: fit.slope,
        predicted_slope,
        verdict,
        samples,
        plancherel_rel_err,
    })
}

/// Default geometric scale ladder 2^-2 .. 2^-9.
pub fn default_scales() -> Vec<f64> {
    (2..=9).map(|k| 2.0f64.powi(-k)).collect()
}
