//! Serializable report types for every pipeline stage. Rationals are
//! emitted as exact strings ("2/3"), reals are rounded to 12 significant
//! digits before serialization so repeated runs with the same seed produce
//! byte-identical files, and every report embeds the caller's resolved
//! configuration plus a schema version string.

use crate::adapt::{ExponentReport, HeightResult};
use crate::newton::NewtonPolyhedron;
use crate::oscint::{DecayFit, DecaySample};
use crate::rat::{rat_to_f64, rat_to_string, Rat};
use crate::restrict::{KnappReport, RestrictionSample};
use serde::Serialize;

pub const SCHEMA_VERSION: &str = "restrix/1";

/// Rounds to 12 significant decimal digits.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let magnitude = x.abs().log10().floor() as i32;
    let digits = 11 - magnitude;
    if !(-280..=280).contains(&digits) {
        return x;
    }
    let scale = 10f64.powi(digits);
    (x * scale).round() / scale
}

/// Fixed-width scientific formatting (12 significant digits) for CSV.
pub fn fmt12(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else {
        x.to_string()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FacetJson {
    pub normal: Vec<String>,
    pub offset: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PolyhedronJson {
    pub schema: String,
    pub config: serde_json::Value,
    pub poly: String,
    pub vertices: Vec<[i64; 3]>,
    pub facets: Vec<FacetJson>,
    pub distance: String,
    pub principal_face_dim: usize,
    pub principal_face_vertices: Vec<[i64; 3]>,
    pub attaining_normal: Vec<String>,
    pub warnings: Vec<String>,
}

pub fn polyhedron_json(
    np: &NewtonPolyhedron,
    dr: &crate::newton::DistanceResult,
    poly: String,
    config: serde_json::Value,
    warnings: Vec<String>,
) -> PolyhedronJson {
    PolyhedronJson {
        schema: SCHEMA_VERSION.into(),
        config,
        poly,
        vertices: np.vertices.clone(),
        facets: np
            .facets
            .iter()
            .map(|f| FacetJson {
                normal: f.normal.iter().map(|a| a.to_string()).collect(),
                offset: f.offset.to_string(),
            })
            .collect(),
        distance: rat_to_string(&dr.d),
        principal_face_dim: dr.principal_face_dim,
        principal_face_vertices: dr.principal_face_vertices.clone(),
        attaining_normal: dr.attaining_normal.iter().map(|a| a.to_string()).collect(),
        warnings,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExponentsJson {
    pub schema: String,
    pub config: serde_json::Value,
    pub poly: String,
    pub d_original: String,
    pub h: String,
    pub certified: bool,
    pub rotation: Vec<Vec<f64>>,
    pub beta: String,
    pub p_star: String,
    pub q_star: String,
    pub q_lower: String,
    pub m: u32,
    pub warnings: Vec<String>,
}

pub fn exponents_json(
    height: Option<&HeightResult>,
    exps: &ExponentReport,
    poly: String,
    config: serde_json::Value,
    warnings: Vec<String>,
) -> ExponentsJson {
    ExponentsJson {
        schema: SCHEMA_VERSION.into(),
        config,
        poly,
        d_original: height
            .map(|h| rat_to_string(&h.d_original))
            .unwrap_or_else(|| rat_to_string(&exps.h)),
        h: rat_to_string(&exps.h),
        certified: height.map(|h| h.certified).unwrap_or(false),
        rotation: height
            .map(|h| {
                h.maximizer
                    .rows()
                    .into_iter()
                    .map(|row| row.into_iter().map(round12).collect())
                    .collect()
            })
            .unwrap_or_default(),
        beta: rat_to_string(&exps.beta),
        p_star: rat_to_string(&exps.p_star),
        q_star: rat_to_string(&exps.q_star),
        q_lower: rat_to_string(&exps.q_lower),
        m: exps.m,
        warnings,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DirectionSlopeJson {
    pub dir_index: usize,
    pub direction: [f64; 4],
    pub slope: Option<f64>,
    pub stderr: Option<f64>,
    pub points_used: usize,
    pub points_dropped: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayJson {
    pub schema: String,
    pub config: serde_json::Value,
    pub poly: String,
    pub fitted_exponent: f64,
    pub fit_stderr: f64,
    pub worst_direction: usize,
    pub reference_exponent: Option<f64>,
    pub reference_exponent_exact: Option<String>,
    /// True when every per-direction slope obeys the decay bound
    /// slope <= -1/h + 0.15 (only set when a reference height is known).
    pub conforms: Option<bool>,
    pub budget_exhausted: bool,
    pub per_direction: Vec<DirectionSlopeJson>,
    pub warnings: Vec<String>,
}

/// Margin allowed between a fitted slope and the theoretical decay bound.
pub const DECAY_SLOPE_MARGIN: f64 = 0.15;

/// True when every fitted direction slope is at most -1/h + margin.
pub fn decay_conforms(fit: &DecayFit, h: &Rat) -> bool {
    let bound = -1.0 / rat_to_f64(h) + DECAY_SLOPE_MARGIN;
    fit.per_direction
        .iter()
        .filter_map(|d| d.slope)
        .all(|s| s <= bound)
}

pub fn decay_json(
    fit: &DecayFit,
    h: Option<&Rat>,
    poly: String,
    config: serde_json::Value,
    warnings: Vec<String>,
) -> DecayJson {
    DecayJson {
        schema: SCHEMA_VERSION.into(),
        config,
        poly,
        fitted_exponent: round12(fit.fitted_exponent),
        fit_stderr: round12(fit.fit_stderr),
        worst_direction: fit.worst_direction,
        reference_exponent: h.map(|h| round12(1.0 / rat_to_f64(h))),
        reference_exponent_exact: h.map(|h| rat_to_string(&(Rat::from_integer(1.into()) / h))),
        conforms: h.map(|h| decay_conforms(fit, h)),
        budget_exhausted: fit.budget_exhausted,
        per_direction: fit
            .per_direction
            .iter()
            .map(|d| DirectionSlopeJson {
                dir_index: d.dir_index,
                direction: {
                    let dir = fit.directions[d.dir_index];
                    [round12(dir[0]), round12(dir[1]), round12(dir[2]), round12(dir[3])]
                },
                slope: d.slope.map(round12),
                stderr: d.slope.map(|_| round12(d.stderr)),
                points_used: d.points_used,
                points_dropped: d.points_dropped,
            })
            .collect(),
        warnings,
    }
}

/// CSV rows of the decay sweep, comment lines first.
pub fn decay_csv(samples: &[DecaySample], config: &serde_json::Value) -> String {
    let mut out = String::new();
    out.push_str(&format!("# schema: {SCHEMA_VERSION}\n"));
    out.push_str(&format!("# config: {config}\n"));
    out.push_str("dir_index,xi1,xi2,xi3,xi4,abs_xi,re_J,im_J,abs_J,panels_per_axis,converged\n");
    for s in samples {
        let (re, im, abs) = match s.value {
            Some(v) => (fmt12(v.re), fmt12(v.im), fmt12(v.norm())),
            None => ("nan".into(), "nan".into(), "nan".into()),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            s.dir_index,
            fmt12(s.xi[0]),
            fmt12(s.xi[1]),
            fmt12(s.xi[2]),
            fmt12(s.xi[3]),
            fmt12(s.abs_xi),
            re,
            im,
            abs,
            s.panels_per_axis,
            u8::from(s.converged),
        ));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct KnappJson {
    pub schema: String,
    pub config: serde_json::Value,
    pub poly: String,
    pub p: String,
    pub fitted_slope: f64,
    pub predicted_slope: f64,
    pub verdict: String,
    pub plancherel_rel_err: f64,
    pub samples: usize,
    pub weights: Vec<String>,
    pub c_phi: f64,
    pub degenerate_fixed: bool,
    pub warnings: Vec<String>,
}

pub fn knapp_json(
    report: &KnappReport,
    fam: &crate::restrict::KnappFamily,
    poly: String,
    config: serde_json::Value,
    warnings: Vec<String>,
) -> KnappJson {
    KnappJson {
        schema: SCHEMA_VERSION.into(),
        config,
        poly,
        p: rat_to_string(&report.p),
        fitted_slope: round12(report.fitted_slope),
        predicted_slope: round12(report.predicted_slope),
        verdict: report.verdict.as_str().into(),
        plancherel_rel_err: round12(report.plancherel_rel_err),
        samples: report.samples.len(),
        weights: fam.weights.iter().map(rat_to_string).collect(),
        c_phi: round12(fam.c_phi),
        degenerate_fixed: fam.degenerate_fixed,
        warnings,
    }
}

/// CSV rows of a Knapp scan.
pub fn knapp_csv(samples: &[RestrictionSample], config: &serde_json::Value) -> String {
    let mut out = String::new();
    out.push_str(&format!("# schema: {SCHEMA_VERSION}\n"));
    out.push_str(&format!("# config: {config}\n"));
    out.push_str("delta,lhs,rhs,ratio,predicted_exponent\n");
    for s in samples {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt12(s.delta),
            fmt12(s.lhs),
            fmt12(s.rhs),
            fmt12(s.ratio),
            fmt12(s.predicted_exponent),
        ));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyJson {
    pub schema: String,
    pub config: serde_json::Value,
    pub poly: String,
    pub exponents: ExponentsJson,
    pub decay: DecayJson,
    /// Scans at p* - 1/10, p*, p* + 1/10.
    pub knapp: Vec<KnappJson>,
    pub expected_verdicts: Vec<String>,
    pub pass: bool,
    pub warnings: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round12(0.0), 0.0);
        assert_eq!(round12(1.0 / 3.0), 0.333333333333);
        assert_eq!(round12(123456.789123456789), 123456.789123);
        assert_eq!(round12(-1.23456789012345e-7), -1.23456789012e-7);
        assert!(round12(f64::NAN).is_nan());
    }

    #[test]
    fn csv_formatting() {
        assert_eq!(fmt12(0.5), "5.00000000000e-1");
        assert_eq!(fmt12(f64::NAN), "NaN");
    }
}
