//! Shared helpers for the integration suites: an independent 1D oscillatory
//! oracle and the wall-clock budget normalization.
//!
//! The stated runtime limits assume a 4-core desktop; the suite converts
//! them into a wall budget for however many cores this host actually has.

use restrix::quad::gl8_integrate;

/// Smooth bump of the standard profile with the given radius.
pub fn bump(t: f64, radius: f64) -> f64 {
    let s = t * t / (radius * radius);
    if s >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - s)).exp()
    }
}

/// |integral of exp(i lambda t^m) g(t) dt| computed by a dedicated 1D panel
/// rule, independent of the 3D tensor engine.
pub fn oscillatory_1d(lambda: f64, m: i32, radius: f64) -> f64 {
    let panels = ((6.0 * lambda.abs() * radius.powi(m) / std::f64::consts::TAU).ceil() as usize)
        .max(48);
    let re = gl8_integrate(|t| (lambda * t.powi(m)).cos() * bump(t, radius), -radius, radius, panels);
    let im = gl8_integrate(|t| (lambda * t.powi(m)).sin() * bump(t, radius), -radius, radius, panels);
    re.hypot(im)
}

/// Fresnel-product oracle for the paraboloid normal direction: the surface
/// integral factorizes (up to the radial/tensor bump difference, which
/// vanishes in the leading stationary-phase order) into three identical 1D
/// integrals.
pub fn fresnel_product_oracle(lambda: f64, radius: f64) -> f64 {
    oscillatory_1d(lambda, 2, radius).powi(3)
}

/// Wall budget on this host for a limit stated for a 4-core desktop.
pub fn wall_budget(stated_seconds: f64) -> f64 {
    let cores = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1) as f64;
    stated_seconds * 4.0 / cores.min(4.0)
}

pub struct Criterion {
    pub name: &'static str,
    start: std::time::Instant,
    pub stated_limit: f64,
}

impl Criterion {
    pub fn begin(name: &'static str, stated_limit: f64) -> Self {
        Criterion { name, start: std::time::Instant::now(), stated_limit }
    }

    /// Prints the one-line verdict and enforces the (normalized) runtime.
    pub fn finish(self, pass: bool, detail: &str) {
        let elapsed = self.start.elapsed().as_secs_f64();
        let budget = wall_budget(self.stated_limit);
        let in_time = elapsed <= budget;
        let status = if pass && in_time { "PASS" } else { "FAIL" };
        println!(
            "{}: {status} ({detail}; {elapsed:.1}s of {budget:.0}s wall budget)",
            self.name
        );
        assert!(pass, "{} failed: {detail}", self.name);
        assert!(
            in_time,
            "{} exceeded its runtime budget: {elapsed:.1}s > {budget:.0}s",
            self.name
        );
    }
}
