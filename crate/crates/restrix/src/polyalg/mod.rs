//! Sparse multivariate polynomials over f64 coefficients with integer
//! exponent vectors, plus the linear coordinate changes applied to them.
//!
//! Coefficients live in double precision; everything that feeds exact
//! rational arithmetic downstream (the Newton polyhedron) only looks at the
//! exponent support, so float error never touches the distance or height.

mod parse;

pub use parse::{parse, ParseError};

use nalgebra::DMatrix;
use thiserror::Error;

/// Relative coefficient threshold below which terms created by expansion are
/// discarded as numerical dust.
pub const DEFAULT_PRUNE_REL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum PolyError {
    #[error("point has dimension {got}, polynomial has {want} variables")]
    DimensionMismatch { want: usize, got: usize },
    #[error("matrix is singular (|det| = {det:e})")]
    SingularMatrix { det: f64 },
    #[error("matrix is {rows}x{cols}, expected {n}x{n}")]
    BadMatrixShape { n: usize, rows: usize, cols: usize },
}

/// One term `c * x^k` of a sparse polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub exponents: Vec<u32>,
    pub coefficient: f64,
}

impl Monomial {
    pub fn total_degree(&self) -> u32 {
        self.exponents.iter().sum()
    }
}

/// Graded lexicographic comparison of exponent vectors (total degree first).
fn grlex(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

/// Sparse polynomial in `nvars` variables, terms kept in graded
/// lexicographic order with distinct exponent vectors and nonzero
/// coefficients, so equality is structural.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars > 0);
        Polynomial { nvars, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: f64) -> Self {
        Self::from_terms(nvars, vec![Monomial { exponents: vec![0; nvars], coefficient: c }])
    }

    /// The variable `x_{index+1}` as a polynomial.
    pub fn variable(nvars: usize, index: usize) -> Self {
        assert!(index < nvars);
        let mut e = vec![0u32; nvars];
        e[index] = 1;
        Self::from_terms(nvars, vec![Monomial { exponents: e, coefficient: 1.0 }])
    }

    /// Canonicalizes an arbitrary term list: combines like terms, drops
    /// zeros, sorts graded-lex.
    pub fn from_terms(nvars: usize, terms: Vec<Monomial>) -> Self {
        assert!(nvars > 0);
        let mut terms: Vec<Monomial> = terms
            .into_iter()
            .inspect(|m| assert_eq!(m.exponents.len(), nvars))
            .collect();
        terms.sort_by(|a, b| grlex(&a.exponents, &b.exponents));
        let mut out: Vec<Monomial> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.exponents == t.exponents => last.coefficient += t.coefficient,
                _ => out.push(t),
            }
        }
        out.retain(|t| t.coefficient != 0.0);
        Polynomial { nvars, terms: out }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.total_degree()).max().unwrap_or(0)
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.abs()).fold(0.0, f64::max)
    }

    /// Drops terms with |c| < rel * max|c|.
    pub fn prune(&self, rel: f64) -> Polynomial {
        let cut = rel * self.max_abs_coefficient();
        let kept: Vec<Monomial> = self.terms.iter().filter(|t| t.coefficient.abs() >= cut).cloned().collect();
        if kept.len() != self.terms.len() {
            log::debug!(
                "pruned {} of {} terms below relative threshold {rel:e}",
                self.terms.len() - kept.len(),
                self.terms.len()
            );
        }
        Polynomial { nvars: self.nvars, terms: kept }
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64, PolyError> {
        if x.len() != self.nvars {
            return Err(PolyError::DimensionMismatch { want: self.nvars, got: x.len() });
        }
        Ok(self.eval_unchecked(x))
    }

    /// Term-by-term sparse evaluation; callers on hot paths that already
    /// validated the dimension use this directly.
    pub fn eval_unchecked(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for t in &self.terms {
            let mut v = t.coefficient;
            for (xi, &e) in x.iter().zip(&t.exponents) {
                if e > 0 {
                    v *= xi.powi(e as i32);
                }
            }
            acc += v;
        }
        acc
    }

    /// Component i is the partial derivative with respect to `x_{i+1}`.
    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.nvars).map(|i| self.partial(i)).collect()
    }

    pub fn partial(&self, var: usize) -> Polynomial {
        assert!(var < self.nvars);
        let terms = self
            .terms
            .iter()
            .filter(|t| t.exponents[var] > 0)
            .map(|t| {
                let mut e = t.exponents.clone();
                let k = e[var];
                e[var] -= 1;
                Monomial { exponents: e, coefficient: t.coefficient * k as f64 }
            })
            .collect();
        Polynomial::from_terms(self.nvars, terms)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Polynomial::from_terms(self.nvars, terms)
    }

    pub fn scale(&self, c: f64) -> Polynomial {
        Polynomial::from_terms(
            self.nvars,
            self.terms
                .iter()
                .map(|t| Monomial { exponents: t.exponents.clone(), coefficient: c * t.coefficient })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars);
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let exponents: Vec<u32> =
                    a.exponents.iter().zip(&b.exponents).map(|(x, y)| x + y).collect();
                terms.push(Monomial { exponents, coefficient: a.coefficient * b.coefficient });
            }
        }
        Polynomial::from_terms(self.nvars, terms)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::constant(self.nvars, 1.0);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `p(A x)` expanded to canonical form, dust pruned at `rel` relative to
    /// the largest coefficient of the result.
    pub fn compose_linear_pruned(&self, a: &LinearChange, rel: f64) -> Result<Polynomial, PolyError> {
        if a.n() != self.nvars {
            return Err(PolyError::BadMatrixShape { n: self.nvars, rows: a.n(), cols: a.n() });
        }
        a.check_invertible()?;
        // substitution images x_i -> sum_j A[i][j] x_j and their powers
        let max_exp: Vec<u32> = (0..self.nvars)
            .map(|i| self.terms.iter().map(|t| t.exponents[i]).max().unwrap_or(0))
            .collect();
        let mut powers: Vec<Vec<Polynomial>> = Vec::with_capacity(self.nvars);
        for i in 0..self.nvars {
            let image = Polynomial::from_terms(
                self.nvars,
                (0..self.nvars)
                    .map(|j| {
                        let mut e = vec![0u32; self.nvars];
                        e[j] = 1;
                        Monomial { exponents: e, coefficient: a.entry(i, j) }
                    })
                    .collect(),
            );
            let mut tower = vec![Polynomial::constant(self.nvars, 1.0)];
            for e in 1..=max_exp[i] {
                tower.push(tower[(e - 1) as usize].mul(&image));
            }
            powers.push(tower);
        }
        let mut acc = Polynomial::zero(self.nvars);
        for t in &self.terms {
            let mut prod = Polynomial::constant(self.nvars, t.coefficient);
            for (i, &e) in t.exponents.iter().enumerate() {
                if e > 0 {
                    prod = prod.mul(&powers[i][e as usize]);
                }
            }
            acc = acc.add(&prod);
        }
        Ok(acc.prune(rel))
    }

    pub fn compose_linear(&self, a: &LinearChange) -> Result<Polynomial, PolyError> {
        self.compose_linear_pruned(a, DEFAULT_PRUNE_REL)
    }

    /// Second-derivative matrix as polynomials, row-major.
    pub fn hessian(&self) -> Vec<Vec<Polynomial>> {
        let grad = self.gradient();
        grad.iter().map(|g| g.gradient()).collect()
    }

    /// Coefficients of the univariate restriction t -> p(t * dir), degree
    /// ascending.
    pub fn restrict_to_line(&self, dir: &[f64]) -> Vec<f64> {
        assert_eq!(dir.len(), self.nvars);
        let deg = self.degree() as usize;
        let mut coeffs = vec![0.0; deg + 1];
        for t in &self.terms {
            let mut v = t.coefficient;
            for (d, &e) in dir.iter().zip(&t.exponents) {
                if e > 0 {
                    v *= d.powi(e as i32);
                }
            }
            coeffs[t.total_degree() as usize] += v;
        }
        coeffs
    }
}

/// Outcome of the sampled convexity test.
#[derive(Debug, Clone)]
pub struct ConvexityCheck {
    pub convex: bool,
    /// A sample point where the Hessian fails positive semidefiniteness.
    pub witness: Option<Vec<f64>>,
    pub min_eigenvalue: f64,
    pub samples: usize,
}

/// Samples the Hessian on a cubic grid restricted to the ball of the given
/// radius and checks the smallest eigenvalue against -1e-9. A necessary
/// condition for convexity, not a certificate.
pub fn check_convex(p: &Polynomial, radius: f64, grid: usize) -> ConvexityCheck {
    assert!(radius > 0.0 && grid >= 3);
    let hess = p.hessian();
    let n = p.nvars();
    let mut worst = f64::INFINITY;
    let mut witness = None;
    let mut samples = 0usize;
    let coords: Vec<f64> = (0..grid)
        .map(|i| -radius + 2.0 * radius * i as f64 / (grid - 1) as f64)
        .collect();
    let mut idx = vec![0usize; n];
    loop {
        let x: Vec<f64> = idx.iter().map(|&i| coords[i]).collect();
        let r2: f64 = x.iter().map(|v| v * v).sum();
        if r2 <= radius * radius {
            samples += 1;
            let mut h = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    h[(i, j)] = hess[i][j].eval_unchecked(&x);
                }
            }
            let eig = h.symmetric_eigenvalues();
            let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
            if min < worst {
                worst = min;
                if min < -1e-9 {
                    witness.get_or_insert_with(|| x.clone());
                }
            }
        }
        // odometer over the grid
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < grid {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == n {
                return ConvexityCheck { convex: witness.is_none(), witness, min_eigenvalue: worst, samples };
            }
        }
    }
}

/// Outcome of the sampled finite-line-type test.
#[derive(Debug, Clone)]
pub struct LineTypeCheck {
    pub finite_type: bool,
    /// Largest order N of the first nonvanishing derivative over sampled
    /// directions (the worst direction), when finite.
    pub worst_order: Option<u32>,
    pub worst_direction: Vec<f64>,
}

/// Checks that no sampled line through the origin annihilates p: for each
/// unit direction the univariate restriction must have some nonzero
/// coefficient. Coordinate axes are always included; the rest of the
/// directions come from a Fibonacci sphere, so the test is deterministic.
pub fn check_finite_line_type(p: &Polynomial, directions: usize) -> LineTypeCheck {
    assert!(directions >= 10);
    assert_eq!(p.nvars(), 3, "line-type sampling is implemented for 3 variables");
    let mut dirs: Vec<[f64; 3]> = vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    for i in 0..directions {
        let z = 1.0 - 2.0 * (i as f64 + 0.5) / directions as f64;
        let rho = (1.0 - z * z).sqrt();
        let phi = 2.0 * std::f64::consts::PI * (i as f64 / golden).fract();
        dirs.push([rho * phi.cos(), rho * phi.sin(), z]);
    }
    let scale = p.max_abs_coefficient().max(f64::MIN_POSITIVE);
    let tol = 1e-12 * scale;
    let mut worst: Option<(u32, [f64; 3])> = None;
    for d in dirs {
        let coeffs = p.restrict_to_line(&d);
        match coeffs.iter().position(|c| c.abs() > tol) {
            None => {
                return LineTypeCheck {
                    finite_type: false,
                    worst_order: None,
                    worst_direction: d.to_vec(),
                }
            }
            Some(k) => {
                let k = k as u32;
                if worst.map_or(true, |(w, _)| k > w) {
                    worst = Some((k, d));
                }
            }
        }
    }
    let (order, dir) = worst.unwrap();
    LineTypeCheck { finite_type: true, worst_order: Some(order), worst_direction: dir.to_vec() }
}

/// An invertible linear coordinate change x -> A x.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearChange {
    mat: DMatrix<f64>,
}

impl LinearChange {
    pub fn identity(n: usize) -> Self {
        LinearChange { mat: DMatrix::identity(n, n) }
    }

    /// Row-major entries.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, PolyError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(PolyError::BadMatrixShape { n, rows: n, cols: rows.iter().map(|r| r.len()).max().unwrap_or(0) });
        }
        let mat = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        let lc = LinearChange { mat };
        lc.check_invertible()?;
        Ok(lc)
    }

    /// Swap of two coordinates.
    pub fn swap(n: usize, i: usize, j: usize) -> Self {
        let mut m = DMatrix::identity(n, n);
        m.swap_rows(i, j);
        LinearChange { mat: m }
    }

    /// Plane rotation by `theta` in the (i, j) coordinate plane.
    pub fn plane_rotation(n: usize, i: usize, j: usize, theta: f64) -> Self {
        let mut m = DMatrix::identity(n, n);
        let (s, c) = theta.sin_cos();
        m[(i, i)] = c;
        m[(j, j)] = c;
        m[(i, j)] = -s;
        m[(j, i)] = s;
        LinearChange { mat: m }
    }

    /// Proper rotation of R^3 from Z-Y-Z Euler angles.
    pub fn rotation_zyz(alpha: f64, beta: f64, gamma: f64) -> Self {
        let rz1 = Self::plane_rotation(3, 0, 1, alpha);
        let ry = Self::plane_rotation(3, 2, 0, beta);
        let rz2 = Self::plane_rotation(3, 0, 1, gamma);
        rz1.compose(&ry).compose(&rz2)
    }

    pub fn n(&self) -> usize {
        self.mat.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.mat[(i, j)]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n()).map(|i| (0..self.n()).map(|j| self.mat[(i, j)]).collect()).collect()
    }

    pub fn det(&self) -> f64 {
        self.mat.clone().lu().determinant()
    }

    pub fn check_invertible(&self) -> Result<(), PolyError> {
        let det = self.det();
        if det.abs() <= 1e-12 {
            return Err(PolyError::SingularMatrix { det });
        }
        Ok(())
    }

    /// True when the matrix is orthogonal with determinant +1 within 1e-12.
    pub fn is_rotation(&self) -> bool {
        let n = self.n();
        let gram = self.mat.transpose() * &self.mat;
        let dev = (&gram - DMatrix::<f64>::identity(n, n)).abs().max();
        dev <= 1e-12 && (self.det() - 1.0).abs() <= 1e-12
    }

    /// Matrix product: applying `self.compose(other)` is `x -> self * (other * x)`
    /// in the composition sense of `p(A (B x))`.
    pub fn compose(&self, other: &LinearChange) -> LinearChange {
        LinearChange { mat: &self.mat * &other.mat }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        assert_eq!(x.len(), n);
        (0..n).map(|i| (0..n).map(|j| self.mat[(i, j)] * x[j]).sum()).collect()
    }
}
