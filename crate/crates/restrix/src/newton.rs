//! Newton polyhedron of a Taylor support, its facet description, and the
//! Newton distance. All arithmetic here is exact: supports are integer
//! multi-indices, facet normals are primitive integer vectors, and the
//! distance is a rational number.
//!
//! The polyhedron of a support S is conv(S) + R+^n (the convex hull of the
//! shifted positive orthants), so every valid inequality has a componentwise
//! non-negative normal. For n = 3 the facets are enumerated exhaustively
//! from point triples, point pairs combined with a coordinate direction,
//! and the coordinate directions themselves; a candidate hyperplane is kept
//! exactly when the face it supports is two-dimensional.

use crate::polyalg::Polynomial;
use crate::rat::{rat_int, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum NewtonError {
    #[error("empty Taylor support (zero polynomial or constant only)")]
    EmptySupport,
    #[error("polyhedron construction is implemented for 3 variables, got {0}")]
    UnsupportedDimension(usize),
}

/// Taylor support: exponent vectors of the nonzero terms, origin excluded.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportSet {
    points: Vec<[i64; 3]>,
    /// True when a nonzero constant term was dropped (the graph functions
    /// handled here are assumed to vanish at the origin).
    pub had_constant: bool,
}

impl SupportSet {
    pub fn from_points(points: impl IntoIterator<Item = [i64; 3]>) -> Result<Self, NewtonError> {
        let set: BTreeSet<[i64; 3]> = points
            .into_iter()
            .inspect(|p| assert!(p.iter().all(|&c| c >= 0), "negative exponent"))
            .filter(|p| *p != [0, 0, 0])
            .collect();
        if set.is_empty() {
            return Err(NewtonError::EmptySupport);
        }
        Ok(SupportSet { points: set.into_iter().collect(), had_constant: false })
    }

    pub fn points(&self) -> &[[i64; 3]] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Applies a coordinate permutation to every point.
    pub fn permuted(&self, perm: [usize; 3]) -> SupportSet {
        let pts = self.points.iter().map(|p| [p[perm[0]], p[perm[1]], p[perm[2]]]);
        SupportSet::from_points(pts).expect("permutation preserves non-emptiness")
    }
}

/// Taylor support of a polynomial. A nonzero constant term is dropped with
/// a warning rather than an error.
pub fn support(p: &Polynomial) -> Result<SupportSet, NewtonError> {
    if p.nvars() != 3 {
        return Err(NewtonError::UnsupportedDimension(p.nvars()));
    }
    let mut had_constant = false;
    let mut pts = Vec::with_capacity(p.terms().len());
    for t in p.terms() {
        let k = [t.exponents[0] as i64, t.exponents[1] as i64, t.exponents[2] as i64];
        if k == [0, 0, 0] {
            had_constant = true;
            log::warn!(
                "dropping constant term {}: the graph function is assumed to vanish at 0",
                t.coefficient
            );
            continue;
        }
        pts.push(k);
    }
    let mut s = SupportSet::from_points(pts)?;
    s.had_constant = had_constant;
    Ok(s)
}

/// One facet inequality `<normal, x> >= offset` with a primitive integer
/// normal, all components non-negative.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Facet {
    pub normal: [i64; 3],
    pub offset: i64,
}

impl Facet {
    pub fn normal_rat(&self) -> Vec<Rat> {
        self.normal.iter().map(|&a| rat_int(a)).collect()
    }

    pub fn offset_rat(&self) -> Rat {
        rat_int(self.offset)
    }

    fn eval(&self, p: &[i64; 3]) -> i64 {
        self.normal[0] * p[0] + self.normal[1] * p[1] + self.normal[2] * p[2]
    }
}

/// Newton polyhedron: minimal vertex set and irredundant facet list.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonPolyhedron {
    pub vertices: Vec<[i64; 3]>,
    pub facets: Vec<Facet>,
    pub source: SupportSet,
}

/// Newton distance and the principal face data.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceResult {
    /// First coordinate at which the diagonal meets the polyhedron.
    pub d: Rat,
    /// Dimension of the minimal face containing (d, ..., d).
    pub principal_face_dim: usize,
    pub principal_face_vertices: Vec<[i64; 3]>,
    /// Primitive integer direction of the supporting normal at the
    /// principal face (the facet normal when the face is a facet, otherwise
    /// the sum of the active facet normals).
    pub attaining_normal: [i64; 3],
    /// min over the support of <attaining_normal, k>.
    pub attaining_offset: i64,
}

impl DistanceResult {
    pub fn attaining_normal_rat(&self) -> Vec<Rat> {
        self.attaining_normal.iter().map(|&a| rat_int(a)).collect()
    }
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    a.abs().gcd(&b.abs()).gcd(&c.abs())
}

fn cross(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn sub(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Reduces a candidate direction to a primitive vector with non-negative
/// components, if either orientation has them.
fn primitive_nonneg(v: [i64; 3]) -> Option<[i64; 3]> {
    if v == [0, 0, 0] {
        return None;
    }
    let g = gcd3(v[0], v[1], v[2]);
    let v = [v[0] / g, v[1] / g, v[2] / g];
    if v.iter().all(|&c| c >= 0) {
        Some(v)
    } else if v.iter().all(|&c| c <= 0) {
        Some([-v[0], -v[1], -v[2]])
    } else {
        None
    }
}

/// Exact rank of a set of integer row vectors in Z^3 (fraction-free
/// elimination; entries here are far below overflow range).
fn rank3(rows: &[[i64; 3]]) -> usize {
    let mut m: Vec<[i64; 3]> = rows.to_vec();
    let mut rank = 0;
    for col in 0..3 {
        let Some(pivot_row) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let pivot = m[rank][col];
        for r in rank + 1..m.len() {
            if m[r][col] != 0 {
                let (a, b) = (m[r][col], pivot);
                let g = a.gcd(&b);
                let (fa, fb) = (b / g, a / g);
                for c in 0..3 {
                    m[r][c] = m[r][c] * fa - m[rank][c] * fb;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

const AXES: [[i64; 3]; 3] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];

/// Builds the minimal facet and vertex description of conv(S) + R+^3.
pub fn build_polyhedron(s: &SupportSet) -> NewtonPolyhedron {
    let pts = s.points();
    let mut candidates: BTreeSet<[i64; 3]> = BTreeSet::new();
    candidates.extend(AXES);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = sub(pts[j], pts[i]);
            for ax in AXES {
                if let Some(n) = primitive_nonneg(cross(d, ax)) {
                    candidates.insert(n);
                }
            }
            for k in j + 1..pts.len() {
                if let Some(n) = primitive_nonneg(cross(d, sub(pts[k], pts[i]))) {
                    candidates.insert(n);
                }
            }
        }
    }

    let mut facets = Vec::new();
    for normal in candidates {
        let offset = pts
            .iter()
            .map(|p| normal[0] * p[0] + normal[1] * p[1] + normal[2] * p[2])
            .min()
            .expect("non-empty support");
        let facet = Facet { normal, offset };
        // face = conv(points on the hyperplane) + cone(axes with zero
        // normal component); keep the inequality iff that face is 2-dim
        let base = pts.iter().find(|p| facet.eval(p) == offset).expect("min attained");
        let mut dirs: Vec<[i64; 3]> = pts
            .iter()
            .filter(|p| facet.eval(p) == offset && *p != base)
            .map(|p| sub(*p, *base))
            .collect();
        for (j, ax) in AXES.iter().enumerate() {
            if normal[j] == 0 {
                dirs.push(*ax);
            }
        }
        if rank3(&dirs) == 2 {
            facets.push(facet);
        }
    }
    facets.sort();
    facets.dedup();

    // a support point is a vertex iff its active facet normals span Z^3
    let vertices: Vec<[i64; 3]> = pts
        .iter()
        .filter(|p| {
            let active: Vec<[i64; 3]> = facets
                .iter()
                .filter(|f| f.eval(p) == f.offset)
                .map(|f| f.normal)
                .collect();
            rank3(&active) == 3
        })
        .cloned()
        .collect();

    NewtonPolyhedron { vertices, facets, source: s.clone() }
}

/// Newton distance: the max over facets of offset / <normal, (1,1,1)>, the
/// first diagonal coordinate inside every inequality; plus the principal
/// face at (d, d, d).
pub fn distance(np: &NewtonPolyhedron) -> DistanceResult {
    assert!(!np.facets.is_empty(), "valid polyhedron has facets");
    let ratios: Vec<Rat> = np
        .facets
        .iter()
        .map(|f| Rat::new(BigInt::from(f.offset), BigInt::from(f.normal.iter().sum::<i64>())))
        .collect();
    let d = ratios.iter().max().expect("non-empty").clone();

    let active: Vec<&Facet> = np
        .facets
        .iter()
        .zip(&ratios)
        .filter(|(_, r)| **r == d)
        .map(|(f, _)| f)
        .collect();
    let active_normals: Vec<[i64; 3]> = active.iter().map(|f| f.normal).collect();
    let principal_face_dim = 3 - rank3(&active_normals);

    let principal_face_vertices: Vec<[i64; 3]> = np
        .vertices
        .iter()
        .filter(|v| active.iter().all(|f| f.eval(v) == f.offset))
        .cloned()
        .collect();

    // normal of the principal face: the facet normal itself when the face
    // is a facet, else an interior vector of the active normal cone
    let sum = active.iter().fold([0i64; 3], |acc, f| {
        [acc[0] + f.normal[0], acc[1] + f.normal[1], acc[2] + f.normal[2]]
    });
    let attaining_normal =
        primitive_nonneg(sum).expect("active normals sum to a nonzero non-negative vector");
    let attaining_offset = np
        .source
        .points()
        .iter()
        .map(|p| attaining_normal[0] * p[0] + attaining_normal[1] * p[1] + attaining_normal[2] * p[2])
        .min()
        .expect("non-empty support");

    if principal_face_dim == 0 {
        log::warn!(
            "principal face is a vertex (dimension 0); the diagonal meets the polyhedron at a corner"
        );
    }

    DistanceResult { d, principal_face_dim, principal_face_vertices, attaining_normal, attaining_offset }
}

/// Convenience: distance straight from a support set.
pub fn distance_of_support(s: &SupportSet) -> DistanceResult {
    distance(&build_polyhedron(s))
}

/// Solves a square rational linear system; returns None when singular.
fn solve_rational(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = &a[r][col] / &p;
                for c in col..n {
                    let v = &a[col][c] * &factor;
                    a[r][c] = &a[r][c] - &v;
                }
                let v = &b[col] * &factor;
                b[r] = &b[r] - &v;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Brute-force distance oracle, independent of the facet enumeration: the
/// linear program
///
/// ```text
/// minimize t  subject to  sum_j lambda_j k_j[i] <= t (i = 1..3),
///                         sum_j lambda_j = 1,  lambda >= 0
/// ```
///
/// solved by exhaustive enumeration of basic feasible solutions: every
/// subset J of support points with |J| <= 3 paired with an equally sized
/// set I of tight coordinates gives a square rational system; the optimum
/// is the smallest feasible t.
pub fn distance_oracle(s: &SupportSet) -> Rat {
    let pts = s.points();
    let m = pts.len();
    let mut best: Option<Rat> = None;

    let mut subsets: Vec<Vec<usize>> = Vec::new();
    for a in 0..m {
        subsets.push(vec![a]);
        for b in a + 1..m {
            subsets.push(vec![a, b]);
            for c in b + 1..m {
                subsets.push(vec![a, b, c]);
            }
        }
    }
    let coord_subsets: [&[usize]; 7] = [&[0], &[1], &[2], &[0, 1], &[0, 2], &[1, 2], &[0, 1, 2]];

    for j_set in &subsets {
        let sz = j_set.len();
        for i_set in coord_subsets.iter().filter(|i| i.len() == sz) {
            // unknowns: lambda_0..lambda_{sz-1}, t
            let mut a = vec![vec![rat_int(0); sz + 1]; sz + 1];
            let mut b = vec![rat_int(0); sz + 1];
            for col in 0..sz {
                a[0][col] = rat_int(1);
            }
            b[0] = rat_int(1);
            for (row, &i) in i_set.iter().enumerate() {
                for (col, &j) in j_set.iter().enumerate() {
                    a[row + 1][col] = rat_int(pts[j][i]);
                }
                a[row + 1][sz] = rat_int(-1);
            }
            let Some(sol) = solve_rational(a, b) else {
                continue;
            };
            let (lambda, t) = sol.split_at(sz);
            let t = &t[0];
            if lambda.iter().any(|l| l.is_negative()) {
                continue;
            }
            let feasible = (0..3).all(|i| {
                let reach: Rat = j_set
                    .iter()
                    .zip(lambda)
                    .map(|(&j, l)| l * rat_int(pts[j][i]))
                    .sum();
                reach <= *t
            });
            if !feasible {
                continue;
            }
            if best.as_ref().map_or(true, |b| t < b) {
                best = Some(t.clone());
            }
        }
    }
    best.expect("the LP is feasible for any non-empty support")
}
