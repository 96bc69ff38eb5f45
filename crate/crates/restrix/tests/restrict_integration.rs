//! Integration checks of the Knapp harness beyond the acceptance bracket:
//! the third example surface (an edge-type principal face) and the
//! monotonicity of the fitted slope in p.

use restrix::newton::{build_polyhedron, distance, support};
use restrix::oscint::SurfacePatch;
use restrix::parse_poly;
use restrix::rat::{rat, Rat};
use restrix::restrict::{default_scales, knapp_family, knapp_scan, Verdict};

#[test]
fn hyperbolic_surface_slope_agreement() {
    // x1*x2 + x3^2: the diagonal pierces an edge of the polyhedron and the
    // summed principal normal gives weights (1/2, 1/2, 1/2); the quotient
    // scaling still matches the exact exponent at p* and its neighbors
    let phi = parse_poly("x1*x2 + x3^2").unwrap();
    let dr = distance(&build_polyhedron(&support(&phi).unwrap()));
    assert_eq!(dr.d, rat(2, 3));
    let fam = knapp_family(&phi, &dr, &default_scales(), 0.125).unwrap();
    let sp = SurfacePatch::standard(phi, 0.5).unwrap();
    let p_star = restrix::restrict::critical_p_of_distance(&dr.d);
    assert_eq!(p_star, rat(10, 7));
    let tenth = rat(1, 10);
    let cases = [
        (&p_star - &tenth, Verdict::Bounded),
        (p_star.clone(), Verdict::Critical),
        (&p_star + &tenth, Verdict::Divergent),
    ];
    for (p, want) in cases {
        let rep = knapp_scan(&sp, &fam, &p).unwrap();
        assert!(
            (rep.fitted_slope - rep.predicted_slope).abs() <= 0.1,
            "p={p}: fitted {} vs predicted {}",
            rep.fitted_slope,
            rep.predicted_slope
        );
        assert_eq!(rep.verdict, want, "p={p}");
    }
}

#[test]
fn fitted_slope_monotone_in_p() {
    let phi = parse_poly("x1^2 + x2^2 + x3^2").unwrap();
    let dr = distance(&build_polyhedron(&support(&phi).unwrap()));
    let fam = knapp_family(&phi, &dr, &default_scales(), 0.125).unwrap();
    let sp = SurfacePatch::standard(phi, 0.5).unwrap();
    // five p values increasing across the critical exponent
    let ps: Vec<Rat> = vec![rat(6, 5), rat(13, 10), rat(10, 7), rat(3, 2), rat(8, 5)];
    let mut slopes = Vec::new();
    for p in &ps {
        slopes.push(knapp_scan(&sp, &fam, p).unwrap().fitted_slope);
    }
    for w in slopes.windows(2) {
        assert!(
            w[1] <= w[0] + 1e-9,
            "fitted slope must not increase with p: {slopes:?}"
        );
    }
}
