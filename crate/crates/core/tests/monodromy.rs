use num_complex::Complex64;
use selfsim::group::from_lex_index;
use selfsim::monodromy::{
    build_lambda, default_geometry, julia_cloud, monodromy_permutations, DetourSide, GeometryOptions, LiftOptions,
    PolynomialMap,
};
use selfsim::par;

fn quadratic(c: f64) -> PolynomialMap {
    PolynomialMap::quadratic(Complex64::new(c, 0.0))
}

#[test]
fn clouds_map_into_their_parents() {
    for c in [0.0, -1.0, -2.0] {
        let f = quadratic(c);
        let g = default_geometry(&f, &GeometryOptions::default()).unwrap();
        let t = build_lambda(&f, &g, 9, &LiftOptions::default()).unwrap();
        for n in 1..=9 {
            let cloud = julia_cloud(&t, n).unwrap();
            let parent = julia_cloud(&t, n - 1).unwrap();
            for (i, z) in cloud.iter().enumerate() {
                let w = from_lex_index(i, 2, n);
                let p = parent[selfsim::group::lex_index(&w[..n - 1], 2)];
                assert!((f.eval(*z) - p).norm() <= 1e-9);
            }
        }
    }
}

#[test]
fn numeric_permutations_are_bijective_and_compatible() {
    for side in [DetourSide::Above, DetourSide::Below] {
        let f = quadratic(-1.0);
        let opts = GeometryOptions {
            detour: Some(side),
            ..GeometryOptions::default()
        };
        let g = default_geometry(&f, &opts).unwrap();
        let t = build_lambda(&f, &g, 7, &LiftOptions::default()).unwrap();
        let m = monodromy_permutations(&f, &g, &t, 7, &LiftOptions::default()).unwrap();
        for gen in 0..m.num_generators() {
            for n in 1..=7 {
                let p = m.permutation(gen, n);
                let mut seen = vec![false; p.len()];
                for &j in p {
                    assert!(!std::mem::replace(&mut seen[j], true));
                }
                if n > 1 {
                    let q = m.permutation(gen, n - 1);
                    assert!(p.iter().enumerate().all(|(i, &j)| q[i / 2] == j / 2));
                }
            }
        }
    }
}

#[test]
fn cloud_is_schedule_independent() {
    let f = quadratic(-2.0);
    let g = default_geometry(&f, &GeometryOptions::default()).unwrap();
    let a = build_lambda(&f, &g, 8, &LiftOptions::default()).unwrap();
    let b = par::sequential(|| build_lambda(&f, &g, 8, &LiftOptions::default()).unwrap());
    assert_eq!(julia_cloud(&a, 8).unwrap(), julia_cloud(&b, 8).unwrap());
}

#[test]
fn cubic_lifting_uses_newton_continuation() {
    // z³ with the single postcritical point 0 supplied explicitly
    let f = PolynomialMap::new(vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
    ])
    .unwrap();
    let gamma = selfsim::monodromy::Polyline::new(
        (0..=64)
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 64.0))
            .collect(),
    );
    let lifted = selfsim::monodromy::lift_path(&f, &gamma, Complex64::new(1.0, 0.0), &LiftOptions::default()).unwrap();
    let end = lifted.end();
    let expected = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    assert!((end - expected).norm() < 1e-3, "{end}");
}
