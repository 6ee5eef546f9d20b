use super::*;
use nalgebra::{dmatrix, dvector};

fn dense_directions_2d(count: usize) -> Vec<DVector<f64>> {
    (0..count)
        .map(|i| {
            let theta = std::f64::consts::PI * 2.0 * i as f64 / count as f64 + 0.01;
            dvector![theta.cos(), theta.sin()]
        })
        .collect()
}

#[test]
fn make_body_ball() {
    let b = ConvexBody::ball(1.0, 2, 1.0).unwrap();
    assert_eq!(b.dim(), 2);
    match b.kind() {
        BodyKind::Ball { radius, .. } => assert_eq!(*radius, 1.0),
        other => panic!("wrong kind {other:?}"),
    }
}

#[test]
fn make_body_variance_box() {
    // Variances (0.5, 2) give half-widths (1, 2).
    let b = ConvexBody::from_variances(&[0.5, 2.0], 1.0).unwrap();
    match b.kind() {
        BodyKind::Box { half_widths } => {
            assert!((half_widths[0] - 1.0).abs() < 1e-15);
            assert!((half_widths[1] - 2.0).abs() < 1e-15);
        }
        other => panic!("wrong kind {other:?}"),
    }
}

#[test]
fn make_body_rejects_indefinite_ellipsoid() {
    let err = ConvexBody::ellipsoid(dmatrix![1.0, 2.0; 2.0, 1.0], 1.0).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("not positive definite"), "{msg}");
}

#[test]
fn make_body_rejects_empty_vertices() {
    let err = ConvexBody::vpolytope(vec![], 1.0).unwrap_err();
    assert!(err.to_string().contains("empty vertex list"));
}

#[test]
fn make_body_rejects_nonpositive_scalars() {
    assert!(ConvexBody::ball(0.0, 2, 1.0).is_err());
    assert!(ConvexBody::ball(1.0, 2, -1.0).is_err());
    assert!(ConvexBody::cuboid(dvector![1.0, -2.0], 1.0).is_err());
}

#[test]
fn polar_dual_ellipsoid_inverts_matrix() {
    let x = ConvexBody::ellipsoid(dmatrix![2.0, 0.0; 0.0, 0.5], 1.0).unwrap();
    let d = x.polar_dual().unwrap();
    match d.kind() {
        BodyKind::Ellipsoid { matrix } => {
            assert!((matrix[(0, 0)] - 0.5).abs() < 1e-12);
            assert!((matrix[(1, 1)] - 2.0).abs() < 1e-12);
            assert!(matrix[(0, 1)].abs() < 1e-12);
        }
        other => panic!("wrong kind {other:?}"),
    }
}

#[test]
fn ball_of_radius_sqrt_hbar_is_fixed_point() {
    for hbar in [0.5f64, 1.0, 2.0] {
        let x = ConvexBody::ball(hbar.sqrt(), 3, hbar).unwrap();
        let d = x.polar_dual().unwrap();
        match d.kind() {
            BodyKind::Ball { radius, dim } => {
                assert_eq!(*dim, 3);
                assert!((radius - hbar.sqrt()).abs() < 1e-15);
            }
            other => panic!("wrong kind {other:?}"),
        }
    }
}

/// The dual of the cross-polytope conv{±e₁, ±e₂} must be the box [−1,1]².
/// Oracle: the cross-polytope gauge is the ℓ1 norm, so the dual support in
/// direction u is exactly ℏ·(|u₁| + |u₂|), independent of either
/// implementation path.
#[test]
fn cross_polytope_dual_is_box() {
    let x = ConvexBody::vpolytope(vec![dvector![1.0, 0.0], dvector![0.0, 1.0]], 1.0).unwrap();
    let d = x.polar_dual().unwrap();
    assert!(matches!(d.kind(), BodyKind::HPolytope { .. }));
    for u in dense_directions_2d(360) {
        let oracle = u[0].abs() + u[1].abs();
        let h = d.support(&u).unwrap();
        assert!((h - oracle).abs() < 1e-9, "dir {u}: {h} vs {oracle}");
    }
}

#[test]
fn polar_dual_rejects_translated_body() {
    let x = ConvexBody::ball(1.0, 2, 1.0)
        .unwrap()
        .with_center(dvector![0.5, 0.0])
        .unwrap();
    assert!(matches!(x.polar_dual(), Err(Error::TranslatedBody)));
}

#[test]
fn polar_dual_about_center_matches_polar_dual() {
    let x = ConvexBody::ellipsoid(dmatrix![1.0, 0.0; 0.0, 4.0], 1.0).unwrap();
    let d1 = x.polar_dual().unwrap();
    let d2 = x.polar_dual_about(&dvector![0.0, 0.0]).unwrap();
    for u in dense_directions_2d(64) {
        let h1 = d1.support(&u).unwrap();
        let h2 = d2.support(&u).unwrap();
        assert!((h1 - h2).abs() < 1e-9);
    }
}

#[test]
fn polar_dual_about_recenters_interval() {
    // [0, 2] is the box [−1, 1] with center 1; dualizing about 1 gives [−1, 1].
    let x = ConvexBody::cuboid(dvector![1.0], 1.0)
        .unwrap()
        .with_center(dvector![1.0])
        .unwrap();
    let d = x.polar_dual_about(&dvector![1.0]).unwrap();
    assert!(d.is_centered());
    assert!((d.support(&dvector![1.0]).unwrap() - 1.0).abs() < 1e-12);
    assert!((d.support(&dvector![-1.0]).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn polar_dual_about_rejects_exterior_point() {
    let x = ConvexBody::cuboid(dvector![1.0, 1.0], 1.0).unwrap();
    assert!(matches!(
        x.polar_dual_about(&dvector![3.0, 0.0]),
        Err(Error::NotInterior)
    ));
    assert!(matches!(
        x.polar_dual_about(&dvector![1.0, 0.0]),
        Err(Error::NotInterior)
    ));
}

#[test]
fn membership_examples() {
    let ball = ConvexBody::ball(1.0, 2, 1.0).unwrap();
    assert!(ball.membership(&dvector![0.0, 0.0]).unwrap());

    let bx = ConvexBody::cuboid(dvector![1.0, 2.0], 1.0).unwrap();
    assert!(!bx.membership(&dvector![1.5, 0.0]).unwrap());

    // Cross-polytope norm oracle: |0.4| + |0.4| = 0.8 ≤ 1.
    let cross = ConvexBody::vpolytope(vec![dvector![1.0, 0.0], dvector![0.0, 1.0]], 1.0).unwrap();
    assert!(cross.membership(&dvector![0.4, 0.4]).unwrap());
    assert!(!cross.membership(&dvector![0.7, 0.4]).unwrap());
}

#[test]
fn membership_dimension_mismatch() {
    let ball = ConvexBody::ball(1.0, 2, 1.0).unwrap();
    assert!(matches!(
        ball.membership(&dvector![0.0, 0.0, 0.0]),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn support_examples() {
    let ball = ConvexBody::ball(0.7, 3, 1.0).unwrap();
    assert!((ball.support(&dvector![1.0, 0.0, 0.0]).unwrap() - 0.7).abs() < 1e-12);

    // Lagrange maximization of u·x on Ax·x ≤ ℏ with A = diag(4, 1), u = e₁
    // gives h = √(ℏ/4) = 1/2.
    let ell = ConvexBody::ellipsoid(dmatrix![4.0, 0.0; 0.0, 1.0], 1.0).unwrap();
    assert!((ell.support(&dvector![1.0, 0.0]).unwrap() - 0.5).abs() < 1e-12);

    let cross = ConvexBody::vpolytope(vec![dvector![1.0, 0.0], dvector![0.0, 1.0]], 1.0).unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    assert!((cross.support(&dvector![s, s]).unwrap() - s).abs() < 1e-12);

    assert!(ball.support(&dvector![0.0, 0.0, 0.0]).is_err());
}

#[test]
fn hpolytope_support_via_lp_matches_box_formula() {
    // {|p₁| ≤ ℏ, |p₂| ≤ ℏ} is the box [−ℏ, ℏ]²; support is ℏ(|u₁| + |u₂|).
    let h = ConvexBody::hpolytope(vec![dvector![1.0, 0.0], dvector![0.0, 1.0]], 1.0).unwrap();
    for u in dense_directions_2d(97) {
        let oracle = u[0].abs() + u[1].abs();
        assert!((h.support(&u).unwrap() - oracle).abs() < 1e-9);
    }
}

#[test]
fn linear_image_scales_ball() {
    let x = ConvexBody::ball(1.0, 2, 1.0).unwrap();
    let m = DMatrix::from_diagonal_element(2, 2, 2.0);
    let y = x.linear_image(&m).unwrap();
    match y.kind() {
        BodyKind::Ball { radius, .. } => assert!((radius - 2.0).abs() < 1e-12),
        other => panic!("wrong kind {other:?}"),
    }
}

#[test]
fn linear_image_rotation_keeps_ball() {
    let x = ConvexBody::ball(1.0, 2, 1.0).unwrap();
    let th: f64 = 0.83;
    let r = dmatrix![th.cos(), -th.sin(); th.sin(), th.cos()];
    let y = x.linear_image(&r).unwrap();
    match y.kind() {
        BodyKind::Ball { radius, .. } => assert!((radius - 1.0).abs() < 1e-12),
        other => panic!("wrong kind {other:?}"),
    }
}

/// The covariance rule (M X)^ℏ = M⁻ᵀ X^ℏ for M = diag(2, 1) on the square:
/// both routes are compared on a dense direction grid, and both must agree
/// with the frozen closed form of conv{(±1/2, 0), (0, ±1)}.
#[test]
fn linear_image_covariance_on_box() {
    let x = ConvexBody::cuboid(dvector![1.0, 1.0], 1.0).unwrap();
    let m = dmatrix![2.0, 0.0; 0.0, 1.0];
    let m_inv_t = dmatrix![0.5, 0.0; 0.0, 1.0];

    let route_a = x.linear_image(&m).unwrap().polar_dual().unwrap();
    let route_b = x.polar_dual().unwrap().linear_image(&m_inv_t).unwrap();

    for u in dense_directions_2d(360) {
        let oracle = (u[0].abs() * 0.5).max(u[1].abs());
        let ha = route_a.support(&u).unwrap();
        let hb = route_b.support(&u).unwrap();
        assert!((ha - oracle).abs() < 1e-9, "route A {ha} vs {oracle}");
        assert!((hb - oracle).abs() < 1e-9, "route B {hb} vs {oracle}");
    }
}

#[test]
fn linear_image_rejects_singular() {
    let x = ConvexBody::cuboid(dvector![1.0, 1.0], 1.0).unwrap();
    let m = dmatrix![1.0, 1.0; 1.0, 1.0];
    assert!(matches!(x.linear_image(&m), Err(Error::Singular(_))));
}

#[test]
fn involution_exact_for_ball_and_ellipsoid() {
    let e = ConvexBody::ellipsoid(dmatrix![2.0, 0.3; 0.3, 1.0], 1.0).unwrap();
    let back = e.polar_dual().unwrap().polar_dual().unwrap();
    match (e.kind(), back.kind()) {
        (BodyKind::Ellipsoid { matrix: a }, BodyKind::Ellipsoid { matrix: b }) => {
            assert!((a - b).amax() < 1e-12);
        }
        _ => panic!("kind changed under involution"),
    }
}

#[test]
fn involution_by_support_for_polytopes_and_boxes() {
    let bodies = vec![
        ConvexBody::cuboid(dvector![0.8, 1.7], 1.0).unwrap(),
        ConvexBody::vpolytope(
            vec![dvector![1.0, 0.2], dvector![-0.3, 1.1], dvector![0.5, -0.9]],
            1.0,
        )
        .unwrap(),
        ConvexBody::hpolytope(
            vec![dvector![1.0, 0.1], dvector![0.2, 1.0], dvector![0.7, -0.6]],
            1.0,
        )
        .unwrap(),
    ];
    for x in bodies {
        let back = x.polar_dual().unwrap().polar_dual().unwrap();
        for u in dense_directions_2d(200) {
            let h0 = x.support(&u).unwrap();
            let h2 = back.support(&u).unwrap();
            assert!((h0 - h2).abs() < 1e-9, "support drifted: {h0} vs {h2}");
        }
    }
}

/// If membership sampling confirms X ⊆ Y, every sampled point of Y^ℏ must lie
/// in X^ℏ (polar duality is anti-monotone).
#[test]
fn duality_is_anti_monotone() {
    use crate::rng::McRng;
    let x = ConvexBody::cuboid(dvector![0.5, 0.4], 1.0).unwrap();
    let y = ConvexBody::ball(0.9, 2, 1.0).unwrap();

    let mut rng = McRng::seeded(11);
    let (lo, hi) = y.bounding_box().unwrap();
    let mut confirmed_inclusion = true;
    for _ in 0..100_000 {
        let p = dvector![rng.uniform_in(lo[0], hi[0]), rng.uniform_in(lo[1], hi[1])];
        if x.membership(&p).unwrap() && !y.membership(&p).unwrap() {
            confirmed_inclusion = false;
            break;
        }
    }
    assert!(confirmed_inclusion, "test setup: X ⊄ Y");

    let xd = x.polar_dual().unwrap();
    let yd = y.polar_dual().unwrap();
    let (dlo, dhi) = yd.bounding_box().unwrap();
    for _ in 0..100_000 {
        let p = dvector![
            rng.uniform_in(dlo[0], dhi[0]),
            rng.uniform_in(dlo[1], dhi[1])
        ];
        if yd.membership(&p).unwrap() {
            assert!(
                xd.membership(&p).unwrap(),
                "anti-monotonicity violated at {p}"
            );
        }
    }
}

#[test]
fn support_is_positively_homogeneous() {
    let bodies = vec![
        ConvexBody::ball(1.3, 2, 1.0).unwrap(),
        ConvexBody::ellipsoid(dmatrix![2.0, 0.4; 0.4, 1.0], 1.0).unwrap(),
        ConvexBody::cuboid(dvector![0.8, 1.7], 1.0).unwrap(),
    ];
    for x in bodies {
        for u in dense_directions_2d(16) {
            let h1 = x.support(&u).unwrap();
            for lambda in [0.25, 3.0, 17.5] {
                let h = x.support(&(&u * lambda)).unwrap();
                assert!((h - lambda * h1).abs() <= 1e-12 * (1.0 + lambda * h1.abs()));
            }
        }
    }
}

#[test]
fn body_spec_json_round_trip() {
    let x = ConvexBody::ellipsoid(dmatrix![2.0, 0.25; 0.25, 1.0], 0.5).unwrap();
    let json = serde_json::to_string(&x.to_spec()).unwrap();
    assert!(json.contains("\"kind\":\"ellipsoid\""));
    let spec: BodySpec = serde_json::from_str(&json).unwrap();
    let y = ConvexBody::from_spec(&spec).unwrap();
    match y.kind() {
        BodyKind::Ellipsoid { matrix } => {
            assert_eq!(matrix[(0, 1)], 0.25);
            assert_eq!(matrix[(0, 0)], 2.0);
        }
        other => panic!("wrong kind {other:?}"),
    }
    assert_eq!(y.hbar(), 0.5);
}

/// Doubles survive the JSON schema bit-for-bit, including values whose
/// shortest representation needs all 17 digits.
#[test]
fn body_spec_floats_round_trip_exactly() {
    let awkward = 0.1f64 + 0.2f64;
    let x = ConvexBody::cuboid(dvector![awkward, 1.0 / 3.0], 0.693147180559945_3).unwrap();
    let json = serde_json::to_string(&x.to_spec()).unwrap();
    let back = ConvexBody::from_spec(&serde_json::from_str(&json).unwrap()).unwrap();
    match back.kind() {
        BodyKind::Box { half_widths } => {
            assert_eq!(half_widths[0].to_bits(), awkward.to_bits());
            assert_eq!(half_widths[1].to_bits(), (1.0f64 / 3.0).to_bits());
        }
        other => panic!("wrong kind {other:?}"),
    }
    assert_eq!(back.hbar().to_bits(), 0.693147180559945_3f64.to_bits());
}

#[test]
fn variance_box_spec_parses() {
    let spec: BodySpec =
        serde_json::from_str(r#"{"kind":"variance_box","hbar":1.0,"variances":[0.5,2.0]}"#)
            .unwrap();
    let b = ConvexBody::from_spec(&spec).unwrap();
    match b.kind() {
        BodyKind::Box { half_widths } => {
            assert!((half_widths[0] - 1.0).abs() < 1e-15);
            assert!((half_widths[1] - 2.0).abs() < 1e-15);
        }
        other => panic!("wrong kind {other:?}"),
    }
}
