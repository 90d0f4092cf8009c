use proptest::prelude::*;

use super::*;
use crate::rational::ratio;

fn q(n: i64) -> Rational {
    int(n)
}

#[test]
fn gauge_examples() {
    let bx = Body::axis_box(vec![q(1), q(1)]).unwrap();
    assert_eq!(bx.gauge_int(&[3, 4]).unwrap(), GaugeValue::Rational(q(4)));

    let ball = Body::ball(2, q(2)).unwrap();
    let g = ball.gauge_int(&[1, 1]).unwrap();
    assert!(g.is_sqrt());
    assert_eq!(g.square(), ratio(1, 2));

    let cross = Body::cross_polytope(vec![q(5), q(5), q(1)]).unwrap();
    assert_eq!(cross.gauge_int(&[1, 1, 0]).unwrap(), GaugeValue::Rational(ratio(2, 5)));

    assert_eq!(
        ball.gauge_int(&[1, 2, 3]).unwrap_err(),
        Error::DimensionMismatch { expected: 2, got: 3 }
    );
}

#[test]
fn support_examples() {
    let ball = Body::ball(2, q(4)).unwrap();
    assert_eq!(ball.support_int(&[1, 0]).unwrap().square(), q(16));
    let bx = Body::axis_box(vec![q(2), q(1)]).unwrap();
    assert_eq!(bx.support_int(&[1, 1]).unwrap(), GaugeValue::Rational(q(3)));
    let cross = Body::cross_polytope(vec![q(5), q(5), q(1)]).unwrap();
    assert_eq!(cross.support_int(&[0, 0, 3]).unwrap(), GaugeValue::Rational(q(3)));
    let h = Body::axis_box(vec![q(1), q(1)]).unwrap().transform(&[vec![1, 1], vec![0, 1]]).unwrap();
    assert_eq!(h.support_int(&[1, 0]), Err(Error::UnsupportedFamily("hpolytope")));
}

#[test]
fn bounding_box_examples() {
    let ball = Body::ball(2, q(2)).unwrap();
    assert_eq!(ball.bounding_box(&q(1)).bounds, vec![2, 2]);
    assert_eq!(ball.bounding_box(&ratio(1, 2)).bounds, vec![1, 1]);
    let bx = Body::axis_box(vec![q(5), q(1)]).unwrap();
    assert_eq!(bx.bounding_box(&q(1)).bounds, vec![5, 1]);
    // ellipsoid x² + y² / 9 <= 1
    let e = Body::ellipsoid(vec![vec![q(1), q(0)], vec![q(0), ratio(1, 9)]]).unwrap();
    assert_eq!(e.bounding_box(&q(1)).bounds, vec![1, 3]);
}

#[test]
fn construction_rejects_bad_parameters() {
    assert!(matches!(Body::ball(2, q(0)), Err(Error::InvalidBody(_))));
    assert!(matches!(Body::ball(1, q(1)), Err(Error::DimensionOutOfRange(1))));
    assert!(matches!(Body::ball(9, q(1)), Err(Error::DimensionOutOfRange(9))));
    assert!(matches!(Body::axis_box(vec![q(1), q(-1)]), Err(Error::InvalidBody(_))));
    let indefinite = vec![vec![q(1), q(2)], vec![q(2), q(1)]];
    assert!(matches!(Body::ellipsoid(indefinite), Err(Error::InvalidBody(_))));
    let asym = vec![vec![q(2), q(1)], vec![q(0), q(2)]];
    assert!(matches!(Body::ellipsoid(asym), Err(Error::InvalidBody(_))));
    let flat = vec![Slab { normal: vec![q(1), q(1)], bound: q(1) }, Slab { normal: vec![q(2), q(2)], bound: q(1) }];
    assert!(matches!(Body::h_polytope(flat), Err(Error::InvalidBody(_))));
}

#[test]
fn transform_families() {
    let ball = Body::ball(2, q(1)).unwrap();
    let id = vec![vec![1, 0], vec![0, 1]];
    let t = ball.transform(&id).unwrap();
    assert_eq!(t.family(), Family::Ellipsoid);
    assert_eq!(t, Body::ellipsoid_from_ints(&[vec![1, 0], vec![0, 1]]).unwrap());

    let bad = vec![vec![2, 0], vec![0, 1]];
    assert!(matches!(ball.transform(&bad), Err(Error::NonUnimodular(_))));

    // -I keeps the point set
    let neg = vec![vec![-1, 0], vec![0, -1]];
    let bx = Body::axis_box(vec![q(3), q(2)]).unwrap();
    let tb = bx.transform(&neg).unwrap();
    for x in -4..=4 {
        for y in -3..=3 {
            assert_eq!(bx.gauge_int(&[x, y]).unwrap(), tb.gauge_int(&[x, y]).unwrap());
        }
    }
}

#[test]
fn polar_matches_support() {
    let bodies = vec![
        Body::ball(3, ratio(5, 2)).unwrap(),
        Body::axis_box(vec![q(2), ratio(1, 3), q(7)]).unwrap(),
        Body::cross_polytope(vec![q(5), q(5), q(1)]).unwrap(),
        Body::ellipsoid_from_ints(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]).unwrap(),
    ];
    for b in &bodies {
        let polar = b.polar().unwrap();
        for x in [[1, 0, 0], [1, -2, 3], [0, 5, -1], [4, 4, 4]] {
            assert_eq!(b.support_int(&x).unwrap(), polar.gauge_int(&x).unwrap(), "{:?}", b.family());
        }
    }
}

/// Support of a polytope from its definition: the max of `u·x` over its
/// vertices.
#[test]
fn support_agrees_with_vertex_maximum() {
    let bx = Body::axis_box(vec![q(2), ratio(1, 2), q(3)]).unwrap();
    let cross = Body::cross_polytope(vec![q(5), q(2), q(1)]).unwrap();
    let box_vertices: Vec<Vec<Rational>> = (0..8)
        .map(|m: i32| {
            [q(2), ratio(1, 2), q(3)]
                .iter()
                .enumerate()
                .map(|(i, h)| if m >> i & 1 == 1 { h.clone() } else { -h.clone() })
                .collect()
        })
        .collect();
    let cross_vertices: Vec<Vec<Rational>> = [q(5), q(2), q(1)]
        .iter()
        .enumerate()
        .flat_map(|(i, s)| {
            [1, -1].map(|sg| (0..3).map(|j| if i == j { s * q(sg) } else { q(0) }).collect())
        })
        .collect();
    for x in [[1i64, 2, -3], [0, 0, 1], [-4, 1, 1], [7, -7, 2]] {
        let xq = to_rationals(&x);
        for (b, verts) in [(&bx, &box_vertices), (&cross, &cross_vertices)] {
            let best = verts.iter().map(|v| dot_q(v, &xq)).max().unwrap();
            assert_eq!(b.support(&xq).unwrap(), GaugeValue::Rational(best));
        }
    }
}

#[test]
fn descriptor_round_trip() {
    let text = r#"{"family":"ellipsoid","dim":2,"params":{"matrix":[["2","1/2"],["1/2",1]]}}"#;
    let body = BodyDescriptor::from_json(text).unwrap().to_body().unwrap();
    let back: Body = serde_json::from_str(&serde_json::to_string(&body).unwrap()).unwrap();
    assert_eq!(back, body);
    let bad = r#"{"family":"ball","dim":2,"params":{}}"#;
    assert!(BodyDescriptor::from_json(bad).unwrap().to_body().is_err());
    let mismatch = r#"{"family":"box","dim":3,"params":{"half_widths":["1","2"]}}"#;
    assert!(BodyDescriptor::from_json(mismatch).unwrap().to_body().is_err());
}

fn body_strategy() -> impl Strategy<Value = Body> {
    let r = (1i64..20, 1i64..5).prop_map(|(a, b)| ratio(a, b));
    prop_oneof![
        r.clone().prop_map(|r| Body::ball(3, r).unwrap()),
        prop::collection::vec(r.clone(), 3).prop_map(|h| Body::axis_box(h).unwrap()),
        prop::collection::vec(r, 3).prop_map(|s| Body::cross_polytope(s).unwrap()),
        (1i64..6, -2i64..3, 1i64..6, -1i64..2).prop_map(|(a, b, c, d)| {
            // diagonally dominant, hence positive definite
            let m = vec![vec![a + 3, b, d], vec![b, c + 3, 0], vec![d, 0, 4]];
            Body::ellipsoid_from_ints(&m).unwrap()
        }),
    ]
}

fn vec3() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-30i64..30, 1i64..7).prop_map(|(a, b)| ratio(a, b)), 3)
}

proptest! {
    #[test]
    fn gauge_is_symmetric_and_homogeneous(b in body_strategy(), x in vec3(), t in (-9i64..9, 1i64..5)) {
        let neg: Vec<Rational> = x.iter().map(|v| -v.clone()).collect();
        prop_assert_eq!(b.gauge(&x).unwrap(), b.gauge(&neg).unwrap());
        let t = ratio(t.0, t.1);
        let tx: Vec<Rational> = x.iter().map(|v| v * &t).collect();
        prop_assert_eq!(b.gauge(&tx).unwrap(), b.gauge(&x).unwrap().scale(&t));
        prop_assert_eq!(b.gauge(&[q(0), q(0), q(0)]).unwrap(), GaugeValue::zero());
    }

    #[test]
    fn gauge_is_subadditive(b in body_strategy(), x in vec3(), y in vec3()) {
        let s: Vec<Rational> = x.iter().zip(&y).map(|(a, c)| a + c).collect();
        let lhs = b.gauge(&s).unwrap();
        let (gx, gy) = (b.gauge(&x).unwrap(), b.gauge(&y).unwrap());
        // exact check of √a <= √b + √c via a <= b + c + 2√(bc)
        let (a, bb, c) = (lhs.square(), gx.square(), gy.square());
        let rest = &a - &bb - &c;
        prop_assert!(rest <= q(0) || &rest * &rest <= q(4) * bb * c);
    }

    #[test]
    fn support_times_gauge_dominates_norm(b in body_strategy(), x in vec3()) {
        prop_assume!(x.iter().any(|v| *v != q(0)));
        let prod_sq = b.support(&x).unwrap().square() * b.gauge(&x).unwrap().square();
        let xx: Rational = x.iter().map(|v| v * v).sum();
        prop_assert!(prod_sq >= &xx * &xx);
        if b.family() == Family::Ball {
            prop_assert_eq!(prod_sq, &xx * &xx);
        }
    }

    #[test]
    fn membership_is_monotone_and_matches_gauge(b in body_strategy(), x in prop::collection::vec(-6i64..7, 3), t in (1i64..12, 1i64..4)) {
        let t = ratio(t.0, t.1);
        let g = b.gauge_int(&x).unwrap();
        prop_assert_eq!(b.dilate(&t).contains(&x), g.le_rational(&t));
        if g.le_rational(&t) {
            prop_assert!(b.dilate(&(&t + ratio(1, 3))).contains(&x));
        }
        let bbox = b.bounding_box(&t);
        if b.dilate(&t).contains(&x) {
            prop_assert!(x.iter().zip(&bbox.bounds).all(|(xi, m)| xi.abs() <= *m));
        }
    }
}
