use proptest::prelude::*;

use super::*;
use crate::rational::ratio;

fn ball(n: usize, r: i64) -> Body {
    Body::ball(n, int(r)).unwrap()
}

fn nonzero_points(body: &Body) -> Vec<Vec<i64>> {
    enumerate_points(body, &int(1)).unwrap().into_iter().filter(|p| p.iter().any(|&c| c != 0)).collect()
}

/// Smallest k such that some k normals from the points' pairwise spans cover
/// every point, trying subsets in increasing size.
fn brute_g(body: &Body) -> usize {
    let pts = nonzero_points(body);
    let n = body.dim();
    let mut cands: BTreeSet<Hyperplane> = BTreeSet::new();
    for combo in pts.iter().combinations(n - 1) {
        let rows: Vec<&[i64]> = combo.iter().map(|p| p.as_slice()).collect();
        if let Some(h) = Hyperplane::spanned_by(&rows) {
            cands.insert(h);
        }
    }
    let cands: Vec<Hyperplane> = cands.into_iter().collect();
    for k in 1..=cands.len() {
        if cands.iter().combinations(k).any(|hs| pts.iter().all(|p| hs.iter().any(|h| h.contains(p)))) {
            return k;
        }
    }
    1
}

/// Largest subset of nonzero points passing the general-position check;
/// subsets of such sets pass too, so sizes are tried upward.
fn brute_h(body: &Body) -> usize {
    let pts = nonzero_points(body);
    let n = body.dim();
    (1..=pts.len())
        .take_while(|&k| pts.iter().cloned().combinations(k).any(|s| verify_general_position(&s, n)))
        .last()
        .unwrap_or(0)
}

#[test]
fn ball_r2_plane() {
    let body = ball(2, 2);
    let g = exact_g(&body).unwrap();
    assert_eq!((g.value, g.instance_size), (4, 13));
    assert!(g.validate(&body));
    let h = exact_h(&body).unwrap();
    assert_eq!(h.value, 4);
    assert!(h.validate(&body));
}

#[test]
fn unit_ball() {
    let body = ball(2, 1);
    assert_eq!(exact_g(&body).unwrap().value, 2);
    assert_eq!(exact_h(&body).unwrap().value, 2);
    let s = check_sandwich(&body).unwrap();
    assert!(s.holds);
}

#[test]
fn flat_cross_values() {
    let body = Body::flat_cross(3, int(5)).unwrap();
    let g = exact_g(&body).unwrap();
    assert_eq!(g.value, 2);
    assert!(g.validate(&body));
    let h = exact_h(&body).unwrap();
    assert_eq!(h.value, 3);
    assert!(h.validate(&body));
}

#[test]
fn flat_box_lower_bounds() {
    for x in 2..=4 {
        let body = Body::flat_box(2, int(x)).unwrap();
        let g = exact_g(&body).unwrap();
        let h = exact_h(&body).unwrap();
        assert!(g.value >= 2 * x as usize && g.validate(&body));
        assert!(2 * h.value >= x as usize && h.validate(&body));
    }
    for x in 2..=3 {
        let body = Body::flat_box(3, int(x)).unwrap();
        let g = exact_g(&body).unwrap();
        let h = exact_h(&body).unwrap();
        assert!(g.value >= 2 * x as usize && g.validate(&body));
        assert!(2 * h.value >= x as usize && h.validate(&body));
    }
}

#[test]
fn matches_brute_force() {
    let bodies = vec![
        ball(2, 2),
        Body::ball(2, ratio(5, 2)).unwrap(),
        ball(3, 1),
        Body::ball(3, ratio(3, 2)).unwrap(),
        Body::flat_cross(3, int(2)).unwrap(),
        Body::axis_box(vec![int(1), int(1), ratio(1, 2)]).unwrap(),
        Body::cross_polytope(vec![int(2), int(1), int(1)]).unwrap(),
    ];
    for body in bodies {
        assert_eq!(exact_g(&body).unwrap().value, brute_g(&body), "{body:?}");
        assert_eq!(exact_h(&body).unwrap().value, brute_h(&body), "{body:?}");
    }
}

#[test]
fn degenerate_bodies() {
    // all points on one line: a single hyperplane suffices
    let body = Body::axis_box(vec![int(3), ratio(1, 2), ratio(1, 2)]).unwrap();
    let g = exact_g(&body).unwrap();
    assert_eq!(g.value, 1);
    assert!(g.validate(&body));
    let h = exact_h(&body).unwrap();
    assert_eq!(h.value, 2);
    assert!(h.validate(&body));
    // only the origin
    let body = Body::ball(2, ratio(1, 2)).unwrap();
    assert_eq!(exact_g(&body).unwrap().value, 1);
    assert_eq!(exact_h(&body).unwrap().value, 0);
}

#[test]
fn point_cap() {
    assert!(matches!(exact_g(&ball(2, 30)), Err(Error::InstanceTooLarge { .. })));
}

#[test]
fn sandwich_examples() {
    for body in [ball(2, 2), Body::flat_cross(3, int(5)).unwrap(), ball(3, 2)] {
        let s = check_sandwich(&body).unwrap();
        assert!(s.holds, "{s:?}");
        assert!(s.cover_size.is_some());
    }
}

#[test]
fn deterministic_witnesses() {
    let body = ball(3, 2);
    assert_eq!(exact_g(&body).unwrap(), exact_g(&body).unwrap());
    assert_eq!(exact_h(&body).unwrap(), exact_h(&body).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn oracle_agrees_with_brute_on_small_ellipses(a in 1i64..5, b in -1i64..2, c in 1i64..5) {
        prop_assume!(a * c > b * b);
        let body = Body::ellipsoid(vec![vec![ratio(a, 4), ratio(b, 4)], vec![ratio(b, 4), ratio(c, 4)]]).unwrap();
        prop_assert_eq!(exact_g(&body).unwrap().value, brute_g(&body));
        prop_assert_eq!(exact_h(&body).unwrap().value, brute_h(&body));
    }

    #[test]
    fn h_at_most_n_minus_one_g(h in prop::collection::vec(1i64..3, 3)) {
        let body = Body::axis_box(h.into_iter().map(int).collect()).unwrap();
        let g = exact_g(&body).unwrap();
        let hv = exact_h(&body).unwrap();
        prop_assert!(hv.value <= 2 * g.value);
        prop_assert!(g.validate(&body) && hv.validate(&body));
    }
}

