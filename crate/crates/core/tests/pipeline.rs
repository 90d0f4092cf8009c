//! Cross-module checks on bodies read from JSON descriptors.

use lattice_cover::census;
use lattice_cover::cover::{build_cover, polar_minima, MChoice};
use lattice_cover::genpos::{build_general_position, lower_bound, GenPosCertificate};
use lattice_cover::lattice::{enumerate_points, successive_minima};
use lattice_cover::oracle::{check_sandwich, exact_g};
use lattice_cover::rational::int;
use lattice_cover::{Body, BodyDescriptor};

fn body(json: &str) -> Body {
    BodyDescriptor::from_json(json).unwrap().to_body().unwrap()
}

#[test]
fn certificate_survives_serialization() {
    let b = body(r#"{"family":"ball","dim":2,"params":{"radius":"50"}}"#);
    let cert = build_general_position(&b).unwrap();
    let text = serde_json::to_string(&cert).unwrap();
    let back: GenPosCertificate = serde_json::from_str(&text).unwrap();
    assert_eq!(back, cert);
    back.verify().unwrap();
    let report = lower_bound(&successive_minima(&b).unwrap()).unwrap();
    assert!(report.exceeded_by(back.len()));
}

#[test]
fn cover_is_no_smaller_than_oracle() {
    for json in [
        r#"{"family":"ball","dim":2,"params":{"radius":"3"}}"#,
        r#"{"family":"box","dim":3,"params":{"half_widths":["2","2","1"]}}"#,
        r#"{"family":"ellipsoid","dim":2,"params":{"matrix":[["1/9","1/20"],["1/20","1/4"]]}}"#,
    ] {
        let b = body(json);
        let family = build_cover(&b, MChoice::Auto).unwrap();
        assert!(exact_g(&b).unwrap().value <= family.len());
        assert!(check_sandwich(&b).unwrap().holds);
    }
}

#[test]
fn cover_normals_lie_in_dilated_polar() {
    let b = body(r#"{"family":"crosspolytope","dim":3,"params":{"scales":["3","3","1"]}}"#);
    let family = build_cover(&b, MChoice::Fixed(1)).unwrap();
    let limit = &family.alpha * int(family.k() as i64);
    for h in &family.hyperplanes {
        assert!(b.support_int(h.normal()).unwrap().le_rational(&limit));
    }
    let mu = polar_minima(&b).unwrap().mu;
    for (w, m) in family.witnesses.iter().zip(&mu) {
        assert_eq!(b.support_int(w).unwrap(), *m);
    }
}

#[test]
fn census_points_match_enumeration() {
    let ball = Body::ball(3, int(5)).unwrap();
    let c = census::census(3, &int(5)).unwrap();
    assert_eq!(c.point_count as usize, enumerate_points(&ball, &int(1)).unwrap().len());
    // s_r is the mean load; the largest load is a coordinate plane
    assert!(c.s_r <= int(enumerate_points(&Body::ball(2, int(5)).unwrap(), &int(1)).unwrap().len() as i64));
}
