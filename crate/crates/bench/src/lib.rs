//! Fixture bodies shared by the criterion benches.

use lattice_cover::rational::int;
use lattice_cover::Body;

pub fn ball(dim: usize, radius: i64) -> Body {
    Body::ball(dim, int(radius)).expect("valid ball")
}

pub fn flat_cross(dim: usize, x: i64) -> Body {
    Body::flat_cross(dim, int(x)).expect("valid cross-polytope")
}
