//! JSON body descriptors:
//! `{"family": "ball", "dim": 2, "params": {"radius": "2"}}` with rationals
//! written as `"p/q"` strings (bare JSON numbers are accepted on input).

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Body, Family, Shape, Slab};
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BodyDescriptor {
    pub family: Family,
    pub dim: usize,
    pub params: Value,
}

impl BodyDescriptor {
    pub fn from_json(text: &str) -> Result<BodyDescriptor> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_body(&self) -> Result<Body> {
        Body::try_from(self.clone())
    }
}

fn param<'a>(params: &'a Value, key: &str) -> Result<&'a Value> {
    params
        .get(key)
        .ok_or_else(|| Error::Parse(format!("missing params.{key}")))
}

fn rational(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(Error::Parse(format!("expected a rational, got {other}"))),
    }
}

fn rational_list(v: &Value) -> Result<Vec<Rational>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("expected an array, got {v}")))?
        .iter()
        .map(rational)
        .collect()
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

impl TryFrom<BodyDescriptor> for Body {
    type Error = Error;

    fn try_from(d: BodyDescriptor) -> Result<Body> {
        let p = &d.params;
        let body = match d.family {
            Family::Ball => Body::ball(d.dim, rational(param(p, "radius")?)?)?,
            Family::Ellipsoid => {
                let rows = param(p, "matrix")?
                    .as_array()
                    .ok_or_else(|| Error::Parse("params.matrix must be an array of rows".into()))?
                    .iter()
                    .map(rational_list)
                    .collect::<Result<Vec<_>>>()?;
                Body::ellipsoid(rows)?
            }
            Family::Box => Body::axis_box(rational_list(param(p, "half_widths")?)?)?,
            Family::CrossPolytope => Body::cross_polytope(rational_list(param(p, "scales")?)?)?,
            Family::HPolytope => {
                let slabs = param(p, "rows")?
                    .as_array()
                    .ok_or_else(|| Error::Parse("params.rows must be an array".into()))?
                    .iter()
                    .map(|row| {
                        Ok(Slab { normal: rational_list(param(row, "a")?)?, bound: rational(param(row, "b")?)? })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Body::h_polytope(slabs)?
            }
        };
        if body.dim() != d.dim {
            return Err(Error::DimensionMismatch { expected: d.dim, got: body.dim() });
        }
        Ok(body)
    }
}

impl From<Body> for BodyDescriptor {
    fn from(body: Body) -> BodyDescriptor {
        let params = match body.shape() {
            Shape::Ball { radius } => json!({ "radius": format_rational(radius) }),
            Shape::Ellipsoid { matrix, .. } => {
                json!({ "matrix": matrix.iter().map(|r| strings(r)).collect::<Vec<_>>() })
            }
            Shape::Box { half_widths } => json!({ "half_widths": strings(half_widths) }),
            Shape::CrossPolytope { scales } => json!({ "scales": strings(scales) }),
            Shape::HPolytope { slabs } => json!({
                "rows": slabs
                    .iter()
                    .map(|s| json!({ "a": strings(&s.normal), "b": format_rational(&s.bound) }))
                    .collect::<Vec<_>>()
            }),
        };
        BodyDescriptor { family: body.family(), dim: body.dim(), params }
    }
}
