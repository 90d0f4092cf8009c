//! Exact `g(C)` (fewest hyperplanes through 0 covering `C ∩ Zⁿ`) and `h(C)`
//! (largest subset of `C ∩ Zⁿ` with no `n` members linearly dependent) by
//! branch and bound, for small instances.
//!
//! Both problems only see the primitive directions of the nonzero points: a
//! hyperplane through 0 contains a point iff it contains its direction, and
//! two points on one line are dependent together with any `n - 2` others.
//! Candidate hyperplanes are the spans of `n - 1` independent directions;
//! every hyperplane of an optimal cover can be traded for one of them.

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::census::{combinations_count, spanned_hyperplanes};
use crate::cover::{build_cover, Hyperplane, MChoice};
use crate::error::{Error, Result};
use crate::genpos::{build_general_position, verify_general_position};
use crate::geometry::Body;
use crate::lattice::{enumerate_points, Budget};
use crate::linalg::{self, IncrementalBasis};
use crate::rational::int;

pub const POINT_CAP: usize = 2000;
pub const NODE_CAP: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    G,
    H,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub quantity: Quantity,
    pub value: usize,
    /// Hyperplane normals for `g`, points for `h`.
    pub witness: Vec<Vec<i64>>,
    /// `|C ∩ Zⁿ|`, origin included.
    pub instance_size: usize,
}

impl OracleResult {
    /// Checks the witness against the body's lattice points.
    pub fn validate(&self, body: &Body) -> bool {
        let n = body.dim();
        if self.witness.len() != self.value {
            return false;
        }
        match self.quantity {
            Quantity::G => {
                let Ok(points) = enumerate_points(body, &int(1)) else { return false };
                let planes: Vec<Hyperplane> =
                    self.witness.iter().filter_map(|w| Hyperplane::from_normal(w).ok()).collect();
                planes.len() == self.value
                    && points.iter().all(|p| p.iter().all(|&c| c == 0) || planes.iter().any(|h| h.contains(p)))
            }
            Quantity::H => {
                self.witness.iter().all(|p| p.len() == n && body.gauge_int(p).is_ok_and(|g| g.le_rational(&int(1))))
                    && self.witness.iter().collect::<BTreeSet<_>>().len() == self.value
                    && verify_general_position(&self.witness, n)
            }
        }
    }
}

struct Instance {
    n: usize,
    size: usize,
    nonzero: Vec<Vec<i64>>,
    dirs: Vec<Vec<i64>>,
    rank: usize,
}

impl Instance {
    fn new(body: &Body) -> Result<Instance> {
        let points = enumerate_points(body, &int(1))?;
        if points.len() > POINT_CAP {
            return Err(Error::InstanceTooLarge { what: "lattice points", size: points.len(), cap: POINT_CAP });
        }
        let nonzero: Vec<Vec<i64>> = points.iter().filter(|p| p.iter().any(|&c| c != 0)).cloned().collect();
        let dirs: Vec<Vec<i64>> = nonzero
            .iter()
            .filter_map(|p| linalg::canonical_primitive(p))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let rank = linalg::rank(&dirs);
        Ok(Instance { n: body.dim(), size: points.len(), nonzero, dirs, rank })
    }

    /// Candidate hyperplanes with their member directions.
    fn planes(&self) -> Result<(Vec<Hyperplane>, Vec<FixedBitSet>)> {
        let combos = combinations_count(self.dirs.len() as u128, (self.n - 1) as u32);
        Budget::from_env().check(combos)?;
        let refs: Vec<&[i64]> = self.dirs.iter().map(Vec::as_slice).collect();
        let planes = spanned_hyperplanes(&refs, self.n);
        let members = planes.par_iter().map(|h| self.members(|d| h.contains(d))).collect();
        Ok((planes, members))
    }

    fn members(&self, pred: impl Fn(&[i64]) -> bool) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.dirs.len());
        for (i, d) in self.dirs.iter().enumerate() {
            if pred(d) {
                set.insert(i);
            }
        }
        set
    }
}

/// A hyperplane containing every vector of `vs`, which must have rank below `n`.
fn hyperplane_containing(vs: &[Vec<i64>], n: usize) -> Hyperplane {
    let mut basis = IncrementalBasis::new(n);
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let units = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect::<Vec<i64>>());
    for v in vs.iter().cloned().chain(units) {
        if rows.len() == n - 1 {
            break;
        }
        if basis.insert(&v) {
            rows.push(v);
        }
    }
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    Hyperplane::spanned_by(&refs).expect("independent rows")
}

struct Nodes(u64);

impl Nodes {
    fn tick(&mut self) -> Result<()> {
        self.0 += 1;
        if self.0 > NODE_CAP {
            return Err(Error::InstanceTooLarge { what: "search nodes", size: self.0 as usize, cap: NODE_CAP as usize });
        }
        Ok(())
    }
}

pub fn exact_g(body: &Body) -> Result<OracleResult> {
    let inst = Instance::new(body)?;
    let result = |planes: Vec<Hyperplane>| OracleResult {
        quantity: Quantity::G,
        value: planes.len(),
        witness: planes.into_iter().map(|h| h.normal().to_vec()).collect(),
        instance_size: inst.size,
    };
    if inst.rank < inst.n {
        return Ok(result(vec![hyperplane_containing(&inst.dirs, inst.n)]));
    }
    let (planes, members) = inst.planes()?;
    let d = inst.dirs.len();
    let mut planes_of: Vec<Vec<usize>> = vec![Vec::new(); d];
    for (p, m) in members.iter().enumerate() {
        for e in m.ones() {
            planes_of[e].push(p);
        }
    }
    for list in &mut planes_of {
        list.sort_by_key(|&p| (std::cmp::Reverse(members[p].count_ones(..)), p));
    }

    let mut best = greedy_cover(d, &members);
    let mut chosen = Vec::new();
    let mut uncovered = FixedBitSet::with_capacity(d);
    uncovered.insert_range(..);
    let mut nodes = Nodes(0);
    cover_search(&members, &planes_of, &mut uncovered, &mut chosen, &mut best, &mut nodes)?;
    best.sort_unstable();
    Ok(result(best.into_iter().map(|p| planes[p].clone()).collect()))
}

fn greedy_cover(d: usize, members: &[FixedBitSet]) -> Vec<usize> {
    let mut uncovered = FixedBitSet::with_capacity(d);
    uncovered.insert_range(..);
    let mut picked = Vec::new();
    while !uncovered.is_clear() {
        let p = (0..members.len())
            .max_by_key(|&p| (members[p].intersection_count(&uncovered), std::cmp::Reverse(p)))
            .expect("some plane covers each direction");
        uncovered.difference_with(&members[p]);
        picked.push(p);
    }
    picked
}

fn cover_search(
    members: &[FixedBitSet],
    planes_of: &[Vec<usize>],
    uncovered: &mut FixedBitSet,
    chosen: &mut Vec<usize>,
    best: &mut Vec<usize>,
    nodes: &mut Nodes,
) -> Result<()> {
    nodes.tick()?;
    let left = uncovered.count_ones(..);
    if left == 0 {
        if chosen.len() < best.len() {
            *best = chosen.clone();
        }
        return Ok(());
    }
    if chosen.len() + cover_lower_bound(members, uncovered, left) >= best.len() {
        return Ok(());
    }
    // branch on the uncovered direction with the fewest candidate planes
    let e = uncovered.ones().min_by_key(|&e| (planes_of[e].len(), e)).unwrap();
    for &p in &planes_of[e] {
        let saved = uncovered.clone();
        uncovered.difference_with(&members[p]);
        chosen.push(p);
        cover_search(members, planes_of, uncovered, chosen, best, nodes)?;
        chosen.pop();
        *uncovered = saved;
    }
    Ok(())
}

/// Fewest planes whose current coverage counts can add up to `left`.
fn cover_lower_bound(members: &[FixedBitSet], uncovered: &FixedBitSet, left: usize) -> usize {
    let mut counts: Vec<usize> = members.iter().map(|m| m.intersection_count(uncovered)).collect();
    counts.sort_unstable_by(|a, b| b.cmp(a));
    let mut sum = 0;
    for (k, c) in counts.into_iter().enumerate() {
        sum += c;
        if sum >= left {
            return k + 1;
        }
    }
    usize::MAX / 2
}

pub fn exact_h(body: &Body) -> Result<OracleResult> {
    let inst = Instance::new(body)?;
    let n = inst.n;
    let best: Vec<Vec<i64>> = if n == 2 {
        inst.dirs.clone()
    } else {
        let (planes, members) = inst.planes()?;
        let index: HashMap<&Hyperplane, usize> = planes.iter().enumerate().map(|(i, h)| (h, i)).collect();
        let mut search = GenPosSearch { inst: &inst, members: &members, index, best: Vec::new(), nodes: Nodes(0) };
        search.run()?;
        search.best.iter().map(|&i| inst.dirs[i].clone()).collect()
    };
    // fewer than n points are in general position whatever they are
    let witness = if best.len() < n - 1 && best.len() < inst.nonzero.len() {
        inst.nonzero.iter().take(n - 1).cloned().collect()
    } else {
        best
    };
    Ok(OracleResult { quantity: Quantity::H, value: witness.len(), witness, instance_size: inst.size })
}

struct GenPosSearch<'a> {
    inst: &'a Instance,
    members: &'a [FixedBitSet],
    index: HashMap<&'a Hyperplane, usize>,
    best: Vec<usize>,
    nodes: Nodes,
}

impl GenPosSearch<'_> {
    fn run(&mut self) -> Result<()> {
        let d = self.inst.dirs.len();
        let mut chosen = Vec::new();
        self.extend(&mut chosen, &FixedBitSet::with_capacity(d), 0)
    }

    /// Directions made unusable by adding `c` to `chosen` (already pushed).
    fn blocked_by(&self, chosen: &[usize]) -> FixedBitSet {
        let n = self.inst.n;
        let dirs = &self.inst.dirs;
        let (&c, rest) = chosen.split_last().unwrap();
        if chosen.len() < n - 1 {
            let span: Vec<Vec<i64>> = chosen.iter().map(|&i| dirs[i].clone()).collect();
            let r = span.len();
            return self.inst.members(|v| {
                let mut rows = span.clone();
                rows.push(v.to_vec());
                linalg::rank(&rows) == r
            });
        }
        let mut out = FixedBitSet::with_capacity(dirs.len());
        for others in rest.iter().combinations(n - 2) {
            let rows: Vec<&[i64]> =
                others.iter().map(|&&i| dirs[i].as_slice()).chain(std::iter::once(dirs[c].as_slice())).collect();
            let h = Hyperplane::spanned_by(&rows).expect("chosen directions are in general position");
            out.union_with(&self.members[self.index[&h]]);
        }
        out
    }

    /// A hyperplane holds at most `n - 1` points of a general-position set,
    /// so covering `avail` greedily by candidate hyperplanes bounds how many
    /// more points can be added.
    fn packing_bound(&self, chosen: &[usize], avail: &[usize]) -> usize {
        let d = self.inst.dirs.len();
        let cap = self.inst.n - 1;
        let mut left = FixedBitSet::with_capacity(d);
        left.extend(avail.iter().copied());
        let mut taken = FixedBitSet::with_capacity(d);
        taken.extend(chosen.iter().copied());
        let mut bound = 0;
        while !left.is_clear() {
            let Some((p, hit)) = self
                .members
                .iter()
                .enumerate()
                .map(|(p, m)| (p, m.intersection_count(&left)))
                .max_by_key(|&(p, c)| (c, std::cmp::Reverse(p)))
            else {
                bound += left.count_ones(..);
                break;
            };
            let room = cap.saturating_sub(self.members[p].intersection_count(&taken));
            if room >= hit {
                // this plane does not improve on counting points one by one
                bound += left.count_ones(..);
                break;
            }
            bound += room;
            left.difference_with(&self.members[p]);
        }
        bound
    }

    fn extend(&mut self, chosen: &mut Vec<usize>, blocked: &FixedBitSet, next: usize) -> Result<()> {
        self.nodes.tick()?;
        if chosen.len() > self.best.len() {
            self.best = chosen.clone();
        }
        let d = self.inst.dirs.len();
        let avail: Vec<usize> = (next..d).filter(|&i| !blocked.contains(i)).collect();
        if chosen.len() + self.packing_bound(chosen, &avail) <= self.best.len() {
            return Ok(());
        }
        for (k, &c) in avail.iter().enumerate() {
            if chosen.len() + (avail.len() - k) <= self.best.len() {
                break;
            }
            chosen.push(c);
            let mut inner = blocked.clone();
            inner.union_with(&self.blocked_by(chosen));
            self.extend(chosen, &inner, c + 1)?;
            chosen.pop();
        }
        Ok(())
    }
}

/// `|genpos certificate| <= h <= (n-1) g <= (n-1) |cover|`, with the
/// constructions included when they apply to the body.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SandwichReport {
    pub n: usize,
    pub g: OracleResult,
    pub h: OracleResult,
    pub genpos_size: Option<usize>,
    pub cover_size: Option<usize>,
    pub holds: bool,
}

pub fn check_sandwich(body: &Body) -> Result<SandwichReport> {
    let n = body.dim();
    let g = exact_g(body)?;
    let h = exact_h(body)?;
    let genpos_size = match build_general_position(body) {
        Ok(cert) => Some(cert.len()),
        Err(Error::NoAdmissiblePrime(_)) => None,
        Err(e) => return Err(e),
    };
    let cover_size = match build_cover(body, MChoice::Auto) {
        Ok(family) => Some(family.len()),
        Err(Error::LambdaExceedsOne(_) | Error::UnsupportedFamily(_)) => None,
        Err(e) => return Err(e),
    };
    let holds = h.value <= (n - 1) * g.value
        && genpos_size.is_none_or(|s| s <= h.value)
        && cover_size.is_none_or(|s| g.value <= s);
    Ok(SandwichReport { n, g, h, genpos_size, cover_size, holds })
}

#[cfg(test)]
mod tests;
