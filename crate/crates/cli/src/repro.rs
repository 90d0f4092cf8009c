//! Bundled end-to-end reproduction suites. Each suite runs a fixed list of
//! checks and reports pass/fail per check; outputs carry no timings so runs
//! are byte-comparable.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use lattice_cover::census;
use lattice_cover::cover::{build_cover, polar_minima, minima_size_bound, MChoice};
use lattice_cover::genpos::{self, build_general_position, verify_general_position};
use lattice_cover::lattice::{enumerate_points, successive_minima};
use lattice_cover::oracle::{check_sandwich, exact_g, exact_h};
use lattice_cover::primes::is_prime;
use lattice_cover::rational::{int, ratio};
use lattice_cover::{Body, Error, GaugeValue, Rational, Result};

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Exact successive minima of balls and of the flat box.
    Minima,
    /// Exact g and h of the flat box and flat cross-polytope.
    #[value(name = "remark1")]
    FlatBodies,
    /// General-position certificates in planar balls.
    #[value(name = "halasz-ball")]
    BallGenpos,
    /// Randomized lifting trials.
    #[value(name = "lemma")]
    Lifting,
    /// Verified covers of balls and the flat cross-polytope.
    #[value(name = "theorem2-coverage")]
    Coverage,
    /// Growth exponent of the hyperplane count.
    #[value(name = "theorem3-scaling")]
    Scaling,
    /// Average hyperplane load and the double-counting identity.
    #[value(name = "corollary-sr")]
    AverageLoad,
    /// Oracle values against both constructions.
    Sandwich,
    /// Mahler and Minkowski inequalities.
    ExactLaws,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Minima,
        Suite::FlatBodies,
        Suite::BallGenpos,
        Suite::Lifting,
        Suite::Coverage,
        Suite::Scaling,
        Suite::AverageLoad,
        Suite::Sandwich,
        Suite::ExactLaws,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Minima => "minima",
            Suite::FlatBodies => "remark1",
            Suite::BallGenpos => "halasz-ball",
            Suite::Lifting => "lemma",
            Suite::Coverage => "theorem2-coverage",
            Suite::Scaling => "theorem3-scaling",
            Suite::AverageLoad => "corollary-sr",
            Suite::Sandwich => "sandwich",
            Suite::ExactLaws => "exact-laws",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: Value,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: Value) -> Check {
        Check { name: name.into(), pass, detail }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReproReport {
    pub suite: &'static str,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<Check>,
    /// Table written by `--csv`, when the suite has one.
    #[serde(skip)]
    pub csv: Option<String>,
}

pub fn run_suite(suite: Suite, seed: u64) -> anyhow::Result<ReproReport> {
    let mut csv = None;
    let checks = match suite {
        Suite::Minima => minima_checks()?,
        Suite::FlatBodies => flat_cross_checks()?,
        Suite::BallGenpos => ball_genpos_checks()?,
        Suite::Lifting => vec![lift_trials(200, seed)?],
        Suite::Coverage => coverage_checks()?,
        Suite::Scaling => {
            let (checks, table) = scaling_checks()?;
            csv = Some(table);
            checks
        }
        Suite::AverageLoad => {
            let (checks, table) = average_load_checks()?;
            csv = Some(table);
            checks
        }
        Suite::Sandwich => sandwich_checks()?,
        Suite::ExactLaws => vec![mahler_check()?, minkowski_check(seed)?],
    };
    Ok(ReproReport { suite: suite.name(), seed, pass: checks.iter().all(|c| c.pass), checks, csv })
}

fn ball(n: usize, r: i64) -> Body {
    Body::ball(n, int(r)).expect("valid ball")
}

fn gv(q: Rational) -> GaugeValue {
    GaugeValue::Rational(q)
}

fn strings(v: &[GaugeValue]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

pub fn minima_checks() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for r in [2, 4, 10] {
        for n in [2, 3, 4] {
            let got = successive_minima(&ball(n, r))?.minima;
            let pass = got == vec![gv(ratio(1, r)); n];
            checks.push(Check::new(format!("ball r={r} n={n}"), pass, json!(strings(&got))));
        }
    }
    for x in [2, 5, 10] {
        for n in [2, 3] {
            let mut expected = vec![gv(ratio(1, x)); n - 1];
            expected.push(gv(int(1)));
            for (label, body) in [("C_x", Body::flat_box(n, int(x))?), ("C_x'", Body::flat_cross(n, int(x))?)] {
                let got = successive_minima(&body)?.minima;
                checks.push(Check::new(format!("{label} x={x} n={n}"), got == expected, json!(strings(&got))));
            }
        }
    }
    Ok(checks)
}

pub fn flat_cross_checks() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let cross = Body::flat_cross(3, int(5))?;
    let g = exact_g(&cross)?;
    let h = exact_h(&cross)?;
    checks.push(Check::new("g(C_x') = 2, x=5 n=3", g.value == 2 && g.validate(&cross), json!(g)));
    checks.push(Check::new("h(C_x') = 3, x=5 n=3", h.value == 3 && h.validate(&cross), json!(h)));
    for x in [2usize, 3, 4] {
        let body = Body::flat_box(2, int(x as i64))?;
        let g = exact_g(&body)?;
        let h = exact_h(&body)?;
        checks.push(Check::new(
            format!("g(C_x) >= 2x, x={x} n=2"),
            g.value >= 2 * x && g.validate(&body),
            json!({ "g": g.value, "instance_size": g.instance_size }),
        ));
        checks.push(Check::new(
            format!("h(C_x) >= x/2, x={x} n=2"),
            2 * h.value >= x && h.validate(&body),
            json!({ "h": h.value, "instance_size": h.instance_size }),
        ));
    }
    Ok(checks)
}

pub fn ball_genpos_checks() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for r in [25i64, 50, 100] {
        let body = ball(2, r);
        let report = genpos::lower_bound(&successive_minima(&body)?)?;
        let cert = build_general_position(&body)?;
        let pts = cert.points();
        let inside = pts.iter().all(|p| p.iter().map(|&c| c * c).sum::<i64>() <= r * r);
        let general = verify_general_position(&pts, 2);
        let certified = cert.verify().is_ok();
        let size_ok = cert.len() as u64 == cert.p + 1;
        let beats = report.exceeded_by(cert.len());
        checks.push(Check::new(
            format!("ball r={r} n=2"),
            inside && general && certified && size_ok && beats,
            json!({
                "p": cert.p,
                "size": cert.len(),
                "bound": report.bound,
                "inside": inside,
                "general_position": general,
                "certificate_valid": certified,
            }),
        ));
    }
    Ok(checks)
}

fn random_body(rng: &mut ChaCha8Rng) -> Result<Body> {
    let n = rng.random_range(2..=3usize);
    let lo: i64 = if n == 2 { 12 } else { 45 };
    let big = |rng: &mut ChaCha8Rng| int(rng.random_range(lo..=3 * lo));
    match rng.random_range(0..4) {
        0 => Body::ball(n, big(rng)),
        1 => Body::axis_box((0..n).map(|_| big(rng)).collect()),
        2 => Body::cross_polytope((0..n).map(|_| big(rng) * int(n as i64)).collect()),
        _ => {
            // a sheared copy of a large ball
            let s = rng.random_range(-3..=3i64);
            let r = big(rng);
            let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
            u[0][n - 1] = s;
            Body::ball(n, r)?.transform(&u)
        }
    }
}

/// Lifts random vectors for random admissible primes; any `NoLiftFound`
/// fails the check.
pub fn lift_trials(count: usize, seed: u64) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut outside = 0usize;
    let mut trials = 0usize;
    let mut primes_used = std::collections::BTreeSet::new();
    while trials < count {
        let body = random_body(&mut rng)?;
        let profile = successive_minima(&body)?;
        if profile.last().is_none_or(|l| l.square() >= int(1)) {
            continue;
        }
        let Some(p_max) = genpos::largest_admissible_prime(&genpos::lower_bound(&profile)?) else { continue };
        let primes: Vec<u64> = (2..=p_max).filter(|&q| is_prime(q)).collect();
        let p = primes[rng.random_range(0..primes.len())];
        let n = body.dim();
        let v: Vec<i64> = (0..n).map(|_| rng.random_range(-1000..=1000)).collect();
        trials += 1;
        primes_used.insert(p);
        match genpos::lemma_lift(&body, &v, p) {
            Ok(lift) => {
                let congruent = (0..n).all(|k| lift.point[k] == lift.j as i64 * v[k] + p as i64 * lift.w[k]);
                if !congruent || !body.gauge_int(&lift.point)?.le_rational(&int(1)) {
                    outside += 1;
                }
            }
            Err(Error::NoLiftFound { .. }) => failures.push(json!({ "body": body, "v": v, "p": p })),
            Err(e) => return Err(e),
        }
    }
    Ok(Check::new(
        format!("{count} random lifts"),
        failures.is_empty() && outside == 0,
        json!({ "trials": trials, "no_lift": failures, "bad_lifts": outside, "primes": primes_used }),
    ))
}

pub fn coverage_checks() -> Result<Vec<Check>> {
    let mut bodies: Vec<(String, Body)> = Vec::new();
    for r in [2, 4, 8] {
        for n in [2, 3] {
            bodies.push((format!("ball r={r} n={n}"), ball(n, r)));
        }
    }
    bodies.push(("C_x' x=5 n=3".into(), Body::flat_cross(3, int(5))?));
    let mut checks = Vec::new();
    for (name, body) in bodies {
        let n = body.dim();
        let family = build_cover(&body, MChoice::Auto)?;
        let points = enumerate_points(&body, &int(1))?;
        let covered = points.iter().all(|u| u.iter().all(|&c| c == 0) || family.covering(u).is_some());
        let k = int(family.k() as i64);
        let f = Rational::from_integer(family.f_alpha.into());
        let threshold = f > &k * int(2) * &family.alpha + int(1);
        let floor = f >= int(32);
        let size = (family.len() as u128) <= family.size_bound();
        let reported = minima_size_bound(&successive_minima(&body)?, 1.0)?;
        checks.push(Check::new(
            name,
            covered && threshold && floor && size,
            json!({
                "n": n,
                "m": family.m,
                "alpha": family.alpha.to_string(),
                "f_alpha": family.f_alpha,
                "size": family.len(),
                "size_bound": family.size_bound(),
                "points": points.len(),
                "covered": covered,
                "min_term": reported.min_term,
                "bound_c1": format!("{:.6}", reported.value),
            }),
        ));
    }
    Ok(checks)
}

pub fn scaling_checks() -> Result<(Vec<Check>, String)> {
    let plane = census::scaling_fit(2, &[10, 20, 40, 80].map(int))?;
    let space = census::scaling_fit(3, &[4, 6, 8, 10].map(int))?;
    let last = plane.reports.last().expect("four radii");
    let fit_detail = |s: &census::ScalingReport| {
        json!({
            "slope": format!("{:.6}", s.fit.slope),
            "intercept": format!("{:.6}", s.fit.intercept),
            "h_counts": s.reports.iter().map(|c| c.h_count).collect::<Vec<_>>(),
        })
    };
    let checks = vec![
        Check::new("n=2 slope in [1.9, 2.1]", (1.9..=2.1).contains(&plane.fit.slope), fit_detail(&plane)),
        Check::new("n=3 slope in [5.5, 6.5]", (5.5..=6.5).contains(&space.fit.slope), fit_detail(&space)),
        Check::new(
            "n=2 ratio at r=80 in [0.9, 1.0]",
            (0.9..=1.0).contains(&last.ratio),
            json!({ "ratio": format!("{:.6}", last.ratio), "h_count": last.h_count }),
        ),
    ];
    let table = crate::census_csv(&plane.reports).map_err(|e| Error::Parse(e.to_string()))?;
    Ok((checks, table))
}

pub fn average_load_checks() -> Result<(Vec<Check>, String)> {
    let reports = [10, 20, 40, 80].map(|r| census::census(2, &int(r))).into_iter().collect::<Result<Vec<_>>>()?;
    let in_window = reports.iter().all(|c| c.s_r >= int(3) && c.s_r <= int(6));
    let mut checks = vec![Check::new(
        "n=2 s_r in [3, 6] for r in {10,20,40,80}",
        in_window,
        json!(reports.iter().map(|c| json!({ "r": c.r.to_string(), "s_r": c.s_r.to_string() })).collect::<Vec<_>>()),
    )];
    for (n, r_max) in [(2usize, 20i64), (3, 4)] {
        let mut sides = Vec::new();
        let mut holds = true;
        for r in 1..=r_max {
            let d = census::decomposition(n, &int(r))?;
            holds &= d.holds();
            sides.push(json!([r, d.lhs, d.rhs]));
        }
        checks.push(Check::new(format!("decomposition identity n={n} r<={r_max}"), holds, json!(sides)));
    }
    let table = crate::census_csv(&reports).map_err(|e| Error::Parse(e.to_string()))?;
    Ok((checks, table))
}

pub fn sandwich_checks() -> Result<Vec<Check>> {
    let mut bodies: Vec<(String, Body)> = Vec::new();
    for r in [1, 2, 4, 8] {
        bodies.push((format!("ball r={r} n=2"), ball(2, r)));
    }
    for r in [1, 2, 3] {
        bodies.push((format!("ball r={r} n=3"), ball(3, r)));
    }
    bodies.push(("C_x' x=5 n=3".into(), Body::flat_cross(3, int(5))?));
    for x in [2, 3, 4] {
        bodies.push((format!("C_x x={x} n=2"), Body::flat_box(2, int(x))?));
    }
    bodies.push(("ball r=25 n=2".into(), ball(2, 25)));
    let mut checks = Vec::new();
    for (name, body) in bodies {
        match check_sandwich(&body) {
            Ok(s) => checks.push(Check::new(
                name,
                s.holds && s.g.validate(&body) && s.h.validate(&body),
                json!({ "genpos": s.genpos_size, "h": s.h.value, "g": s.g.value, "cover": s.cover_size, "n": s.n }),
            )),
            Err(Error::InstanceTooLarge { what, size, cap }) => checks.push(Check::new(
                name,
                true,
                json!({ "skipped": format!("{what}: {size} > {cap}") }),
            )),
            Err(e) => return Err(e),
        }
    }
    Ok(checks)
}

/// Bodies with closed-form polars used by the exact-law suite.
pub fn fixtures() -> Result<Vec<(String, Body)>> {
    let mut out: Vec<(String, Body)> = Vec::new();
    for n in [2, 3, 4] {
        for r in [1, 2, 3] {
            out.push((format!("ball r={r} n={n}"), ball(n, r)));
        }
        out.push((format!("ball r=5/2 n={n}"), Body::ball(n, ratio(5, 2))?));
    }
    for x in [2, 5] {
        for n in [2, 3] {
            out.push((format!("C_x x={x} n={n}"), Body::flat_box(n, int(x))?));
            out.push((format!("C_x' x={x} n={n}"), Body::flat_cross(n, int(x))?));
        }
    }
    out.push(("box 3,1/2,7/3".into(), Body::axis_box(vec![int(3), ratio(1, 2), ratio(7, 3)])?));
    out.push(("cross 2,5,3/2".into(), Body::cross_polytope(vec![int(2), int(5), ratio(3, 2)])?));
    out.push(("ellipse [[1/4,1/9],[1/9,1/2]]".into(), Body::ellipsoid(vec![vec![ratio(1, 4), ratio(1, 9)], vec![ratio(1, 9), ratio(1, 2)]])?));
    out.push((
        "ellipsoid [[1/9,1/20,0],[1/20,1/4,1/30],[0,1/30,1]]".into(),
        Body::ellipsoid(vec![
            vec![ratio(1, 9), ratio(1, 20), int(0)],
            vec![ratio(1, 20), ratio(1, 4), ratio(1, 30)],
            vec![int(0), ratio(1, 30), int(1)],
        ])?,
    ));
    Ok(out)
}

pub fn mahler_check() -> Result<Check> {
    let mut rows = Vec::new();
    let mut pass = true;
    for (name, body) in fixtures()? {
        let lambda = successive_minima(&body)?.minima;
        let mu = polar_minima(&body)?.mu;
        let n = lambda.len();
        let products: Vec<Rational> = (0..n).map(|i| lambda[i].square() * mu[n - 1 - i].square()).collect();
        let ok = products.iter().all(|p| *p >= int(1));
        pass &= ok;
        rows.push(json!({
            "body": name,
            "holds": ok,
            "squared_products": products.iter().map(ToString::to_string).collect::<Vec<_>>(),
        }));
    }
    Ok(Check::new("Mahler lower bound on fixtures", pass, json!(rows)))
}

pub fn minkowski_check(seed: u64) -> Result<Check> {
    let stats = census::claim_stats(3, &int(10), &int(0), Some((500, seed)))?;
    Ok(Check::new(
        "Minkowski bound on 500 sampled v, n=3 rho=10",
        stats.samples.len() == 500 && stats.minkowski_violations.is_empty(),
        json!({
            "population": stats.population,
            "sampled": stats.samples.len(),
            "violations": stats.minkowski_violations,
            "quantiles": stats.quantiles,
        }),
    ))
}
