//! The verification suite: every check names the statement it exercises and, on
//! failure, the concrete inputs and values that break it.

use anyhow::Result;
use clap::ValueEnum;
use ghcloud::cloud::{
    center_tail_check, contraction_chain, d_lambda_probe, geometric_bound_check, link_budget, stabilizer_hedgehog,
    stabilizer_space, thread_limit, ThreadChain,
};
use ghcloud::generate::{
    grid_hedgehog, random_correspondence, random_metric, random_metric_distinct, random_tree_edges, rng_from_seed,
    MetricParams,
};
use ghcloud::gh::gh_by_enumeration;
use ghcloud::gluing::{glue_pair, glue_star, glue_tree, GluingTree};
use ghcloud::hedgehog::{
    bucket_correspondence, check_center_location, common_needle_hausdorff, compile_hedgehog, hedgehog_isometric,
    needle_proximity_probe, needle_family_check, HedgehogError, HedgehogSpec, NeedleFamilyConfig,
};
use ghcloud::rational::{abs_diff, pow};
use ghcloud::space::find_isometries;
use ghcloud::{
    distortion, gh_exact, gh_lower_bound, gh_upper_from, hausdorff, int, rat, Correspondence, FiniteMetricSpace,
    Rational,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::commands::Status;
use crate::output::csv_row;

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Oracle,
    Estimates,
    Gluing,
    Rigidity,
    Bucket,
    Center,
    Needles,
    Threads,
    Dynamics,
    Stabilizers,
}

type Outcome = std::result::Result<String, String>;

struct Check {
    name: &'static str,
    suite: Suite,
    anchor: &'static str,
    run: fn(u64) -> Outcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub anchor: &'static str,
    pub passed: bool,
    /// Summary on success, witness on failure.
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

const CHECKS: &[Check] = &[
    Check {
        name: "oracle-equivalence",
        suite: Suite::Oracle,
        anchor: "d_GH = ½ min dis R over all correspondences",
        run: oracle,
    },
    Check {
        name: "point-distance",
        suite: Suite::Estimates,
        anchor: "d_GH(Δ1, X) = ½ diam X",
        run: point_distance,
    },
    Check {
        name: "diameter-bounds",
        suite: Suite::Estimates,
        anchor: "½|diam X − diam Y| ≤ d_GH(X, Y) ≤ ½ max(diam X, diam Y)",
        run: diameter_bounds,
    },
    Check {
        name: "scaled-copies",
        suite: Suite::Estimates,
        anchor: "d_GH(λX, μX) = ½|λ − μ| diam X",
        run: scaled_copies,
    },
    Check {
        name: "equivariance",
        suite: Suite::Estimates,
        anchor: "d_GH(λX, λY) = λ d_GH(X, Y)",
        run: equivariance,
    },
    Check {
        name: "glue-pair",
        suite: Suite::Gluing,
        anchor: "gluing along R gives a metric realizing d_H = ½ dis R",
        run: glue_pairs,
    },
    Check {
        name: "glue-tree",
        suite: Suite::Gluing,
        anchor: "tree gluing realizes d_H = ½ dis R on every edge",
        run: glue_trees,
    },
    Check {
        name: "glue-star",
        suite: Suite::Gluing,
        anchor: "star gluing with dis Rₙ < 2Mₙ gives d_H(T, Tₙ) < Mₙ",
        run: glue_stars,
    },
    Check {
        name: "hedgehog-rigidity",
        suite: Suite::Rigidity,
        anchor: "hedgehogs are isometric iff their needle multisets agree; isometries fix the center",
        run: rigidity,
    },
    Check {
        name: "bucket-correspondence",
        suite: Suite::Bucket,
        anchor: "matched ε-buckets give dis ≤ 2ε",
        run: bucket,
    },
    Check {
        name: "center-location",
        suite: Suite::Center,
        anchor: "Â ⊂ U_M(B̂) with two needles ≥ 2M gives |0_A 0_B| < 4M and needles ≥ 5M covered",
        run: center_location,
    },
    Check {
        name: "needle-families",
        suite: Suite::Needles,
        anchor: "h_m is an isometry onto its image with d_H(X, h_m(Y)) = 1/m",
        run: needle_families,
    },
    Check {
        name: "common-needle",
        suite: Suite::Needles,
        anchor: "d_H(X̃_n, X̃_m) = |1/n − 1/m| on a common needle",
        run: common_needle,
    },
    Check {
        name: "thread-limits",
        suite: Suite::Threads,
        anchor: "constant chains converge to X₁; contraction by ½ over 20 layers scales diameters by 2⁻²⁰",
        run: thread_limits,
    },
    Check {
        name: "thread-budget",
        suite: Suite::Threads,
        anchor: "dis Rₙ < 1/2ⁿ gives ½ dis R′ₙ ≤ 1/2ⁿ⁻¹",
        run: thread_budget,
    },
    Check {
        name: "similarity-probe",
        suite: Suite::Dynamics,
        anchor: "d(1) = 0, d(1/λ) = d(λ)/λ, d(λμ) ≤ d(λ) + λ d(μ)",
        run: similarity_probe,
    },
    Check {
        name: "geometric-bound",
        suite: Suite::Dynamics,
        anchor: "d(λⁿ) ≤ (1 − λⁿ)/(1 − λ) d(λ) and d_GH(X_m, X_n) ≤ λⁿ d(λ)/(1 − λ)",
        run: geometric,
    },
    Check {
        name: "stabilizers",
        suite: Suite::Stabilizers,
        anchor: "St X = {1} for finite X with diam X > 0; St Δ1 contains every λ",
        run: stabilizers,
    },
];

pub fn run_suite(suite: Suite, seed: u64) -> SuiteReport {
    let checks: Vec<CheckResult> = CHECKS
        .par_iter()
        .enumerate()
        .filter(|(_, c)| suite == Suite::All || c.suite == suite)
        .map(|(i, c)| {
            let outcome = (c.run)(seed.wrapping_mul(1000).wrapping_add(i as u64));
            let (passed, detail) = match outcome {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckResult {
                name: c.name,
                anchor: c.anchor,
                passed,
                detail,
            }
        })
        .collect();
    SuiteReport { checks }
}

pub fn run(suite: Suite, seed: u64, csv: bool) -> Result<Status> {
    let report = run_suite(suite, seed);
    for c in &report.checks {
        let status = if c.passed { "pass" } else { "fail" };
        if csv {
            csv_row([c.name, status, c.anchor, &c.detail])?;
        } else {
            println!("[{status}] {}: {}", c.name, c.anchor);
            println!("       {}", c.detail);
        }
    }
    if !csv {
        let passed = report.checks.iter().filter(|c| c.passed).count();
        println!("{passed}/{} checks passed (seed {seed})", report.checks.len());
    }
    Ok(Status::from_pass(report.passed()))
}

fn space(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> FiniteMetricSpace {
    let points = rng.gen_range(lo..=hi);
    random_metric(
        rng,
        &MetricParams {
            points,
            dim: 3,
            bound: 4,
            denom: 2,
        },
    )
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn oracle(seed: u64) -> Outcome {
    let mut rng = rng_from_seed(seed);
    let mut count = 0;
    for k in 0..220 {
        let (x, y) = if k < 200 {
            (space(&mut rng, 1, 3), space(&mut rng, 1, 3))
        } else {
            (space(&mut rng, 4, 4), space(&mut rng, 4, 4))
        };
        let exact = gh_exact(&x, &y).map_err(err)?;
        let (enumerated, _) = gh_by_enumeration(&x, &y).map_err(err)?;
        if exact.value != enumerated {
            return Err(format!("pair {k}: search {} vs enumeration {enumerated}", exact.value));
        }
        count += 1;
    }
    Ok(format!("{count} pairs agree"))
}

fn point_distance(seed: u64) -> Outcome {
    let mut rng = rng_from_seed(seed);
    let point = FiniteMetricSpace::point();
    for k in 0..100 {
        let x = space(&mut rng, 1, 6);
        let d = gh_exact(&point, &x).map_err(err)?.value;
        if d != x.diameter() / 2 {
            return Err(format!("space {k}: {d} vs diameter {}", x.diameter()));
        }
    }
    Ok("100 spaces".into())
}

fn diameter_bounds(seed: u64) -> Outcome {
    let mut rng = rng_from_seed(seed);
    for k in 0..100 {
        let (x, y) = (space(&mut rng, 1, 5), space(&mut rng, 1, 5));
        let d = gh_exact(&x, &y).map_err(err)?.value;
        if d < gh_lower_bound(&x, &y) || d * 2 > x.diameter().max(y.diameter()) {
            return Err(format!("pair {k}: d = {d}, diameters {} and {}", x.diameter(), y.diameter()));
        }
    }
    Ok("100 pairs".into())
}

const SCALES: [(i128, i128); 4] = [(1, 2), (2, 3), (1, 1), (3, 2)];

fn scaled_copies(seed: u64) -> Outcome {
    let mut rng = rng_from_seed(seed);
    for k in 0..100 {
        let x = space(&mut rng, 1, 6);
        for (a, b) in SCALES {
            for (c, d) in SCALES {
                let (l, m) = (rat(a, b), rat(c, d));
                let v = gh_exact(&x.scale(&l).map_err(err)?, &x.scale(&m).map_err(err)?)
                    .map_err(err)?
                    .value;
                let expected = abs_diff(&l, &m) * x.diameter() / 2;
                if v != expected {
                    return Err(format!("space {k}, λ = {l}, μ = {m}: {v} vs {expected}"));
                }
            }
        }
    }
    Ok("100 spaces × 16 scale pairs".into())
}

fn equivariance(seed: u64) -> Outcome {
    let mut rng = rng_from_seed(seed);
    for k in 0..50 {
        let (x, y) = (space(&mut rng, 1, 5), space(&mut rng, 1, 5));
        let d = gh_exact(&x, &y).map_err(err)?.value;
        for (a, b) in SCALES {
            let l = rat(a, b);
            let v = gh_exact(&x.scale(&l).map_err(err)?, &y.scale(&l).map_err(err)?)
                .map_err(err)?
                .value;
            if v != l * d {
                return Err(format!("pair {k}, λ = {l}: {v} vs {}", l * d));
            }
        }
    }
    Ok("50 pairs × 4 scales".into())
}

fn positive_corr(rng: &mut ChaCha8Rng, x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> (Correspondence, Rational) {
    loop {
        let r = random_correspondence(rng, x.len(), y.len(), 0.15);
        let d = distortion(&r, x, y).expect("sizes match");
        if d > int(0) {
            return (r, d);
        }
    }
}

fn glue_pairs(seed: u64) -> Outcome {
    let mut rng = rng_from_seed(seed);
    for k in 0..200 {
        let (x, y) = (space(&mut rng, 1, 5), space(&mut rng, 2, 5));
        let (r, dis) = positive_corr(&mut rng, &x, &y);
        let glued = glue_pair(&x, &y, &r).map_err(|e| format!("trial {k}: {e}"))?;
        let z = glued.carrier();
        FiniteMetricSpace::validate(z.labels().to_vec(), z.matrix(), ghcloud::Mode::Strict)
            .map_err(|e| format!("trial {k}: carrier is not strict: {e}"))?;
        let dh = hausdorff(&glued.part(0), &glued.part(1)).map_err(err)?;
        if dh != dis / 2 {
            return Err(format!("trial {k}: d_H = {dh}, dis = {dis}"));
        }
    }
    Ok("200 pairs".into())
}

fn glue_trees(seed: u64) -> Outcome {
    let mut rng = rng_from_seed(seed);
    for k in 0..50 {
        let vertices: Vec<FiniteMetricSpace> = (0..4).map(|_| space(&mut rng, 2, 4)).collect();
        let edges = random_tree_edges(&mut rng, 4)
            .into_iter()
            .map(|(u, v)| {
                let (r, _) = positive_corr(&mut rng, &vertices[u], &vertices[v]);
                (u, v, r)
            })
            .collect();
        let tree = GluingTree::new(vertices, edges).map_err(err)?;
        let glued = glue_tree(&tree).map_err(|e| format!("tree {k}: {e}"))?;
        for e in tree.edges() {
            let dh = hausdorff(&glued.part(e.u), &glued.part(e.v)).map_err(err)?;
            if dh != e.weight {
                return Err(format!("tree {k}, edge {}-{}: {dh} vs {}", e.u, e.v, e.weight));
            }
        }
    }
    Ok("50 trees on 4 vertices".into())
}

fn glue_stars(seed: u64) -> Outcome {
    let mut rng = rng_from_seed(seed);
    for k in 0..50 {
        let center = space(&mut rng, 2, 4);
        let leaves: Vec<_> = (0..3)
            .map(|_| {
                let leaf = space(&mut rng, 2, 4);
                let (r, dis) = positive_corr(&mut rng, &center, &leaf);
                let m = dis / 2 + rat(rng.gen_range(1..=4), 4);
                (leaf, r, m)
            })
            .collect();
        let glued = glue_star(&center, &leaves).map_err(|e| format!("star {k}: {e}"))?;
        for (i, (_, _, m)) in leaves.iter().enumerate() {
            let dh = hausdorff(&glued.part(0), &glued.part(i + 1)).map_err(err)?;
            if dh >= *m {
                return Err(format!("star {k}, leaf {i}: d_H = {dh}, M = {m}"));
            }
        }
    }
    Ok("50 stars with 3 leaves".into())
}

fn small_specs() -> Vec<HedgehogSpec> {
    (1..81u32)
        .filter_map(|code| {
            let needles = (1..=4)
                .map(|len| (int(len), code / 3u32.pow(len as u32 - 1) % 3))
                .filter(|&(_, m)| m > 0);
            HedgehogSpec::new(needles).ok().filter(|s| s.point_count() <= 9)
        })
        .collect()
}

fn rigidity(_seed: u64) -> Outcome {
    let specs = small_specs();
    let compiled: Vec<FiniteMetricSpace> = specs.iter().map(compile_hedgehog).collect();
    for (i, a) in specs.iter().enumerate() {
        for (j, b) in specs.iter().enumerate() {
            let maps = find_isometries(&compiled[i], &compiled[j], None);
            if hedgehog_isometric(a, b) == maps.is_empty() {
                return Err(format!("specs {a:?} and {b:?}: multiset test disagrees with search"));
            }
            if a.point_count() >= 3 {
                if let Some(m) = maps.iter().find(|m| m[0] != 0) {
                    return Err(format!("spec {a:?}: isometry {m:?} moves the center"));
                }
            }
        }
    }
    Ok(format!("{} specs, all pairs", specs.len()))
}

fn bucket(seed: u64) -> Outcome {
    let mut rng = rng_from_seed(seed);
    for eps in [int(1), rat(1, 2), rat(1, 4), rat(1, 8)] {
        let a = grid_hedgehog(&eps, &int(4)).map_err(err)?;
        for _ in 0..10 {
            let b = HedgehogSpec::from_lengths(
                a.expanded_lengths()
                    .iter()
                    .map(|l| l - eps * rat(rng.gen_range(0..8), 8)),
            )
            .map_err(err)?;
            let r = bucket_correspondence(&a, &b, &eps).map_err(err)?;
            let (ha, hb) = (compile_hedgehog(&a), compile_hedgehog(&b));
            let dis = distortion(&r, &ha, &hb).map_err(err)?;
            let upper = gh_upper_from(&r, &ha, &hb).map_err(err)?;
            if dis > eps * 2 || upper > eps {
                return Err(format!("ε = {eps}, B = {b:?}: dis {dis}, upper {upper}"));
            }
        }
    }
    Ok("ε ∈ {1, 1/2, 1/4, 1/8}, 10 grids each".into())
}

fn center_location(seed: u64) -> Outcome {
    let mut rng = rng_from_seed(seed);
    let radius = int(1);
    let mut trials = 0;
    for _ in 0..10_000 {
        if trials == 100 {
            break;
        }
        let count = rng.gen_range(2..=5);
        let mut lengths: Vec<Rational> = (0..count).map(|_| rat(rng.gen_range(1..=48), 4)).collect();
        lengths[0] = rat(rng.gen_range(8..=48), 4);
        lengths[1] = rat(rng.gen_range(8..=48), 4);
        let moved: Vec<Rational> = lengths
            .iter()
            .map(|l| (l + rat(rng.gen_range(-7..=7), 8)).max(rat(1, 8)))
            .collect();
        let a = HedgehogSpec::from_lengths(lengths).map_err(err)?;
        let b = HedgehogSpec::from_lengths(moved).map_err(err)?;
        let mut pairs: Vec<(usize, usize)> = (0..a.point_count()).zip(0..b.point_count()).collect();
        if rng.gen_bool(0.3) {
            pairs.push((rng.gen_range(1..a.point_count()), rng.gen_range(1..b.point_count())));
        }
        let r = Correspondence::new(a.point_count(), b.point_count(), pairs).map_err(err)?;
        let report = match check_center_location(&a, &b, &r, &radius) {
            Ok(report) => report,
            Err(HedgehogError::PremiseViolated(_)) | Err(HedgehogError::Gluing(_)) => continue,
            Err(e) => return Err(e.to_string()),
        };
        trials += 1;
        if !report.holds() {
            return Err(format!("A = {a:?}, B = {b:?}, R = {r:?}"));
        }
        let probe = needle_proximity_probe(&a, &b, &r, &radius).map_err(err)?;
        if let Some(p) = probe.iter().find(|p| !p.holds) {
            return Err(format!("A = {a:?}, B = {b:?}: proximity {p:?}"));
        }
    }
    if trials < 100 {
        return Err(format!("only {trials} inputs met the premises"));
    }
    Ok("100 glued pairs".into())
}

fn needle_families(_seed: u64) -> Outcome {
    let cfg = NeedleFamilyConfig::new(10, 20).map_err(err)?;
    for m in 1..=10 {
        let r = needle_family_check(&cfg, m).map_err(err)?;
        if !r.preserves_distances || r.hausdorff != rat(1, m as i128) {
            return Err(format!("m = {m}: preserved {}, d_H = {}", r.preserves_distances, r.hausdorff));
        }
    }
    Ok("N = 10, K = 20, m = 1..10".into())
}

fn common_needle(_seed: u64) -> Outcome {
    for n in 1..=10usize {
        for m in 1..=10usize {
            let d = common_needle_hausdorff(n, m).map_err(err)?;
            let expected = abs_diff(&rat(1, n as i128), &rat(1, m as i128));
            if d != expected {
                return Err(format!("n = {n}, m = {m}: {d} vs {expected}"));
            }
        }
    }
    Ok("n, m ≤ 10".into())
}

fn thread_limits(seed: u64) -> Outcome {
    let mut rng = rng_from_seed(seed);
    for k in 0..20 {
        let x = space(&mut rng, 1, 5);
        let chain =
            ThreadChain::new(vec![x.clone(); 5], vec![Correspondence::identity(x.len()); 4]).map_err(err)?;
        let lim = thread_limit(&chain).map_err(err)?;
        let d = gh_exact(&lim.approx, &x).map_err(err)?.value;
        if d != int(0) {
            return Err(format!("constant chain {k}: distance {d}"));
        }
        let lim = thread_limit(&contraction_chain(&x, &rat(1, 2), 20).map_err(err)?).map_err(err)?;
        if lim.approx.diameter() != x.diameter() * pow(&rat(1, 2), 20) {
            return Err(format!("contraction chain {k}: diameter {}", lim.approx.diameter()));
        }
    }
    Ok("20 constant and 20 contraction chains".into())
}

/// Every layer halves the allowed move; a point may split in two.
fn budget_chain(rng: &mut ChaCha8Rng, depth: usize) -> std::result::Result<ThreadChain, String> {
    let denom: i64 = 1 << (depth + 3);
    let to_space = |pts: &[(i64, i64)]| {
        let matrix = pts
            .iter()
            .map(|p| {
                pts.iter()
                    .map(|q| rat((p.0 - q.0).abs().max((p.1 - q.1).abs()) as i128, denom as i128))
                    .collect()
            })
            .collect();
        FiniteMetricSpace::from_matrix(matrix, ghcloud::Mode::Strict).map_err(err)
    };
    let mut pts: Vec<(i64, i64)> = Vec::new();
    while pts.len() < 3 {
        let p = (rng.gen_range(0..=4 * denom), rng.gen_range(0..=4 * denom));
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    let mut spaces = vec![to_space(&pts)?];
    let mut links = Vec::new();
    for n in 1..depth {
        let step = (denom >> (n + 2)) - 1;
        let mut next: Vec<(i64, i64)> = Vec::new();
        let mut pairs = Vec::new();
        for (i, p) in pts.iter().enumerate() {
            let children = if next.len() < 10 && rng.gen_bool(0.25) { 2 } else { 1 };
            while pairs.iter().filter(|&&(a, _)| a == i).count() < children {
                let q = (p.0 + rng.gen_range(-step..=step), p.1 + rng.gen_range(-step..=step));
                if !next.contains(&q) {
                    pairs.push((i, next.len()));
                    next.push(q);
                }
            }
        }
        links.push(Correspondence::new(pts.len(), next.len(), pairs).map_err(err)?);
        pts = next;
        spaces.push(to_space(&pts)?);
    }
    ThreadChain::with_budget(spaces, links).map_err(err)
}

fn thread_budget(seed: u64) -> Outcome {
    let mut rng = rng_from_seed(seed);
    for k in 0..20 {
        let chain = budget_chain(&mut rng, 8)?;
        let lim = thread_limit(&chain).map_err(err)?;
        for (i, c) in lim.certificates.iter().enumerate() {
            if *c > link_budget(i) {
                return Err(format!("chain {k}, layer {}: certificate {c}", i + 1));
            }
        }
    }
    Ok("20 chains of depth 8".into())
}

fn lambda_grid() -> Vec<Rational> {
    [(1, 3), (1, 2), (2, 3), (3, 4), (1, 1), (4, 3), (3, 2), (2, 1), (3, 1)]
        .iter()
        .map(|&(p, q)| rat(p, q))
        .collect()
}

fn similarity_probe(seed: u64) -> Outcome {
    let mut rng = rng_from_seed(seed);
    let grid = lambda_grid();
    let mut all = grid.clone();
    for l in &grid {
        all.extend(grid.iter().map(|m| l * m));
    }
    for k in 0..20 {
        let x = space(&mut rng, 2, 5);
        let probe = d_lambda_probe(&x, &all).map_err(err)?;
        let d = |l: &Rational| probe.get(l).expect("sampled");
        if d(&int(1)) != int(0) {
            return Err(format!("space {k}: d(1) = {}", d(&int(1))));
        }
        for l in &grid {
            if d(&l.recip()) != d(l) / l {
                return Err(format!("space {k}, λ = {l}: inversion fails"));
            }
            for m in &grid {
                if d(&(l * m)) > d(l) + l * d(m) {
                    return Err(format!("space {k}, λ = {l}, μ = {m}: d(λμ) = {}", d(&(l * m))));
                }
            }
        }
    }
    Ok("9 λ × 20 spaces".into())
}

fn geometric(seed: u64) -> Outcome {
    let mut rng = rng_from_seed(seed);
    for k in 0..20 {
        let x = space(&mut rng, 2, 5);
        for l in lambda_grid().iter().filter(|l| **l < int(1)) {
            let report = geometric_bound_check(&x, l, 6).map_err(err)?;
            if let Some(row) = report.rows.iter().find(|r| !r.holds) {
                return Err(format!("space {k}, λ = {l}: {row:?}"));
            }
            if let Some(row) = center_tail_check(&x, l, 5).map_err(err)?.first() {
                return Err(format!("space {k}, λ = {l}: {row:?}"));
            }
        }
    }
    Ok("4 contractions × 20 spaces".into())
}

fn stabilizers(seed: u64) -> Outcome {
    let mut rng = rng_from_seed(seed);
    let samples = lambda_grid();
    for k in 0..50 {
        let n = rng.gen_range(2..=5);
        let x = random_metric_distinct(&mut rng, n);
        let r = stabilizer_space(&x, &samples).map_err(err)?;
        if r.stabilizer != vec![int(1)] {
            return Err(format!("space {k}: {:?}", r.stabilizer));
        }
    }
    for spec in small_specs() {
        let r = stabilizer_hedgehog(&spec, &samples);
        if r.stabilizer != vec![int(1)] {
            return Err(format!("{spec:?}: {:?}", r.stabilizer));
        }
    }
    let point = stabilizer_space(&FiniteMetricSpace::point(), &samples).map_err(err)?;
    if point.zero_distance != samples {
        return Err(format!("one-point space: {:?}", point.zero_distance));
    }
    Ok("50 spaces, all small hedgehogs, the one-point space".into())
}
