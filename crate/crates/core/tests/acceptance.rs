//! Acceptance suite: one PASS/FAIL line per criterion, exact comparisons only.
//! Runs with its own harness so the lines always print; exits nonzero on any failure.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ghcloud::cloud::{
    center_tail_check, contraction_chain, d_lambda_probe, geometric_bound_check, link_budget, stabilizer_hedgehog,
    stabilizer_space, thread_limit, ThreadChain,
};
use ghcloud::generate::{random_correspondence, random_metric, random_metric_distinct, rng_from_seed, MetricParams};
use ghcloud::gluing::{glue_pair, glue_star, glue_tree, GluingTree};
use ghcloud::hedgehog::{
    bucket_correspondence, check_center_location, common_needle_hausdorff, compile_hedgehog, grid_hedgehog,
    hedgehog_isometric, needle_proximity_probe, needle_family_check, HedgehogError, HedgehogSpec, NeedleFamilyConfig,
};
use ghcloud::rational::{abs_diff, pow};
use ghcloud::{
    distortion, gh_exact, gh_lower_bound, gh_upper_from, hausdorff, int, rat, Correspondence, FiniteMetricSpace,
    Mode, Rational,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn fail<T>(msg: impl Into<String>) -> Result<T, String> {
    Err(msg.into())
}

fn small_params(points: usize) -> MetricParams {
    MetricParams {
        points,
        dim: 3,
        bound: 4,
        denom: 2,
    }
}

fn random_space(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> FiniteMetricSpace {
    let n = rng.gen_range(lo..=hi);
    random_metric(rng, &small_params(n))
}

/// `½·min dis` over all relations on `n×m` that cover both sides.
fn brute_force_gh(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Rational {
    let (n, m) = (x.len(), y.len());
    let mut best: Option<Rational> = None;
    for mask in 1u64..(1u64 << (n * m)) {
        let pairs: Vec<(usize, usize)> = (0..n * m)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| (b / m, b % m))
            .collect();
        let left: BTreeSet<usize> = pairs.iter().map(|p| p.0).collect();
        let right: BTreeSet<usize> = pairs.iter().map(|p| p.1).collect();
        if left.len() < n || right.len() < m {
            continue;
        }
        let mut worst = int(0);
        for &(a, b) in &pairs {
            for &(c, d) in &pairs {
                let gap = abs_diff(x.dist(a, c), y.dist(b, d));
                if gap > worst {
                    worst = gap;
                }
            }
        }
        if best.is_none_or(|b| worst < b) {
            best = Some(worst);
        }
    }
    best.expect("the full relation covers both sides") / 2
}

/// Every distance-preserving bijection, by trying all permutations.
fn brute_force_isometries(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if x.len() != y.len() {
        return out;
    }
    let n = x.len();
    fn extend(
        x: &FiniteMetricSpace,
        y: &FiniteMetricSpace,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let i = map.len();
        if i == x.len() {
            out.push(map.clone());
            return;
        }
        for j in 0..y.len() {
            if used[j] || (0..i).any(|k| x.dist(k, i) != y.dist(map[k], j)) {
                continue;
            }
            used[j] = true;
            map.push(j);
            extend(x, y, map, used, out);
            map.pop();
            used[j] = false;
        }
    }
    extend(x, y, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn criterion_1() -> Outcome {
    let mut rng = rng_from_seed(101);
    let mut pairs = Vec::new();
    for _ in 0..200 {
        let x = random_space(&mut rng, 1, 3);
        let y = random_space(&mut rng, 1, 3);
        pairs.push((x, y));
    }
    for _ in 0..20 {
        let x = random_metric(&mut rng, &small_params(4));
        let y = random_metric(&mut rng, &small_params(4));
        pairs.push((x, y));
    }
    for (k, (x, y)) in pairs.iter().enumerate() {
        let solver = gh_exact(x, y).map_err(|e| e.to_string())?;
        let oracle = brute_force_gh(x, y);
        if solver.value != oracle {
            return fail(format!("pair {k}: solver {} vs enumeration {oracle}", solver.value));
        }
        if distortion(&solver.witness, x, y).map_err(|e| e.to_string())? != solver.value * 2 {
            return fail(format!("pair {k}: witness distortion is not twice the value"));
        }
    }
    Ok(format!("{} pairs agree with full enumeration", pairs.len()))
}

fn criterion_2() -> Outcome {
    let mut rng = rng_from_seed(202);
    let spaces: Vec<FiniteMetricSpace> = (0..100).map(|_| random_space(&mut rng, 1, 6)).collect();
    let grid = [rat(1, 2), rat(2, 3), int(1), rat(3, 2)];
    let point = FiniteMetricSpace::point();
    for (k, x) in spaces.iter().enumerate() {
        let d = gh_exact(&point, x).map_err(|e| e.to_string())?.value;
        if d != x.diameter() / 2 {
            return fail(format!("space {k}: d(point, X) = {d}, half diameter {}", x.diameter() / 2));
        }
        for l in &grid {
            for m in &grid {
                let a = x.scale(l).map_err(|e| e.to_string())?;
                let b = x.scale(m).map_err(|e| e.to_string())?;
                let d = gh_exact(&a, &b).map_err(|e| e.to_string())?.value;
                let expected = abs_diff(l, m) * x.diameter() / 2;
                if d != expected {
                    return fail(format!("space {k}, λ={l}, μ={m}: {d} vs {expected}"));
                }
            }
        }
    }
    for k in 0..50 {
        let (x, y) = (&spaces[2 * k], &spaces[2 * k + 1]);
        if x.len().max(y.len()) > 5 && x.len() * y.len() > 25 {
            continue;
        }
        let d = gh_exact(x, y).map_err(|e| e.to_string())?.value;
        if d * 2 > x.diameter().max(y.diameter()) {
            return fail(format!("pair {k}: 2·d = {} exceeds the larger diameter", d * 2));
        }
        if d < gh_lower_bound(x, y) {
            return fail(format!("pair {k}: {d} below the lower bound {}", gh_lower_bound(x, y)));
        }
        for l in &grid {
            let scaled = gh_exact(&x.scale(l).unwrap(), &y.scale(l).unwrap())
                .map_err(|e| e.to_string())?
                .value;
            if scaled != l * d {
                return fail(format!("pair {k}, λ={l}: d(λX, λY) = {scaled}, λ·d = {}", l * d));
            }
        }
    }
    Ok("point distance, diameter bound, lower bound, scaled copies and equivariance exact".into())
}

fn random_positive_corr(
    rng: &mut ChaCha8Rng,
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
) -> (Correspondence, Rational) {
    loop {
        let r = random_correspondence(rng, x.len(), y.len(), 0.15);
        let d = distortion(&r, x, y).unwrap();
        if d > int(0) {
            return (r, d);
        }
    }
}

fn criterion_3() -> Outcome {
    let mut rng = rng_from_seed(303);
    for k in 0..200 {
        let x = random_space(&mut rng, 1, 5);
        let y = random_space(&mut rng, 2, 5);
        let (r, dis) = random_positive_corr(&mut rng, &x, &y);
        let glued = glue_pair(&x, &y, &r).map_err(|e| format!("trial {k}: {e}"))?;
        let z = glued.carrier();
        FiniteMetricSpace::validate(z.labels().to_vec(), z.matrix(), Mode::Strict)
            .map_err(|e| format!("trial {k}: glued space invalid: {e}"))?;
        let dh = hausdorff(&glued.part(0), &glued.part(1)).unwrap();
        if dh != dis / 2 {
            return fail(format!("trial {k}: d_H = {dh}, half distortion {}", dis / 2));
        }
    }
    for k in 0..50 {
        let vertices: Vec<FiniteMetricSpace> = (0..4).map(|_| random_space(&mut rng, 2, 4)).collect();
        let mut edges = Vec::new();
        for v in 1..4 {
            let u = rng.gen_range(0..v);
            let (r, _) = random_positive_corr(&mut rng, &vertices[u], &vertices[v]);
            edges.push((u, v, r));
        }
        let tree = GluingTree::new(vertices, edges).map_err(|e| format!("tree {k}: {e}"))?;
        let glued = glue_tree(&tree).map_err(|e| format!("tree {k}: {e}"))?;
        for e in tree.edges() {
            let dh = hausdorff(&glued.part(e.u), &glued.part(e.v)).unwrap();
            if dh != e.weight {
                return fail(format!("tree {k}, edge {}-{}: d_H = {dh}, weight {}", e.u, e.v, e.weight));
            }
        }
    }
    for k in 0..50 {
        let center = random_space(&mut rng, 2, 4);
        let leaves: Vec<(FiniteMetricSpace, Correspondence, Rational)> = (0..3)
            .map(|_| {
                let leaf = random_space(&mut rng, 2, 4);
                let (r, dis) = random_positive_corr(&mut rng, &center, &leaf);
                let m = dis / 2 + rat(rng.gen_range(1..=4), 4);
                (leaf, r, m)
            })
            .collect();
        let glued = glue_star(&center, &leaves).map_err(|e| format!("star {k}: {e}"))?;
        for (i, (_, _, m)) in leaves.iter().enumerate() {
            let dh = hausdorff(&glued.part(0), &glued.part(i + 1)).unwrap();
            if dh >= *m {
                return fail(format!("star {k}, leaf {i}: d_H = {dh} not below M = {m}"));
            }
        }
    }
    Ok("200 pairs, 50 four-vertex trees, 50 stars exact".into())
}

fn all_small_specs() -> Vec<HedgehogSpec> {
    let mut specs = Vec::new();
    for code in 1..81u32 {
        let mut c = code;
        let mut needles = Vec::new();
        for len in 1..=4 {
            let mult = c % 3;
            c /= 3;
            if mult > 0 {
                needles.push((int(len), mult));
            }
        }
        let spec = HedgehogSpec::new(needles).unwrap();
        if spec.point_count() <= 9 {
            specs.push(spec);
        }
    }
    specs
}

fn criterion_4() -> Outcome {
    let specs = all_small_specs();
    let compiled: Vec<FiniteMetricSpace> = specs.iter().map(compile_hedgehog).collect();
    let mut isometric_pairs = 0;
    for (i, a) in specs.iter().enumerate() {
        for (j, b) in specs.iter().enumerate() {
            let found = brute_force_isometries(&compiled[i], &compiled[j]);
            if hedgehog_isometric(a, b) != !found.is_empty() {
                return fail(format!("specs {i}, {j}: multiset test disagrees with exhaustive search"));
            }
            if found.is_empty() {
                continue;
            }
            isometric_pairs += 1;
            // with a single needle point the two points may swap
            if a.point_count() >= 3 {
                if let Some(map) = found.iter().find(|m| m[0] != 0) {
                    return fail(format!("specs {i}, {j}: isometry {map:?} moves the center"));
                }
            }
        }
    }
    Ok(format!(
        "{} specs, {} pairs compared, {isometric_pairs} isometric",
        specs.len(),
        specs.len() * specs.len()
    ))
}

fn criterion_5() -> Outcome {
    let mut rng = rng_from_seed(505);
    for eps in [int(1), rat(1, 2), rat(1, 4), rat(1, 8)] {
        let a = grid_hedgehog(&eps, &int(4)).unwrap();
        for trial in 0..10 {
            // one point in every bucket ((k−1)ε, kε]
            let b = HedgehogSpec::from_lengths(
                a.expanded_lengths()
                    .iter()
                    .map(|l| l - eps * rat(rng.gen_range(0..8), 8)),
            )
            .unwrap();
            let r = bucket_correspondence(&a, &b, &eps).map_err(|e| e.to_string())?;
            let (ha, hb) = (compile_hedgehog(&a), compile_hedgehog(&b));
            let dis = distortion(&r, &ha, &hb).unwrap();
            let upper = gh_upper_from(&r, &ha, &hb).unwrap();
            if dis > eps * 2 || upper > eps {
                return fail(format!("ε={eps}, trial {trial}: dis = {dis}, upper = {upper}"));
            }
        }
    }
    Ok("dis ≤ 2ε and upper bound ≤ ε for ε ∈ {1, 1/2, 1/4, 1/8}".into())
}

fn criterion_6() -> Outcome {
    let mut rng = rng_from_seed(606);
    let radius = int(1);
    let (mut trials, mut attempts, mut far_points) = (0, 0, 0);
    while trials < 100 {
        attempts += 1;
        if attempts > 10_000 {
            return fail(format!("only {trials} premise-satisfying pairs in {attempts} attempts"));
        }
        let count = rng.gen_range(2..=5);
        let mut lengths: Vec<Rational> = (0..count).map(|_| rat(rng.gen_range(1..=48), 4)).collect();
        lengths[0] = rat(rng.gen_range(8..=48), 4);
        lengths[1] = rat(rng.gen_range(8..=48), 4);
        let moved: Vec<Rational> = lengths
            .iter()
            .map(|l| (l + rat(rng.gen_range(-7..=7), 8)).max(rat(1, 8)))
            .collect();
        let a = HedgehogSpec::from_lengths(lengths.clone()).unwrap();
        let b = HedgehogSpec::from_lengths(moved.clone()).unwrap();
        // pair sorted lengths, then a few random extra pairs
        let mut order_a: Vec<usize> = (1..a.point_count()).collect();
        let mut order_b: Vec<usize> = (1..b.point_count()).collect();
        order_a.sort();
        order_b.sort();
        let mut pairs = vec![(0, 0)];
        pairs.extend(order_a.iter().copied().zip(order_b.iter().copied()));
        for _ in 0..rng.gen_range(0..2) {
            pairs.push((*order_a.choose(&mut rng).unwrap(), *order_b.choose(&mut rng).unwrap()));
        }
        let r = Correspondence::new(a.point_count(), b.point_count(), pairs).unwrap();
        let report = match check_center_location(&a, &b, &r, &radius) {
            Ok(report) => report,
            Err(HedgehogError::PremiseViolated(_)) | Err(HedgehogError::Gluing(_)) => continue,
            Err(e) => return fail(e.to_string()),
        };
        trials += 1;
        if !report.holds() {
            return fail(format!("A = {lengths:?}, B = {moved:?}: {report:?}"));
        }
        let probe = needle_proximity_probe(&a, &b, &r, &radius).map_err(|e| format!("probe: {e}"))?;
        far_points += probe.len();
        if let Some(bad) = probe.iter().find(|p| !p.holds) {
            return fail(format!("A = {lengths:?}, B = {moved:?}: probe {bad:?}"));
        }
    }
    Ok(format!("100/100 glued pairs, {far_points} far points probed"))
}

fn criterion_7() -> Outcome {
    let cfg = NeedleFamilyConfig::new(10, 20).map_err(|e| e.to_string())?;
    for m in 1..=10 {
        let report = needle_family_check(&cfg, m).map_err(|e| e.to_string())?;
        if !report.preserves_distances {
            return fail(format!("h_{m} changes a distance"));
        }
        if report.hausdorff != rat(1, m as i128) {
            return fail(format!("h_{m}: d_H = {}", report.hausdorff));
        }
    }
    for n in 1..=10 {
        for m in 1..=10 {
            let d = common_needle_hausdorff(n, m).map_err(|e| e.to_string())?;
            let expected = abs_diff(&rat(1, n as i128), &rat(1, m as i128));
            if d != expected {
                return fail(format!("needles {n}, {m}: {d} vs {expected}"));
            }
        }
    }
    Ok("h_m isometric with d_H = 1/m for m ≤ 10; common-needle gaps exact".into())
}

/// Each layer moves every point by less than `1/2^(n+2)` in the sup norm and may
/// split a point in two, so link `n` has distortion below `1/2^n`.
fn budget_chain(rng: &mut ChaCha8Rng, depth: usize) -> ThreadChain {
    let denom: i64 = 1 << (depth + 3);
    let dim = 2;
    let mut coords: Vec<Vec<i64>> = Vec::new();
    while coords.len() < 3 {
        let p: Vec<i64> = (0..dim).map(|_| rng.gen_range(0..=4 * denom)).collect();
        if !coords.contains(&p) {
            coords.push(p);
        }
    }
    let to_space = |coords: &[Vec<i64>]| {
        let matrix = coords
            .iter()
            .map(|p| {
                coords
                    .iter()
                    .map(|q| {
                        let d = p.iter().zip(q).map(|(a, b)| (a - b).abs()).max().unwrap();
                        rat(d as i128, denom as i128)
                    })
                    .collect()
            })
            .collect();
        FiniteMetricSpace::from_matrix(matrix, Mode::Strict).unwrap()
    };
    let mut spaces = vec![to_space(&coords)];
    let mut links = Vec::new();
    for n in 1..depth {
        let step = denom >> (n + 2);
        let mut next: Vec<Vec<i64>> = Vec::new();
        let mut pairs = Vec::new();
        for (i, p) in coords.iter().enumerate() {
            let children = if next.len() < 10 && rng.gen_bool(0.25) { 2 } else { 1 };
            let mut made = 0;
            while made < children {
                let q: Vec<i64> = p.iter().map(|c| c + rng.gen_range(-(step - 1)..=step - 1)).collect();
                if next.contains(&q) {
                    continue;
                }
                pairs.push((i, next.len()));
                next.push(q);
                made += 1;
            }
        }
        links.push(Correspondence::new(coords.len(), next.len(), pairs).unwrap());
        coords = next;
        spaces.push(to_space(&coords));
    }
    ThreadChain::with_budget(spaces, links).expect("moves stay inside the budget")
}

fn criterion_8() -> Outcome {
    let mut rng = rng_from_seed(808);
    for k in 0..20 {
        let x = random_space(&mut rng, 1, 5);
        let chain = ThreadChain::new(vec![x.clone(); 5], vec![Correspondence::identity(x.len()); 4]).unwrap();
        let lim = thread_limit(&chain).map_err(|e| e.to_string())?;
        let d = gh_exact(&lim.approx, &x).map_err(|e| e.to_string())?.value;
        if d != int(0) {
            return fail(format!("constant chain {k}: limit at distance {d}"));
        }

        let chain = contraction_chain(&x, &rat(1, 2), 20).map_err(|e| e.to_string())?;
        let lim = thread_limit(&chain).map_err(|e| e.to_string())?;
        let expected = x.diameter() * pow(&rat(1, 2), 20);
        if lim.approx.diameter() != expected {
            return fail(format!("contraction chain {k}: diameter {} vs {expected}", lim.approx.diameter()));
        }
    }
    for k in 0..20 {
        let chain = budget_chain(&mut rng, 8);
        let lim = thread_limit(&chain).map_err(|e| e.to_string())?;
        for (i, c) in lim.certificates.iter().enumerate() {
            // layer n = i + 1 must satisfy c ≤ 1/2^(n−1)
            if *c > link_budget(i) {
                return fail(format!("budget chain {k}, layer {}: certificate {c}", i + 1));
            }
        }
    }
    Ok("constant, contraction (depth 20) and 20 budget chains exact".into())
}

fn lambda_grid() -> Vec<Rational> {
    vec![
        rat(1, 3),
        rat(1, 2),
        rat(2, 3),
        rat(3, 4),
        int(1),
        rat(4, 3),
        rat(3, 2),
        int(2),
        int(3),
    ]
}

fn criterion_9() -> Outcome {
    let mut rng = rng_from_seed(909);
    let grid = lambda_grid();
    let mut all: Vec<Rational> = grid.clone();
    for l in &grid {
        for m in &grid {
            all.push(l * m);
        }
    }
    for k in 0..20 {
        let x = random_space(&mut rng, 2, 5);
        let probe = d_lambda_probe(&x, &all).map_err(|e| e.to_string())?;
        let d = |l: &Rational| probe.get(l).expect("sampled");
        if d(&int(1)) != int(0) {
            return fail(format!("space {k}: d(1) = {}", d(&int(1))));
        }
        for l in &grid {
            if d(&l.recip()) != d(l) / l {
                return fail(format!("space {k}, λ={l}: d(1/λ) = {}, d(λ)/λ = {}", d(&l.recip()), d(l) / l));
            }
            for m in &grid {
                if d(&(l * m)) > d(l) + l * d(m) {
                    return fail(format!("space {k}, λ={l}, μ={m}: d(λμ) = {}", d(&(l * m))));
                }
            }
            if l < &int(1) {
                let report = geometric_bound_check(&x, l, 6).map_err(|e| e.to_string())?;
                if !report.holds() {
                    return fail(format!("space {k}, λ={l}: {report:?}"));
                }
                let bad = center_tail_check(&x, l, 5).map_err(|e| e.to_string())?;
                if let Some(row) = bad.first() {
                    return fail(format!("space {k}, λ={l}: {row:?}"));
                }
            }
        }
    }
    Ok("d(1)=0, inversion, submultiplicativity, geometric bound and tail bound on 9 λ × 20 spaces".into())
}

fn criterion_10() -> Outcome {
    let mut rng = rng_from_seed(1010);
    let samples = lambda_grid();
    for k in 0..50 {
        let n = rng.gen_range(2..=5);
        let x = random_metric_distinct(&mut rng, n);
        let report = stabilizer_space(&x, &samples).map_err(|e| e.to_string())?;
        if report.stabilizer != vec![int(1)] {
            return fail(format!("space {k}: stabilizer {:?}", report.stabilizer));
        }
    }
    for spec in all_small_specs() {
        let report = stabilizer_hedgehog(&spec, &samples);
        if report.stabilizer != vec![int(1)] {
            return fail(format!("{spec:?}: stabilizer {:?}", report.stabilizer));
        }
    }
    let point = stabilizer_space(&FiniteMetricSpace::point(), &samples).map_err(|e| e.to_string())?;
    if point.zero_distance != samples || point.stabilizer.len() != point.candidates.len() {
        return fail(format!("one-point space: {point:?}"));
    }
    Ok("{1} for 50 spaces and 80 hedgehogs; the one-point space accepts every sample".into())
}

/// Name, check and time limit in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", criterion_1, 60),
        ("estimate identities", criterion_2, 120),
        ("gluing", criterion_3, 60),
        ("hedgehog rigidity", criterion_4, 120),
        ("bucket construction", criterion_5, 10),
        ("center location", criterion_6, 60),
        ("needle families", criterion_7, 10),
        ("threads", criterion_8, 60),
        ("similarity dynamics", criterion_9, 120),
        ("stabilizers", criterion_10, 10),
    ];
    let mut failures = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > Duration::from_secs(*limit) => {
                Err(format!("{msg}, but took {elapsed:.1?} (limit {limit}s)"))
            }
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS criterion {:>2} {name}: {msg} [{elapsed:.2?}]", i + 1),
            Err(msg) => {
                failures += 1;
                println!("FAIL criterion {:>2} {name}: {msg} [{elapsed:.2?}]", i + 1)
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
