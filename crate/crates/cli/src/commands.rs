use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use ghcloud::cloud::{
    center_iterate, center_tail_check, d_lambda_probe, geometric_bound_check, link_budget, stabilizer_hedgehog,
    stabilizer_space, thread_limit, StabilizerReport,
};
use ghcloud::generate::{dense_spec, grid_hedgehog, random_metric, rng_from_seed, MetricParams};
use ghcloud::gh::gh_by_enumeration;
use ghcloud::gluing::{glue_tree, GluedSpace, GluingTree};
use ghcloud::hedgehog::{
    bucket_correspondence, check_center_location, compile_hedgehog, hedgehog_isometric, needle_family_check,
    needle_embedding, needle_families, HedgehogError, NeedleFamilyConfig,
};
use ghcloud::io::{parse_msp, write_correspondence, write_hedgehog, write_msp, IoError};
use ghcloud::{
    distortion, gh_exact_with, gh_upper_from, hausdorff, int, rat, GhOptions, MetricError, Parallelism, Rational,
};

use crate::files::{load_chain, load_correspondence, load_hedgehog, load_space, load_tree};
use crate::output::{csv_row, emit, write_file, yes_no};
use crate::{Command, GenerateArgs, GenerateKind, GhArgs, GlueArgs, HedgehogCommand, NeedlesArgs};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

pub fn run(command: Command, csv: bool) -> Result<Status> {
    match command {
        Command::Validate { space } => validate(&space, csv),
        Command::Gh(args) => gh(&args, csv),
        Command::Glue(args) => glue(&args, csv),
        Command::Hedgehog(cmd) => hedgehog(cmd, csv),
        Command::Needles(args) => needles(&args, csv),
        Command::Limit { chain, output } => limit(&chain, output.as_deref(), csv),
        Command::Probe { space, lambdas } => probe(&space, &lambdas, csv),
        Command::Center {
            space,
            lambda,
            n,
            geometric,
            output,
        } => center(&space, &lambda, n, geometric, output.as_deref(), csv),
        Command::Stab {
            input,
            hedgehog,
            samples,
        } => stab(&input, hedgehog, &samples, csv),
        Command::Generate(args) => generate(&args),
        Command::Verify { suite, seed } => crate::verify::run(suite, seed, csv),
    }
}

fn validate(path: &Path, csv: bool) -> Result<Status> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    match parse_msp(&text) {
        Ok(x) => {
            if csv {
                csv_row(["true", &x.len().to_string(), &x.diameter().to_string(), "0"])?;
            } else {
                println!(
                    "valid {} metric space: {} points, diameter {}",
                    x.mode(),
                    x.len(),
                    x.diameter()
                );
            }
            Ok(Status::Pass)
        }
        Err(IoError::Metric(MetricError::Invalid(violations))) => {
            if csv {
                csv_row(["false", "", "", &violations.len().to_string()])?;
            } else {
                println!("{}: {} violation(s)", path.display(), violations.len());
                for v in &violations {
                    println!("  {v}");
                }
            }
            Ok(Status::Fail)
        }
        Err(e) => Err(e).with_context(|| format!("{}", path.display())),
    }
}

fn gh(args: &GhArgs, csv: bool) -> Result<Status> {
    let x = load_space(&args.x)?;
    let y = load_space(&args.y)?;
    let options = GhOptions {
        cap: args.cap,
        parallelism: if args.sequential {
            Parallelism::Sequential
        } else {
            Parallelism::Auto
        },
    };
    let result = gh_exact_with(&x, &y, &options)?;
    if let Some(path) = &args.witness {
        write_file(path, &write_correspondence(&result.witness))?;
    }
    let oracle = if args.enumerate_oracle {
        Some(gh_by_enumeration(&x, &y)?.0)
    } else {
        None
    };
    let agrees = oracle.is_none_or(|o| o == result.value);
    if csv {
        let mut row = vec![
            result.value.to_string(),
            result.lower_bound.to_string(),
            result.nodes_explored.to_string(),
        ];
        if let Some(o) = oracle {
            row.push(o.to_string());
        }
        csv_row(row)?;
    } else {
        println!("d_GH = {}", result.value);
        let pairs: Vec<String> = result.witness.pairs().iter().map(|(i, j)| format!("({i},{j})")).collect();
        println!("witness = {}", pairs.join(" "));
        println!("lower bound = {}", result.lower_bound);
        println!("nodes explored = {}", result.nodes_explored);
        if let Some(o) = oracle {
            println!(
                "enumeration oracle = {o} ({})",
                if agrees { "agrees" } else { "DISAGREES" }
            );
        }
    }
    Ok(Status::from_pass(agrees))
}

fn provenance(glued: &GluedSpace) -> String {
    let z = glued.carrier();
    let mut out = String::new();
    for (i, (v, local)) in glued.provenance().iter().enumerate() {
        let _ = writeln!(out, "{i} {v} {local} {}", z.label(i));
    }
    out
}

fn glue(args: &GlueArgs, csv: bool) -> Result<Status> {
    let tree = match (&args.source.pair, &args.source.tree) {
        (Some(files), None) => {
            let x = load_space(&files[0])?;
            let y = load_space(&files[1])?;
            let r = load_correspondence(&files[2], &x, &y)?;
            GluingTree::new(vec![x, y], vec![(0, 1, r)])?
        }
        (None, Some(file)) => load_tree(file)?,
        _ => bail!("give exactly one of --pair and --tree"),
    };
    let glued = glue_tree(&tree)?;

    let mut all = true;
    let mut report = String::new();
    for e in tree.edges() {
        let dh = hausdorff(&glued.part(e.u), &glued.part(e.v))?;
        let ok = dh == e.weight;
        all &= ok;
        if csv {
            csv_row([
                e.u.to_string(),
                e.v.to_string(),
                dh.to_string(),
                e.weight.to_string(),
                ok.to_string(),
            ])?;
        } else {
            let _ = writeln!(
                report,
                "# edge {}-{}: hausdorff {dh}, half distortion {} ({})",
                e.u,
                e.v,
                e.weight,
                if ok { "equal" } else { "DIFFERENT" }
            );
        }
    }

    let carrier = write_msp(glued.carrier());
    let prov = provenance(&glued);
    match &args.output {
        Some(path) => {
            write_file(path, &carrier)?;
            let mut side = path.clone().into_os_string();
            side.push(".prov");
            write_file(&PathBuf::from(side), &prov)?;
            if !csv {
                print!("{report}");
            }
        }
        None if !csv => {
            print!("{carrier}");
            println!("# provenance: index vertex local label");
            for line in prov.lines() {
                println!("# {line}");
            }
            print!("{report}");
        }
        None => {}
    }
    Ok(Status::from_pass(all))
}

fn hedgehog(cmd: HedgehogCommand, csv: bool) -> Result<Status> {
    match cmd {
        HedgehogCommand::Compile { spec } => {
            let s = load_hedgehog(&spec)?;
            print!("{}", write_msp(&compile_hedgehog(&s)));
            Ok(Status::Pass)
        }
        HedgehogCommand::Iso { a, b } => {
            let iso = hedgehog_isometric(&load_hedgehog(&a)?, &load_hedgehog(&b)?);
            if csv {
                csv_row([iso.to_string()])?;
            } else {
                println!("{}", if iso { "isometric" } else { "not isometric" });
            }
            Ok(Status::Pass)
        }
        HedgehogCommand::Bucket { a, b, eps, output } => {
            let (sa, sb) = (load_hedgehog(&a)?, load_hedgehog(&b)?);
            let r = match bucket_correspondence(&sa, &sb, &eps) {
                Ok(r) => r,
                Err(e @ HedgehogError::BucketMismatch { .. }) => {
                    if csv {
                        csv_row(["", "", "", "false"])?;
                    } else {
                        println!("refused: {e}");
                    }
                    return Ok(Status::Fail);
                }
                Err(e) => return Err(e.into()),
            };
            let (ha, hb) = (compile_hedgehog(&sa), compile_hedgehog(&sb));
            let dis = distortion(&r, &ha, &hb)?;
            let upper = gh_upper_from(&r, &ha, &hb)?;
            let ok = dis <= eps * 2 && upper <= eps;
            if let Some(path) = &output {
                write_file(path, &write_correspondence(&r))?;
            }
            if csv {
                csv_row([dis.to_string(), (eps * 2).to_string(), upper.to_string(), ok.to_string()])?;
            } else {
                if output.is_none() {
                    print!("{}", write_correspondence(&r));
                }
                println!("# distortion {dis} (bound {}), upper bound {upper} (bound {eps})", eps * 2);
            }
            Ok(Status::from_pass(ok))
        }
        HedgehogCommand::Center { a, b, r, radius } => {
            let (sa, sb) = (load_hedgehog(&a)?, load_hedgehog(&b)?);
            let corr = load_correspondence(&r, &compile_hedgehog(&sa), &compile_hedgehog(&sb))?;
            let report = check_center_location(&sa, &sb, &corr, &radius)?;
            if csv {
                for f in &report.far_needles {
                    csv_row([
                        report.center_distance.to_string(),
                        report.centers_close.to_string(),
                        f.point.to_string(),
                        f.length.to_string(),
                        f.partner.map(|p| p.to_string()).unwrap_or_default(),
                        f.partner_distance.map(|d| d.to_string()).unwrap_or_default(),
                        f.distance_to_center.to_string(),
                        f.covered.to_string(),
                    ])?;
                }
            } else {
                println!(
                    "centers {} apart (must be below {}): {}",
                    report.center_distance,
                    radius * 4,
                    yes_no(report.centers_close)
                );
                for f in &report.far_needles {
                    println!(
                        "needle {} of length {}: nearest needle point {} at {}, {} from the other center, covered: {}",
                        f.point,
                        f.length,
                        f.partner.map(|p| p.to_string()).unwrap_or("-".into()),
                        f.partner_distance.map(|d| d.to_string()).unwrap_or("-".into()),
                        f.distance_to_center,
                        yes_no(f.covered)
                    );
                }
            }
            Ok(Status::from_pass(report.holds()))
        }
    }
}

fn needles(args: &NeedlesArgs, csv: bool) -> Result<Status> {
    let cfg = NeedleFamilyConfig::new(args.n, args.k)?;
    let indices: Vec<usize> = match args.m {
        Some(m) => vec![m],
        None => (1..=args.n).collect(),
    };
    let spaces = needle_families(&cfg)?;
    if let Some(dir) = &args.output {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        write_file(&dir.join("X.msp"), &write_msp(&spaces.x))?;
        write_file(&dir.join("Y.msp"), &write_msp(&spaces.y))?;
    }
    if !csv {
        println!("X: {} points on {} needles", spaces.x.len(), args.n + 1);
        println!("Y: {} points on {} needles and the limit needle", spaces.y.len(), args.n);
    }
    let mut all = true;
    let mut maps = String::new();
    for &m in &indices {
        let image = needle_embedding(&cfg, m)?;
        let report = needle_family_check(&cfg, m)?;
        let expected = rat(1, m as i128);
        let ok = report.preserves_distances && report.hausdorff == expected;
        all &= ok;
        let _ = writeln!(maps, "# h_{m}");
        for (p, q) in spaces.y_points.iter().zip(&image) {
            let _ = writeln!(maps, "{p} -> {q}");
        }
        if csv {
            csv_row([
                m.to_string(),
                report.preserves_distances.to_string(),
                report.hausdorff.to_string(),
                expected.to_string(),
            ])?;
        } else {
            println!(
                "h_{m}: distances preserved: {}, d_H(X, h_{m}(Y)) = {} (expected {expected}), attained at {} -> {}",
                yes_no(report.preserves_distances),
                report.hausdorff,
                report.witness.0,
                report.witness.1
            );
        }
    }
    match &args.output {
        Some(dir) => write_file(&dir.join("map.txt"), &maps)?,
        None if !csv && args.m.is_some() => print!("{maps}"),
        None => {}
    }
    Ok(Status::from_pass(all))
}

fn limit(path: &Path, output: Option<&Path>, csv: bool) -> Result<Status> {
    let chain = load_chain(path)?;
    let lim = thread_limit(&chain)?;
    if let Some(out) = output {
        write_file(out, &write_msp(&lim.approx))?;
    }
    let mut all = true;
    if !csv {
        println!(
            "{} layers, {} threads, limit space of {} points, diameter {}",
            chain.depth(),
            lim.thread_count,
            lim.approx.len(),
            lim.approx.diameter()
        );
    }
    for (i, c) in lim.certificates.iter().enumerate() {
        let bound = chain.budget_checked().then(|| link_budget(i));
        let ok = bound.is_none_or(|b| *c <= b);
        all &= ok;
        if csv {
            csv_row([
                (i + 1).to_string(),
                c.to_string(),
                bound.map(|b| b.to_string()).unwrap_or_default(),
                ok.to_string(),
            ])?;
        } else {
            match bound {
                Some(b) => println!("layer {}: certificate {c} (bound {b}) {}", i + 1, if ok { "ok" } else { "EXCEEDED" }),
                None => println!("layer {}: certificate {c}", i + 1),
            }
        }
    }
    Ok(Status::from_pass(all))
}

fn probe(path: &Path, lambdas: &[Rational], csv: bool) -> Result<Status> {
    let x = load_space(path)?;
    let probe = d_lambda_probe(&x, lambdas)?;
    let mut all = true;
    for (l, d) in &probe.samples {
        let closed = probe.closed_form(l);
        let ok = *d == closed;
        all &= ok;
        if csv {
            csv_row([l.to_string(), d.to_string(), closed.to_string(), ok.to_string()])?;
        } else {
            println!(
                "d({l}) = {d}, closed form {closed}{}",
                if ok { "" } else { " MISMATCH" }
            );
        }
    }
    Ok(Status::from_pass(all))
}

fn center(path: &Path, lambda: &Rational, n: u32, geometric: bool, output: Option<&Path>, csv: bool) -> Result<Status> {
    let x = load_space(path)?;
    let it = center_iterate(&x, lambda, n)?;
    if let Some(out) = output {
        write_file(out, &write_msp(&it.space))?;
    }
    let bad = center_tail_check(&x, lambda, n)?;
    let mut ok = bad.is_empty();
    let geometric_ok = if geometric {
        geometric_bound_check(&x, lambda, n.max(1))?.holds()
    } else {
        true
    };
    ok &= geometric_ok;
    if csv {
        csv_row([
            n.to_string(),
            it.space.diameter().to_string(),
            it.d_lambda.to_string(),
            it.tail.to_string(),
            ok.to_string(),
        ])?;
    } else {
        println!("d({lambda}) = {}", it.d_lambda);
        println!("diameter of iterate {n} = {}", it.space.diameter());
        println!("tail bound = {}", it.tail);
        match bad.first() {
            None => println!("tail bound dominates d_GH(X_m, X_k) for all k < m <= {n}"),
            Some(r) => println!("tail bound FAILS at m = {}, k = {}: {} > {}", r.m, r.n, r.actual, r.tail),
        }
        if geometric {
            println!("geometric bound for d(λ^k), k <= {}: {}", n.max(1), if geometric_ok { "holds" } else { "FAILS" });
        }
    }
    Ok(Status::from_pass(ok))
}

fn stab(path: &Path, hedgehog: bool, samples: &[Rational], csv: bool) -> Result<Status> {
    let report: StabilizerReport = if hedgehog {
        stabilizer_hedgehog(&load_hedgehog(path)?, samples)
    } else {
        stabilizer_space(&load_space(path)?, samples)?
    };
    if csv {
        let mut all: Vec<Rational> = report.candidates.clone();
        all.extend(samples.iter().copied());
        all.sort();
        all.dedup();
        for l in all {
            csv_row([
                l.to_string(),
                report.stabilizer.contains(&l).to_string(),
                report.zero_distance.contains(&l).to_string(),
                report.finite_distance.contains(&l).to_string(),
            ])?;
        }
    } else {
        let list = |v: &[Rational]| v.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(", ");
        println!("candidates tested: {}", report.candidates.len());
        println!("stabilizer: {{{}}}", list(&report.stabilizer));
        println!("zero distance among samples: {{{}}}", list(&report.zero_distance));
        println!(
            "finite distance: every sample ({}); finite spaces are bounded",
            report.finite_distance.len()
        );
    }
    Ok(Status::Pass)
}

fn generate(args: &GenerateArgs) -> Result<Status> {
    let contents = match args.kind {
        GenerateKind::RandomMetric => {
            if args.points == 0 || args.dim == 0 || args.bound <= 0 || args.denom <= 0 {
                bail!("points, dim, bound and denom must be positive");
            }
            let side = (args.bound * args.denom + 1) as f64;
            if (args.points as f64) > side.powi(args.dim as i32) {
                bail!("the box holds fewer than {} grid points", args.points);
            }
            let params = MetricParams {
                points: args.points,
                dim: args.dim,
                bound: args.bound,
                denom: args.denom,
            };
            write_msp(&random_metric(&mut rng_from_seed(args.seed), &params))
        }
        GenerateKind::GridHedgehog => write_hedgehog(&grid_hedgehog(&args.eps, &args.max)?),
        GenerateKind::DenseSpec => {
            if args.max < int(1) || args.count == 0 {
                bail!("dense specs need --max >= 1 and --count >= 1");
            }
            let max = args.max.floor().to_integer() as i64;
            write_hedgehog(&dense_spec(&mut rng_from_seed(args.seed), args.count, max, args.denom.max(1)))
        }
    };
    emit(args.output.as_deref(), &contents)?;
    Ok(Status::Pass)
}

