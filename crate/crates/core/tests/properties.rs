use std::collections::BTreeSet;

use ghcloud::cloud::{stabilizer_space, thread_limit, ThreadChain};
use ghcloud::gh::gh_by_enumeration;
use ghcloud::hedgehog::{compile_hedgehog, hedgehog_isometric, HedgehogSpec};
use ghcloud::io::{parse_correspondence, parse_hedgehog, parse_msp, write_correspondence, write_hedgehog, write_msp};
use ghcloud::space::directed_hausdorff;
use ghcloud::{
    distortion, gh_exact, gh_exact_with, glue_pair, gh_upper_from, hausdorff, int, rat, Correspondence,
    FiniteMetricSpace, GhOptions, Mode, Parallelism, Rational, SubsetRef,
};
use proptest::prelude::*;

fn sup_space(points: &BTreeSet<(i64, i64, i64)>, denom: i64) -> FiniteMetricSpace {
    let pts: Vec<_> = points.iter().collect();
    let matrix = pts
        .iter()
        .map(|p| {
            pts.iter()
                .map(|q| {
                    let d = (p.0 - q.0).abs().max((p.1 - q.1).abs()).max((p.2 - q.2).abs());
                    rat(d as i128, denom as i128)
                })
                .collect()
        })
        .collect();
    FiniteMetricSpace::from_matrix(matrix, Mode::Strict).unwrap()
}

fn space(max: usize) -> impl Strategy<Value = FiniteMetricSpace> {
    (prop::collection::btree_set((0..5i64, 0..5i64, 0..5i64), 1..=max), 1..=3i64)
        .prop_map(|(pts, denom)| sup_space(&pts, denom))
}

fn correspondence(n: usize, m: usize) -> impl Strategy<Value = Correspondence> {
    (
        prop::collection::vec(0..m, n),
        prop::collection::vec(0..n, m),
        prop::collection::vec((0..n, 0..m), 0..3),
    )
        .prop_map(move |(f, g, extra)| {
            let base = Correspondence::from_maps(&f, &g).unwrap();
            Correspondence::new(n, m, base.pairs().iter().copied().chain(extra)).unwrap()
        })
}

fn space_pair_with_corr(max: usize) -> impl Strategy<Value = (FiniteMetricSpace, FiniteMetricSpace, Correspondence)> {
    (space(max), space(max)).prop_flat_map(|(x, y)| {
        let (n, m) = (x.len(), y.len());
        (Just(x), Just(y), correspondence(n, m))
    })
}

fn spec(max_needles: usize) -> impl Strategy<Value = HedgehogSpec> {
    prop::collection::vec((1..=4i128, 1..=2u32), 1..=max_needles)
        .prop_map(|v| HedgehogSpec::new(v.into_iter().map(|(l, m)| (int(l), m))).unwrap())
}

fn lambda() -> impl Strategy<Value = Rational> {
    (1..=6i128, 1..=4i128).prop_map(|(p, q)| rat(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solver_matches_enumeration(x in space(3), y in space(3)) {
        let exact = gh_exact(&x, &y).unwrap();
        let (oracle, _) = gh_by_enumeration(&x, &y).unwrap();
        prop_assert_eq!(exact.value, oracle);
        prop_assert!(exact.lower_bound <= exact.value);
        prop_assert_eq!(distortion(&exact.witness, &x, &y).unwrap(), exact.value * 2);
    }

    #[test]
    fn gh_is_symmetric(x in space(4), y in space(4)) {
        prop_assert_eq!(gh_exact(&x, &y).unwrap().value, gh_exact(&y, &x).unwrap().value);
    }

    #[test]
    fn gh_triangle_inequality(x in space(4), y in space(4), z in space(4)) {
        let xy = gh_exact(&x, &y).unwrap().value;
        let yz = gh_exact(&y, &z).unwrap().value;
        let xz = gh_exact(&x, &z).unwrap().value;
        prop_assert!(xz <= xy + yz);
    }

    #[test]
    fn gh_scales_with_the_spaces(x in space(4), y in space(4), l in lambda()) {
        let d = gh_exact(&x, &y).unwrap().value;
        let scaled = gh_exact(&x.scale(&l).unwrap(), &y.scale(&l).unwrap()).unwrap().value;
        prop_assert_eq!(scaled, d * l);
    }

    #[test]
    fn parallel_search_returns_the_sequential_witness(x in space(5), y in space(5)) {
        let seq = gh_exact_with(&x, &y, &GhOptions { parallelism: Parallelism::Sequential, ..GhOptions::default() }).unwrap();
        let par = gh_exact_with(&x, &y, &GhOptions { parallelism: Parallelism::Parallel, ..GhOptions::default() }).unwrap();
        prop_assert_eq!(seq.value, par.value);
        prop_assert_eq!(seq.witness, par.witness);
    }

    #[test]
    fn upper_bound_dominates((x, y, r) in space_pair_with_corr(4)) {
        prop_assert!(gh_upper_from(&r, &x, &y).unwrap() >= gh_exact(&x, &y).unwrap().value);
        prop_assert_eq!(distortion(&r, &x, &y).unwrap(), distortion(&r.inverse(), &y, &x).unwrap());
    }

    #[test]
    fn hausdorff_is_a_metric_on_subsets(
        x in space(6),
        a in prop::collection::btree_set(0..6usize, 1..4),
        b in prop::collection::btree_set(0..6usize, 1..4),
        c in prop::collection::btree_set(0..6usize, 1..4),
    ) {
        let pick = |s: &BTreeSet<usize>| -> Vec<usize> {
            let v: Vec<usize> = s.iter().map(|i| i % x.len()).collect::<BTreeSet<_>>().into_iter().collect();
            v
        };
        let (a, b, c) = (
            SubsetRef::new(&x, pick(&a)).unwrap(),
            SubsetRef::new(&x, pick(&b)).unwrap(),
            SubsetRef::new(&x, pick(&c)).unwrap(),
        );
        let ab = hausdorff(&a, &b).unwrap();
        prop_assert_eq!(ab, hausdorff(&b, &a).unwrap());
        prop_assert!(hausdorff(&a, &c).unwrap() <= ab + hausdorff(&b, &c).unwrap());
        prop_assert_eq!(ab, directed_hausdorff(&a, &b).unwrap().max(directed_hausdorff(&b, &a).unwrap()));
    }

    #[test]
    fn scaling_is_a_group_action(x in space(5), l in lambda(), m in lambda()) {
        let twice = x.scale(&l).unwrap().scale(&m).unwrap();
        prop_assert!(twice.same_distances(&x.scale(&(l * m)).unwrap()));
        prop_assert!(x.scale(&l).unwrap().scale(&l.recip()).unwrap().same_distances(&x));
    }

    #[test]
    fn gluing_realizes_half_the_distortion((x, y, r) in space_pair_with_corr(5)) {
        let dis = distortion(&r, &x, &y).unwrap();
        prop_assume!(dis > int(0));
        let glued = glue_pair(&x, &y, &r).unwrap();
        let z = glued.carrier();
        prop_assert!(FiniteMetricSpace::validate(z.labels().to_vec(), z.matrix(), Mode::Strict).is_ok());
        prop_assert_eq!(hausdorff(&glued.part(0), &glued.part(1)).unwrap(), dis / 2);
        // the parts keep their own metrics
        for i in 0..x.len() {
            for j in 0..x.len() {
                prop_assert_eq!(z.dist(glued.point(0, i), glued.point(0, j)), x.dist(i, j));
            }
        }
    }

    #[test]
    fn compiled_hedgehogs_are_strict(s in spec(6)) {
        let h = compile_hedgehog(&s);
        prop_assert!(FiniteMetricSpace::validate(h.labels().to_vec(), h.matrix(), Mode::Strict).is_ok());
        prop_assert_eq!(h.len(), s.point_count());
        prop_assert_eq!(h.diameter(), if s.point_count() == 2 { s.max_length() } else {
            let l = s.expanded_lengths();
            l[l.len() - 1] + l[l.len() - 2]
        });
    }

    #[test]
    fn hedgehog_isometry_matches_zero_distance(a in spec(2), b in spec(2)) {
        let (ha, hb) = (compile_hedgehog(&a), compile_hedgehog(&b));
        prop_assume!(ha.len() <= 5 && hb.len() <= 5);
        let zero = gh_exact(&ha, &hb).unwrap().value == int(0);
        prop_assert_eq!(hedgehog_isometric(&a, &b), zero);
    }

    #[test]
    fn thread_layers_and_certificates(
        x in space(3),
        y in space(3),
        z in space(3),
        seeds in (any::<u64>(), any::<u64>()),
    ) {
        let link = |n: usize, m: usize, seed: u64| {
            let f: Vec<usize> = (0..n).map(|i| ((seed >> (i * 3)) as usize) % m).collect();
            let g: Vec<usize> = (0..m).map(|j| ((seed >> (30 + j * 3)) as usize) % n).collect();
            Correspondence::from_maps(&f, &g).unwrap()
        };
        let r1 = link(x.len(), y.len(), seeds.0);
        let r2 = link(y.len(), z.len(), seeds.1);
        let chain = ThreadChain::new(vec![x, y, z], vec![r1, r2]).unwrap();
        for layer in 1..=3 {
            // validation as a pseudometric includes the triangle inequality
            prop_assert!(chain.layer_space(layer, 10_000).is_ok());
        }
        let lim = thread_limit(&chain).unwrap();
        prop_assert_eq!(lim.thread_count as usize, chain.threads(10_000).unwrap().len());
        for (n, space) in chain.spaces().iter().enumerate() {
            let exact = gh_exact(&lim.approx, space).unwrap().value;
            prop_assert!(lim.certificates[n] >= exact);
            prop_assert_eq!(gh_upper_from(&lim.to_layers[n], &lim.approx, space).unwrap(), lim.certificates[n]);
        }
    }

    #[test]
    fn strict_spaces_have_trivial_stabilizer(x in space(4)) {
        prop_assume!(x.len() >= 2);
        let report = stabilizer_space(&x, &[rat(1, 2), int(2)]).unwrap();
        prop_assert_eq!(report.stabilizer, vec![int(1)]);
    }

    #[test]
    fn files_round_trip((x, y, r) in space_pair_with_corr(5), s in spec(5)) {
        prop_assert_eq!(parse_msp(&write_msp(&x)).unwrap(), x.clone());
        prop_assert_eq!(parse_correspondence(&write_correspondence(&r), x.len(), y.len()).unwrap(), r);
        prop_assert_eq!(parse_hedgehog(&write_hedgehog(&s)).unwrap(), s);
    }
}
