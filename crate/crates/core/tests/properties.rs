use hardy_cone::cli::RunConfig;
use hardy_cone::conditions::{
    gencon_constant, gencon_ratio, grid_condition, remark_comparison_gap, GridMode, WeightSpec,
    Witness,
};
use hardy_cone::hardy::{apply_blocked, apply_hardy, apply_partial, apply_rectangle, HardyOp};
use hardy_cone::monotone::{
    count_ideals, enumerate_decreasing_sets, is_decreasing_function, is_decreasing_set, layer_cake,
    random_decreasing_function, reconstruct, sample_decreasing_sets, DecreasingSet,
    MonotoneFunction,
};
use hardy_cone::pomspace::{
    build_blocked_chain, build_chain, build_chain_scaled, build_tree, build_vertical_grid,
    dump_space, parse_dump, validate_axioms, Axis, BlockedVariant, OrderTag, PomSpace,
};
use hardy_cone::verify::{cone_norm_bounds, rayleigh};
use proptest::prelude::*;

fn weight() -> impl Strategy<Value = WeightSpec> {
    prop_oneof![
        (0.1f64..10.0).prop_map(WeightSpec::Constant),
        (-0.9f64..2.0).prop_map(WeightSpec::Power),
        proptest::collection::vec(0.1f64..10.0, 1..5).prop_map(|vals| {
            let knots = vals
                .iter()
                .enumerate()
                .map(|(i, &v)| (i as f64 * 0.3, v))
                .collect();
            WeightSpec::table(knots).unwrap()
        }),
    ]
}

fn parents() -> impl Strategy<Value = Vec<Option<usize>>> {
    proptest::collection::vec(any::<prop::sample::Index>(), 1..40).prop_map(|picks| {
        picks
            .iter()
            .enumerate()
            .map(|(i, ix)| (i > 0).then(|| ix.index(i)))
            .collect()
    })
}

fn variant() -> impl Strategy<Value = BlockedVariant> {
    prop_oneof![
        Just(BlockedVariant::Prec1),
        Just(BlockedVariant::Prec2),
        Just(BlockedVariant::Prec3),
    ]
}

/// One small space of each shape.
fn space() -> impl Strategy<Value = PomSpace> {
    prop_oneof![
        (1usize..30, weight()).prop_map(|(n, w)| build_chain(n, &w).unwrap()),
        (1usize..6, 1usize..6, weight(), weight()).prop_map(|(a, b, u, v)| build_vertical_grid(
            a,
            b,
            &WeightSpec::Product(vec![u, v])
        )
        .unwrap()),
        (parents(), proptest::collection::vec(0.01f64..10.0, 40)).prop_map(|(p, nu)| build_tree(
            &p,
            &nu[..p.len()]
        )
        .unwrap()),
        (1usize..4, 1usize..5, variant(), weight())
            .prop_map(|(b, c, v, w)| build_blocked_chain(b, c, v, &w).unwrap()),
    ]
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn built_spaces_satisfy_the_axioms(s in space()) {
        let r = validate_axioms(&s);
        prop_assert!(r.all_passed(), "{:?}", r);
        prop_assert!(r.worst_violation() <= 1e-12);
    }

    #[test]
    fn dump_round_trips(s in space()) {
        let text = dump_space(&s);
        prop_assert_eq!(dump_space(&parse_dump(&text).unwrap()), text);
    }

    #[test]
    fn single_column_grid_is_a_chain(n in 1usize..40, beta in -0.9f64..2.0) {
        let w = WeightSpec::Power(beta);
        let c = build_chain(n, &w).unwrap();
        let g = build_vertical_grid(1, n, &w).unwrap();
        for x in 0..n {
            prop_assert!(close(c.nu()[x], g.nu()[x], 1e-12));
            for u in c.downset(x) {
                prop_assert!(close(c.mu(x, u), g.mu(x, u), 1e-12));
            }
        }
    }

    #[test]
    fn hardy_operator_is_linear_and_positive(s in space(), seed in any::<u64>(), a in 0.0f64..5.0, b in 0.0f64..5.0) {
        let f = random_decreasing_function(&s, OrderTag::Prec, 3, seed).values;
        let g: Vec<f64> = f.iter().enumerate().map(|(i, v)| v + (i % 3) as f64).collect();
        let (sf, sg) = (apply_hardy(&s, &f), apply_hardy(&s, &g));
        let mix: Vec<f64> = f.iter().zip(&g).map(|(x, y)| a * x + b * y).collect();
        for (x, v) in apply_hardy(&s, &mix).iter().enumerate() {
            prop_assert!(close(*v, a * sf[x] + b * sg[x], 1e-12));
            prop_assert!(sf[x] <= sg[x] * (1.0 + 1e-12));
        }
    }

    #[test]
    fn hardy_operator_preserves_the_cone(s in space(), seed in any::<u64>(), layers in 1usize..5) {
        let f = random_decreasing_function(&s, OrderTag::Prec, layers, seed);
        let sf = apply_hardy(&s, &f.values);
        // averaging reorders sums, so compare up to rounding
        let slack: Vec<f64> = sf.iter().map(|v| v * (1.0 - 1e-12)).collect();
        for x in 0..s.len() {
            for &c in s.prec_covers(x) {
                prop_assert!(sf[c] >= slack[x], "S f({c}) = {} < S f({x}) = {}", sf[c], sf[x]);
            }
        }
    }

    #[test]
    fn rectangle_mean_preserves_the_product_cone(nx in 1usize..7, ny in 1usize..7, seed in any::<u64>()) {
        let g = build_vertical_grid(nx, ny, &WeightSpec::Constant(1.0)).unwrap();
        let f = random_decreasing_function(&g, OrderTag::Prec, 4, seed);
        let sf = apply_rectangle(&g, &f.values).unwrap();
        let rounded: Vec<f64> = sf.iter().map(|v| (v * 1e9).round() / 1e9).collect();
        prop_assert!(is_decreasing_function(&g, &rounded, OrderTag::Prec));
    }

    #[test]
    fn partial_means_commute(nx in 1usize..8, ny in 1usize..8, vals in proptest::collection::vec(0.0f64..10.0, 64)) {
        let g = build_vertical_grid(nx, ny, &WeightSpec::Constant(1.0)).unwrap();
        let f = &vals[..nx * ny];
        let s12 = apply_partial(&g, &apply_partial(&g, f, Axis::Second).unwrap(), Axis::First).unwrap();
        let s21 = apply_partial(&g, &apply_partial(&g, f, Axis::First).unwrap(), Axis::Second).unwrap();
        let s = apply_rectangle(&g, f).unwrap();
        for x in 0..f.len() {
            prop_assert!(close(s12[x], s21[x], 1e-12));
            prop_assert!(close(s12[x], s[x], 1e-12));
        }
    }

    #[test]
    fn block_mean_is_at_most_the_full_mean(b in 1usize..5, c in 1usize..8, seed in any::<u64>()) {
        let one = WeightSpec::Constant(1.0);
        let blocked = build_blocked_chain(b, c, BlockedVariant::Prec3, &one).unwrap();
        let line = build_chain_scaled(b * c, &one, 1.0 / c as f64).unwrap();
        let f = random_decreasing_function(&blocked, OrderTag::Prec, 3, seed).values;
        let inner = apply_blocked(&blocked, &f).unwrap();
        let full = apply_hardy(&line, &f);
        for x in 0..f.len() {
            prop_assert!(inner[x] <= full[x] * (1.0 + 1e-12), "{} > {}", inner[x], full[x]);
        }
    }

    #[test]
    fn layer_cake_reconstructs_exactly(s in space(), seed in any::<u64>(), layers in 1usize..6) {
        let f = random_decreasing_function(&s, OrderTag::Prec, layers, seed);
        let cake = layer_cake(&f);
        for l in &cake {
            prop_assert!(is_decreasing_set(&s, &l.set.members, OrderTag::Prec).unwrap());
        }
        prop_assert_eq!(reconstruct(s.len(), &cake), f.values);
    }

    #[test]
    fn gencon_ratio_is_non_increasing_in_p(s in space(), seed in any::<u64>(), p in 0.2f64..4.0, dq in 0.0f64..3.0) {
        let d = &sample_decreasing_sets(&s, OrderTag::Prec, 1, seed)[0];
        let (lo, hi) = (gencon_ratio(&s, p, d).unwrap(), gencon_ratio(&s, p + dq, d).unwrap());
        prop_assert!(hi <= lo * (1.0 + 1e-12), "{hi} > {lo}");
    }

    #[test]
    fn condition_witness_reproduces_the_constant(s in space(), p in 0.5f64..3.0) {
        let r = gencon_constant(&s, p, 5000).unwrap();
        if let Witness::Ideal { members } = &r.witness {
            let d = DecreasingSet::new(&s, members.clone(), OrderTag::Prec).unwrap();
            prop_assert_eq!(gencon_ratio(&s, p, &d).unwrap(), r.constant);
        }
    }

    #[test]
    fn norm_bounds_are_ordered_and_witnessed(s in space(), p in 1.0f64..3.0, seed in any::<u64>()) {
        let est = cone_norm_bounds(&s, p, HardyOp::Native, 400, seed).unwrap();
        if let Some(upper) = est.upper {
            prop_assert!(est.lower <= upper * (1.0 + 1e-9), "{} > {upper}", est.lower);
        }
        let again = rayleigh(&s, HardyOp::Native, p, &est.witness_f.values).unwrap();
        prop_assert!(close(again, est.lower, 1e-10));
    }

    #[test]
    fn comparison_gap_is_nonnegative(a in 0.01f64..20.0, dx in 0.0f64..50.0) {
        prop_assert!(remark_comparison_gap(a, a + dx) >= -1e-12);
    }

    #[test]
    fn config_round_trips(p in proptest::collection::vec(0.1f64..5.0, 0..4), seed in any::<u64>(), cells in 1usize..100_000, suite in proptest::option::of("[a-z0-9]{1,6}")) {
        let cfg = RunConfig { p, seed, cells, suite, ..RunConfig::default() };
        prop_assert_eq!(RunConfig::parse(&cfg.emit()).unwrap(), cfg);
    }
}

fn brute_force_ideals(s: &PomSpace) -> usize {
    (1u32..1 << s.len())
        .filter(|mask| {
            let members: Vec<usize> = (0..s.len()).filter(|&i| mask & (1 << i) != 0).collect();
            is_decreasing_set(s, &members, OrderTag::Prec).unwrap()
        })
        .count()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn ideal_counts_are_lattice_paths() {
    let one = WeightSpec::Constant(1.0);
    for n in 1..=12 {
        assert_eq!(
            count_ideals(&build_chain(n, &one).unwrap(), OrderTag::Prec, 100).unwrap(),
            n
        );
    }
    for a in 1..=6 {
        for b in 1..=6 {
            let g = build_vertical_grid(a, b, &one).unwrap();
            let n = count_ideals(&g, OrderTag::Prec, 10_000).unwrap();
            assert_eq!(n, binomial(a + b, a) - 1, "{a}x{b}");
            if a * b <= 16 {
                assert_eq!(n, brute_force_ideals(&g), "{a}x{b}");
            }
        }
    }
}

#[test]
fn stronger_orders_have_fewer_ideals() {
    let one = WeightSpec::Constant(1.0);
    let spaces: Vec<PomSpace> = [
        BlockedVariant::Prec1,
        BlockedVariant::Prec2,
        BlockedVariant::Prec3,
    ]
    .iter()
    .map(|&v| build_blocked_chain(3, 3, v, &one).unwrap())
    .collect();
    for pair in spaces.windows(2) {
        for d in enumerate_decreasing_sets(&pair[1], OrderTag::Prec, 10_000).unwrap() {
            assert!(is_decreasing_set(&pair[0], &d.members, OrderTag::Prec).unwrap());
        }
    }
    let prefixes = enumerate_decreasing_sets(&spaces[2], OrderTag::Prec, 100).unwrap();
    assert_eq!(prefixes.len(), 9);
    for d in &prefixes {
        assert_eq!(d.members, (0..d.len()).collect::<Vec<_>>());
    }
}

#[test]
fn prec_ideals_are_leq_ideals() {
    let w = WeightSpec::Power(0.5);
    let spaces = [
        build_vertical_grid(4, 4, &w).unwrap(),
        build_tree(
            &[None, Some(0), Some(0), Some(1), Some(2), Some(2)],
            &[1.0; 6],
        )
        .unwrap(),
        build_blocked_chain(3, 2, BlockedVariant::Prec2, &w).unwrap(),
    ];
    for s in &spaces {
        for d in enumerate_decreasing_sets(s, OrderTag::Prec, 10_000).unwrap() {
            assert!(is_decreasing_set(s, &d.members, OrderTag::Leq).unwrap());
        }
    }
}

#[test]
fn decreasing_functions_respect_both_orders() {
    let g = build_vertical_grid(3, 3, &WeightSpec::Constant(1.0)).unwrap();
    let f = random_decreasing_function(&g, OrderTag::Prec, 4, 9);
    assert!(MonotoneFunction::new(&g, f.values.clone(), OrderTag::Prec).is_ok());
    assert!(MonotoneFunction::new(&g, f.values, OrderTag::Leq).is_ok());
}

#[test]
fn grid_condition_specialises_to_the_general_one() {
    let g = build_vertical_grid(
        4,
        3,
        &WeightSpec::Product(vec![WeightSpec::Power(-0.5), WeightSpec::Power(1.0)]),
    )
    .unwrap();
    for d in enumerate_decreasing_sets(&g, OrderTag::Prec, 10_000).unwrap() {
        for p in [0.5, 1.0, 2.0] {
            let a = grid_condition(&g, p, &d, GridMode::Vertical).unwrap();
            let b = gencon_ratio(&g, p, &d).unwrap();
            assert!(close(a, b, 1e-12), "{a} vs {b}");
        }
    }
}
