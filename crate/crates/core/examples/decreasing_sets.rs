// Enumerate order ideals, sample them on larger spaces, and split a
// decreasing function into its layer cake.

use hardy_cone::conditions::WeightSpec;
use hardy_cone::monotone::{
    count_ideals, enumerate_decreasing_sets, layer_cake, random_decreasing_function, reconstruct,
    sample_decreasing_sets,
};
use hardy_cone::pomspace::{build_blocked_chain, build_vertical_grid, BlockedVariant, OrderTag};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let one = WeightSpec::Constant(1.0);
    for n in 1..=5 {
        let g = build_vertical_grid(n, n, &one)?;
        println!(
            "{n}x{n} grid: {:5} product-order ideals, {:5} column-order ideals",
            count_ideals(&g, OrderTag::Prec, 1_000_000)?,
            count_ideals(&g, OrderTag::Leq, 1_000_000)?
        );
    }

    let g = build_vertical_grid(2, 2, &one)?;
    for d in enumerate_decreasing_sets(&g, OrderTag::Prec, 100)? {
        println!(
            "  {:?} heights {:?}",
            d.members,
            d.column_profile(&g).unwrap()
        );
    }

    for v in [
        BlockedVariant::Prec1,
        BlockedVariant::Prec2,
        BlockedVariant::Prec3,
    ] {
        let b = build_blocked_chain(3, 3, v, &one)?;
        println!(
            "blocked 3x3 {}: {} ideals",
            v.name(),
            count_ideals(&b, OrderTag::Prec, 10_000)?
        );
    }

    let big = build_vertical_grid(30, 30, &one)?;
    let sample = sample_decreasing_sets(&big, OrderTag::Prec, 3, 7);
    println!(
        "sampled ideal sizes on 30x30: {:?}",
        sample.iter().map(|d| d.len()).collect::<Vec<_>>()
    );

    let f = random_decreasing_function(&g, OrderTag::Prec, 3, 11);
    let layers = layer_cake(&f);
    println!("f = {:?}", f.values);
    for l in &layers {
        println!("  f >= {:.4} on {:?}", l.threshold, l.set.members);
    }
    assert_eq!(reconstruct(g.len(), &layers), f.values);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
