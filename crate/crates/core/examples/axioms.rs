// Build each kind of space, check its axioms and print the canonical dump
// of a small grid.

use hardy_cone::conditions::WeightSpec;
use hardy_cone::pomspace::{
    build_blocked_chain, build_chain, build_from_measure, build_tree, build_vertical_grid,
    dump_space, validate_axioms, BlockedVariant, Coord,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let w: WeightSpec = "pow:0.5".parse()?;
    let spaces = [
        ("chain", build_chain(200, &w)?),
        ("grid", build_vertical_grid(8, 8, &w)?),
        (
            "tree",
            build_tree(
                &[None, Some(0), Some(0), Some(1), Some(1), Some(2)],
                &[1.0; 6],
            )?,
        ),
        (
            "blocked",
            build_blocked_chain(3, 5, BlockedVariant::Prec2, &w)?,
        ),
    ];
    for (name, space) in &spaces {
        let report = validate_axioms(space);
        println!(
            "{name:8} {:4} points  passed={}  worst={:.1e}",
            space.len(),
            report.all_passed(),
            report.worst_violation()
        );
    }

    // a two-point chain given by its measure: μ on {a < b} with masses 1/4, 3/4
    let custom = build_from_measure(
        vec![Coord::Bare, Coord::Bare],
        &[(0, 1)],
        None,
        &[0.25, 0.75],
        &[1.0, 1.0],
    )?;
    println!("custom μ_b(a) = {}", custom.mu(1, 0));

    print!(
        "{}",
        dump_space(&build_vertical_grid(2, 2, &WeightSpec::Constant(1.0))?)
    );
    Ok(())
}

fn main() {
    run_example().unwrap();
}
