// Run the three theorem oracles and print every record.

use hardy_cone::conditions::{QuadratureParams, WeightSpec};
use hardy_cone::pomspace::{build_chain, build_vertical_grid};
use hardy_cone::verify::{
    check_theorem_2_2, check_theorem_3_2, check_theorem_3_4, EquivalenceReport,
};

fn show(r: &EquivalenceReport) {
    println!("{}", r.name);
    for rec in &r.records {
        println!(
            "  {:32} {:5} {:.6} <= {:.6}",
            rec.claim, rec.passed, rec.measured, rec.bound
        );
    }
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let w = WeightSpec::Power(-0.5);
    show(&check_theorem_2_2(&build_chain(8, &w)?, 1.0, 4000, 1)?);
    show(&check_theorem_2_2(
        &build_vertical_grid(4, 4, &w)?,
        2.0,
        4000,
        1,
    )?);
    show(&check_theorem_3_2(
        &build_vertical_grid(3, 3, &WeightSpec::Constant(1.0))?,
        1.0,
        4000,
        1,
    )?);
    let q = QuadratureParams {
        truncate: 100.0,
        cells: 4000,
    };
    show(&check_theorem_3_4(
        &WeightSpec::Power(0.0),
        &WeightSpec::Power(0.0),
        2.0,
        3,
        &q,
        2000,
    )?);
    show(&check_theorem_3_4(
        &WeightSpec::Power(1.5),
        &WeightSpec::Power(0.0),
        2.0,
        3,
        &q,
        2000,
    )?);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
