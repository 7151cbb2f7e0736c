// `B₁` norms of product weights on grids against the product of the
// one-dimensional norms.

use hardy_cone::conditions::{b1_norm, WeightSpec};
use hardy_cone::pomspace::{build_chain, build_vertical_grid};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let u = WeightSpec::Power(-0.5);
    let prod = WeightSpec::Product(vec![u.clone(), u.clone()]);
    println!("{:>3} {:>10} {:>10} {:>10}", "n", "grid", "product", "gap");
    for n in 2..=8 {
        let grid = b1_norm(&build_vertical_grid(n, n, &prod)?, 100_000);
        let line = b1_norm(&build_chain(n, &u)?, 100_000);
        let product = line.constant * line.constant;
        println!(
            "{n:3} {:10.6} {:10.6} {:10.2e}",
            grid.constant,
            product,
            grid.constant / product - 1.0
        );
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
