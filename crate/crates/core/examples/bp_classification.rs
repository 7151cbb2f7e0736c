// Classify power weights `x^β` by the `B_p` condition and compare the
// measured constant with `(β+1)/(p−1−β)`.

use hardy_cone::conditions::{
    bp_chain_constant, power_weight_bp_constant, QuadratureParams, WeightSpec,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let q = QuadratureParams::default();
    println!(
        "{:>5} {:>6} {:>12} {:>12}  divergence",
        "p", "beta", "measured", "closed form"
    );
    for p in [1.5, 2.0, 3.0] {
        for beta in [-1.5, -0.5, 0.0, p - 1.5, p - 0.5] {
            let r = bp_chain_constant(&WeightSpec::Power(beta), p, None, &q)?;
            println!(
                "{p:5} {beta:6} {:12.5} {:12.5}  {:?}",
                r.constant,
                power_weight_bp_constant(beta, p),
                r.divergence
            );
        }
    }
    let table = WeightSpec::table(vec![(0.0, 1.0), (1.0, 3.0), (10.0, 0.5)])?;
    println!(
        "step weight at p=2: {:.5}",
        bp_chain_constant(&table, 2.0, None, &q)?.constant
    );
    Ok(())
}

fn main() {
    run_example().unwrap();
}
