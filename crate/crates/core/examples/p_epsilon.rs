// Self-improvement of `B_p`: the constructive `ε` against the empirical
// boundary, and iterated column means against their closed form.

use hardy_cone::conditions::{p_eps_search, QuadratureParams, WeightSpec};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let q = QuadratureParams::default();
    println!(
        "{:>6} {:>10} {:>12} {:>10} {:>10}",
        "beta", "C", "sigma", "eps", "eps*"
    );
    for beta in [-0.5, 0.0, 0.5] {
        let r = p_eps_search(&WeightSpec::Power(beta), 2.0, &q, 1e-3)?;
        println!(
            "{beta:6} {:10.5} {:12.5} {:10.5} {:10.5}   (p-1-beta = {})",
            r.condition_constant,
            r.sigma,
            r.eps_proof,
            r.eps_empirical,
            1.0 - beta
        );
    }
    match p_eps_search(&WeightSpec::Power(1.5), 2.0, &q, 1e-3) {
        Err(e) => println!("pow:1.5 -> {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
