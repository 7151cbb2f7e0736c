// Random search over chains for the integration-by-parts inequality
// `(Σ m)^α ≤ C_α Σ_u (Σ_{y≤u} m_y)^{α−1} m_u`.

use hardy_cone::hardy::lemma_ip_sides;
use hardy_cone::verify::lemma_sweep;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let alphas = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0];
    let report = lemma_sweep(&alphas, 1000, 50, 0xB9);
    for r in &report.records {
        println!(
            "{:10} worst lhs/rhs {:.6}  C = {}",
            r.claim, r.measured, r.bound
        );
    }

    // equal atoms: the ratio approaches 2/(1+1/n) at α = 2 and exceeds √2 at α = 3/2
    for n in [1, 10, 50] {
        let s = lemma_ip_sides(&vec![1.0; n], 1.5)?;
        println!("n={n:2}  α=1.5  lhs/rhs = {:.4}", s.lhs / s.rhs);
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
