// The Hardy operator on a chain, the partial and rectangle means on a grid,
// and iterated column means against their closed form.

use hardy_cone::conditions::WeightSpec;
use hardy_cone::hardy::{apply_hardy, apply_partial, apply_rectangle, closed_form_s2m, iterate_s2};
use hardy_cone::pomspace::{build_chain_scaled, build_vertical_grid, grid_id, Axis};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let one = WeightSpec::Constant(1.0);
    let chain = build_chain_scaled(4, &one, 1.0)?;
    println!(
        "S(4,3,2,1) = {:?}",
        apply_hardy(&chain, &[4.0, 3.0, 2.0, 1.0])
    );

    let g = build_vertical_grid(3, 3, &one)?;
    let f: Vec<f64> = (0..9).map(|i| 9.0 - i as f64).collect();
    let s1 = apply_partial(&g, &f, Axis::First)?;
    let s2 = apply_partial(&g, &f, Axis::Second)?;
    let s = apply_rectangle(&g, &f)?;
    let top = grid_id(3, 3, 3);
    println!(
        "at (3,3): S1 {:.4}  S2 {:.4}  S {:.4}",
        s1[top], s2[top], s[top]
    );
    println!(
        "S1(S2 f) = {:.4}",
        apply_partial(&g, &s2, Axis::First)?[top]
    );

    // one column of 10^4 cells on (0, 1]; D = {t <= h}
    let (n, h) = (10_000usize, 0.25);
    let col = build_vertical_grid(1, n, &one)?;
    let indicator: Vec<f64> = (1..=n)
        .map(|r| {
            if (r as f64) / (n as f64) <= h {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    for m in 1..=5 {
        let it = iterate_s2(&col, &indicator, m)?;
        let t = 0.75;
        let k = (t * n as f64) as usize - 1;
        let exact = closed_form_s2m(h, m, t)?;
        println!("m={m}: discrete {:.6}  closed form {:.6}", it[k], exact);
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
