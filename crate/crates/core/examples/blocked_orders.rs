// Conditions for the blocked order under the three choices of `≺`, and the
// embedding of a single-block condition as a decreasing sequence.

use hardy_cone::conditions::{
    blocked_condition, blocked_constant, embedding_sequence, single_block_condition, WeightSpec,
};
use hardy_cone::pomspace::BlockedVariant;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let u = WeightSpec::table(vec![
        (0.0, 0.3),
        (0.4, 2.0),
        (1.0, 0.8),
        (1.7, 5.0),
        (2.5, 0.2),
    ])?;
    let levels: Vec<f64> = (0..=8).map(|i| i as f64 / 8.0).collect();
    for v in [
        BlockedVariant::Prec1,
        BlockedVariant::Prec2,
        BlockedVariant::Prec3,
    ] {
        let r = blocked_constant(&u, 2.0, v, 3, &levels, 1000)?;
        println!(
            "{}: constant {:.6} over {} candidates, witness {:?}",
            v.name(),
            r.constant,
            r.n_sets_examined,
            r.witness
        );
    }

    let (l, r) = single_block_condition(&u, 2.0, 1, 0.5, 1000)?;
    let seq = embedding_sequence(3, 1, 0.5);
    let (le, re) = blocked_condition(&u, 2.0, BlockedVariant::Prec2, &seq, 1000)?;
    println!("single block {l:.6}/{r:.6}, as {seq:?}: {le:.6}/{re:.6}");
    assert_eq!((l.to_bits(), r.to_bits()), (le.to_bits(), re.to_bits()));
    Ok(())
}

fn main() {
    run_example().unwrap();
}
