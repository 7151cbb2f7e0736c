//! Conditions for the blocked order on `∪ₙ (n, n+1)`.
//!
//! Per block, `L_n(a) = ∫_a^1 (a/t)^p u(n+t) dt` and
//! `R_n(a) = ∫_0^a u(n+t) dt`. Sides are always accumulated in block order
//! starting from `0.0`, so the single-block condition and its embedding
//! sequence produce identical bits.

use super::{check_p, first_max, ConditionReport, QuadratureParams, WeightSpec, Witness};
use crate::error::{Error, Result};
use crate::pomspace::BlockedVariant;
use crate::util::condition_ratio;

const MAX_SEQUENCES: usize = 2_000_000;

fn block_parts(u: &WeightSpec, p: f64, n: usize, a: f64, cells: usize) -> Result<(f64, f64)> {
    let base = n as f64;
    let lhs = if a == 0.0 || a == 1.0 {
        0.0
    } else {
        let h = (1.0 - a) / cells as f64;
        let mut acc = 0.0;
        for i in 0..cells {
            let t = a + (i as f64 + 0.5) * h;
            acc += (a / t).powf(p) * u.eval(base + t)?;
        }
        acc * h
    };
    let rhs = if a == 0.0 {
        0.0
    } else {
        let h = a / cells as f64;
        let mut acc = 0.0;
        for i in 0..cells {
            acc += u.eval(base + (i as f64 + 0.5) * h)?;
        }
        acc * h
    };
    Ok((lhs, rhs))
}

fn check_level(variant: BlockedVariant, a: f64) -> Result<()> {
    if (0.0..=1.0).contains(&a) {
        Ok(())
    } else {
        Err(Error::InvalidSequence {
            variant: variant.name(),
            reason: format!("level {a} is outside [0, 1]"),
        })
    }
}

/// `(Σ L_n(a_n), Σ R_n(a_n))` for an arbitrary (`prec1`) or non-increasing
/// (`prec2`) sequence.
pub fn blocked_condition(
    weight: &WeightSpec,
    p: f64,
    variant: BlockedVariant,
    a_seq: &[f64],
    cells: usize,
) -> Result<(f64, f64)> {
    check_p(p)?;
    match variant {
        BlockedVariant::Prec3 => {
            return Err(Error::InvalidSequence {
                variant: variant.name(),
                reason: "takes a block index and one level".into(),
            })
        }
        BlockedVariant::Prec2 => {
            if let Some(w) = a_seq.windows(2).find(|w| w[1] > w[0]) {
                return Err(Error::InvalidSequence {
                    variant: variant.name(),
                    reason: format!("sequence increases from {} to {}", w[0], w[1]),
                });
            }
        }
        BlockedVariant::Prec1 => {}
    }
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for (n, &a) in a_seq.iter().enumerate() {
        check_level(variant, a)?;
        let (l, r) = block_parts(weight, p, n, a, cells)?;
        lhs += l;
        rhs += r;
    }
    Ok((lhs, rhs))
}

/// `(L_n(a), ∫_0^{n+a} u)`.
pub fn single_block_condition(
    weight: &WeightSpec,
    p: f64,
    n: usize,
    a: f64,
    cells: usize,
) -> Result<(f64, f64)> {
    check_p(p)?;
    check_level(BlockedVariant::Prec3, a)?;
    let mut rhs = 0.0;
    for k in 0..n {
        rhs += block_parts(weight, p, k, 1.0, cells)?.1;
    }
    let (l, r) = block_parts(weight, p, n, a, cells)?;
    Ok((0.0 + l, rhs + r))
}

/// `1, …, 1, a, 0, …, 0` with `a` in block `n`.
pub fn embedding_sequence(n_blocks: usize, n: usize, a: f64) -> Vec<f64> {
    (0..n_blocks)
        .map(|k| match k.cmp(&n) {
            std::cmp::Ordering::Less => 1.0,
            std::cmp::Ordering::Equal => a,
            std::cmp::Ordering::Greater => 0.0,
        })
        .collect()
}

/// `L_n` and `R_n` on a common level set.
#[derive(Debug, Clone)]
pub struct BlockedTables {
    pub levels: Vec<f64>,
    pub lhs: Vec<Vec<f64>>,
    pub rhs: Vec<Vec<f64>>,
}

pub fn blocked_tables(
    weight: &WeightSpec,
    p: f64,
    n_blocks: usize,
    levels: &[f64],
    cells: usize,
) -> Result<BlockedTables> {
    check_p(p)?;
    let mut lv = levels.to_vec();
    lv.extend([0.0, 1.0]);
    lv.sort_by(f64::total_cmp);
    lv.dedup();
    for &a in &lv {
        check_level(BlockedVariant::Prec1, a)?;
    }
    let mut lhs = Vec::with_capacity(n_blocks);
    let mut rhs = Vec::with_capacity(n_blocks);
    for n in 0..n_blocks {
        let parts = lv
            .iter()
            .map(|&a| block_parts(weight, p, n, a, cells))
            .collect::<Result<Vec<_>>>()?;
        lhs.push(parts.iter().map(|x| x.0).collect());
        rhs.push(parts.iter().map(|x| x.1).collect());
    }
    Ok(BlockedTables {
        levels: lv,
        lhs,
        rhs,
    })
}

/// Advance `idx` to the next sequence in lexicographic order; with
/// `non_increasing` only non-increasing level indices are produced.
fn next_sequence(idx: &mut [usize], n_levels: usize, non_increasing: bool) -> bool {
    for pos in (0..idx.len()).rev() {
        let cap = if non_increasing && pos > 0 {
            idx[pos - 1]
        } else {
            n_levels - 1
        };
        if idx[pos] < cap {
            idx[pos] += 1;
            for later in &mut idx[pos + 1..] {
                *later = 0;
            }
            return true;
        }
    }
    false
}

/// Sup of the blocked condition over level sequences drawn from `levels`
/// (with `0` and `1` always included).
pub fn blocked_constant(
    weight: &WeightSpec,
    p: f64,
    variant: BlockedVariant,
    n_blocks: usize,
    levels: &[f64],
    cells: usize,
) -> Result<ConditionReport> {
    if n_blocks == 0 {
        return Err(Error::Domain("need at least one block".into()));
    }
    let t = blocked_tables(weight, p, n_blocks, levels, cells)?;
    let nl = t.levels.len();
    let one = nl - 1;
    let mut report = ConditionReport {
        constant: 0.0,
        witness: Witness::None,
        n_sets_examined: 0,
        exact: true,
        divergence: None,
        quadrature: Some(QuadratureParams {
            truncate: n_blocks as f64,
            cells,
        }),
    };
    match variant {
        BlockedVariant::Prec3 => {
            let mut ratios = Vec::with_capacity(n_blocks * nl);
            for n in 0..n_blocks {
                let mut prior = 0.0;
                for k in 0..n {
                    prior += t.rhs[k][one];
                }
                for l in 0..nl {
                    ratios.push(condition_ratio(0.0 + t.lhs[n][l], prior + t.rhs[n][l]));
                }
            }
            report.n_sets_examined = ratios.len();
            if let Some((i, v)) = first_max(&ratios) {
                report.constant = v;
                report.witness = Witness::Block {
                    n: i / nl,
                    a: t.levels[i % nl],
                };
            }
        }
        BlockedVariant::Prec1 | BlockedVariant::Prec2 => {
            let non_increasing = variant == BlockedVariant::Prec2;
            let mut idx = vec![0usize; n_blocks];
            let mut best: Option<(f64, Vec<usize>)> = None;
            let mut count = 0usize;
            loop {
                count += 1;
                if count > MAX_SEQUENCES {
                    return Err(Error::Domain(format!(
                        "more than {MAX_SEQUENCES} level sequences; use fewer blocks or levels"
                    )));
                }
                let mut lhs = 0.0;
                let mut rhs = 0.0;
                for (n, &l) in idx.iter().enumerate() {
                    lhs += t.lhs[n][l];
                    rhs += t.rhs[n][l];
                }
                let v = condition_ratio(lhs, rhs);
                if best.as_ref().is_none_or(|(b, _)| v > *b) {
                    best = Some((v, idx.clone()));
                }
                if !next_sequence(&mut idx, nl, non_increasing) {
                    break;
                }
            }
            report.n_sets_examined = count;
            if let Some((v, seq)) = best {
                report.constant = v;
                report.witness = Witness::Sequence {
                    a: seq.iter().map(|&l| t.levels[l]).collect(),
                };
            }
        }
    }
    Ok(report)
}

/// `a(x − ⌊a⌋)/x − (a − ⌊a⌋)`, nonnegative for `x ≥ a > 0`.
pub fn remark_comparison_gap(a: f64, x: f64) -> f64 {
    let m = a.floor();
    a * (x - m) / x - (a - m)
}
