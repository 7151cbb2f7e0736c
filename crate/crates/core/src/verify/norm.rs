use rayon::prelude::*;
use serde::Serialize;

use crate::conditions::{check_p, first_max, gencon_constant, ideal_family, WeightSpec};
use crate::error::Result;
use crate::hardy::{lemma_constant, HardyOp};
use crate::monotone::{random_decreasing_function, MonotoneFunction};
use crate::pomspace::{build_grid, Axis, OrderTag, PomSpace};
use crate::util::{condition_ratio, pow_nonneg, ser_f64, ser_opt_f64};

/// Two-sided estimate of the operator norm on the `≺`-decreasing cone.
#[derive(Debug, Clone, Serialize)]
pub struct NormEstimate {
    pub operator: HardyOp,
    pub p: f64,
    /// Best `‖Sf‖_p / ‖f‖_p` found.
    #[serde(serialize_with = "ser_f64")]
    pub lower: f64,
    /// Bound from the condition constants; `None` for `p < 1`.
    #[serde(serialize_with = "ser_opt_f64")]
    pub upper: Option<f64>,
    /// Whether the condition constants behind the bound are finite.
    pub bounded: bool,
    /// Condition constants the bound is built from, one per factor of the
    /// operator.
    pub condition_constants: Vec<f64>,
    /// Every ideal was examined, both for indicators and for the constants.
    pub exact: bool,
    pub n_indicators: usize,
    pub n_samples: usize,
    pub witness_f: MonotoneFunction,
}

/// The same grid with `≤` running along `axis`, so its Hardy operator is the
/// partial mean on that axis.
pub fn axis_space(space: &PomSpace, axis: Axis) -> Result<PomSpace> {
    let (nx, ny, along) = space.require_grid()?;
    if along == axis {
        return Ok(space.clone());
    }
    build_grid(nx, ny, &WeightSpec::Constant(1.0), axis)?.with_nu(space.nu().to_vec())
}

/// `‖Sf‖_p / ‖f‖_p` against `ν`.
pub fn rayleigh(space: &PomSpace, op: HardyOp, p: f64, f: &[f64]) -> Result<f64> {
    let sf = op.apply(space, f)?;
    let nu = space.nu();
    let num: f64 = sf.iter().zip(nu).map(|(v, m)| pow_nonneg(*v, p) * m).sum();
    let den: f64 = f.iter().zip(nu).map(|(v, m)| pow_nonneg(*v, p) * m).sum();
    Ok(condition_ratio(num.powf(1.0 / p), den.powf(1.0 / p)))
}

/// `‖S‖ ≤ C_L(p) (1 + C)` for the native operator with condition constant
/// `C`, multiplied over the factors of the rectangle mean. Returns the bound
/// (`None` for `p < 1`), the constants and whether they were exhaustive.
pub fn operator_bound(
    space: &PomSpace,
    p: f64,
    op: HardyOp,
    budget: usize,
) -> Result<(Option<f64>, Vec<f64>, bool)> {
    check_p(p)?;
    let factors: Vec<PomSpace> = match op {
        HardyOp::Native => vec![space.clone()],
        HardyOp::Partial(axis) => vec![axis_space(space, axis)?],
        HardyOp::Rectangle => vec![
            axis_space(space, Axis::First)?,
            axis_space(space, Axis::Second)?,
        ],
    };
    let mut constants = Vec::with_capacity(factors.len());
    let mut exact = true;
    for s in &factors {
        let r = gencon_constant(s, p, budget)?;
        exact &= r.exact;
        constants.push(r.constant);
    }
    let upper = (p >= 1.0).then(|| {
        constants
            .iter()
            .map(|c| lemma_constant(p) * (1.0 + c))
            .product()
    });
    Ok((upper, constants, exact))
}

fn sample_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(i as u64)
}

/// Candidate functions behind a [`NormEstimate`]: indicators first, then
/// random layer cakes, with their ratios.
pub(crate) struct Sweep {
    pub candidates: Vec<Vec<f64>>,
    pub ratios: Vec<f64>,
    pub n_indicators: usize,
    pub ideals: Vec<crate::monotone::DecreasingSet>,
}

/// Lower bound from indicators of ideals (half the budget) and random
/// layer-cake functions (the other half); upper bound from
/// [`operator_bound`].
pub fn cone_norm_bounds(
    space: &PomSpace,
    p: f64,
    op: HardyOp,
    budget: usize,
    seed: u64,
) -> Result<NormEstimate> {
    Ok(bounds_with_sweep(space, p, op, budget, seed)?.0)
}

pub(crate) fn bounds_with_sweep(
    space: &PomSpace,
    p: f64,
    op: HardyOp,
    budget: usize,
    seed: u64,
) -> Result<(NormEstimate, Sweep)> {
    check_p(p)?;
    let n_ind = (budget / 2).max(1);
    let n_rand = budget.saturating_sub(n_ind);
    let (ideals, ideals_exact) = ideal_family(space, n_ind, seed);
    let mut candidates: Vec<Vec<f64>> = ideals
        .iter()
        .map(|d| MonotoneFunction::indicator(space, d).values)
        .collect();
    let n_indicators = candidates.len();
    candidates.par_extend((0..n_rand).into_par_iter().map(|i| {
        random_decreasing_function(space, OrderTag::Prec, 1 + i % 6, sample_seed(seed, i)).values
    }));
    let ratios = candidates
        .par_iter()
        .map(|f| rayleigh(space, op, p, f))
        .collect::<Result<Vec<f64>>>()?;
    let (best, lower) = first_max(&ratios).unwrap_or((0, 0.0));
    let (upper, constants, constants_exact) = operator_bound(space, p, op, budget)?;
    let estimate = NormEstimate {
        operator: op,
        p,
        lower,
        upper,
        bounded: constants.iter().all(|c| c.is_finite()),
        condition_constants: constants,
        exact: ideals_exact && constants_exact,
        n_indicators,
        n_samples: n_rand,
        witness_f: MonotoneFunction {
            values: candidates[best].clone(),
            order: OrderTag::Prec,
        },
    };
    Ok((
        estimate,
        Sweep {
            candidates,
            ratios,
            n_indicators,
            ideals,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pomspace::{build_chain, build_vertical_grid};

    #[test]
    fn singleton_is_identity() {
        let c = build_chain(1, &WeightSpec::Constant(1.0)).unwrap();
        let e = cone_norm_bounds(&c, 2.0, HardyOp::Native, 100, 1).unwrap();
        assert_eq!(e.lower, 1.0);
        assert!(e.upper.unwrap() >= 1.0);
    }

    #[test]
    fn chain_of_four_at_p1() {
        let c = build_chain(4, &WeightSpec::Constant(1.0)).unwrap();
        let e = cone_norm_bounds(&c, 1.0, HardyOp::Native, 2000, 7).unwrap();
        // layer cakes never beat the best indicator: 1 + 13/12
        assert!((e.lower - 25.0 / 12.0).abs() < 1e-12, "{}", e.lower);
        assert!(e.exact);
        // the bound 1 + C is attained at p = 1
        assert!((e.upper.unwrap() - e.lower).abs() < 1e-12);
    }

    #[test]
    fn witness_reproduces_lower() {
        let g = build_vertical_grid(3, 3, &WeightSpec::Power(-0.3)).unwrap();
        for op in [
            HardyOp::Native,
            HardyOp::Partial(Axis::First),
            HardyOp::Rectangle,
        ] {
            let e = cone_norm_bounds(&g, 1.7, op, 400, 3).unwrap();
            let again = rayleigh(&g, op, 1.7, &e.witness_f.values).unwrap();
            assert!((again - e.lower).abs() <= 1e-10 * e.lower);
            assert!(e.lower <= e.upper.unwrap());
        }
    }

    #[test]
    fn small_p_has_no_numeric_upper() {
        let c = build_chain(5, &WeightSpec::Constant(1.0)).unwrap();
        let e = cone_norm_bounds(&c, 0.5, HardyOp::Native, 100, 1).unwrap();
        assert!(e.upper.is_none() && e.bounded);
        assert!(e.lower >= 1.0);
    }

    #[test]
    fn determinism() {
        let g = build_vertical_grid(4, 4, &WeightSpec::Power(0.4)).unwrap();
        let a = cone_norm_bounds(&g, 2.0, HardyOp::Rectangle, 300, 9).unwrap();
        let b = cone_norm_bounds(&g, 2.0, HardyOp::Rectangle, 300, 9).unwrap();
        assert_eq!(a.lower.to_bits(), b.lower.to_bits());
        assert_eq!(a.witness_f, b.witness_f);
    }
}
