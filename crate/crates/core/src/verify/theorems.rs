use serde::Serialize;

use super::norm::{bounds_with_sweep, operator_bound};
use super::{EquivalenceReport, Evidence};
use crate::conditions::{
    bp_chain_constant, check_p, gencon_constant, grid_condition, grid_constant,
    product_rectangle_constant, GridMode, QuadratureParams, WeightSpec, Witness,
};
use crate::error::{Error, Result};
use crate::hardy::{apply_hardy, HardyOp};
use crate::monotone::DecreasingSet;
use crate::pomspace::{build_vertical_grid, Axis, OrderTag, PomSpace, Shape};
use crate::util::{condition_ratio, pow_nonneg, ser_f64};

fn ideal_evidence(w: &Witness) -> Evidence {
    match w {
        Witness::Ideal { members } => Evidence::Ideal {
            members: members.clone(),
        },
        _ => Evidence::None,
    }
}

/// Worst relative deviation of `∫_D (Sχ_D)^p dν` from `ν(D)`.
fn indicator_identity(space: &PomSpace, p: f64, ideals: &[DecreasingSet]) -> (f64, Evidence) {
    let mut worst = (0.0, Evidence::None);
    for d in ideals {
        let f: Vec<f64> = d
            .mask(space.len())
            .iter()
            .map(|&b| f64::from(u8::from(b)))
            .collect();
        let sf = apply_hardy(space, &f);
        let inside: f64 = d
            .members
            .iter()
            .map(|&x| pow_nonneg(sf[x], p) * space.nu()[x])
            .sum();
        let mass = space.nu_of(&d.members);
        if mass > 0.0 {
            let dev = (inside - mass).abs() / mass;
            if dev > worst.0 {
                worst = (
                    dev,
                    Evidence::Ideal {
                        members: d.members.clone(),
                    },
                );
            }
        }
    }
    worst
}

/// Both directions of the equivalence between the condition over
/// `≺`-decreasing sets and boundedness on the cone.
pub fn check_theorem_2_2(
    space: &PomSpace,
    p: f64,
    budget: usize,
    seed: u64,
) -> Result<EquivalenceReport> {
    check_p(p)?;
    let (est, sweep) = bounds_with_sweep(space, p, HardyOp::Native, budget, seed)?;
    let gen = gencon_constant(space, p, budget)?;
    let mut rep = EquivalenceReport::new(format!("theorem_2_2 p={p}"));

    let (dev, w) = indicator_identity(space, p, &sweep.ideals);
    rep.le("indicator_identity", dev, 1e-12, false, w);

    if est.exact {
        // ‖Sχ_D‖^p = (1 + ratio(D)) ν(D)
        rep.le(
            "necessity_indicator",
            1.0 + gen.constant,
            est.lower.powf(p),
            true,
            ideal_evidence(&gen.witness),
        );
    }

    let samples = &sweep.ratios[sweep.n_indicators..];
    let sample_best =
        samples.iter().enumerate().fold(
            (0, 0.0),
            |acc, (i, &r)| if r > acc.1 { (i, r) } else { acc },
        );
    let sample_witness = || {
        sweep
            .candidates
            .get(sweep.n_indicators + sample_best.0)
            .map_or(Evidence::None, |f| Evidence::Function { values: f.clone() })
    };

    match est.upper {
        Some(upper) => {
            rep.le(
                "necessity_upper",
                gen.constant,
                upper.powf(p),
                true,
                ideal_evidence(&gen.witness),
            );
            rep.le("sufficiency", sample_best.1, upper, true, sample_witness());
            rep.le(
                "lower_le_upper",
                est.lower,
                upper,
                true,
                Evidence::Function {
                    values: est.witness_f.values.clone(),
                },
            );
        }
        None => {
            rep.push(
                "bounded_iff_condition",
                est.bounded == (est.lower.is_finite() && gen.constant.is_finite()),
                est.lower,
                gen.constant,
                Evidence::None,
            );
        }
    }

    if p == 1.0 && est.exact {
        // layer cakes are positive combinations of indicators
        let best_indicator = sweep.ratios[..sweep.n_indicators]
            .iter()
            .copied()
            .fold(0.0, f64::max);
        rep.push(
            "p1_indicator_extremal",
            sample_best.1 <= best_indicator * (1.0 + 1e-10),
            sample_best.1,
            best_indicator,
            sample_witness(),
        );
        rep.push(
            "p1_norm_is_one_plus_constant",
            (best_indicator - (1.0 + gen.constant)).abs() <= 1e-10 * best_indicator,
            best_indicator,
            1.0 + gen.constant,
            ideal_evidence(&gen.witness),
        );
    }
    Ok(rep)
}

/// The inequality chain between the rectangle operator, the full and
/// vertical grid conditions, and the partial means `S₁`, `S₂`.
pub fn check_theorem_3_2(
    grid: &PomSpace,
    p: f64,
    budget: usize,
    seed: u64,
) -> Result<EquivalenceReport> {
    check_p(p)?;
    grid.require_grid()?;
    let (a, _) = bounds_with_sweep(grid, p, HardyOp::Rectangle, budget, seed)?;
    let cb = grid_constant(grid, p, GridMode::Full, budget)?;
    let cv = grid_constant(grid, p, GridMode::Vertical, budget)?;
    let mut rep = EquivalenceReport::new(format!("theorem_3_2 p={p}"));

    if a.exact {
        rep.le(
            "b_le_a_pow_p",
            cb.constant,
            a.lower.powf(p),
            true,
            ideal_evidence(&cb.witness),
        );
    }
    rep.le(
        "vertical_le_full",
        cv.constant,
        cb.constant,
        true,
        ideal_evidence(&cv.witness),
    );

    let (k1, c1, _) = operator_bound(grid, p, HardyOp::Partial(Axis::First), budget)?;
    let (k2, c2, _) = operator_bound(grid, p, HardyOp::Partial(Axis::Second), budget)?;
    match (k1, k2) {
        (Some(k1), Some(k2)) => rep.le(
            "a_le_composition",
            a.lower,
            k1 * k2,
            true,
            Evidence::Function {
                values: a.witness_f.values.clone(),
            },
        ),
        _ => rep.push(
            "partials_bounded",
            c1.iter().chain(&c2).all(|c| c.is_finite()),
            c1[0],
            c2[0],
            Evidence::None,
        ),
    }
    Ok(rep)
}

/// Product weights `u₁ ⊗ u₂`: classification and the three implications,
/// continuous on `[0, T]²` and discrete on an `n × n` grid.
pub fn check_theorem_3_4(
    u1: &WeightSpec,
    u2: &WeightSpec,
    p: f64,
    n: usize,
    params: &QuadratureParams,
    budget: usize,
) -> Result<EquivalenceReport> {
    check_p(p)?;
    let f1 = bp_chain_constant(u1, p, None, params)?;
    let f2 = bp_chain_constant(u2, p, None, params)?;
    let rect = product_rectangle_constant(u1, u2, p, None, params)?;
    let mut rep = EquivalenceReport::new(format!("theorem_3_4 p={p} u1={u1} u2={u2}"));

    let factors_finite = f1.is_finite() && f2.is_finite();
    rep.push(
        "classification",
        rect.is_finite() == factors_finite,
        rect.constant,
        if factors_finite {
            f1.constant.max(f2.constant)
        } else {
            f64::INFINITY
        },
        Evidence::None,
    );
    if rect.is_finite() {
        for (name, f) in [
            ("factor_1_le_rectangle", &f1),
            ("factor_2_le_rectangle", &f2),
        ] {
            let w = match rect.witness {
                Witness::Rectangle { a1, a2 } => Evidence::Parameters {
                    values: vec![a1, a2],
                },
                _ => Evidence::None,
            };
            rep.le(name, f.constant, rect.constant, true, w);
        }
    }

    let grid = build_vertical_grid(n, n, &WeightSpec::Product(vec![u1.clone(), u2.clone()]))?;
    let full = grid_constant(&grid, p, GridMode::Full, budget)?;
    let mut best_rect = (0.0, Evidence::None);
    for c in 1..=n {
        for r in 1..=n {
            let members: Vec<usize> = (0..c)
                .flat_map(|j| (0..r).map(move |i| j * n + i))
                .collect();
            let d = DecreasingSet::new(&grid, members, OrderTag::Prec)?;
            let v = grid_condition(&grid, p, &d, GridMode::Full)?;
            if v > best_rect.0 {
                best_rect = (v, Evidence::Ideal { members: d.members });
            }
        }
    }
    rep.le(
        "discrete_rectangles_le_full",
        best_rect.0,
        full.constant,
        false,
        best_rect.1,
    );

    let (est, _) = bounds_with_sweep(&grid, p, HardyOp::Rectangle, budget, 0xB9)?;
    if let Some(upper) = est.upper {
        rep.le(
            "discrete_iterated_bound",
            est.lower,
            upper,
            true,
            Evidence::Function {
                values: est.witness_f.values,
            },
        );
    }
    Ok(rep)
}

/// Per-geodesic discrete `B_p` constants of a tree.
#[derive(Debug, Clone, Serialize)]
pub struct GeodesicReport {
    pub leaves: Vec<usize>,
    pub constants: Vec<f64>,
    #[serde(serialize_with = "ser_f64")]
    pub sup: f64,
    /// The tree condition constant, for comparison.
    #[serde(serialize_with = "ser_f64")]
    pub tree_constant: f64,
}

/// For each root-to-leaf path `v₁, …, v_L`:
/// `max_k Σ_{i>k} (k/i)^p ν(v_i) / Σ_{i≤k} ν(v_i)`.
pub fn tree_geodesic_constants(tree: &PomSpace, p: f64, budget: usize) -> Result<GeodesicReport> {
    check_p(p)?;
    if !matches!(tree.shape(), Shape::Tree | Shape::Chain) {
        return Err(Error::UnsupportedSpace { expected: "tree" });
    }
    let mut has_child = vec![false; tree.len()];
    for x in 0..tree.len() {
        if let Some(q) = tree.parent(x) {
            has_child[q] = true;
        }
    }
    let leaves: Vec<usize> = (0..tree.len()).filter(|&x| !has_child[x]).collect();
    let constants: Vec<f64> = leaves
        .iter()
        .map(|&leaf| {
            let mut path: Vec<f64> = tree.downset(leaf).map(|v| tree.nu()[v]).collect();
            path.reverse();
            (1..path.len())
                .map(|k| {
                    let num: f64 = (k + 1..=path.len())
                        .map(|i| pow_nonneg(k as f64 / i as f64, p) * path[i - 1])
                        .sum();
                    condition_ratio(num, path[..k].iter().sum())
                })
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(GeodesicReport {
        sup: constants.iter().copied().fold(0.0, f64::max),
        leaves,
        constants,
        tree_constant: gencon_constant(tree, p, budget)?.constant,
    })
}
