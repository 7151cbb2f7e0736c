//! Constructors for the example spaces.
//!
//! Continuous spaces are cut into uniform cells; each atom sits at the right
//! end of its cell and carries `weight(position) * cell volume` of `ν`.
//! Every built-in `μ_x` is uniform over `X_x`, i.e. a quotient of counting
//! measure.

use std::collections::VecDeque;

use super::{Axis, BlockedVariant, Coord, MeasureFamily, Point, PomSpace, Shape};
use crate::conditions::WeightSpec;
use crate::error::{Error, Result};

fn eval_weight(weight: &WeightSpec, coords: &[f64], atom: usize) -> Result<f64> {
    weight.eval_point(coords).map_err(|e| Error::Construction {
        atom,
        reason: e.to_string(),
    })
}

/// `μ_x = g / g(X_x)`; `parent` must already be a linear extension.
fn quotient_family(parent: &[Option<usize>], global: Vec<f64>) -> MeasureFamily {
    let mut norm = vec![0.0; global.len()];
    for x in 0..global.len() {
        norm[x] = global[x] + parent[x].map_or(0.0, |p| norm[p]);
    }
    MeasureFamily::Quotient { global, norm }
}

/// Chain on `(0, 1]` with `n_atoms` cells.
pub fn build_chain(n_atoms: usize, weight: &WeightSpec) -> Result<PomSpace> {
    if n_atoms == 0 {
        return Err(Error::Construction {
            atom: 0,
            reason: "a chain needs at least one atom".into(),
        });
    }
    build_chain_scaled(n_atoms, weight, 1.0 / n_atoms as f64)
}

/// Chain with atoms at `k * step`, `k = 1..=n_atoms`.
pub fn build_chain_scaled(n_atoms: usize, weight: &WeightSpec, step: f64) -> Result<PomSpace> {
    if n_atoms == 0 || !(step > 0.0) {
        return Err(Error::Construction {
            atom: 0,
            reason: "a chain needs at least one atom and a positive step".into(),
        });
    }
    let mut points = Vec::with_capacity(n_atoms);
    let mut nu = Vec::with_capacity(n_atoms);
    for k in 0..n_atoms {
        let pos = (k + 1) as f64 * step;
        nu.push(eval_weight(weight, &[pos], k)? * step);
        points.push(Point {
            id: k,
            coord: Coord::Line(pos),
        });
    }
    let parent: Vec<Option<usize>> = (0..n_atoms).map(|k| k.checked_sub(1)).collect();
    let covers = parent.iter().map(|p| p.iter().copied().collect()).collect();
    let mu = quotient_family(&parent, vec![1.0; n_atoms]);
    PomSpace::from_parts(points, parent, covers, mu, nu, Shape::Chain)
}

/// `ℝ²₊` grid with the vertical order: `≤` within columns, `≺` the product order.
pub fn build_vertical_grid(nx: usize, ny: usize, weight: &WeightSpec) -> Result<PomSpace> {
    build_grid(nx, ny, weight, Axis::Second)
}

/// Grid on `(0,1]²` whose `≤` runs along `along`; `≺` is always the product order.
pub fn build_grid(nx: usize, ny: usize, weight: &WeightSpec, along: Axis) -> Result<PomSpace> {
    if nx == 0 || ny == 0 {
        return Err(Error::Construction {
            atom: 0,
            reason: "grid dimensions must be positive".into(),
        });
    }
    let (hx, hy) = (1.0 / nx as f64, 1.0 / ny as f64);
    let n = nx * ny;
    let mut points = Vec::with_capacity(n);
    let mut nu = Vec::with_capacity(n);
    let mut parent = Vec::with_capacity(n);
    let mut covers = Vec::with_capacity(n);
    for col in 1..=nx {
        for row in 1..=ny {
            let id = points.len();
            let (x, y) = (col as f64 * hx, row as f64 * hy);
            nu.push(eval_weight(weight, &[x, y], id)? * hx * hy);
            points.push(Point {
                id,
                coord: Coord::Cell { col, row, x, y },
            });
            let left = (col > 1).then(|| id - ny);
            let below = (row > 1).then(|| id - 1);
            parent.push(match along {
                Axis::First => left,
                Axis::Second => below,
            });
            covers.push(left.into_iter().chain(below).collect::<Vec<_>>());
        }
    }
    let mu = quotient_family(&parent, vec![1.0; n]);
    PomSpace::from_parts(
        points,
        parent,
        covers,
        mu,
        nu,
        Shape::Grid { nx, ny, along },
    )
}

/// Rooted tree from a parent map (`None` marks the root) with per-vertex `ν`.
///
/// Ids are assigned in breadth-first order (children by label), so the id
/// of a vertex generally differs from its label; the label is kept in the
/// coordinate.
pub fn build_tree(parents: &[Option<usize>], nu: &[f64]) -> Result<PomSpace> {
    let n = parents.len();
    if n == 0 {
        return Err(Error::InvalidTree("empty parent map".into()));
    }
    if nu.len() != n {
        return Err(Error::InvalidTree(format!(
            "{} weights for {n} vertices",
            nu.len()
        )));
    }
    let roots: Vec<usize> = (0..n).filter(|&v| parents[v].is_none()).collect();
    let root = match roots.as_slice() {
        [r] => *r,
        [] => {
            return Err(Error::InvalidTree(
                "no root (every vertex has a parent)".into(),
            ))
        }
        many => {
            return Err(Error::InvalidTree(format!(
                "multiple roots: {:?}",
                &many[..many.len().min(5)]
            )))
        }
    };
    let mut children = vec![Vec::new(); n];
    for (v, p) in parents.iter().enumerate() {
        if let Some(p) = *p {
            if p >= n {
                return Err(Error::InvalidTree(format!(
                    "vertex {v} has unknown parent {p}"
                )));
            }
            children[p].push(v);
        }
    }
    let mut new_id = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        new_id[v] = order.len();
        order.push(v);
        queue.extend(children[v].iter().copied());
    }
    if order.len() != n {
        let stray = (0..n).find(|&v| new_id[v] == usize::MAX).unwrap_or(0);
        return Err(Error::InvalidTree(format!(
            "vertex {stray} is not reachable from the root (cycle)"
        )));
    }
    let mut points = Vec::with_capacity(n);
    let mut parent = Vec::with_capacity(n);
    let mut masses = Vec::with_capacity(n);
    for (id, &label) in order.iter().enumerate() {
        let m = nu[label];
        if !(m.is_finite() && m >= 0.0) {
            return Err(Error::Construction {
                atom: id,
                reason: format!("vertex {label} has weight {m}"),
            });
        }
        masses.push(m);
        points.push(Point {
            id,
            coord: Coord::Vertex(label),
        });
        parent.push(parents[label].map(|p| new_id[p]));
    }
    let covers = parent.iter().map(|p| p.iter().copied().collect()).collect();
    let mu = quotient_family(&parent, vec![1.0; n]);
    PomSpace::from_parts(points, parent, covers, mu, masses, Shape::Tree)
}

/// Union of unit blocks `(n, n+1)`, each cut into `cells` cells. `≤` is the
/// blocked order `◂` (same block, usual order); `variant` picks `≺`.
pub fn build_blocked_chain(
    n_blocks: usize,
    cells: usize,
    variant: BlockedVariant,
    weight: &WeightSpec,
) -> Result<PomSpace> {
    if n_blocks == 0 || cells == 0 {
        return Err(Error::Construction {
            atom: 0,
            reason: "block count and cells per block must be positive".into(),
        });
    }
    let h = 1.0 / cells as f64;
    let n = n_blocks * cells;
    let mut points = Vec::with_capacity(n);
    let mut nu = Vec::with_capacity(n);
    let mut parent = Vec::with_capacity(n);
    let mut covers = Vec::with_capacity(n);
    for block in 0..n_blocks {
        for cell in 0..cells {
            let id = points.len();
            let pos = block as f64 + (cell + 1) as f64 * h;
            nu.push(eval_weight(weight, &[pos], id)? * h);
            points.push(Point {
                id,
                coord: Coord::Block { block, cell, pos },
            });
            let prev_in_block = (cell > 0).then(|| id - 1);
            parent.push(prev_in_block);
            covers.push(match variant {
                BlockedVariant::Prec1 => prev_in_block.into_iter().collect::<Vec<_>>(),
                BlockedVariant::Prec2 => {
                    let prev_block = (block > 0).then(|| id - cells);
                    let mut c: Vec<usize> = prev_block.into_iter().chain(prev_in_block).collect();
                    c.sort_unstable();
                    c
                }
                BlockedVariant::Prec3 => id.checked_sub(1).into_iter().collect(),
            });
        }
    }
    let mu = quotient_family(&parent, vec![1.0; n]);
    PomSpace::from_parts(
        points,
        parent,
        covers,
        mu,
        nu,
        Shape::Blocked {
            n_blocks,
            cells,
            variant,
        },
    )
}

/// Space from an arbitrary order and a global measure, with `μ_x = μ/μ(X_x)`.
///
/// `leq` and `prec` are generating pairs `(u, x)` meaning `u ≤ x` (resp.
/// `u ≺ x`); their reflexive-transitive closures are taken. `prec = None`
/// makes `≺` equal to `≤`. Ids must be a linear extension of `≺`.
pub fn build_from_measure(
    coords: Vec<Coord>,
    leq: &[(usize, usize)],
    prec: Option<&[(usize, usize)]>,
    mu_global: &[f64],
    nu: &[f64],
) -> Result<PomSpace> {
    let n = coords.len();
    if mu_global.len() != n || nu.len() != n {
        return Err(Error::Construction {
            atom: 0,
            reason: "measure lengths disagree with the point count".into(),
        });
    }
    if let Some((i, m)) = mu_global.iter().enumerate().find(|(_, m)| !(**m > 0.0)) {
        return Err(Error::Construction {
            atom: i,
            reason: format!("global measure must be positive, got {m}"),
        });
    }
    let below = closure(n, leq)?;
    let mut parent = vec![None; n];
    for x in 0..n {
        let strict: Vec<usize> = (0..n).filter(|&u| u != x && below[x][u]).collect();
        for (i, &a) in strict.iter().enumerate() {
            for &b in &strict[i + 1..] {
                if !below[a][b] && !below[b][a] {
                    return Err(Error::NotTotallyOrdered(a, b));
                }
            }
        }
        // the top of a chain is the element with the most points below it
        parent[x] = strict
            .iter()
            .copied()
            .max_by_key(|&u| (0..n).filter(|&v| below[u][v]).count());
    }
    let covers = match prec {
        None => parent.iter().map(|p| p.iter().copied().collect()).collect(),
        Some(pairs) => {
            let rel = closure(n, pairs)?;
            (0..n)
                .map(|x| {
                    (0..n)
                        .filter(|&u| u != x && rel[x][u])
                        .filter(|&u| !(0..n).any(|v| v != u && v != x && rel[x][v] && rel[v][u]))
                        .collect()
                })
                .collect()
        }
    };
    let points = coords
        .into_iter()
        .enumerate()
        .map(|(id, coord)| Point { id, coord })
        .collect();
    let mu = quotient_family_checked(&parent, mu_global.to_vec())?;
    PomSpace::from_parts(points, parent, covers, mu, nu.to_vec(), Shape::Custom)
}

fn quotient_family_checked(parent: &[Option<usize>], global: Vec<f64>) -> Result<MeasureFamily> {
    for (x, p) in parent.iter().enumerate() {
        if let Some(p) = *p {
            if p >= x {
                return Err(Error::NotLinearExtension { pred: p, succ: x });
            }
        }
    }
    Ok(quotient_family(parent, global))
}

/// `below[x][u]` iff `u` is below `x` in the reflexive-transitive closure.
fn closure(n: usize, pairs: &[(usize, usize)]) -> Result<Vec<Vec<bool>>> {
    let mut below = vec![vec![false; n]; n];
    for (x, row) in below.iter_mut().enumerate() {
        row[x] = true;
    }
    for &(u, x) in pairs {
        if u >= n {
            return Err(Error::UnknownPoint(u));
        }
        if x >= n {
            return Err(Error::UnknownPoint(x));
        }
        below[x][u] = true;
    }
    for k in 0..n {
        for x in 0..n {
            if below[x][k] {
                for u in 0..n {
                    if below[k][u] {
                        below[x][u] = true;
                    }
                }
            }
        }
    }
    for x in 0..n {
        for u in 0..n {
            if u != x && below[x][u] && below[u][x] {
                return Err(Error::OrderCycle(x));
            }
        }
    }
    Ok(below)
}
