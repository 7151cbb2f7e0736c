//! Decreasing sets (order ideals) and decreasing functions.
//!
//! Ideals are enumerated in lexicographic order of their sorted member ids.
//! Because ids are a linear extension of `≺`, every lexicographic prefix of
//! an ideal is again an ideal, so a depth-first search that only appends ids
//! larger than the current maximum visits each ideal exactly once.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pomspace::{BlockedVariant, OrderTag, PomSpace, Shape};
use crate::util::ser_vec_f64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecreasingSet {
    /// Sorted, deduplicated member ids.
    pub members: Vec<usize>,
    pub order: OrderTag,
}

impl DecreasingSet {
    /// Validate `members` as an ideal of `space` under `order`.
    pub fn new(space: &PomSpace, mut members: Vec<usize>, order: OrderTag) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        let mask = member_mask(space, &members)?;
        check_closed(space, &mask, order)?;
        Ok(DecreasingSet { members, order })
    }

    /// Whole ground set.
    pub fn full(space: &PomSpace, order: OrderTag) -> Self {
        DecreasingSet {
            members: (0..space.len()).collect(),
            order,
        }
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &x in &self.members {
            m[x] = true;
        }
        m
    }

    /// Column heights of a grid ideal (the discrete boundary function).
    pub fn column_profile(&self, space: &PomSpace) -> Option<Vec<usize>> {
        let (nx, ny, _) = space.grid_dims()?;
        let mut heights = vec![0; nx];
        for &x in &self.members {
            let col = x / ny;
            let row = x % ny + 1;
            heights[col] = heights[col].max(row);
        }
        Some(heights)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneFunction {
    #[serde(serialize_with = "ser_vec_f64")]
    pub values: Vec<f64>,
    pub order: OrderTag,
}

impl MonotoneFunction {
    pub fn new(space: &PomSpace, values: Vec<f64>, order: OrderTag) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::Domain(format!(
                "function has {} values for {} points",
                values.len(),
                space.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
            return Err(Error::Domain(format!(
                "function value {v} is not nonnegative"
            )));
        }
        for x in 0..space.len() {
            for &c in space.covers(order, x) {
                if values[c] < values[x] {
                    return Err(Error::NotDecreasing {
                        member: x,
                        missing: c,
                    });
                }
            }
        }
        Ok(MonotoneFunction { values, order })
    }

    pub fn indicator(space: &PomSpace, set: &DecreasingSet) -> Self {
        let mut values = vec![0.0; space.len()];
        for &x in &set.members {
            values[x] = 1.0;
        }
        MonotoneFunction {
            values,
            order: set.order,
        }
    }
}

fn member_mask(space: &PomSpace, members: &[usize]) -> Result<Vec<bool>> {
    let mut mask = vec![false; space.len()];
    for &x in members {
        if x >= space.len() {
            return Err(Error::UnknownPoint(x));
        }
        mask[x] = true;
    }
    Ok(mask)
}

fn check_closed(space: &PomSpace, mask: &[bool], order: OrderTag) -> Result<()> {
    for x in (0..space.len()).filter(|&x| mask[x]) {
        if let Some(&c) = space.covers(order, x).iter().find(|&&c| !mask[c]) {
            return Err(Error::NotDecreasing {
                member: x,
                missing: c,
            });
        }
    }
    Ok(())
}

/// Whether `members` is downward closed under `order`.
pub fn is_decreasing_set(space: &PomSpace, members: &[usize], order: OrderTag) -> Result<bool> {
    let mask = member_mask(space, members)?;
    Ok(check_closed(space, &mask, order).is_ok())
}

/// Whether `values` is decreasing under `order` (`u ≺ x ⇒ f(u) ≥ f(x)`).
pub fn is_decreasing_function(space: &PomSpace, values: &[f64], order: OrderTag) -> bool {
    values.len() == space.len()
        && (0..space.len()).all(|x| {
            space
                .covers(order, x)
                .iter()
                .all(|&c| values[c] >= values[x])
        })
}

/// Lazy lexicographic stream of all nonempty ideals.
pub struct Ideals<'a> {
    space: &'a PomSpace,
    order: OrderTag,
    stack: Vec<usize>,
    in_set: Vec<bool>,
    resume: usize,
    done: bool,
}

pub fn ideals(space: &PomSpace, order: OrderTag) -> Ideals<'_> {
    Ideals {
        space,
        order,
        stack: Vec::new(),
        in_set: vec![false; space.len()],
        resume: 0,
        done: space.is_empty(),
    }
}

impl Ideals<'_> {
    fn addable(&self, c: usize) -> bool {
        self.space
            .covers(self.order, c)
            .iter()
            .all(|&p| self.in_set[p])
    }
}

impl Iterator for Ideals<'_> {
    type Item = DecreasingSet;

    fn next(&mut self) -> Option<DecreasingSet> {
        if self.done {
            return None;
        }
        let n = self.space.len();
        loop {
            if let Some(c) = (self.resume..n).find(|&c| self.addable(c)) {
                self.stack.push(c);
                self.in_set[c] = true;
                self.resume = c + 1;
                return Some(DecreasingSet {
                    members: self.stack.clone(),
                    order: self.order,
                });
            }
            match self.stack.pop() {
                Some(top) => {
                    self.in_set[top] = false;
                    self.resume = top + 1;
                }
                None => {
                    self.done = true;
                    return None;
                }
            }
        }
    }
}

/// All nonempty ideals, or an overflow error once more than `cap` are found.
pub fn enumerate_decreasing_sets(
    space: &PomSpace,
    order: OrderTag,
    cap: usize,
) -> Result<Vec<DecreasingSet>> {
    let mut out = Vec::new();
    for d in ideals(space, order) {
        if out.len() == cap {
            return Err(Error::EnumerationOverflow {
                cap,
                partial: out.len(),
            });
        }
        out.push(d);
    }
    Ok(out)
}

pub fn count_ideals(space: &PomSpace, order: OrderTag, cap: usize) -> Result<usize> {
    let mut count = 0;
    for _ in ideals(space, order) {
        if count == cap {
            return Err(Error::EnumerationOverflow {
                cap,
                partial: count,
            });
        }
        count += 1;
    }
    Ok(count)
}

/// Down-closure of `seeds` under `order`.
pub fn down_closure(space: &PomSpace, order: OrderTag, seeds: &[usize]) -> DecreasingSet {
    let mut mask = vec![false; space.len()];
    let mut stack: Vec<usize> = seeds.to_vec();
    while let Some(x) = stack.pop() {
        if mask[x] {
            continue;
        }
        mask[x] = true;
        stack.extend(space.covers(order, x).iter().copied().filter(|&c| !mask[c]));
    }
    DecreasingSet {
        members: (0..space.len()).filter(|&x| mask[x]).collect(),
        order,
    }
}

/// Non-increasing profile with a positive first entry, each entry in `0..=max`.
fn random_profile<R: Rng>(rng: &mut R, len: usize, max: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(len);
    let mut prev = max;
    for i in 0..len {
        let h = if i == 0 {
            rng.gen_range(1..=max)
        } else {
            rng.gen_range(0..=prev)
        };
        out.push(h);
        prev = h;
    }
    out
}

/// A random nonempty ideal. Grids and blocked chains sample boundary
/// profiles; other spaces take the down-closure of a few random points.
/// Not uniform over ideals.
pub fn random_decreasing_set<R: Rng>(
    space: &PomSpace,
    order: OrderTag,
    rng: &mut R,
) -> DecreasingSet {
    let n = space.len();
    match (space.shape(), order) {
        (Shape::Chain, _) => DecreasingSet {
            members: (0..rng.gen_range(1..=n)).collect(),
            order,
        },
        (Shape::Grid { nx, ny, .. }, OrderTag::Prec) => {
            let heights = random_profile(rng, *nx, *ny);
            let members = heights
                .iter()
                .enumerate()
                .flat_map(|(c, &h)| (0..h).map(move |r| c * ny + r))
                .collect();
            DecreasingSet { members, order }
        }
        (
            Shape::Blocked {
                n_blocks,
                cells,
                variant,
            },
            _,
        ) => {
            let lengths = match (order, variant) {
                (OrderTag::Prec, BlockedVariant::Prec2) => random_profile(rng, *n_blocks, *cells),
                (OrderTag::Prec, BlockedVariant::Prec3) => {
                    let k = rng.gen_range(1..=n);
                    (0..*n_blocks)
                        .map(|b| k.saturating_sub(b * cells).min(*cells))
                        .collect()
                }
                _ => loop {
                    let l: Vec<usize> = (0..*n_blocks).map(|_| rng.gen_range(0..=*cells)).collect();
                    if l.iter().any(|&x| x > 0) {
                        break l;
                    }
                },
            };
            let members = lengths
                .iter()
                .enumerate()
                .flat_map(|(b, &len)| (0..len).map(move |k| b * cells + k))
                .collect();
            DecreasingSet { members, order }
        }
        _ => {
            let k = rng.gen_range(1..=n.min(4));
            let seeds: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
            down_closure(space, order, &seeds)
        }
    }
}

pub fn sample_decreasing_sets(
    space: &PomSpace,
    order: OrderTag,
    count: usize,
    seed: u64,
) -> Vec<DecreasingSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_decreasing_set(space, order, &mut rng))
        .collect()
}

/// `Σ_k c_k χ_{D_k}` over `n_layers` random ideals with random positive `c_k`.
pub fn random_decreasing_function(
    space: &PomSpace,
    order: OrderTag,
    n_layers: usize,
    seed: u64,
) -> MonotoneFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_decreasing_function_with(space, order, n_layers, &mut rng)
}

pub fn random_decreasing_function_with<R: Rng>(
    space: &PomSpace,
    order: OrderTag,
    n_layers: usize,
    rng: &mut R,
) -> MonotoneFunction {
    let mut values = vec![0.0; space.len()];
    for _ in 0..n_layers.max(1) {
        let d = random_decreasing_set(space, order, rng);
        let c = (rng.gen_range(-2.0..2.0f64)).exp();
        for &x in &d.members {
            values[x] += c;
        }
    }
    MonotoneFunction { values, order }
}

/// One level of a layer-cake decomposition: `set = {f ≥ threshold}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Layer {
    pub threshold: f64,
    pub set: DecreasingSet,
}

/// Level sets `{f ≥ t}` for the distinct positive values `t` of `f`, in
/// increasing order of `t`. Since `f` is decreasing these are ideals, and
/// `f = Σ_k (t_k − t_{k−1}) χ_{D_k}`.
pub fn layer_cake(f: &MonotoneFunction) -> Vec<Layer> {
    let mut levels: Vec<f64> = f.values.iter().copied().filter(|&v| v > 0.0).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    levels
        .into_iter()
        .map(|t| Layer {
            threshold: t,
            set: DecreasingSet {
                members: (0..f.values.len()).filter(|&x| f.values[x] >= t).collect(),
                order: f.order,
            },
        })
        .collect()
}

/// Inverse of [`layer_cake`]: the telescoped sum `Σ (t_k − t_{k−1}) χ_{D_k}`
/// at `x` is the largest threshold whose set contains `x`, evaluated exactly.
pub fn reconstruct(n: usize, layers: &[Layer]) -> Vec<f64> {
    let mut values = vec![0.0; n];
    for layer in layers {
        for &x in &layer.set.members {
            values[x] = f64::max(values[x], layer.threshold);
        }
    }
    values
}
