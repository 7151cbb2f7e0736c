//! The Hardy operator `Sf(x) = ∫_{X_x} f dμ_x` and its grid and blocked
//! variants.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pomspace::{Axis, MeasureFamily, PomSpace, Shape};

/// Point values indexed by id.
pub type FieldValues = Vec<f64>;

/// `Sf(x) = Σ_{u ≤ x} f(u) μ_x({u})`.
pub fn apply_hardy(space: &PomSpace, f: &[f64]) -> FieldValues {
    assert_eq!(f.len(), space.len(), "field length must match the space");
    match space.measure_family() {
        MeasureFamily::Quotient { global, norm } => {
            // ids are a linear extension, so parents are done before children
            let mut partial = vec![0.0; f.len()];
            for x in 0..f.len() {
                partial[x] = global[x] * f[x] + space.parent(x).map_or(0.0, |p| partial[p]);
            }
            partial.iter().zip(norm).map(|(s, z)| s / z).collect()
        }
        MeasureFamily::Explicit { .. } => (0..f.len())
            .map(|x| space.downset(x).map(|u| f[u] * space.mu(x, u)).sum())
            .collect(),
    }
}

/// Partial Hardy means on a grid: `S₁` averages over columns `1..=col` in
/// the same row, `S₂` over rows `1..=row` in the same column.
pub fn apply_partial(space: &PomSpace, f: &[f64], axis: Axis) -> Result<FieldValues> {
    let (nx, ny, _) = space.require_grid()?;
    let mut out = vec![0.0; f.len()];
    match axis {
        Axis::Second => {
            for c in 0..nx {
                let mut acc = 0.0;
                for r in 0..ny {
                    acc += f[c * ny + r];
                    out[c * ny + r] = acc / (r + 1) as f64;
                }
            }
        }
        Axis::First => {
            for r in 0..ny {
                let mut acc = 0.0;
                for c in 0..nx {
                    acc += f[c * ny + r];
                    out[c * ny + r] = acc / (c + 1) as f64;
                }
            }
        }
    }
    Ok(out)
}

/// Two-dimensional Hardy operator: the mean of `f` over `[1..=col]×[1..=row]`.
pub fn apply_rectangle(space: &PomSpace, f: &[f64]) -> Result<FieldValues> {
    let (nx, ny, _) = space.require_grid()?;
    let mut prefix = vec![0.0; (nx + 1) * (ny + 1)];
    let at = |c: usize, r: usize| c * (ny + 1) + r;
    for c in 1..=nx {
        for r in 1..=ny {
            prefix[at(c, r)] =
                f[(c - 1) * ny + (r - 1)] + prefix[at(c - 1, r)] + prefix[at(c, r - 1)]
                    - prefix[at(c - 1, r - 1)];
        }
    }
    let mut out = vec![0.0; f.len()];
    for c in 1..=nx {
        for r in 1..=ny {
            out[(c - 1) * ny + (r - 1)] = prefix[at(c, r)] / (c * r) as f64;
        }
    }
    Ok(out)
}

/// Variable-endpoint operator on a blocked chain: mean from the block start.
pub fn apply_blocked(space: &PomSpace, f: &[f64]) -> Result<FieldValues> {
    match space.shape() {
        Shape::Blocked { .. } => Ok(apply_hardy(space, f)),
        _ => Err(Error::UnsupportedSpace {
            expected: "blocked chain",
        }),
    }
}

/// `S₂^m f`.
pub fn iterate_s2(space: &PomSpace, f: &[f64], m: usize) -> Result<FieldValues> {
    if m == 0 {
        return Err(Error::Domain("iteration count must be at least 1".into()));
    }
    let mut cur = apply_partial(space, f, Axis::Second)?;
    for _ in 1..m {
        cur = apply_partial(space, &cur, Axis::Second)?;
    }
    Ok(cur)
}

/// `S₂^m χ_D(s, t)` for `D = {t < h(s)}` in the continuous model:
/// `1` for `t ≤ h`, otherwise `(h/t) Σ_{j<m} log^j(t/h) / j!`.
pub fn closed_form_s2m(h: f64, m: usize, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    if !(h >= 0.0) || m == 0 {
        return Err(Error::Domain("need h >= 0 and m >= 1".into()));
    }
    if t <= h {
        return Ok(1.0);
    }
    if h == 0.0 {
        return Ok(0.0);
    }
    let log = (t / h).ln();
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..m {
        term *= log / j as f64;
        sum += term;
    }
    Ok(h / t * sum)
}

/// Which operator a norm or constant refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HardyOp {
    /// The space's own `S`.
    Native,
    /// `S₁` or `S₂` on a grid.
    Partial(Axis),
    /// The two-dimensional rectangle mean on a grid.
    Rectangle,
}

impl HardyOp {
    pub fn apply(self, space: &PomSpace, f: &[f64]) -> Result<FieldValues> {
        match self {
            HardyOp::Native => Ok(apply_hardy(space, f)),
            HardyOp::Partial(axis) => apply_partial(space, f, axis),
            HardyOp::Rectangle => apply_rectangle(space, f),
        }
    }
}

/// `id,value` CSV of a field.
pub fn field_csv(values: &[f64]) -> String {
    let mut out = String::from("id,value\n");
    for (i, v) in values.iter().enumerate() {
        out.push_str(&format!("{i},{v:?}\n"));
    }
    out
}

/// Both sides of the integration-by-parts inequality on a finite chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaSides {
    /// `(Σ m)^α`
    pub lhs: f64,
    /// `Σ_u (Σ_{y ≤ u} m_y)^{α−1} m_u`
    pub rhs: f64,
    pub c_alpha: f64,
}

impl LemmaSides {
    pub fn holds(&self) -> bool {
        self.lhs <= self.c_alpha * self.rhs
    }
}

/// Constant from the proof: `1` for `α ≤ 1`, `2` for `1 < α ≤ 2`,
/// `2^{α−1}` beyond.
pub fn lemma_constant(alpha: f64) -> f64 {
    if alpha <= 1.0 {
        1.0
    } else if alpha <= 2.0 {
        2.0
    } else {
        2f64.powf(alpha - 1.0)
    }
}

/// Masses are listed from the bottom of the chain up; partial sums include
/// the point itself.
pub fn lemma_ip_sides(masses: &[f64], alpha: f64) -> Result<LemmaSides> {
    if masses.is_empty() {
        return Err(Error::Domain("chain must have at least one atom".into()));
    }
    if let Some(m) = masses.iter().find(|m| !(**m > 0.0 && m.is_finite())) {
        return Err(Error::Domain(format!("atom mass {m} is not positive")));
    }
    let total: f64 = masses.iter().sum();
    let mut partial = 0.0;
    let mut rhs = 0.0;
    for &m in masses {
        partial += m;
        rhs += partial.powf(alpha - 1.0) * m;
    }
    Ok(LemmaSides {
        lhs: total.powf(alpha),
        rhs,
        c_alpha: lemma_constant(alpha),
    })
}
