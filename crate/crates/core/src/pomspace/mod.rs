//! Discrete partially ordered measure spaces.
//!
//! A [`PomSpace`] carries two orders on a finite ground set:
//!
//! * `≤`, the order the Hardy operator integrates along. Every down-set
//!   `X_x = {u : u ≤ x}` is a chain, so `≤` is stored as a parent forest.
//! * `≺`, a weaker order containing `≤`, under which monotonicity is
//!   measured. It is stored as immediate-predecessor (cover) lists.
//!
//! Point ids are always a linear extension of `≺`: every predecessor of a
//! point has a smaller id. Constructors relabel where needed.

mod axioms;
mod build;
mod dump;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub use axioms::{validate_axioms, AxiomCheck, AxiomReport, AXIOM_TOLERANCE};
pub use build::{
    build_blocked_chain, build_chain, build_chain_scaled, build_from_measure, build_grid,
    build_tree, build_vertical_grid,
};
pub use dump::{dump_space, parse_dump};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderTag {
    /// The operator order `≤`.
    Leq,
    /// The weaker monotonicity order `≺`.
    Prec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Axis {
    /// First coordinate (`S₁`, row means).
    First,
    /// Second coordinate (`S₂`, column means).
    Second,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::First => Axis::Second,
            Axis::Second => Axis::First,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockedVariant {
    /// `≺₁ = ◂`: blocks independent.
    Prec1,
    /// `≺₂`: block index and in-block offset both ordered.
    Prec2,
    /// `≺₃`: the usual order of positions.
    Prec3,
}

impl BlockedVariant {
    pub fn name(self) -> &'static str {
        match self {
            BlockedVariant::Prec1 => "prec1",
            BlockedVariant::Prec2 => "prec2",
            BlockedVariant::Prec3 => "prec3",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "prec1" => Ok(BlockedVariant::Prec1),
            "prec2" => Ok(BlockedVariant::Prec2),
            "prec3" => Ok(BlockedVariant::Prec3),
            other => Err(Error::Usage(format!(
                "unknown variant `{other}` (prec1, prec2, prec3)"
            ))),
        }
    }
}

/// Coordinates attached to a point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Coord {
    /// Position on the half line.
    Line(f64),
    /// Grid cell, 1-based column and row, with its position.
    Cell {
        col: usize,
        row: usize,
        x: f64,
        y: f64,
    },
    /// Tree vertex with its caller-supplied label.
    Vertex(usize),
    /// Cell `cell` (0-based) of block `block`; `pos` is the absolute position.
    Block { block: usize, cell: usize, pos: f64 },
    /// No geometry.
    Bare,
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Line(x) => write!(f, "line:{x:?}"),
            Coord::Cell { col, row, x, y } => write!(f, "cell:{col},{row},{x:?},{y:?}"),
            Coord::Vertex(label) => write!(f, "vertex:{label}"),
            Coord::Block { block, cell, pos } => write!(f, "block:{block},{cell},{pos:?}"),
            Coord::Bare => write!(f, "bare"),
        }
    }
}

impl std::str::FromStr for Coord {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "bare" {
            return Ok(Coord::Bare);
        }
        let (kind, rest) = s.split_once(':').ok_or("expected <kind>:<fields>")?;
        let fields: Vec<&str> = rest.split(',').collect();
        let num = |i: usize| -> std::result::Result<f64, String> {
            fields
                .get(i)
                .ok_or("missing field")?
                .parse::<f64>()
                .map_err(|e| e.to_string())
        };
        let int = |i: usize| -> std::result::Result<usize, String> {
            fields
                .get(i)
                .ok_or("missing field")?
                .parse::<usize>()
                .map_err(|e| e.to_string())
        };
        match (kind, fields.len()) {
            ("line", 1) => Ok(Coord::Line(num(0)?)),
            ("cell", 4) => Ok(Coord::Cell {
                col: int(0)?,
                row: int(1)?,
                x: num(2)?,
                y: num(3)?,
            }),
            ("vertex", 1) => Ok(Coord::Vertex(int(0)?)),
            ("block", 3) => Ok(Coord::Block {
                block: int(0)?,
                cell: int(1)?,
                pos: num(2)?,
            }),
            _ => Err(format!("unrecognised coordinate `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Point {
    pub id: usize,
    pub coord: Coord,
}

/// Structural kind of a space; operators specific to grids or blocked
/// chains check this.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Shape {
    Chain,
    /// `nx` columns by `ny` rows, ids column-major (`id = (col-1)*ny + row-1`);
    /// `≤` runs along `along`, `≺` is the product order.
    Grid {
        nx: usize,
        ny: usize,
        along: Axis,
    },
    Tree,
    Blocked {
        n_blocks: usize,
        cells: usize,
        variant: BlockedVariant,
    },
    Custom,
}

/// The family `x ↦ μ_x`, stored as atom masses on each chain `X_x`.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasureFamily {
    /// `μ_x = μ / μ(X_x)` for a global measure `μ`; `norm[x] = μ(X_x)`.
    Quotient { global: Vec<f64>, norm: Vec<f64> },
    /// `atoms[x][k]` is the mass `μ_x` puts on the element of `X_x` at depth
    /// `k + 1` (the root has depth 1).
    Explicit { atoms: Vec<Vec<f64>> },
}

#[derive(Debug, Clone)]
pub struct PomSpace {
    points: Vec<Point>,
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
    prec_covers: Vec<Vec<usize>>,
    mu: MeasureFamily,
    nu: Vec<f64>,
    shape: Shape,
}

impl PomSpace {
    /// Assemble a space from raw parts, checking structural invariants.
    pub fn from_parts(
        points: Vec<Point>,
        parent: Vec<Option<usize>>,
        prec_covers: Vec<Vec<usize>>,
        mu: MeasureFamily,
        nu: Vec<f64>,
        shape: Shape,
    ) -> Result<Self> {
        let n = points.len();
        if parent.len() != n || prec_covers.len() != n || nu.len() != n {
            return Err(Error::Construction {
                atom: 0,
                reason: "component lengths disagree with the point count".into(),
            });
        }
        for (i, p) in points.iter().enumerate() {
            if p.id != i {
                return Err(Error::Construction {
                    atom: i,
                    reason: format!("point id {} stored at index {i}", p.id),
                });
            }
        }
        let mut depth = vec![0usize; n];
        for x in 0..n {
            match parent[x] {
                None => depth[x] = 1,
                Some(p) if p < x => depth[x] = depth[p] + 1,
                Some(p) if p >= n => return Err(Error::UnknownPoint(p)),
                Some(p) => return Err(Error::NotLinearExtension { pred: p, succ: x }),
            }
        }
        for (x, covers) in prec_covers.iter().enumerate() {
            for &c in covers {
                if c >= n {
                    return Err(Error::UnknownPoint(c));
                }
                if c >= x {
                    return Err(Error::NotLinearExtension { pred: c, succ: x });
                }
            }
        }
        for (i, &v) in nu.iter().enumerate() {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Construction {
                    atom: i,
                    reason: format!("nu mass {v} is not a finite nonnegative number"),
                });
            }
        }
        let space = PomSpace {
            points,
            parent,
            depth,
            prec_covers,
            mu,
            nu,
            shape,
        };
        space.check_measure_shape()?;
        Ok(space)
    }

    fn check_measure_shape(&self) -> Result<()> {
        match &self.mu {
            MeasureFamily::Quotient { global, norm } => {
                if global.len() != self.len() || norm.len() != self.len() {
                    return Err(Error::Construction {
                        atom: 0,
                        reason: "global measure has the wrong length".into(),
                    });
                }
            }
            MeasureFamily::Explicit { atoms } => {
                if atoms.len() != self.len() {
                    return Err(Error::Construction {
                        atom: 0,
                        reason: "measure family has the wrong length".into(),
                    });
                }
                for (x, row) in atoms.iter().enumerate() {
                    if row.len() != self.depth[x] {
                        return Err(Error::Construction {
                            atom: x,
                            reason: format!(
                                "mu_x has {} atoms but X_x has {} points",
                                row.len(),
                                self.depth[x]
                            ),
                        });
                    }
                    if let Some(v) = row.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
                        return Err(Error::Construction {
                            atom: x,
                            reason: format!("mu_x atom {v} is negative or not finite"),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Replace the weight measure `ν`.
    pub fn with_nu(mut self, nu: Vec<f64>) -> Result<Self> {
        if nu.len() != self.len() {
            return Err(Error::Construction {
                atom: 0,
                reason: "nu has the wrong length".into(),
            });
        }
        if let Some((i, v)) = nu
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::Construction {
                atom: i,
                reason: format!("nu mass {v} is not a finite nonnegative number"),
            });
        }
        self.nu = nu;
        Ok(self)
    }

    /// Replace the measure family. Axioms are not checked here; see
    /// [`validate_axioms`].
    pub fn with_mu(mut self, mu: MeasureFamily) -> Result<Self> {
        self.mu = mu;
        self.check_measure_shape()?;
        Ok(self)
    }

    /// The same space with an explicit copy of every `μ_x` atom.
    pub fn to_explicit_mu(&self) -> MeasureFamily {
        MeasureFamily::Explicit {
            atoms: (0..self.len())
                .map(|x| {
                    let mut chain: Vec<usize> = self.downset(x).collect();
                    chain.reverse();
                    chain.into_iter().map(|u| self.mu(x, u)).collect()
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn coord(&self, x: usize) -> &Coord {
        &self.points[x].coord
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn nu(&self) -> &[f64] {
        &self.nu
    }

    pub fn measure_family(&self) -> &MeasureFamily {
        &self.mu
    }

    /// Immediate `≤`-predecessor.
    pub fn parent(&self, x: usize) -> Option<usize> {
        self.parent[x]
    }

    /// `|X_x|`.
    pub fn depth(&self, x: usize) -> usize {
        self.depth[x]
    }

    /// `X_x` from `x` down to its root.
    pub fn downset(&self, x: usize) -> Downset<'_> {
        Downset {
            parent: &self.parent,
            next: Some(x),
        }
    }

    /// `u ≤ x`.
    pub fn leq(&self, u: usize, x: usize) -> bool {
        if self.depth[u] > self.depth[x] {
            return false;
        }
        let mut cur = x;
        for _ in 0..(self.depth[x] - self.depth[u]) {
            cur = match self.parent[cur] {
                Some(p) => p,
                None => return false,
            };
        }
        cur == u
    }

    pub fn prec_covers(&self, x: usize) -> &[usize] {
        &self.prec_covers[x]
    }

    /// Immediate predecessors of `x` under the chosen order.
    pub fn covers(&self, tag: OrderTag, x: usize) -> &[usize] {
        match tag {
            OrderTag::Prec => &self.prec_covers[x],
            OrderTag::Leq => match &self.parent[x] {
                Some(p) => std::slice::from_ref(p),
                None => &[],
            },
        }
    }

    /// `u ≺ x`, by search through the cover graph.
    pub fn prec(&self, u: usize, x: usize) -> bool {
        if u == x {
            return true;
        }
        if u > x {
            return false;
        }
        let mut seen = vec![false; x + 1];
        let mut stack = vec![x];
        while let Some(v) = stack.pop() {
            for &c in &self.prec_covers[v] {
                if c == u {
                    return true;
                }
                if c > u && !seen[c] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        false
    }

    pub fn related(&self, tag: OrderTag, u: usize, x: usize) -> bool {
        match tag {
            OrderTag::Leq => self.leq(u, x),
            OrderTag::Prec => self.prec(u, x),
        }
    }

    /// `μ_x({u})` for `u ≤ x` (the caller guarantees `u ≤ x`).
    pub fn mu(&self, x: usize, u: usize) -> f64 {
        match &self.mu {
            MeasureFamily::Quotient { global, norm } => global[u] / norm[x],
            MeasureFamily::Explicit { atoms } => atoms[x][self.depth[u] - 1],
        }
    }

    /// `μ_x(X_v)` for `v ≤ x`.
    pub fn downset_mass(&self, x: usize, v: usize) -> f64 {
        match &self.mu {
            MeasureFamily::Quotient { norm, .. } => norm[v] / norm[x],
            MeasureFamily::Explicit { atoms } => atoms[x][..self.depth[v]].iter().sum(),
        }
    }

    /// `ν(D)` for a member list.
    pub fn nu_of(&self, members: &[usize]) -> f64 {
        members.iter().map(|&x| self.nu[x]).sum()
    }

    /// Grid dimensions, if this is a grid.
    pub fn grid_dims(&self) -> Option<(usize, usize, Axis)> {
        match self.shape {
            Shape::Grid { nx, ny, along } => Some((nx, ny, along)),
            _ => None,
        }
    }

    pub(crate) fn require_grid(&self) -> Result<(usize, usize, Axis)> {
        self.grid_dims()
            .ok_or(Error::UnsupportedSpace { expected: "grid" })
    }
}

/// Grid id of 1-based `(col, row)` in an `ny`-row grid.
pub fn grid_id(ny: usize, col: usize, row: usize) -> usize {
    (col - 1) * ny + (row - 1)
}

pub struct Downset<'a> {
    parent: &'a [Option<usize>],
    next: Option<usize>,
}

impl Iterator for Downset<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let cur = self.next?;
        self.next = self.parent[cur];
        Some(cur)
    }
}
