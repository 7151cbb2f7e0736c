//! Canonical text form of a space, for golden files and hand-built spaces.
//!
//! ```text
//! pomspace v1
//! shape grid 2 2 second
//! points 4
//! p 0 cell:1,1,0.5,0.5 parent - prec - nu 0.25
//! ...
//! mu 1 0.5 0.5
//! ```
//!
//! `mu <x>` lists `μ_x` on `X_x` from the root up to `x`. Floats use the
//! shortest representation that round-trips.

use std::fmt::Write;

use super::{Axis, BlockedVariant, Coord, MeasureFamily, Point, PomSpace, Shape};
use crate::error::{Error, Result};

pub fn dump_space(space: &PomSpace) -> String {
    let mut out = String::new();
    out.push_str("pomspace v1\n");
    let shape = match space.shape() {
        Shape::Chain => "chain".to_string(),
        Shape::Grid { nx, ny, along } => format!(
            "grid {nx} {ny} {}",
            match along {
                Axis::First => "first",
                Axis::Second => "second",
            }
        ),
        Shape::Tree => "tree".to_string(),
        Shape::Blocked {
            n_blocks,
            cells,
            variant,
        } => format!("blocked {n_blocks} {cells} {}", variant.name()),
        Shape::Custom => "custom".to_string(),
    };
    let _ = writeln!(out, "shape {shape}");
    let _ = writeln!(out, "points {}", space.len());
    for p in space.points() {
        let parent = space
            .parent(p.id)
            .map_or_else(|| "-".to_string(), |q| q.to_string());
        let covers = space.prec_covers(p.id);
        let prec = if covers.is_empty() {
            "-".to_string()
        } else {
            covers
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let _ = writeln!(
            out,
            "p {} {} parent {parent} prec {prec} nu {:?}",
            p.id,
            p.coord,
            space.nu()[p.id]
        );
    }
    for x in 0..space.len() {
        let mut chain: Vec<usize> = space.downset(x).collect();
        chain.reverse();
        let _ = write!(out, "mu {x}");
        for u in chain {
            let _ = write!(out, " {:?}", space.mu(x, u));
        }
        out.push('\n');
    }
    out
}

fn err(line: usize, reason: impl Into<String>) -> Error {
    Error::DumpParse {
        line,
        reason: reason.into(),
    }
}

pub fn parse_dump(text: &str) -> Result<PomSpace> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (ln, header) = lines.next().ok_or_else(|| err(1, "empty document"))?;
    if header != "pomspace v1" {
        return Err(err(ln, "expected header `pomspace v1`"));
    }
    let (ln, shape_line) = lines.next().ok_or_else(|| err(ln, "missing shape"))?;
    let shape = parse_shape(ln, shape_line)?;
    let (ln, count_line) = lines.next().ok_or_else(|| err(ln, "missing point count"))?;
    let n: usize = count_line
        .strip_prefix("points ")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| err(ln, "expected `points <n>`"))?;

    let mut points = Vec::with_capacity(n);
    let mut parent = Vec::with_capacity(n);
    let mut covers = Vec::with_capacity(n);
    let mut nu = Vec::with_capacity(n);
    for id in 0..n {
        let (ln, line) = lines.next().ok_or_else(|| err(0, "truncated point list"))?;
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 9 || f[0] != "p" || f[3] != "parent" || f[5] != "prec" || f[7] != "nu" {
            return Err(err(
                ln,
                "expected `p <id> <coord> parent <p> prec <list> nu <mass>`",
            ));
        }
        if f[1].parse::<usize>().ok() != Some(id) {
            return Err(err(ln, format!("expected point id {id}")));
        }
        let coord: Coord = f[2].parse().map_err(|e: String| err(ln, e))?;
        parent.push(match f[4] {
            "-" => None,
            s => Some(s.parse().map_err(|_| err(ln, "bad parent id"))?),
        });
        covers.push(match f[6] {
            "-" => Vec::new(),
            s => s
                .split(',')
                .map(|c| c.parse::<usize>().map_err(|_| err(ln, "bad cover id")))
                .collect::<Result<Vec<_>>>()?,
        });
        nu.push(f[8].parse::<f64>().map_err(|_| err(ln, "bad nu mass"))?);
        points.push(Point { id, coord });
    }
    let mut atoms = vec![Vec::new(); n];
    for _ in 0..n {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| err(0, "truncated measure list"))?;
        let mut f = line.split_whitespace();
        if f.next() != Some("mu") {
            return Err(err(ln, "expected `mu <x> <masses>`"));
        }
        let x: usize = f
            .next()
            .and_then(|s| s.parse().ok())
            .filter(|&x| x < n)
            .ok_or_else(|| err(ln, "bad base point"))?;
        atoms[x] = f
            .map(|s| s.parse::<f64>().map_err(|_| err(ln, "bad mass")))
            .collect::<Result<Vec<_>>>()?;
    }
    if let Some((ln, _)) = lines.next() {
        return Err(err(ln, "trailing content"));
    }
    PomSpace::from_parts(
        points,
        parent,
        covers,
        MeasureFamily::Explicit { atoms },
        nu,
        shape,
    )
}

fn parse_shape(ln: usize, line: &str) -> Result<Shape> {
    let f: Vec<&str> = line.split_whitespace().collect();
    let num = |s: &str| s.parse::<usize>().map_err(|_| err(ln, "bad shape size"));
    match f.as_slice() {
        ["shape", "chain"] => Ok(Shape::Chain),
        ["shape", "tree"] => Ok(Shape::Tree),
        ["shape", "custom"] => Ok(Shape::Custom),
        ["shape", "grid", nx, ny, along] => Ok(Shape::Grid {
            nx: num(nx)?,
            ny: num(ny)?,
            along: match *along {
                "first" => Axis::First,
                "second" => Axis::Second,
                _ => return Err(err(ln, "grid axis must be first or second")),
            },
        }),
        ["shape", "blocked", nb, cells, variant] => Ok(Shape::Blocked {
            n_blocks: num(nb)?,
            cells: num(cells)?,
            variant: BlockedVariant::parse(variant).map_err(|e| err(ln, e.to_string()))?,
        }),
        _ => Err(err(ln, "unknown shape")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::WeightSpec;
    use crate::pomspace::{build_blocked_chain, build_tree, build_vertical_grid};

    #[test]
    fn two_by_two_golden() {
        let g = build_vertical_grid(2, 2, &WeightSpec::Constant(1.0)).unwrap();
        let expected = "\
pomspace v1
shape grid 2 2 second
points 4
p 0 cell:1,1,0.5,0.5 parent - prec - nu 0.25
p 1 cell:1,2,0.5,1.0 parent 0 prec 0 nu 0.25
p 2 cell:2,1,1.0,0.5 parent - prec 0 nu 0.25
p 3 cell:2,2,1.0,1.0 parent 2 prec 1,2 nu 0.25
mu 0 1.0
mu 1 0.5 0.5
mu 2 1.0
mu 3 0.5 0.5
";
        assert_eq!(dump_space(&g), expected);
    }

    #[test]
    fn dump_parse_dump_is_stable() {
        let spaces = [
            build_tree(&[None, Some(0), Some(0), Some(2)], &[1.0, 0.5, 2.0, 0.1]).unwrap(),
            build_blocked_chain(
                2,
                3,
                crate::pomspace::BlockedVariant::Prec2,
                &WeightSpec::Power(0.3),
            )
            .unwrap(),
        ];
        for s in &spaces {
            let text = dump_space(s);
            let back = parse_dump(&text).unwrap();
            assert_eq!(dump_space(&back), text);
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_dump("pomspace v1\nshape chain\npoints 1\np 0 bare parent - prec - nu x\n")
            .unwrap_err();
        assert!(matches!(err, Error::DumpParse { line: 4, .. }), "{err}");
    }
}
