use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conditions::WeightSpec;
use crate::error::{Error, Result};
use crate::pomspace::{
    build_blocked_chain, build_chain, build_tree, build_vertical_grid, parse_dump, BlockedVariant,
    PomSpace,
};

fn space_err(token: &str, reason: &str) -> Error {
    Error::SpaceParse {
        token: token.to_string(),
        reason: reason.to_string(),
    }
}

fn size(token: &str) -> Result<usize> {
    token
        .parse::<usize>()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| space_err(token, "expected a positive integer"))
}

fn pair(token: &str) -> Result<(usize, usize)> {
    let (a, b) = token
        .split_once('x')
        .ok_or_else(|| space_err(token, "expected `<n>x<m>`"))?;
    Ok((size(a)?, size(b)?))
}

/// Parent map of a tree family: `binary:D` (complete, depth `D`), `path:N`,
/// `random:N` (each vertex hangs from a uniformly chosen earlier one).
pub fn tree_parents(kind: &str, arg: &str, seed: u64) -> Result<Vec<Option<usize>>> {
    match kind {
        "binary" => {
            let depth: usize = arg
                .parse()
                .ok()
                .filter(|&d| d < 24)
                .ok_or_else(|| space_err(arg, "expected a depth below 24"))?;
            let n = (1usize << (depth + 1)) - 1;
            Ok((0..n).map(|i| (i > 0).then(|| (i - 1) / 2)).collect())
        }
        "path" => Ok((0..size(arg)?).map(|i| i.checked_sub(1)).collect()),
        "random" => {
            let n = size(arg)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok((0..n)
                .map(|i| (i > 0).then(|| rng.gen_range(0..i)))
                .collect())
        }
        other => Err(space_err(other, "unknown tree kind (binary, path, random)")),
    }
}

/// Build a space from its command-line spec. Tree vertices get
/// `ν(v) = u(|v|)` with `|v|` the number of vertices on the geodesic.
pub fn build_space(
    spec: &str,
    weight: &WeightSpec,
    variant: BlockedVariant,
    seed: u64,
) -> Result<PomSpace> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| space_err(spec, "expected `<kind>:<size>`"))?;
    match kind {
        "chain" => build_chain(size(rest)?, weight),
        "grid" => {
            let (nx, ny) = pair(rest)?;
            build_vertical_grid(nx, ny, weight)
        }
        "blocked" => {
            let (b, c) = pair(rest)?;
            build_blocked_chain(b, c, variant, weight)
        }
        "tree" => {
            let (family, arg) = rest
                .split_once(':')
                .ok_or_else(|| space_err(rest, "expected `tree:<kind>:<size>`"))?;
            let parents = tree_parents(family, arg, seed)?;
            let mut depth = vec![0usize; parents.len()];
            for (v, p) in parents.iter().enumerate() {
                depth[v] = p.map_or(1, |q| depth[q] + 1);
            }
            let nu = depth
                .iter()
                .map(|&d| weight.eval(d as f64))
                .collect::<Result<Vec<_>>>()?;
            build_tree(&parents, &nu)
        }
        "file" => {
            let path = Path::new(rest);
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            parse_dump(&text)
        }
        other => Err(space_err(other, "unknown space kind")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pomspace::{dump_space, Shape};

    fn one() -> WeightSpec {
        WeightSpec::Constant(1.0)
    }

    #[test]
    fn specs() {
        let v = BlockedVariant::Prec1;
        assert_eq!(build_space("chain:7", &one(), v, 0).unwrap().len(), 7);
        let g = build_space("grid:3x4", &one(), v, 0).unwrap();
        assert_eq!(g.grid_dims().map(|d| (d.0, d.1)), Some((3, 4)));
        assert_eq!(
            build_space("tree:binary:3", &one(), v, 0).unwrap().len(),
            15
        );
        assert_eq!(
            build_space("tree:path:5", &one(), v, 0).unwrap().depth(4),
            5
        );
        let b = build_space("blocked:2x3", &one(), BlockedVariant::Prec3, 0).unwrap();
        assert!(matches!(
            b.shape(),
            Shape::Blocked {
                n_blocks: 2,
                cells: 3,
                ..
            }
        ));
    }

    #[test]
    fn random_trees_are_seeded() {
        let a = build_space("tree:random:40", &one(), BlockedVariant::Prec1, 5).unwrap();
        let b = build_space("tree:random:40", &one(), BlockedVariant::Prec1, 5).unwrap();
        assert_eq!(dump_space(&a), dump_space(&b));
    }

    #[test]
    fn errors_name_the_token() {
        let e = build_space("grid:3y3", &one(), BlockedVariant::Prec1, 0).unwrap_err();
        assert!(
            matches!(e, Error::SpaceParse { ref token, .. } if token == "3y3"),
            "{e}"
        );
        assert!(build_space("torus:3", &one(), BlockedVariant::Prec1, 0).is_err());
        assert!(matches!(
            build_space("file:/nonexistent/x", &one(), BlockedVariant::Prec1, 0),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.txt");
        let s = build_space(
            "tree:binary:2",
            &WeightSpec::Power(0.5),
            BlockedVariant::Prec1,
            0,
        )
        .unwrap();
        std::fs::write(&path, dump_space(&s)).unwrap();
        let back = build_space(
            &format!("file:{}", path.display()),
            &one(),
            BlockedVariant::Prec1,
            0,
        )
        .unwrap();
        assert_eq!(dump_space(&back), dump_space(&s));
    }
}
