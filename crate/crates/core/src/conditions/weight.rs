//! Weight specifications and their mini-language.
//!
//! ```text
//! const:<c>                constant weight
//! pow:<beta>               x^beta (product of coordinate powers in 2-D)
//! table:<path>             step function read from a `position,value` CSV
//! prod:(<spec>,<spec>,..)  tensor product, one factor per coordinate
//! ```

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    Constant(f64),
    Power(f64),
    /// Right-continuous step function through `knots` (sorted by position).
    Table {
        source: String,
        knots: Vec<(f64, f64)>,
    },
    Product(Vec<WeightSpec>),
}

impl WeightSpec {
    pub fn constant(c: f64) -> Self {
        WeightSpec::Constant(c)
    }

    pub fn power(beta: f64) -> Self {
        WeightSpec::Power(beta)
    }

    pub fn product(a: WeightSpec, b: WeightSpec) -> Self {
        WeightSpec::Product(vec![a, b])
    }

    /// In-memory step table; knots are sorted by position.
    pub fn table(mut knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::WeightParse {
                token: "table".into(),
                reason: "table has no rows".into(),
            });
        }
        knots.sort_by(|a, b| a.0.total_cmp(&b.0));
        if let Some(&(pos, v)) = knots.iter().find(|(_, v)| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::WeightParse {
                token: format!("{pos},{v}"),
                reason: "table values must be finite and nonnegative".into(),
            });
        }
        Ok(WeightSpec::Table {
            source: "inline".into(),
            knots,
        })
    }

    pub fn load_table(path: &Path) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| Error::WeightParse {
                token: path.display().to_string(),
                reason: e.to_string(),
            })?;
        let mut knots = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::WeightParse {
                token: path.display().to_string(),
                reason: e.to_string(),
            })?;
            let field = |k: usize| rec.get(k).unwrap_or("").to_string();
            let (a, b) = (field(0), field(1));
            match (a.parse::<f64>(), b.parse::<f64>()) {
                (Ok(x), Ok(v)) => knots.push((x, v)),
                // header row
                _ if i == 0 => continue,
                _ => {
                    return Err(Error::WeightParse {
                        token: format!("{a},{b}"),
                        reason: format!("row {} is not `position,value`", i + 1),
                    })
                }
            }
        }
        let mut spec = Self::table(knots)?;
        if let WeightSpec::Table { source, .. } = &mut spec {
            *source = path.display().to_string();
        }
        Ok(spec)
    }

    /// Evaluate a one-dimensional weight at `x > 0`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let v = match self {
            WeightSpec::Constant(c) => *c,
            WeightSpec::Power(beta) => {
                if *beta == 0.0 {
                    1.0
                } else {
                    x.powf(*beta)
                }
            }
            WeightSpec::Table { knots, .. } => step_lookup(knots, x),
            WeightSpec::Product(parts) if parts.len() == 1 => parts[0].eval(x)?,
            WeightSpec::Product(_) => {
                return Err(Error::Domain(
                    "product weight evaluated at a one-dimensional point".into(),
                ))
            }
        };
        check_value(v, x)
    }

    /// Evaluate at a point with one coordinate per axis.
    pub fn eval_point(&self, coords: &[f64]) -> Result<f64> {
        match self {
            WeightSpec::Product(parts) => {
                if parts.len() != coords.len() {
                    return Err(Error::Domain(format!(
                        "product weight has {} factors but the point has {} coordinates",
                        parts.len(),
                        coords.len()
                    )));
                }
                let mut v = 1.0;
                for (part, &x) in parts.iter().zip(coords) {
                    v *= part.eval(x)?;
                }
                Ok(v)
            }
            WeightSpec::Constant(c) => check_value(*c, coords.first().copied().unwrap_or(0.0)),
            _ => {
                let mut v = 1.0;
                for &x in coords {
                    v *= self.eval(x)?;
                }
                Ok(v)
            }
        }
    }

    /// Factors of a product weight, or `None`.
    pub fn factors(&self) -> Option<&[WeightSpec]> {
        match self {
            WeightSpec::Product(parts) => Some(parts),
            _ => None,
        }
    }
}

fn check_value(v: f64, x: f64) -> Result<f64> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(Error::Domain(format!("weight is {v} at position {x}")))
    }
}

fn step_lookup(knots: &[(f64, f64)], x: f64) -> f64 {
    let idx = knots.partition_point(|&(pos, _)| pos <= x);
    if idx == 0 {
        knots[0].1
    } else {
        knots[idx - 1].1
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSpec::Constant(c) => write!(f, "const:{c}"),
            WeightSpec::Power(b) => write!(f, "pow:{b}"),
            WeightSpec::Table { source, .. } => write!(f, "table:{source}"),
            WeightSpec::Product(parts) => {
                write!(f, "prod:(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl FromStr for WeightSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_spec(s.trim())
    }
}

fn parse_err(token: &str, reason: &str) -> Error {
    Error::WeightParse {
        token: token.to_string(),
        reason: reason.to_string(),
    }
}

fn parse_number(token: &str) -> Result<f64> {
    let v: f64 = token
        .trim()
        .parse()
        .map_err(|_| parse_err(token, "expected a decimal number"))?;
    if !v.is_finite() {
        return Err(parse_err(token, "number must be finite"));
    }
    Ok(v)
}

fn parse_spec(s: &str) -> Result<WeightSpec> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| parse_err(s, "expected `<kind>:<argument>`"))?;
    match kind.trim() {
        "const" => {
            let c = parse_number(rest)?;
            if c < 0.0 {
                return Err(parse_err(rest, "constant weight must be nonnegative"));
            }
            Ok(WeightSpec::Constant(c))
        }
        "pow" => Ok(WeightSpec::Power(parse_number(rest)?)),
        "table" => {
            if rest.trim().is_empty() {
                return Err(parse_err(s, "missing table path"));
            }
            WeightSpec::load_table(Path::new(rest.trim()))
        }
        "prod" => {
            let inner = rest
                .trim()
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| parse_err(rest, "expected `prod:(<spec>,<spec>)`"))?;
            let parts =
                split_top_level(inner).ok_or_else(|| parse_err(inner, "unbalanced parentheses"))?;
            if parts.len() < 2 {
                return Err(parse_err(inner, "product needs at least two factors"));
            }
            let specs = parts
                .into_iter()
                .map(parse_spec)
                .collect::<Result<Vec<_>>>()?;
            Ok(WeightSpec::Product(specs))
        }
        other => Err(parse_err(
            other,
            "unknown weight kind (const, pow, table, prod)",
        )),
    }
}

fn split_top_level(s: &str) -> Option<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return None;
                }
            }
            ',' if depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return None;
    }
    parts.push(s[start..].trim());
    Some(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_kind() {
        assert_eq!(
            "const:2".parse::<WeightSpec>().unwrap(),
            WeightSpec::Constant(2.0)
        );
        assert_eq!(
            "pow:-0.5".parse::<WeightSpec>().unwrap(),
            WeightSpec::Power(-0.5)
        );
        let p: WeightSpec = "prod:(pow:0.5,const:1)".parse().unwrap();
        assert_eq!(
            p,
            WeightSpec::product(WeightSpec::Power(0.5), WeightSpec::Constant(1.0))
        );
        let nested: WeightSpec = "prod:(prod:(const:1,const:2),pow:1)".parse().unwrap();
        assert_eq!(nested.factors().unwrap().len(), 2);
    }

    #[test]
    fn bad_tokens_are_named() {
        let err = "pow:abc".parse::<WeightSpec>().unwrap_err();
        assert!(err.to_string().contains("abc"), "{err}");
        assert!("nope:1".parse::<WeightSpec>().is_err());
        assert!("const:-1".parse::<WeightSpec>().is_err());
        assert!("prod:(const:1".parse::<WeightSpec>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["const:1", "pow:-0.5", "pow:1.5", "prod:(pow:-0.5,const:3)"] {
            let w: WeightSpec = s.parse().unwrap();
            assert_eq!(w.to_string(), s);
            assert_eq!(w.to_string().parse::<WeightSpec>().unwrap(), w);
        }
    }

    #[test]
    fn table_is_a_step_function() {
        let t = WeightSpec::table(vec![(1.0, 3.0), (0.0, 1.0), (2.0, 5.0)]).unwrap();
        assert_eq!(t.eval(0.5).unwrap(), 1.0);
        assert_eq!(t.eval(1.0).unwrap(), 3.0);
        assert_eq!(t.eval(10.0).unwrap(), 5.0);
    }

    #[test]
    fn table_from_csv_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.csv");
        std::fs::write(&path, "position,value\n0,2\n0.5,4\n").unwrap();
        let w: WeightSpec = format!("table:{}", path.display()).parse().unwrap();
        assert_eq!(w.eval(0.25).unwrap(), 2.0);
        assert_eq!(w.eval(0.75).unwrap(), 4.0);
    }

    #[test]
    fn power_weight_in_two_dimensions_is_a_product() {
        let w = WeightSpec::Power(2.0);
        assert_eq!(w.eval_point(&[2.0, 3.0]).unwrap(), 36.0);
        assert_eq!(
            WeightSpec::Constant(0.5).eval_point(&[2.0, 3.0]).unwrap(),
            0.5
        );
    }

    #[test]
    fn negative_power_at_zero_is_an_error() {
        assert!(WeightSpec::Power(-1.0).eval(0.0).is_err());
    }
}
