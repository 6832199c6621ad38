//! Text forms for groups, permutations and rational vectors.

use std::fmt;
use std::str::FromStr;

use altcipher_core::{GroupTable, Permutation, Rational, DEFAULT_CAP};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct SpecError(pub String);

impl From<altcipher_core::Error> for SpecError {
    fn from(e: altcipher_core::Error) -> Self {
        SpecError(e.to_string())
    }
}

/// A named group constructor: `sym(m)`, `cyclic(m)`, `stab(m, t)` or `gen([[..], ..])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Sym(usize),
    Cyclic(usize),
    Stab { degree: usize, fixed: usize },
    Gen(Vec<Permutation>),
}

impl GroupSpec {
    pub fn degree(&self) -> usize {
        match self {
            GroupSpec::Sym(m) | GroupSpec::Cyclic(m) => *m,
            GroupSpec::Stab { degree, .. } => *degree,
            GroupSpec::Gen(gens) => gens[0].degree(),
        }
    }

    pub fn build(&self) -> Result<GroupTable, SpecError> {
        let table = match self {
            GroupSpec::Sym(m) => GroupTable::symmetric(*m)?,
            GroupSpec::Cyclic(m) => GroupTable::cyclic(*m)?,
            GroupSpec::Stab { degree, fixed } => GroupTable::point_stabilizer(*degree, *fixed)?,
            GroupSpec::Gen(gens) => GroupTable::closure(gens, DEFAULT_CAP)?,
        };
        Ok(table)
    }

    /// Builds the group and checks that it sits inside `parent`.
    pub fn build_in(&self, parent: &GroupTable) -> Result<GroupTable, SpecError> {
        if self.degree() != parent.degree() {
            return Err(SpecError(format!(
                "{self} has degree {}, expected {}",
                self.degree(),
                parent.degree()
            )));
        }
        let table = self.build()?;
        if !table.is_subgroup_of(parent) {
            return Err(SpecError(format!("{self} is not a subgroup of the ambient group")));
        }
        Ok(table)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Sym(m) => write!(f, "sym({m})"),
            GroupSpec::Cyclic(m) => write!(f, "cyclic({m})"),
            GroupSpec::Stab { degree, fixed } => write!(f, "stab({degree}, {fixed})"),
            GroupSpec::Gen(gens) => {
                let parts: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
                write!(f, "gen([{}])", parts.join(","))
            }
        }
    }
}

fn parse_count(s: &str, what: &str) -> Result<usize, SpecError> {
    s.trim().parse().map_err(|_| SpecError(format!("{what}: expected a nonnegative integer, found {s:?}")))
}

impl FromStr for GroupSpec {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, SpecError> {
        let s = s.trim();
        let (name, rest) = s
            .split_once('(')
            .ok_or_else(|| SpecError(format!("unknown group constructor {s:?}")))?;
        let args = rest
            .strip_suffix(')')
            .ok_or_else(|| SpecError(format!("missing ')' in {s:?}")))?;
        match name.trim() {
            "sym" => Ok(GroupSpec::Sym(parse_count(args, "sym")?)),
            "cyclic" => Ok(GroupSpec::Cyclic(parse_count(args, "cyclic")?)),
            "stab" => {
                let (m, t) = args
                    .split_once(',')
                    .ok_or_else(|| SpecError(format!("stab expects two arguments, found {args:?}")))?;
                let (degree, fixed) = (parse_count(m, "stab")?, parse_count(t, "stab")?);
                if fixed >= degree {
                    return Err(SpecError(format!("stab({degree}, {fixed}): point out of range")));
                }
                Ok(GroupSpec::Stab { degree, fixed })
            }
            "gen" => {
                let lists: Vec<Vec<usize>> = serde_json::from_str(args)
                    .map_err(|e| SpecError(format!("gen expects a list of image arrays: {e}")))?;
                if lists.is_empty() {
                    return Err(SpecError("gen needs at least one generator".into()));
                }
                let gens = lists.into_iter().map(Permutation::new).collect::<Result<Vec<_>, _>>()?;
                let degree = gens[0].degree();
                if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
                    return Err(SpecError(format!("generator {g} has degree {}, expected {degree}", g.degree())));
                }
                Ok(GroupSpec::Gen(gens))
            }
            other => Err(SpecError(format!("unknown group constructor {other:?}"))),
        }
    }
}

/// Parses an image array such as `[1,0,2]`.
pub fn parse_perm(s: &str) -> Result<Permutation, SpecError> {
    let images: Vec<usize> =
        serde_json::from_str(s.trim()).map_err(|_| SpecError(format!("expected an image array like [1,0,2], found {s:?}")))?;
    Ok(Permutation::new(images)?)
}

/// Parses `a/b`, an integer, or a plain decimal such as `0.25`, exactly.
pub fn parse_rational(s: &str) -> Result<Rational, SpecError> {
    let s = s.trim();
    let bad = || SpecError(format!("not a rational number: {s:?}"));
    if let Some((int, frac)) = s.split_once('.') {
        let digits = int.trim_start_matches(['+', '-']);
        if frac.is_empty() && digits.is_empty()
            || !frac.chars().all(|c| c.is_ascii_digit())
            || !digits.chars().all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        let sign = if int.starts_with('-') { "-" } else { "" };
        let text = format!("{sign}{}{frac}/1{}", if digits.is_empty() { "0" } else { digits }, "0".repeat(frac.len()));
        return Rational::from_str(&text).map_err(|_| bad());
    }
    Rational::from_str(s).map_err(|_| bad())
}

/// Whitespace-separated rationals.
pub fn parse_vector(text: &str) -> Result<Vec<Rational>, SpecError> {
    let v = text.split_whitespace().map(parse_rational).collect::<Result<Vec<_>, _>>()?;
    if v.is_empty() {
        return Err(SpecError("empty vector".into()));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_constructors_round_trip() {
        for text in ["sym(3)", "cyclic(4)", "stab(4, 3)", "gen([[1,0,2],[0,2,1]])"] {
            let spec: GroupSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert_eq!(" stab( 5 ,2 ) ".parse::<GroupSpec>().unwrap(), GroupSpec::Stab { degree: 5, fixed: 2 });
    }

    #[test]
    fn group_orders() {
        let order = |s: &str| s.parse::<GroupSpec>().unwrap().build().unwrap().order();
        assert_eq!(order("sym(4)"), 24);
        assert_eq!(order("cyclic(5)"), 5);
        assert_eq!(order("stab(4,0)"), 6);
        assert_eq!(order("gen([[1,0,2]])"), 2);
    }

    #[test]
    fn malformed_groups() {
        for text in ["sym", "sym(x)", "alt(3)", "stab(3)", "stab(3,3)", "gen([])", "gen([[0,0,2]])", "gen([[1,0],[0,2,1]])"] {
            assert!(text.parse::<GroupSpec>().is_err(), "{text}");
        }
    }

    #[test]
    fn permutations() {
        assert_eq!(parse_perm("[0, 2, 1]").unwrap().images(), &[0, 2, 1]);
        assert!(parse_perm("[0,0,2]").unwrap_err().0.contains("bijection"));
        assert!(parse_perm("(0 1)").is_err());
    }

    #[test]
    fn rationals() {
        let r = |a: i64, b: i64| Rational::new(a.into(), b.into());
        assert_eq!(parse_rational("2/3").unwrap(), r(2, 3));
        assert_eq!(parse_rational("0.25").unwrap(), r(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), r(-3, 2));
        assert_eq!(parse_rational(".5").unwrap(), r(1, 2));
        assert_eq!(parse_rational("3").unwrap(), r(3, 1));
        for bad in ["", ".", "1/0x", "abc", "1.2.3", "1e-3"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
        assert_eq!(parse_vector("2/3 1/6\n1/6").unwrap().len(), 3);
        assert!(parse_vector("  ").is_err());
    }
}
