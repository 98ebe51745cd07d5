use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rbf::{RbfTail, DEFAULT_OVERLAP};

/// One approximation method with its parameters.
///
/// Parses from and prints to the command-line form, e.g. `lowess:d=1,k=100`,
/// `rbf-local:poly=const,k=100`, `rbf-local:poly=none,k=100`,
/// `rbf-global:m=20,d=1,overlap=2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MethodSpec {
    Lowess { degree: u32, k: usize },
    RbfLocal { tail: RbfTail, k: usize },
    RbfGlobal { m: usize, degree: u32, overlap: f64 },
}

impl MethodSpec {
    /// K for local methods, M for the global one.
    pub fn param(&self) -> usize {
        match *self {
            MethodSpec::Lowess { k, .. } | MethodSpec::RbfLocal { k, .. } => k,
            MethodSpec::RbfGlobal { m, .. } => m,
        }
    }

    pub fn is_local(&self) -> bool {
        !matches!(self, MethodSpec::RbfGlobal { .. })
    }

    /// Short family name used for table columns.
    pub fn family(&self) -> String {
        match self {
            MethodSpec::Lowess { degree, .. } => format!("lowess(d={degree})"),
            MethodSpec::RbfLocal { tail, .. } => format!("rbf-local({})", tail_str(*tail)),
            MethodSpec::RbfGlobal { .. } => "rbf-global".into(),
        }
    }
}

fn tail_str(tail: RbfTail) -> String {
    match tail {
        RbfTail::None => "none".into(),
        RbfTail::Constant => "const".into(),
        RbfTail::Degree(d) => d.to_string(),
    }
}

impl fmt::Display for MethodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MethodSpec::Lowess { degree, k } => write!(f, "lowess:d={degree},k={k}"),
            MethodSpec::RbfLocal { tail, k } => write!(f, "rbf-local:poly={},k={k}", tail_str(*tail)),
            MethodSpec::RbfGlobal { m, degree, overlap } => {
                write!(f, "rbf-global:m={m},d={degree},overlap={overlap}")
            }
        }
    }
}

impl FromStr for MethodSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: String| Error::Config(format!("method `{s}`: {m}"));
        let (kind, params) = s.split_once(':').unwrap_or((s, ""));

        let mut pairs = Vec::new();
        for item in params.split(',').filter(|p| !p.trim().is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got `{item}`")))?;
            pairs.push((key.trim(), value.trim()));
        }
        let get = |key: &str| pairs.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
        let check_keys = |allowed: &[&str]| -> Result<()> {
            match pairs.iter().find(|(k, _)| !allowed.contains(k)) {
                Some((k, _)) => Err(bad(format!("unknown parameter `{k}`"))),
                None => Ok(()),
            }
        };
        let int = |key: &str, default: Option<usize>| -> Result<usize> {
            match get(key) {
                Some(v) => v
                    .parse()
                    .map_err(|_| bad(format!("`{key}` must be a nonnegative integer"))),
                None => default.ok_or_else(|| bad(format!("missing `{key}`"))),
            }
        };

        let spec = match kind.trim() {
            "lowess" => {
                check_keys(&["d", "k"])?;
                MethodSpec::Lowess {
                    degree: int("d", Some(1))? as u32,
                    k: int("k", None)?,
                }
            }
            "rbf-local" => {
                check_keys(&["poly", "k"])?;
                let tail = match get("poly").unwrap_or("const") {
                    "none" => RbfTail::None,
                    "const" | "constant" | "0" => RbfTail::Constant,
                    d => RbfTail::Degree(d.parse().map_err(|_| bad(format!("bad poly `{d}`")))?),
                };
                MethodSpec::RbfLocal {
                    tail,
                    k: int("k", None)?,
                }
            }
            "rbf-global" => {
                check_keys(&["m", "d", "overlap"])?;
                let overlap = match get("overlap") {
                    Some(v) => v.parse().map_err(|_| bad("`overlap` must be a number".into()))?,
                    None => DEFAULT_OVERLAP,
                };
                if !(overlap > 0.0 && f64::is_finite(overlap)) {
                    return Err(bad("`overlap` must be positive".into()));
                }
                MethodSpec::RbfGlobal {
                    m: int("m", None)?,
                    degree: int("d", Some(1))? as u32,
                    overlap,
                }
            }
            other => return Err(bad(format!("unknown method `{other}`"))),
        };
        if spec.param() == 0 {
            return Err(bad("K / M must be at least 1".into()));
        }
        Ok(spec)
    }
}

/// Where smoothed values are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QueryMode {
    #[default]
    AtSamples,
    /// `R` points on a uniform grid over the data's bounding box.
    UniformGrid(usize),
}

impl FromStr for QueryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "at-samples" => Ok(QueryMode::AtSamples),
            _ => s
                .strip_prefix("grid:")
                .and_then(|r| r.parse().ok())
                .filter(|&r| r >= 1)
                .map(QueryMode::UniformGrid)
                .ok_or_else(|| Error::Config(format!("queries `{s}`: expected at-samples or grid:R"))),
        }
    }
}

impl fmt::Display for QueryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryMode::AtSamples => f.write_str("at-samples"),
            QueryMode::UniformGrid(r) => write!(f, "grid:{r}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_cli_forms() {
        assert_eq!(
            "lowess:d=1,k=100".parse::<MethodSpec>().unwrap(),
            MethodSpec::Lowess { degree: 1, k: 100 }
        );
        assert_eq!(
            "rbf-local:poly=const,k=100".parse::<MethodSpec>().unwrap(),
            MethodSpec::RbfLocal {
                tail: RbfTail::Constant,
                k: 100
            }
        );
        assert_eq!(
            "rbf-local:poly=none,k=50".parse::<MethodSpec>().unwrap(),
            MethodSpec::RbfLocal {
                tail: RbfTail::None,
                k: 50
            }
        );
        assert_eq!(
            "rbf-global:m=20,d=1,overlap=2.0".parse::<MethodSpec>().unwrap(),
            MethodSpec::RbfGlobal {
                m: 20,
                degree: 1,
                overlap: 2.0
            }
        );
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "lowess:d=2,k=30",
            "rbf-local:poly=none,k=100",
            "rbf-local:poly=2,k=40",
            "rbf-global:m=20,d=1,overlap=2.5",
        ] {
            let m: MethodSpec = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
            assert_eq!(m.to_string().parse::<MethodSpec>().unwrap(), m);
        }
    }

    #[test]
    fn rejects_garbage() {
        for s in [
            "loess:k=3",
            "lowess:d=1",
            "lowess:k=0",
            "lowess:k=ten",
            "lowess:k=10,x=1",
            "rbf-global:m=20,overlap=-1",
            "rbf-local:poly=quad,k=3",
        ] {
            assert!(s.parse::<MethodSpec>().is_err(), "{s}");
        }
    }

    #[test]
    fn query_modes() {
        assert_eq!("at-samples".parse::<QueryMode>().unwrap(), QueryMode::AtSamples);
        assert_eq!("grid:500".parse::<QueryMode>().unwrap(), QueryMode::UniformGrid(500));
        assert!("grid:0".parse::<QueryMode>().is_err());
        assert!("grid".parse::<QueryMode>().is_err());
    }
}
