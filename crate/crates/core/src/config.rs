//! Flat `key = value` configuration text with `#` comments, validated
//! against a declared key schema.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown key '{key}'")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key '{key}' given twice")]
    Duplicate { line: usize, key: String },
    #[error("key '{key}': cannot read '{value}' as {expected}")]
    BadValue {
        key: String,
        value: String,
        expected: &'static str,
    },
    #[error("bad grid '{0}': expected a,b,c or lo:hi:n or log:lo:hi:n")]
    BadGrid(String),
}

/// One documented key: name, default as text (empty when optional) and help line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KeySpec {
    pub name: &'static str,
    pub default: &'static str,
    pub help: &'static str,
}

/// `key = default  # help` lines, the format `--help` prints and the parser reads.
pub fn schema_help(schema: &[KeySpec]) -> String {
    let width = schema.iter().map(|k| k.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for k in schema {
        let lhs = format!("{:width$} = {}", k.name, k.default);
        let _ = writeln!(out, "{lhs:<w2$}  # {}", k.help, w2 = width + 24);
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct KeyValues {
    entries: BTreeMap<String, String>,
    schema: Vec<KeySpec>,
}

impl KeyValues {
    pub fn parse(text: &str, schema: &[KeySpec]) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((key, value)) = body.split_once('=') else {
                return Err(ConfigError::Syntax {
                    line,
                    msg: format!("expected 'key = value', got '{body}'"),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(ConfigError::Syntax {
                    line,
                    msg: "empty key".into(),
                });
            }
            if !schema.iter().any(|k| k.name == key) {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                });
            }
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return Err(ConfigError::Duplicate {
                    line,
                    key: key.to_string(),
                });
            }
        }
        Ok(Self {
            entries,
            schema: schema.to_vec(),
        })
    }

    /// Set a key after parsing (command-line flags override the file).
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        if !self.schema.iter().any(|k| k.name == key) {
            return Err(ConfigError::UnknownKey {
                line: 0,
                key: key.to_string(),
            });
        }
        self.entries.insert(key.to_string(), value.to_string());
        Ok(())
    }

    /// The given value, else the schema default; `None` when both are absent.
    pub fn raw(&self, key: &str) -> Option<&str> {
        if let Some(v) = self.entries.get(key) {
            return Some(v.as_str());
        }
        let spec = self.schema.iter().find(|k| k.name == key)?;
        (!spec.default.is_empty()).then_some(spec.default)
    }

    fn typed<T: std::str::FromStr>(
        &self,
        key: &str,
        expected: &'static str,
    ) -> Result<Option<T>, ConfigError> {
        self.raw(key)
            .map(|v| {
                v.parse().map_err(|_| ConfigError::BadValue {
                    key: key.to_string(),
                    value: v.to_string(),
                    expected,
                })
            })
            .transpose()
    }

    pub fn f64_opt(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        let v: Option<f64> = self.typed(key, "a number")?;
        match v {
            Some(x) if !x.is_finite() => Err(ConfigError::BadValue {
                key: key.to_string(),
                value: x.to_string(),
                expected: "a finite number",
            }),
            _ => Ok(v),
        }
    }

    pub fn f64(&self, key: &str) -> Result<f64, ConfigError> {
        self.f64_opt(key)?.ok_or_else(|| missing(key))
    }

    pub fn usize(&self, key: &str) -> Result<usize, ConfigError> {
        self.typed(key, "a nonnegative integer")?
            .ok_or_else(|| missing(key))
    }

    pub fn u64(&self, key: &str) -> Result<u64, ConfigError> {
        self.typed(key, "a nonnegative integer")?
            .ok_or_else(|| missing(key))
    }

    pub fn bool(&self, key: &str) -> Result<bool, ConfigError> {
        self.typed(key, "true or false")?
            .ok_or_else(|| missing(key))
    }

    pub fn string(&self, key: &str) -> Result<String, ConfigError> {
        self.raw(key)
            .map(str::to_string)
            .ok_or_else(|| missing(key))
    }

    pub fn grid(&self, key: &str) -> Result<Vec<f64>, ConfigError> {
        parse_grid(self.raw(key).ok_or_else(|| missing(key))?)
    }
}

fn missing(key: &str) -> ConfigError {
    ConfigError::BadValue {
        key: key.to_string(),
        value: String::new(),
        expected: "a value (the key has no default)",
    }
}

/// `a,b,c` lists, `lo:hi:n` linear grids and `log:lo:hi:n` geometric grids
/// (endpoints included).
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, ConfigError> {
    let bad = || ConfigError::BadGrid(spec.to_string());
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(bad)
    };
    let parts: Vec<&str> = spec.split(':').collect();
    let grid = match parts.as_slice() {
        [single] => single.split(',').map(num).collect::<Result<Vec<_>, _>>()?,
        [lo, hi, n] => linear(num(lo)?, num(hi)?, count(n).ok_or_else(bad)?),
        ["log", lo, hi, n] => {
            let (lo, hi) = (num(lo)?, num(hi)?);
            if !(lo > 0.0 && hi > 0.0) {
                return Err(bad());
            }
            let n = count(n).ok_or_else(bad)?;
            let mut g: Vec<f64> = linear(lo.ln(), hi.ln(), n)
                .into_iter()
                .map(f64::exp)
                .collect();
            g[0] = lo;
            g[n - 1] = if n == 1 { lo } else { hi };
            g
        }
        _ => return Err(bad()),
    };
    if grid.is_empty() {
        return Err(bad());
    }
    Ok(grid)
}

fn count(s: &str) -> Option<usize> {
    s.trim().parse().ok().filter(|&n| n >= 1)
}

fn linear(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SCHEMA: &[KeySpec] = &[
        KeySpec {
            name: "k",
            default: "1.5",
            help: "wavenumber",
        },
        KeySpec {
            name: "seed",
            default: "7",
            help: "RNG seed",
        },
        KeySpec {
            name: "out",
            default: "",
            help: "output path",
        },
    ];

    #[test]
    fn parses_comments_and_defaults() {
        let kv = KeyValues::parse("# header\n k = 2.5  # trailing\n\n", SCHEMA).unwrap();
        assert_eq!(kv.f64("k").unwrap(), 2.5);
        assert_eq!(kv.u64("seed").unwrap(), 7);
        assert!(kv.raw("out").is_none());
        assert!(kv.string("out").is_err());
    }

    #[test]
    fn rejects_unknown_duplicate_and_malformed() {
        assert!(matches!(
            KeyValues::parse("kk = 1", SCHEMA),
            Err(ConfigError::UnknownKey { line: 1, .. })
        ));
        assert!(matches!(
            KeyValues::parse("k = 1\nk = 2", SCHEMA),
            Err(ConfigError::Duplicate { line: 2, .. })
        ));
        assert!(matches!(
            KeyValues::parse("k 1", SCHEMA),
            Err(ConfigError::Syntax { .. })
        ));
        let kv = KeyValues::parse("k = abc", SCHEMA).unwrap();
        assert!(matches!(kv.f64("k"), Err(ConfigError::BadValue { .. })));
        let kv = KeyValues::parse("k = inf", SCHEMA).unwrap();
        assert!(kv.f64("k").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("1,2.5,3").unwrap(), vec![1.0, 2.5, 3.0]);
        assert_eq!(
            parse_grid("0:1:5").unwrap(),
            vec![0.0, 0.25, 0.5, 0.75, 1.0]
        );
        let g = parse_grid("log:1:1000:4").unwrap();
        assert!((g[1] - 10.0).abs() < 1e-12 && g[3] == 1000.0);
        assert_eq!(parse_grid("3:5:1").unwrap(), vec![3.0]);
        for bad in ["", "1:2", "log:0:1:3", "a,b", "1:2:0", "x:1:2:3"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn help_lists_every_key() {
        let h = schema_help(SCHEMA);
        assert_eq!(h.lines().count(), 3);
        // the help text parses back as a config
        let kv = KeyValues::parse(&h.replace("out ", "# out "), SCHEMA).unwrap();
        assert_eq!(kv.f64("k").unwrap(), 1.5);
    }
}
