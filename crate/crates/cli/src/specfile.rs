//! Target-state specification files.
//!
//! ```text
//! # comments run to the end of the line; blank lines are ignored
//! n 1                  # number of qubits, exactly once, before any entry
//! m 2                  # optional precision; `--m` overrides it
//! normalize            # optional: rescale instead of rejecting a non-unit norm
//! cart 0 -0.5547       # one entry per basis state, as real and imaginary parts
//! cart -0.83205 0
//! ```
//!
//! Entries may instead be written `polar <magnitude> <phase>` with the phase
//! in turns (`0.25` is a quarter turn). A file uses one style throughout.

use cmprep_core::{Complex64 as C64, Normalization, TargetState};
use thiserror::Error;

/// Largest `n` the parser accepts; anything near it is refused later by the
/// memory cap anyway.
pub const MAX_SPEC_QUBITS: usize = 40;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{}: {msg}", location(*.line))]
pub struct SpecError {
    /// One-based line number, or 0 for problems with the file as a whole.
    pub line: usize,
    pub msg: String,
}

fn location(line: usize) -> String {
    if line == 0 {
        "spec file".to_string()
    } else {
        format!("spec line {line}")
    }
}

fn fail<T>(line: usize, msg: impl Into<String>) -> Result<T, SpecError> {
    Err(SpecError { line, msg: msg.into() })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Entries {
    Cartesian(Vec<C64>),
    Polar { magnitudes: Vec<f64>, phases: Vec<f64> },
}

impl Entries {
    pub fn len(&self) -> usize {
        match self {
            Entries::Cartesian(v) => v.len(),
            Entries::Polar { magnitudes, .. } => magnitudes.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpecFile {
    pub n: usize,
    pub m: Option<u32>,
    pub normalize: bool,
    pub entries: Entries,
}

impl SpecFile {
    /// Parses the grammar above. The entry count is checked by
    /// [`SpecFile::target`], so that an oversized `n` can be reported as a
    /// capacity problem first.
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let mut n = None;
        let mut m = None;
        let mut normalize = false;
        let mut entries: Option<Entries> = None;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            let mut words = content.split_whitespace();
            let Some(keyword) = words.next() else { continue };
            let args: Vec<&str> = words.collect();
            match keyword {
                "n" => {
                    if n.is_some() {
                        return fail(line, "`n` given twice");
                    }
                    let value: usize = single_int(line, "n", &args)?;
                    if value == 0 || value > MAX_SPEC_QUBITS {
                        return fail(line, format!("n must lie in 1..={MAX_SPEC_QUBITS}, got {value}"));
                    }
                    n = Some(value);
                }
                "m" => {
                    if m.is_some() {
                        return fail(line, "`m` given twice");
                    }
                    let value: u32 = single_int(line, "m", &args)?;
                    if value == 0 {
                        return fail(line, "precision m must be at least 1");
                    }
                    m = Some(value);
                }
                "normalize" => {
                    if !args.is_empty() {
                        return fail(line, "`normalize` takes no arguments");
                    }
                    if normalize {
                        return fail(line, "`normalize` given twice");
                    }
                    normalize = true;
                }
                "cart" | "polar" => {
                    if n.is_none() {
                        return fail(line, "`n` must precede the amplitude entries");
                    }
                    let [x, y] = pair(line, keyword, &args)?;
                    match (&mut entries, keyword) {
                        (None, "cart") => entries = Some(Entries::Cartesian(vec![C64::new(x, y)])),
                        (None, _) => entries = Some(Entries::Polar { magnitudes: vec![x], phases: vec![y] }),
                        (Some(Entries::Cartesian(v)), "cart") => v.push(C64::new(x, y)),
                        (Some(Entries::Polar { magnitudes, phases }), "polar") => {
                            magnitudes.push(x);
                            phases.push(y);
                        }
                        _ => return fail(line, "`cart` and `polar` entries cannot be mixed"),
                    }
                }
                other => return fail(line, format!("unknown keyword `{other}`")),
            }
        }

        let Some(n) = n else { return fail(0, "missing `n`") };
        let Some(entries) = entries else { return fail(0, "no amplitude entries") };
        Ok(Self { n, m, normalize, entries })
    }

    /// The described state, normalized or validated according to the
    /// `normalize` flag.
    pub fn target(&self) -> Result<TargetState, SpecError> {
        let expected = 1usize << self.n;
        if self.entries.len() != expected {
            return fail(0, format!("n = {} needs {expected} entries, found {}", self.n, self.entries.len()));
        }
        let norm = if self.normalize { Normalization::Rescale } else { Normalization::Strict };
        let result = match &self.entries {
            Entries::Cartesian(amps) => TargetState::from_complex(amps, norm),
            Entries::Polar { magnitudes, phases } => TargetState::from_polar(magnitudes.clone(), phases.clone(), norm),
        };
        result.or_else(|e| fail(0, e.to_string()))
    }
}

fn single_int<T: std::str::FromStr>(line: usize, key: &str, args: &[&str]) -> Result<T, SpecError> {
    match args {
        [value] => {
            value.parse().or_else(|_| fail(line, format!("`{key}` expects a non-negative integer, got `{value}`")))
        }
        _ => fail(line, format!("`{key}` expects exactly one value")),
    }
}

fn pair(line: usize, key: &str, args: &[&str]) -> Result<[f64; 2], SpecError> {
    let [a, b] = args else {
        return fail(line, format!("`{key}` expects exactly two numbers"));
    };
    let parse = |s: &str| match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => fail(line, format!("`{s}` is not a finite number")),
    };
    Ok([parse(a)?, parse(b)?])
}

#[cfg(test)]
mod tests {
    use super::*;

    const WORKED: &str = "\
# two-component example
n 1
m 2
cart 0 -0.5547001962252291
cart -0.8320502943378437 0
";

    #[test]
    fn parses_cartesian() {
        let spec = SpecFile::parse(WORKED).unwrap();
        assert_eq!(spec.n, 1);
        assert_eq!(spec.m, Some(2));
        assert!(!spec.normalize);
        let t = spec.target().unwrap();
        assert!((t.phases()[0] - 0.75).abs() < 1e-12);
        assert!((t.phases()[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn parses_polar_and_normalize() {
        let spec = SpecFile::parse("n 1\nnormalize\npolar 2 0.75\npolar 3 0.5 # trailing\n").unwrap();
        assert_eq!(spec.m, None);
        let t = spec.target().unwrap();
        assert!((t.magnitudes()[0] - 2.0 / 13f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rejects_malformed_files() {
        let cases = [
            ("n 1\ncart 1 0\npolar 0 0\n", 3, "mixed"),
            ("n 1\nm 0\ncart 1 0\ncart 0 0\n", 2, "at least 1"),
            ("cart 1 0\n", 1, "precede"),
            ("n 1\nn 1\n", 2, "twice"),
            ("n 1\ncart 1\n", 2, "two numbers"),
            ("n 1\ncart 1 nan\n", 2, "finite"),
            ("n x\n", 1, "integer"),
            ("n 0\n", 1, "1..="),
            ("n 1\nfoo\n", 2, "unknown"),
            ("n 1\nnormalize 1\n", 2, "no arguments"),
            ("m 2\n", 0, "missing `n`"),
            ("n 1\n", 0, "no amplitude"),
        ];
        for (text, line, needle) in cases {
            let err = SpecFile::parse(text).unwrap_err();
            assert_eq!(err.line, line, "{text:?}: {err}");
            assert!(err.msg.contains(needle), "{text:?}: {err}");
        }
    }

    #[test]
    fn target_checks_count_and_norm() {
        let err = SpecFile::parse("n 2\ncart 1 0\n").unwrap().target().unwrap_err();
        assert!(err.msg.contains("needs 4 entries"));
        let err = SpecFile::parse("n 1\ncart 1 0\ncart 1 0\n").unwrap().target().unwrap_err();
        assert!(err.msg.contains("norm"));
        assert!(err.to_string().starts_with("spec file:"));
    }
}
