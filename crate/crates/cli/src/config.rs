//! Flag values merged with an optional JSON config file.

use std::path::Path;

use num_complex::Complex64;
use serde_json::Value;

use crate::CliError;

/// Raw option values, as strings, before interpretation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub q: Option<String>,
    pub p: Option<String>,
    pub z: Option<String>,
    pub w: Option<String>,
    pub t: Option<String>,
    pub s: Option<String>,
    pub u: Option<String>,
    pub m: Option<String>,
    pub word: Option<String>,
    pub seed: Option<String>,
    pub tol: Option<String>,
    pub n_max: Option<String>,
}

impl Settings {
    fn slot(&mut self, key: &str) -> Option<&mut Option<String>> {
        Some(match key {
            "q" => &mut self.q,
            "p" => &mut self.p,
            "z" => &mut self.z,
            "w" => &mut self.w,
            "t" => &mut self.t,
            "s" => &mut self.s,
            "u" => &mut self.u,
            "m" => &mut self.m,
            "word" => &mut self.word,
            "seed" => &mut self.seed,
            "tol" => &mut self.tol,
            "n_max" | "n-max" => &mut self.n_max,
            _ => return None,
        })
    }

    /// Fills unset values from a JSON object. A key that is also set on the
    /// command line is an error.
    pub fn merge_json(&mut self, text: &str) -> Result<(), CliError> {
        let obj = match serde_json::from_str::<Value>(text) {
            Ok(Value::Object(o)) => o,
            Ok(_) => return Err(CliError::Usage("config must be a JSON object".into())),
            Err(e) => return Err(CliError::Usage(format!("config is not valid JSON: {e}"))),
        };
        for (key, value) in obj {
            let slot = self.slot(&key).ok_or_else(|| CliError::Usage(format!("unknown config key `{key}`")))?;
            if slot.is_some() {
                return Err(CliError::Usage(format!("`{key}` is given both as a flag and in the config file")));
            }
            *slot = Some(scalar_or_list(&key, &value)?);
        }
        Ok(())
    }

    pub fn merge_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        self.merge_json(&text)
    }
}

fn scalar(key: &str, v: &Value) -> Result<String, CliError> {
    match v {
        Value::Number(n) => Ok(n.to_string()),
        Value::String(s) => Ok(s.clone()),
        _ => Err(CliError::Usage(format!("config value for `{key}` must be a number or string"))),
    }
}

fn scalar_or_list(key: &str, v: &Value) -> Result<String, CliError> {
    match v {
        Value::Array(items) => Ok(items.iter().map(|x| scalar(key, x)).collect::<Result<Vec<_>, _>>()?.join(",")),
        other => scalar(key, other),
    }
}

/// Parses `a+bi`, `bi` or a bare real.
pub fn parse_complex(src: &str) -> Result<Complex64, CliError> {
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    s.parse::<Complex64>().map_err(|_| CliError::Usage(format!("`{src}` is not a complex number")))
}

pub fn parse_list(src: &str) -> Result<Vec<Complex64>, CliError> {
    src.split(',').map(parse_complex).collect()
}

pub fn parse_num<T: std::str::FromStr>(key: &str, src: &str) -> Result<T, CliError> {
    src.trim().parse().map_err(|_| CliError::Usage(format!("bad value `{src}` for --{key}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("0.5").unwrap(), Complex64::new(0.5, 0.0));
        assert_eq!(parse_complex("-0.3+0.2i").unwrap(), Complex64::new(-0.3, 0.2));
        assert_eq!(parse_complex(" 0.1 - 2e-1i ").unwrap(), Complex64::new(0.1, -0.2));
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert!(parse_complex("abc").is_err());
        assert_eq!(parse_list("0.7,0.6+0.1i").unwrap().len(), 2);
    }

    #[test]
    fn config_merge() {
        let mut s = Settings { q: Some("0.3".into()), ..Settings::default() };
        s.merge_json(r#"{"p": 0.2, "t": [0.7, "0.6", 0.5], "n-max": 64}"#).unwrap();
        assert_eq!(s.p.as_deref(), Some("0.2"));
        assert_eq!(s.t.as_deref(), Some("0.7,0.6,0.5"));
        assert_eq!(s.n_max.as_deref(), Some("64"));
        assert!(s.clone().merge_json(r#"{"q": 0.3}"#).is_err());
        assert!(s.clone().merge_json(r#"{"bogus": 1}"#).is_err());
        assert!(s.clone().merge_json("[1]").is_err());
        assert!(s.merge_json(r#"{"z": {"re": 1}}"#).is_err());
    }
}
