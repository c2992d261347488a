//! The v1 report schema shared by all subcommands: a flat, ordered list of
//! key/value fields with two machine renderings, line-oriented `key: value`
//! text and JSON. Both renderings are deterministic functions of the
//! fields; anything nondeterministic (timing) belongs on the diagnostic
//! stream, not here.

use std::fmt::Write as _;

pub const SCHEMA_VERSION: &str = "v1";

#[derive(Clone, Debug, PartialEq)]
pub enum Field {
    Str(String),
    Nat(u64),
    Bool(bool),
}

impl From<&str> for Field {
    fn from(s: &str) -> Field {
        Field::Str(s.to_string())
    }
}

impl From<String> for Field {
    fn from(s: String) -> Field {
        Field::Str(s)
    }
}

impl From<u64> for Field {
    fn from(n: u64) -> Field {
        Field::Nat(n)
    }
}

impl From<usize> for Field {
    fn from(n: usize) -> Field {
        Field::Nat(n as u64)
    }
}

impl From<bool> for Field {
    fn from(b: bool) -> Field {
        Field::Bool(b)
    }
}

/// An ordered report. The first two fields are always `v` and `command`.
#[derive(Clone, Debug)]
pub struct Report {
    entries: Vec<(String, Field)>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            entries: vec![
                ("v".to_string(), Field::Str(SCHEMA_VERSION.to_string())),
                ("command".to_string(), Field::Str(command.to_string())),
            ],
        }
    }

    pub fn push(&mut self, key: &str, value: impl Into<Field>) -> &mut Self {
        self.entries.push((key.to_string(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Field> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn entries(&self) -> &[(String, Field)] {
        &self.entries
    }

    /// Line-oriented rendering, one `key: value` per line.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            match v {
                Field::Str(s) => writeln!(out, "{k}: {s}").unwrap(),
                Field::Nat(n) => writeln!(out, "{k}: {n}").unwrap(),
                Field::Bool(b) => writeln!(out, "{k}: {b}").unwrap(),
            }
        }
        out
    }

    /// JSON rendering with keys sorted, values typed.
    pub fn to_json(&self) -> String {
        let mut map = serde_json::Map::new();
        for (k, v) in &self.entries {
            let val = match v {
                Field::Str(s) => serde_json::Value::String(s.clone()),
                Field::Nat(n) => serde_json::Value::Number((*n).into()),
                Field::Bool(b) => serde_json::Value::Bool(*b),
            };
            map.insert(k.clone(), val);
        }
        serde_json::Value::Object(map).to_string()
    }
}
