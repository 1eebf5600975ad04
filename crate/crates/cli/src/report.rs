use std::fmt::Display;
use std::io::{self, Write};

use crich::Bounds;

/// One output record: a kind plus ordered key/value fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    kind: String,
    fields: Vec<(String, String)>,
}

impl Record {
    pub fn new(kind: impl Into<String>) -> Self {
        Record {
            kind: kind.into(),
            fields: Vec::new(),
        }
    }

    pub fn kv(mut self, key: &str, value: impl Display) -> Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    pub fn bounds(mut self, b: &Bounds) -> Self {
        for (k, v) in b.entries() {
            self.fields.push((k.to_string(), v.to_string()));
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// `kind=<kind> key=value ...`; values with spaces or quotes are quoted.
    pub fn machine(&self) -> String {
        let mut out = format!("kind={}", self.kind);
        for (k, v) in &self.fields {
            out.push(' ');
            out.push_str(k);
            out.push('=');
            out.push_str(&quote(v));
        }
        out
    }

    pub fn human(&self) -> String {
        let width = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = format!("[{}]\n", self.kind);
        for (k, v) in &self.fields {
            out.push_str(&format!("  {k:<width$}  {v}\n"));
        }
        out
    }
}

fn quote(v: &str) -> String {
    if v.is_empty() || v.contains([' ', '"', '\t']) {
        format!("\"{}\"", v.replace('\\', "\\\\").replace('"', "\\\""))
    } else {
        v.to_string()
    }
}

/// Writes records in the selected mode.
pub struct Emitter<'a> {
    out: &'a mut dyn Write,
    machine: bool,
}

impl<'a> Emitter<'a> {
    pub fn new(out: &'a mut dyn Write, machine: bool) -> Self {
        Emitter { out, machine }
    }

    pub fn emit(&mut self, r: &Record) -> io::Result<()> {
        if self.machine {
            writeln!(self.out, "{}", r.machine())
        } else {
            write!(self.out, "{}", r.human())
        }
    }
}
