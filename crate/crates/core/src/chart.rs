use std::collections::BTreeSet;

use crate::error::{Error, Result};

const RESERVED: &[&str] = &["exp", "diff"];

/// Coordinate names of the base chart plus the declared function symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Chart {
    coordinates: Vec<String>,
    functions: Vec<String>,
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Chart {
    pub fn new<S: AsRef<str>>(coordinates: &[S], functions: &[S]) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for name in coordinates.iter().chain(functions).map(AsRef::as_ref) {
            if !is_ident(name) {
                return Err(Error::Chart(format!("`{name}` is not an identifier")));
            }
            if RESERVED.contains(&name) {
                return Err(Error::Chart(format!("`{name}` is reserved")));
            }
            if !seen.insert(name.to_string()) {
                return Err(Error::Chart(format!("`{name}` declared twice")));
            }
        }
        Ok(Chart {
            coordinates: coordinates.iter().map(|s| s.as_ref().to_string()).collect(),
            functions: functions.iter().map(|s| s.as_ref().to_string()).collect(),
        })
    }

    /// Coordinates `x1, ..., xd`.
    pub fn standard(dim: usize) -> Self {
        Chart {
            coordinates: (1..=dim).map(|i| format!("x{i}")).collect(),
            functions: Vec::new(),
        }
    }

    /// A zero-dimensional base.
    pub fn point() -> Self {
        Chart::default()
    }

    pub fn dim(&self) -> usize {
        self.coordinates.len()
    }

    pub fn coordinates(&self) -> &[String] {
        &self.coordinates
    }

    pub fn functions(&self) -> &[String] {
        &self.functions
    }

    pub fn coordinate_index(&self, name: &str) -> Option<usize> {
        self.coordinates.iter().position(|c| c == name)
    }

    pub fn is_function(&self, name: &str) -> bool {
        self.functions.iter().any(|f| f == name)
    }

    pub fn with_function(&self, name: &str) -> Result<Chart> {
        let mut functions = self.functions.clone();
        functions.push(name.to_string());
        Chart::new(&self.coordinates, &functions)
    }

    /// A symbol name not clashing with any coordinate or declared function.
    pub fn fresh_symbol(&self, prefix: &str) -> String {
        self.fresh_symbols(prefix, 1).remove(0)
    }

    pub fn fresh_symbols(&self, prefix: &str, count: usize) -> Vec<String> {
        let taken = |s: &str| self.coordinate_index(s).is_some() || self.is_function(s);
        let mut out = Vec::with_capacity(count);
        let mut k = 1usize;
        while out.len() < count {
            let cand = format!("{prefix}{k}");
            if !taken(&cand) {
                out.push(cand);
            }
            k += 1;
        }
        out
    }
}
