//! Built-in example models.

use crate::error::{Error, Result};
use crate::model::Model;

pub struct Example {
    pub name: &'static str,
    pub source: &'static str,
}

macro_rules! examples {
    ($($name:literal),* $(,)?) => {
        &[$(Example { name: $name, source: include_str!(concat!("../models/", $name, ".toml")) }),*]
    };
}

pub const EXAMPLES: &[Example] = examples![
    "r3_volume",
    "r3_expvol",
    "r4_top",
    "r5_decomposable",
    "r6_nondecomposable",
    "r4_symplectic_order2",
    "pointalg4",
    "aff1",
    "cotangent_symplectic_r4",
];

pub fn find(name: &str) -> Option<&'static Example> {
    EXAMPLES.iter().find(|e| e.name == name)
}

pub fn load(name: &str) -> Result<Model> {
    let e = find(name).ok_or_else(|| Error::Model(format!("no built-in example `{name}`")))?;
    Model::parse(e.source)
}
