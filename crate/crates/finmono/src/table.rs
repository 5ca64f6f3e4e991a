//! Character-table JSON:
//!
//! ```json
//! {"group_name": "2.J2", "group_order": 1209600,
//!  "classes": [{"label": "1A", "size": 1, "a": 6, "b": 0, "den": 1, "square": "1A"}, …]}
//! ```
//!
//! The value on a class is `(a + b√5)/den`. `square` is optional; sizes and
//! the order may also be given as decimal strings.

use std::path::Path;

use num_bigint::BigInt;
use serde::Deserialize;

use finmono_core::{CharacterTable, ClassEntry};

use crate::metadata::sha256_hex;
use crate::{Error, Result};

#[derive(Deserialize)]
#[serde(untagged)]
enum BigField {
    Num(u64),
    Text(String),
}

impl BigField {
    fn value(&self, what: &str) -> std::result::Result<BigInt, String> {
        match self {
            BigField::Num(n) => Ok(BigInt::from(*n)),
            BigField::Text(s) => s.trim().parse().map_err(|_| format!("{what}: bad integer {s:?}")),
        }
    }
}

#[derive(Deserialize)]
struct ClassFile {
    label: String,
    size: BigField,
    a: i64,
    b: i64,
    den: i64,
    #[serde(default)]
    square: Option<String>,
}

#[derive(Deserialize)]
struct TableFile {
    group_name: String,
    group_order: BigField,
    classes: Vec<ClassFile>,
}

/// Parses and validates a table held in memory.
pub fn parse_character_table(text: &str, origin: &str) -> Result<CharacterTable> {
    let file: TableFile = serde_json::from_str(text).map_err(|source| Error::Json {
        path: origin.into(),
        source,
    })?;
    let mut problems = Vec::new();
    let order = file.group_order.value("group_order").unwrap_or_else(|e| {
        problems.push(e);
        BigInt::from(0)
    });
    let classes = file
        .classes
        .into_iter()
        .map(|c| ClassEntry {
            size: c.size.value(&format!("class {}", c.label)).unwrap_or_else(|e| {
                problems.push(e);
                BigInt::from(0)
            }),
            label: c.label,
            a: c.a,
            b: c.b,
            den: c.den,
            square: c.square,
        })
        .collect();
    if !problems.is_empty() {
        return Err(finmono_core::Error::TableIntegrity(problems).into());
    }
    Ok(CharacterTable::new(file.group_name, order, classes)?)
}

/// Loads a table file, returning it with the file's sha256.
pub fn load_character_table(path: &Path) -> Result<(CharacterTable, String)> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let text = String::from_utf8_lossy(&bytes);
    let table = parse_character_table(&text, &path.display().to_string())?;
    Ok((table, sha256_hex(&bytes)))
}

/// The 2.J₂ table shipped with the crate.
pub const BUNDLED_2J2: &str = include_str!("../data/2j2.json");

pub fn bundled_2j2() -> CharacterTable {
    parse_character_table(BUNDLED_2J2, "data/2j2.json").expect("bundled table is valid")
}
