use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geodata::io::read_to_string;
use crate::geodata::raster::annotate;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct AddressRecord<T> {
    pub id: String,
    pub address: String,
    pub x: T,
    pub y: T,
    pub z: T,
    /// Output of [`normalize_address`] on `address`.
    pub tokens: Vec<String>,
}

impl<T: Real> AddressRecord<T> {
    pub fn location(&self) -> [T; 3] {
        [self.x, self.y, self.z]
    }
}

/// Case-folds, turns every non-alphanumeric character into a separator and
/// splits on whitespace.
pub fn normalize_address(text: &str) -> Vec<String> {
    let folded: String = text
        .chars()
        .flat_map(char::to_lowercase)
        .map(|c| if c.is_alphanumeric() { c } else { ' ' })
        .collect();
    folded.split_whitespace().map(str::to_string).collect()
}

/// Standard address library used for geocoding.
#[derive(Debug, Clone, PartialEq)]
pub struct AddressLibrary<T> {
    records: Vec<AddressRecord<T>>,
}

impl<T: Real> AddressLibrary<T> {
    /// `(id, address, [x, y, z])` entries.
    pub fn new(entries: Vec<(String, String, [T; 3])>) -> Result<Self> {
        let mut ids = HashSet::with_capacity(entries.len());
        let mut records = Vec::with_capacity(entries.len());
        for (id, address, [x, y, z]) in entries {
            if !ids.insert(id.clone()) {
                return Err(Error::Invalid(format!("duplicate id '{id}'")));
            }
            let tokens = normalize_address(&address);
            if tokens.is_empty() {
                return Err(Error::Invalid(format!("empty address for id '{id}'")));
            }
            records.push(AddressRecord {
                id,
                address,
                x,
                y,
                z,
                tokens,
            });
        }
        Ok(AddressLibrary { records })
    }

    pub fn records(&self) -> &[AddressRecord<T>] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = rdr
            .headers()
            .map_err(|e| Error::Parse(format!("header: {e}")))?
            .clone();
        let expected = ["id", "address", "x", "y", "z"];
        if headers.len() != expected.len() || headers.iter().zip(expected).any(|(h, e)| h != e) {
            return Err(Error::Parse(format!(
                "address header must be 'id,address,x,y,z', found '{}'",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut entries = Vec::new();
        for (rowno, rec) in rdr.records().enumerate() {
            let line = rowno + 2;
            let rec = rec.map_err(|e| Error::Parse(format!("line {line}: {e}")))?;
            let num = |i: usize| -> Result<T> {
                rec[i].parse().map_err(|_| {
                    Error::Parse(format!("line {line}: {} is not a number: '{}'", expected[i], &rec[i]))
                })
            };
            entries.push((rec[0].to_string(), rec[1].to_string(), [num(2)?, num(3)?, num(4)?]));
        }
        Self::new(entries)
    }
}

pub fn load_address_library<T: Real>(path: impl AsRef<Path>) -> Result<AddressLibrary<T>> {
    let path = path.as_ref();
    AddressLibrary::from_csv(&read_to_string(path)?).map_err(|e| annotate(path, e))
}
