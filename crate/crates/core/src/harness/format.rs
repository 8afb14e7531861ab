//! JSON documents for maps and matrices, and JSON Lines streams of maps.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::algebra::{Field, FieldDescriptor};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::quadmap::QuadMap;

/// A map as `{"field": …, "nvars": n, "components": ["x1*x2", …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDocument {
    pub field: FieldDescriptor,
    pub nvars: usize,
    pub components: Vec<String>,
}

impl MapDocument {
    pub fn from_map(h: &QuadMap) -> MapDocument {
        MapDocument {
            field: h.field().descriptor().clone(),
            nvars: h.nvars(),
            components: h.to_polys().iter().map(|p| p.to_string()).collect(),
        }
    }

    pub fn to_map(&self) -> Result<QuadMap> {
        let f = Field::from_descriptor(&self.field)?;
        let comps: Vec<&str> = self.components.iter().map(String::as_str).collect();
        QuadMap::parse(&f, self.nvars, &comps)
    }
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Parse(format!("json: {e}"))
}

pub fn map_to_json(h: &QuadMap) -> String {
    serde_json::to_string_pretty(&MapDocument::from_map(h)).expect("map documents serialize")
}

pub fn map_from_json(s: &str) -> Result<QuadMap> {
    serde_json::from_str::<MapDocument>(s).map_err(json_err)?.to_map()
}

/// Row-major nested lists of element strings.
pub fn matrix_to_rows(m: &Matrix) -> Vec<Vec<String>> {
    let f = m.field();
    m.to_rows().iter().map(|r| r.iter().map(|x| f.format(x)).collect()).collect()
}

pub fn matrix_from_rows(f: &Field, rows: &[Vec<String>]) -> Result<Matrix> {
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(Error::Parse("ragged matrix rows".into()));
    }
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|s| f.parse(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(f, rows))
}

/// Writes one compact map document per line.
pub fn write_jsonl<W: Write>(out: &mut W, maps: impl IntoIterator<Item = QuadMap>) -> std::io::Result<u64> {
    let mut count = 0;
    for h in maps {
        serde_json::to_writer(&mut *out, &MapDocument::from_map(&h))?;
        out.write_all(b"\n")?;
        count += 1;
    }
    Ok(count)
}

pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<QuadMap>> {
    let mut maps = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
        if line.trim().is_empty() {
            continue;
        }
        maps.push(map_from_json(&line)?);
    }
    Ok(maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn map_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for f in [Field::rationals(), Field::prime(7).unwrap(), Field::extension(2, 3).unwrap()] {
            let h = QuadMap::random(&f, 4, 3, &mut rng);
            assert_eq!(map_from_json(&map_to_json(&h)).unwrap(), h);
        }
    }

    #[test]
    fn jsonl_round_trip() {
        let f = Field::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let maps: Vec<QuadMap> = (0..5).map(|_| QuadMap::random(&f, 3, 3, &mut rng)).collect();
        let mut buf = Vec::new();
        assert_eq!(write_jsonl(&mut buf, maps.clone()).unwrap(), 5);
        assert_eq!(read_jsonl(&buf[..]).unwrap(), maps);
    }
}
