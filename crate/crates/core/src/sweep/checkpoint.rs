//! Checkpoint file: JSON lines. The first line is
//! `{"config_hash": ..., "point_count": ...}`; each further line is one
//! finished point `{"index", "u", "v", "seed", "values", "error"}` with
//! non-finite values stored as strings. The whole file is rewritten
//! atomically after every batch.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use super::emit::{value_from_json, value_to_json, write_atomic};
use super::run::PointResult;
use crate::error::{Error, Result};

/// `<out>.checkpoint.jsonl`
pub fn checkpoint_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".checkpoint.jsonl");
    PathBuf::from(s)
}

pub fn save(
    path: &Path,
    hash: &str,
    point_count: usize,
    done: &BTreeMap<usize, PointResult>,
) -> Result<()> {
    let mut out = json!({ "config_hash": hash, "point_count": point_count }).to_string();
    out.push('\n');
    for p in done.values() {
        let line = json!({
            "index": p.index,
            "u": p.u,
            "v": p.v,
            "seed": p.seed,
            "values": p.values.iter().map(|&x| value_to_json(x)).collect::<Vec<_>>(),
            "error": p.error,
        });
        out.push_str(&line.to_string());
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

fn parse_point(line: &str) -> Option<PointResult> {
    let v: Value = serde_json::from_str(line).ok()?;
    Some(PointResult {
        index: v["index"].as_u64()? as usize,
        u: v["u"].as_f64()?,
        v: v["v"].as_f64()?,
        seed: v["seed"].as_u64()?,
        values: v["values"]
            .as_array()?
            .iter()
            .map(value_from_json)
            .collect::<Result<_>>()
            .ok()?,
        error: v["error"].as_str().map(str::to_string),
    })
}

/// Finished points recorded for the same config hash and grid size. A
/// missing file or a checkpoint of another config yields no points; a
/// truncated trailing line is ignored.
pub fn load(path: &Path, hash: &str, point_count: usize) -> Result<BTreeMap<usize, PointResult>> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(BTreeMap::new()),
        Err(source) => {
            return Err(Error::Io {
                path: path.to_path_buf(),
                source,
            })
        }
    };
    let mut lines = text.lines();
    let header: Option<Value> = lines.next().and_then(|l| serde_json::from_str(l).ok());
    let matches = header.is_some_and(|h| {
        h["config_hash"].as_str() == Some(hash) && h["point_count"].as_u64() == Some(point_count as u64)
    });
    if !matches {
        return Ok(BTreeMap::new());
    }
    Ok(lines
        .filter_map(parse_point)
        .map(|p| (p.index, p))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(i: usize, x: f64) -> PointResult {
        PointResult {
            index: i,
            u: 0.5,
            v: 1.0 / 3.0,
            seed: 99,
            values: vec![x, f64::INFINITY],
            error: None,
        }
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let done: BTreeMap<usize, PointResult> =
            [(0, point(0, 0.1)), (3, point(3, 1e-300))].into_iter().collect();
        save(&path, "abc", 4, &done).unwrap();
        assert_eq!(load(&path, "abc", 4).unwrap(), done);
        assert!(load(&path, "other", 4).unwrap().is_empty());
        assert!(load(&path, "abc", 5).unwrap().is_empty());
        assert!(load(&dir.path().join("missing"), "abc", 4).unwrap().is_empty());
    }

    #[test]
    fn truncated_line_is_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let done: BTreeMap<usize, PointResult> = [(1, point(1, 2.0))].into_iter().collect();
        save(&path, "h", 2, &done).unwrap();
        let mut text = std::fs::read_to_string(&path).unwrap();
        text.push_str("{\"index\": 0, \"u\"");
        std::fs::write(&path, text).unwrap();
        assert_eq!(load(&path, "h", 2).unwrap().len(), 1);
    }
}
