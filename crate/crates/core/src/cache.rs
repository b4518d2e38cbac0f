//! Per-discriminant cache: one self-describing JSON record per line,
//! keyed by d. Records carry whatever has been computed so far (class
//! number, elementary divisors, generator forms, per-p ranks, stored
//! Selmer witnesses); later lines for the same d supersede earlier ones
//! after a merge, so the file can simply be appended to.
//!
//! Within a process the cache supports concurrent readers and serialized
//! writers.

use crate::error::{Error, Result};
use crate::quadforms::FieldRecord;
use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::RwLock;

pub struct Cache {
    path: Option<PathBuf>,
    records: RwLock<HashMap<i64, FieldRecord>>,
}

impl Cache {
    /// Purely in-memory cache (no persistence).
    pub fn in_memory() -> Cache {
        Cache {
            path: None,
            records: RwLock::new(HashMap::new()),
        }
    }

    /// Open (or create) a persistent cache file.
    pub fn open(path: impl AsRef<Path>) -> Result<Cache> {
        let path = path.as_ref().to_path_buf();
        let mut records = HashMap::new();
        if path.exists() {
            let file = File::open(&path)?;
            for (lineno, line) in BufReader::new(file).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let rec: FieldRecord = serde_json::from_str(&line).map_err(|e| {
                    Error::CacheFormat(format!("{}:{}: {e}", path.display(), lineno + 1))
                })?;
                let entry = records.entry(rec.d).or_insert_with(|| rec.clone());
                merge(entry, rec);
            }
        }
        Ok(Cache {
            path: Some(path),
            records: RwLock::new(records),
        })
    }

    pub fn len(&self) -> usize {
        self.records.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, d: i64) -> Option<FieldRecord> {
        self.records.read().unwrap().get(&d).cloned()
    }

    pub fn rank(&self, d: i64, p: u32) -> Option<u32> {
        self.records
            .read()
            .unwrap()
            .get(&d)
            .and_then(|r| r.ranks.get(&p).copied())
    }

    /// Merge records in and append them to the backing file in one write.
    pub fn put_all(&self, recs: impl IntoIterator<Item = FieldRecord>) -> Result<()> {
        let mut map = self.records.write().unwrap();
        let mut lines = String::new();
        for rec in recs {
            let entry = map.entry(rec.d).or_insert_with(|| FieldRecord {
                d: rec.d,
                h: rec.h,
                elementary_divisors: Vec::new(),
                generator_forms: Vec::new(),
                ranks: Default::default(),
                selmer: Default::default(),
            });
            merge(entry, rec);
            lines.push_str(&serde_json::to_string(entry).expect("record serializes"));
            lines.push('\n');
        }
        if let Some(path) = &self.path {
            let mut f = OpenOptions::new().create(true).append(true).open(path)?;
            f.write_all(lines.as_bytes())?;
        }
        Ok(())
    }

    pub fn put(&self, rec: FieldRecord) -> Result<()> {
        self.put_all([rec])
    }
}

fn merge(into: &mut FieldRecord, from: FieldRecord) {
    into.h = from.h.max(into.h);
    if !from.elementary_divisors.is_empty() {
        into.elementary_divisors = from.elementary_divisors;
    }
    if !from.generator_forms.is_empty() {
        into.generator_forms = from.generator_forms;
    }
    into.ranks.extend(from.ranks);
    for (p, wits) in from.selmer {
        into.selmer.entry(p).or_default().extend(wits);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_merge() {
        let dir = std::env::temp_dir().join(format!("ringspaces-cache-{}", std::process::id()));
        let _ = std::fs::remove_file(&dir);
        {
            let cache = Cache::open(&dir).unwrap();
            let mut rec = FieldRecord {
                d: -4027,
                h: 9,
                elementary_divisors: vec![3, 3],
                generator_forms: vec![],
                ranks: Default::default(),
                selmer: Default::default(),
            };
            rec.ranks.insert(3, 2);
            cache.put(rec).unwrap();
            let mut rec2 = FieldRecord {
                d: -4027,
                h: 9,
                elementary_divisors: vec![],
                generator_forms: vec![],
                ranks: Default::default(),
                selmer: Default::default(),
            };
            rec2.ranks.insert(5, 0);
            cache.put(rec2).unwrap();
        }
        let cache = Cache::open(&dir).unwrap();
        let rec = cache.get(-4027).unwrap();
        assert_eq!(rec.h, 9);
        assert_eq!(rec.elementary_divisors, vec![3, 3]);
        assert_eq!(rec.ranks.get(&3), Some(&2));
        assert_eq!(rec.ranks.get(&5), Some(&0));
        std::fs::remove_file(&dir).unwrap();
    }
}
