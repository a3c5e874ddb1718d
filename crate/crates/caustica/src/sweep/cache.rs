//! Persistent cache for Bessel zeros and radial eigenvalues.
//!
//! On-disk layout: a magic+version header followed by append-only records
//!
//!     [u32 key_len][key bytes][u32 value_count][f64 values, LE][u64 fnv1a]
//!
//! The checksum covers key and payload bytes. A corrupt or truncated record
//! ends the load (everything before it is kept); a version mismatch ignores
//! the whole file so a stale format can never leak wrong numbers. Keys are
//! content-derived strings (surface hash, order, window bits), so identical
//! inputs hit identical records.
//!
//! Concurrency: any number of readers; writes are appended under a single
//! mutex and flushed per record.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use crate::error::Result;

const MAGIC: &[u8; 8] = b"CAUSTCCH";
const VERSION: u32 = 1;

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Shared zero/eigenvalue cache. `in_memory` gives a cache without a backing
/// file (used by `--seedless` runs and tests).
pub struct Cache {
    map: RwLock<HashMap<String, Arc<Vec<f64>>>>,
    writer: Mutex<Option<BufWriter<File>>>,
    path: Option<PathBuf>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl Cache {
    pub fn in_memory() -> Cache {
        Cache {
            map: RwLock::new(HashMap::new()),
            writer: Mutex::new(None),
            path: None,
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
        }
    }

    /// Open (or create) a cache file, loading every intact record.
    pub fn open(path: &Path) -> Result<Cache> {
        let mut map = HashMap::new();
        let mut reset_file = false;
        match File::open(path) {
            Ok(mut f) => {
                if !load_records(&mut f, &mut map) {
                    // Bad header/version: ignore contents, start fresh.
                    map.clear();
                    reset_file = true;
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                reset_file = true;
            }
            Err(e) => return Err(e.into()),
        }

        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
        let mut file = if reset_file {
            let mut f = OpenOptions::new()
                .write(true)
                .create(true)
                .truncate(true)
                .open(path)?;
            f.write_all(MAGIC)?;
            f.write_all(&VERSION.to_le_bytes())?;
            f.flush()?;
            f
        } else {
            OpenOptions::new().append(true).open(path)?
        };
        file.seek(SeekFrom::End(0))?;

        Ok(Cache {
            map: RwLock::new(map),
            writer: Mutex::new(Some(BufWriter::new(file))),
            path: Some(path.to_path_buf()),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
        })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn get(&self, key: &str) -> Option<Arc<Vec<f64>>> {
        let found = self.map.read().unwrap().get(key).cloned();
        match &found {
            Some(_) => self.hits.fetch_add(1, Ordering::Relaxed),
            None => 0,
        };
        found
    }

    pub fn put(&self, key: &str, values: &[f64]) -> Result<()> {
        {
            let mut map = self.map.write().unwrap();
            map.insert(key.to_string(), Arc::new(values.to_vec()));
        }
        let mut guard = self.writer.lock().unwrap();
        if let Some(w) = guard.as_mut() {
            let key_bytes = key.as_bytes();
            let mut payload =
                Vec::with_capacity(4 + key_bytes.len() + 4 + 8 * values.len() + 8);
            payload.extend_from_slice(&(key_bytes.len() as u32).to_le_bytes());
            payload.extend_from_slice(key_bytes);
            payload.extend_from_slice(&(values.len() as u32).to_le_bytes());
            for v in values {
                payload.extend_from_slice(&v.to_le_bytes());
            }
            let mut checked = Vec::with_capacity(key_bytes.len() + 8 * values.len());
            checked.extend_from_slice(key_bytes);
            for v in values {
                checked.extend_from_slice(&v.to_le_bytes());
            }
            payload.extend_from_slice(&fnv1a(&checked).to_le_bytes());
            w.write_all(&payload)?;
            w.flush()?;
        }
        Ok(())
    }

    /// Look up `key`; compute, store, and return on a miss.
    pub fn get_or_compute<F>(&self, key: &str, compute: F) -> Result<Arc<Vec<f64>>>
    where
        F: FnOnce() -> Result<Vec<f64>>,
    {
        if let Some(hit) = self.get(key) {
            return Ok(hit);
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let values = compute()?;
        self.put(key, &values)?;
        Ok(Arc::new(values))
    }

    /// Number of lookups answered from memory.
    pub fn hit_count(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    /// Number of lookups that had to compute (i.e. actual zero-finding /
    /// eigensolving work).
    pub fn miss_count(&self) -> u64 {
        self.misses.load(Ordering::Relaxed)
    }

    pub fn reset_counters(&self) {
        self.hits.store(0, Ordering::Relaxed);
        self.misses.store(0, Ordering::Relaxed);
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Returns false when the header is missing or the version mismatches.
/// Stops quietly at the first corrupt record.
fn load_records(f: &mut File, map: &mut HashMap<String, Arc<Vec<f64>>>) -> bool {
    let mut header = [0u8; 12];
    if f.read_exact(&mut header).is_err() {
        return false;
    }
    if &header[..8] != MAGIC {
        return false;
    }
    let version = u32::from_le_bytes(header[8..12].try_into().unwrap());
    if version != VERSION {
        eprintln!("cache: version {version} != {VERSION}, ignoring file");
        return false;
    }

    let mut buf = Vec::new();
    if f.read_to_end(&mut buf).is_err() {
        return true;
    }
    let mut pos = 0usize;
    loop {
        let Some(record) = parse_record(&buf[pos..]) else {
            if pos < buf.len() {
                eprintln!("cache: corrupt record at offset {}, ignoring tail", 12 + pos);
            }
            break;
        };
        let (key, values, consumed) = record;
        map.insert(key, Arc::new(values));
        pos += consumed;
        if pos >= buf.len() {
            break;
        }
    }
    true
}

fn parse_record(buf: &[u8]) -> Option<(String, Vec<f64>, usize)> {
    if buf.len() < 4 {
        return None;
    }
    let key_len = u32::from_le_bytes(buf[..4].try_into().ok()?) as usize;
    if key_len > 4096 {
        return None;
    }
    let mut pos = 4;
    let key_bytes = buf.get(pos..pos + key_len)?;
    pos += key_len;
    let count = u32::from_le_bytes(buf.get(pos..pos + 4)?.try_into().ok()?) as usize;
    if count > (1 << 26) {
        return None;
    }
    pos += 4;
    let val_bytes = buf.get(pos..pos + 8 * count)?;
    pos += 8 * count;
    let stored_sum = u64::from_le_bytes(buf.get(pos..pos + 8)?.try_into().ok()?);
    pos += 8;

    let mut checked = Vec::with_capacity(key_bytes.len() + val_bytes.len());
    checked.extend_from_slice(key_bytes);
    checked.extend_from_slice(val_bytes);
    if fnv1a(&checked) != stored_sum {
        return None;
    }
    let key = String::from_utf8(key_bytes.to_vec()).ok()?;
    let values = val_bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Some((key, values, pos))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_bits() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("z.cache");
        let values = vec![2.404825557695773, -0.0, f64::MIN_POSITIVE, 1e300];
        {
            let cache = Cache::open(&path).unwrap();
            cache.put("disk/w/0/x/y", &values).unwrap();
        }
        let cache = Cache::open(&path).unwrap();
        let got = cache.get("disk/w/0/x/y").unwrap();
        for (a, b) in got.iter().zip(&values) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn truncated_file_tolerated() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("z.cache");
        {
            let cache = Cache::open(&path).unwrap();
            cache.put("a", &[1.0, 2.0]).unwrap();
            cache.put("b", &[3.0]).unwrap();
        }
        // Chop the last 5 bytes: record "b" becomes unreadable.
        let data = std::fs::read(&path).unwrap();
        std::fs::write(&path, &data[..data.len() - 5]).unwrap();
        let cache = Cache::open(&path).unwrap();
        assert!(cache.get("a").is_some());
        assert!(cache.get("b").is_none());
        // And the reopened cache still accepts writes.
        cache.put("c", &[4.0]).unwrap();
    }

    #[test]
    fn garbage_file_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("z.cache");
        std::fs::write(&path, b"not a cache at all").unwrap();
        let cache = Cache::open(&path).unwrap();
        assert!(cache.is_empty());
        cache.put("k", &[1.5]).unwrap();
        drop(cache);
        let cache = Cache::open(&path).unwrap();
        assert_eq!(cache.get("k").unwrap()[0], 1.5);
    }

    #[test]
    fn version_mismatch_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("z.cache");
        let mut bytes = Vec::new();
        bytes.extend_from_slice(MAGIC);
        bytes.extend_from_slice(&99u32.to_le_bytes());
        std::fs::write(&path, &bytes).unwrap();
        let cache = Cache::open(&path).unwrap();
        assert!(cache.is_empty());
    }

    #[test]
    fn counters_track_misses() {
        let cache = Cache::in_memory();
        let v = cache.get_or_compute("k", || Ok(vec![1.0])).unwrap();
        assert_eq!(v[0], 1.0);
        assert_eq!(cache.miss_count(), 1);
        let _ = cache.get_or_compute("k", || panic!("should hit")).unwrap();
        assert_eq!(cache.miss_count(), 1);
        assert_eq!(cache.hit_count(), 1);
    }
}
