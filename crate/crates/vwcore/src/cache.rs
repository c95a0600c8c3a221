//! Persistent cache of substituted Nekrasov series in a canonical text format.
//!
//! Entries are keyed by a SHA-256 digest of `(r, N, substitution, convention
//! version)`. A file that fails to parse is a miss; writes go through a
//! temporary file and a rename so concurrent readers never see partial data.

use crate::algebra::{intpoly::IntPoly, CycloFrac, Rat, SubstitutionSpec};
use crate::error::Result;
use crate::nekrasov::{NekrasovSeries, USeries};
use num_bigint::BigInt;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::RwLock;

/// Bumped whenever a sign, window or normalization convention changes.
pub const CONVENTION_VERSION: u32 = 1;

const HEADER: &str = "vwframe-series v1";

pub fn digest(r: usize, n: usize, spec: &SubstitutionSpec) -> String {
    let mut h = Sha256::new();
    h.update(format!("r={};n={};spec={};conv={}", r, n, serde_json::to_string(spec).unwrap(), CONVENTION_VERSION));
    hex::encode(h.finalize())
}

fn join<T: ToString>(v: impl IntoIterator<Item = T>) -> String {
    v.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn encode_cyclofrac(c: &CycloFrac) -> String {
    let r = c.reduced();
    let (lo, num, den, phi) = r.parts();
    format!("{}|{}|{}|{}", lo, join(num.iter()), den, join(phi.iter().map(|(d, e)| format!("{}:{}", d, e))))
}

fn decode_cyclofrac(s: &str) -> Option<CycloFrac> {
    let f: Vec<&str> = s.split('|').collect();
    if f.len() != 4 {
        return None;
    }
    let lo: i64 = f[0].parse().ok()?;
    let num: IntPoly = if f[1].is_empty() { Vec::new() } else { f[1].split(',').map(|x| x.parse::<BigInt>().ok()).collect::<Option<_>>()? };
    let den: BigInt = f[2].parse().ok()?;
    let phi: Vec<(u32, u32)> = if f[3].is_empty() {
        Vec::new()
    } else {
        f[3].split(',')
            .map(|p| {
                let (d, e) = p.split_once(':')?;
                Some((d.parse().ok()?, e.parse().ok()?))
            })
            .collect::<Option<_>>()?
    };
    if den == BigInt::from(0) || phi.iter().any(|&(d, _)| d == 0) {
        return None;
    }
    Some(CycloFrac::from_parts(lo, num, den, phi))
}

/// Lossless text form of a substituted series.
pub fn encode(r: usize, n: usize, spec: &SubstitutionSpec, s: &NekrasovSeries) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    out.push_str(&format!("key {}\n", digest(r, n, spec)));
    out.push_str(&format!("order {}\n", s.order().map_or("exact".to_string(), |o| o.to_string())));
    for (e, c) in s.terms() {
        let (lo, hi) = c.window();
        out.push_str(&format!("term {} {} {}\n", e, lo, hi));
        for (k, v) in c.stored() {
            out.push_str(&format!("c {} {}\n", k, encode_cyclofrac(v)));
        }
    }
    out.push_str("end\n");
    out
}

pub fn decode(text: &str, expected_key: &str) -> Option<NekrasovSeries> {
    let mut lines = text.lines();
    if lines.next()? != HEADER {
        return None;
    }
    if lines.next()?.strip_prefix("key ")? != expected_key {
        return None;
    }
    let order = lines.next()?.strip_prefix("order ")?;
    let order: Option<Rat> = if order == "exact" { None } else { Some(order.parse().ok()?) };
    let mut out = NekrasovSeries::new(order);
    let mut current: Option<(Rat, i64, i64, Vec<CycloFrac>)> = None;
    let flush = |cur: Option<(Rat, i64, i64, Vec<CycloFrac>)>, out: &mut NekrasovSeries| {
        if let Some((e, lo, hi, c)) = cur {
            out.add_term(e, USeries::new(lo, hi, c));
        }
    };
    let mut ended = false;
    for line in lines {
        if line == "end" {
            ended = true;
            break;
        }
        let mut it = line.splitn(2, ' ');
        match (it.next()?, it.next()?) {
            ("term", rest) => {
                flush(current.take(), &mut out);
                let f: Vec<&str> = rest.split(' ').collect();
                if f.len() != 3 {
                    return None;
                }
                current = Some((f[0].parse().ok()?, f[1].parse().ok()?, f[2].parse().ok()?, Vec::new()));
            }
            ("c", rest) => {
                let (k, v) = rest.split_once(' ')?;
                let k: i64 = k.parse().ok()?;
                let cur = current.as_mut()?;
                if k != cur.1 + cur.3.len() as i64 {
                    return None;
                }
                cur.3.push(decode_cyclofrac(v)?);
            }
            _ => return None,
        }
    }
    if !ended {
        return None;
    }
    flush(current, &mut out);
    Some(out)
}

#[derive(Debug, Default)]
pub struct CacheStats {
    pub hits: AtomicU64,
    pub misses: AtomicU64,
    pub corrupt: AtomicU64,
    pub writes: AtomicU64,
}

impl CacheStats {
    pub fn snapshot(&self) -> (u64, u64, u64, u64) {
        (
            self.hits.load(Ordering::Relaxed),
            self.misses.load(Ordering::Relaxed),
            self.corrupt.load(Ordering::Relaxed),
            self.writes.load(Ordering::Relaxed),
        )
    }
}

#[derive(Debug)]
pub struct Cache {
    dir: PathBuf,
    pub stats: CacheStats,
}

impl Cache {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        std::fs::create_dir_all(&dir)?;
        Ok(Cache { dir, stats: CacheStats::default() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.txt", key))
    }

    pub fn get(&self, r: usize, n: usize, spec: &SubstitutionSpec) -> Option<NekrasovSeries> {
        let key = digest(r, n, spec);
        let text = match std::fs::read_to_string(self.path(&key)) {
            Ok(t) => t,
            Err(_) => {
                self.stats.misses.fetch_add(1, Ordering::Relaxed);
                return None;
            }
        };
        match decode(&text, &key) {
            Some(s) => {
                self.stats.hits.fetch_add(1, Ordering::Relaxed);
                Some(s)
            }
            None => {
                self.stats.corrupt.fetch_add(1, Ordering::Relaxed);
                self.stats.misses.fetch_add(1, Ordering::Relaxed);
                None
            }
        }
    }

    pub fn put(&self, r: usize, n: usize, spec: &SubstitutionSpec, s: &NekrasovSeries) -> Result<()> {
        let key = digest(r, n, spec);
        let tmp = self.dir.join(format!(".{}.{}.tmp", key, std::process::id()));
        std::fs::write(&tmp, encode(r, n, spec, s))?;
        std::fs::rename(&tmp, self.path(&key))?;
        self.stats.writes.fetch_add(1, Ordering::Relaxed);
        Ok(())
    }
}

static GLOBAL: RwLock<Option<Cache>> = RwLock::new(None);

/// Installs (or removes) the process-wide cache used by the series memo.
pub fn configure(dir: Option<&Path>) -> Result<()> {
    let c = match dir {
        Some(d) => Some(Cache::open(d)?),
        None => None,
    };
    *GLOBAL.write().unwrap() = c;
    Ok(())
}

pub fn global_stats() -> Option<(u64, u64, u64, u64)> {
    GLOBAL.read().unwrap().as_ref().map(|c| c.stats.snapshot())
}

pub(crate) fn global_get(r: usize, n: usize, spec: &SubstitutionSpec) -> Option<NekrasovSeries> {
    GLOBAL.read().unwrap().as_ref()?.get(r, n, spec)
}

pub(crate) fn global_put(r: usize, n: usize, spec: &SubstitutionSpec, s: &NekrasovSeries) {
    let failed = {
        let g = GLOBAL.read().unwrap();
        match g.as_ref() {
            Some(c) => c.put(r, n, spec, s).err(),
            None => None,
        }
    };
    if let Some(e) = failed {
        eprintln!("warning: cache write failed ({}); continuing without cache", e);
        *GLOBAL.write().unwrap() = None;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FramingImage;
    use crate::nekrasov::nekrasov_series;

    fn spec() -> SubstitutionSpec {
        SubstitutionSpec::raw([1, -3], vec![FramingImage { s: 0, y: 0 }, FramingImage { s: 1, y: -2 }])
    }

    #[test]
    fn round_trip() {
        let s = nekrasov_series(2, 2, &spec()).unwrap();
        let key = digest(2, 2, &spec());
        let back = decode(&encode(2, 2, &spec(), &s), &key).unwrap();
        assert_eq!(back.len(), s.len());
        for ((e1, c1), (e2, c2)) in s.terms().zip(back.terms()) {
            assert_eq!(e1, e2);
            assert_eq!(c1.window(), c2.window());
            assert!(c1.agrees_with(c2).is_none());
        }
    }

    #[test]
    fn digest_depends_on_spec() {
        let mut other = spec();
        other.alpha = [1, -4];
        assert_ne!(digest(2, 2, &spec()), digest(2, 2, &other));
        assert_ne!(digest(2, 2, &spec()), digest(2, 3, &spec()));
    }

    #[test]
    fn corrupt_entry_is_miss() {
        let dir = std::env::temp_dir().join(format!("vwframe-cache-test-{}", std::process::id()));
        let c = Cache::open(&dir).unwrap();
        let s = nekrasov_series(2, 1, &spec()).unwrap();
        c.put(2, 1, &spec(), &s).unwrap();
        assert!(c.get(2, 1, &spec()).is_some());
        std::fs::write(c.path(&digest(2, 1, &spec())), "vwframe-series v1\ngarbage").unwrap();
        assert!(c.get(2, 1, &spec()).is_none());
        assert_eq!(c.stats.snapshot().2, 1);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
