//! On-disk cache of class group data, one text file per discriminant:
//!
//! ```text
//! D <int>
//! h <int>
//! form <a> <b> <c>        (h lines)
//! table
//! <h indices>             (h lines)
//! chars
//! <h re:im pairs>         (h lines)
//! ok
//! ```
//!
//! Files are written to a temporary name and renamed into place. A file that
//! fails to parse or disagrees with the recomputed characters is rebuilt.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use super::group::{class_group, ClassGroupData};
use super::{Discriminant, QuadraticForm};
use crate::error::{Error, Result};

/// How [`load_or_build`] obtained its result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheOutcome {
    Hit,
    Built,
    /// The existing file was unreadable or inconsistent and was replaced.
    Rebuilt,
}

/// Cache file of one discriminant inside `dir`.
pub fn cache_path(dir: &Path, d: Discriminant) -> PathBuf {
    dir.join(format!("classgroup_{}.txt", d.value()))
}

fn render(g: &ClassGroupData) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "D {}", g.disc.value());
    let _ = writeln!(out, "h {}", g.h);
    for f in &g.reduced_forms {
        let _ = writeln!(out, "form {} {} {}", f.a, f.b, f.c);
    }
    out.push_str("table\n");
    for row in &g.composition_table {
        let line: Vec<String> = row.iter().map(|k| k.to_string()).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out.push_str("chars\n");
    for row in &g.characters {
        let line: Vec<String> = row.iter().map(|v| format!("{:e}:{:e}", v.re, v.im)).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out.push_str("ok\n");
    out
}

/// Writes the record atomically (temporary file plus rename).
pub fn write_cache_file(path: &Path, g: &ClassGroupData) -> Result<()> {
    static COUNTER: AtomicU64 = AtomicU64::new(0);
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let tmp = path.with_extension(format!(
        "tmp.{}.{}",
        std::process::id(),
        COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    fs::write(&tmp, render(g)).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

fn parse_err(path: &Path, what: &str) -> Error {
    Error::Parse(format!("{}: {what}", path.display()))
}

/// Reads and validates a cache record.
pub fn read_cache_file(path: &Path) -> Result<ClassGroupData> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines();
    let mut field = |key: &str| -> Result<i64> {
        let line = lines.next().ok_or_else(|| parse_err(path, "truncated header"))?;
        let rest = line.strip_prefix(key).and_then(|r| r.strip_prefix(' ')).ok_or_else(|| parse_err(path, key))?;
        rest.trim().parse().map_err(|_| parse_err(path, key))
    };
    let dv = field("D")?;
    let h = field("h")?;
    if h <= 0 {
        return Err(parse_err(path, "h"));
    }
    let h = h as usize;
    let d = Discriminant::fundamental(dv).map_err(|_| parse_err(path, "discriminant"))?;
    let mut forms = Vec::with_capacity(h);
    for _ in 0..h {
        let line = lines.next().ok_or_else(|| parse_err(path, "forms"))?;
        let nums: Vec<i64> = line
            .strip_prefix("form ")
            .ok_or_else(|| parse_err(path, "form line"))?
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| parse_err(path, "form entry")))
            .collect::<Result<_>>()?;
        if nums.len() != 3 {
            return Err(parse_err(path, "form arity"));
        }
        let f = QuadraticForm::new(nums[0], nums[1], nums[2]);
        if f.disc() != dv {
            return Err(parse_err(path, "form discriminant"));
        }
        forms.push(f);
    }
    if lines.next() != Some("table") {
        return Err(parse_err(path, "table marker"));
    }
    let mut table = Vec::with_capacity(h);
    for _ in 0..h {
        let line = lines.next().ok_or_else(|| parse_err(path, "table"))?;
        let row: Vec<usize> =
            line.split_whitespace().map(|x| x.parse().map_err(|_| parse_err(path, "table entry"))).collect::<Result<_>>()?;
        table.push(row);
    }
    if lines.next() != Some("chars") {
        return Err(parse_err(path, "chars marker"));
    }
    let mut chars = Vec::with_capacity(h);
    for _ in 0..h {
        let line = lines.next().ok_or_else(|| parse_err(path, "chars"))?;
        let row: Vec<(f64, f64)> = line
            .split_whitespace()
            .map(|pair| {
                let (re, im) = pair.split_once(':').ok_or_else(|| parse_err(path, "char pair"))?;
                Ok((re.parse().map_err(|_| parse_err(path, "char re"))?, im.parse().map_err(|_| parse_err(path, "char im"))?))
            })
            .collect::<Result<_>>()?;
        chars.push(row);
    }
    if lines.next() != Some("ok") {
        return Err(parse_err(path, "missing ok sentinel"));
    }
    let g = ClassGroupData::from_parts(d, forms, table).map_err(|e| parse_err(path, &e.to_string()))?;
    let consistent = chars.len() == g.h
        && chars.iter().zip(&g.characters).all(|(a, b)| {
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x.0 - y.re).abs() <= 1e-15 && (x.1 - y.im).abs() <= 1e-15)
        });
    if !consistent {
        return Err(parse_err(path, "characters disagree with the composition table"));
    }
    Ok(g)
}

/// Returns the class group of `d`, reading the cache in `dir` when possible
/// and (re)writing it otherwise.
pub fn load_or_build(d: Discriminant, dir: &Path) -> Result<(ClassGroupData, CacheOutcome)> {
    let path = cache_path(dir, d);
    let existed = path.exists();
    if existed {
        if let Ok(g) = read_cache_file(&path) {
            if g.disc == d {
                return Ok((g, CacheOutcome::Hit));
            }
        }
    }
    let g = class_group(d)?;
    write_cache_file(&path, &g)?;
    Ok((g, if existed { CacheOutcome::Rebuilt } else { CacheOutcome::Built }))
}
