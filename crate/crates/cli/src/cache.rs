//! On-disk cache of quotient words keyed by canonical polynomial, root and depth.
//!
//! A hit is only used after `CfExpansion::certify_prefix` has re-proved the
//! stored word against the number, so a stale or edited file can cost time
//! but never change a result.

use std::path::{Path, PathBuf};

use cfspectra::json::{int_value, to_bigint};
use cfspectra::{expand, AlgebraicNumber, CfExpansion, IntPolynomial};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "CFSPECTRA_CACHE_DIR";

/// sha256 over `n p_n q_n` lines of every convergent.
pub fn convergents_digest(cf: &CfExpansion) -> String {
    let c = cf.convergents();
    let mut h = Sha256::new();
    for (n, (p, q)) in c.pairs().iter().enumerate() {
        h.update(format!("{n} {p} {q}\n"));
    }
    hex::encode(h.finalize())
}

pub struct ExpansionCache {
    dir: Option<PathBuf>,
}

fn default_dir() -> Option<PathBuf> {
    if let Some(d) = std::env::var_os(CACHE_ENV) {
        return Some(PathBuf::from(d));
    }
    if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
        return Some(PathBuf::from(d).join("cfspectra"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("cfspectra"))
}

impl ExpansionCache {
    pub fn new(enabled: bool) -> Self {
        ExpansionCache { dir: if enabled { default_dir() } else { None } }
    }

    pub fn at(dir: &Path) -> Self {
        ExpansionCache { dir: Some(dir.to_path_buf()) }
    }

    pub fn disabled() -> Self {
        ExpansionCache { dir: None }
    }

    fn path_for(&self, key_poly: &IntPolynomial, root: usize, depth: usize) -> Option<PathBuf> {
        let dir = self.dir.as_ref()?;
        let key = format!("{};{root};{depth}", serde_json::to_string(key_poly).ok()?);
        Some(dir.join(format!("{}.json", hex::encode(Sha256::digest(key.as_bytes())))))
    }

    /// The first `depth` quotients of `x`, from disk when possible.
    pub fn expand(
        &self,
        x: &AlgebraicNumber,
        key_poly: &IntPolynomial,
        root: usize,
        depth: usize,
    ) -> cfspectra::Result<CfExpansion> {
        if x.is_rational() {
            return expand(x, depth);
        }
        let Some(path) = self.path_for(key_poly, root, depth) else {
            return expand(x, depth);
        };
        if let Some(cf) = load(&path, x, key_poly, root, depth) {
            return Ok(cf);
        }
        let cf = expand(x, depth)?;
        store(&path, &cf, key_poly, root, depth);
        Ok(cf)
    }
}

fn load(path: &Path, x: &AlgebraicNumber, key_poly: &IntPolynomial, root: usize, depth: usize) -> Option<CfExpansion> {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).ok()?).ok()?;
    if v["polynomial"] != serde_json::to_value(key_poly).ok()? || v["root_index"] != json!(root) || v["depth"] != json!(depth) {
        return None;
    }
    let a0 = to_bigint(&v["a0"])?;
    let quotients = v["quotients"].as_array()?.iter().map(to_bigint).collect::<Option<Vec<_>>>()?;
    if quotients.len() != depth {
        return None;
    }
    let cf = CfExpansion::certify_prefix(x, a0, quotients).ok()?;
    (v["convergents_digest"].as_str()? == convergents_digest(&cf)).then_some(cf)
}

/// Best effort: a failed write only means a later miss.
fn store(path: &Path, cf: &CfExpansion, key_poly: &IntPolynomial, root: usize, depth: usize) {
    let entry = json!({
        "polynomial": key_poly,
        "root_index": root,
        "depth": depth,
        "a0": int_value(cf.a0()),
        "quotients": cf.quotients().iter().map(int_value).collect::<Vec<_>>(),
        "convergents_digest": convergents_digest(cf),
    });
    let Some(dir) = path.parent() else { return };
    if std::fs::create_dir_all(dir).is_err() {
        return;
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    if std::fs::write(&tmp, entry.to_string()).is_ok() && std::fs::rename(&tmp, path).is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
}
