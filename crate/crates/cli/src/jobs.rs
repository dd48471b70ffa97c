//! Job files: a JSON object or an array of objects, run on a worker pool.
//!
//! Harness job keys: `alpha`, `alpha_prime` (polynomials), optional `root`,
//! `root_prime`, `depth`, `bits`, `delta`, `L`, and either `witnesses`
//! (`[[k, l, m], ...]`) or `auto` (`{"L", "minB", "mirror"}`).
//!
//! Orbit job keys: `xi` (polynomial, or `{"a0", "quotients"}`), `alpha`
//! (polynomial or `"inf"`), optional `root`, `height`, `mode`, `epsilon`,
//! `window`, `depth`.

use std::path::Path;

use cfspectra::format::parse_word_file;
use cfspectra::{BigRational, CfExpansion, NormMode, SharedBlockWitness};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::cache::{convergents_digest, ExpansionCache};
use crate::cli::HarnessCheck;
use crate::commands::{orbit_config, parse_alpha, HarnessJob, OrbitJob, Output, Table};
use crate::config::{parse_rational, JobConfig, RootChoice};
use crate::inputs::{root_from_value, Number};
use crate::CliError;

const HARNESS_KEYS: &[&str] =
    &["alpha", "alpha_prime", "root", "root_prime", "depth", "bits", "delta", "L", "witnesses", "auto"];
const AUTO_KEYS: &[&str] = &["L", "minB", "mirror"];
const ORBIT_KEYS: &[&str] = &["xi", "alpha", "root", "height", "mode", "epsilon", "window", "depth"];

fn load(path: &str) -> Result<Vec<Map<String, Value>>, CliError> {
    let text = std::fs::read_to_string(Path::new(path)).map_err(|e| CliError::Input(format!("cannot read job file {path}: {e}")))?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{path}: line {}: {e}", e.line())))?;
    let items = match v {
        Value::Object(m) => vec![m],
        Value::Array(a) if !a.is_empty() => a
            .into_iter()
            .enumerate()
            .map(|(i, v)| match v {
                Value::Object(m) => Ok(m),
                _ => Err(CliError::Input(format!("{path}: job {i} is not an object"))),
            })
            .collect::<Result<_, _>>()?,
        _ => return Err(CliError::Input(format!("{path}: expected a job object or a non-empty array of them"))),
    };
    Ok(items)
}

fn check_keys(m: &Map<String, Value>, allowed: &[&str], what: &str) -> Result<(), String> {
    match m.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(format!("unknown {what} key '{k}'")),
        None => Ok(()),
    }
}

fn count(v: &Value, key: &str) -> Result<usize, String> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| format!("'{key}' must be a nonnegative integer"))
}

fn opt_count(m: &Map<String, Value>, key: &str) -> Result<Option<usize>, String> {
    m.get(key).map(|v| count(v, key)).transpose()
}

fn rational(v: &Value, key: &str) -> Result<BigRational, String> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        _ => Err(format!("'{key}' must be a number or a string like \"3/2\"")),
    }
    .map_err(|e| format!("'{key}': {e}"))
}

fn root_choice(m: &Map<String, Value>, key: &str) -> Result<RootChoice, String> {
    match m.get(key) {
        None => Ok(RootChoice::Largest),
        Some(Value::String(s)) => s.parse(),
        Some(v) => count(v, key).map(RootChoice::Index),
    }
}

fn harness_job(m: &Map<String, Value>, check: HarnessCheck, cfg: &JobConfig) -> Result<HarnessJob, String> {
    check_keys(m, HARNESS_KEYS, "harness job")?;
    let poly = |key: &str, root: &str| -> Result<_, String> {
        let v = m.get(key).ok_or_else(|| format!("missing '{key}'"))?;
        root_from_value(v, root_choice(m, root)?).map_err(|e| format!("'{key}': {e}"))
    };
    let mut job = HarnessJob {
        alpha: poly("alpha", "root")?,
        alpha_prime: poly("alpha_prime", "root_prime")?,
        depth: opt_count(m, "depth")?.unwrap_or(cfg.depth),
        witnesses: None,
        l: m.get("L").map(|v| rational(v, "L")).transpose()?.unwrap_or_else(|| cfg.l.clone()),
        min_b: cfg.min_b,
        mirror: cfg.mirror,
        delta: m.get("delta").map(|v| rational(v, "delta")).transpose()?.or_else(|| cfg.delta.clone()),
        bits: opt_count(m, "bits")?.map_or(cfg.bits, |b| b as u64),
        check,
    };
    match (m.get("witnesses"), m.get("auto")) {
        (Some(_), Some(_)) => return Err("give either 'witnesses' or 'auto', not both".into()),
        (Some(w), None) => {
            let list = w.as_array().ok_or("'witnesses' must be an array")?;
            let mut out = Vec::with_capacity(list.len());
            for (i, t) in list.iter().enumerate() {
                let t = t.as_array().filter(|t| t.len() == 3).ok_or_else(|| format!("witness {i} must be [k, l, m]"))?;
                let [k, l, mm] = [&t[0], &t[1], &t[2]].map(|x| count(x, "witness"));
                out.push(SharedBlockWitness::new(k?, l?, mm?, cfg.mirror));
            }
            job.witnesses = Some(out);
        }
        (None, Some(Value::Object(a))) => {
            check_keys(a, AUTO_KEYS, "auto")?;
            if let Some(v) = a.get("L") {
                job.l = rational(v, "L")?;
            }
            if let Some(b) = opt_count(a, "minB")? {
                job.min_b = b.max(1);
            }
            if let Some(v) = a.get("mirror") {
                job.mirror = v.as_bool().ok_or("'mirror' must be a boolean")?;
            }
        }
        (None, Some(_)) => return Err("'auto' must be an object".into()),
        (None, None) => {
            if !cfg.witnesses.is_empty() {
                job.witnesses = Some(cfg.witnesses.iter().map(|&[k, l, mm]| SharedBlockWitness::new(k, l, mm, cfg.mirror)).collect());
            }
        }
    }
    if job.depth == 0 {
        return Err("'depth' must be positive".into());
    }
    Ok(job)
}

fn inline_word(v: &Value, depth: usize) -> Result<Number, String> {
    let full = parse_word_file(&v.to_string()).map_err(|e| format!("'xi': {e}"))?;
    let terminated = full.terminated() && full.len() <= depth;
    let quotients = full.quotients().iter().take(depth).cloned().collect();
    let cf = CfExpansion::from_word(full.a0().clone(), quotients, terminated).map_err(|e| e.to_string())?;
    let provenance = json!({ "word": "inline", "quotients": cf.len(), "convergents_digest": convergents_digest(&cf) });
    Ok(Number { cf, root: None, provenance })
}

fn orbit_job(m: &Map<String, Value>, cfg: &JobConfig, cache: &ExpansionCache) -> Result<OrbitJob, String> {
    check_keys(m, ORBIT_KEYS, "orbit job")?;
    let depth = opt_count(m, "depth")?.unwrap_or(cfg.depth);
    let xi = match m.get("xi").ok_or("missing 'xi'")? {
        v @ Value::Object(_) => inline_word(v, depth)?,
        v => {
            let root = root_from_value(v, root_choice(m, "root")?).map_err(|e| format!("'xi': {e}"))?;
            Number::from_root(root, depth, cache).map_err(|e| e.to_string())?
        }
    };
    let alpha = match m.get("alpha") {
        None => None,
        Some(Value::String(s)) if s.trim() == "inf" => None,
        Some(Value::String(s)) => parse_alpha(s).map_err(|e| format!("'alpha': {e}"))?,
        Some(v) => Some(root_from_value(v, RootChoice::Largest).map_err(|e| format!("'alpha': {e}"))?),
    };
    let mut config = orbit_config(cfg);
    if let Some(h) = opt_count(m, "height")? {
        if h == 0 {
            return Err("'height' must be positive".into());
        }
        config.height = h as u64;
    }
    if let Some(w) = opt_count(m, "window")? {
        config.translate_window = Some(w as u64);
    }
    if let Some(v) = m.get("epsilon") {
        config.epsilon = rational(v, "epsilon")?;
    }
    match m.get("mode").map(|v| v.as_str()) {
        None => {}
        Some(Some("classic")) => config.mode = NormMode::Classic,
        Some(Some("quadratic")) => config.mode = NormMode::Quadratic,
        Some(_) => return Err("'mode' must be \"classic\" or \"quadratic\"".into()),
    }
    if config.mode == NormMode::Quadratic && alpha.as_ref().is_none_or(|r| r.number.degree() != 2) {
        return Err("quadratic mode needs a quadratic 'alpha'".into());
    }
    Ok(OrbitJob { xi, alpha, config })
}

fn pool(cfg: &JobConfig) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Input(format!("worker pool: {e}")))
}

/// Merges per-job outputs; rows gain a leading `job` column.
fn merge(outs: Vec<Output>) -> Output {
    let mut table = Table::default();
    let mut results = Vec::with_capacity(outs.len());
    let mut provenance = Vec::with_capacity(outs.len());
    let mut undecided = false;
    for (i, o) in outs.into_iter().enumerate() {
        if table.header.is_empty() {
            table.header = std::iter::once("job".to_string()).chain(o.table.header.iter().cloned()).collect();
        }
        table.rows.extend(o.table.rows.into_iter().map(|r| std::iter::once(i.to_string()).chain(r).collect()));
        results.push(json!({ "job": i, "results": o.results }));
        provenance.push(o.provenance);
        undecided |= o.undecided;
    }
    Output { results: Value::Array(results), provenance: Value::Array(provenance), table, undecided }
}

fn run_all<J: Sync>(
    jobs: Vec<J>,
    cfg: &JobConfig,
    f: impl Fn(&J) -> Result<Output, CliError> + Sync,
) -> Result<Output, CliError> {
    let outs: Vec<Result<Output, CliError>> = pool(cfg)?.install(|| jobs.par_iter().map(&f).collect());
    let outs = outs
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            r.map_err(|e| match e {
                CliError::Input(s) => CliError::Input(format!("job {i}: {s}")),
                CliError::Undecided(s) => CliError::Undecided(format!("job {i}: {s}")),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(merge(outs))
}

pub fn run_harness_jobs(path: &str, check: HarnessCheck, cfg: &JobConfig, cache: &ExpansionCache) -> Result<Output, CliError> {
    let jobs = load(path)?
        .iter()
        .enumerate()
        .map(|(i, m)| harness_job(m, check, cfg).map_err(|e| CliError::Input(format!("{path}: job {i}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    run_all(jobs, cfg, |j| j.run(cache))
}

pub fn run_orbit_jobs(path: &str, cfg: &JobConfig, cache: &ExpansionCache) -> Result<Output, CliError> {
    let jobs = load(path)?
        .iter()
        .enumerate()
        .map(|(i, m)| orbit_job(m, cfg, cache).map_err(|e| CliError::Input(format!("{path}: job {i}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    run_all(jobs, cfg, OrbitJob::run)
}
