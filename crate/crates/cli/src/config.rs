//! Resolved job configuration: flags over config file over defaults.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use cfspectra::{BigInt, BigRational, NormMode};
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::cli::Opts;
use crate::CliError;

pub const DEFAULT_DEPTH: usize = 200;
pub const DEFAULT_BITS: u64 = 256;
pub const DEFAULT_HEIGHT: u64 = 100;
pub const DEFAULT_MAX_N: usize = 20;

const KEYS: &[&str] = &[
    "poly", "root", "word", "poly2", "root2", "word2", "depth", "bits", "L", "delta", "min_b", "mirror", "witness",
    "height", "epsilon", "alpha", "mode", "window", "k", "max_n", "workers", "format", "output", "job",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootChoice {
    Largest,
    Index(usize),
}

impl Serialize for RootChoice {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            RootChoice::Largest => s.serialize_str("largest"),
            RootChoice::Index(i) => s.serialize_u64(*i as u64),
        }
    }
}

impl FromStr for RootChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "largest" => Ok(RootChoice::Largest),
            t => t.parse().map(RootChoice::Index).map_err(|_| format!("root must be an index or 'largest', got '{t}'")),
        }
    }
}

fn ser_rational<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_opt_rational<S: Serializer>(r: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct JobConfig {
    pub command: String,
    pub poly: Option<String>,
    pub root: RootChoice,
    pub word: Option<String>,
    pub poly2: Option<String>,
    pub root2: RootChoice,
    pub word2: Option<String>,
    pub depth: usize,
    pub bits: u64,
    #[serde(rename = "L", serialize_with = "ser_rational")]
    pub l: BigRational,
    #[serde(serialize_with = "ser_opt_rational")]
    pub delta: Option<BigRational>,
    pub min_b: usize,
    pub mirror: bool,
    pub witnesses: Vec<[usize; 3]>,
    pub height: u64,
    #[serde(serialize_with = "ser_rational")]
    pub epsilon: BigRational,
    pub alpha: String,
    pub mode: NormMode,
    pub window: Option<u64>,
    pub k: usize,
    pub max_n: usize,
    pub workers: Option<usize>,
    pub job: Option<String>,
    pub output: Option<String>,
    pub format: Format,
}

/// `"3"`, `"-2/5"` or `"0.125"`, exactly.
pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    let t = text.trim();
    let bad = || format!("invalid rational '{t}'");
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(format!("zero denominator in '{t}'"));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let int: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            s => s.parse().map_err(|_| bad())?,
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac: BigInt = frac.parse().map_err(|_| bad())?;
        let v = BigRational::new(int * &scale + frac, scale);
        return Ok(if neg { -v } else { v });
    }
    t.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| bad())
}

fn parse_witness(text: &str) -> Result<[usize; 3], String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [k, l, m] => {
            let p = |s: &str| s.parse::<usize>().map_err(|_| format!("witness '{text}': '{s}' is not a count"));
            Ok([p(k)?, p(l)?, p(m)?])
        }
        _ => Err(format!("witness '{text}' must be k,l,m")),
    }
}

/// `key = value` lines; `#` starts a comment.
struct ConfigFile {
    entries: BTreeMap<String, (String, usize)>,
    path: String,
}

impl ConfigFile {
    fn empty() -> Self {
        ConfigFile { entries: BTreeMap::new(), path: String::new() }
    }

    fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        let display = path.display().to_string();
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Input(format!("{display}:{}: expected key=value", i + 1)))?;
            let key = key.trim().replace('-', "_");
            if !KEYS.contains(&key.as_str()) {
                return Err(CliError::Input(format!("{display}:{}: unknown key '{}'", i + 1, key)));
            }
            if entries.insert(key.clone(), (value.trim().to_string(), i + 1)).is_some() {
                return Err(CliError::Input(format!("{display}:{}: duplicate key '{key}'", i + 1)));
            }
        }
        Ok(ConfigFile { entries, path: display })
    }

    fn get<T>(&self, key: &str, parse: impl Fn(&str) -> Result<T, String>) -> Result<Option<T>, CliError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((v, line)) => parse(v).map(Some).map_err(|e| CliError::Input(format!("{}:{line}: {key}: {e}", self.path))),
        }
    }

    fn string(&self, key: &str) -> Option<String> {
        self.entries.get(key).map(|(v, _)| v.clone())
    }
}

fn from_str<T: FromStr>(s: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.parse::<T>().map_err(|e| e.to_string())
}

fn flag<T>(v: Option<&str>, key: &str, parse: impl Fn(&str) -> Result<T, String>) -> Result<Option<T>, CliError> {
    v.map(|s| parse(s).map_err(|e| CliError::Input(format!("--{key}: {e}")))).transpose()
}

fn positive<T: PartialOrd + Default + std::fmt::Display>(key: &str, v: T) -> Result<T, CliError> {
    if v > T::default() {
        Ok(v)
    } else {
        Err(CliError::Input(format!("{key} must be positive, got {v}")))
    }
}

impl JobConfig {
    pub fn resolve(command: String, opts: &Opts) -> Result<JobConfig, CliError> {
        let file = match &opts.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::empty(),
        };
        let path_str = |p: &Option<std::path::PathBuf>| p.as_ref().map(|p| p.display().to_string());
        let root = match flag(opts.root.as_deref(), "root", from_str::<RootChoice>)? {
            Some(r) => r,
            None => file.get("root", from_str::<RootChoice>)?.unwrap_or(RootChoice::Largest),
        };
        let root2 = match flag(opts.root2.as_deref(), "root2", from_str::<RootChoice>)? {
            Some(r) => r,
            None => file.get("root2", from_str::<RootChoice>)?.unwrap_or(RootChoice::Largest),
        };
        let rational = |flag_v: &Option<String>, key: &str| -> Result<Option<BigRational>, CliError> {
            match flag(flag_v.as_deref(), key, parse_rational)? {
                Some(r) => Ok(Some(r)),
                None => file.get(key, parse_rational),
            }
        };
        let l = rational(&opts.l, "L")?.unwrap_or_else(|| BigRational::from_integer(2.into()));
        if !l.is_positive() {
            return Err(CliError::Input(format!("L must be positive, got {l}")));
        }
        let delta = rational(&opts.delta, "delta")?;
        if delta.as_ref().is_some_and(|d| d.is_negative()) {
            return Err(CliError::Input("delta must be nonnegative".into()));
        }
        let epsilon = rational(&opts.epsilon, "epsilon")?.unwrap_or_else(|| BigRational::new(1.into(), 10.into()));
        if !epsilon.is_positive() {
            return Err(CliError::Input(format!("epsilon must be positive, got {epsilon}")));
        }
        let mode = match opts.mode.clone().or_else(|| file.string("mode")).as_deref() {
            None | Some("classic") => NormMode::Classic,
            Some("quadratic") => NormMode::Quadratic,
            Some(m) => return Err(CliError::Input(format!("mode must be classic or quadratic, got '{m}'"))),
        };
        let format = match opts.format.clone().or_else(|| file.string("format")).as_deref() {
            None | Some("json") => Format::Json,
            Some("csv") => Format::Csv,
            Some(f) => return Err(CliError::Input(format!("format must be json or csv, got '{f}'"))),
        };
        let mirror = opts.mirror || file.get("mirror", from_str::<bool>)?.unwrap_or(false);
        let mut witnesses = opts
            .witness
            .iter()
            .map(|w| parse_witness(w).map_err(|e| CliError::Input(format!("--witness: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if witnesses.is_empty() {
            let parse_all = |s: &str| s.split(';').filter(|w| !w.trim().is_empty()).map(parse_witness).collect();
            witnesses = file.get("witness", parse_all)?.unwrap_or_default();
        }
        let num = |v: Option<usize>, key: &str| -> Result<Option<usize>, CliError> {
            Ok(v.or(file.get(key, from_str::<usize>)?))
        };
        let num64 = |v: Option<u64>, key: &str| -> Result<Option<u64>, CliError> {
            Ok(v.or(file.get(key, from_str::<u64>)?))
        };
        let depth = positive("depth", num(opts.depth, "depth")?.unwrap_or(DEFAULT_DEPTH))?;
        let bits = num64(opts.bits, "bits")?.unwrap_or(DEFAULT_BITS);
        if bits < 32 {
            return Err(CliError::Input(format!("bits must be at least 32, got {bits}")));
        }
        let workers = num(opts.workers, "workers")?.map(|w| positive("workers", w)).transpose()?;
        Ok(JobConfig {
            command,
            poly: opts.poly.clone().or_else(|| file.string("poly")),
            root,
            word: path_str(&opts.word).or_else(|| file.string("word")),
            poly2: opts.poly2.clone().or_else(|| file.string("poly2")),
            root2,
            word2: path_str(&opts.word2).or_else(|| file.string("word2")),
            depth,
            bits,
            l,
            delta,
            min_b: positive("min_b", num(opts.min_b, "min_b")?.unwrap_or(1))?,
            mirror,
            witnesses,
            height: positive("height", num64(opts.height, "height")?.unwrap_or(DEFAULT_HEIGHT))?,
            epsilon,
            alpha: opts.alpha.clone().or_else(|| file.string("alpha")).unwrap_or_else(|| "inf".into()),
            mode,
            window: num64(opts.window, "window")?,
            k: positive("k", num(opts.k, "k")?.unwrap_or(1))?,
            max_n: positive("max_n", num(opts.max_n, "max_n")?.unwrap_or(DEFAULT_MAX_N))?,
            workers,
            job: path_str(&opts.job).or_else(|| file.string("job")),
            output: path_str(&opts.output).or_else(|| file.string("output")),
            format,
        })
    }
}
