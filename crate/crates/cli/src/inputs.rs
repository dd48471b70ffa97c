//! Turning `--poly`/`--word` style inputs into numbers and expansions.

use std::path::Path;

use cfspectra::algebraic::isolate_real_roots;
use cfspectra::format::{parse_polynomial, parse_word_file, poly_from_value};
use cfspectra::{AlgebraicNumber, CfExpansion, IntPolynomial};
use serde_json::{json, Value};

use crate::cache::{convergents_digest, ExpansionCache};
use crate::config::RootChoice;
use crate::CliError;

const INTERVAL_DIGITS: u32 = 25;

/// A chosen real root with the data that identifies it.
#[derive(Clone, Debug)]
pub struct Root {
    pub number: AlgebraicNumber,
    /// Primitive squarefree form, positive leading coefficient.
    pub key_poly: IntPolynomial,
    pub index: usize,
}

impl Root {
    pub fn provenance(&self) -> Value {
        let (lo, hi) = self.number.enclosure(96).to_decimal_pair(INTERVAL_DIGITS);
        json!({
            "polynomial": self.key_poly,
            "root_index": self.index,
            "degree": self.number.degree(),
            "isolating_interval": [lo, hi],
        })
    }
}

pub fn select_root(p: &IntPolynomial, choice: RootChoice) -> Result<Root, CliError> {
    let roots = isolate_real_roots(p)?;
    if roots.is_empty() {
        return Err(CliError::Input(format!("polynomial {p} has no real roots")));
    }
    let index = match choice {
        RootChoice::Largest => roots.len() - 1,
        RootChoice::Index(i) if i < roots.len() => i,
        RootChoice::Index(i) => {
            return Err(CliError::Input(format!("root index {i} out of range: {p} has {} real roots", roots.len())))
        }
    };
    let number = roots.into_iter().nth(index).unwrap();
    Ok(Root { number, key_poly: p.squarefree_part().canonical(), index })
}

pub fn root_from_text(text: &str, choice: RootChoice) -> Result<Root, CliError> {
    let p = parse_polynomial(text).map_err(|e| CliError::Input(format!("polynomial '{text}': {e}")))?;
    select_root(&p, choice)
}

pub fn root_from_value(v: &Value, choice: RootChoice) -> Result<Root, CliError> {
    let p = poly_from_value(v)?;
    if p.degree() == 0 {
        return Err(CliError::Input(format!("polynomial {v} is constant")));
    }
    select_root(&p, choice)
}

pub fn read_word(path: &Path) -> Result<CfExpansion, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_word_file(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// An expansion together with its provenance record.
#[derive(Clone, Debug)]
pub struct Number {
    pub cf: CfExpansion,
    pub root: Option<Root>,
    pub provenance: Value,
}

impl Number {
    pub fn from_root(root: Root, depth: usize, cache: &ExpansionCache) -> Result<Number, CliError> {
        let cf = cache.expand(&root.number, &root.key_poly, root.index, depth)?;
        let mut provenance = root.provenance();
        provenance["quotients"] = json!(cf.len());
        provenance["convergents_digest"] = json!(convergents_digest(&cf));
        Ok(Number { cf, root: Some(root), provenance })
    }

    /// A word file, cut to `depth` quotients.
    pub fn from_word_file(path: &Path, depth: usize) -> Result<Number, CliError> {
        let full = read_word(path)?;
        let terminated = full.terminated() && full.len() <= depth;
        let quotients = full.quotients().iter().take(depth).cloned().collect();
        let cf = CfExpansion::from_word(full.a0().clone(), quotients, terminated)?;
        let provenance = json!({
            "word_file": path.display().to_string(),
            "quotients": cf.len(),
            "convergents_digest": convergents_digest(&cf),
        });
        Ok(Number { cf, root: None, provenance })
    }

    pub fn algebraic(&self, what: &str) -> Result<&Root, CliError> {
        self.root.as_ref().ok_or_else(|| CliError::Input(format!("{what} needs a polynomial input (--poly), not a word file")))
    }
}

/// `--poly`/`--word` pair resolution; exactly one must be given.
pub fn load_number(
    poly: Option<&str>,
    word: Option<&str>,
    choice: RootChoice,
    depth: usize,
    cache: &ExpansionCache,
    flag_suffix: &str,
) -> Result<Number, CliError> {
    match (poly, word) {
        (Some(p), None) => Number::from_root(root_from_text(p, choice)?, depth, cache),
        (None, Some(w)) => Number::from_word_file(Path::new(w), depth),
        (Some(_), Some(_)) => Err(CliError::Input(format!("give either --poly{flag_suffix} or --word{flag_suffix}, not both"))),
        (None, None) => Err(CliError::Input(format!("missing input: --poly{flag_suffix} or --word{flag_suffix}"))),
    }
}
