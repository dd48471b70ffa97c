//! One function per subcommand, each producing report data and CSV rows.

use cfspectra::cf::{growth_metrics, verify_cf_identities, IdentityCheck};
use cfspectra::harness::{
    check_growth_condition, check_l1_smallness, check_transport_identity, delta_from_l, eval_linear_forms,
    mirror_quadruple, phi_vector, BITS_CAP,
};
use cfspectra::json::int_value;
use cfspectra::orbit::{growth_gap_scan, orbit_best_approximations, separation_bound, NormValue};
use cfspectra::words::{find_mirror_repetitions, find_repetitions, find_shared_blocks, increasing_chain, subword_complexity};
use cfspectra::{
    detect_period, ApproxRecord, BigRational, CfExpansion, DetectorParams, Dyadic, Interval, NormMode, OrbitConfig,
    PairContext, SharedBlockWitness, UnimodularMatrix, Verdict, Xi,
};
use serde_json::{json, Value};

use crate::cache::ExpansionCache;
use crate::cli::{DetectKind, HarnessCheck, OrbitTask};
use crate::config::JobConfig;
use crate::inputs::{load_number, root_from_text, Number, Root};
use crate::CliError;

pub const DECIMAL_DIGITS: u32 = 20;

#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

#[derive(Debug)]
pub struct Output {
    pub results: Value,
    pub provenance: Value,
    pub table: Table,
    /// Some certified decision stayed open at the precision cap.
    pub undecided: bool,
}

pub fn decimal_pair(iv: &Interval) -> Value {
    let (lo, hi) = iv.to_decimal_pair(DECIMAL_DIGITS);
    json!([lo, hi])
}

fn rational_decimal(r: &BigRational) -> String {
    let d = Dyadic::floor_of_rational(r, 128);
    d.to_decimal(DECIMAL_DIGITS, false)
}

fn word_text(cf: &CfExpansion) -> String {
    let rest: Vec<String> = cf.quotients().iter().map(|a| a.to_string()).collect();
    format!("[{};{}]", cf.a0(), rest.join(","))
}

fn first(cfg: &JobConfig, cache: &ExpansionCache) -> Result<Number, CliError> {
    load_number(cfg.poly.as_deref(), cfg.word.as_deref(), cfg.root, cfg.depth, cache, "")
}

fn second(cfg: &JobConfig, cache: &ExpansionCache) -> Result<Number, CliError> {
    load_number(cfg.poly2.as_deref(), cfg.word2.as_deref(), cfg.root2, cfg.depth, cache, "2")
}

fn letters(n: &Number) -> Result<Vec<u64>, CliError> {
    Ok(n.cf.letters_u64()?)
}

pub fn expand(cfg: &JobConfig, cache: &ExpansionCache) -> Result<Output, CliError> {
    let n = first(cfg, cache)?;
    let mut results = serde_json::to_value(&n.cf).expect("expansion serializes");
    results["text"] = json!(word_text(&n.cf));
    let mut table = Table::new(&["n", "a"]);
    for (i, a) in n.cf.full_word().iter().enumerate() {
        table.push(vec![i.to_string(), a.to_string()]);
    }
    Ok(Output { results, provenance: json!({ "input": n.provenance }), table, undecided: false })
}

pub fn convergents(cfg: &JobConfig, cache: &ExpansionCache) -> Result<Output, CliError> {
    let n = first(cfg, cache)?;
    let word = n.cf.full_word();
    let mut table = Table::new(&["n", "a", "p", "q"]);
    let mut items = Vec::with_capacity(word.len());
    for (i, (a, (p, q))) in word.iter().zip(n.cf.convergents().pairs()).enumerate() {
        table.push(vec![i.to_string(), a.to_string(), p.to_string(), q.to_string()]);
        items.push(json!({ "n": i, "a": int_value(a), "p": int_value(&p), "q": int_value(&q) }));
    }
    Ok(Output { results: Value::Array(items), provenance: json!({ "input": n.provenance }), table, undecided: false })
}

pub fn period(cfg: &JobConfig, _cache: &ExpansionCache) -> Result<Output, CliError> {
    let text = cfg.poly.as_deref().ok_or_else(|| CliError::Input("period needs --poly".into()))?;
    let root = root_from_text(text, cfg.root)?;
    let form = detect_period(&root.number)?;
    let mut table = Table::new(&["part", "index", "a"]);
    for (part, seq) in [("preperiod", &form.preperiod), ("period", &form.period)] {
        for (i, a) in seq.iter().enumerate() {
            table.push(vec![part.into(), i.to_string(), a.to_string()]);
        }
    }
    let results = serde_json::to_value(&form).expect("period serializes");
    Ok(Output { results, provenance: json!({ "input": root.provenance() }), table, undecided: false })
}

pub fn complexity(cfg: &JobConfig, cache: &ExpansionCache) -> Result<Output, CliError> {
    let n = first(cfg, cache)?;
    let w = letters(&n)?;
    let mut table = Table::new(&["n", "p"]);
    let mut items = Vec::new();
    for k in 1..=cfg.max_n.min(w.len()) {
        let p = subword_complexity(&w, k)?;
        table.push(vec![k.to_string(), p.to_string()]);
        items.push(json!({ "n": k, "p": p }));
    }
    let results = json!({ "length": w.len(), "complexity": items });
    Ok(Output { results, provenance: json!({ "input": n.provenance }), table, undecided: false })
}

fn witness_table() -> Table {
    Table::new(&["k", "l", "m", "ratio", "mirror"])
}

pub fn detect(kind: DetectKind, cfg: &JobConfig, cache: &ExpansionCache) -> Result<Output, CliError> {
    let n = first(cfg, cache)?;
    let w = letters(&n)?;
    let mut table = witness_table();
    let (witnesses, chain, provenance) = match kind {
        DetectKind::Repetition | DetectKind::Mirror => {
            let params = DetectorParams::new(cfg.l.clone(), cfg.min_b);
            let found =
                if kind == DetectKind::Repetition { find_repetitions(&w, &params) } else { find_mirror_repetitions(&w, &params) };
            for x in &found {
                table.push(vec![x.k_a.to_string(), x.k_a_prime.to_string(), x.m.to_string(), x.ratio().to_string(), x.mirror.to_string()]);
            }
            let chain = increasing_chain(&found, |x| x.m);
            (json!(found), json!(chain), json!({ "input": n.provenance }))
        }
        DetectKind::Shared => {
            let n2 = second(cfg, cache)?;
            let w2 = letters(&n2)?;
            let found = find_shared_blocks(&w, &w2, &cfg.l, cfg.min_b, cfg.mirror);
            for x in &found {
                table.push(vec![x.k.to_string(), x.l.to_string(), x.m.to_string(), x.ratio().to_string(), x.mirror.to_string()]);
            }
            let chain = increasing_chain(&found, |x| x.m);
            (json!(found), json!(chain), json!({ "input": n.provenance, "input2": n2.provenance }))
        }
    };
    let results = json!({ "witnesses": witnesses, "increasing_chain": chain });
    Ok(Output { results, provenance, table, undecided: false })
}

pub fn verify(cfg: &JobConfig, cache: &ExpansionCache) -> Result<Output, CliError> {
    let n = first(cfg, cache)?;
    let report = verify_cf_identities(&n.cf, cfg.depth);
    let mut table = Table::new(&["identity", "n", "pass"]);
    let mut rows = |name: &str, v: &[IdentityCheck]| {
        for c in v {
            table.push(vec![name.into(), c.n.to_string(), c.pass.to_string()]);
        }
    };
    rows("determinant", &report.determinant);
    rows("mirror_ratio", &report.mirror_ratio);
    rows("word_matrix", &report.word_matrix);
    if let Some(a) = &report.approximation {
        rows("approximation", a);
    }
    for g in &report.growth {
        table.push(vec!["growth".into(), g.n.to_string(), g.pass.to_string()]);
    }
    let results = json!({
        "all_pass": report.all_pass(),
        "failures": report.failures(),
        "identities": report,
    });
    Ok(Output { results, provenance: json!({ "input": n.provenance }), table, undecided: false })
}

/// One harness run: a pair of numbers and the witnesses to examine.
pub struct HarnessJob {
    pub alpha: Root,
    pub alpha_prime: Root,
    pub depth: usize,
    pub witnesses: Option<Vec<SharedBlockWitness>>,
    pub l: BigRational,
    pub min_b: usize,
    pub mirror: bool,
    pub delta: Option<BigRational>,
    pub bits: u64,
    pub check: HarnessCheck,
}

impl HarnessJob {
    pub fn from_config(check: HarnessCheck, cfg: &JobConfig) -> Result<Self, CliError> {
        let pick = |p: &Option<String>, flag: &str, choice| -> Result<Root, CliError> {
            let text = p.as_deref().ok_or_else(|| CliError::Input(format!("harness needs --{flag} (or --job)")))?;
            root_from_text(text, choice)
        };
        let witnesses = (!cfg.witnesses.is_empty())
            .then(|| cfg.witnesses.iter().map(|&[k, l, m]| SharedBlockWitness::new(k, l, m, cfg.mirror)).collect());
        Ok(HarnessJob {
            alpha: pick(&cfg.poly, "poly", cfg.root)?,
            alpha_prime: pick(&cfg.poly2, "poly2", cfg.root2)?,
            depth: cfg.depth,
            witnesses,
            l: cfg.l.clone(),
            min_b: cfg.min_b,
            mirror: cfg.mirror,
            delta: cfg.delta.clone(),
            bits: cfg.bits,
            check,
        })
    }

    pub fn run(&self, cache: &ExpansionCache) -> Result<Output, CliError> {
        let a = Number::from_root(self.alpha.clone(), self.depth, cache)?;
        let b = Number::from_root(self.alpha_prime.clone(), self.depth, cache)?;
        let ctx = PairContext {
            alpha: self.alpha.number.clone(),
            alpha_prime: self.alpha_prime.number.clone(),
            cf: a.cf.clone(),
            cf_prime: b.cf.clone(),
        };
        let (wa, wb) = ctx.words()?;
        let witnesses = match &self.witnesses {
            Some(w) => w.clone(),
            None => find_shared_blocks(&wa, &wb, &self.l, self.min_b, self.mirror),
        };
        let m_bound = growth_metrics(&ctx.cf, Some(&ctx.cf_prime)).max;
        let derived_delta = match &m_bound {
            Some(m) if m.lo() > &Dyadic::from_int(1) => Some(delta_from_l(m, &self.l, 64)?),
            _ => None,
        };
        let mut table = Table::new(&[
            "k", "l", "m", "mirror", "premise", "transport", "l1_verdict", "l1_lo", "l1_hi", "l1_bound", "growth",
        ]);
        let mut undecided = false;
        let mut items = Vec::with_capacity(witnesses.len());
        let (full_a, full_b) = (ctx.cf.full_word(), ctx.cf_prime.full_word());
        for wt in &witnesses {
            let (k, l, m) = (wt.k, wt.l, wt.m);
            if k + m > wa.len() || l + m > wb.len() {
                return Err(CliError::Input(format!(
                    "witness ({k},{l},{m}) runs past depth {}; raise --depth",
                    self.depth
                )));
            }
            let premise = wt.validate(&wa, &wb);
            let mut item = json!({
                "k": k, "l": l, "m": m, "mirror": wt.mirror,
                "ratio": wt.ratio().to_string(),
                "premise": premise,
            });
            let mut row = vec![k.to_string(), l.to_string(), m.to_string(), wt.mirror.to_string(), premise.to_string()];
            let wants = |c: HarnessCheck| self.check == HarnessCheck::All || self.check == c;

            if wants(HarnessCheck::Transport) {
                let block = &full_a[k + 1..=k + m];
                let ok = check_transport_identity(&full_a[..=k], &full_b[..=l], block, wt.mirror);
                item["transport"] = json!(ok);
                row.push(ok.to_string());
            } else {
                row.push(String::new());
            }

            if wants(HarnessCheck::L1) {
                if wt.mirror {
                    let q = mirror_quadruple(&ctx, k as i64, l as i64, m as i64)?;
                    item["mirror_quadruple"] = json!({
                        "values": q,
                        "max_abs": int_value(&q.max_abs()),
                        "unimodular": q.arrangement().is_unimodular(),
                    });
                    row.extend([String::new(), String::new(), String::new(), String::new()]);
                } else {
                    let r = check_l1_smallness(&ctx, wt, self.bits, BITS_CAP)?;
                    let verdict = match r.verdict {
                        Verdict::Holds => "holds",
                        Verdict::Fails => "fails",
                        Verdict::Undecided { .. } => {
                            undecided = true;
                            "undecided"
                        }
                    };
                    let enc = decimal_pair(&r.enclosure);
                    let phi = phi_vector(&ctx, k as i64, l as i64)?;
                    let forms = eval_linear_forms(&ctx, &phi.0, self.bits).0;
                    let product = forms.iter().map(Interval::abs).reduce(|x, y| &x * &y).unwrap();
                    item["l1"] = json!({
                        "verdict": verdict,
                        "enclosure": enc,
                        "bound": r.bound.to_string(),
                        "bound_decimal": rational_decimal(&r.bound),
                        "bits": r.bits,
                    });
                    item["phi"] = json!(phi);
                    item["form_product"] = decimal_pair(&product);
                    row.extend([
                        verdict.to_string(),
                        enc[0].as_str().unwrap().to_string(),
                        enc[1].as_str().unwrap().to_string(),
                        r.bound.to_string(),
                    ]);
                }
            } else {
                row.extend([String::new(), String::new(), String::new(), String::new()]);
            }

            if wants(HarnessCheck::Growth) {
                match &self.delta {
                    Some(d) => {
                        let holds = check_growth_condition(&ctx, wt, d, &self.l)?;
                        item["growth"] = json!({ "holds": holds, "delta": d.to_string(), "L": self.l.to_string() });
                        row.push(holds.to_string());
                    }
                    None => {
                        item["growth"] = Value::Null;
                        row.push(String::new());
                    }
                }
            } else {
                row.push(String::new());
            }
            table.push(row);
            items.push(item);
        }
        let results = json!({
            "M": m_bound.as_ref().map(decimal_pair),
            "derived_delta": derived_delta.as_ref().map(decimal_pair),
            "witnesses": items,
        });
        let provenance = json!({ "alpha": a.provenance, "alpha_prime": b.provenance });
        Ok(Output { results, provenance, table, undecided })
    }
}

/// Base point of an orbit: a polynomial root or the point at infinity.
pub fn parse_alpha(text: &str) -> Result<Option<Root>, CliError> {
    match text.trim() {
        "inf" | "infinity" | "oo" => Ok(None),
        t => Ok(Some(root_from_text(t, crate::config::RootChoice::Largest)?)),
    }
}

pub struct OrbitJob {
    pub xi: Number,
    pub alpha: Option<Root>,
    pub config: OrbitConfig,
}

fn matrix_json(m: &UnimodularMatrix) -> Value {
    serde_json::to_value(m).expect("matrix serializes")
}

fn record_json(r: &ApproxRecord) -> Value {
    let norm = match &r.norm {
        NormValue::Classic(n) => int_value(n),
        NormValue::Quadratic(iv) => decimal_pair(iv),
    };
    json!({
        "matrix": matrix_json(&r.matrix),
        "norm": norm,
        "distance": decimal_pair(&r.distance),
        "exponent": decimal_pair(&r.exponent),
        "exceeds_one_plus_eps": r.exceeds_one_plus_eps,
        "exceeds_two_plus_eps": r.exceeds_two_plus_eps,
    })
}

impl OrbitJob {
    pub fn run(&self) -> Result<Output, CliError> {
        let xi = match &self.xi.root {
            Some(root) => Xi::Algebraic(root.number.clone()),
            None => Xi::Word(self.xi.cf.clone()),
        };
        let alpha = match &self.alpha {
            Some(r) => cfspectra::Alpha::Algebraic(r.number.clone()),
            None => cfspectra::Alpha::Infinity,
        };
        let scan = orbit_best_approximations(&xi, &alpha, &self.config)?;
        let mut table = Table::new(&[
            "a", "b", "c", "d", "norm_lo", "norm_hi", "distance_lo", "distance_hi", "exponent_lo", "exponent_hi",
            "exceeds_one_plus_eps", "exceeds_two_plus_eps",
        ]);
        for r in &scan.records {
            let m = r.matrix.mat();
            let (nlo, nhi) = match &r.norm {
                NormValue::Classic(n) => (n.to_string(), n.to_string()),
                NormValue::Quadratic(iv) => iv.to_decimal_pair(DECIMAL_DIGITS),
            };
            let (dlo, dhi) = r.distance.to_decimal_pair(DECIMAL_DIGITS);
            let (elo, ehi) = r.exponent.to_decimal_pair(DECIMAL_DIGITS);
            table.push(vec![
                m.a.to_string(),
                m.b.to_string(),
                m.c.to_string(),
                m.d.to_string(),
                nlo,
                nhi,
                dlo,
                dhi,
                elo,
                ehi,
                r.exceeds_one_plus_eps.to_string(),
                r.exceeds_two_plus_eps.to_string(),
            ]);
        }
        let results = json!({
            "records": scan.records.iter().map(record_json).collect::<Vec<_>>(),
            "classes": scan.classes,
            "exceed_one_plus_eps": scan.exceed_one_plus_eps,
            "exceed_two_plus_eps": scan.exceed_two_plus_eps,
            "xi_in_orbit": scan.xi_in_orbit.iter().map(matrix_json).collect::<Vec<_>>(),
            "undecided": scan.undecided.iter().map(matrix_json).collect::<Vec<_>>(),
        });
        let provenance = json!({
            "xi": self.xi.provenance,
            "alpha": self.alpha.as_ref().map_or(json!("infinity"), Root::provenance),
        });
        Ok(Output { results, provenance, table, undecided: !scan.undecided.is_empty() })
    }
}

pub fn orbit_config(cfg: &JobConfig) -> OrbitConfig {
    let mut oc = OrbitConfig::new(cfg.height);
    oc.mode = cfg.mode;
    oc.epsilon = cfg.epsilon.clone();
    oc.translate_window = cfg.window;
    oc
}

pub fn orbit(task: OrbitTask, cfg: &JobConfig, cache: &ExpansionCache) -> Result<Output, CliError> {
    match task {
        OrbitTask::Scan => {
            let xi = first(cfg, cache)?;
            let alpha = parse_alpha(&cfg.alpha)?;
            if cfg.mode == NormMode::Quadratic && alpha.as_ref().is_none_or(|r| r.number.degree() != 2) {
                return Err(CliError::Input("quadratic mode needs a quadratic --alpha".into()));
            }
            OrbitJob { xi, alpha, config: orbit_config(cfg) }.run()
        }
        OrbitTask::Separation => {
            let (a, b) = (first(cfg, cache)?, second(cfg, cache)?);
            let r = separation_bound(&a.cf, &b.cf)?;
            let results = json!({
                "n": r.n,
                "bound": r.bound.to_string(),
                "bound_decimal": rational_decimal(&r.bound),
                "distance": decimal_pair(&r.distance),
                "holds": r.holds,
            });
            let (lo, hi) = r.distance.to_decimal_pair(DECIMAL_DIGITS);
            let mut table = Table::new(&["n", "bound", "distance_lo", "distance_hi", "holds"]);
            table.push(vec![r.n.to_string(), r.bound.to_string(), lo, hi, r.holds.to_string()]);
            let provenance = json!({ "alpha": a.provenance, "beta": b.provenance });
            Ok(Output { results, provenance, table, undecided: false })
        }
        OrbitTask::Gap => {
            let n = first(cfg, cache)?;
            let idx = growth_gap_scan(&n.cf, cfg.k, &cfg.epsilon)?;
            let mut table = Table::new(&["n", "q_n", "q_n_plus_k"]);
            let c = n.cf.convergents();
            for &i in &idx {
                let i = i as i64;
                table.push(vec![i.to_string(), c.q(i)?.to_string(), c.q(i + cfg.k as i64)?.to_string()]);
            }
            let results = json!({ "k": cfg.k, "epsilon": cfg.epsilon.to_string(), "indices": idx });
            Ok(Output { results, provenance: json!({ "input": n.provenance }), table, undecided: false })
        }
    }
}
