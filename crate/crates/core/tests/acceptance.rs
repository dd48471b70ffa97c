//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

mod oracle;

use std::time::{Duration, Instant};

use cfspectra::cf::verify_cf_identities_with;
use cfspectra::harness::{check_l1_smallness, check_transport_identity, START_BITS};
use cfspectra::orbit::{orbit_best_approximations, separation_bound};
use cfspectra::words::{find_mirror_repetitions, find_repetitions, find_shared_blocks, subword_complexity};
use cfspectra::{
    detect_period, expand, word_matrix, Alpha, AlgebraicNumber, BigInt, BigRational, CfExpansion, DetectorParams,
    Dyadic, IntPolynomial, Mat2, OrbitConfig, PairContext, SharedBlockWitness, Verdict, Xi,
};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&a| a.into()).collect()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn root(coeffs: &[i64]) -> AlgebraicNumber {
    AlgebraicNumber::largest_real_root(&IntPolynomial::from_i64s(coeffs)).unwrap()
}

fn golden() -> AlgebraicNumber {
    root(&[-1, -1, 1])
}

/// `p_n, q_n` for `n = -2..=N` by the three-term recurrence, offset by 2.
fn recurrence(word: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let mut p = vec![BigInt::zero(), BigInt::one()];
    let mut q = vec![BigInt::one(), BigInt::zero()];
    for a in word {
        let n = p.len();
        p.push(a * &p[n - 1] + &p[n - 2]);
        q.push(a * &q[n - 1] + &q[n - 2]);
    }
    (p, q)
}

fn mat_mul(x: &[[BigInt; 2]; 2], y: &[[BigInt; 2]; 2]) -> [[BigInt; 2]; 2] {
    let e = |i: usize, j: usize| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn plain_word_matrix(word: &[BigInt]) -> [[BigInt; 2]; 2] {
    let mut m = [[BigInt::one(), BigInt::zero()], [BigInt::zero(), BigInt::one()]];
    for b in word {
        m = mat_mul(&m, &[[b.clone(), BigInt::one()], [BigInt::one(), BigInt::zero()]]);
    }
    m
}

fn as_mat2(m: &[[BigInt; 2]; 2]) -> Mat2 {
    Mat2::new(m[0][0].clone(), m[0][1].clone(), m[1][0].clone(), m[1][1].clone())
}

fn c1_identities() -> Outcome {
    let mut r = rng(1);
    for trial in 0..1000 {
        let len = r.gen_range(0..=50);
        let a0: i64 = r.gen_range(-1000..=1000);
        let quotients: Vec<i64> = (0..len).map(|_| r.gen_range(1..=1000)).collect();
        let mut word = vec![BigInt::from(a0)];
        word.extend(ints(&quotients));
        let (p, q) = recurrence(&word);
        for n in 0..word.len() {
            let (i, j) = (n + 2, n + 1);
            let det = &p[i] * &q[j] - &p[j] * &q[i];
            if det != BigInt::from(if n % 2 == 0 { -1 } else { 1 }) {
                return Err(format!("trial {trial}: determinant at n={n}"));
            }
            if n >= 1 {
                // [a_n; a_{n-1}, ..., a_1] = num / den, evaluated from the back
                let (mut num, mut den) = (word[1].clone(), BigInt::one());
                for a in &word[2..=n] {
                    (num, den) = (a * &num + &den, num);
                }
                if &num * &q[j] != &den * &q[i] {
                    return Err(format!("trial {trial}: mirror ratio at n={n}"));
                }
            }
        }
        let split = r.gen_range(0..=word.len());
        let whole = word_matrix(&word);
        if whole != &word_matrix(&word[..split]) * &word_matrix(&word[split..]) || whole != as_mat2(&plain_word_matrix(&word)) {
            return Err(format!("trial {trial}: homomorphism"));
        }
        let top = word.len() + 1;
        if whole != Mat2::new(p[top].clone(), p[top - 1].clone(), q[top].clone(), q[top - 1].clone()) {
            return Err(format!("trial {trial}: convergent matrix"));
        }
        let cf = CfExpansion::from_word(word[0].clone(), word[1..].to_vec(), false).unwrap();
        let rep = verify_cf_identities_with(&cf, 50, 50);
        if !rep.all_pass() {
            return Err(format!("trial {trial}: library report has {} failures", rep.failures()));
        }
    }
    Ok("1000 words".into())
}

fn c2_fixture(k: u64, n: u32) -> Outcome {
    let x = AlgebraicNumber::root_of_int(k as i64, n as usize).unwrap();
    let got = expand(&x, 50).map_err(|e| e.to_string())?.full_word();
    let want = oracle::gauss_map_root(k, n, 50, 1024)?;
    if got == want {
        Ok(format!("{k}^(1/{n}) 50 quotients"))
    } else {
        let i = got.iter().zip(&want).position(|(a, b)| a != b).unwrap_or(0);
        Err(format!("{k}^(1/{n}) differs at index {i}"))
    }
}

fn c2_expansions() -> Outcome {
    let mut notes = Vec::new();
    for (k, n) in [(2, 3), (3, 3), (2, 4)] {
        let t = Instant::now();
        notes.push(c2_fixture(k, n)?);
        if t.elapsed() > Duration::from_secs(10) {
            return Err(format!("{k}^(1/{n}) took {:?}", t.elapsed()));
        }
    }
    Ok(notes.join(", "))
}

fn c3_periods() -> Outcome {
    let cases: [(AlgebraicNumber, &[i64], &[i64]); 3] = [
        (root(&[-2, 0, 1]), &[1], &[2]),
        (root(&[-7, 0, 1]), &[2], &[1, 1, 1, 4]),
        (golden(), &[], &[1]),
    ];
    for (x, pre, per) in cases {
        let f = detect_period(&x).map_err(|e| e.to_string())?;
        if f.preperiod != ints(pre) || f.period != ints(per) {
            return Err(format!("{}: got {:?} / {:?}", x.poly(), f.preperiod, f.period));
        }
        let len = f.preperiod.len() + 3 * f.period.len();
        let cf = expand(&x, len - 1).map_err(|e| e.to_string())?;
        if cf.full_word() != f.unroll(len) {
            return Err(format!("{}: round trip", x.poly()));
        }
    }
    Ok("sqrt2, sqrt7, golden".into())
}

fn c4_approximation() -> Outcome {
    let polys: [&[i64]; 10] = [
        &[-2, 0, 1],
        &[-3, 0, 1],
        &[-1, -1, 1],
        &[-7, 0, 1],
        &[-2, 0, 0, 1],
        &[-3, 0, 0, 1],
        &[-1, -1, 0, 1],
        &[-2, 0, 0, 0, 1],
        &[-1, -1, 0, 0, 1],
        &[-5, 0, 0, 0, 1],
    ];
    let mut checked = 0usize;
    for coeffs in polys {
        let x = root(coeffs);
        let cf = expand(&x, 251).map_err(|e| e.to_string())?;
        let rep = verify_cf_identities_with(&cf, 200, 50);
        let approx = rep.approximation.as_ref().ok_or("missing approximation rows")?;
        if approx.len() != 201 || rep.growth.len() != 201 {
            return Err(format!("{coeffs:?}: incomplete report"));
        }
        if !rep.all_pass() {
            return Err(format!("{coeffs:?}: {} failures", rep.failures()));
        }
        // q_{m+n} >= 2^{(m-1)/2} q_n, squared
        let (_, q) = recurrence(&cf.full_word());
        for n in 0..=200usize {
            for m in 0..=50usize {
                let (a, b) = (&q[n + m + 2], &q[n + 2]);
                if BigInt::from(2) * a * a < (b * b) << m {
                    return Err(format!("{coeffs:?}: growth at n={n} m={m}"));
                }
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} rows over 10 numbers"))
}

fn c5_transport() -> Outcome {
    let mut r = rng(5);
    let word = |r: &mut ChaCha8Rng| -> Vec<BigInt> {
        let len = r.gen_range(0..=8);
        (0..len).map(|_| BigInt::from(r.gen_range(1..=50))).collect()
    };
    for trial in 0..1000 {
        let (a, ap, b) = (word(&mut r), word(&mut r), word(&mut r));
        let cat = |x: &[BigInt], y: &[BigInt]| -> Vec<BigInt> { x.iter().chain(y).cloned().collect() };
        let rev_b: Vec<BigInt> = b.iter().rev().cloned().collect();
        let (ma, map, mb) = (plain_word_matrix(&a), plain_word_matrix(&ap), plain_word_matrix(&b));
        let mab = plain_word_matrix(&cat(&a, &b));
        let adj = |m: &[[BigInt; 2]; 2]| [[m[1][1].clone(), -&m[0][1]], [-&m[1][0], m[0][0].clone()]];
        let tr = |m: &[[BigInt; 2]; 2]| [[m[0][0].clone(), m[1][0].clone()], [m[0][1].clone(), m[1][1].clone()]];
        let det_b = &mb[0][0] * &mb[1][1] - &mb[0][1] * &mb[1][0];
        let lhs = mat_mul(&ma, &adj(&map));
        let rhs = mat_mul(&mab, &adj(&plain_word_matrix(&cat(&ap, &b))));
        let rhs = rhs.map(|row| row.map(|e| e * &det_b));
        if lhs != rhs || !check_transport_identity(&a, &ap, &b, false) {
            return Err(format!("trial {trial}: plain identity"));
        }
        let lhs = mat_mul(&mab, &tr(&map));
        let rhs = mat_mul(&ma, &tr(&plain_word_matrix(&cat(&ap, &rev_b))));
        if lhs != rhs || !check_transport_identity(&a, &ap, &b, true) {
            return Err(format!("trial {trial}: transposed identity"));
        }
    }
    Ok("1000 triples, both identities".into())
}

fn c6_smallness() -> Outcome {
    let bases = [root(&[-2, 0, 1]), root(&[-3, 0, 1]), golden(), root(&[-2, 0, 0, 1])];
    let mut r = rng(6);
    let mut max_bits = 0;
    for trial in 0..50 {
        let x = &bases[trial % bases.len()];
        let prefix = |r: &mut ChaCha8Rng| -> Vec<i64> {
            let len = r.gen_range(0..=8);
            let mut w = vec![r.gen_range(-3..=3)];
            w.extend((0..len).map(|_| r.gen_range(1..=9)));
            w
        };
        let (pa, pb) = (prefix(&mut r), prefix(&mut r));
        // [w_0; w_1, ..., w_k, x] is the image of x under M(w)
        let alpha = x.moebius_apply(&word_matrix(&pa)).map_err(|e| e.to_string())?;
        let alpha_prime = x.moebius_apply(&word_matrix(&pb)).map_err(|e| e.to_string())?;
        let m = r.gen_range(10..=60);
        let (k, l) = (pa.len() - 1, pb.len() - 1);
        let ctx = PairContext::new(alpha, alpha_prime, k.max(l) + m + 4).map_err(|e| e.to_string())?;
        let wt = SharedBlockWitness::new(k, l, m, false);
        let res = check_l1_smallness(&ctx, &wt, START_BITS, 1024).map_err(|e| e.to_string())?;
        if !res.premise_holds {
            return Err(format!("trial {trial}: constructed block {wt:?} not shared"));
        }
        match res.verdict {
            Verdict::Holds => max_bits = max_bits.max(res.bits),
            Verdict::Fails => return Err(format!("trial {trial}: {wt:?} fails the bound")),
            Verdict::Undecided { .. } => return Err(format!("trial {trial}: {wt:?} undecided at 1024 bits")),
        }
    }
    Ok(format!("50 witnesses, max {max_bits} bits"))
}

fn c7_detectors() -> Outcome {
    let mut r = rng(7);
    let word = |r: &mut ChaCha8Rng| -> Vec<u64> {
        let len = r.gen_range(0..=14);
        (0..len).map(|_| r.gen_range(1..=3)).collect()
    };
    let mut witnesses = 0usize;
    for trial in 0..10_000 {
        let (w, v) = (word(&mut r), word(&mut r));
        let l = BigRational::new(r.gen_range(1..=16).into(), r.gen_range(1..=4).into());
        let min_b = r.gen_range(1..=3);
        let empty_a = r.gen_bool(0.25);
        let mut params = DetectorParams::new(l.clone(), min_b);
        if empty_a {
            params = params.allow_empty_a();
        }
        let gap = usize::from(!empty_a);
        let reps = find_repetitions(&w, &params);
        let mirrors = find_mirror_repetitions(&w, &params);
        witnesses += reps.len() + mirrors.len();
        if reps != oracle::sorted(oracle::repetitions(&w, &l, min_b, gap)) {
            return Err(format!("trial {trial}: repetitions on {w:?}"));
        }
        if mirrors != oracle::sorted(oracle::mirror_repetitions(&w, &l, min_b, gap)) {
            return Err(format!("trial {trial}: mirror repetitions on {w:?}"));
        }
        for mirror in [false, true] {
            let got = find_shared_blocks(&w, &v, &l, min_b, mirror);
            witnesses += got.len();
            if got != oracle::sorted(oracle::shared_blocks(&w, &v, &l, min_b, mirror)) {
                return Err(format!("trial {trial}: shared blocks (mirror={mirror}) on {w:?} / {v:?}"));
            }
        }
    }
    Ok(format!("10000 samples, {witnesses} witnesses"))
}

fn c8_complexity() -> Outcome {
    let (mut w, mut prev) = (vec![1u64], vec![2u64]);
    while w.len() < 500 {
        let next: Vec<u64> = w.iter().chain(&prev).copied().collect();
        prev = std::mem::replace(&mut w, next);
    }
    w.truncate(500);
    for n in 1..=15 {
        let p = subword_complexity(&w, n).map_err(|e| e.to_string())?;
        if p != n + 1 {
            return Err(format!("Fibonacci p({n}) = {p}"));
        }
    }
    let periods: [&[u64]; 4] = [&[1], &[1, 2], &[2, 1, 1, 4], &[3, 1, 4, 1, 5, 9, 2, 6]];
    for per in periods {
        let pw: Vec<u64> = per.iter().cycle().take(400).copied().collect();
        for n in 1..=50 {
            let p = subword_complexity(&pw, n).map_err(|e| e.to_string())?;
            if p > per.len() {
                return Err(format!("period {per:?}: p({n}) = {p}"));
            }
        }
    }
    Ok("Fibonacci n <= 15, 4 periodic words".into())
}

fn c9_separation() -> Outcome {
    // Quadratic tails keep both expansions infinite.
    let tails = [root(&[-1, -2, 1]), root(&[-3, 0, 1]), golden(), root(&[-1, -3, 1]), root(&[-3, -3, 1])];
    let mut r = rng(9);
    for trial in 0..100 {
        let n = r.gen_range(0..=30);
        let common: Vec<i64> = (0..n).map(|i| if i == 0 { r.gen_range(-5..=5) } else { r.gen_range(1..=12) }).collect();
        let low = if n == 0 { -5 } else { 1 };
        let (x, y) = loop {
            let (x, y) = (r.gen_range(low..=12), r.gen_range(low..=12));
            if x != y {
                break (x, y);
            }
        };
        let build = |d: i64, t: &AlgebraicNumber| {
            let mut w = common.clone();
            w.push(d);
            t.moebius_apply(&word_matrix(&w))
        };
        let alpha = build(x, &tails[r.gen_range(0..tails.len())]).map_err(|e| e.to_string())?;
        let beta = build(y, &tails[r.gen_range(0..tails.len())]).map_err(|e| e.to_string())?;
        let (ca, cb) = (expand(&alpha, n + 4).map_err(|e| e.to_string())?, expand(&beta, n + 4).map_err(|e| e.to_string())?);
        let (bw, q) = (cb.full_word(), recurrence(&cb.full_word()).1);
        if ca.full_word()[..n] != bw[..n] || ca.full_word()[n] == bw[n] {
            return Err(format!("trial {trial}: construction does not diverge at {n}"));
        }
        let bound = BigRational::new(BigInt::one(), BigInt::from(72) * &q[n + 2] * &q[n + 2] * &bw[n + 1] * &bw[n + 2]);
        let prec = 64 + 4 * q[n + 4].bits();
        let dist = (&alpha.enclosure(prec) - &beta.enclosure(prec)).abs();
        if dist.lo().to_rational() < bound {
            return Err(format!("trial {trial}: |alpha - beta| >= {} not above {bound}", dist.lo()));
        }
        let rep = separation_bound(&ca, &cb).map_err(|e| e.to_string())?;
        if rep.n != n || rep.bound != bound || !rep.holds {
            return Err(format!("trial {trial}: library report {rep:?}"));
        }
    }
    Ok("100 pairs".into())
}

fn c10_rational_baseline() -> Outcome {
    let x = root(&[-2, 0, 1]);
    let scan = orbit_best_approximations(&Xi::Algebraic(x), &Alpha::Infinity, &OrbitConfig::new(10_000))
        .map_err(|e| e.to_string())?;
    let limit = Dyadic::floor_of_rational(&BigRational::new(5.into(), 2.into()), 64);
    let over: Vec<String> = scan
        .records
        .iter()
        .filter(|r| r.exponent.lo() > &limit)
        .map(|r| format!("{}/{} (exponent >= {})", r.matrix.mat().a, r.matrix.mat().c, r.exponent.lo().to_decimal(4, false)))
        .collect();
    if !scan.undecided.is_empty() {
        return Err(format!("{} undecided elements", scan.undecided.len()));
    }
    if over.is_empty() {
        Ok(format!("{} records, none above 2.5", scan.records.len()))
    } else {
        Err(format!("{} records above 2.5: {}", over.len(), over.join(", ")))
    }
}

fn peak_rss_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

fn c11_performance() -> Outcome {
    let x = AlgebraicNumber::root_of_int(2, 3).unwrap();
    let cf = expand(&x, 1000).map_err(|e| e.to_string())?;
    if cf.len() != 1000 {
        return Err(format!("only {} quotients", cf.len()));
    }
    match peak_rss_kib() {
        Some(kib) if kib < 1024 * 1024 => Ok(format!("peak RSS {} MiB", kib / 1024)),
        Some(kib) => Err(format!("peak RSS {} MiB", kib / 1024)),
        None => Err("peak memory unavailable (no /proc/self/status)".into()),
    }
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "exact identity suite", limit: Duration::from_secs(5), run: c1_identities },
        Criterion { id: 2, name: "expansion fixtures vs Gauss-map oracle", limit: Duration::from_secs(30), run: c2_expansions },
        Criterion { id: 3, name: "quadratic periods", limit: Duration::from_secs(1), run: c3_periods },
        Criterion { id: 4, name: "approximation and growth bounds", limit: Duration::from_secs(60), run: c4_approximation },
        Criterion { id: 5, name: "transport identities", limit: Duration::from_secs(5), run: c5_transport },
        Criterion { id: 6, name: "L1 smallness on spliced pairs", limit: Duration::from_secs(120), run: c6_smallness },
        Criterion { id: 7, name: "detector/oracle equivalence", limit: Duration::from_secs(300), run: c7_detectors },
        Criterion { id: 8, name: "subword complexity", limit: Duration::from_secs(1), run: c8_complexity },
        Criterion { id: 9, name: "separation lemma", limit: Duration::from_secs(30), run: c9_separation },
        Criterion { id: 10, name: "rational approximation negative control", limit: Duration::from_secs(120), run: c10_rational_baseline },
        Criterion { id: 11, name: "depth-1000 expansion performance", limit: Duration::from_secs(10), run: c11_performance },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(note) if elapsed > c.limit => Err(format!("{note}; took {elapsed:.2?}, limit {:?}", c.limit)),
            other => other,
        };
        match outcome {
            Ok(note) => println!("PASS {:>2} {}: {note} [{elapsed:.2?}]", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {}: {why} [{elapsed:.2?}]", c.id, c.name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
