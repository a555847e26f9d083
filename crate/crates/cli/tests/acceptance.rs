//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use hivecount::counting::{self, count_barvinok, count_naive, CountMethod};
use hivecount::hive::{build_hive_polytope, interior_count};
use hivecount::klimyk::{self, KostkaMethod};
use hivecount::saturation::{self, integral_vertex_witness, is_unimodular, PointConfiguration, Triangulation, Witness};
use hivecount::hive::GHiveRhs;
use hivecount::stretch;
use hivecount::weights::{HighestWeight, WeightTriple};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BIN: &str = env!("CARGO_BIN_EXE_hivecount");

const SMALL: [(&str, &str, &str, &str); 8] = [
    ("9,7,3,0,0", "9,9,3,2,0", "10,9,9,8,6", "2"),
    ("18,11,9,4,2", "20,17,9,4,0", "26,25,19,16,8", "453"),
    ("30,24,17,10,2", "27,23,13,8,2", "47,36,33,29,11", "5231"),
    ("38,27,14,4,2", "35,26,16,11,2", "58,49,29,26,13", "16784"),
    ("47,44,25,12,10", "40,34,25,15,8", "77,68,55,31,29", "5449"),
    ("60,35,19,12,10", "60,54,27,25,3", "96,83,61,42,23", "13637"),
    ("64,30,27,17,9", "55,48,32,12,4", "84,75,66,49,24", "49307"),
    ("73,58,41,21,4", "77,61,46,27,1", "124,117,71,52,45", "557744"),
];

const LARGE: [(&str, &str, &str, &str); 3] = [
    ("935,639,283,75,48", "921,683,386,136,21", "1529,1142,743,488,225", "1303088213330"),
    ("6797,5843,4136,2770,707", "6071,5175,4035,1169,135", "10527,9398,8040,5803,3070", "459072901240524338"),
    (
        "859647,444276,283294,33686,24714",
        "482907,437967,280801,79229,26997",
        "1120207,699019,624861,351784,157647",
        "11711220003870071391294871475",
    ),
];

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, id: &str, ok: bool, what: &str, detail: String) {
        if !ok {
            self.failures += 1;
        }
        println!("{} [{id}] {what}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn run_bin(args: &[&str]) -> (i32, String) {
    let out = Command::new(BIN).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn write_corpus(name: &str, rows: &[(&str, &str, &str, &str)]) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("hivecount-acceptance-{}-{name}.txt", std::process::id()));
    let body: String = rows.iter().map(|(l, m, n, _)| format!("{l} {m} {n}\n")).collect();
    std::fs::write(&path, body).unwrap();
    path
}

fn random_partition(rng: &mut ChaCha8Rng, parts: usize, max: u64) -> Vec<u64> {
    let mut v: Vec<u64> = (0..parts).map(|_| rng.gen_range(0..=max)).collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// Partitions of `size` with at most `parts` parts, each at most `max`, zero padded.
fn partitions(size: u64, parts: usize, max: u64) -> Vec<Vec<u64>> {
    fn rec(left: u64, slots: usize, cap: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if slots == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for p in (0..=cap.min(left)).rev() {
            if p * (slots as u64) < left {
                break;
            }
            cur.push(p);
            rec(left - p, slots - 1, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(size, parts, max, &mut Vec::new(), &mut out);
    out
}

fn hw(v: &[u64]) -> HighestWeight {
    HighestWeight::new(v.to_vec()).unwrap()
}

/// Balanced triples with `2..=max_parts` parts and entries at most `max`.
fn random_triples(rng: &mut ChaCha8Rng, count: usize, max_parts: usize, max: u64) -> Vec<WeightTriple> {
    let mut out = Vec::new();
    while out.len() < count {
        let parts = rng.gen_range(2..=max_parts);
        let l = random_partition(rng, parts, max);
        let m = random_partition(rng, parts, max);
        let size = l.iter().sum::<u64>() + m.iter().sum::<u64>();
        let candidates = partitions(size, parts, max);
        let Some(n) = candidates.choose(rng) else { continue };
        out.push(WeightTriple::new(hw(&l), hw(&m), hw(n)));
    }
    out
}

fn count(t: &WeightTriple, method: CountMethod) -> BigInt {
    counting::count_triple(t, method, counting::DEFAULT_SEED).unwrap().value
}

fn criterion_1(r: &mut Report) {
    let path = write_corpus("small", &SMALL);
    let start = Instant::now();
    let (code, out) = run_bin(&["--json", "count", "--input-file", path.to_str().unwrap()]);
    let elapsed = start.elapsed();
    let v: serde_json::Value = serde_json::from_str(&out).unwrap_or_default();
    let rows = v["result"].as_array().cloned().unwrap_or_default();
    let got: Vec<String> = rows.iter().map(|x| x["coefficient"].as_str().unwrap_or("?").to_string()).collect();
    let want: Vec<String> = SMALL.iter().map(|x| x.3.to_string()).collect();
    let slowest = rows.iter().filter_map(|x| x["ms"].as_f64()).fold(0.0, f64::max);
    r.line(
        "1",
        code == 0 && got == want && slowest < 300_000.0,
        "reference table, 8 small-weight rows exact",
        format!("got {got:?}, slowest row {slowest:.0} ms, total {elapsed:.2?}"),
    );
}

fn criterion_2(r: &mut Report) {
    for (i, (l, m, n, c)) in LARGE.iter().enumerate() {
        let start = Instant::now();
        let (code, out) = run_bin(&["count", "--lambda", l, "--mu", m, "--nu", n]);
        let elapsed = start.elapsed();
        let label = if i == 0 { "large-weight row 1" } else { "large-weight stretch row" };
        r.line(
            &format!("2.{}", i + 1),
            code == 0 && out.trim() == *c && elapsed < Duration::from_secs(900),
            label,
            format!("{} (expected {c}) in {elapsed:.2?}", out.trim()),
        );
    }
}

fn criteria_3_4(r: &mut Report, corpus: &[WeightTriple]) {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut nonzero = 0;
    let mut coefficients = Vec::new();
    for t in corpus {
        let b = count(t, CountMethod::Barvinok);
        let n = count(t, CountMethod::Naive);
        let lr = klimyk::lr_tableau_count(t.lambda(), t.mu(), t.nu()).unwrap();
        let kl = klimyk::klimyk_coefficient(t.lambda(), t.mu(), t.nu()).unwrap();
        if !(b == n && n == lr && lr == kl) {
            bad.push(format!("{t}: barvinok {b} naive {n} lr {lr} klimyk {kl}"));
        }
        if !b.is_zero() {
            nonzero += 1;
        }
        coefficients.push(b);
    }
    r.line(
        "3",
        bad.is_empty(),
        "oracle equivalence barvinok = naive = LR tableaux = Klimyk",
        format!(
            "{} triples ({nonzero} nonzero, max {}) in {:.2?}{}",
            corpus.len(),
            coefficients.iter().max().unwrap(),
            start.elapsed(),
            if bad.is_empty() { String::new() } else { format!("; mismatches: {bad:?}") }
        ),
    );

    let mut disagree = Vec::new();
    for (t, c) in corpus.iter().zip(&coefficients) {
        let (code, out) = run_bin(&[
            "nonzero",
            "--lambda",
            &t.lambda().to_string(),
            "--mu",
            &t.mu().to_string(),
            "--nu",
            &t.nu().to_string(),
        ]);
        let expected = if c.is_zero() { "zero" } else { "nonzero" };
        if code != 0 || out.trim() != expected {
            disagree.push(format!("{t}: {}", out.trim()));
        }
    }
    r.line(
        "4",
        disagree.is_empty(),
        "saturation consistency, nonzero command vs coefficient",
        format!("{} triples, {} disagreements {disagree:?}", corpus.len(), disagree.len()),
    );
}

fn criterion_5(r: &mut Report, rng: &mut ChaCha8Rng) {
    let mut bad = Vec::new();
    let mut positive = 0;
    for _ in 0..50 {
        let size = rng.gen_range(1..=14);
        let lambdas = partitions(size, 6, size);
        let lambda: Vec<u64> = lambdas.choose(rng).unwrap().iter().copied().filter(|&x| x > 0).collect();
        let len = rng.gen_range(1..=6usize);
        let mut content = vec![0u64; len];
        for _ in 0..size {
            content[rng.gen_range(0..len)] += 1;
        }
        let lambda = hw(&lambda);
        let direct = klimyk::kostka(&lambda, &content, KostkaMethod::Direct).unwrap();
        let hive = klimyk::kostka(&lambda, &content, KostkaMethod::Hive).unwrap();
        if direct != hive {
            bad.push(format!("K({lambda}; {content:?}): direct {direct} hive {hive}"));
        }
        if !direct.is_zero() {
            positive += 1;
        }
    }
    r.line(
        "5",
        bad.is_empty(),
        "Kostka direct = Kostka via hive",
        format!("50 pairs, |lambda| <= 14, {positive} nonzero {bad:?}"),
    );
}

fn criterion_6(r: &mut Report, rng: &mut ChaCha8Rng) {
    let start = Instant::now();
    let mut fitted = 0;
    let mut nonneg = 0;
    let mut problems = Vec::new();
    let mut degrees = Vec::new();
    let mut seen = 0;
    while seen < 20 {
        let t = random_triples(rng, 1, 5, 5).pop().unwrap();
        // c = 1 stretches to the constant 1; only larger coefficients exercise the fit
        let c = counting::count_triple(&t, CountMethod::Barvinok, counting::DEFAULT_SEED)
            .unwrap()
            .value;
        if c < BigInt::from(2) {
            continue;
        }
        seen += 1;
        let n_max = stretch::required_samples(interior_count(t.parts()), 1);
        match stretch::conjecture2_report_with(&t, n_max, &[1]) {
            Ok(rep) if rep.quasi.period == 1 && rep.reproduces_samples() => {
                fitted += 1;
                degrees.push(rep.quasi.degree);
                if rep.all_coeffs_nonnegative {
                    nonneg += 1;
                } else {
                    println!("  note: negative coefficient for {t}: {}", rep.quasi.constituents[0]);
                }
            }
            Ok(_) => problems.push(format!("{t}: fit does not reproduce samples")),
            Err(e) => problems.push(format!("{t}: {e}")),
        }
    }
    r.line(
        "6",
        fitted == 20,
        "Ehrhart polynomiality, period 1 with 2 held-out dilations",
        format!(
            "{fitted}/20 fitted, degrees {degrees:?}, nonnegative coefficients {nonneg}/20 (recorded), {:.2?} {problems:?}",
            start.elapsed()
        ),
    );
}

fn criterion_7(r: &mut Report, corpus: &[WeightTriple]) {
    let mut bad = Vec::new();
    for t in corpus.iter().take(20) {
        let base = build_hive_polytope(t).unwrap();
        for n in [2u64, 3, 5] {
            let d = build_hive_polytope(&t.dilate(n).unwrap()).unwrap();
            let scaled: Vec<i64> = base.rhs.iter().map(|b| b * n as i64).collect();
            if d.boundary != base.boundary || d.rhombus != base.rhombus || d.rhs != scaled {
                bad.push(format!("{t} n={n}"));
            }
        }
    }
    r.line("7", bad.is_empty(), "dilation identity b(n.) = n b(.), B and R fixed", format!("20 triples x n in {{2,3,5}} {bad:?}"));
}

/// Random `b = M x` with sparse nonnegative integral `x`.
fn random_rhs(rng: &mut ChaCha8Rng, cfg: &PointConfiguration, rank: usize) -> GHiveRhs {
    let mut b = vec![0i64; cfg.rows];
    for col in &cfg.columns {
        if rng.gen_bool(0.4) {
            let k = rng.gen_range(1..=9);
            for (bi, a) in b.iter_mut().zip(col) {
                *bi += k * a;
            }
        }
    }
    GHiveRhs::new(rank, b).unwrap()
}

fn witnesses(rng: &mut ChaCha8Rng, cfg: &PointConfiguration, t: &Triangulation, rank: usize) -> Result<usize, String> {
    let mut found = 0;
    for _ in 0..20 {
        let b = random_rhs(rng, cfg, rank);
        match integral_vertex_witness(&b, cfg, t) {
            Ok(Witness::Vertex(v)) => {
                let bb: Vec<BigInt> = b.b.iter().map(|&x| x.into()).collect();
                if !saturation::is_vertex(cfg, &bb, &v.x) {
                    return Err(format!("not a vertex for b = {:?}", b.b));
                }
                found += 1;
            }
            Ok(Witness::Infeasible) => return Err(format!("feasible b = {:?} reported infeasible", b.b)),
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(found)
}

fn criterion_8(r: &mut Report, rng: &mut ChaCha8Rng) {
    for rank in [2usize, 3] {
        let cfg = saturation::hive_matrix(rank);
        let t = saturation::triangulate(&cfg, &saturation::natural_order(cfg.ncols())).unwrap();
        let check = is_unimodular(&t);
        let w = witnesses(rng, &cfg, &t, rank);
        r.line(
            &format!("8.r{rank}"),
            check.unimodular && w == Ok(20),
            "natural placing triangulation unimodular, 20 integral g-hive vertices",
            format!("{}x{} matrix, {} cells, unimodular {}, witnesses {w:?}", cfg.rows, cfg.ncols(), t.cells.len(), check.unimodular),
        );
    }

    // Side 4: the natural order is reported as a per-order finding; the search then tries
    // seeded random placing orders within the time budget.
    let rank = 4;
    let cfg = saturation::hive_matrix(rank);
    let start = Instant::now();
    let natural = saturation::triangulate(&cfg, &saturation::natural_order(cfg.ncols())).unwrap();
    let nat = is_unimodular(&natural);
    if let Some(w) = &nat.witness {
        println!(
            "  finding: side-4 natural placing order has {} cells, {} non-unimodular, e.g. det {} on columns {:?}",
            natural.cells.len(),
            natural.cells.iter().filter(|c| !c.is_unimodular()).count(),
            w.determinant,
            w.columns.iter().map(|c| c + 1).collect::<Vec<_>>()
        );
    }
    let budget = Duration::from_secs(3600);
    let mut found = nat.unimodular.then_some(("natural".to_string(), natural));
    let mut tried = 1;
    let mut seed = 0u64;
    while found.is_none() && start.elapsed() < budget && seed < 10_000 {
        let t = saturation::triangulate(&cfg, &saturation::random_order(cfg.ncols(), seed)).unwrap();
        tried += 1;
        if is_unimodular(&t).unimodular {
            found = Some((format!("random seed {seed}"), t));
        }
        seed += 1;
    }
    match found {
        Some((order, t)) => {
            let w = witnesses(rng, &cfg, &t, rank);
            r.line(
                "8.r4",
                w == Ok(20),
                "unimodular placing triangulation found at side 4",
                format!("{order} after {tried} orders, {} cells, witnesses {w:?}, {:.2?}", t.cells.len(), start.elapsed()),
            );
        }
        None => r.line(
            "8.r4",
            false,
            "unimodular placing triangulation found at side 4",
            format!("none among {tried} orders in {:.2?}", start.elapsed()),
        ),
    }
}

fn criterion_9(r: &mut Report) {
    let path = write_corpus("determinism", &SMALL);
    let p = path.to_str().unwrap();
    let (c1, a) = run_bin(&["--threads", "1", "count", "--method", "barvinok", "--seed", "1", "--input-file", p]);
    let (c2, b) = run_bin(&["--threads", "4", "count", "--method", "barvinok", "--seed", "987654321", "--input-file", p]);
    let want: String = SMALL.iter().map(|x| format!("{}\n", x.3)).collect();
    r.line(
        "9",
        c1 == 0 && c2 == 0 && a == b && a == want,
        "determinism across seeds and thread counts",
        format!("seed 1 / 1 thread vs seed 987654321 / 4 threads, outputs identical: {}", a == b),
    );
}

fn sanity(r: &mut Report) {
    // Library and binary agree on a direct count.
    let t = WeightTriple::parse(SMALL[0].0, SMALL[0].1, SMALL[0].2).unwrap();
    let p = build_hive_polytope(&t).unwrap().to_polytope();
    let ok = count_barvinok(&p).unwrap().value == count_naive(&p).unwrap().value;
    r.line("0", ok, "library self-check on the first table row", "barvinok = naive".into());
}

fn main() {
    let mut r = Report { failures: 0 };
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let corpus = random_triples(&mut rng, 100, 4, 6);
    sanity(&mut r);
    criterion_1(&mut r);
    criterion_2(&mut r);
    criteria_3_4(&mut r, &corpus);
    criterion_5(&mut r, &mut rng);
    criterion_6(&mut r, &mut rng);
    criterion_7(&mut r, &corpus);
    criterion_8(&mut r, &mut rng);
    criterion_9(&mut r);
    println!("acceptance: {} failure(s)", r.failures);
    if r.failures > 0 {
        std::process::exit(1);
    }
}
