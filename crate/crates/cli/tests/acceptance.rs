//! One line per acceptance criterion. Runs without the libtest harness so the
//! report is printed even when everything passes.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::Instant;

use serde_json::Value;
use spinelab::enumerate::{enumerate_graphs, EnumerationQuery};
use spinelab::gamma::presentation::rational_abelianization;
use spinelab::gamma::{random_element, Filled, GammaElement, Word};
use spinelab::{Forest, ThornedGraph};

const SAMPLES: u64 = 1000;
const SEED: u64 = 42;

struct Run {
    code: i32,
    records: Vec<Value>,
    digest: String,
}

fn cache_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance-cache")
}

fn spinelab(args: &[&str], threads: Option<usize>) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_spinelab"));
    cmd.env("SPINELAB_CACHE", cache_dir());
    if let Some(t) = threads {
        cmd.arg("--threads").arg(t.to_string());
    }
    let out = cmd.args(args).output().expect("spinelab runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    let manifest: Value = stderr
        .lines()
        .rev()
        .find_map(|l| serde_json::from_str(l).ok())
        .unwrap_or(Value::Null);
    Run {
        code: out.status.code().unwrap_or(-1),
        records: stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect(),
        digest: manifest["result_digest"].as_str().unwrap_or_default().to_string(),
    }
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_pass(run: &Run) -> Result<(), String> {
    let bad: Vec<_> = run.records.iter().filter(|r| r["status"] == "fail").collect();
    ensure(run.code == 0 && bad.is_empty(), || format!("exit {} with failing records {bad:?}", run.code))
}

fn graphs(n: usize, s: usize) -> Vec<ThornedGraph> {
    enumerate_graphs(&EnumerationQuery::new(n, s))
        .unwrap()
        .iter()
        .map(|c| c.graph().clone())
        .collect()
}

fn degree_of(g: &ThornedGraph) -> i64 {
    let b = g.basepoint().unwrap();
    let val: i64 = g.edges().iter().map(|&(x, y)| (x == b) as i64 + (y == b) as i64).sum::<i64>()
        + g.marks().iter().filter(|&&m| m == b).count() as i64;
    2 * g.rank() as i64 + g.s() as i64 - 1 - val
}

fn basepoint_loop_lemma(cmds: &mut Vec<Vec<String>>) -> Outcome {
    let args = ["verify", "--suite", "lemma"];
    cmds.push(args.map(String::from).to_vec());
    let run = spinelab(&args, None);
    all_pass(&run)?;
    let mut checked = 0;
    let mut witnesses = BTreeMap::new();
    for n in 1..=5usize {
        for s in 1..=3usize {
            let q = EnumerationQuery::new(n, s).degree_max(n.div_ceil(2) as i64);
            for c in enumerate_graphs(&q).unwrap() {
                let g = c.graph();
                let k = degree_of(g);
                if 2 * k < n as i64 {
                    checked += 1;
                    ensure(g.basepoint_loop_count() > 0, || format!("({n},{s}) {g:?} has no basepoint loop"))?;
                } else if k == n.div_ceil(2) as i64 && g.basepoint_loop_count() == 0 {
                    witnesses.entry(n).or_insert(s);
                }
            }
        }
    }
    let recorded = run.records.iter().filter(|r| r["check"] == "sharpness_witness" && r["status"] == "pass").count();
    ensure(recorded == witnesses.len(), || format!("{recorded} recorded witnesses, oracle finds {}", witnesses.len()))?;
    Ok(format!("{checked} low-degree graphs, 0 violations, sharpness witnesses for n in {:?}", witnesses.keys().collect::<Vec<_>>()))
}

fn degree_decrement() -> Outcome {
    let mut collapses = 0;
    for n in 1..=4 {
        for s in 1..=3 {
            for g in graphs(n, s) {
                let b = g.basepoint().unwrap();
                let val = g.valences();
                for (e, &(x, y)) in g.edges().iter().enumerate() {
                    let w = if x == b { y } else if y == b { x } else { continue };
                    if w == b || g.marks().contains(&w) || val[w] != 3 {
                        continue;
                    }
                    let h = g.collapse(&Forest::new(&g, vec![e]).unwrap()).unwrap().graph;
                    ensure(degree_of(&h) == degree_of(&g) - 1, || format!("{g:?} edge {e}"))?;
                    collapses += 1;
                }
            }
        }
    }
    Ok(format!("{collapses} collapses, 0 violations"))
}

fn euler_identity() -> Outcome {
    let mut checked = 0;
    for n in 1..=4 {
        for s in 1..=3 {
            for g in graphs(n, s) {
                let b = g.basepoint().unwrap();
                let thorns = |v: usize| g.marks().iter().filter(|&&m| m == v).count();
                let normalised = g.basepoint_loop_count() == 0
                    && (0..g.vertex_count()).all(|v| v == b || g.valences()[v] + thorns(v) == 3);
                if !normalised {
                    continue;
                }
                let inner = g.edges().iter().filter(|&&(x, y)| x != b && y != b).count()
                    + g.marks().iter().filter(|&&m| m != b).count();
                ensure(n as i64 == 2 * degree_of(&g) - inner as i64, || format!("{g:?}"))?;
                ensure(g.proof_identity_check() == Ok(true), || format!("library disagrees on {g:?}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} normalised graphs, 0 violations"))
}

fn delta_equivalence(cmds: &mut Vec<Vec<String>>) -> Outcome {
    let args = ["delta-check", "--samples", "50", "--seed", "42"];
    cmds.push(args.map(String::from).to_vec());
    let start = Instant::now();
    let run = spinelab(&args, None);
    all_pass(&run)?;
    let named: Vec<_> = run.records.iter().filter(|r| r["params"]["complex"] != "random").collect();
    for name in ["triangle_boundary", "tetrahedron_boundary", "projective_plane"] {
        ensure(named.iter().any(|r| r["params"]["complex"] == name), || format!("{name} missing"))?;
    }
    let through_three = run.records.iter().all(|r| r["params"]["max_check_dim"] == 3);
    ensure(through_three, || "some complex checked below dimension 3".into())?;
    let rp2 = named.iter().find(|r| r["params"]["complex"] == "projective_plane").unwrap();
    ensure(rp2["detail"]["betti"] == serde_json::json!([1, 0, 0, 0]), || format!("RP2 {rp2}"))?;
    let random = run.records.len() - named.len();
    ensure(random == 50, || format!("{random} random complexes"))?;
    Ok(format!("{} complexes equal through dimension 3 in {:.1?}", run.records.len(), start.elapsed()))
}

fn pattern_connectivity(cmds: &mut Vec<Vec<String>>) -> Outcome {
    let args = ["verify", "--suite", "pattern"];
    cmds.push(args.map(String::from).to_vec());
    let run = spinelab(&args, None);
    all_pass(&run)?;
    let mut seen = Vec::new();
    for r in &run.records {
        if r["check"] == "reduced_betti_vanish_below_n" {
            let n = r["params"]["n"].as_u64().unwrap();
            let zero = r["detail"]["reduced_betti"].as_array().unwrap().iter().all(|b| b == 0);
            ensure(zero, || format!("n={n}: {}", r["detail"]))?;
            seen.push(n);
        }
    }
    ensure((2..=5).all(|n| seen.contains(&n)), || format!("only n in {seen:?}"))?;
    Ok(format!("reduced Betti numbers vanish through n-1 for n in {seen:?}"))
}

fn spine_baselines(cmds: &mut Vec<Vec<String>>) -> Outcome {
    let cases: [(&str, &str, &str, &[u64]); 5] = [
        ("1", "1", "2", &[1]),
        ("2", "0", "1", &[1, 0]),
        ("2", "1", "2", &[1, 0]),
        ("3", "0", "3", &[1, 0]),
        ("3", "1", "2", &[1, 0]),
    ];
    let mut summary = Vec::new();
    for (n, s, d, want) in cases {
        let args = ["homology", "--rank", n, "--marks", s, "--max-dim", d];
        cmds.push(args.map(String::from).to_vec());
        let run = spinelab(&args, None);
        ensure(run.code == 0, || format!("({n},{s}) exit {}", run.code))?;
        let r = &run.records[0];
        let betti: Vec<u64> = serde_json::from_value(r["betti"].clone()).unwrap();
        ensure(betti.starts_with(want), || format!("({n},{s}) Betti {betti:?}"))?;
        ensure(r["euler_consistent"] == true, || format!("({n},{s}) Euler mismatch {r}"))?;
        if want.len() > 1 {
            let (nn, ss) = (n.parse().unwrap(), s.parse().unwrap());
            let oracle = rational_abelianization(nn, ss).rational_rank_bound as u64;
            ensure(betti[1] == oracle, || format!("({n},{s}) H_1 rank {} vs abelianization {oracle}", betti[1]))?;
        }
        summary.push(format!("({n},{s})={betti:?}"));
    }
    Ok(summary.join(" "))
}

fn group_identities(cmds: &mut Vec<Vec<String>>) -> Outcome {
    let args = ["verify", "--suite", "diagrams", "--samples", "1000", "--seed", "42"];
    cmds.push(args.map(String::from).to_vec());
    all_pass(&spinelab(&args, None))?;
    let mut checks = 0;
    for n in 1..=4 {
        for s in 1..=4 {
            for k in 0..SAMPLES {
                let seed = SEED + k;
                let g = random_element(n, s, 8, seed);
                let lhs = g.alpha().unwrap();
                let rhs = g.mu().unwrap().mu().unwrap().beta().unwrap();
                ensure(lhs == rhs, || format!("alpha vs beta mu mu at ({n},{s}) seed {seed}"))?;
                let back = g.mu().unwrap().gamma_fill().unwrap();
                ensure(back == Filled::Element(g.clone()), || format!("gamma mu at ({n},{s}) seed {seed}"))?;
                checks += 2;
                if s == 1 {
                    let lhs = g.alpha().unwrap().gamma_fill().unwrap();
                    let rhs = g.mu().unwrap().beta().unwrap().outer_class();
                    ensure(lhs == Filled::Outer(rhs), || format!("gamma alpha at n={n} seed {seed}"))?;
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} sampled identities, 0 failures"))
}

fn exact_sequence() -> Outcome {
    let mut checks = 0;
    for n in 1..=4usize {
        for s in 2..=4usize {
            for k in 0..SAMPLES {
                let seed = SEED + k;
                let g = random_element(n, s, 8, seed);
                let u = random_element(n, 2, 6, seed ^ 0x55).thorns()[0].clone();
                let v = random_element(n, 2, 6, seed ^ 0xaa).thorns()[0].clone();
                let ku = GammaElement::thorn_generator(n, s, s - 2, u.clone());
                let kv = GammaElement::thorn_generator(n, s, s - 2, v.clone());
                ensure(ku.forget_last().unwrap().is_identity(), || format!("kernel element not killed, seed {seed}"))?;
                let product = ku.compose(&kv).unwrap().kernel_project();
                ensure(product == Some(v.clone() * u.clone()), || format!("product rule at ({n},{s}) seed {seed}"))?;
                let conj = g.compose(&ku).unwrap().compose(&g.inverse()).unwrap();
                ensure(conj.kernel_project().is_some(), || format!("kernel not normal at ({n},{s}) seed {seed}"))?;
                let in_kernel = g.forget_last().unwrap().is_identity();
                ensure(in_kernel == g.kernel_project().is_some(), || format!("kernel test at ({n},{s}) seed {seed}"))?;
                ensure(ku.kernel_project() == Some(u), || "projection".into())?;
                checks += 1;
            }
        }
    }
    let trivial = GammaElement::thorn_generator(2, 2, 0, Word::identity());
    ensure(trivial.is_identity(), || "trivial word is not the identity".into())?;
    Ok(format!("{checks} sampled kernel elements, 0 failures"))
}

fn stabilization_maps(cmds: &mut Vec<Vec<String>>) -> Outcome {
    let mut labels = BTreeMap::<String, usize>::new();
    let cases: [(&str, &str, &str, &str); 13] = [
        ("alpha", "1", "1", "0"),
        ("alpha", "2", "1", "0"),
        ("alpha", "1", "2", "0"),
        ("mu", "1", "1", "0"),
        ("mu", "2", "1", "0"),
        ("mu", "1", "2", "0"),
        ("beta", "1", "2", "0"),
        ("beta", "1", "3", "0"),
        ("beta", "2", "2", "0"),
        ("alpha", "2", "1", "1"),
        ("mu", "1", "1", "1"),
        ("mu", "2", "1", "1"),
        ("beta", "1", "3", "1"),
    ];
    for (map, n, s, i) in cases {
        let args = ["stab-map", "--map", map, "--rank", n, "--marks", s, "--dim", i];
        cmds.push(args.map(String::from).to_vec());
        let run = spinelab(&args, None);
        ensure(run.code == 0, || format!("{map} ({n},{s}) i={i} exit {}", run.code))?;
        let r = &run.records[0];
        let label = r["label"].as_str().unwrap().to_string();
        if i == "0" {
            ensure(r["iso"] == true && r["source_rank"] == 1, || format!("{map} ({n},{s}) on H_0: {r}"))?;
        } else {
            ensure(r["iso"] == true, || format!("{map} ({n},{s}) on H_1: {r}"))?;
        }
        ensure(r["verdict"] != "fail", || format!("{r}"))?;
        *labels.entry(format!("i={i} {label}")).or_default() += 1;
    }
    Ok(format!("{} maps, all isomorphisms; {labels:?}", cases.len()))
}

fn determinism(cmds: &[Vec<String>]) -> Outcome {
    for args in cmds {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let one = spinelab(&args, Some(1));
        let eight = spinelab(&args, Some(8));
        let again = spinelab(&args, Some(8));
        ensure(!one.digest.is_empty(), || format!("no digest for {args:?}"))?;
        ensure(one.digest == eight.digest && eight.digest == again.digest, || format!("digest differs for {args:?}"))?;
    }
    Ok(format!("{} commands, identical digests with 1 and 8 threads", cmds.len()))
}

type Check<'a> = &'a mut dyn FnMut(&mut Vec<Vec<String>>) -> Outcome;

fn report(id: u32, name: &str, cmds: &mut Vec<Vec<String>>, f: Check) -> bool {
    let start = Instant::now();
    match f(cmds) {
        Ok(d) => {
            println!("criterion {id:>2} PASS {name}: {d} ({:.1?})", start.elapsed());
            true
        }
        Err(e) => {
            println!("criterion {id:>2} FAIL {name}: {e}");
            false
        }
    }
}

fn main() -> ExitCode {
    let mut cmds = Vec::new();
    let mut passed = vec![
        report(1, "basepoint loop below half the rank", &mut cmds, &mut basepoint_loop_lemma),
        report(2, "degree decrement", &mut cmds, &mut |_| degree_decrement()),
        report(3, "Euler identity", &mut cmds, &mut |_| euler_identity()),
        report(4, "delta construction homology", &mut cmds, &mut delta_equivalence),
        report(5, "pattern quotient connectivity", &mut cmds, &mut pattern_connectivity),
        report(6, "spine quotient baselines", &mut cmds, &mut spine_baselines),
        report(7, "group model identities", &mut cmds, &mut group_identities),
        report(8, "kernel of the forget map", &mut cmds, &mut |_| exact_sequence()),
        report(9, "stabilization maps", &mut cmds, &mut stabilization_maps),
    ];
    let snapshot = cmds.clone();
    passed.push(report(10, "determinism", &mut cmds, &mut |_| determinism(&snapshot)));
    let failed = passed.iter().filter(|&&p| !p).count();
    println!("acceptance: {} passed, {failed} failed", passed.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
