//! Acceptance suite: one test per release criterion, each printing a
//! PASS line (run with `cargo test --test acceptance -- --nocapture` to
//! see them).

mod common;

use common::*;
use logclone::clone::{
    brute_force_clone_pairs, build_index, detect_all_pairs, find_clones, similarity, CloneParams,
    ClonePair,
};
use logclone::corpus::{Corpus, Mode};
use logclone::ingest::{corpus_from_sources, scan_corpus, IngestConfig};
use logclone::level::Level;
use logclone::level_var::predict_level;
use logclone::location::{consistency_report, evaluate_with_partition, LocationRule};
use logclone::metrics::{bleu, rouge_l, rouge_n};
use logclone::pipeline::{run_pipeline_on, run_pipeline_partitioned, PipelineConfig};
use logclone::split::SplitSpec;
use logclone::suggest::BlendParams;
use std::time::Instant;

const TOL: f64 = 1e-9;

/// Criterion 1: the metric fixture table (hand-derived cases) reproduces
/// to 1e-9 in under a second.
#[test]
fn c1_metric_fixture_table() {
    let start = Instant::now();

    // (candidate, reference, max_n, expected)
    let e_minus_2 = (-2.0f64).exp();
    let e_minus_1 = (-1.0f64).exp();
    let bleu_cases: Vec<(&str, &str, usize, f64)> = vec![
        ("cannot find bpservice for bpid", "cannot find bpservice for bpid", 4, 1.0),
        ("a b", "a c", 1, 0.5),
        ("a", "a b c", 1, e_minus_2),
        ("a b c d", "a b c d", 4, 1.0),
        ("a b", "a b", 4, 1.0),
        ("a b c", "a b d", 2, (2.0f64 / 3.0 * 0.5).sqrt()),
        ("x y", "a b", 4, 0.0),
        ("a a a", "a a", 1, 2.0 / 3.0),
        ("a b", "a b c d", 1, e_minus_1),
        ("a b x y", "a y b q", 2, (0.75f64 * 1e-9).sqrt()),
    ];
    for (c, r, n, want) in &bleu_cases {
        let got = bleu(&seq(c), &seq(r), *n).unwrap();
        assert!(
            (got - want).abs() < TOL,
            "bleu({c:?}, {r:?}, {n}) = {got}, want {want}"
        );
    }

    // (candidate, reference, n, precision, recall, f1)
    let rouge_n_cases: Vec<(&str, &str, usize, f64, f64, f64)> = vec![
        ("a b c", "a b d", 1, 2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0),
        ("a b c", "a b c", 2, 1.0, 1.0, 1.0),
        ("x y", "a b", 1, 0.0, 0.0, 0.0),
        ("a a", "a b", 1, 0.5, 0.5, 0.5),
    ];
    for (c, r, n, p, rr, f1) in &rouge_n_cases {
        let got = rouge_n(&seq(c), &seq(r), *n).unwrap();
        assert!((got.precision - p).abs() < TOL, "rouge_n P {c:?} {r:?}");
        assert!((got.recall - rr).abs() < TOL, "rouge_n R {c:?} {r:?}");
        assert!((got.f1 - f1).abs() < TOL, "rouge_n F1 {c:?} {r:?}");
    }

    // (candidate, reference, precision, recall, f1)
    let rouge_l_cases: Vec<(&str, &str, f64, f64, f64)> = vec![
        ("a x b y c", "a b c", 0.6, 1.0, 0.75),
        ("a b c", "a b c", 1.0, 1.0, 1.0),
        ("c b a", "a b c", 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0),
    ];
    for (c, r, p, rr, f1) in &rouge_l_cases {
        let got = rouge_l(&seq(c), &seq(r)).unwrap();
        assert!((got.precision - p).abs() < TOL, "rouge_l P {c:?} {r:?}");
        assert!((got.recall - rr).abs() < TOL, "rouge_l R {c:?} {r:?}");
        assert!((got.f1 - f1).abs() < TOL, "rouge_l F1 {c:?} {r:?}");
    }

    let cases = bleu_cases.len() + rouge_n_cases.len() + rouge_l_cases.len();
    assert!(cases >= 12);
    assert!(start.elapsed().as_secs_f64() < 1.0, "metric table too slow");
    println!(
        "acceptance C1 metric fixtures ({cases} cases, {:?}): PASS",
        start.elapsed()
    );
}

/// Criterion 2: indexed detection equals exhaustive comparison on
/// generated corpora of 100/200/300 methods for three thresholds and both
/// modes, in under 10 seconds.
#[test]
fn c2_oracle_equivalence() {
    let start = Instant::now();
    for (n, seed) in [(100usize, 1u64), (200, 2), (300, 3)] {
        let corpus = random_corpus(n, seed);
        assert_eq!(corpus.len(), n);
        for theta in [0.6, 0.7, 0.8] {
            for mode in [Mode::LogAware, Mode::LogUnaware] {
                let params = CloneParams {
                    theta,
                    mode,
                    min_bag_size: 10,
                };
                let mut expected = brute_force_clone_pairs(&corpus, params).unwrap();
                let mut got = detect_all_pairs(&corpus, params).unwrap();
                let key = |p: &ClonePair| (p.left.clone(), p.right.clone());
                expected.sort_by_key(key);
                got.sort_by_key(key);
                assert_eq!(expected, got, "n={n} theta={theta} mode={mode:?}");
                assert!(got.iter().all(|p| p.similarity >= theta));
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "oracle runs took {elapsed:?}");
    println!("acceptance C2 oracle equivalence ({elapsed:?}): PASS");
}

/// Criterion 3: inserting a logging statement into a copy of a method
/// leaves log-aware similarity at exactly 1.0 and strictly lowers
/// log-unaware similarity, over 100 generated methods with no violations.
#[test]
fn c3_log_aware_discrimination() {
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut sources = Vec::new();
    for i in 0..100 {
        let mul = 1 + rng.next_u64() % 9;
        let cap = rng.next_u64() % 50;
        let plain = format!(
            "class P{i} {{\n\
int calc{i}(int a{i}) {{\n\
 int s{i} = a{i} * {mul};\n\
 if (s{i} > {cap}) {{ s{i} -= a{i}; }}\n\
 for (int j = 0; j < a{i}; j++) {{ s{i} += j; }}\n\
 return s{i};\n\
}}\n\
}}\n"
        );
        // Same method with one logging statement inserted.
        let logged = plain.replace(
            &format!("int s{i} = a{i} * {mul};"),
            &format!("int s{i} = a{i} * {mul};\n log.info(\"pass value \" + a{i});"),
        );
        sources.push((format!("plain/P{i}.java"), plain));
        sources.push((format!("logged/P{i}.java"), logged));
    }
    let (corpus, _) = corpus_from_sources(&sources, &IngestConfig::default()).unwrap();
    assert_eq!(corpus.len(), 200);

    let mut violations = 0;
    let mut checked = 0;
    for i in 0..100 {
        let logged = corpus
            .methods
            .iter()
            .find(|m| m.file == format!("logged/P{i}.java"))
            .unwrap();
        let plain = corpus
            .methods
            .iter()
            .find(|m| m.file == format!("plain/P{i}.java"))
            .unwrap();
        assert!(logged.is_logged() && !plain.is_logged());
        let aware = similarity(&plain.bag(Mode::LogAware), &logged.bag(Mode::LogAware)).unwrap();
        let unaware =
            similarity(&plain.bag(Mode::LogUnaware), &logged.bag(Mode::LogUnaware)).unwrap();
        if aware != 1.0 || unaware >= 1.0 {
            violations += 1;
        }
        checked += 1;
    }
    assert_eq!(checked, 100);
    assert_eq!(violations, 0);
    println!("acceptance C3 log-aware discrimination (100 methods, 0 violations): PASS");
}

/// Criterion 4: on the planted corpus (50 logged originals, 50 clones, 50
/// log-like decoys) log-aware detection scores a balanced accuracy of
/// exactly 1.0 on the clones-vs-decoys split and never loses to the
/// log-unaware baseline. Construction properties are asserted before use.
#[test]
fn c4_planted_location_test() {
    let start = Instant::now();
    let (train, test) = planted_partition(50);
    assert_eq!(train.len(), 50);
    assert_eq!(test.len(), 100);

    // Fixture guarantees: the stripped clone reaches theta against its
    // original in log-aware mode; the decoy reaches theta against its
    // original in full mode but not in log-aware mode.
    let fam0_orig = &train.methods[0];
    let fam0_clone = test.methods.iter().find(|m| m.file.contains("Twin0")).unwrap();
    let fam0_decoy = test.methods.iter().find(|m| m.file.contains("Decoy0")).unwrap();
    let aware_clone = similarity(
        &fam0_clone.bag(Mode::LogAware),
        &fam0_orig.bag(Mode::LogAware),
    )
    .unwrap();
    assert!(aware_clone >= 0.7, "clone construction too weak: {aware_clone}");
    let unaware_decoy = similarity(
        &fam0_decoy.bag(Mode::LogUnaware),
        &fam0_orig.bag(Mode::LogUnaware),
    )
    .unwrap();
    assert!(unaware_decoy >= 0.7, "decoy construction too weak: {unaware_decoy}");
    let aware_decoy = similarity(
        &fam0_decoy.bag(Mode::LogAware),
        &fam0_orig.bag(Mode::LogAware),
    )
    .unwrap();
    assert!(aware_decoy < 0.7, "decoy leaks into log-aware mode: {aware_decoy}");

    let mut ba = std::collections::HashMap::new();
    for mode in [Mode::LogAware, Mode::LogUnaware] {
        let params = CloneParams {
            theta: 0.7,
            mode,
            min_bag_size: 10,
        };
        let index = build_index(&train, params).unwrap();
        let eval = evaluate_with_partition(&train, &test, &index, LocationRule::AnyLogged).unwrap();
        assert_eq!(eval.counts.abstained, 0);
        ba.insert(
            mode.as_str(),
            eval.metrics.balanced_accuracy.expect("BA defined"),
        );
    }
    assert_eq!(ba["log_aware"], 1.0, "log-aware BA must be exactly 1");
    assert!(
        ba["log_aware"] >= ba["log_unaware"],
        "aware {} vs unaware {}",
        ba["log_aware"],
        ba["log_unaware"]
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0);
    println!(
        "acceptance C4 planted location (BA aware {} >= unaware {}, {elapsed:?}): PASS",
        ba["log_aware"], ba["log_unaware"]
    );
}

/// Criterion 5: when the clone's description differs from the reference by
/// one token the model has seen nine times more often, the hybrid strictly
/// beats the clone-only baseline on BLEU-1.
#[test]
fn c5_hybrid_superiority() {
    let mut train_sources = Vec::new();
    let mut test_sources = Vec::new();
    for f in 0..8usize {
        // Family-specific literals keep families from cross-matching, so
        // each target's evidence is its own family's twin.
        let (l1, l2, l3, l4) = (f * 10 + 1, f * 10 + 2, f * 10 + 9, f * 10 + 3);
        // The evidence clone logs the divergent token.
        let evidence = format!(
            "class Twin{f} {{\n\
int mirror{f}(int b{f}) {{\n\
 int u{f} = b{f} + {l1};\n\
 if (u{f} > 0) {{ u{f} = u{f} + {l2}; }}\n\
 while (u{f} > {l3}) {{ u{f} = u{f} - {l4}; }}\n\
 log.info(\"probe{f} finds node{f} quickly\");\n\
 return u{f};\n\
}}\n\
}}\n"
        );
        train_sources.push((format!("twin/Twin{f}.java"), evidence));
        // Nine feeders teach the model the reference wording; their code
        // shares nothing with the targets.
        for k in 0..9 {
            let feeder = format!(
                "class Feed{f}x{k} {{\n\
void emit{f}x{k}(String s{f}x{k}) {{\n\
 buffer{f}x{k}.append(s{f}x{k});\n\
 buffer{f}x{k}.flip(s{f}x{k}, {k});\n\
 log.info(\"probe{f} finds target{f} quickly\");\n\
 sink{f}x{k}.push(s{f}x{k});\n\
}}\n\
}}\n"
            );
            train_sources.push((format!("feed/Feed{f}x{k}.java"), feeder));
        }
        // The target's real statement uses the reference wording.
        let target = format!(
            "class Host{f} {{\n\
int shadow{f}(int a{f}) {{\n\
 int t{f} = a{f} + {l1};\n\
 if (t{f} > 0) {{ t{f} = t{f} + {l2}; }}\n\
 while (t{f} > {l3}) {{ t{f} = t{f} - {l4}; }}\n\
 log.info(\"probe{f} finds target{f} quickly\");\n\
 return t{f};\n\
}}\n\
}}\n"
        );
        test_sources.push((format!("host/Host{f}.java"), target));
    }
    let config = IngestConfig::default();
    let (train, _) = corpus_from_sources(&train_sources, &config).unwrap();
    let (mut test, _) = corpus_from_sources(&test_sources, &config).unwrap();
    for m in test.methods.iter_mut() {
        m.method_id = format!("t{}", &m.method_id[1..]);
    }

    let pipeline_config = PipelineConfig {
        corpus: "planted".into(),
        split: SplitSpec::default(),
        clone: CloneParams::default(),
        rule: LocationRule::AnyLogged,
        lm: Default::default(),
        blend: BlendParams {
            lambda: 0.2,
            ..BlendParams::default()
        },
    };
    let report = run_pipeline_partitioned(&train, &test, &pipeline_config).unwrap();
    let clone_only = report.description.clone_only.expect("clone-only scored");
    let hybrid = report.description.hybrid.expect("hybrid scored");
    assert_eq!(clone_only.items, 8);
    // Every target must take its own family's twin as evidence.
    for item in &report.description.items {
        let target_file = &test.get(&item.target).unwrap().file;
        let fam = target_file
            .trim_start_matches("host/Host")
            .trim_end_matches(".java");
        let seed_file = &train.get(&item.seed_clone).unwrap().file;
        assert_eq!(
            seed_file,
            &format!("twin/Twin{fam}.java"),
            "target {target_file} took foreign evidence"
        );
    }
    assert!(
        hybrid.bleu1 > clone_only.bleu1,
        "hybrid {} must beat clone-only {}",
        hybrid.bleu1,
        clone_only.bleu1
    );
    println!(
        "acceptance C5 hybrid superiority (BLEU-1 {:.4} > {:.4}): PASS",
        hybrid.bleu1, clone_only.bleu1
    );
}

/// Criterion 6: with consistent planted levels the level predictor matches
/// 100% and presence consistency is 1.0.
#[test]
fn c6_level_and_consistency() {
    let levels = [
        Level::Trace,
        Level::Debug,
        Level::Info,
        Level::Warn,
        Level::Error,
        Level::Fatal,
    ];
    let mut methods = Vec::new();
    let mut next = 0;
    for fam in 0..12 {
        let code: Vec<String> = (0..14).map(|i| format!("f{fam}tok{i}")).collect();
        let logged = fam % 2 == 0;
        let level = levels[fam % levels.len()];
        for _copy in 0..3 {
            let (full, statements) = if logged {
                let mut full = code.clone();
                full.extend(seq("log . info ( <str> + x ) ;"));
                (full, vec![lps(2, level, "steady state for <var>", &["x"])])
            } else {
                (code.clone(), vec![])
            };
            methods.push(record(
                &format!("m{next:06}"),
                &format!("fam{fam}.java"),
                full,
                code.clone(),
                statements,
            ));
            next += 1;
        }
    }
    let corpus = Corpus::new(methods);
    let params = CloneParams::default();
    let pairs = detect_all_pairs(&corpus, params).unwrap();
    assert!(!pairs.is_empty());

    let report = consistency_report(&corpus, &pairs);
    assert_eq!(report.presence_consistency, Some(1.0));
    assert_eq!(report.level_match_rate, Some(1.0));

    // Every logged method's level is recovered from its clones.
    let index = build_index(&corpus, params).unwrap();
    let mut predicted = 0;
    let mut matched = 0;
    for target in corpus.methods.iter().filter(|m| m.is_logged()) {
        let matches = find_clones(&target.method_id, &target.bag(Mode::LogAware), &index).unwrap();
        let mut votes = Vec::new();
        for m in matches.iter().filter(|m| m.logged) {
            for l in &corpus.get(&m.method_id).unwrap().lps {
                votes.push((m.similarity, l.level));
            }
        }
        let pred = predict_level(&target.method_id, &votes).unwrap();
        predicted += 1;
        if target.lps.iter().any(|l| l.level == pred.level) {
            matched += 1;
        }
    }
    assert_eq!(predicted, 18);
    assert_eq!(matched, predicted, "level match rate must be 100%");
    println!("acceptance C6 level + consistency (18/18 levels, presence 1.0): PASS");
}

/// Criterion 7: two CLI evaluation runs with the same config produce
/// identical reports apart from the timestamp.
#[test]
fn c7_cli_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let (train, test) = planted_partition(12);
    let mut all = train.methods.clone();
    all.extend(test.methods.clone());
    let corpus = Corpus::new(all);
    let corpus_path = dir.path().join("corpus.jsonl");
    corpus.write_jsonl(&corpus_path).unwrap();

    let run = |out: &std::path::Path| {
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_logclone"))
            .args([
                "evaluate",
                "all",
                "--corpus",
                corpus_path.to_str().unwrap(),
                "--split",
                "0.8",
                "--seed",
                "42",
                "--theta",
                "0.7",
                "--mode",
                "log-aware",
                "--lambda",
                "0.5",
                "--out",
                out.to_str().unwrap(),
            ])
            .output()
            .expect("binary runs");
        assert!(status.status.success(), "{:?}", status);
        let mut v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
        v["generated_at"] = serde_json::Value::Null;
        serde_json::to_string_pretty(&v).unwrap()
    };
    let one = run(&dir.path().join("r1.json"));
    let two = run(&dir.path().join("r2.json"));
    assert_eq!(one, two, "reports differ beyond the timestamp");
    println!("acceptance C7 determinism (byte-identical reports): PASS");
}

/// Criterion 8: ingest + index + evaluate on a 1,000-method synthetic tree
/// stays under 60 seconds and under 1 GB peak memory.
#[test]
fn c8_throughput() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    synthetic_tree(dir.path(), 100, 10);

    let (corpus, report) = scan_corpus(dir.path(), &IngestConfig::default()).unwrap();
    assert_eq!(corpus.len(), 1000, "warnings: {:?}", report.warnings);

    let index = build_index(&corpus, CloneParams::default()).unwrap();
    assert!(!index.is_empty());

    let config = PipelineConfig::new("synthetic");
    let eval = run_pipeline_on(&corpus, &config).unwrap();
    assert_eq!(
        (eval.location.counts.true_pos
            + eval.location.counts.false_pos
            + eval.location.counts.true_neg
            + eval.location.counts.false_neg
            + eval.location.counts.abstained) as usize,
        200
    );

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");

    if let Some(peak_kb) = vm_peak_kb() {
        assert!(peak_kb < 1_000_000, "peak memory {peak_kb} kB");
        println!(
            "acceptance C8 throughput (1000 methods, {elapsed:?}, peak {peak_kb} kB): PASS"
        );
    } else {
        println!("acceptance C8 throughput (1000 methods, {elapsed:?}): PASS");
    }
}

fn vm_peak_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    status.lines().find_map(|l| {
        l.strip_prefix("VmPeak:")
            .and_then(|rest| rest.split_whitespace().next())
            .and_then(|n| n.parse().ok())
    })
}

/// Criterion 9: the consistency harness runs end to end on a real Java
/// tree checked into the test data and emits well-formed statistics.
#[test]
fn c9_hypothesis_harness_on_java_tree() {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("testdata")
        .join("java_project");
    let (corpus, report) = scan_corpus(&root, &IngestConfig::default()).unwrap();
    assert!(report.warnings.is_empty(), "{:?}", report.warnings);
    assert!(corpus.len() >= 20, "expected a real tree, got {}", corpus.len());

    let pairs = detect_all_pairs(&corpus, CloneParams::default()).unwrap();
    let stats = consistency_report(&corpus, &pairs);
    assert!(!stats.zero_pairs, "fixture tree should contain clone pairs");
    let presence = stats.presence_consistency.unwrap();
    assert!((0.0..=1.0).contains(&presence));
    let share_sum: f64 = stats.clone_type_shares.values().sum();
    assert!((share_sum - 1.0).abs() < TOL);

    // Same run through the CLI.
    let output = std::process::Command::new(env!("CARGO_BIN_EXE_logclone"))
        .args(["consistency", "--root", root.to_str().unwrap()])
        .output()
        .expect("binary runs");
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("presence_consistency"));
    println!(
        "acceptance C9 hypothesis harness ({} methods, {} pairs, presence {presence:.3}): PASS",
        corpus.len(),
        stats.pair_count
    );
}
