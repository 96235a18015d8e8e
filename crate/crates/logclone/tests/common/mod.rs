//! Fixture generators shared by the integration suites.

#![allow(dead_code)]

use logclone::corpus::{Corpus, LogPrintStatement, MethodDefinition};
use logclone::level::Level;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn seq(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_string).collect()
}

/// Build a corpus record directly from token sequences.
pub fn record(
    id: &str,
    file: &str,
    tokens_full: Vec<String>,
    tokens_log_aware: Vec<String>,
    lps: Vec<LogPrintStatement>,
) -> MethodDefinition {
    MethodDefinition {
        method_id: id.to_string(),
        file: file.to_string(),
        qualified_name: format!("G.{id}"),
        start_line: 1,
        end_line: 8,
        tokens_full,
        tokens_log_aware,
        lps,
    }
}

pub fn lps(line: u32, level: Level, lsd: &str, vars: &[&str]) -> LogPrintStatement {
    LogPrintStatement {
        line,
        level,
        lsd_tokens: seq(lsd),
        variables: vars.iter().map(|v| v.to_string()).collect(),
    }
}

/// Random-token corpus with planted near-duplicates and logged methods,
/// used for the index-vs-exhaustive equivalence runs.
pub fn random_corpus(n_methods: usize, seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocab: Vec<String> = (0..60).map(|i| format!("tok{i}")).collect();
    let mut token_sets: Vec<(Vec<String>, bool)> = Vec::new();
    while token_sets.len() < n_methods {
        let len = 10 + (rng.next_u64() % 25) as usize;
        let toks: Vec<String> = (0..len)
            .map(|_| vocab[(rng.next_u64() % vocab.len() as u64) as usize].clone())
            .collect();
        let logged = rng.next_u64() % 3 == 0;
        token_sets.push((toks.clone(), logged));
        // Near-duplicates give the thresholds something to separate.
        if token_sets.len() < n_methods && rng.next_u64() % 4 == 0 {
            let mut near = toks;
            let idx = (rng.next_u64() % near.len() as u64) as usize;
            near[idx] = "mutant".to_string();
            token_sets.push((near, rng.next_u64() % 2 == 0));
        }
    }
    let methods = token_sets
        .into_iter()
        .enumerate()
        .map(|(i, (code, logged))| {
            let mut full = code.clone();
            let statements = if logged {
                let lsd = "state changed to <var>";
                full.extend(seq("log . info ( <str> + x ) ;"));
                vec![lps(3, Level::Info, lsd, &["x"])]
            } else {
                Vec::new()
            };
            record(&format!("m{i:06}"), "gen.java", full, code, statements)
        })
        .collect();
    Corpus::new(methods)
}

/// One family of the planted location corpus: a logged original, a renamed
/// clone that keeps the logging, and an unlogged decoy that copies the
/// code shape and injects log-like lines on a non-logger receiver.
pub struct PlantedFamily {
    pub original: String,
    pub clone: String,
    pub decoy: String,
}

pub fn planted_family(f: usize) -> PlantedFamily {
    let original = format!(
        "class Orig{f} {{\n\
int probe{f}(int a{f}) {{\n\
 int t{f} = a{f} + 1;\n\
 if (t{f} > 0) {{ t{f} = t{f} + 2; }}\n\
 while (t{f} > 9) {{ t{f} = t{f} - 3; }}\n\
 log.info(\"scan alpha stage for \" + t{f});\n\
 log.info(\"scan beta stage for \" + t{f});\n\
 log.info(\"scan gamma stage for \" + t{f});\n\
 log.info(\"scan delta stage for \" + t{f});\n\
 log.info(\"scan omega stage for \" + t{f});\n\
 return t{f};\n\
}}\n\
}}\n"
    );
    // Identifier renames plus one literal edit, logging kept.
    let clone = format!(
        "class Twin{f} {{\n\
int mirror{f}(int b{f}) {{\n\
 int u{f} = b{f} + 1;\n\
 if (u{f} > 0) {{ u{f} = u{f} + 2; }}\n\
 while (u{f} > 9) {{ u{f} = u{f} - 5; }}\n\
 log.info(\"scan alpha stage for \" + u{f});\n\
 log.info(\"scan beta stage for \" + u{f});\n\
 log.info(\"scan gamma stage for \" + u{f});\n\
 log.info(\"scan delta stage for \" + u{f});\n\
 log.info(\"scan omega stage for \" + u{f});\n\
 return u{f};\n\
}}\n\
}}\n"
    );
    // Same code shape, fresh identifiers, log-like calls that are not LPSs.
    let decoy = format!(
        "class Decoy{f} {{\n\
int survey{f}(int c{f}) {{\n\
 int v{f} = c{f} + 1;\n\
 if (v{f} > 0) {{ v{f} = v{f} + 2; }}\n\
 while (v{f} > 9) {{ v{f} = v{f} - 3; }}\n\
 stats.info(\"scan alpha stage for \" + v{f});\n\
 stats.info(\"scan beta stage for \" + v{f});\n\
 stats.info(\"scan gamma stage for \" + v{f});\n\
 stats.info(\"scan delta stage for \" + v{f});\n\
 stats.info(\"scan omega stage for \" + v{f});\n\
 return v{f};\n\
}}\n\
}}\n"
    );
    PlantedFamily {
        original,
        clone,
        decoy,
    }
}

/// Assemble the planted corpus: train = originals, test = clones + decoys.
pub fn planted_partition(families: usize) -> (Corpus, Corpus) {
    use logclone::ingest::{corpus_from_sources, IngestConfig};
    let mut train_sources = Vec::new();
    let mut test_sources = Vec::new();
    for f in 0..families {
        let fam = planted_family(f);
        train_sources.push((format!("orig/Orig{f}.java"), fam.original));
        test_sources.push((format!("twin/Twin{f}.java"), fam.clone));
        test_sources.push((format!("decoy/Decoy{f}.java"), fam.decoy));
    }
    let config = IngestConfig::default();
    let (train, _) = corpus_from_sources(&train_sources, &config).expect("train ingests");
    let (mut test, _) = corpus_from_sources(&test_sources, &config).expect("test ingests");
    for m in test.methods.iter_mut() {
        m.method_id = format!("t{}", &m.method_id[1..]);
    }
    (train, test)
}

/// A synthetic Java tree for throughput runs: `files` files of `per_file`
/// methods each, half the families logged.
pub fn synthetic_tree(dir: &std::path::Path, files: usize, per_file: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for fi in 0..files {
        let mut src = format!("package gen.p{};\n\nclass Gen{fi} {{\n", fi % 7);
        for mi in 0..per_file {
            let fam = (rng.next_u64() % 40) as usize;
            let logged = fam.is_multiple_of(2);
            let body_log = if logged {
                format!(" log.info(\"processing batch item for \" + n{fam});\n")
            } else {
                String::new()
            };
            src.push_str(&format!(
                "int work{fi}x{mi}(int n{fam}) {{\n\
 int r{fam} = n{fam} * {};\n\
{body_log}\
 if (r{fam} > {}) {{ r{fam} = r{fam} - n{fam}; }}\n\
 for (int i = 0; i < n{fam}; i++) {{ r{fam} += i; }}\n\
 return r{fam};\n\
}}\n",
                1 + rng.next_u64() % 9,
                rng.next_u64() % 100,
            ));
        }
        src.push_str("}\n");
        let sub = dir.join(format!("p{}", fi % 7));
        std::fs::create_dir_all(&sub).expect("mkdir");
        std::fs::write(sub.join(format!("Gen{fi}.java")), src).expect("write");
    }
}
