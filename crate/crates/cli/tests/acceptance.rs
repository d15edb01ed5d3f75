//! One PASS/FAIL line per acceptance criterion, run at full bounds.

use std::process::Command;
use std::time::{Duration, Instant};

use necklace::counting::Counter;
use necklace::indexing::{Indexer, Lookup};
use necklace::oracle::suite::{run, Bounds};
use num_bigint::BigUint;

const TIME_LIMIT: Duration = Duration::from_secs(60);

fn oracle(id: u32) -> Result<String, String> {
    let o = run(id, &Bounds::full()).ok_or_else(|| format!("no check with id {id}"))?;
    o.result.map(|m| format!("{m} ({:.2}s)", o.seconds))
}

/// Index the middle necklace, check the probe budget and the time limit,
/// and rank the answer back.
fn scaling_case(n: usize, q: &BigUint) -> Result<String, String> {
    let counter = Counter::default();
    let ix = Indexer::new(counter);
    let total = counter.total_necklaces(n, q).map_err(|e| e.to_string())?;
    let j = &total / 2u32 + 1u32;
    let budget = n as u64 * (q - 1u32).bits().max(1) + 2;
    let start = Instant::now();
    let w = match ix.index_necklace(n, q, &j).map_err(|e| e.to_string())? {
        Lookup::Found(w) => w,
        Lookup::TooLarge => return Err(format!("index {j} reported too large")),
    };
    let elapsed = start.elapsed();
    let probes = ix.probes();
    if probes > budget {
        return Err(format!("n={n}: {probes} probes exceed budget {budget}"));
    }
    if elapsed >= TIME_LIMIT {
        return Err(format!("n={n}: took {elapsed:.1?}"));
    }
    let back = ix.reverse_index_necklace(&w).map_err(|e| e.to_string())?;
    if back.rank != j {
        return Err(format!("n={n}: rank of {w} is {} not {j}", back.rank));
    }
    Ok(format!("n={n}: {probes}/{budget} probes in {elapsed:.1?}"))
}

fn scaling() -> Result<String, String> {
    let binary = scaling_case(64, &BigUint::from(2u32))?;
    let mersenne = scaling_case(16, &((BigUint::from(1u32) << 61u32) - 1u32))?;
    Ok(format!("{binary}; {mersenne}"))
}

fn selftest() -> Result<String, String> {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_nkindex"))
        .args(["selftest", "--max-n", "8"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if !out.status.success() {
        return Err(format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stdout)));
    }
    if elapsed >= TIME_LIMIT {
        return Err(format!("took {elapsed:.1?}"));
    }
    Ok(format!("exit 0 in {elapsed:.1?}"))
}

#[test]
fn acceptance() {
    let criteria: [(u32, &str, fn() -> Result<String, String>); 9] = [
        (1, "necklace indexing bijection", || oracle(1)),
        (2, "Lyndon indexing bijection", || oracle(2)),
        (3, "counting identities", || oracle(3)),
        (4, "encoded pipeline agrees with direct", || oracle(4)),
        (5, "polynomial scaling", scaling),
        (6, "irreducible indexing", || oracle(6)),
        (7, "BCH matrices", || oracle(7)),
        (8, "top-heavy rotations", || oracle(8)),
        (9, "selftest subcommand", selftest),
    ];
    let mut failed = Vec::new();
    for (id, name, check) in criteria {
        match std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into())) {
            Ok(detail) => println!("PASS criterion {id}: {name}: {detail}"),
            Err(detail) => {
                println!("FAIL criterion {id}: {name}: {detail}");
                failed.push(id);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
