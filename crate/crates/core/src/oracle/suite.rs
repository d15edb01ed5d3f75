//! Oracle-equivalence checks: each one runs the fast pipeline over a bounded
//! domain and compares it with enumeration. A check returns a one-line
//! summary on success and the first mismatch on failure.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{all_words, brute_c_x, brute_cyclotomic_orbits, brute_g, brute_g_leq, brute_irreducibles, brute_orbits, closed_form_counts, factorize};
use crate::bch::{expanded_parity_columns, rank, Bch};
use crate::counting::{divisors, Counter, Pipeline};
use crate::finite_field::{find_primitive_polynomial, is_irreducible, Fq, FqCtx, FqPoly};
use crate::indexing::{Indexer, Lookup};
use crate::irreducible::{count_irreducible, index_irreducible};
use crate::strings::{fundamental_period, min_rotation, rotate, NkString};
use crate::top_heavy::{count_top_heavy, is_top_heavy, top_heavy_rotation};

pub type CheckResult = std::result::Result<String, String>;

/// Domain sizes for the suite.
#[derive(Clone, Debug)]
pub struct Bounds {
    /// Largest `n` for exhaustive binary indexing.
    pub binary_n: usize,
    /// Largest `n` for exhaustive ternary indexing.
    pub ternary_n: usize,
    /// `(n, q)` pairs and the number of random thresholds for each.
    pub sampled: Vec<(usize, u64)>,
    pub samples: usize,
    /// Alphabets and largest `n` for the encoded-versus-direct comparison.
    pub encoded_q: Vec<u64>,
    pub encoded_n: usize,
    /// `(q, largest n)` for irreducible indexing, starting at `n = 2`.
    pub irreducible: Vec<(u64, usize)>,
    /// Designed distances for the BCH checks over `F_8`.
    pub bch_d: Vec<u64>,
    /// Largest prime length for the top-heavy checks.
    pub top_heavy_n: usize,
    pub seed: u64,
}

impl Bounds {
    pub fn full() -> Self {
        Bounds {
            binary_n: 12,
            ternary_n: 7,
            sampled: vec![(12, 2), (6, 3), (4, 5)],
            samples: 500,
            encoded_q: vec![3, 4, 5, 6],
            encoded_n: 5,
            irreducible: vec![(2, 6), (3, 4), (4, 3), (5, 3)],
            bch_d: vec![0, 1, 3, 4],
            top_heavy_n: 13,
            seed: 0x5eed,
        }
    }

    /// Scaled-down bounds with binary words of length at most `max_n`.
    pub fn reduced(max_n: usize) -> Self {
        let max_n = max_n.max(1);
        Bounds {
            binary_n: max_n,
            ternary_n: max_n.min(5),
            sampled: vec![(max_n.min(8), 2), (max_n.min(4), 3), (max_n.min(3), 5)],
            samples: 60,
            encoded_q: vec![3, 4, 5, 6],
            encoded_n: max_n.min(3),
            irreducible: vec![(2, max_n.min(6)), (3, max_n.min(4)), (4, max_n.min(3)), (5, max_n.min(3))],
            bch_d: vec![0, 1, 3, 4],
            top_heavy_n: max_n.min(13),
            seed: 0x5eed,
        }
    }
}

/// A named check together with its outcome and wall time.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub result: CheckResult,
    pub seconds: f64,
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn fail<T>(msg: impl Into<String>) -> std::result::Result<T, String> {
    Err(msg.into())
}

fn lib<T>(r: crate::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Indexing of necklaces (or Lyndon words) against the sorted orbit table,
/// plus ranking of every rotation of each representative.
fn check_family(n: usize, q: u64, lyndon: bool) -> std::result::Result<usize, String> {
    let qq = big(q);
    let reps: Vec<NkString> = lib(brute_orbits(n, &qq))?
        .orbits
        .into_iter()
        .filter(|(_, size)| !lyndon || *size == n)
        .map(|(r, _)| r)
        .collect();
    let ix = Indexer::default();
    for (k, rep) in reps.iter().enumerate() {
        let j = big(k as u64 + 1);
        let got = if lyndon { ix.index_lyndon(n, &qq, &j) } else { ix.index_necklace(n, &qq, &j) };
        if lib(got)? != Lookup::Found(rep.clone()) {
            return fail(format!("index n={n} q={q} j={j}: expected {rep}"));
        }
        for s in 0..fundamental_period(rep) {
            let y = rotate(rep, s);
            let r = if lyndon { ix.reverse_index_lyndon(&y) } else { ix.reverse_index_necklace(&y) };
            let r = lib(r)?;
            if r.rank != j || r.canonical != *rep {
                return fail(format!("rank of {y} (n={n} q={q}): got {} expected {j}", r.rank));
            }
        }
    }
    let past = big(reps.len() as u64 + 1);
    let got = if lyndon { ix.index_lyndon(n, &qq, &past) } else { ix.index_necklace(n, &qq, &past) };
    if lib(got)? != Lookup::TooLarge {
        return fail(format!("index n={n} q={q} j={past} should be too large"));
    }
    Ok(reps.len())
}

fn family_check(b: &Bounds, lyndon: bool) -> CheckResult {
    let mut total = 0;
    for (q, max_n) in [(2u64, b.binary_n), (3, b.ternary_n)] {
        for n in 1..=max_n {
            total += check_family(n, q, lyndon)?;
        }
    }
    let what = if lyndon { "Lyndon words" } else { "necklaces" };
    Ok(format!("{total} {what} indexed and ranked (q=2 n<={}, q=3 n<={})", b.binary_n, b.ternary_n))
}

/// Necklace indexing and ranking agree with the enumerated orbit table.
pub fn necklace_bijection(b: &Bounds) -> CheckResult {
    family_check(b, false)
}

/// The same for orbits of size exactly `n`.
pub fn lyndon_bijection(b: &Bounds) -> CheckResult {
    family_check(b, true)
}

/// Minimal rotation and period of every word, plus sorted views for fast
/// threshold queries.
struct WordTable {
    min_rep: Vec<NkString>,
    period: Vec<usize>,
    /// Every word's minimal rotation, sorted.
    sorted: Vec<NkString>,
    /// Distinct minimal rotations, sorted.
    reps: Vec<NkString>,
}

impl WordTable {
    fn new(n: usize, q: &BigUint) -> std::result::Result<Self, String> {
        let words = lib(all_words(n, q))?;
        let period = words.iter().map(fundamental_period).collect();
        let min_rep: Vec<NkString> = words.iter().map(|w| min_rotation(w).0).collect();
        let mut sorted = min_rep.clone();
        sorted.sort();
        let mut reps = sorted.clone();
        reps.dedup();
        Ok(WordTable { min_rep, period, sorted, reps })
    }

    /// Words whose period satisfies `keep` and whose orbit reaches below `x`.
    fn g(&self, x: &NkString, keep: impl Fn(usize) -> bool) -> BigUint {
        let c = self.min_rep.iter().zip(&self.period).filter(|(r, p)| keep(**p) && *r < x).count();
        big(c as u64)
    }

    /// Words with some rotation below `x`.
    fn g_all(&self, x: &NkString) -> BigUint {
        big(self.sorted.partition_point(|r| r < x) as u64)
    }

    fn c(&self, x: &NkString) -> BigUint {
        big(self.reps.partition_point(|r| r < x) as u64)
    }
}

fn random_word(rng: &mut ChaCha8Rng, n: usize, q: u64) -> NkString {
    let digits: Vec<u64> = (0..n).map(|_| rng.gen_range(0..q)).collect();
    NkString::from_small(q, &digits).expect("digits below q")
}

/// Divisor-sum and orbit-count identities on random thresholds, exact
/// against enumeration.
pub fn counting_identities(b: &Bounds) -> CheckResult {
    let counter = Counter::default();
    let mut rng = ChaCha8Rng::seed_from_u64(b.seed);
    let mut checked = 0;
    for &(n, q) in &b.sampled {
        let qq = big(q);
        let table = WordTable::new(n, &qq)?;
        let divs = divisors(n);
        for s in 0..b.samples {
            let x = random_word(&mut rng, n, q);
            let mut exact = Vec::new();
            for &p in &divs {
                let leq = lib(counter.count_g_leq(&x, p))?;
                let ex = lib(counter.count_g_exact(&x, p))?;
                let brute_leq = table.g(&x, |fp| p % fp == 0);
                let brute_ex = table.g(&x, |fp| fp == p);
                if leq != brute_leq || ex != brute_ex {
                    return fail(format!("G counts for x={x} p={p}: got ({leq}, {ex}) expected ({brute_leq}, {brute_ex})"));
                }
                exact.push((p, ex));
            }
            // Sum over i | p of |G_{x,i}| equals |G_{x,<=p}|.
            for &p in &divs {
                let sum: BigUint = exact.iter().filter(|(i, _)| p % i == 0).map(|(_, g)| g).sum();
                if sum != table.g(&x, |fp| p % fp == 0) {
                    return fail(format!("divisor sum for x={x} p={p}"));
                }
            }
            // |C_x| is the sum of |G_{x,i}| / i, each quotient exact.
            let mut c = BigUint::zero();
            for (i, g) in &exact {
                if !(g % big(*i as u64)).is_zero() {
                    return fail(format!("|G_(x,{i})| = {g} not divisible by {i} for x={x}"));
                }
                c += g / big(*i as u64);
            }
            let counted = lib(counter.count_classes_less(&x))?;
            if c != table.c(&x) || counted != c {
                return fail(format!("|C_x| for x={x}: counted {counted}, summed {c}, expected {}", table.c(&x)));
            }
            // Spot-check the table against the literal definitions.
            if s < 3 {
                let p = *divs.last().expect("n divides n");
                if lib(brute_c_x(&x))? != c
                    || lib(brute_g(&x, p))? != exact.last().expect("nonempty").1
                    || lib(brute_g_leq(&x, p))? != table.g(&x, |fp| p % fp == 0)
                {
                    return fail(format!("enumeration tables disagree for x={x}"));
                }
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} random thresholds over {:?}", b.sampled))
}

/// Binary-encoded and direct pipelines agree with each other and with
/// enumeration on every threshold.
pub fn encoded_matches_direct(b: &Bounds) -> CheckResult {
    let cases: Vec<(u64, usize)> =
        b.encoded_q.iter().flat_map(|&q| (1..=b.encoded_n).map(move |n| (q, n))).collect();
    let results: Vec<std::result::Result<usize, String>> = std::thread::scope(|s| {
        let handles: Vec<_> = cases.iter().map(|&(q, n)| s.spawn(move || encoded_case(q, n))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err("worker panicked".into())))
            .collect()
    });
    let mut checked = 0;
    for r in results {
        checked += r?;
    }
    Ok(format!("{checked} thresholds for q in {:?}, n<={}", b.encoded_q, b.encoded_n))
}

fn encoded_case(q: u64, n: usize) -> std::result::Result<usize, String> {
    let direct = Counter::new(Pipeline::Direct);
    let encoded = Counter::new(Pipeline::Encoded);
    let qq = big(q);
    let table = WordTable::new(n, &qq)?;
    let words = lib(all_words(n, &qq))?;
    for x in &words {
        let want_c = table.c(x);
        let want_g = table.g_all(x);
        for (name, counter) in [("direct", &direct), ("encoded", &encoded)] {
            let c = lib(counter.count_classes_less(x))?;
            let g = lib(counter.count_g_leq(x, n))?;
            if c != want_c || g != want_g {
                return fail(format!("{name} pipeline, q={q} x={x}: got ({c}, {g}) expected ({want_c}, {want_g})"));
            }
        }
    }
    Ok(words.len())
}

fn base_field(q: u64) -> std::result::Result<FqCtx, String> {
    let r = match q {
        4 => FqCtx::new(big(2), vec![big(1), big(1), big(1)]),
        8 => FqCtx::new(big(2), vec![big(1), big(1), big(0), big(1)]),
        9 => FqCtx::new(big(3), vec![big(1), big(0), big(1)]),
        _ => FqCtx::prime(big(q)),
    };
    lib(r)
}

/// Irreducible indexing is a bijection onto the enumerated set, and the
/// count matches the Möbius closed form.
pub fn irreducible_bijection(b: &Bounds) -> CheckResult {
    let mut total = 0;
    for &(q, max_n) in &b.irreducible {
        let base = base_field(q)?;
        for n in 2..=max_n {
            let order = base.q().pow(n as u32) - 1u32;
            let factors = lib(factorize(&order))?;
            let ctx = lib(find_primitive_polynomial(&base, n, &factors, b.seed))?;
            let count = lib(count_irreducible(&big(q), n))?;
            if count != closed_form_counts(n, &big(q)).1 {
                return fail(format!("count for q={q} n={n}: {count}"));
            }
            let mut got = BTreeSet::new();
            let mut i = big(1);
            while i <= count {
                let f = match lib(index_irreducible(&ctx, &i))? {
                    Lookup::Found(f) => f,
                    Lookup::TooLarge => return fail(format!("q={q} n={n} i={i} unexpectedly too large")),
                };
                if f.degree() != Some(n) || f.leading() != Some(&base.one()) || !is_irreducible(&base, &f) {
                    return fail(format!("q={q} n={n} i={i}: {} is not monic irreducible", base.pretty_poly(&f)));
                }
                if !got.insert(f) {
                    return fail(format!("q={q} n={n}: repeated output at i={i}"));
                }
                i += 1u32;
            }
            if lib(index_irreducible(&ctx, &i))? != Lookup::TooLarge {
                return fail(format!("q={q} n={n} i={i} should be too large"));
            }
            let brute: BTreeSet<FqPoly> = lib(brute_irreducibles(&base, n))?.into_iter().collect();
            if got != brute {
                return fail(format!("q={q} n={n}: output set differs from enumeration"));
            }
            total += got.len();
        }
    }
    Ok(format!("{total} irreducible polynomials over {:?}", b.irreducible))
}

/// BCH checks over `F_8`: generator values in `F_2`, `d`-wise column
/// independence of the expanded parity matrix, orthogonality between the
/// generator rows for `d` and the parity rows for `q^n - 2 - d`, and row
/// lists equal to enumerated orbits.
pub fn bch_properties(b: &Bounds) -> CheckResult {
    let base = lib(FqCtx::prime(big(2)))?;
    let ctx = lib(find_primitive_polynomial(&base, 3, &[big(7)], b.seed))?;
    let top = ctx.order().to_u64().expect("small") - 1;
    let orbits = lib(brute_cyclotomic_orbits(2, 3))?;
    for &d in &b.bch_d {
        let code = lib(Bch::new(ctx.clone(), big(d)))?;
        // Row lists.
        let want_parity: Vec<u64> = orbits.iter().filter(|o| o[0] <= d).map(|o| o[0]).collect();
        let parity_rows = lib(code.parity_row_count())?.to_u64().expect("small");
        let got_parity: Vec<u64> = (1..=parity_rows)
            .map(|r| lib(code.parity_row(&big(r))).map(|s| s.m.to_u64().expect("small")))
            .collect::<std::result::Result<_, _>>()?;
        if got_parity != want_parity {
            return fail(format!("d={d}: parity rows {got_parity:?}, expected {want_parity:?}"));
        }
        let mut gen_orbits: Vec<&Vec<u64>> = orbits.iter().filter(|o| *o.last().expect("nonempty") <= d).collect();
        gen_orbits.sort_by_key(|o| *o.last().expect("nonempty"));
        let want_gen: Vec<(u64, usize)> = gen_orbits.iter().flat_map(|o| (1..=o.len()).map(move |j| (o[0], j))).collect();
        let gen_rows = lib(code.generator_row_count())?.to_u64().expect("small");
        let got_gen: Vec<(u64, usize)> = (1..=gen_rows)
            .map(|r| lib(code.generator_row(&big(r))).map(|(s, j)| (s.m.to_u64().expect("small"), j)))
            .collect::<std::result::Result<_, _>>()?;
        if got_gen != want_gen {
            return fail(format!("d={d}: generator rows {got_gen:?}, expected {want_gen:?}"));
        }
        // Generator entries lie in F_q at every column.
        let mut gen: Vec<Vec<Fq>> = Vec::new();
        for r in 1..=gen_rows {
            let mut row = Vec::new();
            for c in 0..8u64 {
                let alpha = lib(code.generator_column(&big(c)))?;
                row.push(lib(code.generator_entry(&big(r), &alpha))?);
            }
            gen.push(row);
        }
        if gen != lib(code.generator_matrix())? {
            return fail(format!("d={d}: entry-wise and full generator matrices differ"));
        }
        // Every d columns of the expanded parity matrix are independent.
        let cols = expanded_parity_columns(&lib(code.parity_matrix())?, &ctx);
        let k = d as usize;
        for mask in 0u32..1 << cols.len() {
            if mask.count_ones() as usize == k {
                let pick: Vec<Vec<Fq>> = (0..cols.len()).filter(|i| mask >> i & 1 == 1).map(|i| cols[i].clone()).collect();
                if rank(&base, &pick) != k {
                    return fail(format!("d={d}: columns {mask:07b} are dependent"));
                }
            }
        }
        // Orthogonality, with the parity row extended by 0^m at column 0.
        let dual = lib(Bch::new(ctx.clone(), big(top - d)))?;
        let dual_rows = lib(dual.parity_row_count())?.to_u64().expect("small");
        for r in 1..=dual_rows {
            let m = lib(dual.parity_row(&big(r)))?.m;
            for row in &gen {
                let mut acc = ctx.zero();
                for (c, v) in row.iter().enumerate() {
                    let alpha = lib(code.generator_column(&big(c as u64)))?;
                    acc = ctx.add(&acc, &ctx.scale(&ctx.pow(&alpha, &m), v));
                }
                if !acc.is_zero() {
                    return fail(format!("d={d}: generator row not orthogonal to parity row m={m}"));
                }
            }
        }
    }
    Ok(format!("F_8 codes with d in {:?}", b.bch_d))
}

/// Cycle-lemma uniqueness and the top-heavy count for prime lengths.
pub fn top_heavy_checks(b: &Bounds) -> CheckResult {
    let two = big(2);
    let mut primes = Vec::new();
    for n in (2..=b.top_heavy_n).filter(|&n| num_prime::nt_funcs::is_prime64(n as u64)) {
        let mut heavy = 0u64;
        for x in lib(all_words(n, &two))? {
            let th = lib(is_top_heavy(&x))?;
            heavy += u64::from(th);
            let constant = x.digits().iter().all(|d| *d == x.digits()[0]);
            if constant {
                continue;
            }
            let rotations: Vec<usize> = (0..n)
                .map(|i| lib(is_top_heavy(&rotate(&x, i))).map(|t| (i, t)))
                .collect::<std::result::Result<Vec<_>, _>>()?
                .into_iter()
                .filter(|(_, t)| *t)
                .map(|(i, _)| i)
                .collect();
            if rotations != vec![lib(top_heavy_rotation(&x))?] {
                return fail(format!("x={x}: top-heavy rotations {rotations:?}"));
            }
        }
        let count = lib(count_top_heavy(n))?;
        let necklaces = lib(crate::counting::total_necklaces(n, &two))?;
        if count != big(heavy) || count != necklaces {
            return fail(format!("n={n}: count {count}, enumerated {heavy}, necklaces {necklaces}"));
        }
        primes.push(n);
    }
    Ok(format!("prime lengths {primes:?}"))
}

type Check = (u32, &'static str, fn(&Bounds) -> CheckResult);

/// Every check, numbered as in the acceptance list (5 and 9 are timing
/// checks run elsewhere).
pub const CHECKS: [Check; 7] = [
    (1, "necklace indexing bijection", necklace_bijection),
    (2, "Lyndon indexing bijection", lyndon_bijection),
    (3, "counting identities", counting_identities),
    (4, "encoded and direct pipelines", encoded_matches_direct),
    (6, "irreducible indexing", irreducible_bijection),
    (7, "BCH matrices", bch_properties),
    (8, "top-heavy rotations", top_heavy_checks),
];

/// Runs one check, catching panics so a single failure cannot hide the rest.
pub fn run(id: u32, b: &Bounds) -> Option<Outcome> {
    let &(id, name, f) = CHECKS.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let result = std::panic::catch_unwind(|| f(b)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    Some(Outcome { id, name, result, seconds: start.elapsed().as_secs_f64() })
}

pub fn run_all(b: &Bounds) -> Vec<Outcome> {
    CHECKS.iter().filter_map(|c| run(c.0, b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_suite_passes() {
        for o in run_all(&Bounds::reduced(5)) {
            assert!(o.result.is_ok(), "check {} ({}) failed: {:?}", o.id, o.name, o.result);
        }
    }
}
