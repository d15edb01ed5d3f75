//! Brute-force reference implementations, usable only at desk scale.

pub mod suite;

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::counting::{divisors, mobius};
use crate::error::{Error, Result};
use crate::finite_field::{is_irreducible, FqCtx, FqPoly};
use crate::strings::{fundamental_period, min_rotation, orbit_less_than, NkString};

/// Largest word count any oracle will enumerate.
pub const MAX_WORDS: u64 = 1 << 22;

/// All orbits of `Σ^n`, as (least representative, orbit size), ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitTable {
    pub orbits: Vec<(NkString, usize)>,
}

fn word_count(n: usize, q: &BigUint) -> Result<u64> {
    q.pow(n as u32).to_u64().filter(|&c| c <= MAX_WORDS).ok_or(Error::TooBig)
}

/// Every word of length `n` over `q` symbols, in lexicographic order.
pub fn all_words(n: usize, q: &BigUint) -> Result<Vec<NkString>> {
    let count = word_count(n, q)?;
    (0..count).map(|v| NkString::from_value(&BigUint::from(v), n, q)).collect()
}

pub fn brute_orbits(n: usize, q: &BigUint) -> Result<OrbitTable> {
    let mut reps = BTreeSet::new();
    for wd in all_words(n, q)? {
        reps.insert(min_rotation(&wd).0);
    }
    let orbits = reps
        .into_iter()
        .map(|r| {
            let p = fundamental_period(&r);
            (r, p)
        })
        .collect();
    Ok(OrbitTable { orbits })
}

/// `|C_x|` by enumerating orbits.
pub fn brute_c_x(x: &NkString) -> Result<BigUint> {
    let table = brute_orbits(x.n(), x.q())?;
    Ok(BigUint::from(table.orbits.iter().filter(|(r, _)| r < x).count()))
}

/// `|G_{x,p}|` by enumerating words.
pub fn brute_g(x: &NkString, p: usize) -> Result<BigUint> {
    brute_g_by(x, |fp| fp == p)
}

/// `|G_{x,<=p}|` by enumerating words.
pub fn brute_g_leq(x: &NkString, p: usize) -> Result<BigUint> {
    brute_g_by(x, |fp| p % fp == 0)
}

fn brute_g_by(x: &NkString, keep: impl Fn(usize) -> bool) -> Result<BigUint> {
    let words = all_words(x.n(), x.q())?;
    let c = words
        .iter()
        .filter(|y| keep(fundamental_period(y)) && orbit_less_than(y, x))
        .count();
    Ok(BigUint::from(c))
}

/// All monic irreducible polynomials of degree `n` over `F_q`, sorted by
/// coefficient vector (low degree first).
pub fn brute_irreducibles(ctx: &FqCtx, n: usize) -> Result<Vec<FqPoly>> {
    let q = ctx.q();
    let count = word_count(n, &q)?;
    let elements = ctx.all_elements();
    let mut out = Vec::new();
    for v in 0..count {
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut rest = v;
        let qq = q.to_u64().expect("word_count bounds q");
        for _ in 0..n {
            coeffs.push(elements[(rest % qq) as usize].clone());
            rest /= qq;
        }
        coeffs.push(ctx.one());
        let f = FqPoly::from_coeffs(coeffs);
        if is_irreducible(ctx, &f) {
            out.push(f);
        }
    }
    out.sort();
    Ok(out)
}

/// Prime factors of `m` with multiplicity, ascending, by trial division and
/// Pollard rho. Fails rather than return a partial factorization.
pub fn factorize(m: &BigUint) -> Result<Vec<BigUint>> {
    if m.is_zero() {
        return Err(Error::BadFactorization("0 has no factorization".into()));
    }
    if m.bits() > 160 {
        return Err(Error::TooBig);
    }
    let (found, rest) = num_prime::nt_funcs::factors(m.clone(), None);
    if rest.is_some() {
        return Err(Error::TooBig);
    }
    Ok(found.into_iter().flat_map(|(r, k)| std::iter::repeat_n(r, k)).collect())
}

/// Burnside count of necklaces and Möbius count of Lyndon words.
pub fn closed_form_counts(n: usize, q: &BigUint) -> (BigUint, BigUint) {
    let mut necklaces = BigUint::zero();
    let mut lyndon_plus = BigUint::zero();
    let mut lyndon_minus = BigUint::zero();
    for d in divisors(n) {
        necklaces += BigUint::from(euler_phi(n / d)) * q.pow(d as u32);
        let term = q.pow((n / d) as u32);
        match mobius(d) {
            1 => lyndon_plus += term,
            -1 => lyndon_minus += term,
            _ => {}
        }
    }
    let nn = BigUint::from(n);
    (necklaces / &nn, (lyndon_plus - lyndon_minus) / nn)
}

fn euler_phi(m: usize) -> usize {
    let mut result = m;
    let mut m = m;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Orbits of `Z_{q^n - 1}` under multiplication by `q`, each sorted, listed
/// by least element.
pub fn brute_cyclotomic_orbits(q: u64, n: usize) -> Result<Vec<Vec<u64>>> {
    let modulus = q.checked_pow(n as u32).filter(|&m| m <= MAX_WORDS).ok_or(Error::TooBig)? - 1;
    let mut seen = vec![false; modulus as usize];
    let mut out = Vec::new();
    for start in 0..modulus {
        if seen[start as usize] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut v = start;
        while !seen[v as usize] {
            seen[v as usize] = true;
            orbit.push(v);
            v = (v * q) % modulus;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    Ok(out)
}
