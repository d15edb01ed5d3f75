//! Indexing monic irreducible polynomials of degree `n` over `F_q` through
//! Lyndon words: the `i`-th Lyndon word `σ` is read as the base-`q` integer
//! `a`, and the output is the minimal polynomial of `g^a` for the primitive
//! root `g` supplied as advice.
//!
//! For `n >= 2` the order follows Lyndon words, not polynomial coefficients.
//! For `n = 1` index 1 is `T` and index `i >= 2` is `T - g^{i-2}`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::counting::Counter;
use crate::error::{Error, Result};
use crate::finite_field::{FqPoly, FqnCtx};
use crate::indexing::{Indexer, Lookup};

/// `|I_{q,n}|`.
pub fn count_irreducible(q: &BigUint, n: usize) -> Result<BigUint> {
    count_irreducible_with(&Counter::default(), q, n)
}

pub fn count_irreducible_with(counter: &Counter, q: &BigUint, n: usize) -> Result<BigUint> {
    match n {
        0 => Err(Error::EmptyWord),
        1 => Ok(q.clone()),
        // The all-(q-1) word is periodic, so every Lyndon word is a residue.
        _ => counter.total_aperiodic(n, q),
    }
}

/// The `i`-th (1-based) monic irreducible polynomial of degree `ctx.n()`.
pub fn index_irreducible(ctx: &FqnCtx, i: &BigUint) -> Result<Lookup<FqPoly>> {
    index_irreducible_with(&Indexer::default(), ctx, i)
}

pub fn index_irreducible_with(indexer: &Indexer, ctx: &FqnCtx, i: &BigUint) -> Result<Lookup<FqPoly>> {
    if !ctx.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    if i.is_zero() {
        return Err(Error::ZeroIndex);
    }
    let base = ctx.base();
    let q = base.q();
    let n = ctx.n();
    if n == 1 {
        if i > q {
            return Ok(Lookup::TooLarge);
        }
        if i.is_one() {
            return Ok(Lookup::Found(base.x()));
        }
        let root = ctx.to_base(&ctx.gen_pow(&(i - 2u32)))?;
        return Ok(Lookup::Found(FqPoly::from_coeffs(vec![base.neg(&root), base.one()])));
    }
    let sigma = match indexer.index_lyndon(n, q, i)? {
        Lookup::Found(s) => s,
        Lookup::TooLarge => return Ok(Lookup::TooLarge),
    };
    let a = sigma.value();
    assert!(a < ctx.order(), "the all-(q-1) word is periodic and never a Lyndon word for n >= 2");
    let alpha = ctx.gen_pow(&a);
    Ok(Lookup::Found(ctx.minimal_polynomial(&alpha)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::{find_primitive_polynomial, is_irreducible, FqCtx};
    use crate::oracle::{brute_irreducibles, factorize};
    use std::collections::BTreeSet;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn ctx(p: u64, n: usize, seed: u64) -> FqnCtx {
        let base = FqCtx::prime(big(p)).unwrap();
        let order = base.q().pow(n as u32) - 1u32;
        find_primitive_polynomial(&base, n, &factorize(&order).unwrap(), seed).unwrap()
    }

    fn all(ctx: &FqnCtx) -> Vec<FqPoly> {
        let count = count_irreducible(ctx.base().q(), ctx.n()).unwrap();
        let mut out = Vec::new();
        let mut i = BigUint::one();
        while i <= count {
            out.push(index_irreducible(ctx, &i).unwrap().found().unwrap());
            i += 1u32;
        }
        assert_eq!(index_irreducible(ctx, &i).unwrap(), Lookup::TooLarge);
        out
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_irreducible(&big(2), 3).unwrap(), big(2));
        assert_eq!(count_irreducible(&big(2), 1).unwrap(), big(2));
        assert_eq!(count_irreducible(&big(3), 2).unwrap(), big(3));
    }

    #[test]
    fn index_examples() {
        let c = ctx(2, 2, 1);
        let b = c.base();
        assert_eq!(b.pretty_poly(&index_irreducible(&c, &big(1)).unwrap().found().unwrap()), "T^2 + T + 1");
        let c1 = ctx(2, 1, 1);
        let got: Vec<String> = all(&c1).iter().map(|f| b.pretty_poly(f)).collect();
        assert_eq!(got, vec!["T", "T + 1"]);
        let c3 = ctx(2, 3, 1);
        let got: BTreeSet<String> = all(&c3).iter().map(|f| b.pretty_poly(f)).collect();
        assert_eq!(got, BTreeSet::from(["T^3 + T + 1".to_string(), "T^3 + T^2 + 1".to_string()]));
        assert_eq!(index_irreducible(&c3, &big(0)), Err(Error::ZeroIndex));
        let plain = FqnCtx::new(b.clone(), c3.modulus().clone()).unwrap();
        assert_eq!(index_irreducible(&plain, &big(1)), Err(Error::NotPrimitive));
    }

    #[test]
    fn bijection_with_brute_force() {
        for (p, max_n) in [(2u64, 6usize), (3, 4), (5, 3)] {
            for n in 1..=max_n {
                let c = ctx(p, n, 7);
                let got = all(&c);
                for f in &got {
                    assert!(is_irreducible(c.base(), f));
                    assert_eq!(f.degree(), Some(n));
                    assert_eq!(f.leading(), Some(&c.base().one()));
                }
                let set: BTreeSet<FqPoly> = got.iter().cloned().collect();
                assert_eq!(set.len(), got.len(), "repeat for p={p} n={n}");
                let brute: BTreeSet<FqPoly> = brute_irreducibles(c.base(), n).unwrap().into_iter().collect();
                assert_eq!(set, brute, "p={p} n={n}");
            }
        }
    }

    #[test]
    fn output_set_does_not_depend_on_advice() {
        for n in [3usize, 4] {
            let a = ctx(2, n, 1);
            let mut b = ctx(2, n, 2);
            let mut seed = 3;
            while b.modulus() == a.modulus() {
                b = ctx(2, n, seed);
                seed += 1;
            }
            let sa: BTreeSet<FqPoly> = all(&a).into_iter().collect();
            let sb: BTreeSet<FqPoly> = all(&b).into_iter().collect();
            assert_eq!(sa, sb);
        }
    }
}
