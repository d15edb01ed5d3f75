//! Counting `|G_{x,<=p}|`, `|G_{x,p}|`, `|C_x|` and total orbit counts.
//!
//! `G_{x,<=p}` is the set of words whose orbit size divides `p` and whose
//! orbit contains a word strictly below `x`; `G_{x,p}` restricts the orbit
//! size to exactly `p`, and `C_x` is the set of such orbits.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::branching_program::{
    build_alphabet_restriction, build_direct_rotation_witness, build_intersection,
    build_rotation_witness, count_machine, fused_direct, fused_encoded, BranchingProgram,
};
use crate::error::{Error, Result};
use crate::strings::{bin_encode, fundamental_period, is_min_rotation, NkString};

/// Alphabets up to this size use the direct q-ary program under `Auto`.
pub const AUTO_DIRECT_LIMIT: u32 = 16;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Pipeline {
    #[default]
    Auto,
    /// One program layer per symbol, alphabet of size `q`.
    Direct,
    /// Binary encoding with block-aligned witnesses, intersected with `A_0`.
    Encoded,
}

/// Counting configuration: which program construction to use, whether to
/// prune programs before counting, and whether to count through the literal
/// product construction (union of the contiguous and wraparound programs,
/// intersected with the block restriction) instead of the fused machine.
#[derive(Clone, Copy, Debug, Default)]
pub struct Counter {
    pipeline: Pipeline,
    prune: bool,
    materialize: bool,
}

pub fn mobius(m: usize) -> i32 {
    assert!(m >= 1, "mobius is defined on positive integers");
    let mut m = m;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

pub fn divisors(n: usize) -> Vec<usize> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl Counter {
    pub fn new(pipeline: Pipeline) -> Self {
        Counter { pipeline, prune: false, materialize: false }
    }

    /// Count through explicitly built product programs.
    pub fn with_products(mut self, materialize: bool) -> Self {
        self.materialize = materialize;
        self
    }

    pub fn with_pruning(mut self, prune: bool) -> Self {
        self.prune = prune;
        self
    }

    pub fn pipeline(&self) -> Pipeline {
        self.pipeline
    }

    fn direct_for(&self, q: &BigUint) -> bool {
        match self.pipeline {
            Pipeline::Direct => true,
            Pipeline::Encoded => false,
            Pipeline::Auto => q.to_u32().is_some_and(|q| q <= AUTO_DIRECT_LIMIT),
        }
    }

    /// `|G_{x,<=n}|` for `n = |x|`: words with some rotation below `x`.
    fn count_full(&self, x: &NkString) -> Result<BigUint> {
        if x.is_zero_word() {
            return Ok(BigUint::zero());
        }
        let direct = self.direct_for(x.q());
        if self.materialize {
            let bp = if direct {
                build_direct_rotation_witness(x)?
            } else {
                let ex = bin_encode(x);
                let ax = build_rotation_witness(&ex, ex.block())?;
                let a0 = build_alphabet_restriction(x.n(), ex.block(), x.q())?;
                build_intersection(&ax, &a0)?
            };
            return Ok(if self.prune { bp.pruned().count_accepted() } else { bp.count_accepted() });
        }
        let (mut m, len, alphabet) = if direct {
            let (m, q) = fused_direct(x)?;
            (m, x.n(), q)
        } else {
            let (m, len) = fused_encoded(x);
            (m, len, 2)
        };
        if m.is_trivial() {
            return Ok(BigUint::zero());
        }
        if self.prune {
            let bp = BranchingProgram::from_machine(&mut m, len, alphabet).pruned();
            return Ok(bp.count_accepted());
        }
        Ok(count_machine(&mut m, len, alphabet))
    }

    /// `|G_{x,<=p}|`: words whose orbit size divides `p` and whose orbit has
    /// a member below `x`.
    pub fn count_g_leq(&self, x: &NkString, p: usize) -> Result<BigUint> {
        let n = x.n();
        if p == 0 || n % p != 0 {
            return Err(Error::NotADivisor { p, n });
        }
        if x.is_zero_word() {
            return Ok(BigUint::zero());
        }
        if p == n {
            return self.count_full(x);
        }
        let blocks: Vec<&[BigUint]> = x.digits().chunks(p).collect();
        let x1 = x.with_digits(blocks[0].to_vec());
        let m = self.count_full(&x1)?;
        // Powers of a rotation of x1 are below x iff the first block that
        // differs from x1 exceeds it; they are new iff x1 is canonical.
        let extra = blocks
            .iter()
            .skip(1)
            .find(|b| **b != blocks[0])
            .is_some_and(|b| blocks[0] < *b)
            && is_min_rotation(&x1);
        Ok(if extra { m + fundamental_period(&x1) } else { m })
    }

    /// `|G_{x,p}|` by Möbius inversion over the divisors of `p`.
    pub fn count_g_exact(&self, x: &NkString, p: usize) -> Result<BigUint> {
        let n = x.n();
        if p == 0 || n % p != 0 {
            return Err(Error::NotADivisor { p, n });
        }
        let leq: Vec<(usize, BigUint)> = divisors(p)
            .into_iter()
            .map(|d| self.count_g_leq(x, d).map(|c| (d, c)))
            .collect::<Result<_>>()?;
        Ok(mobius_combine(&leq, p))
    }

    /// `|C_x|`: orbits with at least one member below `x`.
    pub fn count_classes_less(&self, x: &NkString) -> Result<BigUint> {
        if x.is_zero_word() {
            return Ok(BigUint::zero());
        }
        let n = x.n();
        let leq: Vec<(usize, BigUint)> = divisors(n)
            .into_iter()
            .map(|d| self.count_g_leq(x, d).map(|c| (d, c)))
            .collect::<Result<_>>()?;
        let mut total = BigUint::zero();
        for &(p, _) in &leq {
            let g = mobius_combine(&leq, p);
            let (quot, rem) = g.div_rem(&BigUint::from(p));
            debug_assert!(rem.is_zero(), "orbits of size {p} partition G_(x,{p})");
            total += quot;
        }
        Ok(total)
    }

    /// Orbits of size exactly `n` with a member below `x`.
    pub fn count_classes_less_aperiodic(&self, x: &NkString) -> Result<BigUint> {
        let n = x.n();
        let g = self.count_g_exact(x, n)?;
        let (quot, rem) = g.div_rem(&BigUint::from(n));
        debug_assert!(rem.is_zero());
        Ok(quot)
    }

    pub fn total_necklaces(&self, n: usize, q: &BigUint) -> Result<BigUint> {
        let top = NkString::max_word(n, q)?;
        Ok(self.count_classes_less(&top)? + 1u32)
    }

    pub fn total_aperiodic(&self, n: usize, q: &BigUint) -> Result<BigUint> {
        let top = NkString::max_word(n, q)?;
        let below = self.count_classes_less_aperiodic(&top)?;
        Ok(if n == 1 { below + 1u32 } else { below })
    }
}

/// `sum_{d | p} mu(p/d) * leq[d]`, where `leq` covers every divisor of `p`.
fn mobius_combine(leq: &[(usize, BigUint)], p: usize) -> BigUint {
    let mut plus = BigUint::zero();
    let mut minus = BigUint::zero();
    for (d, c) in leq {
        if p % d != 0 {
            continue;
        }
        match mobius(p / d) {
            1 => plus += c,
            -1 => minus += c,
            _ => {}
        }
    }
    plus - minus
}

pub fn count_g_leq(x: &NkString, p: usize) -> Result<BigUint> {
    Counter::default().count_g_leq(x, p)
}

pub fn count_g_exact(x: &NkString, p: usize) -> Result<BigUint> {
    Counter::default().count_g_exact(x, p)
}

pub fn count_classes_less(x: &NkString) -> Result<BigUint> {
    Counter::default().count_classes_less(x)
}

pub fn count_classes_less_aperiodic(x: &NkString) -> Result<BigUint> {
    Counter::default().count_classes_less_aperiodic(x)
}

pub fn total_necklaces(n: usize, q: &BigUint) -> Result<BigUint> {
    Counter::default().total_necklaces(n, q)
}

pub fn total_aperiodic(n: usize, q: &BigUint) -> Result<BigUint> {
    Counter::default().total_aperiodic(n, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> NkString {
        NkString::parse(s, &BigUint::from(2u32)).unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn mobius_and_divisors() {
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(7), -1);
        assert_eq!(mobius(6), 1);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(16), vec![1, 2, 4, 8, 16]);
    }

    #[test]
    fn g_examples() {
        assert_eq!(count_g_leq(&w("10"), 2).unwrap(), big(3));
        assert_eq!(count_g_leq(&w("11"), 1).unwrap(), big(1));
        assert_eq!(count_g_leq(&w("000"), 1).unwrap(), big(0));
        assert_eq!(count_g_leq(&w("000"), 3).unwrap(), big(0));
        assert_eq!(count_g_exact(&w("10"), 2).unwrap(), big(2));
        assert_eq!(count_g_exact(&w("0000"), 2).unwrap(), big(0));
        assert_eq!(count_g_exact(&w("1111"), 4).unwrap(), big(12));
        assert_eq!(count_g_leq(&w("110"), 2), Err(Error::NotADivisor { p: 2, n: 3 }));
    }

    #[test]
    fn class_examples() {
        // 000 and 001 lie below 011.
        assert_eq!(count_classes_less(&w("011")).unwrap(), big(2));
        assert_eq!(count_classes_less(&w("000")).unwrap(), big(0));
        assert_eq!(count_classes_less(&w("111")).unwrap(), big(3));
        assert_eq!(count_classes_less_aperiodic(&w("111")).unwrap(), big(2));
        assert_eq!(count_classes_less_aperiodic(&w("000")).unwrap(), big(0));
        assert_eq!(count_classes_less_aperiodic(&w("1111")).unwrap(), big(3));
    }

    #[test]
    fn totals() {
        for q in [2u64, 3, 7, 20] {
            assert_eq!(total_necklaces(1, &big(q)).unwrap(), big(q));
            assert_eq!(total_aperiodic(1, &big(q)).unwrap(), big(q));
        }
        assert_eq!(total_necklaces(4, &big(2)).unwrap(), big(6));
        assert_eq!(total_aperiodic(3, &big(2)).unwrap(), big(2));
        assert_eq!(total_aperiodic(4, &big(2)).unwrap(), big(3));
    }

    #[test]
    fn pipelines_agree_on_small_cases() {
        let direct = Counter::new(Pipeline::Direct);
        let encoded = Counter::new(Pipeline::Encoded).with_pruning(true);
        let literal = Counter::new(Pipeline::Encoded).with_products(true);
        let literal_direct = Counter::new(Pipeline::Direct).with_products(true).with_pruning(true);
        for q in [3u64, 4, 5] {
            for n in 1..=4usize {
                let total = q.pow(n as u32);
                for v in (0..total).step_by(3) {
                    let x = NkString::from_value(&big(v), n, &big(q)).unwrap();
                    for p in divisors(n) {
                        let want = direct.count_g_leq(&x, p).unwrap();
                        assert_eq!(encoded.count_g_leq(&x, p).unwrap(), want);
                        assert_eq!(literal.count_g_leq(&x, p).unwrap(), want);
                        assert_eq!(literal_direct.count_g_leq(&x, p).unwrap(), want);
                    }
                }
            }
        }
    }
}
