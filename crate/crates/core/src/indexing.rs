//! Ranking and unranking necklaces and Lyndon words in lexicographic order
//! of their least representatives.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::counting::Counter;
use crate::error::{Error, Result};
use crate::strings::{fundamental_period, min_rotation, NkString};

/// Result of an unranking query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lookup<T> {
    Found(T),
    /// The index exceeds the size of the set.
    TooLarge,
}

impl<T> Lookup<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Lookup::Found(v) => Some(v),
            Lookup::TooLarge => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankResult {
    /// 1-based rank.
    pub rank: BigUint,
    /// Least representative of the orbit.
    pub canonical: NkString,
}

/// Binary-search indexer with an instrumented probe counter.
#[derive(Debug, Default)]
pub struct Indexer {
    counter: Counter,
    probes: AtomicU64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Family {
    Necklace,
    Lyndon,
}

impl Indexer {
    pub fn new(counter: Counter) -> Self {
        Indexer { counter, probes: AtomicU64::new(0) }
    }

    /// Number of orbit-count evaluations since construction or the last reset.
    pub fn probes(&self) -> u64 {
        self.probes.load(Ordering::Relaxed)
    }

    pub fn reset_probes(&self) {
        self.probes.store(0, Ordering::Relaxed);
    }

    fn probe(&self, x: &NkString, family: Family) -> Result<BigUint> {
        self.probes.fetch_add(1, Ordering::Relaxed);
        match family {
            Family::Necklace => self.counter.count_classes_less(x),
            Family::Lyndon => self.counter.count_classes_less_aperiodic(x),
        }
    }

    fn total(&self, n: usize, q: &BigUint, family: Family) -> Result<BigUint> {
        let top = NkString::max_word(n, q)?;
        let below = self.probe(&top, family)?;
        // The top word is its own orbit; it is aperiodic only when n = 1.
        Ok(if family == Family::Necklace || n == 1 { below + 1u32 } else { below })
    }

    fn unrank(&self, n: usize, q: &BigUint, j: &BigUint, family: Family) -> Result<Lookup<NkString>> {
        if n == 0 {
            return Err(Error::EmptyWord);
        }
        if j.is_zero() {
            return Err(Error::ZeroIndex);
        }
        if *j > self.total(n, q, family)? {
            return Ok(Lookup::TooLarge);
        }
        // Largest word value whose orbit count stays below j.
        let mut lo = BigUint::zero();
        let mut hi = q.pow(n as u32) - 1u32;
        while lo < hi {
            let mid: BigUint = (&lo + &hi + 1u32) >> 1u32;
            let x = NkString::from_value(&mid, n, q)?;
            if self.probe(&x, family)? < *j {
                lo = mid;
            } else {
                hi = mid - 1u32;
            }
        }
        Ok(Lookup::Found(NkString::from_value(&lo, n, q)?))
    }

    /// The `j`-th necklace (1-based) as its least representative.
    pub fn index_necklace(&self, n: usize, q: &BigUint, j: &BigUint) -> Result<Lookup<NkString>> {
        self.unrank(n, q, j, Family::Necklace)
    }

    /// The `j`-th Lyndon word (1-based).
    pub fn index_lyndon(&self, n: usize, q: &BigUint, j: &BigUint) -> Result<Lookup<NkString>> {
        self.unrank(n, q, j, Family::Lyndon)
    }

    pub fn reverse_index_necklace(&self, x: &NkString) -> Result<RankResult> {
        let (canonical, _) = min_rotation(x);
        let rank = self.probe(&canonical, Family::Necklace)? + BigUint::one();
        Ok(RankResult { rank, canonical })
    }

    pub fn reverse_index_lyndon(&self, x: &NkString) -> Result<RankResult> {
        if fundamental_period(x) != x.n() {
            return Err(Error::NotAperiodic);
        }
        let (canonical, _) = min_rotation(x);
        let rank = self.probe(&canonical, Family::Lyndon)? + BigUint::one();
        Ok(RankResult { rank, canonical })
    }
}

pub fn index_necklace(n: usize, q: &BigUint, j: &BigUint) -> Result<Lookup<NkString>> {
    Indexer::default().index_necklace(n, q, j)
}

pub fn index_lyndon(n: usize, q: &BigUint, j: &BigUint) -> Result<Lookup<NkString>> {
    Indexer::default().index_lyndon(n, q, j)
}

pub fn reverse_index_necklace(x: &NkString) -> Result<RankResult> {
    Indexer::default().reverse_index_necklace(x)
}

pub fn reverse_index_lyndon(x: &NkString) -> Result<RankResult> {
    Indexer::default().reverse_index_lyndon(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn neck(n: usize, q: u64, j: u64) -> Option<String> {
        index_necklace(n, &big(q), &big(j)).unwrap().found().map(|x| x.to_string())
    }

    fn lyn(n: usize, q: u64, j: u64) -> Option<String> {
        index_lyndon(n, &big(q), &big(j)).unwrap().found().map(|x| x.to_string())
    }

    #[test]
    fn necklace_examples() {
        let got: Vec<_> = (1..=5).map(|j| neck(3, 2, j)).collect();
        assert_eq!(got, vec![Some("000".into()), Some("001".into()), Some("011".into()), Some("111".into()), None]);
        for j in 1..=7 {
            assert_eq!(neck(1, 7, j), Some((j - 1).to_string()));
        }
        assert_eq!(neck(1, 7, 8), None);
        assert_eq!(neck(4, 2, 4), Some("0101".into()));
        assert_eq!(index_necklace(3, &big(2), &big(0)), Err(Error::ZeroIndex));
    }

    #[test]
    fn lyndon_examples() {
        assert_eq!(lyn(3, 2, 1), Some("001".into()));
        assert_eq!(lyn(3, 2, 2), Some("011".into()));
        assert_eq!(lyn(3, 2, 3), None);
        assert_eq!(lyn(2, 3, 1), Some("01".into()));
        assert_eq!(lyn(2, 3, 2), Some("02".into()));
        assert_eq!(lyn(2, 3, 3), Some("12".into()));
        assert_eq!(lyn(2, 3, 4), None);
    }

    #[test]
    fn reverse_examples() {
        let q = big(2);
        let r = reverse_index_necklace(&NkString::parse("110", &q).unwrap()).unwrap();
        assert_eq!((r.rank, r.canonical.to_string()), (big(3), "011".to_string()));
        assert_eq!(reverse_index_necklace(&NkString::parse("000", &q).unwrap()).unwrap().rank, big(1));
        assert_eq!(reverse_index_necklace(&NkString::parse("1111", &q).unwrap()).unwrap().rank, big(6));
        let r = reverse_index_lyndon(&NkString::parse("10", &q).unwrap()).unwrap();
        assert_eq!((r.rank, r.canonical.to_string()), (big(1), "01".to_string()));
        assert_eq!(
            reverse_index_lyndon(&NkString::parse("0101", &q).unwrap()),
            Err(Error::NotAperiodic)
        );
    }

    #[test]
    fn probe_budget() {
        for (n, q) in [(10usize, 2u64), (5, 3), (4, 5), (3, 11)] {
            let ix = Indexer::default();
            let total = ix.index_necklace(n, &big(q), &big(1)).map(|_| ()).and(Ok(()));
            total.unwrap();
            let bits = (64 - (q - 1).leading_zeros()) as u64;
            let budget = n as u64 * bits + 2;
            assert!(ix.probes() <= budget, "n={n} q={q} probes={}", ix.probes());
        }
    }
}
