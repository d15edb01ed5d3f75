//! Words over `{0, …, q-1}`: rotations, periods, canonical rotations, the
//! witness set `L_x`, and the binary block encoding of large alphabets.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A word of length `n >= 1` over the alphabet `{0, …, q-1}`, leftmost symbol first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NkString {
    q: BigUint,
    digits: Vec<BigUint>,
}

impl NkString {
    pub fn new(q: BigUint, digits: Vec<BigUint>) -> Result<Self> {
        if q < BigUint::from(2u32) {
            return Err(Error::AlphabetTooSmall);
        }
        if digits.is_empty() {
            return Err(Error::EmptyWord);
        }
        if let Some(d) = digits.iter().find(|d| **d >= q) {
            return Err(Error::InvalidDigit { symbol: d.to_string(), q: q.to_string() });
        }
        Ok(NkString { q, digits })
    }

    pub fn from_small(q: u64, digits: &[u64]) -> Result<Self> {
        Self::new(BigUint::from(q), digits.iter().map(|&d| BigUint::from(d)).collect())
    }

    /// Parses the text form: a digit string when `q <= 10`, otherwise
    /// comma-separated decimal symbols. Commas are accepted for any `q`.
    pub fn parse(text: &str, q: &BigUint) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::EmptyWord);
        }
        let digits: Vec<BigUint> = if text.contains(',') || *q > BigUint::from(10u32) {
            text.split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<BigUint>()
                        .map_err(|_| Error::Parse(format!("bad symbol {tok:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            text.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(BigUint::from)
                        .ok_or_else(|| Error::Parse(format!("bad digit {c:?}")))
                })
                .collect::<Result<_>>()?
        };
        Self::new(q.clone(), digits)
    }

    pub fn zeros(n: usize, q: &BigUint) -> Result<Self> {
        Self::new(q.clone(), vec![BigUint::zero(); n])
    }

    /// The largest word `(q-1)^n`.
    pub fn max_word(n: usize, q: &BigUint) -> Result<Self> {
        if *q < BigUint::from(2u32) {
            return Err(Error::AlphabetTooSmall);
        }
        Self::new(q.clone(), vec![q - 1u32; n])
    }

    /// The word whose base-`q` expansion (most significant first) is `value`.
    pub fn from_value(value: &BigUint, n: usize, q: &BigUint) -> Result<Self> {
        let mut digits = vec![BigUint::zero(); n];
        let mut v = value.clone();
        for slot in digits.iter_mut().rev() {
            *slot = &v % q;
            v /= q;
        }
        if !v.is_zero() {
            return Err(Error::Parse(format!("{value} does not fit in {n} base-{q} digits")));
        }
        Self::new(q.clone(), digits)
    }

    pub fn value(&self) -> BigUint {
        self.digits.iter().fold(BigUint::zero(), |acc, d| acc * &self.q + d)
    }

    pub fn n(&self) -> usize {
        self.digits.len()
    }

    pub fn q(&self) -> &BigUint {
        &self.q
    }

    pub fn digits(&self) -> &[BigUint] {
        &self.digits
    }

    /// Symbols as machine words, when they all fit.
    pub fn small_digits(&self) -> Option<Vec<u32>> {
        self.digits.iter().map(|d| d.to_u32()).collect()
    }

    pub fn is_zero_word(&self) -> bool {
        self.digits.iter().all(|d| d.is_zero())
    }

    pub fn is_binary(&self) -> bool {
        self.q == BigUint::from(2u32)
    }

    pub(crate) fn with_digits(&self, digits: Vec<BigUint>) -> Self {
        NkString { q: self.q.clone(), digits }
    }
}

impl PartialOrd for NkString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NkString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.digits.cmp(&other.digits).then_with(|| self.q.cmp(&other.q))
    }
}

impl fmt::Display for NkString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q <= BigUint::from(10u32) {
            for d in &self.digits {
                write!(f, "{d}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

/// Rightward cyclic rotation: `Rot^i(x)[k] = x[(k - i) mod n]`.
pub fn rotate(x: &NkString, i: usize) -> NkString {
    let n = x.n();
    let i = i % n;
    let mut digits = Vec::with_capacity(n);
    digits.extend_from_slice(&x.digits[n - i..]);
    digits.extend_from_slice(&x.digits[..n - i]);
    x.with_digits(digits)
}

/// Smallest `p` such that `s` is `s[..p]` repeated; always divides `s.len()`.
pub fn period_of<T: Eq>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let pi = prefix_function(s);
    let p = n - pi[n];
    if n % p == 0 { p } else { n }
}

/// `pi[len]` is the length of the longest proper border of `s[..len]`.
pub(crate) fn prefix_function<T: Eq>(s: &[T]) -> Vec<usize> {
    let n = s.len();
    let mut pi = vec![0usize; n + 1];
    let mut k = 0usize;
    for i in 1..n {
        while k > 0 && s[i] != s[k] {
            k = pi[k];
        }
        if s[i] == s[k] {
            k += 1;
        }
        pi[i + 1] = k;
    }
    pi
}

/// Booth's algorithm: start index of the lexicographically least rotation
/// (as a left rotation).
pub fn least_rotation_start<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let mut f: Vec<isize> = vec![-1; 2 * n];
    let mut k: usize = 0;
    for j in 1..2 * n {
        let sj = &s[j % n];
        let mut i = f[j - k - 1];
        while i != -1 && *sj != s[(k + i as usize + 1) % n] {
            if *sj < s[(k + i as usize + 1) % n] {
                k = j - i as usize - 1;
            }
            i = f[i as usize];
        }
        if i == -1 && *sj != s[k % n] {
            if *sj < s[k % n] {
                k = j;
            }
            f[j - k] = -1;
        } else {
            f[j - k] = i + 1;
        }
    }
    k % n
}

pub fn fundamental_period(x: &NkString) -> usize {
    period_of(&x.digits)
}

/// Least rotation of `x` and the smallest rightward shift producing it.
pub fn min_rotation(x: &NkString) -> (NkString, usize) {
    canonical_rotation(x, least_rotation_start(&x.digits))
}

/// Greatest rotation of `x` and the smallest rightward shift producing it.
pub fn max_rotation(x: &NkString) -> (NkString, usize) {
    let rev: Vec<std::cmp::Reverse<&BigUint>> = x.digits.iter().map(std::cmp::Reverse).collect();
    canonical_rotation(x, least_rotation_start(&rev))
}

fn canonical_rotation(x: &NkString, start: usize) -> (NkString, usize) {
    let n = x.n();
    let p = fundamental_period(x);
    let shift = ((n - start) % n) % p;
    (rotate(x, shift), shift)
}

/// `true` iff `x` is the least element of its orbit.
pub fn is_min_rotation(x: &NkString) -> bool {
    min_rotation(x).1 == 0
}

/// Block width `t = ceil(log2 q)` used by the binary encoding.
pub fn block_width(q: &BigUint) -> usize {
    let m: BigUint = q - 1u32;
    (m.bits() as usize).max(1)
}

/// A binary word read in aligned blocks of `block` bits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinWord {
    bits: Vec<u8>,
    block: usize,
}

impl BinWord {
    pub fn new(bits: Vec<u8>, block: usize) -> Result<Self> {
        if block == 0 || bits.len() % block != 0 {
            return Err(Error::RaggedBits { len: bits.len(), block });
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::NotBinary);
        }
        Ok(BinWord { bits, block })
    }

    /// Parses a string of `0`/`1` characters with block width 1.
    pub fn parse(text: &str) -> Result<Self> {
        let bits = text
            .chars()
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                _ => Err(Error::NotBinary),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(bits, 1)
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn block(&self) -> usize {
        self.block
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

impl fmt::Display for BinWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Each symbol becomes its `t`-bit big-endian representation.
pub fn bin_encode(x: &NkString) -> BinWord {
    let t = block_width(&x.q);
    let mut bits = Vec::with_capacity(t * x.n());
    for d in &x.digits {
        for k in (0..t).rev() {
            bits.push(d.bit(k as u64) as u8);
        }
    }
    BinWord { bits, block: t }
}

pub fn bin_decode(w: &BinWord, q: &BigUint) -> Result<NkString> {
    let t = block_width(q);
    if w.block != t || w.bits.is_empty() || w.bits.len() % t != 0 {
        return Err(Error::RaggedBits { len: w.bits.len(), block: t });
    }
    let mut digits = Vec::with_capacity(w.bits.len() / t);
    for (i, chunk) in w.bits.chunks(t).enumerate() {
        let mut v = BigUint::zero();
        for &b in chunk {
            v <<= 1u32;
            if b == 1 {
                v += BigUint::one();
            }
        }
        if v >= *q {
            return Err(Error::InvalidBlock { block: i });
        }
        digits.push(v);
    }
    NkString::new(q.clone(), digits)
}

/// `w ∈ L_x`: `w = s·0` where `s·1` is a prefix of `x`.
pub fn is_in_lx(w: &[u8], x: &[u8]) -> bool {
    let Some((&last, s)) = w.split_last() else { return false };
    last == 0 && w.len() <= x.len() && x[w.len() - 1] == 1 && s == &x[..s.len()]
}

/// `s` is a prefix of some member of `L_x`.
pub fn is_in_prefix_lx(s: &[u8], x: &[u8]) -> bool {
    let kmax = match x.iter().rposition(|&b| b == 1) {
        Some(k) => k,
        None => return false,
    };
    let m = s.len();
    if m == 0 {
        return true;
    }
    if m > x.len() {
        return false;
    }
    if m <= kmax && s == &x[..m] {
        return true;
    }
    s[m - 1] == 0 && x[m - 1] == 1 && s[..m - 1] == x[..m - 1]
}

/// Some rotation of `y` is strictly below `x` (by enumeration).
pub fn orbit_less_than(y: &NkString, x: &NkString) -> bool {
    let n = y.n();
    (0..n).any(|i| {
        let r = y.digits[i..].iter().chain(&y.digits[..i]);
        r.cmp(x.digits.iter()) == Ordering::Less
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> NkString {
        NkString::parse(s, &BigUint::from(if s.chars().any(|c| c > '1') { 10u32 } else { 2 }))
            .unwrap()
    }

    fn wq(s: &str, q: u32) -> NkString {
        NkString::parse(s, &BigUint::from(q)).unwrap()
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(rotate(&w("0011"), 1).to_string(), "1001");
        assert_eq!(rotate(&w("0011"), 0), w("0011"));
        assert_eq!(rotate(&wq("012", 3), 2).to_string(), "120");
        assert_eq!(rotate(&w("0011"), 5).to_string(), "1001");
    }

    #[test]
    fn period_examples() {
        assert_eq!(fundamental_period(&w("0101")), 2);
        assert_eq!(fundamental_period(&w("0001")), 4);
        assert_eq!(fundamental_period(&w("000")), 1);
        assert_eq!(fundamental_period(&w("01001")), 5);
        assert_eq!(fundamental_period(&w("010010")), 3);
    }

    #[test]
    fn min_rotation_examples() {
        let (r, s) = min_rotation(&w("110"));
        assert_eq!(r.to_string(), "011");
        assert_eq!(rotate(&w("110"), s), r);
        assert_eq!(min_rotation(&w("000")), (w("000"), 0));
        assert_eq!(min_rotation(&w("0101")), (w("0101"), 0));
        assert_eq!(min_rotation(&w("1010")), (w("0101"), 1));
    }

    #[test]
    fn max_rotation_examples() {
        assert_eq!(max_rotation(&w("011")).0.to_string(), "110");
        assert_eq!(max_rotation(&w("0101")), (w("1010"), 1));
        assert_eq!(max_rotation(&w("111")), (w("111"), 0));
    }

    #[test]
    fn encoding_examples() {
        assert_eq!(bin_encode(&wq("21", 3)).to_string(), "1001");
        assert_eq!(bin_encode(&wq("21", 3)).block(), 2);
        assert_eq!(bin_encode(&wq("402", 5)).to_string(), "100000010");
        let x = w("0110");
        let e = bin_encode(&x);
        assert_eq!(e.block(), 1);
        assert_eq!(e.to_string(), "0110");
        let bad = BinWord::new(vec![1, 1, 0, 0], 2).unwrap();
        assert_eq!(bin_decode(&bad, &BigUint::from(3u32)), Err(Error::InvalidBlock { block: 0 }));
    }

    #[test]
    fn witness_examples() {
        let x = BinWord::parse("101").unwrap();
        assert!(is_in_lx(&[1, 0, 0], x.bits()));
        assert!(is_in_lx(&[0], x.bits()));
        assert!(!is_in_lx(&[1, 0], x.bits()));
        let zero = [0u8, 0, 0];
        for s in [&[0u8][..], &[1, 0], &[0, 0, 0]] {
            assert!(!is_in_lx(s, &zero));
        }
        assert!(!is_in_prefix_lx(&[], &zero));
        assert!(is_in_prefix_lx(&[1], &[1, 1]));
        assert!(is_in_prefix_lx(&[], &[1, 1]));
        assert!(!is_in_prefix_lx(&[1, 1], &[1, 1]));
    }

    #[test]
    fn orbit_less_examples() {
        assert!(orbit_less_than(&w("10"), &w("10")));
        assert!(!orbit_less_than(&w("11"), &w("10")));
        assert!(orbit_less_than(&w("000"), &w("001")));
    }

    #[test]
    fn large_alphabet_text_form() {
        let q = BigUint::from(256u32);
        let x = NkString::parse("17,0,255", &q).unwrap();
        assert_eq!(x.to_string(), "17,0,255");
        assert!(NkString::parse("17,0,256", &q).is_err());
        assert_eq!(NkString::from_value(&x.value(), 3, &q).unwrap(), x);
    }

    fn all_prefixes_of_lx(x: &[u8]) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        for k in 0..x.len() {
            if x[k] == 1 {
                let mut word = x[..k].to_vec();
                word.push(0);
                for len in 0..=word.len() {
                    out.push(word[..len].to_vec());
                }
            }
        }
        out
    }

    #[test]
    fn prefix_membership_matches_enumeration() {
        for n in 1..=7usize {
            for xv in 0u32..(1 << n) {
                let x: Vec<u8> = (0..n).map(|i| ((xv >> (n - 1 - i)) & 1) as u8).collect();
                let prefixes = all_prefixes_of_lx(&x);
                for len in 0..=n {
                    for sv in 0u32..(1 << len) {
                        let s: Vec<u8> = (0..len).map(|i| ((sv >> (len - 1 - i)) & 1) as u8).collect();
                        assert_eq!(is_in_prefix_lx(&s, &x), prefixes.contains(&s), "{x:?} {s:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn witness_prefix_implies_less() {
        for n in 1..=10usize {
            for xv in 0u32..(1 << n) {
                let x: Vec<u8> = (0..n).map(|i| ((xv >> (n - 1 - i)) & 1) as u8).collect();
                for zv in 0u32..(1 << n) {
                    let z: Vec<u8> = (0..n).map(|i| ((zv >> (n - 1 - i)) & 1) as u8).collect();
                    let has = (1..=n).any(|l| is_in_lx(&z[..l], &x));
                    assert_eq!(has, z < x);
                }
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn word(max_n: usize, q: u64) -> impl Strategy<Value = NkString> {
            prop::collection::vec(0..q, 1..=max_n)
                .prop_map(move |d| NkString::from_small(q, &d).unwrap())
        }

        proptest! {
            #[test]
            fn canonical_form_is_rotation_invariant(x in word(12, 3), i in 0usize..24) {
                prop_assert_eq!(min_rotation(&rotate(&x, i)).0, min_rotation(&x).0);
            }

            #[test]
            fn min_rotation_is_least(x in word(10, 3)) {
                let (m, s) = min_rotation(&x);
                prop_assert!(s < fundamental_period(&x));
                prop_assert_eq!(rotate(&x, s), m.clone());
                for i in 0..x.n() {
                    prop_assert!(m <= rotate(&x, i));
                }
            }

            #[test]
            fn max_rotation_is_greatest(x in word(10, 3)) {
                let (m, s) = max_rotation(&x);
                prop_assert_eq!(rotate(&x, s), m.clone());
                for i in 0..x.n() {
                    prop_assert!(m >= rotate(&x, i));
                }
            }

            #[test]
            fn period_counts_distinct_rotations(x in word(12, 2)) {
                let p = fundamental_period(&x);
                prop_assert_eq!(x.n() % p, 0);
                let mut rots: Vec<NkString> = (0..x.n()).map(|i| rotate(&x, i)).collect();
                rots.sort();
                rots.dedup();
                prop_assert_eq!(rots.len(), p);
            }

            #[test]
            fn encoding_round_trips_and_keeps_order(
                q in 2u64..40,
                a in prop::collection::vec(0u64..1000, 1..6),
                b in prop::collection::vec(0u64..1000, 1..6),
            ) {
                let n = a.len().min(b.len());
                let x = NkString::from_small(q, &a[..n].iter().map(|d| d % q).collect::<Vec<_>>()).unwrap();
                let y = NkString::from_small(q, &b[..n].iter().map(|d| d % q).collect::<Vec<_>>()).unwrap();
                let (ex, ey) = (bin_encode(&x), bin_encode(&y));
                prop_assert_eq!(bin_decode(&ex, x.q()).unwrap(), x.clone());
                prop_assert_eq!(x.cmp(&y), ex.bits().cmp(ey.bits()));
            }
        }
    }
}
