//! Top-heavy binary words: every prefix carries at least its share of the
//! word's weight. For prime `n` each non-constant orbit has exactly one
//! top-heavy member (the cycle lemma), which gives an independent count of
//! binary necklaces.
//!
//! All comparisons are done on the integer excess
//! `F(j) = n·S_j - (j+1)·wt(x)`, where `S_j` is the weight of `x[..=j]`.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::branching_program::{count_machine, Label, Machine, NodeKind};
use crate::error::{Error, Result};
use crate::strings::NkString;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopHeavyReport {
    pub is_top_heavy: bool,
    /// The rightward shift making the word top-heavy, when unique.
    pub canonical_shift: Option<usize>,
}

fn bits(x: &NkString) -> Result<Vec<i64>> {
    if !x.is_binary() {
        return Err(Error::NotBinary);
    }
    Ok(x.digits().iter().map(|d| i64::from(!d.is_zero())).collect())
}

fn require_prime(n: usize) -> Result<()> {
    if num_prime::nt_funcs::is_prime64(n as u64) {
        Ok(())
    } else {
        Err(Error::NotPrime(n.to_string()))
    }
}

/// `F(j)` for `j = 0..n`; the last entry is always zero.
pub fn excess(x: &NkString) -> Result<Vec<i64>> {
    let b = bits(x)?;
    let n = b.len() as i64;
    let wt: i64 = b.iter().sum();
    let mut s = 0;
    Ok(b.iter()
        .enumerate()
        .map(|(j, &c)| {
            s += c;
            n * s - (j as i64 + 1) * wt
        })
        .collect())
}

pub fn is_top_heavy(x: &NkString) -> Result<bool> {
    Ok(excess(x)?.iter().all(|&f| f >= 0))
}

/// The unique `i` with `rotate(x, i)` top-heavy, for prime `n` and
/// non-constant `x`. The rotation starts just after the minimum of `F`.
pub fn top_heavy_rotation(x: &NkString) -> Result<usize> {
    let f = excess(x)?;
    let n = f.len();
    require_prime(n)?;
    if x.digits().iter().all(|d| *d == x.digits()[0]) {
        return Err(Error::ConstantString);
    }
    let argmin = (0..n).min_by_key(|&j| f[j]).expect("nonempty");
    debug_assert_eq!(f.iter().filter(|&&v| v == f[argmin]).count(), 1, "minimum is unique for prime n");
    let start = (argmin + 1) % n;
    Ok((n - start) % n)
}

pub fn report(x: &NkString) -> Result<TopHeavyReport> {
    let is_top_heavy = is_top_heavy(x)?;
    let canonical_shift = match top_heavy_rotation(x) {
        Ok(i) => Some(i),
        Err(Error::NotPrime(_) | Error::ConstantString) => None,
        Err(e) => return Err(e),
    };
    Ok(TopHeavyReport { is_top_heavy, canonical_shift })
}

/// Layered DP over `(S_j, min_{j' <= j} floor(n·S_{j'} / (j'+1)))`; a word
/// is top-heavy iff its weight does not exceed the running minimum.
struct TopHeavyMachine {
    n: u32,
}

impl Machine for TopHeavyMachine {
    type State = (u32, u32);

    fn start(&mut self) -> (u32, u32) {
        (0, self.n)
    }

    fn step(&mut self, layer: usize, &(s, m): &(u32, u32), sym: u32) -> (u32, u32) {
        let s = s + sym;
        (s, m.min(self.n * s / (layer as u32 + 1)))
    }

    fn accepts(&mut self, &(s, m): &(u32, u32)) -> bool {
        s <= m
    }

    fn kind(&self, _: &(u32, u32)) -> NodeKind {
        NodeKind::Normal
    }

    fn label(&self, &(s, m): &(u32, u32)) -> Label {
        Label::from_slice(&[s, m])
    }
}

/// Number of top-heavy binary words of prime length `n`.
pub fn count_top_heavy(n: usize) -> Result<BigUint> {
    require_prime(n)?;
    Ok(count_machine(&mut TopHeavyMachine { n: n as u32 }, n, 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::total_necklaces;
    use crate::strings::rotate;
    use proptest::prelude::*;

    fn w(s: &str) -> NkString {
        NkString::parse(s, &BigUint::from(2u32)).unwrap()
    }

    fn words(n: usize) -> impl Iterator<Item = NkString> {
        (0u64..1 << n).map(move |v| NkString::from_value(&BigUint::from(v), n, &BigUint::from(2u32)).unwrap())
    }

    #[test]
    fn definition_examples() {
        assert!(is_top_heavy(&w("110")).unwrap());
        assert!(!is_top_heavy(&w("101")).unwrap());
        assert!(is_top_heavy(&w("000")).unwrap());
        let q3 = NkString::parse("102", &BigUint::from(3u32)).unwrap();
        assert_eq!(is_top_heavy(&q3), Err(Error::NotBinary));
    }

    #[test]
    fn rotation_examples() {
        for (x, want) in [("101", "110"), ("001", "100"), ("01", "10")] {
            let x = w(x);
            assert_eq!(rotate(&x, top_heavy_rotation(&x).unwrap()).to_string(), want);
        }
        assert_eq!(top_heavy_rotation(&w("111")), Err(Error::ConstantString));
        assert_eq!(top_heavy_rotation(&w("0011")), Err(Error::NotPrime("4".into())));
        assert_eq!(report(&w("1100")).unwrap(), TopHeavyReport { is_top_heavy: true, canonical_shift: None });
        assert_eq!(report(&w("011")).unwrap(), TopHeavyReport { is_top_heavy: false, canonical_shift: Some(2) });
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_top_heavy(2).unwrap(), BigUint::from(3u32));
        assert_eq!(count_top_heavy(3).unwrap(), BigUint::from(4u32));
        assert_eq!(count_top_heavy(5).unwrap(), BigUint::from(8u32));
        assert_eq!(count_top_heavy(9), Err(Error::NotPrime("9".into())));
    }

    #[test]
    fn unique_top_heavy_rotation_for_primes() {
        for n in [2usize, 3, 5, 7, 11, 13] {
            for x in words(n) {
                let constant = x.digits().iter().all(|d| *d == x.digits()[0]);
                let heavy: Vec<usize> = (0..n).filter(|&i| is_top_heavy(&rotate(&x, i)).unwrap()).collect();
                if constant {
                    assert_eq!(heavy.len(), n);
                } else {
                    assert_eq!(heavy, vec![top_heavy_rotation(&x).unwrap()], "x={x}");
                }
            }
        }
    }

    #[test]
    fn count_matches_necklaces_and_enumeration() {
        for n in [2usize, 3, 5, 7, 11, 13] {
            let brute = words(n).filter(|x| is_top_heavy(x).unwrap()).count();
            let c = count_top_heavy(n).unwrap();
            assert_eq!(c, BigUint::from(brute));
            assert_eq!(c, total_necklaces(n, &BigUint::from(2u32)).unwrap());
        }
    }

    proptest! {
        /// Rotating left to start at `j + 1` shifts the excess:
        /// `F(L^{j+1} x, l) = F(x, j + 1 + l) - F(x, j)`, indices mod `n`.
        #[test]
        fn excess_translation(v in any::<u64>(), n in 1usize..40, j in 0usize..40, l in 0usize..40) {
            let (j, l) = (j % n, l % n);
            let x = NkString::from_value(&(BigUint::from(v) % (BigUint::from(1u32) << n)), n, &BigUint::from(2u32)).unwrap();
            let shifted = rotate(&x, (n - (j + 1) % n) % n);
            let f = excess(&x).unwrap();
            prop_assert_eq!(excess(&shifted).unwrap()[l], f[(j + 1 + l) % n] - f[j]);
        }
    }
}
