use num_bigint::BigUint;
use num_traits::ToPrimitive;
use smallvec::SmallVec;

use super::witness::{PState, SState, WitnessSet};
use super::{build_union, BranchingProgram, Label, Machine, NodeKind, ACCEPT_TAG, REJECT_TAG};
use crate::error::{Error, Result};
use crate::strings::{BinWord, NkString};

/// Largest alphabet accepted by the direct q-ary construction.
pub const MAX_DIRECT_ALPHABET: u32 = 1 << 12;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum CState {
    Seen,
    Active(SState, u32),
}

struct Contiguous {
    ws: WitnessSet,
}

impl Machine for Contiguous {
    type State = CState;

    fn start(&mut self) -> CState {
        CState::Active(SState::Unflipped(0), 0)
    }

    fn step(&mut self, _layer: usize, st: &CState, sym: u32) -> CState {
        match *st {
            CState::Seen => CState::Seen,
            CState::Active(s, coord) => {
                let t = self.ws.block() as u32;
                let next = (coord + 1) % t;
                match self.ws.step_suffix(s, sym, next == 0) {
                    (_, true) => CState::Seen,
                    (s2, false) => CState::Active(s2, next),
                }
            }
        }
    }

    fn accepts(&mut self, st: &CState) -> bool {
        matches!(st, CState::Seen)
    }

    fn kind(&self, st: &CState) -> NodeKind {
        match st {
            CState::Seen => NodeKind::AcceptSink,
            CState::Active(..) => NodeKind::Normal,
        }
    }

    fn label(&self, st: &CState) -> Label {
        match *st {
            CState::Seen => SmallVec::from_slice(&[ACCEPT_TAG]),
            CState::Active(s, coord) => {
                let [a, b] = s.encode();
                SmallVec::from_slice(&[a, b, 0, coord])
            }
        }
    }
}

struct Wraparound {
    ws: WitnessSet,
}

impl Machine for Wraparound {
    type State = (SState, PState, u32);

    fn start(&mut self) -> Self::State {
        (SState::Unflipped(0), self.ws.start_prefix(), 0)
    }

    fn step(&mut self, _layer: usize, st: &Self::State, sym: u32) -> Self::State {
        let (s, p, coord) = *st;
        let t = self.ws.block() as u32;
        let next = (coord + 1) % t;
        let (s2, _) = self.ws.step_suffix(s, sym, next == 0);
        (s2, self.ws.step_prefix(p, sym), next)
    }

    fn accepts(&mut self, st: &Self::State) -> bool {
        self.ws.wrap_accepts(st.0, st.1)
    }

    fn kind(&self, _st: &Self::State) -> NodeKind {
        NodeKind::Normal
    }

    fn label(&self, st: &Self::State) -> Label {
        let [a, b] = st.0.encode();
        let [c, d, e] = st.1.encode();
        SmallVec::from_slice(&[a, b, c, d, e, st.2])
    }
}

fn binary_symbols(x: &BinWord) -> Vec<u32> {
    x.bits().iter().map(|&b| b as u32).collect()
}

fn contiguous(x: Vec<u32>, t: usize, alphabet: u32) -> BranchingProgram {
    let n = x.len();
    let mut m = Contiguous { ws: WitnessSet::new(x, t) };
    if m.ws.is_empty_set() {
        return BranchingProgram::none_accept(n, alphabet);
    }
    BranchingProgram::from_machine(&mut m, n, alphabet)
}

fn wraparound(x: Vec<u32>, t: usize, alphabet: u32) -> BranchingProgram {
    let n = x.len();
    let mut m = Wraparound { ws: WitnessSet::new(x, t) };
    if m.ws.is_empty_set() {
        return BranchingProgram::none_accept(n, alphabet);
    }
    BranchingProgram::from_machine(&mut m, n, alphabet)
}

/// `B_x^c`: binary words of length `|x|` containing a member of `L_x` as a
/// contiguous substring.
pub fn build_contiguous(x: &BinWord) -> BranchingProgram {
    contiguous(binary_symbols(x), 1, 2)
}

/// `B_x^w`: binary words `z` with a nonempty suffix `u` and nonempty prefix
/// `v` such that `u·v ∈ L_x`.
pub fn build_wraparound(x: &BinWord) -> BranchingProgram {
    wraparound(binary_symbols(x), 1, 2)
}

/// `A_x`: binary words `y` of length `|x|` with some block-aligned rotation
/// `Rot^{it}(y) < x`.
pub fn build_rotation_witness(x: &BinWord, t: usize) -> Result<BranchingProgram> {
    if t == 0 || x.len() % t != 0 {
        return Err(Error::RaggedBits { len: x.len(), block: t });
    }
    let sym = binary_symbols(x);
    build_union(&contiguous(sym.clone(), t, 2), &wraparound(sym, t, 2))
}

/// The rotation-witness program built directly over the `q`-ary alphabet.
pub fn build_direct_rotation_witness(x: &NkString) -> Result<BranchingProgram> {
    let q = x
        .q()
        .to_u32()
        .filter(|&q| q <= MAX_DIRECT_ALPHABET)
        .ok_or_else(|| Error::AlphabetTooLarge(x.q().to_string()))?;
    let sym = x.small_digits().expect("digits are below q");
    build_union(&contiguous(sym.clone(), 1, q), &wraparound(sym, 1, q))
}

/// Union of the block-aligned contiguous and wraparound programs, optionally
/// intersected with the block restriction `A_0`, as one machine. States where
/// the contiguous program has already seen a witness are merged, so the
/// wraparound component never materialises its unreachable pairs.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum FState {
    Reject,
    Seen { coord: u32, tight: bool },
    Live { s: SState, p: PState, coord: u32, tight: bool },
}

pub(crate) struct Fused {
    ws: WitnessSet,
    /// Bits of `q - 1` when blocks must stay below `q`.
    top: Option<Vec<u8>>,
}

impl Fused {
    fn advance(&self, coord: u32, tight: bool, sym: u32) -> Option<(u32, bool)> {
        let t = self.ws.block() as u32;
        let next = (coord + 1) % t;
        match &self.top {
            None => Some((next, false)),
            Some(top) => {
                let bound = top[coord as usize] as u32;
                if tight && sym > bound {
                    None
                } else {
                    Some((next, next == 0 || (tight && sym == bound)))
                }
            }
        }
    }
}

impl Machine for Fused {
    type State = FState;

    fn start(&mut self) -> FState {
        let tight = self.top.is_some();
        FState::Live { s: SState::Unflipped(0), p: self.ws.start_prefix(), coord: 0, tight }
    }

    fn step(&mut self, _layer: usize, st: &FState, sym: u32) -> FState {
        match *st {
            FState::Reject => FState::Reject,
            FState::Seen { coord, tight } => match self.advance(coord, tight, sym) {
                None => FState::Reject,
                Some((coord, tight)) => FState::Seen { coord, tight },
            },
            FState::Live { s, p, coord, tight } => match self.advance(coord, tight, sym) {
                None => FState::Reject,
                Some((next, tight)) => match self.ws.step_suffix(s, sym, next == 0) {
                    (_, true) => FState::Seen { coord: next, tight },
                    (s, false) => FState::Live { s, p: self.ws.step_prefix(p, sym), coord: next, tight },
                },
            },
        }
    }

    fn accepts(&mut self, st: &FState) -> bool {
        match *st {
            FState::Reject => false,
            FState::Seen { .. } => true,
            FState::Live { s, p, .. } => self.ws.wrap_accepts(s, p),
        }
    }

    fn kind(&self, st: &FState) -> NodeKind {
        match st {
            FState::Reject => NodeKind::RejectSink,
            FState::Seen { .. } if self.top.is_none() => NodeKind::AcceptSink,
            _ => NodeKind::Normal,
        }
    }

    fn label(&self, st: &FState) -> Label {
        match *st {
            FState::Reject => SmallVec::from_slice(&[REJECT_TAG]),
            FState::Seen { coord, tight } => SmallVec::from_slice(&[ACCEPT_TAG, coord, tight as u32]),
            FState::Live { s, p, coord, tight } => {
                let [a, b] = s.encode();
                let [c, d, e] = p.encode();
                SmallVec::from_slice(&[a, b, c, d, e, coord, tight as u32])
            }
        }
    }
}

fn restriction_bits(q: &BigUint, t: usize) -> Option<Vec<u8>> {
    let m: BigUint = q - 1u32;
    let top: Vec<u8> = (0..t).rev().map(|k| m.bit(k as u64) as u8).collect();
    if top.iter().all(|&b| b == 1) { None } else { Some(top) }
}

/// Fused machine for words below `x`, read through the binary encoding.
pub(crate) fn fused_encoded(x: &NkString) -> (Fused, usize) {
    let ex = crate::strings::bin_encode(x);
    let t = ex.block();
    let len = ex.len();
    let top = restriction_bits(x.q(), t);
    (Fused { ws: WitnessSet::new(binary_symbols(&ex), t), top }, len)
}

/// Fused machine for words below `x`, read one `q`-ary symbol per layer.
pub(crate) fn fused_direct(x: &NkString) -> Result<(Fused, u32)> {
    let q = x
        .q()
        .to_u32()
        .filter(|&q| q <= MAX_DIRECT_ALPHABET)
        .ok_or_else(|| Error::AlphabetTooLarge(x.q().to_string()))?;
    let sym = x.small_digits().expect("digits are below q");
    Ok((Fused { ws: WitnessSet::new(sym, 1), top: None }, q))
}

/// `A_x ∩ A_0` as a single program (same accepted set as the product of
/// `build_rotation_witness` and `build_alphabet_restriction`).
pub fn build_encoded_counting_program(x: &NkString) -> BranchingProgram {
    let (mut m, len) = fused_encoded(x);
    if m.ws.is_empty_set() {
        return BranchingProgram::none_accept(len, 2);
    }
    BranchingProgram::from_machine(&mut m, len, 2)
}

impl Fused {
    pub(crate) fn is_trivial(&self) -> bool {
        self.ws.is_empty_set()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum RState {
    Reject,
    /// Position inside the block and whether the block read so far equals
    /// the same-length prefix of `q - 1`.
    Block(u32, bool),
}

struct Restriction {
    top: Vec<u8>,
}

impl Machine for Restriction {
    type State = RState;

    fn start(&mut self) -> RState {
        RState::Block(0, true)
    }

    fn step(&mut self, _layer: usize, st: &RState, sym: u32) -> RState {
        match *st {
            RState::Reject => RState::Reject,
            RState::Block(r, tight) => {
                let t = self.top.len() as u32;
                let bound = self.top[r as usize] as u32;
                let still_tight = tight && sym == bound;
                if tight && sym > bound {
                    RState::Reject
                } else if r + 1 == t {
                    RState::Block(0, true)
                } else {
                    RState::Block(r + 1, still_tight)
                }
            }
        }
    }

    fn accepts(&mut self, st: &RState) -> bool {
        *st != RState::Reject
    }

    fn kind(&self, st: &RState) -> NodeKind {
        match st {
            RState::Reject => NodeKind::RejectSink,
            RState::Block(..) => NodeKind::Normal,
        }
    }

    fn label(&self, st: &RState) -> Label {
        match *st {
            RState::Reject => SmallVec::from_slice(&[REJECT_TAG]),
            RState::Block(r, tight) => SmallVec::from_slice(&[r, tight as u32]),
        }
    }
}

/// `A_0`: binary words of length `t·n` whose aligned `t`-bit blocks are all
/// below `q`.
pub fn build_alphabet_restriction(n: usize, t: usize, q: &BigUint) -> Result<BranchingProgram> {
    if *q < BigUint::from(2u32) {
        return Err(Error::AlphabetTooSmall);
    }
    if t != crate::strings::block_width(q) {
        return Err(Error::RaggedBits { len: n * t, block: t });
    }
    match restriction_bits(q, t) {
        None => Ok(BranchingProgram::all_accept(n * t, 2)),
        Some(top) => Ok(BranchingProgram::from_machine(&mut Restriction { top }, n * t, 2)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strings::{bin_encode, orbit_less_than};

    fn bits_of(v: u32, n: usize) -> Vec<u32> {
        (0..n).map(|i| (v >> (n - 1 - i)) & 1).collect()
    }

    fn bw(bits: &[u32]) -> BinWord {
        BinWord::new(bits.iter().map(|&b| b as u8).collect(), 1).unwrap()
    }

    fn has_rotation_below(y: &[u32], x: &[u32]) -> bool {
        let n = y.len();
        (0..n).any(|i| y[i..].iter().chain(&y[..i]).cmp(x.iter()).is_lt())
    }

    fn lx_member(w: &[u32], x: &[u32]) -> bool {
        let Some((&c, s)) = w.split_last() else { return false };
        w.len() <= x.len() && s == &x[..s.len()] && c < x[s.len()]
    }

    fn contiguous_brute(z: &[u32], x: &[u32]) -> bool {
        let n = z.len();
        (0..n).any(|i| (i + 1..=n).any(|j| lx_member(&z[i..j], x)))
    }

    fn wrap_brute(z: &[u32], x: &[u32]) -> bool {
        let n = z.len();
        (1..n).any(|i| {
            (1..=n).any(|j| {
                let mut w = z[i..].to_vec();
                w.extend_from_slice(&z[..j.min(i)]);
                lx_member(&w, x)
            })
        })
    }

    #[test]
    fn examples() {
        let x10 = BinWord::parse("10").unwrap();
        let u = build_union(&build_contiguous(&x10), &build_wraparound(&x10)).unwrap();
        assert_eq!(u.count_accepted(), BigUint::from(3u32));
        assert_eq!(build_contiguous(&x10).count_accepted(), BigUint::from(3u32));
        assert!(!build_wraparound(&x10).accepts(&[0, 1]));
        // L_100 = {"0"}: only the contiguous program sees 001.
        assert!(!build_wraparound(&BinWord::parse("100").unwrap()).accepts(&[0, 0, 1]));
        assert!(build_wraparound(&BinWord::parse("110").unwrap()).accepts(&[0, 0, 1]));
        assert!(build_contiguous(&BinWord::parse("110").unwrap()).accepts(&[0, 1, 1]));
        let zero = BinWord::parse("000").unwrap();
        assert_eq!(build_contiguous(&zero).count_accepted(), BigUint::from(0u32));
        assert_eq!(build_wraparound(&zero).count_accepted(), BigUint::from(0u32));
    }

    #[test]
    fn counterexample_to_prefix_only_tracking() {
        // Rotation 00101 < 00110 splits as "0" + "010", and "010" is a factor
        // but not a prefix of a member of L_x.
        let x = [0, 0, 1, 1, 0];
        let y = [0, 1, 0, 1, 0];
        assert!(has_rotation_below(&y, &x));
        let u = build_rotation_witness(&bw(&x), 1).unwrap();
        assert!(u.accepts(&y));
    }

    #[test]
    fn components_match_their_definitions() {
        for n in 1..=9usize {
            for xv in 0..1u32 << n {
                let x = bits_of(xv, n);
                let c = build_contiguous(&bw(&x));
                let w = build_wraparound(&bw(&x));
                assert!(c.check_well_formed() && w.check_well_formed());
                for zv in 0..1u32 << n {
                    let z = bits_of(zv, n);
                    assert_eq!(c.accepts(&z), contiguous_brute(&z, &x), "c x={x:?} z={z:?}");
                    assert_eq!(w.accepts(&z), wrap_brute(&z, &x), "w x={x:?} z={z:?}");
                }
            }
        }
    }

    #[test]
    fn union_equals_rotation_test_exhaustively() {
        for n in 1..=12usize {
            for xv in 0..1u32 << n {
                let x = bits_of(xv, n);
                let bp = build_rotation_witness(&bw(&x), 1).unwrap();
                let brute = (0..1u32 << n).filter(|&zv| has_rotation_below(&bits_of(zv, n), &x)).count();
                assert_eq!(bp.count_accepted(), BigUint::from(brute), "x={x:?}");
                assert_eq!(bp.pruned().count_accepted(), BigUint::from(brute));
            }
        }
    }

    #[test]
    fn union_accepts_exactly_rotation_witnesses() {
        for n in 1..=8usize {
            for xv in 0..1u32 << n {
                let x = bits_of(xv, n);
                let bp = build_rotation_witness(&bw(&x), 1).unwrap();
                for zv in 0..1u32 << n {
                    let z = bits_of(zv, n);
                    assert_eq!(bp.accepts(&z), has_rotation_below(&z, &x), "x={x:?} z={z:?}");
                }
            }
        }
    }

    #[test]
    fn restriction_examples() {
        let cases = [(4u32, 2usize, 2usize, 16u32), (3, 2, 1, 3), (5, 3, 2, 25), (6, 3, 2, 36), (7, 3, 3, 343)];
        for (q, t, n, want) in cases {
            let bp = build_alphabet_restriction(n, t, &BigUint::from(q)).unwrap();
            assert_eq!(bp.count_accepted(), BigUint::from(want));
        }
        let bp = build_alphabet_restriction(1, 2, &BigUint::from(3u32)).unwrap();
        let accepted: Vec<_> = (0..4).filter(|&v| bp.accepts(&bits_of(v, 2))).collect();
        assert_eq!(accepted, vec![0, 1, 2]);
    }

    fn words(n: usize, q: u64) -> Vec<NkString> {
        let total = q.pow(n as u32);
        (0..total)
            .map(|v| NkString::from_value(&BigUint::from(v), n, &BigUint::from(q)).unwrap())
            .collect()
    }

    #[test]
    fn aligned_witness_matches_rotations_within_gamma() {
        for q in [3u64, 5, 6, 7] {
            for n in 1..=3usize {
                let all = words(n, q);
                for x in &all {
                    let ex = bin_encode(x);
                    let t = ex.block();
                    let ax = build_rotation_witness(&ex, t).unwrap();
                    let a0 = build_alphabet_restriction(n, t, x.q()).unwrap();
                    let both = super::super::build_intersection(&ax, &a0).unwrap();
                    let brute = all.iter().filter(|y| orbit_less_than(y, x)).count();
                    assert_eq!(both.count_accepted(), BigUint::from(brute), "q={q} x={x}");
                    for y in &all {
                        let ey: Vec<u32> = bin_encode(y).bits().iter().map(|&b| b as u32).collect();
                        assert_eq!(ax.accepts(&ey), orbit_less_than(y, x), "q={q} x={x} y={y}");
                    }
                }
            }
        }
    }

    #[test]
    fn spec_example_q3() {
        let x = NkString::from_small(3, &[1, 2]).unwrap();
        let ex = bin_encode(&x);
        assert_eq!(ex.to_string(), "0110");
        let ax = build_rotation_witness(&ex, 2).unwrap();
        let a0 = build_alphabet_restriction(2, 2, x.q()).unwrap();
        let both = super::super::build_intersection(&ax, &a0).unwrap();
        // Everything except 12, 21 and 22.
        assert_eq!(both.count_accepted(), BigUint::from(6u32));
        assert_eq!(build_direct_rotation_witness(&x).unwrap().count_accepted(), BigUint::from(6u32));
    }

    #[test]
    fn direct_path_matches_rotations() {
        for q in [2u64, 3, 4, 5] {
            for n in 1..=4usize {
                let all = words(n, q);
                for x in &all {
                    let bp = build_direct_rotation_witness(x).unwrap();
                    for y in &all {
                        let sy = y.small_digits().unwrap();
                        assert_eq!(bp.accepts(&sy), orbit_less_than(y, x), "q={q} x={x} y={y}");
                    }
                }
            }
        }
    }

    #[test]
    fn node_count_ceiling() {
        for n in 1..=12usize {
            for xv in 0..1u32 << n {
                let bp = build_rotation_witness(&bw(&bits_of(xv, n)), 1).unwrap();
                assert!(bp.node_count() <= 4 * (n + 1) * (n + 1) * 4, "n={n} nodes={}", bp.node_count());
            }
        }
        for q in [3u64, 5, 9, 17] {
            for n in 1..=4usize {
                for x in words(n, q).iter().step_by(7) {
                    let ex = bin_encode(x);
                    let t = ex.block();
                    let bp = build_rotation_witness(&ex, t).unwrap();
                    let ceiling = 4 * (n + 1) * (n + 1) * (t + 1) * (t + 1);
                    assert!(bp.node_count() <= ceiling, "q={q} x={x} nodes={}", bp.node_count());
                }
            }
        }
    }

    #[test]
    fn rotation_witness_is_deterministic_and_reproducible() {
        let x = bw(&[1, 0, 1, 1, 0, 1]);
        let a = build_rotation_witness(&x, 1).unwrap();
        let b = build_rotation_witness(&x, 1).unwrap();
        assert!(a.check_well_formed());
        assert_eq!(a.to_debug_text(), b.to_debug_text());
        for layer in 0..=a.num_layers() {
            for u in 0..a.layer_width(layer) as u32 {
                assert_eq!(a.label(layer, u), b.label(layer, u));
            }
        }
    }
}
