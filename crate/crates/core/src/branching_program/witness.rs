//! Positional representation of the witness set `L_x` and of the factors of
//! its members, for a threshold word `X` over an alphabet of `alphabet`
//! symbols read in aligned blocks of width `t`.
//!
//! `L_x = { X[..k]·c : c < X[k] }`. A member of `Prefix(L_x)` is either an
//! unflipped prefix `X[..len]` with `len <= kmax` (the last index holding a
//! nonzero symbol) or a flipped word `X[..k]·c` with `c < X[k]`.

use std::cmp::Ordering;

type HashMap<K, V> = std::collections::HashMap<K, V, foldhash::fast::RandomState>;

/// Longest suffix of the input read so far that lies in `Prefix(L_x)` and
/// starts at an aligned coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum SState {
    None,
    Unflipped(u32),
    Flipped(u32, u32),
}

impl SState {
    pub(crate) fn encode(self) -> [u32; 2] {
        match self {
            SState::None => [0, 0],
            SState::Unflipped(len) => [1, len],
            SState::Flipped(k, c) => [2 | (c << 2), k],
        }
    }
}

/// The prefix of the input read so far, tracked while it is still a factor
/// of some member of `L_x` placed at an aligned offset, and afterwards only
/// through the set of aligned suffixes of `X` that beat it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum PState {
    /// The input is `X[rep..rep+len]`, followed by `tail` when that symbol
    /// does not continue any aligned occurrence. `rep` is the least aligned
    /// occurrence.
    Grow { rep: u32, len: u32, tail: Option<u32> },
    /// Wrap positions with rank at least the threshold beat the input.
    Frozen(u32),
}

impl PState {
    pub(crate) fn encode(self) -> [u32; 3] {
        match self {
            PState::Grow { rep, len, tail } => [1 | (tail.map_or(0, |c| c + 1) << 2), rep, len],
            PState::Frozen(r) => [2, r, 0],
        }
    }
}

pub(crate) struct WitnessSet {
    x: Vec<u32>,
    t: usize,
    kmax: Option<usize>,
    /// `af[len]`: longest proper border of `X[..len]` whose length is
    /// congruent to `len` mod `t`.
    af: Vec<Option<u32>>,
    /// Number of aligned positions `N / t`.
    na: usize,
    /// Longest common prefix of the suffixes at aligned positions `i*t`, `j*t`.
    lcp: Vec<u32>,
    /// Rank of the suffix at `i*t` among the wrap positions `t, …, N-t`.
    rank: Vec<u32>,
    s_memo: HashMap<(SState, u32, bool), (SState, bool)>,
    p_memo: HashMap<(PState, u32), PState>,
}

impl WitnessSet {
    pub(crate) fn new(x: Vec<u32>, t: usize) -> Self {
        let n = x.len();
        assert!(t >= 1 && n % t == 0, "length must be a multiple of the block width");
        let kmax = x.iter().rposition(|&c| c > 0);
        let pi = crate::strings::prefix_function(&x);
        let mut af = vec![None; n + 1];
        for len in 1..=n {
            let mut b = pi[len];
            loop {
                if b % t == len % t {
                    af[len] = Some(b as u32);
                    break;
                }
                if b == 0 {
                    break;
                }
                b = pi[b];
            }
        }
        let na = n / t;
        let mut lcp = vec![0u32; na * na];
        let mut run = vec![0u32; n + 1];
        for d in 0..na {
            let delta = d * t;
            run[n - delta] = 0;
            for a in (0..n - delta).rev() {
                run[a] = if x[a] == x[a + delta] { run[a + 1] + 1 } else { 0 };
            }
            for i in 0..na - d {
                let v = run[i * t];
                lcp[i * na + i + d] = v;
                lcp[(i + d) * na + i] = v;
            }
        }
        let mut ws = WitnessSet {
            x,
            t,
            kmax,
            af,
            na,
            lcp,
            rank: vec![0; na],
            s_memo: HashMap::default(),
            p_memo: HashMap::default(),
        };
        let mut order: Vec<usize> = (1..na).collect();
        order.sort_by(|&i, &j| ws.cmp_suffixes(i, j));
        for (r, &i) in order.iter().enumerate() {
            ws.rank[i] = r as u32;
        }
        ws
    }

    pub(crate) fn block(&self) -> usize {
        self.t
    }

    pub(crate) fn is_empty_set(&self) -> bool {
        self.kmax.is_none()
    }

    fn lcp_at(&self, i: usize, j: usize) -> usize {
        self.lcp[i * self.na + j] as usize
    }

    fn cmp_suffixes(&self, i: usize, j: usize) -> Ordering {
        let n = self.x.len();
        let (a, b) = (i * self.t, j * self.t);
        let l = self.lcp_at(i, j);
        match (a + l == n, b + l == n) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => self.x[a + l].cmp(&self.x[b + l]),
        }
    }

    /// Lengths of the unflipped aligned suffixes of `s` (all congruent to the
    /// current layer), longest first. For an unflipped state the state
    /// itself comes first.
    fn chain(&self, s: SState, out: &mut Vec<usize>) {
        out.clear();
        match s {
            SState::None => {}
            SState::Unflipped(len) => {
                let mut cur = Some(len as usize);
                while let Some(m) = cur {
                    out.push(m);
                    cur = if m == 0 { None } else { self.af[m].map(|b| b as usize) };
                }
            }
            SState::Flipped(k, c) => {
                let mut cur = self.af[k as usize].map(|b| b as usize);
                while let Some(b) = cur {
                    if self.x[b] == c {
                        out.push(b + 1);
                    }
                    cur = if b == 0 { None } else { self.af[b].map(|v| v as usize) };
                }
                if (k as usize + 1) % self.t == 0 {
                    out.push(0);
                }
            }
        }
    }

    /// Reads `sym` in state `s`; `next_aligned` says whether the layer after
    /// this symbol starts a block. Returns the new state and whether an
    /// aligned member of `L_x` ends here.
    pub(crate) fn step_suffix(&mut self, s: SState, sym: u32, next_aligned: bool) -> (SState, bool) {
        if let Some(&r) = self.s_memo.get(&(s, sym, next_aligned)) {
            return r;
        }
        let mut chain = Vec::new();
        self.chain(s, &mut chain);
        let mut next = None;
        let mut witness = false;
        for &m in &chain {
            let xm = self.x[m];
            if sym < xm {
                witness = true;
                next.get_or_insert(SState::Flipped(m as u32, sym));
            } else if sym == xm && self.kmax.is_some_and(|k| m < k) {
                next.get_or_insert(SState::Unflipped(m as u32 + 1));
            }
            if witness && next.is_some() {
                break;
            }
        }
        let next = next.unwrap_or(if next_aligned { SState::Unflipped(0) } else { SState::None });
        self.s_memo.insert((s, sym, next_aligned), (next, witness));
        (next, witness)
    }

    pub(crate) fn start_prefix(&self) -> PState {
        PState::Grow { rep: 0, len: 0, tail: None }
    }

    /// `X[a..]` beats `X[rep..rep+len]·tail` at a mismatch inside both words.
    fn beats(&self, a: usize, rep: usize, len: usize, tail: Option<u32>) -> bool {
        let n = self.x.len();
        let l = self.lcp_at(a / self.t, rep / self.t);
        if l < len {
            a + l < n && self.x[a + l] > self.x[rep + l]
        } else {
            match tail {
                Some(c) => a + len < n && self.x[a + len] > c,
                None => false,
            }
        }
    }

    fn threshold(&self, rep: usize, len: usize, tail: Option<u32>) -> u32 {
        let mut losers = 0u32;
        let mut min_winner = u32::MAX;
        let mut max_loser = 0u32;
        let mut any_loser = false;
        for i in 1..self.na {
            if self.beats(i * self.t, rep, len, tail) {
                min_winner = min_winner.min(self.rank[i]);
            } else {
                losers += 1;
                max_loser = max_loser.max(self.rank[i]);
                any_loser = true;
            }
        }
        debug_assert!(!any_loser || min_winner == u32::MAX || max_loser < min_winner);
        losers
    }

    pub(crate) fn step_prefix(&mut self, p: PState, sym: u32) -> PState {
        if let PState::Frozen(_) = p {
            return p;
        }
        if let Some(&r) = self.p_memo.get(&(p, sym)) {
            return r;
        }
        let next = match p {
            PState::Grow { rep, len, tail: Some(c) } => {
                PState::Frozen(self.threshold(rep as usize, len as usize, Some(c)))
            }
            PState::Grow { rep, len, tail: None } => {
                let (rep, len) = (rep as usize, len as usize);
                let n = self.x.len();
                let kmax = self.kmax;
                let mut extend = None;
                let mut factor = false;
                for i in 0..self.na {
                    let a = i * self.t;
                    if a + len >= n || (len > 0 && self.lcp_at(i, rep / self.t) < len) {
                        continue;
                    }
                    let xa = self.x[a + len];
                    if xa == sym {
                        extend.get_or_insert(a);
                        if kmax.is_some_and(|k| a + len < k) {
                            factor = true;
                        }
                    } else if sym < xa {
                        factor = true;
                    }
                }
                if !factor {
                    PState::Frozen(self.threshold(rep, len, Some(sym)))
                } else if let Some(a) = extend {
                    PState::Grow { rep: a as u32, len: len as u32 + 1, tail: None }
                } else {
                    PState::Grow { rep: rep as u32, len: len as u32, tail: Some(sym) }
                }
            }
            PState::Frozen(_) => unreachable!(),
        };
        self.p_memo.insert((p, sym), next);
        next
    }

    /// Final test of the wraparound program: some nonempty aligned suffix
    /// `X[..a]` of the input beats the input's prefix.
    pub(crate) fn wrap_accepts(&self, s: SState, p: PState) -> bool {
        let mut chain = Vec::new();
        self.chain(s, &mut chain);
        let wraps = chain.iter().copied().filter(|&a| a >= self.t && a < self.x.len());
        match p {
            PState::Frozen(r) => wraps.map(|a| self.rank[a / self.t]).any(|rk| rk >= r),
            PState::Grow { rep, len, tail } => {
                let (rep, len) = (rep as usize, len as usize);
                wraps.into_iter().any(|a| self.beats(a, rep, len, tail))
            }
        }
    }
}
