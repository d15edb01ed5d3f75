//! Layered read-once branching programs and exact path counting.

mod builders;
mod witness;

use std::fmt::Write as _;
use std::hash::Hash;

use num_bigint::BigUint;
use num_traits::Zero;
use smallvec::SmallVec;

type HashMap<K, V> = std::collections::HashMap<K, V, foldhash::fast::RandomState>;

use crate::error::{Error, Result};

pub use builders::{
    build_alphabet_restriction, build_contiguous, build_direct_rotation_witness,
    build_encoded_counting_program, build_rotation_witness, build_wraparound, MAX_DIRECT_ALPHABET,
};
pub(crate) use builders::{fused_direct, fused_encoded};

/// Canonical node label: a short tuple of machine words.
pub type Label = SmallVec<[u32; 16]>;

const ACCEPT_TAG: u32 = u32::MAX;
const REJECT_TAG: u32 = u32::MAX - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Normal,
    /// Every continuation is accepted.
    AcceptSink,
    /// Every continuation is rejected.
    RejectSink,
}

#[derive(Clone, Debug, Default)]
struct Layer {
    labels: Vec<Label>,
    kinds: Vec<NodeKind>,
    /// `next[node * alphabet + symbol]`; empty on the last layer.
    next: Vec<u32>,
    /// Meaningful on the last layer only.
    accepting: Vec<bool>,
}

impl Layer {
    fn push(&mut self, label: Label, kind: NodeKind) -> u32 {
        self.labels.push(label);
        self.kinds.push(kind);
        (self.labels.len() - 1) as u32
    }

    fn len(&self) -> usize {
        self.labels.len()
    }
}

/// A deterministic layered program reading words of length `num_layers`.
/// The start node is node 0 of layer 0.
#[derive(Clone, Debug)]
pub struct BranchingProgram {
    alphabet: u32,
    layers: Vec<Layer>,
}

/// A deterministic state machine that can be unrolled into a program.
pub(crate) trait Machine {
    type State: Clone + Eq + Hash;
    fn start(&mut self) -> Self::State;
    fn step(&mut self, layer: usize, state: &Self::State, symbol: u32) -> Self::State;
    fn accepts(&mut self, state: &Self::State) -> bool;
    fn kind(&self, state: &Self::State) -> NodeKind;
    fn label(&self, state: &Self::State) -> Label;
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Union,
    Intersection,
}

impl BranchingProgram {
    pub(crate) fn from_machine<M: Machine>(m: &mut M, num_layers: usize, alphabet: u32) -> Self {
        let mut layers: Vec<Layer> = Vec::with_capacity(num_layers + 1);
        let start = m.start();
        let mut first = Layer::default();
        first.push(m.label(&start), m.kind(&start));
        layers.push(first);
        let mut states = vec![start];
        for layer in 0..num_layers {
            let mut index: HashMap<M::State, u32> = HashMap::default();
            let mut next_states = Vec::new();
            let mut next_layer = Layer::default();
            let mut arcs = Vec::with_capacity(states.len() * alphabet as usize);
            for s in &states {
                for sym in 0..alphabet {
                    let t = m.step(layer, s, sym);
                    let id = match index.get(&t) {
                        Some(&id) => id,
                        None => {
                            let id = next_layer.push(m.label(&t), m.kind(&t));
                            index.insert(t.clone(), id);
                            next_states.push(t);
                            id
                        }
                    };
                    arcs.push(id);
                }
            }
            layers[layer].next = arcs;
            layers.push(next_layer);
            states = next_states;
        }
        let last = layers.last_mut().expect("at least one layer");
        last.accepting = states.iter().map(|s| m.accepts(s)).collect();
        BranchingProgram { alphabet, layers }
    }

    /// Accepts every word of length `num_layers`.
    pub fn all_accept(num_layers: usize, alphabet: u32) -> Self {
        Self::constant(num_layers, alphabet, true)
    }

    /// Accepts nothing.
    pub fn none_accept(num_layers: usize, alphabet: u32) -> Self {
        Self::constant(num_layers, alphabet, false)
    }

    fn constant(num_layers: usize, alphabet: u32, accept: bool) -> Self {
        let (tag, kind) = if accept {
            (ACCEPT_TAG, NodeKind::AcceptSink)
        } else {
            (REJECT_TAG, NodeKind::RejectSink)
        };
        let layers = (0..=num_layers)
            .map(|i| {
                let mut l = Layer::default();
                l.push(SmallVec::from_slice(&[tag]), kind);
                if i < num_layers {
                    l.next = vec![0; alphabet as usize];
                } else {
                    l.accepting = vec![accept];
                }
                l
            })
            .collect();
        BranchingProgram { alphabet, layers }
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn node_count(&self) -> usize {
        self.layers.iter().map(Layer::len).sum()
    }

    pub fn layer_width(&self, layer: usize) -> usize {
        self.layers[layer].len()
    }

    pub fn label(&self, layer: usize, node: u32) -> &Label {
        &self.layers[layer].labels[node as usize]
    }

    pub fn kind(&self, layer: usize, node: u32) -> NodeKind {
        self.layers[layer].kinds[node as usize]
    }

    pub fn next(&self, layer: usize, node: u32, symbol: u32) -> u32 {
        self.layers[layer].next[node as usize * self.alphabet as usize + symbol as usize]
    }

    /// Runs the program on `word`.
    pub fn accepts(&self, word: &[u32]) -> bool {
        assert_eq!(word.len(), self.num_layers(), "word length must equal the layer count");
        let mut node = 0u32;
        for (layer, &sym) in word.iter().enumerate() {
            node = self.next(layer, node, sym);
        }
        self.layers[self.num_layers()].accepting[node as usize]
    }

    /// Exact number of accepted words, by one forward pass.
    pub fn count_accepted(&self) -> BigUint {
        let a = self.alphabet as usize;
        let mut counts = vec![BigUint::zero(); 1];
        counts[0] = BigUint::from(1u32);
        for (i, layer) in self.layers[..self.num_layers()].iter().enumerate() {
            let mut next = vec![BigUint::zero(); self.layers[i + 1].len()];
            for (u, c) in counts.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for &v in &layer.next[u * a..(u + 1) * a] {
                    next[v as usize] += c;
                }
            }
            counts = next;
        }
        let last = self.layers.last().expect("nonempty");
        counts
            .iter()
            .zip(&last.accepting)
            .filter(|(_, &acc)| acc)
            .fold(BigUint::zero(), |acc, (c, _)| acc + c)
    }

    /// Removes unreachable nodes and redirects nodes that cannot reach an
    /// accepting node into one reject sink per layer. Counts are unchanged.
    pub fn pruned(&self) -> Self {
        let a = self.alphabet as usize;
        let n = self.num_layers();
        let mut alive: Vec<Vec<bool>> = vec![Vec::new(); n + 1];
        alive[n] = self.layers[n].accepting.clone();
        for i in (0..n).rev() {
            let layer = &self.layers[i];
            alive[i] = (0..layer.len())
                .map(|u| layer.next[u * a..(u + 1) * a].iter().any(|&v| alive[i + 1][v as usize]))
                .collect();
        }
        let mut layers: Vec<Layer> = Vec::with_capacity(n + 1);
        let mut first = Layer::default();
        // Old node behind each new node; `None` marks the reject sink.
        let mut order: Vec<Option<u32>> = Vec::new();
        if alive[0][0] {
            first.push(self.layers[0].labels[0].clone(), self.layers[0].kinds[0]);
            order.push(Some(0));
        } else {
            first.push(SmallVec::from_slice(&[REJECT_TAG]), NodeKind::RejectSink);
            order.push(None);
        }
        layers.push(first);
        for i in 0..n {
            let mut next_layer = Layer::default();
            let mut next_map: HashMap<u32, u32> = HashMap::default();
            let mut next_order: Vec<Option<u32>> = Vec::new();
            let mut sink: Option<u32> = None;
            let mut arcs = Vec::with_capacity(order.len() * a);
            for old in &order {
                for sym in 0..a {
                    let target = old.map(|u| self.layers[i].next[u as usize * a + sym]);
                    let id = match target {
                        Some(v) if alive[i + 1][v as usize] => *next_map.entry(v).or_insert_with(|| {
                            next_order.push(Some(v));
                            next_layer.push(
                                self.layers[i + 1].labels[v as usize].clone(),
                                self.layers[i + 1].kinds[v as usize],
                            )
                        }),
                        _ => *sink.get_or_insert_with(|| {
                            next_order.push(None);
                            next_layer.push(SmallVec::from_slice(&[REJECT_TAG]), NodeKind::RejectSink)
                        }),
                    };
                    arcs.push(id);
                }
            }
            layers[i].next = arcs;
            layers.push(next_layer);
            order = next_order;
        }
        let last = layers.last_mut().expect("nonempty");
        last.accepting = order
            .iter()
            .map(|o| o.map(|u| self.layers[n].accepting[u as usize]).unwrap_or(false))
            .collect();
        BranchingProgram { alphabet: self.alphabet, layers }
    }

    /// Debug serialization: `layer src symbol dst` per arc, then `ACCEPT node`.
    pub fn to_debug_text(&self) -> String {
        let a = self.alphabet as usize;
        let mut out = String::new();
        for (i, layer) in self.layers[..self.num_layers()].iter().enumerate() {
            for u in 0..layer.len() {
                for sym in 0..a {
                    let _ = writeln!(out, "{i} {u} {sym} {}", layer.next[u * a + sym]);
                }
            }
        }
        let last = self.layers.last().expect("nonempty");
        for (u, &acc) in last.accepting.iter().enumerate() {
            if acc {
                let _ = writeln!(out, "ACCEPT {u}");
            }
        }
        out
    }

    /// Every structural invariant: one arc per symbol, arcs stay in range,
    /// acceptance flags only on the last layer.
    pub fn check_well_formed(&self) -> bool {
        let a = self.alphabet as usize;
        let n = self.num_layers();
        self.layers.iter().enumerate().all(|(i, l)| {
            l.labels.len() == l.kinds.len()
                && if i < n {
                    l.next.len() == l.len() * a
                        && l.next.iter().all(|&v| (v as usize) < self.layers[i + 1].len())
                        && l.accepting.is_empty()
                } else {
                    l.next.is_empty() && l.accepting.len() == l.len()
                }
        }) && self.layers[0].len() >= 1
    }
}

/// Counts the words accepted by `m` without materialising a program:
/// forward DP over the reachable states of each layer. The big-integer
/// buffers of one layer are recycled for the layer after next.
pub(crate) fn count_machine<M: Machine>(m: &mut M, num_layers: usize, alphabet: u32) -> BigUint {
    let mut done = BigUint::zero();
    let mut states = vec![m.start()];
    let mut counts = vec![BigUint::from(1u32)];
    let mut next_states: Vec<M::State> = Vec::new();
    let mut next_counts: Vec<BigUint> = Vec::new();
    let mut index: HashMap<M::State, usize> = HashMap::default();
    for layer in 0..num_layers {
        let remaining = (num_layers - layer - 1) as u32;
        let mut tail: Option<BigUint> = None;
        index.clear();
        next_states.clear();
        for (s, c) in states.iter().zip(&counts) {
            for sym in 0..alphabet {
                let t = m.step(layer, s, sym);
                match m.kind(&t) {
                    NodeKind::RejectSink => {}
                    NodeKind::AcceptSink => {
                        done += c * tail.get_or_insert_with(|| BigUint::from(alphabet).pow(remaining)) as &BigUint
                    }
                    NodeKind::Normal => {
                        let fresh = next_states.len();
                        let k = *index.entry(t.clone()).or_insert(fresh);
                        if k == fresh {
                            next_states.push(t);
                            match next_counts.get_mut(k) {
                                Some(slot) => slot.set_zero(),
                                None => next_counts.push(BigUint::zero()),
                            }
                        }
                        next_counts[k] += c;
                    }
                }
            }
        }
        std::mem::swap(&mut states, &mut next_states);
        std::mem::swap(&mut counts, &mut next_counts);
    }
    for (s, c) in states.iter().zip(&counts) {
        if m.accepts(s) {
            done += c;
        }
    }
    done
}

/// Product program accepting the union of the two accepted sets.
pub fn build_union(a: &BranchingProgram, b: &BranchingProgram) -> Result<BranchingProgram> {
    product(a, b, Mode::Union)
}

/// Product program accepting the intersection of the two accepted sets.
pub fn build_intersection(a: &BranchingProgram, b: &BranchingProgram) -> Result<BranchingProgram> {
    product(a, b, Mode::Intersection)
}

fn product(a: &BranchingProgram, b: &BranchingProgram, mode: Mode) -> Result<BranchingProgram> {
    if a.num_layers() != b.num_layers() || a.alphabet != b.alphabet {
        return Err(Error::LayerMismatch);
    }
    let n = a.num_layers();
    let alpha = a.alphabet as usize;
    // Pairs collapse to a sink once the outcome is decided.
    const ACC: (u32, u32) = (u32::MAX, 0);
    const REJ: (u32, u32) = (u32::MAX, 1);
    let classify = |ka: NodeKind, kb: NodeKind| -> Option<(u32, u32)> {
        use NodeKind::*;
        match mode {
            Mode::Union if ka == AcceptSink || kb == AcceptSink => Some(ACC),
            Mode::Union if ka == RejectSink && kb == RejectSink => Some(REJ),
            Mode::Intersection if ka == RejectSink || kb == RejectSink => Some(REJ),
            Mode::Intersection if ka == AcceptSink && kb == AcceptSink => Some(ACC),
            _ => None,
        }
    };
    let make_node = |layer: &mut Layer, la: usize, u: u32, v: u32| -> u32 {
        let ka = a.layers[la].kinds[u as usize];
        let kb = b.layers[la].kinds[v as usize];
        match classify(ka, kb) {
            Some(ACC) => layer.push(SmallVec::from_slice(&[ACCEPT_TAG]), NodeKind::AcceptSink),
            Some(_) => layer.push(SmallVec::from_slice(&[REJECT_TAG]), NodeKind::RejectSink),
            None => {
                let lu = &a.layers[la].labels[u as usize];
                let lv = &b.layers[la].labels[v as usize];
                let mut label: Label = SmallVec::with_capacity(1 + lu.len() + lv.len());
                label.push(lu.len() as u32);
                label.extend_from_slice(lu);
                label.extend_from_slice(lv);
                layer.push(label, NodeKind::Normal)
            }
        }
    };
    let key_of = |la: usize, u: u32, v: u32| -> (u32, u32) {
        classify(a.layers[la].kinds[u as usize], b.layers[la].kinds[v as usize]).unwrap_or((u, v))
    };

    let mut layers: Vec<Layer> = Vec::with_capacity(n + 1);
    let mut first = Layer::default();
    make_node(&mut first, 0, 0, 0);
    layers.push(first);
    let mut pairs: Vec<(u32, u32)> = vec![(0, 0)];
    for i in 0..n {
        let mut index: HashMap<(u32, u32), u32> = HashMap::default();
        let mut next_pairs = Vec::new();
        let mut next_layer = Layer::default();
        let mut arcs = Vec::with_capacity(pairs.len() * alpha);
        for &(u, v) in &pairs {
            for sym in 0..alpha {
                let nu = a.layers[i].next[u as usize * alpha + sym];
                let nv = b.layers[i].next[v as usize * alpha + sym];
                let key = key_of(i + 1, nu, nv);
                let id = *index.entry(key).or_insert_with(|| {
                    next_pairs.push((nu, nv));
                    make_node(&mut next_layer, i + 1, nu, nv)
                });
                arcs.push(id);
            }
        }
        layers[i].next = arcs;
        layers.push(next_layer);
        pairs = next_pairs;
    }
    let last = layers.last_mut().expect("nonempty");
    last.accepting = pairs
        .iter()
        .map(|&(u, v)| {
            let x = a.layers[n].accepting[u as usize];
            let y = b.layers[n].accepting[v as usize];
            match mode {
                Mode::Union => x || y,
                Mode::Intersection => x && y,
            }
        })
        .collect();
    Ok(BranchingProgram { alphabet: a.alphabet, layers })
}
