//! Entry access to generator and parity-check matrices of the BCH code of
//! length `q^n` over `F_q` with degree bound `d`.
//!
//! Residues mod `q^n - 1` are the integers `0..q^n-1`, written as base-`q`
//! words of length `n`; multiplying by `q` rotates the word, so the orbits
//! `S` closed under `i -> iq` are necklaces.
//!
//! Parity rows are the orbits with `min S <= d`, ordered by their least
//! element. Generator rows are pairs `(S, j)` with `S ⊆ {0..d}` and
//! `1 <= j <= |S|`, ordered by the greatest element of `S` and then by `j`.
//!
//! Generator columns are `0, g^0, g^1, …`; parity columns are `g^0, g^1, …`.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::counting::Counter;
use crate::error::{Error, Result};
use crate::finite_field::{Fq, FqCtx, FqPoly, FqnCtx, FqnElement};
use crate::indexing::{Indexer, Lookup};
use crate::strings::{fundamental_period, max_rotation, min_rotation, NkString};

/// A multiply-by-`q` orbit in `Z_{q^n - 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSet {
    /// Least element.
    pub m: BigUint,
    /// Orbit length; divides `n`.
    pub size: usize,
}

impl OrbitSet {
    /// Members in ascending order, given `q` and `n`.
    pub fn elements(&self, q: &BigUint, n: usize) -> Vec<BigUint> {
        let modulus = q.pow(n as u32) - 1u32;
        let mut out: Vec<BigUint> = Vec::with_capacity(self.size);
        let mut cur = self.m.clone();
        for _ in 0..self.size {
            out.push(cur.clone());
            cur = (&cur * q) % &modulus;
        }
        out.sort();
        out
    }
}

/// A code together with the indexing machinery used to locate its rows.
#[derive(Debug)]
pub struct Bch {
    ctx: FqnCtx,
    d: BigUint,
    counter: Counter,
    indexer: Indexer,
}

impl Bch {
    /// Requires `0 <= d < q^n - 1`.
    pub fn new(ctx: FqnCtx, d: BigUint) -> Result<Self> {
        if d >= ctx.order() {
            return Err(Error::DistanceOutOfRange);
        }
        Ok(Bch { ctx, d, counter: Counter::default(), indexer: Indexer::default() })
    }

    pub fn ctx(&self) -> &FqnCtx {
        &self.ctx
    }

    pub fn d(&self) -> &BigUint {
        &self.d
    }

    pub fn indexer(&self) -> &Indexer {
        &self.indexer
    }

    fn word(&self, v: &BigUint) -> NkString {
        NkString::from_value(v, self.ctx.n(), self.ctx.base().q()).expect("value below q^n")
    }

    fn complement(&self, w: &NkString) -> NkString {
        let top = w.q() - 1u32;
        w.with_digits(w.digits().iter().map(|c| &top - c).collect())
    }

    fn orbit_of(&self, w: &NkString) -> OrbitSet {
        OrbitSet { m: min_rotation(w).0.value(), size: fundamental_period(w) }
    }

    pub fn parity_row_count(&self) -> Result<BigUint> {
        self.counter.count_classes_less(&self.word(&(&self.d + 1u32)))
    }

    /// The `r`-th orbit (1-based) with least element at most `d`.
    pub fn parity_row(&self, r: &BigUint) -> Result<OrbitSet> {
        if r.is_zero() {
            return Err(Error::ZeroIndex);
        }
        if *r > self.parity_row_count()? {
            return Err(Error::TooLarge);
        }
        let (n, q) = (self.ctx.n(), self.ctx.base().q());
        match self.indexer.index_necklace(n, q, r)? {
            Lookup::Found(w) => Ok(self.orbit_of(&w)),
            Lookup::TooLarge => Err(Error::TooLarge),
        }
    }

    /// `α^{m_S}` for the `r`-th parity row; `α` must be nonzero.
    pub fn parity_entry(&self, r: &BigUint, alpha: &FqnElement) -> Result<FqnElement> {
        if alpha.is_zero() {
            return Err(Error::ZeroColumn);
        }
        let s = self.parity_row(r)?;
        Ok(self.ctx.pow(alpha, &s.m))
    }

    /// Number of words of length `n` whose greatest rotation is at most `w`:
    /// the complement of each such word has no rotation below `w`'s
    /// complement.
    fn words_with_max_at_most(&self, w: &NkString) -> Result<BigUint> {
        let below = self.counter.count_g_leq(&self.complement(w), w.n())?;
        Ok(self.ctx.size() - below)
    }

    fn rows_through(&self, v: &BigUint) -> Result<BigUint> {
        self.words_with_max_at_most(&self.word(v))
    }

    pub fn generator_row_count(&self) -> Result<BigUint> {
        self.rows_through(&self.d)
    }

    /// The `r`-th generator row (1-based) as an orbit and a basis position
    /// `j` in `1..=|S|`.
    pub fn generator_row(&self, r: &BigUint) -> Result<(OrbitSet, usize)> {
        if r.is_zero() {
            return Err(Error::ZeroIndex);
        }
        if *r > self.generator_row_count()? {
            return Err(Error::TooLarge);
        }
        // Least v with rows_through(v) >= r; v is then an orbit maximum.
        let (mut lo, mut hi) = (BigUint::zero(), self.d.clone());
        while lo < hi {
            let mid: BigUint = (&lo + &hi) >> 1u32;
            if self.rows_through(&mid)? >= *r {
                hi = mid;
            } else {
                lo = mid + 1u32;
            }
        }
        let w = self.word(&lo);
        debug_assert_eq!(max_rotation(&w).1, 0, "rows only start at orbit maxima");
        let before = if lo.is_zero() { BigUint::zero() } else { self.rows_through(&(&lo - 1u32))? };
        let j = (r - before).to_usize().expect("j is at most n");
        Ok((self.orbit_of(&w), j))
    }

    /// `P_{S,j}(α) = Σ_{k < |S|} β^{q^k} α^{m q^k mod (q^n - 1)}`, where `β`
    /// is the `j`-th vector of the subfield basis of dimension `|S|`.
    pub fn generator_entry(&self, r: &BigUint, alpha: &FqnElement) -> Result<Fq> {
        let (s, j) = self.generator_row(r)?;
        let basis = subfield_basis(&self.ctx, s.size)?;
        let beta = &basis[j - 1];
        evaluate_row(&self.ctx, &s, beta, alpha)
    }

    /// Generator column `c`: `0` for `c = 0`, else `g^{c-1}`.
    pub fn generator_column(&self, c: &BigUint) -> Result<FqnElement> {
        self.require_primitive()?;
        if *c >= self.ctx.size() {
            return Err(Error::TooLarge);
        }
        Ok(if c.is_zero() { self.ctx.zero() } else { self.ctx.gen_pow(&(c - 1u32)) })
    }

    /// Parity column `c`: `g^c`.
    pub fn parity_column(&self, c: &BigUint) -> Result<FqnElement> {
        self.require_primitive()?;
        if *c >= self.ctx.order() {
            return Err(Error::TooLarge);
        }
        Ok(self.ctx.gen_pow(c))
    }

    fn require_primitive(&self) -> Result<()> {
        if self.ctx.is_primitive() { Ok(()) } else { Err(Error::NotPrimitive) }
    }

    fn guard_columns(&self) -> Result<u64> {
        self.ctx.size().to_u64().filter(|&c| c <= MAX_MATRIX_COLUMNS).ok_or(Error::TooBig)
    }

    /// The full generator matrix, one row per vector.
    pub fn generator_matrix(&self) -> Result<Vec<Vec<Fq>>> {
        let cols = self.guard_columns()?;
        let columns: Vec<FqnElement> =
            (0..cols).map(|c| self.generator_column(&BigUint::from(c))).collect::<Result<_>>()?;
        let rows = self.generator_row_count()?.to_u64().ok_or(Error::TooBig)?;
        let mut out = Vec::new();
        for r in 1..=rows {
            let (s, j) = self.generator_row(&BigUint::from(r))?;
            let beta = subfield_basis(&self.ctx, s.size)?.swap_remove(j - 1);
            out.push(columns.iter().map(|a| evaluate_row(&self.ctx, &s, &beta, a)).collect::<Result<_>>()?);
        }
        Ok(out)
    }

    /// The full parity-check matrix over `F_{q^n}`.
    pub fn parity_matrix(&self) -> Result<Vec<Vec<FqnElement>>> {
        let cols = self.guard_columns()? - 1;
        let columns: Vec<FqnElement> =
            (0..cols).map(|c| self.parity_column(&BigUint::from(c))).collect::<Result<_>>()?;
        let rows = self.parity_row_count()?.to_u64().ok_or(Error::TooBig)?;
        let mut out = Vec::new();
        for r in 1..=rows {
            let s = self.parity_row(&BigUint::from(r))?;
            out.push(columns.iter().map(|a| self.ctx.pow(a, &s.m)).collect());
        }
        Ok(out)
    }
}

/// Full-matrix output refuses codes longer than this.
pub const MAX_MATRIX_COLUMNS: u64 = 1 << 14;

fn evaluate_row(ctx: &FqnCtx, s: &OrbitSet, beta: &FqnElement, alpha: &FqnElement) -> Result<Fq> {
    let q = ctx.base().q();
    let order = ctx.order();
    let mut coef = beta.clone();
    let mut exp = s.m.clone();
    let mut acc = ctx.zero();
    for _ in 0..s.size {
        acc = ctx.add(&acc, &ctx.mul(&coef, &ctx.pow(alpha, &exp)));
        coef = ctx.frobenius(&coef);
        exp = (exp * q) % &order;
    }
    ctx.to_base(&acc)
}

/// Deterministic `F_q`-basis of `V_ℓ = {α : α^{q^ℓ} = α}`: the kernel of
/// `Frob^ℓ - 1` on the power basis, read off the reduced echelon form with
/// one vector per free coordinate.
pub fn subfield_basis(ctx: &FqnCtx, l: usize) -> Result<Vec<FqnElement>> {
    let n = ctx.n();
    if l == 0 || n % l != 0 {
        return Err(Error::NotADivisor { p: l, n });
    }
    let base = ctx.base();
    let one = base.one();
    // Column i holds the coordinates of Frob^l(T^i) - T^i.
    let mut a = vec![vec![base.zero(); n]; n];
    for i in 0..n {
        let ti = FqPoly::from_coeffs((0..=i).map(|k| if k == i { one.clone() } else { base.zero() }).collect());
        let image = ctx.sub(&ctx.frobenius_iter(&ti, l), &ti);
        for (r, row) in a.iter_mut().enumerate() {
            row[i] = image.coeff(r);
        }
    }
    let pivots = rref(base, &mut a);
    let mut out = Vec::new();
    for f in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![base.zero(); n];
        v[f] = one.clone();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = base.neg(&a[row][f]);
        }
        out.push(FqPoly::from_coeffs(v));
    }
    debug_assert_eq!(out.len(), l);
    Ok(out)
}

/// Reduces `a` in place to reduced row echelon form; returns the pivot
/// column of each nonzero row.
pub fn rref(base: &FqCtx, a: &mut [Vec<Fq>]) -> Vec<usize> {
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        let Some(p) = (row..a.len()).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = base.inv(&a[row][c]).expect("pivot is nonzero");
        for x in a[row].iter_mut() {
            *x = base.mul(x, &inv);
        }
        for r in 0..a.len() {
            if r != row && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in 0..cols {
                    let t = base.mul(&f, &a[row][k]);
                    a[r][k] = base.sub(&a[r][k], &t);
                }
            }
        }
        pivots.push(c);
        row += 1;
        if row == a.len() {
            break;
        }
    }
    pivots
}

/// Rank over `F_q` of a list of vectors.
pub fn rank(base: &FqCtx, vectors: &[Vec<Fq>]) -> usize {
    let mut a = vectors.to_vec();
    rref(base, &mut a).len()
}

/// Coordinates of `a` on the power basis `1, T, …, T^{n-1}`.
pub fn expand(ctx: &FqnCtx, a: &FqnElement) -> Vec<Fq> {
    (0..ctx.n()).map(|i| a.coeff(i)).collect()
}

/// Parity-check columns expanded over `F_q`: column `c` stacks the
/// power-basis coordinates of every row's entry.
pub fn expanded_parity_columns(parity: &[Vec<FqnElement>], ctx: &FqnCtx) -> Vec<Vec<Fq>> {
    let cols = parity.first().map_or(0, Vec::len);
    (0..cols).map(|c| parity.iter().flat_map(|row| expand(ctx, &row[c])).collect()).collect()
}
