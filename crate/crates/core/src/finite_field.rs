//! Arithmetic in `F_p`, in `F_q = F_p[u]/g(u)` and in `F_{q^n} = F_q[T]/F(T)`,
//! together with irreducibility testing, minimal polynomials and the
//! primitive-polynomial advice consumed by the irreducible indexer.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Element of `F_q`: coefficients over `F_p` of a polynomial in `u`, low
/// degree first, without trailing zeros. Zero is the empty vector.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Fq(Vec<BigUint>);

impl Fq {
    pub fn coeffs(&self) -> &[BigUint] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn normalized(mut v: Vec<BigUint>) -> Self {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        Fq(v)
    }
}

/// Ordered by the integer whose base-`p` digits are the coefficients.
impl Ord for Fq {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Fq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial over `F_q`, low degree first, without trailing zeros. Also
/// serves as the representation of elements of `F_{q^n}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqPoly {
    coeffs: Vec<Fq>,
}

/// An element of `F_{q^n}`: a polynomial of degree below `n`.
pub type FqnElement = FqPoly;

impl FqPoly {
    pub fn from_coeffs(mut coeffs: Vec<Fq>) -> Self {
        while coeffs.last().is_some_and(Fq::is_zero) {
            coeffs.pop();
        }
        FqPoly { coeffs }
    }

    pub fn zero() -> Self {
        FqPoly::default()
    }

    pub fn constant(c: Fq) -> Self {
        FqPoly::from_coeffs(vec![c])
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&Fq> {
        self.coeffs.last()
    }

    /// Coefficient of `T^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }
}

/// The field `F_q` with `q = p^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqCtx {
    p: BigUint,
    e: usize,
    /// Monic modulus over `F_p`, low degree first; `u` itself when `e = 1`.
    g: Vec<BigUint>,
    q: BigUint,
}

fn check_prime(p: &BigUint) -> Result<()> {
    if *p < BigUint::from(2u32) || !num_prime::nt_funcs::is_prime(p, None).probably() {
        return Err(Error::NotPrime(p.to_string()));
    }
    Ok(())
}

fn small_prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FqCtx {
    /// The prime field `F_p`.
    pub fn prime(p: BigUint) -> Result<Self> {
        check_prime(&p)?;
        Ok(FqCtx { q: p.clone(), g: vec![BigUint::zero(), BigUint::one()], e: 1, p })
    }

    /// `F_p[u]/g(u)` for a monic irreducible `g` given low degree first.
    pub fn new(p: BigUint, g: Vec<BigUint>) -> Result<Self> {
        let prime = FqCtx::prime(p.clone())?;
        if g.len() < 2 || !g.last().is_some_and(One::is_one) || g.iter().any(|c| *c >= p) {
            return Err(Error::InvalidAdvice("g must be monic of degree at least 1 with coefficients below p".into()));
        }
        let e = g.len() - 1;
        if e == 1 {
            return Ok(prime);
        }
        let gp = FqPoly::from_coeffs(g.iter().map(|c| prime.from_int(c)).collect());
        if !is_irreducible(&prime, &gp) {
            return Err(Error::NotIrreducible);
        }
        Ok(FqCtx { q: p.pow(e as u32), p, e, g })
    }

    /// `F_{p^e}` with a monic irreducible modulus drawn at random,
    /// deterministic in `seed`.
    pub fn with_random_modulus(p: BigUint, e: usize, seed: u64) -> Result<Self> {
        let prime = FqCtx::prime(p.clone())?;
        if e <= 1 {
            return Ok(prime);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let mut g: Vec<BigUint> = (0..e).map(|_| rng.gen_biguint_below(&p)).collect();
            g.push(BigUint::one());
            match FqCtx::new(p.clone(), g) {
                Err(Error::NotIrreducible) => continue,
                other => return other,
            }
        }
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn g(&self) -> &[BigUint] {
        &self.g
    }

    pub fn q(&self) -> &BigUint {
        &self.q
    }

    pub fn zero(&self) -> Fq {
        Fq::default()
    }

    pub fn one(&self) -> Fq {
        Fq(vec![BigUint::one()])
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, v: &BigUint) -> Fq {
        Fq::normalized(vec![v % &self.p])
    }

    pub fn from_u64(&self, v: u64) -> Fq {
        self.from_int(&BigUint::from(v))
    }

    /// The class of `u` (equal to `0` in the prime field placeholder).
    pub fn u(&self) -> Fq {
        if self.e == 1 {
            self.zero()
        } else {
            Fq(vec![BigUint::zero(), BigUint::one()])
        }
    }

    fn fp_sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            &self.p - (b - a)
        }
    }

    pub fn add(&self, a: &Fq, b: &Fq) -> Fq {
        let len = a.0.len().max(b.0.len());
        let z = BigUint::zero();
        let v = (0..len)
            .map(|i| {
                let s = a.0.get(i).unwrap_or(&z) + b.0.get(i).unwrap_or(&z);
                if s >= self.p { s - &self.p } else { s }
            })
            .collect();
        Fq::normalized(v)
    }

    pub fn neg(&self, a: &Fq) -> Fq {
        Fq(a.0.iter().map(|c| if c.is_zero() { c.clone() } else { &self.p - c }).collect())
    }

    pub fn sub(&self, a: &Fq, b: &Fq) -> Fq {
        let len = a.0.len().max(b.0.len());
        let z = BigUint::zero();
        let v = (0..len).map(|i| self.fp_sub(a.0.get(i).unwrap_or(&z), b.0.get(i).unwrap_or(&z))).collect();
        Fq::normalized(v)
    }

    pub fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let mut prod = vec![BigUint::zero(); a.0.len() + b.0.len() - 1];
        for (i, x) in a.0.iter().enumerate() {
            for (j, y) in b.0.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        for c in prod.iter_mut() {
            *c %= &self.p;
        }
        // Reduce modulo the monic g.
        let e = self.e;
        for i in (e..prod.len()).rev() {
            let c = std::mem::take(&mut prod[i]);
            if c.is_zero() {
                continue;
            }
            for j in 0..e {
                let t = (&c * &self.g[j]) % &self.p;
                prod[i - e + j] = self.fp_sub(&prod[i - e + j], &t);
            }
        }
        prod.truncate(e);
        Fq::normalized(prod)
    }

    pub fn pow(&self, a: &Fq, k: &BigUint) -> Fq {
        let mut acc = self.one();
        for bit in (0..k.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if k.bit(bit) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    pub fn inv(&self, a: &Fq) -> Result<Fq> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, &(&self.q - 2u32)))
    }

    pub fn div(&self, a: &Fq, b: &Fq) -> Result<Fq> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// The element whose coefficients are the base-`p` digits of `index`.
    pub fn element(&self, index: &BigUint) -> Fq {
        let mut rest = index % &self.q;
        let mut v = Vec::with_capacity(self.e);
        for _ in 0..self.e {
            let (quo, rem) = rest.div_rem(&self.p);
            v.push(rem);
            rest = quo;
        }
        Fq::normalized(v)
    }

    pub fn index(&self, a: &Fq) -> BigUint {
        a.0.iter().rev().fold(BigUint::zero(), |acc, c| acc * &self.p + c)
    }

    /// Every element, ordered by index. Only sensible for small `q`.
    pub fn all_elements(&self) -> Vec<Fq> {
        let q = self.q.to_u64().expect("field too large to enumerate");
        (0..q).map(|v| self.element(&BigUint::from(v))).collect()
    }

    pub fn random(&self, rng: &mut ChaCha8Rng) -> Fq {
        Fq::normalized((0..self.e).map(|_| rng.gen_biguint_below(&self.p)).collect())
    }

    /// `e` comma-separated residues, low degree first.
    pub fn format_elem(&self, a: &Fq) -> String {
        let z = BigUint::zero();
        (0..self.e).map(|i| a.0.get(i).unwrap_or(&z).to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn parse_elem(&self, text: &str) -> Result<Fq> {
        let parts: Vec<&str> = text.trim().split(',').map(str::trim).collect();
        if parts.len() > self.e {
            return Err(Error::Parse(format!("too many F_p components in {text:?}")));
        }
        let v = parts
            .iter()
            .map(|s| {
                let c: BigUint = s.parse().map_err(|_| Error::Parse(format!("bad residue {s:?}")))?;
                if c >= self.p {
                    return Err(Error::Parse(format!("residue {c} is not below p = {}", self.p)));
                }
                Ok(c)
            })
            .collect::<Result<_>>()?;
        Ok(Fq::normalized(v))
    }

    // Polynomials over F_q.

    /// The polynomial `T`.
    pub fn x(&self) -> FqPoly {
        FqPoly::from_coeffs(vec![self.zero(), self.one()])
    }

    pub fn poly_add(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let len = a.coeffs.len().max(b.coeffs.len());
        FqPoly::from_coeffs((0..len).map(|i| self.add(&a.coeff(i), &b.coeff(i))).collect())
    }

    pub fn poly_sub(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let len = a.coeffs.len().max(b.coeffs.len());
        FqPoly::from_coeffs((0..len).map(|i| self.sub(&a.coeff(i), &b.coeff(i))).collect())
    }

    pub fn poly_scale(&self, a: &FqPoly, c: &Fq) -> FqPoly {
        FqPoly::from_coeffs(a.coeffs.iter().map(|x| self.mul(x, c)).collect())
    }

    pub fn poly_mul(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        if a.is_zero() || b.is_zero() {
            return FqPoly::zero();
        }
        let mut out = vec![self.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                out[i + j] = self.add(&out[i + j], &self.mul(x, y));
            }
        }
        FqPoly::from_coeffs(out)
    }

    pub fn poly_divrem(&self, a: &FqPoly, b: &FqPoly) -> Result<(FqPoly, FqPoly)> {
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = self.inv(b.leading().expect("nonzero"))?;
        let mut rem = a.coeffs.clone();
        if rem.len() <= db {
            return Ok((FqPoly::zero(), a.clone()));
        }
        let mut quo = vec![self.zero(); rem.len() - db];
        for i in (db..rem.len()).rev() {
            let c = self.mul(&rem[i], &lead_inv);
            if c.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                rem[i - db + j] = self.sub(&rem[i - db + j], &self.mul(&c, bj));
            }
            quo[i - db] = c;
        }
        rem.truncate(db);
        Ok((FqPoly::from_coeffs(quo), FqPoly::from_coeffs(rem)))
    }

    pub fn poly_rem(&self, a: &FqPoly, m: &FqPoly) -> Result<FqPoly> {
        Ok(self.poly_divrem(a, m)?.1)
    }

    /// Monic greatest common divisor (zero when both inputs are zero).
    pub fn poly_gcd(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        while !r1.is_zero() {
            let r = self.poly_rem(&r0, &r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
        }
        self.monic(&r0)
    }

    pub fn monic(&self, a: &FqPoly) -> FqPoly {
        match a.leading() {
            None => FqPoly::zero(),
            Some(l) => self.poly_scale(a, &self.inv(l).expect("nonzero")),
        }
    }

    pub fn poly_mulmod(&self, a: &FqPoly, b: &FqPoly, m: &FqPoly) -> FqPoly {
        self.poly_rem(&self.poly_mul(a, b), m).expect("nonzero modulus")
    }

    pub fn poly_powmod(&self, a: &FqPoly, k: &BigUint, m: &FqPoly) -> FqPoly {
        let mut acc = self.poly_rem(&FqPoly::constant(self.one()), m).expect("nonzero modulus");
        let base = self.poly_rem(a, m).expect("nonzero modulus");
        for bit in (0..k.bits()).rev() {
            acc = self.poly_mulmod(&acc, &acc, m);
            if k.bit(bit) {
                acc = self.poly_mulmod(&acc, &base, m);
            }
        }
        acc
    }

    /// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
    pub fn poly_inv_mod(&self, a: &FqPoly, m: &FqPoly) -> Result<FqPoly> {
        let a = self.poly_rem(a, m)?;
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (mut r0, mut r1) = (m.clone(), a);
        let (mut s0, mut s1) = (FqPoly::zero(), FqPoly::constant(self.one()));
        while !r1.is_zero() {
            let (quo, r) = self.poly_divrem(&r0, &r1)?;
            let s = self.poly_sub(&s0, &self.poly_mul(&quo, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r0.degree() != Some(0) {
            return Err(Error::DivisionByZero);
        }
        let scale = self.inv(&r0.coeffs[0])?;
        self.poly_rem(&self.poly_scale(&s0, &scale), m)
    }

    pub fn poly_eval(&self, f: &FqPoly, x: &Fq) -> Fq {
        f.coeffs.iter().rev().fold(self.zero(), |acc, c| self.add(&self.mul(&acc, x), c))
    }

    /// Coefficients low degree first, separated by spaces; each coefficient
    /// is written as its comma-separated `F_p` vector.
    pub fn format_poly(&self, f: &FqPoly) -> String {
        if f.is_zero() {
            return self.format_elem(&self.zero());
        }
        f.coeffs.iter().map(|c| self.format_elem(c)).collect::<Vec<_>>().join(" ")
    }

    pub fn parse_poly(&self, text: &str) -> Result<FqPoly> {
        let coeffs = text.split_whitespace().map(|s| self.parse_elem(s)).collect::<Result<Vec<_>>>()?;
        Ok(FqPoly::from_coeffs(coeffs))
    }

    /// Conventional notation such as `T^3 + T + 1`; coefficients outside
    /// the prime field are shown as their `F_p` vectors in parentheses.
    pub fn pretty_poly(&self, f: &FqPoly) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, c) in f.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let coef = if c.0.len() <= 1 { self.format_elem(c) } else { format!("({})", self.format_elem(c)) };
            let mono = match i {
                0 => String::new(),
                1 => "T".into(),
                _ => format!("T^{i}"),
            };
            terms.push(match (c == &self.one(), i) {
                (_, 0) => coef,
                (true, _) => mono,
                (false, _) => format!("{coef}{mono}"),
            });
        }
        terms.join(" + ")
    }
}

/// Rabin's test: a monic `f` of degree `n >= 1` is irreducible over `F_q`
/// iff `T^{q^n} = T mod f` and `gcd(T^{q^{n/r}} - T, f) = 1` for every
/// prime `r | n`.
pub fn is_irreducible(ctx: &FqCtx, f: &FqPoly) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let x = ctx.poly_rem(&ctx.x(), f).expect("nonzero modulus");
    let mut frob = vec![x.clone()];
    for _ in 0..n {
        let prev = frob.last().expect("nonempty");
        frob.push(ctx.poly_powmod(prev, ctx.q(), f));
    }
    if frob[n] != x {
        return false;
    }
    small_prime_factors(n).into_iter().all(|r| {
        let h = ctx.poly_sub(&frob[n / r], &x);
        ctx.poly_gcd(&h, f).degree() == Some(0)
    })
}

/// The field `F_{q^n} = F_q[T]/F(T)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqnCtx {
    base: FqCtx,
    n: usize,
    modulus: FqPoly,
    primitive: bool,
    /// Distinct primes dividing `q^n - 1`, when known.
    primes: Vec<BigUint>,
}

impl FqnCtx {
    /// Checks that `modulus` is monic and irreducible; primitivity is not
    /// certified.
    pub fn new(base: FqCtx, modulus: FqPoly) -> Result<Self> {
        let n = match modulus.degree() {
            Some(n) if n >= 1 => n,
            _ => return Err(Error::NotIrreducible),
        };
        if modulus.leading() != Some(&base.one()) || !is_irreducible(&base, &modulus) {
            return Err(Error::NotIrreducible);
        }
        Ok(FqnCtx { base, n, modulus, primitive: false, primes: Vec::new() })
    }

    /// Like [`FqnCtx::new`], then certifies that the class of `T` generates
    /// the multiplicative group, given the prime factorization of `q^n - 1`
    /// (with or without multiplicity).
    pub fn with_factors(base: FqCtx, modulus: FqPoly, factors: &[BigUint]) -> Result<Self> {
        let mut ctx = FqnCtx::new(base, modulus)?;
        ctx.primes = check_factorization(&ctx.order(), factors)?;
        if !ctx.generator_is_primitive() {
            return Err(Error::NotPrimitive);
        }
        ctx.primitive = true;
        Ok(ctx)
    }

    fn generator_is_primitive(&self) -> bool {
        let g = self.generator();
        if g.is_zero() {
            return false;
        }
        let order = self.order();
        self.primes.iter().all(|r| !self.pow(&g, &(&order / r)).eq(&self.one()))
    }

    pub fn base(&self) -> &FqCtx {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &FqPoly {
        &self.modulus
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    /// Distinct prime factors of `q^n - 1` recorded at certification.
    pub fn order_primes(&self) -> &[BigUint] {
        &self.primes
    }

    /// `q^n`.
    pub fn size(&self) -> BigUint {
        self.base.q().pow(self.n as u32)
    }

    /// `q^n - 1`, the order of the multiplicative group.
    pub fn order(&self) -> BigUint {
        self.size() - 1u32
    }

    pub fn zero(&self) -> FqnElement {
        FqPoly::zero()
    }

    pub fn one(&self) -> FqnElement {
        FqPoly::constant(self.base.one())
    }

    /// The class of `T`.
    pub fn generator(&self) -> FqnElement {
        self.base.poly_rem(&self.base.x(), &self.modulus).expect("nonzero modulus")
    }

    pub fn from_base(&self, c: &Fq) -> FqnElement {
        FqPoly::constant(c.clone())
    }

    /// Projection onto `F_q`, failing for elements outside it.
    pub fn to_base(&self, a: &FqnElement) -> Result<Fq> {
        match a.degree() {
            None => Ok(self.base.zero()),
            Some(0) => Ok(a.coeffs[0].clone()),
            Some(_) => Err(Error::NotInBaseField),
        }
    }

    pub fn add(&self, a: &FqnElement, b: &FqnElement) -> FqnElement {
        self.base.poly_add(a, b)
    }

    pub fn sub(&self, a: &FqnElement, b: &FqnElement) -> FqnElement {
        self.base.poly_sub(a, b)
    }

    pub fn neg(&self, a: &FqnElement) -> FqnElement {
        self.base.poly_sub(&FqPoly::zero(), a)
    }

    pub fn mul(&self, a: &FqnElement, b: &FqnElement) -> FqnElement {
        self.base.poly_mulmod(a, b, &self.modulus)
    }

    pub fn scale(&self, a: &FqnElement, c: &Fq) -> FqnElement {
        self.base.poly_scale(a, c)
    }

    pub fn inv(&self, a: &FqnElement) -> Result<FqnElement> {
        self.base.poly_inv_mod(a, &self.modulus)
    }

    pub fn pow(&self, a: &FqnElement, k: &BigUint) -> FqnElement {
        self.base.poly_powmod(a, k, &self.modulus)
    }

    /// `g^k` for the class `g` of `T`.
    pub fn gen_pow(&self, k: &BigUint) -> FqnElement {
        self.pow(&self.generator(), k)
    }

    /// `a^q`.
    pub fn frobenius(&self, a: &FqnElement) -> FqnElement {
        self.pow(a, self.base.q())
    }

    /// `a^{q^k}`.
    pub fn frobenius_iter(&self, a: &FqnElement, k: usize) -> FqnElement {
        (0..k % self.n).fold(a.clone(), |acc, _| self.frobenius(&acc))
    }

    /// `prod_{i<n} (T - a^{q^i})`, checked to have coefficients in `F_q`.
    pub fn minimal_polynomial(&self, a: &FqnElement) -> Result<FqPoly> {
        let mut conj = Vec::with_capacity(self.n);
        let mut cur = self.base.poly_rem(a, &self.modulus)?;
        for _ in 0..self.n {
            let next = self.frobenius(&cur);
            conj.push(cur);
            cur = next;
        }
        let distinct: HashSet<&FqnElement> = conj.iter().collect();
        if distinct.len() != self.n {
            return Err(Error::ConjugatesCollide);
        }
        // Coefficients over F_{q^n}, low degree first.
        let mut prod = vec![self.one()];
        for c in &conj {
            let mut next = vec![self.zero(); prod.len() + 1];
            for (i, pi) in prod.iter().enumerate() {
                next[i + 1] = self.add(&next[i + 1], pi);
                next[i] = self.sub(&next[i], &self.mul(c, pi));
            }
            prod = next;
        }
        let coeffs = prod
            .iter()
            .map(|c| self.to_base(c).map_err(|_| Error::CoefficientNotInBase))
            .collect::<Result<Vec<_>>>()?;
        Ok(FqPoly::from_coeffs(coeffs))
    }

    /// The element whose `n` coefficients are the base-`q` digits of
    /// `index`, low degree first.
    pub fn element(&self, index: &BigUint) -> FqnElement {
        let q = self.base.q();
        let mut rest = index % self.size();
        let mut coeffs = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            let (quo, rem) = rest.div_rem(q);
            coeffs.push(self.base.element(&rem));
            rest = quo;
        }
        FqPoly::from_coeffs(coeffs)
    }

    pub fn index(&self, a: &FqnElement) -> BigUint {
        let q = self.base.q();
        a.coeffs.iter().rev().fold(BigUint::zero(), |acc, c| acc * q + self.base.index(c))
    }

    pub fn random(&self, rng: &mut ChaCha8Rng) -> FqnElement {
        FqPoly::from_coeffs((0..self.n).map(|_| self.base.random(rng)).collect())
    }

    /// `n` base-field coefficients, space separated, low degree first.
    pub fn format_element(&self, a: &FqnElement) -> String {
        (0..self.n).map(|i| self.base.format_elem(&a.coeff(i))).collect::<Vec<_>>().join(" ")
    }

    /// Accepts `0`, `g^K` (a power of the class of `T`) or a coefficient
    /// list as written by [`FqnCtx::format_element`].
    pub fn parse_element(&self, text: &str) -> Result<FqnElement> {
        let t = text.trim();
        if let Some(k) = t.strip_prefix("g^") {
            let k: BigUint = k.trim().parse().map_err(|_| Error::Parse(format!("bad exponent in {t:?}")))?;
            return Ok(self.gen_pow(&k));
        }
        let a = self.base.parse_poly(t)?;
        if a.coeffs.len() > self.n {
            return Err(Error::Parse(format!("element {t:?} has more than {} coefficients", self.n)));
        }
        Ok(a)
    }
}

/// Validates a factorization of `order` and returns its distinct primes.
fn check_factorization(order: &BigUint, factors: &[BigUint]) -> Result<Vec<BigUint>> {
    let mut primes: Vec<BigUint> = factors.to_vec();
    primes.sort();
    primes.dedup();
    for r in &primes {
        check_prime(r).map_err(|_| Error::BadFactorization(format!("{r} is not prime")))?;
        if !(order % r).is_zero() {
            return Err(Error::BadFactorization(format!("{r} does not divide {order}")));
        }
    }
    // Every prime of the order must be listed: strip them all and expect 1.
    let mut rest = order.clone();
    for r in &primes {
        while (&rest % r).is_zero() {
            rest /= r;
        }
    }
    if !rest.is_one() {
        return Err(Error::BadFactorization(format!("cofactor {rest} of {order} is not covered")));
    }
    Ok(primes)
}

/// Random search for a primitive polynomial of degree `n` over `base`,
/// deterministic in `seed`. `factors` must cover every prime of `q^n - 1`.
pub fn find_primitive_polynomial(base: &FqCtx, n: usize, factors: &[BigUint], seed: u64) -> Result<FqnCtx> {
    if n == 0 {
        return Err(Error::EmptyWord);
    }
    let order = base.q().pow(n as u32) - 1u32;
    check_factorization(&order, factors)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut coeffs: Vec<Fq> = (0..n).map(|_| base.random(&mut rng)).collect();
        coeffs.push(base.one());
        if coeffs[0].is_zero() {
            continue;
        }
        let f = FqPoly::from_coeffs(coeffs);
        match FqnCtx::with_factors(base.clone(), f, factors) {
            Ok(ctx) => return Ok(ctx),
            Err(Error::NotIrreducible | Error::NotPrimitive) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// Parses an advice file. Layout, one item per line:
/// `p e`; the coefficients of `g` over `F_p` (only when `e > 1`); `n`;
/// the `n + 1` coefficients of `F` over `F_q`, each a comma-separated
/// `F_p` vector; optionally `factors r1 r2 ...` listing the primes of
/// `q^n - 1`. Without that line the order is factored here, which only
/// works at desk scale.
pub fn parse_advice(text: &str) -> Result<FqnCtx> {
    let bad = |m: &str| Error::InvalidAdvice(m.to_string());
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let head: Vec<&str> = lines.next().ok_or_else(|| bad("missing \"p e\" line"))?.split_whitespace().collect();
    let [p, e] = head[..] else {
        return Err(bad("first line must be \"p e\""));
    };
    let p: BigUint = p.parse().map_err(|_| bad("p is not an integer"))?;
    let e: usize = e.parse().map_err(|_| bad("e is not an integer"))?;
    if e == 0 {
        return Err(bad("e must be positive"));
    }
    let base = if e == 1 {
        FqCtx::prime(p)?
    } else {
        let g = lines
            .next()
            .ok_or_else(|| bad("missing g line"))?
            .split_whitespace()
            .map(|s| s.parse::<BigUint>().map_err(|_| bad("g coefficient is not an integer")))
            .collect::<Result<Vec<_>>>()?;
        if g.len() != e + 1 {
            return Err(bad("g must have e + 1 coefficients"));
        }
        FqCtx::new(p, g)?
    };
    let n: usize = lines.next().ok_or_else(|| bad("missing n line"))?.parse().map_err(|_| bad("n is not an integer"))?;
    let f_line = lines.next().ok_or_else(|| bad("missing F line"))?;
    let f_coeffs = f_line
        .split_whitespace()
        .map(|s| base.parse_elem(s).map_err(|e| Error::InvalidAdvice(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    if n == 0 || f_coeffs.len() != n + 1 {
        return Err(bad("F must have n + 1 coefficients with n >= 1"));
    }
    let f = FqPoly::from_coeffs(f_coeffs);
    let factors = match lines.next() {
        Some(line) => {
            let mut parts = line.split_whitespace();
            if parts.next() != Some("factors") {
                return Err(bad("fifth line must start with \"factors\""));
            }
            parts
                .map(|s| s.parse::<BigUint>().map_err(|_| bad("factor is not an integer")))
                .collect::<Result<Vec<_>>>()?
        }
        None => {
            let order = base.q().pow(n as u32) - 1u32;
            crate::oracle::factorize(&order)
                .map_err(|_| bad("q^n - 1 is too large to factor here; supply a factors line"))?
        }
    };
    if lines.next().is_some() {
        return Err(bad("trailing lines"));
    }
    FqnCtx::with_factors(base, f, &factors)
}

/// Serializes a context in the layout read by [`parse_advice`], including
/// the factors line when primes are known.
pub fn format_advice(ctx: &FqnCtx) -> String {
    let base = ctx.base();
    let mut out = format!("{} {}\n", base.p(), base.e());
    if base.e() > 1 {
        let g: Vec<String> = base.g().iter().map(ToString::to_string).collect();
        out += &format!("{}\n", g.join(" "));
    }
    out += &format!("{}\n{}\n", ctx.n(), base.format_poly(ctx.modulus()));
    if !ctx.order_primes().is_empty() {
        let r: Vec<String> = ctx.order_primes().iter().map(ToString::to_string).collect();
        out += &format!("factors {}\n", r.join(" "));
    }
    out
}
