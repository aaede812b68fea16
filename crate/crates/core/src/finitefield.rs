//! Finite fields `GF(q^m)` with deterministic moduli and generators.
//!
//! An element of `GF(q^m)` is stored as a packed integer `Fe`: the
//! coefficients `c_0 + c_1 x + ... + c_{m-1} x^{m-1}` of its residue modulo
//! the context modulus, read as base-`q` digits with `c_0` least significant.
//! So `Fe(0)` is zero, `Fe(1)` is one and the prime subfield is `Fe(0..q)`.
//!
//! The modulus is the least monic irreducible polynomial of degree `m` when
//! lower coefficients are ordered by their packed value; the generator is the
//! least packed value of full multiplicative order. Small fields keep
//! log/antilog tables and all multiplicative work goes through them.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numtheory::{factorize, is_prime};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 48;
/// Fields up to this order get log/antilog tables.
pub const TABLE_LIMIT: u64 = 1 << 20;
/// `nth_roots` scans the whole field up to this order.
pub const EXHAUSTIVE_ROOT_LIMIT: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("field characteristic {0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field GF({q}^{m}) exceeds the supported order 2^48")]
    TooLarge { q: u64, m: u32 },
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("elements belong to different fields")]
    ContextMismatch,
    #[error("no element of order {order} in a multiplicative group of order {group_order}")]
    NoSuchRootOfUnity { order: u64, group_order: u64 },
    #[error("GF({src_q}^{src_m}) does not embed into GF({dst_q}^{dst_m})")]
    IncompatibleFields { src_q: u64, src_m: u32, dst_q: u64, dst_m: u32 },
    #[error("packed value {value} is not an element of a field of order {order}")]
    OutOfRange { value: u64, order: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fe(pub u64);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct LogTables {
    exp: Vec<u64>,
    log: Vec<u32>,
}

/// Serializable summary of a field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub characteristic: u64,
    pub degree: u32,
    pub order: u64,
    /// Monic modulus, coefficients from constant term upwards.
    pub modulus: Vec<u64>,
    pub generator: u64,
}

pub struct FieldCtx {
    q: u64,
    m: u32,
    order: u64,
    modulus: Vec<u64>,
    generator: Fe,
    group_factors: Vec<(u64, u32)>,
    tables: Option<LogTables>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.q, self.m)
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

/// Builds `GF(q^m)`.
pub fn make_field(q: u64, m: u32) -> Result<Arc<FieldCtx>, FieldError> {
    FieldCtx::new(q, m).map(Arc::new)
}

impl FieldCtx {
    pub fn new(q: u64, m: u32) -> Result<FieldCtx, FieldError> {
        if !is_prime(q) {
            return Err(FieldError::NotPrime(q));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let order = q
            .checked_pow(m)
            .filter(|&o| o <= MAX_ORDER)
            .ok_or(FieldError::TooLarge { q, m })?;
        let modulus = least_irreducible(q, m as usize);
        let mut ctx = FieldCtx {
            q,
            m,
            order,
            modulus,
            generator: Fe::ONE,
            group_factors: factorize(order - 1),
            tables: None,
        };
        ctx.generator = (1..order)
            .map(Fe)
            .find(|&g| ctx.has_full_order(g))
            .expect("a finite field has a primitive element");
        if order <= TABLE_LIMIT {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(ctx)
    }

    fn build_tables(&self) -> LogTables {
        let n = (self.order - 1) as usize;
        let mut exp = Vec::with_capacity(n);
        let mut log = vec![0u32; self.order as usize];
        let mut x = Fe::ONE;
        for k in 0..n {
            exp.push(x.0);
            log[x.0 as usize] = k as u32;
            x = self.mul_poly(x, self.generator);
        }
        LogTables { exp, log }
    }

    fn has_full_order(&self, g: Fe) -> bool {
        let n = self.order - 1;
        self.group_factors
            .iter()
            .all(|&(r, _)| self.pow_slow(g, n / r) != Fe::ONE)
    }

    pub fn characteristic(&self) -> u64 {
        self.q
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Order of the multiplicative group.
    pub fn group_order(&self) -> u64 {
        self.order - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> Fe {
        self.generator
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            characteristic: self.q,
            degree: self.m,
            order: self.order,
            modulus: self.modulus.clone(),
            generator: self.generator.0,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.order).map(Fe)
    }

    pub fn contains(&self, x: Fe) -> bool {
        x.0 < self.order
    }

    /// The image of an integer under `Z -> GF(q)`.
    pub fn from_int(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.q as i64) as u64)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Fe {
        assert!(coeffs.len() <= self.m as usize);
        Fe(coeffs.iter().rev().fold(0, |acc, &c| acc * self.q + c % self.q))
    }

    pub fn coeffs(&self, x: Fe) -> Vec<u64> {
        let mut v = x.0;
        (0..self.m)
            .map(|_| {
                let c = v % self.q;
                v /= self.q;
                c
            })
            .collect()
    }

    pub fn add(&self, x: Fe, y: Fe) -> Fe {
        if self.m == 1 {
            return Fe((x.0 + y.0) % self.q);
        }
        let (mut a, mut b) = (x.0, y.0);
        let (mut out, mut place) = (0, 1);
        while a > 0 || b > 0 {
            out += ((a % self.q + b % self.q) % self.q) * place;
            a /= self.q;
            b /= self.q;
            place *= self.q;
        }
        Fe(out)
    }

    pub fn neg(&self, x: Fe) -> Fe {
        if self.m == 1 {
            return Fe((self.q - x.0) % self.q);
        }
        let mut a = x.0;
        let (mut out, mut place) = (0, 1);
        while a > 0 {
            out += ((self.q - a % self.q) % self.q) * place;
            a /= self.q;
            place *= self.q;
        }
        Fe(out)
    }

    pub fn sub(&self, x: Fe, y: Fe) -> Fe {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Fe, y: Fe) -> Fe {
        if x.is_zero() || y.is_zero() {
            return Fe::ZERO;
        }
        if let Some(t) = &self.tables {
            let n = self.order - 1;
            let k = (t.log[x.0 as usize] as u64 + t.log[y.0 as usize] as u64) % n;
            return Fe(t.exp[k as usize]);
        }
        self.mul_poly(x, y)
    }

    fn mul_poly(&self, x: Fe, y: Fe) -> Fe {
        let q = self.q;
        if self.m == 1 {
            return Fe(((x.0 as u128 * y.0 as u128) % q as u128) as u64);
        }
        let (a, b) = (self.coeffs(x), self.coeffs(y));
        let m = self.m as usize;
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % q;
            }
        }
        for top in (m..2 * m - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            // x^top = -sum modulus[k] x^(top-m+k)
            for k in 0..m {
                let idx = top - m + k;
                prod[idx] = (prod[idx] + (q - c) * self.modulus[k]) % q;
            }
            prod[top] = 0;
        }
        self.from_coeffs(&prod[..m])
    }

    fn pow_slow(&self, x: Fe, mut e: u64) -> Fe {
        let (mut base, mut acc) = (x, Fe::ONE);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn pow(&self, x: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if x.is_zero() {
            return Fe::ZERO;
        }
        if let Some(t) = &self.tables {
            let n = self.order - 1;
            let k = (t.log[x.0 as usize] as u128 * e as u128 % n as u128) as usize;
            return Fe(t.exp[k]);
        }
        self.pow_slow(x, e % (self.order - 1))
    }

    /// Exponent equivalent to `e` on the whole field: `x^e = x^r` for every
    /// `x`, including zero, with `r = 0` only for `e = 0`.
    pub fn reduce_exponent(&self, e: &BigUint) -> u64 {
        if e.is_zero() {
            return 0;
        }
        let n = BigUint::from(self.order - 1);
        ((e - 1u32) % n).to_u64().expect("reduced below the group order") + 1
    }

    pub fn pow_big(&self, x: Fe, e: &BigUint) -> Fe {
        self.pow(x, self.reduce_exponent(e))
    }

    /// `x^e` for a possibly negative exponent; `x` must be nonzero when `e < 0`.
    pub fn pow_signed(&self, x: Fe, e: &num_bigint::BigInt) -> Result<Fe, FieldError> {
        let mag = self.pow_big(x, e.magnitude());
        if e.sign() == num_bigint::Sign::Minus {
            self.inv(mag)
        } else {
            Ok(mag)
        }
    }

    pub fn inv(&self, x: Fe) -> Result<Fe, FieldError> {
        if x.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        if let Some(t) = &self.tables {
            let n = self.order - 1;
            let k = (n - t.log[x.0 as usize] as u64) % n;
            return Ok(Fe(t.exp[k as usize]));
        }
        Ok(self.pow_slow(x, self.order - 2))
    }

    /// `generator^k`.
    pub fn exp_gen(&self, k: u64) -> Fe {
        let n = self.order - 1;
        match &self.tables {
            Some(t) => Fe(t.exp[(k % n) as usize]),
            None => self.pow_slow(self.generator, k % n),
        }
    }

    /// Discrete logarithm to the base of the stored generator.
    pub fn log(&self, x: Fe) -> Option<u64> {
        if x.is_zero() {
            return None;
        }
        if let Some(t) = &self.tables {
            return Some(t.log[x.0 as usize] as u64);
        }
        Some(self.pohlig_hellman(x))
    }

    fn pohlig_hellman(&self, x: Fe) -> u64 {
        let n = self.order - 1;
        let mut residue = 0u128;
        let mut modulus = 1u128;
        for &(r, e) in &self.group_factors {
            let re = r.pow(e);
            let g0 = self.pow_slow(self.generator, n / re);
            let h0 = self.pow_slow(x, n / re);
            let gamma = self.pow_slow(g0, re / r);
            let g0_inv = self.inv(g0).expect("generator power is nonzero");
            let mut digits = 0u64;
            let mut rk = 1u64;
            for k in 0..e {
                let shifted = self.mul_poly(self.pow_slow(g0_inv, digits), h0);
                let hk = self.pow_slow(shifted, r.pow(e - 1 - k));
                let dk = self.bsgs(gamma, hk, r);
                digits += dk * rk;
                rk *= r;
            }
            // Combine x = digits (mod re) with the running residue.
            let (re, digits) = (re as u128, digits as u128);
            let inv = mod_inv_u128(modulus % re, re);
            let t = ((digits + re - residue % re) % re) * inv % re;
            residue += modulus * t;
            modulus *= re;
        }
        (residue % n as u128) as u64
    }

    /// Solves `base^k = target` for `k < order` in a cyclic group.
    fn bsgs(&self, base: Fe, target: Fe, order: u64) -> u64 {
        let steps = (order as f64).sqrt().ceil() as u64 + 1;
        let mut baby = std::collections::HashMap::with_capacity(steps as usize);
        let mut cur = Fe::ONE;
        for j in 0..steps {
            baby.entry(cur).or_insert(j);
            cur = self.mul_poly(cur, base);
        }
        let giant = self.inv(self.pow_slow(base, steps)).expect("nonzero");
        let mut gamma = target;
        for i in 0..=steps {
            if let Some(&j) = baby.get(&gamma) {
                return (i * steps + j) % order;
            }
            gamma = self.mul_poly(gamma, giant);
        }
        unreachable!("target is not in the subgroup generated by base")
    }

    pub fn multiplicative_order(&self, x: Fe) -> Option<u64> {
        if x.is_zero() {
            return None;
        }
        let mut ord = self.order - 1;
        for &(r, e) in &self.group_factors {
            for _ in 0..e {
                if self.pow(x, ord / r) == Fe::ONE {
                    ord /= r;
                } else {
                    break;
                }
            }
        }
        Some(ord)
    }

    /// All `y` in this field with `y^n = x`, sorted by packed value.
    pub fn nth_roots(&self, x: Fe, n: &BigUint) -> Vec<Fe> {
        assert!(!n.is_zero(), "root order must be positive");
        let e = self.reduce_exponent(n);
        if x.is_zero() {
            return vec![Fe::ZERO];
        }
        if self.order <= EXHAUSTIVE_ROOT_LIMIT {
            return self.elements().filter(|&y| self.pow(y, e) == x).collect();
        }
        let group = self.order - 1;
        let k = self.log(x).expect("nonzero");
        let g = e.gcd(&group);
        if !k.is_multiple_of(g) {
            return Vec::new();
        }
        let sub = group / g;
        let j0 = if sub == 1 {
            0
        } else {
            ((k / g) as u128 * mod_inv_u128(((e / g) % sub) as u128, sub as u128) % sub as u128)
                as u64
        };
        let mut roots: Vec<Fe> = (0..g).map(|t| self.exp_gen(j0 + t * sub)).collect();
        roots.sort();
        roots
    }

    /// `generator^((|F|-1)/order)`, an element of exact multiplicative order `order`.
    pub fn primitive_root_of_unity(&self, order: u64) -> Result<Fe, FieldError> {
        let group = self.order - 1;
        if order == 0 || !group.is_multiple_of(order) {
            return Err(FieldError::NoSuchRootOfUnity { order, group_order: group });
        }
        Ok(self.exp_gen(group / order))
    }
}

fn mod_inv_u128(a: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let qt = old_r / r;
        (old_r, r) = (r, old_r - qt * r);
        (old_s, s) = (s, old_s - qt * s);
    }
    debug_assert_eq!(old_r, 1, "not invertible");
    old_s.rem_euclid(m as i128) as u128
}

/// Dense polynomials over `GF(q)`, low degree first, used only to pick moduli.
mod poly {
    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv_mod(a: u64, q: u64) -> u64 {
        super::mod_inv_u128(a as u128, q as u128) as u64
    }

    pub fn rem(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let b = trim(b.to_vec());
        let lead_inv = inv_mod(*b.last().expect("nonzero divisor"), q);
        while r.len() >= b.len() {
            let c = r.last().unwrap() * lead_inv % q;
            let shift = r.len() - b.len();
            for (k, &bk) in b.iter().enumerate() {
                r[shift + k] = (r[shift + k] + (q - c) * bk % q) % q;
            }
            r = trim(r);
        }
        r
    }

    pub fn mulmod(a: &[u64], b: &[u64], f: &[u64], q: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj % q) % q;
            }
        }
        rem(&prod, f, q)
    }

    pub fn powmod(a: &[u64], mut e: u64, f: &[u64], q: u64) -> Vec<u64> {
        let mut base = rem(a, f, q);
        let mut acc = vec![1];
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base, f, q);
            }
            base = mulmod(&base, &base, f, q);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, q);
            a = b;
            b = r;
        }
        a
    }

    pub fn sub(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|k| {
                let x = a.get(k).copied().unwrap_or(0);
                let y = b.get(k).copied().unwrap_or(0);
                (x + q - y) % q
            })
            .collect();
        trim(out)
    }

    /// Rabin's test for a monic `f` of degree `m`.
    pub fn is_irreducible(f: &[u64], q: u64) -> bool {
        let m = f.len() - 1;
        if m == 1 {
            return true;
        }
        let x = vec![0, 1];
        // frob[k] = x^(q^k) mod f
        let mut frob = vec![rem(&x, f, q)];
        for _ in 0..m {
            let next = powmod(frob.last().unwrap(), q, f, q);
            frob.push(next);
        }
        if sub(&frob[m], &rem(&x, f, q), q) != Vec::<u64>::new() {
            return false;
        }
        super::factorize(m as u64).iter().all(|&(r, _)| {
            let k = m / r as usize;
            let g = gcd(f, &sub(&frob[k], &x, q), q);
            g.len() == 1
        })
    }
}

fn least_irreducible(q: u64, m: usize) -> Vec<u64> {
    let count = q.pow(m as u32);
    (0..count)
        .map(|k| {
            let mut f: Vec<u64> = Vec::with_capacity(m + 1);
            let mut v = k;
            for _ in 0..m {
                f.push(v % q);
                v /= q;
            }
            f.push(1);
            f
        })
        .find(|f| poly::is_irreducible(f, q))
        .expect("irreducible polynomials exist in every degree")
}

/// A field element bound to its context; arithmetic checks that both operands
/// live in the same field.
#[derive(Clone)]
pub struct FieldElement {
    ctx: Arc<FieldCtx>,
    value: Fe,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{:?}", self.value.0, self.ctx)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && *self.ctx == *other.ctx
    }
}

impl FieldElement {
    pub fn new(ctx: &Arc<FieldCtx>, value: Fe) -> Result<Self, FieldError> {
        if !ctx.contains(value) {
            return Err(FieldError::OutOfRange { value: value.0, order: ctx.order });
        }
        Ok(FieldElement { ctx: ctx.clone(), value })
    }

    pub fn zero(ctx: &Arc<FieldCtx>) -> Self {
        FieldElement { ctx: ctx.clone(), value: Fe::ZERO }
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> Self {
        FieldElement { ctx: ctx.clone(), value: Fe::ONE }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn value(&self) -> Fe {
        self.value
    }

    fn same(&self, other: &Self) -> Result<(), FieldError> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx {
            Ok(())
        } else {
            Err(FieldError::ContextMismatch)
        }
    }

    fn with(&self, value: Fe) -> Self {
        FieldElement { ctx: self.ctx.clone(), value }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        self.same(other)?;
        Ok(self.with(self.ctx.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.same(other)?;
        Ok(self.with(self.ctx.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.same(other)?;
        Ok(self.with(self.ctx.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> Self {
        self.with(self.ctx.neg(self.value))
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        Ok(self.with(self.ctx.inv(self.value)?))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.with(self.ctx.pow(self.value, e))
    }

    pub fn nth_roots(&self, n: u64) -> Vec<FieldElement> {
        self.ctx
            .nth_roots(self.value, &BigUint::from(n))
            .into_iter()
            .map(|v| self.with(v))
            .collect()
    }

    pub fn embed(&self, target: &Arc<FieldCtx>) -> Result<FieldElement, FieldError> {
        let emb = Embedding::new(&self.ctx, target)?;
        Ok(FieldElement { ctx: target.clone(), value: emb.apply(self.value) })
    }
}

pub fn primitive_root_of_unity(ctx: &Arc<FieldCtx>, order: u64) -> Result<FieldElement, FieldError> {
    FieldElement::new(ctx, ctx.primitive_root_of_unity(order)?)
}

/// A fixed field embedding `GF(q^s) -> GF(q^t)` for `s | t`: the root `x` of
/// the source modulus goes to the first root of that modulus among the powers
/// `h^0, h^1, ...` of `h = g^((q^t-1)/(q^s-1))`, `g` the target generator.
#[derive(Clone)]
pub struct Embedding {
    src: Arc<FieldCtx>,
    dst: Arc<FieldCtx>,
    image_of_x: Fe,
}

impl Embedding {
    pub fn new(src: &Arc<FieldCtx>, dst: &Arc<FieldCtx>) -> Result<Self, FieldError> {
        if src.q != dst.q || !dst.m.is_multiple_of(src.m) {
            return Err(FieldError::IncompatibleFields {
                src_q: src.q,
                src_m: src.m,
                dst_q: dst.q,
                dst_m: dst.m,
            });
        }
        let image_of_x = if src.m == 1 {
            Fe::ZERO
        } else {
            let step = dst.exp_gen((dst.order - 1) / (src.order - 1));
            let mut z = Fe::ONE;
            loop {
                if Self::eval_in(dst, &src.modulus, z).is_zero() {
                    break z;
                }
                z = dst.mul(z, step);
            }
        };
        Ok(Embedding { src: src.clone(), dst: dst.clone(), image_of_x })
    }

    fn eval_in(dst: &FieldCtx, coeffs: &[u64], z: Fe) -> Fe {
        coeffs
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| dst.add(dst.mul(acc, z), Fe(c)))
    }

    pub fn source(&self) -> &Arc<FieldCtx> {
        &self.src
    }

    pub fn target(&self) -> &Arc<FieldCtx> {
        &self.dst
    }

    pub fn apply(&self, x: Fe) -> Fe {
        if self.src.m == 1 {
            return x;
        }
        Self::eval_in(&self.dst, &self.src.coeffs(x), self.image_of_x)
    }
}

/// Convenience form of [`Embedding::apply`].
pub fn embed(x: &FieldElement, target: &Arc<FieldCtx>) -> Result<FieldElement, FieldError> {
    x.embed(target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_order(ctx: &FieldCtx, x: Fe) -> u64 {
        let mut y = x;
        let mut k = 1;
        while y != Fe::ONE {
            y = ctx.mul_poly(y, x);
            k += 1;
        }
        k
    }

    #[test]
    fn prime_field_basics() {
        let f7 = make_field(7, 1).unwrap();
        assert_eq!(f7.generator(), Fe(3));
        assert_eq!(f7.mul(Fe(3), Fe(5)), Fe(1));
        assert_eq!(f7.inv(Fe(2)).unwrap(), Fe(4));
        assert_eq!(f7.pow(Fe(5), 0), Fe::ONE);
        assert_eq!(f7.inv(Fe::ZERO), Err(FieldError::ZeroInverse));
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(f2.generator(), Fe(1));
        assert_eq!(make_field(6, 1).unwrap_err(), FieldError::NotPrime(6));
        assert_eq!(make_field(5, 0).unwrap_err(), FieldError::ZeroDegree);
    }

    #[test]
    fn least_primitive_roots_match_brute_force() {
        for q in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43] {
            let f = make_field(q, 1).unwrap();
            let least = (1..q).find(|&g| brute_order(&f, Fe(g)) == q - 1).unwrap();
            assert_eq!(f.generator(), Fe(least), "q={q}");
        }
    }

    #[test]
    fn gf9_modulus_and_generator() {
        let f9 = make_field(3, 2).unwrap();
        // x^2 + 1 is the least irreducible quadratic over GF(3).
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        // x has order 4, x + 1 (packed 4) has order 8.
        assert_eq!(f9.generator(), Fe(4));
        assert_eq!(brute_order(&f9, Fe(3)), 4);
    }

    #[test]
    fn moduli_are_irreducible_by_root_and_factor_search() {
        // For degree <= 3 a polynomial is irreducible iff it has no root.
        for (q, m) in [(2u64, 2u32), (2, 3), (3, 2), (3, 3), (5, 2), (7, 2), (7, 3)] {
            let f = make_field(q, m).unwrap();
            let md = f.modulus();
            for r in 0..q {
                let v = md.iter().rev().fold(0u64, |acc, &c| (acc * r + c) % q);
                assert_ne!(v, 0, "GF({q}^{m}) modulus has root {r}");
            }
        }
    }

    #[test]
    fn field_axioms_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (q, m) in [(2u64, 1u32), (2, 4), (3, 2), (5, 3), (7, 1), (7, 2), (101, 2), (3, 13)] {
            let f = make_field(q, m).unwrap();
            for _ in 0..200 {
                let [x, y, z] = [0; 3].map(|_| Fe(rng.gen_range(0..f.order())));
                assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
                assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
                assert_eq!(f.add(x, f.neg(x)), Fe::ZERO);
                assert_eq!(f.add(f.add(x, y), z), f.add(x, f.add(y, z)));
                if !x.is_zero() {
                    assert_eq!(f.mul(x, f.inv(x).unwrap()), Fe::ONE);
                    assert_eq!(f.exp_gen(f.log(x).unwrap()), x);
                }
            }
        }
    }

    #[test]
    fn table_free_field_agrees_with_tables() {
        // GF(3^13) has no tables; compare pow/log against slow paths.
        let f = make_field(3, 13).unwrap();
        assert!(f.tables.is_none());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x = Fe(rng.gen_range(1..f.order()));
            let k = f.log(x).unwrap();
            assert_eq!(f.pow_slow(f.generator(), k), x);
        }
    }

    #[test]
    fn frobenius_is_bijective() {
        for (p, k) in [(2u64, 1u32), (2, 3), (3, 2), (5, 1), (5, 2)] {
            let f = make_field(p, k).unwrap();
            for l in 1..=3u32 {
                let e = p.pow(l);
                let mut image: Vec<Fe> = f.elements().map(|x| f.pow(x, e)).collect();
                image.sort();
                image.dedup();
                assert_eq!(image.len() as u64, f.order());
            }
        }
    }

    #[test]
    fn nth_root_examples() {
        let f7 = make_field(7, 1).unwrap();
        let n = |k: u32| BigUint::from(k);
        assert_eq!(f7.nth_roots(Fe(1), &n(3)), vec![Fe(1), Fe(2), Fe(4)]);
        assert_eq!(f7.nth_roots(Fe(0), &n(3)), vec![Fe(0)]);
        assert!(f7.nth_roots(Fe(3), &n(2)).is_empty());
    }

    #[test]
    fn nth_root_counts_exhaustive() {
        for (q, m) in [(2u64, 1u32), (3, 1), (5, 1), (7, 1), (11, 1), (2, 2), (3, 2), (2, 3), (5, 2), (11, 2)] {
            let f = make_field(q, m).unwrap();
            let group = f.order() - 1;
            for n in 1..=12u64 {
                let nb = BigUint::from(n);
                let powers: std::collections::BTreeSet<Fe> =
                    f.elements().skip(1).map(|y| f.pow(y, n)).collect();
                for x in f.elements().skip(1) {
                    let roots = f.nth_roots(x, &nb);
                    let expected = if powers.contains(&x) { n.gcd(&group) } else { 0 };
                    assert_eq!(roots.len() as u64, expected, "GF({q}^{m}) x={x} n={n}");
                    assert!(roots.iter().all(|&y| f.pow(y, n) == x));
                }
            }
        }
    }

    #[test]
    fn discrete_log_roots_match_scan() {
        // GF(3^9) = 19683 elements: above the scan limit, uses logarithms.
        let f = make_field(3, 9).unwrap();
        assert!(f.order() > EXHAUSTIVE_ROOT_LIMIT);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2u64, 3, 13, 26, 9] {
            let x = f.pow(Fe(rng.gen_range(1..f.order())), n);
            let roots = f.nth_roots(x, &BigUint::from(n));
            let scan: Vec<Fe> = f.elements().filter(|&y| f.pow(y, n) == x).collect();
            assert_eq!(roots, scan);
        }
    }

    #[test]
    fn roots_of_unity() {
        let f7 = make_field(7, 1).unwrap();
        assert_eq!(f7.primitive_root_of_unity(3).unwrap(), Fe(2));
        assert_eq!(f7.primitive_root_of_unity(1).unwrap(), Fe(1));
        assert_eq!(
            f7.primitive_root_of_unity(5),
            Err(FieldError::NoSuchRootOfUnity { order: 5, group_order: 6 })
        );
        for (q, m) in [(13u64, 1u32), (3, 4), (7, 2)] {
            let f = make_field(q, m).unwrap();
            let group = f.order() - 1;
            for r in (1..=group).filter(|r| group.is_multiple_of(*r)) {
                let eta = f.primitive_root_of_unity(r).unwrap();
                assert_eq!(f.pow(eta, r), Fe::ONE);
                for s in (1..r).filter(|s| r % s == 0) {
                    assert_ne!(f.pow(eta, s), Fe::ONE);
                }
            }
        }
    }

    #[test]
    fn embedding_is_a_ring_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (q, s, t) in [(7u64, 1u32, 2u32), (2, 2, 4), (3, 2, 6), (5, 1, 3), (2, 3, 6)] {
            let src = make_field(q, s).unwrap();
            let dst = make_field(q, t).unwrap();
            let e = Embedding::new(&src, &dst).unwrap();
            assert_eq!(e.apply(Fe::ZERO), Fe::ZERO);
            assert_eq!(e.apply(Fe::ONE), Fe::ONE);
            for _ in 0..100 {
                let x = Fe(rng.gen_range(0..src.order()));
                let y = Fe(rng.gen_range(0..src.order()));
                assert_eq!(e.apply(src.mul(x, y)), dst.mul(e.apply(x), e.apply(y)));
                assert_eq!(e.apply(src.add(x, y)), dst.add(e.apply(x), e.apply(y)));
            }
        }
        let f7 = make_field(7, 1).unwrap();
        let f49 = make_field(7, 2).unwrap();
        let three = FieldElement::new(&f7, Fe(3)).unwrap();
        let two = FieldElement::new(&f7, Fe(2)).unwrap();
        assert_eq!(three.embed(&f49).unwrap().pow(2), two.embed(&f49).unwrap());
        let f8 = make_field(2, 3).unwrap();
        assert!(matches!(
            Embedding::new(&f49, &f8),
            Err(FieldError::IncompatibleFields { .. })
        ));
        assert!(Embedding::new(&make_field(2, 2).unwrap(), &f8).is_err());
    }

    #[test]
    fn element_wrapper_checks_context() {
        let f7 = make_field(7, 1).unwrap();
        let f5 = make_field(5, 1).unwrap();
        let a = FieldElement::new(&f7, Fe(3)).unwrap();
        let b = FieldElement::new(&f5, Fe(3)).unwrap();
        assert_eq!(a.mul(&b), Err(FieldError::ContextMismatch));
        assert_eq!(a.mul(&FieldElement::new(&f7, Fe(5)).unwrap()).unwrap().value(), Fe(1));
        assert!(FieldElement::zero(&f7).inv().is_err());
        assert!(FieldElement::new(&f7, Fe(7)).is_err());
        assert_eq!(a.nth_roots(1).len(), 1);
    }
}
