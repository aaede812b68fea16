//! Integer certificates for the auxiliary equations of the construction.
//!
//! Every solver returns a small struct of arbitrary-precision integers and
//! every struct can re-check its own defining identity with [`GHCert::check`]
//! and friends. Solvers follow fixed minimality conventions so that the same
//! inputs always produce the same certificate:
//!
//! * `solve_gh`: lexicographically least `(g, h)`.
//! * `solve_gij`: least `m >= l`, then least `g_ij`, then least `g_ji`.
//! * `solve_hk`: least `m >= l`, then least `h`, then least `k` in its residue
//!   class that is a nonnegative combination of `a` and `d`; `t` least.
//! * `solve_dij`: `d_ji` is the least nonnegative solution.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bigser;

/// `solve_hk` gives up after `l + MAX_EXTRA_EXPONENT`.
pub const MAX_EXTRA_EXPONENT: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumTheoryError {
    #[error("gcd(0, 0) is undefined")]
    ZeroGcd,
    #[error("p^l = {target} has no representation a*g + d*h with g, h >= 1 (a = {a}, d = {d})")]
    ConditionIII { target: BigInt, a: BigInt, d: BigInt },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("p = {p} divides c = {c}")]
    DividesCoefficient { p: u64, c: u64 },
    #[error("a = {a} and d = {d} are not coprime")]
    NotCoprime { a: u64, d: u64 },
    #[error("argument must be positive")]
    NonPositive,
    #[error("no certificate found with exponent <= {0}")]
    SearchExhausted(u32),
}

/// Extended Euclid. Returns `(g, x, y)` with `g = gcd(a, b) >= 1` and
/// `a*x + b*y = g`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt, BigInt), NumTheoryError> {
    if a.is_zero() && b.is_zero() {
        return Err(NumTheoryError::ZeroGcd);
    }
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        Ok((-e.gcd, -e.x, -e.y))
    } else {
        Ok((e.gcd, e.x, e.y))
    }
}

/// Inverse of `a` modulo `m`, in `[0, m)`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let (g, x, _) = ext_gcd(a, m).ok()?;
    if !g.is_one() {
        return None;
    }
    Some(x.mod_floor(m))
}

/// Largest `e` with `p^e | x`.
pub fn p_adic_val(x: &BigUint, p: u64) -> u32 {
    assert!(!x.is_zero(), "p-adic valuation of zero");
    assert!(p >= 2);
    let p = BigUint::from(p);
    let mut x = x.clone();
    let mut e = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return e;
        }
        x = q;
        e += 1;
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut f = 3u64;
    while f.saturating_mul(f) <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

/// Prime factorization by trial division, ascending, with multiplicity.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut f = 2u64;
    while f.saturating_mul(f) <= n {
        if n.is_multiple_of(f) {
            let mut e = 0;
            while n.is_multiple_of(f) {
                n /= f;
                e += 1;
            }
            out.push((f, e));
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn pow_big(base: u64, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

fn divisible_by(x: &BigInt, p: u64) -> bool {
    (x % BigInt::from(p)).is_zero()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GHCert {
    #[serde(with = "bigser::int")]
    pub g: BigInt,
    #[serde(with = "bigser::int")]
    pub h: BigInt,
}

impl GHCert {
    pub fn check(&self, p: u64, l: u32, a: u64, d: u64) -> bool {
        self.g >= BigInt::one()
            && self.h >= BigInt::one()
            && BigInt::from(a) * &self.g + BigInt::from(d) * &self.h == pow_big(p, l)
    }
}

/// Least `(g, h)` with `g, h >= 1` and `a*g + d*h = p^l`.
pub fn solve_gh(p: u64, l: u32, a: u64, d: u64) -> Result<GHCert, NumTheoryError> {
    if !is_prime(p) {
        return Err(NumTheoryError::NotPrime(p));
    }
    if l == 0 || a == 0 || d == 0 {
        return Err(NumTheoryError::NonPositive);
    }
    if a.gcd(&d) != 1 {
        return Err(NumTheoryError::NotCoprime { a, d });
    }
    let target = pow_big(p, l);
    let (ab, db) = (BigInt::from(a), BigInt::from(d));
    let fail = || NumTheoryError::ConditionIII {
        target: target.clone(),
        a: ab.clone(),
        d: db.clone(),
    };
    // a*g = p^l (mod d) pins g modulo d; the least positive representative
    // gives the least g and hence the largest h.
    let g = if d == 1 {
        BigInt::one()
    } else {
        let inv = mod_inverse(&ab, &db).ok_or_else(fail)?;
        let r = (&target * inv).mod_floor(&db);
        if r.is_zero() {
            db.clone()
        } else {
            r
        }
    };
    let rest = &target - &ab * &g;
    if rest < db {
        return Err(fail());
    }
    let h = rest / &db;
    Ok(GHCert { g, h })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GijCert {
    #[serde(with = "bigser::int")]
    pub g_ij: BigInt,
    #[serde(with = "bigser::int")]
    pub g_ji: BigInt,
    #[serde(with = "bigser::int")]
    pub r_ij: BigInt,
    pub m_ij: u32,
}

impl GijCert {
    pub fn check(&self, c_i: u64, c_j: u64, p: u64, l: u32) -> bool {
        self.g_ij.is_positive()
            && self.g_ji.is_positive()
            && self.r_ij.is_positive()
            && self.m_ij >= l
            && !divisible_by(&self.g_ij, p)
            && !divisible_by(&self.g_ji, p)
            && BigInt::from(c_i) * &self.g_ij + BigInt::from(c_j) * &self.g_ji
                == &self.r_ij * pow_big(p, self.m_ij)
    }
}

pub fn solve_gij(c_i: u64, c_j: u64, p: u64, l: u32) -> Result<GijCert, NumTheoryError> {
    if !is_prime(p) {
        return Err(NumTheoryError::NotPrime(p));
    }
    for c in [c_i, c_j] {
        if c == 0 || c % p == 0 {
            return Err(NumTheoryError::DividesCoefficient { p, c });
        }
    }
    let (ci, cj) = (BigInt::from(c_i), BigInt::from(c_j));
    for m in l..=l + MAX_EXTRA_EXPONENT {
        let modulus = pow_big(p, m);
        let cj_inv = mod_inverse(&cj, &modulus).expect("p does not divide c_j");
        let mut g_ij = BigInt::one();
        while g_ij <= modulus {
            if !divisible_by(&g_ij, p) {
                // c_j * g_ji = -c_i * g_ij (mod p^m); the residue is a unit.
                let mut g_ji = (-(&ci * &g_ij) * &cj_inv).mod_floor(&modulus);
                if g_ji.is_zero() {
                    g_ji = modulus.clone();
                }
                if !divisible_by(&g_ji, p) {
                    let r_ij = (&ci * &g_ij + &cj * &g_ji) / &modulus;
                    return Ok(GijCert { g_ij, g_ji, r_ij, m_ij: m });
                }
            }
            g_ij += 1;
        }
    }
    Err(NumTheoryError::SearchExhausted(l + MAX_EXTRA_EXPONENT))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HiCert {
    #[serde(with = "bigser::int")]
    pub h_i: BigInt,
    #[serde(with = "bigser::int")]
    pub k_i: BigInt,
    #[serde(with = "bigser::int")]
    pub r_i: BigInt,
    pub m_i: u32,
    #[serde(with = "bigser::int")]
    pub s_i: BigInt,
    #[serde(with = "bigser::int")]
    pub t_i: BigInt,
}

impl HiCert {
    pub fn check(&self, c_i: u64, a: u64, d: u64, p: u64, l: u32) -> bool {
        self.h_i.is_positive()
            && self.k_i.is_positive()
            && self.r_i.is_positive()
            && self.m_i >= l
            && !self.s_i.is_negative()
            && !self.t_i.is_negative()
            && !divisible_by(&self.h_i, p)
            && !divisible_by(&self.k_i, p)
            && BigInt::from(c_i) * &self.h_i + &self.k_i == &self.r_i * pow_big(p, self.m_i)
            && BigInt::from(a) * &self.s_i + BigInt::from(d) * &self.t_i == self.k_i
    }
}

/// Writes `k = a*s + d*t` with `s, t >= 0` and `t` least, if possible.
pub fn nonneg_combination(k: &BigInt, a: u64, d: u64) -> Option<(BigInt, BigInt)> {
    let (ab, db) = (BigInt::from(a), BigInt::from(d));
    let t = if a == 1 {
        BigInt::zero()
    } else {
        let inv = mod_inverse(&db, &ab)?;
        (k * inv).mod_floor(&ab)
    };
    let rest = k - &db * &t;
    if rest.is_negative() {
        return None;
    }
    Some((rest / ab, t))
}

pub fn solve_hk(c_i: u64, a: u64, d: u64, p: u64, l: u32) -> Result<HiCert, NumTheoryError> {
    if !is_prime(p) {
        return Err(NumTheoryError::NotPrime(p));
    }
    if c_i == 0 || c_i.is_multiple_of(p) {
        return Err(NumTheoryError::DividesCoefficient { p, c: c_i });
    }
    if a == 0 || d == 0 {
        return Err(NumTheoryError::NonPositive);
    }
    if a.gcd(&d) != 1 {
        return Err(NumTheoryError::NotCoprime { a, d });
    }
    let ci = BigInt::from(c_i);
    // Every k >= (a-1)(d-1) is representable, so walking one residue class
    // terminates after at most that many steps.
    let frobenius = BigInt::from(a.saturating_sub(1)) * BigInt::from(d.saturating_sub(1));
    for m in l..=l + MAX_EXTRA_EXPONENT {
        let modulus = pow_big(p, m);
        let mut h_i = BigInt::one();
        while h_i <= modulus {
            if !divisible_by(&h_i, p) {
                let mut k_i = (-(&ci * &h_i)).mod_floor(&modulus);
                if k_i.is_zero() {
                    k_i = modulus.clone();
                }
                if !divisible_by(&k_i, p) {
                    loop {
                        if let Some((s_i, t_i)) = nonneg_combination(&k_i, a, d) {
                            let r_i = (&ci * &h_i + &k_i) / &modulus;
                            return Ok(HiCert { h_i, k_i, r_i, m_i: m, s_i, t_i });
                        }
                        if k_i > frobenius {
                            break;
                        }
                        k_i += &modulus;
                    }
                }
            }
            h_i += 1;
        }
    }
    Err(NumTheoryError::SearchExhausted(l + MAX_EXTRA_EXPONENT))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DijCert {
    #[serde(with = "bigser::int")]
    pub d_ij: BigInt,
    #[serde(with = "bigser::int")]
    pub d_ji: BigInt,
}

impl DijCert {
    pub fn check(&self, c_i: u64, c_j: u64) -> bool {
        let g = BigInt::from(c_i.gcd(&c_j));
        BigInt::from(c_i) * &self.d_ij - BigInt::from(c_j) * &self.d_ji == g
    }
}

/// `c_i*d_ij - c_j*d_ji = gcd(c_i, c_j)` with `d_ji` the least nonnegative
/// solution.
pub fn solve_dij(c_i: u64, c_j: u64) -> Result<DijCert, NumTheoryError> {
    if c_i == 0 || c_j == 0 {
        return Err(NumTheoryError::NonPositive);
    }
    let g = c_i.gcd(&c_j);
    let (ci, cj) = (BigInt::from(c_i / g), BigInt::from(c_j / g));
    // c_j' * d_ji = -1 (mod c_i')
    let d_ji = if ci.is_one() {
        BigInt::zero()
    } else {
        let inv = mod_inverse(&cj, &ci).expect("reduced coefficients are coprime");
        (-inv).mod_floor(&ci)
    };
    let d_ij = (BigInt::one() + &cj * &d_ji) / &ci;
    Ok(DijCert { d_ij, d_ji })
}
