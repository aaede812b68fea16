//! Parameters of the variety, their admissibility conditions, the binomial
//! systems `F`, `G`, `H`, and the reported rank bounds.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finitefield::{Fe, FieldCtx, FieldElement, FieldError};
use crate::numtheory::{self, DijCert, GHCert, GijCert, HiCert, NumTheoryError};
use crate::toric::{Binomial, ExponentMap, Var};

/// `(n, p, l, a, d, b_1..b_{n-2}, c_1..c_{n-2})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyParams {
    pub n: usize,
    pub p: u64,
    pub l: u32,
    pub a: u64,
    pub d: u64,
    pub b: Vec<u64>,
    pub c: Vec<u64>,
}

impl FamilyParams {
    pub fn new(n: usize, p: u64, l: u32, a: u64, d: u64, b: Vec<u64>, c: Vec<u64>) -> Self {
        FamilyParams { n, p, l, a, d, b, c }
    }

    pub fn p_pow_l(&self) -> BigUint {
        num_traits::pow(BigUint::from(self.p), self.l as usize)
    }

    /// `p^l` as a machine integer, when it fits.
    pub fn p_pow_l_u64(&self) -> Option<u64> {
        self.p_pow_l().to_u64()
    }

    /// Index pairs `(i, j)`, `1 <= i < j <= n-2`, in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let m = self.n.saturating_sub(2);
        (1..=m).flat_map(move |i| (i + 1..=m).map(move |j| (i, j)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("invalid parameters: {0}")]
    Shape(String),
    #[error("p = {0} is not a prime")]
    NotPrime(u64),
    #[error("condition (I) fails: p divides c_{0}")]
    ConditionI(usize),
    #[error("condition (II) fails: gcd(a, d) = {0}")]
    ConditionII(u64),
    #[error("condition (III) fails: p^l is not a*g + d*h with g, h >= 1")]
    ConditionIII,
    #[error("certificate search failed: {0}")]
    Certificate(NumTheoryError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairGij {
    pub i: usize,
    pub j: usize,
    pub cert: GijCert,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairDij {
    pub i: usize,
    pub j: usize,
    pub cert: DijCert,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexHi {
    pub i: usize,
    pub cert: HiCert,
}

/// Every solved auxiliary integer for one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateSet {
    pub gh: GHCert,
    pub gij: Vec<PairGij>,
    pub hk: Vec<IndexHi>,
    pub dij: Vec<PairDij>,
}

impl CertificateSet {
    /// Re-checks every identity with exact arithmetic.
    pub fn check(&self, params: &FamilyParams) -> bool {
        let FamilyParams { p, l, a, d, .. } = *params;
        let c = |i: usize| params.c[i - 1];
        self.gh.check(p, l, a, d)
            && self.gij.iter().all(|g| g.cert.check(c(g.i), c(g.j), p, l))
            && self.hk.iter().all(|h| h.cert.check(c(h.i), a, d, p, l))
            && self.dij.iter().all(|x| x.cert.check(c(x.i), c(x.j)))
    }

    pub fn gij(&self, i: usize, j: usize) -> Option<&GijCert> {
        self.gij.iter().find(|g| g.i == i && g.j == j).map(|g| &g.cert)
    }

    pub fn dij(&self, i: usize, j: usize) -> Option<&DijCert> {
        self.dij.iter().find(|g| g.i == i && g.j == j).map(|g| &g.cert)
    }

    pub fn hk(&self, i: usize) -> Option<&HiCert> {
        self.hk.iter().find(|h| h.i == i).map(|h| &h.cert)
    }
}

pub fn validate(params: &FamilyParams) -> Result<CertificateSet, ValidationError> {
    let FamilyParams { n, p, l, a, d, .. } = *params;
    if n < 3 {
        return Err(ValidationError::Shape(format!("n = {n} must be at least 3")));
    }
    if params.b.len() != n - 2 || params.c.len() != n - 2 {
        return Err(ValidationError::Shape(format!(
            "b and c must have n-2 = {} entries (got {} and {})",
            n - 2,
            params.b.len(),
            params.c.len()
        )));
    }
    if l == 0 || a == 0 || d == 0 || params.c.contains(&0) {
        return Err(ValidationError::Shape("l, a, d and every c_i must be positive".into()));
    }
    if !numtheory::is_prime(p) {
        return Err(ValidationError::NotPrime(p));
    }
    if let Some(i) = params.c.iter().position(|&c| c % p == 0) {
        return Err(ValidationError::ConditionI(i + 1));
    }
    let g = a.gcd(&d);
    if g != 1 {
        return Err(ValidationError::ConditionII(g));
    }
    let gh = numtheory::solve_gh(p, l, a, d).map_err(|e| match e {
        NumTheoryError::ConditionIII { .. } => ValidationError::ConditionIII,
        other => ValidationError::Certificate(other),
    })?;
    let c = |i: usize| params.c[i - 1];
    let mut gij = Vec::new();
    let mut dij = Vec::new();
    for (i, j) in params.pairs() {
        let cert = numtheory::solve_gij(c(i), c(j), p, l).map_err(ValidationError::Certificate)?;
        gij.push(PairGij { i, j, cert });
        let cert = numtheory::solve_dij(c(i), c(j)).map_err(ValidationError::Certificate)?;
        dij.push(PairDij { i, j, cert });
    }
    let hk = (1..=n - 2)
        .map(|i| {
            numtheory::solve_hk(c(i), a, d, p, l)
                .map(|cert| IndexHi { i, cert })
                .map_err(ValidationError::Certificate)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CertificateSet { gh, gij, hk, dij })
}

fn big(x: &BigInt) -> BigUint {
    x.to_biguint().expect("certificate entries used as exponents are nonnegative")
}

fn mono(terms: &[(Var, BigUint)]) -> ExponentMap {
    let mut m = ExponentMap::new();
    for (v, e) in terms {
        *m.entry(*v).or_default() += e;
    }
    m
}

fn binomial(plus: &[(Var, BigUint)], minus: &[(Var, BigUint)]) -> Binomial {
    Binomial::new(mono(plus), mono(minus)).expect("generated binomials have disjoint supports")
}

/// `F_1..F_n`.
pub fn build_f(params: &FamilyParams, gh: &GHCert) -> Vec<Binomial> {
    let n = params.n;
    let q = params.p_pow_l();
    let mut out: Vec<Binomial> = (1..=n - 2)
        .map(|i| {
            binomial(
                &[(Var::Y(i), q.clone())],
                &[
                    (Var::X(i), &q * params.b[i - 1]),
                    (Var::X(n - 1), BigUint::from(params.c[i - 1])),
                ],
            )
        })
        .collect();
    out.push(binomial(
        &[(Var::Y(n - 1), BigUint::from(params.a))],
        &[(Var::X(n), BigUint::from(params.d))],
    ));
    out.push(binomial(
        &[(Var::Y(n), q)],
        &[
            (Var::X(n - 1), BigUint::one()),
            (Var::X(n), big(&gh.g)),
            (Var::Y(n - 1), big(&gh.h)),
        ],
    ));
    out
}

/// `G_ij` for `i < j`, lexicographic in `(i, j)`.
pub fn build_g(params: &FamilyParams, certs: &[PairGij]) -> Vec<Binomial> {
    let n = params.n;
    certs
        .iter()
        .map(|PairGij { i, j, cert }| {
            let (i, j) = (*i, *j);
            let x_exp = &cert.r_ij * numtheory::pow_big(params.p, cert.m_ij - params.l);
            binomial(
                &[(Var::Y(i), big(&cert.g_ij)), (Var::Y(j), big(&cert.g_ji))],
                &[
                    (Var::X(i), big(&cert.g_ij) * params.b[i - 1]),
                    (Var::X(j), big(&cert.g_ji) * params.b[j - 1]),
                    (Var::X(n - 1), big(&x_exp)),
                ],
            )
        })
        .collect()
}

/// `H_1..H_{n-2}`.
pub fn build_h(params: &FamilyParams, certs: &[IndexHi]) -> Vec<Binomial> {
    let n = params.n;
    certs
        .iter()
        .map(|IndexHi { i, cert }| {
            let i = *i;
            let x_exp = &cert.r_i * numtheory::pow_big(params.p, cert.m_i - params.l);
            binomial(
                &[(Var::Y(i), big(&cert.h_i)), (Var::Y(n), big(&cert.k_i))],
                &[
                    (Var::X(i), big(&cert.h_i) * params.b[i - 1]),
                    (Var::X(n - 1), big(&x_exp)),
                    (Var::X(n), big(&cert.s_i)),
                    (Var::Y(n - 1), big(&cert.t_i)),
                ],
            )
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledBinomial {
    pub label: String,
    pub binomial: Binomial,
}

/// The generated systems together with the certificates they came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationSystem {
    pub params: FamilyParams,
    pub variables: Vec<Var>,
    #[serde(rename = "F")]
    pub f: Vec<LabeledBinomial>,
    #[serde(rename = "G")]
    pub g: Vec<LabeledBinomial>,
    #[serde(rename = "H")]
    pub h: Vec<LabeledBinomial>,
    pub certificates: CertificateSet,
}

impl EquationSystem {
    /// `F`, then `G`, then `H`: the defining system away from characteristic `p`.
    pub fn full(&self) -> Vec<&LabeledBinomial> {
        self.f.iter().chain(&self.g).chain(&self.h).collect()
    }

    pub fn f_only(&self) -> Vec<&LabeledBinomial> {
        self.f.iter().collect()
    }

    pub fn find(&self, label: &str) -> Option<&Binomial> {
        self.full().into_iter().find(|b| b.label == label).map(|b| &b.binomial)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for lb in self.full() {
            s.push_str(&format!("{} = {}\n", lb.label, lb.binomial));
        }
        s
    }
}

pub fn construct(params: &FamilyParams) -> Result<EquationSystem, ValidationError> {
    let certs = validate(params)?;
    let n = params.n;
    let f = build_f(params, &certs.gh)
        .into_iter()
        .enumerate()
        .map(|(k, binomial)| LabeledBinomial { label: format!("F{}", k + 1), binomial })
        .collect();
    let g = build_g(params, &certs.gij)
        .into_iter()
        .zip(&certs.gij)
        .map(|(binomial, c)| LabeledBinomial { label: format!("G{},{}", c.i, c.j), binomial })
        .collect();
    let h = build_h(params, &certs.hk)
        .into_iter()
        .zip(&certs.hk)
        .map(|(binomial, c)| LabeledBinomial { label: format!("H{}", c.i), binomial })
        .collect();
    Ok(EquationSystem {
        params: params.clone(),
        variables: Var::all(n).collect(),
        f,
        g,
        h,
        certificates: certs,
    })
}

/// Binomial and arithmetical rank values for the instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub n: usize,
    pub codim: u64,
    pub bar_char_p: u64,
    pub bar_char_other: u64,
    pub ara_char_p: u64,
    pub ara_other_low: u64,
    pub ara_other_high: u64,
    /// Known exactly only for `n = 3`.
    pub ara_other_exact: Option<u64>,
    /// Size of the generated system `F, G, H`.
    pub generated_system_size: u64,
}

fn choose2(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

pub fn rank_report(params: &FamilyParams) -> RankReport {
    let n = params.n as u64;
    let bar_char_other = if n == 3 { 4 } else { 2 * n - 2 + choose2(n - 2) };
    RankReport {
        n: params.n,
        codim: n,
        bar_char_p: n,
        bar_char_other,
        ara_char_p: n,
        ara_other_low: 2 * n - 2,
        ara_other_high: 2 * n,
        ara_other_exact: (n == 3).then_some(4),
        generated_system_size: n + choose2(n - 2) + (n - 2),
    }
}

/// Exponents of the parametrization reduced for one field, for fast
/// evaluation of `phi`.
#[derive(Debug, Clone)]
pub struct Parametrization {
    n: usize,
    q: u64,
    a: u64,
    d: u64,
    b: Vec<u64>,
    c: Vec<u64>,
}

impl Parametrization {
    pub fn new(params: &FamilyParams, ctx: &FieldCtx) -> Self {
        let r = |x: u64| ctx.reduce_exponent(&BigUint::from(x));
        Parametrization {
            n: params.n,
            q: ctx.reduce_exponent(&params.p_pow_l()),
            a: r(params.a),
            d: r(params.d),
            b: params.b.iter().map(|&x| r(x)).collect(),
            c: params.c.iter().map(|&x| r(x)).collect(),
        }
    }

    /// `phi(u)` written into `out` (length `2n`).
    pub fn eval_into(&self, ctx: &FieldCtx, u: &[Fe], out: &mut [Fe]) {
        let n = self.n;
        debug_assert_eq!(u.len(), n);
        let (u1, un) = (u[n - 2], u[n - 1]);
        for i in 0..n - 2 {
            out[i] = u[i];
            out[n + i] = ctx.mul(ctx.pow(u[i], self.b[i]), ctx.pow(u1, self.c[i]));
        }
        out[n - 2] = ctx.pow(u1, self.q);
        out[n - 1] = ctx.pow(un, self.a);
        out[2 * n - 2] = ctx.pow(un, self.d);
        out[2 * n - 1] = ctx.mul(u1, un);
    }

    pub fn eval(&self, ctx: &FieldCtx, u: &[Fe]) -> Vec<Fe> {
        let mut out = vec![Fe::ZERO; 2 * self.n];
        self.eval_into(ctx, u, &mut out);
        out
    }
}

/// The point `(u_1, .., u_{n-2}, u_{n-1}^{p^l}, u_n^a, u_1^{b_1} u_{n-1}^{c_1}, ..,
/// u_n^d, u_{n-1} u_n)`, computed with unreduced exponents.
pub fn phi(params: &FamilyParams, u: &[FieldElement]) -> Result<Vec<FieldElement>, FieldError> {
    let n = params.n;
    assert_eq!(u.len(), n, "phi takes n parameters");
    let ctx = u[0].ctx().clone();
    let mut raw = Vec::with_capacity(n);
    for x in u {
        if **x.ctx() != *ctx {
            return Err(FieldError::ContextMismatch);
        }
        raw.push(x.value());
    }
    let pt = phi_raw(params, &ctx, &raw);
    pt.into_iter().map(|v| FieldElement::new(&ctx, v)).collect()
}

pub fn phi_raw(params: &FamilyParams, ctx: &Arc<FieldCtx>, u: &[Fe]) -> Vec<Fe> {
    let n = params.n;
    let pw = |x: Fe, e: &BigUint| ctx.pow_big(x, e);
    let (u1, un) = (u[n - 2], u[n - 1]);
    let mut out = vec![Fe::ZERO; 2 * n];
    for i in 0..n - 2 {
        out[i] = u[i];
        out[n + i] = ctx.mul(
            pw(u[i], &BigUint::from(params.b[i])),
            pw(u1, &BigUint::from(params.c[i])),
        );
    }
    out[n - 2] = pw(u1, &params.p_pow_l());
    out[n - 1] = pw(un, &BigUint::from(params.a));
    out[2 * n - 2] = pw(un, &BigUint::from(params.d));
    out[2 * n - 1] = ctx.mul(u1, un);
    out
}

/// Draws a valid instance: `c_i` in `1..=c_max` prime to `p`, `b_i` in
/// `b_range`, and `(a, d)` coprime with `p^l = a g + d h` solvable.
pub fn sample_params<R: Rng>(
    rng: &mut R,
    n: usize,
    p: u64,
    l: u32,
    c_max: u64,
    b_range: std::ops::RangeInclusive<u64>,
) -> FamilyParams {
    let pl = p.pow(l);
    loop {
        let a = rng.gen_range(1..pl);
        let d = rng.gen_range(1..pl);
        let c = (0..n - 2)
            .map(|_| loop {
                let c = rng.gen_range(1..=c_max);
                if c % p != 0 {
                    break c;
                }
            })
            .collect();
        let b = (0..n - 2).map(|_| rng.gen_range(b_range.clone())).collect();
        let params = FamilyParams::new(n, p, l, a, d, b, c);
        if validate(&params).is_ok() {
            return params;
        }
    }
}
