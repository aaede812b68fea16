use std::collections::BTreeSet;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::enumerate::CompiledBinomial;
use super::oracle::{membership_oracle, MembershipVerdict, Status};
use super::VerifyError;
use crate::family::{construct, EquationSystem, FamilyParams};
use crate::finitefield::{make_field, Fe, FieldDescriptor};
use crate::numtheory::{is_prime, solve_dij};
use crate::toric::{Binomial, ExponentMap, Var};

/// Value of one generated binomial at the witness point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinomialEvaluation {
    pub label: String,
    pub binomial: String,
    pub value: Fe,
    pub vanishes: bool,
    /// Which of the support conditions used by the lower-bound argument the
    /// monomials meet. Empty when neither monomial meets any of them.
    pub conditions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCertificate {
    /// `"F"` for the single-index point, `"pair"` for the two-index point.
    pub kind: String,
    pub indices: Vec<usize>,
    pub field: FieldDescriptor,
    /// Primitive `p^l`-th root of unity used.
    pub eta: Fe,
    /// Powers of `eta` placed at `y_i` (and `y_j`).
    pub eta_exponents: Vec<i64>,
    pub point: Vec<Fe>,
    pub evaluations: Vec<BinomialEvaluation>,
    pub vanishing: Vec<String>,
    pub nonvanishing: Vec<String>,
    pub required_vanishing: Vec<String>,
    /// Family (`"H"` or `"G"`) of which some member must not vanish.
    pub required_nonvanishing_family: String,
    pub membership: MembershipVerdict,
    pub valid: bool,
    pub failures: Vec<String>,
}

/// How the exponents at `y_i`, `y_j` are chosen for the pair point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairExponents {
    /// `c_i d_ij - c_j d_ji = gcd(c_i, c_j)`.
    Bezout,
    /// `c_j e_i - c_i e_j = gcd(c_i, c_j)`, which is what rules out a common
    /// `p^l`-th root.
    Swapped,
}

fn support(m: &ExponentMap) -> BTreeSet<Var> {
    m.keys().copied().collect()
}

fn conditions_single(b: &Binomial, i: usize, n: usize) -> Vec<String> {
    let outer: BTreeSet<Var> = [Var::X(n - 1), Var::X(n), Var::Y(n - 1), Var::Y(n)].into();
    let mut local = outer.clone();
    local.extend([Var::X(i), Var::Y(i)]);
    let mut out = BTreeSet::new();
    for m in b.monomials() {
        let s = support(m);
        if s.is_subset(&outer) {
            out.insert("a");
        }
        if !s.is_subset(&local) {
            out.insert("b");
        }
    }
    out.into_iter().map(String::from).collect()
}

fn conditions_pair(b: &Binomial, i: usize, j: usize, n: usize) -> Vec<String> {
    let [p, m] = b.monomials();
    let (sp, sm) = (support(p), support(m));
    let mut out = BTreeSet::new();
    let divides = |s: &BTreeSet<Var>, v: Var| s.contains(&v);
    for k in (1..=n - 2).filter(|&k| k != i && k != j) {
        let (x, y) = (Var::X(k), Var::Y(k));
        if (divides(&sp, x) && divides(&sm, y)) || (divides(&sm, x) && divides(&sp, y)) {
            out.insert("a");
        }
    }
    let trio = [Var::X(n), Var::Y(n - 1), Var::Y(n)];
    for u in trio {
        for v in trio {
            if u != v && divides(&sp, u) && divides(&sm, v) {
                out.insert("b");
            }
        }
    }
    if divides(&sp, Var::X(n - 1)) || divides(&sm, Var::X(n - 1)) {
        out.insert("c");
    }
    let local: BTreeSet<Var> = [Var::X(i), Var::X(j), Var::Y(i), Var::Y(j)].into();
    if sp.is_subset(&local) || sm.is_subset(&local) {
        out.insert("local");
    }
    out.into_iter().map(String::from).collect()
}

struct Setup {
    sys: EquationSystem,
    ctx: std::sync::Arc<crate::finitefield::FieldCtx>,
    eta: Fe,
}

fn setup(params: &FamilyParams, q: u64) -> Result<Setup, VerifyError> {
    let sys = construct(params)?;
    if !is_prime(q) || q == params.p {
        return Err(VerifyError::Precondition(format!(
            "q = {q} must be a prime other than p = {}",
            params.p
        )));
    }
    let ctx = make_field(q, 1)?;
    let order = params
        .p_pow_l()
        .to_u64()
        .ok_or_else(|| VerifyError::Precondition("p^l does not fit in 64 bits".into()))?;
    let eta = ctx.primitive_root_of_unity(order)?;
    Ok(Setup { sys, ctx, eta })
}

#[allow(clippy::too_many_arguments)]
fn certify(
    s: &Setup,
    params: &FamilyParams,
    kind: &str,
    indices: Vec<usize>,
    eta_exponents: Vec<i64>,
    point: Vec<Fe>,
    required: Vec<String>,
    family: &str,
    conditions: impl Fn(&Binomial) -> Vec<String>,
) -> Result<WitnessCertificate, VerifyError> {
    let n = params.n;
    let evaluations: Vec<BinomialEvaluation> = s
        .sys
        .full()
        .into_iter()
        .map(|lb| {
            let value = CompiledBinomial::new(&lb.label, &lb.binomial, n, &s.ctx).eval(&s.ctx, &point);
            BinomialEvaluation {
                label: lb.label.clone(),
                binomial: lb.binomial.to_string(),
                value,
                vanishes: value.is_zero(),
                conditions: conditions(&lb.binomial),
            }
        })
        .collect();
    let vanishing: Vec<String> =
        evaluations.iter().filter(|e| e.vanishes).map(|e| e.label.clone()).collect();
    let nonvanishing: Vec<String> =
        evaluations.iter().filter(|e| !e.vanishes).map(|e| e.label.clone()).collect();
    let membership = membership_oracle(&point, params, &s.ctx)?;
    let mut failures = Vec::new();
    for r in &required {
        if !vanishing.contains(r) {
            failures.push(format!("{r} does not vanish"));
        }
    }
    if !nonvanishing.iter().any(|l| l.starts_with(family)) {
        failures.push(format!("every {family} binomial vanishes"));
    }
    if membership.status == Status::InV {
        failures.push("the point lies on the variety".into());
    }
    Ok(WitnessCertificate {
        kind: kind.into(),
        indices,
        field: s.ctx.descriptor(),
        eta: s.eta,
        eta_exponents,
        point,
        evaluations,
        vanishing,
        nonvanishing,
        required_vanishing: required,
        required_nonvanishing_family: family.into(),
        membership,
        valid: failures.is_empty(),
        failures,
    })
}

/// The point with `x_i = x_{n-1} = x_n = 1`, `y_i = eta`, `y_{n-1} = y_n = 1`
/// and zeros elsewhere: `F_i`, `F_n` vanish there but it is not on the variety.
pub fn witness_f(params: &FamilyParams, i: usize, q: u64) -> Result<WitnessCertificate, VerifyError> {
    let n = params.n;
    if i == 0 || i > n - 2 {
        return Err(VerifyError::Precondition(format!("index {i} must lie in 1..={}", n - 2)));
    }
    let s = setup(params, q)?;
    let mut pt = vec![Fe::ZERO; 2 * n];
    for k in [i - 1, n - 2, n - 1, 2 * n - 2, 2 * n - 1] {
        pt[k] = Fe::ONE;
    }
    pt[n + i - 1] = s.eta;
    let required = vec![format!("F{i}"), format!("F{n}")];
    certify(&s, params, "F", vec![i], vec![1], pt, required, "H", |b| conditions_single(b, i, n))
}

/// The point with `x_i = x_j = x_{n-1} = 1`, `y_i = eta^{e_i}`,
/// `y_j = eta^{e_j}` and zeros elsewhere, with exponents from the Bezout
/// identity for `c_i`, `c_j`.
pub fn witness_pair(
    params: &FamilyParams,
    i: usize,
    j: usize,
    q: u64,
) -> Result<WitnessCertificate, VerifyError> {
    witness_pair_with(params, i, j, q, PairExponents::Bezout)
}

pub fn witness_pair_with(
    params: &FamilyParams,
    i: usize,
    j: usize,
    q: u64,
    choice: PairExponents,
) -> Result<WitnessCertificate, VerifyError> {
    let n = params.n;
    if n < 4 {
        return Err(VerifyError::Precondition("pair witnesses need n >= 4".into()));
    }
    if !(1 <= i && i < j && j <= n - 2) {
        return Err(VerifyError::Precondition(format!("need 1 <= i < j <= {}", n - 2)));
    }
    let s = setup(params, q)?;
    let (ci, cj) = (params.c[i - 1], params.c[j - 1]);
    let (ei, ej) = match choice {
        PairExponents::Bezout => {
            let d = s.sys.certificates.dij(i, j).expect("certificate for every pair");
            (d.d_ij.clone(), d.d_ji.clone())
        }
        PairExponents::Swapped => {
            let d = solve_dij(cj, ci).map_err(|e| VerifyError::Precondition(e.to_string()))?;
            (d.d_ij, d.d_ji)
        }
    };
    let mut pt = vec![Fe::ZERO; 2 * n];
    for k in [i - 1, j - 1, n - 2] {
        pt[k] = Fe::ONE;
    }
    pt[n + i - 1] = s.ctx.pow_signed(s.eta, &ei)?;
    pt[n + j - 1] = s.ctx.pow_signed(s.eta, &ej)?;
    let exps = vec![
        ei.to_i64().expect("small exponent"),
        ej.to_i64().expect("small exponent"),
    ];
    let required = vec![format!("F{i}"), format!("F{j}")];
    let kind = match choice {
        PairExponents::Bezout => "pair",
        PairExponents::Swapped => "pair-swapped",
    };
    certify(&s, params, kind, vec![i, j], exps, pt, required, "G", |b| conditions_pair(b, i, j, n))
}
