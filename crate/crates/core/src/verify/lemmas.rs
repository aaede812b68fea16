use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{VerifyError, MAX_LISTED};
use crate::family::{construct, FamilyParams};
use crate::toric::{build_matrix, monic_kernel_search, vec_of_binomial, KernelLattice, LatticeVector, Var};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawFailure {
    pub law: String,
    pub vector: LatticeVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma1Report {
    pub params: FamilyParams,
    pub samples: usize,
    pub seed: u64,
    pub kernel_rank: usize,
    /// Sampled vectors plus the vectors of the generated binomials.
    pub vectors_checked: usize,
    /// Indices `i` with `b_i = 0`, where `x_i` never occurs and the law for
    /// `(x_i, y_i)` only holds in the direction `x_i != 0`.
    pub one_sided_indices: Vec<usize>,
    pub failure_count: usize,
    pub failures: Vec<LawFailure>,
    pub passed: bool,
}

fn sign(x: &BigInt) -> Sign {
    x.sign()
}

/// Names of the sign laws `v` breaks.
fn broken_laws(v: &LatticeVector, params: &FamilyParams) -> Vec<String> {
    let n = params.n;
    let mut out = Vec::new();
    for i in 1..=n - 2 {
        let (x, y) = (v.get(Var::X(i)), v.get(Var::Y(i)));
        let opposite = sign(x) == -sign(y);
        let gated = if params.b[i - 1] == 0 { !x.is_zero() } else { !x.is_zero() || !y.is_zero() };
        if gated && !opposite {
            out.push(format!("(i) x{i}/y{i}"));
        }
    }
    let trio = [Var::X(n), Var::Y(n - 1), Var::Y(n)];
    for (k, &u) in trio.iter().enumerate() {
        let s = sign(v.get(u));
        if s != Sign::NoSign && !trio.iter().enumerate().any(|(j, &w)| j != k && sign(v.get(w)) == -s) {
            out.push(format!("(ii) {u}"));
        }
    }
    let s = sign(v.get(Var::X(n - 1)));
    if s != Sign::NoSign {
        let others = (1..=n - 2).map(Var::Y).chain([Var::Y(n)]);
        if !others.into_iter().any(|w| sign(v.get(w)) == -s) {
            out.push(format!("(iii) x{}", n - 1));
        }
    }
    out
}

/// Samples kernel vectors and checks the support laws for `(x_i, y_i)`,
/// `{x_n, y_{n-1}, y_n}` and `x_{n-1}`.
pub fn check_lemma1(params: &FamilyParams, samples: usize, seed: u64) -> Result<Lemma1Report, VerifyError> {
    let sys = construct(params)?;
    let a = build_matrix(params);
    let lattice = KernelLattice::of(&a);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vectors = lattice.sample(&mut rng, samples);
    vectors.extend(sys.full().iter().map(|lb| vec_of_binomial(&lb.binomial, params.n)));
    let mut failures = Vec::new();
    let mut failure_count = 0;
    for v in &vectors {
        for law in broken_laws(v, params) {
            failure_count += 1;
            if failures.len() < MAX_LISTED {
                failures.push(LawFailure { law, vector: v.clone() });
            }
        }
    }
    Ok(Lemma1Report {
        params: params.clone(),
        samples,
        seed,
        kernel_rank: lattice.rank(),
        vectors_checked: vectors.len(),
        one_sided_indices: (1..=params.n - 2).filter(|&i| params.b[i - 1] == 0).collect(),
        failure_count,
        failures,
        passed: failure_count == 0,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma2Entry {
    pub variable: Var,
    pub generator: String,
    pub found: usize,
    /// Multiples `t` of the generator's degree expected up to the bound.
    pub expected_multiples: Vec<u64>,
    /// Degrees `t` at which an expected multiple was not found.
    pub missing: Vec<u64>,
    /// Monic vectors that are not multiples of the generator.
    pub unexpected: Vec<LatticeVector>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma2Report {
    pub params: FamilyParams,
    pub degree_bound: u64,
    pub entries: Vec<Lemma2Entry>,
    pub passed: bool,
}

/// For each `y_i`, `i < n`, every kernel vector monic in `y_i` of degree at
/// most `bound` is a multiple of `vec(F_i)`, and every such multiple is found.
pub fn check_lemma2(params: &FamilyParams, bound: u64) -> Result<Lemma2Report, VerifyError> {
    let sys = construct(params)?;
    let pl = params.p_pow_l();
    if pl > bound.into() || params.a > bound {
        return Err(VerifyError::Precondition(format!(
            "degree bound {bound} must be at least p^l = {pl} and a = {}",
            params.a
        )));
    }
    let n = params.n;
    let a = build_matrix(params);
    let mut entries = Vec::new();
    for i in 1..n {
        let v = Var::Y(i);
        let f = &sys.f[i - 1];
        let base = vec_of_binomial(&f.binomial, n);
        let deg = base.get(v).to_u64().expect("small degree");
        let expected: Vec<u64> = (1..=bound / deg).map(|t| t * deg).collect();
        let found = monic_kernel_search(&a, v, bound);
        let mut hits = Vec::new();
        let mut unexpected = Vec::new();
        for w in &found {
            match w.multiple_of(&base) {
                Some(t) if t.is_positive() => hits.push(t.to_u64().unwrap() * deg),
                _ => {
                    if unexpected.len() < MAX_LISTED {
                        unexpected.push(w.clone());
                    }
                }
            }
        }
        let missing: Vec<u64> = expected.iter().copied().filter(|t| !hits.contains(t)).collect();
        let passed = unexpected.is_empty() && missing.is_empty() && hits.len() == found.len();
        entries.push(Lemma2Entry {
            variable: v,
            generator: f.label.clone(),
            found: found.len(),
            expected_multiples: expected,
            missing,
            unexpected,
            passed,
        });
    }
    let passed = entries.iter().all(|e| e.passed);
    Ok(Lemma2Report { params: params.clone(), degree_bound: bound, entries, passed })
}
