use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{VerifyError, MAX_EXTENSION};
use crate::family::{phi_raw, FamilyParams, Parametrization};
use crate::finitefield::{make_field, Embedding, Fe, FieldCtx, FieldDescriptor};
use crate::toric::Var;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    InV,
    NotInV,
}

/// One `(u_{n-1}, u_n)` pair tried by the search, with the coordinates where
/// `phi(u)` disagrees with the point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub u_n_minus_1: Fe,
    pub u_n: Fe,
    pub mismatched: Vec<Var>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub status: Status,
    /// The queried point, in the base field.
    pub point: Vec<Fe>,
    /// Parameters `u` with `phi(u)` equal to the embedded point, in the
    /// extension field.
    pub witness_params: Option<Vec<Fe>>,
    /// Whether the witness parameters already lie in the base field.
    pub params_in_base_field: bool,
    /// Degree of the search field over the base field.
    pub extension_degree: u32,
    pub extension_field: FieldDescriptor,
    /// The point's coordinates in the extension field.
    pub embedded_point: Vec<Fe>,
    pub roots_n_minus_1: Vec<Fe>,
    pub roots_n: Vec<Fe>,
    pub candidates_tried: usize,
    /// Filled when the oracle runs with a transcript.
    pub transcript: Option<Vec<Candidate>>,
    /// Parameters that had to move off the first root found, e.g. `u2`.
    pub adjusted: Vec<String>,
    pub short_circuit: Option<String>,
}

struct Extension {
    ctx: Arc<FieldCtx>,
    embedding: Embedding,
    par: Parametrization,
}

/// Decides membership in the variety over the algebraic closure.
///
/// With `u_i = x_i` forced for `i <= n-2`, the only freedom is the choice of a
/// `p^l`-th root of `x_{n-1}` and an `a`-th root of `x_n`; every root pair in
/// the search field is tried.
pub struct MembershipOracle {
    params: FamilyParams,
    base: Arc<FieldCtx>,
    transcript: bool,
    cache: Mutex<HashMap<u32, Arc<Extension>>>,
}

impl MembershipOracle {
    pub fn new(params: &FamilyParams, base: &Arc<FieldCtx>) -> Self {
        MembershipOracle {
            params: params.clone(),
            base: base.clone(),
            transcript: false,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_transcript(mut self, on: bool) -> Self {
        self.transcript = on;
        self
    }

    fn extension(&self, m: u32) -> Result<Arc<Extension>, VerifyError> {
        if let Some(e) = self.cache.lock().unwrap().get(&m) {
            return Ok(e.clone());
        }
        let ctx = if m == 1 {
            self.base.clone()
        } else {
            make_field(self.base.characteristic(), self.base.degree() * m)?
        };
        let embedding = Embedding::new(&self.base, &ctx)?;
        let par = Parametrization::new(&self.params, &ctx);
        let ext = Arc::new(Extension { ctx, embedding, par });
        self.cache.lock().unwrap().insert(m, ext.clone());
        Ok(ext)
    }

    /// Whether `x` has an `n`-th root in the degree `m` extension.
    fn has_root(&self, x: Fe, n: &BigUint, m: u32) -> bool {
        if x.is_zero() {
            return true;
        }
        let ch = self.base.characteristic();
        let mut n0 = n.clone();
        while (&n0 % ch).is_zero() {
            n0 /= ch;
        }
        // x is an n0-th power in a cyclic group of order N iff its order
        // divides N / gcd(n0, N).
        let group = num_traits::pow(BigUint::from(self.base.order()), m as usize) - 1u32;
        let o = self.base.multiplicative_order(x).expect("nonzero element");
        ((&group / group.gcd(&n0)) % o).is_zero()
    }

    /// Whether every valid `u_{n-1}` is forced into the base field.
    ///
    /// A valid `u_n` always is: `u_n = x_n^r y_{n-1}^s` with `ar + ds = 1`.
    /// Then `u_{n-1} = y_n / u_n` when `x_n != 0`, and otherwise
    /// `u_{n-1} = x_{n-1}^r' (y_i / x_i^{b_i})^s'` with `p^l r' + c_i s' = 1`
    /// for any `i` with `x_i^{b_i} != 0`.
    fn base_field_suffices(&self, pt: &[Fe]) -> bool {
        let n = self.params.n;
        !pt[n - 1].is_zero() || (1..=n - 2).any(|i| self.params.b[i - 1] == 0 || !pt[i - 1].is_zero())
    }

    /// Degree of the field searched for `u_{n-1}`. Only when nothing but
    /// `u_{n-1}^{p^l} = x_{n-1}` constrains it does the search leave the base
    /// field, and then any one root will do.
    fn extension_degree(&self, point: &[Fe]) -> Result<u32, VerifyError> {
        if self.base_field_suffices(point) {
            return Ok(1);
        }
        let pl = self.params.p_pow_l();
        let x = point[self.params.n - 2];
        (1..=MAX_EXTENSION).find(|&m| self.has_root(x, &pl, m)).ok_or(VerifyError::ExtensionCap)
    }

    fn structural_mismatch(&self, pt: &[Fe]) -> Option<String> {
        let n = self.params.n;
        let (x1, xn) = (pt[n - 2], pt[n - 1]);
        let y = |i: usize| pt[n + i - 1];
        if x1.is_zero() {
            if let Some(i) = (1..=n - 2).chain([n]).find(|&i| !y(i).is_zero()) {
                return Some(format!("x{} = 0 forces y{i} = 0", n - 1));
            }
        }
        if xn.is_zero() {
            if let Some(i) = [n - 1, n].into_iter().find(|&i| !y(i).is_zero()) {
                return Some(format!("x{n} = 0 forces y{i} = 0"));
            }
        }
        if !x1.is_zero() && !xn.is_zero() && y(n).is_zero() {
            return Some(format!("x{} and x{n} nonzero force y{n} != 0", n - 1));
        }
        None
    }

    pub fn decide(&self, point: &[Fe]) -> Result<MembershipVerdict, VerifyError> {
        let n = self.params.n;
        if point.len() != 2 * n || !point.iter().all(|&x| self.base.contains(x)) {
            return Err(VerifyError::Precondition(format!(
                "point must have {} coordinates in {:?}",
                2 * n,
                self.base
            )));
        }
        let mut verdict = MembershipVerdict {
            status: Status::NotInV,
            point: point.to_vec(),
            witness_params: None,
            params_in_base_field: false,
            extension_degree: 1,
            extension_field: self.base.descriptor(),
            embedded_point: point.to_vec(),
            roots_n_minus_1: Vec::new(),
            roots_n: Vec::new(),
            candidates_tried: 0,
            transcript: None,
            adjusted: Vec::new(),
            short_circuit: None,
        };
        if let Some(reason) = self.structural_mismatch(point) {
            verdict.short_circuit = Some(reason);
            return Ok(verdict);
        }
        let m = self.extension_degree(point)?;
        let ext = self.extension(m)?;
        let ctx = &ext.ctx;
        let pt: Vec<Fe> = point.iter().map(|&x| ext.embedding.apply(x)).collect();
        let r1 = ctx.nth_roots(pt[n - 2], &self.params.p_pow_l());
        let r2 = ctx.nth_roots(pt[n - 1], &BigUint::from(self.params.a));
        verdict.extension_degree = m;
        verdict.extension_field = ctx.descriptor();
        verdict.embedded_point = pt.clone();
        let mut transcript = Vec::new();
        let mut u: Vec<Fe> = pt[..n].to_vec();
        let mut image = vec![Fe::ZERO; 2 * n];
        'search: for (k1, &s) in r1.iter().enumerate() {
            for (k2, &t) in r2.iter().enumerate() {
                u[n - 2] = s;
                u[n - 1] = t;
                verdict.candidates_tried += 1;
                ext.par.eval_into(ctx, &u, &mut image);
                if image == pt {
                    let check = phi_raw(&self.params, ctx, &u);
                    if check != pt {
                        return Err(VerifyError::Unsound(format!("{u:?} at {point:?}")));
                    }
                    verdict.status = Status::InV;
                    let q = self.base.order();
                    verdict.params_in_base_field = u.iter().all(|&x| ctx.pow(x, q) == x);
                    verdict.witness_params = Some(u.clone());
                    if k1 > 0 {
                        verdict.adjusted.push(format!("u{}", n - 1));
                    }
                    if k2 > 0 {
                        verdict.adjusted.push(format!("u{n}"));
                    }
                    break 'search;
                }
                if self.transcript {
                    let mismatched = (0..2 * n)
                        .filter(|&k| image[k] != pt[k])
                        .map(|k| Var::from_index(k, n))
                        .collect();
                    transcript.push(Candidate { u_n_minus_1: s, u_n: t, mismatched });
                }
            }
        }
        verdict.roots_n_minus_1 = r1;
        verdict.roots_n = r2;
        if self.transcript {
            verdict.transcript = Some(transcript);
        }
        Ok(verdict)
    }
}

/// One-off membership query with a full candidate transcript.
pub fn membership_oracle(
    point: &[Fe],
    params: &FamilyParams,
    base: &Arc<FieldCtx>,
) -> Result<MembershipVerdict, VerifyError> {
    MembershipOracle::new(params, base).with_transcript(true).decide(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finitefield::make_field;

    fn toy() -> FamilyParams {
        FamilyParams::new(3, 3, 1, 2, 1, vec![0], vec![1])
    }

    #[test]
    fn zero_point_is_in() {
        let f7 = make_field(7, 1).unwrap();
        let v = membership_oracle(&[Fe::ZERO; 6], &toy(), &f7).unwrap();
        assert_eq!(v.status, Status::InV);
        assert_eq!(v.witness_params, Some(vec![Fe::ZERO; 3]));
    }

    #[test]
    fn witness_point_transcript() {
        let f7 = make_field(7, 1).unwrap();
        let pt: Vec<Fe> = [1, 1, 1, 2, 1, 1].iter().map(|&v| Fe(v)).collect();
        let v = membership_oracle(&pt, &toy(), &f7).unwrap();
        assert_eq!(v.status, Status::NotInV);
        assert_eq!(v.extension_degree, 1);
        assert_eq!(v.roots_n_minus_1, vec![Fe(1), Fe(2), Fe(4)]);
        assert_eq!(v.roots_n, vec![Fe(1), Fe(6)]);
        let t = v.transcript.unwrap();
        assert_eq!(t.len(), 6);
        assert!(t.iter().all(|c| !c.mismatched.is_empty()));
        // u = (1, 1, 1) reproduces everything except y1.
        let c = t.iter().find(|c| c.u_n_minus_1 == Fe(1) && c.u_n == Fe(1)).unwrap();
        assert_eq!(c.mismatched, vec![Var::Y(1)]);
    }

    #[test]
    fn images_are_in_with_their_own_field() {
        let f7 = make_field(7, 1).unwrap();
        let oracle = MembershipOracle::new(&toy(), &f7);
        for u0 in 0..7 {
            for u1 in 0..7 {
                for u2 in 0..7 {
                    let pt = phi_raw(&toy(), &f7, &[Fe(u0), Fe(u1), Fe(u2)]);
                    let v = oracle.decide(&pt).unwrap();
                    assert_eq!(v.status, Status::InV);
                    assert_eq!(v.extension_degree, 1);
                }
            }
        }
    }

    #[test]
    fn non_cube_needs_an_extension() {
        // 3 is not a cube in GF(7), so u2 must come from GF(7^3).
        let f7 = make_field(7, 1).unwrap();
        let pt = vec![Fe(0), Fe(3), Fe(0), Fe(0), Fe(0), Fe(0)];
        let p = FamilyParams::new(3, 3, 1, 2, 1, vec![1], vec![1]);
        let v = membership_oracle(&pt, &p, &f7).unwrap();
        assert_eq!(v.status, Status::InV);
        assert_eq!(v.extension_degree, 3);
        let ext = make_field(7, 3).unwrap();
        let u = v.witness_params.unwrap();
        assert_eq!(ext.pow(u[1], 3), v.embedded_point[1]);
        let emb = Embedding::new(&f7, &ext).unwrap();
        assert!(!f7.elements().any(|e| emb.apply(e) == u[1]));
        // With b1 = 0, y1 = u2 must be 0 here; u2 is then forced into GF(7),
        // where 3 has no cube root.
        let v = membership_oracle(&pt, &toy(), &f7).unwrap();
        assert_eq!(v.status, Status::NotInV);
        assert_eq!(v.extension_degree, 1);
        assert!(v.roots_n_minus_1.is_empty());
        assert_eq!(v.transcript.unwrap().len(), 0);
    }

    // Independent oracle: the image of phi over a field holding every root
    // any parameter could need, restricted to base-field points.
    fn brute_membership(params: &FamilyParams, q: u64, k: u32) {
        let base = make_field(q, 1).unwrap();
        let big = make_field(q, k).unwrap();
        let emb = Embedding::new(&base, &big).unwrap();
        let n = params.n;
        let mut image = std::collections::HashSet::new();
        let mut u = vec![Fe::ZERO; n];
        loop {
            image.insert(phi_raw(params, &big, &u));
            let mut k = 0;
            while k < n && u[k].0 + 1 == big.order() {
                u[k] = Fe::ZERO;
                k += 1;
            }
            if k == n {
                break;
            }
            u[k].0 += 1;
        }
        let oracle = MembershipOracle::new(params, &base);
        let mut pt = vec![Fe::ZERO; 2 * n];
        let (mut inside, mut total) = (0, 0);
        loop {
            let embedded: Vec<Fe> = pt.iter().map(|&x| emb.apply(x)).collect();
            let expect = image.contains(&embedded);
            let v = oracle.decide(&pt).unwrap();
            assert_eq!(v.status == Status::InV, expect, "{params:?} at {pt:?}");
            inside += expect as usize;
            total += 1;
            let mut k = 0;
            while k < 2 * n && pt[k].0 + 1 == q {
                pt[k] = Fe::ZERO;
                k += 1;
            }
            if k == 2 * n {
                break;
            }
            pt[k].0 += 1;
        }
        assert!(inside > 0 && inside < total);
    }

    #[test]
    fn agrees_with_image_over_a_splitting_field() {
        for b in [0, 1, 2] {
            let p = FamilyParams::new(3, 3, 1, 2, 1, vec![b], vec![1]);
            brute_membership(&p, 2, 2);
            brute_membership(&p, 5, 2);
            let p = FamilyParams::new(3, 3, 1, 2, 1, vec![b], vec![2]);
            brute_membership(&p, 5, 2);
        }
        let p = FamilyParams::new(4, 3, 1, 1, 2, vec![1, 0], vec![1, 2]);
        brute_membership(&p, 2, 2);
    }

    #[test]
    fn structural_short_circuit() {
        let f7 = make_field(7, 1).unwrap();
        let pt: Vec<Fe> = [1, 0, 1, 5, 1, 0].iter().map(|&v| Fe(v)).collect();
        let v = membership_oracle(&pt, &toy(), &f7).unwrap();
        assert_eq!(v.status, Status::NotInV);
        assert!(v.short_circuit.is_some());
    }
}
