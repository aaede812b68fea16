//! Exponent matrix of the monomial parametrization, its integer kernel, and
//! binomials as pairs of exponent maps.
//!
//! A binomial `M - M'` lies in the toric ideal exactly when the difference of
//! its exponent vectors is in the kernel of the exponent matrix.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::bigser;
use crate::family::FamilyParams;

/// A coordinate of the ambient space. Indices are 1-based, as in `x1..xn`,
/// `y1..yn`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X(usize),
    Y(usize),
}

impl Var {
    /// Position in the dense ordering `x1..xn, y1..yn`.
    pub fn index(self, n: usize) -> usize {
        match self {
            Var::X(i) => i - 1,
            Var::Y(i) => n + i - 1,
        }
    }

    pub fn from_index(k: usize, n: usize) -> Var {
        if k < n {
            Var::X(k + 1)
        } else {
            Var::Y(k - n + 1)
        }
    }

    pub fn all(n: usize) -> impl Iterator<Item = Var> {
        (0..2 * n).map(move |k| Var::from_index(k, n))
    }

    fn number(self) -> usize {
        match self {
            Var::X(i) | Var::Y(i) => i,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{i}"),
            Var::Y(i) => write!(f, "y{i}"),
        }
    }
}

impl FromStr for Var {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (head, tail) = s.split_at(s.len().min(1));
        let i: usize = tail.parse().map_err(|_| format!("bad variable name {s:?}"))?;
        if i == 0 {
            return Err(format!("bad variable name {s:?}"));
        }
        match head {
            "x" => Ok(Var::X(i)),
            "y" => Ok(Var::Y(i)),
            _ => Err(format!("bad variable name {s:?}")),
        }
    }
}

impl Serialize for Var {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Var {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Sparse exponent vector; zero exponents are never stored.
pub type ExponentMap = BTreeMap<Var, BigUint>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BinomialError {
    #[error("the two monomials are equal")]
    EqualMonomials,
    #[error("variable {0} occurs in both monomials")]
    SharedSupport(Var),
    #[error("the zero vector has no binomial")]
    ZeroVector,
}

/// `M - M'` with disjoint supports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawBinomial", into = "RawBinomial")]
pub struct Binomial {
    plus: ExponentMap,
    minus: ExponentMap,
}

#[derive(Serialize, Deserialize)]
struct RawBinomial {
    #[serde(with = "bigser::uint_map")]
    plus: ExponentMap,
    #[serde(with = "bigser::uint_map")]
    minus: ExponentMap,
}

impl TryFrom<RawBinomial> for Binomial {
    type Error = BinomialError;
    fn try_from(r: RawBinomial) -> Result<Self, Self::Error> {
        Binomial::new(r.plus, r.minus)
    }
}

impl From<Binomial> for RawBinomial {
    fn from(b: Binomial) -> Self {
        RawBinomial { plus: b.plus, minus: b.minus }
    }
}

impl Binomial {
    pub fn new(mut plus: ExponentMap, mut minus: ExponentMap) -> Result<Self, BinomialError> {
        plus.retain(|_, e| !e.is_zero());
        minus.retain(|_, e| !e.is_zero());
        if plus == minus {
            return Err(BinomialError::EqualMonomials);
        }
        if let Some(v) = plus.keys().find(|v| minus.contains_key(v)) {
            return Err(BinomialError::SharedSupport(*v));
        }
        Ok(Binomial { plus, minus })
    }

    /// Builds a binomial from `(variable, exponent)` lists.
    pub fn from_terms<E: Into<BigUint>>(
        plus: impl IntoIterator<Item = (Var, E)>,
        minus: impl IntoIterator<Item = (Var, E)>,
    ) -> Result<Self, BinomialError> {
        let collect = |it: Box<dyn Iterator<Item = (Var, E)>>| {
            let mut m = ExponentMap::new();
            for (v, e) in it {
                *m.entry(v).or_insert_with(BigUint::zero) += e.into();
            }
            m
        };
        Binomial::new(
            collect(Box::new(plus.into_iter())),
            collect(Box::new(minus.into_iter())),
        )
    }

    pub fn plus(&self) -> &ExponentMap {
        &self.plus
    }

    pub fn minus(&self) -> &ExponentMap {
        &self.minus
    }

    pub fn monomials(&self) -> [&ExponentMap; 2] {
        [&self.plus, &self.minus]
    }

    /// Largest variable number occurring, so the binomial lives in `2n`
    /// variables for every `n` at least this.
    pub fn max_index(&self) -> usize {
        self.plus
            .keys()
            .chain(self.minus.keys())
            .map(|v| v.number())
            .max()
            .unwrap_or(0)
    }

    /// True if the plus-monomial is a pure power of `v`.
    pub fn is_monic_in(&self, v: Var) -> bool {
        self.plus.len() == 1 && self.plus.contains_key(&v)
    }
}

fn fmt_monomial(m: &ExponentMap, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if m.is_empty() {
        return write!(f, "1");
    }
    for (k, (v, e)) in m.iter().enumerate() {
        if k > 0 {
            write!(f, "*")?;
        }
        if e.is_one() {
            write!(f, "{v}")?;
        } else {
            write!(f, "{v}^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Binomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_monomial(&self.plus, f)?;
        write!(f, " - ")?;
        fmt_monomial(&self.minus, f)
    }
}

/// Integer vector in `Z^{2n}`, ordered `x1..xn, y1..yn`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVector(pub Vec<BigInt>);

impl Serialize for LatticeVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|x| x.to_string()))
    }
}

impl<'de> Deserialize<'de> for LatticeVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Entry(#[serde(with = "bigser::int")] BigInt);
        let v = Vec::<Entry>::deserialize(d)?;
        Ok(LatticeVector(v.into_iter().map(|e| e.0).collect()))
    }
}

impl LatticeVector {
    pub fn from_i64(v: &[i64]) -> Self {
        LatticeVector(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn n(&self) -> usize {
        self.0.len() / 2
    }

    pub fn get(&self, v: Var) -> &BigInt {
        &self.0[v.index(self.n())]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, t: &BigInt) -> Self {
        LatticeVector(self.0.iter().map(|x| x * t).collect())
    }

    /// `Some(t)` if `self = t * base`.
    pub fn multiple_of(&self, base: &LatticeVector) -> Option<BigInt> {
        let k = base.0.iter().position(|x| !x.is_zero())?;
        let (t, r) = self.0[k].div_rem(&base.0[k]);
        (r.is_zero() && base.scaled(&t) == *self).then_some(t)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// `plus - minus` as a dense vector in `Z^{2n}`.
pub fn vec_of_binomial(b: &Binomial, n: usize) -> LatticeVector {
    assert!(b.max_index() <= n, "binomial uses variables beyond n = {n}");
    let mut v = vec![BigInt::zero(); 2 * n];
    for (var, e) in &b.plus {
        v[var.index(n)] += BigInt::from(e.clone());
    }
    for (var, e) in &b.minus {
        v[var.index(n)] -= BigInt::from(e.clone());
    }
    LatticeVector(v)
}

/// Positive coordinates go to the plus-monomial, negative to the minus one.
pub fn binomial_of_vec(v: &LatticeVector) -> Result<Binomial, BinomialError> {
    if v.is_zero() {
        return Err(BinomialError::ZeroVector);
    }
    let n = v.n();
    let (mut plus, mut minus) = (ExponentMap::new(), ExponentMap::new());
    for (k, x) in v.0.iter().enumerate() {
        match x.sign() {
            Sign::Plus => {
                plus.insert(Var::from_index(k, n), x.magnitude().clone());
            }
            Sign::Minus => {
                minus.insert(Var::from_index(k, n), x.magnitude().clone());
            }
            Sign::NoSign => {}
        }
    }
    Binomial::new(plus, minus)
}

/// The `n x 2n` exponent matrix; column `k` is the exponent of the parameters
/// `u_1..u_n` in the `k`-th coordinate function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentMatrix {
    n: usize,
    rows: Vec<Vec<BigInt>>,
}

pub fn build_matrix(params: &FamilyParams) -> ExponentMatrix {
    let n = params.n;
    let mut rows = vec![vec![BigInt::zero(); 2 * n]; n];
    let mut set = |row: usize, var: Var, val: BigInt| rows[row - 1][var.index(n)] = val;
    for i in 1..=n - 2 {
        set(i, Var::X(i), BigInt::one());
        set(i, Var::Y(i), BigInt::from(params.b[i - 1]));
        set(n - 1, Var::Y(i), BigInt::from(params.c[i - 1]));
    }
    set(n - 1, Var::X(n - 1), BigInt::from(params.p_pow_l()));
    set(n, Var::X(n), BigInt::from(params.a));
    set(n, Var::Y(n - 1), BigInt::from(params.d));
    set(n - 1, Var::Y(n), BigInt::one());
    set(n, Var::Y(n), BigInt::one());
    ExponentMatrix { n, rows }
}

impl ExponentMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == 2 * n));
        ExponentMatrix { n, rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn column(&self, v: Var) -> Vec<BigInt> {
        let k = v.index(self.n);
        self.rows.iter().map(|r| r[k].clone()).collect()
    }

    pub fn apply(&self, v: &LatticeVector) -> Vec<BigInt> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(&v.0).map(|(a, x)| a * x).sum())
            .collect()
    }

    pub fn annihilates(&self, v: &LatticeVector) -> bool {
        self.apply(v).iter().all(Zero::is_zero)
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut m = self.rows.clone();
        echelonize(&mut m, self.rows[0].len())
    }
}

/// Integer row echelon form on the first `cols` columns by gcd-style row
/// operations (unimodular). Returns the rank.
fn echelonize(m: &mut [Vec<BigInt>], cols: usize) -> usize {
    let mut pivot = 0;
    for c in 0..cols {
        if pivot == m.len() {
            break;
        }
        loop {
            let best = (pivot..m.len())
                .filter(|&r| !m[r][c].is_zero())
                .min_by(|&r, &s| m[r][c].abs().cmp(&m[s][c].abs()));
            let Some(best) = best else { break };
            m.swap(pivot, best);
            let mut done = true;
            for r in pivot + 1..m.len() {
                if m[r][c].is_zero() {
                    continue;
                }
                let q = m[r][c].div_floor(&m[pivot][c]);
                let (head, tail) = m.split_at_mut(r);
                for (x, y) in tail[0].iter_mut().zip(&head[pivot]) {
                    *x -= &q * y;
                }
                if !tail[0][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !m[pivot][c].is_zero() {
            if m[pivot][c].is_negative() {
                for x in m[pivot].iter_mut() {
                    *x = -x.clone();
                }
            }
            pivot += 1;
        }
    }
    pivot
}

/// A basis of the kernel lattice `{v in Z^{2n} : A v = 0}` in row echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelLattice {
    basis: Vec<LatticeVector>,
}

pub fn kernel_basis(a: &ExponentMatrix) -> Vec<LatticeVector> {
    KernelLattice::of(a).basis
}

impl KernelLattice {
    pub fn of(a: &ExponentMatrix) -> Self {
        let n = a.n;
        let dim = 2 * n;
        // Rows [A^T | I]; echelonizing the left block with unimodular row
        // operations leaves kernel vectors in the right block of zero rows.
        let mut m: Vec<Vec<BigInt>> = (0..dim)
            .map(|k| {
                let mut row: Vec<BigInt> = a.rows.iter().map(|r| r[k].clone()).collect();
                row.extend((0..dim).map(|j| if j == k { BigInt::one() } else { BigInt::zero() }));
                row
            })
            .collect();
        let rank = echelonize(&mut m, n);
        let mut basis: Vec<Vec<BigInt>> = m[rank..].iter().map(|r| r[n..].to_vec()).collect();
        let r = echelonize(&mut basis, dim);
        debug_assert_eq!(r, basis.len());
        KernelLattice { basis: basis.into_iter().map(LatticeVector).collect() }
    }

    pub fn basis(&self) -> &[LatticeVector] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Integer coordinates of `v` in the echelon basis, if `v` is in the lattice.
    pub fn coordinates(&self, v: &LatticeVector) -> Option<Vec<BigInt>> {
        let mut rest = v.0.clone();
        let mut coords = Vec::with_capacity(self.basis.len());
        for b in &self.basis {
            let pc = b.0.iter().position(|x| !x.is_zero())?;
            let (t, r) = rest[pc].div_rem(&b.0[pc]);
            if !r.is_zero() {
                return None;
            }
            for (x, y) in rest.iter_mut().zip(&b.0) {
                *x -= &t * y;
            }
            coords.push(t);
        }
        rest.iter().all(Zero::is_zero).then_some(coords)
    }

    /// Random nonzero lattice vectors with basis coefficients in `[-3, 3]`.
    pub fn sample<R: Rng>(&self, rng: &mut R, count: usize) -> Vec<LatticeVector> {
        let dim = self.basis.first().map_or(0, |b| b.dim());
        let mut out = Vec::with_capacity(count);
        while out.len() < count && !self.basis.is_empty() {
            let mut v = vec![BigInt::zero(); dim];
            for b in &self.basis {
                let t = BigInt::from(rng.gen_range(-3i64..=3));
                for (x, y) in v.iter_mut().zip(&b.0) {
                    *x += &t * y;
                }
            }
            let v = LatticeVector(v);
            if !v.is_zero() {
                out.push(v);
            }
        }
        out
    }
}

pub fn in_ideal(b: &Binomial, a: &ExponentMatrix) -> bool {
    b.max_index() <= a.n && a.annihilates(&vec_of_binomial(b, a.n))
}

/// All kernel vectors whose positive part is `t * e_v` for `1 <= t <= bound`,
/// i.e. binomials of the ideal monic in `v` of degree at most `bound`.
/// Sorted by `t`, then by vector.
pub fn monic_kernel_search(a: &ExponentMatrix, v: Var, bound: u64) -> Vec<LatticeVector> {
    let n = a.n;
    let target = v.index(n);
    let cols: Vec<(usize, Vec<BigInt>)> = (0..2 * n)
        .filter(|&k| k != target)
        .map(|k| (k, a.rows.iter().map(|r| r[k].clone()).collect()))
        .collect();
    let col_v = a.column(v);
    let mut out = Vec::new();
    for t in 1..=bound {
        let tb = BigInt::from(t);
        let rhs: Vec<BigInt> = col_v.iter().map(|x| x * &tb).collect();
        let mut found = Vec::new();
        let mut assignment = vec![BigInt::zero(); cols.len()];
        nonneg_solutions(&cols, 0, rhs, &mut assignment, &mut found);
        for w in found {
            let mut vec = vec![BigInt::zero(); 2 * n];
            vec[target] = tb.clone();
            for ((k, _), x) in cols.iter().zip(&w) {
                vec[*k] = -x.clone();
            }
            out.push(LatticeVector(vec));
        }
    }
    out
}

/// Depth-first enumeration of `w >= 0` with `sum_k w_k * col_k = rhs`, for
/// columns with nonnegative entries.
fn nonneg_solutions(
    cols: &[(usize, Vec<BigInt>)],
    depth: usize,
    rhs: Vec<BigInt>,
    assignment: &mut Vec<BigInt>,
    found: &mut Vec<Vec<BigInt>>,
) {
    // Each row with something left to cover needs a remaining column.
    for (r, x) in rhs.iter().enumerate() {
        if x.is_negative() {
            return;
        }
        if x.is_positive() && !cols[depth..].iter().any(|(_, c)| c[r].is_positive()) {
            return;
        }
    }
    if depth == cols.len() {
        found.push(assignment.clone());
        return;
    }
    let col = &cols[depth].1;
    let bound = col
        .iter()
        .zip(&rhs)
        .filter(|(c, _)| c.is_positive())
        .map(|(c, x)| x / c)
        .min()
        .unwrap_or_else(BigInt::zero);
    let mut w = BigInt::zero();
    while w <= bound {
        let next: Vec<BigInt> = rhs.iter().zip(col).map(|(x, c)| x - c * &w).collect();
        assignment[depth] = w.clone();
        nonneg_solutions(cols, depth + 1, next, assignment, found);
        w += 1;
    }
    assignment[depth] = BigInt::zero();
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> FamilyParams {
        FamilyParams::new(3, 3, 1, 2, 1, vec![0], vec![1])
    }

    fn lv(v: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(v)
    }

    #[test]
    fn toy_matrix() {
        let a = build_matrix(&toy());
        let expect: Vec<Vec<BigInt>> = [[1, 0, 0, 0, 0, 0], [0, 3, 0, 1, 0, 1], [0, 0, 2, 0, 1, 1]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(a.rows(), expect.as_slice());
        assert_eq!(a.rank(), 3);
        let yn = a.column(Var::Y(3));
        assert_eq!(yn, vec![BigInt::zero(), BigInt::one(), BigInt::one()]);
    }

    #[test]
    fn var_names_round_trip() {
        for v in Var::all(5) {
            assert_eq!(v.to_string().parse::<Var>().unwrap(), v);
            assert_eq!(Var::from_index(v.index(5), 5), v);
        }
        assert!("z1".parse::<Var>().is_err());
        assert!("x0".parse::<Var>().is_err());
        assert!("x".parse::<Var>().is_err());
    }

    #[test]
    fn binomial_invariants() {
        let y13_x2 = Binomial::from_terms([(Var::Y(1), 3u32)], [(Var::X(2), 1u32)]).unwrap();
        assert_eq!(vec_of_binomial(&y13_x2, 3), lv(&[0, -1, 0, 3, 0, 0]));
        assert_eq!(binomial_of_vec(&vec_of_binomial(&y13_x2, 3)).unwrap(), y13_x2);
        assert_eq!(y13_x2.to_string(), "y1^3 - x2");
        assert_eq!(
            Binomial::from_terms([(Var::X(1), 1u32)], [(Var::X(1), 1u32)]),
            Err(BinomialError::EqualMonomials)
        );
        assert_eq!(
            Binomial::from_terms([(Var::X(1), 1u32)], [(Var::X(1), 2u32)]),
            Err(BinomialError::SharedSupport(Var::X(1)))
        );
        assert_eq!(binomial_of_vec(&lv(&[0; 6])), Err(BinomialError::ZeroVector));
        // 1 - x1 is a valid binomial; its plus-monomial is empty.
        let b = Binomial::from_terms::<u32>([], [(Var::X(1), 1u32)]).unwrap();
        assert_eq!(b.to_string(), "1 - x1");
    }

    #[test]
    fn membership_examples() {
        let a = build_matrix(&toy());
        let f1 = Binomial::from_terms([(Var::Y(1), 3u32)], [(Var::X(2), 1u32)]).unwrap();
        assert!(in_ideal(&f1, &a));
        let bad = Binomial::from_terms([(Var::Y(1), 1u32)], [(Var::X(1), 1u32)]).unwrap();
        assert!(!in_ideal(&bad, &a));
        let too_big = Binomial::from_terms([(Var::Y(4), 1u32)], [(Var::X(1), 1u32)]).unwrap();
        assert!(!in_ideal(&too_big, &a));
    }

    #[test]
    fn toy_kernel() {
        let a = build_matrix(&toy());
        let k = KernelLattice::of(&a);
        assert_eq!(k.rank(), 3);
        assert!(k.basis().iter().all(|v| a.annihilates(v)));
        assert!(k.coordinates(&lv(&[0, -1, 0, 3, 0, 0])).is_some());
        assert!(k.coordinates(&lv(&[0, 0, -1, 0, 2, 0])).is_some());
        assert!(k.coordinates(&lv(&[0, -1, 0, 3, 0, 1])).is_none());
    }

    #[test]
    fn kernel_is_saturated_on_random_matrices() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..30 {
            let n = rng.gen_range(2..5);
            let rows: Vec<Vec<BigInt>> = (0..n)
                .map(|_| (0..2 * n).map(|_| BigInt::from(rng.gen_range(-4i64..5))).collect())
                .collect();
            let a = ExponentMatrix::from_rows(rows);
            let k = KernelLattice::of(&a);
            assert_eq!(k.rank() + a.rank(), 2 * n);
            // Brute force: every small kernel vector has integer coordinates.
            let dim = 2 * n;
            let mut idx = vec![-2i64; dim];
            'outer: loop {
                let v = lv(&idx);
                if a.annihilates(&v) {
                    assert!(k.coordinates(&v).is_some(), "{v} missing");
                }
                for slot in idx.iter_mut() {
                    *slot += 1;
                    if *slot <= 2 {
                        continue 'outer;
                    }
                    *slot = -2;
                }
                break;
            }
        }
    }

    #[test]
    fn monic_search_toy() {
        let a = build_matrix(&toy());
        let found = monic_kernel_search(&a, Var::Y(1), 6);
        assert_eq!(found, vec![lv(&[0, -1, 0, 3, 0, 0]), lv(&[0, -2, 0, 6, 0, 0])]);
        assert!(monic_kernel_search(&a, Var::Y(2), 1).is_empty());
        let f2 = monic_kernel_search(&a, Var::Y(2), 4);
        assert_eq!(f2, vec![lv(&[0, 0, -1, 0, 2, 0]), lv(&[0, 0, -2, 0, 4, 0])]);
        assert!(found.iter().all(|v| a.annihilates(v)));
    }

    #[test]
    fn sampling_skips_zero() {
        use rand::SeedableRng;
        let a = build_matrix(&toy());
        let k = KernelLattice::of(&a);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let s = k.sample(&mut rng, 500);
        assert_eq!(s.len(), 500);
        assert!(s.iter().all(|v| !v.is_zero() && a.annihilates(v)));
    }
}
