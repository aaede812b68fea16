use std::collections::BTreeSet;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;

use super::{EnumConfig, VerifyError};
use crate::family::{FamilyParams, LabeledBinomial, Parametrization};
use crate::finitefield::{Fe, FieldCtx, FieldDescriptor};
use crate::toric::{Binomial, ExponentMap};

/// A set of points of `field^{2n}`.
#[derive(Debug, Clone)]
pub struct PointSet {
    pub field: Arc<FieldCtx>,
    pub points: BTreeSet<Vec<Fe>>,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        self.field.descriptor()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.points.is_subset(&other.points)
    }

    /// Points of `self` missing from `other`, in order.
    pub fn difference<'a>(&'a self, other: &'a PointSet) -> impl Iterator<Item = &'a Vec<Fe>> {
        self.points.difference(&other.points)
    }
}

/// A binomial with exponents reduced for one field and variables turned into
/// coordinate indices.
#[derive(Debug, Clone)]
pub struct CompiledBinomial {
    pub label: String,
    plus: Vec<(usize, u64)>,
    minus: Vec<(usize, u64)>,
}

impl CompiledBinomial {
    pub fn new(label: &str, b: &Binomial, n: usize, ctx: &FieldCtx) -> Self {
        let side = |m: &ExponentMap| {
            m.iter().map(|(v, e)| (v.index(n), ctx.reduce_exponent(e))).collect::<Vec<_>>()
        };
        CompiledBinomial { label: label.to_string(), plus: side(b.plus()), minus: side(b.minus()) }
    }

    fn monomial(ctx: &FieldCtx, side: &[(usize, u64)], pt: &[Fe]) -> Fe {
        side.iter().fold(Fe::ONE, |acc, &(k, e)| ctx.mul(acc, ctx.pow(pt[k], e)))
    }

    pub fn eval(&self, ctx: &FieldCtx, pt: &[Fe]) -> Fe {
        ctx.sub(Self::monomial(ctx, &self.plus, pt), Self::monomial(ctx, &self.minus, pt))
    }

    pub fn vanishes(&self, ctx: &FieldCtx, pt: &[Fe]) -> bool {
        Self::monomial(ctx, &self.plus, pt) == Self::monomial(ctx, &self.minus, pt)
    }
}

#[derive(Debug, Clone)]
pub struct CompiledSystem {
    pub n: usize,
    pub field: Arc<FieldCtx>,
    pub binomials: Vec<CompiledBinomial>,
}

impl CompiledSystem {
    pub fn new(system: &[&LabeledBinomial], n: usize, field: &Arc<FieldCtx>) -> Self {
        let binomials =
            system.iter().map(|lb| CompiledBinomial::new(&lb.label, &lb.binomial, n, field)).collect();
        CompiledSystem { n, field: field.clone(), binomials }
    }

    pub fn from_binomials(system: &[Binomial], n: usize, field: &Arc<FieldCtx>) -> Self {
        let binomials = system
            .iter()
            .enumerate()
            .map(|(k, b)| CompiledBinomial::new(&format!("B{}", k + 1), b, n, field))
            .collect();
        CompiledSystem { n, field: field.clone(), binomials }
    }

    pub fn vanishes(&self, pt: &[Fe]) -> bool {
        self.binomials.iter().all(|b| b.vanishes(&self.field, pt))
    }
}

/// Advances `digits` as a base-`q` odometer; false once it wraps.
fn step(digits: &mut [Fe], q: u64) -> bool {
    for d in digits.iter_mut().rev() {
        if d.0 + 1 < q {
            d.0 += 1;
            return true;
        }
        *d = Fe::ZERO;
    }
    false
}

/// Calls `f` on every point of `field^dim` whose first two coordinates are
/// `prefix`.
fn for_each_in_chunk(q: u64, dim: usize, prefix: &[Fe], mut f: impl FnMut(&[Fe])) {
    let mut pt = vec![Fe::ZERO; dim];
    pt[..prefix.len()].copy_from_slice(prefix);
    loop {
        f(&pt);
        if !step(&mut pt[prefix.len()..], q) {
            break;
        }
    }
}

fn chunks(q: u64, dim: usize) -> Vec<Vec<Fe>> {
    let width = dim.min(2);
    let mut out = Vec::new();
    let mut prefix = vec![Fe::ZERO; width];
    loop {
        out.push(prefix.clone());
        if !step(&mut prefix, q) {
            break;
        }
    }
    out
}

/// All points of `field^{2n}` on which every binomial of `system` vanishes.
/// Chunks by the first two coordinates run in parallel.
pub fn zero_set(system: &CompiledSystem, cfg: &EnumConfig) -> Result<PointSet, VerifyError> {
    let ctx = &system.field;
    let q = ctx.order();
    let dim = 2 * system.n;
    cfg.check(q, dim)?;
    let points = cfg.run(|| {
        chunks(q, dim)
            .into_par_iter()
            .map(|prefix| {
                let mut found = Vec::new();
                for_each_in_chunk(q, dim, &prefix, |pt| {
                    if system.vanishes(pt) {
                        found.push(pt.to_vec());
                    }
                });
                found
            })
            .reduce(Vec::new, |mut a, mut b| {
                a.append(&mut b);
                a
            })
    })?;
    Ok(PointSet { field: ctx.clone(), points: points.into_iter().collect() })
}

/// `{ phi(u) : u in field^n }`.
pub fn image_set(
    params: &FamilyParams,
    field: &Arc<FieldCtx>,
    cfg: &EnumConfig,
) -> Result<PointSet, VerifyError> {
    let n = params.n;
    let q = field.order();
    cfg.check(q, n)?;
    let par = Parametrization::new(params, field);
    let points = cfg.run(|| {
        chunks(q, n)
            .into_par_iter()
            .map(|prefix| {
                let mut found = BTreeSet::new();
                let mut out = vec![Fe::ZERO; 2 * n];
                for_each_in_chunk(q, n, &prefix, |u| {
                    par.eval_into(field, u, &mut out);
                    found.insert(out.clone());
                });
                found
            })
            .reduce(BTreeSet::new, |mut a, mut b| {
                a.append(&mut b);
                a
            })
    })?;
    Ok(PointSet { field: field.clone(), points })
}

/// Evaluates `system` at `phi(u)` for `samples` random `u`; returns the
/// parameter vectors where some binomial does not vanish.
pub fn sample_image_identity<R: Rng>(
    params: &FamilyParams,
    system: &CompiledSystem,
    samples: usize,
    rng: &mut R,
) -> Vec<Vec<Fe>> {
    let ctx = &system.field;
    let par = Parametrization::new(params, ctx);
    let mut bad = Vec::new();
    for _ in 0..samples {
        let u: Vec<Fe> = (0..params.n).map(|_| Fe(rng.gen_range(0..ctx.order()))).collect();
        if !system.vanishes(&par.eval(ctx, &u)) {
            bad.push(u);
        }
    }
    bad
}
