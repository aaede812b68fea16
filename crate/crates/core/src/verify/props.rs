use std::collections::BTreeMap;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::enumerate::{image_set, zero_set, CompiledSystem};
use super::oracle::{MembershipOracle, Status};
use super::{EnumConfig, Timings, VerifyError, MAX_LISTED};
use crate::family::{construct, FamilyParams};
use crate::finitefield::{make_field, Fe, FieldDescriptor};
use crate::numtheory::is_prime;

/// Outcome for one field `GF(p^k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldCheck {
    pub k: u32,
    pub field: FieldDescriptor,
    /// `gcd(a, p^k - 1) = 1` or `p | a`.
    pub precondition: bool,
    /// Set when equality is not gated for this field.
    pub skipped: Option<String>,
    pub zero_set_size: usize,
    pub image_size: usize,
    pub equal: bool,
    pub image_subset: bool,
    /// Zero-set points outside the image (at most a hundred).
    pub missing_from_image: Vec<Vec<Fe>>,
    pub passed: bool,
    pub timings: Timings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prop1Report {
    pub params: FamilyParams,
    pub fields: Vec<FieldCheck>,
    pub passed: bool,
}

impl Prop1Report {
    pub fn clear_timings(&mut self) {
        for f in &mut self.fields {
            f.timings = Timings::default();
        }
    }
}

/// In characteristic `p`, compares the zero set of `F_1..F_n` with the image
/// of the parametrization over each `GF(p^k)`.
pub fn check_prop1(
    params: &FamilyParams,
    k_list: &[u32],
    cfg: &EnumConfig,
) -> Result<Prop1Report, VerifyError> {
    let sys = construct(params)?;
    let f = sys.f_only();
    let mut fields = Vec::new();
    for &k in k_list {
        let mut timings = Timings::default();
        let ctx = make_field(params.p, k)?;
        let group = ctx.group_order();
        let precondition = params.a.gcd(&group) == 1 || params.a.is_multiple_of(params.p);
        let compiled = CompiledSystem::new(&f, params.n, &ctx);
        let z = timings.time("zero_set", || zero_set(&compiled, cfg))?;
        let img = timings.time("image_set", || image_set(params, &ctx, cfg))?;
        let (equal, image_subset, missing) = timings.time("compare", || {
            let missing: Vec<Vec<Fe>> = z.difference(&img).take(MAX_LISTED).cloned().collect();
            (z.points == img.points, img.is_subset(&z), missing)
        });
        let skipped = (!precondition).then(|| {
            format!(
                "gcd(a, p^k - 1) = {} and p does not divide a: a-th roots are not guaranteed in GF({}^{k})",
                params.a.gcd(&group),
                params.p
            )
        });
        let passed = image_subset && (skipped.is_some() || equal);
        fields.push(FieldCheck {
            k,
            field: ctx.descriptor(),
            precondition,
            skipped,
            zero_set_size: z.len(),
            image_size: img.len(),
            equal,
            image_subset,
            missing_from_image: missing,
            passed,
            timings,
        });
    }
    let passed = fields.iter().all(|f| f.passed);
    Ok(Prop1Report { params: params.clone(), fields, passed })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prop2Report {
    pub params: FamilyParams,
    pub q: u64,
    pub field: FieldDescriptor,
    pub system_size: usize,
    pub zero_set_size: usize,
    pub image_size: usize,
    pub image_subset: bool,
    pub in_v: usize,
    /// `InV` points whose witness parameters lie outside `GF(q)`.
    pub in_v_via_extension: usize,
    /// Number of points per extension degree used by the oracle.
    pub extension_degrees: BTreeMap<u32, usize>,
    /// How often each parameter had to move off its first root.
    pub adjusted: BTreeMap<String, usize>,
    pub not_in_v: usize,
    /// Zero-set points the oracle rejects (at most a hundred).
    pub counterexamples: Vec<Vec<Fe>>,
    pub passed: bool,
    pub timings: Timings,
}

impl Prop2Report {
    pub fn clear_timings(&mut self) {
        self.timings = Timings::default();
    }
}

/// Away from characteristic `p`, checks that every point of the zero set of
/// `F, G, H` over `GF(q)` lies on the variety.
pub fn check_prop2(params: &FamilyParams, q: u64, cfg: &EnumConfig) -> Result<Prop2Report, VerifyError> {
    if !is_prime(q) || q == params.p {
        return Err(VerifyError::Precondition(format!("q = {q} must be a prime other than p = {}", params.p)));
    }
    let sys = construct(params)?;
    let full = sys.full();
    let ctx = make_field(q, 1)?;
    let mut timings = Timings::default();
    let compiled = CompiledSystem::new(&full, params.n, &ctx);
    let z = timings.time("zero_set", || zero_set(&compiled, cfg))?;
    let img = timings.time("image_set", || image_set(params, &ctx, cfg))?;
    let image_subset = timings.time("compare", || img.is_subset(&z));
    let oracle = MembershipOracle::new(params, &ctx);
    let points: Vec<&Vec<Fe>> = z.points.iter().collect();
    let verdicts = timings.time("oracle", || {
        cfg.run(|| points.par_iter().map(|pt| oracle.decide(pt)).collect::<Result<Vec<_>, _>>())
    })??;
    let mut report = Prop2Report {
        params: params.clone(),
        q,
        field: ctx.descriptor(),
        system_size: full.len(),
        zero_set_size: z.len(),
        image_size: img.len(),
        image_subset,
        in_v: 0,
        in_v_via_extension: 0,
        extension_degrees: BTreeMap::new(),
        adjusted: BTreeMap::new(),
        not_in_v: 0,
        counterexamples: Vec::new(),
        passed: false,
        timings,
    };
    for v in verdicts {
        *report.extension_degrees.entry(v.extension_degree).or_default() += 1;
        for a in &v.adjusted {
            *report.adjusted.entry(a.clone()).or_default() += 1;
        }
        match v.status {
            Status::InV => {
                report.in_v += 1;
                if !v.params_in_base_field {
                    report.in_v_via_extension += 1;
                }
            }
            Status::NotInV => {
                report.not_in_v += 1;
                if report.counterexamples.len() < MAX_LISTED {
                    report.counterexamples.push(v.point);
                }
            }
        }
    }
    report.passed = report.image_subset && report.not_in_v == 0;
    Ok(report)
}
