//! The full acceptance suite: a fixed list of checks run concurrently and
//! merged by `check_id`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::qcatalog::{A0Recipe, ALambdaRecipe, QAssignment, ScalarProfile, StructureProfile};
use crate::symspace::{catalog, SpaceId};
use crate::verify::checks::*;
use crate::verify::report::{VerificationReport, Verdict, REPORT_SCHEMA};

/// One entry of the suite.
#[derive(Clone, Debug, PartialEq)]
pub enum CheckSpec {
    Tables,
    Decomposition(SpaceId),
    Contact { space: SpaceId, profile: StructureProfile, r: f64 },
    Killing { space: SpaceId, profile: StructureProfile, r: f64 },
    Rank1 { space: SpaceId, kappa: f64, q: Vec<f64>, r: f64 },
    AlmostKahler { space: SpaceId, q: ScalarProfile, a0: f64 },
    Normality { space: SpaceId, profile: StructureProfile, r: f64 },
}

impl CheckSpec {
    pub fn space(&self) -> Option<SpaceId> {
        match self {
            CheckSpec::Tables => None,
            CheckSpec::Decomposition(s) => Some(*s),
            CheckSpec::Contact { space, .. }
            | CheckSpec::Killing { space, .. }
            | CheckSpec::Rank1 { space, .. }
            | CheckSpec::AlmostKahler { space, .. }
            | CheckSpec::Normality { space, .. } => Some(*space),
        }
    }

    /// The `check_id` of the resulting report; also seeds the check.
    pub fn key(&self) -> String {
        let space = self.space();
        let with_r = |p: &StructureProfile, r: f64| profile_detail(&p.clone().with_radius(r));
        match self {
            CheckSpec::Tables => "tables".into(),
            CheckSpec::Decomposition(_) => check_id("decomposition", space, ""),
            CheckSpec::Contact { profile, r, .. } => check_id("contact", space, &with_r(profile, *r)),
            CheckSpec::Killing { profile, r, .. } => check_id("killing", space, &with_r(profile, *r)),
            CheckSpec::Rank1 { kappa, q, r, .. } => {
                let p = StructureProfile::contact_kappa(QAssignment::PerRoot(q.clone()), *kappa, *r);
                check_id("rank1", space, &profile_detail(&p))
            }
            CheckSpec::AlmostKahler { q, a0, .. } => {
                check_id("almost-kahler", space, &profile_detail(&StructureProfile::almost_kahler(q.clone(), *a0)))
            }
            CheckSpec::Normality { profile, r, .. } => check_id("normality", space, &with_r(profile, *r)),
        }
    }

    /// Runs the check against a prepared space.
    pub fn run(&self, ctx: Option<&SpaceContext>, opts: &CheckOptions) -> Result<VerificationReport> {
        let ctx = || ctx.expect("space-bound check needs a context");
        match self {
            CheckSpec::Tables => check_catalog_tables(opts),
            CheckSpec::Decomposition(_) => check_decomposition(ctx(), opts),
            CheckSpec::Contact { profile, r, .. } => check_contact(ctx(), profile, *r, opts),
            CheckSpec::Killing { profile, r, .. } => check_killing(ctx(), profile, *r, opts),
            CheckSpec::Rank1 { kappa, q, r, .. } => check_rank1_classification(ctx(), *kappa, q, *r, opts),
            CheckSpec::AlmostKahler { q, a0, .. } => check_almost_kahler(ctx(), q, *a0, opts),
            CheckSpec::Normality { profile, r, .. } => check_normality(ctx(), profile, *r, opts),
        }
    }
}

/// FNV-1a, used to give every check its own seed.
fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

pub fn check_seed(seed: u64, key: &str) -> u64 {
    seed ^ fnv1a(key)
}

fn q_fn(lit: &str) -> QAssignment {
    QAssignment::Function(lit.parse().expect("suite literal"))
}

/// The structure with `ξ = 2rξ^S` and `𝐠̃ = 𝐠̃^S/(4r²)`.
pub fn rectified_standard(r: f64) -> StructureProfile {
    StructureProfile::new(
        q_fn("id"),
        A0Recipe::ContactRule,
        ALambdaRecipe::Explicit(vec![1.0 / (4.0 * r * r)]),
        Some(r),
    )
}

pub const RADII: [f64; 3] = [0.5, 1.0, 2.0];
pub const CONTACT_Q: [&str; 4] = ["id", "tanh", "sinh", "ln"];
pub const AK_Q: [&str; 6] = ["id", "tanh", "sinh", "ln", "exp", "coth"];

/// Every check run by `report --all`.
pub fn full_suite() -> Vec<CheckSpec> {
    let mut out = vec![CheckSpec::Tables];
    let spaces = catalog();
    for &s in &spaces {
        out.push(CheckSpec::Decomposition(s));
    }
    for &s in &spaces {
        for q in CONTACT_Q {
            for r in RADII {
                out.push(CheckSpec::Contact {
                    space: s,
                    profile: StructureProfile::contact(q_fn(q), r),
                    r,
                });
            }
        }
        for r in RADII {
            out.push(CheckSpec::Contact {
                space: s,
                profile: StructureProfile::standard(Some(r)),
                r,
            });
            out.push(CheckSpec::Contact {
                space: s,
                profile: rectified_standard(r),
                r,
            });
        }
    }
    for &s in &spaces {
        if s.rank() == 1 {
            for r in RADII {
                out.push(CheckSpec::Killing {
                    space: s,
                    profile: StructureProfile::contact(QAssignment::PerRoot(vec![1.0]), r),
                    r,
                });
                out.push(CheckSpec::Killing {
                    space: s,
                    profile: StructureProfile::standard(Some(r)),
                    r,
                });
            }
        }
    }
    for s in [SpaceId::SuSo(3), SpaceId::SuSo(4), SpaceId::Grass(3)] {
        for q in ["tanh", "id"] {
            out.push(CheckSpec::Killing {
                space: s,
                profile: StructureProfile::contact(q_fn(q), 1.0),
                r: 1.0,
            });
        }
    }
    for (s, kappa, q) in [
        (SpaceId::Cp(2), 1.0, vec![1.0]),
        (SpaceId::Sphere(3), 2.0, vec![3.0]),
        (SpaceId::Hp(1), 1.0, vec![1.0]),
        (SpaceId::Cp(3), 0.5, vec![2.0, 0.5]),
        (SpaceId::Hp(2), 1.5, vec![1.0, 3.0]),
    ] {
        out.push(CheckSpec::Rank1 { space: s, kappa, q, r: 1.0 });
    }
    for s in [SpaceId::SuSo(3), SpaceId::Cp(2), SpaceId::Sphere(3), SpaceId::Hp(1), SpaceId::Grass(3)] {
        for q in AK_Q {
            out.push(CheckSpec::AlmostKahler {
                space: s,
                q: q.parse().expect("suite literal"),
                a0: 1.0,
            });
        }
    }
    for s in [SpaceId::Sphere(3), SpaceId::Rp(3), SpaceId::Cp(2), SpaceId::Hp(1), SpaceId::SuSo(3), SpaceId::Grass(3)] {
        for q in [1.0, 2.0] {
            for r in [0.5, 1.0] {
                out.push(CheckSpec::Normality {
                    space: s,
                    profile: StructureProfile::contact(QAssignment::PerRoot(vec![q]), r),
                    r,
                });
            }
        }
    }
    out
}

/// Aggregate output of a suite run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub seed: u64,
    pub total: usize,
    pub passed: usize,
    pub expected_fail_confirmed: usize,
    pub failed: usize,
    pub reports: Vec<VerificationReport>,
}

impl SuiteReport {
    pub fn success(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Builds every space the specs need, once, in parallel.
pub fn prepare_spaces(specs: &[CheckSpec], seed: u64) -> BTreeMap<SpaceId, std::result::Result<Arc<SpaceContext>, String>> {
    let mut ids: Vec<SpaceId> = specs.iter().filter_map(|s| s.space()).collect();
    ids.sort();
    ids.dedup();
    ids.into_par_iter()
        .map(|id| (id, SpaceContext::build(id, seed).map(Arc::new).map_err(|e| e.to_string())))
        .collect()
}

/// Runs one spec with its derived seed; errors become failed reports.
pub fn run_spec(spec: &CheckSpec, ctx: Option<&SpaceContext>, opts: &CheckOptions) -> VerificationReport {
    let key = spec.key();
    let opts = CheckOptions {
        seed: check_seed(opts.seed, &key),
        ..*opts
    };
    match spec.run(ctx, &opts) {
        Ok(r) => r,
        Err(e) => VerificationReport::errored(key, spec.space().map(|s| s.to_string()), e.to_string()),
    }
}

pub fn run_suite(specs: &[CheckSpec], opts: &CheckOptions) -> SuiteReport {
    let spaces = prepare_spaces(specs, opts.seed);
    let mut reports: Vec<VerificationReport> = specs
        .par_iter()
        .map(|spec| match spec.space().map(|id| &spaces[&id]) {
            Some(Err(msg)) => VerificationReport::errored(spec.key(), spec.space().map(|s| s.to_string()), msg.clone()),
            Some(Ok(ctx)) => run_spec(spec, Some(ctx), opts),
            None => run_spec(spec, None, opts),
        })
        .collect();
    reports.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    let count = |v: Verdict| reports.iter().filter(|r| r.verdict == v).count();
    SuiteReport {
        schema: REPORT_SCHEMA,
        seed: opts.seed,
        total: reports.len(),
        passed: count(Verdict::Pass),
        expected_fail_confirmed: count(Verdict::ExpectedFailConfirmed),
        failed: count(Verdict::Fail),
        reports,
    }
}
