//! Randomized property suites behind `eqbundle verify` and the acceptance
//! tests. Every case draws from its own generator seeded by
//! `(seed, suite, case)`, so reports are reproducible case by case.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};

use eqbundle_core::bundle::{birkhoff_factor, expected_h0, H0Solver};
use eqbundle_core::cyclotomic::{CycField, Field};
use eqbundle_core::equivariant::{
    build_from_canonical, check_hn_invariance, classify, natural_structure, validate_equivariance,
    verify_stage, CanonicalEntry, CanonicalForm, ClassificationReport, EquivariantBundle,
    GroupContext, Parity,
};
use eqbundle_core::extensions::{complement_exists_by_search, extension_splits};
use eqbundle_core::matgroup::{catalog, FiniteMatrixGroup, Representation, DEFAULT_MAX_ORDER};
use eqbundle_core::sections::{
    sections_character, sections_dimension, sections_module, sections_module_by_transport,
};
use eqbundle_core::{Error, Result};
use rand::Rng;

use crate::error::CliError;
use crate::format::{self, ClassificationJson, Fields};
use crate::gen::Gen;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum SuiteName {
    Roundtrip,
    Birkhoff,
    Averaging,
    Parity,
    Sections,
    All,
}

/// Case counts per suite.
#[derive(Clone, Copy, Debug)]
pub struct Sizes {
    pub birkhoff: usize,
    pub roundtrip_per_group: usize,
    pub parity_random: usize,
    pub sections: usize,
}

impl Sizes {
    pub const FULL: Sizes = Sizes {
        birkhoff: 200,
        roundtrip_per_group: 100,
        parity_random: 2,
        sections: 50,
    };

    pub const SMOKE: Sizes = Sizes {
        birkhoff: 10,
        roundtrip_per_group: 3,
        parity_random: 1,
        sections: 5,
    };
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub suite: &'static str,
    pub case: String,
    pub property: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub seed: u64,
    pub checks: Vec<Check>,
    /// Time spent in the operation under test: Birkhoff factorization for
    /// planted cocycles, build, twist and classification for round trips.
    /// Not part of the rendered report.
    pub timed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// `(passed, total)` for one property.
    pub fn tally(&self, property: &str) -> (usize, usize) {
        let of: Vec<&Check> = self
            .checks
            .iter()
            .filter(|c| c.property == property)
            .collect();
        (of.iter().filter(|c| c.pass).count(), of.len())
    }

    pub fn failures(&self, property: &str) -> Vec<&Check> {
        self.checks
            .iter()
            .filter(|c| c.property == property && !c.pass)
            .collect()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "seed {}", self.seed);
        let _ = writeln!(
            out,
            "{:<10} {:<22} {:<18} {:<6} detail",
            "suite", "case", "property", "result"
        );
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{:<10} {:<22} {:<18} {:<6} {}",
                c.suite,
                c.case,
                c.property,
                if c.pass { "pass" } else { "FAIL" },
                c.detail
            );
        }
        let mut props: Vec<&str> = self.checks.iter().map(|c| c.property).collect();
        props.sort_unstable();
        props.dedup();
        for p in props {
            let (ok, n) = self.tally(p);
            let _ = writeln!(out, "summary {p}: {ok}/{n}");
        }
        out
    }
}

fn case_gen(seed: u64, suite: u64, case: usize) -> Gen {
    let mix = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(suite.wrapping_mul(0xBF58_476D_1CE4_E5B9))
        .wrapping_add(case as u64);
    Gen::new(mix)
}

fn check(
    suite: &'static str,
    case: &str,
    property: &'static str,
    outcome: Result<(bool, String)>,
) -> Check {
    let (pass, detail) = match outcome {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    Check {
        suite,
        case: case.to_owned(),
        property,
        pass,
        detail,
    }
}

pub fn run(name: SuiteName, seed: u64, sizes: Sizes) -> SuiteReport {
    let mut checks = Vec::new();
    let mut timed = Duration::ZERO;
    match name {
        SuiteName::Birkhoff => birkhoff(seed, sizes, &mut checks, &mut timed),
        SuiteName::Roundtrip => roundtrip(seed, sizes, &mut checks, &mut timed, false),
        SuiteName::Averaging => roundtrip(seed, sizes, &mut checks, &mut timed, true),
        SuiteName::Parity => parity(seed, sizes, &mut checks),
        SuiteName::Sections => sections(seed, sizes, &mut checks),
        SuiteName::All => {
            birkhoff(seed, sizes, &mut checks, &mut timed);
            roundtrip(seed, sizes, &mut checks, &mut timed, false);
            parity(seed, sizes, &mut checks);
            sections(seed, sizes, &mut checks);
        }
    }
    SuiteReport {
        seed,
        checks,
        timed,
    }
}

fn field12() -> Field {
    CycField::new(12).expect("modulus 12")
}

/// Planted cocycles over `ℚ(ζ₁₂)`: recovery of the splitting type and the
/// `h⁰` table for twists in `[-6, 6]`.
pub fn birkhoff(seed: u64, sizes: Sizes, out: &mut Vec<Check>, timed: &mut Duration) {
    let field = field12();
    for i in 0..sizes.birkhoff {
        let mut g = case_gen(seed, 1, i);
        let r = g.rng().gen_range(1..=4);
        let case = format!("planted-{i}");
        let planted = match g.planted(&field, r, -4, 4, 3) {
            Ok(p) => p,
            Err(e) => {
                out.push(check("birkhoff", &case, "birkhoff", Err(e)));
                continue;
            }
        };
        let e = &planted.cocycle;
        let t = Instant::now();
        let factored = birkhoff_factor(e);
        *timed += t.elapsed();
        out.push(check(
            "birkhoff",
            &case,
            "birkhoff",
            factored.map(|f| {
                let ok = f.degrees == planted.degrees && f.verify(e.laurent());
                (
                    ok,
                    format!("{:?} expected {:?}", f.degrees, planted.degrees),
                )
            }),
        ));
        out.push(check(
            "birkhoff",
            &case,
            "h0_oracle",
            H0Solver::new(e).map(|s| {
                let bad: Vec<i64> = (-6..=6)
                    .filter(|&m| s.dimension(m) != expected_h0(&planted.degrees, m))
                    .collect();
                (
                    bad.is_empty(),
                    if bad.is_empty() {
                        "m in [-6, 6]".into()
                    } else {
                        format!("differs at {bad:?}")
                    },
                )
            }),
        ));
    }
}

/// The groups of the round-trip suite, all over `ℚ(ζ₁₂)`.
pub fn roundtrip_groups() -> Result<Vec<(&'static str, Arc<FiniteMatrixGroup>)>> {
    let f = field12();
    let raw = [
        ("C2", catalog::cyclic(2)?),
        ("C3", catalog::cyclic(3)?),
        ("C4", catalog::cyclic(4)?),
        ("C6", catalog::cyclic(6)?),
        ("Q8", catalog::binary_dihedral(2)?),
        ("BD12", catalog::binary_dihedral(3)?),
    ];
    raw.into_iter()
        .map(|(n, g)| Ok((n, Arc::new(g.lift_to(&f, DEFAULT_MAX_ORDER)?))))
        .collect()
}

fn roundtrip(
    seed: u64,
    sizes: Sizes,
    out: &mut Vec<Check>,
    timed: &mut Duration,
    averaging_only: bool,
) {
    let groups = match roundtrip_groups() {
        Ok(g) => g,
        Err(e) => {
            out.push(check("roundtrip", "groups", "roundtrip", Err(e)));
            return;
        }
    };
    let suite = if averaging_only {
        "averaging"
    } else {
        "roundtrip"
    };
    for (gi, (name, group)) in groups.iter().enumerate() {
        let ctx = match GroupContext::new(group.clone()) {
            Ok(c) => c,
            Err(e) => {
                out.push(check(suite, name, "roundtrip", Err(e)));
                continue;
            }
        };
        for i in 0..sizes.roundtrip_per_group {
            let mut g = case_gen(seed, 2, gi * 100_000 + i);
            let case = format!("{name}-{i}");
            let checks = roundtrip_case(&mut g, &ctx, 3, 2, timed);
            for (property, outcome) in checks {
                if !averaging_only || property == "averaging" {
                    out.push(check(suite, &case, property, outcome));
                }
            }
        }
    }
}

type Outcomes = Vec<(&'static str, Result<(bool, String)>)>;

/// Random canonical form, built, twisted and classified again.
fn roundtrip_case(
    g: &mut Gen,
    ctx: &GroupContext,
    max_dim: usize,
    twist_degree: usize,
    timed: &mut Duration,
) -> Outcomes {
    let t = Instant::now();
    let entries = g.rng().gen_range(1..=3);
    let setup = g
        .canonical_form(ctx, entries, -3, 3, max_dim)
        .and_then(|cf| {
            let b = build_from_canonical(&cf, ctx)?;
            Ok((cf, g.twist(&b, twist_degree)?))
        });
    let (cf, b) = match setup {
        Ok(v) => v,
        Err(e) => return vec![("roundtrip", Err(e))],
    };
    let classified = classify(&b);
    *timed += t.elapsed();
    match classified {
        Ok(report) => roundtrip_checks(&cf, &b, &report),
        Err(e) => vec![("roundtrip", Err(e))],
    }
}

fn roundtrip_checks(
    cf: &CanonicalForm,
    b: &EquivariantBundle,
    report: &ClassificationReport,
) -> Outcomes {
    let same = cf.equivalent(&report.canonical);
    let roundtrip = same.map(|same| {
        let ok = same && report.residual_zero && report.validation.is_valid();
        (ok, format!("degrees {:?}", report.canonical.degrees()))
    });
    let hn = check_hn_invariance(b).map(|h| {
        let ok = report.validation.is_valid() && h.holds() && report.hn_invariance.holds();
        (ok, format!("{} failures", h.failures.len()))
    });
    let averaging = reverify_serialized(report, b).map_err(|e| match e {
        CliError::Core(e) => e,
        other => Error::InvalidParameter(other.to_string()),
    });
    vec![
        ("roundtrip", roundtrip),
        ("hn_invariance", hn),
        ("averaging", averaging),
    ]
}

/// Serializes a classification report, parses it back and re-verifies the
/// Birkhoff factorization and every averaging stage from the parsed data.
pub fn reverify_serialized(
    report: &ClassificationReport,
    b: &EquivariantBundle,
) -> std::result::Result<(bool, String), CliError> {
    let text = format::to_string(&format::classification_to_json(report, b.group()));
    let base_text = format::to_string(&format::cocycle_to_json(b.base()));
    let parsed: ClassificationJson = format::from_str(&text)?;
    let mut fields = Fields::new(None);
    let base = format::cocycle_from_json(&mut fields, &format::from_str(&base_text)?)?;
    let working = format::group_from_json(&mut fields, &parsed.working_group, DEFAULT_MAX_ORDER)?;
    let field = working.field().clone();
    let fact = format::factorization_from_json(&mut fields, &field, &parsed.factorization)?;
    if !fact.verify(base.laurent()) {
        return Ok((false, "factorization does not re-multiply".into()));
    }
    for (k, s) in parsed.stages.iter().enumerate() {
        let stage = format::stage_from_json(&mut fields, &field, s)?;
        if let Err(e) = verify_stage(&stage, &working) {
            return Ok((false, format!("stage {k}: {e}")));
        }
    }
    Ok((true, format!("{} stages", parsed.stages.len())))
}

/// PGL(2) images of catalog groups of order at most 60.
pub fn pgl_instances() -> Result<Vec<(String, Arc<FiniteMatrixGroup>)>> {
    let mut out = Vec::new();
    for n in 2..=8 {
        out.push((format!("pgl-C{n}"), Arc::new(catalog::pgl_cyclic(n)?)));
    }
    for n in 2..=6 {
        out.push((format!("pgl-D{n}"), Arc::new(catalog::pgl_dihedral(n)?)));
    }
    out.push(("pgl-T".into(), Arc::new(catalog::pgl_tetrahedral()?)));
    out.push(("pgl-O".into(), Arc::new(catalog::pgl_octahedral()?)));
    out.push(("pgl-I".into(), Arc::new(catalog::pgl_icosahedral()?)));
    Ok(out)
}

fn parity(seed: u64, sizes: Sizes, out: &mut Vec<Check>) {
    let instances = match pgl_instances() {
        Ok(v) => v,
        Err(e) => {
            out.push(check("parity", "catalog", "dichotomy", Err(e)));
            return;
        }
    };
    for (gi, (name, h)) in instances.iter().enumerate() {
        let ctx = match GroupContext::new(h.clone()) {
            Ok(c) => c,
            Err(e) => {
                out.push(check("parity", name, "dichotomy", Err(e)));
                continue;
            }
        };
        let pgl = ctx.pgl().expect("projective").clone();
        let gamma = extension_splits(&pgl);
        let searched = complement_exists_by_search(&pgl);
        out.push(check(
            "parity",
            name,
            "dichotomy",
            Ok((
                gamma.is_some() == searched && pgl.splitting().is_some() == searched,
                format!(
                    "|H| = {}, splits: {}",
                    h.order(),
                    if searched { "yes" } else { "no" }
                ),
            )),
        ));
        match gamma {
            Some(s) => {
                let natural = natural_structure(1, h, Some(&s)).map(|b| {
                    let v = validate_equivariance(&b);
                    (v.is_valid(), format!("{} identities", v.checked_identities))
                });
                out.push(check("parity", name, "natural_structure", natural));
            }
            None => {
                let plain = CanonicalForm {
                    entries: vec![CanonicalEntry {
                        degree: 1,
                        parity: Parity::Plain,
                        module: Representation::trivial(h, 1),
                    }],
                };
                let rejected = matches!(
                    build_from_canonical(&plain, &ctx),
                    Err(Error::ParityViolation(_))
                ) && matches!(
                    natural_structure(1, h, None),
                    Err(Error::ParityViolation(_))
                );
                out.push(check(
                    "parity",
                    name,
                    "odd_rejected",
                    Ok((rejected, "plain O(1) rejected".into())),
                ));
            }
        }
        for i in 0..sizes.parity_random {
            let mut g = case_gen(seed, 3, gi * 1000 + i);
            let case = format!("{name}-{i}");
            out.push(check(
                "parity",
                &case,
                "odd_modules",
                parity_case(&mut g, &ctx),
            ));
        }
    }
}

/// Classifies a twisted random bundle and checks the parity of every
/// classified entry.
fn parity_case(g: &mut Gen, ctx: &GroupContext) -> Result<(bool, String)> {
    let pgl = ctx.pgl().expect("projective");
    let entries = g.rng().gen_range(1..=2);
    let cf = g.canonical_form(ctx, entries, -3, 3, 2)?;
    let b = g.twist(&build_from_canonical(&cf, ctx)?, 1)?;
    let rep = classify(&b)?;
    let minus = pgl.minus_identity();
    let mut ok = rep.canonical.equivalent(&cf)?;
    for e in &rep.canonical.entries {
        let odd = e.degree.rem_euclid(2) == 1;
        ok &= match (pgl.splitting(), e.parity) {
            (None, Parity::OddTwist) => odd && e.module.image(minus).neg().is_identity(),
            (None, Parity::Plain) => !odd,
            (Some(_), Parity::Plain) => true,
            (Some(_), Parity::OddTwist) => false,
        };
    }
    Ok((ok, format!("degrees {:?}", rep.canonical.degrees())))
}

fn sections(seed: u64, sizes: Sizes, out: &mut Vec<Check>) {
    let mut groups: Vec<(String, Arc<FiniteMatrixGroup>)> = match roundtrip_groups() {
        Ok(v) => v.into_iter().map(|(n, g)| (n.to_owned(), g)).collect(),
        Err(e) => {
            out.push(check("sections", "groups", "sections", Err(e)));
            return;
        }
    };
    let extra = || -> Result<Vec<(String, Arc<FiniteMatrixGroup>)>> {
        Ok(vec![
            ("2T".into(), Arc::new(catalog::binary_tetrahedral()?)),
            ("pgl-C3".into(), Arc::new(catalog::pgl_cyclic(3)?)),
            ("pgl-D2".into(), Arc::new(catalog::pgl_dihedral(2)?)),
            ("pgl-T".into(), Arc::new(catalog::pgl_tetrahedral()?)),
        ])
    };
    match extra() {
        Ok(v) => groups.extend(v),
        Err(e) => out.push(check("sections", "groups", "sections", Err(e))),
    }
    let contexts: Vec<(String, Result<GroupContext>)> = groups
        .into_iter()
        .map(|(n, g)| (n, GroupContext::new(g)))
        .collect();
    for i in 0..sizes.sections {
        let (name, ctx) = &contexts[i % contexts.len()];
        let case = format!("{name}-{i}");
        let outcome = match ctx {
            Ok(ctx) => sections_case(&mut case_gen(seed, 4, i), ctx),
            Err(e) => Err(e.clone()),
        };
        out.push(check("sections", &case, "sections", outcome));
    }
}

fn sections_case(g: &mut Gen, ctx: &GroupContext) -> Result<(bool, String)> {
    let entries = g.rng().gen_range(1..=3);
    let cf = g.canonical_form(ctx, entries, -2, 4, 2)?;
    let sym = sections_module(&cf, ctx)?;
    let moved = sections_module_by_transport(&cf, ctx)?;
    let chi = sym.character();
    let ok = chi == moved.character()
        && chi == sections_character(&cf, ctx)?
        && sym.dim() == sections_dimension(&cf)
        && moved.dim() == sym.dim();
    Ok((ok, format!("dim {}", sym.dim())))
}
