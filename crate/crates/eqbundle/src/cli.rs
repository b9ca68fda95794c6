//! Command-line front end. Every command prints one JSON document (or, for
//! `verify`, a plain-text table).

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use eqbundle_core::bundle::birkhoff_factor;
use eqbundle_core::equivariant::{classify, GroupContext};
use eqbundle_core::extensions::{complement_exists_by_search, extension_splits, PglGroup};
use eqbundle_core::matgroup::{catalog, FiniteMatrixGroup, DEFAULT_MAX_ORDER};
use eqbundle_core::sections::{sections_module, sections_module_by_transport};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::CliError;
use crate::format::{self, Fields, GroupFile};
use crate::suite::{self, Sizes, SuiteName};

#[derive(Debug, Parser)]
#[command(
    name = "eqbundle",
    version,
    about = "Equivariant vector bundles on the projective line"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Largest group closure accepted from input files.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ORDER)]
    pub max_order: usize,
    /// Read every input into `Q(zeta_N)` for this `N`.
    #[arg(long, global = true)]
    pub modulus_override: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a catalog group, e.g. `C6`, `BD12`, `2T`, `PGL:D3`, `PGL:I`.
    Catalog { name: String },
    /// Splitting type of a transition cocycle.
    Split {
        #[arg(long)]
        input: PathBuf,
    },
    /// Canonical form of an equivariant bundle, with certificates.
    Classify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Whether the central extension over a PGL(2) group splits.
    ExtSplit {
        #[arg(long)]
        input: PathBuf,
    },
    /// Compare two equivariant bundles, given as `--input A --input B`.
    Iso {
        #[arg(long, required = true, action = clap::ArgAction::Append)]
        input: Vec<PathBuf>,
    },
    /// Global sections of a canonical form as a group module.
    Sections {
        #[arg(long)]
        input: PathBuf,
    },
    /// Run a randomized property suite.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteName,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Few cases per suite.
        #[arg(long)]
        smoke: bool,
    },
}

/// Output of a successful command and its exit code.
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    Ok(std::fs::read_to_string(path)?)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GroupDoc {
    Bare(GroupFile),
    Wrapped { group: GroupFile },
}

fn group_doc(text: &str) -> Result<GroupFile, CliError> {
    Ok(match format::from_str::<GroupDoc>(text)? {
        GroupDoc::Bare(g) | GroupDoc::Wrapped { group: g } => g,
    })
}

#[derive(Serialize)]
struct Summary {
    order: usize,
    projective: bool,
    modulus: u32,
    class_sizes: Vec<usize>,
    contains_minus_identity: bool,
}

fn summary(g: &FiniteMatrixGroup) -> Summary {
    Summary {
        order: g.order(),
        projective: g.is_projective(),
        modulus: g.field().modulus(),
        class_sizes: g.classes().iter().map(Vec::len).collect(),
        contains_minus_identity: g.contains_minus_identity().is_some(),
    }
}

fn display_type(d: &[i64]) -> String {
    let parts: Vec<String> = d.iter().map(i64::to_string).collect();
    format!("({})", parts.join(", "))
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let mut fields = Fields::new(cli.modulus_override);
    let json = |v: serde_json::Value| Outcome {
        text: format::to_string(&v),
        code: 0,
    };
    match &cli.command {
        Command::Catalog { name } => {
            let g = catalog::by_name(name)?;
            let g = match cli.modulus_override {
                Some(m) => g.lift_to(&fields.ambient(m)?, cli.max_order)?,
                None => g,
            };
            Ok(json(json!({
                "group": format::group_to_json(&g, Some(name)),
                "summary": summary(&g),
            })))
        }
        Command::Split { input } => {
            let e = format::cocycle_from_json(&mut fields, &format::from_str(&read(input)?)?)?;
            let f = birkhoff_factor(&e)?;
            let verified = f.verify(e.laurent());
            Ok(json(json!({
                "splitting_type": f.degrees,
                "display": display_type(&f.degrees),
                "verified": verified,
                "factorization": format::factorization_to_json(&f, verified),
            })))
        }
        Command::Classify { input } => {
            let b = format::bundle_from_json(
                &mut fields,
                &format::from_str(&read(input)?)?,
                cli.max_order,
            )?;
            let rep = classify(&b)?;
            Ok(json(json!({
                "degrees_display": display_type(&rep.canonical.degrees()),
                "report": format::classification_to_json(&rep, b.group()),
            })))
        }
        Command::ExtSplit { input } => {
            let g =
                format::group_from_json(&mut fields, &group_doc(&read(input)?)?, cli.max_order)?;
            let pgl = PglGroup::new(g.clone())?;
            let s = extension_splits(&pgl);
            let searched = complement_exists_by_search(&pgl);
            Ok(json(json!({
                "order": g.order(),
                "preimage_order": pgl.preimage().order(),
                "verdict": if s.is_some() { "splits" } else { "does not split" },
                "splitting": format::splitting_to_json(s.as_ref()),
                "search_agrees": s.is_some() == searched,
            })))
        }
        Command::Iso { input } => {
            if input.len() != 2 {
                return Err(CliError::malformed(format!(
                    "iso takes two inputs, got {}",
                    input.len()
                )));
            }
            let mut reps = Vec::with_capacity(2);
            for path in input {
                let b = format::bundle_from_json(
                    &mut fields,
                    &format::from_str(&read(path)?)?,
                    cli.max_order,
                )?;
                reps.push((classify(&b)?, b.group().clone()));
            }
            let (a, b) = (&reps[0], &reps[1]);
            if *a.1 != *b.1 {
                return Err(eqbundle_core::Error::GroupMismatch(
                    "bundles over different groups".into(),
                )
                .into());
            }
            Ok(json(json!({
                "isomorphic": a.0.canonical.equivalent(&b.0.canonical)?,
                "canonical": [
                    format::canonical_to_json(&a.0.canonical, &a.1),
                    format::canonical_to_json(&b.0.canonical, &b.1),
                ],
            })))
        }
        Command::Sections { input } => {
            let (cf, ctx) = format::canonical_from_json(
                &mut fields,
                &format::from_str(&read(input)?)?,
                cli.max_order,
            )?;
            sections_outcome(&cf, &ctx).map(json)
        }
        Command::Verify {
            suite: name,
            seed,
            smoke,
        } => {
            let sizes = if *smoke { Sizes::SMOKE } else { Sizes::FULL };
            let report = suite::run(*name, *seed, sizes);
            Ok(Outcome {
                text: report.render(),
                code: if report.passed() { 0 } else { 1 },
            })
        }
    }
}

fn sections_outcome(
    cf: &eqbundle_core::equivariant::CanonicalForm,
    ctx: &GroupContext,
) -> Result<serde_json::Value, CliError> {
    let m = sections_module(cf, ctx)?;
    let moved = sections_module_by_transport(cf, ctx)?;
    let group: &Arc<FiniteMatrixGroup> = ctx.group();
    let classes: Vec<_> = m
        .class_character()
        .iter()
        .map(format::cyc_to_json)
        .collect();
    Ok(json!({
        "dimension": m.dim(),
        "class_sizes": group.classes().iter().map(Vec::len).collect::<Vec<_>>(),
        "class_representatives": group.classes().iter().map(|c| c[0]).collect::<Vec<_>>(),
        "character": classes,
        "module": format::representation_to_json(&m),
        "transport_agrees": moved.character() == m.character(),
    }))
}
