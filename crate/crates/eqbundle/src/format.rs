//! JSON files. Integers are decimal strings so that every value survives
//! serialization exactly.

use std::collections::BTreeMap;
use std::sync::Arc;

use dashu_int::IBig;
use eqbundle_core::bundle::{BirkhoffFactorization, LaurentMat, TransitionCocycle};
use eqbundle_core::cyclotomic::{CycField, CycNum, Field};
use eqbundle_core::equivariant::{
    CanonicalEntry, CanonicalForm, ClassificationReport, EquivariantBundle, GroupContext, Parity,
    StageCertificate, Violation,
};
use eqbundle_core::extensions::SplittingHom;
use eqbundle_core::linalg::{CycMat, Matrix};
use eqbundle_core::matgroup::{FiniteMatrixGroup, Representation, Sl2Elem};
use eqbundle_core::poly::Poly;
use eqbundle_core::ratfun::{ratmat_as_laurent, ratmat_from_laurent, RatFun, RatMat};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

type Res<T> = std::result::Result<T, CliError>;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CycJson {
    pub modulus: u32,
    pub coeffs: Vec<(String, String)>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RatFunJson {
    pub num: Vec<CycJson>,
    pub den: Vec<CycJson>,
}

pub type RatMatJson = Vec<Vec<RatFunJson>>;
pub type CycMatJson = Vec<Vec<CycJson>>;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GroupFile {
    pub modulus: u32,
    /// `[a, b, c, d]` per generator.
    pub generators: Vec<[CycJson; 4]>,
    #[serde(default)]
    pub pgl: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CocycleFile {
    pub rank: usize,
    pub modulus: u32,
    pub transition: RatMatJson,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RepresentationJson {
    pub dim: usize,
    pub generator_images: Vec<CycMatJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EntryJson {
    pub degree: i64,
    pub parity: String,
    pub module: RepresentationJson,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CanonicalFormFile {
    pub group: GroupFile,
    pub entries: Vec<EntryJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BundleFile {
    pub base: CocycleFile,
    pub group: GroupFile,
    /// Generator index (decimal) to chart-0 action matrix.
    pub action: BTreeMap<String, RatMatJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FactorizationJson {
    pub degrees: Vec<i64>,
    pub u_plus: RatMatJson,
    pub u_plus_inv: RatMatJson,
    pub u_minus: RatMatJson,
    pub residual_zero: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StageJson {
    pub sub_degree: i64,
    pub sub_rank: usize,
    pub quotient_rank: usize,
    pub psi: RatMatJson,
    pub generator_actions: Vec<RatMatJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ClassificationJson {
    pub canonical: CanonicalFormFile,
    pub kind: String,
    pub degrees: Vec<i64>,
    pub validation: ValidationJson,
    pub hn_invariance_failures: Vec<(usize, usize)>,
    pub factorization: FactorizationJson,
    pub working_group: GroupFile,
    pub stages: Vec<StageJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ValidationJson {
    pub checked_identities: usize,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SplittingJson {
    pub splits: bool,
    pub gamma: Option<Vec<[CycJson; 4]>>,
}

/// Fields by modulus, with an optional common modulus every value is
/// lifted into.
#[derive(Default)]
pub struct Fields {
    cache: BTreeMap<u32, Field>,
    pub target: Option<u32>,
}

impl Fields {
    pub fn new(target: Option<u32>) -> Self {
        Fields {
            cache: BTreeMap::new(),
            target,
        }
    }

    pub fn get(&mut self, modulus: u32) -> Res<Field> {
        if let Some(f) = self.cache.get(&modulus) {
            return Ok(f.clone());
        }
        let f = CycField::new(modulus)
            .map_err(|e| CliError::malformed(format!("modulus {modulus}: {e}")))?;
        self.cache.insert(modulus, f.clone());
        Ok(f)
    }

    /// The field a file of the given modulus is read into.
    pub fn ambient(&mut self, modulus: u32) -> Res<Field> {
        match self.target {
            None => self.get(modulus),
            Some(t) if t % modulus == 0 => self.get(t),
            Some(t) => Err(CliError::malformed(format!(
                "modulus override {t} is not a multiple of the file modulus {modulus}"
            ))),
        }
    }
}

fn int(s: &str) -> Res<IBig> {
    s.parse::<IBig>()
        .map_err(|_| CliError::malformed(format!("not a decimal integer: {s:?}")))
}

pub fn cyc_to_json(x: &CycNum) -> CycJson {
    CycJson {
        modulus: x.modulus(),
        coeffs: x
            .rational_coeffs()
            .into_iter()
            .map(|(n, d)| (n.to_string(), d.to_string()))
            .collect(),
    }
}

pub fn cyc_from_json(fields: &mut Fields, field: &Field, j: &CycJson) -> Res<CycNum> {
    if !field.modulus().is_multiple_of(j.modulus) {
        return Err(CliError::malformed(format!(
            "value of modulus {} in a file of modulus {}",
            j.modulus,
            field.modulus()
        )));
    }
    let own = fields.get(j.modulus)?;
    if j.coeffs.len() != own.degree() {
        return Err(CliError::malformed(format!(
            "modulus {} needs {} coefficients, got {}",
            j.modulus,
            own.degree(),
            j.coeffs.len()
        )));
    }
    let coeffs = j
        .coeffs
        .iter()
        .map(|(n, d)| Ok((int(n)?, int(d)?)))
        .collect::<Res<Vec<_>>>()?;
    let x = CycNum::from_rational_coeffs(&own, &coeffs)?;
    Ok(x.lift_to(field)?)
}

pub fn poly_to_json(p: &Poly) -> Vec<CycJson> {
    p.coeffs().iter().map(cyc_to_json).collect()
}

pub fn poly_from_json(fields: &mut Fields, field: &Field, j: &[CycJson]) -> Res<Poly> {
    let coeffs = j
        .iter()
        .map(|c| cyc_from_json(fields, field, c))
        .collect::<Res<Vec<_>>>()?;
    Ok(Poly::from_coeffs(field, coeffs))
}

pub fn ratfun_to_json(f: &RatFun) -> RatFunJson {
    RatFunJson {
        num: poly_to_json(f.num()),
        den: poly_to_json(f.den()),
    }
}

pub fn ratfun_from_json(fields: &mut Fields, field: &Field, j: &RatFunJson) -> Res<RatFun> {
    let num = poly_from_json(fields, field, &j.num)?;
    let den = poly_from_json(fields, field, &j.den)?;
    RatFun::new(num, den).map_err(|_| CliError::malformed("zero denominator".into()))
}

pub fn ratmat_to_json(m: &RatMat) -> RatMatJson {
    m.to_rows()
        .iter()
        .map(|row| row.iter().map(ratfun_to_json).collect())
        .collect()
}

pub fn ratmat_from_json(fields: &mut Fields, field: &Field, j: &RatMatJson) -> Res<RatMat> {
    let rows = j
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| ratfun_from_json(fields, field, e))
                .collect::<Res<Vec<_>>>()
        })
        .collect::<Res<Vec<_>>>()?;
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(CliError::malformed(
            "matrix must be a nonempty rectangular array".into(),
        ));
    }
    Ok(Matrix::from_rows(field, rows)?)
}

pub fn laurent_to_json(m: &LaurentMat) -> RatMatJson {
    ratmat_to_json(&ratmat_from_laurent(m))
}

pub fn cycmat_to_json(m: &CycMat) -> CycMatJson {
    m.to_rows()
        .iter()
        .map(|row| row.iter().map(cyc_to_json).collect())
        .collect()
}

pub fn cycmat_from_json(
    fields: &mut Fields,
    field: &Field,
    dim: usize,
    j: &CycMatJson,
) -> Res<CycMat> {
    if j.len() != dim || j.iter().any(|r| r.len() != dim) {
        return Err(CliError::malformed(format!(
            "module image must be {dim} x {dim}"
        )));
    }
    let rows = j
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| cyc_from_json(fields, field, e))
                .collect::<Res<Vec<_>>>()
        })
        .collect::<Res<Vec<_>>>()?;
    if dim == 0 {
        return Ok(Matrix::zeros(field, 0, 0));
    }
    Ok(Matrix::from_rows(field, rows)?)
}

fn sl2_to_json(g: &Sl2Elem) -> [CycJson; 4] {
    [
        cyc_to_json(&g.a),
        cyc_to_json(&g.b),
        cyc_to_json(&g.c),
        cyc_to_json(&g.d),
    ]
}

fn sl2_from_json(fields: &mut Fields, field: &Field, j: &[CycJson; 4]) -> Res<Sl2Elem> {
    let [a, b, c, d] = j;
    Ok(Sl2Elem::new(
        cyc_from_json(fields, field, a)?,
        cyc_from_json(fields, field, b)?,
        cyc_from_json(fields, field, c)?,
        cyc_from_json(fields, field, d)?,
    )?)
}

pub fn group_to_json(g: &FiniteMatrixGroup, name: Option<&str>) -> GroupFile {
    GroupFile {
        modulus: g.field().modulus(),
        generators: g.generators().iter().map(sl2_to_json).collect(),
        pgl: g.is_projective(),
        name: name.map(str::to_owned),
    }
}

pub fn group_from_json(
    fields: &mut Fields,
    j: &GroupFile,
    max_order: usize,
) -> Res<Arc<FiniteMatrixGroup>> {
    let field = fields.ambient(j.modulus)?;
    let gens = j
        .generators
        .iter()
        .map(|g| sl2_from_json(fields, &field, g))
        .collect::<Res<Vec<_>>>()?;
    if gens.is_empty() {
        return Err(CliError::malformed(
            "a group needs at least one generator".into(),
        ));
    }
    Ok(Arc::new(FiniteMatrixGroup::generate(
        &field, &gens, j.pgl, max_order,
    )?))
}

pub fn cocycle_to_json(e: &TransitionCocycle) -> CocycleFile {
    CocycleFile {
        rank: e.rank(),
        modulus: e.field().modulus(),
        transition: laurent_to_json(e.laurent()),
    }
}

pub fn cocycle_from_json(fields: &mut Fields, j: &CocycleFile) -> Res<TransitionCocycle> {
    let field = fields.ambient(j.modulus)?;
    let t = ratmat_from_json(fields, &field, &j.transition)?;
    if t.rows() != j.rank || t.cols() != j.rank {
        return Err(CliError::malformed(format!(
            "transition is not {0} x {0}",
            j.rank
        )));
    }
    Ok(TransitionCocycle::new(&t)?)
}

pub fn representation_to_json(r: &Representation) -> RepresentationJson {
    RepresentationJson {
        dim: r.dim(),
        generator_images: r.generator_images().iter().map(cycmat_to_json).collect(),
    }
}

pub fn representation_from_json(
    fields: &mut Fields,
    group: &Arc<FiniteMatrixGroup>,
    j: &RepresentationJson,
) -> Res<Representation> {
    let field = group.field().clone();
    let images = j
        .generator_images
        .iter()
        .map(|m| cycmat_from_json(fields, &field, j.dim, m))
        .collect::<Res<Vec<_>>>()?;
    Ok(Representation::from_generator_images(group, &images)?)
}

fn parity_name(p: Parity) -> &'static str {
    match p {
        Parity::Plain => "plain",
        Parity::OddTwist => "odd_twist",
    }
}

pub fn canonical_to_json(cf: &CanonicalForm, group: &FiniteMatrixGroup) -> CanonicalFormFile {
    CanonicalFormFile {
        group: group_to_json(group, None),
        entries: cf
            .entries
            .iter()
            .map(|e| EntryJson {
                degree: e.degree,
                parity: parity_name(e.parity).into(),
                module: representation_to_json(&e.module),
            })
            .collect(),
    }
}

pub fn canonical_from_json(
    fields: &mut Fields,
    j: &CanonicalFormFile,
    max_order: usize,
) -> Res<(CanonicalForm, GroupContext)> {
    let group = group_from_json(fields, &j.group, max_order)?;
    let ctx = GroupContext::new(group)?;
    let mut entries = Vec::with_capacity(j.entries.len());
    for e in &j.entries {
        let parity = match e.parity.as_str() {
            "plain" => Parity::Plain,
            "odd_twist" => Parity::OddTwist,
            other => return Err(CliError::malformed(format!("unknown parity {other:?}"))),
        };
        let module = representation_from_json(fields, ctx.module_group(parity), &e.module)?;
        entries.push(CanonicalEntry {
            degree: e.degree,
            parity,
            module,
        });
    }
    if entries.iter().all(|e| e.module.dim() == 0) {
        return Err(CliError::malformed("canonical form of rank 0".into()));
    }
    Ok((CanonicalForm { entries }, ctx))
}

pub fn bundle_to_json(b: &EquivariantBundle) -> BundleFile {
    BundleFile {
        base: cocycle_to_json(b.base()),
        group: group_to_json(b.group(), None),
        action: b
            .actions()
            .iter()
            .enumerate()
            .map(|(k, m)| (k.to_string(), ratmat_to_json(m)))
            .collect(),
    }
}

pub fn bundle_from_json(
    fields: &mut Fields,
    j: &BundleFile,
    max_order: usize,
) -> Res<EquivariantBundle> {
    let group = group_from_json(fields, &j.group, max_order)?;
    let base = cocycle_from_json(fields, &j.base)?;
    if base.field().modulus() != group.field().modulus() {
        return Err(CliError::malformed(
            "group and cocycle moduli differ".into(),
        ));
    }
    let field = group.field().clone();
    let mut actions = Vec::with_capacity(group.num_generators());
    for k in 0..group.num_generators() {
        let m = j
            .action
            .get(&k.to_string())
            .ok_or_else(|| CliError::malformed(format!("no action for generator {k}")))?;
        actions.push(ratmat_from_json(fields, &field, m)?);
    }
    if j.action.len() != actions.len() {
        return Err(CliError::malformed(
            "actions given for unknown generators".into(),
        ));
    }
    Ok(EquivariantBundle::new(group, base, actions)?)
}

pub fn factorization_to_json(f: &BirkhoffFactorization, residual_zero: bool) -> FactorizationJson {
    FactorizationJson {
        degrees: f.degrees.clone(),
        u_plus: laurent_to_json(&f.u_plus),
        u_plus_inv: laurent_to_json(&f.u_plus_inv),
        u_minus: laurent_to_json(&f.u_minus),
        residual_zero,
    }
}

pub fn factorization_from_json(
    fields: &mut Fields,
    field: &Field,
    j: &FactorizationJson,
) -> Res<BirkhoffFactorization> {
    let laurent = |fields: &mut Fields, m: &RatMatJson| -> Res<LaurentMat> {
        let m = ratmat_from_json(fields, field, m)?;
        ratmat_as_laurent(&m)
            .ok_or_else(|| CliError::malformed("factor is not a Laurent matrix".into()))
    };
    Ok(BirkhoffFactorization {
        u_plus: laurent(fields, &j.u_plus)?,
        u_plus_inv: laurent(fields, &j.u_plus_inv)?,
        degrees: j.degrees.clone(),
        u_minus: laurent(fields, &j.u_minus)?,
    })
}

pub fn stage_to_json(s: &StageCertificate) -> StageJson {
    StageJson {
        sub_degree: s.sub_degree,
        sub_rank: s.sub_rank,
        quotient_rank: s.quotient_rank,
        psi: ratmat_to_json(&s.psi),
        generator_actions: s.generator_actions.iter().map(ratmat_to_json).collect(),
    }
}

pub fn stage_from_json(fields: &mut Fields, field: &Field, j: &StageJson) -> Res<StageCertificate> {
    Ok(StageCertificate {
        sub_degree: j.sub_degree,
        sub_rank: j.sub_rank,
        quotient_rank: j.quotient_rank,
        psi: ratmat_from_json(fields, field, &j.psi)?,
        generator_actions: j
            .generator_actions
            .iter()
            .map(|m| ratmat_from_json(fields, field, m))
            .collect::<Res<Vec<_>>>()?,
    })
}

fn violation_text(v: &Violation) -> String {
    match v {
        Violation::CocycleLaw { generator, element } => {
            format!("cocycle law fails for generator {generator} at element {element}")
        }
        Violation::Regularity { generator, charts } => {
            format!(
                "generator {generator} is not regular from chart {} to chart {}",
                charts.0, charts.1
            )
        }
        Violation::Malformed(m) => m.clone(),
    }
}

pub fn classification_to_json(
    rep: &ClassificationReport,
    group: &FiniteMatrixGroup,
) -> ClassificationJson {
    ClassificationJson {
        canonical: canonical_to_json(&rep.canonical, group),
        kind: format!("{:?}", rep.kind),
        degrees: rep.canonical.degrees(),
        validation: ValidationJson {
            checked_identities: rep.validation.checked_identities,
            violations: rep
                .validation
                .violations
                .iter()
                .map(violation_text)
                .collect(),
        },
        hn_invariance_failures: rep.hn_invariance.failures.clone(),
        factorization: factorization_to_json(&rep.factorization, rep.residual_zero),
        working_group: group_to_json(&rep.working_group, None),
        stages: rep.stages.iter().map(stage_to_json).collect(),
    }
}

pub fn splitting_to_json(s: Option<&SplittingHom>) -> SplittingJson {
    SplittingJson {
        splits: s.is_some(),
        gamma: s.map(|s| s.generator_lifts.iter().map(sl2_to_json).collect()),
    }
}

pub fn to_string<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn from_str<T: for<'de> Deserialize<'de>>(s: &str) -> Res<T> {
    serde_json::from_str(s).map_err(|e| CliError::malformed(format!("json: {e}")))
}
