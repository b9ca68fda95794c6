//! Equivariant structures on bundles over the projective line and their
//! classification into `⊕ 𝒪(d_i) ⊗ M_i`.
//!
//! An action is given on generators by chart-0 matrices `a_g(z)`, the fiber
//! map `E_z → E_{g·z}`. It extends to the whole group by
//! `a_{gh}(z) = a_g(h·z) a_h(z)`.

use alloc::sync::Arc;
use alloc::{format, string::String, vec, vec::Vec};

use crate::bundle::{
    birkhoff_factor, h0_sections, BirkhoffFactorization, HNFiltration, TransitionCocycle,
};
use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::extensions::{odd_twist_valid, PglGroup, SplittingHom};
use crate::linalg::{CycMat, Matrix};
use crate::matgroup::{FiniteMatrixGroup, Representation, Sl2Elem};
use crate::moebius::{AutomorphyFactor, MoebiusMap};
use crate::poly::Poly;
use crate::ratfun::{ratmat_det, ratmat_from_laurent, ratmat_invert_variable, RatFun, RatMat};

/// A bundle with a lift of the group action.
#[derive(Clone, Debug)]
pub struct EquivariantBundle {
    group: Arc<FiniteMatrixGroup>,
    base: TransitionCocycle,
    actions: Vec<RatMat>,
}

impl EquivariantBundle {
    pub fn new(
        group: Arc<FiniteMatrixGroup>,
        base: TransitionCocycle,
        actions: Vec<RatMat>,
    ) -> Result<Self> {
        if actions.len() != group.num_generators() {
            return Err(Error::DimensionMismatch(format!(
                "{} action matrices for {} generators",
                actions.len(),
                group.num_generators()
            )));
        }
        let r = base.rank();
        for a in &actions {
            if a.rows() != r || a.cols() != r {
                return Err(Error::DimensionMismatch(
                    "action matrix size differs from the rank".into(),
                ));
            }
            if a.field() != base.field() || group.field() != base.field() {
                return Err(Error::ModulusMismatch(
                    a.field().modulus(),
                    base.field().modulus(),
                ));
            }
        }
        Ok(EquivariantBundle {
            group,
            base,
            actions,
        })
    }

    pub fn group(&self) -> &Arc<FiniteMatrixGroup> {
        &self.group
    }

    pub fn base(&self) -> &TransitionCocycle {
        &self.base
    }

    pub fn actions(&self) -> &[RatMat] {
        &self.actions
    }

    pub fn rank(&self) -> usize {
        self.base.rank()
    }

    /// The action of every group element, extended along generator words.
    pub fn all_actions(&self) -> Result<Vec<RatMat>> {
        extend_actions(&self.group, &self.actions)
    }

    /// The same structure seen through a change of trivialization:
    /// `s0' = A(z) s0`, `s1' = B(w) s1`.
    pub fn change_frame(&self, a: &RatMat, a_inv: &RatMat, b_inv_w: &RatMat) -> Result<Self> {
        let t = a
            .mul(&self.base.matrix())?
            .mul(&ratmat_invert_variable(b_inv_w))?;
        let base = TransitionCocycle::new(&t)?;
        let actions = self
            .actions
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let g = moebius(&self.group, self.group.generator_index(k));
                g.apply_mat(a).mul(m)?.mul(a_inv)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.group.clone(), base, actions)
    }

    /// Conjugates the action by a bundle automorphism `Φ` given in chart 0.
    pub fn conjugate_by_automorphism(&self, phi: &RatMat, phi_inv: &RatMat) -> Result<Self> {
        let actions = self
            .actions
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let g = moebius(&self.group, self.group.generator_index(k));
                g.apply_mat(phi).mul(m)?.mul(phi_inv)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.group.clone(), self.base.clone(), actions)
    }
}

pub(crate) fn moebius(group: &FiniteMatrixGroup, x: usize) -> MoebiusMap {
    MoebiusMap::new(group.element(x).clone())
}

/// Extends generator matrices to all elements along the stored words.
pub fn extend_actions(group: &FiniteMatrixGroup, gens: &[RatMat]) -> Result<Vec<RatMat>> {
    let r = gens.first().map_or(0, RatMat::rows);
    let mut all = Vec::with_capacity(group.order());
    all.push(Matrix::identity(group.field(), r));
    for e in 1..group.order() {
        let (k, p) = group.word_step(e).expect("non-identity has a word");
        let next = moebius(group, p).apply_mat(&gens[k]).mul(&all[p])?;
        all.push(next);
    }
    Ok(all)
}

/// The group and its role: a subgroup of SL(2), or a subgroup `H` of PGL(2)
/// with its preimage and, when it exists, a splitting.
#[derive(Clone, Debug)]
pub enum GroupContext {
    Sl2(Arc<FiniteMatrixGroup>),
    Pgl(Arc<PglGroup>),
}

impl GroupContext {
    pub fn new(group: Arc<FiniteMatrixGroup>) -> Result<Self> {
        if group.is_projective() {
            Ok(GroupContext::Pgl(Arc::new(PglGroup::new(group)?)))
        } else {
            Ok(GroupContext::Sl2(group))
        }
    }

    /// The group acting on bundles: `G`, or `H` in the PGL case.
    pub fn group(&self) -> &Arc<FiniteMatrixGroup> {
        match self {
            GroupContext::Sl2(g) => g,
            GroupContext::Pgl(p) => p.h(),
        }
    }

    pub fn kind(&self) -> GroupKind {
        match self {
            GroupContext::Sl2(_) => GroupKind::Sl2,
            GroupContext::Pgl(p) if p.splitting().is_some() => GroupKind::PglSplit,
            GroupContext::Pgl(_) => GroupKind::PglNonSplit,
        }
    }

    pub fn pgl(&self) -> Option<&Arc<PglGroup>> {
        match self {
            GroupContext::Sl2(_) => None,
            GroupContext::Pgl(p) => Some(p),
        }
    }

    /// Group over which modules of the given parity live.
    pub fn module_group(&self, parity: Parity) -> &Arc<FiniteMatrixGroup> {
        match (self, parity) {
            (GroupContext::Pgl(p), Parity::OddTwist) => p.preimage(),
            _ => self.group(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Sl2,
    PglSplit,
    PglNonSplit,
}

/// A failed identity found by [`validate_equivariance`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `a_{gh}(z) ≠ a_g(h·z) a_h(z)` for generator `g` and element `h`.
    CocycleLaw {
        generator: usize,
        element: usize,
    },
    /// The fiber map of a generator has a pole or degenerates in the given
    /// pair of charts (source, target).
    Regularity {
        generator: usize,
        charts: (u8, u8),
    },
    Malformed(String),
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub checked_identities: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn regular_along(m: &RatMat, ell: &Poly) -> bool {
    if !m.entries().iter().all(|e| e.poles_within(ell)) {
        return false;
    }
    match ratmat_det(m) {
        Ok(d) if !d.is_zero() => d.num().divides_power_of(ell) && d.den().divides_power_of(ell),
        _ => false,
    }
}

/// Generator actions in the frame adapted to the Birkhoff factorization,
/// `ã_g = U₊(g·z)^{-1} a_g(z) U₊(z)`. There the transition is `diag(z^d)`.
pub fn adapted_generators(b: &EquivariantBundle, f: &BirkhoffFactorization) -> Result<Vec<RatMat>> {
    let up = ratmat_from_laurent(&f.u_plus);
    let vp = ratmat_from_laurent(&f.u_plus_inv);
    let group = &b.group;
    b.actions
        .iter()
        .enumerate()
        .map(|(k, a)| {
            moebius(group, group.generator_index(k))
                .apply_mat(&vp)
                .mul(a)?
                .mul(&up)
        })
        .collect()
}

fn diag_monomials(field: &crate::cyclotomic::Field, degrees: &[i64], sign: i64) -> RatMat {
    Matrix::diagonal(
        field,
        degrees
            .iter()
            .map(|&d| RatFun::monomial(CycNum::one(field), sign * d))
            .collect(),
    )
}

/// Cayley edges `(k, h)` that do not follow from how actions are extended
/// along generator words.
fn non_tree_edges(group: &FiniteMatrixGroup) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for k in 0..group.num_generators() {
        for h in 0..group.order() {
            let target = group.left_by_generator(k, h);
            if group.word_step(target) != Some((k, h)) {
                out.push((k, h));
            }
        }
    }
    out
}

fn check_cocycle_law(
    group: &FiniteMatrixGroup,
    gens: &[RatMat],
    report: &mut ValidationReport,
) -> Result<Vec<RatMat>> {
    let all = extend_actions(group, gens)?;
    for (k, h) in non_tree_edges(group) {
        report.checked_identities += 1;
        let lhs = &all[group.left_by_generator(k, h)];
        let rhs = moebius(group, h).apply_mat(&gens[k]).mul(&all[h]);
        if rhs.as_ref().ok() != Some(lhs) {
            report.violations.push(Violation::CocycleLaw {
                generator: k,
                element: h,
            });
        }
    }
    Ok(all)
}

/// Checks the cocycle law and holomorphic invertibility in all four chart
/// pairs.
///
/// The checks run after the exact change of frame by the Birkhoff factors,
/// which are holomorphic and invertible on their charts, so every identity
/// holds for the adapted matrices iff it holds for the given ones. Edges
/// that hold by construction of the word extension are not re-checked.
pub fn validate_equivariance(b: &EquivariantBundle) -> ValidationReport {
    validate_adapted(b).map_or_else(
        |e| ValidationReport {
            checked_identities: 0,
            violations: vec![Violation::Malformed(format!("{e}"))],
        },
        |(report, _)| report,
    )
}

struct Adapted {
    factorization: BirkhoffFactorization,
    generators: Vec<RatMat>,
    all: Vec<RatMat>,
}

fn validate_adapted(b: &EquivariantBundle) -> Result<(ValidationReport, Adapted)> {
    let mut report = ValidationReport::default();
    let f = birkhoff_factor(&b.base)?;
    let gens = adapted_generators(b, &f)?;
    let all = check_cocycle_law(&b.group, &gens, &mut report)?;
    check_regularity(&b.group, &f, &gens, &mut report);
    Ok((
        report,
        Adapted {
            factorization: f,
            generators: gens,
            all,
        },
    ))
}

fn check_regularity(
    group: &FiniteMatrixGroup,
    f: &BirkhoffFactorization,
    gens: &[RatMat],
    report: &mut ValidationReport,
) {
    let field = group.field();
    let d = diag_monomials(field, &f.degrees, 1);
    let d_inv = diag_monomials(field, &f.degrees, -1);
    let total: i64 = f.degrees.iter().sum();
    for (k, a) in gens.iter().enumerate() {
        let g = group.element(group.generator_index(k));
        let phi = MoebiusMap::new(g.clone());
        let d_inv_g = phi.apply_mat(&d_inv);
        let det_a = ratmat_det(a).unwrap_or_else(|_| RatFun::zero(field));
        // det D(z) = z^Σd and det D(g·z)^{-1} = (g·z)^{-Σd}
        let det_d = RatFun::monomial(CycNum::one(field), total);
        let det_d_inv_g = phi.apply(&RatFun::monomial(CycNum::one(field), -total));
        let charts: [(u8, u8, Result<RatMat>, RatFun, Poly); 4] = [
            (
                0,
                0,
                Ok(a.clone()),
                det_a.clone(),
                Poly::linear(g.d.clone(), g.c.clone()),
            ),
            (
                0,
                1,
                d_inv_g.mul(a),
                det_d_inv_g.mul(&det_a),
                Poly::linear(g.b.clone(), g.a.clone()),
            ),
            (
                1,
                0,
                a.mul(&d).map(|m| ratmat_invert_variable(&m)),
                det_a.mul(&det_d).invert_variable(),
                Poly::linear(g.c.clone(), g.d.clone()),
            ),
            (
                1,
                1,
                d_inv_g
                    .mul(a)
                    .and_then(|m| m.mul(&d))
                    .map(|m| ratmat_invert_variable(&m)),
                det_d_inv_g.mul(&det_a).mul(&det_d).invert_variable(),
                Poly::linear(g.a.clone(), g.b.clone()),
            ),
        ];
        for (src, dst, m, det, ell) in charts {
            report.checked_identities += 1;
            let ok = m.is_ok_and(|m| m.entries().iter().all(|e| e.poles_within(&ell)))
                && !det.is_zero()
                && det.num().divides_power_of(&ell)
                && det.den().divides_power_of(&ell);
            if !ok {
                report.violations.push(Violation::Regularity {
                    generator: k,
                    charts: (src, dst),
                });
            }
        }
    }
}

/// Checks the cocycle law on every Cayley edge and holomorphic
/// invertibility of each generator in all four chart pairs, working
/// directly with the given transition and action matrices.
pub fn validate_equivariance_direct(b: &EquivariantBundle) -> ValidationReport {
    let mut report = ValidationReport::default();
    let group = &b.group;
    let all = match b.all_actions() {
        Ok(a) => a,
        Err(e) => {
            report.violations.push(Violation::Malformed(format!("{e}")));
            return report;
        }
    };
    for k in 0..group.num_generators() {
        for h in 0..group.order() {
            report.checked_identities += 1;
            let lhs = &all[group.left_by_generator(k, h)];
            let rhs = moebius(group, h).apply_mat(&b.actions[k]).mul(&all[h]);
            if rhs.as_ref().ok() != Some(lhs) {
                report.violations.push(Violation::CocycleLaw {
                    generator: k,
                    element: h,
                });
            }
        }
    }
    let t = b.base.matrix();
    let t_inv = match birkhoff_factor(&b.base).and_then(|f| f.transition_inverse()) {
        Ok(inv) => ratmat_from_laurent(&inv),
        Err(e) => {
            report.violations.push(Violation::Malformed(format!("{e}")));
            return report;
        }
    };
    for k in 0..group.num_generators() {
        let g = group.element(group.generator_index(k));
        let phi = MoebiusMap::new(g.clone());
        let a = &b.actions[k];
        let t_inv_g = phi.apply_mat(&t_inv);
        let checks: [(u8, u8, Result<RatMat>, Poly); 4] = [
            (0, 0, Ok(a.clone()), Poly::linear(g.d.clone(), g.c.clone())),
            (0, 1, t_inv_g.mul(a), Poly::linear(g.b.clone(), g.a.clone())),
            (
                1,
                0,
                a.mul(&t).map(|m| ratmat_invert_variable(&m)),
                Poly::linear(g.c.clone(), g.d.clone()),
            ),
            (
                1,
                1,
                t_inv_g
                    .mul(a)
                    .and_then(|m| m.mul(&t))
                    .map(|m| ratmat_invert_variable(&m)),
                Poly::linear(g.a.clone(), g.b.clone()),
            ),
        ];
        for (src, dst, m, ell) in checks {
            report.checked_identities += 1;
            if !m.is_ok_and(|m| regular_along(&m, &ell)) {
                report.violations.push(Violation::Regularity {
                    generator: k,
                    charts: (src, dst),
                });
            }
        }
    }
    report
}

/// The group that actually acts on fibers during classification.
struct Working {
    group: Arc<FiniteMatrixGroup>,
    actions: Vec<RatMat>,
}

/// Extends adapted generator actions of the bundle's group to the group
/// that acts during classification.
fn working_group(ctx: &GroupContext, gens: &[RatMat], all: Vec<RatMat>) -> Result<Working> {
    Ok(match ctx {
        GroupContext::Sl2(g) => Working {
            group: g.clone(),
            actions: all,
        },
        GroupContext::Pgl(p) => match p.split_group() {
            Some(g) => Working {
                group: g.clone(),
                actions: all,
            },
            None => {
                // ℋ is generated by lifts of the generators of H and -I
                let big = p.preimage();
                let r = gens.first().map_or(0, RatMat::rows);
                let mut hgens = gens.to_vec();
                hgens.push(Matrix::identity(big.field(), r));
                Working {
                    group: big.clone(),
                    actions: extend_actions(big, &hgens)?,
                }
            }
        },
    })
}

/// Result of [`check_hn_invariance`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HnInvarianceReport {
    /// `(generator, step)` pairs whose step is not preserved.
    pub failures: Vec<(usize, usize)>,
}

impl HnInvarianceReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

fn hn_failures(hn: &HNFiltration, gens: &[(usize, &RatMat)]) -> Vec<(usize, usize)> {
    let ranks = hn.ranks();
    let r = *ranks.last().unwrap_or(&0);
    let mut out = Vec::new();
    for &(k, m) in gens {
        for (step, &upto) in ranks.iter().enumerate().take(ranks.len().saturating_sub(1)) {
            if !m.block(upto, r, 0, upto).is_zero() {
                out.push((k, step));
            }
        }
    }
    out
}

/// Tests that every generator preserves each step of the HN filtration.
pub fn check_hn_invariance(b: &EquivariantBundle) -> Result<HnInvarianceReport> {
    let f = birkhoff_factor(&b.base)?;
    let hn = HNFiltration::from_factorization(&f);
    let gens = adapted_generators(b, &f)?;
    let refs: Vec<(usize, &RatMat)> = gens.iter().enumerate().collect();
    Ok(HnInvarianceReport {
        failures: hn_failures(&hn, &refs),
    })
}

/// Averages a holomorphic splitting `ψ` of `E → C` into an equivariant one.
///
/// `actions[x]` is the action of every element on `E = A ⊕ C` in a frame
/// where `A` is the span of the first `sub_rank` coordinates, and `psi` is
/// `rank × (rank - sub_rank)` with the projection `q` reading its bottom rows.
pub fn equivariant_splitting(
    group: &FiniteMatrixGroup,
    actions: &[RatMat],
    sub_rank: usize,
    psi: &RatMat,
) -> Result<RatMat> {
    let field = group.field();
    let r = psi.rows();
    let c = r - sub_rank;
    if psi.cols() != c || !psi.block(sub_rank, r, 0, c).is_identity() {
        return Err(Error::NotASplitting("q ∘ ψ is not the identity".into()));
    }
    for (x, a) in actions.iter().enumerate() {
        if !a.block(sub_rank, r, 0, sub_rank).is_zero() {
            return Err(Error::SubbundleNotInvariant(format!("element {x}")));
        }
    }
    let mut acc = Matrix::zeros(field, r, c);
    for x in 0..group.order() {
        // ψ_x(z) = a_{x^{-1}}(x·z) ψ(x·z) γ_x(z)
        let phi = moebius(group, x);
        let back = phi.apply_mat(&actions[group.inv(x)]);
        let gamma = actions[x].block(sub_rank, r, sub_rank, r);
        let psi_x = back.mul(&phi.apply_mat(psi))?.mul(&gamma)?;
        acc = acc.add(&psi_x)?;
    }
    let scale = RatFun::constant(CycNum::from_ratio(
        field,
        1.into(),
        (group.order() as i64).into(),
    )?);
    Ok(acc.scale(&scale))
}

/// Evidence for one top-down splitting stage.
#[derive(Clone, Debug)]
pub struct StageCertificate {
    pub sub_degree: i64,
    pub sub_rank: usize,
    pub quotient_rank: usize,
    /// `ψ̃ = [X̃; I]`.
    pub psi: RatMat,
    /// Generator actions on `A ⊕ C` before the change of frame.
    pub generator_actions: Vec<RatMat>,
}

/// Re-checks `q ∘ ψ̃ = I`, invariance of `A`, and
/// `a_g(z) ψ̃(z) = ψ̃(g·z) γ_g(z)` for each generator.
pub fn verify_stage(cert: &StageCertificate, group: &FiniteMatrixGroup) -> Result<()> {
    let a = cert.sub_rank;
    let r = a + cert.quotient_rank;
    let psi = &cert.psi;
    if psi.rows() != r
        || psi.cols() != cert.quotient_rank
        || !psi.block(a, r, 0, r - a).is_identity()
    {
        return Err(Error::NotASplitting("q ∘ ψ̃ is not the identity".into()));
    }
    if cert.generator_actions.len() != group.num_generators() {
        return Err(Error::DimensionMismatch(
            "one action per generator expected".into(),
        ));
    }
    for (k, m) in cert.generator_actions.iter().enumerate() {
        if m.rows() != r || m.cols() != r {
            return Err(Error::DimensionMismatch(
                "stage action has the wrong size".into(),
            ));
        }
        if !m.block(a, r, 0, a).is_zero() {
            return Err(Error::SubbundleNotInvariant(format!("generator {k}")));
        }
        let gamma = m.block(a, r, a, r);
        let phi = moebius(group, group.generator_index(k));
        if m.mul(psi)? != phi.apply_mat(psi).mul(&gamma)? {
            return Err(Error::NotASplitting(format!(
                "ψ̃ is not equivariant for generator {k}"
            )));
        }
    }
    Ok(())
}

/// `𝒪(d) ⊗ M` for the entries of a canonical form; `OddTwist` marks modules
/// of the preimage `ℋ` on which `-I` acts as `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Parity {
    Plain,
    OddTwist,
}

#[derive(Clone, Debug)]
pub struct CanonicalEntry {
    pub degree: i64,
    pub parity: Parity,
    pub module: Representation,
}

#[derive(Clone, Debug, Default)]
pub struct CanonicalForm {
    pub entries: Vec<CanonicalEntry>,
}

impl CanonicalForm {
    pub fn rank(&self) -> usize {
        self.entries.iter().map(|e| e.degree_rank()).sum()
    }

    /// Splitting type with multiplicity, nonincreasing.
    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self
            .entries
            .iter()
            .flat_map(|e| core::iter::repeat_n(e.degree, e.module.dim()))
            .collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// Sorts by decreasing degree and merges equal `(degree, parity)` by
    /// direct sum.
    pub fn normalize(&self) -> Result<Self> {
        let mut entries: Vec<CanonicalEntry> = self
            .entries
            .iter()
            .filter(|e| e.module.dim() > 0)
            .cloned()
            .collect();
        entries.sort_by(|a, b| b.degree.cmp(&a.degree).then(a.parity.cmp(&b.parity)));
        let mut out: Vec<CanonicalEntry> = Vec::new();
        for e in entries {
            match out.last_mut() {
                Some(last) if last.degree == e.degree && last.parity == e.parity => {
                    last.module = last.module.direct_sum(&e.module)?;
                }
                _ => out.push(e),
            }
        }
        Ok(CanonicalForm { entries: out })
    }

    /// Equal degrees and parities with isomorphic modules.
    pub fn equivalent(&self, other: &Self) -> Result<bool> {
        let a = self.normalize()?;
        let b = other.normalize()?;
        if a.entries.len() != b.entries.len() {
            return Ok(false);
        }
        for (x, y) in a.entries.iter().zip(&b.entries) {
            if x.degree != y.degree || x.parity != y.parity {
                return Ok(false);
            }
            if !crate::matgroup::module_isomorphic(&x.module, &y.module)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl CanonicalEntry {
    fn degree_rank(&self) -> usize {
        self.module.dim()
    }
}

/// Output of [`classify`] with every intermediate certificate.
#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub canonical: CanonicalForm,
    pub kind: GroupKind,
    pub factorization: BirkhoffFactorization,
    pub residual_zero: bool,
    pub hn_invariance: HnInvarianceReport,
    pub validation: ValidationReport,
    /// The group whose actions appear in the stage certificates.
    pub working_group: Arc<FiniteMatrixGroup>,
    pub stages: Vec<StageCertificate>,
}

/// Module `M` with `W ≅ 𝒪(d) ⊗ M` for a semistable piece `W` of slope `d`
/// with split transition `z^d I` and action `mu[x]`: the sections of
/// `Hom(𝒪(d), W) = W(-d)`, transported through the action.
pub fn extract_module(
    group: &Arc<FiniteMatrixGroup>,
    degree: i64,
    mu: &[RatMat],
) -> Result<Representation> {
    let field = group.field();
    let m = mu.first().map_or(0, RatMat::rows);
    let w = TransitionCocycle::split(field, &vec![degree; m]);
    let basis = h0_sections(&w, -degree)?;
    if basis.len() != m {
        return Err(Error::NotSemistable(format!(
            "Hom(𝒪({degree}), W) has dimension {} for rank {m}",
            basis.len()
        )));
    }
    let sections: Vec<Vec<Poly>> = basis.into_iter().map(|s| s.s0).collect();
    let mats = (0..group.num_generators())
        .map(|k| {
            let x = group.generator_index(k);
            // sections of W(-d): the factor of 𝒪(-d) is (c z + d)^d
            let factor = AutomorphyFactor::new(-degree).eval(group.element(x));
            mu[x].scale(&factor)
        })
        .collect::<Vec<_>>();
    transport_sections(group, &sections, &mats)
}

/// The representation on a space of global sections given by chart-0
/// polynomial vectors: generator `k` acts by `s ↦ (A_k s) ∘ x_k^{-1}`.
pub fn transport_sections(
    group: &Arc<FiniteMatrixGroup>,
    basis: &[Vec<Poly>],
    generator_mats: &[RatMat],
) -> Result<Representation> {
    let field = group.field();
    let n = basis.len();
    if n == 0 {
        return Representation::from_generator_images(
            group,
            &vec![Matrix::zeros(field, 0, 0); group.num_generators()],
        );
    }
    let r = basis[0].len();
    let width = basis
        .iter()
        .flat_map(|s| s.iter().filter_map(Poly::degree))
        .max()
        .unwrap_or(0)
        + 1;
    let flatten = |v: &[Poly]| -> Vec<CycNum> {
        v.iter()
            .flat_map(|p| (0..width).map(move |i| p.coeff(i)))
            .collect()
    };
    let mut bmat = Matrix::zeros(field, r * width, n);
    for (j, s) in basis.iter().enumerate() {
        for (i, c) in flatten(s).into_iter().enumerate() {
            bmat.set(i, j, c);
        }
    }
    let mut images = Vec::with_capacity(group.num_generators());
    for (k, a) in generator_mats.iter().enumerate() {
        let x = group.generator_index(k);
        let inv = MoebiusMap::new(group.element(group.inv(x)).clone());
        let mut rhs = Matrix::zeros(field, r * width, n);
        for (j, s) in basis.iter().enumerate() {
            let sv: RatMat = Matrix::from_vec(
                field,
                r,
                1,
                s.iter().map(|p| RatFun::from_poly(p.clone())).collect(),
            )?;
            let moved = inv.apply_mat(&a.mul(&sv)?);
            let mut polys = Vec::with_capacity(r);
            for e in moved.entries() {
                if !e.is_polynomial() || e.num().degree().is_some_and(|d| d >= width) {
                    return Err(Error::InvalidEquivariantStructure(
                        "transported section is not a global section".into(),
                    ));
                }
                polys.push(e.num().clone());
            }
            for (i, c) in flatten(&polys).into_iter().enumerate() {
                rhs.set(i, j, c);
            }
        }
        let image = bmat.solve(&rhs).map_err(|_| {
            Error::InvalidEquivariantStructure(
                "transported section leaves the section space".into(),
            )
        })?;
        images.push(image);
    }
    Representation::from_generator_images(group, &images)
}

/// Classifies a valid equivariant bundle.
pub fn classify(b: &EquivariantBundle) -> Result<ClassificationReport> {
    let (validation, adapted) = validate_adapted(b)?;
    let Adapted {
        factorization,
        generators: gens,
        all,
    } = adapted;
    if !validation.is_valid() {
        return Err(Error::InvalidEquivariantStructure(format!(
            "{:?}",
            validation.violations
        )));
    }
    let ctx = GroupContext::new(b.group.clone())?;
    let work = working_group(&ctx, &gens, all)?;
    let group = &work.group;
    let residual_zero = factorization.verify(b.base.laurent());
    let hn = HNFiltration::from_factorization(&factorization);
    let mut tilde = work.actions;
    let gens: Vec<(usize, &RatMat)> = (0..group.num_generators())
        .map(|k| (k, &tilde[group.generator_index(k)]))
        .collect();
    let hn_invariance = HnInvarianceReport {
        failures: hn_failures(&hn, &gens),
    };
    if !hn_invariance.holds() {
        return Err(Error::InvalidEquivariantStructure(format!(
            "HN filtration not preserved at (generator, step) {:?}",
            hn_invariance.failures
        )));
    }
    let r = b.rank();
    let blocks = hn.blocks();
    let mut stages = Vec::new();
    for j in 0..blocks.len().saturating_sub(1) {
        let start = blocks[j].start;
        let a = blocks[j].len();
        let c = r - blocks[j].end;
        let local: Vec<RatMat> = tilde.iter().map(|m| m.block(start, r, start, r)).collect();
        let field = group.field();
        let psi0 = Matrix::zeros(field, a, c).vstack(&Matrix::identity(field, c))?;
        let psi = equivariant_splitting(group, &local, a, &psi0)?;
        let cert = StageCertificate {
            sub_degree: hn.slopes[j],
            sub_rank: a,
            quotient_rank: c,
            psi: psi.clone(),
            generator_actions: (0..group.num_generators())
                .map(|k| local[group.generator_index(k)].clone())
                .collect(),
        };
        verify_stage(&cert, group)?;
        stages.push(cert);
        // New frame P = [[I, X̃], [0, I]]; the off-diagonal block becomes
        // β X̃(z) + off − X̃(x·z) γ, which must vanish for every element.
        let xt = psi.block(0, a, 0, c);
        for (x, m) in tilde.iter_mut().enumerate() {
            let beta = m.block(start, start + a, start, start + a);
            let off = m.block(start, start + a, start + a, r);
            let gamma = m.block(start + a, r, start + a, r);
            let moved = moebius(group, x).apply_mat(&xt);
            let new_off = beta.mul(&xt)?.add(&off)?.sub(&moved.mul(&gamma)?)?;
            if !new_off.is_zero() {
                return Err(Error::NotASplitting(format!(
                    "averaged splitting fails for element {x}"
                )));
            }
            m.set_block(start, start + a, &new_off);
        }
    }
    let kind = ctx.kind();
    let mut entries = Vec::with_capacity(blocks.len());
    for (j, blk) in blocks.iter().enumerate() {
        let mu: Vec<RatMat> = tilde
            .iter()
            .map(|m| m.block(blk.start, blk.end, blk.start, blk.end))
            .collect();
        let degree = hn.slopes[j];
        let module = extract_module(group, degree, &mu)?;
        entries.push(assemble_entry(&ctx, degree, module)?);
    }
    Ok(ClassificationReport {
        canonical: CanonicalForm { entries },
        kind,
        factorization,
        residual_zero,
        hn_invariance,
        validation,
        working_group: work.group.clone(),
        stages,
    })
}

fn generator_images(r: &Representation) -> Vec<CycMat> {
    r.generator_images()
}

fn assemble_entry(
    ctx: &GroupContext,
    degree: i64,
    module: Representation,
) -> Result<CanonicalEntry> {
    match ctx {
        GroupContext::Sl2(_) => Ok(CanonicalEntry {
            degree,
            parity: Parity::Plain,
            module,
        }),
        GroupContext::Pgl(p) => {
            if p.splitting().is_some() {
                let module =
                    Representation::from_generator_images(p.h(), &generator_images(&module))?;
                return Ok(CanonicalEntry {
                    degree,
                    parity: Parity::Plain,
                    module,
                });
            }
            let minus = module.image(p.minus_identity());
            if degree.rem_euclid(2) == 1 {
                if !odd_twist_valid(&module, p) {
                    return Err(Error::ParityViolation(format!(
                        "-I does not act as -1 on the module of odd degree {degree}"
                    )));
                }
                Ok(CanonicalEntry {
                    degree,
                    parity: Parity::OddTwist,
                    module,
                })
            } else {
                if !minus.is_identity() {
                    return Err(Error::ParityViolation(format!(
                        "-I acts nontrivially on the module of even degree {degree}"
                    )));
                }
                let h = p.h();
                let images: Vec<CycMat> = (0..h.num_generators())
                    .map(|k| module.image(p.lift(h.generator_index(k))).clone())
                    .collect();
                Ok(CanonicalEntry {
                    degree,
                    parity: Parity::Plain,
                    module: Representation::from_generator_images(h, &images)?,
                })
            }
        }
    }
}

/// The matrix used for the automorphy factor of an entry at generator `k`,
/// together with the module image there.
fn entry_generator_data(
    ctx: &GroupContext,
    entry: &CanonicalEntry,
    k: usize,
) -> Result<(Sl2Elem, CycMat)> {
    let group = ctx.group();
    let x = group.generator_index(k);
    match ctx {
        GroupContext::Sl2(_) => {
            if entry.parity == Parity::OddTwist {
                return Err(Error::ParityViolation(
                    "odd-twist entry over a subgroup of SL(2)".into(),
                ));
            }
            Ok((group.element(x).clone(), entry.module.image(x).clone()))
        }
        GroupContext::Pgl(p) => match (entry.parity, p.splitting()) {
            (Parity::OddTwist, Some(_)) => Err(Error::ParityViolation(
                "odd-twist entry over a group whose extension splits".into(),
            )),
            (Parity::OddTwist, None) => {
                if entry.degree.rem_euclid(2) != 1 {
                    return Err(Error::ParityViolation(
                        "odd-twist entry of even degree".into(),
                    ));
                }
                if !odd_twist_valid(&entry.module, p) {
                    return Err(Error::ParityViolation(
                        "-I does not act as -1 on an odd-twist module".into(),
                    ));
                }
                let lx = p.lift(x);
                Ok((
                    p.preimage().element(lx).clone(),
                    entry.module.image(lx).clone(),
                ))
            }
            (Parity::Plain, Some(s)) => {
                Ok((s.generator_lifts[k].clone(), entry.module.image(x).clone()))
            }
            (Parity::Plain, None) => {
                if entry.degree.rem_euclid(2) == 1 {
                    return Err(Error::ParityViolation(format!(
                        "𝒪({}) has no equivariant structure: the extension does not split",
                        entry.degree
                    )));
                }
                Ok((group.element(x).clone(), entry.module.image(x).clone()))
            }
        },
    }
}

/// `⊕ 𝒪(d_i) ⊗ M_i` with block-diagonal transition and action
/// `(c z + d)^{-d_i} M_i(g)`.
pub fn build_from_canonical(cf: &CanonicalForm, ctx: &GroupContext) -> Result<EquivariantBundle> {
    let group = ctx.group();
    let field = group.field();
    if cf.rank() == 0 {
        return Err(Error::InvalidParameter("canonical form of rank 0".into()));
    }
    for e in &cf.entries {
        if !e.module.same_group(ctx.module_group(e.parity)) {
            return Err(Error::GroupMismatch(format!(
                "module of the entry of degree {} is over another group",
                e.degree
            )));
        }
    }
    let entries: Vec<&CanonicalEntry> = cf.entries.iter().filter(|e| e.module.dim() > 0).collect();
    let degrees: Vec<i64> = entries
        .iter()
        .flat_map(|e| core::iter::repeat_n(e.degree, e.module.dim()))
        .collect();
    let base = TransitionCocycle::split(field, &degrees);
    let mut actions = Vec::with_capacity(group.num_generators());
    for k in 0..group.num_generators() {
        let blocks = entries
            .iter()
            .map(|e| {
                let (g, m) = entry_generator_data(ctx, e, k)?;
                let f = AutomorphyFactor::new(e.degree).eval(&g);
                Ok(m.map(|c| f.scale(c)))
            })
            .collect::<Result<Vec<RatMat>>>()?;
        actions.push(Matrix::block_diag(field, &blocks));
    }
    EquivariantBundle::new(group.clone(), base, actions)
}

/// `𝒪(n)` with the action `(c z + d)^{-n}`; for odd `n` over a PGL(2)
/// group a splitting `γ` must be supplied.
pub fn natural_structure(
    n: i64,
    group: &Arc<FiniteMatrixGroup>,
    gamma: Option<&SplittingHom>,
) -> Result<EquivariantBundle> {
    let field = group.field();
    let base = TransitionCocycle::split(field, &[n]);
    let mats: Vec<Sl2Elem> = if group.is_projective() && n.rem_euclid(2) == 1 {
        match gamma {
            Some(s) if s.generator_lifts.len() == group.num_generators() => {
                s.generator_lifts.clone()
            }
            Some(_) => {
                return Err(Error::DimensionMismatch(
                    "one lift per generator expected".into(),
                ))
            }
            None => {
                return Err(Error::ParityViolation(format!(
                    "𝒪({n}) needs a splitting of the extension"
                )))
            }
        }
    } else {
        (0..group.num_generators())
            .map(|k| group.element(group.generator_index(k)).clone())
            .collect()
    };
    let actions = mats
        .iter()
        .map(|g| Matrix::from_vec(field, 1, 1, vec![AutomorphyFactor::new(n).eval(g)]))
        .collect::<Result<Vec<_>>>()?;
    EquivariantBundle::new(group.clone(), base, actions)
}

/// Isomorphism of equivariant bundles via their canonical forms.
pub fn equiv_isomorphic(b1: &EquivariantBundle, b2: &EquivariantBundle) -> Result<bool> {
    if *b1.group != *b2.group {
        return Err(Error::GroupMismatch("bundles over different groups".into()));
    }
    let c1 = classify(b1)?.canonical;
    let c2 = classify(b2)?.canonical;
    c1.equivalent(&c2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::catalog;

    fn sl2(g: FiniteMatrixGroup) -> (Arc<FiniteMatrixGroup>, GroupContext) {
        let g = Arc::new(g);
        let ctx = GroupContext::new(g.clone()).unwrap();
        (g, ctx)
    }

    #[test]
    fn natural_line_bundle_classifies_to_trivial_module() {
        let (g, _) = sl2(catalog::binary_tetrahedral().unwrap());
        for n in [-3, 0, 2] {
            let b = natural_structure(n, &g, None).unwrap();
            assert!(validate_equivariance(&b).is_valid());
            let rep = classify(&b).unwrap();
            assert_eq!(rep.canonical.entries.len(), 1);
            let e = &rep.canonical.entries[0];
            assert_eq!(e.degree, n);
            assert!(
                crate::matgroup::module_isomorphic(&e.module, &Representation::trivial(&g, 1))
                    .unwrap()
            );
        }
    }

    #[test]
    fn direct_and_adapted_validation_agree() {
        let (g, ctx) = sl2(catalog::binary_dihedral(2).unwrap());
        let cf = CanonicalForm {
            entries: vec![
                CanonicalEntry {
                    degree: 1,
                    parity: Parity::Plain,
                    module: Representation::standard(&g).unwrap(),
                },
                CanonicalEntry {
                    degree: -2,
                    parity: Parity::Plain,
                    module: Representation::trivial(&g, 1),
                },
            ],
        };
        let b = build_from_canonical(&cf, &ctx).unwrap();
        assert!(validate_equivariance(&b).is_valid());
        assert!(validate_equivariance_direct(&b).is_valid());
        let mut actions = b.actions().to_vec();
        actions[1] = actions[1].scale(&RatFun::z(g.field()));
        let bad = EquivariantBundle::new(g.clone(), b.base().clone(), actions).unwrap();
        let adapted = validate_equivariance(&bad);
        let direct = validate_equivariance_direct(&bad);
        assert!(!adapted.is_valid() && !direct.is_valid());
        let regular = |r: &ValidationReport| {
            r.violations
                .iter()
                .filter(|v| matches!(v, Violation::Regularity { .. }))
                .cloned()
                .collect::<Vec<_>>()
        };
        assert_eq!(regular(&adapted), regular(&direct));
    }

    #[test]
    fn broken_cocycle_is_reported() {
        let (g, _) = sl2(catalog::cyclic(4).unwrap());
        let field = g.field();
        let base = TransitionCocycle::split(field, &[1]);
        let a = Matrix::from_vec(
            field,
            1,
            1,
            vec![RatFun::constant(CycNum::from_int(field, 2))],
        )
        .unwrap();
        let b = EquivariantBundle::new(g, base, vec![a]).unwrap();
        let rep = validate_equivariance(&b);
        assert!(rep
            .violations
            .iter()
            .any(|v| matches!(v, Violation::CocycleLaw { .. })));
        assert!(classify(&b).is_err());
    }

    #[test]
    fn round_trip_through_canonical_form() {
        let (g, ctx) = sl2(catalog::binary_dihedral(3).unwrap());
        let std = Representation::standard(&g).unwrap();
        let cf = CanonicalForm {
            entries: vec![
                CanonicalEntry {
                    degree: 2,
                    parity: Parity::Plain,
                    module: std.clone(),
                },
                CanonicalEntry {
                    degree: -1,
                    parity: Parity::Plain,
                    module: Representation::trivial(&g, 1),
                },
            ],
        };
        let b = build_from_canonical(&cf, &ctx).unwrap();
        assert!(validate_equivariance(&b).is_valid());
        let rep = classify(&b).unwrap();
        assert!(rep.canonical.equivalent(&cf).unwrap());
        assert_eq!(rep.canonical.degrees(), vec![2, 2, -1]);
    }

    #[test]
    fn odd_degree_without_splitting_is_rejected() {
        let (h, ctx) = sl2(catalog::pgl_dihedral(2).unwrap());
        assert_eq!(ctx.kind(), GroupKind::PglNonSplit);
        let cf = CanonicalForm {
            entries: vec![CanonicalEntry {
                degree: 1,
                parity: Parity::Plain,
                module: Representation::trivial(&h, 1),
            }],
        };
        assert!(matches!(
            build_from_canonical(&cf, &ctx),
            Err(Error::ParityViolation(_))
        ));
        assert!(matches!(
            natural_structure(1, &h, None),
            Err(Error::ParityViolation(_))
        ));
    }

    #[test]
    fn odd_twist_round_trip() {
        let (_, ctx) = sl2(catalog::pgl_dihedral(2).unwrap());
        let p = ctx.pgl().unwrap().clone();
        let std = Representation::standard(p.preimage()).unwrap();
        let cf = CanonicalForm {
            entries: vec![
                CanonicalEntry {
                    degree: 1,
                    parity: Parity::OddTwist,
                    module: std,
                },
                CanonicalEntry {
                    degree: 0,
                    parity: Parity::Plain,
                    module: Representation::trivial(p.h(), 1),
                },
            ],
        };
        let b = build_from_canonical(&cf, &ctx).unwrap();
        assert!(validate_equivariance(&b).is_valid());
        let rep = classify(&b).unwrap();
        assert_eq!(rep.kind, GroupKind::PglNonSplit);
        assert!(rep.canonical.equivalent(&cf).unwrap());
    }
}
