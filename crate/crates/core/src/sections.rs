//! Global sections of `⊕ 𝒪(d_i) ⊗ M_i` as a group module.

use alloc::{vec, vec::Vec};

use crate::bundle::h0_sections;
use crate::cyclotomic::CycNum;
use crate::equivariant::{
    build_from_canonical, transport_sections, CanonicalEntry, CanonicalForm, GroupContext, Parity,
};
use crate::error::{Error, Result};
use crate::linalg::{CycMat, Matrix};
use crate::matgroup::{sym_power_matrix, Representation, Sl2Elem};
use crate::poly::Poly;

/// The SL(2) matrix whose symmetric powers give `H⁰(𝒪(d))` at element `h`,
/// and the module image there.
fn entry_matrices(ctx: &GroupContext, e: &CanonicalEntry, h: usize) -> Result<(Sl2Elem, CycMat)> {
    let group = ctx.group();
    match ctx {
        GroupContext::Sl2(_) => Ok((group.element(h).clone(), e.module.image(h).clone())),
        GroupContext::Pgl(p) => match (e.parity, p.splitting()) {
            (Parity::Plain, Some(s)) => Ok((
                p.preimage().element(s.images[h]).clone(),
                e.module.image(h).clone(),
            )),
            (Parity::Plain, None) => {
                if e.degree.rem_euclid(2) == 1 {
                    return Err(Error::ParityViolation(
                        "plain odd-degree entry over a non-split group".into(),
                    ));
                }
                Ok((group.element(h).clone(), e.module.image(h).clone()))
            }
            (Parity::OddTwist, None) => {
                let l = p.lift(h);
                Ok((p.preimage().element(l).clone(), e.module.image(l).clone()))
            }
            (Parity::OddTwist, Some(_)) => Err(Error::ParityViolation(
                "odd-twist entry over a group whose extension splits".into(),
            )),
        },
    }
}

/// `H⁰ = ⊕_{d_i ≥ 0} Sym^{d_i} ⊗ M_i`, computed from symmetric powers.
pub fn sections_module(cf: &CanonicalForm, ctx: &GroupContext) -> Result<Representation> {
    let group = ctx.group();
    let field = group.field();
    let mut images: Vec<CycMat> = vec![Matrix::zeros(field, 0, 0); group.order()];
    for e in cf.entries.iter().filter(|e| e.degree >= 0) {
        if !e.module.same_group(ctx.module_group(e.parity)) {
            return Err(Error::GroupMismatch("module over another group".into()));
        }
        let d = e.degree as usize;
        for (h, img) in images.iter_mut().enumerate() {
            let (g, m) = entry_matrices(ctx, e, h)?;
            let block = sym_power_matrix(&g, d).kron(&m);
            *img = Matrix::block_diag(field, &[img.clone(), block]);
        }
    }
    Representation::from_all_images(group, images)
}

/// The same module from an `h⁰` basis of the built bundle, transported
/// through its action.
pub fn sections_module_by_transport(
    cf: &CanonicalForm,
    ctx: &GroupContext,
) -> Result<Representation> {
    let b = build_from_canonical(cf, ctx)?;
    let basis: Vec<Vec<Poly>> = h0_sections(b.base(), 0)?
        .into_iter()
        .map(|s| s.s0)
        .collect();
    transport_sections(b.group(), &basis, b.actions())
}

/// `χ(Sym^d)` at an element of trace `t`: `χ_d = t χ_{d-1} - χ_{d-2}`.
pub fn sym_power_character(t: &CycNum, d: usize) -> CycNum {
    let field = t.field();
    let mut prev = CycNum::one(field);
    if d == 0 {
        return prev;
    }
    let mut cur = t.clone();
    for _ in 1..d {
        let next = &(t * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Character of the section module from traces alone.
pub fn sections_character(cf: &CanonicalForm, ctx: &GroupContext) -> Result<Vec<CycNum>> {
    let group = ctx.group();
    let field = group.field();
    let mut chi = vec![CycNum::zero(field); group.order()];
    for e in cf.entries.iter().filter(|e| e.degree >= 0) {
        for (h, c) in chi.iter_mut().enumerate() {
            let (g, m) = entry_matrices(ctx, e, h)?;
            let term = &sym_power_character(&g.trace(), e.degree as usize) * &m.trace();
            *c = &*c + &term;
        }
    }
    Ok(chi)
}

/// `Σ_{d_i ≥ 0} (d_i + 1) dim M_i`.
pub fn sections_dimension(cf: &CanonicalForm) -> usize {
    cf.entries
        .iter()
        .filter(|e| e.degree >= 0)
        .map(|e| (e.degree as usize + 1) * e.module.dim())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::catalog;
    use alloc::sync::Arc;

    #[test]
    fn degree_one_over_c3() {
        let g = Arc::new(catalog::cyclic(3).unwrap());
        let ctx = GroupContext::new(g.clone()).unwrap();
        let cf = CanonicalForm {
            entries: vec![CanonicalEntry {
                degree: 1,
                parity: Parity::Plain,
                module: Representation::trivial(&g, 1),
            }],
        };
        let sym = sections_module(&cf, &ctx).unwrap();
        let moved = sections_module_by_transport(&cf, &ctx).unwrap();
        assert_eq!(sym.character(), moved.character());
        assert_eq!(sym.character(), sections_character(&cf, &ctx).unwrap());
        let f = g.field();
        let z = CycNum::zeta_pow(f, 1);
        let mut expected: Vec<CycNum> = [0, 1, 2]
            .iter()
            .map(|&k| &z.pow(k) + &z.pow(3 - k))
            .collect();
        expected[0] = CycNum::from_int(f, 2);
        let mut got = sym.class_character();
        got.sort();
        expected.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn negative_degree_has_no_sections() {
        let g = Arc::new(catalog::cyclic(4).unwrap());
        let ctx = GroupContext::new(g.clone()).unwrap();
        let cf = CanonicalForm {
            entries: vec![CanonicalEntry {
                degree: -1,
                parity: Parity::Plain,
                module: Representation::standard(&g).unwrap(),
            }],
        };
        assert_eq!(sections_module(&cf, &ctx).unwrap().dim(), 0);
        assert_eq!(sections_module_by_transport(&cf, &ctx).unwrap().dim(), 0);
    }

    #[test]
    fn odd_twist_sections_descend() {
        let h = Arc::new(catalog::pgl_dihedral(2).unwrap());
        let ctx = GroupContext::new(h.clone()).unwrap();
        let p = ctx.pgl().unwrap().clone();
        let cf = CanonicalForm {
            entries: vec![CanonicalEntry {
                degree: 3,
                parity: Parity::OddTwist,
                module: Representation::standard(p.preimage()).unwrap(),
            }],
        };
        let sym = sections_module(&cf, &ctx).unwrap();
        assert_eq!(sym.dim(), sections_dimension(&cf));
        assert_eq!(
            sym.character(),
            sections_module_by_transport(&cf, &ctx).unwrap().character()
        );
        // both lifts of each element give the same value
        let big = p.preimage();
        let m = &cf.entries[0].module;
        for x in 0..big.order() {
            let y = big.mul(p.minus_identity(), x);
            let chi =
                |i: usize| &sym_power_character(&big.element(i).trace(), 3) * &m.image(i).trace();
            assert_eq!(chi(x), chi(y));
        }
    }
}
