//! Small worked instances with hand-checked answers.

use std::sync::Arc;

use eqbundle_core::bundle::{
    birkhoff_factor, h0_dimension, hn_filtration, splitting_type, TransitionCocycle,
};
use eqbundle_core::cyclotomic::{CycField, CycNum};
use eqbundle_core::equivariant::{
    build_from_canonical, check_hn_invariance, classify, equiv_isomorphic, equivariant_splitting,
    extend_actions, extract_module, natural_structure, validate_equivariance, verify_stage,
    CanonicalEntry, CanonicalForm, EquivariantBundle, GroupContext, Parity, StageCertificate,
};
use eqbundle_core::extensions::{complement_exists_by_search, extension_splits, PglGroup};
use eqbundle_core::linalg::Matrix;
use eqbundle_core::matgroup::{
    catalog, module_isomorphic, FiniteMatrixGroup, Representation, Sl2Elem,
};
use eqbundle_core::poly::Poly;
use eqbundle_core::ratfun::{ratmat_det, ratmat_inverse, RatFun, RatMat};
use eqbundle_core::Error;

fn arc(g: FiniteMatrixGroup) -> Arc<FiniteMatrixGroup> {
    Arc::new(g)
}

fn rf(f: &Arc<CycField>, num: &[i64], den: &[i64]) -> RatFun {
    RatFun::new(Poly::from_ints(f, num), Poly::from_ints(f, den)).unwrap()
}

#[test]
fn cyclotomic_identities() {
    let f4 = CycField::new(4).unwrap();
    let i = CycNum::zeta_pow(&f4, 1);
    assert_eq!(&i * &i, CycNum::from_int(&f4, -1));

    let f3 = CycField::new(3).unwrap();
    let one = CycNum::one(&f3);
    let lhs = &(&one + &CycNum::zeta_pow(&f3, 1)) * &(&one + &CycNum::zeta_pow(&f3, 2));
    assert!(lhs.is_one());
    let (re, im) = lhs.embed();
    assert!((re - 1.0).abs() < 1e-12 && im.abs() < 1e-12);

    let f8 = CycField::new(8).unwrap();
    assert_eq!(
        CycNum::zeta_pow(&f8, 1).inv().unwrap(),
        CycNum::zeta_pow(&f8, 7)
    );
}

#[test]
fn rational_matrix_inverse() {
    let f = CycField::new(1).unwrap();
    let a: RatMat = Matrix::from_rows(
        &f,
        vec![
            vec![RatFun::z(&f), RatFun::one(&f)],
            vec![RatFun::zero(&f), RatFun::one(&f)],
        ],
    )
    .unwrap();
    let expected: RatMat = Matrix::from_rows(
        &f,
        vec![
            vec![rf(&f, &[1], &[0, 1]), rf(&f, &[-1], &[0, 1])],
            vec![RatFun::zero(&f), RatFun::one(&f)],
        ],
    )
    .unwrap();
    let inv = ratmat_inverse(&a).unwrap();
    assert_eq!(inv, expected);
    assert!(inv.mul(&a).unwrap().is_identity());
    assert!(ratmat_det(&Matrix::identity(&f, 2)).unwrap().is_one());
    let unit = RatFun::monomial(CycNum::from_int(&f, 3), 2);
    assert_eq!(unit.laurent_unit(), Some((CycNum::from_int(&f, 3), 2)));
    assert_eq!(rf(&f, &[1, 1], &[1]).laurent_unit(), None);
}

#[test]
fn group_closures() {
    let f = CycField::new(12).unwrap();
    let trivial = FiniteMatrixGroup::generate(&f, &[Sl2Elem::identity(&f)], false, 240).unwrap();
    assert_eq!(trivial.order(), 1);
    assert_eq!(trivial.classes().len(), 1);
    let c6 = Sl2Elem::diag(CycNum::zeta_pow(&f, 2)).unwrap();
    assert_eq!(
        FiniteMatrixGroup::generate(&f, &[c6], false, 240)
            .unwrap()
            .order(),
        6
    );
    let i = CycNum::zeta_pow(&f, 3);
    let j = Sl2Elem::new(
        CycNum::zero(&f),
        CycNum::one(&f),
        CycNum::from_int(&f, -1),
        CycNum::zero(&f),
    )
    .unwrap();
    let q8 = FiniteMatrixGroup::generate(&f, &[Sl2Elem::diag(i).unwrap(), j], false, 240).unwrap();
    assert_eq!(q8.order(), 8);
    assert_eq!(q8.classes().len(), 5);
    assert_eq!(catalog::cyclic(5).unwrap().order(), 5);
    assert_eq!(catalog::binary_dihedral(3).unwrap().order(), 12);
    assert_eq!(catalog::binary_icosahedral().unwrap().order(), 120);
}

#[test]
fn characters_and_projectors() {
    let q8 = arc(catalog::binary_dihedral(2).unwrap());
    let std2 = Representation::standard(&q8).unwrap();
    let minus = q8.contains_minus_identity().unwrap();
    assert_eq!(std2.image(minus).trace(), CycNum::from_int(q8.field(), -2));
    assert!(std2.reynolds().is_zero());
    assert!(Representation::trivial(&q8, 2).reynolds().is_identity());

    let c2 = arc(catalog::cyclic(2).unwrap());
    let chars = eqbundle_core::matgroup::linear_characters(&c2);
    assert_eq!(chars.len(), 2);
    assert!(!module_isomorphic(&chars[0], &chars[1]).unwrap());
    let regular = chars[0].direct_sum(&chars[1]).unwrap();
    let swapped = chars[1].direct_sum(&chars[0]).unwrap();
    assert!(module_isomorphic(&regular, &swapped).unwrap());
    let r = regular.reynolds();
    assert_eq!(r.mul(&r).unwrap(), r);
    assert!(r.trace().is_one());
}

#[test]
fn splitting_types_and_sections() {
    let f = CycField::new(1).unwrap();
    let e = TransitionCocycle::split(&f, &[3, -1]);
    let fact = birkhoff_factor(&e).unwrap();
    assert_eq!(fact.degrees, vec![3, -1]);
    assert!(fact.u_plus.is_identity() && fact.u_minus.is_identity());
    assert_eq!(hn_filtration(&e).unwrap().ranks(), vec![1, 2]);
    let line = TransitionCocycle::split(&f, &[-2]);
    assert_eq!(splitting_type(&line).unwrap(), vec![-2]);
    for d in -3..=4 {
        let e = TransitionCocycle::split(&f, &[d]);
        assert_eq!(h0_dimension(&e, 0).unwrap(), (d + 1).max(0) as usize);
    }
    assert_eq!(
        h0_dimension(&TransitionCocycle::split(&f, &[2, 0]), 0).unwrap(),
        4
    );
    let semistable = hn_filtration(&TransitionCocycle::split(&f, &[2, 2])).unwrap();
    assert_eq!(semistable.len(), 1);
}

#[test]
fn natural_structures() {
    let c4 = arc(catalog::cyclic(4).unwrap());
    let b = natural_structure(1, &c4, None).unwrap();
    assert!(validate_equivariance(&b).is_valid());
    let minus = c4.contains_minus_identity().unwrap();
    let all = b.all_actions().unwrap();
    assert_eq!(
        all[minus].get(0, 0),
        &RatFun::constant(CycNum::from_int(c4.field(), -1))
    );

    let rep = classify(&b).unwrap();
    assert_eq!(rep.canonical.degrees(), vec![1]);
    assert_eq!(
        rep.canonical.entries[0].module.character(),
        Representation::trivial(&c4, 1).character()
    );

    // a sign flip survives g⁴ = e, a factor of 2 does not
    let flipped: Vec<RatMat> = b.actions().iter().map(|m| m.neg()).collect();
    let signed = EquivariantBundle::new(c4.clone(), b.base().clone(), flipped).unwrap();
    assert!(validate_equivariance(&signed).is_valid());
    let two = RatFun::constant(CycNum::from_int(c4.field(), 2));
    let doubled: Vec<RatMat> = b.actions().iter().map(|m| m.scale(&two)).collect();
    let bad = EquivariantBundle::new(c4.clone(), b.base().clone(), doubled).unwrap();
    assert!(!validate_equivariance(&bad).is_valid());
    assert!(matches!(
        classify(&bad),
        Err(Error::InvalidEquivariantStructure(_))
    ));
}

#[test]
fn module_extraction() {
    let c3 = arc(catalog::cyclic(3).unwrap());
    let f = c3.field().clone();
    let regular = {
        let chars = eqbundle_core::matgroup::linear_characters(&c3);
        chars[0]
            .direct_sum(&chars[1])
            .unwrap()
            .direct_sum(&chars[2])
            .unwrap()
    };
    let mu: Vec<RatMat> = (0..c3.order())
        .map(|x| regular.image(x).map(|c| RatFun::constant(c.clone())))
        .collect();
    let m = extract_module(&c3, 0, &mu).unwrap();
    assert_eq!(m.character(), {
        let mut chi = vec![CycNum::zero(&f); 3];
        chi[c3.identity()] = CycNum::from_int(&f, 3);
        chi
    });

    // 𝒪(1)^⊕2 over the half turn, with the standard ℤ/4 action
    let h = arc(catalog::pgl_cyclic(2).unwrap());
    let ctx = GroupContext::new(h.clone()).unwrap();
    let pgl = ctx.pgl().unwrap();
    let cf = CanonicalForm {
        entries: vec![CanonicalEntry {
            degree: 1,
            parity: Parity::OddTwist,
            module: Representation::standard(pgl.preimage()).unwrap(),
        }],
    };
    let b = build_from_canonical(&cf, &ctx).unwrap();
    let rep = classify(&b).unwrap();
    let m = &rep.canonical.entries[0].module;
    assert_eq!(m.dim(), 2);
    assert_eq!(rep.canonical.entries[0].parity, Parity::OddTwist);
    assert!(m.image(pgl.minus_identity()).neg().is_identity());
}

#[test]
fn parity_rules() {
    let h = arc(catalog::pgl_cyclic(2).unwrap());
    let ctx = GroupContext::new(h.clone()).unwrap();
    let pgl = ctx.pgl().unwrap().clone();
    assert!(extension_splits(&pgl).is_none());
    assert!(!complement_exists_by_search(&pgl));
    let plain_odd = CanonicalForm {
        entries: vec![CanonicalEntry {
            degree: 1,
            parity: Parity::Plain,
            module: Representation::trivial(&h, 1),
        }],
    };
    assert!(matches!(
        build_from_canonical(&plain_odd, &ctx),
        Err(Error::ParityViolation(_))
    ));
    // a module of ℋ with -I acting trivially cannot carry an odd degree
    let bad_twist = CanonicalForm {
        entries: vec![CanonicalEntry {
            degree: 1,
            parity: Parity::OddTwist,
            module: Representation::trivial(pgl.preimage(), 1),
        }],
    };
    assert!(build_from_canonical(&bad_twist, &ctx).is_err());

    let mixed = CanonicalForm {
        entries: vec![
            CanonicalEntry {
                degree: 2,
                parity: Parity::Plain,
                module: Representation::trivial(&h, 2),
            },
            CanonicalEntry {
                degree: 1,
                parity: Parity::OddTwist,
                module: Representation::standard(pgl.preimage()).unwrap(),
            },
        ],
    };
    let b = build_from_canonical(&mixed, &ctx).unwrap();
    assert_eq!(b.rank(), 4);
    assert!(validate_equivariance(&b).is_valid());
    assert!(check_hn_invariance(&b).unwrap().holds());

    let c3 = arc(catalog::pgl_cyclic(3).unwrap());
    let pgl3 = PglGroup::new(c3.clone()).unwrap();
    let gamma = extension_splits(&pgl3).unwrap();
    assert!(complement_exists_by_search(&pgl3));
    assert!(validate_equivariance(&natural_structure(1, &c3, Some(&gamma)).unwrap()).is_valid());
}

#[test]
fn isomorphism_checks() {
    let bd = arc(catalog::binary_dihedral(3).unwrap());
    let ctx = GroupContext::new(bd.clone()).unwrap();
    let chars = eqbundle_core::matgroup::linear_characters(&bd);
    let sum = chars[0].direct_sum(&chars[1]).unwrap();
    let one = |m: Representation| CanonicalForm {
        entries: vec![CanonicalEntry {
            degree: 1,
            parity: Parity::Plain,
            module: m,
        }],
    };
    let a = build_from_canonical(&one(Representation::standard(&bd).unwrap()), &ctx).unwrap();
    let b = build_from_canonical(&one(sum), &ctx).unwrap();
    assert!(equiv_isomorphic(&a, &a).unwrap());
    assert!(!equiv_isomorphic(&a, &b).unwrap());
}

#[test]
fn averaging_removes_a_non_equivariant_perturbation() {
    let c4 = arc(catalog::cyclic(4).unwrap());
    let f = c4.field().clone();
    let b = {
        let o1 = natural_structure(1, &c4, None).unwrap();
        let o0 = natural_structure(0, &c4, None).unwrap();
        let actions: Vec<RatMat> = o1
            .actions()
            .iter()
            .zip(o0.actions())
            .map(|(x, y)| Matrix::block_diag(&f, &[x.clone(), y.clone()]))
            .collect();
        EquivariantBundle::new(c4.clone(), TransitionCocycle::split(&f, &[1, 0]), actions).unwrap()
    };
    let all = extend_actions(&c4, b.actions()).unwrap();
    let psi: RatMat = Matrix::from_rows(
        &f,
        vec![vec![rf(&f, &[2, -1], &[1])], vec![RatFun::one(&f)]],
    )
    .unwrap();
    let cert = |psi: RatMat| StageCertificate {
        sub_degree: 1,
        sub_rank: 1,
        quotient_rank: 1,
        psi,
        generator_actions: b.actions().to_vec(),
    };
    assert!(verify_stage(&cert(psi.clone()), &c4).is_err());
    let averaged = equivariant_splitting(&c4, &all, 1, &psi).unwrap();
    verify_stage(&cert(averaged.clone()), &c4).unwrap();
    // averaging fixes what is already equivariant
    assert_eq!(
        equivariant_splitting(&c4, &all, 1, &averaged).unwrap(),
        averaged
    );
}
