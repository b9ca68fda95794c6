use std::sync::Arc;

use eqbundle_core::bundle::{
    birkhoff_factor, expected_h0, h0_sections, hn_filtration, splitting_type, H0Solver,
    TransitionCocycle,
};
use eqbundle_core::cyclotomic::{CycField, CycNum, Field};
use eqbundle_core::equivariant::{
    check_hn_invariance, classify, natural_structure, validate_equivariance,
    validate_equivariance_direct, EquivariantBundle,
};
use eqbundle_core::linalg::Matrix;
use eqbundle_core::matgroup::{catalog, linear_characters, FiniteMatrixGroup, Representation};
use eqbundle_core::moebius::{AutomorphyFactor, MoebiusMap};
use eqbundle_core::poly::{Laurent, Poly};
use eqbundle_core::ratfun::{ratmat_det, ratmat_inverse, RatFun, RatMat};
use proptest::prelude::*;

const MODULI: [u32; 6] = [1, 3, 4, 5, 8, 12];

fn field(n: u32) -> Field {
    CycField::new(n).unwrap()
}

fn cyc(f: &Field, coeffs: &[i64]) -> CycNum {
    coeffs
        .iter()
        .enumerate()
        .fold(CycNum::zero(f), |acc, (k, &c)| {
            &acc + &CycNum::zeta_pow(f, k as i64).scale_int(c)
        })
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 1..5)
}

fn poly(f: &Field, c: &[Vec<i64>]) -> Poly {
    Poly::from_coeffs(f, c.iter().map(|x| cyc(f, x)).collect())
}

fn poly_coeffs(max_len: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, 1..3), 1..=max_len)
}

fn ratfun(f: &Field, num: &[Vec<i64>], den: &[Vec<i64>]) -> RatFun {
    let d = poly(f, den);
    let d = if d.is_zero() { Poly::one(f) } else { d };
    RatFun::new(poly(f, num), d).unwrap()
}

/// Product of elementary matrices `I + p e_ij` in `z` (`sign = 1`) or `1/z`.
fn unimodular(f: &Field, r: usize, ops: &[(usize, usize, Vec<i64>)], sign: i64) -> Matrix<Laurent> {
    let mut m = Matrix::identity(f, r);
    for (i, j, c) in ops {
        let (i, j) = (i % r, j % r);
        if i == j {
            continue;
        }
        let mut e: Matrix<Laurent> = Matrix::identity(f, r);
        let l = Laurent::from_poly(Poly::from_ints(f, c), 0);
        e.set(i, j, if sign < 0 { l.invert_variable() } else { l });
        m = m.mul(&e).unwrap();
    }
    m
}

type Ops = Vec<(usize, usize, Vec<i64>)>;

fn ops() -> impl Strategy<Value = Ops> {
    prop::collection::vec(
        (0usize..4, 0usize..4, prop::collection::vec(-2i64..=2, 1..4)),
        0..8,
    )
}

fn planted(f: &Field, degrees: &[i64], a: &Ops, b: &Ops) -> TransitionCocycle {
    let r = degrees.len();
    let t = unimodular(f, r, a, 1)
        .mul(TransitionCocycle::split(f, degrees).laurent())
        .unwrap()
        .mul(&unimodular(f, r, b, -1))
        .unwrap();
    TransitionCocycle::from_laurent(&t).unwrap()
}

fn sorted_desc(d: &[i64]) -> Vec<i64> {
    let mut d = d.to_vec();
    d.sort_unstable_by(|x, y| y.cmp(x));
    d
}

fn small_group(k: usize) -> Arc<FiniteMatrixGroup> {
    Arc::new(match k % 5 {
        0 => catalog::cyclic(2).unwrap(),
        1 => catalog::cyclic(3).unwrap(),
        2 => catalog::cyclic(4).unwrap(),
        3 => catalog::binary_dihedral(2).unwrap(),
        _ => catalog::binary_dihedral(3).unwrap(),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(m in 0usize..MODULI.len(), a in coeffs(), b in coeffs(), c in coeffs()) {
        let f = field(MODULI[m]);
        let (a, b, c) = (cyc(&f, &a), cyc(&f, &b), cyc(&f, &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn embedding_is_a_homomorphism(m in 0usize..MODULI.len(), a in coeffs(), b in coeffs()) {
        let f = field(MODULI[m]);
        let (a, b) = (cyc(&f, &a), cyc(&f, &b));
        let (ar, ai) = a.embed();
        let (br, bi) = b.embed();
        let (pr, pi) = (&a * &b).embed();
        let (sr, si) = (&a + &b).embed();
        let scale = 1.0 + (ar.hypot(ai) * br.hypot(bi));
        prop_assert!((pr - (ar * br - ai * bi)).abs() <= 1e-10 * scale);
        prop_assert!((pi - (ar * bi + ai * br)).abs() <= 1e-10 * scale);
        prop_assert!((sr - ar - br).abs() <= 1e-10 * scale && (si - ai - bi).abs() <= 1e-10 * scale);
    }

    #[test]
    fn galois_and_lifting_respect_products(a in coeffs(), b in coeffs(), k in prop::sample::select(vec![1u32, 5, 7, 11])) {
        let f = field(12);
        let (a, b) = (cyc(&f, &a), cyc(&f, &b));
        prop_assert_eq!((&a * &b).galois(k), &a.galois(k) * &b.galois(k));
        let big = field(24);
        let lifted = (&a * &b).lift_to(&big).unwrap();
        prop_assert_eq!(lifted, &a.lift_to(&big).unwrap() * &b.lift_to(&big).unwrap());
    }

    #[test]
    fn gcd_divides_and_scales(a in poly_coeffs(4), b in poly_coeffs(4), c in poly_coeffs(3)) {
        let f = field(3);
        let (a, b, c) = (poly(&f, &a), poly(&f, &b), poly(&f, &c));
        prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
        let g = a.mul(&c).gcd(&b.mul(&c));
        prop_assert!(a.mul(&c).divrem(&g).unwrap().1.is_zero());
        prop_assert!(b.mul(&c).divrem(&g).unwrap().1.is_zero());
        prop_assert!(g.divrem(&c).unwrap().1.is_zero());
        prop_assert_eq!(g, a.gcd(&b).mul(&c).make_monic());
    }

    #[test]
    fn determinant_is_multiplicative(
        n in 1usize..=3,
        entries in prop::collection::vec((poly_coeffs(2), poly_coeffs(2)), 18),
    ) {
        let f = field(4);
        let build = |off: usize| -> RatMat {
            let rows = (0..n)
                .map(|i| (0..n).map(|j| {
                    let (num, den) = &entries[off + i * n + j];
                    ratfun(&f, num, den)
                }).collect())
                .collect();
            Matrix::from_rows(&f, rows).unwrap()
        };
        let (a, b) = (build(0), build(9));
        let lhs = ratmat_det(&a.mul(&b).unwrap()).unwrap();
        let rhs = ratmat_det(&a).unwrap().mul(&ratmat_det(&b).unwrap());
        prop_assert_eq!(lhs, rhs);
        if let Ok(inv) = ratmat_inverse(&a) {
            prop_assert!(inv.mul(&a).unwrap().is_identity());
        }
    }

    #[test]
    fn moebius_composition_is_associative(x in 0usize..12, y in 0usize..12, w in 0usize..12, num in poly_coeffs(3), den in poly_coeffs(2)) {
        let g = catalog::binary_dihedral(3).unwrap();
        let f = g.field().clone();
        let r = ratfun(&f, &num, &den);
        let m = |i: usize| MoebiusMap::new(g.element(i).clone());
        prop_assert_eq!(m(x).compose(&m(y)).compose(&m(w)), m(x).compose(&m(y).compose(&m(w))));
        // pulling back along g h is pulling back along g, then along h
        prop_assert_eq!(m(x).compose(&m(y)).apply(&r), m(y).apply(&m(x).apply(&r)));
        for n in [-1, 2] {
            let j = AutomorphyFactor::new(n);
            let lhs = j.eval(g.element(g.mul(x, y)));
            let rhs = m(y).apply(&j.eval(g.element(x))).mul(&j.eval(g.element(y)));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn planted_splitting_type_is_recovered(
        degrees in prop::collection::vec(-4i64..=4, 1..=4),
        a in ops(), b in ops(), c in ops(), d in ops(),
    ) {
        let f = field(12);
        let e = planted(&f, &degrees, &a, &b);
        let fact = birkhoff_factor(&e).unwrap();
        prop_assert_eq!(&fact.degrees, &sorted_desc(&degrees));
        prop_assert!(fact.verify(e.laurent()));
        // invariant under further changes of trivialization
        let r = degrees.len();
        let moved = unimodular(&f, r, &c, 1).mul(e.laurent()).unwrap().mul(&unimodular(&f, r, &d, -1)).unwrap();
        let moved = TransitionCocycle::from_laurent(&moved).unwrap();
        prop_assert_eq!(splitting_type(&moved).unwrap(), fact.degrees.clone());
        let hn = hn_filtration(&e).unwrap();
        prop_assert_eq!(*hn.ranks().last().unwrap(), r);
    }

    #[test]
    fn sections_match_the_oracle(
        degrees in prop::collection::vec(-3i64..=3, 1..=3),
        a in ops(), b in ops(), m in -4i64..=4,
    ) {
        let f = field(3);
        let e = planted(&f, &degrees, &a, &b);
        let expected = expected_h0(&degrees, m);
        prop_assert_eq!(H0Solver::new(&e).unwrap().dimension(m), expected);
        let basis = h0_sections(&e, m).unwrap();
        prop_assert_eq!(basis.len(), expected);
    }

    #[test]
    fn reynolds_projects_onto_invariants(k in 0usize..5, picks in prop::collection::vec(0usize..8, 1..4)) {
        let g = small_group(k);
        let mut pieces = linear_characters(&g);
        pieces.push(Representation::standard(&g).unwrap());
        let mut rep = pieces[picks[0] % pieces.len()].clone();
        for p in &picks[1..] {
            rep = rep.direct_sum(&pieces[p % pieces.len()]).unwrap();
        }
        let r = rep.reynolds();
        prop_assert_eq!(r.mul(&r).unwrap(), r.clone());
        for x in 0..g.order() {
            prop_assert_eq!(rep.image(x).mul(&r).unwrap(), r.clone());
        }
        let mean = rep.character().iter().fold(CycNum::zero(g.field()), |acc, c| &acc + c);
        let n = CycNum::from_int(g.field(), g.order() as i64);
        prop_assert_eq!(r.trace(), mean.try_div(&n).unwrap());
    }

    #[test]
    fn natural_sums_classify_back(k in 0usize..5, degrees in prop::collection::vec(-4i64..=4, 1..=3)) {
        let g = small_group(k);
        let f = g.field().clone();
        let lines: Vec<EquivariantBundle> = degrees.iter().map(|&d| natural_structure(d, &g, None).unwrap()).collect();
        let n = g.num_generators();
        let actions: Vec<RatMat> = (0..n)
            .map(|i| Matrix::block_diag(&f, &lines.iter().map(|b| b.actions()[i].clone()).collect::<Vec<_>>()))
            .collect();
        let b = EquivariantBundle::new(g.clone(), TransitionCocycle::split(&f, &degrees), actions).unwrap();
        let direct = validate_equivariance_direct(&b);
        prop_assert!(validate_equivariance(&b).is_valid() && direct.is_valid());
        prop_assert!(check_hn_invariance(&b).unwrap().holds());
        let rep = classify(&b).unwrap();
        prop_assert_eq!(rep.canonical.degrees(), sorted_desc(&degrees));
        for e in &rep.canonical.entries {
            let copies = degrees.iter().filter(|&&d| d == e.degree).count();
            prop_assert_eq!(e.module.character(), Representation::trivial(&g, copies).character());
        }
    }
}
