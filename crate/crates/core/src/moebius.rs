//! Möbius transformations in the two affine charts of the projective line,
//! and factors of automorphy for the line bundles `𝒪(n)`.
//!
//! Chart 0 has coordinate `z`, chart 1 has `w = 1/z`. A bundle is glued by
//! `s0 = T(z) s1`, so `𝒪(n)` has transition `z^n`.

use crate::cyclotomic::CycNum;
use crate::matgroup::Sl2Elem;
use crate::poly::Poly;
use crate::ratfun::{ratmat_compose, RatFun, RatMat};

/// The map `z ↦ (a z + b) / (c z + d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoebiusMap {
    source: Sl2Elem,
}

/// A point `[x : y]` of the projective line; `z = x / y`.
#[derive(Clone, Debug)]
pub struct ProjPoint {
    pub x: CycNum,
    pub y: CycNum,
}

impl ProjPoint {
    pub fn finite(z: CycNum) -> Self {
        let one = CycNum::one(z.field());
        ProjPoint { x: z, y: one }
    }

    pub fn infinity(field: &crate::cyclotomic::Field) -> Self {
        ProjPoint {
            x: CycNum::one(field),
            y: CycNum::zero(field),
        }
    }

    pub fn is_infinity(&self) -> bool {
        self.y.is_zero()
    }

    /// The affine coordinate in chart 0, or `None` at infinity.
    pub fn affine(&self) -> Option<CycNum> {
        (!self.y.is_zero()).then(|| &self.x * &self.y.inv().expect("nonzero"))
    }
}

impl PartialEq for ProjPoint {
    fn eq(&self, other: &Self) -> bool {
        &self.x * &other.y == &self.y * &other.x
    }
}

impl MoebiusMap {
    pub fn new(source: Sl2Elem) -> Self {
        MoebiusMap { source }
    }

    pub fn source(&self) -> &Sl2Elem {
        &self.source
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        MoebiusMap::new(self.source.mul(&other.source))
    }

    /// The same map written in the chart-1 coordinate `w = 1/z`.
    pub fn in_chart1(&self) -> Self {
        let g = &self.source;
        MoebiusMap::new(Sl2Elem {
            a: g.d.clone(),
            b: g.c.clone(),
            c: g.b.clone(),
            d: g.a.clone(),
        })
    }

    pub fn apply(&self, f: &RatFun) -> RatFun {
        let g = &self.source;
        f.compose_moebius(&g.a, &g.b, &g.c, &g.d)
    }

    pub fn apply_mat(&self, m: &RatMat) -> RatMat {
        let g = &self.source;
        ratmat_compose(m, &g.a, &g.b, &g.c, &g.d)
    }

    /// `c z + d`, vanishing where the image leaves chart 0.
    pub fn denominator(&self) -> Poly {
        Poly::linear(self.source.d.clone(), self.source.c.clone())
    }

    /// `a z + b`, vanishing where the image is `0`.
    pub fn numerator(&self) -> Poly {
        Poly::linear(self.source.b.clone(), self.source.a.clone())
    }
}

/// Projectivized linear action on `[x : y]`.
pub fn act_point(g: &Sl2Elem, p: &ProjPoint) -> ProjPoint {
    ProjPoint {
        x: &(&g.a * &p.x) + &(&g.b * &p.y),
        y: &(&g.c * &p.x) + &(&g.d * &p.y),
    }
}

/// The factor `j_g(z) = (c z + d)^{-n}` of the natural structure on `𝒪(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AutomorphyFactor {
    pub degree: i64,
}

impl AutomorphyFactor {
    pub fn new(degree: i64) -> Self {
        AutomorphyFactor { degree }
    }

    pub fn eval(&self, g: &Sl2Elem) -> RatFun {
        let base = RatFun::from_poly(MoebiusMap::new(g.clone()).denominator());
        base.pow(-self.degree).expect("c z + d is nonzero")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::{CycField, Field};
    use crate::matgroup::catalog;

    fn pt(f: &Field, x: i64) -> ProjPoint {
        ProjPoint::finite(CycNum::from_int(f, x))
    }

    #[test]
    fn swap_exchanges_zero_and_infinity() {
        let f = CycField::new(4).unwrap();
        let zero = CycNum::zero(&f);
        let one = CycNum::one(&f);
        let s = Sl2Elem::new(zero.clone(), one.clone(), -&one, zero).unwrap();
        assert!(act_point(&s, &pt(&f, 0)).is_infinity());
        assert_eq!(act_point(&s, &ProjPoint::infinity(&f)), pt(&f, 0));
    }

    #[test]
    fn diagonal_fixes_only_poles() {
        let f = CycField::new(3).unwrap();
        let g = Sl2Elem::diag(CycNum::zeta_pow(&f, 1)).unwrap();
        assert_eq!(act_point(&g, &pt(&f, 0)), pt(&f, 0));
        assert_eq!(
            act_point(&g, &ProjPoint::infinity(&f)),
            ProjPoint::infinity(&f)
        );
        // fixed points of z ↦ ζ² z satisfy (ζ² - 1) z = 0
        for x in [1, -1, 2, 7] {
            assert_ne!(act_point(&g, &pt(&f, x)), pt(&f, x));
        }
    }

    #[test]
    fn action_is_a_group_action() {
        let g = catalog::binary_dihedral(3).unwrap();
        let p = pt(g.field(), 3);
        for x in 0..g.order() {
            for y in 0..g.order() {
                let lhs = act_point(g.element(g.mul(x, y)), &p);
                let rhs = act_point(g.element(x), &act_point(g.element(y), &p));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn automorphy_cocycle_law() {
        let g = catalog::binary_tetrahedral().unwrap();
        for n in [-2, 1, 3] {
            let j = AutomorphyFactor::new(n);
            for x in (0..g.order()).step_by(5) {
                for y in 0..g.order() {
                    let lhs = j.eval(g.element(g.mul(x, y)));
                    let hz = MoebiusMap::new(g.element(y).clone());
                    let rhs = hz.apply(&j.eval(g.element(x))).mul(&j.eval(g.element(y)));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn even_factor_ignores_sign() {
        let g = catalog::binary_octahedral().unwrap();
        let j = AutomorphyFactor::new(2);
        for e in g.elements() {
            assert_eq!(j.eval(e), j.eval(&e.neg()));
        }
        let minus = Sl2Elem::minus_identity(g.field());
        assert!(j.eval(&minus).is_one());
        assert_eq!(
            AutomorphyFactor::new(1).eval(&minus),
            RatFun::one(g.field()).neg()
        );
    }

    #[test]
    fn chart1_map_matches_inversion() {
        let g = catalog::binary_dihedral(2).unwrap();
        let f = g.field().clone();
        let r = RatFun::new(
            Poly::from_ints(&f, &[1, 2, 3]),
            Poly::from_ints(&f, &[5, 0, 1]),
        )
        .unwrap();
        for e in g.elements() {
            let m = MoebiusMap::new(e.clone());
            // r(g(1/w)) = r̂(g¹(w)) with r̂(w) = r(1/w)
            let lhs = m.apply(&r).invert_variable();
            let direct = m.in_chart1().apply(&r.invert_variable());
            assert_eq!(lhs, direct);
        }
    }
}
