//! Rational functions in one variable over a cyclotomic field, and
//! matrices of them.

use alloc::{format, vec::Vec};
use core::fmt;

use crate::cyclotomic::{CycNum, Field};
use crate::error::{Error, Result};
use crate::linalg::{CycMat, FieldScalar, Matrix, Scalar};
use crate::poly::{Laurent, Poly};

/// `num / den` with `den` monic and `gcd(num, den) = 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

pub type RatMat = Matrix<RatFun>;

impl RatFun {
    pub fn zero(field: &Field) -> Self {
        RatFun {
            num: Poly::zero(field),
            den: Poly::one(field),
        }
    }

    pub fn one(field: &Field) -> Self {
        RatFun {
            num: Poly::one(field),
            den: Poly::one(field),
        }
    }

    pub fn constant(c: CycNum) -> Self {
        let field = c.field().clone();
        RatFun {
            num: Poly::constant(c),
            den: Poly::one(&field),
        }
    }

    pub fn z(field: &Field) -> Self {
        Self::from_poly(Poly::z(field))
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.field());
        RatFun { num: p, den }
    }

    /// `c z^k` for any integer `k`.
    pub fn monomial(c: CycNum, k: i64) -> Self {
        let field = c.field().clone();
        if c.is_zero() {
            return Self::zero(&field);
        }
        if k >= 0 {
            Self::from_poly(Poly::monomial(c, k as usize))
        } else {
            RatFun {
                num: Poly::constant(c),
                den: Poly::monomial(CycNum::one(&field), (-k) as usize),
            }
        }
    }

    pub fn from_laurent(l: &Laurent) -> Self {
        let (p, low) = l.parts();
        if l.is_zero() {
            return Self::zero(l.field());
        }
        if low >= 0 {
            Self::from_poly(p.shift(low as usize))
        } else {
            RatFun {
                num: p.clone(),
                den: Poly::monomial(CycNum::one(l.field()), (-low) as usize),
            }
        }
    }

    /// Normalizes an arbitrary fraction.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero(num.field()));
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g)?, den.div_exact(&g)?)
        };
        Ok(Self::from_coprime(num, den))
    }

    fn from_coprime(num: Poly, den: Poly) -> Self {
        let lead = den.lead().expect("nonzero denominator").clone();
        if lead.is_one() {
            RatFun { num, den }
        } else {
            let inv = lead.inv().expect("nonzero");
            RatFun {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<CycNum> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    /// The value as a Laurent polynomial, if the denominator is a power of `z`.
    pub fn as_laurent(&self) -> Option<Laurent> {
        if !self.den.is_monomial() {
            return None;
        }
        let k = self.den.valuation().unwrap() as i64;
        Some(Laurent::from_poly(self.num.clone(), -k))
    }

    /// `(c, k)` if the value is the unit `c z^k` of the Laurent ring.
    pub fn laurent_unit(&self) -> Option<(CycNum, i64)> {
        if !self.den.is_monomial() || !self.num.is_monomial() {
            return None;
        }
        let k = self.num.valuation().unwrap() as i64 - self.den.valuation().unwrap() as i64;
        Some((self.num.lead().unwrap().clone(), k))
    }

    /// `deg den - deg num`, the order of vanishing at infinity.
    pub fn order_at_infinity(&self) -> Option<i64> {
        self.num
            .degree()
            .map(|d| self.den.degree().unwrap() as i64 - d as i64)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(self.num.add(&other.num));
        }
        let g = self.den.gcd(&other.den);
        if g.is_one() {
            let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            if num.is_zero() {
                return Self::zero(self.field());
            }
            return RatFun {
                num,
                den: self.den.mul(&other.den),
            };
        }
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = other.den.div_exact(&g).expect("gcd divides");
        let t = self.num.mul(&d1).add(&other.num.mul(&b1));
        if t.is_zero() {
            return Self::zero(self.field());
        }
        let g2 = t.gcd(&g);
        if g2.is_one() {
            return RatFun {
                num: t,
                den: b1.mul(&other.den),
            };
        }
        RatFun {
            num: t.div_exact(&g2).expect("gcd divides"),
            den: b1.mul(&other.den.div_exact(&g2).expect("gcd divides")),
        }
    }

    pub fn neg(&self) -> Self {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field());
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(self.num.mul(&other.num));
        }
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let a = if g1.is_one() {
            self.num.clone()
        } else {
            self.num.div_exact(&g1).expect("gcd divides")
        };
        let d = if g1.is_one() {
            other.den.clone()
        } else {
            other.den.div_exact(&g1).expect("gcd divides")
        };
        let c = if g2.is_one() {
            other.num.clone()
        } else {
            other.num.div_exact(&g2).expect("gcd divides")
        };
        let b = if g2.is_one() {
            self.den.clone()
        } else {
            self.den.div_exact(&g2).expect("gcd divides")
        };
        Self::from_coprime(a.mul(&c), b.mul(&d))
    }

    pub fn scale(&self, c: &CycNum) -> Self {
        if c.is_zero() {
            return Self::zero(self.field());
        }
        RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs() as u32;
        if base.den.is_one() {
            return Ok(Self::from_poly(base.num.pow(e)));
        }
        Ok(RatFun {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// Value at a point; errors at a pole.
    pub fn eval(&self, x: &CycNum) -> Result<CycNum> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(&self.num.eval(x) * &d.inv()?)
    }

    /// `f((a z + b) / (c z + d))` for an invertible matrix `[[a, b], [c, d]]`.
    pub fn compose_moebius(&self, a: &CycNum, b: &CycNum, c: &CycNum, d: &CycNum) -> Self {
        if self.num.is_constant() && self.den.is_one() {
            return self.clone();
        }
        if b.is_zero() && c.is_zero() {
            let lambda = a * &d.inv().expect("invertible map");
            return Self::from_coprime(
                self.num.scale_variable(&lambda),
                self.den.scale_variable(&lambda),
            );
        }
        let n = self.num.degree().unwrap_or(0);
        let m = self.den.degree().unwrap();
        if a.is_zero() && d.is_zero() {
            let kappa = b * &c.inv().expect("invertible map");
            let num = self.num.scale_variable(&kappa).reverse(n);
            let den = self.den.scale_variable(&kappa).reverse(m);
            return if m >= n {
                Self::from_coprime(num.shift(m - n), den)
            } else {
                Self::from_coprime(num, den.shift(n - m))
            };
        }
        let field = self.field();
        let top = n.max(m);
        let l1 = Poly::linear(b.clone(), a.clone());
        let l2 = Poly::linear(d.clone(), c.clone());
        let mut p1 = Vec::with_capacity(top + 1);
        let mut p2 = Vec::with_capacity(top + 1);
        p1.push(Poly::one(field));
        p2.push(Poly::one(field));
        for k in 1..=top {
            p1.push(p1[k - 1].mul(&l1));
            p2.push(p2[k - 1].mul(&l2));
        }
        let homogenize = |p: &Poly, deg: usize| {
            let mut acc = Poly::zero(field);
            for (k, coef) in p.coeffs().iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                acc = acc.add(&p1[k].mul(&p2[deg - k]).scale(coef));
            }
            acc
        };
        let num = homogenize(&self.num, n);
        let den = homogenize(&self.den, m);
        if m >= n {
            Self::from_coprime(num.mul(&p2[m - n]), den)
        } else {
            Self::from_coprime(num, den.mul(&p2[n - m]))
        }
    }

    /// `f(1/z)`.
    pub fn invert_variable(&self) -> Self {
        let zero = CycNum::zero(self.field());
        let one = CycNum::one(self.field());
        self.compose_moebius(&zero, &one, &one, &zero)
    }

    /// True if every pole of `self` lies where `linear` vanishes.
    pub fn poles_within(&self, linear: &Poly) -> bool {
        self.den.divides_power_of(linear)
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?})/({:?})", self.num, self.den)
        }
    }
}

impl Scalar for RatFun {
    fn zero_in(field: &Field) -> Self {
        RatFun::zero(field)
    }
    fn one_in(field: &Field) -> Self {
        RatFun::one(field)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn is_zero(&self) -> bool {
        RatFun::is_zero(self)
    }
}

impl FieldScalar for RatFun {
    fn recip(&self) -> Result<Self> {
        self.inv()
    }
}

/// Embeds a constant matrix.
pub fn ratmat_from_constant(m: &CycMat) -> RatMat {
    m.map(|c| RatFun::constant(c.clone()))
}

/// Embeds a Laurent matrix.
pub fn ratmat_from_laurent(m: &Matrix<Laurent>) -> RatMat {
    m.map(RatFun::from_laurent)
}

/// The matrix as a Laurent matrix, if every entry is one.
pub fn ratmat_as_laurent(m: &RatMat) -> Option<Matrix<Laurent>> {
    let entries = m
        .entries()
        .iter()
        .map(RatFun::as_laurent)
        .collect::<Option<Vec<_>>>()?;
    Matrix::from_vec(m.field(), m.rows(), m.cols(), entries).ok()
}

/// The matrix as a constant matrix, if every entry is constant.
pub fn ratmat_as_constant(m: &RatMat) -> Option<CycMat> {
    let entries = m
        .entries()
        .iter()
        .map(RatFun::as_constant)
        .collect::<Option<Vec<_>>>()?;
    Matrix::from_vec(m.field(), m.rows(), m.cols(), entries).ok()
}

/// Entrywise `M((a z + b) / (c z + d))`.
pub fn ratmat_compose(m: &RatMat, a: &CycNum, b: &CycNum, c: &CycNum, d: &CycNum) -> RatMat {
    m.map(|f| f.compose_moebius(a, b, c, d))
}

/// Entrywise `M(1/z)`.
pub fn ratmat_invert_variable(m: &RatMat) -> RatMat {
    m.map(RatFun::invert_variable)
}

/// Common monic denominator of all entries.
pub fn ratmat_common_denominator(m: &RatMat) -> Poly {
    let mut acc = Poly::one(m.field());
    for e in m.entries() {
        if e.den().is_one() {
            continue;
        }
        let g = acc.gcd(e.den());
        acc = acc.mul(&e.den().div_exact(&g).expect("gcd divides"));
    }
    acc
}

/// Determinant, computed fraction-free after clearing denominators.
pub fn ratmat_det(m: &RatMat) -> Result<RatFun> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "determinant of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let field = m.field();
    let mut rows = Vec::with_capacity(n);
    let mut scale = Poly::one(field);
    for i in 0..n {
        let row = m.select_rows(&[i]);
        let den = ratmat_common_denominator(&row);
        let cleared: Vec<Poly> = row
            .entries()
            .iter()
            .map(|e| {
                e.num()
                    .mul(&den.div_exact(e.den()).expect("common denominator"))
            })
            .collect();
        scale = scale.mul(&den);
        rows.push(cleared);
    }
    let det = Matrix::from_rows(field, rows)?.det_bareiss()?;
    RatFun::new(det, scale)
}

/// Inverse; small sizes use the adjugate.
pub fn ratmat_inverse(m: &RatMat) -> Result<RatMat> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(
            "inverse of a non-square matrix".into(),
        ));
    }
    let field = m.field();
    match m.rows() {
        0 => Ok(m.clone()),
        1 => Matrix::from_vec(
            field,
            1,
            1,
            alloc::vec![m.get(0, 0).inv().map_err(|_| Error::Singular)?],
        ),
        2 => {
            let det = ratmat_det(m)?;
            if det.is_zero() {
                return Err(Error::Singular);
            }
            let inv = det.inv()?;
            let e = |i, j| m.get(i, j).mul(&inv);
            Matrix::from_rows(
                field,
                alloc::vec![
                    alloc::vec![e(1, 1), e(0, 1).neg()],
                    alloc::vec![e(1, 0).neg(), e(0, 0)],
                ],
            )
        }
        _ => m.inverse_gauss(),
    }
}

/// Smallest and largest exponent over the entries of a Laurent matrix.
pub fn laurent_exponent_range(m: &Matrix<Laurent>) -> Option<(i64, i64)> {
    let lows = m.entries().iter().filter_map(Laurent::low);
    let highs = m.entries().iter().filter_map(Laurent::high);
    Some((lows.min()?, highs.max()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CycField;

    fn p(f: &Field, c: &[i64]) -> Poly {
        Poly::from_ints(f, c)
    }

    #[test]
    fn normalizes_common_factors() {
        let f = CycField::new(1).unwrap();
        // (z^2 - 1) / (2z - 2) = (z + 1) / 2
        let r = RatFun::new(p(&f, &[-1, 0, 1]), p(&f, &[-2, 2])).unwrap();
        assert!(r.is_polynomial());
        assert_eq!(
            r.num(),
            &Poly::from_coeffs(
                &f,
                alloc::vec![
                    CycNum::from_ratio(&f, 1.into(), 2.into()).unwrap(),
                    CycNum::from_ratio(&f, 1.into(), 2.into()).unwrap(),
                ]
            )
        );
    }

    #[test]
    fn addition_cancels() {
        let f = CycField::new(1).unwrap();
        let a = RatFun::new(p(&f, &[1]), p(&f, &[0, 1, 1])).unwrap(); // 1/(z(z+1))
        let b = RatFun::new(p(&f, &[-1]), p(&f, &[0, 1])).unwrap(); // -1/z
        let s = a.add(&b); // -z/(z(z+1)) = -1/(z+1)
        assert_eq!(s, RatFun::new(p(&f, &[-1]), p(&f, &[1, 1])).unwrap());
    }

    #[test]
    fn composition_matches_evaluation() {
        let f = CycField::new(4).unwrap();
        let i = CycNum::zeta_pow(&f, 1);
        let r = RatFun::new(p(&f, &[1, 2, 0, 1]), p(&f, &[3, 0, 1])).unwrap();
        let (a, b, c, d) = (
            CycNum::from_int(&f, 2),
            i.clone(),
            CycNum::from_int(&f, 1),
            CycNum::from_int(&f, 3),
        );
        let comp = r.compose_moebius(&a, &b, &c, &d);
        for x in [5, -7, 11] {
            let x = CycNum::from_int(&f, x);
            let gx = (&(&a * &x) + &b) * (&(&c * &x) + &d).inv().unwrap();
            assert_eq!(comp.eval(&x).unwrap(), r.eval(&gx).unwrap());
        }
    }

    #[test]
    fn antidiagonal_and_diagonal_fast_paths() {
        let f = CycField::new(3).unwrap();
        let w = CycNum::zeta_pow(&f, 1);
        let r = RatFun::new(p(&f, &[2, 1, 0, 4]), p(&f, &[0, 1, 1])).unwrap();
        let zero = CycNum::zero(&f);
        let x = CycNum::from_int(&f, 5);
        let anti = r.compose_moebius(&zero, &w, &(-&w.inv().unwrap()), &zero);
        let gx = -(&(&w * &w) * &x.inv().unwrap());
        assert_eq!(anti.eval(&x).unwrap(), r.eval(&gx).unwrap());
        let diag = r.compose_moebius(&w, &zero, &zero, &w.inv().unwrap());
        assert_eq!(diag.eval(&x).unwrap(), r.eval(&(&(&w * &w) * &x)).unwrap());
    }

    #[test]
    fn determinant_and_inverse() {
        let f = CycField::new(1).unwrap();
        let z = RatFun::z(&f);
        let one = RatFun::one(&f);
        let m = Matrix::from_rows(
            &f,
            alloc::vec![
                alloc::vec![z.clone(), one.clone(), RatFun::zero(&f)],
                alloc::vec![RatFun::zero(&f), z.inv().unwrap(), one.clone()],
                alloc::vec![one.clone(), RatFun::zero(&f), z.clone()],
            ],
        )
        .unwrap();
        let det = ratmat_det(&m).unwrap();
        assert_eq!(det, RatFun::from_poly(p(&f, &[1, 1])));
        let inv = ratmat_inverse(&m).unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
    }
}
