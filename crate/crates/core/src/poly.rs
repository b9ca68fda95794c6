//! Dense univariate polynomials and Laurent polynomials over a cyclotomic field.

use alloc::{vec, vec::Vec};
use core::fmt;

use crate::cyclotomic::{CycNum, Field};
use crate::error::{Error, Result};

/// A polynomial in `z`, lowest degree first, without trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<CycNum>,
}

impl Poly {
    pub fn zero(field: &Field) -> Self {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(CycNum::one(field))
    }

    pub fn constant(c: CycNum) -> Self {
        let field = c.field().clone();
        Self::from_coeffs(&field, vec![c])
    }

    /// `z`.
    pub fn z(field: &Field) -> Self {
        Self::monomial(CycNum::one(field), 1)
    }

    pub fn monomial(c: CycNum, deg: usize) -> Self {
        let field = c.field().clone();
        if c.is_zero() {
            return Self::zero(&field);
        }
        let mut coeffs = vec![CycNum::zero(&field); deg + 1];
        coeffs[deg] = c;
        Poly { field, coeffs }
    }

    /// `a + b z`.
    pub fn linear(a: CycNum, b: CycNum) -> Self {
        let field = a.field().clone();
        Self::from_coeffs(&field, vec![a, b])
    }

    pub fn from_coeffs(field: &Field, mut coeffs: Vec<CycNum>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            field,
            coeffs.iter().map(|&c| CycNum::from_int(field, c)).collect(),
        )
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[CycNum] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<CycNum> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// True when the polynomial is `c z^k` for some `c != 0`.
    pub fn is_monomial(&self) -> bool {
        match (self.valuation(), self.degree()) {
            (Some(v), Some(d)) => v == d,
            _ => false,
        }
    }

    pub fn coeff(&self, i: usize) -> CycNum {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| CycNum::zero(&self.field))
    }

    pub fn lead(&self) -> Option<&CycNum> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::from_coeffs(&self.field, out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a - b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => -b,
                (None, None) => unreachable!(),
            });
        }
        Self::from_coeffs(&self.field, out)
    }

    pub fn neg(&self) -> Self {
        Poly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field);
        }
        if self.coeffs.len() == 1 {
            return other.scale(&self.coeffs[0]);
        }
        if other.coeffs.len() == 1 {
            return self.scale(&other.coeffs[0]);
        }
        let mut out = vec![CycNum::zero(&self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        Self::from_coeffs(&self.field, out)
    }

    pub fn scale(&self, c: &CycNum) -> Self {
        if c.is_zero() {
            return Self::zero(&self.field);
        }
        if c.is_one() {
            return self.clone();
        }
        Poly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![CycNum::zero(&self.field); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly {
            field: self.field.clone(),
            coeffs,
        }
    }

    /// Divides by `z^k`; the low coefficients must vanish.
    pub fn unshift(&self, k: usize) -> Self {
        debug_assert!(self.coeffs.iter().take(k).all(|c| c.is_zero()));
        Self::from_coeffs(&self.field, self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, x: &CycNum) -> CycNum {
        let mut acc = CycNum::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Coefficients reversed relative to degree `n`: `z^n p(1/z)`.
    pub fn reverse(&self, n: usize) -> Self {
        debug_assert!(self.degree().is_none_or(|d| d <= n));
        let mut coeffs = vec![CycNum::zero(&self.field); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[n - i] = c.clone();
        }
        Self::from_coeffs(&self.field, coeffs)
    }

    /// `p(λ z)`.
    pub fn scale_variable(&self, lambda: &CycNum) -> Self {
        let mut pw = CycNum::one(&self.field);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c * &pw);
            pw = &pw * lambda;
        }
        Self::from_coeffs(&self.field, coeffs)
    }

    pub fn make_monic(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.inv().expect("leading coefficient is nonzero")),
        }
    }

    /// Euclidean division `self = q * d + r` with `deg r < deg d`.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let Some(sd) = self.degree() else {
            return Ok((Self::zero(&self.field), Self::zero(&self.field)));
        };
        if sd < dd {
            return Ok((Self::zero(&self.field), self.clone()));
        }
        let lead_inv = d.coeffs[dd].inv()?;
        let mut rem = self.coeffs.clone();
        let mut q = vec![CycNum::zero(&self.field); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (l, dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    rem[k + l] -= &(&c * dc);
                }
            }
            q[k] = c;
        }
        rem.truncate(dd);
        Ok((
            Self::from_coeffs(&self.field, q),
            Self::from_coeffs(&self.field, rem),
        ))
    }

    /// Exact quotient; errors if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        if d.is_monomial() {
            let k = d.valuation().unwrap();
            if self.valuation().is_some_and(|v| v < k) {
                return Err(Error::InvalidParameter(
                    "inexact polynomial division".into(),
                ));
            }
            let inv = d.coeffs[k].inv()?;
            return Ok(self.unshift(k).scale(&inv));
        }
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::InvalidParameter(
                "inexact polynomial division".into(),
            ));
        }
        Ok(q)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.make_monic();
        }
        if other.is_zero() {
            return self.make_monic();
        }
        if self.is_constant() || other.is_constant() {
            return Self::one(&self.field);
        }
        // z-power parts split off cheaply; monomials are the common case.
        let vs = self.valuation().unwrap();
        let vo = other.valuation().unwrap();
        let common_shift = vs.min(vo);
        if self.is_monomial() || other.is_monomial() {
            return Self::one(&self.field).shift(common_shift);
        }
        let mut a = self.unshift(vs).make_monic();
        let mut b = other.unshift(vo).make_monic();
        if a.degree() < b.degree() {
            core::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r.make_monic();
        }
        a.make_monic().shift(common_shift)
    }

    /// True if `self = c · ℓ^k` for some constant `c != 0` and `k >= 0`.
    pub fn divides_power_of(&self, linear: &Self) -> bool {
        if self.is_zero() {
            return false;
        }
        if linear.is_constant() {
            return self.is_constant();
        }
        let mut cur = self.clone();
        while !cur.is_constant() {
            match cur.divrem(linear) {
                Ok((q, r)) if r.is_zero() => cur = q,
                _ => return false,
            }
        }
        true
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z")?,
                _ => write!(f, "{c}*z^{i}")?,
            }
        }
        Ok(())
    }
}

/// `z^low · poly(z)` with `poly(0) != 0` (or zero).
#[derive(Clone, PartialEq, Eq)]
pub struct Laurent {
    low: i64,
    poly: Poly,
}

impl Laurent {
    pub fn zero(field: &Field) -> Self {
        Laurent {
            low: 0,
            poly: Poly::zero(field),
        }
    }

    pub fn one(field: &Field) -> Self {
        Self::monomial(CycNum::one(field), 0)
    }

    pub fn monomial(c: CycNum, k: i64) -> Self {
        let field = c.field().clone();
        if c.is_zero() {
            return Self::zero(&field);
        }
        Laurent {
            low: k,
            poly: Poly::constant(c),
        }
    }

    /// `z^shift · p`.
    pub fn from_poly(p: Poly, shift: i64) -> Self {
        match p.valuation() {
            None => Laurent { low: 0, poly: p },
            Some(v) => Laurent {
                low: shift + v as i64,
                poly: p.unshift(v),
            },
        }
    }

    /// Builds from coefficients of `z^low, z^{low+1}, …`.
    pub fn from_coeffs(field: &Field, low: i64, coeffs: Vec<CycNum>) -> Self {
        Self::from_poly(Poly::from_coeffs(field, coeffs), low)
    }

    pub fn field(&self) -> &Field {
        self.poly.field()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn low(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn high(&self) -> Option<i64> {
        self.poly.degree().map(|d| self.low + d as i64)
    }

    pub fn coeff(&self, e: i64) -> CycNum {
        if self.is_zero() || e < self.low {
            return CycNum::zero(self.field());
        }
        self.poly.coeff((e - self.low) as usize)
    }

    /// `(c, k)` if the value is `c z^k`.
    pub fn as_monomial(&self) -> Option<(CycNum, i64)> {
        (self.poly.degree() == Some(0)).then(|| (self.poly.coeff(0), self.low))
    }

    /// The polynomial `z^{-low} · self` together with `low`.
    pub fn parts(&self) -> (&Poly, i64) {
        (&self.poly, self.low)
    }

    /// Polynomial `z^{-shift} self`, requires `shift <= low`.
    pub fn to_poly_shifted(&self, shift: i64) -> Poly {
        if self.is_zero() {
            return self.poly.clone();
        }
        debug_assert!(shift <= self.low);
        self.poly.shift((self.low - shift) as usize)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let low = self.low.min(other.low);
        let a = self.to_poly_shifted(low);
        let b = other.to_poly_shifted(low);
        Self::from_poly(a.add(&b), low)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Laurent {
            low: self.low,
            poly: self.poly.neg(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field());
        }
        Laurent {
            low: self.low + other.low,
            poly: self.poly.mul(&other.poly),
        }
    }

    pub fn scale(&self, c: &CycNum) -> Self {
        if c.is_zero() {
            return Self::zero(self.field());
        }
        Laurent {
            low: self.low,
            poly: self.poly.scale(c),
        }
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Laurent {
            low: self.low + k,
            poly: self.poly.clone(),
        }
    }

    /// `f(1/z)`.
    pub fn invert_variable(&self) -> Self {
        match self.poly.degree() {
            None => self.clone(),
            Some(d) => Laurent {
                low: -self.low - d as i64,
                poly: self.poly.reverse(d),
            },
        }
    }

    /// Exact division, valid when the quotient is again a Laurent polynomial.
    pub fn div_exact(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let q = self.poly.div_exact(&other.poly)?;
        Ok(Self::from_poly(q, self.low - other.low))
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z^{}·({:?})", self.low, self.poly)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CycField;

    #[test]
    fn gcd_is_monic_and_divides() {
        let f = CycField::new(3).unwrap();
        // (z - 1)(z + 2) and (z - 1)(z - 3)
        let a = Poly::from_ints(&f, &[-2, 1, 1]);
        let b = Poly::from_ints(&f, &[3, -4, 1]);
        let g = a.gcd(&b);
        assert_eq!(g, Poly::from_ints(&f, &[-1, 1]));
        assert!(a.divrem(&g).unwrap().1.is_zero());
        assert!(b.divrem(&g).unwrap().1.is_zero());
    }

    #[test]
    fn gcd_with_shared_power_of_z() {
        let f = CycField::new(4).unwrap();
        let a = Poly::from_ints(&f, &[0, 0, 2, 2]); // 2z^2 (1 + z)
        let b = Poly::from_ints(&f, &[0, 3, 3]); // 3z (1 + z)
        assert_eq!(a.gcd(&b), Poly::from_ints(&f, &[0, 1, 1]));
    }

    #[test]
    fn laurent_inversion_of_variable() {
        let f = CycField::new(1).unwrap();
        let p = Laurent::from_coeffs(&f, -1, Poly::from_ints(&f, &[1, 0, 3]).into_coeffs());
        let q = p.invert_variable();
        assert_eq!(q.low(), Some(-1));
        assert_eq!(q.high(), Some(1));
        assert_eq!(q.coeff(-1), CycNum::from_int(&f, 3));
        assert_eq!(q.invert_variable(), p);
    }

    #[test]
    fn power_of_linear_detection() {
        let f = CycField::new(1).unwrap();
        let l = Poly::from_ints(&f, &[1, 2]);
        assert!(l
            .pow(3)
            .scale(&CycNum::from_int(&f, 5))
            .divides_power_of(&l));
        assert!(!l.mul(&Poly::from_ints(&f, &[1, 1])).divides_power_of(&l));
        assert!(Poly::one(&f).divides_power_of(&l));
    }
}
