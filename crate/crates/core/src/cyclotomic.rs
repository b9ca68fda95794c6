//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^{φ(N)-1}` as integer
//! numerators over one positive common denominator. Every constructor and
//! operation returns the fully reduced representative, so equality is a plain
//! coefficient comparison.

use alloc::{format, sync::Arc, vec, vec::Vec};
use core::{
    cmp::Ordering,
    fmt,
    ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign},
};

use dashu_int::{ops::Gcd, IBig, Sign};

use crate::error::{Error, Result};

/// Shared handle to a cyclotomic field.
pub type Field = Arc<CycField>;

/// Largest modulus accepted by [`CycField::new`].
pub const MAX_MODULUS: u32 = 5040;

/// The field `Q(ζ_N)` together with its reduction tables.
#[derive(Debug)]
pub struct CycField {
    modulus: u32,
    phi: usize,
    /// Coefficients of the `N`-th cyclotomic polynomial, lowest degree first.
    min_poly: Vec<i64>,
    /// `powers[e]` is `ζ^e` in the power basis, for `0 <= e < N`.
    powers: Vec<Vec<i64>>,
    /// Residues `1 <= k < N` coprime to `N` (the Galois group).
    units: Vec<u32>,
}

impl PartialEq for CycField {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus
    }
}

impl Eq for CycField {}

fn gcd_u32(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm_u32(a: u32, b: u32) -> u32 {
    a / gcd_u32(a, b) * b
}

fn mobius(mut n: u32) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

fn int_poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic integer polynomial.
fn int_poly_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = num.len() - dd;
    let mut q = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd];
        q[k] = c;
        if c != 0 {
            for (l, d) in den.iter().enumerate() {
                rem[k + l] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// Cyclotomic polynomial via `Φ_N = Π_{d | N} (x^d - 1)^{μ(N/d)}`.
fn cyclotomic_poly(n: u32) -> Vec<i64> {
    let mut numer = vec![1i64];
    let mut denom = vec![1i64];
    for d in 1..=n {
        if !n.is_multiple_of(d) {
            continue;
        }
        let mut factor = vec![0i64; d as usize + 1];
        factor[0] = -1;
        factor[d as usize] = 1;
        match mobius(n / d) {
            1 => numer = int_poly_mul(&numer, &factor),
            -1 => denom = int_poly_mul(&denom, &factor),
            _ => {}
        }
    }
    // Normalise x^d - 1 signs: both products are monic up to sign.
    let sign = |p: &[i64]| if p[p.len() - 1] < 0 { -1 } else { 1 };
    let sn = sign(&numer);
    let sd = sign(&denom);
    let numer: Vec<i64> = numer.iter().map(|c| c * sn).collect();
    let denom: Vec<i64> = denom.iter().map(|c| c * sd).collect();
    int_poly_div_monic(&numer, &denom)
}

impl CycField {
    /// Builds `Q(ζ_N)`.
    pub fn new(modulus: u32) -> Result<Field> {
        if modulus == 0 || modulus > MAX_MODULUS {
            return Err(Error::InvalidParameter(format!(
                "cyclotomic modulus must lie in 1..={MAX_MODULUS}, got {modulus}"
            )));
        }
        let min_poly = cyclotomic_poly(modulus);
        let phi = min_poly.len() - 1;
        let n = modulus as usize;
        let mut powers = Vec::with_capacity(n);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by x and reduce with the monic minimal polynomial
            let top = cur[phi - 1];
            for l in (1..phi).rev() {
                cur[l] = cur[l - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for l in 0..phi {
                    cur[l] -= top * min_poly[l];
                }
            }
        }
        let units = (1..modulus.max(2))
            .filter(|&k| gcd_u32(k, modulus) == 1)
            .collect::<Vec<_>>();
        Ok(Arc::new(CycField {
            modulus,
            phi,
            min_poly,
            powers,
            units,
        }))
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Degree `φ(N)` of the field over `Q`.
    pub fn degree(&self) -> usize {
        self.phi
    }

    /// Coefficients of the `N`-th cyclotomic polynomial.
    pub fn min_poly(&self) -> &[i64] {
        &self.min_poly
    }
}

/// An exact element of a cyclotomic field.
#[derive(Clone)]
pub struct CycNum {
    field: Field,
    num: Vec<IBig>,
    den: IBig,
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        self.field.modulus == other.field.modulus && self.den == other.den && self.num == other.num
    }
}

impl Eq for CycNum {}

impl PartialOrd for CycNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order on (numerators, denominator); deterministic, not numeric.
impl Ord for CycNum {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .modulus
            .cmp(&other.field.modulus)
            .then_with(|| self.num.cmp(&other.num))
            .then_with(|| self.den.cmp(&other.den))
    }
}

fn canonicalize(num: &mut [IBig], den: &mut IBig) {
    if num.iter().all(|c| c.is_zero()) {
        *den = IBig::ONE;
        return;
    }
    if den.sign() == Sign::Negative {
        for c in num.iter_mut() {
            *c = -core::mem::take(c);
        }
        *den = -core::mem::take(den);
    }
    if den.is_one() {
        return;
    }
    let mut g = IBig::from(den.clone().gcd(&num[0]));
    for c in num.iter().skip(1) {
        if g.is_one() {
            return;
        }
        if !c.is_zero() {
            g = IBig::from(g.gcd(c));
        }
    }
    if !g.is_one() {
        for c in num.iter_mut() {
            *c = &*c / &g;
        }
        *den = &*den / &g;
    }
}

impl CycNum {
    fn from_parts(field: &Field, mut num: Vec<IBig>, mut den: IBig) -> Self {
        canonicalize(&mut num, &mut den);
        CycNum {
            field: field.clone(),
            num,
            den,
        }
    }

    pub fn zero(field: &Field) -> Self {
        CycNum {
            field: field.clone(),
            num: vec![IBig::ZERO; field.phi],
            den: IBig::ONE,
        }
    }

    pub fn one(field: &Field) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: &Field, value: i64) -> Self {
        let mut num = vec![IBig::ZERO; field.phi];
        num[0] = IBig::from(value);
        CycNum {
            field: field.clone(),
            num,
            den: IBig::ONE,
        }
    }

    pub fn from_ratio(field: &Field, num: IBig, den: IBig) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut coeffs = vec![IBig::ZERO; field.phi];
        coeffs[0] = num;
        Ok(Self::from_parts(field, coeffs, den))
    }

    /// Builds an element from power-basis rationals `(num_i, den_i)`.
    pub fn from_rational_coeffs(field: &Field, coeffs: &[(IBig, IBig)]) -> Result<Self> {
        if coeffs.len() != field.phi {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coefficients for modulus {}, got {}",
                field.phi,
                field.modulus,
                coeffs.len()
            )));
        }
        let mut den = IBig::ONE;
        for (_, d) in coeffs {
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            let g = IBig::from(den.clone().gcd(d));
            den = &den / &g * d;
        }
        let num = coeffs.iter().map(|(n, d)| n * (&den / d)).collect();
        Ok(Self::from_parts(field, num, den))
    }

    /// `ζ_N^k` for any integer `k`.
    pub fn zeta_pow(field: &Field, k: i64) -> Self {
        let n = field.modulus as i64;
        let e = k.rem_euclid(n) as usize;
        CycNum {
            field: field.clone(),
            num: field.powers[e].iter().map(|&c| IBig::from(c)).collect(),
            den: IBig::ONE,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn modulus(&self) -> u32 {
        self.field.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|c| c.is_zero())
    }

    /// Returns the value as a rational `(num, den)` if it lies in `Q`.
    pub fn as_rational(&self) -> Option<(IBig, IBig)> {
        if self.num[1..].iter().all(|c| c.is_zero()) {
            Some((self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Power-basis coefficients as reduced rationals.
    pub fn rational_coeffs(&self) -> Vec<(IBig, IBig)> {
        self.num
            .iter()
            .map(|c| {
                if c.is_zero() {
                    return (IBig::ZERO, IBig::ONE);
                }
                let g = IBig::from(c.clone().gcd(&self.den));
                (c / &g, &self.den / &g)
            })
            .collect()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field.modulus != other.field.modulus {
            Err(Error::ModulusMismatch(
                self.field.modulus,
                other.field.modulus,
            ))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Self, negate_other: bool) -> Self {
        let field = &self.field;
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate_other { -other } else { other.clone() };
        }
        if self.den == other.den {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| if negate_other { a - b } else { a + b })
                .collect();
            return Self::from_parts(field, num, self.den.clone());
        }
        let g = IBig::from(self.den.clone().gcd(&other.den));
        let fa = &other.den / &g;
        let fb = &self.den / &g;
        let den = &self.den * &fa;
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| {
                if negate_other {
                    a * &fa - b * &fb
                } else {
                    a * &fa + b * &fb
                }
            })
            .collect();
        Self::from_parts(field, num, den)
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let field = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(field);
        }
        let phi = field.phi;
        if phi == 1 {
            return Self::from_parts(
                field,
                vec![&self.num[0] * &other.num[0]],
                &self.den * &other.den,
            );
        }
        let mut prod = vec![IBig::ZERO; 2 * phi - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        reduce_high(field, &mut prod);
        prod.truncate(phi);
        Self::from_parts(field, prod, &self.den * &other.den)
    }

    /// Scales by an integer.
    pub fn scale_int(&self, k: i64) -> Self {
        let kk = IBig::from(k);
        Self::from_parts(
            &self.field,
            self.num.iter().map(|c| c * &kk).collect(),
            self.den.clone(),
        )
    }

    /// Applies the Galois automorphism `ζ ↦ ζ^k` (`k` coprime to `N`).
    pub fn galois(&self, k: u32) -> Self {
        let field = &self.field;
        let n = field.modulus as u64;
        let mut out = vec![IBig::ZERO; field.phi];
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = ((j as u64 * k as u64) % n) as usize;
            for (o, &p) in out.iter_mut().zip(&field.powers[e]) {
                match p {
                    0 => {}
                    1 => *o += c,
                    -1 => *o -= c,
                    _ => *o += c * IBig::from(p),
                }
            }
        }
        Self::from_parts(field, out, self.den.clone())
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let n = self.field.modulus;
        if n <= 2 {
            return self.clone();
        }
        self.galois(n - 1)
    }

    /// Multiplicative inverse via the product of the non-trivial Galois conjugates.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = &self.field;
        let mut cofactor = Self::one(field);
        for &k in &field.units {
            if k != 1 {
                cofactor = cofactor.mul_unchecked(&self.galois(k));
            }
        }
        let norm = self.mul_unchecked(&cofactor);
        let (nn, nd) = norm
            .as_rational()
            .expect("field norm of a cyclotomic element is rational");
        // cofactor / (nn / nd) = cofactor * nd / nn
        let num = cofactor.num.iter().map(|c| c * &nd).collect();
        Ok(Self::from_parts(field, num, &cofactor.den * &nn))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Re-expresses the element in a field whose modulus is a multiple of ours.
    pub fn lift_to(&self, target: &Field) -> Result<Self> {
        if !target.modulus.is_multiple_of(self.field.modulus) {
            return Err(Error::ModulusMismatch(self.field.modulus, target.modulus));
        }
        let step = (target.modulus / self.field.modulus) as usize;
        let mut out = vec![IBig::ZERO; target.phi];
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (j * step) % target.modulus as usize;
            for (o, &p) in out.iter_mut().zip(&target.powers[e]) {
                if p != 0 {
                    *o += c * IBig::from(p);
                }
            }
        }
        Ok(Self::from_parts(target, out, self.den.clone()))
    }

    /// Complex value under `ζ_N ↦ exp(2πi/N)`; for display and diagnostics only.
    pub fn embed(&self) -> (f64, f64) {
        let n = self.field.modulus as f64;
        let den = self.den.to_f64().value();
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = c.to_f64().value() / den;
            let angle = 2.0 * core::f64::consts::PI * j as f64 / n;
            re += v * libm::cos(angle);
            im += v * libm::sin(angle);
        }
        (re, im)
    }
}

/// Folds coefficients of `x^k`, `k >= φ`, back using the reduction table.
fn reduce_high(field: &CycField, prod: &mut [IBig]) {
    let phi = field.phi;
    let n = field.modulus as usize;
    for k in phi..prod.len() {
        if prod[k].is_zero() {
            continue;
        }
        let c = core::mem::take(&mut prod[k]);
        for (l, &p) in field.powers[k % n].iter().enumerate() {
            match p {
                0 => {}
                1 => prod[l] += &c,
                -1 => prod[l] -= &c,
                _ => prod[l] += &c * IBig::from(p),
            }
        }
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        let wrap = !self.den.is_one();
        if wrap {
            f.write_str("(")?;
        }
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(if c.sign() == Sign::Negative {
                    " - "
                } else {
                    " + "
                })?;
            } else if c.sign() == Sign::Negative {
                f.write_str("-")?;
            }
            first = false;
            let mag = if c.sign() == Sign::Negative {
                -c
            } else {
                c.clone()
            };
            match j {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if j == 1 {
                        write!(f, "z{}", self.field.modulus)?;
                    } else {
                        write!(f, "z{}^{j}", self.field.modulus)?;
                    }
                }
            }
        }
        if wrap {
            write!(f, ")/{}", self.den)?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a CycNum> for &'a CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &'a CycNum) -> CycNum {
                assert_eq!(
                    self.field.modulus, rhs.field.modulus,
                    "cyclotomic modulus mismatch"
                );
                $body(self, rhs)
            }
        }
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: CycNum) -> CycNum {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &'a CycNum) -> CycNum {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &CycNum, b: &CycNum| a.add_unchecked(b, false));
forward_binop!(Sub, sub, |a: &CycNum, b: &CycNum| a.add_unchecked(b, true));
forward_binop!(Mul, mul, |a: &CycNum, b: &CycNum| a.mul_unchecked(b));

impl AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, rhs: &CycNum) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&CycNum> for CycNum {
    fn sub_assign(&mut self, rhs: &CycNum) {
        *self = &*self - rhs;
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(mut self) -> CycNum {
        for c in self.num.iter_mut() {
            *c = -core::mem::take(c);
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(n: u32) -> Field {
        CycField::new(n).unwrap()
    }

    fn close(a: (f64, f64), b: (f64, f64), tol: f64) -> bool {
        (a.0 - b.0).abs() <= tol && (a.1 - b.1).abs() <= tol
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(field(1).min_poly(), &[-1, 1]);
        assert_eq!(field(4).min_poly(), &[1, 0, 1]);
        assert_eq!(field(12).min_poly(), &[1, 0, -1, 0, 1]);
        assert_eq!(field(20).degree(), 8);
        assert_eq!(field(15).min_poly(), &[1, -1, 0, 1, -1, 1, 0, -1, 1]);
    }

    #[test]
    fn zeta4_squared_is_minus_one() {
        let f = field(4);
        let z = CycNum::zeta_pow(&f, 1);
        assert_eq!(&z * &z, CycNum::from_int(&f, -1));
    }

    #[test]
    fn one_plus_zeta3_times_conjugate() {
        let f = field(3);
        let one = CycNum::one(&f);
        let a = &one + &CycNum::zeta_pow(&f, 1);
        let b = &one + &CycNum::zeta_pow(&f, 2);
        let p = &a * &b;
        assert_eq!(p, one);
        // independent cross-check through the complex embedding
        let (ar, ai) = a.embed();
        let (br, bi) = b.embed();
        assert!(close(
            (ar * br - ai * bi, ar * bi + ai * br),
            (1.0, 0.0),
            1e-12
        ));
    }

    #[test]
    fn inverse_of_zeta8() {
        let f = field(8);
        assert_eq!(
            CycNum::zeta_pow(&f, 1).inv().unwrap(),
            CycNum::zeta_pow(&f, 7)
        );
    }

    #[test]
    fn inverse_of_zero_fails() {
        let f = field(5);
        assert_eq!(CycNum::zero(&f).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn modulus_mismatch_is_reported() {
        let a = CycNum::one(&field(3));
        let b = CycNum::one(&field(4));
        assert_eq!(a.try_add(&b), Err(Error::ModulusMismatch(3, 4)));
        assert_eq!(a.try_mul(&b), Err(Error::ModulusMismatch(3, 4)));
    }

    #[test]
    fn lift_preserves_value() {
        let f3 = field(3);
        let f12 = field(12);
        let a = &CycNum::zeta_pow(&f3, 1) + &CycNum::from_int(&f3, 2);
        let b = a.lift_to(&f12).unwrap();
        assert!(close(a.embed(), b.embed(), 1e-12));
        assert_eq!(b, &CycNum::zeta_pow(&f12, 4) + &CycNum::from_int(&f12, 2));
    }

    #[test]
    fn rational_coefficients_round_trip() {
        let f = field(5);
        let coeffs = vec![
            (IBig::from(1), IBig::from(2)),
            (IBig::from(-3), IBig::from(4)),
            (IBig::ZERO, IBig::ONE),
            (IBig::from(5), IBig::from(6)),
        ];
        let a = CycNum::from_rational_coeffs(&f, &coeffs).unwrap();
        assert_eq!(a.rational_coeffs(), coeffs);
    }
}
