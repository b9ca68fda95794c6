//! Vector bundles on the projective line as transition cocycles, their
//! Birkhoff factorization, global sections and Harder–Narasimhan filtration.
//!
//! A rank `r` bundle is glued from `ℂ[z]^r` on chart 0 and `ℂ[w]^r` on
//! chart 1 (`w = 1/z`) by `s0 = T(z) s1` over `ℂ*`.

use alloc::{format, vec::Vec};

use crate::cyclotomic::{CycNum, Field};
use crate::error::{Error, Result};
use crate::linalg::{CycMat, Matrix};
use crate::poly::{Laurent, Poly};
use crate::ratfun::{laurent_exponent_range, ratmat_as_laurent, ratmat_from_laurent, RatMat};

pub type LaurentMat = Matrix<Laurent>;

/// An invertible Laurent-polynomial transition matrix.
#[derive(Clone, Debug)]
pub struct TransitionCocycle {
    t: LaurentMat,
    det: (CycNum, i64),
}

impl TransitionCocycle {
    pub fn new(t: &RatMat) -> Result<Self> {
        if !t.is_square() || t.rows() == 0 {
            return Err(Error::DimensionMismatch(
                "transition must be square of positive rank".into(),
            ));
        }
        let laurent = ratmat_as_laurent(t).ok_or_else(|| {
            Error::NotBundleCocycle("entries must be Laurent polynomials in z".into())
        })?;
        Self::from_laurent(&laurent)
    }

    pub fn from_laurent(t: &LaurentMat) -> Result<Self> {
        if !t.is_square() || t.rows() == 0 {
            return Err(Error::DimensionMismatch(
                "transition must be square of positive rank".into(),
            ));
        }
        let det = laurent_det(t)?;
        if det.is_zero() {
            return Err(Error::Singular);
        }
        let det = det
            .as_monomial()
            .ok_or_else(|| Error::NotBundleCocycle(format!("det T = {det:?}")))?;
        Ok(TransitionCocycle { t: t.clone(), det })
    }

    /// `T^{-1} = adj(T) / det T`, using that `det T` is a monomial.
    pub fn inverse(&self) -> Result<LaurentMat> {
        let field = self.field();
        let r = self.rank();
        let (lo, _) = laurent_exponent_range(&self.t).ok_or(Error::Singular)?;
        let p: Matrix<Poly> = self.t.map(|x| x.to_poly_shifted(lo));
        // det P = c z^{k - r lo};  T^{-1} = z^{-lo} adj(P) / det P
        let (c, k) = &self.det;
        let c_inv = c.inv()?;
        let shift = -lo - (k - r as i64 * lo);
        let mut out = Matrix::zeros(field, r, r);
        for i in 0..r {
            for j in 0..r {
                let rows: Vec<usize> = (0..r).filter(|&x| x != j).collect();
                let cols: Vec<usize> = (0..r).filter(|&x| x != i).collect();
                let minor = p.select_rows(&rows).select_columns(&cols).det_bareiss()?;
                let minor = if (i + j) % 2 == 1 { minor.neg() } else { minor };
                out.set(i, j, Laurent::from_poly(minor.scale(&c_inv), shift));
            }
        }
        Ok(out)
    }

    /// The bundle `⊕ 𝒪(d_i)`.
    pub fn split(field: &Field, degrees: &[i64]) -> Self {
        let diag = degrees
            .iter()
            .map(|&d| Laurent::monomial(CycNum::one(field), d))
            .collect();
        let det = (CycNum::one(field), degrees.iter().sum());
        TransitionCocycle {
            t: Matrix::diagonal(field, diag),
            det,
        }
    }

    pub fn field(&self) -> &Field {
        self.t.field()
    }

    pub fn rank(&self) -> usize {
        self.t.rows()
    }

    pub fn laurent(&self) -> &LaurentMat {
        &self.t
    }

    pub fn matrix(&self) -> RatMat {
        ratmat_from_laurent(&self.t)
    }

    /// `det T = c z^k`.
    pub fn det_unit(&self) -> &(CycNum, i64) {
        &self.det
    }

    /// Total degree `k`.
    pub fn degree(&self) -> i64 {
        self.det.1
    }
}

/// `T = U₊(z) · diag(z^{d_i}) · U₋(1/z)` with `U₊` unimodular over `ℂ[z]`
/// and `U₋` unimodular over `ℂ[1/z]`, degrees nonincreasing.
#[derive(Clone, Debug)]
pub struct BirkhoffFactorization {
    pub u_plus: LaurentMat,
    pub u_plus_inv: LaurentMat,
    pub degrees: Vec<i64>,
    pub u_minus: LaurentMat,
}

impl BirkhoffFactorization {
    pub fn diagonal(&self) -> LaurentMat {
        let field = self.u_plus.field();
        Matrix::diagonal(
            field,
            self.degrees
                .iter()
                .map(|&d| Laurent::monomial(CycNum::one(field), d))
                .collect(),
        )
    }

    pub fn product(&self) -> Result<LaurentMat> {
        self.u_plus.mul(&self.diagonal())?.mul(&self.u_minus)
    }

    /// Exact re-multiplication and shape checks.
    pub fn verify(&self, t: &LaurentMat) -> bool {
        let shapes = is_polynomial_in(&self.u_plus, 1)
            && is_polynomial_in(&self.u_plus_inv, 1)
            && is_polynomial_in(&self.u_minus, -1)
            && self.degrees.windows(2).all(|w| w[0] >= w[1]);
        let inverse = self
            .u_plus
            .mul(&self.u_plus_inv)
            .map(|p| p.is_identity())
            .unwrap_or(false);
        let unimodular_minus = constant_term_det(&self.u_minus).is_some_and(|d| !d.is_zero());
        shapes && inverse && unimodular_minus && self.product().is_ok_and(|p| p == *t)
    }
}

/// True if every entry only has exponents of the given sign (`1`: `z^k`,
/// `k >= 0`; `-1`: `k <= 0`).
pub fn is_polynomial_in(m: &LaurentMat, sign: i64) -> bool {
    m.entries().iter().all(|e| {
        e.is_zero()
            || if sign > 0 {
                e.low().unwrap() >= 0
            } else {
                e.high().unwrap() <= 0
            }
    })
}

fn constant_term_det(m: &LaurentMat) -> Option<CycNum> {
    let c: CycMat = m.map(|e| e.coeff(0));
    c.det_gauss().ok()
}

fn poly_row_degree(row: &[Poly]) -> Result<usize> {
    row.iter()
        .filter_map(Poly::degree)
        .max()
        .ok_or(Error::Singular)
}

/// Left unimodular row reduction over `ℂ[z]` until the leading row
/// coefficient matrix is invertible. Returns `(V M, U, V)` with `U = V^{-1}`.
fn row_reduce(mut m: Matrix<Poly>) -> Result<(Matrix<Poly>, Matrix<Poly>, Matrix<Poly>)> {
    let field = m.field().clone();
    let r = m.rows();
    let mut u: Matrix<Poly> = Matrix::identity(&field, r);
    let mut v: Matrix<Poly> = Matrix::identity(&field, r);
    loop {
        let rho: Vec<usize> = (0..r)
            .map(|i| poly_row_degree(m.row(i)))
            .collect::<Result<_>>()?;
        let lead: CycMat = Matrix::from_vec(
            &field,
            r,
            r,
            (0..r)
                .flat_map(|i| (0..r).map(move |j| (i, j)))
                .map(|(i, j)| m.get(i, j).coeff(rho[i]))
                .collect(),
        )?;
        let kernel = lead.transpose().nullspace();
        if kernel.cols() == 0 {
            return Ok((m, u, v));
        }
        let alpha: Vec<CycNum> = (0..r).map(|i| kernel.get(i, 0).clone()).collect();
        let i0 = (0..r)
            .filter(|&i| !alpha[i].is_zero())
            .max_by_key(|&i| (rho[i], core::cmp::Reverse(i)))
            .expect("nonzero kernel vector");
        let inv0 = alpha[i0].inv()?;
        for i in 0..r {
            if i == i0 || alpha[i].is_zero() {
                continue;
            }
            let c = Poly::monomial(&alpha[i] * &inv0, rho[i0] - rho[i]);
            for j in 0..r {
                let nm = m.get(i0, j).add(&m.get(i, j).mul(&c));
                m.set(i0, j, nm);
                let nv = v.get(i0, j).add(&v.get(i, j).mul(&c));
                v.set(i0, j, nv);
            }
            for k in 0..r {
                let nu = u.get(k, i).sub(&u.get(k, i0).mul(&c));
                u.set(k, i, nu);
            }
        }
    }
}

/// Inverse of a matrix that is invertible over `ℂ[z]`.
pub fn unimodular_inverse(m: &Matrix<Poly>) -> Result<Matrix<Poly>> {
    if m.entries().iter().all(Poly::is_constant) {
        let c: CycMat = m.map(|p| p.coeff(0));
        return Ok(c.inverse_gauss()?.map(|x| Poly::constant(x.clone())));
    }
    let (reduced, _, v) = row_reduce(m.clone())?;
    if !reduced.entries().iter().all(Poly::is_constant) {
        return Err(Error::Singular);
    }
    let c: CycMat = reduced.map(|p| p.coeff(0));
    c.inverse_gauss()?
        .map(|x| Poly::constant(x.clone()))
        .mul(&v)
}

/// Birkhoff factorization by row reduction of `z^s T` over `ℂ[z]`.
pub fn birkhoff_factor(e: &TransitionCocycle) -> Result<BirkhoffFactorization> {
    let field = e.field().clone();
    let r = e.rank();
    let (lo, _) = laurent_exponent_range(e.laurent()).expect("nonsingular");
    let s = -lo;
    let (m, u, v) = row_reduce(e.laurent().map(|x| x.to_poly_shifted(lo)))?;
    let rho: Vec<usize> = (0..r)
        .map(|i| poly_row_degree(m.row(i)))
        .collect::<Result<_>>()?;
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by_key(|&i| (core::cmp::Reverse(rho[i]), i));
    let degrees = order.iter().map(|&i| rho[i] as i64 - s).collect();
    let to_laurent = |p: &Poly| Laurent::from_poly(p.clone(), 0);
    let u_plus = u.select_columns(&order).map(to_laurent);
    let u_plus_inv = v.select_rows(&order).map(to_laurent);
    let mut u_minus = Matrix::zeros(&field, r, r);
    for (new_i, &i) in order.iter().enumerate() {
        for j in 0..r {
            u_minus.set(
                new_i,
                j,
                Laurent::from_poly(m.get(i, j).clone(), -(rho[i] as i64)),
            );
        }
    }
    let fact = BirkhoffFactorization {
        u_plus,
        u_plus_inv,
        degrees,
        u_minus,
    };
    if !fact.verify(e.laurent()) {
        return Err(Error::NotBundleCocycle(
            "factorization residual is nonzero".into(),
        ));
    }
    Ok(fact)
}

impl BirkhoffFactorization {
    /// `T^{-1} = U₋^{-1} D^{-1} U₊^{-1}`, all factors inverted over their
    /// own polynomial rings.
    pub fn transition_inverse(&self) -> Result<LaurentMat> {
        let field = self.u_minus.field();
        let in_w: Matrix<Poly> = self.u_minus.map(|e| e.invert_variable().to_poly_shifted(0));
        let inv_minus: LaurentMat =
            unimodular_inverse(&in_w)?.map(|p| Laurent::from_poly(p.clone(), 0).invert_variable());
        let d_inv = Matrix::diagonal(
            field,
            self.degrees
                .iter()
                .map(|&d| Laurent::monomial(CycNum::one(field), -d))
                .collect(),
        );
        inv_minus.mul(&d_inv)?.mul(&self.u_plus_inv)
    }
}

/// The Grothendieck splitting type, sorted nonincreasing.
pub fn splitting_type(e: &TransitionCocycle) -> Result<Vec<i64>> {
    Ok(birkhoff_factor(e)?.degrees)
}

/// A global section: polynomial vectors in `z` (chart 0) and `w` (chart 1).
#[derive(Clone, Debug, PartialEq)]
pub struct Section {
    pub s0: Vec<Poly>,
    pub s1: Vec<Poly>,
}

/// `det` of a Laurent matrix through a fraction-free determinant of its
/// polynomial shift.
pub fn laurent_det(t: &LaurentMat) -> Result<Laurent> {
    let Some((lo, _)) = laurent_exponent_range(t) else {
        return Ok(Laurent::zero(t.field()));
    };
    let p: Matrix<Poly> = t.map(|x| x.to_poly_shifted(lo));
    Ok(Laurent::from_poly(p.det_bareiss()?, t.rows() as i64 * lo))
}

/// Smallest exponent of `T^{-1}`.
fn inverse_low_exponent(e: &TransitionCocycle) -> Result<i64> {
    let inv = e.inverse()?;
    Ok(laurent_exponent_range(&inv).expect("invertible").0)
}

/// Exact linear-algebra solver for `H⁰(E ⊗ 𝒪(m))`, holding the data that
/// does not depend on `m`.
///
/// With `s0 = z^m T(z) s1(1/z)` and `s1(1/z) = z^{-m} T^{-1} s0`, the
/// `w`-degree of `s1` is at most `m - lo(T^{-1})`.
#[derive(Clone, Debug)]
pub struct H0Solver<'a> {
    e: &'a TransitionCocycle,
    inverse_low: i64,
}

impl<'a> H0Solver<'a> {
    pub fn new(e: &'a TransitionCocycle) -> Result<Self> {
        Ok(H0Solver {
            e,
            inverse_low: inverse_low_exponent(e)?,
        })
    }

    /// Coefficient system whose kernel is the `s1` coefficients of sections.
    fn system(&self, m: i64) -> Option<(Matrix<CycNum>, usize)> {
        let field = self.e.field().clone();
        let r = self.e.rank();
        let bound = m - self.inverse_low;
        if bound < 0 {
            return None;
        }
        let b = bound as usize;
        let t = self.e.laurent();
        let (lo, _) = laurent_exponent_range(t).expect("nonsingular");
        // coefficient of z^ex in row i: Σ_{k, j} T_ij[ex - m + k] c_{k, j}
        let e_min = m - bound + lo;
        let neg: Vec<i64> = (e_min..0).collect();
        let ncols = r * (b + 1);
        let mut sys = Matrix::zeros(&field, r * neg.len(), ncols);
        for (ei, &ex) in neg.iter().enumerate() {
            for i in 0..r {
                for k in 0..=b {
                    for j in 0..r {
                        let c = t.get(i, j).coeff(ex - m + k as i64);
                        if !c.is_zero() {
                            sys.set(ei * r + i, k * r + j, c);
                        }
                    }
                }
            }
        }
        Some((sys, b))
    }

    pub fn sections(&self, m: i64) -> Result<Vec<Section>> {
        let field = self.e.field().clone();
        let r = self.e.rank();
        let Some((sys, b)) = self.system(m) else {
            return Ok(Vec::new());
        };
        let kernel = if sys.rows() == 0 {
            Matrix::identity(&field, sys.cols())
        } else {
            sys.nullspace()
        };
        let mut out = Vec::with_capacity(kernel.cols());
        for col in 0..kernel.cols() {
            let s1: Vec<Poly> = (0..r)
                .map(|j| {
                    Poly::from_coeffs(
                        &field,
                        (0..=b)
                            .map(|k| kernel.get(k * r + j, col).clone())
                            .collect(),
                    )
                })
                .collect();
            let s0 = section_chart0(self.e, m, &s1)?;
            out.push(Section { s0, s1 });
        }
        Ok(out)
    }

    pub fn dimension(&self, m: i64) -> usize {
        match self.system(m) {
            None => 0,
            Some((sys, _)) => sys.cols() - sys.rank(),
        }
    }
}

/// Basis of `H⁰(E ⊗ 𝒪(m))` by an exact linear solve on coefficients.
pub fn h0_sections(e: &TransitionCocycle, m: i64) -> Result<Vec<Section>> {
    H0Solver::new(e)?.sections(m)
}

/// `s0 = z^m T(z) s1(1/z)`, which must be polynomial.
pub fn section_chart0(e: &TransitionCocycle, m: i64, s1: &[Poly]) -> Result<Vec<Poly>> {
    let field = e.field();
    let r = e.rank();
    let s1z: Vec<Laurent> = s1
        .iter()
        .map(|p| Laurent::from_poly(p.clone(), 0).invert_variable())
        .collect();
    (0..r)
        .map(|i| {
            let mut acc = Laurent::zero(field);
            for (j, v) in s1z.iter().enumerate() {
                acc = acc.add(&e.laurent().get(i, j).mul(v));
            }
            let acc = acc.shift(m);
            if acc.low().is_some_and(|l| l < 0) {
                return Err(Error::InvalidParameter("not a global section".into()));
            }
            Ok(acc.to_poly_shifted(0))
        })
        .collect()
}

/// `dim H⁰(E ⊗ 𝒪(m))`.
pub fn h0_dimension(e: &TransitionCocycle, m: i64) -> Result<usize> {
    Ok(H0Solver::new(e)?.dimension(m))
}

/// Harder–Narasimhan filtration read off a Birkhoff factorization.
#[derive(Clone, Debug)]
pub struct HNFiltration {
    /// Distinct degrees, strictly decreasing.
    pub slopes: Vec<i64>,
    pub multiplicities: Vec<usize>,
    /// `steps[j]` spans `E_j` in the chart-0 trivialization.
    pub steps: Vec<LaurentMat>,
}

impl HNFiltration {
    pub fn from_factorization(f: &BirkhoffFactorization) -> Self {
        let mut slopes: Vec<i64> = Vec::new();
        let mut multiplicities: Vec<usize> = Vec::new();
        for &d in &f.degrees {
            if slopes.last() == Some(&d) {
                *multiplicities.last_mut().unwrap() += 1;
            } else {
                slopes.push(d);
                multiplicities.push(1);
            }
        }
        let mut steps = Vec::with_capacity(slopes.len());
        let mut upto = 0;
        for &mult in &multiplicities {
            upto += mult;
            let cols: Vec<usize> = (0..upto).collect();
            steps.push(f.u_plus.select_columns(&cols));
        }
        HNFiltration {
            slopes,
            multiplicities,
            steps,
        }
    }

    pub fn len(&self) -> usize {
        self.slopes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slopes.is_empty()
    }

    /// Ranks of `E_1 ⊂ E_2 ⊂ …`.
    pub fn ranks(&self) -> Vec<usize> {
        self.multiplicities
            .iter()
            .scan(0, |acc, &m| {
                *acc += m;
                Some(*acc)
            })
            .collect()
    }

    /// Index ranges of the graded pieces in the split frame.
    pub fn blocks(&self) -> Vec<core::ops::Range<usize>> {
        let mut start = 0;
        self.multiplicities
            .iter()
            .map(|&m| {
                let r = start..start + m;
                start += m;
                r
            })
            .collect()
    }
}

pub fn hn_filtration(e: &TransitionCocycle) -> Result<HNFiltration> {
    Ok(HNFiltration::from_factorization(&birkhoff_factor(e)?))
}

/// `Σ max(0, d_i + m + 1)`.
pub fn expected_h0(degrees: &[i64], m: i64) -> usize {
    degrees.iter().map(|&d| (d + m + 1).max(0) as usize).sum()
}
