//! Seeded random instances: planted cocycles, canonical forms and twists.

use std::sync::Arc;

use eqbundle_core::bundle::{unimodular_inverse, TransitionCocycle};
use eqbundle_core::cyclotomic::{CycNum, Field};
use eqbundle_core::equivariant::{
    CanonicalEntry, CanonicalForm, EquivariantBundle, GroupContext, Parity,
};
use eqbundle_core::linalg::{CycMat, Matrix};
use eqbundle_core::matgroup::{linear_characters, FiniteMatrixGroup, Representation};
use eqbundle_core::moebius::MoebiusMap;
use eqbundle_core::poly::{Laurent, Poly};
use eqbundle_core::ratfun::{ratmat_from_laurent, RatFun, RatMat};
use eqbundle_core::Result;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Gen {
    rng: ChaCha8Rng,
}

/// A planted cocycle `T = A(z) diag(z^d) B(1/z)`.
pub struct Planted {
    pub cocycle: TransitionCocycle,
    pub degrees: Vec<i64>,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// `c_0 + c_1 ζ^k` with small integer coefficients.
    pub fn scalar(&mut self, field: &Field) -> CycNum {
        let c0 = CycNum::from_int(field, self.rng.gen_range(-3..=3));
        if field.modulus() <= 2 || self.rng.gen_bool(0.5) {
            return c0;
        }
        let k = self.rng.gen_range(1..field.modulus() as i64);
        let c1 = self.rng.gen_range(-2..=2);
        &c0 + &CycNum::zeta_pow(field, k).scale_int(c1)
    }

    pub fn unit(&mut self, field: &Field) -> CycNum {
        let k = self.rng.gen_range(0..field.modulus() as i64);
        let s = if self.rng.gen_bool(0.5) { 1 } else { 2 };
        CycNum::zeta_pow(field, k).scale_int(s)
    }

    pub fn poly(&mut self, field: &Field, max_degree: usize) -> Poly {
        let deg = self.rng.gen_range(0..=max_degree);
        Poly::from_coeffs(field, (0..=deg).map(|_| self.scalar(field)).collect())
    }

    /// `P · L · U · S` with `L` unit lower triangular of entry degree `≤ 1`,
    /// `U` unit upper triangular of entry degree `≤ max_degree - 1`, a
    /// permutation `P` and a diagonal of units `S`.
    pub fn unimodular(&mut self, field: &Field, r: usize, max_degree: usize) -> Matrix<Poly> {
        let lower_deg = max_degree.min(1);
        let upper_deg = max_degree.saturating_sub(lower_deg);
        let mut l = Matrix::identity(field, r);
        let mut u = Matrix::identity(field, r);
        for i in 0..r {
            for j in 0..i {
                l.set(i, j, self.poly(field, lower_deg));
                u.set(j, i, self.poly(field, upper_deg));
            }
        }
        let mut perm: Vec<usize> = (0..r).collect();
        perm.shuffle(&mut self.rng);
        let s: Vec<Poly> = (0..r).map(|_| Poly::constant(self.unit(field))).collect();
        let lu = l.mul(&u).expect("square");
        let mut out = Matrix::zeros(field, r, r);
        for i in 0..r {
            for j in 0..r {
                out.set(perm[i], j, lu.get(i, j).mul(&s[j]));
            }
        }
        out
    }

    pub fn degrees(&mut self, r: usize, lo: i64, hi: i64) -> Vec<i64> {
        (0..r).map(|_| self.rng.gen_range(lo..=hi)).collect()
    }

    pub fn planted(
        &mut self,
        field: &Field,
        r: usize,
        lo: i64,
        hi: i64,
        max_degree: usize,
    ) -> Result<Planted> {
        let mut degrees = self.degrees(r, lo, hi);
        let a = to_laurent(&self.unimodular(field, r, max_degree), 1);
        let b = to_laurent(&self.unimodular(field, r, max_degree), -1);
        let d = TransitionCocycle::split(field, &degrees);
        let t = a.mul(d.laurent())?.mul(&b)?;
        degrees.sort_unstable_by(|x, y| y.cmp(x));
        Ok(Planted {
            cocycle: TransitionCocycle::from_laurent(&t)?,
            degrees,
        })
    }

    fn invertible_constant(&mut self, field: &Field, r: usize) -> (CycMat, CycMat) {
        loop {
            let m = Matrix::from_vec(
                field,
                r,
                r,
                (0..r * r).map(|_| self.scalar(field)).collect(),
            )
            .expect("shape");
            if let Ok(inv) = m.inverse_gauss() {
                return (m, inv);
            }
        }
    }

    /// Irreducible building blocks: linear characters, the defining
    /// representation and `Sym²`. `odd` keeps only those with `-I ↦ -1`.
    pub fn module_pieces(
        &self,
        group: &Arc<FiniteMatrixGroup>,
        odd: Option<usize>,
    ) -> Result<Vec<Representation>> {
        let mut pieces = linear_characters(group);
        if !group.is_projective() {
            pieces.push(Representation::standard(group)?);
            pieces.push(Representation::symmetric_power(group, 2)?);
        } else {
            pieces.push(Representation::symmetric_power(group, 2)?);
        }
        if let Some(m) = odd {
            pieces.retain(|p| p.image(m).neg().is_identity());
        }
        Ok(pieces)
    }

    /// A random module of dimension at most `max_dim` built from
    /// [`Gen::module_pieces`], conjugated by a random constant matrix.
    pub fn module(&mut self, pieces: &[Representation], max_dim: usize) -> Result<Representation> {
        let target = self.rng.gen_range(1..=max_dim);
        let mut acc: Option<Representation> = None;
        let mut left = target;
        loop {
            let fits: Vec<&Representation> = pieces.iter().filter(|p| p.dim() <= left).collect();
            let Some(pick) = fits.choose(&mut self.rng) else {
                break;
            };
            left -= pick.dim();
            acc = Some(match acc {
                None => (*pick).clone(),
                Some(m) => m.direct_sum(pick)?,
            });
            if left == 0 {
                break;
            }
        }
        let m = match acc {
            Some(m) => m,
            None => pieces
                .iter()
                .min_by_key(|p| p.dim())
                .ok_or_else(|| eqbundle_core::Error::InvalidParameter("no module pieces".into()))?
                .clone(),
        };
        let (p, _) = self.invertible_constant(m.group().field(), m.dim());
        m.conjugate(&p)
    }

    /// A canonical form whose entries respect the parity rules of `ctx`.
    pub fn canonical_form(
        &mut self,
        ctx: &GroupContext,
        entries: usize,
        lo: i64,
        hi: i64,
        max_dim: usize,
    ) -> Result<CanonicalForm> {
        let mut out = Vec::with_capacity(entries);
        for _ in 0..entries {
            let degree = self.rng.gen_range(lo..=hi);
            let entry = match ctx.pgl() {
                Some(p) if p.splitting().is_none() && degree.rem_euclid(2) == 1 => {
                    let pieces = self.module_pieces(p.preimage(), Some(p.minus_identity()))?;
                    CanonicalEntry {
                        degree,
                        parity: Parity::OddTwist,
                        module: self.module(&pieces, max_dim)?,
                    }
                }
                _ => {
                    let pieces = self.module_pieces(ctx.group(), None)?;
                    CanonicalEntry {
                        degree,
                        parity: Parity::Plain,
                        module: self.module(&pieces, max_dim)?,
                    }
                }
            };
            out.push(entry);
        }
        CanonicalForm { entries: out }.normalize()
    }

    /// A random automorphism of `⊕ 𝒪(d_i)` (degrees nonincreasing), given
    /// in chart 0 with its inverse.
    pub fn automorphism(
        &mut self,
        field: &Field,
        degrees: &[i64],
    ) -> Result<(Matrix<Poly>, Matrix<Poly>)> {
        let r = degrees.len();
        let (c, _) = self.invertible_constant(field, r);
        let mut m = Matrix::zeros(field, r, r);
        for i in 0..r {
            for j in 0..r {
                let gap = degrees[i] - degrees[j];
                let entry = if gap == 0 {
                    Poly::constant(c.get(i, j).clone())
                } else if gap > 0 {
                    self.poly(field, gap as usize)
                } else {
                    Poly::zero(field)
                };
                m.set(i, j, entry);
            }
        }
        // equal-degree blocks must be invertible: fall back to the identity there
        let inv = match unimodular_inverse(&m) {
            Ok(inv) => inv,
            Err(_) => {
                for i in 0..r {
                    for j in 0..r {
                        if degrees[i] == degrees[j] {
                            m.set(
                                i,
                                j,
                                if i == j {
                                    Poly::one(field)
                                } else {
                                    Poly::zero(field)
                                },
                            );
                        }
                    }
                }
                unimodular_inverse(&m)?
            }
        };
        Ok((m, inv))
    }

    /// Conjugates the action of a split bundle by a random automorphism and
    /// then moves both charts by random unimodular changes of frame.
    pub fn twist(&mut self, b: &EquivariantBundle, max_degree: usize) -> Result<EquivariantBundle> {
        let field = b.base().field().clone();
        let r = b.rank();
        let degrees: Vec<i64> = (0..r)
            .map(|i| {
                b.base()
                    .laurent()
                    .get(i, i)
                    .as_monomial()
                    .map(|(_, k)| k)
                    .unwrap_or(0)
            })
            .collect();
        let (phi, phi_inv) = self.automorphism(&field, &degrees)?;
        let a = self.unimodular(&field, r, max_degree);
        let a_inv = unimodular_inverse(&a)?;
        let bw = self.unimodular(&field, r, max_degree);
        let f = a.mul(&phi)?;
        let f_inv = phi_inv.mul(&a_inv)?;
        let t = to_laurent(&a, 1)
            .mul(b.base().laurent())?
            .mul(&to_laurent(&bw, -1))?;
        let fr = ratmat_from_laurent(&to_laurent(&f, 1));
        let fr_inv = ratmat_from_laurent(&to_laurent(&f_inv, 1));
        let group = b.group();
        let actions = b
            .actions()
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let g = MoebiusMap::new(group.element(group.generator_index(k)).clone());
                g.apply_mat(&fr).mul(m)?.mul(&fr_inv)
            })
            .collect::<Result<Vec<RatMat>>>()?;
        EquivariantBundle::new(group.clone(), TransitionCocycle::from_laurent(&t)?, actions)
    }
}

/// Polynomial matrix in `z` (`sign = 1`) or in `1/z` (`sign = -1`).
pub fn to_laurent(m: &Matrix<Poly>, sign: i64) -> Matrix<Laurent> {
    m.map(|p| {
        let l = Laurent::from_poly(p.clone(), 0);
        if sign < 0 {
            l.invert_variable()
        } else {
            l
        }
    })
}

pub fn constant_ratmat(m: &CycMat) -> RatMat {
    m.map(|c| RatFun::constant(c.clone()))
}
