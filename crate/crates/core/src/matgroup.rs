//! Finite subgroups of SL(2) and PGL(2) over cyclotomic fields, with their
//! finite-dimensional representations.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::sync::Arc;
use alloc::{format, vec, vec::Vec};
use core::cmp::Ordering;
use core::fmt;

use crate::cyclotomic::{CycField, CycNum, Field};
use crate::error::{Error, Result};
use crate::linalg::{CycMat, Matrix};

/// Default bound on the size of a generated group.
pub const DEFAULT_MAX_ORDER: usize = 240;

/// A 2×2 matrix `[[a, b], [c, d]]` of determinant one.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Sl2Elem {
    pub a: CycNum,
    pub b: CycNum,
    pub c: CycNum,
    pub d: CycNum,
}

impl fmt::Debug for Sl2Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl Sl2Elem {
    pub fn new(a: CycNum, b: CycNum, c: CycNum, d: CycNum) -> Result<Self> {
        let m = Sl2Elem { a, b, c, d };
        if !m.det().is_one() {
            return Err(Error::NonUnitDeterminant);
        }
        Ok(m)
    }

    pub fn identity(field: &Field) -> Self {
        Sl2Elem {
            a: CycNum::one(field),
            b: CycNum::zero(field),
            c: CycNum::zero(field),
            d: CycNum::one(field),
        }
    }

    pub fn minus_identity(field: &Field) -> Self {
        Self::identity(field).neg()
    }

    pub fn diag(x: CycNum) -> Result<Self> {
        let field = x.field().clone();
        let y = x.inv()?;
        Ok(Sl2Elem {
            a: x,
            b: CycNum::zero(&field),
            c: CycNum::zero(&field),
            d: y,
        })
    }

    pub fn field(&self) -> &Field {
        self.a.field()
    }

    pub fn det(&self) -> CycNum {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn trace(&self) -> CycNum {
        &self.a + &self.d
    }

    pub fn mul(&self, o: &Self) -> Self {
        Sl2Elem {
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
        }
    }

    pub fn inv(&self) -> Self {
        Sl2Elem {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        Sl2Elem {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.d.is_one() && self.b.is_zero() && self.c.is_zero()
    }

    pub fn is_minus_identity(&self) -> bool {
        self.neg().is_identity()
    }

    /// Representative of `±self` used for elements of PGL(2).
    pub fn canonical_sign(&self) -> Self {
        let n = self.neg();
        if n.cmp(self) == Ordering::Less {
            n
        } else {
            self.clone()
        }
    }

    pub fn to_matrix(&self) -> CycMat {
        Matrix::from_vec(
            self.field(),
            2,
            2,
            vec![
                self.a.clone(),
                self.b.clone(),
                self.c.clone(),
                self.d.clone(),
            ],
        )
        .expect("2x2")
    }

    pub fn from_matrix(m: &CycMat) -> Result<Self> {
        if m.rows() != 2 || m.cols() != 2 {
            return Err(Error::DimensionMismatch("expected a 2x2 matrix".into()));
        }
        Self::new(
            m.get(0, 0).clone(),
            m.get(0, 1).clone(),
            m.get(1, 0).clone(),
            m.get(1, 1).clone(),
        )
    }

    pub fn lift_to(&self, field: &Field) -> Result<Self> {
        Ok(Sl2Elem {
            a: self.a.lift_to(field)?,
            b: self.b.lift_to(field)?,
            c: self.c.lift_to(field)?,
            d: self.d.lift_to(field)?,
        })
    }

    /// The unit quaternion `w + x i + y j + z k` as a matrix; needs `4 | N`.
    pub fn from_quaternion(w: &CycNum, x: &CycNum, y: &CycNum, z: &CycNum) -> Result<Self> {
        let field = w.field();
        if !field.modulus().is_multiple_of(4) {
            return Err(Error::InvalidParameter(
                "quaternions need a fourth root of unity".into(),
            ));
        }
        let i = CycNum::zeta_pow(field, (field.modulus() / 4) as i64);
        Self::new(w + &(x * &i), y + &(z * &i), &(z * &i) - y, w - &(x * &i))
    }
}

/// A finite group of 2×2 matrices, either in SL(2) or, when `projective`,
/// in PGL(2) with elements stored by a canonical representative of `±M`.
pub struct FiniteMatrixGroup {
    field: Field,
    projective: bool,
    generators: Vec<Sl2Elem>,
    gen_index: Vec<usize>,
    elements: Vec<Sl2Elem>,
    lookup: BTreeMap<Sl2Elem, usize>,
    /// `left[k][e]` is the index of `gen_k · e`.
    left: Vec<Vec<usize>>,
    /// `word[e] = Some((k, p))` when `e = gen_k · p`; `None` for the identity.
    word: Vec<Option<(usize, usize)>>,
    mul: Vec<u32>,
    inv: Vec<usize>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl fmt::Debug for FiniteMatrixGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteMatrixGroup")
            .field("modulus", &self.field.modulus())
            .field("projective", &self.projective)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl PartialEq for FiniteMatrixGroup {
    fn eq(&self, other: &Self) -> bool {
        self.projective == other.projective
            && self.field == other.field
            && self.elements == other.elements
            && self.generators == other.generators
    }
}

impl FiniteMatrixGroup {
    /// Closes the generators under multiplication, failing past `max_order`.
    pub fn generate(
        field: &Field,
        generators: &[Sl2Elem],
        projective: bool,
        max_order: usize,
    ) -> Result<Self> {
        let norm = |m: Sl2Elem| if projective { m.canonical_sign() } else { m };
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            if g.field() != field {
                return Err(Error::ModulusMismatch(g.field().modulus(), field.modulus()));
            }
            if !g.det().is_one() {
                return Err(Error::NonUnitDeterminant);
            }
            gens.push(norm(g.clone()));
        }
        let id = norm(Sl2Elem::identity(field));
        let mut elements = vec![id.clone()];
        let mut lookup = BTreeMap::new();
        lookup.insert(id, 0usize);
        let mut word = vec![None];
        let mut left: Vec<Vec<usize>> = vec![Vec::new(); gens.len()];
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for (k, g) in gens.iter().enumerate() {
                let prod = norm(g.mul(&elements[e]));
                let idx = match lookup.get(&prod) {
                    Some(&i) => i,
                    None => {
                        if elements.len() >= max_order {
                            return Err(Error::ClosureExceedsCap(max_order));
                        }
                        let i = elements.len();
                        lookup.insert(prod.clone(), i);
                        elements.push(prod);
                        word.push(Some((k, e)));
                        queue.push_back(i);
                        i
                    }
                };
                if left[k].len() <= e {
                    left[k].resize(e + 1, usize::MAX);
                }
                left[k][e] = idx;
            }
        }
        let n = elements.len();
        let gen_index = (0..gens.len()).map(|k| left[k][0]).collect();
        let mut mul = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                mul[x * n + y] = match word[x] {
                    None => y as u32,
                    Some((k, p)) => left[k][mul[p * n + y] as usize] as u32,
                };
            }
        }
        let mut inv = vec![usize::MAX; n];
        for x in 0..n {
            inv[x] = (0..n).find(|&y| mul[x * n + y] == 0).expect("finite group");
        }
        let mut group = FiniteMatrixGroup {
            field: field.clone(),
            projective,
            generators: gens,
            gen_index,
            elements,
            lookup,
            left,
            word,
            mul,
            inv,
            classes: Vec::new(),
            class_of: Vec::new(),
        };
        group.compute_classes();
        Ok(group)
    }

    fn compute_classes(&mut self) {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = (0..n)
                .map(|g| self.mul(self.mul(g, x), self.inv[g]))
                .collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                class_of[m] = classes.len();
            }
            classes.push(members);
        }
        let mut order: Vec<usize> = (0..classes.len()).collect();
        order.sort_by(|&x, &y| {
            let key = |c: usize| (classes[c][0] != 0, classes[c].len());
            key(x)
                .cmp(&key(y))
                .then_with(|| {
                    self.elements[classes[x][0]]
                        .trace()
                        .cmp(&self.elements[classes[y][0]].trace())
                })
                .then_with(|| classes[x][0].cmp(&classes[y][0]))
        });
        let classes: Vec<Vec<usize>> = order.iter().map(|&c| classes[c].clone()).collect();
        for (ci, members) in classes.iter().enumerate() {
            for &m in members {
                class_of[m] = ci;
            }
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_projective(&self) -> bool {
        self.projective
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Sl2Elem] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    /// Element index of generator `k`.
    pub fn generator_index(&self, k: usize) -> usize {
        self.gen_index[k]
    }

    pub fn elements(&self) -> &[Sl2Elem] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Sl2Elem {
        &self.elements[i]
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Index of a matrix (up to sign in the projective case).
    pub fn index_of(&self, m: &Sl2Elem) -> Option<usize> {
        let key = if self.projective {
            m.canonical_sign()
        } else {
            m.clone()
        };
        self.lookup.get(&key).copied()
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.order() + y] as usize
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inv[x]
    }

    /// Index of `gen_k · e`.
    pub fn left_by_generator(&self, k: usize, e: usize) -> usize {
        self.left[k][e]
    }

    /// `Some((k, p))` when element `e` was reached as `gen_k · p`.
    pub fn word_step(&self, e: usize) -> Option<(usize, usize)> {
        self.word[e]
    }

    /// Elements in an order where each one follows its word parent.
    pub fn bfs_order(&self) -> core::ops::Range<usize> {
        0..self.order()
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut cur = x;
        while cur != 0 {
            cur = self.mul(cur, x);
            k += 1;
        }
        k
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn contains_minus_identity(&self) -> Option<usize> {
        if self.projective {
            return None;
        }
        self.index_of(&Sl2Elem::minus_identity(&self.field))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|x| (0..n).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    pub fn exponent(&self) -> usize {
        (0..self.order()).fold(1, |acc, x| {
            let o = self.element_order(x);
            acc / gcd(acc, o) * o
        })
    }

    /// The same group re-expressed over a larger cyclotomic field.
    pub fn lift_to(&self, field: &Field, max_order: usize) -> Result<Self> {
        let gens = self
            .generators
            .iter()
            .map(|g| g.lift_to(field))
            .collect::<Result<Vec<_>>>()?;
        Self::generate(field, &gens, self.projective, max_order)
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Named finite subgroups of SL(2) and their fields.
pub mod catalog {
    use super::*;

    /// Cyclic group of order `n` generated by `diag(ζ_n, ζ_n^{-1})`.
    pub fn cyclic(n: u32) -> Result<FiniteMatrixGroup> {
        if n == 0 {
            return Err(Error::InvalidParameter("cyclic group of order 0".into()));
        }
        let field = CycField::new(n.max(1))?;
        let g = Sl2Elem::diag(CycNum::zeta_pow(&field, 1))?;
        FiniteMatrixGroup::generate(&field, &[g], false, n as usize)
    }

    /// Binary dihedral group of order `4n`.
    pub fn binary_dihedral(n: u32) -> Result<FiniteMatrixGroup> {
        if n < 1 {
            return Err(Error::InvalidParameter(
                "binary dihedral group needs n >= 1".into(),
            ));
        }
        let field = CycField::new(2 * n)?;
        let zero = CycNum::zero(&field);
        let one = CycNum::one(&field);
        let a = Sl2Elem::diag(CycNum::zeta_pow(&field, 1))?;
        let b = Sl2Elem::new(zero.clone(), one.clone(), -&one, zero)?;
        FiniteMatrixGroup::generate(&field, &[a, b], false, 4 * n as usize)
    }

    fn half(field: &Field, k: i64) -> CycNum {
        CycNum::from_ratio(field, k.into(), 2.into()).expect("nonzero")
    }

    /// Binary tetrahedral group (order 24) over `Q(ζ_4)`.
    pub fn binary_tetrahedral() -> Result<FiniteMatrixGroup> {
        tetrahedral_in(&CycField::new(4)?)
    }

    fn tetrahedral_gens(field: &Field) -> Result<Vec<Sl2Elem>> {
        let zero = CycNum::zero(field);
        let one = CycNum::one(field);
        let i = Sl2Elem::from_quaternion(&zero, &one, &zero, &zero)?;
        let j = Sl2Elem::from_quaternion(&zero, &zero, &one, &zero)?;
        let h = half(field, 1);
        let omega = Sl2Elem::from_quaternion(&-&h, &h, &h, &h)?;
        Ok(vec![i, j, omega])
    }

    fn tetrahedral_in(field: &Field) -> Result<FiniteMatrixGroup> {
        FiniteMatrixGroup::generate(field, &tetrahedral_gens(field)?, false, 24)
    }

    /// Binary octahedral group (order 48) over `Q(ζ_8)`.
    pub fn binary_octahedral() -> Result<FiniteMatrixGroup> {
        let field = CycField::new(8)?;
        let mut gens = tetrahedral_gens(&field)?;
        gens.push(Sl2Elem::diag(CycNum::zeta_pow(&field, 1))?);
        FiniteMatrixGroup::generate(&field, &gens, false, 48)
    }

    /// Binary icosahedral group (order 120) over `Q(ζ_20)`.
    pub fn binary_icosahedral() -> Result<FiniteMatrixGroup> {
        let field = CycField::new(20)?;
        let zero = CycNum::zero(&field);
        let one = CycNum::one(&field);
        // 1/τ = ζ_5 + ζ_5^4 = 2cos(2π/5), τ = 1 + 1/τ
        let tau_inv = &CycNum::zeta_pow(&field, 4) + &CycNum::zeta_pow(&field, 16);
        let tau = &one + &tau_inv;
        let h = half(&field, 1);
        let i = Sl2Elem::from_quaternion(&zero, &one, &zero, &zero)?;
        let j = Sl2Elem::from_quaternion(&zero, &zero, &one, &zero)?;
        let g = Sl2Elem::from_quaternion(&(&tau * &h), &(&tau_inv * &h), &h, &zero)?;
        FiniteMatrixGroup::generate(&field, &[i, j, g], false, 120)
    }

    /// Image in PGL(2) of a subgroup of SL(2).
    pub fn projective_image(group: &FiniteMatrixGroup) -> Result<FiniteMatrixGroup> {
        FiniteMatrixGroup::generate(group.field(), group.generators(), true, group.order())
    }

    /// Cyclic subgroup of PGL(2) of order `n` (rotation `z ↦ ζ_n z`).
    pub fn pgl_cyclic(n: u32) -> Result<FiniteMatrixGroup> {
        let field = CycField::new(2 * n)?;
        let g = Sl2Elem::diag(CycNum::zeta_pow(&field, 1))?;
        FiniteMatrixGroup::generate(&field, &[g], true, n as usize)
    }

    /// Dihedral subgroup of PGL(2) of order `2n`.
    pub fn pgl_dihedral(n: u32) -> Result<FiniteMatrixGroup> {
        projective_image(&binary_dihedral(n)?)
    }

    pub fn pgl_tetrahedral() -> Result<FiniteMatrixGroup> {
        projective_image(&binary_tetrahedral()?)
    }

    pub fn pgl_octahedral() -> Result<FiniteMatrixGroup> {
        projective_image(&binary_octahedral()?)
    }

    pub fn pgl_icosahedral() -> Result<FiniteMatrixGroup> {
        projective_image(&binary_icosahedral()?)
    }

    /// Looks up a group by name: `C<n>`, `BD<n>` (order `n`, i.e. `Q8 = BD8`),
    /// `Q8`, `2T`, `2O`, `2I`, or `PGL:` followed by `C<n>`, `D<n>` (order
    /// `2n`), `T`, `O`, `I`.
    pub fn by_name(name: &str) -> Result<FiniteMatrixGroup> {
        let bad = || Error::InvalidParameter(format!("unknown group name {name:?}"));
        let num = |s: &str| s.parse::<u32>().map_err(|_| bad());
        if let Some(rest) = name.strip_prefix("PGL:") {
            return match rest {
                "T" => pgl_tetrahedral(),
                "O" => pgl_octahedral(),
                "I" => pgl_icosahedral(),
                _ if rest.starts_with('C') => pgl_cyclic(num(&rest[1..])?),
                _ if rest.starts_with('D') => pgl_dihedral(num(&rest[1..])?),
                _ => Err(bad()),
            };
        }
        match name {
            "Q8" => binary_dihedral(2),
            "2T" => binary_tetrahedral(),
            "2O" => binary_octahedral(),
            "2I" => binary_icosahedral(),
            _ if name.starts_with("BD") => {
                let order = num(&name[2..])?;
                if order % 4 != 0 || order < 4 {
                    return Err(bad());
                }
                binary_dihedral(order / 4)
            }
            _ if name.starts_with('C') => cyclic(num(&name[1..])?),
            _ => Err(bad()),
        }
    }
}

/// A linear representation `G → GL(V)` with all images stored.
#[derive(Clone)]
pub struct Representation {
    group: Arc<FiniteMatrixGroup>,
    dim: usize,
    images: Vec<CycMat>,
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Representation")
            .field("dim", &self.dim)
            .field("generator_images", &self.generator_images())
            .finish()
    }
}

impl Representation {
    /// Extends generator images along words and checks every Cayley edge.
    pub fn from_generator_images(
        group: &Arc<FiniteMatrixGroup>,
        images: &[CycMat],
    ) -> Result<Self> {
        if images.len() != group.num_generators() {
            return Err(Error::InconsistentRepresentation(format!(
                "{} generator images for {} generators",
                images.len(),
                group.num_generators()
            )));
        }
        let dim = images.first().map_or(0, CycMat::rows);
        let field = group.field();
        for m in images {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch(
                    "generator images must be square of equal size".into(),
                ));
            }
            if m.field() != field {
                return Err(Error::ModulusMismatch(m.field().modulus(), field.modulus()));
            }
        }
        let mut all = Vec::with_capacity(group.order());
        all.push(Matrix::identity(field, dim));
        for e in 1..group.order() {
            let (k, p) = group.word_step(e).expect("non-identity has a word");
            all.push(images[k].mul(&all[p])?);
        }
        let rep = Representation {
            group: group.clone(),
            dim,
            images: all,
        };
        for k in 0..group.num_generators() {
            for e in 0..group.order() {
                let target = group.left_by_generator(k, e);
                if images[k].mul(&rep.images[e])? != rep.images[target] {
                    return Err(Error::InconsistentRepresentation(format!(
                        "relation fails for generator {k} at element {e}"
                    )));
                }
            }
        }
        Ok(rep)
    }

    /// Builds a representation from images of every element.
    pub fn from_all_images(group: &Arc<FiniteMatrixGroup>, images: Vec<CycMat>) -> Result<Self> {
        if images.len() != group.order() {
            return Err(Error::InconsistentRepresentation(
                "wrong number of images".into(),
            ));
        }
        let gens: Vec<CycMat> = (0..group.num_generators())
            .map(|k| images[group.generator_index(k)].clone())
            .collect();
        let rep = Self::from_generator_images(group, &gens)?;
        if rep.images != images {
            return Err(Error::InconsistentRepresentation(
                "images are not multiplicative".into(),
            ));
        }
        Ok(rep)
    }

    pub fn trivial(group: &Arc<FiniteMatrixGroup>, dim: usize) -> Self {
        let id = Matrix::identity(group.field(), dim);
        Representation {
            group: group.clone(),
            dim,
            images: vec![id; group.order()],
        }
    }

    /// The defining two-dimensional representation of a subgroup of SL(2).
    pub fn standard(group: &Arc<FiniteMatrixGroup>) -> Result<Self> {
        if group.is_projective() {
            return Err(Error::InvalidParameter(
                "a PGL(2) group has no defining linear action".into(),
            ));
        }
        Ok(Representation {
            group: group.clone(),
            dim: 2,
            images: group.elements().iter().map(Sl2Elem::to_matrix).collect(),
        })
    }

    /// The representation `Sym^d` of the defining action on binary forms.
    /// For projective groups `d` must be even.
    pub fn symmetric_power(group: &Arc<FiniteMatrixGroup>, d: usize) -> Result<Self> {
        if group.is_projective() && d % 2 == 1 {
            return Err(Error::ParityViolation(
                "odd symmetric power of a PGL(2) group".into(),
            ));
        }
        let images = group
            .elements()
            .iter()
            .map(|g| sym_power_matrix(g, d))
            .collect();
        Ok(Representation {
            group: group.clone(),
            dim: d + 1,
            images,
        })
    }

    pub fn group(&self) -> &Arc<FiniteMatrixGroup> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn image(&self, e: usize) -> &CycMat {
        &self.images[e]
    }

    pub fn images(&self) -> &[CycMat] {
        &self.images
    }

    pub fn generator_images(&self) -> Vec<CycMat> {
        (0..self.group.num_generators())
            .map(|k| self.images[self.group.generator_index(k)].clone())
            .collect()
    }

    pub fn character(&self) -> Vec<CycNum> {
        self.images.iter().map(Matrix::trace).collect()
    }

    /// Character values on conjugacy classes, in the group's class order.
    pub fn class_character(&self) -> Vec<CycNum> {
        self.group
            .classes()
            .iter()
            .map(|c| self.images[c[0]].trace())
            .collect()
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.check_group(other)?;
        let field = self.group.field();
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| Matrix::block_diag(field, &[a.clone(), b.clone()]))
            .collect();
        Ok(Representation {
            group: self.group.clone(),
            dim: self.dim + other.dim,
            images,
        })
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.check_group(other)?;
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| a.kron(b))
            .collect();
        Ok(Representation {
            group: self.group.clone(),
            dim: self.dim * other.dim,
            images,
        })
    }

    /// `g ↦ P^{-1} ρ(g) P`.
    pub fn conjugate(&self, p: &CycMat) -> Result<Self> {
        let pinv = p.inverse_gauss()?;
        let images = self
            .images
            .iter()
            .map(|m| pinv.mul(m)?.mul(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Representation {
            group: self.group.clone(),
            dim: self.dim,
            images,
        })
    }

    /// Average `(1/|G|) Σ ρ(g)`, the projector onto invariants.
    pub fn reynolds(&self) -> CycMat {
        let field = self.group.field();
        let mut acc = Matrix::zeros(field, self.dim, self.dim);
        for m in &self.images {
            acc = acc.add(m).expect("same shape");
        }
        let inv = CycNum::from_ratio(field, 1.into(), (self.group.order() as i64).into())
            .expect("nonzero");
        acc.scale(&inv)
    }

    fn check_group(&self, other: &Self) -> Result<()> {
        if !Arc::ptr_eq(&self.group, &other.group) && *self.group != *other.group {
            return Err(Error::GroupMismatch(
                "representations of different groups".into(),
            ));
        }
        Ok(())
    }

    /// Same group element indexing, compared structurally.
    pub fn same_group(&self, group: &FiniteMatrixGroup) -> bool {
        core::ptr::eq(Arc::as_ptr(&self.group), group) || *self.group == *group
    }

    pub fn lift_to(&self, group: &Arc<FiniteMatrixGroup>) -> Result<Self> {
        let field = group.field();
        let gens = self
            .generator_images()
            .iter()
            .map(|m| m.try_map(|c| c.lift_to(field)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_generator_images(group, &gens)
    }
}

/// Isomorphism test for representations of the same finite group: equal
/// characters.
pub fn module_isomorphic(a: &Representation, b: &Representation) -> Result<bool> {
    a.check_group(b)?;
    Ok(a.dim == b.dim && a.character() == b.character())
}

/// Matrix of `g` on binary forms of degree `d`: column `k` holds the
/// coefficients of `(a - c z)^{d-k} (d z - b)^k`, the basis vector `z^k`
/// transported by `g`.
pub fn sym_power_matrix(g: &Sl2Elem, d: usize) -> CycMat {
    use crate::poly::Poly;
    let field = g.field();
    let u = Poly::linear(g.a.clone(), -&g.c);
    let v = Poly::linear(-&g.b, g.d.clone());
    let mut upow = vec![Poly::one(field)];
    let mut vpow = vec![Poly::one(field)];
    for k in 1..=d {
        upow.push(upow[k - 1].mul(&u));
        vpow.push(vpow[k - 1].mul(&v));
    }
    let mut m = Matrix::zeros(field, d + 1, d + 1);
    for k in 0..=d {
        let col = upow[d - k].mul(&vpow[k]);
        for i in 0..=d {
            m.set(i, k, col.coeff(i));
        }
    }
    m
}

/// One-dimensional characters with values in the group's field.
pub fn linear_characters(group: &Arc<FiniteMatrixGroup>) -> Vec<Representation> {
    let field = group.field();
    let n = field.modulus() as usize;
    let orders: Vec<usize> = (0..group.num_generators())
        .map(|k| group.element_order(group.generator_index(k)))
        .collect();
    // Candidate values: roots of unity of order dividing ord(g_k) that lie in Q(ζ_N).
    let roots: Vec<Vec<CycNum>> = orders
        .iter()
        .map(|&o| {
            let m = gcd(o, if n % 2 == 1 { 2 * n } else { n });
            let big = if n % 2 == 1 { 2 * n } else { n };
            (0..m)
                .map(|j| {
                    let e = (j * big / m) as i64;
                    if n % 2 == 1 {
                        // ζ_{2N}^e = (-1)^e ζ_N^{e (N+1)/2}
                        let base = CycNum::zeta_pow(field, e * ((n as i64 + 1) / 2));
                        if e % 2 == 1 {
                            -&base
                        } else {
                            base
                        }
                    } else {
                        CycNum::zeta_pow(field, e)
                    }
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; orders.len()];
    loop {
        let imgs: Vec<CycMat> = choice
            .iter()
            .enumerate()
            .map(|(k, &c)| Matrix::from_vec(field, 1, 1, vec![roots[k][c].clone()]).expect("1x1"))
            .collect();
        if let Ok(rep) = Representation::from_generator_images(group, &imgs) {
            out.push(rep);
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return out;
            }
            choice[k] += 1;
            if choice[k] < roots[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}
