//! Finite subgroups of PGL(2), their preimages in SL(2), and the splitting
//! of the central extension `1 → ℤ/2 → ℋ → H → 1`.

use alloc::sync::Arc;
use alloc::{vec, vec::Vec};

use crate::error::{Error, Result};
use crate::matgroup::{FiniteMatrixGroup, Representation, Sl2Elem};

/// A section `γ : H → ℋ` of the projection that is a homomorphism.
#[derive(Clone, Debug, PartialEq)]
pub struct SplittingHom {
    /// `γ` of each generator of `H`, as an element of SL(2).
    pub generator_lifts: Vec<Sl2Elem>,
    /// `images[h]` is the index in `ℋ` of `γ(h)`.
    pub images: Vec<usize>,
}

/// A finite subgroup `H` of PGL(2) with its preimage `ℋ` in SL(2).
#[derive(Debug)]
pub struct PglGroup {
    h: Arc<FiniteMatrixGroup>,
    preimage: Arc<FiniteMatrixGroup>,
    lift: Vec<usize>,
    proj: Vec<usize>,
    minus_identity: usize,
    splitting: Option<SplittingHom>,
    split_group: Option<Arc<FiniteMatrixGroup>>,
}

/// `ℋ = β^{-1}(H)`: generated by the representatives of the generators of
/// `H` together with `-I`.
pub fn preimage_group(h: &FiniteMatrixGroup) -> Result<FiniteMatrixGroup> {
    if !h.is_projective() {
        return Err(Error::InvalidParameter(
            "preimage of a group that is not in PGL(2)".into(),
        ));
    }
    let mut gens = h.generators().to_vec();
    gens.push(Sl2Elem::minus_identity(h.field()));
    FiniteMatrixGroup::generate(h.field(), &gens, false, 2 * h.order())
}

impl PglGroup {
    pub fn new(h: Arc<FiniteMatrixGroup>) -> Result<Self> {
        let preimage = Arc::new(preimage_group(&h)?);
        if preimage.order() != 2 * h.order() {
            return Err(Error::InvalidParameter(
                "preimage has the wrong order".into(),
            ));
        }
        let lift = h
            .elements()
            .iter()
            .map(|e| {
                preimage
                    .index_of(e)
                    .expect("representative lies in the preimage")
            })
            .collect();
        let proj = preimage
            .elements()
            .iter()
            .map(|e| h.index_of(e).expect("preimage projects into H"))
            .collect();
        let minus_identity = preimage
            .contains_minus_identity()
            .expect("preimage contains -I");
        let mut group = PglGroup {
            h,
            preimage,
            lift,
            proj,
            minus_identity,
            splitting: None,
            split_group: None,
        };
        if let Some(s) = extension_splits(&group) {
            group.split_group = Some(Arc::new(splitting_group(&group, &s)?));
            group.splitting = Some(s);
        }
        Ok(group)
    }

    pub fn h(&self) -> &Arc<FiniteMatrixGroup> {
        &self.h
    }

    pub fn preimage(&self) -> &Arc<FiniteMatrixGroup> {
        &self.preimage
    }

    /// Index in `ℋ` of the stored representative of `h`.
    pub fn lift(&self, h: usize) -> usize {
        self.lift[h]
    }

    pub fn proj(&self, x: usize) -> usize {
        self.proj[x]
    }

    pub fn minus_identity(&self) -> usize {
        self.minus_identity
    }

    pub fn splitting(&self) -> Option<&SplittingHom> {
        self.splitting.as_ref()
    }

    /// `γ(H) ⊂ SL(2)`, indexed exactly like `H`.
    pub fn split_group(&self) -> Option<&Arc<FiniteMatrixGroup>> {
        self.split_group.as_ref()
    }
}

/// Searches sign choices on generator lifts for a homomorphic section.
pub fn extension_splits(pgl: &PglGroup) -> Option<SplittingHom> {
    let h = &pgl.h;
    let big = &pgl.preimage;
    let k = h.num_generators();
    for mask in 0u32..(1 << k) {
        let lifts: Vec<usize> = (0..k)
            .map(|i| {
                let base = pgl.lift[h.generator_index(i)];
                if mask & (1 << i) != 0 {
                    big.mul(pgl.minus_identity, base)
                } else {
                    base
                }
            })
            .collect();
        let mut images = vec![0usize; h.order()];
        for e in 1..h.order() {
            let (g, p) = h.word_step(e).expect("word");
            images[e] = big.mul(lifts[g], images[p]);
        }
        let multiplicative = (0..h.order())
            .all(|x| (0..h.order()).all(|y| images[h.mul(x, y)] == big.mul(images[x], images[y])));
        if multiplicative {
            return Some(SplittingHom {
                generator_lifts: lifts.iter().map(|&i| big.element(i).clone()).collect(),
                images,
            });
        }
    }
    None
}

/// Independent check: does `ℋ` contain a subgroup of order `|H|` avoiding
/// `-I`? Subgroups are enumerated as those generated by at most two
/// elements, which covers every finite subgroup of PGL(2).
pub fn complement_exists_by_search(pgl: &PglGroup) -> bool {
    let big = &pgl.preimage;
    let n = big.order();
    let target = pgl.h.order();
    let closure = |gens: &[usize]| -> Vec<bool> {
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = big.mul(g, x);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    };
    if target == 1 {
        return true;
    }
    for x in 0..n {
        for y in x..n {
            let sub = closure(&[x, y]);
            let order = sub.iter().filter(|&&b| b).count();
            if order == target && !sub[pgl.minus_identity] {
                return true;
            }
        }
    }
    false
}

/// The subgroup `γ(H)` of SL(2), generated in the same order as `H`.
pub fn splitting_group(pgl: &PglGroup, s: &SplittingHom) -> Result<FiniteMatrixGroup> {
    let g = FiniteMatrixGroup::generate(pgl.h.field(), &s.generator_lifts, false, pgl.h.order())?;
    for (i, &img) in s.images.iter().enumerate() {
        if g.element(i) != pgl.preimage.element(img) {
            return Err(Error::InvalidParameter(
                "splitting group indexing differs from H".into(),
            ));
        }
    }
    Ok(g)
}

/// True iff `-I` acts as `-1` on the representation of `ℋ`.
pub fn odd_twist_valid(r: &Representation, pgl: &PglGroup) -> bool {
    if !r.same_group(&pgl.preimage) {
        return false;
    }
    let m = r.image(pgl.minus_identity);
    r.dim() > 0 && m.neg().is_identity()
}
