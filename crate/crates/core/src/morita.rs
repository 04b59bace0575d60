//! Transfer of derivations, automorphisms and integrable chains between `A`
//! and the matrix algebra `M_n(A)`.

use crate::algebra::{Algebra, LinearMap};
use crate::chainring::RingElem;
use crate::derivlift::{class_of_automorphism, integrable_chain, AutR, IntegrableChain};
use crate::error::{Error, Result};
use crate::hochschild::{derivation_cochain, CohomClass, Cohomology};
use crate::linalg::{Mat, Subgroup};

/// `A` together with `M_n(A)` and the corner idempotent `e = E_11 ⊗ 1`.
#[derive(Clone, Debug)]
pub struct MoritaContext {
    pub base: Algebra,
    pub n: usize,
    pub matrix: Algebra,
}

impl MoritaContext {
    pub fn new(base: &Algebra, n: usize) -> Result<Self> {
        let ctx = MoritaContext { base: base.clone(), n, matrix: base.matrix_algebra(n)? };
        ctx.validate()?;
        Ok(ctx)
    }

    /// The same context with everything read at precision `k`.
    pub fn at_precision(&self, k: usize) -> Result<Self> {
        Self::new(&self.base.at_precision(k)?, self.n)
    }

    /// Basis index of `E_uv ⊗ e_i` in `M_n(A)`.
    pub fn index(&self, u: usize, v: usize, i: usize) -> usize {
        (u * self.n + v) * self.base.rank() + i
    }

    /// `(u, v, i)` for a basis index of `M_n(A)`.
    pub fn unindex(&self, k: usize) -> (usize, usize, usize) {
        let r = self.base.rank();
        ((k / r) / self.n, (k / r) % self.n, k % r)
    }

    pub fn corner_idempotent(&self) -> Vec<RingElem> {
        self.embed(0, 0, self.base.unit())
    }

    /// `E_uv ⊗ a`.
    pub fn embed(&self, u: usize, v: usize, a: &[RingElem]) -> Vec<RingElem> {
        let mut out = self.matrix.zero_vec();
        for (i, &c) in a.iter().enumerate() {
            out[self.index(u, v, i)] = c;
        }
        out
    }

    /// The `(u, v)` entry of an element of `M_n(A)`.
    pub fn entry(&self, x: &[RingElem], u: usize, v: usize) -> Vec<RingElem> {
        (0..self.base.rank()).map(|i| x[self.index(u, v, i)]).collect()
    }

    fn validate(&self) -> Result<()> {
        let e = self.corner_idempotent();
        if self.matrix.mul(&e, &e) != e {
            return Err(Error::InvalidBimodule("corner element is not idempotent".into()));
        }
        let k = self.base.rank();
        for i in 0..k {
            let x = self.embed(0, 0, &self.base.basis(i));
            if self.matrix.mul(&self.matrix.mul(&e, &x), &e) != x {
                return Err(Error::InvalidBimodule(format!("e·E_11⊗e_{i}·e differs from E_11⊗e_{i}")));
            }
            for j in 0..k {
                let y = self.embed(0, 0, &self.base.basis(j));
                let prod = self.entry(&self.matrix.mul(&x, &y), 0, 0);
                if prod != self.base.basis_product(i, j) {
                    return Err(Error::InvalidBimodule(format!("corner product e_{i}e_{j} disagrees")));
                }
            }
        }
        Ok(())
    }

    /// `E_uv ⊗ a ↦ E_uv ⊗ f(a)` for a linear endomorphism `f` of `A`.
    pub fn entrywise(&self, f: &LinearMap) -> LinearMap {
        let big = self.matrix.rank();
        let zero = self.matrix.ring().zero();
        let images = (0..big)
            .map(|k| {
                let (u, v, i) = self.unindex(k);
                let mut row = vec![zero; big];
                for (l, &c) in f.image(i).iter().enumerate() {
                    row[self.index(u, v, l)] = c;
                }
                row
            })
            .collect();
        LinearMap::from_images(big, images)
    }

    /// Entrywise extension of a derivation of `A` to `M_n(A)`.
    pub fn transfer_derivation(&self, d: &LinearMap) -> Result<LinearMap> {
        if !self.base.is_derivation(d) {
            return Err(Error::NotADerivation);
        }
        let big = self.entrywise(d);
        debug_assert!(self.matrix.is_derivation(&big));
        Ok(big)
    }

    /// `a ↦ (1,1)` entry of `D(E_11 ⊗ a)`, the compression of `D` to the
    /// corner `e M_n(A) e ≅ A`.
    pub fn corner_derivation(&self, d: &LinearMap) -> Result<LinearMap> {
        if !self.matrix.is_derivation(d) {
            return Err(Error::NotADerivation);
        }
        let e = self.corner_idempotent();
        let k = self.base.rank();
        let images = (0..k)
            .map(|i| {
                let x = self.embed(0, 0, &self.base.basis(i));
                let dx = d.apply(self.matrix.ring(), &x);
                let pressed = self.matrix.mul(&self.matrix.mul(&e, &dx), &e);
                self.entry(&pressed, 0, 0)
            })
            .collect();
        Ok(LinearMap::from_images(k, images))
    }

    /// Entrywise extension of an automorphism of `A/π^s` to `M_n(A/π^s)`.
    pub fn transfer_automorphism(&self, aut: &AutR) -> Result<AutR> {
        let ctx = self.at_precision(aut.precision)?;
        AutR::new(&ctx.matrix, ctx.entrywise(&aut.alpha), aut.r)
    }
}

/// `HH^1(Ā) → HH^1(M_n(Ā))` on classes, for `Ā` of the given context.
#[derive(Clone, Debug)]
pub struct ClassTransfer {
    pub source: Cohomology,
    pub target: Cohomology,
    /// Row `i`: image of the `i`-th generator of the source.
    pub matrix: Mat,
    pub bijective: bool,
}

impl ClassTransfer {
    /// `ctx` must already be at the precision of the coefficients.
    pub fn new(ctx: &MoritaContext) -> Result<Self> {
        let source = Cohomology::regular(&ctx.base, 1)?;
        let target = Cohomology::regular(&ctx.matrix, 1)?;
        let mut rows = Vec::with_capacity(source.ngens());
        for i in 0..source.ngens() {
            let d = crate::hochschild::cochain_derivation(&ctx.base, source.generator(i));
            let big = ctx.transfer_derivation(&d)?;
            rows.push(target.class_of(&derivation_cochain(&big))?.coords);
        }
        let ring = target.ring().clone();
        let image = Subgroup::submodule(&ring, target.exponents(), &rows);
        let bijective = source.log_order() == target.log_order() && image.log_order(&ring) == target.log_order();
        Ok(ClassTransfer { matrix: Mat::from_rows(target.ngens(), rows), source, target, bijective })
    }

    pub fn apply(&self, class: &CohomClass) -> CohomClass {
        let ring = self.target.ring();
        let mut coords = vec![ring.zero(); self.target.ngens()];
        for (i, &c) in class.coords.iter().enumerate() {
            for (x, &m) in coords.iter_mut().zip(self.matrix.row(i)) {
                *x = ring.add(*x, ring.mul(c, m));
            }
        }
        // reduce to canonical coordinates
        let cochain = self.target.representative(&CohomClass { degree: 1, coords });
        self.target.class_of(&cochain).expect("image of a cocycle is a cocycle")
    }

    /// Image of a subgroup given by generator coordinates.
    pub fn image(&self, gens: &[Vec<RingElem>]) -> Subgroup {
        let images: Vec<Vec<RingElem>> = gens
            .iter()
            .map(|g| self.apply(&CohomClass { degree: 1, coords: g.clone() }).coords)
            .collect();
        Subgroup::generated_by(self.target.ring(), self.target.exponents(), &images)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoritaLevel {
    pub s: usize,
    pub base_log_order: u64,
    pub matrix_log_order: u64,
    /// Transfer of `L_s(A)` equals `L_s(M_n(A))`.
    pub matches: bool,
}

#[derive(Clone, Debug)]
pub struct MoritaReport {
    pub r: usize,
    pub n: usize,
    pub base_chain: IntegrableChain,
    pub matrix_chain: IntegrableChain,
    pub transfer: ClassTransfer,
    pub levels: Vec<MoritaLevel>,
    /// Every base witness transfers to an automorphism of `M_n(A)` of the
    /// transferred class.
    pub automorphisms_correspond: bool,
}

impl MoritaReport {
    pub fn verdict(&self) -> bool {
        self.transfer.bijective && self.automorphisms_correspond && self.levels.iter().all(|l| l.matches)
    }
}

pub fn morita_invariance_report(a: &Algebra, r: usize, s_max: usize, n: usize) -> Result<MoritaReport> {
    let ctx = MoritaContext::new(a, n)?;
    let base_chain = integrable_chain(&ctx.base, r, s_max)?;
    let matrix_chain = integrable_chain(&ctx.matrix, r, s_max)?;
    let transfer = ClassTransfer::new(&ctx.at_precision(r)?)?;
    let ring_r = transfer.target.ring();
    let levels = base_chain
        .levels
        .iter()
        .zip(&matrix_chain.levels)
        .map(|((s, lb), (_, lm))| MoritaLevel {
            s: *s,
            base_log_order: lb.log_order(base_chain.hh1.ring()),
            matrix_log_order: lm.log_order(ring_r),
            matches: transfer.image(&lb.generators(base_chain.hh1.ring())) == *lm,
        })
        .collect();
    let mut automorphisms_correspond = true;
    for ((class, _), witness) in base_chain.class_levels.iter().zip(&base_chain.witnesses) {
        let Some(aut) = witness else { continue };
        let beta = ctx.transfer_automorphism(aut)?;
        let got = class_of_automorphism(&ctx.matrix, &beta, &transfer.target)?;
        automorphisms_correspond &= got == transfer.apply(class);
    }
    Ok(MoritaReport { r, n, base_chain, matrix_chain, transfer, levels, automorphisms_correspond })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chainring::ChainRing;
    use crate::hochschild::cochain_derivation;

    fn dual_numbers(p: u64) -> Algebra {
        Algebra::truncated_polynomial(&ChainRing::unramified(p, 1).unwrap(), 2).unwrap()
    }

    #[test]
    fn context_indices() {
        let ctx = MoritaContext::new(&dual_numbers(2), 2).unwrap();
        assert_eq!(ctx.matrix.rank(), 8);
        for k in 0..8 {
            let (u, v, i) = ctx.unindex(k);
            assert_eq!(ctx.index(u, v, i), k);
        }
    }

    #[test]
    fn transfer_and_corner_round_trip() {
        let a = dual_numbers(2);
        let ctx = MoritaContext::new(&a, 2).unwrap();
        let t = ClassTransfer::new(&ctx).unwrap();
        assert!(t.bijective);
        for class in t.source.basis() {
            let d = cochain_derivation(&a, &t.source.representative(&class));
            let big = ctx.transfer_derivation(&d).unwrap();
            assert!(ctx.matrix.is_derivation(&big));
            let image = t.target.class_of(&derivation_cochain(&big)).unwrap();
            assert!(!t.target.is_zero(&image));
            let back = ctx.corner_derivation(&big).unwrap();
            assert_eq!(back, d);
        }
    }

    #[test]
    fn inner_derivations_stay_inner() {
        let a = dual_numbers(3);
        let ctx = MoritaContext::new(&a, 2).unwrap();
        let t = ClassTransfer::new(&ctx).unwrap();
        let c = ctx.embed(0, 1, &a.from_ints(&[1, 2]));
        let inner = ctx.matrix.inner_derivation(&c);
        assert!(t.target.is_zero(&t.target.class_of(&derivation_cochain(&inner)).unwrap()));
        let corner = ctx.corner_derivation(&inner).unwrap();
        assert!(t.source.is_zero(&t.source.class_of(&derivation_cochain(&corner)).unwrap()));
        let zero = LinearMap::zero(2, 2);
        assert_eq!(ctx.transfer_derivation(&zero).unwrap(), LinearMap::zero(8, 8));
    }

    #[test]
    fn rejects_non_derivations() {
        let a = dual_numbers(2);
        let ctx = MoritaContext::new(&a, 2).unwrap();
        assert!(matches!(ctx.transfer_derivation(&a.identity_map()), Err(Error::NotADerivation)));
    }
}
