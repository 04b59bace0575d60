//! Connecting homomorphisms for `0 → A/π^r → A/π^{2r} → A/π^r → 0` and its
//! twisted variant.

use crate::algebra::{Algebra, Bimodule, LinearMap};
use crate::chainring::RingElem;
use crate::error::{Error, Result};

use super::{coboundary, CohomClass, Cohomology};

pub(crate) fn require_precision(a: &Algebra, needed: usize) -> Result<()> {
    let available = a.ring().precision();
    if available < needed {
        return Err(Error::InsufficientPrecision { required: needed, available });
    }
    Ok(())
}

/// `δ(lift)/π^r` for a cochain `lift` over `A/π^{2r}` whose reduction is a
/// cocycle modulo `π^r`; the result has values over `R/π^r`.
pub fn bockstein_of_lift(a2: &Algebra, r: usize, lift: &[RingElem], deg: usize) -> Result<Vec<RingElem>> {
    let ring2 = a2.ring();
    let m = Bimodule::regular(a2);
    coboundary(a2, &m, deg, lift).into_iter().map(|x| ring2.exact_div_pi(x, r)).collect()
}

/// Bockstein of a cocycle over `A/π^r` using the canonical digit lift.
pub fn bockstein_cochain(a: &Algebra, r: usize, cochain: &[RingElem], deg: usize) -> Result<Vec<RingElem>> {
    require_precision(a, 2 * r)?;
    let a2 = a.at_precision(2 * r)?;
    let ring_r = a.ring().with_precision(r)?;
    let lift: Vec<RingElem> = cochain.iter().map(|&x| a2.ring().lift_from(&ring_r, x)).collect();
    bockstein_of_lift(&a2, r, &lift, deg)
}

/// `β_n : HH^n(A/π^r) → HH^{n+1}(A/π^r)`; `source` and `target` are the
/// regular cohomologies of `A/π^r` in degrees `n` and `n + 1`.
pub fn bockstein(
    a: &Algebra,
    r: usize,
    source: &Cohomology,
    class: &CohomClass,
    target: &Cohomology,
) -> Result<CohomClass> {
    let c = bockstein_cochain(a, r, &source.representative(class), source.degree)?;
    target.class_of(&c)
}

/// Check `α ≡ id (mod π^r)`; the error names the first offending basis element.
pub(crate) fn check_identity_mod(a: &Algebra, alpha: &LinearMap, r: usize) -> Result<()> {
    let ring = a.ring();
    for i in 0..a.rank() {
        let diff = a.sub(alpha.image(i), &a.basis(i));
        if diff.iter().any(|&x| ring.valuation(x) < r) {
            return Err(Error::NotIdentityModPiR(i));
        }
    }
    Ok(())
}

/// Image of the identity under the connecting map of
/// `0 → A/π^r → (A/π^{2r})_α → A/π^r → 0`, as a class in `target = HH^1(A/π^r)`.
///
/// The degree-0 differential of the Hom complex is precomposition with
/// `−δ_1`, so the lift `1` of the identity goes to `b ↦ α(b) − b`.
pub fn twisted_bockstein(a: &Algebra, r: usize, alpha: &LinearMap, target: &Cohomology) -> Result<CohomClass> {
    require_precision(a, 2 * r)?;
    let a2 = a.at_precision(2 * r)?;
    let alpha2 = alpha.convert(a.ring(), a2.ring());
    check_identity_mod(&a2, &alpha2, r)?;
    let m = Bimodule::twisted(&a2, &alpha2, 2 * r)?;
    let ring2 = a2.ring();
    let c: Vec<RingElem> = coboundary(&a2, &m, 0, a2.unit())
        .into_iter()
        .map(|x| ring2.exact_div_pi(ring2.neg(x), r))
        .collect::<Result<_>>()?;
    target.class_of(&c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chainring::ChainRing;

    #[test]
    fn bocksteins_on_dual_numbers() {
        let a = Algebra::truncated_polynomial(&ChainRing::unramified(2, 2).unwrap(), 2).unwrap();
        let ar = a.reduce(1).unwrap();
        let h0 = Cohomology::regular(&ar, 0).unwrap();
        let h1 = Cohomology::regular(&ar, 1).unwrap();
        let h2 = Cohomology::regular(&ar, 2).unwrap();
        let basis = h1.basis();
        assert!(h2.is_zero(&bockstein(&a, 1, &h1, &basis[1], &h2).unwrap()));
        let b0 = bockstein_cochain(&a, 1, &h1.representative(&basis[0]), 1).unwrap();
        // (x,x) ↦ x, everything else 0
        assert_eq!(b0, ar.from_ints(&[0, 0, 0, 0, 0, 0, 0, 1]));
        assert!(!h2.is_zero(&h2.class_of(&b0).unwrap()));
        let one = h0.class_of(ar.unit()).unwrap();
        assert!(h1.is_zero(&bockstein(&a, 1, &h0, &one, &h1).unwrap()));
    }

    #[test]
    fn twisted_bocksteins() {
        let z4 = ChainRing::unramified(2, 2).unwrap();
        let g = Algebra::cyclic_group(&z4, 2).unwrap();
        let h = Cohomology::regular(&g.reduce(1).unwrap(), 1).unwrap();
        assert!(h.is_zero(&twisted_bockstein(&g, 1, &g.identity_map(), &h).unwrap()));
        let alpha = LinearMap::from_images(2, vec![g.basis(0), g.from_ints(&[0, 3])]);
        let c = twisted_bockstein(&g, 1, &alpha, &h).unwrap();
        assert_eq!(super::super::describe_class(&g.reduce(1).unwrap(), &h, &c), "y↦y");
        let p = Algebra::truncated_polynomial(&z4, 2).unwrap();
        let hp = Cohomology::regular(&p.reduce(1).unwrap(), 1).unwrap();
        let alpha = LinearMap::from_images(2, vec![p.basis(0), p.from_ints(&[0, 3])]);
        let c = twisted_bockstein(&p, 1, &alpha, &hp).unwrap();
        assert_eq!(c, hp.basis()[1]);
        let bad = LinearMap::from_images(2, vec![p.basis(0), p.from_ints(&[1, 1])]);
        assert_eq!(twisted_bockstein(&p, 1, &bad, &hp), Err(Error::NotIdentityModPiR(1)));
    }
}
