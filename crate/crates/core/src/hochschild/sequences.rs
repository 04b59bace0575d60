//! The long exact sequence of `0 → A/π^r → A/π^{2r} → A/π^r → 0`, change of
//! level, and the π-shift on `HH^1`.

use crate::algebra::{Algebra, Bimodule};
use crate::chainring::RingElem;
use crate::error::{Error, Result};
use crate::linalg::{format_order, Mat, Subgroup};

use super::bockstein::require_precision;
use super::{coboundary, CohomClass, Cohomology};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LesNode {
    /// `H^n(A;A/π^r)`, `H^n(A;A)` or `H^n(A;A/π^r)` for the three columns.
    pub name: String,
    pub log_order: u64,
    pub order: String,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LesReport {
    pub r: usize,
    pub max_degree: usize,
    pub nodes: Vec<LesNode>,
}

impl LesReport {
    pub fn exact(&self) -> bool {
        self.nodes.iter().all(|n| n.exact)
    }
}

enum Arrow {
    Inclusion,
    Reduction,
    Connecting,
}

struct Les<'a> {
    a2: &'a Algebra,
    r: usize,
    objects: Vec<Cohomology>,
    arrows: Vec<Arrow>,
}

impl Les<'_> {
    /// Apply arrow `k` to a cocycle of object `k`.
    fn apply(&self, k: usize, c: &[RingElem]) -> Result<Vec<RingElem>> {
        let ring = self.a2.ring();
        Ok(match self.arrows[k] {
            Arrow::Inclusion => c.iter().map(|&x| ring.mul(ring.pi_pow(self.r), x)).collect(),
            Arrow::Reduction => c.to_vec(),
            Arrow::Connecting => {
                let m = Bimodule::regular(self.a2);
                let ring_r = ring.with_precision(self.r)?;
                coboundary(self.a2, &m, self.objects[k].degree, c)
                    .into_iter()
                    .map(|x| Ok(ring.lift_from(&ring_r, ring.exact_div_pi(x, self.r)?)))
                    .collect::<Result<_>>()?
            }
        })
    }

    fn image(&self, k: usize) -> Result<(Subgroup, Vec<Vec<RingElem>>)> {
        let src = &self.objects[k];
        let dst = &self.objects[k + 1];
        let mut cochains = Vec::new();
        let mut coords = Vec::new();
        for i in 0..src.ngens() {
            let c = self.apply(k, src.generator(i))?;
            coords.push(dst.class_of(&c)?.coords);
            cochains.push(c);
        }
        Ok((Subgroup::submodule(self.a2.ring(), dst.exponents(), &coords), cochains))
    }
}

/// Exactness of
/// `H^n(A;A/π^r) → H^n(A;A) → H^n(A;A/π^r) → H^{n+1}(A;A/π^r) → …`
/// for `A` read at precision `2r`, at every node with `n <= max_degree`.
pub fn les_exactness_report(a: &Algebra, r: usize, max_degree: usize) -> Result<LesReport> {
    if r == 0 {
        return Err(Error::BadPrecision("r must be positive".into()));
    }
    if max_degree + 1 > super::MAX_DEGREE {
        return Err(Error::DegreeTooHigh(max_degree + 1));
    }
    require_precision(a, 2 * r)?;
    let a2 = a.at_precision(2 * r)?;
    let torsion = Bimodule::regular_level(&a2, r);
    let full = Bimodule::regular(&a2);
    let mut objects = Vec::new();
    let mut arrows = Vec::new();
    let mut names = Vec::new();
    for n in 0..=max_degree {
        objects.push(Cohomology::compute(&a2, &torsion, n)?);
        objects.push(Cohomology::compute(&a2, &full, n)?);
        objects.push(Cohomology::compute(&a2, &torsion, n)?);
        arrows.extend([Arrow::Inclusion, Arrow::Reduction, Arrow::Connecting]);
        names.extend([format!("H^{n}(A;A/π^{r})"), format!("H^{n}(A;A)"), format!("H^{n}(A;A/π^{r})")]);
    }
    objects.push(Cohomology::compute(&a2, &torsion, max_degree + 1)?);
    let les = Les { a2: &a2, r, objects, arrows };
    let images: Vec<(Subgroup, Vec<Vec<RingElem>>)> =
        (0..les.arrows.len()).map(|k| les.image(k)).collect::<Result<_>>()?;
    let ring = a2.ring();
    let mut nodes = Vec::new();
    for (k, name) in names.iter().enumerate() {
        let y = &les.objects[k];
        let out = images[k].0.log_order(ring);
        let exact = if k == 0 {
            out == y.log_order()
        } else {
            let (inc, inc_cochains) = &images[k - 1];
            let composite_zero = inc_cochains.iter().try_fold(true, |ok, c| -> Result<bool> {
                let z = les.apply(k, c)?;
                Ok(ok && les.objects[k + 1].is_zero(&les.objects[k + 1].class_of(&z)?))
            })?;
            composite_zero && inc.log_order(ring) + out == y.log_order()
        };
        nodes.push(LesNode {
            name: name.clone(),
            log_order: y.log_order(),
            order: format_order(ring.p(), y.log_order()),
            exact,
        });
    }
    Ok(LesReport { r, max_degree, nodes })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelComparison {
    pub equal: bool,
    pub first: Vec<usize>,
    pub second: Vec<usize>,
}

/// Compare `HH^n(A/π^{s1}; A/π^r)` with `HH^n(A/π^{s2}; A/π^r)`.
pub fn level_compare(a: &Algebra, r: usize, s1: usize, s2: usize, n: usize) -> Result<LevelComparison> {
    let prec = a.ring().precision();
    for s in [s1, s2] {
        if r == 0 || r > s || s > prec {
            return Err(Error::BadPrecision(format!(
                "need 1 <= r <= s <= {prec}, got r = {r}, s = {s}"
            )));
        }
    }
    let compute = |s: usize| -> Result<Vec<usize>> {
        let b = a.at_precision(s)?;
        Ok(Cohomology::compute(&b, &Bimodule::regular_level(&b, r), n)?.exponents().to_vec())
    };
    let first = compute(s1)?;
    let second = compute(s2)?;
    Ok(LevelComparison { equal: first == second, first, second })
}

#[derive(Clone, Debug)]
pub struct PiShift {
    /// Row `i`: coordinates of the image of the `i`-th generator.
    pub matrix: Mat,
    pub source: Cohomology,
    pub target: Cohomology,
    pub image_log_order: u64,
    pub injective: bool,
}

impl PiShift {
    pub fn apply(&self, class: &CohomClass) -> Result<CohomClass> {
        let ring_r = self.source.ring();
        let ring = self.target.ring();
        let c: Vec<RingElem> = self
            .source
            .representative(class)
            .iter()
            .map(|&x| ring.mul(ring.pi(), ring.lift_from(ring_r, x)))
            .collect();
        self.target.class_of(&c)
    }
}

/// `HH^1(A/π^r) → HH^1(A/π^{r+1})`, `c ↦ π·c`.
pub fn pi_shift_hh1(a: &Algebra, r: usize) -> Result<PiShift> {
    if r == 0 {
        return Err(Error::BadPrecision("r must be positive".into()));
    }
    require_precision(a, r + 1)?;
    let source = Cohomology::regular(&a.at_precision(r)?, 1)?;
    let target = Cohomology::regular(&a.at_precision(r + 1)?, 1)?;
    let mut shift = PiShift {
        matrix: Mat::zeros(0, target.ngens()),
        source,
        target,
        image_log_order: 0,
        injective: false,
    };
    let rows: Vec<Vec<RingElem>> =
        shift.source.basis().iter().map(|c| shift.apply(c).map(|x| x.coords)).collect::<Result<_>>()?;
    let ring = shift.target.ring().clone();
    let image = Subgroup::submodule(&ring, shift.target.exponents(), &rows);
    shift.matrix = Mat::from_rows(shift.target.ngens(), rows);
    shift.image_log_order = image.log_order(&ring);
    shift.injective = shift.image_log_order == shift.source.log_order();
    Ok(shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chainring::ChainRing;

    #[test]
    fn les_is_exact_on_small_algebras() {
        let z4 = ChainRing::unramified(2, 2).unwrap();
        for a in [Algebra::truncated_polynomial(&z4, 2).unwrap(), Algebra::cyclic_group(&z4, 2).unwrap()] {
            let rep = les_exactness_report(&a, 1, 2).unwrap();
            assert_eq!(rep.nodes.len(), 9);
            assert!(rep.exact(), "{rep:?}");
        }
    }

    #[test]
    fn les_needs_precision() {
        let a = Algebra::truncated_polynomial(&ChainRing::unramified(2, 1).unwrap(), 2).unwrap();
        assert!(matches!(les_exactness_report(&a, 1, 2), Err(Error::InsufficientPrecision { .. })));
    }

    #[test]
    fn level_independence() {
        let a = Algebra::truncated_polynomial(&ChainRing::unramified(2, 2).unwrap(), 2).unwrap();
        let c = level_compare(&a, 1, 1, 2, 1).unwrap();
        assert!(c.equal);
        assert_eq!(c.first, vec![1, 1]);
        assert!(level_compare(&a, 2, 1, 2, 1).is_err());
    }

    #[test]
    fn pi_shift_on_group_algebras() {
        let g = Algebra::cyclic_group(&ChainRing::unramified(2, 2).unwrap(), 2).unwrap();
        let s = pi_shift_hh1(&g, 1).unwrap();
        assert!(s.injective);
        assert!(s.target.is_zero(&s.apply(&s.source.zero()).unwrap()));
    }
}
