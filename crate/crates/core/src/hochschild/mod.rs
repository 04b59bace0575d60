//! Hochschild cohomology from the bar cochain complex `Hom(A^{⊗n}, M)`.
//!
//! A degree-`n` cochain is a vector of length `rank^n · dim(M)`: the value
//! at the basis tuple `(i_1, …, i_n)` occupies the block with index
//! `i_1·rank^{n-1} + … + i_n`.

mod bockstein;
mod naming;
mod sequences;

pub(crate) use bockstein::check_identity_mod;
pub use bockstein::{bockstein, bockstein_cochain, bockstein_of_lift, twisted_bockstein};
pub use naming::{describe_class, describe_derivation};
pub use sequences::{
    les_exactness_report, level_compare, pi_shift_hh1, LesNode, LesReport, LevelComparison, PiShift,
};

use crate::algebra::{Algebra, Bimodule, LinearMap};
use crate::chainring::{ChainRing, RingElem};
use crate::error::{Error, Result};
use crate::linalg::{
    axpy, howell_form, subquotient_presentation, vec_mat, Mat, ModulePresentation,
    QuotientCoordinates, SpanSolver,
};

pub const MAX_DEGREE: usize = 3;

pub fn cochain_len(a: &Algebra, m: &Bimodule, deg: usize) -> usize {
    a.rank().pow(deg as u32) * m.dim
}

/// `δc` for a degree-`deg` cochain `c`:
/// `(δc)(a_1..a_{n+1}) = a_1·c(a_2..) + Σ (−1)^i c(..a_i a_{i+1}..) + (−1)^{n+1} c(a_1..a_n)·a_{n+1}`.
pub fn coboundary(a: &Algebra, m: &Bimodule, deg: usize, c: &[RingElem]) -> Vec<RingElem> {
    let ring = a.ring();
    let n = a.rank();
    let dim = m.dim;
    assert_eq!(c.len(), cochain_len(a, m, deg), "cochain length");
    let tail = n.pow(deg as u32);
    let targets = tail * n;
    let mut out = vec![ring.zero(); targets * dim];
    let mut idx = vec![0usize; deg + 1];
    let minus_one = ring.from_int(-1);
    for sigma in 0..targets {
        let mut rest = sigma;
        for slot in (0..=deg).rev() {
            idx[slot] = rest % n;
            rest /= n;
        }
        let acc = &mut out[sigma * dim..(sigma + 1) * dim];
        // a_1 · c(a_2, …)
        let tau = sigma % tail;
        let val = &c[tau * dim..(tau + 1) * dim];
        if val.iter().any(|x| x.0 != 0) {
            let v = vec_mat(ring, val, &m.left[idx[0]]);
            axpy(ring, acc, ring.one(), &v);
        }
        // inner faces
        for j in 0..deg {
            let sign = if (j + 1) % 2 == 0 { ring.one() } else { minus_one };
            let prod = a.basis_product(idx[j], idx[j + 1]);
            for (l, &coef) in prod.iter().enumerate() {
                if coef.0 == 0 {
                    continue;
                }
                let mut t = 0;
                for (slot, &i) in idx.iter().enumerate() {
                    if slot == j {
                        t = t * n + l;
                    } else if slot != j + 1 {
                        t = t * n + i;
                    }
                }
                axpy(ring, acc, ring.mul(sign, coef), &c[t * dim..(t + 1) * dim]);
            }
        }
        // c(a_1, …, a_n) · a_{n+1}
        let tau = sigma / n;
        let val = &c[tau * dim..(tau + 1) * dim];
        if val.iter().any(|x| x.0 != 0) {
            let v = vec_mat(ring, val, &m.right[idx[deg]]);
            let sign = if (deg + 1) % 2 == 0 { ring.one() } else { minus_one };
            axpy(ring, acc, sign, &v);
        }
    }
    out
}

/// Matrix of `δ^deg`; row `k` is the coboundary of the `k`-th basis cochain.
pub fn differential(a: &Algebra, m: &Bimodule, deg: usize) -> Result<Mat> {
    if deg > MAX_DEGREE {
        return Err(Error::DegreeTooHigh(deg));
    }
    let ring = a.ring();
    let len = cochain_len(a, m, deg);
    let rows = (0..len)
        .map(|k| {
            let mut e = vec![ring.zero(); len];
            e[k] = ring.one();
            coboundary(a, m, deg, &e)
        })
        .collect();
    Ok(Mat::from_rows(cochain_len(a, m, deg + 1), rows))
}

fn scalar_rows(c: RingElem, k: usize) -> Mat {
    let mut m = Mat::zeros(k, k);
    for i in 0..k {
        m[(i, i)] = c;
    }
    m
}

/// A cohomology class, given by canonical coordinates in a [`Cohomology`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CohomClass {
    pub degree: usize,
    pub coords: Vec<RingElem>,
}

/// `HH^n(A; M)` with a canonical presentation.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub degree: usize,
    pub presentation: ModulePresentation,
    ring: ChainRing,
    level: usize,
    delta: Mat,
    coords: QuotientCoordinates,
}

impl Cohomology {
    pub fn compute(a: &Algebra, m: &Bimodule, deg: usize) -> Result<Self> {
        if deg > MAX_DEGREE {
            return Err(Error::DegreeTooHigh(deg));
        }
        m.validate(a)?;
        let ring = a.ring();
        let s = ring.precision();
        let t = m.level;
        let k = cochain_len(a, m, deg);
        let delta = differential(a, m, deg)?;
        let torsion = (t < s).then(|| scalar_rows(ring.pi_pow(t), k));
        let z = match &torsion {
            None => SpanSolver::new(ring, &delta).kernel().matrix,
            Some(pt) => {
                let k1 = delta.cols();
                let stacked = delta.vstack(&scalar_rows(ring.pi_pow(t), k1));
                let ker = SpanSolver::new(ring, &stacked).kernel().matrix;
                let mut z = Mat::from_rows(k, (0..ker.rows()).map(|i| ker.row(i)[..k].to_vec()).collect());
                for i in 0..k {
                    z.push_row(pt.row(i));
                }
                z
            }
        };
        let mut b = if deg == 0 { Mat::zeros(0, k) } else { differential(a, m, deg - 1)? };
        if let Some(pt) = &torsion {
            b = b.vstack(pt);
        }
        let b = howell_form(ring, &b).matrix;
        let presentation = subquotient_presentation(ring, &z, &b)?;
        let coords = QuotientCoordinates::new(ring, &presentation, &b);
        Ok(Cohomology { degree: deg, presentation, ring: ring.clone(), level: t, delta, coords })
    }

    /// `HH^n(A)` with coefficients in the regular bimodule.
    pub fn regular(a: &Algebra, deg: usize) -> Result<Self> {
        Self::compute(a, &Bimodule::regular(a), deg)
    }

    pub fn ring(&self) -> &ChainRing {
        &self.ring
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn exponents(&self) -> &[usize] {
        &self.presentation.exponents
    }

    pub fn log_order(&self) -> u64 {
        self.presentation.log_order()
    }

    pub fn ngens(&self) -> usize {
        self.presentation.exponents.len()
    }

    pub fn is_cocycle(&self, c: &[RingElem]) -> bool {
        vec_mat(&self.ring, c, &self.delta).iter().all(|&x| self.ring.truncate(x, self.level).0 == 0)
    }

    pub fn class_of(&self, c: &[RingElem]) -> Result<CohomClass> {
        if c.len() != self.delta.rows() {
            return Err(Error::DimensionMismatch(format!(
                "cochain of length {} in a complex of width {}",
                c.len(),
                self.delta.rows()
            )));
        }
        if !self.is_cocycle(c) {
            return Err(Error::NotACocycle);
        }
        let coords = self.coords.coordinates(c).ok_or(Error::NotACocycle)?;
        Ok(CohomClass { degree: self.degree, coords })
    }

    pub fn zero(&self) -> CohomClass {
        CohomClass { degree: self.degree, coords: vec![self.ring.zero(); self.ngens()] }
    }

    pub fn basis(&self) -> Vec<CohomClass> {
        (0..self.ngens())
            .map(|i| {
                let mut coords = vec![self.ring.zero(); self.ngens()];
                coords[i] = self.ring.one();
                CohomClass { degree: self.degree, coords }
            })
            .collect()
    }

    /// The canonical cocycle `Σ c_i g_i`.
    pub fn representative(&self, class: &CohomClass) -> Vec<RingElem> {
        vec_mat(&self.ring, &class.coords, &self.presentation.generators)
    }

    pub fn generator(&self, i: usize) -> &[RingElem] {
        self.presentation.generators.row(i)
    }

    fn normalize(&self, coords: Vec<RingElem>) -> CohomClass {
        CohomClass {
            degree: self.degree,
            coords: coords
                .into_iter()
                .zip(&self.presentation.exponents)
                .map(|(x, &d)| self.ring.truncate(x, d))
                .collect(),
        }
    }

    pub fn add(&self, x: &CohomClass, y: &CohomClass) -> CohomClass {
        self.normalize(x.coords.iter().zip(&y.coords).map(|(&a, &b)| self.ring.add(a, b)).collect())
    }

    pub fn neg(&self, x: &CohomClass) -> CohomClass {
        self.normalize(x.coords.iter().map(|&a| self.ring.neg(a)).collect())
    }

    pub fn scale(&self, c: RingElem, x: &CohomClass) -> CohomClass {
        self.normalize(x.coords.iter().map(|&a| self.ring.mul(c, a)).collect())
    }

    pub fn is_zero(&self, x: &CohomClass) -> bool {
        x.coords.iter().all(|c| c.0 == 0)
    }

    /// Every class, in lexicographic order of canonical coordinates.
    pub fn elements(&self) -> Vec<CohomClass> {
        crate::linalg::enumerate_module(&self.ring, &self.presentation.exponents)
            .into_iter()
            .map(|coords| CohomClass { degree: self.degree, coords })
            .collect()
    }
}

/// Degree-1 cochain of a linear map `d : A → A`.
pub fn derivation_cochain(d: &LinearMap) -> Vec<RingElem> {
    d.matrix.entries().to_vec()
}

/// Linear map of a degree-1 cochain with values in `A`.
pub fn cochain_derivation(a: &Algebra, c: &[RingElem]) -> LinearMap {
    let n = a.rank();
    LinearMap::new(Mat::from_rows(n, c.chunks(n).map(|x| x.to_vec()).collect()))
}

/// Alexander–Whitney cup product of cochains with values in `A`:
/// `(ζ⌣η)(a_1..a_{m+n}) = ζ(a_1..a_m)·η(a_{m+1}..a_{m+n})`.
pub fn cup_cochains(a: &Algebra, zeta: &[RingElem], m: usize, eta: &[RingElem], n: usize) -> Result<Vec<RingElem>> {
    if m + n > MAX_DEGREE {
        return Err(Error::DegreeTooHigh(m + n));
    }
    let k = a.rank();
    let left = k.pow(m as u32);
    let right = k.pow(n as u32);
    if zeta.len() != left * k || eta.len() != right * k {
        return Err(Error::DimensionMismatch("cup product needs A-valued cochains".into()));
    }
    let mut out = Vec::with_capacity(left * right * k);
    for t1 in 0..left {
        for t2 in 0..right {
            out.extend(a.mul(&zeta[t1 * k..(t1 + 1) * k], &eta[t2 * k..(t2 + 1) * k]));
        }
    }
    Ok(out)
}

/// Cup product of classes; `target` must be the cohomology in degree `m+n`
/// with the same coefficients.
pub fn cup_product(
    a: &Algebra,
    hm: &Cohomology,
    zeta: &CohomClass,
    hn: &Cohomology,
    eta: &CohomClass,
    target: &Cohomology,
) -> Result<CohomClass> {
    let c = cup_cochains(a, &hm.representative(zeta), hm.degree, &hn.representative(eta), hn.degree)?;
    target.class_of(&c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dual_numbers(p: u64, n: usize) -> Algebra {
        Algebra::truncated_polynomial(&ChainRing::unramified(p, n).unwrap(), 2).unwrap()
    }

    #[test]
    fn delta_zero_of_central_element_vanishes() {
        let a = dual_numbers(2, 2);
        let m = Bimodule::regular(&a);
        assert!(coboundary(&a, &m, 0, a.unit()).iter().all(|x| x.0 == 0));
        assert!(coboundary(&a, &m, 0, &a.basis(1)).iter().all(|x| x.0 == 0));
    }

    #[test]
    fn delta_one_of_d0_is_2x_at_xx() {
        let a = dual_numbers(2, 2);
        let m = Bimodule::regular(&a);
        let d0 = LinearMap::from_images(2, vec![a.zero_vec(), a.basis(0)]);
        let dc = coboundary(&a, &m, 1, &derivation_cochain(&d0));
        // tuple (x, x) has index 1*2 + 1 = 3
        assert_eq!(&dc[6..8], &a.from_ints(&[0, 2])[..]);
        assert!(dc[..6].iter().all(|x| x.0 == 0));
        let d1 = LinearMap::from_images(2, vec![a.zero_vec(), a.basis(1)]);
        assert!(coboundary(&a, &m, 1, &derivation_cochain(&d1)).iter().all(|x| x.0 == 0));
    }

    #[test]
    fn delta_squared_vanishes() {
        let r = ChainRing::unramified(2, 2).unwrap();
        for a in [
            Algebra::truncated_polynomial(&r, 2).unwrap(),
            Algebra::cyclic_group(&r, 2).unwrap(),
            Algebra::truncated_polynomial(&r, 1).unwrap().matrix_algebra(2).unwrap(),
        ] {
            let m = Bimodule::regular(&a);
            let max = if a.rank() > 2 { 2 } else { 3 };
            for deg in 0..max {
                let d0 = differential(&a, &m, deg).unwrap();
                let d1 = differential(&a, &m, deg + 1).unwrap();
                assert!(d0.mul(&r, &d1).is_zero(), "degree {deg}");
            }
        }
    }

    #[test]
    fn hh1_of_dual_numbers_over_f2() {
        let a = dual_numbers(2, 1);
        let h = Cohomology::regular(&a, 1).unwrap();
        assert_eq!(h.exponents(), &[1, 1]);
        let names: Vec<String> = h.basis().iter().map(|c| describe_class(&a, &h, c)).collect();
        assert_eq!(names, vec!["d_0", "d_1"]);
    }

    #[test]
    fn hh1_of_truncated_cube_over_f3() {
        let a = Algebra::truncated_polynomial(&ChainRing::unramified(3, 1).unwrap(), 3).unwrap();
        let h = Cohomology::regular(&a, 1).unwrap();
        assert_eq!(h.log_order(), 3);
        let names: Vec<String> = h.basis().iter().map(|c| describe_class(&a, &h, c)).collect();
        assert_eq!(names, vec!["d_0", "d_1", "d_2"]);
    }

    #[test]
    fn hh0_of_matrix_algebra_is_scalars() {
        let f2 = ChainRing::unramified(2, 1).unwrap();
        let m2 = Algebra::truncated_polynomial(&f2, 1).unwrap().matrix_algebra(2).unwrap();
        let h = Cohomology::regular(&m2, 0).unwrap();
        assert_eq!(h.exponents(), &[1]);
        assert_eq!(h.generator(0), m2.unit());
    }

    #[test]
    fn hh0_is_the_center() {
        let r = ChainRing::unramified(3, 2).unwrap();
        let a = Algebra::truncated_polynomial(&r, 3).unwrap();
        let h = Cohomology::regular(&a, 0).unwrap();
        assert_eq!(h.log_order(), a.center().log_order(&r));
    }

    #[test]
    fn cup_products_on_dual_numbers() {
        let a = dual_numbers(2, 1);
        let h0 = Cohomology::regular(&a, 0).unwrap();
        let h1 = Cohomology::regular(&a, 1).unwrap();
        let h2 = Cohomology::regular(&a, 2).unwrap();
        let one = h0.class_of(a.unit()).unwrap();
        let d0 = h1.basis()[0].clone();
        let d1 = h1.basis()[1].clone();
        assert_eq!(cup_product(&a, &h0, &one, &h1, &d1, &h1).unwrap(), d1);
        assert!(h2.is_zero(&cup_product(&a, &h1, &d1, &h1, &d1, &h2).unwrap()));
        // d_0 ⌣ d_0 is (x,x) ↦ 1; brute force: it is a coboundary iff
        // some 1-cochain f has δf equal to it.
        let c = cup_cochains(&a, &h1.representative(&d0), 1, &h1.representative(&d0), 1).unwrap();
        let m = Bimodule::regular(&a);
        let f2 = a.ring();
        let mut brute = false;
        for mask in 0u32..16 {
            let f: Vec<RingElem> = (0..4).map(|i| f2.from_int(((mask >> i) & 1) as i64)).collect();
            if coboundary(&a, &m, 1, &f) == c {
                brute = true;
            }
        }
        let ours = cup_product(&a, &h1, &d0, &h1, &d0, &h2).unwrap();
        assert_eq!(h2.is_zero(&ours), brute);
    }

    #[test]
    fn not_a_cocycle_is_rejected() {
        let a = dual_numbers(2, 2);
        let h = Cohomology::regular(&a, 1).unwrap();
        let d0 = LinearMap::from_images(2, vec![a.zero_vec(), a.basis(0)]);
        assert_eq!(h.class_of(&derivation_cochain(&d0)), Err(Error::NotACocycle));
        assert_eq!(Cohomology::regular(&a, 4).unwrap_err(), Error::DegreeTooHigh(4));
    }
}
