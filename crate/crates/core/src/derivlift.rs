//! Automorphisms congruent to the identity modulo `π^r`, their derivation
//! classes, layer-by-layer lifting, and the integrable subgroups
//! `L_s ⊆ HH^1(A/π^r)`.

use crate::algebra::{Algebra, LinearMap};
use crate::chainring::RingElem;
use crate::error::{Error, Result};
use crate::hochschild::{
    self, cochain_derivation, derivation_cochain, differential, CohomClass, Cohomology,
};
use crate::linalg::{enumerate_span, howell_form, Mat, SpanSolver, Subgroup};

/// An automorphism of `A/π^s` that is the identity modulo `π^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutR {
    pub alpha: LinearMap,
    pub r: usize,
    /// The precision `s` at which `alpha` is an automorphism.
    pub precision: usize,
}

impl AutR {
    /// Validate `alpha` as an automorphism of `a` (read at its own precision)
    /// inducing the identity on `A/π^r`.
    pub fn new(a: &Algebra, alpha: LinearMap, r: usize) -> Result<Self> {
        let n = a.rank();
        if alpha.matrix.rows() != n || alpha.matrix.cols() != n {
            return Err(Error::DimensionMismatch("automorphism has wrong size".into()));
        }
        if let Some((i, j)) = a.morphism_defect(&alpha) {
            return Err(Error::NotAMorphism(if i == n {
                "α(1) != 1".into()
            } else {
                format!("α(e_{i} e_{j}) != α(e_{i}) α(e_{j})")
            }));
        }
        if alpha.inverse(a.ring()).is_none() {
            return Err(Error::NotInvertible);
        }
        let ring = a.ring();
        for i in 0..n {
            let diff = a.sub(alpha.image(i), &a.basis(i));
            if let Some(v) = diff.iter().map(|&x| ring.valuation(x)).min() {
                if v < r {
                    return Err(Error::NotLevelR(
                        i,
                        format!("α(e_{i}) − e_{i} has valuation {v} < {r}"),
                    ));
                }
            }
        }
        Ok(AutR { alpha, r, precision: ring.precision() })
    }

    /// `id + π^r δ̂` at precision `2r`, for a derivation `δ` with entries in
    /// `R/π^r`.
    pub fn from_derivation(a: &Algebra, r: usize, delta: &LinearMap) -> Result<Self> {
        let a2 = a.at_precision(2 * r)?;
        let ring2 = a2.ring();
        let ring_r = ring2.with_precision(r)?;
        let lifted = delta.matrix.map(|x| ring2.mul(ring2.pi_pow(r), ring2.lift_from(&ring_r, x)));
        let alpha = LinearMap::new(Mat::identity(ring2, a.rank()).add(ring2, &lifted));
        Self::new(&a2, alpha, r)
    }

    pub fn compose(&self, a: &Algebra, other: &AutR) -> Result<AutR> {
        if self.precision != other.precision {
            return Err(Error::BadPrecision("automorphisms live at different precisions".into()));
        }
        let b = a.at_precision(self.precision)?;
        AutR::new(&b, self.alpha.compose(b.ring(), &other.alpha), self.r.min(other.r))
    }
}

/// `HH^1(A/π^r)`, the home of the classes below.
pub fn hh1_mod(a: &Algebra, r: usize) -> Result<Cohomology> {
    Cohomology::regular(&a.reduce(r)?, 1)
}

/// `μ̄ = ((α − id)/π^r) mod π^r`, a derivation of `A/π^r`.
pub fn derivation_of_automorphism(a: &Algebra, aut: &AutR) -> Result<LinearMap> {
    let r = aut.r;
    if aut.precision < 2 * r {
        return Err(Error::InsufficientPrecision { required: 2 * r, available: aut.precision });
    }
    let b = a.at_precision(aut.precision)?;
    let ring = b.ring();
    let ring_r = ring.with_precision(r)?;
    let diff = aut.alpha.matrix.sub(ring, &Mat::identity(ring, b.rank()));
    let qring = ring.with_precision(ring.precision() - r)?;
    let mut rows = Vec::with_capacity(b.rank());
    for i in 0..b.rank() {
        let row = diff
            .row(i)
            .iter()
            .map(|&x| {
                let q = ring.exact_div_pi(x, r).map_err(|_| Error::NotLevelR(i, "α ≢ id mod π^r".into()))?;
                Ok(qring.reduce_into(&ring_r, q))
            })
            .collect::<Result<Vec<RingElem>>>()?;
        rows.push(row);
    }
    Ok(LinearMap::new(Mat::from_rows(b.rank(), rows)))
}

/// Class of `μ̄` in `target = HH^1(A/π^r)`.
pub fn class_of_automorphism(a: &Algebra, aut: &AutR, target: &Cohomology) -> Result<CohomClass> {
    let mu = derivation_of_automorphism(a, aut)?;
    target.class_of(&derivation_cochain(&mu))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InnerTest {
    No,
    /// A unit `c` with `α(a) = c a c^{-1}`.
    Yes(Vec<RingElem>),
    /// The candidate set was too large to search.
    Indeterminate,
}

pub const INNER_SEARCH_LIMIT: u64 = 1 << 16;

/// Decide whether `alpha` is conjugation by a unit of `b`.
pub fn is_inner(b: &Algebra, alpha: &LinearMap) -> InnerTest {
    let ring = b.ring();
    let n = b.rank();
    // c ↦ (α(e_i) c − c e_i)_i
    let mut m = Mat::zeros(n, n * n);
    for k in 0..n {
        let c = b.basis(k);
        for i in 0..n {
            let v = b.sub(&b.mul(alpha.image(i), &c), &b.mul(&c, &b.basis(i)));
            m.row_mut(k)[i * n..(i + 1) * n].copy_from_slice(&v);
        }
    }
    let kernel = SpanSolver::new(ring, &m).kernel();
    let log = kernel.log_order(ring);
    let size = (ring.p() as f64).powi(log as i32);
    if size > INNER_SEARCH_LIMIT as f64 {
        return InnerTest::Indeterminate;
    }
    enumerate_span(ring, &kernel)
        .into_iter()
        .find(|c| b.is_unit(c))
        .map_or(InnerTest::No, InnerTest::Yes)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftOutcome {
    Lifted(AutR),
    /// Class of the multiplicativity defect in `HH^2(A/π)`.
    Obstructed(CohomClass),
}

/// Precomputed data for lifting automorphisms one π-adic digit at a time.
struct Lifter {
    levels: Vec<Algebra>,
    residue: Algebra,
    delta1: SpanSolver,
    /// Representative derivations of every class of `HH^1(A/π)`.
    reps: Vec<Vec<RingElem>>,
}

impl Lifter {
    fn new(a: &Algebra, top: usize) -> Result<Self> {
        let levels = (1..=top).map(|k| a.at_precision(k)).collect::<Result<Vec<_>>>()?;
        let residue = levels[0].clone();
        let m = crate::algebra::Bimodule::regular(&residue);
        let delta1 = SpanSolver::new(residue.ring(), &differential(&residue, &m, 1)?);
        Ok(Lifter { levels, residue, delta1, reps: Vec::new() })
    }

    fn with_reps(mut self) -> Result<Self> {
        let h = Cohomology::regular(&self.residue, 1)?;
        self.reps = h.elements().iter().map(|c| h.representative(c)).collect();
        Ok(self)
    }

    fn algebra(&self, k: usize) -> &Algebra {
        &self.levels[k - 1]
    }

    /// Digit lift of `alpha` (at precision `m`) to `m + 1`, together with the
    /// reduced multiplicativity defect `D̄ = (α̂(ab) − α̂(a)α̂(b))/π^m`.
    fn defect(&self, alpha: &LinearMap, m: usize) -> Result<(LinearMap, Vec<RingElem>)> {
        let lo = self.algebra(m);
        let hi = self.algebra(m + 1);
        let ring = hi.ring();
        let lifted = alpha.convert(lo.ring(), ring);
        let n = hi.rank();
        let mut d = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                let lhs = lifted.apply(ring, hi.basis_product(i, j));
                let rhs = hi.mul(lifted.image(i), lifted.image(j));
                for (x, y) in lhs.into_iter().zip(rhs) {
                    // the quotient lives at precision (m + 1) − m = 1
                    d.push(ring.exact_div_pi(ring.sub(x, y), m)?);
                }
            }
        }
        Ok((lifted, d))
    }

    /// `α̂ + π^m γ` at precision `m + 1`.
    fn correct(&self, lifted: &LinearMap, gamma: &[RingElem], m: usize) -> LinearMap {
        let hi = self.algebra(m + 1);
        let ring = hi.ring();
        let res = self.residue.ring();
        let n = hi.rank();
        let g = Mat::from_rows(
            n,
            gamma.chunks(n).map(|row| row.iter().map(|&x| ring.mul(ring.pi_pow(m), ring.lift_from(res, x))).collect()).collect(),
        );
        LinearMap::new(lifted.matrix.add(ring, &g))
    }

    /// Particular correction `γ_0` solving `δγ = D̄`, if any.
    fn solve_layer(&self, alpha: &LinearMap, m: usize) -> Result<(LinearMap, Option<Vec<RingElem>>, Vec<RingElem>)> {
        let (lifted, d) = self.defect(alpha, m)?;
        let gamma = self.delta1.solve(&d);
        Ok((lifted, gamma, d))
    }

    /// Highest precision (capped at `top`) to which `alpha`, an automorphism
    /// at precision `m`, extends after some choice of corrections.
    fn max_level(&self, alpha: &LinearMap, m: usize, top: usize) -> Result<(usize, LinearMap)> {
        if m >= top {
            return Ok((m, alpha.clone()));
        }
        let (lifted, gamma0, _) = self.solve_layer(alpha, m)?;
        let Some(gamma0) = gamma0 else { return Ok((m, alpha.clone())) };
        let res = self.residue.ring();
        let mut best: Option<(usize, LinearMap)> = None;
        for rep in &self.reps {
            let gamma: Vec<RingElem> = gamma0.iter().zip(rep).map(|(&x, &y)| res.add(x, y)).collect();
            let child = self.correct(&lifted, &gamma, m);
            let found = self.max_level(&child, m + 1, top)?;
            if best.as_ref().map_or(true, |b| found.0 > b.0) {
                best = Some(found);
            }
            if best.as_ref().unwrap().0 >= top {
                break;
            }
        }
        Ok(best.expect("HH^1 has at least the zero class"))
    }
}

/// Lift `aut` (at precision `s`) to an automorphism at precision `s + 1`, or
/// report the obstruction class in `HH^2(A/π)`.
pub fn lift_automorphism(a: &Algebra, aut: &AutR) -> Result<LiftOutcome> {
    let s = aut.precision;
    if aut.r == 0 {
        return Err(Error::BadPrecision("lifting needs r >= 1".into()));
    }
    let lifter = Lifter::new(a, s + 1)?;
    let (lifted, gamma, d) = lifter.solve_layer(&aut.alpha, s)?;
    match gamma {
        Some(g) => {
            let alpha = lifter.correct(&lifted, &g, s);
            Ok(LiftOutcome::Lifted(AutR::new(lifter.algebra(s + 1), alpha, aut.r)?))
        }
        None => {
            let h2 = Cohomology::regular(&lifter.residue, 2)?;
            Ok(LiftOutcome::Obstructed(h2.class_of(&d)?))
        }
    }
}

/// The descending chain `L_{2r} ⊇ … ⊇ L_{s_max}` inside `HH^1(A/π^r)`.
#[derive(Clone, Debug)]
pub struct IntegrableChain {
    pub r: usize,
    pub hh1: Cohomology,
    /// `(s, L_s)` for `s = 2r, …, s_max`.
    pub levels: Vec<(usize, Subgroup)>,
    /// For every class of `HH^1(A/π^r)` (lexicographic order), the highest
    /// tested precision to which a corresponding automorphism extends.
    pub class_levels: Vec<(CohomClass, usize)>,
    /// An automorphism at that precision, for every class that was searched.
    pub witnesses: Vec<Option<AutR>>,
}

impl IntegrableChain {
    pub fn subgroup(&self, s: usize) -> Option<&Subgroup> {
        self.levels.iter().find(|(t, _)| *t == s).map(|(_, g)| g)
    }

    pub fn is_descending(&self) -> bool {
        let ring = self.hh1.ring();
        self.levels.windows(2).all(|w| w[1].1.is_subgroup_of(ring, &w[0].1))
    }

    /// First `s` from which the chain is constant up to `s_max`.
    pub fn stabilizes_from(&self) -> usize {
        let last = &self.levels.last().expect("nonempty chain").1;
        let mut from = self.levels.last().unwrap().0;
        for (s, g) in self.levels.iter().rev() {
            if g == last {
                from = *s;
            } else {
                break;
            }
        }
        from
    }

    pub fn classes_at(&self, s: usize) -> Vec<CohomClass> {
        self.class_levels.iter().filter(|(_, l)| *l >= s).map(|(c, _)| c.clone()).collect()
    }
}

fn check_chain_bounds(a: &Algebra, r: usize, s_max: usize) -> Result<()> {
    let prec = a.ring().precision();
    if r == 0 || 2 * r > s_max || s_max > prec {
        return Err(Error::BadPrecision(format!(
            "need 1 <= r and 2r <= s_max <= {prec}, got r = {r}, s_max = {s_max}"
        )));
    }
    Ok(())
}

pub const EXHAUSTIVE_LIMIT: usize = 81;

/// Compute `L_s` for `s = 2r, …, s_max` by layered lifting.
pub fn integrable_chain(a: &Algebra, r: usize, s_max: usize) -> Result<IntegrableChain> {
    check_chain_bounds(a, r, s_max)?;
    let hh1 = hh1_mod(a, r)?;
    let lifter = Lifter::new(a, s_max)?.with_reps()?;
    let ring_r = hh1.ring().clone();
    let classes = hh1.elements();
    let exhaustive = classes.len() <= EXHAUSTIVE_LIMIT;
    let exps = hh1.exponents().to_vec();
    let reduced = a.reduce(r)?;
    let mut known: Vec<Vec<Vec<RingElem>>> = vec![Vec::new(); s_max + 1];
    let mut class_levels = Vec::with_capacity(classes.len());
    let mut witnesses = Vec::with_capacity(classes.len());
    for class in classes {
        let covered = !exhaustive
            && Subgroup::generated_by(&ring_r, &exps, &known[s_max]).contains(&ring_r, &class.coords);
        let level = if covered {
            witnesses.push(None);
            s_max
        } else {
            let delta = cochain_derivation(&reduced, &hh1.representative(&class));
            let aut = AutR::from_derivation(a, r, &delta)?;
            let (level, alpha) = lifter.max_level(&aut.alpha, 2 * r, s_max)?;
            witnesses.push(Some(AutR::new(lifter.algebra(level), alpha, r)?));
            level
        };
        for s in 2 * r..=level {
            known[s].push(class.coords.clone());
        }
        class_levels.push((class, level));
    }
    let levels = (2 * r..=s_max)
        .map(|s| (s, Subgroup::generated_by(&ring_r, &exps, &known[s])))
        .collect();
    Ok(IntegrableChain { r, hh1, levels, class_levels, witnesses })
}

/// `L_s = HH^1_{A/π^s}(A/π^r)`.
pub fn integrable_subgroup(a: &Algebra, r: usize, s: usize) -> Result<Subgroup> {
    let chain = integrable_chain(a, r, s)?;
    Ok(chain.levels.last().expect("nonempty").1.clone())
}

/// Class read off from the pullback extension
/// `X = {(u, v) ∈ (A/π^{2r})_α ⊕ A/π^{2r} : u ≡ v mod π^r}` reduced mod `π^r X`.
pub fn ext_pullback_class(a: &Algebra, aut: &AutR, target: &Cohomology) -> Result<CohomClass> {
    let r = aut.r;
    if aut.precision < 2 * r {
        return Err(Error::InsufficientPrecision { required: 2 * r, available: aut.precision });
    }
    let b = a.at_precision(aut.precision)?.at_precision(2 * r)?;
    let ring = b.ring();
    let alpha = aut.alpha.convert(&ring.with_precision(aut.precision)?, ring);
    hochschild::check_identity_mod(&b, &alpha, r)?;
    let n = b.rank();
    let pr = ring.pi_pow(r);
    let pair = |u: &[RingElem], v: &[RingElem]| [u, v].concat();
    let zero = b.zero_vec();
    // The kernel copy Y is spanned by h_k = (π^r e_k, 0); together with π^r X.
    let mut rows = Vec::new();
    for k in 0..n {
        rows.push(pair(&b.scale(pr, &b.basis(k)), &zero));
    }
    for k in 0..n {
        let e = b.scale(pr, &b.basis(k));
        rows.push(pair(&e, &e));
    }
    let solver = SpanSolver::new(ring, &Mat::from_rows(2 * n, rows));
    let ring_r = ring.with_precision(r)?;
    // Right action on the section s(1) = (1, 1) of the quotient copy Z:
    // (1,1)·e_j − (e_j, e_j) = (α(e_j) − e_j, 0) lies in Y + π^r X.
    let mut phi = Vec::with_capacity(n * n);
    for j in 0..n {
        let acted = pair(alpha.image(j), &b.basis(j));
        let section = pair(&b.basis(j), &b.basis(j));
        let w: Vec<RingElem> = acted.iter().zip(&section).map(|(&x, &y)| ring.sub(x, y)).collect();
        let y = solver.solve(&w).ok_or(Error::NotLevelR(j, "defect leaves the kernel copy".into()))?;
        phi.extend(y[..n].iter().map(|&x| ring.reduce_into(&ring_r, x)));
    }
    // An extension whose section satisfies s(1)·a = s(a) + ι(φ(a)) corresponds
    // to the derivation −φ.
    let neg: Vec<RingElem> = phi.iter().map(|&x| ring_r.neg(x)).collect();
    target.class_of(&neg)
}

/// Whether the derivation `d` of `a` maps the two-sided ideal spanned by
/// `generators` into itself.
pub fn preserves_ideal(a: &Algebra, d: &LinearMap, generators: &[Vec<RingElem>]) -> Result<bool> {
    if !a.is_derivation(d) {
        return Err(Error::NotADerivation);
    }
    let ring = a.ring();
    if generators.iter().any(|g| g.len() != a.rank()) {
        return Err(Error::DimensionMismatch("ideal generator has wrong length".into()));
    }
    let span = howell_form(ring, &Mat::from_rows(a.rank(), generators.to_vec()));
    for g in generators {
        for i in 0..a.rank() {
            let e = a.basis(i);
            if !span.contains(ring, &a.mul(&e, g)) || !span.contains(ring, &a.mul(g, &e)) {
                return Err(Error::NotAnIdeal);
            }
        }
    }
    Ok(generators.iter().all(|g| span.contains(ring, &d.apply(ring, g))))
}
