//! Finite-rank algebras given by structure constants, their bimodules and
//! linear maps between them.
//!
//! Elements are row vectors of coordinates. A linear map is stored as the
//! matrix whose row `i` is the image of `e_i`, so `f(v) = v·F`.

use crate::chainring::{ChainRing, RingElem};
use crate::error::{Error, Result};
use crate::linalg::{axpy, howell_form, vec_mat, Howell, Mat, SpanSolver};

/// Where an algebra came from; used for naming elements and derivations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    /// `R[x]/(x^m)`, basis `1, x, …, x^{m-1}`.
    TruncatedPolynomial(usize),
    /// Group algebra; basis is the group elements in table order.
    Group(Vec<Vec<usize>>),
    /// `M_n(B)` with `B` of the given rank; basis index `(u*n + v)*rank + i`.
    Matrix { n: usize, base_rank: usize },
    /// `B ⊗ B^op`; basis index `i*rank + i'`.
    Enveloping { base_rank: usize },
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    ring: ChainRing,
    rank: usize,
    /// `consts[i*rank + j]` holds the coordinates of `e_i e_j`.
    consts: Vec<Vec<RingElem>>,
    unit: Vec<RingElem>,
    shape: Shape,
}

impl Algebra {
    /// Build and validate an algebra from structure constants.
    pub fn new(
        ring: &ChainRing,
        rank: usize,
        consts: Vec<Vec<RingElem>>,
        unit: Vec<RingElem>,
    ) -> Result<Self> {
        Self::with_shape(ring, rank, consts, unit, Shape::Custom)
    }

    fn with_shape(
        ring: &ChainRing,
        rank: usize,
        consts: Vec<Vec<RingElem>>,
        unit: Vec<RingElem>,
        shape: Shape,
    ) -> Result<Self> {
        if rank == 0 {
            return Err(Error::DimensionMismatch("algebra of rank 0".into()));
        }
        if consts.len() != rank * rank || consts.iter().any(|c| c.len() != rank) {
            return Err(Error::DimensionMismatch(format!(
                "expected {} structure constant vectors of length {rank}",
                rank * rank
            )));
        }
        if unit.len() != rank {
            return Err(Error::DimensionMismatch("unit vector has wrong length".into()));
        }
        let a = Algebra { ring: ring.clone(), rank, consts, unit, shape };
        a.check_axioms()?;
        Ok(a)
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.rank;
        for i in 0..n {
            for j in 0..n {
                let ij = self.basis_product(i, j).to_vec();
                let jk_rows: Vec<Vec<RingElem>> = (0..n).map(|k| self.mul(&ij, &self.basis(k))).collect();
                for k in 0..n {
                    let left = &jk_rows[k];
                    let right = self.mul(&self.basis(i), self.basis_product(j, k));
                    if *left != right {
                        return Err(Error::NotAssociative((i, j, k)));
                    }
                }
            }
        }
        for i in 0..n {
            let e = self.basis(i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(Error::NotUnital);
            }
        }
        Ok(())
    }

    /// `R[x]/(x^m)`.
    pub fn truncated_polynomial(ring: &ChainRing, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::DimensionMismatch("truncated polynomial needs m >= 1".into()));
        }
        let mut consts = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                let mut v = vec![ring.zero(); m];
                if i + j < m {
                    v[i + j] = ring.one();
                }
                consts.push(v);
            }
        }
        let mut unit = vec![ring.zero(); m];
        unit[0] = ring.one();
        Self::with_shape(ring, m, consts, unit, Shape::TruncatedPolynomial(m))
    }

    /// Group algebra from a multiplication table of indices.
    pub fn group(ring: &ChainRing, table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        check_group(table)?;
        let mut consts = Vec::with_capacity(n * n);
        for row in table {
            for &k in row {
                let mut v = vec![ring.zero(); n];
                v[k] = ring.one();
                consts.push(v);
            }
        }
        let id = (0..n).find(|&e| (0..n).all(|g| table[e][g] == g)).expect("validated");
        let mut unit = vec![ring.zero(); n];
        unit[id] = ring.one();
        Self::with_shape(ring, n, consts, unit, Shape::Group(table.to_vec()))
    }

    /// Group algebra of the cyclic group of the given order, basis `1, y, …`.
    pub fn cyclic_group(ring: &ChainRing, order: usize) -> Result<Self> {
        Self::group(ring, &cyclic_table(order))
    }

    /// `M_n(A)`.
    pub fn matrix_algebra(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionMismatch("matrix size must be positive".into()));
        }
        let k = self.rank;
        let big = n * n * k;
        let ring = &self.ring;
        let idx = |u: usize, v: usize, i: usize| (u * n + v) * k + i;
        let mut consts = vec![vec![ring.zero(); big]; big * big];
        for u in 0..n {
            for v in 0..n {
                for i in 0..k {
                    for w in 0..n {
                        for j in 0..k {
                            let prod = self.basis_product(i, j);
                            let target = &mut consts[idx(u, v, i) * big + idx(v, w, j)];
                            for (l, &c) in prod.iter().enumerate() {
                                target[idx(u, w, l)] = c;
                            }
                        }
                    }
                }
            }
        }
        let mut unit = vec![ring.zero(); big];
        for u in 0..n {
            for (i, &c) in self.unit.iter().enumerate() {
                unit[idx(u, u, i)] = c;
            }
        }
        Self::with_shape(ring, big, consts, unit, Shape::Matrix { n, base_rank: k })
    }

    /// `A ⊗ A^op`, basis index `i*rank + i'` for `e_i ⊗ e_{i'}`.
    pub fn enveloping(&self) -> Result<Self> {
        let k = self.rank;
        let big = k * k;
        let ring = &self.ring;
        let mut consts = Vec::with_capacity(big * big);
        for i in 0..k {
            for i2 in 0..k {
                for j in 0..k {
                    for j2 in 0..k {
                        let left = self.basis_product(i, j);
                        let right = self.basis_product(j2, i2);
                        let mut v = vec![ring.zero(); big];
                        for (a, &x) in left.iter().enumerate() {
                            for (b, &y) in right.iter().enumerate() {
                                v[a * k + b] = ring.mul_add(v[a * k + b], x, y);
                            }
                        }
                        consts.push(v);
                    }
                }
            }
        }
        let mut unit = vec![ring.zero(); big];
        for (a, &x) in self.unit.iter().enumerate() {
            for (b, &y) in self.unit.iter().enumerate() {
                unit[a * k + b] = ring.mul(x, y);
            }
        }
        Self::with_shape(ring, big, consts, unit, Shape::Enveloping { base_rank: k })
    }

    /// `A/π^r A` as an algebra over `R/π^r`.
    pub fn reduce(&self, r: usize) -> Result<Self> {
        if r == 0 || r > self.ring.precision() {
            return Err(Error::BadPrecision(format!(
                "cannot reduce an algebra over {} to precision {r}",
                self.ring
            )));
        }
        self.at_precision(r)
    }

    /// The same structure constants read at another precision: reduced when
    /// `k <= N`, digit-lifted (and re-validated) when `k > N`.
    pub fn at_precision(&self, k: usize) -> Result<Self> {
        if k == self.ring.precision() {
            return Ok(self.clone());
        }
        let target = self.ring.with_precision(k)?;
        let conv = |x: RingElem| {
            if k < self.ring.precision() {
                self.ring.reduce_into(&target, x)
            } else {
                target.lift_from(&self.ring, x)
            }
        };
        let consts = self.consts.iter().map(|v| v.iter().map(|&x| conv(x)).collect()).collect();
        let unit = self.unit.iter().map(|&x| conv(x)).collect();
        Self::with_shape(&target, self.rank, consts, unit, self.shape.clone())
    }

    pub fn ring(&self) -> &ChainRing {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn unit(&self) -> &[RingElem] {
        &self.unit
    }

    pub fn structure_constants(&self) -> &[Vec<RingElem>] {
        &self.consts
    }

    pub fn basis(&self, i: usize) -> Vec<RingElem> {
        let mut v = vec![self.ring.zero(); self.rank];
        v[i] = self.ring.one();
        v
    }

    pub fn zero_vec(&self) -> Vec<RingElem> {
        vec![self.ring.zero(); self.rank]
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[RingElem] {
        &self.consts[i * self.rank + j]
    }

    pub fn mul(&self, a: &[RingElem], b: &[RingElem]) -> Vec<RingElem> {
        let r = &self.ring;
        let mut out = self.zero_vec();
        for (i, &x) in a.iter().enumerate() {
            if x.0 == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y.0 == 0 {
                    continue;
                }
                axpy(r, &mut out, r.mul(x, y), self.basis_product(i, j));
            }
        }
        out
    }

    pub fn add(&self, a: &[RingElem], b: &[RingElem]) -> Vec<RingElem> {
        a.iter().zip(b).map(|(&x, &y)| self.ring.add(x, y)).collect()
    }

    pub fn sub(&self, a: &[RingElem], b: &[RingElem]) -> Vec<RingElem> {
        a.iter().zip(b).map(|(&x, &y)| self.ring.sub(x, y)).collect()
    }

    pub fn scale(&self, c: RingElem, a: &[RingElem]) -> Vec<RingElem> {
        a.iter().map(|&x| self.ring.mul(c, x)).collect()
    }

    pub fn from_ints(&self, v: &[i64]) -> Vec<RingElem> {
        v.iter().map(|&x| self.ring.from_int(x)).collect()
    }

    /// Matrix of `v ↦ a·v`.
    pub fn left_mult(&self, a: &[RingElem]) -> Mat {
        Mat::from_rows(self.rank, (0..self.rank).map(|k| self.mul(a, &self.basis(k))).collect())
    }

    /// Matrix of `v ↦ v·a`.
    pub fn right_mult(&self, a: &[RingElem]) -> Mat {
        Mat::from_rows(self.rank, (0..self.rank).map(|k| self.mul(&self.basis(k), a)).collect())
    }

    /// `[c, e_i]` for every basis element, as the columns of one matrix:
    /// `c ↦ (c e_i − e_i c)_i`.
    fn commutator_matrix(&self) -> Mat {
        let n = self.rank;
        let mut m = Mat::zeros(n, n * n);
        for k in 0..n {
            let ek = self.basis(k);
            for i in 0..n {
                let ei = self.basis(i);
                let c = self.sub(&self.mul(&ek, &ei), &self.mul(&ei, &ek));
                m.row_mut(k)[i * n..(i + 1) * n].copy_from_slice(&c);
            }
        }
        m
    }

    /// Howell form of the center.
    pub fn center(&self) -> Howell {
        SpanSolver::new(&self.ring, &self.commutator_matrix()).kernel()
    }

    pub fn is_commutative(&self) -> bool {
        self.commutator_matrix().is_zero()
    }

    pub fn inverse(&self, a: &[RingElem]) -> Option<Vec<RingElem>> {
        let x = SpanSolver::new(&self.ring, &self.right_mult(a)).solve(&self.unit)?;
        // Finite rings are Dedekind-finite, but check anyway.
        (self.mul(a, &x) == self.unit).then_some(x)
    }

    pub fn is_unit(&self, a: &[RingElem]) -> bool {
        self.inverse(a).is_some()
    }

    pub fn identity_map(&self) -> LinearMap {
        LinearMap::new(Mat::identity(&self.ring, self.rank))
    }

    /// `a ↦ u a u^{-1}`.
    pub fn conjugation(&self, u: &[RingElem]) -> Result<LinearMap> {
        let inv = self.inverse(u).ok_or(Error::NotInvertible)?;
        Ok(LinearMap::new(Mat::from_rows(
            self.rank,
            (0..self.rank).map(|i| self.mul(&self.mul(u, &self.basis(i)), &inv)).collect(),
        )))
    }

    /// The inner derivation `a ↦ c a − a c`.
    pub fn inner_derivation(&self, c: &[RingElem]) -> LinearMap {
        LinearMap::new(Mat::from_rows(
            self.rank,
            (0..self.rank)
                .map(|i| {
                    let e = self.basis(i);
                    self.sub(&self.mul(c, &e), &self.mul(&e, c))
                })
                .collect(),
        ))
    }

    pub fn is_morphism(&self, f: &LinearMap) -> bool {
        self.morphism_defect(f).is_none()
    }

    /// First basis pair `(i, j)` where `f(e_i e_j) != f(e_i) f(e_j)`, with
    /// `(n, n)` standing for `f(1) != 1`.
    pub fn morphism_defect(&self, f: &LinearMap) -> Option<(usize, usize)> {
        let n = self.rank;
        if f.apply(&self.ring, &self.unit) != self.unit {
            return Some((n, n));
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = f.apply(&self.ring, self.basis_product(i, j));
                let rhs = self.mul(f.image(i), f.image(j));
                if lhs != rhs {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_automorphism(&self, f: &LinearMap) -> bool {
        self.is_morphism(f) && f.inverse(&self.ring).is_some()
    }

    /// Leibniz rule on all basis pairs.
    pub fn is_derivation(&self, d: &LinearMap) -> bool {
        let n = self.rank;
        if d.matrix.rows() != n || d.matrix.cols() != n {
            return false;
        }
        (0..n).all(|i| {
            (0..n).all(|j| {
                let lhs = d.apply(&self.ring, self.basis_product(i, j));
                let rhs = self.add(&self.mul(&self.basis(i), d.image(j)), &self.mul(d.image(i), &self.basis(j)));
                lhs == rhs
            })
        })
    }

    /// Coordinates of `x^k` (truncated polynomial) or of group element `k`
    /// rendered for humans.
    pub fn basis_name(&self, k: usize) -> String {
        match &self.shape {
            Shape::TruncatedPolynomial(_) => monomial("x", k),
            Shape::Group(table) if is_cyclic_table(table) => monomial("y", k),
            Shape::Group(_) => format!("g{k}"),
            _ => format!("e{k}"),
        }
    }

    /// Human-readable form of an element.
    pub fn format_element(&self, v: &[RingElem]) -> String {
        let mut terms = Vec::new();
        for (k, &c) in v.iter().enumerate() {
            if c.0 == 0 {
                continue;
            }
            let name = self.basis_name(k);
            let coeff = self.ring.format(c);
            terms.push(match (coeff.as_str(), name.as_str()) {
                (_, "1") => coeff,
                ("1", _) => name,
                _ => format!("{coeff}{name}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

fn monomial(var: &str, k: usize) -> String {
    match k {
        0 => "1".into(),
        1 => var.into(),
        _ => format!("{var}^{k}"),
    }
}

pub fn cyclic_table(order: usize) -> Vec<Vec<usize>> {
    (0..order).map(|i| (0..order).map(|j| (i + j) % order).collect()).collect()
}

fn is_cyclic_table(table: &[Vec<usize>]) -> bool {
    table == cyclic_table(table.len()).as_slice()
}

fn check_group(table: &[Vec<usize>]) -> Result<()> {
    let n = table.len();
    if n == 0 {
        return Err(Error::NotAGroup("empty table".into()));
    }
    if table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
        return Err(Error::NotAGroup("table is not square with entries in range".into()));
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if table[table[a][b]][c] != table[a][table[b][c]] {
                    return Err(Error::NotAGroup(format!("associativity fails at ({a},{b},{c})")));
                }
            }
        }
    }
    let id = (0..n)
        .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
        .ok_or_else(|| Error::NotAGroup("no identity element".into()))?;
    for g in 0..n {
        if !(0..n).any(|h| table[g][h] == id && table[h][g] == id) {
            return Err(Error::NotAGroup(format!("element {g} has no inverse")));
        }
    }
    Ok(())
}

/// Change of basis from the group basis `1, y, …, y^{q-1}` of a cyclic group
/// algebra to the monomial basis of `R[x]/(x^q)` via `y ↦ 1 + x`. Row `i`
/// holds the `x`-coordinates of `(1+x)^i`. This is an algebra isomorphism
/// only when `q` is a power of `p` and the ring is the residue field.
pub fn cyclic_to_polynomial_basis(ring: &ChainRing, q: usize) -> Mat {
    let mut m = Mat::zeros(q, q);
    for i in 0..q {
        let mut binom: i64 = 1;
        for k in 0..=i {
            m[(i, k)] = ring.from_int(binom.rem_euclid(ring.size() as i64));
            binom = binom * (i - k) as i64 / (k + 1) as i64;
        }
    }
    m
}

/// An `R`-linear map on coordinate vectors; row `i` is the image of `e_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearMap {
    pub matrix: Mat,
}

impl LinearMap {
    pub fn new(matrix: Mat) -> Self {
        LinearMap { matrix }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        LinearMap { matrix: Mat::zeros(rows, cols) }
    }

    /// Build from explicit images of the basis.
    pub fn from_images(cols: usize, images: Vec<Vec<RingElem>>) -> Self {
        LinearMap { matrix: Mat::from_rows(cols, images) }
    }

    pub fn image(&self, i: usize) -> &[RingElem] {
        self.matrix.row(i)
    }

    pub fn apply(&self, ring: &ChainRing, v: &[RingElem]) -> Vec<RingElem> {
        vec_mat(ring, v, &self.matrix)
    }

    /// `self ∘ other`.
    pub fn compose(&self, ring: &ChainRing, other: &LinearMap) -> LinearMap {
        LinearMap::new(other.matrix.mul(ring, &self.matrix))
    }

    pub fn add(&self, ring: &ChainRing, other: &LinearMap) -> LinearMap {
        LinearMap::new(self.matrix.add(ring, &other.matrix))
    }

    pub fn sub(&self, ring: &ChainRing, other: &LinearMap) -> LinearMap {
        LinearMap::new(self.matrix.sub(ring, &other.matrix))
    }

    pub fn scale(&self, ring: &ChainRing, c: RingElem) -> LinearMap {
        LinearMap::new(self.matrix.scale(ring, c))
    }

    pub fn inverse(&self, ring: &ChainRing) -> Option<LinearMap> {
        let n = self.matrix.rows();
        if n != self.matrix.cols() {
            return None;
        }
        let h = howell_form(ring, &self.matrix);
        if h.rank() != n || h.pivots.iter().any(|p| p.exponent != 0) {
            return None;
        }
        let solver = SpanSolver::new(ring, &self.matrix);
        let rows = (0..n)
            .map(|i| {
                let mut e = vec![ring.zero(); n];
                e[i] = ring.one();
                solver.solve(&e).expect("invertible")
            })
            .collect();
        Some(LinearMap::new(Mat::from_rows(n, rows)))
    }

    /// Same matrix read in another precision of the same `O`.
    pub fn convert(&self, from: &ChainRing, to: &ChainRing) -> LinearMap {
        LinearMap::new(self.matrix.map(|x| {
            if to.precision() <= from.precision() {
                from.reduce_into(to, x)
            } else {
                to.lift_from(from, x)
            }
        }))
    }
}

/// An `A`-`A`-bimodule structure on `R^m / π^level`, given by the actions of
/// the basis of `A`: `e_i·v = v·L_i` and `v·e_j = v·R_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    pub dim: usize,
    /// Torsion level `t`: vectors are read modulo `π^t`.
    pub level: usize,
    pub left: Vec<Mat>,
    pub right: Vec<Mat>,
}

impl Bimodule {
    /// `A` acting on itself.
    pub fn regular(a: &Algebra) -> Self {
        Self::regular_level(a, a.ring().precision())
    }

    /// `A/π^t A` as an `A`-bimodule.
    pub fn regular_level(a: &Algebra, level: usize) -> Self {
        let n = a.rank();
        let left = (0..n).map(|i| a.left_mult(&a.basis(i))).collect();
        let right = (0..n).map(|j| a.right_mult(&a.basis(j))).collect();
        Bimodule { dim: n, level: level.min(a.ring().precision()), left, right }
    }

    /// `(A/π^t A)_α`: the regular bimodule with right action `m·a = m α(a)`.
    pub fn twisted(a: &Algebra, alpha: &LinearMap, level: usize) -> Result<Self> {
        let ring = a.ring();
        let level = level.min(ring.precision());
        let n = a.rank();
        if alpha.matrix.rows() != n || alpha.matrix.cols() != n {
            return Err(Error::DimensionMismatch("automorphism has wrong size".into()));
        }
        let reduced = a.at_precision(level)?;
        let alpha_red = alpha.convert(ring, reduced.ring());
        if let Some((i, j)) = reduced.morphism_defect(&alpha_red) {
            return Err(Error::NotAMorphism(format!("multiplicativity fails at basis pair ({i},{j})")));
        }
        if alpha_red.inverse(reduced.ring()).is_none() {
            return Err(Error::NotInvertible);
        }
        let reg = Self::regular_level(a, level);
        let right = (0..n)
            .map(|j| {
                let mut m = Mat::zeros(n, n);
                for (k, &c) in alpha.image(j).iter().enumerate() {
                    if c.0 != 0 {
                        m = m.add(ring, &reg.right[k].scale(ring, c));
                    }
                }
                m
            })
            .collect();
        Ok(Bimodule { dim: n, level, left: reg.left, right })
    }

    pub fn act_left(&self, ring: &ChainRing, i: usize, v: &[RingElem]) -> Vec<RingElem> {
        vec_mat(ring, v, &self.left[i])
    }

    pub fn act_right(&self, ring: &ChainRing, v: &[RingElem], j: usize) -> Vec<RingElem> {
        vec_mat(ring, v, &self.right[j])
    }

    fn truncated(&self, ring: &ChainRing, m: &Mat) -> Mat {
        m.map(|x| ring.truncate(x, self.level))
    }

    /// Check the bimodule axioms against `a` modulo `π^level`.
    pub fn validate(&self, a: &Algebra) -> Result<()> {
        let ring = a.ring();
        let n = a.rank();
        if self.left.len() != n || self.right.len() != n {
            return Err(Error::InvalidBimodule("need one action matrix per basis element".into()));
        }
        if self.left.iter().chain(&self.right).any(|m| m.rows() != self.dim || m.cols() != self.dim) {
            return Err(Error::InvalidBimodule("action matrices have the wrong size".into()));
        }
        let combo = |mats: &[Mat], coeffs: &[RingElem]| {
            let mut acc = Mat::zeros(self.dim, self.dim);
            for (k, &c) in coeffs.iter().enumerate() {
                if c.0 != 0 {
                    acc = acc.add(ring, &mats[k].scale(ring, c));
                }
            }
            acc
        };
        let id = self.truncated(ring, &Mat::identity(ring, self.dim));
        if self.truncated(ring, &combo(&self.left, a.unit())) != id
            || self.truncated(ring, &combo(&self.right, a.unit())) != id
        {
            return Err(Error::InvalidBimodule("unit does not act as the identity".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let c = a.basis_product(i, j);
                let l = self.left[j].mul(ring, &self.left[i]);
                if self.truncated(ring, &l) != self.truncated(ring, &combo(&self.left, c)) {
                    return Err(Error::InvalidBimodule(format!("left action fails at ({i},{j})")));
                }
                let r = self.right[i].mul(ring, &self.right[j]);
                if self.truncated(ring, &r) != self.truncated(ring, &combo(&self.right, c)) {
                    return Err(Error::InvalidBimodule(format!("right action fails at ({i},{j})")));
                }
                let lr = self.left[i].mul(ring, &self.right[j]);
                let rl = self.right[j].mul(ring, &self.left[i]);
                if self.truncated(ring, &lr) != self.truncated(ring, &rl) {
                    return Err(Error::InvalidBimodule(format!("actions do not commute at ({i},{j})")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, n: usize) -> ChainRing {
        ChainRing::unramified(p, n).unwrap()
    }

    fn s3_table() -> Vec<Vec<usize>> {
        let perms: Vec<[usize; 3]> =
            vec![[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let compose = |a: &[usize; 3], b: &[usize; 3]| [a[b[0]], a[b[1]], a[b[2]]];
        perms
            .iter()
            .map(|a| perms.iter().map(|b| perms.iter().position(|c| *c == compose(a, b)).unwrap()).collect())
            .collect()
    }

    #[test]
    fn group_algebras() {
        let r = ring(2, 2);
        let c2 = Algebra::cyclic_group(&r, 2).unwrap();
        assert_eq!(c2.mul(&c2.basis(1), &c2.basis(1)), c2.basis(0));
        let c3 = Algebra::cyclic_group(&ring(3, 2), 3).unwrap();
        assert!(c3.is_commutative());
        let s3 = Algebra::group(&ring(2, 1), &s3_table()).unwrap();
        assert_eq!(s3.rank(), 6);
        assert!(!s3.is_commutative());
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(matches!(Algebra::group(&r, &bad), Err(Error::NotAGroup(_))));
    }

    #[test]
    fn custom_validation() {
        let r = ring(2, 2);
        let v = |a: i64, b: i64, c: i64| vec![r.from_int(a), r.from_int(b), r.from_int(c)];
        // basis 1, a, b with a² = b, ab = 1, ba = 0: (aa)a = 0 but a(aa) = 1
        let mut consts = vec![v(0, 0, 0); 9];
        for k in 0..3 {
            let mut e = v(0, 0, 0);
            e[k] = r.one();
            consts[k] = e.clone();
            consts[3 * k] = e;
        }
        consts[4] = v(0, 0, 1);
        consts[5] = v(1, 0, 0);
        assert_eq!(Algebra::new(&r, 3, consts.clone(), v(1, 0, 0)), Err(Error::NotAssociative((1, 1, 1))));
        consts[5] = v(0, 0, 0);
        assert!(Algebra::new(&r, 3, consts.clone(), v(1, 0, 0)).is_ok());
        assert_eq!(Algebra::new(&r, 3, consts, v(0, 1, 0)), Err(Error::NotUnital));
    }

    #[test]
    fn truncated_polynomials() {
        let a = Algebra::truncated_polynomial(&ring(2, 3), 2).unwrap();
        let x = a.basis(1);
        assert_eq!(a.mul(&x, &x), a.zero_vec());
        let b = Algebra::truncated_polynomial(&ring(3, 2), 3).unwrap();
        assert_eq!(b.mul(&b.basis(1), &b.basis(2)), b.zero_vec());
        assert_eq!(b.mul(&b.basis(1), &b.basis(1)), b.basis(2));
    }

    #[test]
    fn matrix_algebras() {
        let f2 = ring(2, 1);
        let k = Algebra::truncated_polynomial(&f2, 1).unwrap();
        let m2 = k.matrix_algebra(2).unwrap();
        assert_eq!(m2.rank(), 4);
        assert_eq!(m2.unit(), &m2.from_ints(&[1, 0, 0, 1])[..]);
        assert_eq!(m2.center().log_order(&f2), 1);
        let a = Algebra::truncated_polynomial(&f2, 2).unwrap();
        assert_eq!(a.matrix_algebra(1).unwrap().structure_constants(), a.structure_constants());
        assert_eq!(a.matrix_algebra(2).unwrap().rank(), 8);
    }

    #[test]
    fn enveloping_algebras() {
        let f2 = ring(2, 1);
        let a = Algebra::truncated_polynomial(&f2, 2).unwrap();
        assert_eq!(a.enveloping().unwrap().rank(), 4);
        let c2 = Algebra::cyclic_group(&ring(2, 2), 2).unwrap();
        assert!(c2.enveloping().unwrap().is_commutative());
        let m2 = Algebra::truncated_polynomial(&f2, 1).unwrap().matrix_algebra(2).unwrap();
        let env = m2.enveloping().unwrap();
        assert_eq!(env.rank(), 16);
        // brute-force center: all 2^16 elements commuting with every basis element
        let mut count = 0;
        for mask in 0u32..1 << 16 {
            let v: Vec<RingElem> = (0..16).map(|i| f2.from_int(((mask >> i) & 1) as i64)).collect();
            if (0..16).all(|i| env.mul(&v, &env.basis(i)) == env.mul(&env.basis(i), &v)) {
                count += 1;
            }
        }
        assert_eq!(count, 2);
        assert_eq!(env.center().log_order(&f2), 1);
    }

    #[test]
    fn reductions() {
        let a = Algebra::truncated_polynomial(&ring(2, 2), 2).unwrap();
        assert_eq!(a.reduce(1).unwrap(), Algebra::truncated_polynomial(&ring(2, 1), 2).unwrap());
        assert_eq!(a.reduce(2).unwrap(), a);
        assert!(matches!(a.reduce(3), Err(Error::BadPrecision(_))));
        let o = ChainRing::eisenstein(2, vec![-2, 0], 4).unwrap();
        let g = Algebra::cyclic_group(&o, 2).unwrap().reduce(2).unwrap();
        assert_eq!(g.ring().size(), 4);
        let t = g.ring().pi();
        assert!(g.ring().is_zero(g.ring().mul(t, t)));
    }

    #[test]
    fn derivations_on_dual_numbers() {
        let f2 = ring(2, 1);
        let a = Algebra::truncated_polynomial(&f2, 2).unwrap();
        let d1 = LinearMap::from_images(2, vec![a.zero_vec(), a.basis(1)]);
        let d0 = LinearMap::from_images(2, vec![a.zero_vec(), a.basis(0)]);
        assert!(a.is_derivation(&d1));
        assert!(a.is_derivation(&d0));
        let z4 = Algebra::truncated_polynomial(&ring(2, 2), 2).unwrap();
        let d0 = LinearMap::from_images(2, vec![z4.zero_vec(), z4.basis(0)]);
        assert!(!z4.is_derivation(&d0));
    }

    #[test]
    fn twisted_bimodules() {
        let r = ring(2, 2);
        let a = Algebra::cyclic_group(&r, 2).unwrap();
        let reg = Bimodule::regular(&a);
        reg.validate(&a).unwrap();
        assert_eq!(Bimodule::twisted(&a, &a.identity_map(), 2).unwrap(), reg);
        let alpha = LinearMap::from_images(2, vec![a.basis(0), a.from_ints(&[0, 3])]);
        let tw = Bimodule::twisted(&a, &alpha, 2).unwrap();
        tw.validate(&a).unwrap();
        assert_eq!(tw.right[1], a.right_mult(&a.from_ints(&[0, 3])));
        let not_mult = LinearMap::from_images(2, vec![a.basis(0), a.from_ints(&[0, 2])]);
        assert!(matches!(Bimodule::twisted(&a, &not_mult, 2), Err(Error::NotAMorphism(_))));
    }

    #[test]
    fn inner_twist_is_isomorphic_to_regular() {
        let f2 = ring(2, 1);
        let m2 = Algebra::truncated_polynomial(&f2, 1).unwrap().matrix_algebra(2).unwrap();
        let c = m2.from_ints(&[0, 1, 1, 0]);
        let alpha = m2.conjugation(&c).unwrap();
        let tw = Bimodule::twisted(&m2, &alpha, 1).unwrap();
        tw.validate(&m2).unwrap();
        let reg = Bimodule::regular(&m2);
        // φ(m) = m c intertwines the regular bimodule with the twisted one:
        // φ(a m) = a φ(m) and φ(m b) = φ(m)·_α b = m c α(b) = m b c.
        let phi = m2.right_mult(&c);
        for i in 0..4 {
            assert_eq!(reg.left[i].mul(&f2, &phi), phi.mul(&f2, &tw.left[i]));
            assert_eq!(reg.right[i].mul(&f2, &phi), phi.mul(&f2, &tw.right[i]));
        }
    }

    #[test]
    fn twist_composition() {
        let r = ring(2, 3);
        let a = Algebra::cyclic_group(&r, 2).unwrap();
        let alpha = LinearMap::from_images(2, vec![a.basis(0), a.from_ints(&[0, 3])]);
        let beta = LinearMap::from_images(2, vec![a.basis(0), a.from_ints(&[0, 5])]);
        let ab = alpha.compose(&r, &beta);
        let t_ab = Bimodule::twisted(&a, &ab, 3).unwrap();
        // right action of e_j in M_{α∘β} is R_{α(β(e_j))}
        for j in 0..2 {
            assert_eq!(t_ab.right[j], a.right_mult(&alpha.apply(&r, beta.image(j))));
        }
    }

    #[test]
    fn basis_change_is_an_isomorphism_mod_p() {
        let f2 = ring(2, 1);
        let g = Algebra::cyclic_group(&f2, 4).unwrap();
        let poly = Algebra::truncated_polynomial(&f2, 4).unwrap();
        let p = cyclic_to_polynomial_basis(&f2, 4);
        for i in 0..4 {
            for j in 0..4 {
                let lhs = vec_mat(&f2, g.basis_product(i, j), &p);
                let rhs = poly.mul(p.row(i), p.row(j));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn units_and_inverses() {
        let r = ring(3, 2);
        let a = Algebra::truncated_polynomial(&r, 3).unwrap();
        let u = a.from_ints(&[2, 5, 1]);
        let inv = a.inverse(&u).unwrap();
        assert_eq!(a.mul(&u, &inv), a.unit().to_vec());
        assert!(!a.is_unit(&a.from_ints(&[3, 1, 0])));
    }
}
