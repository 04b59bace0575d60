//! Dense linear algebra over a [`ChainRing`].
//!
//! Everything works with row spans: a matrix stands for the submodule of
//! `R^cols` generated by its rows. Canonical spans are Howell forms; the
//! module structure of a quotient of two spans comes from a Smith form of
//! the relation matrix.

use std::fmt;

use crate::chainring::{ChainRing, RingElem};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<RingElem>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![RingElem::ZERO; rows * cols] }
    }

    pub fn identity(ring: &ChainRing, n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ring.one();
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<RingElem>>) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in &rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Mat { rows: rows.len(), cols, data }
    }

    pub fn from_ints(ring: &ChainRing, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Mat::from_rows(
            cols,
            rows.iter().map(|r| r.iter().map(|&v| ring.from_int(v)).collect()).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[RingElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [RingElem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<RingElem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn push_row(&mut self, row: &[RingElem]) {
        assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.0 == 0)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Place `other` to the right of `self`.
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut m = Mat::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            m.row_mut(i)[..self.cols].copy_from_slice(self.row(i));
            m.row_mut(i)[self.cols..].copy_from_slice(other.row(i));
        }
        m
    }

    pub fn mul(&self, ring: &ChainRing, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product dimensions");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.0 == 0 {
                    continue;
                }
                let src = other.row(k);
                let dst = out.row_mut(i);
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d = ring.mul_add(*d, a, b);
                }
            }
        }
        out
    }

    pub fn add(&self, ring: &ChainRing, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| ring.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, ring: &ChainRing, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| ring.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, ring: &ChainRing, c: RingElem) -> Mat {
        self.map(|x| ring.mul(c, x))
    }

    pub fn map(&self, f: impl Fn(RingElem) -> RingElem) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    pub fn entries(&self) -> &[RingElem] {
        &self.data
    }

    pub fn min_valuation(&self, ring: &ChainRing) -> usize {
        self.data.iter().map(|&x| ring.valuation(x)).min().unwrap_or(ring.precision())
    }

    pub fn format(&self, ring: &ChainRing) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = self.row(i).iter().map(|&x| ring.format(x)).collect();
                format!("[{}]", r.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = RingElem;
    fn index(&self, (i, j): (usize, usize)) -> &RingElem {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut RingElem {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "{:?}", self.row(i).iter().map(|x| x.0).collect::<Vec<_>>())?;
        }
        write!(f, "]")
    }
}

/// `dst += c·src`
pub fn axpy(ring: &ChainRing, dst: &mut [RingElem], c: RingElem, src: &[RingElem]) {
    if c.0 == 0 {
        return;
    }
    for (d, &s) in dst.iter_mut().zip(src) {
        if s.0 != 0 {
            *d = ring.mul_add(*d, c, s);
        }
    }
}

pub fn vec_mat(ring: &ChainRing, v: &[RingElem], m: &Mat) -> Vec<RingElem> {
    assert_eq!(v.len(), m.rows());
    let mut out = vec![RingElem::ZERO; m.cols()];
    for (i, &c) in v.iter().enumerate() {
        axpy(ring, &mut out, c, m.row(i));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Pivot {
    pub col: usize,
    /// The pivot entry is `π^exponent`.
    pub exponent: usize,
}

/// A matrix in Howell normal form together with its pivot data.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Howell {
    pub matrix: Mat,
    pub pivots: Vec<Pivot>,
}

/// Canonical Howell form of the row span of `m`.
///
/// Rows are ordered by pivot column, every pivot is `π^d`, entries above a
/// pivot are reduced to digits below `d`, and for every `k` the rows with
/// pivot column `>= k` generate all span elements vanishing on the first
/// `k` columns.
pub fn howell_form(ring: &ChainRing, m: &Mat) -> Howell {
    let n = ring.precision();
    let cols = m.cols();
    let mut pool: Vec<Vec<RingElem>> =
        m.row_vecs().into_iter().filter(|r| r.iter().any(|x| x.0 != 0)).collect();
    let mut out: Vec<Vec<RingElem>> = Vec::new();
    let mut pivots = Vec::new();
    for col in 0..cols {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in pool.iter().enumerate() {
            let v = ring.valuation(row[col]);
            if v < n && best.map_or(true, |(_, bv)| v < bv) {
                best = Some((i, v));
                if v == 0 {
                    break;
                }
            }
        }
        let Some((bi, v)) = best else { continue };
        let mut piv = pool.swap_remove(bi);
        let unit = ring.shift_down(piv[col], v);
        let inv = ring.unit_inverse(unit).expect("shifted pivot is a unit");
        for x in piv.iter_mut() {
            *x = ring.mul(*x, inv);
        }
        debug_assert_eq!(piv[col], ring.pi_pow(v));
        for row in pool.iter_mut() {
            let x = row[col];
            if x.0 != 0 {
                let q = ring.neg(ring.shift_down(x, v));
                axpy(ring, row, q, &piv);
            }
        }
        if v > 0 {
            let s = ring.pi_pow(n - v);
            let extra: Vec<RingElem> = piv.iter().map(|&x| ring.mul(s, x)).collect();
            if extra.iter().any(|x| x.0 != 0) {
                pool.push(extra);
            }
        }
        pool.retain(|r| r.iter().any(|x| x.0 != 0));
        out.push(piv);
        pivots.push(Pivot { col, exponent: v });
    }
    // Reduce entries above pivots to canonical residues.
    for i in 0..out.len() {
        let Pivot { col, exponent } = pivots[i];
        let (above, rest) = out.split_at_mut(i);
        let piv = &rest[0];
        for row in above.iter_mut() {
            let x = row[col];
            let low = ring.truncate(x, exponent);
            if low != x {
                let q = ring.neg(ring.shift_down(ring.sub(x, low), exponent));
                axpy(ring, row, q, piv);
            }
        }
    }
    Howell { matrix: Mat::from_rows(cols, out), pivots }
}

impl Howell {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    /// `log_p` of the number of elements of the span.
    pub fn log_order(&self, ring: &ChainRing) -> u64 {
        self.pivots.iter().map(|p| (ring.precision() - p.exponent) as u64).sum()
    }

    /// Canonical representative of `v` modulo the span.
    pub fn reduce(&self, ring: &ChainRing, v: &[RingElem]) -> Vec<RingElem> {
        let mut cur = v.to_vec();
        for (i, p) in self.pivots.iter().enumerate() {
            let x = cur[p.col];
            let low = ring.truncate(x, p.exponent);
            if low != x {
                let q = ring.neg(ring.shift_down(ring.sub(x, low), p.exponent));
                axpy(ring, &mut cur, q, self.matrix.row(i));
            }
        }
        cur
    }

    pub fn contains(&self, ring: &ChainRing, v: &[RingElem]) -> bool {
        self.reduce(ring, v).iter().all(|x| x.0 == 0)
    }

    pub fn contains_span(&self, ring: &ChainRing, other: &Howell) -> bool {
        (0..other.matrix.rows()).all(|i| self.contains(ring, other.matrix.row(i)))
    }
}

/// Precomputed Howell form of `[M | I]`, answering `x·M = y` and `ker M`.
#[derive(Clone, Debug)]
pub struct SpanSolver {
    ring: ChainRing,
    cols: usize,
    rows: usize,
    howell: Howell,
}

impl SpanSolver {
    pub fn new(ring: &ChainRing, m: &Mat) -> Self {
        let aug = m.hstack(&Mat::identity(ring, m.rows()));
        SpanSolver { ring: ring.clone(), cols: m.cols(), rows: m.rows(), howell: howell_form(ring, &aug) }
    }

    /// Some `x` with `x·M = y`, or `None`.
    pub fn solve(&self, y: &[RingElem]) -> Option<Vec<RingElem>> {
        assert_eq!(y.len(), self.cols);
        let ring = &self.ring;
        let mut cur = y.to_vec();
        cur.resize(self.cols + self.rows, RingElem::ZERO);
        for (i, p) in self.howell.pivots.iter().enumerate() {
            if p.col >= self.cols {
                break;
            }
            let x = cur[p.col];
            if x.0 == 0 {
                continue;
            }
            if ring.valuation(x) < p.exponent {
                return None;
            }
            let q = ring.neg(ring.shift_down(x, p.exponent));
            axpy(ring, &mut cur, q, self.howell.matrix.row(i));
        }
        if cur[..self.cols].iter().any(|x| x.0 != 0) {
            return None;
        }
        Some(cur[self.cols..].iter().map(|&x| ring.neg(x)).collect())
    }

    /// Howell form of `{x : x·M = 0}`.
    pub fn kernel(&self) -> Howell {
        let mut rows = Vec::new();
        let mut pivots = Vec::new();
        for (i, p) in self.howell.pivots.iter().enumerate() {
            if p.col >= self.cols {
                rows.push(self.howell.matrix.row(i)[self.cols..].to_vec());
                pivots.push(Pivot { col: p.col - self.cols, exponent: p.exponent });
            }
        }
        Howell { matrix: Mat::from_rows(self.rows, rows), pivots }
    }

    /// Howell form of the row span of `M`.
    pub fn image(&self) -> Howell {
        howell_form(&self.ring, &Mat::from_rows(
            self.cols,
            self.howell
                .pivots
                .iter()
                .enumerate()
                .filter(|(_, p)| p.col < self.cols)
                .map(|(i, _)| self.howell.matrix.row(i)[..self.cols].to_vec())
                .collect(),
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineSolution {
    NoSolution,
    Solution { particular: Vec<RingElem>, kernel: Howell },
}

/// Solve `M·x = b` (column convention). The particular solution is
/// reduced modulo the kernel, so it is canonical.
pub fn solve_affine(ring: &ChainRing, m: &Mat, b: &[RingElem]) -> Result<AffineSolution> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {} but matrix has {} rows",
            b.len(),
            m.rows()
        )));
    }
    let solver = SpanSolver::new(ring, &m.transpose());
    Ok(match solver.solve(b) {
        None => AffineSolution::NoSolution,
        Some(x) => {
            let kernel = solver.kernel();
            AffineSolution::Solution { particular: kernel.reduce(ring, &x), kernel }
        }
    })
}

/// Every element of the span of a Howell form, each exactly once.
pub fn enumerate_span(ring: &ChainRing, h: &Howell) -> Vec<Vec<RingElem>> {
    let n = ring.precision();
    let mut out = vec![vec![RingElem::ZERO; h.cols()]];
    for (i, p) in h.pivots.iter().enumerate() {
        // coefficients modulo ann(π^e) = π^{N-e}
        let coeffs: Vec<RingElem> =
            ring.elements().filter(|&c| c == ring.truncate(c, n - p.exponent)).collect();
        let row = h.matrix.row(i);
        let mut next = Vec::with_capacity(out.len() * coeffs.len());
        for v in &out {
            for &c in &coeffs {
                let mut w = v.clone();
                axpy(ring, &mut w, c, row);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// A finitely generated `R`-module `⊕ R/π^{d_i}` with chosen generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation {
    /// Weakly increasing, all positive; `d = N` is a free summand.
    pub exponents: Vec<usize>,
    /// Row `i` is the ambient vector of generator `i`.
    pub generators: Mat,
}

impl ModulePresentation {
    pub fn log_order(&self) -> u64 {
        self.exponents.iter().map(|&d| d as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents_string(&self) -> String {
        let e: Vec<String> = self.exponents.iter().map(|d| d.to_string()).collect();
        format!("exponents=[{}]", e.join(","))
    }
}

/// Smith form data: `U·Q·V = D` with `D` diagonal `π^{d_i}`.
/// Only `V^{-1}` is kept, which is what presentations need.
struct Smith {
    diag: Vec<usize>,
    v_inv: Mat,
}

fn smith(ring: &ChainRing, q: &Mat) -> Smith {
    let n = ring.precision();
    let k = q.cols();
    let mut d = q.clone();
    let mut v_inv = Mat::identity(ring, k);
    let mut diag = Vec::new();
    let steps = d.rows().min(k);
    for s in 0..steps {
        let mut best: Option<(usize, usize, usize)> = None;
        'search: for i in s..d.rows() {
            for j in s..k {
                let v = ring.valuation(d[(i, j)]);
                if v < n && best.map_or(true, |(_, _, bv)| v < bv) {
                    best = Some((i, j, v));
                    if v == 0 {
                        break 'search;
                    }
                }
            }
        }
        let Some((bi, bj, v)) = best else { break };
        if bi != s {
            for j in 0..k {
                let tmp = d[(s, j)];
                d[(s, j)] = d[(bi, j)];
                d[(bi, j)] = tmp;
            }
        }
        if bj != s {
            for i in 0..d.rows() {
                let tmp = d[(i, s)];
                d[(i, s)] = d[(i, bj)];
                d[(i, bj)] = tmp;
            }
            for j in 0..k {
                let tmp = v_inv[(s, j)];
                v_inv[(s, j)] = v_inv[(bj, j)];
                v_inv[(bj, j)] = tmp;
            }
        }
        let unit = ring.shift_down(d[(s, s)], v);
        let inv = ring.unit_inverse(unit).expect("unit");
        for j in 0..k {
            d[(s, j)] = ring.mul(d[(s, j)], inv);
        }
        let pivot_row = d.row(s).to_vec();
        for i in 0..d.rows() {
            if i == s || d[(i, s)].0 == 0 {
                continue;
            }
            let c = ring.neg(ring.shift_down(d[(i, s)], v));
            axpy(ring, d.row_mut(i), c, &pivot_row);
        }
        for j in 0..k {
            if j == s || d[(s, j)].0 == 0 {
                continue;
            }
            let c = ring.shift_down(d[(s, j)], v);
            // column op: col_j -= c·col_s, so V^{-1}: row_s += c·row_j
            for i in 0..d.rows() {
                let x = d[(i, s)];
                if x.0 != 0 {
                    d[(i, j)] = ring.sub(d[(i, j)], ring.mul(c, x));
                }
            }
            let row_j = v_inv.row(j).to_vec();
            axpy(ring, v_inv.row_mut(s), c, &row_j);
        }
        diag.push(v);
    }
    Smith { diag, v_inv }
}

/// Presentation of `span(Z)/span(B)`. Generators are chosen inside `span(Z)`.
pub fn subquotient_presentation(ring: &ChainRing, z: &Mat, b: &Mat) -> Result<ModulePresentation> {
    if z.cols() != b.cols() {
        return Err(Error::DimensionMismatch("Z and B have different widths".into()));
    }
    let zh = howell_form(ring, z);
    let zm = &zh.matrix;
    let k = zm.rows();
    let solver = SpanSolver::new(ring, zm);
    let mut relations = solver.kernel().matrix;
    for i in 0..b.rows() {
        let c = solver.solve(b.row(i)).ok_or(Error::NotASubspace(i))?;
        relations.push_row(&c);
    }
    let n = ring.precision();
    let sm = smith(ring, &relations);
    let mut summands: Vec<(usize, usize)> = (0..k)
        .map(|i| (sm.diag.get(i).copied().unwrap_or(n), i))
        .filter(|&(d, _)| d > 0)
        .collect();
    summands.sort_by_key(|&(d, i)| (d, i));
    let generators = Mat::from_rows(
        zm.cols(),
        summands.iter().map(|&(_, i)| vec_mat(ring, sm.v_inv.row(i), zm)).collect(),
    );
    Ok(ModulePresentation { exponents: summands.iter().map(|&(d, _)| d).collect(), generators })
}

/// Coordinates of elements of `span(Z)/span(B)` relative to a presentation.
#[derive(Clone, Debug)]
pub struct QuotientCoordinates {
    ring: ChainRing,
    exponents: Vec<usize>,
    solver: SpanSolver,
}

impl QuotientCoordinates {
    pub fn new(ring: &ChainRing, presentation: &ModulePresentation, b: &Mat) -> Self {
        let stacked = presentation.generators.vstack(b);
        QuotientCoordinates {
            ring: ring.clone(),
            exponents: presentation.exponents.clone(),
            solver: SpanSolver::new(ring, &stacked),
        }
    }

    /// Canonical coordinates (digits below `d_i`) of `v`, or `None` when `v`
    /// is outside `span(Z)`.
    pub fn coordinates(&self, v: &[RingElem]) -> Option<Vec<RingElem>> {
        let x = self.solver.solve(v)?;
        Some(
            self.exponents
                .iter()
                .enumerate()
                .map(|(i, &d)| self.ring.truncate(x[i], d))
                .collect(),
        )
    }
}

/// A subgroup of `⊕ R/π^{d_i}`. Only closure under addition is assumed, so
/// over a ramified ring this is finer than an `R`-submodule. Vectors are
/// embedded in `(Z/p^M)^{ne}` through their `Z_p`-coordinates (coordinate `j`
/// scaled by `p^{M-k_j}`), where subgroups are spans with a Howell form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub exponents: Vec<usize>,
    lattice: ChainRing,
    span: Howell,
}

impl Subgroup {
    fn lattice_ring(ring: &ChainRing) -> ChainRing {
        let m = ring.coordinate_moduli().iter().map(|&q| q.max(1).ilog(ring.p()) as usize).max().unwrap_or(1);
        ChainRing::unramified(ring.p(), m.max(1)).expect("smaller than the ring itself")
    }

    fn embed(ring: &ChainRing, lattice: &ChainRing, v: &[RingElem]) -> Vec<RingElem> {
        let big = lattice.size();
        let mut out = Vec::with_capacity(v.len() * ring.ramification());
        for &x in v {
            for (c, &q) in ring.zp_coordinates(x).into_iter().zip(ring.coordinate_moduli()) {
                out.push(RingElem(c * (big / q)));
            }
        }
        out
    }

    fn unembed(ring: &ChainRing, lattice: &ChainRing, w: &[RingElem]) -> Vec<RingElem> {
        let big = lattice.size();
        let moduli = ring.coordinate_moduli();
        w.chunks(ring.ramification())
            .map(|chunk| {
                let c: Vec<u64> = chunk.iter().zip(moduli).map(|(y, &q)| y.0 / (big / q)).collect();
                ring.from_zp_coordinates(&c)
            })
            .collect()
    }

    /// Rows spanning the relations `π^{d_i} R e_i` additively.
    fn relations(ring: &ChainRing, exponents: &[usize]) -> Vec<Vec<RingElem>> {
        let k = exponents.len();
        let mut rows = Vec::new();
        for (i, &d) in exponents.iter().enumerate() {
            for j in 0..ring.ramification() {
                let mut v = vec![ring.zero(); k];
                v[i] = ring.mul(ring.pi_pow(d), ring.pi_pow(j));
                rows.push(v);
            }
        }
        rows
    }

    fn lattice_span(ring: &ChainRing, lattice: &ChainRing, rows: &[Vec<RingElem>], cols: usize) -> Howell {
        let m = Mat::from_rows(cols * ring.ramification(), rows.iter().map(|g| Self::embed(ring, lattice, g)).collect());
        howell_form(lattice, &m)
    }

    pub fn generated_by(ring: &ChainRing, exponents: &[usize], gens: &[Vec<RingElem>]) -> Self {
        let lattice = Self::lattice_ring(ring);
        let mut rows = Self::relations(ring, exponents);
        rows.extend(gens.iter().cloned());
        let span = Self::lattice_span(ring, &lattice, &rows, exponents.len());
        Subgroup { exponents: exponents.to_vec(), lattice, span }
    }

    /// The `R`-submodule spanned by `gens`.
    pub fn submodule(ring: &ChainRing, exponents: &[usize], gens: &[Vec<RingElem>]) -> Self {
        let scaled: Vec<Vec<RingElem>> = gens
            .iter()
            .flat_map(|g| (0..ring.ramification()).map(move |j| g.iter().map(|&x| ring.mul(ring.pi_pow(j), x)).collect()))
            .collect();
        Self::generated_by(ring, exponents, &scaled)
    }

    pub fn whole(ring: &ChainRing, exponents: &[usize]) -> Self {
        let k = exponents.len();
        let mut gens = Vec::new();
        for i in 0..k {
            for j in 0..ring.ramification() {
                let mut v = vec![ring.zero(); k];
                v[i] = ring.pi_pow(j);
                gens.push(v);
            }
        }
        Self::generated_by(ring, exponents, &gens)
    }

    pub fn trivial(ring: &ChainRing, exponents: &[usize]) -> Self {
        Self::generated_by(ring, exponents, &[])
    }

    /// `log_p` of the number of elements.
    pub fn log_order(&self, ring: &ChainRing) -> u64 {
        let rel = Self::lattice_span(ring, &self.lattice, &Self::relations(ring, &self.exponents), self.exponents.len());
        self.span.log_order(&self.lattice) - rel.log_order(&self.lattice)
    }

    pub fn contains(&self, ring: &ChainRing, v: &[RingElem]) -> bool {
        self.span.contains(&self.lattice, &Self::embed(ring, &self.lattice, v))
    }

    pub fn is_subgroup_of(&self, _ring: &ChainRing, other: &Subgroup) -> bool {
        other.span.contains_span(&self.lattice, &self.span)
    }

    /// Canonical reduced generators, zero rows (relations) dropped.
    pub fn generators(&self, ring: &ChainRing) -> Vec<Vec<RingElem>> {
        let mut out: Vec<Vec<RingElem>> = Vec::new();
        for i in 0..self.span.matrix.rows() {
            let v: Vec<RingElem> = Self::unembed(ring, &self.lattice, self.span.matrix.row(i))
                .iter()
                .zip(&self.exponents)
                .map(|(&x, &d)| ring.truncate(x, d))
                .collect();
            if v.iter().any(|x| x.0 != 0) && !out.contains(&v) {
                out.push(v);
            }
        }
        out
    }

    /// Every element, with canonical coordinates. Only sensible for small groups.
    pub fn elements(&self, ring: &ChainRing) -> Vec<Vec<RingElem>> {
        let mut all: Vec<Vec<RingElem>> = enumerate_span(&self.lattice, &self.span)
            .iter()
            .map(|w| {
                Self::unembed(ring, &self.lattice, w).iter().zip(&self.exponents).map(|(&x, &d)| ring.truncate(x, d)).collect()
            })
            .collect();
        all.sort();
        all.dedup();
        all
    }
}

/// All coordinate vectors of `⊕ R/π^{d_i}` with canonical digits.
pub fn enumerate_module(ring: &ChainRing, exponents: &[usize]) -> Vec<Vec<RingElem>> {
    let mut out = vec![Vec::new()];
    for &d in exponents {
        let reps: Vec<RingElem> = ring.elements().filter(|&c| ring.truncate(c, d) == c).collect();
        let mut next = Vec::with_capacity(out.len() * reps.len());
        for v in &out {
            for &c in &reps {
                let mut w = v.clone();
                w.push(c);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// Format `p^k` as a decimal number when it fits.
pub fn format_order(p: u64, log_order: u64) -> String {
    let mut acc: u128 = 1;
    for _ in 0..log_order {
        match acc.checked_mul(p as u128) {
            Some(v) => acc = v,
            None => return format!("{p}^{log_order}"),
        }
    }
    acc.to_string()
}
