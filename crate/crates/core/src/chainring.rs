//! Finite chain rings `O/π^N`.
//!
//! `O` is either the `p`-adic integers (unramified, `π = p`) or a totally
//! ramified extension `Z_p[t]/(E(t))` for an Eisenstein polynomial `E` of
//! degree `e`, with uniformizer `π = t`.
//!
//! Internally an element is stored as its coordinate vector in the
//! `Z_p`-basis `1, t, ..., t^{e-1}`. The ideal `t^N O` is diagonal in that
//! basis (`t^N O = ⊕ p^{m_j} Z_p t^j` with `m_j = ⌈(N - j)/e⌉`), so reducing
//! each coordinate modulo `p^{m_j}` gives a unique canonical form, which is
//! packed into a single `u64` in mixed radix. The canonical `π`-adic digit
//! expansion over the transversal `{0, ..., p-1}` is available through
//! [`ChainRing::digits`] and [`ChainRing::from_digits`].

use std::fmt;

use crate::error::{Error, Result};

/// An element of a [`ChainRing`]. Only meaningful together with the ring it
/// was produced by.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElem(pub(crate) u64);

impl RingElem {
    pub const ZERO: RingElem = RingElem(0);

    /// Raw packed code. Stable for a fixed ring; used for hashing and ordering.
    pub fn code(self) -> u64 {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    Unramified,
    /// Coefficients `c_0, ..., c_{e-1}` of `E(t) = t^e + c_{e-1} t^{e-1} + ... + c_0`.
    Eisenstein(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingSpec {
    pub kind: RingKind,
    pub p: u64,
    pub precision: usize,
}

impl RingSpec {
    pub fn unramified(p: u64, precision: usize) -> Self {
        RingSpec { kind: RingKind::Unramified, p, precision }
    }

    pub fn eisenstein(p: u64, coeffs: Vec<i64>, precision: usize) -> Self {
        RingSpec { kind: RingKind::Eisenstein(coeffs), p, precision }
    }

    pub fn with_precision(&self, precision: usize) -> Self {
        RingSpec { precision, ..self.clone() }
    }
}

// Rings larger than this are rejected so that products of two coordinates
// always fit in a u128.
const MAX_RING_BITS: u32 = 60;

/// The ring `O/π^N`. Immutable after construction.
#[derive(Clone, Debug)]
pub struct ChainRing {
    spec: RingSpec,
    p: u64,
    e: usize,
    n: usize,
    /// `p^{m_j}` for each coordinate `j < e`.
    moduli: Vec<u64>,
    /// Mixed-radix place values of the coordinates.
    places: Vec<u64>,
    /// `p^M` with `M = max m_j`; intermediate arithmetic happens modulo this.
    big_modulus: u128,
    /// `t^e = Σ rule[j] t^j` modulo `p^M`.
    rule: Vec<u128>,
    /// `t^i` for `i < N`.
    t_pows: Vec<RingElem>,
    /// Inverse modulo `p` of the residue of `t^e / p`.
    w0_inv: u64,
    size: u64,
}

impl PartialEq for ChainRing {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for ChainRing {}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

impl ChainRing {
    pub fn new(spec: RingSpec) -> Result<Self> {
        let p = spec.p;
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if spec.precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        let n = spec.precision;
        // t^e = Σ rule_j t^j over the integers.
        let rule_int: Vec<i128> = match &spec.kind {
            RingKind::Unramified => vec![p as i128],
            RingKind::Eisenstein(c) => {
                let pp = p as i128;
                let eisenstein = c.len() >= 2
                    && c.iter().all(|&ci| (ci as i128).rem_euclid(pp) == 0)
                    && (c[0] as i128).rem_euclid(pp * pp) != 0;
                if !eisenstein {
                    return Err(Error::NotEisenstein(c.clone()));
                }
                c.iter().map(|&ci| -(ci as i128)).collect()
            }
        };
        let e = rule_int.len();
        if e > 8 {
            return Err(Error::RingTooLarge { p, precision: spec.precision });
        }
        let bits = (n as f64) * (p as f64).log2();
        if bits > MAX_RING_BITS as f64 {
            return Err(Error::RingTooLarge { p, precision: n });
        }
        let moduli: Vec<u64> = (0..e)
            .map(|j| {
                let m = if n > j { (n - j).div_ceil(e) } else { 0 };
                p.pow(m as u32)
            })
            .collect();
        let mut places = Vec::with_capacity(e);
        let mut acc = 1u64;
        for &m in &moduli {
            places.push(acc);
            acc *= m;
        }
        let size = acc;
        let big_modulus = moduli[0] as u128;
        let rule: Vec<u128> = rule_int
            .iter()
            .map(|&r| r.rem_euclid(big_modulus as i128) as u128)
            .collect();
        // t^e = p·w with w = -Σ (c_j/p) t^j; only the residue of w matters here.
        let w0 = ((rule_int[0] / p as i128).rem_euclid(p as i128)) as u64;
        let w0_inv = inv_mod(w0, p).expect("Eisenstein constant term has valuation one");
        let mut ring = ChainRing {
            spec,
            p,
            e,
            n,
            moduli,
            places,
            big_modulus,
            rule,
            t_pows: Vec::new(),
            w0_inv,
            size,
        };
        let mut pows = Vec::with_capacity(n);
        let t = ring.uniformizer_raw();
        let mut cur = ring.one();
        for _ in 0..n {
            pows.push(cur);
            cur = ring.mul(cur, t);
        }
        ring.t_pows = pows;
        Ok(ring)
    }

    pub fn unramified(p: u64, precision: usize) -> Result<Self> {
        Self::new(RingSpec::unramified(p, precision))
    }

    pub fn eisenstein(p: u64, coeffs: Vec<i64>, precision: usize) -> Result<Self> {
        Self::new(RingSpec::eisenstein(p, coeffs, precision))
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Nilpotency index `N` of the uniformizer.
    pub fn precision(&self) -> usize {
        self.n
    }

    pub fn ramification(&self) -> usize {
        self.e
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    /// Same `O`, different truncation.
    pub fn with_precision(&self, precision: usize) -> Result<Self> {
        Self::new(self.spec.with_precision(precision))
    }

    fn decode(&self, x: RingElem) -> [u128; 8] {
        let mut out = [0u128; 8];
        if self.e == 1 {
            out[0] = x.0 as u128;
            return out;
        }
        for j in 0..self.e {
            out[j] = ((x.0 / self.places[j]) % self.moduli[j]) as u128;
        }
        out
    }

    fn encode(&self, coords: &[u128]) -> RingElem {
        let mut code = 0u64;
        for j in 0..self.e {
            let m = self.moduli[j] as u128;
            code += ((coords[j] % m) as u64) * self.places[j];
        }
        RingElem(code)
    }

    /// Coordinates in the `Z_p`-basis `1, t, …, t^{e-1}`; coordinate `j` is
    /// taken modulo `coordinate_moduli()[j]`.
    pub fn zp_coordinates(&self, a: RingElem) -> Vec<u64> {
        self.decode(a)[..self.e].iter().map(|&c| c as u64).collect()
    }

    pub fn from_zp_coordinates(&self, coords: &[u64]) -> RingElem {
        let mut c = [0u128; 8];
        for (x, &y) in c.iter_mut().zip(coords) {
            *x = y as u128;
        }
        self.encode(&c)
    }

    pub fn coordinate_moduli(&self) -> &[u64] {
        &self.moduli
    }

    fn uniformizer_raw(&self) -> RingElem {
        if self.n == 1 {
            return RingElem(0);
        }
        if self.e == 1 {
            RingElem(self.p % self.size)
        } else {
            let mut c = [0u128; 8];
            c[1] = 1;
            self.encode(&c)
        }
    }

    pub fn zero(&self) -> RingElem {
        RingElem(0)
    }

    pub fn one(&self) -> RingElem {
        RingElem(1 % self.size)
    }

    /// The uniformizer `π`.
    pub fn pi(&self) -> RingElem {
        self.uniformizer_raw()
    }

    /// `π^k` (zero for `k >= N`).
    pub fn pi_pow(&self, k: usize) -> RingElem {
        self.t_pows.get(k).copied().unwrap_or(RingElem(0))
    }

    /// Image of an integer.
    pub fn from_int(&self, v: i64) -> RingElem {
        let m = self.moduli[0] as i128;
        let r = (v as i128).rem_euclid(m) as u128;
        let mut c = [0u128; 8];
        c[0] = r;
        self.encode(&c)
    }

    pub fn add(&self, a: RingElem, b: RingElem) -> RingElem {
        if self.e == 1 {
            let s = a.0 + b.0;
            return RingElem(if s >= self.size { s - self.size } else { s });
        }
        let (x, y) = (self.decode(a), self.decode(b));
        let mut c = [0u128; 8];
        for j in 0..self.e {
            c[j] = x[j] + y[j];
        }
        self.encode(&c)
    }

    pub fn neg(&self, a: RingElem) -> RingElem {
        if self.e == 1 {
            return RingElem(if a.0 == 0 { 0 } else { self.size - a.0 });
        }
        let x = self.decode(a);
        let mut c = [0u128; 8];
        for j in 0..self.e {
            let m = self.moduli[j] as u128;
            c[j] = (m - x[j] % m) % m;
        }
        self.encode(&c)
    }

    pub fn sub(&self, a: RingElem, b: RingElem) -> RingElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: RingElem, b: RingElem) -> RingElem {
        if self.e == 1 {
            return RingElem(((a.0 as u128 * b.0 as u128) % self.size as u128) as u64);
        }
        let (x, y) = (self.decode(a), self.decode(b));
        let m = self.big_modulus;
        let e = self.e;
        let mut prod = [0u128; 16];
        for i in 0..e {
            if x[i] == 0 {
                continue;
            }
            for j in 0..e {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % m;
            }
        }
        for k in (e..2 * e - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..e {
                prod[k - e + j] = (prod[k - e + j] + c * self.rule[j]) % m;
            }
        }
        self.encode(&prod[..e])
    }

    /// `a + b·c`, the inner step of every elimination loop.
    pub fn mul_add(&self, a: RingElem, b: RingElem, c: RingElem) -> RingElem {
        if self.e == 1 {
            let v = (a.0 as u128 + b.0 as u128 * c.0 as u128) % self.size as u128;
            return RingElem(v as u64);
        }
        self.add(a, self.mul(b, c))
    }

    pub fn pow(&self, a: RingElem, mut k: u64) -> RingElem {
        let mut acc = self.one();
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn is_zero(&self, a: RingElem) -> bool {
        a.0 == 0
    }

    pub fn is_unit(&self, a: RingElem) -> bool {
        self.valuation(a) == 0
    }

    pub fn unit_inverse(&self, a: RingElem) -> Option<RingElem> {
        if !self.is_unit(a) {
            return None;
        }
        if self.e == 1 {
            return inv_mod(a.0, self.size).map(RingElem);
        }
        // |R^×| = (p-1)·p^{N-1}
        let order = (self.p - 1) * self.p.pow(self.n as u32 - 1);
        Some(self.pow(a, order - 1))
    }

    /// Largest `v` with `x ∈ π^v R`; `N` for zero.
    pub fn valuation(&self, a: RingElem) -> usize {
        if a.0 == 0 {
            return self.n;
        }
        if self.e == 1 {
            let mut v = 0;
            let mut x = a.0;
            while x % self.p == 0 {
                x /= self.p;
                v += 1;
            }
            return v;
        }
        let x = self.decode(a);
        let mut best = self.n;
        for j in 0..self.e {
            if x[j] == 0 {
                continue;
            }
            let mut k = 0;
            let mut c = x[j];
            while c % self.p as u128 == 0 {
                c /= self.p as u128;
                k += 1;
            }
            best = best.min(k * self.e + j);
        }
        best
    }

    /// Canonical `π`-adic digits `d_0, ..., d_{N-1}` in `{0, ..., p-1}`.
    pub fn digits(&self, a: RingElem) -> Vec<u64> {
        let mut out = vec![0u64; self.n];
        if self.e == 1 {
            let mut x = a.0;
            for d in out.iter_mut() {
                *d = x % self.p;
                x /= self.p;
            }
            return out;
        }
        let mut x = a;
        let p = self.p as u128;
        for i in 0..self.n {
            if x.0 == 0 {
                break;
            }
            if self.valuation(x) > i {
                continue;
            }
            let (j, k) = (i % self.e, i / self.e);
            let c = self.decode(x)[j];
            let unit = (c / p.pow(k as u32)) % p;
            // p^k t^j ≡ w0^{-k} t^i modulo t^{i+1}
            let d = ((unit as u64) * pow_mod(self.w0_inv, k as u64, self.p)) % self.p;
            out[i] = d;
            x = self.sub(x, self.mul(self.from_int(d as i64), self.t_pows[i]));
        }
        debug_assert_eq!(x.0, 0);
        out
    }

    /// Inverse of [`ChainRing::digits`]; missing digits are zero, extra digits
    /// beyond the precision are ignored.
    pub fn from_digits(&self, digits: &[u64]) -> RingElem {
        if self.e == 1 {
            let mut v = 0u64;
            for &d in digits.iter().take(self.n).rev() {
                v = v * self.p + d % self.p;
            }
            return RingElem(v);
        }
        let mut acc = self.zero();
        for (i, &d) in digits.iter().take(self.n).enumerate() {
            if d % self.p != 0 {
                acc = self.mul_add(acc, self.from_int((d % self.p) as i64), self.t_pows[i]);
            }
        }
        acc
    }

    /// Digits of `a` below `k` kept, the rest cleared: the canonical
    /// representative of `a mod π^k` inside this ring.
    pub fn truncate(&self, a: RingElem, k: usize) -> RingElem {
        if k >= self.n {
            return a;
        }
        if self.e == 1 {
            return RingElem(a.0 % self.p.pow(k as u32));
        }
        if self.valuation(a) >= k {
            return self.zero();
        }
        let d = self.digits(a);
        self.from_digits(&d[..k])
    }

    /// `q` with `π^k·q = a` and the top `k` digits of `q` zero.
    /// Requires `val(a) >= k`.
    pub fn shift_down(&self, a: RingElem, k: usize) -> RingElem {
        debug_assert!(self.valuation(a) >= k);
        if k == 0 {
            return a;
        }
        if self.e == 1 {
            return RingElem(a.0 / self.p.pow(k as u32));
        }
        let d = self.digits(a);
        self.from_digits(&d[k..])
    }

    /// Exact division by `π^k`. The quotient is only defined modulo
    /// `π^{N-k}`, so it is returned as an element of `self.with_precision(N - k)`.
    pub fn exact_div_pi(&self, a: RingElem, k: usize) -> Result<RingElem> {
        let v = self.valuation(a);
        if v < k {
            return Err(Error::InsufficientValuation { valuation: v, required: k });
        }
        if k >= self.n {
            return Err(Error::BadPrecision(format!(
                "cannot divide by π^{k} in a ring of precision {}",
                self.n
            )));
        }
        let q = self.shift_down(a, k);
        if self.e == 1 {
            return Ok(RingElem(q.0 % self.p.pow((self.n - k) as u32)));
        }
        let target = self.with_precision(self.n - k)?;
        Ok(target.from_digits(&self.digits(q)))
    }

    /// Reduction map into `target`, which must be the same `O` at a lower or
    /// equal precision.
    pub fn reduce_into(&self, target: &ChainRing, a: RingElem) -> RingElem {
        debug_assert!(target.n <= self.n && target.spec.kind == self.spec.kind);
        if self.e == 1 {
            return RingElem(a.0 % target.size);
        }
        target.from_digits(&self.digits(a))
    }

    /// Canonical digit lift from `source` (lower precision) into this ring.
    pub fn lift_from(&self, source: &ChainRing, a: RingElem) -> RingElem {
        debug_assert!(source.n <= self.n && source.spec.kind == self.spec.kind);
        if self.e == 1 {
            return a;
        }
        self.from_digits(&source.digits(a))
    }

    /// Reduction to the residue field `F_p`.
    pub fn residue(&self, a: RingElem) -> u64 {
        if self.e == 1 {
            a.0 % self.p
        } else {
            self.digits(a)[0]
        }
    }

    /// All elements, in code order. Only sensible for small rings.
    pub fn elements(&self) -> impl Iterator<Item = RingElem> {
        (0..self.size).map(RingElem)
    }

    /// Compact human-readable form: an integer for unramified rings, a
    /// polynomial in `t` otherwise.
    pub fn format(&self, a: RingElem) -> String {
        if self.e == 1 {
            return a.0.to_string();
        }
        let digits = self.digits(a);
        let terms: Vec<String> = digits
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(i, &d)| match (i, d) {
                (0, d) => d.to_string(),
                (1, 1) => "t".to_string(),
                (1, d) => format!("{d}t"),
                (i, 1) => format!("t^{i}"),
                (i, d) => format!("{d}t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }
}

impl fmt::Display for ChainRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.spec.kind {
            RingKind::Unramified => write!(f, "Z/{}", self.size),
            RingKind::Eisenstein(c) => {
                write!(f, "Z_{}[t]/(", self.p)?;
                write!(f, "t^{}", c.len())?;
                for (i, &ci) in c.iter().enumerate().rev() {
                    if ci == 0 {
                        continue;
                    }
                    let sign = if ci < 0 { '-' } else { '+' };
                    match i {
                        0 => write!(f, "{sign}{}", ci.abs())?,
                        1 => write!(f, "{sign}{}t", ci.abs())?,
                        _ => write!(f, "{sign}{}t^{i}", ci.abs())?,
                    }
                }
                write!(f, ", t^{})", self.n)
            }
        }
    }
}
