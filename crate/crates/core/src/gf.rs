//! Exact arithmetic in GF(p^h).
//!
//! Elements are stored as their index in the deterministic enumeration
//! order: the polynomial `c_0 + c_1 x + ... + c_{h-1} x^{h-1}` has index
//! `c_0 + c_1 p + ... + c_{h-1} p^{h-1}`. Zero is index 0 and one is index 1.
//! Small fields (q <= 512) keep full addition and multiplication tables;
//! larger fields fall back to polynomial arithmetic on the coefficients.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{usage, Error, Result};

const TABLE_LIMIT: u32 = 512;
const MAX_ORDER: u64 = 1 << 22;

/// The defining data of a finite field: characteristic, degree and modulus.
///
/// `modulus` holds the `h + 1` coefficients of the monic modulus, lowest
/// degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub h: u32,
    pub modulus: Vec<u32>,
}

/// A field element, identified by its enumeration index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Inner {
    spec: FieldSpec,
    q: u32,
    /// p^i for i in 0..=h.
    pow_p: Vec<u32>,
    add_tab: Option<Vec<u16>>,
    mul_tab: Option<Vec<u16>>,
    neg_tab: Vec<u32>,
    inv_tab: Vec<u32>,
    /// frob_tab[e][a] = a^(p^e).
    frob_tab: Vec<Vec<u32>>,
}

/// Shared arithmetic context for one GF(p^h). Cloning is cheap.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.spec.p, self.0.spec.h)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power into `(p, h)`; `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let mut rest = q;
    let mut h = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        h += 1;
    }
    (rest == 1).then_some((p as u32, h))
}

// Dense polynomials over GF(p), lowest degree first, no trailing zeros.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn mod_inv_prime(a: u32, p: u32) -> u32 {
    // a^(p-2) mod p
    let mut base = a as u64 % p as u64;
    let mut exp = p as u64 - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc as u32
}

fn poly_divrem(a: &[u32], b: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let mut rem = a.to_vec();
    poly_trim(&mut rem);
    let db = b.len() - 1;
    let lead_inv = mod_inv_prime(b[db], p) as u64;
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![0u32; rem.len() - db];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = (*rem.last().unwrap() as u64 * lead_inv % p as u64) as u32;
        quot[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            let t = (c as u64 * bi as u64) % p as u64;
            let slot = &mut rem[shift + i];
            *slot = ((*slot as u64 + p as u64 - t) % p as u64) as u32;
        }
        poly_trim(&mut rem);
    }
    poly_trim(&mut quot);
    (quot, rem)
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
    poly_trim(&mut out);
    out
}

fn poly_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let len = a.len().max(b.len());
    let mut out = vec![0u32; len];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = (x + p - y) % p;
    }
    poly_trim(&mut out);
    out
}

/// Irreducibility by trial division with every monic polynomial of degree
/// 1..=deg/2.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut rest = low;
            for _ in 0..d {
                g.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            g.push(1);
            let (_, r) = poly_divrem(f, &g, p);
            if r.is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// The field GF(p^h) with the lexicographically least monic irreducible
    /// modulus (coefficients compared from the highest degree down).
    pub fn new(p: u32, h: u32) -> Result<FieldSpec> {
        if !is_prime(p as u64) {
            return usage(format!("characteristic {p} is not prime"));
        }
        if h == 0 {
            return usage("extension degree must be at least 1");
        }
        let q = (p as u64).checked_pow(h).filter(|&q| q <= MAX_ORDER);
        if q.is_none() {
            return usage(format!("GF({p}^{h}) is larger than supported"));
        }
        let h_us = h as usize;
        let count = (p as u64).pow(h);
        for low in 0..count {
            // low enumerates coefficient vectors in increasing numeric order,
            // which is lexicographic from the top coefficient down.
            let mut f = Vec::with_capacity(h_us + 1);
            let mut rest = low;
            for _ in 0..h_us {
                f.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            f.push(1);
            if h == 1 || (f[0] != 0 && is_irreducible(&f, p)) {
                return Ok(FieldSpec { p, h, modulus: f });
            }
        }
        unreachable!("an irreducible polynomial of every degree exists")
    }

    pub fn for_order(q: u64) -> Result<FieldSpec> {
        match prime_power(q) {
            Some((p, h)) => FieldSpec::new(p, h),
            None => usage(format!("{q} is not a prime power")),
        }
    }

    /// Validates a user-supplied modulus.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<FieldSpec> {
        if !is_prime(p as u64) {
            return usage(format!("characteristic {p} is not prime"));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return usage("modulus must be monic of degree at least 1");
        }
        if modulus.iter().any(|&c| c >= p) {
            return usage("modulus coefficients must lie in [0, p)");
        }
        if !is_irreducible(&modulus, p) {
            return usage("modulus is reducible");
        }
        let h = (modulus.len() - 1) as u32;
        Ok(FieldSpec { p, h, modulus })
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.h)
    }
}

impl Field {
    pub fn new(spec: FieldSpec) -> Field {
        let p = spec.p;
        let h = spec.h as usize;
        let mut pow_p = vec![1u32; h + 1];
        for i in 1..=h {
            pow_p[i] = pow_p[i - 1] * p;
        }
        let q = pow_p[h];
        let mut inner = Inner {
            spec,
            q,
            pow_p,
            add_tab: None,
            mul_tab: None,
            neg_tab: Vec::new(),
            inv_tab: Vec::new(),
            frob_tab: Vec::new(),
        };
        let base = Field(Arc::new(Inner {
            spec: inner.spec.clone(),
            q,
            pow_p: inner.pow_p.clone(),
            add_tab: None,
            mul_tab: None,
            neg_tab: Vec::new(),
            inv_tab: Vec::new(),
            frob_tab: Vec::new(),
        }));
        inner.neg_tab = (0..q).map(|a| base.neg_slow(a)).collect();
        if q <= TABLE_LIMIT {
            let mut add = vec![0u16; (q * q) as usize];
            let mut mul = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = base.add_slow(a, b) as u16;
                    mul[(a * q + b) as usize] = base.mul_slow(a, b) as u16;
                }
            }
            inner.add_tab = Some(add);
            inner.mul_tab = Some(mul);
        }
        inner.inv_tab = (0..q)
            .map(|a| if a == 0 { 0 } else { base.inv_euclid(a) })
            .collect();
        let mut frob = Vec::with_capacity(h);
        frob.push((0..q).collect::<Vec<u32>>());
        for e in 1..h {
            let prev: &Vec<u32> = &frob[e - 1];
            let next = prev.iter().map(|&a| base.pow_slow(a, p as u64)).collect();
            frob.push(next);
        }
        inner.frob_tab = frob;
        Field(Arc::new(inner))
    }

    pub fn from_order(q: u64) -> Result<Field> {
        Ok(Field::new(FieldSpec::for_order(q)?))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.spec.p
    }

    #[inline]
    pub fn h(&self) -> u32 {
        self.0.spec.h
    }

    /// Coefficient vector of `a` in the polynomial basis, lowest degree first.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        let p = self.p();
        let mut rest = a.0;
        (0..self.h())
            .map(|_| {
                let c = rest % p;
                rest /= p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.h() as usize || coeffs.iter().any(|&c| c >= self.p()) {
            return usage("coefficient vector does not describe an element of this field");
        }
        Ok(FieldElement(self.encode(coeffs)))
    }

    fn encode(&self, coeffs: &[u32]) -> u32 {
        coeffs
            .iter()
            .zip(&self.0.pow_p)
            .map(|(&c, &w)| c * w)
            .sum()
    }

    /// All p^h elements, zero first and one second.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q()).map(FieldElement)
    }

    /// Embeds an integer as its residue modulo p.
    pub fn from_int(&self, k: i64) -> FieldElement {
        FieldElement(k.rem_euclid(self.p() as i64) as u32)
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.0 < self.q()
    }

    fn check(&self, a: FieldElement) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            usage(format!("element {} does not belong to {:?}", a.0, self))
        }
    }

    // --- slow paths, also used to build the tables ---

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.p();
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for &w in &self.0.pow_p[..self.h() as usize] {
            out += ((a % p + b % p) % p) * w;
            a /= p;
            b /= p;
        }
        out
    }

    fn neg_slow(&self, a: u32) -> u32 {
        let p = self.p();
        let mut a = a;
        let mut out = 0;
        for &w in &self.0.pow_p[..self.h() as usize] {
            out += ((p - a % p) % p) * w;
            a /= p;
        }
        out
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.p();
        let mut pa = self.coeffs(FieldElement(a));
        let mut pb = self.coeffs(FieldElement(b));
        poly_trim(&mut pa);
        poly_trim(&mut pb);
        let prod = poly_mul(&pa, &pb, p);
        let (_, mut r) = poly_divrem(&prod, &self.0.spec.modulus, p);
        r.resize(self.h() as usize, 0);
        self.encode(&r)
    }

    fn pow_slow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    /// Extended Euclid over GF(p)[x] against the modulus.
    fn inv_euclid(&self, a: u32) -> u32 {
        let p = self.p();
        let mut r0 = self.0.spec.modulus.clone();
        let mut r1 = self.coeffs(FieldElement(a));
        poly_trim(&mut r1);
        let mut s0: Vec<u32> = Vec::new();
        let mut s1: Vec<u32> = vec![1];
        while !r1.is_empty() {
            let (quot, rem) = poly_divrem(&r0, &r1, p);
            let s2 = poly_sub(&s0, &poly_mul(&quot, &s1, p), p);
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant; scale s0 by its inverse.
        let c = mod_inv_prime(r0[0], p) as u64;
        let mut inv: Vec<u32> = s0
            .iter()
            .map(|&x| (x as u64 * c % p as u64) as u32)
            .collect();
        inv.resize(self.h() as usize, 0);
        self.encode(&inv)
    }

    // --- hot paths ---

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.0.add_tab {
            Some(t) => FieldElement(t[(a.0 * self.0.q + b.0) as usize] as u32),
            None => FieldElement(self.add_slow(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.0.neg_tab[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.0.mul_tab {
            Some(t) => FieldElement(t[(a.0 * self.0.q + b.0) as usize] as u32),
            None => FieldElement(self.mul_slow(a.0, b.0)),
        }
    }

    /// Multiplicative inverse; zero has none.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElement(self.0.inv_tab[a.index()]))
    }

    /// Inverse for callers that already know `a != 0`.
    #[inline]
    pub(crate) fn inv_nz(&self, a: FieldElement) -> FieldElement {
        debug_assert!(!a.is_zero());
        FieldElement(self.0.inv_tab[a.index()])
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        let mut base = a;
        let mut e = e;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^(p^e)` for `0 <= e < h`.
    pub fn frobenius(&self, a: FieldElement, e: u32) -> Result<FieldElement> {
        self.check(a)?;
        if e >= self.h() {
            return usage(format!("Frobenius exponent {e} outside [0, {})", self.h()));
        }
        Ok(self.frob(a, e))
    }

    #[inline]
    pub(crate) fn frob(&self, a: FieldElement, e: u32) -> FieldElement {
        FieldElement(self.0.frob_tab[e as usize][a.index()])
    }

    /// Checked arithmetic: rejects elements outside this field.
    pub fn try_add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add(a, b))
    }

    pub fn try_mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    /// The subfield GF(p^d) as the fixed points of `x -> x^(p^d)`.
    pub fn subfield(&self, d: u32) -> Result<Vec<FieldElement>> {
        if d == 0 || !self.h().is_multiple_of(d) {
            return usage(format!("{d} does not divide the degree {}", self.h()));
        }
        let qd = (self.p() as u64).pow(d);
        Ok(self
            .elements()
            .filter(|&a| self.pow(a, qd) == a)
            .collect())
    }

    /// A field embedding of `sub` into `self`, as the image of every element
    /// of `sub` in enumeration order. Sends the generator x of `sub` to the
    /// least root of its modulus.
    pub fn embedding(&self, sub: &Field) -> Result<Vec<FieldElement>> {
        if sub.p() != self.p() || !self.h().is_multiple_of(sub.h()) {
            return usage(format!("{sub:?} is not a subfield of {self:?}"));
        }
        let modulus = &sub.spec().modulus;
        let root = self
            .elements()
            .find(|&r| {
                let mut acc = FieldElement::ZERO;
                for &c in modulus.iter().rev() {
                    acc = self.add(self.mul(acc, r), self.from_int(c as i64));
                }
                acc.is_zero()
            })
            .expect("a subfield modulus splits in the extension");
        Ok(sub
            .elements()
            .map(|a| {
                let mut acc = FieldElement::ZERO;
                for &c in sub.coeffs(a).iter().rev() {
                    acc = self.add(self.mul(acc, root), self.from_int(c as i64));
                }
                acc
            })
            .collect())
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> FieldElement {
        let order = self.q() as u64 - 1;
        let mut prime_factors = Vec::new();
        let mut m = order;
        let mut d = 2;
        while d * d <= m {
            if m.is_multiple_of(d) {
                prime_factors.push(d);
                while m.is_multiple_of(d) {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            prime_factors.push(m);
        }
        self.elements()
            .skip(1)
            .find(|&a| prime_factors.iter().all(|&r| self.pow(a, order / r) != FieldElement::ONE))
            .expect("multiplicative group is cyclic")
    }
}
