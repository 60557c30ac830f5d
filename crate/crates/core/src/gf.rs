//! Prime fields `F_p` and extensions `F_{p^k}` in a polynomial basis.
//!
//! An element is stored as the integer code `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`
//! of its coefficient vector over `F_p[a]/(m(a))`. Every field built here is
//! small enough that multiplication goes through discrete-log tables, which
//! are built once per [`FieldCtx`] from a slow reference multiplication.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Largest field order for which a context can be built.
pub const MAX_FIELD_ORDER: u64 = 1 << 22;

const ADD_TABLE_LIMIT: u32 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not an odd prime")]
    BadCharacteristic(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {p}^{k} exceeds the supported size {MAX_FIELD_ORDER}")]
    TooLarge { p: u64, k: usize },
    #[error("{d} does not divide the multiplicative group order {order}")]
    NoRootOfUnity { d: u64, order: u64 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
}

/// Shared handle to a field context.
pub type Field = Arc<FieldCtx>;

/// Arithmetic context for `F_{p^k}`.
pub struct FieldCtx {
    p: u32,
    k: usize,
    q: u32,
    modulus: Vec<u32>,
    generator: u32,
    // exp has length 2(q-1) so that log a + log b never needs a reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add_table: Option<Vec<u16>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 2u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            out.push(i);
            while n.is_multiple_of(i) {
                n /= i;
            }
        }
        i += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Builds `F_{p^k}` with the smallest monic irreducible modulus.
///
/// Candidates `x^k + c_{k-1} x^{k-1} + ... + c_0` are scanned in increasing
/// order of the code `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`, so `(5, 2)` picks
/// `x^2 + 2` and `(3, 1)` picks `x`.
pub fn build_field(p: u64, k: usize) -> Result<Field, FieldError> {
    if p.is_multiple_of(2) || !is_prime(p) {
        return Err(FieldError::BadCharacteristic(p));
    }
    if k == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let q = (p as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if q > MAX_FIELD_ORDER as u128 {
        return Err(FieldError::TooLarge { p, k });
    }
    let q = q as u32;
    let p32 = p as u32;

    // there are exactly q monic candidates of degree k
    let modulus = (0..q)
        .map(|code| {
            let mut m = digits(code, p32, k);
            m.push(1);
            m
        })
        .find(|m| fp_poly::is_irreducible(m, p32))
        .expect("an irreducible polynomial of every degree exists");

    let mut ctx = FieldCtx {
        p: p32,
        k,
        q,
        modulus,
        generator: 0,
        exp: Vec::new(),
        log: Vec::new(),
        neg: Vec::new(),
        add_table: None,
    };
    ctx.neg = (0..q).map(|a| ctx.neg_digits(a)).collect();
    ctx.generator = ctx.find_generator();

    let order = q - 1;
    let mut exp = Vec::with_capacity(2 * order as usize);
    let mut log = vec![u32::MAX; q as usize];
    let mut acc = 1u32;
    for i in 0..order {
        exp.push(acc);
        log[acc as usize] = i;
        acc = ctx.mul_slow(acc, ctx.generator);
    }
    debug_assert_eq!(acc, 1);
    let head = exp.clone();
    exp.extend(head);
    ctx.exp = exp;
    ctx.log = log;

    if q <= ADD_TABLE_LIMIT {
        let mut table = Vec::with_capacity((q * q) as usize);
        for a in 0..q {
            for b in 0..q {
                table.push(ctx.add_digits(a, b) as u16);
            }
        }
        ctx.add_table = Some(table);
    }
    Ok(Arc::new(ctx))
}

fn digits(mut code: u32, p: u32, k: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        out.push(code % p);
        code /= p;
    }
    out
}

impl FieldCtx {
    pub fn characteristic(&self) -> u64 {
        self.p as u64
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    /// Number of elements, `p^k`.
    pub fn order(&self) -> u64 {
        self.q as u64
    }

    /// Coefficients of the defining polynomial, low degree first (monic).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Code of the multiplicative generator used for the log tables.
    pub fn generator_code(&self) -> u32 {
        self.generator
    }

    pub fn same(&self, other: &FieldCtx) -> bool {
        std::ptr::eq(self, other) || self == other
    }

    pub fn digits(&self, code: u32) -> Vec<u32> {
        digits(code, self.p, self.k)
    }

    pub fn from_digits(&self, coeffs: &[u32]) -> u32 {
        assert!(
            coeffs.len() <= self.k,
            "too many coefficients for F_{{p^k}}"
        );
        coeffs
            .iter()
            .rev()
            .fold(0u32, |acc, &c| acc * self.p + c % self.p)
    }

    /// Image of an integer under `Z -> F_p`.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add_table {
            Some(t) => t[(a * self.q + b) as usize] as u32,
            None if self.k == 1 => {
                let s = a + b;
                if s >= self.p {
                    s - self.p
                } else {
                    s
                }
            }
            None => self.add_digits(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    /// Discrete log to the base of the generator; `None` for zero.
    #[inline]
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// `g^e` for the distinguished generator `g`, `e < 2(q-1)`.
    #[inline]
    pub fn exp(&self, e: u32) -> u32 {
        self.exp[e as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32, FieldError> {
        if a == 0 {
            return Err(FieldError::ZeroInverse);
        }
        let order = self.q - 1;
        Ok(self.exp[((order - self.log[a as usize]) % order) as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.q - 1) as u64;
        let l = (self.log[a as usize] as u64 * (e % order)) % order;
        self.exp[l as usize]
    }

    /// `a^p`.
    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.p as u64)
    }

    /// True iff `a` lies in the prime subfield.
    pub fn in_prime_field(&self, a: u32) -> bool {
        a < self.p
    }

    pub fn is_square(&self, a: u32) -> bool {
        a == 0 || self.log[a as usize].is_multiple_of(2)
    }

    /// A square root of `a`, if one exists. The two roots are `r` and `-r`;
    /// the one with the smaller code is returned.
    pub fn sqrt(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return Some(0);
        }
        let l = self.log[a as usize];
        if !l.is_multiple_of(2) {
            return None;
        }
        let r = self.exp[(l / 2) as usize];
        Some(r.min(self.neg(r)))
    }

    /// Primitive `d`-th root of unity `g^{(q-1)/d}`.
    pub fn zeta_code(&self, d: u64) -> Result<u32, FieldError> {
        let order = (self.q - 1) as u64;
        if d == 0 || !order.is_multiple_of(d) {
            return Err(FieldError::NoRootOfUnity { d, order });
        }
        Ok(self.exp[(order / d) as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: u32) -> u64 {
        assert!(a != 0, "zero has no multiplicative order");
        let order = (self.q - 1) as u64;
        let l = self.log[a as usize] as u64;
        order / num_integer::gcd(order, l)
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let mut out = 0u32;
        let mut scale = 1u32;
        for _ in 0..self.k {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * scale;
            scale *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    fn neg_digits(&self, a: u32) -> u32 {
        let d: Vec<u32> = self
            .digits(a)
            .into_iter()
            .map(|c| (self.p - c) % self.p)
            .collect();
        self.from_digits(&d)
    }

    /// Schoolbook product modulo the defining polynomial. Independent of the
    /// log tables; used to build them and to cross-check them.
    pub fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * self.k - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for top in (self.k..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &m) in self.modulus[..self.k].iter().enumerate() {
                let idx = top - self.k + i;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
        }
        let low: Vec<u32> = prod[..self.k].iter().map(|&c| c as u32).collect();
        self.from_digits(&low)
    }

    fn pow_slow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    fn find_generator(&self) -> u32 {
        let order = (self.q - 1) as u64;
        let factors = prime_factors(order);
        (1..self.q)
            .find(|&g| factors.iter().all(|&r| self.pow_slow(g, order / r) != 1))
            .expect("the multiplicative group of a finite field is cyclic")
    }
}

/// Element-level API on a shared context.
pub trait FieldExt {
    fn element(&self, code: u32) -> FieldElement;
    fn zero(&self) -> FieldElement;
    fn one(&self) -> FieldElement;
    fn int(&self, n: i64) -> FieldElement;
    fn zeta(&self, d: u64) -> Result<FieldElement, FieldError>;
    fn elements(&self) -> Box<dyn Iterator<Item = FieldElement> + '_>;
}

impl FieldExt for Field {
    fn element(&self, code: u32) -> FieldElement {
        assert!(code < self.q, "element code out of range");
        FieldElement {
            field: Arc::clone(self),
            code,
        }
    }

    fn zero(&self) -> FieldElement {
        self.element(0)
    }

    fn one(&self) -> FieldElement {
        self.element(1)
    }

    fn int(&self, n: i64) -> FieldElement {
        self.element(self.from_int(n))
    }

    fn zeta(&self, d: u64) -> Result<FieldElement, FieldError> {
        Ok(self.element(self.zeta_code(d)?))
    }

    fn elements(&self) -> Box<dyn Iterator<Item = FieldElement> + '_> {
        Box::new((0..self.q).map(move |c| self.element(c)))
    }
}

/// An element of `F_{p^k}` together with its field.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    code: u32,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn code(&self) -> u32 {
        self.code
    }

    pub fn coefficients(&self) -> Vec<u32> {
        self.field.digits(self.code)
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    pub fn is_one(&self) -> bool {
        self.code == 1
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        Ok(self.with(self.field.inv(self.code)?))
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.with(self.field.pow(self.code, e))
    }

    pub fn frobenius(&self) -> FieldElement {
        self.with(self.field.frobenius(self.code))
    }

    pub fn in_prime_field(&self) -> bool {
        self.field.in_prime_field(self.code)
    }

    pub fn multiplicative_order(&self) -> u64 {
        self.field.mult_order(self.code)
    }

    fn with(&self, code: u32) -> FieldElement {
        FieldElement {
            field: Arc::clone(&self.field),
            code,
        }
    }

    fn check(&self, other: &FieldElement) {
        debug_assert!(self.field.same(&other.field), "mixed fields");
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code && self.field.same(&other.field)
    }
}

impl Eq for FieldElement {}

macro_rules! binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.check(rhs);
                self.with(self.field.$method(self.code, rhs.code))
            }
        }
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.with(self.field.neg(self.code))
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// Writes a code as a polynomial in the extension generator `a`.
pub(crate) fn fmt_code(field: &FieldCtx, code: u32, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if field.k == 1 {
        return write!(f, "{code}");
    }
    let terms: Vec<String> = field
        .digits(code)
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "a".to_string(),
            (1, c) => format!("{c}a"),
            (i, 1) => format!("a^{i}"),
            (i, c) => format!("{c}a^{i}"),
        })
        .collect();
    if terms.is_empty() {
        write!(f, "0")
    } else {
        write!(f, "{}", terms.join("+"))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_code(&self.field, self.code, f)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({self})")
    }
}

pub(crate) struct CodeSer<'a>(pub &'a FieldCtx, pub u32);

impl Serialize for CodeSer<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.k))?;
        for c in self.0.digits(self.1) {
            seq.serialize_element(&c)?;
        }
        seq.end()
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CodeSer(&self.field, self.code).serialize(s)
    }
}

impl Serialize for FieldCtx {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FieldCtx", 3)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("modulus", &self.modulus)?;
        st.end()
    }
}

/// Dense polynomials over `F_p` with small integer coefficients, only used
/// for the irreducibility scan.
mod fp_poly {
    fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let inv_lead = inv(m[dm], p);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top] * inv_lead % p;
            for (i, &mi) in m.iter().enumerate() {
                let idx = top - dm + i;
                r[idx] = (r[idx] + (p - c) * mi % p) % p;
            }
            r = trim(r);
        }
        r
    }

    fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        rem(&prod, m, p)
    }

    fn powmod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut base = rem(a, m, p);
        let mut acc = vec![1u64];
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base, m, p);
            }
            base = mulmod(&base, &base, m, p);
            e >>= 1;
        }
        acc
    }

    fn inv(a: u64, p: u64) -> u64 {
        let mut acc = 1u64;
        let mut base = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    }

    fn gcd(a: Vec<u64>, b: Vec<u64>, p: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a), trim(b));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// `x^{p^j} mod m`, for j = 0..=k.
    fn frobenius_powers(m: &[u64], p: u64, k: usize) -> Vec<Vec<u64>> {
        let mut out = vec![rem(&[0, 1], m, p)];
        for _ in 0..k {
            let next = powmod(out.last().unwrap(), p, m, p);
            out.push(next);
        }
        out
    }

    /// Rabin's test: `m | x^{p^k} - x` and `gcd(x^{p^{k/r}} - x, m) = 1` for
    /// every prime `r | k`.
    pub(super) fn is_irreducible(m: &[u32], p: u32) -> bool {
        let p = p as u64;
        let m: Vec<u64> = m.iter().map(|&c| c as u64).collect();
        let k = m.len() - 1;
        if k == 1 {
            return true;
        }
        let pows = frobenius_powers(&m, p, k);
        let minus_x = |f: &[u64]| {
            let mut g = f.to_vec();
            if g.len() < 2 {
                g.resize(2, 0);
            }
            g[1] = (g[1] + p - 1) % p;
            trim(g)
        };
        if !minus_x(&pows[k]).is_empty() {
            return false;
        }
        super::prime_factors(k as u64).into_iter().all(|r| {
            let g = gcd(m.clone(), minus_x(&pows[k / r as usize]), p);
            g.len() == 1
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_uses_modulus_x() {
        let f = build_field(3, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.order(), 3);
    }

    #[test]
    fn smallest_irreducible_moduli() {
        // Oracle: exhaustive root search; a monic quadratic is irreducible
        // iff it has no root in F_p.
        for p in [3u64, 5, 7, 11] {
            let expected = (0..p * p)
                .map(|code| (code % p, code / p))
                .find(|&(c0, c1)| (0..p).all(|x| (x * x + c1 * x + c0) % p != 0))
                .unwrap();
            let f = build_field(p, 2).unwrap();
            assert_eq!(
                f.modulus(),
                &[expected.0 as u32, expected.1 as u32, 1],
                "p={p}"
            );
        }
        assert_eq!(build_field(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(build_field(5, 2).unwrap().modulus(), &[2, 0, 1]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(
            build_field(2, 1).unwrap_err(),
            FieldError::BadCharacteristic(2)
        );
        assert_eq!(
            build_field(9, 1).unwrap_err(),
            FieldError::BadCharacteristic(9)
        );
        assert_eq!(build_field(3, 0).unwrap_err(), FieldError::ZeroDegree);
        assert!(matches!(
            build_field(3, 40),
            Err(FieldError::TooLarge { .. })
        ));
    }

    #[test]
    fn build_is_deterministic() {
        for (p, k) in [(3, 4), (7, 2), (5, 3)] {
            let a = build_field(p, k).unwrap();
            let b = build_field(p, k).unwrap();
            assert_eq!(a.modulus(), b.modulus());
            assert_eq!(a.generator_code(), b.generator_code());
        }
    }

    #[test]
    fn tables_agree_with_reference_multiplication() {
        for (p, k) in [(3, 2), (5, 2), (3, 3), (7, 2), (11, 2)] {
            let f = build_field(p, k).unwrap();
            let q = f.order() as u32;
            for a in 0..q {
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                }
            }
        }
    }

    #[test]
    fn zeta_examples() {
        let f9 = build_field(3, 2).unwrap();
        let z4 = f9.zeta(4).unwrap();
        assert_eq!(z4.pow(2), -f9.one());
        assert_eq!(f9.zeta(1).unwrap(), f9.one());

        let f25 = build_field(5, 2).unwrap();
        let z6 = f25.zeta(6).unwrap();
        // brute-force order over all powers
        let order = (1..=24u64).find(|&e| z6.pow(e).is_one()).unwrap();
        assert_eq!(order, 6);
        assert!(matches!(f25.zeta(5), Err(FieldError::NoRootOfUnity { .. })));
    }

    #[test]
    fn frobenius_inverts_zeta_when_d_is_p_plus_one() {
        for p in [3u64, 5, 7] {
            let f = build_field(p, 2).unwrap();
            let z = f.zeta(p + 1).unwrap();
            assert_eq!(z.frobenius(), z.inv().unwrap());
        }
    }

    #[test]
    fn sqrt_and_squares() {
        let f = build_field(7, 1).unwrap();
        let squares: Vec<u32> = (1..7).filter(|&a| f.is_square(a)).collect();
        assert_eq!(squares, vec![1, 2, 4]);
        assert_eq!(f.sqrt(2), Some(3));
        assert_eq!(f.sqrt(3), None);
    }

    #[test]
    fn display_and_json() {
        let f = build_field(3, 2).unwrap();
        let e = f.element(7); // 1 + 2a
        assert_eq!(e.to_string(), "1+2a");
        assert_eq!(e.coefficients(), vec![1, 2]);
        let ser = serde_json::to_string(&*f).unwrap();
        assert_eq!(ser, r#"{"p":3,"k":2,"modulus":[1,0,1]}"#);
        assert_eq!(serde_json::to_string(&e).unwrap(), "[1,2]");
    }
}
