//! Univariate polynomials `F_q[u]` and reduced rational functions `F_q(u)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::gf::{fmt_code, CodeSer, Field, FieldCtx};

/// Below this length both operands are multiplied schoolbook.
pub const KARATSUBA_THRESHOLD: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("the zero rational function has no degree")]
    ZeroDegree,
}

/// A polynomial with coefficients stored low-degree-first, without trailing
/// zeros. The zero polynomial has an empty coefficient vector.
#[derive(Clone)]
pub struct Poly {
    field: Field,
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn zero(field: &Field) -> Poly {
        Poly {
            field: Arc::clone(field),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, 1)
    }

    pub fn constant(field: &Field, code: u32) -> Poly {
        Poly::from_coeffs(field, vec![code])
    }

    /// The variable `u`.
    pub fn var(field: &Field) -> Poly {
        Poly::monomial(field, 1, 1)
    }

    /// `c * u^n`.
    pub fn monomial(field: &Field, c: u32, n: usize) -> Poly {
        let mut coeffs = vec![0; n + 1];
        coeffs[n] = c;
        Poly::from_coeffs(field, coeffs)
    }

    pub fn from_coeffs(field: &Field, coeffs: Vec<u32>) -> Poly {
        debug_assert!(coeffs.iter().all(|&c| (c as u64) < field.order()));
        let mut p = Poly {
            field: Arc::clone(field),
            coeffs,
        };
        p.trim();
        p
    }

    /// Polynomial with integer coefficients reduced into the prime field.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// `None` stands for the degree `-inf` of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    /// Multiplicity of `u` as a factor (0 for the zero polynomial).
    pub fn valuation_at_zero(&self) -> usize {
        self.coeffs.iter().take_while(|&&c| c == 0).count()
    }

    pub fn scale(&self, c: u32) -> Poly {
        let f = &self.field;
        Poly::from_coeffs(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn monic(&self) -> Poly {
        match self.coeffs.last() {
            None | Some(1) => self.clone(),
            Some(&lc) => self.scale(self.field.inv(lc).expect("nonzero leading coefficient")),
        }
    }

    /// Multiplication by `u^n`.
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; n];
        coeffs.extend_from_slice(&self.coeffs);
        Poly::from_coeffs(&self.field, coeffs)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, at: u32) -> u32 {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, at), c))
    }

    /// `r(u) -> r(c u)`.
    pub fn scale_var(&self, c: u32) -> Poly {
        let f = &self.field;
        let mut power = 1u32;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| {
                let out = f.mul(a, power);
                power = f.mul(power, c);
                out
            })
            .collect();
        Poly::from_coeffs(f, coeffs)
    }

    /// Coefficient-wise Frobenius; the variable is fixed.
    pub fn frobenius(&self) -> Poly {
        let f = &self.field;
        Poly::from_coeffs(f, self.coeffs.iter().map(|&a| f.frobenius(a)).collect())
    }

    /// True iff every coefficient lies in the prime field.
    pub fn over_prime_field(&self) -> bool {
        self.coeffs.iter().all(|&c| self.field.in_prime_field(c))
    }

    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly), PolyError> {
        let dd = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        let f = &self.field;
        let Some(dn) = self.degree() else {
            return Ok((Poly::zero(f), Poly::zero(f)));
        };
        if dn < dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let inv_lead = f
            .inv(divisor.leading())
            .expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u32; dn - dd + 1];
        let dc = &divisor.coeffs;
        for top in (dd..=dn).rev() {
            let c = rem[top];
            if c == 0 {
                continue;
            }
            let factor = f.mul(c, inv_lead);
            quot[top - dd] = factor;
            let neg_factor = f.neg(factor);
            if let Some(lf) = f.log(neg_factor) {
                let base = top - dd;
                for (i, &di) in dc.iter().enumerate() {
                    if let Some(ld) = f.log(di) {
                        rem[base + i] = f.add(rem[base + i], f.exp(lf + ld));
                    }
                }
            }
        }
        rem.truncate(dd);
        Ok((Poly::from_coeffs(f, quot), Poly::from_coeffs(f, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly, PolyError> {
        Ok(self.divmod(divisor)?.1)
    }

    /// Quotient of a division known to be exact.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly, PolyError> {
        let (q, r) = self.divmod(divisor)?;
        debug_assert!(r.is_zero(), "inexact division");
        Ok(q)
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = if self.coeffs.len() >= other.coeffs.len() {
            (self.clone(), other.clone())
        } else {
            (other.clone(), self.clone())
        };
        while !b.is_zero() {
            let r = a.rem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Exact square root of a perfect square, if it is one. Of the two roots
    /// the one whose leading coefficient has the smaller code is returned.
    pub fn sqrt(&self) -> Option<Poly> {
        let f = &self.field;
        let Some(n) = self.degree() else {
            return Some(self.clone());
        };
        if n % 2 != 0 {
            return None;
        }
        let m = n / 2;
        let lead = f.sqrt(self.leading())?;
        let inv_two_lead = f.inv(f.mul(f.from_int(2), lead)).ok()?;
        // top-down: coefficient of u^{n-j} in g^2 determines g_{m-j}
        let mut g = vec![0u32; m + 1];
        g[m] = lead;
        for j in 1..=m {
            let mut acc = self.coeffs[n - j];
            for i in 1..j {
                acc = f.sub(acc, f.mul(g[m - i], g[m - (j - i)]));
            }
            g[m - j] = f.mul(acc, inv_two_lead);
        }
        let root = Poly::from_coeffs(f, g);
        (&root * &root == *self).then_some(root)
    }

    fn check(&self, other: &Poly) {
        debug_assert!(self.field.same(&other.field), "mixed fields");
    }
}

fn add_slices(f: &FieldCtx, a: &[u32], b: &[u32]) -> Vec<u32> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, &s) in out.iter_mut().zip(short) {
        *o = f.add(*o, s);
    }
    out
}

fn add_into(f: &FieldCtx, acc: &mut [u32], b: &[u32]) {
    for (o, &s) in acc.iter_mut().zip(b) {
        *o = f.add(*o, s);
    }
}

fn sub_into(f: &FieldCtx, acc: &mut [u32], b: &[u32]) {
    for (o, &s) in acc.iter_mut().zip(b) {
        *o = f.sub(*o, s);
    }
}

fn schoolbook(f: &FieldCtx, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; a.len() + b.len() - 1];
    let lb: Vec<Option<u32>> = b.iter().map(|&c| f.log(c)).collect();
    for (i, &ai) in a.iter().enumerate() {
        let Some(la) = f.log(ai) else { continue };
        for (j, l) in lb.iter().enumerate() {
            if let Some(l) = l {
                out[i + j] = f.add(out[i + j], f.exp(la + l));
            }
        }
    }
    out
}

pub(crate) fn mul_slices(f: &FieldCtx, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let (a, b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if b.len() < KARATSUBA_THRESHOLD {
        return schoolbook(f, a, b);
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    if 2 * b.len() <= a.len() {
        for (i, chunk) in a.chunks(b.len()).enumerate() {
            let prod = mul_slices(f, chunk, b);
            add_into(f, &mut out[i * b.len()..], &prod);
        }
        return out;
    }
    let m = a.len() / 2;
    let (a0, a1) = a.split_at(m);
    let (b0, b1) = b.split_at(m);
    let z0 = mul_slices(f, a0, b0);
    let z2 = mul_slices(f, a1, b1);
    let mut z1 = mul_slices(f, &add_slices(f, a0, a1), &add_slices(f, b0, b1));
    sub_into(f, &mut z1, &z0);
    sub_into(f, &mut z1, &z2);
    add_into(f, &mut out, &z0);
    add_into(f, &mut out[m..], &z1);
    add_into(f, &mut out[2 * m..], &z2);
    out
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.check(rhs);
        Poly::from_coeffs(
            &self.field,
            add_slices(&self.field, &self.coeffs, &rhs.coeffs),
        )
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.check(rhs);
        Poly::from_coeffs(
            &self.field,
            mul_slices(&self.field, &self.coeffs, &rhs.coeffs),
        )
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::from_coeffs(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                &self * &rhs
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}

owned_ops!(Poly);

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.field.same(&other.field)
    }
}

impl Eq for Poly {}

struct Coeff<'a>(&'a FieldCtx, u32);

impl fmt::Display for Coeff<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_code(self.0, self.1, f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let ext = self.field.degree() > 1;
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = Coeff(&self.field, c);
            let shown = if ext && self.field.digits(c).iter().filter(|&&d| d != 0).count() > 1 {
                format!("({coeff})")
            } else {
                coeff.to_string()
            };
            match i {
                0 => write!(f, "{shown}")?,
                _ => {
                    if c != 1 {
                        write!(f, "{shown}*")?;
                    }
                    if i == 1 {
                        write!(f, "u")?;
                    } else {
                        write!(f, "u^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for &c in &self.coeffs {
            seq.serialize_element(&CodeSer(&self.field, c))?;
        }
        seq.end()
    }
}

/// A rational function `num/den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> RatFunc {
        if num.is_zero() {
            let one = Poly::one(num.field());
            return RatFunc { num, den: one };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        Self::normalize_unit(num, den)
    }

    fn normalize_unit(num: Poly, den: Poly) -> RatFunc {
        let lc = den.leading();
        if lc == 1 {
            return RatFunc { num, den };
        }
        let inv = num.field().inv(lc).expect("nonzero leading coefficient");
        RatFunc {
            num: num.scale(inv),
            den: den.scale(inv),
        }
    }

    pub fn from_poly(num: Poly) -> RatFunc {
        let one = Poly::one(num.field());
        RatFunc { num, den: one }
    }

    pub fn zero(field: &Field) -> RatFunc {
        RatFunc::from_poly(Poly::zero(field))
    }

    pub fn one(field: &Field) -> RatFunc {
        RatFunc::from_poly(Poly::one(field))
    }

    pub fn constant(field: &Field, code: u32) -> RatFunc {
        RatFunc::from_poly(Poly::constant(field, code))
    }

    pub fn int(field: &Field, n: i64) -> RatFunc {
        RatFunc::constant(field, field.from_int(n))
    }

    /// The variable `u`.
    pub fn var(field: &Field) -> RatFunc {
        RatFunc::from_poly(Poly::var(field))
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn into_parts(self) -> (Poly, Poly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    /// `max(deg num, deg den)`; the zero function is rejected.
    pub fn deg(&self) -> Result<usize, PolyError> {
        let n = self.num.degree().ok_or(PolyError::ZeroDegree)?;
        Ok(n.max(self.den.degree().unwrap_or(0)))
    }

    pub fn inv(&self) -> Result<RatFunc, PolyError> {
        if self.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(Self::normalize_unit(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<RatFunc, PolyError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: u64) -> RatFunc {
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Multiplication by an integer (reduced into the prime field).
    pub fn mul_int(&self, n: i64) -> RatFunc {
        let c = self.field().from_int(n);
        if c == 0 {
            return RatFunc::zero(self.field());
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Coefficient-wise Frobenius on numerator and denominator.
    pub fn frobenius(&self) -> RatFunc {
        RatFunc {
            num: self.num.frobenius(),
            den: self.den.frobenius(),
        }
    }

    pub fn over_prime_field(&self) -> bool {
        self.num.over_prime_field() && self.den.over_prime_field()
    }

    /// `r(u) -> r(c u)` for a nonzero constant `c`.
    pub fn scale_var(&self, c: u32) -> RatFunc {
        assert!(c != 0, "substitution u -> 0 is not an automorphism");
        Self::normalize_unit(self.num.scale_var(c), self.den.scale_var(c))
    }

    /// Value at `u = at`, or `None` at a pole.
    pub fn eval(&self, at: u32) -> Option<u32> {
        let f = self.field();
        f.div(self.num.eval(at), self.den.eval(at)).ok()
    }

    /// Square root of a square in `F_q(u)`, choosing the root whose numerator
    /// has the smaller leading-coefficient code.
    pub fn sqrt(&self) -> Option<RatFunc> {
        let num = self.num.sqrt()?;
        let den = self.den.sqrt()?.monic();
        Some(RatFunc { num, den })
    }
}

impl Add<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::reduce(&self.num + &rhs.num, self.den.clone());
        }
        if rhs.den.is_one() {
            return RatFunc {
                num: &self.num + &(&rhs.num * &self.den),
                den: self.den.clone(),
            };
        }
        if self.den.is_one() {
            return rhs + self;
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::reduce(num, &self.den * &rhs.den)
    }
}

impl Sub<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero(self.field());
        }
        // cross-cancel so the product of reduced factors is already reduced
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let (n1, d2) = (
            self.num.exact_div(&g1).unwrap(),
            rhs.den.exact_div(&g1).unwrap(),
        );
        let (n2, d1) = (
            rhs.num.exact_div(&g2).unwrap(),
            self.den.exact_div(&g2).unwrap(),
        );
        RatFunc::normalize_unit(&n1 * &n2, &d1 * &d2)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

owned_ops!(RatFunc);

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl Serialize for RatFunc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RatFunc", 2)?;
        st.serialize_field("num", &self.num)?;
        st.serialize_field("den", &self.den)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::build_field;

    fn p(f: &Field, c: &[i64]) -> Poly {
        Poly::from_ints(f, c)
    }

    #[test]
    fn gcd_is_monic() {
        let f = build_field(5, 1).unwrap();
        let g = p(&f, &[-1, 0, 1]).gcd(&p(&f, &[-1, 1]));
        assert_eq!(g, p(&f, &[-1, 1]));
        let g = p(&f, &[-2, 0, 2]).gcd(&p(&f, &[3, -3]));
        assert_eq!(g, p(&f, &[-1, 1]));
        assert!(Poly::zero(&f).gcd(&Poly::zero(&f)).is_zero());
    }

    #[test]
    fn divmod_examples() {
        let f = build_field(7, 1).unwrap();
        let (q, r) = p(&f, &[0, 0, 0, 1]).divmod(&p(&f, &[0, 1])).unwrap();
        assert_eq!(q, p(&f, &[0, 0, 1]));
        assert!(r.is_zero());
        assert_eq!(
            p(&f, &[1]).divmod(&Poly::zero(&f)).unwrap_err(),
            PolyError::DivisionByZero
        );
    }

    #[test]
    fn freshmans_dream_over_f3() {
        let f = build_field(3, 1).unwrap();
        // (u+1)^3 expanded by hand: u^3 + 3u^2 + 3u + 1 = u^3 + 1 mod 3
        assert_eq!(p(&f, &[1, 1]).pow(3), p(&f, &[1, 0, 0, 1]));
    }

    #[test]
    fn karatsuba_matches_schoolbook() {
        let f = build_field(3, 4).unwrap();
        let q = f.order() as u32;
        let mut s = 12345u64;
        let mut rnd = move || {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((s >> 33) % q as u64) as u32
        };
        for (la, lb) in [(40, 40), (100, 37), (257, 129), (33, 500), (64, 65)] {
            let a: Vec<u32> = (0..la).map(|_| rnd()).collect();
            let b: Vec<u32> = (0..lb).map(|_| rnd()).collect();
            assert_eq!(mul_slices(&f, &a, &b), schoolbook(&f, &a, &b));
        }
    }

    #[test]
    fn ratfunc_examples() {
        let f = build_field(5, 1).unwrap();
        let u = RatFunc::var(&f);
        let one = RatFunc::one(&f);
        let a = (&u * &u).checked_div(&u).unwrap();
        assert_eq!(a, u);
        assert_eq!(&a + &RatFunc::zero(&f), a);

        // 1/(u-1) + 1/(u+1) = 2u/(u^2-1), denominator u^2 + 4 over F_5
        let s = one.checked_div(&(&u - &one)).unwrap() + one.checked_div(&(&u + &one)).unwrap();
        assert_eq!(s.num(), &p(&f, &[0, 2]));
        assert_eq!(s.den(), &p(&f, &[4, 0, 1]));
        // clearing denominators
        let check = &s * &RatFunc::from_poly(p(&f, &[-1, 0, 1]));
        assert_eq!(check, RatFunc::from_poly(p(&f, &[0, 2])));

        assert_eq!(
            u.checked_div(&RatFunc::zero(&f)).unwrap_err(),
            PolyError::DivisionByZero
        );
    }

    #[test]
    fn degrees() {
        let f = build_field(3, 1).unwrap();
        let u = RatFunc::var(&f);
        assert_eq!(u.deg().unwrap(), 1);
        let r = RatFunc::new(p(&f, &[1, 0, 0, 1]), p(&f, &[0, 1])).unwrap();
        assert_eq!(r.deg().unwrap(), 3);
        assert_eq!(RatFunc::zero(&f).deg().unwrap_err(), PolyError::ZeroDegree);
        assert_eq!(RatFunc::one(&f).deg().unwrap(), 0);
    }

    #[test]
    fn denominators_are_monic_and_reduced() {
        let f = build_field(7, 1).unwrap();
        let r = RatFunc::new(p(&f, &[2, 2]), p(&f, &[3, 6, 3])).unwrap();
        // 2(u+1) / 3(u+1)^2 = (2/3) / (u+1)
        assert_eq!(r.den(), &p(&f, &[1, 1]));
        assert_eq!(r.num(), &Poly::constant(&f, f.div(2, 3).unwrap()));
        let again = RatFunc::new(r.num().clone(), r.den().clone()).unwrap();
        assert_eq!(again, r);
    }

    #[test]
    fn frobenius_on_zeta_u() {
        let f = build_field(5, 2).unwrap();
        let z = f.zeta_code(6).unwrap();
        let r = RatFunc::from_poly(Poly::monomial(&f, z, 1));
        let expected = RatFunc::from_poly(Poly::monomial(&f, f.inv(z).unwrap(), 1));
        assert_eq!(r.frobenius(), expected);
        let fixed = RatFunc::from_poly(p(&f, &[1, 2, 3]));
        assert_eq!(fixed.frobenius(), fixed);
    }

    #[test]
    fn sqrt_of_squares() {
        let f = build_field(7, 1).unwrap();
        let g = p(&f, &[3, 1, 5, 2]);
        let sq = &g * &g;
        let root = sq.sqrt().unwrap();
        assert!(root == g || root == -&g);
        assert!(root.leading() <= f.neg(root.leading()));
        assert!(p(&f, &[0, 1]).sqrt().is_none());
        assert!(p(&f, &[3, 0, 0]).sqrt().is_none()); // 3 is not a square mod 7
        let r = RatFunc::new(sq.clone(), p(&f, &[1, 2, 1])).unwrap();
        let s = r.sqrt().unwrap();
        assert_eq!(&s * &s, r);
    }

    #[test]
    fn json_shape() {
        let f = build_field(3, 1).unwrap();
        let r = RatFunc::new(p(&f, &[1, 1]), p(&f, &[0, 1])).unwrap();
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"num":[[1],[1]],"den":[[0],[1]]}"#
        );
    }

    #[test]
    fn display() {
        let f = build_field(3, 2).unwrap();
        let poly = Poly::from_coeffs(&f, vec![1, 0, 7]);
        assert_eq!(poly.to_string(), "(1+2a)*u^2 + 1");
    }
}
