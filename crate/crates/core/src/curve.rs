//! Elliptic curves in long Weierstrass form over `F_q(u)`.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::gf::Field;
use crate::ratfunc::{PolyError, RatFunc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("singular Weierstrass equation (discriminant is zero)")]
    Singular,
    #[error("curve is not of the form {0}")]
    WrongShape(&'static str),
    #[error("coordinate change with w = 0")]
    DegenerateChange,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`.
#[derive(Clone, PartialEq, Eq)]
pub struct WeierstrassCurve {
    a1: RatFunc,
    a2: RatFunc,
    a3: RatFunc,
    a4: RatFunc,
    a6: RatFunc,
}

/// Point of a Weierstrass curve; affine points carry both coordinates.
#[derive(Clone, PartialEq, Eq)]
pub enum CurvePoint {
    Infinity,
    Affine { x: RatFunc, y: RatFunc },
}

impl CurvePoint {
    pub fn affine(x: RatFunc, y: RatFunc) -> CurvePoint {
        CurvePoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn x(&self) -> Option<&RatFunc> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, .. } => Some(x),
        }
    }

    pub fn y(&self) -> Option<&RatFunc> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { y, .. } => Some(y),
        }
    }

    /// Applies `f` to both coordinates.
    pub fn map_coords(&self, f: impl Fn(&RatFunc) -> RatFunc) -> CurvePoint {
        match self {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::affine(f(x), f(y)),
        }
    }

    /// Coefficient-wise Frobenius on the coordinates.
    pub fn frobenius(&self) -> CurvePoint {
        self.map_coords(RatFunc::frobenius)
    }

    /// True iff both coordinates have coefficients in the prime field.
    pub fn over_prime_field(&self) -> bool {
        match self {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => x.over_prime_field() && y.over_prime_field(),
        }
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "O"),
            CurvePoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

impl fmt::Debug for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for CurvePoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CurvePoint::Infinity => s.serialize_str("infinity"),
            CurvePoint::Affine { x, y } => {
                let mut st = s.serialize_struct("CurvePoint", 2)?;
                st.serialize_field("x", x)?;
                st.serialize_field("y", y)?;
                st.end()
            }
        }
    }
}

impl WeierstrassCurve {
    /// Builds a curve, rejecting a zero discriminant.
    pub fn new(
        a1: RatFunc,
        a2: RatFunc,
        a3: RatFunc,
        a4: RatFunc,
        a6: RatFunc,
    ) -> Result<WeierstrassCurve, CurveError> {
        let c = WeierstrassCurve { a1, a2, a3, a4, a6 };
        if c.discriminant().is_zero() {
            return Err(CurveError::Singular);
        }
        Ok(c)
    }

    /// `y^2 = x^3 + a2 x^2 + a4 x + a6`.
    pub fn short(a2: RatFunc, a4: RatFunc, a6: RatFunc) -> Result<WeierstrassCurve, CurveError> {
        let zero = RatFunc::zero(a2.field());
        WeierstrassCurve::new(zero.clone(), a2, zero, a4, a6)
    }

    pub fn field(&self) -> &Field {
        self.a1.field()
    }

    pub fn a1(&self) -> &RatFunc {
        &self.a1
    }
    pub fn a2(&self) -> &RatFunc {
        &self.a2
    }
    pub fn a3(&self) -> &RatFunc {
        &self.a3
    }
    pub fn a4(&self) -> &RatFunc {
        &self.a4
    }
    pub fn a6(&self) -> &RatFunc {
        &self.a6
    }

    pub fn b2(&self) -> RatFunc {
        &(&self.a1 * &self.a1) + &self.a2.mul_int(4)
    }

    pub fn b4(&self) -> RatFunc {
        &self.a4.mul_int(2) + &(&self.a1 * &self.a3)
    }

    pub fn b6(&self) -> RatFunc {
        &(&self.a3 * &self.a3) + &self.a6.mul_int(4)
    }

    pub fn b8(&self) -> RatFunc {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let t1 = &(a1 * a1) * a6;
        let t2 = (a2 * a6).mul_int(4);
        let t3 = &(a1 * a3) * a4;
        let t4 = &(a3 * a3) * a2;
        let t5 = a4 * a4;
        &(&(&(&t1 + &t2) - &t3) + &t4) - &t5
    }

    pub fn c4(&self) -> RatFunc {
        let b2 = self.b2();
        &(&b2 * &b2) - &self.b4().mul_int(24)
    }

    pub fn c6(&self) -> RatFunc {
        let (b2, b4, b6) = (self.b2(), self.b4(), self.b6());
        let b2_cubed = &(&b2 * &b2) * &b2;
        &(&(&b2 * &b4).mul_int(36) - &b2_cubed) - &b6.mul_int(216)
    }

    pub fn discriminant(&self) -> RatFunc {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        let t1 = &(&b2 * &b2) * &b8;
        let t2 = (&(&b4 * &b4) * &b4).mul_int(8);
        let t3 = (&b6 * &b6).mul_int(27);
        let t4 = (&(&b2 * &b4) * &b6).mul_int(9);
        &(&(&t4 - &t1) - &t2) - &t3
    }

    pub fn j_invariant(&self) -> RatFunc {
        let c4 = self.c4();
        let cube = &(&c4 * &c4) * &c4;
        cube.checked_div(&self.discriminant())
            .expect("curves are nonsingular by construction")
    }

    pub fn on_curve(&self, p: &CurvePoint) -> bool {
        let CurvePoint::Affine { x, y } = p else {
            return true;
        };
        let lhs = &(y * y) + &(&(&(&self.a1 * x) * y) + &(&self.a3 * y));
        lhs == self.rhs(x)
    }

    /// `x^3 + a2 x^2 + a4 x + a6`.
    pub fn rhs(&self, x: &RatFunc) -> RatFunc {
        let x2 = x * x;
        &(&(&(&x2 * x) + &(&self.a2 * &x2)) + &(&self.a4 * x)) + &self.a6
    }

    pub fn neg(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => {
                let ny = &(&(-y) - &(&self.a1 * x)) - &self.a3;
                CurvePoint::affine(x.clone(), ny)
            }
        }
    }

    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Infinity, _) => return q.clone(),
            (_, CurvePoint::Infinity) => return p.clone(),
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
                (x1, y1, x2, y2)
            }
        };
        let (lambda, nu) = if x1 == x2 {
            // Q = -P, which also covers the vertical tangent at 2-torsion
            if (&(y1 + y2) + &(&(&self.a1 * x2) + &self.a3)).is_zero() {
                return CurvePoint::Infinity;
            }
            let denom = &(&y1.mul_int(2) + &(&self.a1 * x1)) + &self.a3;
            let x1_sq = x1 * x1;
            let num_l =
                &(&(&x1_sq.mul_int(3) + &(&self.a2 * x1).mul_int(2)) + &self.a4) - &(&self.a1 * y1);
            let num_n = &(&(&(-&(&x1_sq * x1)) + &(&self.a4 * x1)) + &self.a6.mul_int(2))
                - &(&self.a3 * y1);
            (
                num_l.checked_div(&denom).unwrap(),
                num_n.checked_div(&denom).unwrap(),
            )
        } else {
            let dx = x2 - x1;
            let lambda = (y2 - y1).checked_div(&dx).unwrap();
            let nu = (&(y1 * x2) - &(y2 * x1)).checked_div(&dx).unwrap();
            (lambda, nu)
        };
        let x3 = &(&(&(&(&lambda * &lambda) + &(&self.a1 * &lambda)) - &self.a2) - x1) - x2;
        let y3 = &(&(-&(&(&lambda + &self.a1) * &x3)) - &nu) - &self.a3;
        CurvePoint::affine(x3, y3)
    }

    pub fn sub(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        self.add(p, &self.neg(q))
    }

    pub fn double(&self, p: &CurvePoint) -> CurvePoint {
        self.add(p, p)
    }

    /// `n P` by double-and-add.
    pub fn smul(&self, n: i64, p: &CurvePoint) -> CurvePoint {
        let base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        let mut pow = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &pow);
            }
            k >>= 1;
            if k > 0 {
                pow = self.double(&pow);
            }
        }
        acc
    }

    /// `sum c_i P_i`.
    pub fn combination(&self, coeffs: &[i64], points: &[CurvePoint]) -> CurvePoint {
        coeffs
            .iter()
            .zip(points)
            .filter(|(&c, _)| c != 0)
            .fold(CurvePoint::Infinity, |acc, (&c, p)| {
                self.add(&acc, &self.smul(c, p))
            })
    }

    /// For `y^2 = x(x+1)(x+t)` returns `(0,0)`, `(-1,0)`, `(-t,0)`.
    pub fn two_torsion(&self) -> Result<[CurvePoint; 3], CurveError> {
        const SHAPE: &str = "y^2 = x(x+1)(x+t)";
        let f = self.field();
        let one = RatFunc::one(f);
        let t = &self.a4;
        if !(self.a1.is_zero() && self.a3.is_zero() && self.a6.is_zero()) || self.a2 != &one + t {
            return Err(CurveError::WrongShape(SHAPE));
        }
        let zero = RatFunc::zero(f);
        Ok([
            CurvePoint::affine(zero.clone(), zero.clone()),
            CurvePoint::affine(-&one, zero.clone()),
            CurvePoint::affine(-t, zero),
        ])
    }

    /// Quotient by the 2-torsion point `(0,0)` of `y^2 = x^3 + a x^2 + b x`.
    ///
    /// The codomain is `y^2 = x^3 - 2a x^2 + (a^2 - 4b) x`, reached by
    /// `x -> x + a + b/x`, `y -> y (1 - b/x^2)`.
    pub fn two_isogeny_quotient(&self) -> Result<IsogenyMap, CurveError> {
        if !(self.a1.is_zero() && self.a3.is_zero() && self.a6.is_zero()) {
            return Err(CurveError::WrongShape("y^2 = x^3 + a x^2 + b x"));
        }
        let (a, b) = (&self.a2, &self.a4);
        if b.is_zero() {
            return Err(CurveError::Singular);
        }
        let f = self.field();
        let zero = RatFunc::zero(f);
        let one = RatFunc::one(f);
        let codomain =
            WeierstrassCurve::short(a.mul_int(-2), &(a * a) - &b.mul_int(4), zero.clone())
                .expect("the quotient of a nonsingular curve is nonsingular");
        Ok(IsogenyMap {
            domain: self.clone(),
            codomain,
            x_map: RationalMap::new(
                vec![b.clone(), a.clone(), one.clone()],
                vec![zero.clone(), one.clone()],
            ),
            y_map: RationalMap::new(
                vec![-b, zero.clone(), one.clone()],
                vec![zero.clone(), zero, one],
            ),
        })
    }

    /// Curve obtained from `x = w^2 x' + r`, `y = w^3 y' + s w^2 x' + t`.
    pub fn transform(&self, ch: &CoordChange) -> WeierstrassCurve {
        let CoordChange { r, s, t, w } = ch;
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let w2 = w * w;
        let w3 = &w2 * w;
        let w4 = &w2 * &w2;
        let w6 = &w3 * &w3;
        let n1 = a1 + &s.mul_int(2);
        let n2 = &(&(a2 - &(s * a1)) + &r.mul_int(3)) - &(s * s);
        let n3 = &(a3 + &(r * a1)) + &t.mul_int(2);
        let n4 = &(&(&(&(a4 - &(s * a3)) + &(r * a2).mul_int(2)) - &(&(t + &(r * s)) * a1))
            + &(r * r).mul_int(3))
            - &(s * t).mul_int(2);
        let n6 = &(&(&(&(&(a6 + &(r * a4)) + &(&(r * r) * a2)) + &(&(r * r) * r)) - &(t * a3))
            - &(t * t))
            - &(&(r * t) * a1);
        WeierstrassCurve {
            a1: n1.checked_div(w).unwrap(),
            a2: n2.checked_div(&w2).unwrap(),
            a3: n3.checked_div(&w3).unwrap(),
            a4: n4.checked_div(&w4).unwrap(),
            a6: n6.checked_div(&w6).unwrap(),
        }
    }

    /// Applies a standard substitution; returns the new curve and the map
    /// that carries points of `self` to points of the new curve.
    pub fn change_coords(
        &self,
        r: RatFunc,
        s: RatFunc,
        t: RatFunc,
        w: RatFunc,
    ) -> Result<(WeierstrassCurve, CoordChange), CurveError> {
        let ch = CoordChange::new(r, s, t, w)?;
        Ok((self.transform(&ch), ch))
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2")?;
        if !self.a1.is_zero() {
            write!(f, " + [{}]xy", self.a1)?;
        }
        if !self.a3.is_zero() {
            write!(f, " + [{}]y", self.a3)?;
        }
        write!(f, " = x^3")?;
        if !self.a2.is_zero() {
            write!(f, " + [{}]x^2", self.a2)?;
        }
        if !self.a4.is_zero() {
            write!(f, " + [{}]x", self.a4)?;
        }
        if !self.a6.is_zero() {
            write!(f, " + [{}]", self.a6)?;
        }
        Ok(())
    }
}

impl fmt::Debug for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for WeierstrassCurve {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("WeierstrassCurve", 5)?;
        st.serialize_field("a1", &self.a1)?;
        st.serialize_field("a2", &self.a2)?;
        st.serialize_field("a3", &self.a3)?;
        st.serialize_field("a4", &self.a4)?;
        st.serialize_field("a6", &self.a6)?;
        st.end()
    }
}

/// Parameters `(r, s, t, w)` of `x = w^2 x' + r`, `y = w^3 y' + s w^2 x' + t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoordChange {
    pub r: RatFunc,
    pub s: RatFunc,
    pub t: RatFunc,
    pub w: RatFunc,
}

impl CoordChange {
    pub fn new(r: RatFunc, s: RatFunc, t: RatFunc, w: RatFunc) -> Result<CoordChange, CurveError> {
        if w.is_zero() {
            return Err(CurveError::DegenerateChange);
        }
        Ok(CoordChange { r, s, t, w })
    }

    pub fn identity(field: &Field) -> CoordChange {
        let zero = RatFunc::zero(field);
        CoordChange {
            r: zero.clone(),
            s: zero.clone(),
            t: zero,
            w: RatFunc::one(field),
        }
    }

    /// Old coordinates to new: `x' = (x - r)/w^2`, `y' = (y - s(x - r) - t)/w^3`.
    pub fn forward(&self, p: &CurvePoint) -> CurvePoint {
        let CurvePoint::Affine { x, y } = p else {
            return CurvePoint::Infinity;
        };
        let w2 = &self.w * &self.w;
        let w3 = &w2 * &self.w;
        let xr = x - &self.r;
        let ny = &(y - &(&self.s * &xr)) - &self.t;
        CurvePoint::affine(xr.checked_div(&w2).unwrap(), ny.checked_div(&w3).unwrap())
    }

    /// New coordinates back to old.
    pub fn backward(&self, p: &CurvePoint) -> CurvePoint {
        let CurvePoint::Affine { x, y } = p else {
            return CurvePoint::Infinity;
        };
        let w2 = &self.w * &self.w;
        let w3 = &w2 * &self.w;
        let w2x = &w2 * x;
        let ox = &w2x + &self.r;
        let oy = &(&(&w3 * y) + &(&self.s * &w2x)) + &self.t;
        CurvePoint::affine(ox, oy)
    }
}

/// `sum num[i] x^i / sum den[i] x^i` with coefficients in `F_q(u)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalMap {
    pub num: Vec<RatFunc>,
    pub den: Vec<RatFunc>,
}

impl RationalMap {
    pub fn new(num: Vec<RatFunc>, den: Vec<RatFunc>) -> RationalMap {
        RationalMap { num, den }
    }

    fn horner(coeffs: &[RatFunc], x: &RatFunc) -> RatFunc {
        coeffs
            .iter()
            .rev()
            .fold(RatFunc::zero(x.field()), |acc, c| &(&acc * x) + c)
    }

    /// `None` where the denominator vanishes.
    pub fn eval(&self, x: &RatFunc) -> Option<RatFunc> {
        let den = Self::horner(&self.den, x);
        if den.is_zero() {
            return None;
        }
        Some(Self::horner(&self.num, x).checked_div(&den).unwrap())
    }
}

/// Isogeny `(x, y) -> (x_map(x), y * y_map(x))`.
#[derive(Clone, Debug, Serialize)]
pub struct IsogenyMap {
    pub domain: WeierstrassCurve,
    pub codomain: WeierstrassCurve,
    pub x_map: RationalMap,
    pub y_map: RationalMap,
}

impl IsogenyMap {
    pub fn push(&self, p: &CurvePoint) -> CurvePoint {
        let CurvePoint::Affine { x, y } = p else {
            return CurvePoint::Infinity;
        };
        match (self.x_map.eval(x), self.y_map.eval(x)) {
            (Some(nx), Some(fy)) => CurvePoint::affine(nx, y * &fy),
            _ => CurvePoint::Infinity,
        }
    }
}
