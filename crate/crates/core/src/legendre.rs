//! The curve `y^2 = x(x+1)(x+u^d)` over `K_d = F_p(mu_d)(u)` with
//! `d = p^f + 1`, its explicit points `P_i = P(zeta^i u)`, the 8-point
//! torsion subgroup, the descended points `R_b` and Galois traces.

use serde::Serialize;
use thiserror::Error;

use crate::curve::{CurveError, CurvePoint, WeierstrassCurve};
use crate::gf::{build_field, Field, FieldElement, FieldError, FieldExt};
use crate::ratfunc::{Poly, RatFunc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("p^f + 1 overflows for p = {p}, f = {f}")]
    Overflow { p: u64, f: u32 },
    #[error("{0} requires f = 1")]
    NeedsDegreeOne(&'static str),
    #[error("{0} requires f >= 1")]
    NeedsPositiveDegree(&'static str),
    #[error("b = {0} is not an element of F_p")]
    NotInPrimeField(u64),
    #[error("x^2 - {0}x + 1 is reducible over F_p")]
    ReducibleQuadratic(u64),
}

/// `(p, f, d = p^f + 1)` together with `F_p(mu_d)` and the fixed `zeta_d`.
#[derive(Clone, Debug)]
pub struct FamilyParams {
    p: u64,
    f: u32,
    d: u64,
    field: Field,
    zeta: FieldElement,
}

impl FamilyParams {
    pub fn new(p: u64, f: u32) -> Result<FamilyParams, FamilyError> {
        let pf = p.checked_pow(f).ok_or(FamilyError::Overflow { p, f })?;
        let d = pf + 1;
        // F_p(mu_d) = F_{p^{2f}}; for f = 0, mu_2 = {1, -1} already lies in F_p
        let k = if f == 0 { 1 } else { 2 * f as usize };
        let field = build_field(p, k)?;
        let zeta = field.zeta(d)?;
        Ok(FamilyParams {
            p,
            f,
            d,
            field,
            zeta,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// `delta = d/2`.
    pub fn delta(&self) -> u64 {
        self.d / 2
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Size of the constant field `F_p(mu_d)`.
    pub fn q(&self) -> u64 {
        self.field.order()
    }

    pub fn zeta(&self) -> &FieldElement {
        &self.zeta
    }

    /// `zeta^i` for `i` in `Z/dZ`.
    pub fn zeta_pow(&self, i: i64) -> u32 {
        self.field.pow(self.zeta.code(), self.index(i))
    }

    /// Reduces an index into `[0, d)`.
    pub fn index(&self, i: i64) -> u64 {
        i.rem_euclid(self.d as i64) as u64
    }
}

impl Serialize for FamilyParams {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("FamilyParams", 6)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("f", &self.f)?;
        st.serialize_field("d", &self.d)?;
        st.serialize_field("q", &self.q())?;
        st.serialize_field("field", &*self.field)?;
        st.serialize_field("zeta", &self.zeta)?;
        st.end()
    }
}

/// Labels of the torsion points, in storage order.
pub const TORSION_LABELS: [&str; 8] = ["O", "Q0", "Q1", "Qt", "T", "-T", "T'", "-T'"];

/// The 8 torsion points `{O, Q0, Q1, Qt, +-T, +-T'}` with
/// `T = (s, s(s+1))`, `T' = (-s, -s(1-s))`, `s = u^{d/2}`.
#[derive(Clone, Debug, Serialize)]
pub struct TorsionSet {
    pub points: Vec<CurvePoint>,
}

impl TorsionSet {
    pub fn labels(&self) -> &'static [&'static str; 8] {
        &TORSION_LABELS
    }

    pub fn get(&self, label: &str) -> &CurvePoint {
        let i = TORSION_LABELS
            .iter()
            .position(|&l| l == label)
            .unwrap_or_else(|| panic!("unknown torsion label {label}"));
        &self.points[i]
    }

    pub fn position(&self, p: &CurvePoint) -> Option<usize> {
        self.points.iter().position(|t| t == p)
    }

    pub fn label_of(&self, p: &CurvePoint) -> Option<&'static str> {
        self.position(p).map(|i| TORSION_LABELS[i])
    }

    /// `table[i][j]` is the index of `points[i] + points[j]`, or `None` if the
    /// sum leaves the set.
    pub fn addition_table(&self, curve: &WeierstrassCurve) -> Vec<Vec<Option<usize>>> {
        self.points
            .iter()
            .map(|a| {
                self.points
                    .iter()
                    .map(|b| self.position(&curve.add(a, b)))
                    .collect()
            })
            .collect()
    }

    /// Checks closure, the named relations and the `Z/2 x Z/4` structure.
    pub fn verify(&self, curve: &WeierstrassCurve) -> TorsionReport {
        let table = self.addition_table(curve);
        let closed = table.iter().flatten().all(Option::is_some);
        let g = |l: &str| self.get(l);
        let mut relations = Vec::new();
        let mut rel = |name: &str, ok: bool| {
            relations.push(Relation {
                name: name.into(),
                holds: ok,
            })
        };
        rel("2T = Q0", curve.double(g("T")) == *g("Q0"));
        rel("T + Q0 = -T", curve.add(g("T"), g("Q0")) == *g("-T"));
        rel("T + Q1 = T'", curve.add(g("T"), g("Q1")) == *g("T'"));
        rel("T + Qt = -T'", curve.add(g("T"), g("Qt")) == *g("-T'"));
        rel("Q0 + Q1 = Qt", curve.add(g("Q0"), g("Q1")) == *g("Qt"));
        for l in ["Q0", "Q1", "Qt"] {
            rel(&format!("2{l} = O"), curve.double(g(l)).is_infinity());
        }
        rel(
            "all points on curve",
            self.points.iter().all(|p| curve.on_curve(p)),
        );

        // element orders: Z/2 x Z/4 has one element of order 1, three of
        // order 2 and four of order 4
        let orders: Vec<u32> = self
            .points
            .iter()
            .map(|p| {
                let mut k = 1;
                let mut acc = p.clone();
                while !acc.is_infinity() && k <= 8 {
                    acc = curve.add(&acc, p);
                    k += 1;
                }
                k
            })
            .collect();
        let count = |o: u32| orders.iter().filter(|&&x| x == o).count();
        // aT + bQ1 for a in Z/4, b in Z/2 must enumerate the set
        let mut hit = [false; 8];
        for a in 0..4 {
            for b in 0..2 {
                let pt = curve.add(&curve.smul(a, g("T")), &curve.smul(b, g("Q1")));
                if let Some(i) = self.position(&pt) {
                    hit[i] = true;
                }
            }
        }
        let structure =
            closed && count(1) == 1 && count(2) == 3 && count(4) == 4 && hit.iter().all(|&h| h);
        TorsionReport {
            closed,
            structure_z2_z4: structure,
            orders,
            relations,
            table,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Relation {
    pub name: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TorsionReport {
    pub closed: bool,
    pub structure_z2_z4: bool,
    pub orders: Vec<u32>,
    pub relations: Vec<Relation>,
    pub table: Vec<Vec<Option<usize>>>,
}

impl TorsionReport {
    pub fn all_hold(&self) -> bool {
        self.closed && self.structure_z2_z4 && self.relations.iter().all(|r| r.holds)
    }
}

/// A point `R_b` together with the group-law sum it is compared against.
#[derive(Clone, Debug, Serialize)]
pub struct RPoint {
    pub b: u64,
    /// `i` with `zeta^i + zeta^{-i} = b`.
    pub index: u64,
    pub point: CurvePoint,
    pub sum: CurvePoint,
    pub x_matches_sum: bool,
    pub equals_sum_up_to_sign: bool,
    pub frobenius_fixed: bool,
}

/// `E: y^2 = x(x+1)(x+u^d)` over `K_d`.
#[derive(Clone, Debug)]
pub struct Family {
    params: FamilyParams,
    curve: WeierstrassCurve,
    t: RatFunc,
}

impl Family {
    pub fn new(p: u64, f: u32) -> Result<Family, FamilyError> {
        let params = FamilyParams::new(p, f)?;
        let field = params.field.clone();
        let t = RatFunc::from_poly(Poly::monomial(&field, 1, params.d as usize));
        let curve =
            WeierstrassCurve::short(&RatFunc::one(&field) + &t, t.clone(), RatFunc::zero(&field))?;
        Ok(Family { params, curve, t })
    }

    pub fn params(&self) -> &FamilyParams {
        &self.params
    }

    pub fn curve(&self) -> &WeierstrassCurve {
        &self.curve
    }

    /// `t = u^d`.
    pub fn t(&self) -> &RatFunc {
        &self.t
    }

    pub fn field(&self) -> &Field {
        &self.params.field
    }

    fn d(&self) -> u64 {
        self.params.d
    }

    /// `P(c u) = (c u, c u (c u + 1)^{d/2})`.
    fn p_at(&self, c: u32) -> CurvePoint {
        let f = self.field();
        let x = Poly::monomial(f, c, 1);
        let y = &x * &(&x + &Poly::one(f)).pow(self.d() / 2);
        CurvePoint::affine(RatFunc::from_poly(x), RatFunc::from_poly(y))
    }

    /// `P_i = P(zeta^i u)`.
    pub fn point_p(&self, i: i64) -> CurvePoint {
        self.p_at(self.params.zeta_pow(i))
    }

    /// `P_0, ..., P_{d-1}`.
    pub fn points(&self) -> Vec<CurvePoint> {
        (0..self.d() as i64).map(|i| self.point_p(i)).collect()
    }

    pub fn torsion_points(&self) -> TorsionSet {
        let f = self.field();
        let half = (self.d() / 2) as usize;
        let s = RatFunc::from_poly(Poly::monomial(f, 1, half));
        let one = RatFunc::one(f);
        let [q0, q1, qt] = self
            .curve
            .two_torsion()
            .expect("family curve has the Legendre shape");
        let t_pt = CurvePoint::affine(s.clone(), &s * &(&s + &one));
        let ms = -&s;
        let t_prime = CurvePoint::affine(ms.clone(), &ms * &(&one - &s));
        let neg_t = self.curve.neg(&t_pt);
        let neg_tp = self.curve.neg(&t_prime);
        TorsionSet {
            points: vec![
                CurvePoint::Infinity,
                q0,
                q1,
                qt,
                t_pt,
                neg_t,
                t_prime,
                neg_tp,
            ],
        }
    }

    /// `8 P = O`; the torsion subgroup has exponent dividing 8.
    pub fn is_torsion(&self, p: &CurvePoint) -> bool {
        self.curve.smul(8, p).is_infinity()
    }

    /// `sum_i c_i P_i` for a coefficient vector indexed by `Z/dZ`.
    pub fn combination(&self, coeffs: &[i64]) -> CurvePoint {
        let pts: Vec<CurvePoint> = (0..coeffs.len() as i64).map(|i| self.point_p(i)).collect();
        self.curve.combination(coeffs, &pts)
    }

    /// Sums of the `P_i` over even and over odd indices.
    pub fn parity_sums(&self) -> (CurvePoint, CurvePoint) {
        let d = self.d() as usize;
        let even: Vec<i64> = (0..d).map(|i| (i % 2 == 0) as i64).collect();
        let odd: Vec<i64> = (0..d).map(|i| (i % 2 == 1) as i64).collect();
        (self.combination(&even), self.combination(&odd))
    }

    /// Substitution `u -> zeta u` applied to the coordinates.
    pub fn conjugate(&self, p: &CurvePoint) -> CurvePoint {
        let z = self.params.zeta.code();
        p.map_coords(|r| r.scale_var(z))
    }

    /// `b` in `F_p` with `x^2 - bx + 1` irreducible over `F_p` (needs f = 1).
    pub fn admissible_b(&self) -> Result<Vec<u64>, FamilyError> {
        if self.params.f != 1 {
            return Err(FamilyError::NeedsDegreeOne("R_b"));
        }
        let p = self.params.p;
        Ok((0..p)
            .filter(|&b| !prime_field_square((b * b + p * p - 4) % p, p))
            .collect())
    }

    /// Closed form for `x(R_b)`:
    /// `(2u^{p+1} + b u^p + b u + 2 - 2(u^2 + b u + 1)^{d/2}) / (b^2 - 4)`.
    pub fn r_x(&self, b: u64) -> Result<RatFunc, FamilyError> {
        let p = self.params.p;
        if self.params.f != 1 {
            return Err(FamilyError::NeedsDegreeOne("R_b"));
        }
        if b >= p {
            return Err(FamilyError::NotInPrimeField(b));
        }
        let disc = (b * b + p * p - 4) % p;
        if prime_field_square(disc, p) {
            return Err(FamilyError::ReducibleQuadratic(b));
        }
        let f = self.field();
        let bc = b as u32;
        let pu = p as usize;
        let mut num = &Poly::monomial(f, 2, pu + 1) + &Poly::monomial(f, bc, pu);
        num = &num + &Poly::monomial(f, bc, 1);
        num = &num + &Poly::constant(f, 2);
        let quad = Poly::from_coeffs(f, vec![1, bc, 1]);
        num = &num - &quad.pow(self.d() / 2).scale(2);
        let inv = f.inv(disc as u32).expect("b^2 - 4 is a nonzero non-square");
        Ok(RatFunc::from_poly(num.scale(inv)))
    }

    /// `R_b`, with `y` the square root of `x(x+1)(x+t)` of smaller leading code.
    pub fn point_r(&self, b: u64) -> Result<RPoint, FamilyError> {
        let x = self.r_x(b)?;
        let y = self
            .curve
            .rhs(&x)
            .sqrt()
            .expect("x(R_b) is the x-coordinate of a K_d-rational point");
        let point = CurvePoint::affine(x, y);
        let field = self.field();
        let bc = b as u32;
        let index = (1..self.d() as i64)
            .find(|&i| field.add(self.params.zeta_pow(i), self.params.zeta_pow(-i)) == bc)
            .expect("roots of an irreducible quadratic over F_p are d-th roots of unity")
            as u64;
        let sum = self
            .curve
            .add(&self.point_p(index as i64), &self.point_p(-(index as i64)));
        let x_matches_sum = sum.x() == point.x();
        let equals_sum_up_to_sign = sum == point || self.curve.neg(&sum) == point;
        let frobenius_fixed = point.frobenius() == point && sum.frobenius() == sum;
        Ok(RPoint {
            b,
            index,
            point,
            sum,
            x_matches_sum,
            equals_sum_up_to_sign,
            frobenius_fixed,
        })
    }

    /// `sum_{j < f} P_{i p^j}`.
    pub fn trace_point(&self, i: i64) -> Result<CurvePoint, FamilyError> {
        if self.params.f == 0 {
            return Err(FamilyError::NeedsPositiveDegree("trace_point"));
        }
        let d = self.d() as i64;
        let p = self.params.p as i64;
        let mut idx = i.rem_euclid(d);
        let mut acc = CurvePoint::Infinity;
        for _ in 0..self.params.f {
            acc = self.curve.add(&acc, &self.point_p(idx));
            idx = (idx * p).rem_euclid(d);
        }
        Ok(acc)
    }

    /// Orbits of `i -> q i` on `Z/dZ`, each with the sum of its `P_i`.
    /// These sums are the points fixed by the `q`-power Frobenius.
    pub fn orbit_sums(&self, q: u64) -> Vec<(Vec<u64>, CurvePoint)> {
        let d = self.d();
        let mut seen = vec![false; d as usize];
        let mut out = Vec::new();
        for start in 0..d {
            if seen[start as usize] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut i = start;
            while !seen[i as usize] {
                seen[i as usize] = true;
                orbit.push(i);
                i = ((i as u128 * q as u128) % d as u128) as u64;
            }
            let sum = orbit.iter().fold(CurvePoint::Infinity, |acc, &j| {
                self.curve.add(&acc, &self.point_p(j as i64))
            });
            out.push((orbit, sum));
        }
        out
    }
}

fn prime_field_square(a: u64, p: u64) -> bool {
    if a == 0 {
        return true;
    }
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc == 1
}
