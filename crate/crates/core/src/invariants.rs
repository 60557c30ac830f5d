//! Closed-form invariants of the family: rank formula, conductor,
//! L-function, regulator, index bound, Tamagawa number, Sha and the refined
//! BSD identity with `log q` carried as a formal symbol.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::heights::{determinant_formula, Rat, RatSer};
use crate::legendre::{Family, FamilyParams};
use crate::ratfunc::Poly;

/// Order of the torsion subgroup `Z/2 x Z/4`.
pub const TORSION_ORDER: u64 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("index m must be at least 1")]
    ZeroIndex,
    #[error("q = {q} is not a power of {base}")]
    NotAPower { q: u64, base: u64 },
    #[error("gcd(q, d) != 1 for q = {q}, d = {d}")]
    NotCoprime { q: u64, d: u64 },
    #[error("log q degrees disagree: {lhs} vs {rhs}")]
    LogDegreeMismatch { lhs: u32, rhs: u32 },
    #[error("discriminant audit failed: {0}")]
    Audit(String),
}

/// Reduction type of a bad fiber.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Reduction {
    /// Split multiplicative with `n` components.
    I(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fiber {
    pub place: String,
    pub kind: Reduction,
    /// Order of the component group.
    pub c: u64,
    /// Local factor of the discriminant of the pairing.
    pub d_v: u64,
}

impl Fiber {
    /// Euler number of an `I_n` fiber, i.e. its contribution to `deg disc`.
    pub fn euler(&self) -> u64 {
        match self.kind {
            Reduction::I(n) => n,
        }
    }
}

/// The bad fibers: `I_2d` at `u = 0` and `u = inf`, `I_2` where `u^d = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberData {
    pub d: u64,
    pub delta: u64,
    pub fibers: Vec<Fiber>,
}

impl FiberData {
    pub fn new(d: u64) -> FiberData {
        let mut fibers = vec![Fiber {
            place: "u=0".into(),
            kind: Reduction::I(2 * d),
            c: 2 * d,
            d_v: 2 * d,
        }];
        fibers.extend((0..d).map(|i| Fiber {
            place: format!("u=zeta^{i}"),
            kind: Reduction::I(2),
            c: 2,
            d_v: 2,
        }));
        fibers.push(Fiber {
            place: "u=inf".into(),
            kind: Reduction::I(2 * d),
            c: 2 * d,
            d_v: 2 * d,
        });
        FiberData {
            d,
            delta: d / 2,
            fibers,
        }
    }

    pub fn euler_sum(&self) -> u64 {
        self.fibers.iter().map(Fiber::euler).sum()
    }

    pub fn product_c(&self) -> BigUint {
        self.fibers.iter().map(|f| BigUint::from(f.c)).product()
    }

    pub fn product_d_v(&self) -> BigUint {
        self.fibers.iter().map(|f| BigUint::from(f.d_v)).product()
    }
}

fn totient(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn mult_order(q: u64, e: u64) -> u64 {
    let qm = q % e;
    let mut x = qm;
    let mut k = 1;
    while x != 1 {
        x = ((x as u128 * qm as u128) % e as u128) as u64;
        k += 1;
    }
    k
}

/// `sum_{e | d, e > 2} phi(e) / o_q(e)`.
pub fn rank_formula(d: u64, q: u64) -> Result<u64, InvariantError> {
    if q.gcd(&d) != 1 {
        return Err(InvariantError::NotCoprime { q, d });
    }
    Ok((3..=d)
        .filter(|e| d.is_multiple_of(*e))
        .map(|e| {
            let (phi, o) = (totient(e), mult_order(q, e));
            debug_assert_eq!(phi % o, 0);
            phi / o
        })
        .sum())
}

/// Number of places of bad (multiplicative) reduction.
pub fn conductor_degree(d: u64) -> u64 {
    d + 2
}

/// `L(E/K_d, s) = (1 - q^{1-s})^exponent`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LFunction {
    pub base: String,
    pub exponent: u64,
    /// `conductor degree - 4`.
    pub rank_upper_bound: u64,
}

pub fn l_function(d: u64) -> LFunction {
    LFunction {
        base: "1-q^(1-s)".into(),
        exponent: d - 2,
        rank_upper_bound: conductor_degree(d) - 4,
    }
}

/// A rational multiple of `(log q)^log_exp`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogQ {
    pub coeff: Rat,
    pub log_exp: u32,
}

impl LogQ {
    pub fn new(coeff: Rat, log_exp: u32) -> LogQ {
        LogQ { coeff, log_exp }
    }

    pub fn mul(&self, other: &LogQ) -> LogQ {
        LogQ::new(&self.coeff * &other.coeff, self.log_exp + other.log_exp)
    }

    pub fn scale(&self, r: &Rat) -> LogQ {
        LogQ::new(&self.coeff * r, self.log_exp)
    }

    /// `self / other`, which must be a pure rational.
    pub fn ratio(&self, other: &LogQ) -> Result<Rat, InvariantError> {
        if self.log_exp != other.log_exp {
            return Err(InvariantError::LogDegreeMismatch {
                lhs: self.log_exp,
                rhs: other.log_exp,
            });
        }
        Ok(&self.coeff / &other.coeff)
    }
}

impl Serialize for LogQ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("LogQ", 2)?;
        st.serialize_field("coeff", &RatSer(&self.coeff))?;
        st.serialize_field("log_q_exponent", &self.log_exp)?;
        st.end()
    }
}

fn check_index(m: u64) -> Result<(), InvariantError> {
    if m == 0 {
        Err(InvariantError::ZeroIndex)
    } else {
        Ok(())
    }
}

fn int(n: impl Into<BigInt>) -> Rat {
    Rat::from_integer(n.into())
}

/// Coefficient of `(log q)^{d-2}` in the regulator for index `m`.
pub fn regulator(d: u64, m: u64) -> Result<Rat, InvariantError> {
    check_index(m)?;
    Ok(determinant_formula(d) / int(m * m))
}

/// `p^{f(d-2)/2}`.
pub fn index_bound(params: &FamilyParams) -> BigUint {
    let e = params.f() as u64 * (params.d() - 2) / 2;
    BigUint::from(params.p()).pow(e as u32)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegralityReport {
    pub m: u64,
    pub index_bound: String,
    pub m_divides_bound: bool,
    /// `R * prod d_v / |tors|^2` without the `log q` factor.
    #[serde(serialize_with = "ser_rat")]
    pub scaled_regulator: Rat,
    pub scaled_regulator_integral: bool,
}

impl IntegralityReport {
    pub fn passes(&self) -> bool {
        self.m_divides_bound && self.scaled_regulator_integral
    }
}

pub fn integrality_check(
    params: &FamilyParams,
    m: u64,
) -> Result<IntegralityReport, InvariantError> {
    let bound = index_bound(params);
    let r = regulator(params.d(), m)?;
    let dv = FiberData::new(params.d()).product_d_v();
    let scaled = r * int(BigInt::from(dv)) / int(TORSION_ORDER * TORSION_ORDER);
    Ok(IntegralityReport {
        m,
        index_bound: bound.to_string(),
        m_divides_bound: (&bound % BigUint::from(m)).is_zero(),
        scaled_regulator_integral: scaled.is_integer(),
        scaled_regulator: scaled,
    })
}

/// `log_base(q)` if `q` is a positive power of `base`.
fn log_exact(q: u64, base: u64) -> Option<u32> {
    if base == 1 {
        return None;
    }
    let mut x = q;
    let mut k = 0;
    while x > 1 && x.is_multiple_of(base) {
        x /= base;
        k += 1;
    }
    (x == 1 && k >= 1).then_some(k)
}

/// Checks that `q` is a power of the order of `F_p(mu_d)`.
pub fn check_q(params: &FamilyParams, q: u64) -> Result<(), InvariantError> {
    let base = params.q();
    log_exact(q, base)
        .map(|_| ())
        .ok_or(InvariantError::NotAPower { q, base })
}

/// `m^2 (q/p^{2f})^{(p^f-1)/2}`.
pub fn sha_order(params: &FamilyParams, q: u64, m: u64) -> Result<BigUint, InvariantError> {
    check_index(m)?;
    check_q(params, q)?;
    let p2f = BigUint::from(params.p()).pow(2 * params.f());
    let ratio = BigUint::from(q) / p2f;
    let e = (params.d() - 2) / 2;
    Ok(BigUint::from(m * m) * ratio.pow(e as u32))
}

/// `q^{(d-2)/2}` and `(q/p^{2f})^{(d-2)/2}`.
pub fn sha_bounds(params: &FamilyParams, q: u64) -> Result<(BigUint, BigUint), InvariantError> {
    check_q(params, q)?;
    let e = ((params.d() - 2) / 2) as u32;
    let p2f = BigUint::from(params.p()).pow(2 * params.f());
    Ok((BigUint::from(q).pow(e), (BigUint::from(q) / p2f).pow(e)))
}

/// `q^{1-delta} prod c_v`.
pub fn tamagawa(params: &FamilyParams, q: u64) -> Rat {
    let fibers = FiberData::new(params.d());
    int(BigInt::from(q)).pow(1 - fibers.delta as i32) * int(BigInt::from(fibers.product_c()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BsdReport {
    pub p: u64,
    pub f: u32,
    pub d: u64,
    pub q: u64,
    pub rank: u64,
    pub conductor_degree: u64,
    pub l_function: LFunction,
    /// Leading Taylor coefficient of `L` at `s = 1`.
    pub leading_coefficient: LogQ,
    pub regulator: LogQ,
    #[serde(serialize_with = "ser_rat")]
    pub tamagawa: Rat,
    pub tamagawa_product_c: String,
    pub torsion_order: u64,
    pub index: u64,
    pub sha: String,
    pub sha_upper_bound: String,
    pub sha_lower_bound: String,
    pub sha_within_bounds: bool,
    #[serde(serialize_with = "ser_rat")]
    pub residue: Rat,
}

impl BsdReport {
    pub fn holds(&self) -> bool {
        self.residue.is_one()
    }
}

/// Ratio of the leading coefficient `(log q)^{d-2}` of
/// `(1 - q^{1-s})^{d-2}` at `s = 1` to `|Sha| R tau / |tors|^2`.
pub fn bsd_check(params: &FamilyParams, q: u64, m: u64) -> Result<BsdReport, InvariantError> {
    let d = params.d();
    let sha = sha_order(params, q, m)?;
    let (hi, lo) = sha_bounds(params, q)?;
    let lf = l_function(d);
    let lead = LogQ::new(Rat::one(), lf.exponent as u32);
    let reg = LogQ::new(regulator(d, m)?, (d - 2) as u32);
    let tau = tamagawa(params, q);
    let rhs = reg
        .scale(&int(BigInt::from(sha.clone())))
        .scale(&tau)
        .scale(&(Rat::one() / int(TORSION_ORDER * TORSION_ORDER)));
    let residue = lead.ratio(&rhs)?;
    Ok(BsdReport {
        p: params.p(),
        f: params.f(),
        d,
        q,
        rank: rank_formula(d, q)?,
        conductor_degree: conductor_degree(d),
        l_function: lf,
        leading_coefficient: lead,
        regulator: reg,
        tamagawa: tau,
        tamagawa_product_c: FiberData::new(d).product_c().to_string(),
        torsion_order: TORSION_ORDER,
        index: m,
        sha_within_bounds: sha >= lo && sha <= hi,
        sha: sha.to_string(),
        sha_upper_bound: hi.to_string(),
        sha_lower_bound: lo.to_string(),
        residue,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscriminantAudit {
    pub d: u64,
    /// `deg_u` of the computed discriminant.
    pub affine_degree: u64,
    pub expected_affine_degree: u64,
    pub matches_closed_form: bool,
    pub order_at_zero: u64,
    /// Multiplicity at each root of `u^d = 1`.
    pub order_at_roots_of_unity: Vec<u64>,
    /// `12 delta - deg`.
    pub order_at_infinity: u64,
    pub fiber_euler_sum: u64,
    pub twelve_delta: u64,
}

impl DiscriminantAudit {
    pub fn passes(&self) -> bool {
        let fibers = FiberData::new(self.d);
        self.matches_closed_form
            && self.affine_degree == self.expected_affine_degree
            && self.order_at_zero == fibers.fibers[0].euler()
            && self.order_at_roots_of_unity.iter().all(|&o| o == 2)
            && self.order_at_infinity == fibers.fibers.last().map_or(0, Fiber::euler)
            && self.fiber_euler_sum == self.twelve_delta
    }
}

fn multiplicity(f: &Poly, root: u32) -> u64 {
    let lin = Poly::from_coeffs(f.field(), vec![f.field().neg(root), 1]);
    let mut g = f.clone();
    let mut k = 0;
    while !g.is_zero() {
        let (q, r) = g.divmod(&lin).expect("linear divisor");
        if !r.is_zero() {
            break;
        }
        g = q;
        k += 1;
    }
    k
}

/// Compares the computed discriminant with `16 u^{2d} (u^d - 1)^2` and the
/// declared fibers.
pub fn discriminant_degree_audit(family: &Family) -> Result<DiscriminantAudit, InvariantError> {
    let params = family.params();
    let d = params.d();
    let field = params.field();
    let disc = family.curve().discriminant();
    if !disc.is_polynomial() {
        return Err(InvariantError::Audit(
            "discriminant is not a polynomial".into(),
        ));
    }
    let disc = disc.num().clone();
    let ud1 = &Poly::monomial(field, 1, d as usize) - &Poly::one(field);
    let closed = &Poly::monomial(field, field.from_int(16), 2 * d as usize) * &(&ud1 * &ud1);
    let affine_degree = disc.degree().unwrap_or(0) as u64;
    let delta = d / 2;
    let roots: Vec<u64> = (0..d as i64)
        .map(|i| multiplicity(&disc, params.zeta_pow(i)))
        .collect();
    Ok(DiscriminantAudit {
        d,
        affine_degree,
        expected_affine_degree: 4 * d,
        matches_closed_form: disc == closed,
        order_at_zero: disc.valuation_at_zero() as u64,
        order_at_roots_of_unity: roots,
        order_at_infinity: (12 * delta).saturating_sub(affine_degree),
        fiber_euler_sum: FiberData::new(d).euler_sum(),
        twelve_delta: 12 * delta,
    })
}

fn ser_rat<S: serde::Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    RatSer(r).serialize(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heights::rat;

    fn params(p: u64, f: u32) -> FamilyParams {
        FamilyParams::new(p, f).unwrap()
    }

    #[test]
    fn rank_formula_values() {
        assert_eq!(rank_formula(4, 9).unwrap(), 2);
        assert_eq!(rank_formula(4, 3).unwrap(), 1);
        assert_eq!(rank_formula(10, 3).unwrap(), 2);
        assert_eq!(rank_formula(10, 81).unwrap(), 8);
        assert_eq!(rank_formula(2, 3).unwrap(), 0);
        assert!(rank_formula(4, 2).is_err());
        for (p, f) in [(3, 1), (5, 1), (7, 1), (3, 2)] {
            let pr = params(p, f);
            assert_eq!(rank_formula(pr.d(), pr.q()).unwrap(), pr.d() - 2);
        }
    }

    #[test]
    fn totient_and_order() {
        let phis: Vec<u64> = (1..=12).map(totient).collect();
        assert_eq!(phis, vec![1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]);
        assert_eq!(mult_order(3, 10), 4);
        assert_eq!(mult_order(9, 4), 1);
    }

    #[test]
    fn conductor_and_l_function() {
        assert_eq!(conductor_degree(4), 6);
        assert_eq!(l_function(4).exponent, 2);
        assert_eq!(l_function(2).exponent, 0);
        assert_eq!(conductor_degree(6), 8);
        assert_eq!(l_function(6).exponent, 4);
        assert_eq!(l_function(6).rank_upper_bound, 4);
    }

    #[test]
    fn regulator_values() {
        assert_eq!(regulator(4, 1).unwrap(), rat(9, 16));
        assert_eq!(regulator(4, 3).unwrap(), rat(1, 16));
        assert_eq!(regulator(6, 1).unwrap(), rat(625, 144));
        assert_eq!(regulator(4, 0), Err(InvariantError::ZeroIndex));
    }

    #[test]
    fn index_and_integrality() {
        // the bound squared is (d-1)^{d-2} = R * prod d_v / |tors|^2 at m = 1
        for (p, f) in [(3, 1), (5, 1), (7, 1), (3, 2)] {
            let pr = params(p, f);
            let b = index_bound(&pr);
            assert_eq!(&b * &b, BigUint::from(pr.d() - 1).pow(pr.d() as u32 - 2));
            assert!(integrality_check(&params(p, f), 1).unwrap().passes());
        }
        assert_eq!(index_bound(&params(5, 1)), BigUint::from(25u32));
        assert_eq!(index_bound(&params(3, 2)), BigUint::from(6561u32));
        let r = integrality_check(&params(3, 1), 1).unwrap();
        assert_eq!(r.scaled_regulator, rat(9, 1));
        assert!(integrality_check(&params(3, 1), 3).unwrap().passes());
        assert!(!integrality_check(&params(3, 1), 2).unwrap().passes());
    }

    #[test]
    fn sha_values() {
        let pr = params(3, 1);
        assert_eq!(sha_order(&pr, 9, 1).unwrap(), BigUint::from(1u32));
        assert_eq!(sha_order(&pr, 81, 1).unwrap(), BigUint::from(9u32));
        assert_eq!(sha_order(&pr, 9, 3).unwrap(), BigUint::from(9u32));
        assert!(matches!(
            sha_order(&pr, 27, 1),
            Err(InvariantError::NotAPower { .. })
        ));
    }

    #[test]
    fn bsd_residue_is_one() {
        for (p, f) in [(3, 1), (5, 1), (7, 1), (3, 2), (3, 0), (5, 0)] {
            let pr = params(p, f);
            let q0 = pr.q();
            for q in [q0, q0 * q0] {
                for m in [1, p] {
                    let rep = bsd_check(&pr, q, m).unwrap();
                    assert!(rep.holds(), "p={p} f={f} q={q} m={m}: {}", rep.residue);
                }
            }
        }
    }

    #[test]
    fn discriminant_audits() {
        for (p, f, total) in [(3, 0, 12), (3, 1, 24), (5, 1, 36), (7, 1, 48)] {
            let fam = Family::new(p, f).unwrap();
            let a = discriminant_degree_audit(&fam).unwrap();
            assert!(a.passes(), "{a:?}");
            assert_eq!(a.twelve_delta, total);
            assert_eq!(a.affine_degree + a.order_at_infinity, total);
        }
        let a = discriminant_degree_audit(&Family::new(3, 1).unwrap()).unwrap();
        assert_eq!((a.affine_degree, a.order_at_infinity), (16, 8));
    }
}
