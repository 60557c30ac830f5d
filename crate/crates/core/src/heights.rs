//! Canonical heights as doubling limits `lim deg x(2^n P) / 4^n`, the
//! height pairing, and Gram matrices of the family's points.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::curve::{CurvePoint, WeierstrassCurve};
use crate::linalg;
use crate::ratfunc::{Poly, RatFunc};

/// Exact rational number used for heights and Gram entries.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Default cap on the number of doublings.
pub const DEFAULT_MAX_DOUBLINGS: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeightError {
    #[error("naive height of the point at infinity")]
    Infinity,
    #[error("curve coefficients must be polynomials in u")]
    NonPolynomialCurve,
    #[error(
        "canonical height did not stabilize within {doublings} doublings (naive heights {naive:?})"
    )]
    NotStabilized { doublings: u32, naive: Vec<u64> },
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("basis {0:?} selects a singular submatrix")]
    SingularBasis(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeightConfig {
    pub max_doublings: u32,
    /// Estimates are rounded to the nearest multiple of `1/denominator`.
    pub denominator: u64,
    /// Lag `L` of the estimate `(h_n - h_{n-L}) / (4^n - 4^{n-L})`.
    pub lag: u32,
    /// Estimates are formed only once `n - L >= preperiod`.
    pub preperiod: u32,
    /// Bounds on `deg x(Q) - h(Q)` over all points `Q`.
    #[serde(serialize_with = "ser_pair")]
    pub envelope: (Rat, Rat),
}

impl HeightConfig {
    /// Settings for `y^2 = x(x+1)(x+u^d)`: cap 6, grid `1/(4 d^2)`.
    ///
    /// The error `deg x(Q) - h(Q)` lies in `[-d, 3d/2]` and is a function of
    /// the components met by `Q` in the fibers of types `I_2d` (at 0 and
    /// infinity) and `I_2`, invariant under `i -> -i`. Along `2^n P` it is
    /// therefore periodic from `n = v_2(2d)` on, with period the order of 2
    /// on `Z/2d` modulo `+-1`, and the lagged estimate is exact there.
    pub fn for_degree(d: u64) -> HeightConfig {
        HeightConfig {
            max_doublings: DEFAULT_MAX_DOUBLINGS,
            denominator: 4 * d * d,
            lag: doubling_period(2 * d),
            preperiod: (2 * d).trailing_zeros(),
            envelope: (rat(-(d as i64), 1), rat(3 * d as i64, 2)),
        }
    }

    pub fn with_max_doublings(mut self, n: u32) -> HeightConfig {
        self.max_doublings = n;
        self
    }
}

/// Smallest `L >= 1` with `2^L = +-1` modulo the odd part of `n`.
pub fn doubling_period(n: u64) -> u32 {
    let mut m = n;
    while m.is_multiple_of(2) {
        m /= 2;
    }
    if m == 1 {
        return 1;
    }
    let mut x = 2 % m;
    let mut l = 1;
    while x != 1 && x != m - 1 {
        x = x * 2 % m;
        l += 1;
    }
    l
}

/// Record of one canonical-height evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeightTrace {
    /// `deg x(2^n P)` for the doublings performed; empty for torsion that
    /// reaches infinity immediately.
    pub naive: Vec<u64>,
    /// Rounded estimates, one per step from `n = lag + preperiod` on.
    #[serde(serialize_with = "ser_rats")]
    pub estimates: Vec<Rat>,
    pub doublings: u32,
    #[serde(serialize_with = "ser_rat")]
    pub value: Rat,
    pub reached_infinity: bool,
}

/// Heights on a curve whose Weierstrass coefficients are polynomials in `u`.
#[derive(Debug, Clone)]
pub struct HeightEngine {
    curve: WeierstrassCurve,
    b2: Poly,
    b4: Poly,
    b6: Poly,
    b8: Poly,
    disc_sq: Poly,
    config: HeightConfig,
}

fn poly_of(r: &RatFunc) -> Result<Poly, HeightError> {
    if r.is_polynomial() {
        Ok(r.num().clone())
    } else {
        Err(HeightError::NonPolynomialCurve)
    }
}

impl HeightEngine {
    pub fn new(
        curve: &WeierstrassCurve,
        config: HeightConfig,
    ) -> Result<HeightEngine, HeightError> {
        for a in [curve.a1(), curve.a2(), curve.a3(), curve.a4(), curve.a6()] {
            poly_of(a)?;
        }
        let disc = poly_of(&curve.discriminant())?;
        Ok(HeightEngine {
            b2: poly_of(&curve.b2())?,
            b4: poly_of(&curve.b4())?,
            b6: poly_of(&curve.b6())?,
            b8: poly_of(&curve.b8())?,
            disc_sq: &disc * &disc,
            curve: curve.clone(),
            config,
        })
    }

    pub fn curve(&self) -> &WeierstrassCurve {
        &self.curve
    }

    pub fn config(&self) -> &HeightConfig {
        &self.config
    }

    /// `deg x(P)`; zero for a constant x-coordinate.
    pub fn naive_height(&self, p: &CurvePoint) -> Result<Rat, HeightError> {
        let x = p.x().ok_or(HeightError::Infinity)?;
        Ok(Rat::from_integer(BigInt::from(x_degree(x.num(), x.den()))))
    }

    /// `x(2P)` from `x(P) = a/b` in lowest terms, again in lowest terms, or
    /// `None` when `2P = O`.
    ///
    /// The resultant of the two doubling forms is `disc^2`, so any common
    /// factor divides `disc^2`.
    pub fn double_x(&self, a: &Poly, b: &Poly) -> Option<(Poly, Poly)> {
        let a2 = a * a;
        let b2 = b * b;
        let ab = a * b;
        let a2b2 = &a2 * &b2;
        let ab3 = &ab * &b2;
        let b4 = &b2 * &b2;
        let n = &(&(&(&a2 * &a2) - &(&self.b4 * &a2b2)) - &(&self.b6 * &ab3).scale(self.two()))
            - &(&self.b8 * &b4);
        let m = &(&(&(&a2 * &ab).scale(self.four()) + &(&self.b2 * &a2b2))
            + &(&self.b4 * &ab3).scale(self.two()))
            + &(&self.b6 * &b4);
        if m.is_zero() {
            return None;
        }
        let g1 = self
            .disc_sq
            .gcd(&m.rem(&self.disc_sq).expect("disc is nonzero"));
        let g = if g1.is_one() {
            g1
        } else {
            g1.gcd(&n.rem(&g1).expect("gcd is nonzero"))
        };
        if g.is_one() {
            return Some((n, m));
        }
        Some((
            n.exact_div(&g).expect("common factor divides"),
            m.exact_div(&g).expect("common factor divides"),
        ))
    }

    fn two(&self) -> u32 {
        self.curve.field().from_int(2)
    }

    fn four(&self) -> u32 {
        self.curve.field().from_int(4)
    }

    /// `deg x(2^n P)` for `n = 0..=max`, stopping early at infinity.
    pub fn naive_sequence(&self, p: &CurvePoint, max: u32) -> (Vec<u64>, bool) {
        let Some(x) = p.x() else {
            return (Vec::new(), true);
        };
        let (mut a, mut b) = (x.num().clone(), x.den().clone());
        let mut seq = vec![x_degree(&a, &b)];
        for _ in 0..max {
            match self.double_x(&a, &b) {
                Some((na, nb)) => {
                    a = na;
                    b = nb;
                    seq.push(x_degree(&a, &b));
                }
                None => return (seq, true),
            }
        }
        (seq, false)
    }

    /// `h(P) = lim deg x(2^n P) / 4^n`, with the evaluation record.
    ///
    /// At each step with `n - L >= preperiod` the estimate `(h_n - h_{n-L}) / (4^n - 4^{n-L})` is
    /// rounded to the grid; the value is accepted once two consecutive
    /// rounded estimates agree and `h_n - 4^n v` lies in the envelope.
    pub fn canonical_height_trace(&self, p: &CurvePoint) -> Result<HeightTrace, HeightError> {
        if !self.curve.on_curve(p) {
            return Err(HeightError::NotOnCurve);
        }
        let zero_trace = |naive: Vec<u64>, estimates: Vec<Rat>| HeightTrace {
            doublings: naive.len().saturating_sub(1) as u32,
            naive,
            estimates,
            value: Rat::zero(),
            reached_infinity: true,
        };
        let Some(x) = p.x() else {
            return Ok(zero_trace(Vec::new(), Vec::new()));
        };
        let cfg = &self.config;
        let lag = cfg.lag.max(1) as usize;
        let (mut a, mut b) = (x.num().clone(), x.den().clone());
        let mut naive = vec![x_degree(&a, &b)];
        let mut estimates: Vec<Rat> = Vec::new();
        for n in 1..=cfg.max_doublings as usize {
            match self.double_x(&a, &b) {
                Some((na, nb)) => {
                    a = na;
                    b = nb;
                }
                None => return Ok(zero_trace(naive, estimates)),
            }
            naive.push(x_degree(&a, &b));
            if n < lag + cfg.preperiod as usize {
                continue;
            }
            let num = BigInt::from(naive[n]) - BigInt::from(naive[n - lag]);
            let den = (BigInt::one() << (2 * n)) - (BigInt::one() << (2 * (n - lag)));
            let est = round_to_grid(&Rat::new(num, den), cfg.denominator);
            let agrees = estimates.last() == Some(&est);
            estimates.push(est.clone());
            if agrees && self.within_envelope(naive[n], n, &est) {
                return Ok(HeightTrace {
                    naive,
                    estimates,
                    doublings: n as u32,
                    value: est,
                    reached_infinity: false,
                });
            }
        }
        Err(HeightError::NotStabilized {
            doublings: cfg.max_doublings,
            naive,
        })
    }

    fn within_envelope(&self, h: u64, n: usize, v: &Rat) -> bool {
        let scaled = Rat::from_integer(BigInt::one() << (2 * n)) * v;
        let e = Rat::from_integer(BigInt::from(h)) - scaled;
        e >= self.config.envelope.0 && e <= self.config.envelope.1
    }

    pub fn canonical_height(&self, p: &CurvePoint) -> Result<Rat, HeightError> {
        Ok(self.canonical_height_trace(p)?.value)
    }

    /// `<P, Q> = (h(P+Q) - h(P) - h(Q)) / 2`.
    pub fn pairing(&self, p: &CurvePoint, q: &CurvePoint) -> Result<Rat, HeightError> {
        let hs = self.canonical_height(&self.curve.add(p, q))?;
        let hp = self.canonical_height(p)?;
        let hq = self.canonical_height(q)?;
        Ok((hs - hp - hq) / rat(2, 1))
    }

    /// Gram matrix of pairwise pairings; entries are evaluated in parallel
    /// and assembled in index order.
    pub fn gram_computed(
        &self,
        labels: Vec<String>,
        points: &[CurvePoint],
    ) -> Result<GramMatrix, HeightError> {
        Ok(self.gram_traced(labels, points)?.0)
    }

    /// As [`HeightEngine::gram_computed`], also returning the number of
    /// doublings each canonical height needed (diagonal first, then the
    /// pairs `i < j` in order).
    pub fn gram_traced(
        &self,
        labels: Vec<String>,
        points: &[CurvePoint],
    ) -> Result<(GramMatrix, Vec<u32>), HeightError> {
        let n = points.len();
        assert_eq!(labels.len(), n, "one label per point");
        let diag: Vec<HeightTrace> = points
            .par_iter()
            .map(|p| self.canonical_height_trace(p))
            .collect::<Result<_, _>>()?;
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let off: Vec<HeightTrace> = pairs
            .par_iter()
            .map(|&(i, j)| self.canonical_height_trace(&self.curve.add(&points[i], &points[j])))
            .collect::<Result<_, _>>()?;
        let doublings = diag.iter().chain(&off).map(|t| t.doublings).collect();
        let mut entries = vec![vec![Rat::zero(); n]; n];
        for (i, h) in diag.iter().enumerate() {
            entries[i][i] = h.value.clone();
        }
        for (&(i, j), t) in pairs.iter().zip(off) {
            let v = (t.value - &diag[i].value - &diag[j].value) / rat(2, 1);
            entries[i][j] = v.clone();
            entries[j][i] = v;
        }
        Ok((GramMatrix { labels, entries }, doublings))
    }
}

/// Nearest multiple of `1/den`, ties rounded up.
pub fn round_to_grid(r: &Rat, den: u64) -> Rat {
    let d = BigInt::from(den);
    let scaled = r * Rat::from_integer(d.clone()) + rat(1, 2);
    Rat::new(scaled.floor().to_integer(), d)
}

/// Labels `P0, P1, ...`.
pub fn point_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("P{i}")).collect()
}

/// Pairing of the family points: `(d-1)(d-2)/(2d)` on the diagonal,
/// `(1-d)/d` for even nonzero index difference and `0` for odd difference.
pub fn gram_theoretical(d: u64) -> GramMatrix {
    let di = d as i64;
    let n = d as usize;
    let entries = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        rat((di - 1) * (di - 2), 2 * di)
                    } else if (i + j) % 2 == 0 {
                        rat(1 - di, di)
                    } else {
                        Rat::zero()
                    }
                })
                .collect()
        })
        .collect();
    GramMatrix {
        labels: point_labels(n),
        entries,
    }
}

/// `2^{4-d} (d-1)^{d-2} d^{-2}`.
pub fn determinant_formula(d: u64) -> Rat {
    let two = Rat::from_integer(BigInt::from(2));
    let pow2 = two.pow(4 - d as i32);
    let dm1 = Rat::from_integer(BigInt::from(d - 1)).pow(d as i32 - 2);
    let dd = Rat::from_integer(BigInt::from(d)).pow(-2);
    pow2 * dm1 * dd
}

/// Square matrix of heights indexed by point labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix {
    pub labels: Vec<String>,
    pub entries: Vec<Vec<Rat>>,
}

impl GramMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i][j]
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.entries)
    }

    pub fn is_symmetric(&self) -> bool {
        linalg::is_symmetric(&self.entries)
    }

    pub fn is_positive_semidefinite(&self) -> bool {
        linalg::is_positive_semidefinite(&self.entries)
    }

    /// Determinant of the submatrix on `basis`; the selection must be
    /// nonsingular.
    pub fn determinant(&self, basis: &[usize]) -> Result<Rat, HeightError> {
        let det = linalg::determinant(&linalg::principal_submatrix(&self.entries, basis));
        if det.is_zero() {
            return Err(HeightError::SingularBasis(basis.to_vec()));
        }
        Ok(det)
    }

    /// Primitive integer basis of the kernel.
    pub fn kernel_relations(&self) -> Vec<Vec<BigInt>> {
        linalg::null_space(&self.entries)
    }

    pub fn submatrix(&self, idx: &[usize]) -> GramMatrix {
        GramMatrix {
            labels: idx.iter().map(|&i| self.labels[i].clone()).collect(),
            entries: linalg::principal_submatrix(&self.entries, idx),
        }
    }
}

impl Serialize for GramMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let rows: Vec<Vec<RatSer>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(RatSer).collect())
            .collect();
        let mut st = s.serialize_struct("GramMatrix", 2)?;
        st.serialize_field("labels", &self.labels)?;
        st.serialize_field("entries", &rows)?;
        st.end()
    }
}

fn x_degree(a: &Poly, b: &Poly) -> u64 {
    a.degree().unwrap_or(0).max(b.degree().unwrap_or(0)) as u64
}

fn ser_rat<S: serde::Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    RatSer(r).serialize(s)
}

fn ser_pair<S: serde::Serializer>(r: &(Rat, Rat), s: S) -> Result<S::Ok, S::Error> {
    [RatSer(&r.0), RatSer(&r.1)].serialize(s)
}

fn ser_rats<S: serde::Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&RatSer(r))?;
    }
    seq.end()
}

/// Serializes a `Rat` as `{"num": "..", "den": ".."}`.
pub struct RatSer<'a>(pub &'a Rat);

impl Serialize for RatSer<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Rat", 2)?;
        st.serialize_field("num", &self.0.numer().to_string())?;
        st.serialize_field("den", &self.0.denom().to_string())?;
        st.end()
    }
}
