//! The 2-isogeny from `E': y^2 + xy + t'y = x^3 + t'x^2`, `t' = t/16`, to the
//! Legendre curve `y^2 = x(x+1)(x+t)`, replayed step by step, together with
//! the dual chain used to produce points of `E'`.

use serde::Serialize;

use crate::curve::{CoordChange, CurveError, CurvePoint, IsogenyMap, WeierstrassCurve};
use crate::gf::Field;
use crate::legendre::Family;
use crate::ratfunc::{Poly, RatFunc};

/// One curve of the chain, with the equation it is expected to have.
#[derive(Clone, Debug, Serialize)]
pub struct ChainStep {
    pub name: String,
    pub curve: WeierstrassCurve,
    pub expected: WeierstrassCurve,
    pub matches: bool,
}

#[derive(Clone, Debug)]
pub struct IsogenyChain {
    t: RatFunc,
    e_prime: WeierstrassCurve,
    /// `E' -> C_a -> C_b -> C_1` as substitutions.
    changes: Vec<(WeierstrassCurve, CoordChange)>,
    /// `C_1 -> C_2`, quotient by `(0,0)`.
    isogeny: IsogenyMap,
    /// `C_2 -> E` via `(x, y) = (4x' + 4, 8y')`.
    last: CoordChange,
    legendre: WeierstrassCurve,
    /// `C_2 -> C_2/<(0,0)>` followed by the scaling onto `C_1`.
    dual: IsogenyMap,
    dual_scale: CoordChange,
    dual_target: WeierstrassCurve,
}

fn c(field: &Field, n: i64, d: i64) -> RatFunc {
    RatFunc::int(field, n)
        .checked_div(&RatFunc::int(field, d))
        .expect("denominator is invertible in odd characteristic")
}

impl IsogenyChain {
    /// Builds the chain over `F_q(u)` for a given `t`.
    pub fn new(field: &Field, t: RatFunc) -> Result<IsogenyChain, CurveError> {
        let zero = RatFunc::zero(field);
        let one = RatFunc::one(field);
        let tp = &t * &c(field, 1, 16);
        let e_prime = WeierstrassCurve::new(
            one.clone(),
            tp.clone(),
            tp.clone(),
            zero.clone(),
            zero.clone(),
        )?;

        // y -> y - (x + t')/2, then x -> x - t', then (x, y) -> (x/16, y/64)
        let half = c(field, 1, 2);
        let (c_a, ch_a) =
            e_prime.change_coords(zero.clone(), -&half, -&(&tp * &half), one.clone())?;
        let (c_b, ch_b) = c_a.change_coords(-&tp, zero.clone(), zero.clone(), one.clone())?;
        let (c_1, ch_1) =
            c_b.change_coords(zero.clone(), zero.clone(), zero.clone(), c(field, 1, 4))?;

        let isogeny = c_1.two_isogeny_quotient()?;
        let c_2 = isogeny.codomain.clone();
        let (legendre, last) = c_2.change_coords(
            RatFunc::int(field, 4),
            zero.clone(),
            zero.clone(),
            RatFunc::int(field, 2),
        )?;

        let dual = c_2.two_isogeny_quotient()?;
        let (dual_target, dual_scale) = dual.codomain.change_coords(
            zero.clone(),
            zero.clone(),
            zero,
            RatFunc::int(field, 2),
        )?;

        Ok(IsogenyChain {
            t,
            e_prime,
            changes: vec![(c_a, ch_a), (c_b, ch_b), (c_1, ch_1)],
            isogeny,
            last,
            legendre,
            dual,
            dual_scale,
            dual_target,
        })
    }

    /// `t = u` over `F_p`.
    pub fn over_prime_field(field: &Field) -> Result<IsogenyChain, CurveError> {
        IsogenyChain::new(field, RatFunc::var(field))
    }

    /// `t = u^d` over the family's constant field.
    pub fn for_family(family: &Family) -> Result<IsogenyChain, CurveError> {
        IsogenyChain::new(family.field(), family.t().clone())
    }

    pub fn t(&self) -> &RatFunc {
        &self.t
    }

    pub fn e_prime(&self) -> &WeierstrassCurve {
        &self.e_prime
    }

    pub fn legendre(&self) -> &WeierstrassCurve {
        &self.legendre
    }

    /// `y^2 = x^3 + (4 - 2t) x^2 + t^2 x`.
    pub fn c1(&self) -> &WeierstrassCurve {
        &self.changes[2].0
    }

    /// `y^2 = x^3 + (4t - 8) x^2 - 16(t - 1) x`.
    pub fn c2(&self) -> &WeierstrassCurve {
        &self.isogeny.codomain
    }

    pub fn isogeny(&self) -> &IsogenyMap {
        &self.isogeny
    }

    /// Every curve of the chain against its displayed equation.
    pub fn steps(&self) -> Vec<ChainStep> {
        let f = self.t.field();
        let t = &self.t;
        let one = RatFunc::one(f);
        let short = |a2: RatFunc, a4: RatFunc| {
            WeierstrassCurve::short(a2, a4, RatFunc::zero(f)).expect("nonsingular")
        };
        let c1 = short(&RatFunc::int(f, 4) - &t.mul_int(2), t * t);
        let c2 = short(&t.mul_int(4) - &RatFunc::int(f, 8), (t - &one).mul_int(-16));
        let e = short(&one + t, t.clone());
        let step = |name: &str, curve: &WeierstrassCurve, expected: WeierstrassCurve| ChainStep {
            name: name.into(),
            matches: *curve == expected,
            curve: curve.clone(),
            expected,
        };
        vec![
            step("y^2 = x^3 + (4-2t)x^2 + t^2x", self.c1(), c1.clone()),
            step("y^2 = x^3 + (4t-8)x^2 - 16(t-1)x", self.c2(), c2),
            step("y^2 = x(x+1)(x+t)", &self.legendre, e),
            step("dual quotient rescaled", &self.dual_target, c1),
        ]
    }

    pub fn verified(&self) -> bool {
        self.steps().iter().all(|s| s.matches)
    }

    /// `E' -> E`.
    pub fn push(&self, p: &CurvePoint) -> CurvePoint {
        let q = self
            .changes
            .iter()
            .fold(p.clone(), |acc, (_, ch)| ch.forward(&acc));
        self.last.forward(&self.isogeny.push(&q))
    }

    /// `E -> E'` along the dual isogeny.
    pub fn pull(&self, p: &CurvePoint) -> CurvePoint {
        let on_c2 = self.last.backward(p);
        let on_c1 = self.dual_scale.forward(&self.dual.push(&on_c2));
        self.changes
            .iter()
            .rev()
            .fold(on_c1, |acc, (_, ch)| ch.backward(&acc))
    }

    /// Whether every zero and pole of both discriminants lies over
    /// `t = 0` or `t = 1` (infinity is automatic).
    pub fn discriminant_support(&self) -> (bool, bool) {
        let f = self.t.field();
        let support = |curve: &WeierstrassCurve| {
            let disc = curve.discriminant();
            let t_num = self.t.num();
            let radicals = [Poly::var(f), t_num - &Poly::one(f)];
            let ok = [disc.num(), disc.den()]
                .into_iter()
                .all(|poly| strip(poly, &radicals).is_constant());
            ok
        };
        (support(&self.e_prime), support(&self.legendre))
    }
}

/// Removes every factor of `poly` shared with the given polynomials.
fn strip(poly: &Poly, factors: &[Poly]) -> Poly {
    let mut g = poly.clone();
    for fac in factors {
        loop {
            let common = g.gcd(fac);
            if common.is_constant() {
                break;
            }
            g = g.exact_div(&common).expect("gcd divides");
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::build_field;

    #[test]
    fn chain_over_prime_fields() {
        for p in [3u64, 5, 7, 11] {
            let f = build_field(p, 1).unwrap();
            let chain = IsogenyChain::over_prime_field(&f).unwrap();
            for s in chain.steps() {
                assert!(s.matches, "p={p}: {} got {}", s.name, s.curve);
            }
            assert_eq!(chain.discriminant_support(), (true, true));
        }
    }

    #[test]
    fn kernel_and_known_points() {
        let f = build_field(5, 1).unwrap();
        let chain = IsogenyChain::over_prime_field(&f).unwrap();
        let zero = RatFunc::zero(&f);
        let tp = chain.t() * &c(&f, 1, 16);
        for pt in [
            CurvePoint::affine(zero.clone(), zero.clone()),
            CurvePoint::affine(-&tp, zero),
        ] {
            assert!(chain.e_prime().on_curve(&pt));
            assert!(chain.legendre().on_curve(&chain.push(&pt)));
        }
    }

    #[test]
    fn round_trip_is_doubling() {
        let fam = Family::new(5, 1).unwrap();
        let chain = IsogenyChain::for_family(&fam).unwrap();
        assert!(chain.verified());
        let e = chain.legendre();
        for i in 0..3 {
            let p = fam.point_p(i);
            let back = chain.pull(&p);
            assert!(chain.e_prime().on_curve(&back));
            let there = chain.push(&back);
            let two_p = e.double(&p);
            assert!(there == two_p || there == e.neg(&two_p));
        }
    }
}
