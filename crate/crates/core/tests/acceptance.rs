//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on
//! any failure.

use std::time::Instant;

use legendre_core::gf::{build_field, is_prime};
use legendre_core::heights::{
    determinant_formula, gram_theoretical, point_labels, rat, GramMatrix, HeightConfig,
    HeightEngine, Rat,
};
use legendre_core::invariants::{self, FiberData};
use legendre_core::{CurvePoint, Family, IsogenyChain};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CASES: [(u64, u32); 4] = [(3, 1), (5, 1), (7, 1), (3, 2)];

struct Case {
    p: u64,
    f: u32,
    fam: Family,
    eng: HeightEngine,
    gram: GramMatrix,
    seconds: f64,
}

#[derive(Default)]
struct Log {
    lines: Vec<String>,
    failed: usize,
    /// Doublings used by every canonical height evaluated so far.
    doublings: Vec<u32>,
}

impl Log {
    fn record(&mut self, n: usize, ok: bool, detail: String) {
        let line = format!(
            "{} criterion {n:>2}: {detail}",
            if ok { "PASS" } else { "FAIL" }
        );
        println!("{line}");
        self.failed += usize::from(!ok);
        self.lines.push(line);
    }
}

fn engine(fam: &Family) -> HeightEngine {
    HeightEngine::new(fam.curve(), HeightConfig::for_degree(fam.params().d())).unwrap()
}

fn build_cases(log: &mut Log) -> Vec<Case> {
    CASES
        .iter()
        .map(|&(p, f)| {
            let fam = Family::new(p, f).unwrap();
            let eng = engine(&fam);
            let d = fam.params().d() as usize;
            let start = Instant::now();
            let (gram, used) = eng.gram_traced(point_labels(d), &fam.points()).unwrap();
            log.doublings.extend(used);
            Case {
                p,
                f,
                fam,
                eng,
                gram,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect()
}

fn rs(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn d_of(c: &Case) -> u64 {
    c.fam.params().d()
}

fn criterion_1(log: &mut Log, cases: &[Case]) {
    let mut ok = true;
    let mut parts = Vec::new();
    for c in &cases[..3] {
        let d = d_of(c);
        let same = c.gram == gram_theoretical(d);
        ok &= same && c.seconds < 60.0;
        parts.push(format!(
            "({},{}) d={d} {} in {:.2}s",
            c.p,
            c.f,
            if same { "exact" } else { "MISMATCH" },
            c.seconds
        ));
    }
    log.record(
        1,
        ok,
        format!("Gram matrices equal the closed form: {}", parts.join(", ")),
    );
}

fn criterion_2(log: &mut Log, cases: &[Case]) {
    let c = &cases[3];
    let g = &c.gram;
    let mut ok = g.size() == 10 && *g == gram_theoretical(10) && c.seconds < 600.0;
    for i in 0..10 {
        for j in 0..10 {
            let want = if i == j {
                rat(18, 5)
            } else if (i + j) % 2 == 0 {
                rat(-9, 10)
            } else {
                rat(0, 1)
            };
            ok &= *g.get(i, j) == want;
        }
    }
    log.record(
        2,
        ok,
        format!(
            "(3,2) d=10 full 10x10 Gram: diagonal {}, even off-diagonal {}, odd {} in {:.2}s",
            rs(g.get(0, 0)),
            rs(g.get(0, 2)),
            rs(g.get(0, 1)),
            c.seconds
        ),
    );
}

fn criterion_3(log: &mut Log, cases: &[Case]) {
    let mut ok = true;
    let mut parts = Vec::new();
    for c in cases {
        let d = d_of(c);
        let basis: Vec<usize> = (0..d as usize - 2).collect();
        let det = c.gram.determinant(&basis).unwrap();
        // the closed form written out independently
        let want = Rat::new(
            BigInt::from(d - 1).pow((d - 2) as u32),
            BigInt::from(d * d) << (d - 4),
        );
        ok &= det == want && det == determinant_formula(d);
        parts.push(format!("d={d} {}", rs(&det)));
    }
    ok &= determinant_formula(4) == rat(9, 16) && determinant_formula(6) == rat(625, 144);
    log.record(
        3,
        ok,
        format!("determinants on P0..P(d-3): {}", parts.join(", ")),
    );
}

fn criterion_4(log: &mut Log, cases: &[Case]) {
    let mut ok = true;
    let mut parts = Vec::new();
    for c in cases {
        let tors = c.fam.torsion_points();
        let (even, odd) = c.fam.parity_sums();
        let le = tors.label_of(&even);
        let lo = tors.label_of(&odd);
        ok &= le.is_some() && lo.is_some() && c.fam.is_torsion(&even) && c.fam.is_torsion(&odd);
        parts.push(format!(
            "d={} even={} odd={}",
            d_of(c),
            le.unwrap_or("?"),
            lo.unwrap_or("?")
        ));
    }
    log.record(
        4,
        ok,
        format!("parity sums are torsion: {}", parts.join(", ")),
    );
}

fn criterion_5(log: &mut Log, cases: &[Case]) {
    let mut ok = true;
    for c in cases {
        let e = c.fam.curve();
        let tors = c.fam.torsion_points();
        let report = tors.verify(e);
        ok &= report.all_hold() && report.closed && report.structure_z2_z4;
        // a T + b Q1 must be an isomorphism from Z/4 x Z/2 onto the table
        let (t, q1) = (tors.get("T").clone(), tors.get("Q1").clone());
        let phi = |a: i64, b: i64| e.add(&e.smul(a, &t), &e.smul(b, &q1));
        let mut image: Vec<usize> = Vec::new();
        for a in 0..4 {
            for b in 0..2 {
                match tors.position(&phi(a, b)) {
                    Some(k) => image.push(k),
                    None => ok = false,
                }
            }
        }
        image.sort_unstable();
        image.dedup();
        ok &= image.len() == 8;
        let table = tors.addition_table(e);
        for a in 0..4 {
            for b in 0..2 {
                for a2 in 0..4 {
                    for b2 in 0..2 {
                        let i = tors.position(&phi(a, b));
                        let j = tors.position(&phi(a2, b2));
                        let k = tors.position(&phi((a + a2) % 4, (b + b2) % 2));
                        ok &= matches!((i, j), (Some(i), Some(j)) if table[i][j] == k);
                    }
                }
            }
        }
    }
    log.record(
        5,
        ok,
        "8 torsion points closed, 8x8 table isomorphic to Z/4 x Z/2, 2T=Q0, T+Q1=T', T+Qt=-T' for all four cases".into(),
    );
}

fn criterion_6(log: &mut Log) {
    let mut ok = true;
    let mut parts = Vec::new();
    for p in [5u64, 7] {
        let fam = Family::new(p, 1).unwrap();
        let eng = engine(&fam);
        let d = fam.params().d() as i64;
        let bs = fam.admissible_b().unwrap();
        let mut pts = Vec::new();
        let mut labels = Vec::new();
        for &b in &bs {
            let r = fam.point_r(b).unwrap();
            // independent group-law oracle for the x-coordinate
            let sum = fam.curve().add(
                &fam.point_p(r.index as i64),
                &fam.point_p(-(r.index as i64)),
            );
            ok &= sum.x() == Some(&fam.r_x(b).unwrap());
            ok &= r.x_matches_sum && r.frobenius_fixed && r.equals_sum_up_to_sign;
            ok &= !fam.is_torsion(&r.point);
            labels.push(format!("R{b}"));
            pts.push(r.point);
        }
        labels.extend(["P0".to_string(), format!("P{}", d / 2)]);
        pts.extend([fam.point_p(0), fam.point_p(d / 2)]);
        let (g, used) = eng.gram_traced(labels, &pts).unwrap();
        log.doublings.extend(used);
        ok &= g.rank() as u64 == (p - 1) / 2;
        parts.push(format!("p={p} b={bs:?} rank {}", g.rank()));
    }
    let fam3 = Family::new(3, 1).unwrap();
    let r0 = fam3.point_r(0).unwrap();
    let flagged = fam3.is_torsion(&r0.point);
    ok &= flagged && fam3.admissible_b().unwrap() == [0];
    parts.push(format!("p=3 R0 torsion={flagged}"));
    log.record(
        6,
        ok,
        format!(
            "R_b closed form = x(P_i + P_-i), Frobenius-fixed: {}",
            parts.join(", ")
        ),
    );
}

/// Number of orbits of `i -> q i` on `Z/d` minus the two fixed classes
/// `{0}` and `{d/2}`, counted directly.
fn orbit_count_oracle(d: u64, q: u64) -> u64 {
    let mut seen = vec![false; d as usize];
    let mut orbits = 0;
    for i in 0..d {
        if seen[i as usize] {
            continue;
        }
        let mut j = i;
        while !seen[j as usize] {
            seen[j as usize] = true;
            j = (j * (q % d)) % d;
        }
        if i % (d / 2) != 0 {
            orbits += 1;
        }
    }
    orbits
}

fn criterion_7(log: &mut Log, cases: &[Case]) {
    let mut ok = true;
    for c in cases {
        let d = d_of(c);
        let q = c.fam.params().q();
        let r = invariants::rank_formula(d, q).unwrap();
        ok &= r == d - 2 && r == orbit_count_oracle(d, q);
    }
    let small = [(4u64, 3u64, 1u64), (10, 3, 2)];
    for (d, q, want) in small {
        ok &= invariants::rank_formula(d, q).unwrap() == want && orbit_count_oracle(d, q) == want;
    }
    let c = &cases[0];
    let orbits = c.fam.orbit_sums(3);
    let labels = (0..orbits.len()).map(|i| format!("O{i}")).collect();
    let pts: Vec<CurvePoint> = orbits.into_iter().map(|(_, s)| s).collect();
    let (g, used) = c.eng.gram_traced(labels, &pts).unwrap();
    log.doublings.extend(used);
    ok &= g.rank() == 1;
    log.record(
        7,
        ok,
        format!(
            "rank_formula = d-2 over F_p(mu_d) for all four cases, rank(4,3)=1, rank(10,3)=2, Frobenius-invariant sublattice rank {} for (3,1), q=3",
            g.rank()
        ),
    );
}

fn criterion_8(log: &mut Log, cases: &[Case]) {
    let mut ok = true;
    let mut bounds = Vec::new();
    let mut checked = 0;
    for c in cases {
        let pr = c.fam.params();
        let d = d_of(c);
        let q0 = pr.q();
        let basis: Vec<usize> = (0..d as usize - 2).collect();
        let det = c.gram.determinant(&basis).unwrap();
        let bound = invariants::index_bound(pr);
        // bound^2 = (d-1)^{d-2} = p^{f(d-2)}
        ok &= &bound * &bound == BigUint::from(d - 1).pow((d - 2) as u32);
        bounds.push(bound.to_string());
        for q in [q0, q0 * q0] {
            for m in [1, c.p] {
                let report = invariants::bsd_check(pr, q, m).unwrap();
                ok &= report.holds() && report.sha_within_bounds;
                ok &= invariants::integrality_check(pr, m).unwrap().passes();
                // second route: regulator from the computed Gram matrix,
                // Tamagawa numbers from the fiber types, torsion from the table
                let fibers = FiberData::new(d);
                let prod_c: BigUint = fibers.fibers.iter().map(|f| BigUint::from(f.c)).product();
                ok &= prod_c == BigUint::from(2 * d).pow(2u32) << d;
                let tau = Rat::new(
                    BigInt::from(prod_c),
                    BigInt::from(q).pow((fibers.delta - 1) as u32),
                );
                let sha = BigInt::from(m * m) * BigInt::from(q / q0).pow(((d - 2) / 2) as u32);
                let tors = c.fam.torsion_points().points.len() as i64;
                let regulator = &det / Rat::from_integer(BigInt::from(m * m));
                let rhs = Rat::from_integer(sha) * regulator * tau / rat(tors * tors, 1);
                ok &= rhs.is_one();
                checked += 1;
            }
        }
    }
    log.record(
        8,
        ok,
        format!(
            "BSD residue 1 on {checked} (p,f,q,m) combinations, integrality holds, index bounds p^(f(d-2)/2) = {} (squares equal (d-1)^(d-2); the shorter list 3, 5, 7, 3^4 matches only d = 4)",
            bounds.join(", ")
        ),
    );
}

fn criterion_9(log: &mut Log) {
    let mut ok = true;
    let mut steps = 0;
    for p in [3u64, 5, 7] {
        let fp = build_field(p, 1).unwrap();
        let chain = IsogenyChain::over_prime_field(&fp).unwrap();
        ok &= chain.verified() && chain.discriminant_support() == (true, true);
        steps += chain.steps().len();
    }
    let fam = Family::new(5, 1).unwrap();
    let chain = IsogenyChain::for_family(&fam).unwrap();
    ok &= chain.verified();
    let (ep, e) = (chain.e_prime(), chain.legendre());
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut pts = Vec::new();
    while pts.len() < 20 {
        let coeffs: Vec<i64> = (0..6).map(|_| rng.gen_range(-2..=2)).collect();
        let p = fam.combination(&coeffs);
        if !p.is_infinity() {
            let back = chain.pull(&p);
            ok &= ep.on_curve(&back);
            let image = chain.push(&back);
            ok &= e.on_curve(&image);
            let two = e.double(&p);
            ok &= image == two || image == e.neg(&two);
            pts.push(back);
        }
    }
    for i in 0..20 {
        for j in i..20 {
            let lhs = chain.push(&ep.add(&pts[i], &pts[j]));
            ok &= lhs == e.add(&chain.push(&pts[i]), &chain.push(&pts[j]));
        }
    }
    log.record(
        9,
        ok,
        format!("isogeny chain: C1, C2, E and the dual reproduced ({steps} checks over F_p(t), p = 3, 5, 7 and the d=6 family), 20 random E' points map homomorphically onto E (210 pairs)"),
    );
}

fn criterion_10(log: &mut Log) {
    let mut ok = true;

    let mut fields = 0;
    for p in (3..=121u64).filter(|&p| is_prime(p)) {
        let mut k = 1;
        while p.pow(k as u32) <= 121 {
            let f = build_field(p, k).unwrap();
            let q = f.order() as u32;
            for a in 0..q {
                for b in 0..q {
                    ok &= f.mul(a, b) == f.mul_slow(a, b) && f.mul(a, b) == f.mul(b, a);
                    for c in 0..q {
                        ok &= f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c));
                        ok &= f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c));
                    }
                }
                ok &= a == 0 || f.mul(a, f.inv(a).unwrap()) == 1;
            }
            fields += 1;
            k += 1;
        }
    }

    let fam = Family::new(5, 1).unwrap();
    let e = fam.curve();
    let eng = engine(&fam);
    let tors = fam.torsion_points();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let random_point = |rng: &mut ChaCha8Rng| {
        let coeffs: Vec<i64> = (0..6).map(|_| rng.gen_range(-1..=1)).collect();
        let t = &tors.points[rng.gen_range(0..8)];
        (e.add(&fam.combination(&coeffs), t), coeffs)
    };
    let triples = 100;
    for _ in 0..triples {
        let (p, _) = random_point(&mut rng);
        let (q, _) = random_point(&mut rng);
        let (r, _) = random_point(&mut rng);
        ok &= e.add(&e.add(&p, &q), &r) == e.add(&p, &e.add(&q, &r));
        ok &= e.add(&p, &q) == e.add(&q, &p);
        ok &= e.add(&p, &e.neg(&p)).is_infinity();
    }

    let g = gram_theoretical(6);
    let form = |v: &[i64]| -> Rat {
        let mut acc = rat(0, 1);
        for i in 0..6 {
            for j in 0..6 {
                acc += g.get(i, j) * rat(v[i] * v[j], 1);
            }
        }
        acc
    };
    let h = |pt: &CurvePoint, log: &mut Log| {
        let t = eng.canonical_height_trace(pt).unwrap();
        log.doublings.push(t.doublings);
        t.value
    };
    let samples = 20;
    for _ in 0..samples {
        let (p, a) = random_point(&mut rng);
        let (q, _) = random_point(&mut rng);
        let (hp, hq) = (h(&p, log), h(&q, log));
        ok &= h(&e.add(&p, &q), log) + h(&e.sub(&p, &q), log) == (&hp + &hq) * rat(2, 1);
        ok &= hp == form(&a);
        ok &= h(&e.smul(2, &p), log) == &hp * rat(4, 1);
    }

    let max = log.doublings.iter().copied().max().unwrap_or(0);
    ok &= max <= 6;
    log.record(
        10,
        ok,
        format!(
            "{fields} fields exhaustive, {triples} group-law triples, {samples} parallelogram/quadratic samples, {} heights all stabilized within {max} <= 6 doublings",
            log.doublings.len()
        ),
    );
}

fn main() {
    // respect `cargo test -- <filter>` and `--list` from the test runner
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    if let Some(filter) = args.iter().find(|a| !a.starts_with('-')) {
        if !"acceptance".contains(filter.as_str()) {
            return;
        }
    }
    let mut log = Log::default();
    let cases = build_cases(&mut log);
    criterion_1(&mut log, &cases);
    criterion_2(&mut log, &cases);
    criterion_3(&mut log, &cases);
    criterion_4(&mut log, &cases);
    criterion_5(&mut log, &cases);
    criterion_6(&mut log);
    criterion_7(&mut log, &cases);
    criterion_8(&mut log, &cases);
    criterion_9(&mut log);
    criterion_10(&mut log);
    let passed = log.lines.len() - log.failed;
    println!("acceptance: {passed}/{} criteria passed", log.lines.len());
    if log.failed > 0 {
        std::process::exit(1);
    }
}
