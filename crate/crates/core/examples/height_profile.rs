//! Naive heights deg x(2^n P) for P0 and a few sums, to inspect how the
//! canonical-height estimator converges: `height_profile P F MAX_DOUBLINGS`.

use legendre_core::heights::{HeightConfig, HeightEngine};
use legendre_core::legendre::Family;
use std::time::Instant;

fn main() {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("usage: height_profile P F MAX_DOUBLINGS"))
        .collect();
    let arg = |i: usize, default: u64| args.get(i).copied().unwrap_or(default);
    let (p, f, max) = (arg(0, 3), arg(1, 1) as u32, arg(2, 6) as u32);
    let fam = Family::new(p, f).unwrap();
    let d = fam.params().d();
    let eng = HeightEngine::new(fam.curve(), HeightConfig::for_degree(d)).unwrap();
    let c = fam.curve();
    let mut pts = vec![("P0".to_string(), fam.point_p(0))];
    for j in 1..d as i64 {
        pts.push((format!("P0+P{j}"), c.add(&fam.point_p(0), &fam.point_p(j))));
    }
    pts.push(("P0+2P1-P3".into(), fam.combination(&[1, 2, 0, -1])));
    for (name, pt) in pts {
        let t = Instant::now();
        let (seq, inf) = eng.naive_sequence(&pt, max);
        println!("{name}: {seq:?} inf={inf} {:?}", t.elapsed());
    }
}
