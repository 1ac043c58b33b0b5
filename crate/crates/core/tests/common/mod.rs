#![allow(dead_code)]

use etv_core::monge::{AffineFunc, PLFunction};
use etv_core::polyhedron::VPolytope;
use etv_core::scalar::{rat, CRat, Rat};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn poly(pts: &[&[i64]]) -> VPolytope {
    VPolytope::new(pts.iter().map(|p| p.iter().map(|&x| rat(x)).collect()).collect())
}

/// Named polytopes in `R^2` (n = 1) and `R^4` (n = 2), coordinates `(a1, b1, a2, b2)`.
pub fn corpus() -> Vec<(&'static str, VPolytope)> {
    let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
    let seg = poly(&[&[0, 0], &[1, 2]]);
    let tri = poly(&[&[0, 0], &[2, 0], &[0, 1]]);
    vec![
        ("segment-a", poly(&[&[0, 0], &[1, 0]])),
        ("segment-b", poly(&[&[0, 0], &[0, 3]])),
        ("segment-ab", seg.clone()),
        ("triangle", tri.clone()),
        ("square", sq.clone()),
        ("trapezoid", poly(&[&[0, 0], &[3, 0], &[1, 1], &[2, 1]])),
        ("pentagon", poly(&[&[0, 0], &[2, 0], &[3, 1], &[1, 3], &[-1, 1]])),
        ("square+segment", sq.minkowski_sum(&seg)),
        ("triangle+square", tri.minkowski_sum(&sq)),
        ("segment-a1", poly(&[&[0, 0, 0, 0], &[1, 0, 0, 0]])),
        ("segment-mixed", poly(&[&[0, 0, 0, 0], &[1, 0, 1, 0]])),
        ("segment-complex", poly(&[&[0, 0, 0, 0], &[1, 1, 0, 2]])),
        (
            "square-real",
            poly(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 0, 1, 0], &[1, 0, 1, 0]]),
        ),
        (
            "square-complex-line",
            poly(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 0], &[1, 1, 0, 0]]),
        ),
        (
            "square-skew",
            poly(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[1, 0, 0, 1]]),
        ),
        ("triangle-real", poly(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 0, 1, 0]])),
        ("triangle-tilted", poly(&[&[0, 0, 0, 0], &[1, 0, 0, 1], &[0, 1, 1, 0]])),
        (
            "simplex-3",
            poly(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]]),
        ),
        (
            "simplex-4",
            poly(&[
                &[0, 0, 0, 0],
                &[1, 0, 0, 0],
                &[0, 1, 0, 0],
                &[0, 0, 1, 0],
                &[0, 0, 0, 1],
            ]),
        ),
        (
            "segment+segment",
            poly(&[&[0, 0, 0, 0], &[1, 0, 0, 0]]).minkowski_sum(&poly(&[&[0, 0, 0, 0], &[0, 0, 1, 1]])),
        ),
        (
            "triangle+segment",
            poly(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 0, 1, 0]]).minkowski_sum(&poly(&[&[0, 0, 0, 0], &[0, 1, 0, 0]])),
        ),
    ]
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small(r: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rat {
    rat(r.gen_range(lo..=hi))
}

/// Random lattice polytope in `R^d` with up to `max_pts` points.
pub fn random_polytope(r: &mut ChaCha8Rng, d: usize, max_pts: usize) -> VPolytope {
    let m = r.gen_range(1..=max_pts);
    let pts = (0..m).map(|_| (0..d).map(|_| small(r, -2, 2)).collect()).collect();
    VPolytope::new(pts)
}

pub fn crat(re: i64, im: i64) -> CRat {
    CRat::new(rat(re), rat(im))
}

/// Random convex max of up to `max_pieces` affine functions on `C^n`. Linear
/// parts are drawn from a small pool so that degenerate tuples occur.
pub fn random_convex(r: &mut ChaCha8Rng, n: usize, max_pieces: usize) -> PLFunction {
    let pool: Vec<Vec<CRat>> = (0..3)
        .map(|_| (0..n).map(|_| crat(r.gen_range(-1..=1), r.gen_range(-1..=1))).collect())
        .collect();
    let restrict = r.gen_bool(0.4);
    let m = r.gen_range(1..=max_pieces);
    let pieces = (0..m)
        .map(|_| {
            let mut w: Vec<CRat> = if r.gen_bool(0.5) {
                pool[r.gen_range(0..pool.len())].clone()
            } else {
                (0..n).map(|_| crat(r.gen_range(-2..=2), r.gen_range(-2..=2))).collect()
            };
            if restrict {
                for c in w.iter_mut().skip(1) {
                    *c = CRat::default();
                }
            }
            AffineFunc::new(w, small(r, -2, 2))
        })
        .collect();
    PLFunction::convex(n, pieces).unwrap()
}
