//! Acceptance suite: one PASS/FAIL line per criterion, all identities exact.

mod common;

use std::time::{Duration, Instant};

use etv_core::degeneracy::{degeneracy_witness, is_nondegenerate, ma_zero_criterion, witness_bruteforce, VectorFamily};
use etv_core::dual_fan::{dual_fan_etp, pascal_check, volume_recursion_check};
use etv_core::framed::Etv;
use etv_core::intersection::{bergman_fan, product, stable_intersection, transversal, transversal_intersection};
use etv_core::linalg::{rank, Subspace};
use etv_core::monge::{
    corner_locus, dc_refined_signed, mixed_ma, mixed_volume_oracle, mixed_volume_via_ma, support_function, AffineFunc,
    PLFunction, DC_SIGN,
};
use etv_core::polyhedron::VPolytope;
use etv_core::scalar::{rat, CRat, Rat};
use num_traits::Zero;
use rand::Rng;

use common::{corpus, crat, poly, random_convex, random_polytope, rng, small};

type Verdict = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    check(t < limit, || format!("{what} took {t:.1?}, limit {limit:?}"))
}

fn n_of(g: &VPolytope) -> usize {
    g.ambient() / 2
}

fn balancing() -> Verdict {
    let start = Instant::now();
    let mut sets = 0;
    let polys = corpus();
    for (name, g) in &polys {
        let n = n_of(g);
        for k in n..=2 * n {
            let x = dual_fan_etp(g, k).map_err(|e| format!("{name} k={k}: {e}"))?;
            let v = x.framed().is_etp().map_err(|e| format!("{name} k={k}: {e}"))?;
            check(v.ok, || format!("{name} k={k}: {}", v.witness.unwrap_or_default()))?;
            sets += 1;
        }
    }
    within(start, Duration::from_secs(10), "balancing")?;
    Ok(format!("{} polytopes, {sets} dual fans balanced", polys.len()))
}

fn dc_identity_holds(sign: i32) -> Result<usize, String> {
    let mut count = 0;
    for (name, g) in corpus() {
        let n = n_of(&g);
        let h = support_function(&g).map_err(|e| e.to_string())?;
        for k in n + 1..=2 * n {
            let x = dual_fan_etp(&g, k).map_err(|e| e.to_string())?.result;
            let lhs = dc_refined_signed(&h, &x, sign).map_err(|e| e.to_string())?;
            let rhs = dual_fan_etp(&g, k - 1)
                .map_err(|e| e.to_string())?
                .result
                .scale(&rat((2 * n - k + 1) as i64));
            if !lhs.equivalent(&rhs) {
                return Err(format!("{name} k={k}"));
            }
            count += 1;
        }
    }
    Ok(count)
}

fn dc_identity() -> Verdict {
    let start = Instant::now();
    let pos = dc_identity_holds(1);
    let neg = dc_identity_holds(-1);
    within(start, Duration::from_secs(30), "weighted boundary identity")?;
    match (&pos, &neg) {
        (Ok(c), Err(e)) if DC_SIGN == 1 => Ok(format!("{c} cases under sign +1; sign -1 fails at {e}")),
        (Err(e), Ok(c)) if DC_SIGN == -1 => Ok(format!("{c} cases under sign -1; sign +1 fails at {e}")),
        _ => Err(format!("sign +1: {pos:?}, sign -1: {neg:?}, configured {DC_SIGN}")),
    }
}

/// Whether the mixed volume is nonzero, after checking both routes agree.
fn mv_case(bodies: &[VPolytope], seed: u64) -> Result<bool, String> {
    let via = mixed_volume_via_ma(bodies, seed).map_err(|e| e.to_string())?;
    let oracle = mixed_volume_oracle(bodies);
    check(via == oracle, || format!("{bodies:?}: via MA {via}, oracle {oracle}"))?;
    Ok(!via.is_zero())
}

fn mixed_volumes() -> Verdict {
    let start = Instant::now();
    let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
    let e1 = poly(&[&[0, 0], &[1, 0]]);
    let e2 = poly(&[&[0, 0], &[0, 1]]);
    let e1b = poly(&[&[1, 1], &[3, 1]]);
    let fixed = [
        (vec![sq.clone(), sq], rat(1)),
        (vec![e1.clone(), e2], Rat::new(1.into(), 2.into())),
        (vec![e1, e1b], rat(0)),
    ];
    for (bodies, want) in &fixed {
        let got = mixed_volume_via_ma(bodies, 7).map_err(|e| e.to_string())?;
        check(&got == want, || format!("fixed case {bodies:?}: {got} != {want}"))?;
        mv_case(bodies, 7)?;
    }
    let mut r = rng(3);
    let (mut low, mut nonzero) = (0, 0);
    for _ in 0..10 {
        nonzero += mv_case(&[random_polytope(&mut r, 1, 3)], r.gen())? as usize;
        low += 1;
    }
    for _ in 0..20 {
        let bodies: Vec<VPolytope> = (0..2).map(|_| random_polytope(&mut r, 2, 5)).collect();
        nonzero += mv_case(&bodies, r.gen())? as usize;
        low += 1;
    }
    within(start, Duration::from_secs(60), "mixed volumes for n <= 2")?;
    let start3 = Instant::now();
    let (mut high, mut nonzero3) = (0, 0);
    for _ in 0..8 {
        let bodies: Vec<VPolytope> = (0..3).map(|_| random_polytope(&mut r, 3, 6)).collect();
        nonzero3 += mv_case(&bodies, r.gen())? as usize;
        high += 1;
    }
    within(start3, Duration::from_secs(600), "mixed volumes for n = 3")?;
    check(nonzero3 >= 3, || format!("only {nonzero3} nonzero tuples at n = 3"))?;
    Ok(format!(
        "3 fixed, {low} random tuples at n <= 2 ({nonzero} nonzero), {high} at n = 3 ({nonzero3} nonzero, {:.1?})",
        start3.elapsed()
    ))
}

fn ma_equivalence() -> Verdict {
    let start = Instant::now();
    let mut r = rng(4);
    let (mut zeros, mut nonzeros) = (0, 0);
    for t in 0..50 {
        let k = r.gen_range(1..=2);
        let hs: Vec<PLFunction> = (0..k).map(|_| random_convex(&mut r, 2, 4)).collect();
        let v = ma_zero_criterion(&hs).map_err(|e| format!("trial {t}: {e}"))?;
        let m = mixed_ma(&hs, t).map_err(|e| format!("trial {t}: {e}"))?;
        check(v.zero == m.is_zero(), || {
            format!(
                "trial {t}: criterion {} but product zero = {}: {hs:?}",
                v.zero,
                m.is_zero()
            )
        })?;
        if v.zero {
            let ok = v.certificate.as_ref().is_some_and(|c| c.validate(&hs));
            check(ok, || format!("trial {t}: certificate missing or invalid"))?;
            zeros += 1;
        } else {
            nonzeros += 1;
        }
    }
    within(start, Duration::from_secs(300), "criterion equivalence")?;
    check(zeros > 0 && nonzeros > 0, || {
        format!("one-sided sample: {zeros} zero, {nonzeros} nonzero")
    })?;
    Ok(format!("50 tuples: {zeros} zero with certificates, {nonzeros} nonzero"))
}

fn random_family(r: &mut rand_chacha::ChaCha8Rng) -> VectorFamily {
    let n = r.gen_range(1..=4);
    let k = r.gen_range(1..=6);
    let low: Vec<Vec<CRat>> = (0..r.gen_range(1..=n))
        .map(|_| (0..n).map(|_| crat(r.gen_range(-1..=1), r.gen_range(-1..=1))).collect())
        .collect();
    let mut sets = Vec::new();
    for _ in 0..k {
        let size = r.gen_range(1..=3);
        let mut set = Vec::new();
        while set.len() < size {
            let v: Vec<CRat> = if r.gen_bool(0.7) {
                // combination of a few fixed vectors
                let mut v = vec![CRat::default(); n];
                for b in &low {
                    let c = crat(r.gen_range(-1..=1), 0);
                    for (x, y) in v.iter_mut().zip(b) {
                        *x = &*x + &(&c * y);
                    }
                }
                v
            } else {
                (0..n).map(|_| crat(r.gen_range(-1..=1), r.gen_range(-1..=1))).collect()
            };
            if v.iter().any(|c| *c != CRat::default()) {
                set.push(v);
            }
        }
        sets.push(set);
    }
    VectorFamily::new(n, sets).unwrap()
}

/// Some selection is independent, by enumeration of all selections.
fn exhaustive_nondegenerate(f: &VectorFamily) -> bool {
    if f.sets.len() > f.n {
        return false;
    }
    let mut idx = vec![0usize; f.sets.len()];
    loop {
        let sel: Vec<Vec<CRat>> = idx.iter().zip(&f.sets).map(|(&i, s)| s[i].clone()).collect();
        if rank(&sel) == sel.len() {
            return true;
        }
        let mut j = 0;
        loop {
            if j == idx.len() {
                return false;
            }
            idx[j] += 1;
            if idx[j] < f.sets[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

fn witness_algorithm() -> Verdict {
    let start = Instant::now();
    let mut r = rng(5);
    let mut degenerate = 0;
    for t in 0..240 {
        let f = random_family(&mut r);
        let nd = is_nondegenerate(&f);
        check(nd == exhaustive_nondegenerate(&f), || {
            format!("trial {t}: selection oracle disagrees on {f:?}")
        })?;
        let brute = witness_bruteforce(&f).map_err(|e| e.to_string())?;
        check(brute.is_some() != nd, || {
            format!("trial {t}: subset oracle disagrees on {f:?}")
        })?;
        if nd {
            check(degeneracy_witness(&f).is_err(), || {
                format!("trial {t}: witness for nondegenerate family")
            })?;
        } else {
            let w = degeneracy_witness(&f).map_err(|e| format!("trial {t}: {e}"))?;
            check(w.validate(&f) && Subspace::span(f.n, &w.h).dim() + 1 == w.p, || {
                format!("trial {t}: invalid witness {w:?}")
            })?;
            degenerate += 1;
        }
    }
    within(start, Duration::from_secs(60), "witness trials")?;
    check(degenerate > 20 && degenerate < 220, || {
        format!("one-sided sample: {degenerate} degenerate")
    })?;
    Ok(format!(
        "240 families, {degenerate} degenerate with validated witnesses"
    ))
}

fn translated_fans() -> Vec<(&'static str, Etv)> {
    let mut r = rng(6);
    let mut out = Vec::new();
    for (name, g) in corpus() {
        let n = n_of(&g);
        for k in n..2 * n {
            let a: Vec<Rat> = (0..2 * n).map(|_| small(&mut r, -2, 2)).collect();
            out.push((name, dual_fan_etp(&g, k).unwrap().result.translate(&a)));
        }
    }
    out
}

fn shift_independence() -> Verdict {
    let fans = translated_fans();
    let (mut pairs, mut transversal_pairs) = (0, 0);
    for (i, (na, x)) in fans.iter().enumerate() {
        for (nb, y) in fans.iter().skip(i + 1).step_by(3) {
            if x.n != y.n || x.k + y.k < 3 * x.n || !x.is_positive() || !y.is_positive() || x.is_zero() || y.is_zero() {
                continue;
            }
            let a = stable_intersection(x, y, 11).map_err(|e| format!("{na}·{nb}: {e}"))?;
            let b = stable_intersection(x, y, 0x5eed_0002).map_err(|e| format!("{na}·{nb}: {e}"))?;
            check(a.equivalent(&b), || format!("{na}·{nb}: results depend on the shift"))?;
            let (fx, fy) = (x.to_framed(), y.to_framed());
            if transversal(&fx, &fy) {
                let t = transversal_intersection(&fx, &fy).and_then(|s| Etv::from_framed(&s));
                let t = t.map_err(|e| format!("{na}·{nb}: {e}"))?;
                check(t.equivalent(&a), || {
                    format!("{na}·{nb}: differs from the transversal intersection")
                })?;
                transversal_pairs += 1;
            }
            pairs += 1;
            if pairs >= 24 {
                break;
            }
        }
        if pairs >= 24 {
            break;
        }
    }
    check(pairs >= 10 && transversal_pairs > 0, || {
        format!("only {pairs} pairs ({transversal_pairs} transversal)")
    })?;
    Ok(format!("{pairs} positive pairs, {transversal_pairs} transversal"))
}

fn non_fan_fixtures() -> Vec<(String, Etv)> {
    let mut out: Vec<(String, Etv)> = translated_fans().into_iter().map(|(n, x)| (n.to_string(), x)).collect();
    let mut r = rng(7);
    for t in 0..6 {
        let n = 1 + t % 2;
        let h = random_convex(&mut r, n, 4);
        out.push((format!("corner locus {t}"), corner_locus(&h).unwrap()));
    }
    out
}

fn bergman_suite() -> Verdict {
    let mut r = rng(8);
    let fixtures = non_fan_fixtures();
    for (name, x) in &fixtures {
        let z: Vec<Rat> = (0..2 * x.n).map(|_| small(&mut r, -3, 3)).collect();
        check(bergman_fan(&x.translate(&z)).equivalent(&bergman_fan(x)), || {
            format!("{name}: recession fan moves under translation")
        })?;
        if x.is_positive() && !x.is_zero() {
            let b = bergman_fan(x);
            check(b.is_positive() && !b.is_zero(), || {
                format!("{name}: recession fan not nonzero positive")
            })?;
        }
    }
    let fans = translated_fans();
    let mut products = 0;
    for (i, (na, x)) in fans.iter().enumerate().step_by(2) {
        for (nb, y) in fans.iter().skip(i).step_by(5) {
            if x.n != y.n || x.k + y.k < 3 * x.n || products >= 12 {
                continue;
            }
            let xy = product(x, y, 21).map_err(|e| format!("{na}·{nb}: {e}"))?;
            let fxy = product(&bergman_fan(x), &bergman_fan(y), 22).map_err(|e| format!("{na}·{nb}: {e}"))?;
            check(bergman_fan(&xy).equivalent(&fxy), || {
                format!("{na}·{nb}: recession fan of product")
            })?;
            products += 1;
        }
    }
    check(products >= 5, || format!("only {products} products"))?;
    Ok(format!("{} fixtures translated, {products} products", fixtures.len()))
}

fn c_degeneracy_sentinel() -> Verdict {
    let zero = AffineFunc::zero(2);
    let x1 = PLFunction::convex(
        2,
        vec![zero.clone(), AffineFunc::new(vec![crat(1, 0), crat(0, 0)], rat(0))],
    )
    .map_err(|e| e.to_string())?;
    let y1 = PLFunction::convex(2, vec![zero, AffineFunc::new(vec![crat(0, -1), crat(0, 0)], rat(0))])
        .map_err(|e| e.to_string())?;
    let m = mixed_ma(&[x1.clone(), y1.clone()], 1).map_err(|e| e.to_string())?;
    check(m.is_zero(), || format!("product is not zero: {m:?}"))?;
    let (a, b) = (
        corner_locus(&x1).map_err(|e| e.to_string())?,
        corner_locus(&y1).map_err(|e| e.to_string())?,
    );
    check(a.cells.len() == 1 && b.cells.len() == 1, || {
        "unexpected corner loci".into()
    })?;
    let (ga, gb) = (&a.cells[0].geom, &b.cells[0].geom);
    check(ga.intersect(gb).affine_dim() == 2, || {
        "supports do not meet in a plane".into()
    })?;
    check(ga.tangent_space().sum(&gb.tangent_space()).dim() == 4, || {
        "supports not transversal".into()
    })?;
    Ok("max(0,x1)·max(0,y1) is zero; supports meet transversally in R^4".into())
}

fn structural() -> Verdict {
    let mut boundaries = 0;
    for (name, g) in corpus() {
        let n = n_of(&g);
        for k in n..=2 * n {
            let fs = dual_fan_etp(&g, k).map_err(|e| e.to_string())?.framed();
            check(fs.boundary().boundary().support_is_empty(), || {
                format!("{name} k={k}: boundary of boundary")
            })?;
            // a single cell is not closed, its boundary still is
            if let Some(c) = fs.cells.first() {
                let mut one = fs.clone();
                one.cells = vec![c.clone()];
                check(one.boundary().boundary().support_is_empty(), || {
                    format!("{name} k={k}: single cell")
                })?;
            }
            boundaries += 2;
        }
        for m in 0..=g.affine_dim() {
            check(pascal_check(&g, m), || format!("{name}: Pascal check m={m}"))?;
            check(volume_recursion_check(&g, m), || {
                format!("{name}: volume recursion m={m}")
            })?;
        }
        let h = support_function(&g).map_err(|e| e.to_string())?;
        let cl = corner_locus(&h).map_err(|e| e.to_string())?;
        let hyper = dual_fan_etp(&g, 2 * n - 1).map_err(|e| e.to_string())?.result;
        check(cl.equivalent(&hyper), || {
            format!("{name}: corner locus differs from the dual fan")
        })?;
    }
    Ok(format!(
        "{boundaries} double boundaries empty; Pascal, recursion, corner loci on the corpus"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("balancing of dual fans", balancing),
        ("weighted boundary identity and d^c sign", dc_identity),
        ("mixed volume through Monge-Ampère", mixed_volumes),
        ("zero criterion equivalence", ma_equivalence),
        ("degeneracy witness algorithm", witness_algorithm),
        ("shift independence", shift_independence),
        ("recession fans", bergman_suite),
        ("complex degeneracy sentinel", c_degeneracy_sentinel),
        ("structural identities", structural),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = f();
        let t = start.elapsed();
        match v {
            Ok(msg) => println!("PASS [{}] {name}: {msg} ({t:.1?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL [{}] {name}: {msg} ({t:.1?})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
