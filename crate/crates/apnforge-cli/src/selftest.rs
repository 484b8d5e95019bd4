//! The invariant suites behind `apnforge selftest`: quick covers m <= 4,
//! full extends to m = 5 and small curve point counts. Every item records
//! pass/fail with a one-line detail instead of aborting, so one report
//! shows the whole picture.

use anyhow::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use apnforge::apn::{build_candidate, certify_family, diff_uniformity, FnTable};
use apnforge::census::{
    fiber_census, find_good_mu, langweil_trend, table1_mu, verify_prop_almost, verify_prop_dim1,
    verify_relationni,
};
use apnforge::field::make_field;
use apnforge::linpoly::{
    kernel_dim_via_h, make_f_mu, mu_zero_kernel_study, subspace_intersection_dim,
};
use apnforge::variety::{curve_points, fixture_h2, verify_appendix};
use apnforge::Fe;

use crate::Level;

#[derive(Debug, Serialize)]
pub struct Item {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn run_item(items: &mut Vec<Item>, name: &str, f: impl FnOnce() -> Result<String, String>) {
    let (pass, detail) = match f() {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    items.push(Item {
        name: name.to_string(),
        pass,
        detail,
    });
}

pub fn run(level: Level, seed: u64) -> Result<Vec<Item>> {
    let mut items = Vec::new();
    let full = matches!(level, Level::Full);
    let census_ms: &[u32] = if full { &[3, 4, 5] } else { &[3, 4] };

    run_item(&mut items, "field/norm-fibers", || {
        for m in [3u32, 4] {
            let ctx = make_field(3 * m).map_err(|e| e.to_string())?;
            let expected = (1u64 << (2 * m)) + (1 << m) + 1;
            let mut counts = std::collections::HashMap::new();
            for a in ctx.units() {
                *counts
                    .entry(ctx.rel_norm(m, a).map_err(|e| e.to_string())?)
                    .or_insert(0u64) += 1;
            }
            for (alpha, c) in counts {
                if c != expected {
                    return Err(format!("m={m} alpha={alpha}: fiber {c} != {expected}"));
                }
            }
        }
        Ok("fibers of the norm have size 2^{2m}+2^m+1 (m=3,4 exhaustive)".into())
    });

    run_item(&mut items, "kernel/three-way-m3-exhaustive", || {
        let ctx = make_field(9).map_err(|e| e.to_string())?;
        for s in [1u32, 2] {
            for mu in ctx.elements() {
                let f = make_f_mu(&ctx, 3, s, mu).map_err(|e| e.to_string())?;
                let d1 = f.kernel_dim_matrix();
                let d2 = kernel_dim_via_h(&ctx, 3, s, mu).map_err(|e| e.to_string())?;
                let d3 = subspace_intersection_dim(&ctx, 3, s, mu);
                let brute = ctx.elements().filter(|&x| f.eval(x).is_zero()).count();
                let d4 = (brute as u64).trailing_zeros();
                if !(d1 == d2 && d2 == d3 && d3 == d4) {
                    return Err(format!("s={s} mu={mu}: {d1}/{d2}/{d3}/{d4}"));
                }
            }
        }
        Ok("matrix = H-recursion = subspace = brute force (1024 parameters)".into())
    });

    run_item(&mut items, "kernel/three-way-sampled", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ms: &[u32] = if full { &[4, 5] } else { &[4] };
        for &m in ms {
            let ctx = make_field(3 * m).map_err(|e| e.to_string())?;
            for _ in 0..10_000 {
                let mu = Fe(rng.gen_range(0..ctx.size()));
                let f = make_f_mu(&ctx, m, 1, mu).map_err(|e| e.to_string())?;
                let d1 = f.kernel_dim_matrix();
                let d2 = kernel_dim_via_h(&ctx, m, 1, mu).map_err(|e| e.to_string())?;
                let d3 = subspace_intersection_dim(&ctx, m, 1, mu);
                if !(d1 == d2 && d2 == d3) {
                    return Err(format!("m={m} mu={mu}: {d1}/{d2}/{d3}"));
                }
            }
        }
        Ok("10^4 sampled parameters per m agree across all three routes".into())
    });

    run_item(&mut items, "census/identities", || {
        let mut notes = Vec::new();
        for &m in census_ms {
            let ctx = make_field(3 * m).map_err(|e| e.to_string())?;
            // the per-class identity needs gcd(s+m, 3m) = 1
            let s = (1..)
                .find(|&s| num_integer::gcd(s + m, 3 * m) == 1)
                .unwrap();
            let census = fiber_census(&ctx, m, s).map_err(|e| e.to_string())?;
            let class = (1u64 << (2 * m)) + (1 << m) + 1;
            for (&alpha, n) in &census.per_alpha {
                if alpha != 0 && n.iter().sum::<u64>() != class {
                    return Err(format!("m={m} s={s} alpha={alpha:x}: bad class size"));
                }
            }
            let almost = verify_prop_almost(&census, ctx.size());
            if !almost.pass {
                return Err(format!("m={m} s={s}: counting identities failed"));
            }
            let relation = verify_relationni(&census);
            if !relation.pass {
                return Err(format!(
                    "m={m} s={s}: {:?} {:?}",
                    relation.identity_failures, relation.size_failures
                ));
            }
            if census.max_dim > 3 {
                return Err(format!("m={m} s={s}: max dim {} > 3", census.max_dim));
            }
            if census.per_alpha.get(&1).is_some_and(|n| n[3] != 0) {
                return Err(format!("m={m} s={s}: norm-1 class reaches dimension 3"));
            }
            notes.push(format!("m={m}/s={s}"));
        }
        Ok(format!(
            "class sizes, n0 = 2n2+6n3, bounds: {}",
            notes.join(" ")
        ))
    });

    run_item(&mut items, "census/dims-vs-rank-m3", || {
        let ctx = make_field(9).map_err(|e| e.to_string())?;
        let census = fiber_census(&ctx, 3, 1).map_err(|e| e.to_string())?;
        let mut by_dim = [0u64; 4];
        for mu in ctx.elements() {
            let d = make_f_mu(&ctx, 3, 1, mu)
                .map_err(|e| e.to_string())?
                .kernel_dim_matrix();
            by_dim[d as usize] += 1;
        }
        if by_dim != census.total {
            return Err(format!("{by_dim:?} != {:?}", census.total));
        }
        Ok("fiber-derived dimensions equal rank-derived dimensions".into())
    });

    run_item(&mut items, "search/find-mu", || {
        let max_m = if full { 5 } else { 4 };
        let mut found = 0;
        for m in 3..=max_m {
            let ctx = make_field(3 * m).map_err(|e| e.to_string())?;
            for s in 1..m {
                if num_integer::gcd(s, m) != 1 {
                    continue;
                }
                let good = find_good_mu(&ctx, m, s).map_err(|e| e.to_string())?;
                let f = make_f_mu(&ctx, m, s, good.mu).map_err(|e| e.to_string())?;
                if !f.is_permutation() || good.norm.is_zero() || good.norm == Fe::ONE {
                    return Err(format!("(m,s)=({m},{s}): GoodMu invariants violated"));
                }
                found += 1;
            }
        }
        Ok(format!("{found} (m, s) pairs answered positively"))
    });

    run_item(&mut items, "search/table1", || {
        let ctx9 = make_field(9).map_err(|e| e.to_string())?;
        let ctx12 = make_field(12).map_err(|e| e.to_string())?;
        for (ctx, m, s) in [(&ctx9, 3u32, 1u32), (&ctx9, 3, 2), (&ctx12, 4, 1)] {
            let good = table1_mu(ctx, m, s)
                .map_err(|e| e.to_string())?
                .ok_or(format!("(m,s)=({m},{s}): expected a Table-1 row"))?;
            let f = make_f_mu(ctx, m, s, good.mu).map_err(|e| e.to_string())?;
            if !f.is_permutation() {
                return Err(format!("(m,s)=({m},{s}): eta is not a permutation"));
            }
        }
        if table1_mu(&ctx12, 4, 3)
            .map_err(|e| e.to_string())?
            .is_some()
        {
            return Err("(4,3) matched a row but 3 does not divide s+2t".into());
        }
        let mut note = String::from("rows (3,1)j2 (3,2)j1 (4,1)j2 hit, (4,3) misses");
        if full {
            let ctx15 = make_field(15).map_err(|e| e.to_string())?;
            let good = table1_mu(&ctx15, 5, 2)
                .map_err(|e| e.to_string())?
                .ok_or("(5,2): expected a Table-1 row")?;
            if !make_f_mu(&ctx15, 5, 2, good.mu)
                .map_err(|e| e.to_string())?
                .is_permutation()
            {
                return Err("(5,2): eta is not a permutation".into());
            }
            note.push_str(", (5,2)j1 hit");
        }
        Ok(note)
    });

    run_item(&mut items, "dim1/unique-intersection", || {
        let ctx = make_field(9).map_err(|e| e.to_string())?;
        let r = verify_prop_dim1(&ctx, 3, 1, None, seed).map_err(|e| e.to_string())?;
        if !r.pass {
            return Err(format!("m=3 s=1: {} failures", r.failures));
        }
        let ctx = make_field(12).map_err(|e| e.to_string())?;
        let r = verify_prop_dim1(&ctx, 4, 1, Some(10_000), seed).map_err(|e| e.to_string())?;
        if !r.pass {
            return Err(format!("m=4 s=1: {} failures", r.failures));
        }
        let mut note = String::from("m=3 exhaustive with uniqueness scan, m=4 sampled");
        if full {
            let ctx = make_field(15).map_err(|e| e.to_string())?;
            let r = verify_prop_dim1(&ctx, 5, 2, Some(10_000), seed).map_err(|e| e.to_string())?;
            if !r.pass {
                return Err(format!("m=5 s=2: {} failures", r.failures));
            }
            note.push_str(", m=5 sampled");
        }
        Ok(note)
    });

    run_item(&mut items, "apn/gold-sanity", || {
        for n in [3u32, 4, 5] {
            let ctx = make_field(n).map_err(|e| e.to_string())?;
            let cube = FnTable::from_fn(&ctx, |x| ctx.mul(ctx.sqr(x), x));
            let delta = diff_uniformity(&cube).max_solutions;
            if delta != 2 {
                return Err(format!("x^3 over GF(2^{n}): delta {delta} != 2"));
            }
        }
        Ok("x^3 is APN on GF(2^3), GF(2^4), GF(2^5)".into())
    });

    run_item(&mut items, "apn/family", || {
        let ctx = make_field(9).map_err(|e| e.to_string())?;
        let good = find_good_mu(&ctx, 3, 1).map_err(|e| e.to_string())?;
        let report = certify_family(&ctx, 3, 1, good.mu, seed).map_err(|e| e.to_string())?;
        if !report.claim_apn {
            return Err(format!("m=3: {:?}", report.per_v));
        }
        let mut note = String::from("m=3: delta = 2 for all 7 subfield units");
        if full {
            let ctx = make_field(12).map_err(|e| e.to_string())?;
            let good = find_good_mu(&ctx, 4, 1).map_err(|e| e.to_string())?;
            let report = certify_family(&ctx, 4, 1, good.mu, seed).map_err(|e| e.to_string())?;
            if !report.claim_apn {
                return Err(format!("m=4: {:?}", report.per_v));
            }
            let ctx = make_field(15).map_err(|e| e.to_string())?;
            let good = find_good_mu(&ctx, 5, 1).map_err(|e| e.to_string())?;
            let report = certify_family(&ctx, 5, 1, good.mu, seed).map_err(|e| e.to_string())?;
            if !report.claim_apn {
                return Err(format!("m=5: {:?}", report.per_v));
            }
            note.push_str("; m=4: all 15 units; m=5: 8 seeded units");
        } else {
            let ctx = make_field(12).map_err(|e| e.to_string())?;
            let good = find_good_mu(&ctx, 4, 1).map_err(|e| e.to_string())?;
            let table = build_candidate(&ctx, 4, 1, good.mu, Fe::ONE).map_err(|e| e.to_string())?;
            if diff_uniformity(&table).max_solutions != 2 {
                return Err("m=4 v=1: delta != 2".into());
            }
            note.push_str("; m=4 v=1: delta = 2");
        }
        Ok(note)
    });

    run_item(&mut items, "variety/appendix", || {
        let report = verify_appendix(1000, seed).map_err(|e| e.to_string())?;
        if !report.pass {
            return Err(report
                .first_mismatch
                .unwrap_or_else(|| "evaluation check failed".into()));
        }
        Ok(format!(
            "r1 ({} terms), g ({} terms), h1, h2 (degree {}) all reproduced",
            report.r1_terms, report.g_terms, report.h2_degree
        ))
    });

    run_item(&mut items, "kernel/mu-zero-study", || {
        let max_m = if full { 5 } else { 4 };
        let cases = mu_zero_kernel_study(max_m).map_err(|e| e.to_string())?;
        for c in &cases {
            if !c.matches_gcd_3m_sm {
                return Err(format!(
                    "(m,s)=({},{}): brute {} != gcd(3m, s+m) = {}",
                    c.m, c.s, c.brute_dim, c.gcd_3m_sm
                ));
            }
        }
        let divergent = cases.iter().filter(|c| !c.matches_gcd_3_s).count();
        Ok(format!(
            "gcd(3m, s+m) matches everywhere ({} cases); gcd(3, s) differs on {divergent}",
            cases.len()
        ))
    });

    if full {
        run_item(&mut items, "census/trend", || {
            let mut ratios = Vec::new();
            for m in [3u32, 4, 5] {
                let ctx = make_field(3 * m).map_err(|e| e.to_string())?;
                let census = fiber_census(&ctx, m, 1).map_err(|e| e.to_string())?;
                let trend = langweil_trend(&census);
                if !trend.envelope_ok {
                    return Err(format!("m={m}: N1 below the q^3 - 8q^{{5/2}} envelope"));
                }
                ratios.push(format!("m={m}: {:.3}", trend.ratio));
            }
            Ok(format!("N1/q^3 -> {}", ratios.join(", ")))
        });

        run_item(&mut items, "variety/curve-points", || {
            let gf8 = make_field(3).map_err(|e| e.to_string())?;
            let h2 = fixture_h2(&gf8);
            let mut counts = Vec::new();
            for k in 1..=4u32 {
                let n = curve_points(&h2, k).map_err(|e| e.to_string())?;
                counts.push(format!("k={k}: {n}"));
            }
            Ok(format!("affine points of h2 = 0: {}", counts.join(", ")))
        });

        run_item(&mut items, "variety/threshold", || {
            let report = apnforge::variety::langweil_threshold(
                &apnforge::variety::BoundParams::new(1248, 3),
            );
            match report.m_star {
                Some(m) if (46..=48).contains(&m) => Ok(format!(
                    "m* = {m} (dominant balance at {})",
                    report.m_dominant
                )),
                other => Err(format!("m* = {other:?} outside 46..=48")),
            }
        });
    }

    Ok(items)
}
