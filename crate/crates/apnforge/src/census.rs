//! Exhaustive census of kernel dimensions over all mu, bucketed by the
//! relative norm, and the searches built on it.
//!
//! One pass over x in GF(2^{3m})^* evaluates the value map
//! mu(x) = (x^{2^{m+s}} + x) / x^{2^s}; the fiber over a given mu is the
//! punctured kernel of f_mu, so fiber sizes 1, 3, 7 translate directly to
//! kernel dimensions 1, 2, 3, and parameters outside the image are exactly
//! the permutation parameters. This costs O(2^{3m}) field operations for
//! the entire census instead of one rank computation per mu; the rank
//! algorithm stays available as the per-element oracle.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Fe, FieldCtx, FrobTable};
use crate::linpoly::{h_iterate, make_f_mu};

/// Per-norm-class histogram of kernel dimensions over all mu in GF(2^{3m}).
#[derive(Clone, Debug)]
pub struct Census {
    pub m: u32,
    pub s: u32,
    /// alpha encoding -> (n0, n1, n2, n3) over the mu with rel_norm = alpha;
    /// keys ascend, so reports are reproducible.
    pub per_alpha: BTreeMap<u64, [u64; 4]>,
    /// Dimension histogram over every mu, alpha classes combined.
    pub total: [u64; 4],
    /// M_s: the largest kernel dimension observed.
    pub max_dim: u32,
}

/// A good parameter: f_mu permutes the field and its norm avoids {0, 1},
/// so the quadratic candidate built on it is APN.
#[derive(Clone, Debug, Serialize)]
pub struct GoodMu {
    pub m: u32,
    pub s: u32,
    #[serde(serialize_with = "hex_fe", rename = "mu_hex")]
    pub mu: Fe,
    #[serde(serialize_with = "hex_fe", rename = "norm_hex")]
    pub norm: Fe,
    #[serde(skip)]
    pub kernel_dim: u32,
    pub provenance: Provenance,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    #[serde(rename = "exhaustive")]
    Exhaustive,
    #[serde(rename = "table1+remark")]
    Table1Remark,
}

fn hex_fe<S: serde::Serializer>(fe: &Fe, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&format!("{:x}", fe.0))
}

impl GoodMu {
    /// The export object {m, s, mu_hex, norm_hex, provenance}.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("GoodMu serializes")
    }
}

/// Image of the value map x -> (x^{2^{m+s}} + x) / x^{2^s} over all
/// nonzero x, as a fiber-size table indexed by the mu encoding.
fn fiber_sizes(ctx: &FieldCtx, m: u32, s: u32) -> Result<Vec<u32>> {
    if !ctx.degree().is_multiple_of(3) || ctx.degree() / 3 != m {
        return Err(Error::AmbientNotCubic(ctx.degree()));
    }
    let size = ctx.size();
    let f_s = FrobTable::new(ctx, s as i64);
    let f_ms = FrobTable::new(ctx, (m + s) as i64);
    let values: Vec<u64> = (1..size)
        .into_par_iter()
        .map(|xe| {
            let x = Fe(xe);
            let num = f_ms.apply(x) + x;
            let den = ctx.inv(f_s.apply(x)).expect("x != 0");
            ctx.mul(num, den).0
        })
        .collect();
    let mut counts = vec![0u32; size as usize];
    for v in values {
        counts[v as usize] += 1;
    }
    Ok(counts)
}

/// Full census: one value-map pass, fiber sizes to dimensions, bucketing by
/// rel_norm. Errors with `NonlinearFiber` if any fiber size is not of the
/// form 2^i - 1 (fibers are punctured kernels, so that would be a bug, not
/// data).
pub fn fiber_census(ctx: &FieldCtx, m: u32, s: u32) -> Result<Census> {
    let counts = fiber_sizes(ctx, m, s)?;
    let t_m = FrobTable::new(ctx, m as i64);
    let t_2m = FrobTable::new(ctx, 2 * m as i64);
    let mut per_alpha: BTreeMap<u64, [u64; 4]> = BTreeMap::new();
    let mut total = [0u64; 4];
    let mut max_dim = 0u32;
    for (mu_enc, &c) in counts.iter().enumerate() {
        let dim = match c {
            0 => 0usize,
            1 => 1,
            3 => 2,
            7 => 3,
            _ => {
                return Err(Error::NonlinearFiber {
                    mu: mu_enc as u64,
                    size: c as u64,
                })
            }
        };
        let mu = Fe(mu_enc as u64);
        let alpha = ctx.mul(ctx.mul(t_2m.apply(mu), t_m.apply(mu)), mu);
        per_alpha.entry(alpha.0).or_default()[dim] += 1;
        total[dim] += 1;
        max_dim = max_dim.max(dim as u32);
    }
    Ok(Census {
        m,
        s,
        per_alpha,
        total,
        max_dim,
    })
}

impl Census {
    /// N_s: ordered pairs (x, y) of distinct nonzero elements with the same
    /// value-map image, i.e. sum over mu of (2^i - 1)(2^i - 2).
    pub fn curve_pair_count(&self) -> u64 {
        self.total
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let f = (1u64 << i) - 1;
                f * f.saturating_sub(1) * n
            })
            .sum()
    }

    /// CSV export: `alpha_hex,n0,n1,n2,n3` per class, ascending alpha, plus
    /// a final TOTAL row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha_hex,n0,n1,n2,n3\n");
        for (alpha, n) in &self.per_alpha {
            out.push_str(&format!(
                "{:x},{},{},{},{}\n",
                alpha, n[0], n[1], n[2], n[3]
            ));
        }
        let t = &self.total;
        out.push_str(&format!("TOTAL,{},{},{},{}\n", t[0], t[1], t[2], t[3]));
        out
    }
}

/// Checks of the counting identities for one census.
#[derive(Clone, Debug, Serialize)]
pub struct AlmostReport {
    pub n0: u64,
    /// 1 + sum over i >= 2 of (2^i - 2) n_i.
    pub identity_rhs: u64,
    pub identity_holds: bool,
    /// sum over i >= 1 of (2^i - 1) n_i, which must cover every nonzero x.
    pub nonzero_cover: u64,
    pub cover_holds: bool,
    pub n_s: u64,
    pub max_dim: u32,
    pub max_dim_le3: bool,
    /// n0 >= 1 + N_s / (2^{M_s} - 1), compared exactly in integers.
    pub bound_holds: bool,
    pub pass: bool,
}

/// Exact verification of the global counting identities:
/// n0 = 1 + sum (2^i - 2) n_i, the nonzero-cover identity, M_s <= 3, and
/// the lower bound n0 >= 1 + N_s/(2^{M_s} - 1).
pub fn verify_prop_almost(census: &Census, field_size: u64) -> AlmostReport {
    let t = &census.total;
    let n0 = t[0];
    let identity_rhs = 1 + (2..4).map(|i| ((1u64 << i) - 2) * t[i]).sum::<u64>();
    let identity_holds = n0 == identity_rhs;
    let nonzero_cover = (1..4).map(|i| ((1u64 << i) - 1) * t[i]).sum::<u64>();
    let cover_holds = nonzero_cover == field_size - 1;
    let n_s = census.curve_pair_count();
    let max_dim_le3 = census.max_dim <= 3;
    let divisor = (1u64 << census.max_dim.max(1)) - 1;
    let bound_holds = n0.saturating_sub(1) * divisor >= n_s;
    let pass = identity_holds && cover_holds && max_dim_le3 && bound_holds;
    AlmostReport {
        n0,
        identity_rhs,
        identity_holds,
        nonzero_cover,
        cover_holds,
        n_s,
        max_dim: census.max_dim,
        max_dim_le3,
        bound_holds,
        pass,
    }
}

/// Per-class check of n0(alpha) = 2 n2(alpha) + 6 n3(alpha) and of the
/// class size 2^{2m} + 2^m + 1, for alpha outside {0, 1}.
#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub classes_checked: u64,
    pub identity_failures: Vec<String>,
    pub size_failures: Vec<String>,
    pub pass: bool,
}

pub fn verify_relationni(census: &Census) -> RelationReport {
    let m = census.m;
    let expected = (1u64 << (2 * m)) + (1 << m) + 1;
    let mut identity_failures = Vec::new();
    let mut size_failures = Vec::new();
    let mut classes_checked = 0;
    for (&alpha, n) in &census.per_alpha {
        if alpha == 0 || alpha == 1 {
            continue;
        }
        classes_checked += 1;
        if n[0] != 2 * n[2] + 6 * n[3] {
            identity_failures.push(format!(
                "alpha={alpha:x}: n0={} != 2*{} + 6*{}",
                n[0], n[2], n[3]
            ));
        }
        if n.iter().sum::<u64>() != expected {
            size_failures.push(format!(
                "alpha={alpha:x}: class size {} != {expected}",
                n.iter().sum::<u64>()
            ));
        }
    }
    let pass = identity_failures.is_empty() && size_failures.is_empty();
    RelationReport {
        classes_checked,
        identity_failures,
        size_failures,
        pass,
    }
}

fn isqrt_u128(v: u128) -> u128 {
    if v == 0 {
        return 0;
    }
    let mut x = 1u128 << ((128 - v.leading_zeros()).div_ceil(2));
    loop {
        let y = (x + v / x) / 2;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// The point-count trend check: N_s against the envelope q^3 - 8 q^{5/2},
/// with q = 2^m. The comparison is exact: N_s >= q^3 - 8 q^{5/2} iff
/// N_s + floor(sqrt(64 q^5)) >= q^3. The constant 8 is an implementation
/// envelope; the returned ratio N_s / q^3 is the quantity worth watching.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TrendReport {
    pub n_s: u64,
    pub ratio: f64,
    pub envelope_ok: bool,
}

pub fn langweil_trend(census: &Census) -> TrendReport {
    let q = 1u128 << census.m;
    let q3 = q.pow(3);
    let n_s = census.curve_pair_count();
    let envelope = isqrt_u128(64 * q.pow(5));
    TrendReport {
        n_s,
        ratio: n_s as f64 / q3 as f64,
        envelope_ok: n_s as u128 + envelope >= q3,
    }
}

/// The smallest-encoding mu outside the value-map image whose norm avoids
/// {0, 1}; certified with a rank check before returning.
pub fn find_good_mu(ctx: &FieldCtx, m: u32, s: u32) -> Result<GoodMu> {
    let counts = fiber_sizes(ctx, m, s)?;
    for (mu_enc, &c) in counts.iter().enumerate() {
        if c != 0 {
            continue;
        }
        let mu = Fe(mu_enc as u64);
        let norm = ctx.rel_norm(m, mu)?;
        if norm.is_zero() || norm == Fe::ONE {
            continue;
        }
        let f = make_f_mu(ctx, m, s, mu)?;
        assert!(f.is_permutation(), "empty fiber must mean trivial kernel");
        return Ok(GoodMu {
            m,
            s,
            mu,
            norm,
            kernel_dim: 0,
            provenance: Provenance::Exhaustive,
        });
    }
    Err(Error::QuestionOneNegative { m, s })
}

struct Table1Row {
    mbar: u32,
    sbars: &'static [u32],
    g: u64,
    j: u32,
}

/// Rows of the constructive recipe, tried in order; the two rows of a pair
/// are distinguished by which of 3 | (s + t), 3 | (s + 2t) holds.
const TABLE1: &[Table1Row] = &[
    Table1Row {
        mbar: 3,
        sbars: &[1, 2],
        g: 0b1011,
        j: 1,
    }, // x^3+x+1
    Table1Row {
        mbar: 3,
        sbars: &[1, 2],
        g: 0b1101,
        j: 2,
    }, // x^3+x^2+1
    Table1Row {
        mbar: 4,
        sbars: &[1, 3],
        g: 0b11111,
        j: 2,
    }, // x^4+x^3+x^2+x+1
    Table1Row {
        mbar: 5,
        sbars: &[1, 2, 3, 4],
        g: 0b111101,
        j: 1,
    }, // x^5+x^4+x^3+x^2+1
    Table1Row {
        mbar: 7,
        sbars: &[1, 2, 3, 4, 5, 6],
        g: 0b10101011,
        j: 2,
    }, // x^7+x^5+x^3+x+1
    Table1Row {
        mbar: 9,
        sbars: &[1, 2, 4, 5, 7, 8],
        g: 0b1000010001,
        j: 1,
    }, // x^9+x^4+1
    Table1Row {
        mbar: 9,
        sbars: &[1, 2, 4, 5, 7, 8],
        g: 0b1100000001,
        j: 2,
    }, // x^9+x^8+1
];

fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

fn row_matches(row: &Table1Row, m: u32, s: u32) -> bool {
    if !m.is_multiple_of(row.mbar) {
        return false;
    }
    let t = m / row.mbar;
    !t.is_multiple_of(3)
        && gcd(m as u64, s as u64) == 1
        && row.sbars.contains(&(s % row.mbar))
        && (s + row.j * t).is_multiple_of(3)
}

/// The constructive route: if a Table-1 row covers (m, s), take the
/// subfield root mu of that row's g, check the contract (kernel dimension
/// exactly 3, H^m the identity, norm != 1), then scan mu's norm fiber for
/// the smallest permutation parameter eta, whose existence the counting
/// identity guarantees. Returns None when no row covers (m, s).
pub fn table1_mu(ctx: &FieldCtx, m: u32, s: u32) -> Result<Option<GoodMu>> {
    let Some(row) = TABLE1.iter().find(|r| row_matches(r, m, s)) else {
        return Ok(None);
    };
    let mu = ctx.subfield_root(row.g, row.mbar)?;
    let f = make_f_mu(ctx, m, s, mu)?;
    let dim = f.kernel_dim_matrix();
    if dim != 3 {
        return Err(Error::TableOneContractViolated(format!(
            "kernel dimension {dim} != 3 for the subfield root (m={m}, s={s})"
        )));
    }
    let tri = h_iterate(ctx, m, s, mu, m)?;
    if !tri.is_identity(ctx) {
        return Err(Error::TableOneContractViolated(format!(
            "H^m is not the identity (m={m}, s={s})"
        )));
    }
    let alpha = ctx.rel_norm(m, mu)?;
    if alpha == Fe::ONE {
        return Err(Error::TableOneContractViolated(format!(
            "rel_norm(mu) = 1 (m={m}, s={s})"
        )));
    }
    let t_m = FrobTable::new(ctx, m as i64);
    let t_2m = FrobTable::new(ctx, 2 * m as i64);
    for enc in 1..ctx.size() {
        let eta = Fe(enc);
        let norm = ctx.mul(ctx.mul(t_2m.apply(eta), t_m.apply(eta)), eta);
        if norm != alpha {
            continue;
        }
        let f_eta = make_f_mu(ctx, m, s, eta)?;
        if f_eta.is_permutation() {
            return Ok(Some(GoodMu {
                m,
                s,
                mu: eta,
                norm: alpha,
                kernel_dim: 0,
                provenance: Provenance::Table1Remark,
            }));
        }
    }
    Err(Error::TableOneContractViolated(format!(
        "norm fiber of alpha = {alpha} contains no permutation parameter (m={m}, s={s})"
    )))
}

/// Outcome of checking the unique-intersection property for one (m, s).
#[derive(Clone, Debug, Serialize)]
pub struct Dim1Report {
    pub m: u32,
    pub s: u32,
    pub tested: u64,
    pub failures: u64,
    pub uniqueness_scanned: bool,
    pub pass: bool,
}

/// For eta != 1, the system (x^{2^s}, x^{2^{s+m}} + x) = (y, eta y^{2^m})
/// has the unique nonzero solution obtained from x^{2^{s+m}-1} = 1/(eta-1).
/// With `samples = None` every eta is tested and uniqueness is confirmed by
/// scanning all x; otherwise `samples` random eta are tested.
pub fn verify_prop_dim1(
    ctx: &FieldCtx,
    m: u32,
    s: u32,
    samples: Option<u32>,
    seed: u64,
) -> Result<Dim1Report> {
    let n = ctx.degree();
    if !n.is_multiple_of(3) || n / 3 != m {
        return Err(Error::AmbientNotCubic(n));
    }
    if gcd((s + m) as u64, 3 * m as u64) != 1 {
        return Err(Error::HypothesisViolated { m, s });
    }
    let e = (1u64 << ((s + m) % n)) - 1;
    let mut tested = 0u64;
    let mut failures = 0u64;
    let check_eta = |eta: Fe| -> bool {
        let c = ctx.inv(eta + Fe::ONE).expect("eta != 1");
        let x0 = ctx.solve_exp_eq(e, c).expect("gcd(s+m, 3m) = 1");
        let y0 = ctx.frob(x0, s as i64);
        !x0.is_zero()
            && !y0.is_zero()
            && ctx.frob(x0, (s + m) as i64) + x0 == ctx.mul(eta, ctx.frob(y0, m as i64))
    };
    let mut uniqueness_scanned = false;
    match samples {
        None => {
            for enc in 0..ctx.size() {
                let eta = Fe(enc);
                if eta == Fe::ONE {
                    continue;
                }
                tested += 1;
                if !check_eta(eta) {
                    failures += 1;
                }
                // uniqueness: exactly one x satisfies the system for this eta
                let hits = ctx
                    .units()
                    .filter(|&x| {
                        ctx.frob(x, (s + m) as i64) + x == ctx.mul(eta, ctx.frob(x, (s + m) as i64))
                    })
                    .count();
                if hits != 1 {
                    failures += 1;
                }
            }
            uniqueness_scanned = true;
        }
        Some(k) => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..k {
                let eta = loop {
                    let e = Fe(rng.gen_range(0..ctx.size()));
                    if e != Fe::ONE {
                        break e;
                    }
                };
                tested += 1;
                if !check_eta(eta) {
                    failures += 1;
                }
            }
        }
    }
    Ok(Dim1Report {
        m,
        s,
        tested,
        failures,
        uniqueness_scanned,
        pass: failures == 0,
    })
}
