//! 2-linearized polynomials over GF(2^n) and the kernel dimension of the
//! trinomials f_mu(x) = x^{2^{m+s}} + mu x^{2^s} + x.
//!
//! Three independent routes to the kernel dimension are provided:
//!
//! 1. [`LinPoly::kernel_dim_matrix`]: bit-matrix rank of the induced
//!    F2-linear map; the reference algorithm, no hypotheses needed;
//! 2. [`kernel_dim_via_h`]: the H-iteration recursion, dim over F_{2^m}
//!    of ker(H^m - id) for H(x) = mu x^{2^s} + x^{2^{s+m}};
//! 3. [`subspace_intersection_dim`]: dim of U_s meet P_mu inside
//!    GF(2^{3m})^2, computed by rank arithmetic on generator vectors.
//!
//! Route 1 is canonical; 2 and 3 are verification oracles.

use crate::bitmat::{rank_u128, rank_u64};
use crate::error::{Error, Result};
use crate::field::{Fe, FieldCtx, FrobTable};

/// A 2-linearized polynomial: coeffs[i] multiplies x^{2^i}, exponents
/// reduced mod n (i.e. mod x^{2^n} - x). Immutable plain data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinPoly {
    ctx: FieldCtx,
    coeffs: Vec<Fe>,
}

impl LinPoly {
    /// The zero polynomial over ctx.
    pub fn zero(ctx: &FieldCtx) -> LinPoly {
        LinPoly {
            ctx: ctx.clone(),
            coeffs: vec![Fe::ZERO; ctx.degree() as usize],
        }
    }

    /// The identity map x.
    pub fn identity(ctx: &FieldCtx) -> LinPoly {
        let mut p = LinPoly::zero(ctx);
        p.coeffs[0] = Fe::ONE;
        p
    }

    /// Add c to the coefficient of x^{2^k}; k is reduced mod n.
    pub fn add_term(&mut self, k: i64, c: Fe) {
        let n = self.ctx.degree() as i64;
        let k = k.rem_euclid(n) as usize;
        self.coeffs[k] += c;
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    /// Evaluate by accumulating coeffs[i] * x^{2^i} over successive squares.
    pub fn eval(&self, x: Fe) -> Fe {
        let mut acc = Fe::ZERO;
        let mut pow = x; // x^{2^i}
        for &c in &self.coeffs {
            if !c.is_zero() {
                acc += self.ctx.mul(c, pow);
            }
            pow = self.ctx.sqr(pow);
        }
        acc
    }

    /// log2 of the kernel size, as n - rank of the induced F2-linear map.
    pub fn kernel_dim_matrix(&self) -> u32 {
        let n = self.ctx.degree();
        let rows: Vec<u64> = (0..n).map(|i| self.eval(Fe(1u64 << i)).0).collect();
        n - rank_u64(&rows)
    }

    /// A linearized polynomial permutes the field iff its kernel is {0}.
    pub fn is_permutation(&self) -> bool {
        self.kernel_dim_matrix() == 0
    }
}

/// f_mu(x) = x^{2^{m+s}} + mu x^{2^s} + x over GF(2^{3m}).
///
/// gcd(s, m) = 1 is the hypothesis of the surrounding theory but is not
/// enforced here; diagnostics intentionally probe outside it.
pub fn make_f_mu(ctx: &FieldCtx, m: u32, s: u32, mu: Fe) -> Result<LinPoly> {
    if !ctx.degree().is_multiple_of(3) || ctx.degree() / 3 != m {
        return Err(Error::AmbientNotCubic(ctx.degree()));
    }
    let mut p = LinPoly::zero(ctx);
    p.add_term((m + s) as i64, Fe::ONE);
    p.add_term(s as i64, mu);
    p.add_term(0, Fe::ONE);
    Ok(p)
}

/// The coefficient triple of H^i for H(x) = mu x^{2^s} + x^{2^{s+m}}:
/// H^i(x) = h0 x^{2^{is}} + h1 x^{2^{is+m}} + h2 x^{2^{is+2m}}, exponents
/// mod 3m.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct HTriple {
    pub h0: Fe,
    pub h1: Fe,
    pub h2: Fe,
    /// Iteration count i >= 1.
    pub iter: u32,
    /// i*s mod 3m.
    pub shift: u32,
}

impl HTriple {
    /// Evaluate H^i at x in GF(2^{3m}).
    pub fn eval(&self, ctx: &FieldCtx, x: Fe) -> Fe {
        let n = ctx.degree();
        let m = n / 3;
        let e0 = self.shift as i64;
        ctx.mul(self.h0, ctx.frob(x, e0))
            + ctx.mul(self.h1, ctx.frob(x, e0 + m as i64))
            + ctx.mul(self.h2, ctx.frob(x, e0 + 2 * m as i64))
    }

    /// True iff the triple represents the identity map x: exactly one
    /// coefficient equals 1 and its Frobenius exponent is 0 mod 3m.
    pub fn is_identity(&self, ctx: &FieldCtx) -> bool {
        let n = ctx.degree();
        let m = n / 3;
        let exps = [
            self.shift % n,
            (self.shift + m) % n,
            (self.shift + 2 * m) % n,
        ];
        let coeffs = [self.h0, self.h1, self.h2];
        let mut acc = LinPoly::zero(ctx);
        for (e, c) in exps.iter().zip(coeffs) {
            acc.add_term(*e as i64, c);
        }
        acc == LinPoly::identity(ctx)
    }
}

/// The triple of H^i by the recursion
/// h0' = mu h0^{2^s} + h2^{2^{s+m}},
/// h1' = mu h1^{2^s} + h0^{2^{s+m}},
/// h2' = mu h2^{2^s} + h1^{2^{s+m}},
/// starting from (mu, 1, 0) at i = 1.
pub fn h_iterate(ctx: &FieldCtx, m: u32, s: u32, mu: Fe, i: u32) -> Result<HTriple> {
    if !ctx.degree().is_multiple_of(3) || ctx.degree() / 3 != m {
        return Err(Error::AmbientNotCubic(ctx.degree()));
    }
    if i == 0 {
        return Err(Error::IterationStartsAtOne);
    }
    let n = ctx.degree();
    let (mut h0, mut h1, mut h2) = (mu, Fe::ONE, Fe::ZERO);
    for _ in 1..i {
        let f0 = ctx.frob(h0, (s + m) as i64);
        let f1 = ctx.frob(h1, (s + m) as i64);
        let f2 = ctx.frob(h2, (s + m) as i64);
        let g0 = ctx.frob(h0, s as i64);
        let g1 = ctx.frob(h1, s as i64);
        let g2 = ctx.frob(h2, s as i64);
        h0 = ctx.mul(mu, g0) + f2;
        h1 = ctx.mul(mu, g1) + f0;
        h2 = ctx.mul(mu, g2) + f1;
    }
    Ok(HTriple {
        h0,
        h1,
        h2,
        iter: i,
        shift: ((i as u64 * s as u64) % n as u64) as u32,
    })
}

/// Kernel dimension of f_mu through the H-recursion: the F2-nullity of
/// H^m - id on GF(2^{3m}) divided by m. Requires gcd(s, m) = 1 so that the
/// nullity is a multiple of m; a non-multiple signals a bug and is
/// reported as an error rather than rounded.
pub fn kernel_dim_via_h(ctx: &FieldCtx, m: u32, s: u32, mu: Fe) -> Result<u32> {
    let tri = h_iterate(ctx, m, s, mu, m)?;
    let n = ctx.degree();
    let t0 = FrobTable::new(ctx, tri.shift as i64);
    let t1 = FrobTable::new(ctx, (tri.shift + m) as i64);
    let t2 = FrobTable::new(ctx, (tri.shift + 2 * m) as i64);
    let rows: Vec<u64> = (0..n)
        .map(|i| {
            let b = Fe(1u64 << i);
            let img = ctx.mul(tri.h0, t0.apply(b))
                + ctx.mul(tri.h1, t1.apply(b))
                + ctx.mul(tri.h2, t2.apply(b))
                + b;
            img.0
        })
        .collect();
    let nullity = n - rank_u64(&rows);
    if !nullity.is_multiple_of(m) {
        return Err(Error::SemilinearityViolated { nullity, m });
    }
    Ok(nullity / m)
}

/// dim over F2 of U_s meet P_mu, where U_s = {(x^{2^s}, x^{2^{m+s}} + x)}
/// and P_mu = {(t, mu t)}, both inside GF(2^{3m})^2. Computed as
/// dim U + dim P - dim(U + P) on packed 2n-bit generator vectors.
pub fn subspace_intersection_dim(ctx: &FieldCtx, m: u32, s: u32, mu: Fe) -> u32 {
    let n = ctx.degree();
    debug_assert_eq!(n % 3, 0);
    debug_assert_eq!(n / 3, m);
    let pack = |a: Fe, b: Fe| (a.0 as u128) | ((b.0 as u128) << n);
    let u_rows: Vec<u128> = (0..n)
        .map(|i| {
            let b = Fe(1u64 << i);
            pack(ctx.frob(b, s as i64), ctx.frob(b, (m + s) as i64) + b)
        })
        .collect();
    let p_rows: Vec<u128> = (0..n)
        .map(|i| {
            let b = Fe(1u64 << i);
            pack(b, ctx.mul(mu, b))
        })
        .collect();
    let du = rank_u128(&u_rows);
    let dp = rank_u128(&p_rows);
    let mut all = u_rows;
    all.extend_from_slice(&p_rows);
    let dsum = rank_u128(&all);
    du + dp - dsum
}

/// One data point of the mu = 0 study: the kernel dimension of
/// x^{2^{m+s}} + x over GF(2^{3m}) by brute-force root count, compared
/// against the two closed forms gcd(3, s) and gcd(3m, s + m).
#[derive(Copy, Clone, Debug, serde::Serialize)]
pub struct MuZeroCase {
    pub m: u32,
    pub s: u32,
    pub brute_dim: u32,
    pub gcd_3_s: u32,
    pub gcd_3m_sm: u32,
    pub matches_gcd_3_s: bool,
    pub matches_gcd_3m_sm: bool,
}

/// Brute-force kernel dimensions of f_0 for every s < 3m coprime with m,
/// for m up to max_m. The scan over the whole field is the ground truth;
/// the closed forms are only compared against it.
pub fn mu_zero_kernel_study(max_m: u32) -> Result<Vec<MuZeroCase>> {
    let mut out = Vec::new();
    for m in 1..=max_m {
        let ctx = crate::field::make_field(3 * m)?;
        for s in 1..3 * m {
            if num_integer::gcd(s as u64, m as u64) != 1 {
                continue;
            }
            let table = FrobTable::new(&ctx, (m + s) as i64);
            let roots = (0..ctx.size())
                .filter(|&xe| {
                    let x = Fe(xe);
                    table.apply(x) + x == Fe::ZERO
                })
                .count() as u64;
            assert!(roots.is_power_of_two(), "kernels have power-of-two size");
            let brute_dim = roots.trailing_zeros();
            let gcd_3_s = num_integer::gcd(3u32, s);
            let gcd_3m_sm = num_integer::gcd(3 * m, s + m);
            out.push(MuZeroCase {
                m,
                s,
                brute_dim,
                gcd_3_s,
                gcd_3m_sm,
                matches_gcd_3_s: brute_dim == gcd_3_s,
                matches_gcd_3m_sm: brute_dim == gcd_3m_sm,
            });
        }
    }
    Ok(out)
}
