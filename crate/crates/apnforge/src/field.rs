//! Arithmetic in GF(2^n) for n <= 48, in polynomial basis.
//!
//! A field is described by an immutable [`FieldCtx`] (degree + defining
//! modulus); elements are [`Fe`] values, plain n-bit vectors where bit i is
//! the coefficient of x^i. The canonical modulus for each degree is the monic
//! irreducible with the smallest integer encoding, so two contexts of equal
//! degree are bit-identical and results are reproducible across runs.
//!
//! The tower F_{2^m} < F_{2^{3m}} is not given a second representation: only
//! the big field is materialized, and subfield membership is the predicate
//! `frob(a, m) == a`.

use std::fmt;

use crate::error::{Error, Result};

/// A field element in polynomial basis; bit i = coefficient of x^i.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fe(pub u64);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::ops::Add for Fe {
    type Output = Fe;
    // addition in characteristic 2 is xor of coefficient vectors
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Fe) -> Fe {
        Fe(self.0 ^ rhs.0)
    }
}

impl std::ops::AddAssign for Fe {
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: Fe) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fe(0x{:x})", self.0)
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.0)
    }
}

/// Carry-less product of two 64-bit polynomials over GF(2).
#[inline]
pub(crate) fn clmul(a: u64, b: u64) -> u128 {
    let mut acc = 0u128;
    let a = a as u128;
    let mut b = b;
    while b != 0 {
        acc ^= a << b.trailing_zeros();
        b &= b - 1;
    }
    acc
}

/// Degree of a GF(2) polynomial given by its bits; deg(0) = -1.
#[inline]
pub(crate) fn poly_deg(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

/// Reduce a carry-less product modulo a monic degree-n polynomial.
#[inline]
fn reduce(mut p: u128, modulus: u64, n: u32) -> u64 {
    let mask = (1u128 << n) - 1;
    let tail = (modulus ^ (1u64 << n)) as u128; // x^n = tail (mod modulus)
    loop {
        let hi = (p >> n) as u64;
        if hi == 0 {
            return (p & mask) as u64;
        }
        p = (p & mask) ^ (clmul(hi, tail as u64));
    }
}

fn poly_mul_mod(a: u64, b: u64, modulus: u64, n: u32) -> u64 {
    reduce(clmul(a, b), modulus, n)
}

/// gcd over GF(2)[x].
fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let (da, db) = (poly_deg(a), poly_deg(b));
        if da < db {
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        a ^= b << (da - db) as u32;
    }
    a
}

/// Remainder of a modulo b over GF(2)[x], b != 0.
fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = poly_deg(b);
    while poly_deg(a) >= db {
        a ^= b << (poly_deg(a) - db) as u32;
    }
    a
}

/// Monic irreducibility test for a degree-n polynomial over GF(2):
/// gcd(f, x^{2^k} - x) = 1 for all k <= n/2, and x^{2^n} = x (mod f).
pub(crate) fn is_irreducible(f: u64, n: u32) -> bool {
    if poly_deg(f) != n as i32 {
        return false;
    }
    if n == 1 {
        return true; // x and x + 1
    }
    let x = 2u64;
    let mut r = x; // x^{2^k} mod f
    for k in 1..=n {
        r = poly_mul_mod(r, r, f, n);
        if k <= n / 2 && poly_gcd(f, r ^ x) != 1 {
            return false;
        }
    }
    r == x
}

/// The monic irreducible of degree n with the smallest integer encoding
/// among those with nonzero constant term.
pub fn canonical_modulus(n: u32) -> Result<u64> {
    if n == 0 || n > 48 {
        return Err(Error::UnsupportedDegree(n));
    }
    let lo = (1u64 << n) | 1;
    let hi = 1u64 << (n + 1);
    let mut c = lo;
    while c < hi {
        if is_irreducible(c, n) {
            return Ok(c);
        }
        c += 2;
    }
    unreachable!("an irreducible of degree {n} with nonzero constant term exists");
}

/// Immutable description of GF(2^n): degree, defining modulus, and an
/// optional cached multiplicative generator. Safe to share across threads;
/// all operations are pure.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FieldCtx {
    degree: u32,
    modulus: u64,
    generator: Option<Fe>,
}

/// The context with the canonical modulus for degree n. Deterministic and
/// idempotent: equal n gives bit-identical contexts.
pub fn make_field(n: u32) -> Result<FieldCtx> {
    Ok(FieldCtx {
        degree: n,
        modulus: canonical_modulus(n)?,
        generator: None,
    })
}

/// A context with an explicitly chosen modulus (validated), for
/// cross-implementation comparisons driven by an external modulus table.
pub fn make_field_with_modulus(n: u32, modulus: u64) -> Result<FieldCtx> {
    if n == 0 || n > 48 {
        return Err(Error::UnsupportedDegree(n));
    }
    if !is_irreducible(modulus, n) {
        return Err(Error::BadModulus(modulus, n));
    }
    Ok(FieldCtx {
        degree: n,
        modulus,
        generator: None,
    })
}

impl FieldCtx {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of field elements, 2^n.
    pub fn size(&self) -> u64 {
        1u64 << self.degree
    }

    /// Order of the multiplicative group, 2^n - 1.
    pub fn unit_order(&self) -> u64 {
        self.size() - 1
    }

    pub fn contains(&self, a: Fe) -> bool {
        a.0 < self.size()
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.size()).map(Fe)
    }

    pub fn units(&self) -> impl Iterator<Item = Fe> {
        (1..self.size()).map(Fe)
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        a + b
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(reduce(clmul(a.0, b.0), self.modulus, self.degree))
    }

    #[inline]
    pub fn sqr(&self, a: Fe) -> Fe {
        self.mul(a, a)
    }

    /// Multiplicative inverse by the extended Euclidean algorithm on
    /// GF(2)[x].
    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::ZeroInversion);
        }
        let mut r0 = self.modulus;
        let mut r1 = a.0;
        let mut t0: u64 = 0;
        let mut t1: u64 = 1;
        while r1 != 0 {
            let (d0, d1) = (poly_deg(r0), poly_deg(r1));
            if d0 < d1 {
                std::mem::swap(&mut r0, &mut r1);
                std::mem::swap(&mut t0, &mut t1);
                continue;
            }
            let shift = (d0 - d1) as u32;
            r0 ^= r1 << shift;
            t0 ^= t1 << shift;
        }
        debug_assert_eq!(r0, 1, "modulus is irreducible, nonzero a is a unit");
        Ok(Fe(poly_rem(t0, self.modulus)))
    }

    /// a^e by square-and-multiply; pow(0, 0) = 1 by convention.
    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.sqr(base);
            e >>= 1;
        }
        acc
    }

    /// Frobenius power a^{2^k}; k is reduced mod n.
    pub fn frob(&self, a: Fe, k: i64) -> Fe {
        let n = self.degree as i64;
        let k = k.rem_euclid(n) as u32;
        let mut r = a;
        for _ in 0..k {
            r = self.sqr(r);
        }
        r
    }

    /// Relative norm onto the index-3 subfield: mu^{2^{2m} + 2^m + 1},
    /// where the context degree is 3m.
    pub fn rel_norm(&self, m: u32, mu: Fe) -> Result<Fe> {
        if !self.degree.is_multiple_of(3) || self.degree / 3 != m {
            return Err(Error::NotCubicExtension(self.degree));
        }
        let c1 = self.frob(mu, m as i64);
        let c2 = self.frob(c1, m as i64);
        Ok(self.mul(self.mul(c2, c1), mu))
    }

    /// The elements of the subfield of size 2^d, enumerated as the image of
    /// the relative trace F_{2^n} -> F_{2^d}. Ascending encoding order.
    pub fn subfield(&self, d: u32) -> Result<Vec<Fe>> {
        if d == 0 || !self.degree.is_multiple_of(d) {
            return Err(Error::NoSuchSubfield { d, n: self.degree });
        }
        let steps = self.degree / d;
        let tbl = FrobTable::new(self, d as i64);
        // relative trace of each basis vector, then a reduced F2-basis of the image
        let mut basis: Vec<u64> = Vec::new();
        for i in 0..self.degree {
            let mut acc = Fe::ZERO;
            let mut t = Fe(1u64 << i);
            for _ in 0..steps {
                acc += t;
                t = tbl.apply(t);
            }
            let mut v = acc.0;
            for &b in &basis {
                let pivot = 63 - b.leading_zeros();
                if v >> pivot & 1 == 1 {
                    v ^= b;
                }
            }
            if v != 0 {
                basis.push(v);
            }
        }
        assert_eq!(basis.len() as u32, d, "relative trace is onto the subfield");
        let mut out: Vec<Fe> = Vec::with_capacity(1 << d);
        for mask in 0u64..(1 << d) {
            let mut v = 0u64;
            for (i, b) in basis.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    v ^= b;
                }
            }
            out.push(Fe(v));
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Deterministic root of g in the subfield of size 2^d: the root with
    /// the smallest encoding among the d conjugates. g is given by its
    /// GF(2) coefficient bits and must be irreducible of degree d.
    pub fn subfield_root(&self, g: u64, d: u32) -> Result<Fe> {
        let elems = self.subfield(d)?;
        if poly_deg(g) != d as i32 {
            return Err(Error::NotIrreducibleOfMatchingDegree(d));
        }
        let mut roots = elems.into_iter().filter(|&mu| {
            // Horner over the bits of g
            let mut acc = Fe::ZERO;
            for i in (0..=poly_deg(g)).rev() {
                acc = self.mul(acc, mu);
                if g >> i & 1 == 1 {
                    acc += Fe::ONE;
                }
            }
            acc.is_zero()
        });
        roots.next().ok_or(Error::NotIrreducibleOfMatchingDegree(d))
    }

    /// The unique solution of x^e = c when gcd(e, 2^n - 1) = 1 and c != 0,
    /// computed as c^d with d the inverse of e modulo 2^n - 1.
    pub fn solve_exp_eq(&self, e: u64, c: Fe) -> Result<Fe> {
        if c.is_zero() {
            return Err(Error::ZeroHasNoUnitSolution);
        }
        let order = self.unit_order();
        let e_red = e % order;
        let d =
            mod_inverse(e_red, order).ok_or(Error::ExponentNotInvertible { e, n: self.degree })?;
        Ok(self.pow(c, d))
    }

    /// The generator cached at construction, if any.
    pub fn generator(&self) -> Option<Fe> {
        self.generator
    }

    /// Deterministic multiplicative generator: the smallest encoding whose
    /// order is 2^n - 1.
    pub fn find_generator(&self) -> Fe {
        let order = self.unit_order();
        let primes = prime_factors(order);
        'cand: for g in self.units() {
            for &p in &primes {
                if self.pow(g, order / p) == Fe::ONE {
                    continue 'cand;
                }
            }
            return g;
        }
        unreachable!("the multiplicative group of a finite field is cyclic");
    }

    /// Copy of this context with the deterministic generator filled in.
    pub fn with_generator(&self) -> FieldCtx {
        FieldCtx {
            degree: self.degree,
            modulus: self.modulus,
            generator: Some(self.find_generator()),
        }
    }
}

/// Precomputed matrix of x -> x^{2^k} for one context, for hot loops.
pub struct FrobTable {
    images: Vec<u64>,
}

impl FrobTable {
    pub fn new(ctx: &FieldCtx, k: i64) -> FrobTable {
        let images = (0..ctx.degree())
            .map(|i| ctx.frob(Fe(1u64 << i), k).0)
            .collect();
        FrobTable { images }
    }

    #[inline]
    pub fn apply(&self, a: Fe) -> Fe {
        let mut acc = 0u64;
        let mut bits = a.0;
        while bits != 0 {
            acc ^= self.images[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        Fe(acc)
    }
}

fn mod_inverse(e: u64, order: u64) -> Option<u64> {
    let (mut r0, mut r1) = (order as i128, e as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(order as i128) as u64)
}

fn prime_factors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= v {
        if v.is_multiple_of(p) {
            out.push(p);
            while v.is_multiple_of(p) {
                v /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if v > 1 {
        out.push(v);
    }
    out
}

/// Text modulus table, one line per degree: `n<TAB>hex-bits`, low bit =
/// constant term.
pub fn dump_moduli(max_n: u32) -> Result<String> {
    let mut out = String::new();
    for n in 1..=max_n {
        out.push_str(&format!("{}\t{:x}\n", n, canonical_modulus(n)?));
    }
    Ok(out)
}

/// Parse a modulus table in the `dump_moduli` format. Entries are validated
/// for irreducibility and degree.
pub fn parse_moduli(text: &str) -> Result<Vec<(u32, u64)>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split('\t');
        let (Some(ns), Some(ms)) = (parts.next(), parts.next()) else {
            return Err(Error::TableFormat(format!(
                "line {}: expected `n<TAB>hex`",
                lineno + 1
            )));
        };
        let n: u32 = ns
            .parse()
            .map_err(|_| Error::TableFormat(format!("line {}: bad degree `{ns}`", lineno + 1)))?;
        let modulus = u64::from_str_radix(ms.trim(), 16)
            .map_err(|_| Error::TableFormat(format!("line {}: bad hex `{ms}`", lineno + 1)))?;
        if !is_irreducible(modulus, n) {
            return Err(Error::BadModulus(modulus, n));
        }
        out.push((n, modulus));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Schoolbook oracle: bit-by-bit product, then long division, all on
    /// boolean vectors. Independent of the clmul/fold path.
    fn schoolbook_mul(a: u64, b: u64, modulus: u64, n: u32) -> u64 {
        let mut prod = [false; 128];
        for i in 0..64 {
            for j in 0..64 {
                if (a >> i & 1) & (b >> j & 1) == 1 {
                    prod[i + j] ^= true;
                }
            }
        }
        for top in (n as usize..128).rev() {
            if prod[top] {
                for k in 0..=n as usize {
                    if modulus >> k & 1 == 1 {
                        prod[top - n as usize + k] ^= true;
                    }
                }
            }
        }
        (0..n as usize).fold(0u64, |acc, i| acc | ((prod[i] as u64) << i))
    }

    /// Brute irreducibility for small degrees: no monic divisor of degree
    /// 1..deg-1 divides f.
    fn brute_irreducible(f: u64, deg: u32) -> bool {
        for d in 1..deg {
            for g in (1u64 << d)..(1u64 << (d + 1)) {
                if poly_rem(f, g) == 0 {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn canonical_modulus_smallest_irreducible() {
        // oracle: enumerate all monic degree-3 candidates
        let smallest = ((1u64 << 3)..(1 << 4))
            .filter(|&c| c & 1 == 1 && brute_irreducible(c, 3))
            .min()
            .unwrap();
        assert_eq!(smallest, 0b1011); // x^3 + x + 1
        assert_eq!(canonical_modulus(3).unwrap(), smallest);
        // cross-check the gcd-based test against brute force on all degrees <= 10
        for n in 2..=10u32 {
            for f in (1u64 << n)..(1 << (n + 1)) {
                assert_eq!(is_irreducible(f, n), brute_irreducible(f, n), "f = {f:b}");
            }
        }
    }

    #[test]
    fn degree_one_field_is_gf2() {
        let ctx = make_field(1).unwrap();
        assert_eq!(ctx.modulus(), 0b11); // x + 1
        assert_eq!(ctx.mul(Fe::ONE, Fe::ONE), Fe::ONE);
        assert_eq!(ctx.add(Fe::ONE, Fe::ONE), Fe::ZERO);
    }

    #[test]
    fn unsupported_degrees_rejected() {
        assert!(matches!(make_field(0), Err(Error::UnsupportedDegree(0))));
        assert!(matches!(make_field(49), Err(Error::UnsupportedDegree(49))));
    }

    #[test]
    fn make_field_is_deterministic() {
        for n in [1, 3, 9, 12, 24, 48] {
            assert_eq!(make_field(n).unwrap(), make_field(n).unwrap());
        }
    }

    #[test]
    fn degree_nine_modulus_irreducible_not_subfield_split() {
        let ctx = make_field(9).unwrap();
        // x^{2^9} = x mod modulus for every element; x^{2^3} = x only on GF(8)
        let mut fixed = 0u64;
        for a in ctx.elements() {
            assert_eq!(ctx.frob(a, 9), a);
            if ctx.frob(a, 3) == a {
                fixed += 1;
            }
        }
        assert_eq!(fixed, 8); // the GF(8) subfield, nothing more
    }

    #[test]
    fn mul_matches_schoolbook_all_degrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for n in 1..=24u32 {
            let ctx = make_field(n).unwrap();
            for _ in 0..1000 {
                let a = Fe(rng.gen_range(0..ctx.size()));
                let b = Fe(rng.gen_range(0..ctx.size()));
                assert_eq!(
                    ctx.mul(a, b).0,
                    schoolbook_mul(a.0, b.0, ctx.modulus(), n),
                    "n={n} a={a} b={b}"
                );
            }
        }
    }

    #[test]
    fn gf8_omega_times_omega_squared() {
        // omega = class of x, omega^3 + omega + 1 = 0, so omega^3 = omega + 1
        let ctx = make_field(3).unwrap();
        let w = Fe(0b010);
        let w2 = ctx.sqr(w);
        assert_eq!(w2, Fe(0b100));
        assert_eq!(ctx.mul(w, w2), w + Fe::ONE);
    }

    #[test]
    fn char_two_and_group_order() {
        let ctx = make_field(9).unwrap();
        for a in ctx.elements() {
            assert_eq!(a + a, Fe::ZERO);
        }
        for a in ctx.units() {
            assert_eq!(ctx.pow(a, ctx.unit_order()), Fe::ONE);
        }
    }

    #[test]
    fn inversion_round_trip_and_zero_rejected() {
        let ctx = make_field(15).unwrap();
        assert!(matches!(ctx.inv(Fe::ZERO), Err(Error::ZeroInversion)));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..2000 {
            let a = Fe(rng.gen_range(1..ctx.size()));
            assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), Fe::ONE);
        }
    }

    #[test]
    fn frobenius_is_additive_and_order_n() {
        let ctx = make_field(12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            let a = Fe(rng.gen_range(0..ctx.size()));
            let b = Fe(rng.gen_range(0..ctx.size()));
            let k = rng.gen_range(0..36);
            assert_eq!(ctx.frob(a + b, k), ctx.frob(a, k) + ctx.frob(b, k));
            assert_eq!(ctx.frob(a, 12), a);
            // frob is k-fold squaring
            let mut s = a;
            for _ in 0..k.rem_euclid(12) {
                s = ctx.sqr(s);
            }
            assert_eq!(ctx.frob(a, k), s);
        }
    }

    #[test]
    fn frob_table_matches_frob() {
        let ctx = make_field(21).unwrap();
        let tbl = FrobTable::new(&ctx, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let a = Fe(rng.gen_range(0..ctx.size()));
            assert_eq!(tbl.apply(a), ctx.frob(a, 5));
        }
    }

    #[test]
    fn subfield_membership_in_gf512() {
        let ctx = make_field(9).unwrap();
        let sub = ctx.subfield(3).unwrap();
        assert_eq!(sub.len(), 8);
        for g in sub {
            assert_eq!(ctx.frob(g, 3), g);
        }
    }

    #[test]
    fn rel_norm_basics() {
        let ctx = make_field(9).unwrap();
        assert_eq!(ctx.rel_norm(3, Fe::ZERO).unwrap(), Fe::ZERO);
        // on subfield elements the norm is the cube
        for mu in ctx.subfield(3).unwrap() {
            assert_eq!(ctx.rel_norm(3, mu).unwrap(), ctx.pow(mu, 3));
        }
        // multiplicative
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..500 {
            let a = Fe(rng.gen_range(0..ctx.size()));
            let b = Fe(rng.gen_range(0..ctx.size()));
            let n = |v| ctx.rel_norm(3, v).unwrap();
            assert_eq!(n(ctx.mul(a, b)), ctx.mul(n(a), n(b)));
        }
        // norm lands in the subfield
        for a in ctx.elements() {
            let r = ctx.rel_norm(3, a).unwrap();
            assert_eq!(ctx.frob(r, 3), r);
        }
        let bad = make_field(10).unwrap();
        assert!(matches!(
            bad.rel_norm(3, Fe::ONE),
            Err(Error::NotCubicExtension(10))
        ));
    }

    #[test]
    fn rel_norm_fibers_exhaustive() {
        // every nonzero norm value is hit by exactly 2^{2m} + 2^m + 1 units
        for m in [3u32, 4] {
            let ctx = make_field(3 * m).unwrap();
            let expected = (1u64 << (2 * m)) + (1 << m) + 1;
            let mut counts = std::collections::HashMap::new();
            for a in ctx.units() {
                *counts.entry(ctx.rel_norm(m, a).unwrap()).or_insert(0u64) += 1;
            }
            assert_eq!(counts.len() as u64, (1 << m) - 1);
            for (alpha, c) in counts {
                assert!(!alpha.is_zero());
                assert_eq!(c, expected, "m={m} alpha={alpha}");
            }
        }
    }

    #[test]
    fn subfield_root_examples() {
        // root of x^3 + x + 1 inside GF(2^9)
        let ctx = make_field(9).unwrap();
        let mu = ctx.subfield_root(0b1011, 3).unwrap();
        let v = ctx.mul(ctx.mul(mu, mu), mu) + mu + Fe::ONE;
        assert!(v.is_zero());
        assert_eq!(ctx.frob(mu, 3), mu);
        // smallest conjugate: no smaller root exists
        for cand in ctx.subfield(3).unwrap() {
            if cand < mu {
                let w = ctx.mul(ctx.mul(cand, cand), cand) + cand + Fe::ONE;
                assert!(!w.is_zero());
            }
        }

        // 2 does not divide 9
        assert!(matches!(
            ctx.subfield_root(0b111, 2),
            Err(Error::NoSuchSubfield { d: 2, n: 9 })
        ));

        // the degree-4 cyclotomic factor x^4+x^3+x^2+x+1 has a root of order 5 in GF(2^12)
        let ctx12 = make_field(12).unwrap();
        let mu = ctx12.subfield_root(0b11111, 4).unwrap();
        assert_eq!(ctx12.pow(mu, 5), Fe::ONE);
        assert_ne!(mu, Fe::ONE);
    }

    #[test]
    fn solve_exp_eq_round_trip_and_uniqueness() {
        let ctx = make_field(9).unwrap();
        // identity exponent
        assert_eq!(ctx.solve_exp_eq(1, Fe(0x17)).unwrap(), Fe(0x17));
        // round trip for random c
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let c = Fe(rng.gen_range(1..ctx.size()));
            let e = 2u64.pow(4) - 1; // gcd(15, 511) = 1
            let x = ctx.solve_exp_eq(e, c).unwrap();
            assert_eq!(ctx.pow(x, e), c);
            // exhaustive uniqueness over the 511 units
            let hits = ctx.units().filter(|&y| ctx.pow(y, e) == c).count();
            assert_eq!(hits, 1);
        }
        // gcd(7, 511) = 7: not invertible
        assert!(matches!(
            ctx.solve_exp_eq(7, Fe::ONE),
            Err(Error::ExponentNotInvertible { .. })
        ));
        assert!(matches!(
            ctx.solve_exp_eq(15, Fe::ZERO),
            Err(Error::ZeroHasNoUnitSolution)
        ));
    }

    #[test]
    fn generator_has_full_order() {
        let ctx = make_field(9).unwrap();
        let g = ctx.find_generator();
        let order = ctx.unit_order();
        assert_eq!(ctx.pow(g, order), Fe::ONE);
        for p in super::prime_factors(order) {
            assert_ne!(ctx.pow(g, order / p), Fe::ONE);
        }
        assert_eq!(ctx.with_generator().generator(), Some(g));
    }

    #[test]
    fn moduli_table_round_trip() {
        let table = dump_moduli(16).unwrap();
        let parsed = parse_moduli(&table).unwrap();
        assert_eq!(parsed.len(), 16);
        for (n, modulus) in parsed {
            assert_eq!(modulus, canonical_modulus(n).unwrap());
        }
        assert!(parse_moduli("3\tff\n").is_err()); // x^7+... not degree 3
        assert!(parse_moduli("oops").is_err());
    }
}
