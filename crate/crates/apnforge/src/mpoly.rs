//! Sparse multivariate polynomials over GF(2) or GF(8) (any FieldCtx), up
//! to 6 variables, with the variable order fixed as U0, U1, U2, V0, V1, V2.
//!
//! Terms live in a map from exponent vectors to nonzero coefficients; zero
//! coefficients are never stored, so map equality is polynomial equality.
//! The text format is one term per line: `hex-coeff<SPACE>e0,e1,...`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fe, FieldCtx};

pub const MAX_VARS: usize = 6;
pub const VAR_NAMES: [&str; MAX_VARS] = ["U0", "U1", "U2", "V0", "V1", "V2"];

type Exp = [u16; MAX_VARS];

/// A sparse multivariate polynomial.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    field: FieldCtx,
    nvars: usize,
    terms: BTreeMap<Exp, Fe>,
}

fn total_deg(e: &Exp) -> u32 {
    e.iter().map(|&x| x as u32).sum()
}

/// Graded lexicographic comparison: total degree first, then lex.
fn grlex(a: &Exp, b: &Exp) -> std::cmp::Ordering {
    total_deg(a).cmp(&total_deg(b)).then_with(|| a.cmp(b))
}

impl MPoly {
    pub fn zero(field: &FieldCtx, nvars: usize) -> MPoly {
        assert!((1..=MAX_VARS).contains(&nvars));
        MPoly {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &FieldCtx, nvars: usize, c: Fe) -> MPoly {
        let mut p = MPoly::zero(field, nvars);
        p.add_term([0; MAX_VARS], c);
        p
    }

    pub fn var(field: &FieldCtx, nvars: usize, i: usize) -> MPoly {
        assert!(i < nvars);
        let mut e = [0u16; MAX_VARS];
        e[i] = 1;
        let mut p = MPoly::zero(field, nvars);
        p.add_term(e, Fe::ONE);
        p
    }

    /// Single term c * prod var_i^{exps[i]}.
    pub fn monomial(field: &FieldCtx, nvars: usize, c: Fe, exps: &[u16]) -> MPoly {
        assert!(exps.len() <= nvars);
        let mut e = [0u16; MAX_VARS];
        e[..exps.len()].copy_from_slice(exps);
        let mut p = MPoly::zero(field, nvars);
        p.add_term(e, c);
        p
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(total_deg).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    fn add_term(&mut self, e: Exp, c: Fe) {
        if c.is_zero() {
            return;
        }
        debug_assert!(e[self.nvars..].iter().all(|&x| x == 0));
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = *slot.get() + c;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    fn compatible(&self, other: &MPoly) -> Result<()> {
        if self.field != other.field || self.nvars != other.nvars {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &MPoly) -> Result<MPoly> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (&e, &c) in &other.terms {
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &MPoly) -> Result<MPoly> {
        self.compatible(other)?;
        let mut out = MPoly::zero(&self.field, self.nvars);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let mut e = [0u16; MAX_VARS];
                for i in 0..MAX_VARS {
                    e[i] = ea[i] + eb[i];
                }
                out.add_term(e, self.field.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u32) -> MPoly {
        let mut base = self.clone();
        let mut acc = MPoly::constant(&self.field, self.nvars, Fe::ONE);
        while e != 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            base = base.mul(&base).expect("same ring");
            e >>= 1;
        }
        acc
    }

    /// Multiply every coefficient by c.
    pub fn scale(&self, c: Fe) -> MPoly {
        let mut out = MPoly::zero(&self.field, self.nvars);
        for (&e, &k) in &self.terms {
            out.add_term(e, self.field.mul(k, c));
        }
        out
    }

    /// Leading (exponent, coefficient) in graded-lex order.
    pub fn leading_term(&self) -> Option<([u16; MAX_VARS], Fe)> {
        self.terms
            .iter()
            .max_by(|a, b| grlex(a.0, b.0))
            .map(|(&e, &c)| (e, c))
    }

    /// Divide by the graded-lex leading coefficient, making the polynomial
    /// monic in that order.
    pub fn monic(&self) -> Result<MPoly> {
        match self.leading_term() {
            None => Ok(self.clone()),
            Some((_, c)) => Ok(self.scale(self.field.inv(c)?)),
        }
    }

    /// Replace one variable by a polynomial in the same ring.
    pub fn substitute(&self, var: usize, replacement: &MPoly) -> Result<MPoly> {
        self.compatible(replacement)?;
        let mut reps: Vec<MPoly> = (0..self.nvars)
            .map(|i| MPoly::var(&self.field, self.nvars, i))
            .collect();
        reps[var] = replacement.clone();
        self.substitute_all(&reps)
    }

    /// Simultaneous substitution: variable i becomes replacements[i].
    pub fn substitute_all(&self, replacements: &[MPoly]) -> Result<MPoly> {
        if replacements.len() != self.nvars {
            return Err(Error::WrongArity {
                expected: self.nvars,
                got: replacements.len(),
            });
        }
        for r in replacements {
            self.compatible(r)?;
        }
        // cache powers of each replacement up to the degree actually used
        let mut pow_cache: Vec<Vec<MPoly>> = replacements
            .iter()
            .map(|_| vec![MPoly::constant(&self.field, self.nvars, Fe::ONE)])
            .collect();
        for (i, r) in replacements.iter().enumerate() {
            let need = self.degree_in(i) as usize;
            for e in 1..=need {
                let next = pow_cache[i][e - 1].mul(r).expect("same ring");
                pow_cache[i].push(next);
            }
        }
        let mut out = MPoly::zero(&self.field, self.nvars);
        for (e, &c) in &self.terms {
            let mut term = MPoly::constant(&self.field, self.nvars, c);
            for v in 0..self.nvars {
                if e[v] > 0 {
                    term = term.mul(&pow_cache[v][e[v] as usize])?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Exact division: returns the quotient or `NotDivisible`.
    pub fn trial_divide(&self, divisor: &MPoly) -> Result<MPoly> {
        self.compatible(divisor)?;
        let Some((de, dc)) = divisor.leading_term() else {
            return Err(Error::NotDivisible);
        };
        let dc_inv = self.field.inv(dc)?;
        let mut rem = self.clone();
        let mut quot = MPoly::zero(&self.field, self.nvars);
        while let Some((re, rc)) = rem.leading_term() {
            let mut qe = [0u16; MAX_VARS];
            for i in 0..MAX_VARS {
                match re[i].checked_sub(de[i]) {
                    Some(d) => qe[i] = d,
                    None => return Err(Error::NotDivisible),
                }
            }
            let qc = self.field.mul(rc, dc_inv);
            let t = MPoly::monomial(&self.field, self.nvars, qc, &qe[..self.nvars]);
            quot = quot.add(&t)?;
            rem = rem.add(&t.mul(divisor)?)?; // char 2: subtract = add
        }
        Ok(quot)
    }

    pub fn eval(&self, point: &[Fe]) -> Result<Fe> {
        if point.len() != self.nvars {
            return Err(Error::WrongArity {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut acc = Fe::ZERO;
        for (e, &c) in &self.terms {
            let mut t = c;
            for (v, &x) in point.iter().enumerate() {
                if e[v] > 0 {
                    t = self.field.mul(t, self.field.pow(x, e[v] as u64));
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Reshape to a different variable count; fails if a dropped variable
    /// actually occurs.
    pub fn with_nvars(&self, nvars: usize) -> Result<MPoly> {
        assert!((1..=MAX_VARS).contains(&nvars));
        for e in self.terms.keys() {
            if e[nvars..].iter().any(|&x| x != 0) {
                return Err(Error::WrongArity {
                    expected: nvars,
                    got: self.nvars,
                });
            }
        }
        let mut out = MPoly::zero(&self.field, nvars);
        for (&e, &c) in &self.terms {
            out.add_term(e, c);
        }
        Ok(out)
    }

    /// Map coefficients into another field (e.g. embed GF(2) or GF(8) in an
    /// extension through a map on coefficients).
    pub fn map_coeffs(&self, field: &FieldCtx, f: impl Fn(Fe) -> Fe) -> MPoly {
        let mut out = MPoly::zero(field, self.nvars);
        for (&e, &c) in &self.terms {
            out.add_term(e, f(c));
        }
        out
    }

    /// Coefficients of this polynomial viewed as univariate in `var`, from
    /// degree 0 up to degree_in(var); entries are polynomials in the
    /// remaining variables.
    pub fn coeffs_in(&self, var: usize) -> Vec<MPoly> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![MPoly::zero(&self.field, self.nvars); d + 1];
        for (&e, &c) in &self.terms {
            let mut r = e;
            let k = r[var] as usize;
            r[var] = 0;
            out[k].add_term(r, c);
        }
        out
    }

    /// Iterate over (exponent vector, coefficient) pairs; only the first
    /// `nvars` exponent entries are meaningful.
    pub fn terms(&self) -> impl Iterator<Item = (&[u16; MAX_VARS], Fe)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    /// One term per line, graded-lex descending: `hex-coeff e0,e1,...`.
    pub fn to_text(&self) -> String {
        let mut terms: Vec<(&Exp, &Fe)> = self.terms.iter().collect();
        terms.sort_by(|a, b| grlex(b.0, a.0));
        let mut out = String::new();
        for (e, c) in terms {
            let exps: Vec<String> = e[..self.nvars].iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("{:x} {}\n", c.0, exps.join(",")));
        }
        out
    }

    /// Parse the `to_text` format. Every line must carry `nvars` exponents.
    pub fn parse(field: &FieldCtx, nvars: usize, text: &str) -> Result<MPoly> {
        let mut p = MPoly::zero(field, nvars);
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad =
                |what: &str| Error::Parse(format!("mpoly line {}: {what}: `{line}`", lineno + 1));
            let (cs, es) = line
                .split_once(' ')
                .ok_or_else(|| bad("expected two fields"))?;
            let c = u64::from_str_radix(cs, 16).map_err(|_| bad("bad coefficient"))?;
            if c >= field.size() {
                return Err(bad("coefficient outside the field"));
            }
            let exps: Vec<u16> = es
                .split(',')
                .map(|t| t.trim().parse::<u16>().map_err(|_| bad("bad exponent")))
                .collect::<Result<_>>()?;
            if exps.len() != nvars {
                return Err(bad("wrong exponent count"));
            }
            let mut e = [0u16; MAX_VARS];
            e[..nvars].copy_from_slice(&exps);
            p.add_term(e, Fe(c));
        }
        Ok(p)
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Exp, &Fe)> = self.terms.iter().collect();
        terms.sort_by(|a, b| grlex(b.0, a.0));
        let rendered: Vec<String> = terms
            .iter()
            .map(|(e, c)| {
                let mut s = String::new();
                if **c != Fe::ONE || total_deg(e) == 0 {
                    s.push_str(&format!("{:x}*", c.0));
                }
                let vars: Vec<String> = (0..self.nvars)
                    .filter(|&v| e[v] > 0)
                    .map(|v| {
                        if e[v] == 1 {
                            VAR_NAMES[v].to_string()
                        } else {
                            format!("{}^{}", VAR_NAMES[v], e[v])
                        }
                    })
                    .collect();
                s.push_str(&vars.join("*"));
                s.trim_end_matches('*').to_string()
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}
