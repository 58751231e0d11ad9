//! Univariate polynomials in `q` with exact integer coefficients.
//!
//! Exponents are `i64`, so the same type doubles as the Laurent variant used
//! for intermediate `q -> 1/q` substitutions. No zero coefficients are ever
//! stored.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{internal, Result};

#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct QPoly {
    // exponent -> nonzero coefficient
    coeffs: BTreeMap<i64, BigInt>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(0, BigInt::one())
    }

    pub fn q() -> Self {
        Self::monomial(1, BigInt::one())
    }

    pub fn monomial(exp: i64, coeff: impl Into<BigInt>) -> Self {
        let c: BigInt = coeff.into();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        QPoly { coeffs }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, c)
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, BigInt)>) -> Self {
        let mut p = QPoly::zero();
        for (e, c) in pairs {
            p.add_term(e, c);
        }
        p
    }

    /// `1 - q^a` (a > 0) and `1 + q^a` building blocks.
    pub fn one_minus_q(a: i64) -> Self {
        let mut p = QPoly::one();
        p.add_term(a, BigInt::from(-1));
        p
    }

    pub fn one_plus_q(a: i64) -> Self {
        let mut p = QPoly::one();
        p.add_term(a, BigInt::one());
        p
    }

    /// `1 + q + ... + q^{d-1}`.
    pub fn q_integer(d: i64) -> Self {
        QPoly::from_pairs((0..d).map(|e| (e, BigInt::one())))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeff(0).is_one()
    }

    /// True when a single term.
    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    /// All exponents nonnegative (a genuine polynomial, not just Laurent).
    pub fn is_polynomial(&self) -> bool {
        self.coeffs.keys().next().map_or(true, |&e| e >= 0)
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.degree().map_or_else(BigInt::zero, |d| self.coeff(d))
    }

    pub fn trailing_coeff(&self) -> BigInt {
        self.valuation().map_or_else(BigInt::zero, |v| self.coeff(v))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    fn add_term(&mut self, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = QPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: &BigInt) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            coeffs: self.coeffs.iter().map(|(&e, k)| (e, k * c)).collect(),
        }
    }

    /// Multiply by `q^k` (k may be negative).
    pub fn shift(&self, k: i64) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Substitute `q -> 1/q` (Laurent in general).
    pub fn reciprocal_substitution(&self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|(&e, c)| (-e, c.clone())).collect(),
        }
    }

    /// `q^k * self(1/q)`.
    pub fn reversed(&self, k: i64) -> QPoly {
        self.reciprocal_substitution().shift(k)
    }

    pub fn eval_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    pub fn eval_minus_one(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|(&e, c)| if e.rem_euclid(2) == 0 { c.clone() } else { -c.clone() })
            .sum()
    }

    /// Exact division by an integer; error if some coefficient is not divisible.
    pub fn div_scalar_exact(&self, d: &BigInt) -> Result<QPoly> {
        if d.is_zero() {
            return Err(internal("division of polynomial by zero scalar"));
        }
        let mut coeffs = BTreeMap::new();
        for (&e, c) in &self.coeffs {
            let (q, r) = num_integer::Integer::div_rem(c, d);
            if !r.is_zero() {
                return Err(internal(format!(
                    "coefficient {c} of q^{e} not divisible by {d}"
                )));
            }
            coeffs.insert(e, q);
        }
        Ok(QPoly { coeffs })
    }

    /// Polynomial long division `self = q*div + r` with `deg r < deg div`.
    /// Requires both to be genuine polynomials and the divisor's leading
    /// coefficient to be a unit (+-1).
    pub fn div_rem_unit(&self, div: &QPoly) -> Result<(QPoly, QPoly)> {
        if div.is_zero() {
            return Err(internal("polynomial division by zero"));
        }
        if !self.is_polynomial() || !div.is_polynomial() {
            return Err(internal("div_rem_unit requires nonnegative exponents"));
        }
        let lc = div.leading_coeff();
        if !lc.magnitude().is_one() {
            return Err(internal("div_rem_unit requires a unit leading coefficient"));
        }
        let dd = div.degree().unwrap();
        let mut rem = self.clone();
        let mut quo = QPoly::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.coeff(rd) / &lc;
            let t = QPoly::monomial(rd - dd, c);
            rem = rem.sub(&t.mul(div));
            quo = quo.add(&t);
        }
        Ok((quo, rem))
    }

    /// Exact polynomial division; error on nonzero remainder.
    pub fn div_exact(&self, div: &QPoly) -> Result<QPoly> {
        let (q, r) = self.div_rem_unit(div)?;
        if !r.is_zero() {
            return Err(internal(format!(
                "inexact polynomial division: remainder {r} dividing {self} by {div}"
            )));
        }
        Ok(q)
    }

    /// Exact division allowing an arbitrary leading coefficient: every
    /// leading-term division must be exact over the integers and the
    /// remainder must vanish. Errors otherwise.
    pub fn div_exact_any(&self, div: &QPoly) -> Result<QPoly> {
        if div.is_zero() {
            return Err(internal("polynomial division by zero"));
        }
        if self.is_zero() {
            return Ok(QPoly::zero());
        }
        if !self.is_polynomial() || !div.is_polynomial() {
            return Err(internal("div_exact_any requires nonnegative exponents"));
        }
        let lc = div.leading_coeff();
        let dd = div.degree().unwrap();
        let mut rem = self.clone();
        let mut quo = QPoly::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let (c, r) = num_integer::Integer::div_rem(&rem.coeff(rd), &lc);
            if !r.is_zero() {
                return Err(internal("inexact leading-coefficient division"));
            }
            let t = QPoly::monomial(rd - dd, c);
            rem = rem.sub(&t.mul(div));
            quo = quo.add(&t);
        }
        if !rem.is_zero() {
            return Err(internal("inexact polynomial division (nonzero remainder)"));
        }
        Ok(quo)
    }

    /// Content (gcd of coefficients, nonnegative).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.coeffs.values() {
            g = num_integer::Integer::gcd(&g, c);
        }
        g
    }

    /// Pseudo-remainder of two genuine polynomials (general leading coeffs).
    fn pseudo_rem(a: &QPoly, b: &QPoly) -> QPoly {
        let db = b.degree().unwrap();
        let lb = b.leading_coeff();
        let mut r = a.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading_coeff();
            r = r.mul_scalar(&lb).sub(&b.mul(&QPoly::monomial(dr - db, lr)));
        }
        r
    }

    fn primitive(&self) -> QPoly {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        self.div_scalar_exact(&c).expect("content divides")
    }

    /// Gcd of two genuine polynomials, primitive with positive leading coeff.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        assert!(self.is_polynomial() && other.is_polynomial());
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.is_zero() {
            return Self::make_monic_sign(b);
        }
        if b.is_zero() {
            return Self::make_monic_sign(a);
        }
        while !b.is_zero() {
            let r = Self::pseudo_rem(&a, &b).primitive();
            a = b;
            b = r;
        }
        Self::make_monic_sign(a)
    }

    fn make_monic_sign(p: QPoly) -> QPoly {
        if p.leading_coeff().is_negative() {
            p.neg()
        } else {
            p
        }
    }

    /// Coefficients listed from exponent 0 up to the degree (polynomials only).
    pub fn dense_coeffs(&self) -> Result<Vec<BigInt>> {
        if !self.is_polynomial() {
            return Err(internal("dense_coeffs on a Laurent polynomial"));
        }
        let d = match self.degree() {
            None => return Ok(vec![]),
            Some(d) => d,
        };
        Ok((0..=d).map(|e| self.coeff(e)).collect())
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let mag = c.magnitude();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let show_coeff = !mag.is_one() || e == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            if e != 0 {
                if show_coeff {
                    write!(f, "*")?;
                }
                if e == 1 {
                    write!(f, "q")?;
                } else {
                    write!(f, "q^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Serialize as sorted (exponent, decimal coefficient) pairs so cache files are
// stable and independent of BigInt internals.
impl Serialize for QPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<(i64, String)> = self.terms().map(|(e, c)| (e, c.to_string())).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<(i64, String)>::deserialize(d)?;
        let mut p = QPoly::zero();
        for (e, c) in pairs {
            let c: BigInt = c
                .parse()
                .map_err(|_| serde::de::Error::custom("bad coefficient"))?;
            p.add_term(e, c);
        }
        Ok(p)
    }
}
