//! Dense univariate polynomials over a [`Field`].

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field, TowerMap};

#[derive(Clone)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Elem>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Poly) -> bool {
        self.coeffs == other.coeffs && self.field == other.field
    }
}
impl Eq for Poly {}

impl Hash for Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = self.field.fmt_elem(c);
            match (i, c == Elem::ONE) {
                (0, _) => write!(f, "{cs}")?,
                (1, true) => write!(f, "X")?,
                (1, false) => write!(f, "{cs}X")?,
                (_, true) => write!(f, "X^{i}")?,
                (_, false) => write!(f, "{cs}X^{i}")?,
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        debug_assert!(coeffs.iter().all(|&c| field.contains(c)));
        Poly { field: field.clone(), coeffs }
    }

    /// Coefficients given as integers, reduced into the prime subfield.
    pub fn from_ints(field: &Field, c: &[i64]) -> Poly {
        Poly::new(field, c.iter().map(|&x| field.from_int(x)).collect())
    }

    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }
    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, Elem::ONE)
    }
    pub fn constant(field: &Field, c: Elem) -> Poly {
        Poly::new(field, vec![c])
    }
    pub fn x(field: &Field) -> Poly {
        Poly::monomial(field, Elem::ONE, 1)
    }
    pub fn monomial(field: &Field, c: Elem, deg: usize) -> Poly {
        let mut v = vec![Elem::ZERO; deg + 1];
        v[deg] = c;
        Poly::new(field, v)
    }
    /// `X^n - c`.
    pub fn binomial(field: &Field, n: usize, c: Elem) -> Poly {
        let mut v = vec![Elem::ZERO; n + 1];
        v[n] = Elem::ONE;
        v[0] = field.sub(v[0], c);
        Poly::new(field, v)
    }
    /// Monic `Π (X - r)`.
    pub fn from_roots(field: &Field, roots: &[Elem]) -> Poly {
        let mut c = vec![Elem::ONE];
        for &r in roots {
            let nr = field.neg(r);
            c.push(Elem::ZERO);
            for i in (0..c.len()).rev() {
                let lower = if i > 0 { c[i - 1] } else { Elem::ZERO };
                c[i] = field.add(lower, field.mul(c[i], nr));
            }
        }
        Poly::new(field, c)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }
    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.coeffs == [Elem::ONE]
    }
    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
    pub fn leading(&self) -> Option<Elem> {
        self.coeffs.last().copied()
    }
    pub fn is_monic(&self) -> bool {
        self.leading() == Some(Elem::ONE)
    }

    fn check_field(&self, other: &Poly) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        Ok(self.add_impl(other))
    }
    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        Ok(self.add_impl(&other.neg_impl()))
    }
    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        Ok(self.mul_impl(other))
    }

    fn add_impl(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Poly::new(f, v)
    }

    fn neg_impl(&self) -> Poly {
        let f = &self.field;
        Poly { field: f.clone(), coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect() }
    }

    fn mul_impl(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        if f.degree() == 1 {
            let p = f.characteristic();
            // products are < 2^40, so partial sums can run ~2^23 terms before reducing
            let mut acc = vec![0u64; n];
            for (i, &a) in self.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let a = a.0 as u64;
                for (j, &b) in other.coeffs.iter().enumerate() {
                    acc[i + j] += a * b.0 as u64;
                }
                if i % 4096 == 4095 {
                    acc.iter_mut().for_each(|c| *c %= p);
                }
            }
            return Poly::new(f, acc.into_iter().map(|c| Elem((c % p) as u32)).collect());
        }
        let mut v = vec![Elem::ZERO; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                v[i + j] = f.add(v[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, v)
    }

    pub fn scale(&self, c: Elem) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    /// Quotient and remainder; the remainder has degree below the divisor's.
    pub fn divmod(&self, d: &Poly) -> Result<(Poly, Poly)> {
        self.check_field(d)?;
        let lead = d.leading().ok_or(Error::DivisionByZero)?;
        let f = &self.field;
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let inv = f.inv(lead)?;
        let mut r = self.coeffs.clone();
        let mut quot = vec![Elem::ZERO; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = r[i];
            if c.is_zero() {
                continue;
            }
            let t = f.mul(c, inv);
            quot[i - dd] = t;
            let nt = f.neg(t);
            for (k, &dk) in d.coeffs.iter().enumerate() {
                r[i - dd + k] = f.add(r[i - dd + k], f.mul(nt, dk));
            }
        }
        r.truncate(dd);
        Ok((Poly::new(f, quot), Poly::new(f, r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        if d.is_monic() && self.field == d.field {
            return Ok(self.rem_monic(d));
        }
        Ok(self.divmod(d)?.1)
    }

    /// Remainder modulo a monic polynomial (same field assumed).
    pub(crate) fn rem_monic(&self, d: &Poly) -> Poly {
        let f = &self.field;
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return self.clone();
        }
        if f.degree() == 1 {
            let p = f.characteristic();
            let neg_d: Vec<u64> = d.coeffs[..dd].iter().map(|c| (p - c.0 as u64) % p).collect();
            let mut r: Vec<u64> = self.coeffs.iter().map(|c| c.0 as u64).collect();
            for i in (dd..r.len()).rev() {
                let c = r[i] % p;
                if c == 0 {
                    continue;
                }
                let base = i - dd;
                for (k, &nk) in neg_d.iter().enumerate() {
                    r[base + k] = (r[base + k] + c * nk) % p;
                }
            }
            r.truncate(dd);
            return Poly::new(f, r.into_iter().map(|c| Elem((c % p) as u32)).collect());
        }
        let mut r = self.coeffs.clone();
        for i in (dd..r.len()).rev() {
            let c = r[i];
            if c.is_zero() {
                continue;
            }
            let nc = f.neg(c);
            for k in 0..dd {
                r[i - dd + k] = f.add(r[i - dd + k], f.mul(nc, d.coeffs[k]));
            }
        }
        r.truncate(dd);
        Poly::new(f, r)
    }

    pub fn divides(&self, other: &Poly) -> Result<bool> {
        Ok(other.rem(self)?.is_zero())
    }

    /// Exact quotient; fails if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.divmod(d)?;
        if !r.is_zero() {
            return Err(Error::Incompatible(format!("{d} does not divide {self}")));
        }
        Ok(q)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.divmod(&b)?.1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            Ok(a)
        } else {
            a.monic_hat()
        }
    }

    /// Monic lcm of two nonzero polynomials.
    pub fn lcm(&self, other: &Poly) -> Result<Poly> {
        if self.is_zero() || other.is_zero() {
            return Err(Error::ZeroInput("lcm operand"));
        }
        let g = self.gcd(other)?;
        self.exact_div(&g)?.checked_mul(other)?.monic_hat()
    }

    pub fn pow(&self, mut k: u64) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, e: &BigUint, modulus: &Poly) -> Result<Poly> {
        self.check_field(modulus)?;
        if modulus.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = modulus.monic_hat()?;
        let mut acc = Poly::one(&self.field).rem_monic(&m);
        let base = self.rem_monic(&m);
        for i in (0..e.bits()).rev() {
            acc = (&acc * &acc).rem_monic(&m);
            if e.bit(i) {
                acc = (&acc * &base).rem_monic(&m);
            }
        }
        Ok(acc)
    }

    pub fn pow_mod_u64(&self, e: u64, modulus: &Poly) -> Result<Poly> {
        self.pow_mod(&BigUint::from(e), modulus)
    }

    pub fn eval(&self, x: Elem) -> Elem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, f.from_int(i as i64)))
            .collect();
        Poly::new(f, v)
    }

    /// `a_n^{-1} f(X)` for leading coefficient `a_n`.
    pub fn monic_hat(&self) -> Result<Poly> {
        let lead = self.leading().ok_or(Error::ZeroInput("polynomial"))?;
        if lead == Elem::ONE {
            return Ok(self.clone());
        }
        Ok(self.scale(self.field.inv(lead)?))
    }

    /// `h(0)^{-1} X^{deg h} h(1/X)`, the monic reciprocal.
    pub fn reciprocal(&self) -> Result<Poly> {
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(Error::ZeroInput("constant term"));
        }
        let rev: Vec<Elem> = self.coeffs.iter().rev().copied().collect();
        Ok(Poly::new(&self.field, rev).scale(self.field.inv(c0)?))
    }

    pub fn is_self_reciprocal(&self) -> Result<bool> {
        Ok(self.reciprocal()? == self.monic_hat()?)
    }

    /// `f(aX)`: coefficient `i` is multiplied by `a^i`.
    pub fn scale_sub(&self, a: Elem) -> Result<Poly> {
        if a.is_zero() {
            return Err(Error::ZeroInput("scaling factor"));
        }
        let f = &self.field;
        let mut pw = Elem::ONE;
        let mut v = Vec::with_capacity(self.coeffs.len());
        for &c in &self.coeffs {
            v.push(f.mul(c, pw));
            pw = f.mul(pw, a);
        }
        Ok(Poly::new(f, v))
    }

    /// Monic image of `f(aX)`, the form every scaled factor takes.
    pub fn scaled_monic(&self, a: Elem) -> Result<Poly> {
        self.scale_sub(a)?.monic_hat()
    }

    /// `f(X^k)`.
    pub fn inflate(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![Elem::ZERO; self.deg() * k + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[i * k] = c;
        }
        Poly::new(&self.field, v)
    }

    pub fn embed(&self, map: &TowerMap) -> Result<Poly> {
        if &self.field != map.base() {
            return Err(Error::FieldMismatch);
        }
        let v = self.coeffs.iter().map(|&c| map.embed(c)).collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(map.ext(), v))
    }

    /// Inverse of [`embed`](Self::embed); fails if a coefficient lies
    /// outside the subfield.
    pub fn pullback(&self, map: &TowerMap) -> Result<Poly> {
        if &self.field != map.ext() {
            return Err(Error::FieldMismatch);
        }
        let v = self
            .coeffs
            .iter()
            .map(|&c| {
                map.pullback(c).ok_or_else(|| {
                    Error::Internal(format!(
                        "coefficient {} of {self} is not in F_{}",
                        map.ext().fmt_elem(c),
                        map.base().order()
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(map.base(), v))
    }

    /// Canonical order: degree first, then coefficients compared from the
    /// constant term upward in the field's lexicographic element order.
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| {
            let f = &self.field;
            for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
                match f.lex_key(*a).cmp(&f.lex_key(*b)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }

    /// Ben-Or irreducibility test: no factor of degree `<= deg/2`.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let f = self.monic_hat().unwrap();
        if f.coeff(0).is_zero() {
            return false;
        }
        let q = BigUint::from(self.field.order());
        let x = Poly::x(&self.field);
        let mut h = x.clone();
        for _ in 1..=n / 2 {
            h = h.pow_mod(&q, &f).unwrap();
            let g = f.gcd(&(&h - &x)).unwrap();
            if !g.is_one() {
                return false;
            }
        }
        true
    }

    pub fn to_json(&self) -> Value {
        json!({ "coeffs": self.coeffs.iter().map(|&c| self.field.elem_json(c)).collect::<Vec<_>>() })
    }

    /// Coefficient list in the field's JSON element form.
    pub fn coeffs_json(&self) -> Value {
        Value::from(self.coeffs.iter().map(|&c| self.field.elem_json(c)).collect::<Vec<_>>())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("polynomials over different fields")
    }
}
impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("polynomials over different fields")
    }
}
impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("polynomials over different fields")
    }
}
impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.neg_impl()
    }
}

/// Product of a sequence of polynomials (empty product is 1).
pub fn product<'a>(field: &Field, polys: impl IntoIterator<Item = &'a Poly>) -> Poly {
    polys.into_iter().fold(Poly::one(field), |acc, p| &acc * p)
}
