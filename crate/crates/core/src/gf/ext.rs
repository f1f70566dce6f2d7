//! Large extensions `F_{Q}`, `Q = |base|^k`, represented as `base[Y]/(P(Y))`.
//!
//! These host roots of unity whose order does not divide `|base| - 1`. The
//! order `Q` is usually far beyond table range, so elements are polynomials
//! in `Y` and arithmetic goes through [`Poly`].

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::arith;
use crate::error::{invalid, Error, Result};
use crate::gf::{Elem, Field};
use crate::poly::Poly;

#[derive(Clone, Debug)]
pub struct ExtField {
    base: Field,
    modulus: Poly,
    k: usize,
    order: BigUint,
}

impl ExtField {
    /// Degree-`k` extension of `base`, modulo the lexicographically smallest
    /// monic irreducible of degree `k` (constant term compared first).
    pub fn new(base: &Field, k: usize) -> Result<ExtField> {
        if k == 0 {
            return invalid("extension degree must be at least 1");
        }
        let modulus = if k == 1 {
            Poly::x(base)
        } else {
            smallest_irreducible(base, k)
        };
        let order = BigUint::from(base.order()).pow(k as u32);
        Ok(ExtField { base: base.clone(), modulus, k, order })
    }

    pub fn base(&self) -> &Field {
        &self.base
    }
    pub fn degree(&self) -> usize {
        self.k
    }
    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }
    pub fn order(&self) -> &BigUint {
        &self.order
    }
    pub fn unit_order(&self) -> BigUint {
        &self.order - BigUint::one()
    }

    pub fn zero(&self) -> Poly {
        Poly::zero(&self.base)
    }
    pub fn one(&self) -> Poly {
        Poly::one(&self.base)
    }
    pub fn from_base(&self, c: Elem) -> Poly {
        Poly::constant(&self.base, c)
    }
    /// The base-field value of `x`, if `x` lies in the base.
    pub fn to_base(&self, x: &Poly) -> Option<Elem> {
        match x.degree() {
            None => Some(Elem::ZERO),
            Some(0) => Some(x.coeff(0)),
            _ => None,
        }
    }

    pub fn add(&self, x: &Poly, y: &Poly) -> Poly {
        x + y
    }
    pub fn sub(&self, x: &Poly, y: &Poly) -> Poly {
        x - y
    }
    pub fn neg(&self, x: &Poly) -> Poly {
        -x
    }
    pub fn mul(&self, x: &Poly, y: &Poly) -> Poly {
        (x * y).rem_monic(&self.modulus)
    }
    pub fn pow(&self, x: &Poly, e: &BigUint) -> Poly {
        x.pow_mod(e, &self.modulus).expect("modulus is nonzero")
    }
    pub fn pow_u64(&self, x: &Poly, e: u64) -> Poly {
        self.pow(x, &BigUint::from(e))
    }
    pub fn inv(&self, x: &Poly) -> Result<Poly> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(x, &(&self.order - 2u32)))
    }

    /// Element whose coefficient digits (base-field indices, constant term
    /// lowest) spell out the integer `t`.
    pub fn from_index(&self, mut t: u64) -> Poly {
        let b = self.base.order();
        let mut c = Vec::with_capacity(self.k);
        for _ in 0..self.k {
            c.push(Elem((t % b) as u32));
            t /= b;
        }
        Poly::new(&self.base, c)
    }

    /// A primitive `n`-th root of unity. For `k = 1` this is the base
    /// field's `ξ^{(q-1)/n}`; otherwise it is `x^{(Q-1)/n}` for the first
    /// `x` in index order (starting at 2) for which that power has order
    /// exactly `n`.
    pub fn root_of_unity(&self, n: u64) -> Result<Poly> {
        if n == 0 {
            return invalid("root of unity order must be positive");
        }
        let qm1 = &self.order - 1u32;
        if !(&qm1 % n).is_zero() {
            return Err(Error::Incompatible(format!(
                "{n} does not divide |F|-1 for the degree-{} extension of F_{}",
                self.k,
                self.base.order()
            )));
        }
        if self.k == 1 {
            return Ok(self.from_base(self.base.primitive_root_of_unity(n)?));
        }
        let cofactor = &qm1 / n;
        let primes = arith::prime_divisors(n);
        let one = self.one();
        let limit = self.base.order().saturating_pow(self.k.min(4) as u32);
        for t in 2..limit {
            let x = self.from_index(t);
            let eta = self.pow(&x, &cofactor);
            if primes.iter().all(|&r| self.pow_u64(&eta, n / r) != one) {
                return Ok(eta);
            }
        }
        Err(Error::Internal(format!("no primitive {n}-th root of unity found")))
    }

    /// Order of a nonzero element whose order is known to divide `n`.
    pub fn order_dividing(&self, x: &Poly, n: u64) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::ZeroInput("element"));
        }
        if self.pow_u64(x, n) != self.one() {
            return Err(Error::Incompatible(format!("element order does not divide {n}")));
        }
        let mut ord = n;
        for r in arith::prime_divisors(n) {
            while ord % r == 0 && self.pow_u64(x, ord / r) == self.one() {
                ord /= r;
            }
        }
        Ok(ord)
    }
}

fn smallest_irreducible(base: &Field, k: usize) -> Poly {
    let b = base.order() as u32;
    let lex_elems = base.elements_lex();
    // digits index into lex_elems; c_0 is most significant and must be nonzero
    let mut digits = vec![0u32; k];
    digits[0] = 1;
    loop {
        let mut c: Vec<Elem> = digits.iter().map(|&d| lex_elems[d as usize]).collect();
        c.push(Elem::ONE);
        let f = Poly::new(base, c);
        if f.is_irreducible() {
            return f;
        }
        let mut i = k;
        loop {
            i -= 1;
            digits[i] += 1;
            if digits[i] < b {
                break;
            }
            digits[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn modulus_is_smallest_irreducible() {
        let f3 = make_field(3, 1).unwrap();
        let e = ExtField::new(&f3, 2).unwrap();
        // X^2 + 1 is the first candidate with nonzero constant term and no root
        assert_eq!(e.modulus(), &Poly::from_ints(&f3, &[1, 0, 1]));
        let e4 = ExtField::new(&f3, 4).unwrap();
        assert!(e4.modulus().is_irreducible());
        // matches the table-field construction of F_81
        let f81 = make_field(3, 4).unwrap();
        let table: Vec<i64> = f81.defining_poly().iter().map(|&c| c as i64).collect();
        assert_eq!(e4.modulus(), &Poly::from_ints(&f3, &table));
    }

    #[test]
    fn roots_of_unity_have_exact_order() {
        let f7 = make_field(7, 1).unwrap();
        // ord_121(7) = 110
        let e = ExtField::new(&f7, 110).unwrap();
        let eta = e.root_of_unity(121).unwrap();
        assert_eq!(e.order_dividing(&eta, 121).unwrap(), 121);

        let f9 = make_field(3, 2).unwrap();
        let e = ExtField::new(&f9, 2).unwrap();
        let eta = e.root_of_unity(5).unwrap();
        assert_eq!(e.order_dividing(&eta, 5).unwrap(), 5);
        assert!(e.root_of_unity(7).is_err());
    }

    #[test]
    fn degree_one_uses_base_roots() {
        let f13 = make_field(13, 1).unwrap();
        let e = ExtField::new(&f13, 1).unwrap();
        let eta = e.root_of_unity(4).unwrap();
        assert_eq!(e.to_base(&eta), Some(f13.primitive_root_of_unity(4).unwrap()));
    }

    #[test]
    fn inverse_and_fermat() {
        let f5 = make_field(5, 1).unwrap();
        let e = ExtField::new(&f5, 3).unwrap();
        for t in 1..125 {
            let x = e.from_index(t);
            assert_eq!(e.mul(&x, &e.inv(&x).unwrap()), e.one());
            assert_eq!(e.pow(&x, e.order()), x);
        }
    }
}
