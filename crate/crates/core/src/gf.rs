//! Finite fields `F_{p^a}` of odd characteristic.
//!
//! A [`FieldSpec`] is built once (defining polynomial, primitive element,
//! log/exp tables) and shared behind a cheap [`Field`] handle. Elements are
//! plain [`Elem`] indices interpreted by the field they came from: the index
//! `c_0 + c_1 p + ... + c_{a-1} p^{a-1}` stands for `c_0 + c_1 t + ...` in the
//! power basis of the defining polynomial. Prime-subfield elements are
//! therefore exactly the indices below `p`.

pub mod ext;

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::arith;
use crate::error::{invalid, Error, Result};

/// Largest field order handled with lookup tables.
pub const MAX_TABLE_ORDER: u64 = 1 << 20;

const ADD_TABLE_LIMIT: u32 = 256;

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

pub struct FieldSpec {
    p: u32,
    a: u32,
    q: u32,
    defining: Vec<u32>,
    primitive: Elem,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

/// Shared handle to a [`FieldSpec`].
#[derive(Clone)]
pub struct Field(Arc<FieldSpec>);

impl Deref for Field {
    type Target = FieldSpec;
    fn deref(&self) -> &FieldSpec {
        &self.0
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.p == other.p && self.a == other.a && self.defining == other.defining)
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

fn cache() -> &'static Mutex<HashMap<(u32, u32), Field>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Field>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds (or fetches from the process-wide cache) the field `F_{p^a}`.
///
/// The defining polynomial is the lexicographically smallest monic
/// irreducible of degree `a` over `F_p`, comparing coefficients from the
/// constant term upward. The primitive element is the lexicographically
/// smallest element of order `q - 1` under the same ordering.
pub fn make_field(p: u64, a: u32) -> Result<Field> {
    if p % 2 == 0 || !arith::is_prime(p) {
        return invalid(format!("characteristic {p} is not an odd prime"));
    }
    if a == 0 {
        return invalid("extension degree must be at least 1");
    }
    let q = match p.checked_pow(a) {
        Some(q) if q <= MAX_TABLE_ORDER => q,
        _ => {
            return invalid(format!(
                "field order {p}^{a} exceeds the supported bound {MAX_TABLE_ORDER}"
            ))
        }
    };
    let key = (p as u32, a);
    if let Some(f) = cache().lock().unwrap().get(&key) {
        return Ok(f.clone());
    }
    let built = Field(Arc::new(FieldSpec::build(p as u32, a, q as u32)));
    let mut guard = cache().lock().unwrap();
    Ok(guard.entry(key).or_insert(built).clone())
}

/// `F_q` for an odd prime power `q`.
pub fn field_of_order(q: u64) -> Result<Field> {
    match arith::prime_power(q) {
        Some((p, a)) => make_field(p, a),
        None => invalid(format!("{q} is not a prime power")),
    }
}

// Polynomials over F_p as raw residue vectors, only used during construction.
fn raw_mulmod(x: &[u32], y: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let a = modulus.len() - 1;
    let mut prod = vec![0u64; x.len() + y.len()];
    for (i, &xi) in x.iter().enumerate() {
        for (j, &yj) in y.iter().enumerate() {
            prod[i + j] += xi as u64 * yj as u64;
        }
    }
    let p64 = p as u64;
    let mut prod: Vec<u64> = prod.into_iter().map(|c| c % p64).collect();
    for d in (a..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for k in 0..a {
            prod[d - a + k] = (prod[d - a + k] + (p64 - c) * modulus[k] as u64) % p64;
        }
    }
    prod.truncate(a);
    prod.resize(a, 0);
    prod.into_iter().map(|c| c as u32).collect()
}

fn raw_is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg <= 1 {
        return true;
    }
    // trial division by every monic polynomial of degree 1..=deg/2
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g = vec![0u32; d + 1];
            let mut t = idx;
            for c in g.iter_mut().take(d) {
                *c = (t % p as u64) as u32;
                t /= p as u64;
            }
            g[d] = 1;
            if raw_divides(&g, f, p) {
                return false;
            }
        }
    }
    true
}

fn raw_divides(g: &[u32], f: &[u32], p: u32) -> bool {
    let p64 = p as u64;
    let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let dg = g.len() - 1;
    for d in (dg..r.len()).rev() {
        let c = r[d] % p64;
        if c == 0 {
            continue;
        }
        for k in 0..=dg {
            r[d - dg + k] = (r[d - dg + k] + (p64 - c) * g[k] as u64) % p64;
        }
    }
    r.iter().take(dg).all(|&c| c % p64 == 0)
}

impl FieldSpec {
    fn build(p: u32, a: u32, q: u32) -> FieldSpec {
        let defining = if a == 1 {
            vec![0, 1]
        } else {
            // odometer over (c_0, .., c_{a-1}) with c_0 most significant
            let mut digits = vec![0u32; a as usize];
            loop {
                let mut f = digits.clone();
                f.push(1);
                if f[0] != 0 && raw_is_irreducible(&f, p) {
                    break f;
                }
                let mut i = a as usize;
                loop {
                    i -= 1;
                    digits[i] += 1;
                    if digits[i] < p {
                        break;
                    }
                    digits[i] = 0;
                }
            }
        };

        let to_vec = |idx: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(a as usize);
            let mut t = idx;
            for _ in 0..a {
                v.push(t % p);
                t /= p;
            }
            v
        };
        let from_vec = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &c| acc * p + c) };
        let lex = |idx: u32| -> u64 {
            to_vec(idx).iter().fold(0u64, |acc, &c| acc * p as u64 + c as u64)
        };
        let mul = |x: u32, y: u32| -> u32 {
            if a == 1 {
                ((x as u64 * y as u64) % p as u64) as u32
            } else {
                from_vec(&raw_mulmod(&to_vec(x), &to_vec(y), &defining, p))
            }
        };

        let mut candidates: Vec<u32> = (1..q).collect();
        candidates.sort_by_key(|&x| lex(x));
        let order_of = |x: u32| -> u32 {
            let mut k = 1;
            let mut cur = x;
            while cur != 1 {
                cur = mul(cur, x);
                k += 1;
            }
            k
        };
        let primitive = candidates
            .into_iter()
            .find(|&x| order_of(x) == q - 1)
            .expect("multiplicative group of a finite field is cyclic");

        let mut exp = Vec::with_capacity((q - 1) as usize);
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = 1u32;
        for i in 0..q - 1 {
            exp.push(cur);
            log[cur as usize] = i;
            cur = mul(cur, primitive);
        }

        let neg = (0..q)
            .map(|x| from_vec(&to_vec(x).iter().map(|&c| (p - c) % p).collect::<Vec<_>>()))
            .collect();

        let mut spec = FieldSpec {
            p,
            a,
            q,
            defining,
            primitive: Elem(primitive),
            exp,
            log,
            neg,
            add_table: None,
        };
        if a > 1 && q <= ADD_TABLE_LIMIT {
            let mut t = Vec::with_capacity((q * q) as usize);
            for x in 0..q {
                for y in 0..q {
                    t.push(spec.add_digits(x, y));
                }
            }
            spec.add_table = Some(t);
        }
        spec
    }

    fn add_digits(&self, mut x: u32, mut y: u32) -> u32 {
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.a {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * scale;
            scale *= self.p;
            x /= self.p;
            y /= self.p;
        }
        out
    }

    pub fn characteristic(&self) -> u64 {
        self.p as u64
    }
    pub fn degree(&self) -> u32 {
        self.a
    }
    pub fn order(&self) -> u64 {
        self.q as u64
    }
    /// Coefficients `[c_0, .., c_a]` of the defining polynomial over `F_p`.
    pub fn defining_poly(&self) -> &[u32] {
        &self.defining
    }
    /// The chosen generator of the multiplicative group.
    pub fn primitive(&self) -> Elem {
        self.primitive
    }
    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }
    pub fn one(&self) -> Elem {
        Elem::ONE
    }
    pub fn contains(&self, x: Elem) -> bool {
        x.0 < self.q
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.p as i64) as u32)
    }

    /// Power-basis coefficients, constant term first.
    pub fn coeffs(&self, x: Elem) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.a as usize);
        let mut t = x.0;
        for _ in 0..self.a {
            v.push(t % self.p);
            t /= self.p;
        }
        v
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<Elem> {
        if c.len() > self.a as usize || c.iter().any(|&d| d >= self.p) {
            return invalid(format!("{c:?} is not a coefficient vector of F_{}", self.q));
        }
        Ok(Elem(c.iter().rev().fold(0, |acc, &d| acc * self.p + d)))
    }

    /// Sort key realising the lexicographic coefficient order (constant
    /// term most significant).
    pub fn lex_key(&self, x: Elem) -> u64 {
        self.coeffs(x)
            .iter()
            .fold(0u64, |acc, &c| acc * self.p as u64 + c as u64)
    }

    /// All elements in lexicographic coefficient order.
    pub fn elements_lex(&self) -> Vec<Elem> {
        let mut v: Vec<Elem> = (0..self.q).map(Elem).collect();
        v.sort_by_key(|&x| self.lex_key(x));
        v
    }

    pub fn in_prime_subfield(&self, x: Elem) -> bool {
        x.0 < self.p
    }

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        if self.a == 1 {
            let s = x.0 + y.0;
            Elem(if s >= self.p { s - self.p } else { s })
        } else if let Some(t) = &self.add_table {
            Elem(t[(x.0 * self.q + y.0) as usize])
        } else {
            Elem(self.add_digits(x.0, y.0))
        }
    }

    #[inline]
    pub fn neg(&self, x: Elem) -> Elem {
        Elem(self.neg[x.0 as usize])
    }

    #[inline]
    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        if x.0 == 0 || y.0 == 0 {
            return Elem::ZERO;
        }
        if self.a == 1 {
            return Elem(((x.0 as u64 * y.0 as u64) % self.p as u64) as u32);
        }
        let s = self.log[x.0 as usize] + self.log[y.0 as usize];
        let n = self.q - 1;
        Elem(self.exp[(if s >= n { s - n } else { s }) as usize])
    }

    pub fn inv(&self, x: Elem) -> Result<Elem> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.q - 1;
        let l = self.log[x.0 as usize];
        Ok(Elem(self.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, x: Elem, y: Elem) -> Result<Elem> {
        Ok(self.mul(x, self.inv(y)?))
    }

    pub fn pow(&self, x: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if x.is_zero() {
            return Elem::ZERO;
        }
        let n = (self.q - 1) as u128;
        let l = (self.log[x.0 as usize] as u128 * (e as u128 % n)) % n;
        Elem(self.exp[l as usize])
    }

    /// `x^e` for a signed exponent; `x` must be nonzero when `e < 0`.
    pub fn pow_signed(&self, x: Elem, e: i64) -> Result<Elem> {
        if e >= 0 {
            Ok(self.pow(x, e as u64))
        } else {
            Ok(self.pow(self.inv(x)?, e.unsigned_abs()))
        }
    }

    pub fn pow_big(&self, x: Elem, e: &BigUint) -> Elem {
        let n = BigUint::from(self.q - 1);
        if x.is_zero() {
            return if e.bits() == 0 { Elem::ONE } else { Elem::ZERO };
        }
        self.pow(x, (e % n).to_u64().unwrap())
    }

    /// Discrete logarithm to base [`primitive`](Self::primitive).
    pub fn log(&self, x: Elem) -> Option<u64> {
        if x.is_zero() {
            None
        } else {
            Some(self.log[x.0 as usize] as u64)
        }
    }

    /// `ξ^k` for the chosen primitive element ξ; `k` may be negative.
    pub fn xi_pow(&self, k: i64) -> Elem {
        let n = (self.q - 1) as i64;
        Elem(self.exp[k.rem_euclid(n) as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, x: Elem) -> Result<u64> {
        let l = self.log(x).ok_or(Error::ZeroInput("element"))?;
        let n = (self.q - 1) as u64;
        Ok(n / arith::gcd(l, n))
    }

    pub fn is_square(&self, x: Elem) -> bool {
        x.is_zero() || self.log[x.0 as usize] % 2 == 0
    }

    /// `ξ^{(q-1)/n}`, an element of order exactly `n`.
    pub fn primitive_root_of_unity(&self, n: u64) -> Result<Elem> {
        let qm1 = (self.q - 1) as u64;
        if n == 0 || qm1 % n != 0 {
            return Err(Error::Incompatible(format!(
                "no primitive {n}-th root of unity in F_{} ({n} does not divide {qm1})",
                self.q
            )));
        }
        Ok(self.xi_pow((qm1 / n) as i64))
    }

    /// JSON form: an integer for prime fields, else the ascending
    /// coefficient array.
    pub fn elem_json(&self, x: Elem) -> Value {
        if self.a == 1 {
            Value::from(x.0)
        } else {
            Value::from(self.coeffs(x))
        }
    }

    pub fn fmt_elem(&self, x: Elem) -> String {
        if self.a == 1 {
            return x.0.to_string();
        }
        let terms: Vec<String> = self
            .coeffs(x)
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, _) => c.to_string(),
                (1, 1) => "t".into(),
                (1, _) => format!("{c}t"),
                (_, 1) => format!("t^{i}"),
                _ => format!("{c}t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            format!("({})", terms.join("+"))
        }
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FieldSpec", 3)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("a", &self.a)?;
        st.serialize_field("defining", &self.defining)?;
        st.end()
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Embedding `F_{p^a} -> F_{p^b}` with `a | b`, fixed by the image of the
/// power-basis generator `t` of the base (taken as the lexicographically
/// smallest root of the base's defining polynomial in the extension; for a
/// prime base the generator is `1`).
#[derive(Clone)]
pub struct TowerMap {
    base: Field,
    ext: Field,
    generator_image: Elem,
    basis_images: Vec<Elem>,
    preimage: Vec<u32>,
}

impl TowerMap {
    pub fn new(base: &Field, ext: &Field) -> Result<TowerMap> {
        if base.p != ext.p || ext.a % base.a != 0 {
            return Err(Error::Incompatible(format!(
                "F_{} is not a subfield of F_{}",
                base.q, ext.q
            )));
        }
        let generator_image = if base.a == 1 {
            Elem::ONE
        } else {
            let root = ext.elements_lex().into_iter().find(|&y| {
                let mut acc = Elem::ZERO;
                for &c in base.defining.iter().rev() {
                    acc = ext.add(ext.mul(acc, y), Elem(c));
                }
                acc.is_zero()
            });
            root.ok_or_else(|| Error::Internal("defining polynomial has no root in the extension".into()))?
        };
        let basis_images: Vec<Elem> = if base.a == 1 {
            vec![Elem::ONE]
        } else {
            (0..base.a).map(|i| ext.pow(generator_image, i as u64)).collect()
        };
        let mut map = TowerMap {
            base: base.clone(),
            ext: ext.clone(),
            generator_image,
            basis_images,
            preimage: vec![u32::MAX; ext.q as usize],
        };
        for x in 0..base.q {
            let y = map.embed_unchecked(Elem(x));
            map.preimage[y.0 as usize] = x;
        }
        Ok(map)
    }

    pub fn base(&self) -> &Field {
        &self.base
    }
    pub fn ext(&self) -> &Field {
        &self.ext
    }
    pub fn generator_image(&self) -> Elem {
        self.generator_image
    }

    fn embed_unchecked(&self, x: Elem) -> Elem {
        let mut acc = Elem::ZERO;
        for (c, &img) in self.base.coeffs(x).into_iter().zip(&self.basis_images) {
            acc = self.ext.add(acc, self.ext.mul(Elem(c), img));
        }
        acc
    }

    pub fn embed(&self, x: Elem) -> Result<Elem> {
        if !self.base.contains(x) {
            return Err(Error::FieldMismatch);
        }
        Ok(self.embed_unchecked(x))
    }

    /// Inverse of [`embed`](Self::embed) on its image.
    pub fn pullback(&self, y: Elem) -> Option<Elem> {
        match self.preimage.get(y.0 as usize) {
            Some(&x) if x != u32::MAX => Some(Elem(x)),
            _ => None,
        }
    }
}

/// A square root of `embed(x)` in the quadratic extension, for a non-square
/// `x` of the base. Of the two roots `±α` the lexicographically smaller one
/// is returned.
pub fn sqrt_of(map: &TowerMap, x: Elem) -> Result<Elem> {
    let base = map.base();
    let ext = map.ext();
    if ext.a != 2 * base.a {
        return Err(Error::Incompatible("sqrt_of expects a quadratic extension".into()));
    }
    if x.is_zero() {
        return Err(Error::ZeroInput("radicand"));
    }
    if base.is_square(x) {
        return Err(Error::Incompatible(format!(
            "{} is a square in F_{}",
            base.fmt_elem(x),
            base.q
        )));
    }
    let y = map.embed(x)?;
    let l = ext.log(y).unwrap();
    debug_assert!(l % 2 == 0);
    let r = ext.xi_pow((l / 2) as i64);
    let s = ext.neg(r);
    Ok(if ext.lex_key(r) <= ext.lex_key(s) { r } else { s })
}
