//! Multiplicative orders and `q`-cyclotomic cosets modulo `ℓ^m`.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith;
use crate::error::{invalid, Error, Result};

/// Least `k >= 1` with `q^k ≡ 1 (mod modulus)`.
pub fn mult_order(q: u64, modulus: u64) -> Result<u64> {
    if modulus == 0 {
        return invalid("modulus must be positive");
    }
    if modulus != 1 && arith::gcd(q, modulus) != 1 {
        return Err(Error::Incompatible(format!("gcd({q}, {modulus}) != 1")));
    }
    Ok(arith::order_mod(q, modulus))
}

/// Order data of `q` modulo powers of `ℓ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderProfile {
    pub q: u64,
    pub ell: u64,
    pub m: u32,
    /// `ord_ℓ(q)`.
    pub f: u64,
    /// `q^f = 1 + ℓ^s t` with `ℓ ∤ t`.
    pub s: u32,
    #[serde(serialize_with = "ser_big")]
    pub t: BigUint,
    /// `lambda[r-1] = λ(r)` for `1 <= r <= m`.
    pub lambda: Vec<u64>,
    /// `delta[r-1] = δ(r) = φ(ℓ^r)/λ(r)`.
    pub delta: Vec<u64>,
    pub e: u64,
    /// Smallest generator of `(Z/ℓ^m)^*`.
    pub g: u64,
}

fn ser_big<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x.to_u64() {
        Some(v) => s.serialize_u64(v),
        None => s.serialize_str(&x.to_string()),
    }
}

impl OrderProfile {
    pub fn modulus(&self) -> u64 {
        self.ell.pow(self.m)
    }
    pub fn lambda_of(&self, r: u32) -> u64 {
        self.lambda[r as usize - 1]
    }
    pub fn delta_of(&self, r: u32) -> u64 {
        self.delta[r as usize - 1]
    }
}

pub(crate) fn check_ell(q: u64, ell: u64, m: u32) -> Result<()> {
    if ell % 2 == 0 || !arith::is_prime(ell) {
        return invalid(format!("ℓ = {ell} is not an odd prime"));
    }
    if m == 0 {
        return invalid("m must be at least 1");
    }
    if q % ell == 0 {
        return invalid(format!("ℓ = {ell} divides q = {q}"));
    }
    if ell.checked_pow(m).is_none_or(|v| v > 1 << 24) {
        return invalid(format!("ℓ^m = {ell}^{m} is too large"));
    }
    Ok(())
}

pub fn order_profile(q: u64, ell: u64, m: u32) -> Result<OrderProfile> {
    check_ell(q, ell, m)?;
    let f = mult_order(q, ell)?;
    let qf = BigUint::from(q).pow(f as u32) - 1u32;
    let big_ell = BigUint::from(ell);
    let mut t = qf;
    let mut s = 0u32;
    while (&t % &big_ell) == BigUint::from(0u32) {
        t /= &big_ell;
        s += 1;
    }
    let mut lambda = Vec::with_capacity(m as usize);
    let mut delta = Vec::with_capacity(m as usize);
    for r in 1..=m {
        let lam = f * ell.pow(r.saturating_sub(s));
        let direct = mult_order(q, ell.pow(r))?;
        if lam != direct {
            return Err(Error::Internal(format!(
                "order formula gives {lam} but ord_{}({q}) = {direct}",
                ell.pow(r)
            )));
        }
        lambda.push(lam);
        delta.push(arith::phi_prime_power(ell, r) / lam);
    }
    let e = delta.iter().sum();
    Ok(OrderProfile { q, ell, m, f, s, t, lambda, delta, e, g: unit_group_generator(ell, m) })
}

/// Smallest positive generator of `(Z/ℓ^m)^*`.
pub fn unit_group_generator(ell: u64, m: u32) -> u64 {
    let modulus = ell.pow(m);
    let phi = arith::phi_prime_power(ell, m);
    (2..modulus)
        .find(|&g| g % ell != 0 && arith::order_mod(g, modulus) == phi)
        .unwrap_or(1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coset {
    /// Smallest member; the lookup key.
    pub rep: u64,
    /// `ℓ^{m-r} g^k`, or 0 for the zero coset.
    pub structured_rep: u64,
    pub r: u32,
    pub k: u64,
    /// Orbit order starting at the structured representative.
    pub members: Vec<u64>,
    /// For even `f`: the two `q²`-cosets `D_ρ` and `D_{ρq}`.
    pub split: Option<[Vec<u64>; 2]>,
}

impl Coset {
    pub fn len(&self) -> usize {
        self.members.len()
    }
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
    pub fn contains(&self, x: u64) -> bool {
        self.members.contains(&x)
    }
    pub fn sorted_members(&self) -> Vec<u64> {
        let mut v = self.members.clone();
        v.sort_unstable();
        v
    }
}

#[derive(Clone, Debug)]
pub struct CosetTable {
    pub profile: OrderProfile,
    /// `C_{ρ_0}, C_{ρ_1}, ..., C_{ρ_e}` ordered by `(r, k)`.
    pub cosets: Vec<Coset>,
    coset_of: Vec<usize>,
}

fn orbit(start: u64, mult: u64, modulus: u64) -> Vec<u64> {
    let mut out = vec![start];
    let mut cur = (start as u128 * mult as u128 % modulus as u128) as u64;
    while cur != start {
        out.push(cur);
        cur = (cur as u128 * mult as u128 % modulus as u128) as u64;
    }
    out
}

pub fn coset_table(q: u64, ell: u64, m: u32) -> Result<CosetTable> {
    let profile = order_profile(q, ell, m)?;
    let modulus = profile.modulus();
    let q2 = (q as u128 * q as u128 % modulus as u128) as u64;
    let f_even = profile.f % 2 == 0;
    let mut cosets = vec![Coset {
        rep: 0,
        structured_rep: 0,
        r: 0,
        k: 0,
        members: vec![0],
        split: None,
    }];
    for r in 1..=m {
        let base = ell.pow(m - r);
        for k in 0..profile.delta_of(r) {
            let rho = (base as u128 * arith::pow_mod(profile.g, k, modulus) as u128 % modulus as u128) as u64;
            let members = orbit(rho, q, modulus);
            let split = if f_even {
                let rho_q = (rho as u128 * q as u128 % modulus as u128) as u64;
                Some([orbit(rho, q2, modulus), orbit(rho_q, q2, modulus)])
            } else {
                None
            };
            cosets.push(Coset {
                rep: *members.iter().min().unwrap(),
                structured_rep: rho,
                r,
                k,
                members,
                split,
            });
        }
    }

    let mut coset_of = vec![usize::MAX; modulus as usize];
    for (i, c) in cosets.iter().enumerate() {
        for &x in &c.members {
            if coset_of[x as usize] != usize::MAX {
                return Err(Error::Internal(format!("{x} lies in two cosets")));
            }
            coset_of[x as usize] = i;
        }
        let expect = if c.r == 0 { 1 } else { profile.lambda_of(c.r) };
        if c.len() as u64 != expect {
            return Err(Error::Internal(format!("coset of {} has size {}", c.structured_rep, c.len())));
        }
        if let Some([d1, d2]) = &c.split {
            let all: BTreeSet<u64> = d1.iter().chain(d2).copied().collect();
            if d1.len() != d2.len() || all.len() != c.len() || !d1.iter().all(|x| c.contains(*x)) {
                return Err(Error::Internal(format!("bad q²-splitting of the coset of {}", c.structured_rep)));
            }
        }
    }
    if coset_of.contains(&usize::MAX) {
        return Err(Error::Internal("cosets do not cover Z/ℓ^m".into()));
    }
    Ok(CosetTable { profile, cosets, coset_of })
}

impl CosetTable {
    pub fn len(&self) -> usize {
        self.cosets.len()
    }
    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }
    pub fn modulus(&self) -> u64 {
        self.profile.modulus()
    }
    /// Index of the coset containing `x mod ℓ^m`.
    pub fn coset_of(&self, x: u64) -> usize {
        self.coset_of[(x % self.modulus()) as usize]
    }

    /// `i ↦` index of the coset containing `-ρ_i`.
    pub fn negation_coset_map(&self) -> Vec<usize> {
        let md = self.modulus();
        self.cosets.iter().map(|c| self.coset_of((md - c.rep) % md)).collect()
    }

    /// All `q²`-cyclotomic cosets: for odd `f` these are the `q`-cosets.
    pub fn q2_cosets(&self) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        for c in &self.cosets {
            match &c.split {
                Some([a, b]) => {
                    out.push(a.clone());
                    out.push(b.clone());
                }
                None => out.push(c.members.clone()),
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let cosets: Vec<Value> = self
            .cosets
            .iter()
            .map(|c| {
                let mut v = json!({
                    "rep": c.rep,
                    "structured_rep": c.structured_rep,
                    "r": c.r,
                    "k": c.k,
                    "members": c.members,
                });
                if let Some(s) = &c.split {
                    v["split"] = json!(s);
                }
                v
            })
            .collect();
        json!({ "profile": self.profile, "cosets": cosets })
    }
}
