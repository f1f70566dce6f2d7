//! Generic factorization over `F_q`: squarefree decomposition, distinct-degree
//! splitting and Cantor-Zassenhaus equal-degree splitting. Shares nothing with
//! the closed-form constructions beyond polynomial arithmetic.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith;
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::poly::Poly;

/// Default seed for the randomized splitting step.
pub const DEFAULT_SEED: u64 = 0x5eed;

/// The linear map `h ↦ h^q mod f` on `F_q[X]/(f)`.
struct Frobenius {
    modulus: Poly,
    /// `rows[i] = X^{iq} mod f`, each of length `deg f`.
    rows: Vec<Vec<Elem>>,
}

impl Frobenius {
    fn new(f: &Poly) -> Frobenius {
        let field = f.field().clone();
        let n = f.deg();
        let xq = Poly::x(&field).pow_mod_u64(field.order(), f).unwrap();
        let mut rows = Vec::with_capacity(n);
        let mut cur = Poly::one(&field).rem_monic(f);
        for _ in 0..n {
            let mut row = cur.coeffs().to_vec();
            row.resize(n, Elem::ZERO);
            rows.push(row);
            cur = (&cur * &xq).rem_monic(f);
        }
        Frobenius { modulus: f.clone(), rows }
    }

    fn apply(&self, h: &Poly) -> Poly {
        let field = self.modulus.field();
        let n = self.rows.len();
        if field.degree() == 1 {
            let p = field.characteristic();
            let mut acc = vec![0u64; n];
            for (i, &c) in h.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (a, r) in acc.iter_mut().zip(&self.rows[i]) {
                    *a = (*a + c.0 as u64 * r.0 as u64) % p;
                }
            }
            return Poly::new(field, acc.into_iter().map(|x| Elem(x as u32)).collect());
        }
        let mut acc = vec![Elem::ZERO; n];
        for (i, &c) in h.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (a, r) in acc.iter_mut().zip(&self.rows[i]) {
                *a = field.add(*a, field.mul(c, *r));
            }
        }
        Poly::new(field, acc)
    }
}

/// `c^{1/p}` in `F_{p^a}`, i.e. `c^{p^{a-1}}`.
fn pth_root_elem(field: &Field, c: Elem) -> Elem {
    field.pow(c, field.order() / field.characteristic())
}

/// `g` with `g^p = f`, for `f` whose derivative vanishes.
fn pth_root(f: &Poly) -> Poly {
    let field = f.field();
    let p = field.characteristic() as usize;
    let c = f.coeffs().iter().step_by(p).map(|&c| pth_root_elem(field, c)).collect();
    Poly::new(field, c)
}

fn squarefree(f: &Poly) -> Result<Vec<(Poly, u64)>> {
    let field = f.field().clone();
    let p = field.characteristic();
    let mut out = Vec::new();
    if f.deg() == 0 {
        return Ok(out);
    }
    let d = f.derivative();
    if d.is_zero() {
        for (g, k) in squarefree(&pth_root(f))? {
            out.push((g, k * p));
        }
        return Ok(out);
    }
    let mut c = f.gcd(&d)?;
    let mut w = f.exact_div(&c)?;
    let mut i = 1u64;
    while w.deg() > 0 {
        let y = w.gcd(&c)?;
        let z = w.exact_div(&y)?;
        if z.deg() > 0 {
            out.push((z.monic_hat()?, i));
        }
        i += 1;
        c = c.exact_div(&y)?;
        w = y;
    }
    if c.deg() > 0 {
        for (g, k) in squarefree(&pth_root(&c.monic_hat()?))? {
            out.push((g, k * p));
        }
    }
    Ok(out)
}

/// Splits a squarefree monic `f` into products of irreducibles of equal degree.
fn distinct_degree(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let field = f.field().clone();
    let mut out = Vec::new();
    if f.deg() == 0 {
        return Ok(out);
    }
    let frob = Frobenius::new(f);
    let x = Poly::x(&field).rem_monic(f);
    let mut h = x.clone();
    let mut rest = f.clone();
    let mut d = 0;
    while 2 * (d + 1) <= rest.deg() {
        d += 1;
        h = frob.apply(&h);
        let g = rest.gcd(&(&h - &x))?;
        if g.deg() > 0 {
            rest = rest.exact_div(&g)?;
            out.push((g, d));
        }
    }
    if rest.deg() > 0 {
        let dd = rest.deg();
        out.push((rest, dd));
    }
    Ok(out)
}

fn random_poly(field: &Field, below: usize, rng: &mut ChaCha8Rng) -> Poly {
    let q = field.order() as u32;
    Poly::new(field, (0..below).map(|_| Elem(rng.gen_range(0..q))).collect())
}

/// Cantor-Zassenhaus splitting of a product of degree-`d` irreducibles.
fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) -> Result<()> {
    if f.deg() == d {
        out.push(f.clone());
        return Ok(());
    }
    let field = f.field().clone();
    let exp = (BigUint::from(field.order()).pow(d as u32) - 1u32) / 2u32;
    let one = Poly::one(&field);
    loop {
        let a = random_poly(&field, f.deg(), rng);
        if a.deg() == 0 {
            continue;
        }
        let g = f.gcd(&a)?;
        let g = if g.deg() > 0 && g.deg() < f.deg() {
            g
        } else {
            let b = a.pow_mod(&exp, f)?;
            f.gcd(&(&b - &one))?
        };
        if g.deg() > 0 && g.deg() < f.deg() {
            let h = f.exact_div(&g)?;
            equal_degree(&g, d, rng, out)?;
            equal_degree(&h, d, rng, out)?;
            return Ok(());
        }
    }
}

/// Complete factorization of `f` into monic irreducibles with multiplicities,
/// sorted canonically. The leading coefficient is dropped.
pub fn oracle_factor(f: &Poly, seed: u64) -> Result<Vec<(Poly, u64)>> {
    if f.is_zero() {
        return Err(Error::ZeroInput("polynomial"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<(Poly, u64)> = Vec::new();
    for (sf, k) in squarefree(&f.monic_hat()?)? {
        for (g, d) in distinct_degree(&sf)? {
            let mut irr = Vec::new();
            equal_degree(&g, d, &mut rng, &mut irr)?;
            out.extend(irr.into_iter().map(|p| (p, k)));
        }
    }
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    for w in out.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::Internal("repeated factor across squarefree parts".into()));
        }
    }
    Ok(out)
}

/// Irreducibility by the distinct-degree criterion: `f | X^{q^n} - X` and
/// `gcd(f, X^{q^d} - X) = 1` for every proper divisor `d` of `n = deg f`.
pub fn oracle_is_irreducible(f: &Poly) -> Result<bool> {
    let n = match f.degree() {
        None | Some(0) => return Err(Error::InvalidParameter("constant polynomial".into())),
        Some(n) => n,
    };
    if n == 1 {
        return Ok(true);
    }
    let f = f.monic_hat()?;
    let frob = Frobenius::new(&f);
    let x = Poly::x(f.field()).rem_monic(&f);
    let mut h = x.clone();
    for d in 1..=n {
        h = frob.apply(&h);
        if d < n && n % d == 0 && f.gcd(&(&h - &x))?.deg() > 0 {
            return Ok(false);
        }
    }
    Ok(h == x)
}

/// Number of monic irreducibles of degree `n` over `F_q` (Gauss's formula);
/// used to sanity-check the oracle on exhaustive enumerations.
pub fn count_irreducible(q: u64, n: u32) -> u64 {
    let mut total: i128 = 0;
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        let k = n / d;
        let primes = arith::prime_divisors(k as u64);
        let sq_free = primes.iter().all(|&r| (k as u64 / r) % r != 0);
        if !sq_free {
            continue;
        }
        let mu: i128 = if primes.len() % 2 == 0 { 1 } else { -1 };
        total += mu * (q as i128).pow(d);
    }
    (total / n as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn small_examples() {
        let f5 = make_field(5, 1).unwrap();
        let r = oracle_factor(&Poly::from_ints(&f5, &[-1, 0, 1]), 1).unwrap();
        assert_eq!(
            r,
            vec![(Poly::from_ints(&f5, &[1, 1]), 1), (Poly::from_ints(&f5, &[-1, 1]), 1)]
        );
        let f3 = make_field(3, 1).unwrap();
        let r = oracle_factor(&Poly::binomial(&f3, 30, Elem::ONE), 1).unwrap();
        assert_eq!(r.len(), 4);
        assert!(r.iter().all(|(_, k)| *k == 3));

        assert!(oracle_is_irreducible(&Poly::from_ints(&f5, &[3, 1])).unwrap());
        assert!(oracle_is_irreducible(&Poly::from_ints(&f3, &[1, 0, 1])).unwrap());
        assert!(!oracle_is_irreducible(&Poly::from_ints(&f3, &[-1, 0, 1])).unwrap());
        assert!(oracle_is_irreducible(&Poly::one(&f3)).is_err());
    }

    #[test]
    fn irreducible_counts_match_gauss() {
        for (p, a, n) in [(3u64, 1u32, 4u32), (5, 1, 3), (3, 2, 2), (7, 1, 2)] {
            let field = make_field(p, a).unwrap();
            let q = field.order();
            let total = q.pow(n);
            let mut found = 0;
            for idx in 0..total {
                let mut c: Vec<Elem> = (0..n).map(|i| Elem(((idx / q.pow(i)) % q) as u32)).collect();
                c.push(Elem::ONE);
                let f = Poly::new(&field, c);
                let irr = oracle_is_irreducible(&f).unwrap();
                assert_eq!(irr, f.is_irreducible());
                found += irr as u64;
            }
            assert_eq!(found, count_irreducible(q, n));
        }
    }

    #[test]
    fn extension_field_factoring() {
        let f9 = make_field(3, 2).unwrap();
        let f = Poly::binomial(&f9, 18, f9.primitive());
        let r = oracle_factor(&f, 3).unwrap();
        let mut prod = Poly::one(&f9);
        for (g, k) in &r {
            assert!(oracle_is_irreducible(g).unwrap());
            prod = &prod * &g.pow(*k);
        }
        assert_eq!(prod, f);
    }

    fn irreducible_strategy() -> impl Strategy<Value = Poly> {
        (1usize..5, any::<u64>()).prop_map(|(d, seed)| {
            let field = make_field(7, 1).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            loop {
                let mut c: Vec<Elem> = (0..d).map(|_| Elem(rng.gen_range(0..7))).collect();
                c.push(Elem::ONE);
                let f = Poly::new(&field, c);
                if f.is_irreducible() {
                    return f;
                }
            }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn products_round_trip(parts in prop::collection::vec((irreducible_strategy(), 1u64..9), 1..5), seed in any::<u64>()) {
            let field = make_field(7, 1).unwrap();
            let mut expect: Vec<(Poly, u64)> = Vec::new();
            for (f, k) in parts {
                match expect.iter_mut().find(|(g, _)| *g == f) {
                    Some(e) => e.1 += k,
                    None => expect.push((f, k)),
                }
            }
            expect.sort_by(|a, b| a.0.canonical_cmp(&b.0));
            let prod = expect.iter().fold(Poly::one(&field), |acc, (f, k)| &acc * &f.pow(*k));
            prop_assert_eq!(oracle_factor(&prod, seed).unwrap(), expect);
        }
    }
}
