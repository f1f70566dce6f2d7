//! `n`-equivalence on `F_q^*`: `λ ~_n μ` iff `a^n λ = μ` for some `a`.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::arith;
use crate::codes::ConstacyclicCode;
use crate::error::{Error, Result};
use crate::factorizer::{factor_constacyclic, Params};
use crate::gf::{Elem, Field};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceClass {
    pub modulus: u64,
    pub field: Field,
    /// `ξ^{j p^n}`.
    pub rep: Elem,
    pub index: u64,
}

impl EquivalenceClass {
    pub fn to_json(&self) -> Value {
        json!({
            "index": self.index,
            "representative": self.field.elem_json(self.rep),
            "xi_exponent": self.field.log(self.rep),
        })
    }
}

fn nonzero(x: Elem, what: &'static str) -> Result<()> {
    if x.is_zero() {
        Err(Error::ZeroInput(what))
    } else {
        Ok(())
    }
}

/// Number of `n`-equivalence classes, `gcd(n, q-1)`.
pub fn class_count(field: &Field, n: u64) -> u64 {
    arith::gcd(n, field.order() - 1)
}

pub fn are_equivalent(field: &Field, lambda: Elem, mu: Elem, n: u64) -> Result<bool> {
    nonzero(lambda, "λ")?;
    nonzero(mu, "μ")?;
    let d = (field.order() - 1) / class_count(field, n);
    let ratio = field.div(mu, lambda)?;
    Ok(field.pow(ratio, d) == Elem::ONE)
}

/// Smallest `a` (lexicographic element order) with `a^n λ = μ`.
pub fn witness_scalar(field: &Field, lambda: Elem, mu: Elem, n: u64) -> Result<Option<Elem>> {
    nonzero(lambda, "λ")?;
    nonzero(mu, "μ")?;
    if !are_equivalent(field, lambda, mu, n)? {
        return Ok(None);
    }
    let target = field.div(mu, lambda)?;
    let found = field
        .elements_lex()
        .into_iter()
        .find(|&a| !a.is_zero() && field.pow(a, n) == target);
    match found {
        Some(a) => Ok(Some(a)),
        None => Err(Error::Internal("equivalent pair without a witness".into())),
    }
}

/// Class representatives `ξ^{j p^n}`, `0 <= j < gcd(2ℓ^m p^n, q-1)`.
pub fn transversal(params: &Params) -> Result<Vec<EquivalenceClass>> {
    let field = params.field()?;
    let n_len = params.length();
    let pn = params.pn();
    Ok((0..class_count(&field, n_len))
        .map(|j| EquivalenceClass {
            modulus: n_len,
            field: field.clone(),
            rep: field.xi_pow(((j as u128 * pn as u128) % (field.order() - 1) as u128) as i64),
            index: j,
        })
        .collect())
}

/// The index `j` of the class containing `λ`.
pub fn class_of(params: &Params, lambda: Elem) -> Result<u64> {
    let field = params.field()?;
    nonzero(lambda, "λ")?;
    let count = class_count(&field, params.length());
    let l = field.log(lambda).ok_or(Error::ZeroInput("λ"))? % count;
    let pn_inv = arith::inv_mod(params.pn() % count, count).unwrap_or(0);
    Ok(if count == 1 { 0 } else { (l as u128 * pn_inv as u128 % count as u128) as u64 })
}

/// `φ_a`: sends the `μ`-constacyclic code `C` to the `λ`-constacyclic code
/// generated by `ĝ(aX)`, where `λ = μ a^{-N}`.
pub fn apply_phi(code: &ConstacyclicCode, a: Elem) -> Result<ConstacyclicCode> {
    nonzero(a, "scaling factor")?;
    let fact = code.factorization();
    let field = fact.field().clone();
    let mu = fact.lambda();
    let lambda = field.div(mu, field.pow(a, fact.params().length()))?;
    let target = if lambda == mu {
        Arc::clone(code.factorization_arc())
    } else {
        Arc::new(factor_constacyclic(fact.params(), lambda)?)
    };
    let mut exps = vec![0u64; target.factors().len()];
    for (f, &eps) in fact.factors().iter().zip(code.exponents()) {
        let image = f.scaled_monic(a)?;
        let idx = target.index_of(&image).ok_or_else(|| {
            Error::Internal(format!("φ image {image} is not a factor of X^N - λ"))
        })?;
        exps[idx] = eps;
    }
    ConstacyclicCode::new(target, exps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    fn brute_equivalent(f: &Field, l: Elem, m: Elem, n: u64) -> bool {
        (1..f.order() as u32).any(|a| f.sub(f.mul(l, f.pow(Elem(a), n)), m).is_zero())
    }

    #[test]
    fn examples() {
        let f7 = make_field(7, 1).unwrap();
        assert_eq!(class_count(&f7, 30), 6);
        for x in 1..7 {
            for y in 1..7 {
                assert_eq!(are_equivalent(&f7, Elem(x), Elem(y), 30).unwrap(), x == y);
            }
        }
        let f5 = make_field(5, 1).unwrap();
        assert!(are_equivalent(&f5, Elem(1), Elem(4), 6).unwrap());
        assert_eq!(witness_scalar(&f5, Elem(1), Elem(4), 6).unwrap(), Some(Elem(2)));
        assert_eq!(witness_scalar(&f5, Elem(3), Elem(3), 6).unwrap(), Some(Elem(1)));
        assert_eq!(witness_scalar(&f5, Elem(1), Elem(2), 6).unwrap(), None);
        assert!(are_equivalent(&f5, Elem(0), Elem(2), 6).is_err());
    }

    #[test]
    fn transversal_sizes() {
        let t = transversal(&Params::new(7, 1, 5, 1, 1).unwrap()).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].rep, Elem::ONE);
        let f7 = make_field(7, 1).unwrap();
        assert_eq!(t[1].rep, f7.xi_pow(7));
        assert_eq!(transversal(&Params::new(7, 1, 3, 1, 1).unwrap()).unwrap().len(), 6);
        assert_eq!(transversal(&Params::new(3, 1, 5, 1, 1).unwrap()).unwrap().len(), 2);
    }

    #[test]
    fn relation_matches_definition() {
        for q in [3u64, 5, 7, 9, 11, 13, 25] {
            let f = crate::gf::field_of_order(q).unwrap();
            for n in [1u64, 2, 6, 10, 18, 30, 42, 50, 66] {
                for x in 1..q as u32 {
                    for y in 1..q as u32 {
                        let eq = are_equivalent(&f, Elem(x), Elem(y), n).unwrap();
                        assert_eq!(eq, brute_equivalent(&f, Elem(x), Elem(y), n));
                        if let Some(a) = witness_scalar(&f, Elem(x), Elem(y), n).unwrap() {
                            assert_eq!(f.mul(f.pow(a, n), Elem(x)), Elem(y));
                        } else {
                            assert!(!eq);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn every_element_has_one_class() {
        for (p, a, ell, m, n) in [(7, 1, 3, 1, 1), (13, 1, 3, 2, 0), (3, 2, 5, 1, 2), (11, 1, 5, 1, 1)] {
            let params = Params::new(p, a, ell, m, n).unwrap();
            let f = params.field().unwrap();
            let t = transversal(&params).unwrap();
            for x in 1..f.order() as u32 {
                let hits: Vec<u64> = t
                    .iter()
                    .filter(|c| are_equivalent(&f, Elem(x), c.rep, params.length()).unwrap())
                    .map(|c| c.index)
                    .collect();
                assert_eq!(hits, vec![class_of(&params, Elem(x)).unwrap()]);
            }
        }
    }
}
