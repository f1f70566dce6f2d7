//! Constacyclic codes as exponent vectors over a [`Factorization`].

use std::sync::{Arc, OnceLock};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::factorizer::{factor_constacyclic, Factorization, Params};
use crate::gf::{Elem, Field};
use crate::poly::{self, Poly};

/// Above this length intersections are computed from generators only.
pub const RANK_CHECK_LIMIT: u64 = 128;

/// Default cap on `q^dim` for exhaustive codeword enumeration.
pub const DEFAULT_DISTANCE_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct ConstacyclicCode {
    fact: Arc<Factorization>,
    exps: Vec<u64>,
    generator: OnceLock<Poly>,
}

impl PartialEq for ConstacyclicCode {
    fn eq(&self, other: &ConstacyclicCode) -> bool {
        self.fact.field() == other.fact.field()
            && self.length() == other.length()
            && self.lambda() == other.lambda()
            && self.generator() == other.generator()
    }
}

impl ConstacyclicCode {
    pub fn new(fact: Arc<Factorization>, exps: Vec<u64>) -> Result<ConstacyclicCode> {
        if exps.len() != fact.factors().len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} exponents, got {}",
                fact.factors().len(),
                exps.len()
            )));
        }
        let pn = fact.multiplicity();
        if let Some(e) = exps.iter().find(|&&e| e > pn) {
            return Err(Error::InvalidParameter(format!("exponent {e} exceeds p^n = {pn}")));
        }
        Ok(ConstacyclicCode { fact, exps, generator: OnceLock::new() })
    }

    pub fn factorization(&self) -> &Factorization {
        &self.fact
    }
    pub fn factorization_arc(&self) -> &Arc<Factorization> {
        &self.fact
    }
    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }
    pub fn field(&self) -> &Field {
        self.fact.field()
    }
    pub fn lambda(&self) -> Elem {
        self.fact.lambda()
    }
    pub fn length(&self) -> u64 {
        self.fact.length()
    }

    /// `g = Π F_i^{ε_i}`.
    pub fn generator(&self) -> &Poly {
        self.generator.get_or_init(|| self.power_product(|i| self.exps[i]))
    }

    fn power_product(&self, exp: impl Fn(usize) -> u64) -> Poly {
        let field = self.field();
        let mut acc = Poly::one(field);
        for (i, f) in self.fact.factors().iter().enumerate() {
            let e = exp(i);
            if e > 0 {
                acc = &acc * &f.pow(e);
            }
        }
        acc
    }

    /// `h = (X^N - λ)/g`.
    pub fn check_polynomial(&self) -> Poly {
        let pn = self.fact.multiplicity();
        self.power_product(|i| pn - self.exps[i])
    }

    pub fn dim(&self) -> u64 {
        let deg: u64 = self
            .fact
            .factors()
            .iter()
            .zip(&self.exps)
            .map(|(f, &e)| f.deg() as u64 * e)
            .sum();
        self.length() - deg
    }

    /// Generator of the dual computed directly as the reciprocal `h*`.
    pub fn dual_generator_direct(&self) -> Result<Poly> {
        self.check_polynomial().reciprocal()
    }

    /// The dual code, a `λ^{-1}`-constacyclic code with exponents
    /// `ε⊥_{σ(i)} = p^n - ε_i` for the reciprocal pairing `σ`.
    pub fn dual(&self) -> Result<ConstacyclicCode> {
        let field = self.field();
        let inv = field.inv(self.lambda())?;
        let target = if inv == self.lambda() {
            Arc::clone(&self.fact)
        } else {
            Arc::new(factor_constacyclic(self.fact.params(), inv)?)
        };
        let sigma = reciprocal_pairing(&self.fact, &target)?;
        let pn = self.fact.multiplicity();
        let mut exps = vec![0; sigma.len()];
        for (i, &s) in sigma.iter().enumerate() {
            exps[s] = pn - self.exps[i];
        }
        let d = ConstacyclicCode::new(target, exps)?;
        if d.generator() != &self.dual_generator_direct()? {
            return Err(Error::Internal("dual exponents disagree with h*".into()));
        }
        Ok(d)
    }

    /// Rows `X^i g(X)`, `0 <= i < dim`.
    pub fn generator_matrix(&self) -> Vec<Vec<Elem>> {
        let n = self.length() as usize;
        let g = self.generator();
        (0..self.dim() as usize)
            .map(|i| {
                let mut row = vec![Elem::ZERO; n];
                row[i..i + g.coeffs().len()].copy_from_slice(g.coeffs());
                row
            })
            .collect()
    }

    pub fn subspace(&self) -> LinearSubspace {
        LinearSubspace::from_rows(self.field(), self.length() as usize, self.generator_matrix())
            .expect("generator rows have the code length")
    }

    /// `m(X) g(X)` as a length-`N` vector.
    pub fn encode(&self, message: &[Elem]) -> Result<Vec<Elem>> {
        if message.len() as u64 != self.dim() {
            return Err(Error::InvalidParameter(format!(
                "message length {} != dimension {}",
                message.len(),
                self.dim()
            )));
        }
        let field = self.field();
        if let Some(x) = message.iter().find(|x| !field.contains(**x)) {
            return Err(Error::InvalidParameter(format!("{} is not a field element", x.0)));
        }
        let c = &Poly::new(field, message.to_vec()) * self.generator();
        let mut out = c.coeffs().to_vec();
        out.resize(self.length() as usize, Elem::ZERO);
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lambda_class": self.fact.class_index(),
            "exponents": self.exps,
            "generator_coeffs": self.generator().coeffs_json(),
            "dim": self.dim(),
        })
    }
}

/// `σ(i)`: index in `to` of the reciprocal of factor `i` of `from`.
pub fn reciprocal_pairing(from: &Factorization, to: &Factorization) -> Result<Vec<usize>> {
    from.factors()
        .iter()
        .map(|f| {
            let r = f.reciprocal()?;
            to.index_of(&r)
                .ok_or_else(|| Error::Internal(format!("reciprocal {r} of {f} is not a factor")))
        })
        .collect()
}

/// Row space over `F_q` in reduced row-echelon form.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSubspace {
    field: Field,
    n: usize,
    rows: Vec<Vec<Elem>>,
}

impl LinearSubspace {
    pub fn from_rows(field: &Field, n: usize, mut rows: Vec<Vec<Elem>>) -> Result<LinearSubspace> {
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Incompatible("row length differs from the ambient length".into()));
        }
        let mut rank = 0;
        for col in 0..n {
            let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, piv);
            let inv = field.inv(rows[rank][col])?;
            for x in rows[rank].iter_mut() {
                *x = field.mul(*x, inv);
            }
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == rank || row[col].is_zero() {
                    continue;
                }
                let c = field.neg(row[col]);
                for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                    if !pv.is_zero() {
                        *x = field.add(*x, field.mul(c, pv));
                    }
                }
            }
            rank += 1;
        }
        rows.truncate(rank);
        Ok(LinearSubspace { field: field.clone(), n, rows })
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn len(&self) -> usize {
        self.n
    }
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn sum(&self, other: &LinearSubspace) -> Result<LinearSubspace> {
        if self.field != other.field || self.n != other.n {
            return Err(Error::Incompatible("subspaces of different ambient spaces".into()));
        }
        let rows = self.rows.iter().chain(&other.rows).cloned().collect();
        LinearSubspace::from_rows(&self.field, self.n, rows)
    }

    pub fn intersection_dim(&self, other: &LinearSubspace) -> Result<usize> {
        Ok(self.dim() + other.dim() - self.sum(other)?.dim())
    }
}

/// `dim(C1 ∩ C2)`. For codes with the same `λ` this is `N - deg lcm(g1, g2)`;
/// at small lengths the rank of the stacked bases is computed as well and
/// both values must agree.
pub fn intersection_dim(c1: &ConstacyclicCode, c2: &ConstacyclicCode) -> Result<u64> {
    if c1.field() != c2.field() || c1.length() != c2.length() {
        return Err(Error::Incompatible("codes differ in field or length".into()));
    }
    let n = c1.length();
    let rank_path = || -> Result<u64> { Ok(c1.subspace().intersection_dim(&c2.subspace())? as u64) };
    if c1.lambda() != c2.lambda() {
        return rank_path();
    }
    let l = c1.generator().lcm(c2.generator())?;
    let by_lcm = n - l.deg() as u64;
    if n <= RANK_CHECK_LIMIT {
        let by_rank = rank_path()?;
        if by_rank != by_lcm {
            return Err(Error::Internal(format!("intersection: lcm gives {by_lcm}, rank gives {by_rank}")));
        }
    }
    Ok(by_lcm)
}

/// `C ∩ C⊥ = {0}`. Codes with `λ ∉ {1, -1}` are always LCD; the
/// intersection is still computed at small lengths.
pub fn is_lcd(code: &ConstacyclicCode) -> Result<bool> {
    let field = code.field();
    let lam = code.lambda();
    let d = code.dual()?;
    if lam == Elem::ONE || lam == field.neg(Elem::ONE) {
        return Ok(intersection_dim(code, &d)? == 0);
    }
    if code.length() <= RANK_CHECK_LIMIT && intersection_dim(code, &d)? != 0 {
        return Err(Error::Internal("constacyclic code with λ ≠ ±1 meets its dual".into()));
    }
    Ok(true)
}

/// How the factors of `X^N - λ`, `λ = ±1`, pair under reciprocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingStructure {
    pub self_reciprocal: Vec<usize>,
    pub pairs: Vec<(usize, usize)>,
}

pub fn pairing_structure(fact: &Factorization) -> Result<PairingStructure> {
    let sigma = reciprocal_pairing(fact, fact)?;
    let mut self_reciprocal = Vec::new();
    let mut pairs = Vec::new();
    for (i, &s) in sigma.iter().enumerate() {
        if sigma[s] != i {
            return Err(Error::Internal("reciprocal pairing is not an involution".into()));
        }
        if s == i {
            self_reciprocal.push(i);
        } else if i < s {
            pairs.push((i, s));
        }
    }
    Ok(PairingStructure { self_reciprocal, pairs })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    LcdCyclic,
    LcdNegacyclic,
    SelfDualNegacyclic,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::LcdCyclic => "lcd-cyclic",
            Family::LcdNegacyclic => "lcd-negacyclic",
            Family::SelfDualNegacyclic => "selfdual-negacyclic",
        }
    }
    fn lambda(self, field: &Field) -> Elem {
        match self {
            Family::LcdCyclic => Elem::ONE,
            _ => field.neg(Elem::ONE),
        }
    }
}

/// Closed-form count for a family and the case label it comes from.
pub fn family_formula(params: &Params, family: Family) -> Result<(u128, &'static str)> {
    let prof = crate::cosets::order_profile(params.q(), params.ell, params.m)?;
    let e = prof.e as u32;
    let f = prof.f;
    let q1 = params.q() % 4 == 1;
    let two = |k: u32| -> u128 { 1u128.checked_shl(k).unwrap_or(0) };
    Ok(match family {
        Family::LcdCyclic if f % 2 == 1 => (two(e + 2), "f odd: 2^(e+2)"),
        Family::LcdCyclic => (two(2 * (e + 1)), "f even: 2^(2(e+1))"),
        Family::LcdNegacyclic if q1 => (two(e + 1), "q ≡ 1 (mod 4): 2^(e+1)"),
        Family::LcdNegacyclic if f % 2 == 1 => (two(1 + e / 2), "q ≡ 3 (mod 4), f odd: 2^(1+e/2)"),
        Family::LcdNegacyclic if f % 4 == 2 => (two(1 + 2 * e), "q ≡ 3 (mod 4), f ≡ 2 (mod 4): 2^(1+2e)"),
        Family::LcdNegacyclic => (two(1 + e), "q ≡ 3 (mod 4), f ≡ 0 (mod 4): 2^(1+e)"),
        Family::SelfDualNegacyclic if q1 => (
            (params.pn() as u128 + 1).checked_pow(e + 1).unwrap_or(0),
            "q ≡ 1 (mod 4): (p^n+1)^(e+1)",
        ),
        Family::SelfDualNegacyclic => (0, "q ≡ 3 (mod 4): none exist"),
    })
}

/// Factorization underlying a family (`X^N - 1` or `X^N + 1`).
pub fn family_factorization(params: &Params, family: Family) -> Result<Arc<Factorization>> {
    let field = params.field()?;
    Ok(Arc::new(factor_constacyclic(params, family.lambda(&field))?))
}

/// Number of codes in `family` read off the reciprocal pairing, without
/// listing them.
pub fn family_count(fact: &Factorization, family: Family) -> Result<u128> {
    let pairing = pairing_structure(fact)?;
    let units = (pairing.self_reciprocal.len() + pairing.pairs.len()) as u32;
    Ok(match family {
        Family::LcdCyclic | Family::LcdNegacyclic => 1u128.checked_shl(units).unwrap_or(0),
        Family::SelfDualNegacyclic if !pairing.self_reciprocal.is_empty() => 0,
        Family::SelfDualNegacyclic => {
            (fact.multiplicity() as u128 + 1).checked_pow(pairing.pairs.len() as u32).unwrap_or(0)
        }
    })
}

/// Streams every code of `family`; `visit` returns `false` to stop early.
/// Returns the number of codes visited.
pub fn for_each_in_family(
    fact: &Arc<Factorization>,
    family: Family,
    mut visit: impl FnMut(ConstacyclicCode) -> bool,
) -> Result<u64> {
    let pairing = pairing_structure(fact)?;
    let pn = fact.multiplicity();
    let k = fact.factors().len();
    let mut count = 0u64;
    match family {
        Family::LcdCyclic | Family::LcdNegacyclic => {
            // every self-reciprocal factor and every reciprocal pair is
            // either fully in or fully out of the generator
            let units: Vec<Vec<usize>> = pairing
                .self_reciprocal
                .iter()
                .map(|&i| vec![i])
                .chain(pairing.pairs.iter().map(|&(i, j)| vec![i, j]))
                .collect();
            if units.len() >= 64 {
                return Err(Error::BudgetExceeded(format!("2^{} codes", units.len())));
            }
            for mask in 0u64..(1u64 << units.len()) {
                let mut exps = vec![0u64; k];
                for (b, unit) in units.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        for &i in unit {
                            exps[i] = pn;
                        }
                    }
                }
                count += 1;
                if !visit(ConstacyclicCode::new(Arc::clone(fact), exps)?) {
                    break;
                }
            }
        }
        Family::SelfDualNegacyclic => {
            if !pairing.self_reciprocal.is_empty() {
                return Ok(0);
            }
            let mut digits = vec![0u64; pairing.pairs.len()];
            loop {
                let mut exps = vec![0u64; k];
                for (&(i, j), &d) in pairing.pairs.iter().zip(&digits) {
                    exps[i] = d;
                    exps[j] = pn - d;
                }
                count += 1;
                if !visit(ConstacyclicCode::new(Arc::clone(fact), exps)?) {
                    break;
                }
                let mut pos = 0;
                while pos < digits.len() {
                    digits[pos] += 1;
                    if digits[pos] <= pn {
                        break;
                    }
                    digits[pos] = 0;
                    pos += 1;
                }
                if pos == digits.len() {
                    break;
                }
            }
        }
    }
    Ok(count)
}

/// Result of a family enumeration.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub family: Family,
    pub factorization: Arc<Factorization>,
    pub codes: Vec<ConstacyclicCode>,
    /// Value of the closed-form count.
    pub formula: u128,
    pub case: &'static str,
}

impl Enumeration {
    pub fn count(&self) -> u64 {
        self.codes.len() as u64
    }
    pub fn matches_formula(&self) -> bool {
        self.codes.len() as u128 == self.formula
    }
}

fn enumerate_family(params: &Params, family: Family, cap: usize) -> Result<Enumeration> {
    let fact = family_factorization(params, family)?;
    let (formula, case) = family_formula(params, family)?;
    let mut codes = Vec::new();
    let mut over = false;
    for_each_in_family(&fact, family, |c| {
        if codes.len() >= cap {
            over = true;
            return false;
        }
        codes.push(c);
        true
    })?;
    if over {
        return Err(Error::BudgetExceeded(format!("more than {cap} {} codes", family.name())));
    }
    Ok(Enumeration { family, factorization: fact, codes, formula, case })
}

pub fn enumerate_lcd_cyclic(params: &Params, cap: usize) -> Result<Enumeration> {
    enumerate_family(params, Family::LcdCyclic, cap)
}

pub fn enumerate_lcd_negacyclic(params: &Params, cap: usize) -> Result<Enumeration> {
    enumerate_family(params, Family::LcdNegacyclic, cap)
}

pub fn enumerate_self_dual_negacyclic(params: &Params, cap: usize) -> Result<Enumeration> {
    enumerate_family(params, Family::SelfDualNegacyclic, cap)
}

/// Number of codewords of each Hamming weight `0..=N`, by enumerating all
/// `q^dim` codewords.
pub fn weight_enumerator(code: &ConstacyclicCode, budget: u64) -> Result<Vec<u64>> {
    let field = code.field();
    let q = field.order();
    let dim = code.dim() as u32;
    let total = q.checked_pow(dim).filter(|&t| t <= budget).ok_or_else(|| {
        Error::BudgetExceeded(format!("{q}^{dim} codewords exceed the budget of {budget}"))
    })?;
    let n = code.length() as usize;
    let p = field.characteristic();
    // additive generators: t^j · row_i, one F_p digit each
    let rows = code.generator_matrix();
    let mut steps: Vec<Vec<Elem>> = Vec::new();
    for row in &rows {
        for j in 0..field.degree() {
            let s = Elem(p.pow(j) as u32);
            steps.push(row.iter().map(|&x| field.mul(s, x)).collect());
        }
    }
    let mut counts = vec![0u64; n + 1];
    let mut word = vec![Elem::ZERO; n];
    let mut digits = vec![0u64; steps.len()];
    counts[0] += 1;
    for _ in 1..total {
        let mut pos = 0;
        loop {
            for (w, &s) in word.iter_mut().zip(&steps[pos]) {
                *w = field.add(*w, s);
            }
            digits[pos] += 1;
            if digits[pos] < p {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
        counts[word.iter().filter(|x| !x.is_zero()).count()] += 1;
    }
    Ok(counts)
}

/// Minimum Hamming weight of a nonzero codeword.
pub fn min_distance_exhaustive(code: &ConstacyclicCode, budget: u64) -> Result<u64> {
    if code.dim() == 0 {
        return Err(Error::Incompatible("the zero code has no nonzero codewords".into()));
    }
    let w = weight_enumerator(code, budget)?;
    Ok(w.iter().enumerate().skip(1).find(|(_, &c)| c > 0).map(|(i, _)| i as u64).unwrap())
}

/// Product of all factors raised to the given exponents; a convenience for
/// building codes from explicit generator data.
pub fn generator_from_exponents(fact: &Factorization, exps: &[u64]) -> Poly {
    let field = fact.field();
    let parts: Vec<Poly> = fact.factors().iter().zip(exps).map(|(f, &e)| f.pow(e)).collect();
    poly::product(field, &parts)
}
