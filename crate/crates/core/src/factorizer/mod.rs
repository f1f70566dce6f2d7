//! Closed-form factorizations of `X^N - λ`, `N = 2ℓ^m p^n`, over `F_q`.
//!
//! Every `λ` is first reduced to its class representative `ξ^{j p^n}`. The
//! representative's factor list comes from the cyclotomic data (minimal
//! polynomials of roots of unity of order `ℓ^m`) or from explicit binomials,
//! and the list for `λ` is obtained by the substitution `X ↦ cX` with
//! `c^N λ = ξ^{j p^n}`.

pub mod oracle;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;
use serde_json::{json, Value};

use crate::arith;
use crate::cosets::{self, CosetTable};
use crate::equivalence;
use crate::error::{invalid, Error, Result};
use crate::gf::ext::ExtField;
use crate::gf::{self, Elem, Field, TowerMap};
use crate::poly::{self, Poly};

pub use oracle::{oracle_factor, oracle_is_irreducible};

/// Largest code length accepted.
pub const MAX_LENGTH: u64 = 1 << 16;

/// `(p, a, ℓ, m, n)`: field `F_{p^a}`, length `2ℓ^m p^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Params {
    pub p: u64,
    pub a: u32,
    pub ell: u64,
    pub m: u32,
    pub n: u32,
}

impl Params {
    pub fn new(p: u64, a: u32, ell: u64, m: u32, n: u32) -> Result<Params> {
        gf::make_field(p, a)?;
        if ell == p {
            return invalid(format!("ℓ must differ from the characteristic {p}"));
        }
        let q = p.pow(a);
        cosets::check_ell(q, ell, m)?;
        let len = p
            .checked_pow(n)
            .and_then(|pn| ell.checked_pow(m).and_then(|lm| lm.checked_mul(pn).and_then(|x| x.checked_mul(2))));
        match len {
            Some(l) if l <= MAX_LENGTH => Ok(Params { p, a, ell, m, n }),
            _ => invalid(format!("length 2·{ell}^{m}·{p}^{n} exceeds the supported bound {MAX_LENGTH}")),
        }
    }

    pub fn from_q(q: u64, ell: u64, m: u32, n: u32) -> Result<Params> {
        match arith::prime_power(q) {
            Some((p, a)) => Params::new(p, a, ell, m, n),
            None => invalid(format!("{q} is not a prime power")),
        }
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.a)
    }
    pub fn ell_m(&self) -> u64 {
        self.ell.pow(self.m)
    }
    pub fn pn(&self) -> u64 {
        self.p.pow(self.n)
    }
    /// `N = 2ℓ^m p^n`.
    pub fn length(&self) -> u64 {
        2 * self.ell_m() * self.pn()
    }
    pub fn field(&self) -> Result<Field> {
        gf::make_field(self.p, self.a)
    }
    pub fn class_count(&self) -> u64 {
        arith::gcd(2 * self.ell_m(), self.q() - 1)
    }
    /// `gcd(ℓ, q-1) = 1`.
    pub fn coprime(&self) -> bool {
        (self.q() - 1) % self.ell != 0
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={} ℓ={} m={} n={} N={}", self.q(), self.ell, self.m, self.n, self.length())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Case {
    Cyclic,
    CoprimeA,
    CoprimeB1,
    CoprimeB2,
    DivI,
    DivIIA,
    DivIIB,
    DivIIIA,
    DivIIIB,
}

impl Case {
    pub fn tag(self) -> &'static str {
        match self {
            Case::Cyclic => "CYCLIC",
            Case::CoprimeA => "COPRIME-A",
            Case::CoprimeB1 => "COPRIME-B1",
            Case::CoprimeB2 => "COPRIME-B2",
            Case::DivI => "DIV-I",
            Case::DivIIA => "DIV-II.A",
            Case::DivIIB => "DIV-II.B",
            Case::DivIIIA => "DIV-III.A",
            Case::DivIIIB => "DIV-III.B",
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A named scalar used by a construction.
#[derive(Clone, Debug, PartialEq)]
pub struct AuxScalar {
    pub name: &'static str,
    pub field_order: u64,
    pub value: Value,
}

impl AuxScalar {
    fn new(name: &'static str, field: &Field, x: Elem) -> AuxScalar {
        AuxScalar { name, field_order: field.order(), value: field.elem_json(x) }
    }
}

#[derive(Clone, Debug)]
pub struct Factorization {
    params: Params,
    field: Field,
    lambda: Elem,
    class_index: u64,
    case: Case,
    factors: Vec<Poly>,
    aux: Vec<AuxScalar>,
}

impl PartialEq for Factorization {
    fn eq(&self, other: &Factorization) -> bool {
        self.params == other.params && self.lambda == other.lambda && self.factors == other.factors
    }
}

impl Factorization {
    pub fn params(&self) -> &Params {
        &self.params
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn lambda(&self) -> Elem {
        self.lambda
    }
    pub fn class_index(&self) -> u64 {
        self.class_index
    }
    pub fn case(&self) -> Case {
        self.case
    }
    /// Distinct monic irreducible factors in canonical order.
    pub fn factors(&self) -> &[Poly] {
        &self.factors
    }
    /// Common multiplicity `p^n`.
    pub fn multiplicity(&self) -> u64 {
        self.params.pn()
    }
    pub fn length(&self) -> u64 {
        self.params.length()
    }
    pub fn aux(&self) -> &[AuxScalar] {
        &self.aux
    }
    pub fn index_of(&self, f: &Poly) -> Option<usize> {
        self.factors.binary_search_by(|g| g.canonical_cmp(f)).ok()
    }
    /// `X^N - λ`.
    pub fn target(&self) -> Poly {
        Poly::binomial(&self.field, self.length() as usize, self.lambda)
    }

    /// Checks `Π F_i^{p^n} = X^N - λ` exactly.
    pub fn verify_product(&self) -> Result<()> {
        let radical = poly::product(&self.field, &self.factors);
        let full = radical.pow(self.multiplicity());
        if full != self.target() {
            return Err(Error::Internal(format!(
                "factor product differs from X^{} - {}",
                self.length(),
                self.field.fmt_elem(self.lambda)
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let aux: Vec<Value> = self
            .aux
            .iter()
            .map(|s| json!({"name": s.name, "field_order": s.field_order, "value": s.value}))
            .collect();
        let factors: Vec<Value> = self
            .factors
            .iter()
            .map(|f| json!({"coeffs": f.coeffs_json(), "degree": f.deg(), "multiplicity": self.multiplicity()}))
            .collect();
        json!({
            "q": self.params.q(),
            "ell": self.params.ell,
            "m": self.params.m,
            "p": self.params.p,
            "n": self.params.n,
            "N": self.length(),
            "lambda": self.field.elem_json(self.lambda),
            "lambda_class": self.class_index,
            "case": self.case.tag(),
            "aux": aux,
            "factors": factors,
        })
    }
}

/// Minimal polynomials of the roots of unity of order dividing `ℓ^m`.
#[derive(Debug)]
pub struct CyclotomicData {
    pub field: Field,
    pub table: CosetTable,
    /// `M_{ρ_i}` over `F_q`, aligned with `table.cosets`.
    pub minimal: Vec<Poly>,
    /// For even `f`: `(N_ρ, N_{ρq})` over `F_{q²}` for cosets `1..=e`.
    pub split: Option<Vec<(Poly, Poly)>>,
}

/// `F_{q²}` and the embedding `F_q ↪ F_{q²}`.
pub fn quadratic_extension(field: &Field) -> Result<Arc<TowerMap>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<TowerMap>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(m) = cache.lock().unwrap().get(&field.order()) {
        return Ok(m.clone());
    }
    let big = gf::make_field(field.characteristic(), 2 * field.degree())?;
    let map = Arc::new(TowerMap::new(field, &big)?);
    Ok(cache.lock().unwrap().entry(field.order()).or_insert(map).clone())
}

/// Coefficients of `Π (X - r)` over an [`ExtField`], as base-field values.
fn ext_root_product(ext: &ExtField, roots: &[&Poly]) -> Result<Poly> {
    let mut c: Vec<Poly> = vec![ext.one()];
    for r in roots {
        let nr = ext.neg(r);
        c.push(ext.zero());
        for i in (0..c.len()).rev() {
            let shifted = if i > 0 { c[i - 1].clone() } else { ext.zero() };
            c[i] = ext.add(&shifted, &ext.mul(&c[i], &nr));
        }
    }
    let coeffs = c
        .iter()
        .map(|x| {
            ext.to_base(x)
                .ok_or_else(|| Error::Internal("minimal polynomial coefficient outside the base field".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(ext.base(), coeffs))
}

fn build_cyclotomic(q: u64, ell: u64, m: u32) -> Result<CyclotomicData> {
    let field = gf::field_of_order(q)?;
    let table = cosets::coset_table(q, ell, m)?;
    let prof = &table.profile;
    let lm = prof.modulus();
    let lam_m = prof.lambda_of(m) as usize;
    let x_minus_1 = Poly::from_ints(&field, &[-1, 1]);

    let (minimal, split) = if prof.f % 2 == 1 {
        let ext = ExtField::new(&field, lam_m)?;
        let eta = ext.root_of_unity(lm)?;
        let powers = root_powers(&ext, &eta, lm);
        let mut minimal = Vec::with_capacity(table.len());
        for c in &table.cosets {
            let roots: Vec<&Poly> = c.members.iter().map(|&s| &powers[s as usize]).collect();
            minimal.push(ext_root_product(&ext, &roots)?);
        }
        (minimal, None)
    } else {
        let map = quadratic_extension(&field)?;
        let f2 = map.ext().clone();
        let ext = ExtField::new(&f2, lam_m / 2)?;
        let eta = ext.root_of_unity(lm)?;
        let powers = root_powers(&ext, &eta, lm);
        let mut minimal = vec![x_minus_1.clone()];
        let mut pairs = Vec::with_capacity(table.len() - 1);
        for c in &table.cosets[1..] {
            let [d1, d2] = c.split.as_ref().expect("even f splits every nonzero coset");
            let n1 = ext_root_product(&ext, &d1.iter().map(|&s| &powers[s as usize]).collect::<Vec<_>>())?;
            let n2 = ext_root_product(&ext, &d2.iter().map(|&s| &powers[s as usize]).collect::<Vec<_>>())?;
            minimal.push((&n1 * &n2).pullback(&map)?);
            pairs.push((n1, n2));
        }
        (minimal, Some(pairs))
    };

    let prod = poly::product(&field, &minimal);
    if prod != Poly::binomial(&field, lm as usize, Elem::ONE) {
        return Err(Error::Internal(format!("minimal polynomials do not multiply to X^{lm} - 1")));
    }
    Ok(CyclotomicData { field, table, minimal, split })
}

fn root_powers(ext: &ExtField, eta: &Poly, count: u64) -> Vec<Poly> {
    let mut out = Vec::with_capacity(count as usize);
    let mut cur = ext.one();
    for _ in 0..count {
        out.push(cur.clone());
        cur = ext.mul(&cur, eta);
    }
    out
}

/// Cached cyclotomic data for `(q, ℓ, m)`.
pub fn cyclotomic_data(q: u64, ell: u64, m: u32) -> Result<Arc<CyclotomicData>> {
    type Slot = Arc<OnceLock<std::result::Result<Arc<CyclotomicData>, Error>>>;
    type Cache = Mutex<HashMap<(u64, u64, u32), Slot>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let slot = CACHE
        .get_or_init(Default::default)
        .lock()
        .unwrap()
        .entry((q, ell, m))
        .or_default()
        .clone();
    slot.get_or_init(|| build_cyclotomic(q, ell, m).map(Arc::new)).clone()
}

/// `M_{ρ_0}, ..., M_{ρ_e}` over `F_q`.
pub fn minimal_polys(q: u64, ell: u64, m: u32) -> Result<Vec<Poly>> {
    Ok(cyclotomic_data(q, ell, m)?.minimal.clone())
}

/// `X - 1, N_{ρ_1}, N_{ρ_1 q}, ..., N_{ρ_e}, N_{ρ_e q}` over `F_{q²}`; only
/// defined when `f = ord_ℓ(q)` is even.
pub fn minimal_polys_q2(q: u64, ell: u64, m: u32) -> Result<Vec<Poly>> {
    let data = cyclotomic_data(q, ell, m)?;
    let pairs = data.split.as_ref().ok_or_else(|| {
        Error::Incompatible(format!(
            "ord_{ell}({q}) is odd; the q-cyclotomic factorization is already the q²-one"
        ))
    })?;
    let f2 = pairs[0].0.field().clone();
    let mut out = vec![Poly::from_ints(&f2, &[-1, 1])];
    for (a, b) in pairs {
        out.push(a.clone());
        out.push(b.clone());
    }
    Ok(out)
}

/// Factor count the construction for `case` must produce.
pub fn predicted_factor_count(params: &Params, case: Case, class_index: u64) -> Result<u64> {
    let prof = cosets::order_profile(params.q(), params.ell, params.m)?;
    let e = prof.e;
    let ell = params.ell;
    let m = params.m;
    let u = arith::valuation(params.q() - 1, ell);
    let v = m.min(u);
    Ok(match case {
        Case::Cyclic | Case::CoprimeA => 2 * (e + 1),
        Case::CoprimeB1 => e + 1,
        Case::CoprimeB2 => 2 * e + 1,
        Case::DivI => {
            let lv = ell.pow(v);
            2 * lv + 2 * (m.saturating_sub(u) as u64) * (lv - lv / ell)
        }
        Case::DivIIA => ell.pow(m),
        Case::DivIIB => {
            let lu = ell.pow(u);
            lu + (m - u) as u64 * (lu - lu / ell)
        }
        Case::DivIIIA | Case::DivIIIB => {
            let z = arith::valuation(class_index, ell);
            let lz = ell.pow(z);
            if case == Case::DivIIIA {
                lz
            } else {
                2 * lz
            }
        }
    })
}

struct RepFactors {
    case: Case,
    factors: Vec<Poly>,
    aux: Vec<AuxScalar>,
    witness_name: &'static str,
}

fn neg_scaled(f: &Poly, s: Elem) -> Result<Poly> {
    f.scaled_monic(f.field().neg(s))
}

/// `X^d - c`.
fn binom(field: &Field, d: u64, c: Elem) -> Poly {
    Poly::binomial(field, d as usize, c)
}

fn coprime_rep(params: &Params, j: u64) -> Result<RepFactors> {
    let field = params.field()?;
    let data = cyclotomic_data(params.q(), params.ell, params.m)?;
    if j == 0 {
        let mut factors = Vec::with_capacity(2 * data.minimal.len());
        for mp in &data.minimal {
            factors.push(mp.clone());
            factors.push(neg_scaled(mp, Elem::ONE)?);
        }
        return Ok(RepFactors { case: Case::CoprimeA, factors, aux: vec![], witness_name: "a" });
    }

    let map = quadratic_extension(&field)?;
    let f2 = map.ext().clone();
    let xi = field.primitive();
    let alpha1 = gf::sqrt_of(&map, xi)?;
    let two_qm1 = 2 * (params.q() - 1);
    let u = arith::inv_mod(params.ell_m() % two_qm1, two_qm1)
        .ok_or_else(|| Error::Internal("ℓ^m is not invertible modulo 2(q-1)".into()))?;
    let beta1 = f2.pow_signed(alpha1, -(u as i64))?;
    if f2.mul(f2.pow(beta1, params.ell_m()), alpha1) != Elem::ONE {
        return Err(Error::Internal("β_1^{ℓ^m} α_1 != 1".into()));
    }
    if f2.pow(beta1, params.q()) != f2.neg(beta1) {
        return Err(Error::Internal("β_1^q != -β_1".into()));
    }
    if f2.element_order(beta1)? != two_qm1 {
        return Err(Error::Internal("β_1 is not a primitive 2(q-1)-th root of unity".into()));
    }
    let aux = vec![AuxScalar::new("alpha_1", &f2, alpha1), AuxScalar::new("beta_1", &f2, beta1)];

    let mut factors = Vec::new();
    let case = match &data.split {
        None => {
            for mp in &data.minimal {
                let e = mp.embed(&map)?;
                let s = &e.scaled_monic(beta1)? * &neg_scaled(&e, beta1)?;
                factors.push(s.pullback(&map)?);
            }
            Case::CoprimeB1
        }
        Some(pairs) => {
            let binv = f2.inv(beta1)?;
            let p_poly = Poly::new(&f2, vec![f2.neg(f2.mul(binv, binv)), Elem::ZERO, Elem::ONE]);
            factors.push(p_poly.pullback(&map)?);
            for (n1, n2) in pairs {
                let qi = &n1.scaled_monic(beta1)? * &neg_scaled(n2, beta1)?;
                let ri = &n2.scaled_monic(beta1)? * &neg_scaled(n1, beta1)?;
                factors.push(qi.pullback(&map)?);
                factors.push(ri.pullback(&map)?);
            }
            Case::CoprimeB2
        }
    };
    Ok(RepFactors { case, factors, aux, witness_name: "b" })
}

fn divides_rep(params: &Params, j: u64) -> Result<RepFactors> {
    let field = params.field()?;
    let q = params.q();
    let ell = params.ell;
    let m = params.m;
    let u = arith::valuation(q - 1, ell);
    let v = m.min(u);
    let lv = ell.pow(v);
    let xi = field.primitive();
    let zeta = field.primitive_root_of_unity(lv)?;
    let pw = |x: Elem, k: u64| field.pow(x, k);
    let mut factors = Vec::new();

    // binomials X^{ℓ^jj} - s ζ^k over jj = 1..m-u and ℓ ∤ k <= ℓ^v, for each sign s
    let higher = |scale: &dyn Fn(u64) -> Elem, mult: u64, signs: &[Elem], out: &mut Vec<Poly>| {
        for jj in 1..=m.saturating_sub(u) {
            let d = ell.pow(jj);
            for k in (1..=lv).filter(|k| k % ell != 0) {
                for &s in signs {
                    let c = field.mul(s, field.mul(scale(d), pw(zeta, k)));
                    out.push(binom(&field, mult * d, c));
                }
            }
        }
    };

    if j == 0 {
        let signs = [Elem::ONE, field.neg(Elem::ONE)];
        for i in 0..lv {
            for &s in &signs {
                factors.push(binom(&field, 1, field.mul(s, pw(zeta, i))));
            }
        }
        higher(&|_| Elem::ONE, 1, &signs, &mut factors);
        let aux = vec![AuxScalar::new("zeta", &field, zeta)];
        return Ok(RepFactors { case: Case::DivI, factors, aux, witness_name: "c_1" });
    }

    if j == lv {
        if m <= u {
            let alpha = field.primitive_root_of_unity(ell.pow(m))?;
            for i in 0..ell.pow(m) {
                factors.push(binom(&field, 2, field.mul(xi, pw(alpha, i))));
            }
            let aux = vec![AuxScalar::new("alpha", &field, alpha)];
            return Ok(RepFactors { case: Case::DivIIA, factors, aux, witness_name: "c_2" });
        }
        // β ∈ ⟨ξ^{ℓ^u}⟩ with β^{ℓ^m} ξ^{ℓ^u} = 1
        let w = (q - 1) / ell.pow(u);
        let gen = pw(xi, ell.pow(u));
        let t = arith::inv_mod(ell.pow(m) % w, w).unwrap_or(0);
        let beta = field.pow_signed(gen, -(t as i64))?;
        if field.mul(pw(beta, ell.pow(m)), pw(xi, ell.pow(u))) != Elem::ONE {
            return Err(Error::Internal("β^{ℓ^m} ξ^{ℓ^u} != 1".into()));
        }
        let binv = field.inv(beta)?;
        for i in 0..ell.pow(u) {
            factors.push(binom(&field, 2, field.mul(binv, pw(zeta, i))));
        }
        higher(&|d| pw(binv, d), 2, &[Elem::ONE], &mut factors);
        let aux = vec![AuxScalar::new("zeta", &field, zeta), AuxScalar::new("beta", &field, beta)];
        return Ok(RepFactors { case: Case::DivIIB, factors, aux, witness_name: "c_2" });
    }

    let z = arith::valuation(j, ell);
    let y = j / ell.pow(z);
    let lz = ell.pow(z);
    let delta = field.primitive_root_of_unity(lz)?;
    let deg = ell.pow(m - z);
    let case = if y % 2 == 1 {
        for i in 0..lz {
            factors.push(binom(&field, 2 * deg, field.mul(pw(delta, i), pw(xi, y))));
        }
        Case::DivIIIA
    } else {
        let y0 = y / 2;
        for i in 0..lz {
            let c = field.mul(pw(delta, i), pw(xi, y0));
            factors.push(binom(&field, deg, c));
            factors.push(binom(&field, deg, field.neg(c)));
        }
        Case::DivIIIB
    };
    let aux = vec![AuxScalar::new("delta", &field, delta)];
    Ok(RepFactors { case, factors, aux, witness_name: "d_1" })
}

fn assemble(params: &Params, lambda: Elem, j: u64, rep: RepFactors) -> Result<Factorization> {
    let field = params.field()?;
    let classes = equivalence::transversal(params)?;
    let target = classes[j as usize].rep;
    let c = equivalence::witness_scalar(&field, lambda, target, params.length())?
        .ok_or_else(|| Error::Internal("λ is not equivalent to its class representative".into()))?;
    let mut factors = rep
        .factors
        .iter()
        .map(|f| f.scaled_monic(c))
        .collect::<Result<Vec<_>>>()?;
    factors.sort_by(|a, b| a.canonical_cmp(b));
    let before = factors.len();
    factors.dedup();
    if factors.len() != before {
        return Err(Error::Internal(format!("{} produced repeated factors", rep.case)));
    }
    let expected = predicted_factor_count(params, rep.case, j)?;
    if factors.len() as u64 != expected {
        return Err(Error::Internal(format!(
            "{} produced {} factors, expected {expected}",
            rep.case,
            factors.len()
        )));
    }
    let mut aux = rep.aux;
    aux.push(AuxScalar::new(rep.witness_name, &field, c));
    Ok(Factorization { params: *params, field, lambda, class_index: j, case: rep.case, factors, aux })
}

fn check_lambda(params: &Params, lambda: Elem) -> Result<Field> {
    let field = params.field()?;
    if lambda.is_zero() {
        return Err(Error::ZeroInput("λ"));
    }
    if !field.contains(lambda) {
        return Err(Error::FieldMismatch);
    }
    Ok(field)
}

/// `X^N - 1 = Π M_{ρ_i}(X)^{p^n} M̂_{ρ_i}(-X)^{p^n}`.
pub fn factor_cyclic(params: &Params) -> Result<Factorization> {
    let field = params.field()?;
    let data = cyclotomic_data(params.q(), params.ell, params.m)?;
    let mut factors = Vec::with_capacity(2 * data.minimal.len());
    for mp in &data.minimal {
        factors.push(mp.clone());
        factors.push(neg_scaled(mp, Elem::ONE)?);
    }
    factors.sort_by(|a, b| a.canonical_cmp(b));
    let expected = predicted_factor_count(params, Case::Cyclic, 0)?;
    if factors.len() as u64 != expected {
        return Err(Error::Internal("cyclic factor count mismatch".into()));
    }
    Ok(Factorization {
        params: *params,
        field,
        lambda: Elem::ONE,
        class_index: 0,
        case: Case::Cyclic,
        factors,
        aux: vec![],
    })
}

/// Factorization for `gcd(ℓ, q-1) = 1`.
pub fn factor_coprime_case(params: &Params, lambda: Elem) -> Result<Factorization> {
    check_lambda(params, lambda)?;
    if !params.coprime() {
        return Err(Error::Incompatible(format!("ℓ = {} divides q - 1 = {}", params.ell, params.q() - 1)));
    }
    let j = equivalence::class_of(params, lambda)?;
    assemble(params, lambda, j, coprime_rep(params, j)?)
}

/// Factorization for `ℓ | q-1`.
pub fn factor_divides_case(params: &Params, lambda: Elem) -> Result<Factorization> {
    check_lambda(params, lambda)?;
    if params.coprime() {
        return Err(Error::Incompatible(format!(
            "ℓ = {} does not divide q - 1 = {}",
            params.ell,
            params.q() - 1
        )));
    }
    let j = equivalence::class_of(params, lambda)?;
    assemble(params, lambda, j, divides_rep(params, j)?)
}

pub fn factor_constacyclic(params: &Params, lambda: Elem) -> Result<Factorization> {
    if params.coprime() {
        factor_coprime_case(params, lambda)
    } else {
        factor_divides_case(params, lambda)
    }
}

/// Factorization for the representative of class `j`.
pub fn factor_class(params: &Params, j: u64) -> Result<Factorization> {
    let classes = equivalence::transversal(params)?;
    let cls = classes.get(j as usize).ok_or_else(|| {
        Error::InvalidParameter(format!("class index {j} out of range 0..{}", classes.len()))
    })?;
    factor_constacyclic(params, cls.rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn p(q: u64, ell: u64, m: u32, n: u32) -> Params {
        Params::from_q(q, ell, m, n).unwrap()
    }

    fn ints(f: &Poly) -> Vec<u32> {
        f.coeffs().iter().map(|c| c.0).collect()
    }

    #[test]
    fn minimal_poly_examples() {
        let ms = minimal_polys(7, 3, 1).unwrap();
        let set: BTreeSet<Vec<u32>> = ms.iter().map(ints).collect();
        // X-1, X-2, X-4
        assert_eq!(set, [vec![6, 1], vec![5, 1], vec![3, 1]].into_iter().collect());
        let ms = minimal_polys(3, 5, 1).unwrap();
        assert_eq!(ints(&ms[0]), vec![2, 1]);
        assert_eq!(ints(&ms[1]), vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn q2_minimal_polys() {
        let ns = minimal_polys_q2(3, 5, 1).unwrap();
        assert_eq!(ns.len(), 3);
        assert_eq!((ns[1].deg(), ns[2].deg()), (2, 2));
        let f3 = gf::make_field(3, 1).unwrap();
        let map = quadratic_extension(&f3).unwrap();
        assert_eq!((&ns[1] * &ns[2]).pullback(&map).unwrap(), Poly::from_ints(&f3, &[1, 1, 1, 1, 1]));

        let ns = minimal_polys_q2(5, 3, 1).unwrap();
        assert!(ns.iter().all(|n| n.deg() == 1));
        assert!(minimal_polys_q2(7, 3, 1).is_err());
    }

    #[test]
    fn cyclic_examples() {
        let f = factor_cyclic(&p(7, 3, 1, 1)).unwrap();
        assert_eq!(f.factors().len(), 6);
        assert!(f.factors().iter().all(|g| g.deg() == 1));
        f.verify_product().unwrap();
        let f = factor_cyclic(&p(3, 5, 1, 1)).unwrap();
        let degs: Vec<usize> = f.factors().iter().map(|g| g.deg()).collect();
        assert_eq!(degs, vec![1, 1, 4, 4]);
        f.verify_product().unwrap();
    }

    #[test]
    fn dispatch_by_case() {
        let cases = |params: Params| -> Vec<Case> {
            (0..params.class_count()).map(|j| factor_class(&params, j).unwrap().case()).collect()
        };
        assert_eq!(cases(p(7, 5, 1, 1)), vec![Case::CoprimeA, Case::CoprimeB2]);
        assert_eq!(cases(p(3, 11, 1, 1)), vec![Case::CoprimeA, Case::CoprimeB1]);
        assert_eq!(
            cases(p(7, 3, 1, 1)),
            vec![Case::DivI, Case::DivIIIA, Case::DivIIIB, Case::DivIIA, Case::DivIIIB, Case::DivIIIA]
        );
        assert_eq!(cases(p(7, 3, 2, 1))[3], Case::DivIIB);
        assert!(factor_coprime_case(&p(7, 3, 1, 1), Elem::ONE).is_err());
        assert!(factor_divides_case(&p(7, 5, 1, 1), Elem::ONE).is_err());
        assert!(factor_constacyclic(&p(7, 5, 1, 1), Elem::ZERO).is_err());
    }

    #[test]
    fn constructions_reconstruct_and_match_oracle() {
        for params in [p(7, 5, 1, 1), p(3, 11, 1, 1), p(7, 3, 2, 1), p(13, 3, 1, 1), p(9, 5, 1, 1), p(5, 3, 2, 0)] {
            for j in 0..params.class_count() {
                let fact = factor_class(&params, j).unwrap();
                fact.verify_product().unwrap();
                let oracle = oracle_factor(&fact.target(), 7).unwrap();
                let ours: Vec<(Poly, u64)> =
                    fact.factors().iter().map(|f| (f.clone(), fact.multiplicity())).collect();
                assert_eq!(ours, oracle, "{params} class {j}");
            }
        }
    }

    #[test]
    fn scaled_lambda_uses_witness() {
        let params = p(13, 3, 1, 1);
        let f13 = params.field().unwrap();
        for x in 1..13 {
            let fact = factor_constacyclic(&params, Elem(x)).unwrap();
            fact.verify_product().unwrap();
        }
        let neg = factor_constacyclic(&params, f13.neg(Elem::ONE)).unwrap();
        assert_eq!(neg.target(), Poly::binomial(&f13, 78, f13.neg(Elem::ONE)));
    }

    #[test]
    fn bad_params() {
        assert!(Params::new(3, 1, 3, 1, 1).is_err());
        assert!(Params::new(4, 1, 3, 1, 1).is_err());
        assert!(Params::new(3, 1, 9, 1, 1).is_err());
        assert!(Params::new(3, 1, 5, 0, 1).is_err());
        assert!(Params::new(3, 1, 5, 1, 40).is_err());
        assert!(factor_class(&p(7, 5, 1, 1), 2).is_err());
    }
}
