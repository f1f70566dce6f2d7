//! Cross-checks of the closed-form constructions over a parameter grid.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::codes::{self, ConstacyclicCode, Family};
use crate::cosets;
use crate::equivalence;
use crate::error::{Error, Result};
use crate::factorizer::{self, oracle, Factorization, Params};
use crate::poly::{self, Poly};

pub const GRID_MAX_LENGTH: u64 = 2000;

/// Fields `F_q`, `q <= 13` odd; `ℓ ∈ {3,5,7,11}`, `ℓ != p`; `m <= 2`;
/// `n <= 2`; `N <= 2000`.
pub fn default_grid() -> Vec<Params> {
    let mut out = Vec::new();
    for (p, a) in [(3, 1), (3, 2), (5, 1), (7, 1), (11, 1), (13, 1)] {
        for ell in [3, 5, 7, 11] {
            for m in 1..=2 {
                for n in 0..=2 {
                    if let Ok(params) = Params::new(p, a, ell, m, n) {
                        if params.length() <= GRID_MAX_LENGTH {
                            out.push(params);
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GridEntry {
    p: u64,
    #[serde(default = "one")]
    a: u32,
    ell: u64,
    m: u32,
    n: u32,
}

fn one() -> u32 {
    1
}

/// Parses a JSON array of `{"p", "a", "ell", "m", "n"}` objects (`a`
/// defaults to 1). The result is sorted and deduplicated.
pub fn parse_grid(text: &str) -> Result<Vec<Params>> {
    let entries: Vec<GridEntry> =
        serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("grid file: {e}")))?;
    let mut out = entries
        .into_iter()
        .map(|g| Params::new(g.p, g.a, g.ell, g.m, g.n))
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Random codes per point for the duality checks.
    pub duality_samples: usize,
    /// Replaces the first factor of the first point before checking; a
    /// negative control for the verifier itself.
    pub corrupt_first_factor: bool,
}

impl Default for VerifyOptions {
    fn default() -> VerifyOptions {
        VerifyOptions { seed: oracle::DEFAULT_SEED, duality_samples: 4, corrupt_first_factor: false }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub params: Params,
    pub class: Option<u64>,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn to_json(&self) -> Value {
        json!({
            "p": self.params.p,
            "a": self.params.a,
            "ell": self.params.ell,
            "m": self.params.m,
            "n": self.params.n,
            "N": self.params.length(),
            "lambda_class": self.class,
            "check": self.name,
            "passed": self.passed,
            "detail": self.detail,
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct GridReport {
    pub checks: Vec<Check>,
}

impl GridReport {
    pub fn total(&self) -> usize {
        self.checks.len()
    }
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
    pub fn first_failure(&self) -> Option<&Check> {
        self.failures().next()
    }
    pub fn points(&self) -> usize {
        let mut ps: Vec<Params> = self.checks.iter().map(|c| c.params).collect();
        ps.dedup();
        ps.len()
    }
    pub fn summary_json(&self) -> Value {
        json!({
            "summary": true,
            "points": self.points(),
            "checks": self.total(),
            "failed": self.failures().count(),
            "passed": self.passed(),
            "first_failure": self.first_failure().map(Check::to_json),
        })
    }
}

struct Recorder {
    params: Params,
    checks: Vec<Check>,
}

impl Recorder {
    fn run(&mut self, class: Option<u64>, name: &'static str, f: impl FnOnce() -> Result<std::result::Result<(), String>>) {
        let (passed, detail) = match f() {
            Ok(Ok(())) => (true, String::new()),
            Ok(Err(msg)) => (false, msg),
            Err(e) => (false, e.to_string()),
        };
        self.checks.push(Check { params: self.params, class, name, passed, detail });
    }
}

fn expect(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs every check over `grid`; points are processed in parallel and the
/// report keeps grid order.
pub fn verify_grid(grid: &[Params], opts: &VerifyOptions) -> GridReport {
    let per_point: Vec<Vec<Check>> = grid
        .par_iter()
        .enumerate()
        .map(|(i, p)| verify_point(p, opts, opts.corrupt_first_factor && i == 0))
        .collect();
    GridReport { checks: per_point.into_iter().flatten().collect() }
}

pub fn verify_point(params: &Params, opts: &VerifyOptions, corrupt: bool) -> Vec<Check> {
    let mut rec = Recorder { params: *params, checks: Vec::new() };
    let q = params.q();

    rec.run(None, "coset-partition", || {
        let table = cosets::coset_table(q, params.ell, params.m)?;
        let prof = &table.profile;
        let total: u64 = 1 + (1..=params.m).map(|r| prof.lambda_of(r) * prof.delta_of(r)).sum::<u64>();
        Ok(expect(total == prof.modulus() && table.len() as u64 == prof.e + 1, || {
            format!("1 + Σλδ = {total}, {} cosets, e = {}", table.len(), prof.e)
        }))
    });

    rec.run(None, "reciprocity", || {
        let data = factorizer::cyclotomic_data(q, params.ell, params.m)?;
        let even = data.table.profile.f % 2 == 0;
        let neg = data.table.negation_coset_map();
        for (i, mp) in data.minimal.iter().enumerate() {
            let r = mp.reciprocal()?;
            let partner = &data.minimal[neg[i]];
            if r != *partner {
                return Ok(Err(format!("reciprocal of M_{i} is not M_{}", neg[i])));
            }
            if even && neg[i] != i {
                return Ok(Err(format!("f even but M_{i} is not self-reciprocal")));
            }
            if !even && i > 0 && neg[i] == i {
                return Ok(Err(format!("f odd but M_{i} is self-reciprocal")));
            }
        }
        Ok(Ok(()))
    });

    rec.run(None, "transversal", || {
        let field = params.field()?;
        let t = equivalence::transversal(params)?;
        let g = crate::arith::gcd(params.length(), q - 1);
        if t.len() as u64 != g {
            return Ok(Err(format!("{} classes, expected {g}", t.len())));
        }
        for c in &t {
            if equivalence::class_of(params, c.rep)? != c.index {
                return Ok(Err(format!("representative of class {} resolves elsewhere", c.index)));
            }
        }
        for x in 1..q as u32 {
            let x = crate::gf::Elem(x);
            let j = equivalence::class_of(params, x)?;
            if !equivalence::are_equivalent(&field, x, t[j as usize].rep, params.length())? {
                return Ok(Err(format!("{} is not equivalent to its class representative", field.fmt_elem(x))));
            }
        }
        Ok(Ok(()))
    });

    let classes = params.class_count();
    for j in 0..classes {
        let fact = match factorizer::factor_class(params, j) {
            Ok(f) => f,
            Err(e) => {
                rec.run(Some(j), "construct", || Err(e));
                continue;
            }
        };
        let mut factors = fact.factors().to_vec();
        if corrupt && j == 0 {
            factors[0] = &factors[0] + &Poly::one(fact.field());
        }
        class_checks(&mut rec, &fact, &factors, opts.seed);
    }

    rec.run(None, "cyclic-factorization", || {
        let f = factorizer::factor_cyclic(params)?;
        let rep = factorizer::factor_class(params, 0)?;
        f.verify_product()?;
        Ok(expect(f.factors() == rep.factors(), || "cyclic and class-0 factor lists differ".into()))
    });

    for family in [Family::LcdCyclic, Family::LcdNegacyclic, Family::SelfDualNegacyclic] {
        rec.run(None, family.name(), || {
            let fact = codes::family_factorization(params, family)?;
            let (formula, case) = codes::family_formula(params, family)?;
            let count = codes::family_count(&fact, family)?;
            Ok(expect(count == formula, || format!("{count} codes, formula ({case}) gives {formula}")))
        });
    }

    rec.run(None, "duality", || {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ params.length());
        let mut facts: Vec<Arc<Factorization>> = Vec::new();
        for j in [0, classes - 1] {
            facts.push(Arc::new(factorizer::factor_class(params, j)?));
        }
        let field = params.field()?;
        let lam = field.xi_pow(rng.gen_range(0..(q - 1) as i64));
        facts.push(Arc::new(factorizer::factor_constacyclic(params, lam)?));
        for fact in &facts {
            for _ in 0..opts.duality_samples {
                let exps = (0..fact.factors().len()).map(|_| rng.gen_range(0..=fact.multiplicity())).collect();
                let c = ConstacyclicCode::new(Arc::clone(fact), exps)?;
                let d = c.dual()?;
                if c.dim() + d.dim() != params.length() {
                    return Ok(Err(format!("dim C + dim C⊥ = {} + {}", c.dim(), d.dim())));
                }
                if d.dual()? != c {
                    return Ok(Err(format!("dual of dual differs for exponents {:?}", c.exponents())));
                }
            }
        }
        Ok(Ok(()))
    });

    rec.checks
}

fn class_checks(rec: &mut Recorder, fact: &Factorization, factors: &[Poly], seed: u64) {
    let j = Some(fact.class_index());
    let field = fact.field();
    let target = fact.target();
    let pn = fact.multiplicity();

    rec.run(j, "reconstruction", || {
        let prod = poly::product(field, factors).pow(pn);
        Ok(expect(prod == target, || format!("Π F_i^{pn} differs from X^N - λ ({})", fact.case())))
    });

    rec.run(j, "irreducible", || {
        for f in factors {
            if !f.is_monic() || !oracle::oracle_is_irreducible(f)? {
                return Ok(Err(format!("{f} is not monic irreducible ({})", fact.case())));
            }
        }
        Ok(Ok(()))
    });

    rec.run(j, "oracle-multiset", || {
        let reference = oracle::oracle_factor(&target, seed)?;
        let ours: Vec<(Poly, u64)> = factors.iter().map(|f| (f.clone(), pn)).collect();
        let mut sorted = ours.clone();
        sorted.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        Ok(expect(sorted == reference, || {
            format!("construction has {} factors, oracle has {} ({})", ours.len(), reference.len(), fact.case())
        }))
    });

    rec.run(j, "factor-count", || {
        let predicted = factorizer::predicted_factor_count(fact.params(), fact.case(), fact.class_index())?;
        Ok(expect(predicted == factors.len() as u64, || {
            format!("{} factors, {} predicts {predicted}", factors.len(), fact.case())
        }))
    });
}
