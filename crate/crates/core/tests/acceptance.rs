use std::collections::BTreeSet;
use std::io::Write;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use constacyclic::codes::{self, ConstacyclicCode};
use constacyclic::equivalence::{self, apply_phi};
use constacyclic::factorizer::{self, oracle, Factorization, Params};
use constacyclic::gf::field_of_order;
use constacyclic::verify::default_grid;
use constacyclic::{cosets, Elem, Field, Poly};

fn report(n: u32, title: &str, res: Result<String, String>) {
    let line = match &res {
        Ok(info) => format!("criterion {n} ({title}): PASS  {info}"),
        Err(e) => format!("criterion {n} ({title}): FAIL  {e}"),
    };
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").unwrap();
    out.flush().unwrap();
    if let Err(e) = res {
        panic!("criterion {n}: {e}");
    }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

// ---- independent linear algebra ----

fn rank(f: &Field, mut rows: Vec<Vec<Elem>>) -> usize {
    let n = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..n {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, piv);
        let inv = f.inv(rows[r][col]).unwrap();
        let pivot: Vec<Elem> = rows[r].iter().map(|&x| f.mul(x, inv)).collect();
        for row in rows.iter_mut().skip(r + 1) {
            let c = row[col];
            if !c.is_zero() {
                for (x, &p) in row.iter_mut().zip(&pivot) {
                    *x = f.sub(*x, f.mul(c, p));
                }
            }
        }
        rows[r] = pivot;
        r += 1;
    }
    r
}

/// Basis of `{v : G v = 0}` with respect to the standard inner product.
fn nullspace(f: &Field, g: &[Vec<Elem>], n: usize) -> Vec<Vec<Elem>> {
    let mut rows: Vec<Vec<Elem>> = g.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, piv);
        let inv = f.inv(rows[r][col]).unwrap();
        rows[r] = rows[r].iter().map(|&x| f.mul(x, inv)).collect();
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            let c = row[col];
            if i != r && !c.is_zero() {
                for (x, &p) in row.iter_mut().zip(&pivot) {
                    *x = f.sub(*x, f.mul(c, p));
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Elem::ZERO; n];
            v[fc] = Elem::ONE;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(rows[i][fc]);
            }
            v
        })
        .collect()
}

fn dot(f: &Field, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter().zip(b).fold(Elem::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// Rows `X^i g`, built directly from the generator's coefficients.
fn gen_matrix(code: &ConstacyclicCode) -> Vec<Vec<Elem>> {
    let n = code.length() as usize;
    let g = code.generator().coeffs();
    let k = n + 1 - g.len();
    (0..k)
        .map(|i| {
            let mut row = vec![Elem::ZERO; n];
            for (j, &c) in g.iter().enumerate() {
                row[i + j] = c;
            }
            row
        })
        .collect()
}

fn hull_dim(code: &ConstacyclicCode) -> usize {
    let f = code.field();
    let n = code.length() as usize;
    let g = gen_matrix(code);
    let dual = nullspace(f, &g, n);
    let (a, b) = (g.len(), dual.len());
    let mut stacked = g;
    stacked.extend(dual);
    a + b - rank(f, stacked)
}

fn is_self_dual(code: &ConstacyclicCode) -> bool {
    let f = code.field();
    let g = gen_matrix(code);
    2 * g.len() == code.length() as usize && g.iter().all(|r| g.iter().all(|s| dot(f, r, s).is_zero()))
}

fn all_vectors(k: usize, max: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=max).map(move |e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out
}

fn brute_weights(code: &ConstacyclicCode) -> Vec<u64> {
    let f = code.field();
    let q = f.order() as u32;
    let g = gen_matrix(code);
    let n = code.length() as usize;
    let mut counts = vec![0u64; n + 1];
    let mut msg = vec![0u32; g.len()];
    loop {
        let mut w = vec![Elem::ZERO; n];
        for (row, &m) in g.iter().zip(&msg) {
            if m != 0 {
                for (x, &r) in w.iter_mut().zip(row) {
                    *x = f.add(*x, f.mul(Elem(m), r));
                }
            }
        }
        counts[w.iter().filter(|x| !x.is_zero()).count()] += 1;
        let mut i = 0;
        while i < msg.len() {
            msg[i] += 1;
            if msg[i] < q {
                break;
            }
            msg[i] = 0;
            i += 1;
        }
        if i == msg.len() {
            return counts;
        }
    }
}

fn grid_factorizations() -> Vec<Factorization> {
    default_grid()
        .iter()
        .flat_map(|p| (0..p.class_count()).map(move |j| factorizer::factor_class(p, j).unwrap()))
        .collect()
}

fn criterion_1() -> Result<String, String> {
    let mut checked = 0;
    for fact in grid_factorizations() {
        let field = fact.field();
        let mut prod = Poly::one(field);
        for f in fact.factors() {
            ensure!(ok(oracle::oracle_is_irreducible(f))?, "{} class {}: {f} is reducible", fact.params(), fact.class_index());
            for _ in 0..fact.multiplicity() {
                prod = &prod * f;
            }
        }
        let mut expect = vec![Elem::ZERO; fact.length() as usize + 1];
        expect[0] = field.neg(fact.lambda());
        expect[fact.length() as usize] = Elem::ONE;
        ensure!(prod.coeffs() == expect.as_slice(), "{} class {}: product mismatch", fact.params(), fact.class_index());
        checked += 1;
    }
    Ok(format!("{checked} (point, class) pairs"))
}

fn criterion_2() -> Result<String, String> {
    let mut checked = 0;
    for fact in grid_factorizations() {
        let reference = ok(oracle::oracle_factor(&fact.target(), 0x1234))?;
        let mut ours: Vec<(Vec<u32>, u64)> =
            fact.factors().iter().map(|f| (f.coeffs().iter().map(|c| c.0).collect(), fact.multiplicity())).collect();
        let mut theirs: Vec<(Vec<u32>, u64)> =
            reference.iter().map(|(f, e)| (f.coeffs().iter().map(|c| c.0).collect(), *e)).collect();
        ours.sort();
        theirs.sort();
        ensure!(ours == theirs, "{} class {} ({}): multisets differ", fact.params(), fact.class_index(), fact.case());
        checked += 1;
    }
    Ok(format!("{checked} (point, class) pairs"))
}

fn criterion_3() -> Result<String, String> {
    let grid = default_grid();
    for p in &grid {
        let t = ok(equivalence::transversal(p))?;
        let g = num_gcd(p.length(), p.q() - 1);
        ensure!(t.len() as u64 == g, "{p}: {} classes, expected {g}", t.len());
        let reps: BTreeSet<u32> = t.iter().map(|c| c.rep.0).collect();
        ensure!(reps.len() == t.len(), "{p}: repeated representative");
    }
    let lengths: BTreeSet<u64> = grid.iter().map(Params::length).collect();
    let mut pairs = 0u64;
    for q in [3u64, 5, 7, 9, 11, 13, 17, 19, 23, 25] {
        let f = ok(field_of_order(q))?;
        for &n in &lengths {
            // a^n for every a, independent of the library's relation test
            let powers: BTreeSet<u32> = (1..q as u32).map(|a| f.pow(Elem(a), n).0).collect();
            for x in 1..q as u32 {
                for y in 1..q as u32 {
                    let brute = powers.iter().any(|&a| f.mul(Elem(a), Elem(x)) == Elem(y));
                    ensure!(
                        ok(equivalence::are_equivalent(&f, Elem(x), Elem(y), n))? == brute,
                        "q={q} n={n}: relation differs at ({x}, {y})"
                    );
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{} grid points, {pairs} element pairs", grid.len()))
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

fn criterion_4() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut codes_checked = 0;
    let points: Vec<Params> = default_grid().into_iter().filter(|p| p.length() <= 60).collect();
    for p in &points {
        let facts: Vec<Arc<Factorization>> =
            (0..p.class_count()).map(|j| Arc::new(factorizer::factor_class(p, j).unwrap())).collect();
        for _ in 0..500 {
            let fact = &facts[rng.gen_range(0..facts.len())];
            let exps = (0..fact.factors().len()).map(|_| rng.gen_range(0..=fact.multiplicity())).collect();
            let c = ok(ConstacyclicCode::new(Arc::clone(fact), exps))?;
            let d = ok(c.dual())?;
            let f = c.field();
            ensure!(c.dim() + d.dim() == p.length(), "{p}: dimensions do not add up for {:?}", c.exponents());
            ensure!(ok(d.dual())? == c, "{p}: dual of dual differs for {:?}", c.exponents());
            let gc = gen_matrix(&c);
            let gd = gen_matrix(&d);
            for r in &gc {
                for s in &gd {
                    ensure!(dot(f, r, s).is_zero(), "{p}: non-orthogonal rows for {:?}", c.exponents());
                }
            }
            codes_checked += 1;
        }
    }
    Ok(format!("{} points, {codes_checked} codes", points.len()))
}

fn lcd_scan(fact: &Arc<Factorization>, vectors: Vec<Vec<u64>>) -> Result<BTreeSet<Vec<u64>>, String> {
    let mut found = BTreeSet::new();
    for v in vectors {
        let c = ok(ConstacyclicCode::new(Arc::clone(fact), v.clone()))?;
        if hull_dim(&c) == 0 {
            found.insert(v);
        }
    }
    Ok(found)
}

fn listed(e: &codes::Enumeration) -> BTreeSet<Vec<u64>> {
    e.codes.iter().map(|c| c.exponents().to_vec()).collect()
}

fn criterion_5() -> Result<String, String> {
    let p = Params::from_q(3, 5, 1, 1).unwrap();
    let e = ok(codes::enumerate_lcd_cyclic(&p, 1 << 20))?;
    let k = e.factorization.factors().len();
    let vectors = all_vectors(k, 3);
    ensure!(vectors.len() == 256, "expected 256 candidates, got {}", vectors.len());
    let found = lcd_scan(&e.factorization, vectors)?;
    ensure!(found.len() == 16, "q=3 ℓ=5: exhaustive scan found {} LCD codes", found.len());
    ensure!(found == listed(&e), "q=3 ℓ=5: enumeration differs from the scan");
    ensure!(e.formula == 16, "q=3 ℓ=5: formula gives {}", e.formula);

    let p = Params::from_q(7, 3, 1, 1).unwrap();
    let e = ok(codes::enumerate_lcd_cyclic(&p, 1 << 20))?;
    let k = e.factorization.factors().len();
    let structured: Vec<Vec<u64>> = all_vectors(k, 3)
        .into_iter()
        .map(|v| v.into_iter().map(|d| [0, 1, 6, 7][d as usize]).collect())
        .collect();
    ensure!(structured.len() == 4096, "expected 4096 structured candidates");
    let found = lcd_scan(&e.factorization, structured)?;
    ensure!(found.len() == 16 && e.formula == 16, "q=7 ℓ=3: scan found {}, formula {}", found.len(), e.formula);
    ensure!(found == listed(&e), "q=7 ℓ=3: enumeration differs from the scan");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut negatives = 0;
    while negatives < 10_000 {
        let v: Vec<u64> = (0..k).map(|_| rng.gen_range(0..=7)).collect();
        if found.contains(&v) {
            continue;
        }
        let c = ok(ConstacyclicCode::new(Arc::clone(&e.factorization), v.clone()))?;
        ensure!(hull_dim(&c) > 0, "q=7 ℓ=3: unlisted LCD code {v:?}");
        negatives += 1;
    }
    Ok("q=3 ℓ=5: 16/256; q=7 ℓ=3: 16/4096 structured, 10^4 random negatives".into())
}

fn criterion_6() -> Result<String, String> {
    let cases = [
        (5u64, 3u64, 1u32, 4u128, 1296usize, "q≡1 (mod 4)"),
        (3, 11, 1, 4, 64, "q≡3, f odd"),
        (3, 7, 1, 8, 64, "q≡3, f≡2 (mod 4)"),
        (3, 5, 1, 4, 64, "q≡3, f≡0 (mod 4)"),
    ];
    let mut info = Vec::new();
    for (q, ell, n, expect, candidates, label) in cases {
        let p = Params::from_q(q, ell, 1, n).unwrap();
        let prof = ok(cosets::order_profile(q, ell, 1))?;
        let e = ok(codes::enumerate_lcd_negacyclic(&p, 1 << 20))?;
        let formula = match (q % 4, prof.f % 4) {
            (1, _) => 1u128 << (prof.e + 1),
            (_, 1) | (_, 3) => 1 << (1 + prof.e / 2),
            (_, 2) => 1 << (1 + 2 * prof.e),
            _ => 1 << (1 + prof.e),
        };
        ensure!(formula == expect && e.formula == expect, "{label}: formula {formula}, library {}", e.formula);
        let vectors = all_vectors(e.factorization.factors().len(), p.pn());
        ensure!(vectors.len() == candidates, "{label}: {} candidates", vectors.len());
        let found = lcd_scan(&e.factorization, vectors)?;
        ensure!(found.len() as u128 == expect, "{label}: scan found {} LCD codes, expected {expect}", found.len());
        ensure!(found == listed(&e), "{label}: enumeration differs from the scan");
        info.push(format!("{label}: {}/{candidates}", found.len()));
    }
    Ok(info.join("; "))
}

fn criterion_7() -> Result<String, String> {
    let p = Params::from_q(5, 3, 1, 1).unwrap();
    let e = ok(codes::enumerate_self_dual_negacyclic(&p, 1 << 20))?;
    let vectors = all_vectors(e.factorization.factors().len(), 5);
    ensure!(vectors.len() == 1296, "expected 1296 candidates");
    let mut found = BTreeSet::new();
    for v in vectors {
        let c = ok(ConstacyclicCode::new(Arc::clone(&e.factorization), v.clone()))?;
        if is_self_dual(&c) {
            ensure!(ok(c.dual())? == c && c.dim() == 15, "{v:?}: self-dual by scan but not by the library");
            found.insert(v);
        }
    }
    ensure!(found.len() == 36, "scan found {} self-dual codes", found.len());
    ensure!(found == listed(&e), "enumeration differs from the scan");

    let mut scanned = 0;
    for p in default_grid().into_iter().filter(|p| p.q() % 4 == 3) {
        let e = ok(codes::enumerate_self_dual_negacyclic(&p, 1 << 20))?;
        ensure!(e.codes.is_empty(), "{p}: library lists self-dual codes");
        let k = e.factorization.factors().len() as u32;
        let total = (p.pn() + 1).checked_pow(k);
        if p.length() > 150 || total.is_none_or(|t| t > 5000) {
            continue;
        }
        for v in all_vectors(k as usize, p.pn()) {
            let c = ok(ConstacyclicCode::new(Arc::clone(&e.factorization), v.clone()))?;
            ensure!(!is_self_dual(&c), "{p}: {v:?} is self-dual");
        }
        scanned += 1;
    }
    Ok(format!("q=5 ℓ=3: 36/1296; {scanned} q≡3 (mod 4) points scanned, none self-dual"))
}

fn criterion_8() -> Result<String, String> {
    let mut profiles = BTreeSet::new();
    for p in default_grid() {
        profiles.insert((p.q(), p.ell, p.m));
    }
    let mut factors = 0;
    for &(q, ell, m) in &profiles {
        let prof = ok(cosets::order_profile(q, ell, m))?;
        let total: u64 = 1 + (1..=m).map(|r| prof.lambda_of(r) * prof.delta_of(r)).sum::<u64>();
        ensure!(total == ell.pow(m), "q={q} ℓ={ell} m={m}: 1 + Σλδ = {total}");
        let minimal = ok(factorizer::minimal_polys(q, ell, m))?;
        for (i, mp) in minimal.iter().enumerate() {
            // reciprocal by reversal, normalized by the (nonzero) constant term
            let f = mp.field();
            let c0 = mp.coeffs()[0];
            let inv = f.inv(c0).unwrap();
            let rev: Vec<Elem> = mp.coeffs().iter().rev().map(|&c| f.mul(c, inv)).collect();
            let rec = Poly::new(f, rev);
            ensure!(ok(mp.reciprocal())? == rec, "q={q} ℓ={ell}: reciprocal disagrees with reversal");
            if prof.f % 2 == 0 {
                ensure!(ok(mp.is_self_reciprocal())?, "q={q} ℓ={ell} m={m}: M_{i} not self-reciprocal with f even");
            } else {
                let partner = minimal.iter().position(|g| *g == rec);
                ensure!(partner.is_some(), "q={q} ℓ={ell}: reciprocal of M_{i} is not minimal");
                ensure!((i == 0) == (partner == Some(i)), "q={q} ℓ={ell}: M_{i} pairing is wrong with f odd");
            }
            factors += 1;
        }
    }
    Ok(format!("{} profiles, {factors} minimal polynomials", profiles.len()))
}

fn criterion_9() -> Result<String, String> {
    let points: Vec<Params> = default_grid().into_iter().filter(|p| p.length() <= 30).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut pairs = 0;
    let mut attempts = 0;
    while pairs < 50 {
        attempts += 1;
        ensure!(attempts < 100_000, "could not sample enough small codes");
        let p = points[rng.gen_range(0..points.len())];
        let j = rng.gen_range(0..p.class_count());
        let fact = Arc::new(ok(factorizer::factor_class(&p, j))?);
        let exps: Vec<u64> = (0..fact.factors().len()).map(|_| rng.gen_range(0..=fact.multiplicity())).collect();
        let c = ok(ConstacyclicCode::new(Arc::clone(&fact), exps))?;
        if c.dim() == 0 || c.dim() > 6 {
            continue;
        }
        let a = Elem(rng.gen_range(1..p.q() as u32));
        let image = ok(apply_phi(&c, a))?;
        ensure!(image.dim() == c.dim(), "{p}: φ changes the dimension");
        let f = c.field();
        let expect_lambda = f.div(c.lambda(), f.pow(a, p.length())).unwrap();
        ensure!(image.lambda() == expect_lambda, "{p}: φ lands on the wrong λ");
        let w1 = brute_weights(&c);
        let w2 = brute_weights(&image);
        ensure!(w1 == w2, "{p}: weight enumerators differ for {:?}, a = {}", c.exponents(), a.0);
        ensure!(ok(codes::weight_enumerator(&c, 13u64.pow(6)))? == w1, "{p}: library weight enumerator differs");
        pairs += 1;
    }
    Ok(format!("{pairs} (C, a) pairs"))
}

#[test]
fn criterion_1_reconstruction() {
    report(1, "factorization reconstruction", criterion_1());
}

#[test]
fn criterion_2_oracle_agreement() {
    report(2, "oracle multiset agreement", criterion_2());
}

#[test]
fn criterion_3_equivalence_classes() {
    report(3, "equivalence class count", criterion_3());
}

#[test]
fn criterion_4_duality() {
    report(4, "duality", criterion_4());
}

#[test]
fn criterion_5_lcd_cyclic() {
    report(5, "LCD cyclic count", criterion_5());
}

#[test]
fn criterion_6_lcd_negacyclic() {
    report(6, "LCD negacyclic counts", criterion_6());
}

#[test]
fn criterion_7_self_dual_negacyclic() {
    report(7, "self-dual negacyclic", criterion_7());
}

#[test]
fn criterion_8_structural() {
    report(8, "structural lemmas", criterion_8());
}

#[test]
fn criterion_9_phi_invariance() {
    report(9, "φ_a invariance", criterion_9());
}
