//! Independent oracles shared by the property suite and the acceptance target.
//! Nothing here calls the library routine it is checking.
#![allow(dead_code)]

use std::f64::consts::PI;

use isosieve::arith::is_prime;
use isosieve::polyres::{res_power, FrobeniusPoly};
use isosieve::quadfield::{make_field, QuadField, Splitting};
use isosieve::sieve::{
    compute_mq, compute_rq, divides, pcrit_check, IsogenySignature, PcritOutcome, ResidueMap,
};
use isosieve::strategy::{Reason, SieveReport, Status, Step};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

pub fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

// ---------------------------------------------------------------------------
// Resultants: determinant of the Sylvester matrix modulo many primes + CRT.

fn mod_det(mut m: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = m.len();
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    let mut det = 1u64;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| m[r][col] != 0) else {
            return 0;
        };
        if piv != col {
            m.swap(piv, col);
            det = (p - det) % p;
        }
        det = mul(det, m[col][col]);
        let inv = pow(m[col][col], p - 2);
        let (top, rest) = m.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for row in rest {
            let f = mul(row[col], inv);
            if f == 0 {
                continue;
            }
            for (x, &y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = (*x + p - mul(f, y)) % p;
            }
        }
    }
    det
}

fn sylvester_matrix(f: &[BigInt], g: &[BigInt]) -> Vec<Vec<BigInt>> {
    // f, g ascending; rows hold descending coefficients
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (j, c) in f.iter().rev().enumerate() {
            mat[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in g.iter().rev().enumerate() {
            mat[n + i][i + j] = c.clone();
        }
    }
    mat
}

/// `Res(f, g)` from the Sylvester matrix: determinants modulo 61-bit primes,
/// combined by CRT until twice the Hadamard bound is exceeded.
pub fn resultant_oracle(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let mat = sylvester_matrix(f, g);
    let hadamard: f64 = mat
        .iter()
        .map(|row| {
            let s: f64 = row.iter().map(|x| x.to_f64().unwrap().powi(2)).sum();
            s.sqrt().max(1.0).log2()
        })
        .sum();
    let need_bits = hadamard + 2.0;
    let mut modulus = BigInt::one();
    let mut acc = BigInt::zero();
    let mut p: u64 = (1 << 61) - 1;
    while (modulus.bits() as f64) < need_bits {
        while !is_prime(p) {
            p -= 2;
        }
        let pb = BigInt::from(p);
        let reduced: Vec<Vec<u64>> = mat
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| (((x % &pb) + &pb) % &pb).to_u64().unwrap())
                    .collect()
            })
            .collect();
        let r = BigInt::from(mod_det(reduced, p));
        // acc ≡ r (mod p), acc ≡ acc (mod modulus)
        let m_mod_p = (&modulus % &pb).to_u64().unwrap();
        let inv = BigInt::from(mod_inverse(m_mod_p, p));
        let diff = (((&r - &acc) % &pb) + &pb) % &pb;
        let t = (diff * inv) % &pb;
        acc += &modulus * t;
        modulus *= &pb;
        p -= 2;
    }
    if &acc * 2 > modulus {
        acc - modulus
    } else {
        acc
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i128) as u64
}

pub fn check_res_power(cases: u32) -> Result<String, String> {
    let strategy = (-30i64..=30, 1u64..=60, 1u64..=12, -2000i64..=2000);
    runner(cases)
        .run(&strategy, |(a, n, m, beta)| {
            let f = FrobeniusPoly::new(a, n);
            let mut g = vec![BigInt::zero(); m as usize + 1];
            g[0] = BigInt::from(-beta);
            g[m as usize] = BigInt::one();
            let fast = res_power(&f, m, &BigInt::from(beta));
            let slow = resultant_oracle(&f.coefficients(), &g);
            prop_assert_eq!(fast, slow, "a={} n={} m={} beta={}", a, n, m, beta);
            Ok(())
        })
        .map(|_| format!("{cases} random (a, n, m, beta) agree exactly"))
        .map_err(|e| e.to_string())
}

// ---------------------------------------------------------------------------
// Class numbers from the analytic class number formula.

/// Kronecker symbol `(D/n)` for `n > 0`.
pub fn kronecker(disc: i64, n: u64) -> i64 {
    let mut n = n;
    let mut result = 1i64;
    while n % 2 == 0 {
        n /= 2;
        match disc.rem_euclid(8) {
            1 | 7 => {}
            3 | 5 => result = -result,
            _ => return 0,
        }
    }
    // Jacobi (disc / n) for odd n
    let mut a = disc.rem_euclid(n as i64) as u64;
    let mut m = n;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if m % 8 == 3 || m % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            result = -result;
        }
        a %= m;
    }
    if m == 1 {
        result
    } else {
        0
    }
}

fn squarefree(n: u64) -> bool {
    let mut k = 2u64;
    while k * k <= n {
        if n % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Fundamental discriminants `D ≠ 1` with `|D| ≤ limit`, with their radicand.
pub fn fundamental_discriminants(limit: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for disc in -limit..=limit {
        if disc == 0 || disc == 1 {
            continue;
        }
        if disc.rem_euclid(4) == 1 && squarefree(disc.unsigned_abs()) {
            out.push((disc, disc));
        } else if disc.rem_euclid(4) == 0 {
            let m = disc / 4;
            if matches!(m.rem_euclid(4), 2 | 3) && squarefree(m.unsigned_abs()) {
                out.push((disc, m));
            }
        }
    }
    out
}

/// `h = −(w / 2|D|) Σ_{a<|D|} χ(a)·a` for `D < 0`.
pub fn imaginary_class_number(disc: i64) -> u64 {
    let w = match disc {
        -3 => 6,
        -4 => 4,
        _ => 2,
    };
    let n = disc.unsigned_abs();
    let s: i64 = (1..n).map(|a| kronecker(disc, a) * a as i64).sum();
    (-(w * s) / (2 * n as i64)) as u64
}

/// Number of reduced positive definite forms of discriminant `D < 0`:
/// `|b| ≤ a ≤ c`, with `b ≥ 0` whenever `|b| = a` or `a = c`.
pub fn reduced_form_count(disc: i64) -> u64 {
    let n = -disc;
    let mut count = 0;
    let mut a = 1i64;
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            let num = b * b + n;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (a == c && b < 0) {
                continue;
            }
            count += 1;
        }
        a += 1;
    }
    count
}

/// `h·log ε = −½ Σ_{a<D} χ(a)·log sin(πa/D)` for `D > 0`.
pub fn real_regulator_times_h(disc: i64) -> f64 {
    let n = disc as u64;
    -0.5 * (1..n)
        .map(|a| kronecker(disc, a) as f64 * (PI * a as f64 / disc as f64).sin().ln())
        .sum::<f64>()
}

fn distinct_prime_factors(mut n: u64) -> u32 {
    let mut count = 0;
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            count += 1;
            while n % k == 0 {
                n /= k;
            }
        }
        k += 1;
    }
    count + (n > 1) as u32
}

pub fn check_class_groups(limit: i64) -> Result<String, String> {
    let discs = fundamental_discriminants(limit);
    let mut checked = 0;
    for &(disc, d) in &discs {
        let k = make_field(d).map_err(|e| format!("d={d}: {e}"))?;
        if k.disc() != disc {
            return Err(format!("d={d}: discriminant {} != {disc}", k.disc()));
        }
        let h = k.class_order();
        if disc < 0 {
            let expect = imaginary_class_number(disc);
            if h != expect {
                return Err(format!("D={disc}: h = {h}, formula gives {expect}"));
            }
            let forms = reduced_form_count(disc);
            if h != forms {
                return Err(format!("D={disc}: h = {h}, but {forms} reduced forms"));
            }
            // genus theory: 2-rank is t − 1
            let t = distinct_prime_factors(disc.unsigned_abs());
            let two_torsion = k
                .class_group()
                .element_orders()
                .iter()
                .filter(|&&o| o <= 2)
                .count() as u64;
            if two_torsion != 1 << (t - 1) {
                return Err(format!(
                    "D={disc}: {two_torsion} elements of order <= 2, expected 2^{}",
                    t - 1
                ));
            }
        } else {
            let eps = k.fundamental_unit().map_err(|e| e.to_string())?;
            let (l1, l2) = eps.ln_embeddings();
            let reg = l1.abs().max(l2.abs());
            let hr = real_regulator_times_h(disc);
            if ((h as f64) * reg - hr).abs() > 1e-6 * hr.max(1.0) {
                return Err(format!(
                    "D={disc}: h*log(eps) = {} but formula gives {hr}",
                    h as f64 * reg
                ));
            }
        }
        let product: u64 = k.class_structure().iter().product();
        if product != h {
            return Err(format!(
                "D={disc}: invariant factors {:?} do not multiply to {h}",
                k.class_structure()
            ));
        }
        checked += 1;
    }
    Ok(format!(
        "{checked} fundamental discriminants with |D| <= {limit}"
    ))
}

// ---------------------------------------------------------------------------
// Auxiliary-prime invariants.

pub const PROPERTY_FIELDS: [i64; 10] = [-5, -6, -14, -23, -47, 2, 6, 10, 15, 79];

fn split_primes(k: &QuadField, below: u64) -> Vec<u64> {
    (2..below)
        .filter(|&q| is_prime(q) && k.splitting_type(q).unwrap() == Splitting::Split)
        .collect()
}

pub fn check_conjugate_independence(cases: u32) -> Result<String, String> {
    let fields: Vec<QuadField> = PROPERTY_FIELDS
        .iter()
        .map(|&d| make_field(d).unwrap())
        .collect();
    let pools: Vec<Vec<u64>> = fields.iter().map(|k| split_primes(k, 100)).collect();
    let strategy = (0..fields.len(), any::<prop::sample::Index>(), 0..4usize);
    runner(cases)
        .run(&strategy, |(fi, qi, si)| {
            let k = &fields[fi];
            let q = pools[fi][qi.index(pools[fi].len())];
            let sig = IsogenySignature::ALL[si];
            let data = k.aux_prime_data(q).unwrap();
            let other = data.conjugate();
            // the conjugate generator really generates the other prime power
            prop_assert_eq!(data.alpha.norm().abs(), BigInt::from(q).pow(data.r as u32));
            prop_assert_ne!(data.ideal_root, other.ideal_root);
            prop_assert_eq!(
                compute_rq(&data, sig),
                compute_rq(&other, sig),
                "d={} q={}",
                k.d(),
                q
            );
            prop_assert_eq!(
                compute_mq(&data, sig),
                compute_mq(&other, sig),
                "d={} q={}",
                k.d(),
                q
            );
            Ok(())
        })
        .map(|_| format!("{cases} random split primes over {} fields", fields.len()))
        .map_err(|e| e.to_string())
}

pub fn check_pcrit_refines(cases: u32) -> Result<String, String> {
    let fields: Vec<QuadField> = PROPERTY_FIELDS
        .iter()
        .map(|&d| make_field(d).unwrap())
        .collect();
    let aux: Vec<u64> = (2..30).filter(|&q| is_prime(q)).collect();
    let ps: Vec<u64> = (17..600).filter(|&p| is_prime(p)).collect();
    let strategy = (
        0..fields.len(),
        any::<prop::sample::Index>(),
        any::<prop::sample::Index>(),
        0..4usize,
    );
    runner(cases)
        .run(&strategy, |(fi, qi, pi, si)| {
            let k = &fields[fi];
            let q = aux[qi.index(aux.len())];
            let p = ps[pi.index(ps.len())];
            let sig = IsogenySignature::ALL[si];
            let data = k.aux_prime_data(q).unwrap();
            if p == q || data.n_q % p == 0 {
                return Ok(());
            }
            let map = ResidueMap::new(k.ring(), p);
            if let PcritOutcome::Compatible { .. } = pcrit_check(p, &data, sig, &map) {
                let rq = compute_rq(&data, sig);
                prop_assert!(divides(p, &rq), "d={} q={} p={} sig={}", k.d(), q, p, sig);
            }
            Ok(())
        })
        .map(|_| format!("{cases} random (p, q, field, signature)"))
        .map_err(|e| e.to_string())
}

pub fn check_signature_algebra() -> Result<String, String> {
    for s in IsogenySignature::ALL {
        if s.tau().tau() != s || s.atkin_lehner().atkin_lehner() != s {
            return Err(format!("{s}: not an involution"));
        }
        if s.tau().is_constant() != s.is_constant()
            || s.atkin_lehner().is_constant() != s.is_constant()
        {
            return Err(format!("{s}: constancy not preserved"));
        }
        if s.tau().atkin_lehner() != s.atkin_lehner().tau() {
            return Err(format!("{s}: tau and w_p do not commute"));
        }
    }
    for (a, b) in [(13, 0), (0, 6), (-12, 0), (24, 12)] {
        if IsogenySignature::new(a, b).is_ok() {
            return Err(format!("({a},{b}) accepted"));
        }
    }
    Ok("all four signatures".to_string())
}

// ---------------------------------------------------------------------------
// Evidence re-validation: every Eliminated verdict must be reproducible.

pub fn validate_evidence(report: &SieveReport, field: Option<&QuadField>) -> Result<(), String> {
    for o in report
        .outcomes
        .iter()
        .filter(|o| o.status == Status::Eliminated)
    {
        let p = o.p;
        let reason = o
            .reason
            .ok_or(format!("p={p}: eliminated without a reason"))?;
        let mut confirmed = false;
        for e in o.evidence.iter().filter(|e| e.criterion == reason) {
            let rec = e.aux_prime.and_then(|q| report.record(e.step, q));
            let ok = match e.criterion {
                Reason::RqGcd => {
                    let r = rec.ok_or(format!("p={p}: missing R_q record"))?;
                    !divides(p, &r.r_q)
                }
                Reason::MqCheck => {
                    let r = rec.ok_or(format!("p={p}: missing R_q*M_q record"))?;
                    let prod = &r.r_q * r.m_q.as_ref().ok_or("no M_q")?;
                    !prod.is_zero() && !divides(p, &prod)
                }
                Reason::Pcrit => {
                    let r = rec.ok_or(format!("p={p}: missing pcrit record"))?;
                    r.possibilities.iter().all(|x| {
                        let out = isosieve::sieve::pcrit_constant(p, x.n_q, x.r);
                        let gone = matches!(out, PcritOutcome::Eliminated)
                            || (matches!(out, PcritOutcome::EmptyTraceSet)
                                && report.config.empty_trace_set_eliminates);
                        gone && !(x.split_capable && isosieve::sieve::red2_holds(p, x.r))
                    })
                }
                Reason::SplitCheck => match field {
                    Some(k) => k.splitting_type(p).unwrap() != Splitting::Split,
                    None => false,
                },
                Reason::EpsCondition => e.value.as_ref().is_some_and(|v| !divides(p, v)),
                Reason::OesterleBound => match &e.value {
                    Some(b) => BigInt::from(p) >= *b,
                    None => p % 12 != 1,
                },
                Reason::ExceptionalPointsTable => {
                    let d = field.map(|k| k.d());
                    isosieve::strategy::tables::exceptional_lemma_applies(d, p)
                }
                Reason::CuratedTable => {
                    let d = field
                        .map(|k| k.d())
                        .ok_or("curated entry without a field")?;
                    isosieve::strategy::tables::step3_override(d, p)
                        .is_some_and(|x| x.status == Status::Eliminated)
                }
                Reason::Red2 | Reason::KnownWitness => false,
            };
            if !ok {
                return Err(format!(
                    "p={p}: evidence {:?} at q={:?} does not hold",
                    e.criterion, e.aux_prime
                ));
            }
            confirmed = true;
        }
        if !confirmed {
            return Err(format!("p={p}: no evidence for {reason:?}"));
        }
        // eliminating both branches needs evidence from both, unless Step 3 decided
        if field.is_some()
            && !matches!(
                reason,
                Reason::CuratedTable | Reason::ExceptionalPointsTable
            )
        {
            let steps: Vec<Step> = o.evidence.iter().map(|e| e.step).collect();
            if !(steps.contains(&Step::Constant) && steps.contains(&Step::NonConstant)) {
                return Err(format!(
                    "p={p}: eliminated without covering both signature branches"
                ));
            }
        }
    }
    Ok(())
}
