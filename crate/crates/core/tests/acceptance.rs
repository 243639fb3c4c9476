//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use selfsim::cli::run;
use selfsim::exact::{ratfun_reduce, Poly};
use selfsim::fastdet::{det_from_factors, det_selfsim, det_via_perturbation, perturb_with};
use selfsim::oracle::{det_fraction_free, digit_counts_brute, leading_minors, minor_scan};
use selfsim::pascal::{
    binomial_lower, mu_partition_sums, mu_vector, pascal_defining, vanishing_p7, PascalKind,
    PascalRing,
};
use selfsim::selfsim::{compose_triangular, dense, inverse_dense, kron_power, ldu_defining};
use selfsim::{DefiningMatrix, RatFun, Rational, RingValue};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn legendre(p: u64) -> DefiningMatrix {
    pascal_defining(p, PascalKind::Legendre, PascalRing::Rational).unwrap()
}

fn pascal2() -> DefiningMatrix {
    pascal_defining(2, PascalKind::BinomLift, PascalRing::Rational).unwrap()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn signed_power(base: &Rational, e: i128) -> Rational {
    let p = num_traits::pow(base.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn secs(d: Duration) -> String {
    format!("{:.3}s", d.as_secs_f64())
}

fn thue_morse_determinants() -> Outcome {
    let m = pascal2();
    let parity = |k: u64| (k.count_ones() % 2) as i128;
    let start = Instant::now();
    for n in 1..=(1u64 << 16) {
        let half = (n / 2) as i128;
        let exponent = if n % 2 == 0 {
            half
        } else {
            half + parity(n / 2)
        };
        let expected = RingValue::int(if exponent % 2 == 0 { 1 } else { -1 });
        let got = det_selfsim(&m, n)
            .map_err(|e| e.to_string())?
            .expand()
            .map_err(|e| e.to_string())?;
        ensure(got == expected, || {
            format!("n = {n}: got {got}, closed form {expected}")
        })?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(5), || {
        format!("sweep took {}", secs(t))
    })?;
    Ok(format!("n <= 65536 in {}", secs(t)))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let start = Instant::now();
    let mut compared = 0usize;
    for i in 0..200 {
        let b = 2 + i % 4;
        let m = common::random_nondegenerate(&mut rng, b);
        let big = dense(&m, 64).map_err(|e| e.to_string())?;
        let minors = leading_minors(&big);
        for n in 1..=64u64 {
            let fast = det_selfsim(&m, n)
                .map_err(|e| e.to_string())?
                .expand()
                .map_err(|e| e.to_string())?;
            let slow = &minors[n as usize - 1];
            ensure(&fast == slow, || {
                format!("matrix {i} (b = {b}) n = {n}: fast {fast}, oracle {slow}")
            })?;
            compared += 1;
        }
        // Independent elimination for a few sizes per matrix.
        for n in [1u64, 7, 23] {
            let slow = det_fraction_free(&big.leading(n as usize));
            ensure(slow == minors[n as usize - 1], || {
                format!("oracles disagree at matrix {i}, n = {n}")
            })?;
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(120), || format!("took {}", secs(t)))?;
    Ok(format!("{compared} determinants in {}", secs(t)))
}

fn legendre_pivots() -> Outcome {
    let cases = [
        (3u64, vec![q(1, 1), q(-2, 1), q(-1, 2)]),
        (5u64, vec![q(1, 1), q(-2, 1), q(2, 1), q(-3, 2), q(1, 6)]),
    ];
    for (p, expected) in cases {
        let f = ldu_defining(&legendre(p)).map_err(|e| e.to_string())?;
        let got: Vec<Rational> =
            f.d.iter()
                .map(|v| v.as_rational().unwrap().clone())
                .collect();
        ensure(got == expected, || format!("p = {p}: got {got:?}"))?;
    }
    Ok("p = 3 and p = 5 pivots exact".into())
}

fn p3_power_of_minus_two() -> Outcome {
    let m = legendre(3);
    let big = dense(&m, 81).map_err(|e| e.to_string())?;
    let minors = leading_minors(&big);
    for n in 1..=81u64 {
        let counts = digit_counts_brute(n, 3).map_err(|e| e.to_string())?.counts;
        let (e1, e2) = (counts[1] as i128, counts[2] as i128);
        let expected = RingValue::Q(signed_power(&q(-2, 1), e1 - e2));
        let f = det_selfsim(&m, n).map_err(|e| e.to_string())?;
        let factors: Vec<(RingValue, u128)> = f.nontrivial().cloned().collect();
        let mut want = Vec::new();
        if e1 > 0 {
            want.push((RingValue::int(-2), e1 as u128));
        }
        if e2 > 0 {
            want.push((RingValue::frac(-1, 2), e2 as u128));
        }
        ensure(factors == want, || format!("n = {n}: factors {f}"))?;
        let fast = f.expand().map_err(|e| e.to_string())?;
        ensure(fast == expected, || {
            format!("n = {n}: fast {fast}, expected {expected}")
        })?;
        let slow = det_fraction_free(&big.leading(n as usize));
        ensure(
            slow == expected && minors[n as usize - 1] == expected,
            || format!("n = {n}: oracle {slow}, expected {expected}"),
        )?;
    }
    Ok("n <= 81, factored and oracle".into())
}

fn strip_2_3(mut v: BigInt) -> BigInt {
    for p in [2, 3] {
        let p = BigInt::from(p);
        while !v.is_zero() && v.is_multiple_of(&p) {
            v /= &p;
        }
    }
    v.abs()
}

fn p5_prime_support() -> Outcome {
    let m = legendre(5);
    let big = dense(&m, 50).map_err(|e| e.to_string())?;
    for n in 1..=50usize {
        let d = det_fraction_free(&big.leading(n));
        let r = d.as_rational().unwrap();
        ensure(!r.is_zero(), || format!("n = {n}: determinant vanishes"))?;
        ensure(
            strip_2_3(r.numer().clone()).is_one() && strip_2_3(r.denom().clone()).is_one(),
            || format!("n = {n}: {r} has a prime factor other than 2 and 3"),
        )?;
        let fast = det_selfsim(&m, n as u64)
            .map_err(|e| e.to_string())?
            .expand()
            .map_err(|e| e.to_string())?;
        ensure(fast == d, || format!("n = {n}: fast {fast}, oracle {d}"))?;
    }
    Ok("n <= 50 of the form +-2^a 3^b".into())
}

fn p7_degenerate_pipeline() -> Outcome {
    let m = legendre(7);
    let start = Instant::now();
    let big = dense(&m, 100).map_err(|e| e.to_string())?;
    for n in 1..=100u64 {
        let fast = det_via_perturbation(&m, n).map_err(|e| e.to_string())?;
        let slow = det_fraction_free(&big.leading(n as usize));
        ensure(RingValue::Q(fast.clone()) == slow, || {
            format!("n = {n}: perturbed {fast}, oracle {slow}")
        })?;
    }
    let mut vanishing = 0;
    for n in 1..=2401u64 {
        let zero = det_via_perturbation(&m, n)
            .map_err(|e| e.to_string())?
            .is_zero();
        ensure(zero == vanishing_p7(n), || {
            format!("n = {n}: det zero = {zero}, digit criterion disagrees")
        })?;
        vanishing += zero as usize;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), || format!("took {}", secs(t)))?;
    Ok(format!(
        "n <= 100 vs oracle, {vanishing}/2401 vanish, {}",
        secs(t)
    ))
}

fn lifted_pivots() -> Outcome {
    let rf = |num: &[i64], den: &[i64]| {
        ratfun_reduce(Poly::from_ints(num), Poly::from_ints(den)).unwrap()
    };
    let mut direction = vec![Rational::zero(); 49];
    direction[8] = Rational::one();
    let p = perturb_with(&legendre(7), &direction).map_err(|e| e.to_string())?;
    let expected: Vec<RatFun> = vec![
        RatFun::one(),
        RatFun::t(),
        rf(&[-4, -2], &[0, 1]),
        rf(&[-4], &[2, 1]),
        rf(&[-10, 1], &[4]),
        rf(&[-8, -1], &[-20, 2]),
        rf(&[-1], &[8, 1]),
    ];
    let got = p.lifted_d();
    ensure(got == expected, || {
        let shown: Vec<String> = got.iter().map(|d| d.to_string()).collect();
        format!("got {}", shown.join(", "))
    })?;
    let shown: Vec<String> = got.iter().map(|d| d.to_string()).collect();
    Ok(shown.join(", "))
}

fn structure_properties() -> Outcome {
    let runner = || {
        TestRunner::new(Config {
            cases: 100,
            failure_persistence: None,
            ..Config::default()
        })
    };
    let fail = |name: &str, e: String| format!("{name}: {e}");

    runner()
        .run(&(common::nondegenerate(2..=4), 1u64..=64), |(m, n)| {
            let f = ldu_defining(&m).unwrap();
            let product = dense(&f.lower, n)
                .unwrap()
                .mul(&dense(&f.diagonal(), n).unwrap())
                .unwrap()
                .mul(&dense(&f.upper, n).unwrap())
                .unwrap();
            if product != dense(&m, n).unwrap() {
                return Err(TestCaseError::fail(format!("L D U != M(n) at n = {n}")));
            }
            Ok(())
        })
        .map_err(|e| fail("LDU reconstruction", e.to_string()))?;

    runner()
        .run(
            &(common::lower_pair(2..=4), 1u64..=32, proptest::bool::ANY),
            |((r, t), n, upper)| {
                let (r, t) = if upper {
                    (r.transpose(), t.transpose())
                } else {
                    (r, t)
                };
                let lhs = dense(&compose_triangular(&r, &t).unwrap(), n).unwrap();
                let rhs = dense(&r, n).unwrap().mul(&dense(&t, n).unwrap()).unwrap();
                if lhs != rhs {
                    return Err(TestCaseError::fail(format!("group law fails at n = {n}")));
                }
                Ok(())
            },
        )
        .map_err(|e| fail("triangular group law", e.to_string()))?;

    runner()
        .run(&(common::defining(2..=3), 1u32..=4), |(m, d)| {
            let b = m.base() as u64;
            if kron_power(&m, d).unwrap() != dense(&m, b.pow(d)).unwrap() {
                return Err(TestCaseError::fail(format!(
                    "Kronecker power differs at d = {d}"
                )));
            }
            Ok(())
        })
        .map_err(|e| fail("Kronecker equivalence", e.to_string()))?;

    runner()
        .run(&(common::nondegenerate(2..=4), 1u64..=64), |(m, n)| {
            let prod = dense(&m, n)
                .unwrap()
                .mul(&inverse_dense(&m, n).unwrap())
                .unwrap();
            if !prod.is_identity() {
                return Err(TestCaseError::fail(format!("M(n) M(n)^-1 != I at n = {n}")));
            }
            Ok(())
        })
        .map_err(|e| fail("inverse identity", e.to_string()))?;

    Ok("4 properties x 100 cases".into())
}

fn conjecture_scans() -> Outcome {
    let m = pascal2();
    for n in 1..=128u64 {
        let inv = inverse_dense(&m, n).map_err(|e| e.to_string())?;
        for i in 0..inv.size() {
            for j in 0..inv.size() {
                let v = inv.get(i, j);
                let ok = v.is_zero() || v.is_one() || v.neg().is_one();
                ensure(ok, || {
                    format!("inverse of M({n}) has entry {v} at ({i}, {j})")
                })?;
            }
        }
    }
    let mut scanned = 0;
    for l in 1..=6 {
        let report = minor_scan(&m, l, 64, 64);
        scanned += report.scanned;
        if let Some((s, t, d)) = report.violations.first() {
            return Err(format!(
                "{} blocks of size {l} outside {{0, 1, -1}}; first at s = {s}, t = {t}: det = {d}",
                report.violations.len()
            ));
        }
    }
    Ok(format!(
        "inverses n <= 128 in {{-1, 0, 1}}; {scanned} consecutive minors in {{0, 1, -1}}"
    ))
}

fn mu_identities() -> Outcome {
    for b in [2u64, 3, 5] {
        let l = dense(&binomial_lower(b as usize).unwrap(), 256).map_err(|e| e.to_string())?;
        for n in 1..=256u64 {
            let mu = mu_vector(b, n).map_err(|e| e.to_string())?;
            let image = l
                .leading(n as usize)
                .mul_vec(&mu.as_ring_values())
                .map_err(|e| e.to_string())?;
            let ok = image
                .iter()
                .enumerate()
                .all(|(i, v)| if i == 0 { v.is_one() } else { v.is_zero() });
            ensure(ok, || format!("b = {b}, n = {n}: L(n) mu != e_0"))?;
        }
    }
    for b in [3u64, 5] {
        for n in 1..=200u64 {
            let mut digit_sum = 0u64;
            let mut k = n;
            while k > 0 {
                digit_sum += k % b;
                k /= b;
            }
            let expected = BigUint::one() << (digit_sum - 1);
            let sums = mu_partition_sums(b, n).map_err(|e| e.to_string())?;
            ensure(sums == (expected.clone(), expected.clone()), || {
                format!("b = {b}, n = {n}: got {sums:?}, expected {expected} twice")
            })?;
        }
    }
    Ok("L(n) mu = e_0 for b in {2,3,5}, n <= 256; partition sums for b in {3,5}, n <= 200".into())
}

fn median_time(mut f: impl FnMut(), reps: usize) -> Duration {
    let mut v: Vec<Duration> = (0..reps)
        .map(|_| {
            let s = Instant::now();
            f();
            s.elapsed()
        })
        .collect();
    v.sort();
    v[reps / 2]
}

fn performance() -> Outcome {
    let m = pascal2();
    let fast = |n: u64| {
        let f = det_selfsim(&m, n).unwrap();
        std::hint::black_box(f.expand().unwrap());
    };
    let single = |n: u64| {
        let s = Instant::now();
        fast(n);
        s.elapsed()
    };
    let (t6, t9) = (single(1_000_000), single(1_000_000_000));
    let limit = Duration::from_millis(50);
    ensure(t6 < limit && t9 < limit, || {
        format!("n = 10^6 took {t6:?}, n = 10^9 took {t9:?}")
    })?;

    let s = Instant::now();
    let oracle = det_fraction_free(&dense(&m, 512).unwrap());
    let t_oracle = s.elapsed();
    let expected = det_from_factors(&ldu_defining(&m).unwrap(), 512)
        .unwrap()
        .expand()
        .unwrap();
    ensure(oracle == expected, || {
        format!("oracle {oracle} != fast {expected} at n = 512")
    })?;
    let slowest = t6.max(t9);
    ensure(t_oracle >= slowest * 100, || {
        format!("dense n = 512 took {t_oracle:?}, fast path {slowest:?}")
    })?;

    let medians: Vec<Duration> = [1_000u64, 1_000_000, 1_000_000_000]
        .iter()
        .map(|&n| median_time(|| fast(n), 51))
        .collect();
    let (lo, hi) = (medians.iter().min().unwrap(), medians.iter().max().unwrap());
    ensure(*hi <= *lo * 10, || {
        format!("fast path medians {medians:?} are not flat")
    })?;

    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/pascal2.mat");
    let mut table = Vec::new();
    let mut notes = Vec::new();
    let code = run(
        [
            "selfsim",
            "bench",
            "--def",
            path,
            "--n-list",
            "1000,1000000,1000000000,512",
            "--oracle",
        ],
        &mut table,
        &mut notes,
    );
    ensure(code == 0, || format!("bench exited with {code}"))?;
    for line in String::from_utf8_lossy(&table).lines() {
        println!("        {line}");
    }
    Ok(format!(
        "10^6: {t6:?}, 10^9: {t9:?}, dense 512: {t_oracle:?} ({:.0}x); medians {medians:?}",
        t_oracle.as_secs_f64() / slowest.as_secs_f64()
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("Thue-Morse determinants", thue_morse_determinants),
        (
            "oracle equivalence on random defining matrices",
            oracle_equivalence,
        ),
        ("pivots of the p = 3 and p = 5 matrices", legendre_pivots),
        ("p = 3 determinants are powers of -2", p3_power_of_minus_two),
        ("p = 5 determinants factor over {2, 3}", p5_prime_support),
        ("p = 7 degenerate pipeline", p7_degenerate_pipeline),
        ("lifted pivots of the perturbed p = 7 matrix", lifted_pivots),
        ("structure properties", structure_properties),
        ("conjecture scans", conjecture_scans),
        ("mu identities", mu_identities),
        ("performance of the factored determinant", performance),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = secs(start.elapsed());
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} [{elapsed}]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{elapsed}]: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
