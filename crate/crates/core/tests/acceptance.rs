//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cyclodyne::adic::{
    fcsr_expand, periodic_rational, raa_synthesize, two_adic_complexity, DyadicRational,
};
use cyclodyne::cyclotomy::{
    coset_action_check, cyclotomic_n_bruteforce, cyclotomic_n_closed, cyclotomic_q_bruteforce,
    cyclotomic_q_closed, shifted_intersection_closed, shifted_intersection_count, ModulusTag,
    Partition,
};
use cyclodyne::ntcore::{primes_up_to, PeriodParams};
use cyclodyne::verify::lemmas::{sample, GAUSS_TOLERANCE_PER_N};
use cyclodyne::verify::{
    eta_product_exact, expected_eta_product, gauss_periods_numeric, gcd_divisibility, twin_sweep,
    verify_det,
};
use cyclodyne::{BinarySequence, Execution, SequenceClass};

const SEED: u64 = 0;
const TWIN_BUDGET: Duration = Duration::from_secs(10);
const DET_BUDGET: Duration = Duration::from_secs(120);
const TWINS: [(u64, u64); 8] = [
    (3, 5),
    (5, 7),
    (11, 13),
    (17, 19),
    (29, 31),
    (41, 43),
    (59, 61),
    (71, 73),
];
const NON_TWINS: [(u64, u64); 3] = [(3, 7), (3, 11), (7, 11)];
const CLASSES: [SequenceClass; 2] = [SequenceClass::Dh1, SequenceClass::Dh2];

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        ok,
        detail: detail.into(),
    }
}

fn params(p: u64, q: u64) -> PeriodParams {
    PeriodParams::new(p, q, None).expect("valid pair")
}

fn part(p: u64, q: u64) -> Partition {
    Partition::build(&params(p, q)).expect("partition")
}

/// Every `(p, q)` the constructor accepts with `N < bound`.
fn valid_pairs(bound: u64) -> Vec<PeriodParams> {
    let primes: Vec<u64> = primes_up_to(bound / 3)
        .into_iter()
        .filter(|&p| p > 2)
        .collect();
    let mut out = Vec::new();
    for (i, &p) in primes.iter().enumerate() {
        for &q in &primes[i + 1..] {
            if p * q >= bound {
                break;
            }
            if let Ok(params) = PeriodParams::new(p, q, None) {
                out.push(params);
            }
        }
    }
    out
}

fn twin_sweep_criterion() -> Verdict {
    let start = Instant::now();
    let rows = match twin_sweep(71, false, Execution::default()) {
        Ok(r) => r,
        Err(e) => return check(false, e.to_string()),
    };
    let elapsed = start.elapsed();
    let pairs: Vec<(u64, u64)> = rows.iter().step_by(2).map(|r| (r.p, r.q)).collect();
    let bad: Vec<String> = rows
        .iter()
        .filter(|r| !(r.gcd == "1" && r.phi2 + 1 == r.n))
        .map(|r| format!("({},{}) class {}", r.p, r.q, r.class))
        .collect();
    check(
        rows.len() == 16 && pairs == TWINS && bad.is_empty() && elapsed < TWIN_BUDGET,
        format!(
            "{} rows, gcd=1 and phi2=N-1 failures: {:?}, {:.2?}",
            rows.len(),
            bad,
            elapsed
        ),
    )
}

fn determinant_criterion() -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    let exact_expect = [
        ((3, 5, SequenceClass::Dh1), Some(32)),
        ((3, 5, SequenceClass::Dh2), Some(864)),
    ];
    for (p, q) in [(3, 5), (5, 7), (11, 13), (17, 19), (3, 7), (7, 11)] {
        for class in CLASSES {
            let report = match verify_det(&params(p, q), class, 5, SEED) {
                Ok(r) => r,
                Err(e) => {
                    failures.push(format!("({p},{q}) {class}: {e}"));
                    continue;
                }
            };
            checked += report.primes.len();
            if report.primes.len() != 5 || report.primes.iter().any(|c| !c.ok) {
                failures.push(format!("({p},{q}) {class}: modular mismatch"));
            }
            if p * q <= 35 {
                match &report.exact {
                    Some(x) if x.ok || x.sign_flip => {
                        let want = exact_expect
                            .iter()
                            .find(|(k, _)| *k == (p, q, class))
                            .and_then(|(_, v)| *v);
                        if want.is_some_and(|w: i64| {
                            x.det.parse::<BigInt>().ok() != Some(BigInt::from(w).abs())
                        }) {
                            failures.push(format!(
                                "({p},{q}) {class}: det {} != {}",
                                x.det,
                                want.unwrap()
                            ));
                        }
                    }
                    _ => failures.push(format!("({p},{q}) {class}: exact determinant disagrees")),
                }
            }
        }
    }
    let elapsed = start.elapsed();
    check(
        failures.is_empty() && elapsed < DET_BUDGET,
        format!(
            "{checked} prime residues, exact at N=15,35; failures: {failures:?}, {elapsed:.2?}"
        ),
    )
}

fn cyclotomic_criterion() -> Verdict {
    let mut failures = Vec::new();
    let qs: Vec<u64> = primes_up_to(499).into_iter().filter(|&q| q > 2).collect();
    for &q in &qs {
        if cyclotomic_q_bruteforce(q) != cyclotomic_q_closed(q) {
            failures.push(format!("q-table q={q}"));
        }
    }
    let pairs = valid_pairs(5000);
    for params in &pairs {
        let pt = Partition::build(params).expect("partition");
        if cyclotomic_n_bruteforce(&pt) != cyclotomic_n_closed(params) {
            failures.push(format!("N-table ({},{})", params.p(), params.q()));
        }
    }
    let mut shifts_checked = 0;
    for ((p, q), sampled) in [
        ((3, 5), false),
        ((5, 7), false),
        ((11, 13), false),
        ((17, 19), true),
    ] {
        let pt = part(p, q);
        let pool: Vec<u64> = pt.pset().iter().chain(pt.qset()).copied().collect();
        let shifts = if sampled {
            sample(&pool, 50, SEED)
        } else {
            pool
        };
        for w in shifts {
            shifts_checked += 1;
            for i in 0..2 {
                for j in 0..2 {
                    if shifted_intersection_closed(&pt, i, j, w).ok()
                        != Some(shifted_intersection_count(&pt, i, j, w))
                    {
                        failures.push(format!("shift ({p},{q}) w={w} ({i},{j})"));
                    }
                }
            }
        }
    }
    check(
        failures.is_empty(),
        format!(
            "{} q-tables, {} N-tables, {} shifts; failures: {:?}",
            qs.len(),
            pairs.len(),
            shifts_checked,
            failures
        ),
    )
}

fn coset_criterion() -> Verdict {
    let mut failures = Vec::new();
    let (mut refuted, mut covers) = (0, 0);
    for (p, q) in [(3, 5), (5, 7), (11, 13)] {
        let pt = part(p, q);
        for a in 0..pt.n() {
            let r = coset_action_check(&pt, a);
            if !r.passed() {
                failures.push(format!(
                    "({p},{q}) a={a}: {:?}",
                    r.violations().map(|c| &c.name).collect::<Vec<_>>()
                ));
            }
            if let Some(uniform) = r.uniform_half_cover {
                covers += 1;
                refuted += usize::from(!uniform);
            }
        }
    }
    let pairs = valid_pairs(5000);
    let minus_one_bad = pairs
        .iter()
        .filter(|params| {
            Partition::build(params)
                .and_then(|pt| pt.minus_one_class())
                .is_err()
        })
        .count();
    check(
        failures.is_empty() && minus_one_bad == 0,
        format!(
            "all a at N=15,35,143; uniform cover reading refuted at {refuted}/{covers} multipliers in P u Q \
             (recorded); -1 class wrong at {minus_one_bad}/{} pairs; failures: {failures:?}",
            pairs.len()
        ),
    )
}

fn gauss_criterion() -> Verdict {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    let pairs = valid_pairs(10_001);
    for params in &pairs {
        let pt = Partition::build(params).expect("partition");
        for tag in [ModulusTag::N, ModulusTag::Q] {
            let g = gauss_periods_numeric(tag, &pt);
            let ratio = g.max_residual() / pt.n() as f64;
            worst = worst.max(ratio);
            if ratio >= GAUSS_TOLERANCE_PER_N {
                failures.push(format!("residual ({},{}) {tag:?}", params.p(), params.q()));
            }
        }
    }
    let mut exact_checked = 0;
    for (p, q) in TWINS.iter().chain(&NON_TWINS) {
        let pt = part(*p, *q);
        for tag in [ModulusTag::Q, ModulusTag::N] {
            exact_checked += 1;
            if eta_product_exact(tag, &pt) != Ok(expected_eta_product(*q)) {
                failures.push(format!("eta product ({p},{q}) {tag:?}"));
            }
        }
    }
    check(
        failures.is_empty(),
        format!(
            "{} pairs with N <= 1e4, worst residual/N {worst:.2e}; {exact_checked} exact eta products; failures: {failures:?}",
            pairs.len()
        ),
    )
}

fn random_rational(rng: &mut ChaCha8Rng) -> DyadicRational {
    loop {
        let f_bits = rng.random_range(1..=32u32);
        let g_bits = rng.random_range(1..=32u32);
        let f = rng.random_range(0..1i64 << f_bits) * if rng.random::<bool>() { -1 } else { 1 };
        let g = rng.random_range(0..1i64 << g_bits) | 1;
        if f.gcd(&g) == 1 || f == 0 {
            return DyadicRational::new(f, g).expect("odd denominator");
        }
    }
}

fn raa_criterion() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = Vec::new();
    for _ in 0..200 {
        let r = random_rational(&mut rng);
        let bits = (r.numerator().bits() + r.denominator().bits()) as usize;
        let got = raa_synthesize(&fcsr_expand(&r, 2 * bits + 4));
        if got != r {
            failures.push(format!("{r} -> {got}"));
        }
    }
    for (p, q) in [(3, 5), (5, 7)] {
        let pt = part(p, q);
        for class in CLASSES {
            let seq = BinarySequence::generate(&pt, class).expect("sequence");
            let report = two_adic_complexity(&seq);
            let got = raa_synthesize(&seq.periodized(2 * seq.period() + 4));
            let want = periodic_rational(&report);
            if got != want
                || got.denominator().magnitude() != &report.n
                || got.complexity() != report.phi2
            {
                failures.push(format!("({p},{q}) {class}: {got} vs {want}"));
            }
        }
    }
    check(
        failures.is_empty(),
        format!("200 seeded rationals, 4 periodized sequences; failures: {failures:?}"),
    )
}

fn divisibility_criterion() -> Verdict {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (p, q) in TWINS.iter().chain(&NON_TWINS) {
        let params = params(*p, *q);
        let pt = Partition::build(&params).expect("partition");
        for class in CLASSES {
            checked += 1;
            let seq = BinarySequence::generate(&pt, class).expect("sequence");
            match gcd_divisibility(&params, &seq) {
                Ok(d) if d.divides => {}
                Ok(d) => failures.push(format!(
                    "({p},{q}) {class}: {} does not divide {}",
                    d.gcd_s2, d.gcd_det
                )),
                Err(e) => failures.push(format!("({p},{q}) {class}: {e}")),
            }
        }
    }
    check(
        failures.is_empty(),
        format!("{checked} sequences; failures: {failures:?}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("twin-prime sweep", twin_sweep_criterion),
        ("determinant closed forms", determinant_criterion),
        ("cyclotomic closed forms", cyclotomic_criterion),
        ("multiplicative action and class of -1", coset_criterion),
        ("Gauss periods", gauss_criterion),
        ("rational approximation round trip", raa_criterion),
        ("gcd divisibility", divisibility_criterion),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        all &= v.ok;
        println!(
            "{} {}. {name}: {}",
            if v.ok { "PASS" } else { "FAIL" },
            i + 1,
            v.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
