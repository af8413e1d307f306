//! Cyclotomic check suite for one `(p, q)`: each closed form against enumeration.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cyclotomy::{
    coset_action_check, cyclotomic_n_bruteforce, cyclotomic_n_closed, cyclotomic_q_bruteforce,
    cyclotomic_q_closed, ModulusTag, Partition,
};
use crate::error::Result;
use crate::ntcore::PeriodParams;
use crate::par::Execution;
use crate::verify::gauss::{eta_product_expr, expected_eta_product, gauss_periods_numeric};

/// Periods up to this size are checked exhaustively (every multiplier,
/// every shift); larger ones are sampled.
pub const EXHAUSTIVE_PERIOD: u64 = 5000;
pub const SAMPLED_MULTIPLIERS: usize = 100;
pub const SAMPLED_SHIFTS: usize = 50;
/// Numeric residual tolerance per unit of modulus.
pub const GAUSS_TOLERANCE_PER_N: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaOutcome {
    pub lemma: &'static str,
    pub checks: u64,
    pub failures: u64,
    pub ok: bool,
    pub note: Option<String>,
}

impl LemmaOutcome {
    fn new(lemma: &'static str, checks: u64, failures: u64) -> Self {
        LemmaOutcome {
            lemma,
            checks,
            failures,
            ok: failures == 0,
            note: None,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaSuiteReport {
    pub p: u64,
    pub q: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub lemmas: Vec<LemmaOutcome>,
    pub ok: bool,
}

/// `count` distinct seeded picks from `pool` (all of it when small enough).
pub fn sample(pool: &[u64], count: usize, seed: u64) -> Vec<u64> {
    if pool.len() <= count {
        return pool.to_vec();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = rand::seq::index::sample(&mut rng, pool.len(), count).into_vec();
    idx.sort_unstable();
    idx.into_iter().map(|i| pool[i]).collect()
}

/// Multiplicative action at each multiplier. The note counts multipliers in `P ∪ Q`
/// where the uniform cover reading fails (all of `P`, none of `Q`).
pub fn check_coset_action(part: &Partition, multipliers: &[u64], exec: Execution) -> LemmaOutcome {
    let reports = exec.map(multipliers, |&a| coset_action_check(part, a));
    let failures = reports.iter().filter(|r| !r.passed()).count() as u64;
    let with_cover: Vec<bool> = reports
        .iter()
        .filter_map(|r| r.uniform_half_cover)
        .collect();
    let refuted = with_cover.iter().filter(|&&ok| !ok).count();
    LemmaOutcome::new("coset action", reports.len() as u64, failures).with_note(format!(
        "uniform cover refuted at {refuted} of {} multipliers in P u Q; \
         for a in P each a*D_i covers half of P, p-1 times each",
        with_cover.len()
    ))
}

pub fn check_minus_one(part: &Partition) -> LemmaOutcome {
    LemmaOutcome::new("class of -1", 1, u64::from(part.minus_one_class().is_err()))
}

pub fn check_q_table(q: u64) -> LemmaOutcome {
    LemmaOutcome::new(
        "cyclotomic numbers mod q",
        1,
        u64::from(cyclotomic_q_bruteforce(q) != cyclotomic_q_closed(q)),
    )
}

pub fn check_n_table(part: &Partition) -> LemmaOutcome {
    LemmaOutcome::new(
        "cyclotomic numbers mod N",
        1,
        u64::from(cyclotomic_n_bruteforce(part) != cyclotomic_n_closed(part.params())),
    )
}

/// Shifted intersections for every `(i, j)` at each shift.
pub fn check_shifts(part: &Partition, shifts: &[u64], exec: Execution) -> LemmaOutcome {
    let failures: u64 = exec
        .map(shifts, |&w| {
            let mut bad = 0u64;
            for i in 0..2 {
                for j in 0..2 {
                    if crate::cyclotomy::shifted_intersection(part, i, j, w).is_err() {
                        bad += 1;
                    }
                }
            }
            bad
        })
        .into_iter()
        .sum();
    LemmaOutcome::new("shifted intersections", 4 * shifts.len() as u64, failures)
}

/// Gauss period residuals over `Z_N` and `Z_q` within `1e-9 * modulus`.
pub fn check_gauss_identities(part: &Partition) -> LemmaOutcome {
    let mut checks = 0;
    let mut failures = 0;
    let mut worst = 0.0f64;
    for tag in [ModulusTag::N, ModulusTag::Q] {
        let g = gauss_periods_numeric(tag, part);
        let tol = GAUSS_TOLERANCE_PER_N * part.n() as f64;
        for r in &g.residuals {
            checks += 1;
            worst = worst.max(r.value);
            if r.value >= tol {
                failures += 1;
            }
        }
    }
    LemmaOutcome::new("Gauss period identities", checks, failures)
        .with_note(format!("max residual {worst:.3e}"))
}

/// `η0 η1` reduced exactly over both moduli and compared with `-(q-1)/4`
/// or `(q+1)/4`, plus agreement with the numeric product.
pub fn eta_products(part: &Partition, exec: Execution) -> LemmaOutcome {
    let q = part.params().q();
    let expected = expected_eta_product(q);
    let mut failures = 0;
    let mut values = Vec::new();
    for tag in [ModulusTag::Q, ModulusTag::N] {
        let exact = eta_product_expr(tag, part, exec).and_then(|e| e.reduce());
        let numeric = gauss_periods_numeric(tag, part).eta_product();
        match exact {
            Ok(v) => {
                let tol = GAUSS_TOLERANCE_PER_N * part.n() as f64;
                if v != expected || (numeric.re - v as f64).abs() >= tol || numeric.im.abs() >= tol
                {
                    failures += 1;
                }
                values.push(format!("{tag:?}: {v}"));
            }
            Err(e) => {
                failures += 1;
                values.push(format!("{tag:?}: {e}"));
            }
        }
    }
    LemmaOutcome::new("eta0*eta1", 2, failures)
        .with_note(format!("expected {expected}; {}", values.join(", ")))
}

/// All lemma checks for one parameter pair.
pub fn verify_lemmas(
    params: &PeriodParams,
    seed: u64,
    exec: Execution,
) -> Result<LemmaSuiteReport> {
    let part = Partition::build(params)?;
    let n = params.n();
    let exhaustive = n <= EXHAUSTIVE_PERIOD;

    let all: Vec<u64> = (0..n).collect();
    let multipliers = if exhaustive {
        all
    } else {
        sample(&all, SAMPLED_MULTIPLIERS, seed)
    };
    let shift_pool: Vec<u64> = part.pset().iter().chain(part.qset()).copied().collect();
    let shifts = if exhaustive {
        shift_pool
    } else {
        sample(&shift_pool, SAMPLED_SHIFTS, seed.wrapping_add(1))
    };

    let lemmas = vec![
        check_coset_action(&part, &multipliers, exec),
        check_minus_one(&part),
        check_q_table(params.q()),
        check_n_table(&part),
        check_shifts(&part, &shifts, exec),
        check_gauss_identities(&part),
        eta_products(&part, exec),
    ];
    Ok(LemmaSuiteReport {
        p: params.p(),
        q: params.q(),
        n,
        ok: lemmas.iter().all(|l| l.ok),
        lemmas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntcore::make_params;

    #[test]
    fn suite_passes_for_small_pairs() {
        for (p, q) in [(3, 5), (5, 7), (3, 7), (11, 13)] {
            let r =
                verify_lemmas(&make_params(p, q, None).unwrap(), 0, Execution::default()).unwrap();
            assert!(r.ok, "{r:#?}");
            assert_eq!(r.lemmas[0].checks, p * q);
        }
    }

    #[test]
    fn large_periods_are_sampled() {
        let r =
            verify_lemmas(&make_params(71, 73, None).unwrap(), 7, Execution::default()).unwrap();
        assert!(r.ok, "{r:#?}");
        assert_eq!(r.lemmas[0].checks, SAMPLED_MULTIPLIERS as u64);
        assert_eq!(r.lemmas[4].checks, 4 * SAMPLED_SHIFTS as u64);
    }

    #[test]
    fn sampling_is_seeded() {
        let pool: Vec<u64> = (0..1000).collect();
        assert_eq!(sample(&pool, 10, 1), sample(&pool, 10, 1));
        assert_ne!(sample(&pool, 10, 1), sample(&pool, 10, 2));
        assert_eq!(sample(&pool[..5], 10, 1), vec![0, 1, 2, 3, 4]);
    }
}
