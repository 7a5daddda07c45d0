//! Randomized cross-validation suites.
//!
//! Each suite draws deterministic inputs from `(seed, trial)` and reports how
//! many checks ran and which trials failed. Trials fan out through
//! [`Execution`]; outcomes do not depend on the schedule.

use crate::criteria::{
    check_order_r, find_witness, is_impulse_observable, obs_matrix_from_blocks, order_reduce,
    search_witness, verify_witness, ImpulseWitness, Strategy,
};
use crate::exec::Execution;
use crate::float_rank::{float_rank, TolerancePolicy};
use crate::frequency::{impulse_order, polynomial_witness_from_solution, solve_frequency};
use crate::linalg::{rank, RationalMatrix};
use crate::random::{random_regular_system, trial_rng};
use crate::rational::int;
use crate::system::DescriptorSystem;
use crate::weierstrass::{
    assemble, fast_obs_rank, fast_rank_condition, random_canonical, reduced_form_rank,
    WeierstrassData,
};
use num_traits::Zero;
use rand::Rng;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub trials: usize,
    /// Largest state dimension for unstructured draws; canonical draws go
    /// one higher.
    pub max_n: usize,
    pub seed: u64,
    pub exec: Execution,
    /// Forces the first equivalence trial to fail (exercises triage paths).
    pub inject_failure: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            trials: 500,
            max_n: 5,
            seed: 0x1D5E_0B5E,
            exec: Execution::default(),
            inject_failure: false,
        }
    }
}

/// A failing trial with the system that triggered it.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub trial: usize,
    pub detail: String,
    pub e: RationalMatrix,
    pub a: RationalMatrix,
    pub c: RationalMatrix,
}

impl Counterexample {
    fn new(trial: usize, sys: &DescriptorSystem, detail: impl Into<String>) -> Box<Self> {
        Box::new(Self {
            trial,
            detail: detail.into(),
            e: sys.e().clone(),
            a: sys.a().clone(),
            c: sys.c().clone(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub name: &'static str,
    /// Number of individual checks evaluated.
    pub checks: usize,
    pub failures: Vec<Counterexample>,
    /// Free-form counters (`("observable", 312)`, ...).
    pub counters: Vec<(&'static str, usize)>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn counter(&self, key: &str) -> usize {
        self.counters
            .iter()
            .find(|(k, _)| *k == key)
            .map_or(0, |(_, v)| *v)
    }
}

/// Unstructured regular systems: `n` in `1..=max_n`, `m` in `0..=3`, entries
/// in `[-5, 5]`.
pub struct RandomDraw {
    pub trial: usize,
    pub system: DescriptorSystem,
    pub discarded: usize,
}

pub fn draw_random_systems(cfg: &SuiteConfig) -> Vec<RandomDraw> {
    cfg.exec.map_range(0..cfg.trials, |trial| {
        let mut rng = trial_rng(cfg.seed, trial);
        let n = rng.random_range(1..=cfg.max_n.max(1));
        let m = rng.random_range(0..=3);
        let (system, discarded) = random_regular_system(&mut rng, n, m, 5);
        RandomDraw {
            trial,
            system,
            discarded,
        }
    })
}

pub struct CanonicalDraw {
    pub trial: usize,
    pub data: WeierstrassData,
    pub system: DescriptorSystem,
}

/// Canonical-data systems with `n1 + n2` in `1..=max_n + 1`, `m` in `0..=3`,
/// entry bound 3. Half of the draws have some columns of `C2` zeroed, which
/// hides parts of the fast subsystem from the output.
pub fn draw_canonical_systems(cfg: &SuiteConfig) -> Vec<CanonicalDraw> {
    let seed = cfg.seed.wrapping_add(0xC0FFEE);
    cfg.exec.map_range(0..cfg.trials, |trial| {
        let mut rng = trial_rng(seed, trial);
        let dim = rng.random_range(1..=cfg.max_n + 1);
        let n2 = rng.random_range(0..=dim);
        let m = rng.random_range(0..=3);
        let mut data = random_canonical(rng.random(), dim - n2, n2, m, 3).expect("valid dims");
        if n2 > 0 && rng.random_bool(0.5) {
            for _ in 0..rng.random_range(1..=n2) {
                let j = rng.random_range(0..n2);
                for i in 0..m {
                    data.c2[(i, j)] = int(0);
                }
            }
        }
        let system = assemble(&data).expect("canonical data assembles");
        CanonicalDraw {
            trial,
            data,
            system,
        }
    })
}

type TrialResult = Result<(usize, Vec<&'static str>), Box<Counterexample>>;

fn collect(name: &'static str, results: Vec<TrialResult>) -> SuiteOutcome {
    let mut checks = 0;
    let mut failures = Vec::new();
    let mut counters: Vec<(&'static str, usize)> = Vec::new();
    for r in results {
        match r {
            Ok((c, tags)) => {
                checks += c;
                for tag in tags {
                    match counters.iter_mut().find(|(k, _)| *k == tag) {
                        Some((_, v)) => *v += 1,
                        None => counters.push((tag, 1)),
                    }
                }
            }
            Err(ce) => failures.push(*ce),
        }
    }
    SuiteOutcome {
        name,
        checks,
        failures,
        counters,
    }
}

/// Rank criterion verdicts agree for every `r` in `0..n`.
pub fn equivalence_suite(cfg: &SuiteConfig, draws: &[RandomDraw]) -> SuiteOutcome {
    let results = cfg.exec.map(draws, |d| {
        let sys = &d.system;
        if cfg.inject_failure && d.trial == 0 {
            return Err(Counterexample::new(d.trial, sys, "injected failure"));
        }
        let holds: Vec<bool> = (0..sys.n())
            .map(|r| check_order_r(sys, r).expect("r in range").holds)
            .collect();
        if holds.windows(2).any(|w| w[0] != w[1]) {
            return Err(Counterexample::new(
                d.trial,
                sys,
                format!("verdicts differ across orders: {holds:?}"),
            ));
        }
        let mut tags = vec![if holds[0] {
            "observable"
        } else {
            "not_observable"
        }];
        if !sys.is_standard() {
            tags.push("singular_e");
        }
        tags.extend(std::iter::repeat_n("irregular_discarded", d.discarded));
        Ok((holds.len(), tags))
    });
    collect("order equivalence", results)
}

/// Intrinsic criterion on the assembled system against the fast-subsystem
/// condition on `(N, C2)`, for every `r`.
pub fn weierstrass_suite(cfg: &SuiteConfig, draws: &[CanonicalDraw]) -> SuiteOutcome {
    let results = cfg.exec.map(draws, |d| {
        let n = d.system.n();
        for r in 0..n {
            let intrinsic = check_order_r(&d.system, r).expect("r in range").holds;
            let fast = fast_rank_condition(&d.data, r);
            if intrinsic != fast {
                return Err(Counterexample::new(
                    d.trial,
                    &d.system,
                    format!("r = {r}: intrinsic {intrinsic}, fast-subsystem {fast}"),
                ));
            }
        }
        let verdict = check_order_r(&d.system, 0).expect("n >= 1").holds;
        Ok((
            n,
            vec![if verdict {
                "observable"
            } else {
                "not_observable"
            }],
        ))
    });
    collect("weierstrass cross-validation", results)
}

/// `n2 (r + 1) + rank(fast stack)` equals `rank O_{r+2}(N, I, C2)`.
pub fn reduced_rank_suite(cfg: &SuiteConfig, draws: &[CanonicalDraw]) -> SuiteOutcome {
    let results = cfg.exec.map(draws, |d| {
        let n = d.system.n();
        for r in 0..n {
            let reduced = reduced_form_rank(&d.data, r);
            let direct = fast_obs_rank(&d.data, r);
            if reduced != direct {
                return Err(Counterexample::new(
                    d.trial,
                    &d.system,
                    format!("r = {r}: reduced form {reduced}, block matrix {direct}"),
                ));
            }
        }
        Ok((n, vec![]))
    });
    collect("reduced-form rank identity", results)
}

fn witness_checks(
    trial: usize,
    sys: &DescriptorSystem,
) -> Result<(usize, Vec<ImpulseWitness>), Box<Counterexample>> {
    let fail = |msg: String| Counterexample::new(trial, sys, msg);
    let rep = is_impulse_observable(sys, Strategy::AllOrders).map_err(|e| fail(e.to_string()))?;
    let n = sys.n();
    let mut checks = 0;
    let mut witnesses = Vec::new();
    if rep.verdict {
        for r in 0..=n {
            checks += 1;
            let found = if r < n {
                find_witness(sys, r).expect("r in range")
            } else {
                search_witness(sys, r)
            };
            if found.is_some() {
                return Err(fail(format!("observable system has a witness at r = {r}")));
            }
        }
    } else {
        let report_witness = rep
            .witness
            .ok_or_else(|| fail("negative verdict without witness".into()))?;
        if report_witness.order() != 0 || !verify_witness(sys, &report_witness) {
            return Err(fail("report witness invalid".into()));
        }
        for r in 0..n {
            checks += 1;
            let w = find_witness(sys, r)
                .expect("r in range")
                .ok_or_else(|| fail(format!("no witness at r = {r}")))?;
            if w.order() > r || !verify_witness(sys, &w) {
                return Err(fail(format!("witness at r = {r} fails verification")));
            }
            witnesses.push(w);
        }
    }
    Ok((checks, witnesses))
}

/// Every negative verdict carries verified witnesses for each `r`; positive
/// verdicts have none up to and including `r = n`.
pub fn witness_suite(cfg: &SuiteConfig, systems: &[(usize, &DescriptorSystem)]) -> SuiteOutcome {
    let results = cfg.exec.map(systems, |&(trial, sys)| {
        let (checks, ws) = witness_checks(trial, sys)?;
        let mut tags: Vec<&'static str> = Vec::new();
        if !ws.is_empty() {
            tags.push("with_witness");
        }
        Ok((checks, tags))
    });
    collect("witness soundness", results)
}

/// Every extracted witness of order `r >= 1` reduces to a verified order-0
/// witness with `E p_r = 0`.
pub fn order_reduction_suite(
    cfg: &SuiteConfig,
    systems: &[(usize, &DescriptorSystem)],
) -> SuiteOutcome {
    let results = cfg.exec.map(systems, |&(trial, sys)| {
        let (_, ws) = witness_checks(trial, sys)?;
        let mut checks = 0;
        let mut tags = Vec::new();
        for w in ws.iter().filter(|w| w.order() >= 1) {
            checks += 1;
            tags.push("reduced");
            let red = order_reduce(sys, w).map_err(|e| {
                Counterexample::new(trial, sys, format!("order {}: {e}", w.order()))
            })?;
            let top = &w.alternating()[w.order()];
            if red.order() != 0
                || !verify_witness(sys, &red)
                || !sys.e().mul_vec(top).iter().all(Zero::is_zero)
            {
                return Err(Counterexample::new(trial, sys, "reduced witness invalid"));
            }
        }
        Ok((checks, tags))
    });
    collect("order reduction", results)
}

/// Exact residual of the frequency-domain solve and soundness of the
/// constructed `(w - q, X_P)` witness, for a random `w` per system.
pub fn frequency_suite(cfg: &SuiteConfig, systems: &[(usize, &DescriptorSystem)]) -> SuiteOutcome {
    let seed = cfg.seed.wrapping_add(0xF00D);
    let results = cfg.exec.map(systems, |&(trial, sys)| {
        let mut rng = trial_rng(seed, trial);
        let w: Vec<_> = (0..sys.n())
            .map(|_| int(rng.random_range(-5..=5)))
            .collect();
        check_frequency(trial, sys, &w)
    });
    collect("frequency bridge", results)
}

/// Frequency-domain checks for one `(sys, w)`.
pub fn check_frequency(
    trial: usize,
    sys: &DescriptorSystem,
    w: &[crate::rational::Rational],
) -> TrialResult {
    let fail = |msg: String| Counterexample::new(trial, sys, msg);
    let sol = solve_frequency(sys, w).map_err(|e| fail(e.to_string()))?;
    if !sol.residual_holds(sys) {
        return Err(fail("residual (sE - A) X != E w".into()));
    }
    if sol
        .x_proper_num
        .iter()
        .any(|p| p.degree() >= sol.denom.degree())
    {
        return Err(fail("proper part is not strictly proper".into()));
    }
    if sys.is_standard() && impulse_order(&sol.x_poly).is_some() {
        return Err(fail("standard system produced an impulse".into()));
    }
    let mut tags = Vec::new();
    if impulse_order(&sol.x_poly).is_some() {
        tags.push("impulsive");
    }
    match polynomial_witness_from_solution(sys, &sol) {
        Ok(Some(_)) => tags.push("bridge_witness"),
        Ok(None) => {}
        Err(e) => return Err(fail(e.to_string())),
    }
    Ok((1, tags))
}

/// Floating-point rank against exact rank on every `O_k`, `k = 2..=n+1`.
/// Disagreements are counted; the suite fails only below 99% agreement.
pub fn float_agreement_suite(cfg: &SuiteConfig, draws: &[RandomDraw]) -> SuiteOutcome {
    let per_system = cfg.exec.map(draws, |d| {
        let sys = &d.system;
        (2..=sys.n() + 1)
            .map(|k| {
                let o = obs_matrix_from_blocks(sys.e(), sys.a(), sys.c(), k);
                rank(&o) == float_rank(&o, TolerancePolicy::Default)
            })
            .collect::<Vec<bool>>()
    });
    let total: usize = per_system.iter().map(Vec::len).sum();
    let agree: usize = per_system.iter().flatten().filter(|&&b| b).count();
    let mut failures = Vec::new();
    if total > 0 && agree * 100 < total * 99 {
        let d = &draws[per_system
            .iter()
            .position(|v| v.contains(&false))
            .unwrap_or(0)];
        failures.push(*Counterexample::new(
            d.trial,
            &d.system,
            format!("float rank agreement {agree}/{total} below 99%"),
        ));
    }
    SuiteOutcome {
        name: "float backend agreement",
        checks: total,
        failures,
        counters: vec![("agree", agree), ("disagree", total - agree)],
    }
}

/// Runs every suite with shared draws.
pub fn run_all(cfg: &SuiteConfig) -> Vec<SuiteOutcome> {
    let random = draw_random_systems(cfg);
    let canonical = draw_canonical_systems(cfg);
    let mixed: Vec<(usize, &DescriptorSystem)> = random
        .iter()
        .map(|d| (d.trial, &d.system))
        .chain(canonical.iter().map(|d| (cfg.trials + d.trial, &d.system)))
        .collect();
    vec![
        equivalence_suite(cfg, &random),
        weierstrass_suite(cfg, &canonical),
        reduced_rank_suite(cfg, &canonical),
        witness_suite(cfg, &mixed),
        order_reduction_suite(cfg, &mixed),
        frequency_suite(cfg, &mixed),
        float_agreement_suite(cfg, &random),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig {
            trials: 12,
            max_n: 3,
            seed: 11,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn small_run_passes() {
        for outcome in run_all(&small()) {
            assert!(outcome.passed(), "{}: {:?}", outcome.name, outcome.failures);
        }
    }

    #[test]
    fn zero_trials_is_vacuous() {
        let cfg = SuiteConfig {
            trials: 0,
            ..small()
        };
        assert!(run_all(&cfg).iter().all(|o| o.passed() && o.checks == 0));
    }

    #[test]
    fn injected_failure_surfaces() {
        let cfg = SuiteConfig {
            inject_failure: true,
            ..small()
        };
        let out = equivalence_suite(&cfg, &draw_random_systems(&cfg));
        assert_eq!(out.failures.len(), 1);
        assert_eq!(out.failures[0].trial, 0);
    }

    #[test]
    fn schedule_does_not_change_outcomes() {
        let seq = SuiteConfig {
            exec: Execution::Sequential,
            ..small()
        };
        let par = SuiteConfig {
            exec: Execution::Parallel,
            ..small()
        };
        let a: Vec<_> = run_all(&seq)
            .iter()
            .map(|o| (o.checks, o.counters.clone()))
            .collect();
        let b: Vec<_> = run_all(&par)
            .iter()
            .map(|o| (o.checks, o.counters.clone()))
            .collect();
        assert_eq!(a, b);
    }
}
