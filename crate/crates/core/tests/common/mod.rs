#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use rachjam::analytic::{periodic_threshold_trace, steady_state, threshold_closed_form};
use rachjam::harness::{parse_trace_csv, write_trace_csv};
use rachjam::model::{detect_msg1, measured_power, update_threshold, UpdateWeights};
use rachjam::sim::{compare_with_analytic, run_scenario, SweepAxis};
use rachjam::{
    AttackerConfig, DetectorConfig, PowerMetric, Scenario, ScenarioSummary, ThresholdState,
    UeConfig,
};

pub const ORACLE_TOL: f64 = 1e-9;
pub const STEADY_TOL: f64 = 1e-6;

pub fn db(v: f64) -> PowerMetric {
    PowerMetric::new(v).unwrap()
}

/// Runs `test` over `cases` deterministic draws of `strategy`.
pub fn check<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner =
        TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

// ---------------------------------------------------------------------------
// strategies

/// Weights summing to exactly one.
pub fn convex_weights() -> impl Strategy<Value = UpdateWeights> {
    (0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64, any::<bool>()).prop_map(|(a, b, c, zero_alpha)| {
        let a = if zero_alpha { 0.0 } else { a };
        let total = a + b + c;
        if total == 0.0 {
            return UpdateWeights::MEMORYLESS;
        }
        let (alpha, beta) = (a / total, b / total);
        UpdateWeights {
            alpha,
            beta,
            gamma: 1.0 - alpha - beta,
        }
    })
}

/// Non-negative weights summing to at most one.
pub fn contractive_weights() -> impl Strategy<Value = UpdateWeights> {
    (convex_weights(), 0.2..=1.0f64).prop_map(|(w, s)| UpdateWeights {
        alpha: w.alpha * s,
        beta: w.beta * s,
        gamma: w.gamma * s,
    })
}

fn ue_config(first_max: u32) -> impl Strategy<Value = UeConfig> {
    (
        10.0..80.0f64,
        0..=first_max,
        1..4u32,
        prop_oneof![Just(0.0), 0.0..3.0f64],
        1..4u32,
    )
        .prop_map(
            |(power, first, max_attempts, ramp, attempt_period)| UeConfig {
                power: db(power),
                first_attempt_ro: first,
                max_attempts,
                ramp_step: db(ramp),
                attempt_period,
            },
        )
}

/// Valid scenarios whose measurement stream is the periodic attack schedule.
pub fn scenario() -> impl Strategy<Value = Scenario> {
    let detector = (
        contractive_weights(),
        0.0..20.0f64,
        prop::option::of(0.0..60.0f64),
    );
    let attacker = (1..20u32, 0.0..50.0f64, any::<bool>(), 0.0..1.0f64);
    (detector, attacker, ue_config(20), 0.0..30.0f64, 1..120u32).prop_map(
        |((weights, delta, init), (period, excess, enabled, early_frac), ue, noise, extra)| {
            let p_noise = db(noise);
            Scenario {
                detector: DetectorConfig::new(weights, db(delta), init.map(db).unwrap_or(p_noise)),
                attacker: AttackerConfig {
                    period,
                    power: db(noise + excess),
                    early_start: (early_frac * f64::from(ue.first_attempt_ro)).floor() as u32,
                    enabled,
                },
                ue,
                p_noise,
                horizon: ue.first_attempt_ro + extra,
                ue_contributes_to_measurement: false,
                meta: Default::default(),
            }
        },
    )
}

/// Like [`scenario`] but with fixed UE power (no ramping).
pub fn unramped_scenario() -> impl Strategy<Value = Scenario> {
    scenario().prop_map(|mut s| {
        s.ue.ramp_step = PowerMetric::ZERO;
        s
    })
}

fn iterate(cfg: &DetectorConfig, first_prev: PowerMetric, ms: &[PowerMetric]) -> Vec<f64> {
    let mut state = ThresholdState::new(cfg.p_th_init, first_prev);
    let mut out = vec![state.p_th.db()];
    for &m in ms {
        state = update_threshold(&state, cfg, m).unwrap();
        out.push(state.p_th.db());
    }
    out
}

// ---------------------------------------------------------------------------
// core model

pub fn convex_boundedness(cases: u32) -> Result<(), String> {
    let strat = (convex_weights(), -20.0..60.0f64, 0.0..40.0f64, 0.0..1.0f64).prop_flat_map(
        |(w, lo, span, init_frac)| {
            let ms = prop::collection::vec(lo..=lo + span, 1..200);
            (
                Just(w),
                Just(lo),
                Just(lo + span),
                Just(lo + init_frac * span),
                ms,
            )
        },
    );
    check(cases, strat, |(w, lo, hi, init, ms)| {
        let cfg = DetectorConfig::new(w, PowerMetric::ZERO, db(init));
        let ms: Vec<PowerMetric> = ms.into_iter().map(db).collect();
        for th in iterate(&cfg, ms[0], &ms) {
            prop_assert!(
                th >= lo - ORACLE_TOL && th <= hi + ORACLE_TOL,
                "{th} outside [{lo}, {hi}]"
            );
        }
        Ok(())
    })
}

pub fn constant_input_fixed_point(cases: u32) -> Result<(), String> {
    check(
        cases,
        (
            convex_weights(),
            -20.0..80.0f64,
            -20.0..80.0f64,
            1..400usize,
        ),
        |(w, init, m, n)| {
            let cfg = DetectorConfig::new(w, PowerMetric::ZERO, db(init));
            let trace = iterate(&cfg, db(m), &vec![db(m); n]);
            for (i, th) in trace.iter().enumerate() {
                let decay = w.gamma.powi(i as i32);
                let expected = init * decay + m * (1.0 - decay);
                prop_assert!(
                    (th - expected).abs() <= ORACLE_TOL,
                    "i={i}: {th} vs {expected}"
                );
            }
            if w.gamma < 0.9 && n > 300 {
                prop_assert!((trace[n] - m).abs() <= STEADY_TOL);
            }
            Ok(())
        },
    )
}

pub fn memoryless_identity(cases: u32) -> Result<(), String> {
    check(
        cases,
        (
            -20.0..80.0f64,
            prop::collection::vec(-20.0..80.0f64, 1..100),
        ),
        |(init, ms)| {
            let cfg = DetectorConfig::new(UpdateWeights::MEMORYLESS, PowerMetric::ZERO, db(init));
            let ms: Vec<PowerMetric> = ms.into_iter().map(db).collect();
            let trace = iterate(&cfg, ms[0], &ms);
            for (th, m) in trace[1..].iter().zip(&ms) {
                prop_assert_eq!(*th, m.db());
            }
            Ok(())
        },
    )
}

pub fn static_identity(cases: u32) -> Result<(), String> {
    check(
        cases,
        (
            -20.0..80.0f64,
            prop::collection::vec(-20.0..80.0f64, 1..100),
        ),
        |(init, ms)| {
            let cfg = DetectorConfig::new(UpdateWeights::STATIC, PowerMetric::ZERO, db(init));
            let ms: Vec<PowerMetric> = ms.into_iter().map(db).collect();
            prop_assert!(iterate(&cfg, ms[0], &ms).iter().all(|&th| th == init));
            Ok(())
        },
    )
}

pub fn detection_monotonicity(cases: u32) -> Result<(), String> {
    let strat = (
        0.0..80.0f64,
        0.0..80.0f64,
        0.0..20.0f64,
        0.0..10.0f64,
        0.0..10.0f64,
        0.0..10.0f64,
    );
    check(cases, strat, |(ue, th, d, dth, dd, due)| {
        let base = detect_msg1(db(ue), db(th), db(d));
        prop_assert!(base >= detect_msg1(db(ue), db(th + dth), db(d)));
        prop_assert!(base >= detect_msg1(db(ue), db(th), db(d + dd)));
        prop_assert!(base <= detect_msg1(db(ue + due), db(th), db(d)));
        Ok(())
    })
}

pub fn schedule_periodicity(cases: u32) -> Result<(), String> {
    check(
        cases,
        (1..40u32, 1..500u64, 0.0..30.0f64, 0.0..40.0f64),
        |(period, i, noise, excess)| {
            let a = AttackerConfig {
                period,
                power: db(noise + excess),
                early_start: 0,
                enabled: true,
            };
            let p = |k| measured_power(k, &a, db(noise));
            prop_assert_eq!(p(i), p(i + u64::from(period)));
            Ok(())
        },
    )
}

// ---------------------------------------------------------------------------
// analytic model

fn flood(power: f64) -> AttackerConfig {
    AttackerConfig {
        period: 1,
        power: db(power),
        early_start: 0,
        enabled: true,
    }
}

pub fn oracle_equivalence(cases: u32) -> Result<(), String> {
    let strat = (
        convex_weights(),
        0.0..0.999f64,
        0.0..60.0f64,
        20.0..80.0f64,
        1..10_001u64,
    );
    check(cases, strat, |(w, gamma, init, attack, horizon)| {
        // re-split the non-gamma mass so gamma covers [0, 0.999)
        let rest = w.alpha + w.beta;
        let (alpha, beta) = if rest > 0.0 {
            (
                w.alpha / rest * (1.0 - gamma),
                w.beta / rest * (1.0 - gamma),
            )
        } else {
            (0.0, 1.0 - gamma)
        };
        let cfg = DetectorConfig::new(
            UpdateWeights { alpha, beta, gamma },
            PowerMetric::ZERO,
            db(init),
        );
        let trace = periodic_threshold_trace(horizon, &cfg, &flood(attack), db(17.4)).unwrap();
        for (i, th) in trace.iter().enumerate() {
            let cf = threshold_closed_form(i as u64, &cfg, db(attack)).unwrap();
            prop_assert!(
                (th.db() - cf.db()).abs() <= ORACLE_TOL,
                "i={i}: {} vs {}",
                th.db(),
                cf.db()
            );
        }
        Ok(())
    })
}

pub fn limit_correctness(cases: u32) -> Result<(), String> {
    check(
        cases,
        (contractive_weights(), 0.0..60.0f64, 20.0..80.0f64),
        |(w, init, attack)| {
            prop_assume!(w.gamma < 0.95);
            let cfg = DetectorConfig::new(w, PowerMetric::ZERO, db(init));
            let trace = periodic_threshold_trace(2_000, &cfg, &flood(attack), db(17.4)).unwrap();
            let ss = steady_state(&cfg, db(attack)).unwrap();
            prop_assert!((trace.last().unwrap().db() - ss.db()).abs() < STEADY_TOL);
            Ok(())
        },
    )
}

pub fn monotone_convergence(cases: u32) -> Result<(), String> {
    check(
        cases,
        (convex_weights(), 0.0..40.0f64, 0.1..40.0f64, 1..2_000u64),
        |(w, init, gap, horizon)| {
            prop_assume!(w.gamma > 0.0 && w.gamma < 1.0);
            let attack = init + gap;
            let cfg = DetectorConfig::new(w, PowerMetric::ZERO, db(init));
            let trace = periodic_threshold_trace(horizon, &cfg, &flood(attack), db(init)).unwrap();
            for pair in trace.windows(2) {
                let (a, b) = (pair[0].db(), pair[1].db());
                prop_assert!(b <= attack + ORACLE_TOL);
                if a < attack - ORACLE_TOL {
                    prop_assert!(b > a, "not strictly increasing: {a} -> {b}");
                } else {
                    prop_assert!(b >= a - ORACLE_TOL);
                }
            }
            Ok(())
        },
    )
}

pub fn periodic_steady_cycle(cases: u32) -> Result<(), String> {
    check(
        cases,
        (convex_weights(), 2..24u32, 0.0..30.0f64, 0.0..40.0f64),
        |(w, period, noise, excess)| {
            prop_assume!(w.gamma <= 0.9);
            let cfg = DetectorConfig::new(w, PowerMetric::ZERO, db(noise));
            let a = AttackerConfig {
                period,
                power: db(noise + excess),
                early_start: 0,
                enabled: true,
            };
            let horizon = 400 * u64::from(period);
            let trace = periodic_threshold_trace(horizon, &cfg, &a, db(noise)).unwrap();
            let n = trace.len();
            let p = period as usize;
            for i in n - p..n {
                prop_assert!((trace[i].db() - trace[i - p].db()).abs() < STEADY_TOL);
            }
            Ok(())
        },
    )
}

pub fn attack_dominance(cases: u32) -> Result<(), String> {
    check(
        cases,
        (
            contractive_weights(),
            1..20u32,
            0.0..30.0f64,
            0.0..40.0f64,
            0.0..50.0f64,
        ),
        |(w, period, noise, excess, init)| {
            let cfg = DetectorConfig::new(w, PowerMetric::ZERO, db(init));
            let on = AttackerConfig {
                period,
                power: db(noise + excess),
                early_start: 0,
                enabled: true,
            };
            let off = AttackerConfig {
                enabled: false,
                ..on
            };
            let hot = periodic_threshold_trace(300, &cfg, &on, db(noise)).unwrap();
            let cold = periodic_threshold_trace(300, &cfg, &off, db(noise)).unwrap();
            for (h, c) in hot.iter().zip(&cold) {
                prop_assert!(h.db() >= c.db() - ORACLE_TOL);
            }
            Ok(())
        },
    )
}

pub fn period_ordering(cases: u32) -> Result<(), String> {
    check(
        cases,
        (
            contractive_weights(),
            1..12u32,
            2..6u32,
            0.0..30.0f64,
            0.0..40.0f64,
        ),
        |(w, period, k, noise, excess)| {
            let cfg = DetectorConfig::new(w, PowerMetric::ZERO, db(noise));
            let mean = |t: u32| {
                let a = AttackerConfig {
                    period: t,
                    power: db(noise + excess),
                    early_start: 0,
                    enabled: true,
                };
                let trace = periodic_threshold_trace(5_000, &cfg, &a, db(noise)).unwrap();
                trace.iter().map(|p| p.db()).sum::<f64>() / trace.len() as f64
            };
            prop_assert!(mean(period) >= mean(period * k) - ORACLE_TOL);
            Ok(())
        },
    )
}

// ---------------------------------------------------------------------------
// simulation engine

pub fn determinism(cases: u32) -> Result<(), String> {
    check(cases, scenario(), |s| {
        let a = run_scenario(&s).unwrap();
        let b = run_scenario(&s).unwrap();
        let bits = |r: &rachjam::SimulationRun| {
            r.trace
                .iter()
                .map(|t| (t.p_th.db().to_bits(), t.measured.db().to_bits(), t.detected))
                .collect::<Vec<_>>()
        };
        prop_assert_eq!(bits(&a), bits(&b));
        prop_assert_eq!(a, b);
        Ok(())
    })
}

/// Each RO is judged against the threshold built from earlier ROs only.
pub fn evaluate_then_update(cases: u32) -> Result<(), String> {
    check(cases, scenario(), |s| {
        let run = run_scenario(&s).unwrap();
        let ms: Vec<PowerMetric> = run.trace.iter().map(|r| r.measured).collect();
        let expected = iterate(&s.detector, ms[0], &ms);
        for (r, th) in run.trace.iter().zip(&expected) {
            prop_assert_eq!(r.p_th.db(), *th, "RO {}", r.ro);
            let should =
                r.ue_attempt && detect_msg1(r.ue_attempt_power.unwrap(), r.p_th, s.detector.delta);
            prop_assert_eq!(r.detected, should);
            prop_assert!(!r.detected || r.ue_attempt);
        }
        Ok(())
    })
}

fn rate(s: &Scenario) -> f64 {
    run_scenario(s).unwrap().summary.access_success_rate
}

pub fn attack_monotonicity(cases: u32) -> Result<(), String> {
    check(
        cases,
        (unramped_scenario(), 0.0..30.0f64, 2..5u32),
        |(mut s, boost, k)| {
            s.attacker.enabled = true;
            let louder = SweepAxis::AttackerPower
                .apply(&s, s.attacker.power.db() + boost)
                .unwrap();
            prop_assert!(rate(&louder) <= rate(&s));
            let sparser = SweepAxis::AttackerPeriod
                .apply(&s, f64::from(s.attacker.period * k))
                .unwrap();
            prop_assert!(rate(&sparser) >= rate(&s));
            Ok(())
        },
    )
}

pub fn early_start_effect(cases: u32) -> Result<(), String> {
    check(cases, scenario(), |mut s| {
        s.attacker.enabled = true;
        s.attacker.period = 1;
        let first = s.ue.first_attempt_ro;
        let at_first = |early: u32| {
            let mut t = s.clone();
            t.attacker.early_start = early;
            run_scenario(&t).unwrap().trace[first as usize].p_th.db()
        };
        for early in 0..first {
            prop_assert!(at_first(early + 1) >= at_first(early) - ORACLE_TOL);
        }
        Ok(())
    })
}

pub fn static_threshold_immunity(cases: u32) -> Result<(), String> {
    check(cases, scenario(), |mut s| {
        s.detector.weights = UpdateWeights::STATIC;
        s.attacker.enabled = true;
        let on = run_scenario(&s).unwrap();
        s.attacker.enabled = false;
        let off = run_scenario(&s).unwrap();
        let outcomes = |r: &rachjam::SimulationRun| {
            r.trace
                .iter()
                .map(|t| (t.ue_attempt, t.detected, t.ue_attempt_power))
                .collect::<Vec<_>>()
        };
        prop_assert_eq!(outcomes(&on), outcomes(&off));
        Ok(())
    })
}

pub fn trace_summary_consistency(cases: u32) -> Result<(), String> {
    check(cases, scenario(), |s| {
        let run = run_scenario(&s).unwrap();
        let again = ScenarioSummary::from_trace(&run.trace, s.detector.delta, s.ue.power).unwrap();
        prop_assert_eq!(again, run.summary);
        let attempts = run.trace.iter().filter(|r| r.ue_attempt).count();
        let hits = run.trace.iter().filter(|r| r.detected).count();
        prop_assert!(attempts >= 1);
        prop_assert_eq!(
            run.summary.access_success_rate,
            hits as f64 / attempts as f64
        );
        prop_assert!((0.0..=1.0).contains(&run.summary.access_success_rate));
        prop_assert_eq!(run.trace.len(), s.horizon as usize);
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// harness

pub fn csv_round_trip(cases: u32) -> Result<(), String> {
    check(cases, scenario(), |s| {
        let run = run_scenario(&s).unwrap();
        let analytic = compare_with_analytic(&s).unwrap().analytic;
        let text = write_trace_csv(&run.trace, &analytic);
        let rows = parse_trace_csv(&text).unwrap();
        let records: Vec<_> = rows.iter().map(|r| r.record).collect();
        let analytic2: Vec<f64> = rows.iter().map(|r| r.analytic_threshold.db()).collect();
        prop_assert_eq!(&text, &write_trace_csv(&records, &analytic2));
        for (a, b) in records.iter().zip(&run.trace) {
            prop_assert!((a.p_th.db() - b.p_th.db()).abs() <= 5e-7);
            prop_assert_eq!(
                (a.attacker_tx, a.ue_attempt, a.detected),
                (b.attacker_tx, b.ue_attempt, b.detected)
            );
        }
        Ok(())
    })
}

pub fn compare_conforming(cases: u32) -> Result<(), String> {
    check(cases, scenario(), |s| {
        let report = compare_with_analytic(&s).unwrap();
        prop_assert!(
            report.within_tolerance(),
            "max deviation {}",
            report.max_abs
        );
        Ok(())
    })
}

pub type Property = (&'static str, fn(u32) -> Result<(), String>);

pub const MODEL_PROPERTIES: &[Property] = &[
    ("core: convex-combination boundedness", convex_boundedness),
    (
        "core: constant-input fixed point",
        constant_input_fixed_point,
    ),
    ("core: memoryless identity", memoryless_identity),
    ("core: static identity", static_identity),
    ("core: detection monotonicity", detection_monotonicity),
    ("core: schedule periodicity", schedule_periodicity),
    ("analytic: oracle equivalence", oracle_equivalence),
    ("analytic: limit correctness", limit_correctness),
    ("analytic: monotone convergence", monotone_convergence),
    ("analytic: periodic steady cycle", periodic_steady_cycle),
    ("analytic: attack dominance", attack_dominance),
    ("analytic: period ordering", period_ordering),
    ("sim: determinism", determinism),
    ("sim: evaluate-then-update ordering", evaluate_then_update),
    ("sim: attack monotonicity", attack_monotonicity),
    ("sim: early-start effect", early_start_effect),
    ("sim: static-threshold immunity", static_threshold_immunity),
    ("sim: trace/summary consistency", trace_summary_consistency),
];

/// Scenario file text for `s`.
pub fn scenario_toml(s: &Scenario) -> String {
    let w = s.detector.weights;
    format!(
        "[detector]\nalpha = {:?}\nbeta = {:?}\ngamma = {:?}\ndelta = {:?}\np_th_init = {:?}\n\n\
         [attacker]\nenabled = {}\nperiod = {}\npower = {:?}\nearly_start = {}\n\n\
         [ue]\npower = {:?}\nfirst_attempt_ro = {}\nmax_attempts = {}\nramp_step = {:?}\nattempt_period = {}\n\n\
         [noise]\nlevel = {:?}\n\n[sim]\nhorizon = {}\nue_contributes_to_measurement = {}\n",
        w.alpha,
        w.beta,
        w.gamma,
        s.detector.delta.db(),
        s.detector.p_th_init.db(),
        s.attacker.enabled,
        s.attacker.period,
        s.attacker.power.db(),
        s.attacker.early_start,
        s.ue.power.db(),
        s.ue.first_attempt_ro,
        s.ue.max_attempts,
        s.ue.ramp_step.db(),
        s.ue.attempt_period,
        s.p_noise.db(),
        s.horizon,
        s.ue_contributes_to_measurement,
    )
}

pub fn sample_scenarios(n: usize) -> Vec<Scenario> {
    use proptest::strategy::ValueTree;
    let mut runner = TestRunner::new_with_rng(
        Config::default(),
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let strat = scenario();
    (0..n)
        .map(|_| strat.new_tree(&mut runner).unwrap().current())
        .collect()
}
