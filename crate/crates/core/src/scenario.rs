//! Seeded synthetic regime-change scenarios.
//!
//! A scenario produces a basic-mode series and a competency-mode series that
//! share the same noise draw. Staffing events rescale the variables assigned
//! to the event's role in the competency series, from the event period on:
//! by `event_effect` for a hire, by `1 / event_effect` for a dismissal.
//!
//! Values are `base_level * (1 + noise_scale * u)` with `u` uniform on
//! `[-1, 1)`, drawn period-major (all variables of period 1, then period 2,
//! ...) from [`NOISE_ALGORITHM`].

use std::collections::BTreeMap;
use std::fmt;

use ndarray::Array2;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ProcessSeries;

/// Identifier of the noise stream, echoed into generated metadata.
pub const NOISE_ALGORITHM: &str = "chacha8-seed_from_u64/u53-uniform";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Hire,
    Dismiss,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EventKind::Hire => "hire",
            EventKind::Dismiss => "dismiss",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioEvent {
    pub period: usize,
    pub kind: EventKind,
    pub role: String,
    /// Head count; recorded with the event, the effect is applied once per event.
    pub count: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub t_max: usize,
    pub n: usize,
    pub seed: u64,
    pub base_level: f64,
    pub noise_scale: f64,
    pub event_effect: f64,
    #[serde(default)]
    pub events: Vec<ScenarioEvent>,
    /// Role name to the 1-based variables its events act on.
    #[serde(default)]
    pub role_variables: BTreeMap<String, Vec<usize>>,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidScenario(msg));
        if self.t_max < 3 {
            return invalid(format!("t_max must be at least 3, got {}", self.t_max));
        }
        if self.n == 0 {
            return invalid("n must be at least 1".into());
        }
        if !self.base_level.is_finite() {
            return invalid(format!(
                "base_level must be finite, got {}",
                self.base_level
            ));
        }
        if !self.noise_scale.is_finite() || self.noise_scale < 0.0 {
            return invalid(format!(
                "noise_scale must be finite and nonnegative, got {}",
                self.noise_scale
            ));
        }
        if !self.event_effect.is_finite() || self.event_effect <= 0.0 {
            return invalid(format!(
                "event_effect must be finite and positive, got {}",
                self.event_effect
            ));
        }
        for (role, vars) in &self.role_variables {
            if let Some(v) = vars.iter().find(|&&v| v == 0 || v > self.n) {
                return invalid(format!(
                    "role {role:?} names variable {v} outside 1..={}",
                    self.n
                ));
            }
        }
        for event in &self.events {
            if event.period == 0 || event.period > self.t_max {
                return invalid(format!(
                    "event period {} outside 1..={}",
                    event.period, self.t_max
                ));
            }
            if event.count == 0 {
                return invalid(format!("event at period {} has zero count", event.period));
            }
            if !self.role_variables.contains_key(&event.role) {
                return invalid(format!(
                    "event role {:?} has no variable assignment",
                    event.role
                ));
            }
        }
        Ok(())
    }

    /// Earliest event period, if any.
    pub fn first_event_period(&self) -> Option<usize> {
        self.events.iter().map(|e| e.period).min()
    }
}

/// Demo scenario with a two-step staffing timeline: 57 periods, 32
/// variables, three managers and three HR managers hired at period 7, two
/// managers dismissed at period 13.
///
/// Managers act on variables 1..=8, HR managers on 9..=16.
pub fn staffing_demo_scenario() -> Scenario {
    let mut role_variables = BTreeMap::new();
    role_variables.insert("manager".to_owned(), (1..=8).collect());
    role_variables.insert("hr".to_owned(), (9..=16).collect());
    let event = |period, kind, role: &str, count| ScenarioEvent {
        period,
        kind,
        role: role.to_owned(),
        count,
    };
    Scenario {
        t_max: 57,
        n: 32,
        seed: 7_013,
        base_level: 100.0,
        noise_scale: 0.2,
        event_effect: 1.25,
        events: vec![
            event(7, EventKind::Hire, "manager", 3),
            event(7, EventKind::Hire, "hr", 3),
            event(13, EventKind::Dismiss, "manager", 2),
        ],
        role_variables,
    }
}

fn unit_interval(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Returns `(basic, competency)` series; a pure function of `scenario`.
pub fn generate_series(scenario: &Scenario) -> Result<(ProcessSeries, ProcessSeries)> {
    scenario.validate()?;
    let (n, t_max) = (scenario.n, scenario.t_max);
    let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed);
    let mut basic = Array2::zeros((n, t_max));
    for t in 0..t_max {
        for i in 0..n {
            let u = 2.0 * unit_interval(&mut rng) - 1.0;
            basic[[i, t]] = scenario.base_level * (1.0 + scenario.noise_scale * u);
        }
    }

    let mut factor = Array2::<f64>::ones((n, t_max));
    for event in &scenario.events {
        let step = match event.kind {
            EventKind::Hire => scenario.event_effect,
            EventKind::Dismiss => 1.0 / scenario.event_effect,
        };
        for &var in &scenario.role_variables[&event.role] {
            for t in (event.period - 1)..t_max {
                factor[[var - 1, t]] *= step;
            }
        }
    }
    let competency = &basic * &factor;

    Ok((
        ProcessSeries::with_default_labels(basic)?,
        ProcessSeries::with_default_labels(competency)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat(n: usize, t_max: usize) -> Scenario {
        Scenario {
            t_max,
            n,
            seed: 1,
            base_level: 1.0,
            noise_scale: 0.0,
            event_effect: 2.0,
            events: vec![],
            role_variables: BTreeMap::new(),
        }
    }

    #[test]
    fn no_events_no_noise_is_constant() {
        let (basic, uc) = generate_series(&flat(4, 10)).unwrap();
        assert!(basic.values().iter().all(|&v| v == 1.0));
        assert_eq!(basic, uc);
    }

    #[test]
    fn demo_scenario_shape() {
        let s = staffing_demo_scenario();
        assert_eq!(s.t_max, 57);
        assert_eq!(s.n, 32);
        let mut periods: Vec<usize> = s.events.iter().map(|e| e.period).collect();
        periods.sort();
        assert_eq!(periods, vec![7, 7, 13]);
        s.validate().unwrap();
    }

    #[test]
    fn modes_split_at_first_event() {
        let (basic, uc) = generate_series(&staffing_demo_scenario()).unwrap();
        for t in 1..7 {
            assert_eq!(basic.observation(t), uc.observation(t));
        }
        assert!((7..=57).any(|t| basic.observation(t) != uc.observation(t)));
        // managers: up at 7, back to baseline from 13; hr stays up
        let ratio = |var: usize, t: usize| uc.values()[[var, t - 1]] / basic.values()[[var, t - 1]];
        assert!((ratio(0, 7) - 1.25).abs() < 1e-12);
        assert!((ratio(0, 13) - 1.0).abs() < 1e-12);
        assert!((ratio(8, 40) - 1.25).abs() < 1e-12);
        assert_eq!(ratio(20, 40), 1.0);
    }

    #[test]
    fn same_seed_same_bits() {
        let s = staffing_demo_scenario();
        let a = generate_series(&s).unwrap();
        let b = generate_series(&s).unwrap();
        assert_eq!(a, b);
        let mut other = s.clone();
        other.seed += 1;
        assert_ne!(generate_series(&other).unwrap().0, a.0);
    }

    #[test]
    fn noise_stays_in_band() {
        let mut s = flat(5, 200);
        s.noise_scale = 0.5;
        s.base_level = 10.0;
        let (basic, _) = generate_series(&s).unwrap();
        assert!(basic.values().iter().all(|&v| (5.0..15.0).contains(&v)));
    }

    #[test]
    fn invalid_scenarios() {
        let mut s = flat(2, 2);
        assert!(matches!(
            generate_series(&s),
            Err(Error::InvalidScenario(_))
        ));
        s.t_max = 5;
        s.noise_scale = -1.0;
        assert!(matches!(s.validate(), Err(Error::InvalidScenario(_))));
        s.noise_scale = 0.0;
        s.events.push(ScenarioEvent {
            period: 6,
            kind: EventKind::Hire,
            role: "x".into(),
            count: 1,
        });
        s.role_variables.insert("x".into(), vec![1]);
        assert!(s.validate().is_err());
        s.events[0].period = 2;
        s.validate().unwrap();
        s.role_variables.insert("x".into(), vec![3]);
        assert!(s.validate().is_err());
    }
}
