//! Reproducible synthetic add/remove streams and the stream file format.
//!
//! Each event draws one uniform real to pick the action (add with
//! probability `p_add`), then one object id from the add or remove
//! distribution. Continuous draws are rounded to the nearest integer and
//! clamped into `[1, m]`.

mod format;
mod rng;

use std::fmt;
use std::str::FromStr;

pub use format::{read_events, read_stream, write_events, write_stream};
pub use rng::SplitMix64;

use crate::error::{Error, Result};
use crate::event::{Action, LogEvent, ObjectId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionKind {
    Uniform,
    Normal,
    Lognormal,
}

/// Id distribution over `[1, m]`. `mu` and `sigma` are in id units; for
/// `Lognormal` they are the mean and standard deviation of the
/// distribution itself, not of its logarithm. `Uniform` ignores both.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionSpec {
    pub kind: DistributionKind,
    pub mu: f64,
    pub sigma: f64,
}

impl DistributionSpec {
    pub fn uniform() -> Self {
        DistributionSpec {
            kind: DistributionKind::Uniform,
            mu: 0.0,
            sigma: 0.0,
        }
    }

    pub fn normal(mu: f64, sigma: f64) -> Self {
        DistributionSpec {
            kind: DistributionKind::Normal,
            mu,
            sigma,
        }
    }

    pub fn lognormal(mean: f64, sd: f64) -> Self {
        DistributionSpec {
            kind: DistributionKind::Lognormal,
            mu: mean,
            sigma: sd,
        }
    }

    fn validate(&self) -> Result<()> {
        match self.kind {
            DistributionKind::Uniform => Ok(()),
            DistributionKind::Normal if self.sigma > 0.0 && self.mu.is_finite() => Ok(()),
            DistributionKind::Lognormal if self.sigma > 0.0 && self.mu > 0.0 => Ok(()),
            _ => Err(Error::invalid(format!(
                "bad {:?} parameters mu={} sigma={}",
                self.kind, self.mu, self.sigma
            ))),
        }
    }

    fn sampler(&self) -> Sampler {
        match self.kind {
            DistributionKind::Uniform => Sampler::Uniform,
            DistributionKind::Normal => Sampler::Normal {
                mu: self.mu,
                sigma: self.sigma,
            },
            DistributionKind::Lognormal => {
                let var_log = (1.0 + (self.sigma / self.mu).powi(2)).ln();
                Sampler::Lognormal {
                    mu_log: self.mu.ln() - var_log / 2.0,
                    sigma_log: var_log.sqrt(),
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Sampler {
    Uniform,
    Normal { mu: f64, sigma: f64 },
    Lognormal { mu_log: f64, sigma_log: f64 },
}

impl Sampler {
    #[inline]
    fn draw(&self, rng: &mut SplitMix64, m: u32) -> u32 {
        let x = match *self {
            Sampler::Uniform => return rng.next_in_1_to(u64::from(m)) as u32,
            Sampler::Normal { mu, sigma } => mu + sigma * rng.next_standard_normal(),
            Sampler::Lognormal { mu_log, sigma_log } => {
                (mu_log + sigma_log * rng.next_standard_normal()).exp()
            }
        };
        // `as` saturates on overflow and maps NaN to 0; the clamp handles both.
        (x.round() as i64).clamp(1, i64::from(m)) as u32
    }
}

/// Named workloads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Uniform adds and removes.
    Stream1,
    /// Adds ~ N(2m/3, m/6), removes ~ N(m/3, m/6).
    Stream2,
    /// Adds ~ N(4m/5, m), removes lognormal with mean 3m/5, sd m.
    Stream3,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Stream1, Preset::Stream2, Preset::Stream3];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Stream1 => "stream1",
            Preset::Stream2 => "stream2",
            Preset::Stream3 => "stream3",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stream1" => Ok(Preset::Stream1),
            "stream2" => Ok(Preset::Stream2),
            "stream3" => Ok(Preset::Stream3),
            other => Err(Error::invalid(format!(
                "unknown preset {other:?} (expected stream1, stream2 or stream3)"
            ))),
        }
    }
}

/// Everything needed to regenerate a stream bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct StreamConfig {
    pub n: u64,
    pub m: u32,
    pub seed: u64,
    pub p_add: f64,
    pub pos: DistributionSpec,
    pub neg: DistributionSpec,
}

pub const DEFAULT_P_ADD: f64 = 0.7;

impl StreamConfig {
    pub fn preset(preset: Preset, n: u64, m: u32, seed: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("stream needs m >= 1"));
        }
        let mf = f64::from(m);
        let (pos, neg) = match preset {
            Preset::Stream1 => (DistributionSpec::uniform(), DistributionSpec::uniform()),
            Preset::Stream2 => (
                DistributionSpec::normal(2.0 * mf / 3.0, mf / 6.0),
                DistributionSpec::normal(mf / 3.0, mf / 6.0),
            ),
            Preset::Stream3 => (
                DistributionSpec::normal(4.0 * mf / 5.0, mf),
                DistributionSpec::lognormal(3.0 * mf / 5.0, mf),
            ),
        };
        Ok(StreamConfig {
            n,
            m,
            seed,
            p_add: DEFAULT_P_ADD,
            pos,
            neg,
        })
    }

    pub fn with_p_add(mut self, p_add: f64) -> Result<Self> {
        self.p_add = p_add;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::invalid("stream needs m >= 1"));
        }
        if !(0.0..=1.0).contains(&self.p_add) {
            return Err(Error::invalid(format!(
                "p_add = {} outside [0, 1]",
                self.p_add
            )));
        }
        self.pos.validate()?;
        self.neg.validate()
    }
}

/// Lazily produces the `n` events of a [`StreamConfig`].
#[derive(Debug, Clone)]
pub struct StreamGenerator {
    rng: SplitMix64,
    remaining: u64,
    m: u32,
    p_add: f64,
    pos: Sampler,
    neg: Sampler,
}

impl StreamGenerator {
    pub fn new(cfg: &StreamConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(StreamGenerator {
            rng: SplitMix64::new(cfg.seed),
            remaining: cfg.n,
            m: cfg.m,
            p_add: cfg.p_add,
            pos: cfg.pos.sampler(),
            neg: cfg.neg.sampler(),
        })
    }
}

impl Iterator for StreamGenerator {
    type Item = LogEvent;

    #[inline]
    fn next(&mut self) -> Option<LogEvent> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let (action, sampler) = if self.rng.next_f64() < self.p_add {
            (Action::Add, self.pos)
        } else {
            (Action::Remove, self.neg)
        };
        let id = sampler.draw(&mut self.rng, self.m);
        Some(LogEvent::new(ObjectId::new(id).expect("draws are >= 1"), action))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (n, Some(n))
    }
}

/// All events of `cfg`, in order.
pub fn generate(cfg: &StreamConfig) -> Result<Vec<LogEvent>> {
    Ok(StreamGenerator::new(cfg)?.collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_carry_stated_parameters() {
        let c1 = StreamConfig::preset(Preset::Stream1, 10, 600, 1).unwrap();
        assert_eq!(c1.pos.kind, DistributionKind::Uniform);
        assert_eq!(c1.neg.kind, DistributionKind::Uniform);
        assert_eq!(c1.p_add, 0.7);

        let c2 = StreamConfig::preset(Preset::Stream2, 10, 600, 1).unwrap();
        assert_eq!(c2.pos, DistributionSpec::normal(400.0, 100.0));
        assert_eq!(c2.neg, DistributionSpec::normal(200.0, 100.0));

        let c3 = StreamConfig::preset(Preset::Stream3, 10, 600, 1).unwrap();
        assert_eq!(c3.pos, DistributionSpec::normal(480.0, 600.0));
        assert_eq!(c3.neg, DistributionSpec::lognormal(360.0, 600.0));
    }

    #[test]
    fn preset_names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert!("stream4".parse::<Preset>().is_err());
    }

    #[test]
    fn rejects_bad_configs() {
        let c = StreamConfig::preset(Preset::Stream1, 10, 5, 1).unwrap();
        assert!(c.clone().with_p_add(1.5).is_err());
        assert!(c.clone().with_p_add(-0.1).is_err());
        assert!(StreamConfig::preset(Preset::Stream1, 10, 0, 1).is_err());
        let mut bad = c;
        bad.pos = DistributionSpec::normal(1.0, 0.0);
        assert!(StreamGenerator::new(&bad).is_err());
    }

    #[test]
    fn degenerate_probability_and_universe() {
        let all_add = StreamConfig::preset(Preset::Stream2, 500, 50, 9)
            .unwrap()
            .with_p_add(1.0)
            .unwrap();
        assert!(generate(&all_add).unwrap().iter().all(|e| e.action == Action::Add));

        for p in Preset::ALL {
            let single = StreamConfig::preset(p, 200, 1, 3).unwrap();
            assert!(generate(&single).unwrap().iter().all(|e| e.object.get() == 1));
        }
    }

    #[test]
    fn deterministic_and_in_range() {
        for p in Preset::ALL {
            let cfg = StreamConfig::preset(p, 5_000, 97, 42).unwrap();
            let a = generate(&cfg).unwrap();
            assert_eq!(a.len(), 5_000);
            assert_eq!(a, generate(&cfg).unwrap());
            assert!(a.iter().all(|e| (1..=97).contains(&e.object.get())));
            let other = generate(&StreamConfig { seed: 43, ..cfg }).unwrap();
            assert_ne!(a, other);
        }
    }

    #[test]
    fn first_event_follows_draw_order() {
        // Action draw, then id draw, from one SplitMix64 stream.
        let cfg = StreamConfig::preset(Preset::Stream1, 1, 1000, 77).unwrap();
        let e = generate(&cfg).unwrap()[0];
        let mut r = SplitMix64::new(77);
        let action = if r.next_f64() < 0.7 { Action::Add } else { Action::Remove };
        assert_eq!(e.action, action);
        assert_eq!(u64::from(e.object.get()), r.next_in_1_to(1000));
    }
}
