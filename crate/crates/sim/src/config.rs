//! Experiment configuration files.
//!
//! The format is flat `key = value` text, one pair per line; `#` starts a
//! comment. Lists are comma separated. Recognised keys:
//!
//! | key            | meaning                                                        | default |
//! |----------------|----------------------------------------------------------------|---------|
//! | `name`         | output file stem                                               | `experiment` |
//! | `n`            | qubits                                                         | 10 |
//! | `observables`  | observables per trial (M)                                      | 30 |
//! | `weight_mode`  | `uniform` (weights uniform on 1..=max_weight) or `fixed`       | `uniform` |
//! | `max_weight`   | largest weight in uniform mode                                 | 2 |
//! | `weights`      | fixed mode: one curve per listed weight                        | |
//! | `epsilon`      | accuracy target                                                | 0.2 |
//! | `trials`       | Monte-Carlo trials per sweep point                             | 200 |
//! | `seed`         | master seed                                                    | 1 |
//! | `crossover`    | BSC flip probability                                           | 0 |
//! | `snr_db`       | alternative to `crossover`: Es/N0 of hard-decision BPSK        | |
//! | `sweep`        | `copies`, `budget`, `crossover` or `snr_db`                    | required |
//! | `sweep_values` | points of the sweep                                            | required |
//! | `copies`       | copy count when the sweep does not set it                      | |
//! | `schemes`      | `;`-separated scheme list, see below                           | required |
//! | `code_grid`    | codes a free rate may use                                      | `uncoded,hamming74,rep3,...,rep31` |
//! | `max_outage`   | outage level a free code must predict when copies are also free | 0.01 |
//!
//! Schemes are written `kind key=value ...`:
//! `stt-uep rb=<code> [ru=<code>]`, `stt-cc [code=<code>]`,
//! `cqcr b=<bits> [code=<code>]`. A missing code is free and is chosen
//! per point by budget matching (`sweep = budget` only).

use std::fmt;
use std::str::FromStr;

use shadowlink_core::harness::WeightMode;
use shadowlink_core::CodeSpec;

#[derive(Debug, thiserror::Error)]
#[error("config line {line}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError { line, message: message.into() }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    Uniform(usize),
    Fixed(Vec<usize>),
}

impl WeightSpec {
    /// One entry per curve: the weight mode and an optional label suffix.
    pub fn modes(&self) -> Vec<(WeightMode, Option<usize>)> {
        match self {
            WeightSpec::Uniform(w) => vec![(WeightMode::UpTo(*w), None)],
            WeightSpec::Fixed(ws) => ws.iter().map(|&w| (WeightMode::Fixed(w), Some(w))).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelSetting {
    Crossover(f64),
    SnrDb(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    Copies,
    Budget,
    Crossover,
    SnrDb,
}

impl fmt::Display for SweepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepKind::Copies => "copies",
            SweepKind::Budget => "budget",
            SweepKind::Crossover => "crossover",
            SweepKind::SnrDb => "snr_db",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeSpec {
    SttUep { outcome_code: CodeSpec, basis_code: Option<CodeSpec> },
    SttCc { code: Option<CodeSpec> },
    Cqcr { bits_per_amplitude: u32, code: Option<CodeSpec> },
}

fn code_label(code: Option<CodeSpec>) -> String {
    code.map_or_else(|| "auto".to_owned(), |c| c.to_string())
}

impl fmt::Display for SchemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SchemeSpec::SttUep { outcome_code, basis_code } => {
                write!(f, "stt-uep/rb={outcome_code}/ru={}", code_label(basis_code))
            }
            SchemeSpec::SttCc { code } => write!(f, "stt-cc/code={}", code_label(code)),
            SchemeSpec::Cqcr { bits_per_amplitude, code } => {
                write!(f, "cqcr/b={bits_per_amplitude}/code={}", code_label(code))
            }
        }
    }
}

impl FromStr for SchemeSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut parts = s.split_whitespace();
        let kind = parts.next().ok_or("empty scheme")?;
        let mut params = std::collections::BTreeMap::new();
        for p in parts {
            let (k, v) = p.split_once('=').ok_or_else(|| format!("expected key=value, got `{p}`"))?;
            params.insert(k, v);
        }
        let mut code = |key: &str| -> Result<Option<CodeSpec>, String> {
            params.remove(key).map(|v| v.parse().map_err(|e| format!("{key}: {e}"))).transpose()
        };
        let spec = match kind {
            "stt-uep" => {
                let outcome_code = code("rb")?.ok_or("stt-uep needs rb=<code>")?;
                let basis_code = code("ru")?;
                if let Some(bc) = basis_code {
                    if bc.rate() >= outcome_code.rate() {
                        return Err("stt-uep needs rate(ru) < rate(rb)".into());
                    }
                }
                SchemeSpec::SttUep { outcome_code, basis_code }
            }
            "stt-cc" => SchemeSpec::SttCc { code: code("code")? },
            "cqcr" => {
                let c = code("code")?;
                let b = params
                    .remove("b")
                    .ok_or("cqcr needs b=<bits>")?
                    .parse::<u32>()
                    .map_err(|e| format!("b: {e}"))?;
                if !(2..=32).contains(&b) || b % 2 != 0 {
                    return Err("cqcr b must be even and in 2..=32".into());
                }
                SchemeSpec::Cqcr { bits_per_amplitude: b, code: c }
            }
            other => return Err(format!("unknown scheme `{other}`")),
        };
        if let Some(k) = params.keys().next() {
            return Err(format!("unknown parameter `{k}` for {kind}"));
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub n: usize,
    pub observables: usize,
    pub weights: WeightSpec,
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
    pub channel: ChannelSetting,
    pub sweep: SweepKind,
    pub sweep_values: Vec<f64>,
    pub copies: Option<usize>,
    pub schemes: Vec<SchemeSpec>,
    pub code_grid: Vec<CodeSpec>,
    pub max_outage: f64,
}

pub fn default_code_grid() -> Vec<CodeSpec> {
    let mut grid = vec![CodeSpec::Uncoded, CodeSpec::Hamming74];
    grid.extend((3..=31).step_by(2).map(CodeSpec::Repetition));
    grid
}

fn list<T: FromStr>(line: usize, key: &str, v: &str) -> Result<Vec<T>, ConfigError>
where
    T::Err: fmt::Display,
{
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|e| err(line, format!("{key}: `{s}`: {e}"))))
        .collect()
}

fn scalar<T: FromStr>(line: usize, key: &str, v: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    v.parse().map_err(|e| err(line, format!("{key}: `{v}`: {e}")))
}

impl FromStr for ExperimentConfig {
    type Err = ConfigError;

    fn from_str(text: &str) -> Result<Self, ConfigError> {
        let mut name = "experiment".to_owned();
        let (mut n, mut observables, mut max_weight) = (10usize, 30usize, 2usize);
        let mut weight_mode = "uniform".to_owned();
        let mut fixed_weights: Option<Vec<usize>> = None;
        let (mut epsilon, mut trials, mut seed) = (0.2f64, 200usize, 1u64);
        let mut crossover: Option<f64> = None;
        let mut snr_db: Option<f64> = None;
        let mut sweep: Option<SweepKind> = None;
        let mut sweep_values: Option<Vec<f64>> = None;
        let mut copies = None;
        let mut schemes: Option<Vec<SchemeSpec>> = None;
        let mut code_grid = default_code_grid();
        let mut max_outage = 0.01;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| err(line, "expected `key = value`"))?;
            match key {
                "name" => name = value.to_owned(),
                "n" => n = scalar(line, key, value)?,
                "observables" => observables = scalar(line, key, value)?,
                "max_weight" => max_weight = scalar(line, key, value)?,
                "weight_mode" => weight_mode = value.to_owned(),
                "weights" => fixed_weights = Some(list(line, key, value)?),
                "epsilon" => epsilon = scalar(line, key, value)?,
                "trials" => trials = scalar(line, key, value)?,
                "seed" => seed = scalar(line, key, value)?,
                "crossover" => crossover = Some(scalar(line, key, value)?),
                "snr_db" => snr_db = Some(scalar(line, key, value)?),
                "sweep" => {
                    sweep = Some(match value {
                        "copies" => SweepKind::Copies,
                        "budget" => SweepKind::Budget,
                        "crossover" => SweepKind::Crossover,
                        "snr_db" => SweepKind::SnrDb,
                        other => return Err(err(line, format!("unknown sweep `{other}`"))),
                    })
                }
                "sweep_values" => sweep_values = Some(list(line, key, value)?),
                "copies" => copies = Some(scalar(line, key, value)?),
                "schemes" => {
                    schemes = Some(
                        value
                            .split(';')
                            .map(str::trim)
                            .filter(|s| !s.is_empty())
                            .map(|s| s.parse().map_err(|e: String| err(line, e)))
                            .collect::<Result<_, _>>()?,
                    )
                }
                "code_grid" => code_grid = list(line, key, value)?,
                "max_outage" => max_outage = scalar(line, key, value)?,
                other => return Err(err(line, format!("unknown key `{other}`"))),
            }
        }

        let weights = match weight_mode.as_str() {
            "uniform" => WeightSpec::Uniform(max_weight),
            "fixed" => WeightSpec::Fixed(
                fixed_weights.ok_or_else(|| err(0, "weight_mode = fixed needs `weights`"))?,
            ),
            other => return Err(err(0, format!("unknown weight_mode `{other}`"))),
        };
        let channel = match (crossover, snr_db) {
            (Some(_), Some(_)) => return Err(err(0, "set only one of `crossover` and `snr_db`")),
            (_, Some(s)) => ChannelSetting::SnrDb(s),
            (c, None) => ChannelSetting::Crossover(c.unwrap_or(0.0)),
        };
        let cfg = ExperimentConfig {
            name,
            n,
            observables,
            weights,
            epsilon,
            trials,
            seed,
            channel,
            sweep: sweep.ok_or_else(|| err(0, "missing `sweep`"))?,
            sweep_values: sweep_values.ok_or_else(|| err(0, "missing `sweep_values`"))?,
            copies,
            schemes: schemes.ok_or_else(|| err(0, "missing `schemes`"))?,
            code_grid,
            max_outage,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |m: &str| Err(err(0, m));
        if !(1..=shadowlink_core::qsim::MAX_QUBITS).contains(&self.n) {
            return fail("n out of range");
        }
        if self.observables == 0 || self.trials == 0 {
            return fail("observables and trials must be at least 1");
        }
        if !(self.epsilon > 0.0) {
            return fail("epsilon must be positive");
        }
        let weights_ok = match &self.weights {
            WeightSpec::Uniform(w) => (1..=self.n).contains(w),
            WeightSpec::Fixed(ws) => !ws.is_empty() && ws.iter().all(|w| (1..=self.n).contains(w)),
        };
        if !weights_ok {
            return fail("weights must lie in 1..=n");
        }
        if self.schemes.is_empty() || self.sweep_values.is_empty() {
            return fail("need at least one scheme and one sweep value");
        }
        if self.code_grid.is_empty() {
            return fail("code_grid is empty");
        }
        let free_code = self.schemes.iter().any(|s| match s {
            SchemeSpec::SttUep { basis_code, .. } => basis_code.is_none(),
            SchemeSpec::SttCc { code } | SchemeSpec::Cqcr { code, .. } => code.is_none(),
        });
        if free_code && self.sweep != SweepKind::Budget {
            return fail("free code rates are only allowed with sweep = budget");
        }
        let stt = self.schemes.iter().any(|s| !matches!(s, SchemeSpec::Cqcr { .. }));
        if stt && matches!(self.sweep, SweepKind::Crossover | SweepKind::SnrDb) && self.copies.is_none() {
            return fail("sweeping the channel needs a fixed `copies`");
        }
        match self.sweep {
            SweepKind::Copies | SweepKind::Budget => {
                if self.sweep_values.iter().any(|v| !(*v >= 1.0) || v.fract() != 0.0) {
                    return fail("copy and budget sweep values must be positive integers");
                }
            }
            SweepKind::Crossover => {
                if self.sweep_values.iter().any(|v| !(0.0..0.5).contains(v)) {
                    return fail("crossover values must lie in [0, 0.5)");
                }
            }
            SweepKind::SnrDb => {}
        }
        if let ChannelSetting::Crossover(p) = self.channel {
            if !(0.0..0.5).contains(&p) {
                return fail("crossover must lie in [0, 0.5)");
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG4: &str = "
        # copies sweep, one curve per weight
        name = fig4
        n = 6
        weight_mode = fixed
        weights = 2, 3
        crossover = 0.001
        sweep = copies
        sweep_values = 100, 200
        schemes = stt-uep rb=uncoded ru=rep3
    ";

    #[test]
    fn parses_a_full_config() {
        let cfg: ExperimentConfig = FIG4.parse().unwrap();
        assert_eq!(cfg.name, "fig4");
        assert_eq!(cfg.n, 6);
        assert_eq!(cfg.weights, WeightSpec::Fixed(vec![2, 3]));
        assert_eq!(cfg.channel, ChannelSetting::Crossover(0.001));
        assert_eq!(cfg.sweep, SweepKind::Copies);
        assert_eq!(cfg.sweep_values, [100.0, 200.0]);
        assert_eq!(
            cfg.schemes,
            [SchemeSpec::SttUep {
                outcome_code: CodeSpec::Uncoded,
                basis_code: Some(CodeSpec::Repetition(3))
            }]
        );
        assert_eq!(cfg.trials, 200);
        assert_eq!(cfg.code_grid.len(), 17);
    }

    #[test]
    fn scheme_syntax() {
        let s: SchemeSpec = "cqcr b=4 code=rep3".parse().unwrap();
        assert_eq!(s.to_string(), "cqcr/b=4/code=rep3");
        let s: SchemeSpec = "stt-cc".parse().unwrap();
        assert_eq!(s, SchemeSpec::SttCc { code: None });
        assert!("stt-uep ru=rep3".parse::<SchemeSpec>().is_err());
        assert!("stt-uep rb=rep3 ru=rep3".parse::<SchemeSpec>().is_err());
        assert!("cqcr b=3".parse::<SchemeSpec>().is_err());
        assert!("cqcr b=4 foo=1".parse::<SchemeSpec>().is_err());
        assert!("ldpc".parse::<SchemeSpec>().is_err());
    }

    #[test]
    fn rejects_bad_configs() {
        assert!("n = 4".parse::<ExperimentConfig>().is_err());
        let free = FIG4.replace("ru=rep3", "");
        assert!(free.parse::<ExperimentConfig>().is_err());
        let bad_key = format!("{FIG4}\nbogus = 1");
        let e = bad_key.parse::<ExperimentConfig>().unwrap_err();
        assert!(e.message.contains("bogus"));
        assert!(FIG4.replace("weights = 2, 3", "weights = 7").parse::<ExperimentConfig>().is_err());
        assert!(format!("{FIG4}\nsnr_db = 3").parse::<ExperimentConfig>().is_err());
        assert!(FIG4.replace("= copies", "= crossover").replace("100, 200", "0.1").parse::<ExperimentConfig>().is_err());
    }
}
