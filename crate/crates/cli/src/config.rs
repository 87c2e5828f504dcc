//! Optional `key = value` run configuration, merged under command-line flags.
//!
//! ```text
//! # comments and blank lines are ignored
//! space = su_so3        # or a family name together with `n`
//! n = 3
//! radius = 1
//! q = tanh:1
//! a0 = contact
//! alambda = contact
//! kappa = 1
//! tol = 1e-8
//! tol_contact = 1e-9
//! tol_killing = 1e-9
//! tol_kahler = 1e-10
//! tol_riccati = 1e-12
//! floor = 1e-3
//! samples = 10
//! seed = 0
//! output = report.json
//! cache_dir = /tmp/symtan
//! ```

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

/// Every recognised key.
pub const KEYS: [&str; 18] = [
    "space",
    "n",
    "radius",
    "q",
    "a0",
    "alambda",
    "kappa",
    "tol",
    "tol_contact",
    "tol_killing",
    "tol_kahler",
    "tol_riccati",
    "floor",
    "samples",
    "seed",
    "output",
    "cache_dir",
    "theorem",
];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunConfig {
    pub space: Option<String>,
    pub n: Option<usize>,
    pub radius: Option<f64>,
    pub q: Option<String>,
    pub a0: Option<String>,
    pub alambda: Option<String>,
    pub kappa: Option<f64>,
    pub tol: Option<f64>,
    pub tol_contact: Option<f64>,
    pub tol_killing: Option<f64>,
    pub tol_kahler: Option<f64>,
    pub tol_riccati: Option<f64>,
    pub floor: Option<f64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub theorem: Option<String>,
}

fn positive(line: usize, key: &str, v: &str) -> Result<f64> {
    let x: f64 = v
        .parse()
        .map_err(|_| anyhow::anyhow!("line {line}: key `{key}`: `{v}` is not a number"))?;
    if !(x > 0.0) || !x.is_finite() {
        bail!("line {line}: key `{key}`: value must be positive, got `{v}`");
    }
    Ok(x)
}

fn count(line: usize, key: &str, v: &str) -> Result<usize> {
    match v.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => bail!("line {line}: key `{key}`: expected a positive integer, got `{v}`"),
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((key, value)) = body.split_once('=') else {
                bail!("line {line}: expected `key = value`, got `{body}`");
            };
            let (key, value) = (key.trim(), value.trim());
            if value.is_empty() {
                bail!("line {line}: key `{key}` has no value");
            }
            match key {
                "space" => cfg.space = Some(value.to_string()),
                "n" => cfg.n = Some(count(line, key, value)?),
                "radius" => cfg.radius = Some(positive(line, key, value)?),
                "q" => cfg.q = Some(value.to_string()),
                "a0" => cfg.a0 = Some(value.to_string()),
                "alambda" => cfg.alambda = Some(value.to_string()),
                "kappa" => cfg.kappa = Some(positive(line, key, value)?),
                "tol" => cfg.tol = Some(positive(line, key, value)?),
                "tol_contact" => cfg.tol_contact = Some(positive(line, key, value)?),
                "tol_killing" => cfg.tol_killing = Some(positive(line, key, value)?),
                "tol_kahler" => cfg.tol_kahler = Some(positive(line, key, value)?),
                "tol_riccati" => cfg.tol_riccati = Some(positive(line, key, value)?),
                "floor" => cfg.floor = Some(positive(line, key, value)?),
                "samples" => cfg.samples = Some(count(line, key, value)?),
                "seed" => {
                    cfg.seed = Some(
                        value
                            .parse()
                            .map_err(|_| anyhow::anyhow!("line {line}: key `seed`: `{value}` is not a 64-bit unsigned integer"))?,
                    )
                }
                "output" => cfg.output = Some(PathBuf::from(value)),
                "cache_dir" => cfg.cache_dir = Some(PathBuf::from(value)),
                "theorem" => cfg.theorem = Some(value.to_string()),
                other => bail!("line {line}: unknown key `{other}` (known keys: {})", KEYS.join(", ")),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    /// Space id with `n` appended to a bare family name.
    pub fn space_id(&self) -> Option<String> {
        let s = self.space.clone()?;
        match self.n {
            Some(n) if !s.ends_with(|c: char| c.is_ascii_digit()) => Some(format!("{s}{n}")),
            _ => Some(s),
        }
    }

    /// Fills every unset field from `base`.
    pub fn or(self, base: RunConfig) -> RunConfig {
        RunConfig {
            space: self.space.or(base.space),
            n: self.n.or(base.n),
            radius: self.radius.or(base.radius),
            q: self.q.or(base.q),
            a0: self.a0.or(base.a0),
            alambda: self.alambda.or(base.alambda),
            kappa: self.kappa.or(base.kappa),
            tol: self.tol.or(base.tol),
            tol_contact: self.tol_contact.or(base.tol_contact),
            tol_killing: self.tol_killing.or(base.tol_killing),
            tol_kahler: self.tol_kahler.or(base.tol_kahler),
            tol_riccati: self.tol_riccati.or(base.tol_riccati),
            floor: self.floor.or(base.floor),
            samples: self.samples.or(base.samples),
            seed: self.seed.or(base.seed),
            output: self.output.or(base.output),
            cache_dir: self.cache_dir.or(base.cache_dir),
            theorem: self.theorem.or(base.theorem),
        }
    }
}
