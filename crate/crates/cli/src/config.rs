//! Run configuration: defaults, JSON file, command-line overrides, validation.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

/// Keys accepted both as flags and in the `--config` file.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    /// Topological charge N (profile accepts 1 for the single monopole)
    #[arg(long)]
    pub n: Option<usize>,
    /// Shell-thickness parameter m > 1
    #[arg(long)]
    pub m: Option<f64>,
    /// Sphere quadrature points M ≥ 256
    #[arg(long)]
    pub quad: Option<usize>,
    /// Finite-difference step in (1e-8, 1e-2)
    #[arg(long)]
    pub h: Option<f64>,
    /// Innermost profile radius
    #[arg(long = "r-min")]
    pub r_min: Option<f64>,
    /// Outermost profile radius; for verify, the end of the single-monopole radius scan
    #[arg(long = "r-max")]
    pub r_max: Option<f64>,
    /// Number of radii in the profile grid (scan steps for verify)
    #[arg(long)]
    pub steps: Option<usize>,
    /// Verification suite: algebra, ps, lemma31, lemma32, theorems, operator or all
    #[arg(long)]
    pub suite: Option<String>,
    /// Output path; standard output when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Overrides {
    /// Fill unset fields from `base`.
    fn or(self, base: Overrides) -> Overrides {
        Overrides {
            n: self.n.or(base.n),
            m: self.m.or(base.m),
            quad: self.quad.or(base.quad),
            h: self.h.or(base.h),
            r_min: self.r_min.or(base.r_min),
            r_max: self.r_max.or(base.r_max),
            steps: self.steps.or(base.steps),
            suite: self.suite.or(base.suite),
            out: self.out.or(base.out),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub n: usize,
    pub m: f64,
    pub quad: usize,
    pub h: f64,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub steps: Option<usize>,
    pub suite: String,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Flags win over the file, the file over defaults.
    pub fn resolve(flags: Overrides, file: Option<&Path>, allow_single: bool) -> Result<RunConfig, String> {
        let from_file = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))?;
                serde_json::from_str(&text).map_err(|e| format!("parsing {}: {e}", path.display()))?
            }
            None => Overrides::default(),
        };
        let o = flags.or(from_file);
        let cfg = RunConfig {
            n: o.n.unwrap_or(100),
            m: o.m.unwrap_or(16.0),
            quad: o.quad.unwrap_or(2048),
            h: o.h.unwrap_or(1e-4),
            r_min: o.r_min,
            r_max: o.r_max,
            steps: o.steps,
            suite: o.suite.unwrap_or_else(|| "all".into()),
            out: o.out,
        };
        cfg.validate(allow_single)?;
        Ok(cfg)
    }

    fn validate(&self, allow_single: bool) -> Result<(), String> {
        if self.n < 8 && !(allow_single && self.n == 1) {
            return Err(format!("N must be at least 8, got {}", self.n));
        }
        if !(self.m > 1.0 && self.m.is_finite()) {
            return Err(format!("m must exceed 1, got {}", self.m));
        }
        if self.quad < 256 {
            return Err(format!("quadrature needs at least 256 points, got {}", self.quad));
        }
        if !(self.h > 1e-8 && self.h < 1e-2) {
            return Err(format!("h must lie in (1e-8, 1e-2), got {}", self.h));
        }
        for (name, v) in [("r-min", self.r_min), ("r-max", self.r_max)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(format!("{name} must be positive, got {v}"));
                }
            }
        }
        if let (Some(a), Some(b)) = (self.r_min, self.r_max) {
            if a >= b {
                return Err(format!("r-min {a} must be below r-max {b}"));
            }
        }
        if matches!(self.steps, Some(s) if s < 2) {
            return Err("steps must be at least 2".into());
        }
        Ok(())
    }
}
