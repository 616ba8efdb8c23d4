//! Run configuration and its command-line form.

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use sn_core::exact_linalg::format_rational;
use sn_core::probe::Window;
use sn_core::slrep::ModuleKind;
use sn_core::weyl::TwistParam;

use crate::suites::SUITE_NAMES;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Verification suites for S_n / W_n tensor modules on a torus.
#[derive(Parser, Debug, Clone)]
#[command(name = "snprobe", version)]
pub struct Args {
    /// Rank n (at least 2).
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// trivial | natural | ext:k | sym:m | adjoint
    #[arg(long, default_value = "trivial")]
    pub module: String,
    /// Twist as p/q,... (defaults to zero).
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Exterior level for the minuscule and maximality suites.
    #[arg(long)]
    pub k: Option<usize>,
    /// B,R,L,margin (defaults depend on n).
    #[arg(long)]
    pub window: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated suite names.
    #[arg(long, default_value = "identities")]
    pub suite: String,
    /// Output path; stdout when absent.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for the closure engine (default: all cores).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Record wall time per suite (makes reports differ between runs).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub n: usize,
    pub module: ModuleKind,
    pub lambda: TwistParam,
    pub k: Option<usize>,
    pub window: Window,
    pub seed: u64,
    pub suites: Vec<String>,
    pub timing: bool,
}

/// The config as echoed in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConfigEcho {
    pub n: usize,
    pub module_kind: String,
    pub lambda: Vec<String>,
    pub k: Option<usize>,
    pub window: WindowEcho,
    pub prng_seed: u64,
    pub suites: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WindowEcho {
    #[serde(rename = "B")]
    pub b: i32,
    #[serde(rename = "R")]
    pub r: i32,
    #[serde(rename = "L")]
    pub l: usize,
    pub margin: i32,
}

impl RunConfig {
    pub fn new(n: usize, module: ModuleKind, lambda: TwistParam, suites: &[&str]) -> Result<Self, CliError> {
        let cfg = RunConfig {
            n,
            module,
            lambda,
            k: None,
            window: Window::default_for(n),
            seed: 0,
            suites: suites.iter().map(|s| s.to_string()).collect(),
            timing: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_window(mut self, window: Window) -> Self {
        self.window = window;
        self
    }

    pub fn from_args(args: &Args) -> Result<Self, CliError> {
        let module = ModuleKind::parse(&args.module)?;
        let lambda = match &args.lambda {
            Some(s) => TwistParam::parse(s)?,
            None => TwistParam::zero(args.n),
        };
        let window = match &args.window {
            Some(s) => Window::parse(s)?,
            None => Window::default_for(args.n),
        };
        let suites = args.suite.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
        let cfg = RunConfig { n: args.n, module, lambda, k: args.k, window, seed: args.seed, suites, timing: args.timing };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.n < 2 {
            return Err(sn_core::Error::RankTooSmall(self.n).into());
        }
        if self.lambda.rank() != self.n {
            return Err(sn_core::Error::RankMismatch { expected: self.n, got: self.lambda.rank() }.into());
        }
        if let ModuleKind::Exterior(k) = self.module {
            if k > self.n {
                return Err(sn_core::Error::LevelOutOfRange { k, lo: 0, hi: self.n }.into());
            }
        }
        if let Some(k) = self.k {
            if k > self.n {
                return Err(sn_core::Error::LevelOutOfRange { k, lo: 0, hi: self.n }.into());
            }
        }
        let w = self.window;
        sn_core::probe::Window::new(w.bound, w.gen_bound, w.depth, w.margin)?;
        if self.suites.is_empty() {
            return Err(CliError::UnknownSuite(String::new()));
        }
        for s in &self.suites {
            if !SUITE_NAMES.contains(&s.as_str()) {
                return Err(CliError::UnknownSuite(s.clone()));
            }
        }
        Ok(())
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            n: self.n,
            module_kind: self.module.to_string(),
            lambda: self.lambda.0.iter().map(format_rational).collect(),
            k: self.k,
            window: WindowEcho { b: self.window.bound, r: self.window.gen_bound, l: self.window.depth, margin: self.window.margin },
            prng_seed: self.seed,
            suites: self.suites.clone(),
        }
    }
}
