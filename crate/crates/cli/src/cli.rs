use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "cfspectra", version, about = "Certified continued fractions of algebraic numbers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Partial quotients of a real algebraic number.
    Expand(Opts),
    /// Convergents p_n / q_n.
    Convergents(Opts),
    /// Preperiod and shortest period of a quadratic irrational.
    Period(Opts),
    /// Subword complexity p(w, n) of the quotient word.
    Complexity(Opts),
    /// Repetition, mirror-repetition and shared-block witnesses.
    Detect {
        #[arg(value_enum)]
        kind: DetectKind,
        #[command(flatten)]
        opts: Opts,
    },
    /// Determinant, mirror, homomorphism, approximation and growth identities.
    Verify(Opts),
    /// Transport identities, linear-form smallness and growth conditions on witnesses.
    Harness {
        #[arg(value_enum, default_value = "all")]
        check: HarnessCheck,
        #[command(flatten)]
        opts: Opts,
    },
    /// Orbit scans, the separation bound and growth gaps.
    Orbit {
        #[arg(value_enum)]
        task: OrbitTask,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DetectKind {
    Repetition,
    Mirror,
    Shared,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HarnessCheck {
    All,
    Transport,
    L1,
    Growth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitTask {
    Scan,
    Separation,
    Gap,
}

/// Flags shared by every subcommand. Numeric flags stay optional so that a
/// config file can fill the ones left unset.
#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    /// Polynomial coefficients, lowest degree first ("-2,0,0,1" is x^3 - 2).
    #[arg(long, allow_hyphen_values = true)]
    pub poly: Option<String>,
    /// Which real root: ascending index from 0, or "largest".
    #[arg(long)]
    pub root: Option<String>,
    /// CF word file (JSON or one integer per line).
    #[arg(long)]
    pub word: Option<PathBuf>,
    /// Second number for pair commands.
    #[arg(long, allow_hyphen_values = true)]
    pub poly2: Option<String>,
    #[arg(long)]
    pub root2: Option<String>,
    #[arg(long)]
    pub word2: Option<PathBuf>,
    /// Number of partial quotients after a_0.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Starting precision in bits for certified comparisons.
    #[arg(long)]
    pub bits: Option<u64>,
    /// Ratio bound (|A| + |A'|) / |B| <= L.
    #[arg(long = "L", value_name = "L")]
    pub l: Option<String>,
    /// Exponent slack in the growth condition.
    #[arg(long)]
    pub delta: Option<String>,
    /// Minimal block length |B|.
    #[arg(long = "min-b")]
    pub min_b: Option<usize>,
    /// Mirror (reversed) blocks for shared-block detection.
    #[arg(long)]
    pub mirror: bool,
    /// Witnesses "k,l,m" for the harness; repeatable.
    #[arg(long)]
    pub witness: Vec<String>,
    #[arg(long)]
    pub height: Option<u64>,
    #[arg(long)]
    pub epsilon: Option<String>,
    /// Orbit base point: polynomial coefficients or "inf".
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Norm for orbit scans: classic or quadratic.
    #[arg(long)]
    pub mode: Option<String>,
    /// Translate window |t| <= window in orbit scans.
    #[arg(long)]
    pub window: Option<u64>,
    /// Gap k in q_{n+k} > q_n^{1+eps}.
    #[arg(long)]
    pub k: Option<usize>,
    /// Largest factor length for complexity.
    #[arg(long = "max-n")]
    pub max_n: Option<usize>,
    /// key=value config file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Job file (JSON object or array of objects) for harness and orbit.
    #[arg(long)]
    pub job: Option<PathBuf>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// json or csv.
    #[arg(long)]
    pub format: Option<String>,
    /// Skip the expansion cache.
    #[arg(long = "no-cache")]
    pub no_cache: bool,
}
