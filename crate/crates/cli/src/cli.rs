//! Command-line arguments.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use rtp_core::analysis::EigenvalueRule;

#[derive(Debug, Parser)]
#[command(
    name = "rtp",
    version,
    about = "Relative tensor products over multi-matrix algebras"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Args)]
pub struct GlobalArgs {
    /// Relative eigenvalue threshold for ranks and supports.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub rtol: f64,
    /// Tolerance for numerical certificates (norms, decompositions).
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub norm_tol: f64,
    /// Render human-readable aligned tables instead of JSON.
    #[arg(long, global = true)]
    pub table: bool,
    /// Also write the result record to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write the per-k table of a demo as CSV.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct DemoArgs {
    /// harmonic, inverse-cube, geometric:R, constant:C or custom:a,b,...
    #[arg(long)]
    pub rule: Option<Rule>,
    /// Truncation N (matrix size).
    #[arg(long)]
    pub n: Option<usize>,
    /// Largest k.
    #[arg(long)]
    pub k_max: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// GNS space of a functional.
    Gns {
        document: PathBuf,
        functional: Option<String>,
    },
    /// Multiplicities and intertwiner of a representation.
    Decompose {
        document: PathBuf,
        representation: Option<String>,
    },
    /// Dimension of the intertwiner space between two module classes.
    HomDim {
        document: PathBuf,
        a: Option<String>,
        b: Option<String>,
    },
    /// ξ ⊗_φ η for two vectors.
    RtpVector {
        document: PathBuf,
        functional: Option<String>,
        xi: Option<String>,
        eta: Option<String>,
    },
    /// Module-level relative tensor product of a right and a left module.
    RtpModule {
        document: PathBuf,
        h: Option<String>,
        k: Option<String>,
        functional: Option<String>,
    },
    /// Change-of-weight element h^{-1/2} g^{1/2}.
    Cocycle {
        document: PathBuf,
        phi: Option<String>,
        psi: Option<String>,
    },
    /// Compose two bimodules.
    Compose {
        document: PathBuf,
        a: Option<String>,
        b: Option<String>,
    },
    /// Contragredient of a bimodule.
    Contragredient {
        document: PathBuf,
        bimodule: Option<String>,
    },
    /// Morita equivalence of two algebras.
    Morita {
        document: PathBuf,
        m: Option<String>,
        n: Option<String>,
    },
    /// Index of an inclusion.
    Index {
        document: PathBuf,
        inclusion: Option<String>,
    },
    /// Induced map of a bimodule (or of an inclusion's index morphism) on a
    /// module class.
    MorphismApply {
        document: PathBuf,
        module: Option<String>,
        #[arg(long, conflicts_with = "inclusion")]
        bimodule: Option<String>,
        #[arg(long)]
        inclusion: Option<String>,
    },
    /// Norm of the tensor-lift map.
    TensorNorm {
        document: PathBuf,
        functional: Option<String>,
    },
    /// Norm of the bilinear map on simple tensors.
    BilinearNorm {
        document: PathBuf,
        functional: Option<String>,
    },
    /// Norm table of the truncated divergent tensors T_k.
    DivergenceDemo(DemoArgs),
    /// Norm table of the shrinking pairs with fixed product.
    IsometryDemo(DemoArgs),
    /// Check every object of a document.
    Validate { document: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gns { .. } => "gns",
            Command::Decompose { .. } => "decompose",
            Command::HomDim { .. } => "hom-dim",
            Command::RtpVector { .. } => "rtp-vector",
            Command::RtpModule { .. } => "rtp-module",
            Command::Cocycle { .. } => "cocycle",
            Command::Compose { .. } => "compose",
            Command::Contragredient { .. } => "contragredient",
            Command::Morita { .. } => "morita",
            Command::Index { .. } => "index",
            Command::MorphismApply { .. } => "morphism-apply",
            Command::TensorNorm { .. } => "tensor-norm",
            Command::BilinearNorm { .. } => "bilinear-norm",
            Command::DivergenceDemo(_) => "divergence-demo",
            Command::IsometryDemo(_) => "isometry-demo",
            Command::Validate { .. } => "validate",
        }
    }
}

/// Parsed `--rule` value.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule(pub EigenvalueRule);

impl Rule {
    pub fn label(&self) -> String {
        match &self.0 {
            EigenvalueRule::Harmonic => "harmonic".into(),
            EigenvalueRule::InverseCube => "inverse-cube".into(),
            EigenvalueRule::Geometric(r) => format!("geometric:{r}"),
            EigenvalueRule::Constant(c) => format!("constant:{c}"),
            EigenvalueRule::Custom(v) => format!(
                "custom:{}",
                v.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
        }
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let number = |a: Option<&str>| -> Result<f64, String> {
            a.ok_or_else(|| format!("rule '{head}' needs a value, e.g. {head}:2"))?
                .parse::<f64>()
                .map_err(|e| e.to_string())
        };
        let rule = match head {
            "harmonic" => EigenvalueRule::Harmonic,
            "inverse-cube" => EigenvalueRule::InverseCube,
            "geometric" => EigenvalueRule::Geometric(number(arg)?),
            "constant" => EigenvalueRule::Constant(number(arg)?),
            "custom" => EigenvalueRule::Custom(
                arg.ok_or("custom rule needs values")?
                    .split(',')
                    .map(|x| x.trim().parse::<f64>().map_err(|e| e.to_string()))
                    .collect::<Result<_, _>>()?,
            ),
            other => return Err(format!("unknown eigenvalue rule '{other}'")),
        };
        Ok(Rule(rule))
    }
}
