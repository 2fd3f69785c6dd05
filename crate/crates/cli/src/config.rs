use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use padic_tube::ifs::{
    parse_rational, validate_system, AffineContraction, LatticeData, SelfSimilarSystem,
};
use padic_tube::num::{DEFAULT_PRECISION, MIN_PRECISION};
use padic_tube::{presets, IfsError, Prime};
use rug::{Integer, Rational};
use serde::Deserialize;

use crate::failure::Failure;

pub const PRECISION_ENV: &str = "PADIC_TUBE_PRECISION";
pub const DEFAULT_TRUNCATION: u32 = 2000;
pub const DEFAULT_EPS_MIN: f64 = 1e-6;
pub const DEFAULT_EPS_MAX: f64 = 0.9;
pub const DEFAULT_POINTS: usize = 50;
pub const DEFAULT_MAX_LEVEL: usize = 20;
pub const DEFAULT_CESARO_L: u32 = 400;
pub const DEFAULT_SAMPLES: u32 = 64;

/// Zeta functions, complex dimensions, tube formulas and Minkowski content
/// of self-similar fractal strings in the p-adic integers.
#[derive(Parser, Debug)]
#[command(name = "padic-tube", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Check the maps and print gaps and lattice data.
    Validate,
    /// Geometric zeta function as a rational function of z = r^s.
    Zeta,
    /// Complex dimensions (poles) with residues.
    Dims,
    /// Zeros of the zeta function.
    Zeros,
    /// Exact and explicit tube volume at one epsilon.
    Tube,
    /// Tube volumes over a log-uniform epsilon grid.
    Sweep,
    /// Average Minkowski content and its Cesàro approximation.
    Content,
    /// Multiplicities c_m of the lengths r^m.
    Lengths,
    /// Dimension, content and oscillation bounds as JSON.
    Report,
}

#[derive(ValueEnum, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Args, Debug, Default)]
pub struct Options {
    /// Built-in system.
    #[arg(long, global = true, value_parser = presets::NAMES)]
    pub preset: Option<String>,
    /// JSON system/run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Prime for --map or --scaling/--gaps.
    #[arg(long, global = true)]
    pub prime: Option<u64>,
    /// Affine map x -> a x + b given as a:b (repeatable).
    #[arg(long = "map", global = true, value_name = "A:B", allow_hyphen_values = true)]
    pub maps: Vec<String>,
    /// Lattice step d (lattice input).
    #[arg(long = "lattice-d", global = true, value_name = "D")]
    pub lattice_d: Option<u32>,
    /// Scaling exponents n_j (lattice input).
    #[arg(long, global = true, value_delimiter = ',', num_args = 1..)]
    pub scaling: Option<Vec<u32>>,
    /// Gap exponents m_k (lattice input).
    #[arg(long, global = true, value_delimiter = ',', num_args = 1..)]
    pub gaps: Option<Vec<u32>>,
    /// Number of terms n kept on each line of the explicit formula.
    #[arg(long, global = true)]
    pub truncation: Option<u32>,
    /// Mantissa bits of the floating-point arithmetic.
    #[arg(long, global = true, env = PRECISION_ENV)]
    pub precision: Option<u32>,
    /// Epsilon for `tube`, as a decimal or num/den.
    #[arg(long, global = true)]
    pub eps: Option<String>,
    #[arg(long, global = true)]
    pub eps_min: Option<f64>,
    #[arg(long, global = true)]
    pub eps_max: Option<f64>,
    #[arg(long, global = true)]
    pub points: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Largest level m for `lengths`.
    #[arg(long, global = true)]
    pub max: Option<usize>,
    /// Number of periods L in the Cesàro average.
    #[arg(long = "cesaro-L", alias = "cesaro-l", global = true)]
    pub cesaro_l: Option<u32>,
    /// Samples per period of the normalized volume profile.
    #[arg(long, global = true)]
    pub samples: Option<u32>,
    /// Starting level of the oscillation profile (default: adaptive).
    #[arg(long, global = true)]
    pub base_level: Option<u32>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    prime: Option<u64>,
    maps: Option<Vec<MapSpec>>,
    lattice: Option<LatticeSpec>,
    preset: Option<String>,
    truncation: Option<u32>,
    precision: Option<u32>,
    epsilon: Option<EpsilonSpec>,
    format: Option<Format>,
    output: Option<PathBuf>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct MapSpec {
    a: String,
    b: String,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct LatticeSpec {
    #[serde(default = "one")]
    d: u32,
    scaling_exponents: Vec<u32>,
    gap_exponents: Vec<u32>,
}

fn one() -> u32 {
    1
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct EpsilonSpec {
    value: Option<String>,
    min: Option<f64>,
    max: Option<f64>,
    points: Option<usize>,
}

#[derive(Debug, Clone)]
pub enum Input {
    Preset(String),
    Maps {
        prime: u64,
        maps: Vec<(String, String)>,
    },
    Lattice {
        prime: u64,
        d: u32,
        scaling: Vec<u32>,
        gaps: Vec<u32>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub input: Input,
    pub truncation: u32,
    pub precision: u32,
    pub eps: Option<Rational>,
    pub grid: EpsGrid,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub max_level: usize,
    pub cesaro_l: u32,
    pub samples: u32,
    pub base_level: Option<u32>,
}

fn read_file(path: &Path) -> Result<FileConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn split_map(text: &str) -> Result<(String, String), Failure> {
    match text.split_once(':') {
        Some((a, b)) if !a.trim().is_empty() && !b.trim().is_empty() => {
            Ok((a.trim().to_string(), b.trim().to_string()))
        }
        _ => Err(Failure::usage(format!(
            "cannot parse map {text:?}; expected A:B, e.g. 3:2"
        ))),
    }
}

/// Exact value of a decimal literal such as `1e-6`, `0.25` or `-3.5E2`.
pub fn parse_decimal(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty()
        || !(int.chars().chain(frac.chars())).all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits: Integer = format!("{int}{frac}").parse().ok()?;
    let shift = exponent - frac.len() as i32;
    let scale = if shift >= 0 {
        Rational::from(Integer::from(Integer::u_pow_u(10, shift as u32)))
    } else {
        Rational::from((
            Integer::from(1),
            Integer::from(Integer::u_pow_u(10, (-shift) as u32)),
        ))
    };
    Some(Rational::from(digits) * scale * sign)
}

/// A rational `num/den` or a decimal literal.
pub fn parse_epsilon(text: &str) -> Result<Rational, Failure> {
    let value = parse_rational(text)
        .ok()
        .or_else(|| parse_decimal(text))
        .ok_or_else(|| {
            Failure::usage(format!(
                "cannot parse epsilon {text:?}; expected a decimal or num/den"
            ))
        })?;
    if value <= 0 {
        return Err(Failure::usage(format!(
            "epsilon must be positive, got {text}"
        )));
    }
    Ok(value)
}

/// Merges command-line flags over the optional config file.
pub fn parse_config(cli: Cli) -> Result<RunConfig, Failure> {
    let Cli {
        command,
        options: o,
    } = cli;
    let file = match &o.config {
        Some(path) => read_file(path)?,
        None => FileConfig::default(),
    };
    let input = resolve_input(&o, &file)?;
    let precision = o.precision.or(file.precision).unwrap_or(DEFAULT_PRECISION);
    if precision < MIN_PRECISION {
        return Err(Failure::usage(format!(
            "precision must be at least {MIN_PRECISION} bits, got {precision}"
        )));
    }
    let eps_file = file.epsilon.unwrap_or_default();
    let eps = o
        .eps
        .as_deref()
        .or(eps_file.value.as_deref())
        .map(parse_epsilon)
        .transpose()?;
    let grid = EpsGrid {
        min: o.eps_min.or(eps_file.min).unwrap_or(DEFAULT_EPS_MIN),
        max: o.eps_max.or(eps_file.max).unwrap_or(DEFAULT_EPS_MAX),
        points: o.points.or(eps_file.points).unwrap_or(DEFAULT_POINTS),
    };
    if !(grid.min > 0.0 && grid.min.is_finite() && grid.max.is_finite()) {
        return Err(Failure::usage("epsilon bounds must be positive and finite"));
    }
    if grid.min >= grid.max {
        return Err(Failure::usage(format!(
            "--eps-min {} must be below --eps-max {}",
            grid.min, grid.max
        )));
    }
    if grid.points == 0 {
        return Err(Failure::usage("--points must be at least 1"));
    }
    if command == Command::Tube && eps.is_none() {
        return Err(Failure::usage("tube needs --eps"));
    }
    let samples = o.samples.unwrap_or(DEFAULT_SAMPLES);
    let cesaro_l = o.cesaro_l.unwrap_or(DEFAULT_CESARO_L);
    if samples == 0 || cesaro_l == 0 {
        return Err(Failure::usage("--samples and --cesaro-L must be positive"));
    }
    Ok(RunConfig {
        command,
        input,
        truncation: o
            .truncation
            .or(file.truncation)
            .unwrap_or(DEFAULT_TRUNCATION),
        precision,
        eps,
        grid,
        format: o.format.or(file.format).unwrap_or(Format::Table),
        output: o.output.or(file.output),
        max_level: o.max.unwrap_or(DEFAULT_MAX_LEVEL),
        cesaro_l,
        samples,
        base_level: o.base_level,
    })
}

fn resolve_input(o: &Options, file: &FileConfig) -> Result<Input, Failure> {
    if o.preset.is_some() && o.config.is_some() {
        return Err(Failure::usage(
            "--preset and --config are mutually exclusive",
        ));
    }
    let flag_lattice = o.scaling.is_some() || o.gaps.is_some() || o.lattice_d.is_some();
    if !o.maps.is_empty() && flag_lattice {
        return Err(Failure::usage(
            "give either --map or --scaling/--gaps, not both",
        ));
    }
    if let Some(name) = &o.preset {
        if !o.maps.is_empty() || flag_lattice {
            return Err(Failure::usage(
                "--preset cannot be combined with --map or --scaling/--gaps",
            ));
        }
        return Ok(Input::Preset(name.clone()));
    }
    let prime = o.prime.or(file.prime);
    let need_prime = || {
        prime.ok_or_else(|| Failure::usage("--prime is required with --map or --scaling/--gaps"))
    };
    if !o.maps.is_empty() {
        let maps = o
            .maps
            .iter()
            .map(|m| split_map(m))
            .collect::<Result<_, _>>()?;
        return Ok(Input::Maps {
            prime: need_prime()?,
            maps,
        });
    }
    if flag_lattice {
        let (Some(scaling), Some(gaps)) = (o.scaling.clone(), o.gaps.clone()) else {
            return Err(Failure::usage(
                "lattice input needs both --scaling and --gaps",
            ));
        };
        return Ok(Input::Lattice {
            prime: need_prime()?,
            d: o.lattice_d.unwrap_or(1),
            scaling,
            gaps,
        });
    }
    match (&file.preset, &file.maps, &file.lattice) {
        (Some(name), None, None) => {
            if presets::by_name(name).is_none() {
                return Err(Failure::usage(format!(
                    "unknown preset {name:?}; choose one of {:?}",
                    presets::NAMES
                )));
            }
            Ok(Input::Preset(name.clone()))
        }
        (None, Some(maps), None) => Ok(Input::Maps {
            prime: need_prime()?,
            maps: maps.iter().map(|m| (m.a.clone(), m.b.clone())).collect(),
        }),
        (None, None, Some(l)) => Ok(Input::Lattice {
            prime: need_prime()?,
            d: l.d,
            scaling: l.scaling_exponents.clone(),
            gaps: l.gap_exponents.clone(),
        }),
        (None, None, None) => Err(Failure::usage(
            "no system given; use --preset, --config, or --prime with --map",
        )),
        _ => Err(Failure::usage(
            "config must contain exactly one of \"preset\", \"maps\" or \"lattice\"",
        )),
    }
}

/// The system behind an [`Input`]; geometric inputs also carry their maps.
#[derive(Debug, Clone)]
pub struct ResolvedSystem {
    pub system: Option<SelfSimilarSystem>,
    pub lattice: LatticeData,
}

fn prime(p: u64) -> Result<Prime, Failure> {
    Ok(Prime::new(p)?)
}

fn relabel(err: IfsError, index: usize) -> IfsError {
    match err {
        IfsError::NotContraction { a, .. } => IfsError::NotContraction { index, a },
        IfsError::TranslationNotIntegral { b, .. } => IfsError::TranslationNotIntegral { index, b },
        other => other,
    }
}

pub fn build_system(input: &Input) -> Result<ResolvedSystem, Failure> {
    match input {
        Input::Preset(name) => {
            let system = presets::by_name(name)
                .ok_or_else(|| Failure::usage(format!("unknown preset {name:?}")))?;
            Ok(ResolvedSystem {
                lattice: system.lattice().clone(),
                system: Some(system),
            })
        }
        Input::Maps { prime: p, maps } => {
            let p = prime(*p)?;
            let maps = maps
                .iter()
                .enumerate()
                .map(|(i, (a, b))| {
                    let a = parse_rational(a).map_err(|e| Failure::usage(e.to_string()))?;
                    let b = parse_rational(b).map_err(|e| Failure::usage(e.to_string()))?;
                    AffineContraction::new(p, a, b).map_err(|e| Failure::from(relabel(e, i + 1)))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let system = validate_system(maps)?;
            Ok(ResolvedSystem {
                lattice: system.lattice().clone(),
                system: Some(system),
            })
        }
        Input::Lattice {
            prime: p,
            d,
            scaling,
            gaps,
        } => {
            let lattice = LatticeData::new(prime(*p)?, *d, scaling.clone(), gaps.clone())?;
            Ok(ResolvedSystem {
                system: None,
                lattice,
            })
        }
    }
}
