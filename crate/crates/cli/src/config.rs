//! Run configuration: a JSON file merged with command-line flags.

use std::path::{Path, PathBuf};

use csym_core::defect::{u_with_c_symmetry, CParams, UMatrix};
use csym_core::numerics::Grid;
use csym_core::C64;
use nalgebra::Matrix2;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Abstract,
    Schrodinger,
    Dirac,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    Theta,
    Omega,
    Phi,
    Xi,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Theta => "theta",
            SweepParam::Omega => "omega",
            SweepParam::Phi => "phi",
            SweepParam::Xi => "xi",
        }
    }

    fn is_angle(self) -> bool {
        self != SweepParam::Theta
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    pub theta: Option<f64>,
    pub omega: Option<f64>,
    pub phi: Option<f64>,
    pub xi: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UFile {
    pub q: Option<f64>,
    pub r: Option<f64>,
    pub phi: Option<f64>,
    pub gamma: Option<f64>,
    pub xi: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridFile {
    #[serde(rename = "L")]
    pub l: Option<f64>,
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum InputFile {
    Gaussian { center: f64, width: f64 },
    /// JSON array of `(x, Re f, Im f)` triples on the grid nodes.
    Samples(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Text,
}

/// The configuration file. Every field is optional; flags override it.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub model: Option<Model>,
    pub params: Option<ParamsFile>,
    pub u: Option<UFile>,
    /// Row-major `[re, im]` pairs.
    pub u_entries: Option<[[f64; 2]; 4]>,
    pub coupling: Option<[[f64; 2]; 4]>,
    pub c: Option<f64>,
    pub tol: Option<f64>,
    pub grid: Option<GridFile>,
    pub z: Option<[f64; 2]>,
    pub input: Option<InputFile>,
    pub sweep: Option<SweepFile>,
    pub degrees: Option<bool>,
    pub format: Option<Format>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }
}

/// Flag values that override the file.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Overrides {
    /// Model: abstract, schrodinger or dirac.
    #[arg(long, global = true)]
    pub model: Option<Model>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub xi: Option<f64>,
    /// Entry `q` of U; selects the explicit U source.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub q: Option<f64>,
    #[arg(long, global = true)]
    pub r: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    /// Speed of light for the Dirac model.
    #[arg(long, global = true)]
    pub c: Option<f64>,
    #[arg(long = "z-re", global = true, allow_hyphen_values = true)]
    pub z_re: Option<f64>,
    #[arg(long = "z-im", global = true, allow_hyphen_values = true)]
    pub z_im: Option<f64>,
    /// Parameter to sweep for `spectrum`.
    #[arg(long, global = true)]
    pub sweep: Option<SweepParam>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub from: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub to: Option<f64>,
    #[arg(long, global = true)]
    pub steps: Option<usize>,
}

/// A single source of extension parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Source {
    Params { theta: f64, omega: f64, phi: f64, xi: f64 },
    U { q: f64, r: f64, phi: f64, gamma: f64, xi: f64 },
    UEntries(Matrix2<C64>),
    Coupling(Matrix2<C64>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.from];
        }
        (0..self.steps)
            .map(|k| self.from + (self.to - self.from) * k as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Gaussian { center: f64, width: f64 },
    Samples(PathBuf),
}

/// Fully merged configuration; angles are in radians.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: Option<Model>,
    pub source: Option<Source>,
    pub c: f64,
    pub tol: Option<f64>,
    pub grid_l: Option<f64>,
    pub grid_n: Option<usize>,
    pub z: Option<C64>,
    pub input: Input,
    pub sweep: Option<Sweep>,
    pub json: bool,
    pub csv: Option<PathBuf>,
}

pub struct GlobalFlags<'a> {
    pub overrides: &'a Overrides,
    pub tol: Option<f64>,
    pub grid_l: Option<f64>,
    pub grid_n: Option<usize>,
    pub json: bool,
    pub csv: Option<PathBuf>,
    pub degrees: bool,
}

fn entries(e: &[[f64; 2]; 4]) -> Matrix2<C64> {
    let c = |k: usize| C64::new(e[k][0], e[k][1]);
    Matrix2::new(c(0), c(1), c(2), c(3))
}

fn positive(name: &str, v: Option<f64>) -> Result<Option<f64>, CliError> {
    match v {
        Some(x) if !(x.is_finite() && x > 0.0) => {
            Err(CliError::Usage(format!("{name} must be a positive number, got {x}")))
        }
        _ => Ok(v),
    }
}

impl RunConfig {
    pub fn merge(file: ConfigFile, flags: GlobalFlags<'_>) -> Result<Self, CliError> {
        let o = flags.overrides;
        let degrees = flags.degrees || file.degrees.unwrap_or(false);
        let ang = |v: f64| if degrees { v.to_radians() } else { v };

        let flag_u = o.q.is_some() || o.r.is_some() || o.gamma.is_some();
        let flag_params = o.theta.is_some() || o.omega.is_some();
        let mut kinds = Vec::new();
        if file.params.is_some() {
            kinds.push("params");
        }
        if file.u.is_some() {
            kinds.push("u");
        }
        if file.u_entries.is_some() {
            kinds.push("u_entries");
        }
        if file.coupling.is_some() {
            kinds.push("coupling");
        }
        if flag_u && !kinds.contains(&"u") {
            kinds.push("u");
        }
        if flag_params && !kinds.contains(&"params") {
            kinds.push("params");
        }
        if kinds.is_empty() && (o.phi.is_some() || o.xi.is_some()) {
            kinds.push("params");
        }
        if kinds.len() > 1 {
            return Err(CliError::Usage(format!(
                "exactly one parameter source is allowed, got {}",
                kinds.join(", ")
            )));
        }
        let source = match kinds.first().copied() {
            None => None,
            Some("params") => {
                let p = file.params.unwrap_or_default();
                let theta = o.theta.or(p.theta).ok_or_else(|| {
                    CliError::Usage("params.theta is required".into())
                })?;
                Some(Source::Params {
                    theta,
                    omega: ang(o.omega.or(p.omega).unwrap_or(0.0)),
                    phi: ang(o.phi.or(p.phi).unwrap_or(0.0)),
                    xi: ang(o.xi.or(p.xi).unwrap_or(0.0)),
                })
            }
            Some("u") => {
                let u = file.u.unwrap_or_default();
                let q = o.q.or(u.q);
                let r = o.r.or(u.r);
                let (q, r) = match (q, r) {
                    (Some(q), Some(r)) => (q, r),
                    (Some(q), None) => (q, (1.0 - q * q).max(0.0).sqrt()),
                    (None, Some(r)) => ((1.0 - r * r).max(0.0).sqrt(), r),
                    (None, None) => return Err(CliError::Usage("u.q or u.r is required".into())),
                };
                Some(Source::U {
                    q,
                    r,
                    phi: ang(o.phi.or(u.phi).unwrap_or(0.0)),
                    gamma: ang(o.gamma.or(u.gamma).unwrap_or(0.0)),
                    xi: ang(o.xi.or(u.xi).unwrap_or(0.0)),
                })
            }
            Some("u_entries") => Some(Source::UEntries(entries(&file.u_entries.unwrap()))),
            Some(_) => Some(Source::Coupling(entries(&file.coupling.unwrap()))),
        };

        let sweep = match (o.sweep, file.sweep) {
            (Some(param), f) => {
                let from = o.from.or(f.as_ref().map(|s| s.from));
                let to = o.to.or(f.as_ref().map(|s| s.to));
                let steps = o.steps.or(f.as_ref().map(|s| s.steps));
                match (from, to, steps) {
                    (Some(from), Some(to), Some(steps)) => Some(Sweep { param, from, to, steps }),
                    _ => return Err(CliError::Usage("sweep needs --from, --to and --steps".into())),
                }
            }
            (None, Some(s)) => Some(Sweep {
                param: s.param,
                from: o.from.unwrap_or(s.from),
                to: o.to.unwrap_or(s.to),
                steps: o.steps.unwrap_or(s.steps),
            }),
            (None, None) => None,
        };
        let sweep = sweep.map(|mut s| {
            if s.param.is_angle() {
                s.from = ang(s.from);
                s.to = ang(s.to);
            }
            s
        });
        if let Some(s) = &sweep {
            if s.steps == 0 {
                return Err(CliError::Usage("sweep.steps must be at least 1".into()));
            }
        }

        let grid = file.grid.unwrap_or_default();
        let z = match (o.z_re, o.z_im, file.z) {
            (None, None, None) => None,
            (re, im, f) => {
                let f = f.unwrap_or([0.0, 0.0]);
                Some(C64::new(re.unwrap_or(f[0]), im.unwrap_or(f[1])))
            }
        };
        let input = match file.input {
            None => Input::Gaussian { center: 0.0, width: 1.0 },
            Some(InputFile::Gaussian { center, width }) => {
                positive("input.gaussian.width", Some(width))?;
                Input::Gaussian { center, width }
            }
            Some(InputFile::Samples(p)) => Input::Samples(p),
        };
        Ok(RunConfig {
            model: o.model.or(file.model),
            source,
            c: positive("c", o.c.or(file.c))?.unwrap_or(1.0),
            tol: positive("tol", flags.tol.or(file.tol))?,
            grid_l: positive("grid.L", flags.grid_l.or(grid.l))?,
            grid_n: flags.grid_n.or(grid.n),
            z,
            input,
            sweep,
            json: flags.json || file.format == Some(Format::Json),
            csv: flags.csv,
        })
    }

    pub fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    pub fn grid(&self, l: f64, n: usize) -> Result<Grid, CliError> {
        Grid::new(self.grid_l.unwrap_or(l), self.grid_n.unwrap_or(n)).map_err(CliError::from)
    }

    pub fn require_source(&self) -> Result<Source, CliError> {
        self.source.ok_or_else(|| {
            CliError::Usage("no parameter source: give params, u, u_entries or coupling".into())
        })
    }

    /// `(θ, ω, φ, ξ)`; only the `params` source has them.
    pub fn c_params(&self) -> Result<(CParams, f64, f64), CliError> {
        match self.require_source()? {
            Source::Params { theta, omega, phi, xi } => Ok((CParams::new(theta, omega)?, phi, xi)),
            _ => Err(CliError::Usage("this command needs the params source (θ, ω, φ, ξ)".into())),
        }
    }

    /// The unitary of the extension.
    pub fn u_matrix(&self) -> Result<UMatrix, CliError> {
        match self.require_source()? {
            Source::Params { theta, omega, phi, xi } => {
                Ok(u_with_c_symmetry(&CParams::new(theta, omega)?, phi, xi))
            }
            Source::U { q, r, phi, gamma, xi } => Ok(UMatrix::compose(q, r, phi, gamma, xi)?),
            Source::UEntries(m) => Ok(UMatrix::decompose(&m)?),
            Source::Coupling(_) => {
                Err(CliError::Usage("this command needs a U source, not an explicit coupling".into()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(o: &Overrides) -> GlobalFlags<'_> {
        GlobalFlags { overrides: o, tol: None, grid_l: None, grid_n: None, json: false, csv: None, degrees: false }
    }

    #[test]
    fn unknown_fields_rejected() {
        let e = serde_json::from_str::<ConfigFile>(r#"{"model":"dirac","bogus":1}"#).unwrap_err();
        assert!(e.to_string().contains("bogus"));
        assert!(serde_json::from_str::<ConfigFile>(r#"{"params":{"theta":2,"w":1}}"#).is_err());
    }

    #[test]
    fn flags_override_file() {
        let file: ConfigFile = serde_json::from_str(r#"{"params":{"theta":2,"omega":1},"tol":1e-6}"#).unwrap();
        let o = Overrides { omega: Some(0.5), ..Default::default() };
        let mut f = flags(&o);
        f.tol = Some(1e-9);
        let rc = RunConfig::merge(file, f).unwrap();
        assert_eq!(rc.source, Some(Source::Params { theta: 2.0, omega: 0.5, phi: 0.0, xi: 0.0 }));
        assert_eq!(rc.tol, Some(1e-9));
    }

    #[test]
    fn two_sources_rejected() {
        let file: ConfigFile = serde_json::from_str(r#"{"params":{"theta":2}}"#).unwrap();
        let o = Overrides { q: Some(0.3), ..Default::default() };
        assert!(matches!(RunConfig::merge(file, flags(&o)), Err(CliError::Usage(_))));
    }

    #[test]
    fn degrees_convert_angles() {
        let o = Overrides { theta: Some(2.0), phi: Some(90.0), ..Default::default() };
        let mut f = flags(&o);
        f.degrees = true;
        let rc = RunConfig::merge(ConfigFile::default(), f).unwrap();
        match rc.source {
            Some(Source::Params { phi, .. }) => assert!((phi - std::f64::consts::FRAC_PI_2).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_tolerance_rejected() {
        let o = Overrides::default();
        let mut f = flags(&o);
        f.tol = Some(-1.0);
        assert!(RunConfig::merge(ConfigFile::default(), f).is_err());
    }
}
