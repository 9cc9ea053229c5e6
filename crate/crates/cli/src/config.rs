//! Experiment configuration: a flat JSON file, defaults, and flag overrides.
//!
//! Value checks run inside deserialization so that serde_json reports the
//! offending line and column.

use std::fmt;
use std::path::{Path, PathBuf};

use qei_core::{
    ComponentPair, DiscretizationGrid64, GrowthProbe, KernelSpec64, ModelFamily, PolynomialP64,
    ScatteringModel, ScatteringModel64,
};
use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::args::{CommonArgs, Format};
use crate::error::CliError;

pub const DEFAULT_MASS: f64 = 1.0;
pub const DEFAULT_SIGMA: f64 = 0.1;
pub const DEFAULT_CUTOFF: f64 = 7.0;
pub const DEFAULT_CELLS: usize = 500;
pub const DEFAULT_QUAD_ORDER: usize = 4;
pub const DEFAULT_R_LIST: [f64; 4] = [4.0, 6.0, 8.0, 10.0];
pub const DEFAULT_WITNESS_RANGE: [f64; 2] = [0.0, 10.0];
pub const WITNESS_SAMPLES: usize = 1000;

/// Strictly positive finite number. Checked inside the visitor so the
/// reported position is that of the offending value.
#[derive(Debug, Clone, Copy)]
struct Positive(f64);

impl<'de> Deserialize<'de> for Positive {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Positive;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a positive finite number")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Positive, E> {
                if v.is_finite() && v > 0.0 {
                    Ok(Positive(v))
                } else {
                    Err(E::custom(format!(
                        "expected a positive finite number, got {v}"
                    )))
                }
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Positive, E> {
                self.visit_f64(v as f64)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Positive, E> {
                self.visit_f64(v as f64)
            }
        }
        d.deserialize_f64(V)
    }
}

#[derive(Debug, Clone, Copy)]
struct Count(usize);

impl<'de> Deserialize<'de> for Count {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Count;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a positive integer")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Count, E> {
                match usize::try_from(v) {
                    Ok(n) if n > 0 => Ok(Count(n)),
                    _ => Err(E::custom(format!("expected a positive integer, got {v}"))),
                }
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Count, E> {
                Err(E::custom(format!("expected a positive integer, got {v}")))
            }
        }
        d.deserialize_u64(V)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    name: String,
    mass: f64,
    coupling: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(try_from = "RawModel")]
struct ModelBlock(ScatteringModel64);

impl TryFrom<RawModel> for ModelBlock {
    type Error = String;

    fn try_from(raw: RawModel) -> Result<Self, String> {
        let family: ModelFamily = raw
            .name
            .parse()
            .map_err(|e: qei_core::Error| e.to_string())?;
        ScatteringModel::from_parts(family, raw.mass, raw.coupling)
            .map(ModelBlock)
            .map_err(|e| format!("model block: {e}"))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(try_from = "Vec<f64>")]
struct Polynomial(PolynomialP64);

impl TryFrom<Vec<f64>> for Polynomial {
    type Error = String;

    fn try_from(c: Vec<f64>) -> Result<Self, String> {
        PolynomialP64::new(c)
            .map(Polynomial)
            .map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(try_from = "Vec<f64>")]
struct CutoffList(Vec<f64>);

impl TryFrom<Vec<f64>> for CutoffList {
    type Error = String;

    fn try_from(r: Vec<f64>) -> Result<Self, String> {
        check_cutoffs(&r).map(|_| CutoffList(r))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(try_from = "Vec<f64>")]
struct CouplingList(Vec<f64>);

impl TryFrom<Vec<f64>> for CouplingList {
    type Error = String;

    fn try_from(b: Vec<f64>) -> Result<Self, String> {
        check_couplings(&b).map(|_| CouplingList(b))
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridBlock {
    #[serde(rename = "R")]
    cutoff: Option<Positive>,
    #[serde(rename = "N")]
    cells: Option<Count>,
    q: Option<Count>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProbeBlock {
    theta_min: Option<Positive>,
    theta_max: Option<Positive>,
    samples: Option<Count>,
    margin: Option<Positive>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputBlock {
    path: Option<PathBuf>,
    format: Option<Format>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    model: Option<ModelBlock>,
    polynomial: Option<Polynomial>,
    sigma: Option<Positive>,
    #[serde(default)]
    grid: GridBlock,
    #[serde(rename = "R_list")]
    r_list: Option<CutoffList>,
    cell_width: Option<Positive>,
    #[serde(rename = "B_list")]
    b_list: Option<CouplingList>,
    #[serde(default)]
    probe: ProbeBlock,
    witness_range: Option<[f64; 2]>,
    component: Option<[u8; 2]>,
    #[serde(default)]
    output: OutputBlock,
}

fn check_cutoffs(r: &[f64]) -> Result<(), String> {
    if r.is_empty() {
        return Err("R_list must not be empty".to_owned());
    }
    if r.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err("R_list entries must be positive".to_owned());
    }
    if r.windows(2).any(|w| w[1] <= w[0]) {
        return Err("R_list must be strictly increasing".to_owned());
    }
    Ok(())
}

fn check_couplings(b: &[f64]) -> Result<(), String> {
    if b.is_empty() {
        return Err("B_list must not be empty".to_owned());
    }
    match b.iter().find(|v| !(**v > 0.0 && **v < 2.0)) {
        Some(v) => Err(format!("B_list entries must lie in (0, 2), got {v}")),
        None => Ok(()),
    }
}

fn flag_positive(name: &str, v: Option<f64>) -> Result<Option<f64>, CliError> {
    match v {
        Some(x) if !(x.is_finite() && x > 0.0) => Err(CliError::Config(format!(
            "--{name}: expected a positive finite number, got {x}"
        ))),
        other => Ok(other),
    }
}

fn flag_count(name: &str, v: Option<usize>) -> Result<Option<usize>, CliError> {
    match v {
        Some(0) => Err(CliError::Config(format!(
            "--{name}: expected a positive integer, got 0"
        ))),
        other => Ok(other),
    }
}

fn parse_file(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Fully resolved experiment: every value is set and validated.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub model: ScatteringModel64,
    pub poly: PolynomialP64,
    pub sigma: f64,
    pub grid: DiscretizationGrid64,
    pub r_list: Vec<f64>,
    pub cell_width: f64,
    pub b_list: Vec<f64>,
    pub probe: GrowthProbe<f64>,
    pub witness_range: (f64, f64),
    pub component: ComponentPair,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl Experiment {
    pub fn resolve(args: &CommonArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => parse_file(path)?,
            None => ConfigFile::default(),
        };

        let model = resolve_model(args, file.model.map(|m| m.0))?;
        let poly = match &args.poly {
            Some(c) => PolynomialP64::new(c.clone())
                .map_err(|e| CliError::Config(format!("--poly: {e}")))?,
            None => file.polynomial.map_or_else(PolynomialP64::one, |p| p.0),
        };
        let sigma = flag_positive("sigma", args.sigma)?
            .or(file.sigma.map(|s| s.0))
            .unwrap_or(DEFAULT_SIGMA);

        let cutoff = flag_positive("cutoff", args.cutoff)?
            .or(file.grid.cutoff.map(|v| v.0))
            .unwrap_or(DEFAULT_CUTOFF);
        let cells = flag_count("cells", args.cells)?
            .or(file.grid.cells.map(|v| v.0))
            .unwrap_or(DEFAULT_CELLS);
        let q = flag_count("quad-order", args.quad_order)?
            .or(file.grid.q.map(|v| v.0))
            .unwrap_or(DEFAULT_QUAD_ORDER);
        let grid = DiscretizationGrid64::new(cutoff, cells, q)?;

        let r_list = match &args.r_list {
            Some(r) => {
                check_cutoffs(r).map_err(|e| CliError::Config(format!("--r-list: {e}")))?;
                r.clone()
            }
            None => file.r_list.map_or_else(|| DEFAULT_R_LIST.to_vec(), |r| r.0),
        };
        let cell_width = flag_positive("cell-width", args.cell_width)?
            .or(file.cell_width.map(|v| v.0))
            .unwrap_or(grid.cell_width());
        let b_list = match &args.b_list {
            Some(b) => {
                check_couplings(b).map_err(|e| CliError::Config(format!("--b-list: {e}")))?;
                b.clone()
            }
            None => file.b_list.map_or_else(default_couplings, |b| b.0),
        };

        let defaults = GrowthProbe::<f64>::default();
        let probe = GrowthProbe {
            theta_min: flag_positive("theta-min", args.theta_min)?
                .or(file.probe.theta_min.map(|v| v.0))
                .unwrap_or(defaults.theta_min),
            theta_max: flag_positive("theta-max", args.theta_max)?
                .or(file.probe.theta_max.map(|v| v.0))
                .unwrap_or(defaults.theta_max),
            samples: file.probe.samples.map_or(defaults.samples, |v| v.0),
            margin: flag_positive("margin", args.margin)?
                .or(file.probe.margin.map(|v| v.0))
                .unwrap_or(defaults.margin),
            cauchy_tolerance: defaults.cauchy_tolerance,
        };
        if probe.theta_max <= probe.theta_min {
            return Err(CliError::Config(format!(
                "probe: theta_max ({}) must exceed theta_min ({})",
                probe.theta_max, probe.theta_min
            )));
        }

        let [a, b] = file.witness_range.unwrap_or(DEFAULT_WITNESS_RANGE);
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(CliError::Config(format!(
                "witness_range: need finite a < b, got [{a}, {b}]"
            )));
        }
        let [alpha, beta] = file.component.unwrap_or([0, 0]);
        let component = ComponentPair::new(alpha, beta)?;

        Ok(Experiment {
            model,
            poly,
            sigma,
            grid,
            r_list,
            cell_width,
            b_list,
            probe,
            witness_range: (a, b),
            component,
            out: args.out.clone().or(file.output.path),
            format: args.format.or(file.output.format),
        })
    }

    pub fn spec(&self) -> Result<KernelSpec64, CliError> {
        Ok(KernelSpec64::new(
            self.model.clone(),
            self.poly.clone(),
            self.sigma,
            self.component,
        )?)
    }

    /// Everything needed to re-run the experiment, in config-file form.
    pub fn provenance(&self) -> Value {
        let mut model = json!({
            "name": self.model.family().name(),
            "mass": self.model.mass(),
        });
        if let Some(b) = self.model.coupling() {
            model["coupling"] = json!(b);
        }
        json!({
            "model": model,
            "polynomial": self.poly.coefficients(),
            "sigma": self.sigma,
            "grid": {
                "R": self.grid.cutoff(),
                "N": self.grid.cells(),
                "q": self.grid.quadrature_order(),
            },
            "R_list": self.r_list,
            "cell_width": self.cell_width,
            "B_list": self.b_list,
            "probe": {
                "theta_min": self.probe.theta_min,
                "theta_max": self.probe.theta_max,
                "samples": self.probe.samples,
                "margin": self.probe.margin,
            },
            "witness_range": [self.witness_range.0, self.witness_range.1],
            "component": [self.component.alpha(), self.component.beta()],
        })
    }
}

fn resolve_model(
    args: &CommonArgs,
    from_file: Option<ScatteringModel64>,
) -> Result<ScatteringModel64, CliError> {
    let mass = flag_positive("mass", args.mass)?;
    if args.model.is_none() && mass.is_none() && args.coupling.is_none() {
        return Ok(match from_file {
            Some(m) => m,
            None => ScatteringModel::ising(DEFAULT_MASS)?,
        });
    }
    let family = args
        .model
        .or(from_file.as_ref().map(|m| m.family()))
        .unwrap_or(ModelFamily::Ising);
    let mass = mass
        .or(from_file.as_ref().map(|m| m.mass()))
        .unwrap_or(DEFAULT_MASS);
    let coupling = match family {
        ModelFamily::SinhGordon => args
            .coupling
            .or(from_file.as_ref().and_then(|m| m.coupling())),
        _ => args.coupling,
    };
    ScatteringModel::from_parts(family, mass, coupling)
        .map_err(|e| CliError::Config(format!("model flags: {e}")))
}

/// 0.1, 0.2, ..., 1.9
fn default_couplings() -> Vec<f64> {
    (1..20).map(|i| i as f64 / 10.0).collect()
}
