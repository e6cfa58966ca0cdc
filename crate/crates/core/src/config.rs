//! JSON problem descriptions.

use crate::error::Result;
use crate::phi::{PhiFunction, PhiSpec};
use crate::solver::{FractionalOrder, ImpulseMap, ImpulsiveProblem, Rhs, SolverConfig, TimeFunction};
use crate::stability::{PerturbationSpec, Waveform};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderConfig {
    pub rho: f64,
    pub nu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImpulseConfig {
    pub t: f64,
    /// Expression in `u`.
    pub map: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UhBlock {
    pub epsilon: f64,
    #[serde(default = "constant_wave")]
    pub waveform: Waveform,
    #[serde(default)]
    pub impulse_signs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UhrBlock {
    /// Ignored when `pair` is set (the pair form has no scale).
    #[serde(default = "one")]
    pub epsilon: f64,
    pub chi: f64,
    /// Expression in `t`, positive and nondecreasing.
    pub theta: String,
    #[serde(default = "constant_wave")]
    pub waveform: Waveform,
    #[serde(default)]
    pub impulse_signs: Vec<f64>,
    #[serde(default)]
    pub pair: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IcBlock {
    pub v_a: f64,
}

/// The perturbed data; omitted entries are taken from the problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataBlock {
    #[serde(default)]
    pub rhs: Option<String>,
    #[serde(default)]
    pub impulses: Option<Vec<String>>,
    #[serde(default)]
    pub u_a: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderBlock {
    pub delta: f64,
    #[serde(default)]
    pub v_a: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Perturbations {
    #[serde(default)]
    pub uh: Option<UhBlock>,
    #[serde(default)]
    pub uhr: Option<UhrBlock>,
    #[serde(default)]
    pub ic: Option<IcBlock>,
    #[serde(default)]
    pub data: Option<DataBlock>,
    #[serde(default)]
    pub order: Option<OrderBlock>,
}

fn constant_wave() -> Waveform {
    Waveform::Constant
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub phi: PhiSpec,
    pub order: OrderConfig,
    pub a: f64,
    #[serde(rename = "T")]
    pub t_end: f64,
    pub u_a: f64,
    /// Expression in `t` and `u`.
    pub rhs: String,
    #[serde(default)]
    pub impulses: Vec<ImpulseConfig>,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub perturbations: Perturbations,
}

impl ProblemConfig {
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Parses every expression and validates the kernel on `[a, T]`.
    pub fn build(&self) -> Result<ImpulsiveProblem> {
        let order = FractionalOrder::new(self.order.rho, self.order.nu)?;
        let phi = PhiFunction::from_spec(&self.phi)?;
        let mut problem = ImpulsiveProblem::new(order, phi, self.a, self.t_end, self.u_a, Rhs::parse(&self.rhs)?)?;
        for imp in &self.impulses {
            problem = problem.with_impulse(imp.t, ImpulseMap::parse(&imp.map)?)?;
        }
        self.solver.validate()?;
        Ok(problem)
    }
}

impl UhBlock {
    pub fn spec(&self) -> PerturbationSpec {
        PerturbationSpec::uh(self.epsilon, self.waveform.clone()).with_impulse_signs(self.impulse_signs.clone())
    }
}

impl UhrBlock {
    pub fn theta(&self) -> Result<TimeFunction> {
        TimeFunction::parse(&self.theta)
    }

    pub fn spec(&self) -> Result<PerturbationSpec> {
        let theta = self.theta()?;
        let spec = if self.pair {
            PerturbationSpec::uhr_pair(self.chi, theta, self.waveform.clone())
        } else {
            PerturbationSpec::uhr_scaled(self.epsilon, self.chi, theta, self.waveform.clone())
        };
        Ok(spec.with_impulse_signs(self.impulse_signs.clone()))
    }
}

impl DataBlock {
    /// The problem with this block's data substituted.
    pub fn apply(&self, problem: &ImpulsiveProblem) -> Result<ImpulsiveProblem> {
        let mut out = problem.clone();
        if let Some(rhs) = &self.rhs {
            out.rhs = Rhs::parse(rhs)?;
        }
        if let Some(maps) = &self.impulses {
            if maps.len() != problem.m() {
                return Err(crate::error::param(format!(
                    "perturbed data lists {} impulse maps for {} impulses",
                    maps.len(),
                    problem.m()
                )));
            }
            out.impulse_maps = maps.iter().map(|m| ImpulseMap::parse(m)).collect::<Result<_>>()?;
        }
        if let Some(u) = self.u_a {
            out.u_a = u;
        }
        out.validate()?;
        Ok(out)
    }
}
