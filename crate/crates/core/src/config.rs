//! JSON channel configuration files.
//!
//! ```json
//! {"type":"discrete","x1":2,"x2":2,"y1":5,"y2":5,
//!  "kernel1":[[...]],"kernel2":[[...]],"idle1":0,"idle2":0}
//! {"type":"gaussian","p1_dbw":30,"p2_dbw":30,"c1":0.8,"c2":1.5}
//! ```
//!
//! Gaussian powers may be given in dBW (`p1_dbw`) or linear watts (`p1`),
//! exactly one per user. A third form, `"type":"info"`, supplies the ten
//! information constants directly (plus an optional `lambda_bar`).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::{
    dbw_to_watts, DiscreteIC, GaussianIC, InfoQuantities, InputDistribution, LambdaBarOptions,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ChannelConfig {
    Discrete {
        x1: usize,
        x2: usize,
        y1: usize,
        y2: usize,
        kernel1: Vec<Vec<f64>>,
        kernel2: Vec<Vec<f64>>,
        idle1: usize,
        idle2: usize,
    },
    Gaussian {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p1_dbw: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p2_dbw: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p1: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p2: Option<f64>,
        c1: f64,
        c2: f64,
    },
    Info {
        #[serde(flatten)]
        info: InfoQuantities,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lambda_bar: Option<f64>,
    },
}

/// A validated channel ready for analysis.
#[derive(Debug, Clone, PartialEq)]
pub enum Channel {
    Discrete(DiscreteIC),
    Gaussian(GaussianIC),
    Info {
        info: InfoQuantities,
        lambda_bar: Option<f64>,
    },
}

/// Resolves one power given as exactly one of dBW or watts.
pub fn resolve_power(name: &str, dbw: Option<f64>, watts: Option<f64>) -> Result<f64> {
    match (dbw, watts) {
        (Some(d), None) => Ok(dbw_to_watts(d)),
        (None, Some(w)) => Ok(w),
        (Some(_), Some(_)) => Err(Error::Config(format!(
            "both {name}_dbw and {name} given; exactly one is required"
        ))),
        (None, None) => Err(Error::Config(format!(
            "missing {name}: give {name}_dbw or {name}"
        ))),
    }
}

impl ChannelConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn resolve(&self) -> Result<Channel> {
        match self {
            ChannelConfig::Discrete {
                x1,
                x2,
                y1,
                y2,
                kernel1,
                kernel2,
                idle1,
                idle2,
            } => {
                let ch = DiscreteIC {
                    x1_size: *x1,
                    x2_size: *x2,
                    y1_size: *y1,
                    y2_size: *y2,
                    kernel1: kernel1.clone(),
                    kernel2: kernel2.clone(),
                    idle1: *idle1,
                    idle2: *idle2,
                };
                ch.validate()?;
                Ok(Channel::Discrete(ch))
            }
            ChannelConfig::Gaussian {
                p1_dbw,
                p2_dbw,
                p1,
                p2,
                c1,
                c2,
            } => {
                let p1 = resolve_power("p1", *p1_dbw, *p1)?;
                let p2 = resolve_power("p2", *p2_dbw, *p2)?;
                Ok(Channel::Gaussian(GaussianIC::new(p1, p2, *c1, *c2)?))
            }
            ChannelConfig::Info { info, lambda_bar } => {
                info.validate()?;
                Ok(Channel::Info {
                    info: *info,
                    lambda_bar: *lambda_bar,
                })
            }
        }
    }
}

impl Channel {
    /// Information constants; discrete channels default to uniform inputs.
    pub fn info_quantities(
        &self,
        pi1: Option<&InputDistribution>,
        pi2: Option<&InputDistribution>,
    ) -> Result<InfoQuantities> {
        match self {
            Channel::Discrete(ch) => {
                let u1 = InputDistribution::uniform(ch.x1_size);
                let u2 = InputDistribution::uniform(ch.x2_size);
                ch.info_quantities(pi1.unwrap_or(&u1), pi2.unwrap_or(&u2))
            }
            Channel::Gaussian(ch) => Ok(ch.info_quantities()),
            Channel::Info { info, .. } => Ok(*info),
        }
    }

    /// Converse threshold. `None` when an info-only config omits it.
    pub fn lambda_bar(&self) -> Result<Option<f64>> {
        match self {
            Channel::Discrete(ch) => Ok(Some(ch.lambda_bar(LambdaBarOptions::default())?.value)),
            Channel::Gaussian(ch) => Ok(Some(ch.lambda_bar())),
            Channel::Info { lambda_bar, .. } => Ok(*lambda_bar),
        }
    }
}
