//! Flat `key = value` run configuration.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::optimize::{Distance, OffsetParams};

pub const KEYS: [&str; 12] = [
    "delta",
    "sigma_max",
    "sigma_min",
    "lmin",
    "lmax",
    "side",
    "max_iterations",
    "sizing.coarsen_rule",
    "layers",
    "distance_field",
    "keep_background",
    "report",
];

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RunConfig {
    pub params: OffsetParams,
    /// Layer distances, outermost first.
    pub layers: Vec<Distance>,
    pub distance_field: Option<PathBuf>,
    pub keep_background: bool,
    pub report: Option<PathBuf>,
}

fn value<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Config(format!("bad value for '{key}': '{v}'")))
}

pub fn parse_list(v: &str) -> Result<Vec<Distance>> {
    v.split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<Distance>()
                .map_err(|e| Error::Config(e.to_string()))
        })
        .collect()
}

impl RunConfig {
    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        let p = &mut self.params;
        match key {
            "delta" => p.delta = v.parse().map_err(|e: Error| Error::Config(e.to_string()))?,
            "sigma_max" => p.sigma_max = value(key, v)?,
            "sigma_min" => p.sigma_min = value(key, v)?,
            "lmin" => p.lmin = Some(value(key, v)?),
            "lmax" => p.lmax = value(key, v)?,
            "side" => p.side = v.parse().map_err(|e: Error| Error::Config(e.to_string()))?,
            "max_iterations" => p.max_iterations = value(key, v)?,
            "sizing.coarsen_rule" => {
                p.coarsen_rule = v.parse().map_err(|e: Error| Error::Config(e.to_string()))?
            }
            "layers" => self.layers = parse_list(v)?,
            "distance_field" => self.distance_field = Some(PathBuf::from(v)),
            "keep_background" => self.keep_background = value(key, v)?,
            "report" => self.report = Some(PathBuf::from(v)),
            _ => return Err(Error::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<RunConfig> {
        let mut c = RunConfig::default();
        for (i, l) in text.lines().enumerate() {
            let l = l.split('#').next().unwrap_or("").trim();
            if l.is_empty() {
                continue;
            }
            let (k, v) = l
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            c.set(k.trim(), v.trim()).map_err(|e| {
                Error::Config(format!(
                    "line {}: {}",
                    i + 1,
                    e.to_string().trim_start_matches("config: ")
                ))
            })?;
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        RunConfig::parse(&text).map_err(|e| {
            Error::Config(format!(
                "{}: {}",
                path.display(),
                e.to_string().trim_start_matches("config: ")
            ))
        })
    }
}
