//! `key=value` settings files with `[section]` headers.
//!
//! Keys before the first header belong to the schema's default section.
//! Lines starting with `;` or `#` are comments.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use ini::Ini;

use crate::Failure;

/// Keys accepted per section. `None` accepts any key.
pub struct Schema {
    pub default_section: &'static str,
    pub sections: &'static [(&'static str, Option<&'static [&'static str]>)],
}

impl Schema {
    fn section(&self, name: &str) -> Option<Option<&'static [&'static str]>> {
        self.sections.iter().find(|(s, _)| *s == name).map(|(_, keys)| *keys)
    }
}

pub const RUN_KEYS: &[&str] = &[
    "problem",
    "objectives",
    "variant",
    "seed",
    "evaluations",
    "swarm_size",
    "archive_size",
    "inertia",
    "scheme",
    "velocity_init",
    "hv_target",
    "record_interval",
    "results_dir",
];

pub const MUTATION_KEYS: &[&str] = &["distribution_index", "per_variable_probability", "particle_fraction"];

pub const EXPERIMENT_KEYS: &[&str] = &[
    "problems",
    "variants",
    "repetitions",
    "indicators",
    "base_seed",
    "evaluations",
    "swarm_size",
    "archive_size",
    "workers",
    "results_dir",
];

pub const PROFILE_KEYS: &[&str] =
    &["problems", "mu_grid", "repetitions", "base_seed", "evaluations", "workers", "results_dir"];

pub const SOLVE_SCHEMA: Schema =
    Schema { default_section: "run", sections: &[("run", Some(RUN_KEYS)), ("mutation", Some(MUTATION_KEYS))] };

pub const EXPERIMENT_SCHEMA: Schema = Schema {
    default_section: "experiment",
    sections: &[("experiment", Some(EXPERIMENT_KEYS)), ("mutation", Some(MUTATION_KEYS)), ("schemes", None)],
};

pub const PROFILE_SCHEMA: Schema = Schema { default_section: "profile", sections: &[("profile", Some(PROFILE_KEYS))] };

#[derive(Debug, Default)]
pub struct FileConfig {
    origin: String,
    values: BTreeMap<(String, String), String>,
}

impl FileConfig {
    pub fn load(path: &Path, schema: &Schema) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string(), schema)
    }

    pub fn parse(text: &str, origin: &str, schema: &Schema) -> Result<Self, Failure> {
        let ini = Ini::load_from_str(text).map_err(|e| Failure::usage(format!("{origin}: {e}")))?;
        let mut values = BTreeMap::new();
        for (section, props) in ini.iter() {
            let section = section.unwrap_or(schema.default_section);
            let Some(allowed) = schema.section(section) else {
                let valid: Vec<&str> = schema.sections.iter().map(|(s, _)| *s).collect();
                return Err(Failure::usage(format!(
                    "{origin}: unknown section [{section}]; valid: {}",
                    valid.join(", ")
                )));
            };
            for (key, value) in props.iter() {
                if let Some(keys) = allowed {
                    if !keys.contains(&key) {
                        return Err(Failure::usage(format!(
                            "{origin}: unknown key {key:?} in [{section}]; valid: {}",
                            keys.join(", ")
                        )));
                    }
                }
                let slot = (section.to_string(), key.to_string());
                if values.insert(slot, value.trim().to_string()).is_some() {
                    return Err(Failure::usage(format!("{origin}: key {key:?} in [{section}] is set twice")));
                }
            }
        }
        Ok(Self { origin: origin.to_string(), values })
    }

    pub fn raw(&self, section: &str, key: &str) -> Option<&str> {
        self.values.get(&(section.to_string(), key.to_string())).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, section: &str, key: &str) -> Result<Option<T>, Failure>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(section, key)
            .map(|v| {
                v.parse::<T>().map_err(|e| Failure::usage(format!("{}: [{section}] {key} = {v:?}: {e}", self.origin)))
            })
            .transpose()
    }

    pub fn list(&self, section: &str, key: &str) -> Option<Vec<String>> {
        self.raw(section, key).map(split_list)
    }

    /// Keys of a free-form section, in file order of their names.
    pub fn keys(&self, section: &str) -> Vec<&str> {
        self.values.keys().filter(|(s, _)| s == section).map(|(_, k)| k.as_str()).collect()
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }
}

pub fn split_list(text: &str) -> Vec<String> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::to_string).collect()
}
