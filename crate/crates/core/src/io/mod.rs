//! Instance files, random generation, solve reports and corpus benchmarks.

mod bench;
mod generate;
mod report;

pub use bench::{bench_corpus, rows_to_csv, BenchRow, BENCH_COLUMNS, BOUND_SLACK, TIMING_COLUMNS};
pub use generate::{generate_instance, generate_corpus, GeneratorParams};
pub use report::{
    brute_force_schedule, oracle_report, ratio, solve_instance, solve_report, SolveOptions,
    SolveReport,
};

use crate::error::InstanceError;
use crate::mincut::MsCutInstance;
use crate::pcst::MsPcstInstance;
use crate::pctsp::MsPctspInstance;
use crate::set_cover::MsScInstance;
use crate::vertex_cover::MsVcInstance;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Mincut,
    Vertexcover,
    Setcover,
    Pcst,
    Pctsp,
}

impl Problem {
    pub const ALL: [Problem; 5] = [
        Problem::Mincut,
        Problem::Vertexcover,
        Problem::Setcover,
        Problem::Pcst,
        Problem::Pctsp,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Problem::Mincut => "mincut",
            Problem::Vertexcover => "vertexcover",
            Problem::Setcover => "setcover",
            Problem::Pcst => "pcst",
            Problem::Pctsp => "pctsp",
        }
    }
}

impl std::fmt::Display for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Problem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Problem::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown problem `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Mincut(MsCutInstance),
    Vertexcover(MsVcInstance),
    Setcover(MsScInstance),
    Pcst(MsPcstInstance),
    Pctsp(MsPctspInstance),
}

impl Instance {
    pub fn problem(&self) -> Problem {
        match self {
            Instance::Mincut(_) => Problem::Mincut,
            Instance::Vertexcover(_) => Problem::Vertexcover,
            Instance::Setcover(_) => Problem::Setcover,
            Instance::Pcst(_) => Problem::Pcst,
            Instance::Pctsp(_) => Problem::Pctsp,
        }
    }

    pub fn horizon(&self) -> usize {
        match self {
            Instance::Mincut(i) => i.horizon(),
            Instance::Vertexcover(i) => i.horizon(),
            Instance::Setcover(i) => i.horizon(),
            Instance::Pcst(i) => i.horizon(),
            Instance::Pctsp(i) => i.horizon(),
        }
    }

    /// Vertices, or sets for set cover.
    pub fn size(&self) -> usize {
        match self {
            Instance::Mincut(i) => i.vertices,
            Instance::Vertexcover(i) => i.vertices,
            Instance::Setcover(i) => i.sets,
            Instance::Pcst(i) => i.vertices,
            Instance::Pctsp(i) => i.vertices,
        }
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        match self {
            Instance::Mincut(i) => i.validate(),
            Instance::Vertexcover(i) => i.validate(),
            Instance::Setcover(i) => i.validate(),
            Instance::Pcst(i) => i.validate(),
            Instance::Pctsp(i) => i.validate(),
        }
    }

    fn data(&self) -> serde_json::Value {
        match self {
            Instance::Mincut(i) => serde_json::to_value(i),
            Instance::Vertexcover(i) => serde_json::to_value(i),
            Instance::Setcover(i) => serde_json::to_value(i),
            Instance::Pcst(i) => serde_json::to_value(i),
            Instance::Pctsp(i) => serde_json::to_value(i),
        }
        .expect("instances always serialize")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorParams>,
    /// Anything else found in the file, kept verbatim.
    #[serde(flatten)]
    pub extra: BTreeMap<String, serde_json::Value>,
}

/// A parsed and validated instance file.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceFile {
    pub id: String,
    pub metadata: Metadata,
    pub instance: Instance,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    id: String,
    problem: Problem,
    horizon: usize,
    #[serde(default)]
    metadata: Metadata,
    data: serde_json::Value,
}

fn schema_error<E: std::fmt::Display>(e: serde_path_to_error::Error<E>) -> InstanceError {
    let path = e.path().to_string();
    InstanceError::Schema {
        path: if path == "." { String::new() } else { path },
        message: e.into_inner().to_string(),
    }
}

fn typed<T: DeserializeOwned>(data: serde_json::Value) -> Result<T, InstanceError> {
    serde_path_to_error::deserialize(data).map_err(|e| schema_error(e).within("data"))
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, InstanceError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let env: Envelope = serde_path_to_error::deserialize(&mut de).map_err(schema_error)?;
    de.end().map_err(|e| InstanceError::Schema {
        path: String::new(),
        message: e.to_string(),
    })?;
    let instance = match env.problem {
        Problem::Mincut => Instance::Mincut(typed(env.data)?),
        Problem::Vertexcover => Instance::Vertexcover(typed(env.data)?),
        Problem::Setcover => Instance::Setcover(typed(env.data)?),
        Problem::Pcst => Instance::Pcst(typed(env.data)?),
        Problem::Pctsp => Instance::Pctsp(typed(env.data)?),
    };
    instance.validate().map_err(|e| e.within("data"))?;
    if env.horizon != instance.horizon() {
        return Err(InstanceError::invalid(
            "horizon",
            format!("says {} but data has {} steps", env.horizon, instance.horizon()),
        ));
    }
    Ok(InstanceFile {
        id: env.id,
        metadata: env.metadata,
        instance,
    })
}

impl InstanceFile {
    pub fn to_json(&self) -> String {
        let env = Envelope {
            id: self.id.clone(),
            problem: self.instance.problem(),
            horizon: self.instance.horizon(),
            metadata: self.metadata.clone(),
            data: self.instance.data(),
        };
        serde_json::to_string_pretty(&env).expect("instances always serialize") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "id": "tiny",
        "problem": "mincut",
        "horizon": 1,
        "data": {
            "vertices": 2, "source": 0, "sink": 1,
            "steps": [{"edges": [[0, 1, 2.5]]}],
            "transition": []
        }
    }"#;

    #[test]
    fn minimal_mincut_file() {
        let f = parse_instance(MINIMAL).unwrap();
        assert_eq!(f.id, "tiny");
        let Instance::Mincut(i) = &f.instance else {
            panic!("wrong problem")
        };
        assert_eq!(i.steps[0].edges, vec![(0, 1, 2.5)]);
        assert_eq!(parse_instance(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn wrong_length_names_the_field() {
        let text = MINIMAL.replace("\"transition\": []", "\"transition\": [[0, 0]]");
        match parse_instance(&text) {
            Err(InstanceError::Validation { field, .. }) => assert_eq!(field, "data.transition"),
            other => panic!("{other:?}"),
        }
        let text = MINIMAL.replace("\"horizon\": 1", "\"horizon\": 2");
        assert!(matches!(
            parse_instance(&text),
            Err(InstanceError::Validation { ref field, .. }) if field == "horizon"
        ));
    }

    #[test]
    fn schema_errors_carry_a_path() {
        let text = MINIMAL.replace("[0, 1, 2.5]", "[0, 1, \"x\"]");
        match parse_instance(&text) {
            Err(InstanceError::Schema { path, .. }) => assert_eq!(path, "data.steps[0].edges[0][2]"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_instance("{\"id\": 1}"),
            Err(InstanceError::Schema { ref path, .. }) if path == "id"
        ));
        assert!(matches!(parse_instance("not json"), Err(InstanceError::Schema { .. })));
    }

    #[test]
    fn unknown_problem_is_a_schema_error() {
        let text = MINIMAL.replace("\"mincut\"", "\"knapsack\"");
        assert!(matches!(
            parse_instance(&text),
            Err(InstanceError::Schema { ref path, .. }) if path == "problem"
        ));
    }
}
