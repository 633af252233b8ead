//! JSON instance files.
//!
//! A tabulated instance lists every subset:
//!
//! ```json
//! {"n": 2, "labels": ["a", "b"], "values": {"{}": 0, "{a}": "1/2", "{b}": "1/2", "{a,b}": 1}}
//! ```
//!
//! Keys are point lists (`{a,b}`, `[0,1]`, `all`), decimal bitmasks (`"3"`) or
//! binary masks (`"0b11"`). String and integer values are exact; any
//! non-integer JSON number switches the whole table to float mode unless
//! `"mode"` says otherwise.
//!
//! A generated instance names a generator instead:
//!
//! ```json
//! {"generator": "distortion", "g": {"polynomial": [0, 2, -1]}, "p": ["1/3", "1/3", "1/3"]}
//! {"generator": "coverage", "covers": [[0, 1], [1]], "weights": [1, 2]}
//! {"generator": "interval", "cells": 8, "g": {"polynomial": [0, 2, -1]}}
//! {"generator": "random", "kind": "submodular", "n": 5, "seed": 7}
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::de::{Deserializer, MapAccess, Visitor};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::embed::GeneratingFamily;
use crate::error::{Error, Result};
use crate::generators::{
    coverage, distortion_capacity, interval_discretization, random_non_submodular,
    random_submodular, random_supermodular, Distortion,
};
use crate::scalar::{Mode, Scalar};
use crate::setfun::{GroundSet, SetFunction, Subset};

/// Map entries in file order, so duplicate keys are visible.
struct Entries(Vec<(String, Scalar)>);

impl<'de> Deserialize<'de> for Entries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct EntriesVisitor;

        impl<'de> Visitor<'de> for EntriesVisitor {
            type Value = Entries;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an object from subsets to values")
            }

            fn visit_map<M: MapAccess<'de>>(
                self,
                mut map: M,
            ) -> std::result::Result<Entries, M::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, Scalar>()? {
                    out.push((k, v));
                }
                Ok(Entries(out))
            }
        }

        deserializer.deserialize_map(EntriesVisitor)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    n: Option<usize>,
    labels: Option<Vec<String>>,
    mode: Option<Mode>,
    values: Option<Entries>,
    generator: Option<String>,
    g: Option<Distortion>,
    p: Option<Vec<Scalar>>,
    covers: Option<Vec<Vec<usize>>>,
    weights: Option<Vec<Scalar>>,
    cells: Option<usize>,
    kind: Option<String>,
    seed: Option<u64>,
}

fn instance_error(msg: impl Into<String>) -> Error {
    Error::Instance(msg.into())
}

fn ground_for(n: Option<usize>, labels: Option<Vec<String>>) -> Result<GroundSet> {
    match (n, labels) {
        (Some(n), Some(labels)) if labels.len() != n => Err(Error::LabelCount {
            expected: n,
            got: labels.len(),
        }),
        (_, Some(labels)) => GroundSet::with_labels(labels),
        (Some(n), None) => GroundSet::new(n),
        (None, None) => Err(instance_error("missing \"n\"")),
    }
}

fn relabel(v: SetFunction, labels: Option<Vec<String>>) -> Result<SetFunction> {
    match labels {
        None => Ok(v),
        Some(labels) => {
            if labels.len() != v.n() {
                return Err(Error::LabelCount {
                    expected: v.n(),
                    got: labels.len(),
                });
            }
            SetFunction::new(GroundSet::with_labels(labels)?, v.table().to_vec())
        }
    }
}

fn tabulated(
    ground: GroundSet,
    entries: Vec<(String, Scalar)>,
    mode: Option<Mode>,
) -> Result<SetFunction> {
    let mode = mode.unwrap_or_else(|| {
        if entries.iter().any(|(_, x)| x.mode() == Mode::Float) {
            Mode::Float
        } else {
            Mode::Exact
        }
    });
    let mut table: Vec<Option<Scalar>> = vec![None; 1 << ground.n()];
    for (key, value) in entries {
        let s = ground.parse_key(&key)?;
        let slot = &mut table[s.bits() as usize];
        if slot.is_some() {
            return Err(instance_error(format!(
                "duplicate value for subset {} (bitmask {})",
                ground.format(s),
                s.bits()
            )));
        }
        *slot = Some(value.to_mode(mode)?);
    }
    let table = table
        .into_iter()
        .enumerate()
        .map(|(mask, x)| {
            x.ok_or_else(|| {
                let s = Subset::from_bits(mask as u32);
                instance_error(format!(
                    "missing value for subset {} (bitmask {mask})",
                    ground.format(s)
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SetFunction::new(ground, table)
}

fn required<T>(field: Option<T>, name: &str, generator: &str) -> Result<T> {
    field.ok_or_else(|| instance_error(format!("generator \"{generator}\" needs \"{name}\"")))
}

fn generated(raw: RawInstance, generator: &str) -> Result<SetFunction> {
    let v = match generator {
        "distortion" => distortion_capacity(
            &required(raw.g, "g", generator)?,
            &required(raw.p, "p", generator)?,
        )?,
        "coverage" => coverage(
            &required(raw.covers, "covers", generator)?,
            &required(raw.weights, "weights", generator)?,
        )?,
        "interval" => {
            interval_discretization(
                required(raw.cells, "cells", generator)?,
                &required(raw.g, "g", generator)?,
            )?
            .0
        }
        "random" => {
            let n = required(raw.n, "n", generator)?;
            let seed = required(raw.seed, "seed", generator)?;
            match raw.kind.as_deref().unwrap_or("submodular") {
                "submodular" => random_submodular(n, seed)?,
                "supermodular" => random_supermodular(n, seed)?,
                "non_submodular" => random_non_submodular(n, seed)?,
                other => return Err(instance_error(format!("unknown random kind \"{other}\""))),
            }
        }
        other => return Err(instance_error(format!("unknown generator \"{other}\""))),
    };
    if let Some(n) = raw.n {
        if n != v.n() {
            return Err(instance_error(format!(
                "\"n\" is {n} but the generator produced {}",
                v.n()
            )));
        }
    }
    let v = relabel(v, raw.labels)?;
    match raw.mode {
        Some(mode) => v.to_mode(mode),
        None => Ok(v),
    }
}

pub fn parse_instance(text: &str) -> Result<SetFunction> {
    let raw: RawInstance = serde_json::from_str(text).map_err(|e| instance_error(e.to_string()))?;
    match (raw.generator.clone(), raw.values.is_some()) {
        (Some(_), true) => Err(instance_error(
            "give either \"values\" or \"generator\", not both",
        )),
        (Some(generator), false) => generated(raw, &generator),
        (None, false) => Err(instance_error("missing \"values\"")),
        (None, true) => {
            let ground = ground_for(raw.n, raw.labels)?;
            tabulated(ground, raw.values.expect("checked").0, raw.mode)
        }
    }
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<SetFunction> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| instance_error(format!("{}: {e}", path.display())))?;
    parse_instance(&text)
}

/// Tabulated JSON for `v`, keyed by point list; `parse_instance` reads it back.
pub fn instance_json(v: &SetFunction) -> Value {
    let values: BTreeMap<u32, (String, Value)> = v
        .ground()
        .subsets()
        .map(|s| {
            let value = serde_json::to_value(v.value(s)).expect("scalars serialize");
            (s.bits(), (v.ground().format(s), value))
        })
        .collect();
    let values: serde_json::Map<String, Value> = values.into_values().collect();
    let mut out = json!({ "n": v.n(), "mode": v.mode(), "values": values });
    if let Some(labels) = v.ground().labels() {
        out["labels"] = json!(labels);
    }
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    n: Option<usize>,
    labels: Option<Vec<String>>,
    family: Vec<Value>,
}

fn family_member(ground: &GroundSet, item: &Value) -> Result<Subset> {
    let point = |x: &Value| -> Result<usize> {
        match x {
            Value::Number(n) => {
                let p = n
                    .as_u64()
                    .ok_or_else(|| Error::SubsetSyntax(n.to_string()))?
                    as usize;
                ground.check_point(p)?;
                Ok(p)
            }
            Value::String(s) => ground.point(s),
            other => Err(Error::SubsetSyntax(other.to_string())),
        }
    };
    match item {
        Value::Array(points) => points
            .iter()
            .try_fold(Subset::EMPTY, |acc, x| Ok(acc.with(point(x)?))),
        Value::String(s) => ground.parse_points(s),
        other => Err(Error::SubsetSyntax(other.to_string())),
    }
}

/// `{"n": 3, "family": [[0, 1], [1, 2]]}`; members may also use labels or `"{a,b}"` strings.
pub fn parse_family(text: &str) -> Result<GeneratingFamily> {
    let raw: RawFamily = serde_json::from_str(text).map_err(|e| instance_error(e.to_string()))?;
    let ground = ground_for(raw.n, raw.labels)?;
    let members = raw
        .family
        .iter()
        .map(|m| family_member(&ground, m))
        .collect::<Result<Vec<_>>>()?;
    GeneratingFamily::new(ground, members)
}

pub fn load_family(path: impl AsRef<Path>) -> Result<GeneratingFamily> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| instance_error(format!("{}: {e}", path.display())))?;
    parse_family(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::running_example;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    #[test]
    fn labelled_table() {
        let v = parse_instance(
            r#"{"n": 2, "labels": ["a", "b"],
                "values": {"{}": 0, "{a}": "1/2", "[b]": "0.5", "3": 1}}"#,
        )
        .unwrap();
        assert_eq!(v.mode(), Mode::Exact);
        assert_eq!(v.table(), &[q(0, 1), q(1, 2), q(1, 2), q(1, 1)]);
        assert_eq!(v.ground().labels().unwrap(), &["a", "b"]);
    }

    #[test]
    fn float_numbers_switch_mode() {
        let v = parse_instance(r#"{"n": 1, "values": {"0": 0, "1": 0.25}}"#).unwrap();
        assert_eq!(v.mode(), Mode::Float);
        let w =
            parse_instance(r#"{"n": 1, "mode": "exact", "values": {"0": 0, "1": 0.25}}"#).unwrap();
        assert_eq!(w.table(), &[q(0, 1), q(1, 4)]);
    }

    #[test]
    fn missing_and_duplicate_subsets() {
        let err = parse_instance(r#"{"n": 2, "values": {"0": 0, "1": 1, "3": 2}}"#).unwrap_err();
        assert!(err.to_string().contains("bitmask 2"), "{err}");
        let err = parse_instance(r#"{"n": 1, "values": {"0": 0, "1": 1, "{0}": 1}}"#).unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
        let err = parse_instance(r#"{"n": 1, "values": {"0": 0, "1": 1, "1": 1}}"#).unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
        assert!(parse_instance(r#"{"n": 1, "values": {"0": 0, "2": 1}}"#).is_err());
        assert!(parse_instance(r#"{"n": 1, "values": {"0": 0, "1": "x"}}"#).is_err());
        assert!(parse_instance(r#"{"n": 1, "vals": {}}"#).is_err());
    }

    #[test]
    fn generators() {
        let v = parse_instance(
            r#"{"generator": "distortion", "g": {"polynomial": [0, 2, -1]}, "p": ["1/3", "1/3", "1/3"]}"#,
        )
        .unwrap();
        assert_eq!(v, running_example());
        let c = parse_instance(
            r#"{"generator": "coverage", "covers": [[0, 1], [1]], "weights": [1, 2]}"#,
        )
        .unwrap();
        assert_eq!(c.table(), &[q(0, 1), q(3, 1), q(2, 1), q(3, 1)]);
        let i = parse_instance(
            r#"{"generator": "interval", "cells": 4, "g": {"piecewise_linear": [[0, 0], ["1/2", "3/4"], [1, 1]]}}"#,
        )
        .unwrap();
        assert_eq!(i.n(), 4);
        assert!(i.is_submodular());
        let r =
            parse_instance(r#"{"generator": "random", "kind": "supermodular", "n": 4, "seed": 3}"#)
                .unwrap();
        assert_eq!(r, random_supermodular(4, 3).unwrap());
        assert!(parse_instance(r#"{"generator": "nope"}"#).is_err());
        assert!(parse_instance(r#"{"generator": "coverage", "covers": [[0]]}"#).is_err());
    }

    #[test]
    fn families() {
        let f = parse_family(r#"{"n": 3, "family": [[0, 1], [1, 2]]}"#).unwrap();
        assert_eq!(
            f.members(),
            &[Subset::from_bits(0b011), Subset::from_bits(0b110)]
        );
        let g = parse_family(r#"{"labels": ["x", "y"], "family": [["y"], "{x,y}"]}"#).unwrap();
        assert_eq!(
            g.members(),
            &[Subset::from_bits(0b10), Subset::from_bits(0b11)]
        );
        assert!(parse_family(r#"{"n": 2, "family": [[2]]}"#).is_err());
    }

    proptest! {
        #[test]
        fn json_round_trip(seed in 0u64..200, n in 1usize..6, float in any::<bool>()) {
            let mut v = random_submodular(n, seed).unwrap();
            if float {
                v = v.to_mode(Mode::Float).unwrap();
            }
            let text = instance_json(&v).to_string();
            prop_assert_eq!(parse_instance(&text).unwrap(), v);
        }
    }
}
