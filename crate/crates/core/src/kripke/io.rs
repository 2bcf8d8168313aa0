//! JSON documents of the form
//! `{"worlds": [..], "relation": [[a, b], ..], "labels": {w: [..]}, "team": [..]}`.

use std::collections::{BTreeMap, BTreeSet};

use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use super::{KripkeStructure, StructureError, Team};
use crate::formula::Prop;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    worlds: Vec<String>,
    #[serde(default)]
    relation: Vec<(String, String)>,
    #[serde(default)]
    labels: BTreeMap<String, Vec<String>>,
    team: Option<Vec<String>>,
}

/// Labels in world order, so saved documents follow the given world order.
struct OrderedLabels<'a>(&'a KripkeStructure);

impl Serialize for OrderedLabels<'_> {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let w = self.0;
        let mut map = ser.serialize_map(Some(w.num_worlds()))?;
        for (i, name) in w.world_names().iter().enumerate() {
            let props: Vec<&str> = w.labels(i).iter().map(Prop::as_str).collect();
            map.serialize_entry(name, &props)?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct OutDocument<'a> {
    worlds: &'a [String],
    relation: Vec<(&'a str, &'a str)>,
    labels: OrderedLabels<'a>,
    team: Vec<&'a str>,
}

fn lookup(w: &KripkeStructure, key: &str, name: &str) -> Result<usize, StructureError> {
    w.world_index(name)
        .ok_or_else(|| StructureError::UnknownWorld {
            key: key.to_string(),
            name: name.to_string(),
        })
}

pub fn load_structure(bytes: &[u8]) -> Result<(KripkeStructure, Team), StructureError> {
    let doc: Document =
        serde_json::from_slice(bytes).map_err(|e| StructureError::Malformed(e.to_string()))?;
    if doc.worlds.is_empty() {
        return Err(StructureError::NoWorlds);
    }
    let mut index = BTreeMap::new();
    for (i, w) in doc.worlds.iter().enumerate() {
        if index.insert(w.as_str(), i).is_some() {
            return Err(StructureError::DuplicateWorld(w.clone()));
        }
    }
    let find = |key: &str, name: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| StructureError::UnknownWorld {
                key: key.to_string(),
                name: name.to_string(),
            })
    };
    let mut edges = Vec::with_capacity(doc.relation.len());
    for (a, b) in &doc.relation {
        edges.push((find("relation", a)?, find("relation", b)?));
    }
    let mut labels = vec![BTreeSet::new(); doc.worlds.len()];
    for (world, props) in &doc.labels {
        let i = find("labels", world)?;
        for p in props {
            let prop = Prop::new(p.as_str()).map_err(|_| StructureError::InvalidProposition {
                key: format!("labels.{world}"),
                name: p.clone(),
            })?;
            labels[i].insert(prop);
        }
    }
    let w = KripkeStructure::new(doc.worlds, edges, labels)?;
    let team = match doc.team {
        None => w.full_team(),
        Some(names) => team_from_names(&w, &names)?,
    };
    Ok((w, team))
}

/// Pretty-printed document; labels sorted, worlds in structure order.
pub fn save_structure(w: &KripkeStructure, team: &Team) -> String {
    let name = |i: usize| w.world_name(i);
    let doc = OutDocument {
        worlds: w.world_names(),
        relation: w
            .relation()
            .into_iter()
            .map(|(a, b)| (name(a), name(b)))
            .collect(),
        labels: OrderedLabels(w),
        team: team.iter().map(name).collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("structure serializes");
    out.push('\n');
    out
}

/// Team from world names, reported under the `team` key when unknown.
pub fn team_from_names<S: AsRef<str>>(
    w: &KripkeStructure,
    names: &[S],
) -> Result<Team, StructureError> {
    let mut t = w.empty_team();
    for n in names {
        t.insert(lookup(w, "team", n.as_ref())?);
    }
    Ok(t)
}

/// Member names in world-index order.
pub fn team_names(w: &KripkeStructure, t: &Team) -> Vec<String> {
    t.iter().map(|i| w.world_name(i).to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = r#"{
        "worlds": ["s2", "s1", "s3"],
        "relation": [["s1","s2"], ["s2","s3"]],
        "labels": {"s1": ["q", "p"]},
        "team": ["s1"]
    }"#;

    #[test]
    fn loads_with_defaults() {
        let (w, t) = load_structure(DOC.as_bytes()).unwrap();
        assert_eq!(w.world_names(), ["s2", "s1", "s3"]);
        assert_eq!(team_names(&w, &t), ["s1"]);
        assert!(w.labels(0).is_empty());
        assert_eq!(w.successors(1), [0]);
        let (_, t) = load_structure(br#"{"worlds": ["a", "b"]}"#).unwrap();
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn save_is_a_fixed_point() {
        let (w, t) = load_structure(DOC.as_bytes()).unwrap();
        let once = save_structure(&w, &t);
        let (w2, t2) = load_structure(once.as_bytes()).unwrap();
        assert_eq!((&w, &t), (&w2, &t2));
        assert_eq!(save_structure(&w2, &t2), once);
        assert!(once.contains(r#""p","#) || once.contains("\"p\",\n"));
        assert!(once.find("\"s2\"").unwrap() < once.find("\"s1\"").unwrap());
    }

    #[test]
    fn errors_name_the_offending_key() {
        let cases: [(&str, &str); 4] = [
            (r#"{"worlds":["a"],"relation":[["a","z"]]}"#, "relation"),
            (r#"{"worlds":["a"],"labels":{"z":[]}}"#, "labels"),
            (r#"{"worlds":["a"],"team":["z"]}"#, "team"),
            (r#"{"worlds":["a"],"labels":{"a":["not ok"]}}"#, "labels.a"),
        ];
        for (doc, key) in cases {
            let err = load_structure(doc.as_bytes()).unwrap_err();
            assert!(err.to_string().contains(key), "{err}");
        }
        assert_eq!(
            load_structure(br#"{"worlds":["a","a"]}"#).unwrap_err(),
            StructureError::DuplicateWorld("a".into())
        );
        assert!(matches!(
            load_structure(b"{\"worlds\": [").unwrap_err(),
            StructureError::Malformed(_)
        ));
        let err = load_structure(br#"{"worlds":["a"],"colour":1}"#).unwrap_err();
        assert!(err.to_string().contains("colour"));
    }
}
