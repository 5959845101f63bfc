//! Structured-text dump of worlds.
//!
//! ```text
//! {
//!   "host_types": [{"name": "INTEGER", "parent": "REAL"}, ...],
//!   "elements": [{"id": 0, "realm": "classic"},
//!                {"id": 1, "realm": "host", "value": "3"},
//!                {"id": 2, "realm": "host", "type": "INTEGER"}],
//!   "concepts": {"A": [0]},
//!   "tests": [{"function": "f", "realm": "classic", "elements": [0]}],
//!   "roles": {"r": [[0, 1]]},
//!   "attributes": {"a": [[0, 2]]},
//!   "individuals": {"P": [0]}
//! }
//! ```
//!
//! Host values are written as literals, so strings keep their quotes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Elem, ElementKind, Interpretation};
use crate::error::{Error, Result};
use crate::lattice::HostLattice;
use crate::syntax::{HostValue, Name, Realm};

#[derive(Serialize, Deserialize)]
struct HostTypeDto {
    name: Name,
    parent: Option<Name>,
}

#[derive(Serialize, Deserialize)]
struct ElementDto {
    id: Elem,
    realm: Realm,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    value: Option<String>,
    #[serde(rename = "type", skip_serializing_if = "Option::is_none", default)]
    ty: Option<Name>,
}

#[derive(Serialize, Deserialize)]
struct TestDto {
    function: Name,
    realm: Realm,
    elements: Vec<Elem>,
}

#[derive(Serialize, Deserialize)]
struct WorldDto {
    host_types: Vec<HostTypeDto>,
    elements: Vec<ElementDto>,
    concepts: BTreeMap<Name, Vec<Elem>>,
    tests: Vec<TestDto>,
    roles: BTreeMap<Name, Vec<(Elem, Elem)>>,
    attributes: BTreeMap<Name, Vec<(Elem, Elem)>>,
    individuals: BTreeMap<Name, Vec<Elem>>,
}

fn parse_value(text: &str) -> Result<HostValue> {
    let bad = || Error::Dump(format!("bad host value {text}"));
    if text.starts_with('"') {
        let s: String = serde_json::from_str(text).map_err(|_| bad())?;
        return Ok(HostValue::Str(Name::new(s)));
    }
    if let Ok(i) = text.parse::<i64>() {
        return Ok(HostValue::Integer(i));
    }
    text.parse::<f64>().map_err(|_| bad())?;
    Ok(HostValue::Decimal(Name::new(text)))
}

fn to_dto(w: &Interpretation) -> WorldDto {
    let mut host_types: Vec<HostTypeDto> = w
        .lattice
        .types()
        .map(|t| HostTypeDto {
            name: t.clone(),
            parent: w.lattice.ancestors(t).nth(1).cloned(),
        })
        .collect();
    host_types.sort_by(|a, b| a.name.cmp(&b.name));
    let elements = w
        .kinds
        .iter()
        .enumerate()
        .map(|(i, k)| {
            let id = i as Elem;
            match k {
                ElementKind::Classic => ElementDto {
                    id,
                    realm: Realm::Classic,
                    value: None,
                    ty: None,
                },
                ElementKind::Value(v) => ElementDto {
                    id,
                    realm: Realm::Host,
                    value: Some(v.to_string()),
                    ty: None,
                },
                ElementKind::Fresh(t) => ElementDto {
                    id,
                    realm: Realm::Host,
                    value: None,
                    ty: t.clone(),
                },
            }
        })
        .collect();
    let pairs = |m: &BTreeMap<Elem, std::collections::BTreeSet<Elem>>| {
        m.iter()
            .flat_map(|(s, ts)| ts.iter().map(move |t| (*s, *t)))
            .collect::<Vec<_>>()
    };
    WorldDto {
        host_types,
        elements,
        concepts: w
            .concepts
            .iter()
            .map(|(c, s)| (c.clone(), s.iter().copied().collect()))
            .collect(),
        tests: w
            .tests
            .iter()
            .map(|((f, r), s)| TestDto {
                function: f.clone(),
                realm: *r,
                elements: s.iter().copied().collect(),
            })
            .collect(),
        roles: w.roles.iter().map(|(r, m)| (r.clone(), pairs(m))).collect(),
        attributes: w
            .attrs
            .iter()
            .map(|(a, t)| (a.clone(), t.iter().map(|(s, v)| (*s, *v)).collect()))
            .collect(),
        individuals: w
            .individuals
            .iter()
            .map(|(l, s)| (l.clone(), s.iter().copied().collect()))
            .collect(),
    }
}

pub fn world_to_json(w: &Interpretation) -> Value {
    serde_json::to_value(to_dto(w)).expect("world dumps are always serializable")
}

/// Pretty-printed dump.
pub fn dump_world(w: &Interpretation) -> String {
    serde_json::to_string_pretty(&to_dto(w)).expect("world dumps are always serializable")
}

/// Reads a dump back and validates it.
pub fn load_world(text: &str) -> Result<Interpretation> {
    let dto: WorldDto = serde_json::from_str(text).map_err(|e| Error::Dump(e.to_string()))?;
    let mut lattice = HostLattice::default();
    let mut pending = dto.host_types;
    // Parents may come after their children.
    while !pending.is_empty() {
        let before = pending.len();
        let mut rest = Vec::new();
        for t in pending {
            match &t.parent {
                Some(p) if !lattice.contains(p) => rest.push(t),
                _ => lattice.declare(t.name, t.parent)?,
            }
        }
        if rest.len() == before {
            return Err(Error::Dump("host type parents form a cycle or are missing".into()));
        }
        pending = rest;
    }
    let mut w = Interpretation::new(lattice);
    for (i, e) in dto.elements.iter().enumerate() {
        if e.id as usize != i {
            return Err(Error::Dump(format!(
                "element ids must be 0..n in order, found {}",
                e.id
            )));
        }
        let got = match (e.realm, &e.value, &e.ty) {
            (Realm::Classic, None, None) => w.add_classic(),
            (Realm::Host, Some(v), None) => {
                let v = parse_value(v)?;
                if w.value(&v).is_some() {
                    return Err(Error::Dump(format!("value {v} appears twice")));
                }
                w.add_value(&v)
            }
            (Realm::Host, None, t) => {
                if let Some(t) = t {
                    if !w.lattice.contains(t) {
                        return Err(Error::Dump(format!("unknown host type {t}")));
                    }
                }
                w.add_fresh(t.clone())
            }
            _ => return Err(Error::Dump(format!("element {} mixes realms", e.id))),
        };
        debug_assert_eq!(got, e.id);
    }
    let n = w.len() as Elem;
    let check = |es: &[Elem]| -> Result<()> {
        match es.iter().find(|&&e| e >= n) {
            Some(e) => Err(Error::Dump(format!("element {e} is out of range"))),
            None => Ok(()),
        }
    };
    for (c, es) in &dto.concepts {
        check(es)?;
        es.iter().for_each(|&e| w.add_concept(c, e));
    }
    for t in &dto.tests {
        check(&t.elements)?;
        t.elements.iter().for_each(|&e| w.add_test(&t.function, t.realm, e));
    }
    for (r, ps) in &dto.roles {
        w.declare_role(r);
        for &(s, t) in ps {
            check(&[s, t])?;
            w.add_role(r, s, t);
        }
    }
    for (a, ps) in &dto.attributes {
        w.declare_attr(a);
        for &(s, t) in ps {
            check(&[s, t])?;
            if w.attr(a, s).is_some() {
                return Err(Error::Dump(format!("attribute {a} maps element {s} twice")));
            }
            w.set_attr(a, s, t);
        }
    }
    for (l, es) in &dto.individuals {
        check(es)?;
        w.declare_individual(l);
        es.iter().for_each(|&e| w.add_to_individual(l, e));
    }
    w.validate()?;
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::KnowledgeBase;
    use crate::oracle::{sample_world, SampleConfig, Vocabulary};
    use crate::syntax::parse_description;

    #[test]
    fn round_trip() {
        let kb = KnowledgeBase::default();
        let d = parse_description(
            "and(A, all(f, one-of(\"a\\\"b\", 2.5)), fills(r, P), same-as((f),(g)))",
            &kb,
        )
        .unwrap();
        let v = Vocabulary::new().with_description(&d);
        for seed in 0..5 {
            let w = sample_world(&v, &kb, seed, &SampleConfig::default());
            let back = load_world(&dump_world(&w)).unwrap();
            assert_eq!(back, w);
        }
    }

    #[test]
    fn rejects_broken_dumps() {
        assert!(load_world("{").is_err());
        let bad = r#"{"host_types":[],"elements":[{"id":0,"realm":"classic"}],"concepts":{},"tests":[],
            "roles":{},"attributes":{"a":[]},"individuals":{}}"#;
        assert!(matches!(load_world(bad), Err(Error::Dump(_))));
    }
}
