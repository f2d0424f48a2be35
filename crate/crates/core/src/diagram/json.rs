//! JSON text form of a diagram.
//!
//! ```json
//! {"beta":2,"levels":[["v0","v1"],["w0","w1"]],"multisets":{"1:0":["0:0","0:1"],"1:1":["0:1","0:0"]}}
//! ```
//!
//! Vertices are referenced as `level:ordinal`. The order of each source list
//! is kept and can serve as the indexing.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Diagram, VertexId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DiagramFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta: Option<usize>,
    levels: Vec<Vec<String>>,
    multisets: BTreeMap<String, Vec<String>>,
}

pub fn parse_vertex_ref(s: &str) -> Result<VertexId> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("vertex reference {s:?} is not of the form level:ordinal")))?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{s:?}: {e}")));
    Ok(VertexId::new(parse(a)?, parse(b)?))
}

pub fn from_json(text: &str) -> Result<Diagram> {
    let file: DiagramFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut sources: Vec<Vec<Option<Vec<usize>>>> =
        file.levels.iter().skip(1).map(|l| vec![None; l.len()]).collect();
    for (key, list) in &file.multisets {
        let v = parse_vertex_ref(key)?;
        if v.level == 0 || v.level >= file.levels.len() || v.ordinal >= file.levels[v.level].len() {
            return Err(Error::MalformedDiagram(format!("multiset key {key} names no vertex above level 0")));
        }
        let mut ordinals = Vec::with_capacity(list.len());
        for r in list {
            let s = parse_vertex_ref(r)?;
            if s.level + 1 != v.level {
                return Err(Error::MalformedDiagram(format!("{key} lists {r}, which is not on the level below")));
            }
            ordinals.push(s.ordinal);
        }
        sources[v.level - 1][v.ordinal] = Some(ordinals);
    }
    let sources = sources
        .into_iter()
        .enumerate()
        .map(|(i, level)| {
            level
                .into_iter()
                .enumerate()
                .map(|(k, s)| s.ok_or(Error::EmptyMultiset { level: i + 1, ordinal: k }))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let d = Diagram::new(file.levels, sources)?;
    if let Some(b) = file.beta {
        if d.beta() != Some(b) {
            return Err(Error::MalformedDiagram(format!(
                "declared beta {b} but in-degrees give {:?}",
                d.beta()
            )));
        }
    }
    Ok(d)
}

pub fn to_json(d: &Diagram) -> String {
    let mut multisets = BTreeMap::new();
    for n in 1..=d.max_level() {
        for k in 0..d.level_size(n) {
            let list = d.sources(n, k).iter().map(|s| format!("{}:{s}", n - 1)).collect();
            multisets.insert(format!("{n}:{k}"), list);
        }
    }
    let file = DiagramFile {
        beta: d.beta(),
        levels: (0..=d.max_level()).map(|n| d.labels(n).to_vec()).collect(),
        multisets,
    };
    serde_json::to_string(&file).expect("diagram serializes")
}
