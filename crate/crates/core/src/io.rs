//! JSON formats and Graphviz export. Every document carries `format_version`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::SteinerSolution;
use crate::instance::{MapWeightedInstance, Side};
use crate::planar::PlanarEmbedding;

pub const FORMAT_VERSION: u32 = 1;

fn version() -> u32 {
    FORMAT_VERSION
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: u64,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    #[serde(default = "version")]
    pub format_version: u32,
    pub vertices: Vec<VertexJson>,
    /// Neighbour ids in counter-clockwise order.
    pub rotations: BTreeMap<u64, Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer_face_dart: Option<[u64; 2]>,
}

/// Graph fields plus sides and terminals. The graph fields are spelled out
/// because flattening loses integer map keys.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceJson {
    #[serde(default = "version")]
    pub format_version: u32,
    pub vertices: Vec<VertexJson>,
    pub rotations: BTreeMap<u64, Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer_face_dart: Option<[u64; 2]>,
    pub side: BTreeMap<u64, Side>,
    pub terminals: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionJson {
    #[serde(default = "version")]
    pub format_version: u32,
    pub cost: f64,
    pub vertices: Vec<u64>,
    pub edges: Vec<[u64; 2]>,
    pub solver: String,
}

fn check_version(v: u32) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(Error::InvalidParameter(format!("unsupported format_version {v}, expected {FORMAT_VERSION}")));
    }
    Ok(())
}

pub fn graph_to_json(emb: &PlanarEmbedding) -> GraphJson {
    let vertices = (0..emb.num_vertices()).map(|v| VertexJson { id: emb.id(v), weight: emb.weight(v) }).collect();
    let rotations = (0..emb.num_vertices())
        .map(|v| (emb.id(v), emb.rotation(v).into_iter().map(|d| emb.id(emb.head(d))).collect()))
        .collect();
    let outer_face_dart = emb.outer_dart().map(|d| [emb.id(emb.origin(d)), emb.id(emb.head(d))]);
    GraphJson { format_version: FORMAT_VERSION, vertices, rotations, outer_face_dart }
}

pub fn graph_from_json(g: &GraphJson) -> Result<PlanarEmbedding> {
    check_version(g.format_version)?;
    let ids: Vec<u64> = g.vertices.iter().map(|v| v.id).collect();
    let weights = g.vertices.iter().map(|v| v.weight).collect();
    let index: BTreeMap<u64, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    if index.len() != ids.len() {
        return Err(Error::InvalidParameter("duplicate vertex id".into()));
    }
    let lookup = |id: u64| index.get(&id).copied().ok_or(Error::UnknownVertex(id));
    if let Some((&id, _)) = g.rotations.iter().find(|(id, _)| !index.contains_key(id)) {
        return Err(Error::UnknownVertex(id));
    }
    let rotations = ids
        .iter()
        .map(|id| g.rotations.get(id).map_or(Ok(Vec::new()), |r| r.iter().map(|&x| lookup(x)).collect()))
        .collect::<Result<Vec<_>>>()?;
    let emb = PlanarEmbedding::from_rotations(ids, weights, &rotations)?;
    let outer = match g.outer_face_dart {
        Some([u, v]) => Some(emb.find_dart(lookup(u)?, lookup(v)?).ok_or_else(|| Error::InvalidParameter(format!("outer face dart {u}->{v} is not an edge")))?),
        None => None,
    };
    Ok(emb.with_outer_dart(outer))
}

impl InstanceJson {
    pub fn graph(&self) -> GraphJson {
        GraphJson {
            format_version: self.format_version,
            vertices: self.vertices.clone(),
            rotations: self.rotations.clone(),
            outer_face_dart: self.outer_face_dart,
        }
    }
}

pub fn instance_to_json(inst: &MapWeightedInstance) -> InstanceJson {
    let w = &inst.witness;
    let g = graph_to_json(w);
    InstanceJson {
        format_version: g.format_version,
        vertices: g.vertices,
        rotations: g.rotations,
        outer_face_dart: g.outer_face_dart,
        side: (0..w.num_vertices()).map(|v| (w.id(v), inst.sides[v])).collect(),
        terminals: inst.terminals.iter().map(|&t| w.id(t)).collect(),
    }
}

/// Reads an instance as written, without enforcing the map-weighted
/// invariants; run `validate` on the result to list violations.
pub fn instance_from_json(j: &InstanceJson) -> Result<MapWeightedInstance> {
    let witness = graph_from_json(&j.graph())?;
    let sides = (0..witness.num_vertices())
        .map(|v| j.side.get(&witness.id(v)).copied().ok_or(Error::UnknownVertex(witness.id(v))))
        .collect::<Result<Vec<_>>>()?;
    let mut terminals = j
        .terminals
        .iter()
        .map(|&id| witness.index_of(id).ok_or(Error::UnknownVertex(id)))
        .collect::<Result<Vec<_>>>()?;
    terminals.sort_unstable();
    terminals.dedup();
    Ok(MapWeightedInstance { witness, sides, terminals })
}

pub fn solution_to_json(emb: &PlanarEmbedding, sol: &SteinerSolution) -> SolutionJson {
    SolutionJson {
        format_version: FORMAT_VERSION,
        cost: sol.cost,
        vertices: sol.vertices.iter().map(|&v| emb.id(v)).collect(),
        edges: sol.edges.iter().map(|&(u, v)| [emb.id(u), emb.id(v)]).collect(),
        solver: sol.solver.clone(),
    }
}

pub fn solution_from_json(emb: &PlanarEmbedding, j: &SolutionJson) -> Result<SteinerSolution> {
    check_version(j.format_version)?;
    let idx = |id: u64| emb.index_of(id).ok_or(Error::UnknownVertex(id));
    let mut vertices = j.vertices.iter().map(|&v| idx(v)).collect::<Result<Vec<_>>>()?;
    vertices.sort_unstable();
    let mut edges = j
        .edges
        .iter()
        .map(|&[u, v]| {
            let (a, b) = (idx(u)?, idx(v)?);
            Ok((a.min(b), a.max(b)))
        })
        .collect::<Result<Vec<_>>>()?;
    edges.sort_unstable();
    Ok(SteinerSolution { vertices, edges, cost: j.cost, solver: j.solver.clone() })
}

/// Graphviz rendering; vertex labels are weights, highlighted vertices and
/// edges are drawn bold.
pub fn to_dot(emb: &PlanarEmbedding, name: &str, vertices: &[usize], edges: &[usize]) -> String {
    let mut hv = vec![false; emb.num_vertices()];
    for &v in vertices {
        hv[v] = true;
    }
    let mut he = vec![false; emb.num_edges()];
    for &e in edges {
        he[e] = true;
    }
    let mut s = String::new();
    let _ = writeln!(s, "graph \"{}\" {{", name.replace('"', "'"));
    for v in 0..emb.num_vertices() {
        let style = if hv[v] { ", style=bold, color=red" } else { "" };
        let _ = writeln!(s, "  {} [label=\"{}\"{}];", emb.id(v), emb.weight(v), style);
    }
    for e in 0..emb.num_edges() {
        let (u, v) = emb.edge_endpoints(e);
        let style = if he[e] { " [style=bold, color=red]" } else { "" };
        let _ = writeln!(s, "  {} -- {}{};", emb.id(u), emb.id(v), style);
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{gen_grid_map, GridMapParams};

    #[test]
    fn instance_round_trip() {
        let inst = gen_grid_map(&GridMapParams { rows: 3, cols: 2, seed: 9, merge_prob: 0.4, terminals: 3 }).unwrap();
        let j = instance_to_json(&inst);
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains("\"format_version\":1"));
        let back = instance_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        // rotations agree up to the starting dart
        let same_cycle = |a: &Vec<usize>, b: &Vec<usize>| {
            a.len() == b.len() && (0..a.len().max(1)).any(|s| (0..a.len()).all(|i| a[(i + s) % a.len()] == b[i]))
        };
        let (ra, rb) = (back.witness.rotation_lists(), inst.witness.rotation_lists());
        assert!(ra.iter().zip(&rb).all(|(a, b)| same_cycle(a, b)));
        let outer = |e: &PlanarEmbedding| {
            let mut vs: Vec<usize> = e.face(e.outer_face().unwrap()).iter().map(|&d| e.origin(d)).collect();
            vs.sort_unstable();
            vs
        };
        assert_eq!(outer(&back.witness), outer(&inst.witness));
        assert_eq!(back.terminals, inst.terminals);
        assert_eq!(back.sides, inst.sides);
        assert!(back.validate(0, 0).is_empty());
    }

    #[test]
    fn unknown_ids_and_versions_are_rejected() {
        let text = r#"{"format_version":1,"vertices":[{"id":0,"weight":1}],"rotations":{"0":[5]}}"#;
        assert!(graph_from_json(&serde_json::from_str(text).unwrap()).is_err());
        let text = r#"{"format_version":9,"vertices":[],"rotations":{}}"#;
        assert!(graph_from_json(&serde_json::from_str(text).unwrap()).is_err());
    }

    #[test]
    fn dot_mentions_every_edge() {
        let inst = gen_grid_map(&GridMapParams::default()).unwrap();
        let dot = to_dot(&inst.witness, "w", &[], &[0]);
        assert_eq!(dot.matches(" -- ").count(), inst.witness.num_edges());
        assert_eq!(dot.matches("bold").count(), 1);
    }
}
