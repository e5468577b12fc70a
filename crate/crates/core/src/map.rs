//! Layered Hasse-diagram layout and the JSON map document.

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::factors::{Factorization, Support};
use crate::lattice::ConceptLattice;
use crate::order::Dimension;

/// Number of barycenter sweeps; each sweep runs downwards then upwards.
pub const SWEEPS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub rank: Vec<usize>,
    pub x: Vec<f64>,
}

/// Ranks by longest cover path from the top; x by barycenter sweeps starting
/// from lectic order.
pub fn layered_layout(lattice: &ConceptLattice) -> Layout {
    let n = lattice.len();
    let concepts = lattice.concepts();
    let mut order: Vec<usize> = (0..n).collect();
    // larger extents first: every upper neighbour precedes its lower ones
    order.sort_by_key(|&c| (std::cmp::Reverse(concepts[c].extent.len()), c));
    let mut rank = vec![0usize; n];
    for &c in &order {
        for &u in lattice.upper_neighbours(c) {
            rank[c] = rank[c].max(rank[u] + 1);
        }
    }

    let depth = rank.iter().max().map_or(0, |r| r + 1);
    let mut layers: Vec<Vec<usize>> = vec![Vec::new(); depth];
    for c in 0..n {
        layers[rank[c]].push(c);
    }
    let mut x = vec![0.0; n];
    for layer in &layers {
        place(layer, &mut x);
    }

    for _ in 0..SWEEPS {
        for layer in layers.iter_mut().skip(1) {
            reorder(layer, &mut x, |c| lattice.upper_neighbours(c));
        }
        for layer in layers.iter_mut().rev().skip(1) {
            reorder(layer, &mut x, |c| lattice.lower_neighbours(c));
        }
    }
    Layout { rank, x }
}

fn place(layer: &[usize], x: &mut [f64]) {
    let len = layer.len() as f64;
    for (i, &c) in layer.iter().enumerate() {
        x[c] = (i as f64 + 1.0) / (len + 1.0);
    }
}

/// Stable sort of a layer by the mean x of the given neighbours.
fn reorder<'a>(layer: &mut Vec<usize>, x: &mut [f64], neighbours: impl Fn(usize) -> &'a [usize]) {
    let mut keyed: Vec<(usize, f64)> = layer
        .iter()
        .map(|&c| {
            let nb = neighbours(c);
            let key = if nb.is_empty() {
                x[c]
            } else {
                nb.iter().map(|&d| x[d]).sum::<f64>() / nb.len() as f64
            };
            (c, key)
        })
        .collect();
    keyed.sort_by(|a, b| a.1.total_cmp(&b.1));
    *layer = keyed.into_iter().map(|(c, _)| c).collect();
    place(layer, x);
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDocument {
    pub meta: MapMeta,
    pub nodes: Vec<MapNode>,
    pub edges: Vec<MapEdge>,
    pub factors: Vec<MapFactor>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapMeta {
    pub journal: String,
    pub level: u8,
    pub conventions: Vec<String>,
    pub metrics: MapMetrics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapMetrics {
    pub objects: usize,
    pub attributes: usize,
    pub incidence: usize,
    pub density: f64,
    pub concepts: usize,
    pub width: usize,
    pub depth: usize,
    #[serde(with = "dimension_value")]
    pub dimension: Dimension,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct MapNode {
    pub id: usize,
    pub intent: Vec<String>,
    pub extent: Vec<String>,
    pub own_attributes: Vec<String>,
    pub own_objects: Vec<String>,
    pub rank: usize,
    pub x: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapEdge {
    pub upper: usize,
    pub lower: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFactor {
    pub sequence: Vec<Vec<String>>,
    pub support: MapSupport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSupport {
    pub covered: usize,
    pub total: usize,
}

impl From<Support> for MapSupport {
    fn from(s: Support) -> Self {
        MapSupport {
            covered: s.covered,
            total: s.total,
        }
    }
}

/// Node for concept `id`, shared by the map document and the service.
pub fn map_node(lattice: &ConceptLattice, layout: &Layout, id: usize) -> MapNode {
    let ctx = lattice.context();
    let c = &lattice.concepts()[id];
    MapNode {
        id,
        intent: ctx.attribute_labels(&c.intent),
        extent: ctx.object_labels(&c.extent),
        own_attributes: lattice
            .own_attributes(id)
            .into_iter()
            .map(|m| ctx.attributes()[m].clone())
            .collect(),
        own_objects: lattice
            .own_objects(id)
            .into_iter()
            .map(|g| ctx.objects()[g].clone())
            .collect(),
        rank: layout.rank[id],
        x: layout.x[id],
    }
}

pub fn map_factors(factorization: &Factorization, limit: Option<usize>) -> Vec<MapFactor> {
    factorization
        .factors
        .iter()
        .take(limit.unwrap_or(usize::MAX))
        .map(|f| MapFactor {
            sequence: f.sequence.0.clone(),
            support: MapSupport {
                covered: f.covered_count(),
                total: factorization.incidence,
            },
        })
        .collect()
}

pub fn build_map(
    lattice: &ConceptLattice,
    meta: MapMeta,
    factors: Vec<MapFactor>,
) -> MapDocument {
    let layout = layered_layout(lattice);
    MapDocument {
        meta,
        nodes: (0..lattice.len())
            .map(|id| map_node(lattice, &layout, id))
            .collect(),
        edges: lattice
            .covers()
            .iter()
            .map(|&(upper, lower)| MapEdge { upper, lower })
            .collect(),
        factors,
    }
}

impl MapDocument {
    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<MapDocument> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Exact dimensions as numbers, budget exhaustion as `"unknown(>=k)"`.
mod dimension_value {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Exact(usize),
        Text(String),
    }

    pub fn serialize<S: Serializer>(d: &Dimension, s: S) -> std::result::Result<S::Ok, S::Error> {
        match d {
            Dimension::Exact(k) => Raw::Exact(*k),
            Dimension::AtLeast(_) => Raw::Text(d.to_string()),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Dimension, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Exact(k) => Ok(Dimension::Exact(k)),
            Raw::Text(t) => t
                .strip_prefix("unknown(>=")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|k| k.parse().ok())
                .map(Dimension::AtLeast)
                .ok_or_else(|| de::Error::custom(format!("invalid dimension `{t}`"))),
        }
    }
}
