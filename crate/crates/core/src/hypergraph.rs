// SPDX-License-Identifier: Apache-2.0

//! Layout hypergraph built from a netlist.
//!
//! Components and wire relations are both hyperedges. Nodes are pin points,
//! each owned by exactly one component hyperedge; a relation hyperedge
//! attaches the pin points its signal reaches. Only placeable blocks become
//! components, and only signals reaching at least two distinct blocks become
//! relations.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::yal::Netlist;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HypergraphError {
    #[error("netlist has no placeable blocks")]
    EmptyNetlist,
    #[error("unknown component id {0}")]
    UnknownComponent(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ComponentId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NetId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, PartialEq)]
pub struct PinPoint {
    pub owner: ComponentId,
    pub terminal: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentEdge {
    /// Instance name.
    pub label: String,
    pub module: String,
    pub nodes: Vec<NodeId>,
    pub width: f64,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationEdge {
    /// Signal name.
    pub label: String,
    pub nodes: Vec<NodeId>,
    /// Distinct components reached, ascending.
    pub components: Vec<ComponentId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutHypergraph {
    nodes: Vec<PinPoint>,
    components: Vec<ComponentEdge>,
    relations: Vec<RelationEdge>,
    neighbors: Vec<Vec<ComponentId>>,
    // parent -> children; never populated by `from_netlist`
    nesting: BTreeMap<ComponentId, Vec<ComponentId>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborStats {
    pub blocks: usize,
    pub nets: usize,
    pub neighbor_min: usize,
    pub neighbor_max: usize,
    pub neighbor_avg: f64,
}

impl NeighborStats {
    /// Average neighbor count rounded half-up, as printed in benchmark tables.
    pub fn neighbor_avg_rounded(&self) -> usize {
        (self.neighbor_avg + 0.5).floor() as usize
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "blocks": self.blocks,
            "nets": self.nets,
            "neighbors": {
                "min": self.neighbor_min,
                "max": self.neighbor_max,
                "avg": self.neighbor_avg_rounded(),
                "avg_exact": self.neighbor_avg,
            }
        })
    }
}

/// Dimensions and label of one component, used to seed real geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxDims {
    pub name: String,
    pub width: f64,
    pub height: f64,
}

impl LayoutHypergraph {
    pub fn from_netlist(netlist: &Netlist) -> Result<Self, HypergraphError> {
        let mut components = Vec::new();
        let mut index_of: BTreeMap<&str, ComponentId> = BTreeMap::new();
        for inst in &netlist.instances {
            let module = netlist.module_of(inst);
            if !module.module_type.is_block() {
                continue;
            }
            let id = ComponentId(components.len());
            index_of.insert(inst.name.as_str(), id);
            components.push(ComponentEdge {
                label: inst.name.clone(),
                module: module.name.clone(),
                nodes: Vec::new(),
                width: module.width,
                height: module.height,
            });
        }
        if components.is_empty() {
            return Err(HypergraphError::EmptyNetlist);
        }

        // one pin point per (block, signal) incidence
        let mut nodes = Vec::new();
        let mut pin_of: BTreeMap<(ComponentId, &str), NodeId> = BTreeMap::new();
        for inst in &netlist.instances {
            let Some(&owner) = index_of.get(inst.name.as_str()) else {
                continue;
            };
            let module = netlist.module_of(inst);
            for (pos, signal) in inst.signals.iter().enumerate() {
                if pin_of.contains_key(&(owner, signal.as_str())) {
                    continue;
                }
                let terminal = module
                    .terminals
                    .get(pos)
                    .map_or_else(|| signal.clone(), |t| t.name.clone());
                let node = NodeId(nodes.len());
                nodes.push(PinPoint { owner, terminal });
                components[owner.0].nodes.push(node);
                pin_of.insert((owner, signal.as_str()), node);
            }
        }

        let mut relations = Vec::new();
        for (signal, members) in &netlist.nets {
            let mut reached: Vec<ComponentId> = members
                .iter()
                .filter_map(|m| index_of.get(m.as_str()).copied())
                .collect();
            reached.sort_unstable();
            reached.dedup();
            if reached.len() < 2 {
                continue;
            }
            let nodes = reached
                .iter()
                .map(|&c| pin_of[&(c, signal.as_str())])
                .collect();
            relations.push(RelationEdge {
                label: signal.clone(),
                nodes,
                components: reached,
            });
        }

        let mut sets = vec![BTreeSet::new(); components.len()];
        for rel in &relations {
            for &a in &rel.components {
                for &b in &rel.components {
                    if a != b {
                        sets[a.0].insert(b);
                    }
                }
            }
        }
        let neighbors = sets.into_iter().map(|s| s.into_iter().collect()).collect();

        Ok(Self {
            nodes,
            components,
            relations,
            neighbors,
            nesting: BTreeMap::new(),
        })
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[ComponentEdge] {
        &self.components
    }

    pub fn component(&self, c: ComponentId) -> Result<&ComponentEdge, HypergraphError> {
        self.components
            .get(c.0)
            .ok_or(HypergraphError::UnknownComponent(c.0))
    }

    pub fn component_by_label(&self, label: &str) -> Option<ComponentId> {
        self.components
            .iter()
            .position(|c| c.label == label)
            .map(ComponentId)
    }

    pub fn relations(&self) -> &[RelationEdge] {
        &self.relations
    }

    pub fn nodes(&self) -> &[PinPoint] {
        &self.nodes
    }

    pub fn node_owner(&self, n: NodeId) -> Option<&PinPoint> {
        self.nodes.get(n.0)
    }

    pub fn nesting(&self) -> &BTreeMap<ComponentId, Vec<ComponentId>> {
        &self.nesting
    }

    /// Components sharing at least one relation with `c`, ascending.
    pub fn neighbors(&self, c: ComponentId) -> Result<&[ComponentId], HypergraphError> {
        self.neighbors
            .get(c.0)
            .map(Vec::as_slice)
            .ok_or(HypergraphError::UnknownComponent(c.0))
    }

    pub fn box_dims(&self) -> Vec<BoxDims> {
        self.components
            .iter()
            .map(|c| BoxDims {
                name: c.label.clone(),
                width: c.width,
                height: c.height,
            })
            .collect()
    }

    pub fn stats(&self) -> NeighborStats {
        let counts: Vec<usize> = self.neighbors.iter().map(Vec::len).collect();
        let total: usize = counts.iter().sum();
        NeighborStats {
            blocks: self.components.len(),
            nets: self.relations.len(),
            neighbor_min: counts.iter().copied().min().unwrap_or(0),
            neighbor_max: counts.iter().copied().max().unwrap_or(0),
            neighbor_avg: total as f64 / counts.len().max(1) as f64,
        }
    }
}
