// SPDX-License-Identifier: Apache-2.0

//! Three-axis half-perimeter wire-length.
//!
//! A net's length is the sum of its endpoints' extents along x, y and z.
//! Endpoints sit at component centers; z is the layer index scaled by the
//! die height.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eo::GridPlacement;
use crate::hypergraph::{ComponentId, LayoutHypergraph};
use crate::squeeze::GeometricPlacement;

pub const DEFAULT_DIE_HEIGHT: f64 = 1.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WirelengthError {
    #[error("net has no endpoints")]
    EmptyNet,
    #[error("component `{0}` has no position")]
    UnplacedComponent(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetEndpoint {
    pub component: ComponentId,
    pub cx: f64,
    pub cy: f64,
    pub cz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WirelengthReport {
    pub per_net: IndexMap<String, f64>,
    pub total: f64,
    pub die_height: f64,
}

fn extent(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    hi - lo
}

pub fn net_hpwl(endpoints: &[NetEndpoint]) -> Result<f64, WirelengthError> {
    if endpoints.is_empty() {
        return Err(WirelengthError::EmptyNet);
    }
    Ok(extent(endpoints.iter().map(|e| e.cx))
        + extent(endpoints.iter().map(|e| e.cy))
        + extent(endpoints.iter().map(|e| e.cz)))
}

pub fn total_wirelength(
    h: &LayoutHypergraph,
    g: &GeometricPlacement,
    die_height: f64,
) -> Result<WirelengthReport, WirelengthError> {
    let mut centers: Vec<Option<NetEndpoint>> = vec![None; h.component_count()];
    for b in &g.boxes {
        if let Some(slot) = centers.get_mut(b.component.0) {
            *slot = Some(NetEndpoint {
                component: b.component,
                cx: b.x + b.width / 2.0,
                cy: b.y + b.height / 2.0,
                cz: b.layer as f64 * die_height,
            });
        }
    }
    let mut per_net = IndexMap::with_capacity(h.relations().len());
    let mut total = 0.0;
    let mut endpoints = Vec::new();
    for rel in h.relations() {
        endpoints.clear();
        for c in &rel.components {
            let e = centers[c.0].ok_or_else(|| {
                WirelengthError::UnplacedComponent(h.components()[c.0].label.clone())
            })?;
            endpoints.push(e);
        }
        let w = net_hpwl(&endpoints)?;
        total += w;
        per_net.insert(rel.label.clone(), w);
    }
    Ok(WirelengthReport {
        per_net,
        total,
        die_height,
    })
}

/// Wire-length with integer grid cells standing in for component centers.
pub fn grid_wirelength(h: &LayoutHypergraph, p: &GridPlacement) -> Result<f64, WirelengthError> {
    let mut total = 0.0;
    let mut endpoints = Vec::new();
    for rel in h.relations() {
        endpoints.clear();
        for &c in &rel.components {
            let cell = p.cell_of(c).ok_or_else(|| {
                WirelengthError::UnplacedComponent(h.components()[c.0].label.clone())
            })?;
            endpoints.push(NetEndpoint {
                component: c,
                cx: cell.x as f64,
                cy: cell.y as f64,
                cz: cell.z as f64,
            });
        }
        total += net_hpwl(&endpoints)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ep(cx: f64, cy: f64, cz: f64) -> NetEndpoint {
        NetEndpoint {
            component: ComponentId(0),
            cx,
            cy,
            cz,
        }
    }

    #[test]
    fn examples() {
        assert_eq!(net_hpwl(&[ep(3.0, 1.0, 2.0)]), Ok(0.0));
        assert_eq!(net_hpwl(&[ep(0.0, 0.0, 0.0), ep(3.0, 4.0, 1.0)]), Ok(8.0));
        assert_eq!(
            net_hpwl(&[ep(0.0, 0.0, 0.0), ep(2.0, 5.0, 0.0), ep(1.0, 1.0, 2.0)]),
            Ok(9.0)
        );
        assert_eq!(net_hpwl(&[]), Err(WirelengthError::EmptyNet));
    }
}
