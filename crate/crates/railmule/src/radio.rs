//! Wireless interface model and per-step contact bookkeeping.
//!
//! Links are symmetric: a kind works only when both nodes carry it and the
//! distance is within both ranges. No interference or contention — any
//! number of simultaneous pairwise links is allowed.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::geomap::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum InterfaceKind {
    Bluetooth,
    Lora,
}

impl std::fmt::Display for InterfaceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InterfaceKind::Bluetooth => write!(f, "bluetooth"),
            InterfaceKind::Lora => write!(f, "lora"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceSpec {
    pub kind: InterfaceKind,
    pub range: f64,
    pub bitrate: f64,
}

impl InterfaceSpec {
    /// Short-range high-speed interface (v4/v5-class figures).
    pub fn bluetooth() -> Self {
        InterfaceSpec { kind: InterfaceKind::Bluetooth, range: 10.0, bitrate: 2_000_000.0 }
    }

    /// Long-range low-power interface (LoRaWAN-class figures).
    pub fn lora() -> Self {
        InterfaceSpec { kind: InterfaceKind::Lora, range: 8_000.0, bitrate: 5_000.0 }
    }
}

/// A usable link between two nodes at some instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub kind: InterfaceKind,
    /// Effective rate: the slower of the two endpoints on this kind.
    pub bitrate: f64,
}

/// Best link available between two interface sets at the given distance, or
/// `None`. Higher effective bitrate wins; bluetooth wins exact rate ties.
pub fn can_link(
    a_interfaces: &[InterfaceSpec],
    b_interfaces: &[InterfaceSpec],
    distance: f64,
) -> Option<Link> {
    let mut best: Option<Link> = None;
    for a in a_interfaces {
        for b in b_interfaces {
            if a.kind != b.kind || distance > a.range.min(b.range) {
                continue;
            }
            let candidate = Link { kind: a.kind, bitrate: a.bitrate.min(b.bitrate) };
            let wins = match best {
                None => true,
                Some(cur) => {
                    candidate.bitrate > cur.bitrate
                        || (candidate.bitrate == cur.bitrate && candidate.kind < cur.kind)
                }
            };
            if wins {
                best = Some(candidate);
            }
        }
    }
    best
}

/// Seconds needed to move `message_size` bytes over a link.
pub fn transfer_duration(message_size: u64, bitrate: f64) -> Result<f64> {
    if bitrate <= 0.0 {
        return Err(Error::BadLink { bitrate });
    }
    Ok(message_size as f64 * 8.0 / bitrate)
}

pub type NodeIx = usize;

/// An interval during which a node pair shares a link. `node_a < node_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contact {
    pub node_a: NodeIx,
    pub node_b: NodeIx,
    pub kind: InterfaceKind,
    pub start: f64,
    pub end: Option<f64>,
}

/// Result of one detection pass.
#[derive(Debug, Default)]
pub struct ContactUpdate {
    pub starts: Vec<Contact>,
    pub ends: Vec<Contact>,
}

/// Scans all unordered pairs at time `t`, opening contacts where a link
/// first succeeds and closing them where it fails. `open` maps canonical
/// pairs to their open contact and is updated in place.
pub fn detect_contacts(
    positions: &[Point],
    interfaces: &[Vec<InterfaceSpec>],
    open: &mut BTreeMap<(NodeIx, NodeIx), Contact>,
    t: f64,
) -> ContactUpdate {
    assert_eq!(positions.len(), interfaces.len());
    let mut update = ContactUpdate::default();
    let n = positions.len();
    for a in 0..n {
        for b in (a + 1)..n {
            let link = can_link(
                &interfaces[a],
                &interfaces[b],
                positions[a].distance(&positions[b]),
            );
            match (link, open.contains_key(&(a, b))) {
                (Some(link), false) => {
                    let c = Contact { node_a: a, node_b: b, kind: link.kind, start: t, end: None };
                    open.insert((a, b), c);
                    update.starts.push(c);
                }
                (None, true) => {
                    let mut c = open.remove(&(a, b)).unwrap();
                    c.end = Some(t);
                    update.ends.push(c);
                }
                _ => {}
            }
        }
    }
    update
}
