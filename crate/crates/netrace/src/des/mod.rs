//! Deterministic discrete-event simulation of the race protocols.
//!
//! Two granularities, mirroring the two student models:
//!
//! * [`simulate_chain`] moves individual bits grouped into packets over a
//!   linear chain; a unit's transmission occupies 1/R, so its
//!   `PhysicalArrival` lands at `TxStart + 1/R + l/s`.
//! * [`simulate_packet_flow_network`] moves whole packets (one unit per
//!   packet, transmission time 1/R) over an arbitrary feed-forward
//!   topology with FIFO links, used by the routing race. There the
//!   `PhysicalArrival` is the body arrival `TxStart + l/s` and the
//!   full-arrival rule adds the 1/R wait at the node.
//!
//! Completion times reproduce the closed forms in [`crate::analytic`]
//! exactly; nodes have zero processing delay.

mod chain;
mod flow;
mod web;

pub use chain::{node_names as chain_node_names, simulate_chain};
pub use flow::{simulate_packet_flow_network, Flow, FlowNetwork, ReleaseSchedule};
pub use web::simulate_web;

/// Errors from the flow-network engine.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DesError {
    #[error("flow {flow} visits node {node} twice")]
    CyclicPath { flow: String, node: String },
    #[error("flow {flow} references unknown node {node}")]
    UnknownNode { flow: String, node: String },
    #[error("flow {flow} needs a path of at least two nodes")]
    PathTooShort { flow: String },
    #[error("flow paths form a cycle through node {node}")]
    CyclicTopology { node: String },
}
