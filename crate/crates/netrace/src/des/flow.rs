//! Packet-level flow simulation over a feed-forward network with FIFO
//! links, the engine behind the routing race.

use super::DesError;
use crate::scalar::SimScalar;
use crate::scenario::{ArrivalConvention, LinkSpec, Switching};
use crate::timeline::{Event, EventKind, Timeline};
use std::collections::{BTreeMap, BTreeSet};

/// A traffic flow: `packets` packets following a fixed node path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flow {
    pub id: String,
    pub path: Vec<String>,
    pub packets: u64,
}

/// Topology: declared nodes plus the one link spec shared by every edge
/// that the flow paths trace out.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowNetwork<T> {
    pub nodes: Vec<String>,
    pub link: LinkSpec<T>,
}

/// Per-flow, per-node earliest forwarding times (defaults to zero).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReleaseSchedule<T> {
    map: BTreeMap<(String, String), T>,
}

impl<T: SimScalar> ReleaseSchedule<T> {
    pub fn new() -> Self {
        ReleaseSchedule {
            map: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, flow: impl Into<String>, node: impl Into<String>, at: T) {
        self.map.insert((flow.into(), node.into()), at);
    }

    pub fn release(&self, flow: &str, node: &str) -> T {
        self.map
            .get(&(flow.to_owned(), node.to_owned()))
            .cloned()
            .unwrap_or_else(T::zero)
    }
}

/// Simulate all flows packet by packet.
///
/// A packet departs a node on its flow's next link at
/// `max(eligible, release, link free)`, where eligibility is the arrival
/// instant `TxStart + l/s` plus, under store-and-forward with the
/// full-arrival rule, the 1/R wait; links transmit at most one packet
/// per 1/R and serve eligible packets first come first served (ties by
/// flow id, then sequence number). Completion is the arrival of the last
/// packet at its flow's final node.
pub fn simulate_packet_flow_network<T: SimScalar>(
    net: &FlowNetwork<T>,
    flows: &[Flow],
    releases: &ReleaseSchedule<T>,
    switching: &Switching,
) -> Result<Timeline<T>, DesError> {
    validate_flows(net, flows)?;
    let order = topo_order(net, flows)?;
    let rank: BTreeMap<&str, usize> = order
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();

    let unit = net.link.unit_time();
    let prop = net.link.propagation_delay();
    let recv_offset = match switching {
        Switching::StoreAndForward {
            convention: ArrivalConvention::Full,
        } => prop.clone() + unit.clone(),
        _ => prop.clone(),
    };

    // edge -> list of (flow index, hop index) crossing it
    let mut edge_users: BTreeMap<(String, String), Vec<usize>> = BTreeMap::new();
    for (fi, flow) in flows.iter().enumerate() {
        for hop in flow.path.windows(2) {
            edge_users
                .entry((hop[0].clone(), hop[1].clone()))
                .or_default()
                .push(fi);
        }
    }
    let mut edges: Vec<(String, String)> = edge_users.keys().cloned().collect();
    edges.sort_by_key(|(u, v)| (rank[u.as_str()], v.clone()));

    // eligibility of each packet at its flow's current position;
    // everything is queued at the sources from t = 0
    let mut eligible: Vec<Vec<T>> = flows
        .iter()
        .map(|f| vec![T::zero(); f.packets as usize])
        .collect();

    let mut events = Vec::new();
    let mut completion = T::zero();

    for (u, v) in edges {
        let lane = format!("{u}->{v}");
        let mut crossings: Vec<(T, usize, u64)> = Vec::new();
        for &fi in &edge_users[&(u.clone(), v.clone())] {
            let flow = &flows[fi];
            let release = releases.release(&flow.id, &u);
            for seq in 0..flow.packets {
                let ready = eligible[fi][seq as usize].clone();
                let ready = if release > ready {
                    release.clone()
                } else {
                    ready
                };
                crossings.push((ready, fi, seq));
            }
        }
        crossings.sort_by(|a, b| {
            a.0.cmp(&b.0)
                .then_with(|| flows[a.1].id.cmp(&flows[b.1].id))
                .then_with(|| a.2.cmp(&b.2))
        });

        let mut link_free: Option<T> = None;
        for (ready, fi, seq) in crossings {
            let start = match &link_free {
                Some(free) if *free > ready => free.clone(),
                _ => ready,
            };
            link_free = Some(start.clone() + unit.clone());

            let flow = &flows[fi];
            let detail = format!("flow={} seq={} link={lane}", flow.id, seq + 1);
            events.push(Event::new(
                start.clone(),
                u.clone(),
                EventKind::TxStart,
                detail.clone(),
            ));
            events.push(Event::new(
                start.clone() + unit.clone(),
                u.clone(),
                EventKind::TxEnd,
                detail.clone(),
            ));
            events.push(Event::new(
                start.clone() + prop.clone(),
                v.clone(),
                EventKind::PhysicalArrival,
                detail.clone(),
            ));
            let arrived = start + recv_offset.clone();
            events.push(Event::new(
                arrived.clone(),
                v.clone(),
                EventKind::FullArrival,
                detail,
            ));

            eligible[fi][seq as usize] = arrived.clone();
            if v == *flow.path.last().expect("non-empty path") && arrived > completion {
                completion = arrived;
            }
        }
    }

    Ok(Timeline::new(events, completion))
}

fn validate_flows<T: SimScalar>(net: &FlowNetwork<T>, flows: &[Flow]) -> Result<(), DesError> {
    let known: BTreeSet<&str> = net.nodes.iter().map(|n| n.as_str()).collect();
    for flow in flows {
        if flow.path.len() < 2 {
            return Err(DesError::PathTooShort {
                flow: flow.id.clone(),
            });
        }
        let mut seen = BTreeSet::new();
        for node in &flow.path {
            if !known.contains(node.as_str()) {
                return Err(DesError::UnknownNode {
                    flow: flow.id.clone(),
                    node: node.clone(),
                });
            }
            if !seen.insert(node.as_str()) {
                return Err(DesError::CyclicPath {
                    flow: flow.id.clone(),
                    node: node.clone(),
                });
            }
        }
    }
    Ok(())
}

/// Kahn topological order of the nodes over the union of the flow paths.
fn topo_order<T: SimScalar>(net: &FlowNetwork<T>, flows: &[Flow]) -> Result<Vec<String>, DesError> {
    let mut succ: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    let mut indeg: BTreeMap<&str, usize> = net.nodes.iter().map(|n| (n.as_str(), 0)).collect();
    for flow in flows {
        for hop in flow.path.windows(2) {
            if succ
                .entry(hop[0].as_str())
                .or_default()
                .insert(hop[1].as_str())
            {
                *indeg.get_mut(hop[1].as_str()).expect("validated node") += 1;
            }
        }
    }
    let mut queue: Vec<&str> = indeg
        .iter()
        .filter(|(_, d)| **d == 0)
        .map(|(n, _)| *n)
        .collect();
    queue.sort();
    let mut order = Vec::new();
    let mut i = 0;
    while i < queue.len() {
        let n = queue[i];
        i += 1;
        order.push(n.to_owned());
        if let Some(next) = succ.get(n) {
            for m in next {
                let d = indeg.get_mut(m).expect("validated node");
                *d -= 1;
                if *d == 0 {
                    queue.push(m);
                }
            }
        }
    }
    if order.len() != indeg.len() {
        let node = indeg
            .iter()
            .find(|(_, d)| **d > 0)
            .map(|(n, _)| (*n).to_owned())
            .unwrap_or_default();
        return Err(DesError::CyclicTopology { node });
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::packet_switching_delay;
    use crate::scalar::Exact;

    fn net(nodes: &[&str]) -> FlowNetwork<Exact> {
        FlowNetwork {
            nodes: nodes.iter().map(|s| s.to_string()).collect(),
            link: LinkSpec {
                bitrate: Exact::from_int(1),
                length: Exact::from_int(10),
                prop_speed: Exact::from_int(1),
            },
        }
    }

    fn flow(id: &str, path: &[&str], packets: u64) -> Flow {
        Flow {
            id: id.to_owned(),
            path: path.iter().map(|s| s.to_string()).collect(),
            packets,
        }
    }

    const SNF_FULL: Switching = Switching::StoreAndForward {
        convention: ArrivalConvention::Full,
    };

    #[test]
    fn single_flow_on_a_chain_reduces_to_unit_packets() {
        let network = net(&["A", "n1", "n2", "B"]);
        let flows = [flow("A", &["A", "n1", "n2", "B"], 6)];
        let tl = simulate_packet_flow_network(&network, &flows, &ReleaseSchedule::new(), &SNF_FULL)
            .unwrap();
        let expected = packet_switching_delay(6, 1, &network.link, 2, ArrivalConvention::Full)
            .unwrap()
            .total;
        assert_eq!(tl.completion_time, expected);
    }

    #[test]
    fn shared_bottleneck_completes_at_55() {
        let network = net(&["A", "B", "C", "a", "d", "e"]);
        let flows = [
            flow("A", &["A", "a", "d", "e", "C"], 6),
            flow("B", &["B", "a", "d", "e", "C"], 6),
        ];
        let tl = simulate_packet_flow_network(&network, &flows, &ReleaseSchedule::new(), &SNF_FULL)
            .unwrap();
        assert_eq!(tl.completion_time, Exact::from_int(55));
    }

    #[test]
    fn disjoint_paths_complete_at_49() {
        let network = net(&["A", "B", "C", "a", "b", "c", "d", "e"]);
        let flows = [
            flow("A", &["A", "a", "b", "c", "C"], 6),
            flow("B", &["B", "a", "d", "e", "C"], 6),
        ];
        let tl = simulate_packet_flow_network(&network, &flows, &ReleaseSchedule::new(), &SNF_FULL)
            .unwrap();
        assert_eq!(tl.completion_time, Exact::from_int(49));
    }

    #[test]
    fn releases_hold_packets_back() {
        let network = net(&["A", "B", "C", "a", "b", "c", "d", "e"]);
        let flows = [
            flow("A", &["A", "a", "b", "c", "C"], 6),
            flow("B", &["B", "a", "d", "e", "C"], 6),
        ];
        let mut rel = ReleaseSchedule::new();
        rel.set("A", "a", Exact::from_int(15));
        rel.set("B", "a", Exact::from_int(19));
        let tl = simulate_packet_flow_network(&network, &flows, &rel, &SNF_FULL).unwrap();
        assert_eq!(tl.completion_time, Exact::from_int(57));
        // flow A's last packet lands at 53
        let last_a = tl
            .events
            .iter()
            .filter(|e| {
                e.kind == EventKind::FullArrival
                    && e.actor == "C"
                    && e.detail_token("flow") == Some("A")
            })
            .map(|e| e.time)
            .max()
            .unwrap();
        assert_eq!(last_a, Exact::from_int(53));
    }

    #[test]
    fn fifo_ties_break_by_flow_id_then_seq() {
        let network = net(&["A", "B", "C", "a", "d", "e"]);
        let flows = [
            flow("A", &["A", "a", "d", "e", "C"], 2),
            flow("B", &["B", "a", "d", "e", "C"], 2),
        ];
        let tl = simulate_packet_flow_network(&network, &flows, &ReleaseSchedule::new(), &SNF_FULL)
            .unwrap();
        let order: Vec<(String, String)> = tl
            .events
            .iter()
            .filter(|e| e.kind == EventKind::TxStart && e.actor == "a")
            .map(|e| {
                (
                    e.detail_token("flow").unwrap().to_owned(),
                    e.detail_token("seq").unwrap().to_owned(),
                )
            })
            .collect();
        assert_eq!(
            order,
            [("A", "1"), ("B", "1"), ("A", "2"), ("B", "2")]
                .map(|(f, s)| (f.to_owned(), s.to_owned()))
        );
    }

    #[test]
    fn cut_through_forwards_at_physical_arrival() {
        let network = net(&["A", "n1", "B"]);
        let flows = [flow("A", &["A", "n1", "B"], 1)];
        let tl = simulate_packet_flow_network(
            &network,
            &flows,
            &ReleaseSchedule::new(),
            &Switching::CutThrough,
        )
        .unwrap();
        // two hops of pure propagation: 10 + 10
        assert_eq!(tl.completion_time, Exact::from_int(20));
    }

    #[test]
    fn path_errors_are_reported() {
        let network = net(&["A", "B"]);
        let err = simulate_packet_flow_network(
            &network,
            &[flow("A", &["A", "x"], 1)],
            &ReleaseSchedule::new(),
            &SNF_FULL,
        )
        .unwrap_err();
        assert!(matches!(err, DesError::UnknownNode { .. }));

        let err = simulate_packet_flow_network(
            &network,
            &[flow("A", &["A", "B", "A"], 1)],
            &ReleaseSchedule::new(),
            &SNF_FULL,
        )
        .unwrap_err();
        assert!(matches!(err, DesError::CyclicPath { .. }));

        let err = simulate_packet_flow_network(
            &network,
            &[flow("A", &["A", "B"], 1), flow("B", &["B", "A"], 1)],
            &ReleaseSchedule::new(),
            &SNF_FULL,
        )
        .unwrap_err();
        assert!(matches!(err, DesError::CyclicTopology { .. }));
    }
}
