//! Bit-level simulation of a message crossing a linear chain of
//! store-and-forward nodes.

use crate::scalar::{count, SimScalar};
use crate::scenario::{ArrivalConvention, ChainScenario};
use crate::timeline::{Event, EventKind, Timeline};

/// Names of the chain nodes: source `A`, intermediates `n1..nN`,
/// destination `B`.
pub fn node_names(intermediate_nodes: u32) -> Vec<String> {
    let mut names = vec!["A".to_owned()];
    for i in 1..=intermediate_nodes {
        names.push(format!("n{i}"));
    }
    names.push("B".to_owned());
    names
}

/// Run the chain protocol event by event.
///
/// The source streams the message's bits back to back at rate R. A node
/// may forward a packet only once all P of its bits count as received
/// under the scenario's arrival convention, and only when its output
/// link is free; bits of a packet then depart spaced exactly 1/R.
pub fn simulate_chain<T: SimScalar>(sc: &ChainScenario<T>) -> Timeline<T> {
    let unit = sc.link.unit_time();
    let prop = sc.link.propagation_delay();
    let packets = sc.message_bits / sc.packet_bits;
    let p = sc.packet_bits;
    let links = sc.intermediate_nodes as usize + 1;
    let names = node_names(sc.intermediate_nodes);

    // received offset relative to a bit's TxStart on the previous link
    let recv_offset = match sc.convention {
        ArrivalConvention::Full => unit.clone() + prop.clone(),
        ArrivalConvention::Physical => prop.clone(),
    };
    // the last bit of a packet departs (P-1)/R after the packet's first
    let last_bit_offset = count::<T>(p - 1) * unit.clone();

    let mut events = Vec::new();
    let mut completion = T::zero();
    // departure time of each packet's first bit on the previous link;
    // the source has the whole message at t = 0
    let mut prev_dep: Vec<T> = (0..packets)
        .map(|q| count::<T>(q * p) * unit.clone())
        .collect();

    for j in 0..links {
        let lane = format!("{}->{}", names[j], names[j + 1]);
        let mut link_free: Option<T> = None;
        let mut dep = Vec::with_capacity(prev_dep.len());
        for (q, prev) in prev_dep.iter().enumerate() {
            let eligible = if j == 0 {
                prev.clone()
            } else {
                prev.clone() + last_bit_offset.clone() + recv_offset.clone()
            };
            let start = match &link_free {
                Some(free) if *free > eligible => free.clone(),
                _ => eligible,
            };
            link_free = Some(start.clone() + count::<T>(p) * unit.clone());

            for b in 0..p {
                let bit = q as u64 * p + b + 1;
                let tx = start.clone() + count::<T>(b) * unit.clone();
                let detail = format!("bit={bit} pkt={} link={lane}", q + 1);
                events.push(Event::new(
                    tx.clone(),
                    lane.clone(),
                    EventKind::TxStart,
                    detail.clone(),
                ));
                events.push(Event::new(
                    tx.clone() + unit.clone(),
                    lane.clone(),
                    EventKind::TxEnd,
                    detail.clone(),
                ));
                events.push(Event::new(
                    tx.clone() + unit.clone() + prop.clone(),
                    lane.clone(),
                    EventKind::PhysicalArrival,
                    detail.clone(),
                ));
                let received = tx.clone() + recv_offset.clone();
                events.push(Event::new(
                    received.clone(),
                    lane.clone(),
                    EventKind::FullArrival,
                    detail,
                ));
                if j == links - 1 && received > completion {
                    completion = received;
                }
            }
            dep.push(start);
        }
        prev_dep = dep;
    }

    Timeline::new(events, completion)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::chain_delay;
    use crate::scalar::Exact;
    use crate::scenario::LinkSpec;

    fn scenario(m: u64, p: u64, n: u32, conv: ArrivalConvention) -> ChainScenario<Exact> {
        ChainScenario {
            message_bits: m,
            packet_bits: p,
            intermediate_nodes: n,
            link: LinkSpec {
                bitrate: Exact::from_int(1),
                length: Exact::from_int(10),
                prop_speed: Exact::from_int(1),
            },
            convention: conv,
        }
    }

    #[test]
    fn message_switching_completes_at_88() {
        let tl = simulate_chain(&scenario(12, 12, 3, ArrivalConvention::Full));
        assert_eq!(tl.completion_time, Exact::from_int(88));
    }

    #[test]
    fn packet_switching_completes_at_61() {
        let tl = simulate_chain(&scenario(12, 3, 3, ArrivalConvention::Full));
        assert_eq!(tl.completion_time, Exact::from_int(61));
    }

    #[test]
    fn single_bit_walks_one_link() {
        let tl = simulate_chain(&scenario(1, 1, 0, ArrivalConvention::Physical));
        assert_eq!(tl.completion_time, Exact::from_int(10));
    }

    #[test]
    fn completion_matches_closed_form() {
        for (m, p, n, conv) in [
            (12u64, 3u64, 3u32, ArrivalConvention::Full),
            (12, 12, 3, ArrivalConvention::Full),
            (12, 1, 3, ArrivalConvention::Full),
            (12, 3, 3, ArrivalConvention::Physical),
            (6, 2, 0, ArrivalConvention::Physical),
        ] {
            let sc = scenario(m, p, n, conv);
            let tl = simulate_chain(&sc);
            assert_eq!(
                tl.completion_time,
                chain_delay(&sc).unwrap().total,
                "{m}/{p}/{n} {conv:?}"
            );
        }
    }

    #[test]
    fn bit_events_are_causal() {
        let tl = simulate_chain(&scenario(12, 3, 3, ArrivalConvention::Full));
        // per unit: TxStart < TxEnd <= PhysicalArrival
        let mut by_unit: std::collections::BTreeMap<(String, String), Vec<(EventKind, Exact)>> =
            Default::default();
        for ev in &tl.events {
            let key = (ev.actor.clone(), ev.detail_token("bit").unwrap().to_owned());
            by_unit.entry(key).or_default().push((ev.kind, ev.time));
        }
        for ((lane, bit), evs) in by_unit {
            let t = |k: EventKind| evs.iter().find(|(kind, _)| *kind == k).unwrap().1;
            assert!(
                t(EventKind::TxStart) < t(EventKind::TxEnd),
                "{lane} bit {bit}"
            );
            assert!(
                t(EventKind::TxEnd) <= t(EventKind::PhysicalArrival),
                "{lane} bit {bit}"
            );
        }
    }

    #[test]
    fn link_pacing_spaces_tx_starts_by_unit_time() {
        let tl = simulate_chain(&scenario(12, 4, 2, ArrivalConvention::Full));
        let mut per_lane: std::collections::BTreeMap<String, Vec<Exact>> = Default::default();
        for ev in &tl.events {
            if ev.kind == EventKind::TxStart {
                per_lane.entry(ev.actor.clone()).or_default().push(ev.time);
            }
        }
        for (lane, mut times) in per_lane {
            times.sort();
            for w in times.windows(2) {
                assert!(w[1] - w[0] >= Exact::from_int(1), "{lane}");
            }
        }
    }
}
