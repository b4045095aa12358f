//! The routing race on the fixed two-source topology: classic
//! destination-based routing versus controller-optimized routing, with
//! controller query latency, release policies, per-node configuration
//! runners and an optional hypervisor detour.

use crate::des::{simulate_packet_flow_network, DesError, Flow, FlowNetwork, ReleaseSchedule};
use crate::report::{compare_races, RaceReport};
use crate::scalar::SimScalar;
use crate::scenario::{
    ArrivalConvention, ConfigStyle, ReleasePolicy, RouteMode, SdnScenario, Switching,
};
use crate::timeline::{Event, EventKind, Timeline};

/// All nodes of the race topology.
pub const NODES: [&str; 8] = ["A", "B", "C", "a", "b", "c", "d", "e"];
/// Top route for the A flow under optimized routing.
pub const PATH_TOP: [&str; 5] = ["A", "a", "b", "c", "C"];
/// Bottom route, shared by both flows under classic routing.
pub const PATH_BOTTOM_A: [&str; 5] = ["A", "a", "d", "e", "C"];
pub const PATH_BOTTOM_B: [&str; 5] = ["B", "a", "d", "e", "C"];

pub const LABEL_IP: &str = "classic ip";
pub const LABEL_SDN: &str = "sdn";

/// Both simulations plus the comparison summary.
#[derive(Clone, Debug, PartialEq)]
pub struct RaceRun<T> {
    pub report: RaceReport<T>,
    pub ip: Timeline<T>,
    pub sdn: Timeline<T>,
}

fn to_flows(paths: &[(&str, &[&str])], packets: u64) -> Vec<Flow> {
    paths
        .iter()
        .map(|(id, path)| Flow {
            id: (*id).to_owned(),
            path: path.iter().map(|s| (*s).to_owned()).collect(),
            packets,
        })
        .collect()
}

fn network<T: SimScalar>(sc: &SdnScenario<T>) -> FlowNetwork<T> {
    FlowNetwork {
        nodes: NODES.iter().map(|s| (*s).to_owned()).collect(),
        link: sc.link.clone(),
    }
}

/// Arrival instant of the first packet at node `a`, which triggers the
/// first controller query.
fn first_arrival_at_a<T: SimScalar>(sc: &SdnScenario<T>) -> T {
    let prop = sc.link.propagation_delay();
    match sc.switching {
        Switching::StoreAndForward {
            convention: ArrivalConvention::Full,
        } => prop + sc.link.unit_time(),
        _ => prop,
    }
}

/// One-way control-leg time between `node` and the controller. With a
/// hypervisor every leg detours node -> hypervisor -> controller.
fn one_way_leg<T: SimScalar>(sc: &SdnScenario<T>, node: &str) -> T {
    let speed = sc.runner_speed();
    if let Some(h) = &sc.hypervisor {
        return (h.node_leg.clone() + h.controller_leg.clone()) / speed;
    }
    let distance = match &sc.config_style {
        ConfigStyle::SingleRunnerAtA => sc.controller_leg.distance.clone(),
        ConfigStyle::PerNodeRunners { distances } => distances
            .get(node)
            .cloned()
            .unwrap_or_else(|| sc.controller_leg.distance.clone()),
    };
    distance / speed
}

/// Release times for the optimized configuration plus the control-plane
/// events to splice into its timeline.
fn sdn_releases<T: SimScalar>(sc: &SdnScenario<T>) -> (ReleaseSchedule<T>, Vec<Event<T>>) {
    let t1 = first_arrival_at_a(sc);
    let two = T::one() + T::one();
    let mut releases = ReleaseSchedule::new();
    let mut events = Vec::new();

    match &sc.config_style {
        ConfigStyle::SingleRunnerAtA => {
            // the runner at a makes one round trip per flow, A first
            let leg = one_way_leg(sc, "a");
            let t_q = two * leg;
            let back_a = t1.clone() + t_q.clone();
            let back_b = back_a.clone() + t_q;
            events.push(Event::new(
                t1.clone(),
                "a",
                EventKind::QueryDispatch,
                "flow=A".to_owned(),
            ));
            events.push(Event::new(
                back_a.clone(),
                "a",
                EventKind::QueryReturn,
                "flow=A".to_owned(),
            ));
            events.push(Event::new(
                back_a.clone(),
                "a",
                EventKind::QueryDispatch,
                "flow=B".to_owned(),
            ));
            events.push(Event::new(
                back_b.clone(),
                "a",
                EventKind::QueryReturn,
                "flow=B".to_owned(),
            ));
            let (rel_a, rel_b) = match sc.release {
                ReleasePolicy::PerFlowRelease => (back_a, back_b.clone()),
                ReleasePolicy::AfterBothQueries => (back_b.clone(), back_b),
            };
            releases.set("A", "a", rel_a);
            releases.set("B", "a", rel_b);
        }
        ConfigStyle::PerNodeRunners { .. } => {
            // the query for A reaches the controller, which fans runners
            // out to the flow's nodes; the carrier then returns to a and
            // takes the B query up
            let up_a = one_way_leg(sc, "a");
            let query_a = t1.clone() + up_a.clone();
            let query_b = t1.clone() + up_a.clone() + two * up_a;
            let (at_a, at_b) = match sc.release {
                ReleasePolicy::PerFlowRelease => (query_a, query_b.clone()),
                ReleasePolicy::AfterBothQueries => (query_b.clone(), query_b),
            };
            events.push(Event::new(
                t1,
                "a",
                EventKind::QueryDispatch,
                "flow=A".to_owned(),
            ));
            for (flow, at_controller, nodes) in
                [("A", at_a, ["a", "b", "c"]), ("B", at_b, ["a", "d", "e"])]
            {
                for node in nodes {
                    let arrive = at_controller.clone() + one_way_leg(sc, node);
                    releases.set(flow, node, arrive.clone());
                    events.push(Event::new(
                        arrive,
                        node,
                        EventKind::QueryReturn,
                        format!("flow={flow} node={node}"),
                    ));
                }
            }
        }
    }
    (releases, events)
}

/// Simulate the classic destination-routed configuration: both flows on
/// the bottom route, no holds.
pub fn simulate_ip<T: SimScalar>(sc: &SdnScenario<T>) -> Result<Timeline<T>, DesError> {
    let flows = to_flows(
        &[("A", &PATH_BOTTOM_A), ("B", &PATH_BOTTOM_B)],
        sc.flow_size,
    );
    simulate_packet_flow_network(&network(sc), &flows, &ReleaseSchedule::new(), &sc.switching)
}

/// Simulate the controller-optimized configuration: the A flow takes the
/// top route once its policy is back at the switch.
pub fn simulate_sdn<T: SimScalar>(sc: &SdnScenario<T>) -> Result<Timeline<T>, DesError> {
    let flows = to_flows(&[("A", &PATH_TOP), ("B", &PATH_BOTTOM_B)], sc.flow_size);
    let (releases, control_events) = sdn_releases(sc);
    let tl = simulate_packet_flow_network(&network(sc), &flows, &releases, &sc.switching)?;
    let completion = tl.completion_time.clone();
    let mut events = tl.events;
    events.extend(control_events);
    Ok(Timeline::new(events, completion))
}

/// Simulate the configuration named by the scenario's `mode`.
pub fn simulate<T: SimScalar>(sc: &SdnScenario<T>) -> Result<Timeline<T>, DesError> {
    match sc.mode {
        RouteMode::ClassicIp => simulate_ip(sc),
        RouteMode::SdnCentral => simulate_sdn(sc),
    }
}

/// Race both configurations and report completion times, winner and
/// margin.
pub fn run_race<T: SimScalar>(sc: &SdnScenario<T>) -> Result<RaceRun<T>, DesError> {
    let ip = simulate_ip(sc)?;
    let sdn = simulate_sdn(sc)?;
    let report = compare_races(&ip, &sdn, LABEL_IP, LABEL_SDN);
    Ok(RaceRun { report, ip, sdn })
}

/// One row of a flow-size sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow<T> {
    pub flow_size: u64,
    pub ip_seconds: T,
    pub sdn_seconds: T,
}

/// Completion times for every flow size 1..=f_max.
pub fn sweep<T: SimScalar>(sc: &SdnScenario<T>, f_max: u64) -> Result<Vec<SweepRow<T>>, DesError> {
    let mut rows = Vec::new();
    for f in 1..=f_max {
        let mut sc = sc.clone();
        sc.flow_size = f;
        let run = run_race(&sc)?;
        rows.push(SweepRow {
            flow_size: f,
            ip_seconds: run.ip.completion_time,
            sdn_seconds: run.sdn.completion_time,
        });
    }
    Ok(rows)
}

/// Smallest flow size in 1..=f_max at which the optimized configuration
/// finishes strictly first, if any.
pub fn break_even_flow_size<T: SimScalar>(
    sc: &SdnScenario<T>,
    f_max: u64,
) -> Result<Option<u64>, DesError> {
    for row in sweep(sc, f_max)? {
        if row.sdn_seconds < row.ip_seconds {
            return Ok(Some(row.flow_size));
        }
    }
    Ok(None)
}
