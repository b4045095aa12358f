//! Scenario configurations for the four race activities, their invariant
//! checks and the on-disk config format.
//!
//! A scenario file is a single JSON document with one top-level key per
//! scenario kind (`chain`, `web`, `rach`, `sdn`); unknown keys are
//! rejected. Field names match the type definitions below.

use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// When a transmitted unit counts as received at the far end of a link.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArrivalConvention {
    /// Received 1/R after the physical arrival (a unit's transmission
    /// occupies 1/R on the wire).
    Full,
    /// Received at the physical arrival instant.
    Physical,
}

/// One point-to-point link: transmission bitrate R, physical length l and
/// propagation speed s.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSpec<T> {
    pub bitrate: T,
    pub length: T,
    pub prop_speed: T,
}

impl<T: Scalar> LinkSpec<T> {
    /// Time to transmit one unit (bit or packet): 1/R.
    pub fn unit_time(&self) -> T {
        T::one() / self.bitrate.clone()
    }

    /// One-way propagation delay: l/s.
    pub fn propagation_delay(&self) -> T {
        self.length.clone() / self.prop_speed.clone()
    }

    fn validate_into(&self, prefix: &str, out: &mut Vec<Violation>) {
        if self.bitrate <= T::zero() {
            out.push(Violation::new(
                format!("{prefix}bitrate"),
                format!("{prefix}bitrate must be positive"),
            ));
        }
        if self.prop_speed <= T::zero() {
            out.push(Violation::new(
                format!("{prefix}prop_speed"),
                format!("{prefix}prop_speed must be positive"),
            ));
        }
        if self.length < T::zero() {
            out.push(Violation::new(
                format!("{prefix}length"),
                format!("{prefix}length must be non-negative"),
            ));
        }
    }
}

/// Message transfer over a linear chain of store-and-forward nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainScenario<T> {
    /// Message size M in bits.
    pub message_bits: u64,
    /// Packet size P in bits; must divide `message_bits`. Message
    /// switching is the special case P = M.
    pub packet_bits: u64,
    /// Number N of intermediate nodes between source and destination,
    /// i.e. N + 1 identical links.
    pub intermediate_nodes: u32,
    pub link: LinkSpec<T>,
    pub convention: ArrivalConvention,
}

impl<T: Scalar> ChainScenario<T> {
    /// The same chain run as message switching (one packet carries the
    /// whole message).
    pub fn as_message_switching(&self) -> Self {
        let mut sc = self.clone();
        sc.packet_bits = sc.message_bits;
        sc
    }
}

/// Link between web client and a server (or cache), walked by runners.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunnerLink<T> {
    pub length: T,
    pub runner_speed: T,
    pub bitrate: T,
}

impl<T: Scalar> RunnerLink<T> {
    /// Round-trip time 2·l/s.
    pub fn rtt(&self) -> T {
        let two = T::one() + T::one();
        two * self.length.clone() / self.runner_speed.clone()
    }

    fn validate_into(&self, prefix: &str, out: &mut Vec<Violation>) {
        if self.bitrate <= T::zero() {
            out.push(Violation::new(
                format!("{prefix}bitrate"),
                format!("{prefix}bitrate must be positive"),
            ));
        }
        if self.runner_speed <= T::zero() {
            out.push(Violation::new(
                format!("{prefix}runner_speed"),
                format!("{prefix}runner_speed must be positive"),
            ));
        }
        if self.length < T::zero() {
            out.push(Violation::new(
                format!("{prefix}length"),
                format!("{prefix}length must be non-negative"),
            ));
        }
    }
}

/// A nearby cache holding some of the embedded objects. The base page is
/// always fetched from the distant server.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    deny_unknown_fields,
    bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>")
)]
pub struct CacheSpec<T> {
    pub length: T,
    pub runner_speed: T,
    pub bitrate: T,
    /// Indices (0-based) into `embedded_objects` held by the cache.
    /// Omitted means every embedded object is cached.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cached_objects: Option<Vec<usize>>,
}

impl<T: Scalar> CacheSpec<T> {
    pub fn rtt(&self) -> T {
        let two = T::one() + T::one();
        two * self.length.clone() / self.runner_speed.clone()
    }
}

/// Non-persistent HTTP page download: a base page plus embedded objects,
/// fetched over up to C parallel connections.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    deny_unknown_fields,
    bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>")
)]
pub struct WebScenario<T> {
    /// Base page size b in bits.
    pub base_bits: u64,
    /// Embedded object sizes in bits, in request order.
    pub embedded_objects: Vec<u64>,
    /// Number C of parallel connections per round.
    pub parallel_connections: u64,
    pub server_link: RunnerLink<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache: Option<CacheSpec<T>>,
}

/// One round of parallel object fetches, all from the same origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectRound {
    /// Indices into `embedded_objects`, in listed order.
    pub objects: Vec<usize>,
    pub from_cache: bool,
}

impl<T: Scalar> WebScenario<T> {
    pub fn server_rtt(&self) -> T {
        self.server_link.rtt()
    }

    pub fn cache_rtt(&self) -> Option<T> {
        self.cache.as_ref().map(|c| c.rtt())
    }

    /// The set of cached object indices (empty when there is no cache).
    pub fn cached_set(&self) -> BTreeSet<usize> {
        match &self.cache {
            None => BTreeSet::new(),
            Some(c) => match &c.cached_objects {
                None => (0..self.embedded_objects.len()).collect(),
                Some(list) => list.iter().copied().collect(),
            },
        }
    }

    /// Group the embedded objects into rounds of up to C, in listed
    /// order. When the cache is in use, a round only mixes objects from
    /// one origin: cached objects come from the cache, the rest from the
    /// server in their own rounds.
    pub fn object_rounds(&self, use_cache: bool) -> Vec<ObjectRound> {
        let cached = if use_cache {
            self.cached_set()
        } else {
            BTreeSet::new()
        };
        let c = self.parallel_connections.max(1) as usize;
        let mut rounds: Vec<ObjectRound> = Vec::new();
        for idx in 0..self.embedded_objects.len() {
            let from_cache = cached.contains(&idx);
            match rounds.last_mut() {
                Some(r) if r.from_cache == from_cache && r.objects.len() < c => {
                    r.objects.push(idx);
                }
                _ => rounds.push(ObjectRound {
                    objects: vec![idx],
                    from_cache,
                }),
            }
        }
        rounds
    }
}

/// How phones pick slots in the connection-establishment game.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Every active contender picks a slot uniformly at random each round.
    Uncoordinated,
    /// Contenders agree on slots beforehand: S-1 sit alone, the rest pile
    /// onto the last slot.
    Coordinated,
    /// Only some contenders are admitted at first; the rest join later.
    Barring {
        initially_admitted: u64,
        policy: BarringPolicy,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BarringPolicy {
    /// Admit the whole barred batch once every admitted contender has
    /// connected.
    BatchAfterDrain,
    /// Admit k more barred contenders at the start of every round after
    /// the first.
    AdmitPerRound { k: u64 },
}

fn default_max_rounds() -> u32 {
    10_000
}

/// Slotted random-access connection establishment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RachScenario {
    /// Number of phones that need to connect.
    pub contenders: u64,
    /// Number S of request slots per round.
    pub slots: u64,
    pub strategy: Strategy,
    pub seed: u64,
    /// Safety cap; a trial that has not drained by then is flagged.
    #[serde(default = "default_max_rounds")]
    pub max_rounds: u32,
}

/// Which routing variant an SDN scenario describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RouteMode {
    /// Destination-based routing: both flows share the bottom route.
    ClassicIp,
    /// Controller splits the flows over the top and bottom routes.
    SdnCentral,
}

/// Forwarding discipline at intermediate nodes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Switching {
    StoreAndForward {
        convention: ArrivalConvention,
    },
    /// Forwarding may begin at physical arrival; the link still paces at
    /// one packet per 1/R.
    CutThrough,
}

/// How controller decisions reach the switches.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConfigStyle<T> {
    /// One runner at node `a` carries each query to the controller and
    /// brings the policy back.
    SingleRunnerAtA,
    /// The controller dispatches an individual runner to every node on a
    /// flow's route; distances are from the controller to each node.
    PerNodeRunners {
        distances: std::collections::BTreeMap<String, T>,
    },
}

/// Control leg from node `a` to the controller.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    deny_unknown_fields,
    bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>")
)]
pub struct ControllerLeg<T> {
    pub distance: T,
    /// Runner speed on control legs; defaults to the data links'
    /// propagation speed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runner_speed: Option<T>,
}

/// Virtualized control plane: every control leg detours through a
/// hypervisor between node and controller, in both directions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Hypervisor<T> {
    /// Distance controller <-> hypervisor.
    pub controller_leg: T,
    /// Distance hypervisor <-> node.
    pub node_leg: T,
}

/// When held flows at a node may start forwarding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReleasePolicy {
    /// Each flow is released as soon as its own policy is back.
    PerFlowRelease,
    /// Both flows wait until both queries have completed.
    AfterBothQueries,
}

/// The two-source routing race: sources A and B send F packets each to
/// destination C through the fixed five-node network.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    deny_unknown_fields,
    bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>")
)]
pub struct SdnScenario<T> {
    /// Packets per source flow.
    pub flow_size: u64,
    /// All data links are identical.
    pub link: LinkSpec<T>,
    pub controller_leg: ControllerLeg<T>,
    pub mode: RouteMode,
    pub switching: Switching,
    pub config_style: ConfigStyle<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypervisor: Option<Hypervisor<T>>,
    pub release: ReleasePolicy,
}

impl<T: Scalar> SdnScenario<T> {
    /// Runner speed on control legs (defaults to the data prop speed).
    pub fn runner_speed(&self) -> T {
        self.controller_leg
            .runner_speed
            .clone()
            .unwrap_or_else(|| self.link.prop_speed.clone())
    }
}

// ---------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------

/// A broken invariant: names the field and the violated rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl Violation {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Violation {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Scenario invariant checking. An empty list means the scenario is
/// accepted; violations are data, not failures.
pub trait Validate {
    fn validate(&self) -> Vec<Violation>;
}

impl<T: Scalar> Validate for LinkSpec<T> {
    fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        self.validate_into("", &mut out);
        out
    }
}

impl<T: Scalar> Validate for ChainScenario<T> {
    fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.message_bits == 0 {
            out.push(Violation::new(
                "message_bits",
                "message_bits must be at least 1",
            ));
        }
        if self.packet_bits == 0 {
            out.push(Violation::new(
                "packet_bits",
                "packet_bits must be at least 1",
            ));
        }
        if self.packet_bits > self.message_bits {
            out.push(Violation::new(
                "packet_bits",
                "packet_bits must not exceed message_bits",
            ));
        }
        if self.packet_bits >= 1 && !self.message_bits.is_multiple_of(self.packet_bits) {
            out.push(Violation::new(
                "packet_bits",
                "packet_bits must divide message_bits",
            ));
        }
        self.link.validate_into("link.", &mut out);
        out
    }
}

impl<T: Scalar> Validate for WebScenario<T> {
    fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.base_bits == 0 {
            out.push(Violation::new("base_bits", "base_bits must be at least 1"));
        }
        if self.parallel_connections == 0 {
            out.push(Violation::new(
                "parallel_connections",
                "parallel_connections must be at least 1",
            ));
        }
        for (i, size) in self.embedded_objects.iter().enumerate() {
            if *size == 0 {
                out.push(Violation::new(
                    format!("embedded_objects[{i}]"),
                    format!("embedded_objects[{i}] must be at least 1"),
                ));
            }
        }
        self.server_link.validate_into("server_link.", &mut out);
        if let Some(cache) = &self.cache {
            RunnerLink {
                length: cache.length.clone(),
                runner_speed: cache.runner_speed.clone(),
                bitrate: cache.bitrate.clone(),
            }
            .validate_into("cache.", &mut out);
            if let Some(list) = &cache.cached_objects {
                let mut seen = BTreeSet::new();
                for idx in list {
                    if *idx >= self.embedded_objects.len() {
                        out.push(Violation::new(
                            "cache.cached_objects",
                            format!("cache.cached_objects index {idx} is out of range"),
                        ));
                    } else if !seen.insert(*idx) {
                        out.push(Violation::new(
                            "cache.cached_objects",
                            format!("cache.cached_objects contains duplicate index {idx}"),
                        ));
                    }
                }
            }
        }
        out
    }
}

impl Validate for RachScenario {
    fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.contenders == 0 {
            out.push(Violation::new(
                "contenders",
                "contenders must be at least 1",
            ));
        }
        if self.slots == 0 {
            out.push(Violation::new("slots", "slots must be at least 1"));
        }
        if self.max_rounds == 0 {
            out.push(Violation::new(
                "max_rounds",
                "max_rounds must be at least 1",
            ));
        }
        if let Strategy::Barring {
            initially_admitted,
            policy,
        } = &self.strategy
        {
            if *initially_admitted == 0 {
                out.push(Violation::new(
                    "strategy.initially_admitted",
                    "strategy.initially_admitted must be at least 1",
                ));
            }
            if *initially_admitted > self.contenders {
                out.push(Violation::new(
                    "strategy.initially_admitted",
                    "strategy.initially_admitted must not exceed contenders",
                ));
            }
            if let BarringPolicy::AdmitPerRound { k } = policy {
                if *k == 0 {
                    out.push(Violation::new(
                        "strategy.policy.k",
                        "strategy.policy.k must be at least 1",
                    ));
                }
            }
        }
        out
    }
}

/// Intermediate nodes of the fixed routing-race topology.
pub const SDN_INNER_NODES: [&str; 5] = ["a", "b", "c", "d", "e"];

impl<T: Scalar> Validate for SdnScenario<T> {
    fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.flow_size == 0 {
            out.push(Violation::new("flow_size", "flow_size must be at least 1"));
        }
        self.link.validate_into("link.", &mut out);
        if self.controller_leg.distance < T::zero() {
            out.push(Violation::new(
                "controller_leg.distance",
                "controller_leg.distance must be non-negative",
            ));
        }
        if let Some(speed) = &self.controller_leg.runner_speed {
            if *speed <= T::zero() {
                out.push(Violation::new(
                    "controller_leg.runner_speed",
                    "controller_leg.runner_speed must be positive",
                ));
            }
        }
        if let ConfigStyle::PerNodeRunners { distances } = &self.config_style {
            for node in SDN_INNER_NODES {
                match distances.get(node) {
                    None => out.push(Violation::new(
                        "config_style.distances",
                        format!("config_style.distances must map node {node}"),
                    )),
                    Some(d) if *d < T::zero() => out.push(Violation::new(
                        "config_style.distances",
                        format!("config_style.distances[{node}] must be non-negative"),
                    )),
                    _ => {}
                }
            }
            for node in distances.keys() {
                if !SDN_INNER_NODES.contains(&node.as_str()) {
                    out.push(Violation::new(
                        "config_style.distances",
                        format!("config_style.distances has unknown node {node}"),
                    ));
                }
            }
        }
        if let Some(h) = &self.hypervisor {
            if h.controller_leg < T::zero() {
                out.push(Violation::new(
                    "hypervisor.controller_leg",
                    "hypervisor.controller_leg must be non-negative",
                ));
            }
            if h.node_leg < T::zero() {
                out.push(Violation::new(
                    "hypervisor.node_leg",
                    "hypervisor.node_leg must be non-negative",
                ));
            }
        }
        out
    }
}

// ---------------------------------------------------------------------
// Scenario file
// ---------------------------------------------------------------------

/// A parsed scenario file: at most one scenario of each kind.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(
    deny_unknown_fields,
    bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>")
)]
pub struct ScenarioFile<T> {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainScenario<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub web: Option<WebScenario<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rach: Option<RachScenario>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sdn: Option<SdnScenario<T>>,
}

/// Error reading a scenario file.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot parse scenario file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("cannot read scenario file: {0}")]
    Io(#[from] std::io::Error),
}

impl<T: Scalar + Serialize + for<'de> Deserialize<'de>> ScenarioFile<T> {
    pub fn parse_str(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("scenario serializes");
        out.push('\n');
        out
    }

    /// Validate every scenario present; each violation's field is
    /// prefixed with the scenario kind. A file with no scenario at all
    /// is itself a violation.
    pub fn validate_all(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut any = false;
        let mut extend = |kind: &str, violations: Vec<Violation>| {
            for v in violations {
                out.push(Violation::new(
                    format!("{kind}.{}", v.field),
                    format!("{kind}: {}", v.message),
                ));
            }
        };
        if let Some(sc) = &self.chain {
            any = true;
            extend("chain", sc.validate());
        }
        if let Some(sc) = &self.web {
            any = true;
            extend("web", sc.validate());
        }
        if let Some(sc) = &self.rach {
            any = true;
            extend("rach", sc.validate());
        }
        if let Some(sc) = &self.sdn {
            any = true;
            extend("sdn", sc.validate());
        }
        if !any {
            out.push(Violation::new("", "file contains no scenario"));
        }
        out
    }
}
