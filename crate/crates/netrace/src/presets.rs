//! Named scenario presets for the worked examples, so races run without
//! a hand-written config file.

use crate::scalar::Exact;
use crate::scenario::{
    ArrivalConvention, CacheSpec, ChainScenario, ConfigStyle, ControllerLeg, LinkSpec,
    RachScenario, ReleasePolicy, RouteMode, RunnerLink, ScenarioFile, SdnScenario, Strategy,
    Switching, WebScenario,
};

pub const PRESET_NAMES: [&str; 4] = [
    "paper-linear",
    "paper-http",
    "paper-http-parallel",
    "paper-sdn",
];

fn int(v: i64) -> Exact {
    Exact::from_int(v)
}

/// Look up a preset scenario file by name.
pub fn preset(name: &str) -> Option<ScenarioFile<Exact>> {
    let mut file = ScenarioFile::default();
    match name {
        // 12-bit message, 3-bit packets, three intermediate nodes,
        // 10 m links walked at 1 m/s: 88 s vs 61 s
        "paper-linear" => {
            file.chain = Some(ChainScenario {
                message_bits: 12,
                packet_bits: 3,
                intermediate_nodes: 3,
                link: LinkSpec {
                    bitrate: int(1),
                    length: int(10),
                    prop_speed: int(1),
                },
                convention: ArrivalConvention::Full,
            });
        }
        // 3-bit base page, three 6-bit objects, one connection at a
        // time over a 10 s round trip: 101 s; the 3 m cache brings the
        // embedded rounds down to a 2 s round trip
        "paper-http" => {
            file.web = Some(WebScenario {
                base_bits: 3,
                embedded_objects: vec![6, 6, 6],
                parallel_connections: 1,
                server_link: RunnerLink {
                    length: int(15),
                    runner_speed: int(3),
                    bitrate: int(1),
                },
                cache: Some(CacheSpec {
                    length: int(3),
                    runner_speed: int(3),
                    bitrate: int(1),
                    cached_objects: None,
                }),
            });
        }
        // six 3-bit objects over two parallel connections: 92 s
        "paper-http-parallel" => {
            file.web = Some(WebScenario {
                base_bits: 3,
                embedded_objects: vec![3; 6],
                parallel_connections: 2,
                server_link: RunnerLink {
                    length: int(15),
                    runner_speed: int(3),
                    bitrate: int(1),
                },
                cache: None,
            });
        }
        // six packets per source, 2 m controller leg at walking pace:
        // each query round trip costs 4 s
        "paper-sdn" => {
            file.sdn = Some(SdnScenario {
                flow_size: 6,
                link: LinkSpec {
                    bitrate: int(1),
                    length: int(10),
                    prop_speed: int(1),
                },
                controller_leg: ControllerLeg {
                    distance: int(2),
                    runner_speed: None,
                },
                mode: RouteMode::SdnCentral,
                switching: Switching::StoreAndForward {
                    convention: ArrivalConvention::Full,
                },
                config_style: ConfigStyle::SingleRunnerAtA,
                hypervisor: None,
                release: ReleasePolicy::PerFlowRelease,
            });
        }
        _ => return None,
    }
    Some(file)
}

/// The twelve-phones-four-slots game used by the chair race.
pub fn default_rach(strategy: Strategy, seed: u64) -> RachScenario {
    RachScenario {
        contenders: 12,
        slots: 4,
        strategy,
        seed,
        max_rounds: 10_000,
    }
}
