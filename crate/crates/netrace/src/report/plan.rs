//! Role assignments and ground markings for running a race with a class.

use crate::analytic::{
    cached_download_delay, chain_delay, message_switching_delay, web_download_delay,
};
use crate::random_access::{coordinated_rounds, expected_rounds_exact};
use crate::scalar::{count, format_seconds, Exact, SimScalar};
use crate::scenario::{ChainScenario, ConfigStyle, RachScenario, SdnScenario, WebScenario};
use crate::sdn_race;
use num_traits::ToPrimitive;

/// Roles a class member can take.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Role {
    SourceStaff,
    NodeStaff,
    BitStudent,
    PacketStudent,
    ControlRunner,
    RecordKeeper,
    Client,
    Server,
    TcpRunner,
    HttpRunner,
}

impl Role {
    pub fn label(self) -> &'static str {
        match self {
            Role::SourceStaff => "source staff",
            Role::NodeStaff => "node staff",
            Role::BitStudent => "bit student",
            Role::PacketStudent => "packet student",
            Role::ControlRunner => "control runner",
            Role::RecordKeeper => "record keeper",
            Role::Client => "client",
            Role::Server => "server",
            Role::TcpRunner => "tcp runner",
            Role::HttpRunner => "http runner",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoleAssignment {
    pub role: Role,
    pub count: u64,
    pub note: String,
}

/// A ground marking: a line between two points of a given length.
#[derive(Clone, Debug, PartialEq)]
pub struct Marking<T> {
    pub from: String,
    pub to: String,
    pub distance: T,
}

/// A complete plan for one class: who does what, what to draw on the
/// ground, and the delays the formulas predict.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldPlan<T> {
    pub scenario: String,
    pub class_size: u64,
    pub roles: Vec<RoleAssignment>,
    pub markings: Vec<Marking<T>>,
    pub predicted_times: Vec<(String, T)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlanError {
    #[error("class of {class_size} is too small: this scenario needs at least {required}")]
    ClassTooSmall { class_size: u64, required: u64 },
}

/// Scenario to plan for.
#[derive(Clone, Copy, Debug)]
pub enum PlanInput<'a, T> {
    Chain(&'a ChainScenario<T>),
    Web(&'a WebScenario<T>),
    Rach(&'a RachScenario),
    Sdn(&'a SdnScenario<T>),
}

/// Assign every class member a role for the given scenario. Mandatory
/// roles come first; leftover students become record keepers and then
/// node staff. Role counts always sum to the class size.
pub fn field_plan<T: SimScalar>(
    input: PlanInput<'_, T>,
    class_size: u64,
) -> Result<FieldPlan<T>, PlanError> {
    match input {
        PlanInput::Chain(sc) => plan_chain(sc, class_size),
        PlanInput::Web(sc) => plan_web(sc, class_size),
        PlanInput::Rach(sc) => plan_rach(sc, class_size),
        PlanInput::Sdn(sc) => plan_sdn(sc, class_size),
    }
}

struct RoleBudget {
    class_size: u64,
    left: u64,
    roles: Vec<RoleAssignment>,
}

impl RoleBudget {
    fn start(class_size: u64, required: u64) -> Result<Self, PlanError> {
        if class_size < required {
            return Err(PlanError::ClassTooSmall {
                class_size,
                required,
            });
        }
        Ok(RoleBudget {
            class_size,
            left: class_size,
            roles: Vec::new(),
        })
    }

    fn mandatory(&mut self, role: Role, n: u64, note: impl Into<String>) {
        debug_assert!(n <= self.left);
        self.left -= n;
        self.roles.push(RoleAssignment {
            role,
            count: n,
            note: note.into(),
        });
    }

    fn optional(&mut self, role: Role, up_to: u64, note: impl Into<String>) {
        let n = up_to.min(self.left);
        if n > 0 {
            self.left -= n;
            self.roles.push(RoleAssignment {
                role,
                count: n,
                note: note.into(),
            });
        }
    }

    fn finish(mut self, overflow_note: &str) -> Vec<RoleAssignment> {
        if self.left > 0 {
            self.roles.push(RoleAssignment {
                role: Role::NodeStaff,
                count: self.left,
                note: overflow_note.to_owned(),
            });
        }
        let total: u64 = self.roles.iter().map(|r| r.count).sum();
        debug_assert_eq!(total, self.class_size);
        self.roles
    }
}

fn chain_markings<T: SimScalar>(sc: &ChainScenario<T>, prefix: &str) -> Vec<Marking<T>> {
    let names = crate::des::chain_node_names(sc.intermediate_nodes);
    names
        .windows(2)
        .map(|w| Marking {
            from: format!("{prefix}{}", w[0]),
            to: format!("{prefix}{}", w[1]),
            distance: sc.link.length.clone(),
        })
        .collect()
}

fn plan_chain<T: SimScalar>(
    sc: &ChainScenario<T>,
    class_size: u64,
) -> Result<FieldPlan<T>, PlanError> {
    let m = sc.message_bits;
    let mut budget = RoleBudget::start(class_size, 2 * m)?;
    budget.mandatory(
        Role::BitStudent,
        2 * m,
        format!(
            "two competing groups of {m}: one runs message switching, one runs packet switching"
        ),
    );
    budget.optional(Role::RecordKeeper, 2, "one stopwatch per group");
    budget.optional(Role::SourceStaff, 2, "pace departures at the sources");
    let roles = budget.finish("monitor the intermediate nodes");

    let mut markings = chain_markings(sc, "msg:");
    markings.extend(chain_markings(sc, "pkt:"));

    let packet = chain_delay(sc).expect("validated scenario");
    let message = message_switching_delay(
        sc.message_bits,
        &sc.link,
        sc.intermediate_nodes,
        sc.convention,
    );
    Ok(FieldPlan {
        scenario: "message vs packet switching race".to_owned(),
        class_size,
        roles,
        markings,
        predicted_times: vec![
            ("message switching".to_owned(), message),
            ("packet switching".to_owned(), packet.total),
        ],
    })
}

fn plan_web<T: SimScalar>(sc: &WebScenario<T>, class_size: u64) -> Result<FieldPlan<T>, PlanError> {
    let c = sc.parallel_connections;
    // object students walk simultaneously within a round and are reused
    // across rounds
    let object_students = sc
        .object_rounds(sc.cache.is_some())
        .iter()
        .map(|r| {
            r.objects
                .iter()
                .map(|i| sc.embedded_objects[*i])
                .sum::<u64>()
        })
        .max()
        .unwrap_or(0);
    let required = 2 + 2 * c + sc.base_bits + object_students;
    let mut budget = RoleBudget::start(class_size, required)?;
    budget.mandatory(Role::Client, 1, "assembles the page");
    budget.mandatory(Role::Server, 1, "holds the base page and objects");
    budget.mandatory(
        Role::TcpRunner,
        c,
        "one connection rope per parallel connection",
    );
    budget.mandatory(Role::HttpRunner, c, "carry the requests");
    budget.mandatory(Role::BitStudent, sc.base_bits, "base page slices");
    if object_students > 0 {
        budget.mandatory(
            Role::BitStudent,
            object_students,
            "embedded object bits, reused every round",
        );
    }
    budget.optional(Role::RecordKeeper, 1, "stopwatch");
    let roles = budget.finish("staff the server and cache positions");

    let mut markings = vec![Marking {
        from: "client".to_owned(),
        to: "server".to_owned(),
        distance: sc.server_link.length.clone(),
    }];
    let mut predicted = vec![("web page download".to_owned(), web_download_delay(sc))];
    if let Some(cache) = &sc.cache {
        markings.push(Marking {
            from: "client".to_owned(),
            to: "cache".to_owned(),
            distance: cache.length.clone(),
        });
        predicted.push(("download with cache".to_owned(), cached_download_delay(sc)));
    }
    Ok(FieldPlan {
        scenario: "web page download".to_owned(),
        class_size,
        roles,
        markings,
        predicted_times: predicted,
    })
}

fn plan_rach<T: SimScalar>(sc: &RachScenario, class_size: u64) -> Result<FieldPlan<T>, PlanError> {
    let p = sc.contenders;
    let mut budget = RoleBudget::start(class_size, 2 * p)?;
    budget.mandatory(
        Role::PacketStudent,
        2 * p,
        format!("two competing groups of {p} phones playing musical chairs"),
    );
    budget.optional(Role::RecordKeeper, 2, "count rounds per group");
    let roles = budget.finish("referee the chairs");

    let mut predicted = vec![(
        "coordinated (rounds)".to_owned(),
        count::<T>(coordinated_rounds(p, sc.slots)),
    )];
    if let Ok(exact) = expected_rounds_exact(p, sc.slots) {
        if let Some(v) = exact.to_f64().and_then(T::from_f64) {
            predicted.push(("uncoordinated expected (rounds)".to_owned(), v));
        }
    }
    Ok(FieldPlan {
        scenario: "connection establishment game".to_owned(),
        class_size,
        roles,
        markings: Vec::new(),
        predicted_times: predicted,
    })
}

fn plan_sdn<T: SimScalar>(sc: &SdnScenario<T>, class_size: u64) -> Result<FieldPlan<T>, PlanError> {
    let f = sc.flow_size;
    let mut budget = RoleBudget::start(class_size, 4 * f)?;
    budget.mandatory(
        Role::PacketStudent,
        4 * f,
        format!("{f} per source, two sources per network, two networks"),
    );
    budget.optional(Role::RecordKeeper, 2, "one per network");
    let runners = match &sc.config_style {
        ConfigStyle::SingleRunnerAtA => 1,
        ConfigStyle::PerNodeRunners { .. } => 6,
    };
    budget.optional(Role::ControlRunner, runners, "carry queries and policies");
    budget.optional(Role::SourceStaff, 4, "pace departures at A and B");
    let roles = budget.finish("staff the intermediate nodes");

    let mut markings = Vec::new();
    for net in ["ip:", "sdn:"] {
        for (from, to) in [
            ("A", "a"),
            ("B", "a"),
            ("a", "b"),
            ("a", "d"),
            ("b", "c"),
            ("c", "C"),
            ("d", "e"),
            ("e", "C"),
        ] {
            markings.push(Marking {
                from: format!("{net}{from}"),
                to: format!("{net}{to}"),
                distance: sc.link.length.clone(),
            });
        }
    }
    markings.push(Marking {
        from: "sdn:a".to_owned(),
        to: "controller".to_owned(),
        distance: sc.controller_leg.distance.clone(),
    });
    if let Some(h) = &sc.hypervisor {
        markings.push(Marking {
            from: "controller".to_owned(),
            to: "hypervisor".to_owned(),
            distance: h.controller_leg.clone(),
        });
        markings.push(Marking {
            from: "hypervisor".to_owned(),
            to: "sdn:a".to_owned(),
            distance: h.node_leg.clone(),
        });
    }

    let run = sdn_race::run_race(sc).expect("fixed topology is acyclic");
    Ok(FieldPlan {
        scenario: "routing race".to_owned(),
        class_size,
        roles,
        markings,
        predicted_times: vec![
            (sdn_race::LABEL_IP.to_owned(), run.ip.completion_time),
            (sdn_race::LABEL_SDN.to_owned(), run.sdn.completion_time),
        ],
    })
}

impl FieldPlan<Exact> {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "field plan: {} (class size {})\n",
            self.scenario, self.class_size
        ));
        out.push_str("roles:\n");
        for r in &self.roles {
            out.push_str(&format!(
                "  {:<14} {:>3}  {}\n",
                r.role.label(),
                r.count,
                r.note
            ));
        }
        if !self.markings.is_empty() {
            out.push_str("ground markings:\n");
            for m in &self.markings {
                out.push_str(&format!(
                    "  {} -> {}: {} m\n",
                    m.from,
                    m.to,
                    format_seconds(&m.distance)
                ));
            }
        }
        out.push_str("predicted times:\n");
        for (label, t) in &self.predicted_times {
            out.push_str(&format!("  {label}: {} s\n", format_seconds(t)));
        }
        out
    }
}
