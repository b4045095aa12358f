//! Discrete-event simulator, closed-form delay calculator and race
//! planner for classroom networking races: store-and-forward switching
//! over a chain, web page download, slotted random-access connection
//! establishment, and controller-based versus destination-based routing.
//!
//! All math is generic over the scalar type via [`scalar::Scalar`];
//! the type aliases at the crate root pin the exact rational scalar
//! used by the command line and the regression suite, so results like
//! 88 s are exact rather than within float tolerance.

pub mod analytic;
pub mod des;
pub mod presets;
pub mod random_access;
pub mod report;
pub mod scalar;
pub mod scenario;
pub mod sdn_race;
pub mod timeline;

pub use scalar::{format_seconds, Exact, Scalar, SimScalar};

/// Exact seconds.
pub type Seconds = Exact;

// Concrete aliases of the generic scenario and result types at the
// canonical exact scalar.
pub type LinkSpec = scenario::LinkSpec<Exact>;
pub type ChainScenario = scenario::ChainScenario<Exact>;
pub type WebScenario = scenario::WebScenario<Exact>;
pub type SdnScenario = scenario::SdnScenario<Exact>;
pub type ScenarioFile = scenario::ScenarioFile<Exact>;
pub type Timeline = timeline::Timeline<Exact>;
pub type Event = timeline::Event<Exact>;
pub type RaceReport = report::RaceReport<Exact>;
pub type FieldPlan = report::FieldPlan<Exact>;
pub type FlowNetwork = des::FlowNetwork<Exact>;
pub type ReleaseSchedule = des::ReleaseSchedule<Exact>;
pub type RaceRun = sdn_race::RaceRun<Exact>;
