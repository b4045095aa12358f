//! Timestamped event records produced by the simulators.

use crate::scalar::{format_seconds, Exact, SimScalar};
use serde::{Deserialize, Serialize};

/// What happened at an instant.
///
/// The variant order is the tie-break order for events at equal time and
/// actor, so derived `Ord` is meaningful.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    TxStart,
    TxEnd,
    PhysicalArrival,
    FullArrival,
    QueryDispatch,
    QueryReturn,
    SlotPick,
    SlotSuccess,
    SlotCollision,
    Connected,
}

impl EventKind {
    pub fn label(self) -> &'static str {
        match self {
            EventKind::TxStart => "tx_start",
            EventKind::TxEnd => "tx_end",
            EventKind::PhysicalArrival => "physical_arrival",
            EventKind::FullArrival => "full_arrival",
            EventKind::QueryDispatch => "query_dispatch",
            EventKind::QueryReturn => "query_return",
            EventKind::SlotPick => "slot_pick",
            EventKind::SlotSuccess => "slot_success",
            EventKind::SlotCollision => "slot_collision",
            EventKind::Connected => "connected",
        }
    }
}

/// One timestamped simulation event.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event<T> {
    pub time: T,
    /// Node, link, packet or runner the event belongs to.
    pub actor: String,
    pub kind: EventKind,
    /// Free text; carries `key=value` tokens for tooling.
    pub detail: String,
}

impl<T> Event<T> {
    pub fn new(
        time: T,
        actor: impl Into<String>,
        kind: EventKind,
        detail: impl Into<String>,
    ) -> Self {
        Event {
            time,
            actor: actor.into(),
            kind,
            detail: detail.into(),
        }
    }

    /// Look up a `key=value` token in the detail text.
    pub fn detail_token(&self, key: &str) -> Option<&str> {
        detail_token(&self.detail, key)
    }
}

/// Extract the value of a `key=value` token from a detail string.
pub fn detail_token<'a>(detail: &'a str, key: &str) -> Option<&'a str> {
    detail.split_whitespace().find_map(|tok| {
        let (k, v) = tok.split_once('=')?;
        (k == key).then_some(v)
    })
}

/// An ordered event log plus the completion instant of the run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timeline<T> {
    pub events: Vec<Event<T>>,
    /// Time of the final delivery or connection event.
    pub completion_time: T,
}

impl<T: SimScalar> Timeline<T> {
    /// Build a timeline; events are sorted by (time, actor, kind) so that
    /// identical runs serialize byte-for-byte identically.
    pub fn new(mut events: Vec<Event<T>>, completion_time: T) -> Self {
        sort_events(&mut events);
        Timeline {
            events,
            completion_time,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Actors in order of first appearance.
    pub fn actors(&self) -> Vec<String> {
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        for ev in &self.events {
            if seen.insert(ev.actor.clone()) {
                out.push(ev.actor.clone());
            }
        }
        out
    }

    /// Time of the last event (the diagram extent; may trail the
    /// completion instant).
    pub fn span(&self) -> T {
        self.events
            .last()
            .map(|e| e.time.clone())
            .unwrap_or_else(T::zero)
    }

    /// Merge several timelines into one, prefixing each part's actors
    /// with a label. Completion is the latest part's completion.
    pub fn merge_labeled(parts: &[(&str, &Timeline<T>)]) -> Timeline<T> {
        let mut events = Vec::new();
        let mut completion = T::zero();
        for (label, tl) in parts {
            for ev in &tl.events {
                events.push(Event {
                    time: ev.time.clone(),
                    actor: format!("{label}/{}", ev.actor),
                    kind: ev.kind,
                    detail: ev.detail.clone(),
                });
            }
            if tl.completion_time > completion {
                completion = tl.completion_time.clone();
            }
        }
        Timeline::new(events, completion)
    }
}

fn sort_events<T: SimScalar>(events: &mut [Event<T>]) {
    events.sort_by(|a, b| {
        a.time
            .cmp(&b.time)
            .then_with(|| a.actor.cmp(&b.actor))
            .then_with(|| a.kind.cmp(&b.kind))
            .then_with(|| a.detail.cmp(&b.detail))
    });
}

impl Timeline<Exact> {
    /// Line-oriented event log: `time TAB actor TAB kind TAB detail`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for ev in &self.events {
            out.push_str(&format_seconds(&ev.time));
            out.push('\t');
            out.push_str(&ev.actor);
            out.push('\t');
            out.push_str(ev.kind.label());
            out.push('\t');
            out.push_str(&ev.detail);
            out.push('\n');
        }
        out
    }

    /// Structured document mirroring the timeline.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("timeline serializes");
        out.push('\n');
        out
    }
}
