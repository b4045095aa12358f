//! Race comparison tables, timing diagrams and field plans.

mod plan;
mod render;

pub use plan::{field_plan, FieldPlan, Marking, PlanError, PlanInput, Role, RoleAssignment};
pub use render::{lane_activity, render_timeline, RenderError, RenderFormat};

use crate::scalar::{format_seconds, Exact, SimScalar};
use crate::timeline::Timeline;

/// Which side of a race finished first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RaceWinner {
    A,
    B,
    Tie,
}

/// Side-by-side completion times of two competing configurations.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct RaceReport<T> {
    pub label_a: String,
    pub completion_a: T,
    pub label_b: String,
    pub completion_b: T,
    pub winner: RaceWinner,
    pub margin: T,
}

impl<T> RaceReport<T> {
    /// Label of the winning side, if any.
    pub fn winner_label(&self) -> Option<&str> {
        match self.winner {
            RaceWinner::A => Some(&self.label_a),
            RaceWinner::B => Some(&self.label_b),
            RaceWinner::Tie => None,
        }
    }
}

/// Compare two finished timelines: smaller completion time wins, margin
/// is the absolute difference.
pub fn compare_races<T: SimScalar>(
    a: &Timeline<T>,
    b: &Timeline<T>,
    label_a: impl Into<String>,
    label_b: impl Into<String>,
) -> RaceReport<T> {
    let ta = a.completion_time.clone();
    let tb = b.completion_time.clone();
    let (winner, margin) = match ta.cmp(&tb) {
        std::cmp::Ordering::Less => (RaceWinner::A, tb.clone() - ta.clone()),
        std::cmp::Ordering::Greater => (RaceWinner::B, ta.clone() - tb.clone()),
        std::cmp::Ordering::Equal => (RaceWinner::Tie, T::zero()),
    };
    RaceReport {
        label_a: label_a.into(),
        completion_a: ta,
        label_b: label_b.into(),
        completion_b: tb,
        winner,
        margin,
    }
}

impl RaceReport<Exact> {
    /// Aligned two-column comparison table.
    pub fn to_table(&self) -> String {
        let width = self.label_a.len().max(self.label_b.len());
        let mut out = String::new();
        out.push_str(&format!(
            "{:<width$}  {} s\n",
            self.label_a,
            format_seconds(&self.completion_a),
        ));
        out.push_str(&format!(
            "{:<width$}  {} s\n",
            self.label_b,
            format_seconds(&self.completion_b),
        ));
        match self.winner_label() {
            Some(label) => out.push_str(&format!(
                "winner: {label} by {} s\n",
                format_seconds(&self.margin)
            )),
            None => out.push_str("winner: tie\n"),
        }
        out
    }

    /// The report as CSV rows (`label,seconds`).
    pub fn to_csv(&self) -> String {
        format!(
            "label,seconds\n{},{}\n{},{}\n",
            self.label_a,
            format_seconds(&self.completion_a),
            self.label_b,
            format_seconds(&self.completion_b),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;
    use crate::timeline::{Event, EventKind};

    fn tl(completion: i64) -> Timeline<Exact> {
        Timeline::new(
            vec![Event::new(
                Exact::from_int(completion),
                "x",
                EventKind::FullArrival,
                "",
            )],
            Exact::from_int(completion),
        )
    }

    #[test]
    fn packet_switching_wins_by_27() {
        let report = compare_races(&tl(88), &tl(61), "message switching", "packet switching");
        assert_eq!(report.winner, RaceWinner::B);
        assert_eq!(report.margin, Exact::from_int(27));
        assert_eq!(report.winner_label(), Some("packet switching"));
    }

    #[test]
    fn fast_paced_race_also_wins_by_27() {
        let report = compare_races(&tl(68), &tl(41), "message switching", "packet switching");
        assert_eq!(report.margin, Exact::from_int(27));
    }

    #[test]
    fn equal_times_tie() {
        let report = compare_races(&tl(50), &tl(50), "x", "y");
        assert_eq!(report.winner, RaceWinner::Tie);
        assert_eq!(report.margin, Exact::from_int(0));
        assert_eq!(report.winner_label(), None);
        assert!(report.to_table().contains("winner: tie"));
    }

    #[test]
    fn table_is_aligned_and_complete() {
        let report = compare_races(&tl(88), &tl(61), "message switching", "packet switching");
        let table = report.to_table();
        assert!(table.contains("message switching  88 s"));
        assert!(table.contains("packet switching   61 s"));
        assert!(table.contains("winner: packet switching by 27 s"));
    }
}
