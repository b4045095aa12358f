//! Gantt-style timing diagrams: fixed-width text and SVG 1.1.
//!
//! One horizontal lane per actor, in order of first appearance.
//! Transmission intervals become bars of width 1/R per unit, propagation
//! becomes slanted connectors, everything else becomes point markers. In
//! SVG every element carries a `data-ev` attribute listing the indices
//! of the timeline events it draws, so each event maps to at least one
//! element.

use crate::scalar::SimScalar;
use crate::timeline::{EventKind, Timeline};
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderFormat {
    Text,
    Svg,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RenderError {
    #[error("cannot render an empty timeline")]
    EmptyTimeline,
}

/// Render a timeline as a timing diagram.
pub fn render_timeline<T: SimScalar>(
    tl: &Timeline<T>,
    format: RenderFormat,
) -> Result<String, RenderError> {
    if tl.is_empty() {
        return Err(RenderError::EmptyTimeline);
    }
    let layout = Layout::build(tl);
    Ok(match format {
        RenderFormat::Text => layout.to_text(),
        RenderFormat::Svg => layout.to_svg(),
    })
}

/// Per-actor activity interval: first and last event time on that lane.
pub fn lane_activity<T: SimScalar>(tl: &Timeline<T>) -> Vec<(String, T, T)> {
    let mut spans: BTreeMap<&str, (T, T)> = BTreeMap::new();
    for ev in &tl.events {
        spans
            .entry(&ev.actor)
            .and_modify(|(lo, hi)| {
                if ev.time < *lo {
                    *lo = ev.time.clone();
                }
                if ev.time > *hi {
                    *hi = ev.time.clone();
                }
            })
            .or_insert_with(|| (ev.time.clone(), ev.time.clone()));
    }
    tl.actors()
        .into_iter()
        .map(|actor| {
            let (lo, hi) = spans[actor.as_str()].clone();
            (actor, lo, hi)
        })
        .collect()
}

struct Bar {
    lane: usize,
    start: f64,
    end: f64,
    events: Vec<usize>,
}

struct Connector {
    from_lane: usize,
    from_time: f64,
    to_lane: usize,
    to_time: f64,
    events: Vec<usize>,
}

struct Marker {
    lane: usize,
    time: f64,
    kind: EventKind,
    event: usize,
}

struct Layout {
    lanes: Vec<String>,
    span: f64,
    bars: Vec<Bar>,
    connectors: Vec<Connector>,
    markers: Vec<Marker>,
}

impl Layout {
    fn build<T: SimScalar>(tl: &Timeline<T>) -> Layout {
        let lanes = tl.actors();
        let lane_of: BTreeMap<&str, usize> = lanes
            .iter()
            .enumerate()
            .map(|(i, a)| (a.as_str(), i))
            .collect();
        let time = |t: &T| t.to_f64().unwrap_or(0.0);
        let span = time(&tl.span()).max(1e-9);

        let mut covered = vec![false; tl.events.len()];
        let mut bars = Vec::new();
        let mut connectors = Vec::new();

        // pair the k-th TxStart with the k-th TxEnd of each lane; both
        // lists are time-sorted and every unit occupies the same 1/R
        let mut starts: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut ends: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, ev) in tl.events.iter().enumerate() {
            let lane = lane_of[ev.actor.as_str()];
            match ev.kind {
                EventKind::TxStart => starts.entry(lane).or_default().push(i),
                EventKind::TxEnd => ends.entry(lane).or_default().push(i),
                _ => {}
            }
        }
        for (lane, ss) in &starts {
            if let Some(es) = ends.get(lane) {
                for (&si, &ei) in ss.iter().zip(es.iter()) {
                    covered[si] = true;
                    covered[ei] = true;
                    bars.push(Bar {
                        lane: *lane,
                        start: time(&tl.events[si].time),
                        end: time(&tl.events[ei].time),
                        events: vec![si, ei],
                    });
                }
            }
        }

        // propagation: connect a unit's transmission end to its arrival,
        // matched by identical detail text within the same merge part
        // (merged timelines prefix actors with "part/", and identical
        // details recur across parts)
        let part = |actor: &str| -> String {
            actor
                .split_once('/')
                .map(|(p, _)| p)
                .unwrap_or("")
                .to_owned()
        };
        let mut arrival_of: BTreeMap<(String, &str, EventKind), usize> = BTreeMap::new();
        for (i, ev) in tl.events.iter().enumerate() {
            if matches!(ev.kind, EventKind::PhysicalArrival | EventKind::FullArrival) {
                arrival_of
                    .entry((part(&ev.actor), ev.detail.as_str(), ev.kind))
                    .or_insert(i);
            }
        }
        for (lane, es) in &ends {
            for &ei in es {
                let detail = tl.events[ei].detail.as_str();
                let scope = part(&tl.events[ei].actor);
                let target = arrival_of
                    .get(&(scope.clone(), detail, EventKind::PhysicalArrival))
                    .or_else(|| arrival_of.get(&(scope, detail, EventKind::FullArrival)));
                if let Some(&ai) = target {
                    covered[ai] = true;
                    connectors.push(Connector {
                        from_lane: *lane,
                        from_time: time(&tl.events[ei].time),
                        to_lane: lane_of[tl.events[ai].actor.as_str()],
                        to_time: time(&tl.events[ai].time),
                        events: vec![ei, ai],
                    });
                }
            }
        }

        // everything still uncovered becomes a point marker
        let markers = tl
            .events
            .iter()
            .enumerate()
            .filter(|(i, _)| !covered[*i])
            .map(|(i, ev)| Marker {
                lane: lane_of[ev.actor.as_str()],
                time: time(&ev.time),
                kind: ev.kind,
                event: i,
            })
            .collect();

        Layout {
            lanes,
            span,
            bars,
            connectors,
            markers,
        }
    }

    // ---------------- text ----------------

    /// One column per second by default; wider spans rescale to fit 120
    /// columns.
    fn to_text(&self) -> String {
        const MAX_COLS: usize = 120;
        let secs_per_col = if self.span <= MAX_COLS as f64 {
            1.0
        } else {
            (self.span / MAX_COLS as f64).ceil()
        };
        let cols = ((self.span / secs_per_col).floor() as usize + 1).min(MAX_COLS + 1);
        let col = |t: f64| ((t / secs_per_col).floor() as usize).min(cols - 1);

        let mut grid = vec![vec![' '; cols]; self.lanes.len()];
        for bar in &self.bars {
            let c0 = col(bar.start);
            let c1 = col(bar.end).max(c0 + 1).min(cols);
            for cell in &mut grid[bar.lane][c0..c1] {
                *cell = '#';
            }
        }
        for conn in &self.connectors {
            let c0 = col(conn.from_time);
            let c1 = col(conn.to_time).max(c0);
            for cell in &mut grid[conn.from_lane][c0..=c1] {
                if *cell == ' ' {
                    *cell = '-';
                }
            }
            if grid[conn.to_lane][c1] == ' ' || grid[conn.to_lane][c1] == '-' {
                grid[conn.to_lane][c1] = '>';
            }
        }
        for m in &self.markers {
            grid[m.lane][col(m.time)] = marker_glyph(m.kind);
        }

        let label_width = self.lanes.iter().map(|l| l.len()).max().unwrap_or(0).max(4);
        let mut out = String::new();
        let _ = writeln!(out, "seconds per column: {secs_per_col}");
        // tick labels every 10 columns
        let mut ruler = vec![' '; cols];
        let mut c = 0;
        while c < cols {
            let label = format!("{}", c as f64 * secs_per_col);
            for (k, ch) in label.chars().enumerate() {
                if c + k < cols {
                    ruler[c + k] = ch;
                }
            }
            c += 10;
        }
        let _ = writeln!(
            out,
            "{:label_width$}  {}",
            "",
            ruler.iter().collect::<String>()
        );
        for (lane, row) in grid.iter().enumerate() {
            let _ = writeln!(
                out,
                "{:label_width$} |{}|",
                self.lanes[lane],
                row.iter().collect::<String>()
            );
        }
        out
    }

    // ---------------- svg ----------------

    fn to_svg(&self) -> String {
        const LANE_HEIGHT: f64 = 40.0;
        const BAR_HEIGHT: f64 = 14.0;
        const LEFT: f64 = 150.0;
        const TOP: f64 = 40.0;
        let scale = if self.span * 10.0 > 1200.0 {
            1200.0 / self.span
        } else {
            10.0
        };
        let x = |t: f64| LEFT + t * scale;
        let lane_top = |lane: usize| TOP + lane as f64 * LANE_HEIGHT;
        let lane_mid = |lane: usize| lane_top(lane) + LANE_HEIGHT / 2.0;
        let width = x(self.span) + 40.0;
        let height = TOP + self.lanes.len() as f64 * LANE_HEIGHT + 30.0;

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.2}" height="{height:.2}" viewBox="0 0 {width:.2} {height:.2}">"#
        );
        let _ = writeln!(
            svg,
            r#"  <rect x="0" y="0" width="{width:.2}" height="{height:.2}" fill="white"/>"#
        );

        // time axis with ticks
        let tick = (self.span / 12.0).ceil().max(1.0);
        let axis_y = TOP - 10.0;
        let _ = writeln!(
            svg,
            r#"  <line x1="{:.2}" y1="{axis_y:.2}" x2="{:.2}" y2="{axis_y:.2}" stroke="black"/>"#,
            x(0.0),
            x(self.span)
        );
        let mut t = 0.0;
        while t <= self.span + 1e-9 {
            let _ = writeln!(
                svg,
                r#"  <line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke="black"/>"#,
                x(t),
                axis_y - 4.0,
                axis_y + 4.0
            );
            let _ = writeln!(
                svg,
                r#"  <text x="{:.2}" y="{:.2}" font-size="10" text-anchor="middle">{} s</text>"#,
                x(t),
                axis_y - 8.0,
                t
            );
            t += tick;
        }

        for (i, lane) in self.lanes.iter().enumerate() {
            let _ = writeln!(
                svg,
                r#"  <text x="8" y="{:.2}" font-size="11" dominant-baseline="middle">{}</text>"#,
                lane_mid(i),
                escape_xml(lane)
            );
            let _ = writeln!(
                svg,
                r##"  <line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#cccccc"/>"##,
                x(0.0),
                lane_mid(i),
                x(self.span),
                lane_mid(i)
            );
        }

        for bar in &self.bars {
            let _ = writeln!(
                svg,
                r##"  <rect x="{:.2}" y="{:.2}" width="{:.2}" height="{BAR_HEIGHT:.2}" fill="#4477aa" data-ev="{}"/>"##,
                x(bar.start),
                lane_mid(bar.lane) - BAR_HEIGHT / 2.0,
                ((bar.end - bar.start) * scale).max(1.0),
                ev_list(&bar.events)
            );
        }
        for conn in &self.connectors {
            let _ = writeln!(
                svg,
                r##"  <line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#aa7744" data-ev="{}"/>"##,
                x(conn.from_time),
                lane_mid(conn.from_lane),
                x(conn.to_time),
                lane_mid(conn.to_lane) + BAR_HEIGHT / 2.0,
                ev_list(&conn.events)
            );
        }
        for m in &self.markers {
            let _ = writeln!(
                svg,
                r#"  <circle cx="{:.2}" cy="{:.2}" r="3" fill="{}" data-ev="{}"/>"#,
                x(m.time),
                lane_mid(m.lane),
                marker_color(m.kind),
                m.event
            );
        }
        svg.push_str("</svg>\n");
        svg
    }
}

fn ev_list(events: &[usize]) -> String {
    events
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn marker_glyph(kind: EventKind) -> char {
    match kind {
        EventKind::FullArrival | EventKind::PhysicalArrival => '>',
        EventKind::QueryDispatch => '?',
        EventKind::QueryReturn => '!',
        EventKind::SlotPick => '.',
        EventKind::SlotSuccess => '+',
        EventKind::SlotCollision => 'x',
        EventKind::Connected => '*',
        EventKind::TxStart | EventKind::TxEnd => '#',
    }
}

fn marker_color(kind: EventKind) -> &'static str {
    match kind {
        EventKind::FullArrival => "#228833",
        EventKind::PhysicalArrival => "#66bb66",
        EventKind::QueryDispatch | EventKind::QueryReturn => "#aa3377",
        EventKind::SlotPick => "#bbbbbb",
        EventKind::SlotSuccess => "#228833",
        EventKind::SlotCollision => "#cc3311",
        EventKind::Connected => "#004488",
        EventKind::TxStart | EventKind::TxEnd => "#4477aa",
    }
}

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
        .replace('\'', "&apos;")
}
