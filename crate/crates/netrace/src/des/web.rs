//! Event-level simulation of the non-persistent HTTP page download.

use crate::scalar::{count, SimScalar};
use crate::scenario::WebScenario;
use crate::timeline::{Event, EventKind, Timeline};

/// Simulate the page download round by round. The cache is used whenever
/// the scenario declares one; completion equals the closed forms in
/// [`crate::analytic`].
///
/// Each transfer opens with a connection-establishment leg (one RTT),
/// then the request travels to the origin (half an RTT), the object's
/// bits stream back at the origin's bitrate and the last bit walks home
/// (half an RTT): `2·RTT + size/R` in total.
pub fn simulate_web<T: SimScalar>(w: &WebScenario<T>) -> Timeline<T> {
    let mut events = Vec::new();
    let half = T::one() / (T::one() + T::one());

    // base page from the distant server on the first connection
    let server_rtt = w.server_rtt();
    let mut clock = fetch(
        &mut events,
        T::zero(),
        "conn-1",
        "phase=base",
        server_rtt.clone(),
        w.server_link.bitrate.clone(),
        w.base_bits,
        half.clone(),
    );

    for (round_no, round) in w.object_rounds(w.cache.is_some()).iter().enumerate() {
        let (rtt, bitrate, origin) = if round.from_cache {
            let cache = w.cache.as_ref().expect("cache round requires cache");
            (cache.rtt(), cache.bitrate.clone(), "cache")
        } else {
            (server_rtt.clone(), w.server_link.bitrate.clone(), "server")
        };
        let start = clock.clone();
        let mut round_end = clock.clone();
        for (slot, obj) in round.objects.iter().enumerate() {
            let tag = format!("round={} obj={} origin={origin}", round_no + 1, obj + 1);
            let done = fetch(
                &mut events,
                start.clone(),
                &format!("conn-{}", slot + 1),
                &tag,
                rtt.clone(),
                bitrate.clone(),
                w.embedded_objects[*obj],
                half.clone(),
            );
            if done > round_end {
                round_end = done;
            }
        }
        clock = round_end;
    }

    Timeline::new(events, clock)
}

/// One non-persistent fetch on a connection lane; returns the time the
/// last bit reaches the client.
#[allow(clippy::too_many_arguments)]
fn fetch<T: SimScalar>(
    events: &mut Vec<Event<T>>,
    start: T,
    lane: &str,
    tag: &str,
    rtt: T,
    bitrate: T,
    size_bits: u64,
    half: T,
) -> T {
    let unit = T::one() / bitrate;
    events.push(Event::new(
        start.clone(),
        lane,
        EventKind::QueryDispatch,
        format!("tcp-connect {tag}"),
    ));
    let established = start.clone() + rtt.clone();
    events.push(Event::new(
        established.clone(),
        lane,
        EventKind::QueryReturn,
        format!("tcp-established {tag}"),
    ));
    events.push(Event::new(
        established.clone(),
        lane,
        EventKind::QueryDispatch,
        format!("http-request {tag}"),
    ));
    // request reaches the origin half an RTT later, bits stream back
    let tx_base = established + half.clone() * rtt.clone();
    let mut last = T::zero();
    for b in 0..size_bits {
        let tx = tx_base.clone() + count::<T>(b) * unit.clone();
        let detail = format!("bit={} {tag}", b + 1);
        events.push(Event::new(
            tx.clone(),
            lane,
            EventKind::TxStart,
            detail.clone(),
        ));
        events.push(Event::new(
            tx.clone() + unit.clone(),
            lane,
            EventKind::TxEnd,
            detail.clone(),
        ));
        last = tx + unit.clone() + half.clone() * rtt.clone();
        events.push(Event::new(
            last.clone(),
            lane,
            EventKind::FullArrival,
            detail,
        ));
    }
    last
}
