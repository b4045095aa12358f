//! Closed-form delays for the linear-chain and web-download activities.
//!
//! These are used both as first-class results and as oracles for the
//! event simulator: for every valid scenario the simulated completion
//! time equals the closed form exactly.

use crate::scalar::{count, Scalar};
use crate::scenario::{ArrivalConvention, ChainScenario, LinkSpec, WebScenario};

/// Errors from the chain delay formulas.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalyticError {
    #[error("packet size {packet_bits} does not divide message size {message_bits}")]
    NonDivisiblePacketSize { message_bits: u64, packet_bits: u64 },
}

/// First-packet and whole-message delay of a packetized transfer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PacketDelay<T> {
    pub first_packet: T,
    pub total: T,
}

/// Per-hop delay of one packet of `unit_bits`:
/// P/R + l/s under the full-arrival rule, (P-1)/R + l/s when only
/// physical arrival counts.
fn per_hop<T: Scalar>(unit_bits: u64, link: &LinkSpec<T>, conv: ArrivalConvention) -> T {
    let tx_units = match conv {
        ArrivalConvention::Full => unit_bits,
        ArrivalConvention::Physical => unit_bits - 1,
    };
    count::<T>(tx_units) * link.unit_time() + link.propagation_delay()
}

/// Delay to move an M-bit message as a single packet over N intermediate
/// nodes: (N+1)·[M/R + l/s], or (N+1)·[(M-1)/R + l/s] with the
/// physical-arrival convention.
pub fn message_switching_delay<T: Scalar>(
    message_bits: u64,
    link: &LinkSpec<T>,
    intermediate_nodes: u32,
    conv: ArrivalConvention,
) -> T {
    let hops = count::<T>(intermediate_nodes as u64 + 1);
    hops * per_hop(message_bits, link, conv)
}

/// Delay of the packetized transfer: the first packet takes
/// (N+1)·[P/R + l/s]; after that another packet lands every P/R.
pub fn packet_switching_delay<T: Scalar>(
    message_bits: u64,
    packet_bits: u64,
    link: &LinkSpec<T>,
    intermediate_nodes: u32,
    conv: ArrivalConvention,
) -> Result<PacketDelay<T>, AnalyticError> {
    if packet_bits == 0 || !message_bits.is_multiple_of(packet_bits) {
        return Err(AnalyticError::NonDivisiblePacketSize {
            message_bits,
            packet_bits,
        });
    }
    let hops = count::<T>(intermediate_nodes as u64 + 1);
    let first = hops * per_hop(packet_bits, link, conv);
    let trailing =
        count::<T>(message_bits / packet_bits - 1) * count::<T>(packet_bits) * link.unit_time();
    let total = first.clone() + trailing;
    Ok(PacketDelay {
        first_packet: first,
        total,
    })
}

/// Convenience wrapper taking a whole chain scenario.
pub fn chain_delay<T: Scalar>(sc: &ChainScenario<T>) -> Result<PacketDelay<T>, AnalyticError> {
    packet_switching_delay(
        sc.message_bits,
        sc.packet_bits,
        &sc.link,
        sc.intermediate_nodes,
        sc.convention,
    )
}

/// The packet size minimizing total delay, found by exhaustive search
/// over the divisors of M. Ties go to the smaller packet size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimalPacketSize<T> {
    pub packet_bits: u64,
    pub delay: T,
}

pub fn optimal_packet_size<T: Scalar>(
    message_bits: u64,
    link: &LinkSpec<T>,
    intermediate_nodes: u32,
    conv: ArrivalConvention,
) -> OptimalPacketSize<T> {
    let mut best: Option<OptimalPacketSize<T>> = None;
    for p in divisors(message_bits) {
        let delay = packet_switching_delay(message_bits, p, link, intermediate_nodes, conv)
            .expect("divisor divides")
            .total;
        match &best {
            Some(b) if b.delay <= delay => {}
            _ => {
                best = Some(OptimalPacketSize {
                    packet_bits: p,
                    delay,
                })
            }
        }
    }
    best.expect("message has at least one divisor")
}

/// Divisors of m in ascending order.
pub fn divisors(m: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m.is_multiple_of(d) {
            small.push(d);
            if d != m / d {
                large.push(m / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Web page download delay without a cache: base page plus rounds of up
/// to C parallel object fetches, each round costing one connection RTT,
/// one request RTT and the transmission of its largest object.
pub fn web_download_delay<T: Scalar>(w: &WebScenario<T>) -> T {
    download_delay(w, false)
}

/// Web page download delay using the cache for cached objects. The base
/// page still comes from the distant server; with no cache (or an empty
/// cached set) this equals [`web_download_delay`].
pub fn cached_download_delay<T: Scalar>(w: &WebScenario<T>) -> T {
    download_delay(w, true)
}

fn download_delay<T: Scalar>(w: &WebScenario<T>, use_cache: bool) -> T {
    let two = T::one() + T::one();
    let server_rtt = w.server_rtt();
    let mut total =
        two.clone() * server_rtt.clone() + count::<T>(w.base_bits) / w.server_link.bitrate.clone();
    for round in w.object_rounds(use_cache) {
        let largest = round
            .objects
            .iter()
            .map(|i| w.embedded_objects[*i])
            .max()
            .expect("rounds are non-empty");
        let (rtt, bitrate) = if round.from_cache {
            let cache = w.cache.as_ref().expect("cache round requires cache");
            (cache.rtt(), cache.bitrate.clone())
        } else {
            (server_rtt.clone(), w.server_link.bitrate.clone())
        };
        total = total + two.clone() * rtt + count::<T>(largest) / bitrate;
    }
    total
}
