//! Slotted random-access connection establishment: stochastic trials,
//! the coordinated strategy, and an exact expected-round oracle.
//!
//! Randomness is ChaCha8 seeded per trial through SplitMix64, so trials
//! reproduce bit-for-bit across platforms and may be distributed across
//! threads without changing results.

use crate::scalar::{count, SimScalar};
use crate::scenario::{BarringPolicy, RachScenario, Strategy};
use crate::timeline::{Event, EventKind, Timeline};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Outcome of a batch of trials.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundsResult {
    /// Rounds needed per completed trial, in trial order.
    pub rounds_per_trial: Vec<u32>,
    /// Trials that hit the round cap; excluded from the mean.
    pub overflowed_trials: u32,
    /// Sample mean of `rounds_per_trial` (NaN if no trial completed).
    pub mean: f64,
    /// Standard error of the mean (0 for a single trial).
    pub std_error: f64,
    /// Newly connected contenders per round in the first trial.
    pub connected_trace: Vec<u64>,
}

/// Errors from the exact expectation oracle.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RachError {
    #[error("exact computation supports at most 10 contenders and 10 slots, got {contenders} and {slots}")]
    BoundsExceeded { contenders: u64, slots: u64 },
    #[error("the process never drains: {contenders} contenders collide forever in a single slot")]
    NonAbsorbing { contenders: u64 },
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic per-trial generator: mixes the scenario seed with the
/// trial index.
fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ trial.wrapping_mul(0xA076_1D64_78BD_642F)))
}

struct TrialOutcome {
    rounds: u32,
    overflowed: bool,
    connected_per_round: Vec<u64>,
}

fn run_trial(rs: &RachScenario, rng: &mut ChaCha8Rng) -> TrialOutcome {
    let (mut active, mut barred): (Vec<u64>, Vec<u64>) = match &rs.strategy {
        Strategy::Barring {
            initially_admitted, ..
        } => {
            let b = (*initially_admitted).min(rs.contenders);
            ((0..b).collect(), (b..rs.contenders).collect())
        }
        _ => ((0..rs.contenders).collect(), Vec::new()),
    };
    let coordinated = matches!(rs.strategy, Strategy::Coordinated);
    let mut connected_per_round = Vec::new();

    for round in 1..=rs.max_rounds {
        if round > 1 {
            if let Strategy::Barring {
                policy: BarringPolicy::AdmitPerRound { k },
                ..
            } = &rs.strategy
            {
                let n = (*k as usize).min(barred.len());
                active.extend(barred.drain(..n));
            }
        }

        let newly = if coordinated {
            coordinated_round(&mut active, rs.slots)
        } else {
            random_round(&mut active, rs.slots, rng)
        };
        connected_per_round.push(newly);

        if active.is_empty() {
            if barred.is_empty() {
                return TrialOutcome {
                    rounds: round,
                    overflowed: false,
                    connected_per_round,
                };
            }
            if matches!(
                rs.strategy,
                Strategy::Barring {
                    policy: BarringPolicy::BatchAfterDrain,
                    ..
                }
            ) {
                active.append(&mut barred);
            }
        }
    }
    TrialOutcome {
        rounds: rs.max_rounds,
        overflowed: true,
        connected_per_round,
    }
}

/// One uncoordinated round: every active contender picks a slot
/// uniformly; those alone in a slot connect. Returns how many connected.
fn random_round(active: &mut Vec<u64>, slots: u64, rng: &mut ChaCha8Rng) -> u64 {
    let picks: Vec<u64> = active.iter().map(|_| rng.gen_range(0..slots)).collect();
    let mut occupancy = vec![0u64; slots as usize];
    for &s in &picks {
        occupancy[s as usize] += 1;
    }
    let before = active.len();
    let mut i = 0;
    active.retain(|_| {
        let keep = occupancy[picks[i] as usize] != 1;
        i += 1;
        keep
    });
    (before - active.len()) as u64
}

/// One coordinated round: with m contenders left, all sit alone when
/// m <= S; otherwise S-1 sit alone and the rest pile onto the last slot.
/// A single slot admits one volunteer per round.
fn coordinated_round(active: &mut Vec<u64>, slots: u64) -> u64 {
    let m = active.len() as u64;
    let newly = if slots == 1 {
        1.min(m)
    } else if m <= slots {
        m
    } else {
        slots - 1
    };
    active.drain(..newly as usize);
    newly
}

/// Run `trials` independent games and summarize the round counts.
pub fn simulate_rach(rs: &RachScenario, trials: u64) -> RoundsResult {
    let mut rounds_per_trial = Vec::new();
    let mut overflowed = 0u32;
    let mut connected_trace = Vec::new();
    for trial in 0..trials {
        let mut rng = trial_rng(rs.seed, trial);
        let outcome = run_trial(rs, &mut rng);
        if trial == 0 {
            connected_trace = outcome.connected_per_round.clone();
        }
        if outcome.overflowed {
            overflowed += 1;
        } else {
            rounds_per_trial.push(outcome.rounds);
        }
    }
    let n = rounds_per_trial.len();
    let mean = if n == 0 {
        f64::NAN
    } else {
        rounds_per_trial.iter().map(|&r| r as f64).sum::<f64>() / n as f64
    };
    let std_error = if n > 1 {
        let var = rounds_per_trial
            .iter()
            .map(|&r| (r as f64 - mean).powi(2))
            .sum::<f64>()
            / (n as f64 - 1.0);
        (var / n as f64).sqrt()
    } else {
        0.0
    };
    RoundsResult {
        rounds_per_trial,
        overflowed_trials: overflowed,
        mean,
        std_error,
        connected_trace,
    }
}

/// Per-round event trace of the first trial, on an integer clock of one
/// second per round.
pub fn trial_timeline<T: SimScalar>(rs: &RachScenario) -> Timeline<T> {
    let mut rng = trial_rng(rs.seed, 0);
    let coordinated = matches!(rs.strategy, Strategy::Coordinated);
    let (mut active, mut barred): (Vec<u64>, Vec<u64>) = match &rs.strategy {
        Strategy::Barring {
            initially_admitted, ..
        } => {
            let b = (*initially_admitted).min(rs.contenders);
            ((0..b).collect(), (b..rs.contenders).collect())
        }
        _ => ((0..rs.contenders).collect(), Vec::new()),
    };

    let mut events = Vec::new();
    let mut completion = T::zero();
    for round in 1..=rs.max_rounds {
        if round > 1 {
            if let Strategy::Barring {
                policy: BarringPolicy::AdmitPerRound { k },
                ..
            } = &rs.strategy
            {
                let n = (*k as usize).min(barred.len());
                active.extend(barred.drain(..n));
            }
        }
        let t = count::<T>(round as u64);
        let picks: Vec<(u64, u64)> = if coordinated {
            active
                .iter()
                .enumerate()
                .map(|(i, &id)| {
                    let slot = if rs.slots == 1 {
                        0
                    } else {
                        (i as u64).min(rs.slots - 1)
                    };
                    (id, slot)
                })
                .collect()
        } else {
            active
                .iter()
                .map(|&id| (id, rng.gen_range(0..rs.slots)))
                .collect()
        };
        let mut occupancy = vec![0u64; rs.slots as usize];
        for &(_, s) in &picks {
            occupancy[s as usize] += 1;
        }
        for &(id, s) in &picks {
            events.push(Event::new(
                t.clone(),
                format!("phone-{id}"),
                EventKind::SlotPick,
                format!("round={round} slot={s}"),
            ));
        }
        for (s, &n) in occupancy.iter().enumerate() {
            if n == 0 {
                continue;
            }
            let kind = if n == 1 {
                EventKind::SlotSuccess
            } else {
                EventKind::SlotCollision
            };
            events.push(Event::new(
                t.clone(),
                format!("slot-{s}"),
                kind,
                format!("round={round} requests={n}"),
            ));
        }
        let survivors: Vec<u64> = if coordinated && rs.slots == 1 {
            // convention: one volunteer per round
            picks.iter().skip(1).map(|&(id, _)| id).collect()
        } else {
            picks
                .iter()
                .filter(|&&(_, s)| occupancy[s as usize] != 1)
                .map(|&(id, _)| id)
                .collect()
        };
        for &(id, s) in &picks {
            let connected = if coordinated && rs.slots == 1 {
                id == picks[0].0
            } else {
                occupancy[s as usize] == 1
            };
            if connected {
                events.push(Event::new(
                    t.clone(),
                    format!("phone-{id}"),
                    EventKind::Connected,
                    format!("round={round}"),
                ));
            }
        }
        active = survivors;
        completion = t;
        if active.is_empty() {
            if barred.is_empty() {
                break;
            }
            if matches!(
                rs.strategy,
                Strategy::Barring {
                    policy: BarringPolicy::BatchAfterDrain,
                    ..
                }
            ) {
                active.append(&mut barred);
            }
        }
    }
    Timeline::new(events, completion)
}

/// Rounds needed with the optimal coordination: everyone sits alone if
/// they fit, otherwise S-1 connect per round until they do. With a
/// single slot, one volunteer connects per round.
pub fn coordinated_rounds(contenders: u64, slots: u64) -> u64 {
    if contenders <= slots {
        1
    } else if slots >= 2 {
        (contenders - slots).div_ceil(slots - 1) + 1
    } else {
        contenders
    }
}

/// Exact expected rounds of the uncoordinated process, from the
/// absorbing chain on the number of unconnected contenders. The
/// single-round distribution of singleton slots is computed by exact
/// counting; the absorption expectation is solved by back-substitution.
pub fn expected_rounds_exact(contenders: u64, slots: u64) -> Result<BigRational, RachError> {
    if contenders > 10 || slots > 10 || contenders == 0 || slots == 0 {
        return Err(RachError::BoundsExceeded { contenders, slots });
    }
    if contenders >= 2 && slots == 1 {
        return Err(RachError::NonAbsorbing { contenders });
    }
    let mut expect: Vec<BigRational> = vec![BigRational::zero()];
    for m in 1..=contenders {
        let dist = singleton_distribution(m, slots);
        // E[m] = (1 + sum_{k>=1} P[k]·E[m-k]) / (1 - P[0])
        let mut numer = BigRational::one();
        for (k, p) in dist.iter().enumerate().skip(1) {
            numer += p * &expect[m as usize - k];
        }
        let stay = BigRational::one() - &dist[0];
        debug_assert!(stay.is_positive(), "state {m} must be able to progress");
        expect.push(numer / stay);
    }
    Ok(expect.pop().expect("at least one state"))
}

/// P[exactly k slots hold exactly one of m uniform requests], for
/// k = 0..=m, as exact rationals.
fn singleton_distribution(m: u64, slots: u64) -> Vec<BigRational> {
    let total = BigInt::from(slots).pow(m as u32);
    (0..=m)
        .map(|k| {
            if k > slots {
                return BigRational::zero();
            }
            let ways = binomial(slots, k) * falling(m, k) * no_singleton_count(m - k, slots - k);
            BigRational::new(ways, total.clone())
        })
        .collect()
}

/// Assignments of n distinct requests to s distinct slots where no slot
/// holds exactly one request, by inclusion-exclusion.
fn no_singleton_count(n: u64, s: u64) -> BigInt {
    let mut sum = BigInt::zero();
    for j in 0..=n.min(s) {
        let rest = BigInt::from(s - j).pow((n - j) as u32);
        let term = binomial(s, j) * falling(n, j) * rest;
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut out = BigInt::one();
    for i in 0..k {
        out = out * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    out
}

/// Falling factorial n·(n-1)···(n-k+1).
fn falling(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut out = BigInt::one();
    for i in 0..k {
        out *= BigInt::from(n - i);
    }
    out
}
