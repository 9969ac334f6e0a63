//! Filtering the C2 family down to networks on which a `Π3` source says the
//! same thing in every round.
//!
//! The event of round `3t` is fixed by the L1 transmitters of round `3t-2`:
//! none, several, or exactly one (which the source then describes).

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::c2::{self, build_c2, enumerate_c2, C2Params, ComponentDesc, Layer, TopologyVector};
use crate::error::{Error, Result};
use crate::protocol::Protocol;
use crate::radio::{self, Label, Network};
use crate::reductions::{require, AdviceEntry, AdviceString, Stage};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Event {
    Silent,
    Collision,
    Single(ComponentDesc),
}

impl Event {
    pub fn advice(self) -> AdviceEntry {
        match self {
            Event::Single(d) => AdviceEntry::Desc(d),
            Event::Silent | Event::Collision => AdviceEntry::Phi,
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Silent => f.write_str("silent"),
            Event::Collision => f.write_str("collision"),
            Event::Single(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PruneResult {
    /// Events for `t = 1..r-1`.
    pub event_seq: Vec<Event>,
    /// Ascending.
    pub survivors: Vec<TopologyVector>,
    pub advice: AdviceString,
    pub base_net: TopologyVector,
    pub marked: BTreeSet<usize>,
    /// Smallest unmarked component.
    pub free_component: Option<usize>,
}

/// L1 transmitters of round `3t-2` for `t = 1..r-1`.
fn l1_transmitters(p3: &dyn Protocol, net: &Network, r: u64) -> Result<Vec<Vec<Label>>> {
    let params = net.params().ok_or(Error::NotC2)?;
    if r <= 1 {
        return Ok(Vec::new());
    }
    let trace = radio::run(net, p3, 3 * r - 4)?;
    Ok((1..r)
        .map(|t| {
            trace
                .transmitters(3 * t - 2)
                .into_iter()
                .filter(|l| c2::layer_of(*l, params).is_ok_and(|layer| layer == Layer::L1))
                .collect()
        })
        .collect())
}

fn classify(senders: &[Label], net: &Network) -> Result<Event> {
    let (params, tv) = match (net.params(), net.topology()) {
        (Some(p), Some(tv)) => (p, tv),
        _ => return Err(Error::NotC2),
    };
    Ok(match senders {
        [] => Event::Silent,
        [x] => {
            let component = c2::component_of(*x, params)?.ok_or(Error::NotC2)?;
            Event::Single(ComponentDesc {
                component,
                tau: tv.tau(component),
            })
        }
        _ => Event::Collision,
    })
}

/// Events of `p3` on `net` for `t = 1..r-1`.
pub fn event_sequence(p3: &dyn Protocol, net: &Network, r: u64) -> Result<Vec<Event>> {
    require(p3, Stage::Pi3)?;
    l1_transmitters(p3, net, r)?.iter().map(|s| classify(s, net)).collect()
}

/// Event of round `3t`; `t = 0` has none and reads as silent.
pub fn classify_event(p3: &dyn Protocol, net: &Network, t: u64) -> Result<Event> {
    require(p3, Stage::Pi3)?;
    if t == 0 {
        return Ok(Event::Silent);
    }
    Ok(event_sequence(p3, net, t + 1)?.pop().unwrap_or(Event::Silent))
}

pub fn run_prune(p3: &dyn Protocol, r: u64, params: C2Params) -> Result<PruneResult> {
    require(p3, Stage::Pi3)?;
    let family = enumerate_c2(params)?;
    let events: Vec<Vec<Event>> = family
        .par_iter()
        .map(|tv| event_sequence(p3, &build_c2(params, tv)?, r))
        .collect::<Result<_>>()?;

    let mut alive: Vec<usize> = (0..family.len()).collect();
    #[allow(clippy::needless_range_loop)]
    for t in 0..r.saturating_sub(1) as usize {
        let at = |i: &usize| events[*i][t];
        if alive.iter().any(|i| at(i) == Event::Collision) {
            alive.retain(|i| at(i) == Event::Collision);
        } else if let Some(n) = alive.iter().map(at).find(|e| matches!(e, Event::Single(_))) {
            alive.retain(|i| at(i) == n);
        }
    }

    let base = alive[0];
    let base_net = family[base].clone();
    let event_seq = events[base].clone();
    let marked = mark_components(p3, &build_c2(params, &base_net)?, r)?;
    Ok(PruneResult {
        advice: AdviceString(event_seq.iter().map(|e| e.advice()).collect()),
        event_seq,
        survivors: alive.into_iter().map(|i| family[i].clone()).collect(),
        free_component: (0..params.m).find(|i| !marked.contains(i)),
        base_net,
        marked,
    })
}

/// Components pinned by the decisive rounds of `base`: a lone transmitter's
/// component, or the components of the two smallest colliding transmitters.
pub fn mark_components(p3: &dyn Protocol, base: &Network, r: u64) -> Result<BTreeSet<usize>> {
    require(p3, Stage::Pi3)?;
    let params = base.params().ok_or(Error::NotC2)?;
    let mut marked = BTreeSet::new();
    for senders in l1_transmitters(p3, base, r)? {
        for x in senders.iter().take(2) {
            marked.extend(c2::component_of(*x, params)?);
        }
    }
    Ok(marked)
}

/// Whether `candidate` produces the same events as the pruned set.
pub fn membership(
    p3: &dyn Protocol,
    candidate: &TopologyVector,
    result: &PruneResult,
    params: C2Params,
    r: u64,
) -> Result<bool> {
    Ok(event_sequence(p3, &build_c2(params, candidate)?, r)? == result.event_seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{round_robin, selfam_driven, silent_l1, ProtocolRef};
    use crate::reductions::{ladder, make_advice};
    use crate::selective::SetFamily;

    fn p(m: usize, k: usize) -> C2Params {
        C2Params::new(m, k).unwrap()
    }

    fn pi3(p0: ProtocolRef) -> ProtocolRef {
        ladder(p0).unwrap()[3].clone()
    }

    fn net(params: C2Params, taus: &[u64]) -> Network {
        build_c2(params, &TopologyVector(taus.to_vec())).unwrap()
    }

    #[test]
    fn silent_keeps_everything() {
        let params = p(2, 2);
        let res = run_prune(&*pi3(silent_l1()), 3, params).unwrap();
        assert_eq!(res.survivors.len(), 9);
        assert_eq!(res.event_seq, vec![Event::Silent; 2]);
        assert_eq!(res.advice.to_string(), "adv:phi,phi");
        assert!(res.marked.is_empty());
        assert_eq!(res.free_component, Some(0));
        assert_eq!(res.base_net, TopologyVector(vec![1, 1]));
    }

    #[test]
    fn round_robin_prune() {
        let params = p(2, 2);
        let p3 = pi3(round_robin());
        // the first L1 round maps to round 4, past the t = 1 window
        let r2 = run_prune(&*p3, 2, params).unwrap();
        assert_eq!(r2.survivors.len(), 9);
        assert_eq!(r2.event_seq, vec![Event::Silent]);

        let r3 = run_prune(&*p3, 3, params).unwrap();
        assert_eq!(
            r3.survivors,
            vec![
                TopologyVector(vec![1, 1]),
                TopologyVector(vec![1, 2]),
                TopologyVector(vec![1, 3])
            ]
        );
        assert_eq!(
            r3.event_seq,
            vec![Event::Silent, Event::Single(ComponentDesc { component: 0, tau: 1 })]
        );
        assert_eq!(r3.marked, BTreeSet::from([0]));
        assert_eq!(r3.free_component, Some(1));
    }

    #[test]
    fn classify_examples() {
        let params = p(1, 2);
        let both = pi3(selfam_driven(params, SetFamily::new(2, vec![0b11]).unwrap()).unwrap());
        assert_eq!(classify_event(&*both, &net(params, &[3]), 2).unwrap(), Event::Collision);
        let first = pi3(selfam_driven(params, SetFamily::new(2, vec![0b01]).unwrap()).unwrap());
        assert_eq!(
            classify_event(&*first, &net(params, &[1]), 2).unwrap(),
            Event::Single(ComponentDesc { component: 0, tau: 1 })
        );
        let silent = pi3(silent_l1());
        for t in 0..4 {
            assert_eq!(classify_event(&*silent, &net(params, &[2]), t).unwrap(), Event::Silent);
        }
        assert!(matches!(
            classify_event(&*round_robin(), &net(params, &[1]), 1),
            Err(Error::StageMismatch { .. })
        ));
    }

    #[test]
    fn marking_rules() {
        let params = p(2, 2);
        // L1 indices 0 of both components transmit together at t = 2
        let p0 = selfam_driven(params, SetFamily::new(2, vec![0b01]).unwrap()).unwrap();
        let p3 = pi3(p0);
        let base = net(params, &[1, 1]);
        assert_eq!(l1_transmitters(&*p3, &base, 3).unwrap()[1], vec![Label(1), Label(3)]);
        assert_eq!(mark_components(&*p3, &base, 3).unwrap(), BTreeSet::from([0, 1]));
        assert!(mark_components(&*pi3(silent_l1()), &base, 4).unwrap().is_empty());

        let single = pi3(round_robin());
        assert_eq!(
            mark_components(&*single, &net(params, &[2, 3]), 3).unwrap(),
            BTreeSet::from([0])
        );
    }

    #[test]
    fn membership_and_uniform_advice() {
        for (m, k, r) in [(2, 2, 3), (2, 2, 4), (2, 3, 3)] {
            let params = p(m, k);
            for p0 in [
                round_robin(),
                silent_l1(),
                selfam_driven(params, SetFamily::singletons(k)).unwrap(),
            ] {
                let p3 = pi3(p0);
                let res = run_prune(&*p3, r, params).unwrap();
                assert!(res.survivors.contains(&res.base_net));
                assert!(res.marked.len() as u64 <= 2 * (r - 1));
                for tv in &res.survivors {
                    assert!(membership(&*p3, tv, &res, params, r).unwrap());
                    let adv = make_advice(&*p3, &build_c2(params, tv).unwrap(), r).unwrap();
                    assert_eq!(adv, res.advice);
                }
                for tv in enumerate_c2(params).unwrap() {
                    if tv.agrees_on(&res.base_net, res.marked.iter().copied()) {
                        assert!(res.survivors.contains(&tv), "{tv} r={r}");
                    }
                }
            }
        }
    }

    #[test]
    fn differing_marked_component_is_excluded() {
        let params = p(2, 2);
        let p3 = pi3(round_robin());
        let res = run_prune(&*p3, 3, params).unwrap();
        let other = res.base_net.with_component(0, 2);
        assert!(!membership(&*p3, &other, &res, params, 3).unwrap());
    }

    #[test]
    fn r_one_keeps_family() {
        let params = p(2, 3);
        let res = run_prune(&*pi3(round_robin()), 1, params).unwrap();
        assert_eq!(res.survivors.len(), 49);
        assert!(res.event_seq.is_empty() && res.advice.is_empty());
    }
}
