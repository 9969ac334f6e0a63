use std::collections::BTreeSet;

use proptest::prelude::*;

use radiolb::adversary::{cross_check, run_adversary};
use radiolb::c2::C2Spec;
use radiolb::protocol::{check_legality, step, ProtocolContext};
use radiolb::prune::{membership, run_prune};
use radiolb::selective::is_selective;
use radiolb::{
    build_c2, completion_round, enumerate_c2, ladder, round_robin, run, selfam_driven, Action, C2Params, FnProtocol,
    Message, Network, Observation, ProtocolRef, SetFamily, TopologyVector,
};

fn family(k: usize, raw: &[u64]) -> SetFamily {
    SetFamily::new(k, raw.iter().map(|s| s & ((1 << k) - 1)).collect()).unwrap()
}

fn topology(m: usize, k: usize) -> impl Strategy<Value = TopologyVector> {
    proptest::collection::vec(1u64..(1 << k), m).prop_map(TopologyVector)
}

fn protocol(k: usize) -> impl Strategy<Value = SetFamily> {
    proptest::collection::vec(any::<u64>(), 0..5).prop_map(move |raw| family(k, &raw))
}

/// Connected graph on `0..n` from a parent list and extra edges.
fn graph(parents: &[u32], extra: &[(u32, u32)]) -> Network {
    let n = parents.len() as u32 + 1;
    let mut edges: BTreeSet<(u32, u32)> = parents
        .iter()
        .enumerate()
        .map(|(i, p)| (p % (i as u32 + 1), i as u32 + 1))
        .collect();
    edges.extend(extra.iter().map(|&(a, b)| (a % n, b % n)).filter(|(a, b)| a < b));
    Network::from_edges(0..n, &edges.into_iter().collect::<Vec<_>>()).unwrap()
}

/// Legal but erratic: a node that has heard anything transmits on a
/// pseudo-random schedule keyed by `seed`.
fn erratic(seed: u64) -> FnProtocol {
    FnProtocol::new("erratic", move |ctx| {
        let h = (seed ^ (ctx.own_label.0 as u64) << 32 ^ ctx.round).wrapping_mul(0x9e37_79b9_7f4a_7c15) >> 61;
        let heard = ctx.history.iter().any(Observation::is_received);
        let first = ctx.own_label.is_source() && ctx.round == 0;
        if first || (heard && h < 3) {
            Action::Transmit(Message::Opaque(vec![ctx.own_label.0 as u8, ctx.round as u8]))
        } else if ctx.informed() && heard && h == 3 {
            Action::Transmit(Message::payload())
        } else if h == 4 {
            Action::Inactive
        } else {
            Action::Listen
        }
    })
}

fn driven(params: C2Params, fam: SetFamily) -> ProtocolRef {
    selfam_driven(params, fam).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn engine_properties(
        parents in proptest::collection::vec(any::<u32>(), 1..9),
        extra in proptest::collection::vec((any::<u32>(), any::<u32>()), 0..8),
        seed in any::<u64>(),
    ) {
        let net = graph(&parents, &extra);
        let proto = erratic(seed);
        let t = run(&net, &proto, 12).unwrap();
        prop_assert_eq!(&t, &run(&net, &proto, 12).unwrap());
        prop_assert_eq!(&t.informed, &t.replay_informed());
        for rec in &t.rounds {
            for (l, obs) in &rec.deliveries {
                let senders = net.neighbors(*l).unwrap().into_iter().filter(|u| rec.actions[u].is_transmit()).count();
                match obs {
                    Observation::Received { from, msg } => {
                        prop_assert!(net.has_edge(*l, *from));
                        prop_assert_eq!(rec.actions[from].message(), Some(msg));
                        prop_assert_eq!(senders, 1);
                    }
                    // zero and several senders look the same to the listener
                    Observation::Phi => prop_assert!(senders != 1 || rec.actions[l] != Action::Listen),
                }
                prop_assert_eq!(rec.collided.contains(l), senders >= 2 && rec.actions[l] == Action::Listen);
            }
        }
    }

    #[test]
    fn c2_string_round_trip(m in 1usize..4, k in 1usize..5, seed in any::<u64>()) {
        let params = C2Params::new(m, k).unwrap();
        let tv = TopologyVector((0..m).map(|i| 1 + (seed >> (8 * i)) % ((1 << k) - 1)).collect());
        let spec = C2Spec::new(params, tv).unwrap();
        let again: C2Spec = spec.to_string().parse().unwrap();
        prop_assert_eq!(&again, &spec);
        let net = spec.build().unwrap();
        prop_assert!(net.is_connected());
        prop_assert_eq!(net.len(), 1 + m * (k + 1));
    }

    #[test]
    fn step_is_a_pure_replay(tv in topology(2, 3), fam in protocol(3)) {
        let params = C2Params::new(2, 3).unwrap();
        let net = build_c2(params, &tv).unwrap();
        for proto in ladder(driven(params, fam)).unwrap() {
            let t = run(&net, &*proto, 9).unwrap();
            for (idx, label) in net.labels().iter().enumerate() {
                let view = net.view(idx);
                let input = if label.is_source() { proto.setup(&net, 9).unwrap() } else { None };
                let mut ctx = ProtocolContext::new(&view);
                for rec in &t.rounds {
                    prop_assert_eq!(&step(&*proto, &ctx, input.as_ref()), &rec.actions[label]);
                    ctx.history.push(rec.deliveries[label].clone());
                    ctx.round += 1;
                }
            }
        }
    }

    #[test]
    fn ladder_preserves_completion(tv in topology(2, 3), fam in protocol(3)) {
        let params = C2Params::new(2, 3).unwrap();
        let net = build_c2(params, &tv).unwrap();
        let chain = ladder(driven(params, fam)).unwrap();
        let c = completion_round(&run(&net, &*chain[0], 8).unwrap());
        for proto in &chain[1..] {
            prop_assert!(check_legality(&**proto, &net, 24).unwrap().is_empty());
            let cs = completion_round(&run(&net, &**proto, 24).unwrap());
            match c {
                Some(c) => prop_assert!(cs.is_some_and(|cs| 3 * c - 2 <= cs && cs <= 3 * c), "{} {:?}", c, cs),
                None => prop_assert_eq!(cs, None),
            }
        }
    }

    #[test]
    fn marking_lemma_random_candidates(fam in protocol(3), r in 2u64..5, cand in topology(2, 3)) {
        let params = C2Params::new(2, 3).unwrap();
        let p3 = ladder(driven(params, fam)).unwrap()[3].clone();
        let res = run_prune(&*p3, r, params).unwrap();
        let mut agreeing = cand.clone();
        for &i in &res.marked {
            agreeing = agreeing.with_component(i, res.base_net.tau(i));
        }
        prop_assert!(membership(&*p3, &agreeing, &res, params, r).unwrap());
        prop_assert!(res.survivors.contains(&agreeing));
        if let Some(i) = res.free_component {
            for tau in 1..8 {
                prop_assert!(res.survivors.contains(&res.base_net.with_component(i, tau)));
            }
        }
    }

    #[test]
    fn witnesses_are_sound(wide in any::<bool>(), raw in proptest::collection::vec(any::<u64>(), 0..5), r in 1u64..5) {
        // (3,2) leaves a free component after a collision; (2,3) mostly does not
        let (m, k) = if wide { (3, 2) } else { (2, 3) };
        let params = C2Params::new(m, k).unwrap();
        let fam = family(k, &raw);
        let p0 = driven(params, fam);
        match run_adversary(p0.clone(), r, params) {
            Ok(rep) => {
                if let Some(w) = &rep.witness {
                    prop_assert!(w.verified && cross_check(&*p0, w, params));
                    prop_assert!(!rep.prune.marked.contains(&w.component));
                    prop_assert!(w.network.agrees_on(&rep.prune.base_net, (0..params.m).filter(|i| *i != w.component)));
                }
                if let (Some(f), None) = (&rep.family, &rep.witness) {
                    // completeness: every variant of the free component finishes directly
                    for tau in 1..1 << k {
                        let net = build_c2(params, &rep.prune.base_net.with_component(f.component, tau)).unwrap();
                        prop_assert!(completion_round(&run(&net, &*p0, r).unwrap()).is_some());
                    }
                    // selectivity: the derived family selects every Z
                    prop_assert!(is_selective(&f.as_set_family(k), k, k).unwrap().holds());
                }
            }
            Err(radiolb::Error::FreeComponentMissing) => {
                let all = enumerate_c2(params).unwrap().iter().all(|tv| {
                    let net: Network = build_c2(params, tv).unwrap();
                    completion_round(&run(&net, &*p0, r).unwrap()).is_some()
                });
                prop_assert!(!all);
            }
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}

#[test]
fn round_robin_witness_budgets() {
    let params = C2Params::new(2, 4).unwrap();
    for r in 1..=4 {
        let rep = run_adversary(round_robin(), r, params).unwrap();
        let w = rep.witness.expect("round-robin needs more than four rounds at k = 4");
        assert!(cross_check(&*round_robin(), &w, params));
    }
}
