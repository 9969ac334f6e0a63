//! Witness search: given a protocol and a round budget, find a C2 network on
//! which it fails to complete broadcast.
//!
//! The pipeline lifts the protocol to `Π3`, prunes the family, and rewires a
//! free component `i` of the chosen base network to every nonempty `Z` of its
//! L1 nodes. Running the advised `Π4` protocol on those variants yields the
//! derived family `F_j = { x : x transmits in round 3j+1 before y hears
//! anything }`; a `Z` that no `F_j` selects leaves `y` uninformed.

use rayon::prelude::*;

use crate::c2::{build_c2, enumerate_c2, C2Params, C2Spec, TopologyVector};
use crate::error::{Error, Result};
use crate::protocol::{Protocol, ProtocolRef, SourceInput};
use crate::prune::{run_prune, PruneResult};
use crate::radio::{self, completion_round};
use crate::reductions::{ladder, require, Stage};
use crate::selective::{elements, subsets_lex, SetFamily};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedFamily {
    pub component: usize,
    /// `F_0 .. F_{r-1}` over the component's L1 indices.
    pub sets: Vec<u64>,
    /// `(Z, first round y received anything)`, `Z` in lexicographic order.
    pub first_success: Vec<(u64, Option<u64>)>,
}

impl DerivedFamily {
    pub fn as_set_family(&self, k: usize) -> SetFamily {
        SetFamily::new(k, self.sets.clone()).expect("derived sets lie in [k]")
    }

    /// Smallest `Z` on which `y` heard nothing.
    pub fn first_unhit(&self) -> Option<u64> {
        self.first_success.iter().find(|(_, s)| s.is_none()).map(|(z, _)| *z)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub network: TopologyVector,
    pub unhit_z: Vec<usize>,
    pub component: usize,
    /// Rounds of the original protocol.
    pub budget: u64,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversaryReport {
    pub prune: PruneResult,
    /// Absent when every component is marked.
    pub family: Option<DerivedFamily>,
    pub witness: Option<Witness>,
}

pub fn derive_family(p4: &dyn Protocol, pr: &PruneResult, i: usize, r: u64, params: C2Params) -> Result<DerivedFamily> {
    require(p4, Stage::Pi4)?;
    if pr.free_component != Some(i) {
        return Err(Error::FreeComponentMissing);
    }
    let y = params.l2_label(i);
    let input = SourceInput::Advice(pr.advice.clone());
    let per_z: Vec<(u64, Vec<u64>, Option<u64>)> = subsets_lex(params.k, params.k)
        .into_par_iter()
        .map(|z| {
            let net = build_c2(params, &pr.base_net.with_component(i, z))?;
            let trace = radio::run_with_input(&net, p4, 3 * r, Some(&input))?;
            let first = trace.first_reception(y);
            let mut fired = vec![0u64; r as usize];
            for (j, f) in fired.iter_mut().enumerate() {
                let round = 3 * j as u64 + 1;
                if first.is_some_and(|s| s < round) {
                    continue;
                }
                let senders = trace.transmitters(round);
                for (idx, x) in params.component_l1_labels(i).into_iter().enumerate() {
                    if z >> idx & 1 == 1 && senders.contains(&x) {
                        *f |= 1 << idx;
                    }
                }
            }
            Ok((z, fired, first))
        })
        .collect::<Result<_>>()?;

    let mut sets = vec![0u64; r as usize];
    for (_, fired, _) in &per_z {
        for (s, f) in sets.iter_mut().zip(fired) {
            *s |= f;
        }
    }
    Ok(DerivedFamily {
        component: i,
        sets,
        first_success: per_z.into_iter().map(|(z, _, first)| (z, first)).collect(),
    })
}

/// True iff `p0` run directly on the witness network for the budget leaves
/// some node uninformed.
pub fn cross_check(p0: &dyn Protocol, w: &Witness, params: C2Params) -> bool {
    let Ok(net) = build_c2(params, &w.network) else {
        return false;
    };
    radio::run(&net, p0, w.budget).is_ok_and(|t| completion_round(&t).is_none())
}

/// Whether `p0` completes within `r` rounds on every network of the family.
pub fn completes_everywhere(p0: &dyn Protocol, r: u64, params: C2Params) -> Result<bool> {
    let family = enumerate_c2(params)?;
    family
        .par_iter()
        .try_fold(
            || true,
            |ok, tv| {
                let net = build_c2(params, tv)?;
                Ok(ok && completion_round(&radio::run(&net, p0, r)?).is_some())
            },
        )
        .try_reduce(|| true, |a, b| Ok(a && b))
}

pub fn run_adversary(p0: ProtocolRef, r: u64, params: C2Params) -> Result<AdversaryReport> {
    let [p0, _, _, p3, p4] = ladder(p0)?;
    let prune = run_prune(&*p3, r, params)?;
    let Some(i) = prune.free_component else {
        // nothing left to rewire; only a protocol that never fails escapes
        return if completes_everywhere(&*p0, r, params)? {
            Ok(AdversaryReport {
                prune,
                family: None,
                witness: None,
            })
        } else {
            Err(Error::FreeComponentMissing)
        };
    };
    let family = derive_family(&*p4, &prune, i, r, params)?;
    let witness = match family.first_unhit() {
        None => None,
        Some(z) => {
            let mut w = Witness {
                network: prune.base_net.with_component(i, z),
                unhit_z: elements(z),
                component: i,
                budget: r,
                verified: false,
            };
            w.verified = cross_check(&*p0, &w, params);
            if !w.verified {
                return Err(Error::UnverifiedWitness {
                    network: C2Spec::new(params, w.network)?.to_string(),
                });
            }
            Some(w)
        }
    };
    Ok(AdversaryReport {
        prune,
        family: Some(family),
        witness,
    })
}

pub fn find_witness(p0: ProtocolRef, r: u64, params: C2Params) -> Result<Option<Witness>> {
    run_adversary(p0, r, params).map(|rep| rep.witness)
}
