//! Broadcast in synchronous radio networks with collisions, and the machinery
//! for building lower-bound witnesses on layered C2 networks.
//!
//! Start with [`radio`] for the model, [`protocol`] for writing protocols and
//! [`c2`] for the network family. [`reductions`], [`prune`] and [`adversary`]
//! turn a protocol and a round budget into a concrete network it cannot
//! finish; [`selective`] covers the combinatorics behind the bound.

pub mod adversary;
pub mod c2;
pub mod cli;
pub mod error;
pub mod protocol;
pub mod prune;
pub mod radio;
pub mod reductions;
pub mod selective;

pub use adversary::{cross_check, derive_family, find_witness, run_adversary, DerivedFamily, Witness};
pub use c2::{build_c2, enumerate_c2, C2Params, C2Spec, ComponentDesc, TopologyVector};
pub use error::{Error, Result};
pub use protocol::{round_robin, selfam_driven, silent_l1, FnProtocol, Protocol, ProtocolContext, ProtocolRef};
pub use prune::{run_prune, Event, PruneResult};
pub use radio::{completion_round, run, step_round, Action, Label, Message, Network, Observation, Trace};
pub use reductions::{ladder, make_advice, to_pi1, to_pi2, to_pi3, to_pi4, AdviceString, Stage};
pub use selective::SetFamily;
