//! Deterministic broadcast protocols.
//!
//! A protocol decides each node's action from its [`ProtocolContext`]: its own
//! label, its neighbors' labels, the round number and everything it has
//! observed so far. For execution the engine [`spawn`](Protocol::spawn)s one
//! [`NodeProcess`] per node and drives it round by round; [`step`] replays a
//! fresh process over a context's history, so both views always agree.

use std::fmt;
use std::sync::Arc;

use crate::c2::{self, C2Params, Layer, TopologyVector};
use crate::error::{Error, Result};
use crate::radio::{self, Action, Label, Message, Network, Observation, Violation};
use crate::reductions::{AdviceString, Stage};
use crate::selective::SetFamily;

/// The initial input of a node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodeView {
    pub label: Label,
    /// Sorted ascending.
    pub neighbors: Vec<Label>,
    /// Public family parameters; `None` outside the C2 family.
    pub params: Option<C2Params>,
}

impl NodeView {
    pub fn layer(&self) -> Option<Layer> {
        self.params.and_then(|p| c2::layer_of(self.label, p).ok())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProtocolContext {
    pub own_label: Label,
    pub neighbor_labels: Vec<Label>,
    pub round: u64,
    /// Observation of every earlier round; `history.len() == round`.
    pub history: Vec<Observation>,
    pub params: Option<C2Params>,
}

impl ProtocolContext {
    pub fn new(view: &NodeView) -> Self {
        ProtocolContext {
            own_label: view.label,
            neighbor_labels: view.neighbors.clone(),
            round: 0,
            history: Vec::new(),
            params: view.params,
        }
    }

    pub fn view(&self) -> NodeView {
        NodeView {
            label: self.own_label,
            neighbors: self.neighbor_labels.clone(),
            params: self.params,
        }
    }

    pub fn layer(&self) -> Option<Layer> {
        self.params.and_then(|p| c2::layer_of(self.own_label, p).ok())
    }

    /// Whether the node holds the broadcast payload.
    pub fn informed(&self) -> bool {
        self.own_label.is_source()
            || self
                .history
                .iter()
                .any(|o| o.message().is_some_and(Message::is_payload))
    }

    fn push(&mut self, obs: &Observation) {
        self.history.push(obs.clone());
        self.round += 1;
    }
}

/// Private input handed to the source during setup. Ordinary nodes never see
/// it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SourceInput {
    Topology(TopologyVector),
    Advice(AdviceString),
}

/// One node's running copy of a protocol.
///
/// The driver calls [`act`](NodeProcess::act) once at the start of every round
/// and then [`observe`](NodeProcess::observe) with that round's observation.
pub trait NodeProcess {
    fn act(&mut self) -> Action;
    fn observe(&mut self, obs: &Observation);
}

pub trait Protocol: Send + Sync {
    fn name(&self) -> String;

    fn stage(&self) -> Stage {
        Stage::Pi0
    }

    fn spawn(&self, view: &NodeView, input: Option<&SourceInput>) -> Box<dyn NodeProcess + '_>;

    /// Private input for the source on `net`, for a run of `rounds` rounds.
    fn setup(&self, _net: &Network, _rounds: u64) -> Result<Option<SourceInput>> {
        Ok(None)
    }
}

pub type ProtocolRef = Arc<dyn Protocol>;

impl fmt::Debug for dyn Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Protocol({}, {})", self.name(), self.stage())
    }
}

/// The action `proto` takes in `ctx`. Pure: replays a fresh node process over
/// the context's history.
pub fn step(proto: &dyn Protocol, ctx: &ProtocolContext, input: Option<&SourceInput>) -> Action {
    let mut node = proto.spawn(&ctx.view(), input);
    for obs in &ctx.history {
        node.act();
        node.observe(obs);
    }
    node.act()
}

type StepFn = dyn Fn(&ProtocolContext) -> Action + Send + Sync;

/// A protocol given directly as a function of the context.
pub struct FnProtocol {
    name: String,
    f: Box<StepFn>,
}

impl FnProtocol {
    pub fn new(name: impl Into<String>, f: impl Fn(&ProtocolContext) -> Action + Send + Sync + 'static) -> Self {
        FnProtocol {
            name: name.into(),
            f: Box::new(f),
        }
    }

    pub fn into_ref(self) -> ProtocolRef {
        Arc::new(self)
    }
}

struct FnNode<'a> {
    f: &'a StepFn,
    ctx: ProtocolContext,
}

impl NodeProcess for FnNode<'_> {
    fn act(&mut self) -> Action {
        (self.f)(&self.ctx)
    }

    fn observe(&mut self, obs: &Observation) {
        self.ctx.push(obs);
    }
}

impl Protocol for FnProtocol {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn spawn(&self, view: &NodeView, _input: Option<&SourceInput>) -> Box<dyn NodeProcess + '_> {
        Box::new(FnNode {
            f: &*self.f,
            ctx: ProtocolContext::new(view),
        })
    }
}

fn source_round_zero(ctx: &ProtocolContext) -> Action {
    if ctx.round == 0 {
        Action::Transmit(Message::payload())
    } else {
        Action::Listen
    }
}

/// Source sends the payload in round 0; the L1 node labelled `l` relays it in
/// round `l`; L2 nodes only listen.
///
/// Outside the C2 family every non-source node behaves like an L1 node.
pub fn round_robin() -> ProtocolRef {
    FnProtocol::new("round-robin", |ctx| {
        if ctx.own_label.is_source() {
            return source_round_zero(ctx);
        }
        if ctx.layer() == Some(Layer::L2) {
            return Action::Listen;
        }
        if ctx.round == ctx.own_label.0 as u64 && ctx.informed() {
            Action::Transmit(Message::payload())
        } else {
            Action::Listen
        }
    })
    .into_ref()
}

/// Only the source's round-0 transmission ever happens.
pub fn silent_l1() -> ProtocolRef {
    FnProtocol::new("silent", |ctx| {
        if ctx.own_label.is_source() {
            source_round_zero(ctx)
        } else {
            Action::Listen
        }
    })
    .into_ref()
}

/// L1 node with index `j` inside its component transmits in round `t >= 1`
/// iff `j` is in the family's set `t - 1`.
pub fn selfam_driven(params: C2Params, fam: SetFamily) -> Result<ProtocolRef> {
    if fam.universe() != params.k {
        return Err(Error::IndexOutOfUniverse {
            expected: params.k,
            found: fam.universe(),
        });
    }
    let name = format!("selfam[{}]", fam.describe());
    Ok(FnProtocol::new(name, move |ctx| {
        if ctx.own_label.is_source() {
            return source_round_zero(ctx);
        }
        let Some((_, j)) = ctx.params.and_then(|p| p.l1_position(ctx.own_label)) else {
            return Action::Listen;
        };
        let scheduled = ctx.round >= 1 && fam.sets().get(ctx.round as usize - 1).is_some_and(|s| s >> j & 1 == 1);
        if scheduled && ctx.informed() {
            Action::Transmit(Message::payload())
        } else {
            Action::Listen
        }
    })
    .into_ref())
}

/// Every legality violation of a full `max_rounds` run. Offending
/// transmissions are suppressed so the run can continue.
pub fn check_legality(proto: &dyn Protocol, net: &Network, max_rounds: u64) -> Result<Vec<Violation>> {
    let input = proto.setup(net, max_rounds)?;
    let (_, violations) = radio::run_collecting(net, proto, max_rounds, input.as_ref())?;
    Ok(violations)
}

/// Resolves a registry name: `round-robin`, `silent`, or
/// `selfam:<family-file>`.
pub fn resolve(name: &str, params: C2Params) -> Result<ProtocolRef> {
    match name {
        "round-robin" => Ok(round_robin()),
        "silent" => Ok(silent_l1()),
        _ => match name.strip_prefix("selfam:") {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                selfam_driven(params, text.parse()?)
            }
            None => Err(Error::UnknownProtocol(name.to_string())),
        },
    }
}
