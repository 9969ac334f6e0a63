//! Protocol transformers for the C2 family.
//!
//! Each transformer wraps a protocol and returns one that completes broadcast
//! on every C2 network exactly when the wrapped one does, with each original
//! round stretched over three:
//!
//! * [`to_pi1`]: layer `L` transmits only in rounds `≡ L (mod 3)`; round `t`
//!   of the original runs in rounds `3t..3t+2`.
//! * [`to_pi2`]: the source merely echoes, in round `3t`, whatever it heard in
//!   round `3t-2`. L1 nodes rebuild the original source's behavior from the
//!   echoes.
//! * [`to_pi3`]: the source is told the topology and sends only `<i, tau>`
//!   for the component of a lone transmitter (or nothing). L1 nodes recover the
//!   echoed message by replaying component `i` locally.
//! * [`to_pi4`]: the source transmits once, in round 0, the payload plus an
//!   [`AdviceString`] listing its `Π3` transmissions; L1 nodes read the advice
//!   instead of listening.
//!
//! All replicas advance incrementally alongside the real node, so a run costs
//! a constant factor per nesting level rather than a full re-simulation each
//! round.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::c2::{self, C2Params, ComponentDesc, Layer};
use crate::error::{Error, Result};
use crate::protocol::{NodeProcess, NodeView, Protocol, ProtocolRef, SourceInput};
use crate::radio::{self, Action, Label, Message, Network, Observation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stage {
    Pi0,
    Pi1,
    Pi2,
    Pi3,
    Pi4,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self {
            Stage::Pi0 => 0,
            Stage::Pi1 => 1,
            Stage::Pi2 => 2,
            Stage::Pi3 => 3,
            Stage::Pi4 => 4,
        };
        write!(f, "pi{n}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AdviceEntry {
    Phi,
    Desc(ComponentDesc),
}

impl fmt::Display for AdviceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdviceEntry::Phi => f.write_str("phi"),
            AdviceEntry::Desc(d) => write!(f, "{d}"),
        }
    }
}

/// Source transmissions in rounds `3t`, for `t = 1..r-1`.
///
/// Encoded as `adv:` followed by comma-separated entries, each `phi` or
/// `<i:tau>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AdviceString(pub Vec<AdviceEntry>);

impl AdviceString {
    /// Entry for round `3t`; `Phi` outside the recorded range.
    pub fn entry(&self, t: u64) -> AdviceEntry {
        if t == 0 {
            return AdviceEntry::Phi;
        }
        self.0.get(t as usize - 1).copied().unwrap_or(AdviceEntry::Phi)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn descriptions(&self) -> impl Iterator<Item = ComponentDesc> + '_ {
        self.0.iter().filter_map(|e| match e {
            AdviceEntry::Desc(d) => Some(*d),
            AdviceEntry::Phi => None,
        })
    }
}

impl fmt::Display for AdviceString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("adv:")?;
        for (n, e) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for AdviceString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad advice encoding {s:?}"));
        let body = s.strip_prefix("adv:").ok_or_else(bad)?;
        if body.is_empty() {
            return Ok(AdviceString::default());
        }
        body.split(',')
            .map(|e| {
                if e == "phi" {
                    return Ok(AdviceEntry::Phi);
                }
                let inner = e.strip_prefix('<').and_then(|e| e.strip_suffix('>')).ok_or_else(bad)?;
                let (i, tau) = inner.split_once(':').ok_or_else(bad)?;
                let digits = |x: &str| !x.is_empty() && x.bytes().all(|b| b.is_ascii_digit());
                if !digits(i) || !digits(tau) {
                    return Err(bad());
                }
                Ok(AdviceEntry::Desc(ComponentDesc {
                    component: i.parse().map_err(|_| bad())?,
                    tau: tau.parse().map_err(|_| bad())?,
                }))
            })
            .collect::<Result<Vec<_>>>()
            .map(AdviceString)
    }
}

pub(crate) fn require(p: &dyn Protocol, expected: Stage) -> Result<()> {
    if p.stage() != expected {
        return Err(Error::StageMismatch {
            name: p.name(),
            expected,
            found: p.stage(),
        });
    }
    Ok(())
}

fn require_c2(net: &Network) -> Result<C2Params> {
    net.params().ok_or(Error::NotC2)
}

/// The source's initial input in every C2 network with `params`.
fn source_view(params: C2Params) -> NodeView {
    NodeView {
        label: Label::SOURCE,
        neighbors: params.l1_labels(),
        params: Some(params),
    }
}

fn layer_and_params(view: &NodeView) -> Option<(Layer, C2Params)> {
    Some((view.layer()?, view.params?))
}

fn heard(listening: bool, msg: Option<&Message>, from: Label) -> Observation {
    match msg {
        Some(m) if listening => Observation::Received { from, msg: m.clone() },
        _ => Observation::Phi,
    }
}

/// Stand-in for nodes that have no place in a C2 layout.
struct Idle;

impl NodeProcess for Idle {
    fn act(&mut self) -> Action {
        Action::Listen
    }

    fn observe(&mut self, _obs: &Observation) {}
}

// ---------------------------------------------------------------------------
// Π1: layer-phased rounds

struct LayerPhased {
    inner: ProtocolRef,
}

/// Wraps `p0` so that layer `L` transmits only in rounds `≡ L (mod 3)`.
pub fn to_pi1(p0: ProtocolRef) -> ProtocolRef {
    Arc::new(LayerPhased { inner: p0 })
}

struct PhasedNode<'a> {
    inner: Box<dyn NodeProcess + 'a>,
    slot: u64,
    round: u64,
    block: Action,
    heard: usize,
    last: Observation,
}

impl NodeProcess for PhasedNode<'_> {
    fn act(&mut self) -> Action {
        let phase = self.round % 3;
        if phase == 0 {
            self.block = self.inner.act();
            self.heard = 0;
            self.last = Observation::Phi;
        }
        match &self.block {
            Action::Transmit(m) if phase == self.slot => Action::Transmit(m.clone()),
            // a transmitter hears nothing for the whole simulated round
            Action::Transmit(_) | Action::Inactive => Action::Inactive,
            Action::Listen => Action::Listen,
        }
    }

    fn observe(&mut self, obs: &Observation) {
        if self.block == Action::Listen && obs.is_received() {
            self.heard += 1;
            self.last = obs.clone();
        }
        if self.round % 3 == 2 {
            // exactly one sender over the block ⇔ exactly one in the original round
            let sim = if self.block == Action::Listen && self.heard == 1 {
                self.last.clone()
            } else {
                Observation::Phi
            };
            self.inner.observe(&sim);
        }
        self.round += 1;
    }
}

impl Protocol for LayerPhased {
    fn name(&self) -> String {
        format!("pi1({})", self.inner.name())
    }

    fn stage(&self) -> Stage {
        Stage::Pi1
    }

    fn spawn(&self, view: &NodeView, input: Option<&SourceInput>) -> Box<dyn NodeProcess + '_> {
        match view.layer() {
            Some(layer) => Box::new(PhasedNode {
                inner: self.inner.spawn(view, input),
                slot: layer.index(),
                round: 0,
                block: Action::Listen,
                heard: 0,
                last: Observation::Phi,
            }),
            None => Box::new(Idle),
        }
    }

    fn setup(&self, net: &Network, rounds: u64) -> Result<Option<SourceInput>> {
        require_c2(net)?;
        self.inner.setup(net, rounds.div_ceil(3))
    }
}

// ---------------------------------------------------------------------------
// Π2: echoing source

struct SourceEcho {
    inner: ProtocolRef,
}

/// Replaces the source of a `Π1` protocol by one that only echoes.
pub fn to_pi2(p1: ProtocolRef) -> Result<ProtocolRef> {
    require(&*p1, Stage::Pi1)?;
    Ok(Arc::new(SourceEcho { inner: p1 }))
}

fn relay(from: Label, msg: &Message) -> Message {
    Message::Relay {
        from,
        inner: Box::new(msg.clone()),
    }
}

struct EchoSource<'a> {
    opening: Option<Box<dyn NodeProcess + 'a>>,
    round: u64,
    echo: Observation,
}

impl NodeProcess for EchoSource<'_> {
    fn act(&mut self) -> Action {
        if self.round == 0 {
            // round 0 is the original source's own opening move
            return match self.opening.take().map(|mut p| p.act()) {
                Some(Action::Transmit(m)) => Action::Transmit(m),
                _ => Action::Listen,
            };
        }
        match (&self.echo, self.round % 3) {
            (Observation::Received { from, msg }, 0) => Action::Transmit(relay(*from, msg)),
            _ => Action::Listen,
        }
    }

    fn observe(&mut self, obs: &Observation) {
        if self.round % 3 == 1 {
            self.echo = obs.clone();
        }
        self.round += 1;
    }
}

/// L1 node of `Π2`: keeps a replica of the `Π1` source fed from the echoes
/// and runs its own `Π1` copy on the reconstructed source transmissions.
struct EchoReader<'a> {
    own: Box<dyn NodeProcess + 'a>,
    own_action: Action,
    source: Box<dyn NodeProcess + 'a>,
    // action of the replica in the round whose observation it awaits
    source_action: Action,
    round: u64,
}

impl NodeProcess for EchoReader<'_> {
    fn act(&mut self) -> Action {
        self.own_action = self.own.act();
        if !self.round.is_multiple_of(3) {
            return self.own_action.clone();
        }
        if self.round == 0 {
            self.source_action = self.source.act();
        }
        Action::Listen
    }

    fn observe(&mut self, obs: &Observation) {
        if !self.round.is_multiple_of(3) {
            self.own.observe(obs);
            self.round += 1;
            return;
        }
        if self.round > 0 {
            // the echo reveals what the source heard in round-2
            let echoed = match obs.message() {
                Some(Message::Relay { from, inner }) if self.source_action == Action::Listen => Observation::Received {
                    from: *from,
                    msg: (**inner).clone(),
                },
                _ => Observation::Phi,
            };
            self.source.observe(&echoed);
            self.source.act();
            self.source.observe(&Observation::Phi);
            self.source_action = self.source.act();
        }
        let sim = heard(
            self.own_action == Action::Listen,
            self.source_action.message(),
            Label::SOURCE,
        );
        self.own.observe(&sim);
        self.source.observe(&Observation::Phi);
        self.source_action = self.source.act();
        self.round += 1;
    }
}

impl Protocol for SourceEcho {
    fn name(&self) -> String {
        format!("pi2({})", self.inner.name())
    }

    fn stage(&self) -> Stage {
        Stage::Pi2
    }

    fn spawn(&self, view: &NodeView, _input: Option<&SourceInput>) -> Box<dyn NodeProcess + '_> {
        let Some((layer, params)) = layer_and_params(view) else {
            return Box::new(Idle);
        };
        match layer {
            Layer::L0 => Box::new(EchoSource {
                opening: Some(self.inner.spawn(view, None)),
                round: 0,
                echo: Observation::Phi,
            }),
            Layer::L1 => Box::new(EchoReader {
                own: self.inner.spawn(view, None),
                own_action: Action::Listen,
                source: self.inner.spawn(&source_view(params), None),
                source_action: Action::Listen,
                round: 0,
            }),
            Layer::L2 => self.inner.spawn(view, None),
        }
    }

    fn setup(&self, net: &Network, _rounds: u64) -> Result<Option<SourceInput>> {
        require_c2(net)?;
        Ok(None)
    }
}

// ---------------------------------------------------------------------------
// Π3: component descriptions

struct Describing {
    inner: ProtocolRef,
}

/// Replaces the echo of a `Π2` protocol by the description `<i, tau>` of the
/// lone transmitter's component. The source receives the topology at setup.
pub fn to_pi3(p2: ProtocolRef) -> Result<ProtocolRef> {
    require(&*p2, Stage::Pi2)?;
    Ok(Arc::new(Describing { inner: p2 }))
}

struct DescribingSource<'a> {
    opening: Option<Box<dyn NodeProcess + 'a>>,
    topology: Option<c2::TopologyVector>,
    params: C2Params,
    round: u64,
    last: Observation,
}

impl NodeProcess for DescribingSource<'_> {
    fn act(&mut self) -> Action {
        if self.round == 0 {
            return match self.opening.take().map(|mut p| p.act()) {
                Some(Action::Transmit(m)) => Action::Transmit(m),
                _ => Action::Listen,
            };
        }
        if !self.round.is_multiple_of(3) {
            return Action::Listen;
        }
        let Observation::Received { from, .. } = &self.last else {
            return Action::Listen;
        };
        match (c2::component_of(*from, self.params), &self.topology) {
            (Ok(Some(component)), Some(tv)) => Action::Transmit(Message::ComponentDesc(ComponentDesc {
                component,
                tau: tv.tau(component),
            })),
            _ => Action::Listen,
        }
    }

    fn observe(&mut self, obs: &Observation) {
        if self.round % 3 == 1 {
            self.last = obs.clone();
        }
        self.round += 1;
    }
}

/// Local replay of one component under `Π2`, given the source's
/// transmissions.
struct ComponentReplica<'a> {
    tau: u64,
    y: Label,
    l1: Vec<(Label, Box<dyn NodeProcess + 'a>)>,
    l2: Box<dyn NodeProcess + 'a>,
    next_round: u64,
}

impl<'a> ComponentReplica<'a> {
    fn new(proto: &'a dyn Protocol, params: C2Params, component: usize, tau: u64) -> Self {
        let y = params.l2_label(component);
        let wired: Vec<Label> = (0..params.k)
            .filter(|j| tau >> j & 1 == 1)
            .map(|j| params.l1_label(component, j))
            .collect();
        let l1 = (0..params.k)
            .map(|j| {
                let label = params.l1_label(component, j);
                let mut neighbors = vec![Label::SOURCE];
                if tau >> j & 1 == 1 {
                    neighbors.push(y);
                }
                let view = NodeView {
                    label,
                    neighbors,
                    params: Some(params),
                };
                (label, proto.spawn(&view, None))
            })
            .collect();
        let l2 = proto.spawn(
            &NodeView {
                label: y,
                neighbors: wired,
                params: Some(params),
            },
            None,
        );
        ComponentReplica {
            tau,
            y,
            l1,
            l2,
            next_round: 0,
        }
    }

    /// Runs through `target` and returns the L1 transmitters of that round.
    /// `source_tx[s]` is the source's transmission in round `3s`.
    fn advance_to(&mut self, target: u64, source_tx: &[Option<Message>]) -> Vec<(Label, Message)> {
        let mut out = Vec::new();
        while self.next_round <= target {
            let round = self.next_round;
            let l1_actions: Vec<Action> = self.l1.iter_mut().map(|(_, p)| p.act()).collect();
            let l2_action = self.l2.act();
            let source = if round.is_multiple_of(3) {
                source_tx.get((round / 3) as usize).cloned().flatten()
            } else {
                None
            };
            for (j, (_, proc_)) in self.l1.iter_mut().enumerate() {
                let obs = if l1_actions[j] != Action::Listen {
                    Observation::Phi
                } else {
                    let from_l2 = (self.tau >> j & 1 == 1).then(|| l2_action.message()).flatten();
                    match (&source, from_l2) {
                        (Some(m), None) => Observation::Received {
                            from: Label::SOURCE,
                            msg: m.clone(),
                        },
                        (None, Some(m)) => Observation::Received {
                            from: self.y,
                            msg: m.clone(),
                        },
                        _ => Observation::Phi,
                    }
                };
                proc_.observe(&obs);
            }
            let l2_obs = if l2_action != Action::Listen {
                Observation::Phi
            } else {
                let mut senders = self
                    .l1
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| self.tau >> j & 1 == 1 && l1_actions[*j].is_transmit());
                match (senders.next(), senders.next()) {
                    (Some((j, (label, _))), None) => match l1_actions[j].message() {
                        Some(m) => Observation::Received {
                            from: *label,
                            msg: m.clone(),
                        },
                        None => Observation::Phi,
                    },
                    _ => Observation::Phi,
                }
            };
            self.l2.observe(&l2_obs);
            if round == target {
                out = self
                    .l1
                    .iter()
                    .zip(&l1_actions)
                    .filter_map(|((label, _), a)| a.message().map(|m| (*label, m.clone())))
                    .collect();
            }
            self.next_round += 1;
        }
        out
    }
}

/// L1 node of `Π3`: rebuilds each `Π2` echo from `<i, tau>` by replaying
/// component `i`, then runs its own `Π2` copy on the rebuilt transmissions.
struct DescListener<'a> {
    own: Box<dyn NodeProcess + 'a>,
    proto: &'a dyn Protocol,
    params: C2Params,
    // rebuilt `Π2` source transmission of round `3s`, at index `s`
    src_tx: Vec<Option<Message>>,
    replicas: Vec<Option<ComponentReplica<'a>>>,
    round: u64,
}

impl<'a> DescListener<'a> {
    fn recover(&mut self, d: ComponentDesc, t: u64) -> Option<Message> {
        if d.component >= self.params.m || d.tau == 0 || d.tau >= self.params.tau_limit() {
            return None;
        }
        let slot = &mut self.replicas[d.component];
        if slot.as_ref().is_none_or(|r| r.tau != d.tau) {
            *slot = Some(ComponentReplica::new(self.proto, self.params, d.component, d.tau));
        }
        let replica = slot.as_mut()?;
        let senders = replica.advance_to(3 * t - 2, &self.src_tx);
        match senders.as_slice() {
            [(from, msg)] => Some(relay(*from, msg)),
            _ => None,
        }
    }
}

impl NodeProcess for DescListener<'_> {
    fn act(&mut self) -> Action {
        self.own.act()
    }

    fn observe(&mut self, obs: &Observation) {
        if !self.round.is_multiple_of(3) {
            self.own.observe(obs);
            self.round += 1;
            return;
        }
        let t = self.round / 3;
        let rebuilt = if t == 0 {
            obs.message().cloned()
        } else {
            match obs.message() {
                Some(Message::ComponentDesc(d)) => self.recover(*d, t),
                _ => None,
            }
        };
        self.own.observe(&heard(true, rebuilt.as_ref(), Label::SOURCE));
        self.src_tx.push(rebuilt);
        self.round += 1;
    }
}

impl Protocol for Describing {
    fn name(&self) -> String {
        format!("pi3({})", self.inner.name())
    }

    fn stage(&self) -> Stage {
        Stage::Pi3
    }

    fn spawn(&self, view: &NodeView, input: Option<&SourceInput>) -> Box<dyn NodeProcess + '_> {
        let Some((layer, params)) = layer_and_params(view) else {
            return Box::new(Idle);
        };
        match layer {
            Layer::L0 => Box::new(DescribingSource {
                opening: Some(self.inner.spawn(view, None)),
                topology: match input {
                    Some(SourceInput::Topology(tv)) => Some(tv.clone()),
                    _ => None,
                },
                params,
                round: 0,
                last: Observation::Phi,
            }),
            Layer::L1 => Box::new(DescListener {
                own: self.inner.spawn(view, None),
                proto: &*self.inner,
                params,
                src_tx: Vec::new(),
                replicas: (0..params.m).map(|_| None).collect(),
                round: 0,
            }),
            Layer::L2 => self.inner.spawn(view, None),
        }
    }

    fn setup(&self, net: &Network, _rounds: u64) -> Result<Option<SourceInput>> {
        require_c2(net)?;
        Ok(net.topology().cloned().map(SourceInput::Topology))
    }
}

// ---------------------------------------------------------------------------
// Π4: one-shot advice

struct Advised {
    inner: ProtocolRef,
}

/// Replaces the `Π3` source by one that transmits only in round 0, attaching
/// its future descriptions as advice to the payload.
pub fn to_pi4(p3: ProtocolRef) -> Result<ProtocolRef> {
    require(&*p3, Stage::Pi3)?;
    Ok(Arc::new(Advised { inner: p3 }))
}

/// The advice a `Π3` source would emit over an `r`-round `Π0` horizon:
/// its transmissions in rounds `3t`, `t = 1..r-1`.
pub fn make_advice(p3: &dyn Protocol, net: &Network, r: u64) -> Result<AdviceString> {
    require(p3, Stage::Pi3)?;
    require_c2(net)?;
    if r <= 1 {
        return Ok(AdviceString::default());
    }
    let trace = radio::run(net, p3, 3 * (r - 1) + 1)?;
    (1..r)
        .map(|t| match &trace.rounds[3 * t as usize].actions[&Label::SOURCE] {
            Action::Transmit(Message::ComponentDesc(d)) => Ok(AdviceEntry::Desc(*d)),
            Action::Transmit(other) => Err(Error::NotInClass(other.tag().to_string())),
            _ => Ok(AdviceEntry::Phi),
        })
        .collect::<Result<Vec<_>>>()
        .map(AdviceString)
}

struct AdvisedSource<'a> {
    opening: Option<Box<dyn NodeProcess + 'a>>,
    advice: AdviceString,
}

impl NodeProcess for AdvisedSource<'_> {
    fn act(&mut self) -> Action {
        let Some(mut p) = self.opening.take() else {
            return Action::Listen;
        };
        match p.act() {
            Action::Transmit(Message::Payload { data, .. }) => Action::Transmit(Message::Payload {
                data,
                advice: Some(self.advice.clone()),
            }),
            Action::Transmit(m) => Action::Transmit(m),
            _ => Action::Listen,
        }
    }

    fn observe(&mut self, _obs: &Observation) {}
}

/// L1 node of `Π4`: reads the advice off the round-0 payload and replays it
/// to its own `Π3` copy in place of the source's later transmissions.
struct AdviceListener<'a> {
    own: Box<dyn NodeProcess + 'a>,
    advice: AdviceString,
    round: u64,
}

impl NodeProcess for AdviceListener<'_> {
    fn act(&mut self) -> Action {
        self.own.act()
    }

    fn observe(&mut self, obs: &Observation) {
        let sim = match (self.round, self.round % 3) {
            (0, _) => match obs {
                Observation::Received {
                    from,
                    msg: Message::Payload { data, advice },
                } => {
                    self.advice = advice.clone().unwrap_or_default();
                    Observation::Received {
                        from: *from,
                        msg: Message::Payload {
                            data: data.clone(),
                            advice: None,
                        },
                    }
                }
                other => other.clone(),
            },
            (r, 0) => match self.advice.entry(r / 3) {
                AdviceEntry::Desc(d) => Observation::Received {
                    from: Label::SOURCE,
                    msg: Message::ComponentDesc(d),
                },
                AdviceEntry::Phi => Observation::Phi,
            },
            _ => obs.clone(),
        };
        self.own.observe(&sim);
        self.round += 1;
    }
}

impl Protocol for Advised {
    fn name(&self) -> String {
        format!("pi4({})", self.inner.name())
    }

    fn stage(&self) -> Stage {
        Stage::Pi4
    }

    fn spawn(&self, view: &NodeView, input: Option<&SourceInput>) -> Box<dyn NodeProcess + '_> {
        let Some((layer, _)) = layer_and_params(view) else {
            return Box::new(Idle);
        };
        match layer {
            Layer::L0 => Box::new(AdvisedSource {
                opening: Some(self.inner.spawn(view, None)),
                advice: match input {
                    Some(SourceInput::Advice(a)) => a.clone(),
                    _ => AdviceString::default(),
                },
            }),
            Layer::L1 => Box::new(AdviceListener {
                own: self.inner.spawn(view, None),
                advice: AdviceString::default(),
                round: 0,
            }),
            Layer::L2 => self.inner.spawn(view, None),
        }
    }

    fn setup(&self, net: &Network, rounds: u64) -> Result<Option<SourceInput>> {
        let r = rounds.div_ceil(3).max(1);
        make_advice(&*self.inner, net, r).map(|a| Some(SourceInput::Advice(a)))
    }
}

/// `[Π0, Π1, Π2, Π3, Π4]` built from `p0`.
pub fn ladder(p0: ProtocolRef) -> Result<[ProtocolRef; 5]> {
    let p1 = to_pi1(p0.clone());
    let p2 = to_pi2(p1.clone())?;
    let p3 = to_pi3(p2.clone())?;
    let p4 = to_pi4(p3.clone())?;
    Ok([p0, p1, p2, p3, p4])
}
