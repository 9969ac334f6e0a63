//! Synchronous round engine for the collision model.
//!
//! In every round each node transmits, listens, or stays inactive. A listener
//! receives a message iff exactly one of its neighbors transmits; silence and
//! collisions are both observed as [`Observation::Phi`]. Deliveries carry the
//! authenticated sender label.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::c2::{C2Params, TopologyVector};
use crate::error::{Error, Result};
use crate::protocol::{NodeView, Protocol, SourceInput};
use crate::reductions::AdviceString;

/// Payload the harness hands to the source on every run.
pub const PAYLOAD: &[u8] = b"mu";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub u32);

impl Label {
    pub const SOURCE: Label = Label(0);

    pub fn is_source(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Message {
    /// The broadcast message, optionally carrying an advice string.
    Payload {
        data: Vec<u8>,
        advice: Option<AdviceString>,
    },
    /// Description `<i, tau>` of one component.
    ComponentDesc(crate::c2::ComponentDesc),
    /// A message retransmitted verbatim together with its original sender.
    Relay {
        from: Label,
        inner: Box<Message>,
    },
    Opaque(Vec<u8>),
}

impl Message {
    /// The harness payload without advice.
    pub fn payload() -> Message {
        Message::Payload {
            data: PAYLOAD.to_vec(),
            advice: None,
        }
    }

    pub fn is_payload(&self) -> bool {
        matches!(self, Message::Payload { .. })
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Message::Payload { .. } => "mu",
            Message::ComponentDesc(_) => "comp",
            Message::Relay { .. } => "relay",
            Message::Opaque(_) => "opaque",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Observation {
    Received { from: Label, msg: Message },
    Phi,
}

impl Observation {
    pub fn message(&self) -> Option<&Message> {
        match self {
            Observation::Received { msg, .. } => Some(msg),
            Observation::Phi => None,
        }
    }

    pub fn is_received(&self) -> bool {
        matches!(self, Observation::Received { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Action {
    Transmit(Message),
    Listen,
    Inactive,
}

impl Action {
    pub fn is_transmit(&self) -> bool {
        matches!(self, Action::Transmit(_))
    }

    pub fn message(&self) -> Option<&Message> {
        match self {
            Action::Transmit(m) => Some(m),
            _ => None,
        }
    }
}

/// Undirected, connected, labeled graph. Node indices follow ascending label
/// order; adjacency lists hold indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    labels: Vec<Label>,
    adj: Vec<Vec<usize>>,
    c2: Option<(C2Params, TopologyVector)>,
}

impl Network {
    /// Builds a network from an explicit edge list. Label 0 must be present;
    /// the graph must be simple and connected.
    pub fn from_edges(labels: impl IntoIterator<Item = u32>, edges: &[(u32, u32)]) -> Result<Network> {
        let mut labels: Vec<Label> = labels.into_iter().map(Label).collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidNetwork("duplicate label".into()));
        }
        if labels.first() != Some(&Label::SOURCE) {
            return Err(Error::InvalidNetwork("label 0 (source) missing".into()));
        }
        let mut adj = vec![Vec::new(); labels.len()];
        let index = |l: u32| {
            labels
                .binary_search(&Label(l))
                .map_err(|_| Error::UnknownLabel(Label(l)))
        };
        for &(a, b) in edges {
            let (ia, ib) = (index(a)?, index(b)?);
            if ia == ib {
                return Err(Error::InvalidNetwork(format!("self-loop at {a}")));
            }
            if !adj[ia].contains(&ib) {
                adj[ia].push(ib);
                adj[ib].push(ia);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let net = Network { labels, adj, c2: None };
        if !net.is_connected() {
            return Err(Error::InvalidNetwork("graph is not connected".into()));
        }
        Ok(net)
    }

    pub(crate) fn from_parts(
        labels: Vec<Label>,
        adj: Vec<Vec<usize>>,
        c2: Option<(C2Params, TopologyVector)>,
    ) -> Network {
        Network { labels, adj, c2 }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn index_of(&self, label: Label) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    pub fn neighbors(&self, label: Label) -> Result<Vec<Label>> {
        let i = self.index_of(label).ok_or(Error::UnknownLabel(label))?;
        Ok(self.adj[i].iter().map(|&j| self.labels[j]).collect())
    }

    pub fn has_edge(&self, a: Label, b: Label) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.adj[i].binary_search(&j).is_ok(),
            _ => false,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(smaller, larger)` label pairs, sorted.
    pub fn adjacency(&self) -> Vec<(Label, Label)> {
        let mut edges = Vec::new();
        for (i, list) in self.adj.iter().enumerate() {
            for &j in list {
                if i < j {
                    edges.push((self.labels[i], self.labels[j]));
                }
            }
        }
        edges
    }

    pub fn is_connected(&self) -> bool {
        if self.labels.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(i) = queue.pop_front() {
            for &j in &self.adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn params(&self) -> Option<C2Params> {
        self.c2.as_ref().map(|(p, _)| *p)
    }

    pub fn topology(&self) -> Option<&TopologyVector> {
        self.c2.as_ref().map(|(_, tv)| tv)
    }

    pub fn view(&self, index: usize) -> NodeView {
        NodeView {
            label: self.labels[index],
            neighbors: self.adj[index].iter().map(|&j| self.labels[j]).collect(),
            params: self.params(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecord {
    pub round: u64,
    pub actions: BTreeMap<Label, Action>,
    pub deliveries: BTreeMap<Label, Observation>,
    /// Listeners with two or more transmitting neighbors. Nodes never see this.
    pub collided: BTreeSet<Label>,
}

impl RoundRecord {
    pub fn transmitters(&self) -> impl Iterator<Item = (Label, &Message)> {
        self.actions.iter().filter_map(|(l, a)| a.message().map(|m| (*l, m)))
    }
}

// Collision rule over index-addressed actions.
fn deliver(net: &Network, actions: &[Action]) -> (Vec<Observation>, Vec<bool>) {
    let mut obs = Vec::with_capacity(net.len());
    let mut collided = vec![false; net.len()];
    for (i, action) in actions.iter().enumerate() {
        if *action != Action::Listen {
            obs.push(Observation::Phi);
            continue;
        }
        let mut senders = net.adj[i].iter().filter(|&&j| actions[j].is_transmit());
        match (senders.next(), senders.next()) {
            (Some(&j), None) => obs.push(Observation::Received {
                from: net.labels[j],
                msg: actions[j].message().cloned().expect("transmitter has a message"),
            }),
            (Some(_), Some(_)) => {
                collided[i] = true;
                obs.push(Observation::Phi);
            }
            _ => obs.push(Observation::Phi),
        }
    }
    (obs, collided)
}

fn record(net: &Network, round: u64, actions: Vec<Action>, obs: &[Observation], collided: &[bool]) -> RoundRecord {
    let labels = &net.labels;
    RoundRecord {
        round,
        actions: labels.iter().copied().zip(actions).collect(),
        deliveries: labels.iter().copied().zip(obs.iter().cloned()).collect(),
        collided: labels
            .iter()
            .zip(collided)
            .filter(|(_, c)| **c)
            .map(|(l, _)| *l)
            .collect(),
    }
}

/// Executes one round of the collision model.
pub fn step_round(net: &Network, actions: &BTreeMap<Label, Action>, round: u64) -> Result<RoundRecord> {
    if let Some(l) = actions.keys().find(|l| net.index_of(**l).is_none()) {
        return Err(Error::UnknownLabel(*l));
    }
    let by_index = net
        .labels
        .iter()
        .map(|l| actions.get(l).cloned().ok_or(Error::MissingAction(*l)))
        .collect::<Result<Vec<_>>>()?;
    let (obs, collided) = deliver(net, &by_index);
    Ok(record(net, round, by_index, &obs, &collided))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Violation {
    NonSourceRoundZero(Label),
    Spontaneity { label: Label, round: u64 },
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Error {
        match v {
            Violation::NonSourceRoundZero(l) => Error::NonSourceRoundZero(l),
            Violation::Spontaneity { label, round } => Error::SpontaneityViolation { label, round },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace<'n> {
    pub network: &'n Network,
    pub rounds: Vec<RoundRecord>,
    /// First round in which each node held the broadcast payload.
    pub informed: BTreeMap<Label, u64>,
}

impl Trace<'_> {
    /// Recomputes the informed map from the round records alone.
    pub fn replay_informed(&self) -> BTreeMap<Label, u64> {
        let mut informed = BTreeMap::from([(Label::SOURCE, 0)]);
        for rec in &self.rounds {
            for (label, obs) in &rec.deliveries {
                if obs.message().is_some_and(Message::is_payload) {
                    informed.entry(*label).or_insert(rec.round);
                }
            }
        }
        informed
    }

    /// Labels of nodes that transmitted in `round`, ascending.
    pub fn transmitters(&self, round: u64) -> Vec<Label> {
        self.rounds
            .get(round as usize)
            .map(|r| r.transmitters().map(|(l, _)| l).collect())
            .unwrap_or_default()
    }

    /// First round in which `label` received any message.
    pub fn first_reception(&self, label: Label) -> Option<u64> {
        self.rounds
            .iter()
            .find(|r| r.deliveries.get(&label).is_some_and(Observation::is_received))
            .map(|r| r.round)
    }
}

/// Smallest `r` such that every node holds the payload by round `r - 1`.
pub fn completion_round(trace: &Trace<'_>) -> Option<u64> {
    if trace.informed.len() < trace.network.len() {
        return None;
    }
    trace.informed.values().max().map(|r| r + 1)
}

/// Runs `proto` for `max_rounds` rounds, giving the source whatever the
/// protocol's setup derives from the network.
pub fn run<'n>(net: &'n Network, proto: &dyn Protocol, max_rounds: u64) -> Result<Trace<'n>> {
    let input = proto.setup(net, max_rounds)?;
    run_with_input(net, proto, max_rounds, input.as_ref())
}

/// Runs `proto` with an explicit private input for the source.
pub fn run_with_input<'n>(
    net: &'n Network,
    proto: &dyn Protocol,
    max_rounds: u64,
    input: Option<&SourceInput>,
) -> Result<Trace<'n>> {
    let (trace, _) = execute(net, proto, max_rounds, input, true)?;
    Ok(trace)
}

/// Runs to completion, collecting legality violations instead of failing.
/// Offending transmissions are replaced by `Listen`.
pub(crate) fn run_collecting<'n>(
    net: &'n Network,
    proto: &dyn Protocol,
    max_rounds: u64,
    input: Option<&SourceInput>,
) -> Result<(Trace<'n>, Vec<Violation>)> {
    execute(net, proto, max_rounds, input, false)
}

fn execute<'n>(
    net: &'n Network,
    proto: &dyn Protocol,
    max_rounds: u64,
    input: Option<&SourceInput>,
    strict: bool,
) -> Result<(Trace<'n>, Vec<Violation>)> {
    let mut procs: Vec<_> = (0..net.len())
        .map(|i| {
            let view = net.view(i);
            let own_input = if view.label.is_source() { input } else { None };
            proto.spawn(&view, own_input)
        })
        .collect();
    let mut heard = vec![false; net.len()];
    let mut informed = BTreeMap::from([(Label::SOURCE, 0)]);
    let mut violations = Vec::new();
    let mut rounds = Vec::with_capacity(max_rounds as usize);

    for round in 0..max_rounds {
        let mut actions: Vec<Action> = procs.iter_mut().map(|p| p.act()).collect();
        for (i, action) in actions.iter_mut().enumerate() {
            let label = net.labels[i];
            if !action.is_transmit() || label.is_source() {
                continue;
            }
            let v = if round == 0 {
                Violation::NonSourceRoundZero(label)
            } else if !heard[i] {
                Violation::Spontaneity { label, round }
            } else {
                continue;
            };
            if strict {
                return Err(v.into());
            }
            violations.push(v);
            *action = Action::Listen;
        }
        let (obs, collided) = deliver(net, &actions);
        for (i, o) in obs.iter().enumerate() {
            if let Some(msg) = o.message() {
                heard[i] = true;
                if msg.is_payload() {
                    informed.entry(net.labels[i]).or_insert(round);
                }
            }
            procs[i].observe(o);
        }
        rounds.push(record(net, round, actions, &obs, &collided));
    }

    Ok((
        Trace {
            network: net,
            rounds,
            informed,
        },
        violations,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Network {
        Network::from_edges([0, 1, 2], &[(0, 1), (1, 2)]).unwrap()
    }

    fn acts(list: &[(u32, Action)]) -> BTreeMap<Label, Action> {
        list.iter().map(|(l, a)| (Label(*l), a.clone())).collect()
    }

    #[test]
    fn two_transmitters_collide() {
        let net = path3();
        let m = Message::payload();
        let rec = step_round(
            &net,
            &acts(&[
                (0, Action::Transmit(m.clone())),
                (1, Action::Listen),
                (2, Action::Transmit(m)),
            ]),
            1,
        )
        .unwrap();
        assert_eq!(rec.deliveries[&Label(1)], Observation::Phi);
        assert!(rec.collided.contains(&Label(1)));
        assert_eq!(rec.collided.len(), 1);
    }

    #[test]
    fn single_transmitter_delivers_with_sender() {
        let net = Network::from_edges([0, 1, 2], &[(0, 1), (0, 2)]).unwrap();
        let m = Message::Opaque(vec![7]);
        let rec = step_round(
            &net,
            &acts(&[
                (1, Action::Transmit(m.clone())),
                (0, Action::Listen),
                (2, Action::Inactive),
            ]),
            3,
        )
        .unwrap();
        assert_eq!(
            rec.deliveries[&Label(0)],
            Observation::Received { from: Label(1), msg: m }
        );
        assert_eq!(rec.deliveries[&Label(1)], Observation::Phi);
        assert_eq!(rec.deliveries[&Label(2)], Observation::Phi);
        assert!(rec.collided.is_empty());
    }

    #[test]
    fn silence_everywhere() {
        let net = path3();
        let rec = step_round(
            &net,
            &acts(&[(0, Action::Listen), (1, Action::Listen), (2, Action::Listen)]),
            0,
        )
        .unwrap();
        assert!(rec.deliveries.values().all(|o| *o == Observation::Phi));
        assert!(rec.collided.is_empty());
    }

    #[test]
    fn inactive_node_does_not_receive() {
        let net = path3();
        let rec = step_round(
            &net,
            &acts(&[
                (0, Action::Transmit(Message::payload())),
                (1, Action::Inactive),
                (2, Action::Listen),
            ]),
            0,
        )
        .unwrap();
        assert_eq!(rec.deliveries[&Label(1)], Observation::Phi);
    }

    #[test]
    fn unknown_and_missing_labels() {
        let net = path3();
        let err = step_round(
            &net,
            &acts(&[(0, Action::Listen), (1, Action::Listen), (9, Action::Listen)]),
            0,
        );
        assert_eq!(err.unwrap_err(), Error::UnknownLabel(Label(9)));
        let err = step_round(&net, &acts(&[(0, Action::Listen), (1, Action::Listen)]), 0);
        assert_eq!(err.unwrap_err(), Error::MissingAction(Label(2)));
    }

    #[test]
    fn from_edges_validation() {
        assert!(Network::from_edges([1, 2], &[(1, 2)]).is_err());
        assert!(Network::from_edges([0, 1, 2], &[(0, 1)]).is_err());
        assert!(Network::from_edges([0, 1], &[(0, 0), (0, 1)]).is_err());
        assert_eq!(
            Network::from_edges([0, 1], &[(0, 5)]).unwrap_err(),
            Error::UnknownLabel(Label(5))
        );
        let net = Network::from_edges([0, 7, 3], &[(0, 7), (7, 3)]).unwrap();
        assert_eq!(net.labels(), &[Label(0), Label(3), Label(7)]);
        assert_eq!(net.neighbors(Label(7)).unwrap(), vec![Label(0), Label(3)]);
        assert!(net.has_edge(Label(3), Label(7)));
        assert!(net.params().is_none());
    }
}
