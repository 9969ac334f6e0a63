//! Layered C2 networks: a source, `m` groups of `k` middle nodes, and one
//! bottom node per group wired to a nonempty subset of its group.
//!
//! Labels are canonical and shared by every network with the same
//! parameters:
//!
//! * source: `0`
//! * L1 node `j` of component `i`: `1 + i*k + j`
//! * L2 node of component `i`: `1 + m*k + i`
//!
//! Two networks with equal parameters therefore differ only in their
//! [`TopologyVector`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::radio::{Label, Network};

/// Default cap on the number of networks an enumeration may produce.
pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

/// Environment variable overriding [`DEFAULT_ENUM_CAP`].
pub const ENUM_CAP_ENV: &str = "RADIOLB_ENUM_CAP";

// tau must fit comfortably in a u64 bitmask
const MAX_K: usize = 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct C2Params {
    pub m: usize,
    pub k: usize,
}

impl C2Params {
    pub fn new(m: usize, k: usize) -> Result<Self> {
        if m == 0 || k == 0 || k > MAX_K {
            return Err(Error::InvalidParams { m, k });
        }
        Ok(C2Params { m, k })
    }

    pub fn node_count(&self) -> usize {
        1 + self.m * (self.k + 1)
    }

    /// Exclusive upper bound on a component topology, `2^k`.
    pub fn tau_limit(&self) -> u64 {
        1u64 << self.k
    }

    pub fn l1_label(&self, component: usize, index: usize) -> Label {
        debug_assert!(component < self.m && index < self.k);
        Label((1 + component * self.k + index) as u32)
    }

    pub fn l2_label(&self, component: usize) -> Label {
        debug_assert!(component < self.m);
        Label((1 + self.m * self.k + component) as u32)
    }

    /// All L1 labels, ascending.
    pub fn l1_labels(&self) -> Vec<Label> {
        (1..=self.m * self.k).map(|l| Label(l as u32)).collect()
    }

    pub fn component_l1_labels(&self, component: usize) -> Vec<Label> {
        (0..self.k).map(|j| self.l1_label(component, j)).collect()
    }

    /// `(2^k - 1)^m`, saturating.
    pub fn family_size(&self) -> u128 {
        let per = (self.tau_limit() - 1) as u128;
        let mut total: u128 = 1;
        for _ in 0..self.m {
            total = total.saturating_mul(per);
        }
        total
    }

    /// Splits an L1 label into `(component, index within component)`.
    pub fn l1_position(&self, label: Label) -> Option<(usize, usize)> {
        let l = label.0 as usize;
        if l >= 1 && l <= self.m * self.k {
            Some(((l - 1) / self.k, (l - 1) % self.k))
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Layer {
    L0,
    L1,
    L2,
}

impl Layer {
    pub fn index(self) -> u64 {
        match self {
            Layer::L0 => 0,
            Layer::L1 => 1,
            Layer::L2 => 2,
        }
    }
}

pub fn layer_of(label: Label, params: C2Params) -> Result<Layer> {
    let l = label.0 as usize;
    match l {
        0 => Ok(Layer::L0),
        _ if l <= params.m * params.k => Ok(Layer::L1),
        _ if l < params.node_count() => Ok(Layer::L2),
        _ => Err(Error::UnknownLabel(label)),
    }
}

pub fn component_of(label: Label, params: C2Params) -> Result<Option<usize>> {
    let l = label.0 as usize;
    match layer_of(label, params)? {
        Layer::L0 => Ok(None),
        Layer::L1 => Ok(Some((l - 1) / params.k)),
        Layer::L2 => Ok(Some(l - 1 - params.m * params.k)),
    }
}

/// Description of one BGI-component: its index and topology bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComponentDesc {
    pub component: usize,
    pub tau: u64,
}

impl fmt::Display for ComponentDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}:{}>", self.component, self.tau)
    }
}

/// One topology integer per component; bit `j` of entry `i` set iff L1 node
/// `j` of component `i` is wired to that component's L2 node.
///
/// Ordering is lexicographic over the entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TopologyVector(pub Vec<u64>);

impl TopologyVector {
    pub fn validate(&self, params: C2Params) -> Result<()> {
        if self.0.len() != params.m {
            return Err(Error::VectorLength {
                expected: params.m,
                found: self.0.len(),
            });
        }
        for (component, &tau) in self.0.iter().enumerate() {
            if tau == 0 || tau >= params.tau_limit() {
                return Err(Error::InvalidTau { component, tau });
            }
        }
        Ok(())
    }

    pub fn tau(&self, component: usize) -> u64 {
        self.0[component]
    }

    /// Copy of `self` with component `component` rewired to `tau`.
    pub fn with_component(&self, component: usize, tau: u64) -> TopologyVector {
        let mut taus = self.0.clone();
        taus[component] = tau;
        TopologyVector(taus)
    }

    /// Components on which `self` and `other` agree.
    pub fn agrees_on(&self, other: &TopologyVector, components: impl IntoIterator<Item = usize>) -> bool {
        components.into_iter().all(|i| self.0[i] == other.0[i])
    }
}

impl fmt::Display for TopologyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

pub fn build_c2(params: C2Params, tv: &TopologyVector) -> Result<Network> {
    tv.validate(params)?;
    let n = params.node_count();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..params.m {
        let y = params.l2_label(i).0 as usize;
        for j in 0..params.k {
            let x = params.l1_label(i, j).0 as usize;
            adj[0].push(x);
            adj[x].push(0);
            if tv.tau(i) >> j & 1 == 1 {
                adj[x].push(y);
                adj[y].push(x);
            }
        }
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    let labels = (0..n as u32).map(Label).collect();
    Ok(Network::from_parts(labels, adj, Some((params, tv.clone()))))
}

/// Reads [`ENUM_CAP_ENV`], falling back to [`DEFAULT_ENUM_CAP`].
pub fn enumeration_cap() -> u64 {
    std::env::var(ENUM_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ENUM_CAP)
}

pub fn enumerate_c2(params: C2Params) -> Result<Vec<TopologyVector>> {
    enumerate_c2_capped(params, enumeration_cap())
}

/// Every topology vector for `params`, in lexicographic order.
pub fn enumerate_c2_capped(params: C2Params, cap: u64) -> Result<Vec<TopologyVector>> {
    let count = params.family_size();
    if count > cap as u128 {
        return Err(Error::EnumerationTooLarge { count, cap });
    }
    let max = params.tau_limit() - 1;
    let mut out = Vec::with_capacity(count as usize);
    let mut cur = vec![1u64; params.m];
    loop {
        out.push(TopologyVector(cur.clone()));
        // odometer, last component fastest
        let mut pos = params.m;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            if cur[pos] < max {
                cur[pos] += 1;
                break;
            }
            cur[pos] = 1;
        }
    }
}

/// A C2 instance in its string form `c2:m=<m>,k=<k>,taus=<t0>,<t1>,...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct C2Spec {
    pub params: C2Params,
    pub topology: TopologyVector,
}

impl C2Spec {
    pub fn new(params: C2Params, topology: TopologyVector) -> Result<Self> {
        topology.validate(params)?;
        Ok(C2Spec { params, topology })
    }

    pub fn build(&self) -> Result<Network> {
        build_c2(self.params, &self.topology)
    }
}

impl fmt::Display for C2Spec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let taus: Vec<String> = self.topology.0.iter().map(u64::to_string).collect();
        write!(f, "c2:m={},k={},taus={}", self.params.m, self.params.k, taus.join(","))
    }
}

impl FromStr for C2Spec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad network encoding {s:?}"));
        let body = s.trim().strip_prefix("c2:").ok_or_else(bad)?;
        let rest = body.strip_prefix("m=").ok_or_else(bad)?;
        let (m, rest) = rest.split_once(",k=").ok_or_else(bad)?;
        let (k, taus) = rest.split_once(",taus=").ok_or_else(bad)?;
        let m: usize = parse_decimal(m).ok_or_else(bad)?;
        let k: usize = parse_decimal(k).ok_or_else(bad)?;
        let taus = taus
            .split(',')
            .map(|t| parse_decimal(t).ok_or_else(bad))
            .collect::<Result<Vec<u64>>>()?;
        let params = C2Params::new(m, k)?;
        C2Spec::new(params, TopologyVector(taus))
    }
}

// strict decimal: no sign, no whitespace, no empty string
fn parse_decimal<T: FromStr>(s: &str) -> Option<T> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}
